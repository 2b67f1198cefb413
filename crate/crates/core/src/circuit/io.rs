//! Line-oriented JSON circuit format.
//!
//! ```text
//! {"wires":3,"ancilla":[]}
//! {"op":"h","wires":[0]}
//! {"op":"u","wires":[2],"matrix":[[0.5,0.0],[-0.8660254037844386,0.0],[0.8660254037844386,0.0],[0.5,0.0]]}
//! {"op":"squery","wires":[0,1,2]}
//! {"a_known":"0.25","address_wires":[0,1],"flag_wires":[2]}
//! ```
//!
//! Query records list the address wires followed by the target wire. The
//! optional trailing extension record describes a search algorithm.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{hadamard, Circuit, Gate, Matrix2, QueryStyle};
use crate::error::{bail, Error, Result};

#[derive(Serialize, Deserialize)]
struct Header {
    wires: usize,
    ancilla: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GateRecord {
    op: String,
    wires: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Extension {
    pub a_known: String,
    pub address_wires: Vec<usize>,
    pub flag_wires: Vec<usize>,
}

fn record(g: &Gate) -> GateRecord {
    match g {
        Gate::OneQubit { matrix, wire } if *matrix == hadamard() => GateRecord { op: "h".into(), wires: vec![*wire], matrix: None },
        Gate::OneQubit { matrix, wire } => {
            GateRecord { op: "u".into(), wires: vec![*wire], matrix: Some(matrix.iter().flatten().map(|v| [v.re, v.im]).collect()) }
        }
        Gate::Toffoli { .. } => GateRecord { op: "toffoli".into(), wires: g.wires(), matrix: None },
        Gate::Query { style, .. } => {
            let op = match style {
                QueryStyle::Standard => "query",
                QueryStyle::Signed => "squery",
            };
            GateRecord { op: op.into(), wires: g.wires(), matrix: None }
        }
        Gate::ZeroReflection { wires } => GateRecord { op: "refl0".into(), wires: wires.clone(), matrix: None },
    }
}

fn gate(r: GateRecord, line: usize) -> Result<Gate> {
    let need = |n: usize| -> Result<()> {
        if r.wires.len() != n {
            bail!(Parse, "line {line}: op {} needs {n} wires, got {}", r.op, r.wires.len());
        }
        Ok(())
    };
    Ok(match r.op.as_str() {
        "h" => {
            need(1)?;
            Gate::OneQubit { matrix: hadamard(), wire: r.wires[0] }
        }
        "u" => {
            need(1)?;
            let Some(m) = r.matrix.as_ref().filter(|m| m.len() == 4) else {
                bail!(Parse, "line {line}: op u needs a 4-entry matrix");
            };
            let c = |i: usize| Complex64::new(m[i][0], m[i][1]);
            let matrix: Matrix2 = [[c(0), c(1)], [c(2), c(3)]];
            Gate::OneQubit { matrix, wire: r.wires[0] }
        }
        "toffoli" => {
            need(3)?;
            Gate::Toffoli { controls: [r.wires[0], r.wires[1]], target: r.wires[2] }
        }
        "query" | "squery" => {
            if r.wires.len() < 2 {
                bail!(Parse, "line {line}: query needs address and target wires");
            }
            let (address, target) = r.wires.split_at(r.wires.len() - 1);
            let style = if r.op == "query" { QueryStyle::Standard } else { QueryStyle::Signed };
            Gate::Query { address: address.to_vec(), target: target[0], style }
        }
        "refl0" => Gate::ZeroReflection { wires: r.wires },
        other => bail!(Parse, "line {line}: unknown op {other:?}"),
    })
}

fn json_err(line: usize, e: serde_json::Error) -> Error {
    Error::Parse(format!("line {line}: {e}"))
}

pub fn write_jsonl(circuit: &Circuit, ext: Option<&Extension>, mut out: impl Write) -> Result<()> {
    let header = Header { wires: circuit.num_wires(), ancilla: circuit.ancilla().to_vec() };
    writeln!(out, "{}", serde_json::to_string(&header).map_err(|e| json_err(0, e))?)?;
    for g in circuit.gates() {
        writeln!(out, "{}", serde_json::to_string(&record(g)).map_err(|e| json_err(0, e))?)?;
    }
    if let Some(ext) = ext {
        writeln!(out, "{}", serde_json::to_string(ext).map_err(|e| json_err(0, e))?)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl(input: impl BufRead) -> Result<(Circuit, Option<Extension>)> {
    let mut builder = None;
    let mut ext = None;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let Some(b) = builder.as_mut() else {
            let h: Header = serde_json::from_str(&line).map_err(|e| json_err(line_no, e))?;
            let mut b = Circuit::builder(h.wires);
            b.mark_ancilla(&h.ancilla)?;
            builder = Some(b);
            continue;
        };
        if ext.is_some() {
            bail!(Parse, "line {line_no}: records after the extension record");
        }
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| json_err(line_no, e))?;
        if value.get("op").is_some() {
            let r: GateRecord = serde_json::from_value(value).map_err(|e| json_err(line_no, e))?;
            b.push(gate(r, line_no)?)?;
        } else {
            ext = Some(serde_json::from_value(value).map_err(|e| json_err(line_no, e))?);
        }
    }
    match builder {
        Some(b) => Ok((b.build(), ext)),
        None => bail!(Parse, "missing header record"),
    }
}
