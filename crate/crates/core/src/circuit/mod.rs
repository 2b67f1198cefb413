//! Gate-level circuit representation with exact query/gate accounting.

mod io;
mod ladder;

use std::ops::Add;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{bail, Result};
use crate::numerics::BigCount;

pub use io::{read_jsonl, write_jsonl, Extension};
pub use ladder::{expand_zero_reflection, lower, zero_reflection_cost};

pub type Matrix2 = [[Complex64; 2]; 2];

const UNITARY_TOL: f64 = 1e-10;

pub fn hadamard() -> Matrix2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn pauli_x() -> Matrix2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[z, o], [o, z]]
}

pub fn pauli_z() -> Matrix2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, -o]]
}

/// `diag(-1, 1)`.
pub fn minus_z() -> Matrix2 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[-o, z], [z, o]]
}

/// Real rotation taking `|0>` to `√p|0> + √(1-p)|1>`.
pub fn rotation(p: f64) -> Matrix2 {
    let c = p.clamp(0.0, 1.0).sqrt();
    let s = (1.0 - p).clamp(0.0, 1.0).sqrt();
    [[Complex64::new(c, 0.0), Complex64::new(-s, 0.0)], [Complex64::new(s, 0.0), Complex64::new(c, 0.0)]]
}

pub fn matmul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn dagger(m: &Matrix2) -> Matrix2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

/// Max-entry deviation of `m†m` from the identity.
pub fn unitarity_error(m: &Matrix2) -> f64 {
    let p = matmul(&dagger(m), m);
    let mut err: f64 = 0.0;
    for (i, row) in p.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            err = err.max((v - Complex64::new(target, 0.0)).norm());
        }
    }
    err
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryStyle {
    /// `|i, b> -> |i, b ⊕ x_i>`.
    Standard,
    /// `-1` exactly on `x_i = 1` with the target (flag) at 0.
    Signed,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    OneQubit {
        matrix: Matrix2,
        wire: usize,
    },
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    Query {
        address: Vec<usize>,
        target: usize,
        style: QueryStyle,
    },
    /// `2|0..0><0..0| - I` on the listed wires.
    ZeroReflection {
        wires: Vec<usize>,
    },
}

impl Gate {
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::OneQubit { wire, .. } => vec![*wire],
            Gate::Toffoli { controls, target } => vec![controls[0], controls[1], *target],
            Gate::Query { address, target, .. } => address.iter().copied().chain([*target]).collect(),
            Gate::ZeroReflection { wires } => wires.clone(),
        }
    }

    pub fn counts(&self) -> CountReport {
        let (q, e) = match self {
            Gate::OneQubit { .. } | Gate::Toffoli { .. } => (0u64, 1u64),
            Gate::Query { style: QueryStyle::Standard, .. } => (1, 0),
            Gate::Query { style: QueryStyle::Signed, .. } => (1, 2),
            Gate::ZeroReflection { wires } => (0, zero_reflection_cost(wires.len())),
        };
        CountReport { queries: BigCount::from(q), elementary_gates: BigCount::from(e) }
    }

    pub fn inverse(&self) -> Gate {
        match self {
            Gate::OneQubit { matrix, wire } => Gate::OneQubit { matrix: dagger(matrix), wire: *wire },
            other => other.clone(),
        }
    }

    /// Renumbers every wire through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::OneQubit { matrix, wire } => Gate::OneQubit { matrix: *matrix, wire: map(*wire) },
            Gate::Toffoli { controls, target } => Gate::Toffoli { controls: [map(controls[0]), map(controls[1])], target: map(*target) },
            Gate::Query { address, target, style } => {
                Gate::Query { address: address.iter().map(|&w| map(w)).collect(), target: map(*target), style: *style }
            }
            Gate::ZeroReflection { wires } => Gate::ZeroReflection { wires: wires.iter().map(|&w| map(w)).collect() },
        }
    }

    fn validate(&self, num_wires: usize) -> Result<()> {
        let wires = self.wires();
        if wires.is_empty() {
            bail!(Index, "gate acts on no wires");
        }
        for (i, &w) in wires.iter().enumerate() {
            if w >= num_wires {
                bail!(Index, "wire {w} out of range for a {num_wires}-wire circuit");
            }
            if wires[..i].contains(&w) {
                bail!(Index, "wire {w} repeated within one gate");
            }
        }
        if let Gate::OneQubit { matrix, .. } = self {
            if matrix.iter().flatten().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                bail!(Validation, "matrix has non-finite entries");
            }
            let err = unitarity_error(matrix);
            if err > UNITARY_TOL {
                bail!(Validation, "matrix is not unitary (deviation {err:.3e})");
            }
        }
        if let Gate::Query { address, .. } = self {
            if address.is_empty() {
                bail!(Index, "query needs at least one address wire");
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub queries: BigCount,
    pub elementary_gates: BigCount,
}

impl CountReport {
    pub fn new(queries: impl Into<BigCount>, elementary_gates: impl Into<BigCount>) -> Self {
        CountReport { queries: queries.into(), elementary_gates: elementary_gates.into() }
    }
}

impl Add for CountReport {
    type Output = CountReport;
    fn add(self, o: CountReport) -> CountReport {
        CountReport { queries: self.queries + o.queries, elementary_gates: self.elementary_gates + o.elementary_gates }
    }
}

/// A frozen circuit; cheap to clone and share.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_wires: usize,
    gates: Arc<[Gate]>,
    ancilla: Vec<usize>,
}

impl Circuit {
    pub fn builder(num_wires: usize) -> CircuitBuilder {
        CircuitBuilder::new(num_wires)
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn ancilla(&self) -> &[usize] {
        &self.ancilla
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn counts(&self) -> CountReport {
        let mut q = 0u64;
        let mut e = 0u64;
        for g in self.gates.iter() {
            match g {
                Gate::OneQubit { .. } | Gate::Toffoli { .. } => e += 1,
                Gate::Query { style: QueryStyle::Standard, .. } => q += 1,
                Gate::Query { style: QueryStyle::Signed, .. } => {
                    q += 1;
                    e += 2;
                }
                Gate::ZeroReflection { wires } => e += zero_reflection_cost(wires.len()),
            }
        }
        CountReport::new(q, e)
    }

    /// Reversed gate order with each one-qubit matrix replaced by its adjoint.
    pub fn invert(&self) -> Circuit {
        Circuit { num_wires: self.num_wires, gates: self.gates.iter().rev().map(Gate::inverse).collect(), ancilla: self.ancilla.clone() }
    }

    /// Number of address wires touched by each query, in circuit order.
    pub fn query_widths(&self) -> Vec<usize> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Query { address, .. } => Some(address.len()),
                _ => None,
            })
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct CircuitBuilder {
    num_wires: usize,
    gates: Vec<Gate>,
    ancilla: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new(num_wires: usize) -> Self {
        CircuitBuilder { num_wires, gates: Vec::new(), ancilla: Vec::new() }
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.num_wires)?;
        self.gates.push(gate);
        Ok(self)
    }

    pub fn append_one_qubit(&mut self, matrix: Matrix2, wire: usize) -> Result<&mut Self> {
        self.push(Gate::OneQubit { matrix, wire })
    }

    pub fn h(&mut self, wire: usize) -> Result<&mut Self> {
        self.append_one_qubit(hadamard(), wire)
    }

    pub fn x(&mut self, wire: usize) -> Result<&mut Self> {
        self.append_one_qubit(pauli_x(), wire)
    }

    pub fn append_toffoli(&mut self, c1: usize, c2: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Toffoli { controls: [c1, c2], target })
    }

    pub fn append_query(&mut self, address: &[usize], target: usize, style: QueryStyle) -> Result<&mut Self> {
        self.push(Gate::Query { address: address.to_vec(), target, style })
    }

    pub fn append_zero_reflection(&mut self, wires: &[usize]) -> Result<&mut Self> {
        self.push(Gate::ZeroReflection { wires: wires.to_vec() })
    }

    /// Appends every gate of `other`, which must fit in this width.
    pub fn append_circuit(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.num_wires > self.num_wires {
            bail!(Index, "appending a {}-wire circuit to a {}-wire one", other.num_wires, self.num_wires);
        }
        self.gates.extend(other.gates.iter().cloned());
        self.mark_ancilla(other.ancilla())?;
        Ok(self)
    }

    /// Appends `other` with its wire `w` relabelled as `map(w)`.
    pub fn append_mapped(&mut self, other: &Circuit, map: impl Fn(usize) -> usize) -> Result<&mut Self> {
        for g in other.gates.iter() {
            self.push(g.remap(&map))?;
        }
        let anc: Vec<usize> = other.ancilla.iter().map(|&w| map(w)).collect();
        self.mark_ancilla(&anc)?;
        Ok(self)
    }

    /// Declares wires that start and end in `|0>`.
    pub fn mark_ancilla(&mut self, wires: &[usize]) -> Result<&mut Self> {
        for &w in wires {
            if w >= self.num_wires {
                bail!(Index, "ancilla wire {w} out of range");
            }
            if !self.ancilla.contains(&w) {
                self.ancilla.push(w);
            }
        }
        Ok(self)
    }

    pub fn build(self) -> Circuit {
        let mut ancilla = self.ancilla;
        ancilla.sort_unstable();
        Circuit { num_wires: self.num_wires, gates: self.gates.into(), ancilla }
    }
}
