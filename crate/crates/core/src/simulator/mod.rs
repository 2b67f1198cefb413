//! Dense state-vector simulation of circuits against a database.

mod kernels;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::circuit::{expand_zero_reflection, Circuit, Gate, QueryStyle};
use crate::error::{bail, Result};
use crate::oracle::Database;

pub const DEFAULT_MAX_WIRES: usize = 26;

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub max_wires: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { max_wires: DEFAULT_MAX_WIRES }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_wires: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|index>` on `num_wires` wires; wire `w` is bit `w` of the index.
    pub fn basis(num_wires: usize, index: usize, cfg: &SimConfig) -> Result<Self> {
        if num_wires > cfg.max_wires || num_wires >= usize::BITS as usize {
            bail!(Resource, "{num_wires} wires exceed the simulation cap of {}; use count-only mode", cfg.max_wires);
        }
        let len = 1usize << num_wires;
        if index >= len {
            bail!(Index, "basis index {index} out of range for {num_wires} wires");
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_wires, amps })
    }

    pub fn zero(num_wires: usize, cfg: &SimConfig) -> Result<Self> {
        Self::basis(num_wires, 0, cfg)
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if !amps.len().is_power_of_two() {
            bail!(Config, "amplitude count {} is not a power of two", amps.len());
        }
        Ok(StateVector { num_wires: amps.len().trailing_zeros() as usize, amps })
    }

    pub fn num_wires(&self) -> usize {
        self.num_wires
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest entrywise distance.
    pub fn max_distance(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Probability that every wire in `wires` reads 0.
    pub fn zero_probability(&self, wires: &[usize]) -> f64 {
        let mask = kernels::mask_of(wires);
        kernels::weight(&self.amps, (self.amps.len() - 1) & !mask, 0)
    }

    /// Applies `circuit` in place.
    pub fn apply(&mut self, circuit: &Circuit, db: &Database) -> Result<()> {
        if circuit.num_wires() != self.num_wires {
            bail!(Config, "circuit has {} wires, state has {}", circuit.num_wires(), self.num_wires);
        }
        for g in circuit.gates() {
            self.apply_gate(g, db)?;
        }
        Ok(())
    }

    pub fn apply_gate(&mut self, gate: &Gate, db: &Database) -> Result<()> {
        match gate {
            Gate::OneQubit { matrix, wire } => kernels::one_qubit(&mut self.amps, matrix, *wire),
            Gate::Toffoli { controls, target } => kernels::toffoli(&mut self.amps, controls[0], controls[1], *target),
            Gate::Query { address, target, style } => {
                if address.len() != db.n() as usize {
                    bail!(Config, "query reads {} address wires but the database has n = {}", address.len(), db.n());
                }
                match style {
                    QueryStyle::Standard => kernels::xor_query(&mut self.amps, address, *target, db.ones()),
                    QueryStyle::Signed => kernels::signed_query(&mut self.amps, address, *target, db.ones()),
                }
            }
            Gate::ZeroReflection { wires } => kernels::zero_reflection(&mut self.amps, kernels::mask_of(wires)),
        }
        Ok(())
    }

    /// Raw little-endian `(re, im)` pairs plus a `<path>.json` sidecar.
    pub fn dump(&self, path: &Path, gate_count: usize) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        for a in &self.amps {
            out.write_all(&a.re.to_le_bytes())?;
            out.write_all(&a.im.to_le_bytes())?;
        }
        out.flush()?;
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".json");
        std::fs::write(sidecar, format!("{{\"wires\":{},\"gates\":{}}}\n", self.num_wires, gate_count))?;
        Ok(())
    }
}

/// Runs `circuit` from `|0…0>`.
pub fn run(circuit: &Circuit, db: &Database, cfg: &SimConfig) -> Result<StateVector> {
    let mut state = StateVector::zero(circuit.num_wires(), cfg)?;
    state.apply(circuit, db)?;
    Ok(state)
}

/// Success predicate: address decodes to a one of `x` and every flag reads 0.
#[derive(Clone, Debug)]
pub struct GoodSet<'a> {
    pub address_wires: Vec<usize>,
    pub flag_wires: Vec<usize>,
    pub database: &'a Database,
}

pub fn good_probability(state: &StateVector, good: &GoodSet<'_>) -> Result<f64> {
    let n = state.num_wires;
    if good.address_wires.iter().chain(&good.flag_wires).any(|&w| w >= n) {
        bail!(Index, "good-set wire outside the {n}-wire state");
    }
    if good.address_wires.len() != good.database.n() as usize {
        bail!(Config, "good set reads {} address wires, database has n = {}", good.address_wires.len(), good.database.n());
    }
    let fixed = kernels::mask_of(&good.address_wires) | kernels::mask_of(&good.flag_wires);
    let free = (state.amps.len() - 1) & !fixed;
    Ok(good.database.ones().iter().map(|&s| kernels::weight(&state.amps, free, kernels::address_pattern(&good.address_wires, s))).sum())
}

/// Checks the Toffoli ladder against the semantic zero reflection on every
/// basis input of `m` wires: equal up to one global phase, ancillas back at 0.
pub fn verify_reflection_equivalence(m: usize) -> Result<bool> {
    if !(1..=8).contains(&m) {
        bail!(Config, "reflection check supports 1 <= m <= 8, got {m}");
    }
    let cfg = SimConfig::default();
    let dummy = Database::new(1, vec![])?;
    let wires: Vec<usize> = (0..m).collect();
    if m == 1 {
        // D₁ = Z exactly.
        let mut b = Circuit::builder(1);
        b.append_one_qubit(crate::circuit::pauli_z(), 0)?;
        let z = b.build();
        for input in 0..2 {
            let mut lhs = StateVector::basis(1, input, &cfg)?;
            lhs.apply(&z, &dummy)?;
            let mut rhs = StateVector::basis(1, input, &cfg)?;
            rhs.apply_gate(&Gate::ZeroReflection { wires: wires.clone() }, &dummy)?;
            if lhs.max_distance(&rhs) > 1e-12 {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let ladder = expand_zero_reflection(m)?;
    let total = ladder.num_wires();
    let mut phase: Option<Complex64> = None;
    for input in 0..1usize << m {
        let mut lhs = StateVector::basis(total, input, &cfg)?;
        lhs.apply(&ladder, &dummy)?;
        let mut rhs = StateVector::basis(total, input, &cfg)?;
        rhs.apply_gate(&Gate::ZeroReflection { wires: wires.clone() }, &dummy)?;
        if (lhs.zero_probability(ladder.ancilla()) - 1.0).abs() > 1e-12 {
            return Ok(false);
        }
        let overlap = rhs.inner(&lhs);
        if (overlap.norm() - 1.0).abs() > 1e-12 {
            return Ok(false);
        }
        match phase {
            None => phase = Some(overlap),
            Some(p) if (p - overlap).norm() > 1e-12 => return Ok(false),
            Some(_) => {}
        }
    }
    Ok(true)
}
