//! The searched bit string and its query unitaries.

use std::fmt;

use crate::circuit::{hadamard, matmul, pauli_x, Circuit, Gate, QueryStyle};
use crate::error::{bail, Result};

/// Largest address width a database may have (the simulator's reach).
pub const MAX_DATABASE_BITS: u32 = 40;

/// `x ∈ {0,1}^N` with `N = 2^n`, stored as its sorted set of ones.
#[derive(Clone, PartialEq, Eq)]
pub struct Database {
    n: u32,
    ones: Vec<u64>,
}

impl fmt::Debug for Database {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Database(n={}, ones={:?})", self.n, self.ones)
    }
}

impl Database {
    pub fn new(n: u32, mut ones: Vec<u64>) -> Result<Self> {
        if n == 0 || n > MAX_DATABASE_BITS {
            bail!(Config, "address width {n} outside 1..={MAX_DATABASE_BITS}");
        }
        ones.sort_unstable();
        ones.dedup();
        if let Some(&last) = ones.last() {
            if last >> n != 0 {
                bail!(Index, "index {last} out of range for N = 2^{n}");
            }
        }
        Ok(Database { n, ones })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn size(&self) -> u64 {
        1 << self.n
    }

    pub fn bit(&self, i: u64) -> bool {
        self.ones.binary_search(&i).is_ok()
    }

    pub fn ones(&self) -> &[u64] {
        &self.ones
    }

    /// The unique solution, if the Hamming weight is exactly one.
    pub fn solution(&self) -> Option<u64> {
        match self.ones.as_slice() {
            [t] => Some(*t),
            _ => None,
        }
    }

    /// Bits `x_0 x_1 …` as hex digits, most significant bit first.
    pub fn to_hex(&self) -> String {
        let digits = self.size().div_ceil(4) as usize;
        let mut nibbles = vec![0u8; digits];
        for &i in &self.ones {
            nibbles[(i / 4) as usize] |= 8 >> (i % 4);
        }
        nibbles.iter().map(|d| char::from_digit(u32::from(*d), 16).unwrap()).collect()
    }

    /// Parses a hex bit string (`x_0` is the top bit of the first digit).
    /// Without `n`, `N` is four times the digit count.
    pub fn from_hex(hex: &str, n: Option<u32>) -> Result<Self> {
        let hex = hex.trim().trim_start_matches("0x");
        if hex.is_empty() {
            bail!(Parse, "empty hex database");
        }
        let n = match n {
            Some(n) => n,
            None => {
                let bits = 4 * hex.len() as u64;
                if !bits.is_power_of_two() {
                    bail!(Parse, "{} hex digits give {bits} bits, not a power of two; pass --n", hex.len());
                }
                bits.trailing_zeros()
            }
        };
        if n == 0 || n > MAX_DATABASE_BITS {
            bail!(Config, "address width {n} outside 1..={MAX_DATABASE_BITS}");
        }
        let size = 1u64 << n;
        if hex.len() as u64 != size.div_ceil(4) {
            bail!(Parse, "expected {} hex digits for N = {size}, got {}", size.div_ceil(4), hex.len());
        }
        let mut ones = Vec::new();
        for (pos, ch) in hex.chars().enumerate() {
            let Some(d) = ch.to_digit(16) else { bail!(Parse, "invalid hex digit {ch:?}") };
            for b in 0..4u64 {
                if d & (8 >> b) != 0 {
                    let i = 4 * pos as u64 + b;
                    if i >= size {
                        bail!(Parse, "bit {i} set beyond N = {size}");
                    }
                    ones.push(i);
                }
            }
        }
        Database::new(n, ones)
    }
}

/// Database with the single solution `t`.
pub fn make_unique_database(n: u32, t: u64) -> Result<Database> {
    if n == 0 || n > MAX_DATABASE_BITS {
        bail!(Config, "address width {n} outside 1..={MAX_DATABASE_BITS}");
    }
    if t >> n != 0 {
        bail!(Index, "solution {t} out of range for N = 2^{n}");
    }
    Database::new(n, vec![t])
}

fn check_distinct(address: &[usize], other: usize) -> Result<()> {
    if address.is_empty() {
        bail!(Index, "empty address register");
    }
    for (i, &w) in address.iter().enumerate() {
        if w == other || address[..i].contains(&w) {
            bail!(Index, "wire {w} used twice");
        }
    }
    Ok(())
}

fn fragment_width(address: &[usize], other: usize) -> usize {
    address.iter().copied().chain([other]).max().unwrap() + 1
}

/// `|i, b> -> |i, b ⊕ x_i>`.
pub fn standard_query_gate(address: &[usize], target: usize) -> Result<Gate> {
    check_distinct(address, target)?;
    Ok(Gate::Query { address: address.to_vec(), target, style: QueryStyle::Standard })
}

/// `(I⊗XH) O (I⊗HX)`: phase `-1` exactly where `x_i = 1` and the flag is 0.
pub fn signed_query_fragment(address: &[usize], flag: usize) -> Result<Circuit> {
    check_distinct(address, flag)?;
    let mut b = Circuit::builder(fragment_width(address, flag));
    b.append_one_qubit(matmul(&hadamard(), &pauli_x()), flag)?;
    b.append_query(address, flag, QueryStyle::Standard)?;
    b.append_one_qubit(matmul(&pauli_x(), &hadamard()), flag)?;
    Ok(b.build())
}

/// `|i>|0> -> (-1)^{x_i} |i>|0>` by phase kickback on `work`.
pub fn phase_query_fragment(address: &[usize], work: usize) -> Result<Circuit> {
    check_distinct(address, work)?;
    let mut b = Circuit::builder(fragment_width(address, work));
    b.x(work)?.h(work)?;
    b.append_query(address, work, QueryStyle::Standard)?;
    b.h(work)?.x(work)?;
    b.mark_ancilla(&[work])?;
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CountReport;

    #[test]
    fn unique_databases() {
        assert_eq!(make_unique_database(2, 3).unwrap().to_hex(), "1");
        let d = make_unique_database(1, 0).unwrap();
        assert!(d.bit(0) && !d.bit(1));
        assert_eq!(d.to_hex(), "8");
        assert!(make_unique_database(2, 4).is_err());
        assert_eq!(make_unique_database(5, 17).unwrap().solution(), Some(17));
    }

    #[test]
    fn hex_round_trip() {
        let d = Database::from_hex("0010", None).unwrap();
        assert_eq!((d.n(), d.solution()), (4, Some(11)));
        assert_eq!(d.to_hex(), "0010");
        let d = Database::from_hex("8", Some(1)).unwrap();
        assert_eq!(d.solution(), Some(0));
        assert!(Database::from_hex("2", Some(1)).is_err());
        assert!(Database::from_hex("000", None).is_err());
        assert!(Database::from_hex("00g0", None).is_err());
        assert!(Database::from_hex("00", Some(4)).is_err());
        let multi = Database::from_hex("c000", None).unwrap();
        assert_eq!(multi.solution(), None);
    }

    #[test]
    fn fragment_counts() {
        let q = standard_query_gate(&[0, 1], 2).unwrap();
        assert_eq!(q.counts(), CountReport::new(1u64, 0u64));
        assert_eq!(q.inverse(), q);
        assert_eq!(signed_query_fragment(&[0, 1], 2).unwrap().counts(), CountReport::new(1u64, 2u64));
        assert_eq!(phase_query_fragment(&[0, 1], 2).unwrap().counts(), CountReport::new(1u64, 4u64));
        assert!(standard_query_gate(&[0, 1], 1).is_err());
        assert!(signed_query_fragment(&[0, 0], 1).is_err());
    }
}
