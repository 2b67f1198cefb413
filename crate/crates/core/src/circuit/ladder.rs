use super::{hadamard, matmul, minus_z, pauli_x, pauli_z, Circuit, Gate, QueryStyle};
use crate::error::{bail, Result};

/// Elementary-gate cost of a zero reflection on `m` wires.
pub fn zero_reflection_cost(m: usize) -> u64 {
    if m >= 2 {
        4 * m as u64 - 1
    } else {
        1
    }
}

fn push_ladder(gates: &mut Vec<Gate>, wires: &[usize], ancilla: &[usize]) {
    let m = wires.len();
    debug_assert!(m >= 2 && ancilla.len() >= m - 1);
    let mut forward = Vec::with_capacity(2 * m - 1);
    for &w in wires {
        forward.push(Gate::OneQubit { matrix: pauli_x(), wire: w });
    }
    forward.push(Gate::Toffoli { controls: [wires[0], wires[1]], target: ancilla[0] });
    for j in 2..m {
        forward.push(Gate::Toffoli { controls: [ancilla[j - 2], wires[j]], target: ancilla[j - 1] });
    }
    gates.extend(forward.iter().cloned());
    gates.push(Gate::OneQubit { matrix: minus_z(), wire: ancilla[m - 2] });
    gates.extend(forward.into_iter().rev());
}

/// Toffoli-ladder realization of the zero reflection on `m ≥ 2` wires.
///
/// Wires `0..m` are the reflected register, `m..2m-1` the ancillas.
pub fn expand_zero_reflection(m: usize) -> Result<Circuit> {
    if m < 2 {
        bail!(Config, "ladder needs m >= 2; the one-wire reflection is a single Z");
    }
    let wires: Vec<usize> = (0..m).collect();
    let ancilla: Vec<usize> = (m..2 * m - 1).collect();
    let mut gates = Vec::new();
    push_ladder(&mut gates, &wires, &ancilla);
    let mut b = Circuit::builder(2 * m - 1);
    for g in gates {
        b.push(g)?;
    }
    b.mark_ancilla(&ancilla)?;
    Ok(b.build())
}

/// Rewrites macros into elementary gates: zero reflections become ladders on
/// fresh ancilla wires appended after the existing ones, signed queries become
/// the `HX · query · XH` sandwich. Counts are unchanged.
pub fn lower(circuit: &Circuit) -> Result<Circuit> {
    let n = circuit.num_wires();
    let extra = circuit
        .gates()
        .iter()
        .map(|g| match g {
            Gate::ZeroReflection { wires } if wires.len() >= 2 => wires.len() - 1,
            _ => 0,
        })
        .max()
        .unwrap_or(0);
    let ancilla: Vec<usize> = (n..n + extra).collect();
    let hx = matmul(&hadamard(), &pauli_x());
    let xh = matmul(&pauli_x(), &hadamard());
    let mut gates = Vec::with_capacity(circuit.len());
    for g in circuit.gates() {
        match g {
            Gate::ZeroReflection { wires } if wires.len() == 1 => {
                gates.push(Gate::OneQubit { matrix: pauli_z(), wire: wires[0] });
            }
            Gate::ZeroReflection { wires } => push_ladder(&mut gates, wires, &ancilla),
            Gate::Query { address, target, style: QueryStyle::Signed } => {
                gates.push(Gate::OneQubit { matrix: hx, wire: *target });
                gates.push(Gate::Query { address: address.clone(), target: *target, style: QueryStyle::Standard });
                gates.push(Gate::OneQubit { matrix: xh, wire: *target });
            }
            other => gates.push(other.clone()),
        }
    }
    let mut b = Circuit::builder(n + extra);
    for g in gates {
        b.push(g)?;
    }
    b.mark_ancilla(circuit.ancilla())?.mark_ancilla(&ancilla)?;
    Ok(b.build())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::CountReport;

    #[test]
    fn ladder_sizes() {
        for m in 2..=8 {
            let c = expand_zero_reflection(m).unwrap();
            assert_eq!(c.num_wires(), 2 * m - 1);
            assert_eq!(c.counts(), CountReport::new(0u64, 4 * m as u64 - 1));
            assert_eq!(c.ancilla().len(), m - 1);
        }
        assert_eq!(expand_zero_reflection(2).unwrap().len(), 7);
        assert!(expand_zero_reflection(1).is_err());
    }

    #[test]
    fn lowering_preserves_counts() {
        let mut b = Circuit::builder(4);
        b.h(0).unwrap();
        b.append_zero_reflection(&[0, 1, 2]).unwrap();
        b.append_query(&[0, 1], 3, QueryStyle::Signed).unwrap();
        b.append_zero_reflection(&[3]).unwrap();
        let c = b.build();
        let low = lower(&c).unwrap();
        assert_eq!(low.counts(), c.counts());
        assert_eq!(low.num_wires(), 6);
        assert!(low.gates().iter().all(|g| !matches!(g, Gate::ZeroReflection { .. })));
    }
}
