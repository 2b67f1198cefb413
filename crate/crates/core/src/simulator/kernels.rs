use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::Matrix2;

/// Below this many amplitudes the serial loops win.
const PAR_THRESHOLD: usize = 1 << 14;

pub(super) fn one_qubit(amps: &mut [Complex64], m: &Matrix2, wire: usize) {
    let stride = 1usize << wire;
    let apply = |chunk: &mut [Complex64]| {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        }
    };
    if amps.len() >= PAR_THRESHOLD {
        if amps.len() / (2 * stride) >= 64 {
            amps.par_chunks_mut(2 * stride).for_each(apply);
        } else {
            for chunk in amps.chunks_mut(2 * stride) {
                let (lo, hi) = chunk.split_at_mut(stride);
                lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(|(a, b)| {
                    let (x, y) = (*a, *b);
                    *a = m[0][0] * x + m[0][1] * y;
                    *b = m[1][0] * x + m[1][1] * y;
                });
            }
        }
    } else {
        amps.chunks_mut(2 * stride).for_each(apply);
    }
}

/// Calls `f(base | fixed)` for every `base` that is a submask of `free`.
#[inline]
fn for_each_submask(free: usize, fixed: usize, mut f: impl FnMut(usize)) {
    let mut s = 0usize;
    loop {
        f(s | fixed);
        s = s.wrapping_sub(free) & free;
        if s == 0 {
            break;
        }
    }
}

pub(super) fn toffoli(amps: &mut [Complex64], c1: usize, c2: usize, t: usize) {
    let full = amps.len() - 1;
    let cmask = (1 << c1) | (1 << c2);
    let tbit = 1 << t;
    for_each_submask(full & !(cmask | tbit), cmask, |i| amps.swap(i, i | tbit));
}

/// Basis-index bits spelling address `value` on `address` (first wire = MSB).
pub(super) fn address_pattern(address: &[usize], value: u64) -> usize {
    let n = address.len();
    address.iter().enumerate().filter(|(j, _)| (value >> (n - 1 - j)) & 1 == 1).fold(0, |acc, (_, &w)| acc | (1 << w))
}

pub(super) fn mask_of(wires: &[usize]) -> usize {
    wires.iter().fold(0, |acc, &w| acc | (1 << w))
}

pub(super) fn xor_query(amps: &mut [Complex64], address: &[usize], target: usize, ones: &[u64]) {
    let full = amps.len() - 1;
    let tbit = 1 << target;
    let free = full & !(mask_of(address) | tbit);
    for &s in ones {
        let pattern = address_pattern(address, s);
        for_each_submask(free, pattern, |i| amps.swap(i, i | tbit));
    }
}

pub(super) fn signed_query(amps: &mut [Complex64], address: &[usize], flag: usize, ones: &[u64]) {
    let full = amps.len() - 1;
    let free = full & !(mask_of(address) | (1 << flag));
    for &s in ones {
        let pattern = address_pattern(address, s);
        for_each_submask(free, pattern, |i| amps[i] = -amps[i]);
    }
}

/// `2|0><0| - I` on the wires in `mask`.
pub(super) fn zero_reflection(amps: &mut [Complex64], mask: usize) {
    let flip = |(i, a): (usize, &mut Complex64)| {
        if i & mask != 0 {
            *a = -*a;
        }
    };
    if amps.len() >= PAR_THRESHOLD {
        amps.par_iter_mut().enumerate().for_each(flip);
    } else {
        amps.iter_mut().enumerate().for_each(flip);
    }
}

/// Total `|amp|²` over indices `pattern | s` for submasks `s` of `free`.
pub(super) fn weight(amps: &[Complex64], free: usize, pattern: usize) -> f64 {
    let mut total = 0.0;
    for_each_submask(free, pattern, |i| total += amps[i].norm_sqr());
    total
}
