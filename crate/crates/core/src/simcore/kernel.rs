//! In-place application of small operators to amplitude-like vectors.
//!
//! A vector of length `2^n` is addressed by `n` bits; density matrices and
//! full unitaries reuse the same kernels by treating their row-major storage
//! as a `2n`-bit vector (column bits low, row bits high).

use num_complex::Complex64;

use super::gate::{CMatrix, Gate};

pub(crate) fn apply_1q(amps: &mut [Complex64], q: usize, m: &CMatrix) {
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let stride = 1usize << q;
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + stride {
            let a = amps[i];
            let b = amps[i + stride];
            amps[i] = m00 * a + m01 * b;
            amps[i + stride] = m10 * a + m11 * b;
        }
        base += stride << 1;
    }
}

/// Ry is real, so it needs no conjugated variant.
fn apply_ry(amps: &mut [Complex64], q: usize, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    let stride = 1usize << q;
    let mut base = 0;
    while base < amps.len() {
        for i in base..base + stride {
            let a = amps[i];
            let b = amps[i + stride];
            amps[i] = a * c - b * s;
            amps[i + stride] = a * s + b * c;
        }
        base += stride << 1;
    }
}

fn apply_cz(amps: &mut [Complex64], a: usize, b: usize) {
    let mask = (1usize << a) | (1usize << b);
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *amp = -*amp;
        }
    }
}

/// Applies a `2^k × 2^k` operator on `qubits`, where `qubits[0]` is the
/// least-significant bit of the operator's local index.
pub(crate) fn apply_kq(amps: &mut [Complex64], qubits: &[usize], m: &CMatrix) {
    if qubits.len() == 1 {
        apply_1q(amps, qubits[0], m);
        return;
    }
    let k = qubits.len();
    let local = 1usize << k;
    let mask: usize = qubits.iter().map(|q| 1usize << q).sum();
    let offsets: Vec<usize> = (0..local)
        .map(|l| qubits.iter().enumerate().filter(|(j, _)| l >> j & 1 == 1).map(|(_, q)| 1usize << q).sum())
        .collect();
    let mut buf = vec![Complex64::new(0.0, 0.0); local];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, off) in offsets.iter().enumerate() {
            buf[l] = amps[base + off];
        }
        for (r, off) in offsets.iter().enumerate() {
            let mut acc = Complex64::new(0.0, 0.0);
            for (c, v) in buf.iter().enumerate() {
                acc += m[(r, c)] * v;
            }
            amps[base + off] = acc;
        }
    }
}

/// Applies `gate` with its qubits shifted by `shift`; when `conj` is set the
/// complex conjugate of the gate matrix is used.
pub(crate) fn apply_gate_shifted(amps: &mut [Complex64], gate: &Gate, shift: usize, conj: bool) {
    match *gate {
        Gate::Ry { qubit, theta } => apply_ry(amps, qubit + shift, theta),
        Gate::Cz(a, b) => apply_cz(amps, a + shift, b + shift),
        Gate::Z(q) => {
            let bit = 1usize << (q + shift);
            for (i, amp) in amps.iter_mut().enumerate() {
                if i & bit != 0 {
                    *amp = -*amp;
                }
            }
        }
        _ => {
            let m = if conj { gate.matrix().map(|z| z.conj()) } else { gate.matrix() };
            let q: Vec<usize> = gate.qubits().iter().map(|q| q + shift).collect();
            apply_kq(amps, &q, &m);
        }
    }
}
