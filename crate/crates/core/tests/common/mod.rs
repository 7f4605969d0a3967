//! Dense reference implementations used as independent oracles.
//!
//! Everything here is built from explicit 2^n-dimensional matrices and
//! vectors; nothing goes through the transfer tensor or the symplectic
//! Pauli representation.

#![allow(dead_code)]

use ndarray::{Array1, Array2};
use num_complex::Complex;

pub type C = Complex<f64>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

pub fn kron(a: &Array2<C>, b: &Array2<C>) -> Array2<C> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| a[[i / br, j / bc]] * b[[i % br, j % bc]])
}

pub fn single(letter: char) -> Array2<C> {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let data = match letter {
        'I' => [o, z, z, o],
        'X' => [z, o, o, z],
        'Y' => [z, -i, i, z],
        'Z' => [o, z, z, -o],
        other => panic!("not a Pauli letter: {other}"),
    };
    Array2::from_shape_vec((2, 2), data.to_vec()).unwrap()
}

/// Matrix of a Pauli string such as `-XIZ`; the leftmost letter acts on the
/// most significant bit of the basis index.
pub fn pauli_matrix(s: &str) -> Array2<C> {
    let (sign, letters) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut m = Array2::from_elem((1, 1), c(sign, 0.0));
    for ch in letters.chars() {
        m = kron(&m, &single(ch));
    }
    m
}

pub fn identity(dim: usize) -> Array2<C> {
    Array2::from_shape_fn((dim, dim), |(i, j)| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

/// `∏ (1 + g)/2` over the generators.
pub fn projector(generators: &[&str]) -> Array2<C> {
    let dim = pauli_matrix(generators[0]).dim().0;
    generators.iter().fold(identity(dim), |acc, g| {
        let f = (identity(dim) + pauli_matrix(g)).mapv(|v| v * 0.5);
        acc.dot(&f)
    })
}

pub fn rho(r: [f64; 3]) -> Array2<C> {
    let [x, y, z] = r;
    Array2::from_shape_vec((2, 2), vec![c((1.0 + z) / 2.0, 0.0), c(x / 2.0, -y / 2.0), c(x / 2.0, y / 2.0), c((1.0 - z) / 2.0, 0.0)])
        .unwrap()
}

pub fn product_rho(r: [f64; 3], n: usize) -> Array2<C> {
    let one = rho(r);
    (1..n).fold(one.clone(), |acc, _| kron(&acc, &one))
}

fn bit(index: usize, qubit: usize, n: usize) -> usize {
    (index >> (n - 1 - qubit)) & 1
}

/// Graph state amplitudes `2^{-n/2} (-1)^{Σ_edges b_i b_j}`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Vec<C> {
    let amp = (0.5f64).powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|b| {
            let parity: usize = edges.iter().map(|&(i, j)| bit(b, i, n) & bit(b, j, n)).sum();
            c(if parity % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect()
}

/// `(|Γ⟩, Z^w |Γ⟩)` with `w` given as a bit string, qubit 0 first.
pub fn cws_basis(n: usize, edges: &[(usize, usize)], w: &str) -> (Vec<C>, Vec<C>) {
    let ket0 = graph_state(n, edges);
    let wbits: Vec<usize> = w.chars().map(|ch| usize::from(ch == '1')).collect();
    let ket1 = ket0
        .iter()
        .enumerate()
        .map(|(b, a)| {
            let parity: usize = (0..n).map(|q| wbits[q] & bit(b, q, n)).sum();
            if parity % 2 == 0 {
                *a
            } else {
                -*a
            }
        })
        .collect();
    (ket0, ket1)
}

pub fn inner(a: &[C], b: &[C]) -> C {
    a.iter().zip(b).fold(c(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

pub fn overlap_up_to_phase(a: &[C], b: &[C]) -> f64 {
    inner(a, b).norm() / (inner(a, a).norm().sqrt() * inner(b, b).norm().sqrt())
}

pub fn apply(m: &Array2<C>, v: &[C]) -> Vec<C> {
    m.dot(&Array1::from(v.to_vec())).to_vec()
}

/// Postselected, decoded output Bloch vector and success probability for
/// `ρ(r)^⊗n`; `None` when the success probability vanishes.
pub fn dense_round(ket0: &[C], ket1: &[C], r: [f64; 3]) -> (Option<[f64; 3]>, f64) {
    let n = ket0.len().trailing_zeros() as usize;
    let big = product_rho(r, n);
    let m = |a: &[C], b: &[C]| inner(a, &apply(&big, b));
    let (m00, m01, m11) = (m(ket0, ket0), m(ket0, ket1), m(ket1, ket1));
    let s = (m00 + m11).re;
    if s < 1e-14 {
        return (None, s.max(0.0));
    }
    (Some([2.0 * m01.re / s, -2.0 * m01.im / s, (m00 - m11).re / s]), s)
}

pub fn max_abs_diff(a: &Array2<C>, b: &Array2<C>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}
