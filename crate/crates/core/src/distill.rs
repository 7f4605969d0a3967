//! One round of distillation as a map on Bloch vectors.
//!
//! For `n` copies of `ρ(r) = (1 + xX + yY + zZ)/2`, the postselected logical
//! state has unnormalised entries
//!
//! ```text
//! M_ij(r) = ⟨i_L| ρ(r)^⊗n |j_L⟩ = 2^-n Σ_a ⟨i_L|P_a|j_L⟩ ∏_t r_{a_t},   r_I = 1
//! ```
//!
//! The transfer tensor `⟨i_L|P_a|j_L⟩` is computed once per code. Since all
//! copies share the same input, its entries are also summed by the number of
//! `X`, `Y` and `Z` factors into a small polynomial in `(x, y, z)`, which is
//! what [`DistillationMap::evaluate`] runs on. The full tensor stays available
//! for inputs that differ per copy.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex;

use crate::cws::LogicalBasis;
use crate::error::{Error, Result};
use crate::pauli::{i_pow, PauliOperator};
use crate::registry::CodeSpec;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BlochVector<T> {
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: Scalar> BlochVector<T> {
    pub fn new(x: T, y: T, z: T) -> Self {
        Self { x, y, z }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero())
    }

    pub fn from_array(a: [T; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }

    pub fn to_array(self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    pub fn from_f64(x: f64, y: f64, z: f64) -> Self {
        Self::new(T::lit(x), T::lit(y), T::lit(z))
    }

    pub fn dot(&self, o: &Self) -> T {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// `|x| + |y| + |z|`; the stabilizer octahedron is where this is ≤ 1.
    pub fn l1(&self) -> T {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    pub fn scale(&self, s: T) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }

    pub fn normalized(&self) -> Self {
        self.scale(T::one() / self.norm())
    }

    pub fn distance(&self, o: &Self) -> T {
        (*self - *o).norm()
    }

    pub fn max_abs_diff(&self, o: &Self) -> T {
        let d = *self - *o;
        d.x.abs().max(d.y.abs()).max(d.z.abs())
    }

    pub fn cast<U: Scalar>(&self) -> BlochVector<U> {
        BlochVector::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()), U::lit(self.z.to_f64_lossy()))
    }

    /// Dense single-qubit density matrix.
    pub fn density_matrix(&self) -> Array2<Complex<T>> {
        let h = T::lit(0.5);
        let c = |re: T, im: T| Complex::new(re * h, im * h);
        Array2::from_shape_vec(
            (2, 2),
            vec![c(T::one() + self.z, T::zero()), c(self.x, -self.y), c(self.x, self.y), c(T::one() - self.z, T::zero())],
        )
        .expect("2x2")
    }
}

impl<T: Scalar> Add for BlochVector<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Scalar> Sub for BlochVector<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Scalar> Neg for BlochVector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl<T: Scalar> Mul<T> for BlochVector<T> {
    type Output = Self;
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Scalar> fmt::Display for BlochVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = f.precision().unwrap_or(6);
        write!(f, "({:.p$}, {:.p$}, {:.p$})", self.x, self.y, self.z)
    }
}

/// Bloch-space action of a single-qubit Clifford: one of the 24 rotations of
/// the octahedron, stored as a signed permutation `out[i] = sign[i]·in[perm[i]]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CliffordRotation {
    perm: [u8; 3],
    sign: [i8; 3],
}

const AXES: [char; 3] = ['x', 'y', 'z'];

impl CliffordRotation {
    pub const IDENTITY: Self = Self { perm: [0, 1, 2], sign: [1, 1, 1] };
    /// Pauli Z conjugation, `(x, y, z) ↦ (-x, -y, z)`.
    pub const PAULI_Z: Self = Self { perm: [0, 1, 2], sign: [-1, -1, 1] };

    fn from_parts(perm: [u8; 3], sign: [i8; 3]) -> Option<Self> {
        let r = Self { perm, sign };
        (r.det() == 1).then_some(r)
    }

    /// All 24 rotations, identity first, then in `(perm, sign)` order.
    pub fn all() -> Vec<Self> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut out = vec![Self::IDENTITY];
        for perm in perms {
            for s in 0..8u8 {
                let sign = [1 - 2 * (s >> 2 & 1) as i8, 1 - 2 * (s >> 1 & 1) as i8, 1 - 2 * (s & 1) as i8];
                if let Some(r) = Self::from_parts(perm, sign) {
                    if r != Self::IDENTITY {
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    pub fn matrix(&self) -> [[i8; 3]; 3] {
        let mut m = [[0i8; 3]; 3];
        for i in 0..3 {
            m[i][self.perm[i] as usize] = self.sign[i];
        }
        m
    }

    pub fn det(&self) -> i8 {
        let m = self.matrix();
        let d = m[0][0] as i32 * (m[1][1] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][1] as i32)
            - m[0][1] as i32 * (m[1][0] as i32 * m[2][2] as i32 - m[1][2] as i32 * m[2][0] as i32)
            + m[0][2] as i32 * (m[1][0] as i32 * m[2][1] as i32 - m[1][1] as i32 * m[2][0] as i32);
        d as i8
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn apply<T: Scalar>(&self, r: &BlochVector<T>) -> BlochVector<T> {
        let a = r.to_array();
        let c = |i: usize| if self.sign[i] < 0 { -a[self.perm[i] as usize] } else { a[self.perm[i] as usize] };
        BlochVector::new(c(0), c(1), c(2))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[i] = other.perm[j];
            sign[i] = self.sign[i] * other.sign[j];
        }
        Self { perm, sign }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            sign[j] = self.sign[i];
        }
        Self { perm, sign }
    }

    /// Short name: `I`, `X`, `Y`, `Z` for Pauli conjugations, otherwise the
    /// signed image of each output axis, e.g. `+z-y+x`.
    pub fn label(&self) -> String {
        if self.perm == [0, 1, 2] {
            match self.sign {
                [1, 1, 1] => return "I".into(),
                [1, -1, -1] => return "X".into(),
                [-1, 1, -1] => return "Y".into(),
                [-1, -1, 1] => return "Z".into(),
                _ => {}
            }
        }
        (0..3)
            .map(|i| format!("{}{}", if self.sign[i] < 0 { '-' } else { '+' }, AXES[self.perm[i] as usize]))
            .collect()
    }
}

impl fmt::Display for CliffordRotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for CliffordRotation {
    type Err = Error;

    /// Accepts `I X Y Z H S` or a signed axis triple such as `-y+x+z`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let named = match s {
            "I" => Some(Self::IDENTITY),
            "X" => Some(Self { perm: [0, 1, 2], sign: [1, -1, -1] }),
            "Y" => Some(Self { perm: [0, 1, 2], sign: [-1, 1, -1] }),
            "Z" => Some(Self::PAULI_Z),
            "H" => Some(Self { perm: [2, 1, 0], sign: [1, -1, 1] }),
            "S" => Some(Self { perm: [1, 0, 2], sign: [-1, 1, 1] }),
            _ => None,
        };
        if let Some(r) = named {
            return Ok(r);
        }
        let bad = || Error::Parse(format!("invalid rotation label \"{s}\""));
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 6 {
            return Err(bad());
        }
        let mut perm = [0u8; 3];
        let mut sign = [0i8; 3];
        for i in 0..3 {
            sign[i] = match chars[2 * i] {
                '+' => 1,
                '-' => -1,
                _ => return Err(bad()),
            };
            perm[i] = AXES.iter().position(|&a| a == chars[2 * i + 1]).ok_or_else(bad)? as u8;
        }
        let mut seen = perm;
        seen.sort_unstable();
        if seen != [0, 1, 2] {
            return Err(bad());
        }
        Self::from_parts(perm, sign)
            .ok_or_else(|| Error::Parse(format!("rotation \"{s}\" has determinant -1")))
    }
}

/// Result of one round.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Evaluation<T> {
    Success { output: BlochVector<T>, p_success: T },
    /// Postselection probability below the zero threshold.
    NeverSucceeds { p_success: T },
}

impl<T: Scalar> Evaluation<T> {
    pub fn p_success(&self) -> T {
        match self {
            Evaluation::Success { p_success, .. } | Evaluation::NeverSucceeds { p_success } => *p_success,
        }
    }

    pub fn output(&self) -> Option<BlochVector<T>> {
        match self {
            Evaluation::Success { output, .. } => Some(*output),
            Evaluation::NeverSucceeds { .. } => None,
        }
    }
}

/// Anything that maps a Bloch vector to the next round's Bloch vector.
pub trait BlochMap<T: Scalar>: Sync {
    /// Copies consumed per round.
    fn n(&self) -> usize;
    fn step(&self, r: &BlochVector<T>) -> Evaluation<T>;
}

#[derive(Clone, Debug)]
struct Monomial<T> {
    // powers of x, y, z
    powers: [u8; 3],
    // p_success, x, y, z numerators, already scaled by 2^-n
    coef: [T; 4],
}

/// Precompiled one-round distillation map of a `k = 1` code.
#[derive(Clone, Debug)]
pub struct DistillationMap<T> {
    n: usize,
    // index a: base-4 digits (I=0, X=1, Y=2, Z=3), qubit 0 most significant;
    // entries ⟨0|P_a|0⟩, ⟨0|P_a|1⟩, ⟨1|P_a|1⟩
    tensor: Vec<[Complex<T>; 3]>,
    poly: Vec<Monomial<T>>,
    correction: Option<CliffordRotation>,
}

fn pauli_for_index(n: usize, a: usize) -> PauliOperator {
    use crate::pauli::Letter;
    let letters: Vec<Letter> = (0..n)
        .map(|q| match a >> (2 * (n - 1 - q)) & 3 {
            0 => Letter::I,
            1 => Letter::X,
            2 => Letter::Y,
            _ => Letter::Z,
        })
        .collect();
    PauliOperator::from_letters(&letters, false).expect("n within range")
}

impl<T: Scalar> DistillationMap<T> {
    /// Compiles the transfer tensor of a logical basis.
    pub fn from_basis(basis: &LogicalBasis<T>, correction: Option<CliffordRotation>) -> Result<Self> {
        let n = basis.n();
        let dim = 1usize << n;
        if basis.ket0.len() != dim || basis.ket1.len() != dim {
            return Err(Error::InvalidCode("logical basis vectors have mismatched lengths".into()));
        }
        basis.check_orthonormal(T::lit(T::REAL_TOL))?;
        let zero = Complex::new(T::zero(), T::zero());
        let real_tol = T::lit(T::REAL_TOL);
        let scale = T::lit(2f64.powi(-(n as i32)));
        let mut tensor = Vec::with_capacity(1 << (2 * n));
        let mut grouped: std::collections::BTreeMap<[u8; 3], [T; 4]> = Default::default();
        for a in 0..1usize << (2 * n) {
            let p = pauli_for_index(n, a);
            let mut t = [zero; 3];
            for b in 0..dim {
                let (b2, k) = p.act_on_basis(b);
                let ph = i_pow::<T>(k);
                let c0 = basis.ket0[b2].conj() * ph;
                let c1 = basis.ket1[b2].conj() * ph;
                t[0] = t[0] + c0 * basis.ket0[b];
                t[1] = t[1] + c0 * basis.ket1[b];
                t[2] = t[2] + c1 * basis.ket1[b];
            }
            if t[0].im.abs() > real_tol || t[2].im.abs() > real_tol {
                return Err(Error::Consistency(format!(
                    "diagonal transfer coefficient for {p} is not real: {} / {}",
                    t[0], t[2]
                )));
            }
            let mut powers = [0u8; 3];
            for q in 0..n {
                let d = a >> (2 * q) & 3;
                if d > 0 {
                    powers[d - 1] += 1;
                }
            }
            let e = grouped.entry(powers).or_insert([T::zero(); 4]);
            e[0] = e[0] + (t[0].re + t[2].re) * scale;
            e[1] = e[1] + (t[1].re + t[1].re) * scale;
            e[2] = e[2] - (t[1].im + t[1].im) * scale;
            e[3] = e[3] + (t[0].re - t[2].re) * scale;
            tensor.push(t);
        }
        let poly = grouped
            .into_iter()
            .filter(|(_, c)| c.iter().any(|v| v.abs() > T::lit(1e-15)))
            .map(|(powers, coef)| Monomial { powers, coef })
            .collect();
        Ok(Self { n, tensor, poly, correction })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn correction(&self) -> Option<CliffordRotation> {
        self.correction
    }

    pub fn with_correction(mut self, correction: Option<CliffordRotation>) -> Self {
        self.correction = correction;
        self
    }

    /// Borrowed view that applies `rotation` after each raw round instead of
    /// the map's own correction.
    pub fn with_rotation(&self, rotation: Option<CliffordRotation>) -> Corrected<'_, T> {
        Corrected { map: self, rotation }
    }

    /// Transfer coefficients `(⟨0|P_a|0⟩, ⟨0|P_a|1⟩, ⟨1|P_a|1⟩)` for the Pauli
    /// with base-4 index `a`.
    pub fn coefficient(&self, a: usize) -> [Complex<T>; 3] {
        self.tensor[a]
    }

    pub fn monomial_count(&self) -> usize {
        self.poly.len()
    }

    /// Output before any correction, or `None` when postselection never succeeds.
    pub fn evaluate_raw(&self, r: &BlochVector<T>) -> Evaluation<T> {
        let n = self.n;
        let mut pw = [[T::one(); crate::pauli::MAX_QUBITS + 1]; 3];
        for (k, v) in [r.x, r.y, r.z].into_iter().enumerate() {
            for e in 1..=n {
                pw[k][e] = pw[k][e - 1] * v;
            }
        }
        let mut acc = [T::zero(); 4];
        for m in &self.poly {
            let w = pw[0][m.powers[0] as usize] * pw[1][m.powers[1] as usize] * pw[2][m.powers[2] as usize];
            for (a, c) in acc.iter_mut().zip(m.coef) {
                *a = *a + c * w;
            }
        }
        finish(acc)
    }

    pub fn evaluate_with(&self, r: &BlochVector<T>, rotation: Option<&CliffordRotation>) -> Evaluation<T> {
        match (self.evaluate_raw(r), rotation) {
            (Evaluation::Success { output, p_success }, Some(rot)) => {
                Evaluation::Success { output: rot.apply(&output), p_success }
            }
            (e, _) => e,
        }
    }

    /// One round including the map's own correction.
    pub fn evaluate(&self, r: &BlochVector<T>) -> Evaluation<T> {
        self.evaluate_with(r, self.correction.as_ref())
    }

    /// Unnormalised postselected logical matrix `M_ij` for per-copy inputs,
    /// contracted directly from the full tensor.
    pub fn logical_matrix_product(&self, inputs: &[BlochVector<T>]) -> Result<[[Complex<T>; 2]; 2]> {
        if inputs.len() != self.n {
            return Err(Error::SizeMismatch(self.n, inputs.len()));
        }
        let zero = Complex::new(T::zero(), T::zero());
        // contract the last qubit (least significant digit) first
        let mut cur: Vec<[Complex<T>; 3]> = self.tensor.clone();
        for q in (0..self.n).rev() {
            let r = inputs[q];
            let w = [T::one(), r.x, r.y, r.z];
            cur = cur
                .chunks_exact(4)
                .map(|c| {
                    let mut out = [zero; 3];
                    for (d, t) in c.iter().enumerate() {
                        for k in 0..3 {
                            out[k] = out[k] + t[k] * w[d];
                        }
                    }
                    out
                })
                .collect();
        }
        let s = T::lit(2f64.powi(-(self.n as i32)));
        let t = cur[0];
        Ok([[t[0] * s, t[1] * s], [t[1].conj() * s, t[2] * s]])
    }

    /// Same as [`evaluate_raw`](Self::evaluate_raw) but through the full tensor.
    pub fn evaluate_product(&self, inputs: &[BlochVector<T>]) -> Result<Evaluation<T>> {
        let m = self.logical_matrix_product(inputs)?;
        Ok(output_from_matrix(&m))
    }
}

fn finish<T: Scalar>(acc: [T; 4]) -> Evaluation<T> {
    let s = acc[0];
    if s < T::lit(T::ZERO_PROB) {
        return Evaluation::NeverSucceeds { p_success: s.max(T::zero()) };
    }
    Evaluation::Success { output: BlochVector::new(acc[1] / s, acc[2] / s, acc[3] / s), p_success: s }
}

/// Bloch vector and success probability of an unnormalised logical matrix.
pub fn output_from_matrix<T: Scalar>(m: &[[Complex<T>; 2]; 2]) -> Evaluation<T> {
    let x = m[0][1] + m[1][0];
    let y = (m[0][1] - m[1][0]) * Complex::new(T::zero(), T::one());
    let z = m[0][0] - m[1][1];
    let s = m[0][0] + m[1][1];
    finish([s.re, x.re, y.re, z.re])
}

/// A map evaluated with a substituted correction.
#[derive(Clone, Copy, Debug)]
pub struct Corrected<'a, T> {
    map: &'a DistillationMap<T>,
    rotation: Option<CliffordRotation>,
}

impl<'a, T> Corrected<'a, T> {
    pub fn rotation(&self) -> Option<CliffordRotation> {
        self.rotation
    }
}

impl<T: Scalar> BlochMap<T> for DistillationMap<T> {
    fn n(&self) -> usize {
        self.n
    }

    fn step(&self, r: &BlochVector<T>) -> Evaluation<T> {
        self.evaluate(r)
    }
}

impl<T: Scalar> BlochMap<T> for Corrected<'_, T> {
    fn n(&self) -> usize {
        self.map.n
    }

    fn step(&self, r: &BlochVector<T>) -> Evaluation<T> {
        self.map.evaluate_with(r, self.rotation.as_ref())
    }
}

/// Compiles a code into its distillation map.
pub fn compile_map<T: Scalar>(code: &CodeSpec) -> Result<DistillationMap<T>> {
    let basis = code.logical_basis::<T>()?;
    DistillationMap::from_basis(&basis, code.correction)
}

/// Success probability obtained by measuring the stabilizer generators one
/// at a time on dense `ρ(r)^⊗n` and multiplying the conditional
/// probabilities of the `+1` outcomes.
pub fn sequential_postselection<T: Scalar>(generators: &[PauliOperator], r: &BlochVector<T>) -> Result<T> {
    let n = generators.first().map(|g| g.n()).ok_or_else(|| Error::InvalidCode("no generators".into()))?;
    let one_copy = r.density_matrix();
    let mut rho = one_copy.clone();
    for _ in 1..n {
        rho = kron(&rho, &one_copy);
    }
    let dim = 1usize << n;
    let half = Complex::new(T::lit(0.5), T::zero());
    let mut prob = T::one();
    for g in generators {
        if g.n() != n {
            return Err(Error::SizeMismatch(n, g.n()));
        }
        let before = trace(&rho);
        if before < T::lit(T::ZERO_PROB) {
            return Ok(T::zero());
        }
        let proj = (Array2::<Complex<T>>::eye(dim) + g.realize::<T>()).mapv(|v: Complex<T>| v * half);
        rho = proj.dot(&rho).dot(&proj);
        prob = prob * (trace(&rho) / before);
    }
    Ok(prob)
}

/// [`sequential_postselection`] over a code's own generators.
pub fn sequential_measurement_check<T: Scalar>(code: &CodeSpec, r: &BlochVector<T>) -> Result<T> {
    let set = code.generator_set()?;
    sequential_postselection(set.generators(), r)
}

fn trace<T: Scalar>(m: &Array2<Complex<T>>) -> T {
    m.diag().iter().fold(T::zero(), |acc, v| acc + v.re)
}

pub(crate) fn kron<T: Scalar>(a: &Array2<Complex<T>>, b: &Array2<Complex<T>>) -> Array2<Complex<T>> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    Array2::from_shape_fn((ar * br, ac * bc), |(i, j)| a[[i / br, j / bc]] * b[[i % br, j % bc]])
}

#[cfg(test)]
mod tests {
    use crate::Bloch;
    use super::*;
    use crate::registry;

    #[test]
    fn rotations_form_the_octahedral_group() {
        let all = CliffordRotation::all();
        assert_eq!(all.len(), 24);
        assert_eq!(all[0], CliffordRotation::IDENTITY);
        let set: std::collections::HashSet<_> = all.iter().copied().collect();
        assert_eq!(set.len(), 24);
        for a in &all {
            assert_eq!(a.det(), 1);
            assert_eq!(a.compose(&a.inverse()), CliffordRotation::IDENTITY);
            for b in &all {
                assert!(set.contains(&a.compose(b)));
            }
        }
    }

    #[test]
    fn rotation_labels_roundtrip() {
        for r in CliffordRotation::all() {
            assert_eq!(r.label().parse::<CliffordRotation>().unwrap(), r);
        }
        let z: CliffordRotation = "Z".parse().unwrap();
        assert_eq!(z.matrix(), [[-1, 0, 0], [0, -1, 0], [0, 0, 1]]);
        assert!("+x+y-z".parse::<CliffordRotation>().is_err());
        assert!("+x+x+z".parse::<CliffordRotation>().is_err());
        assert!("Q".parse::<CliffordRotation>().is_err());
        let h: CliffordRotation = "H".parse().unwrap();
        let v = h.apply(&Bloch::from_f64(1.0, 0.0, 0.0));
        assert_eq!(v, Bloch::from_f64(0.0, 0.0, 1.0));
    }

    #[test]
    fn mixed_input_gives_mixed_output() {
        let map = compile_map::<f64>(&registry::builtin("eq8_3qubit").unwrap()).unwrap();
        let e = map.evaluate(&BlochVector::zero());
        assert!((e.p_success() - 0.25).abs() < 1e-15);
        assert!(e.output().unwrap().norm() < 1e-15);
    }

    #[test]
    fn eq8_fixed_point() {
        let map = compile_map::<f64>(&registry::builtin("eq8_3qubit").unwrap()).unwrap();
        let fp = Bloch::from_f64(0.0, -0.83929, -0.54369);
        let e = map.evaluate(&fp);
        assert!(e.output().unwrap().max_abs_diff(&fp) < 1e-4);
        assert!(e.p_success() > 0.0 && e.p_success() <= 1.0);
    }

    #[test]
    fn full_tensor_agrees_with_polynomial() {
        let map = compile_map::<f64>(&registry::builtin("perfect_5qubit_cws").unwrap()).unwrap();
        let r = Bloch::from_f64(0.3, -0.5, 0.6);
        let a = map.evaluate_raw(&r);
        let b = map.evaluate_product(&[r; 5]).unwrap();
        assert!(a.output().unwrap().max_abs_diff(&b.output().unwrap()) < 1e-12);
        assert!((a.p_success() - b.p_success()).abs() < 1e-14);
        assert!(map.evaluate_product(&[r; 4]).is_err());
    }

    #[test]
    fn sequential_check_at_origin() {
        let code = registry::builtin("eq8_3qubit").unwrap();
        let p = sequential_measurement_check::<f64>(&code, &BlochVector::zero()).unwrap();
        assert!((p - 0.25).abs() < 1e-14);
    }

    #[test]
    fn f32_map_runs() {
        let map = compile_map::<f32>(&registry::builtin("eq8_3qubit").unwrap()).unwrap();
        let e = map.evaluate(&BlochVector::zero());
        assert!((e.p_success() - 0.25).abs() < 1e-6);
    }
}
