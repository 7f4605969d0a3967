//! n-qubit Pauli operators in binary symplectic form.
//!
//! An operator is stored as `i^phase · X^x · Z^z`, where `x` and `z` are bit
//! masks over the qubits. Qubit 0 is the leftmost letter of the string form
//! and the most significant bit of a computational basis index, so that
//! `realize` agrees with the usual left-to-right Kronecker product.
//!
//! With this convention `Y = i·X·Z`: the letter `Y` is stored as `x = z = 1`
//! with one extra power of `i` in the phase.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_QUBITS: usize = 8;

/// Global phase of a Pauli operator, a power of `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    PlusOne,
    PlusI,
    MinusOne,
    MinusI,
}

impl Phase {
    pub fn from_power(k: u8) -> Self {
        match k & 3 {
            0 => Phase::PlusOne,
            1 => Phase::PlusI,
            2 => Phase::MinusOne,
            _ => Phase::MinusI,
        }
    }

    pub fn power(self) -> u8 {
        match self {
            Phase::PlusOne => 0,
            Phase::PlusI => 1,
            Phase::MinusOne => 2,
            Phase::MinusI => 3,
        }
    }

    pub fn to_complex<T: Scalar>(self) -> Complex<T> {
        i_pow(self.power())
    }
}

pub(crate) fn i_pow<T: Scalar>(k: u8) -> Complex<T> {
    match k & 3 {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        _ => Complex::new(T::zero(), -T::one()),
    }
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    n: u8,
    x: u16,
    z: u16,
    phase: u8,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::SizeOutOfRange(n, 1, MAX_QUBITS))
    } else {
        Ok(())
    }
}

impl PauliOperator {
    pub fn identity(n: usize) -> Result<Self> {
        check_size(n)?;
        Ok(Self { n: n as u8, x: 0, z: 0, phase: 0 })
    }

    /// Builds `i^phase · X^x · Z^z`. Bit `n-1-k` of each mask addresses qubit `k`.
    pub fn from_bits(n: usize, x: u16, z: u16, phase: Phase) -> Result<Self> {
        check_size(n)?;
        let mask = Self::full_mask(n);
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::Parse(format!("bit mask wider than {n} qubits")));
        }
        Ok(Self { n: n as u8, x, z, phase: phase.power() })
    }

    /// Builds an operator from letters and a sign, e.g. `[X, Z, X]` with `+1`.
    pub fn from_letters(letters: &[Letter], negative: bool) -> Result<Self> {
        let n = letters.len();
        check_size(n)?;
        let (mut x, mut z, mut phase) = (0u16, 0u16, if negative { 2u8 } else { 0 });
        for (k, l) in letters.iter().enumerate() {
            let bit = 1u16 << (n - 1 - k);
            let (bx, bz) = l.bits();
            if bx {
                x |= bit;
            }
            if bz {
                z |= bit;
            }
            if *l == Letter::Y {
                phase += 1;
            }
        }
        Ok(Self { n: n as u8, x, z, phase: phase & 3 })
    }

    /// `Z` on every qubit where `mask` has a one.
    pub fn z_string(n: usize, mask: u16) -> Result<Self> {
        Self::from_bits(n, 0, mask, Phase::PlusOne)
    }

    pub fn full_mask(n: usize) -> u16 {
        ((1u32 << n) - 1) as u16
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn x_bits(&self) -> u16 {
        self.x
    }

    pub fn z_bits(&self) -> u16 {
        self.z
    }

    pub fn phase(&self) -> Phase {
        Phase::from_power(self.phase)
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        let bit = 1u16 << (self.n() - 1 - qubit);
        Letter::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.n()).map(|q| self.letter(q)).collect()
    }

    fn y_count(&self) -> u8 {
        (self.x & self.z).count_ones() as u8
    }

    /// Phase relative to the letter product, i.e. `self = i^k · (⊗ letters)`.
    pub fn letter_phase(&self) -> Phase {
        Phase::from_power(self.phase.wrapping_sub(self.y_count()) & 3)
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(self.letter_phase(), Phase::PlusOne | Phase::MinusOne)
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn negate(&self) -> Self {
        Self { phase: (self.phase + 2) & 3, ..*self }
    }

    fn same_size(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::SizeMismatch(self.n(), other.n()))
        } else {
            Ok(())
        }
    }

    /// Symplectic product `x_a·z_b + z_a·x_b` (mod 2) is zero.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.same_size(other)?;
        let s = (self.x & other.z).count_ones() + (self.z & other.x).count_ones();
        Ok(s % 2 == 0)
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.same_size(other)?;
        // X^a Z^b X^c Z^d = (-1)^{|b & c|} X^{a^c} Z^{b^d}
        let swap = 2 * ((self.z & other.x).count_ones() % 2) as u8;
        Ok(Self {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + swap) & 3,
        })
    }

    /// Action on a single computational basis state: `P|b⟩ = i^k |b'⟩`.
    pub fn act_on_basis(&self, b: usize) -> (usize, u8) {
        let sign = 2 * ((self.z as usize & b).count_ones() % 2) as u8;
        (b ^ self.x as usize, (self.phase + sign) & 3)
    }

    /// Applies the operator to a dense state vector of length `2^n`.
    pub fn apply<T: Scalar>(&self, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(psi.len(), 1 << self.n(), "state dimension mismatch");
        let mut out = vec![Complex::new(T::zero(), T::zero()); psi.len()];
        for (b, amp) in psi.iter().enumerate() {
            let (b2, k) = self.act_on_basis(b);
            out[b2] = *amp * i_pow::<T>(k);
        }
        out
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn realize<T: Scalar>(&self) -> Array2<Complex<T>> {
        let dim = 1usize << self.n();
        let mut m = Array2::from_elem((dim, dim), Complex::new(T::zero(), T::zero()));
        for col in 0..dim {
            let (row, k) = self.act_on_basis(col);
            m[[row, col]] = i_pow(k);
        }
        m
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.letter_phase() {
            Phase::PlusOne => "",
            Phase::MinusOne => "-",
            Phase::PlusI => "i",
            Phase::MinusI => "-i",
        };
        f.write_str(prefix)?;
        for l in self.letters() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Parses `[+-]?[IXYZ]{1,8}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.chars().next() {
            Some('-') => (true, &s[1..]),
            Some('+') => (false, &s[1..]),
            _ => (false, s),
        };
        let mut letters = Vec::with_capacity(body.len());
        for (i, c) in body.chars().enumerate() {
            let l = match c {
                'I' => Letter::I,
                'X' => Letter::X,
                'Y' => Letter::Y,
                'Z' => Letter::Z,
                other => {
                    return Err(Error::Parse(format!(
                        "invalid Pauli character '{other}' at position {i} in \"{s}\""
                    )))
                }
            };
            letters.push(l);
        }
        if letters.is_empty() {
            return Err(Error::Parse(format!("empty Pauli string \"{s}\"")));
        }
        if letters.len() > MAX_QUBITS {
            return Err(Error::Parse(format!(
                "Pauli string \"{s}\" has {} qubits, at most {MAX_QUBITS} supported",
                letters.len()
            )));
        }
        Self::from_letters(&letters, negative)
    }
}

/// Stabilizer generators of a `k = 1` code together with its logical operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    generators: Vec<PauliOperator>,
    logical_z: PauliOperator,
    logical_x: PauliOperator,
}

impl GeneratorSet {
    /// Validates and builds a generator set.
    ///
    /// Requires `n - 1` mutually commuting Hermitian generators, Hermitian
    /// logicals commuting with all of them, `{Z_L, X_L} = 0`, and that the
    /// group generated by the generators and `Z_L` has `2^n` elements and
    /// no `-1`.
    pub fn new(
        generators: Vec<PauliOperator>,
        logical_z: PauliOperator,
        logical_x: PauliOperator,
    ) -> Result<Self> {
        let n = logical_z.n();
        let invalid = |m: String| Err(Error::InvalidCode(m));
        for p in generators.iter().chain([&logical_x]) {
            if p.n() != n {
                return Err(Error::SizeMismatch(n, p.n()));
            }
        }
        if generators.len() + 1 != n {
            return invalid(format!("expected {} generators for n = {n}, got {}", n - 1, generators.len()));
        }
        for p in generators.iter().chain([&logical_z, &logical_x]) {
            if !p.is_hermitian() {
                return invalid(format!("{p} is not Hermitian"));
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return invalid(format!("generators {a} and {b} anticommute"));
                }
            }
            if !a.commutes(&logical_z)? || !a.commutes(&logical_x)? {
                return invalid(format!("generator {a} anticommutes with a logical operator"));
            }
        }
        if logical_z.commutes(&logical_x)? {
            return invalid(format!("logical Z {logical_z} commutes with logical X {logical_x}"));
        }
        let set = Self { n, generators, logical_z, logical_x };
        let group = set.stabilizer_group_with_logical_z();
        let mut seen = std::collections::HashSet::new();
        for g in &group {
            if g.is_identity_up_to_phase() && g.phase() != Phase::PlusOne {
                return invalid(format!("generated group contains {g}"));
            }
            if !seen.insert((g.x_bits(), g.z_bits())) {
                return invalid("generators with logical Z are not independent".into());
            }
        }
        Ok(set)
    }

    pub fn parse(generators: &[&str], logical_z: &str, logical_x: &str) -> Result<Self> {
        let gens = generators.iter().map(|s| s.parse()).collect::<Result<Vec<_>>>()?;
        Self::new(gens, logical_z.parse()?, logical_x.parse()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn logical_z(&self) -> &PauliOperator {
        &self.logical_z
    }

    pub fn logical_x(&self) -> &PauliOperator {
        &self.logical_x
    }

    /// All `2^n` products of subsets of `{generators, logical_z}`.
    pub fn stabilizer_group_with_logical_z(&self) -> Vec<PauliOperator> {
        let mut all = self.generators.clone();
        all.push(self.logical_z);
        subset_products(self.n, &all)
    }

    /// Dense codespace projector `∏ (1 + G)/2`.
    pub fn projector<T: Scalar>(&self) -> Array2<Complex<T>> {
        let dim = 1usize << self.n;
        let half = Complex::new(T::lit(0.5), T::zero());
        let mut proj: Array2<Complex<T>> = Array2::eye(dim);
        for g in &self.generators {
            let factor = (Array2::<Complex<T>>::eye(dim) + g.realize::<T>()).mapv(|v: Complex<T>| v * half);
            proj = proj.dot(&factor);
        }
        proj
    }
}

pub(crate) fn subset_products(n: usize, ops: &[PauliOperator]) -> Vec<PauliOperator> {
    let id = PauliOperator::identity(n).expect("size validated by caller");
    (0..1usize << ops.len())
        .map(|mask| {
            ops.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .fold(id, |acc, (_, p)| acc.multiply(p).expect("same size"))
        })
        .collect()
}
