//! Built-in codes.

use crate::cws::{self, CwsCode, Graph, LogicalBasis};
use crate::distill::CliffordRotation;
use crate::error::{Error, Result};
use crate::pauli::GeneratorSet;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub enum CodeBody {
    Cws(CwsCode),
    Stabilizer(GeneratorSet),
}

/// Values a code is known to reproduce, with where they come from.
#[derive(Clone, Debug, PartialEq)]
pub struct Expected {
    pub fixed_point: Option<[f64; 3]>,
    pub threshold: Option<f64>,
    pub tolerance: f64,
    pub source: &'static str,
}

/// A distillation code plus the Clifford correction applied between rounds.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpec {
    pub name: String,
    pub body: CodeBody,
    pub correction: Option<CliffordRotation>,
    pub expected: Option<Expected>,
}

impl CodeSpec {
    pub fn cws(name: impl Into<String>, code: CwsCode) -> Self {
        Self { name: name.into(), body: CodeBody::Cws(code), correction: None, expected: None }
    }

    pub fn stabilizer(name: impl Into<String>, set: GeneratorSet) -> Self {
        Self { name: name.into(), body: CodeBody::Stabilizer(set), correction: None, expected: None }
    }

    pub fn with_correction(mut self, correction: Option<CliffordRotation>) -> Self {
        self.correction = correction.filter(|r| !r.is_identity());
        self
    }

    pub fn n(&self) -> usize {
        match &self.body {
            CodeBody::Cws(c) => c.n(),
            CodeBody::Stabilizer(s) => s.n(),
        }
    }

    pub fn logical_basis<T: Scalar>(&self) -> Result<LogicalBasis<T>> {
        match &self.body {
            CodeBody::Cws(c) => Ok(cws::logical_basis(c)),
            CodeBody::Stabilizer(s) => cws::basis_from_generators(s),
        }
    }

    pub fn generator_set(&self) -> Result<GeneratorSet> {
        match &self.body {
            CodeBody::Cws(c) => cws::codespace_generators(c),
            CodeBody::Stabilizer(s) => Ok(s.clone()),
        }
    }

    pub fn as_cws(&self) -> Option<&CwsCode> {
        match &self.body {
            CodeBody::Cws(c) => Some(c),
            CodeBody::Stabilizer(_) => None,
        }
    }
}

pub const BUILTIN_NAMES: &[&str] =
    &["eq8_3qubit", "steane_7qubit", "perfect_5qubit_cws", "golden_3qubit_cws", "h_5qubit_cws"];

fn cws_code(rows: &str, w: &str) -> CwsCode {
    CwsCode::with_codeword_str(Graph::parse_rows(rows).expect("builtin graph"), w).expect("builtin codeword")
}

pub fn builtin(name: &str) -> Result<CodeSpec> {
    let spec = match name {
        // 3-qubit code distilling an equatorial state in the y-z plane.
        "eq8_3qubit" => CodeSpec {
            expected: Some(Expected {
                fixed_point: Some([0.0, -0.83929, -0.54369]),
                threshold: Some(0.276921),
                tolerance: 1e-4,
                source: "3-qubit generator table ZIZ, XZX; Z_L = XXY, X_L = IXZ",
            }),
            ..CodeSpec::stabilizer("eq8_3qubit", GeneratorSet::parse(&["ZIZ", "XZX"], "XXY", "IXZ")?)
        },
        // [[7,1,3]] CSS code with transversal logicals.
        "steane_7qubit" => CodeSpec {
            expected: Some(Expected {
                fixed_point: Some([std::f64::consts::FRAC_1_SQRT_2, 0.0, std::f64::consts::FRAC_1_SQRT_2]),
                threshold: Some(1.0 - std::f64::consts::FRAC_1_SQRT_2),
                tolerance: 1e-3,
                source: "H-type distillation with the Steane code",
            }),
            ..CodeSpec::stabilizer(
                "steane_7qubit",
                GeneratorSet::parse(
                    &["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
                    "ZZZZZZZ",
                    "XXXXXXX",
                )?,
            )
        },
        // [[5,1,3]] code as the 5-cycle with w = 11111. Raw rounds cycle
        // through T-type points, a Z correction makes (1,1,1)/√3 fixed.
        "perfect_5qubit_cws" => CodeSpec {
            expected: Some(Expected {
                fixed_point: Some([1.0 / 3f64.sqrt(); 3]),
                threshold: Some(0.345346),
                tolerance: 1e-4,
                source: "T-type distillation with the perfect 5-qubit code",
            }),
            ..CodeSpec::cws("perfect_5qubit_cws", cws_code("01001;10100;01010;00101;10010", "11111"))
                .with_correction(Some(CliffordRotation::PAULI_Z))
        },
        // Found by the n = 3 sweep: tight, fixed point (sin θ, 0, cos θ) with
        // tan²θ = (√5 - 1)/2.
        "golden_3qubit_cws" => {
            let theta = ((5f64.sqrt() - 1.0) / 2.0).sqrt().atan();
            CodeSpec {
                expected: Some(Expected {
                    fixed_point: Some([theta.sin(), 0.0, theta.cos()]),
                    threshold: Some(0.287843),
                    tolerance: 1e-4,
                    source: "3-qubit CWS code recovered by the exhaustive sweep",
                }),
                ..CodeSpec::cws("golden_3qubit_cws", cws_code(GOLDEN_ROWS, GOLDEN_W)).with_correction(GOLDEN_CORRECTION)
            }
        }
        // Found by the n = 5 sweep: tight H-type distiller. Its fixed point
        // (1,0,-1)/√2 is canonically equivalent to (1,0,1)/√2.
        "h_5qubit_cws" => CodeSpec {
            expected: Some(Expected {
                fixed_point: Some([std::f64::consts::FRAC_1_SQRT_2, 0.0, -std::f64::consts::FRAC_1_SQRT_2]),
                threshold: Some(1.0 - std::f64::consts::FRAC_1_SQRT_2),
                tolerance: 1e-3,
                source: "5-qubit CWS code recovered by the exhaustive sweep",
            }),
            ..CodeSpec::cws("h_5qubit_cws", cws_code(H5_ROWS, H5_W)).with_correction(H5_CORRECTION)
        },
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    };
    Ok(spec)
}

/// Single edge between qubits 0 and 2, `w = 011`.
const GOLDEN_ROWS: &str = "001;000;100";
const GOLDEN_W: &str = "011";
const GOLDEN_CORRECTION: Option<CliffordRotation> = None;
/// Path 0-4-2-3-1, `w = 11000`.
const H5_ROWS: &str = "00001;00010;00011;01100;10100";
const H5_W: &str = "11000";
const H5_CORRECTION: Option<CliffordRotation> = None;
