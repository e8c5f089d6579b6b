//! State files: JSON describing either a diagonal input or an eigen-decomposed
//! mixed state.
//!
//! ```json
//! {"n_qubits": 1, "probabilities": [0.3, 0.7], "label": "optional"}
//! {"n_qubits": 1, "eigenvalues": [0.2, 0.8],
//!  "eigenvectors": [[[0.7071067811865476, 0], [0.7071067811865476, 0]],
//!                   [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]}
//! ```
//!
//! `eigenvectors` is the matrix `V`, row-major, entries `[re, im]`; column
//! `j` is the eigenvector for `eigenvalues[j]`.

use diagport::gates::Unitary;
use diagport::qstate::{make_diagonal, DiagonalState};
use diagport::{Complex64, SPECTRAL_TOL};
use nalgebra::DMatrix;
use serde_json::{Map, Value};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("{path}: expected {expected} entries, found {found}")]
    BadDimension {
        path: String,
        expected: usize,
        found: usize,
    },

    #[error("{path}: probabilities sum to {sum}, expected 1")]
    NotNormalized { path: String, sum: f64 },

    #[error("{path}: matrix is not unitary (deviation {residual:e})")]
    NotUnitary { path: String, residual: f64 },

    #[error("{path}: {detail}")]
    Invalid { path: String, detail: String },
}

fn invalid(path: impl Into<String>, detail: impl Into<String>) -> SpecError {
    SpecError::Invalid {
        path: path.into(),
        detail: detail.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    Diagonal(DiagonalState),
    Eigen {
        eigenvalues: DiagonalState,
        eigenvectors: Unitary,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub n_qubits: usize,
    pub payload: Payload,
    pub label: Option<String>,
}

impl InputSpec {
    /// The diagonal the protocol itself runs on: the probabilities, or the
    /// eigenvalues for an eigen spec.
    pub fn diagonal(&self) -> &DiagonalState {
        match &self.payload {
            Payload::Diagonal(d) => d,
            Payload::Eigen { eigenvalues, .. } => eigenvalues,
        }
    }
}

pub fn parse_state_file(bytes: &[u8]) -> Result<InputSpec, SpecError> {
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| SpecError::MalformedJson(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| invalid("$", "expected a JSON object"))?;
    for key in obj.keys() {
        if !matches!(
            key.as_str(),
            "n_qubits" | "probabilities" | "eigenvalues" | "eigenvectors" | "label"
        ) {
            return Err(invalid(format!("$.{key}"), "unknown field"));
        }
    }

    let n_qubits = obj
        .get("n_qubits")
        .ok_or_else(|| invalid("$.n_qubits", "missing"))?
        .as_u64()
        .filter(|&n| (1..=30).contains(&n))
        .ok_or_else(|| invalid("$.n_qubits", "expected an integer in 1..=30"))?
        as usize;
    let dim = 1usize << n_qubits;

    let label = match obj.get("label") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s.clone()),
        Some(_) => return Err(invalid("$.label", "expected a string")),
    };

    let has = |k: &str| obj.contains_key(k);
    let payload = match (
        has("probabilities"),
        has("eigenvalues"),
        has("eigenvectors"),
    ) {
        (true, false, false) => Payload::Diagonal(probabilities(obj, "probabilities", dim)?),
        (false, true, true) => Payload::Eigen {
            eigenvalues: probabilities(obj, "eigenvalues", dim)?,
            eigenvectors: eigenvectors(&obj["eigenvectors"], dim)?,
        },
        (false, true, false) => {
            return Err(invalid(
                "$.eigenvectors",
                "missing (required with eigenvalues)",
            ))
        }
        (false, false, true) => {
            return Err(invalid(
                "$.eigenvalues",
                "missing (required with eigenvectors)",
            ))
        }
        (false, false, false) => {
            return Err(invalid(
                "$",
                "needs either probabilities or eigenvalues+eigenvectors",
            ))
        }
        _ => {
            return Err(invalid(
                "$",
                "probabilities and eigenvalues/eigenvectors are mutually exclusive",
            ))
        }
    };

    Ok(InputSpec {
        n_qubits,
        payload,
        label,
    })
}

fn numbers(value: &Value, path: &str, expected: usize) -> Result<Vec<f64>, SpecError> {
    let arr = value
        .as_array()
        .ok_or_else(|| invalid(path, "expected an array"))?;
    if arr.len() != expected {
        return Err(SpecError::BadDimension {
            path: path.to_owned(),
            expected,
            found: arr.len(),
        });
    }
    arr.iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_f64()
                .ok_or_else(|| invalid(format!("{path}[{i}]"), "expected a number"))
        })
        .collect()
}

fn probabilities(
    obj: &Map<String, Value>,
    key: &str,
    dim: usize,
) -> Result<DiagonalState, SpecError> {
    let path = format!("$.{key}");
    let values = numbers(&obj[key], &path, dim)?;
    make_diagonal(&values).map_err(|e| match e {
        diagport::Error::NotNormalized { sum } => SpecError::NotNormalized { path, sum },
        diagport::Error::NegativeProbability { index, value } => invalid(
            format!("{path}[{index}]"),
            format!("negative probability {value}"),
        ),
        other => invalid(path, other.to_string()),
    })
}

fn eigenvectors(value: &Value, dim: usize) -> Result<Unitary, SpecError> {
    let path = "$.eigenvectors";
    let rows = value
        .as_array()
        .ok_or_else(|| invalid(path, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(SpecError::BadDimension {
            path: path.to_owned(),
            expected: dim,
            found: rows.len(),
        });
    }
    let mut m = DMatrix::from_element(dim, dim, Complex64::new(0.0, 0.0));
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{path}[{i}]");
        let entries = row
            .as_array()
            .ok_or_else(|| invalid(&row_path, "expected an array"))?;
        if entries.len() != dim {
            return Err(SpecError::BadDimension {
                path: row_path,
                expected: dim,
                found: entries.len(),
            });
        }
        for (j, z) in entries.iter().enumerate() {
            let pair = numbers(z, &format!("{row_path}[{j}]"), 2)?;
            m[(i, j)] = Complex64::new(pair[0], pair[1]);
        }
    }
    Unitary::with_tolerance(m, SPECTRAL_TOL).map_err(|e| match e {
        diagport::Error::NotUnitary(residual) => SpecError::NotUnitary {
            path: path.to_owned(),
            residual,
        },
        other => invalid(path, other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_spec() {
        let spec = parse_state_file(br#"{"n_qubits":1,"probabilities":[0.3,0.7]}"#).unwrap();
        assert_eq!(spec.n_qubits, 1);
        assert_eq!(spec.diagonal().probs(), &[0.3, 0.7]);
        assert_eq!(spec.label, None);
    }

    #[test]
    fn wrong_length_names_path() {
        let err = parse_state_file(br#"{"n_qubits":2,"probabilities":[0.5,0.5]}"#).unwrap_err();
        assert_eq!(
            err,
            SpecError::BadDimension {
                path: "$.probabilities".into(),
                expected: 4,
                found: 2
            }
        );
    }

    #[test]
    fn hadamard_eigenbasis_spec() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let text = format!(
            r#"{{"n_qubits":1,"eigenvalues":[0.2,0.8],"eigenvectors":[[[{h},0],[{h},0]],[[{h},0],[-{h},0]]]}}"#
        );
        let spec = parse_state_file(text.as_bytes()).unwrap();
        let Payload::Eigen {
            eigenvalues,
            eigenvectors,
        } = &spec.payload
        else {
            panic!("eigen payload expected")
        };
        assert_eq!(eigenvalues.probs(), &[0.2, 0.8]);
        assert!((eigenvectors.matrix()[(1, 1)].re + h).abs() < 1e-15);
    }

    #[test]
    fn four_digit_hadamard_is_not_unitary_enough() {
        let text = br#"{"n_qubits":1,"eigenvalues":[0.2,0.8],"eigenvectors":[[[0.7071,0],[0.7071,0]],[[0.7071,0],[-0.7071,0]]]}"#;
        assert!(matches!(
            parse_state_file(text),
            Err(SpecError::NotUnitary { ref path, .. }) if path == "$.eigenvectors"
        ));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(
            parse_state_file(b"{"),
            Err(SpecError::MalformedJson(_))
        ));
        assert!(matches!(
            parse_state_file(br#"{"n_qubits":1,"probabilities":[0.3,0.8]}"#),
            Err(SpecError::NotNormalized { .. })
        ));
        let e = parse_state_file(br#"{"n_qubits":1,"probabilities":[-0.5,1.5]}"#).unwrap_err();
        assert_eq!(
            e.to_string(),
            "$.probabilities[0]: negative probability -0.5"
        );
        let e = parse_state_file(br#"{"n_qubits":1,"probabilities":[0.5,"x"]}"#).unwrap_err();
        assert!(e.to_string().starts_with("$.probabilities[1]"));
        let e =
            parse_state_file(br#"{"n_qubits":1,"probabilities":[0.5,0.5],"eigenvalues":[1,0]}"#)
                .unwrap_err();
        assert!(e.to_string().contains("mutually exclusive"));
        let e = parse_state_file(br#"{"n_qubits":1,"eigenvalues":[1,0]}"#).unwrap_err();
        assert!(e.to_string().starts_with("$.eigenvectors"));
        let e = parse_state_file(br#"{"n_qubits":0,"probabilities":[1]}"#).unwrap_err();
        assert!(e.to_string().starts_with("$.n_qubits"));
        let e =
            parse_state_file(br#"{"n_qubits":1,"probabilities":[0.5,0.5],"extra":1}"#).unwrap_err();
        assert!(e.to_string().starts_with("$.extra"));
        let e = parse_state_file(
            br#"{"n_qubits":1,"eigenvalues":[0.5,0.5],"eigenvectors":[[[1,0],[0,0]],[[0,0]]]}"#,
        )
        .unwrap_err();
        assert!(
            matches!(e, SpecError::BadDimension { ref path, .. } if path == "$.eigenvectors[1]")
        );
    }
}
