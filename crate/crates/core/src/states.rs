//! Named example states, inline JSON states, and random states.
//!
//! Registry (qubit order: the first tensor factor is the leftmost arrow):
//!
//! | name         | n   | state                                      |
//! |--------------|-----|--------------------------------------------|
//! | `up`         | 1   | \|0>                                       |
//! | `down`       | 1   | \|1>                                       |
//! | `plus`       | 1   | (\|0> + \|1>)/sqrt2                        |
//! | `minus`      | 1   | (\|0> - \|1>)/sqrt2                        |
//! | `y+`         | 1   | (\|0> + i\|1>)/sqrt2                       |
//! | `y-`, `y−`   | 1   | (\|0> - i\|1>)/sqrt2                       |
//! | `tilted-111` | 1   | -1 eigenstate of (X + Y + Z)/sqrt3         |
//! | `upup`       | 2   | \|00>                                      |
//! | `upright`    | 2   | \|0> (\|0> + \|1>)/sqrt2                   |
//! | `singlet`    | 2   | (\|01> - \|10>)/sqrt2                      |
//! | `bell0`      | 2   | (\|00> + \|11>)/sqrt2                      |
//! | `mixed`      | any | I/N                                        |
//!
//! Inline states are JSON. A complex entry is `[re, im]`, a real entry a
//! bare number. A flat list is a state vector, a list of rows a density
//! matrix. A list of pairs is read as a complex vector; wrap the value as
//! `{"rho": ...}` or `{"vector": ...}` to force either reading.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::linalg::{self, c, ComplexMatrix, StateVector, ONE, ZERO};
use crate::operators::pauli;

pub const NORMALIZATION_TOL: f64 = 1e-9;

pub const REGISTRY: &[&str] = &[
    "up",
    "down",
    "plus",
    "minus",
    "y+",
    "y-",
    "tilted-111",
    "upup",
    "upright",
    "singlet",
    "bell0",
    "mixed",
];

#[derive(Clone, Debug)]
pub struct ParsedState {
    pub rho: ComplexMatrix,
    /// The pure state, when the input was a vector or a pure registry entry.
    pub vector: Option<StateVector>,
    /// Set when an inline vector had to be rescaled to unit norm.
    pub renormalized: bool,
}

fn ket(entries: &[Complex64]) -> StateVector {
    StateVector::from_column_slice(entries).normalize()
}

fn registry_vector(name: &str) -> Option<(u32, StateVector)> {
    let h = FRAC_1_SQRT_2;
    let i = c(0.0, 1.0);
    let v = match name {
        "up" => (1, ket(&[ONE, ZERO])),
        "down" => (1, ket(&[ZERO, ONE])),
        "plus" => (1, ket(&[ONE, ONE])),
        "minus" => (1, ket(&[ONE, -ONE])),
        "y+" => (1, ket(&[ONE, i])),
        "y-" | "y−" => (1, ket(&[ONE, -i])),
        "upup" => (2, ket(&[ONE, ZERO, ZERO, ZERO])),
        "upright" => (2, ket(&[ONE, ONE, ZERO, ZERO])),
        "singlet" => (2, ket(&[ZERO, ONE, -ONE, ZERO])),
        "bell0" => (
            2,
            StateVector::from_vec(vec![c(h, 0.0), ZERO, ZERO, c(h, 0.0)]),
        ),
        _ => return None,
    };
    Some(v)
}

/// (I - (X + Y + Z)/sqrt3) / 2.
pub fn tilted_111() -> ComplexMatrix {
    let sum = pauli("X").unwrap() + pauli("Y").unwrap() + pauli("Z").unwrap();
    (ComplexMatrix::identity(2, 2) - sum * c(1.0 / 3f64.sqrt(), 0.0)) * c(0.5, 0.0)
}

pub fn maximally_mixed(n: u32) -> ComplexMatrix {
    let dim = 1usize << n;
    ComplexMatrix::identity(dim, dim) * c(1.0 / dim as f64, 0.0)
}

/// Look up a registry state for `n` qubits.
pub fn named_state(name: &str, n: u32) -> Result<ParsedState> {
    let dim = 1usize << n;
    if name == "mixed" {
        return Ok(ParsedState {
            rho: maximally_mixed(n),
            vector: None,
            renormalized: false,
        });
    }
    if name == "tilted-111" {
        if n != 1 {
            return Err(Error::InvalidState(format!(
                "state '{name}' needs n=1, got n={n}"
            )));
        }
        return Ok(ParsedState {
            rho: tilted_111(),
            vector: None,
            renormalized: false,
        });
    }
    let (needed, v) = registry_vector(name).ok_or_else(|| Error::UnknownState(name.into()))?;
    if needed != n {
        return Err(Error::InvalidState(format!(
            "state '{name}' needs n={needed}, got n={n}"
        )));
    }
    debug_assert_eq!(v.len(), dim);
    Ok(ParsedState {
        rho: linalg::projector(&v),
        vector: Some(v),
        renormalized: false,
    })
}

fn entry(v: &Value) -> Result<Complex64> {
    match v {
        Value::Number(x) => Ok(c(x.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => match (pair[0].as_f64(), pair[1].as_f64()) {
            (Some(re), Some(im)) => Ok(c(re, im)),
            _ => Err(Error::Json(format!("bad complex entry {v}"))),
        },
        _ => Err(Error::Json(format!("bad entry {v}"))),
    }
}

fn is_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(Value::is_number))
}

fn parse_vector(items: &[Value]) -> Result<StateVector> {
    let entries = items.iter().map(entry).collect::<Result<Vec<_>>>()?;
    Ok(StateVector::from_vec(entries))
}

fn parse_matrix(rows: &[Value]) -> Result<ComplexMatrix> {
    let n = rows.len();
    let mut data = Vec::with_capacity(n * n);
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Json("matrix rows must be arrays".into()))?;
        if row.len() != n {
            return Err(Error::Json(format!(
                "matrix must be square: row of length {} in a {n}-row matrix",
                row.len()
            )));
        }
        for x in row {
            data.push(entry(x)?);
        }
    }
    Ok(ComplexMatrix::from_row_slice(n, n, &data))
}

fn from_vector(v: StateVector, dim: usize) -> Result<ParsedState> {
    if v.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: v.len(),
        });
    }
    let norm = v.norm();
    if !norm.is_finite() || norm < 1e-12 {
        return Err(Error::InvalidState("state vector has zero norm".into()));
    }
    let renormalized = (norm - 1.0).abs() > NORMALIZATION_TOL;
    let v = if renormalized { v / c(norm, 0.0) } else { v };
    Ok(ParsedState {
        rho: linalg::projector(&v),
        vector: Some(v),
        renormalized,
    })
}

fn from_matrix(rho: ComplexMatrix, dim: usize) -> Result<ParsedState> {
    linalg::check_density(&rho, dim)?;
    Ok(ParsedState {
        rho,
        vector: None,
        renormalized: false,
    })
}

/// Parse an inline JSON state for `n` qubits.
pub fn parse_inline(text: &str, n: u32) -> Result<ParsedState> {
    let dim = 1usize << n;
    let value: Value = serde_json::from_str(text)?;
    match &value {
        Value::Object(map) => {
            if let Some(Value::Array(items)) = map.get("vector") {
                return from_vector(parse_vector(items)?, dim);
            }
            if let Some(Value::Array(rows)) = map.get("rho") {
                return from_matrix(parse_matrix(rows)?, dim);
            }
            Err(Error::Json("expected a \"vector\" or \"rho\" key".into()))
        }
        Value::Array(items) => {
            if items.iter().all(|x| x.is_number() || is_pair(x)) {
                from_vector(parse_vector(items)?, dim)
            } else {
                from_matrix(parse_matrix(items)?, dim)
            }
        }
        _ => Err(Error::Json("a state must be a JSON array or object".into())),
    }
}

/// Registry name, or inline JSON when the text starts with `[` or `{`.
pub fn parse_state(spec: &str, n: u32) -> Result<ParsedState> {
    let trimmed = spec.trim();
    if trimmed.starts_with('[') || trimmed.starts_with('{') {
        parse_inline(trimmed, n)
    } else {
        named_state(trimmed, n)
    }
}

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random pure state.
pub fn random_pure_state<R: Rng + ?Sized>(n: u32, rng: &mut R) -> StateVector {
    let dim = 1usize << n;
    gaussian_matrix(dim, 1, rng).column(0).normalize()
}

/// Hilbert-Schmidt random density matrix, G G^dagger / tr.
pub fn random_density_matrix<R: Rng + ?Sized>(n: u32, rng: &mut R) -> ComplexMatrix {
    let dim = 1usize << n;
    let g = gaussian_matrix(dim, dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = m * c(1.0 / tr, 0.0);
    (&m + m.adjoint()) * c(0.5, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn registry_states_are_valid() {
        for name in REGISTRY {
            let n = match *name {
                "upup" | "upright" | "singlet" | "bell0" => 2,
                _ => 1,
            };
            let st = named_state(name, n).unwrap();
            linalg::check_density(&st.rho, 1 << n).unwrap();
            assert!(((&st.rho * &st.rho).trace().re - 1.0).abs() < 1e-12 || *name == "mixed");
        }
        assert!(named_state("y−", 1).is_ok());
    }

    #[test]
    fn tilted_state_is_the_negative_eigenvector() {
        let rho = tilted_111();
        let obs = (pauli("X").unwrap() + pauli("Y").unwrap() + pauli("Z").unwrap())
            * c(1.0 / 3f64.sqrt(), 0.0);
        assert!(((&rho * obs).trace().re + 1.0).abs() < 1e-12);
    }

    #[test]
    fn wrong_arity_and_unknown_names() {
        assert!(matches!(
            named_state("singlet", 1),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            named_state("tilted-111", 2),
            Err(Error::InvalidState(_))
        ));
        assert!(matches!(
            named_state("sideways", 1),
            Err(Error::UnknownState(_))
        ));
        assert_eq!(named_state("mixed", 3).unwrap().rho.nrows(), 8);
    }

    #[test]
    fn inline_parsing() {
        let v = parse_state("[1, 1]", 1).unwrap();
        assert!(v.renormalized);
        assert!((v.rho[(0, 1)].re - 0.5).abs() < 1e-12);

        let y = parse_state("[[0.7071067811865476,0],[0,0.7071067811865476]]", 1).unwrap();
        assert!(!y.renormalized);
        assert!((y.rho[(1, 0)] - c(0.0, 0.5)).norm() < 1e-12);

        let rho = parse_state(r#"{"rho": [[0.5, 0], [0, 0.5]]}"#, 1).unwrap();
        assert!((rho.rho[(1, 1)].re - 0.5).abs() < 1e-15);
        let complex_rows = parse_state("[[[1,0],[0,0]],[[0,0],[0,0]]]", 1).unwrap();
        assert!((complex_rows.rho[(0, 0)].re - 1.0).abs() < 1e-15);
        let diag = parse_state("[[0.25,0,0,0],[0,0.25,0,0],[0,0,0.25,0],[0,0,0,0.25]]", 2).unwrap();
        assert!((diag.rho[(3, 3)].re - 0.25).abs() < 1e-15);

        assert!(parse_state("[1, 0, 0]", 1).is_err());
        assert!(parse_state("[0, 0]", 1).is_err());
        assert!(parse_state(r#"{"rho": [[1, 0], [0, 1]]}"#, 1).is_err());
        assert!(parse_state("[1, ", 1).is_err());
    }

    #[test]
    fn random_states_are_physical() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let v = random_pure_state(n, &mut rng);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            linalg::check_density(&random_density_matrix(n, &mut rng), 1 << n).unwrap();
        }
    }
}
