//! JSON wire format for operators and states.
//!
//! Operators are row-major complex matrices tagged with their kind:
//!
//! ```json
//! {"d": 2, "kind": "effect", "entries": [[[0.5, 0.0], [0.0, -0.25]], [[0.0, 0.25], [0.5, 0.0]]]}
//! ```
//!
//! States carry an amplitude vector instead:
//!
//! ```json
//! {"d": 2, "kind": "state", "amplitudes": [[0.6, 0.0], [0.0, 0.8]]}
//! ```
//!
//! Parsing validates shape, finiteness, the declared kind, and then the
//! mathematical constraints of the target type. Floats print in shortest
//! round-trip form, so serialize-parse returns the stored matrix bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::operator::{CMatrix, DensityMatrix, Effect, HermitianOperator};
use crate::state::PureState;
use crate::Result;

#[derive(Serialize, Deserialize)]
struct OperatorWire {
    d: usize,
    kind: String,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct StateWire {
    d: usize,
    kind: String,
    amplitudes: Vec<[f64; 2]>,
}

pub fn effect_to_json(e: &Effect) -> String {
    operator_json(e.matrix(), "effect")
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    operator_json(rho.matrix(), "density")
}

pub fn hermitian_to_json(op: &HermitianOperator) -> String {
    operator_json(op.matrix(), "hermitian")
}

pub fn state_to_json(psi: &PureState) -> String {
    let wire = StateWire {
        d: psi.d(),
        kind: "state".into(),
        amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
    };
    serde_json::to_string_pretty(&wire).expect("finite floats always serialize")
}

pub fn effect_from_json(s: &str) -> Result<Effect> {
    Effect::from_matrix(parse_operator(s, "effect")?)
}

pub fn density_from_json(s: &str) -> Result<DensityMatrix> {
    DensityMatrix::from_matrix(parse_operator(s, "density")?)
}

pub fn hermitian_from_json(s: &str) -> Result<HermitianOperator> {
    HermitianOperator::new(parse_operator(s, "hermitian")?)
}

pub fn state_from_json(s: &str) -> Result<PureState> {
    let wire: StateWire = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
    if wire.kind != "state" {
        return Err(Error::Serialization(format!("expected kind \"state\", found \"{}\"", wire.kind)));
    }
    if wire.amplitudes.len() != wire.d {
        return Err(Error::Serialization(format!(
            "declared d = {} but found {} amplitudes",
            wire.d,
            wire.amplitudes.len()
        )));
    }
    for (k, z) in wire.amplitudes.iter().enumerate() {
        if !z[0].is_finite() || !z[1].is_finite() {
            return Err(Error::Serialization(format!("amplitude {k} is not finite")));
        }
    }
    PureState::new(wire.amplitudes.iter().map(|z| Complex64::new(z[0], z[1])).collect())
}

fn operator_json(mat: &CMatrix, kind: &str) -> String {
    let d = mat.nrows();
    let entries: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|i| (0..d).map(|j| [mat[(i, j)].re, mat[(i, j)].im]).collect())
        .collect();
    let wire = OperatorWire { d, kind: kind.into(), entries };
    serde_json::to_string_pretty(&wire).expect("finite floats always serialize")
}

fn parse_operator(s: &str, expected_kind: &str) -> Result<CMatrix> {
    let wire: OperatorWire = serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))?;
    if wire.kind != expected_kind {
        return Err(Error::Serialization(format!(
            "expected kind \"{expected_kind}\", found \"{}\"",
            wire.kind
        )));
    }
    if wire.entries.len() != wire.d {
        return Err(Error::Serialization(format!(
            "declared d = {} but found {} rows",
            wire.d,
            wire.entries.len()
        )));
    }
    for (i, row) in wire.entries.iter().enumerate() {
        if row.len() != wire.d {
            return Err(Error::Serialization(format!(
                "row {i} has {} entries, expected {}",
                row.len(),
                wire.d
            )));
        }
        for (j, z) in row.iter().enumerate() {
            if !z[0].is_finite() || !z[1].is_finite() {
                return Err(Error::Serialization(format!("entry ({i}, {j}) is not finite")));
            }
        }
    }
    let d = wire.d;
    Ok(CMatrix::from_fn(d, d, |i, j| {
        Complex64::new(wire.entries[i][j][0], wire.entries[i][j][1])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn effect_round_trip_is_bitwise() {
        let mut rng = ChaCha12Rng::seed_from_u64(31);
        for _ in 0..100 {
            let e = crate::random::random_effect(4, &mut rng).unwrap();
            let back = effect_from_json(&effect_to_json(&e)).unwrap();
            assert_eq!(e.matrix(), back.matrix());
        }
    }

    #[test]
    fn state_round_trip_is_bitwise() {
        let mut rng = ChaCha12Rng::seed_from_u64(32);
        let psi = crate::random::random_pure_state(5, &mut rng);
        let back = state_from_json(&state_to_json(&psi)).unwrap();
        assert_eq!(psi.amplitudes(), back.amplitudes());
    }

    #[test]
    fn density_round_trip_and_validation() {
        let mut rng = ChaCha12Rng::seed_from_u64(33);
        let rho = crate::random::random_density(3, &mut rng).unwrap();
        let back = density_from_json(&density_to_json(&rho)).unwrap();
        assert_eq!(rho.matrix(), back.matrix());

        let short_trace = r#"{"d": 2, "kind": "density", "entries": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.49, 0.0]]]}"#;
        assert!(matches!(density_from_json(short_trace), Err(Error::DensityTraceNotOne { .. })));
    }

    #[test]
    fn kind_and_shape_mismatches_are_rejected() {
        let e = Effect::identity(2);
        let json = effect_to_json(&e);
        assert!(matches!(density_from_json(&json), Err(Error::Serialization(_))));

        let wrong_d = r#"{"d": 3, "kind": "effect", "entries": [[[1.0, 0.0]]]}"#;
        assert!(matches!(effect_from_json(wrong_d), Err(Error::Serialization(_))));

        let ragged = r#"{"d": 2, "kind": "effect", "entries": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0]]]}"#;
        assert!(matches!(effect_from_json(ragged), Err(Error::Serialization(_))));
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let inf = r#"{"d": 1, "kind": "hermitian", "entries": [[[1e999, 0.0]]]}"#;
        assert!(matches!(hermitian_from_json(inf), Err(Error::Serialization(_))));
    }

    #[test]
    fn invalid_effect_spectrum_is_rejected_after_parse() {
        let too_big = r#"{"d": 1, "kind": "effect", "entries": [[[1.5, 0.0]]]}"#;
        assert!(matches!(effect_from_json(too_big), Err(Error::EffectEigenvalueOutOfRange { .. })));
    }

    #[test]
    fn state_norm_is_validated() {
        let unnormalized = r#"{"d": 2, "kind": "state", "amplitudes": [[1.0, 0.0], [0.5, 0.0]]}"#;
        assert!(matches!(state_from_json(unnormalized), Err(Error::StateNotNormalized { .. })));
    }
}
