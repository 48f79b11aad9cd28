//! Measurement bases attached to striations, and mutual-unbiasedness checks.
//!
//! The basis of a striation is the joint eigenbasis of the translation
//! unitaries that preserve its lines (the nonzero vectors of its ray).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, StateVector};
use crate::operators::{
    joint_eigenbasis, translation_unitary, LabelingKind, QubitLabeling, TranslationOperator,
    EIGEN_RESIDUAL_TOL,
};
use crate::phase_space::{PhaseSpace, Striation};

/// Absolute tolerance on | |<v|w>| - 1/sqrt(N) |.
pub const CONJUGACY_TOL: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct StriationBasis {
    pub striation: usize,
    pub vectors: Vec<StateVector>,
    /// Eigenvalue of each vector under each stabilizer, in stabilizer order.
    pub eigenvalues: Vec<Vec<Complex64>>,
    pub stabilizers: Vec<TranslationOperator>,
}

impl StriationBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }
}

pub fn basis_for_striation(s: &Striation, labeling: &QubitLabeling) -> Result<StriationBasis> {
    let stabilizers = s
        .stabilizer_vectors()
        .into_iter()
        .map(|v| translation_unitary(v, labeling))
        .collect::<Result<Vec<_>>>()?;
    let ops: Vec<_> = stabilizers.iter().map(|t| t.unitary.clone()).collect();
    let invalid = |reason: String| Error::LabelingInvalid {
        striation: s.id(),
        reason,
    };
    let joint = joint_eigenbasis(&ops).map_err(|e| invalid(e.to_string()))?;

    for (i, a) in joint.iter().enumerate() {
        for b in &joint[i + 1..] {
            let same = a
                .eigenvalues
                .iter()
                .zip(&b.eigenvalues)
                .all(|(x, y)| (x - y).norm() < 1e-6);
            if same {
                return Err(invalid("joint eigenspaces are degenerate".into()));
            }
        }
        for (op, lambda) in ops.iter().zip(&a.eigenvalues) {
            let r = (op * &a.vector - &a.vector * *lambda).norm();
            if r > EIGEN_RESIDUAL_TOL {
                return Err(invalid(format!("eigen-residual {r:.3e}")));
            }
        }
    }

    let (vectors, eigenvalues) = joint.into_iter().map(|j| (j.vector, j.eigenvalues)).unzip();
    Ok(StriationBasis {
        striation: s.id(),
        vectors,
        eigenvalues,
        stabilizers,
    })
}

/// The N + 1 striation bases together with the labeling that produced them.
#[derive(Clone, Debug)]
pub struct MubSet {
    pub labeling: QubitLabeling,
    pub bases: Vec<StriationBasis>,
    pub report: ConjugacyReport,
}

fn bases_for(space: &PhaseSpace, labeling: &QubitLabeling) -> Result<Vec<StriationBasis>> {
    space
        .striations()
        .iter()
        .map(|s| basis_for_striation(s, labeling))
        .collect()
}

/// Derive one basis per striation. If the requested labeling leaves some
/// striation's stabilizers non-commuting, p is relabeled with the trace-dual
/// basis and the derivation retried.
pub fn full_mub_set(space: &PhaseSpace, labeling: &QubitLabeling) -> Result<MubSet> {
    let (labeling, bases) = match bases_for(space, labeling) {
        Ok(b) => (labeling.clone(), b),
        Err(first @ Error::LabelingInvalid { .. }) => {
            if labeling.kind() == LabelingKind::TraceDual {
                return Err(Error::Configuration(first.to_string()));
            }
            let fallback = QubitLabeling::trace_dual(space.field())?;
            let bases = bases_for(space, &fallback)
                .map_err(|e| Error::Configuration(format!("{first}; trace-dual fallback: {e}")))?;
            (fallback, bases)
        }
        Err(e) => return Err(e),
    };
    let report = check_conjugacy(&bases);
    if !report.conjugate {
        return Err(Error::NotConjugate(report.worst_deviation()));
    }
    Ok(MubSet {
        labeling,
        bases,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairOverlap {
    pub first: usize,
    pub second: usize,
    pub max: f64,
    pub min: f64,
    pub conjugate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugacyReport {
    pub dim: usize,
    pub target: f64,
    pub pairs: Vec<PairOverlap>,
    /// Largest |G - I| entry over the within-basis Gram matrices.
    pub orthonormality_residual: f64,
    pub conjugate: bool,
}

impl ConjugacyReport {
    pub fn worst_deviation(&self) -> f64 {
        self.pairs
            .iter()
            .map(|p| (p.max - self.target).abs().max((p.min - self.target).abs()))
            .fold(self.orthonormality_residual, f64::max)
    }
}

/// Magnitudes |<v|w>| between all cross-basis pairs, plus within-basis
/// orthonormality.
pub fn check_conjugacy(bases: &[StriationBasis]) -> ConjugacyReport {
    let dim = bases.first().map_or(0, |b| b.dim());
    let target = 1.0 / (dim as f64).sqrt();
    let mut ortho: f64 = 0.0;
    for b in bases {
        for (i, v) in b.vectors.iter().enumerate() {
            for (j, w) in b.vectors.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                ortho = ortho.max((v.dotc(w) - c(expect, 0.0)).norm());
            }
        }
    }
    let mut pairs = Vec::new();
    for (i, a) in bases.iter().enumerate() {
        for b in &bases[i + 1..] {
            let mut max: f64 = 0.0;
            let mut min = f64::INFINITY;
            let mut dims_ok = a.dim() == b.dim();
            for v in &a.vectors {
                for w in &b.vectors {
                    if v.len() != w.len() {
                        dims_ok = false;
                        continue;
                    }
                    let o = v.dotc(w).norm();
                    max = max.max(o);
                    min = min.min(o);
                }
            }
            let conjugate = dims_ok
                && (max - target).abs() <= CONJUGACY_TOL
                && (min - target).abs() <= CONJUGACY_TOL;
            pairs.push(PairOverlap {
                first: a.striation,
                second: b.striation,
                max,
                min,
                conjugate,
            });
        }
    }
    let conjugate = ortho <= CONJUGACY_TOL && pairs.iter().all(|p| p.conjugate);
    ConjugacyReport {
        dim,
        target,
        pairs,
        orthonormality_residual: ortho,
        conjugate,
    }
}

/// The four Bell states (|00> +- |11>)/sqrt2, (|01> +- |10>)/sqrt2.
pub fn bell_reference_basis() -> Vec<StateVector> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: f64, b: f64, cc: f64, d: f64| {
        StateVector::from_vec(vec![
            c(a * h, 0.0),
            c(b * h, 0.0),
            c(cc * h, 0.0),
            c(d * h, 0.0),
        ])
    };
    vec![
        v(1.0, 0.0, 0.0, 1.0),
        v(1.0, 0.0, 0.0, -1.0),
        v(0.0, 1.0, 1.0, 0.0),
        v(0.0, 1.0, -1.0, 0.0),
    ]
}

/// Frobenius distance between the projectors of two vectors; zero exactly when
/// they agree up to phase.
pub fn projector_distance(a: &StateVector, b: &StateVector) -> f64 {
    (linalg::projector(a) - linalg::projector(b)).norm()
}

/// Whether two bases agree up to per-vector phase and ordering: every vector
/// of `a` matches some vector of `b` with projector distance below `tol`.
pub fn same_basis_up_to_phase(a: &[StateVector], b: &[StateVector], tol: f64) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|v| b.iter().any(|w| projector_distance(v, w) < tol))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisJson {
    pub striation: usize,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MubJson {
    pub n: u32,
    pub bases: Vec<BasisJson>,
    pub report: ConjugacyReport,
}

impl MubSet {
    pub fn to_json(&self) -> MubJson {
        MubJson {
            n: self.labeling.qubits() as u32,
            bases: self
                .bases
                .iter()
                .map(|b| BasisJson {
                    striation: b.striation,
                    vectors: b.vectors.iter().map(linalg::vector_to_json).collect(),
                })
                .collect(),
            report: self.report.clone(),
        }
    }
}
