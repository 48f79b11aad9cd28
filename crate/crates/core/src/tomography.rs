//! Simulated conjugate-basis measurements and linear-inversion reconstruction.
//!
//! Each striation's basis is measured on its own subensemble of M copies.
//! The estimate of W at a point is (sum of the observed frequencies of the
//! N + 1 lines through it - 1) / N, and rho is rebuilt from W with the
//! phase-point operators. `shots = 0` feeds exact probabilities through the
//! same path.

use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::mub::{MubSet, StriationBasis};
use crate::wigner::{self, GridJson, QuantumNet, WignerGrid};

/// Allowed drift of the outcome probabilities from a unit sum.
pub const PROBABILITY_TOL: f64 = 1e-9;

/// p_k = <v_k| rho |v_k>, clipped to [0, 1] and renormalized.
pub fn outcome_probabilities(rho: &ComplexMatrix, basis: &StriationBasis) -> Result<Vec<f64>> {
    linalg::check_hermitian(rho, basis.dim())?;
    let raw: Vec<f64> = basis
        .vectors
        .iter()
        .map(|v| (v.adjoint() * rho * v)[(0, 0)].re)
        .collect();
    let total: f64 = raw.iter().sum();
    if (total - 1.0).abs() >= PROBABILITY_TOL {
        return Err(Error::InvalidState(format!(
            "outcome probabilities sum to {total}"
        )));
    }
    if let Some(&p) = raw.iter().find(|&&p| p < -PROBABILITY_TOL) {
        return Err(Error::InvalidState(format!(
            "negative outcome probability {p:.3e}"
        )));
    }
    let clipped: Vec<f64> = raw.iter().map(|p| p.clamp(0.0, 1.0)).collect();
    let sum: f64 = clipped.iter().sum();
    Ok(clipped.into_iter().map(|p| p / sum).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementPlan {
    pub striations: Vec<usize>,
    /// Copies measured per basis; 0 selects exact probabilities.
    pub shots_per_basis: u64,
    pub seed: u64,
}

impl MeasurementPlan {
    /// Measure every striation of the set.
    pub fn new(mubs: &MubSet, shots_per_basis: u64, seed: u64) -> Self {
        MeasurementPlan {
            striations: (0..mubs.bases.len()).collect(),
            shots_per_basis,
            seed,
        }
    }

    pub fn exact(mubs: &MubSet) -> Self {
        Self::new(mubs, 0, 0)
    }

    pub fn is_exact(&self) -> bool {
        self.shots_per_basis == 0
    }

    pub fn validate(&self, mubs: &MubSet) -> Result<()> {
        let total = mubs.bases.len();
        let mut seen = vec![false; total];
        for &s in &self.striations {
            if s >= total {
                return Err(Error::InvalidPlan(format!(
                    "striation {s} out of range 0..{total}"
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidPlan(format!("striation {s} listed twice")));
            }
        }
        if let Some(missing) = seen.iter().position(|&x| !x) {
            return Err(Error::InvalidPlan(format!(
                "striation {missing} is not measured; all {total} bases are required"
            )));
        }
        Ok(())
    }
}

/// Outcome counts per striation, indexed by basis vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountsRecord {
    pub n: u32,
    pub shots: u64,
    pub seed: u64,
    pub counts: BTreeMap<usize, Vec<u64>>,
    /// Exact outcome probabilities, present only when `shots` is 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<BTreeMap<usize, Vec<f64>>>,
}

impl CountsRecord {
    /// Observed frequencies of one striation's outcomes.
    pub fn frequencies(&self, striation: usize) -> Result<Vec<f64>> {
        if let Some(probs) = &self.probabilities {
            return probs
                .get(&striation)
                .cloned()
                .ok_or(Error::MissingStriation(striation));
        }
        let counts = self
            .counts
            .get(&striation)
            .ok_or(Error::MissingStriation(striation))?;
        let total: u64 = counts.iter().sum();
        if total != self.shots || total == 0 {
            return Err(Error::InvalidPlan(format!(
                "striation {striation}: counts sum to {total}, expected {}",
                self.shots
            )));
        }
        Ok(counts.iter().map(|&k| k as f64 / total as f64).collect())
    }
}

/// Deterministic sampler for one striation: ChaCha8 keyed by the seed, with
/// the striation id selecting the stream. Shot k uses stream words 2k, 2k+1,
/// so results do not depend on the order striations are simulated in.
fn striation_rng(seed: u64, striation: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(striation as u64);
    rng
}

pub fn simulate_counts(
    rho: &ComplexMatrix,
    plan: &MeasurementPlan,
    mubs: &MubSet,
) -> Result<CountsRecord> {
    plan.validate(mubs)?;
    let n = mubs.labeling.qubits() as u32;
    let mut counts = BTreeMap::new();
    let mut exact = BTreeMap::new();
    for &sid in &plan.striations {
        let probs = outcome_probabilities(rho, &mubs.bases[sid])?;
        let mut tally = vec![0u64; probs.len()];
        if !plan.is_exact() {
            let dist = WeightedIndex::new(&probs)
                .map_err(|e| Error::InvalidState(format!("striation {sid}: {e}")))?;
            let mut rng = striation_rng(plan.seed, sid);
            for _ in 0..plan.shots_per_basis {
                tally[dist.sample(&mut rng)] += 1;
            }
        }
        counts.insert(sid, tally);
        exact.insert(sid, probs);
    }
    Ok(CountsRecord {
        n,
        shots: plan.shots_per_basis,
        seed: plan.seed,
        counts,
        probabilities: plan.is_exact().then_some(exact),
    })
}

/// W_a = (sum over the lines through a of the frequency the net assigns to
/// that line - 1) / N.
pub fn estimate_wigner(counts: &CountsRecord, net: &QuantumNet) -> Result<WignerGrid> {
    let dim = net.dim();
    let space = net.space();
    let mut freqs = Vec::with_capacity(space.striations().len());
    for s in space.striations() {
        let f = counts.frequencies(s.id())?;
        if f.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: f.len(),
            });
        }
        freqs.push(f);
    }
    let mut values = vec![vec![0.0; dim]; dim];
    for a in space.points() {
        let total: f64 = space
            .striations()
            .iter()
            .map(|s| freqs[s.id()][net.line_state(s.id(), s.line_index_of(&a)).basis_index])
            .sum();
        values[a.q.index()][a.p.index()] = (total - 1.0) / dim as f64;
    }
    WignerGrid::new(net.field().clone(), values)
}

#[derive(Clone, Debug)]
pub struct ReconstructionReport {
    pub wigner: WignerGrid,
    pub rho_raw: ComplexMatrix,
    pub rho_projected: ComplexMatrix,
    /// Whether the projected matrix is the reported estimate.
    pub project: bool,
    pub shots: u64,
    pub seed: u64,
    pub metrics: Option<Metrics>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Fidelity of the projected estimate with the truth.
    pub fidelity: f64,
    /// Trace distance of the reported estimate from the truth.
    pub trace_distance: f64,
    pub max_wigner_error: f64,
}

impl ReconstructionReport {
    pub fn estimate(&self) -> &ComplexMatrix {
        if self.project {
            &self.rho_projected
        } else {
            &self.rho_raw
        }
    }

    pub fn to_json(&self) -> ReportJson {
        ReportJson {
            n: self.wigner.field().degree(),
            shots: self.shots,
            seed: self.seed,
            project: self.project,
            wigner: self.wigner.to_json(),
            rho_raw: linalg::matrix_to_json(&self.rho_raw),
            rho_projected: linalg::matrix_to_json(&self.rho_projected),
            metrics: self.metrics,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub n: u32,
    pub shots: u64,
    pub seed: u64,
    pub project: bool,
    pub wigner: GridJson,
    pub rho_raw: Vec<Vec<[f64; 2]>>,
    pub rho_projected: Vec<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<Metrics>,
}

/// Linear inversion, optional PSD projection, and metrics against `truth`.
pub fn estimate_state(
    counts: &CountsRecord,
    net: &QuantumNet,
    project: bool,
    truth: Option<&ComplexMatrix>,
) -> Result<ReconstructionReport> {
    let grid = estimate_wigner(counts, net)?;
    let rho_raw = wigner::state_from_wigner(&grid, net)?;
    let rho_projected = linalg::project_to_physical(&rho_raw);
    let mut report = ReconstructionReport {
        wigner: grid,
        rho_raw,
        rho_projected,
        project,
        shots: counts.shots,
        seed: counts.seed,
        metrics: None,
    };
    if let Some(truth) = truth {
        let true_grid = wigner::wigner_from_state(truth, net)?;
        report.metrics = Some(Metrics {
            fidelity: linalg::fidelity(truth, &report.rho_projected),
            trace_distance: linalg::trace_distance(truth, report.estimate()),
            max_wigner_error: report.wigner.max_abs_diff(&true_grid),
        });
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub shots: u64,
    pub mean_max_wigner_error: f64,
    pub mean_trace_distance: f64,
}

/// Monte-Carlo mean errors for each shot count, one run per seed.
pub fn error_scaling_study(
    rho: &ComplexMatrix,
    net: &QuantumNet,
    mubs: &MubSet,
    shots: &[u64],
    seeds: &[u64],
    project: bool,
) -> Result<Vec<ScalingRow>> {
    if shots.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidPlan(
            "shot counts must be strictly ascending".into(),
        ));
    }
    if seeds.is_empty() {
        return Err(Error::InvalidPlan("at least one seed is required".into()));
    }
    shots
        .iter()
        .map(|&m| {
            // exact mode is deterministic, one run suffices
            let runs: &[u64] = if m == 0 { &seeds[..1] } else { seeds };
            let (mut w_err, mut td) = (0.0, 0.0);
            for &seed in runs {
                let counts = simulate_counts(rho, &MeasurementPlan::new(mubs, m, seed), mubs)?;
                let metrics = estimate_state(&counts, net, project, Some(rho))?
                    .metrics
                    .expect("truth supplied");
                w_err += metrics.max_wigner_error;
                td += metrics.trace_distance;
            }
            let k = runs.len() as f64;
            Ok(ScalingRow {
                shots: m,
                mean_max_wigner_error: w_err / k,
                mean_trace_distance: td / k,
            })
        })
        .collect()
}

/// Least-squares slope of ln(error) against ln(shots). Rows with zero shots
/// or zero error are skipped; `None` if fewer than two remain.
pub fn loglog_slope(rows: &[ScalingRow], error: impl Fn(&ScalingRow) -> f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.shots > 0 && error(r) > 0.0)
        .map(|r| ((r.shots as f64).ln(), error(r).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}
