//! Invariant suite over every module, run for n = 1..=n_max.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::field::FieldContext;
use crate::linalg::{self, c, ComplexMatrix};
use crate::operators::{projective_check, COMMUTATION_TOL};
use crate::phase_space::{intersect, PhaseSpace, Point};
use crate::states::random_density_matrix;
use crate::system::QubitSystem;
use crate::tomography::{estimate_state, simulate_counts, MeasurementPlan};
use crate::wigner::{line_sum, translate_grid, wigner_from_state};

pub const TOL: f64 = 1e-9;
/// Random states per n for the Wigner checks.
const RANDOM_STATES: usize = 20;
/// Random translations checked for covariance when N^2 is large.
const RANDOM_TRANSLATIONS: usize = 20;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub n: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(n: u32, name: &'static str, worst: f64, tol: f64) -> CheckResult {
    CheckResult {
        n,
        name,
        passed: worst <= tol,
        detail: format!("max residual {worst:.2e}"),
    }
}

fn flag(n: u32, name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        n,
        name,
        passed,
        detail,
    }
}

fn field_checks(ctx: &FieldContext, n: u32, out: &mut Vec<CheckResult>) {
    let els: Vec<_> = ctx.elements().collect();
    let mut bad = 0usize;
    for &a in &els {
        if !(a + a).is_zero() {
            bad += 1;
        }
        if !a.is_zero() && ctx.inv(a).map(|b| a * b) != Ok(ctx.one()) {
            bad += 1;
        }
        for &b in &els {
            for &x in &els {
                if a * (b + x) != a * b + a * x || (a * b) * x != a * (b * x) {
                    bad += 1;
                }
            }
        }
    }
    out.push(flag(
        n,
        "field axioms",
        bad == 0,
        format!("{bad} violations"),
    ));
}

fn geometry_checks(space: &PhaseSpace, n: u32, out: &mut Vec<CheckResult>) {
    let dim = space.order();
    let strs = space.striations();
    let mut bad = 0usize;
    if strs.len() != dim + 1 {
        bad += 1;
    }
    for s in strs {
        let mut hits = vec![0usize; dim * dim];
        for line in s.lines() {
            for pt in line.points() {
                hits[pt.index(dim)] += 1;
            }
        }
        bad += hits.iter().filter(|&&h| h != 1).count();
    }
    out.push(flag(
        n,
        "striations partition the grid",
        bad == 0,
        format!("{} striations, {bad} violations", strs.len()),
    ));

    let lines: Vec<_> = strs.iter().flat_map(|s| s.lines()).collect();
    let mut bad = 0usize;
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let k = intersect(l1, l2).len();
            let ok = if l1.is_parallel_to(l2) {
                k == 0
            } else {
                k == 1
            };
            bad += usize::from(!ok);
        }
    }
    out.push(flag(
        n,
        "line intersections",
        bad == 0,
        format!("{} lines, {bad} violations", lines.len()),
    ));
}

fn operator_checks(sys: &QubitSystem, n: u32, out: &mut Vec<CheckResult>) {
    let net = sys.net();
    let space = sys.space();
    let unit = space
        .points()
        .map(|v| linalg::unitarity_residual(&net.translation(&v).unitary))
        .fold(0.0, f64::max);
    out.push(check(n, "translation unitarity", unit, 1e-12));

    // Composing with each generator suffices: every translation is a product
    // of generators, so the projective law extends to all pairs.
    let ctx = sys.field();
    let generators: Vec<_> = (0..n)
        .flat_map(|i| {
            let e = ctx.element(1 << i).expect("in range");
            [
                Point {
                    q: e,
                    p: ctx.zero(),
                },
                Point {
                    q: ctx.zero(),
                    p: e,
                },
            ]
        })
        .collect();
    let mut failures = 0usize;
    let mut count = 0usize;
    for v in space.points() {
        for w in &generators {
            count += 1;
            if projective_check(net.translation(&v), net.translation(w), sys.labeling()).is_err() {
                failures += 1;
            }
        }
    }
    out.push(flag(
        n,
        "translation composition",
        failures == 0,
        format!("{failures} of {count} pairs fail"),
    ));

    let mut worst: f64 = 0.0;
    for b in &sys.mubs().bases {
        for (i, s) in b.stabilizers.iter().enumerate() {
            for t in &b.stabilizers[i + 1..] {
                worst = worst.max(linalg::commutator_residual(&s.unitary, &t.unitary));
            }
        }
    }
    out.push(check(n, "stabilizers commute", worst, COMMUTATION_TOL));

    let report = &sys.mubs().report;
    out.push(flag(
        n,
        "bases mutually unbiased",
        report.conjugate,
        format!(
            "{} bases, worst deviation {:.2e}",
            sys.mubs().bases.len(),
            report.worst_deviation()
        ),
    ));
}

fn phase_point_checks(sys: &QubitSystem, n: u32, out: &mut Vec<CheckResult>) {
    let net = sys.net();
    let dim = sys.dim();
    let ops = net.phase_points();
    let herm = ops
        .iter()
        .map(|a| linalg::hermiticity_residual(&a.matrix))
        .fold(0.0, f64::max);
    out.push(check(n, "A hermitian", herm, TOL));
    let tr = ops
        .iter()
        .map(|a| (a.matrix.trace() - c(1.0, 0.0)).norm())
        .fold(0.0, f64::max);
    out.push(check(n, "A unit trace", tr, TOL));

    let mut worst: f64 = 0.0;
    for (i, a) in ops.iter().enumerate() {
        for (j, b) in ops.iter().enumerate() {
            // tr(AB) for Hermitian A, B is sum_ij A_ij conj(B_ij)
            let t: num_complex::Complex64 = a
                .matrix
                .iter()
                .zip(b.matrix.iter())
                .map(|(x, y)| x * y.conj())
                .sum();
            let expect = if i == j { dim as f64 } else { 0.0 };
            worst = worst.max((t - c(expect, 0.0)).norm());
        }
    }
    out.push(check(n, "A orthogonality", worst, TOL));

    let total = ops
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, a| acc + &a.matrix);
    let expect = ComplexMatrix::identity(dim, dim) * c(dim as f64, 0.0);
    out.push(check(
        n,
        "A sum",
        linalg::max_abs_diff(&total, &expect),
        TOL,
    ));

    let origin = &net.phase_point(&sys.space().point(0, 0)).matrix;
    let cov = ops
        .iter()
        .map(|a| {
            let u = &net.translation(&a.point).unitary;
            linalg::max_abs_diff(&linalg::conjugate_by(u, origin), &a.matrix)
        })
        .fold(0.0, f64::max);
    out.push(check(n, "A covariance", cov, TOL));
}

fn wigner_checks(sys: &QubitSystem, n: u32, seed: u64, out: &mut Vec<CheckResult>) {
    let net = sys.net();
    let space = sys.space();
    let dim = sys.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ u64::from(n));
    let states: Vec<_> = (0..RANDOM_STATES)
        .map(|_| random_density_matrix(n, &mut rng))
        .collect();
    let grids: Vec<_> = match states.iter().map(|r| wigner_from_state(r, net)).collect() {
        Ok(g) => g,
        Err(e) => {
            out.push(flag(n, "wigner transform", false, e.to_string()));
            return;
        }
    };

    let norm = grids
        .iter()
        .map(|g| (g.sum() - 1.0).abs())
        .fold(0.0, f64::max);
    out.push(check(n, "wigner normalization", norm, TOL));

    let mut worst: f64 = 0.0;
    for (rho, g) in states.iter().zip(&grids) {
        for s in space.striations() {
            for (k, line) in s.lines().iter().enumerate() {
                let proj = &net.line_state(s.id(), k).projector;
                let p = (rho * proj).trace().re;
                worst = worst.max((line_sum(g, line) - p).abs());
            }
        }
    }
    out.push(check(n, "line sums are probabilities", worst, TOL));

    let worst = states
        .iter()
        .zip(&grids)
        .map(|(rho, g)| {
            sys.state(g)
                .map_or(f64::INFINITY, |back| linalg::max_abs_diff(&back, rho))
        })
        .fold(0.0, f64::max);
    out.push(check(n, "wigner round trip", worst, TOL));

    let translations: Vec<_> = if dim * dim <= 16 {
        space.points().collect()
    } else {
        use rand::Rng;
        (0..RANDOM_TRANSLATIONS)
            .map(|_| space.point(rng.random_range(0..dim), rng.random_range(0..dim)))
            .collect()
    };
    let mut worst: f64 = 0.0;
    for v in &translations {
        let u = &net.translation(v).unitary;
        for (rho, g) in states.iter().zip(&grids).take(5) {
            let lhs = translate_grid(g, v);
            let rhs = wigner_from_state(&linalg::conjugate_by(u, rho), net);
            worst = worst.max(match (lhs, rhs) {
                (Ok(a), Ok(b)) => a.max_abs_diff(&b),
                _ => f64::INFINITY,
            });
        }
    }
    out.push(check(n, "translation covariance", worst, TOL));

    let mut worst: f64 = 0.0;
    for rho in states.iter().take(5) {
        let exact = simulate_counts(rho, &MeasurementPlan::exact(sys.mubs()), sys.mubs())
            .and_then(|counts| estimate_state(&counts, net, false, Some(rho)));
        worst = worst.max(match exact {
            Ok(r) => r.metrics.map_or(f64::INFINITY, |m| m.trace_distance),
            Err(_) => f64::INFINITY,
        });
    }
    out.push(check(n, "tomography exactness", worst, TOL));
}

/// Run every check for one qubit count.
pub fn run_for(n: u32, seed: u64) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let sys = match QubitSystem::new(n) {
        Ok(s) => s,
        Err(e) => {
            out.push(flag(n, "construction", false, e.to_string()));
            return out;
        }
    };
    out.push(flag(n, "construction", true, format!("N = {}", sys.dim())));
    field_checks(sys.field(), n, &mut out);
    geometry_checks(sys.space(), n, &mut out);
    operator_checks(&sys, n, &mut out);
    phase_point_checks(&sys, n, &mut out);
    wigner_checks(&sys, n, seed, &mut out);
    out
}

pub fn run_suite(n_max: u32, seed: u64) -> Vec<CheckResult> {
    (1..=n_max).flat_map(|n| run_for(n, seed)).collect()
}
