//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any failure.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qphase::field::FieldContext;
use qphase::linalg::{self, c, ComplexMatrix, StateVector};
use qphase::phase_space::{ring_witness, Line, PhaseSpace};
use qphase::states::{named_state, random_density_matrix, random_pure_state, tilted_111};
use qphase::tomography::{
    error_scaling_study, estimate_state, loglog_slope, simulate_counts, MeasurementPlan,
};
use qphase::wigner::{format_fixed, line_sum, translate_grid, wigner_from_state, WignerGrid};
use qphase::QubitSystem;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn m2(a: [[Complex64; 2]; 2]) -> ComplexMatrix {
    DMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
}

fn id2() -> ComplexMatrix {
    m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(1., 0.)]])
}
fn sx() -> ComplexMatrix {
    m2([[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
}
fn sy() -> ComplexMatrix {
    m2([[c(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]])
}
fn sz() -> ComplexMatrix {
    m2([[c(1., 0.), c(0., 0.)], [c(0., 0.), c(-1., 0.)]])
}

/// |<a|b>| == 1 up to global phase, via |tr(a^dagger b)| / N.
fn equal_up_to_phase(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.nrows() as f64;
    let overlap = (a.adjoint() * b).trace().norm() / n;
    let phase = (a.adjoint() * b).trace() / c(n, 0.0);
    let phase = phase / c(phase.norm(), 0.0);
    linalg::max_abs_diff(&(a * phase), b).max((overlap - 1.0).abs())
}

fn grid_from(values: &[[f64; 4]; 4], field: &FieldContext) -> WignerGrid {
    WignerGrid::new(field.clone(), values.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn c1_gf4_arithmetic() -> Outcome {
    let f = FieldContext::new(2).map_err(|e| e.to_string())?;
    let (one, w, w2) = (f.one(), f.parse("w").unwrap(), f.parse("w2").unwrap());
    ensure(one + w == w2, "1 + w != w2")?;
    ensure(w * w2 == one, "w * w2 != 1")?;
    ensure(
        f.elements().all(|a| (a + a).is_zero()),
        "a + a != 0 for some a",
    )?;
    Ok("1+w=w2, w*w2=1, a+a=0 over all 4 elements".into())
}

fn c2_striations() -> Outcome {
    let mut summary = Vec::new();
    for (n, expect) in [(1u32, 3usize), (2, 5), (3, 9), (4, 17)] {
        let space = PhaseSpace::new(FieldContext::new(n).unwrap());
        let dim = space.order();
        let strs = space.striations();
        ensure(
            strs.len() == expect,
            format!("n={n}: {} striations", strs.len()),
        )?;
        for s in strs {
            let mut seen = vec![0usize; dim * dim];
            ensure(
                s.lines().len() == dim,
                format!("n={n}: striation of {} lines", s.lines().len()),
            )?;
            for l in s.lines() {
                for p in l.points() {
                    seen[p.q.index() * dim + p.p.index()] += 1;
                }
            }
            ensure(
                seen.iter().all(|&k| k == 1),
                format!("n={n}: striation {} is not a partition", s.id()),
            )?;
        }
        let lines: Vec<(usize, &Line)> = strs
            .iter()
            .flat_map(|s| s.lines().iter().map(move |l| (s.id(), l)))
            .collect();
        for (i, (si, l1)) in lines.iter().enumerate() {
            for (sj, l2) in &lines[i + 1..] {
                let shared = l1.points().iter().filter(|p| l2.contains(p)).count();
                let ok = if si == sj { shared == 0 } else { shared == 1 };
                ensure(ok, format!("n={n}: lines share {shared} points"))?;
            }
        }
        summary.push(format!("n={n}:{}", strs.len()));
    }
    Ok(summary.join(" "))
}

fn c3_translations() -> Outcome {
    let sys = QubitSystem::new(2).map_err(|e| e.to_string())?;
    let sp = sys.space();
    let pt = |q: &str, p: &str| sp.parse_point(q, p).unwrap();
    let u = |q: &str, p: &str| sys.net().translation(&pt(q, p)).unitary.clone();
    let cases = [
        ("H1", u("1", "0"), id2().kronecker(&sx())),
        ("Hw", u("w", "0"), sx().kronecker(&id2())),
        ("V1", u("0", "1"), id2().kronecker(&sz())),
        ("Vw", u("0", "w"), sz().kronecker(&id2())),
    ];
    let mut worst: f64 = 0.0;
    for (name, got, want) in &cases {
        let d = linalg::max_abs_diff(got, want);
        ensure(d < 1e-12, format!("{name} differs by {d:.2e}"))?;
        worst = worst.max(d);
    }
    let product = &cases[0].1 * &cases[3].1 * &cases[2].1;
    let target = sz().kronecker(&sy()) * c(0.0, -1.0);
    let d = linalg::max_abs_diff(&product, &target);
    ensure(
        d < 1e-12,
        format!("H1 Vw V1 differs from -i Z(x)Y by {d:.2e}"),
    )?;
    let d2 = equal_up_to_phase(&u("1", "w2"), &target);
    ensure(
        d2 < 1e-12,
        format!("U(1,w2) differs from -i Z(x)Y by {d2:.2e} up to phase"),
    )?;
    Ok(format!(
        "max entry error {:.1e}; H1 Vw V1 = -i Z(x)Y",
        worst.max(d)
    ))
}

fn paper_belle() -> Vec<StateVector> {
    let (o, i) = (c(0.5, 0.0), c(0.0, 0.5));
    [[o, o, i, -i], [o, o, -i, i], [o, -o, i, i], [o, -o, -i, -i]]
        .iter()
        .map(|v| StateVector::from_column_slice(v))
        .collect()
}

fn c4_belle() -> Outcome {
    let sys = QubitSystem::new(2).map_err(|e| e.to_string())?;
    let basis = &sys.mubs().bases[3].vectors;
    let mut worst: f64 = 0.0;
    let mut used = BTreeSet::new();
    for want in paper_belle() {
        let pw = linalg::projector(&want);
        let (k, d) = basis
            .iter()
            .enumerate()
            .map(|(k, v)| (k, linalg::max_abs_diff(&linalg::projector(v), &pw)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        ensure(
            d < 1e-9,
            format!("no generated vector matches, projector distance {d:.2e}"),
        )?;
        used.insert(k);
        worst = worst.max(d);
    }
    ensure(
        used.len() == 4,
        "two paper vectors matched the same generated vector",
    )?;
    Ok(format!(
        "4/4 vectors matched, projector distance {worst:.1e}"
    ))
}

fn c5_unbiased() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for n in 1..=4 {
        let sys = QubitSystem::new(n).map_err(|e| e.to_string())?;
        let bases = &sys.mubs().bases;
        let target = 1.0 / (sys.dim() as f64).sqrt();
        for (i, a) in bases.iter().enumerate() {
            for b in &bases[i + 1..] {
                pairs += 1;
                for v in &a.vectors {
                    for w in &b.vectors {
                        worst = worst.max((v.dotc(w).norm() - target).abs());
                    }
                }
            }
        }
    }
    ensure(worst < 1e-9, format!("worst overlap deviation {worst:.2e}"))?;
    Ok(format!(
        "{pairs} basis pairs, n=1..4, worst deviation {worst:.1e}"
    ))
}

fn c6_one_qubit_tables() -> Outcome {
    let sys = QubitSystem::new(1).map_err(|e| e.to_string())?;
    let f = sys.field();
    // values[q][p]
    let cases = [
        ("up", [[0.5, 0.5], [0.0, 0.0]]),
        ("plus", [[0.5, 0.0], [0.5, 0.0]]),
        ("y+", [[0.5, 0.0], [0.0, 0.5]]),
    ];
    for (name, want) in cases {
        let g = sys
            .wigner(&named_state(name, 1).unwrap().rho)
            .map_err(|e| e.to_string())?;
        let want = WignerGrid::new(f.clone(), want.iter().map(|r| r.to_vec()).collect()).unwrap();
        let d = g.max_abs_diff(&want);
        ensure(d < 1e-9, format!("{name}: off by {d:.2e}"))?;
    }
    let g = sys.wigner(&tilted_111()).map_err(|e| e.to_string())?;
    let low = (1.0 - 3f64.sqrt()) / 4.0;
    let high = (1.0 + 1.0 / 3f64.sqrt()) / 4.0;
    let want = [[low, high], [high, high]];
    let mut worst: f64 = 0.0;
    for (row, want_row) in g.values().iter().zip(want) {
        for (x, w) in row.iter().zip(want_row) {
            worst = worst.max((x - w).abs());
        }
    }
    ensure(worst < 1e-9, format!("tilted-111 off by {worst:.2e}"))?;
    let printed = (
        format_fixed(g.values()[0][0], 3, 0),
        format_fixed(g.values()[1][1], 3, 0),
    );
    ensure(
        printed == ("-0.183".into(), "0.394".into()),
        format!("printed {printed:?}"),
    )?;
    Ok("up, right, y+ exact; tilted-111 prints -0.183 at origin, 0.394 elsewhere".into())
}

fn c7_two_qubit_tables() -> Outcome {
    let sys = QubitSystem::new(2).map_err(|e| e.to_string())?;
    let f = sys.field();
    let q = 0.25;
    // values[q][p], canonical order 0, 1, w, w2
    let upup = [[q, q, q, q], [0.; 4], [0.; 4], [0.; 4]];
    let upright = [[q, 0., q, 0.], [q, 0., q, 0.], [0.; 4], [0.; 4]];
    let singlet = [[0.; 4], [0., q, q, 0.], [0., q, q, 0.], [0.; 4]];
    let mut worst: f64 = 0.0;
    for (name, want) in [("upup", upup), ("upright", upright), ("singlet", singlet)] {
        let g = sys
            .wigner(&named_state(name, 2).unwrap().rho)
            .map_err(|e| e.to_string())?;
        let d = g.max_abs_diff(&grid_from(&want, f));
        ensure(d < 1e-12, format!("{name}: off by {d:.2e}"))?;
        worst = worst.max(d);
    }
    Ok(format!(
        "upup, upright, singlet match, max error {worst:.1e}"
    ))
}

fn c8_origin_operator() -> Outcome {
    let sys = QubitSystem::new(2).map_err(|e| e.to_string())?;
    let net = sys.net();
    let a = m2([[c(1., 0.), c(0.5, -0.5)], [c(0.5, 0.5), c(0., 0.)]]);
    let b = m2([[c(1., 0.), c(0.5, 0.5)], [c(0.5, -0.5), c(0., 0.)]]);
    let want = a.kronecker(&b);
    let origin = &net.phase_point(&sys.space().point(0, 0)).matrix;
    let d = linalg::max_abs_diff(origin, &want);
    ensure(d < 1e-12, format!("A(0,0) off by {d:.2e}"))?;
    let mut worst: f64 = 0.0;
    for p in sys.space().points() {
        let u = &net.translation(&p).unitary;
        let moved = u * &want * u.adjoint();
        worst = worst.max(linalg::max_abs_diff(&moved, &net.phase_point(&p).matrix));
    }
    ensure(worst < 1e-12, format!("covariance off by {worst:.2e}"))?;
    Ok(format!(
        "A(0,0) error {d:.1e}; 16 translated copies, error {worst:.1e}"
    ))
}

fn c9_structure() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        let sys = QubitSystem::new(n).map_err(|e| e.to_string())?;
        let dim = sys.dim();
        let ops = sys.net().phase_points();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (i, a) in ops.iter().enumerate() {
            worst = worst.max(linalg::max_abs_diff(&a.matrix, &a.matrix.adjoint()));
            worst = worst.max((a.matrix.trace() - c(1.0, 0.0)).norm());
            for (j, b) in ops.iter().enumerate() {
                let t = (&a.matrix * &b.matrix).trace();
                let expect = if i == j { dim as f64 } else { 0.0 };
                worst = worst.max((t - c(expect, 0.0)).norm());
            }
            sum += &a.matrix;
        }
        let eye = ComplexMatrix::identity(dim, dim) * c(dim as f64, 0.0);
        worst = worst.max(linalg::max_abs_diff(&sum, &eye));
    }
    ensure(worst < 1e-9, format!("worst residual {worst:.2e}"))?;
    Ok(format!("n=1..3, worst residual {worst:.1e}"))
}

fn c10_line_sums() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for n in 1..=3 {
        let sys = QubitSystem::new(n).map_err(|e| e.to_string())?;
        for _ in 0..100 {
            let rho = random_density_matrix(n, &mut rng);
            let g = sys.wigner(&rho).map_err(|e| e.to_string())?;
            for s in sys.space().striations() {
                for (k, line) in s.lines().iter().enumerate() {
                    let proj = &sys.net().line_state(s.id(), k).projector;
                    let p = (&rho * proj).trace().re;
                    worst = worst.max((line_sum(&g, line) - p).abs());
                }
            }
        }
    }
    ensure(worst < 1e-9, format!("worst deviation {worst:.2e}"))?;
    Ok(format!(
        "300 states, every line, worst deviation {worst:.1e}"
    ))
}

fn c11_covariance() -> Outcome {
    use rand::Rng;
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for n in 1..=3 {
        let sys = QubitSystem::new(n).map_err(|e| e.to_string())?;
        let dim = sys.dim();
        let translations: Vec<_> = if n <= 2 {
            sys.space().points().collect()
        } else {
            (0..20)
                .map(|_| {
                    sys.space()
                        .point(rng.random_range(0..dim), rng.random_range(0..dim))
                })
                .collect()
        };
        let rho = random_density_matrix(n, &mut rng);
        let g = sys.wigner(&rho).map_err(|e| e.to_string())?;
        for v in translations {
            let u = &sys.net().translation(&v).unitary;
            let lhs = translate_grid(&g, &v).map_err(|e| e.to_string())?;
            let rhs = sys
                .wigner(&(u * &rho * u.adjoint()))
                .map_err(|e| e.to_string())?;
            worst = worst.max(lhs.max_abs_diff(&rhs));
            checked += 1;
        }
    }
    ensure(worst < 1e-9, format!("worst deviation {worst:.2e}"))?;
    Ok(format!(
        "{checked} translations, worst deviation {worst:.1e}"
    ))
}

fn c12_negativity_floor() -> Outcome {
    let sys = QubitSystem::new(1).map_err(|e| e.to_string())?;
    let floor = (1.0 - 3f64.sqrt()) / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut lowest = f64::INFINITY;
    for _ in 0..100_000 {
        let v = random_pure_state(1, &mut rng);
        let g = wigner_from_state(&linalg::projector(&v), sys.net()).map_err(|e| e.to_string())?;
        lowest = lowest.min(g.min());
    }
    ensure(
        lowest >= floor - 1e-6,
        format!("random minimum {lowest} below floor {floor}"),
    )?;
    let tilted = sys.wigner(&tilted_111()).map_err(|e| e.to_string())?.min();
    ensure(
        (tilted - floor).abs() < 1e-6,
        format!("tilted-111 minimum {tilted} misses floor {floor}"),
    )?;
    Ok(format!(
        "random minimum {lowest:.6} >= {floor:.6}; tilted-111 attains {tilted:.6}"
    ))
}

fn two_halves_two_zeros(g: &WignerGrid) -> bool {
    let vals: Vec<f64> = g.values().iter().flatten().copied().collect();
    let halves = vals.iter().filter(|x| (*x - 0.5).abs() < 1e-9).count();
    let zeros = vals.iter().filter(|x| x.abs() < 1e-9).count();
    halves == 2 && zeros == 2
}

fn c13_six_states() -> Outcome {
    let sys = QubitSystem::new(1).map_err(|e| e.to_string())?;
    for name in ["up", "down", "plus", "minus", "y+", "y-"] {
        let g = sys
            .wigner(&named_state(name, 1).unwrap().rho)
            .map_err(|e| e.to_string())?;
        ensure(
            two_halves_two_zeros(&g),
            format!("{name} lacks the two-halves pattern"),
        )?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for i in 0..100 {
        let v = random_pure_state(1, &mut rng);
        let g = sys
            .wigner(&linalg::projector(&v))
            .map_err(|e| e.to_string())?;
        ensure(
            !two_halves_two_zeros(&g),
            format!("random state {i} shows the pattern"),
        )?;
    }
    Ok("6 Pauli eigenstates match, 100 random states do not".into())
}

fn c14_exact_tomography() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for n in 1..=3 {
        let sys = QubitSystem::new(n).map_err(|e| e.to_string())?;
        for _ in 0..50 {
            let rho = random_density_matrix(n, &mut rng);
            let counts = simulate_counts(&rho, &MeasurementPlan::exact(sys.mubs()), sys.mubs())
                .map_err(|e| e.to_string())?;
            let report =
                estimate_state(&counts, sys.net(), false, Some(&rho)).map_err(|e| e.to_string())?;
            worst = worst.max(report.metrics.unwrap().trace_distance);
        }
    }
    ensure(worst < 1e-9, format!("worst trace distance {worst:.2e}"))?;
    Ok(format!("150 states, worst trace distance {worst:.1e}"))
}

fn c15_scaling() -> Outcome {
    let sys = QubitSystem::new(1).map_err(|e| e.to_string())?;
    let seeds: Vec<u64> = (0..256).collect();
    let shots = [64, 256, 1024, 4096];
    let rows = error_scaling_study(&tilted_111(), sys.net(), sys.mubs(), &shots, &seeds, false)
        .map_err(|e| e.to_string())?;
    let slope = loglog_slope(&rows, |r| r.mean_max_wigner_error).ok_or("no slope")?;
    ensure(
        (-0.65..=-0.35).contains(&slope),
        format!("slope {slope:.3}"),
    )?;
    let errors: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.4}", r.mean_max_wigner_error))
        .collect();
    Ok(format!(
        "slope {slope:.3} over M = 64..4096, 256 seeds, errors [{}]",
        errors.join(", ")
    ))
}

fn c16_ring_witness() -> Outcome {
    let (a, b) = ring_witness(4).ok_or("no mod-4 witness found")?;
    let shared = a.intersection(&b).count();
    ensure(
        a != b && shared >= 2,
        format!("witness shares {shared} points"),
    )?;
    let space = PhaseSpace::new(FieldContext::new(2).unwrap());
    let lines: Vec<&Line> = space.striations().iter().flat_map(|s| s.lines()).collect();
    for (i, l1) in lines.iter().enumerate() {
        for l2 in &lines[i + 1..] {
            let k = l1.points().iter().filter(|p| l2.contains(p)).count();
            ensure(k < 2, "two GF(4) lines share two points")?;
        }
    }
    Ok(format!(
        "Z4 lines {a:?} and {b:?} share {shared} points; no GF(4) pair among {} lines does",
        lines.len()
    ))
}

fn main() {
    let criteria: [Criterion; 16] = [
        ("GF(4) golden arithmetic", c1_gf4_arithmetic),
        ("striation counts and incidence", c2_striations),
        ("two-qubit translation operators", c3_translations),
        ("belle basis", c4_belle),
        ("mutually unbiased bases n=1..4", c5_unbiased),
        ("one-qubit Wigner tables", c6_one_qubit_tables),
        ("two-qubit Wigner tables", c7_two_qubit_tables),
        ("origin phase-point operator", c8_origin_operator),
        ("phase-point operator structure", c9_structure),
        ("line sums equal probabilities", c10_line_sums),
        ("translational covariance", c11_covariance),
        ("one-qubit negativity floor", c12_negativity_floor),
        ("six stabilizer states", c13_six_states),
        ("exact tomography", c14_exact_tomography),
        ("statistical error scaling", c15_scaling),
        ("mod-4 wrap-around witness", c16_ring_witness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.2}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
