use std::fmt::Write as _;

use serde::Serialize;

use qphase::field::FieldContext;
use qphase::phase_space::{Direction, PhaseSpace, Striation};
use qphase::states::parse_state;
use qphase::tomography::{error_scaling_study, loglog_slope, ReconstructionReport, ScalingRow};
use qphase::verify::run_suite;
use qphase::wigner::{line_sum, WignerGrid};
use qphase::{Error, QubitSystem};

use crate::output::{self, complex, real, table};
use crate::{Cli, Command, Format};

pub const OK: u8 = 0;
pub const VERIFY_FAILED: u8 = 1;
pub const USAGE: u8 = 2;
pub const CONSTRUCTION: u8 = 3;

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ZeroDegree
            | Error::DegreeTooLarge(_)
            | Error::UnknownElement(_)
            | Error::UnknownState(_)
            | Error::InvalidState(_)
            | Error::DimensionMismatch { .. }
            | Error::NotHermitian(_)
            | Error::InvalidPlan(_)
            | Error::Json(_) => USAGE,
            _ => CONSTRUCTION,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<Outcome, CliError>;

fn ok(stdout: String) -> CmdResult {
    Ok(Outcome { stdout, code: OK })
}

pub fn run(cli: &Cli) -> CmdResult {
    let p = usize::from(cli.precision);
    match &cli.command {
        Command::Field { n } => field(*n, cli.format),
        Command::Striations { n } => striations(*n, cli.format),
        Command::Mub { n, verify } => mub(*n, *verify, cli.format, p),
        Command::Wigner { n, state, lines } => wigner(*n, state, *lines, cli.format, p),
        Command::Tomo {
            n,
            state,
            shots,
            project,
            study,
            seeds,
        } => {
            let shots = non_negative(*shots)?;
            match study {
                Some(list) => {
                    let list = list
                        .iter()
                        .map(|&m| non_negative(m))
                        .collect::<Result<Vec<_>, _>>()?;
                    tomo_study(*n, state, &list, *seeds, cli.seed, *project, cli.format, p)
                }
                None => tomo(*n, state, shots, cli.seed, *project, cli.format, p),
            }
        }
        Command::Verify { n_max } => verify(*n_max, cli.seed, cli.format),
    }
}

fn non_negative(shots: i64) -> Result<u64, CliError> {
    u64::try_from(shots).map_err(|_| CliError::usage(format!("shots must be >= 0, got {shots}")))
}

fn field_context(n: u32) -> Result<FieldContext, CliError> {
    if n == 0 {
        return Err(CliError::usage("n must be at least 1"));
    }
    Ok(FieldContext::new(n)?)
}

fn system(n: u32) -> Result<QubitSystem, CliError> {
    field_context(n)?;
    Ok(QubitSystem::new(n)?)
}

fn load_state(spec: &str, n: u32) -> Result<qphase::states::ParsedState, CliError> {
    let st = parse_state(spec, n)?;
    if st.renormalized {
        eprintln!("warning: state vector was not normalized; rescaled to unit norm");
    }
    Ok(st)
}

#[derive(Serialize)]
struct FieldJson {
    n: u32,
    modulus: u32,
    order: Vec<String>,
    add: Vec<Vec<String>>,
    mul: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct FieldRow<'a> {
    op: &'a str,
    a: &'a str,
    b: &'a str,
    result: &'a str,
}

fn field(n: u32, format: Format) -> CmdResult {
    let f = field_context(n)?;
    let els: Vec<_> = f.elements().collect();
    let table_of = |op: fn(_, _) -> _| -> Vec<Vec<String>> {
        els.iter()
            .map(|&a| els.iter().map(|&b| f.label(op(a, b)).to_string()).collect())
            .collect()
    };
    let add = table_of(|a, b| a + b);
    let mul = table_of(|a, b| a * b);
    let labels = f.labels();
    match format {
        Format::Json => ok(output::json(&FieldJson {
            n,
            modulus: f.modulus(),
            order: labels.to_vec(),
            add,
            mul,
        })),
        Format::Csv => {
            let mut rows = Vec::new();
            for (op, t) in [("+", &add), ("*", &mul)] {
                for (i, a) in labels.iter().enumerate() {
                    for (j, b) in labels.iter().enumerate() {
                        rows.push(FieldRow {
                            op,
                            a,
                            b,
                            result: &t[i][j],
                        });
                    }
                }
            }
            ok(output::csv(&rows))
        }
        Format::Ascii => {
            let mut out = format!("{f}\n");
            for (op, t) in [("+", &add), ("*", &mul)] {
                out.push('\n');
                let mut header = vec![op];
                header.extend(labels.iter().map(String::as_str));
                let rows: Vec<Vec<String>> = labels
                    .iter()
                    .zip(t)
                    .map(|(l, row)| {
                        std::iter::once(l.clone())
                            .chain(row.iter().cloned())
                            .collect()
                    })
                    .collect();
                out += &table(&header, &rows);
            }
            ok(out)
        }
    }
}

fn describe(space: &PhaseSpace, s: &Striation) -> String {
    match s.direction() {
        Direction::Vertical => "vertical: q = c".into(),
        Direction::Horizontal => "horizontal: p = c".into(),
        Direction::Slope(m) => format!(
            "slope {}: p = {} q + c",
            space.field().label(m),
            space.field().label(m)
        ),
    }
}

#[derive(Serialize)]
struct StriationRow<'a> {
    striation: usize,
    line: usize,
    q: &'a str,
    p: &'a str,
}

fn striations(n: u32, format: Format) -> CmdResult {
    let space = PhaseSpace::new(field_context(n)?);
    match format {
        Format::Json => {
            let all: Vec<_> = space
                .striations()
                .iter()
                .map(|s| space.to_json(s))
                .collect();
            ok(output::json(&all))
        }
        Format::Csv => {
            let js: Vec<_> = space
                .striations()
                .iter()
                .map(|s| space.to_json(s))
                .collect();
            let mut rows = Vec::new();
            for (sid, s) in js.iter().enumerate() {
                for (k, line) in s.lines.iter().enumerate() {
                    for [q, p] in line {
                        rows.push(StriationRow {
                            striation: sid,
                            line: k,
                            q,
                            p,
                        });
                    }
                }
            }
            ok(output::csv(&rows))
        }
        Format::Ascii => {
            let mut out = String::new();
            for s in space.striations() {
                let _ = writeln!(out, "striation {} ({})", s.id(), describe(&space, s));
                out += &space.render_striation(s);
                out.push('\n');
            }
            ok(out)
        }
    }
}

#[derive(Serialize)]
struct ComponentRow {
    striation: usize,
    vector: usize,
    component: usize,
    re: f64,
    im: f64,
}

fn mub(n: u32, verify: bool, format: Format, p: usize) -> CmdResult {
    let sys = system(n)?;
    let mubs = sys.mubs();
    let report = &mubs.report;
    let mut out = match format {
        Format::Json => output::json(&mubs.to_json()),
        Format::Csv => {
            let mut rows = Vec::new();
            for b in &mubs.bases {
                for (k, v) in b.vectors.iter().enumerate() {
                    for (i, z) in v.iter().enumerate() {
                        rows.push(ComponentRow {
                            striation: b.striation,
                            vector: k,
                            component: i,
                            re: z.re,
                            im: z.im,
                        });
                    }
                }
            }
            output::csv(&rows)
        }
        Format::Ascii => {
            let mut out = String::new();
            for (b, s) in mubs.bases.iter().zip(sys.space().striations()) {
                let _ = writeln!(out, "basis {} ({})", b.striation, describe(sys.space(), s));
                for (k, v) in b.vectors.iter().enumerate() {
                    let comps: Vec<String> = v.iter().map(|z| complex(*z, p)).collect();
                    let _ = writeln!(out, "  v{k}: {}", comps.join("  "));
                }
            }
            let lo = report
                .pairs
                .iter()
                .map(|x| x.min)
                .fold(f64::INFINITY, f64::min);
            let hi = report.pairs.iter().map(|x| x.max).fold(0.0, f64::max);
            if report.conjugate {
                let _ = writeln!(
                    out,
                    "{} bases, all overlaps {} (1/sqrt({}))",
                    mubs.bases.len(),
                    real(report.target, p),
                    report.dim
                );
            } else {
                let _ = writeln!(
                    out,
                    "{} bases, overlaps range {}..{}, target {}",
                    mubs.bases.len(),
                    real(lo, p),
                    real(hi, p),
                    real(report.target, p)
                );
            }
            out
        }
    };
    let code = if verify && !report.conjugate {
        VERIFY_FAILED
    } else {
        OK
    };
    if verify {
        let status = if report.conjugate { "passed" } else { "FAILED" };
        eprintln!(
            "verify: {status}, worst overlap deviation {:.2e} over {} pairs",
            report.worst_deviation(),
            report.pairs.len()
        );
    }
    if format == Format::Ascii && verify && !report.conjugate {
        out += "verification failed\n";
    }
    Ok(Outcome { stdout: out, code })
}

#[derive(Serialize)]
struct CellRow<'a> {
    q: &'a str,
    p: &'a str,
    value: f64,
}

fn grid_csv(grid: &WignerGrid) -> String {
    let labels = grid.field().labels();
    let mut rows = Vec::new();
    for (qi, q) in labels.iter().enumerate() {
        for (pi, pl) in labels.iter().enumerate() {
            rows.push(CellRow {
                q,
                p: pl,
                value: grid.values()[qi][pi],
            });
        }
    }
    output::csv(&rows)
}

#[derive(Serialize)]
struct WignerWithLines {
    wigner: qphase::wigner::GridJson,
    /// `line_sums[striation][line]`
    line_sums: Vec<Vec<f64>>,
}

fn wigner(n: u32, spec: &str, lines: bool, format: Format, p: usize) -> CmdResult {
    let sys = system(n)?;
    let st = load_state(spec, n)?;
    let grid = sys.wigner(&st.rho)?;
    let sums: Vec<Vec<f64>> = sys
        .space()
        .striations()
        .iter()
        .map(|s| s.lines().iter().map(|l| line_sum(&grid, l)).collect())
        .collect();
    let out = match format {
        Format::Json if lines => output::json(&WignerWithLines {
            wigner: grid.to_json(),
            line_sums: sums,
        }),
        Format::Json => output::json(&grid.to_json()),
        Format::Csv => grid_csv(&grid),
        Format::Ascii => {
            let mut out = grid.render(p);
            if lines {
                out += "\nline sums (lines in intercept order)\n";
                let rows: Vec<Vec<String>> = sums
                    .iter()
                    .enumerate()
                    .map(|(sid, row)| {
                        std::iter::once(sid.to_string())
                            .chain(row.iter().map(|x| real(*x, p)))
                            .collect()
                    })
                    .collect();
                let mut header = vec!["striation".to_string()];
                header.extend((0..sys.dim()).map(|k| format!("line {k}")));
                let header: Vec<&str> = header.iter().map(String::as_str).collect();
                out += &table(&header, &rows);
            }
            out
        }
    };
    ok(out)
}

#[derive(Serialize)]
struct TomoJson {
    counts: qphase::tomography::CountsRecord,
    report: qphase::tomography::ReportJson,
}

#[derive(Serialize)]
struct MetricRow {
    metric: &'static str,
    value: f64,
}

fn report_ascii(report: &ReconstructionReport, p: usize) -> String {
    let mut out = String::new();
    let shots = if report.shots == 0 {
        "exact probabilities".to_string()
    } else {
        format!("{} shots per basis", report.shots)
    };
    let estimate = if report.project { "projected" } else { "raw" };
    let _ = writeln!(out, "{shots}, seed {}, {estimate} estimate", report.seed);
    if let Some(m) = report.metrics {
        out += &table(
            &["metric", "value"],
            &[
                vec!["fidelity".into(), real(m.fidelity, p)],
                vec!["trace distance".into(), real(m.trace_distance, p)],
                vec!["max |dW|".into(), real(m.max_wigner_error, p)],
            ],
        );
    }
    out += "\nestimated Wigner function\n";
    out += &report.wigner.render(p);
    out
}

fn tomo(
    n: u32,
    spec: &str,
    shots: u64,
    seed: u64,
    project: bool,
    format: Format,
    p: usize,
) -> CmdResult {
    let sys = system(n)?;
    let st = load_state(spec, n)?;
    let counts = sys.simulate(&st.rho, shots, seed)?;
    let report = sys.reconstruct(&counts, project, Some(&st.rho))?;
    let out = match format {
        Format::Json => output::json(&TomoJson {
            counts,
            report: report.to_json(),
        }),
        Format::Csv => {
            let m = report.metrics.expect("truth supplied");
            output::csv(&[
                MetricRow {
                    metric: "fidelity",
                    value: m.fidelity,
                },
                MetricRow {
                    metric: "trace_distance",
                    value: m.trace_distance,
                },
                MetricRow {
                    metric: "max_wigner_error",
                    value: m.max_wigner_error,
                },
            ])
        }
        Format::Ascii => report_ascii(&report, p),
    };
    ok(out)
}

#[derive(Serialize)]
struct StudyJson {
    shots: Vec<ScalingRow>,
    seeds: u64,
    slope_max_wigner_error: Option<f64>,
    slope_trace_distance: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn tomo_study(
    n: u32,
    spec: &str,
    list: &[u64],
    seeds: u64,
    seed: u64,
    project: bool,
    format: Format,
    p: usize,
) -> CmdResult {
    if seeds == 0 {
        return Err(CliError::usage("--seeds must be at least 1"));
    }
    let sys = system(n)?;
    let st = load_state(spec, n)?;
    let seed_list: Vec<u64> = (0..seeds).map(|k| seed.wrapping_add(k)).collect();
    let rows = error_scaling_study(&st.rho, sys.net(), sys.mubs(), list, &seed_list, project)?;
    let slope_w = loglog_slope(&rows, |r| r.mean_max_wigner_error);
    let slope_t = loglog_slope(&rows, |r| r.mean_trace_distance);
    let out = match format {
        Format::Csv => output::csv(&rows),
        Format::Json => output::json(&StudyJson {
            shots: rows,
            seeds,
            slope_max_wigner_error: slope_w,
            slope_trace_distance: slope_t,
        }),
        Format::Ascii => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.shots.to_string(),
                        real(r.mean_max_wigner_error, p),
                        real(r.mean_trace_distance, p),
                    ]
                })
                .collect();
            let mut out = format!("{seeds} seeds per shot count\n");
            out += &table(&["shots", "mean max |dW|", "mean trace distance"], &body);
            let fmt = |s: Option<f64>| s.map_or("n/a".to_string(), |x| real(x, p));
            let _ = writeln!(
                out,
                "log-log slope: max |dW| {}, trace distance {}",
                fmt(slope_w),
                fmt(slope_t)
            );
            out
        }
    };
    ok(out)
}

fn verify(n_max: u32, seed: u64, format: Format) -> CmdResult {
    if n_max == 0 {
        return Err(CliError::usage("--n-max must be at least 1"));
    }
    field_context(n_max)?;
    let results = run_suite(n_max, seed);
    let failed = results.iter().filter(|r| !r.passed).count();
    let out = match format {
        Format::Json => output::json(&results),
        Format::Csv => output::csv(&results),
        Format::Ascii => {
            let rows: Vec<Vec<String>> = results
                .iter()
                .map(|r| {
                    vec![
                        r.n.to_string(),
                        r.name.to_string(),
                        if r.passed { "pass" } else { "FAIL" }.to_string(),
                        r.detail.clone(),
                    ]
                })
                .collect();
            let mut out = table(&["n", "check", "status", "detail"], &rows);
            let _ = writeln!(
                out,
                "{} of {} checks passed",
                results.len() - failed,
                results.len()
            );
            out
        }
    };
    Ok(Outcome {
        stdout: out,
        code: if failed == 0 { OK } else { VERIFY_FAILED },
    })
}
