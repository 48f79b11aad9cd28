//! Quantum nets, phase-point operators, and discrete Wigner functions.
//!
//! A quantum net assigns to every line one vector of its striation's basis.
//! Only the ray of each striation is chosen; every other line receives the
//! ray's vector transported by the translation that carries the ray onto it.
//! The phase-point operator of a point is the sum of the projectors of the
//! N + 1 lines through it minus the identity, and W(a) = tr(rho A_a) / N.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldContext;
use crate::linalg::{self, c, ComplexMatrix, StateVector, I, ONE};
use crate::mub::MubSet;
use crate::operators::{translation_unitary, TranslationOperator};
use crate::phase_space::{Line, PhaseSpace, Point};

/// Tolerance for net consistency checks and for dropping the imaginary part of W.
pub const NET_TOL: f64 = 1e-9;

/// How ray vectors are chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NetConvention {
    /// Two qubits: the published choices for the three diagonal striations.
    /// Every other case falls back to `Lexicographic`.
    #[default]
    Reference,
    /// The common +1 eigenvector of the stabilizers, each rescaled to a
    /// Hermitian involution with the lexicographically first consistent signs.
    Lexicographic,
}

#[derive(Clone, Debug)]
pub struct LineState {
    /// Index into the striation's basis.
    pub basis_index: usize,
    pub vector: StateVector,
    pub projector: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct PhasePointOperator {
    pub point: Point,
    pub matrix: ComplexMatrix,
}

#[derive(Clone, Debug)]
pub struct QuantumNet {
    space: PhaseSpace,
    convention: NetConvention,
    /// `lines[striation][line]`.
    lines: Vec<Vec<LineState>>,
    /// A operators by point index `q * N + p`.
    phase_points: Vec<PhasePointOperator>,
    /// U_a by point index.
    translations: Vec<TranslationOperator>,
}

/// Ray vectors for the YY, belle and beau striations of the two-qubit space.
fn reference_rays(sid: usize) -> Option<StateVector> {
    let one = ONE;
    let entries = match sid {
        2 => [one, -I, I, one],
        3 => [one, one, I, -I],
        4 => [one, -I, one, I],
        _ => return None,
    };
    Some(StateVector::from_iterator(
        4,
        entries.iter().map(|z| z * 0.5),
    ))
}

/// Projector onto the common +1 eigenvector of the sign-fixed Hermitian
/// stabilizers. Signs are fixed greedily in stabilizer order: a stabilizer
/// already generated by earlier ones inherits its sign, otherwise it gets +1.
fn lexicographic_ray_projector(
    ctx: &FieldContext,
    stabilizers: &[TranslationOperator],
) -> ComplexMatrix {
    let dim = ctx.order();
    let origin = Point {
        q: ctx.zero(),
        p: ctx.zero(),
    };
    let mut group = vec![(origin, ComplexMatrix::identity(dim, dim))];
    for t in stabilizers {
        if group.iter().any(|(v, _)| *v == t.vector) {
            continue;
        }
        let signed = t.hermitian_form();
        let extension: Vec<_> = group
            .iter()
            .map(|(w, m)| (w.translate(t.vector).expect("same field"), &signed * m))
            .collect();
        group.extend(extension);
    }
    let sum = group
        .iter()
        .fold(ComplexMatrix::zeros(dim, dim), |acc, (_, m)| acc + m);
    sum * c(1.0 / group.len() as f64, 0.0)
}

/// Index of the basis vector whose projector captures `psi` (overlap ~ 1).
fn match_basis_vector(basis: &[StateVector], psi: &StateVector) -> Option<usize> {
    basis
        .iter()
        .position(|b| (b.dotc(psi).norm_sqr() - 1.0).abs() < NET_TOL)
}

impl QuantumNet {
    pub fn new(space: &PhaseSpace, mubs: &MubSet, convention: NetConvention) -> Result<Self> {
        let labeling = &mubs.labeling;
        let ctx = space.field().clone();
        let n_qubits = ctx.degree();
        let dim = ctx.order();
        let translations = space
            .points()
            .map(|v| translation_unitary(v, labeling))
            .collect::<Result<Vec<_>>>()?;

        let mut lines = Vec::with_capacity(space.striations().len());
        for (s, basis) in space.striations().iter().zip(&mubs.bases) {
            let sid = s.id();
            let reference = match convention {
                NetConvention::Reference if n_qubits == 2 => reference_rays(sid),
                _ => None,
            };
            let ray_index = match reference {
                Some(psi) => match_basis_vector(&basis.vectors, &psi).ok_or_else(|| {
                    Error::NetInconsistent(format!(
                        "reference ray vector of striation {sid} is not a stabilizer eigenvector"
                    ))
                })?,
                None => {
                    let proj = lexicographic_ray_projector(&ctx, &basis.stabilizers);
                    basis
                        .vectors
                        .iter()
                        .position(|b| ((b.adjoint() * &proj * b)[(0, 0)].re - 1.0).abs() < NET_TOL)
                        .ok_or_else(|| {
                            Error::NetInconsistent(format!(
                                "striation {sid}: signed stabilizers have no common +1 eigenvector"
                            ))
                        })?
                }
            };
            let ray_vector = basis.vectors[ray_index].clone();
            let ray_projector = linalg::projector(&ray_vector);

            let mut states = Vec::with_capacity(dim);
            for k in 0..dim {
                let offset = s.offset(&ctx, k);
                let u = &translations[offset.index(dim)].unitary;
                let vector = u * &ray_vector;
                let basis_index = match_basis_vector(&basis.vectors, &vector).ok_or_else(|| {
                    Error::NetInconsistent(format!(
                        "striation {sid}, line {k}: transported vector left the basis"
                    ))
                })?;
                states.push(LineState {
                    basis_index,
                    projector: linalg::projector(&vector),
                    vector,
                });
            }

            // Every translation carrying the ray onto a line must agree.
            for v in space.points() {
                let k = s.line_index_of(&v);
                let moved =
                    linalg::conjugate_by(&translations[v.index(dim)].unitary, &ray_projector);
                let diff = linalg::max_abs_diff(&moved, &states[k].projector);
                if diff > NET_TOL {
                    return Err(Error::NetInconsistent(format!(
                        "striation {sid}, line {k}: translation paths disagree by {diff:.3e}"
                    )));
                }
            }
            let mut used: Vec<_> = states.iter().map(|st| st.basis_index).collect();
            used.sort_unstable();
            used.dedup();
            if used.len() != dim {
                return Err(Error::NetInconsistent(format!(
                    "striation {sid}: lines share a basis vector"
                )));
            }
            lines.push(states);
        }

        let mut net = QuantumNet {
            space: space.clone(),
            convention,
            lines,
            phase_points: Vec::new(),
            translations,
        };
        net.phase_points = space.points().map(|a| net.build_phase_point(a)).collect();
        Ok(net)
    }

    fn build_phase_point(&self, point: Point) -> PhasePointOperator {
        let dim = self.dim();
        let mut matrix = -ComplexMatrix::identity(dim, dim);
        for s in self.space.striations() {
            matrix += &self.lines[s.id()][s.line_index_of(&point)].projector;
        }
        PhasePointOperator { point, matrix }
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn field(&self) -> &FieldContext {
        self.space.field()
    }

    pub fn convention(&self) -> NetConvention {
        self.convention
    }

    pub fn dim(&self) -> usize {
        self.space.order()
    }

    pub fn line_state(&self, striation: usize, line: usize) -> &LineState {
        &self.lines[striation][line]
    }

    /// The state assigned to an arbitrary line, if it belongs to this space.
    pub fn state_for_line(&self, line: &Line) -> Option<&LineState> {
        self.space.locate(line).map(|(s, k)| &self.lines[s][k])
    }

    pub fn phase_point(&self, point: &Point) -> &PhasePointOperator {
        &self.phase_points[point.index(self.dim())]
    }

    pub fn phase_points(&self) -> &[PhasePointOperator] {
        &self.phase_points
    }

    pub fn translation(&self, v: &Point) -> &TranslationOperator {
        &self.translations[v.index(self.dim())]
    }
}

/// Build the default net: the reference choices for two qubits, the
/// lexicographic sign rule otherwise.
pub fn default_net(space: &PhaseSpace, mubs: &MubSet) -> Result<QuantumNet> {
    QuantumNet::new(space, mubs, NetConvention::Reference)
}

/// A_a for one point.
pub fn phase_point_operator(alpha: &Point, net: &QuantumNet) -> PhasePointOperator {
    net.phase_point(alpha).clone()
}

/// Real N x N grid, `values[q][p]` in canonical element order.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerGrid {
    field: FieldContext,
    values: Vec<Vec<f64>>,
}

impl WignerGrid {
    pub fn new(field: FieldContext, values: Vec<Vec<f64>>) -> Result<Self> {
        let n = field.order();
        if values.len() != n || values.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: values.len(),
            });
        }
        Ok(WignerGrid { field, values })
    }

    pub fn uniform(field: FieldContext) -> Self {
        let n = field.order();
        let v = 1.0 / (n * n) as f64;
        WignerGrid {
            values: vec![vec![v; n]; n],
            field,
        }
    }

    pub fn field(&self) -> &FieldContext {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn get(&self, pt: &Point) -> f64 {
        self.values[pt.q.index()][pt.p.index()]
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().flatten().sum()
    }

    pub fn min(&self) -> f64 {
        self.values
            .iter()
            .flatten()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_diff(&self, other: &WignerGrid) -> f64 {
        self.values
            .iter()
            .flatten()
            .zip(other.values.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> GridJson {
        GridJson {
            n: self.field.degree(),
            order: self.field.labels().to_vec(),
            values: self.values.clone(),
        }
    }

    pub fn from_json(json: &GridJson) -> Result<Self> {
        let field = FieldContext::new(json.n)?;
        if json.order != field.labels() {
            return Err(Error::Json(format!(
                "element order {:?} does not match {:?}",
                json.order,
                field.labels()
            )));
        }
        WignerGrid::new(field, json.values.clone())
    }

    /// Fixed-point table, origin bottom-left, p increasing upward.
    pub fn render(&self, precision: usize) -> String {
        let n = self.order();
        let width = precision + 3;
        let labels = self.field.labels();
        let label_w = labels.iter().map(|l| l.len()).max().unwrap_or(1);
        let mut out = String::new();
        for pi in (0..n).rev() {
            let _ = write!(out, "{:>label_w$} |", labels[pi]);
            for qi in 0..n {
                let _ = write!(
                    out,
                    " {}",
                    format_fixed(self.values[qi][pi], precision, width)
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out, "{:>label_w$} +{}", "", "-".repeat(n * (width + 1)));
        let _ = write!(out, "{:>label_w$}  ", "");
        for l in labels {
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
        out
    }
}

/// `{:.prec$}` with values that round to zero printed without a sign.
pub fn format_fixed(x: f64, precision: usize, width: usize) -> String {
    let scale = 10f64.powi(precision as i32);
    let x = if (x * scale).round() == 0.0 { 0.0 } else { x };
    format!("{x:>width$.precision$}")
}

/// JSON form: `{"n": .., "order": ["0","1","w","w2"], "values": [[..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub n: u32,
    pub order: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

/// W(a) = tr(rho A_a) / N. `rho` must be Hermitian and N x N.
pub fn wigner_from_state(rho: &ComplexMatrix, net: &QuantumNet) -> Result<WignerGrid> {
    let dim = net.dim();
    linalg::check_hermitian(rho, dim)?;
    let mut values = vec![vec![0.0; dim]; dim];
    for a in net.phase_points() {
        // tr(rho A) = sum_ij rho_ij A_ji
        let mut tr = c(0.0, 0.0);
        for i in 0..dim {
            for j in 0..dim {
                tr += rho[(i, j)] * a.matrix[(j, i)];
            }
        }
        let w = tr / dim as f64;
        if w.im.abs() > NET_TOL {
            return Err(Error::ImaginaryResidue(w.im));
        }
        values[a.point.q.index()][a.point.p.index()] = w.re;
    }
    WignerGrid::new(net.field().clone(), values)
}

/// rho = sum_a W(a) A_a.
pub fn state_from_wigner(grid: &WignerGrid, net: &QuantumNet) -> Result<ComplexMatrix> {
    let dim = net.dim();
    if grid.field() != net.field() {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: grid.order(),
        });
    }
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for a in net.phase_points() {
        rho += &a.matrix * c(grid.get(&a.point), 0.0);
    }
    Ok(rho)
}

pub fn line_sum(grid: &WignerGrid, line: &Line) -> f64 {
    line.points().iter().map(|pt| grid.get(pt)).sum()
}

/// W'(a) = W(a - v).
pub fn translate_grid(grid: &WignerGrid, v: &Point) -> Result<WignerGrid> {
    let n = grid.order();
    let mut values = vec![vec![0.0; n]; n];
    for (qi, row) in values.iter_mut().enumerate() {
        for (pi, slot) in row.iter_mut().enumerate() {
            let a = Point {
                q: grid.field.at(qi),
                p: grid.field.at(pi),
            };
            // subtraction equals addition in characteristic 2
            *slot = grid.get(&a.translate(*v)?);
        }
    }
    WignerGrid::new(grid.field.clone(), values)
}
