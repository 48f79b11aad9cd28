//! Pauli matrices, tensor products, and the unitary representation of
//! phase-space translations on n qubits.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{FieldContext, FieldElement};
use crate::linalg::{self, c, ComplexMatrix, StateVector, I, ONE, ZERO};
use crate::phase_space::Point;

pub const UNITARITY_TOL: f64 = 1e-12;
pub const COMMUTATION_TOL: f64 = 1e-10;
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-9;
/// Gap below which two eigenvalues of a Hermitian block are treated as equal.
const CLUSTER_TOL: f64 = 1e-6;

/// One of the single-qubit Paulis in the basis where Z = diag(1, -1).
pub fn pauli(name: &str) -> Result<ComplexMatrix> {
    let entries = match name {
        "I" => [ONE, ZERO, ZERO, ONE],
        "X" => [ZERO, ONE, ONE, ZERO],
        "Y" => [ZERO, -I, I, ZERO],
        "Z" => [ONE, ZERO, ZERO, -ONE],
        other => return Err(Error::UnknownPauli(other.to_string())),
    };
    Ok(ComplexMatrix::from_row_slice(2, 2, &entries))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kronecker(b)
}

/// Kronecker product of a sequence, leftmost factor first.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1, 1), |acc, f| acc.kronecker(f))
}

/// How field coordinates map onto qubits: `q` is expanded in `q_basis`, `p` in
/// `p_basis`, and the coefficient of basis element `i` drives tensor slot
/// `factor_order[i]` (slot 0 is the leftmost factor).
#[derive(Clone, Debug)]
pub struct QubitLabeling {
    ctx: FieldContext,
    q_basis: Vec<FieldElement>,
    p_basis: Vec<FieldElement>,
    factor_order: Vec<usize>,
    /// coefficient bitmask (over basis indices) of each element, by element index
    q_coords: Vec<u32>,
    p_coords: Vec<u32>,
    kind: LabelingKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LabelingKind {
    /// q and p both expanded in the polynomial basis 1, w, ..., w^(n-1).
    Polynomial,
    /// q in the polynomial basis, p in its trace-dual basis.
    TraceDual,
    Custom,
}

fn coordinate_table(ctx: &FieldContext, basis: &[FieldElement]) -> Result<Vec<u32>> {
    let n = ctx.degree() as usize;
    if basis.len() != n {
        return Err(Error::InvalidLabeling(format!(
            "basis has {} elements, field degree is {n}",
            basis.len()
        )));
    }
    if basis.iter().any(|e| e.field() != ctx.id()) {
        return Err(Error::ContextMismatch);
    }
    let mut table = vec![u32::MAX; ctx.order()];
    for mask in 0..(1u32 << n) {
        let v = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .fold(ctx.zero(), |acc, i| acc + basis[i]);
        if table[v.index()] != u32::MAX {
            return Err(Error::InvalidLabeling(
                "basis is not linearly independent over Z2".into(),
            ));
        }
        table[v.index()] = mask;
    }
    Ok(table)
}

fn polynomial_basis(ctx: &FieldContext) -> Vec<FieldElement> {
    (0..ctx.degree())
        .map(|i| ctx.element(1 << i).expect("x^i is an element"))
        .collect()
}

/// The basis {f_j} with Tr(e_i f_j) = delta_ij.
pub fn trace_dual_basis(ctx: &FieldContext, basis: &[FieldElement]) -> Result<Vec<FieldElement>> {
    basis
        .iter()
        .enumerate()
        .map(|(j, _)| {
            ctx.elements()
                .find(|&f| {
                    basis
                        .iter()
                        .enumerate()
                        .all(|(i, &e)| ctx.trace(e * f) == u8::from(i == j))
                })
                .ok_or_else(|| Error::InvalidLabeling("basis has no trace dual".into()))
        })
        .collect()
}

impl QubitLabeling {
    pub fn new(
        ctx: &FieldContext,
        q_basis: Vec<FieldElement>,
        p_basis: Vec<FieldElement>,
        factor_order: Vec<usize>,
    ) -> Result<Self> {
        Self::build(ctx, q_basis, p_basis, factor_order, LabelingKind::Custom)
    }

    fn build(
        ctx: &FieldContext,
        q_basis: Vec<FieldElement>,
        p_basis: Vec<FieldElement>,
        factor_order: Vec<usize>,
        kind: LabelingKind,
    ) -> Result<Self> {
        let n = ctx.degree() as usize;
        let q_coords = coordinate_table(ctx, &q_basis)?;
        let p_coords = coordinate_table(ctx, &p_basis)?;
        let mut seen = factor_order.clone();
        seen.sort_unstable();
        if seen != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidLabeling(format!(
                "factor order {factor_order:?} is not a permutation of 0..{n}"
            )));
        }
        Ok(QubitLabeling {
            ctx: ctx.clone(),
            q_basis,
            p_basis,
            factor_order,
            q_coords,
            p_coords,
            kind,
        })
    }

    fn default_slots(ctx: &FieldContext) -> Vec<usize> {
        let n = ctx.degree() as usize;
        (0..n).map(|i| n - 1 - i).collect()
    }

    /// Both axes in the polynomial basis; the most significant basis element
    /// acts on the leftmost qubit.
    pub fn polynomial(ctx: &FieldContext) -> Result<Self> {
        let basis = polynomial_basis(ctx);
        Self::build(
            ctx,
            basis.clone(),
            basis,
            Self::default_slots(ctx),
            LabelingKind::Polynomial,
        )
    }

    pub fn trace_dual(ctx: &FieldContext) -> Result<Self> {
        let q_basis = polynomial_basis(ctx);
        let p_basis = trace_dual_basis(ctx, &q_basis)?;
        Self::build(
            ctx,
            q_basis,
            p_basis,
            Self::default_slots(ctx),
            LabelingKind::TraceDual,
        )
    }

    /// Polynomial labeling for n <= 2, trace-dual for n >= 3.
    pub fn default_for(ctx: &FieldContext) -> Result<Self> {
        if ctx.degree() <= 2 {
            Self::polynomial(ctx)
        } else {
            Self::trace_dual(ctx)
        }
    }

    pub fn field(&self) -> &FieldContext {
        &self.ctx
    }

    pub fn kind(&self) -> LabelingKind {
        self.kind
    }

    pub fn qubits(&self) -> usize {
        self.q_basis.len()
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    pub fn q_basis(&self) -> &[FieldElement] {
        &self.q_basis
    }

    pub fn p_basis(&self) -> &[FieldElement] {
        &self.p_basis
    }

    pub fn factor_order(&self) -> &[usize] {
        &self.factor_order
    }

    fn to_slot_mask(&self, coords: u32) -> u32 {
        let n = self.qubits();
        (0..n)
            .filter(|i| coords >> i & 1 == 1)
            .map(|i| 1u32 << (n - 1 - self.factor_order[i]))
            .fold(0, |a, b| a | b)
    }

    /// Bitmasks over computational-basis index bits (leftmost qubit = most
    /// significant bit) of the X factors and Z factors of U_v.
    pub fn pauli_masks(&self, v: Point) -> Result<(u32, u32)> {
        if v.q.field() != self.ctx.id() || v.p.field() != self.ctx.id() {
            return Err(Error::ContextMismatch);
        }
        Ok((
            self.to_slot_mask(self.q_coords[v.q.index()]),
            self.to_slot_mask(self.p_coords[v.p.index()]),
        ))
    }
}

/// U_v together with its phase-space vector.
#[derive(Clone, Debug)]
pub struct TranslationOperator {
    pub vector: Point,
    pub unitary: ComplexMatrix,
    pub x_mask: u32,
    pub z_mask: u32,
}

impl TranslationOperator {
    /// `i^(#XZ overlaps) U`, the Hermitian involution proportional to U_v.
    pub fn hermitian_form(&self) -> ComplexMatrix {
        let k = (self.x_mask & self.z_mask).count_ones();
        let phase = match k % 4 {
            0 => ONE,
            1 => I,
            2 => -ONE,
            _ => -I,
        };
        &self.unitary * phase
    }
}

/// U_v = (product of X factors for q) * (product of Z factors for p).
pub fn translation_unitary(v: Point, labeling: &QubitLabeling) -> Result<TranslationOperator> {
    let (x_mask, z_mask) = labeling.pauli_masks(v)?;
    let n = labeling.qubits();
    let x = pauli("X")?;
    let z = pauli("Z")?;
    let id = pauli("I")?;
    let factor = |mask: u32, slot: usize, op: &ComplexMatrix| -> ComplexMatrix {
        if mask >> (n - 1 - slot) & 1 == 1 {
            op.clone()
        } else {
            id.clone()
        }
    };
    let h = kron_all(&(0..n).map(|s| factor(x_mask, s, &x)).collect::<Vec<_>>());
    let vz = kron_all(&(0..n).map(|s| factor(z_mask, s, &z)).collect::<Vec<_>>());
    Ok(TranslationOperator {
        vector: v,
        unitary: h * vz,
        x_mask,
        z_mask,
    })
}

/// The unit scalar lambda with U_v U_w = lambda U_(v+w).
pub fn projective_check(
    u: &TranslationOperator,
    w: &TranslationOperator,
    labeling: &QubitLabeling,
) -> Result<Complex64> {
    let dim = u.unitary.nrows();
    if w.unitary.nrows() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: w.unitary.nrows(),
        });
    }
    let sum = translation_unitary(u.vector.translate(w.vector)?, labeling)?;
    let product = &u.unitary * &w.unitary;
    let lambda = (sum.unitary.adjoint() * &product).trace() / c(dim as f64, 0.0);
    let residual = linalg::max_abs_diff(&product, &(&sum.unitary * lambda));
    if residual > COMMUTATION_TOL || (lambda.norm() - 1.0).abs() > COMMUTATION_TOL {
        return Err(Error::ProjectiveFailure(residual));
    }
    Ok(lambda)
}

/// A simultaneous eigenvector and its eigenvalue under each input operator.
#[derive(Clone, Debug)]
pub struct JointEigenvector {
    pub vector: StateVector,
    pub eigenvalues: Vec<Complex64>,
}

/// Orthonormal eigenspaces of a Hermitian block, clustered by eigenvalue.
fn split_hermitian(h: &ComplexMatrix) -> Vec<(f64, ComplexMatrix)> {
    let (values, vectors) = linalg::hermitian_eigen(h);
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        match out.last_mut() {
            Some((_, members)) if (x - values[*members.last().unwrap()]).abs() < CLUSTER_TOL => {
                members.push(i)
            }
            _ => out.push((x, vec![i])),
        }
    }
    out.into_iter()
        .map(|(_, members)| {
            let mean = members.iter().map(|&i| values[i]).sum::<f64>() / members.len() as f64;
            let cols: Vec<_> = members
                .iter()
                .map(|&i| vectors.column(i).into_owned())
                .collect();
            (mean, ComplexMatrix::from_columns(&cols))
        })
        .collect()
}

fn angle(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re).rem_euclid(TAU);
    if TAU - a < CLUSTER_TOL {
        0.0
    } else {
        a
    }
}

fn cmp_angles(a: &[Complex64], b: &[Complex64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let (ax, ay) = (angle(*x), angle(*y));
        if (ax - ay).abs() > CLUSTER_TOL {
            return ax.total_cmp(&ay);
        }
    }
    Ordering::Equal
}

/// Simultaneous eigenvectors of pairwise-commuting normal operators, found by
/// diagonalizing the first operator and refining within each eigenspace by the
/// next. Output is sorted by the tuple of eigenvalue phases in [0, 2pi), and
/// each vector's first significant component is real and positive.
pub fn joint_eigenbasis(ops: &[ComplexMatrix]) -> Result<Vec<JointEigenvector>> {
    let dim = ops.first().map_or(1, |m| m.nrows());
    for m in ops {
        if m.nrows() != dim || m.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: m.nrows(),
            });
        }
    }
    for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let residual = linalg::commutator_residual(&ops[i], &ops[j]);
            if residual > COMMUTATION_TOL {
                return Err(Error::NotCommuting {
                    first: i,
                    second: j,
                    residual,
                });
            }
        }
    }

    let half = c(0.5, 0.0);
    let minus_half_i = c(0.0, -0.5);
    let mut spaces: Vec<(ComplexMatrix, Vec<Complex64>)> =
        vec![(ComplexMatrix::identity(dim, dim), Vec::new())];
    for op in ops {
        let mut next = Vec::with_capacity(spaces.len());
        for (basis, eig) in spaces {
            let block = basis.adjoint() * op * &basis;
            let re_part = (&block + block.adjoint()) * half;
            let im_part = (&block - block.adjoint()) * minus_half_i;
            for (re, y) in split_hermitian(&re_part) {
                let im_block = y.adjoint() * &im_part * &y;
                for (im, z) in split_hermitian(&im_block) {
                    let mut e = eig.clone();
                    e.push(c(re, im));
                    next.push((&basis * &y * z, e));
                }
            }
        }
        spaces = next;
    }

    let mut out: Vec<JointEigenvector> = spaces
        .into_iter()
        .flat_map(|(basis, eig)| {
            (0..basis.ncols())
                .map(|k| {
                    let mut v = basis.column(k).into_owned();
                    linalg::fix_phase(&mut v);
                    JointEigenvector {
                        vector: v,
                        eigenvalues: eig.clone(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    out.sort_by(|a, b| cmp_angles(&a.eigenvalues, &b.eigenvalues));
    Ok(out)
}
