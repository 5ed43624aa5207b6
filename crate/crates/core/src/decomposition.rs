//! Operator-part machinery: the regular part `T_op`, the Moore-Penrose inverse,
//! the reduced minimum modulus, the Hyers-Ulam constant, square roots, `|T|`,
//! the contraction `C_T = (I + T*T)⁻¹` and `Z_T = T C_T^{1/2}`.

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::relation::LinearRelation;
use crate::subspace::{orthonormal_full, Subspace};

/// Entrywise agreement required between the two `C_T` routes.
pub const CONTRACTION_ROUTE_TOL: f64 = 1e-8;

/// The single-valued part `T_op = P_{M(T)⊥} T`.
#[derive(Clone, Debug)]
pub struct OperatorPart {
    /// Orthonormal basis of `D(T)`, one vector per column.
    pub domain_basis: Matrix,
    /// Images of the domain basis vectors (`dim_k × dim D`).
    pub matrix: Matrix,
    pub as_relation: LinearRelation,
}

impl OperatorPart {
    /// The operator extended by zero on `D(T)⊥`, as a `dim_k × dim_h` matrix.
    pub fn full_matrix(&self) -> Matrix {
        &self.matrix * self.domain_basis.adjoint()
    }

    /// Singular values of the operator on its domain, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        linalg::singular_values(&self.matrix, self.as_relation.field())
    }

    pub fn norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

pub fn regular_part(t: &LinearRelation) -> OperatorPart {
    let field = t.field();
    let tol = t.tol();
    let u = t.h_block();
    let v = t.k_block();
    let d = linalg::svd(&u, field);
    let dim_d = linalg::numerical_rank(&d.s, tol, 1.0);
    let domain_basis = d.u.columns(0, dim_d).into_owned();
    // Coefficients c_i with U c_i = q_i.
    let mut coeffs = d.v.columns(0, dim_d).into_owned();
    for (j, mut col) in coeffs.column_iter_mut().enumerate() {
        col /= linalg::c(d.s[j]);
    }
    let mul = t.mulpart();
    let raw = &v * coeffs;
    let matrix = truncate(&raw - mul.projector() * &raw, field, tol);
    let gens = linalg::vstack(&domain_basis, &matrix);
    let graph = Subspace::from_orthonormal(orthonormal_full(&gens, field), field, tol);
    let as_relation = LinearRelation::from_graph_subspace(graph, t.dim_h(), t.dim_k()).expect("shape preserved");
    OperatorPart {
        domain_basis,
        matrix,
        as_relation,
    }
}

/// Drops singular values at or below the rank threshold, so that a roundoff
/// residue is exactly zero for every later consumer.
fn truncate(m: Matrix, field: linalg::Field, tol: f64) -> Matrix {
    let d = linalg::svd(&m, field);
    let r = linalg::numerical_rank(&d.s, tol, 1.0);
    if r == d.s.len() {
        return m;
    }
    let mut u = d.u.columns(0, r).into_owned();
    for (j, mut col) in u.column_iter_mut().enumerate() {
        col *= linalg::c(d.s[j]);
    }
    u * d.v.columns(0, r).adjoint()
}

/// `T† = (T⁻¹)_op`.
pub fn moore_penrose(t: &LinearRelation) -> OperatorPart {
    regular_part(&t.inverse())
}

/// `‖Q_T T‖`, the norm of the regular part.
pub fn quotient_operator_norm(t: &LinearRelation) -> f64 {
    regular_part(t).norm()
}

/// Smallest nonzero singular value of `T_op`; `+∞` when `T_op` vanishes.
pub fn gamma(t: &LinearRelation) -> f64 {
    let op = regular_part(t);
    smallest_nonzero(&op.singular_values(), t.tol())
}

pub(crate) fn smallest_nonzero(s: &[f64], tol: f64) -> f64 {
    let r = linalg::numerical_rank(s, tol, 1.0);
    if r == 0 {
        f64::INFINITY
    } else {
        s[r - 1]
    }
}

/// `M_T = ‖T†‖`; zero when `T†` vanishes.
pub fn hus_constant(t: &LinearRelation) -> f64 {
    moore_penrose(t).norm()
}

fn require_nonnegative_selfadjoint(t: &LinearRelation) -> Result<()> {
    if !t.is_square() || !t.is_selfadjoint()? || !t.is_nonnegative()? {
        return Err(Error::NotNonnegativeSelfAdjoint);
    }
    Ok(())
}

/// `T^{1/2} = (T_op)^{1/2} ∔ ({0} × M(T))` for nonnegative self-adjoint `T`.
pub fn sqrt_nonneg(t: &LinearRelation) -> Result<LinearRelation> {
    require_nonnegative_selfadjoint(t)?;
    let field = t.field();
    let op = regular_part(t);
    let q = &op.domain_basis;
    let compressed = q.adjoint() * &op.matrix;
    let scale = linalg::norm2(&compressed).max(1.0);
    let root = linalg::hermitian_sqrt(&compressed, field, t.check_tol() * scale, t.tol() * scale).map_err(|_| Error::NotNonnegativeSelfAdjoint)?;
    let mul = t.mulpart();
    LinearRelation::from_parts(q, &(q * root), mul.basis(), field, t.tol())
}

/// `|T| = (T*T)^{1/2}`.
pub fn abs_relation(t: &LinearRelation) -> Result<LinearRelation> {
    let gram = t.adjoint().compose(t)?;
    sqrt_nonneg(&gram)
}

/// The two independently computed forms of `C_T`.
#[derive(Clone, Debug)]
pub struct ContractionRoutes {
    /// `(I + T*T)⁻¹` obtained as the Moore-Penrose inverse of the relation `I + T*T`.
    pub via_inverse: Matrix,
    /// `P_T P_T*`, the `H`-block of the orthogonal projector onto the graph.
    pub via_projector: Matrix,
}

impl ContractionRoutes {
    pub fn max_gap(&self) -> f64 {
        linalg::max_abs_diff(&self.via_inverse, &self.via_projector)
    }
}

pub fn resolvent_contraction_routes(t: &LinearRelation) -> Result<ContractionRoutes> {
    let gram = t.adjoint().compose(t)?;
    let shifted = LinearRelation::identity(t.dim_h(), t.field()).sum(&gram)?;
    let via_inverse = moore_penrose(&shifted).full_matrix();
    let u = t.h_block();
    let via_projector = &u * u.adjoint();
    Ok(ContractionRoutes {
        via_inverse,
        via_projector,
    })
}

/// `C_T = (I + T*T)⁻¹`, cross-checked against `P_T P_T*`.
pub fn resolvent_contraction(t: &LinearRelation) -> Result<Matrix> {
    let routes = resolvent_contraction_routes(t)?;
    let gap = routes.max_gap();
    if gap > CONTRACTION_ROUTE_TOL {
        return Err(Error::Inconsistency(format!("C_T routes disagree by {gap:.3e}")));
    }
    Ok(routes.via_projector)
}

/// `Z_T = T C_T^{1/2}`.
pub fn z_transform(t: &LinearRelation) -> Result<LinearRelation> {
    let field = t.field();
    let contraction = resolvent_contraction(t)?;
    let root = linalg::hermitian_sqrt(&contraction, field, t.check_tol(), t.tol())
        .map_err(|v| Error::Inconsistency(format!("C_T has negative eigenvalue {v:.3e}")))?;
    t.compose(&LinearRelation::from_matrix(&root, field)?)
}

/// `Z_T` together with the checks that `(Z_T)_op = Z_{T_op}` and `‖Z_T‖ ≤ 1`.
#[derive(Clone, Debug)]
pub struct ZTransformCheck {
    pub relation: LinearRelation,
    /// `‖Q_{Z_T} Z_T‖`.
    pub norm: f64,
    /// Largest entrywise gap between `(Z_T)_op` and `Z_{T_op}`.
    pub route_gap: f64,
}

pub fn z_transform_checked(t: &LinearRelation) -> Result<ZTransformCheck> {
    let z = z_transform(t)?;
    let z_op = regular_part(&z);
    let via_op = regular_part(&z_transform(&regular_part(t).as_relation)?);
    Ok(ZTransformCheck {
        norm: z_op.norm(),
        route_gap: linalg::max_abs_diff(&z_op.full_matrix(), &via_op.full_matrix()),
        relation: z,
    })
}
