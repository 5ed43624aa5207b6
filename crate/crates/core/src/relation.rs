//! Linear relations (multivalued linear operators) between finite-dimensional
//! Hilbert spaces.
//!
//! A relation `T ⊆ H ⊕ K` is stored as a [`Subspace`] of dimension
//! `dim_h + dim_k`; the first `dim_h` coordinates are the `H` component.
//! Every relation is closed in finite dimensions.
//!
//! Pointwise sums and products are computed in coordinates of the graph bases:
//! pairs sharing the middle vector are found as a null space, which is the
//! intersection of the two embedded graphs in the triple space.

use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix, Vector, C64, DEFAULT_TOL};
use crate::subspace::{orthonormal_full, Subspace};

#[derive(Clone, Debug)]
pub struct LinearRelation {
    dim_h: usize,
    dim_k: usize,
    graph: Subspace,
}

/// An affine set `particular + direction`, such as `Tx` or `T⁻¹y`.
#[derive(Clone, Debug)]
pub struct CosetElement {
    pub particular: Vector,
    pub direction: Subspace,
}

impl CosetElement {
    pub fn contains(&self, v: &Vector, tol: f64) -> Result<bool> {
        self.direction.member(&(v - &self.particular), tol)
    }

    pub fn equals(&self, other: &CosetElement, tol: f64) -> Result<bool> {
        Ok(self.direction.equals(&other.direction, tol)? && self.contains(&other.particular, tol)?)
    }
}

impl LinearRelation {
    /// Wraps a graph subspace of `H ⊕ K`.
    pub fn from_graph_subspace(graph: Subspace, dim_h: usize, dim_k: usize) -> Result<Self> {
        if graph.ambient_dim() != dim_h + dim_k {
            return Err(Error::DimensionMismatch(format!(
                "graph ambient dimension {} but dim_h + dim_k = {}",
                graph.ambient_dim(),
                dim_h + dim_k
            )));
        }
        if dim_h == 0 || dim_k == 0 {
            return Err(Error::EmptyAmbient);
        }
        Ok(LinearRelation { dim_h, dim_k, graph })
    }

    /// Span of the given pairs `(h, k)`.
    pub fn from_generators(pairs: &[(Vector, Vector)], dim_h: usize, dim_k: usize, field: Field, tol: f64) -> Result<Self> {
        if dim_h == 0 || dim_k == 0 {
            return Err(Error::EmptyAmbient);
        }
        let mut m = Matrix::zeros(dim_h + dim_k, pairs.len());
        for (j, (h, k)) in pairs.iter().enumerate() {
            if h.len() != dim_h || k.len() != dim_k {
                return Err(Error::DimensionMismatch(format!(
                    "generator {j} has lengths ({}, {}), expected ({dim_h}, {dim_k})",
                    h.len(),
                    k.len()
                )));
            }
            m.view_mut((0, j), (dim_h, 1)).copy_from(h);
            m.view_mut((dim_h, j), (dim_k, 1)).copy_from(k);
        }
        let graph = Subspace::span_columns(&m, field, tol);
        LinearRelation::from_graph_subspace(graph, dim_h, dim_k)
    }

    /// Span of the columns of a stacked generator matrix `[h-block; k-block]`.
    pub fn from_generator_matrix(m: &Matrix, dim_h: usize, dim_k: usize, field: Field, tol: f64) -> Result<Self> {
        if m.nrows() != dim_h + dim_k {
            return Err(Error::DimensionMismatch(format!("generator matrix has {} rows, expected {}", m.nrows(), dim_h + dim_k)));
        }
        LinearRelation::from_graph_subspace(Subspace::span_columns(m, field, tol), dim_h, dim_k)
    }

    /// Graph of an everywhere-defined operator given by a `dim_k × dim_h` matrix.
    pub fn from_matrix(a: &Matrix, field: Field) -> Result<Self> {
        let (dim_k, dim_h) = a.shape();
        if dim_h == 0 || dim_k == 0 {
            return Err(Error::EmptyAmbient);
        }
        let stacked = linalg::vstack(&Matrix::identity(dim_h, dim_h), a);
        let basis = orthonormal_full(&stacked, field);
        Ok(LinearRelation {
            dim_h,
            dim_k,
            graph: Subspace::from_orthonormal(basis, field, DEFAULT_TOL),
        })
    }

    /// Graph of a real matrix given in row-major order.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim_k = rows.len();
        let dim_h = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != dim_h) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let a = Matrix::from_fn(dim_k, dim_h, |i, j| linalg::c(rows[i][j]));
        LinearRelation::from_matrix(&a, Field::Real)
    }

    /// `T = A_op ∔ ({0} × span(mul))`, where `A_op` sends the `i`-th column of
    /// `domain_basis` to the `i`-th column of `operator`.
    pub fn from_parts(domain_basis: &Matrix, operator: &Matrix, mul_generators: &Matrix, field: Field, tol: f64) -> Result<Self> {
        let dim_h = domain_basis.nrows();
        let dim_k = operator.nrows();
        if domain_basis.ncols() != operator.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{} domain vectors but {} operator columns",
                domain_basis.ncols(),
                operator.ncols()
            )));
        }
        if mul_generators.nrows() != dim_k {
            return Err(Error::DimensionMismatch(format!(
                "multivalued generators have length {}, expected {dim_k}",
                mul_generators.nrows()
            )));
        }
        let top = linalg::hstack(domain_basis, &Matrix::zeros(dim_h, mul_generators.ncols()));
        let bottom = linalg::hstack(operator, mul_generators);
        LinearRelation::from_generator_matrix(&linalg::vstack(&top, &bottom), dim_h, dim_k, field, tol)
    }

    /// `{0} × M` for a subspace `M ⊆ K`.
    pub fn pure_multivalued(dim_h: usize, mul: &Subspace) -> Result<Self> {
        let dim_k = mul.ambient_dim();
        let basis = linalg::vstack(&Matrix::zeros(dim_h, mul.rank()), mul.basis());
        LinearRelation::from_graph_subspace(Subspace::from_orthonormal(basis, mul.field(), mul.tol()), dim_h, dim_k)
    }

    /// `W × {0}`.
    pub fn zero_on(domain: &Subspace, dim_k: usize) -> Result<Self> {
        let dim_h = domain.ambient_dim();
        let basis = linalg::vstack(domain.basis(), &Matrix::zeros(dim_k, domain.rank()));
        LinearRelation::from_graph_subspace(Subspace::from_orthonormal(basis, domain.field(), domain.tol()), dim_h, dim_k)
    }

    pub fn identity(n: usize, field: Field) -> Self {
        LinearRelation::from_matrix(&Matrix::identity(n, n), field).expect("n > 0")
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn dim_k(&self) -> usize {
        self.dim_k
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn field(&self) -> Field {
        self.graph.field()
    }

    pub fn tol(&self) -> f64 {
        self.graph.tol()
    }

    pub fn with_tol(self, tol: f64) -> Self {
        LinearRelation {
            graph: self.graph.with_tol(tol),
            ..self
        }
    }

    pub fn is_square(&self) -> bool {
        self.dim_h == self.dim_k
    }

    /// `H`-block of the graph basis.
    pub fn h_block(&self) -> Matrix {
        self.graph.basis().rows(0, self.dim_h).into_owned()
    }

    /// `K`-block of the graph basis.
    pub fn k_block(&self) -> Matrix {
        self.graph.basis().rows(self.dim_h, self.dim_k).into_owned()
    }

    fn tol_with(&self, other: &LinearRelation) -> f64 {
        self.tol().max(other.tol())
    }

    fn field_with(&self, other: &LinearRelation) -> Field {
        self.field().join(other.field())
    }

    fn same_shape(&self, other: &LinearRelation) -> Result<()> {
        if self.dim_h != other.dim_h || self.dim_k != other.dim_k {
            return Err(Error::DimensionMismatch(format!(
                "relations {}->{} and {}->{}",
                self.dim_h, self.dim_k, other.dim_h, other.dim_k
            )));
        }
        Ok(())
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                dim_h: self.dim_h,
                dim_k: self.dim_k,
            });
        }
        Ok(())
    }

    pub fn domain(&self) -> Subspace {
        Subspace::span_unit_scaled(&self.h_block(), self.field(), self.tol())
    }

    pub fn range(&self) -> Subspace {
        Subspace::span_unit_scaled(&self.k_block(), self.field(), self.tol())
    }

    /// `N(T) = {h : (h, 0) ∈ T}`.
    pub fn kernel(&self) -> Subspace {
        let field = self.field();
        let null = linalg::null_space(&self.k_block(), field, self.tol(), 1.0);
        Subspace::from_orthonormal(orthonormal_full(&(self.h_block() * null), field), field, self.tol())
    }

    /// `M(T) = {k : (0, k) ∈ T}`.
    pub fn mulpart(&self) -> Subspace {
        let field = self.field();
        let null = linalg::null_space(&self.h_block(), field, self.tol(), 1.0);
        Subspace::from_orthonormal(orthonormal_full(&(self.k_block() * null), field), field, self.tol())
    }

    /// `(dim D, dim R, dim N, dim M)`.
    pub fn part_dims(&self) -> (usize, usize, usize, usize) {
        (self.domain().rank(), self.range().rank(), self.kernel().rank(), self.mulpart().rank())
    }

    /// Block swap `{(k, h) : (h, k) ∈ T}`.
    pub fn inverse(&self) -> LinearRelation {
        let basis = linalg::vstack(&self.k_block(), &self.h_block());
        LinearRelation {
            dim_h: self.dim_k,
            dim_k: self.dim_h,
            graph: Subspace::from_orthonormal(basis, self.field(), self.tol()),
        }
    }

    /// `T* = {(k', h') : ⟨h', h⟩ = ⟨k', k⟩ for all (h, k) ∈ T}`, the orthogonal
    /// complement in `K ⊕ H` of `{(-k, h) : (h, k) ∈ T}`.
    pub fn adjoint(&self) -> LinearRelation {
        let flipped = linalg::vstack(&(-self.k_block()), &self.h_block());
        let flipped = Subspace::from_orthonormal(flipped, self.field(), self.tol());
        LinearRelation {
            dim_h: self.dim_k,
            dim_k: self.dim_h,
            graph: flipped.complement(),
        }
    }

    /// Minkowski sum `T ∔ S = {(x + v, y + w)}`.
    pub fn minkowski_sum(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.same_shape(other)?;
        let graph = self.graph.sum_span(&other.graph)?;
        LinearRelation::from_graph_subspace(graph, self.dim_h, self.dim_k)
    }

    /// Pointwise sum `T + S = {(x, y + z) : (x, y) ∈ T, (x, z) ∈ S}`.
    pub fn sum(&self, other: &LinearRelation) -> Result<LinearRelation> {
        self.same_shape(other)?;
        let field = self.field_with(other);
        let tol = self.tol_with(other);
        let (ut, vt) = (self.h_block(), self.k_block());
        let (us, vs) = (other.h_block(), other.k_block());
        let coupling = linalg::hstack(&ut, &(-&us));
        let null = linalg::null_space(&coupling, field, tol, 1.0);
        let ct = null.rows(0, ut.ncols()).into_owned();
        let cs = null.rows(ut.ncols(), us.ncols()).into_owned();
        let gens = linalg::vstack(&(&ut * &ct), &(&vt * &ct + &vs * &cs));
        let graph = Subspace::span_unit_scaled(&gens, field, tol);
        LinearRelation::from_graph_subspace(graph, self.dim_h, self.dim_k)
    }

    /// Product `TS = {(x, y) : (x, z) ∈ S, (z, y) ∈ T}` ("`S` then `T`").
    pub fn compose(&self, s: &LinearRelation) -> Result<LinearRelation> {
        if s.dim_k != self.dim_h {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}->{} after {}->{}",
                self.dim_h, self.dim_k, s.dim_h, s.dim_k
            )));
        }
        let field = self.field_with(s);
        let tol = self.tol_with(s);
        let (us, vs) = (s.h_block(), s.k_block());
        let (ut, vt) = (self.h_block(), self.k_block());
        let coupling = linalg::hstack(&vs, &(-&ut));
        let null = linalg::null_space(&coupling, field, tol, 1.0);
        let cs = null.rows(0, us.ncols()).into_owned();
        let ct = null.rows(us.ncols(), ut.ncols()).into_owned();
        let gens = linalg::vstack(&(&us * &cs), &(&vt * &ct));
        let graph = Subspace::span_unit_scaled(&gens, field, tol);
        LinearRelation::from_graph_subspace(graph, s.dim_h, self.dim_k)
    }

    /// `T × S` acting on `H1 ⊕ H2` with values in `K1 ⊕ K2`.
    pub fn cartesian_product(&self, s: &LinearRelation) -> LinearRelation {
        let (h1, k1, h2, k2) = (self.dim_h, self.dim_k, s.dim_h, s.dim_k);
        let (r1, r2) = (self.graph.rank(), s.graph.rank());
        let mut basis = Matrix::zeros(h1 + h2 + k1 + k2, r1 + r2);
        basis.view_mut((0, 0), (h1, r1)).copy_from(&self.h_block());
        basis.view_mut((h1 + h2, 0), (k1, r1)).copy_from(&self.k_block());
        basis.view_mut((h1, r1), (h2, r2)).copy_from(&s.h_block());
        basis.view_mut((h1 + h2 + k1, r1), (k2, r2)).copy_from(&s.k_block());
        LinearRelation {
            dim_h: h1 + h2,
            dim_k: k1 + k2,
            graph: Subspace::from_orthonormal(basis, self.field_with(s), self.tol_with(s)),
        }
    }

    /// Applies a linear map to the `K` component of every pair.
    pub(crate) fn map_values(&self, m: &Matrix, field: Field) -> LinearRelation {
        let gens = linalg::vstack(&self.h_block(), &(m * self.k_block()));
        LinearRelation {
            dim_h: self.dim_h,
            dim_k: m.nrows(),
            graph: Subspace::span_unit_scaled(&gens, field, self.tol()),
        }
    }

    /// `cT = {(x, c y)}` for `c ≠ 0`; `0·T = D(T) × M(T)`, so that
    /// `M(cT) = M(T)` for every `c`.
    pub fn scalar_mul(&self, c: C64) -> LinearRelation {
        let field = self.field().join(Field::of_scalar(c));
        if c.norm() == 0.0 {
            let d = self.domain();
            let m = self.mulpart();
            let top = linalg::hstack(d.basis(), &Matrix::zeros(self.dim_h, m.rank()));
            let bottom = linalg::hstack(&Matrix::zeros(self.dim_k, d.rank()), m.basis());
            return LinearRelation {
                dim_h: self.dim_h,
                dim_k: self.dim_k,
                graph: Subspace::from_orthonormal(linalg::vstack(&top, &bottom), field, self.tol()),
            };
        }
        self.map_values(&(Matrix::identity(self.dim_k, self.dim_k) * c), field)
    }

    /// `T − λ = {(x, y − λx) : (x, y) ∈ T}`.
    pub fn shift(&self, lambda: C64) -> Result<LinearRelation> {
        self.require_square()?;
        let field = self.field().join(Field::of_scalar(lambda));
        let u = self.h_block();
        let gens = linalg::vstack(&u, &(self.k_block() - &u * lambda));
        Ok(LinearRelation {
            dim_h: self.dim_h,
            dim_k: self.dim_k,
            graph: Subspace::span_unit_scaled(&gens, field, self.tol()),
        })
    }

    /// `T|_W`, the pairs of `T` whose first component lies in `W`.
    pub fn restrict(&self, w: &Subspace) -> Result<LinearRelation> {
        if w.ambient_dim() != self.dim_h {
            return Err(Error::DimensionMismatch(format!(
                "restriction subspace in dimension {}, relation domain space {}",
                w.ambient_dim(),
                self.dim_h
            )));
        }
        let field = self.field().join(w.field());
        let perp = w.complement();
        let null = linalg::null_space(&(perp.basis().adjoint() * self.h_block()), field, self.tol(), 1.0);
        let basis = self.graph.basis() * null;
        LinearRelation::from_graph_subspace(
            Subspace::from_orthonormal(orthonormal_full(&basis, field), field, self.tol()),
            self.dim_h,
            self.dim_k,
        )
    }

    /// `T ∩ (W × W)` re-expressed as a relation on the Hilbert space `W`
    /// through an orthonormal basis of `W`.
    pub fn compress_to(&self, w: &Subspace) -> Result<LinearRelation> {
        self.require_square()?;
        if w.ambient_dim() != self.dim_h {
            return Err(Error::DimensionMismatch("compression subspace".into()));
        }
        if w.is_zero() {
            return Err(Error::EmptyAmbient);
        }
        let ww = w.clone();
        let in_ww = {
            let blocks = Subspace::from_orthonormal(block_diag(w.basis(), ww.basis()), w.field(), self.tol());
            self.graph.intersect(&blocks)?
        };
        let q = w.basis();
        let coords = linalg::vstack(
            &(q.adjoint() * in_ww.basis().rows(0, self.dim_h)),
            &(q.adjoint() * in_ww.basis().rows(self.dim_h, self.dim_k)),
        );
        let field = self.field().join(w.field());
        LinearRelation::from_graph_subspace(
            Subspace::from_orthonormal(orthonormal_full(&coords, field), field, self.tol()),
            w.rank(),
            w.rank(),
        )
    }

    /// Graph equality up to a largest principal angle below `tol`.
    pub fn equals(&self, other: &LinearRelation, tol: f64) -> Result<bool> {
        self.same_shape(other)?;
        self.graph.equals(&other.graph, tol)
    }

    /// Largest principal angle between the two graphs.
    pub fn graph_angle(&self, other: &LinearRelation) -> Result<f64> {
        self.same_shape(other)?;
        self.graph.max_principal_angle(&other.graph)
    }

    pub fn contains(&self, other: &LinearRelation, tol: f64) -> Result<bool> {
        self.same_shape(other)?;
        self.graph.contains(&other.graph, tol)
    }

    pub fn contains_pair(&self, h: &Vector, k: &Vector, tol: f64) -> Result<bool> {
        if h.len() != self.dim_h || k.len() != self.dim_k {
            return Err(Error::DimensionMismatch("pair lengths".into()));
        }
        let mut v = Vector::zeros(self.dim_h + self.dim_k);
        v.rows_mut(0, self.dim_h).copy_from(h);
        v.rows_mut(self.dim_h, self.dim_k).copy_from(k);
        self.graph.member(&v, tol)
    }

    /// `Tx = y₀ + M(T)` with `y₀` the element of least norm.
    pub fn image_of(&self, x: &Vector) -> Result<CosetElement> {
        self.image_map().apply(x)
    }

    /// `T⁻¹y = x₀ + N(T)` with `x₀` the element of least norm.
    pub fn preimage_of(&self, y: &Vector) -> Result<CosetElement> {
        self.preimage_map().apply(y)
    }

    /// Precomputed form of [`image_of`](Self::image_of) for repeated use.
    pub fn image_map(&self) -> ImageMap {
        ImageMap {
            pinv: linalg::pinv(&self.h_block(), self.field(), self.tol(), 1.0),
            h_block: self.h_block(),
            k_block: self.k_block(),
            direction: self.mulpart(),
            check_tol: self.check_tol(),
            inverted: false,
        }
    }

    /// Precomputed form of [`preimage_of`](Self::preimage_of) for repeated use.
    pub fn preimage_map(&self) -> ImageMap {
        ImageMap {
            inverted: true,
            ..self.inverse().image_map()
        }
    }

    pub fn is_operator(&self) -> bool {
        self.mulpart().is_zero()
    }

    pub fn is_everywhere_defined(&self) -> bool {
        self.domain().is_full()
    }

    /// `T ⊆ T*`.
    pub fn is_symmetric(&self) -> Result<bool> {
        self.require_square()?;
        self.adjoint().contains(self, self.check_tol())
    }

    /// `T = T*`.
    pub fn is_selfadjoint(&self) -> Result<bool> {
        self.require_square()?;
        self.equals(&self.adjoint(), self.check_tol())
    }

    /// `Re⟨k, h⟩ ≥ 0` on `T`, decided by the smallest eigenvalue of the
    /// Hermitian part of the form `c ↦ ⟨Vc, Uc⟩` in graph coordinates.
    pub fn is_nonnegative(&self) -> Result<bool> {
        self.require_square()?;
        let form = self.h_block().adjoint() * self.k_block();
        let scale = linalg::norm2(&form).max(1.0);
        let (vals, _) = linalg::hermitian_eigen(&form, self.field());
        Ok(vals.first().is_none_or(|&v| v >= -self.check_tol() * scale))
    }

    /// Tolerance for structural predicates; looser than the rank tolerance
    /// since composite relations accumulate rounding error.
    pub(crate) fn check_tol(&self) -> f64 {
        (self.tol() * 100.0).max(1e-8)
    }
}

/// `x ↦ Tx` with the pseudoinverse of the `H`-block factored once.
#[derive(Clone, Debug)]
pub struct ImageMap {
    pinv: Matrix,
    h_block: Matrix,
    k_block: Matrix,
    direction: Subspace,
    check_tol: f64,
    inverted: bool,
}

impl ImageMap {
    pub fn apply(&self, x: &Vector) -> Result<CosetElement> {
        if x.len() != self.h_block.nrows() {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} for a space of dimension {}",
                x.len(),
                self.h_block.nrows()
            )));
        }
        let coeffs = &self.pinv * x;
        let residual = (&self.h_block * &coeffs - x).norm();
        if residual > self.check_tol * x.norm().max(1.0) {
            return Err(if self.inverted {
                Error::NotInRange { residual }
            } else {
                Error::NotInDomain { residual }
            });
        }
        let particular = self.direction.reject(&(&self.k_block * coeffs))?;
        Ok(CosetElement {
            particular,
            direction: self.direction.clone(),
        })
    }
}

fn block_diag(a: &Matrix, b: &Matrix) -> Matrix {
    let mut m = Matrix::zeros(a.nrows() + b.nrows(), a.ncols() + b.ncols());
    m.view_mut((0, 0), a.shape()).copy_from(a);
    m.view_mut((a.nrows(), a.ncols()), b.shape()).copy_from(b);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::real_vector;

    fn rv(xs: &[f64]) -> Vector {
        real_vector(xs)
    }

    fn rel(pairs: &[(&[f64], &[f64])], dh: usize, dk: usize) -> LinearRelation {
        let p: Vec<(Vector, Vector)> = pairs.iter().map(|(h, k)| (rv(h), rv(k))).collect();
        LinearRelation::from_generators(&p, dh, dk, Field::Real, DEFAULT_TOL).unwrap()
    }

    fn zero_times_k(dh: usize, dk: usize) -> LinearRelation {
        LinearRelation::pure_multivalued(dh, &Subspace::full(dk, Field::Real)).unwrap()
    }

    #[test]
    fn generators_read_off_a_matrix() {
        let t = rel(&[(&[1.0, 0.0], &[0.0, 2.0]), (&[0.0, 1.0], &[0.0, 0.0])], 2, 2);
        let g = LinearRelation::from_real_rows(&[&[0.0, 0.0], &[2.0, 0.0]]).unwrap();
        assert!(t.equals(&g, 1e-12).unwrap());
    }

    #[test]
    fn empty_generators_give_trivial_relation() {
        let t = rel(&[], 2, 3);
        assert_eq!(t.graph().rank(), 0);
        assert!(t.domain().is_zero() && t.kernel().is_zero() && t.range().is_zero() && t.mulpart().is_zero());
    }

    #[test]
    fn zero_cross_k() {
        let t = rel(&[(&[0.0], &[1.0])], 1, 1);
        assert!(t.domain().is_zero());
        assert!(t.mulpart().is_full());
        assert!(!t.is_operator());
        assert!(t.equals(&zero_times_k(1, 1), 1e-12).unwrap());
    }

    #[test]
    fn generator_dimension_errors() {
        let p = vec![(rv(&[1.0]), rv(&[1.0, 2.0]))];
        assert!(matches!(
            LinearRelation::from_generators(&p, 2, 2, Field::Real, DEFAULT_TOL),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn identity_parts() {
        let t = LinearRelation::identity(2, Field::Real);
        assert!(t.domain().is_full() && t.range().is_full());
        assert!(t.kernel().is_zero() && t.mulpart().is_zero());
    }

    #[test]
    fn from_parts_with_multivalued_direction() {
        let q = Matrix::from_column_slice(1, 1, &[linalg::c(1.0)]);
        let op = Matrix::from_column_slice(2, 1, &[linalg::c(2.0), linalg::c(0.0)]);
        let mul = Matrix::from_column_slice(2, 1, &[linalg::c(0.0), linalg::c(1.0)]);
        let t = LinearRelation::from_parts(&q, &op, &mul, Field::Real, DEFAULT_TOL).unwrap();
        assert_eq!((t.dim_h(), t.dim_k()), (1, 2));
        assert!(t.mulpart().equals(&Subspace::coordinate(2, &[1], Field::Real), 1e-12).unwrap());
    }

    #[test]
    fn parts_of_singular_diagonal() {
        let t = LinearRelation::from_real_rows(&[&[2.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(t.kernel().equals(&Subspace::coordinate(2, &[1], Field::Real), 1e-12).unwrap());
        assert!(t.mulpart().is_zero());
        assert!(t.range().equals(&Subspace::coordinate(2, &[0], Field::Real), 1e-12).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let t = LinearRelation::from_real_rows(&[&[2.0, 0.0], &[0.0, 2.0]]).unwrap();
        let half = LinearRelation::from_real_rows(&[&[0.5, 0.0], &[0.0, 0.5]]).unwrap();
        assert!(t.inverse().equals(&half, 1e-12).unwrap());
        let z = zero_times_k(1, 2);
        let zi = z.inverse();
        assert!(zi.domain().is_full());
        assert!(zi.range().is_zero());
        assert!(zi.mulpart().is_zero());
    }

    #[test]
    fn adjoint_examples() {
        let a = Matrix::from_row_slice(2, 3, &[
            C64::new(1.0, 1.0), linalg::c(2.0), C64::new(0.0, -1.0),
            linalg::c(0.5), C64::new(3.0, 2.0), linalg::c(-1.0),
        ]);
        let t = LinearRelation::from_matrix(&a, Field::Complex).unwrap();
        let expected = LinearRelation::from_matrix(&a.adjoint(), Field::Complex).unwrap();
        assert!(t.adjoint().equals(&expected, 1e-12).unwrap());

        let z = zero_times_k(2, 3);
        let za = z.adjoint();
        assert_eq!((za.dim_h(), za.dim_k()), (3, 2));
        assert!(za.domain().is_zero());
        assert!(za.mulpart().is_full());
    }

    #[test]
    fn sums() {
        let a = LinearRelation::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let b = LinearRelation::from_real_rows(&[&[0.0, -1.0], &[5.0, 1.0]]).unwrap();
        let ab = LinearRelation::from_real_rows(&[&[1.0, 1.0], &[8.0, 5.0]]).unwrap();
        assert!(a.sum(&b).unwrap().equals(&ab, 1e-12).unwrap());

        let m = Subspace::coordinate(2, &[1], Field::Real);
        let plus = a.minkowski_sum(&LinearRelation::pure_multivalued(2, &m).unwrap()).unwrap();
        assert!(plus.mulpart().equals(&m, 1e-12).unwrap());
        assert!(plus.domain().is_full());
    }

    #[test]
    fn compositions() {
        let a = LinearRelation::from_real_rows(&[&[1.0, 2.0, 0.0], &[3.0, 4.0, 1.0]]).unwrap();
        let b = LinearRelation::from_real_rows(&[&[0.0, -1.0], &[5.0, 1.0], &[1.0, 1.0]]).unwrap();
        let ab = LinearRelation::from_real_rows(&[&[10.0, 1.0], &[21.0, 2.0]]).unwrap();
        assert!(a.compose(&b).unwrap().equals(&ab, 1e-10).unwrap());
        let i = LinearRelation::identity(3, Field::Real);
        assert!(a.compose(&i).unwrap().equals(&a, 1e-12).unwrap());
        assert!(a.compose(&a).is_err());
    }

    #[test]
    fn products() {
        let a = LinearRelation::from_real_rows(&[&[2.0]]).unwrap();
        let b = LinearRelation::from_real_rows(&[&[1.0, 1.0]]).unwrap();
        let p = a.cartesian_product(&b);
        let expected = LinearRelation::from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]).unwrap();
        assert!(p.equals(&expected, 1e-12).unwrap());
        assert_eq!(p.graph().rank(), a.graph().rank() + b.graph().rank());
    }

    #[test]
    fn shifts_and_scaling() {
        let i = LinearRelation::identity(2, Field::Real);
        let zero = LinearRelation::from_real_rows(&[&[0.0, 0.0], &[0.0, 0.0]]).unwrap();
        assert!(i.shift(linalg::c(1.0)).unwrap().equals(&zero, 1e-12).unwrap());
        let t = rel(&[(&[1.0, 0.0], &[1.0, 1.0]), (&[0.0, 0.0], &[0.0, 1.0])], 2, 2);
        let z = t.scalar_mul(linalg::c(0.0));
        assert!(z.range().equals(&t.mulpart(), 1e-12).unwrap());
        assert!(t.shift(linalg::c(3.0)).unwrap().domain().equals(&t.domain(), 1e-12).unwrap());
        assert!(matches!(
            rel(&[], 1, 2).shift(linalg::c(1.0)),
            Err(Error::NonSquare { .. })
        ));
    }

    #[test]
    fn restrictions() {
        let t = rel(&[(&[1.0, 0.0], &[1.0, 1.0]), (&[0.0, 0.0], &[0.0, 1.0]), (&[0.0, 1.0], &[2.0, 0.0])], 2, 2);
        assert!(t.restrict(&Subspace::full(2, Field::Real)).unwrap().equals(&t, 1e-12).unwrap());
        let r0 = t.restrict(&Subspace::zero(2, Field::Real)).unwrap();
        let expected = LinearRelation::pure_multivalued(2, &t.mulpart()).unwrap();
        assert!(r0.equals(&expected, 1e-12).unwrap());
    }

    #[test]
    fn images() {
        let a = LinearRelation::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]).unwrap();
        let img = a.image_of(&rv(&[1.0, 1.0])).unwrap();
        assert!((img.particular - rv(&[3.0, 7.0])).norm() < 1e-12);
        assert!(img.direction.is_zero());

        let z = zero_times_k(1, 2);
        let img = z.image_of(&rv(&[0.0])).unwrap();
        assert!(img.direction.is_full());
        assert!(img.particular.norm() < 1e-14);

        assert!(matches!(z.image_of(&rv(&[1.0])), Err(Error::NotInDomain { .. })));
    }

    #[test]
    fn predicates() {
        let h = LinearRelation::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        assert!(h.is_selfadjoint().unwrap());
        assert!(h.is_symmetric().unwrap());
        assert!(h.is_nonnegative().unwrap());
        let n = LinearRelation::from_real_rows(&[&[-1.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(!n.is_nonnegative().unwrap());
        let nh = LinearRelation::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(!nh.is_selfadjoint().unwrap());
        assert!(!zero_times_k(2, 2).is_operator());
        // {0} × K is self-adjoint on a square space: its adjoint is {0} × H.
        assert!(zero_times_k(2, 2).is_selfadjoint().unwrap());
    }

    #[test]
    fn compress_to_subspace() {
        let t = LinearRelation::from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 3.0, 0.0], &[0.0, 0.0, 0.0]]).unwrap();
        let w = Subspace::coordinate(3, &[0, 1], Field::Real);
        let c = t.compress_to(&w).unwrap();
        assert_eq!(c.dim_h(), 2);
        let expected = LinearRelation::from_real_rows(&[&[2.0, 0.0], &[0.0, 3.0]]).unwrap();
        assert!(c.equals(&expected, 1e-12).unwrap());
    }
}
