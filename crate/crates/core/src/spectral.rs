//! Point spectrum and resolvent membership for relations in a single space,
//! and the checks relating the spectrum of `T*T` to that of its part on
//! `N(T)⊥`.
//!
//! For `T ⊆ H ⊕ H` with `r = dim T`, `λ` is an eigenvalue exactly when
//! `V c = λ U c` has a nonzero solution, where `[U; V]` is a graph basis.
//! Writing `T = T_op ∔ ({0} × M)` reduces this to the pencil
//! `W* T_op Q a = λ W* Q a` with `Q` a basis of `D(T)` and `W` a basis of `M⊥`.
//! Multivalued directions are eigenvalues at infinity and are reported apart
//! from the finite spectrum.

use crate::decomposition::{self, regular_part};
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix, C64};
use crate::relation::LinearRelation;

/// Eigenvalues with modulus at most `ZERO_BAND * (1 + spectral radius)` count as zero.
pub const ZERO_BAND: f64 = 1e-8;
/// Multiset matching threshold, relative to `1 + spectral radius`.
pub const MATCH_TOL: f64 = 1e-6;
/// Eigenvalues closer than this (relative to `1 + spectral radius`) are grouped.
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: C64,
    pub multiplicity: usize,
}

/// Outcome of comparing two nonzero spectra.
#[derive(Clone, Debug)]
pub struct IdentityVerdict {
    pub holds: bool,
    /// Largest distance in the optimal pairing (`+∞` when counts differ).
    pub max_distance: f64,
    pub threshold: f64,
    /// Nonzero spectrum of the compared (restricted) relation.
    pub restricted: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    /// Finite eigenvalues, sorted lexicographically by (real, imaginary).
    pub eigenvalues: Vec<Eigenvalue>,
    /// Every `λ` has `N(T − λ) ≠ {0}`.
    pub every_point_eigenvalue: bool,
    /// `R(T − λ) ≠ H` for every `λ`, so the resolvent set is empty.
    pub resolvent_empty: bool,
    /// `dim M(T)`: directions reported as eigenvalues at infinity.
    pub multivalued_dim: usize,
    /// Smallest modulus over the nonzero finite spectrum (`+∞` if none).
    pub gamma_spectral: f64,
    pub identity: Option<IdentityVerdict>,
}

impl SpectrumReport {
    /// Eigenvalues repeated according to multiplicity.
    pub fn values(&self) -> Vec<C64> {
        self.eigenvalues
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity))
            .collect()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|e| e.value.norm()).fold(0.0, f64::max)
    }

    /// Nonzero eigenvalues, with the zero band relative to `radius`.
    pub fn nonzero_values(&self, radius: f64) -> Vec<C64> {
        let band = ZERO_BAND * (1.0 + radius);
        self.values().into_iter().filter(|v| v.norm() > band).collect()
    }
}

fn lex(a: &C64, b: &C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn cluster(mut values: Vec<C64>) -> Vec<Eigenvalue> {
    values.sort_by(lex);
    let radius = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tol = CLUSTER_TOL * (1.0 + radius);
    let mut groups: Vec<(Vec<C64>, C64)> = Vec::new();
    for v in values {
        match groups.iter_mut().find(|(_, center)| (center - v).norm() <= tol) {
            Some((members, center)) => {
                members.push(v);
                *center = members.iter().sum::<C64>() / linalg::c(members.len() as f64);
            }
            None => groups.push((vec![v], v)),
        }
    }
    let mut out: Vec<Eigenvalue> = groups
        .into_iter()
        .map(|(members, center)| Eigenvalue {
            value: center,
            multiplicity: members.len(),
        })
        .collect();
    out.sort_by(|a, b| lex(&a.value, &b.value));
    out
}

/// Finite eigenvalues of `A a = λ B a` for a `p × d` pencil with `p ≥ d`;
/// `None` when every `λ` is an eigenvalue.
fn pencil_eigenvalues(a: &Matrix, b: &Matrix, field: Field, tol: f64) -> Option<Vec<C64>> {
    let (p, d) = a.shape();
    if d == 0 {
        return Some(Vec::new());
    }
    if p < d {
        return None;
    }
    let sb = linalg::svd(b, field);
    let rank_b = linalg::numerical_rank(&sb.s, tol, 1.0);
    if rank_b == d {
        let ub = sb.u.columns(0, d).into_owned();
        let sigma_inv = Matrix::from_diagonal(&nalgebra::DVector::from_iterator(d, sb.s.iter().take(d).map(|s| linalg::c(1.0 / s))));
        if p == d {
            // B⁻¹A = V Σ⁻¹ U* A.
            let m = &sb.v * sigma_inv * ub.adjoint() * a;
            return Some(linalg::eigenvalues(&m));
        }
        // Eigenvectors must satisfy A a ∈ R(B).
        let residual = a - &ub * (ub.adjoint() * a);
        let scale = linalg::norm2(a).max(1.0);
        let null = linalg::null_space(&residual, field, tol, scale);
        if null.ncols() == 0 {
            return Some(Vec::new());
        }
        let reduced_a = sigma_inv * ub.adjoint() * a * &null;
        let reduced_b = sb.v.adjoint() * &null;
        return pencil_eigenvalues(&reduced_a, &reduced_b, Field::Complex, tol);
    }
    // B is singular: shift and invert, A a = λ B a ⇔ B a = ν (A − μB) a, λ = μ + 1/ν.
    let scale = linalg::norm2(a).max(linalg::norm2(b)).max(1.0);
    for mu in [C64::new(0.5772156649, 0.3713906763), C64::new(-0.7236067977, 0.1414213562)] {
        let mu = mu * (1.0 + linalg::norm2(a));
        let shifted = a - b * mu;
        let s = linalg::singular_values(&shifted, Field::Complex);
        if linalg::numerical_rank(&s, tol, scale) < d {
            continue;
        }
        let nus = pencil_eigenvalues(b, &shifted, Field::Complex, tol)?;
        let nu_max = nus.iter().map(|v| v.norm()).fold(0.0, f64::max);
        return Some(
            nus.into_iter()
                .filter(|nu| nu.norm() > 1e-10 * (1.0 + nu_max))
                .map(|nu| mu + linalg::c(1.0) / nu)
                .collect(),
        );
    }
    None
}

fn require_square(t: &LinearRelation) -> Result<()> {
    if !t.is_square() {
        return Err(Error::NonSquare {
            dim_h: t.dim_h(),
            dim_k: t.dim_k(),
        });
    }
    Ok(())
}

pub fn point_spectrum(t: &LinearRelation) -> Result<SpectrumReport> {
    require_square(t)?;
    let n = t.dim_h();
    let r = t.graph().rank();
    let mul = t.mulpart();
    let mut report = SpectrumReport {
        eigenvalues: Vec::new(),
        every_point_eigenvalue: r > n,
        resolvent_empty: r != n,
        multivalued_dim: mul.rank(),
        gamma_spectral: f64::INFINITY,
        identity: None,
    };
    if r > n {
        return Ok(report);
    }
    let op = regular_part(t);
    let w = mul.complement();
    let pencil_a = w.basis().adjoint() * &op.matrix;
    let pencil_b = w.basis().adjoint() * &op.domain_basis;
    match pencil_eigenvalues(&pencil_a, &pencil_b, t.field(), t.tol()) {
        None => {
            report.every_point_eigenvalue = true;
            report.resolvent_empty = true;
        }
        Some(values) => {
            let values: Vec<C64> = match t.field() {
                // Real relations: drop rounding noise in the imaginary parts of real eigenvalues.
                Field::Real => values
                    .into_iter()
                    .map(|v| if v.im.abs() <= 1e-12 * (1.0 + v.norm()) { linalg::c(v.re) } else { v })
                    .collect(),
                Field::Complex => values,
            };
            report.eigenvalues = cluster(values);
            let radius = report.spectral_radius();
            report.gamma_spectral = report
                .nonzero_values(radius)
                .iter()
                .map(|v| v.norm())
                .fold(f64::INFINITY, f64::min);
        }
    }
    Ok(report)
}

/// `λ ∈ ρ(T)`: `(T − λ)⁻¹` is single-valued and everywhere defined.
pub fn resolvent_member(t: &LinearRelation, lambda: C64) -> Result<bool> {
    require_square(t)?;
    let shifted = t.shift(lambda)?;
    Ok(shifted.kernel().is_zero() && shifted.range().is_full())
}

/// Greedy nearest-pair matching of two multisets after lexicographic sort.
pub fn match_multisets(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut a = a.to_vec();
    a.sort_by(lex);
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in &a {
        let (j, dist) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .expect("equal lengths");
        used[j] = true;
        worst = worst.max(dist);
    }
    worst
}

/// `T*T` restricted to `N(T)⊥`, as a relation on that space.
pub fn restricted_gram(t: &LinearRelation) -> Result<Option<LinearRelation>> {
    let gram = t.adjoint().compose(t)?;
    let perp = t.kernel().complement();
    if perp.is_zero() {
        return Ok(None);
    }
    gram.compress_to(&perp).map(Some)
}

/// Compares the nonzero spectra of `T*T` and of its part on `N(T)⊥`.
///
/// The returned report describes `T*T`; its `identity` field carries the verdict.
pub fn verify_spectral_identity(t: &LinearRelation) -> Result<SpectrumReport> {
    let gram = t.adjoint().compose(t)?;
    let mut report = point_spectrum(&gram)?;
    let radius = report.spectral_radius();
    let full = report.nonzero_values(radius);
    let restricted = match restricted_gram(t)? {
        Some(r) => point_spectrum(&r)?.nonzero_values(radius),
        None => Vec::new(),
    };
    let max_distance = if full.is_empty() && restricted.is_empty() {
        0.0
    } else {
        match_multisets(&full, &restricted)
    };
    let threshold = MATCH_TOL * (1.0 + radius);
    report.identity = Some(IdentityVerdict {
        holds: max_distance <= threshold,
        max_distance,
        threshold,
        restricted,
    });
    Ok(report)
}

/// `inf{|λ| : λ ∈ σ(S) \ {0}}` for self-adjoint `S`.
pub fn gamma_via_spectrum(s: &LinearRelation) -> Result<f64> {
    require_square(s)?;
    if !s.is_selfadjoint()? {
        return Err(Error::NotSelfAdjoint);
    }
    Ok(point_spectrum(s)?.gamma_spectral)
}

/// `γ(T*T)`, `γ(T*T|_{N(T)⊥})` and the spectral value of the former.
pub fn gram_gammas(t: &LinearRelation) -> Result<(f64, f64, f64)> {
    let gram = t.adjoint().compose(t)?;
    let restricted = match restricted_gram(t)? {
        Some(r) => decomposition::gamma(&r),
        None => f64::INFINITY,
    };
    Ok((decomposition::gamma(&gram), restricted, gamma_via_spectrum(&gram)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::subspace::Subspace;

    fn rows(r: &[&[f64]]) -> LinearRelation {
        LinearRelation::from_real_rows(r).unwrap()
    }

    fn values(t: &LinearRelation) -> Vec<C64> {
        point_spectrum(t).unwrap().values()
    }

    #[test]
    fn diagonal_spectrum() {
        let v = values(&rows(&[&[3.0, 0.0], &[0.0, 1.0]]));
        assert_eq!(v.len(), 2);
        assert!((v[0] - c(1.0)).norm() < 1e-12);
        assert!((v[1] - c(3.0)).norm() < 1e-12);
    }

    #[test]
    fn pure_multivalued_has_no_finite_spectrum() {
        let t = LinearRelation::pure_multivalued(1, &Subspace::full(1, Field::Real)).unwrap();
        let rep = point_spectrum(&t).unwrap();
        assert!(rep.eigenvalues.is_empty());
        assert!(!rep.resolvent_empty);
        assert_eq!(rep.multivalued_dim, 1);
        // (T − λ)⁻¹ is the zero map on K for every λ.
        for lambda in [c(0.0), c(2.5), C64::new(-1.0, 3.0)] {
            assert!(resolvent_member(&t, lambda).unwrap());
            let inv = t.shift(lambda).unwrap().inverse();
            assert!(inv.is_operator() && inv.is_everywhere_defined());
            assert!(inv.range().is_zero());
        }
    }

    #[test]
    fn nilpotent_spectrum() {
        let rep = point_spectrum(&rows(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        assert_eq!(rep.eigenvalues.len(), 1);
        assert_eq!(rep.eigenvalues[0].multiplicity, 2);
        assert!(rep.eigenvalues[0].value.norm() < 1e-7);
    }

    #[test]
    fn resolvent_examples() {
        let i = LinearRelation::identity(2, Field::Real);
        assert!(resolvent_member(&i, c(2.0)).unwrap());
        assert!(!resolvent_member(&i, c(1.0)).unwrap());
        assert!(resolvent_member(&rows(&[&[1.0, 2.0]]), c(0.0)).is_err());
    }

    #[test]
    fn spectrum_with_multivalued_part() {
        // T = graph(2) on e1 plus {0} × span{e2}: D = span{e1}, M = span{e2}.
        let q = Matrix::from_column_slice(2, 1, &[c(1.0), c(0.0)]);
        let op = Matrix::from_column_slice(2, 1, &[c(2.0), c(0.0)]);
        let mul = Matrix::from_column_slice(2, 1, &[c(0.0), c(1.0)]);
        let t = LinearRelation::from_parts(&q, &op, &mul, Field::Real, 1e-10).unwrap();
        let rep = point_spectrum(&t).unwrap();
        assert_eq!(rep.values().len(), 1);
        assert!((rep.values()[0] - c(2.0)).norm() < 1e-12);
        assert!(!rep.resolvent_empty);
        assert!(!resolvent_member(&t, c(2.0)).unwrap());
        assert!(resolvent_member(&t, c(1.0)).unwrap());
    }

    #[test]
    fn singular_pencil_branch() {
        // D ∩ M ≠ {0}: pairs (e1, e2), (0, e1). N(T − λ) ∋ x = e1 needs
        // λe1 − e2 ∈ span{e1}, impossible, so no finite eigenvalue from e1.
        let p = vec![
            (crate::subspace::real_vector(&[1.0, 0.0]), crate::subspace::real_vector(&[0.0, 1.0])),
            (crate::subspace::real_vector(&[0.0, 0.0]), crate::subspace::real_vector(&[1.0, 0.0])),
        ];
        let t = LinearRelation::from_generators(&p, 2, 2, Field::Real, 1e-10).unwrap();
        let rep = point_spectrum(&t).unwrap();
        assert!(rep.eigenvalues.is_empty());
        for lambda in [c(0.0), c(1.0), c(-3.0)] {
            assert!(t.shift(lambda).unwrap().kernel().is_zero());
        }
    }

    #[test]
    fn whole_space_relation_is_degenerate() {
        let t = LinearRelation::from_graph_subspace(Subspace::full(4, Field::Real), 2, 2).unwrap();
        let rep = point_spectrum(&t).unwrap();
        assert!(rep.every_point_eigenvalue && rep.resolvent_empty);
    }

    #[test]
    fn spectral_identity_for_nilpotent() {
        // T*T = diag(0, 1); restricted to N(T)⊥ = span{e2} it is [1].
        let rep = verify_spectral_identity(&rows(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap();
        let all = rep.values();
        assert_eq!(all.len(), 2);
        let id = rep.identity.unwrap();
        assert!(id.holds);
        assert_eq!(id.restricted.len(), 1);
        assert!((id.restricted[0] - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn spectral_identity_for_identity() {
        let rep = verify_spectral_identity(&LinearRelation::identity(3, Field::Real)).unwrap();
        assert_eq!(rep.values().len(), 3);
        assert!(rep.identity.unwrap().holds);
    }

    #[test]
    fn gamma_via_spectrum_examples() {
        assert!((gamma_via_spectrum(&rows(&[&[0.0, 0.0, 0.0], &[0.0, 2.0, 0.0], &[0.0, 0.0, 5.0]])).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(gamma_via_spectrum(&rows(&[&[0.0]])).unwrap(), f64::INFINITY);
        assert_eq!(gamma_via_spectrum(&rows(&[&[0.0, 1.0], &[0.0, 0.0]])).unwrap_err(), Error::NotSelfAdjoint);
    }

    #[test]
    fn multiset_matching() {
        assert_eq!(match_multisets(&[c(1.0)], &[c(1.0), c(2.0)]), f64::INFINITY);
        assert!((match_multisets(&[c(1.0), c(2.0)], &[c(2.0), c(1.1)]) - 0.1).abs() < 1e-12);
    }
}
