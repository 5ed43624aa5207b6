//! Hyers-Ulam stability: certification, a definition-level sampling oracle,
//! the battery of equivalent characterizations, and stability of sums,
//! products and diagonally dominated block relations.
//!
//! In finite dimensions every range is closed, so every relation is stable.
//! What is computed is quantitative: `γ(T)`, `M_T = ‖T†‖ = 1/γ(T)`, and how
//! these numbers transform under the operations above.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decomposition::{self, gamma, hus_constant, moore_penrose, regular_part};
use crate::error::{Error, Result};
use crate::linalg::{self, rel_diff, Field, Matrix, Vector, C64};
use crate::relation::{ImageMap, LinearRelation};
use crate::spectral;
use crate::subspace::{coset_distance, Subspace};

pub use crate::probe::{truncation_probe, FamilyKind, FamilySpec, ProbeResult, ProbeRow, Trend};

/// Relative agreement required between independently computed quantities.
pub const LINK_TOL: f64 = 1e-8;
/// Relative agreement between the sampling oracle and `M_T`.
pub const ORACLE_TOL: f64 = 1e-6;
/// Relative slack for bounds that hold exactly in exact arithmetic.
pub const BOUND_SLACK: f64 = 1e-9;

/// Absolute rounding allowance for ratios of unit-scale vectors.
pub const ROUNDOFF: f64 = 1e-12;

pub const DEFAULT_SAMPLES: usize = 256;

/// Outcome of one check.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    /// The measured discrepancy (or ratio, for bounds).
    pub value: f64,
    /// The largest acceptable `value`.
    pub threshold: f64,
    pub detail: String,
}

impl Verdict {
    /// `threshold − value`; negative exactly when the check fails.
    pub fn margin(&self) -> f64 {
        if self.value.is_nan() {
            return f64::NEG_INFINITY;
        }
        if self.value == self.threshold {
            return 0.0;
        }
        self.threshold - self.value
    }

    pub fn bound(value: f64, threshold: f64, detail: impl Into<String>) -> Self {
        Verdict {
            holds: value <= threshold,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    /// `a = b` within `tol` relative.
    pub fn close(a: f64, b: f64, tol: f64) -> Self {
        Verdict::bound(rel_diff(a, b), tol, format!("{} vs {}", linalg::fmt_sci(a), linalg::fmt_sci(b)))
    }

    pub fn flag(holds: bool, detail: impl Into<String>) -> Self {
        Verdict {
            holds,
            value: if holds { 0.0 } else { 1.0 },
            threshold: 0.0,
            detail: detail.into(),
        }
    }
}

pub type Verdicts = BTreeMap<String, Verdict>;

pub fn all_hold(v: &Verdicts) -> bool {
    v.values().all(|x| x.holds)
}

/// Result of sampling `dist(T⁻¹y, T⁻¹y₀) / ‖y − y₀‖` over `R(T)`.
#[derive(Clone, Debug)]
pub struct OracleResult {
    /// Supremum over the samples and the extremal pair.
    pub sup_ratio: f64,
    /// Largest ratio among the random samples alone.
    pub max_sampled_ratio: f64,
    /// The pair `(y, y₀)` attaining `sup_ratio`.
    pub witness: (Vector, Vector),
    pub samples: usize,
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub gamma: f64,
    pub hus_constant: f64,
    /// `‖Q_T T‖`.
    pub quotient_norm: f64,
    /// `(dim D, dim R, dim N, dim M)`.
    pub part_dims: (usize, usize, usize, usize),
    pub verdicts: Verdicts,
    /// `None` when `R(T) = {0}`.
    pub oracle: Option<OracleResult>,
    /// `γ < tol`: numerically close to a relation with non-closed range.
    pub near_unstable: bool,
}

/// Infimum and supremum of `‖numer w‖ / ‖denom w‖` over `w` with
/// `denom w ≠ 0`. The supremum is `+∞` if `numer` does not vanish on the
/// null space of `denom`. Over an empty set (`denom = 0`) the infimum is `+∞`
/// and the supremum is `0` unless `numer` leaks.
///
/// Both matrices act on the same coordinate space and are assumed unit-scaled.
pub fn ratio_extremes(numer: &Matrix, denom: &Matrix, tol: f64) -> (f64, f64) {
    let field = Field::Complex;
    let scale = linalg::norm2(numer).max(linalg::norm2(denom)).max(1.0);
    let null = linalg::null_space(denom, field, tol, scale);
    let leaks = linalg::norm2(&(numer * &null)) > tol.sqrt() * scale;
    let z = linalg::complement_of_orthonormal(&null, field);
    if z.ncols() == 0 {
        return (f64::INFINITY, if leaks { f64::INFINITY } else { 0.0 });
    }
    let d = linalg::svd(&(denom * &z), field);
    let k = z.ncols();
    let mut map = d.v.columns(0, k).into_owned();
    for (j, mut col) in map.column_iter_mut().enumerate() {
        col /= linalg::c(d.s[j]);
    }
    let g = numer * &z * map;
    let s = linalg::singular_values(&g, field);
    let inf = if s.len() < k { 0.0 } else { s.last().copied().unwrap_or(0.0) };
    let sup = if leaks { f64::INFINITY } else { s.first().copied().unwrap_or(0.0) };
    (inf, sup)
}

/// `γ(T)` straight from its definition, `inf ‖Tx‖ / dist(x, N(T))`, with the
/// quotient norm `‖P_{M(T)⊥} y‖` and `x` ranging over the graph.
pub fn gamma_by_quotient(t: &LinearRelation) -> f64 {
    let u = t.h_block();
    let v = t.k_block();
    let numer = t.mulpart().complement().projector() * v;
    let denom = t.kernel().complement().projector() * u;
    ratio_extremes(&numer, &denom, t.tol()).0
}

fn gaussian(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vector {
    Vector::from_fn(n, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = match field {
            Field::Real => 0.0,
            Field::Complex => StandardNormal.sample(rng),
        };
        C64::new(re, im)
    })
}

/// Uniform sample on the unit sphere of the span of `basis`.
pub fn unit_sample(rng: &mut ChaCha8Rng, basis: &Matrix, field: Field) -> Vector {
    loop {
        let g = gaussian(rng, basis.ncols(), field);
        let norm = g.norm();
        if norm > 1e-12 {
            return basis * (g / linalg::c(norm));
        }
    }
}

fn preimage_ratio(solve: &ImageMap, y: &Vector, y0: &Vector) -> Result<f64> {
    let x = solve.apply(y)?;
    let x0 = solve.apply(y0)?;
    let gap = (y - y0).norm();
    if gap == 0.0 {
        return Ok(0.0);
    }
    Ok(coset_distance(&x.particular, &x0.particular, &x.direction)? / gap)
}

/// Samples pairs `y, y₀` on the unit sphere of `R(T)` and always evaluates the
/// extremal pair `(y*, 0)`, `y*` a top right singular vector of `T†`.
pub fn hus_oracle(t: &LinearRelation, n_samples: usize, seed: u64) -> Result<OracleResult> {
    let range = t.range();
    if range.is_zero() {
        return Err(Error::ZeroRange);
    }
    let field = t.field();
    let zero = Vector::zeros(t.dim_k());
    let solve = t.preimage_map();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_sampled = 0.0f64;
    let mut best = (0.0, zero.clone(), zero.clone());
    for _ in 0..n_samples {
        let y = unit_sample(&mut rng, range.basis(), field);
        let y0 = unit_sample(&mut rng, range.basis(), field);
        let r = preimage_ratio(&solve, &y, &y0)?;
        max_sampled = max_sampled.max(r);
        if r > best.0 {
            best = (r, y, y0);
        }
    }
    let pinv = moore_penrose(t);
    let top = linalg::svd(&pinv.matrix, field);
    if top.s.first().is_some_and(|&s| s > 0.0) {
        let y = &pinv.domain_basis * top.v.column(0);
        let r = preimage_ratio(&solve, &y, &zero)?;
        if r > best.0 || best.0 == 0.0 {
            best = (r, y, zero);
        }
    } else if best.0 == 0.0 {
        let y = range.basis().column(0).into_owned();
        best = (0.0, y, zero);
    }
    Ok(OracleResult {
        sup_ratio: best.0,
        max_sampled_ratio: max_sampled,
        witness: (best.1, best.2),
        samples: n_samples,
    })
}

pub fn certify_hus(t: &LinearRelation, tol: f64) -> Result<StabilityReport> {
    certify_hus_with(t, tol, DEFAULT_SAMPLES, 0)
}

pub fn certify_hus_with(t: &LinearRelation, tol: f64, n_samples: usize, seed: u64) -> Result<StabilityReport> {
    let g = gamma(t);
    let m = hus_constant(t);
    let mut verdicts = Verdicts::new();
    let product = if g.is_infinite() { if m == 0.0 { 1.0 } else { f64::INFINITY } } else { m * g };
    verdicts.insert("M_T*gamma=1".into(), Verdict::close(product, 1.0, LINK_TOL));
    let oracle = if t.range().is_zero() {
        None
    } else {
        let o = hus_oracle(t, n_samples, seed)?;
        verdicts.insert(
            "oracle sup=M_T".into(),
            Verdict::bound(
                (o.sup_ratio - m).abs(),
                ORACLE_TOL * m + ROUNDOFF,
                format!("sup {} vs M_T {}", linalg::fmt_sci(o.sup_ratio), linalg::fmt_sci(m)),
            ),
        );
        verdicts.insert(
            "sampled ratios<=M_T".into(),
            Verdict::bound(o.max_sampled_ratio, m * (1.0 + BOUND_SLACK) + ROUNDOFF, "largest sampled ratio against M_T"),
        );
        Some(o)
    };
    Ok(StabilityReport {
        gamma: g,
        hus_constant: m,
        quotient_norm: decomposition::quotient_operator_norm(t),
        part_dims: t.part_dims(),
        verdicts,
        oracle,
        near_unstable: g < tol,
    })
}

fn link(verdicts: &mut Verdicts, id: &str, a: f64, b: f64) {
    verdicts.insert(id.to_string(), Verdict::close(a, b, LINK_TOL));
}

/// `γ` of `T`, `T_op`, `T*`, `T*T`, `TT*`, `|T|` and `T*T|_{N(T)⊥}`, with the
/// links between them.
pub fn verify_equivalences(t: &LinearRelation) -> Result<Verdicts> {
    let g = gamma(t);
    let g_def = gamma_by_quotient(t);
    let g_op = gamma(&regular_part(t).as_relation);
    let g_adj = gamma(&t.adjoint());
    let gram = t.adjoint().compose(t)?;
    let g_gram = gamma(&gram);
    let g_cogram = gamma(&t.compose(&t.adjoint())?);
    let g_abs = gamma(&decomposition::abs_relation(t)?);
    let g_restricted = match spectral::restricted_gram(t)? {
        Some(r) => gamma(&r),
        None => f64::INFINITY,
    };
    let sq = g * g;
    let mut v = Verdicts::new();
    link(&mut v, "gamma by definition=gamma(T)", g_def, g);
    link(&mut v, "gamma(T_op)=gamma(T)", g_op, g);
    link(&mut v, "gamma(T*)=gamma(T)", g_adj, g);
    link(&mut v, "gamma(T*T)=gamma(T)^2", g_gram, sq);
    link(&mut v, "gamma(TT*)=gamma(T)^2", g_cogram, sq);
    link(&mut v, "gamma(|T|)=gamma(T)", g_abs, g);
    link(&mut v, "gamma(T*T on N(T)perp)=gamma(T)^2", g_restricted, sq);
    let all = [g, g_def, g_op, g_adj, g_gram, g_cogram, g_abs, g_restricted];
    let positive = all.iter().filter(|x| **x > 0.0).count();
    v.insert(
        "stable together".into(),
        Verdict::flag(positive == 0 || positive == all.len(), format!("{positive} of {} positive", all.len())),
    );
    let m = hus_constant(t);
    let product = if g.is_infinite() { if m == 0.0 { 1.0 } else { f64::INFINITY } } else { m * g };
    link(&mut v, "M_T*gamma=1", product, 1.0);
    Ok(v)
}

/// Deliberate corruption for exercising failure paths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Replace `(T*)*` by the orthogonal complement of its graph.
    Adjoint,
}

fn angle_check(v: &mut Verdicts, id: &str, a: &Subspace, b: &Subspace) -> Result<()> {
    let angle = a.max_principal_angle(b)?;
    v.insert(id.into(), Verdict::bound(angle, LINK_TOL, "largest principal angle"));
    Ok(())
}

/// Adjoint, inverse and decomposition identities, each as a subspace equality.
pub fn verify_algebra(t: &LinearRelation, fault: Option<Fault>) -> Result<Verdicts> {
    let mut v = Verdicts::new();
    let mut double = t.adjoint().adjoint();
    if fault == Some(Fault::Adjoint) {
        double = LinearRelation::from_graph_subspace(double.graph().complement(), t.dim_h(), t.dim_k())?;
    }
    angle_check(&mut v, "(T*)*=T", double.graph(), t.graph())?;
    angle_check(&mut v, "(T^-1)*=(T*)^-1", t.inverse().adjoint().graph(), t.adjoint().inverse().graph())?;
    angle_check(&mut v, "N(T*)=R(T)perp", &t.adjoint().kernel(), &t.range().complement())?;
    angle_check(&mut v, "M(T*)=D(T)perp", &t.adjoint().mulpart(), &t.domain().complement())?;
    let op = regular_part(t).as_relation;
    let split = op.minkowski_sum(&LinearRelation::pure_multivalued(t.dim_h(), &t.mulpart())?)?;
    angle_check(&mut v, "T=T_op+({0}xM(T))", split.graph(), t.graph())?;
    Ok(v)
}

/// `C_T` by two routes, `‖Z_T‖ ≤ 1`, and `(Z_T)_op = Z_{T_op}`.
pub fn verify_contraction(t: &LinearRelation) -> Result<Verdicts> {
    let mut v = Verdicts::new();
    let routes = decomposition::resolvent_contraction_routes(t)?;
    v.insert(
        "C_T inverse route=projector route".into(),
        Verdict::bound(routes.max_gap(), decomposition::CONTRACTION_ROUTE_TOL, "largest entrywise gap"),
    );
    let z = decomposition::z_transform_checked(t)?;
    v.insert("||Z_T||<=1".into(), Verdict::bound(z.norm, 1.0 + 1e-10, "norm of the regular part of Z_T"));
    v.insert("(Z_T)_op=Z_(T_op)".into(), Verdict::bound(z.route_gap, LINK_TOL, "largest entrywise gap"));
    Ok(v)
}

/// Spectra of `T*T` against its part on `N(T)⊥`, and the matching `γ` values.
pub fn verify_spectral(t: &LinearRelation) -> Result<Verdicts> {
    let mut v = Verdicts::new();
    let report = spectral::verify_spectral_identity(t)?;
    let id = report.identity.expect("filled by verify_spectral_identity");
    v.insert(
        "nonzero spectrum of T*T=that of T*T on N(T)perp".into(),
        Verdict::bound(id.max_distance, id.threshold, format!("{} nonzero eigenvalues", id.restricted.len())),
    );
    let (g_gram, g_restricted, g_spec) = spectral::gram_gammas(t)?;
    let g = gamma(t);
    link(&mut v, "gamma(T*T)=gamma(T*T on N(T)perp)", g_gram, g_restricted);
    link(&mut v, "gamma(T*T)=gamma(T)^2", g_gram, g * g);
    link(&mut v, "gamma(T*T)=min nonzero |eigenvalue|", g_gram, g_spec);
    Ok(v)
}

/// Outcome of the perturbation check for `S + T`.
#[derive(Clone, Debug)]
pub struct SumReport {
    pub hypotheses: BTreeMap<String, bool>,
    /// `sup ‖Sx‖ / ‖Tx‖` over `x ∈ D(T)`; `None` if a hypothesis fails.
    pub b_star: Option<f64>,
    /// Hypotheses hold and `b* < 1`.
    pub applicable: bool,
    pub m_t: f64,
    pub m_sum: Option<f64>,
    pub verdicts: Verdicts,
}

impl SumReport {
    pub fn violated(&self) -> Vec<&str> {
        self.hypotheses.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()).collect()
    }
}

/// `sup ‖S x‖ / ‖T x‖` over `x ∈ D(T)`, with quotient norms. Requires `D(T) ⊆ D(S)`.
pub fn relative_bound(s: &LinearRelation, t: &LinearRelation) -> f64 {
    let op_t = regular_part(t);
    let op_s = regular_part(s);
    let numer = op_s.full_matrix() * &op_t.domain_basis;
    ratio_extremes(&numer, &op_t.matrix, t.tol().max(s.tol())).1
}

pub fn check_sum_stability(t: &LinearRelation, s: &LinearRelation, n_samples: usize, seed: u64) -> Result<SumReport> {
    if t.dim_h() != s.dim_h() || t.dim_k() != s.dim_k() {
        return Err(Error::DimensionMismatch(format!(
            "relations {}->{} and {}->{}",
            t.dim_h(),
            t.dim_k(),
            s.dim_h(),
            s.dim_k()
        )));
    }
    let ctol = t.check_tol().max(s.check_tol());
    let mut hypotheses = BTreeMap::new();
    hypotheses.insert("M(S)<=M(T)".to_string(), t.mulpart().contains(&s.mulpart(), ctol)?);
    hypotheses.insert("D(T)<=D(S)".to_string(), s.domain().contains(&t.domain(), ctol)?);
    let m_t = hus_constant(t);
    let mut report = SumReport {
        hypotheses,
        b_star: None,
        applicable: false,
        m_t,
        m_sum: None,
        verdicts: Verdicts::new(),
    };
    if !report.violated().is_empty() {
        return Ok(report);
    }
    let b = relative_bound(s, t);
    report.b_star = Some(b);
    if !(b < 1.0) {
        return Ok(report);
    }
    report.applicable = true;
    let sum = s.sum(t)?;
    let op_t = regular_part(t);
    let op_s = regular_part(s);
    let scale = op_t.norm() + op_s.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (image_t, image_sum) = (t.image_map(), sum.image_map());
    let mut worst = 0.0f64;
    if op_t.domain_basis.ncols() > 0 {
        for _ in 0..n_samples {
            let x = unit_sample(&mut rng, &op_t.domain_basis, t.field());
            let tx = image_t.apply(&x)?.particular.norm();
            let stx = image_sum.apply(&x)?.particular.norm();
            // Rounding allowance on top of the relative slack.
            let allowed = BOUND_SLACK * tx + ROUNDOFF * (1.0 + scale);
            let lower = (1.0 - b) * tx - stx;
            let upper = stx - (1.0 + b) * tx;
            worst = worst.max((lower.max(upper) - allowed).max(0.0) / allowed.max(f64::MIN_POSITIVE));
        }
    }
    report.verdicts.insert(
        "(1-b)|Tx|<=|(S+T)x|<=(1+b)|Tx|".into(),
        Verdict::bound(worst, 0.0, format!("{n_samples} sampled points, excess over allowance")),
    );
    report.verdicts.insert(
        "N(S+T)=N(T)".into(),
        Verdict::bound(sum.kernel().max_principal_angle(&t.kernel())?, LINK_TOL, "largest principal angle"),
    );
    let m_sum = hus_constant(&sum);
    report.m_sum = Some(m_sum);
    report.verdicts.insert(
        "M_(S+T)<=M_T/(1-b)".into(),
        Verdict::bound(m_sum, m_t / (1.0 - b) * (1.0 + BOUND_SLACK), format!("b* = {}", linalg::fmt_sci(b))),
    );
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct ProductReport {
    pub m_t: f64,
    pub m_s: f64,
    pub m_product: f64,
    pub verdicts: Verdicts,
}

fn block_diag_subspace(a: &Subspace, b: &Subspace) -> Subspace {
    let mut m = Matrix::zeros(a.ambient_dim() + b.ambient_dim(), a.rank() + b.rank());
    m.view_mut((0, 0), (a.ambient_dim(), a.rank())).copy_from(a.basis());
    m.view_mut((a.ambient_dim(), a.rank()), (b.ambient_dim(), b.rank())).copy_from(b.basis());
    Subspace::from_orthonormal(m, a.field().join(b.field()), a.tol().max(b.tol()))
}

pub fn check_product_stability(t: &LinearRelation, s: &LinearRelation) -> Result<ProductReport> {
    let p = t.cartesian_product(s);
    let mut verdicts = Verdicts::new();
    let expected = block_diag_subspace(&t.range(), &s.range());
    angle_check(&mut verdicts, "R(TxS)=R(T)xR(S)", &p.range(), &expected)?;
    let (m_t, m_s, m_product) = (hus_constant(t), hus_constant(s), hus_constant(&p));
    verdicts.insert("M_(TxS)=max(M_T,M_S)".into(), Verdict::close(m_product, m_t.max(m_s), BOUND_SLACK));
    Ok(ProductReport {
        m_t,
        m_s,
        m_product,
        verdicts,
    })
}

/// The block relation and its dominance data.
#[derive(Clone, Debug)]
pub struct BlockReport {
    pub relation: LinearRelation,
    pub hypotheses: BTreeMap<String, bool>,
    /// `sup ‖Cx‖/‖Ax‖` over `D(A)`.
    pub a_star: Option<f64>,
    /// `sup ‖Bz‖/‖Fz‖` over `D(F)`.
    pub f_star: Option<f64>,
    pub d: Option<f64>,
    /// `d < 1` with all hypotheses met.
    pub certified: bool,
    pub gamma: f64,
    pub verdicts: Verdicts,
}

/// `𝒜 = [[A, B], [C, F]]`: pairs `((x, y), (u + v, w + z))` with
/// `(x, u) ∈ A`, `(y, v) ∈ B`, `(x, w) ∈ C`, `(y, z) ∈ F`.
///
/// Shapes: `A: H1 → K1`, `B: H2 → K1`, `C: H1 → K2`, `F: H2 → K2`.
pub fn block_relation(a: &LinearRelation, b: &LinearRelation, c: &LinearRelation, f: &LinearRelation) -> Result<(LinearRelation, LinearRelation, LinearRelation)> {
    let (h1, k1, h2, k2) = (a.dim_h(), a.dim_k(), f.dim_h(), f.dim_k());
    if (b.dim_h(), b.dim_k()) != (h2, k1) || (c.dim_h(), c.dim_k()) != (h1, k2) {
        return Err(Error::DimensionMismatch(format!(
            "blocks A {h1}->{k1}, B {}->{}, C {}->{}, F {h2}->{k2}",
            b.dim_h(),
            b.dim_k(),
            c.dim_h(),
            c.dim_k()
        )));
    }
    let diagonal = a.cartesian_product(f);
    // C × B lands in K2 ⊕ K1; swap the halves to K1 ⊕ K2.
    let mut swap = Matrix::zeros(k1 + k2, k1 + k2);
    for i in 0..k1 {
        swap[(i, k2 + i)] = linalg::c(1.0);
    }
    for i in 0..k2 {
        swap[(k1 + i, i)] = linalg::c(1.0);
    }
    let cb = c.cartesian_product(b);
    let off = cb.map_values(&swap, cb.field());
    let whole = diagonal.sum(&off)?;
    Ok((whole, diagonal, off))
}

pub fn block_matrix(a: &LinearRelation, b: &LinearRelation, c: &LinearRelation, f: &LinearRelation) -> Result<BlockReport> {
    let (whole, diagonal, off) = block_relation(a, b, c, f)?;
    let tol = |x: &LinearRelation, y: &LinearRelation| x.check_tol().max(y.check_tol());
    let mut hypotheses = BTreeMap::new();
    hypotheses.insert("M(B)<=M(A)".to_string(), a.mulpart().contains(&b.mulpart(), tol(a, b))?);
    hypotheses.insert("M(C)<=M(F)".to_string(), f.mulpart().contains(&c.mulpart(), tol(c, f))?);
    hypotheses.insert("D(A)<=D(C)".to_string(), c.domain().contains(&a.domain(), tol(a, c))?);
    hypotheses.insert("D(F)<=D(B)".to_string(), b.domain().contains(&f.domain(), tol(b, f))?);
    let mut report = BlockReport {
        gamma: gamma(&whole),
        relation: whole,
        hypotheses,
        a_star: None,
        f_star: None,
        d: None,
        certified: false,
        verdicts: Verdicts::new(),
    };
    if report.hypotheses.values().any(|ok| !ok) {
        return Ok(report);
    }
    let a_star = relative_bound(c, a);
    let f_star = relative_bound(b, f);
    let d = a_star.max(f_star);
    report.a_star = Some(a_star);
    report.f_star = Some(f_star);
    report.d = Some(d);
    if !(d < 1.0) {
        return Ok(report);
    }
    report.certified = true;
    let sandwich = relative_bound(&off, &diagonal);
    report.verdicts.insert(
        "|S(x,y)|<=d|T(x,y)|".into(),
        Verdict::bound(sandwich, d * (1.0 + BOUND_SLACK) + ROUNDOFF, "sup of the off-diagonal ratio"),
    );
    let g_diag = gamma(&diagonal);
    let lower = (1.0 - d) * g_diag;
    report.verdicts.insert(
        "gamma(block)>=(1-d)min(gamma(A),gamma(F))".into(),
        Verdict::bound(lower, report.gamma * (1.0 + BOUND_SLACK), format!("gamma(block) = {}", linalg::fmt_sci(report.gamma))),
    );
    report.verdicts.insert(
        "gamma(block)>0".into(),
        Verdict::flag(report.gamma > 0.0, format!("gamma(block) = {}", linalg::fmt_sci(report.gamma))),
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn rows(r: &[&[f64]]) -> LinearRelation {
        LinearRelation::from_real_rows(r).unwrap()
    }

    fn diag(xs: &[f64]) -> LinearRelation {
        let n = xs.len();
        let a = Matrix::from_fn(n, n, |i, j| if i == j { c(xs[i]) } else { c(0.0) });
        LinearRelation::from_matrix(&a, Field::Real).unwrap()
    }

    #[test]
    fn certify_examples() {
        let r = certify_hus(&diag(&[2.0, 0.0]), 1e-10).unwrap();
        assert!((r.gamma - 2.0).abs() < 1e-12);
        assert!((r.hus_constant - 0.5).abs() < 1e-12);
        assert!(all_hold(&r.verdicts), "{:?}", r.verdicts);
        assert!(!r.near_unstable);
        let r = certify_hus(&LinearRelation::identity(3, Field::Real), 1e-10).unwrap();
        assert!((r.gamma - 1.0).abs() < 1e-12 && (r.hus_constant - 1.0).abs() < 1e-12);
        let xs: Vec<f64> = (1..=100).map(|i| 1.0 / i as f64).collect();
        let r = certify_hus(&diag(&xs), 1e-1).unwrap();
        assert!((r.gamma - 0.01).abs() < 1e-12);
        assert!(r.near_unstable);
    }

    #[test]
    fn oracle_witness_lies_along_e1() {
        let o = hus_oracle(&diag(&[2.0, 0.0]), 64, 7).unwrap();
        assert!((o.sup_ratio - 0.5).abs() < 1e-12);
        let (y, y0) = &o.witness;
        let dy = y - y0;
        assert!(dy[1].norm() < 1e-12 * dy.norm());
    }

    #[test]
    fn oracle_on_identity_and_pure_multivalued() {
        let o = hus_oracle(&LinearRelation::identity(3, Field::Complex), 50, 1).unwrap();
        assert!((o.sup_ratio - 1.0).abs() < 1e-12);
        assert!((o.max_sampled_ratio - 1.0).abs() < 1e-12);
        let t = LinearRelation::pure_multivalued(2, &Subspace::full(2, Field::Real)).unwrap();
        let o = hus_oracle(&t, 20, 1).unwrap();
        assert_eq!(o.sup_ratio, 0.0);
        assert_eq!(hus_constant(&t), 0.0);
        let zero = LinearRelation::zero_on(&Subspace::full(2, Field::Real), 2).unwrap();
        assert_eq!(hus_oracle(&zero, 5, 0).unwrap_err(), Error::ZeroRange);
    }

    #[test]
    fn equivalences_on_diag() {
        let v = verify_equivalences(&diag(&[2.0, 0.0])).unwrap();
        assert!(all_hold(&v), "{v:?}");
        let v = verify_equivalences(&LinearRelation::identity(2, Field::Real)).unwrap();
        assert!(all_hold(&v), "{v:?}");
        assert!(all_hold(&verify_algebra(&diag(&[2.0, 0.0]), None).unwrap()));
        assert!(all_hold(&verify_contraction(&diag(&[2.0, 0.0])).unwrap()));
        assert!(all_hold(&verify_spectral(&diag(&[2.0, 0.0])).unwrap()));
    }

    #[test]
    fn injected_adjoint_fault_is_caught() {
        let v = verify_algebra(&LinearRelation::identity(2, Field::Real), Some(Fault::Adjoint)).unwrap();
        assert!(!v["(T*)*=T"].holds);
        assert!(v["(T*)*=T"].margin() < 0.0);
    }

    #[test]
    fn gamma_by_definition_matches_operator_route() {
        assert!((gamma_by_quotient(&rows(&[&[0.0, 1.0], &[0.0, 0.0]])) - 1.0).abs() < 1e-12);
        assert!((gamma_by_quotient(&diag(&[3.0, 0.5, 0.0])) - 0.5).abs() < 1e-12);
        let t = LinearRelation::pure_multivalued(2, &Subspace::full(2, Field::Real)).unwrap();
        assert_eq!(gamma_by_quotient(&t), f64::INFINITY);
    }

    #[test]
    fn ratio_extremes_cases() {
        let a = Matrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(3.0)]);
        let i = Matrix::identity(2, 2);
        let (lo, hi) = ratio_extremes(&a, &i, 1e-10);
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 3.0).abs() < 1e-12);
        let d = Matrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(0.0)]);
        assert_eq!(ratio_extremes(&a, &d, 1e-10).1, f64::INFINITY);
    }

    #[test]
    fn sum_hand_case() {
        let t = diag(&[2.0, 2.0]);
        let s = diag(&[1.0, 1.0]);
        let r = check_sum_stability(&t, &s, 200, 3).unwrap();
        assert!(r.applicable);
        assert!((r.b_star.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.m_sum.unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!((r.m_t / (1.0 - 0.5) - 1.0).abs() < 1e-12);
        assert!(all_hold(&r.verdicts), "{:?}", r.verdicts);
    }

    #[test]
    fn sum_with_zero_and_violations() {
        let t = diag(&[2.0, 1.0]);
        let zero = LinearRelation::zero_on(&t.domain(), 2).unwrap();
        let r = check_sum_stability(&t, &zero, 50, 0).unwrap();
        assert_eq!(r.b_star, Some(0.0));
        assert!(zero.sum(&t).unwrap().equals(&t, 1e-8).unwrap());
        let mul = LinearRelation::pure_multivalued(2, &Subspace::coordinate(2, &[0], Field::Real)).unwrap();
        let r = check_sum_stability(&t, &mul, 50, 0).unwrap();
        assert!(!r.applicable);
        assert!(r.violated().contains(&"M(S)<=M(T)"));
        // T vanishes on e2 but S does not: b* = ∞.
        let r = check_sum_stability(&diag(&[1.0, 0.0]), &diag(&[0.0, 1.0]), 10, 0).unwrap();
        assert_eq!(r.b_star, Some(f64::INFINITY));
        assert!(!r.applicable);
    }

    #[test]
    fn product_examples() {
        let r = check_product_stability(&diag(&[2.0, 2.0]), &diag(&[4.0, 4.0])).unwrap();
        assert!((r.m_product - 0.5).abs() < 1e-12);
        assert!(all_hold(&r.verdicts));
        let trivial = LinearRelation::zero_on(&Subspace::full(1, Field::Real), 1).unwrap();
        let t = diag(&[3.0, 0.5]);
        let r = check_product_stability(&t, &trivial).unwrap();
        assert!((r.m_product - hus_constant(&t)).abs() < 1e-12);
    }

    #[test]
    fn block_hand_case() {
        let two = rows(&[&[2.0]]);
        let one = rows(&[&[1.0]]);
        let r = block_matrix(&two, &one, &one, &two).unwrap();
        assert!((r.d.unwrap() - 0.5).abs() < 1e-12);
        assert!((r.gamma - 1.0).abs() < 1e-12);
        assert!(r.certified && all_hold(&r.verdicts), "{:?}", r.verdicts);
        let expected = rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        assert!(r.relation.equals(&expected, 1e-10).unwrap());
    }

    #[test]
    fn block_diagonal_and_undominated() {
        let a = rows(&[&[2.0]]);
        let f = rows(&[&[0.5]]);
        let zero = rows(&[&[0.0]]);
        let r = block_matrix(&a, &zero, &zero, &f).unwrap();
        assert_eq!(r.d, Some(0.0));
        assert!((r.gamma - 0.5).abs() < 1e-12);
        let r = block_matrix(&rows(&[&[1.0]]), &rows(&[&[3.0]]), &rows(&[&[3.0]]), &rows(&[&[1.0]])).unwrap();
        assert!(!r.certified && r.verdicts.is_empty());
    }
}
