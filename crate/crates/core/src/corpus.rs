//! Seeded random relations with controlled structure.
//!
//! Every item draws from its own generator, seeded from the corpus seed and
//! the item index, so items can be produced in any order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::decomposition::regular_part;
use crate::linalg::{self, Field, Matrix, C64, DEFAULT_TOL};
use crate::relation::LinearRelation;
use crate::subspace::Subspace;

/// Which fields a corpus draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Real,
    Complex,
    /// Alternate real and complex by item index.
    Both,
}

impl FieldMode {
    pub fn field_for(self, index: usize) -> Field {
        match self {
            FieldMode::Real => Field::Real,
            FieldMode::Complex => Field::Complex,
            FieldMode::Both if index.is_multiple_of(2) => Field::Real,
            FieldMode::Both => Field::Complex,
        }
    }
}

/// Seed of item `index` in the corpus with seed `seed` (SplitMix64 finalizer).
pub fn item_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn item_rng(seed: u64, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(item_seed(seed, index))
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize, field: Field) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = match field {
            Field::Real => 0.0,
            Field::Complex => StandardNormal.sample(rng),
        };
        C64::new(re, im)
    })
}

/// A Haar-like random unitary (orthogonal for the real field).
pub fn random_unitary(rng: &mut impl Rng, n: usize, field: Field) -> Matrix {
    linalg::svd(&gaussian_matrix(rng, n, n, field), field).u
}

fn diag(values: &[f64]) -> Matrix {
    Matrix::from_fn(values.len(), values.len(), |i, j| if i == j { linalg::c(values[i]) } else { linalg::c(0.0) })
}

/// A random relation with `dim_h, dim_k ≤ max_dim`, random `D(T)` and `M(T)`,
/// and nonzero singular values of `T_op` drawn from `[0.25, 4]`.
pub fn random_relation(rng: &mut impl Rng, max_dim: usize, field: Field) -> LinearRelation {
    let max_dim = max_dim.max(1);
    let dim_h = rng.gen_range(1..=max_dim);
    let dim_k = rng.gen_range(1..=max_dim);
    random_relation_with_dims(rng, dim_h, dim_k, field)
}

pub fn random_relation_with_dims(rng: &mut impl Rng, dim_h: usize, dim_k: usize, field: Field) -> LinearRelation {
    let dim_d = if rng.gen_bool(0.5) { dim_h } else { rng.gen_range(0..=dim_h) };
    let dim_m = if rng.gen_bool(0.5) { 0 } else { rng.gen_range(0..=dim_k) };
    let max_rank = dim_d.min(dim_k - dim_m);
    let rank = if rng.gen_bool(0.5) { max_rank } else { rng.gen_range(0..=max_rank) };
    let uh = random_unitary(rng, dim_h, field);
    let uk = random_unitary(rng, dim_k, field);
    let q = uh.columns(0, dim_d).into_owned();
    let mul = uk.columns(0, dim_m).into_owned();
    let out = uk.columns(dim_m, rank).into_owned();
    let v = random_unitary(rng, dim_d, field).columns(0, rank).into_owned();
    let sigma: Vec<f64> = (0..rank).map(|_| rng.gen_range(0.25..=4.0)).collect();
    let mut operator = out * diag(&sigma) * v.adjoint();
    // Components along M(T) do not change the relation.
    if dim_m > 0 && dim_d > 0 {
        operator += &mul * gaussian_matrix(rng, dim_m, dim_d, field);
    }
    // Present the domain through a non-orthonormal basis.
    let mix = if dim_d > 0 {
        let s: Vec<f64> = (0..dim_d).map(|_| rng.gen_range(0.5..=2.0)).collect();
        random_unitary(rng, dim_d, field) * diag(&s)
    } else {
        Matrix::zeros(0, 0)
    };
    LinearRelation::from_parts(&(q * &mix), &(operator * &mix), &mul, field, DEFAULT_TOL).expect("consistent shapes")
}

/// A random square relation on a space of dimension at most `max_dim`.
pub fn random_square(rng: &mut impl Rng, max_dim: usize, field: Field) -> LinearRelation {
    let n = rng.gen_range(1..=max_dim.max(1));
    random_relation_with_dims(rng, n, n, field)
}

/// A relation `S` from the domain space of `t` into a space of dimension
/// `dim_out` with `M(S) ⊆ target_mul`, `D(t) ⊆ D(S)`, and
/// `S x = G T_op x` on `D(t)` for a random `G` of norm at most `ratio`.
/// Hence `sup ‖Sx‖/‖Tx‖ ≤ ratio` (plus `|shift|` when `G` includes a
/// multiple of the identity).
pub fn dominated_by(rng: &mut impl Rng, t: &LinearRelation, target_mul: &Subspace, ratio: f64, shift: f64, field: Field) -> LinearRelation {
    let dim_out = target_mul.ambient_dim();
    let field = field.join(t.field());
    let op = regular_part(t);
    let raw = gaussian_matrix(rng, dim_out, t.dim_k(), field);
    let mut g = &raw * linalg::c(ratio / linalg::norm2(&raw).max(1e-300));
    if shift != 0.0 {
        assert_eq!(dim_out, t.dim_k(), "shift needs matching output space");
        g += Matrix::identity(dim_out, dim_out) * linalg::c(shift);
    }
    let on_domain = g * op.full_matrix();
    // Arbitrary action on part of D(t)⊥, extending the domain.
    let dom = t.domain();
    let perp = dom.complement();
    let extra = if perp.rank() > 0 { rng.gen_range(0..=perp.rank()) } else { 0 };
    let ext_basis = perp.basis().columns(0, extra).into_owned();
    let ext_action = gaussian_matrix(rng, dim_out, extra, field);
    let domain_basis = linalg::hstack(dom.basis(), &ext_basis);
    let operator = linalg::hstack(&(on_domain * dom.basis()), &ext_action);
    let keep = if target_mul.rank() > 0 { rng.gen_range(0..=target_mul.rank()) } else { 0 };
    let mix = random_unitary(rng, target_mul.rank(), field);
    let mul = target_mul.basis() * mix.columns(0, keep);
    LinearRelation::from_parts(&domain_basis, &operator, &mul, field, DEFAULT_TOL).expect("consistent shapes")
}

/// `(T, S)` meeting the hypotheses of the sum stability check with `b* < 0.9`.
pub fn admissible_sum_pair(rng: &mut impl Rng, max_dim: usize, field: Field) -> (LinearRelation, LinearRelation) {
    let t = random_relation(rng, max_dim, field);
    let shift = rng.gen_range(-0.5..=0.5);
    let s = dominated_by(rng, &t, &t.mulpart(), 0.35, shift, field);
    (t, s)
}

/// Blocks `(A, B, C, F)` of a diagonally dominated block relation with `d < 0.5`.
pub fn dominated_blocks(rng: &mut impl Rng, max_dim: usize, field: Field) -> [LinearRelation; 4] {
    let a = random_relation(rng, max_dim, field);
    let f = random_relation(rng, max_dim, field);
    let c = dominated_by(rng, &a, &f.mulpart(), 0.45, 0.0, field);
    let b = dominated_by(rng, &f, &a.mulpart(), 0.45, 0.0, field);
    [a, b, c, f]
}

/// `count` relations, item `i` drawn from [`item_rng`]`(seed, i)`.
pub fn corpus(count: usize, seed: u64, max_dim: usize, mode: FieldMode) -> Vec<LinearRelation> {
    (0..count)
        .map(|i| random_relation(&mut item_rng(seed, i), max_dim, mode.field_for(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::gamma;
    use crate::stability::relative_bound;

    #[test]
    fn corpus_is_reproducible_and_varied() {
        let a = corpus(40, 11, 6, FieldMode::Both);
        let b = corpus(40, 11, 6, FieldMode::Both);
        for (x, y) in a.iter().zip(&b) {
            assert!(x.equals(y, 1e-14).unwrap());
        }
        assert!(a.iter().any(|t| !t.is_operator()));
        assert!(a.iter().any(|t| !t.is_everywhere_defined()));
        assert!(a.iter().any(|t| t.field() == Field::Complex));
        assert!(a.iter().all(|t| t.dim_h() <= 6 && t.dim_k() <= 6));
    }

    #[test]
    fn structured_singular_values() {
        for i in 0..30 {
            let t = random_relation(&mut item_rng(5, i), 5, Field::Complex);
            let g = gamma(&t);
            assert!(g.is_infinite() || (0.25 - 1e-9..=4.0 + 1e-9).contains(&g), "{g}");
        }
    }

    #[test]
    fn sum_pairs_are_admissible() {
        for i in 0..30 {
            let (t, s) = admissible_sum_pair(&mut item_rng(9, i), 5, FieldMode::Both.field_for(i));
            assert!(t.mulpart().contains(&s.mulpart(), 1e-8).unwrap());
            assert!(s.domain().contains(&t.domain(), 1e-8).unwrap());
            assert!(relative_bound(&s, &t) < 0.9);
        }
    }
}
