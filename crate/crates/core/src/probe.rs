//! Truncation families: sequences of finite relations standing in for an
//! infinite-dimensional one. A reduced minimum modulus that decays along the
//! family signals a range that fails to be closed in the limit.
//!
//! Entries are expressions in the 1-based index `i` and the size `n`,
//! for example `"1/i"` or `"1 + 1/i"`.

use evalexpr::{ContextWithMutableVariables, HashMapContext, Node, Value};
use serde::{Deserialize, Serialize};

use crate::decomposition::{gamma, hus_constant};
use crate::error::{Error, Result};
use crate::linalg::{self, Field, Matrix};
use crate::relation::LinearRelation;

/// Slope below which (with a good fit) the family is called degenerating.
pub const DEGENERATING_SLOPE: f64 = -0.5;
/// Minimum `R²` for the degenerating verdict.
pub const MIN_R_SQUARED: f64 = 0.99;
/// Slope above which the family is called stable.
pub const STABLE_SLOPE: f64 = -0.25;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub offset: i64,
    pub entry: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// `diag(entry(1), …, entry(n))`.
    Diagonal { entry: String },
    /// Diagonal plus bands; `offset > 0` is above the diagonal.
    Banded {
        entry: String,
        #[serde(default)]
        bands: Vec<Band>,
    },
    /// `diag(entry(i))` on the first `n − mul_dim` coordinates, with the
    /// last `mul_dim` coordinates as multivalued part.
    GraphSequence { entry: String, mul_dim: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub kind: FamilyKind,
    /// Inclusive range of sizes; may instead be supplied with [`FamilySpec::with_sizes`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_range: Option<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trend {
    Stable,
    Degenerating,
    Inconclusive,
}

impl Trend {
    pub fn as_str(self) -> &'static str {
        match self {
            Trend::Stable => "stable",
            Trend::Degenerating => "degenerating",
            Trend::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow {
    pub n: usize,
    pub gamma: f64,
    pub hus_constant: f64,
}

#[derive(Clone, Debug)]
pub struct ProbeResult {
    pub rows: Vec<ProbeRow>,
    /// Least-squares slope of `log γ_n` against `log n` (NaN with fewer than two points).
    pub slope: f64,
    pub r_squared: f64,
    /// Heuristic classification from `slope` and `r_squared`.
    pub trend: Trend,
}

struct Expr {
    source: String,
    node: Node,
}

impl Expr {
    fn parse(source: &str) -> Result<Self> {
        let node = evalexpr::build_operator_tree(source).map_err(|e| Error::Family(format!("expression {source:?}: {e}")))?;
        Ok(Expr {
            source: source.to_string(),
            node,
        })
    }

    fn eval(&self, i: usize, n: usize) -> Result<f64> {
        let mut ctx = HashMapContext::new();
        let set = |ctx: &mut HashMapContext, k: &str, v: usize| ctx.set_value(k.into(), Value::Float(v as f64));
        set(&mut ctx, "i", i).and_then(|_| set(&mut ctx, "n", n)).map_err(|e| Error::Family(e.to_string()))?;
        let v = self
            .node
            .eval_number_with_context(&ctx)
            .map_err(|e| Error::Family(format!("expression {:?} at i={i}, n={n}: {e}", self.source)))?;
        if !v.is_finite() {
            return Err(Error::Family(format!("expression {:?} is not finite at i={i}, n={n}", self.source)));
        }
        Ok(v)
    }
}

impl FamilySpec {
    /// Parses a family; a missing `n_range` is left for the caller to supply.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: FamilySpec = serde_json::from_str(text).map_err(|e| Error::Family(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        if spec.n_range.is_some() {
            spec.validate()?;
        }
        Ok(spec)
    }

    pub fn with_sizes(self, lo: usize, hi: usize) -> Self {
        FamilySpec {
            n_range: Some([lo, hi]),
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let [lo, hi] = self.n_range.ok_or_else(|| Error::Family("no n_range given".into()))?;
        if lo == 0 || lo > hi {
            return Err(Error::Family(format!("n_range [{lo}, {hi}] must satisfy 1 <= lo <= hi")));
        }
        if let FamilyKind::GraphSequence { mul_dim, .. } = self.kind {
            if mul_dim >= lo {
                return Err(Error::Family(format!("mul_dim {mul_dim} leaves no domain at n = {lo}")));
            }
        }
        Ok(())
    }

    /// The sizes of the family; empty when no range is set.
    pub fn sizes(&self) -> std::ops::RangeInclusive<usize> {
        match self.n_range {
            Some([lo, hi]) => lo..=hi,
            None => std::ops::RangeInclusive::new(1, 0),
        }
    }

    /// The member of size `n`.
    pub fn member(&self, n: usize) -> Result<LinearRelation> {
        let diag = |entry: &Expr, m: usize| -> Result<Matrix> {
            let mut a = Matrix::zeros(n, n);
            for i in 0..m {
                a[(i, i)] = linalg::c(entry.eval(i + 1, n)?);
            }
            Ok(a)
        };
        match &self.kind {
            FamilyKind::Diagonal { entry } => LinearRelation::from_matrix(&diag(&Expr::parse(entry)?, n)?, Field::Real),
            FamilyKind::Banded { entry, bands } => {
                let mut a = diag(&Expr::parse(entry)?, n)?;
                for band in bands {
                    let e = Expr::parse(&band.entry)?;
                    for i in 0..n {
                        let j = i as i64 + band.offset;
                        if band.offset != 0 && (0..n as i64).contains(&j) {
                            a[(i, j as usize)] = linalg::c(e.eval(i + 1, n)?);
                        }
                    }
                }
                LinearRelation::from_matrix(&a, Field::Real)
            }
            FamilyKind::GraphSequence { entry, mul_dim } => {
                if *mul_dim >= n {
                    return Err(Error::Family(format!("mul_dim {mul_dim} leaves no domain at n = {n}")));
                }
                let d = n - mul_dim;
                let a = diag(&Expr::parse(entry)?, d)?;
                let q = Matrix::identity(n, d);
                let op = a.columns(0, d).into_owned();
                let mut mul = Matrix::zeros(n, *mul_dim);
                for j in 0..*mul_dim {
                    mul[(d + j, j)] = linalg::c(1.0);
                }
                LinearRelation::from_parts(&q, &op, &mul, Field::Real, linalg::DEFAULT_TOL)
            }
        }
    }
}

/// Least-squares line through `(x, y)`: `(slope, R²)`.
fn fit(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    if points.len() < 2 {
        return (f64::NAN, f64::NAN);
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let ss_res: f64 = points.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let r2 = if ss_tot <= f64::EPSILON * k * my.abs().max(1.0) { 1.0 } else { 1.0 - ss_res / ss_tot };
    (slope, r2)
}

/// `γ_n` and `M_n` across the family with a heuristic trend verdict.
pub fn truncation_probe(family: &FamilySpec) -> Result<ProbeResult> {
    family.validate()?;
    let mut rows = Vec::new();
    for n in family.sizes() {
        let t = family.member(n)?;
        rows.push(ProbeRow {
            n,
            gamma: gamma(&t),
            hus_constant: hus_constant(&t),
        });
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.gamma.is_finite() && r.gamma > 0.0)
        .map(|r| ((r.n as f64).ln(), r.gamma.ln()))
        .collect();
    let (slope, r_squared) = fit(&points);
    let trend = if points.len() < 3 {
        Trend::Inconclusive
    } else if slope < DEGENERATING_SLOPE && r_squared > MIN_R_SQUARED {
        Trend::Degenerating
    } else if slope > STABLE_SLOPE {
        Trend::Stable
    } else {
        Trend::Inconclusive
    };
    Ok(ProbeResult {
        rows,
        slope,
        r_squared,
        trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diagonal(entry: &str, lo: usize, hi: usize) -> FamilySpec {
        FamilySpec {
            kind: FamilyKind::Diagonal { entry: entry.into() },
            n_range: Some([lo, hi]),
        }
    }

    #[test]
    fn harmonic_family_degenerates() {
        let r = truncation_probe(&diagonal("1/i", 2, 64)).unwrap();
        for row in &r.rows {
            assert!((row.gamma - 1.0 / row.n as f64).abs() < 1e-12);
            assert!((row.hus_constant - row.n as f64).abs() < 1e-9);
        }
        assert!((r.slope + 1.0).abs() < 0.05);
        assert_eq!(r.trend, Trend::Degenerating);
    }

    #[test]
    fn constant_and_convergent_families_are_stable() {
        assert_eq!(truncation_probe(&diagonal("1", 2, 20)).unwrap().trend, Trend::Stable);
        let r = truncation_probe(&diagonal("1 + 1/i", 2, 40)).unwrap();
        assert_eq!(r.trend, Trend::Stable);
        assert!((r.rows.last().unwrap().gamma - 1.025).abs() < 1e-12);
    }

    #[test]
    fn two_points_are_inconclusive() {
        assert_eq!(truncation_probe(&diagonal("1/i", 3, 4)).unwrap().trend, Trend::Inconclusive);
    }

    #[test]
    fn json_families() {
        let f = FamilySpec::from_json(r#"{"kind": "banded", "entry": "2", "bands": [{"offset": 1, "entry": "-1"}], "n_range": [2, 5]}"#).unwrap();
        let t = f.member(3).unwrap();
        assert!(t.is_operator() && t.is_everywhere_defined());
        let f = FamilySpec::from_json(r#"{"kind": "graph_sequence", "entry": "1/i", "mul_dim": 1, "n_range": [2, 6]}"#).unwrap();
        let t = f.member(4).unwrap();
        assert_eq!(t.part_dims(), (3, 4, 0, 1));
        assert!((gamma(&t) - 1.0 / 3.0).abs() < 1e-12);
        assert!(FamilySpec::from_json(r#"{"kind": "diagonal", "entry": "1/i", "n_range": [5, 2]}"#).is_err());
        assert!(FamilySpec::from_json(r#"{"kind": "spiral", "n_range": [1, 2]}"#).is_err());
        let open = FamilySpec::from_json(r#"{"kind": "diagonal", "entry": "1"}"#).unwrap();
        assert!(truncation_probe(&open).is_err());
        assert_eq!(truncation_probe(&open.with_sizes(2, 4)).unwrap().rows.len(), 3);
        assert!(diagonal("1/(i-1)", 1, 3).member(2).is_err());
        assert!(diagonal("i +", 1, 3).member(2).is_err());
    }
}
