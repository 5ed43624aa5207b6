//! Relation documents: a human-writable JSON form of a relation.
//!
//! ```json
//! {
//!   "field": "real",
//!   "dim_h": 2,
//!   "dim_k": 2,
//!   "graph_of": [[2, 0], [0, 0]]
//! }
//! ```
//!
//! Exactly one of `generators` (vectors of length `dim_h + dim_k` spanning the
//! graph), `graph_of` (a `dim_k × dim_h` matrix, row by row) or `parts`
//! (`domain_basis`, their `operator` images and `mul` generators) must be
//! present. Complex entries are written `[re, im]`. An optional `tol`
//! overrides the rank tolerance and `metadata.chain` records how the relation
//! was produced.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, C64, DEFAULT_TOL};
use crate::relation::LinearRelation;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parts {
    pub domain_basis: Vec<Vec<Entry>>,
    pub operator: Vec<Vec<Entry>>,
    #[serde(default)]
    pub mul: Vec<Vec<Entry>>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default)]
    pub chain: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    field: Field,
    dim_h: usize,
    dim_k: usize,
    #[serde(default)]
    tol: Option<f64>,
    #[serde(default)]
    generators: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    graph_of: Option<Vec<Vec<Entry>>>,
    #[serde(default)]
    parts: Option<Parts>,
    #[serde(default)]
    metadata: Option<Metadata>,
}

/// A relation together with the record of how it was produced.
#[derive(Clone, Debug)]
pub struct RelationDocument {
    pub relation: LinearRelation,
    pub chain: Vec<String>,
}

/// Line of the first occurrence of `"key"`, for diagnostics.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let needle = format!("\"{key}\"");
    text.find(&needle).map(|at| text[..at].matches('\n').count() + 1)
}

struct Checker<'a> {
    text: &'a str,
    field: Field,
}

impl Checker<'_> {
    fn fail(&self, key: &str, msg: impl std::fmt::Display) -> Error {
        match line_of(self.text, key) {
            Some(line) => Error::Parse(format!("line {line}, field `{key}`: {msg}")),
            None => Error::Parse(format!("field `{key}`: {msg}")),
        }
    }

    /// Vectors of length `len` as the columns of a `len × count` matrix.
    fn columns(&self, key: &str, vectors: &[Vec<Entry>], len: usize) -> Result<Matrix> {
        let mut m = Matrix::zeros(len, vectors.len());
        for (j, v) in vectors.iter().enumerate() {
            if v.len() != len {
                return Err(self.fail(key, format!("vector {j} has {} entries, expected {len}", v.len())));
            }
            for (i, &e) in v.iter().enumerate() {
                m[(i, j)] = self.entry(key, e)?;
            }
        }
        Ok(m)
    }

    fn entry(&self, key: &str, e: Entry) -> Result<C64> {
        let z = e.value();
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(self.fail(key, "entries must be finite"));
        }
        if self.field == Field::Real && z.im != 0.0 {
            return Err(self.fail(key, "complex entry in a real document"));
        }
        Ok(z)
    }
}

impl RelationDocument {
    pub fn new(relation: LinearRelation) -> Self {
        RelationDocument {
            relation,
            chain: Vec::new(),
        }
    }

    pub fn with_chain(relation: LinearRelation, chain: Vec<String>) -> Self {
        RelationDocument { relation, chain }
    }

    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_with_tol(text, None)
    }

    /// Parses a document; `tol` takes precedence over the document's own `tol`.
    pub fn parse_with_tol(text: &str, tol: Option<f64>) -> Result<Self> {
        let raw: Raw = serde_json::from_str(text).map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        let ck = Checker { text, field: raw.field };
        let tol = tol.or(raw.tol).unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(ck.fail("tol", format!("tolerance {tol} must lie in (0, 1)")));
        }
        for (key, dim) in [("dim_h", raw.dim_h), ("dim_k", raw.dim_k)] {
            if dim == 0 {
                return Err(ck.fail(key, "dimension must be at least 1"));
            }
        }
        let (dim_h, dim_k, field) = (raw.dim_h, raw.dim_k, raw.field);
        let given = [raw.generators.is_some(), raw.graph_of.is_some(), raw.parts.is_some()];
        if given.iter().filter(|&&g| g).count() != 1 {
            return Err(Error::Parse("exactly one of `generators`, `graph_of` or `parts` is required".into()));
        }
        let relation = if let Some(gens) = &raw.generators {
            let m = ck.columns("generators", gens, dim_h + dim_k)?;
            LinearRelation::from_generator_matrix(&m, dim_h, dim_k, field, tol)?
        } else if let Some(rows) = &raw.graph_of {
            if rows.len() != dim_k {
                return Err(ck.fail("graph_of", format!("{} rows, expected dim_k = {dim_k}", rows.len())));
            }
            if let Some(bad) = rows.iter().position(|r| r.len() != dim_h) {
                return Err(ck.fail("graph_of", format!("row {bad} has {} entries, expected dim_h = {dim_h}", rows[bad].len())));
            }
            // Rows of the matrix are the columns of its transpose.
            let a = ck.columns("graph_of", rows, dim_h)?.transpose();
            LinearRelation::from_matrix(&a, field)?.with_tol(tol)
        } else {
            let parts = raw.parts.as_ref().expect("one form present");
            if parts.domain_basis.len() != parts.operator.len() {
                return Err(ck.fail(
                    "operator",
                    format!("{} images for {} domain vectors", parts.operator.len(), parts.domain_basis.len()),
                ));
            }
            let q = ck.columns("domain_basis", &parts.domain_basis, dim_h)?;
            let op = ck.columns("operator", &parts.operator, dim_k)?;
            let mul = ck.columns("mul", &parts.mul, dim_k)?;
            LinearRelation::from_parts(&q, &op, &mul, field, tol)?
        };
        Ok(RelationDocument {
            relation,
            chain: raw.metadata.map(|m| m.chain).unwrap_or_default(),
        })
    }

    /// The document in `generators` form, spanned by the orthonormal graph basis.
    pub fn to_json(&self) -> String {
        let t = &self.relation;
        let field = t.field();
        let gens: Vec<Vec<Entry>> = t
            .graph()
            .basis()
            .column_iter()
            .map(|col| {
                col.iter()
                    .map(|z| match field {
                        Field::Real => Entry::Real(z.re),
                        Field::Complex => Entry::Complex([z.re, z.im]),
                    })
                    .collect()
            })
            .collect();
        // One vector per line keeps documents diffable.
        let mut out = String::from("{\n");
        out += &format!("  \"field\": {},\n", json(&field));
        out += &format!("  \"dim_h\": {},\n  \"dim_k\": {},\n", t.dim_h(), t.dim_k());
        if t.tol() != DEFAULT_TOL {
            out += &format!("  \"tol\": {},\n", json(&t.tol()));
        }
        let rows: Vec<String> = gens.iter().map(|g| format!("    {}", json(g))).collect();
        if rows.is_empty() {
            out += "  \"generators\": []";
        } else {
            out += &format!("  \"generators\": [\n{}\n  ]", rows.join(",\n"));
        }
        if !self.chain.is_empty() {
            let meta = Metadata { chain: self.chain.clone() };
            out += &format!(",\n  \"metadata\": {}", json(&meta));
        }
        out += "\n}\n";
        out
    }
}

fn json<T: Serialize + ?Sized>(v: &T) -> String {
    serde_json::to_string(v).expect("documents serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::hus_constant;

    #[test]
    fn graph_of_form() {
        let doc = RelationDocument::parse(r#"{"field": "real", "dim_h": 2, "dim_k": 2, "graph_of": [[2, 0], [0, 0]]}"#).unwrap();
        let m = hus_constant(&doc.relation);
        assert!((m - 0.5).abs() < 1e-15, "{m}");
    }

    #[test]
    fn complex_generators_and_parts() {
        let text = r#"{
            "field": "complex", "dim_h": 1, "dim_k": 2,
            "generators": [[1, [0, 1], 0], [0, 0, [2, 0]]],
            "metadata": {"chain": ["hand"]}
        }"#;
        let doc = RelationDocument::parse(text).unwrap();
        assert_eq!(doc.relation.part_dims(), (1, 2, 0, 1));
        assert_eq!(doc.chain, vec!["hand".to_string()]);
        let parts = r#"{"field": "real", "dim_h": 2, "dim_k": 2,
            "parts": {"domain_basis": [[1, 1]], "operator": [[2, 0]], "mul": [[0, 1]]}}"#;
        let t = RelationDocument::parse(parts).unwrap().relation;
        assert_eq!(t.part_dims(), (1, 2, 0, 1));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"field": "complex", "dim_h": 2, "dim_k": 3, "tol": 1e-9,
            "graph_of": [[1, [0, 2]], [0, 0.1], [[3, -1], 1]], "metadata": {"chain": ["a", "b"]}}"#;
        let doc = RelationDocument::parse(text).unwrap();
        let back = RelationDocument::parse(&doc.to_json()).unwrap();
        assert!(doc.relation.equals(&back.relation, 1e-12).unwrap());
        assert_eq!(back.relation.tol(), 1e-9);
        assert_eq!(back.chain, doc.chain);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let err = |t: &str| RelationDocument::parse(t).unwrap_err().to_string();
        let e = err("{\"field\": \"real\",\n \"dim_h\": 2,\n \"dim_k\": 1,\n \"graph_of\": [[1, 2, 3]]}");
        assert!(e.contains("line 4") && e.contains("graph_of") && e.contains("expected dim_h = 2"), "{e}");
        let e = err("{\"field\": \"real\", \"dim_h\": 0, \"dim_k\": 1, \"graph_of\": [[1]]}");
        assert!(e.contains("dim_h"), "{e}");
        let e = err("{\"field\": \"real\", \"dim_h\": 1, \"dim_k\": 1, \"graph_of\": [[[1, 1]]]}");
        assert!(e.contains("complex entry"), "{e}");
        let e = err("{\"field\": \"real\", \"dim_h\": 1,\n \"dim_k\": 1, \"graf\": [[1]]}");
        assert!(e.contains("line 2") && e.contains("graf"), "{e}");
        assert!(err("{\"field\": \"real\", \"dim_h\": 1, \"dim_k\": 1}").contains("exactly one"));
        let e = err("{\"field\": \"real\", \"dim_h\": 1, \"dim_k\": 1, \"generators\": [[1]]}");
        assert!(e.contains("generators") && e.contains("expected 2"), "{e}");
    }
}
