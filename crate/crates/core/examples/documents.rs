//! Relation documents and deterministic reports.
//!
//! ```bash
//! cargo run --example documents
//! ```

use relcalc::decomposition::hus_constant;
use relcalc::report::{Format, Report};
use relcalc::RelationDocument;

fn main() -> relcalc::Result<()> {
    let text = r#"{
        "field": "complex",
        "dim_h": 2,
        "dim_k": 2,
        "graph_of": [[1, [0, 2]], [0, 0]],
        "metadata": {"chain": ["written by hand"]}
    }"#;
    let doc = RelationDocument::parse(text)?;
    println!("{}", doc.to_json());

    let back = RelationDocument::parse(&doc.to_json())?;
    println!("round trip preserves the relation: {}", back.relation.equals(&doc.relation, 1e-12)?);

    let mut report = Report::new("documents example", doc.relation.tol());
    report.input("inline", text.as_bytes());
    report.results.insert("M_T", hus_constant(&doc.relation));
    print!("{}", report.render(Format::Machine));
    Ok(())
}
