//! Deterministic reports: sorted keys, floats as `%.12e`, no timestamps.

use std::collections::BTreeMap;
use std::fmt::Write;

use sha2::{Digest, Sha256};

use crate::linalg::fmt_sci;
use crate::stability::{Verdict, Verdicts};

/// A JSON-like value whose rendering is fixed byte for byte.
#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    /// Rendered as `%.12e`; non-finite values become the strings `"inf"`, `"-inf"`, `"nan"`.
    Num(f64),
    Str(String),
    List(Vec<Node>),
    Map(BTreeMap<String, Node>),
}

impl From<bool> for Node {
    fn from(b: bool) -> Self {
        Node::Bool(b)
    }
}

impl From<usize> for Node {
    fn from(n: usize) -> Self {
        Node::Int(n as i64)
    }
}

impl From<u64> for Node {
    fn from(n: u64) -> Self {
        // Seeds beyond i64 are kept exact as strings.
        i64::try_from(n).map_or_else(|_| Node::Str(n.to_string()), Node::Int)
    }
}

impl From<f64> for Node {
    fn from(x: f64) -> Self {
        Node::Num(x)
    }
}

impl From<&str> for Node {
    fn from(s: &str) -> Self {
        Node::Str(s.to_string())
    }
}

impl From<String> for Node {
    fn from(s: String) -> Self {
        Node::Str(s)
    }
}

impl<T: Into<Node>> From<Vec<T>> for Node {
    fn from(v: Vec<T>) -> Self {
        Node::List(v.into_iter().map(Into::into).collect())
    }
}

impl<T: Into<Node>> From<Option<T>> for Node {
    fn from(v: Option<T>) -> Self {
        v.map_or(Node::Null, Into::into)
    }
}

impl From<&Verdict> for Node {
    fn from(v: &Verdict) -> Self {
        let mut m = BTreeMap::new();
        m.insert("holds".into(), v.holds.into());
        m.insert("value".into(), v.value.into());
        m.insert("threshold".into(), v.threshold.into());
        m.insert("margin".into(), v.margin().into());
        m.insert("detail".into(), v.detail.clone().into());
        Node::Map(m)
    }
}

/// Builder for a map node.
#[derive(Clone, Debug, Default)]
pub struct Fields(BTreeMap<String, Node>);

impl Fields {
    pub fn new() -> Self {
        Fields::default()
    }

    pub fn set(mut self, key: &str, value: impl Into<Node>) -> Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn insert(&mut self, key: &str, value: impl Into<Node>) {
        self.0.insert(key.to_string(), value.into());
    }

    pub fn merge(&mut self, other: Fields) {
        self.0.extend(other.0);
    }
}

impl From<Fields> for Node {
    fn from(f: Fields) -> Self {
        Node::Map(f.0)
    }
}

fn scalar(node: &Node) -> Option<String> {
    Some(match node {
        Node::Null => "null".into(),
        Node::Bool(b) => b.to_string(),
        Node::Int(i) => i.to_string(),
        Node::Num(x) if x.is_finite() => fmt_sci(*x),
        Node::Num(x) => serde_json::to_string(&fmt_sci(*x)).expect("string"),
        Node::Str(s) => serde_json::to_string(s).expect("string"),
        _ => return None,
    })
}

fn write_json(node: &Node, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent + 1);
    let close = "  ".repeat(indent);
    match node {
        Node::List(items) if items.is_empty() => out.push_str("[]"),
        Node::List(items) if items.iter().all(|i| scalar(i).is_some()) => {
            let parts: Vec<String> = items.iter().filter_map(scalar).collect();
            write!(out, "[{}]", parts.join(", ")).unwrap();
        }
        Node::List(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                write_json(item, indent + 1, out);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            write!(out, "{close}]").unwrap();
        }
        Node::Map(m) if m.is_empty() => out.push_str("{}"),
        Node::Map(m) => {
            out.push_str("{\n");
            for (i, (k, v)) in m.iter().enumerate() {
                write!(out, "{pad}{}: ", serde_json::to_string(k).expect("string")).unwrap();
                write_json(v, indent + 1, out);
                out.push_str(if i + 1 < m.len() { ",\n" } else { "\n" });
            }
            write!(out, "{close}}}").unwrap();
        }
        other => out.push_str(&scalar(other).expect("scalar")),
    }
}

fn write_text(node: &Node, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match node {
        Node::Map(m) => {
            for (k, v) in m {
                match v {
                    Node::Map(inner) if !inner.is_empty() => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        write_text(v, indent + 1, out);
                    }
                    Node::List(items) if items.iter().any(|i| scalar(i).is_none()) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        for (i, item) in items.iter().enumerate() {
                            writeln!(out, "{pad}  [{i}]").unwrap();
                            write_text(item, indent + 2, out);
                        }
                    }
                    _ => writeln!(out, "{pad}{k}: {}", text_scalar(v)).unwrap(),
                }
            }
        }
        other => writeln!(out, "{pad}{}", text_scalar(other)).unwrap(),
    }
}

fn text_scalar(node: &Node) -> String {
    match node {
        Node::Str(s) => s.clone(),
        Node::Num(x) => fmt_sci(*x),
        Node::List(items) => {
            let parts: Vec<String> = items.iter().map(text_scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Node::Map(_) => "{}".into(),
        other => scalar(other).expect("scalar"),
    }
}

/// Hex SHA-256 of the given bytes.
pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Clone, Debug)]
pub struct Report {
    /// The command line, echoed.
    pub command: String,
    /// Input name to SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub seed: Option<u64>,
    /// The effective rank tolerance.
    pub tol: f64,
    pub results: Fields,
    pub verdicts: Verdicts,
}

impl Report {
    pub fn new(command: impl Into<String>, tol: f64) -> Self {
        Report {
            command: command.into(),
            inputs: BTreeMap::new(),
            seed: None,
            tol,
            results: Fields::new(),
            verdicts: Verdicts::new(),
        }
    }

    pub fn input(&mut self, name: &str, bytes: &[u8]) {
        self.inputs.insert(name.to_string(), digest(bytes));
    }

    pub fn failures(&self) -> Vec<(&String, &Verdict)> {
        self.verdicts.iter().filter(|(_, v)| !v.holds).collect()
    }

    pub fn to_node(&self) -> Node {
        let verdicts = Node::Map(self.verdicts.iter().map(|(k, v)| (k.clone(), v.into())).collect());
        let inputs = Node::Map(self.inputs.iter().map(|(k, v)| (k.clone(), v.as_str().into())).collect());
        Fields::new()
            .set("command", self.command.as_str())
            .set("inputs_sha256", inputs)
            .set("seed", self.seed)
            .set("tol", self.tol)
            .set("version", env!("CARGO_PKG_VERSION"))
            .set("results", self.results.clone())
            .set("verdicts", verdicts)
            .set("all_hold", self.failures().is_empty())
            .into()
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Machine => {
                write_json(&self.to_node(), 0, &mut out);
                out.push('\n');
            }
            Format::Text => write_text(&self.to_node(), 0, &mut out),
        }
        out
    }
}
