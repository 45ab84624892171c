//! Key-value report trees and their two text renderings.
//!
//! Floats are always printed as `{:.16e}` (17 significant digits), so a
//! report round-trips every `f64` exactly and is byte-stable.

use std::fmt::Write;
use zcone::Matrix;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    List(Vec<Node>),
    Map(Vec<(String, Node)>),
}

impl From<bool> for Node {
    fn from(v: bool) -> Self {
        Node::Bool(v)
    }
}

impl From<f64> for Node {
    fn from(v: f64) -> Self {
        Node::Num(v)
    }
}

impl From<usize> for Node {
    fn from(v: usize) -> Self {
        Node::Int(v as i64)
    }
}

impl From<u64> for Node {
    fn from(v: u64) -> Self {
        Node::Int(v as i64)
    }
}

impl From<&str> for Node {
    fn from(v: &str) -> Self {
        Node::Str(v.to_string())
    }
}

impl From<String> for Node {
    fn from(v: String) -> Self {
        Node::Str(v)
    }
}

impl From<&[f64]> for Node {
    fn from(v: &[f64]) -> Self {
        Node::List(v.iter().map(|x| Node::Num(*x)).collect())
    }
}

impl From<&Matrix> for Node {
    fn from(m: &Matrix) -> Self {
        Node::List((0..m.dim()).map(|i| Node::from(m.row(i))).collect())
    }
}

impl<T: Into<Node>> From<Option<T>> for Node {
    fn from(v: Option<T>) -> Self {
        v.map_or(Node::Null, Into::into)
    }
}

/// Ordered map builder.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MapBuilder(Vec<(String, Node)>);

impl MapBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn field(mut self, key: &str, value: impl Into<Node>) -> Self {
        self.0.push((key.to_string(), value.into()));
        self
    }

    pub fn build(self) -> Node {
        Node::Map(self.0)
    }
}

fn number(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        format!("\"{v}\"")
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn scalar(node: &Node) -> Option<String> {
    match node {
        Node::Null => Some("null".into()),
        Node::Bool(b) => Some(b.to_string()),
        Node::Int(i) => Some(i.to_string()),
        Node::Num(v) => Some(number(*v)),
        Node::Str(s) => Some(quote(s)),
        Node::List(items) if items.iter().all(|n| !matches!(n, Node::List(_) | Node::Map(_))) => {
            Some(format!(
                "[{}]",
                items.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")
            ))
        }
        _ => None,
    }
}

/// Indented JSON.
pub fn render_tree(node: &Node) -> String {
    let mut out = String::new();
    tree(node, 0, &mut out);
    out.push('\n');
    out
}

fn tree(node: &Node, depth: usize, out: &mut String) {
    if let Some(s) = scalar(node) {
        out.push_str(&s);
        return;
    }
    let pad = "  ".repeat(depth + 1);
    let (open, close, items): (char, char, Vec<(Option<&str>, &Node)>) = match node {
        Node::List(v) => ('[', ']', v.iter().map(|n| (None, n)).collect()),
        Node::Map(v) => ('{', '}', v.iter().map(|(k, n)| (Some(k.as_str()), n)).collect()),
        _ => unreachable!(),
    };
    if items.is_empty() {
        out.push(open);
        out.push(close);
        return;
    }
    out.push(open);
    out.push('\n');
    for (k, (key, child)) in items.iter().enumerate() {
        out.push_str(&pad);
        if let Some(key) = key {
            out.push_str(&quote(key));
            out.push_str(": ");
        }
        tree(child, depth + 1, out);
        if k + 1 < items.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(&"  ".repeat(depth));
    out.push(close);
}

/// One `path = value` line per leaf.
pub fn render_flat(node: &Node) -> String {
    let mut out = String::new();
    flat(node, "", &mut out);
    out
}

fn flat(node: &Node, path: &str, out: &mut String) {
    let join = |k: &str| {
        if path.is_empty() {
            k.to_string()
        } else {
            format!("{path}.{k}")
        }
    };
    match node {
        Node::Map(v) => v.iter().for_each(|(k, n)| flat(n, &join(k), out)),
        Node::List(v) if scalar(node).is_none() => v
            .iter()
            .enumerate()
            .for_each(|(i, n)| flat(n, &join(&i.to_string()), out)),
        _ => {
            let _ = writeln!(out, "{path} = {}", scalar(node).unwrap_or_default());
        }
    }
}
