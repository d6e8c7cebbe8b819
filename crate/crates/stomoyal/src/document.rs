//! Problem documents: a grid, named kernels, the variable atlas and named
//! functionals, in JSON or in the line-oriented block syntax.
//!
//! ```text
//! # block syntax
//! grid 2
//! kernel e = 1 1
//! var X = 1 e
//! var Y = 2 e
//! fun F = X^2*Y
//! metric flat
//! order auto
//! ```

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::de::{self, Deserializer, MapAccess, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::json;
use stomoyal_core::functional::is_identifier;
use stomoyal_core::prelude::*;
use stomoyal_core::scalar::format_rational;

use crate::diagnostics::{find_location, location_of, Code, Diagnostic, Location};
use crate::dsl::{parse_expression, Scope};

/// Name reserved for the deformation parameter in printed series.
pub const RESERVED_NAME: &str = "h";

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemDocument {
    pub grid_m: usize,
    pub kernels: IndexMap<String, Vec<Rational>>,
    pub variables: IndexMap<String, (Component, String)>,
    /// Expression sources, in declaration order.
    pub functionals: IndexMap<String, String>,
    pub metric: MetricProfile,
    pub hbar_order: Truncation,
}

/// A validated document with its atlas built and functionals parsed.
#[derive(Debug, Clone)]
pub struct Problem {
    pub document: ProblemDocument,
    pub atlas: Arc<VariableAtlas>,
    pub functionals: IndexMap<String, Polynomial>,
}

pub fn parse_metric(s: &str) -> Option<MetricProfile> {
    match s {
        "flat" => Some(MetricProfile::Flat),
        "phase" | "phase_space" => Some(MetricProfile::PHASE_SPACE),
        _ => None,
    }
}

pub fn parse_order(s: &str) -> Option<Truncation> {
    if s == "auto" {
        return Some(Truncation::Auto);
    }
    s.parse::<usize>().ok().map(Truncation::Order)
}

fn order_text(t: Truncation) -> String {
    match t {
        Truncation::Auto => "auto".into(),
        Truncation::Order(n) => n.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Raw form shared by both syntaxes

#[derive(Debug, Default)]
struct RawDoc {
    grid_m: Option<(String, Option<Location>)>,
    kernels: Vec<(String, Vec<String>, Option<Location>)>,
    variables: Vec<(String, String, String, Option<Location>)>,
    functionals: Vec<(String, String, Option<Location>)>,
    metric: Option<(String, Option<Location>)>,
    order: Option<(String, Option<Location>)>,
}

fn check_name(kind: &str, name: &str, loc: Option<Location>) -> Result<(), Diagnostic> {
    if !is_identifier(name) {
        return Err(Diagnostic::new(Code::InvalidName, format!("{kind} name {name:?} is not an identifier")).at(loc));
    }
    if name == RESERVED_NAME {
        return Err(Diagnostic::new(
            Code::InvalidName,
            format!("{kind} name {name:?} is reserved for the deformation parameter"),
        )
        .at(loc));
    }
    Ok(())
}

struct BuildScope<'a> {
    atlas: &'a Arc<VariableAtlas>,
    functionals: &'a IndexMap<String, Polynomial>,
}

impl Scope for BuildScope<'_> {
    fn atlas(&self) -> &Arc<VariableAtlas> {
        self.atlas
    }

    fn lookup(&self, name: &str) -> Option<Polynomial> {
        self.functionals.get(name).cloned().or_else(|| Polynomial::variable(self.atlas, name).ok())
    }
}

fn build(raw: RawDoc) -> Result<Problem, Diagnostic> {
    let (m_text, m_loc) =
        raw.grid_m.ok_or_else(|| Diagnostic::new(Code::Schema, "missing grid resolution \"grid_m\""))?;
    let grid_m = m_text.parse::<usize>().ok().filter(|&m| m >= 1).ok_or_else(|| {
        Diagnostic::new(Code::Schema, format!("grid_m must be a positive integer, got {m_text}")).at(m_loc)
    })?;

    let mut kernels: IndexMap<String, Vec<Rational>> = IndexMap::new();
    for (name, values, loc) in raw.kernels {
        check_name("kernel", &name, loc)?;
        if kernels.contains_key(&name) {
            return Err(Diagnostic::new(Code::Duplicate, format!("kernel {name:?} is defined twice")).at(loc));
        }
        if values.len() != grid_m {
            return Err(Diagnostic::new(
                Code::GridLength,
                format!("kernel {name:?} has {} values but grid_m = {grid_m}", values.len()),
            )
            .at(loc));
        }
        let parsed = values
            .iter()
            .map(|v| {
                parse_rational(v)
                    .map_err(|e| Diagnostic::new(Code::MalformedRational, format!("kernel {name:?}: {e}")).at(loc))
            })
            .collect::<Result<Vec<_>, _>>()?;
        kernels.insert(name, parsed);
    }

    let mut variables: IndexMap<String, (Component, String)> = IndexMap::new();
    let mut atlas_vars = Vec::new();
    for (name, comp, kernel, loc) in raw.variables {
        check_name("variable", &name, loc)?;
        if variables.contains_key(&name) {
            return Err(Diagnostic::new(Code::Duplicate, format!("variable {name:?} is declared twice")).at(loc));
        }
        let component = comp.parse::<u8>().ok().and_then(|c| Component::try_from(c).ok()).ok_or_else(|| {
            Diagnostic::new(Code::Schema, format!("variable {name:?}: component must be 1 or 2, got {comp}")).at(loc)
        })?;
        let values = kernels.get(&kernel).ok_or_else(|| {
            Diagnostic::new(Code::UnresolvedKernel, format!("variable {name:?} refers to undefined kernel {kernel:?}"))
                .at(loc)
        })?;
        let k = Kernel::new(values.clone(), grid_m).expect("kernel lengths were checked");
        atlas_vars.push(Variable::new(name.clone(), component, k));
        variables.insert(name, (component, kernel));
    }
    let atlas = VariableAtlas::new(grid_m, atlas_vars).map_err(|e| Diagnostic::new(Code::Schema, e.to_string()))?;

    let mut sources: IndexMap<String, String> = IndexMap::new();
    let mut functionals: IndexMap<String, Polynomial> = IndexMap::new();
    for (name, src, loc) in raw.functionals {
        check_name("functional", &name, loc)?;
        if functionals.contains_key(&name) || variables.contains_key(&name) {
            return Err(Diagnostic::new(Code::Duplicate, format!("name {name:?} is defined twice")).at(loc));
        }
        let scope = BuildScope { atlas: &atlas, functionals: &functionals };
        let p = parse_expression(&src, &scope).map_err(|mut d| {
            d.message = format!("functional {name:?}: {}", d.message);
            d.at(loc)
        })?;
        functionals.insert(name.clone(), p);
        sources.insert(name, src);
    }

    let metric = match raw.metric {
        None => MetricProfile::Flat,
        Some((s, loc)) => parse_metric(&s).ok_or_else(|| {
            Diagnostic::new(Code::Schema, format!("metric must be \"flat\" or \"phase_space\", got {s:?}")).at(loc)
        })?,
    };
    let hbar_order = match raw.order {
        None => Truncation::Auto,
        Some((s, loc)) => parse_order(&s).ok_or_else(|| {
            Diagnostic::new(Code::Schema, format!("hbar_order must be a nonnegative integer or \"auto\", got {s}"))
                .at(loc)
        })?,
    };

    let document = ProblemDocument { grid_m, kernels, variables, functionals: sources, metric, hbar_order };
    Ok(Problem { document, atlas, functionals })
}

// ---------------------------------------------------------------------------
// JSON

/// JSON tree that keeps duplicate object keys, which `serde_json::Value`
/// would silently merge.
#[derive(Debug, Clone)]
enum Node {
    Null,
    Bool,
    Number(serde_json::Number),
    String(String),
    Array(Vec<Node>),
    Object(Vec<(String, Node)>),
}

impl Node {
    fn kind(&self) -> &'static str {
        match self {
            Node::Null => "null",
            Node::Bool => "a boolean",
            Node::Number(_) => "a number",
            Node::String(_) => "a string",
            Node::Array(_) => "an array",
            Node::Object(_) => "an object",
        }
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Node;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON value")
            }
            fn visit_unit<E>(self) -> Result<Node, E> {
                Ok(Node::Null)
            }
            fn visit_bool<E>(self, _: bool) -> Result<Node, E> {
                Ok(Node::Bool)
            }
            fn visit_i64<E>(self, v: i64) -> Result<Node, E> {
                Ok(Node::Number(v.into()))
            }
            fn visit_u64<E>(self, v: u64) -> Result<Node, E> {
                Ok(Node::Number(v.into()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Node, E> {
                serde_json::Number::from_f64(v).map(Node::Number).ok_or_else(|| E::custom("non-finite number"))
            }
            fn visit_str<E>(self, v: &str) -> Result<Node, E> {
                Ok(Node::String(v.to_string()))
            }
            fn visit_string<E>(self, v: String) -> Result<Node, E> {
                Ok(Node::String(v))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Node, A::Error> {
                let mut out = Vec::new();
                while let Some(n) = seq.next_element()? {
                    out.push(n);
                }
                Ok(Node::Array(out))
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Node, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, Node>()? {
                    out.push((k, v));
                }
                Ok(Node::Object(out))
            }
        }
        d.deserialize_any(V)
    }
}

struct JsonWalker<'a> {
    text: &'a str,
}

impl JsonWalker<'_> {
    /// Best-effort location of the `nth` occurrence of a quoted key.
    fn key_loc(&self, key: &str, nth: usize) -> Option<Location> {
        let quoted = serde_json::to_string(key).unwrap_or_default();
        find_location(self.text, &quoted, nth)
    }

    fn object<'n>(&self, node: &'n Node, what: &str) -> Result<&'n [(String, Node)], Diagnostic> {
        match node {
            Node::Object(entries) => {
                for (i, (k, _)) in entries.iter().enumerate() {
                    if entries[..i].iter().any(|(k2, _)| k2 == k) {
                        return Err(Diagnostic::new(Code::Duplicate, format!("key {k:?} appears twice in {what}"))
                            .at(self.key_loc(k, 1)));
                    }
                }
                Ok(entries)
            }
            other => Err(Diagnostic::new(Code::Schema, format!("{what} must be an object, found {}", other.kind()))),
        }
    }

    fn scalar_text(node: &Node) -> Option<String> {
        match node {
            Node::Number(n) => Some(n.to_string()),
            Node::String(s) => Some(s.clone()),
            _ => None,
        }
    }

    fn walk(&self, root: &Node) -> Result<RawDoc, Diagnostic> {
        let mut raw = RawDoc::default();
        let entries = self.object(root, "the document")?;
        for (key, value) in entries {
            let loc = self.key_loc(key, 0);
            let schema = |msg: String| Diagnostic::new(Code::Schema, msg).at(loc);
            match key.as_str() {
                "grid_m" => match value {
                    Node::Number(n) => raw.grid_m = Some((n.to_string(), loc)),
                    other => return Err(schema(format!("grid_m must be an integer, found {}", other.kind()))),
                },
                "kernels" => {
                    for (name, vals) in self.object(value, "\"kernels\"")? {
                        let kloc = self.key_loc(name, 0);
                        let Node::Array(items) = vals else {
                            return Err(Diagnostic::new(
                                Code::Schema,
                                format!("kernel {name:?} must be an array of rationals, found {}", vals.kind()),
                            )
                            .at(kloc));
                        };
                        let texts = items
                            .iter()
                            .map(|v| {
                                Self::scalar_text(v).ok_or_else(|| {
                                    Diagnostic::new(
                                        Code::MalformedRational,
                                        format!("kernel {name:?}: expected \"p/q\" or an integer, found {}", v.kind()),
                                    )
                                    .at(kloc)
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        raw.kernels.push((name.clone(), texts, kloc));
                    }
                }
                "variables" => {
                    for (name, spec) in self.object(value, "\"variables\"")? {
                        let vloc = self.key_loc(name, 0);
                        match spec {
                            Node::Array(items) if items.len() == 2 => {
                                let Node::Number(c) = &items[0] else {
                                    return Err(Diagnostic::new(
                                        Code::Schema,
                                        format!("variable {name:?}: component must be 1 or 2"),
                                    )
                                    .at(vloc));
                                };
                                let Node::String(k) = &items[1] else {
                                    return Err(Diagnostic::new(
                                        Code::Schema,
                                        format!("variable {name:?}: kernel must be given by name"),
                                    )
                                    .at(vloc));
                                };
                                raw.variables.push((name.clone(), c.to_string(), k.clone(), vloc));
                            }
                            _ => {
                                return Err(Diagnostic::new(
                                    Code::Schema,
                                    format!("variable {name:?} must be [component, kernel]"),
                                )
                                .at(vloc))
                            }
                        }
                    }
                }
                "functionals" => {
                    for (name, src) in self.object(value, "\"functionals\"")? {
                        let floc = self.key_loc(name, 0);
                        let Node::String(s) = src else {
                            return Err(Diagnostic::new(
                                Code::Schema,
                                format!("functional {name:?} must be an expression string, found {}", src.kind()),
                            )
                            .at(floc));
                        };
                        raw.functionals.push((name.clone(), s.trim().to_string(), floc));
                    }
                }
                "metric" => match value {
                    Node::String(s) => raw.metric = Some((s.clone(), loc)),
                    other => return Err(schema(format!("metric must be a string, found {}", other.kind()))),
                },
                "hbar_order" => match value {
                    Node::Number(n) => raw.order = Some((n.to_string(), loc)),
                    Node::String(s) if s == "auto" => raw.order = Some((s.clone(), loc)),
                    other => {
                        return Err(schema(format!(
                            "hbar_order must be an integer or \"auto\", found {}",
                            other.kind()
                        )))
                    }
                },
                other => return Err(schema(format!("unknown field {other:?}"))),
            }
        }
        for required in ["grid_m", "kernels", "variables"] {
            if !entries.iter().any(|(k, _)| k == required) {
                return Err(Diagnostic::new(Code::Schema, format!("missing required field {required:?}")));
            }
        }
        Ok(raw)
    }
}

fn parse_json(text: &str) -> Result<RawDoc, Diagnostic> {
    let root: Node = serde_json::from_str(text).map_err(|e| {
        Diagnostic::new(Code::JsonSyntax, format!("invalid JSON: {}", strip_position(&e.to_string())))
            .at(Some(Location { line: e.line(), column: e.column().max(1) }))
    })?;
    JsonWalker { text }.walk(&root)
}

fn strip_position(msg: &str) -> &str {
    msg.find(" at line ").map_or(msg, |i| &msg[..i])
}

// ---------------------------------------------------------------------------
// Block syntax

fn parse_block(text: &str) -> Result<RawDoc, Diagnostic> {
    let mut raw = RawDoc::default();
    let mut offset = 0;
    for (lineno, line) in text.split('\n').enumerate() {
        let line_start = offset;
        offset += line.len() + 1;
        let content = line.split('#').next().unwrap_or("").trim_end();
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = content.len() - trimmed.len();
        let loc = Some(location_of(text, line_start + indent));
        let syntax = |msg: String| Diagnostic::new(Code::BlockSyntax, msg).at(loc);
        let (keyword, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest = rest.trim();
        let definition = |rest: &str| -> Result<(String, String), Diagnostic> {
            let (name, body) = rest
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected `{keyword} <name> = ...` on line {}", lineno + 1)))?;
            Ok((name.trim().to_string(), body.trim().to_string()))
        };
        let single = |slot: &Option<(String, Option<Location>)>| -> Result<String, Diagnostic> {
            if slot.is_some() {
                return Err(Diagnostic::new(Code::Duplicate, format!("`{keyword}` is given twice")).at(loc));
            }
            if rest.is_empty() || rest.contains(char::is_whitespace) {
                return Err(syntax(format!("`{keyword}` takes exactly one value")));
            }
            Ok(rest.to_string())
        };
        match keyword {
            "grid" => raw.grid_m = Some((single(&raw.grid_m)?, loc)),
            "metric" => raw.metric = Some((single(&raw.metric)?, loc)),
            "order" => raw.order = Some((single(&raw.order)?, loc)),
            "kernel" => {
                let (name, body) = definition(rest)?;
                raw.kernels.push((name, body.split_whitespace().map(str::to_string).collect(), loc));
            }
            "var" => {
                let (name, body) = definition(rest)?;
                let parts: Vec<&str> = body.split_whitespace().collect();
                let [comp, kernel] = parts[..] else {
                    return Err(syntax(format!("expected `var {name} = <component> <kernel>`")));
                };
                raw.variables.push((name, comp.to_string(), kernel.to_string(), loc));
            }
            "fun" => {
                let (name, body) = definition(rest)?;
                raw.functionals.push((name, body, loc));
            }
            other => return Err(syntax(format!("unknown directive {other:?}"))),
        }
    }
    Ok(raw)
}

// ---------------------------------------------------------------------------

/// Parses and validates a document; JSON when the first non-blank character is
/// `{`, block syntax otherwise.
pub fn load_problem(text: &str) -> Result<Problem, Diagnostic> {
    let raw = if text.trim_start().starts_with('{') { parse_json(text)? } else { parse_block(text)? };
    build(raw)
}

pub fn parse_document(text: &str) -> Result<ProblemDocument, Diagnostic> {
    load_problem(text).map(|p| p.document)
}

impl ProblemDocument {
    /// Validates the document and builds its atlas and functionals.
    pub fn resolve(&self) -> Result<Problem, Diagnostic> {
        let raw = RawDoc {
            grid_m: Some((self.grid_m.to_string(), None)),
            kernels: self
                .kernels
                .iter()
                .map(|(n, v)| (n.clone(), v.iter().map(format_rational).collect(), None))
                .collect(),
            variables: self
                .variables
                .iter()
                .map(|(n, (c, k))| (n.clone(), c.index().to_string(), k.clone(), None))
                .collect(),
            functionals: self.functionals.iter().map(|(n, s)| (n.clone(), s.clone(), None)).collect(),
            metric: Some((self.metric.name().to_string(), None)),
            order: Some((order_text(self.hbar_order), None)),
        };
        build(raw)
    }

    /// Canonical JSON form, with rationals as reduced `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        let kernels: serde_json::Map<_, _> = self
            .kernels
            .iter()
            .map(|(n, v)| (n.clone(), json!(v.iter().map(format_rational).collect::<Vec<_>>())))
            .collect();
        let variables: serde_json::Map<_, _> =
            self.variables.iter().map(|(n, (c, k))| (n.clone(), json!([c.index(), k]))).collect();
        let hbar_order = match self.hbar_order {
            Truncation::Auto => json!("auto"),
            Truncation::Order(n) => json!(n),
        };
        json!({
            "grid_m": self.grid_m,
            "kernels": kernels,
            "variables": variables,
            "functionals": self.functionals,
            "metric": self.metric.name(),
            "hbar_order": hbar_order,
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("documents serialize");
        s.push('\n');
        s
    }

    /// Canonical block-syntax form.
    pub fn to_block_string(&self) -> String {
        let mut out = format!("grid {}\n", self.grid_m);
        for (n, v) in &self.kernels {
            let vals: Vec<String> = v.iter().map(format_rational).collect();
            out.push_str(&format!("kernel {n} = {}\n", vals.join(" ")));
        }
        for (n, (c, k)) in &self.variables {
            out.push_str(&format!("var {n} = {c} {k}\n"));
        }
        for (n, s) in &self.functionals {
            out.push_str(&format!("fun {n} = {s}\n"));
        }
        out.push_str(&format!("metric {}\n", self.metric.name()));
        out.push_str(&format!("order {}\n", order_text(self.hbar_order)));
        out
    }
}

impl Problem {
    /// A command argument: a functional name first, otherwise an expression
    /// over the variables and functionals.
    pub fn resolve_argument(&self, arg: &str) -> Result<Polynomial, Diagnostic> {
        let arg = arg.trim();
        if let Some(p) = self.functionals.get(arg) {
            return Ok(p.clone());
        }
        if is_identifier(arg) && self.atlas.index_of(arg).is_none() {
            return Err(Diagnostic::new(Code::UnknownFunctional, format!("unknown functional {arg:?}")));
        }
        parse_expression(arg, &BuildScope { atlas: &self.atlas, functionals: &self.functionals })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{"grid_m": 2, "kernels": {"e": ["1", "1"]}, "variables": {"X": [1, "e"], "Y": [2, "e"]}}"#;

    #[test]
    fn minimal_document() {
        let p = load_problem(MINIMAL).unwrap();
        assert_eq!(p.atlas.len(), 2);
        assert_eq!(p.document.metric, MetricProfile::Flat);
        assert_eq!(p.document.hbar_order, Truncation::Auto);
    }

    #[test]
    fn block_and_json_agree() {
        let block = "grid 2\nkernel e = 1 1 # unit\nvar X = 1 e\nvar Y = 2 e\n";
        assert_eq!(parse_document(block).unwrap(), parse_document(MINIMAL).unwrap());
    }

    #[test]
    fn diagnostics_are_distinct() {
        let code = |t: &str| load_problem(t).unwrap_err().code;
        assert_eq!(code(&MINIMAL.replace(r#"[2, "e"]"#, r#"[2, "f"]"#)), Code::UnresolvedKernel);
        assert_eq!(code(&MINIMAL.replace(r#"["1", "1"]"#, r#"["1", "1", "1"]"#)), Code::GridLength);
        assert_eq!(code(&MINIMAL.replace(r#""1", "1""#, r#""1", "1/0""#)), Code::MalformedRational);
        assert_eq!(code(&MINIMAL.replace(r#""1", "1""#, r#""1", 0.5"#)), Code::MalformedRational);
        assert_eq!(code(&MINIMAL[..20]), Code::JsonSyntax);
        assert_eq!(code(&MINIMAL.replace(r#""Y""#, r#""X""#)), Code::Duplicate);
        assert_eq!(code(&MINIMAL.replace(r#""Y""#, r#""h""#)), Code::InvalidName);
        assert_eq!(code("grid 2\nkernal e = 1 1\n"), Code::BlockSyntax);
        let err = load_problem(&MINIMAL.replace(r#"[2, "e"]"#, r#"[2, "f"]"#)).unwrap_err();
        assert!(err.message.contains("\"f\""));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = load_problem("{\n  \"grid_m\": 2,\n  \"kernels\": {\"e\": [1 1]}\n}").unwrap_err();
        assert_eq!(err.code, Code::JsonSyntax);
        assert_eq!(err.location.map(|l| l.line), Some(3));
        let err = load_problem("grid 2\n\n   bogus").unwrap_err();
        assert_eq!(err.location, Some(Location { line: 3, column: 4 }));
    }

    #[test]
    fn arguments_resolve_names_then_expressions() {
        let text = MINIMAL.replace(r#""Y": [2, "e"]}"#, r#""Y": [2, "e"]}, "functionals": {"F": "X^2", "G": "F*Y"}"#);
        let p = load_problem(&text).unwrap();
        assert_eq!(p.resolve_argument("G").unwrap().to_string(), "X^2*Y");
        assert_eq!(p.resolve_argument("F + 1").unwrap().to_string(), "X^2 + 1");
        assert_eq!(p.resolve_argument("X").unwrap().to_string(), "X");
        assert_eq!(p.resolve_argument("Q").unwrap_err().code, Code::UnknownFunctional);
        assert_eq!(p.resolve_argument("Q + 1").unwrap_err().code, Code::UnresolvedVariable);
    }
}
