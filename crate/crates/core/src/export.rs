//! Deterministic DOT, apx and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use crate::akg::{Akg, AkgEdge, AkgNodeKind, EdgeKind};
use crate::attributes::AttributeBox;
use crate::ids::natural_cmp;
use crate::kb_graph::{KbEdgeKind, KbGraph, KbNodeKind};
use crate::semantics::AfProjection;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DotOptions {
    /// Render pruned support edges, dashed and grey.
    pub show_pruned: bool,
}

pub fn dot_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => {}
            c => out.push(c),
        }
    }
    out
}

struct DotNode<'a> {
    id: &'a str,
    label: String,
    shape: &'static str,
    implicit: bool,
    attributes: &'a AttributeBox,
}

fn write_graph(name: &str, mut nodes: Vec<DotNode<'_>>, edges: Vec<(String, String, String)>) -> String {
    nodes.sort_by(|a, b| natural_cmp(a.id, b.id));
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", dot_escape(name)).unwrap();
    if !nodes.is_empty() || !edges.is_empty() {
        writeln!(out, "  rankdir=TB;").unwrap();
        writeln!(out, "  node [fontname=\"Helvetica\", fontsize=10];").unwrap();
        writeln!(out, "  edge [fontname=\"Helvetica\", fontsize=9];").unwrap();
    }
    for n in &nodes {
        let style = if n.implicit { "dotted" } else { "solid" };
        writeln!(
            out,
            "  \"{}\" [label=\"{}\", shape={}, style={}];",
            dot_escape(n.id),
            dot_escape(&n.label),
            n.shape,
            style
        )
        .unwrap();
        writeln!(
            out,
            "  \"{}::attrs\" [label=\"{}\", shape=note, fontsize=8];",
            dot_escape(n.id),
            dot_escape(&n.attributes.to_string())
        )
        .unwrap();
        writeln!(out, "  \"{0}\" -> \"{0}::attrs\" [dir=none, style=dotted, color=gray50];", dot_escape(n.id)).unwrap();
    }
    for (s, t, attrs) in edges {
        writeln!(out, "  \"{}\" -> \"{}\" [{}];", dot_escape(&s), dot_escape(&t), attrs).unwrap();
    }
    out.push_str("}\n");
    out
}

fn short_label(id: &str, text: &str) -> String {
    const MAX: usize = 60;
    let text = crate::text::normalize_ws(text);
    let clipped: String = text.chars().take(MAX).collect();
    let ellipsis = if text.chars().count() > MAX { "…" } else { "" };
    format!("{id}: {clipped}{ellipsis}")
}

pub fn export_kb_dot(kb: &KbGraph) -> String {
    let nodes = kb
        .nodes
        .iter()
        .map(|n| DotNode {
            id: n.id.as_str(),
            label: short_label(n.id.as_str(), &n.text),
            shape: match n.kind {
                KbNodeKind::InferenceRulePremise => "hexagon",
                _ => "box",
            },
            implicit: n.kind == KbNodeKind::ImplicitPremise,
            attributes: &n.attributes,
        })
        .collect();
    let mut edges: Vec<_> = kb.edges.iter().collect();
    edges.sort_by(|a, b| {
        natural_cmp(a.source.as_str(), b.source.as_str())
            .then_with(|| natural_cmp(a.target.as_str(), b.target.as_str()))
            .then_with(|| a.kind.cmp(&b.kind))
    });
    let edges = edges
        .into_iter()
        .map(|e| {
            let attrs = match e.kind {
                KbEdgeKind::Support => "label=\"agreement\", color=darkgreen",
                KbEdgeKind::Attack => "label=\"contrary\", color=red, arrowhead=tee",
            };
            (e.source.to_string(), e.target.to_string(), attrs.to_string())
        })
        .collect();
    write_graph(&format!("{}_kb", kb.doc_id), nodes, edges)
}

fn akg_edge_attrs(e: &AkgEdge) -> String {
    match e.kind {
        EdgeKind::Support => "color=darkgreen".to_string(),
        EdgeKind::Attack => format!(
            "label=\"{}\", color=red, arrowhead=tee",
            e.attack_type.map(|t| t.to_string()).unwrap_or_default()
        ),
        EdgeKind::ModusPonens => format!("color=blue, style=bold, arrowhead=empty, group=\"mp{}\"", e.mp_group.unwrap_or(0)),
    }
}

pub fn export_akg_dot(akg: &Akg, options: DotOptions) -> String {
    let nodes = akg
        .nodes
        .iter()
        .map(|n| DotNode {
            id: &n.arg_id,
            label: short_label(&n.arg_id, &n.text),
            shape: match n.kind {
                AkgNodeKind::Premise | AkgNodeKind::ImplicitPremise => "box",
                AkgNodeKind::InferenceRulePremise => "hexagon",
                AkgNodeKind::Conclusion | AkgNodeKind::ImplicitConclusion => "ellipse",
            },
            implicit: n.kind.is_implicit(),
            attributes: &n.attributes,
        })
        .collect();
    let mut edges: Vec<(String, String, String)> =
        akg.edges.iter().map(|e| (e.source.clone(), e.target.clone(), akg_edge_attrs(e))).collect();
    if options.show_pruned {
        edges.extend(
            akg.prune_log.iter().map(|e| (e.source.clone(), e.target.clone(), "color=gray60, style=dashed".to_string())),
        );
    }
    edges.sort_by(|a, b| natural_cmp(&a.0, &b.0).then_with(|| natural_cmp(&a.1, &b.1)).then_with(|| a.2.cmp(&b.2)));
    write_graph(&format!("{}_akg", akg.doc_id), nodes, edges)
}

/// `arg(x).` and `att(x,y).` facts with lowercased ids, sorted.
pub fn export_apx(af: &AfProjection) -> String {
    let mut args: Vec<&String> = af.args.iter().collect();
    args.sort_by(|a, b| natural_cmp(a, b));
    let mut atts: Vec<&(String, String)> = af.atts.iter().collect();
    atts.sort_by(|x, y| natural_cmp(&x.0, &y.0).then_with(|| natural_cmp(&x.1, &y.1)));
    let mut out = String::new();
    for a in args {
        writeln!(out, "arg({}).", a.to_lowercase()).unwrap();
    }
    for (a, b) in atts {
        writeln!(out, "att({},{}).", a.to_lowercase(), b.to_lowercase()).unwrap();
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}
