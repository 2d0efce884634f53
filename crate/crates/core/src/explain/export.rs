use std::fmt::Write;

use serde::Serialize;

use super::network::{LiftedRbmNetwork, PathSource};
use crate::error::Result;
use crate::scalar::Scalar;

pub const NETWORK_FORMAT: &str = "lrbm-network";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Text,
    Json,
}

pub fn export<T: Scalar>(net: &LiftedRbmNetwork<T>, format: ExportFormat) -> Result<String> {
    Ok(match format {
        ExportFormat::Dot => network_to_dot(net),
        ExportFormat::Text => network_to_text(net),
        ExportFormat::Json => network_to_json(net)?,
    })
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn theta<T: Scalar>(p: &crate::rrt::LeafParams<T>) -> String {
    let [d, c, w, u0, u1] = p.to_array();
    format!("d={d:.4} c={c:.4} W={w:.4} U0={u0:.4} U1={u1:.4}")
}

/// Graphviz rendering: visible units at the bottom, one vertex per hidden
/// clause, the two output units at the top.
pub fn network_to_dot<T: Scalar>(net: &LiftedRbmNetwork<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph lrbm {{");
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [fontname=\"Helvetica\"];");
    let _ = writeln!(out, "  {{ rank=same;");
    for (i, p) in net.visible.iter().enumerate() {
        let _ = writeln!(out, "    v{i} [shape=box, label=\"{}\"];", escape(&p.to_string()));
    }
    let _ = writeln!(out, "  }}");
    for (i, h) in net.hidden.iter().enumerate() {
        let _ = writeln!(
            out,
            "  h{i} [shape=ellipse, label=\"h{i}: {}\\n{}\"];",
            escape(&h.clause.to_string()),
            theta(&h.params)
        );
    }
    let target = escape(&net.target.name().to_string());
    let _ = writeln!(out, "  {{ rank=same;");
    let _ = writeln!(out, "    y1 [shape=doublecircle, label=\"{target} = 1\"];");
    let _ = writeln!(out, "    y0 [shape=doublecircle, label=\"{target} = 0\"];");
    let _ = writeln!(out, "  }}");
    for (v, h) in &net.edges {
        let _ = writeln!(out, "  v{v} -> h{h} [dir=none];");
    }
    for (i, h) in net.hidden.iter().enumerate() {
        let _ = writeln!(out, "  h{i} -> y1 [label=\"{:.4}\"];", h.params.u1);
        let _ = writeln!(out, "  h{i} -> y0 [label=\"{:.4}\"];", h.params.u0);
    }
    let _ = writeln!(out, "}}");
    out
}

/// Hidden ids ordered by `|U1 - U0|`, largest first, ties by id.
pub fn influence_order<T: Scalar>(net: &LiftedRbmNetwork<T>) -> Vec<usize> {
    let mut ids: Vec<usize> = (0..net.hidden.len()).collect();
    let key = |i: usize| (net.hidden[i].params.u1 - net.hidden[i].params.u0).abs();
    ids.sort_by(|&a, &b| key(b).partial_cmp(&key(a)).unwrap_or(std::cmp::Ordering::Equal));
    ids
}

/// One line per hidden clause, most influential first.
pub fn network_to_text<T: Scalar>(net: &LiftedRbmNetwork<T>) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} hidden, {} visible, {} edges, psi0 = {}",
        net.hidden.len(),
        net.visible.len(),
        net.edges.len(),
        net.psi0
    );
    let _ = writeln!(out, "# id\t|U1-U0|\tv(theta)\tsource\tclause");
    for i in influence_order(net) {
        let h = &net.hidden[i];
        let source = match h.source {
            Some(PathSource { tree, path }) => format!("tree {tree} path {path}"),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "h{i}\t{:.6}\t{:.6}\t{source}\t{}",
            (h.params.u1 - h.params.u0).abs(),
            h.params.potential(),
            h.clause
        );
    }
    out
}

#[derive(Serialize)]
struct HiddenDoc<'a, T> {
    id: usize,
    clause: String,
    source: Option<&'a PathSource>,
    params: [T; 5],
    potential: T,
    visible: Vec<usize>,
}

#[derive(Serialize)]
struct NetworkDoc<'a, T> {
    format: &'static str,
    version: u32,
    target: String,
    psi0: T,
    psi_clamp: T,
    visible: Vec<String>,
    hidden: Vec<HiddenDoc<'a, T>>,
    edges: &'a [(usize, usize)],
}

pub fn network_to_json<T: Scalar>(net: &LiftedRbmNetwork<T>) -> Result<String> {
    let doc = NetworkDoc {
        format: NETWORK_FORMAT,
        version: 1,
        target: net.target.to_string(),
        psi0: net.psi0,
        psi_clamp: net.psi_clamp,
        visible: net.visible.iter().map(ToString::to_string).collect(),
        hidden: net
            .hidden
            .iter()
            .enumerate()
            .map(|(id, h)| HiddenDoc {
                id,
                clause: h.clause.to_string(),
                source: h.source.as_ref(),
                params: h.params.to_array(),
                potential: h.params.potential(),
                visible: net.edges.iter().filter(|(_, hh)| *hh == id).map(|(v, _)| *v).collect(),
            })
            .collect(),
        edges: &net.edges,
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}
