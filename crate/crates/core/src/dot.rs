//! Graphviz export.
//!
//! Nodes are named `P<id>`. The reflexive diagonal is never drawn. When a
//! valuation is supplied each label carries the node's value; when contexts
//! are supplied each becomes a `cluster_<k>` subgraph.

use std::fmt::Write;

use crate::powergraph::{Context, PowerGraph};
use crate::psa::Psa;

pub fn to_dot(g: &PowerGraph, psa: Option<&Psa>, contexts: Option<&[Context]>) -> String {
    let mut out = String::from("graph G {\n");
    for id in 0..g.len() {
        match psa.and_then(|p| p.value(id).ok()) {
            Some(v) => writeln!(out, "  P{id} [label=\"P{id} ({v:.6})\"];").unwrap(),
            None => writeln!(out, "  P{id};").unwrap(),
        }
    }
    for (a, b) in g.edges() {
        writeln!(out, "  P{a} -- P{b};").unwrap();
    }
    for (k, ctx) in contexts.unwrap_or(&[]).iter().enumerate() {
        writeln!(out, "  subgraph cluster_{k} {{").unwrap();
        writeln!(out, "    label=\"C{k}\";").unwrap();
        for id in &ctx.node_ids {
            writeln!(out, "    P{id};").unwrap();
        }
        out.push_str("  }\n");
    }
    out.push_str("}\n");
    out
}
