//! Graphviz export: one cluster per state space with covering projections as
//! dashed edges, and possibility correspondences as labelled arrows.

use std::fmt::Write;

use crate::fh::model::FhModel;
use crate::hms::lattice::Lattice;
use crate::hms::model::Correspondence;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// `relations` pairs a label (such as `pi 1`) with one correspondence.
pub fn lattice_dot(l: &Lattice, relations: &[(String, &Correspondence)]) -> String {
    let mut s = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for space in l.space_indices() {
        let key = l.key(space);
        let _ = writeln!(s, "  subgraph {} {{", quote(&format!("cluster_{key}")));
        let _ = writeln!(s, "    label={};", quote(&format!("S{{{key}}}")));
        for st in l.states_in(space) {
            let _ = writeln!(s, "    {} [label={}];", quote(&l.label(st)), quote(l.state_name(st)));
        }
        s.push_str("  }\n");
    }
    for from in l.space_indices() {
        for x in from.iter() {
            let to = from.remove(x);
            for st in l.states_in(from) {
                let t = l.project(st, to).expect("below");
                let _ = writeln!(s, "  {} -> {} [style=dashed, arrowhead=none];", quote(&l.label(st)), quote(&l.label(t)));
            }
        }
    }
    for (name, corr) in relations {
        for st in 0..l.state_count() {
            for t in corr.image(st).ones() {
                let _ = writeln!(
                    s,
                    "  {} -> {} [label={}, constraint=false];",
                    quote(&l.label(st)),
                    quote(&l.label(t)),
                    quote(name)
                );
            }
        }
    }
    s.push_str("}\n");
    s
}

/// Worlds with an undirected edge per related pair and agent.
pub fn fh_dot(k: &FhModel) -> String {
    let mut s = String::from("graph awareness {\n");
    for (w, name) in k.worlds.iter().enumerate() {
        let true_atoms: Vec<&str> = k.language.iter().filter(|&p| k.valuation[p].contains(w)).map(|p| k.universe.name(p)).collect();
        let _ = writeln!(s, "  {} [label={}];", quote(name), quote(&format!("{name}\\n{}", true_atoms.join(","))));
    }
    for (i, agent) in k.agents.iter().enumerate() {
        for w in 0..k.world_count() {
            for t in k.relations[i][w].ones().filter(|&t| t > w) {
                let _ = writeln!(s, "  {} -- {} [label={}];", quote(&k.worlds[w]), quote(&k.worlds[t]), quote(agent));
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fig1l;

    #[test]
    fn every_state_appears_once_as_a_node() {
        let m = fig1l();
        let l = m.lattice();
        let dot = lattice_dot(l, &[("pi 1".into(), &m.base.pi[0])]);
        assert_eq!(dot.matches("[label=\"").count() - dot.matches("label=\"pi 1\"").count(), l.state_count());
        assert!(dot.contains("\"p,q:pq\" -> \"p:p\" [label=\"pi 1\""));
    }
}
