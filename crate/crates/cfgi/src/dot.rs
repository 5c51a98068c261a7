//! Graphviz rendering of a transition diagram.

use std::fmt::Write;

use cfgi_core::Diagram;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// One node per vertex and one edge per distinct arc, labelled `group|brackets`.
pub fn to_dot(d: &Diagram) -> String {
    let names = d.names();
    let mut out = String::from("digraph H {\n  rankdir=LR;\n");
    for (i, n) in names.iter().enumerate() {
        let shape = if i == d.sink() {
            "doublecircle"
        } else {
            "circle"
        };
        let _ = writeln!(out, "  {} [shape={shape}];", quote(n));
    }
    for a in d.arcs() {
        let mut label = a.label.render(names);
        if a.multiplicity > 1 {
            let _ = write!(label, " (x{})", a.multiplicity);
        }
        let _ = writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(&names[a.from]),
            quote(&names[a.to]),
            quote(&label)
        );
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::{parse_grammar, parse_group};
    use crate::pipeline::Instance;

    #[test]
    fn sab_dot() {
        let g = parse_grammar("start: S\nS -> A B\nA -> 'a'\nB -> 'b'\n").unwrap();
        let s = parse_group("kind: free\nrank: 1\nmap: a -> x1, b -> x1'").unwrap();
        let d = Instance::prepare(&g, &s).unwrap().diagram().unwrap();
        let dot = to_dot(&d);
        assert!(dot.contains("\"S\" -> \"A\" [label=\"ε|B\"];"));
        assert!(dot.contains("\"Z\" -> \"B\" [label=\"ε|B'\"];"));
        assert!(dot.contains("\"A\" -> \"Z\" [label=\"x1|ε\"];"));
        assert!(dot.contains("\"B\" -> \"Z\" [label=\"x1'|ε\"];"));
        assert_eq!(dot.matches("->").count(), 4);
    }
}
