//! Line-oriented STP instance files.
//!
//! ```text
//! SECTION Graph
//! Nodes 3
//! Edges 2
//! E 0 1 5
//! E 1 2 7
//! END
//! SECTION Terminals
//! Terminals 2
//! T 0
//! T 2
//! Root 0
//! END
//! EOF
//! ```
//!
//! Vertex ids are 0-based. Keywords are case-insensitive, `#` starts a
//! comment line, and a `SECTION Comment` block may carry `Name "..."`. The
//! SteinLib magic header line is accepted and ignored.

use std::fmt::Write as _;

use steiner_qubo_core::graph::{Graph, GraphError, VertexId, Weight};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StpError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub name: Option<String>,
    pub graph: Graph,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Comment,
    Graph,
    Terminals,
    Other,
}

fn syntax(line: usize, msg: impl Into<String>) -> StpError {
    StpError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn number<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, StpError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} '{tok}'")))
}

pub fn parse_stp(text: &str) -> Result<Instance, StpError> {
    let mut section = Section::None;
    let mut name = None;
    let mut nodes: Option<(usize, usize)> = None;
    let mut declared_edges: Option<(usize, usize)> = None;
    let mut declared_terminals: Option<(usize, usize)> = None;
    let mut edges: Vec<(VertexId, VertexId, Weight)> = Vec::new();
    let mut edge_lines: Vec<usize> = Vec::new();
    let mut terminals: Vec<(VertexId, usize)> = Vec::new();
    let mut root: Option<(VertexId, usize)> = None;
    let mut saw_terminals = false;
    let mut ended = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if ended {
            return Err(syntax(line, "content after EOF"));
        }
        let mut toks = body.split_whitespace();
        let key = toks.next().unwrap_or_default().to_ascii_lowercase();

        if section == Section::None {
            match key.as_str() {
                "33d32945" => continue,
                "section" => {
                    let which = toks
                        .next()
                        .ok_or_else(|| syntax(line, "SECTION without a name"))?
                        .to_ascii_lowercase();
                    section = match which.as_str() {
                        "comment" => Section::Comment,
                        "graph" => Section::Graph,
                        "terminals" => {
                            saw_terminals = true;
                            Section::Terminals
                        }
                        _ => Section::Other,
                    };
                }
                "eof" => ended = true,
                _ => {
                    return Err(syntax(
                        line,
                        format!("expected SECTION or EOF, found '{body}'"),
                    ))
                }
            }
            continue;
        }
        if key == "end" {
            section = Section::None;
            continue;
        }

        match section {
            Section::Comment => {
                if key == "name" {
                    let rest = body[4..].trim().trim_matches('"');
                    name = Some(rest.to_string());
                }
            }
            Section::Graph => match key.as_str() {
                "nodes" => nodes = Some((number(toks.next(), line, "node count")?, line)),
                "edges" => declared_edges = Some((number(toks.next(), line, "edge count")?, line)),
                "e" => {
                    let u = number(toks.next(), line, "vertex")?;
                    let v = number(toks.next(), line, "vertex")?;
                    let w = number(toks.next(), line, "weight")?;
                    edges.push((u, v, w));
                    edge_lines.push(line);
                }
                "arcs" | "a" => return Err(syntax(line, "directed arcs are not supported")),
                _ => {
                    return Err(syntax(
                        line,
                        format!("unexpected '{body}' in Graph section"),
                    ))
                }
            },
            Section::Terminals => match key.as_str() {
                "terminals" => {
                    declared_terminals = Some((number(toks.next(), line, "terminal count")?, line))
                }
                "t" => terminals.push((number(toks.next(), line, "terminal")?, line)),
                "root" => root = Some((number(toks.next(), line, "root")?, line)),
                _ => {
                    return Err(syntax(
                        line,
                        format!("unexpected '{body}' in Terminals section"),
                    ))
                }
            },
            Section::Other => {}
            Section::None => unreachable!(),
        }
    }

    if section != Section::None {
        return Err(syntax(text.lines().count(), "unterminated SECTION"));
    }
    let (n, _) = nodes.ok_or_else(|| syntax(1, "missing Nodes declaration"))?;
    if let Some((count, line)) = declared_edges {
        if count != edges.len() {
            return Err(syntax(
                line,
                format!("declared {count} edges, found {}", edges.len()),
            ));
        }
    }
    if !saw_terminals || terminals.is_empty() {
        return Err(GraphError::NoTerminals.into());
    }
    if let Some((count, line)) = declared_terminals {
        if count != terminals.len() {
            return Err(syntax(
                line,
                format!("declared {count} terminals, found {}", terminals.len()),
            ));
        }
    }
    // point range errors at their line
    for (&(u, v, _), &line) in edges.iter().zip(&edge_lines) {
        for x in [u, v] {
            if x >= n {
                return Err(syntax(
                    line,
                    format!("vertex {x} out of range for {n} nodes"),
                ));
            }
        }
    }
    for &(t, line) in &terminals {
        if t >= n {
            return Err(syntax(
                line,
                format!("terminal {t} out of range for {n} nodes"),
            ));
        }
    }
    if let Some((r, line)) = root {
        if r >= n {
            return Err(syntax(line, format!("root {r} out of range for {n} nodes")));
        }
    }
    let graph = Graph::new(
        n,
        edges,
        terminals.into_iter().map(|(t, _)| t).collect(),
        root.map_or(0, |(r, _)| r),
    )?;
    Ok(Instance { name, graph })
}

pub fn write_stp(graph: &Graph, name: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(name) = name {
        out.push_str("SECTION Comment\n");
        let _ = writeln!(out, "Name \"{name}\"");
        out.push_str("END\n\n");
    }
    out.push_str("SECTION Graph\n");
    let _ = writeln!(out, "Nodes {}", graph.n());
    let _ = writeln!(out, "Edges {}", graph.edges().len());
    for e in graph.edges() {
        let _ = writeln!(out, "E {} {} {}", e.u, e.v, e.w);
    }
    out.push_str("END\n\nSECTION Terminals\n");
    let _ = writeln!(out, "Terminals {}", graph.terminals().len());
    for t in graph.terminals() {
        let _ = writeln!(out, "T {t}");
    }
    let _ = writeln!(out, "Root {}", graph.root());
    out.push_str("END\n\nEOF\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use steiner_qubo_core::generate::RandomInstance;

    const SMALL: &str = "\
33D32945 STP File, STP Format Version 1.0
# a comment
SECTION Comment
Name \"path3\"
END

SECTION Graph
Nodes 3
Edges 2
E 0 1 5
E 1 2 7
END

SECTION Terminals
Terminals 2
T 0
T 2
END
EOF
";

    #[test]
    fn parses_small_file() {
        let inst = parse_stp(SMALL).unwrap();
        assert_eq!(inst.name.as_deref(), Some("path3"));
        let g = inst.graph;
        assert_eq!(g.n(), 3);
        assert_eq!(g.edges().len(), 2);
        assert_eq!(g.terminals(), [0, 2]);
        assert_eq!(g.root(), 0);
    }

    #[test]
    fn root_override_and_order() {
        let text = SMALL.replace("T 0\nT 2\n", "T 2\nT 0\nRoot 2\n");
        let g = parse_stp(&text).unwrap().graph;
        assert_eq!(g.terminals(), [2, 0]);
        assert_eq!(g.root(), 2);
    }

    #[test]
    fn self_loop() {
        let text = SMALL
            .replace("E 1 2 7", "E 0 0 1")
            .replace("E 0 1 5", "E 1 2 5");
        assert_eq!(
            parse_stp(&text),
            Err(StpError::Graph(GraphError::SelfLoop(0)))
        );
    }

    #[test]
    fn no_terminals() {
        let text = "SECTION Graph\nNodes 2\nEdges 1\nE 0 1 3\nEND\nEOF\n";
        let err = parse_stp(text).unwrap_err();
        assert_eq!(err.to_string(), "no terminals");
    }

    #[test]
    fn errors_carry_lines() {
        let bad_weight = SMALL.replace("E 1 2 7", "E 1 2 x");
        assert_eq!(
            parse_stp(&bad_weight).unwrap_err().to_string(),
            "line 11: invalid weight 'x'"
        );
        let out_of_range = SMALL.replace("T 2", "T 9");
        assert_eq!(
            parse_stp(&out_of_range).unwrap_err().to_string(),
            "line 17: terminal 9 out of range for 3 nodes"
        );
        let count = SMALL.replace("Edges 2", "Edges 3");
        assert!(matches!(
            parse_stp(&count),
            Err(StpError::Syntax { line: 9, .. })
        ));
        let dup = SMALL.replace("E 1 2 7", "E 1 0 7");
        assert_eq!(
            parse_stp(&dup),
            Err(StpError::Graph(GraphError::DuplicateEdge(0, 1)))
        );
        let zero = SMALL.replace("E 1 2 7", "E 1 2 0");
        assert!(matches!(
            parse_stp(&zero),
            Err(StpError::Graph(GraphError::NonPositiveWeight { .. }))
        ));
        let open = SMALL.replace("END\nEOF", "EOF");
        assert!(parse_stp(&open).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(seed in any::<u64>(), n in 1usize..12, m in 1usize..5, root_shift in 0usize..12) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let g = RandomInstance { n, m: m.min(n), wmin: 1, wmax: 999, density: 0.4 }
                .generate(&mut rng)
                .unwrap();
            let root = root_shift % n;
            let g = Graph::new(n, g.edges().iter().map(|e| (e.u, e.v, e.w)), g.terminals().to_vec(), root).unwrap();
            let text = write_stp(&g, Some("r"));
            let back = parse_stp(&text).unwrap();
            prop_assert_eq!(back.graph, g);
            prop_assert_eq!(back.name.as_deref(), Some("r"));
        }
    }
}
