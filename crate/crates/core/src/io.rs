//! JSON input files: graphs, online streams and robust scenarios.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Dsu, WeightedGraph};
use crate::robust::{Demands, RobustInstance, Scenario};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphFile {
    n: usize,
    #[serde(default)]
    root: usize,
    edges: Vec<(usize, usize, f64)>,
}

/// A graph after zero-weight contraction and scaling to minimum weight 1.
#[derive(Clone, Debug, PartialEq)]
pub struct LoadedGraph {
    pub graph: WeightedGraph,
    pub root: usize,
    /// Factor applied to every file weight.
    pub scale: f64,
    /// Vertex id after contraction for every file vertex.
    pub vertex_map: Vec<usize>,
    pub contracted_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoadSummary {
    pub n: usize,
    pub m: usize,
    pub root: usize,
    pub scale: f64,
    pub contracted_edges: usize,
}

impl LoadedGraph {
    pub fn summary(&self) -> LoadSummary {
        LoadSummary {
            n: self.graph.n(),
            m: self.graph.m(),
            root: self.root,
            scale: self.scale,
            contracted_edges: self.contracted_edges,
        }
    }

    /// File vertex ids to graph ids, sorted and deduplicated.
    pub fn map_vertices(&self, vs: &[usize]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(vs.len());
        for &v in vs {
            match self.vertex_map.get(v) {
                Some(&x) => out.push(x),
                None => return invalid(format!("vertex {v} not in the graph file")),
            }
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }

    pub fn map_instance(&self, inst: &RobustInstance) -> Result<RobustInstance> {
        let mut scenarios = Vec::with_capacity(inst.m());
        for s in &inst.scenarios {
            let demands = match &s.demands {
                Demands::Groups { groups } => {
                    Demands::Groups { groups: groups.iter().map(|g| self.map_vertices(g)).collect::<Result<_>>()? }
                }
                Demands::Pairs { pairs } => Demands::Pairs {
                    pairs: pairs
                        .iter()
                        .map(|(a, b)| Ok((self.map_vertices(a)?, self.map_vertices(b)?)))
                        .collect::<Result<_>>()?,
                },
            };
            scenarios.push(Scenario { sigma: s.sigma, demands });
        }
        Ok(RobustInstance { scenarios })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str, origin: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("{origin}: {e}")))
}

pub fn parse_graph(text: &str, origin: &str) -> Result<LoadedGraph> {
    let file: GraphFile = parse(text, origin)?;
    let n = file.n;
    if n == 0 {
        return invalid(format!("{origin}: empty graph"));
    }
    if file.root >= n {
        return invalid(format!("{origin}: root {} outside [0, {n})", file.root));
    }
    for (k, &(u, v, w)) in file.edges.iter().enumerate() {
        if u >= n || v >= n {
            return invalid(format!("{origin}: edge {k} has an endpoint outside [0, {n})"));
        }
        if !(w.is_finite() && w >= 0.0) {
            return invalid(format!("{origin}: edge {k} has weight {w}"));
        }
    }
    let mut dsu = Dsu::new(n);
    let mut contracted_edges = 0;
    for &(u, v, w) in &file.edges {
        if w == 0.0 {
            dsu.union(u, v);
            contracted_edges += 1;
        }
    }
    let mut id = vec![usize::MAX; n];
    let mut next = 0;
    let mut vertex_map = vec![0; n];
    for v in 0..n {
        let r = dsu.find(v);
        if id[r] == usize::MAX {
            id[r] = next;
            next += 1;
        }
        vertex_map[v] = id[r];
    }
    let kept: Vec<(usize, usize, f64)> = file
        .edges
        .iter()
        .filter(|&&(u, v, w)| w > 0.0 && vertex_map[u] != vertex_map[v])
        .map(|&(u, v, w)| (vertex_map[u], vertex_map[v], w))
        .collect();
    let min = kept.iter().map(|e| e.2).fold(f64::INFINITY, f64::min);
    let scale = if min < 1.0 { 1.0 / min } else { 1.0 };
    let root = vertex_map[file.root];
    let graph = WeightedGraph::new(next, kept.into_iter().map(|(u, v, w)| (u, v, w * scale)))?.with_root(root)?;
    if !graph.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(LoadedGraph { graph, root, scale, vertex_map, contracted_edges })
}

pub fn load_graph(path: &Path) -> Result<LoadedGraph> {
    parse_graph(&read(path)?, &path.display().to_string())
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StreamEvent {
    Group {
        group: Vec<usize>,
        #[serde(default = "one")]
        f: usize,
    },
    /// A group of groups, for the two-level partial problem.
    Groups {
        groups: Vec<Vec<usize>>,
        f: usize,
    },
    Pair {
        pair: (Vec<usize>, Vec<usize>),
    },
}

pub fn parse_stream(text: &str, origin: &str) -> Result<Vec<StreamEvent>> {
    parse(text, origin)
}

pub fn load_stream(path: &Path) -> Result<Vec<StreamEvent>> {
    parse_stream(&read(path)?, &path.display().to_string())
}

pub fn parse_scenarios(text: &str, origin: &str) -> Result<RobustInstance> {
    parse(text, origin)
}

pub fn load_scenarios(path: &Path) -> Result<RobustInstance> {
    parse_scenarios(&read(path)?, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contraction_and_scale() {
        let g = parse_graph(r#"{"n":4,"root":3,"edges":[[0,1,0],[1,2,0.5],[2,3,2]]}"#, "t").unwrap();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.scale, 2.0);
        assert_eq!(g.vertex_map, vec![0, 0, 1, 2]);
        assert_eq!(g.root, 2);
        assert_eq!(g.graph.min_weight(), 1.0);
        assert_eq!(g.contracted_edges, 1);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_graph(r#"{"n":2,"edges":[[0,1,-1]]}"#, "t").is_err());
        assert!(matches!(parse_graph(r#"{"n":3,"edges":[[0,1,1]]}"#, "t"), Err(Error::Disconnected)));
        let err = parse_graph("{\"n\":2,\n\"edges\":[[0,1]]}", "g.json").unwrap_err();
        assert!(err.to_string().contains("g.json") && err.to_string().contains("line 2"));
    }

    #[test]
    fn stream_events() {
        let s = parse_stream(r#"[{"group":[1,2]},{"group":[3],"f":1},{"pair":[[0],[2]]}]"#, "s").unwrap();
        assert_eq!(s[0], StreamEvent::Group { group: vec![1, 2], f: 1 });
        assert!(matches!(s[2], StreamEvent::Pair { .. }));
        let s = parse_stream(r#"[{"groups":[[1],[2]],"f":2}]"#, "s").unwrap();
        assert!(matches!(s[0], StreamEvent::Groups { f: 2, .. }));
    }
}
