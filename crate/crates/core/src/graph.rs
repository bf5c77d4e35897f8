//! Undirected graphs with optional loops: the complete looped graph, joins,
//! disjoint unions, isomorphism testing and DOT/JSON emitters.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Graphs above this many vertices are not decided by [`isomorphic`].
pub const ISOMORPHISM_BUDGET: usize = 64;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("malformed graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("edge {0:?} references a missing vertex")]
    DanglingEdge((usize, usize)),
}

/// Edges are stored as `(min, max)` pairs; loops live in their own set so
/// non-loop degrees are unambiguous.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CompressedGraph {
    pub vertex_labels: Vec<String>,
    pub edges: BTreeSet<(usize, usize)>,
    pub loops: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[usize; 2]>,
    loops: Vec<usize>,
}

impl CompressedGraph {
    pub fn with_vertices(labels: Vec<String>) -> Self {
        Self { vertex_labels: labels, ..Default::default() }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a == b {
            self.loops.insert(a);
        } else {
            self.edges.insert((a.min(b), a.max(b)));
        }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        if a == b {
            self.loops.contains(&a)
        } else {
            self.edges.contains(&(a.min(b), a.max(b)))
        }
    }

    pub fn all_looped(&self) -> bool {
        self.loops.len() == self.vertex_count()
    }

    /// Non-loop degree of every vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    fn adjacency(&self) -> Vec<Vec<bool>> {
        let n = self.vertex_count();
        let mut adj = vec![vec![false; n]; n];
        for &(a, b) in &self.edges {
            adj[a][b] = true;
            adj[b][a] = true;
        }
        for &a in &self.loops {
            adj[a][a] = true;
        }
        adj
    }

    /// The same graph with vertex `v` moved to position `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let mut labels = vec![String::new(); self.vertex_count()];
        for (v, label) in self.vertex_labels.iter().enumerate() {
            labels[perm[v]] = label.clone();
        }
        let mut g = Self::with_vertices(labels);
        for &(a, b) in &self.edges {
            g.add_edge(perm[a], perm[b]);
        }
        for &a in &self.loops {
            g.loops.insert(perm[a]);
        }
        g
    }

    pub fn to_json(&self) -> String {
        let doc = GraphJson {
            vertices: self.vertex_labels.clone(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            loops: self.loops.iter().copied().collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        let doc: GraphJson = serde_json::from_str(text)?;
        let n = doc.vertices.len();
        let mut g = Self::with_vertices(doc.vertices);
        for [a, b] in doc.edges {
            if a >= n || b >= n {
                return Err(GraphError::DanglingEdge((a, b)));
            }
            g.add_edge(a, b);
        }
        for a in doc.loops {
            if a >= n {
                return Err(GraphError::DanglingEdge((a, a)));
            }
            g.loops.insert(a);
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph G {\n");
        for (v, label) in self.vertex_labels.iter().enumerate() {
            let escaped = label.replace('\\', "\\\\").replace('"', "\\\"");
            let _ = writeln!(out, "  {v} [label=\"{escaped}\"];");
        }
        for &a in &self.loops {
            let _ = writeln!(out, "  {a} -- {a};");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(out, "  {a} -- {b};");
        }
        out.push_str("}\n");
        out
    }

    pub fn emit(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Dot => self.to_dot(),
            OutputFormat::Json => self.to_json(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Dot,
    #[default]
    Json,
}

/// `K°_n`: complete graph on `n` vertices with every loop.
pub fn complete_with_loops(n: usize) -> CompressedGraph {
    let mut g = CompressedGraph::with_vertices((0..n).map(|v| v.to_string()).collect());
    for a in 0..n {
        for b in a..n {
            g.add_edge(a, b);
        }
    }
    g
}

/// `G ∨ H`: disjoint copies of both plus every cross edge.
pub fn join(g: &CompressedGraph, h: &CompressedGraph) -> CompressedGraph {
    let off = g.vertex_count();
    let mut out = disjoint_pair(g, h);
    for a in 0..off {
        for b in 0..h.vertex_count() {
            out.add_edge(a, off + b);
        }
    }
    out
}

/// `tG`: `t` disjoint copies of `G`.
pub fn disjoint_union(t: usize, g: &CompressedGraph) -> CompressedGraph {
    (0..t).fold(CompressedGraph::default(), |acc, _| disjoint_pair(&acc, g))
}

fn disjoint_pair(g: &CompressedGraph, h: &CompressedGraph) -> CompressedGraph {
    let off = g.vertex_count();
    let mut labels = g.vertex_labels.clone();
    labels.extend(h.vertex_labels.iter().cloned());
    let mut out = CompressedGraph::with_vertices(labels);
    out.edges = g.edges.clone();
    out.loops = g.loops.clone();
    for &(a, b) in &h.edges {
        out.add_edge(off + a, off + b);
    }
    for &a in &h.loops {
        out.loops.insert(off + a);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Isomorphism {
    /// `map[v]` is the image in the second graph of vertex `v` of the first.
    Found(Vec<usize>),
    NotIsomorphic,
    /// Above [`ISOMORPHISM_BUDGET`]; no answer is given.
    Undecided,
}

impl Isomorphism {
    pub fn is_found(&self) -> bool {
        matches!(self, Isomorphism::Found(_))
    }
}

/// Exact isomorphism test ignoring vertex labels: joint color refinement
/// (loop flag, then neighbor-color multisets) followed by backtracking over
/// vertices of equal color.
pub fn isomorphic(g: &CompressedGraph, h: &CompressedGraph) -> Isomorphism {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.edge_count() != h.edge_count() || g.loops.len() != h.loops.len() {
        return Isomorphism::NotIsomorphic;
    }
    if n > ISOMORPHISM_BUDGET {
        return Isomorphism::Undecided;
    }
    let (ga, ha) = (g.adjacency(), h.adjacency());
    let Some((gc, hc)) = refine(&ga, &ha) else {
        return Isomorphism::NotIsomorphic;
    };

    // Most constrained vertices first.
    let mut class_size: HashMap<usize, usize> = HashMap::new();
    for &c in &gc {
        *class_size.entry(c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (class_size[&gc[v]], v));

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(0, &order, &ga, &ha, &gc, &hc, &mut map, &mut used) {
        Isomorphism::Found(map)
    } else {
        Isomorphism::NotIsomorphic
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    depth: usize,
    order: &[usize],
    ga: &[Vec<bool>],
    ha: &[Vec<bool>],
    gc: &[usize],
    hc: &[usize],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else {
        return true;
    };
    for w in 0..ha.len() {
        if used[w] || hc[w] != gc[v] || ga[v][v] != ha[w][w] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| ga[v][u] == ha[w][map[u]]);
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(depth + 1, order, ga, ha, gc, hc, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Refines colors on both graphs with a shared palette; `None` when the
/// color histograms diverge.
fn refine(ga: &[Vec<bool>], ha: &[Vec<bool>]) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = ga.len();
    let mut gc: Vec<usize> = (0..n).map(|v| ga[v][v] as usize).collect();
    let mut hc: Vec<usize> = (0..n).map(|v| ha[v][v] as usize).collect();
    let mut classes = 0;
    loop {
        let mut palette: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
        let signature = |adj: &[Vec<bool>], colors: &[usize], v: usize| {
            let mut nb: Vec<usize> = (0..n).filter(|&u| u != v && adj[v][u]).map(|u| colors[u]).collect();
            nb.sort_unstable();
            (colors[v], nb)
        };
        let gs: Vec<_> = (0..n).map(|v| signature(ga, &gc, v)).collect();
        let hs: Vec<_> = (0..n).map(|v| signature(ha, &hc, v)).collect();
        let mut keys: Vec<_> = gs.iter().chain(hs.iter()).cloned().collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let id = palette.len();
            palette.insert(k, id);
        }
        let ng: Vec<usize> = gs.into_iter().map(|s| palette[&s]).collect();
        let nh: Vec<usize> = hs.into_iter().map(|s| palette[&s]).collect();
        let mut hist_g = ng.clone();
        let mut hist_h = nh.clone();
        hist_g.sort_unstable();
        hist_h.sort_unstable();
        if hist_g != hist_h {
            return None;
        }
        let count = palette.len();
        gc = ng;
        hc = nh;
        if count == classes {
            return Some((gc, hc));
        }
        classes = count;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_sizes() {
        let k0 = complete_with_loops(0);
        assert_eq!(k0.vertex_count(), 0);
        let k1 = complete_with_loops(1);
        assert_eq!((k1.vertex_count(), k1.edge_count(), k1.loops.len()), (1, 0, 1));
        let k4 = complete_with_loops(4);
        assert_eq!((k4.edge_count(), k4.loops.len()), (6, 4));
    }

    #[test]
    fn join_and_union_examples() {
        let k1 = complete_with_loops(1);
        assert!(isomorphic(&join(&k1, &k1), &complete_with_loops(2)).is_found());
        let k2 = complete_with_loops(2);
        let three = disjoint_union(3, &k2);
        assert_eq!((three.vertex_count(), three.edge_count(), three.loops.len()), (6, 3, 6));
        assert_eq!(disjoint_union(1, &k2), k2);
        assert_eq!(disjoint_union(0, &k2), CompressedGraph::default());
        assert_eq!(join(&k2, &CompressedGraph::default()), k2);

        let t2 = join(&k2, &three);
        assert_eq!(t2.vertex_count(), 8);
        let mut degrees = t2.degrees();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        assert_eq!(degrees, vec![7, 7, 3, 3, 3, 3, 3, 3]);
        // 1 inside K2°, 3 inside 3K2°, 2·6 across
        assert_eq!(t2.edge_count(), 16);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(isomorphic(&complete_with_loops(3), &complete_with_loops(3)).is_found());
        let k2 = complete_with_loops(2);
        let t2 = join(&k2, &disjoint_union(3, &k2));
        assert_eq!(isomorphic(&t2, &complete_with_loops(8)), Isomorphism::NotIsomorphic);
        let big = complete_with_loops(ISOMORPHISM_BUDGET + 1);
        assert_eq!(isomorphic(&big, &big), Isomorphism::Undecided);
    }

    #[test]
    fn loops_matter() {
        let mut a = CompressedGraph::with_vertices(vec!["a".into(), "b".into()]);
        a.add_edge(0, 1);
        a.add_edge(0, 0);
        let mut b = a.clone();
        b.loops.clear();
        b.add_edge(1, 1);
        assert!(isomorphic(&a, &b).is_found());
        b.add_edge(0, 0);
        assert_eq!(isomorphic(&a, &b), Isomorphism::NotIsomorphic);
    }

    #[test]
    fn regular_non_isomorphic_pair() {
        // 6-cycle vs two triangles: both 2-regular, same counts.
        let mut c6 = CompressedGraph::with_vertices(vec![String::new(); 6]);
        for i in 0..6 {
            c6.add_edge(i, (i + 1) % 6);
        }
        let mut tri = CompressedGraph::with_vertices(vec![String::new(); 6]);
        for base in [0, 3] {
            for i in 0..3 {
                tri.add_edge(base + i, base + (i + 1) % 3);
            }
        }
        assert_eq!(isomorphic(&c6, &tri), Isomorphism::NotIsomorphic);
    }

    #[test]
    fn emitters() {
        let k1 = complete_with_loops(1);
        assert_eq!(k1.to_dot().matches(" -- ").count(), 1);
        assert!(k1.to_dot().contains("0 -- 0;"));
        let k2 = complete_with_loops(2);
        let v: serde_json::Value = serde_json::from_str(&k2.to_json()).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 2);
        assert_eq!(v["edges"], serde_json::json!([[0, 1]]));
        assert_eq!(v["loops"], serde_json::json!([0, 1]));
        let mut quoted = complete_with_loops(1);
        quoted.vertex_labels[0] = "say \"hi\"".into();
        assert!(quoted.to_dot().contains("label=\"say \\\"hi\\\"\""));
    }

    #[test]
    fn json_rejects_dangling_edges() {
        let bad = r#"{"vertices":["a"],"edges":[[0,1]],"loops":[]}"#;
        assert!(matches!(CompressedGraph::from_json(bad), Err(GraphError::DanglingEdge(_))));
    }
}
