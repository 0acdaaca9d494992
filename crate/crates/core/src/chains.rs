//! The Ufnarovskiĭ graph of a tip set and the Anick chains it generates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gsb::{Certificate, GroebnerData};
use crate::pathalg::{Path, Quiver};

/// Vertices are `Q_0`, `Q_1` and the proper right factors of tips; this
/// stores the positive-length ones as paths.
#[derive(Clone, Debug)]
pub struct UfGraph {
    vertex_count: usize,
    nodes: BTreeSet<Path>,
    edges: BTreeMap<Path, Vec<Path>>,
    truncated: bool,
}

impl UfGraph {
    pub fn build(g: &GroebnerData) -> Result<UfGraph> {
        if let Some(v) = g.check_reduced().first() {
            return Err(Error::NotReduced(v.describe(g.quiver(), g.basis())));
        }
        let q = g.quiver();
        let mut nodes: BTreeSet<Path> = (0..q.arrow_count() as u32).map(|a| q.arrow_path(a)).collect();
        for t in g.tips() {
            for i in 1..t.len() {
                nodes.insert(q.factor(t, i, t.len()));
            }
        }
        let mut edges: BTreeMap<Path, Vec<Path>> = BTreeMap::new();
        for u in &nodes {
            let mut out = BTreeSet::new();
            for t in g.tips() {
                // t starts at offset `i` of `u` and runs past its end.
                for i in 0..u.len() {
                    let k = u.len() - i;
                    if k >= t.len() || u.arrows()[i..] != t.arrows()[..k] {
                        continue;
                    }
                    let v = q.factor(t, k, t.len());
                    if is_edge(g, u, &v) {
                        out.insert(v);
                    }
                }
            }
            edges.insert(u.clone(), out.into_iter().rev().collect());
        }
        Ok(UfGraph {
            vertex_count: q.vertex_count(),
            nodes,
            edges,
            truncated: matches!(g.certificate(), Certificate::UpTo(_)),
        })
    }

    /// Positive-length vertices, ascending.
    pub fn nodes(&self) -> impl Iterator<Item = &Path> {
        self.nodes.iter()
    }

    /// Successors of a positive-length vertex, descending.
    pub fn successors(&self, u: &Path) -> &[Path] {
        self.edges.get(u).map(Vec::as_slice).unwrap_or(&[])
    }

    /// All `u -> v` edges between positive-length vertices.
    pub fn edges(&self) -> impl Iterator<Item = (&Path, &Path)> {
        self.edges
            .iter()
            .flat_map(|(u, vs)| vs.iter().map(move |v| (u, v)))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Whether the graph was built from a basis certified only up to a cap.
    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// The graph is always finite here, so this is cycle detection.
    pub fn is_finite_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// A directed cycle among positive-length vertices, if any.
    pub fn find_cycle(&self) -> Option<Vec<Path>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Open,
            Done,
        }
        let order: Vec<&Path> = self.nodes.iter().collect();
        let index: BTreeMap<&Path, usize> = order.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let mut mark = vec![Mark::New; order.len()];
        for root in 0..order.len() {
            if mark[root] != Mark::New {
                continue;
            }
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            mark[root] = Mark::Open;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                let succ = self.successors(order[u]);
                if *next < succ.len() {
                    let v = index[&succ[*next]];
                    *next += 1;
                    match mark[v] {
                        Mark::New => {
                            mark[v] = Mark::Open;
                            stack.push((v, 0));
                        }
                        Mark::Open => {
                            let pos = stack.iter().position(|(w, _)| *w == v).unwrap();
                            return Some(stack[pos..].iter().map(|(w, _)| order[*w].clone()).collect());
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[u] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// The edge rule: `uv` has exactly one tip occurrence, it is a suffix of
/// `uv`, and it starts inside `u`.
pub fn is_edge(g: &GroebnerData, u: &Path, v: &Path) -> bool {
    if u.is_vertex() || v.is_vertex() || !g.is_nontip(v) {
        return false;
    }
    let Some(uv) = u.compose(v) else {
        return false;
    };
    let q = g.quiver();
    !g.is_nontip(&uv) && g.is_nontip(&q.factor(&uv, 0, uv.len() - 1))
}

/// An Anick chain `(v_1, ..., v_m)`; weight 0 is the vertex chain of `W^(-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    vertex: u32,
    components: Vec<Path>,
}

impl Chain {
    pub fn vertex_chain(v: u32) -> Chain {
        Chain {
            vertex: v,
            components: Vec::new(),
        }
    }

    pub fn new(components: Vec<Path>) -> Chain {
        let vertex = components.first().expect("nonempty chain").source();
        Chain { vertex, components }
    }

    pub fn components(&self) -> &[Path] {
        &self.components
    }

    pub fn weight(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(Path::len).sum()
    }

    pub fn source(&self) -> u32 {
        self.vertex
    }

    pub fn target(&self) -> u32 {
        self.components.last().map_or(self.vertex, Path::target)
    }

    /// `v_1 ⋯ v_m` as a single path.
    pub fn word(&self, q: &Quiver) -> Path {
        self.components
            .iter()
            .fold(q.vertex(self.vertex), |acc, c| acc.compose(c).expect("chain composes"))
    }

    /// `(x,y*x)`, or `(e_1)` for a vertex chain.
    pub fn display(&self, q: &Quiver) -> String {
        if self.components.is_empty() {
            return format!("(e_{})", q.vertices()[self.vertex as usize]);
        }
        let parts: Vec<String> = self.components.iter().map(|c| q.fmt_path(c)).collect();
        format!("({})", parts.join(","))
    }

    pub fn canonical_cmp(&self, other: &Chain) -> Ordering {
        canonical_cmp(self, other)
    }
}

impl Ord for Chain {
    fn cmp(&self, other: &Self) -> Ordering {
        canonical_cmp(self, other)
    }
}

impl PartialOrd for Chain {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Weight, then degree ascending, then components left to right with larger
/// paths first.
pub fn canonical_cmp(a: &Chain, b: &Chain) -> Ordering {
    a.weight()
        .cmp(&b.weight())
        .then(a.degree().cmp(&b.degree()))
        .then_with(|| b.components.cmp(&a.components))
        .then(a.vertex.cmp(&b.vertex))
}

/// True iff `components` is a chain: `e -> v_1 -> ... -> v_m` in the graph.
pub fn is_chain(g: &GroebnerData, components: &[Path]) -> bool {
    chain_prefix_len(g, components) == components.len()
}

/// Largest `m` such that the first `m` components form a chain.
pub fn chain_prefix_len(g: &GroebnerData, components: &[Path]) -> usize {
    match components.first() {
        Some(v) if v.len() == 1 => {}
        _ => return 0,
    }
    let mut m = 1;
    while m < components.len() && is_edge(g, &components[m - 1], &components[m]) {
        m += 1;
    }
    m
}

/// Chains grouped by weight: `levels[m]` holds the chains of weight `m`, so
/// `levels[0]` is `W^(-1)` and `levels[m]` is `W^(m-1)`.
#[derive(Clone, Debug)]
pub struct ChainSet {
    pub levels: Vec<Vec<Chain>>,
    pub max_weight: usize,
    pub max_degree: Option<usize>,
    /// Some chain of weight `max_weight` extends within the degree bound.
    pub next_level_nonempty: bool,
}

impl ChainSet {
    /// `W^(i)` for `i >= -1`.
    pub fn w(&self, i: isize) -> &[Chain] {
        self.levels
            .get((i + 1) as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Largest weight with a chain.
    pub fn top_weight(&self) -> usize {
        self.levels.iter().rposition(|l| !l.is_empty()).unwrap_or(0)
    }
}

/// Breadth-first enumeration of chains with weight at most `max_weight` and
/// degree at most `max_degree`, in canonical order per level.
pub fn enumerate_chains(
    g: &GroebnerData,
    graph: &UfGraph,
    max_weight: usize,
    max_degree: Option<usize>,
) -> ChainSet {
    let q = g.quiver();
    let fits = |d: usize| max_degree.is_none_or(|m| d <= m);
    let mut levels: Vec<Vec<Chain>> = vec![(0..q.vertex_count() as u32).map(Chain::vertex_chain).collect()];
    let extend = |level: &[Chain]| -> Vec<Chain> {
        let mut next = Vec::new();
        for c in level {
            match c.components.last() {
                None => {
                    for a in 0..q.arrow_count() as u32 {
                        if q.arrow(a).source == c.vertex && fits(1) {
                            next.push(Chain::new(vec![q.arrow_path(a)]));
                        }
                    }
                }
                Some(last) => {
                    for v in graph.successors(last) {
                        if fits(c.degree() + v.len()) {
                            let mut comps = c.components.clone();
                            comps.push(v.clone());
                            next.push(Chain::new(comps));
                        }
                    }
                }
            }
        }
        next.sort_by(canonical_cmp);
        next
    };
    for _ in 0..max_weight {
        let next = extend(levels.last().unwrap());
        levels.push(next);
    }
    let next_level_nonempty = !extend(levels.last().unwrap()).is_empty();
    ChainSet {
        levels,
        max_weight,
        max_degree,
        next_level_nonempty,
    }
}

/// All chains when the graph is acyclic (weights are then bounded by the
/// number of graph vertices plus one).
pub fn all_chains(g: &GroebnerData, graph: &UfGraph) -> Option<ChainSet> {
    if !graph.is_finite_acyclic() {
        return None;
    }
    let bound = graph.nodes.len() + 1;
    let mut set = enumerate_chains(g, graph, bound, None);
    let top = set.top_weight();
    set.levels.truncate(top + 1);
    set.max_weight = top;
    set.next_level_nonempty = false;
    Some(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gsb::Presentation;
    use crate::scalar::Field;

    fn example42() -> (Presentation, GroebnerData) {
        let p = Presentation::new(
            Field::Rational,
            &["1", "2", "3"],
            &[("a", "1", "2"), ("a'", "2", "1"), ("b", "2", "3"), ("b'", "3", "2")],
            &["a", "b", "b'", "a'"],
        )
        .unwrap()
        .with_relations(&["a*b", "b'*a'", "a'*a - b*b'"])
        .unwrap();
        let g = GroebnerData::new(&p).unwrap();
        (p, g)
    }

    fn edge_strings(q: &Quiver, graph: &UfGraph) -> BTreeSet<String> {
        graph
            .edges()
            .map(|(u, v)| format!("{}->{}", q.fmt_path(u), q.fmt_path(v)))
            .collect()
    }

    #[test]
    fn example42_graph() {
        let (p, g) = example42();
        let graph = UfGraph::build(&g).unwrap();
        let q = &p.quiver;
        let nodes: BTreeSet<String> = graph.nodes().map(|n| q.fmt_path(n)).collect();
        let expected: BTreeSet<String> = ["a", "b", "a'", "b'", "a'*a", "a*a'"].iter().map(|s| s.to_string()).collect();
        assert_eq!(nodes, expected);
        let edges = edge_strings(q, &graph);
        for e in ["a->b", "b->b'", "b'->a'", "a->a'*a", "a'->a*a'"] {
            assert!(edges.contains(e), "missing {e}");
        }
        assert!(!graph.is_finite_acyclic());
        let cycle = graph.find_cycle().unwrap();
        let shown: BTreeSet<String> = cycle.iter().map(|c| q.fmt_path(c)).collect();
        assert!(shown.contains("a'*a") && shown.contains("a*a'"));
    }

    #[test]
    fn example42_chains() {
        let (p, g) = example42();
        let graph = UfGraph::build(&g).unwrap();
        let set = enumerate_chains(&g, &graph, 2, None);
        let show = |i: isize| -> Vec<String> { set.w(i).iter().map(|c| c.display(&p.quiver)).collect() };
        assert_eq!(show(0), ["(a)", "(b)", "(b')", "(a')"]);
        assert_eq!(show(1), ["(a,b)", "(b,b')", "(b',a')", "(a,a'*a)", "(a',a*a')"]);
        assert!(set.next_level_nonempty);
    }

    #[test]
    fn free_algebra_graph_has_no_positive_edges() {
        let p = Presentation::free(Field::Rational, &["x", "y"]).unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let graph = UfGraph::build(&g).unwrap();
        assert_eq!(graph.edges().count(), 0);
        assert!(graph.is_finite_acyclic());
        let all = all_chains(&g, &graph).unwrap();
        assert_eq!(all.top_weight(), 1);
    }

    #[test]
    fn chinese_rank_two_graph_by_hand() {
        let p = Presentation::free(Field::Rational, &["x2", "x1"])
            .unwrap()
            .with_relations(&["x2*x1*x1 - x1*x2*x1", "x2*x2*x1 - x2*x1*x2"])
            .unwrap();
        let g = GroebnerData::new(&p).unwrap();
        let graph = UfGraph::build(&g).unwrap();
        let edges = edge_strings(&p.quiver, &graph);
        let expected: BTreeSet<String> = ["x2->x2*x1", "x2*x1->x1", "x2->x1*x1"].iter().map(|s| s.to_string()).collect();
        assert_eq!(edges, expected);
        let all = all_chains(&g, &graph).unwrap();
        let top: Vec<String> = all.w(2).iter().map(|c| c.display(&p.quiver)).collect();
        assert_eq!(top, ["(x2,x2*x1,x1)"]);
        assert!(all.w(3).is_empty());
    }
}
