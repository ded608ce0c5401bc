//! Rauzy graphs of periodic words and their step-by-step evolution.
//!
//! `G_k` has the length-`k` factors as vertices and the length-`(k + 1)`
//! factors as edges. The half-step `h(G_k)` puts a vertex on every edge and
//! an edge on every length-2 path; deleting the restrictions of length
//! `k + 2` from it gives `G_{k + 1}`. [`evolve`] runs this to the terminal
//! cycle and checks the fork-counting identities exactly at every stage.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forbidden::ForbiddenSystem;
use crate::words::{Alphabet, Necklace, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RauzyGraph {
    alphabet: Alphabet,
    k: usize,
    vertices: BTreeSet<Vec<u8>>,
    edges: BTreeSet<Vec<u8>>,
}

/// Vertex class counts. `c`, `d_*` and `t_*` use the multi-letter
/// generalization (`d_in = Σ(in − 1)`, `c = Σ(in − 1)(out − 1)`,
/// `t_in = Σ(in − 1)·out`), which on binary graphs are the usual counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForkCensus {
    pub roads: usize,
    pub f_in: usize,
    pub f_out: usize,
    pub crossroads: usize,
    pub c: usize,
    pub d_in: usize,
    pub d_out: usize,
    pub t_in: usize,
    pub t_out: usize,
}

impl ForkCensus {
    pub fn is_cycle(&self) -> bool {
        self.d_in == 0 && self.d_out == 0
    }
}

impl RauzyGraph {
    /// Assembles a graph from explicit words, checking that every edge has
    /// both endpoints.
    pub fn from_parts(
        alphabet: Alphabet,
        k: usize,
        vertices: BTreeSet<Vec<u8>>,
        edges: BTreeSet<Vec<u8>>,
    ) -> Result<Self> {
        let g = RauzyGraph { alphabet, k, vertices, edges };
        for v in &g.vertices {
            if v.len() != k {
                return Err(Error::Precondition(format!("vertex {} has length != {k}", g.label(v))));
            }
        }
        for e in &g.edges {
            if e.len() != k + 1 || !g.vertices.contains(&e[..k]) || !g.vertices.contains(&e[1..]) {
                return Err(Error::Precondition(format!("edge {} has no endpoints", g.label(e))));
            }
        }
        Ok(g)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn vertices(&self) -> &BTreeSet<Vec<u8>> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<Vec<u8>> {
        &self.edges
    }

    /// Edge count, `|G_k|`.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, symbols: &[u8]) -> String {
        self.alphabet.render(symbols)
    }

    /// `(in, out)` degree of every vertex.
    pub fn degrees(&self) -> BTreeMap<&[u8], (usize, usize)> {
        let mut deg: BTreeMap<&[u8], (usize, usize)> =
            self.vertices.iter().map(|v| (v.as_slice(), (0, 0))).collect();
        for e in &self.edges {
            deg.get_mut(&e[..self.k]).expect("source present").1 += 1;
            deg.get_mut(&e[1..]).expect("target present").0 += 1;
        }
        deg
    }

    pub fn out_edges<'a>(&'a self, v: &'a [u8]) -> impl Iterator<Item = &'a Vec<u8>> + 'a {
        self.alphabet.symbols().filter_map(move |c| {
            let mut e = v.to_vec();
            e.push(c);
            self.edges.get(&e)
        })
    }

    /// `h(G)`: one vertex per edge, one edge per length-2 path `(e1, e2)`
    /// labelled `e1 + last(e2)`.
    pub fn half_step(&self) -> RauzyGraph {
        let k = self.k;
        let mut by_source: HashMap<&[u8], Vec<&Vec<u8>>> = HashMap::new();
        for e in &self.edges {
            by_source.entry(&e[..k]).or_default().push(e);
        }
        let mut edges = BTreeSet::new();
        for e1 in &self.edges {
            for e2 in by_source.get(&e1[1..]).into_iter().flatten() {
                let mut x = e1.clone();
                x.push(*e2.last().expect("edges are nonempty"));
                edges.insert(x);
            }
        }
        RauzyGraph { alphabet: self.alphabet, k: k + 1, vertices: self.edges.clone(), edges }
    }

    /// Deletes the edges labelled by restrictions of length `k + 1`.
    pub fn apply_restrictions(&self, s: &ForbiddenSystem) -> Result<RauzyGraph> {
        self.alphabet.check_same(s.alphabet())?;
        let mut edges = self.edges.clone();
        for r in s.of_length(self.k + 1) {
            if !edges.remove(r.symbols()) {
                return Err(Error::MissingRestrictionEdge(r.to_string()));
            }
        }
        Ok(RauzyGraph { edges, ..self.clone() })
    }

    pub fn census(&self) -> Result<ForkCensus> {
        let mut c = ForkCensus::default();
        for (v, (i, o)) in self.degrees() {
            if i == 0 || o == 0 {
                return Err(Error::DanglingVertex(self.label(v)));
            }
            match (i >= 2, o >= 2) {
                (false, false) => c.roads += 1,
                (true, false) => c.f_in += 1,
                (false, true) => c.f_out += 1,
                (true, true) => c.crossroads += 1,
            }
            c.c += (i - 1) * (o - 1);
            c.d_in += i - 1;
            c.d_out += o - 1;
            c.t_in += (i - 1) * o;
            c.t_out += (o - 1) * i;
        }
        Ok(c)
    }

    /// True when the graph is one directed cycle through every vertex.
    pub fn is_simple_cycle(&self) -> bool {
        let deg = self.degrees();
        if self.edges.is_empty() || deg.values().any(|&d| d != (1, 1)) {
            return false;
        }
        let start = self.vertices.iter().next().expect("nonempty");
        let mut v = start.clone();
        let mut steps = 0;
        loop {
            let e = self.out_edges(&v).next().expect("out-degree 1");
            v = e[1..].to_vec();
            steps += 1;
            if &v == start {
                break;
            }
        }
        steps == self.edges.len()
    }

    pub fn to_dot(&self) -> String {
        self.dot_with_deleted(&BTreeSet::new())
    }

    /// DOT text; edges listed in `deleted` are drawn dashed (for viewing
    /// `h(G_k)` together with the restrictions removed from it).
    pub fn dot_with_deleted(&self, deleted: &BTreeSet<Vec<u8>>) -> String {
        let name = |s: &[u8]| if s.is_empty() { "ε".to_string() } else { self.label(s) };
        let mut out = format!("digraph G{} {{\n", self.k);
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{0}\" [label=\"{0}\"];", name(v));
        }
        for e in self.edges.iter().chain(deleted.iter().filter(|d| !self.edges.contains(*d))) {
            let style = if deleted.contains(e) { ", style=dashed" } else { "" };
            let _ = writeln!(
                out,
                "  \"{}\" -> \"{}\" [label=\"{}\"{}];",
                name(&e[..self.k]),
                name(&e[1..]),
                name(e),
                style
            );
        }
        out.push_str("}\n");
        out
    }
}

pub fn build_graph(w: &Necklace, k: usize) -> RauzyGraph {
    let n = w.n();
    RauzyGraph {
        alphabet: w.alphabet(),
        k,
        vertices: (0..n).map(|i| w.window(i, k)).collect(),
        edges: (0..n).map(|i| w.window(i, k + 1)).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub k: usize,
    pub vertices: usize,
    pub size: usize,
    pub census: ForkCensus,
    /// Restrictions deleted while building this stage: the absent letters
    /// at `k = 0`, otherwise the length-`(k + 1)` restrictions removed from
    /// `h(G_{k - 1})`.
    pub restrictions: Vec<String>,
    /// `d_in(h(G_k))`, absent for the terminal stage.
    pub half_step_d_in: Option<usize>,
}

impl StageRecord {
    pub fn r(&self) -> usize {
        self.restrictions.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvolutionTrace {
    pub word: String,
    pub n: usize,
    pub stages: Vec<StageRecord>,
    /// Restrictions whose middle vertex was not a crossroad one stage
    /// earlier. Expected to stay empty.
    pub crossroad_rule_violations: Vec<String>,
}

impl EvolutionTrace {
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.size).collect()
    }

    pub fn c(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.census.c).collect()
    }

    pub fn d(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.census.d_in).collect()
    }

    pub fn r(&self) -> Vec<usize> {
        self.stages.iter().map(StageRecord::r).collect()
    }

    /// Total restrictions applied, absent letters included.
    pub fn total_restrictions(&self) -> usize {
        self.stages.iter().map(StageRecord::r).sum()
    }

    pub fn final_stage(&self) -> &StageRecord {
        self.stages.last().expect("at least G_0")
    }
}

/// Runs `G_0 → h(G_0) → G_1 → …` until the first simple cycle.
///
/// `G_{k+1}` is built directly from the factors of `w`; the restrictions
/// applied at each stage are whatever `h(G_k)` has beyond it. Every counting
/// identity is checked with exact equality and a violation is an error.
pub fn evolve(w: &Necklace) -> Result<EvolutionTrace> {
    let alphabet = w.alphabet();
    let n = w.n();
    let fail = |detail: String| Error::IdentityViolation { word: w.to_string(), detail };
    let absent: Vec<String> =
        alphabet.symbols().filter(|&c| !w.contains(&[c])).map(|c| alphabet.letter(c).to_string()).collect();

    let mut g = build_graph(w, 0);
    let mut census = g.census()?;
    let mut stages = vec![];
    let mut violations = vec![];
    let mut restrictions = absent;
    loop {
        let k = g.order();
        if census.is_cycle() {
            if !g.is_simple_cycle() || g.size() != n || k > n {
                return Err(fail(format!("terminal G_{k} is not an {n}-cycle")));
            }
            stages.push(StageRecord {
                k,
                vertices: g.vertices().len(),
                size: g.size(),
                census,
                restrictions,
                half_step_d_in: None,
            });
            break;
        }
        let h = g.half_step();
        let next = build_graph(w, k + 1);
        if h.vertices() != next.vertices() || !next.edges().is_subset(h.edges()) {
            return Err(fail(format!("G_{} is not h(G_{k}) minus restrictions", k + 1)));
        }
        let h_census = h.census()?;
        if census.t_in != h_census.d_in {
            return Err(fail(format!("t_in(G_{k}) = {} but d_in(h) = {}", census.t_in, h_census.d_in)));
        }
        let deleted: Vec<&Vec<u8>> = h.edges().difference(next.edges()).collect();
        let degrees = g.degrees();
        for x in &deleted {
            let middle = &x[1..=k];
            let (i, o) = degrees[middle];
            if i < 2 || o < 2 {
                violations.push(alphabet.render(x));
            }
        }
        let next_census = next.census()?;
        let r_next = deleted.len();
        if next_census.d_in + r_next != census.d_in + census.c {
            return Err(fail(format!("d_{} != d_{k} + c_{k} - r_{}", k + 1, k + 1)));
        }
        if next.size() + r_next != g.size() + census.d_in + census.c {
            return Err(fail(format!("|G_{}| != |G_{k}| + d_{k} + c_{k} - r_{}", k + 1, k + 1)));
        }
        stages.push(StageRecord {
            k,
            vertices: g.vertices().len(),
            size: g.size(),
            census,
            restrictions,
            half_step_d_in: Some(h_census.d_in),
        });
        restrictions = deleted.iter().map(|x| alphabet.render(x)).collect();
        g = next;
        census = next_census;
    }

    let trace = EvolutionTrace { word: w.to_string(), n, stages, crossroad_rule_violations: violations };
    let later_r: usize = trace.stages[1..].iter().map(StageRecord::r).sum();
    let sum_c: usize = trace.c().iter().sum();
    let d0 = trace.stages[0].census.d_in;
    if later_r != sum_c + d0 {
        return Err(fail(format!("Σr = {later_r} but Σc + d_0 = {}", sum_c + d0)));
    }
    let grown: usize = trace.stages[0].size + trace.stages[1..].iter().map(|s| s.census.d_in).sum::<usize>();
    if grown != n {
        return Err(fail(format!("|G_0| + Σd = {grown} but n = {n}")));
    }
    Ok(trace)
}

/// Rauzy graphs `G_0 ..= G_k` where `G_k` is the first cycle.
pub fn graph_sequence(w: &Necklace) -> Vec<RauzyGraph> {
    let mut out = vec![build_graph(w, 0)];
    while !out.last().expect("nonempty").is_simple_cycle() {
        let k = out.len();
        out.push(build_graph(w, k));
    }
    out
}

/// Restrictions removed from `h(G_k)` to get `G_{k + 1}`, as words.
pub fn stage_restrictions(w: &Necklace, k: usize) -> Vec<Word> {
    let h = build_graph(w, k).half_step();
    let next = build_graph(w, k + 1);
    h.edges()
        .difference(next.edges())
        .map(|x| Word::new(w.alphabet(), x.clone()).expect("same alphabet"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forbidden::reduced_system;

    fn bin(w: &str) -> Necklace {
        Necklace::parse(Alphabet::BINARY, w).unwrap()
    }

    fn labels(g: &RauzyGraph, set: &BTreeSet<Vec<u8>>) -> Vec<String> {
        set.iter().map(|s| g.label(s)).collect()
    }

    #[test]
    fn graph_examples() {
        let g = build_graph(&bin("aab"), 1);
        assert_eq!(labels(&g, g.vertices()), ["a", "b"]);
        assert_eq!(labels(&g, g.edges()), ["aa", "ab", "ba"]);
        let g3 = build_graph(&bin("aab"), 3);
        assert!(g3.is_simple_cycle());
        assert_eq!(g3.size(), 3);
        let g0 = build_graph(&bin("aabab"), 0);
        assert_eq!((g0.vertices().len(), g0.size()), (1, 2));
    }

    #[test]
    fn half_step_examples() {
        let h0 = build_graph(&bin("ab"), 0).half_step();
        assert_eq!(labels(&h0, h0.vertices()), ["a", "b"]);
        assert_eq!(labels(&h0, h0.edges()), ["aa", "ab", "ba", "bb"]);
        let h1 = build_graph(&bin("aab"), 1).half_step();
        assert_eq!(h1.vertices().len(), 3);
        assert_eq!(labels(&h1, h1.edges()), ["aaa", "aab", "aba", "baa", "bab"]);
        let cycle = build_graph(&bin("aabab"), 5);
        let h = cycle.half_step();
        assert!(h.is_simple_cycle());
        assert_eq!(h.size(), 5);
    }

    #[test]
    fn restriction_examples() {
        let w = bin("aab");
        let s = reduced_system(&w);
        let g1 = build_graph(&w, 0).half_step().apply_restrictions(&s).unwrap();
        assert_eq!(g1, build_graph(&w, 1));
        let g2 = g1.half_step().apply_restrictions(&s).unwrap();
        assert!(g2.is_simple_cycle());
        assert_eq!(g2, build_graph(&w, 2));
        let empty = ForbiddenSystem::new(Alphabet::BINARY, []).unwrap();
        assert_eq!(g1.apply_restrictions(&empty).unwrap(), g1);
        let missing = ForbiddenSystem::parse(Alphabet::BINARY, &["bb"]).unwrap();
        assert!(matches!(g1.apply_restrictions(&missing), Err(Error::MissingRestrictionEdge(_))));
    }

    #[test]
    fn census_examples() {
        let c = build_graph(&bin("aab"), 1).census().unwrap();
        assert_eq!((c.roads, c.crossroads, c.f_in, c.d_in, c.t_in), (1, 1, 0, 1, 2));
        let c0 = build_graph(&bin("ab"), 0).census().unwrap();
        assert_eq!((c0.crossroads, c0.d_in, c0.t_in), (1, 1, 2));
        let cyc = build_graph(&bin("aabab"), 5).census().unwrap();
        assert!(cyc.is_cycle());
        assert_eq!(cyc.c + cyc.f_in + cyc.f_out, 0);
        let dangling =
            RauzyGraph::from_parts(Alphabet::BINARY, 1, [vec![0], vec![1]].into(), [vec![0, 1]].into())
                .unwrap();
        assert!(matches!(dangling.census(), Err(Error::DanglingVertex(_))));
    }

    #[test]
    fn evolve_examples() {
        let t = evolve(&bin("aab")).unwrap();
        assert_eq!(t.sizes(), [2, 3, 3]);
        assert_eq!(t.c(), [1, 1, 0]);
        assert_eq!(t.d(), [1, 1, 0]);
        assert_eq!(t.r(), [0, 1, 2]);
        assert_eq!(t.total_restrictions(), 3);

        let t = evolve(&bin("ab")).unwrap();
        assert_eq!(t.sizes(), [2, 2]);
        assert_eq!(t.r(), [0, 2]);

        let t = evolve(&bin("a")).unwrap();
        assert_eq!(t.stages.len(), 1);
        assert_eq!(t.final_stage().restrictions, ["b"]);
        assert_eq!(t.total_restrictions(), 1);
    }

    #[test]
    fn dot_marks_deleted_edges() {
        let w = bin("aab");
        let h = build_graph(&w, 0).half_step();
        let deleted: BTreeSet<Vec<u8>> = [vec![1, 1]].into();
        let dot = build_graph(&w, 1).dot_with_deleted(&deleted);
        assert!(dot.contains("\"b\" -> \"b\" [label=\"bb\", style=dashed];"));
        assert_eq!(dot.matches("->").count(), h.size());
        let g0 = build_graph(&bin("a"), 0).to_dot();
        assert!(g0.contains("\"ε\" -> \"ε\" [label=\"a\"];"));
    }
}
