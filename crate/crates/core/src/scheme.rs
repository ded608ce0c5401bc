//! Weighted schemes of Rauzy graphs and the fork-collapse calculus.
//!
//! A scheme keeps only the fork vertices of a graph; every maximal chain of
//! roads becomes one arc weighted by its length. Between Rauzy stages the
//! arc from an in-fork to an out-fork shrinks by one, the arc from an
//! out-fork to an in-fork grows by one, and same-kind arcs keep their
//! weight ([`Scheme::h_star`]). When an in→out arc reaches weight 0 the two
//! forks meet in a crossroad, which is immediately split into out-forks and
//! in-forks joined by weight-0 arcs ([`Scheme::zero_replace`]); deleting
//! some of those arcs applies the restrictions.
//!
//! Every fork carries an identity token and every tail (the non-directing
//! arcs at a fork) a port index, so the meeting history of forks can be
//! replayed in any order: [`parallel_drive`] moves all forks at once and
//! [`sequential_drive`] collapses one pair at a time along a schedule.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rauzy::{build_graph, RauzyGraph};
use crate::words::{Alphabet, Necklace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ForkId(pub u32);

impl fmt::Display for ForkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(u32);

/// Where an arc attaches to a fork: through the fork's directing arc or
/// through one of its tails. On binary schemes tail 0 is "left" and tail 1
/// is "right".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Port {
    Directing,
    Tail(u8),
}

impl Port {
    pub const LEFT: Port = Port::Tail(0);
    pub const RIGHT: Port = Port::Tail(1);

    fn tail(self) -> Option<u8> {
        match self {
            Port::Tail(t) => Some(t),
            Port::Directing => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForkKind {
    Road,
    InFork,
    OutFork,
    Crossroad,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeArc {
    pub source: ForkId,
    pub target: ForkId,
    pub source_port: Port,
    pub target_port: Port,
    pub weight: u64,
    /// Weight when the arc was created (by contraction or 0-replacement).
    pub born_weight: u64,
    /// The word spelled along the underlying path, endpoint labels
    /// included. Tracked only while every fork label has the same length.
    pub spelling: Option<Vec<u8>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Node {
    ins: Vec<ArcId>,
    outs: Vec<ArcId>,
}

#[derive(Clone, Debug)]
pub struct Scheme {
    alphabet: Alphabet,
    nodes: BTreeMap<ForkId, Node>,
    arcs: BTreeMap<ArcId, SchemeArc>,
    next_fork: u32,
    next_arc: u32,
    /// Common label length of all forks when spellings are tracked.
    stage: Option<usize>,
}

/// Forks created by one 0-replacement: an out-fork at the end of each
/// incoming tail and an in-fork at the start of each outgoing tail, keyed by
/// the tail's port index at the crossroad.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Children {
    pub out_forks: BTreeMap<u8, ForkId>,
    pub in_forks: BTreeMap<u8, ForkId>,
}

impl Children {
    pub fn ids(&self) -> impl Iterator<Item = ForkId> + '_ {
        self.out_forks.values().chain(self.in_forks.values()).copied()
    }
}

/// The weight-0 arcs to delete after a 0-replacement, as
/// `(out-fork tail index, in-fork tail index)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionChoice(pub BTreeSet<(u8, u8)>);

impl RestrictionChoice {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn of(pairs: &[(u8, u8)]) -> Self {
        RestrictionChoice(pairs.iter().copied().collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapsiblePair {
    pub in_fork: ForkId,
    pub out_fork: ForkId,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseEvent {
    pub out_fork: ForkId,
    pub in_fork: ForkId,
    pub path_length: u64,
    pub restrictions_applied: usize,
    pub deleted: Vec<(u8, u8)>,
    /// Children that are still forks after restrictions and contraction.
    pub children: Vec<ForkId>,
    pub size_after: u64,
    pub in_forks_after: usize,
}

/// Snapshot used by the strengthened-estimate tracker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeState {
    /// One more than the number of crossroads accounted so far.
    pub index: usize,
    pub size: u64,
    /// `d`: in-fork count, `Σ(in − 1)`.
    pub in_forks: usize,
    /// `(x, y, z)` of a one-fork scheme.
    pub one_fork: Option<(u64, u64, u64)>,
}

impl Scheme {
    fn empty(alphabet: Alphabet, stage: Option<usize>) -> Self {
        Scheme { alphabet, nodes: BTreeMap::new(), arcs: BTreeMap::new(), next_fork: 0, next_arc: 0, stage }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn stage(&self) -> Option<usize> {
        self.stage
    }

    pub fn forks(&self) -> impl Iterator<Item = ForkId> + '_ {
        self.nodes.keys().copied()
    }

    pub fn arcs(&self) -> impl Iterator<Item = &SchemeArc> {
        self.arcs.values()
    }

    pub fn contains(&self, id: ForkId) -> bool {
        self.nodes.contains_key(&id)
    }

    /// Total weight.
    pub fn size(&self) -> u64 {
        self.arcs.values().map(|a| a.weight).sum()
    }

    pub fn degree(&self, id: ForkId) -> (usize, usize) {
        let n = &self.nodes[&id];
        (n.ins.len(), n.outs.len())
    }

    pub fn kind(&self, id: ForkId) -> ForkKind {
        match self.degree(id) {
            (i, o) if i >= 2 && o >= 2 => ForkKind::Crossroad,
            (i, _) if i >= 2 => ForkKind::InFork,
            (_, o) if o >= 2 => ForkKind::OutFork,
            _ => ForkKind::Road,
        }
    }

    /// `d`: `Σ(in − 1)` over all forks.
    pub fn in_fork_count(&self) -> usize {
        self.nodes.values().map(|n| n.ins.len().saturating_sub(1)).sum()
    }

    /// A single road with a loop: the scheme of a cycle.
    pub fn is_terminal(&self) -> bool {
        self.nodes.len() == 1 && self.arcs.len() == 1
    }

    pub fn cycle_length(&self) -> Option<u64> {
        self.is_terminal().then(|| self.size())
    }

    pub fn collapsible_pairs(&self) -> Vec<CollapsiblePair> {
        self.arcs
            .values()
            .filter(|a| self.kind(a.source) == ForkKind::InFork && self.kind(a.target) == ForkKind::OutFork)
            .map(|a| CollapsiblePair { in_fork: a.source, out_fork: a.target, weight: a.weight })
            .collect()
    }

    /// `(x, y, z)` when the scheme has exactly one in-fork and one
    /// out-fork: `x` on the in→out arc, `y` and `z` on the two arcs back,
    /// ordered by the out-fork's tail port.
    pub fn one_fork_weights(&self) -> Option<(u64, u64, u64)> {
        if self.nodes.len() != 2 {
            return None;
        }
        let (mut i, mut o) = (None, None);
        for &id in self.nodes.keys() {
            match self.kind(id) {
                ForkKind::InFork if self.degree(id) == (2, 1) => i = Some(id),
                ForkKind::OutFork if self.degree(id) == (1, 2) => o = Some(id),
                _ => return None,
            }
        }
        let (i, o) = (i?, o?);
        let x = self.arc(self.nodes[&i].outs[0]);
        if x.target != o {
            return None;
        }
        let mut back: Vec<&SchemeArc> = self.nodes[&o].outs.iter().map(|&a| self.arc(a)).collect();
        if back.iter().any(|a| a.target != i) {
            return None;
        }
        back.sort_by_key(|a| a.source_port);
        Some((x.weight, back[0].weight, back[1].weight))
    }

    pub fn state(&self, index: usize) -> SchemeState {
        SchemeState {
            index,
            size: self.size(),
            in_forks: self.in_fork_count(),
            one_fork: self.one_fork_weights(),
        }
    }

    fn arc(&self, id: ArcId) -> &SchemeArc {
        &self.arcs[&id]
    }

    fn arc_mut(&mut self, id: ArcId) -> &mut SchemeArc {
        self.arcs.get_mut(&id).expect("live arc")
    }

    fn add_node(&mut self, id: Option<ForkId>) -> ForkId {
        let id = id.unwrap_or_else(|| {
            let id = ForkId(self.next_fork);
            self.next_fork += 1;
            id
        });
        self.next_fork = self.next_fork.max(id.0 + 1);
        let clash = self.nodes.insert(id, Node::default());
        debug_assert!(clash.is_none(), "fork {id} allocated twice");
        id
    }

    fn add_arc(&mut self, mut arc: SchemeArc) -> ArcId {
        let id = ArcId(self.next_arc);
        self.next_arc += 1;
        arc.born_weight = arc.weight;
        self.nodes.get_mut(&arc.source).expect("source").outs.push(id);
        self.nodes.get_mut(&arc.target).expect("target").ins.push(id);
        self.arcs.insert(id, arc);
        id
    }

    fn remove_arc(&mut self, id: ArcId) -> SchemeArc {
        let arc = self.arcs.remove(&id).expect("live arc");
        self.nodes.get_mut(&arc.source).expect("source").outs.retain(|&a| a != id);
        self.nodes.get_mut(&arc.target).expect("target").ins.retain(|&a| a != id);
        arc
    }

    fn set_target(&mut self, id: ArcId, target: ForkId, port: Port) {
        let old = self.arc(id).target;
        self.nodes.get_mut(&old).expect("target").ins.retain(|&a| a != id);
        self.nodes.get_mut(&target).expect("new target").ins.push(id);
        let arc = self.arc_mut(id);
        arc.target = target;
        arc.target_port = port;
    }

    fn set_source(&mut self, id: ArcId, source: ForkId, port: Port) {
        let old = self.arc(id).source;
        self.nodes.get_mut(&old).expect("source").outs.retain(|&a| a != id);
        self.nodes.get_mut(&source).expect("new source").outs.push(id);
        let arc = self.arc_mut(id);
        arc.source = source;
        arc.source_port = port;
    }

    /// Drops spellings; used once fork labels stop sharing one length.
    pub fn forget_spellings(&mut self) {
        self.stage = None;
        for a in self.arcs.values_mut() {
            a.spelling = None;
        }
    }

    /// Splits the crossroad `id` into out-forks and in-forks joined by
    /// weight-0 arcs. Size is unchanged.
    pub fn zero_replace(&self, id: ForkId) -> Result<(Scheme, Children)> {
        if !self.contains(id) || self.kind(id) != ForkKind::Crossroad {
            return Err(Error::NotCrossroad(id.0));
        }
        let mut next = self.clone();
        let children = next.replace_crossroad(id, None)?;
        Ok((next, children))
    }

    fn replace_crossroad(&mut self, id: ForkId, ids: Option<&Children>) -> Result<Children> {
        let node = self.nodes[&id].clone();
        let label = self.stage.map(|k| {
            let a = self.arc(node.ins[0]);
            a.spelling.as_ref().map(|s| s[s.len() - k..].to_vec())
        });
        let label = label.flatten();
        let tail_of = |port: Port| {
            port.tail().ok_or_else(|| Error::MalformedScheme(format!("crossroad {id} has an untagged tail")))
        };
        let mut children = Children::default();
        for &a in &node.ins {
            let t = tail_of(self.arc(a).target_port)?;
            let given = ids.and_then(|c| c.out_forks.get(&t).copied());
            let o = self.add_node(given);
            children.out_forks.insert(t, o);
            self.set_target(a, o, Port::Directing);
        }
        for &b in &node.outs {
            let t = tail_of(self.arc(b).source_port)?;
            let given = ids.and_then(|c| c.in_forks.get(&t).copied());
            let i = self.add_node(given);
            children.in_forks.insert(t, i);
            self.set_source(b, i, Port::Directing);
        }
        if children.out_forks.len() != node.ins.len() || children.in_forks.len() != node.outs.len() {
            return Err(Error::MalformedScheme(format!("crossroad {id} repeats a tail index")));
        }
        self.nodes.remove(&id);
        for (&ti, &o) in &children.out_forks {
            for (&tj, &i) in &children.in_forks {
                self.add_arc(SchemeArc {
                    source: o,
                    target: i,
                    source_port: Port::Tail(tj),
                    target_port: Port::Tail(ti),
                    weight: 0,
                    born_weight: 0,
                    spelling: label.clone(),
                });
            }
        }
        Ok(children)
    }

    fn zero_arc(&self, children: &Children, ti: u8, tj: u8) -> Option<ArcId> {
        let o = *children.out_forks.get(&ti)?;
        let i = *children.in_forks.get(&tj)?;
        self.nodes[&o].outs.iter().copied().find(|&a| self.arc(a).target == i && self.arc(a).weight == 0)
    }

    /// Deletes chosen weight-0 arcs of a fresh 0-replacement.
    fn delete_zero_arcs(&mut self, children: &Children, choice: &RestrictionChoice) -> Result<()> {
        for &(ti, tj) in &choice.0 {
            let a = self
                .zero_arc(children, ti, tj)
                .ok_or_else(|| Error::MalformedScheme(format!("no weight-0 arc ({ti}, {tj})")))?;
            self.remove_arc(a);
        }
        for id in children.ids() {
            let (i, o) = self.degree(id);
            if i == 0 || o == 0 {
                return Err(Error::IllegalChoice(id.0));
            }
        }
        Ok(())
    }

    /// Merges every road into a single arc.
    fn contract_roads(&mut self) -> Result<()> {
        loop {
            let road = self.nodes.iter().find_map(|(&id, n)| {
                (n.ins.len() == 1 && n.outs.len() == 1 && n.ins[0] != n.outs[0]).then_some(id)
            });
            let Some(r) = road else { break };
            let (a_id, b_id) = (self.nodes[&r].ins[0], self.nodes[&r].outs[0]);
            let a = self.remove_arc(a_id);
            let b = self.remove_arc(b_id);
            self.nodes.remove(&r);
            let spelling = match (self.stage, a.spelling, b.spelling) {
                (Some(k), Some(mut sa), Some(sb)) => {
                    sa.extend_from_slice(&sb[k..]);
                    Some(sa)
                }
                _ => None,
            };
            self.add_arc(SchemeArc {
                source: a.source,
                target: b.target,
                source_port: a.source_port,
                target_port: b.target_port,
                weight: a.weight + b.weight,
                born_weight: 0,
                spelling,
            });
        }
        let loops = self.nodes.values().filter(|n| n.ins.len() == 1 && n.outs.len() == 1).count();
        if loops > 0 && self.nodes.len() > 1 {
            return Err(Error::MalformedScheme("a cycle split off from the rest of the scheme".into()));
        }
        Ok(())
    }

    pub fn is_strongly_connected(&self) -> bool {
        let Some(&start) = self.nodes.keys().next() else { return true };
        let reach = |forward: bool| {
            let mut seen = BTreeSet::from([start]);
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                let node = &self.nodes[&v];
                let list = if forward { &node.outs } else { &node.ins };
                for &a in list {
                    let arc = self.arc(a);
                    let u = if forward { arc.target } else { arc.source };
                    if seen.insert(u) {
                        queue.push_back(u);
                    }
                }
            }
            seen.len()
        };
        reach(true) == self.nodes.len() && reach(false) == self.nodes.len()
    }

    /// One Rauzy stage in scheme form: in→out arcs lose 1, out→in arcs
    /// gain 1, same-kind arcs are unchanged. Spellings, when tracked, grow
    /// by the letter each moving fork label picks up.
    pub fn h_star(&self) -> Result<Scheme> {
        if self.is_terminal() {
            return Ok(self.clone());
        }
        let mut kinds = HashMap::new();
        for &id in self.nodes.keys() {
            match self.kind(id) {
                ForkKind::Crossroad => return Err(Error::CrossroadsPresent),
                ForkKind::Road => return Err(Error::MalformedScheme(format!("uncontracted road {id}"))),
                k => {
                    kinds.insert(id, k);
                }
            }
        }
        // Letter just before an out-fork / just after an in-fork.
        let mut before = HashMap::new();
        let mut after = HashMap::new();
        if let Some(k) = self.stage {
            for (&id, node) in &self.nodes {
                let (arc_id, pick_before) = match kinds[&id] {
                    ForkKind::OutFork => (node.ins[0], true),
                    _ => (node.outs[0], false),
                };
                let s = self.arc(arc_id).spelling.as_ref();
                let s = s.filter(|s| s.len() > k).ok_or_else(|| {
                    Error::MalformedScheme(format!("fork {id} has no spelled directing arc"))
                })?;
                if pick_before {
                    before.insert(id, s[s.len() - k - 1]);
                } else {
                    after.insert(id, s[k]);
                }
            }
        }
        let mut next = self.clone();
        for (&id, arc) in next.arcs.iter_mut() {
            match (kinds[&arc.source], kinds[&arc.target]) {
                (ForkKind::OutFork, ForkKind::InFork) => arc.weight += 1,
                (ForkKind::InFork, ForkKind::OutFork) => {
                    arc.weight = arc.weight.checked_sub(1).ok_or(Error::NegativeWeight(id.0))?;
                }
                _ => {}
            }
            if let Some(s) = arc.spelling.as_mut() {
                if let Some(&c) = before.get(&arc.source) {
                    s.insert(0, c);
                }
                if let Some(&c) = after.get(&arc.target) {
                    s.push(c);
                }
            }
        }
        next.stage = self.stage.map(|k| k + 1);
        Ok(next)
    }

    /// Joins an in-fork and an out-fork whose connecting arc has weight 0
    /// into one crossroad that keeps the in-fork's id.
    fn merge_pair(&mut self, in_fork: ForkId, out_fork: ForkId) -> Result<ForkId> {
        let joint = self.nodes[&in_fork].outs[0];
        if self.arc(joint).target != out_fork || self.arc(joint).weight != 0 {
            return Err(Error::NotCollapsible { in_fork: in_fork.0, out_fork: out_fork.0 });
        }
        self.remove_arc(joint);
        let outs = self.nodes[&out_fork].outs.clone();
        for b in outs {
            let port = self.arc(b).source_port;
            self.set_source(b, in_fork, port);
        }
        self.nodes.remove(&out_fork);
        Ok(in_fork)
    }

    fn find_pair(&self, out_fork: ForkId, in_fork: ForkId) -> Result<ArcId> {
        let bad = Error::NotCollapsible { in_fork: in_fork.0, out_fork: out_fork.0 };
        if !self.contains(in_fork)
            || !self.contains(out_fork)
            || self.kind(in_fork) != ForkKind::InFork
            || self.kind(out_fork) != ForkKind::OutFork
        {
            return Err(bad);
        }
        let joint = self.nodes[&in_fork].outs[0];
        if self.arc(joint).target == out_fork {
            Ok(joint)
        } else {
            Err(bad)
        }
    }

    /// Drives `out_fork` back along its directing arc into `in_fork`,
    /// resolves the crossroad and deletes the chosen weight-0 arcs.
    pub fn collapse(
        &self,
        out_fork: ForkId,
        in_fork: ForkId,
        choice: &RestrictionChoice,
    ) -> Result<(Scheme, CollapseEvent)> {
        self.collapse_as(out_fork, in_fork, choice, None)
    }

    /// [`Scheme::collapse`] with prescribed ids for the new forks.
    pub fn collapse_as(
        &self,
        out_fork: ForkId,
        in_fork: ForkId,
        choice: &RestrictionChoice,
        ids: Option<&Children>,
    ) -> Result<(Scheme, CollapseEvent)> {
        let joint = self.find_pair(out_fork, in_fork)?;
        let mut next = self.clone();
        next.forget_spellings();
        let length = next.arc(joint).weight;
        // Each unit travelled takes one from the path ahead and adds one to
        // each tail behind.
        for b in next.nodes[&out_fork].outs.clone() {
            next.arc_mut(b).weight += length;
        }
        next.arc_mut(joint).weight = 0;
        let crossroad = next.merge_pair(in_fork, out_fork)?;
        let children = next.replace_crossroad(crossroad, ids)?;
        next.delete_zero_arcs(&children, choice)?;
        next.contract_roads()?;
        if !next.is_strongly_connected() {
            return Err(Error::IllegalChoice(in_fork.0));
        }
        let event = CollapseEvent {
            out_fork,
            in_fork,
            path_length: length,
            restrictions_applied: choice.0.len(),
            deleted: choice.0.iter().copied().collect(),
            children: children.ids().filter(|id| next.contains(*id)).collect(),
            size_after: next.size(),
            in_forks_after: next.in_fork_count(),
        };
        Ok((next, event))
    }

    /// DOT text: weights as edge labels, fork kinds as node shapes.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph scheme {\n");
        for &id in self.nodes.keys() {
            let shape = match self.kind(id) {
                ForkKind::Road => "circle",
                ForkKind::InFork => "invtriangle",
                ForkKind::OutFork => "triangle",
                ForkKind::Crossroad => "diamond",
            };
            let _ = writeln!(out, "  {id} [shape={shape}];");
        }
        for a in self.arcs.values() {
            let _ = writeln!(out, "  {} -> {} [label=\"{}\"];", a.source, a.target, a.weight);
        }
        out.push_str("}\n");
        out
    }
}

/// Scheme of a Rauzy graph. A bare cycle becomes a single road with one
/// loop weighted by the cycle length.
pub fn to_scheme(g: &RauzyGraph) -> Scheme {
    let k = g.order();
    let degrees = g.degrees();
    let mut scheme = Scheme::empty(g.alphabet(), Some(k));
    let forks: Vec<&[u8]> = degrees.iter().filter(|(_, &d)| d != (1, 1)).map(|(v, _)| *v).collect();
    if forks.is_empty() {
        let start = g.vertices().iter().next().expect("cycle has a vertex");
        let mut spelling = start.clone();
        let mut v = start.clone();
        loop {
            let e = g.out_edges(&v).next().expect("road").clone();
            spelling.push(*e.last().expect("nonempty"));
            v = e[1..].to_vec();
            if &v == start {
                break;
            }
        }
        let id = scheme.add_node(None);
        scheme.add_arc(SchemeArc {
            source: id,
            target: id,
            source_port: Port::Directing,
            target_port: Port::Directing,
            weight: g.size() as u64,
            born_weight: 0,
            spelling: Some(spelling),
        });
        return scheme;
    }
    let ids: HashMap<&[u8], ForkId> = forks.iter().map(|&v| (v, scheme.add_node(None))).collect();
    let in_letters = |v: &[u8]| -> Vec<u8> {
        g.alphabet()
            .symbols()
            .filter(|&c| {
                let mut e = vec![c];
                e.extend_from_slice(v);
                g.edges().contains(&e)
            })
            .collect()
    };
    for &v in &forks {
        let outs: Vec<&Vec<u8>> = g.out_edges(v).collect();
        for (j, first) in outs.iter().enumerate() {
            let mut spelling = v.to_vec();
            let mut e: &[u8] = first;
            let mut weight = 0u64;
            loop {
                spelling.push(*e.last().expect("nonempty"));
                weight += 1;
                let u = &e[1..];
                if ids.contains_key(u) {
                    break;
                }
                e = g.out_edges(u).next().expect("road continues");
            }
            let u = &e[1..];
            let entering = e[0];
            let source_port = if outs.len() >= 2 { Port::Tail(j as u8) } else { Port::Directing };
            let ins = in_letters(u);
            let target_port = if ins.len() >= 2 {
                Port::Tail(ins.iter().position(|&c| c == entering).expect("entering letter") as u8)
            } else {
                Port::Directing
            };
            scheme.add_arc(SchemeArc {
                source: ids[v],
                target: ids[u],
                source_port,
                target_port,
                weight,
                born_weight: 0,
                spelling: Some(spelling),
            });
        }
    }
    scheme
}

/// Restrictions chosen at one meeting of the parallel run, with the ids
/// given to the forks it produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meeting {
    pub children: Children,
    pub deleted: Vec<(u8, u8)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DriveOutcome {
    pub word: String,
    pub final_cycle_length: u64,
    /// Crossroads resolved, the one of `G_0` included (multi-letter
    /// crossroads count `(in − 1)(out − 1)`).
    pub crossroads_total: usize,
    /// Restrictions applied, absent letters included.
    pub restrictions_total: usize,
    pub absent_letters: usize,
    pub d_initial: usize,
    /// Size of the scheme right after `G_0`'s crossroad is resolved.
    pub initial_size: u64,
    pub events: Vec<CollapseEvent>,
    /// Scheme after each collapse. In a parallel run this is after each
    /// tick, with other forks part-way along their paths.
    pub states: Vec<SchemeState>,
}

/// Everything the parallel run leaves behind for replays.
#[derive(Clone, Debug)]
pub struct ParallelRun {
    pub outcome: DriveOutcome,
    /// The scheme after resolving `G_0`'s crossroad.
    pub initial: Scheme,
    /// Meeting record keyed by `(in-fork, out-fork)`.
    pub meetings: HashMap<(ForkId, ForkId), Meeting>,
    /// Scheme of `G_k` (crossroads merged, not yet replaced) for each stage.
    pub stages: Vec<Scheme>,
}

/// New forks, deleted `(i, j)` pairs and `(in − 1)(out − 1)` of one
/// resolved crossroad.
type Resolution = (Children, Vec<(u8, u8)>, usize);

/// Resolves one crossroad in word-driven mode.
fn resolve_by_word(scheme: &mut Scheme, crossroad: ForkId, w: &Necklace) -> Result<Resolution> {
    let (i, o) = scheme.degree(crossroad);
    let k = scheme.stage.ok_or_else(|| Error::MalformedScheme("spellings are not tracked".into()))?;
    let children = scheme.replace_crossroad(crossroad, None)?;
    let letter_before = |s: &Scheme, id: ForkId| -> Result<u8> {
        let sp = s.arc(s.nodes[&id].ins[0]).spelling.as_ref().filter(|sp| sp.len() > k);
        sp.map(|sp| sp[sp.len() - k - 1])
            .ok_or_else(|| Error::MalformedScheme(format!("tail into {id} is unspelled")))
    };
    let letter_after = |s: &Scheme, id: ForkId| -> Result<u8> {
        let sp = s.arc(s.nodes[&id].outs[0]).spelling.as_ref().filter(|sp| sp.len() > k);
        sp.map(|sp| sp[k]).ok_or_else(|| Error::MalformedScheme(format!("tail out of {id} is unspelled")))
    };
    let mut deleted = Vec::new();
    for (&ti, &of) in &children.out_forks {
        for (&tj, &inf) in &children.in_forks {
            let zero = scheme.zero_arc(&children, ti, tj).expect("fresh weight-0 arc");
            let mut word = vec![letter_before(scheme, of)?];
            word.extend_from_slice(scheme.arc(zero).spelling.as_deref().unwrap_or_default());
            word.push(letter_after(scheme, inf)?);
            if !w.contains(&word) {
                deleted.push((ti, tj));
            }
        }
    }
    scheme.delete_zero_arcs(&children, &RestrictionChoice::of(&deleted))?;
    Ok((children, deleted, (i - 1) * (o - 1)))
}

/// Word-driven run of all forks moving at once, one Rauzy stage per tick.
pub fn parallel_run(w: &Necklace) -> Result<ParallelRun> {
    let letters = w.letters().len();
    if letters < 2 {
        return Err(Error::Precondition(format!("{w} uses a single letter")));
    }
    let absent = w.alphabet().size() - letters;
    let mut scheme = to_scheme(&build_graph(w, 0));
    let mut stages = vec![scheme.clone()];
    let d_initial = scheme.in_fork_count();
    let mut crossroads = 0;
    let mut restrictions = absent;
    let mut meetings = HashMap::new();
    let mut events = Vec::new();

    let root = scheme.forks().next().expect("G_0 has one vertex");
    let (_, deleted, weight) = resolve_by_word(&mut scheme, root, w)?;
    crossroads += weight;
    restrictions += deleted.len();
    scheme.contract_roads()?;
    let initial = scheme.clone();
    let initial_size = scheme.size();
    let mut states = vec![scheme.state(1 + crossroads)];

    while !scheme.is_terminal() {
        if stages.len() > w.n() + 1 {
            return Err(Error::MalformedScheme("parallel run did not reach a cycle".into()));
        }
        scheme = scheme.h_star()?;
        let meeting: Vec<CollapsiblePair> =
            scheme.collapsible_pairs().into_iter().filter(|p| p.weight == 0).collect();
        let mut born = Vec::with_capacity(meeting.len());
        for p in &meeting {
            let joint = scheme.find_pair(p.out_fork, p.in_fork)?;
            born.push(scheme.arc(joint).born_weight);
            scheme.merge_pair(p.in_fork, p.out_fork)?;
        }
        stages.push(scheme.clone());
        let mut tick = Vec::with_capacity(meeting.len());
        for (p, born) in meeting.iter().zip(born) {
            let (children, deleted, weight) = resolve_by_word(&mut scheme, p.in_fork, w)?;
            crossroads += weight;
            restrictions += deleted.len();
            meetings.insert(
                (p.in_fork, p.out_fork),
                Meeting { children: children.clone(), deleted: deleted.clone() },
            );
            tick.push((*p, born, deleted, children));
        }
        scheme.contract_roads()?;
        let (size, d) = (scheme.size(), scheme.in_fork_count());
        for (p, born, deleted, children) in tick {
            events.push(CollapseEvent {
                out_fork: p.out_fork,
                in_fork: p.in_fork,
                path_length: born,
                restrictions_applied: deleted.len(),
                deleted,
                children: children.ids().filter(|id| scheme.contains(*id)).collect(),
                size_after: size,
                in_forks_after: d,
            });
        }
        states.push(scheme.state(1 + crossroads));
    }

    let outcome = DriveOutcome {
        word: w.to_string(),
        final_cycle_length: scheme.size(),
        crossroads_total: crossroads,
        restrictions_total: restrictions,
        absent_letters: absent,
        d_initial,
        initial_size,
        events,
        states,
    };
    Ok(ParallelRun { outcome, initial, meetings, stages })
}

pub fn parallel_drive(w: &Necklace) -> Result<DriveOutcome> {
    parallel_run(w).map(|run| run.outcome)
}

/// Picks which collapsible pair goes next.
pub trait SchedulePolicy {
    fn pick(&mut self, scheme: &Scheme, pairs: &[CollapsiblePair]) -> usize;
}

/// Always the first pair in id order.
#[derive(Clone, Copy, Debug, Default)]
pub struct FirstPair;

impl SchedulePolicy for FirstPair {
    fn pick(&mut self, _: &Scheme, _: &[CollapsiblePair]) -> usize {
        0
    }
}

/// The pair on the lightest path; ties go to the first.
#[derive(Clone, Copy, Debug, Default)]
pub struct ShortestPath;

impl SchedulePolicy for ShortestPath {
    fn pick(&mut self, _: &Scheme, pairs: &[CollapsiblePair]) -> usize {
        (0..pairs.len()).min_by_key(|&i| pairs[i].weight).unwrap_or(0)
    }
}

/// The pair on the heaviest path.
#[derive(Clone, Copy, Debug, Default)]
pub struct LongestPath;

impl SchedulePolicy for LongestPath {
    fn pick(&mut self, _: &Scheme, pairs: &[CollapsiblePair]) -> usize {
        (0..pairs.len()).rev().max_by_key(|&i| pairs[i].weight).unwrap_or(0)
    }
}

/// Uniform choice from a seeded generator.
#[derive(Clone, Debug)]
pub struct RandomSchedule(StdRng);

impl RandomSchedule {
    pub fn new(seed: u64) -> Self {
        RandomSchedule(StdRng::seed_from_u64(seed))
    }
}

impl SchedulePolicy for RandomSchedule {
    fn pick(&mut self, _: &Scheme, pairs: &[CollapsiblePair]) -> usize {
        self.0.gen_range(0..pairs.len().max(1))
    }
}

/// A fixed list of picks, for replaying a schedule exactly.
#[derive(Clone, Debug)]
pub struct Scripted(pub VecDeque<usize>);

impl SchedulePolicy for Scripted {
    fn pick(&mut self, _: &Scheme, _: &[CollapsiblePair]) -> usize {
        self.0.pop_front().unwrap_or(0)
    }
}

/// Collapses one pair at a time from the scheme of `G_0` after its
/// crossroad is resolved, reusing the parallel run's restriction choices.
/// Fails with [`Error::LineageMismatch`] if the schedule brings together a
/// pair that never met in parallel.
pub fn sequential_drive(w: &Necklace, policy: &mut dyn SchedulePolicy) -> Result<DriveOutcome> {
    let run = parallel_run(w)?;
    replay(&run, policy)
}

/// Replays a parallel run's meetings in the order chosen by `policy`.
pub fn replay(run: &ParallelRun, policy: &mut dyn SchedulePolicy) -> Result<DriveOutcome> {
    let base = &run.outcome;
    let mut scheme = run.initial.clone();
    scheme.forget_spellings();
    let initial_crossroads = base.crossroads_total - base.events.len();
    let mut crossroads = initial_crossroads;
    let mut restrictions =
        base.restrictions_total - base.events.iter().map(|e| e.restrictions_applied).sum::<usize>();
    let mut events = Vec::new();
    let mut states = vec![scheme.state(1 + crossroads)];
    while !scheme.is_terminal() {
        let pairs = scheme.collapsible_pairs();
        if pairs.is_empty() {
            return Err(Error::MalformedScheme("forks remain but none is collapsible".into()));
        }
        let index = policy.pick(&scheme, &pairs);
        let pair = *pairs.get(index).ok_or(Error::BadSchedule { index, available: pairs.len() })?;
        let meeting = run
            .meetings
            .get(&(pair.in_fork, pair.out_fork))
            .ok_or(Error::LineageMismatch { in_fork: pair.in_fork.0, out_fork: pair.out_fork.0 })?;
        let choice = RestrictionChoice::of(&meeting.deleted);
        let (next, event) =
            scheme.collapse_as(pair.out_fork, pair.in_fork, &choice, Some(&meeting.children))?;
        crossroads += 1;
        restrictions += event.restrictions_applied;
        events.push(event);
        scheme = next;
        states.push(scheme.state(1 + crossroads));
    }
    Ok(DriveOutcome {
        word: base.word.clone(),
        final_cycle_length: scheme.size(),
        crossroads_total: crossroads,
        restrictions_total: restrictions,
        absent_letters: base.absent_letters,
        d_initial: base.d_initial,
        initial_size: base.initial_size,
        events,
        states,
    })
}

impl DriveOutcome {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("outcome serializes")
    }
}
