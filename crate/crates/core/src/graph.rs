//! Expansion of authored dependencies into a precedence DAG over the required
//! blocks, plus the contiguity sets contributed by subproof groups.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{Error, Result};
use crate::model::Question;

/// Largest graph `valid_orderings` will enumerate without an explicit limit.
pub const ENUMERATION_GUARD: usize = 10;

/// The grading semantics of a question: an ordering is accepted iff it is a
/// permutation of `nodes` that respects every edge and keeps each contiguity
/// set in consecutive positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpandedGraph {
    nodes: Vec<String>,
    index: HashMap<String, usize>,
    edges: BTreeSet<(usize, usize)>,
    preds: Vec<Vec<usize>>,
    contiguity: Vec<Vec<usize>>,
    group_of: Vec<Option<usize>>,
}

impl ExpandedGraph {
    /// Builds a graph from node tags, index edges `(before, after)` and
    /// contiguity sets of node indices. Rejects cycles, dangling indices and
    /// overlapping sets. Empty contiguity sets are dropped.
    pub fn from_parts(
        nodes: Vec<String>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        contiguity: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = nodes.len();
        let mut index = HashMap::with_capacity(n);
        for (i, tag) in nodes.iter().enumerate() {
            if index.insert(tag.clone(), i).is_some() {
                return Err(Error::DuplicateTag(tag.clone()));
            }
        }
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().collect();
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::UnknownNode(format!("#{}", u.max(v))));
            }
        }
        let mut preds = vec![Vec::new(); n];
        for &(u, v) in &edges {
            preds[v].push(u);
        }

        let mut group_of = vec![None; n];
        let mut sets = Vec::new();
        for set in contiguity {
            let mut set: Vec<usize> = set.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            if set.is_empty() {
                continue;
            }
            let gi = sets.len();
            for &m in &set {
                if m >= n {
                    return Err(Error::UnknownNode(format!("#{m}")));
                }
                if group_of[m].replace(gi).is_some() {
                    return Err(Error::OverlappingGroups(nodes[m].clone()));
                }
            }
            set.shrink_to_fit();
            sets.push(set);
        }

        let graph = ExpandedGraph {
            nodes,
            index,
            edges,
            preds,
            contiguity: sets,
            group_of,
        };
        if let Some(cycle) = graph.find_cycle() {
            return Err(Error::Cycle(cycle));
        }
        Ok(graph)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Required block tags in author order.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn index_of(&self, tag: &str) -> Option<usize> {
        self.index.get(tag).copied()
    }

    pub fn contains(&self, tag: &str) -> bool {
        self.index.contains_key(tag)
    }

    pub fn edge_indices(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(|&(u, v)| (self.nodes[u].as_str(), self.nodes[v].as_str()))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, before: &str, after: &str) -> bool {
        match (self.index_of(before), self.index_of(after)) {
            (Some(u), Some(v)) => self.edges.contains(&(u, v)),
            _ => false,
        }
    }

    /// Direct predecessors of node `i`.
    pub fn preds(&self, i: usize) -> &[usize] {
        &self.preds[i]
    }

    pub fn contiguity_sets(&self) -> &[Vec<usize>] {
        &self.contiguity
    }

    /// Contiguity sets as tags, for display and comparison.
    pub fn contiguity_tags(&self) -> Vec<Vec<&str>> {
        self.contiguity
            .iter()
            .map(|set| set.iter().map(|&i| self.nodes[i].as_str()).collect())
            .collect()
    }

    pub fn group_of(&self, i: usize) -> Option<usize> {
        self.group_of[i]
    }

    /// Copy of the graph with one edge removed.
    pub fn without_edge(&self, edge: (usize, usize)) -> ExpandedGraph {
        let mut g = self.clone();
        if g.edges.remove(&edge) {
            g.preds[edge.1].retain(|&u| u != edge.0);
        }
        g
    }

    /// `reach[u][v]` is true iff there is a nonempty path `u -> ... -> v`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut reach = vec![vec![false; n]; n];
        for v in self.topological_order() {
            for &u in &self.preds[v] {
                reach[u][v] = true;
                for row in reach.iter_mut() {
                    if row[u] {
                        row[v] = true;
                    }
                }
            }
        }
        reach
    }

    fn topological_order(&self) -> Vec<usize> {
        let n = self.len();
        let mut indegree: Vec<usize> = self.preds.iter().map(Vec::len).collect();
        let mut succs = vec![Vec::new(); n];
        for &(u, v) in &self.edges {
            succs[u].push(v);
        }
        let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            order.push(u);
            for &v in &succs[u] {
                indegree[v] -= 1;
                if indegree[v] == 0 {
                    stack.push(v);
                }
            }
        }
        order
    }

    fn find_cycle(&self) -> Option<Vec<String>> {
        if self.topological_order().len() == self.len() {
            return None;
        }
        // Walk predecessors among the nodes left over by Kahn's algorithm;
        // every such node has a leftover predecessor, so the walk must repeat.
        let done: HashSet<usize> = self.topological_order().into_iter().collect();
        let start = (0..self.len()).find(|v| !done.contains(v))?;
        let mut seen = HashMap::new();
        let mut path = Vec::new();
        let mut cur = start;
        while !seen.contains_key(&cur) {
            seen.insert(cur, path.len());
            path.push(cur);
            cur = *self.preds[cur].iter().find(|u| !done.contains(u))?;
        }
        let mut cycle: Vec<String> = path[seen[&cur]..]
            .iter()
            .rev()
            .map(|&i| self.nodes[i].clone())
            .collect();
        cycle.push(cycle[0].clone());
        Some(cycle)
    }
}

/// Expands a question's `depends` declarations into precedence edges.
///
/// A dependency on a group means "after every member"; a group's own
/// dependencies apply to each of its members. Distractors never become nodes.
pub fn expand(question: &Question) -> Result<ExpandedGraph> {
    let mut seen = HashSet::new();
    for tag in question
        .blocks
        .iter()
        .map(|b| &b.tag)
        .chain(question.groups.iter().map(|g| &g.tag))
    {
        if !seen.insert(tag.as_str()) {
            return Err(Error::DuplicateTag(tag.clone()));
        }
    }

    let nodes: Vec<String> = question.required_blocks().map(|b| b.tag.clone()).collect();
    if nodes.is_empty() {
        return Err(Error::NoRequiredBlocks);
    }
    let node_index: HashMap<&str, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_str(), i))
        .collect();

    let mut members: HashMap<&str, Vec<usize>> = HashMap::new();
    for group in &question.groups {
        let mut required = Vec::new();
        let mut listed = HashSet::new();
        for member in &group.members {
            if question.group(member).is_some() {
                return Err(Error::NestedGroup(group.tag.clone()));
            }
            let Some(block) = question.block(member) else {
                return Err(Error::UnknownReference {
                    from: group.tag.clone(),
                    to: member.clone(),
                });
            };
            if block.group.as_deref() != Some(group.tag.as_str()) || !listed.insert(member) {
                return Err(Error::GroupMembership(group.tag.clone()));
            }
            if let Some(&i) = node_index.get(member.as_str()) {
                required.push(i);
            }
        }
        if group.members.is_empty() {
            return Err(Error::GroupMembership(group.tag.clone()));
        }
        members.insert(group.tag.as_str(), required);
    }
    for block in &question.blocks {
        if let Some(g) = &block.group {
            let ok = question
                .group(g)
                .is_some_and(|grp| grp.members.iter().any(|m| m == &block.tag));
            if !ok {
                return Err(Error::GroupMembership(g.clone()));
            }
        }
    }

    // Resolves a depends entry to the node indices it stands for.
    let resolve = |from: &str, dep: &str| -> Result<Vec<usize>> {
        if let Some(block) = question.block(dep) {
            if block.is_distractor {
                return Err(Error::DistractorDependency {
                    from: from.to_string(),
                    to: dep.to_string(),
                });
            }
            Ok(vec![node_index[dep]])
        } else if let Some(m) = members.get(dep) {
            Ok(m.clone())
        } else {
            Err(Error::UnknownReference {
                from: from.to_string(),
                to: dep.to_string(),
            })
        }
    };

    let mut edges = BTreeSet::new();
    for block in &question.blocks {
        if block.is_distractor {
            if let Some(dep) = block.depends.first() {
                return Err(Error::DistractorDependency {
                    from: block.tag.clone(),
                    to: dep.clone(),
                });
            }
            continue;
        }
        let v = node_index[block.tag.as_str()];
        for dep in &block.depends {
            for u in resolve(&block.tag, dep)? {
                edges.insert((u, v));
            }
        }
    }
    for group in &question.groups {
        let targets = &members[group.tag.as_str()];
        for dep in &group.depends {
            for u in resolve(&group.tag, dep)? {
                for &v in targets {
                    edges.insert((u, v));
                }
            }
        }
    }
    if let Some(&(u, _)) = edges.iter().find(|(u, v)| u == v) {
        return Err(Error::Cycle(vec![nodes[u].clone(), nodes[u].clone()]));
    }

    let contiguity = question
        .groups
        .iter()
        .map(|g| members[g.tag.as_str()].clone())
        .collect();
    ExpandedGraph::from_parts(nodes, edges, contiguity)
}

/// Left-to-right placement simulation shared by grading feedback,
/// enumeration and counting. A node is placeable when it is unplaced, all its
/// predecessors are placed, and it does not break into or out of an
/// unfinished group.
#[derive(Debug, Clone)]
pub(crate) struct Placer<'g> {
    graph: &'g ExpandedGraph,
    placed: Vec<bool>,
    placed_count: usize,
    open: Option<usize>,
    open_left: usize,
}

/// State needed to undo one `place` call.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Undo {
    node: usize,
    open: Option<usize>,
    open_left: usize,
}

impl<'g> Placer<'g> {
    pub(crate) fn new(graph: &'g ExpandedGraph) -> Self {
        Placer {
            graph,
            placed: vec![false; graph.len()],
            placed_count: 0,
            open: None,
            open_left: 0,
        }
    }

    pub(crate) fn can_place(&self, node: usize) -> bool {
        if self.placed[node] {
            return false;
        }
        if !self.graph.preds[node].iter().all(|&u| self.placed[u]) {
            return false;
        }
        match self.open {
            Some(g) => self.graph.group_of[node] == Some(g),
            None => true,
        }
    }

    pub(crate) fn place(&mut self, node: usize) -> Undo {
        let undo = Undo {
            node,
            open: self.open,
            open_left: self.open_left,
        };
        self.placed[node] = true;
        self.placed_count += 1;
        if self.open.is_none() {
            if let Some(g) = self.graph.group_of[node] {
                self.open = Some(g);
                self.open_left = self.graph.contiguity[g].len();
            }
        }
        if self.open.is_some() {
            self.open_left -= 1;
            if self.open_left == 0 {
                self.open = None;
            }
        }
        undo
    }

    pub(crate) fn undo(&mut self, undo: Undo) {
        self.placed[undo.node] = false;
        self.placed_count -= 1;
        self.open = undo.open;
        self.open_left = undo.open_left;
    }

    pub(crate) fn is_complete(&self) -> bool {
        self.placed_count == self.graph.len()
    }
}

/// True iff `seq` is a permutation of the graph's nodes that respects every
/// edge and lists each contiguity set consecutively.
pub fn is_valid_ordering<S: AsRef<str>>(graph: &ExpandedGraph, seq: &[S]) -> bool {
    let n = graph.len();
    if seq.len() != n {
        return false;
    }
    let mut position = vec![usize::MAX; n];
    for (pos, tag) in seq.iter().enumerate() {
        match graph.index_of(tag.as_ref()) {
            Some(i) if position[i] == usize::MAX => position[i] = pos,
            _ => return false,
        }
    }
    if graph.edges.iter().any(|&(u, v)| position[u] > position[v]) {
        return false;
    }
    graph.contiguity.iter().all(|set| {
        let lo = set.iter().map(|&i| position[i]).min().unwrap_or(0);
        let hi = set.iter().map(|&i| position[i]).max().unwrap_or(0);
        hi - lo + 1 == set.len()
    })
}

/// Enumerates accepted orderings in lexicographic order of author position.
///
/// Without a `limit`, graphs above [`ENUMERATION_GUARD`] nodes are refused.
pub fn valid_orderings(graph: &ExpandedGraph, limit: Option<usize>) -> Result<Vec<Vec<String>>> {
    if limit.is_none() && graph.len() > ENUMERATION_GUARD {
        return Err(Error::TooLarge {
            nodes: graph.len(),
            limit: ENUMERATION_GUARD,
        });
    }
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    let mut placer = Placer::new(graph);
    let mut prefix = Vec::with_capacity(graph.len());
    enumerate_into(graph, &mut placer, &mut prefix, &mut out, limit);
    Ok(out)
}

fn enumerate_into(
    graph: &ExpandedGraph,
    placer: &mut Placer<'_>,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<String>>,
    limit: usize,
) {
    if placer.is_complete() {
        out.push(prefix.iter().map(|&i| graph.nodes[i].clone()).collect());
        return;
    }
    for node in 0..graph.len() {
        if out.len() >= limit {
            return;
        }
        if placer.can_place(node) {
            let undo = placer.place(node);
            prefix.push(node);
            enumerate_into(graph, placer, prefix, out, limit);
            prefix.pop();
            placer.undo(undo);
        }
    }
}
