//! Exhaustive reference implementations. Exponential; keep inputs small.

use std::collections::HashSet;

use proofblocks::ExpandedGraph;

/// The parts of a graph the oracles are allowed to look at.
#[derive(Debug, Clone)]
pub struct Definition {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
    pub sets: Vec<Vec<String>>,
}

impl Definition {
    pub fn of(graph: &ExpandedGraph) -> Self {
        Definition {
            nodes: graph.nodes().to_vec(),
            edges: graph
                .edges()
                .map(|(u, v)| (u.to_string(), v.to_string()))
                .collect(),
            sets: graph
                .contiguity_tags()
                .into_iter()
                .map(|s| s.into_iter().map(str::to_string).collect())
                .collect(),
        }
    }

    /// (a) permutation of the nodes, (b) every edge forward, (c) every
    /// contiguity set in consecutive positions.
    pub fn accepts<S: AsRef<str>>(&self, seq: &[S]) -> bool {
        let seq: Vec<&str> = seq.iter().map(AsRef::as_ref).collect();
        let mut sorted_seq = seq.clone();
        sorted_seq.sort_unstable();
        let mut sorted_nodes: Vec<&str> = self.nodes.iter().map(String::as_str).collect();
        sorted_nodes.sort_unstable();
        if sorted_seq != sorted_nodes {
            return false;
        }
        let pos = |t: &str| seq.iter().position(|s| *s == t).unwrap();
        if self.edges.iter().any(|(u, v)| pos(u) > pos(v)) {
            return false;
        }
        self.sets.iter().all(|set| {
            let positions: Vec<usize> = set.iter().map(|t| pos(t)).collect();
            let lo = *positions.iter().min().unwrap();
            let hi = *positions.iter().max().unwrap();
            hi - lo + 1 == set.len()
        })
    }

    /// All accepted orderings, found by filtering every permutation.
    /// Permutations are generated in lexicographic order of node position.
    pub fn accepted(&self) -> Vec<Vec<String>> {
        permutations(self.nodes.len())
            .into_iter()
            .map(|p| p.into_iter().map(|i| self.nodes[i].clone()).collect::<Vec<_>>())
            .filter(|s| self.accepts(s))
            .collect()
    }
}

/// Every permutation of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                go(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

/// Textbook LCS length.
pub fn lcs<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    let mut table = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            table[i][j] = if a[i - 1].as_ref() == b[j - 1].as_ref() {
                table[i - 1][j - 1] + 1
            } else {
                table[i - 1][j].max(table[i][j - 1])
            };
        }
    }
    table[a.len()][b.len()]
}

/// Insert/delete distance between two sequences.
pub fn indel_distance<A: AsRef<str>, B: AsRef<str>>(a: &[A], b: &[B]) -> usize {
    a.len() + b.len() - 2 * lcs(a, b)
}

/// Minimum insert/delete distance from `seq` to any accepted ordering, or
/// `None` when nothing is accepted.
pub fn edit_distance<S: AsRef<str>>(def: &Definition, seq: &[S]) -> Option<usize> {
    def.accepted().iter().map(|t| indel_distance(seq, t)).min()
}

/// True if some accepted ordering starts with `prefix`.
pub fn is_accepted_prefix<S: AsRef<str>>(accepted: &[Vec<String>], prefix: &[S]) -> bool {
    accepted.iter().any(|t| {
        t.len() >= prefix.len() && t.iter().zip(prefix).all(|(a, b)| a == b.as_ref())
    })
}

/// Edges of the transitive closure, as tag pairs.
pub fn closure(def: &Definition) -> HashSet<(String, String)> {
    let mut closed: HashSet<(String, String)> = def.edges.iter().cloned().collect();
    loop {
        let mut added = Vec::new();
        for (a, b) in &closed {
            for (c, d) in &closed {
                if b == c && !closed.contains(&(a.clone(), d.clone())) {
                    added.push((a.clone(), d.clone()));
                }
            }
        }
        if added.is_empty() {
            return closed;
        }
        closed.extend(added);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(0), vec![Vec::<usize>::new()]);
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(3)[1], [0, 2, 1]);
    }

    #[test]
    fn lcs_basics() {
        assert_eq!(lcs(&["a", "b", "c"], &["a", "c"]), 2);
        assert_eq!(lcs::<&str, &str>(&[], &["a"]), 0);
        assert_eq!(indel_distance(&["b", "a"], &["a", "b"]), 2);
    }
}
