//! Bipartite graphs, maximum matching by augmenting paths, and the perfect
//! matching guaranteed when every cross pair of vertices has degree sum at
//! least the side size.

use thiserror::Error;

/// A bipartite graph on `left` x `right` index sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    adj: Vec<Vec<usize>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("sides differ: left {left}, right {right}")]
    SidesDiffer { left: usize, right: usize },
    #[error(
        "degree-sum precondition violated: d({left_vertex}) + d({right_vertex}) = {degree_sum} < {t}"
    )]
    PreconditionViolated {
        left_vertex: usize,
        right_vertex: usize,
        degree_sum: usize,
        t: usize,
    },
    #[error("degree-sum precondition held but maximum matching has size {found} < {t}")]
    ImpossibleState { found: usize, t: usize },
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize) -> Self {
        Self {
            left,
            right,
            adj: vec![Vec::new(); left],
        }
    }

    pub fn from_edges(left: usize, right: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::new(left, right);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Adds an edge; duplicates are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.left && v < self.right, "index out of range");
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn left_degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn right_degree(&self, v: usize) -> usize {
        self.adj.iter().filter(|nbrs| nbrs.contains(&v)).count()
    }

    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.adj[u]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// Maximum-cardinality matching via augmenting paths, deterministic for a
/// given edge insertion order: left vertices are processed ascending and
/// neighbors tried in sorted order.
pub fn max_matching(h: &BipartiteGraph) -> Vec<(usize, usize)> {
    let mut right_match: Vec<Option<usize>> = vec![None; h.right];
    let mut visited = vec![false; h.right];

    fn augment(
        h: &BipartiteGraph,
        u: usize,
        visited: &mut [bool],
        right_match: &mut [Option<usize>],
    ) -> bool {
        for &v in h.neighbors(u) {
            if visited[v] {
                continue;
            }
            visited[v] = true;
            if right_match[v].is_none()
                || augment(h, right_match[v].unwrap(), visited, right_match)
            {
                right_match[v] = Some(u);
                return true;
            }
        }
        false
    }

    for u in 0..h.left {
        visited.iter_mut().for_each(|s| *s = false);
        augment(h, u, &mut visited, &mut right_match);
    }

    let mut out: Vec<(usize, usize)> = right_match
        .iter()
        .enumerate()
        .filter_map(|(v, u)| u.map(|u| (u, v)))
        .collect();
    out.sort_unstable();
    out
}

/// Perfect matching under the degree-sum condition: with `|L| = |V| = t` and
/// `d(u) + d(v) >= t` for every cross pair, a maximum matching is perfect.
/// The precondition is checked and its violation is an error; an imperfect
/// matching despite the precondition would be an internal error.
pub fn perfect_matching_degree_sum(
    h: &BipartiteGraph,
) -> Result<Vec<(usize, usize)>, MatchingError> {
    if h.left != h.right {
        return Err(MatchingError::SidesDiffer {
            left: h.left,
            right: h.right,
        });
    }
    let t = h.left;
    let right_degrees: Vec<usize> = (0..t).map(|v| h.right_degree(v)).collect();
    for u in 0..t {
        let du = h.left_degree(u);
        for (v, &dv) in right_degrees.iter().enumerate() {
            if du + dv < t {
                return Err(MatchingError::PreconditionViolated {
                    left_vertex: u,
                    right_vertex: v,
                    degree_sum: du + dv,
                    t,
                });
            }
        }
    }
    let m = max_matching(h);
    if m.len() != t {
        return Err(MatchingError::ImpossibleState { found: m.len(), t });
    }
    Ok(m)
}
