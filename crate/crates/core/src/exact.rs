//! Exact b-chromatic number by backtracking search on small graphs; the
//! independent oracle used to validate the constructive solver.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{verify_b_coloring, Coloring};
use crate::graph::Graph;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("search node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExactResult {
    /// The b-chromatic number.
    pub b: usize,
    /// A verified b-coloring with `b` colors.
    pub witness: Coloring,
    pub stats: SearchStats,
}

struct Search<'a> {
    g: &'a Graph,
    k: usize,
    /// Vertices in assignment order: descending degree, then id.
    order: Vec<usize>,
    colors: Vec<usize>, // 0 = unassigned
    nodes: u64,
    budget: u64,
    /// When true, dominance feasibility is pruned and checked at leaves
    /// (b-coloring decision); when false only properness matters
    /// (chromatic number decision).
    want_dominance: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, k: usize, budget: u64, want_dominance: bool) -> Self {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        Self {
            g,
            k,
            order,
            colors: vec![0; g.n()],
            nodes: 0,
            budget,
            want_dominance,
        }
    }

    /// Distinct assigned neighbor colors of `v` other than `j`, and the
    /// number of unassigned neighbors.
    fn neighborhood_profile(&self, v: usize, j: usize) -> (usize, usize) {
        let mut seen = vec![false; self.k + 1];
        let mut distinct = 0;
        let mut unassigned = 0;
        for &w in self.g.neighbors(v) {
            let cw = self.colors[w];
            if cw == 0 {
                unassigned += 1;
            } else if cw != j && !seen[cw] {
                seen[cw] = true;
                distinct += 1;
            }
        }
        (distinct, unassigned)
    }

    /// True if `v` could still become a dominant vertex for color `j`.
    fn potential_dominant(&self, v: usize, j: usize) -> bool {
        let cv = self.colors[v];
        if cv != 0 && cv != j {
            return false;
        }
        if cv == 0 && self.g.neighbors(v).iter().any(|&w| self.colors[w] == j) {
            return false;
        }
        let (distinct, unassigned) = self.neighborhood_profile(v, j);
        let missing = (self.k - 1).saturating_sub(distinct);
        missing <= unassigned
    }

    /// A color with no potential dominant vertex can never be fixed by
    /// further assignments, so the branch is dead.
    fn dominance_feasible(&self) -> bool {
        (1..=self.k).all(|j| (0..self.g.n()).any(|v| self.potential_dominant(v, j)))
    }

    fn is_b_coloring_leaf(&self) -> bool {
        (1..=self.k).all(|j| {
            (0..self.g.n()).any(|v| {
                self.colors[v] == j && {
                    let (distinct, _) = self.neighborhood_profile(v, j);
                    distinct == self.k - 1
                }
            })
        })
    }

    fn solve(&mut self, pos: usize, max_used: usize) -> Result<bool, ExactError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ExactError::BudgetExceeded {
                budget: self.budget,
            });
        }
        if pos == self.order.len() {
            if max_used < self.k {
                return Ok(false);
            }
            return Ok(!self.want_dominance || self.is_b_coloring_leaf());
        }
        // All k colors must still be reachable.
        let remaining = self.order.len() - pos;
        if max_used + remaining < self.k {
            return Ok(false);
        }
        let v = self.order[pos];
        // New colors in first-appearance order: at most one fresh color may
        // be opened here, which breaks color symmetry.
        let limit = (max_used + 1).min(self.k);
        for color in 1..=limit {
            if self.g.neighbors(v).iter().any(|&w| self.colors[w] == color) {
                continue;
            }
            self.colors[v] = color;
            let feasible = !self.want_dominance || self.dominance_feasible();
            if feasible && self.solve(pos + 1, max_used.max(color))? {
                return Ok(true);
            }
            self.colors[v] = 0;
        }
        Ok(false)
    }
}

/// Searches for a proper coloring of `g` using exactly `k` colors in which
/// every color has a dominant vertex. `None` means the search space was
/// exhausted; running out of budget is an error, never a `None`.
pub fn exists_b_coloring(
    g: &Graph,
    k: usize,
    budget: u64,
) -> Result<Option<Coloring>, ExactError> {
    assert!(k >= 1);
    if g.n() == 0 {
        return Ok(None);
    }
    let mut search = Search::new(g, k, budget, true);
    if search.solve(0, 0)? {
        let assignment = search.colors.iter().map(|&c| Some(c)).collect();
        let witness = Coloring::from_assignment(assignment, k).expect("search colors in range");
        debug_assert!(verify_b_coloring(g, &witness, k).is_b_coloring);
        Ok(Some(witness))
    } else {
        Ok(None)
    }
}

/// The largest `k` in `1..=max_degree+1` admitting a b-coloring, searched
/// descending from the top. Intended for small graphs (roughly n <= 14);
/// the node budget is the only hard guard.
pub fn exact_b_chromatic(g: &Graph, budget: u64) -> Result<ExactResult, ExactError> {
    assert!(g.n() > 0, "empty graph has no b-chromatic number");
    let start = Instant::now();
    let max_degree = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut nodes = 0u64;
    for k in (1..=max_degree + 1).rev() {
        let mut search = Search::new(g, k, budget.saturating_sub(nodes), true);
        let found = search.solve(0, 0)?;
        nodes += search.nodes;
        if found {
            let assignment = search.colors.iter().map(|&c| Some(c)).collect();
            let witness =
                Coloring::from_assignment(assignment, k).expect("search colors in range");
            return Ok(ExactResult {
                b: k,
                witness,
                stats: SearchStats {
                    nodes,
                    millis: start.elapsed().as_millis(),
                },
            });
        }
    }
    unreachable!("every nonempty graph has a b-coloring with 1 color or an edge giving 2");
}

/// Plain chromatic number by backtracking, ascending from 1. Plumbing used
/// to check the `chi(G) <= b(G) <= max_degree + 1` interval.
pub fn chromatic_number(g: &Graph, budget: u64) -> Result<usize, ExactError> {
    assert!(g.n() > 0);
    let max_degree = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    let mut nodes = 0u64;
    for k in 1..=max_degree + 1 {
        let mut search = Search::new(g, k, budget.saturating_sub(nodes), false);
        let found = search.solve(0, 0)?;
        nodes += search.nodes;
        if found {
            return Ok(k);
        }
    }
    unreachable!("greedy bound guarantees chromatic number <= max_degree + 1");
}
