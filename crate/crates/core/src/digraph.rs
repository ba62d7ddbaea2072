//! The coloring digraph over the palette: arcs record which colors an
//! F-vertex could take without clashing into K, loops count boundary-proper
//! colors, and rotating colors along a circuit strictly increases the loop
//! count until the F-coloring is compatible with K.

use std::fmt::Write as _;

use thiserror::Error;

use crate::coloring::Coloring;
use crate::graph::Graph;

/// Directed graph on the color set `1..=order`, loops and 2-cycles allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringDigraph {
    order: usize,
    arcs: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DigraphError {
    #[error("vertex {vertex} appears in both K and F")]
    SetsOverlap { vertex: usize },
    #[error("vertex {vertex} in K or F is uncolored")]
    UnassignedVertex { vertex: usize },
    #[error("color {color} missing from F")]
    MissingColorInF { color: usize },
    #[error("color {color} appears twice in F (vertices {first} and {second})")]
    DuplicateColorInF {
        color: usize,
        first: usize,
        second: usize,
    },
    #[error("circuit arc ({from},{to}) not present in the digraph")]
    CircuitArcMissing { from: usize, to: usize },
    #[error("no circuit through color {color} avoiding the pinned color")]
    NoCircuit { color: usize, dot: String },
    #[error("only the pinned color {color} lacks a loop; rotation cannot help")]
    PinnedLoopless { color: usize, dot: String },
    #[error("rotation did not increase the loop count ({before} -> {after})")]
    LoopNotIncreased { before: usize, after: usize },
}

impl ColoringDigraph {
    pub fn new(order: usize) -> Self {
        Self {
            order,
            arcs: vec![false; order * order],
        }
    }

    pub fn from_arcs(order: usize, arcs: &[(usize, usize)]) -> Self {
        let mut d = Self::new(order);
        for &(i, j) in arcs {
            d.add_arc(i, j);
        }
        d
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= 1 && i <= self.order && j >= 1 && j <= self.order);
        (i - 1) * self.order + (j - 1)
    }

    pub fn add_arc(&mut self, i: usize, j: usize) {
        let idx = self.idx(i, j);
        self.arcs[idx] = true;
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arcs[self.idx(i, j)]
    }

    /// Number of loops `(i, i)`.
    pub fn loop_count(&self) -> usize {
        (1..=self.order).filter(|&i| self.has_arc(i, i)).count()
    }

    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.order {
            for j in 1..=self.order {
                if self.has_arc(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// DOT-format dump for failure reports; loop arcs are highlighted.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph coloring_digraph {\n");
        for i in 1..=self.order {
            let _ = writeln!(s, "  {i};");
        }
        for (i, j) in self.arcs() {
            if i == j {
                let _ = writeln!(s, "  {i} -> {j} [color=red, penwidth=2];");
            } else {
                let _ = writeln!(s, "  {i} -> {j};");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the coloring digraph for disjoint vertex sets `K` and `F` under a
/// coloring that assigns all of them, with each palette color appearing
/// exactly once in `F`: arc `(i, j)` is present iff the F-vertex of color
/// `i` has no neighbor of color `j` inside `K`.
pub fn build_digraph(
    g: &Graph,
    k_vertices: &[usize],
    f_vertices: &[usize],
    c: &Coloring,
) -> Result<ColoringDigraph, DigraphError> {
    let order = c.palette_size();
    let mut in_k = vec![false; g.n()];
    for &v in k_vertices {
        if c.get(v).is_none() {
            return Err(DigraphError::UnassignedVertex { vertex: v });
        }
        in_k[v] = true;
    }
    let mut f_vertex_of_color: Vec<Option<usize>> = vec![None; order + 1];
    for &v in f_vertices {
        if in_k[v] {
            return Err(DigraphError::SetsOverlap { vertex: v });
        }
        let color = c.get(v).ok_or(DigraphError::UnassignedVertex { vertex: v })?;
        if let Some(first) = f_vertex_of_color[color] {
            return Err(DigraphError::DuplicateColorInF {
                color,
                first,
                second: v,
            });
        }
        f_vertex_of_color[color] = Some(v);
    }
    let mut d = ColoringDigraph::new(order);
    for i in 1..=order {
        let x = f_vertex_of_color[i].ok_or(DigraphError::MissingColorInF { color: i })?;
        let mut blocked = vec![false; order + 1];
        for &w in g.neighbors(x) {
            if in_k[w] {
                blocked[c.get(w).expect("K vertices are colored")] = true;
            }
        }
        for j in 1..=order {
            if !blocked[j] {
                d.add_arc(i, j);
            }
        }
    }
    Ok(d)
}

/// Finds a directed circuit through color `i` that avoids `forbidden`
/// colors, or `None`. Deterministic: depth-first search preferring the
/// smallest successor color. A loop `(i, i)` counts as a length-1 circuit;
/// the returned sequence lists the circuit's colors starting at `i`.
pub fn find_circuit_through(
    d: &ColoringDigraph,
    i: usize,
    forbidden: &[usize],
) -> Option<Vec<usize>> {
    if forbidden.contains(&i) {
        return None;
    }
    if d.has_arc(i, i) {
        return Some(vec![i]);
    }

    fn dfs(
        d: &ColoringDigraph,
        target: usize,
        current: usize,
        forbidden: &[usize],
        path: &mut Vec<usize>,
        on_path: &mut [bool],
    ) -> bool {
        for next in 1..=d.order() {
            if !d.has_arc(current, next) {
                continue;
            }
            if next == target && path.len() >= 2 {
                return true;
            }
            if next == target || on_path[next] || forbidden.contains(&next) {
                continue;
            }
            path.push(next);
            on_path[next] = true;
            if dfs(d, target, next, forbidden, path, on_path) {
                return true;
            }
            on_path[next] = false;
            path.pop();
        }
        false
    }

    let mut path = vec![i];
    let mut on_path = vec![false; d.order() + 1];
    on_path[i] = true;
    if dfs(d, i, i, forbidden, &mut path, &mut on_path) {
        Some(path)
    } else {
        None
    }
}

/// Recolors the F-vertices by shifting each circuit color to its successor
/// along the circuit; colors off the circuit are unchanged and only
/// F-vertices are modified. Every circuit arc must exist in the digraph.
pub fn rotate_recolor(
    d: &ColoringDigraph,
    c: &Coloring,
    f_vertices: &[usize],
    circuit: &[usize],
) -> Result<Coloring, DigraphError> {
    let mut successor: Vec<Option<usize>> = vec![None; c.palette_size() + 1];
    for (pos, &color) in circuit.iter().enumerate() {
        let next = circuit[(pos + 1) % circuit.len()];
        if !d.has_arc(color, next) {
            return Err(DigraphError::CircuitArcMissing {
                from: color,
                to: next,
            });
        }
        successor[color] = Some(next);
    }
    let mut out = c.clone();
    for &v in f_vertices {
        if let Some(color) = c.get(v) {
            if let Some(next) = successor[color] {
                out.set(v, next);
            }
        }
    }
    Ok(out)
}

/// Rotates until every color has a loop, i.e. the F-coloring is proper
/// against K. Repeatedly picks the smallest loopless color other than
/// `pinned` (the dominant candidate's color, which never rotates), finds a
/// circuit through it, and rotates; each rotation must strictly increase
/// the loop count, so at most `palette` rotations happen.
///
/// Returns the saturated coloring and the number of rotations performed.
pub fn saturate_loops(
    g: &Graph,
    k_vertices: &[usize],
    f_vertices: &[usize],
    c: &Coloring,
    pinned: usize,
) -> Result<(Coloring, usize), DigraphError> {
    let order = c.palette_size();
    let mut current = c.clone();
    let mut d = build_digraph(g, k_vertices, f_vertices, &current)?;
    let mut rotations = 0usize;
    loop {
        let loops = d.loop_count();
        if loops == order {
            return Ok((current, rotations));
        }
        let target = (1..=order).find(|&i| i != pinned && !d.has_arc(i, i));
        let Some(target) = target else {
            return Err(DigraphError::PinnedLoopless {
                color: pinned,
                dot: d.to_dot(),
            });
        };
        let circuit =
            find_circuit_through(&d, target, &[pinned]).ok_or(DigraphError::NoCircuit {
                color: target,
                dot: d.to_dot(),
            })?;
        let next = rotate_recolor(&d, &current, f_vertices, &circuit)?;
        let next_d = build_digraph(g, k_vertices, f_vertices, &next)?;
        if next_d.loop_count() <= loops {
            return Err(DigraphError::LoopNotIncreased {
                before: loops,
                after: next_d.loop_count(),
            });
        }
        current = next;
        d = next_d;
        rotations += 1;
        debug_assert!(rotations <= order);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::check_proper;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// F-vertices 0..palette colored 1..=palette in order, K empty, on an
    /// edgeless graph.
    fn rainbow_fixture(palette: usize) -> (Graph, Vec<usize>, Coloring) {
        let g = Graph::from_edges(palette, &[]).unwrap();
        let f: Vec<usize> = (0..palette).collect();
        let mut c = Coloring::new(palette, palette);
        for v in 0..palette {
            c.set(v, v + 1);
        }
        (g, f, c)
    }

    #[test]
    fn empty_k_gives_complete_digraph() {
        let (g, f, c) = rainbow_fixture(4);
        let d = build_digraph(&g, &[], &f, &c).unwrap();
        assert_eq!(d.loop_count(), 4);
        assert_eq!(d.arcs().len(), 16);
    }

    #[test]
    fn isolated_f_vertex_gets_all_outgoing_arcs() {
        // y of color 1 with no K-neighbors: arcs (1, j) for every j.
        let g = Graph::from_edges(4, &[(1, 3), (2, 3)]).unwrap();
        let f = vec![0, 1, 2];
        let mut c = Coloring::new(4, 3);
        c.set(0, 1);
        c.set(1, 2);
        c.set(2, 3);
        c.set(3, 2);
        let d = build_digraph(&g, &[3], &f, &c).unwrap();
        for j in 1..=3 {
            assert!(d.has_arc(1, j));
        }
        // vertices 1 and 2 see the K-vertex of color 2
        assert!(!d.has_arc(2, 2));
        assert!(!d.has_arc(3, 2));
    }

    #[test]
    fn arc_follows_definition() {
        // F-vertex of color 2 adjacent in K to a color-2 vertex only:
        // arcs (2,1) and (2,3) present, (2,2) absent.
        let g = Graph::from_edges(4, &[(1, 3)]).unwrap();
        let f = vec![0, 1, 2];
        let mut c = Coloring::new(4, 3);
        c.set(0, 1);
        c.set(1, 2);
        c.set(2, 3);
        c.set(3, 2);
        let d = build_digraph(&g, &[3], &f, &c).unwrap();
        assert!(d.has_arc(2, 1));
        assert!(d.has_arc(2, 3));
        assert!(!d.has_arc(2, 2));
    }

    #[test]
    fn build_rejects_bad_f() {
        let g = Graph::from_edges(3, &[]).unwrap();
        let mut c = Coloring::new(3, 2);
        c.set(0, 1);
        c.set(1, 1);
        assert!(matches!(
            build_digraph(&g, &[], &[0, 1], &c),
            Err(DigraphError::DuplicateColorInF { color: 1, .. })
        ));
        let mut c2 = Coloring::new(3, 2);
        c2.set(0, 1);
        assert!(matches!(
            build_digraph(&g, &[], &[0], &c2),
            Err(DigraphError::MissingColorInF { color: 2 })
        ));
        c2.set(1, 2);
        assert!(matches!(
            build_digraph(&g, &[0], &[0, 1], &c2),
            Err(DigraphError::SetsOverlap { vertex: 0 })
        ));
    }

    #[test]
    fn loop_count_extremes() {
        let complete = ColoringDigraph::from_arcs(
            3,
            &[(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)],
        );
        assert_eq!(complete.loop_count(), 3);
        assert_eq!(ColoringDigraph::new(5).loop_count(), 0);
    }

    #[test]
    fn full_loop_count_iff_boundary_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..80 {
            let n = 12;
            let palette = 4;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.3) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let f: Vec<usize> = (0..palette).collect();
            let k: Vec<usize> = (palette..palette + 4).collect();
            let mut c = Coloring::new(n, palette);
            for (pos, &v) in f.iter().enumerate() {
                c.set(v, pos + 1);
            }
            for &v in &k {
                c.set(v, rng.random_range(1..=palette));
            }
            let d = build_digraph(&g, &k, &f, &c).unwrap();
            let boundary_conflicts = f.iter().any(|&u| {
                g.neighbors(u)
                    .iter()
                    .any(|&w| k.contains(&w) && c.get(w) == c.get(u))
            });
            assert_eq!(d.loop_count() == palette, !boundary_conflicts);
        }
    }

    #[test]
    fn circuit_search_examples() {
        let d = ColoringDigraph::from_arcs(3, &[(1, 2), (2, 1)]);
        assert_eq!(find_circuit_through(&d, 1, &[]), Some(vec![1, 2]));

        let d = ColoringDigraph::from_arcs(3, &[(1, 2), (2, 3), (3, 1)]);
        assert_eq!(find_circuit_through(&d, 2, &[]), Some(vec![2, 3, 1]));

        let d = ColoringDigraph::from_arcs(3, &[(2, 1), (3, 1)]);
        assert_eq!(find_circuit_through(&d, 1, &[]), None);
    }

    #[test]
    fn circuit_search_respects_forbidden_colors() {
        let d = ColoringDigraph::from_arcs(4, &[(1, 2), (2, 1), (1, 3), (3, 1)]);
        assert_eq!(find_circuit_through(&d, 1, &[2]), Some(vec![1, 3]));
        assert_eq!(find_circuit_through(&d, 1, &[2, 3]), None);
    }

    #[test]
    fn circuit_search_prefers_smallest_successor() {
        let d = ColoringDigraph::from_arcs(4, &[(1, 3), (1, 2), (2, 4), (4, 1), (3, 1)]);
        assert_eq!(find_circuit_through(&d, 1, &[]), Some(vec![1, 2, 4]));
    }

    #[test]
    fn loop_reported_as_length_one_circuit() {
        let d = ColoringDigraph::from_arcs(2, &[(1, 1)]);
        assert_eq!(find_circuit_through(&d, 1, &[]), Some(vec![1]));
    }

    #[test]
    fn rotation_shifts_circuit_colors() {
        let g = Graph::from_edges(2, &[]).unwrap();
        let f = vec![0, 1];
        let mut c = Coloring::new(2, 2);
        c.set(0, 1);
        c.set(1, 2);
        let d = ColoringDigraph::from_arcs(2, &[(1, 2), (2, 1)]);
        let rotated = rotate_recolor(&d, &c, &f, &[1, 2]).unwrap();
        assert_eq!(rotated.get(0), Some(2));
        assert_eq!(rotated.get(1), Some(1));
        let _ = g;
    }

    #[test]
    fn empty_circuit_is_identity() {
        let mut c = Coloring::new(2, 2);
        c.set(0, 1);
        c.set(1, 2);
        let d = ColoringDigraph::new(2);
        let rotated = rotate_recolor(&d, &c, &[0, 1], &[]).unwrap();
        assert_eq!(rotated, c);
    }

    #[test]
    fn rotation_checks_circuit_arcs() {
        let c = Coloring::new(1, 2);
        let d = ColoringDigraph::from_arcs(2, &[(1, 2)]);
        assert_eq!(
            rotate_recolor(&d, &c, &[], &[1, 2]),
            Err(DigraphError::CircuitArcMissing { from: 2, to: 1 })
        );
    }

    #[test]
    fn saturate_identity_when_already_saturated() {
        let (g, f, c) = rainbow_fixture(4);
        let (out, rotations) = saturate_loops(&g, &[], &f, &c, 4).unwrap();
        assert_eq!(out, c);
        assert_eq!(rotations, 0);
    }

    #[test]
    fn saturate_single_rotation_fixture() {
        // K = {3} colored 1; F = {0 (color 1), 1 (color 2), 2 (color 3,
        // pinned)}. Vertex 0 sees K color 1, so (1,1) is missing and the
        // 2-circuit [1,2] fixes it in one rotation.
        let g = Graph::from_edges(4, &[(0, 3)]).unwrap();
        let f = vec![0, 1, 2];
        let mut c = Coloring::new(4, 3);
        c.set(0, 1);
        c.set(1, 2);
        c.set(2, 3);
        c.set(3, 1);
        let (out, rotations) = saturate_loops(&g, &[3], &f, &c, 3).unwrap();
        assert_eq!(rotations, 1);
        assert_eq!(out.get(0), Some(2));
        assert_eq!(out.get(1), Some(1));
        assert_eq!(out.get(2), Some(3));
        let d = build_digraph(&g, &[3], &f, &out).unwrap();
        assert_eq!(d.loop_count(), 3);
    }

    #[test]
    fn saturate_reports_missing_circuit() {
        // The color-1 F-vertex sees both K colors, so no arc leaves 1 and no
        // circuit exists.
        let g = Graph::from_edges(4, &[(0, 2), (0, 3)]).unwrap();
        let f = vec![0, 1];
        let mut c = Coloring::new(4, 2);
        c.set(0, 1);
        c.set(1, 2);
        c.set(2, 1);
        c.set(3, 2);
        match saturate_loops(&g, &[2, 3], &f, &c, 2) {
            Err(DigraphError::NoCircuit { color: 1, dot }) => {
                assert!(dot.contains("digraph"));
            }
            other => panic!("expected NoCircuit, got {other:?}"),
        }
    }

    #[test]
    fn saturate_randomized_runs_end_boundary_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut successes = 0;
        for _ in 0..120 {
            let n = 14;
            let palette = 4;
            let mut edges = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(0.25) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, &edges).unwrap();
            let f: Vec<usize> = (0..palette).collect();
            let k: Vec<usize> = (palette..palette + 5).collect();
            // Proper coloring of K alone (F assignments are a permutation so
            // F-internal edges never conflict).
            let mut c = Coloring::new(n, palette);
            for (pos, &v) in f.iter().enumerate() {
                c.set(v, pos + 1);
            }
            // Greedy proper coloring of K against K-internal edges only.
            for &v in &k {
                let mut taken = vec![false; palette + 1];
                for &w in g.neighbors(v) {
                    if k.contains(&w) {
                        if let Some(cw) = c.get(w) {
                            taken[cw] = true;
                        }
                    }
                }
                let color = (1..=palette).find(|&j| !taken[j]).unwrap();
                c.set(v, color);
            }
            if let Ok((out, _rotations)) = saturate_loops(&g, &k, &f, &c, palette) {
                successes += 1;
                let conflicts = check_proper(&g, &out);
                assert!(
                    conflicts.is_empty(),
                    "saturated union coloring has conflicts: {conflicts:?}"
                );
            }
        }
        assert!(successes > 20, "too few successful saturations to cross-check");
    }
}
