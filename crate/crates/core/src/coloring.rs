//! Partial and total vertex colorings, properness and dominance checks,
//! b-coloring verification, and greedy completion.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// A partial vertex coloring with colors drawn from `1..=palette_size`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    assignment: Vec<Option<usize>>,
    palette_size: usize,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("color {color} of vertex {vertex} outside palette 1..={palette}")]
    ColorOutOfRange {
        vertex: usize,
        color: usize,
        palette: usize,
    },
    #[error("assignment has {got} entries, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coloring is not proper ({conflicts} conflicting edges)")]
    NotProper { conflicts: usize },
    #[error("palette of {palette} colors too small for maximum degree {max_degree}")]
    PaletteTooSmall { palette: usize, max_degree: usize },
    #[error("malformed coloring text: {text:?}")]
    MalformedText { text: String },
}

impl Coloring {
    /// An empty partial coloring on `n` vertices.
    pub fn new(n: usize, palette_size: usize) -> Self {
        Self {
            assignment: vec![None; n],
            palette_size,
        }
    }

    /// Builds a coloring from an explicit assignment, validating color ranges.
    pub fn from_assignment(
        assignment: Vec<Option<usize>>,
        palette_size: usize,
    ) -> Result<Self, ColoringError> {
        for (vertex, slot) in assignment.iter().enumerate() {
            if let Some(color) = *slot {
                if color == 0 || color > palette_size {
                    return Err(ColoringError::ColorOutOfRange {
                        vertex,
                        color,
                        palette: palette_size,
                    });
                }
            }
        }
        Ok(Self {
            assignment,
            palette_size,
        })
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn palette_size(&self) -> usize {
        self.palette_size
    }

    pub fn get(&self, v: usize) -> Option<usize> {
        self.assignment[v]
    }

    /// Assigns a color. Panics on a color outside the palette; external
    /// input goes through `from_assignment` instead.
    pub fn set(&mut self, v: usize, color: usize) {
        assert!(
            color >= 1 && color <= self.palette_size,
            "color {color} outside palette 1..={}",
            self.palette_size
        );
        self.assignment[v] = Some(color);
    }

    pub fn unset(&mut self, v: usize) {
        self.assignment[v] = None;
    }

    pub fn is_total(&self) -> bool {
        self.assignment.iter().all(Option::is_some)
    }

    pub fn assigned_count(&self) -> usize {
        self.assignment.iter().filter(|s| s.is_some()).count()
    }

    pub fn assignment(&self) -> &[Option<usize>] {
        &self.assignment
    }

    /// One-line `v:c` pairs for assigned vertices, e.g. `0:1 2:3`.
    pub fn to_pairs_text(&self) -> String {
        self.assignment
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.map(|c| format!("{v}:{c}")))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Parses the `v:c` pair format produced by `to_pairs_text`.
    pub fn from_pairs_text(
        text: &str,
        n: usize,
        palette_size: usize,
    ) -> Result<Self, ColoringError> {
        let mut assignment = vec![None; n];
        for token in text.split_whitespace() {
            let bad = || ColoringError::MalformedText {
                text: token.to_string(),
            };
            let (vs, cs) = token.split_once(':').ok_or_else(bad)?;
            let v: usize = vs.parse().map_err(|_| bad())?;
            let c: usize = cs.parse().map_err(|_| bad())?;
            if v >= n {
                return Err(ColoringError::LengthMismatch { expected: n, got: v + 1 });
            }
            assignment[v] = Some(c);
        }
        Self::from_assignment(assignment, palette_size)
    }
}

/// Verdict returned by `verify_b_coloring`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BVerdict {
    pub proper: bool,
    /// Edges whose endpoints carry the same color.
    pub conflicts: Vec<(usize, usize)>,
    /// For each used color, the vertices dominant for it.
    pub dominant_by_color: BTreeMap<usize, Vec<usize>>,
    /// Palette colors with no dominant vertex.
    pub missing_colors: Vec<usize>,
    pub is_b_coloring: bool,
}

/// Lists the improperly colored edges; empty iff the coloring is proper.
/// Unassigned endpoints never conflict.
pub fn check_proper(g: &Graph, c: &Coloring) -> Vec<(usize, usize)> {
    let mut conflicts = Vec::new();
    for (u, v) in g.edges() {
        if let (Some(cu), Some(cv)) = (c.get(u), c.get(v)) {
            if cu == cv {
                conflicts.push((u, v));
            }
        }
    }
    conflicts
}

fn dominants_unchecked(g: &Graph, c: &Coloring, palette: usize) -> BTreeMap<usize, Vec<usize>> {
    let mut by_color: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut seen = vec![false; palette + 1];
    for v in 0..g.n() {
        let Some(cv) = c.get(v) else { continue };
        if cv > palette {
            continue;
        }
        seen.iter_mut().for_each(|s| *s = false);
        let mut covered = 0usize;
        for &w in g.neighbors(v) {
            if let Some(cw) = c.get(w) {
                if cw <= palette && cw != cv && !seen[cw] {
                    seen[cw] = true;
                    covered += 1;
                }
            }
        }
        if covered == palette - 1 {
            by_color.entry(cv).or_default().push(v);
        }
    }
    by_color
}

/// For a proper coloring, the dominant vertices of each used color: `v` is
/// dominant when the colors of `N(v)` cover every palette color except its
/// own. Works for partial colorings; unassigned neighbors contribute nothing.
pub fn dominant_vertices(
    g: &Graph,
    c: &Coloring,
) -> Result<BTreeMap<usize, Vec<usize>>, ColoringError> {
    let conflicts = check_proper(g, c);
    if !conflicts.is_empty() {
        return Err(ColoringError::NotProper {
            conflicts: conflicts.len(),
        });
    }
    Ok(dominants_unchecked(g, c, c.palette_size()))
}

/// Checks whether `c` is a b-coloring of `g` with `k` colors: proper, and
/// every color in `1..=k` has a dominant vertex (which forces every color
/// to be used). The verdict carries all failures rather than erroring.
pub fn verify_b_coloring(g: &Graph, c: &Coloring, k: usize) -> BVerdict {
    let conflicts = check_proper(g, c);
    let proper = conflicts.is_empty();
    let dominant_by_color = dominants_unchecked(g, c, k);
    let missing_colors: Vec<usize> = (1..=k)
        .filter(|color| !dominant_by_color.contains_key(color))
        .collect();
    let mut used = vec![false; k + 1];
    for v in 0..c.n() {
        if let Some(cv) = c.get(v) {
            if cv <= k {
                used[cv] = true;
            }
        }
    }
    let all_used = (1..=k).all(|color| used[color]);
    let is_b_coloring = proper && missing_colors.is_empty() && all_used;
    BVerdict {
        proper,
        conflicts,
        dominant_by_color,
        missing_colors,
        is_b_coloring,
    }
}

/// Extends a proper partial coloring to a total one: unassigned vertices in
/// ascending id each take the smallest color absent from their colored
/// neighborhood. With a palette of at least `max_degree + 1` colors this
/// never fails, and assigned vertices are never changed.
pub fn greedy_complete(g: &Graph, c: &Coloring) -> Result<Coloring, ColoringError> {
    let max_degree = (0..g.n()).map(|v| g.degree(v)).max().unwrap_or(0);
    if c.palette_size() < max_degree + 1 {
        return Err(ColoringError::PaletteTooSmall {
            palette: c.palette_size(),
            max_degree,
        });
    }
    let mut out = c.clone();
    for v in 0..g.n() {
        if out.get(v).is_some() {
            continue;
        }
        let mut taken = vec![false; out.palette_size() + 1];
        for &w in g.neighbors(v) {
            if let Some(cw) = out.get(w) {
                taken[cw] = true;
            }
        }
        let color = (1..=out.palette_size())
            .find(|&j| !taken[j])
            .expect("palette exceeds degree");
        out.set(v, color);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coloring_of(colors: &[usize], palette: usize) -> Coloring {
        Coloring::from_assignment(colors.iter().map(|&c| Some(c)).collect(), palette).unwrap()
    }

    #[test]
    fn proper_check_on_k3() {
        let k3 = Graph::complete(3);
        assert!(check_proper(&k3, &coloring_of(&[1, 2, 3], 3)).is_empty());
        assert_eq!(check_proper(&k3, &coloring_of(&[1, 1, 2], 3)), vec![(0, 1)]);
    }

    #[test]
    fn proper_check_on_c5() {
        let c5 = Graph::cycle(5);
        assert!(check_proper(&c5, &coloring_of(&[1, 2, 1, 2, 3], 3)).is_empty());
    }

    #[test]
    fn partial_colorings_never_conflict_on_unassigned() {
        let k3 = Graph::complete(3);
        let mut c = Coloring::new(3, 3);
        c.set(0, 1);
        assert!(check_proper(&k3, &c).is_empty());
    }

    #[test]
    fn rainbow_complete_graph_all_dominant() {
        let k4 = Graph::complete(4);
        let c = coloring_of(&[1, 2, 3, 4], 4);
        let dom = dominant_vertices(&k4, &c).unwrap();
        for color in 1..=4 {
            assert_eq!(dom[&color].len(), 1);
        }
    }

    #[test]
    fn c5_dominants_match_hand_check() {
        // 1,2,1,2,3 around the cycle: vertex 0 sees {2,3}, vertex 3 sees
        // {1,3}, vertex 4 sees {1,2}; vertices 1 and 2 each miss a color.
        let c5 = Graph::cycle(5);
        let c = coloring_of(&[1, 2, 1, 2, 3], 3);
        let dom = dominant_vertices(&c5, &c).unwrap();
        assert_eq!(dom[&1], vec![0]);
        assert_eq!(dom[&2], vec![3]);
        assert_eq!(dom[&3], vec![4]);
    }

    #[test]
    fn star_dominants_with_two_colors() {
        // K_{1,3}: center 0 colored 1, leaves colored 2, palette 2.
        let star = Graph::complete_bipartite(1, 3);
        let c = coloring_of(&[1, 2, 2, 2], 2);
        let dom = dominant_vertices(&star, &c).unwrap();
        assert_eq!(dom[&1], vec![0]);
        assert_eq!(dom[&2], vec![1, 2, 3]);
    }

    #[test]
    fn dominants_reject_improper_input() {
        let k3 = Graph::complete(3);
        assert!(matches!(
            dominant_vertices(&k3, &coloring_of(&[1, 1, 2], 3)),
            Err(ColoringError::NotProper { conflicts: 1 })
        ));
    }

    #[test]
    fn k33_two_sided_coloring_is_b_coloring() {
        let k33 = Graph::complete_bipartite(3, 3);
        let c = coloring_of(&[1, 1, 1, 2, 2, 2], 2);
        let verdict = verify_b_coloring(&k33, &c, 2);
        assert!(verdict.proper);
        assert!(verdict.missing_colors.is_empty());
        assert!(verdict.is_b_coloring);
    }

    #[test]
    fn no_proper_3_coloring_of_k33_is_a_b_coloring() {
        // Brute force over all 3^6 assignments: every proper 3-coloring of
        // K_{3,3} keeps each color class inside one side, so some color
        // always lacks a dominant vertex.
        let k33 = Graph::complete_bipartite(3, 3);
        let mut proper_seen = 0usize;
        for code in 0..3usize.pow(6) {
            let mut x = code;
            let colors: Vec<usize> = (0..6)
                .map(|_| {
                    let c = x % 3 + 1;
                    x /= 3;
                    c
                })
                .collect();
            let c = coloring_of(&colors, 3);
            let verdict = verify_b_coloring(&k33, &c, 3);
            if verdict.proper {
                proper_seen += 1;
                assert!(!verdict.is_b_coloring);
                assert!(!verdict.missing_colors.is_empty());
            }
        }
        assert!(proper_seen > 0);
    }

    #[test]
    fn verdict_flags_unused_colors() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let verdict = verify_b_coloring(&p3, &coloring_of(&[1, 2, 1], 3), 3);
        assert!(verdict.proper);
        assert!(!verdict.is_b_coloring);
        assert!(verdict.missing_colors.contains(&3));
    }

    #[test]
    fn greedy_completes_empty_coloring() {
        let c5 = Graph::cycle(5);
        let done = greedy_complete(&c5, &Coloring::new(5, 3)).unwrap();
        assert!(done.is_total());
        assert!(check_proper(&c5, &done).is_empty());
    }

    #[test]
    fn greedy_preserves_assigned_vertices() {
        let g = Graph::petersen();
        let mut c = Coloring::new(10, 4);
        c.set(3, 4);
        c.set(7, 2);
        let done = greedy_complete(&g, &c).unwrap();
        assert_eq!(done.get(3), Some(4));
        assert_eq!(done.get(7), Some(2));
        assert!(done.is_total());
        assert!(check_proper(&g, &done).is_empty());
    }

    #[test]
    fn greedy_returns_total_input_unchanged() {
        let c5 = Graph::cycle(5);
        let c = coloring_of(&[1, 2, 1, 2, 3], 3);
        assert_eq!(greedy_complete(&c5, &c).unwrap(), c);
    }

    #[test]
    fn greedy_rejects_small_palette() {
        let k4 = Graph::complete(4);
        assert!(matches!(
            greedy_complete(&k4, &Coloring::new(4, 3)),
            Err(ColoringError::PaletteTooSmall { .. })
        ));
    }

    #[test]
    fn pair_text_round_trip() {
        let mut c = Coloring::new(5, 3);
        c.set(0, 1);
        c.set(2, 3);
        c.set(4, 2);
        let text = c.to_pairs_text();
        assert_eq!(text, "0:1 2:3 4:2");
        let back = Coloring::from_pairs_text(&text, 5, 3).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn from_assignment_validates_range() {
        assert!(matches!(
            Coloring::from_assignment(vec![Some(4)], 3),
            Err(ColoringError::ColorOutOfRange { .. })
        ));
        assert!(matches!(
            Coloring::from_assignment(vec![Some(0)], 3),
            Err(ColoringError::ColorOutOfRange { .. })
        ));
    }
}
