//! The dominant-vertex extension pipeline: classify the uncolored vertices
//! around the colored core, select a fresh candidate, color its closed
//! neighborhood so it becomes dominant for a new color, and repeat until
//! every palette color has a dominant vertex. Two per-step engines are
//! available: loop saturation by circuit rotation, and a direct
//! matching-based assignment for graphs with no 4-cycle.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{greedy_complete, verify_b_coloring, Coloring, ColoringError};
use crate::digraph::{build_digraph, saturate_loops, DigraphError};
use crate::graph::Graph;
use crate::matching::{max_matching, perfect_matching_degree_sum, BipartiteGraph, MatchingError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    C4Free,
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Rotation,
    Matching,
}

impl Mode {
    /// Vertex-count bound above which every extension step is guaranteed to
    /// find a candidate.
    pub fn size_bound(&self, d: usize) -> usize {
        match self {
            Mode::C4Free => d * d * d + d,
            Mode::General => 2 * d * d * d + 2 * d - 2 * d * d,
        }
    }

    pub fn min_degree(&self) -> usize {
        match self {
            Mode::C4Free => 4,
            Mode::General => 2,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::C4Free => write!(f, "c4free"),
            Mode::General => write!(f, "general"),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::Rotation => write!(f, "rotation"),
            Strategy::Matching => write!(f, "matching"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "c4free" => Ok(Mode::C4Free),
            "general" => Ok(Mode::General),
            other => Err(format!("unknown mode {other:?} (expected c4free|general)")),
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rotation" => Ok(Strategy::Rotation),
            "matching" => Ok(Strategy::Matching),
            other => Err(format!(
                "unknown strategy {other:?} (expected rotation|matching)"
            )),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExtensionError {
    #[error("graph is not regular")]
    NonRegular,
    #[error("degree {d} below the minimum {min} for mode {mode}")]
    DegreeTooSmall { d: usize, min: usize, mode: Mode },
    #[error("the matching strategy applies only in c4free mode")]
    StrategyModeMismatch,
    #[error("no eligible candidate vertex at k = {k}")]
    NoCandidate {
        k: usize,
        sizes: ClassificationSizes,
    },
    #[error("rotation engine failed: {0}")]
    Digraph(#[from] DigraphError),
    #[error("perfect matching unavailable at k = {k}: {detail}")]
    NoPerfectMatching {
        k: usize,
        t: usize,
        h_edges: Vec<(usize, usize)>,
        detail: MatchingError,
    },
    #[error("invariant {name} violated: {detail}")]
    InvariantViolation { name: String, detail: String },
    #[error("coloring error: {0}")]
    Coloring(#[from] ColoringError),
    #[error("final verification failed; colors without dominant vertices: {missing_colors:?}")]
    VerificationFailed { missing_colors: Vec<usize> },
}

/// Per-step set sizes, serialized into run reports and failure snapshots.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationSizes {
    pub r: usize,
    pub r_a: usize,
    pub r_b: usize,
    pub r_c: usize,
    pub s0: usize,
    pub s1: usize,
    pub s2: usize,
    pub s3: usize,
    pub s_prime: usize,
    pub eligible: usize,
}

/// The running extension: `k` established dominant vertices of colors
/// `1..=k`, their closed neighborhoods forming the colored set `C`.
#[derive(Debug, Clone)]
pub struct ExtensionState {
    d: usize,
    k: usize,
    dominants: Vec<(usize, usize)>,
    coloring: Coloring,
    in_c: Vec<bool>,
    c_vertices: Vec<usize>,
}

impl ExtensionState {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn dominants(&self) -> &[(usize, usize)] {
        &self.dominants
    }

    pub fn coloring(&self) -> &Coloring {
        &self.coloring
    }

    pub fn colored_vertices(&self) -> &[usize] {
        &self.c_vertices
    }

    pub fn in_colored_set(&self, v: usize) -> bool {
        self.in_c[v]
    }

    fn absorb(&mut self, y: usize, f: &[usize], coloring: Coloring) {
        self.coloring = coloring;
        for &v in f {
            debug_assert!(!self.in_c[v]);
            self.in_c[v] = true;
            self.c_vertices.push(v);
        }
        self.c_vertices.sort_unstable();
        self.k += 1;
        self.dominants.push((y, self.k));
    }

    /// Checks the state invariants; violations indicate a pipeline bug or a
    /// hypothesis-violating input and abort the run with diagnostics.
    fn check_invariants(&self, g: &Graph) -> Result<(), ExtensionError> {
        let violation = |name: &str, detail: String| ExtensionError::InvariantViolation {
            name: name.to_string(),
            detail,
        };
        if self.c_vertices.len() != self.k * (self.d + 1) {
            return Err(violation(
                "colored-set-size",
                format!(
                    "|C| = {} but k(d+1) = {}",
                    self.c_vertices.len(),
                    self.k * (self.d + 1)
                ),
            ));
        }
        if self.coloring.assigned_count() != self.c_vertices.len() {
            return Err(violation(
                "colored-set-assignment",
                "assigned vertices differ from C".to_string(),
            ));
        }
        let conflicts = crate::coloring::check_proper(g, &self.coloring);
        if !conflicts.is_empty() {
            return Err(violation(
                "partial-properness",
                format!("{} conflicting edges in C", conflicts.len()),
            ));
        }
        for &(v, color) in &self.dominants {
            let mut seen = vec![false; self.d + 2];
            for &w in g.neighbors(v) {
                if let Some(cw) = self.coloring.get(w) {
                    seen[cw] = true;
                }
            }
            let covered = (1..=self.d + 1).filter(|&j| j != color && seen[j]).count();
            if self.coloring.get(v) != Some(color) || covered != self.d {
                return Err(violation(
                    "dominant-coverage",
                    format!("established dominant {v} of color {color} lost coverage"),
                ));
            }
        }
        Ok(())
    }
}

/// Starts an extension run on a regular graph: empty colored set, no
/// dominant vertices.
pub fn init_state(g: &Graph) -> Result<ExtensionState, ExtensionError> {
    let d = g.degree_if_regular().ok_or(ExtensionError::NonRegular)?;
    if d == 0 {
        return Err(ExtensionError::NonRegular);
    }
    Ok(ExtensionState {
        d,
        k: 0,
        dominants: Vec::new(),
        coloring: Coloring::new(g.n(), d + 1),
        in_c: vec![false; g.n()],
        c_vertices: Vec::new(),
    })
}

/// The vertex partition driving candidate selection: distance-one layers
/// `R_i` around `C` by number of colored neighbors, their mode-specific
/// bands, and the saturation sets that a candidate must avoid.
#[derive(Debug, Clone)]
pub struct Classification {
    pub mode: Mode,
    /// `r_i[i]`: vertices outside `C` with exactly `i` neighbors in `C`.
    pub r_i: Vec<Vec<usize>>,
    pub r: Vec<usize>,
    pub r_a: Vec<usize>,
    pub r_b: Vec<usize>,
    pub r_c: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s3: Vec<usize>,
    /// General mode: for each color, the R-vertices with a neighbor of that
    /// color in `C` (index 0 unused).
    pub color_touched: Vec<Vec<usize>>,
    pub s_prime_i: Vec<Vec<usize>>,
    pub s_prime: Vec<usize>,
    pub eligible: Vec<usize>,
}

impl Classification {
    pub fn sizes(&self) -> ClassificationSizes {
        ClassificationSizes {
            r: self.r.len(),
            r_a: self.r_a.len(),
            r_b: self.r_b.len(),
            r_c: self.r_c.len(),
            s0: 0,
            s1: self.s1.len(),
            s2: self.s2.len(),
            s3: self.s3.len(),
            s_prime: self.s_prime.len(),
            eligible: self.eligible.len(),
        }
    }
}

fn layer_union(r_i: &[Vec<usize>], lo: usize, hi: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for i in lo..=hi.min(r_i.len().saturating_sub(1)) {
        out.extend_from_slice(&r_i[i]);
    }
    out.sort_unstable();
    out
}

fn mask_of(n: usize, vs: &[usize]) -> Vec<bool> {
    let mut mask = vec![false; n];
    for &v in vs {
        mask[v] = true;
    }
    mask
}

fn count_in(g: &Graph, v: usize, mask: &[bool]) -> usize {
    g.neighbors(v).iter().filter(|&&w| mask[w]).count()
}

fn violation(name: &str, detail: String) -> ExtensionError {
    ExtensionError::InvariantViolation {
        name: name.to_string(),
        detail,
    }
}

/// Splits `V \ C` into the layers `R_i` by colored-neighbor count.
fn layers(g: &Graph, state: &ExtensionState) -> Vec<Vec<usize>> {
    let d = state.d;
    let mut r_i: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
    for v in 0..g.n() {
        if state.in_c[v] {
            continue;
        }
        let cnt = count_in(g, v, &state.in_c);
        r_i[cnt].push(v);
    }
    r_i
}

/// Computes the candidate-selection partition for the rotation pipeline and
/// checks the counting inequalities that hold at every step.
pub fn classify(
    g: &Graph,
    state: &ExtensionState,
    mode: Mode,
) -> Result<Classification, ExtensionError> {
    let d = state.d;
    let n = g.n();
    let fl = (d + 1) / 2;
    let ce = (d - 1).div_ceil(2);
    let r_i = layers(g, state);
    let r = layer_union(&r_i, 1, d);
    let outside = r_i[0].clone();

    let (r_a, r_b, r_c) = match mode {
        Mode::C4Free => (
            layer_union(&r_i, 2, fl),
            layer_union(&r_i, 4, fl),
            layer_union(&r_i, fl + 1, d),
        ),
        Mode::General => (
            layer_union(&r_i, 3, fl),
            layer_union(&r_i, fl + 1, d),
            Vec::new(),
        ),
    };
    let mask_a = mask_of(n, &r_a);
    let mask_b = mask_of(n, &r_b);
    let mask_c = mask_of(n, &r_c);

    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    let mut s3 = Vec::new();
    let mut color_touched: Vec<Vec<usize>> = vec![Vec::new(); d + 2];
    let mut s_prime_i: Vec<Vec<usize>> = vec![Vec::new(); d + 2];
    let mut s_prime = Vec::new();

    match mode {
        Mode::C4Free => {
            for &v in &outside {
                if count_in(g, v, &mask_a) >= d.saturating_sub(2) {
                    s1.push(v);
                }
                if count_in(g, v, &mask_b) >= ce {
                    s2.push(v);
                }
                if count_in(g, v, &mask_c) >= 1 {
                    s3.push(v);
                }
            }
        }
        Mode::General => {
            for &v in &r {
                let mut touched = vec![false; d + 2];
                for &w in g.neighbors(v) {
                    if state.in_c[w] {
                        touched[state.coloring.get(w).expect("C is colored")] = true;
                    }
                }
                for (color, hit) in touched.iter().enumerate().skip(1) {
                    if *hit {
                        color_touched[color].push(v);
                    }
                }
            }
            let masks: Vec<Vec<bool>> = (0..=d + 1)
                .map(|color| mask_of(n, &color_touched[color]))
                .collect();
            for &v in &outside {
                if count_in(g, v, &mask_a) >= ce {
                    s1.push(v);
                }
                if count_in(g, v, &mask_b) >= 1 {
                    s2.push(v);
                }
                for color in 1..=d + 1 {
                    if color == state.k + 1 {
                        continue;
                    }
                    if count_in(g, v, &masks[color]) >= d - 1 {
                        s_prime_i[color].push(v);
                    }
                }
            }
            let mut union: Vec<usize> = s_prime_i.iter().flatten().copied().collect();
            union.sort_unstable();
            union.dedup();
            s_prime = union;
        }
    }

    let excluded = match mode {
        Mode::C4Free => {
            let mut m = mask_of(n, &s1);
            for &v in s2.iter().chain(&s3) {
                m[v] = true;
            }
            m
        }
        Mode::General => {
            let mut m = mask_of(n, &s1);
            for &v in s2.iter().chain(&s_prime) {
                m[v] = true;
            }
            m
        }
    };
    let eligible: Vec<usize> = outside.iter().copied().filter(|&v| !excluded[v]).collect();

    let cls = Classification {
        mode,
        r_i,
        r,
        r_a,
        r_b,
        r_c,
        s1,
        s2,
        s3,
        color_touched,
        s_prime_i,
        s_prime,
        eligible,
    };

    // Counting inequalities. The edge-count bound holds for any regular
    // graph with the dominant structure; the set-size bounds need their
    // derivation's divisor to be positive and are gated accordingly.
    let budget = d * d * (d - 1);
    match mode {
        Mode::C4Free => {
            let lhs = cls.r.len() + cls.r_a.len() + 2 * cls.r_b.len() + fl * cls.r_c.len();
            if lhs > budget {
                return Err(violation(
                    "edge-count-bound",
                    format!("{lhs} > d^2(d-1) = {budget}"),
                ));
            }
            if d >= 3 && cls.s1.len() > cls.r_a.len() {
                return Err(violation(
                    "s1-size-bound",
                    format!("|S1| = {} > |Ra| = {}", cls.s1.len(), cls.r_a.len()),
                ));
            }
            if d >= 4 && ce * cls.s2.len() > (d - 4) * cls.r_b.len() {
                return Err(violation(
                    "s2-edge-bound",
                    format!(
                        "{}*|S2| = {} > (d-4)*|Rb| = {}",
                        ce,
                        ce * cls.s2.len(),
                        (d - 4) * cls.r_b.len()
                    ),
                ));
            }
            if d >= 5 && !cls.r_b.is_empty() && cls.s2.len() >= 2 * cls.r_b.len() {
                return Err(violation(
                    "s2-size-bound",
                    format!("|S2| = {} >= 2|Rb| = {}", cls.s2.len(), 2 * cls.r_b.len()),
                ));
            }
            if d >= 2 && cls.s3.len() > (ce - 1) * cls.r_c.len() {
                return Err(violation(
                    "s3-size-bound",
                    format!(
                        "|S3| = {} > (ce-1)|Rc| = {}",
                        cls.s3.len(),
                        (ce - 1) * cls.r_c.len()
                    ),
                ));
            }
        }
        Mode::General => {
            let lhs = cls.r.len() + 2 * cls.r_a.len() + fl * cls.r_b.len();
            if lhs > budget {
                return Err(violation(
                    "edge-count-bound",
                    format!("{lhs} > d^2(d-1) = {budget}"),
                ));
            }
            if d >= 4 {
                if ce * cls.s1.len() > (d - 3) * cls.r_a.len() {
                    return Err(violation(
                        "s1-edge-bound",
                        format!(
                            "{}*|S1| = {} > (d-3)*|Ra| = {}",
                            ce,
                            ce * cls.s1.len(),
                            (d - 3) * cls.r_a.len()
                        ),
                    ));
                }
                if !cls.r_a.is_empty() && cls.s1.len() >= 2 * cls.r_a.len() {
                    return Err(violation(
                        "s1-size-bound",
                        format!("|S1| = {} >= 2|Ra| = {}", cls.s1.len(), 2 * cls.r_a.len()),
                    ));
                }
                if cls.s2.len() > (ce - 1) * cls.r_b.len() {
                    return Err(violation(
                        "s2-size-bound",
                        format!(
                            "|S2| = {} > (ce-1)|Rb| = {}",
                            cls.s2.len(),
                            (ce - 1) * cls.r_b.len()
                        ),
                    ));
                }
                let cap = (d - 1) * (d - 1);
                for color in 1..=d + 1 {
                    if color != state.k + 1 && cls.s_prime_i[color].len() > cap {
                        return Err(violation(
                            "s-prime-i-size-bound",
                            format!(
                                "|S'_{}| = {} > (d-1)^2 = {}",
                                color,
                                cls.s_prime_i[color].len(),
                                cap
                            ),
                        ));
                    }
                }
                if cls.s_prime.len() > d * cap {
                    return Err(violation(
                        "s-prime-size-bound",
                        format!("|S'| = {} > d(d-1)^2 = {}", cls.s_prime.len(), d * cap),
                    ));
                }
            }
        }
    }

    Ok(cls)
}

/// Picks the smallest-id eligible vertex and checks the properties the
/// selection must enjoy: at least three neighbors with at most one colored
/// neighbor (c4free), and bounded overlap with each color's touched set
/// (general).
pub fn select_candidate(
    g: &Graph,
    state: &ExtensionState,
    cls: &Classification,
) -> Result<usize, ExtensionError> {
    let d = state.d;
    let Some(&y) = cls.eligible.first() else {
        return Err(ExtensionError::NoCandidate {
            k: state.k,
            sizes: cls.sizes(),
        });
    };
    match cls.mode {
        Mode::C4Free => {
            if d >= 3 {
                let low = g
                    .neighbors(y)
                    .iter()
                    .filter(|&&w| !state.in_c[w] && count_in(g, w, &state.in_c) <= 1)
                    .count();
                if low < 3 {
                    return Err(violation(
                        "candidate-low-layer-bound",
                        format!("|N(y) in (R0 u R1)| = {low} < 3 for y = {y}"),
                    ));
                }
            }
        }
        Mode::General => {
            if d >= 2 {
                for color in 1..=d + 1 {
                    if color == state.k + 1 {
                        continue;
                    }
                    let mask = mask_of(g.n(), &cls.color_touched[color]);
                    let overlap = count_in(g, y, &mask);
                    if overlap > d - 2 {
                        return Err(violation(
                            "candidate-touched-bound",
                            format!("|N(y) in C_{color}| = {overlap} > d-2 for y = {y}"),
                        ));
                    }
                }
            }
        }
    }
    Ok(y)
}

/// Colors `F = N(y) u {y}`: `y` takes the fresh color `k+1` and the
/// neighbors take the remaining colors, assigned by maximum bipartite
/// matching between neighbors and colors (a neighbor is compatible with a
/// color when it has no colored neighbor of that color) so the initial loop
/// count of the coloring digraph is maximal. Unmatched neighbors take the
/// leftover colors in ascending order.
pub fn initial_f_coloring(
    g: &Graph,
    state: &ExtensionState,
    y: usize,
) -> Result<Coloring, ExtensionError> {
    let d = state.d;
    let fresh = state.k + 1;
    if g.neighbors(y).iter().any(|&w| state.in_c[w]) {
        return Err(violation(
            "candidate-isolation",
            format!("candidate {y} has a colored neighbor"),
        ));
    }
    let neighbors: Vec<usize> = g.neighbors(y).to_vec();
    let colors: Vec<usize> = (1..=d + 1).filter(|&j| j != fresh).collect();
    let mut h = BipartiteGraph::new(neighbors.len(), colors.len());
    for (ni, &w) in neighbors.iter().enumerate() {
        let mut blocked = vec![false; d + 2];
        for &x in g.neighbors(w) {
            if state.in_c[x] {
                blocked[state.coloring.get(x).expect("C is colored")] = true;
            }
        }
        for (ci, &j) in colors.iter().enumerate() {
            if !blocked[j] {
                h.add_edge(ni, ci);
            }
        }
    }
    let matched = max_matching(&h);
    let mut assignment: Vec<Option<usize>> = vec![None; neighbors.len()];
    let mut color_used = vec![false; colors.len()];
    for (ni, ci) in matched {
        assignment[ni] = Some(colors[ci]);
        color_used[ci] = true;
    }
    let leftovers: Vec<usize> = colors
        .iter()
        .enumerate()
        .filter_map(|(ci, &j)| (!color_used[ci]).then_some(j))
        .collect();
    let mut next_leftover = leftovers.into_iter();
    let mut c = state.coloring.clone();
    c.set(y, fresh);
    for (ni, &w) in neighbors.iter().enumerate() {
        let color = assignment[ni].unwrap_or_else(|| {
            next_leftover
                .next()
                .expect("exactly as many leftovers as unmatched neighbors")
        });
        c.set(w, color);
    }
    Ok(c)
}

/// Per-step details of the matching engine, for reports and tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingStepInfo {
    /// 1, 2, or 3 following the anchor-color case split.
    pub case: u8,
    pub anchor_color: usize,
    pub w1: usize,
    pub w1_in_low_band: bool,
    pub h_edges: usize,
    pub t: usize,
}

/// One completed extension step.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepReport {
    pub k: usize,
    pub candidate: usize,
    pub rotations: usize,
    pub sizes: ClassificationSizes,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matching: Option<MatchingStepInfo>,
}

/// Runs one rotation-strategy extension: classify, select, color `F`,
/// saturate the coloring digraph, and absorb `F` into the colored set.
pub fn extend_once(
    g: &Graph,
    state: &mut ExtensionState,
    mode: Mode,
) -> Result<StepReport, ExtensionError> {
    let cls = classify(g, state, mode)?;
    let y = select_candidate(g, state, &cls)?;
    let c_f = initial_f_coloring(g, state, y)?;
    let mut f = vec![y];
    f.extend_from_slice(g.neighbors(y));
    let (saturated, rotations) =
        saturate_loops(g, &state.c_vertices, &f, &c_f, state.k + 1)?;
    let k_before = state.k;
    state.absorb(y, &f, saturated);
    state.check_invariants(g)?;
    Ok(StepReport {
        k: k_before,
        candidate: y,
        rotations,
        sizes: cls.sizes(),
        matching: None,
    })
}

/// The matching engine's classification: layer bands around `C` and the
/// saturation sets specific to the direct-coloring construction.
#[derive(Debug, Clone)]
pub struct MatchingClassification {
    pub r_i: Vec<Vec<usize>>,
    pub r: Vec<usize>,
    pub r_a: Vec<usize>,
    pub r_b: Vec<usize>,
    pub r_c: Vec<usize>,
    pub s0: Vec<usize>,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub eligible: Vec<usize>,
}

impl MatchingClassification {
    pub fn sizes(&self) -> ClassificationSizes {
        ClassificationSizes {
            r: self.r.len(),
            r_a: self.r_a.len(),
            r_b: self.r_b.len(),
            r_c: self.r_c.len(),
            s0: self.s0.len(),
            s1: self.s1.len(),
            s2: self.s2.len(),
            s3: 0,
            s_prime: 0,
            eligible: self.eligible.len(),
        }
    }
}

/// Classification for the matching engine, with its counting inequalities.
pub fn classify_matching(
    g: &Graph,
    state: &ExtensionState,
) -> Result<MatchingClassification, ExtensionError> {
    let d = state.d;
    let n = g.n();
    if d < 4 {
        return Err(ExtensionError::DegreeTooSmall {
            d,
            min: 4,
            mode: Mode::C4Free,
        });
    }
    let fl = (d + 1) / 2;
    let ce = (d - 1).div_ceil(2);
    let r_i = layers(g, state);
    let r = layer_union(&r_i, 1, d);
    let outside = r_i[0].clone();
    let r_a = layer_union(&r_i, 1, fl);
    let r_b = layer_union(&r_i, 3, fl);
    let r_c = layer_union(&r_i, fl + 1, d);
    let mask_b = mask_of(n, &r_b);
    let mask_c = mask_of(n, &r_c);
    // The middle band for the s0 threshold runs one layer past the low
    // bands, overlapping the start of r_c.
    let mid = layer_union(&r_i, 2, fl + 1);
    let mask_mid = mask_of(n, &mid);

    let mut s1 = Vec::new();
    let mut s2 = Vec::new();
    for &v in &outside {
        if count_in(g, v, &mask_b) >= ce {
            s1.push(v);
        }
        if count_in(g, v, &mask_c) >= 1 {
            s2.push(v);
        }
    }
    let excluded12 = {
        let mut m = mask_of(n, &s1);
        for &v in &s2 {
            m[v] = true;
        }
        m
    };
    let mut s0 = Vec::new();
    // s0_by_band[i]: s0 vertices with exactly i neighbors in the r_b band.
    let mut s0_by_band: Vec<usize> = vec![0; ce.max(1)];
    for &v in &outside {
        if excluded12[v] {
            continue;
        }
        if count_in(g, v, &mask_mid) >= d - 2 {
            s0.push(v);
            let band = count_in(g, v, &mask_b);
            debug_assert!(band < ce, "s0 excludes s1 so the band count is below ce");
            s0_by_band[band] += 1;
        }
    }
    let excluded = {
        let mut m = excluded12;
        for &v in &s0 {
            m[v] = true;
        }
        m
    };
    let eligible: Vec<usize> = outside.iter().copied().filter(|&v| !excluded[v]).collect();

    let cls = MatchingClassification {
        r_i,
        r,
        r_a,
        r_b,
        r_c,
        s0,
        s1,
        s2,
        eligible,
    };

    let budget = d * d * (d - 1);
    let r2 = cls.r_i[2].len();
    let lhs = cls.r.len() + r2 + 2 * cls.r_b.len() + fl * cls.r_c.len();
    if lhs > budget {
        return Err(violation(
            "edge-count-bound",
            format!("{lhs} > d^2(d-1) = {budget}"),
        ));
    }
    if ce * cls.s1.len() > (d - 3) * cls.r_b.len() {
        return Err(violation(
            "s1-edge-bound",
            format!(
                "{}*|S1| = {} > (d-3)|Rb| = {}",
                ce,
                ce * cls.s1.len(),
                (d - 3) * cls.r_b.len()
            ),
        ));
    }
    if cls.s1.len() > 2 * cls.r_b.len() {
        return Err(violation(
            "s1-size-bound",
            format!("|S1| = {} > 2|Rb| = {}", cls.s1.len(), 2 * cls.r_b.len()),
        ));
    }
    if cls.s2.len() > (ce - 1) * cls.r_c.len() {
        return Err(violation(
            "s2-size-bound",
            format!(
                "|S2| = {} > (ce-1)|Rc| = {}",
                cls.s2.len(),
                (ce - 1) * cls.r_c.len()
            ),
        ));
    }
    let weighted: usize = s0_by_band.iter().enumerate().map(|(i, &c)| i * c).sum();
    if weighted + ce * cls.s1.len() > (d - 3) * cls.r_b.len() {
        return Err(violation(
            "s0-band-edge-bound",
            format!(
                "sum(i*|S0_i|) + ce*|S1| = {} > (d-3)|Rb| = {}",
                weighted + ce * cls.s1.len(),
                (d - 3) * cls.r_b.len()
            ),
        ));
    }
    let anti_weighted: usize = s0_by_band
        .iter()
        .enumerate()
        .map(|(i, &c)| (d - 2 - i) * c)
        .sum();
    if anti_weighted > (d - 2) * r2 {
        return Err(violation(
            "s0-low-edge-bound",
            format!(
                "sum((d-2-i)|S0_i|) = {anti_weighted} > (d-2)|R2| = {}",
                (d - 2) * r2
            ),
        ));
    }
    if (d - 2) * cls.s0.len() + 2 * ce * cls.s1.len() > 2 * (d - 3) * cls.r_b.len() + (d - 2) * r2
    {
        return Err(violation(
            "s0-s1-chain-bound",
            format!(
                "(d-2)|S0| + 2ce|S1| = {} > 2(d-3)|Rb| + (d-2)|R2| = {}",
                (d - 2) * cls.s0.len() + 2 * ce * cls.s1.len(),
                2 * (d - 3) * cls.r_b.len() + (d - 2) * r2
            ),
        ));
    }

    Ok(cls)
}

/// Runs one matching-strategy extension on a graph with no 4-cycle: the
/// candidate's neighborhood is colored directly. The color with the most
/// edges into the candidate's low band is handed to a vertex that tolerates
/// it, the middle band is colored greedily, and the remaining low-band
/// vertices are matched to the leftover colors by a perfect matching under
/// the degree-sum condition.
pub fn extend_once_matching(
    g: &Graph,
    state: &mut ExtensionState,
) -> Result<StepReport, ExtensionError> {
    let d = state.d;
    let cls = classify_matching(g, state)?;
    let Some(&y) = cls.eligible.first() else {
        return Err(ExtensionError::NoCandidate {
            k: state.k,
            sizes: cls.sizes(),
        });
    };
    let fresh = state.k + 1;

    // low band: neighbors of y with at most two colored neighbors; middle
    // band: the rest of N(y) (no neighbor of an eligible y reaches the top
    // band).
    let in_c = &state.in_c;
    let low_band: Vec<usize> = g
        .neighbors(y)
        .iter()
        .copied()
        .filter(|&w| count_in(g, w, in_c) <= 2)
        .collect();
    let mid_band: Vec<usize> = g
        .neighbors(y)
        .iter()
        .copied()
        .filter(|&w| count_in(g, w, in_c) > 2)
        .collect();

    let low_with_colored = low_band
        .iter()
        .filter(|&&w| count_in(g, w, in_c) >= 1)
        .count();
    let zero_or_one = g
        .neighbors(y)
        .iter()
        .filter(|&&w| count_in(g, w, in_c) <= 1)
        .count();
    if zero_or_one < 3 {
        return Err(violation(
            "candidate-low-layer-bound",
            format!("|N(y) in (R0 u R1)| = {zero_or_one} < 3 for y = {y}"),
        ));
    }

    // Edge counts from each color class of C into N(y) and into the low
    // band; with no 4-cycle each colored vertex meets N(y) at most once, so
    // every class has a tolerant neighbor.
    let mut into_neighborhood = vec![0usize; d + 2];
    let mut into_low = vec![0usize; d + 2];
    for &w in g.neighbors(y) {
        let low = count_in(g, w, in_c) <= 2;
        for &x in g.neighbors(w) {
            if state.in_c[x] {
                let color = state.coloring.get(x).expect("C is colored");
                into_neighborhood[color] += 1;
                if low {
                    into_low[color] += 1;
                }
            }
        }
    }
    for color in 1..=d + 1 {
        if color != fresh && into_neighborhood[color] > d - 1 {
            return Err(violation(
                "class-edge-bound",
                format!(
                    "e(C_{color}, N(y)) = {} > d-1 = {}",
                    into_neighborhood[color],
                    d - 1
                ),
            ));
        }
    }

    let anchor = (1..=d + 1)
        .filter(|&j| j != fresh)
        .max_by_key(|&j| (into_low[j], std::cmp::Reverse(j)))
        .expect("palette has at least two colors");
    let e_star = into_low[anchor];
    let case: u8 = if e_star >= low_with_colored {
        1
    } else if e_star + 1 == low_with_colored {
        2
    } else {
        3
    };

    let tolerates_anchor = |w: usize| {
        g.neighbors(w)
            .iter()
            .all(|&x| !state.in_c[x] || state.coloring.get(x) != Some(anchor))
    };
    // Case 1 hands the anchor color to a middle-band vertex when one
    // tolerates it; otherwise (and in cases 2 and 3) to a low-band vertex.
    let w1 = if case == 1 {
        mid_band
            .iter()
            .copied()
            .find(|&w| tolerates_anchor(w))
            .or_else(|| low_band.iter().copied().find(|&w| tolerates_anchor(w)))
    } else {
        low_band
            .iter()
            .copied()
            .find(|&w| tolerates_anchor(w))
            .or_else(|| mid_band.iter().copied().find(|&w| tolerates_anchor(w)))
    };
    let Some(w1) = w1 else {
        return Err(violation(
            "anchor-tolerance",
            format!("every neighbor of {y} touches color class {anchor}"),
        ));
    };

    let mut c = state.coloring.clone();
    c.set(y, fresh);
    c.set(w1, anchor);

    // Greedy distinct colors for the middle band.
    let pool: Vec<usize> = (1..=d + 1).filter(|&j| j != fresh && j != anchor).collect();
    let mut used = vec![false; d + 2];
    for &u in &mid_band {
        if u == w1 {
            continue;
        }
        let mut blocked = vec![false; d + 2];
        for &x in g.neighbors(u) {
            if state.in_c[x] {
                blocked[state.coloring.get(x).expect("C is colored")] = true;
            }
        }
        let Some(&color) = pool.iter().find(|&&j| !used[j] && !blocked[j]) else {
            return Err(violation(
                "middle-band-greedy",
                format!("no free color for middle-band vertex {u}"),
            ));
        };
        used[color] = true;
        c.set(u, color);
    }

    // Perfect matching between the remaining low-band vertices and the
    // leftover colors.
    let remaining: Vec<usize> = low_band.iter().copied().filter(|&w| w != w1).collect();
    let leftover: Vec<usize> = pool.iter().copied().filter(|&j| !used[j]).collect();
    let t = remaining.len();
    if leftover.len() != t {
        return Err(violation(
            "color-budget",
            format!("{} leftover colors for {t} vertices", leftover.len()),
        ));
    }
    let mut h = BipartiteGraph::new(t, t);
    for (ui, &u) in remaining.iter().enumerate() {
        let mut blocked = vec![false; d + 2];
        for &x in g.neighbors(u) {
            if state.in_c[x] {
                blocked[state.coloring.get(x).expect("C is colored")] = true;
            }
        }
        for (ci, &j) in leftover.iter().enumerate() {
            if !blocked[j] {
                h.add_edge(ui, ci);
            }
        }
    }
    for ui in 0..t {
        if h.left_degree(ui) + 2 < t {
            return Err(violation(
                "low-band-degree",
                format!(
                    "vertex {} compatible with only {} of {t} colors",
                    remaining[ui],
                    h.left_degree(ui)
                ),
            ));
        }
    }
    let h_edges = h.edge_count();
    let matched = perfect_matching_degree_sum(&h).map_err(|detail| {
        let edges: Vec<(usize, usize)> = remaining
            .iter()
            .enumerate()
            .flat_map(|(ui, _)| h.neighbors(ui).iter().map(move |&ci| (ui, ci)))
            .collect();
        ExtensionError::NoPerfectMatching {
            k: state.k,
            t,
            h_edges: edges,
            detail,
        }
    })?;
    for (ui, ci) in matched {
        c.set(remaining[ui], leftover[ci]);
    }

    // The construction must have made y dominant and kept the boundary
    // proper; cross-check through the coloring digraph.
    let mut f = vec![y];
    f.extend_from_slice(g.neighbors(y));
    let dg = build_digraph(g, &state.c_vertices, &f, &c)?;
    if dg.loop_count() != d + 1 {
        return Err(violation(
            "matching-boundary",
            format!("loop count {} after direct coloring", dg.loop_count()),
        ));
    }

    let k_before = state.k;
    let info = MatchingStepInfo {
        case,
        anchor_color: anchor,
        w1,
        w1_in_low_band: low_band.contains(&w1),
        h_edges,
        t,
    };
    state.absorb(y, &f, c);
    state.check_invariants(g)?;
    Ok(StepReport {
        k: k_before,
        candidate: y,
        rotations: 0,
        sizes: cls.sizes(),
        matching: Some(info),
    })
}

/// Serializable failure context for reproduction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FailureSnapshot {
    pub k: usize,
    pub dominants: Vec<(usize, usize)>,
    pub coloring: Vec<Option<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification_sizes: Option<ClassificationSizes>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digraph_dot: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveSuccess {
    pub coloring: Coloring,
    /// One dominant vertex per color, taken from the final verification.
    pub dominants: Vec<(usize, usize)>,
    /// The candidates established by the extension steps, in order.
    pub established: Vec<(usize, usize)>,
    pub rotations: usize,
    pub steps: Vec<StepReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct SolveFailure {
    pub error: ExtensionError,
    pub rotations: usize,
    pub steps: Vec<StepReport>,
    pub warnings: Vec<String>,
    pub snapshot: FailureSnapshot,
}

impl std::fmt::Display for SolveFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.error)
    }
}

fn snapshot_of(state: &ExtensionState, error: &ExtensionError) -> FailureSnapshot {
    let classification_sizes = match error {
        ExtensionError::NoCandidate { sizes, .. } => Some(sizes.clone()),
        _ => None,
    };
    let digraph_dot = match error {
        ExtensionError::Digraph(DigraphError::NoCircuit { dot, .. })
        | ExtensionError::Digraph(DigraphError::PinnedLoopless { dot, .. }) => Some(dot.clone()),
        _ => None,
    };
    FailureSnapshot {
        k: state.k,
        dominants: state.dominants.clone(),
        coloring: state.coloring.assignment().to_vec(),
        classification_sizes,
        digraph_dot,
    }
}

/// Runs the full pipeline on a d-regular graph: extension steps until every
/// color of the `d+1` palette has a dominant vertex, then greedy completion
/// and verification. Size-bound and 4-cycle hypothesis violations are
/// reported as warnings, not errors, so below-bound instances can be
/// attempted. The returned coloring is always verifier-checked.
pub fn solve_b_coloring(
    g: &Graph,
    mode: Mode,
    strategy: Strategy,
) -> Result<SolveSuccess, Box<SolveFailure>> {
    let mut warnings = Vec::new();
    let fail_early = |error: ExtensionError, warnings: Vec<String>| {
        Box::new(SolveFailure {
            error,
            rotations: 0,
            steps: Vec::new(),
            warnings,
            snapshot: FailureSnapshot {
                k: 0,
                dominants: Vec::new(),
                coloring: Vec::new(),
                classification_sizes: None,
                digraph_dot: None,
            },
        })
    };

    let Some(d) = g.degree_if_regular() else {
        return Err(fail_early(ExtensionError::NonRegular, warnings));
    };
    if d < mode.min_degree() {
        return Err(fail_early(
            ExtensionError::DegreeTooSmall {
                d,
                min: mode.min_degree(),
                mode,
            },
            warnings,
        ));
    }
    if strategy == Strategy::Matching && mode != Mode::C4Free {
        return Err(fail_early(ExtensionError::StrategyModeMismatch, warnings));
    }
    if mode == Mode::C4Free && g.has_c4() {
        warnings.push("graph contains a 4-cycle; c4free-mode guarantees do not apply".to_string());
    }
    let bound = mode.size_bound(d);
    if g.n() < bound {
        warnings.push(format!(
            "n = {} below the guaranteed bound {bound} for d = {d}; attempting anyway",
            g.n()
        ));
    }

    let mut state = match init_state(g) {
        Ok(s) => s,
        Err(e) => return Err(fail_early(e, warnings)),
    };
    let mut steps: Vec<StepReport> = Vec::new();
    let mut rotations = 0usize;

    while state.k < d + 1 {
        // A partial coloring can cover all colors before d+1 extensions on
        // dense instances (every vertex of a rainbow complete graph is
        // dominant); stop as soon as the certificate is complete.
        if verify_b_coloring(g, &state.coloring, d + 1)
            .missing_colors
            .is_empty()
            && state.k > 0
        {
            break;
        }
        let step = match strategy {
            Strategy::Rotation => extend_once(g, &mut state, mode),
            Strategy::Matching => extend_once_matching(g, &mut state),
        };
        match step {
            Ok(report) => {
                rotations += report.rotations;
                steps.push(report);
            }
            Err(error) => {
                let snapshot = snapshot_of(&state, &error);
                return Err(Box::new(SolveFailure {
                    error,
                    rotations,
                    steps,
                    warnings,
                    snapshot,
                }));
            }
        }
    }

    let total = match greedy_complete(g, &state.coloring) {
        Ok(c) => c,
        Err(e) => {
            let error = ExtensionError::Coloring(e);
            let snapshot = snapshot_of(&state, &error);
            return Err(Box::new(SolveFailure {
                error,
                rotations,
                steps,
                warnings,
                snapshot,
            }));
        }
    };
    let verdict = verify_b_coloring(g, &total, d + 1);
    if !verdict.is_b_coloring {
        let error = ExtensionError::VerificationFailed {
            missing_colors: verdict.missing_colors.clone(),
        };
        let snapshot = snapshot_of(&state, &error);
        return Err(Box::new(SolveFailure {
            error,
            rotations,
            steps,
            warnings,
            snapshot,
        }));
    }
    let dominants: Vec<(usize, usize)> = verdict
        .dominant_by_color
        .iter()
        .map(|(&color, vs)| (vs[0], color))
        .collect();
    Ok(SolveSuccess {
        coloring: total,
        dominants,
        established: state.dominants.clone(),
        rotations,
        steps,
        warnings,
    })
}
