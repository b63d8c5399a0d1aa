//! Admissible graphs: enumeration up to canonical relabeling, structural
//! classification, coloring under caller-supplied bracket tables, symmetry
//! factors, and the polydifferential operator a colored graph acts by.
//!
//! Aerial (first-type) vertices each carry one copy of the linear Poisson
//! bivector, so they emit exactly two outgoing attachments (edges, at most
//! one short loop, phantom edges) and absorb at most one incoming edge.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::liealg::LieAlgebra;
use crate::ratlin::{rat, Rat};
use crate::uea::PolyElement;
use crate::{Error, Result};

/// Vertex of an admissible graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Aerial(usize),
    Boundary(usize),
}

impl Vertex {
    fn encode(self) -> i64 {
        match self {
            Vertex::Aerial(i) => i as i64,
            Vertex::Boundary(j) => -1 - (j as i64),
        }
    }
}

/// Second-type vertex layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SecondType {
    /// Half-plane model: `m` ordered boundary points, one of them marked.
    Marked { m: usize, mark: usize },
    /// Quadrant model: `k` points on iℝ⁺, the origin, `l` points on ℝ⁺.
    Quadrant { k: usize, l: usize },
}

impl SecondType {
    pub fn boundary_count(&self) -> usize {
        match *self {
            SecondType::Marked { m, .. } => m,
            SecondType::Quadrant { k, l } => k + l + 1,
        }
    }

    /// Index of the marked point (half-plane) or the origin (quadrant).
    pub fn mark(&self) -> usize {
        match *self {
            SecondType::Marked { mark, .. } => mark,
            SecondType::Quadrant { k, .. } => k,
        }
    }

    /// Dimension of the corresponding open configuration space.
    pub fn chart_dim(&self, n_aerial: usize) -> isize {
        match *self {
            SecondType::Marked { m, .. } => 2 * n_aerial as isize + m as isize - 2,
            SecondType::Quadrant { k, l } => 2 * n_aerial as isize + (k + l) as isize - 1,
        }
    }
}

/// Directed multigraph with aerial and boundary vertices, phantom edges and
/// short loops.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleGraph {
    pub n_aerial: usize,
    pub second: SecondType,
    /// Ordered edge list (sorted); multiple copies encode multiplicity.
    pub edges: Vec<(Vertex, Vertex)>,
    /// Sources of phantom edges ("edges to infinity"), sorted.
    pub phantom: Vec<usize>,
    /// Aerial vertices carrying a short loop (at most one each).
    pub loops: BTreeSet<usize>,
}

impl AdmissibleGraph {
    pub fn new(
        n_aerial: usize,
        second: SecondType,
        mut edges: Vec<(Vertex, Vertex)>,
        mut phantom: Vec<usize>,
        loops: BTreeSet<usize>,
    ) -> Result<Self> {
        edges.sort();
        phantom.sort_unstable();
        let g = AdmissibleGraph {
            n_aerial,
            second,
            edges,
            phantom,
            loops,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let nb = self.second.boundary_count();
        for &(s, t) in &self.edges {
            match s {
                Vertex::Aerial(i) if i < self.n_aerial => {}
                Vertex::Boundary(j) if j < nb => {}
                _ => return Err(Error::input("edge source out of range")),
            }
            match t {
                Vertex::Aerial(i) if i < self.n_aerial => {}
                Vertex::Boundary(j) if j < nb => {}
                _ => return Err(Error::input("edge target out of range")),
            }
            if s == t {
                return Err(Error::input("short loops are stored separately"));
            }
        }
        for &v in self.phantom.iter().chain(self.loops.iter()) {
            if v >= self.n_aerial {
                return Err(Error::input("phantom/loop vertex out of range"));
            }
        }
        // each aerial vertex emits exactly two attachments and absorbs ≤ 1
        for v in 0..self.n_aerial {
            if self.out_degree(v) != 2 {
                return Err(Error::input(format!(
                    "aerial vertex {v} must emit exactly two attachments"
                )));
            }
            if self.in_degree(v) > 1 {
                return Err(Error::input(format!(
                    "aerial vertex {v} absorbs more than one edge"
                )));
            }
        }
        Ok(())
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(s, _)| *s == Vertex::Aerial(v))
            .count()
            + self.phantom.iter().filter(|&&p| p == v).count()
            + usize::from(self.loops.contains(&v))
    }

    /// Incoming edges; a short loop occupies the incoming slot too.
    pub fn in_degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(_, t)| *t == Vertex::Aerial(v))
            .count()
            + usize::from(self.loops.contains(&v))
    }

    /// Number of form-bearing factors in the weight integrand: every real
    /// edge and every short loop carries a 1-form; phantom edges carry none.
    pub fn form_degree(&self) -> usize {
        self.edges.len() + self.loops.len()
    }

    /// Canonical encoding: minimum over aerial relabelings.
    pub fn canonical_form(&self) -> Vec<i64> {
        let perms = permutations(self.n_aerial);
        let mut best: Option<Vec<i64>> = None;
        for p in &perms {
            let enc = self.encode_with(p);
            if best.as_ref().is_none_or(|b| enc < *b) {
                best = Some(enc);
            }
        }
        best.unwrap_or_default()
    }

    fn encode_with(&self, perm: &[usize]) -> Vec<i64> {
        let map = |v: Vertex| -> Vertex {
            match v {
                Vertex::Aerial(i) => Vertex::Aerial(perm[i]),
                b => b,
            }
        };
        let mut edges: Vec<(i64, i64)> = self
            .edges
            .iter()
            .map(|&(s, t)| (map(s).encode(), map(t).encode()))
            .collect();
        edges.sort_unstable();
        let mut phantom: Vec<i64> = self.phantom.iter().map(|&v| perm[v] as i64).collect();
        phantom.sort_unstable();
        let mut loops: Vec<i64> = self.loops.iter().map(|&v| perm[v] as i64).collect();
        loops.sort_unstable();
        let mut out = vec![self.n_aerial as i64];
        for (s, t) in edges {
            out.push(s);
            out.push(t);
        }
        out.push(-9999); // phantom separator
        out.extend(phantom);
        out.push(-9998); // loop separator
        out.extend(loops);
        out
    }

    /// Number of aerial relabelings fixing the (uncolored) graph.
    pub fn automorphism_count(&self) -> usize {
        let id: Vec<usize> = (0..self.n_aerial).collect();
        let base = self.encode_with(&id);
        permutations(self.n_aerial)
            .iter()
            .filter(|p| self.encode_with(p) == base)
            .count()
    }

    /// Stable string id for cache keys and reports.
    pub fn graph_id(&self) -> String {
        let c = self.canonical_form();
        let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        format!("g[{}]", parts.join(","))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n_aerial,
            "second": match self.second {
                SecondType::Marked { m, mark } => serde_json::json!({"m": m, "mark": mark}),
                SecondType::Quadrant { k, l } => serde_json::json!({"k": k, "l": l}),
            },
            "edges": self.edges.iter()
                .map(|(s, t)| vec![s.encode(), t.encode()])
                .collect::<Vec<_>>(),
            "phantom": self.phantom,
            "loops": self.loops.iter().copied().collect::<Vec<_>>(),
        })
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(cur, k + 1, out);
            cur.swap(k, i);
        }
    }
    rec(&mut cur, 0, &mut out);
    out
}

/// Structural class of a graph per the quantized-differential analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum GraphClass {
    Bernoulli,
    Wheel,
    BernoulliWheel,
    BracketOfBernoullis,
    Disconnected,
    Other,
}

/// Classify by the aerial-edge structure: rooted chains (Bernoulli), oriented
/// cycles with one phantom edge (Wheel), a chain grafted on a wheel
/// (BernoulliWheel), or the bracket-of-two-chains shape fed from a boundary
/// vertex.
pub fn classify_graph(g: &AdmissibleGraph) -> GraphClass {
    let n = g.n_aerial;
    if n == 0 {
        return GraphClass::Other;
    }
    // undirected connectivity over aerial-aerial and boundary-sourced edges
    let mut adj = vec![BTreeSet::<usize>::new(); n];
    let mut boundary_children: Vec<usize> = Vec::new();
    for &(s, t) in &g.edges {
        match (s, t) {
            (Vertex::Aerial(a), Vertex::Aerial(b)) => {
                adj[a].insert(b);
                adj[b].insert(a);
            }
            (Vertex::Boundary(_), Vertex::Aerial(b)) => boundary_children.push(b),
            _ => {}
        }
    }
    // union boundary-fed vertices through their carrier (they stay connected
    // through the boundary vertex)
    for w in boundary_children.windows(2) {
        adj[w[0]].insert(w[1]);
        adj[w[1]].insert(w[0]);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    if count < n {
        return GraphClass::Disconnected;
    }

    let aerial_edges: Vec<(usize, usize)> = g
        .edges
        .iter()
        .filter_map(|&(s, t)| match (s, t) {
            (Vertex::Aerial(a), Vertex::Aerial(b)) => Some((a, b)),
            _ => None,
        })
        .collect();
    let from_boundary = !boundary_children.is_empty();
    let out_aerial = |v: usize| aerial_edges.iter().filter(|(s, _)| *s == v).count();
    let in_aerial = |v: usize| aerial_edges.iter().filter(|(_, t)| *t == v).count();

    // detect the directed cycle among aerial edges, if any
    let cycle = find_cycle(n, &aerial_edges);

    if !from_boundary {
        if g.phantom.len() != 1 {
            return GraphClass::Other;
        }
        match cycle {
            None => {
                // rooted acyclic graph: one vertex that no edge ends at
                // (short loops occupy the in-slot, so loop vertices are not
                // roots)
                let roots = (0..n)
                    .filter(|&v| in_aerial(v) == 0 && !g.loops.contains(&v))
                    .count();
                if roots == 1 {
                    GraphClass::Bernoulli
                } else {
                    GraphClass::Other
                }
            }
            Some(cyc) => {
                if cyc.len() == n {
                    GraphClass::Wheel
                } else {
                    GraphClass::BernoulliWheel
                }
            }
        }
    } else {
        // boundary-fed graphs carry one extra phantom edge per feeding edge
        if boundary_children.len() != 1
            || cycle.is_some()
            || g.phantom.len() != 2
        {
            return GraphClass::Other;
        }
        let c = boundary_children[0];
        if out_aerial(c) == 2 {
            // the fed vertex's two outgoing edges reach the roots of two
            // Bernoulli chains
            GraphClass::BracketOfBernoullis
        } else {
            // a single Bernoulli chain whose root is fed from the
            // second-type vertex
            GraphClass::Bernoulli
        }
    }
}

fn find_cycle(n: usize, edges: &[(usize, usize)]) -> Option<BTreeSet<usize>> {
    // depth-first search over all out-edges; report the first directed cycle
    fn dfs(
        v: usize,
        edges: &[(usize, usize)],
        path: &mut Vec<usize>,
        done: &mut BTreeSet<usize>,
    ) -> Option<BTreeSet<usize>> {
        path.push(v);
        for &(s, t) in edges {
            if s != v {
                continue;
            }
            if let Some(pos) = path.iter().position(|&u| u == t) {
                return Some(path[pos..].iter().copied().collect());
            }
            if !done.contains(&t) {
                if let Some(c) = dfs(t, edges, path, done) {
                    return Some(c);
                }
            }
        }
        path.pop();
        done.insert(v);
        None
    }
    let mut done = BTreeSet::new();
    for start in 0..n {
        if done.contains(&start) {
            continue;
        }
        if let Some(c) = dfs(start, edges, &mut Vec::new(), &mut done) {
            return Some(c);
        }
    }
    None
}

/// Enumeration options.
#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub multi_edges: bool,
    pub short_loops: bool,
    /// Maximum number of edges departing from boundary vertices.
    pub edges_from_boundary: usize,
    /// Maximum number of phantom edges.
    pub phantom_budget: usize,
    /// Per-boundary-vertex cap on incoming edges (None = unlimited).
    pub boundary_in_caps: Option<Vec<usize>>,
    /// Keep only graphs whose form degree equals the chart dimension.
    pub degree_filter: bool,
    /// Combinatorial guard.
    pub max_aerial: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            multi_edges: true,
            short_loops: true,
            edges_from_boundary: 0,
            phantom_budget: 1,
            boundary_in_caps: None,
            degree_filter: true,
            max_aerial: 4,
        }
    }
}

/// Exhaustive list of admissible graphs up to canonical relabeling of the
/// aerial vertices, in deterministic (canonical-encoding) order.
pub fn enumerate_graphs(
    n: usize,
    second: SecondType,
    options: &EnumOptions,
) -> Result<Vec<AdmissibleGraph>> {
    if n > options.max_aerial {
        return Err(Error::Budget(format!(
            "n = {n} exceeds the enumeration guard {}",
            options.max_aerial
        )));
    }
    let nb = second.boundary_count();
    let mut out: BTreeMap<Vec<i64>, AdmissibleGraph> = BTreeMap::new();

    // attachment targets for one out-slot of an aerial vertex
    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Slot {
        Phantom,
        Loop,
        Edge(Vertex),
    }

    let mut slot_choices: Vec<Slot> = vec![Slot::Phantom];
    for j in 0..nb {
        slot_choices.push(Slot::Edge(Vertex::Boundary(j)));
    }
    for i in 0..n {
        slot_choices.push(Slot::Edge(Vertex::Aerial(i)));
    }
    if options.short_loops {
        slot_choices.push(Slot::Loop);
    }

    // boundary-sourced edge multisets (targets are aerial vertices)
    let mut boundary_edge_sets: Vec<Vec<(usize, usize)>> = vec![vec![]];
    if options.edges_from_boundary > 0 && n > 0 {
        let singles: Vec<(usize, usize)> = (0..nb)
            .flat_map(|b| (0..n).map(move |a| (b, a)))
            .collect();
        let mut current: Vec<Vec<(usize, usize)>> = vec![vec![]];
        for _ in 0..options.edges_from_boundary {
            let mut next = Vec::new();
            for set in &current {
                for &s in &singles {
                    let mut grown = set.clone();
                    if grown.last().is_some_and(|&l| s < l) {
                        continue; // keep multisets sorted
                    }
                    grown.push(s);
                    next.push(grown);
                }
            }
            boundary_edge_sets.extend(next.clone());
            current = next;
        }
    }

    for bedges in &boundary_edge_sets {
        // per-vertex unordered pair of slots
        let mut pairs: Vec<Vec<(Slot, Slot)>> = Vec::with_capacity(n);
        for v in 0..n {
            let mut local = Vec::new();
            for (ai, &a) in slot_choices.iter().enumerate() {
                for &b in &slot_choices[ai..] {
                    // no self-edges through the Edge slot; loops via Loop only
                    if a == Slot::Edge(Vertex::Aerial(v)) || b == Slot::Edge(Vertex::Aerial(v)) {
                        continue;
                    }
                    if a == Slot::Loop && b == Slot::Loop {
                        continue; // short loops cannot be multiple
                    }
                    if !options.multi_edges && a == b {
                        if let Slot::Edge(_) = a {
                            continue;
                        }
                    }
                    if (a == Slot::Phantom && b == Slot::Phantom)
                        && options.phantom_budget < 2
                    {
                        continue;
                    }
                    local.push((a, b));
                }
            }
            pairs.push(local);
            let _ = v;
        }

        // cartesian product over vertices
        let mut idx = vec![0usize; n];
        'outer: loop {
            // build candidate
            let mut edges: Vec<(Vertex, Vertex)> = bedges
                .iter()
                .map(|&(b, a)| (Vertex::Boundary(b), Vertex::Aerial(a)))
                .collect();
            let mut phantom = Vec::new();
            let mut loops = BTreeSet::new();
            let mut ok = true;
            for v in 0..n {
                let (a, b) = pairs[v][idx[v]];
                for s in [a, b] {
                    match s {
                        Slot::Phantom => phantom.push(v),
                        Slot::Loop => {
                            loops.insert(v);
                        }
                        Slot::Edge(t) => edges.push((Vertex::Aerial(v), t)),
                    }
                }
            }
            if phantom.len() > options.phantom_budget {
                ok = false;
            }
            if ok {
                if let Ok(g) = AdmissibleGraph::new(n, second, edges, phantom, loops.clone()) {
                    let keep = !options.degree_filter
                        || g.form_degree() as isize == second.chart_dim(n);
                    let caps_ok = match &options.boundary_in_caps {
                        None => true,
                        Some(caps) => (0..nb).all(|j| {
                            g.edges
                                .iter()
                                .filter(|(_, t)| *t == Vertex::Boundary(j))
                                .count()
                                <= caps[j]
                        }),
                    };
                    if keep && caps_ok {
                        out.entry(g.canonical_form()).or_insert(g);
                    }
                }
            }
            // advance the product index
            for v in 0..n {
                idx[v] += 1;
                if idx[v] < pairs[v].len() {
                    continue 'outer;
                }
                idx[v] = 0;
            }
            break;
        }
        if n == 0 {
            // only the edgeless graph (plus possible boundary edges)
            if let Ok(g) = AdmissibleGraph::new(
                0,
                second,
                bedges
                    .iter()
                    .map(|&(b, a)| (Vertex::Boundary(b), Vertex::Aerial(a)))
                    .collect(),
                vec![],
                BTreeSet::new(),
            ) {
                let keep =
                    !options.degree_filter || g.form_degree() as isize == second.chart_dim(0);
                if keep {
                    out.entry(g.canonical_form()).or_insert(g);
                }
            }
        }
    }
    Ok(out.into_values().collect())
}

/// Symmetry factor: product over ordered vertex pairs of 1/(multiplicity!).
pub fn symmetry_factor(g: &AdmissibleGraph) -> Rat {
    let mut mult: BTreeMap<(Vertex, Vertex), u32> = BTreeMap::new();
    for &e in &g.edges {
        *mult.entry(e).or_insert(0) += 1;
    }
    let mut f = Rat::one();
    for (_, m) in mult {
        let mut fact = Rat::one();
        for i in 2..=m {
            fact *= rat(i as i64);
        }
        f /= fact;
    }
    f
}

/// How a coordinate part restricts to the brane when it survives as a free
/// coefficient at a vertex with no incoming edge.
#[derive(Debug, Clone)]
pub enum PartRestriction {
    /// The coordinate stays a polynomial variable (brane direction).
    Variable,
    /// The coordinate restricts to a constant (affine shift χ), one value per
    /// coordinate of the part.
    Constant(Vec<Rat>),
    /// The coordinate vanishes on the brane.
    Zero,
}

/// Caller-supplied coloring data: the partition of the coordinate indices,
/// the bracket-compatibility table, boundary filters and loop signs.
#[derive(Debug, Clone)]
pub struct ColorScheme {
    /// Coordinate indices of each color part (into the adapted basis).
    pub parts: Vec<Vec<usize>>,
    /// `bracket_ok[a][b][c]`: may a vertex with out-colors (a, b) absorb a
    /// coefficient in part c (i.e. does [part_a, part_b] meet part c)?
    pub bracket_ok: Vec<Vec<Vec<bool>>>,
    /// Allowed colors for edges into each boundary vertex.
    pub boundary_in: Vec<Vec<bool>>,
    /// Color assigned to phantom edges.
    pub phantom_color: usize,
    /// Loop sign per part: +1 for div⁺ parts, −1 for div⁻ parts.
    pub loop_signs: Vec<i8>,
    /// How each part restricts on the brane (for free coefficients).
    pub restriction: Vec<PartRestriction>,
}

impl ColorScheme {
    /// Derive the bracket table from an algebra and a partition of its basis.
    pub fn from_partition(
        alg: &LieAlgebra,
        parts: Vec<Vec<usize>>,
        boundary_in: Vec<Vec<bool>>,
        phantom_color: usize,
        loop_signs: Vec<i8>,
        restriction: Vec<PartRestriction>,
    ) -> Result<Self> {
        let np = parts.len();
        if boundary_in.iter().any(|r| r.len() != np)
            || loop_signs.len() != np
            || restriction.len() != np
        {
            return Err(Error::input("color scheme table sizes disagree"));
        }
        let mut covered = vec![false; alg.dim];
        for p in &parts {
            for &i in p {
                if i >= alg.dim || covered[i] {
                    return Err(Error::input("parts must partition the basis"));
                }
                covered[i] = true;
            }
        }
        let mut bracket_ok = vec![vec![vec![false; np]; np]; np];
        for a in 0..np {
            for b in 0..np {
                for c in 0..np {
                    'search: for &i in &parts[a] {
                        for &j in &parts[b] {
                            for &m in &parts[c] {
                                if !alg.structure_constant(i, j, m).is_zero() {
                                    bracket_ok[a][b][c] = true;
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(ColorScheme {
            parts,
            bracket_ok,
            boundary_in,
            phantom_color,
            loop_signs,
            restriction,
        })
    }

    pub fn part_of(&self, index: usize) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&index))
    }
}

/// Color assignment for the edges of a graph (parallel to `g.edges`), plus
/// the fixed phantom color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeColoring {
    pub edge_colors: Vec<usize>,
}

/// All colorings surviving the bracket/boundary filters.
pub fn colorings(g: &AdmissibleGraph, scheme: &ColorScheme) -> Vec<EdgeColoring> {
    let ne = g.edges.len();
    let np = scheme.parts.len();
    let mut found = Vec::new();
    let mut colors = vec![0usize; ne];
    fn vertex_ok(
        g: &AdmissibleGraph,
        scheme: &ColorScheme,
        colors: &[usize],
        assigned: usize,
        v: usize,
    ) -> bool {
        // collect this vertex's attachments among the already-colored edges
        let mut outs: Vec<usize> = Vec::new();
        let mut inc: Option<usize> = None;
        let mut undecided = false;
        for (i, &(s, t)) in g.edges.iter().enumerate() {
            if s == Vertex::Aerial(v) {
                if i < assigned {
                    outs.push(colors[i]);
                } else {
                    undecided = true;
                }
            }
            if t == Vertex::Aerial(v) {
                if i < assigned {
                    inc = Some(colors[i]);
                } else {
                    undecided = true;
                }
            }
        }
        for _ in g.phantom.iter().filter(|&&p| p == v) {
            outs.push(scheme.phantom_color);
        }
        if g.loops.contains(&v) {
            // loop pairs the in-slot with one out internally; no constraint
            // recorded here
            return true;
        }
        if undecided || outs.len() != 2 {
            return true; // decide once everything at v is colored
        }
        let (a, b) = (outs[0], outs[1]);
        match inc {
            Some(c) => scheme.bracket_ok[a][b][c] || scheme.bracket_ok[b][a][c],
            None => (0..scheme.parts.len()).any(|c| {
                !matches!(scheme.restriction[c], PartRestriction::Zero)
                    && !scheme.parts[c].is_empty()
                    && (scheme.bracket_ok[a][b][c] || scheme.bracket_ok[b][a][c])
            }),
        }
    }
    fn rec(
        g: &AdmissibleGraph,
        scheme: &ColorScheme,
        colors: &mut Vec<usize>,
        pos: usize,
        np: usize,
        found: &mut Vec<EdgeColoring>,
    ) {
        if pos == colors.len() {
            found.push(EdgeColoring {
                edge_colors: colors.clone(),
            });
            return;
        }
        for c in 0..np {
            if scheme.parts[c].is_empty() {
                continue;
            }
            // boundary filter
            if let (_, Vertex::Boundary(j)) = g.edges[pos] {
                if !scheme.boundary_in[j][c] {
                    continue;
                }
            }
            colors[pos] = c;
            // re-check constraints at both endpoints with everything ≤ pos
            let mut ok = true;
            for v in 0..g.n_aerial {
                if !vertex_ok(g, scheme, colors, pos + 1, v) {
                    ok = false;
                    break;
                }
            }
            if ok {
                rec(g, scheme, colors, pos + 1, np, found);
            }
        }
    }
    rec(g, scheme, &mut colors, 0, np, &mut found);
    found
}

/// The polydifferential contraction a colored graph acts by, at unit weight:
/// the caller scales by the Monte-Carlo weight. Includes the symmetry
/// factor; the model-dependent short-loop normalization (½ dη on the
/// half-plane model, dη on the quadrant model) lives on the weight side, so
/// the operator itself is model-independent.
pub fn operator_of_graph(
    alg: &LieAlgebra,
    scheme: &ColorScheme,
    g: &AdmissibleGraph,
    coloring: &EdgeColoring,
    inputs: &[PolyElement],
) -> Result<PolyElement> {
    if inputs.len() != g.second.boundary_count() {
        return Err(Error::Arity(format!(
            "expected {} boundary inputs, got {}",
            g.second.boundary_count(),
            inputs.len()
        )));
    }
    if coloring.edge_colors.len() != g.edges.len() {
        return Err(Error::Arity("coloring length mismatch".into()));
    }
    let dim = alg.dim;

    // Per aerial vertex: ordered out-attachments and the incoming source.
    // Out-slot order: graph edge order first, then phantoms, loop last.
    #[derive(Clone, Copy, Debug)]
    enum Out {
        Edge(usize),
        Phantom,
        Loop,
    }
    let mut outs: Vec<Vec<Out>> = vec![Vec::new(); g.n_aerial];
    let mut incoming: Vec<Option<usize>> = vec![None; g.n_aerial]; // edge index
    for (i, &(s, t)) in g.edges.iter().enumerate() {
        if let Vertex::Aerial(v) = s {
            outs[v].push(Out::Edge(i));
        }
        if let Vertex::Aerial(v) = t {
            incoming[v] = Some(i);
        }
    }
    for &p in &g.phantom {
        outs[p].push(Out::Phantom);
    }
    for &v in &g.loops {
        outs[v].push(Out::Loop);
    }

    // index ranges per edge from its color
    let edge_range = |e: usize| -> &[usize] { &scheme.parts[coloring.edge_colors[e]] };

    // enumerate index assignments over all edges (+ phantom indices)
    let ne = g.edges.len();
    let phantom_parts: Vec<&[usize]> = g
        .phantom
        .iter()
        .map(|_| scheme.parts[scheme.phantom_color].as_slice())
        .collect();

    let mut result = PolyElement::zero(dim);
    let mut edge_idx = vec![0usize; ne];
    let mut phantom_idx = vec![0usize; g.phantom.len()];

    let evaluate = |eidx: &[usize], pidx: &[usize]| -> Result<Option<PolyElement>> {
        let mut term = PolyElement::one(dim);
        let mut coeff = Rat::one();
        let mut phantom_seen = 0usize;
        for v in 0..g.n_aerial {
            // resolve the two out indices in slot order
            let mut slot_indices: Vec<Option<usize>> = Vec::new(); // None = loop slot
            for o in &outs[v] {
                match o {
                    Out::Edge(e) => slot_indices.push(Some(eidx[*e])),
                    Out::Phantom => {
                        slot_indices.push(Some(pidx[phantom_seen]));
                        phantom_seen += 1;
                    }
                    Out::Loop => slot_indices.push(None),
                }
            }
            debug_assert_eq!(slot_indices.len(), 2);
            let has_loop = slot_indices.iter().any(Option::is_none);
            if has_loop {
                let other = slot_indices.iter().flatten().next().copied().ok_or_else(
                    || Error::input("loop vertex needs one ordinary attachment"),
                )?;
                // signed divergence difference: Σ_ℓ sign(ℓ) c_{other,ℓ}^ℓ
                let mut acc = Rat::zero();
                for (part, sign) in scheme.loop_signs.iter().enumerate() {
                    for &l in &scheme.parts[part] {
                        let s = rat(*sign as i64);
                        acc += &s * alg.structure_constant(other, l, l);
                    }
                }
                if acc.is_zero() {
                    return Ok(None);
                }
                coeff *= acc;
            } else {
                let (i1, i2) = (slot_indices[0].unwrap(), slot_indices[1].unwrap());
                match incoming[v].map(|e| eidx[e]) {
                    Some(m) => {
                        let c = alg.structure_constant(i1, i2, m);
                        if c.is_zero() {
                            return Ok(None);
                        }
                        coeff *= c;
                    }
                    None => {
                        // free coefficient Σ_m c_{i1,i2}^m x_m restricted
                        let mut free = PolyElement::zero(dim);
                        for m in 0..dim {
                            let c = alg.structure_constant(i1, i2, m);
                            if c.is_zero() {
                                continue;
                            }
                            let part = scheme
                                .part_of(m)
                                .ok_or_else(|| Error::input("index outside all parts"))?;
                            match &scheme.restriction[part] {
                                PartRestriction::Variable => {
                                    free = free.add(&PolyElement::variable(dim, m).scale(c));
                                }
                                PartRestriction::Constant(vals) => {
                                    let k =
                                        scheme.parts[part].iter().position(|&x| x == m).unwrap();
                                    free = free
                                        .add(&PolyElement::constant(dim, vals[k].clone()).scale(c));
                                }
                                PartRestriction::Zero => {}
                            }
                        }
                        if free.is_zero() {
                            return Ok(None);
                        }
                        term = term.mul(&free);
                    }
                }
            }
        }

        // derivatives on the boundary inputs
        let mut derived = inputs.to_vec();
        for (e, &(_, t)) in g.edges.iter().enumerate() {
            if let Vertex::Boundary(j) = t {
                derived[j] = derivative(&derived[j], eidx[e]);
                if derived[j].is_zero() {
                    return Ok(None);
                }
            }
        }
        let mut contribution = term.scale(&coeff);
        for d in &derived {
            contribution = contribution.mul(d);
        }
        Ok(Some(contribution))
    };

    loop {
        let eidx: Vec<usize> = (0..ne).map(|e| edge_range(e)[edge_idx[e]]).collect();
        let pidx: Vec<usize> = (0..g.phantom.len())
            .map(|p| phantom_parts[p][phantom_idx[p]])
            .collect();
        if let Some(contribution) = evaluate(&eidx, &pidx)? {
            result = result.add(&contribution);
        }
        // advance the multi-index
        let mut carried = false;
        for e in 0..ne {
            edge_idx[e] += 1;
            if edge_idx[e] < edge_range(e).len() {
                carried = true;
                break;
            }
            edge_idx[e] = 0;
        }
        if !carried {
            let mut done = true;
            for p in 0..g.phantom.len() {
                phantom_idx[p] += 1;
                if phantom_idx[p] < phantom_parts[p].len() {
                    done = false;
                    break;
                }
                phantom_idx[p] = 0;
            }
            if done {
                break;
            }
        }
    }

    let scale = symmetry_factor(g);
    Ok(result.scale(&scale))
}

fn derivative(f: &PolyElement, var: usize) -> PolyElement {
    let mut out = PolyElement::zero(f.dim);
    for (e, c) in &f.terms {
        if e[var] == 0 {
            continue;
        }
        let mut ne = e.clone();
        ne[var] -= 1;
        out.add_term(ne, c * rat(e[var] as i64));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::SymmetricPair;
    use crate::ratlin::{ratio, RatMat};

    fn sl2_cartan() -> SymmetricPair {
        let alg = LieAlgebra::sl2();
        let sigma = RatMat::from_rows(vec![
            vec![rat(0), rat(0), rat(-1)],
            vec![rat(0), rat(-1), rat(0)],
            vec![rat(-1), rat(0), rat(0)],
        ]);
        SymmetricPair::new(alg, sigma).unwrap()
    }

    /// Two-color scheme for a symmetric pair on the brane χ + 𝔨^⊥ (χ = 0
    /// unless given): part 0 = 𝔭 (color (+,+)), part 1 = 𝔨 (color (+,−)).
    fn pair_scheme(pair: &SymmetricPair, n_boundary: usize, chi: Vec<Rat>) -> ColorScheme {
        let p: Vec<usize> = pair.p_indices().collect();
        let k: Vec<usize> = pair.k_indices().collect();
        let restriction = vec![
            PartRestriction::Variable,
            if chi.iter().all(|c| c.is_zero()) {
                PartRestriction::Zero
            } else {
                PartRestriction::Constant(chi)
            },
        ];
        ColorScheme::from_partition(
            &pair.adapted,
            vec![p, k],
            vec![vec![true, true]; n_boundary],
            1,
            vec![1, -1],
            restriction,
        )
        .unwrap()
    }

    #[test]
    fn enumerate_trivial_and_figure7() {
        // n = 0: only the edgeless graph
        let second = SecondType::Marked { m: 2, mark: 1 };
        let opts = EnumOptions {
            degree_filter: false,
            ..Default::default()
        };
        let gs = enumerate_graphs(0, second, &opts).unwrap();
        assert_eq!(gs.len(), 1);
        assert!(gs[0].edges.is_empty());

        // the two type-(1,2) graphs with one edge slot to the argument vertex
        let opts = EnumOptions {
            phantom_budget: 0,
            boundary_in_caps: Some(vec![usize::MAX, 0]),
            ..Default::default()
        };
        let gs = enumerate_graphs(1, second, &opts).unwrap();
        assert_eq!(gs.len(), 2, "{gs:?}");
        let with_loop = gs.iter().filter(|g| !g.loops.is_empty()).count();
        assert_eq!(with_loop, 1);

        // budget guard
        assert!(matches!(
            enumerate_graphs(5, second, &EnumOptions::default()),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn enumerate_type21_and_classify() {
        // d_B-style graphs of type (2,1): no loops, one phantom
        let second = SecondType::Marked { m: 1, mark: 0 };
        let opts = EnumOptions {
            short_loops: false,
            phantom_budget: 1,
            ..Default::default()
        };
        let gs = enumerate_graphs(2, second, &opts).unwrap();
        // canonical dedup leaves no duplicate forms
        let forms: BTreeSet<Vec<i64>> = gs.iter().map(|g| g.canonical_form()).collect();
        assert_eq!(forms.len(), gs.len());
        let classes: Vec<GraphClass> = gs.iter().map(classify_graph).collect();
        // hand enumeration: one chain (Bernoulli), one 2-wheel with ray and
        // phantom, plus disconnected/degenerate shapes
        let bern = classes.iter().filter(|c| **c == GraphClass::Bernoulli).count();
        let wheels = classes.iter().filter(|c| **c == GraphClass::Wheel).count();
        assert_eq!(wheels, 1, "{gs:?} {classes:?}");
        assert_eq!(bern, 2); // the chain and the double-edge-to-boundary tree
        // every connected graph lands in a named class
        for (g, c) in gs.iter().zip(&classes) {
            if *c != GraphClass::Disconnected {
                assert_ne!(*c, GraphClass::Other, "{g:?}");
            }
        }
    }

    #[test]
    fn classify_examples() {
        let second = SecondType::Marked { m: 1, mark: 0 };
        // chain with root, per-vertex boundary edge, one phantom
        let chain = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![1],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(classify_graph(&chain), GraphClass::Bernoulli);

        // oriented cycle with phantom and rays
        let wheel = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(1), Vertex::Aerial(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![0],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(classify_graph(&wheel), GraphClass::Wheel);

        // two disjoint components
        let disc = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![0],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(classify_graph(&disc), GraphClass::Disconnected);

        // bracket of two Bernoulli chains at n = 3
        let bracket = AdmissibleGraph::new(
            3,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Aerial(2)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(2), Vertex::Boundary(0)),
                (Vertex::Boundary(0), Vertex::Aerial(0)),
            ],
            vec![1, 2],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(classify_graph(&bracket), GraphClass::BracketOfBernoullis);
    }

    #[test]
    fn symmetry_factors() {
        let second = SecondType::Marked { m: 1, mark: 0 };
        let simple = AdmissibleGraph::new(
            1,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
            ],
            vec![1usize; 0],
            BTreeSet::new(),
        );
        // single vertex needs out-degree 2; use phantom to fill
        let simple = simple.or_else(|_| {
            AdmissibleGraph::new(
                1,
                second,
                vec![(Vertex::Aerial(0), Vertex::Boundary(0))],
                vec![0],
                BTreeSet::new(),
            )
        })
        .unwrap();
        assert_eq!(symmetry_factor(&simple), Rat::one());

        let double = AdmissibleGraph::new(
            1,
            SecondType::Marked { m: 2, mark: 1 },
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(symmetry_factor(&double), ratio(1, 2));

        // triple edge requires an out-degree-3 carrier, so test the factor on
        // a raw multiset directly through a 3-aerial configuration
        let triple = AdmissibleGraph::new(
            3,
            SecondType::Marked { m: 2, mark: 1 },
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(2), Vertex::Boundary(0)),
                (Vertex::Aerial(2), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(symmetry_factor(&triple), ratio(1, 8));
    }

    #[test]
    fn colorings_respect_cartan_filters() {
        let pair = sl2_cartan();
        // through-vertex with phantom: in-edge color forced by the bracket
        let second = SecondType::Marked { m: 1, mark: 0 };
        let g = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![1],
            BTreeSet::new(),
        )
        .unwrap();
        let scheme = pair_scheme(&pair, 1, vec![Rat::zero()]);
        let cols = colorings(&g, &scheme);
        // at vertex 1 (outs: boundary-edge color c, phantom = 𝔨), in-edge
        // color d: forbidden combos (d=𝔭 out=𝔨) and (d=𝔨 out=𝔭)
        for c in &cols {
            let boundary_color_v1 = c.edge_colors[2];
            let in_color_v1 = c.edge_colors[0];
            // [c_out, 𝔨] ∋ in: [𝔭,𝔨]=𝔭, [𝔨,𝔨]=0 for sl2 (𝔨 abelian)
            assert_eq!(boundary_color_v1, 0); // 𝔭-colored boundary edge
            assert_eq!(in_color_v1, 0); // in-edge must be 𝔭
        }
        assert!(!cols.is_empty());
    }

    #[test]
    fn wheel_colorings_alternate_and_odd_wheels_die() {
        let pair = sl2_cartan();
        // rays derive S(𝔭)-arguments, so restrict boundary in-colors to 𝔭
        let scheme = {
            let mut s = pair_scheme(&pair, 2, vec![Rat::zero()]);
            s.boundary_in = vec![vec![true, false], vec![true, false]];
            s
        };
        let second = SecondType::Quadrant { k: 1, l: 0 };
        // 2-wheel with rays to the argument vertex (boundary 0 = iℝ⁺ point)
        let wheel2 = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Aerial(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        let cols = colorings(&wheel2, &scheme);
        assert_eq!(cols.len(), 2);
        for c in &cols {
            // cycle edges alternate: edges 0 and 2 carry different colors
            assert_ne!(c.edge_colors[0], c.edge_colors[2]);
            // rays are 𝔭
            assert_eq!(c.edge_colors[1], 0);
            assert_eq!(c.edge_colors[3], 0);
        }

        // 3-wheel: no admissible coloring
        let wheel3 = AdmissibleGraph::new(
            3,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Aerial(2)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(2), Vertex::Aerial(0)),
                (Vertex::Aerial(2), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        assert!(colorings(&wheel3, &scheme).is_empty());

        // zero-dimensional 𝔨: every edge colored in the 𝔭-part only
        let ab = LieAlgebra::abelian(2);
        let pair_ab = SymmetricPair::new(
            ab,
            RatMat::from_rows(vec![vec![rat(-1), rat(0)], vec![rat(0), rat(-1)]]),
        )
        .unwrap();
        let scheme_ab = pair_scheme(&pair_ab, 2, vec![]);
        let g = AdmissibleGraph::new(
            1,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Boundary(1)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        for c in colorings(&g, &scheme_ab) {
            assert!(c.edge_colors.iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn operator_zero_poisson() {
        let ab = LieAlgebra::abelian(2);
        let pair = SymmetricPair::new(
            ab,
            RatMat::from_rows(vec![vec![rat(-1), rat(0)], vec![rat(0), rat(-1)]]),
        )
        .unwrap();
        let scheme = pair_scheme(&pair, 2, vec![]);
        let second = SecondType::Marked { m: 2, mark: 1 };
        let g = AdmissibleGraph::new(
            1,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Boundary(1)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        let x = PolyElement::variable(2, 0);
        let y = PolyElement::variable(2, 1);
        let coloring = EdgeColoring {
            edge_colors: vec![0, 0],
        };
        let op = operator_of_graph(&pair.adapted, &scheme, &g, &coloring, &[x, y]).unwrap();
        assert!(op.is_zero());
    }

    #[test]
    fn operator_figure7_loop_graph() {
        // solvable pair [a,b] = b with σ(a) = a, σ(b) = −b: δ(a) − ¼tr = ¼,
        // reached with loop weight ¼ and the half-plane ½ loop factor.
        let mut t = vec![vec![vec![Rat::zero(); 2]; 2]; 2];
        t[0][1][1] = rat(1);
        t[1][0][1] = rat(-1);
        let alg = LieAlgebra::new(vec!["a".into(), "b".into()], t).unwrap();
        let sigma = RatMat::from_rows(vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]]);
        let pair = SymmetricPair::new(alg, sigma).unwrap();
        let scheme = pair_scheme(&pair, 2, vec![Rat::zero()]);

        let second = SecondType::Marked { m: 2, mark: 1 };
        let g = AdmissibleGraph::new(
            1,
            second,
            vec![(Vertex::Aerial(0), Vertex::Boundary(0))],
            vec![],
            BTreeSet::from([0]),
        )
        .unwrap();
        // input: the 𝔨-basis function a (adapted index 1), module element 1
        let k_fn = PolyElement::variable(2, 1);
        let one = PolyElement::one(2);
        let coloring = EdgeColoring {
            edge_colors: vec![1],
        };
        let op =
            operator_of_graph(&pair.adapted, &scheme, &g, &coloring, &[k_fn, one]).unwrap();
        // unit weight: (tr_𝔭 − tr_𝔨)(ad a) = 1; with the loop weight ¼
        // this is δ(a) − ¼tr_𝔤(ad a) = ¼
        let weighted = op.scale(&ratio(1, 4));
        assert_eq!(weighted, PolyElement::constant(2, ratio(1, 4)));
    }

    #[test]
    fn operator_order_one_bracket() {
        // single aerial vertex with edges to two linear inputs gives the
        // Poisson bracket; with weight ½ this is the first star-product term
        let pair = sl2_cartan();
        let alg = &pair.adapted;
        let whole: Vec<usize> = (0..3).collect();
        let scheme = ColorScheme::from_partition(
            alg,
            vec![whole],
            vec![vec![true], vec![true]],
            0,
            vec![1],
            vec![PartRestriction::Variable],
        )
        .unwrap();
        let second = SecondType::Marked { m: 2, mark: 1 };
        let g = AdmissibleGraph::new(
            1,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Boundary(1)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        let coloring = EdgeColoring {
            edge_colors: vec![0, 0],
        };
        let mut rng = crate::numeric::Rng::seeded(4);
        for _ in 0..5 {
            let xv: Vec<Rat> = (0..3).map(|_| rat((rng.next_u64() % 7) as i64 - 3)).collect();
            let yv: Vec<Rat> = (0..3).map(|_| rat((rng.next_u64() % 7) as i64 - 3)).collect();
            let x = {
                let mut p = PolyElement::zero(3);
                for (i, c) in xv.iter().enumerate() {
                    let mut e = vec![0u32; 3];
                    e[i] = 1;
                    p.add_term(e, c.clone());
                }
                p
            };
            let y = {
                let mut p = PolyElement::zero(3);
                for (i, c) in yv.iter().enumerate() {
                    let mut e = vec![0u32; 3];
                    e[i] = 1;
                    p.add_term(e, c.clone());
                }
                p
            };
            let op = operator_of_graph(alg, &scheme, &g, &coloring, &[x, y]).unwrap();
            // expected: the linear function [x, y]
            let br = alg.bracket(&xv, &yv);
            let mut expect = PolyElement::zero(3);
            for (i, c) in br.iter().enumerate() {
                let mut e = vec![0u32; 3];
                e[i] = 1;
                expect.add_term(e, c.clone());
            }
            assert_eq!(op, expect);
        }
    }

    #[test]
    fn canonical_dedup_and_automorphisms() {
        let second = SecondType::Quadrant { k: 1, l: 0 };
        // the 2-wheel with both rays: swapping the vertices is an automorphism
        let wheel2 = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
                (Vertex::Aerial(1), Vertex::Aerial(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(wheel2.automorphism_count(), 2);
        // relabeled copy has the same canonical form
        let relabeled = AdmissibleGraph::new(
            2,
            second,
            vec![
                (Vertex::Aerial(1), Vertex::Aerial(0)),
                (Vertex::Aerial(1), Vertex::Boundary(0)),
                (Vertex::Aerial(0), Vertex::Aerial(1)),
                (Vertex::Aerial(0), Vertex::Boundary(0)),
            ],
            vec![],
            BTreeSet::new(),
        )
        .unwrap();
        assert_eq!(wheel2.canonical_form(), relabeled.canonical_form());
    }
}
