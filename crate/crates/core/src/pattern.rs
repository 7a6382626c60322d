//! Small edge-defined subgraph templates and their structural facts:
//! components, 2-connected blocks, girth, cycle counts, canonical forms and
//! automorphism counts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest edge count for which structural facts are computed.
pub const MAX_FACT_EDGES: usize = 24;
/// Largest vertex count supported by [`EdgePattern::canonical`].
pub const MAX_CANON_VERTICES: usize = 16;

/// A labeled simple graph defined by its edge list; every vertex lies on an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgePattern {
    labels: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl EdgePattern {
    /// Builds a pattern from labeled edges; vertex indices follow sorted label order.
    pub fn from_labeled_edges(edges: &[(u32, u32)]) -> Result<Self> {
        let mut labels: Vec<u32> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        labels.sort_unstable();
        labels.dedup();
        let index: HashMap<u32, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut out = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return invalid(format!("self-loop at vertex {a}"));
            }
            let (u, v) = (index[&a], index[&b]);
            let e = (u.min(v), u.max(v));
            if out.contains(&e) {
                return invalid(format!("duplicate edge ({a}, {b})"));
            }
            out.push(e);
        }
        Ok(EdgePattern { labels, edges: out })
    }

    /// Pattern on vertices `0..` given by index pairs.
    pub fn from_edges(edges: &[(usize, usize)]) -> Result<Self> {
        let labeled: Vec<(u32, u32)> = edges.iter().map(|&(a, b)| (a as u32, b as u32)).collect();
        Self::from_labeled_edges(&labeled)
    }

    pub fn empty() -> Self {
        EdgePattern {
            labels: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn cycle(m: usize) -> Result<Self> {
        if m < 3 {
            return invalid(format!("cycle length must be >= 3, got {m}"));
        }
        Self::from_edges(&(0..m).map(|i| (i, (i + 1) % m)).collect::<Vec<_>>())
    }

    pub fn path(edges: usize) -> Result<Self> {
        Self::from_edges(&(0..edges).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    pub fn complete(k: usize) -> Result<Self> {
        let mut e = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                e.push((i, j));
            }
        }
        Self::from_edges(&e)
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut e = Vec::new();
        for i in 0..a {
            for j in 0..b {
                e.push((i, a + j));
            }
        }
        Self::from_edges(&e)
    }

    /// Named patterns: `C<m>`, `K<k>`, `K<a><b>`, `P<k>` (path with k edges),
    /// `edge`, `bowtie` (two triangles sharing a vertex) and `theta`
    /// (two vertices joined by paths of lengths 1, 3 and 3).
    pub fn builtin(name: &str) -> Result<Self> {
        let lower = name.trim().to_ascii_lowercase();
        match lower.as_str() {
            "edge" => return Self::from_edges(&[(0, 1)]),
            "bowtie" => return Self::from_edges(&[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)]),
            "theta" => {
                return Self::from_edges(&[(0, 1), (0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1)])
            }
            _ => {}
        }
        let digits = |s: &str| -> Option<usize> { s.parse().ok() };
        if let Some(rest) = lower.strip_prefix('c') {
            if let Some(m) = digits(rest) {
                return Self::cycle(m);
            }
        }
        if let Some(rest) = lower.strip_prefix('p') {
            if let Some(k) = digits(rest) {
                return Self::path(k);
            }
        }
        if let Some(rest) = lower.strip_prefix('k') {
            if rest.len() == 2 && rest.chars().all(|c| c.is_ascii_digit()) {
                let a = rest[..1].parse().unwrap();
                let b = rest[1..].parse().unwrap();
                return Self::complete_bipartite(a, b);
            }
            if let Some(k) = digits(rest) {
                return Self::complete(k);
            }
        }
        Err(Error::Parse(format!("unknown pattern name '{name}'")))
    }

    /// Parses `u v` lines (labels are nonnegative integers; `#` starts a comment).
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let nums: Vec<u32> = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: expected 'u v'", lineno + 1)))?;
            if nums.len() != 2 {
                return Err(Error::Parse(format!("line {}: expected 'u v'", lineno + 1)));
            }
            edges.push((nums[0], nums[1]));
        }
        Self::from_labeled_edges(&edges)
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn labeled_edges(&self) -> Vec<(u32, u32)> {
        self.edges
            .iter()
            .map(|&(u, v)| (self.labels[u], self.labels[v]))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Adjacency rows as bit masks; requires at most 64 vertices.
    pub fn adjacency_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.vertex_count()];
        for &(u, v) in &self.edges {
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        adj
    }

    /// The pattern formed by the edges whose bits are set in `mask`.
    pub fn sub_pattern(&self, mask: u64) -> EdgePattern {
        let edges: Vec<(u32, u32)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &(u, v))| (self.labels[u], self.labels[v]))
            .collect();
        Self::from_labeled_edges(&edges).expect("subset of a valid pattern")
    }

    /// Edge union, matching vertices by label.
    pub fn union(&self, other: &EdgePattern) -> EdgePattern {
        let mut edges = self.labeled_edges();
        for e in other.labeled_edges() {
            let r = (e.1, e.0);
            if !edges.contains(&e) && !edges.contains(&r) {
                edges.push(e);
            }
        }
        Self::from_labeled_edges(&edges).expect("union of valid patterns")
    }

    /// True when every edge of `self` is an edge of `other` (by label).
    pub fn is_subgraph_of(&self, other: &EdgePattern) -> bool {
        let theirs = other.labeled_edges();
        self.labeled_edges()
            .iter()
            .all(|&(a, b)| theirs.contains(&(a, b)) || theirs.contains(&(b, a)))
    }

    /// Number of connected components (0 for the empty pattern).
    pub fn component_count(&self) -> usize {
        components(self).1
    }

    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.vertex_count()
    }

    pub fn is_bipartite(&self) -> bool {
        two_coloring(self).is_some()
    }

    /// Canonical form under vertex relabeling plus the automorphism count.
    pub fn canonical(&self) -> Result<Canonical> {
        canonical_form(self)
    }

    pub fn automorphism_count(&self) -> Result<u64> {
        Ok(self.canonical()?.automorphisms)
    }
}

impl fmt::Display for EdgePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .labeled_edges()
            .iter()
            .map(|(a, b)| format!("{a}-{b}"))
            .collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl FromStr for EdgePattern {
    type Err = Error;

    /// A builtin name, or edges written `a-b` separated by spaces or commas.
    fn from_str(s: &str) -> Result<Self> {
        if let Ok(p) = Self::builtin(s) {
            return Ok(p);
        }
        let mut edges = Vec::new();
        for tok in s
            .trim_matches(|c| c == '[' || c == ']')
            .split(|c: char| c.is_whitespace() || c == ',' || c == ';')
            .filter(|t| !t.is_empty())
        {
            let (a, b) = tok
                .split_once('-')
                .ok_or_else(|| Error::Parse(format!("bad edge token '{tok}'")))?;
            let a = a.parse().map_err(|_| Error::Parse(format!("bad vertex '{a}'")))?;
            let b = b.parse().map_err(|_| Error::Parse(format!("bad vertex '{b}'")))?;
            edges.push((a, b));
        }
        if edges.is_empty() {
            return Err(Error::Parse(format!("unknown pattern '{s}'")));
        }
        Self::from_labeled_edges(&edges)
    }
}

/// Component id per vertex and the component count.
fn components(p: &EdgePattern) -> (Vec<usize>, usize) {
    let adj = p.adjacency_lists();
    let mut comp = vec![usize::MAX; p.vertex_count()];
    let mut count = 0;
    for s in 0..p.vertex_count() {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if comp[v] == usize::MAX {
                    comp[v] = count;
                    stack.push(v);
                }
            }
        }
        count += 1;
    }
    (comp, count)
}

/// Side (0 or 1) of each vertex in a proper 2-coloring, if one exists.
pub(crate) fn two_coloring(p: &EdgePattern) -> Option<Vec<u8>> {
    let adj = p.adjacency_lists();
    let mut side = vec![u8::MAX; p.vertex_count()];
    for s in 0..p.vertex_count() {
        if side[s] != u8::MAX {
            continue;
        }
        side[s] = 0;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if side[v] == u8::MAX {
                    side[v] = 1 - side[u];
                    stack.push(v);
                } else if side[v] == side[u] {
                    return None;
                }
            }
        }
    }
    Some(side)
}

/// A 2-connected block (or a bridge) of a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    /// Vertex indices of the parent pattern, sorted.
    pub vertices: Vec<usize>,
    /// Edge indices of the parent pattern, sorted.
    pub edges: Vec<usize>,
}

impl Block {
    pub fn to_pattern(&self, parent: &EdgePattern) -> EdgePattern {
        let mask = self.edges.iter().fold(0u64, |m, &e| m | 1 << e);
        parent.sub_pattern(mask)
    }
}

/// Maximal 2-connected blocks by the edge-stack variant of Tarjan's algorithm.
pub fn blocks(p: &EdgePattern) -> Vec<Block> {
    let nv = p.vertex_count();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nv];
    for (i, &(u, v)) in p.edges().iter().enumerate() {
        adj[u].push((v, i));
        adj[v].push((u, i));
    }
    let mut disc = vec![usize::MAX; nv];
    let mut low = vec![0; nv];
    let mut timer = 0;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();

    for root in 0..nv {
        if disc[root] != usize::MAX {
            continue;
        }
        // frames: (vertex, parent edge, next adjacency position)
        let mut frames: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (u, pe, ref mut pos)) = frames.last_mut() {
            if *pos < adj[u].len() {
                let (v, e) = adj[u][*pos];
                *pos += 1;
                if e == pe {
                    continue;
                }
                if disc[v] == usize::MAX {
                    edge_stack.push(e);
                    disc[v] = timer;
                    low[v] = timer;
                    timer += 1;
                    frames.push((v, e, 0));
                } else if disc[v] < disc[u] {
                    edge_stack.push(e);
                    low[u] = low[u].min(disc[v]);
                }
            } else {
                frames.pop();
                if let Some(&(parent, _, _)) = frames.last() {
                    low[parent] = low[parent].min(low[u]);
                    if low[u] >= disc[parent] {
                        let mut edges = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            edges.push(e);
                            if e == pe {
                                break;
                            }
                        }
                        let mut vertices: Vec<usize> =
                            edges.iter().flat_map(|&e| [p.edges()[e].0, p.edges()[e].1]).collect();
                        vertices.sort_unstable();
                        vertices.dedup();
                        edges.sort_unstable();
                        out.push(Block { vertices, edges });
                    }
                }
            }
        }
    }
    out
}

/// Structural summary of a pattern.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PatternFacts {
    pub vertices: usize,
    pub edges: usize,
    pub numc: usize,
    pub bipartite: bool,
    pub girth: Option<usize>,
    /// `cycle_counts[u]` is the number of cycles of length `u`, for `u <= cycle_cap`.
    pub cycle_counts: Vec<u64>,
    pub cycle_cap: usize,
    pub blocks: Vec<Block>,
    pub spanning_forest_edges: usize,
}

impl PatternFacts {
    /// `N(u)`; zero beyond the cap.
    pub fn cycles_of_length(&self, u: usize) -> u64 {
        self.cycle_counts.get(u).copied().unwrap_or(0)
    }
}

/// Computes components, bipartiteness, girth, cycle counts up to `|V|` and blocks.
pub fn pattern_facts(p: &EdgePattern) -> Result<PatternFacts> {
    pattern_facts_capped(p, p.vertex_count())
}

pub fn pattern_facts_capped(p: &EdgePattern, cycle_cap: usize) -> Result<PatternFacts> {
    if p.edge_count() > MAX_FACT_EDGES {
        return Err(Error::PatternTooLarge(format!(
            "{} edges exceeds the limit of {MAX_FACT_EDGES}",
            p.edge_count()
        )));
    }
    let numc = p.component_count();
    let cycle_counts = count_cycles(p, cycle_cap);
    let girth = cycle_counts.iter().position(|&c| c > 0);
    Ok(PatternFacts {
        vertices: p.vertex_count(),
        edges: p.edge_count(),
        numc,
        bipartite: p.is_bipartite(),
        girth,
        cycle_counts,
        cycle_cap,
        blocks: blocks(p),
        spanning_forest_edges: p.vertex_count() - numc,
    })
}

/// Simple cycles by length, each rooted at its smallest vertex and counted
/// once per orientation before halving.
fn count_cycles(p: &EdgePattern, cap: usize) -> Vec<u64> {
    let adj = p.adjacency_lists();
    let mut counts = vec![0u64; cap + 1];
    let nv = p.vertex_count();
    let mut on_path = vec![false; nv];

    fn dfs(
        start: usize,
        u: usize,
        len: usize,
        cap: usize,
        adj: &[Vec<usize>],
        on_path: &mut [bool],
        counts: &mut [u64],
    ) {
        for &v in &adj[u] {
            if v == start && len >= 3 {
                counts[len] += 1;
            } else if v > start && !on_path[v] && len < cap {
                on_path[v] = true;
                dfs(start, v, len + 1, cap, adj, on_path, counts);
                on_path[v] = false;
            }
        }
    }

    for s in 0..nv {
        on_path[s] = true;
        dfs(s, s, 1, cap, &adj, &mut on_path, &mut counts);
        on_path[s] = false;
    }
    for c in counts.iter_mut() {
        *c /= 2;
    }
    counts
}

/// `|V(G)| - numc(G) <= |V(G1)| - numc(G1) + |V(G2)| - numc(G2)` with `G = G1 ∪ G2`.
pub fn check_subadditivity(g1: &EdgePattern, g2: &EdgePattern) -> bool {
    let g = g1.union(g2);
    let rank = |p: &EdgePattern| p.vertex_count() as i64 - p.component_count() as i64;
    rank(&g) <= rank(g1) + rank(g2)
}

/// True when the pattern is connected, has at least three vertices and no cut vertex.
pub fn is_two_connected(p: &EdgePattern) -> bool {
    p.vertex_count() >= 3 && p.component_count() == 1 && blocks(p).len() == 1
}

/// For 2-connected `h` and `k ⊆ h`:
/// `|E(H)| - |E(K)| >= numc(K) + |V(H)| - |V(K)| - 1`.
pub fn check_two_connected_inequality(h: &EdgePattern, k: &EdgePattern) -> Result<bool> {
    if !is_two_connected(h) {
        return Err(Error::Precondition(format!("{h} is not 2-connected")));
    }
    if !k.is_subgraph_of(h) {
        return Err(Error::Precondition(format!("{k} is not a subgraph of {h}")));
    }
    let lhs = h.edge_count() as i64 - k.edge_count() as i64;
    let rhs = k.component_count() as i64 + h.vertex_count() as i64 - k.vertex_count() as i64 - 1;
    Ok(lhs >= rhs)
}

/// Isomorphism-invariant encoding of a pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonKey {
    pub vertices: u8,
    /// Upper triangle of the relabeled adjacency matrix, row-major.
    pub code: u128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: CanonKey,
    /// `order[r]` is the original vertex placed at canonical position `r`.
    pub order: Vec<usize>,
    pub automorphisms: u64,
}

impl CanonKey {
    /// Rebuilds a pattern on vertices `0..vertices` from the key.
    pub fn to_pattern(&self) -> EdgePattern {
        let n = self.vertices as usize;
        let mut edges = Vec::new();
        let mut bit = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                if self.code >> bit & 1 == 1 {
                    edges.push((i, j));
                }
                bit += 1;
            }
        }
        EdgePattern::from_edges(&edges).expect("canonical code encodes a simple graph")
    }
}

fn encode(adj: &[u64], order: &[usize]) -> u128 {
    let n = order.len();
    let mut code = 0u128;
    let mut bit = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if adj[order[i]] >> order[j] & 1 == 1 {
                code |= 1 << bit;
            }
            bit += 1;
        }
    }
    code
}

/// Equitable refinement: recolor by (color, sorted neighbor colors) until stable.
fn refine(adj: &[u64], colors: &mut Vec<usize>) {
    let n = colors.len();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&w| adj[v] >> w & 1 == 1).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let rank: BTreeMap<&(usize, Vec<usize>), usize> =
            distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
        let before = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
        let after = distinct.len();
        *colors = next;
        if after == before {
            return;
        }
    }
}

fn canonical_form(p: &EdgePattern) -> Result<Canonical> {
    let n = p.vertex_count();
    if n > MAX_CANON_VERTICES {
        return Err(Error::PatternTooLarge(format!(
            "canonical form limited to {MAX_CANON_VERTICES} vertices, got {n}"
        )));
    }
    let adj = p.adjacency_masks();
    let mut colors = vec![0; n];
    refine(&adj, &mut colors);
    let mut best: Option<(u128, Vec<usize>)> = None;
    let mut ties = 0u64;
    search(&adj, colors, &mut best, &mut ties);
    let (code, order) = best.unwrap_or((0, Vec::new()));
    Ok(Canonical {
        key: CanonKey {
            vertices: n as u8,
            code,
        },
        order,
        automorphisms: ties.max(1),
    })
}

/// Individualization-refinement over the full search tree; every leaf whose
/// code equals the minimum corresponds to exactly one automorphism.
fn search(adj: &[u64], colors: Vec<usize>, best: &mut Option<(u128, Vec<usize>)>, ties: &mut u64) {
    let n = colors.len();
    let mut cells: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, &c) in colors.iter().enumerate() {
        cells.entry(c).or_default().push(v);
    }
    if let Some((&target, members)) = cells.iter().find(|(_, m)| m.len() > 1) {
        for &v in members {
            let mut next: Vec<usize> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if c == target && w != v { 2 * c + 1 } else { 2 * c })
                .collect();
            refine(adj, &mut next);
            search(adj, next, best, ties);
        }
        return;
    }
    let mut order = vec![0; n];
    for (v, &c) in colors.iter().enumerate() {
        order[c] = v;
    }
    let code = encode(adj, &order);
    match best {
        Some((b, _)) if code > *b => {}
        Some((b, _)) if code == *b => *ties += 1,
        _ => {
            *best = Some((code, order));
            *ties = 1;
        }
    }
}
