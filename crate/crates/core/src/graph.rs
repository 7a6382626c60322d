//! Bit-packed undirected graphs, reproducible random streams, and the
//! samplers for Erdős–Rényi, torus geometric, one-dimensional complement and
//! hypercube algebraic graphs.

use std::fmt::Write as _;
use std::io::{Read, Write};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{circ_dist, ModelParams, QSpec, CIRCUMFERENCE};

/// Largest vertex count accepted by any constructor.
pub const MAX_VERTICES: usize = 1 << 20;

const MAGIC: &[u8; 4] = b"RGGB";
const FORMAT_VERSION: u16 = 1;

/// Simple undirected graph on vertices `0..n` with one bit-packed row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("graph must have at least one vertex");
        }
        if n > MAX_VERTICES {
            return invalid(format!("n = {n} exceeds the limit {MAX_VERTICES}"));
        }
        let words = n.div_ceil(64);
        Ok(Graph {
            n,
            words,
            rows: vec![0; n * words],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j);
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u}, {v}) out of range for n = {n}"));
            }
            if u == v {
                return invalid(format!("self-loop at vertex {u}"));
            }
            g.set_edge(u, v);
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of 64-bit words per adjacency row.
    #[inline]
    pub fn words_per_row(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    /// Adds edge `{i, j}`; panics on a self-loop.
    pub fn set_edge(&mut self, i: usize, j: usize) {
        assert_ne!(i, j, "self-loops are not allowed");
        self.rows[i * self.words + j / 64] |= 1 << (j % 64);
        self.rows[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.rows[i * self.words + j / 64] &= !(1 << (j % 64));
        self.rows[j * self.words + i / 64] &= !(1 << (i % 64));
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    /// `|N(i) ∩ N(j)|`.
    pub fn codegree(&self, i: usize, j: usize) -> usize {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        self.edge_count() as f64 / (self.n * (self.n - 1) / 2) as f64
    }

    /// Neighbors of `i` in increasing order.
    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(i).iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            out.extend(self.neighbors(i).filter(|&j| j > i).map(|j| (i, j)));
        }
        out
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n).expect("n already validated");
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if !self.has_edge(i, j) {
                    g.set_edge(i, j);
                }
            }
        }
        g
    }

    /// Symmetry, empty diagonal and zeroed padding bits.
    pub fn check_invariants(&self) -> Result<()> {
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return Err(Error::Consistency(format!("self-loop at {i}")));
            }
            let row = self.row(i);
            let tail = self.n % 64;
            if tail != 0 && row[self.words - 1] >> tail != 0 {
                return Err(Error::Consistency(format!("padding bits set in row {i}")));
            }
            for j in self.neighbors(i) {
                if !self.has_edge(j, i) {
                    return Err(Error::Consistency(format!("asymmetric pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    /// Binary form: `RGGB`, u16 version, u64 n (little endian), then the
    /// strict upper triangle row by row, packed LSB-first.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.n as u64).to_le_bytes())?;
        let mut byte = 0u8;
        let mut filled = 0;
        let mut buf = Vec::with_capacity(self.n * self.n / 16 + 1);
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if self.has_edge(i, j) {
                    byte |= 1 << filled;
                }
                filled += 1;
                if filled == 8 {
                    buf.push(byte);
                    byte = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            buf.push(byte);
        }
        w.write_all(&buf)?;
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Parse("bad magic in graph file".into()));
        }
        let mut ver = [0u8; 2];
        r.read_exact(&mut ver)?;
        if u16::from_le_bytes(ver) != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported graph format version {}",
                u16::from_le_bytes(ver)
            )));
        }
        let mut nb = [0u8; 8];
        r.read_exact(&mut nb)?;
        let n = u64::from_le_bytes(nb);
        if n == 0 || n > MAX_VERTICES as u64 {
            return Err(Error::Parse(format!("vertex count {n} out of range")));
        }
        let n = n as usize;
        let pairs = n * (n - 1) / 2;
        let mut bytes = vec![0u8; pairs.div_ceil(8)];
        r.read_exact(&mut bytes)?;
        let mut g = Graph::empty(n)?;
        let mut k = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                if bytes[k / 8] >> (k % 8) & 1 == 1 {
                    g.set_edge(i, j);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    /// Text form: a `# n <count>` header followed by one `i j` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "# n {}", self.n);
        for (i, j) in self.edges() {
            let _ = writeln!(s, "{i} {j}");
        }
        s
    }

    /// Parses the edge-list form. Without a header, `n` is one more than the
    /// largest index seen.
    pub fn from_edge_list(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut parts = rest.split_whitespace();
                if parts.next() == Some("n") {
                    let v = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::Parse(format!("line {}: bad header", lineno + 1)))?;
                    n = Some(v);
                }
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<usize> {
                parts
                    .next()
                    .and_then(|t| t.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("line {}: expected 'i j'", lineno + 1)))
            };
            let (u, v) = (next()?, next()?);
            edges.push((u, v));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1));
        Graph::from_edges(n, &edges)
    }
}

/// Seed plus stream index selecting an independent ChaCha8 keystream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSpec {
    pub master_seed: u64,
    pub stream_index: u64,
}

#[inline]
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

impl RngSpec {
    pub fn new(master_seed: u64) -> Self {
        RngSpec {
            master_seed,
            stream_index: 0,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.master_seed);
        r.set_stream(self.stream_index);
        r
    }

    /// Substream for replicate `r`, a function of `(master_seed, stream_index, r)` only.
    pub fn replicate(&self, r: u64) -> RngSpec {
        RngSpec {
            master_seed: self.master_seed,
            stream_index: splitmix64(splitmix64(self.stream_index) ^ r.wrapping_mul(0xD1B5_4A32_D192_ED03)),
        }
    }
}

/// The latent vectors behind a sampled graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum LatentSample {
    /// Row-major `n * d` coordinates, each in `[0, 2)`.
    Torus { d: usize, coords: Vec<f64> },
    /// Elements of `{±1}^d` as bit masks; bit `i` set means coordinate `i` is `-1`.
    Hypercube { d: usize, masks: Vec<u64> },
}

impl LatentSample {
    pub fn dim(&self) -> usize {
        match self {
            LatentSample::Torus { d, .. } | LatentSample::Hypercube { d, .. } => *d,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LatentSample::Torus { d, coords } => coords.len() / d,
            LatentSample::Hypercube { masks, .. } => masks.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coordinates of torus vertex `i`; `None` for hypercube latents.
    pub fn torus_point(&self, i: usize) -> Option<&[f64]> {
        match self {
            LatentSample::Torus { d, coords } => Some(&coords[i * d..(i + 1) * d]),
            LatentSample::Hypercube { .. } => None,
        }
    }
}

#[inline]
pub(crate) fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_probability(p: f64, name: &str) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return invalid(format!("{name} must lie in [0, 1], got {p}"));
    }
    Ok(())
}

/// Erdős–Rényi graph: each pair independently present with probability `p`.
pub fn sample_er<R: RngCore + ?Sized>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    check_probability(p, "p")?;
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            if unit_f64(rng) < p {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}

pub(crate) fn uniform_torus<R: RngCore + ?Sized>(n: usize, d: usize, rng: &mut R) -> Vec<f64> {
    (0..n * d).map(|_| 2.0 * unit_f64(rng)).collect()
}

/// Adjacency of fixed torus latents under `params` (edge iff distance at most `tau`).
pub fn rgg_from_latents(params: &ModelParams, coords: &[f64]) -> Result<Graph> {
    let (n, d) = (params.n, params.d);
    if coords.len() != n * d {
        return Err(Error::DimensionMismatch {
            left: coords.len(),
            right: n * d,
        });
    }
    if params.q.is_infinite()
        && d >= 8
        && params.lambda < 0.25
        && coords.iter().all(|c| (0.0..CIRCUMFERENCE).contains(c))
    {
        return linfty_from_far_arcs(n, d, params.tau, coords);
    }
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        let xi = &coords[i * d..(i + 1) * d];
        for j in (i + 1)..n {
            let xj = &coords[j * d..(j + 1) * d];
            if within(xi, xj, params.q, params.tau) {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// The `q = inf` graph through its sparse complement: in each coordinate the
/// vertices farther than `tau` from `x` lie on one arc around `x + 1`, found
/// by binary search in sorted order. Candidates are confirmed with the
/// pairwise `circ_dist` comparison.
fn linfty_from_far_arcs(n: usize, d: usize, tau: f64, coords: &[f64]) -> Result<Graph> {
    const MARGIN: f64 = 1e-12;
    let mut g = Graph::empty(n)?;
    let words = g.words;
    let mut far = vec![0u64; n * words];
    let mut order: Vec<(f64, usize)> = Vec::with_capacity(n);
    for k in 0..d {
        order.clear();
        order.extend((0..n).map(|i| (coords[i * d + k], i)));
        order.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        for &(x, i) in &order {
            let (lo, hi) = (x + tau - MARGIN, x + CIRCUMFERENCE - tau + MARGIN);
            for shift in [0.0, CIRCUMFERENCE] {
                let a = order.partition_point(|o| o.0 < lo - shift);
                let b = order.partition_point(|o| o.0 <= hi - shift);
                for &(y, j) in &order[a..b.max(a)] {
                    if circ_dist(x, y) > tau {
                        far[i * words + j / 64] |= 1 << (j % 64);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for w in 0..words {
            g.rows[i * words + w] = !far[i * words + w];
        }
        g.rows[i * words + i / 64] &= !(1 << (i % 64));
        if !n.is_multiple_of(64) {
            g.rows[i * words + words - 1] &= (1u64 << (n % 64)) - 1;
        }
    }
    Ok(g)
}

#[inline]
pub(crate) fn within(x: &[f64], y: &[f64], q: QSpec, tau: f64) -> bool {
    match q {
        QSpec::Infinity => x.iter().zip(y).all(|(&a, &b)| circ_dist(a, b) <= tau),
        QSpec::Finite(q) => {
            let budget = tau.powf(q);
            let mut acc = 0.0;
            for (&a, &b) in x.iter().zip(y) {
                acc += circ_dist(a, b).powf(q);
                if acc > budget {
                    return false;
                }
            }
            true
        }
    }
}

/// Torus random geometric graph with i.i.d. uniform latents.
pub fn sample_rgg<R: RngCore + ?Sized>(
    params: &ModelParams,
    rng: &mut R,
) -> Result<(Graph, LatentSample)> {
    let coords = uniform_torus(params.n, params.d, rng);
    let g = rgg_from_latents(params, &coords)?;
    Ok((
        g,
        LatentSample::Torus {
            d: params.d,
            coords,
        },
    ))
}

/// One-dimensional graph joining near-antipodal latents: edge iff `|x - y|_C >= 1 - lambda`.
pub fn sample_rgg_1d_complement<R: RngCore + ?Sized>(
    n: usize,
    lambda: f64,
    rng: &mut R,
) -> Result<(Graph, LatentSample)> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return invalid(format!("lambda must lie in (0, 1), got {lambda}"));
    }
    let coords = uniform_torus(n, 1, rng);
    let g = complement_1d_from_latents(&coords, lambda)?;
    Ok((g, LatentSample::Torus { d: 1, coords }))
}

pub fn complement_1d_from_latents(coords: &[f64], lambda: f64) -> Result<Graph> {
    let mut g = Graph::empty(coords.len())?;
    let cut = 1.0 - lambda;
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            if circ_dist(coords[i], coords[j]) >= cut {
                g.set_edge(i, j);
            }
        }
    }
    Ok(g)
}

/// Largest dimension accepted for tabulated connection functions.
pub const MAX_TABLE_DIM: usize = 24;

/// Connection function `sigma: {±1}^d -> [0, 1]` evaluated on bit masks
/// (bit `i` set means `g_i = -1`, so group subtraction is XOR).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum SigmaSpec {
    /// `1[sum g_i >= tau]`.
    Threshold { tau: f64 },
    /// `1[g_1 = +1]`.
    Dictator,
    Constant(f64),
    /// Value for every mask in `0..2^d`.
    Table(Vec<f64>),
}

impl SigmaSpec {
    pub fn validate(&self, d: usize) -> Result<()> {
        if d == 0 || d > 64 {
            return Err(Error::UnsupportedGeometry(format!(
                "hypercube dimension must lie in 1..=64, got {d}"
            )));
        }
        match self {
            SigmaSpec::Constant(c) => check_probability(*c, "constant sigma"),
            SigmaSpec::Table(t) => {
                if d > MAX_TABLE_DIM {
                    return Err(Error::UnsupportedGeometry(format!(
                        "tabulated sigma limited to d <= {MAX_TABLE_DIM}, got {d}"
                    )));
                }
                if t.len() != 1 << d {
                    return Err(Error::DimensionMismatch {
                        left: t.len(),
                        right: 1 << d,
                    });
                }
                t.iter().try_for_each(|&v| check_probability(v, "sigma table entry"))
            }
            SigmaSpec::Threshold { tau } if tau.is_nan() => invalid("threshold must not be NaN"),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn eval(&self, d: usize, mask: u64) -> f64 {
        match self {
            SigmaSpec::Threshold { tau } => {
                let sum = d as f64 - 2.0 * mask.count_ones() as f64;
                if sum >= *tau {
                    1.0
                } else {
                    0.0
                }
            }
            SigmaSpec::Dictator => (mask & 1 == 0) as u8 as f64,
            SigmaSpec::Constant(c) => *c,
            SigmaSpec::Table(t) => t[mask as usize],
        }
    }

    /// `E[sigma(g)]` for uniform `g`, which is the marginal edge density.
    pub fn density(&self, d: usize) -> f64 {
        match self {
            SigmaSpec::Threshold { tau } => {
                // sum g_i = d - 2k with k ~ Bin(d, 1/2)
                let scale = 0.5f64.powi(d as i32);
                (0..=d)
                    .filter(|&k| d as f64 - 2.0 * k as f64 >= *tau)
                    .map(|k| crate::numeric::binomial(d as u64, k as u64) * scale)
                    .sum()
            }
            SigmaSpec::Dictator => 0.5,
            SigmaSpec::Constant(c) => *c,
            SigmaSpec::Table(t) => t.iter().sum::<f64>() / t.len() as f64,
        }
    }
}

/// Random algebraic graph over `{±1}^d`: edge `{i, j}` with probability `sigma(x_i x_j)`.
pub fn sample_hypercube_rag<R: RngCore + ?Sized>(
    n: usize,
    d: usize,
    sigma: &SigmaSpec,
    rng: &mut R,
) -> Result<(Graph, LatentSample)> {
    sigma.validate(d)?;
    let keep = if d == 64 { u64::MAX } else { (1u64 << d) - 1 };
    let masks: Vec<u64> = (0..n).map(|_| rng.next_u64() & keep).collect();
    let mut g = Graph::empty(n)?;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = sigma.eval(d, masks[i] ^ masks[j]);
            let present = if s >= 1.0 {
                true
            } else if s <= 0.0 {
                false
            } else {
                rng.gen::<f64>() < s
            };
            if present {
                g.set_edge(i, j);
            }
        }
    }
    Ok((g, LatentSample::Hypercube { d, masks }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_arc_path_matches_pairwise() {
        let mut rng = RngSpec::new(4).rng();
        for (n, d, p) in [(1, 8, 0.5), (63, 8, 0.5), (64, 40, 0.3), (130, 200, 0.5), (97, 12, 0.9)] {
            let m = ModelParams::linfty(n, d, p).unwrap();
            let coords = uniform_torus(n, d, &mut rng);
            let fast = rgg_from_latents(&m, &coords).unwrap();
            fast.check_invariants().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let want = i != j && within(&coords[i * d..(i + 1) * d], &coords[j * d..(j + 1) * d], m.q, m.tau);
                    assert_eq!(fast.has_edge(i, j), want, "n={n} d={d} ({i}, {j})");
                }
            }
        }
    }

    #[test]
    fn er_extremes() {
        let mut rng = RngSpec::new(1).rng();
        assert_eq!(sample_er(5, 0.0, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(sample_er(5, 1.0, &mut rng).unwrap().edge_count(), 10);
        assert!(sample_er(5, 1.5, &mut rng).is_err());
    }

    #[test]
    fn er_density_half() {
        let mut rng = RngSpec::new(2).rng();
        let g = sample_er(1000, 0.5, &mut rng).unwrap();
        let pairs: f64 = 1000.0 * 999.0 / 2.0;
        let se = (0.25 / pairs).sqrt();
        assert!((g.density() - 0.5).abs() < 4.0 * se);
        g.check_invariants().unwrap();
    }

    #[test]
    fn one_dim_examples() {
        let p = ModelParams::linfty(2, 1, 0.5).unwrap();
        let g = rgg_from_latents(&p, &[0.0, 0.3]).unwrap();
        assert!(g.has_edge(0, 1));
        let g = complement_1d_from_latents(&[0.0, 1.0], 0.1).unwrap();
        assert!(g.has_edge(0, 1));
        let g = complement_1d_from_latents(&[0.0, 0.5], 0.1).unwrap();
        assert!(!g.has_edge(0, 1));
    }

    #[test]
    fn binary_and_text_round_trip() {
        let mut rng = RngSpec::new(3).rng();
        for n in [1, 2, 7, 64, 65, 130] {
            let g = sample_er(n, 0.3, &mut rng).unwrap();
            let mut buf = Vec::new();
            g.write_binary(&mut buf).unwrap();
            assert_eq!(Graph::read_binary(&buf[..]).unwrap(), g);
            assert_eq!(Graph::from_edge_list(&g.to_edge_list()).unwrap(), g);
        }
        assert!(Graph::read_binary(&b"XXXX"[..]).is_err());
    }

    #[test]
    fn neighbors_and_codegree() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.neighbors(2).collect::<Vec<_>>(), vec![0, 1, 3]);
        assert_eq!(g.codegree(0, 1), 1);
        assert_eq!(g.degree(4), 0);
        assert_eq!(g.complement().edge_count(), 6);
    }

    #[test]
    fn hypercube_constant_and_threshold_density() {
        let mut rng = RngSpec::new(4).rng();
        let (g, _) = sample_hypercube_rag(20, 5, &SigmaSpec::Constant(1.0), &mut rng).unwrap();
        assert_eq!(g.edge_count(), 190);
        assert_eq!(SigmaSpec::Threshold { tau: 1.0 }.density(7), 0.5);
        assert!(sample_hypercube_rag(4, 25, &SigmaSpec::Table(vec![]), &mut rng).is_err());
    }

    #[test]
    fn replicate_streams_differ_and_repeat() {
        let spec = RngSpec::new(9);
        let a: u64 = spec.replicate(0).rng().next_u64();
        let b: u64 = spec.replicate(1).rng().next_u64();
        assert_ne!(a, b);
        assert_eq!(a, spec.replicate(0).rng().next_u64());
    }
}
