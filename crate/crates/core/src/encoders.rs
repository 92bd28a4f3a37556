//! Function-correcting b-symbol codes: the conflict-graph coloring, the
//! explicit systematic encoders, an exhaustive verifier and an exact search
//! for the optimal redundancy.
//!
//! An encoder maps `u` to `(u, p(u))`. It is an `(f, t)` code on the b-read
//! channel when every pair `u, v` with `f(u) != f(v)` ends up at b-symbol
//! distance at least `2t + 1`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::codes::{Code, SearchStatus};
use crate::error::{Error, Result};
use crate::functions::{self, FunctionTable, WeightDistribution};
use crate::metric::{self, check_width, mask, raw_b_weight, Metric, Word, MAX_WORD_LEN};

/// Node budget for one exact-coloring decision before falling back to the
/// greedy coloring.
pub const DEFAULT_NODE_BUDGET: u64 = 5_000_000;

/// Largest parity length the redundancy search will try.
pub const MAX_SEARCH_REDUNDANCY: usize = 16;

/// Undirected graph on `0..n` with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
}

impl Graph {
    pub fn from_adjacency(mut adj: Vec<Vec<u32>>) -> Self {
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Graph { adj }
    }

    /// Vertices are `F_2^k`; `u ~ v` iff `d_b(u, v) <= radius` and
    /// `f(u) != f(v)`.
    pub fn conflict(f: &FunctionTable, radius: usize, b: usize) -> Result<Self> {
        let k = f.k();
        check_width(b, k)?;
        let patterns = metric::error_patterns(k, radius, Metric::BSymbol(b), metric::DEFAULT_ENUM_CAP)?;
        let adj = (0..f.len() as u64)
            .map(|u| {
                let mut list: Vec<u32> = patterns
                    .iter()
                    .map(|&e| u ^ e)
                    .filter(|&v| f.id_at(u) != f.id_at(v))
                    .map(|v| v as u32)
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Ok(Graph { adj })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    fn components(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.len()];
        let mut out = Vec::new();
        for s in 0..self.len() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s as u32];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                        queue.push_back(w as usize);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    fn induced(&self, verts: &[u32]) -> Graph {
        let local: HashMap<u32, u32> = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        Graph::from_adjacency(
            verts
                .iter()
                .map(|&v| {
                    self.adj[v as usize]
                        .iter()
                        .filter_map(|w| local.get(w).copied())
                        .collect()
                })
                .collect(),
        )
    }

    /// True when no edge joins two vertices of the same color.
    pub fn is_proper(&self, colors: &[u32]) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(u, list)| list.iter().all(|&v| colors[u] != colors[v as usize]))
    }
}

/// DSATUR: repeatedly color the vertex with the most distinct neighbor
/// colors, ties broken by degree and then by smallest index. Colors are
/// 0-based.
pub fn dsatur(g: &Graph) -> Vec<u32> {
    let n = g.len();
    const NONE: u32 = u32::MAX;
    let mut color = vec![NONE; n];
    let mut seen: Vec<Vec<u64>> = vec![Vec::new(); n];
    let mut sat = vec![0usize; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == NONE)
            .max_by(|&a, &b| {
                (sat[a], g.adj[a].len())
                    .cmp(&(sat[b], g.adj[b].len()))
                    .then(b.cmp(&a))
            })
            .expect("uncolored vertex remains");
        let c = first_absent(&seen[v]);
        color[v] = c;
        for &w in &g.adj[v] {
            let w = w as usize;
            if color[w] == NONE && insert_bit(&mut seen[w], c) {
                sat[w] += 1;
            }
        }
    }
    color
}

fn first_absent(set: &[u64]) -> u32 {
    for (i, &word) in set.iter().enumerate() {
        if word != u64::MAX {
            return (i * 64) as u32 + (!word).trailing_zeros();
        }
    }
    (set.len() * 64) as u32
}

fn insert_bit(set: &mut Vec<u64>, c: u32) -> bool {
    let (i, bit) = ((c / 64) as usize, c % 64);
    if set.len() <= i {
        set.resize(i + 1, 0);
    }
    let fresh = set[i] & (1 << bit) == 0;
    set[i] |= 1 << bit;
    fresh
}

fn count_colors(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&c| c as usize + 1)
}

/// Greedy clique through the highest-degree vertex; a lower bound on the
/// chromatic number.
fn greedy_clique(g: &Graph) -> usize {
    let Some(start) = (0..g.len()).max_by_key(|&v| (g.adj[v].len(), std::cmp::Reverse(v))) else {
        return 0;
    };
    let mut cands: Vec<u32> = g.adj[start].clone();
    cands.sort_by_key(|&v| std::cmp::Reverse(g.adj[v as usize].len()));
    let mut clique = vec![start as u32];
    for c in cands {
        if clique.iter().all(|&m| g.has_edge(m as usize, c as usize)) {
            clique.push(c);
        }
    }
    clique.len()
}

enum Decision {
    Colorable(Vec<u32>),
    NotColorable,
    OutOfBudget,
}

struct ColorSearch<'a> {
    g: &'a Graph,
    colors: usize,
    color: Vec<u32>,
    /// `counts[v * colors + c]`: neighbors of `v` currently colored `c`.
    counts: Vec<u32>,
    sat: Vec<usize>,
    nodes: u64,
    budget: u64,
}

const UNCOLORED: u32 = u32::MAX;

impl<'a> ColorSearch<'a> {
    fn decide(g: &'a Graph, colors: usize, budget: u64) -> (Decision, u64) {
        let mut s = ColorSearch {
            g,
            colors,
            color: vec![UNCOLORED; g.len()],
            counts: vec![0; g.len() * colors],
            sat: vec![0; g.len()],
            nodes: 0,
            budget,
        };
        let d = match s.run(0, 0) {
            Some(true) => Decision::Colorable(s.color),
            Some(false) => Decision::NotColorable,
            None => Decision::OutOfBudget,
        };
        (d, s.nodes)
    }

    fn set(&mut self, v: usize, c: u32) {
        self.color[v] = c;
        for &w in &self.g.adj[v] {
            let slot = w as usize * self.colors + c as usize;
            self.counts[slot] += 1;
            if self.counts[slot] == 1 {
                self.sat[w as usize] += 1;
            }
        }
    }

    fn unset(&mut self, v: usize, c: u32) {
        self.color[v] = UNCOLORED;
        for &w in &self.g.adj[v] {
            let slot = w as usize * self.colors + c as usize;
            self.counts[slot] -= 1;
            if self.counts[slot] == 0 {
                self.sat[w as usize] -= 1;
            }
        }
    }

    /// `None` when the budget ran out.
    fn run(&mut self, done: usize, used: usize) -> Option<bool> {
        if done == self.g.len() {
            return Some(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return None;
        }
        let v = (0..self.g.len())
            .filter(|&v| self.color[v] == UNCOLORED)
            .max_by(|&a, &b| {
                (self.sat[a], self.g.adj[a].len())
                    .cmp(&(self.sat[b], self.g.adj[b].len()))
                    .then(b.cmp(&a))
            })
            .expect("uncolored vertex remains");
        // A fresh color is interchangeable with any other fresh color.
        let limit = self.colors.min(used + 1);
        for c in 0..limit {
            if self.counts[v * self.colors + c] != 0 {
                continue;
            }
            self.set(v, c as u32);
            match self.run(done + 1, used.max(c + 1)) {
                Some(false) => {}
                other => return other,
            }
            self.unset(v, c as u32);
        }
        Some(false)
    }
}

/// Minimum coloring of `g` by per-component branch and bound. Returns
/// 0-based colors and whether optimality was proved within `budget` nodes
/// per decision; on budget exhaustion the component keeps its DSATUR colors.
pub fn exact_coloring(g: &Graph, budget: u64) -> (Vec<u32>, bool) {
    let mut colors = vec![0u32; g.len()];
    let mut proved = true;
    for comp in g.components() {
        let sub = g.induced(&comp);
        let greedy = dsatur(&sub);
        let upper = count_colors(&greedy);
        let lower = greedy_clique(&sub).max(1);
        let mut best = greedy;
        for c in lower..upper {
            match ColorSearch::decide(&sub, c, budget).0 {
                Decision::Colorable(found) => {
                    best = found;
                    break;
                }
                Decision::NotColorable => {}
                Decision::OutOfBudget => {
                    proved = false;
                    break;
                }
            }
        }
        for (i, &v) in comp.iter().enumerate() {
            colors[v as usize] = best[i];
        }
    }
    (colors, proved)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Greedy,
    Exact,
}

/// A proper coloring `τ` of the conflict graph: `τ(u) != τ(v)` whenever
/// `d_b(u, v) <= radius` and `f(u) != f(v)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub radius: usize,
    pub b: usize,
    /// Colors in `1..=used`, indexed by the integer value of the word.
    pub colors: Vec<u32>,
    pub used: usize,
    pub strategy: Strategy,
    /// The exact strategy proved `used` is the chromatic number.
    pub optimal: bool,
    /// The exact strategy ran out of budget and returned a greedy result.
    pub timed_out: bool,
    /// Locality of `f` at the same `(radius, b)`, for comparison with `used`.
    pub lambda_s: usize,
}

impl Coloring {
    pub fn color_of(&self, u: &Word) -> u32 {
        self.colors[u.index() as usize]
    }
}

pub fn conflict_coloring(f: &FunctionTable, radius: usize, b: usize, strategy: Strategy) -> Result<Coloring> {
    conflict_coloring_with_budget(f, radius, b, strategy, DEFAULT_NODE_BUDGET)
}

pub fn conflict_coloring_with_budget(
    f: &FunctionTable,
    radius: usize,
    b: usize,
    strategy: Strategy,
    budget: u64,
) -> Result<Coloring> {
    let g = Graph::conflict(f, radius, b)?;
    let lambda_s = functions::lambda_s(f, radius, b)?.lambda_s;
    let (raw, optimal) = match strategy {
        Strategy::Greedy => (dsatur(&g), false),
        Strategy::Exact => exact_coloring(&g, budget),
    };
    debug_assert!(g.is_proper(&raw));
    Ok(Coloring {
        radius,
        b,
        used: count_colors(&raw),
        colors: raw.into_iter().map(|c| c + 1).collect(),
        strategy,
        optimal,
        timed_out: strategy == Strategy::Exact && !optimal,
        lambda_s,
    })
}

/// Greedy first, exact only when greedy needs more than `max_colors`.
fn coloring_within(f: &FunctionTable, radius: usize, b: usize, max_colors: usize) -> Result<Coloring> {
    let greedy = conflict_coloring(f, radius, b, Strategy::Greedy)?;
    if greedy.used <= max_colors {
        return Ok(greedy);
    }
    conflict_coloring(f, radius, b, Strategy::Exact)
}

pub const PROVENANCE_LAMBDA4: &str = "lambda4";
pub const PROVENANCE_GENERIC: &str = "generic";
pub const PROVENANCE_DELTA_PARITY: &str = "delta-parity";
pub const PROVENANCE_SEARCH: &str = "optimal-search";

/// Systematic encoder `Enc(u) = (u, parity(u))` with `parity(u)` of length
/// `r`, targeting `t` correctable b-symbol errors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingScheme {
    k: usize,
    r: usize,
    t: usize,
    b: usize,
    /// Raw parity bits indexed by the integer value of the message.
    parity: Vec<u64>,
    provenance: String,
}

impl EncodingScheme {
    pub fn new(k: usize, r: usize, t: usize, b: usize, parity: Vec<u64>, provenance: impl Into<String>) -> Result<Self> {
        if k == 0 || k > metric::DEFAULT_ENUM_CAP {
            return Err(Error::CapExceeded {
                len: k,
                cap: metric::DEFAULT_ENUM_CAP,
            });
        }
        if k + r > MAX_WORD_LEN {
            return Err(Error::InvalidLength(k + r));
        }
        if t == 0 {
            return Err(Error::InvalidParameter("t must be >= 1".into()));
        }
        check_width(b, k + r)?;
        if parity.len() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                got: parity.len(),
            });
        }
        if let Some(p) = parity.iter().find(|&&p| p & !mask(r as u32) != 0) {
            return Err(Error::InvalidParameter(format!("parity {p} wider than r={r}")));
        }
        Ok(EncodingScheme {
            k,
            r,
            t,
            b,
            parity,
            provenance: provenance.into(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn raw_parity(&self) -> &[u64] {
        &self.parity
    }

    /// Parity of the message with integer value `index` as a bitstring
    /// (empty when `r = 0`).
    pub fn parity_string(&self, index: u64) -> String {
        let p = self.parity[index as usize];
        (0..self.r).map(|i| if (p >> i) & 1 == 1 { '1' } else { '0' }).collect()
    }

    #[inline]
    fn raw_codeword(&self, index: u64) -> u64 {
        index | (self.parity[index as usize] << self.k)
    }

    pub fn encode(&self, u: &Word) -> Result<Word> {
        if u.len() != self.k {
            return Err(Error::LengthMismatch {
                left: u.len(),
                right: self.k,
            });
        }
        Word::new(self.raw_codeword(u.index()), self.k + self.r)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub u: Word,
    pub v: Word,
    pub distance: usize,
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    /// Pairs with differing function values examined, including the
    /// violating pair if any.
    pub pairs_checked: u64,
    pub witness: Option<Violation>,
}

/// Checks every unordered pair `u < v` with `f(u) != f(v)` and stops at the
/// first one encoded closer than `2t + 1`.
pub fn verify_fcbsc(scheme: &EncodingScheme, f: &FunctionTable) -> Result<Verdict> {
    if scheme.k != f.k() {
        return Err(Error::DimensionMismatch {
            expected: scheme.k,
            got: f.k(),
        });
    }
    let n = (scheme.k + scheme.r) as u32;
    let b = scheme.b as u32;
    let required = 2 * scheme.t + 1;
    let mut pairs_checked = 0u64;
    let size = f.len() as u64;
    for u in 0..size {
        let cu = scheme.raw_codeword(u);
        let fu = f.id_at(u);
        for v in u + 1..size {
            if f.id_at(v) == fu {
                continue;
            }
            pairs_checked += 1;
            let d = raw_b_weight(cu ^ scheme.raw_codeword(v), n, b) as usize;
            if d < required {
                return Ok(Verdict {
                    pass: false,
                    pairs_checked,
                    witness: Some(Violation {
                        u: Word::from_raw(u, scheme.k),
                        v: Word::from_raw(v, scheme.k),
                        distance: d,
                        required,
                    }),
                });
            }
        }
    }
    Ok(Verdict {
        pass: true,
        pairs_checked,
        witness: None,
    })
}

/// `000, 110, 101, 011` (coordinate 0 leftmost) for colors 1..=4.
const LAMBDA4_PATTERNS: [u64; 4] = [0b000, 0b011, 0b101, 0b110];

fn signed_redundancy(value: i64) -> usize {
    value.max(0) as usize
}

/// The four parity vectors used by [`encoder_lambda4`]: each 3-bit pattern
/// repeated `t` times and cut to its first `3t - b + 1` coordinates.
pub fn lambda4_parities(t: usize, b: usize) -> Result<(usize, [u64; 4])> {
    if t == 0 || 3 * t > MAX_WORD_LEN {
        return Err(Error::InvalidParameter(format!("t={t} out of range")));
    }
    let r = signed_redundancy(3 * t as i64 - b as i64 + 1);
    let mut out = [0u64; 4];
    for (slot, &p) in out.iter_mut().zip(&LAMBDA4_PATTERNS) {
        let full = (0..t).fold(0u64, |acc, i| acc | (p << (3 * i)));
        *slot = full & mask(r as u32);
    }
    Ok((r, out))
}

fn require_k_ge_b(f: &FunctionTable, b: usize) -> Result<()> {
    if b == 0 || f.k() < b {
        Err(Error::Hypothesis(format!("needs k >= b (k={}, b={b})", f.k())))
    } else {
        Ok(())
    }
}

/// Redundancy `3t - b + 1` encoder for locally `(4, 2t, b)` functions: a
/// 4-coloring of the conflict graph at radius `2t` picks one of four
/// repetition patterns. When `3t - b + 1 <= 0` no parity is needed (distinct
/// messages are already at distance `>= b > 2t`) and `r = 0`.
pub fn encoder_lambda4(f: &FunctionTable, t: usize, b: usize) -> Result<EncodingScheme> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    require_k_ge_b(f, b)?;
    if !functions::is_locally(f, 4, 2 * t, b)? {
        return Err(Error::Hypothesis(format!("f is not locally (4,{},{b})", 2 * t)));
    }
    let coloring = coloring_within(f, 2 * t, b, 4)?;
    if coloring.used > 4 {
        return Err(Error::TooManyColors {
            used: coloring.used,
            allowed: 4,
        });
    }
    let (r, patterns) = lambda4_parities(t, b)?;
    let parity = coloring
        .colors
        .iter()
        .map(|&c| patterns[c as usize - 1])
        .collect();
    EncodingScheme::new(f.k(), r, t, b, parity, PROVENANCE_LAMBDA4)
}

/// `Enc(u) = (u, C[τ(u)])` for a code `C` with at least as many words as the
/// conflict coloring at radius `2t` uses and minimum b-distance `>= 2t`.
pub fn encoder_generic(f: &FunctionTable, t: usize, b: usize, code: &Code) -> Result<EncodingScheme> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    require_k_ge_b(f, b)?;
    let code = code.with_width(b)?;
    let coloring = coloring_within(f, 2 * t, b, code.len())?;
    if coloring.used > code.len() {
        return Err(Error::CodeTooSmall {
            have: code.len(),
            need: coloring.used,
        });
    }
    if coloring.used > 1 {
        let have = code.min_distance().unwrap_or(usize::MAX);
        if have < 2 * t {
            return Err(Error::CodeDistanceInsufficient { have, need: 2 * t });
        }
    }
    let parity = coloring
        .colors
        .iter()
        .map(|&c| code.words()[c as usize - 1].index())
        .collect();
    EncodingScheme::new(f.k(), code.n(), t, b, parity, PROVENANCE_GENERIC)
}

/// Redundancy `2t - b + 1` encoder for `Δ_T^b` with `2t < T <= 4t`: the
/// parity of `Δ_T^b(u)` repeated `2t - b + 1` times.
pub fn encoder_delta_parity(threshold: usize, t: usize, b: usize, k: usize) -> Result<EncodingScheme> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    if !(2 * t < threshold && threshold <= 4 * t) {
        return Err(Error::Hypothesis(format!(
            "needs 2t < T <= 4t (T={threshold}, t={t})"
        )));
    }
    if b == 0 || k < b {
        return Err(Error::Hypothesis(format!("needs k >= b (k={k}, b={b})")));
    }
    let wd = WeightDistribution::new(threshold, b, k)?;
    let r = signed_redundancy(2 * t as i64 - b as i64 + 1);
    let ones = mask(r as u32);
    let parity = Word::all(k, metric::DEFAULT_ENUM_CAP)?
        .map(|u| if wd.eval(&u) % 2 == 1 { ones } else { 0 })
        .collect();
    EncodingScheme::new(k, r, t, b, parity, PROVENANCE_DELTA_PARITY)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancySearch {
    /// Smallest feasible `r`, if found within `r_max`.
    pub value: Option<usize>,
    pub status: SearchStatus,
    /// An optimal scheme when `value` is set.
    pub scheme: Option<EncodingScheme>,
    pub r_max: usize,
    pub nodes: u64,
}

/// Exact `r_f^b(k, t)`: the smallest `r <= r_max` with an assignment
/// `parity: F_2^k -> F_2^r` meeting the `2t + 1` demand on every pair with
/// differing function values. Lengths with `k + r < b` are skipped.
pub fn optimal_redundancy_search(f: &FunctionTable, t: usize, b: usize, r_max: usize) -> Result<RedundancySearch> {
    if t == 0 || b == 0 {
        return Err(Error::InvalidParameter("t and b must be >= 1".into()));
    }
    if r_max > MAX_SEARCH_REDUNDANCY || f.k() + r_max > MAX_WORD_LEN {
        return Err(Error::CapExceeded {
            len: r_max,
            cap: MAX_SEARCH_REDUNDANCY,
        });
    }
    let k = f.k();
    let mut nodes = 0;
    if f.is_constant() {
        let r = b.saturating_sub(k);
        let scheme = EncodingScheme::new(k, r, t, b, vec![0; f.len()], PROVENANCE_SEARCH)?;
        return Ok(RedundancySearch {
            value: Some(r),
            status: SearchStatus::Exact,
            scheme: Some(scheme),
            r_max,
            nodes,
        });
    }
    for r in b.saturating_sub(k)..=r_max {
        if let Some(parity) = ParitySearch::solve(f, t, b, r, &mut nodes) {
            let scheme = EncodingScheme::new(k, r, t, b, parity, PROVENANCE_SEARCH)?;
            return Ok(RedundancySearch {
                value: Some(r),
                status: SearchStatus::Exact,
                scheme: Some(scheme),
                r_max,
                nodes,
            });
        }
    }
    Ok(RedundancySearch {
        value: None,
        status: SearchStatus::Cap,
        scheme: None,
        r_max,
        nodes,
    })
}

/// Masks selecting indices whose bit `s` is clear, for `s` in `0..6`.
const BUTTERFLY: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// `out[q] = set[q ^ p]` over a bitset of `2^r` bits.
fn translate(set: &[u64], p: u64, out: &mut [u64]) {
    let hi = (p >> 6) as usize;
    let lo = p & 63;
    for (wi, slot) in out.iter_mut().enumerate() {
        let mut x = set[wi ^ hi];
        for (s, &m) in BUTTERFLY.iter().enumerate() {
            if (lo >> s) & 1 == 1 {
                let sh = 1 << s;
                x = ((x & m) << sh) | ((x >> sh) & m);
            }
        }
        *slot = x;
    }
}

fn popcount(set: &[u64]) -> u32 {
    set.iter().map(|w| w.count_ones()).sum()
}

/// Constraint satisfaction over parity vectors: each constrained pair
/// `(u, v)` needs `p_u ^ p_v` inside the allowed set for `e = u ^ v`.
struct ParitySearch {
    words: usize,
    /// Per variable: (neighbor, allowed-set index).
    adj: Vec<Vec<(usize, usize)>>,
    allowed: Vec<Vec<u64>>,
    domains: Vec<Vec<u64>>,
    value: Vec<Option<u64>>,
    trail: Vec<(usize, Vec<u64>)>,
    nodes: u64,
}

impl ParitySearch {
    fn solve(f: &FunctionTable, t: usize, b: usize, r: usize, nodes: &mut u64) -> Option<Vec<u64>> {
        let k = f.k();
        let n = (k + r) as u32;
        let need = 2 * t + 1;
        let size = f.len() as u64;
        let universe = 1usize << r;
        let words = universe.div_ceil(64);

        let mut allowed_index: HashMap<u64, usize> = HashMap::new();
        let mut allowed: Vec<Vec<u64>> = Vec::new();
        let mut edges: Vec<(usize, usize, usize)> = Vec::new();
        for u in 0..size {
            for v in u + 1..size {
                if f.id_at(u) == f.id_at(v) {
                    continue;
                }
                let e = u ^ v;
                // Parity bits only add nonzero windows.
                if raw_b_weight(e, n, b as u32) as usize >= need {
                    continue;
                }
                let idx = match allowed_index.get(&e) {
                    Some(&i) => i,
                    None => {
                        let mut set = vec![0u64; words];
                        for q in 0..universe as u64 {
                            if raw_b_weight(e | (q << k), n, b as u32) as usize >= need {
                                set[(q / 64) as usize] |= 1 << (q % 64);
                            }
                        }
                        if popcount(&set) == 0 {
                            return None;
                        }
                        allowed.push(set);
                        allowed_index.insert(e, allowed.len() - 1);
                        allowed.len() - 1
                    }
                };
                edges.push((u as usize, v as usize, idx));
            }
        }

        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f.len()];
        for &(u, v, idx) in &edges {
            adj[u].push((v, idx));
            adj[v].push((u, idx));
        }
        let full = {
            let mut s = vec![u64::MAX; words];
            if universe < 64 {
                s[0] = mask(universe as u32);
            }
            s
        };
        let graph = Graph::from_adjacency(
            adj.iter()
                .map(|l| l.iter().map(|&(v, _)| v as u32).collect())
                .collect(),
        );
        let mut parity = vec![0u64; f.len()];
        for comp in graph.components() {
            if comp.len() == 1 && adj[comp[0] as usize].is_empty() {
                continue;
            }
            let local: HashMap<usize, usize> = comp
                .iter()
                .enumerate()
                .map(|(i, &v)| (v as usize, i))
                .collect();
            let mut search = ParitySearch {
                words,
                adj: comp
                    .iter()
                    .map(|&v| {
                        adj[v as usize]
                            .iter()
                            .map(|&(w, idx)| (local[&w], idx))
                            .collect()
                    })
                    .collect(),
                allowed: allowed.clone(),
                domains: vec![full.clone(); comp.len()],
                value: vec![None; comp.len()],
                trail: Vec::new(),
                nodes: 0,
            };
            // Translating every parity in a component by the same vector
            // preserves all of its constraints, so pin the lightest message.
            let anchor = (0..comp.len())
                .min_by_key(|&i| (comp[i].count_ones(), comp[i]))
                .expect("component is nonempty");
            let mut pinned = vec![0u64; words];
            pinned[0] = 1;
            search.domains[anchor] = pinned;
            let ok = search.run();
            *nodes += search.nodes;
            if !ok {
                return None;
            }
            for (i, &v) in comp.iter().enumerate() {
                parity[v as usize] = search.value[i].expect("assigned");
            }
        }
        Some(parity)
    }

    fn run(&mut self) -> bool {
        self.nodes += 1;
        let next = (0..self.value.len())
            .filter(|&i| self.value[i].is_none())
            .min_by_key(|&i| (popcount(&self.domains[i]), i));
        let Some(var) = next else {
            return true;
        };
        let dom = self.domains[var].clone();
        let mut scratch = vec![0u64; self.words];
        for (wi, &word) in dom.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let q = (wi * 64) as u64 + bits.trailing_zeros() as u64;
                bits &= bits - 1;
                self.value[var] = Some(q);
                let mark = self.trail.len();
                let mut dead = false;
                for j in 0..self.adj[var].len() {
                    let (w, idx) = self.adj[var][j];
                    if self.value[w].is_some() {
                        continue;
                    }
                    translate(&self.allowed[idx], q, &mut scratch);
                    let narrowed: Vec<u64> = self.domains[w]
                        .iter()
                        .zip(&scratch)
                        .map(|(a, b)| a & b)
                        .collect();
                    if narrowed != self.domains[w] {
                        let old = std::mem::replace(&mut self.domains[w], narrowed);
                        self.trail.push((w, old));
                        if popcount(&self.domains[w]) == 0 {
                            dead = true;
                            break;
                        }
                    }
                }
                if !dead && self.run() {
                    return true;
                }
                while self.trail.len() > mark {
                    let (w, old) = self.trail.pop().expect("trail entry");
                    self.domains[w] = old;
                }
                self.value[var] = None;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn translate_matches_definition() {
        for r in [1usize, 3, 6, 7, 9] {
            let universe = 1u64 << r;
            let words = (universe as usize).div_ceil(64);
            let mut set = vec![0u64; words];
            for q in 0..universe {
                if (q * 7 + 3) % 5 < 2 {
                    set[(q / 64) as usize] |= 1 << (q % 64);
                }
            }
            for p in [0, 1, universe / 2, universe - 1, 5 % universe] {
                let mut out = vec![0u64; words];
                translate(&set, p, &mut out);
                for q in 0..universe {
                    let src = q ^ p;
                    let expect = (set[(src / 64) as usize] >> (src % 64)) & 1;
                    let got = (out[(q / 64) as usize] >> (q % 64)) & 1;
                    assert_eq!(got, expect, "r={r} p={p} q={q}");
                }
            }
        }
    }

    #[test]
    fn coloring_examples() {
        let f = FunctionTable::constant(4).unwrap();
        let c = conflict_coloring(&f, 2, 1, Strategy::Exact).unwrap();
        assert_eq!(c.used, 1);

        let f = FunctionTable::hamming_weight(2).unwrap();
        let c = conflict_coloring(&f, 2, 1, Strategy::Exact).unwrap();
        assert_eq!(c.used, 3);
        assert!(c.optimal);

        let f = FunctionTable::hamming_weight(6).unwrap();
        let c = conflict_coloring(&f, 2, 1, Strategy::Exact).unwrap();
        assert_eq!(c.lambda_s, 5);
        assert!(c.used <= 5, "used {}", c.used);
        let g = Graph::conflict(&f, 2, 1).unwrap();
        assert!(g.is_proper(&c.colors));
    }

    #[test]
    fn exact_coloring_of_odd_cycle() {
        let n = 7u32;
        let g = Graph::from_adjacency((0..n).map(|i| vec![(i + 1) % n, (i + n - 1) % n]).collect());
        let (colors, proved) = exact_coloring(&g, 1000);
        assert!(proved);
        assert!(g.is_proper(&colors));
        assert_eq!(count_colors(&colors), 3);
    }

    #[test]
    fn lambda4_parity_distances() {
        for t in 1..=4 {
            for b in 1..=3 * t {
                let (r, p) = lambda4_parities(t, b).unwrap();
                assert_eq!(r, 3 * t + 1 - b);
                for i in 0..4 {
                    for j in 0..i {
                        let d = (p[i] ^ p[j]).count_ones() as i64;
                        assert!(d >= 2 * t as i64 - (b as i64 - 1), "t={t} b={b}");
                    }
                }
            }
        }
    }

    #[test]
    fn lambda4_on_weight_function() {
        let f = FunctionTable::hamming_weight(2).unwrap();
        let s = encoder_lambda4(&f, 1, 1).unwrap();
        assert_eq!(s.r(), 3);
        assert!(verify_fcbsc(&s, &f).unwrap().pass);
    }

    #[test]
    fn lambda4_rejects_nonlocal() {
        let f = FunctionTable::hamming_weight(6).unwrap();
        assert!(encoder_lambda4(&f, 1, 1).unwrap_err().is_hypothesis());
        let f = FunctionTable::hamming_weight(2).unwrap();
        assert!(encoder_lambda4(&f, 1, 3).unwrap_err().is_hypothesis());
    }

    #[test]
    fn generic_with_repetition_code() {
        let f = FunctionTable::from_fn(3, |u| u.get(0)).unwrap();
        let code = codes::Code::new(vec![w("00"), w("11")], 1).unwrap();
        let s = encoder_generic(&f, 1, 1, &code).unwrap();
        assert_eq!(s.r(), 2);
        assert!(verify_fcbsc(&s, &f).unwrap().pass);

        let f = FunctionTable::hamming_weight(3).unwrap();
        let err = encoder_generic(&f, 1, 1, &code).unwrap_err();
        assert!(matches!(err, Error::CodeTooSmall { .. }));
        let weak = codes::Code::new(vec![w("000"), w("100"), w("010"), w("001")], 1).unwrap();
        let err = encoder_generic(&f, 1, 1, &weak).unwrap_err();
        assert!(matches!(err, Error::CodeDistanceInsufficient { have: 1, need: 2 }));
    }

    #[test]
    fn delta_parity_examples() {
        for (threshold, t, b, k, r) in [(3, 1, 1, 4, 2), (5, 2, 2, 6, 3), (4, 1, 1, 5, 2)] {
            let s = encoder_delta_parity(threshold, t, b, k).unwrap();
            assert_eq!(s.r(), r);
            let f = functions::make_weight_distribution(&WeightDistribution::new(threshold, b, k).unwrap()).unwrap();
            assert!(verify_fcbsc(&s, &f).unwrap().pass);
        }
        assert!(encoder_delta_parity(2, 1, 1, 4).unwrap_err().is_hypothesis());
        assert!(encoder_delta_parity(5, 1, 1, 4).unwrap_err().is_hypothesis());
    }

    #[test]
    fn verifier_examples() {
        let f = FunctionTable::constant(3).unwrap();
        let s = EncodingScheme::new(3, 0, 1, 1, vec![0; 8], "test").unwrap();
        let v = verify_fcbsc(&s, &f).unwrap();
        assert!(v.pass);
        assert_eq!(v.pairs_checked, 0);

        let f = FunctionTable::hamming_weight(2).unwrap();
        let s = EncodingScheme::new(2, 3, 1, 1, vec![0; 4], "test").unwrap();
        let v = verify_fcbsc(&s, &f).unwrap();
        assert!(!v.pass);
        let wit = v.witness.unwrap();
        assert_eq!((wit.u, wit.v, wit.distance, wit.required), (w("00"), w("10"), 1, 3));
        assert_eq!(v.pairs_checked, 1);
    }

    #[test]
    fn search_examples() {
        let f = FunctionTable::hamming_weight(2).unwrap();
        let res = optimal_redundancy_search(&f, 1, 1, 8).unwrap();
        assert_eq!(res.value, Some(3));
        assert!(verify_fcbsc(res.scheme.as_ref().unwrap(), &f).unwrap().pass);

        let f = FunctionTable::constant(3).unwrap();
        assert_eq!(optimal_redundancy_search(&f, 2, 1, 8).unwrap().value, Some(0));

        let f = FunctionTable::hamming_weight(3).unwrap();
        let res = optimal_redundancy_search(&f, 1, 1, 2).unwrap();
        assert_eq!(res.status, SearchStatus::Cap);
    }

    #[test]
    fn encode_layout() {
        let s = EncodingScheme::new(2, 3, 1, 1, vec![0, 0b011, 0b101, 0b110], "test").unwrap();
        assert_eq!(s.encode(&w("10")).unwrap().to_string(), "10110");
        assert_eq!(s.parity_string(1), "110");
    }
}
