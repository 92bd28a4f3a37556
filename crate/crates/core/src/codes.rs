//! Codes under the b-symbol metric: requirement matrices, B_b-codes, exact
//! minimum-length search, the staircase and power-repetition constructions,
//! and Plotkin-type bounds.

use serde::{Deserialize, Serialize};

use crate::check::CheckStatus;
use crate::error::{Error, Result};
use crate::functions::FunctionTable;
use crate::metric::{self, check_width, raw_b_weight, Word, MAX_WORD_LEN};

/// Default length cap for exact searches.
pub const DEFAULT_N_MAX: usize = 16;

/// Distinct words of a common length, with the minimum pairwise b-distance
/// computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    b: usize,
    words: Vec<Word>,
    min_distance: Option<usize>,
}

impl Code {
    pub fn new(words: Vec<Word>, b: usize) -> Result<Self> {
        let n = match words.first() {
            Some(w) => w.len(),
            None => return Err(Error::InvalidCode("no codewords".into())),
        };
        check_width(b, n)?;
        for (i, w) in words.iter().enumerate() {
            if w.len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: w.len(),
                });
            }
            if words[..i].contains(w) {
                return Err(Error::InvalidCode(format!("repeated codeword {w}")));
            }
        }
        let min_distance = min_pairwise(&words, n, b);
        Ok(Code {
            n,
            b,
            words,
            min_distance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Minimum pairwise b-distance; `None` for a single codeword.
    pub fn min_distance(&self) -> Option<usize> {
        self.min_distance
    }

    /// Same words measured with a different read width.
    pub fn with_width(&self, b: usize) -> Result<Code> {
        Code::new(self.words.clone(), b)
    }
}

fn min_pairwise(words: &[Word], n: usize, b: usize) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in words.iter().enumerate() {
        for y in &words[i + 1..] {
            let d = raw_b_weight(x.index() ^ y.index(), n as u32, b as u32) as usize;
            best = Some(best.map_or(d, |m| m.min(d)));
        }
    }
    best
}

/// Symmetric `M x M` matrix of pairwise distance demands with zero diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementMatrix {
    #[serde(rename = "M")]
    m: usize,
    entries: Vec<Vec<usize>>,
}

impl RequirementMatrix {
    pub fn new(entries: Vec<Vec<usize>>) -> Result<Self> {
        let m = entries.len();
        if m == 0 {
            return Err(Error::InvalidMatrix("empty matrix".into()));
        }
        for (i, row) in entries.iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    got: row.len(),
                });
            }
            if row[i] != 0 {
                return Err(Error::InvalidMatrix(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                if row[j] != entries[j][i] {
                    return Err(Error::InvalidMatrix(format!("not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(RequirementMatrix { m, entries })
    }

    /// All off-diagonal entries equal to `d`.
    pub fn constant(m: usize, d: usize) -> Result<Self> {
        Self::new(
            (0..m)
                .map(|i| (0..m).map(|j| if i == j { 0 } else { d }).collect())
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.entries[i][j]
    }

    pub fn entries(&self) -> &[Vec<usize>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&d| d == 0)
    }

    /// Sum of the strictly upper-triangular entries.
    pub fn upper_sum(&self) -> usize {
        (0..self.m)
            .flat_map(|i| (i + 1..self.m).map(move |j| (i, j)))
            .map(|(i, j)| self.entries[i][j])
            .sum()
    }

    pub(crate) fn validate_json(self) -> Result<Self> {
        let m = self.m;
        let out = Self::new(self.entries)?;
        if out.m != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: out.m,
            });
        }
        Ok(out)
    }
}

/// Which irregular b-symbol distance matrix to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// `[2t - b + 2 - d_b]^+`
    First,
    /// `[2t + b - d_b]^+`
    Second,
}

#[inline]
fn positive_part(z: i64) -> usize {
    z.max(0) as usize
}

/// Entry `(i, j)` is the variant's demand when `f(x_i) != f(x_j)`, else 0.
pub fn requirement_matrix(
    f: &FunctionTable,
    t: usize,
    b: usize,
    variant: Variant,
    messages: &[Word],
) -> Result<RequirementMatrix> {
    if t == 0 {
        return Err(Error::InvalidParameter("t must be >= 1".into()));
    }
    check_width(b, f.k())?;
    for (i, x) in messages.iter().enumerate() {
        f.check_word(x)?;
        if messages[..i].contains(x) {
            return Err(Error::DuplicateMessage(x.to_string()));
        }
    }
    let (t, bb) = (t as i64, b as i64);
    let base = match variant {
        Variant::First => 2 * t - bb + 2,
        Variant::Second => 2 * t + bb,
    };
    let m = messages.len();
    let mut entries = vec![vec![0; m]; m];
    for i in 0..m {
        for j in 0..m {
            let (x, y) = (&messages[i], &messages[j]);
            if i != j && f.id_at(x.index()) != f.id_at(y.index()) {
                let d = metric::b_distance(x, y, b)? as i64;
                entries[i][j] = positive_part(base - d);
            }
        }
    }
    RequirementMatrix::new(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMode {
    /// Codeword `i` must meet row `i` as listed.
    GivenOrder,
    /// Some assignment of codewords to rows must work.
    AnyOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BbCheck {
    pub holds: bool,
    /// `order[i]` is the index in the code of the word placed at row `i`.
    pub order: Option<Vec<usize>>,
}

/// Whether `code` is a B_b-code for `demands` under the code's read width.
pub fn is_bb_code(code: &Code, demands: &RequirementMatrix, mode: OrderMode) -> Result<BbCheck> {
    let m = demands.m();
    if code.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: code.len(),
        });
    }
    let (n, b) = (code.n as u32, code.b as u32);
    let dist = |i: usize, j: usize| {
        raw_b_weight(code.words[i].index() ^ code.words[j].index(), n, b) as usize
    };
    match mode {
        OrderMode::GivenOrder => {
            let holds = (0..m).all(|i| (0..i).all(|j| dist(i, j) >= demands.get(i, j)));
            Ok(BbCheck {
                holds,
                order: holds.then(|| (0..m).collect()),
            })
        }
        OrderMode::AnyOrder => {
            if m > 10 {
                return Err(Error::PermutationCap(m));
            }
            let mut order = Vec::with_capacity(m);
            let mut used = vec![false; m];
            let found = place_rows(&mut order, &mut used, demands, &dist);
            Ok(BbCheck {
                holds: found,
                order: found.then_some(order),
            })
        }
    }
}

fn place_rows(
    order: &mut Vec<usize>,
    used: &mut [bool],
    demands: &RequirementMatrix,
    dist: &impl Fn(usize, usize) -> usize,
) -> bool {
    let row = order.len();
    if row == used.len() {
        return true;
    }
    for w in 0..used.len() {
        if used[w] {
            continue;
        }
        if order
            .iter()
            .enumerate()
            .all(|(r, &placed)| dist(placed, w) >= demands.get(r, row))
        {
            used[w] = true;
            order.push(w);
            if place_rows(order, used, demands, dist) {
                return true;
            }
            order.pop();
            used[w] = false;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchStatus {
    /// `value` is the exact minimum.
    Exact,
    /// No solution up to the cap; the true value is larger.
    Cap,
}

/// Outcome of an exact minimum-length search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub value: Option<usize>,
    pub status: SearchStatus,
    pub witness: Vec<Word>,
    /// Set when every demand is zero and length 0 trivially suffices.
    #[serde(default)]
    pub vacuous: bool,
    /// Largest length examined.
    pub n_max: usize,
}

impl SearchResult {
    fn exact(value: usize, witness: Vec<Word>, n_max: usize) -> Self {
        SearchResult {
            value: Some(value),
            status: SearchStatus::Exact,
            witness,
            vacuous: false,
            n_max,
        }
    }

    fn cap(n_max: usize) -> Self {
        SearchResult {
            value: None,
            status: SearchStatus::Cap,
            witness: Vec::new(),
            vacuous: false,
            n_max,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.status == SearchStatus::Exact
    }
}

fn check_search_cap(n_max: usize) -> Result<()> {
    if n_max > metric::DEFAULT_ENUM_CAP {
        Err(Error::CapExceeded {
            len: n_max,
            cap: metric::DEFAULT_ENUM_CAP,
        })
    } else {
        Ok(())
    }
}

/// A length-`n` code of `m` words with pairwise b-distance `>= d`, if one
/// exists. The first word is fixed to zero (distances are translation
/// invariant) and the rest are strictly increasing.
pub fn find_code(n: usize, m: usize, d: usize, b: usize) -> Result<Option<Vec<Word>>> {
    check_width(b, n)?;
    metric::check_cap(n, metric::DEFAULT_ENUM_CAP)?;
    if m == 0 {
        return Ok(Some(Vec::new()));
    }
    let (nn, bb) = (n as u32, b as u32);
    let cands: Vec<u64> = (1..1u64 << n)
        .filter(|&x| raw_b_weight(x, nn, bb) as usize >= d)
        .collect();
    let mut chosen = vec![0u64];
    let found = extend_clique(&mut chosen, &cands, m, d, nn, bb);
    Ok(found.then(|| chosen.into_iter().map(|x| Word::from_raw(x, n)).collect()))
}

fn extend_clique(chosen: &mut Vec<u64>, cands: &[u64], m: usize, d: usize, n: u32, b: u32) -> bool {
    if chosen.len() == m {
        return true;
    }
    if chosen.len() + cands.len() < m {
        return false;
    }
    for (i, &c) in cands.iter().enumerate() {
        if chosen.len() + (cands.len() - i) < m {
            return false;
        }
        let next: Vec<u64> = cands[i + 1..]
            .iter()
            .copied()
            .filter(|&x| raw_b_weight(x ^ c, n, b) as usize >= d)
            .collect();
        chosen.push(c);
        if extend_clique(chosen, &next, m, d, n, b) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `N_b(M, D)`: the smallest length `n <= n_max` admitting `M` words with
/// pairwise b-distance at least `D`. Lengths below `b` are skipped since
/// b-reads need `n >= b`.
pub fn exact_min_length(m: usize, d: usize, b: usize, n_max: usize) -> Result<SearchResult> {
    if m < 2 || d == 0 || b == 0 {
        return Err(Error::InvalidParameter(format!(
            "need M >= 2, D >= 1, b >= 1 (got M={m}, D={d}, b={b})"
        )));
    }
    check_search_cap(n_max)?;
    for n in b..=n_max {
        if let Some(words) = find_code(n, m, d, b)? {
            return Ok(SearchResult::exact(n, words, n_max));
        }
    }
    Ok(SearchResult::cap(n_max))
}

/// `A_b(n, d)`: the largest code of length `n` with minimum b-distance `>= d`,
/// with a witness.
pub fn max_code_size(n: usize, d: usize, b: usize) -> Result<(usize, Vec<Word>)> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be >= 1".into()));
    }
    let mut best = find_code(n, 1, d, b)?.expect("single word always fits");
    for m in 2.. {
        match find_code(n, m, d, b)? {
            Some(words) => best = words,
            None => break,
        }
    }
    Ok((best.len(), best))
}

/// `N_b(B)`: the smallest length `n <= n_max` admitting words `p_1..p_M`
/// (not necessarily distinct) with `d_b(p_i, p_j) >= B_ij`.
pub fn exact_min_length_irregular(
    demands: &RequirementMatrix,
    b: usize,
    n_max: usize,
) -> Result<SearchResult> {
    if b == 0 {
        return Err(Error::WidthOutOfRange { b, n: 0 });
    }
    check_search_cap(n_max)?;
    if demands.is_zero() {
        return Ok(SearchResult {
            value: Some(0),
            status: SearchStatus::Exact,
            witness: Vec::new(),
            vacuous: true,
            n_max,
        });
    }
    for n in b..=n_max {
        if let Some(words) = find_irregular(demands, n, b) {
            return Ok(SearchResult::exact(n, words, n_max));
        }
    }
    Ok(SearchResult::cap(n_max))
}

fn find_irregular(demands: &RequirementMatrix, n: usize, b: usize) -> Option<Vec<Word>> {
    let m = demands.m();
    let (nn, bb) = (n as u32, b as u32);
    let all: Vec<u64> = (0..1u64 << n).collect();
    let mut domains: Vec<Vec<u64>> = vec![all; m];
    // Row with the largest total demand goes first, pinned to zero.
    let anchor = (0..m)
        .max_by_key(|&i| ((0..m).map(|j| demands.get(i, j)).sum::<usize>(), std::cmp::Reverse(i)))
        .unwrap_or(0);
    domains[anchor] = vec![0];
    let mut assigned: Vec<Option<u64>> = vec![None; m];
    if assign_irregular(demands, &mut domains, &mut assigned, nn, bb) {
        Some(
            assigned
                .into_iter()
                .map(|x| Word::from_raw(x.expect("all rows assigned"), n))
                .collect(),
        )
    } else {
        None
    }
}

fn assign_irregular(
    demands: &RequirementMatrix,
    domains: &mut Vec<Vec<u64>>,
    assigned: &mut Vec<Option<u64>>,
    n: u32,
    b: u32,
) -> bool {
    let next = (0..assigned.len())
        .filter(|&i| assigned[i].is_none())
        .min_by_key(|&i| domains[i].len());
    let Some(row) = next else {
        return true;
    };
    let choices = domains[row].clone();
    for x in choices {
        assigned[row] = Some(x);
        let mut saved = Vec::new();
        let mut dead = false;
        for other in 0..assigned.len() {
            let need = demands.get(row, other);
            if assigned[other].is_some() || need == 0 {
                continue;
            }
            let filtered: Vec<u64> = domains[other]
                .iter()
                .copied()
                .filter(|&y| raw_b_weight(x ^ y, n, b) as usize >= need)
                .collect();
            dead = filtered.is_empty();
            saved.push((other, std::mem::replace(&mut domains[other], filtered)));
            if dead {
                break;
            }
        }
        if !dead && assign_irregular(demands, domains, assigned, n, b) {
            return true;
        }
        for (other, dom) in saved {
            domains[other] = dom;
        }
        assigned[row] = None;
    }
    false
}

/// `λ` words of length `λt`; word `i` has ones exactly on coordinates
/// `i*t .. (i+1)*t`. Pairwise Hamming distance is exactly `2t`.
pub fn staircase_code(lambda: usize, t: usize) -> Result<Code> {
    if lambda < 2 || t == 0 {
        return Err(Error::InvalidParameter(format!(
            "need lambda >= 2 and t >= 1 (got {lambda}, {t})"
        )));
    }
    let n = lambda * t;
    if n > MAX_WORD_LEN {
        return Err(Error::InvalidLength(n));
    }
    let block = metric::mask(t as u32);
    let words = (0..lambda)
        .map(|i| Word::from_raw(block << (i * t), n))
        .collect();
    Code::new(words, 1)
}

/// The `2^b` words `s_i^(2t/b)` of length `2t`, where `s_i` is the `b`-bit
/// binary representation of `i` written most significant bit first. Pairwise
/// b-distance is exactly `2t`.
///
/// Requires `b | t`. When only `b | 2t` holds the construction still works but
/// is refused; the error says so.
pub fn power_repetition_code(b: usize, t: usize) -> Result<Code> {
    if b == 0 || t == 0 {
        return Err(Error::InvalidParameter("need b >= 1 and t >= 1".into()));
    }
    if !t.is_multiple_of(b) {
        let weaker = (2 * t).is_multiple_of(b);
        return Err(Error::Hypothesis(format!(
            "b={b} must divide t={t}{}",
            if weaker {
                " (b divides 2t, which the construction itself would accept)"
            } else {
                ""
            }
        )));
    }
    if 2 * t > MAX_WORD_LEN || b >= 32 {
        return Err(Error::InvalidLength(2 * t));
    }
    let words = (0..1u64 << b)
        .map(|i| {
            let s = (0..b).fold(0u64, |acc, j| acc | (((i >> (b - 1 - j)) & 1) << j));
            Word::from_raw(s, b).repeat(2 * t / b)
        })
        .collect::<Result<Vec<_>>>()?;
    Code::new(words, b)
}

/// `⌊d / (d - (1 - 2^-b) n)⌋`, an upper bound on `A_b(n, d)`, valid when
/// `2 <= d <= n` and `(1 - 2^-b) n < d`.
pub fn plotkin_bound_b(n: usize, d: usize, b: usize) -> Result<usize> {
    check_width(b, n)?;
    if d < 2 || d > n {
        return Err(Error::Hypothesis(format!("need 2 <= d <= n (d={d}, n={n})")));
    }
    let q = 1u128 << b;
    let (n, d) = (n as u128, d as u128);
    // Scale by 2^b: r n < d  <=>  (2^b - 1) n < 2^b d.
    let rn = (q - 1) * n;
    let dq = d * q;
    if rn >= dq {
        return Err(Error::Hypothesis(format!(
            "need (1-2^-{b})*n < d (n={n}, d={d})"
        )));
    }
    Ok((dq / (dq - rn)) as usize)
}

/// Generalized Plotkin lower bound on the Hamming-metric `N(D)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlotkinLower {
    pub numerator: u64,
    pub denominator: u64,
    pub ceiling: u64,
    /// True when `M != 3`. Only the three-message form is a known result;
    /// other sizes use the parity-corrected denominator.
    pub extrapolated: bool,
}

impl PlotkinLower {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `Σ_{i<j} D_ij / (⌊M/2⌋⌈M/2⌉)`, i.e. `4/(M²-1) Σ` for odd `M` and
/// `4/M² Σ` for even `M`. Each coordinate of a binary code adds at most
/// `⌊M/2⌋⌈M/2⌉` to the sum of pairwise Hamming distances.
pub fn generalized_plotkin_lower(demands: &RequirementMatrix) -> Result<PlotkinLower> {
    let m = demands.m() as u64;
    if m < 2 {
        return Err(Error::InvalidParameter("need M >= 2".into()));
    }
    let sum = demands.upper_sum() as u64;
    let den = (m / 2) * m.div_ceil(2);
    let g = gcd(sum, den).max(1);
    Ok(PlotkinLower {
        numerator: sum / g,
        denominator: den / g,
        ceiling: sum.div_ceil(den),
        extrapolated: m != 3,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NbNhReport {
    pub lambda: usize,
    pub t: usize,
    pub b: usize,
    /// `N_b(λ, 2t)`
    pub b_symbol: Option<SearchResult>,
    /// `N_H(λ, 2t - b + 1)`
    pub hamming: Option<SearchResult>,
    pub status: CheckStatus,
    pub detail: String,
}

/// Checks `N_b(λ, 2t) <= N_H(λ, 2t - b + 1)` by exact search on both sides,
/// under `λ > 2^(b-1)` and `2t >= b`.
pub fn nb_le_nh_check(lambda: usize, t: usize, b: usize, n_max: usize) -> Result<NbNhReport> {
    if lambda < 2 || t == 0 || b == 0 {
        return Err(Error::InvalidParameter(format!(
            "need lambda >= 2, t >= 1, b >= 1 (got {lambda}, {t}, {b})"
        )));
    }
    let mut report = NbNhReport {
        lambda,
        t,
        b,
        b_symbol: None,
        hamming: None,
        status: CheckStatus::Inapplicable,
        detail: String::new(),
    };
    if b > 63 || (lambda as u128) <= 1u128 << (b - 1) || 2 * t < b {
        report.detail = "needs lambda > 2^(b-1) and 2t >= b".to_string();
        return Ok(report);
    }
    let left = exact_min_length(lambda, 2 * t, b, n_max)?;
    let right = exact_min_length(lambda, 2 * t - b + 1, 1, n_max)?;
    let (status, detail) = match (left.value, right.value) {
        (Some(l), Some(r)) => (CheckStatus::from_bool(l <= r), format!("N_b={l}, N_H={r}")),
        (Some(l), None) => (CheckStatus::Pass, format!("N_b={l}, N_H>{n_max}")),
        (None, Some(r)) => (CheckStatus::Fail, format!("N_b>{n_max}, N_H={r}")),
        (None, None) => (CheckStatus::Unknown, format!("both exceed n_max={n_max}")),
    };
    report.b_symbol = Some(left);
    report.hamming = Some(right);
    report.status = status;
    report.detail = detail;
    Ok(report)
}
