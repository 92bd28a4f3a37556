//! Truth-table functions on `F_2^k`, function balls and locality.
//!
//! A function is locally `(λ, ρ, b)` when every function ball
//! `{ f(u') : d_b(u, u') <= ρ }` holds at most `λ` labels. The smallest such
//! `λ` is reported as `lambda_s`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::check::{CheckStatus, TheoremCheck};
use crate::error::{Error, Result};
use crate::metric::{self, check_cap, check_width, error_patterns, raw_b_weight, Metric, Word};

/// Explicit truth table `f: F_2^k -> Im(f)`.
///
/// Labels are opaque strings compared only for equality. Internally each
/// distinct label gets a dense id in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    k: usize,
    values: Vec<u32>,
    labels: Vec<String>,
}

impl FunctionTable {
    /// `labels[i]` is `f` at the word with integer value `i`.
    pub fn from_labels(k: usize, labels: Vec<String>) -> Result<Self> {
        if k == 0 || k > metric::DEFAULT_ENUM_CAP {
            return Err(Error::InvalidTable(format!("k={k} outside 1..=24")));
        }
        if labels.len() != 1usize << k {
            return Err(Error::InvalidTable(format!(
                "expected {} values for k={k}, got {}",
                1usize << k,
                labels.len()
            )));
        }
        let mut names: Vec<String> = Vec::new();
        let mut index = std::collections::HashMap::new();
        let values = labels
            .into_iter()
            .map(|l| {
                *index.entry(l.clone()).or_insert_with(|| {
                    names.push(l);
                    (names.len() - 1) as u32
                })
            })
            .collect();
        Ok(FunctionTable {
            k,
            values,
            labels: names,
        })
    }

    pub fn from_fn<F, L>(k: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(&Word) -> L,
        L: ToString,
    {
        let words = Word::all(k, metric::DEFAULT_ENUM_CAP)?;
        Self::from_labels(k, words.map(|u| f(&u).to_string()).collect())
    }

    pub fn constant(k: usize) -> Result<Self> {
        Self::from_fn(k, |_| 0)
    }

    pub fn hamming_weight(k: usize) -> Result<Self> {
        Self::from_fn(k, |u| u.hamming_weight())
    }

    /// Uniformly random labels drawn from `0..num_labels`, reproducible from
    /// `seed`.
    pub fn random(k: usize, num_labels: usize, seed: u64) -> Result<Self> {
        if num_labels == 0 {
            return Err(Error::InvalidParameter("num_labels must be >= 1".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::from_fn(k, |_| rng.gen_range(0..num_labels))
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Label of the word with integer value `index`.
    pub fn label_at(&self, index: u64) -> &str {
        &self.labels[self.values[index as usize] as usize]
    }

    pub fn value(&self, u: &Word) -> Result<&str> {
        self.check_word(u)?;
        Ok(self.label_at(u.index()))
    }

    /// Dense label id for the word with integer value `index`; equal ids mean
    /// equal labels.
    #[inline]
    pub fn id_at(&self, index: u64) -> u32 {
        self.values[index as usize]
    }

    pub fn ids(&self) -> &[u32] {
        &self.values
    }

    /// Distinct labels, indexed by id.
    pub fn image(&self) -> &[String] {
        &self.labels
    }

    pub fn image_size(&self) -> usize {
        self.labels.len()
    }

    pub fn is_constant(&self) -> bool {
        self.labels.len() == 1
    }

    /// Values in index order as label strings.
    pub fn values(&self) -> impl Iterator<Item = &str> + '_ {
        self.values.iter().map(|&id| self.labels[id as usize].as_str())
    }

    pub(crate) fn check_word(&self, u: &Word) -> Result<()> {
        if u.len() != self.k {
            Err(Error::LengthMismatch {
                left: u.len(),
                right: self.k,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionBall {
    pub center: Word,
    pub radius: usize,
    pub b: usize,
    /// Labels reached, in id order.
    pub labels: Vec<String>,
}

impl FunctionBall {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

pub fn function_ball(f: &FunctionTable, u: &Word, radius: usize, b: usize) -> Result<FunctionBall> {
    f.check_word(u)?;
    check_width(b, f.k)?;
    let patterns = error_patterns(f.k, radius, Metric::BSymbol(b), metric::DEFAULT_ENUM_CAP)?;
    let mut seen = vec![false; f.image_size()];
    for e in patterns {
        seen[f.id_at(u.index() ^ e) as usize] = true;
    }
    let labels = seen
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(id, _)| f.labels[id].clone())
        .collect();
    Ok(FunctionBall {
        center: *u,
        radius,
        b,
        labels,
    })
}

/// Per-center ball sizes computed against a shared list of error patterns.
struct BallCounter<'a> {
    f: &'a FunctionTable,
    patterns: Vec<u64>,
}

impl<'a> BallCounter<'a> {
    fn new(f: &'a FunctionTable, radius: usize, b: usize) -> Result<Self> {
        check_width(b, f.k)?;
        let patterns = error_patterns(f.k, radius, Metric::BSymbol(b), metric::DEFAULT_ENUM_CAP)?;
        Ok(BallCounter { f, patterns })
    }

    /// `stamp` is scratch space of length `|Im f|`; `epoch` must be unique
    /// per call on the same scratch.
    fn count(&self, center: u64, stamp: &mut [u64], epoch: u64) -> usize {
        let mut n = 0;
        for &e in &self.patterns {
            let id = self.f.id_at(center ^ e) as usize;
            if stamp[id] != epoch {
                stamp[id] = epoch;
                n += 1;
            }
        }
        n
    }

    fn sizes(&self) -> Vec<usize> {
        let m = self.f.image_size();
        (0..self.f.len() as u64)
            .into_par_iter()
            .map_init(
                || (vec![u64::MAX; m], 0u64),
                |(stamp, epoch), c| {
                    *epoch += 1;
                    self.count(c, stamp, *epoch)
                },
            )
            .collect()
    }

    fn any_exceeds(&self, lambda: usize) -> bool {
        let m = self.f.image_size();
        (0..self.f.len() as u64)
            .into_par_iter()
            .map_init(
                || (vec![u64::MAX; m], 0u64),
                |(stamp, epoch), c| {
                    *epoch += 1;
                    self.count(c, stamp, *epoch)
                },
            )
            .any(|s| s > lambda)
    }
}

pub fn is_locally(f: &FunctionTable, lambda: usize, radius: usize, b: usize) -> Result<bool> {
    if lambda == 0 {
        return Err(Error::InvalidParameter("lambda must be >= 1".into()));
    }
    if lambda >= f.image_size() {
        check_width(b, f.k)?;
        return Ok(true);
    }
    Ok(!BallCounter::new(f, radius, b)?.any_exceeds(lambda))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityProfile {
    pub radius: usize,
    pub b: usize,
    /// `|B_f^b(u, radius)|` indexed by the integer value of `u`.
    pub ball_sizes: Vec<usize>,
    pub lambda_s: usize,
    /// Smallest center (by integer value) whose ball attains `lambda_s`.
    pub witness: Word,
}

pub fn lambda_s(f: &FunctionTable, radius: usize, b: usize) -> Result<LocalityProfile> {
    let sizes = BallCounter::new(f, radius, b)?.sizes();
    let (witness, &lambda_s) = sizes
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("table is nonempty");
    Ok(LocalityProfile {
        radius,
        b,
        ball_sizes: sizes,
        lambda_s,
        witness: Word::from_raw(witness as u64, f.k),
    })
}

/// `Δ_T^b(u) = ⌊w_b(u) / T⌋` on `F_2^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightDistribution {
    pub threshold: usize,
    pub b: usize,
    pub k: usize,
}

impl WeightDistribution {
    pub fn new(threshold: usize, b: usize, k: usize) -> Result<Self> {
        if threshold == 0 {
            return Err(Error::InvalidParameter("threshold T must be >= 1".into()));
        }
        check_width(b, k)?;
        check_cap(k, metric::DEFAULT_ENUM_CAP)?;
        Ok(WeightDistribution { threshold, b, k })
    }

    #[inline]
    pub fn eval(&self, u: &Word) -> usize {
        raw_b_weight(u.index(), self.k as u32, self.b as u32) as usize / self.threshold
    }
}

pub fn make_weight_distribution(wd: &WeightDistribution) -> Result<FunctionTable> {
    let wd = WeightDistribution::new(wd.threshold, wd.b, wd.k)?;
    FunctionTable::from_fn(wd.k, |u| wd.eval(u))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalityReport {
    pub k: usize,
    pub radius: usize,
    pub b: usize,
    pub lambda_s: usize,
    pub witness: Word,
    pub checks: Vec<TheoremCheck>,
}

impl LocalityReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status.is_ok())
    }
}

/// Evaluates every locality statement that applies to `(f, radius, b)`,
/// recomputing both sides by enumeration. Hypotheses that do not hold give
/// `Inapplicable`, never `Fail`. Pass `family` when `f` is a weight
/// distribution function to include the threshold bounds.
pub fn check_locality_theorems(
    f: &FunctionTable,
    radius: usize,
    b: usize,
    family: Option<&WeightDistribution>,
) -> Result<LocalityReport> {
    let k = f.k();
    let profile = lambda_s(f, radius, b)?;
    let ls = profile.lambda_s;
    let mut checks = Vec::new();

    let zero_ball = metric::ball_size(k, radius, Metric::BSymbol(b), metric::DEFAULT_ENUM_CAP)?;
    checks.push(TheoremCheck::new(
        "ball-size-bound",
        format!("lambda_s <= min(|Im f|, |B^b(0,{radius})|)"),
        CheckStatus::from_bool(ls <= zero_ball && ls <= f.image_size()),
        format!("lambda_s={ls}, |Im f|={}, |B^b(0,rho)|={zero_ball}", f.image_size()),
    ));

    let claim = format!("locally ({ls},{radius},{b}) => locally ({ls},{},{})", radius + 1, b + 1);
    if radius + 1 >= 2 && radius + 2 <= k && b < k {
        let ok = is_locally(f, ls, radius + 1, b + 1)?;
        checks.push(TheoremCheck::new(
            "widen-read",
            claim,
            CheckStatus::from_bool(ok),
            format!("is_locally(f,{ls},{},{})={ok}", radius + 1, b + 1),
        ));
    } else {
        checks.push(TheoremCheck::inapplicable(
            "widen-read",
            claim,
            format!("needs 2 <= rho+1 <= k-1 and b+1 <= k (k={k})"),
        ));
    }

    if b > 1 {
        let hl = lambda_s(f, radius, 1)?.lambda_s;
        let claim = format!(
            "locally ({hl},{radius},1) => locally ({hl},{},{b})",
            radius + b - 1
        );
        // The ball containment behind this only holds below saturation.
        if radius + b - 1 < k {
            let ok = is_locally(f, hl, radius + b - 1, b)?;
            checks.push(TheoremCheck::new(
                "hamming-to-b",
                claim,
                CheckStatus::from_bool(ok),
                format!("is_locally(f,{hl},{},{b})={ok}", radius + b - 1),
            ));
        } else {
            checks.push(TheoremCheck::inapplicable(
                "hamming-to-b",
                claim,
                format!("needs rho+b-1 < k (k={k})"),
            ));
        }

        let bl = lambda_s(f, b * radius, b)?.lambda_s;
        let ok = is_locally(f, bl, radius, 1)?;
        checks.push(TheoremCheck::new(
            "b-to-hamming",
            format!("locally ({bl},{},{b}) => locally ({bl},{radius},1)", b * radius),
            CheckStatus::from_bool(ok),
            format!("is_locally(f,{bl},{radius},1)={ok}"),
        ));

        let claim = "locally (lambda,b,b) <=> locally (lambda,1,1)".to_string();
        if b < k {
            let lb = lambda_s(f, b, b)?.lambda_s;
            let l1 = lambda_s(f, 1, 1)?.lambda_s;
            checks.push(TheoremCheck::new(
                "radius-b-equivalence",
                claim,
                CheckStatus::from_bool(lb == l1),
                format!("lambda_s(f,b,b)={lb}, lambda_s(f,1,1)={l1}"),
            ));
        } else {
            checks.push(TheoremCheck::inapplicable(
                "radius-b-equivalence",
                claim,
                format!("needs b < k (b={b}, k={k}); at b=k all distinct words are at distance b"),
            ));
        }
    }

    let claim = "rho <= b-1 => lambda_s = 1".to_string();
    if radius < b {
        checks.push(TheoremCheck::new(
            "singleton-radius",
            claim,
            CheckStatus::from_bool(ls == 1),
            format!("lambda_s={ls}"),
        ));
    } else {
        checks.push(TheoremCheck::inapplicable(
            "singleton-radius",
            claim,
            format!("rho={radius} >= b={b}"),
        ));
    }

    if let Some(wd) = family {
        checks.extend(weight_distribution_checks(wd, radius, ls));
    }

    Ok(LocalityReport {
        k,
        radius,
        b,
        lambda_s: ls,
        witness: profile.witness,
        checks,
    })
}

/// Lower bound `⌊ρ/T⌋ + 1` on `lambda_s` for `Δ_T^b`, or `None` where the
/// bound does not apply.
///
/// For `b = 1` it holds for every `ρ <= k`. For `b > 1` the b-weights
/// `1..b` are never attained, so the bound needs `ρ >= b` (below that every
/// ball is a singleton and `lambda_s = 1`) and `k >= 2ρ` (near saturation the
/// attainable weights thin out; `k=3, b=2, ρ=3, T=1` has `lambda_s = 3`).
pub fn threshold_lower_bound(wd: &WeightDistribution, radius: usize) -> Option<usize> {
    let gated = if wd.b == 1 {
        radius > wd.k
    } else {
        radius < wd.b || 2 * radius > wd.k
    };
    if gated {
        None
    } else {
        Some(radius / wd.threshold + 1)
    }
}

/// Upper bound `⌊2ρ/T⌋ + 2` on `lambda_s` for `Δ_T^b`.
pub fn threshold_upper_bound(wd: &WeightDistribution, radius: usize) -> usize {
    2 * radius / wd.threshold + 2
}

fn weight_distribution_checks(
    wd: &WeightDistribution,
    radius: usize,
    ls: usize,
) -> Vec<TheoremCheck> {
    let WeightDistribution { threshold: t, b, k } = *wd;
    let mut out = Vec::new();

    let cap = k / t + 1;
    out.push(TheoremCheck::new(
        "image-bound",
        format!("lambda_s <= floor(k/T)+1 = {cap}"),
        CheckStatus::from_bool(ls <= cap),
        format!("lambda_s={ls}"),
    ));

    let claim = format!("Hamming weight: lambda_s = 2rho+1 = {}", 2 * radius + 1);
    if t == 1 && b == 1 {
        if k >= 2 * radius {
            out.push(TheoremCheck::new(
                "hamming-weight-exact",
                claim,
                CheckStatus::from_bool(ls == 2 * radius + 1),
                format!("lambda_s={ls}"),
            ));
        } else {
            out.push(TheoremCheck::inapplicable(
                "hamming-weight-exact",
                claim,
                format!("k={k} < 2rho; observed lambda_s={ls}"),
            ));
        }
    }

    let upper = threshold_upper_bound(wd, radius);
    if b == 1 {
        let claim = format!("Hamming threshold: lambda_s <= floor(2rho/T)+2 = {upper}");
        if k >= 2 * radius {
            out.push(TheoremCheck::new(
                "hamming-threshold-upper",
                claim,
                CheckStatus::from_bool(ls <= upper),
                format!("lambda_s={ls}"),
            ));
        } else {
            out.push(TheoremCheck::inapplicable(
                "hamming-threshold-upper",
                claim,
                format!("k={k} < 2rho"),
            ));
        }
    }

    out.push(TheoremCheck::new(
        "threshold-upper",
        format!("lambda_s <= floor(2rho/T)+2 = {upper}"),
        CheckStatus::from_bool(ls <= upper),
        format!("lambda_s={ls}"),
    ));

    let claim = format!("lambda_s >= floor(rho/T)+1 = {}", radius / t + 1);
    match threshold_lower_bound(wd, radius) {
        Some(lower) => out.push(TheoremCheck::new(
            "threshold-lower",
            claim,
            CheckStatus::from_bool(ls >= lower),
            format!("lambda_s={ls}"),
        )),
        None => out.push(TheoremCheck::inapplicable(
            "threshold-lower",
            claim,
            format!("needs rho <= k, and rho >= b with k >= 2rho when b > 1; lambda_s={ls}"),
        )),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn hamming_weight_ball_table() {
        let f = FunctionTable::hamming_weight(6).unwrap();
        let cases = [("000111", vec!["1", "2", "3", "4", "5"]), ("100000", vec!["0", "1", "2", "3"]), ("111111", vec!["4", "5", "6"])];
        for (u, expected) in cases {
            let ball = function_ball(&f, &w(u), 2, 1).unwrap();
            let mut got: Vec<usize> = ball.labels.iter().map(|l| l.parse().unwrap()).collect();
            got.sort();
            let expected: Vec<usize> = expected.iter().map(|l| l.parse().unwrap()).collect();
            assert_eq!(got, expected, "center {u}");
        }
    }

    #[test]
    fn locality_of_hamming_weight() {
        let f = FunctionTable::hamming_weight(6).unwrap();
        assert!(is_locally(&f, 5, 2, 1).unwrap());
        assert!(!is_locally(&f, 4, 2, 1).unwrap());
        assert_eq!(lambda_s(&f, 2, 1).unwrap().lambda_s, 5);
        assert!(is_locally(&f, f.image_size(), 6, 3).unwrap());
        assert!(is_locally(&f, 1, 2, 3).unwrap());
    }

    #[test]
    fn weight_k8_rho3() {
        let f = make_weight_distribution(&WeightDistribution::new(1, 1, 8).unwrap()).unwrap();
        let p = lambda_s(&f, 3, 1).unwrap();
        assert_eq!(p.lambda_s, 7);
        assert_eq!(p.ball_sizes[p.witness.index() as usize], 7);
    }

    #[test]
    fn constant_function_lambda_is_one() {
        let f = FunctionTable::constant(5).unwrap();
        for rho in 0..=5 {
            for b in 1..=3 {
                assert_eq!(lambda_s(&f, rho, b).unwrap().lambda_s, 1);
            }
        }
    }

    #[test]
    fn weight_distribution_values() {
        let f = make_weight_distribution(&WeightDistribution::new(1, 1, 3).unwrap()).unwrap();
        for i in 0..8u64 {
            assert_eq!(f.label_at(i), (i.count_ones()).to_string());
        }
        let wd = WeightDistribution::new(2, 1, 6).unwrap();
        assert_eq!(wd.eval(&w("000111")), 1);
        let wd = WeightDistribution::new(1, 2, 3).unwrap();
        assert_eq!(wd.eval(&w("010")), 2);
        assert!(WeightDistribution::new(0, 1, 3).is_err());
        assert!(WeightDistribution::new(1, 4, 3).is_err());
    }

    #[test]
    fn locality_report_for_hamming_weight() {
        let wd = WeightDistribution::new(1, 1, 6).unwrap();
        let f = make_weight_distribution(&wd).unwrap();
        let r = check_locality_theorems(&f, 2, 1, Some(&wd)).unwrap();
        assert_eq!(r.lambda_s, 5);
        assert!(r.all_ok());
        let exact = r.checks.iter().find(|c| c.id == "hamming-weight-exact").unwrap();
        assert_eq!(exact.status, CheckStatus::Pass);
    }

    #[test]
    fn locality_report_for_delta() {
        let wd = WeightDistribution::new(3, 2, 8).unwrap();
        let f = make_weight_distribution(&wd).unwrap();
        let r = check_locality_theorems(&f, 4, 2, Some(&wd)).unwrap();
        assert!((2..=4).contains(&r.lambda_s), "lambda_s={}", r.lambda_s);
        assert!(r.all_ok(), "{:#?}", r.checks);
    }

    #[test]
    fn lower_bound_gate_below_width() {
        let wd = WeightDistribution::new(1, 3, 8).unwrap();
        assert_eq!(threshold_lower_bound(&wd, 2), None);
        assert_eq!(threshold_lower_bound(&wd, 3), Some(4));
        let f = make_weight_distribution(&wd).unwrap();
        // floor(2/1)+1 = 3 would be claimed, but radius 2 < b gives singletons.
        assert_eq!(lambda_s(&f, 2, 3).unwrap().lambda_s, 1);
    }

    #[test]
    fn table_validation() {
        assert!(FunctionTable::from_labels(2, vec!["a".into(); 3]).is_err());
        let f = FunctionTable::from_labels(1, vec!["x".into(), "y".into()]).unwrap();
        assert_eq!(f.image(), ["x", "y"]);
        assert_eq!(f.value(&w("1")).unwrap(), "y");
        assert!(f.value(&w("10")).is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = FunctionTable::random(5, 3, 42).unwrap();
        let b = FunctionTable::random(5, 3, 42).unwrap();
        let c = FunctionTable::random(5, 3, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
