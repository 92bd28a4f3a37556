//! Batch property runs behind `fcbsc report`. Each suite enumerates small
//! instances, checks every claimed identity or bound against brute force and
//! tallies the outcome into one row per property.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::check::CheckStatus;
use crate::codes::{self, Variant};
use crate::encoders::{self, Strategy};
use crate::error::{Error, Result};
use crate::functions::{self, FunctionTable, WeightDistribution};
use crate::metric::{raw_b_weight, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Metric,
    Locality,
    Bounds,
    Encoders,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "metric" => Suite::Metric,
            "locality" => Suite::Locality,
            "bounds" => Suite::Bounds,
            "encoders" => Suite::Encoders,
            "all" => Suite::All,
            other => return Err(Error::Parse(format!("unknown suite {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportConfig {
    /// Largest message length for locality and encoder scans.
    pub kmax: usize,
    /// Largest code length for exact searches.
    pub nmax: usize,
}

impl ReportConfig {
    pub const DEFAULT: ReportConfig = ReportConfig { kmax: 8, nmax: 8 };
    pub const TINY: ReportConfig = ReportConfig { kmax: 5, nmax: 6 };
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub suite: &'static str,
    pub id: String,
    pub claim: String,
    pub status: CheckStatus,
    pub checked: usize,
    pub inapplicable: usize,
    pub failures: usize,
    /// First failing instance, or a summary when everything passed.
    pub detail: String,
}

impl fmt::Display for ReportRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<9} {:<28} {:<12} checked={} inapplicable={} failures={}  {}",
            self.suite,
            self.id,
            self.status.as_str(),
            self.checked,
            self.inapplicable,
            self.failures,
            self.detail
        )
    }
}

struct Tally {
    suite: &'static str,
    id: String,
    claim: String,
    checked: usize,
    inapplicable: usize,
    failures: usize,
    unknown: usize,
    first_failure: Option<String>,
    note: String,
}

impl Tally {
    fn new(suite: &'static str, id: &str, claim: impl Into<String>) -> Self {
        Tally {
            suite,
            id: id.to_string(),
            claim: claim.into(),
            checked: 0,
            inapplicable: 0,
            failures: 0,
            unknown: 0,
            first_failure: None,
            note: String::new(),
        }
    }

    fn record(&mut self, status: CheckStatus, instance: impl FnOnce() -> String) {
        match status {
            CheckStatus::Pass => self.checked += 1,
            CheckStatus::Inapplicable => self.inapplicable += 1,
            CheckStatus::Unknown => self.unknown += 1,
            CheckStatus::Fail => {
                self.checked += 1;
                self.failures += 1;
                if self.first_failure.is_none() {
                    self.first_failure = Some(instance());
                }
            }
        }
    }

    fn check(&mut self, ok: bool, instance: impl FnOnce() -> String) {
        self.record(CheckStatus::from_bool(ok), instance);
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    fn finish(self) -> ReportRow {
        let status = if self.failures > 0 {
            CheckStatus::Fail
        } else if self.unknown > 0 {
            CheckStatus::Unknown
        } else if self.checked == 0 {
            CheckStatus::Inapplicable
        } else {
            CheckStatus::Pass
        };
        let detail = match self.first_failure {
            Some(w) => format!("first failure: {w}"),
            None if self.unknown > 0 => format!("{} instances hit a search cap {}", self.unknown, self.note),
            None => self.note,
        };
        ReportRow {
            suite: self.suite,
            id: self.id,
            claim: self.claim,
            status,
            checked: self.checked,
            inapplicable: self.inapplicable,
            failures: self.failures,
            detail: detail.trim().to_string(),
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &ReportConfig) -> Result<Vec<ReportRow>> {
    Ok(match suite {
        Suite::Metric => metric_suite(cfg),
        Suite::Locality => locality_suite(cfg)?,
        Suite::Bounds => bounds_suite(cfg)?,
        Suite::Encoders => encoders_suite(cfg)?,
        Suite::All => {
            let mut rows = metric_suite(cfg);
            rows.extend(locality_suite(cfg)?);
            rows.extend(bounds_suite(cfg)?);
            rows.extend(encoders_suite(cfg)?);
            rows
        }
    })
}

/// `w + Σ min(z_i, b - 1)` over the maximal cyclic runs of zeros of a
/// nonzero word with `w` ones.
pub fn b_weight_by_zero_runs(bits: u64, n: usize, b: usize) -> usize {
    let get = |i: usize| (bits >> (i % n)) & 1;
    let Some(start) = (0..n).find(|&i| get(i) == 1) else {
        return 0;
    };
    let mut total = 0;
    let mut run = 0;
    for step in 1..=n {
        if get(start + step) == 1 {
            total += 1 + run.min(b - 1);
            run = 0;
        } else {
            run += 1;
        }
    }
    total
}

fn metric_suite(cfg: &ReportConfig) -> Vec<ReportRow> {
    let nmax = cfg.nmax.min(10);
    let mut tri = Tally::new(
        "metric",
        "distance-trichotomy",
        "d_b = n if d_H > n-b+1; d_H+b-1 <= d_b <= min(n, b d_H) if 0 < d_H <= n-b+1; 0 if d_H = 0",
    );
    let mut runs = Tally::new("metric", "b-weight-zero-runs", "w_b(e) = w_H(e) + sum over zero runs of min(z, b-1)");
    let mut full = Tally::new("metric", "width-equals-length", "distinct words of length b are at b-distance b");
    for n in 1..=nmax {
        for b in 1..=n.min(4) {
            for e in 0..1u64 << n {
                let h = e.count_ones() as usize;
                let d = raw_b_weight(e, n as u32, b as u32) as usize;
                let ok = if h == 0 {
                    d == 0
                } else if h > n - b + 1 {
                    d == n
                } else {
                    h + b - 1 <= d && d <= n.min(b * h)
                };
                tri.check(ok, || format!("n={n} b={b} e={}", Word::from_raw(e, n)));
                runs.check(b_weight_by_zero_runs(e, n, b) == d, || {
                    format!("n={n} b={b} e={}", Word::from_raw(e, n))
                });
                if b == n && e != 0 {
                    full.check(d == b, || format!("b={b} e={}", Word::from_raw(e, n)));
                }
            }
        }
    }
    let note = format!("all differences for n <= {nmax}, b <= 4");
    vec![
        tri.note(note.clone()).finish(),
        runs.note(note).finish(),
        full.finish(),
    ]
}

fn locality_suite(cfg: &ReportConfig) -> Result<Vec<ReportRow>> {
    let kmax = cfg.kmax.min(10);
    let mut rows = Vec::new();

    let mut table = Tally::new("locality", "weight-ball-table", "|B_wH(000111,2)|=5, |B_wH(100000,2)|=4, |B_wH(111111,2)|=3");
    let f = FunctionTable::hamming_weight(6)?;
    for (center, expect) in [("000111", 5), ("100000", 4), ("111111", 3)] {
        let u: Word = center.parse()?;
        let got = functions::function_ball(&f, &u, 2, 1)?.len();
        table.check(got == expect, || format!("{center}: {got} != {expect}"));
    }
    rows.push(table.finish());

    let mut maxball = Tally::new("locality", "weight-ball-max", "max_u |B_wH(u,rho)| = 2rho+1 when 2rho <= k");
    for k in 1..=kmax {
        let f = FunctionTable::hamming_weight(k)?;
        for rho in 1..=4.min(k / 2) {
            let ls = functions::lambda_s(&f, rho, 1)?.lambda_s;
            maxball.check(ls == 2 * rho + 1, || format!("k={k} rho={rho}: {ls}"));
        }
    }
    rows.push(maxball.note(format!("k <= {kmax}, rho <= 4")).finish());

    let mut tallies: Vec<Tally> = Vec::new();
    for k in 1..=kmax.min(8) {
        for b in 1..=3.min(k) {
            for rho in 0..=4 {
                for t in 1..=4 {
                    let wd = WeightDistribution::new(t, b, k)?;
                    let f = functions::make_weight_distribution(&wd)?;
                    let report = functions::check_locality_theorems(&f, rho, b, Some(&wd))?;
                    for c in report.checks {
                        let pos = match tallies.iter().position(|x| x.id == c.id) {
                            Some(p) => p,
                            None => {
                                tallies.push(Tally::new("locality", c.id, c.claim.clone()));
                                tallies.len() - 1
                            }
                        };
                        tallies[pos].record(c.status, || {
                            format!("Delta k={k} b={b} rho={rho} T={t}: {} ({})", c.claim, c.detail)
                        });
                    }
                }
            }
        }
    }
    rows.extend(
        tallies
            .into_iter()
            .map(|t| t.note(format!("Delta_T^b with k <= {}, b <= 3, rho <= 4, T <= 4", kmax.min(8))).finish()),
    );
    Ok(rows)
}

fn bounds_suite(cfg: &ReportConfig) -> Result<Vec<ReportRow>> {
    let nmax = cfg.nmax;
    let mut rows = Vec::new();

    let mut power = Tally::new("bounds", "power-repetition-exact", "N_b(2^b, 2t) = 2t, certified by the power-repetition code");
    for (b, t) in [(1, 1), (1, 2), (2, 2)] {
        if 2 * t > nmax {
            power.record(CheckStatus::Unknown, String::new);
            continue;
        }
        let code = codes::power_repetition_code(b, t)?;
        let found = codes::exact_min_length(1 << b, 2 * t, b, nmax)?;
        let ok = code.min_distance() == Some(2 * t) && code.n() == 2 * t && found.value == Some(2 * t);
        power.check(ok, || format!("b={b} t={t}: search {:?}", found.value));
    }
    rows.push(power.note("(b,t) in {(1,1),(1,2),(2,2)}").finish());

    let mut stair = Tally::new("bounds", "staircase-distance", "staircase_code(lambda,t) has minimum distance exactly 2t");
    for lambda in 2..=6 {
        for t in 1..=3 {
            let code = codes::staircase_code(lambda, t)?;
            stair.check(code.min_distance() == Some(2 * t), || format!("lambda={lambda} t={t}"));
        }
    }
    rows.push(stair.note("lambda <= 6, t <= 3").finish());

    let mut plotkin = Tally::new("bounds", "plotkin-consistency", "A_b(n,d) <= floor(d / (d - (1-2^-b) n))");
    for n in 1..=nmax.min(8) {
        for b in 1..=3.min(n) {
            for d in 1..=n {
                match codes::plotkin_bound_b(n, d, b) {
                    Ok(bound) => {
                        let (size, _) = codes::max_code_size(n, d, b)?;
                        plotkin.check(size <= bound, || format!("n={n} d={d} b={b}: {size} > {bound}"));
                    }
                    Err(e) if e.is_hypothesis() => plotkin.record(CheckStatus::Inapplicable, String::new),
                    Err(e) => return Err(e),
                }
            }
        }
    }
    rows.push(plotkin.note(format!("n <= {}, b <= 3", nmax.min(8))).finish());

    let mut nbnh = Tally::new("bounds", "b-symbol-vs-hamming-length", "N_b(lambda,2t) <= N_H(lambda,2t-b+1)");
    for lambda in [3, 4] {
        for t in [1, 2] {
            let r = codes::nb_le_nh_check(lambda, t, 2, nmax)?;
            nbnh.record(r.status, || format!("lambda={lambda} t={t} b=2: {}", r.detail));
        }
    }
    rows.push(nbnh.note("lambda in {3,4}, t in {1,2}, b=2").finish());

    let mut plower = Tally::new(
        "bounds",
        "weight-optimality-plotkin",
        "w_H on F_2^2, t=1: generalized Plotkin ceiling 3 <= N(D_f) = 3",
    );
    let f = FunctionTable::hamming_weight(2)?;
    let msgs: Vec<Word> = ["10", "00", "11"].iter().map(|s| s.parse()).collect::<Result<_>>()?;
    let demands = codes::requirement_matrix(&f, 1, 1, Variant::Second, &msgs)?;
    let lower = codes::generalized_plotkin_lower(&demands)?;
    let exact = codes::exact_min_length_irregular(&demands, 1, nmax)?;
    plower.check(lower.ceiling == 3 && exact.value == Some(3), || {
        format!("ceiling={} exact={:?}", lower.ceiling, exact.value)
    });
    rows.push(plower.finish());
    Ok(rows)
}

/// Small functions for the encoder scans: Hamming weight, every
/// `Δ_T^b` with `T <= 4`, and a few seeded random tables.
fn encoder_instances(k: usize) -> Result<Vec<(String, FunctionTable)>> {
    let mut out = vec![(format!("w_H k={k}"), FunctionTable::hamming_weight(k)?)];
    for b in 1..=3.min(k) {
        for t in 1..=4 {
            let wd = WeightDistribution::new(t, b, k)?;
            out.push((format!("Delta k={k} T={t} b={b}"), functions::make_weight_distribution(&wd)?));
        }
    }
    for seed in 0..3 {
        out.push((format!("random k={k} seed={seed}"), FunctionTable::random(k, 3, seed)?));
    }
    Ok(out)
}

fn encoders_suite(cfg: &ReportConfig) -> Result<Vec<ReportRow>> {
    let kmax = cfg.kmax.min(6);
    let mut rows = Vec::new();

    let mut patterns = Tally::new("encoders", "lambda4-pattern-distance", "truncated patterns differ in >= 2t-(b-1) places");
    for t in 1..=4 {
        for b in 1..=3 * t {
            let (_, p) = encoders::lambda4_parities(t, b)?;
            let ok = (0..4).all(|i| {
                (0..i).all(|j| (p[i] ^ p[j]).count_ones() as i64 >= 2 * t as i64 - (b as i64 - 1))
            });
            patterns.check(ok, || format!("t={t} b={b}"));
        }
    }
    rows.push(patterns.note("t <= 4, b <= 3t").finish());

    let mut lambda4 = Tally::new("encoders", "lambda4-verified", "encoder_lambda4 passes verification with r = 3t-b+1");
    let mut coloring = Tally::new("encoders", "coloring-within-locality", "exact conflict coloring uses <= lambda_s colors");
    for k in 1..=kmax {
        for (name, f) in encoder_instances(k)? {
            for t in 1..=2 {
                for b in 1..=3.min(k) {
                    let c = encoders::conflict_coloring(&f, 2 * t, b, Strategy::Exact)?;
                    if c.timed_out {
                        coloring.record(CheckStatus::Unknown, String::new);
                    } else {
                        coloring.check(c.used <= c.lambda_s, || {
                            format!("{name} rho={} b={b}: {} colors > lambda_s={}", 2 * t, c.used, c.lambda_s)
                        });
                    }
                    if c.lambda_s > 4 {
                        lambda4.record(CheckStatus::Inapplicable, String::new);
                        continue;
                    }
                    let s = encoders::encoder_lambda4(&f, t, b)?;
                    let v = encoders::verify_fcbsc(&s, &f)?;
                    let r = (3 * t + 1).saturating_sub(b);
                    lambda4.check(v.pass && s.r() == r, || format!("{name} t={t} b={b}: {v:?}"));
                }
            }
        }
    }
    rows.push(lambda4.note(format!("k <= {kmax}, t <= 2, b <= 3")).finish());
    rows.push(coloring.finish());

    let mut delta = Tally::new("encoders", "delta-parity-verified", "encoder_delta_parity passes verification with r = 2t-b+1");
    let kd = cfg.kmax.min(8);
    for k in 1..=kd {
        for t in 1..=2 {
            for b in 1..=3.min(k) {
                for threshold in 2 * t + 1..=4 * t {
                    let s = encoders::encoder_delta_parity(threshold, t, b, k)?;
                    let f = functions::make_weight_distribution(&WeightDistribution::new(threshold, b, k)?)?;
                    let v = encoders::verify_fcbsc(&s, &f)?;
                    let r = (2 * t + 1).saturating_sub(b);
                    delta.check(v.pass && s.r() == r, || format!("k={k} t={t} b={b} T={threshold}"));
                }
            }
        }
    }
    rows.push(delta.note(format!("k <= {kd}, t <= 2, b <= 3, 2t < T <= 4t")).finish());

    let mut search = Tally::new("encoders", "weight-redundancy-exact", "w_H on F_2^2, t=1, b=1: optimal redundancy 3");
    let f = FunctionTable::hamming_weight(2)?;
    let res = encoders::optimal_redundancy_search(&f, 1, 1, 8)?;
    search.check(res.value == Some(3), || format!("{:?}", res.value));
    rows.push(search.finish());

    let mut rec = Tally::new("encoders", "width-recurrence", "optimal redundancy at width b+1 <= at width b");
    for k in 2..=kmax.min(4) {
        for seed in 0..4 {
            let f = FunctionTable::random(k, 3, seed)?;
            let r1 = encoders::optimal_redundancy_search(&f, 1, 1, 8)?;
            let r2 = encoders::optimal_redundancy_search(&f, 1, 2, 8)?;
            match (r1.value, r2.value) {
                (Some(a), Some(c)) => rec.check(c <= a, || format!("k={k} seed={seed}: b=1 {a}, b=2 {c}")),
                _ => rec.record(CheckStatus::Unknown, String::new),
            }
        }
    }
    rows.push(rec.note("seeded random functions, t=1").finish());

    let mut generic = Tally::new("encoders", "staircase-generic-verified", "encoder_generic with staircase_code(lambda,t) gives r = lambda t");
    for k in 2..=kmax.min(5) {
        for (name, f) in encoder_instances(k)? {
            for t in 1..=2 {
                let ls = functions::lambda_s(&f, 2 * t, 1)?.lambda_s;
                if ls < 2 {
                    generic.record(CheckStatus::Inapplicable, String::new);
                    continue;
                }
                let code = codes::staircase_code(ls, t)?;
                match encoders::encoder_generic(&f, t, 1, &code) {
                    Ok(s) => {
                        let v = encoders::verify_fcbsc(&s, &f)?;
                        generic.check(v.pass && s.r() == ls * t, || format!("{name} t={t}"));
                    }
                    Err(Error::CodeTooSmall { have, need }) => {
                        generic.check(false, || format!("{name} t={t}: coloring needs {need} > {have}"))
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    }
    rows.push(generic.note("b=1").finish());
    Ok(rows)
}

/// Overall status of a report: `Fail` if any row failed, else `Unknown` if
/// any row hit a cap, else `Pass`.
pub fn overall(rows: &[ReportRow]) -> CheckStatus {
    if rows.iter().any(|r| r.status == CheckStatus::Fail) {
        CheckStatus::Fail
    } else if rows.iter().any(|r| r.status == CheckStatus::Unknown) {
        CheckStatus::Unknown
    } else {
        CheckStatus::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric;

    #[test]
    fn zero_run_formula_matches_windows() {
        for n in 1..=8 {
            for b in 1..=n {
                for e in 0..1u64 << n {
                    assert_eq!(
                        b_weight_by_zero_runs(e, n, b),
                        metric::raw_b_weight(e, n as u32, b as u32) as usize
                    );
                }
            }
        }
    }

    #[test]
    fn tiny_report_passes() {
        let rows = run_suite(Suite::All, &ReportConfig::TINY).unwrap();
        for r in &rows {
            assert!(r.status.is_ok(), "{r}");
        }
        assert_eq!(overall(&rows), CheckStatus::Pass);
    }
}
