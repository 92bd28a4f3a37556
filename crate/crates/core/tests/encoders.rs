mod common;

use fcbsc::codes;
use fcbsc::encoders::{self, EncodingScheme, Strategy};
use fcbsc::functions::{self, FunctionTable, WeightDistribution};
use fcbsc::Error;

fn random_pool(ks: std::ops::RangeInclusive<usize>, seeds: u64) -> Vec<FunctionTable> {
    let mut out = Vec::new();
    for k in ks {
        for labels in 2..=3 {
            for seed in 0..seeds {
                out.push(FunctionTable::random(k, labels, 77 * seed + k as u64).unwrap());
            }
        }
        out.push(FunctionTable::hamming_weight(k).unwrap());
    }
    out
}

/// Smallest `r` by trying every parity table, for very small `k` and `r`.
fn brute_force_redundancy(f: &FunctionTable, t: usize, b: usize, r_max: usize) -> Option<usize> {
    let k = f.k();
    let size = 1usize << k;
    (b.saturating_sub(k)..=r_max).find(|&r| {
        let q = 1u64 << r;
        let total = q.checked_pow(size as u32).expect("small search");
        (0..total).any(|code| {
            let parity: Vec<u64> = (0..size as u32).map(|i| (code / q.pow(i)) % q).collect();
            common::is_fcbsc(f.ids(), k, r, &parity, t, b)
        })
    })
}

#[test]
fn search_matches_brute_force_on_two_bit_messages() {
    for part in common::set_partitions(4) {
        let f = FunctionTable::from_labels(2, part.iter().map(u32::to_string).collect()).unwrap();
        for b in 1..=2 {
            let res = encoders::optimal_redundancy_search(&f, 1, b, 4).unwrap();
            assert_eq!(res.value, brute_force_redundancy(&f, 1, b, 4), "{part:?} b={b}");
        }
    }
}

#[test]
fn search_never_exceeds_constructions() {
    for f in random_pool(2..=4, 4) {
        let k = f.k();
        for b in 1..=2.min(k) {
            let t = 1;
            let best = encoders::optimal_redundancy_search(&f, t, b, 12).unwrap();
            let best_r = best.value.expect("within cap");
            let s = best.scheme.as_ref().unwrap();
            assert!(common::is_fcbsc(f.ids(), k, s.r(), s.raw_parity(), t, b));
            if functions::is_locally(&f, 4, 2 * t, b).unwrap() {
                let l4 = encoders::encoder_lambda4(&f, t, b).unwrap();
                assert!(best_r <= l4.r(), "lambda4 beat the search");
            }
            if b == 1 {
                let ls = functions::lambda_s(&f, 2 * t, 1).unwrap().lambda_s.max(2);
                let code = codes::staircase_code(ls, t).unwrap();
                let g = encoders::encoder_generic(&f, t, 1, &code).unwrap();
                assert!(best_r <= g.r(), "staircase beat the search");
            }
        }
    }
    for k in 2..=5 {
        for b in 1..=2 {
            for threshold in 3..=4 {
                let wd = WeightDistribution::new(threshold, b, k).unwrap();
                let f = functions::make_weight_distribution(&wd).unwrap();
                let best = encoders::optimal_redundancy_search(&f, 1, b, 12).unwrap().value.unwrap();
                let s = encoders::encoder_delta_parity(threshold, 1, b, k).unwrap();
                assert!(best <= s.r(), "k={k} b={b} T={threshold}");
            }
        }
    }
}

#[test]
fn search_result_shrinks_with_wider_reads() {
    for f in random_pool(2..=4, 5) {
        let k = f.k();
        let mut prev = None;
        for b in 1..=3.min(k) {
            let r = encoders::optimal_redundancy_search(&f, 1, b, 12).unwrap().value.unwrap();
            if let Some(p) = prev {
                assert!(r <= p, "k={k} b={b}: {r} > {p}");
            }
            prev = Some(r);
        }
    }
}

#[test]
fn redundancy_sandwich_for_power_of_two_locality() {
    // b | t and t > b - 1: 2(t - b + 1) <= r <= 2t for locally (2^b, 2t, b) f.
    let mut seen = 0;
    for (b, t) in [(1, 1), (1, 2), (2, 2)] {
        for f in random_pool(b.max(2)..=4, 6) {
            if !functions::is_locally(&f, 1 << b, 2 * t, b).unwrap() {
                continue;
            }
            let r = encoders::optimal_redundancy_search(&f, t, b, 12).unwrap().value.unwrap();
            assert!(2 * (t - b + 1) <= r && r <= 2 * t || f.is_constant(), "b={b} t={t}: r={r}");
            let code = codes::power_repetition_code(b, t).unwrap();
            let s = encoders::encoder_generic(&f, t, b, &code).unwrap();
            assert_eq!(s.r(), 2 * t);
            assert!(common::is_fcbsc(f.ids(), f.k(), s.r(), s.raw_parity(), t, b));
            seen += 1;
        }
    }
    assert!(seen >= 10, "only {seen} instances");
}

#[test]
fn four_color_encoder_with_wide_reads() {
    let mut seen = 0;
    for f in random_pool(4..=4, 20) {
        if !functions::is_locally(&f, 4, 4, 2).unwrap() {
            continue;
        }
        let s = encoders::encoder_lambda4(&f, 2, 2).unwrap();
        assert_eq!(s.r(), 5);
        assert!(common::is_fcbsc(f.ids(), 4, 5, s.raw_parity(), 2, 2));
        seen += 1;
    }
    assert!(seen > 0);
}

#[test]
fn exact_coloring_within_locality_on_all_small_functions() {
    for k in 1..=3 {
        for part in common::set_partitions(1 << k) {
            let f = FunctionTable::from_labels(k, part.iter().map(u32::to_string).collect()).unwrap();
            for b in 1..=k {
                for rho in 1..=k {
                    let c = encoders::conflict_coloring(&f, rho, b, Strategy::Exact).unwrap();
                    assert!(c.optimal);
                    assert!(c.used <= c.lambda_s, "{part:?} rho={rho} b={b}: {} > {}", c.used, c.lambda_s);
                    assert!(common::is_proper_coloring(f.ids(), k, rho, b, &c.colors));
                }
            }
        }
    }
}

#[test]
fn hypothesis_failures_are_reported() {
    let f = FunctionTable::hamming_weight(6).unwrap();
    let err = encoders::encoder_lambda4(&f, 1, 1).unwrap_err();
    assert!(err.is_hypothesis(), "{err}");
    let f = FunctionTable::hamming_weight(2).unwrap();
    assert!(encoders::encoder_lambda4(&f, 1, 3).unwrap_err().is_hypothesis());
    assert!(encoders::encoder_delta_parity(6, 1, 1, 4).unwrap_err().is_hypothesis());
    assert!(encoders::encoder_delta_parity(3, 1, 5, 4).unwrap_err().is_hypothesis());
    let f = FunctionTable::hamming_weight(4).unwrap();
    let code = codes::staircase_code(2, 1).unwrap();
    assert!(matches!(
        encoders::encoder_generic(&f, 1, 1, &code),
        Err(Error::CodeTooSmall { .. })
    ));
    assert!(matches!(
        EncodingScheme::new(2, 1, 1, 1, vec![0, 1, 2, 0], "x"),
        Err(Error::InvalidParameter(_))
    ));
    assert!(encoders::optimal_redundancy_search(&f, 1, 1, 40).unwrap_err().is_cap());
}

#[test]
fn wider_code_distance_is_rechecked_at_target_width() {
    // {0000, 1100} has Hamming distance 2 but 2-symbol distance 3.
    let code = fcbsc::Code::new(vec!["0000".parse().unwrap(), "1100".parse().unwrap()], 1).unwrap();
    let f = FunctionTable::from_fn(3, |u| u.get(0)).unwrap();
    let s = encoders::encoder_generic(&f, 1, 2, &code).unwrap();
    assert!(common::is_fcbsc(f.ids(), 3, 4, s.raw_parity(), 1, 2));
}
