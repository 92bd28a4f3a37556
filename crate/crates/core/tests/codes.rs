mod common;

use fcbsc::codes::{self, OrderMode, Variant};
use fcbsc::functions::FunctionTable;
use fcbsc::{Code, RequirementMatrix, Word};

fn words(raw: &[u64], n: usize) -> Vec<Word> {
    raw.iter().map(|&x| Word::new(x, n).unwrap()).collect()
}

#[test]
fn exact_min_length_matches_brute_force() {
    for b in 1..=2 {
        for m in 2..=5 {
            for d in 1..=4 {
                let res = codes::exact_min_length(m, d, b, 8).unwrap();
                let brute = (b..=8).find(|&n| common::code_exists(n, m, d, b));
                assert_eq!(res.value, brute, "M={m} D={d} b={b}");
                if let Some(n) = res.value {
                    let raw: Vec<u64> = res.witness.iter().map(Word::index).collect();
                    assert_eq!(raw.len(), m);
                    assert!(common::min_b_distance(&raw, n, b).unwrap() >= d);
                }
            }
        }
    }
}

#[test]
fn max_code_size_matches_brute_force() {
    for n in 1..=5 {
        for b in 1..=n.min(3) {
            for d in 1..=n {
                let (size, witness) = codes::max_code_size(n, d, b).unwrap();
                assert_eq!(size, common::max_code_size(n, d, b), "n={n} d={d} b={b}");
                let raw: Vec<u64> = witness.iter().map(Word::index).collect();
                assert!(common::min_b_distance(&raw, n, b).is_none_or(|x| x >= d));
            }
        }
    }
}

#[test]
fn irregular_search_meets_every_demand() {
    let f = FunctionTable::hamming_weight(3).unwrap();
    let msgs: Vec<Word> = Word::all(3, 24).unwrap().collect();
    for b in 1..=2 {
        for variant in [Variant::First, Variant::Second] {
            let demands = codes::requirement_matrix(&f, 1, b, variant, &msgs).unwrap();
            let res = codes::exact_min_length_irregular(&demands, b, 10).unwrap();
            let n = res.value.unwrap();
            if res.vacuous {
                assert!(demands.is_zero());
                continue;
            }
            for i in 0..demands.m() {
                for j in 0..i {
                    let d = common::b_weight(res.witness[i].index() ^ res.witness[j].index(), n, b);
                    assert!(d >= demands.get(i, j));
                }
            }
            if n > b {
                // One step shorter must be infeasible: rerun with a lower cap.
                let shorter = codes::exact_min_length_irregular(&demands, b, n - 1).unwrap();
                assert!(shorter.value.is_none());
            }
        }
    }
}

#[test]
fn zero_demands_are_vacuous() {
    let zero = RequirementMatrix::constant(3, 0).unwrap();
    let res = codes::exact_min_length_irregular(&zero, 2, 8).unwrap();
    assert_eq!(res.value, Some(0));
    assert!(res.vacuous);
}

#[test]
fn order_modes_differ() {
    let code = Code::new(words(&[0b0000, 0b0011, 0b1111], 4), 1).unwrap();
    let demands = RequirementMatrix::new(vec![vec![0, 4, 2], vec![4, 0, 2], vec![2, 2, 0]]).unwrap();
    assert!(!codes::is_bb_code(&code, &demands, OrderMode::GivenOrder).unwrap().holds);
    let any = codes::is_bb_code(&code, &demands, OrderMode::AnyOrder).unwrap();
    assert!(any.holds);
    let order = any.order.unwrap();
    assert_eq!((order[0], order[1]), (0, 2));
}

#[test]
fn generalized_plotkin_never_exceeds_exact_length() {
    for seed in 0..20 {
        let f = FunctionTable::random(3, 3, seed).unwrap();
        let msgs: Vec<Word> = Word::all(3, 24).unwrap().take(3 + (seed as usize % 3)).collect();
        let demands = codes::requirement_matrix(&f, 1, 1, Variant::Second, &msgs).unwrap();
        if demands.is_zero() {
            continue;
        }
        let exact = codes::exact_min_length_irregular(&demands, 1, 12).unwrap().value.unwrap();
        let lower = codes::generalized_plotkin_lower(&demands).unwrap();
        assert!(lower.ceiling as usize <= exact, "seed={seed}");
    }
}

#[test]
fn plotkin_refuses_outside_hypothesis() {
    assert!(codes::plotkin_bound_b(8, 2, 1).unwrap_err().is_hypothesis());
    assert_eq!(codes::plotkin_bound_b(4, 4, 2).unwrap(), 4);
    assert_eq!(codes::plotkin_bound_b(5, 5, 1).unwrap(), 2);
}

#[test]
fn power_repetition_requires_divisibility() {
    let err = codes::power_repetition_code(2, 1).unwrap_err();
    assert!(err.is_hypothesis());
    assert!(err.to_string().contains("divides 2t"));
    let code = codes::power_repetition_code(3, 3).unwrap();
    let raw: Vec<u64> = code.words().iter().map(Word::index).collect();
    assert_eq!(common::min_b_distance(&raw, 6, 3), Some(6));
}

#[test]
fn b_symbol_length_never_exceeds_hamming_length() {
    for lambda in 3..=4 {
        for t in 1..=2 {
            let r = codes::nb_le_nh_check(lambda, t, 2, 12).unwrap();
            assert!(r.status.is_ok(), "{}", r.detail);
        }
    }
    let r = codes::nb_le_nh_check(2, 1, 2, 12).unwrap();
    assert_eq!(r.status, fcbsc::CheckStatus::Inapplicable);
}
