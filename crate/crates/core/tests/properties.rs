mod common;

use fcbsc::encoders::{self, Strategy as Coloring};
use fcbsc::functions::{self, FunctionTable};
use fcbsc::metric::{self, Metric, Word};
use fcbsc::{io, Code};
use proptest::prelude::*;

fn word_pair(max_len: usize) -> impl Strategy<Value = (Word, Word, usize)> {
    (1..=max_len).prop_flat_map(|n| {
        let m = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        (any::<u64>(), any::<u64>(), 1..=n).prop_map(move |(x, y, b)| {
            (Word::new(x & m, n).unwrap(), Word::new(y & m, n).unwrap(), b)
        })
    })
}

proptest! {
    #[test]
    fn b_distance_matches_read_vectors((x, y, b) in word_pair(20)) {
        let d = metric::b_distance(&x, &y, b).unwrap();
        prop_assert_eq!(d, common::b_distance_by_windows(x.index(), y.index(), x.len(), b));
        let rx = metric::read_vector(&x, b).unwrap();
        let strings: Vec<String> = rx.windows.iter().map(|w| w.to_string()).collect();
        prop_assert_eq!(strings, common::read_vector(x.index(), x.len(), b));
    }

    #[test]
    fn b_distance_is_a_translation_invariant_metric((x, y, b) in word_pair(64), z in any::<u64>()) {
        let n = x.len();
        let z = Word::new(if n == 64 { z } else { z & ((1 << n) - 1) }, n).unwrap();
        let dxy = metric::b_distance(&x, &y, b).unwrap();
        prop_assert_eq!(dxy, metric::b_distance(&y, &x, b).unwrap());
        prop_assert_eq!(dxy == 0, x == y);
        let dxz = metric::b_distance(&x, &z, b).unwrap();
        let dzy = metric::b_distance(&z, &y, b).unwrap();
        prop_assert!(dxy <= dxz + dzy);
        let shift = |w: &Word| w.xor(&z).unwrap();
        prop_assert_eq!(dxy, metric::b_distance(&shift(&x), &shift(&y), b).unwrap());
        prop_assert_eq!(dxy, metric::b_weight(&x.xor(&y).unwrap(), b).unwrap());
    }

    #[test]
    fn distance_relation_always_holds((x, y, b) in word_pair(64)) {
        let rel = metric::check_distance_relation(&x, &y, b).unwrap();
        prop_assert!(rel.pass);
        prop_assert!(rel.lower <= rel.d_b && rel.d_b <= rel.upper);
    }

    #[test]
    fn wider_reads_never_shrink_distance((x, y, b) in word_pair(30)) {
        prop_assume!(b < x.len());
        let d = metric::b_distance(&x, &y, b).unwrap();
        prop_assert!(metric::b_distance(&x, &y, b + 1).unwrap() >= d);
    }

    #[test]
    fn bitstring_round_trip((x, _y, _b) in word_pair(64)) {
        let s = x.to_string();
        prop_assert_eq!(s.len(), x.len());
        prop_assert_eq!(s.parse::<Word>().unwrap(), x);
    }

    #[test]
    fn ball_matches_enumeration(n in 1usize..=9, b in 1usize..=4, radius in 0usize..=6, c in any::<u64>()) {
        prop_assume!(b <= n);
        let center = Word::new(c & ((1 << n) - 1), n).unwrap();
        let ball = metric::ball(&center, radius, Metric::BSymbol(b)).unwrap();
        let expect: Vec<u64> = (0..1u64 << n)
            .filter(|&v| common::b_weight(v ^ center.index(), n, b) <= radius)
            .collect();
        let got: Vec<u64> = ball.members.iter().map(Word::index).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn locality_matches_brute_force(k in 1usize..=6, labels in 1usize..=4, seed in any::<u64>(), rho in 0usize..=4, b in 1usize..=3) {
        prop_assume!(b <= k);
        let f = FunctionTable::random(k, labels, seed).unwrap();
        let ls = functions::lambda_s(&f, rho, b).unwrap();
        prop_assert_eq!(ls.lambda_s, common::lambda_s(f.ids(), k, rho, b));
        prop_assert_eq!(functions::is_locally(&f, ls.lambda_s, rho, b).unwrap(), true);
        if ls.lambda_s > 1 {
            prop_assert_eq!(functions::is_locally(&f, ls.lambda_s - 1, rho, b).unwrap(), false);
        }
        let witness_ball = common::function_ball(f.ids(), k, ls.witness.index(), rho, b);
        prop_assert_eq!(witness_ball.len(), ls.lambda_s);
    }

    #[test]
    fn colorings_are_proper(k in 1usize..=6, labels in 1usize..=5, seed in any::<u64>(), rho in 1usize..=4, b in 1usize..=3) {
        prop_assume!(b <= k);
        let f = FunctionTable::random(k, labels, seed).unwrap();
        for strategy in [Coloring::Greedy, Coloring::Exact] {
            let c = encoders::conflict_coloring(&f, rho, b, strategy).unwrap();
            prop_assert!(common::is_proper_coloring(f.ids(), k, rho, b, &c.colors));
            prop_assert_eq!(c.used, *c.colors.iter().max().unwrap() as usize);
        }
    }

    #[test]
    fn verifier_agrees_with_brute_force(k in 1usize..=5, r in 0usize..=4, t in 1usize..=2, b in 1usize..=3, seed in any::<u64>()) {
        prop_assume!(b <= k + r);
        let f = FunctionTable::random(k, 3, seed).unwrap();
        let mut x = seed;
        let parity: Vec<u64> = (0..1u64 << k)
            .map(|_| {
                x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (x >> 33) & ((1 << r) - 1)
            })
            .collect();
        let scheme = encoders::EncodingScheme::new(k, r, t, b, parity.clone(), "test").unwrap();
        let v = encoders::verify_fcbsc(&scheme, &f).unwrap();
        prop_assert_eq!(v.pass, common::is_fcbsc(f.ids(), k, r, &parity, t, b));
        if let Some(w) = v.witness {
            prop_assert!(w.distance < w.required);
            prop_assert_ne!(f.id_at(w.u.index()), f.id_at(w.v.index()));
        }
    }

    #[test]
    fn table_files_round_trip(k in 1usize..=6, labels in 1usize..=5, seed in any::<u64>()) {
        let f = FunctionTable::random(k, labels, seed).unwrap();
        let json = io::table_to_json(&f);
        let back = io::table_from_json(&json).unwrap();
        prop_assert_eq!(io::table_to_json(&back), json);
        prop_assert_eq!(io::table_from_csv(&io::table_to_csv(&f)).unwrap(), f);
    }

    #[test]
    fn code_min_distance_matches(n in 2usize..=8, b in 1usize..=3, picks in proptest::collection::btree_set(0u64..256, 2..6)) {
        prop_assume!(b <= n);
        let words: Vec<Word> = picks.iter().map(|&x| Word::new(x & ((1 << n) - 1), n).unwrap()).collect();
        let mut uniq = words.clone();
        uniq.sort();
        uniq.dedup();
        prop_assume!(uniq.len() >= 2);
        let raw: Vec<u64> = uniq.iter().map(Word::index).collect();
        let code = Code::new(uniq, b).unwrap();
        prop_assert_eq!(code.min_distance(), common::min_b_distance(&raw, n, b));
    }
}
