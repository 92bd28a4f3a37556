//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the library's metric or search code.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// Number of cyclic windows `i..i+b` (mod n) holding at least one set bit.
pub fn b_weight(bits: u64, n: usize, b: usize) -> usize {
    (0..n)
        .filter(|&i| (0..b).any(|j| (bits >> ((i + j) % n)) & 1 == 1))
        .count()
}

pub fn hamming(bits: u64) -> usize {
    bits.count_ones() as usize
}

/// Read vector as strings, coordinate 0 first in each window.
pub fn read_vector(bits: u64, n: usize, b: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            (0..b)
                .map(|j| if (bits >> ((i + j) % n)) & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect()
}

/// Counts differing windows between two read vectors.
pub fn b_distance_by_windows(x: u64, y: u64, n: usize, b: usize) -> usize {
    read_vector(x, n, b)
        .iter()
        .zip(read_vector(y, n, b))
        .filter(|(a, c)| **a != *c)
        .count()
}

/// `labels[u]` is `f` at the word with integer value `u`.
pub fn function_ball(labels: &[u32], k: usize, u: u64, rho: usize, b: usize) -> BTreeSet<u32> {
    (0..1u64 << k)
        .filter(|&v| b_weight(u ^ v, k, b) <= rho)
        .map(|v| labels[v as usize])
        .collect()
}

pub fn lambda_s(labels: &[u32], k: usize, rho: usize, b: usize) -> usize {
    (0..1u64 << k)
        .map(|u| function_ball(labels, k, u, rho, b).len())
        .max()
        .unwrap_or(0)
}

/// Every pair with differing labels is encoded at b-distance `>= 2t + 1`.
pub fn is_fcbsc(labels: &[u32], k: usize, r: usize, parity: &[u64], t: usize, b: usize) -> bool {
    let n = k + r;
    let enc = |u: u64| u | (parity[u as usize] << k);
    (0..1u64 << k).all(|u| {
        (u + 1..1u64 << k)
            .filter(|&v| labels[u as usize] != labels[v as usize])
            .all(|v| b_weight(enc(u) ^ enc(v), n, b) > 2 * t)
    })
}

/// `colors[u] != colors[v]` whenever `d_b(u,v) <= rho` and labels differ.
pub fn is_proper_coloring(labels: &[u32], k: usize, rho: usize, b: usize, colors: &[u32]) -> bool {
    (0..1u64 << k).all(|u| {
        (u + 1..1u64 << k).all(|v| {
            labels[u as usize] == labels[v as usize]
                || b_weight(u ^ v, k, b) > rho
                || colors[u as usize] != colors[v as usize]
        })
    })
}

pub fn min_b_distance(words: &[u64], n: usize, b: usize) -> Option<usize> {
    let mut best = None;
    for i in 0..words.len() {
        for j in 0..i {
            let d = b_weight(words[i] ^ words[j], n, b);
            best = Some(best.map_or(d, |x: usize| x.min(d)));
        }
    }
    best
}

/// Largest set of length-`n` words with pairwise b-distance `>= d`, by plain
/// recursive inclusion/exclusion over all words in increasing order.
pub fn max_code_size(n: usize, d: usize, b: usize) -> usize {
    fn grow(cands: &[u64], chosen: usize, n: usize, d: usize, b: usize, best: &mut usize) {
        if chosen + cands.len() <= *best {
            return;
        }
        match cands.split_first() {
            None => *best = (*best).max(chosen),
            Some((&x, rest)) => {
                let keep: Vec<u64> = rest.iter().copied().filter(|&y| b_weight(x ^ y, n, b) >= d).collect();
                grow(&keep, chosen + 1, n, d, b, best);
                grow(rest, chosen, n, d, b, best);
            }
        }
    }
    let all: Vec<u64> = (0..1u64 << n).collect();
    let mut best = 0;
    grow(&all, 0, n, d, b, &mut best);
    best
}

/// True when some `m` words of length `n` have pairwise b-distance `>= d`.
pub fn code_exists(n: usize, m: usize, d: usize, b: usize) -> bool {
    fn grow(cands: &[u64], need: usize, n: usize, d: usize, b: usize) -> bool {
        if need == 0 {
            return true;
        }
        if cands.len() < need {
            return false;
        }
        cands.iter().enumerate().any(|(i, &x)| {
            let keep: Vec<u64> = cands[i + 1..].iter().copied().filter(|&y| b_weight(x ^ y, n, b) >= d).collect();
            grow(&keep, need - 1, n, d, b)
        })
    }
    // Translation invariance: some code contains the zero word.
    let rest: Vec<u64> = (1..1u64 << n).filter(|&y| b_weight(y, n, b) >= d).collect();
    m == 0 || grow(&rest, m - 1, n, d, b)
}

/// Every labelling of `0..size` up to renaming, as restricted growth strings.
pub fn set_partitions(size: usize) -> Vec<Vec<u32>> {
    fn rec(cur: &mut Vec<u32>, max: u32, size: usize, out: &mut Vec<Vec<u32>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            cur.push(c);
            rec(cur, max.max(c), size, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if size > 0 {
        let mut cur = vec![0];
        rec(&mut cur, 0, size, &mut out);
    }
    out
}
