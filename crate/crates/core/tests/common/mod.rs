#![allow(dead_code)]

use conesing_core::scalar::{int, rat};
use conesing_core::{CurveCouple, MarkedPoint, QDivisorP1, Rational};
use num_integer::Integer;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn pt(i: usize) -> MarkedPoint {
    match i {
        0 => MarkedPoint::at(0),
        1 => MarkedPoint::at(1),
        2 => MarkedPoint::Infinity,
        k => MarkedPoint::at(k as i64 - 1),
    }
}

/// `sum p_i/q_i [P_i] + shift [0]`, with the points taken from `0, 1, inf`.
pub fn couple(fracs: &[(i64, i64)], shift: i64) -> Option<CurveCouple> {
    let mut terms: Vec<(MarkedPoint, Rational)> =
        fracs.iter().enumerate().map(|(i, &(p, q))| (pt(i), rat(p, q))).collect();
    match terms.first_mut() {
        Some((_, c)) => *c += int(shift),
        None => terms.push((MarkedPoint::at(0), int(shift))),
    }
    CurveCouple::new(QDivisorP1::from_terms(terms).ok()?).ok()
}

pub fn is_log_fano_type(fracs: &[(i64, i64)]) -> bool {
    let s: Rational = fracs.iter().map(|&(_, q)| int(1) - rat(1, q)).sum();
    s < int(2)
}

/// A fixed spread of log Fano couples: integral, one, two and three
/// fractional points, several degrees each.
pub fn sample_couples() -> Vec<CurveCouple> {
    let mut types: Vec<Vec<(i64, i64)>> = vec![vec![]];
    for q in 2..=7 {
        for p in 1..q {
            if p.gcd(&q) == 1 {
                types.push(vec![(p, q)]);
            }
        }
    }
    for (q1, q2) in [(2, 2), (2, 3), (3, 3), (3, 5), (4, 6), (5, 7)] {
        for p1 in 1..q1 {
            for p2 in 1..q2 {
                if p1.gcd(&q1) == 1 && p2.gcd(&q2) == 1 {
                    types.push(vec![(p1, q1), (p2, q2)]);
                }
            }
        }
    }
    for (q1, q2, q3) in [(2, 2, 2), (2, 2, 5), (2, 3, 3), (2, 3, 4), (2, 3, 5)] {
        types.push(vec![(1, q1), (1, q2), (1, q3)]);
        types.push(vec![(1, q1), (q2 - 1, q2), (q3 - 1, q3)]);
    }
    let mut out = Vec::new();
    for t in types {
        for shift in -1..=3 {
            if let Some(c) = couple(&t, shift) {
                out.push(c);
            }
        }
    }
    out
}

/// Seeded log Fano couple with at most three fractional points.
pub fn random_couple(rng: &mut ChaCha8Rng, max_q: i64, max_degree: i64) -> CurveCouple {
    loop {
        let k = rng.gen_range(0..=3usize);
        let fracs: Vec<(i64, i64)> = (0..k)
            .map(|_| loop {
                let q = rng.gen_range(2..=max_q);
                let p = rng.gen_range(1..q);
                if p.gcd(&q) == 1 {
                    break (p, q);
                }
            })
            .collect();
        if !is_log_fano_type(&fracs) {
            continue;
        }
        let shift = rng.gen_range(-3..=max_degree);
        if let Some(c) = couple(&fracs, shift) {
            if c.degree() <= int(max_degree) {
                return c;
            }
        }
    }
}
