//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls the closed forms or the prime decomposition under test:
//! section counts come from enumerating exponent vectors, base-locus membership
//! from evaluating monomials at points.

#![allow(dead_code)]

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

/// `(k0, k1, k2, x-degree)` for every monomial shape of degree `(a, b)` on
/// `Y_m`, read off the generator degrees `x ↦ (0,1)`, `y0 ↦ (1,0)`,
/// `y1, y2 ↦ (1,-2m)`.
pub fn monomial_shapes(a: i64, b: i64, m: i64) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    if a < 0 {
        return out;
    }
    for k0 in 0..=a {
        for k1 in 0..=a - k0 {
            let k2 = a - k0 - k1;
            let d = b + 2 * m * (k1 + k2);
            if d >= 0 {
                out.push((k0 as u32, k1 as u32, k2 as u32, d as u32));
            }
        }
    }
    out
}

/// Number of exponent vectors of length `n` summing to `d`, by dynamic
/// programming over the variables.
pub fn count_exponent_vectors_dp(n: usize, d: u32) -> BigUint {
    if n == 0 {
        return if d == 0 { BigUint::one() } else { BigUint::zero() };
    }
    // one variable: exactly one way for every total
    let mut ways = vec![BigUint::one(); d as usize + 1];
    for _ in 1..n {
        // one more variable: prefix sums
        for k in 1..ways.len() {
            let prev = ways[k - 1].clone();
            ways[k] += prev;
        }
    }
    ways[d as usize].clone()
}

/// Explicit enumeration, for small cases.
pub fn count_exponent_vectors_explicit(n: usize, d: u32) -> u64 {
    fn go(left: usize, d: u32) -> u64 {
        if left == 1 {
            return 1;
        }
        (0..=d).map(|k| go(left - 1, d - k)).sum()
    }
    if n == 0 {
        return u64::from(d == 0);
    }
    go(n, d)
}

/// `h⁰(Y_m, O(aD + bH))` by counting monomials.
pub fn count_sections_oracle(a: i64, b: i64, m: i64) -> BigUint {
    let n_x = (3 * m + 1) as usize;
    monomial_shapes(a, b, m)
        .into_iter()
        .map(|(_, _, _, d)| {
            let dp = count_exponent_vectors_dp(n_x, d);
            if dp <= BigUint::from(20_000u32) {
                assert_eq!(dp, BigUint::from(count_exponent_vectors_explicit(n_x, d)));
            }
            dp
        })
        .sum()
}

/// A point of `Y_m` with some coordinates forced to zero.
#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub x: Vec<i64>,
    pub y: [i64; 3],
}

impl SamplePoint {
    pub fn random(rng: &mut impl Rng, m: i64) -> Self {
        let n_x = (3 * m + 1) as usize;
        loop {
            let x: Vec<i64> = (0..n_x).map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(1..=9) }).collect();
            let y = [0; 3].map(|_: i64| if rng.gen_bool(0.5) { 0 } else { rng.gen_range(-9..=9) });
            if x.iter().any(|&v| v != 0) && y.iter().any(|&v| v != 0) {
                return Self { x, y };
            }
        }
    }

    pub fn y_zero(&self) -> [bool; 3] {
        self.y.map(|v| v == 0)
    }
}

/// Whether every monomial of degree `(a, b)` vanishes at `p`.
pub fn all_monomials_vanish(a: i64, b: i64, m: i64, p: &SamplePoint) -> bool {
    let i = p.x.iter().position(|&v| v != 0).expect("admissible point");
    !monomial_shapes(a, b, m).into_iter().any(|(k0, k1, k2, d)| {
        let y = |v: i64, k: u32| v.pow(k);
        // x_i^d is a valid x-part and is nonzero at p
        let value = y(p.y[0], k0) * y(p.y[1], k1) * y(p.y[2], k2) * p.x[i].signum().pow(d);
        value != 0
    })
}
