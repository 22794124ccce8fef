//! The `Z²`-graded Cox ring of `Y`.
//!
//! Coordinates are laid out as `[x_0, …, x_{3m}, y_0, y_1, y_2]` with degrees
//! `x_i ↦ H = (0, 1)`, `y_0 ↦ D = (1, 0)` and `y_1, y_2 ↦ D - 2mH = (1, -2m)`.
//! The section `V` is `{y_1 = y_2 = 0}`; the irrelevant loci are `{x = 0}` and
//! `{y = 0}`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::picard::{ConstructionParams, DivisorClassY};
use crate::poly::{Exponents, Poly};

/// Default bound `c` for random coefficients drawn from `[-c, c] \ {0}`.
pub const DEFAULT_COEFF_RANGE: i64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoxGrading {
    params: ConstructionParams,
}

impl CoxGrading {
    pub fn new(params: &ConstructionParams) -> Self {
        Self { params: *params }
    }

    pub fn params(&self) -> &ConstructionParams {
        &self.params
    }

    pub fn n_x(&self) -> usize {
        self.params.n_x_vars()
    }

    pub fn nvars(&self) -> usize {
        self.n_x() + 3
    }

    pub fn x(&self, i: usize) -> usize {
        assert!(i < self.n_x());
        i
    }

    /// Index of `y_k`, `k ∈ {0, 1, 2}`.
    pub fn y(&self, k: usize) -> usize {
        assert!(k < 3);
        self.n_x() + k
    }

    pub fn var_name(&self, v: usize) -> String {
        if v < self.n_x() {
            format!("x{v}")
        } else {
            format!("y{}", v - self.n_x())
        }
    }

    pub fn var_degree(&self, v: usize) -> DivisorClassY {
        match v.checked_sub(self.n_x()) {
            None => DivisorClassY::H,
            Some(0) => DivisorClassY::D,
            Some(_) => DivisorClassY::new(1, -self.params.fiber_twist()),
        }
    }

    pub fn degree_of(&self, exps: &[u32]) -> DivisorClassY {
        exps.iter()
            .enumerate()
            .map(|(v, &k)| self.var_degree(v).scale(i64::from(k)))
            .sum()
    }

    /// Degrees of all Cox generators, with multiplicity.
    pub fn generator_degrees(&self) -> Vec<DivisorClassY> {
        (0..self.nvars()).map(|v| self.var_degree(v)).collect()
    }

    /// Every monomial of degree `cls`, in canonical (lexicographic) order.
    pub fn monomials(&self, cls: DivisorClassY) -> Vec<Exponents> {
        let mut out = Vec::new();
        for (k0, k1, k2, d) in y_patterns(cls, &self.params) {
            let mut tail = vec![0; self.n_x()];
            compositions(d, 0, &mut tail, &mut |x| {
                let mut e = x.to_vec();
                e.extend([k0, k1, k2]);
                out.push(e);
            });
        }
        out.sort();
        out
    }
}

/// Admissible `(k0, k1, k2, x-degree)` for monomials of degree `cls`.
fn y_patterns(cls: DivisorClassY, params: &ConstructionParams) -> Vec<(u32, u32, u32, u32)> {
    let mut out = Vec::new();
    if cls.a < 0 {
        return out;
    }
    let a = cls.a as u32;
    for k1 in 0..=a {
        for k2 in 0..=a - k1 {
            let d = cls.b + params.fiber_twist() * i64::from(k1 + k2);
            if d >= 0 {
                out.push((a - k1 - k2, k1, k2, d as u32));
            }
        }
    }
    out
}

fn compositions(total: u32, pos: usize, buf: &mut [u32], emit: &mut impl FnMut(&[u32])) {
    if pos + 1 == buf.len() {
        buf[pos] = total;
        emit(buf);
        buf[pos] = 0;
        return;
    }
    for k in (0..=total).rev() {
        buf[pos] = k;
        compositions(total - k, pos + 1, buf, emit);
    }
    buf[pos] = 0;
}

/// `h⁰(Y, O(cls))` as a monomial count:
/// `Σ_k (k + 1)·C(b + 2mk + 3m, 3m)` over `0 ≤ k ≤ a` with `b + 2mk ≥ 0`,
/// where `k = k1 + k2` and `k + 1` counts the splittings of `k`.
pub fn count_sections(cls: DivisorClassY, params: &ConstructionParams) -> BigUint {
    if cls.a < 0 {
        return BigUint::zero();
    }
    let n = u64::from(params.n_base());
    (0..=cls.a)
        .filter_map(|k| {
            let d = cls.b + params.fiber_twist() * k;
            (d >= 0).then(|| BigUint::from(k as u64 + 1) * binomial(BigUint::from(d as u64 + n), BigUint::from(n)))
        })
        .sum()
}

/// `a ≥ 0` and `b + 2m·a ≥ 0`.
pub fn is_effective(cls: DivisorClassY, params: &ConstructionParams) -> bool {
    cls.a >= 0 && cls.b + params.fiber_twist() * cls.a >= 0
}

/// Collapsed symbols used for the base-locus computation. All x-variables act
/// symmetrically, so "X" stands for the whole block `{x_0, …, x_{3m}}`.
const SYM_X: u64 = 1;
const SYM_Y0: u64 = 1 << 1;
const SYM_Y1: u64 = 1 << 2;
const SYM_Y2: u64 = 1 << 3;
const SYM_ALL_Y: u64 = SYM_Y0 | SYM_Y1 | SYM_Y2;

fn symbol_names(mask: u64) -> Vec<String> {
    [(SYM_X, "x*"), (SYM_Y0, "y0"), (SYM_Y1, "y1"), (SYM_Y2, "y2")]
        .iter()
        .filter(|(bit, _)| mask & bit != 0)
        .map(|(_, n)| n.to_string())
        .collect()
}

/// All inclusion-minimal sets of elements meeting every input set.
///
/// Sets are bitmasks over a universe of at most 64 elements. Branches on the
/// elements of the first set not yet hit, then discards non-minimal results.
pub fn minimal_hitting_sets(sets: &[u64]) -> Vec<u64> {
    fn go(sets: &[u64], chosen: u64, out: &mut Vec<u64>) {
        let Some(&unhit) = sets.iter().find(|&&s| s & chosen == 0) else {
            out.push(chosen);
            return;
        };
        let mut rest = unhit;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            go(sets, chosen | bit, out);
        }
    }
    if sets.contains(&0) {
        // the unit ideal: no prime contains it
        return Vec::new();
    }
    let mut found = Vec::new();
    go(sets, 0, &mut found);
    found.sort_unstable();
    found.dedup();
    let minimal: Vec<u64> = found
        .iter()
        .copied()
        .filter(|&s| !found.iter().any(|&t| t != s && t & s == t))
        .collect();
    minimal
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stratum {
    /// No base points.
    Empty,
    /// The section `{y_1 = y_2 = 0}`.
    V,
    /// The divisor `{y_0 = 0}`.
    Y0Divisor,
    /// The linear system is empty.
    Full,
    /// Any other coordinate subspace, by variable names.
    Coordinate(Vec<String>),
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stratum::Empty => write!(f, "EMPTY"),
            Stratum::V => write!(f, "V"),
            Stratum::Y0Divisor => write!(f, "Y0_DIVISOR"),
            Stratum::Full => write!(f, "FULL"),
            Stratum::Coordinate(vars) => write!(f, "{{{}=0}}", vars.join("=")),
        }
    }
}

impl Serialize for Stratum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseLocusResult {
    pub class: DivisorClassY,
    pub strata: BTreeSet<Stratum>,
    /// Minimal primes surviving the irrelevant-locus filter, as variable
    /// names (`x*` = every x-coordinate).
    pub raw_primes: Vec<Vec<String>>,
    #[serde(skip)]
    primes: Vec<u64>,
    #[serde(skip)]
    full: bool,
}

impl BaseLocusResult {
    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn is_empty_locus(&self) -> bool {
        !self.full && self.primes.is_empty()
    }

    pub fn is_exactly(&self, stratum: Stratum) -> bool {
        self.strata.len() == 1 && self.strata.contains(&stratum)
    }

    /// Set-theoretic containment of base loci.
    pub fn is_subset_of(&self, other: &Self) -> bool {
        if other.full {
            return true;
        }
        if self.full {
            return false;
        }
        // each component V(P) must lie in some V(Q), i.e. Q ⊆ P
        self.primes.iter().all(|&p| other.primes.iter().any(|&q| q & !p == 0))
    }

    /// Whether a Cox point lies in the base locus, by membership in one of
    /// the coordinate components.
    pub fn contains_point(&self, x_all_zero: bool, y: [bool; 3]) -> bool {
        if self.full {
            return true;
        }
        self.primes.iter().any(|&p| {
            (p & SYM_X == 0 || x_all_zero)
                && (p & SYM_Y0 == 0 || y[0])
                && (p & SYM_Y1 == 0 || y[1])
                && (p & SYM_Y2 == 0 || y[2])
        })
    }
}

/// Base locus of `|cls|` from the minimal primes of its monomial ideal.
pub fn base_locus(cls: DivisorClassY, params: &ConstructionParams) -> BaseLocusResult {
    if !is_effective(cls, params) {
        return BaseLocusResult {
            class: cls,
            strata: BTreeSet::from([Stratum::Full]),
            raw_primes: Vec::new(),
            primes: Vec::new(),
            full: true,
        };
    }
    let mut supports: Vec<u64> = y_patterns(cls, params)
        .into_iter()
        .map(|(k0, k1, k2, d)| {
            let mut s = 0;
            for (k, bit) in [(d, SYM_X), (k0, SYM_Y0), (k1, SYM_Y1), (k2, SYM_Y2)] {
                if k > 0 {
                    s |= bit;
                }
            }
            s
        })
        .collect();
    supports.sort_unstable();
    supports.dedup();

    let primes: Vec<u64> = minimal_hitting_sets(&supports)
        .into_iter()
        .filter(|&p| p & SYM_X == 0 && p & SYM_ALL_Y != SYM_ALL_Y)
        .collect();

    let strata = if primes.is_empty() {
        BTreeSet::from([Stratum::Empty])
    } else {
        primes
            .iter()
            .map(|&p| match p {
                _ if p == SYM_Y1 | SYM_Y2 => Stratum::V,
                SYM_Y0 => Stratum::Y0Divisor,
                _ => Stratum::Coordinate(symbol_names(p)),
            })
            .collect()
    };
    BaseLocusResult {
        class: cls,
        strata,
        raw_primes: primes.iter().map(|&p| symbol_names(p)).collect(),
        primes,
        full: false,
    }
}

/// Random integer in `[-range, range] \ {0}`.
pub fn random_coefficient(rng: &mut impl Rng, range: i64) -> BigInt {
    assert!(range >= 1, "coefficient range must be positive");
    let v = rng.gen_range(1..=range);
    BigInt::from(if rng.gen_bool(0.5) { v } else { -v })
}

/// A random section supported on the monomials of degree `cls` accepted by
/// `keep`, with coefficients drawn in canonical monomial order.
pub fn random_section_where(
    cls: DivisorClassY,
    params: &ConstructionParams,
    rng: &mut impl Rng,
    coeff_range: i64,
    keep: impl Fn(&[u32]) -> bool,
) -> Result<Poly<BigInt>> {
    if !is_effective(cls, params) {
        return Err(Error::IneffectiveClass(cls.to_string()));
    }
    let grading = CoxGrading::new(params);
    let terms: Vec<_> = grading
        .monomials(cls)
        .into_iter()
        .filter(|e| keep(e))
        .map(|e| {
            let c = random_coefficient(rng, coeff_range);
            (e, c)
        })
        .collect();
    Ok(Poly::from_terms(grading.nvars(), terms))
}

/// A general section of `O(cls)`: independent nonzero coefficients on every
/// monomial, deterministic in `seed`.
pub fn random_section(
    cls: DivisorClassY,
    params: &ConstructionParams,
    seed: u64,
    coeff_range: i64,
) -> Result<Poly<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_section_where(cls, params, &mut rng, coeff_range, |_| true)
}
