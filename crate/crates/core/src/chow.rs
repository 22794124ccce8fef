//! Chow ring of a split projective bundle `P(O(t_1) ⊕ … ⊕ O(t_r))` over `P^n`.
//!
//! Projectivization follows the quotient (hyperplane) convention, so the
//! tautological class `D` satisfies
//!
//! ```text
//! D^r - c_1 D^{r-1} + c_2 D^{r-2} - … + (-1)^r c_r = 0,   c_k = e_k(t) H^k,
//! ```
//!
//! together with `H^{n+1} = 0`. Every element is kept fully reduced: only
//! monomials `H^i D^j` with `i ≤ n` and `j < r` appear.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::picard::{ConstructionParams, DivisorClassY};

/// A split bundle on `P^n` given by the degrees of its line-bundle summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SplitBundleOnP {
    twists: Vec<i64>,
}

impl SplitBundleOnP {
    pub fn new(twists: Vec<i64>) -> Result<Self> {
        if twists.is_empty() {
            return Err(Error::Degenerate("a split bundle needs at least one summand".into()));
        }
        Ok(Self { twists })
    }

    /// `O ⊕ O(2m) ⊕ O(2m)`, whose projectivization is `Y`.
    pub fn defining_y(params: &ConstructionParams) -> Self {
        let t = params.fiber_twist();
        Self { twists: vec![0, t, t] }
    }

    /// `O ⊕ O(2m)`, whose projectivization is `G_i`.
    pub fn defining_g(params: &ConstructionParams) -> Self {
        Self { twists: vec![0, params.fiber_twist()] }
    }

    pub fn twists(&self) -> &[i64] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn degree(&self) -> i64 {
        self.twists.iter().sum()
    }

    /// Elementary symmetric polynomials `e_0, …, e_r` of the twists.
    pub fn elementary_symmetric(&self) -> Vec<BigInt> {
        let mut e = vec![BigInt::zero(); self.rank() + 1];
        e[0] = BigInt::one();
        for (seen, &t) in self.twists.iter().enumerate() {
            for k in (1..=seen + 1).rev() {
                let prev = e[k - 1].clone();
                e[k] += prev * t;
            }
        }
        e
    }
}

/// The ring `Z[H, D] / (H^{n+1}, Grothendieck relation)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChowRing {
    base_dim: u32,
    bundle: SplitBundleOnP,
    // e_k(t) for k = 0..=r
    esym: Vec<BigInt>,
}

impl ChowRing {
    pub fn new(base_dim: u32, bundle: SplitBundleOnP) -> Self {
        let esym = bundle.elementary_symmetric();
        Self { base_dim, bundle, esym }
    }

    pub fn of_y(params: &ConstructionParams) -> Self {
        Self::new(params.n_base(), SplitBundleOnP::defining_y(params))
    }

    pub fn of_g(params: &ConstructionParams) -> Self {
        Self::new(params.n_base(), SplitBundleOnP::defining_g(params))
    }

    pub fn base_dim(&self) -> u32 {
        self.base_dim
    }

    pub fn bundle(&self) -> &SplitBundleOnP {
        &self.bundle
    }

    fn rank(&self) -> u32 {
        self.bundle.rank() as u32
    }

    /// Dimension of the total space, `n + r - 1`.
    pub fn dim(&self) -> u32 {
        self.base_dim + self.rank() - 1
    }

    pub fn zero(&self) -> ChowElement {
        ChowElement { ring: self.clone(), coeffs: BTreeMap::new() }
    }

    pub fn constant(&self, c: i64) -> ChowElement {
        self.monomial_scaled(0, 0, BigInt::from(c))
    }

    pub fn h(&self) -> ChowElement {
        self.monomial(1, 0)
    }

    pub fn d(&self) -> ChowElement {
        self.monomial(0, 1)
    }

    /// `a·D + b·H`.
    pub fn divisor(&self, class: DivisorClassY) -> ChowElement {
        let mut e = self.monomial_scaled(0, 1, BigInt::from(class.a));
        e.add_term(1, 0, BigInt::from(class.b));
        e.reduce();
        e
    }

    /// The reduced form of `H^i D^j`.
    pub fn monomial(&self, i: u32, j: u32) -> ChowElement {
        self.monomial_scaled(i, j, BigInt::one())
    }

    fn monomial_scaled(&self, i: u32, j: u32, c: BigInt) -> ChowElement {
        let mut e = self.zero();
        e.add_term(i, j, c);
        e.reduce();
        e
    }

    /// Chern classes `c_0, …, c_r` of the bundle, `c_k = e_k·H^k`.
    pub fn chern(&self) -> Vec<ChowElement> {
        self.esym
            .iter()
            .enumerate()
            .map(|(k, e)| self.monomial_scaled(k as u32, 0, e.clone()))
            .collect()
    }

    /// Right-hand side of `D^r = c_1 D^{r-1} - c_2 D^{r-2} + …`, fully reduced.
    pub fn grothendieck_relation(&self) -> ChowElement {
        let mut e = self.zero();
        for (i, j, c) in self.relation_terms() {
            e.add_term(i, j, c);
        }
        e.reduce();
        e
    }

    // (H-exponent, D-exponent, coefficient) of the D^r substitution.
    fn relation_terms(&self) -> impl Iterator<Item = (u32, u32, BigInt)> + '_ {
        let r = self.rank();
        (1..=r).filter_map(move |k| {
            let e = &self.esym[k as usize];
            if e.is_zero() {
                return None;
            }
            let c = if k % 2 == 1 { e.clone() } else { -e.clone() };
            Some((k, r - k, c))
        })
    }
}

/// A fully reduced element of a [`ChowRing`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChowElement {
    ring: ChowRing,
    coeffs: BTreeMap<(u32, u32), BigInt>,
}

impl ChowElement {
    pub fn ring(&self) -> &ChowRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `H^i D^j` in the reduced form.
    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.coeffs.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Terms `(i, j, coefficient)` in lexicographic `(i, j)` order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &BigInt)> {
        self.coeffs.iter().map(|(&(i, j), c)| (i, j, c))
    }

    fn add_term(&mut self, i: u32, j: u32, c: BigInt) {
        if c.is_zero() || i > self.ring.base_dim {
            return;
        }
        let slot = self.coeffs.entry((i, j)).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    // Rewrite the highest D-power first; each pass strictly lowers the maximal
    // D-exponent, and H-powers beyond the base dimension are dropped on insert.
    fn reduce(&mut self) {
        let r = self.ring.rank();
        loop {
            let top = self.coeffs.keys().map(|&(_, j)| j).max().unwrap_or(0);
            if top < r {
                return;
            }
            let hits: Vec<_> = self
                .coeffs
                .iter()
                .filter(|(&(_, j), _)| j == top)
                .map(|(&k, c)| (k, c.clone()))
                .collect();
            let subst: Vec<_> = self.ring.relation_terms().collect();
            for ((i, j), c) in hits {
                self.coeffs.remove(&(i, j));
                for (di, dj, rc) in &subst {
                    self.add_term(i + di, j - r + dj, &c * rc);
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.coeffs {
            out.add_term(i, j, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.values_mut().for_each(|c| *c = -c.clone());
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = self.ring.zero();
        for (&(i, j), c) in &self.coeffs {
            out.add_term(i, j, c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.ring.zero();
        for (&(i1, j1), c1) in &self.coeffs {
            for (&(i2, j2), c2) in &other.coeffs {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out.reduce();
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = self.ring.constant(1);
        for _ in 0..k {
            out = out.mul(self).expect("same ring");
        }
        out
    }

    /// The degree map: coefficient of `H^n D^{r-1}`, defined on elements that
    /// are homogeneous of top degree (the zero element is allowed).
    pub fn degree(&self) -> Result<BigInt> {
        let top = self.ring.dim();
        if let Some(&(i, j)) = self.coeffs.keys().find(|&&(i, j)| i + j != top) {
            return Err(Error::NotTopDegree { expected: top, found: i + j });
        }
        Ok(self.coeff(self.ring.base_dim, self.ring.rank() - 1))
    }
}

impl fmt::Display for ChowElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (n, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            match (n, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            write!(f, "{}·H^{}·D^{}", c.abs(), i, j)?;
        }
        Ok(())
    }
}
