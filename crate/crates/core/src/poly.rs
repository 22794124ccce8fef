//! Sparse multivariate polynomials over a generic [`Scalar`].
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so iteration (and
//! therefore serialization) follows ascending lexicographic order of the
//! exponent vectors. That order is the canonical monomial order used in reports.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<T> {
    nvars: usize,
    terms: BTreeMap<Exponents, T>,
}

impl<T: Scalar> Poly<T> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: T) -> Self {
        Self::monomial(vec![0; nvars], c)
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, T::one())
    }

    pub fn monomial(exps: Exponents, c: T) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, T)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &T)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> T {
        self.terms.get(exps).cloned().unwrap_or_else(T::zero)
    }

    pub fn add_term(&mut self, exps: Exponents, c: T) {
        assert_eq!(exps.len(), self.nvars, "exponent vector has wrong length");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        Self::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), c.clone() * k.clone())))
    }

    /// Maximal total degree over the variables selected by `mask`.
    pub fn degree_in(&self, mask: &[bool]) -> u32 {
        self.terms
            .keys()
            .map(|e| e.iter().zip(mask).filter(|(_, &m)| m).map(|(d, _)| d).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.degree_in(&vec![true; self.nvars])
    }

    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[var] -= 1;
            out.add_term(e2, c.clone() * T::from_int(i64::from(e[var])));
        }
        out
    }

    /// Substitutes a constant for one variable; the variable stays in the
    /// layout with exponent zero everywhere.
    pub fn substitute(&self, var: usize, value: &T) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = std::mem::take(&mut e2[var]);
            out.add_term(e2, c.clone() * pow(value, k));
        }
        out
    }

    /// Re-embeds into a layout with `nvars ≥ self.nvars()` variables; the new
    /// variables are appended at the end.
    pub fn extend_vars(&self, nvars: usize) -> Self {
        assert!(nvars >= self.nvars);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut e2 = e.clone();
            e2.resize(nvars, 0);
            (e2, c.clone())
        });
        Self::from_terms(nvars, terms)
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::from_terms(self.nvars, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }

    /// Evaluates at a point given in the same scalar type.
    pub fn eval(&self, point: &[T]) -> T {
        self.eval_with(point, |c| c.clone())
    }

    /// Evaluates at a point in another scalar type, mapping coefficients with
    /// `embed`.
    pub fn eval_with<U: Scalar>(&self, point: &[U], embed: impl Fn(&T) -> U) -> U {
        assert_eq!(point.len(), self.nvars, "point has wrong dimension");
        let powers = PowerTable::new(point, self.max_exponents());
        let mut acc = U::zero();
        for (e, c) in &self.terms {
            let mut t = embed(c);
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= powers.get(v, k);
                }
            }
            acc += &t;
        }
        acc
    }

    fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for e in self.terms.keys() {
            for (m, &k) in out.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        out
    }
}

impl<T: Scalar + Display> Poly<T> {
    /// `(coefficient, exponent vector)` pairs in canonical order.
    pub fn to_records(&self) -> Vec<(String, Exponents)> {
        self.terms.iter().map(|(e, c)| (c.to_string(), e.clone())).collect()
    }
}

pub(crate) fn pow<T: Scalar>(base: &T, k: u32) -> T {
    let mut out = T::one();
    for _ in 0..k {
        out = out * base.clone();
    }
    out
}

/// Cached powers `point[v]^k` for `1 ≤ k ≤ max[v]`.
pub(crate) struct PowerTable<U> {
    table: Vec<Vec<U>>,
}

impl<U: Scalar> PowerTable<U> {
    pub(crate) fn new(point: &[U], max: Vec<u32>) -> Self {
        let table = point
            .iter()
            .zip(max)
            .map(|(x, m)| {
                let mut row = Vec::with_capacity(m as usize + 1);
                row.push(U::one());
                for k in 1..=m as usize {
                    let next = row[k - 1].clone() * x.clone();
                    row.push(next);
                }
                row
            })
            .collect();
        Self { table }
    }

    pub(crate) fn get(&self, var: usize, k: u32) -> &U {
        &self.table[var][k as usize]
    }
}

impl<T: Scalar> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial layouts differ");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        self + &(-rhs)
    }
}

impl<T: Scalar> Neg for &Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        self.map_coeffs(|c| -c.clone())
    }
}

impl<T: Scalar> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        assert_eq!(self.nvars, rhs.nvars, "polynomial layouts differ");
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }
}
