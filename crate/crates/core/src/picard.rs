//! The rank-2 Picard lattice of `Y = P(O ⊕ O(2m) ⊕ O(2m))` over `P^{3m}`.
//!
//! Divisor classes are written in the ordered basis `(D, H)` where `D` is the
//! tautological class `O_Y(1)` and `H` the pullback of a hyperplane. Curve
//! classes are stored by their intersection numbers with `D` and `H`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The parameter `m` of the construction, validated once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstructionParams {
    m: u32,
}

impl ConstructionParams {
    pub fn new(m: i64) -> Result<Self> {
        if m < 2 || m > i64::from(u32::MAX / 8) {
            return Err(Error::InvalidM(m));
        }
        Ok(Self { m: m as u32 })
    }

    pub fn m(&self) -> i64 {
        i64::from(self.m)
    }

    /// Dimension of the base projective space, `3m`.
    pub fn n_base(&self) -> u32 {
        3 * self.m
    }

    pub fn dim_y(&self) -> u32 {
        self.n_base() + 2
    }

    /// Twist `2m` of the two nontrivial summands defining `Y`.
    pub fn fiber_twist(&self) -> i64 {
        2 * self.m()
    }

    /// Number of homogeneous coordinates of the base, `3m + 1`.
    pub fn n_x_vars(&self) -> usize {
        self.n_base() as usize + 1
    }
}

/// A divisor class `a·D + b·H` on `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DivisorClassY {
    pub a: i64,
    pub b: i64,
}

impl DivisorClassY {
    pub const ZERO: Self = Self::new(0, 0);
    pub const D: Self = Self::new(1, 0);
    pub const H: Self = Self::new(0, 1);

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn scale(self, k: i64) -> Self {
        Self::new(k * self.a, k * self.b)
    }
}

impl Add for DivisorClassY {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl AddAssign for DivisorClassY {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for DivisorClassY {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for DivisorClassY {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.a, -self.b)
    }
}

impl Mul<DivisorClassY> for i64 {
    type Output = DivisorClassY;
    fn mul(self, rhs: DivisorClassY) -> DivisorClassY {
        rhs.scale(self)
    }
}

impl std::iter::Sum for DivisorClassY {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

/// Canonical form: both coefficients always written, e.g. `1D+0H`, `2D-4H`.
impl fmt::Display for DivisorClassY {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b < 0 { '-' } else { '+' };
        write!(f, "{}D{}{}H", self.a, sign, self.b.unsigned_abs())
    }
}

impl Serialize for DivisorClassY {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Accepts terms `[sign][coefficient]symbol` with symbol `D` or `H`, joined by
/// `+` / `-` (ASCII or U+2212). Repeated symbols accumulate.
impl FromStr for DivisorClassY {
    type Err = Error;

    fn from_str(input: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let s: String = input
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .collect();
        if s.is_empty() {
            return Err(err("empty input"));
        }

        let mut class = Self::ZERO;
        let mut chars = s.chars().peekable();
        let mut first = true;
        while chars.peek().is_some() {
            let mut negative = false;
            match chars.peek() {
                Some('+') => {
                    chars.next();
                }
                Some('-') => {
                    negative = true;
                    chars.next();
                }
                _ if first => {}
                _ => return Err(err("expected '+' or '-' between terms")),
            }
            first = false;

            let mut digits = String::new();
            while let Some(c) = chars.peek().copied().filter(char::is_ascii_digit) {
                digits.push(c);
                chars.next();
            }
            let coeff: i64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| err("coefficient out of range"))?
            };
            let coeff = if negative { -coeff } else { coeff };
            match chars.next() {
                Some('D') => class.a += coeff,
                Some('H') => class.b += coeff,
                Some(_) => return Err(err("unknown symbol, expected 'D' or 'H'")),
                None => return Err(err("term without symbol")),
            }
        }
        Ok(class)
    }
}

/// A curve class on `Y`, recorded as `(D·C, H·C)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveClassY {
    pub d_d: i64,
    pub d_h: i64,
}

impl CurveClassY {
    /// A line in a fiber of `Y → P^{3m}`.
    pub const ELL_F: Self = Self { d_d: 1, d_h: 0 };
    /// A line in the section `V ≅ P^{3m}`.
    pub const ELL_V: Self = Self { d_d: 0, d_h: 1 };
}

pub fn pair(div: DivisorClassY, curve: CurveClassY) -> i64 {
    div.a * curve.d_d + div.b * curve.d_h
}

/// `-K_Y = 3D + (1 - m)H`.
pub fn anti_k_y(params: &ConstructionParams) -> DivisorClassY {
    DivisorClassY::new(3, 1 - params.m())
}

/// The named classes of the construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StandardClasses {
    #[serde(rename = "D")]
    pub d: DivisorClassY,
    #[serde(rename = "H")]
    pub h: DivisorClassY,
    #[serde(rename = "antiK_Y")]
    pub anti_k: DivisorClassY,
    /// Class of the divisors `G_1`, `G_2` cutting out `V`.
    #[serde(rename = "G")]
    pub g: DivisorClassY,
    /// Twist `M` in `X ∈ |2ξ + p*M|`.
    #[serde(rename = "M")]
    pub m_twist: DivisorClassY,
    #[serde(rename = "Delta")]
    pub delta: DivisorClassY,
}

pub fn standard_classes(params: &ConstructionParams) -> StandardClasses {
    let m = params.m();
    StandardClasses {
        d: DivisorClassY::D,
        h: DivisorClassY::H,
        anti_k: anti_k_y(params),
        g: DivisorClassY::new(1, -2 * m),
        m_twist: DivisorClassY::new(0, -2 * m),
        delta: DivisorClassY::new(6, -4 * m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(m: i64) -> ConstructionParams {
        ConstructionParams::new(m).unwrap()
    }

    #[test]
    fn rejects_small_m() {
        assert_eq!(ConstructionParams::new(1), Err(Error::InvalidM(1)));
        assert_eq!(ConstructionParams::new(-3), Err(Error::InvalidM(-3)));
        let p = params(2);
        assert_eq!(p.dim_y(), p.n_base() + 2);
        assert_eq!(p.n_x_vars(), 7);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pair(DivisorClassY::D, CurveClassY::ELL_F), 1);
        assert_eq!(pair(DivisorClassY::D, CurveClassY::ELL_V), 0);
        assert_eq!(pair(anti_k_y(&params(3)), CurveClassY::ELL_V), -2);
    }

    #[test]
    fn anticanonical_class() {
        assert_eq!(anti_k_y(&params(2)), DivisorClassY::new(3, -1));
        assert_eq!(anti_k_y(&params(5)), DivisorClassY::new(3, -4));
        for m in 2..=20 {
            let p = params(m);
            assert_eq!(pair(anti_k_y(&p), CurveClassY::ELL_F), 3);
            assert!(pair(anti_k_y(&p), CurveClassY::ELL_V) < 0);
            let g = standard_classes(&p).g;
            assert_eq!(pair(g, CurveClassY::ELL_V), -2 * m);
            assert_eq!(pair(g, CurveClassY::ELL_F), 1);
        }
    }

    #[test]
    fn standard_classes_m2() {
        let c = standard_classes(&params(2));
        assert_eq!(c.g, DivisorClassY::new(1, -4));
        assert_eq!(c.delta, DivisorClassY::new(6, -8));
        for m in 2..=6 {
            let c = standard_classes(&params(m));
            assert_eq!(pair(c.delta, CurveClassY::ELL_V), -4 * m);
        }
    }

    #[test]
    fn display_and_parse() {
        assert_eq!(DivisorClassY::new(2, -4).to_string(), "2D-4H");
        assert_eq!(DivisorClassY::D.to_string(), "1D+0H");
        assert_eq!("2D-4H".parse::<DivisorClassY>().unwrap(), DivisorClassY::new(2, -4));
        assert_eq!("D".parse::<DivisorClassY>().unwrap(), DivisorClassY::D);
        assert_eq!("-H".parse::<DivisorClassY>().unwrap(), -DivisorClassY::H);
        assert_eq!("3D\u{2212}1H".parse::<DivisorClassY>().unwrap(), DivisorClassY::new(3, -1));
        assert_eq!("H + 2D".parse::<DivisorClassY>().unwrap(), DivisorClassY::new(2, 1));
        for bad in ["", "2X", "2D4H", "2", "D+", "--D"] {
            assert!(bad.parse::<DivisorClassY>().is_err(), "{bad:?} should not parse");
        }
    }

    proptest! {
        #[test]
        fn pairing_is_bilinear(a1 in -50i64..50, b1 in -50i64..50, a2 in -50i64..50,
                               b2 in -50i64..50, cd in -20i64..20, ch in -20i64..20) {
            let (d1, d2) = (DivisorClassY::new(a1, b1), DivisorClassY::new(a2, b2));
            let c = CurveClassY { d_d: cd, d_h: ch };
            prop_assert_eq!(pair(d1 + d2, c), pair(d1, c) + pair(d2, c));
            prop_assert_eq!(pair(d1.scale(3), c), 3 * pair(d1, c));
        }

        #[test]
        fn string_form_round_trips(a in -10_000i64..10_000, b in -10_000i64..10_000) {
            let c = DivisorClassY::new(a, b);
            let s = c.to_string();
            let parsed: DivisorClassY = s.parse().unwrap();
            prop_assert_eq!(parsed, c);
            prop_assert_eq!(parsed.to_string(), s);
        }
    }
}
