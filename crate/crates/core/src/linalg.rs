//! Fraction-free (Bareiss) elimination and small symmetric matrices.

use crate::scalar::Scalar;

/// Rank by Bareiss elimination. Every division is exact in an integral
/// domain, so this is exact over `BigInt` as well as over fields.
pub fn rank<T: Scalar>(matrix: &[Vec<T>]) -> usize {
    let mut m: Vec<Vec<T>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = T::one();
    let mut r = 0;
    for k in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][k].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in k + 1..cols {
                let num = m[r][k].clone() * m[i][j].clone() - m[i][k].clone() * m[r][j].clone();
                m[i][j] = num / prev.clone();
            }
            m[i][k] = T::zero();
        }
        prev = m[r][k].clone();
        r += 1;
    }
    r
}

/// A symmetric 3×3 matrix, stored as its upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix3<T> {
    /// `[a00, a01, a02, a11, a12, a22]`
    pub upper: [T; 6],
}

impl<T: Scalar> SymMatrix3<T> {
    pub fn new(a00: T, a01: T, a02: T, a11: T, a12: T, a22: T) -> Self {
        Self { upper: [a00, a01, a02, a11, a12, a22] }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one(), T::zero(), T::one())
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let idx = match (i, j) {
            (0, 0) => 0,
            (0, 1) => 1,
            (0, 2) => 2,
            (1, 1) => 3,
            (1, 2) => 4,
            (2, 2) => 5,
            _ => panic!("index out of range"),
        };
        &self.upper[idx]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..3).map(|i| (0..3).map(|j| self.get(i, j).clone()).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows())
    }

    pub fn det(&self) -> T {
        let g = |i, j| self.get(i, j).clone();
        g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(1, 2))
            - g(0, 1) * (g(0, 1) * g(2, 2) - g(1, 2) * g(0, 2))
            + g(0, 2) * (g(0, 1) * g(1, 2) - g(1, 1) * g(0, 2))
    }

    /// Quadratic form `zᵀ S z`.
    pub fn quadratic_form(&self, z: &[T; 3]) -> T {
        let mut acc = T::zero();
        for i in 0..3 {
            for j in 0..3 {
                acc = acc + self.get(i, j).clone() * z[i].clone() * z[j].clone();
            }
        }
        acc
    }

    /// `S z`.
    pub fn apply(&self, z: &[T; 3]) -> [T; 3] {
        std::array::from_fn(|i| {
            (0..3).fold(T::zero(), |acc, j| acc + self.get(i, j).clone() * z[j].clone())
        })
    }

    /// A nonzero kernel vector when the rank is exactly 2: the cross product
    /// of two independent rows.
    pub fn kernel_vector_rank2(&self) -> Option<[T; 3]> {
        let rows = self.rows();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let v = cross(&rows[a], &rows[b]);
            if v.iter().any(|c| !c.is_zero()) {
                return Some(v);
            }
        }
        None
    }
}

fn cross<T: Scalar>(u: &[T], v: &[T]) -> [T; 3] {
    [
        u[1].clone() * v[2].clone() - u[2].clone() * v[1].clone(),
        u[2].clone() * v[0].clone() - u[0].clone() * v[2].clone(),
        u[0].clone() * v[1].clone() - u[1].clone() * v[0].clone(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn sym(v: [i64; 6]) -> SymMatrix3<BigInt> {
        SymMatrix3 { upper: v.map(bi) }
    }

    #[test]
    fn ranks_of_conic_types() {
        assert_eq!(SymMatrix3::<BigInt>::identity().rank(), 3);
        // xy: line pair
        assert_eq!(sym([0, 1, 0, 0, 0, 0]).rank(), 2);
        // z^2: double line
        assert_eq!(sym([0, 0, 0, 0, 0, 1]).rank(), 1);
        assert_eq!(sym([0; 6]).rank(), 0);
    }

    #[test]
    fn kernel_of_line_pair() {
        let s = sym([1, 2, 3, 4, 5, 6]); // det = -1
        assert_eq!(s.rank(), 3);
        let s = sym([1, 1, 0, 1, 0, 2]); // rows (1,1,0),(1,1,0),(0,0,2)
        assert_eq!(s.rank(), 2);
        let k = s.kernel_vector_rank2().unwrap();
        assert!(s.apply(&k).iter().all(|c| c == &bi(0)));
        assert!(k.iter().any(|c| c != &bi(0)));
    }

    #[test]
    fn rank_over_rationals_and_floats() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)], vec![q(0), q(1), q(1)]];
        assert_eq!(rank(&m), 2);
        let f = vec![vec![2.0, 4.0], vec![1.0, 2.0]];
        assert_eq!(rank(&f), 1);
        assert_eq!(rank::<f64>(&[]), 0);
    }

    fn brute_rank(m: &[Vec<BigInt>]) -> usize {
        let rows: Vec<Vec<BigRational>> = m
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        // rank = size of the largest nonvanishing minor
        let det3 = |r: &[Vec<BigRational>]| {
            let g = |i: usize, j: usize| r[i][j].clone();
            g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
        };
        if !num_traits::Zero::is_zero(&det3(&rows)) {
            return 3;
        }
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            for (c, d) in [(0, 1), (0, 2), (1, 2)] {
                let minor = rows[a][c].clone() * rows[b][d].clone() - rows[a][d].clone() * rows[b][c].clone();
                if !num_traits::Zero::is_zero(&minor) {
                    return 2;
                }
            }
        }
        usize::from(rows.iter().flatten().any(|v| !num_traits::Zero::is_zero(v)))
    }

    proptest! {
        #[test]
        fn bareiss_matches_minors(v in prop::array::uniform6(-3i64..3)) {
            let s = sym(v);
            prop_assert_eq!(s.rank(), brute_rank(&s.rows()));
            prop_assert_eq!(s.rank() == 3, s.det() != bi(0));
            if s.rank() == 2 {
                let k = s.kernel_vector_rank2().unwrap();
                prop_assert!(s.apply(&k).iter().all(|c| c == &bi(0)));
            }
        }
    }
}
