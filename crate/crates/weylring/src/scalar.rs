//! Field-like scalar abstraction so the derivative calculus can run both
//! over exact Gaussian rationals (test oracles) and over multiprecision
//! complex floats (production). Constants are derived from an existing value
//! because the float type carries its precision in the value.

use crate::mpfloat::{Ball, Fpc};
use crate::qi::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

pub trait Scalar: Clone + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add_s(&self, o: &Self) -> Self;
    fn sub_s(&self, o: &Self) -> Self;
    fn mul_s(&self, o: &Self) -> Self;
    fn div_s(&self, o: &Self) -> Self;
    fn neg_s(&self) -> Self;
    fn mul_i128(&self, k: i128) -> Self;
    fn is_zero_s(&self) -> bool;
    /// Compare magnitudes, for pivot selection.
    fn abs_cmp(&self, o: &Self) -> Ordering;
}

impl Scalar for GaussianRational {
    fn zero_like(&self) -> Self {
        GaussianRational::zero()
    }
    fn one_like(&self) -> Self {
        GaussianRational::one()
    }
    fn add_s(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_s(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_s(&self, o: &Self) -> Self {
        self * o
    }
    fn div_s(&self, o: &Self) -> Self {
        self * &o.inv().expect("division by zero")
    }
    fn neg_s(&self) -> Self {
        -self.clone()
    }
    fn mul_i128(&self, k: i128) -> Self {
        let c = GaussianRational {
            re: BigRational::from(BigInt::from(k)),
            im: BigRational::zero(),
        };
        self * &c
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn abs_cmp(&self, o: &Self) -> Ordering {
        self.norm_sqr().cmp(&o.norm_sqr())
    }
}

impl Scalar for Fpc {
    fn zero_like(&self) -> Self {
        Fpc::zero(self.prec())
    }
    fn one_like(&self) -> Self {
        Fpc::one(self.prec())
    }
    fn add_s(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_s(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_s(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn div_s(&self, o: &Self) -> Self {
        self.div(o)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn mul_i128(&self, k: i128) -> Self {
        Fpc::mul_i128(self, k)
    }
    fn is_zero_s(&self) -> bool {
        self.is_zero()
    }
    fn abs_cmp(&self, o: &Self) -> Ordering {
        self.norm_sqr()
            .partial_cmp(&o.norm_sqr())
            .unwrap_or(Ordering::Equal)
    }
}

impl Scalar for Ball {
    fn zero_like(&self) -> Self {
        Ball::exact(Fpc::zero(self.prec()))
    }
    fn one_like(&self) -> Self {
        Ball::exact(Fpc::one(self.prec()))
    }
    fn add_s(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_s(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_s(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn div_s(&self, o: &Self) -> Self {
        self.div(o)
    }
    fn neg_s(&self) -> Self {
        self.neg()
    }
    fn mul_i128(&self, k: i128) -> Self {
        Ball::mul_i128(self, k)
    }
    /// Only a provably-zero ball counts as zero: skipping a merely
    /// possibly-zero term would drop its contribution from the enclosure.
    fn is_zero_s(&self) -> bool {
        self.center.is_zero() && self.radius.is_zero()
    }
    /// Pivoting compares centers; a possibly-zero pivot is not an error
    /// here, it surfaces as an infinite radius downstream.
    fn abs_cmp(&self, o: &Self) -> Ordering {
        self.center
            .norm_sqr()
            .partial_cmp(&o.center.norm_sqr())
            .unwrap_or(Ordering::Equal)
    }
}

/// Invert a square matrix by Gauss-Jordan with partial pivoting. Returns
/// `None` when a pivot column has no usable entry (exactly zero for exact
/// scalars).
pub fn invert_matrix<S: Scalar>(a: &[Vec<S>]) -> Option<Vec<Vec<S>>> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = a[0][0].zero_like();
    let one = a[0][0].one_like();
    let mut m: Vec<Vec<S>> = a.iter().map(|row| row.to_vec()).collect();
    let mut inv: Vec<Vec<S>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&r1, &r2| m[r1][col].abs_cmp(&m[r2][col]))?;
        if m[piv][col].is_zero_s() {
            return None;
        }
        m.swap(col, piv);
        inv.swap(col, piv);
        let d = m[col][col].clone();
        for x in m[col].iter_mut() {
            *x = x.div_s(&d);
        }
        for x in inv[col].iter_mut() {
            *x = x.div_s(&d);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero_s() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let t = f.mul_s(&m[col][c]);
                m[r][c] = m[r][c].sub_s(&t);
                let t2 = f.mul_s(&inv[col][c]);
                inv[r][c] = inv[r][c].sub_s(&t2);
            }
        }
    }
    Some(inv)
}

pub fn mat_mul<S: Scalar>(a: &[Vec<S>], b: &[Vec<S>]) -> Vec<Vec<S>> {
    let n = a.len();
    let p = b[0].len();
    let zero = a[0][0].zero_like();
    let mut out = vec![vec![zero; p]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            let f = &a[i][k];
            if f.is_zero_s() {
                continue;
            }
            for j in 0..p {
                let t = f.mul_s(&bk[j]);
                out[i][j] = out[i][j].add_s(&t);
            }
        }
    }
    out
}
