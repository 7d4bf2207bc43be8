//! Character calculus. The exact half of this module works in the Laurent
//! ring of the weight lattice: characters as sparse integer Laurent
//! polynomials, exterior powers through Newton's identities, and a
//! brute-force decomposition of any Weyl-invariant polynomial into monomials
//! in the fundamental characters. It is the ground truth the sampling
//! pipeline is tested against on small groups, and it is only viable where
//! the full weight systems fit in memory.
//!
//! The numeric half (`numeric`) evaluates the same quantities and their
//! torus derivatives at multiprecision points; see that file for the
//! derivative recursions.

pub mod numeric;

pub use numeric::{
    char_tables, exterior_deriv, exterior_deriv_bounded, fund_tables, power_sum_deriv,
    power_sum_deriv_bounded, BudgetTable, CharBasis, CharTables, DerivOrder, DerivTable,
    NumError, E8_ADJOINT,
};

use crate::liealg::{RootSystem, WeightSystem};
use crate::qi::GaussianRational;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, thiserror::Error)]
pub enum CharError {
    #[error("polynomial is not in the span of dominant character monomials (offending weight {0:?})")]
    NotDecomposable(Vec<i64>),
    #[error("exact division failed: {0}")]
    DivisionFailure(String),
    #[error("coefficient overflow in Laurent arithmetic")]
    Overflow,
    #[error("evaluation requires nonzero coordinates (index {0})")]
    ZeroCoordinate(usize),
    #[error("range extension failed: {0}")]
    Extension(String),
}

/// Sparse Laurent polynomial over the weight lattice; exponents are
/// weight-basis coordinates, coefficients are exact integers.
#[derive(Debug, Clone)]
pub struct LaurentPoly {
    pub rank: usize,
    terms: HashMap<Vec<i64>, i128>,
}

impl LaurentPoly {
    pub fn zero(rank: usize) -> Self {
        LaurentPoly {
            rank,
            terms: HashMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        let mut p = Self::zero(rank);
        p.terms.insert(vec![0; rank], 1);
        p
    }

    pub fn constant(rank: usize, c: i128) -> Self {
        let mut p = Self::zero(rank);
        if c != 0 {
            p.terms.insert(vec![0; rank], c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &[i64]) -> i128 {
        self.terms.get(w).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &i128)> {
        self.terms.iter()
    }

    /// Terms in descending lexicographic exponent order.
    pub fn sorted_terms(&self) -> Vec<(Vec<i64>, i128)> {
        let mut v: Vec<(Vec<i64>, i128)> =
            self.terms.iter().map(|(w, c)| (w.clone(), *c)).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v
    }

    fn insert_add(&mut self, w: Vec<i64>, c: i128) {
        if c == 0 {
            return;
        }
        match self.terms.entry(w) {
            std::collections::hash_map::Entry::Occupied(mut o) => {
                let v = o.get().checked_add(c).expect("Laurent coefficient overflow");
                if v == 0 {
                    // Keep the support minimal so max-term scans stay honest.
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            std::collections::hash_map::Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add_scaled(&mut self, other: &LaurentPoly, c: i128) {
        for (w, v) in &other.terms {
            self.insert_add(w.clone(), v.checked_mul(c).expect("overflow"));
        }
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = LaurentPoly::zero(self.rank);
        for (w1, c1) in &small.terms {
            for (w2, c2) in &big.terms {
                let w: Vec<i64> = (0..self.rank).map(|k| w1[k] + w2[k]).collect();
                out.insert_add(w, c1.checked_mul(*c2).expect("overflow"));
            }
        }
        out
    }

    /// Substitute `Q -> Q^m`: multiplies every exponent vector by `m`.
    pub fn scale_exponents(&self, m: i64) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.rank);
        for (w, c) in &self.terms {
            out.insert_add(w.iter().map(|&x| x * m).collect(), *c);
        }
        out
    }

    pub fn div_exact(&self, d: i128) -> Result<LaurentPoly, CharError> {
        let mut out = LaurentPoly::zero(self.rank);
        for (w, c) in &self.terms {
            if c % d != 0 {
                return Err(CharError::DivisionFailure(format!(
                    "coefficient {c} not divisible by {d}"
                )));
            }
            out.insert_add(w.clone(), c / d);
        }
        Ok(out)
    }

    /// Evaluate at an exact complex rational point; all coordinates must be
    /// nonzero if negative exponents occur.
    pub fn eval_gaussian(&self, q: &[GaussianRational]) -> Result<GaussianRational, CharError> {
        let mut acc = GaussianRational::zero();
        for (w, c) in &self.terms {
            let mut term = GaussianRational::from_int(1);
            for (i, &e) in w.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if q[i].is_zero() {
                    if e < 0 {
                        return Err(CharError::ZeroCoordinate(i));
                    }
                    term = GaussianRational::zero();
                    break;
                }
                let p = q[i].powi(e).expect("nonzero base");
                term = &term * &p;
            }
            let c128 = *c;
            let cg = GaussianRational {
                re: BigRational::from(BigInt::from(c128)),
                im: BigRational::zero(),
            };
            acc += &(&term * &cg);
        }
        Ok(acc)
    }
}

/// Character of a weight system as a Laurent polynomial.
pub fn char_laurent(ws: &WeightSystem) -> LaurentPoly {
    let rank = ws.highest.len();
    let mut p = LaurentPoly::zero(rank);
    for (w, m) in &ws.weights {
        p.insert_add(w.clone(), *m as i128);
    }
    p
}

/// Characters of all exterior powers `0..=kmax` of the representation with
/// character `chi`, through Newton's identities. Exact in the Laurent ring;
/// every division by `k` is checked.
pub fn exterior_laurent(chi: &LaurentPoly, kmax: usize) -> Result<Vec<LaurentPoly>, CharError> {
    let mut e: Vec<LaurentPoly> = vec![LaurentPoly::one(chi.rank)];
    let pm: Vec<LaurentPoly> = (1..=kmax as i64).map(|m| chi.scale_exponents(m)).collect();
    for k in 1..=kmax {
        let mut acc = LaurentPoly::zero(chi.rank);
        for m in 1..=k {
            let sign: i128 = if m % 2 == 1 { 1 } else { -1 };
            acc.add_scaled(&pm[m - 1].mul(&e[k - m]), sign);
        }
        e.push(acc.div_exact(k as i128)?);
    }
    Ok(e)
}

/// A ring of fundamental characters with a memoized monomial table, plus the
/// data needed to pick dominance-maximal terms deterministically.
pub struct CharRing<'a> {
    pub rs: &'a RootSystem,
    pub funds: Vec<LaurentPoly>,
    monomials: HashMap<Vec<u8>, LaurentPoly>,
}

impl<'a> CharRing<'a> {
    pub fn new(rs: &'a RootSystem, funds: Vec<LaurentPoly>) -> Self {
        let mut monomials = HashMap::new();
        monomials.insert(vec![0u8; rs.rank], LaurentPoly::one(rs.rank));
        CharRing {
            rs,
            funds,
            monomials,
        }
    }

    /// `prod_j chi_j^{iota_j}`, memoized across calls.
    pub fn monomial(&mut self, iota: &[u8]) -> LaurentPoly {
        if let Some(p) = self.monomials.get(iota) {
            return p.clone();
        }
        let j = iota.iter().position(|&x| x > 0).expect("nonzero iota");
        let mut prev = iota.to_vec();
        prev[j] -= 1;
        let base = self.monomial(&prev);
        let p = base.mul(&self.funds[j]);
        self.monomials.insert(iota.to_vec(), p.clone());
        p
    }

    fn height(&self, w: &[i64]) -> BigRational {
        (0..self.rs.rank).fold(BigRational::zero(), |acc, j| {
            acc + &self.rs.fund_heights[j] * BigRational::from(BigInt::from(w[j]))
        })
    }

    /// Decompose a Weyl-invariant Laurent polynomial into an integer
    /// combination of monomials in the fundamental characters by repeatedly
    /// eliminating the dominance-maximal term (graded by height, ties broken
    /// lexicographically).
    pub fn decompose(&mut self, target: &LaurentPoly) -> Result<BTreeMap<Vec<u8>, i128>, CharError> {
        let mut rem = target.clone();
        let mut out = BTreeMap::new();
        let mut guard = 0usize;
        while !rem.is_zero() {
            guard += 1;
            if guard > 2_000_000 {
                return Err(CharError::DivisionFailure(
                    "elimination failed to terminate".into(),
                ));
            }
            let (wmax, cmax) = {
                let mut best: Option<(BigRational, &Vec<i64>, i128)> = None;
                for (w, c) in rem.iter() {
                    let h = self.height(w);
                    let better = match &best {
                        None => true,
                        Some((bh, bw, _)) => h > *bh || (h == *bh && w > *bw),
                    };
                    if better {
                        best = Some((h, w, *c));
                    }
                }
                let (_, w, c) = best.unwrap();
                (w.clone(), c)
            };
            if wmax.iter().any(|&x| x < 0) {
                return Err(CharError::NotDecomposable(wmax));
            }
            if wmax.iter().any(|&x| x > u8::MAX as i64) {
                return Err(CharError::NotDecomposable(wmax));
            }
            let iota: Vec<u8> = wmax.iter().map(|&x| x as u8).collect();
            let mono = self.monomial(&iota);
            debug_assert_eq!(mono.coeff(&wmax), 1, "monomial leading coefficient");
            rem.add_scaled(&mono, -cmax);
            out.insert(iota, cmax);
        }
        Ok(out)
    }
}

fn falling(n: i64, j: u32) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..j as i64 {
        acc *= BigInt::from(n - t);
    }
    acc
}

/// Extend a self-dual exterior-power sequence past the midpoint minus a few
/// entries. For a representation of dimension `dim` whose characteristic
/// polynomial is divisible by `(mu - 1)^{vanish_order}`, the values
/// `e_k` for `k = known.len() ..= dim/2` are linear in the known ones; this
/// solves for them exactly and checks every divisibility condition.
/// `known[k]` must hold `e_k` for `k = 0..known.len()`, and duality
/// `e_k = e_{dim-k}` is assumed.
pub fn extend_exterior_range(
    dim: usize,
    vanish_order: usize,
    known: &[BigInt],
) -> Result<Vec<BigInt>, CharError> {
    assert!(dim % 2 == 0, "self-dual extension needs even dimension");
    let half = dim / 2;
    let k0 = known.len();
    if k0 > half {
        return Err(CharError::Extension("nothing to extend".into()));
    }
    let nunk = half - k0 + 1;
    if vanish_order < nunk {
        return Err(CharError::Extension(format!(
            "{nunk} unknowns but only {vanish_order} vanishing conditions"
        )));
    }

    // Condition j: sum_k (-1)^k fall(dim-k, j) e_k = 0, folded by duality.
    // Build rows over the unknowns e_{k0..=half}.
    let coeff = |k: usize, j: u32| -> BigInt {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let base = if k < half {
            falling((dim - k) as i64, j) + falling(k as i64, j)
        } else {
            falling(half as i64, j)
        };
        BigInt::from(sign) * base
    };

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for j in 0..vanish_order as u32 {
        let mut row: Vec<BigRational> = (k0..=half)
            .map(|k| BigRational::from(coeff(k, j)))
            .collect();
        let mut rhs = BigRational::zero();
        for (k, e) in known.iter().enumerate() {
            rhs -= BigRational::from(coeff(k, j) * e);
        }
        row.push(rhs);
        rows.push(row);
    }

    // Exact Gaussian elimination; the system is overdetermined and must be
    // consistent.
    let ncols = nunk;
    let mut rank = 0usize;
    for col in 0..ncols {
        let piv = (rank..rows.len()).find(|&r| !rows[r][col].is_zero());
        let Some(piv) = piv else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = rows[r][col].clone();
                for c in 0..=ncols {
                    let sub = &f * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - sub;
                }
            }
        }
        rank += 1;
    }
    if rank < ncols {
        return Err(CharError::Extension("conditions do not determine the tail".into()));
    }
    for r in rank..rows.len() {
        if !rows[r][ncols].is_zero() {
            return Err(CharError::Extension(
                "input sequence violates the vanishing conditions".into(),
            ));
        }
    }
    let mut out = Vec::with_capacity(nunk);
    for i in 0..ncols {
        let v = &rows[i][ncols];
        if !v.is_integer() {
            return Err(CharError::Extension("non-integral solution".into()));
        }
        out.push(v.to_integer());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_root_system, weight_system, LieType};
    use num_traits::ToPrimitive;

    fn a2() -> RootSystem {
        build_root_system(LieType::parse("A2").unwrap())
    }

    fn fund_laurents(rs: &RootSystem) -> Vec<LaurentPoly> {
        (0..rs.rank)
            .map(|j| {
                let mut lam = vec![0i64; rs.rank];
                lam[j] = 1;
                char_laurent(&weight_system(rs, &lam).unwrap())
            })
            .collect()
    }

    #[test]
    fn a2_adjoint_poly_shape() {
        let rs = a2();
        let adj = char_laurent(&weight_system(&rs, &[1, 1]).unwrap());
        assert_eq!(adj.num_terms(), 7);
        assert_eq!(adj.coeff(&[0, 0]), 2);
        let total: i128 = adj.iter().map(|(_, c)| *c).sum();
        assert_eq!(total, 8);
    }

    #[test]
    fn a2_adjoint_decomposition() {
        let rs = a2();
        let mut ring = CharRing::new(&rs, fund_laurents(&rs));
        let adj = char_laurent(&weight_system(&rs, &[1, 1]).unwrap());
        let dec = ring.decompose(&adj).unwrap();
        let mut expect = BTreeMap::new();
        expect.insert(vec![1u8, 1u8], 1i128);
        expect.insert(vec![0u8, 0u8], -1i128);
        assert_eq!(dec, expect);
    }

    #[test]
    fn exterior_newton_matches_direct_expansion_a2() {
        // chi_{wedge k} of the 3-dimensional representation equals the
        // character of the k-th antisymmetric power computed from first
        // principles: e_1 = chi, e_2 = chi-of-dual, e_3 = 1.
        let rs = a2();
        let v = char_laurent(&weight_system(&rs, &[1, 0]).unwrap());
        let e = exterior_laurent(&v, 3).unwrap();
        let dual = char_laurent(&weight_system(&rs, &[0, 1]).unwrap());
        assert_eq!(e[0].sorted_terms(), LaurentPoly::one(2).sorted_terms());
        assert_eq!(e[1].sorted_terms(), v.sorted_terms());
        assert_eq!(e[2].sorted_terms(), dual.sorted_terms());
        assert_eq!(e[3].sorted_terms(), LaurentPoly::one(2).sorted_terms());
    }

    #[test]
    fn exterior_dimensions_binomial() {
        let rs = a2();
        let adj = char_laurent(&weight_system(&rs, &[1, 1]).unwrap());
        let e = exterior_laurent(&adj, 8).unwrap();
        for (k, ek) in e.iter().enumerate() {
            let dim: i128 = ek.iter().map(|(_, c)| *c).sum();
            let binom = (0..k as i128).fold(1i128, |acc, i| acc * (8 - i) / (i + 1));
            assert_eq!(dim, binom, "k={k}");
        }
    }

    #[test]
    fn characteristic_polynomial_telescopes_at_sampled_eigenvalue() {
        // det(g - mu) = sum_k chi_{wedge k}(g) (-mu)^{dim-k} vanishes when mu
        // is an eigenvalue of g, i.e. the monomial value of any weight.
        let rs = a2();
        let v = char_laurent(&weight_system(&rs, &[1, 0]).unwrap());
        let e = exterior_laurent(&v, 3).unwrap();
        let q = vec![
            GaussianRational::from_quad(1, 2, 1, 1),
            GaussianRational::from_quad(-2, 3, 1, 2),
        ];
        // Eigenvalue of the weight (1,0) monomial: q1.
        let mu = q[0].clone();
        let mut acc = GaussianRational::zero();
        for (k, ek) in e.iter().enumerate() {
            let val = ek.eval_gaussian(&q).unwrap();
            let sign_pow = mu.powi((3 - k) as i64).unwrap();
            let signed = if (3 - k) % 2 == 1 {
                -(&val * &sign_pow)
            } else {
                &val * &sign_pow
            };
            acc += &signed;
        }
        assert!(acc.is_zero());
    }

    #[test]
    fn a2_exterior_table_is_symmetric() {
        let rs = a2();
        let mut ring = CharRing::new(&rs, fund_laurents(&rs));
        let adj = char_laurent(&weight_system(&rs, &[1, 1]).unwrap());
        let e = exterior_laurent(&adj, 8).unwrap();
        let tables: Vec<_> = e.iter().map(|p| ring.decompose(p).unwrap()).collect();
        for k in 0..=8 {
            assert_eq!(tables[k], tables[8 - k], "k={k}");
        }
        // Top power is the trivial character.
        let mut expect = BTreeMap::new();
        expect.insert(vec![0u8, 0u8], 1i128);
        assert_eq!(tables[8], expect);
    }

    #[test]
    fn extension_recovers_synthetic_tail() {
        // Eigenvalues {1 x4, -1 x4}: e-polynomial (1 - x^2)^4, and the
        // characteristic polynomial is divisible by (mu-1)^4.
        let known: Vec<BigInt> = [1i64, 0, -4].iter().map(|&x| BigInt::from(x)).collect();
        let tail = extend_exterior_range(8, 4, &known).unwrap();
        assert_eq!(
            tail,
            vec![BigInt::from(0), BigInt::from(6)],
            "e_3, e_4 of (1-x^2)^4"
        );
    }

    #[test]
    fn extension_binomials_identity_element() {
        // At the identity of E8, e_k = C(248, k); the tail k = 121..=124 must
        // come out as binomials too.
        let binom = |n: u64, k: u64| -> BigInt {
            let mut acc = BigInt::one();
            for i in 0..k {
                acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
            }
            acc
        };
        let known: Vec<BigInt> = (0..=120).map(|k| binom(248, k)).collect();
        let tail = extend_exterior_range(248, 8, &known).unwrap();
        assert_eq!(tail.len(), 4);
        for (i, k) in (121..=124).enumerate() {
            assert_eq!(tail[i], binom(248, k), "k={k}");
        }
    }

    #[test]
    fn eval_rejects_zero_coordinate_with_negative_power() {
        let rs = a2();
        let v = char_laurent(&weight_system(&rs, &[1, 0]).unwrap());
        let q = vec![GaussianRational::zero(), GaussianRational::from_int(1)];
        assert!(matches!(
            v.eval_gaussian(&q),
            Err(CharError::ZeroCoordinate(_))
        ));
        let ok = v.eval_gaussian(&[
            GaussianRational::from_int(1),
            GaussianRational::from_int(1),
        ]);
        assert_eq!(ok.unwrap().re.to_integer().to_i64(), Some(3));
    }
}
