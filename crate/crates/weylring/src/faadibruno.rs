//! Conversion of torus-coordinate derivative tables into derivatives with
//! respect to the fundamental characters themselves.
//!
//! Writing u = chi(Q) for the map collecting the fundamental characters and
//! F for a function of u known only through its composite F(chi(Q)), every
//! operator d/du_i equals sum_j (J^-1)_{ij} d/dQ_j with J the Jacobian
//! dchi_i/dQ_j. Composing k of these and expanding by the Leibniz rule gives
//! a sum over decorated graphs: each factor's derivative either hits a later
//! J^-1 entry (a vertical edge) or falls through onto the composite (a
//! horizontal edge onto a leaf). Evaluating the expansion needs exactly the
//! derivative tables produced by the numeric layer: the fundamentals one
//! order above the requested mixed derivative, the target at its order.

use crate::charcalc::numeric::{binom_prod, for_each_leq, multi_indices, DerivTable};
use crate::scalar::{invert_matrix, mat_mul, Scalar};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

#[derive(Debug, thiserror::Error)]
pub enum FdbError {
    #[error("jacobian is singular at the sample point")]
    SingularJacobian,
    #[error("derivative tables incomplete: need order {need}, have {have}")]
    IncompleteTable { need: usize, have: usize },
}

/// One expansion graph: `targets[l]` is 0 when left vertex `l` sends its
/// derivative onto the composite (a horizontal edge to the next free leaf),
/// or `t >= 1` when it differentiates the factor at 1-based position `t`
/// (necessarily `t - 1 > l`). Leaves are implicit: horizontal edges attach
/// to leaves in source order, which is the unique non-crossing wiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FdbGraph {
    pub targets: Vec<usize>,
}

impl FdbGraph {
    pub fn k_l(&self) -> usize {
        self.targets.len()
    }

    pub fn k_r(&self) -> usize {
        self.targets.iter().filter(|&&t| t == 0).count()
    }

    /// For each left vertex, the 0-based sources of vertical edges into it.
    pub fn up_sources(&self) -> Vec<Vec<usize>> {
        let mut ins = vec![Vec::new(); self.k_l()];
        for (l, &t) in self.targets.iter().enumerate() {
            if t > 0 {
                ins[t - 1].push(l);
            }
        }
        ins
    }

    /// 0-based left vertices with horizontal edges, in leaf order.
    pub fn leaf_sources(&self) -> Vec<usize> {
        self.targets
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == 0)
            .map(|(l, _)| l)
            .collect()
    }
}

fn graph_cache() -> &'static Mutex<HashMap<usize, Arc<Vec<FdbGraph>>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<FdbGraph>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All expansion graphs on `k_l` left vertices; there are `k_l!` of them.
/// Results are cached, enumeration order is fixed.
pub fn enumerate_graphs(k_l: usize) -> Arc<Vec<FdbGraph>> {
    if let Some(g) = graph_cache().lock().unwrap().get(&k_l) {
        return g.clone();
    }
    fn rec(l: usize, k_l: usize, cur: &mut Vec<usize>, out: &mut Vec<FdbGraph>) {
        if l == k_l {
            out.push(FdbGraph {
                targets: cur.clone(),
            });
            return;
        }
        // horizontal first, then vertical targets bottom-up
        cur.push(0);
        rec(l + 1, k_l, cur, out);
        cur.pop();
        for t in (l + 2)..=k_l {
            cur.push(t);
            rec(l + 1, k_l, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, k_l, &mut Vec::new(), &mut out);
    let arc = Arc::new(out);
    graph_cache().lock().unwrap().insert(k_l, arc.clone());
    arc
}

/// Derivative table of a square matrix-valued function of Q.
#[derive(Debug, Clone)]
pub struct MatTable<S> {
    pub n: usize,
    pub order: u8,
    entries: std::collections::BTreeMap<Vec<u8>, Vec<Vec<S>>>,
}

impl<S: Scalar> MatTable<S> {
    pub fn get(&self, d: &[u8]) -> &Vec<Vec<S>> {
        self.entries.get(d).expect("matrix derivative out of range")
    }

    /// Jacobian table `J_d[i][j] = D^(d + e_j) chi_i` from fundamental
    /// character tables, which must extend one order above `order`.
    pub fn jacobian(fund: &[DerivTable<S>], order: u8) -> Result<Self, FdbError> {
        let n = fund.len();
        for t in fund {
            if t.order < order + 1 {
                return Err(FdbError::IncompleteTable {
                    need: order as usize + 1,
                    have: t.order as usize,
                });
            }
        }
        let mut entries = std::collections::BTreeMap::new();
        for d in multi_indices(n, order) {
            let mut mat = Vec::with_capacity(n);
            for fi in fund {
                let mut row = Vec::with_capacity(n);
                for j in 0..n {
                    let mut dj = d.clone();
                    dj[j] += 1;
                    row.push(fi.get(&dj).clone());
                }
                mat.push(row);
            }
            entries.insert(d, mat);
        }
        Ok(MatTable { n, order, entries })
    }

    /// Derivative table of the matrix inverse, by the recursion obtained
    /// from differentiating J J^-1 = I:
    /// `(J^-1)_c = -J0^-1 sum_{0 < a <= c} C(c, a) J_a (J^-1)_{c-a}`.
    pub fn inverse_table(&self) -> Result<Self, FdbError> {
        let zero_idx = vec![0u8; self.n];
        let j0inv = invert_matrix(self.get(&zero_idx)).ok_or(FdbError::SingularJacobian)?;
        let proto = j0inv[0][0].zero_like();
        let mut entries = std::collections::BTreeMap::new();
        entries.insert(zero_idx.clone(), j0inv.clone());
        // componentwise-smaller indices sort earlier, so plain iteration
        // order satisfies the recursion's dependencies
        for c in multi_indices(self.n, self.order) {
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let mut acc = vec![vec![proto.zero_like(); self.n]; self.n];
            for_each_leq(&c, |a| {
                if a.iter().all(|&x| x == 0) {
                    return;
                }
                let rest: Vec<u8> = c.iter().zip(a).map(|(ci, ai)| ci - ai).collect();
                let prev: &Vec<Vec<S>> = &entries[&rest];
                let prod = mat_mul(self.get(a), prev);
                let k = binom_prod(&c, a);
                for (ar, pr) in acc.iter_mut().zip(&prod) {
                    for (av, pv) in ar.iter_mut().zip(pr) {
                        *av = av.sub_s(&pv.mul_i128(k));
                    }
                }
            });
            entries.insert(c, mat_mul(&j0inv, &acc));
        }
        Ok(MatTable {
            n: self.n,
            order: self.order,
            entries,
        })
    }
}

/// One derivative of the matrix inverse by the closed-form alternating sum
/// over ordered splits of `c` into nonzero parts:
/// `(J^-1)_c = sum_r (-1)^r [c! / prod d^(l)!] J0^-1 prod_l (J_{d^(l)} J0^-1)`.
/// Used as an independent cross-check of `inverse_table`.
pub fn jacobian_inverse_derivs<S: Scalar>(
    jac: &MatTable<S>,
    c: &[u8],
) -> Result<Vec<Vec<S>>, FdbError> {
    let n = jac.n;
    let zero_idx = vec![0u8; n];
    let j0inv = invert_matrix(jac.get(&zero_idx)).ok_or(FdbError::SingularJacobian)?;
    if c.iter().all(|&x| x == 0) {
        return Ok(j0inv);
    }
    let proto = j0inv[0][0].zero_like();
    let mut acc = vec![vec![proto.zero_like(); n]; n];
    fn parts_leq(rem: &[u8]) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for_each_leq(rem, |a| {
            if a.iter().any(|&x| x > 0) {
                out.push(a.to_vec());
            }
        });
        out
    }
    fn rec<S: Scalar>(
        rem: &[u8],
        prefix: &[Vec<S>],
        coef: i128,
        depth: usize,
        jac: &MatTable<S>,
        j0inv: &[Vec<S>],
        acc: &mut Vec<Vec<S>>,
    ) {
        for d in parts_leq(rem) {
            let coef2 = coef * binom_prod(rem, &d);
            let step = mat_mul(&mat_mul(prefix, jac.get(&d)), j0inv);
            let rest: Vec<u8> = rem.iter().zip(&d).map(|(r, di)| r - di).collect();
            if rest.iter().all(|&x| x == 0) {
                let sign = if (depth + 1) % 2 == 1 { -coef2 } else { coef2 };
                for (ar, sr) in acc.iter_mut().zip(&step) {
                    for (av, sv) in ar.iter_mut().zip(sr) {
                        *av = av.add_s(&sv.mul_i128(sign));
                    }
                }
            } else {
                rec(&rest, &step, coef2, depth + 1, jac, j0inv, acc);
            }
        }
    }
    rec(c, &j0inv, 1, 0, jac, &j0inv, &mut acc);
    Ok(acc)
}

/// Mixed derivative of the target with respect to the fundamental-character
/// coordinates, `d^|c| target / du_1^c_1 .. du_n^c_n`, from its Q-derivative
/// table and the inverse-Jacobian derivative table. The target table must
/// reach order |c|, the inverse-Jacobian table order |c| - 1.
pub fn chi_derivative<S: Scalar>(
    c: &[u8],
    target: &DerivTable<S>,
    jinv: &MatTable<S>,
) -> Result<S, FdbError> {
    let mut seq = Vec::new();
    for (i, &ci) in c.iter().enumerate() {
        for _ in 0..ci {
            seq.push(i);
        }
    }
    chi_derivative_seq(&seq, target, jinv)
}

/// Same with an explicit factor sequence; the result is symmetric in it.
pub fn chi_derivative_seq<S: Scalar>(
    i_seq: &[usize],
    target: &DerivTable<S>,
    jinv: &MatTable<S>,
) -> Result<S, FdbError> {
    let k_l = i_seq.len();
    let n = jinv.n;
    assert_eq!(target.rank, n);
    let proto = target.value();
    if k_l == 0 {
        return Ok(proto.clone());
    }
    if (target.order as usize) < k_l {
        return Err(FdbError::IncompleteTable {
            need: k_l,
            have: target.order as usize,
        });
    }
    if (jinv.order as usize) < k_l - 1 {
        return Err(FdbError::IncompleteTable {
            need: k_l - 1,
            have: jinv.order as usize,
        });
    }
    let graphs = enumerate_graphs(k_l);
    let mut acc = proto.zero_like();
    // accumulation order is fixed: graph-major, then lexicographic in j
    for g in graphs.iter() {
        let ups = g.up_sources();
        let leaves = g.leaf_sources();
        let mut j = vec![0usize; k_l];
        loop {
            'term: {
                let mut term = proto.one_like();
                let mut d = vec![0u8; n];
                for r in 0..k_l {
                    for x in d.iter_mut() {
                        *x = 0;
                    }
                    for &l in &ups[r] {
                        d[j[l]] += 1;
                    }
                    // d Q_j / d u_i sits at [j][i] of the inverse of
                    // J[i][j] = d chi_i / d Q_j
                    let entry = &jinv.get(&d)[j[r]][i_seq[r]];
                    if entry.is_zero_s() {
                        break 'term;
                    }
                    term = term.mul_s(entry);
                }
                let mut eps = vec![0u8; n];
                for &m in &leaves {
                    eps[j[m]] += 1;
                }
                let tv = target.get(&eps);
                if !tv.is_zero_s() {
                    acc = acc.add_s(&term.mul_s(tv));
                }
            }
            let mut pos = 0;
            loop {
                if pos == k_l {
                    break;
                }
                j[pos] += 1;
                if j[pos] < n {
                    break;
                }
                j[pos] = 0;
                pos += 1;
            }
            if pos == k_l {
                break;
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcalc::numeric::power_sum_deriv;
    use crate::liealg::{build_root_system, weight_system, LieType};
    use crate::qi::GaussianRational;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::collections::HashSet;

    fn gi(x: i64) -> GaussianRational {
        GaussianRational {
            re: BigRational::from(BigInt::from(x)),
            im: BigRational::from(BigInt::from(0)),
        }
    }

    fn gq(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    #[test]
    fn graph_counts_are_factorials() {
        for (k, expect) in [(1usize, 1usize), (2, 2), (3, 6), (4, 24), (5, 120), (6, 720)] {
            let gs = enumerate_graphs(k);
            assert_eq!(gs.len(), expect, "k_l = {}", k);
            let distinct: HashSet<_> = gs.iter().map(|g| g.targets.clone()).collect();
            assert_eq!(distinct.len(), expect);
            for g in gs.iter() {
                assert_eq!(g.k_l(), k);
                assert!(g.k_r() >= 1);
                assert_eq!(*g.targets.last().unwrap(), 0);
                for (l, &t) in g.targets.iter().enumerate() {
                    assert!(t == 0 || (t >= l + 2 && t <= k));
                }
                assert_eq!(g.k_r() + g.up_sources().iter().map(Vec::len).sum::<usize>(), k);
            }
        }
    }

    /// Dense derivative table of a univariate integer polynomial at x = 0:
    /// entry d is d! * coefficient_d.
    fn table_at_zero(coefs: &[i64], order: u8) -> DerivTable<GaussianRational> {
        let mut t = DerivTable::zeros(1, order, &gi(0));
        let mut fact: i128 = 1;
        for d in 0..=order as usize {
            if d > 0 {
                fact *= d as i128;
            }
            let c = *coefs.get(d).unwrap_or(&0);
            t.add_to(&[d as u8], &gi(c).mul_i128(fact));
        }
        t
    }

    fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut out = vec![0i64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    fn poly_compose(outer: &[i64], inner: &[i64]) -> Vec<i64> {
        // Horner from the top coefficient
        let mut acc = vec![*outer.last().unwrap()];
        for &c in outer.iter().rev().skip(1) {
            acc = poly_mul(&acc, inner);
            if acc.is_empty() {
                acc = vec![0];
            }
            acc[0] += c;
        }
        acc
    }

    #[test]
    fn scalar_inverse_derivative_pinned() {
        // f(x) = x^2 around x = 1: shift to t = x - 1, f = 1 + 2t + t^2,
        // d/dx (1/f') at x = 1 is -1/2
        let fund = vec![table_at_zero(&[1, 2, 1], 3)];
        let jac = MatTable::jacobian(&fund, 2).unwrap();
        let jinv = jac.inverse_table().unwrap();
        assert_eq!(jinv.get(&[0])[0][0], gq((1, 2), (0, 1)));
        assert_eq!(jinv.get(&[1])[0][0], gq((-1, 2), (0, 1)));
    }

    #[test]
    fn univariate_recovery_to_order_five() {
        // f and F with unit inner derivative so the series invert cleanly
        let f = [0i64, 1, 3, -2, 5, 1, -4];
        let big_f = [7i64, -3, 4, -1, 2, -5];
        let composite = poly_compose(&big_f, &f);
        let target = table_at_zero(&composite, 5);
        let fund = vec![table_at_zero(&f, 6)];
        let jac = MatTable::jacobian(&fund, 4).unwrap();
        let jinv = jac.inverse_table().unwrap();
        let mut fact: i128 = 1;
        for k in 0..=5usize {
            if k > 0 {
                fact *= k as i128;
            }
            let got = chi_derivative(&[k as u8], &target, &jinv).unwrap();
            let want = gi(big_f[k]).mul_i128(fact);
            assert_eq!(got, want, "order {}", k);
        }
    }

    /// Sparse bivariate integer polynomials as exponent -> coefficient maps.
    type Poly2 = std::collections::BTreeMap<(u8, u8), i64>;

    fn p2(terms: &[((u8, u8), i64)]) -> Poly2 {
        terms.iter().copied().collect()
    }

    fn p2_add(a: &Poly2, b: &Poly2) -> Poly2 {
        let mut out = a.clone();
        for (e, c) in b {
            *out.entry(*e).or_insert(0) += c;
        }
        out
    }

    fn p2_mul(a: &Poly2, b: &Poly2) -> Poly2 {
        let mut out = Poly2::new();
        for ((i, j), x) in a {
            for ((k, l), y) in b {
                *out.entry((i + k, j + l)).or_insert(0) += x * y;
            }
        }
        out
    }

    fn p2_pow(a: &Poly2, e: u8) -> Poly2 {
        let mut out = p2(&[((0, 0), 1)]);
        for _ in 0..e {
            out = p2_mul(&out, a);
        }
        out
    }

    fn p2_compose(outer: &Poly2, f1: &Poly2, f2: &Poly2) -> Poly2 {
        let mut out = Poly2::new();
        for ((a, b), c) in outer {
            let term = p2_mul(&p2_pow(f1, *a), &p2_pow(f2, *b));
            let scaled: Poly2 = term.into_iter().map(|(e, v)| (e, v * c)).collect();
            out = p2_add(&out, &scaled);
        }
        out
    }

    fn table2_at_zero(p: &Poly2, order: u8) -> DerivTable<GaussianRational> {
        let mut t = DerivTable::zeros(2, order, &gi(0));
        for ((a, b), c) in p {
            if (*a as u16 + *b as u16) > order as u16 {
                continue;
            }
            let mut fact: i128 = 1;
            for v in 2..=*a as i128 {
                fact *= v;
            }
            for v in 2..=*b as i128 {
                fact *= v;
            }
            t.add_to(&[*a, *b], &gi(*c).mul_i128(fact));
        }
        t
    }

    fn bivariate_fixture() -> (DerivTable<GaussianRational>, MatTable<GaussianRational>, Poly2) {
        // component maps with identity linear part and dense nonlinear tails
        let f1 = p2(&[((1, 0), 1), ((1, 1), 2), ((0, 3), 1), ((2, 0), -3), ((0, 2), 1)]);
        let f2 = p2(&[((0, 1), 1), ((2, 0), -1), ((1, 2), 3), ((1, 1), 1), ((3, 0), 2)]);
        let big_f = p2(&[
            ((2, 1), 1),
            ((1, 0), -3),
            ((0, 2), 2),
            ((1, 1), 5),
            ((3, 0), -2),
            ((0, 1), 7),
            ((2, 2), 1),
        ]);
        let composite = p2_compose(&big_f, &f1, &f2);
        let target = table2_at_zero(&composite, 4);
        let fund = vec![table2_at_zero(&f1, 5), table2_at_zero(&f2, 5)];
        let jac = MatTable::jacobian(&fund, 3).unwrap();
        (target, jac, big_f)
    }

    #[test]
    fn bivariate_recovery_to_order_four() {
        let (target, jac, big_f) = bivariate_fixture();
        let jinv = jac.inverse_table().unwrap();
        for c in multi_indices(2, 4) {
            let got = chi_derivative(&c, &target, &jinv).unwrap();
            let coef = *big_f.get(&(c[0], c[1])).unwrap_or(&0);
            let mut fact: i128 = 1;
            for v in 2..=c[0] as i128 {
                fact *= v;
            }
            for v in 2..=c[1] as i128 {
                fact *= v;
            }
            assert_eq!(got, gi(coef).mul_i128(fact), "c = {:?}", c);
        }
    }

    fn table_to_balls(
        t: &DerivTable<GaussianRational>,
        prec: u32,
    ) -> DerivTable<crate::mpfloat::Ball> {
        use crate::mpfloat::{Ball, Fpc};
        let proto = Ball::exact(Fpc::zero(prec));
        let mut out = DerivTable::zeros(t.rank, t.order, &proto);
        for (c, v) in t.iter() {
            let center = Fpc::from_gaussian(prec, v);
            let radius = center.ulp_radius();
            out.add_to(c, &Ball::new(center, radius));
        }
        out
    }

    #[test]
    fn ball_composition_encloses_exact_derivatives() {
        use crate::mpfloat::{two_pow, Ball, Fpc};
        let (target, jac, _) = bivariate_fixture();
        let jinv_exact = jac.inverse_table().unwrap();
        // same maps as the fixture, rebuilt for the ball path
        let f1 = p2(&[((1, 0), 1), ((1, 1), 2), ((0, 3), 1), ((2, 0), -3), ((0, 2), 1)]);
        let f2 = p2(&[((0, 1), 1), ((2, 0), -1), ((1, 2), 3), ((1, 1), 1), ((3, 0), 2)]);
        let prec = 128u32;
        let fund_balls = vec![
            table_to_balls(&table2_at_zero(&f1, 5), prec),
            table_to_balls(&table2_at_zero(&f2, 5), prec),
        ];
        let target_balls = table_to_balls(&target, prec);
        let jac_balls = MatTable::<Ball>::jacobian(&fund_balls, 3).unwrap();
        let jinv_balls = jac_balls.inverse_table().unwrap();
        for c in multi_indices(2, 4) {
            let got = chi_derivative(&c, &target_balls, &jinv_balls).unwrap();
            let exact = chi_derivative(&c, &target, &jinv_exact).unwrap();
            let exact_f = Fpc::from_gaussian(2 * prec, &exact);
            let err = got.center.sub(&exact_f).abs_up();
            assert!(got.radius.is_finite(), "c = {:?}", c);
            assert!(
                err <= got.radius,
                "c = {:?}: err {} exceeds radius {}",
                c,
                err,
                got.radius
            );
            assert!(got.radius < two_pow(-80), "c = {:?}: {}", c, got.radius);
        }
    }

    #[test]
    fn inverse_expansion_matches_recursion() {
        let (_, jac, _) = bivariate_fixture();
        let table = jac.inverse_table().unwrap();
        for c in multi_indices(2, 3) {
            let direct = jacobian_inverse_derivs(&jac, &c).unwrap();
            assert_eq!(&direct, table.get(&c), "c = {:?}", c);
        }
    }

    #[test]
    fn result_symmetric_in_factor_sequence() {
        let (target, jac, _) = bivariate_fixture();
        let jinv = jac.inverse_table().unwrap();
        for (a, b) in [(&[0usize, 1][..], &[1usize, 0][..])] {
            assert_eq!(
                chi_derivative_seq(a, &target, &jinv).unwrap(),
                chi_derivative_seq(b, &target, &jinv).unwrap()
            );
        }
        let perms: [&[usize]; 3] = [&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]];
        let vals: Vec<_> = perms
            .iter()
            .map(|p| chi_derivative_seq(p, &target, &jinv).unwrap())
            .collect();
        assert_eq!(vals[0], vals[1]);
        assert_eq!(vals[1], vals[2]);
    }

    #[test]
    fn conversion_is_linear_in_target() {
        let (target, jac, _) = bivariate_fixture();
        let jinv = jac.inverse_table().unwrap();
        let mut other = target.clone();
        other.scale_i128(3);
        let mut sum = target.clone();
        sum.add_assign(&other);
        for c in multi_indices(2, 3) {
            let a = chi_derivative(&c, &target, &jinv).unwrap();
            let b = chi_derivative(&c, &other, &jinv).unwrap();
            let s = chi_derivative(&c, &sum, &jinv).unwrap();
            assert_eq!(s, a.add_s(&b), "c = {:?}", c);
        }
    }

    #[test]
    fn fundamental_coordinates_have_kronecker_derivatives() {
        let r = build_root_system(LieType::parse("A2").unwrap());
        let q = vec![gq((3, 2), (1, 3)), gq((-2, 5), (7, 4))];
        let mut fund = Vec::new();
        for j in 0..2 {
            let mut lam = vec![0i64; 2];
            lam[j] = 1;
            let ws = weight_system(&r, &lam).unwrap();
            fund.push(power_sum_deriv(&ws.weights, 1, 3, &q).unwrap());
        }
        let jac = MatTable::jacobian(&fund, 2).unwrap();
        let jinv = jac.inverse_table().unwrap();
        for j in 0..2usize {
            for c in multi_indices(2, 2) {
                let got = chi_derivative(&c, &fund[j], &jinv).unwrap();
                let is_ej = c.iter().map(|&x| x as usize).sum::<usize>() == 1 && c[j] == 1;
                if is_ej {
                    assert_eq!(got, gi(1), "j = {} c = {:?}", j, c);
                } else if c.iter().any(|&x| x > 0) {
                    assert_eq!(got, gi(0), "j = {} c = {:?}", j, c);
                }
            }
        }
    }
}
