//! Numeric evaluation of characters and their torus derivatives.
//!
//! Everything here is organized around tables of plain partial derivatives
//! `D^c f = d^|c| f / dQ_1^{c_1} .. dQ_r^{c_r}` indexed by the multi-index
//! `c`, held for all `|c|` up to a fixed order. Products of tables follow
//! the Leibniz rule, exterior powers follow the Newton recursion in table
//! form, and for E8 the five fundamental characters whose weight systems are
//! too large to enumerate are assembled from tensor-algebra relations among
//! exterior powers of the three small ones.
//!
//! Every floating-point table can carry a parallel budget table holding a
//! rigorous upper bound on |computed - true| per entry, where "true" is the
//! exact value at any point within a given radius `eps` of the evaluation
//! point. Budgets are propagated through the same operations with directed
//! rounding, so a final table entry comes with a certificate usable for
//! lattice rounding.

use crate::liealg::{weight_system, LieError, RootSystem, WeightSystem};
use crate::mpfloat::{
    add_up, ball_pow_dev, ball_pow_sup, div_up, mul_up, roundoff_term, Ball, Fpc, RoundingError,
    BOUND_PREC, WORKING_PREC,
};
use crate::scalar::Scalar;
use rug::Float;
use std::collections::{BTreeMap, HashMap};

/// Multi-index of derivative orders per torus coordinate.
pub type DerivOrder = Vec<u8>;

#[derive(Debug, thiserror::Error)]
pub enum NumError {
    #[error("coordinate {0} is zero; torus points must have invertible coordinates")]
    ZeroCoordinate(usize),
    #[error("bound arithmetic: {0}")]
    Bound(#[from] RoundingError),
    #[error("weight system: {0}")]
    Lie(#[from] LieError),
    #[error("need power-sum tables up to m = {0}, got {1}")]
    MissingPower(usize, usize),
}

/// All multi-indices of length `rank` with total order at most `order`,
/// in ascending lexicographic order.
pub fn multi_indices(rank: usize, order: u8) -> Vec<DerivOrder> {
    fn rec(i: usize, rem: u8, c: &mut Vec<u8>, out: &mut Vec<DerivOrder>) {
        if i == c.len() {
            out.push(c.clone());
            return;
        }
        for v in 0..=rem {
            c[i] = v;
            rec(i + 1, rem - v, c, out);
        }
        c[i] = 0;
    }
    let mut out = Vec::new();
    let mut c = vec![0u8; rank];
    rec(0, order, &mut c, &mut out);
    out
}

/// Visit every multi-index `a <= c` componentwise, including 0 and `c`.
pub fn for_each_leq(c: &[u8], mut f: impl FnMut(&[u8])) {
    let mut a = vec![0u8; c.len()];
    loop {
        f(&a);
        let mut i = 0;
        loop {
            if i == c.len() {
                return;
            }
            if a[i] < c[i] {
                a[i] += 1;
                break;
            }
            a[i] = 0;
            i += 1;
        }
    }
}

fn binom_u64(n: u8, k: u8) -> u64 {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut v: u64 = 1;
    for t in 0..k {
        v = v * (n as u64 - t as u64) / (t as u64 + 1);
    }
    v
}

/// Product of componentwise binomial coefficients `prod_i C(c_i, a_i)`.
pub fn binom_prod(c: &[u8], a: &[u8]) -> i128 {
    let mut v: i128 = 1;
    for (ci, ai) in c.iter().zip(a) {
        v *= binom_u64(*ci, *ai) as i128;
    }
    v
}

/// Falling factorial `a (a-1) ... (a-n+1)` with signed base.
pub fn falling(a: i64, n: u8) -> i128 {
    let mut v: i128 = 1;
    for t in 0..n as i64 {
        v *= (a - t) as i128;
    }
    v
}

/// Table of plain partial derivatives of one function, dense in all
/// multi-indices with `|c| <= order`.
#[derive(Debug, Clone)]
pub struct DerivTable<S> {
    pub rank: usize,
    pub order: u8,
    entries: BTreeMap<DerivOrder, S>,
}

impl<S: Scalar> DerivTable<S> {
    pub fn zeros(rank: usize, order: u8, proto: &S) -> Self {
        let mut entries = BTreeMap::new();
        for c in multi_indices(rank, order) {
            entries.insert(c, proto.zero_like());
        }
        DerivTable {
            rank,
            order,
            entries,
        }
    }

    /// Table of a constant function: value at `c = 0`, zero elsewhere.
    pub fn constant(rank: usize, order: u8, value: S) -> Self {
        let mut t = Self::zeros(rank, order, &value);
        *t.entries.get_mut(vec![0u8; rank].as_slice()).unwrap() = value;
        t
    }

    pub fn get(&self, c: &[u8]) -> &S {
        self.entries.get(c).expect("multi-index out of table range")
    }

    pub fn value(&self) -> &S {
        self.get(&vec![0u8; self.rank])
    }

    pub fn add_to(&mut self, c: &[u8], v: &S) {
        let slot = self
            .entries
            .get_mut(c)
            .expect("multi-index out of table range");
        *slot = slot.add_s(v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DerivOrder, &S)> {
        self.entries.iter()
    }

    pub fn add_assign(&mut self, o: &Self) {
        for (c, v) in self.entries.iter_mut() {
            *v = v.add_s(o.get(c));
        }
    }

    pub fn sub_assign(&mut self, o: &Self) {
        for (c, v) in self.entries.iter_mut() {
            *v = v.sub_s(o.get(c));
        }
    }

    pub fn scale_i128(&mut self, k: i128) {
        for v in self.entries.values_mut() {
            *v = v.mul_i128(k);
        }
    }

    pub fn div_i128(&mut self, k: i128) {
        let d = self.value().one_like().mul_i128(k);
        for v in self.entries.values_mut() {
            *v = v.div_s(&d);
        }
    }

    /// Leibniz product; output order is the smaller of the two.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.rank, o.rank);
        let order = self.order.min(o.order);
        let proto = self.value();
        let mut out = Self::zeros(self.rank, order, proto);
        for (c, slot) in out.entries.iter_mut() {
            let mut acc = proto.zero_like();
            for_each_leq(c, |a| {
                let av = self.get(a);
                if av.is_zero_s() {
                    return;
                }
                let b: Vec<u8> = c.iter().zip(a).map(|(ci, ai)| ci - ai).collect();
                let bv = o.get(&b);
                if bv.is_zero_s() {
                    return;
                }
                let term = av.mul_s(bv).mul_i128(binom_prod(c, a));
                acc = acc.add_s(&term);
            });
            *slot = acc;
        }
        out
    }

    /// Copy of the table truncated to a smaller order.
    pub fn restricted(&self, order: u8) -> Self {
        assert!(order <= self.order);
        let entries = self
            .entries
            .iter()
            .filter(|(c, _)| c.iter().map(|&x| x as u16).sum::<u16>() <= order as u16)
            .map(|(c, v)| (c.clone(), v.clone()))
            .collect();
        DerivTable {
            rank: self.rank,
            order,
            entries,
        }
    }
}

impl DerivTable<Fpc> {
    /// Pair each entry with its certified deviation, turning the value table
    /// plus its budget into a ball table ready for enclosure-carrying
    /// composition.
    pub fn to_balls(&self, bud: &BudgetTable) -> DerivTable<Ball> {
        let entries = self
            .entries
            .iter()
            .map(|(c, v)| (c.clone(), Ball::new(v.clone(), bud.dev(c).clone())))
            .collect();
        DerivTable {
            rank: self.rank,
            order: self.order,
            entries,
        }
    }
}

/// Per-entry error budget for a floating-point `DerivTable`: `dev` bounds
/// |computed - true| (true taken anywhere in the evaluation ball), `mag`
/// bounds |true|. Both channels are nonnegative upper bounds held at
/// `BOUND_PREC` and combined with upward rounding.
#[derive(Debug, Clone)]
pub struct BudgetTable {
    pub rank: usize,
    pub order: u8,
    entries: BTreeMap<DerivOrder, (Float, Float)>,
}

impl BudgetTable {
    pub fn zeros(rank: usize, order: u8) -> Self {
        let mut entries = BTreeMap::new();
        for c in multi_indices(rank, order) {
            entries.insert(c, (Float::new(BOUND_PREC), Float::new(BOUND_PREC)));
        }
        BudgetTable {
            rank,
            order,
            entries,
        }
    }

    /// Budget of an exactly represented constant: no deviation, the given
    /// magnitude at `c = 0`.
    pub fn exact_constant(rank: usize, order: u8, mag: Float) -> Self {
        let mut b = Self::zeros(rank, order);
        b.entries.get_mut(vec![0u8; rank].as_slice()).unwrap().1 = mag;
        b
    }

    pub fn dev(&self, c: &[u8]) -> &Float {
        &self.entries.get(c).expect("multi-index out of range").0
    }

    pub fn mag(&self, c: &[u8]) -> &Float {
        &self.entries.get(c).expect("multi-index out of range").1
    }

    pub fn max_dev(&self) -> Float {
        let mut m = Float::new(BOUND_PREC);
        for (d, _) in self.entries.values() {
            if *d > m {
                m = d.clone();
            }
        }
        m
    }

    pub fn add_to(&mut self, c: &[u8], dev: &Float, mag: &Float) {
        let slot = self.entries.get_mut(c).expect("multi-index out of range");
        slot.0 = add_up(&slot.0, dev);
        slot.1 = add_up(&slot.1, mag);
    }

    /// Budget of a sum or difference of tables; absorbs the one rounding
    /// the value-side addition costs.
    pub fn add_assign(&mut self, o: &Self) {
        for (c, (dev, mag)) in self.entries.iter_mut() {
            *mag = add_up(mag, o.mag(c));
            *dev = add_up(&add_up(dev, o.dev(c)), &roundoff_term(mag, 1, WORKING_PREC));
        }
    }

    pub fn scale_u64(&mut self, k: u64) {
        let kf = Float::with_val(BOUND_PREC, k);
        for (dev, mag) in self.entries.values_mut() {
            *dev = mul_up(dev, &kf);
            *mag = mul_up(mag, &kf);
            *dev = add_up(dev, &roundoff_term(mag, 1, WORKING_PREC));
        }
    }

    pub fn div_u64(&mut self, k: u64) {
        let kf = Float::with_val(BOUND_PREC, k);
        for (dev, mag) in self.entries.values_mut() {
            *dev = div_up(dev, &kf);
            *mag = div_up(mag, &kf);
            *dev = add_up(dev, &roundoff_term(mag, 1, WORKING_PREC));
        }
    }

    /// Budget of a Leibniz product. For each split the computed factors
    /// satisfy |a~| <= mag_a + dev_a, so
    /// |a~ b~ - a b| <= (mag_a + dev_a) dev_b + mag_b dev_a,
    /// and the floating accumulation adds a round-off term.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.rank, o.rank);
        let order = self.order.min(o.order);
        let mut out = Self::zeros(self.rank, order);
        for (c, slot) in out.entries.iter_mut() {
            let mut dev = Float::new(BOUND_PREC);
            let mut mag = Float::new(BOUND_PREC);
            let mut pairs: u64 = 0;
            for_each_leq(c, |a| {
                let b: Vec<u8> = c.iter().zip(a).map(|(ci, ai)| ci - ai).collect();
                let bf = Float::with_val(BOUND_PREC, binom_prod(c, a));
                let (da, ma) = (self.dev(a), self.mag(a));
                let (db, mb) = (o.dev(&b), o.mag(&b));
                let cross = add_up(&mul_up(&add_up(ma, da), db), &mul_up(mb, da));
                dev = add_up(&dev, &mul_up(&bf, &cross));
                mag = add_up(&mag, &mul_up(&bf, &mul_up(ma, mb)));
                pairs += 1;
            });
            dev = add_up(&dev, &roundoff_term(&mag, 3 * pairs + 2, WORKING_PREC));
            *slot = (dev, mag);
        }
        out
    }

    pub fn restricted(&self, order: u8) -> Self {
        assert!(order <= self.order);
        let entries = self
            .entries
            .iter()
            .filter(|(c, _)| c.iter().map(|&x| x as u16).sum::<u16>() <= order as u16)
            .map(|(c, v)| (c.clone(), v.clone()))
            .collect();
        BudgetTable {
            rank: self.rank,
            order,
            entries,
        }
    }
}

/// Cache of signed integer powers of one coordinate.
pub struct CoordPowers<S> {
    pos: Vec<S>,
    neg: Vec<S>,
}

impl<S: Scalar> CoordPowers<S> {
    pub fn new(base: &S, index: usize) -> Result<Self, NumError> {
        if base.is_zero_s() {
            return Err(NumError::ZeroCoordinate(index));
        }
        let inv = base.one_like().div_s(base);
        Ok(CoordPowers {
            pos: vec![base.one_like(), base.clone()],
            neg: vec![base.one_like(), inv],
        })
    }

    pub fn get(&mut self, e: i64) -> &S {
        let (list, n) = if e >= 0 {
            (&mut self.pos, e as usize)
        } else {
            (&mut self.neg, (-e) as usize)
        };
        while list.len() <= n {
            let next = list[list.len() - 1].mul_s(&list[1]);
            list.push(next);
        }
        &list[n]
    }
}

/// Plain derivative table of `Q -> sum_w mult(w) prod_i Q_i^(m w_i)`, the
/// character of the weight system composed with the m-th power map. Each
/// entry is `sum_w mult(w) prod_i falling(m w_i, c_i) Q_i^(m w_i - c_i)`.
pub fn power_sum_deriv<S: Scalar>(
    weights: &[(Vec<i64>, u64)],
    m: i64,
    order: u8,
    q: &[S],
) -> Result<DerivTable<S>, NumError> {
    let rank = q.len();
    let proto = q[0].zero_like();
    let mut caches: Vec<CoordPowers<S>> = q
        .iter()
        .enumerate()
        .map(|(i, qi)| CoordPowers::new(qi, i))
        .collect::<Result<_, _>>()?;
    let mut table = DerivTable::zeros(rank, order, &proto);
    let ord = order as usize;
    fn rec<S: Scalar>(
        i: usize,
        rem: usize,
        prefix: &S,
        c: &mut Vec<u8>,
        factors: &[Vec<Option<S>>],
        table: &mut DerivTable<S>,
    ) {
        if i == factors.len() {
            table.add_to(c, prefix);
            return;
        }
        for ci in 0..=rem {
            if let Some(f) = &factors[i][ci] {
                c[i] = ci as u8;
                let next = prefix.mul_s(f);
                rec(i + 1, rem - ci, &next, c, factors, table);
            }
        }
        c[i] = 0;
    }
    let one = proto.one_like();
    for (w, mult) in weights {
        // factors[i][c_i] = coeff * Q_i^(m w_i - c_i); None marks zero coeff
        let mut factors: Vec<Vec<Option<S>>> = Vec::with_capacity(rank);
        for i in 0..rank {
            let mw = m * w[i];
            let mut col = Vec::with_capacity(ord + 1);
            for ci in 0..=ord as u8 {
                let mut coef = falling(mw, ci);
                if i == 0 {
                    coef *= *mult as i128;
                }
                if coef == 0 {
                    col.push(None);
                } else {
                    col.push(Some(caches[i].get(mw - ci as i64).mul_i128(coef)));
                }
            }
            factors.push(col);
        }
        let mut c = vec![0u8; rank];
        rec(0, ord, &one, &mut c, &factors, &mut table);
    }
    Ok(table)
}

/// Same table in multiprecision floats, with a rigorous budget against the
/// true value at any point within `eps` of `q` coordinatewise.
pub fn power_sum_deriv_bounded(
    weights: &[(Vec<i64>, u64)],
    m: i64,
    order: u8,
    q: &[Fpc],
    eps: &Float,
) -> Result<(DerivTable<Fpc>, BudgetTable), NumError> {
    let rank = q.len();
    let table = power_sum_deriv(weights, m, order, q)?;
    let mut budget = BudgetTable::zeros(rank, order);
    let qlo: Vec<Float> = q.iter().map(|z| z.abs_down()).collect();
    let qhi: Vec<Float> = q.iter().map(|z| z.abs_up()).collect();
    // per-coordinate ball sup / deviation caches keyed by exponent
    let mut cache: Vec<HashMap<i64, (Float, Float)>> = vec![HashMap::new(); rank];
    let ord = order as usize;
    let mut max_exp_sum: u64 = 0;
    // telescoping product: p = prod sup, r = sum_j dev_j prod_{i != j} sup_i
    fn rec(
        i: usize,
        rem: usize,
        p: &Float,
        r: &Float,
        c: &mut Vec<u8>,
        sups: &[Vec<Option<(Float, Float)>>],
        budget: &mut BudgetTable,
    ) {
        if i == sups.len() {
            budget.add_to(c, r, p);
            return;
        }
        for ci in 0..=rem {
            if let Some((s, d)) = &sups[i][ci] {
                c[i] = ci as u8;
                let rn = add_up(&mul_up(r, s), &mul_up(p, d));
                let pn = mul_up(p, s);
                rec(i + 1, rem - ci, &pn, &rn, c, sups, budget);
            }
        }
        c[i] = 0;
    }
    let one = Float::with_val(BOUND_PREC, 1);
    let zero = Float::new(BOUND_PREC);
    for (w, mult) in weights {
        let mut sups: Vec<Vec<Option<(Float, Float)>>> = Vec::with_capacity(rank);
        let mut exp_sum: u64 = 0;
        for i in 0..rank {
            let mw = m * w[i];
            exp_sum += mw.unsigned_abs() + ord as u64;
            let mut col = Vec::with_capacity(ord + 1);
            for ci in 0..=ord as u8 {
                let mut coef = falling(mw, ci);
                if i == 0 {
                    coef *= *mult as i128;
                }
                if coef == 0 {
                    col.push(None);
                    continue;
                }
                let e = mw - ci as i64;
                if !cache[i].contains_key(&e) {
                    let s = ball_pow_sup(&qlo[i], &qhi[i], eps, e)?;
                    let d = ball_pow_dev(&qlo[i], &qhi[i], eps, e)?;
                    cache[i].insert(e, (s, d));
                }
                let (s, d) = &cache[i][&e];
                let cf = Float::with_val(BOUND_PREC, coef.unsigned_abs());
                col.push(Some((mul_up(&cf, s), mul_up(&cf, d))));
            }
            sups.push(col);
        }
        max_exp_sum = max_exp_sum.max(exp_sum);
        let mut c = vec![0u8; rank];
        rec(0, ord, &one, &zero, &mut c, &sups, &mut budget);
    }
    // Accumulated round-off: each leaf is a short product chain whose
    // factors carry the relative errors of the cached powers; linearized
    // with a factor-2 margin.
    let ops = 2 * (max_exp_sum + rank as u64 + 2);
    for (dev, mag) in budget.entries.values_mut() {
        *dev = add_up(dev, &roundoff_term(mag, ops, WORKING_PREC));
    }
    Ok((table, budget))
}

/// Newton recursion for derivative tables of elementary symmetric characters
/// (exterior powers): `E_k = (1/k) sum_{m=1}^k (-1)^(m+1) P_m E_{k-m}`, with
/// `powers[m-1]` the table of the m-th power sum. Returns `E_0 .. E_kmax`.
pub fn exterior_deriv<S: Scalar>(
    powers: &[DerivTable<S>],
    kmax: usize,
) -> Result<Vec<DerivTable<S>>, NumError> {
    if powers.len() < kmax {
        return Err(NumError::MissingPower(kmax, powers.len()));
    }
    if powers.is_empty() {
        return Ok(vec![]);
    }
    let rank = powers[0].rank;
    let order = powers[0].order;
    let proto = powers[0].value();
    let mut es = Vec::with_capacity(kmax + 1);
    es.push(DerivTable::constant(rank, order, proto.one_like()));
    for k in 1..=kmax {
        let mut acc = DerivTable::zeros(rank, order, proto);
        for m in 1..=k {
            let prod = powers[m - 1].mul(&es[k - m]);
            if m % 2 == 1 {
                acc.add_assign(&prod);
            } else {
                acc.sub_assign(&prod);
            }
        }
        acc.div_i128(k as i128);
        es.push(acc);
    }
    Ok(es)
}

/// Budgeted Newton recursion; mirrors every value operation.
pub fn exterior_deriv_bounded(
    powers: &[(DerivTable<Fpc>, BudgetTable)],
    kmax: usize,
) -> Result<Vec<(DerivTable<Fpc>, BudgetTable)>, NumError> {
    if powers.len() < kmax {
        return Err(NumError::MissingPower(kmax, powers.len()));
    }
    if powers.is_empty() {
        return Ok(vec![]);
    }
    let rank = powers[0].0.rank;
    let order = powers[0].0.order;
    let proto = powers[0].0.value();
    let mut es: Vec<(DerivTable<Fpc>, BudgetTable)> = Vec::with_capacity(kmax + 1);
    es.push((
        DerivTable::constant(rank, order, proto.one_like()),
        BudgetTable::exact_constant(rank, order, Float::with_val(BOUND_PREC, 1)),
    ));
    for k in 1..=kmax {
        let mut acc = DerivTable::zeros(rank, order, proto);
        let mut bud = BudgetTable::zeros(rank, order);
        for m in 1..=k {
            let prod = powers[m - 1].0.mul(&es[k - m].0);
            let pbud = powers[m - 1].1.mul(&es[k - m].1);
            if m % 2 == 1 {
                acc.add_assign(&prod);
            } else {
                acc.sub_assign(&prod);
            }
            bud.add_assign(&pbud);
        }
        acc.div_i128(k as i128);
        bud.div_u64(k as u64);
        es.push((acc, bud));
    }
    Ok(es)
}

/// Weight systems backing numeric character evaluation for one group. For
/// E8 only the three fundamental representations with tractable weight
/// systems are enumerated; the rest are reached through exterior-power
/// relations in the representation ring.
pub struct CharBasis {
    pub rank: usize,
    pub adjoint: WeightSystem,
    pub direct: Vec<Option<WeightSystem>>,
    pub e8_chain: bool,
}

/// Index (0-based) of the adjoint node in the E8 labelling used throughout.
pub const E8_ADJOINT: usize = 6;

impl CharBasis {
    pub fn new(rs: &RootSystem) -> Result<Self, NumError> {
        let theta = rs.positive_roots.last().expect("no roots");
        let theta_w = rs.root_to_weight_basis(theta);
        let adjoint = weight_system(rs, &theta_w)?;
        let e8 = rs.kind.name() == "E8";
        let mut direct: Vec<Option<WeightSystem>> = Vec::with_capacity(rs.rank);
        for j in 0..rs.rank {
            if e8 && j != 0 && j != 7 {
                // the adjoint slot is served by the highest-root system
                direct.push(None);
                continue;
            }
            let mut lam = vec![0i64; rs.rank];
            lam[j] = 1;
            direct.push(Some(weight_system(rs, &lam)?));
        }
        Ok(CharBasis {
            rank: rs.rank,
            adjoint,
            direct,
            e8_chain: e8,
        })
    }

    fn fund_weights(&self, j: usize) -> Option<&WeightSystem> {
        if self.e8_chain && j == E8_ADJOINT {
            Some(&self.adjoint)
        } else {
            self.direct[j].as_ref()
        }
    }
}

/// Derivative tables of all fundamental characters (order `ext_order + 1`)
/// and of the exterior powers of the adjoint up to `kmax` (order
/// `ext_order`), with budgets, at one evaluation point.
pub struct CharTables {
    pub rank: usize,
    pub fund_order: u8,
    pub ext_order: u8,
    pub fund: Vec<DerivTable<Fpc>>,
    pub fund_bud: Vec<BudgetTable>,
    pub ext: Vec<DerivTable<Fpc>>,
    pub ext_bud: Vec<BudgetTable>,
}

pub fn char_tables(
    basis: &CharBasis,
    q: &[Fpc],
    eps: &Float,
    kmax: usize,
    ext_order: u8,
) -> Result<CharTables, NumError> {
    assert_eq!(q.len(), basis.rank);
    let rank = basis.rank;
    let fund_order = ext_order + 1;
    let chain_top = if basis.e8_chain { 5 } else { 0 };
    let m_top = kmax.max(chain_top);
    // adjoint power-sum tables at the higher order serve both consumers
    let mut adj_powers: Vec<(DerivTable<Fpc>, BudgetTable)> = Vec::with_capacity(m_top);
    for m in 1..=m_top {
        adj_powers.push(power_sum_deriv_bounded(
            &basis.adjoint.weights,
            m as i64,
            fund_order,
            q,
            eps,
        )?);
    }
    let ext_powers: Vec<(DerivTable<Fpc>, BudgetTable)> = adj_powers[..kmax]
        .iter()
        .map(|(t, b)| (t.restricted(ext_order), b.restricted(ext_order)))
        .collect();
    let ext_pairs = exterior_deriv_bounded(&ext_powers, kmax)?;

    let mut fund: Vec<Option<(DerivTable<Fpc>, BudgetTable)>> = (0..rank).map(|_| None).collect();
    for j in 0..rank {
        if let Some(ws) = basis.fund_weights(j) {
            fund[j] = Some(power_sum_deriv_bounded(
                &ws.weights,
                1,
                fund_order,
                q,
                eps,
            )?);
        }
    }
    if basis.e8_chain {
        let ech = exterior_deriv_bounded(&adj_powers[..chain_top], chain_top)?;
        let w1 = basis.direct[0].as_ref().expect("first fundamental");
        let mut w1_powers = Vec::with_capacity(2);
        for m in 1..=2 {
            w1_powers.push(power_sum_deriv_bounded(
                &w1.weights,
                m as i64,
                fund_order,
                q,
                eps,
            )?);
        }
        let ew1 = exterior_deriv_bounded(&w1_powers, 2)?;
        let chi7 = fund[E8_ADJOINT].clone().unwrap();
        let chi1 = fund[0].clone().unwrap();
        let chi8 = fund[7].clone().unwrap();
        // wedge^2 g = V6 + g
        let mut f6 = ech[2].clone();
        f6.0.sub_assign(&chi7.0);
        f6.1.add_assign(&chi7.1);
        // wedge^3 g = V5 - g + g x g
        let mut f5 = ech[3].clone();
        f5.0.add_assign(&chi7.0);
        f5.1.add_assign(&chi7.1);
        let sq = (chi7.0.mul(&chi7.0), chi7.1.mul(&chi7.1));
        f5.0.sub_assign(&sq.0);
        f5.1.add_assign(&sq.1);
        // wedge^4 g + wedge^3 g + wedge^2 g = V4 + wedge^2 g x g + V5
        let mut f4 = ech[4].clone();
        f4.0.add_assign(&ech[3].0);
        f4.1.add_assign(&ech[3].1);
        f4.0.add_assign(&ech[2].0);
        f4.1.add_assign(&ech[2].1);
        let e2g = (ech[2].0.mul(&chi7.0), ech[2].1.mul(&chi7.1));
        f4.0.sub_assign(&e2g.0);
        f4.1.add_assign(&e2g.1);
        f4.0.sub_assign(&f5.0);
        f4.1.add_assign(&f5.1);
        // wedge^5 g + 2 wedge^4 g + 2 wedge^2 g = V3 + g + wedge^3 g x g + 2 V4
        let mut f3 = ech[5].clone();
        let mut e4x2 = ech[4].clone();
        e4x2.0.scale_i128(2);
        e4x2.1.scale_u64(2);
        f3.0.add_assign(&e4x2.0);
        f3.1.add_assign(&e4x2.1);
        let mut e2x2 = ech[2].clone();
        e2x2.0.scale_i128(2);
        e2x2.1.scale_u64(2);
        f3.0.add_assign(&e2x2.0);
        f3.1.add_assign(&e2x2.1);
        f3.0.sub_assign(&chi7.0);
        f3.1.add_assign(&chi7.1);
        let e3g = (ech[3].0.mul(&chi7.0), ech[3].1.mul(&chi7.1));
        f3.0.sub_assign(&e3g.0);
        f3.1.add_assign(&e3g.1);
        let mut f4x2 = f4.clone();
        f4x2.0.scale_i128(2);
        f4x2.1.scale_u64(2);
        f3.0.sub_assign(&f4x2.0);
        f3.1.add_assign(&f4x2.1);
        // wedge^2 V1 + V1 + V8 = V2 + V1 x g
        let mut f2 = ew1[2].clone();
        f2.0.add_assign(&chi1.0);
        f2.1.add_assign(&chi1.1);
        let g1 = (chi1.0.mul(&chi7.0), chi1.1.mul(&chi7.1));
        f2.0.sub_assign(&g1.0);
        f2.1.add_assign(&g1.1);
        f2.0.add_assign(&chi8.0);
        f2.1.add_assign(&chi8.1);
        fund[1] = Some(f2);
        fund[2] = Some(f3);
        fund[3] = Some(f4);
        fund[4] = Some(f5);
        fund[5] = Some(f6);
    }
    let mut fv = Vec::with_capacity(rank);
    let mut fb = Vec::with_capacity(rank);
    for pair in fund.into_iter() {
        let (t, b) = pair.expect("all fundamentals assembled");
        fv.push(t);
        fb.push(b);
    }
    let mut ev = Vec::with_capacity(kmax + 1);
    let mut eb = Vec::with_capacity(kmax + 1);
    for (t, b) in ext_pairs {
        ev.push(t);
        eb.push(b);
    }
    Ok(CharTables {
        rank,
        fund_order,
        ext_order,
        fund: fv,
        fund_bud: fb,
        ext: ev,
        ext_bud: eb,
    })
}

/// Value-only fundamental tables to derivative order `order`, without error
/// budgets.  Same assembly as `char_tables`, generic over the scalar; the
/// cheap path for plain Newton steps where no enclosure is needed.
pub fn fund_tables<S: Scalar>(
    basis: &CharBasis,
    q: &[S],
    order: u8,
) -> Result<Vec<DerivTable<S>>, NumError> {
    assert_eq!(q.len(), basis.rank);
    let rank = basis.rank;
    let mut fund: Vec<Option<DerivTable<S>>> = (0..rank).map(|_| None).collect();
    for j in 0..rank {
        if let Some(ws) = basis.fund_weights(j) {
            fund[j] = Some(power_sum_deriv(&ws.weights, 1, order, q)?);
        }
    }
    if basis.e8_chain {
        let mut adj_powers = Vec::with_capacity(5);
        for m in 1..=5 {
            adj_powers.push(power_sum_deriv(&basis.adjoint.weights, m, order, q)?);
        }
        let ech = exterior_deriv(&adj_powers, 5)?;
        let w1 = basis.direct[0].as_ref().expect("first fundamental");
        let mut w1_powers = Vec::with_capacity(2);
        for m in 1..=2 {
            w1_powers.push(power_sum_deriv(&w1.weights, m, order, q)?);
        }
        let ew1 = exterior_deriv(&w1_powers, 2)?;
        let chi7 = fund[E8_ADJOINT].clone().unwrap();
        let chi1 = fund[0].clone().unwrap();
        let chi8 = fund[7].clone().unwrap();
        // wedge^2 g = V6 + g
        let mut f6 = ech[2].clone();
        f6.sub_assign(&chi7);
        // wedge^3 g = V5 - g + g x g
        let mut f5 = ech[3].clone();
        f5.add_assign(&chi7);
        f5.sub_assign(&chi7.mul(&chi7));
        // wedge^4 g + wedge^3 g + wedge^2 g = V4 + wedge^2 g x g + V5
        let mut f4 = ech[4].clone();
        f4.add_assign(&ech[3]);
        f4.add_assign(&ech[2]);
        f4.sub_assign(&ech[2].mul(&chi7));
        f4.sub_assign(&f5);
        // wedge^5 g + 2 wedge^4 g + 2 wedge^2 g = V3 + g + wedge^3 g x g + 2 V4
        let mut f3 = ech[5].clone();
        let mut e4x2 = ech[4].clone();
        e4x2.scale_i128(2);
        f3.add_assign(&e4x2);
        let mut e2x2 = ech[2].clone();
        e2x2.scale_i128(2);
        f3.add_assign(&e2x2);
        f3.sub_assign(&chi7);
        f3.sub_assign(&ech[3].mul(&chi7));
        let mut f4x2 = f4.clone();
        f4x2.scale_i128(2);
        f3.sub_assign(&f4x2);
        // wedge^2 V1 + V1 + V8 = V2 + V1 x g
        let mut f2 = ew1[2].clone();
        f2.add_assign(&chi1);
        f2.sub_assign(&chi1.mul(&chi7));
        f2.add_assign(&chi8);
        fund[1] = Some(f2);
        fund[2] = Some(f3);
        fund[3] = Some(f4);
        fund[4] = Some(f5);
        fund[5] = Some(f6);
    }
    Ok(fund
        .into_iter()
        .map(|t| t.expect("all fundamentals assembled"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charcalc::{char_laurent, exterior_laurent, LaurentPoly};
    use crate::liealg::{build_root_system, LieType};
    use crate::mpfloat::{exp_2pii, rational_to_float, two_pow};
    use crate::qi::GaussianRational;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::Zero;

    fn rs(name: &str) -> RootSystem {
        build_root_system(LieType::parse(name).unwrap())
    }

    fn gq(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    /// Symbolic partial derivative of a Laurent polynomial in coordinate i.
    fn laurent_deriv(p: &LaurentPoly, i: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(p.rank);
        for (e, c) in p.iter() {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.insert_add(e2, c * e[i] as i128);
        }
        out
    }

    fn laurent_deriv_multi(p: &LaurentPoly, c: &[u8]) -> LaurentPoly {
        let mut out = p.clone();
        for (i, &ci) in c.iter().enumerate() {
            for _ in 0..ci {
                out = laurent_deriv(&out, i);
            }
        }
        out
    }

    #[test]
    fn multi_index_counts_and_order() {
        let m = multi_indices(8, 5);
        assert_eq!(m.len(), 1287);
        assert_eq!(multi_indices(8, 4).len(), 495);
        assert_eq!(multi_indices(8, 3).len(), 165);
        for w in m.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(m[0], vec![0u8; 8]);
    }

    #[test]
    fn binomial_and_falling_values() {
        assert_eq!(binom_prod(&[3, 2, 0], &[1, 1, 0]), 6);
        assert_eq!(binom_prod(&[5, 0, 0], &[5, 0, 0]), 1);
        assert_eq!(falling(7, 3), 210);
        assert_eq!(falling(-2, 3), -24);
        assert_eq!(falling(2, 4), 0);
        assert_eq!(falling(5, 0), 1);
    }

    #[test]
    fn power_sum_matches_symbolic_derivatives_a2() {
        let r = rs("A2");
        let basis = CharBasis::new(&r).unwrap();
        let chi = char_laurent(&basis.adjoint);
        let q = vec![gq((3, 2), (1, 3)), gq((-2, 5), (7, 4))];
        for m in 1..=3i64 {
            let table = power_sum_deriv(&basis.adjoint.weights, m, 3, &q).unwrap();
            let chi_m = chi.scale_exponents(m);
            for c in multi_indices(2, 3) {
                let sym = laurent_deriv_multi(&chi_m, &c).eval_gaussian(&q).unwrap();
                let got = table.get(&c);
                assert_eq!(&sym, got, "m={} c={:?}", m, c);
            }
        }
    }

    #[test]
    fn exterior_tables_match_symbolic_a2() {
        let r = rs("A2");
        let basis = CharBasis::new(&r).unwrap();
        let chi = char_laurent(&basis.adjoint);
        let wedges = exterior_laurent(&chi, 4).unwrap();
        let q = vec![gq((2, 3), (-1, 2)), gq((1, 5), (3, 7))];
        let powers: Vec<DerivTable<GaussianRational>> = (1..=4)
            .map(|m| power_sum_deriv(&basis.adjoint.weights, m, 2, &q).unwrap())
            .collect();
        let es = exterior_deriv(&powers, 4).unwrap();
        for k in 0..=4usize {
            for c in multi_indices(2, 2) {
                let sym = laurent_deriv_multi(&wedges[k], &c)
                    .eval_gaussian(&q)
                    .unwrap();
                assert_eq!(&sym, es[k].get(&c), "k={} c={:?}", k, c);
            }
        }
    }

    fn fpc_from_f64(re: f64, im: f64) -> Fpc {
        Fpc {
            re: Float::with_val(WORKING_PREC, re),
            im: Float::with_val(WORKING_PREC, im),
        }
    }

    #[test]
    fn budgets_contain_perturbation_a2() {
        let r = rs("A2");
        let basis = CharBasis::new(&r).unwrap();
        let q = vec![fpc_from_f64(0.75, 0.5), fpc_from_f64(-1.25, 0.25)];
        let eps = two_pow(-80);
        // a perturbed point inside the ball: |delta| = eps/sqrt(2) < eps
        let half = Float::with_val(WORKING_PREC, &two_pow(-81));
        let qp: Vec<Fpc> = q
            .iter()
            .map(|z| {
                z.add(&Fpc {
                    re: half.clone(),
                    im: half.clone(),
                })
            })
            .collect();
        let powers: Vec<(DerivTable<Fpc>, BudgetTable)> = (1..=3)
            .map(|m| power_sum_deriv_bounded(&basis.adjoint.weights, m, 2, &q, &eps).unwrap())
            .collect();
        let powers_p: Vec<(DerivTable<Fpc>, BudgetTable)> = (1..=3)
            .map(|m| power_sum_deriv_bounded(&basis.adjoint.weights, m, 2, &qp, &eps).unwrap())
            .collect();
        let es = exterior_deriv_bounded(&powers, 3).unwrap();
        let es_p = exterior_deriv_bounded(&powers_p, 3).unwrap();
        for k in 0..=3usize {
            for c in multi_indices(2, 2) {
                let diff = es[k].0.get(&c).sub(es_p[k].0.get(&c)).abs_up();
                let allow = add_up(es[k].1.dev(&c), es_p[k].1.dev(&c));
                assert!(
                    diff <= allow,
                    "k={} c={:?} diff={} allow={}",
                    k,
                    c,
                    diff,
                    allow
                );
                // budgets must stay meaningful, not blow up
                let mag = es[k].1.mag(&c);
                assert!(es[k].1.dev(&c) <= &mul_up(&two_pow(-60), &add_up(mag, &two_pow(0))));
            }
        }
    }

    #[test]
    fn zero_radius_budget_is_roundoff_only() {
        let r = rs("A3");
        let basis = CharBasis::new(&r).unwrap();
        let q: Vec<Fpc> = (0..3)
            .map(|i| fpc_from_f64(0.5 + 0.25 * i as f64, -0.375))
            .collect();
        let eps = Float::new(BOUND_PREC);
        let (_, bud) = power_sum_deriv_bounded(&basis.adjoint.weights, 2, 2, &q, &eps).unwrap();
        for c in multi_indices(3, 2) {
            let dev = bud.dev(&c);
            let mag = bud.mag(&c);
            assert!(dev <= &mul_up(&two_pow(-450), &add_up(mag, &two_pow(-460))));
        }
    }

    #[test]
    fn small_group_char_tables_match_exact() {
        let r = rs("A2");
        let basis = CharBasis::new(&r).unwrap();
        let q = vec![fpc_from_f64(0.625, -0.5), fpc_from_f64(1.125, 0.75)];
        let eps = Float::new(BOUND_PREC);
        let tabs = char_tables(&basis, &q, &eps, 3, 1).unwrap();
        assert_eq!(tabs.fund_order, 2);
        let qg = vec![gq((5, 8), (-1, 2)), gq((9, 8), (3, 4))];
        for j in 0..2 {
            let mut lam = vec![0i64; 2];
            lam[j] = 1;
            let ws = weight_system(&r, &lam).unwrap();
            let chi = char_laurent(&ws);
            for c in multi_indices(2, 2) {
                let exact = laurent_deriv_multi(&chi, &c).eval_gaussian(&qg).unwrap();
                let exact_f = Fpc {
                    re: rational_to_float(WORKING_PREC, &exact.re),
                    im: rational_to_float(WORKING_PREC, &exact.im),
                };
                assert!(tabs.fund[j].get(&c).sub(&exact_f).abs_up() < two_pow(-400));
            }
        }
        let adj_chi = char_laurent(&basis.adjoint);
        let wedges = exterior_laurent(&adj_chi, 3).unwrap();
        for k in 0..=3usize {
            let exact = wedges[k].eval_gaussian(&qg).unwrap();
            let exact_f = Fpc {
                re: rational_to_float(WORKING_PREC, &exact.re),
                im: rational_to_float(WORKING_PREC, &exact.im),
            };
            assert!(tabs.ext[k].value().sub(&exact_f).abs_up() < two_pow(-400));
        }
    }

    /// Coefficients c_k with f(w) = sum_k c_k w_k realizing the pairing of a
    /// weight with the sum of all positive coroots (twice the dual Weyl
    /// vector): the principal grading that is integral for every group.
    fn principal_grading(r: &RootSystem) -> Vec<i64> {
        let mut acc = vec![BigRational::zero(); r.rank];
        for root in &r.positive_roots {
            let aw = r.root_to_weight_basis(root);
            let norm = r.ip_weights(&aw, &aw);
            for k in 0..r.rank {
                let num =
                    BigRational::from(BigInt::from(2 * root[k] * r.sym[k]));
                acc[k] += num / &norm;
            }
        }
        acc.iter()
            .map(|x| {
                assert!(x.is_integer(), "grading must be integral");
                i64::try_from(&x.to_integer()).unwrap()
            })
            .collect()
    }

    fn grade(grading: &[i64], w: &[i64]) -> i64 {
        grading.iter().zip(w).map(|(c, w)| c * w).sum()
    }

    fn qpow(q: &BigRational, e: i64) -> BigRational {
        let mut v = BigRational::from(BigInt::from(1));
        let base = if e >= 0 {
            q.clone()
        } else {
            q.recip()
        };
        for _ in 0..e.unsigned_abs() {
            v *= &base;
        }
        v
    }

    /// Principal character value from the weight system.
    fn principal_char_value(
        r: &RootSystem,
        ws: &WeightSystem,
        grading: &[i64],
        q: &BigRational,
    ) -> BigRational {
        let _ = r;
        let mut acc = BigRational::zero();
        for (w, mult) in &ws.weights {
            acc += qpow(q, grade(grading, w)) * BigRational::from(BigInt::from(*mult));
        }
        acc
    }

    /// Principal character value from the Weyl product formula:
    /// prod_{a>0} (q^<lam+rho,a~> - q^-<lam+rho,a~>) / (rho term), with a~
    /// the coroot.
    fn principal_char_formula(r: &RootSystem, lam: &[i64], q: &BigRational) -> BigRational {
        let lam_rho: Vec<i64> = lam.iter().map(|&x| x + 1).collect();
        let rho: Vec<i64> = vec![1; r.rank];
        let term = |mu: &[i64]| -> BigRational {
            let mut prod = BigRational::from(BigInt::from(1));
            for root in &r.positive_roots {
                let aw = r.root_to_weight_basis(root);
                let num = r.ip_weights(mu, &aw);
                let den = r.ip_weights(&aw, &aw);
                let pair = BigRational::from(BigInt::from(2)) * num / den;
                assert!(pair.is_integer());
                let a = i64::try_from(&pair.to_integer()).unwrap();
                prod *= qpow(q, a) - qpow(q, -a);
            }
            prod
        };
        term(&lam_rho) / term(&rho)
    }

    #[test]
    fn principal_formula_matches_weight_sums() {
        let q = BigRational::new(BigInt::from(2), BigInt::from(1));
        for name in ["A2", "A3", "G2", "D4"] {
            let r = rs(name);
            let grading = principal_grading(&r);
            for j in 0..r.rank {
                let mut lam = vec![0i64; r.rank];
                lam[j] = 1;
                let ws = weight_system(&r, &lam).unwrap();
                let direct = principal_char_value(&r, &ws, &grading, &q);
                let formula = principal_char_formula(&r, &lam, &q);
                assert_eq!(direct, formula, "{} node {}", name, j + 1);
            }
        }
    }

    /// Elementary symmetric values e_0..e_kmax of a multiset of rationals.
    fn elem_sym_values(vals: &[BigRational], kmax: usize) -> Vec<BigRational> {
        let mut es = vec![BigRational::zero(); kmax + 1];
        es[0] = BigRational::from(BigInt::from(1));
        for v in vals {
            for k in (1..=kmax).rev() {
                let t = es[k - 1].clone() * v;
                es[k] += t;
            }
        }
        es
    }

    #[test]
    fn e8_chain_identities_hold_at_principal_points() {
        let r = rs("E8");
        let grading = principal_grading(&r);
        // the highest root pairs with the coroot sum to twice (h_dual - 1)
        let theta = r.positive_roots.last().unwrap();
        let theta_w = r.root_to_weight_basis(theta);
        assert_eq!(grade(&grading, &theta_w), 58);

        let ws1 = weight_system(&r, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        let adjoint = weight_system(&r, &theta_w).unwrap();
        for q in [
            BigRational::new(BigInt::from(2), BigInt::from(1)),
            BigRational::new(BigInt::from(3), BigInt::from(2)),
        ] {
            // eigenvalue multisets for the adjoint and the smallest
            // fundamental, graded principally
            let mut adj_vals = Vec::with_capacity(248);
            for (w, mult) in &adjoint.weights {
                let v = qpow(&q, grade(&grading, w));
                for _ in 0..*mult {
                    adj_vals.push(v.clone());
                }
            }
            assert_eq!(adj_vals.len(), 248);
            let es = elem_sym_values(&adj_vals, 5);
            let mut v1_vals = Vec::with_capacity(3875);
            for (w, mult) in &ws1.weights {
                let v = qpow(&q, grade(&grading, w));
                for _ in 0..*mult {
                    v1_vals.push(v.clone());
                }
            }
            assert_eq!(v1_vals.len(), 3875);
            let es1 = elem_sym_values(&v1_vals, 2);

            let chi = |j: usize| {
                let mut lam = vec![0i64; 8];
                lam[j] = 1;
                principal_char_formula(&r, &lam, &q)
            };
            let (c1, c7, c8) = (chi(0), chi(6), chi(7));
            // direct weight sums agree with the product formula
            assert_eq!(c7, principal_char_value(&r, &adjoint, &grading, &q));
            assert_eq!(c1, principal_char_value(&r, &ws1, &grading, &q));

            // two-form: wedge^2 g = V6 + g
            assert_eq!(chi(5), es[2].clone() - &c7);
            // three-form: wedge^3 g = V5 - g + g x g
            let c5 = chi(4);
            assert_eq!(c5, es[3].clone() + &c7 - c7.clone() * &c7);
            // four-form: V4 = wedge^4 + wedge^3 + wedge^2 - wedge^2 x g - V5
            let c4 = chi(3);
            assert_eq!(
                c4,
                es[4].clone() + &es[3] + &es[2] - es[2].clone() * &c7 - &c5
            );
            // five-form: V3 = wedge^5 + 2 wedge^4 + 2 wedge^2 - g
            //                 - wedge^3 x g - 2 V4
            let two = BigRational::from(BigInt::from(2));
            assert_eq!(
                chi(2),
                es[5].clone() + es[4].clone() * &two + es[2].clone() * &two
                    - &c7
                    - es[3].clone() * &c7
                    - c4.clone() * &two
            );
            // wedge^2 V1: V2 = wedge^2 V1 + V1 - V1 x g + V8
            assert_eq!(chi(1), es1[2].clone() + &c1 - c1.clone() * &c7 + &c8);
        }
    }

    #[test]
    fn e8_vanishing_point_kills_all_fundamentals() {
        let r = rs("E8");
        let basis = CharBasis::new(&r).unwrap();
        assert_eq!(basis.adjoint.weights.len(), 241);
        let h0: [i64; 8] = [6, 3, 15, 1, 12, -4, 5, 0];
        let q: Vec<Fpc> = h0
            .iter()
            .map(|&h| {
                exp_2pii(
                    WORKING_PREC,
                    &BigRational::new(BigInt::from(-h), BigInt::from(31)),
                )
            })
            .collect();
        let eps = Float::new(BOUND_PREC);
        let tabs = char_tables(&basis, &q, &eps, 3, 1).unwrap();
        for j in 0..8 {
            let v = tabs.fund[j].value().abs_up();
            assert!(v < two_pow(-400), "fundamental {} = {}", j + 1, v);
            // zero lies inside the certified enclosure
            let c0 = vec![0u8; 8];
            assert!(&v <= tabs.fund_bud[j].dev(&c0), "fundamental {}", j + 1);
        }
        for k in 1..=3usize {
            let v = tabs.ext[k].value().abs_up();
            assert!(v < two_pow(-400), "wedge {} = {}", k, v);
        }
        // the point is regular: the Jacobian has an entry of honest size
        let mut e1 = vec![0u8; 8];
        e1[0] = 1;
        assert!(tabs.fund[E8_ADJOINT].get(&e1).abs_up() > two_pow(-20));
        // the unbudgeted path assembles the identical values
        let plain = fund_tables(&basis, &q, 2).unwrap();
        for j in 0..8 {
            for (c, v) in tabs.fund[j].iter() {
                let d = v.sub(plain[j].get(c));
                assert!(d.is_zero(), "fundamental {} at {:?}", j + 1, c);
            }
        }
    }
}
