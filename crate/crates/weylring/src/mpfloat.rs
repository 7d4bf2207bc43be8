//! Multiprecision complex arithmetic with exactly-rounded components, the
//! directed-rounding bound calculus, and the final rigorous rounding of
//! computed values to exact lattice points.
//!
//! Values live on a fixed-precision grid: every arithmetic primitive rounds
//! its real and imaginary parts once, to nearest, ties to even. Complex
//! multiplication goes through fused multiply-add so each component is a
//! single rounding of the exact result. Error budgets are tracked separately
//! in low-precision upward-rounded arithmetic; they are never mixed into the
//! value channel.

use crate::qi::GaussianRational;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

/// Precision floor for which the rank-8 rounding theorem applies.
pub const M0: u32 = 494;
/// Default working precision (mantissa bits per real component).
pub const WORKING_PREC: u32 = M0 + 1;
/// Guard bits used internally by transcendental constructors.
pub const GUARD: u32 = 64;
/// Precision of the directed-rounding bound channel.
pub const BOUND_PREC: u32 = 64;

#[derive(Debug, thiserror::Error)]
pub enum RoundingError {
    #[error("certified disk of radius {radius} (scaled) contains no lattice point")]
    NoLatticePoint { radius: f64 },
    #[error("certified radius too large for unique rounding: scale*delta = {0} >= 1/2")]
    RadiusTooLarge(f64),
    #[error("coordinate magnitude does not exceed the certified radius")]
    CoordinateBelowRadius,
    #[error("error-budget side condition violated: {0}")]
    BudgetOverflow(String),
}

pub fn bigint_to_integer(x: &BigInt) -> Integer {
    let (sign, bytes) = x.to_bytes_le();
    let mut v = Integer::from_digits(&bytes, rug::integer::Order::Lsf);
    if sign == Sign::Minus {
        v = -v;
    }
    v
}

pub fn rational_to_float(prec: u32, x: &BigRational) -> Float {
    let q = Rational::from((bigint_to_integer(x.numer()), bigint_to_integer(x.denom())));
    Float::with_val(prec, &q)
}

/// Complex number with independently exactly-rounded components.
#[derive(Debug, Clone, PartialEq)]
pub struct Fpc {
    pub re: Float,
    pub im: Float,
}

impl Fpc {
    pub fn zero(prec: u32) -> Self {
        Fpc {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn one(prec: u32) -> Self {
        Fpc {
            re: Float::with_val(prec, 1),
            im: Float::new(prec),
        }
    }

    pub fn from_i64(prec: u32, x: i64) -> Self {
        Fpc {
            re: Float::with_val(prec, x),
            im: Float::new(prec),
        }
    }

    pub fn from_gaussian(prec: u32, x: &GaussianRational) -> Self {
        Fpc {
            re: rational_to_float(prec, &x.re),
            im: rational_to_float(prec, &x.im),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Fpc {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn add(&self, o: &Fpc) -> Self {
        Fpc {
            re: Float::with_val(self.prec(), &self.re + &o.re),
            im: Float::with_val(self.prec(), &self.im + &o.im),
        }
    }

    pub fn sub(&self, o: &Fpc) -> Self {
        Fpc {
            re: Float::with_val(self.prec(), &self.re - &o.re),
            im: Float::with_val(self.prec(), &self.im - &o.im),
        }
    }

    pub fn neg(&self) -> Self {
        Fpc {
            re: Float::with_val(self.prec(), -&self.re),
            im: Float::with_val(self.prec(), -&self.im),
        }
    }

    /// One rounding per component through fused multiply-add.
    pub fn mul(&self, o: &Fpc) -> Self {
        let re = self.re.clone().mul_sub_mul(&o.re, &self.im, &o.im);
        let im = self.re.clone().mul_add_mul(&o.im, &self.im, &o.re);
        Fpc { re, im }
    }

    pub fn mul_int(&self, k: &Integer) -> Self {
        Fpc {
            re: Float::with_val(self.prec(), &self.re * k),
            im: Float::with_val(self.prec(), &self.im * k),
        }
    }

    pub fn mul_i128(&self, k: i128) -> Self {
        self.mul_int(&Integer::from(k))
    }

    /// Exact scaling by a power of two.
    pub fn mul_2exp(&self, e: i32) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        if e >= 0 {
            re <<= e as u32;
            im <<= e as u32;
        } else {
            re >>= (-e) as u32;
            im >>= (-e) as u32;
        }
        Fpc { re, im }
    }

    pub fn norm_sqr(&self) -> Float {
        self.re.clone().mul_add_mul(&self.re, &self.im, &self.im)
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        let mut re = self.re.clone();
        re /= &n;
        let mut im = Float::with_val(self.prec(), -&self.im);
        im /= &n;
        Fpc { re, im }
    }

    pub fn div(&self, o: &Fpc) -> Self {
        self.mul(&o.inv())
    }

    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Fpc::one(self.prec());
        }
        let mut base = if e > 0 { self.clone() } else { self.inv() };
        let mut n = e.unsigned_abs();
        let mut acc = Fpc::one(self.prec());
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Upper bound on |self| in the bound channel.
    pub fn abs_up(&self) -> Float {
        let r2 = sq_up(&self.re);
        let i2 = sq_up(&self.im);
        let mut s = r2;
        s.add_assign_round(&i2, Round::Up);
        s.sqrt_round(Round::Up);
        s
    }

    /// Lower bound on |self| in the bound channel.
    pub fn abs_down(&self) -> Float {
        let rr = abs_toward_zero(&self.re);
        let ii = abs_toward_zero(&self.im);
        let mut s = rr.clone();
        s.mul_assign_round(&rr, Round::Down);
        let mut t = ii.clone();
        t.mul_assign_round(&ii, Round::Down);
        s.add_assign_round(&t, Round::Down);
        s.sqrt_round(Round::Down);
        s
    }

    /// Half-ulp radius of the component grid at this value's magnitude:
    /// `2^(exp - prec)` with `exp` the larger component exponent. Zero for
    /// an exact zero.
    pub fn ulp_radius(&self) -> Float {
        let e = self
            .re
            .get_exp()
            .into_iter()
            .chain(self.im.get_exp())
            .max();
        match e {
            None => Float::new(BOUND_PREC),
            Some(e) => {
                let mut u = Float::with_val(BOUND_PREC, 1);
                u <<= e;
                u >>= self.prec();
                u
            }
        }
    }

    /// Round both components to precision `m`, to nearest, ties to even.
    pub fn rnd(&self, m: u32) -> Self {
        let mut re = self.re.clone();
        re.set_prec_round(m, Round::Nearest);
        let mut im = self.im.clone();
        im.set_prec_round(m, Round::Nearest);
        Fpc { re, im }
    }
}

fn abs_toward_zero(x: &Float) -> Float {
    let mut v = Float::new(BOUND_PREC);
    // Shrinking the magnitude means rounding toward zero after taking abs.
    let a = Float::with_val(x.prec(), x.abs_ref());
    v.add_assign_round(&a, Round::Down);
    v
}

fn sq_up(x: &Float) -> Float {
    let mut a = Float::with_val(BOUND_PREC, 0);
    a.add_assign_round(&Float::with_val(x.prec(), x.abs_ref()), Round::Up);
    let b = a.clone();
    a.mul_assign_round(&b, Round::Up);
    a
}

/// `e^(2 pi i t)` for exact rational `t`, computed with guard bits and
/// rounded once per component to `prec`.
pub fn exp_2pii(prec: u32, t: &BigRational) -> Fpc {
    let frac = t - t.floor();
    let hi = prec + GUARD;
    let tf = rational_to_float(hi, &frac);
    let pi = Float::with_val(hi, Constant::Pi);
    let mut theta = Float::with_val(hi, &pi * &tf);
    theta <<= 1u32;
    let (s, c) = theta.sin_cos(Float::new(hi));
    Fpc { re: c, im: s }.rnd(prec)
}

// ---------------------------------------------------------------------------
// Directed-rounding bound channel.

pub fn bup(x: f64) -> Float {
    Float::with_val(BOUND_PREC, x)
}

pub fn add_up(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.add_assign_round(b, Round::Up);
    v
}

pub fn sub_up(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.sub_assign_round(b, Round::Up);
    v
}

pub fn mul_up(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.mul_assign_round(b, Round::Up);
    v
}

pub fn div_up(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.div_assign_round(b, Round::Up);
    v
}

pub fn add_down(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.add_assign_round(b, Round::Down);
    v
}

/// `a - b` rounded down, clamped at zero (bound magnitudes never go negative).
pub fn sub_down_clamped(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.sub_assign_round(b, Round::Down);
    if v.is_sign_negative() {
        v = Float::new(BOUND_PREC);
    }
    v
}

pub fn mul_down(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.mul_assign_round(b, Round::Down);
    v
}

pub fn div_down(a: &Float, b: &Float) -> Float {
    let mut v = a.clone();
    v.div_assign_round(b, Round::Down);
    v
}

pub fn pow_up(base: &Float, e: u64) -> Float {
    let mut acc = Float::with_val(BOUND_PREC, 1);
    let mut b = base.clone();
    let mut n = e;
    while n > 0 {
        if n & 1 == 1 {
            acc.mul_assign_round(&b, Round::Up);
        }
        n >>= 1;
        if n > 0 {
            let bb = b.clone();
            b.mul_assign_round(&bb, Round::Up);
        }
    }
    acc
}

pub fn pow_down(base: &Float, e: u64) -> Float {
    let mut acc = Float::with_val(BOUND_PREC, 1);
    let mut b = base.clone();
    let mut n = e;
    while n > 0 {
        if n & 1 == 1 {
            acc.mul_assign_round(&b, Round::Down);
        }
        n >>= 1;
        if n > 0 {
            let bb = b.clone();
            b.mul_assign_round(&bb, Round::Down);
        }
    }
    acc
}

pub fn two_pow(e: i64) -> Float {
    let mut v = Float::with_val(BOUND_PREC, 1);
    if e >= 0 {
        v <<= e as u32;
    } else {
        v >>= (-e) as u32;
    }
    v
}

/// Upper bound for `|x|^e` over the ball of radius `eps` around a point of
/// magnitude `|x|` bracketed by `[lo, hi]`; signed integer exponent.
pub fn ball_pow_sup(lo: &Float, hi: &Float, eps: &Float, e: i64) -> Result<Float, RoundingError> {
    if e == 0 {
        return Ok(Float::with_val(BOUND_PREC, 1));
    }
    if e > 0 {
        Ok(pow_up(&add_up(hi, eps), e as u64))
    } else {
        let base = sub_down_clamped(lo, eps);
        if base.is_zero() {
            return Err(RoundingError::CoordinateBelowRadius);
        }
        Ok(div_up(
            &Float::with_val(BOUND_PREC, 1),
            &pow_down(&base, (-e) as u64),
        ))
    }
}

/// Upper bound for `|z'^e - z^e|` with `|z' - z| <= eps`, `|z|` in `[lo, hi]`.
/// Mean value along the segment: `eps * |e| * sup(|w|^(e-1))`; the segment
/// stays inside the ball, so this holds for complex perturbations with no
/// assumption on the phase.
pub fn ball_pow_dev(lo: &Float, hi: &Float, eps: &Float, e: i64) -> Result<Float, RoundingError> {
    if e == 0 || eps.is_zero() {
        return Ok(Float::new(BOUND_PREC));
    }
    let n = e.unsigned_abs();
    let step = mul_up(eps, &Float::with_val(BOUND_PREC, n));
    if e > 0 {
        Ok(mul_up(&step, &pow_up(&add_up(hi, eps), n - 1)))
    } else {
        // |z^-n - z'^-n| = |z'^n - z^n| / (|z|^n |z'|^n).
        let base = sub_down_clamped(lo, eps);
        if base.is_zero() {
            return Err(RoundingError::CoordinateBelowRadius);
        }
        let num = mul_up(&step, &pow_up(&add_up(hi, eps), n - 1));
        Ok(div_up(&num, &pow_down(&base, 2 * n)))
    }
}

/// Lower bound for the same quantity.
pub fn ball_pow_inf(lo: &Float, hi: &Float, eps: &Float, e: i64) -> Result<Float, RoundingError> {
    if e == 0 {
        return Ok(Float::with_val(BOUND_PREC, 1));
    }
    if e > 0 {
        Ok(pow_down(&sub_down_clamped(lo, eps), e as u64))
    } else {
        let base = add_up(hi, eps);
        if base.is_zero() {
            return Err(RoundingError::CoordinateBelowRadius);
        }
        Ok(div_down(
            &Float::with_val(BOUND_PREC, 1),
            &pow_up(&base, (-e) as u64),
        ))
    }
}

/// Envelope for a weighted sum of torus monomials over an `eps`-ball.
/// Deviation telescopes the product coordinate by coordinate:
/// `|prod z'^e - prod z^e| <= sum_j dev_j * prod_{i != j} sup_i`,
/// with `sup_i` bounding both the perturbed and the centre factor.
/// Magnitude is the plain bound `sum_w |mult(w)| * prod_i sup_i` used for
/// round-off accounting.
pub struct Envelope {
    pub deviation: Float,
    pub magnitude: Float,
}

pub fn monomial_sum_envelope<'a, I>(
    qlo: &[Float],
    qhi: &[Float],
    eps: &Float,
    terms: I,
) -> Result<Envelope, RoundingError>
where
    I: Iterator<Item = (Vec<i64>, &'a Integer)>,
{
    let mut dev = Float::new(BOUND_PREC);
    let mut mag = Float::new(BOUND_PREC);
    for (exps, coef) in terms {
        let mut sup = Float::with_val(BOUND_PREC, 1);
        let mut tel = Float::new(BOUND_PREC);
        for (i, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let s = ball_pow_sup(&qlo[i], &qhi[i], eps, e)?;
            let d = ball_pow_dev(&qlo[i], &qhi[i], eps, e)?;
            tel = add_up(&mul_up(&tel, &s), &mul_up(&sup, &d));
            sup = mul_up(&sup, &s);
        }
        let c = Float::with_val_round(BOUND_PREC, Integer::from(coef.abs_ref()), Round::Up).0;
        dev = add_up(&dev, &mul_up(&c, &tel));
        mag = add_up(&mag, &mul_up(&c, &sup));
    }
    Ok(Envelope {
        deviation: dev,
        magnitude: mag,
    })
}

/// Harmonic-majorization inflation for order-`|c|` derivatives: envelopes of
/// the underlying function at doubled radius scale by `(8 rank |c|)^|c|`.
pub fn harmonic_factor(rank: usize, c_total: u64) -> Float {
    if c_total == 0 {
        return Float::with_val(BOUND_PREC, 1);
    }
    let base = Float::with_val(BOUND_PREC, 8 * rank as u64 * c_total);
    pow_up(&base, c_total)
}

/// Floating round-off allowance for a straight-line evaluation: `ops` exact
/// roundings on terms whose magnitudes sum below `magnitude`, at `prec` bits.
pub fn roundoff_term(magnitude: &Float, ops: u64, prec: u32) -> Float {
    let mut f = Float::with_val(BOUND_PREC, ops);
    f = mul_up(&f, magnitude);
    mul_up(&f, &two_pow(1 - prec as i64))
}

// ---------------------------------------------------------------------------
// Chain-rule operator norm.

fn multi_total(c: &[u8]) -> u64 {
    c.iter().map(|&x| x as u64).sum()
}

fn factorial_up(n: u64) -> Float {
    let mut v = Float::with_val(BOUND_PREC, 1);
    for t in 2..=n {
        v.mul_assign_round(&Float::with_val(BOUND_PREC, t), Round::Up);
    }
    v
}

/// `(2 rank (|d| + rank))^((|d|+1)/2)` — the per-factor Jacobian-derivative
/// Frobenius allowance. Half powers via one upward square root.
fn jac_block_weight(rank: usize, d_total: u64) -> Float {
    let base = Float::with_val(BOUND_PREC, 2 * rank as u64 * (d_total + rank as u64));
    let full = pow_up(&base, d_total + 1);
    let mut s = full;
    s.sqrt_round(Round::Up);
    s
}

/// Sum over ordered decompositions of `c` into `parts` nonzero multi-indices
/// of the product of per-part weights.
fn composition_weight_sum(rank: usize, c: &[u8], parts: u32) -> Float {
    fn next_nonzero_sub(rem: &[u8], cur: &mut Vec<u8>) -> bool {
        // Odometer over 0..=rem per coordinate, skipping the all-zero tuple.
        for i in 0..rem.len() {
            if cur[i] < rem[i] {
                cur[i] += 1;
                for x in cur.iter_mut().take(i) {
                    *x = 0;
                }
                return true;
            }
        }
        false
    }
    fn rec(rank: usize, rem: &[u8], parts: u32) -> Float {
        if parts == 0 {
            return if rem.iter().all(|&x| x == 0) {
                Float::with_val(BOUND_PREC, 1)
            } else {
                Float::new(BOUND_PREC)
            };
        }
        let mut total = Float::new(BOUND_PREC);
        let mut cur = vec![0u8; rem.len()];
        while next_nonzero_sub(rem, &mut cur) {
            let dt: u64 = cur.iter().map(|&x| x as u64).sum();
            let w = jac_block_weight(rank, dt);
            let rest: Vec<u8> = rem.iter().zip(&cur).map(|(&a, &b)| a - b).collect();
            let tail = rec(rank, &rest, parts - 1);
            if !tail.is_zero() {
                total = add_up(&total, &mul_up(&w, &tail));
            }
        }
        total
    }
    rec(rank, c, parts)
}

/// Upper bound on the 2-norm of the linear functional expressing a mixed
/// character-coordinate derivative in terms of torus-coordinate derivatives.
/// `qsum` bounds `sum_j (|Q_j| + 2 eps)^2`, `usum` bounds
/// `sum_j (|u_j| + delta_j(2 eps))^2`, both upward.
pub fn chain_norm_bound(rank: usize, c: &[u8], qsum: &Float, usum: &Float) -> Float {
    let ct = multi_total(c);
    if ct == 0 {
        return Float::with_val(BOUND_PREC, 1);
    }
    let fact = factorial_up(ct);
    let mut total = Float::new(BOUND_PREC);
    for parts in 1..=ct as u32 {
        let comp = composition_weight_sum(rank, c, parts);
        if comp.is_zero() {
            continue;
        }
        let (kpow, qpow_num) = if rank == 8 {
            // Printed rank-8 constants: 2^(17 parts / 2), q-power parts/2.
            let p = pow_up(&Float::with_val(BOUND_PREC, 2u64), 17 * parts as u64);
            let mut s = p;
            s.sqrt_round(Round::Up);
            (s, parts)
        } else {
            // Frobenius product form: (2 rank^2)^((parts+1)/2) rank^(parts/2),
            // q-power (parts+1)/2.
            let a = pow_up(
                &Float::with_val(BOUND_PREC, 2 * (rank * rank) as u64),
                (parts + 1) as u64,
            );
            let b = pow_up(&Float::with_val(BOUND_PREC, rank as u64), parts as u64);
            let mut s = mul_up(&a, &b);
            s.sqrt_round(Round::Up);
            (s, parts + 1)
        };
        let mut qq = pow_up(qsum, qpow_num as u64);
        qq.sqrt_round(Round::Up);
        let mut uu = pow_up(usum, parts as u64);
        uu.sqrt_round(Round::Up);
        let term = mul_up(&mul_up(&kpow, &qq), &mul_up(&uu, &comp));
        total = add_up(&total, &term);
    }
    mul_up(&fact, &total)
}

// ---------------------------------------------------------------------------
// Rigorous complex balls.

/// Complex ball: an exactly-rounded center plus an upward-rounded radius in
/// the bound channel. Operations mirror the center ops of `Fpc` and inflate
/// the radius by the exact interval growth plus a deliberately generous
/// straight-line round-off allowance, so a chain of ball operations encloses
/// the corresponding exact-value chain.
///
/// A radius can become infinite (inverting a ball that may contain zero) or
/// NaN (infinite radius meeting an exact zero); every acceptance check
/// downstream is of the form `radius < threshold`, which both fail, so
/// poisoned enclosures reject rather than certify.
#[derive(Debug, Clone)]
pub struct Ball {
    pub center: Fpc,
    pub radius: Float,
}

impl Ball {
    pub fn exact(center: Fpc) -> Self {
        Ball {
            center,
            radius: Float::new(BOUND_PREC),
        }
    }

    pub fn new(center: Fpc, radius: Float) -> Self {
        Ball { center, radius }
    }

    pub fn prec(&self) -> u32 {
        self.center.prec()
    }

    /// Upper bound on the magnitude of anything inside the ball.
    pub fn mag_up(&self) -> Float {
        add_up(&self.center.abs_up(), &self.radius)
    }

    /// The ball cannot be bounded away from zero (NaN-safe: an unordered
    /// comparison counts as possibly zero).
    pub fn possibly_zero(&self) -> bool {
        !(self.center.abs_down() > self.radius)
    }

    pub fn add(&self, o: &Ball) -> Ball {
        let c = self.center.add(&o.center);
        // component additions are exactly rounded, so their error is bounded
        // by the result's own ulp even under cancellation
        let round = roundoff_term(&c.abs_up(), 2, c.prec());
        let radius = add_up(&add_up(&self.radius, &o.radius), &round);
        Ball { center: c, radius }
    }

    pub fn sub(&self, o: &Ball) -> Ball {
        let c = self.center.sub(&o.center);
        let round = roundoff_term(&c.abs_up(), 2, c.prec());
        let radius = add_up(&add_up(&self.radius, &o.radius), &round);
        Ball { center: c, radius }
    }

    pub fn neg(&self) -> Ball {
        Ball {
            center: self.center.neg(),
            radius: self.radius.clone(),
        }
    }

    pub fn mul(&self, o: &Ball) -> Ball {
        let c = self.center.mul(&o.center);
        let ma = self.center.abs_up();
        let mb = o.center.abs_up();
        let mut radius = mul_up(&ma, &o.radius);
        radius = add_up(&radius, &mul_up(&mb, &self.radius));
        radius = add_up(&radius, &mul_up(&self.radius, &o.radius));
        // intermediate products scale with |a||b|, not with the possibly
        // cancelled result
        radius = add_up(&radius, &roundoff_term(&mul_up(&ma, &mb), 8, c.prec()));
        Ball { center: c, radius }
    }

    pub fn mul_i128(&self, k: i128) -> Ball {
        let c = self.center.mul_i128(k);
        let (ku, _) =
            Float::with_val_round(BOUND_PREC, &Integer::from(k.unsigned_abs()), Round::Up);
        let round = roundoff_term(&c.abs_up(), 2, c.prec());
        let radius = add_up(&mul_up(&ku, &self.radius), &round);
        Ball { center: c, radius }
    }

    pub fn inv(&self) -> Ball {
        let lo = self.center.abs_down();
        if self.center.is_zero() || !(lo > self.radius) {
            return Ball {
                center: Fpc::zero(self.prec()),
                radius: Float::with_val(BOUND_PREC, f64::INFINITY),
            };
        }
        let c = self.center.inv();
        let gap = sub_down_clamped(&lo, &self.radius);
        let interval = div_up(&self.radius, &mul_down(&lo, &gap));
        let radius = add_up(&interval, &roundoff_term(&c.abs_up(), 8, c.prec()));
        Ball { center: c, radius }
    }

    pub fn div(&self, o: &Ball) -> Ball {
        self.mul(&o.inv())
    }
}

// ---------------------------------------------------------------------------
// Rigorous rounding to lattice points.

fn round_component_to_int(x: &Float) -> Integer {
    x.to_integer_round(Round::Nearest)
        .map(|(i, _)| i)
        .expect("finite value")
}

/// Round `value * 2^scale_log2` to the unique Gaussian integer within the
/// certified disk, returning the descaled exact value. Fails when the scaled
/// radius reaches 1/2 (uniqueness lost) or when no lattice point lies within
/// the disk (certification broken).
pub fn lattice_round(
    value: &Fpc,
    delta: &Float,
    scale_log2: u32,
) -> Result<GaussianRational, RoundingError> {
    let scaled_delta = {
        let mut d = delta.clone();
        d <<= scale_log2;
        d
    };
    let half = {
        let mut h = Float::with_val(BOUND_PREC, 1);
        h >>= 1u32;
        h
    };
    if !(scaled_delta < half) {
        return Err(RoundingError::RadiusTooLarge(
            scaled_delta.to_f64_round(Round::Up),
        ));
    }
    let scaled = value.mul_2exp(scale_log2 as i32);
    let ire = round_component_to_int(&scaled.re);
    let iim = round_component_to_int(&scaled.im);
    // Distance from the scaled value to the chosen lattice point, upward.
    let dre = {
        let mut d = Float::with_val(scaled.re.prec(), &scaled.re - &ire);
        d.abs_mut();
        let mut c = Float::new(BOUND_PREC);
        c.add_assign_round(&d, Round::Up);
        c
    };
    let dim_ = {
        let mut d = Float::with_val(scaled.im.prec(), &scaled.im - &iim);
        d.abs_mut();
        let mut c = Float::new(BOUND_PREC);
        c.add_assign_round(&d, Round::Up);
        c
    };
    let mut dist = mul_up(&dre, &dre);
    dist = add_up(&dist, &mul_up(&dim_, &dim_));
    dist.sqrt_round(Round::Up);
    if dist > scaled_delta {
        return Err(RoundingError::NoLatticePoint {
            radius: scaled_delta.to_f64_round(Round::Up),
        });
    }
    let den = BigInt::from(1u8) << scale_log2;
    let num_re = integer_to_bigint(&ire);
    let num_im = integer_to_bigint(&iim);
    Ok(GaussianRational {
        re: BigRational::new(num_re, den.clone()),
        im: BigRational::new(num_im, den),
    })
}

pub fn integer_to_bigint(x: &Integer) -> BigInt {
    let bytes = x.to_digits::<u8>(rug::integer::Order::Lsf);
    let sign = if x.is_negative() {
        Sign::Minus
    } else if x.is_zero() {
        Sign::NoSign
    } else {
        Sign::Plus
    };
    BigInt::from_bytes_le(sign, &bytes)
}

/// Per-entry maxima of certified radii, one little-endian f64 each.
pub fn write_delta_bin(path: &std::path::Path, deltas: &[f64]) -> std::io::Result<()> {
    let mut buf = Vec::with_capacity(deltas.len() * 8);
    for d in deltas {
        buf.extend_from_slice(&d.to_le_bytes());
    }
    std::fs::write(path, buf)
}

pub fn read_delta_bin(path: &std::path::Path) -> std::io::Result<Vec<f64>> {
    let buf = std::fs::read(path)?;
    if buf.len() % 8 != 0 {
        return Err(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            "delta file length not a multiple of 8",
        ));
    }
    Ok(buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}
