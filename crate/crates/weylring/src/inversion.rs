//! Sampling targets and certified pre-images of the fundamental-character
//! map.
//!
//! For each partition class this module picks exact Gaussian-rational target
//! vectors `u` (zero off the class support and at the differentiated
//! coordinates), then solves `chi(Q) = u` by damped Newton iteration with a
//! staged continuation parameter, and certifies the result: the forward
//! residual at the rounded point must fit inside the rigorous evaluation
//! bound at the point's own ulp radius, and the Jacobian determinant must be
//! bounded away from zero.

use std::collections::HashSet;
use std::io::{Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use rug::float::Round;
use rug::{Float, Integer};
use thiserror::Error;

use crate::admiss::{AdmissibleSet, ClassKind, PartitionClass};
use crate::charcalc::{char_tables, fund_tables, CharBasis, DerivOrder, NumError};
use crate::mpfloat::{add_up, exp_2pii, mul_up, two_pow, Fpc, BOUND_PREC, WORKING_PREC};
use crate::liealg::RootSystem;
use crate::qi::GaussianRational;
use crate::scalar::Scalar;

/// Mantissa bits of stored sample coordinates.
pub const SAMPLE_BITS: u32 = 494;

/// Extra working bits for Newton steps, so that evaluation noise stays below
/// the ulp-sized convergence threshold of the rounded iterates.
pub const NR_GUARD_BITS: u32 = 64;

#[derive(Debug, Error)]
pub enum InvError {
    #[error("class {mask:#b} needs {needed} sample tuples, grid yields {found}")]
    GridExhausted { mask: u32, needed: usize, found: usize },
    #[error("binary encoding: {0}")]
    Encoding(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Num(#[from] NumError),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The standard sampling values `l/2 + i m/2`, `l in -3..3`, `m in -2..2`,
/// ordered by ascending magnitude so that lexicographic tuple enumeration
/// prefers values close to zero.
pub fn sampling_grid() -> Vec<GaussianRational> {
    let mut vals = Vec::with_capacity(35);
    for l in -3i64..=3 {
        for m in -2i64..=2 {
            vals.push(GaussianRational::new(rat(l, 2), rat(m, 2)));
        }
    }
    sort_by_magnitude(&mut vals);
    vals
}

/// Integer sampling window `{-e, ..., e}` for single-coordinate supports,
/// same magnitude-first order.
pub fn integer_window(e: i64) -> Vec<GaussianRational> {
    let mut vals = Vec::with_capacity((2 * e + 1) as usize);
    for v in -e..=e {
        vals.push(GaussianRational::from_int(v));
    }
    sort_by_magnitude(&mut vals);
    vals
}

fn sort_by_magnitude(vals: &mut [GaussianRational]) {
    vals.sort_by(|a, b| {
        let ka = mag_key(a);
        let kb = mag_key(b);
        ka.cmp(&kb)
    });
}

fn mag_key(v: &GaussianRational) -> (BigRational, BigRational, BigRational, BigRational) {
    let ra = v.re.abs();
    let ia = v.im.abs();
    let hi = if ra >= ia { ra.clone() } else { ia.clone() };
    (hi, &ra + &ia, v.re.clone(), v.im.clone())
}

/// Support coordinates that receive grid values: the class support minus the
/// coordinates the class differentiates (those are pinned to zero).
pub fn free_positions(class: &PartitionClass) -> Vec<usize> {
    let mut zeroed = [None, None];
    match class.kind {
        ClassKind::Origin | ClassKind::Plain => {}
        ClassKind::Deriv1(_) => zeroed[0] = class.sigma1,
        ClassKind::Deriv2(_, _) => {
            zeroed[0] = class.sigma1;
            zeroed[1] = class.sigma2;
        }
    }
    (0..32)
        .filter(|j| class.mask & (1 << j) != 0)
        .filter(|j| Some(*j) != zeroed[0] && Some(*j) != zeroed[1])
        .collect()
}

/// One exact target vector per class member, in deterministic order.
///
/// Tuples over the free coordinates are enumerated lexicographically over the
/// magnitude-ordered grid; a tuple is accepted only if the member monomials
/// evaluate to pairwise-distinct nonzero products and the product row differs
/// from every previously accepted row. Single-coordinate plain supports use
/// an integer window wide enough for the member count instead of the
/// standard grid.
pub fn build_sampling_targets(
    set: &AdmissibleSet,
    class: &PartitionClass,
) -> Result<Vec<Vec<GaussianRational>>, InvError> {
    let grid = if class.support_size() == 1 && class.kind == ClassKind::Plain {
        integer_window(class.members.len() as i64 / 2 + 2)
    } else {
        sampling_grid()
    };
    build_sampling_targets_with(set, class, &grid)
}

/// Same as `build_sampling_targets` with a caller-supplied grid, the escape
/// hatch when the default grid is exhausted.
pub fn build_sampling_targets_with(
    set: &AdmissibleSet,
    class: &PartitionClass,
    grid: &[GaussianRational],
) -> Result<Vec<Vec<GaussianRational>>, InvError> {
    let rank = set.rank;
    let free = free_positions(class);
    let needed = class.members.len();
    let mut out: Vec<Vec<GaussianRational>> = Vec::with_capacity(needed);
    let mut accepted_rows: Vec<Vec<GaussianRational>> = Vec::new();

    if free.is_empty() {
        // a single member is isolated purely by differentiation
        if needed != 1 {
            return Err(InvError::GridExhausted {
                mask: class.mask,
                needed,
                found: 0,
            });
        }
        out.push(vec![GaussianRational::zero(); rank]);
        return Ok(out);
    }

    let mut digits = vec![0usize; free.len()];
    'tuples: loop {
        let tuple: Vec<&GaussianRational> = digits.iter().map(|&d| &grid[d]).collect();
        // conditioning pre-screen on the member monomials
        let mut row: Vec<GaussianRational> = Vec::with_capacity(needed);
        let mut seen: HashSet<GaussianRational> = HashSet::with_capacity(needed);
        let mut good = true;
        for &mi in &class.members {
            let iota = &set.iotas[mi];
            let mut p = GaussianRational::one();
            for (t, &j) in free.iter().enumerate() {
                p = &p * &tuple[t].pow(iota[j] as u32);
            }
            if p.is_zero() || !seen.insert(p.clone()) {
                good = false;
                break;
            }
            row.push(p);
        }
        if good && !accepted_rows.contains(&row) {
            let mut u = vec![GaussianRational::zero(); rank];
            for (t, &j) in free.iter().enumerate() {
                u[j] = tuple[t].clone();
            }
            out.push(u);
            accepted_rows.push(row);
            if out.len() == needed {
                return Ok(out);
            }
        }
        // odometer, last digit fastest
        for t in (0..digits.len()).rev() {
            digits[t] += 1;
            if digits[t] < grid.len() {
                continue 'tuples;
            }
            digits[t] = 0;
            if t == 0 {
                break 'tuples;
            }
        }
    }
    Err(InvError::GridExhausted {
        mask: class.mask,
        needed,
        found: out.len(),
    })
}

#[derive(Debug, Clone)]
pub struct NrConfig {
    /// Mantissa bits of the rounded iterates and of the stored result.
    pub sample_bits: u32,
    /// Working precision of Newton-step evaluations.
    pub work_prec: u32,
    /// Newton steps per continuation stage.
    pub max_steps: u32,
    /// Continuation denominator ceiling.
    pub max_stages: u64,
    /// Perturbed restarts after a singular or undefined iterate.
    pub max_restarts: u32,
    /// Reject when |det J| is not above 2^this.
    pub det_floor_log2: i32,
    /// Reject when the Frobenius norm of the inverse Jacobian exceeds 2^this.
    pub jinv_fro_cap_log2: i32,
}

impl Default for NrConfig {
    fn default() -> Self {
        NrConfig {
            sample_bits: SAMPLE_BITS,
            work_prec: WORKING_PREC + NR_GUARD_BITS,
            max_steps: 512,
            max_stages: 64,
            max_restarts: 4,
            det_floor_log2: -400,
            jinv_fro_cap_log2: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleStatus {
    /// Newton converged; not yet certified.
    Fresh,
    /// Certified: residual inside the forward bound, det J above the floor.
    Converged,
    /// Budget exhausted or certification failed.
    Rejected,
}

#[derive(Debug, Clone)]
pub struct SamplePoint {
    pub u: Vec<GaussianRational>,
    /// Pre-image, rounded to `sample_bits` and stored at the standard
    /// working precision.
    pub q: Vec<Fpc>,
    /// Max over coordinates of 2^(Exp - sample_bits); set by `certify`.
    pub eps_q: Float,
    /// |det J| lower bound at `q`; set by `certify`.
    pub jac_det: Float,
    /// Frobenius norm upper bound of the inverse Jacobian; set by `certify`.
    pub jinv_fro: Float,
    /// Max over coordinates of the forward residual |chi_j(q) - u_j|.
    pub residual: Float,
    pub status: SampleStatus,
    /// Accepted continuation fractions (numerator, denominator), in order.
    pub stages: Vec<(u64, u64)>,
}

/// The distinguished regular vanishing point of E8: all eight fundamental
/// characters are zero there, and the Jacobian is invertible.
pub fn e8_start() -> Vec<Fpc> {
    e8_start_prec(WORKING_PREC)
}

pub fn e8_start_prec(prec: u32) -> Vec<Fpc> {
    const H0: [i64; 8] = [6, 3, 15, 1, 12, -4, 5, 0];
    H0.iter().map(|&h| exp_2pii(prec, &rat(-h, 31))).collect()
}

/// Deterministic regular start on the unit torus; `salt` varies the angles.
///
/// The character map's Jacobian degenerates exactly where some root monomial
/// `Q^alpha` equals one, i.e. where a root pairs integrally with the angle
/// vector. Angles are geometric sequences mod a prime, and every positive
/// root's pairing is checked exactly; degenerate candidates are skipped.
pub fn generic_start(rs: &RootSystem, salt: u32, prec: u32) -> Vec<Fpc> {
    const D: i64 = 1009;
    let mut s = salt as i64;
    loop {
        let mult = 3 + 2 * s;
        let mut m: i64 = 1;
        let angles: Vec<i64> = (0..rs.rank)
            .map(|_| {
                m = m * mult % D;
                m
            })
            .collect();
        let regular = rs.positive_roots.iter().all(|alpha| {
            let aw = rs.root_to_weight_basis(alpha);
            let p: i64 = aw.iter().zip(&angles).map(|(a, r)| a * r).sum();
            p.rem_euclid(D) != 0
        });
        if regular {
            return angles.iter().map(|&r| exp_2pii(prec, &rat(r, D))).collect();
        }
        s += 1;
    }
}

/// Stall response: refine the stage denominator and rescale the numerator of
/// the last converged stage, flooring. The next attempted fraction
/// `(floor((n+1)l/n) + 1) / (n+1)` never drops below the converged `l/n`
/// (repeated stalls can revisit it exactly), so accepted fractions are
/// non-decreasing and reach 1.
pub fn continuation_rescale(l: u64, n: u64) -> (u64, u64) {
    ((n + 1) * l / n, n + 1)
}

/// 2^(Exp - m) at the larger component exponent; zero for an exact zero.
fn fpc_m_radius(z: &Fpc, m: u32) -> Float {
    let e = z.re.get_exp().into_iter().chain(z.im.get_exp()).max();
    match e {
        None => Float::new(BOUND_PREC),
        Some(e) => {
            let mut u = Float::with_val(BOUND_PREC, 1);
            u <<= e;
            u >>= m;
            u
        }
    }
}

/// Round to `bits` and re-extend to `prec` (exact) so downstream arithmetic
/// runs at `prec` while the value stays on the coarse grid.
fn round_extend(z: &Fpc, bits: u32, prec: u32) -> Fpc {
    z.rnd(bits).rnd(prec)
}

/// Gauss-Jordan with partial pivoting; `None` when a pivot is exactly zero.
fn det_inverse(a: &[Vec<Fpc>]) -> Option<(Fpc, Vec<Vec<Fpc>>)> {
    let n = a.len();
    let one = a[0][0].one_like();
    let zero = a[0][0].zero_like();
    let mut m: Vec<Vec<Fpc>> = a.to_vec();
    let mut inv: Vec<Vec<Fpc>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let mut det = one;
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if m[r][col].abs_cmp(&m[piv][col]) == std::cmp::Ordering::Greater {
                piv = r;
            }
        }
        if m[piv][col].is_zero_s() {
            return None;
        }
        if piv != col {
            m.swap(piv, col);
            inv.swap(piv, col);
            det = det.neg_s();
        }
        let p = m[col][col].clone();
        det = det.mul_s(&p);
        let pinv = p.inv();
        for j in 0..n {
            m[col][j] = m[col][j].mul_s(&pinv);
            inv[col][j] = inv[col][j].mul_s(&pinv);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero_s() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let t = f.mul_s(&m[col][j]);
                m[r][j] = m[r][j].sub_s(&t);
                let t = f.mul_s(&inv[col][j]);
                inv[r][j] = inv[r][j].sub_s(&t);
            }
        }
    }
    Some((det, inv))
}

/// Order-1 tables at `q`: values and the Jacobian `J[i][j] = d chi_i / d Q_j`.
fn values_and_jacobian(
    basis: &CharBasis,
    q: &[Fpc],
) -> Result<(Vec<Fpc>, Vec<Vec<Fpc>>), NumError> {
    let tabs = fund_tables(basis, q, 1)?;
    let rank = basis.rank;
    let vals: Vec<Fpc> = tabs.iter().map(|t| t.value().clone()).collect();
    let mut jac = vec![vec![q[0].zero_like(); rank]; rank];
    for (i, row) in jac.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut e: DerivOrder = vec![0; rank];
            e[j] = 1;
            *entry = tabs[i].get(&e).clone();
        }
    }
    Ok((vals, jac))
}

/// Solve `chi(Q) = u` by Newton iteration with staged continuation.
///
/// Stage targets interpolate between the character value at the start point
/// and `u`; with a vanishing-point start this is the ray `(l/n) u`. A stage
/// converges when every coordinate of the step between successive rounded
/// iterates drops below the iterate's own grid radius; on a stall the
/// denominator is raised, `n -> n+1`, and the numerator of the last
/// converged stage is rescaled to `floor((n+1) l / n)`. A singular or
/// undefined Jacobian triggers a deterministic perturbed restart.
pub fn newton_raphson(
    basis: &CharBasis,
    u: &[GaussianRational],
    q0: &[Fpc],
    cfg: &NrConfig,
) -> Result<SamplePoint, InvError> {
    assert_eq!(u.len(), basis.rank);
    assert_eq!(q0.len(), basis.rank);
    let rank = basis.rank;
    let wp = cfg.work_prec;
    let u_f: Vec<Fpc> = u.iter().map(|g| Fpc::from_gaussian(wp, g)).collect();

    let mut restarts = 0u32;
    'restart: loop {
        let start: Vec<Fpc> = if restarts == 0 {
            q0.iter().map(|z| round_extend(z, cfg.sample_bits, wp)).collect()
        } else {
            // rotate each coordinate by a small deterministic angle
            q0.iter()
                .enumerate()
                .map(|(j, z)| {
                    let rot = exp_2pii(wp, &rat(restarts as i64 * (j as i64 + 1), 1009));
                    round_extend(&z.mul(&rot), cfg.sample_bits, wp)
                })
                .collect()
        };
        let chi_start = match fund_tables(basis, &start, 0) {
            Ok(t) => t.iter().map(|t| t.value().clone()).collect::<Vec<Fpc>>(),
            Err(NumError::ZeroCoordinate(_)) => {
                restarts += 1;
                if restarts > cfg.max_restarts {
                    return Ok(rejected(u, &start, cfg));
                }
                continue 'restart;
            }
            Err(e) => return Err(e.into()),
        };

        let mut q = start.clone();
        let mut l: u64 = 0;
        let mut n: u64 = 1;
        let mut stages: Vec<(u64, u64)> = Vec::new();
        loop {
            let lt = l + 1;
            // target chi_start + (lt/n)(u - chi_start), exact at lt == n
            let target: Vec<Fpc> = if lt == n {
                u_f.clone()
            } else {
                let s = Fpc::from_gaussian(wp, &GaussianRational::new(rat(lt as i64, n as i64), rat(0, 1)));
                (0..rank)
                    .map(|j| chi_start[j].add(&s.mul(&u_f[j].sub(&chi_start[j]))))
                    .collect()
            };
            let mut cur = q.clone();
            let mut converged = false;
            for _ in 0..cfg.max_steps {
                let (vals, jac) = match values_and_jacobian(basis, &cur) {
                    Ok(vj) => vj,
                    Err(NumError::ZeroCoordinate(_)) => {
                        restarts += 1;
                        if restarts > cfg.max_restarts {
                            return Ok(rejected(u, &cur, cfg));
                        }
                        continue 'restart;
                    }
                    Err(e) => return Err(e.into()),
                };
                let resid: Vec<Fpc> = (0..rank).map(|i| target[i].sub(&vals[i])).collect();
                if resid.iter().all(|r| r.is_zero()) {
                    converged = true;
                    break;
                }
                // a determinant the certifier would reject is singular for
                // stepping purposes too: inverting it would poison the orbit
                let usable = det_inverse(&jac)
                    .filter(|(det, _)| det.abs_down() > two_pow(cfg.det_floor_log2 as i64));
                let Some((_, jinv)) = usable else {
                    restarts += 1;
                    if restarts > cfg.max_restarts {
                        return Ok(rejected(u, &cur, cfg));
                    }
                    continue 'restart;
                };
                let mut next = Vec::with_capacity(rank);
                let mut small = true;
                for j in 0..rank {
                    let mut dq = cur[0].zero_like();
                    for i in 0..rank {
                        dq = dq.add(&jinv[j][i].mul(&resid[i]));
                    }
                    let nj = round_extend(&cur[j].add(&dq), cfg.sample_bits, wp);
                    let moved = nj.sub(&cur[j]).abs_up();
                    let radius = fpc_m_radius(&nj, cfg.sample_bits);
                    // the second disjunct breaks one-ulp limit cycles: when
                    // the exact correction is already below the grid radius,
                    // rounding may still hop one cell forever
                    if !(moved < radius || dq.abs_up() < radius) {
                        small = false;
                    }
                    next.push(nj);
                }
                cur = next;
                if small {
                    converged = true;
                    break;
                }
            }
            if converged {
                q = cur;
                l = lt;
                stages.push((l, n));
                if l == n {
                    let qs: Vec<Fpc> = q
                        .iter()
                        .map(|z| round_extend(z, cfg.sample_bits, WORKING_PREC))
                        .collect();
                    return Ok(SamplePoint {
                        u: u.to_vec(),
                        q: qs,
                        eps_q: Float::new(BOUND_PREC),
                        jac_det: Float::new(BOUND_PREC),
                        jinv_fro: Float::new(BOUND_PREC),
                        residual: Float::new(BOUND_PREC),
                        status: SampleStatus::Fresh,
                        stages,
                    });
                }
            } else {
                if n >= cfg.max_stages {
                    return Ok(rejected(u, &q, cfg));
                }
                (l, n) = continuation_rescale(l, n);
            }
        }
    }
}

fn rejected(u: &[GaussianRational], q: &[Fpc], cfg: &NrConfig) -> SamplePoint {
    SamplePoint {
        u: u.to_vec(),
        q: q
            .iter()
            .map(|z| round_extend(z, cfg.sample_bits, WORKING_PREC))
            .collect(),
        eps_q: Float::new(BOUND_PREC),
        jac_det: Float::new(BOUND_PREC),
        jinv_fro: Float::new(BOUND_PREC),
        residual: Float::new(BOUND_PREC),
        status: SampleStatus::Rejected,
        stages: Vec::new(),
    }
}

/// Certify a fresh sample: re-evaluate with rigorous bounds at the sample's
/// grid radius and require the forward residual of every coordinate to fit
/// inside its certified deviation, the Jacobian determinant to clear the
/// configured floor, and the inverse Jacobian to stay below the Frobenius
/// cap. Fills the diagnostic fields and promotes the status.
pub fn certify(basis: &CharBasis, sp: &mut SamplePoint, cfg: &NrConfig) -> Result<(), InvError> {
    let rank = basis.rank;
    let mut eps_q = Float::new(BOUND_PREC);
    for z in &sp.q {
        let r = fpc_m_radius(z, cfg.sample_bits);
        if r > eps_q {
            eps_q = r;
        }
    }
    sp.eps_q = eps_q.clone();
    let tabs = char_tables(basis, &sp.q, &eps_q, 0, 0)?;
    let zeros: DerivOrder = vec![0; rank];
    let mut worst = Float::new(BOUND_PREC);
    let mut ok = true;
    for j in 0..rank {
        let u_j = Fpc::from_gaussian(WORKING_PREC, &sp.u[j]);
        let resid = tabs.fund[j].value().sub(&u_j).abs_up();
        if &resid > tabs.fund_bud[j].dev(&zeros) {
            ok = false;
        }
        if resid > worst {
            worst = resid;
        }
    }
    sp.residual = worst;
    let mut jac = vec![vec![sp.q[0].zero_like(); rank]; rank];
    for (i, row) in jac.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut e: DerivOrder = vec![0; rank];
            e[j] = 1;
            *entry = tabs.fund[i].get(&e).clone();
        }
    }
    match det_inverse(&jac) {
        None => {
            sp.jac_det = Float::new(BOUND_PREC);
            sp.jinv_fro = Float::new(BOUND_PREC);
            ok = false;
        }
        Some((det, jinv)) => {
            sp.jac_det = det.abs_down();
            let mut fro2 = Float::new(BOUND_PREC);
            for row in &jinv {
                for z in row {
                    let a = z.abs_up();
                    fro2 = add_up(&fro2, &mul_up(&a, &a));
                }
            }
            fro2.sqrt_round(Round::Up);
            sp.jinv_fro = fro2;
            if sp.jac_det <= two_pow(cfg.det_floor_log2 as i64) {
                ok = false;
            }
            if sp.jinv_fro > two_pow(cfg.jinv_fro_cap_log2 as i64) {
                ok = false;
            }
        }
    }
    sp.status = if ok {
        SampleStatus::Converged
    } else {
        SampleStatus::Rejected
    };
    Ok(())
}

// --- binary formats ---------------------------------------------------------

/// Encode one real component into a 64-byte block: bytes 0..2 hold the
/// little-endian signed exponent (i16::MIN marks an exact zero), bytes 2..64
/// hold a 496-bit little-endian field whose low 495 bits are the normalized
/// mantissa (top mantissa bit set) and whose bit 495 is the sign. The value
/// is `(-1)^s * mant * 2^(exp - 495)`.
pub fn encode_root_block(x: &Float) -> Result<[u8; 64], InvError> {
    let mut block = [0u8; 64];
    if x.is_zero() {
        block[0..2].copy_from_slice(&i16::MIN.to_le_bytes());
        return Ok(block);
    }
    if !x.is_finite() {
        return Err(InvError::Encoding("non-finite component".into()));
    }
    let exp = x.get_exp().expect("nonzero finite");
    let exp16 = i16::try_from(exp)
        .map_err(|_| InvError::Encoding(format!("exponent {} out of range", exp)))?;
    block[0..2].copy_from_slice(&exp16.to_le_bytes());
    let mut m = x.clone().abs();
    m <<= 495 - exp;
    let mant = m
        .to_integer()
        .ok_or_else(|| InvError::Encoding("mantissa not integral".into()))?;
    if mant.significant_bits() != 495 {
        return Err(InvError::Encoding(format!(
            "mantissa needs {} bits, field holds 495",
            mant.significant_bits()
        )));
    }
    let digits = mant.to_digits::<u8>(rug::integer::Order::Lsf);
    block[2..2 + digits.len()].copy_from_slice(&digits);
    if x.is_sign_negative() {
        block[63] |= 0x80;
    }
    Ok(block)
}

pub fn decode_root_block(block: &[u8; 64]) -> Result<Float, InvError> {
    let exp = i16::from_le_bytes([block[0], block[1]]);
    if exp == i16::MIN {
        if block[2..].iter().any(|&b| b != 0) {
            return Err(InvError::Encoding("nonzero payload in zero block".into()));
        }
        return Ok(Float::new(WORKING_PREC));
    }
    let neg = block[63] & 0x80 != 0;
    let mut digits = [0u8; 62];
    digits.copy_from_slice(&block[2..64]);
    digits[61] &= 0x7f;
    let mant = Integer::from_digits(&digits, rug::integer::Order::Lsf);
    if mant.significant_bits() != 495 {
        return Err(InvError::Encoding("denormalized mantissa".into()));
    }
    let mut x = Float::with_val(WORKING_PREC, &mant);
    x >>= 495 - exp as i32;
    if neg {
        x = -x;
    }
    Ok(x)
}

/// Write pre-image coordinates as 64-byte component blocks, two per complex
/// coordinate. `im_first` selects the component interleaving.
pub fn write_allroots<W: Write>(
    mut w: W,
    points: &[Vec<Fpc>],
    im_first: bool,
) -> Result<(), InvError> {
    for q in points {
        for z in q {
            let (a, b) = if im_first { (&z.im, &z.re) } else { (&z.re, &z.im) };
            w.write_all(&encode_root_block(a)?)?;
            w.write_all(&encode_root_block(b)?)?;
        }
    }
    Ok(())
}

pub fn read_allroots<R: Read>(
    mut r: R,
    rank: usize,
    im_first: bool,
) -> Result<Vec<Vec<Fpc>>, InvError> {
    let mut out = Vec::new();
    let mut block = [0u8; 64];
    'points: loop {
        let mut q = Vec::with_capacity(rank);
        for c in 0..rank {
            // detect clean EOF only at a point boundary
            match r.read(&mut block) {
                Ok(0) if c == 0 => break 'points,
                Ok(64) => {}
                Ok(k) => {
                    // tolerate split reads
                    let mut got = k;
                    while got < 64 {
                        let k2 = r.read(&mut block[got..])?;
                        if k2 == 0 {
                            return Err(InvError::Encoding("truncated block".into()));
                        }
                        got += k2;
                    }
                }
                Err(e) => return Err(e.into()),
            }
            let a = decode_root_block(&block)?;
            r.read_exact(&mut block)?;
            let b = decode_root_block(&block)?;
            let (re, im) = if im_first { (b, a) } else { (a, b) };
            q.push(Fpc { re, im });
        }
        out.push(q);
    }
    Ok(out)
}

fn rational_to_i8_pair(x: &BigRational) -> Result<(i8, i8), InvError> {
    let n = x
        .numer()
        .to_i64()
        .and_then(|v| i8::try_from(v).ok())
        .ok_or_else(|| InvError::Encoding(format!("numerator {} exceeds 8 bits", x.numer())))?;
    let d = x
        .denom()
        .to_i64()
        .and_then(|v| i8::try_from(v).ok())
        .ok_or_else(|| InvError::Encoding(format!("denominator {} exceeds 8 bits", x.denom())))?;
    Ok((n, d))
}

/// Write target vectors as signed-byte quadruples `(p, q, r, s)` per
/// coordinate, encoding `u = p/q + i r/s`.
pub fn write_usamples<W: Write>(
    mut w: W,
    samples: &[Vec<GaussianRational>],
) -> Result<(), InvError> {
    for u in samples {
        for g in u {
            let (p, q) = rational_to_i8_pair(&g.re)?;
            let (r, s) = rational_to_i8_pair(&g.im)?;
            w.write_all(&[p as u8, q as u8, r as u8, s as u8])?;
        }
    }
    Ok(())
}

pub fn read_usamples<R: Read>(mut r: R, rank: usize) -> Result<Vec<Vec<GaussianRational>>, InvError> {
    let mut out = Vec::new();
    let mut quad = [0u8; 4];
    'samples: loop {
        let mut u = Vec::with_capacity(rank);
        for c in 0..rank {
            match r.read(&mut quad) {
                Ok(0) if c == 0 => break 'samples,
                Ok(4) => {}
                Ok(k) => {
                    let mut got = k;
                    while got < 4 {
                        let k2 = r.read(&mut quad[got..])?;
                        if k2 == 0 {
                            return Err(InvError::Encoding("truncated quadruple".into()));
                        }
                        got += k2;
                    }
                }
                Err(e) => return Err(e.into()),
            }
            let [p, q, s, t] = quad.map(|b| b as i8);
            if q == 0 || t == 0 {
                return Err(InvError::Encoding("zero denominator".into()));
            }
            u.push(GaussianRational::from_quad(
                p as i64, q as i64, s as i64, t as i64,
            ));
        }
        out.push(u);
    }
    Ok(out)
}
