//! Per-class exact linear systems and their solutions.
//!
//! Each partition class yields one square system over the rationals: rows are
//! the class samples, columns the class members, and the entry at (sample,
//! member) is the real part of the member monomial evaluated at the sample.
//! The right-hand sides are scaled derivative values with the contributions
//! of all previously solved classes subtracted. Systems are solved exactly by
//! Dixon p-adic lifting with rational reconstruction, re-verified against the
//! original rational matrix, and checked for integrality; the imaginary parts
//! of the same equations are carried along as a consistency check that costs
//! nothing and must balance exactly.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::{Read, Write};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::admiss::{weak_order_cmp, AdmissibleSet, ClassKind, PartitionClass};
use crate::inversion::{SamplePoint, SampleStatus};
use crate::qi::GaussianRational;

/// Distinct primes tried before a mod-p singularity is reported as genuine.
pub const SINGULAR_PRIME_RETRIES: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum SolveError {
    /// Singular modulo every prime tried. An empty list means an exact
    /// elimination found a zero pivot directly.
    #[error("matrix singular modulo {} distinct primes", .primes.len())]
    Singular { primes: Vec<u64> },
    #[error("class {class_idx}: coefficient for member {iota_idx} at degree {k} is not an integer")]
    NonIntegral {
        class_idx: usize,
        iota_idx: usize,
        k: usize,
    },
    #[error("exponent vector {iota_idx} already has coefficients (partition overlap)")]
    PartitionViolation { iota_idx: usize },
    #[error("class {class_idx} assembled before prerequisite class {missing} was solved")]
    SchedulingViolation { class_idx: usize, missing: usize },
    #[error("class {class_idx}: sample {sample} is not certified")]
    UncertifiedSample { class_idx: usize, sample: usize },
    #[error("class {class_idx}: imaginary channel mismatch at sample {sample}, degree {k}")]
    ImaginaryMismatch {
        class_idx: usize,
        sample: usize,
        k: usize,
    },
    #[error("rational reconstruction failed after lifting {bits} bits")]
    Reconstruction { bits: u64 },
    #[error("shape: {0}")]
    Shape(String),
    #[error("encoding: {0}")]
    Encoding(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

// ---------------------------------------------------------------------------
// Structure factors

/// Derivative orders per coordinate for a class: the order taken at each
/// pinned-to-zero distinguished coordinate, zero elsewhere.
pub fn derivative_orders(class: &PartitionClass, rank: usize) -> Vec<u8> {
    let mut c = vec![0u8; rank];
    match class.kind {
        ClassKind::Origin | ClassKind::Plain => {}
        ClassKind::Deriv1(m1) => {
            c[class.sigma1.expect("deriv class has sigma1")] = m1;
        }
        ClassKind::Deriv2(m1, m2) => {
            c[class.sigma1.expect("deriv class has sigma1")] = m1;
            c[class.sigma2.expect("deriv2 class has sigma2")] = m2;
        }
    }
    c
}

/// Coefficient of an exponent vector in one class equation: the normalized
/// derivative (1/c_j!) d^{c_j} of u_j^{kappa_j} at the sample coordinate,
/// multiplied over coordinates. At a pinned coordinate (c_j > 0, u_j = 0)
/// this is the Kronecker delta on kappa_j = c_j; elsewhere it is u_j^kappa_j,
/// which vanishes whenever the sample support misses the exponent support.
pub fn structure_factor(
    kappa: &[u8],
    u: &[GaussianRational],
    c: &[u8],
) -> GaussianRational {
    let mut acc = GaussianRational::one();
    for j in 0..kappa.len() {
        if c[j] > 0 {
            if kappa[j] != c[j] {
                return GaussianRational::zero();
            }
        } else {
            if kappa[j] > 0 && u[j].is_zero() {
                return GaussianRational::zero();
            }
            if kappa[j] > 0 {
                acc = &acc * &u[j].pow(kappa[j] as u32);
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Class systems

/// One square rational system for a class, all exterior degrees sharing the
/// matrix. Row order follows the sample slice, column order the class member
/// list. The imaginary parts of the same equations ride along for the exact
/// consistency check after solving.
#[derive(Debug, Clone)]
pub struct ClassSystem {
    pub class_idx: usize,
    pub kmax: usize,
    /// Member exponent-vector indices, in column order.
    pub members: Vec<usize>,
    pub a_re: Vec<Vec<BigRational>>,
    pub a_im: Vec<Vec<BigRational>>,
    /// `rhs_re[k][s]` is the degree-k right-hand side at sample s.
    pub rhs_re: Vec<Vec<BigRational>>,
    pub rhs_im: Vec<Vec<BigRational>>,
}

fn factorial_big(n: u8) -> BigInt {
    let mut f = BigInt::one();
    for i in 2..=n as u64 {
        f *= i;
    }
    f
}

/// Build the class system from certified samples and raw derivative values.
///
/// `deriv_vals[s][k]` is the exact (lattice-rounded) value of the c-th
/// mixed derivative of the degree-k exterior character at sample s, without
/// the 1/(m1! m2!) normalization; the normalization is applied here. Every
/// class strictly below this one in the weak order must already be solved in
/// `prior`, and every sample must be certified, else assembly refuses.
pub fn assemble(
    set: &AdmissibleSet,
    class_idx: usize,
    samples: &[SamplePoint],
    deriv_vals: &[Vec<GaussianRational>],
    prior: &DecompTable,
) -> Result<ClassSystem, SolveError> {
    let class = &set.classes[class_idx];
    let n = class.members.len();
    if samples.len() != n || deriv_vals.len() != n {
        return Err(SolveError::Shape(format!(
            "class {} has {} members but {} samples / {} derivative rows",
            class_idx,
            n,
            samples.len(),
            deriv_vals.len()
        )));
    }
    let kmax = prior.kmax();
    for (s, row) in deriv_vals.iter().enumerate() {
        if row.len() != kmax + 1 {
            return Err(SolveError::Shape(format!(
                "sample {} carries {} degrees, expected {}",
                s,
                row.len(),
                kmax + 1
            )));
        }
    }
    for (j, other) in set.classes.iter().enumerate() {
        if weak_order_cmp(other, class) == Some(Ordering::Less) && !prior.is_solved(j) {
            return Err(SolveError::SchedulingViolation {
                class_idx,
                missing: j,
            });
        }
    }
    for (s, sp) in samples.iter().enumerate() {
        if sp.status != SampleStatus::Converged {
            return Err(SolveError::UncertifiedSample {
                class_idx,
                sample: s,
            });
        }
        if sp.u.len() != set.rank {
            return Err(SolveError::Shape(format!(
                "sample {} has rank {}, set has rank {}",
                s,
                sp.u.len(),
                set.rank
            )));
        }
    }

    let c = derivative_orders(class, set.rank);
    let mut cfact = BigInt::one();
    for &cj in &c {
        cfact *= factorial_big(cj);
    }
    let scale = GaussianRational::new(
        BigRational::new(BigInt::one(), cfact),
        BigRational::zero(),
    );

    let mut a_re = vec![vec![BigRational::zero(); n]; n];
    let mut a_im = vec![vec![BigRational::zero(); n]; n];
    for (s, sp) in samples.iter().enumerate() {
        for (col, &mi) in class.members.iter().enumerate() {
            let f = structure_factor(&set.iotas[mi], &sp.u, &c);
            a_re[s][col] = f.re;
            a_im[s][col] = f.im;
        }
    }

    let mut rhs_re = vec![vec![BigRational::zero(); n]; kmax + 1];
    let mut rhs_im = vec![vec![BigRational::zero(); n]; kmax + 1];
    for (s, sp) in samples.iter().enumerate() {
        // contributions of everything already solved; same-layer classes
        // contribute zero factors, so iterating the whole table is sound
        let mut sub = vec![GaussianRational::zero(); kmax + 1];
        for (&iota_idx, ns) in prior.iter() {
            let f = structure_factor(&set.iotas[iota_idx], &sp.u, &c);
            if f.is_zero() {
                continue;
            }
            for (k, nk) in ns.iter().enumerate() {
                if nk.is_zero() {
                    continue;
                }
                let w = GaussianRational::new(
                    BigRational::from_integer(nk.clone()),
                    BigRational::zero(),
                );
                sub[k] = &sub[k] + &(&w * &f);
            }
        }
        for k in 0..=kmax {
            let scaled = &(&deriv_vals[s][k] * &scale) - &sub[k];
            rhs_re[k][s] = scaled.re;
            rhs_im[k][s] = scaled.im;
        }
    }

    Ok(ClassSystem {
        class_idx,
        kmax,
        members: class.members.clone(),
        a_re,
        a_im,
        rhs_re,
        rhs_im,
    })
}

/// Solve every degree of a class system against one factorization, assert
/// integrality, and balance the imaginary channel. Returns `sol[k][col]`.
pub fn solve_class(sys: &ClassSystem, tag: &str) -> Result<Vec<Vec<BigInt>>, SolveError> {
    let xs = dixon_solve(&sys.a_re, &sys.rhs_re, tag)?;
    let mut sol = Vec::with_capacity(xs.len());
    for (k, col) in xs.iter().enumerate() {
        let mut ints = Vec::with_capacity(col.len());
        for (j, x) in col.iter().enumerate() {
            if !x.denom().is_one() {
                return Err(SolveError::NonIntegral {
                    class_idx: sys.class_idx,
                    iota_idx: sys.members[j],
                    k,
                });
            }
            ints.push(x.numer().clone());
        }
        sol.push(ints);
    }
    verify_imaginary(sys, &sol)?;
    Ok(sol)
}

/// The imaginary parts of the class equations, evaluated at the solved
/// integer coefficients, must balance exactly.
pub fn verify_imaginary(sys: &ClassSystem, sol: &[Vec<BigInt>]) -> Result<(), SolveError> {
    let n = sys.members.len();
    for (k, col) in sol.iter().enumerate() {
        for s in 0..n {
            let mut lhs = BigRational::zero();
            for j in 0..n {
                lhs += &sys.a_im[s][j] * BigRational::from_integer(col[j].clone());
            }
            if lhs != sys.rhs_im[k][s] {
                return Err(SolveError::ImaginaryMismatch {
                    class_idx: sys.class_idx,
                    sample: s,
                    k,
                });
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Decomposition table

/// Integer coefficients per exponent vector and exterior degree, filled class
/// by class. The class partition makes each insert disjoint; overlap is a
/// structural bug and fails loudly.
#[derive(Debug, Clone)]
pub struct DecompTable {
    kmax: usize,
    entries: HashMap<usize, Vec<BigInt>>,
    solved: Vec<bool>,
}

impl DecompTable {
    pub fn new(kmax: usize, n_classes: usize) -> Self {
        DecompTable {
            kmax,
            entries: HashMap::new(),
            solved: vec![false; n_classes],
        }
    }

    pub fn kmax(&self) -> usize {
        self.kmax
    }

    pub fn is_solved(&self, class_idx: usize) -> bool {
        self.solved[class_idx]
    }

    pub fn all_solved(&self) -> bool {
        self.solved.iter().all(|&s| s)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, iota_idx: usize) -> Option<&[BigInt]> {
        self.entries.get(&iota_idx).map(|v| v.as_slice())
    }

    /// Coefficient at (iota, k), zero when the exponent vector never appears.
    pub fn coefficient(&self, iota_idx: usize, k: usize) -> BigInt {
        assert!(k <= self.kmax, "degree {} beyond table kmax {}", k, self.kmax);
        self.entries
            .get(&iota_idx)
            .map(|v| v[k].clone())
            .unwrap_or_else(BigInt::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &Vec<BigInt>)> {
        self.entries.iter()
    }

    /// Record one solved class. `sol[k][col]` in the class member order.
    pub fn insert_class(
        &mut self,
        set: &AdmissibleSet,
        class_idx: usize,
        sol: &[Vec<BigInt>],
    ) -> Result<(), SolveError> {
        let class = &set.classes[class_idx];
        if self.solved[class_idx] {
            return Err(SolveError::PartitionViolation {
                iota_idx: class.members[0],
            });
        }
        if sol.len() != self.kmax + 1 {
            return Err(SolveError::Shape(format!(
                "class {} solution carries {} degrees, expected {}",
                class_idx,
                sol.len(),
                self.kmax + 1
            )));
        }
        for (col, &iota_idx) in class.members.iter().enumerate() {
            if self.entries.contains_key(&iota_idx) {
                return Err(SolveError::PartitionViolation { iota_idx });
            }
            let per_k: Vec<BigInt> = sol.iter().map(|ks| ks[col].clone()).collect();
            self.entries.insert(iota_idx, per_k);
        }
        self.solved[class_idx] = true;
        Ok(())
    }
}

/// Exterior degrees pair up around half the representation dimension; a query
/// above the midpoint reads the mirrored degree.
pub fn reflected_degree(k: usize, dim_v: usize) -> usize {
    k.min(dim_v - k)
}

// ---------------------------------------------------------------------------
// Solution file: one signed 64-bit little-endian integer per coefficient,
// degree-major, exponent vectors in dictionary order within each degree.

pub fn write_solfile<W: Write>(
    mut w: W,
    set: &AdmissibleSet,
    table: &DecompTable,
) -> Result<(), SolveError> {
    for k in 1..=table.kmax() {
        for iota_idx in 0..set.iotas.len() {
            let n = match table.get(iota_idx) {
                Some(row) => row[k].clone(),
                None => {
                    return Err(SolveError::Encoding(format!(
                        "exponent vector {} has no coefficients",
                        iota_idx
                    )))
                }
            };
            let v = n.to_i64().ok_or_else(|| {
                SolveError::Encoding(format!(
                    "coefficient at ({}, {}) exceeds 64 bits",
                    iota_idx, k
                ))
            })?;
            w.write_all(&v.to_le_bytes())?;
        }
    }
    Ok(())
}

/// Read back `sol[k-1][iota]` for k = 1..=kmax.
pub fn read_solfile<R: Read>(
    mut r: R,
    n_iotas: usize,
    kmax: usize,
) -> Result<Vec<Vec<i64>>, SolveError> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    let want = n_iotas * kmax * 8;
    if buf.len() != want {
        return Err(SolveError::Encoding(format!(
            "solution file holds {} bytes, expected {}",
            buf.len(),
            want
        )));
    }
    let mut out = Vec::with_capacity(kmax);
    let mut off = 0;
    for _ in 0..kmax {
        let mut row = Vec::with_capacity(n_iotas);
        for _ in 0..n_iotas {
            row.push(i64::from_le_bytes(buf[off..off + 8].try_into().unwrap()));
            off += 8;
        }
        out.push(row);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Dixon p-adic solver

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the witness set decides every 64-bit input.
fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// 62-bit prime derived from the tag; distinct attempts give distinct primes.
pub fn prime_from_tag(tag: &str, attempt: u32) -> u64 {
    let mut h = Sha256::new();
    h.update(tag.as_bytes());
    h.update(attempt.to_le_bytes());
    let d = h.finalize();
    let mut x = u64::from_le_bytes(d[0..8].try_into().unwrap());
    x &= (1u64 << 62) - 1;
    x |= 1u64 << 61;
    x |= 1;
    while !is_prime_u64(x) {
        x += 2;
    }
    x
}

struct ModLu {
    p: u64,
    m: Vec<Vec<u64>>,
    inv_diag: Vec<u64>,
    perm: Vec<usize>,
}

impl ModLu {
    fn factor(a: &[Vec<BigInt>], p: u64) -> Option<ModLu> {
        let n = a.len();
        let pbig = BigInt::from(p);
        let mut m: Vec<Vec<u64>> = a
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| x.mod_floor(&pbig).to_u64().unwrap())
                    .collect()
            })
            .collect();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut inv_diag = vec![0u64; n];
        for k in 0..n {
            let piv = (k..n).find(|&r| m[r][k] != 0)?;
            m.swap(k, piv);
            perm.swap(k, piv);
            let inv = powmod(m[k][k], p - 2, p);
            inv_diag[k] = inv;
            for i in k + 1..n {
                let f = mulmod(m[i][k], inv, p);
                m[i][k] = f;
                if f != 0 {
                    for j in k + 1..n {
                        let sub = mulmod(f, m[k][j], p);
                        m[i][j] = (m[i][j] + p - sub) % p;
                    }
                }
            }
        }
        Some(ModLu {
            p,
            m,
            inv_diag,
            perm,
        })
    }

    fn solve(&self, b: &[u64]) -> Vec<u64> {
        let n = b.len();
        let p = self.p;
        let mut y: Vec<u64> = (0..n).map(|i| b[self.perm[i]]).collect();
        for i in 0..n {
            let mut acc = y[i] as u128;
            for j in 0..i {
                acc += (p - mulmod(self.m[i][j], y[j], p)) as u128;
            }
            y[i] = (acc % p as u128) as u64;
        }
        for i in (0..n).rev() {
            let mut acc = y[i] as u128;
            for j in i + 1..n {
                acc += (p - mulmod(self.m[i][j], y[j], p)) as u128;
            }
            y[i] = mulmod((acc % p as u128) as u64, self.inv_diag[i], p);
        }
        y
    }
}

/// Wang rational reconstruction of x in [0, m) with numerator and denominator
/// below sqrt(m/2).
fn rational_reconstruct(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = ((m - BigInt::one()) / BigInt::from(2)).sqrt();
    let mut r0 = m.clone();
    let mut r1 = x.clone();
    let mut t0 = BigInt::zero();
    let mut t1 = BigInt::one();
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = r1;
        r1 = r2;
        let t2 = &t0 - &q * &t1;
        t0 = t1;
        t1 = t2;
    }
    if t1.is_zero() {
        return None;
    }
    let (num, den) = if t1.is_negative() {
        (-r1, -t1)
    } else {
        (r1, t1)
    };
    if den > bound || !num.gcd(&den).is_one() {
        return None;
    }
    Some(BigRational::new(num, den))
}

fn clear_rows(
    a: &[Vec<BigRational>],
    bs: &[Vec<BigRational>],
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let n = a.len();
    let mut a_int = vec![vec![BigInt::zero(); n]; n];
    let mut b_int = vec![vec![BigInt::zero(); n]; bs.len()];
    for i in 0..n {
        let mut l = BigInt::one();
        for x in &a[i] {
            l = l.lcm(x.denom());
        }
        for b in bs {
            l = l.lcm(b[i].denom());
        }
        for j in 0..n {
            a_int[i][j] = a[i][j].numer() * (&l / a[i][j].denom());
        }
        for (ci, b) in bs.iter().enumerate() {
            b_int[ci][i] = b[i].numer() * (&l / b[i].denom());
        }
    }
    (a_int, b_int)
}

fn verify_solution(
    a: &[Vec<BigRational>],
    bs: &[Vec<BigRational>],
    sol: &[Vec<BigRational>],
) -> bool {
    let n = a.len();
    for (ci, b) in bs.iter().enumerate() {
        for i in 0..n {
            let mut acc = BigRational::zero();
            for j in 0..n {
                acc += &a[i][j] * &sol[ci][j];
            }
            if acc != b[i] {
                return false;
            }
        }
    }
    true
}

/// Exact solve of a square rational system with several right-hand sides.
///
/// Rows are scaled to integers, one LU factorization modulo a tag-derived
/// 62-bit prime serves every column, and p-adic digits are lifted until
/// symmetric rational reconstruction succeeds and the candidate verifies
/// against the original system. Reconstruction is attempted on a geometric
/// schedule, so small (in particular integer) solutions exit long before the
/// worst-case determinant bound.
pub fn dixon_solve(
    a: &[Vec<BigRational>],
    bs: &[Vec<BigRational>],
    tag: &str,
) -> Result<Vec<Vec<BigRational>>, SolveError> {
    let n = a.len();
    for row in a {
        if row.len() != n {
            return Err(SolveError::Shape("matrix is not square".into()));
        }
    }
    for b in bs {
        if b.len() != n {
            return Err(SolveError::Shape("right-hand side length mismatch".into()));
        }
    }
    if n == 0 {
        return Ok(bs.iter().map(|_| Vec::new()).collect());
    }

    let (a_int, b_int) = clear_rows(a, bs);

    // Hadamard-style cap on the lift length: column norms bound the
    // determinant and the Cramer numerators
    let mut ha_bits: u64 = 0;
    for j in 0..n {
        let mut s = BigInt::zero();
        for row in &a_int {
            s += &row[j] * &row[j];
        }
        ha_bits += s.bits() / 2 + 1;
    }
    let mut hb_bits: u64 = 0;
    for b in &b_int {
        let mut s = BigInt::zero();
        for x in b {
            s += x * x;
        }
        hb_bits = hb_bits.max(s.bits() / 2 + 1);
    }
    let target_bits = 2 * ha_bits + hb_bits + 8;

    let mut primes = Vec::new();
    let lu = loop {
        if primes.len() == SINGULAR_PRIME_RETRIES {
            return Err(SolveError::Singular { primes });
        }
        let p = prime_from_tag(tag, primes.len() as u32);
        primes.push(p);
        if let Some(lu) = ModLu::factor(&a_int, p) {
            break lu;
        }
    };
    let p = lu.p;
    let pbig = BigInt::from(p);
    let max_iters = (target_bits / 61 + 2) as usize;

    let mut x_acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); n]; b_int.len()];
    let mut residual: Vec<Vec<BigInt>> = b_int;
    let mut pk = BigInt::one();
    let mut iter = 0usize;
    let mut next_attempt = 2usize;
    loop {
        let stop = next_attempt.min(max_iters);
        while iter < stop {
            for (ci, rcol) in residual.iter_mut().enumerate() {
                if rcol.iter().all(|x| x.is_zero()) {
                    continue;
                }
                let rmod: Vec<u64> = rcol
                    .iter()
                    .map(|x| x.mod_floor(&pbig).to_u64().unwrap())
                    .collect();
                let y = lu.solve(&rmod);
                for i in 0..n {
                    if y[i] != 0 {
                        x_acc[ci][i] += &pk * BigInt::from(y[i]);
                    }
                }
                for i in 0..n {
                    let mut acc = std::mem::take(&mut rcol[i]);
                    for j in 0..n {
                        if y[j] != 0 {
                            acc -= &a_int[i][j] * y[j];
                        }
                    }
                    debug_assert!(acc.mod_floor(&pbig).is_zero());
                    rcol[i] = acc / &pbig;
                }
            }
            pk *= &pbig;
            iter += 1;
        }

        let mut sol = Vec::with_capacity(x_acc.len());
        let mut ok = true;
        'cols: for col in &x_acc {
            let mut out = Vec::with_capacity(n);
            for x in col {
                match rational_reconstruct(x, &pk) {
                    Some(r) => out.push(r),
                    None => {
                        ok = false;
                        break 'cols;
                    }
                }
            }
            sol.push(out);
        }
        if ok && verify_solution(a, bs, &sol) {
            return Ok(sol);
        }
        if iter >= max_iters {
            return Err(SolveError::Reconstruction { bits: pk.bits() });
        }
        next_attempt *= 4;
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination, used as an independent cross-check

/// Bareiss fraction-free Gaussian elimination over the rationals. Exact and
/// independent of the p-adic path; quadratic-entry growth makes it a
/// reference implementation, not a production solver.
pub fn bareiss_solve(
    a: &[Vec<BigRational>],
    bs: &[Vec<BigRational>],
) -> Result<Vec<Vec<BigRational>>, SolveError> {
    let n = a.len();
    for row in a {
        if row.len() != n {
            return Err(SolveError::Shape("matrix is not square".into()));
        }
    }
    for b in bs {
        if b.len() != n {
            return Err(SolveError::Shape("right-hand side length mismatch".into()));
        }
    }
    if n == 0 {
        return Ok(bs.iter().map(|_| Vec::new()).collect());
    }
    let (a_int, b_int) = clear_rows(a, bs);
    let cols = b_int.len();
    let m = n + cols;
    let mut aug = vec![vec![BigInt::zero(); m]; n];
    for i in 0..n {
        for j in 0..n {
            aug[i][j] = a_int[i][j].clone();
        }
        for (ci, b) in b_int.iter().enumerate() {
            aug[i][n + ci] = b[i].clone();
        }
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let piv = (k..n).find(|&r| !aug[r][k].is_zero());
        let piv = match piv {
            Some(r) => r,
            None => return Err(SolveError::Singular { primes: Vec::new() }),
        };
        aug.swap(k, piv);
        for i in k + 1..n {
            for j in k + 1..m {
                let t = &aug[i][j] * &aug[k][k] - &aug[i][k] * &aug[k][j];
                aug[i][j] = t / &prev;
            }
            aug[i][k] = BigInt::zero();
        }
        prev = aug[k][k].clone();
    }
    let mut out = vec![vec![BigRational::zero(); n]; cols];
    for ci in 0..cols {
        for i in (0..n).rev() {
            let mut acc = BigRational::from_integer(aug[i][n + ci].clone());
            for j in i + 1..n {
                acc -= BigRational::from_integer(aug[i][j].clone()) * &out[ci][j];
            }
            out[ci][i] = acc / BigRational::from_integer(aug[i][i].clone());
        }
    }
    Ok(out)
}
