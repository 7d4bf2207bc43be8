//! Root systems, weight systems, and the torus coordinates the rest of the
//! crate computes in.
//!
//! Conventions used everywhere downstream:
//!
//! * `cartan[i][j]` is the pairing of the j-th simple root with the i-th
//!   simple co-root. Columns of the Cartan matrix are therefore the simple
//!   roots written in the fundamental-weight basis.
//! * Weights are stored as integer vectors of co-root pairings (the
//!   fundamental-weight basis). A torus point pairs with a weight through
//!   these coordinates: the monomial of `w` is the product of `Q_i^{w_i}`.
//! * Positive roots are stored in simple-root coordinates.
//!
//! For E8 the node numbering follows the source convention this crate
//! reproduces: nodes 1..7 form the long chain and node 8 hangs off node 3.
//! The translation to Bourbaki numbering is `[1, 3, 4, 5, 6, 7, 8, 2]`
//! (entry `i` is the Bourbaki label of node `i+1` here); the adjoint
//! representation sits at node 7.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

#[derive(Debug, thiserror::Error)]
pub enum LieError {
    #[error("unknown or unsupported Dynkin type: {0}")]
    UnknownType(String),
    #[error("rank {rank} invalid for series {series}")]
    BadRank { series: char, rank: usize },
    #[error("highest weight must be dominant integral, got component {0}")]
    NonDominant(i64),
    #[error("weight system text is malformed: {0}")]
    BadAscii(String),
}

/// Identifies a simple Lie type. Parsed from names like "A2", "D4", "E8".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LieType {
    pub series: char,
    pub rank: usize,
}

impl LieType {
    pub fn parse(name: &str) -> Result<Self, LieError> {
        let mut chars = name.chars();
        let series = chars
            .next()
            .ok_or_else(|| LieError::UnknownType(name.into()))?
            .to_ascii_uppercase();
        let rank: usize = chars
            .as_str()
            .parse()
            .map_err(|_| LieError::UnknownType(name.into()))?;
        let ok = match series {
            'A' => rank >= 1,
            'B' => rank >= 2,
            'C' => rank >= 2,
            'D' => rank >= 3,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => return Err(LieError::UnknownType(name.into())),
        };
        if !ok {
            return Err(LieError::BadRank { series, rank });
        }
        Ok(LieType { series, rank })
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.series, self.rank)
    }
}

/// Bourbaki labels of the E8 nodes in this crate's numbering.
pub const E8_TO_BOURBAKI: [usize; 8] = [1, 3, 4, 5, 6, 7, 8, 2];

/// A simple root system with everything precomputed that the character
/// machinery needs: Cartan data, positive roots, the Weyl vector, and the
/// dimensions of the fundamental representations.
#[derive(Debug, Clone)]
pub struct RootSystem {
    pub kind: LieType,
    pub rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    pub cartan: Vec<Vec<i64>>,
    pub cartan_inv: Vec<Vec<BigRational>>,
    /// Symmetrizer `d_i` with short roots normalized to `d = 1`.
    pub sym: Vec<i64>,
    /// Positive roots in simple-root coordinates, sorted by height then lex.
    pub positive_roots: Vec<Vec<i64>>,
    /// The Weyl vector in simple-root coordinates (row sums of the inverse
    /// Cartan matrix).
    pub rho_alpha: Vec<BigRational>,
    /// Heights of the fundamental weights: `e[j] = ht(omega_j)`, the column
    /// sums of the inverse Cartan matrix.
    pub fund_heights: Vec<BigRational>,
    /// Dimensions of the fundamental representations.
    pub fund_dims: Vec<BigInt>,
}

fn adjacency_cartan(rank: usize, edges: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; rank]; rank];
    for i in 0..rank {
        c[i][i] = 2;
    }
    for &(a, b) in edges {
        c[a - 1][b - 1] = -1;
        c[b - 1][a - 1] = -1;
    }
    c
}

fn cartan_matrix(kind: LieType) -> (Vec<Vec<i64>>, Vec<i64>) {
    let n = kind.rank;
    match kind.series {
        'A' => {
            let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            (adjacency_cartan(n, &edges), vec![1; n])
        }
        'D' => {
            // Chain 1..n-1 with node n attached to node n-2.
            let mut edges: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
            edges.push((n - 2, n));
            (adjacency_cartan(n, &edges), vec![1; n])
        }
        'B' => {
            // Nodes 1..n-1 long, node n short.
            let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            let mut c = adjacency_cartan(n, &edges);
            c[n - 1][n - 2] = -2;
            let mut d = vec![2; n];
            d[n - 1] = 1;
            (c, d)
        }
        'C' => {
            // Nodes 1..n-1 short, node n long.
            let edges: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
            let mut c = adjacency_cartan(n, &edges);
            c[n - 2][n - 1] = -2;
            let mut d = vec![1; n];
            d[n - 1] = 2;
            (c, d)
        }
        'G' => {
            // Node 1 short, node 2 long.
            (vec![vec![2, -3], vec![-1, 2]], vec![1, 3])
        }
        'F' => {
            // Nodes 1,2 long, nodes 3,4 short (Bourbaki).
            let mut c = adjacency_cartan(4, &[(1, 2), (2, 3), (3, 4)]);
            c[2][1] = -2;
            c[1][2] = -1;
            (c, vec![2, 2, 1, 1])
        }
        'E' => {
            let edges: Vec<(usize, usize)> = match n {
                // Bourbaki: chain 1-3-4-5-6(-7(-8)), node 2 on node 4.
                6 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)],
                7 => vec![(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)],
                // E8 in this crate's numbering: chain 1..7, node 8 on node 3.
                8 => vec![(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (3, 8)],
                _ => unreachable!(),
            };
            (adjacency_cartan(n, &edges), vec![1; n])
        }
        _ => unreachable!(),
    }
}

fn invert_rational(mat: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = mat.len();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from(BigInt::from(mat[i][j]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("Cartan matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for j in col..2 * n {
            a[col][j] = &a[col][j] * &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in col..2 * n {
                    let sub = &f * &a[col][j];
                    a[r][j] = &a[r][j] - sub;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// Build the full root-system datum for a simple type.
pub fn build_root_system(kind: LieType) -> RootSystem {
    let rank = kind.rank;
    let (cartan, sym) = cartan_matrix(kind);
    let cartan_inv = invert_rational(&cartan);

    // Positive roots by height BFS: beta + alpha_i is a root iff
    // q - <beta, alpha_i^vee> > 0 where q is the length of the alpha_i-string
    // below beta.
    let mut roots: HashSet<Vec<i64>> = HashSet::new();
    let mut frontier: Vec<Vec<i64>> = Vec::new();
    for i in 0..rank {
        let mut r = vec![0i64; rank];
        r[i] = 1;
        roots.insert(r.clone());
        frontier.push(r);
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for b in &frontier {
            for i in 0..rank {
                let mut q = 0i64;
                let mut probe = b.clone();
                loop {
                    probe[i] -= 1;
                    let is_zero = probe.iter().all(|&x| x == 0);
                    if is_zero || roots.contains(&probe) {
                        q += 1;
                    } else {
                        break;
                    }
                }
                let pairing: i64 = (0..rank).map(|j| cartan[i][j] * b[j]).sum();
                if q - pairing > 0 {
                    let mut nb = b.clone();
                    nb[i] += 1;
                    if roots.insert(nb.clone()) {
                        next.push(nb);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut positive_roots: Vec<Vec<i64>> = roots.into_iter().collect();
    positive_roots.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));

    let rho_alpha: Vec<BigRational> = (0..rank)
        .map(|k| (0..rank).fold(BigRational::zero(), |acc, j| acc + &cartan_inv[k][j]))
        .collect();
    let fund_heights: Vec<BigRational> = (0..rank)
        .map(|j| (0..rank).fold(BigRational::zero(), |acc, k| acc + &cartan_inv[k][j]))
        .collect();

    let mut rs = RootSystem {
        kind,
        rank,
        cartan,
        cartan_inv,
        sym,
        positive_roots,
        rho_alpha,
        fund_heights,
        fund_dims: Vec::new(),
    };
    rs.fund_dims = (0..rank)
        .map(|j| {
            let mut w = vec![0i64; rank];
            w[j] = 1;
            rs.weyl_dim(&w)
        })
        .collect();
    rs
}

impl RootSystem {
    /// Weight-basis coordinates of a root given in simple-root coordinates.
    pub fn root_to_weight_basis(&self, r: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|i| (0..self.rank).map(|j| self.cartan[i][j] * r[j]).sum())
            .collect()
    }

    /// Simple-root coordinates of a weight given in weight-basis coordinates.
    pub fn weight_to_root_basis(&self, w: &[i64]) -> Vec<BigRational> {
        (0..self.rank)
            .map(|k| {
                (0..self.rank).fold(BigRational::zero(), |acc, j| {
                    acc + &self.cartan_inv[k][j] * BigRational::from(BigInt::from(w[j]))
                })
            })
            .collect()
    }

    /// Invariant pairing of a weight (weight basis) with a root
    /// (simple-root basis): `sum_k w_k r_k d_k`.
    fn pair_weight_root(&self, w: &[i64], r: &[i64]) -> i64 {
        (0..self.rank).map(|k| w[k] * r[k] * self.sym[k]).sum()
    }

    /// Invariant form of two weights in weight-basis coordinates.
    pub fn ip_weights(&self, x: &[i64], y: &[i64]) -> BigRational {
        // (x, y) = sum_k x_k (y_alpha)_k d_k
        let ya = self.weight_to_root_basis(y);
        (0..self.rank).fold(BigRational::zero(), |acc, k| {
            acc + &ya[k] * BigRational::from(BigInt::from(x[k] * self.sym[k]))
        })
    }

    /// Exact dimension of the irreducible representation with highest
    /// weight `lam` (weight basis) via the Weyl product formula.
    pub fn weyl_dim(&self, lam: &[i64]) -> BigInt {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        let lam_rho: Vec<i64> = lam.iter().map(|&x| x + 1).collect();
        let rho: Vec<i64> = vec![1; self.rank];
        for r in &self.positive_roots {
            num *= BigInt::from(self.pair_weight_root(&lam_rho, r));
            den *= BigInt::from(self.pair_weight_root(&rho, r));
        }
        let q = BigRational::new(num, den);
        assert!(q.is_integer(), "Weyl dimension must be integral");
        q.to_integer()
    }

    /// Dominance order on the weight lattice: does `y - x` lie in the
    /// non-negative integer span of the simple roots?
    pub fn dominance_leq(&self, x: &[i64], y: &[i64]) -> bool {
        let d: Vec<i64> = (0..self.rank).map(|i| y[i] - x[i]).collect();
        let da = self.weight_to_root_basis(&d);
        da.iter().all(|c| c.is_integer() && !c.is_negative())
    }

    /// Reflect a weight (weight basis) in the i-th simple root.
    pub fn reflect(&self, w: &[i64], i: usize) -> Vec<i64> {
        let wi = w[i];
        (0..self.rank).map(|k| w[k] - wi * self.cartan[k][i]).collect()
    }

    /// Dominant representative of the Weyl orbit of `w`.
    pub fn dominantize(&self, w: &[i64]) -> Vec<i64> {
        let mut v = w.to_vec();
        loop {
            match (0..self.rank).find(|&i| v[i] < 0) {
                Some(i) => v = self.reflect(&v, i),
                None => return v,
            }
        }
    }
}

/// The multiset of weights of an irreducible representation: one entry per
/// Weyl orbit member, with its multiplicity.
#[derive(Debug, Clone)]
pub struct WeightSystem {
    pub highest: Vec<i64>,
    /// `(weight in weight-basis coordinates, multiplicity)`, sorted in
    /// descending lexicographic order.
    pub weights: Vec<(Vec<i64>, u64)>,
    pub dim: BigInt,
}

impl WeightSystem {
    /// Number of distinct weights.
    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn zero_multiplicity(&self) -> u64 {
        self.weights
            .iter()
            .find(|(w, _)| w.iter().all(|&x| x == 0))
            .map(|(_, m)| *m)
            .unwrap_or(0)
    }
}

/// Dominant weights of the irreducible with highest weight `lam`, found by
/// walking down along positive roots through dominant points.
fn dominant_weights(rs: &RootSystem, lam: &[i64]) -> Vec<Vec<i64>> {
    let pos_wb: Vec<Vec<i64>> = rs
        .positive_roots
        .iter()
        .map(|r| rs.root_to_weight_basis(r))
        .collect();
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    seen.insert(lam.to_vec());
    queue.push_back(lam.to_vec());
    while let Some(mu) = queue.pop_front() {
        for b in &pos_wb {
            let cand: Vec<i64> = (0..rs.rank).map(|k| mu[k] - b[k]).collect();
            if cand.iter().all(|&x| x >= 0) && !seen.contains(&cand) {
                seen.insert(cand.clone());
                queue.push_back(cand);
            }
        }
    }
    let mut v: Vec<Vec<i64>> = seen.into_iter().collect();
    // Sort by descending height so Freudenthal can run in one pass.
    v.sort_by(|a, b| {
        let ha = rs
            .weight_to_root_basis(a)
            .iter()
            .fold(BigRational::zero(), |s, c| s + c);
        let hb = rs
            .weight_to_root_basis(b)
            .iter()
            .fold(BigRational::zero(), |s, c| s + c);
        hb.cmp(&ha).then_with(|| b.cmp(a))
    });
    v
}

/// Full weight system of the irreducible with highest weight `lam`
/// (weight-basis coordinates, must be dominant integral).
/// Multiplicities come from Freudenthal's recursion; orbits are expanded
/// with simple reflections.
pub fn weight_system(rs: &RootSystem, lam: &[i64]) -> Result<WeightSystem, LieError> {
    if let Some(&bad) = lam.iter().find(|&&x| x < 0) {
        return Err(LieError::NonDominant(bad));
    }
    let dom = dominant_weights(rs, lam);
    let mut mult: HashMap<Vec<i64>, BigInt> = HashMap::new();
    mult.insert(lam.to_vec(), BigInt::one());

    let lam_rho: Vec<i64> = lam.iter().map(|&x| x + 1).collect();
    let norm_lam = rs.ip_weights(&lam_rho, &lam_rho);

    for mu in dom.iter().skip(1) {
        let mut acc = BigRational::zero();
        for r in &rs.positive_roots {
            let rb = rs.root_to_weight_basis(r);
            let mut t = 1i64;
            loop {
                let shifted: Vec<i64> = (0..rs.rank).map(|k| mu[k] + t * rb[k]).collect();
                let drep = rs.dominantize(&shifted);
                match mult.get(&drep) {
                    Some(m) if !m.is_zero() => {
                        // (mu + t*alpha, alpha), integer-valued.
                        let p = rs.pair_weight_root(&shifted, r);
                        acc += BigRational::from(BigInt::from(p) * m);
                        t += 1;
                    }
                    _ => break,
                }
            }
        }
        let mu_rho: Vec<i64> = mu.iter().map(|&x| x + 1).collect();
        let denom = &norm_lam - rs.ip_weights(&mu_rho, &mu_rho);
        assert!(!denom.is_zero(), "Freudenthal denominator vanished");
        let m = acc * BigRational::from(BigInt::from(2)) / denom;
        assert!(m.is_integer(), "Freudenthal multiplicity must be integral");
        mult.insert(mu.clone(), m.to_integer());
    }

    // Expand orbits.
    let mut weights: Vec<(Vec<i64>, u64)> = Vec::new();
    let mut dim = BigInt::zero();
    for mu in &dom {
        let m = mult[mu].clone();
        if m.is_zero() {
            continue;
        }
        let mu64: u64 = (&m).try_into().expect("multiplicity fits u64");
        let mut orbit: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        orbit.insert(mu.clone());
        queue.push_back(mu.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..rs.rank {
                if w[i] != 0 {
                    let s = rs.reflect(&w, i);
                    if orbit.insert(s.clone()) {
                        queue.push_back(s);
                    }
                }
            }
        }
        dim += BigInt::from(orbit.len() as u64) * &m;
        for w in orbit {
            weights.push((w, mu64));
        }
    }
    weights.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(WeightSystem {
        highest: lam.to_vec(),
        weights,
        dim,
    })
}

/// Serialize a weight system to the crate's ASCII interchange format: a
/// header line `# <type> highest=<weight-basis coords>`, then one line per
/// distinct weight holding the simple-root coordinates (exact fractions
/// where non-integral) followed by the multiplicity.
pub fn weight_system_to_ascii(rs: &RootSystem, ws: &WeightSystem) -> String {
    let mut out = String::new();
    let hw: Vec<String> = ws.highest.iter().map(|x| x.to_string()).collect();
    writeln!(out, "# {} highest={}", rs.kind.name(), hw.join(",")).unwrap();
    for (w, m) in &ws.weights {
        let alpha = rs.weight_to_root_basis(w);
        let coords: Vec<String> = alpha
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.to_integer().to_string()
                } else {
                    format!("{}/{}", c.numer(), c.denom())
                }
            })
            .collect();
        writeln!(out, "{} {}", coords.join(" "), m).unwrap();
    }
    out
}

/// Parse the ASCII format written by [`weight_system_to_ascii`].
pub fn weight_system_from_ascii(rs: &RootSystem, text: &str) -> Result<WeightSystem, LieError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| LieError::BadAscii("empty input".into()))?;
    let highest: Vec<i64> = header
        .split("highest=")
        .nth(1)
        .ok_or_else(|| LieError::BadAscii("missing highest= in header".into()))?
        .trim()
        .split(',')
        .map(|t| t.parse().map_err(|_| LieError::BadAscii(format!("bad coord {t}"))))
        .collect::<Result<_, _>>()?;
    let mut weights = Vec::new();
    let mut dim = BigInt::zero();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != rs.rank + 1 {
            return Err(LieError::BadAscii(format!("bad field count in '{line}'")));
        }
        let alpha: Vec<BigRational> = toks[..rs.rank]
            .iter()
            .map(|t| {
                let parse_int = |s: &str| {
                    s.parse::<BigInt>()
                        .map_err(|_| LieError::BadAscii(format!("bad number {s}")))
                };
                match t.split_once('/') {
                    Some((n, d)) => Ok(BigRational::new(parse_int(n)?, parse_int(d)?)),
                    None => Ok(BigRational::from(parse_int(t)?)),
                }
            })
            .collect::<Result<_, LieError>>()?;
        let m: u64 = toks[rs.rank]
            .parse()
            .map_err(|_| LieError::BadAscii(format!("bad multiplicity in '{line}'")))?;
        // Back to weight basis: w = C * alpha.
        let w: Vec<i64> = (0..rs.rank)
            .map(|i| {
                let v = (0..rs.rank).fold(BigRational::zero(), |acc, j| {
                    acc + &alpha[j] * BigRational::from(BigInt::from(rs.cartan[i][j]))
                });
                assert!(v.is_integer());
                let vi: BigInt = v.to_integer();
                (&vi).try_into().expect("weight coordinate fits i64")
            })
            .collect();
        dim += BigInt::from(m);
        weights.push((w, m));
    }
    weights.sort_by(|a, b| b.0.cmp(&a.0));
    Ok(WeightSystem {
        highest,
        weights,
        dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rs(name: &str) -> RootSystem {
        build_root_system(LieType::parse(name).unwrap())
    }

    #[test]
    fn positive_root_counts() {
        for (name, count) in [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("B3", 9),
            ("C3", 9),
            ("D4", 12),
            ("G2", 6),
            ("F4", 24),
            ("E6", 36),
            ("E7", 63),
            ("E8", 120),
        ] {
            assert_eq!(rs(name).positive_roots.len(), count, "{name}");
        }
    }

    #[test]
    fn cartan_offdiagonal_range() {
        for name in ["A4", "B4", "C4", "D5", "G2", "F4", "E6", "E7", "E8"] {
            let r = rs(name);
            for i in 0..r.rank {
                for j in 0..r.rank {
                    if i != j {
                        assert!((-3..=0).contains(&r.cartan[i][j]));
                    }
                }
                assert_eq!(r.cartan[i][i], 2);
            }
        }
    }

    #[test]
    fn weyl_vector_is_all_ones_in_weight_basis() {
        for name in ["A2", "G2", "D4", "F4", "E8"] {
            let r = rs(name);
            // rho = sum of fundamental weights; its alpha coordinates are the
            // row sums of the inverse Cartan matrix, and half the sum of the
            // positive roots must agree.
            let mut half_sum = vec![BigRational::zero(); r.rank];
            for root in &r.positive_roots {
                for k in 0..r.rank {
                    half_sum[k] += BigRational::from(BigInt::from(root[k]));
                }
            }
            for k in 0..r.rank {
                let half = &half_sum[k] / BigRational::from(BigInt::from(2));
                assert_eq!(half, r.rho_alpha[k], "{name} coord {k}");
            }
        }
    }

    #[test]
    fn fundamental_dimensions() {
        assert_eq!(
            rs("A2").fund_dims,
            vec![BigInt::from(3), BigInt::from(3)]
        );
        assert_eq!(
            rs("A3").fund_dims,
            vec![BigInt::from(4), BigInt::from(6), BigInt::from(4)]
        );
        assert_eq!(rs("G2").fund_dims, vec![BigInt::from(7), BigInt::from(14)]);
        assert_eq!(
            rs("D4").fund_dims,
            vec![
                BigInt::from(8),
                BigInt::from(28),
                BigInt::from(8),
                BigInt::from(8)
            ]
        );
        assert_eq!(
            rs("F4").fund_dims,
            vec![
                BigInt::from(52),
                BigInt::from(1274),
                BigInt::from(273),
                BigInt::from(26)
            ]
        );
    }

    #[test]
    fn e8_fundamental_dimensions_follow_crate_numbering() {
        let r = rs("E8");
        let expect: [u64; 8] = [
            3875,
            6696000,
            6899079264,
            146325270,
            2450240,
            30380,
            248,
            147250,
        ];
        for (j, d) in expect.iter().enumerate() {
            assert_eq!(r.fund_dims[j], BigInt::from(*d), "node {}", j + 1);
        }
    }

    #[test]
    fn adjoint_weight_systems() {
        // Adjoint = 28-dim at node 2 for D4; zero weight multiplicity = rank.
        let r = rs("D4");
        let ws = weight_system(&r, &[0, 1, 0, 0]).unwrap();
        assert_eq!(ws.dim, BigInt::from(28));
        assert_eq!(ws.zero_multiplicity(), 4);
        assert_eq!(ws.support_len(), 24 + 1);

        let r = rs("A2");
        let ws = weight_system(&r, &[1, 1]).unwrap();
        assert_eq!(ws.dim, BigInt::from(8));
        assert_eq!(ws.zero_multiplicity(), 2);
        assert_eq!(ws.support_len(), 7);
    }

    #[test]
    fn mult_sums_match_weyl_dimension() {
        // A modest pseudo-random sweep across types; multiplicity sums must
        // reproduce the Weyl dimension formula exactly.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for name in ["A1", "A2", "A3", "B2", "B3", "C3", "D4", "G2", "F4"] {
            let r = rs(name);
            for _ in 0..20 {
                let lam: Vec<i64> = (0..r.rank).map(|_| (next() % 3) as i64).collect();
                let dim = r.weyl_dim(&lam);
                if dim > BigInt::from(200_000u64) {
                    continue;
                }
                let ws = weight_system(&r, &lam).unwrap();
                assert_eq!(ws.dim, dim, "{name} {lam:?}");
            }
        }
    }

    #[test]
    fn e8_key_weight_systems() {
        let r = rs("E8");
        let adj = weight_system(&r, &[0, 0, 0, 0, 0, 0, 1, 0]).unwrap();
        assert_eq!(adj.dim, BigInt::from(248));
        assert_eq!(adj.support_len(), 241);
        assert_eq!(adj.zero_multiplicity(), 8);

        let w1 = weight_system(&r, &[1, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(w1.dim, BigInt::from(3875));
        assert_eq!(w1.support_len(), 2401);

        let w8 = weight_system(&r, &[0, 0, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(w8.dim, BigInt::from(147250));
        assert_eq!(w8.support_len(), 26401);
    }

    #[test]
    fn weight_system_is_weyl_invariant() {
        let r = rs("G2");
        let ws = weight_system(&r, &[0, 1]).unwrap();
        let set: HashSet<(Vec<i64>, u64)> = ws.weights.iter().cloned().collect();
        for i in 0..r.rank {
            for (w, m) in &ws.weights {
                let s = r.reflect(w, i);
                assert!(set.contains(&(s, *m)));
            }
        }
    }

    #[test]
    fn dominance_examples() {
        let r = rs("A2");
        assert!(!r.dominance_leq(&[1, 0], &[0, 1]));
        assert!(!r.dominance_leq(&[0, 1], &[1, 0]));
        // 2*rho = (2,2) in the weight basis dominates 0.
        assert!(r.dominance_leq(&[0, 0], &[2, 2]));
        assert!(r.dominance_leq(&[1, 1], &[2, 2]));
    }

    #[test]
    fn non_dominant_rejected() {
        let r = rs("A2");
        assert!(weight_system(&r, &[-1, 0]).is_err());
    }

    #[test]
    fn ascii_roundtrip() {
        for (name, lam) in [("A2", vec![1i64, 1]), ("E8", vec![0, 0, 0, 0, 0, 0, 1, 0])] {
            let r = rs(name);
            let ws = weight_system(&r, &lam).unwrap();
            let text = weight_system_to_ascii(&r, &ws);
            let back = weight_system_from_ascii(&r, &text).unwrap();
            assert_eq!(back.highest, ws.highest);
            assert_eq!(back.weights, ws.weights);
        }
    }
}
