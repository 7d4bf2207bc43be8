//! The admissible exponent set: every monomial in fundamental characters
//! that can occur in an exterior-power decomposition has its exponent vector
//! in this finite lattice region. The region is partitioned by support and
//! refined into derivative/plain classes; a weak order on the classes fixes
//! which linear systems must be solved before which.

use crate::liealg::RootSystem;
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::io::{Read, Write};

#[derive(Debug, thiserror::Error)]
pub enum AdmissError {
    #[error("exponent {0} exceeds the 8-bit storage format")]
    ExponentOverflow(u64),
    #[error("dictionary file is malformed: {0}")]
    BadDictFile(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Which kind of linear system a class generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ClassKind {
    /// The zero exponent vector; a single evaluation at the origin.
    Origin,
    /// Both distinguished coordinates zeroed and differentiated:
    /// orders (m1, m2).
    Deriv2(u8, u8),
    /// Only the first distinguished coordinate zeroed, order m1.
    Deriv1(u8),
    /// No differentiation; plain sampling.
    Plain,
}

impl ClassKind {
    /// Position in the intra-support solve order.
    pub fn stage(&self) -> u8 {
        match self {
            ClassKind::Origin | ClassKind::Deriv2(_, _) => 0,
            ClassKind::Deriv1(_) => 1,
            ClassKind::Plain => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PartitionClass {
    /// Support bit mask (bit j set iff iota_j > 0).
    pub mask: u32,
    pub kind: ClassKind,
    /// Distinguished support indices: largest and second-largest fundamental
    /// dimension, ties to the smaller index. `None` when the support is too
    /// small to define them.
    pub sigma1: Option<usize>,
    pub sigma2: Option<usize>,
    /// Indices into the enumeration, lexicographically increasing.
    pub members: Vec<usize>,
}

impl PartitionClass {
    pub fn support_size(&self) -> u32 {
        self.mask.count_ones()
    }

    pub fn layer_key(&self) -> (u32, u8) {
        (self.support_size(), self.kind.stage())
    }
}

#[derive(Debug)]
pub struct AdmissibleSet {
    pub rank: usize,
    pub d_max: u8,
    /// All admissible exponent vectors in lexicographic order.
    pub iotas: Vec<Vec<u8>>,
    pub classes: Vec<PartitionClass>,
    /// Class index of each exponent vector.
    pub class_of: Vec<usize>,
    /// Upper count of (support, kind) cells before pruning empties.
    pub cells_before_pruning: usize,
}

fn support_mask(iota: &[u8]) -> u32 {
    iota.iter()
        .enumerate()
        .fold(0u32, |m, (j, &x)| if x > 0 { m | (1 << j) } else { m })
}

/// Distinguished indices of a support: order the support by descending
/// fundamental dimension, ties broken toward the smaller index.
pub fn distinguished_indices(rs: &RootSystem, mask: u32) -> (Option<usize>, Option<usize>) {
    let mut supp: Vec<usize> = (0..rs.rank).filter(|j| mask & (1 << j) != 0).collect();
    supp.sort_by(|&a, &b| {
        rs.fund_dims[b]
            .cmp(&rs.fund_dims[a])
            .then(a.cmp(&b))
    });
    (supp.first().copied(), supp.get(1).copied())
}

/// Integer form of the admissibility inequality: scaled columns of the
/// inverse Cartan matrix and the scaled doubled-Weyl-vector bound.
struct IntAdmiss {
    cols: Vec<Vec<i64>>, // cols[j][k] = scaled (omega_j)_k in root basis
    bound: Vec<i64>,     // scaled 2 * rho_k in root basis
}

fn integer_admissibility(rs: &RootSystem) -> IntAdmiss {
    let mut denom_lcm = BigInt::one();
    for row in &rs.cartan_inv {
        for x in row {
            denom_lcm = denom_lcm.lcm(x.denom());
        }
    }
    let scale = denom_lcm;
    let to_i64 = |x: &BigInt| -> i64 { x.to_i64().expect("scaled admissibility entry fits i64") };
    let mut cols = vec![vec![0i64; rs.rank]; rs.rank];
    let mut bound = vec![0i64; rs.rank];
    for k in 0..rs.rank {
        for j in 0..rs.rank {
            let v = &rs.cartan_inv[k][j] * &scale;
            assert!(v.is_integer() && v.numer().is_positive());
            cols[j][k] = to_i64(v.numer());
            bound[k] += 2 * cols[j][k];
        }
    }
    IntAdmiss { cols, bound }
}

/// Enumerate all exponent vectors with `sum_j iota_j omega_j` dominated by
/// twice the Weyl vector (componentwise in the root basis, no integrality).
/// Lexicographic output order.
pub fn enumerate_admissible(rs: &RootSystem) -> Result<Vec<Vec<u8>>, AdmissError> {
    let ia = integer_admissibility(rs);
    let mut out = Vec::new();
    let mut iota = vec![0u8; rs.rank];
    let mut slack = ia.bound.clone();
    fn rec(
        j: usize,
        rank: usize,
        ia: &IntAdmiss,
        iota: &mut Vec<u8>,
        slack: &mut Vec<i64>,
        out: &mut Vec<Vec<u8>>,
    ) -> Result<(), AdmissError> {
        if j == rank {
            out.push(iota.clone());
            return Ok(());
        }
        let mut steps: u64 = 0;
        loop {
            rec(j + 1, rank, ia, iota, slack, out)?;
            // Can we increment coordinate j?
            if (0..rank).all(|k| slack[k] >= ia.cols[j][k]) {
                steps += 1;
                if steps > u8::MAX as u64 {
                    return Err(AdmissError::ExponentOverflow(steps));
                }
                iota[j] = steps as u8;
                for k in 0..rank {
                    slack[k] -= ia.cols[j][k];
                }
            } else {
                break;
            }
        }
        // Restore.
        for k in 0..rank {
            slack[k] += steps as i64 * ia.cols[j][k];
        }
        iota[j] = 0;
        Ok(())
    }
    rec(0, rs.rank, &ia, &mut iota, &mut slack, &mut out)?;
    Ok(out)
}

/// Class tag of one admissible exponent vector.
pub fn classify(rs: &RootSystem, iota: &[u8], d_max: u8) -> (u32, ClassKind) {
    let mask = support_mask(iota);
    let n = mask.count_ones();
    if n == 0 {
        return (0, ClassKind::Origin);
    }
    let (s1, s2) = distinguished_indices(rs, mask);
    let m1 = iota[s1.unwrap()];
    if n == 1 {
        // No second coordinate: the two-sided split degenerates to the
        // order-m1 class up to d_max and plain sampling beyond.
        return if m1 <= d_max {
            (mask, ClassKind::Deriv1(m1))
        } else {
            (mask, ClassKind::Plain)
        };
    }
    let m2 = iota[s2.unwrap()];
    if m1 > d_max {
        (mask, ClassKind::Plain)
    } else if m1 + m2 <= d_max {
        (mask, ClassKind::Deriv2(m1, m2))
    } else {
        (mask, ClassKind::Deriv1(m1))
    }
}

/// Build the full classified set.
pub fn build_admissible_set(rs: &RootSystem, d_max: u8) -> Result<AdmissibleSet, AdmissError> {
    let iotas = enumerate_admissible(rs)?;
    let mut cells: BTreeMap<(u32, ClassKind), Vec<usize>> = BTreeMap::new();
    for (i, iota) in iotas.iter().enumerate() {
        let tag = classify(rs, iota, d_max);
        cells.entry(tag).or_default().push(i);
    }
    let mut classes = Vec::with_capacity(cells.len());
    let mut class_of = vec![usize::MAX; iotas.len()];
    for ((mask, kind), members) in cells {
        let (sigma1, sigma2) = distinguished_indices(rs, mask);
        let id = classes.len();
        for &m in &members {
            class_of[m] = id;
        }
        classes.push(PartitionClass {
            mask,
            kind,
            sigma1,
            sigma2,
            members,
        });
    }
    // 10 two-sided + d_max one-sided + 1 plain per support, counting the
    // degenerate supports at the same upper rate.
    let kinds_per_support = (d_max as usize * (d_max as usize - 1)) / 2 + d_max as usize + 1;
    let cells_before_pruning = kinds_per_support * (1usize << rs.rank);
    Ok(AdmissibleSet {
        rank: rs.rank,
        d_max,
        iotas,
        classes,
        class_of,
        cells_before_pruning,
    })
}

/// Weak order between classes: `Less` means "must be solved first";
/// `None` means incomparable (parallel).
pub fn weak_order_cmp(a: &PartitionClass, b: &PartitionClass) -> Option<Ordering> {
    let (na, nb) = (a.support_size(), b.support_size());
    if na != nb {
        return Some(na.cmp(&nb));
    }
    if a.mask != b.mask {
        return None;
    }
    let (sa, sb) = (a.kind.stage(), b.kind.stage());
    if sa == sb {
        None
    } else {
        Some(sa.cmp(&sb))
    }
}

/// Layers of pairwise-incomparable classes, in solve order. Class indices
/// within a layer keep their deterministic (mask, kind) order.
pub fn dependency_schedule(set: &AdmissibleSet) -> Vec<Vec<usize>> {
    let mut by_layer: BTreeMap<(u32, u8), Vec<usize>> = BTreeMap::new();
    for (i, c) in set.classes.iter().enumerate() {
        by_layer.entry(c.layer_key()).or_default().push(i);
    }
    by_layer.into_values().collect()
}

// ---------------------------------------------------------------------------
// Dictionary file: all exponent vectors as consecutive 8-bit rows in
// enumeration (lexicographic) order.

pub fn write_dict<W: Write>(mut w: W, iotas: &[Vec<u8>]) -> Result<(), AdmissError> {
    for iota in iotas {
        w.write_all(iota)?;
    }
    Ok(())
}

pub fn read_dict<R: Read>(mut r: R, rank: usize) -> Result<Vec<Vec<u8>>, AdmissError> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    if rank == 0 || buf.len() % rank != 0 {
        return Err(AdmissError::BadDictFile(format!(
            "length {} not a multiple of rank {}",
            buf.len(),
            rank
        )));
    }
    let mut out = Vec::with_capacity(buf.len() / rank);
    let mut prev: Option<&[u8]> = None;
    for row in buf.chunks_exact(rank) {
        if let Some(p) = prev {
            if p >= row {
                return Err(AdmissError::BadDictFile(
                    "rows not strictly lexicographically increasing".into(),
                ));
            }
        }
        out.push(row.to_vec());
        prev = Some(&buf[(out.len() - 1) * rank..out.len() * rank]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{build_root_system, LieType};

    fn rs(name: &str) -> RootSystem {
        build_root_system(LieType::parse(name).unwrap())
    }

    #[test]
    fn a2_enumeration_explicit() {
        let set = enumerate_admissible(&rs("A2")).unwrap();
        let expect: Vec<Vec<u8>> = vec![
            vec![0, 0],
            vec![0, 1],
            vec![0, 2],
            vec![0, 3],
            vec![1, 0],
            vec![1, 1],
            vec![1, 2],
            vec![2, 0],
            vec![2, 1],
            vec![2, 2],
            vec![3, 0],
        ];
        assert_eq!(set, expect);
    }

    #[test]
    fn zero_always_admissible_and_first() {
        for name in ["A2", "A3", "G2", "D4", "F4"] {
            let set = enumerate_admissible(&rs(name)).unwrap();
            assert_eq!(set[0], vec![0u8; set[0].len()], "{name}");
        }
    }

    #[test]
    fn downward_closed() {
        let r = rs("G2");
        let set = enumerate_admissible(&r).unwrap();
        let in_set = |v: &[u8]| set.binary_search_by(|x| x.as_slice().cmp(v)).is_ok();
        for iota in &set {
            for j in 0..iota.len() {
                if iota[j] > 0 {
                    let mut down = iota.clone();
                    down[j] -= 1;
                    assert!(in_set(&down), "{iota:?} minus e_{j}");
                }
            }
        }
    }

    #[test]
    fn e8_cardinality_and_max_degree() {
        let r = rs("E8");
        let set = enumerate_admissible(&r).unwrap();
        assert_eq!(set.len(), 950077);
        let max_sum: u64 = set
            .iter()
            .map(|iota| iota.iter().map(|&x| x as u64).sum())
            .max()
            .unwrap();
        // The adjoint coordinate saturates first: its root coordinates all
        // equal theta's, so the cap is min_k 2*rho_k / theta_k = 58/2 = 29.
        assert_eq!(max_sum, 29);
        let mut apex = vec![0u8; 8];
        apex[6] = 29;
        assert!(set.binary_search_by(|x| x.as_slice().cmp(&apex)).is_ok());
        apex[6] = 30;
        assert!(set.binary_search_by(|x| x.as_slice().cmp(&apex)).is_err());
    }

    #[test]
    fn distinguished_index_example() {
        // Support {2, 5, 7, 8} in 1-based labels.
        let r = rs("E8");
        let mask = (1 << 1) | (1 << 4) | (1 << 6) | (1 << 7);
        let (s1, s2) = distinguished_indices(&r, mask);
        assert_eq!(s1, Some(1));
        assert_eq!(s2, Some(4));
    }

    #[test]
    fn classify_examples() {
        let r = rs("E8");
        let mut apex = vec![0u8; 8];
        apex[6] = 29;
        let (mask, kind) = classify(&r, &apex, 5);
        assert_eq!(mask, 1 << 6);
        assert_eq!(kind, ClassKind::Plain);

        let (_, kind0) = classify(&r, &[0; 8], 5);
        assert_eq!(kind0, ClassKind::Origin);

        // Two-coordinate support, small orders: two-sided derivative class.
        let mut v = vec![0u8; 8];
        v[1] = 2; // dim-major coordinate
        v[0] = 1;
        let (_, kind2) = classify(&r, &v, 5);
        assert_eq!(kind2, ClassKind::Deriv2(2, 1));

        // Overflow on the second coordinate only.
        let mut v = vec![0u8; 8];
        v[1] = 2;
        v[0] = 4;
        let (_, kind1) = classify(&r, &v, 5);
        assert_eq!(kind1, ClassKind::Deriv1(2));
    }

    #[test]
    fn e8_partition_and_largest_class() {
        let r = rs("E8");
        let set = build_admissible_set(&r, 5).unwrap();
        let total: usize = set.classes.iter().map(|c| c.members.len()).sum();
        assert_eq!(total, set.iotas.len());
        assert_eq!(set.cells_before_pruning, 16 * 256);
        for (i, c) in set.classes.iter().enumerate() {
            for &m in &c.members {
                assert_eq!(set.class_of[m], i);
            }
        }
        assert_eq!(set.classes.len(), 3997);
        let largest = set
            .classes
            .iter()
            .max_by_key(|c| c.members.len())
            .unwrap();
        assert_eq!(largest.members.len(), 7268);
        assert_eq!(largest.mask, 0b11111011u32); // support {1,2,4,5,6,7,8}
        assert_eq!(largest.kind, ClassKind::Deriv2(1, 1));
        // Beyond-threshold cell on a six-index support.
        let named = set
            .classes
            .iter()
            .find(|c| c.mask == 0b11110011 && c.kind == ClassKind::Plain)
            .unwrap();
        assert_eq!(named.members.len(), 1051);
    }

    #[test]
    fn schedule_layers_sound() {
        let r = rs("E8");
        let set = build_admissible_set(&r, 5).unwrap();
        let layers = dependency_schedule(&set);
        assert!(layers.len() <= 8 * 3 + 1, "{}", layers.len());
        assert_eq!(layers[0].len(), 1);
        assert_eq!(set.classes[layers[0][0]].kind, ClassKind::Origin);
        let mut keys: Vec<(u32, u8)> = Vec::new();
        for layer in &layers {
            for pair in layer.windows(2) {
                let (a, b) = (&set.classes[pair[0]], &set.classes[pair[1]]);
                assert_eq!(weak_order_cmp(a, b), None);
            }
            keys.push(set.classes[layer[0]].layer_key());
        }
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        // Cross-layer comparable pairs always point forward.
        let c_first = &set.classes[layers[0][0]];
        let c_last = &set.classes[*layers.last().unwrap().last().unwrap()];
        assert_eq!(weak_order_cmp(c_first, c_last), Some(Ordering::Less));
    }

    #[test]
    fn weak_order_examples() {
        let r = rs("A2");
        let set = build_admissible_set(&r, 5).unwrap();
        let origin = set
            .classes
            .iter()
            .find(|c| c.kind == ClassKind::Origin)
            .unwrap();
        for c in &set.classes {
            if c.kind != ClassKind::Origin {
                assert_eq!(weak_order_cmp(origin, c), Some(Ordering::Less));
            }
        }
    }

    #[test]
    fn dict_roundtrip_and_order_check() {
        let r = rs("A3");
        let set = enumerate_admissible(&r).unwrap();
        let mut buf = Vec::new();
        write_dict(&mut buf, &set).unwrap();
        assert_eq!(buf.len(), set.len() * 3);
        let back = read_dict(buf.as_slice(), 3).unwrap();
        assert_eq!(back, set);
        // Corrupt the order: rotating by one row breaks lexicographic increase.
        let mut bad = buf.clone();
        bad.rotate_left(3);
        assert!(read_dict(bad.as_slice(), 3).is_err());
    }
}
