//! Positive matrices `Z`, the map `C ↦ CZ`, and twistor coordinates for
//! `m = 4`.

mod functionary;
mod middle;

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde_json::{json, Value};

pub use functionary::{favorite, Functionary, Symbol};
pub use middle::{
    check_middle_decomposition, pieces, sample_piece, signature, MiddleReport, Piece, PieceResult, SignTest,
};

use crate::error::{Error, Result};
use crate::matrix::{combinations, det, inversion_sign, rank_of, IndexSet, RationalMatrix};
use crate::rational::{format_q, parse_q, q, Q};
use crate::rng::{seeded, unit_fraction, SeedRng};

/// An `n × (k+4)` matrix whose maximal minors are all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveZ {
    k: usize,
    nodes: Vec<Q>,
    rows: Vec<Vec<Q>>,
}

impl PositiveZ {
    /// The Vandermonde matrix `Z[i][j] = nodes[i]^j`, with every maximal
    /// minor checked.
    pub fn vandermonde(n: usize, k: usize, nodes: &[Q]) -> Result<Self> {
        if nodes.len() != n {
            return Err(Error::Dimension(format!("{} nodes for n = {n}", nodes.len())));
        }
        if n < k + 4 {
            return Err(Error::InvalidArgument(format!("n = {n} < k + 4 = {}", k + 4)));
        }
        if !nodes[0].is_positive() || nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("nodes must be positive and strictly increasing".into()));
        }
        let rows: Vec<Vec<Q>> = nodes
            .iter()
            .map(|x| {
                let mut r = Vec::with_capacity(k + 4);
                let mut p = Q::one();
                for _ in 0..k + 4 {
                    r.push(p.clone());
                    p *= x;
                }
                r
            })
            .collect();
        let z = Self { k, nodes: nodes.to_vec(), rows };
        if let Some(bad) = z.first_nonpositive_minor() {
            return Err(Error::Degenerate(format!("minor {bad:?} is not positive")));
        }
        Ok(z)
    }

    /// Nodes `1, ..., n`.
    pub fn standard(n: usize, k: usize) -> Self {
        let nodes: Vec<Q> = (1..=n as i64).map(q).collect();
        Self::vandermonde(n, k, &nodes).expect("standard nodes are increasing")
    }

    /// Nodes `i + r_i` with `r_i ∈ (0, 1)` drawn from `seed`.
    pub fn perturbed(n: usize, k: usize, seed: u64) -> Self {
        let mut rng = seeded(seed);
        let nodes: Vec<Q> = (1..=n as i64).map(|i| q(i) + unit_fraction(&mut rng)).collect();
        Self::vandermonde(n, k, &nodes).expect("perturbed nodes stay increasing")
    }

    /// The standard matrix followed by `count - 1` perturbed ones.
    pub fn panel(n: usize, k: usize, count: usize, seed: u64) -> Vec<Self> {
        (0..count)
            .map(|c| if c == 0 { Self::standard(n, k) } else { Self::perturbed(n, k, seed.wrapping_add(c as u64)) })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Q] {
        &self.nodes
    }

    /// Row `Z_i`, 1-based.
    pub fn row(&self, i: usize) -> &[Q] {
        &self.rows[i - 1]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    fn first_nonpositive_minor(&self) -> Option<Vec<usize>> {
        let idx: Vec<usize> = (1..=self.n()).collect();
        combinations(&idx, self.k + 4).into_iter().find(|s| !self.minor(s).is_positive())
    }

    /// `⟨Z_J⟩` with the rows of `J` in the given order.
    pub fn minor(&self, j: &[usize]) -> Q {
        let m: Vec<Vec<Q>> = j.iter().map(|&i| self.row(i).to_vec()).collect();
        det(&m)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n(),
            "k": self.k,
            "nodes": self.nodes.iter().map(format_q).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |f: &str| v.get(f).ok_or_else(|| Error::Parse(format!("missing field {f}")));
        let n = field("n")?.as_u64().ok_or_else(|| Error::Parse("n must be an integer".into()))? as usize;
        let k = field("k")?.as_u64().ok_or_else(|| Error::Parse("k must be an integer".into()))? as usize;
        let nodes = field("nodes")?
            .as_array()
            .ok_or_else(|| Error::Parse("nodes must be an array".into()))?
            .iter()
            .map(|x| parse_q(x.as_str().ok_or_else(|| Error::Parse("nodes are strings".into()))?))
            .collect::<Result<Vec<Q>>>()?;
        Self::vandermonde(n, k, &nodes)
    }
}

/// `Y = CZ`, a `k × (k+4)` matrix.
pub fn amap(c: &RationalMatrix, z: &PositiveZ) -> Result<RationalMatrix> {
    if c.k() != z.k() {
        return Err(Error::Dimension(format!("C has {} rows, Z is built for k = {}", c.k(), z.k())));
    }
    if c.cols().iter().any(|col| col == 0 || col > z.n()) {
        return Err(Error::Dimension(format!("columns of C exceed [{}]", z.n())));
    }
    let w = z.k() + 4;
    let mut y = vec![vec![Q::zero(); w]; c.k()];
    for (r, row) in c.data().iter().enumerate() {
        for (p, col) in c.cols().iter().enumerate() {
            if row[p].is_zero() {
                continue;
            }
            for (a, zv) in z.row(col).iter().enumerate() {
                y[r][a] += &row[p] * zv;
            }
        }
    }
    let y = RationalMatrix::from_rows(IndexSet::range(1, c.k()), IndexSet::range(1, w), y)?;
    assert_eq!(rank_of(y.data()), c.k(), "CZ lost rank");
    Ok(y)
}

/// `⟨Y Z_{i1} Z_{i2} Z_{i3} Z_{i4}⟩` in the given order; zero on repeats.
pub fn twistor(y: &RationalMatrix, z: &PositiveZ, idx: &[usize; 4]) -> Q {
    if (0..4).any(|a| (a + 1..4).any(|b| idx[a] == idx[b])) {
        return Q::zero();
    }
    let mut m: Vec<Vec<Q>> = y.data().to_vec();
    m.extend(idx.iter().map(|&i| z.row(i).to_vec()));
    det(&m)
}

/// The twistor of `CZ` expanded over Plücker coordinates of `C`:
/// `Σ_J s(J, I) P_J(C) ⟨Z_{I ∪ J}⟩`, for sorted `I`.
pub fn twistor_via_plueckers(c: &RationalMatrix, z: &PositiveZ, idx: &[usize; 4]) -> Q {
    let mut sorted = *idx;
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Q::zero();
    }
    let rest: Vec<usize> = c.cols().iter().filter(|x| !sorted.contains(x)).collect();
    let mut total = Q::zero();
    for j in combinations(&rest, c.k()) {
        let p = c.pluecker(&j).expect("k columns");
        if p.is_zero() {
            continue;
        }
        let mut all: Vec<usize> = sorted.iter().copied().chain(j.iter().copied()).collect();
        all.sort_unstable();
        // pairs (i, j) with i in I below j in J
        let s = inversion_sign(&j, &sorted);
        let term = p * z.minor(&all);
        total += if s > 0 { term } else { -term };
    }
    sign_for_order(idx, total)
}

fn sign_for_order(idx: &[usize; 4], v: Q) -> Q {
    let inv = (0..4).map(|a| (a + 1..4).filter(|&b| idx[a] > idx[b]).count()).sum::<usize>();
    if inv % 2 == 0 {
        v
    } else {
        -v
    }
}

/// Memoised twistors of one `(Y, Z)` pair, keyed by sorted index set.
pub struct Twistors<'a> {
    y: &'a RationalMatrix,
    z: &'a PositiveZ,
    cache: HashMap<[usize; 4], Q>,
}

impl<'a> Twistors<'a> {
    pub fn new(y: &'a RationalMatrix, z: &'a PositiveZ) -> Self {
        Self { y, z, cache: HashMap::new() }
    }

    /// Twistor on a sorted, repeat-free index set.
    pub fn sorted(&mut self, s: &[usize; 4]) -> Q {
        if let Some(v) = self.cache.get(s) {
            return v.clone();
        }
        let v = twistor(self.y, self.z, s);
        self.cache.insert(*s, v.clone());
        v
    }

    /// Twistor in any index order.
    pub fn get(&mut self, idx: &[usize; 4]) -> Q {
        match Symbol::canonical(*idx) {
            None => Q::zero(),
            Some((s, sg)) => {
                let v = self.sorted(&s.0);
                if sg > 0 {
                    v
                } else {
                    -v
                }
            }
        }
    }
}

/// Every twistor of one `(Y, Z)` pair, indexed by sorted 4-subset.
#[derive(Debug, Clone)]
pub struct TwistorTable {
    values: HashMap<[usize; 4], Q>,
}

impl TwistorTable {
    pub fn new(y: &RationalMatrix, z: &PositiveZ) -> Self {
        let idx: Vec<usize> = (1..=z.n()).collect();
        let values = combinations(&idx, 4)
            .into_iter()
            .map(|s| {
                let a = [s[0], s[1], s[2], s[3]];
                (a, twistor(y, z, &a))
            })
            .collect();
        Self { values }
    }

    /// Twistor on a sorted index set.
    pub fn sorted(&self, s: &[usize; 4]) -> Q {
        self.values.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn eval(&self, f: &Functionary) -> Q {
        f.eval_by(|s| self.sorted(s))
    }
}

/// Index sets `{i, i+1, j, j+1}` and `{1, i, i+1, n}` of the boundary
/// twistors, sorted; the second family is flagged `true`.
pub fn boundary_index_sets(n: usize) -> Vec<([usize; 4], bool)> {
    let mut out = Vec::new();
    for i in 1..n {
        for j in i + 2..n {
            out.push(([i, i + 1, j, j + 1], false));
        }
    }
    for i in 2..n - 1 {
        out.push(([1, i, i + 1, n], true));
    }
    out.sort();
    out.dedup_by(|a, b| a.0 == b.0);
    out
}

/// Some cyclically consecutive pairs `(i, i⊕1)` and `(j, j⊕1)` such that
/// the row space of `c` meets `span{e_i, e_{i⊕1}, e_j, e_{j⊕1}}`, as the
/// smallest `(i, j)` with `i < j`. Equivalently the columns outside those
/// four have rank below `k`.
pub fn in_s_partial_a(c: &RationalMatrix) -> Option<(usize, usize)> {
    let k = c.k();
    if k == 0 {
        return None;
    }
    let cols = c.cols().as_slice().to_vec();
    let n = cols.len();
    for a in 0..n {
        for b in a + 1..n {
            let quad = [cols[a], cols[(a + 1) % n], cols[b], cols[(b + 1) % n]];
            if (0..4).any(|x| (x + 1..4).any(|y| quad[x] == quad[y])) {
                continue;
            }
            let rest: Vec<Vec<Q>> = (0..n)
                .filter(|p| !quad.contains(&cols[*p]))
                .map(|p| c.data().iter().map(|r| r[p].clone()).collect())
                .collect();
            if rank_of(&rest) < k {
                return Some((cols[a], cols[b]));
            }
        }
    }
    None
}

/// A point of `Gr^>_{k, cols}`: `C[r][c] = x_c^{e_r}` with increasing
/// positive nodes `x_c` and increasing integer exponents `e_r`, a
/// generalised Vandermonde matrix and so totally positive.
pub fn positive_point(k: usize, cols: &IndexSet, rng: &mut SeedRng) -> RationalMatrix {
    let mut x = Q::zero();
    let nodes: Vec<Q> = cols
        .iter()
        .map(|_| {
            x += q(1) + unit_fraction(rng);
            x.clone()
        })
        .collect();
    let mut e = 0u32;
    let exps: Vec<u32> = (0..k)
        .map(|r| {
            if r > 0 {
                e += 1 + rng.gen_range(0..2);
            }
            e
        })
        .collect();
    let data: Vec<Vec<Q>> = exps.iter().map(|&e| nodes.iter().map(|x| pow(x, e)).collect()).collect();
    RationalMatrix::from_rows(IndexSet::range(1, k), cols.clone(), data).expect("shape")
}

fn pow(x: &Q, e: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// `(-1)^e` as a sign.
pub(crate) fn parity(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domino::sample_cell;
    use crate::ChordDiagram;

    #[test]
    fn vandermonde_minors() {
        let z = PositiveZ::standard(5, 1);
        assert!(z.minor(&[1, 2, 3, 4, 5]).is_positive());
        let z = PositiveZ::standard(8, 2);
        let idx: Vec<usize> = (1..=8).collect();
        assert!(combinations(&idx, 6).iter().all(|s| z.minor(s).is_positive()));
        assert!(PositiveZ::vandermonde(3, 0, &[q(1), q(3), q(2)]).is_err());
        assert_eq!(PositiveZ::perturbed(7, 1, 3), PositiveZ::perturbed(7, 1, 3));
    }

    #[test]
    fn twistor_symmetries() {
        let d = ChordDiagram::from_pairs(7, &[(1, 4)]).unwrap();
        let c = sample_cell(&d, 1);
        let z = PositiveZ::standard(7, 1);
        let y = amap(&c, &z).unwrap();
        assert_eq!(twistor(&y, &z, &[1, 3, 7, 5]), -twistor(&y, &z, &[1, 3, 5, 7]));
        assert!(twistor(&y, &z, &[2, 4, 6, 6]).is_zero());
    }

    #[test]
    fn empty_y_twistor_is_a_minor() {
        let e = RationalMatrix::zeros(IndexSet::empty(), IndexSet::range(1, 6));
        let z = PositiveZ::standard(6, 0);
        let y = amap(&e, &z).unwrap();
        assert_eq!(y.k(), 0);
        assert_eq!(twistor(&y, &z, &[1, 2, 4, 6]), z.minor(&[1, 2, 4, 6]));
    }

    #[test]
    fn witness_on_four_columns() {
        let cols = IndexSet::range(1, 8);
        let mut row = vec![Q::zero(); 8];
        for (p, v) in [(1, 1), (2, 2), (5, 3), (6, 1)] {
            row[p] = q(v);
        }
        let c = RationalMatrix::from_rows(IndexSet::range(1, 1), cols, vec![row]).unwrap();
        assert_eq!(in_s_partial_a(&c), Some((2, 6)));
    }

    #[test]
    fn positive_points_are_positive() {
        let mut rng = seeded(5);
        let c = positive_point(3, &IndexSet::range(1, 7), &mut rng);
        assert!(c.all_plueckers().iter().all(|(_, v)| v.is_positive()));
    }
}
