//! Exact rational matrices over arbitrary row and column index sets, the
//! positivity-preserving column operations, and Plücker coordinates.
//!
//! Entries are stored densely in position order. Labels are looked up through
//! the sorted [`IndexSet`]s, and the cyclic successor of `max N` is `min N`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::DecoratedPermutation;
use crate::rational::{format_q, parity_sign, parse_q, sign, Q};

/// A strictly increasing finite set of positive integers, ordered cyclically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(mut v: Vec<usize>) -> Result<Self> {
        v.sort_unstable();
        if v.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument(format!("repeated index in {v:?}")));
        }
        if v.first() == Some(&0) {
            return Err(Error::InvalidArgument("indices start at 1".into()));
        }
        Ok(Self(v))
    }

    /// `{a, a+1, ..., b}`; empty when `b < a`.
    pub fn range(a: usize, b: usize) -> Self {
        Self((a..=b).collect())
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.0.binary_search(&x).ok()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.position(x).is_some()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Cyclic shift by `d` positions inside the set: `x ⊕ d`.
    pub fn offset(&self, x: usize, d: isize) -> Result<usize> {
        let p = self.position(x).ok_or(Error::IndexMissing(x))? as isize;
        let n = self.0.len() as isize;
        Ok(self.0[(p + d).rem_euclid(n) as usize])
    }

    pub fn succ(&self, x: usize) -> Result<usize> {
        self.offset(x, 1)
    }

    pub fn pred(&self, x: usize) -> Result<usize> {
        self.offset(x, -1)
    }

    pub fn with(&self, x: usize) -> Result<Self> {
        match self.0.binary_search(&x) {
            Ok(_) => Err(Error::IndexPresent(x)),
            Err(p) => {
                let mut v = self.0.clone();
                v.insert(p, x);
                Ok(Self(v))
            }
        }
    }

    pub fn without(&self, x: usize) -> Result<Self> {
        let p = self.position(x).ok_or(Error::IndexMissing(x))?;
        let mut v = self.0.clone();
        v.remove(p);
        Ok(Self(v))
    }
}

impl From<IndexSet> for Vec<usize> {
    fn from(s: IndexSet) -> Self {
        s.0
    }
}

/// All `k`-element subsets of `items`, in lexicographic order of positions.
pub fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let need = k - cur.len();
        for p in start..items.len() {
            if items.len() - p < need {
                break;
            }
            cur.push(items[p]);
            rec(items, k, p + 1, cur, out);
            cur.pop();
        }
    }
    rec(items, k, 0, &mut cur, &mut out);
    out
}

/// Determinant of a square rational matrix: each row is cleared of
/// denominators and the integer matrix is reduced by Bareiss elimination.
pub fn det(m: &[Vec<Q>]) -> Q {
    let n = m.len();
    if n == 0 {
        return Q::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        assert_eq!(row.len(), n, "determinant of a non-square matrix");
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.push(row.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        scale *= l;
    }
    Q::new(bareiss(a), scale)
}

/// Fraction-free Gaussian elimination; returns the exact determinant.
pub fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// `(-1)^e` where `e` counts pairs `(a, b) ∈ J × I` with `a > b`.
pub fn inversion_sign(j: &[usize], i: &[usize]) -> i8 {
    let e: usize = j.iter().map(|a| i.iter().filter(|b| a > b).count()).sum();
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// A matrix in `Mat_{K×N}` with exact rational entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: IndexSet,
    cols: IndexSet,
    data: Vec<Vec<Q>>,
}

impl RationalMatrix {
    pub fn zeros(rows: IndexSet, cols: IndexSet) -> Self {
        let data = vec![vec![Q::zero(); cols.len()]; rows.len()];
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: IndexSet, cols: IndexSet, data: Vec<Vec<Q>>) -> Result<Self> {
        if data.len() != rows.len() || data.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Dimension(format!("expected {}x{} entries", rows.len(), cols.len())));
        }
        Ok(Self { rows, cols, data })
    }

    /// Rows `1..=k` and columns `1..=n` taken from a dense array.
    pub fn from_dense(data: Vec<Vec<Q>>, n: usize) -> Result<Self> {
        let k = data.len();
        Self::from_rows(IndexSet::range(1, k), IndexSet::range(1, n), data)
    }

    pub fn rows(&self) -> &IndexSet {
        &self.rows
    }

    pub fn cols(&self) -> &IndexSet {
        &self.cols
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.cols.len()
    }

    /// Dense rows in position order.
    pub fn data(&self) -> &[Vec<Q>] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match (self.rows.position(r), self.cols.position(c)) {
            (Some(a), Some(b)) => self.data[a][b].clone(),
            _ => Q::zero(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) -> Result<()> {
        let a = self.rows.position(r).ok_or(Error::IndexMissing(r))?;
        let b = self.cols.position(c).ok_or(Error::IndexMissing(c))?;
        self.data[a][b] = v;
        Ok(())
    }

    pub fn row(&self, r: usize) -> Result<&[Q]> {
        let a = self.rows.position(r).ok_or(Error::IndexMissing(r))?;
        Ok(&self.data[a])
    }

    /// Column labels where row `r` is nonzero.
    pub fn row_support(&self, r: usize) -> Result<Vec<usize>> {
        let row = self.row(r)?;
        Ok(self.cols.iter().zip(row).filter(|(_, x)| !x.is_zero()).map(|(c, _)| c).collect())
    }

    pub fn scale_row(&mut self, r: usize, f: &Q) -> Result<()> {
        let a = self.rows.position(r).ok_or(Error::IndexMissing(r))?;
        for x in self.data[a].iter_mut() {
            *x *= f;
        }
        Ok(())
    }

    /// `row dst += f * row src`.
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, f: &Q) -> Result<()> {
        let a = self.rows.position(dst).ok_or(Error::IndexMissing(dst))?;
        let b = self.rows.position(src).ok_or(Error::IndexMissing(src))?;
        let s = self.data[b].clone();
        for (x, y) in self.data[a].iter_mut().zip(&s) {
            *x += y * f;
        }
        Ok(())
    }

    /// Inserts a zero column at `i`.
    pub fn pre(&self, i: usize) -> Result<Self> {
        let cols = self.cols.with(i)?;
        let p = cols.position(i).unwrap();
        let mut data = self.data.clone();
        for row in data.iter_mut() {
            row.insert(p, Q::zero());
        }
        Ok(Self { rows: self.rows.clone(), cols, data })
    }

    /// Inserts row `j` equal to the unit vector at the new column `i`, and
    /// negates every entry `(j', i')` with exactly one of `j' > j`, `i' > i`.
    pub fn inc(&self, i: usize, j: usize) -> Result<Self> {
        let cols = self.cols.with(i)?;
        let rows = self.rows.with(j)?;
        let cp = cols.position(i).unwrap();
        let rp = rows.position(j).unwrap();
        let mut data = Vec::with_capacity(rows.len());
        for (ri, r) in self.rows.iter().enumerate() {
            let mut row = Vec::with_capacity(cols.len());
            for (ci, c) in self.cols.iter().enumerate() {
                let v = self.data[ri][ci].clone();
                row.push(if (r > j) != (c > i) { -v } else { v });
            }
            row.insert(cp, Q::zero());
            data.push(row);
        }
        let mut unit = vec![Q::zero(); cols.len()];
        unit[cp] = Q::one();
        data.insert(rp, unit);
        Ok(Self { rows, cols, data })
    }

    /// `inc_{i;j}` with `j` one past the largest row label.
    pub fn inc_last(&self, i: usize) -> Result<Self> {
        let j = self.rows.max().map_or(1, |m| m + 1);
        self.inc(i, j)
    }

    fn add_column(&self, dst: usize, src: usize, t: &Q) -> Self {
        let a = self.cols.position(dst).unwrap();
        let b = self.cols.position(src).unwrap();
        let mut out = self.clone();
        for row in out.data.iter_mut() {
            let add = &row[b] * t;
            row[a] += add;
        }
        out
    }

    fn overflow_factor(&self, i: usize, t: &Q) -> Q {
        if Some(i) == self.cols.max() && self.k() > 0 {
            t * parity_sign(self.k() - 1)
        } else {
            t.clone()
        }
    }

    /// `x_i(t)`: column `i⊕1` gains `t` times column `i`.
    pub fn x_op(&self, i: usize, t: &Q) -> Result<Self> {
        let nxt = self.cols.succ(i)?;
        let f = self.overflow_factor(i, t);
        Ok(self.add_column(nxt, i, &f))
    }

    /// `y_i(t)`: column `i` gains `t` times column `i⊕1`.
    pub fn y_op(&self, i: usize, t: &Q) -> Result<Self> {
        let nxt = self.cols.succ(i)?;
        let f = self.overflow_factor(i, t);
        Ok(self.add_column(i, nxt, &f))
    }

    /// `ι_{i,l,r}(t_1..t_l, s_1..s_r)` with the new row placed last.
    pub fn iota(&self, i: usize, t: &[Q], s: &[Q]) -> Result<Self> {
        let j = self.rows.max().map_or(1, |m| m + 1);
        self.iota_with_row(i, j, t, s)
    }

    /// `ι_{i,l,r}` using `inc_{i;j}`; a different `j` gives the same
    /// Grassmannian point up to row signs.
    pub fn iota_with_row(&self, i: usize, j: usize, t: &[Q], s: &[Q]) -> Result<Self> {
        if t.len() + s.len() > self.n() {
            return Err(Error::InvalidArgument(format!("l + r = {} exceeds |N| = {}", t.len() + s.len(), self.n())));
        }
        let mut m = self.inc(i, j)?;
        let mut c = i;
        for sv in s {
            m = m.x_op(c, sv)?;
            c = m.cols.succ(c)?;
        }
        let mut c = i;
        for tv in t {
            c = m.cols.pred(c)?;
            m = m.y_op(c, tv)?;
        }
        Ok(m)
    }

    /// Only the listed columns, in order.
    pub fn restrict_cols(&self, cols: &[usize]) -> Result<Self> {
        let idx = IndexSet::new(cols.to_vec())?;
        let pos: Vec<usize> =
            idx.iter().map(|c| self.cols.position(c).ok_or(Error::IndexMissing(c))).collect::<Result<_>>()?;
        let data = self.data.iter().map(|r| pos.iter().map(|&p| r[p].clone()).collect()).collect();
        Ok(Self { rows: self.rows.clone(), cols: idx, data })
    }

    /// The same entries with rows relabelled `1..=k`.
    pub fn relabel_rows(&self) -> Self {
        Self { rows: IndexSet::range(1, self.k()), cols: self.cols.clone(), data: self.data.clone() }
    }

    /// Renames columns through an increasing map.
    pub fn relabel_cols(&self, f: impl Fn(usize) -> usize) -> Result<Self> {
        let labels: Vec<usize> = self.cols.iter().map(f).collect();
        if labels.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("column relabelling must be increasing".into()));
        }
        Ok(Self { rows: self.rows.clone(), cols: IndexSet::new(labels)?, data: self.data.clone() })
    }

    /// Matrix product where `self`'s columns pair with `other`'s rows by
    /// position. Result rows are `self`'s, result columns `other`'s.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n() != other.k() {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.k(), self.n(), other.k(), other.n())));
        }
        let mut data = vec![vec![Q::zero(); other.n()]; self.k()];
        for (a, row) in self.data.iter().enumerate() {
            for (b, x) in row.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (c, y) in other.data[b].iter().enumerate() {
                    if !y.is_zero() {
                        data[a][c] += x * y;
                    }
                }
            }
        }
        Ok(Self { rows: self.rows.clone(), cols: other.cols.clone(), data })
    }

    /// `P_I`: the maximal minor on columns `I`, taken in increasing order.
    pub fn pluecker(&self, cols: &[usize]) -> Result<Q> {
        if cols.len() != self.k() {
            return Err(Error::Dimension(format!("|I| = {} but k = {}", cols.len(), self.k())));
        }
        let mut sorted = cols.to_vec();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(Q::zero());
        }
        let pos: Vec<usize> =
            sorted.iter().map(|&c| self.cols.position(c).ok_or(Error::IndexMissing(c))).collect::<Result<_>>()?;
        let minor: Vec<Vec<Q>> = self.data.iter().map(|r| pos.iter().map(|&p| r[p].clone()).collect()).collect();
        Ok(det(&minor))
    }

    /// Every maximal minor, keyed by column subset in lexicographic order.
    pub fn all_plueckers(&self) -> Vec<(Vec<usize>, Q)> {
        combinations(self.cols.as_slice(), self.k())
            .into_iter()
            .map(|i| {
                let v = self.pluecker(&i).unwrap();
                (i, v)
            })
            .collect()
    }

    /// The column subsets with nonzero Plücker coordinate.
    pub fn nonzero_pattern(&self) -> BTreeSet<Vec<usize>> {
        self.all_plueckers().into_iter().filter(|(_, v)| !v.is_zero()).map(|(i, _)| i).collect()
    }

    /// All maximal minors are `>= 0` (and the matrix has full rank).
    pub fn is_nonnegative(&self) -> bool {
        let ps = self.all_plueckers();
        ps.iter().all(|(_, v)| !v.is_negative()) && ps.iter().any(|(_, v)| v.is_positive())
    }

    /// Reduced row echelon form and the pivot positions.
    pub fn rref(&self) -> (Vec<Vec<Q>>, Vec<usize>) {
        rref_dense(&self.data, self.n())
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Both matrices span the same row space over the same columns.
    pub fn row_space_eq(&self, other: &Self) -> bool {
        if self.cols != other.cols {
            return false;
        }
        let (a, pa) = self.rref();
        let (b, pb) = other.rref();
        pa == pb && a[..pa.len()] == b[..pb.len()]
    }

    /// A basis of `{x : self · x = 0}`, indexed by column position.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, piv) = self.rref();
        let n = self.n();
        let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); n];
                v[f] = Q::one();
                for (row, &p) in piv.iter().enumerate() {
                    v[p] = -r[row][f].clone();
                }
                v
            })
            .collect()
    }

    /// The positroid permutation: `π(i)` is the first `j` cyclically after
    /// `i` with column `i` in the span of columns `i⊕1, ..., j`. A zero column
    /// is a black fixed point; a column outside the span of all the others is
    /// a white fixed point.
    pub fn matrix_permutation(&self) -> DecoratedPermutation {
        let n = self.n();
        let cols: Vec<Vec<Q>> = (0..n).map(|c| self.data.iter().map(|r| r[c].clone()).collect()).collect();
        let mut images = Vec::with_capacity(n);
        let mut white = BTreeSet::new();
        for p in 0..n {
            let label = self.cols.as_slice()[p];
            if cols[p].iter().all(|x| x.is_zero()) {
                images.push(label);
                continue;
            }
            let mut span: Vec<Vec<Q>> = Vec::new();
            let mut found = None;
            for d in 1..n {
                let q = (p + d) % n;
                span.push(cols[q].clone());
                if in_span(&span, &cols[p]) {
                    found = Some(q);
                    break;
                }
            }
            match found {
                Some(q) => images.push(self.cols.as_slice()[q]),
                None => {
                    images.push(label);
                    white.insert(label);
                }
            }
        }
        DecoratedPermutation::from_images(self.cols.as_slice(), &images, white).expect("positroid permutation")
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut entries = Vec::new();
        for (ri, r) in self.rows.iter().enumerate() {
            for (ci, c) in self.cols.iter().enumerate() {
                let v = &self.data[ri][ci];
                if !v.is_zero() {
                    entries.push(serde_json::json!([r, c, format_q(v)]));
                }
            }
        }
        serde_json::json!({
            "rows": self.rows.as_slice(),
            "cols": self.cols.as_slice(),
            "entries": entries,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let raw: MatrixJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut m = Self::zeros(IndexSet::new(raw.rows)?, IndexSet::new(raw.cols)?);
        for (r, c, s) in raw.entries {
            m.set(r, c, parse_q(&s)?)?;
        }
        Ok(m)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: Vec<usize>,
    cols: Vec<usize>,
    entries: Vec<(usize, usize, String)>,
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let parts: Vec<String> = row.iter().map(format_q).collect();
            writeln!(f, "[{}]", parts.join(", "))?;
        }
        Ok(())
    }
}

/// RREF of a dense matrix with `n` columns.
pub fn rref_dense(m: &[Vec<Q>], n: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let src = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&src) {
                    *x -= &f * y;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    (a, piv)
}

/// Rank of a list of vectors.
pub fn rank_of(vectors: &[Vec<Q>]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => rref_dense(vectors, v.len()).1.len(),
    }
}

fn in_span(span: &[Vec<Q>], v: &[Q]) -> bool {
    let r = rank_of(span);
    let mut ext = span.to_vec();
    ext.push(v.to_vec());
    rank_of(&ext) == r
}

/// Checks the constraints of the middle embedding and returns `n`.
fn check_middle(j: usize, l: &RationalMatrix, r: &RationalMatrix, s: [&Q; 4]) -> Result<usize> {
    if s.iter().any(|x| sign(x) <= 0) {
        return Err(Error::InvalidArgument("s1, s2, t1, t2 must be positive".into()));
    }
    let n = l.cols.max().unwrap_or(0).max(r.cols.max().map_or(0, |m| m + 1));
    let (k1, k2) = (l.k(), r.k());
    if n < 5 || j < 2 || k1 + k2 + 5 > n || k1 + 2 > j || k2 + j + 4 > n {
        return Err(Error::InvalidArgument(format!(
            "middle embedding needs k1+k2 <= n-5, k1 <= j-2, k2 <= n-j-4 (j={j}, n={n}, k1={k1}, k2={k2})"
        )));
    }
    let mut lc: Vec<usize> = (1..=j + 1).collect();
    lc.push(n);
    if l.cols.as_slice() != lc.as_slice() {
        return Err(Error::Dimension(format!("L must have columns [{}] ∪ {{{n}}}", j + 1)));
    }
    if r.cols.as_slice() != (j..n).collect::<Vec<_>>().as_slice() {
        return Err(Error::Dimension(format!("R must have columns {j}..{}", n - 1)));
    }
    Ok(n)
}

/// `Υ_j(s1, s2, t1, t2, L, R)`: rows of `L'`, then `v`, then `R'`, on `[n]`.
/// Column `n` of `L'` is `(-1)^(k2+1) L^n`, which keeps the image
/// nonnegative.
///
/// `L` lives on `[j+1] ∪ {n}` and `R` on `{j, ..., n-1}`; when `L` has no
/// rows its columns still fix `n`, so pass a `0×([j+1]∪{n})` matrix.
pub fn middle_embedding(
    j: usize,
    s1: &Q,
    s2: &Q,
    t1: &Q,
    t2: &Q,
    l: &RationalMatrix,
    r: &RationalMatrix,
) -> Result<RationalMatrix> {
    let n = check_middle(j, l, r, [s1, s2, t1, t2])?;
    let (k1, k2) = (l.k(), r.k());
    let sg = parity_sign(k2);
    let cols = IndexSet::range(1, n);
    let mut out = RationalMatrix::zeros(IndexSet::range(1, k1 + k2 + 1), cols);

    // the `n` entries of L' carry the opposite sign to v's, otherwise
    // P_{n-2, n} already fails for k1 = 1, k2 = 0
    let lsg = -sg.clone();
    let lp = l.y_op(j, &(s1 / s2))?;
    for a in 0..k1 {
        for c in lp.cols.iter() {
            let v = lp.get(lp.rows.as_slice()[a], c);
            let v = if c == n { v * &lsg } else { v };
            out.set(a + 1, c, v)?;
        }
    }
    let vrow = k1 + 1;
    out.set(vrow, j, s1.clone())?;
    out.set(vrow, j + 1, s2.clone())?;
    out.set(vrow, n - 2, t1 * &sg)?;
    out.set(vrow, n - 1, t2 * &sg)?;
    out.set(vrow, n, sg)?;
    let rp = r.y_op(n - 2, &(t1 / t2))?.x_op(j, &(s2 / s1))?;
    for a in 0..k2 {
        for c in rp.cols.iter() {
            out.set(vrow + 1 + a, c, rp.get(rp.rows.as_slice()[a], c))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn bareiss_matches_cofactor() {
        let m = vec![qs(&[2, -1, 0]), qs(&[1, 3, 4]), vec![qf(1, 2), q(0), q(5)]];
        // 2*(15-0) + 1*(5-2) + 0 = 33
        assert_eq!(det(&m), q(33));
        let z = vec![qs(&[0, 1]), qs(&[1, 0])];
        assert_eq!(det(&z), q(-1));
    }

    #[test]
    fn cyclic_arithmetic() {
        let s = IndexSet::new(vec![2, 5, 9]).unwrap();
        assert_eq!(s.succ(9).unwrap(), 2);
        assert_eq!(s.pred(2).unwrap(), 9);
        assert_eq!(s.offset(5, 4).unwrap(), 9);
        assert!(s.with(5).is_err());
    }

    #[test]
    fn pre_inserts_zero_column() {
        let cols = IndexSet::new(vec![2, 11, 12, 14]).unwrap();
        let m = RationalMatrix::from_rows(IndexSet::range(1, 1), cols, vec![qs(&[1, 3, 5, 7])]).unwrap();
        let p = m.pre(13).unwrap();
        assert_eq!(p.cols().as_slice(), &[2, 11, 12, 13, 14]);
        assert_eq!(p.data()[0], qs(&[1, 3, 5, 0, 7]));
        assert!(m.pre(11).is_err());
        let e = RationalMatrix::zeros(IndexSet::empty(), IndexSet::range(7, 7));
        assert_eq!(e.pre(5).unwrap().cols().as_slice(), &[5, 7]);
    }

    #[test]
    fn inc_on_empty_gives_unit_row() {
        let e = RationalMatrix::zeros(IndexSet::empty(), IndexSet::range(2, 3));
        let m = e.inc(1, 1).unwrap();
        assert_eq!(m.data(), &[qs(&[1, 0, 0])]);
    }

    #[test]
    fn inc_sign_flips() {
        let m = RationalMatrix::from_dense(vec![qs(&[1, 2, 3])], 3).unwrap();
        // new row 2 below row 1, new column 2: row 1 is above, so columns > 2 flip
        let m2 = m.pre(5).unwrap().inc(4, 2).unwrap();
        assert_eq!(m2.data()[0], qs(&[1, 2, 3, 0, 0]));
        let m3 = RationalMatrix::from_rows(
            IndexSet::range(1, 1),
            IndexSet::new(vec![1, 3, 4]).unwrap(),
            vec![qs(&[1, 2, 3])],
        )
        .unwrap()
        .inc(2, 2)
        .unwrap();
        assert_eq!(m3.data(), &[qs(&[1, 0, -2, -3]), qs(&[0, 1, 0, 0])]);
        let m4 = RationalMatrix::from_rows(
            IndexSet::range(2, 2),
            IndexSet::new(vec![1, 3, 4]).unwrap(),
            vec![qs(&[1, 2, 3])],
        )
        .unwrap()
        .inc(2, 1)
        .unwrap();
        // row 2 is below the new row 1: columns left of 2 flip
        assert_eq!(m4.data()[1], qs(&[-1, 0, 2, 3]));
    }

    #[test]
    fn x_then_inverse_is_identity() {
        let m = RationalMatrix::from_dense(vec![qs(&[1, 2, 3, 4]), qs(&[0, 1, 5, 2])], 4).unwrap();
        for i in 1..=4 {
            let t = qf(7, 3);
            assert_eq!(m.x_op(i, &t).unwrap().x_op(i, &-t.clone()).unwrap(), m);
            assert_eq!(m.y_op(i, &t).unwrap().y_op(i, &-t.clone()).unwrap(), m);
        }
    }

    #[test]
    fn overflow_sign_on_two_rows() {
        let m = RationalMatrix::from_dense(vec![qs(&[1, 0, 0, 1]), qs(&[0, 1, 1, 0])], 4).unwrap();
        // x_4 adds -t * col 4 to col 1 when k = 2
        let x = m.x_op(4, &q(1)).unwrap();
        assert_eq!(x.get(1, 1), q(0));
        // y_4 adds -t * col 1 to col 4
        let y = m.y_op(4, &q(1)).unwrap();
        assert_eq!(y.get(1, 4), q(0));
        assert_eq!(y.get(2, 4), q(0));
    }

    #[test]
    fn lower_embedding_layout() {
        // C on [6] with one row; embed at i = 5 between n-2 and n-1 of {1..4,6,7}
        let c = RationalMatrix::from_rows(
            IndexSet::range(1, 1),
            IndexSet::new(vec![1, 2, 3, 4, 6, 7]).unwrap(),
            vec![qs(&[1, 2, 3, 4, 5, 6])],
        )
        .unwrap();
        let (t, u, v, w) = (q(2), q(3), q(5), q(7));
        let m = c.iota(5, &[u.clone(), t.clone()], &[v.clone(), w.clone()]).unwrap();
        assert_eq!(m.data()[1], vec![q(0), q(0), &t * &u, u.clone(), q(1), v.clone(), &v * &w]);
        // old row: C^{n⊖3} + t C^{n⊖2}, C^{n⊖2}, 0, -C^{n⊖1}, -C^n - w C^{n⊖1}
        assert_eq!(m.data()[0], vec![q(1), q(2), q(3) + &t * q(4), q(4), q(0), q(-5), q(-6) - &w * q(5)]);
    }

    #[test]
    fn upper_embedding_layout() {
        let c = RationalMatrix::from_rows(
            IndexSet::range(2, 3),
            IndexSet::range(2, 6),
            vec![qs(&[1, 2, 3, 4, 5]), qs(&[2, 1, 7, 3, 1])],
        )
        .unwrap();
        let (t, u, v, w) = (q(2), q(3), q(5), q(7));
        let m = c.iota_with_row(1, 1, &[w.clone(), v.clone(), u.clone()], std::slice::from_ref(&t)).unwrap();
        let sg = parity_sign(2);
        assert_eq!(m.data()[0], vec![q(1), t.clone(), q(0), &sg * &u * &v * &w, &sg * &v * &w, &sg * &w]);
        let r = &c.data()[0];
        assert_eq!(
            m.data()[1],
            vec![
                q(0),
                r[0].clone(),
                r[1].clone(),
                &r[2] + &u * &r[3] + &u * &v * &r[4],
                &r[3] + &v * &r[4],
                r[4].clone()
            ]
        );
        assert!(c.iota(1, &vec![q(1); 4], &vec![q(1); 2]).is_err());
    }

    #[test]
    fn middle_embedding_row_and_rejection() {
        let n = 8;
        let j = 2;
        let l = RationalMatrix::zeros(IndexSet::empty(), IndexSet::new(vec![1, 2, 3, n]).unwrap());
        let r =
            RationalMatrix::from_rows(IndexSet::range(1, 1), IndexSet::range(j, n - 1), vec![qs(&[1, 2, 3, 4, 5, 6])])
                .unwrap();
        let m = middle_embedding(j, &q(2), &q(3), &q(5), &q(7), &l, &r).unwrap();
        assert_eq!(m.data()[0], qs(&[0, 2, 3, 0, 0, -5, -7, -1]));
        let l0 = RationalMatrix::zeros(IndexSet::empty(), IndexSet::new(vec![1, 2, 5]).unwrap());
        let r0 = RationalMatrix::zeros(IndexSet::empty(), IndexSet::range(1, 4));
        assert!(middle_embedding(1, &q(1), &q(1), &q(1), &q(1), &l0, &r0).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let m = RationalMatrix::from_dense(vec![vec![qf(1, 2), q(0)], qs(&[3, -4])], 2).unwrap();
        assert_eq!(RationalMatrix::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn positroid_permutation_of_identity_block() {
        // row space spanned by e1 + e2: π(1) = 2, π(2) = 1, column 3 zero
        let m = RationalMatrix::from_dense(vec![qs(&[1, 1, 0])], 3).unwrap();
        let p = m.matrix_permutation();
        assert_eq!(p.images(), &[2, 1, 3]);
        let u = RationalMatrix::from_dense(vec![qs(&[1, 0])], 2).unwrap();
        assert!(u.matrix_permutation().is_white(1));
    }
}
