//! Preimages of amplituhedron points in a BCFW cell, from twistors.
//!
//! Rows are solved in parent-to-child order. A top chord's row lies in the
//! span of the five `Z` rows of its support; a child's row lies in the span
//! of its four own `Z` rows and `t_1 Z_h + t_2 Z_{h+1}`, where `(t_1, t_2)`
//! is the already solved start domino `(α, β)` of its parent. For a sticky
//! parent `α` is the domino variable, not the matrix entry at its tail.

use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::ampl::{amap, in_s_partial_a, positive_point, PositiveZ};
use crate::chords::{enumerate, ChordDiagram};
use crate::domino::{check_sign_rules, DominoAssignment};
use crate::error::{Error, Result};
use crate::matrix::{det, rank_of, IndexSet, RationalMatrix};
use crate::rational::{format_q, Q};
use crate::rng::{positive_rational, seeded};

/// Coefficients `b` with `Σ b_j W_j` spanning `rowspan(Y) ∩ span(W)`:
/// `b_j = (-1)^(j-1) ⟨Y W_1 .. Ŵ_j .. W_5⟩`.
pub fn intersection_coefficients(y: &RationalMatrix, w: &[Vec<Q>]) -> Result<Vec<Q>> {
    let width = y.n();
    if w.len() != width - y.k() + 1 || w.iter().any(|r| r.len() != width) {
        return Err(Error::Dimension(format!(
            "need {} vectors of length {width} against a {}-row Y",
            width - y.k() + 1,
            y.k()
        )));
    }
    let b: Vec<Q> = (0..w.len())
        .map(|j| {
            let mut m = y.data().to_vec();
            m.extend(w.iter().enumerate().filter(|&(p, _)| p != j).map(|(_, r)| r.clone()));
            let d = det(&m);
            if j % 2 == 0 {
                d
            } else {
                -d
            }
        })
        .collect();
    if b.iter().all(Q::is_zero) {
        return Err(Error::Degenerate("all determinants vanish".into()));
    }
    Ok(b)
}

/// The spanning vector `Σ b_j W_j` itself.
pub fn intersection_vector(y: &RationalMatrix, w: &[Vec<Q>]) -> Result<Vec<Q>> {
    let b = intersection_coefficients(y, w)?;
    let mut out = vec![Q::zero(); y.n()];
    for (bj, wj) in b.iter().zip(w) {
        for (o, x) in out.iter_mut().zip(wj) {
            *o += bj * x;
        }
    }
    Ok(out)
}

/// One solved row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowStep {
    /// 0-based chord index.
    pub chord: usize,
    /// Columns of the five basis vectors; the parent's tail `(h, h+1)`
    /// stands in for the combined vector of a child.
    pub basis: Vec<Vec<usize>>,
    pub coefficients: Vec<Q>,
    /// The row of `C`, scaled so that its `β` entry is one.
    pub row: Vec<Q>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReconstructionTrace {
    pub steps: Vec<RowStep>,
}

impl ReconstructionTrace {
    pub fn to_json(&self) -> Value {
        let q = |xs: &[Q]| xs.iter().map(format_q).collect::<Vec<_>>();
        json!(self
            .steps
            .iter()
            .map(|s| json!({
                "chord": s.chord + 1,
                "basis": s.basis,
                "coefficients": q(&s.coefficients),
                "row": q(&s.row),
            }))
            .collect::<Vec<_>>())
    }
}

/// The matrix in the domino form of `d` whose image under `Z` is `Y`,
/// with every row normalised to `β = 1`. Sign rules are not checked.
pub fn invert_point(d: &ChordDiagram, y: &RationalMatrix, z: &PositiveZ) -> Result<RationalMatrix> {
    invert_point_traced(d, y, z).map(|(c, _)| c)
}

pub fn invert_point_traced(
    d: &ChordDiagram,
    y: &RationalMatrix,
    z: &PositiveZ,
) -> Result<(RationalMatrix, ReconstructionTrace)> {
    let (n, k) = (d.n(), d.k());
    if y.k() != k || z.k() != k || z.n() != n || y.n() != k + 4 {
        return Err(Error::Dimension(format!(
            "Y is {}x{}, Z is for (n, k) = ({}, {}), diagram ({n}, {k})",
            y.k(),
            y.n(),
            z.n(),
            z.k()
        )));
    }
    let mut rows: Vec<Vec<Q>> = Vec::with_capacity(k);
    // α of each solved row; β is one after normalisation
    let mut alpha: Vec<Q> = Vec::with_capacity(k);
    let mut steps = Vec::with_capacity(k);
    // chords are ordered by tail, so every parent precedes its children
    for l in 0..k {
        let c = d.chord(l);
        let own = [c.i, c.i + 1, c.j, c.j + 1];
        let (first, first_cols): (Vec<Vec<Q>>, Vec<(usize, Q)>) = match d.parent(l) {
            None => (vec![z.row(n).to_vec()], vec![(n, Q::one())]),
            Some(p) => {
                let h = d.chord(p).i;
                let (t1, t2) = (alpha[p].clone(), Q::one());
                let v = z.row(h).iter().zip(z.row(h + 1)).map(|(a, b)| &t1 * a + &t2 * b).collect();
                (vec![v], vec![(h, t1), (h + 1, t2)])
            }
        };
        let mut basis: Vec<Vec<Q>> = first;
        basis.extend(own.iter().map(|&m| z.row(m).to_vec()));
        let b = intersection_coefficients(y, &basis).map_err(|e| match e {
            Error::Degenerate(_) => Error::NotInCell(format!("chord {}: every twistor of its row vanishes", l + 1)),
            e => e,
        })?;
        let mut row = vec![Q::zero(); n];
        for (m, t) in &first_cols {
            row[m - 1] += &b[0] * t;
        }
        for (m, bj) in own.iter().zip(&b[1..]) {
            row[m - 1] += bj;
        }
        let beta = row[c.i].clone();
        if beta.is_zero() {
            return Err(Error::NotInCell(format!("chord {}: beta vanishes", l + 1)));
        }
        for x in row.iter_mut() {
            *x /= &beta;
        }
        // a sticky child's α shares its column with the inherited β
        alpha.push(match d.parent(l) {
            Some(p) if d.is_sticky_child(l) => &row[c.i - 1] - &row[d.chord(p).i - 1] / &alpha[p],
            _ => row[c.i - 1].clone(),
        });
        let mut cols = vec![first_cols.iter().map(|(m, _)| *m).collect::<Vec<_>>()];
        cols.extend(own.iter().map(|&m| vec![m]));
        steps.push(RowStep { chord: l, basis: cols, coefficients: b, row: row.clone() });
        rows.push(row);
    }
    let c = RationalMatrix::from_rows(IndexSet::range(1, k), IndexSet::range(1, n), rows)?;
    if k > 0 && rank_of(c.data()) < k {
        return Err(Error::NotInCell("reconstructed rows are dependent".into()));
    }
    Ok((c, ReconstructionTrace { steps }))
}

/// `invert_point` followed by the strict sign rules.
pub fn accepts(d: &ChordDiagram, y: &RationalMatrix, z: &PositiveZ) -> Result<(RationalMatrix, DominoAssignment)> {
    let c = invert_point(d, y, z)?;
    let a = check_sign_rules(&c, d)?;
    if !amap(&c, z)?.row_space_eq(y) {
        return Err(Error::NotInCell("reconstruction does not map back to Y".into()));
    }
    Ok((c, a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identification {
    pub diagram: ChordDiagram,
    pub preimage: RationalMatrix,
}

/// The unique cell of `(n, k)` whose inverse accepts `Y`, or `None` when no
/// cell does. Two acceptors are an error.
pub fn identify_cell(y: &RationalMatrix, z: &PositiveZ, n: usize, k: usize) -> Result<Option<Identification>> {
    if y.k() != k || y.n() != k + 4 {
        return Err(Error::Dimension(format!("Y must be {k}x{}", k + 4)));
    }
    let found: Vec<Identification> = enumerate(n, k)
        .into_par_iter()
        .filter_map(|d| accepts(&d, y, z).ok().map(|(c, _)| Identification { diagram: d, preimage: c }))
        .collect();
    match found.len() {
        0 => Ok(None),
        1 => Ok(found.into_iter().next()),
        _ => {
            Err(Error::InvalidArgument(format!("both {} and {} accept the point", found[0].diagram, found[1].diagram)))
        }
    }
}

/// A seeded point of `Gr^>_{k,n}`: a generalised Vandermonde matrix with
/// positively rescaled columns, moved by a few positive `x_i`, `y_i` with
/// `i < n`.
pub fn random_positive_point(n: usize, k: usize, seed: u64) -> RationalMatrix {
    let mut rng = seeded(seed);
    let v = positive_point(k, &IndexSet::range(1, n), &mut rng);
    // without the rescaling a k = 1 start is all ones, which can sit exactly
    // on a wall between two cells for integer-node Z
    let t: Vec<Q> = (0..n).map(|_| positive_rational(&mut rng)).collect();
    let data = v.data().iter().map(|r| r.iter().zip(&t).map(|(a, b)| a * b).collect()).collect();
    let mut c = RationalMatrix::from_rows(v.rows().clone(), v.cols().clone(), data).expect("shape");
    for _ in 0..n {
        let i = rng.gen_range(1..n);
        let t = positive_rational(&mut rng);
        c = if rng.gen_bool(0.5) { c.x_op(i, &t) } else { c.y_op(i, &t) }.expect("column in range");
    }
    c
}

/// Outcome of mapping `points` positive points through `Z` and asking
/// `identify_cell` for each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub n: usize,
    pub k: usize,
    pub points: usize,
    pub identified: usize,
    /// Seeds of points no cell accepted, with whether they lie in `S_∂A`.
    pub rejected: Vec<(u64, bool)>,
    /// Seeds with two acceptors, and the error text.
    pub doubles: Vec<(u64, String)>,
}

impl SurjectivityReport {
    /// Every rejection lies in `S_∂A` and no point has two preimages.
    pub fn passed(&self) -> bool {
        self.doubles.is_empty() && self.rejected.iter().all(|&(_, sa)| sa)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "points": self.points, "identified": self.identified,
            "rejected": self.rejected, "doubles": self.doubles, "passed": self.passed(),
        })
    }
}

pub fn surjectivity(n: usize, k: usize, z: &PositiveZ, points: usize, seed: u64) -> Result<SurjectivityReport> {
    let outcomes: Vec<(u64, Result<Option<Identification>>, RationalMatrix)> = (0..points as u64)
        .into_par_iter()
        .map(|p| {
            let s = seed.wrapping_add(p);
            let c = random_positive_point(n, k, s);
            let id = amap(&c, z).and_then(|y| identify_cell(&y, z, n, k));
            (s, id, c)
        })
        .collect();
    let mut r = SurjectivityReport { n, k, points, identified: 0, rejected: Vec::new(), doubles: Vec::new() };
    for (s, id, c) in outcomes {
        match id {
            Ok(Some(_)) => r.identified += 1,
            Ok(None) => r.rejected.push((s, in_s_partial_a(&c).is_some())),
            Err(Error::InvalidArgument(e)) => r.doubles.push((s, e)),
            Err(e) => return Err(e),
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domino::sample_cell;
    use crate::rational::q;

    #[test]
    fn one_row_recovers_its_combination() {
        let z = PositiveZ::standard(6, 1);
        let coef = [q(2), q(-1), q(3), q(5), q(1)];
        let y: Vec<Q> = (0..5).map(|a| (1..=5).map(|r| &coef[r - 1] * &z.row(r)[a]).sum()).collect();
        let y = RationalMatrix::from_rows(IndexSet::range(1, 1), IndexSet::range(1, 5), vec![y]).unwrap();
        let w: Vec<Vec<Q>> = (1..=5).map(|r| z.row(r).to_vec()).collect();
        let v = intersection_vector(&y, &w).unwrap();
        let b = intersection_coefficients(&y, &w).unwrap();
        let ratio = &b[0] / &coef[0];
        assert!(b.iter().zip(&coef).all(|(x, c)| x == &(c * &ratio)));
        assert!(v.iter().zip(y.row(1).unwrap()).all(|(a, b)| a == &(b * &ratio)));
    }

    #[test]
    fn degenerate_basis_is_reported() {
        let z = PositiveZ::standard(6, 1);
        let y =
            RationalMatrix::from_rows(IndexSet::range(1, 1), IndexSet::range(1, 5), vec![z.row(6).to_vec()]).unwrap();
        let w: Vec<Vec<Q>> = vec![z.row(1).to_vec(); 5];
        assert!(matches!(intersection_coefficients(&y, &w), Err(Error::Degenerate(_))));
    }

    #[test]
    fn roundtrip_and_wrong_cells() {
        let d = ChordDiagram::from_pairs(8, &[(1, 6), (2, 4)]).unwrap();
        let z = PositiveZ::standard(8, 2);
        let c = sample_cell(&d, 3);
        let y = amap(&c, &z).unwrap();
        let back = invert_point(&d, &y, &z).unwrap();
        assert!(back.row_space_eq(&c));
        let id = identify_cell(&y, &z, 8, 2).unwrap().unwrap();
        assert_eq!(id.diagram, d);
    }

    #[test]
    fn empty_diagram_for_k_zero() {
        let z = PositiveZ::standard(6, 0);
        let y = RationalMatrix::zeros(IndexSet::empty(), IndexSet::range(1, 4));
        let id = identify_cell(&y, &z, 6, 0).unwrap().unwrap();
        assert_eq!(id.diagram, ChordDiagram::empty(6));
    }
}
