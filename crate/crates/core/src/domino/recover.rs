//! Reading domino variables and construction parameters back off a point.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::chords::ChordDiagram;
use crate::error::{Error, Result};
use crate::matrix::{IndexSet, RationalMatrix};
use crate::rational::{parity_sign, Q};

use super::{
    construct_matrix, epsilon_sign, var_tilde, ConstructionParams, DominoAssignment, DominoTemplate, VarElement,
};

fn check_shape(d: &ChordDiagram, m: &RationalMatrix) -> Result<()> {
    if m.k() != d.k() {
        return Err(Error::Dimension(format!("{} rows for {} chords", m.k(), d.k())));
    }
    if m.cols().as_slice() != IndexSet::range(1, d.n()).as_slice() {
        return Err(Error::Dimension(format!("columns must be 1..={}", d.n())));
    }
    Ok(())
}

/// Extracts `α..ε` from a matrix in the domino form of `d` and checks the
/// sign rules. Rows are scaled so that every `β` equals one.
pub fn check_sign_rules(m: &RationalMatrix, d: &ChordDiagram) -> Result<DominoAssignment> {
    check_shape(d, m)?;
    let t = DominoTemplate::of(d);
    let k = d.k();
    let mut rows: Vec<Vec<Q>> = m.data().to_vec();
    for (l, row) in t.rows.iter().enumerate() {
        let supp = row.support();
        if let Some(c) = (1..=d.n()).find(|c| !supp.contains(c) && !rows[l][c - 1].is_zero()) {
            return Err(Error::Support { row: l + 1, detail: format!("nonzero entry at column {c}") });
        }
        let b = rows[l][row.beta - 1].clone();
        if !b.is_positive() {
            return Err(rule(1, l, "beta is not positive"));
        }
        for x in rows[l].iter_mut() {
            *x /= &b;
        }
    }
    let at = |rows: &[Vec<Q>], l: usize, c: usize| rows[l][c - 1].clone();
    let mut a = DominoAssignment {
        alpha: Vec::with_capacity(k),
        beta: vec![Q::one(); k],
        gamma: Vec::with_capacity(k),
        delta: Vec::with_capacity(k),
        epsilon: Vec::with_capacity(k),
    };
    for (l, row) in t.rows.iter().enumerate() {
        a.gamma.push(at(&rows, l, row.gamma));
        a.delta.push(at(&rows, l, row.delta));
        match (row.epsilon_top, d.parent(l)) {
            (Some(c), _) => {
                a.epsilon.push(at(&rows, l, c));
                a.alpha.push(at(&rows, l, row.alpha));
            }
            (None, Some(p)) => {
                let (pa, pb) = row.inherited.unwrap();
                if d.is_sticky_child(l) {
                    let e = at(&rows, l, pa) / &a.alpha[p];
                    a.alpha.push(at(&rows, l, row.alpha) - &e * &a.beta[p]);
                    a.epsilon.push(e);
                } else {
                    let e = at(&rows, l, pb) / &a.beta[p];
                    if at(&rows, l, pa) != &e * &a.alpha[p] {
                        return Err(Error::Support {
                            row: l + 1,
                            detail: "inherited domino is not proportional to the parent's start domino".into(),
                        });
                    }
                    a.alpha.push(at(&rows, l, row.alpha));
                    a.epsilon.push(e);
                }
            }
            (None, None) => unreachable!("a chord without parent is a top chord"),
        }
        if !a.alpha[l].is_positive() {
            return Err(rule(1, l, "alpha is not positive"));
        }
    }
    for l in 0..k {
        let s = parity_sign(d.below(l));
        if !(&a.gamma[l] * &s).is_positive() || !(&a.delta[l] * &s).is_positive() {
            return Err(rule(2, l, "end domino has the wrong sign"));
        }
        if !(&a.epsilon[l] * epsilon_sign(d, l)).is_positive() {
            let r = if d.is_top(l) { 3 } else { 4 };
            return Err(rule(r, l, "epsilon has the wrong sign"));
        }
    }
    let ratio = |l: usize| &a.delta[l] / &a.gamma[l];
    for l in 0..k {
        if let Some(m) = d.same_end_parent(l) {
            if ratio(l) >= ratio(m) {
                return Err(rule(5, l, &format!("delta/gamma not below that of chord {}", m + 1)));
            }
        }
    }
    for (m, l) in d.head_to_tail_pairs() {
        if ratio(m) >= &a.beta[l] / &a.alpha[l] {
            return Err(rule(6, l, &format!("beta/alpha not above delta/gamma of chord {}", m + 1)));
        }
    }
    for v in var_tilde(d) {
        if !a.value(d, v).is_positive() {
            let (r, l) = match v {
                VarElement::Eta(_, j) => (5, j),
                VarElement::Theta(_, j) => (6, j),
                _ => unreachable!("first-order variables were checked above"),
            };
            return Err(rule(r, l, &format!("{v} is not positive")));
        }
    }
    Ok(a)
}

fn rule(rule: u8, l: usize, detail: &str) -> Error {
    Error::SignRule { rule, chord: l + 1, detail: detail.to_string() }
}

/// The basis of the row space of `v` in the domino form of `d`, each row
/// scaled so that its `β` entry is one.
pub fn domino_representative(d: &ChordDiagram, v: &RationalMatrix) -> Result<RationalMatrix> {
    check_shape(d, v)?;
    if v.rank() != d.k() {
        return Err(Error::NotInCell("matrix is not of full rank".into()));
    }
    let t = DominoTemplate::of(d);
    let k = d.k();
    let n = d.n();
    let mut out = Vec::with_capacity(k);
    for (l, row) in t.rows.iter().enumerate() {
        let supp = row.support();
        let outside: Vec<usize> = (1..=n).filter(|c| !supp.contains(c)).collect();
        let a: Vec<Vec<Q>> = outside.iter().map(|&c| v.data().iter().map(|r| r[c - 1].clone()).collect()).collect();
        let ker = RationalMatrix::from_rows(IndexSet::range(1, a.len()), IndexSet::range(1, k), a)?.nullspace();
        if ker.len() != 1 {
            return Err(Error::NotInCell(format!(
                "row {}: {} independent vectors supported on the template",
                l + 1,
                ker.len()
            )));
        }
        let x = &ker[0];
        let mut r: Vec<Q> = vec![Q::zero(); n];
        for (coef, vr) in x.iter().zip(v.data()) {
            if coef.is_zero() {
                continue;
            }
            for (out, y) in r.iter_mut().zip(vr) {
                *out += coef * y;
            }
        }
        let b = r[row.beta - 1].clone();
        if b.is_zero() {
            return Err(Error::NotInCell(format!("row {}: beta vanishes", l + 1)));
        }
        for e in r.iter_mut() {
            *e /= &b;
        }
        out.push(r);
    }
    RationalMatrix::from_dense(out, n)
}

/// The unique positive parameters whose construction spans the same space
/// as `v`.
///
/// With `ρ_l = δ_l/γ_l`, the `w` of a chord is the step in `ρ` down its
/// same-end chain. Every `x_i(w)` at a chord's tail adds `w·α` to its `β`,
/// so with `W` the sum of the `w` of all chords ending there, the
/// unnormalised `β` is `b = 1 + u·W`. The rest is undoing that scale.
pub fn recover_params(d: &ChordDiagram, v: &RationalMatrix) -> Result<ConstructionParams> {
    let rep = domino_representative(d, v)?;
    let a = check_sign_rules(&rep, d).map_err(|e| Error::NotInCell(e.to_string()))?;
    let k = d.k();
    let rho: Vec<Q> = (0..k).map(|l| &a.delta[l] / &a.gamma[l]).collect();
    let w: Vec<Q> = (0..k)
        .map(|l| match d.same_end_child(l) {
            Some(c) => &rho[l] - &rho[c],
            None => rho[l].clone(),
        })
        .collect();
    let mut u = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for l in 0..k {
        let i = d.chord(l).i;
        let w_in: Q = (0..k).filter(|&g| d.chord(g).j == i).map(|g| w[g].clone()).sum();
        let denom = Q::one() - &a.alpha[l] * &w_in;
        if !denom.is_positive() {
            return Err(Error::NotInCell(format!("chord {}: tail ratio too small", l + 1)));
        }
        let ul = &a.alpha[l] / denom;
        b.push(Q::one() + &ul * &w_in);
        u.push(ul);
    }
    let vv: Vec<Q> = (0..k).map(|l| a.gamma[l].abs() * &b[l]).collect();
    let s: Vec<Q> = (0..k)
        .map(|l| {
            let pb = d.parent(l).map_or_else(Q::one, |p| b[p].clone());
            a.epsilon[l].abs() * &b[l] / pb
        })
        .collect();
    let p = ConstructionParams::new(s, u, vv, w)?;
    if !p.is_positive() {
        return Err(Error::NotInCell("a recovered parameter is not positive".into()));
    }
    if !construct_matrix(d, &p)?.row_space_eq(v) {
        return Err(Error::NotInCell("recovered parameters do not reproduce the point".into()));
    }
    Ok(p)
}

/// `construct_matrix` at parameters drawn from `seed`.
pub fn sample_cell(d: &ChordDiagram, seed: u64) -> RationalMatrix {
    construct_matrix(d, &ConstructionParams::from_seed(d.k(), seed)).expect("parameters match the diagram")
}

/// Column sets of the Plücker coordinates that do not vanish on the cell.
pub fn cell_pattern(d: &ChordDiagram) -> BTreeSet<Vec<usize>> {
    construct_matrix(d, &ConstructionParams::ones(d.k())).expect("parameters match the diagram").nonzero_pattern()
}

/// `v` lies in the cell of `d`: its Plücker coordinates vanish exactly off
/// the cell's pattern and share one strict sign on it.
pub fn in_cell(d: &ChordDiagram, v: &RationalMatrix) -> bool {
    if check_shape(d, v).is_err() {
        return false;
    }
    in_pattern(&cell_pattern(d), v)
}

pub(crate) fn in_pattern(pattern: &BTreeSet<Vec<usize>>, v: &RationalMatrix) -> bool {
    let mut sign = 0i8;
    for (i, p) in v.all_plueckers() {
        let s = crate::rational::sign(&p);
        if pattern.contains(&i) {
            if s == 0 || (sign != 0 && s != sign) {
                return false;
            }
            sign = s;
        } else if s != 0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domino::{build_domino_matrix, sample_assignment};
    use crate::rational::q;
    use crate::rng::seeded;

    fn ex3() -> ChordDiagram {
        ChordDiagram::from_pairs(14, &[(1, 11), (3, 6), (8, 10)]).unwrap()
    }

    #[test]
    fn construction_passes_sign_rules() {
        let d = ex3();
        let m = sample_cell(&d, 7);
        let a = check_sign_rules(&m, &d).unwrap();
        assert!(a.beta.iter().all(|b| b.is_one()));
    }

    #[test]
    fn flipped_gamma_cites_rule_two() {
        let d = ex3();
        let mut a = sample_assignment(&d, &mut seeded(3));
        a.gamma[1] = -a.gamma[1].clone();
        let m = build_domino_matrix(&d, &a).unwrap();
        match check_sign_rules(&m, &d) {
            Err(Error::SignRule { rule, chord, .. }) => assert_eq!((rule, chord), (2, 2)),
            other => panic!("expected a rule 2 violation, got {other:?}"),
        }
    }

    #[test]
    fn stray_entry_is_a_support_error() {
        let d = ex3();
        let mut m = sample_cell(&d, 1);
        m.set(1, 5, q(1)).unwrap();
        assert!(matches!(check_sign_rules(&m, &d), Err(Error::Support { row: 1, .. })));
    }

    #[test]
    fn single_chord_reads_off_directly() {
        let d = ChordDiagram::from_pairs(6, &[(1, 3)]).unwrap();
        let row = vec![q(2), q(1), q(3), q(15), q(0), q(7)];
        let v = RationalMatrix::from_dense(vec![row], 6).unwrap();
        let p = recover_params(&d, &v).unwrap();
        assert_eq!((p.u[0].clone(), p.v[0].clone(), p.w[0].clone(), p.s[0].clone()), (q(2), q(3), q(5), q(7)));
    }

    #[test]
    fn roundtrip_on_mixed_basis() {
        let d = ChordDiagram::from_pairs(8, &[(1, 6), (2, 4), (4, 6)]).unwrap();
        let p = ConstructionParams::from_seed(3, 11);
        let m = construct_matrix(&d, &p).unwrap();
        let mut mixed = m.clone();
        mixed.add_row_multiple(1, 3, &q(5)).unwrap();
        mixed.add_row_multiple(3, 2, &q(-2)).unwrap();
        assert_eq!(recover_params(&d, &mixed).unwrap(), p);
        assert!(in_cell(&d, &mixed));
    }
}
