//! Codimension-one boundaries of BCFW cells: the permutation of each
//! `∂_⋆ S_a`, and whether it lies in `S_∂A` or is shared with another cell.

mod shift;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

pub use shift::{inverse_direction, is_short, shift, Dir, End, ShiftKind, ShiftResult};

use crate::ampl::in_s_partial_a;
use crate::chords::{enumerate, tagged_factors, to_permutation, ChordDiagram, FactorRole};
use crate::domino::{build_domino_matrix, sample_assignment, var_set, var_tilde, DominoAssignment, VarElement};
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::permutation::DecoratedPermutation;
use crate::rational::Q;
use crate::rng::seeded;

/// `π_{a,⋆}`: the factorization of `π_a` with the edit belonging to `⋆`.
/// Sticky chains and children of `c_j` get the adjustments their
/// generation implies, checked against numeric boundary points.
pub fn boundary_permutation(d: &ChordDiagram, star: VarElement) -> Result<DecoratedPermutation> {
    if !var_set(d).contains(&star) {
        return Err(Error::InvalidArgument(format!("{star} is not in Var of {d}")));
    }
    let mut f = tagged_factors(d);
    let find = |f: &[(FactorRole, Vec<usize>)], r: FactorRole| f.iter().position(|(x, _)| *x == r).unwrap();
    match star {
        VarElement::EpsilonHat(j) => {
            f.remove(find(&f, FactorRole::Head(j)));
        }
        VarElement::Alpha(j) => {
            f.remove(find(&f, FactorRole::Tail(j)));
            // the sticky chain above c_j now stops at a_j
            for m in d.sticky_first(j)..j {
                let p = find(&f, FactorRole::Tail(m));
                f[p].1[1] = d.chord(j).i;
            }
        }
        VarElement::GammaHat(j) => {
            let c = d.chord(j);
            let p = find(&f, FactorRole::Cycle(j));
            f[p].1 = vec![c.i + 1, c.j + 1];
        }
        VarElement::DeltaHat(j) | VarElement::Eta(j, _) => {
            let c = d.chord(j);
            let p = find(&f, FactorRole::Cycle(j));
            f[p].1 = vec![c.i + 1, c.j];
        }
        VarElement::Beta(j) | VarElement::Theta(_, j) => {
            if matches!(star, VarElement::Beta(_)) && d.is_sticky_child(j) {
                return Err(Error::InvalidArgument(format!("{star}: no generation algorithm for a sticky child")));
            }
            let c = d.chord(j);
            let p = find(&f, FactorRole::Cycle(j));
            f[p].1 = vec![c.i, c.j, c.j + 1];
            let p = find(&f, FactorRole::Head(j));
            f[p].1[0] = c.i;
            f.remove(find(&f, FactorRole::Tail(j)));
            // children hang from a_j instead of a_j + 1
            for ch in d.children(j) {
                let p = find(&f, FactorRole::Head(ch));
                f[p].1[1] = c.i;
            }
        }
    }
    let cycles: Vec<Vec<usize>> = f.into_iter().map(|(_, c)| c).collect();
    Ok(DecoratedPermutation::from_cycles(d.n(), &cycles))
}

/// The `⋆` for which `π_{a,⋆}` is known to be the permutation of the
/// boundary stratum: excludes `ε̂`, `β` of a sticky child and `α` of a
/// chord with a sticky child.
pub fn has_codim_one_generation(d: &ChordDiagram, star: VarElement) -> bool {
    match star {
        VarElement::EpsilonHat(_) => false,
        VarElement::Beta(j) => !d.is_sticky_child(j),
        VarElement::Alpha(j) => d.starting_at(d.chord(j).i + 1).is_none(),
        _ => true,
    }
}

/// How a boundary `∂_⋆ S_a` is accounted for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// Contained in `S_∂A`, by the numbered situation (1 to 6).
    Sa(u8),
    /// Equal to `∂_{star} S_{target}`.
    Paired { target: ChordDiagram, star: VarElement, shift: ShiftKind },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Boundary {
    pub star: VarElement,
    pub classification: Classification,
}

impl Boundary {
    pub fn to_json(&self) -> Value {
        match &self.classification {
            Classification::Sa(item) => json!({"star": self.star.to_string(), "class": "sa", "item": item}),
            Classification::Paired { target, star, shift } => json!({
                "star": self.star.to_string(),
                "class": "paired",
                "target": target.to_text(),
                "target_star": star.to_string(),
                "shift": shift.to_string(),
            }),
        }
    }
}

fn starts_at_one_or_sticky(d: &ChordDiagram, l: usize) -> bool {
    d.chord(l).i == 1 || d.is_sticky_child(l)
}

/// The `S_∂A` situation that `⋆` falls under, if any.
pub fn sa_item(d: &ChordDiagram, star: VarElement) -> Option<u8> {
    let n = d.n();
    match star {
        VarElement::EpsilonHat(_) => Some(1),
        VarElement::Alpha(i) => {
            let c = d.chord(i);
            ((is_short(d, i) && c.j == n - 2) || d.starting_at(c.i + 1).is_some()).then_some(2)
        }
        VarElement::Beta(i) => starts_at_one_or_sticky(d, i).then_some(3),
        VarElement::GammaHat(i) => (d.chord(i).j == n - 2).then_some(4),
        VarElement::DeltaHat(i) => (is_short(d, i) && starts_at_one_or_sticky(d, i)).then_some(5),
        VarElement::Eta(i, j) => (d.chord(j).i == d.chord(i).i + 1 && starts_at_one_or_sticky(d, i)).then_some(6),
        VarElement::Theta(..) => None,
    }
}

/// The partner `(D′, ⋆′)` of `⋆` by the shift its pairing prescribes,
/// or `None` when that shift is undefined or lands outside the pairing.
pub fn partner(d: &ChordDiagram, star: VarElement) -> Option<(ShiftResult, VarElement)> {
    use ShiftKind::*;
    use VarElement::*;
    let moved = |r: &ShiftResult, j: usize| r.target.starting_at(d.chord(j).i).expect("unmoved tail");
    match star {
        EpsilonHat(_) => None,
        Alpha(i) => {
            let r = shift(d, i, End::Tail, Dir::Right).ok()?;
            let s = match r.kind {
                TailRight => Beta(r.index),
                TailRightShort | TailRightRolling => DeltaHat(r.index),
                TailRightSibling | TailRightRollingSibling => {
                    let sib = d.starting_at(d.chord(i).j)?;
                    Eta(r.index, moved(&r, sib))
                }
                _ => return None,
            };
            Some((r, s))
        }
        Beta(i) => {
            let r = shift(d, i, End::Tail, Dir::Left).ok()?;
            let s = Alpha(r.index);
            Some((r, s))
        }
        GammaHat(i) => {
            let r = shift(d, i, End::Head, Dir::Right).ok()?;
            (r.kind == HeadRight).then(|| {
                let s = DeltaHat(r.index);
                (r, s)
            })
        }
        DeltaHat(i) => {
            let r = shift(d, i, End::Head, Dir::Left).ok()?;
            let s = match r.kind {
                HeadLeft => GammaHat(r.index),
                HeadLeftShort | HeadLeftShortRolling => Alpha(r.index),
                _ => return None,
            };
            Some((r, s))
        }
        Eta(i, j) => {
            let r = shift(d, i, End::Head, Dir::Left).ok()?;
            let s = match r.kind {
                HeadLeftSticky | HeadLeftStickyRolling => Alpha(r.index),
                HeadLeftToChild => Theta(r.index, moved(&r, j)),
                _ => return None,
            };
            Some((r, s))
        }
        Theta(i, j) => {
            let r = shift(d, i, End::Head, Dir::Right).ok()?;
            (r.kind == HeadRightSibling).then(|| {
                let s = Eta(r.index, moved(&r, j));
                (r, s)
            })
        }
    }
}

/// Classifies one `⋆ ∈ Var`. Exactly one of the `S_∂A` and pairing cases must apply;
/// anything else is reported as a coverage failure.
pub fn classify(d: &ChordDiagram, star: VarElement) -> Result<Classification> {
    match (sa_item(d, star), partner(d, star)) {
        (Some(item), None) => Ok(Classification::Sa(item)),
        (None, Some((r, s))) => Ok(Classification::Paired { target: r.target, star: s, shift: r.kind }),
        (None, None) => Err(Error::InvalidArgument(format!("{star} of {d} is neither SA nor paired"))),
        (Some(item), Some((r, s))) => Err(Error::InvalidArgument(format!(
            "{star} of {d} is SA ({item}) and also paired with {s} of {}",
            r.target
        ))),
    }
}

pub fn pair_boundaries(d: &ChordDiagram) -> Result<Vec<Boundary>> {
    var_set(d).into_iter().map(|star| Ok(Boundary { star, classification: classify(d, star)? })).collect()
}

/// Sets `⋆` to zero in `a`; a 2×2 minor is zeroed through its last entry.
fn vanish(a: &mut DominoAssignment, star: VarElement) {
    match star {
        VarElement::Alpha(l) => a.alpha[l] = Q::zero(),
        VarElement::Beta(l) => a.beta[l] = Q::zero(),
        VarElement::GammaHat(l) => a.gamma[l] = Q::zero(),
        VarElement::DeltaHat(l) => a.delta[l] = Q::zero(),
        VarElement::EpsilonHat(l) => a.epsilon[l] = Q::zero(),
        VarElement::Eta(i, j) => a.delta[j] = &a.delta[i] * &a.gamma[j] / &a.gamma[i],
        VarElement::Theta(i, j) => a.beta[j] = &a.alpha[j] * &a.delta[i] / &a.gamma[i],
    }
}

const ATTEMPTS: u64 = 256;

/// A domino assignment with `⋆ = 0` and every other element of `Ṽar`
/// positive, and its matrix.
pub fn boundary_point(d: &ChordDiagram, star: VarElement, seed: u64) -> Result<(RationalMatrix, DominoAssignment)> {
    if !var_tilde(d).contains(&star) {
        return Err(Error::InvalidArgument(format!("{star} is not a variable of {d}")));
    }
    let others: Vec<VarElement> = var_tilde(d).into_iter().filter(|&v| v != star).collect();
    for t in 0..ATTEMPTS {
        let mut rng = seeded(seed.wrapping_mul(ATTEMPTS).wrapping_add(t));
        let mut a = sample_assignment(d, &mut rng);
        vanish(&mut a, star);
        if others.iter().all(|&v| a.value(d, v).is_positive()) {
            debug_assert!(a.value(d, star).is_zero());
            return Ok((build_domino_matrix(d, &a)?, a));
        }
    }
    Err(Error::Degenerate(format!("no point of the {star} boundary of {d} in {ATTEMPTS} attempts")))
}

/// A point of `∂_⋆ S_a` in `S_∂A`, for an SA-classified `⋆`.
pub fn sa_witness(d: &ChordDiagram, star: VarElement) -> Result<RationalMatrix> {
    if sa_item(d, star).is_none() {
        return Err(Error::InvalidArgument(format!("{star} of {d} is not an SA boundary")));
    }
    let (m, _) = boundary_point(d, star, 0)?;
    match in_s_partial_a(&m) {
        Some(_) => Ok(m),
        None => Err(Error::NotInCell(format!("the {star} boundary point of {d} misses S_dA"))),
    }
}

/// One row of the exhaustive boundary check.
#[derive(Debug, Clone)]
pub struct BoundaryCheck {
    pub diagram: ChordDiagram,
    pub star: VarElement,
    pub classification: std::result::Result<Classification, String>,
    /// `π_{a,⋆}` equals the partner's, for paired stars.
    pub pair_equal: Option<bool>,
    /// The partner classifies back to `(D, ⋆)`.
    pub symmetric: Option<bool>,
    /// The shift composed with its inverse direction returns `D`.
    pub involutive: Option<bool>,
    /// `π_{a,⋆}` is the permutation of a numeric boundary point.
    pub numeric_equal: Option<bool>,
    /// `π_{a,⋆}` has `k` anti-excedances and differs from `π_a`.
    pub codim_one: Option<bool>,
    /// The numeric boundary point lies in `S_∂A`, for SA stars.
    pub in_sda: Option<bool>,
}

impl BoundaryCheck {
    pub fn passed(&self) -> bool {
        self.classification.is_ok()
            && [self.pair_equal, self.symmetric, self.involutive, self.numeric_equal, self.codim_one, self.in_sda]
                .iter()
                .all(|x| x.unwrap_or(true))
    }

    pub fn to_json(&self) -> Value {
        let class = match &self.classification {
            Ok(c) => Boundary { star: self.star, classification: c.clone() }.to_json(),
            Err(e) => json!({"star": self.star.to_string(), "error": e}),
        };
        json!({
            "diagram": self.diagram.to_text(),
            "classification": class,
            "pair_equal": self.pair_equal,
            "symmetric": self.symmetric,
            "involutive": self.involutive,
            "numeric_equal": self.numeric_equal,
            "codim_one": self.codim_one,
            "in_sda": self.in_sda,
            "passed": self.passed(),
        })
    }
}

/// Checks every `⋆ ∈ Var(D)`. With `numeric`, also builds a boundary point
/// for each `⋆` and compares its positroid permutation with `π_{a,⋆}`.
pub fn check_diagram(d: &ChordDiagram, numeric: bool, seed: u64) -> Vec<BoundaryCheck> {
    let pi = to_permutation(d);
    var_set(d)
        .into_iter()
        .map(|star| {
            let formula = boundary_permutation(d, star).ok();
            let generated = has_codim_one_generation(d, star);
            let mut row = BoundaryCheck {
                diagram: d.clone(),
                star,
                classification: classify(d, star).map_err(|e| e.to_string()),
                pair_equal: None,
                symmetric: None,
                involutive: None,
                numeric_equal: None,
                codim_one: None,
                in_sda: None,
            };
            if generated {
                row.codim_one = Some(formula.as_ref().is_some_and(|p| p.anti_excedances().len() == d.k() && *p != pi));
            }
            if let Ok(Classification::Paired { target, star: s, shift: kind }) = &row.classification {
                let other = boundary_permutation(target, *s).ok();
                row.pair_equal = Some(formula.is_some() && formula == other);
                row.symmetric = Some(match classify(target, *s) {
                    Ok(Classification::Paired { target: t2, star: s2, .. }) => t2 == *d && s2 == star,
                    _ => false,
                });
                let idx = match *s {
                    VarElement::Eta(i, _) | VarElement::Theta(i, _) => i,
                    VarElement::Alpha(i) | VarElement::Beta(i) | VarElement::GammaHat(i) | VarElement::DeltaHat(i) => i,
                    VarElement::EpsilonHat(i) => i,
                };
                let (end, dir) = inverse_direction(*kind);
                row.involutive = Some(shift(target, idx, end, dir).is_ok_and(|r| r.target == *d));
            }
            if numeric {
                match boundary_point(d, star, seed) {
                    Ok((m, _)) => {
                        if generated {
                            row.numeric_equal =
                                Some(formula.as_ref() == Some(&m.matrix_permutation()) && m.rank() == d.k());
                        }
                        if sa_item(d, star).is_some() {
                            row.in_sda = Some(in_s_partial_a(&m).is_some());
                        }
                    }
                    Err(_) => {
                        row.numeric_equal = Some(false);
                    }
                }
            }
            row
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct BoundaryReport {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<BoundaryCheck>,
}

impl BoundaryReport {
    pub fn failures(&self) -> Vec<&BoundaryCheck> {
        self.rows.iter().filter(|r| !r.passed()).collect()
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(BoundaryCheck::passed)
    }

    pub fn paired(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.classification, Ok(Classification::Paired { .. }))).count()
    }

    pub fn sa(&self) -> usize {
        self.rows.iter().filter(|r| matches!(r.classification, Ok(Classification::Sa(_)))).count()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "stars": self.rows.len(),
            "sa": self.sa(),
            "paired": self.paired(),
            "failures": self.failures().iter().map(|r| r.to_json()).collect::<Vec<_>>(),
            "passed": self.passed(),
        })
    }
}

/// The exhaustive check over all of `CD_{n,k}`.
pub fn check_all(n: usize, k: usize, numeric: bool, seed: u64) -> BoundaryReport {
    let cells = enumerate(n, k);
    let rows = cells.par_iter().flat_map_iter(|d| check_diagram(d, numeric, seed)).collect();
    BoundaryReport { n, k, rows }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, p: &[(usize, usize)]) -> ChordDiagram {
        ChordDiagram::from_pairs(n, p).unwrap()
    }

    #[test]
    fn single_chord_edits() {
        let a = d(7, &[(2, 4)]);
        let pi = to_permutation(&a);
        let alpha = boundary_permutation(&a, VarElement::Alpha(0)).unwrap();
        assert_ne!(alpha, pi);
        assert_eq!(alpha.anti_excedances().len(), 1);
        assert!(boundary_permutation(&a, VarElement::Eta(0, 0)).is_err());
    }

    #[test]
    fn epsilon_is_sa() {
        let a = d(8, &[(1, 6), (2, 4)]);
        assert_eq!(classify(&a, VarElement::EpsilonHat(1)).unwrap(), Classification::Sa(1));
        let m = sa_witness(&a, VarElement::EpsilonHat(0)).unwrap();
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn gamma_pairs_with_delta_of_the_head_shift() {
        let a = d(8, &[(2, 4)]);
        match classify(&a, VarElement::GammaHat(0)).unwrap() {
            Classification::Paired { target, star, .. } => {
                assert_eq!(target, d(8, &[(2, 5)]));
                assert_eq!(star, VarElement::DeltaHat(0));
            }
            c => panic!("{c:?}"),
        }
    }
}
