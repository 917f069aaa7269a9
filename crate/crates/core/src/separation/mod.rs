//! Separating functionaries between pairs of BCFW cells.
//!
//! The recursion works on diagrams over `[n]` and dispatches on the first
//! case that applies:
//!
//! * **A** one diagram is empty;
//! * **B** a marker `h < n` is unused by both;
//! * **C** exactly one has a top chord ending at `(n-2, n-1)`;
//! * **D** the last top chords have different tails;
//! * **E** same last top chord, different descendants;
//! * **F** same last top chord and descendants, different left parts.

mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Value};

use crate::ampl::{favorite, Functionary};
use crate::chords::{Chord, ChordDiagram};
use crate::error::{Error, Result};
use crate::rational::{one, Q};

pub use verify::{verify_all, verify_pair, CellSamples, Mismatch, VerifyReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A pure functionary with predicted opposite signs on two cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub functionary: Functionary,
    pub sign_a: i8,
    pub sign_b: i8,
    /// Cases taken from the outermost call inwards.
    pub cases: Vec<Case>,
}

impl Separator {
    pub fn to_json(&self) -> Value {
        json!({
            "functionary": self.functionary.to_text(),
            "terms": self.functionary.to_json(),
            "sign_a": self.sign_a,
            "sign_b": self.sign_b,
            "cases": self.cases.iter().map(|c| c.to_string()).collect::<String>(),
            "degree": self.functionary.degree(),
            "type": self.functionary.type_string(),
        })
    }
}

/// The separating functionary of two distinct diagrams on the same `n`.
pub fn separator(a: &ChordDiagram, b: &ChordDiagram) -> Result<Separator> {
    if a.n() != b.n() {
        return Err(Error::InvalidArgument(format!("diagrams on {} and {} markers", a.n(), b.n())));
    }
    if a == b {
        return Err(Error::InvalidArgument(format!("both diagrams are {a}")));
    }
    let mut cases = Vec::new();
    let (functionary, sign_a) = separate(a, b, &mut cases)?;
    Ok(Separator { functionary, sign_a, sign_b: -sign_a, cases })
}

fn separate(a: &ChordDiagram, b: &ChordDiagram, cases: &mut Vec<Case>) -> Result<(Functionary, i8)> {
    let n = a.n();

    // (A)
    if a.k() == 0 || b.k() == 0 {
        cases.push(Case::A);
        let (full, sign_on_full) = if a.k() == 0 { (b, 1) } else { (a, -1) };
        let c = full.chord(last_top(full));
        return Ok((Functionary::twistor([c.i, c.i + 1, c.j, n]), sign_on_full));
    }

    // (B)
    if let Some(h) = (1..n).find(|&h| !uses(a, h) && !uses(b, h)) {
        cases.push(Case::B);
        let (f, s) = separate(&a.strip_marker(h)?, &b.strip_marker(h)?, cases)?;
        return Ok((f.relabel(|x| if x >= h { x + 1 } else { x }), s));
    }

    // every marker below n is used, so column n-1 is nonzero on at least
    // one side and the last top chord there ends at (n-2, n-1)
    let (la, lb) = (last_top(a), last_top(b));
    let (ca, cb) = (a.chord(la), b.chord(lb));
    let ends = |c: Chord| c.j == n - 2;

    // (C)
    if ends(ca) != ends(cb) {
        cases.push(Case::C);
        let c = if ends(ca) { ca } else { cb };
        let f = Functionary::twistor([c.i, c.i + 1, n - 2, n]);
        return Ok((f, if ends(ca) { -1 } else { 1 }));
    }
    debug_assert!(ends(ca) && ends(cb));

    // (D)
    if ca.i != cb.i {
        cases.push(Case::D);
        return Ok((favorite(ca.i, ca.i + 1, cb.i, cb.i + 1, n - 2, n - 1, n), -1));
    }

    let i = ca.i;
    let (da, db) = (descendants(a, la, i)?, descendants(b, lb, i)?);
    if da != db {
        // (E)
        cases.push(Case::E);
        let (f, s) = separate(&da, &db, cases)?;
        let f = f.relabel(|x| x + i);
        let sign = s * parity(f.multiplicity(n - 1));
        return Ok((promote_case_e(&f, i, n)?, sign));
    }

    // (F)
    cases.push(Case::F);
    let k_inc = 1 + a.below(la);
    let (pa, pb) = (left_part(a, la, i)?, left_part(b, lb, i)?);
    let (f, s) = separate(&pa, &pb, cases)?;
    let f = f.relabel(|x| if x == i + 2 { n } else { x });
    let flips = k_inc * (f.multiplicity(n) + f.multiplicity(i + 1));
    Ok((promote_case_f(&f, i, n)?, s * parity(flips)))
}

fn parity(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn uses(d: &ChordDiagram, h: usize) -> bool {
    d.chords().iter().any(|c| c.markers().contains(&h))
}

fn last_top(d: &ChordDiagram) -> usize {
    *d.top_chords().last().expect("nonempty diagram")
}

/// Descendants of `c_l`, relabelled `m ↦ m - i` onto `[n - i]`.
fn descendants(d: &ChordDiagram, l: usize, i: usize) -> Result<ChordDiagram> {
    let chords = (0..d.k()).filter(|&c| d.is_descendant(c, l)).map(|c| {
        let ch = d.chord(c);
        Chord::new(ch.i - i, ch.j - i)
    });
    ChordDiagram::new(d.n() - i, chords.collect())
}

/// Chords other than `c_l` and its descendants, on `[i+1] ∪ {n}` relabelled
/// to `[i+2]`.
fn left_part(d: &ChordDiagram, l: usize, i: usize) -> Result<ChordDiagram> {
    let chords = (0..d.k()).filter(|&c| c != l && !d.is_descendant(c, l)).map(|c| d.chord(c));
    ChordDiagram::new(i + 2, chords.collect())
}

fn check_indices(f: &Functionary, ok: impl Fn(usize) -> bool, what: &str) -> Result<()> {
    match f.indices().into_iter().find(|&x| !ok(x)) {
        Some(x) => Err(Error::InvalidArgument(format!("index {x} outside {what}"))),
        None => Ok(()),
    }
}

fn tw(idx: [usize; 4]) -> Functionary {
    Functionary::twistor(idx)
}

/// Promotion through the upper embedding at tail `i`: substitutes
/// `Z_{n-1}` and `Z_n` multilinearly.
pub fn promote_case_e(f: &Functionary, i: usize, n: usize) -> Result<Functionary> {
    if i == 0 || i + 4 > n {
        return Err(Error::InvalidArgument(format!("tail {i} does not fit n = {n}")));
    }
    check_indices(f, |x| x > i && x <= n, &format!("{{{}..{n}}}", i + 1))?;
    let mut rules = BTreeMap::new();
    rules.insert(n - 1, vec![(tw([i, i + 1, n - 2, n]), n - 1), (tw([i, i + 1, n - 1, n]).neg(), n - 2)]);
    rules.insert(
        n,
        vec![
            (tw([i, i + 1, n - 2, n - 1]), n),
            (tw([i, i + 1, n - 2, n]).neg(), n - 1),
            (tw([i, i + 1, n - 1, n]), n - 2),
        ],
    );
    Ok(f.substitute(&rules))
}

/// Promotion through the right-hand generation at tail `i`: substitutes
/// `Z_{i+1}`.
pub fn promote_case_f(f: &Functionary, i: usize, n: usize) -> Result<Functionary> {
    if i == 0 || i + 4 > n {
        return Err(Error::InvalidArgument(format!("tail {i} does not fit n = {n}")));
    }
    check_indices(f, |x| (x >= 1 && x <= i + 1) || x == n, &format!("[{}] ∪ {{{n}}}", i + 1))?;
    let mut rules = BTreeMap::new();
    rules.insert(i + 1, vec![(tw([i, n - 2, n - 1, n]), i + 1), (tw([i + 1, n - 2, n - 1, n]).neg(), i)]);
    Ok(f.substitute(&rules))
}

/// `F` scaled to unit leading coefficient, for syntactic comparison up to
/// a positive factor.
pub fn normalized(f: &Functionary) -> Functionary {
    match f.terms().values().next() {
        Some(c) => {
            let c: Q = if c < &Q::from_integer(0.into()) { -c.clone() } else { c.clone() };
            f.scale(&(one() / c))
        }
        None => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, p: &[(usize, usize)]) -> ChordDiagram {
        ChordDiagram::from_pairs(n, p).unwrap()
    }

    #[test]
    fn one_chord_against_empty() {
        let s = separator(&d(6, &[(1, 3)]), &ChordDiagram::empty(6)).unwrap();
        assert_eq!(s.functionary, tw([1, 2, 3, 6]));
        assert_eq!((s.sign_a, s.sign_b), (-1, 1));
        assert_eq!(s.cases, vec![Case::A]);
        let t = separator(&ChordDiagram::empty(6), &d(6, &[(1, 3)])).unwrap();
        assert_eq!((t.sign_a, t.sign_b), (1, -1));
    }

    #[test]
    fn different_last_tails() {
        let s = separator(&d(8, &[(1, 6), (3, 5)]), &d(8, &[(2, 6), (3, 5)])).unwrap();
        assert!(s.cases.contains(&Case::D));
        let t = separator(&d(7, &[(1, 5)]), &d(7, &[(2, 5)])).unwrap();
        assert_eq!(t.functionary, favorite(1, 2, 2, 3, 5, 6, 7));
        assert_eq!(t.cases, vec![Case::B, Case::D]);
    }

    #[test]
    fn warmup_promotion() {
        let f = promote_case_e(&tw([3, 4, 5, 7]), 1, 7).unwrap();
        let want = tw([1, 2, 5, 6]).mul(&tw([3, 4, 5, 7])).sub(&tw([1, 2, 5, 7]).mul(&tw([3, 4, 5, 6])));
        assert_eq!(f, want);
        let g = tw([2, 3, 4, 5]);
        assert_eq!(promote_case_e(&g, 1, 7).unwrap(), g);
        assert!(promote_case_e(&tw([1, 3, 4, 5]), 1, 7).is_err());
    }

    #[test]
    fn case_f_of_a_twistor_through_i_plus_one() {
        // <j j+1 i+1 n> becomes <<i i+1 | n-2 n-1 | j j+1 | n>>
        let (i, j, n) = (4, 1, 9);
        let f = promote_case_f(&tw([j, j + 1, i + 1, n]), i, n).unwrap();
        assert_eq!(f, favorite(i, i + 1, n - 2, n - 1, j, j + 1, n));
        let g = tw([1, 2, 3, n]);
        assert_eq!(promote_case_f(&g, i, n).unwrap(), g);
    }

    #[test]
    fn rejects_equal_diagrams() {
        let a = d(7, &[(1, 3)]);
        assert!(separator(&a, &a).is_err());
        assert!(separator(&a, &ChordDiagram::empty(8)).is_err());
    }
}
