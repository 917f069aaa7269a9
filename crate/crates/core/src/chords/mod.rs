//! Chord diagrams, their terminology, and the equivalent encodings.
//!
//! Chords are indexed from `0` internally; text output uses `1`-based labels.

mod enumerate;
mod oplus;
mod perm;
mod walks;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use enumerate::{bcfw_count, enumerate};
pub use oplus::{diagram_to_oplus, oplus_to_permutation, OplusDiagram};
pub use perm::{algorithmic_factors, algorithmic_permutation, tagged_factors, to_permutation, FactorRole};
pub use walks::{diagram_to_walks, walks_to_diagram, LatticeWalkPair};

/// The chord `(i, i+1, j, j+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Chord {
    pub i: usize,
    pub j: usize,
}

impl Chord {
    pub fn new(i: usize, j: usize) -> Self {
        Self { i, j }
    }

    /// The four markers `(i, i+1, j, j+1)`.
    pub fn markers(&self) -> [usize; 4] {
        [self.i, self.i + 1, self.j, self.j + 1]
    }
}

/// `n` markers and noncrossing chords listed by increasing tail.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChordDiagram {
    n: usize,
    chords: Vec<Chord>,
}

impl ChordDiagram {
    /// Validates and sorts the chords.
    pub fn new(n: usize, mut chords: Vec<Chord>) -> Result<Self> {
        chords.sort();
        let d = Self { n, chords };
        d.validate()?;
        Ok(d)
    }

    pub fn empty(n: usize) -> Self {
        Self { n, chords: Vec::new() }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(n, pairs.iter().map(|&(i, j)| Chord::new(i, j)).collect())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidDiagram(m));
        if self.n < 4 && !self.chords.is_empty() {
            return bad(format!("n = {} is too small for a chord", self.n));
        }
        for (l, c) in self.chords.iter().enumerate() {
            if c.i < 1 {
                return bad(format!("chord {} starts before marker 1", l + 1));
            }
            if c.j < c.i + 2 {
                return bad(format!("chord {} ends on its own or an adjacent segment", l + 1));
            }
            if c.j + 1 > self.n - 1 {
                return bad(format!("chord {} ends after marker {}", l + 1, self.n - 1));
            }
        }
        for w in self.chords.windows(2) {
            if w[0].i == w[1].i {
                return bad(format!("two chords start at ({}, {})", w[0].i, w[0].i + 1));
            }
        }
        for (a, c) in self.chords.iter().enumerate() {
            for d in &self.chords[a + 1..] {
                if c.i < d.i && d.i < c.j && c.j < d.j {
                    return bad(format!("chords {}-{} and {}-{} cross", c.i, c.j, d.i, d.j));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.chords.len()
    }

    pub fn chords(&self) -> &[Chord] {
        &self.chords
    }

    pub fn chord(&self, l: usize) -> Chord {
        self.chords[l]
    }

    /// The chord whose tail is `(m, m+1)`.
    pub fn starting_at(&self, m: usize) -> Option<usize> {
        self.chords.iter().position(|c| c.i == m)
    }

    /// `c` is a descendant of `a`.
    pub fn is_descendant(&self, c: usize, a: usize) -> bool {
        let (x, y) = (self.chords[a], self.chords[c]);
        x.i < y.i && y.i < y.j && y.j <= x.j
    }

    pub fn parent(&self, l: usize) -> Option<usize> {
        (0..l).rev().find(|&a| self.is_descendant(l, a))
    }

    pub fn children(&self, l: usize) -> Vec<usize> {
        (l + 1..self.k()).filter(|&c| self.parent(c) == Some(l)).collect()
    }

    pub fn top_chords(&self) -> Vec<usize> {
        (0..self.k()).filter(|&l| self.parent(l).is_none()).collect()
    }

    pub fn is_top(&self, l: usize) -> bool {
        self.parent(l).is_none()
    }

    /// Number of descendants.
    pub fn below(&self, l: usize) -> usize {
        (0..self.k()).filter(|&c| self.is_descendant(c, l)).count()
    }

    /// Number of chords starting after `c_l`.
    pub fn behind(&self, l: usize) -> usize {
        self.k() - 1 - l
    }

    /// Descendants of the parent that come before `c_l`.
    pub fn beyond(&self, l: usize) -> Option<usize> {
        self.parent(l).map(|m| l - m - 1)
    }

    /// `c_l` starts one marker after its parent.
    pub fn is_sticky_child(&self, l: usize) -> bool {
        l > 0 && self.chords[l - 1].i + 1 == self.chords[l].i
    }

    /// Index of `c_{l*}`, the end of the maximal sticky chain through `c_l`.
    pub fn sticky_last(&self, l: usize) -> usize {
        let mut e = l;
        while e + 1 < self.k() && self.chords[e + 1].i == self.chords[e].i + 1 {
            e += 1;
        }
        e
    }

    /// Index of `c_{*l}`, the start of the maximal sticky chain through `c_l`.
    pub fn sticky_first(&self, l: usize) -> usize {
        let mut s = l;
        while s > 0 && self.is_sticky_child(s) {
            s -= 1;
        }
        s
    }

    /// `c_l` is a child of `c_m` ending on the same segment.
    pub fn same_end_parent(&self, l: usize) -> Option<usize> {
        self.parent(l).filter(|&m| self.chords[m].j == self.chords[l].j)
    }

    pub fn same_end_child(&self, m: usize) -> Option<usize> {
        self.children(m).into_iter().find(|&c| self.chords[c].j == self.chords[m].j)
    }

    /// Pairs `(m, l)` where `c_l` starts where `c_m` ends.
    pub fn head_to_tail_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (m, c) in self.chords.iter().enumerate() {
            if let Some(l) = self.starting_at(c.j) {
                out.push((m, l));
            }
        }
        out
    }

    /// Markers where no chord starts.
    pub fn non_tail_markers(&self) -> Vec<usize> {
        (1..=self.n).filter(|&m| self.starting_at(m).is_none()).collect()
    }

    /// The text form `n=14; 1-11, 3-6, 8-10`.
    pub fn to_text(&self) -> String {
        let parts: Vec<String> = self.chords.iter().map(|c| format!("{}-{}", c.i, c.j)).collect();
        if parts.is_empty() {
            format!("n={}", self.n)
        } else {
            format!("n={}; {}", self.n, parts.join(", "))
        }
    }

    pub fn from_text(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a chord diagram: {s:?}"));
        let mut parts = s.split(';');
        let head = parts.next().ok_or_else(bad)?.trim();
        let n: usize = head.strip_prefix("n=").ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let mut chords = Vec::new();
        if let Some(rest) = parts.next() {
            for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let (a, b) = tok.split_once('-').ok_or_else(bad)?;
                chords.push(Chord::new(a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?));
            }
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Self::new(n, chords)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let pairs: Vec<[usize; 2]> = self.chords.iter().map(|c| [c.i, c.j]).collect();
        serde_json::json!({ "n": self.n, "chords": pairs })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            chords: Vec<(usize, usize)>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_pairs(raw.n, &raw.chords)
    }

    /// Accepts either the JSON or the text form.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with('{') {
            let v: serde_json::Value = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
            Self::from_json(&v)
        } else {
            Self::from_text(t)
        }
    }

    /// The diagram on `n - 1` markers after deleting marker `h`, which must
    /// not be used by any chord. Markers above `h` shift down by one.
    pub fn strip_marker(&self, h: usize) -> Result<Self> {
        if self.chords.iter().any(|c| c.markers().contains(&h)) {
            return Err(Error::InvalidArgument(format!("marker {h} is used by a chord")));
        }
        let sh = |x: usize| if x > h { x - 1 } else { x };
        Self::new(self.n - 1, self.chords.iter().map(|c| Chord::new(sh(c.i), sh(c.j))).collect())
    }
}

impl fmt::Display for ChordDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Per-chord statistics used by the sign rules.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChordStats {
    pub chord: Chord,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    pub below: usize,
    pub behind: usize,
    pub beyond: Option<usize>,
    pub sticky_child: bool,
    pub sticky_first: usize,
    pub sticky_last: usize,
    pub same_end_parent: Option<usize>,
    /// Chords `c_m` with `(c_m, c_l)` head-to-tail.
    pub head_to_tail_from: Option<usize>,
}

pub fn stats(d: &ChordDiagram) -> Vec<ChordStats> {
    (0..d.k())
        .map(|l| ChordStats {
            chord: d.chord(l),
            parent: d.parent(l),
            children: d.children(l),
            below: d.below(l),
            behind: d.behind(l),
            beyond: d.beyond(l),
            sticky_child: d.is_sticky_child(l),
            sticky_first: d.sticky_first(l),
            sticky_last: d.sticky_last(l),
            same_end_parent: d.same_end_parent(l),
            head_to_tail_from: d.head_to_tail_pairs().into_iter().find(|p| p.1 == l).map(|p| p.0),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex9() -> ChordDiagram {
        ChordDiagram::from_pairs(18, &[(1, 6), (2, 4), (4, 6), (6, 10), (7, 9), (10, 16), (11, 16), (13, 16)]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(ChordDiagram::from_pairs(5, &[(1, 3)]).is_ok());
        assert!(ChordDiagram::from_pairs(5, &[(1, 2)]).is_err());
        assert!(ChordDiagram::from_pairs(5, &[(2, 4)]).is_err());
        assert!(ChordDiagram::from_pairs(10, &[(1, 5), (3, 7)]).is_err());
        assert!(ChordDiagram::from_pairs(10, &[(1, 5), (1, 7)]).is_err());
        assert!(ChordDiagram::from_pairs(10, &[(1, 5), (5, 7)]).is_ok());
    }

    #[test]
    fn text_and_json_forms() {
        let d = ChordDiagram::from_text("n=14; 1-11, 3-6, 8-10").unwrap();
        assert_eq!(d.to_text(), "n=14; 1-11, 3-6, 8-10");
        let j = serde_json::json!({"n":14,"chords":[[1,11],[3,6],[8,10]]});
        assert_eq!(d.to_json(), j);
        assert_eq!(ChordDiagram::from_json(&j).unwrap(), d);
        assert_eq!(ChordDiagram::parse("n=6").unwrap(), ChordDiagram::empty(6));
    }

    #[test]
    fn example_nine_structure() {
        let d = ex9();
        assert_eq!(d.top_chords(), vec![0, 3, 5]);
        assert!(d.is_sticky_child(1));
        assert_eq!(d.parent(1), Some(0));
        assert!(d.head_to_tail_pairs().contains(&(1, 2)));
        assert_eq!(d.same_end_parent(6), Some(5));
        assert_eq!(d.same_end_parent(7), Some(6));
        assert_eq!(d.sticky_last(5), 6);
        assert_eq!(d.below(0), 2);
        assert_eq!(d.beyond(2), Some(1));
        assert_eq!(d.behind(0), 7);
    }
}
