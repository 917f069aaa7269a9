//! Moving one endpoint of a chord by a marker.

use std::fmt;

use crate::chords::{Chord, ChordDiagram};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum End {
    Tail,
    Head,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    Left,
    Right,
}

/// The case of the shift that applied. `c_i = (h, h+1, l, l+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    /// Tail to `h-1`.
    TailLeft,
    /// Tail to `h+1`, `c_i` not short.
    TailRight,
    /// Short `c_i` moves to `(h+1, h+3)`.
    TailRightShort,
    /// Short `c_i` becomes `(h+1, j)` over its sibling `(h+2, j)`.
    TailRightSibling,
    /// Short `c_i` moves to `(h+1, h+3)`; same-end ancestors end at `h+1`.
    TailRightRolling,
    /// Short `c_i` becomes `(h+1, j)`; same-end ancestors end at `h+1`.
    TailRightRollingSibling,
    /// Head to `l-1`, `c_i` not short.
    HeadLeft,
    /// Short `c_i` moves to `(h-1, h+1)`.
    HeadLeftShort,
    /// `c_i` ends where its same-end child `(j, l)`, `j > h+1`, starts.
    HeadLeftToChild,
    /// `c_i` with a sticky same-end child becomes short `(h-1, h+1)`.
    HeadLeftSticky,
    /// As `HeadLeftSticky`, pushing the heads at `h` to `h+1`.
    HeadLeftStickyRolling,
    /// Short `c_i` moves to `(h-1, h+1)`, pushing the heads at `h` to `h+1`.
    HeadLeftShortRolling,
    /// Head to `l+1`.
    HeadRight,
    /// `c_i` ends where its sibling `(l, j)` ends.
    HeadRightSibling,
}

impl ShiftKind {
    pub fn is_obstructed(self) -> bool {
        !matches!(
            self,
            Self::TailLeft
                | Self::TailRight
                | Self::TailRightShort
                | Self::HeadLeft
                | Self::HeadLeftShort
                | Self::HeadRight
        )
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftResult {
    pub target: ChordDiagram,
    /// Index of the moved chord in `target`.
    pub index: usize,
    pub kind: ShiftKind,
}

pub fn is_short(d: &ChordDiagram, l: usize) -> bool {
    let c = d.chord(l);
    c.j == c.i + 2
}

fn ends_at(d: &ChordDiagram, m: usize) -> Vec<usize> {
    (0..d.k()).filter(|&c| d.chord(c).j == m).collect()
}

fn undefined(l: usize, end: End, dir: Dir, why: &str) -> Error {
    Error::InvalidArgument(format!("{dir:?} shift of the {end:?} of chord {} is undefined: {why}", l + 1))
}

/// Rebuilds `d` with chord `l` replaced by `(a, b)` and the heads of `push`
/// moved to `to`.
fn rebuild(d: &ChordDiagram, l: usize, new: Chord, push: &[usize], to: usize, kind: ShiftKind) -> Result<ShiftResult> {
    let chords: Vec<Chord> = (0..d.k())
        .map(|c| {
            if c == l {
                new
            } else if push.contains(&c) {
                Chord::new(d.chord(c).i, to)
            } else {
                d.chord(c)
            }
        })
        .collect();
    let target = ChordDiagram::new(d.n(), chords)?;
    let index = target.starting_at(new.i).expect("the moved chord is present");
    Ok(ShiftResult { target, index, kind })
}

/// `shift_{l; s|e, l|r}(D)`.
pub fn shift(d: &ChordDiagram, l: usize, end: End, dir: Dir) -> Result<ShiftResult> {
    if l >= d.k() {
        return Err(Error::InvalidArgument(format!("no chord {}", l + 1)));
    }
    let n = d.n();
    let c = d.chord(l);
    let (h, e) = (c.i, c.j);
    let short = is_short(d, l);
    let starts = |m: usize| d.starting_at(m).filter(|&x| x != l);
    let others_ending = |m: usize| ends_at(d, m).into_iter().filter(|&x| x != l).collect::<Vec<_>>();
    let no = |why: &str| Err(undefined(l, end, dir, why));
    match (end, dir) {
        (End::Tail, Dir::Left) => {
            if h == 1 {
                return no("it starts at (1, 2)");
            }
            if starts(h - 1).is_some() || !others_ending(h).is_empty() {
                return no("a chord starts at (h-1, h) or ends at (h, h+1)");
            }
            rebuild(d, l, Chord::new(h - 1, e), &[], 0, ShiftKind::TailLeft)
        }
        (End::Tail, Dir::Right) => {
            if !short {
                if starts(h + 1).is_some() {
                    return no("it has a sticky child");
                }
                return rebuild(d, l, Chord::new(h + 1, e), &[], 0, ShiftKind::TailRight);
            }
            if e >= n - 2 {
                return no("a short chord ending at (n-2, n-1)");
            }
            let sibling = starts(e);
            // ancestors of a short chord that end with it are its same-end chain
            let ancestors: Vec<usize> = others_ending(e).into_iter().filter(|&a| d.is_descendant(l, a)).collect();
            match (sibling, ancestors.is_empty()) {
                (None, true) => rebuild(d, l, Chord::new(h + 1, h + 3), &[], 0, ShiftKind::TailRightShort),
                (Some(s), true) => rebuild(d, l, Chord::new(h + 1, d.chord(s).j), &[], 0, ShiftKind::TailRightSibling),
                (None, false) => {
                    rebuild(d, l, Chord::new(h + 1, h + 3), &ancestors, h + 1, ShiftKind::TailRightRolling)
                }
                (Some(s), false) => rebuild(
                    d,
                    l,
                    Chord::new(h + 1, d.chord(s).j),
                    &ancestors,
                    h + 1,
                    ShiftKind::TailRightRollingSibling,
                ),
            }
        }
        (End::Head, Dir::Left) => {
            let ending_at_h = others_ending(h);
            let free_before = h > 1 && starts(h - 1).is_none() && ending_at_h.is_empty();
            if short {
                if free_before {
                    return rebuild(d, l, Chord::new(h - 1, h + 1), &[], 0, ShiftKind::HeadLeftShort);
                }
                if !ending_at_h.is_empty() {
                    return rebuild(
                        d,
                        l,
                        Chord::new(h - 1, h + 1),
                        &ending_at_h,
                        h + 1,
                        ShiftKind::HeadLeftShortRolling,
                    );
                }
                return no("a short chord starting at (1, 2) or sticking to its parent");
            }
            match d.same_end_child(l) {
                None => rebuild(d, l, Chord::new(h, e - 1), &[], 0, ShiftKind::HeadLeft),
                Some(ch) if d.chord(ch).i > h + 1 => {
                    rebuild(d, l, Chord::new(h, d.chord(ch).i), &[], 0, ShiftKind::HeadLeftToChild)
                }
                Some(_) if free_before => rebuild(d, l, Chord::new(h - 1, h + 1), &[], 0, ShiftKind::HeadLeftSticky),
                Some(_) if !ending_at_h.is_empty() => {
                    rebuild(d, l, Chord::new(h - 1, h + 1), &ending_at_h, h + 1, ShiftKind::HeadLeftStickyRolling)
                }
                Some(_) => no("a sticky same-end child and no room before the tail"),
            }
        }
        (End::Head, Dir::Right) => {
            if d.parent(l).is_some_and(|p| d.chord(p).j == e) {
                return no("its parent ends at the same segment");
            }
            match starts(e) {
                Some(s) => rebuild(d, l, Chord::new(h, d.chord(s).j), &[], 0, ShiftKind::HeadRightSibling),
                None if e < n - 2 => rebuild(d, l, Chord::new(h, e + 1), &[], 0, ShiftKind::HeadRight),
                None => no("it ends at (n-2, n-1)"),
            }
        }
    }
}

/// The shift that undoes a shift of the given kind.
pub fn inverse_direction(kind: ShiftKind) -> (End, Dir) {
    use ShiftKind::*;
    match kind {
        TailLeft => (End::Tail, Dir::Right),
        TailRight => (End::Tail, Dir::Left),
        TailRightShort | TailRightSibling | TailRightRolling | TailRightRollingSibling => (End::Head, Dir::Left),
        HeadLeft | HeadLeftToChild => (End::Head, Dir::Right),
        HeadLeftShort | HeadLeftSticky | HeadLeftStickyRolling | HeadLeftShortRolling => (End::Tail, Dir::Right),
        HeadRight | HeadRightSibling => (End::Head, Dir::Left),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: usize, p: &[(usize, usize)]) -> ChordDiagram {
        ChordDiagram::from_pairs(n, p).unwrap()
    }

    #[test]
    fn tail_shifts() {
        let a = d(9, &[(2, 6)]);
        let r = shift(&a, 0, End::Tail, Dir::Left).unwrap();
        assert_eq!(r.target, d(9, &[(1, 6)]));
        assert_eq!(shift(&r.target, 0, End::Tail, Dir::Right).unwrap().target, a);
        assert!(shift(&d(9, &[(1, 6)]), 0, End::Tail, Dir::Left).is_err());
        assert!(shift(&d(9, &[(1, 6), (2, 4)]), 0, End::Tail, Dir::Right).is_err());
    }

    #[test]
    fn short_tail_right_rolls_the_ancestors() {
        let a = d(10, &[(1, 6), (4, 6)]);
        let r = shift(&a, 1, End::Tail, Dir::Right).unwrap();
        assert_eq!(r.kind, ShiftKind::TailRightRolling);
        assert_eq!(r.target, d(10, &[(1, 5), (5, 7)]));
        let back = shift(&r.target, r.index, End::Head, Dir::Left).unwrap();
        assert_eq!(back.kind, ShiftKind::HeadLeftShortRolling);
        assert_eq!(back.target, a);
    }

    #[test]
    fn head_shifts() {
        let a = d(10, &[(1, 7), (3, 7)]);
        let r = shift(&a, 0, End::Head, Dir::Left).unwrap();
        assert_eq!(r.kind, ShiftKind::HeadLeftToChild);
        assert_eq!(r.target, d(10, &[(1, 3), (3, 7)]));
        let back = shift(&r.target, 0, End::Head, Dir::Right).unwrap();
        assert_eq!((back.kind, back.target), (ShiftKind::HeadRightSibling, a));
        assert!(shift(&d(8, &[(1, 6)]), 0, End::Head, Dir::Right).is_err());
    }
}
