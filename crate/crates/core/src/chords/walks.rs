use serde::{Deserialize, Serialize};

use super::{Chord, ChordDiagram};
use crate::error::{Error, Result};

/// Two lattice walks in a `k × (n-k-4)` rectangle, given by the positions of
/// their vertical steps among the `n - 4` steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeWalkPair {
    pub n: usize,
    /// Vertical steps of the upper walk `W_A`.
    pub a_vertical: Vec<usize>,
    /// Vertical steps of the lower walk `W_B`.
    pub b_vertical: Vec<usize>,
}

impl LatticeWalkPair {
    pub fn k(&self) -> usize {
        self.b_vertical.len()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(m.to_string()));
        if self.n < 4 {
            return bad("n must be at least 4");
        }
        let m = self.n - 4;
        for s in [&self.a_vertical, &self.b_vertical] {
            if s.windows(2).any(|w| w[0] >= w[1]) || s.iter().any(|&x| x < 1 || x > m) {
                return bad("vertical steps must be increasing elements of [n-4]");
            }
        }
        if self.a_vertical.len() != self.b_vertical.len() {
            return bad("walks have different heights");
        }
        if self.a_vertical.iter().zip(&self.b_vertical).any(|(a, b)| a < b) {
            return bad("walks cross");
        }
        Ok(())
    }

    /// Horizontal steps of `W_A` in rows `0..=k`.
    pub fn a_horizontal(&self) -> Vec<usize> {
        let m = self.n - 4;
        let j = &self.a_vertical;
        let k = j.len();
        let mut a = Vec::with_capacity(k + 1);
        a.push(j.first().map_or(m, |&x| x - 1));
        for l in 0..k {
            let next = if l + 1 < k { j[l + 1] } else { m + 1 };
            a.push(next - j[l] - 1);
        }
        a
    }
}

/// The head options `J_l` for every chord, given tails and the heads of the
/// later chords. `heads` is filled from the back as choices are made.
fn options(n: usize, tails: &[usize], l: usize, next: Option<(&[usize], usize)>) -> Vec<usize> {
    match next {
        None => (tails[l] + 2..=n - 2).collect(),
        Some((prev, j_next)) => {
            let mut v: Vec<usize> = (tails[l] + 2..=tails[l + 1]).collect();
            v.extend(prev.iter().copied().filter(|&x| x >= j_next));
            v
        }
    }
}

/// The map `Φ`.
pub fn walks_to_diagram(w: &LatticeWalkPair) -> Result<ChordDiagram> {
    w.validate()?;
    let k = w.k();
    let tails = &w.b_vertical;
    let a = w.a_horizontal();
    let mut heads = vec![0; k];
    let mut prev: Vec<usize> = Vec::new();
    for l in (0..k).rev() {
        let opts =
            if l + 1 == k { options(w.n, tails, l, None) } else { options(w.n, tails, l, Some((&prev, heads[l + 1]))) };
        heads[l] = *opts
            .get(a[l + 1])
            .ok_or_else(|| Error::InvalidArgument(format!("row {} has too many horizontal steps", l + 1)))?;
        prev = opts;
    }
    ChordDiagram::new(w.n, tails.iter().zip(&heads).map(|(&i, &j)| Chord::new(i, j)).collect())
}

/// The inverse of `Φ`.
pub fn diagram_to_walks(d: &ChordDiagram) -> LatticeWalkPair {
    let k = d.k();
    let n = d.n();
    let tails: Vec<usize> = d.chords().iter().map(|c| c.i).collect();
    let mut a = vec![0; k + 1];
    let mut prev: Vec<usize> = Vec::new();
    for l in (0..k).rev() {
        let opts = if l + 1 == k {
            options(n, &tails, l, None)
        } else {
            options(n, &tails, l, Some((&prev, d.chord(l + 1).j)))
        };
        a[l + 1] = opts.iter().position(|&x| x == d.chord(l).j).expect("head among options");
        prev = opts;
    }
    let total = n.saturating_sub(k + 4);
    a[0] = total - a[1..].iter().sum::<usize>();
    let mut j = Vec::with_capacity(k);
    let mut pos = a[0];
    for l in 0..k {
        pos += 1;
        j.push(pos);
        pos += a[l + 1];
    }
    LatticeWalkPair { n, a_vertical: j, b_vertical: tails }
}
