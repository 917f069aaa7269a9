//! Decorated permutations on a finite index set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bijection of `domain` whose fixed points are coloured. Fixed points not
/// listed in `white` are black.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecoratedPermutation {
    domain: Vec<usize>,
    images: Vec<usize>,
    white: BTreeSet<usize>,
}

impl DecoratedPermutation {
    pub fn identity(domain: &[usize]) -> Self {
        Self { domain: domain.to_vec(), images: domain.to_vec(), white: BTreeSet::new() }
    }

    /// Builds from a sorted domain and the image of each element.
    pub fn from_images(domain: &[usize], images: &[usize], white: BTreeSet<usize>) -> Result<Self> {
        if domain.len() != images.len() || domain.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("domain must be strictly increasing and match images".into()));
        }
        let mut seen: Vec<usize> = images.to_vec();
        seen.sort_unstable();
        if seen != domain {
            return Err(Error::InvalidArgument(format!("{images:?} is not a bijection of {domain:?}")));
        }
        for &w in &white {
            match domain.binary_search(&w) {
                Ok(p) if images[p] == w => {}
                _ => return Err(Error::InvalidArgument(format!("{w} is white but not a fixed point"))),
            }
        }
        Ok(Self { domain: domain.to_vec(), images: images.to_vec(), white })
    }

    /// The product `c_1 c_2 ... c_r` of cycles, composed right to left, on `[n]`.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Self {
        let domain: Vec<usize> = (1..=n).collect();
        let mut images = domain.clone();
        for cyc in cycles.iter().rev() {
            let step = cycle_map(n, cyc);
            // new = step after current
            for x in images.iter_mut() {
                *x = step[*x];
            }
        }
        Self { domain, images, white: BTreeSet::new() }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn white(&self) -> &BTreeSet<usize> {
        &self.white
    }

    pub fn apply(&self, x: usize) -> usize {
        let p = self.domain.binary_search(&x).expect("element outside domain");
        self.images[p]
    }

    pub fn inverse_of(&self, y: usize) -> usize {
        let p = self.images.iter().position(|&v| v == y).expect("element outside domain");
        self.domain[p]
    }

    pub fn is_white(&self, x: usize) -> bool {
        self.white.contains(&x)
    }

    /// Elements `m` with `π⁻¹(m) > m` or `m` a white fixed point.
    pub fn anti_excedances(&self) -> Vec<usize> {
        self.domain.iter().copied().filter(|&m| self.inverse_of(m) > m || self.is_white(m)).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.domain, other.domain, "domains differ");
        let images = other.images.iter().map(|&y| self.apply(y)).collect();
        Self { domain: self.domain.clone(), images, white: BTreeSet::new() }
    }

    /// Disjoint cycle notation, fixed points omitted; white fixed points are
    /// written with a trailing `'`.
    pub fn cycle_string(&self) -> String {
        let mut seen = BTreeSet::new();
        let mut out = String::new();
        for &x in &self.domain {
            if seen.contains(&x) {
                continue;
            }
            if self.apply(x) == x {
                seen.insert(x);
                if self.is_white(x) {
                    out.push_str(&format!("({x}')"));
                }
                continue;
            }
            let mut cyc = vec![x];
            seen.insert(x);
            let mut y = self.apply(x);
            while y != x {
                cyc.push(y);
                seen.insert(y);
                y = self.apply(y);
            }
            let parts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
            out.push('(');
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for DecoratedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .domain
            .iter()
            .zip(&self.images)
            .map(|(x, y)| if self.is_white(*x) { format!("{y}'") } else { y.to_string() })
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

fn cycle_map(n: usize, cyc: &[usize]) -> Vec<usize> {
    let mut m: Vec<usize> = (0..=n).collect();
    for (a, b) in cyc.iter().zip(cyc.iter().cycle().skip(1)) {
        m[*a] = *b;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_compose_right_to_left() {
        // (1 2)(2 3): 3 -> 2 -> 1, 1 -> 2, 2 -> 3
        let p = DecoratedPermutation::from_cycles(3, &[vec![1, 2], vec![2, 3]]);
        assert_eq!(p.images(), &[2, 3, 1]);
        assert_eq!(p.cycle_string(), "(1 2 3)");
    }

    #[test]
    fn anti_excedances_count_white() {
        let mut w = BTreeSet::new();
        w.insert(2);
        let p = DecoratedPermutation::from_images(&[1, 2, 3], &[3, 2, 1], w).unwrap();
        assert_eq!(p.anti_excedances(), vec![1, 2]);
        assert_eq!(p.to_string(), "3,2',1");
    }
}
