use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{Chord, ChordDiagram};

/// `(1/(n-3)) C(n-3, k+1) C(n-3, k)`.
pub fn bcfw_count(n: usize, k: usize) -> u128 {
    if n < 4 || k > n - 4 {
        return 0;
    }
    let m = n - 3;
    let c = |a: usize, b: usize| -> BigUint {
        if b > a {
            return BigUint::from(0u8);
        }
        let mut r = BigUint::from(1u8);
        for t in 0..b {
            r = r * (a - t) / (t + 1);
        }
        r
    };
    (c(m, k + 1) * c(m, k) / BigUint::from(m)).to_u128().expect("count fits in u128")
}

/// All diagrams in `CD_{n,k}`, in lexicographic order of their chord lists.
pub fn enumerate(n: usize, k: usize) -> Vec<ChordDiagram> {
    let mut out = Vec::new();
    if n < 4 || k > n - 4 {
        return out;
    }
    let mut cur: Vec<Chord> = Vec::with_capacity(k);
    place(n, k, 1, &mut cur, &mut out);
    out
}

fn place(n: usize, k: usize, min_i: usize, cur: &mut Vec<Chord>, out: &mut Vec<ChordDiagram>) {
    if cur.len() == k {
        out.push(ChordDiagram { n, chords: cur.clone() });
        return;
    }
    let left = k - cur.len();
    // the remaining tails need distinct segments among 1..=n-4
    for i in min_i..=(n - 4) {
        if n - 4 - i + 1 < left {
            break;
        }
        for j in i + 2..=n - 2 {
            let c = Chord::new(i, j);
            if cur.iter().any(|d| crosses(d, &c)) {
                continue;
            }
            cur.push(c);
            place(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
}

/// Earlier chord `d` (smaller tail) and later chord `c` cross.
fn crosses(d: &Chord, c: &Chord) -> bool {
    d.i < c.i && c.i < d.j && d.j < c.j
}
