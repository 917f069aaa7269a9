//! The pieces of one recursion step and their sign signatures.

use serde_json::{json, Value};

use super::{amap, favorite, positive_point, Functionary, PositiveZ, Twistors};
use crate::error::{Error, Result};
use crate::matrix::{middle_embedding, IndexSet, RationalMatrix};
use crate::rational::{sign, Q};
use crate::rng::{positive_rational, seeded, SeedRng};

use super::parity;

/// One piece of the decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Piece {
    /// `pre_{n-1} Gr^>_{k, [n] ∖ {n-1}}`.
    Pre,
    /// `S_{i,n;k1,k-k1-1}`; `i = 1, k1 = 0` is the upper-embedding piece.
    Mid { i: usize, k1: usize },
}

impl std::fmt::Display for Piece {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Piece::Pre => write!(f, "pre"),
            Piece::Mid { i, k1 } => write!(f, "S[{i};{k1}]"),
        }
    }
}

/// A test functionary with the sign predicted on a piece.
#[derive(Debug, Clone)]
pub struct SignTest {
    pub label: String,
    pub functionary: Functionary,
    pub sign: i8,
}

#[derive(Debug, Clone)]
pub struct PieceResult {
    pub piece: Piece,
    pub signature: Vec<SignTest>,
    pub samples: usize,
    /// `(test label, sample index, observed sign)` for every mismatch.
    pub violations: Vec<(String, usize, i8)>,
}

#[derive(Debug, Clone)]
pub struct MiddleReport {
    pub n: usize,
    pub k: usize,
    pub pieces: Vec<PieceResult>,
    /// Pairs of pieces not separated by a test of constant, opposite
    /// observed signs.
    pub undistinguished: Vec<(Piece, Piece)>,
}

impl MiddleReport {
    pub fn passed(&self) -> bool {
        self.pieces.iter().all(|p| p.violations.is_empty()) && self.undistinguished.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "k": self.k,
            "passed": self.passed(),
            "pieces": self.pieces.iter().map(|p| json!({
                "piece": p.piece.to_string(),
                "samples": p.samples,
                "signature": p.signature.iter().map(|t| json!({"test": t.label, "sign": t.sign})).collect::<Vec<_>>(),
                "violations": p.violations.iter().map(|(l, s, o)| json!({"test": l, "sample": s, "observed": o})).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "undistinguished": self.undistinguished.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect::<Vec<_>>(),
        })
    }
}

/// All pieces for `(n, k)`.
pub fn pieces(n: usize, k: usize) -> Vec<Piece> {
    let mut out = vec![Piece::Pre];
    if k == 0 {
        return out;
    }
    out.push(Piece::Mid { i: 1, k1: 0 });
    for k1 in 0..k {
        let k2 = k - 1 - k1;
        if n < k2 + 4 {
            continue;
        }
        for i in k1 + 2..=n - k2 - 4 {
            out.push(Piece::Mid { i, k1 });
        }
    }
    out
}

/// The predicted signature of a piece.
pub fn signature(piece: Piece, n: usize, k: usize) -> Vec<SignTest> {
    let t = |label: String, functionary: Functionary, sign: i8| SignTest { label, functionary, sign };
    match piece {
        Piece::Pre => (1..=n.saturating_sub(4))
            .map(|j| t(format!("<{} {} {} {}>", j, j + 1, n - 2, n), Functionary::twistor([j, j + 1, n - 2, n]), 1))
            .collect(),
        Piece::Mid { i, k1 } => {
            let mut out = vec![
                t(
                    format!("<{} {} {} {}>", i + 1, n - 2, n - 1, n),
                    Functionary::twistor([i + 1, n - 2, n - 1, n]),
                    parity(k - k1 - 1),
                ),
                t(
                    format!("<{} {} {} {}>", i, n - 2, n - 1, n),
                    Functionary::twistor([i, n - 2, n - 1, n]),
                    parity(k - k1),
                ),
                t(format!("<{} {} {} {}>", i, i + 1, n - 2, n), Functionary::twistor([i, i + 1, n - 2, n]), -1),
            ];
            for j in i + 1..=n.saturating_sub(4) {
                out.push(t(fav_label(i, j, n), favorite(i, i + 1, j, j + 1, n - 2, n - 1, n), -1));
            }
            for j in 1..i {
                out.push(t(fav_label(j, i, n), favorite(j, j + 1, i, i + 1, n - 2, n - 1, n), 1));
            }
            out
        }
    }
}

fn fav_label(a: usize, b: usize, n: usize) -> String {
    format!("<<{} {}|{} {}|{} {}|{}>>", a, a + 1, b, b + 1, n - 2, n - 1, n)
}

/// A point of the piece.
pub fn sample_piece(piece: Piece, n: usize, k: usize, rng: &mut SeedRng) -> Result<RationalMatrix> {
    match piece {
        Piece::Pre => {
            let cols = IndexSet::range(1, n).without(n - 1)?;
            positive_point(k, &cols, rng).pre(n - 1)
        }
        Piece::Mid { i: 1, k1: 0 } => {
            let cols = IndexSet::range(2, n);
            let t: Vec<Q> = (0..3).map(|_| positive_rational(rng)).collect();
            let s = [positive_rational(rng)];
            positive_point(k - 1, &cols, rng).iota(1, &t, &s)
        }
        Piece::Mid { i, k1 } => {
            let k2 = k - 1 - k1;
            let lcols = IndexSet::range(1, i + 1).with(n)?;
            let l = positive_point(k1, &lcols, rng);
            let r = positive_point(k2, &IndexSet::range(i, n - 1), rng);
            let p: Vec<Q> = (0..4).map(|_| positive_rational(rng)).collect();
            middle_embedding(i, &p[0], &p[1], &p[2], &p[3], &l, &r)
        }
    }
}

/// Samples every piece against every `Z` in the panel and evaluates the
/// union of all signatures on every sample.
pub fn check_middle_decomposition(
    n: usize,
    k: usize,
    panel: &[PositiveZ],
    samples: usize,
    seed: u64,
) -> Result<MiddleReport> {
    if n < k + 4 {
        return Err(Error::InvalidArgument(format!("n = {n} < k + 4")));
    }
    if panel.iter().any(|z| z.n() != n || z.k() != k) {
        return Err(Error::Dimension("Z panel does not match (n, k)".into()));
    }
    let ps = pieces(n, k);
    let sigs: Vec<Vec<SignTest>> = ps.iter().map(|&p| signature(p, n, k)).collect();
    let mut all_tests: Vec<(String, Functionary)> = Vec::new();
    for t in sigs.iter().flatten() {
        if !all_tests.iter().any(|(l, _)| *l == t.label) {
            all_tests.push((t.label.clone(), t.functionary.clone()));
        }
    }

    let mut rng = seeded(seed);
    // observed[piece][test] = Some(constant sign) or None once it varies
    let mut observed: Vec<Vec<Option<i8>>> = Vec::new();
    let mut results = Vec::new();
    for (pi, &piece) in ps.iter().enumerate() {
        let mut obs: Vec<Option<i8>> = vec![None; all_tests.len()];
        let mut first = true;
        let mut violations = Vec::new();
        let mut count = 0;
        for s in 0..samples {
            let c = sample_piece(piece, n, k, &mut rng)?;
            for z in panel {
                let y = amap(&c, z)?;
                let mut tw = Twistors::new(&y, z);
                let signs: Vec<i8> = all_tests.iter().map(|(_, f)| sign(&f.eval_with(&mut tw))).collect();
                for t in &sigs[pi] {
                    let idx = all_tests.iter().position(|(l, _)| *l == t.label).expect("test indexed");
                    if signs[idx] != t.sign {
                        violations.push((t.label.clone(), s, signs[idx]));
                    }
                }
                for (a, sg) in signs.into_iter().enumerate() {
                    obs[a] = if first { (sg != 0).then_some(sg) } else { obs[a].filter(|&o| o == sg) };
                }
                first = false;
                count += 1;
            }
        }
        observed.push(obs);
        results.push(PieceResult { piece, signature: sigs[pi].clone(), samples: count, violations });
    }

    let mut undistinguished = Vec::new();
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let sep =
                (0..all_tests.len()).any(|t| matches!((observed[a][t], observed[b][t]), (Some(x), Some(y)) if x == -y));
            if !sep {
                undistinguished.push((ps[a], ps[b]));
            }
        }
    }
    Ok(MiddleReport { n, k, pieces: results, undistinguished })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piece_lists() {
        assert_eq!(
            pieces(7, 1),
            vec![Piece::Pre, Piece::Mid { i: 1, k1: 0 }, Piece::Mid { i: 2, k1: 0 }, Piece::Mid { i: 3, k1: 0 }]
        );
        assert_eq!(pieces(8, 2).len(), 1 + 1 + 2 + 2);
        assert_eq!(pieces(6, 0), vec![Piece::Pre]);
    }

    #[test]
    fn mid_samples_have_the_five_term_row() {
        let mut rng = seeded(1);
        let c = sample_piece(Piece::Mid { i: 3, k1: 1 }, 8, 2, &mut rng).unwrap();
        assert_eq!(c.row_support(2).unwrap(), vec![3, 4, 6, 7, 8]);
        assert!(c.all_plueckers().iter().all(|(_, v)| !num_traits::Signed::is_negative(v)));
    }
}
