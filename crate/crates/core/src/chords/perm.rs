use super::ChordDiagram;
use crate::permutation::DecoratedPermutation;

/// `i_{l*} + 1` for the chord starting at `(m, m+1)`, if any.
fn advance(d: &ChordDiagram, m: usize) -> Option<usize> {
    d.starting_at(m).map(|c| d.chord(d.sticky_last(c)).i + 1)
}

/// The 5-cycle `(T_l U_l V_l W_l n)` of chord `l`.
pub(crate) fn five_cycle(d: &ChordDiagram, l: usize) -> [usize; 5] {
    let c = d.chord(l);
    let t = c.i;
    let u = d.chord(d.sticky_last(l)).i + 1;
    let (v, w) = match d.starting_at(c.j) {
        None => (c.j, advance(d, c.j + 1).unwrap_or(c.j + 1)),
        Some(m) => {
            let jm = d.chord(m).j;
            (advance(d, c.j).unwrap(), advance(d, jm).unwrap_or(jm))
        }
    };
    [t, u, v, w, d.n()]
}

/// The product of the 5-cycles of all chords.
pub fn to_permutation(d: &ChordDiagram) -> DecoratedPermutation {
    let cycles: Vec<Vec<usize>> = (0..d.k()).map(|l| five_cycle(d, l).to_vec()).collect();
    DecoratedPermutation::from_cycles(d.n(), &cycles)
}

/// Which endpoint or head a factor of `σ` belongs to, by 0-based chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FactorRole {
    /// `(i_l, i_{l*} + 1)`.
    Tail(usize),
    /// `(i_l + 1, n)` or `(i_l + 1, i_h + 1)` for the parent `c_h`.
    Head(usize),
    /// `(i_l + 1, j_l, j_l + 1)`.
    Cycle(usize),
}

/// The factors of `σ` with their roles, leftmost first.
pub fn tagged_factors(d: &ChordDiagram) -> Vec<(FactorRole, Vec<usize>)> {
    // (segment, kind, tiebreak, chord): heads sort before tails on a segment,
    // and among heads the innermost chord comes first.
    let mut events: Vec<(usize, u8, isize, usize)> = Vec::new();
    for (l, c) in d.chords().iter().enumerate() {
        events.push((c.i, 1, 0, l));
        events.push((c.j, 0, -(c.i as isize), l));
    }
    events.sort();
    let mut out = Vec::new();
    for &(_, kind, _, l) in &events {
        let c = d.chord(l);
        if kind == 1 {
            out.push((FactorRole::Tail(l), vec![c.i, d.chord(d.sticky_last(l)).i + 1]));
        } else {
            let q = match d.parent(l) {
                None => d.n(),
                Some(h) => d.chord(h).i + 1,
            };
            out.push((FactorRole::Head(l), vec![c.i + 1, q]));
        }
    }
    let heads: Vec<usize> = events.iter().filter(|e| e.1 == 0).map(|e| e.3).collect();
    for &l in heads.iter().rev() {
        let c = d.chord(l);
        out.push((FactorRole::Cycle(l), vec![c.i + 1, c.j, c.j + 1]));
    }
    out
}

/// The 2-cycles over endpoints followed by the head 3-cycles, leftmost
/// factor first.
pub fn algorithmic_factors(d: &ChordDiagram) -> Vec<Vec<usize>> {
    tagged_factors(d).into_iter().map(|(_, f)| f).collect()
}

/// The algorithmic permutation `σ`.
pub fn algorithmic_permutation(d: &ChordDiagram) -> DecoratedPermutation {
    DecoratedPermutation::from_cycles(d.n(), &algorithmic_factors(d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_three_two_line() {
        let d = ChordDiagram::from_pairs(14, &[(1, 11), (3, 6), (8, 10)]).unwrap();
        let p = to_permutation(&d);
        assert_eq!(p.images(), &[2, 11, 4, 6, 5, 7, 1, 9, 10, 12, 3, 14, 13, 8]);
        assert_eq!(p.anti_excedances(), vec![1, 3, 8]);
        let f = algorithmic_factors(&d);
        let want: Vec<Vec<usize>> = vec![
            vec![1, 2],
            vec![3, 4],
            vec![4, 2],
            vec![8, 9],
            vec![9, 2],
            vec![2, 14],
            vec![2, 11, 12],
            vec![9, 10, 11],
            vec![4, 6, 7],
        ];
        assert_eq!(f, want);
        assert_eq!(algorithmic_permutation(&d), p);
    }

    #[test]
    fn sticky_example_factors() {
        let d = ChordDiagram::from_pairs(8, &[(1, 6), (2, 4), (4, 6)]).unwrap();
        let f = algorithmic_factors(&d);
        assert_eq!(f[0], vec![1, 3]);
        assert_eq!(f[6..], [vec![2, 6, 7], vec![5, 6, 7], vec![3, 4, 5]]);
        assert_eq!(algorithmic_permutation(&d), to_permutation(&d));
    }

    #[test]
    fn empty_is_identity() {
        let d = ChordDiagram::empty(7);
        assert_eq!(to_permutation(&d), DecoratedPermutation::identity(&[1, 2, 3, 4, 5, 6, 7]));
    }
}
