use bcfw::ampl::{
    amap, boundary_index_sets, check_middle_decomposition, favorite, in_s_partial_a, pieces, positive_point,
    sample_piece, twistor, twistor_via_plueckers, Functionary, Piece, PositiveZ, Twistors,
};
use bcfw::chords::enumerate;
use bcfw::domino::sample_cell;
use bcfw::matrix::{combinations, rank_of, IndexSet};
use bcfw::rational::{sign, Q};
use bcfw::rng::{positive_rational, seeded};
use bcfw::{ChordDiagram, RationalMatrix};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn all_diagrams(min_n: usize, max_n: usize) -> Vec<ChordDiagram> {
    (min_n..=max_n).flat_map(|n| (0..=n - 4).flat_map(move |k| enumerate(n, k))).collect()
}

fn parity(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Rank of the columns of `c` outside `idx`.
fn complement_rank(c: &RationalMatrix, idx: &[usize]) -> usize {
    let cols: Vec<Vec<Q>> = c
        .cols()
        .iter()
        .enumerate()
        .filter(|(_, col)| !idx.contains(col))
        .map(|(p, _)| c.data().iter().map(|r| r[p].clone()).collect())
        .collect();
    rank_of(&cols)
}

#[test]
fn twistors_match_cauchy_binet() {
    for d in all_diagrams(5, 7) {
        let c = sample_cell(&d, 3);
        for z in PositiveZ::panel(d.n(), d.k(), 2, 11) {
            let y = amap(&c, &z).unwrap();
            let idx: Vec<usize> = (1..=d.n()).collect();
            for s in combinations(&idx, 4) {
                let a = [s[0], s[1], s[2], s[3]];
                assert_eq!(twistor(&y, &z, &a), twistor_via_plueckers(&c, &z, &a), "{d} {a:?}");
                let b = [s[2], s[0], s[3], s[1]];
                assert_eq!(twistor(&y, &z, &b), twistor_via_plueckers(&c, &z, &b), "{d} {b:?}");
            }
        }
    }
}

#[test]
fn twistors_are_alternating() {
    let d = ChordDiagram::from_pairs(8, &[(1, 3), (4, 6)]).unwrap();
    let c = sample_cell(&d, 8);
    let z = PositiveZ::perturbed(8, 2, 4);
    let y = amap(&c, &z).unwrap();
    let mut t = Twistors::new(&y, &z);
    for a in 1..=8 {
        for b in 1..=8 {
            for e in 1..=8 {
                for f in 1..=8 {
                    let v = t.get(&[a, b, e, f]);
                    if [a, b, e, f].iter().enumerate().any(|(p, x)| [a, b, e, f][p + 1..].contains(x)) {
                        assert!(v.is_zero());
                    } else {
                        assert_eq!(v, -t.get(&[b, a, e, f]));
                        assert_eq!(v, twistor(&y, &z, &[a, b, e, f]));
                    }
                }
            }
        }
    }
}

#[test]
fn row_scaling_keeps_the_twistor_signs() {
    let d = ChordDiagram::from_pairs(7, &[(1, 3), (3, 5)]).unwrap();
    let c = sample_cell(&d, 1);
    let mut c2 = c.clone();
    c2.scale_row(2, &Q::from_integer(7.into())).unwrap();
    let z = PositiveZ::standard(7, 2);
    let (y, y2) = (amap(&c, &z).unwrap(), amap(&c2, &z).unwrap());
    for (s, _) in boundary_index_sets(7) {
        assert_eq!(twistor(&y2, &z, &s), twistor(&y, &z, &s) * Q::from_integer(7.into()));
    }
}

/// Nonnegative points on and off the boundary: BCFW cells, cells on fewer
/// markers padded with a zero column, and a cell with one row shifted onto
/// four consecutive columns.
fn nonnegative_points(n: usize, k: usize, seed: u64) -> Vec<RationalMatrix> {
    let mut out: Vec<RationalMatrix> = enumerate(n, k).iter().take(12).map(|d| sample_cell(d, seed)).collect();
    if n > k + 4 {
        for d in enumerate(n - 1, k).iter().take(6) {
            let m = sample_cell(d, seed);
            for h in [1, n / 2, n] {
                let shifted = m.relabel_cols(|c| if c >= h { c + 1 } else { c }).unwrap();
                out.push(shifted.pre(h).unwrap());
            }
        }
    }
    let mut rng = seeded(seed);
    out.push(positive_point(k, &IndexSet::range(1, n), &mut rng));
    if k >= 1 {
        // one unit vector in the row space supported on {2,3,4,5}
        let mut m = positive_point(k, &IndexSet::range(1, n), &mut rng);
        for c in 1..=n {
            let v = if (2..=5).contains(&c) { positive_rational(&mut rng) } else { Q::zero() };
            m.set(1, c, v).unwrap();
        }
        if m.all_plueckers().iter().all(|(_, v)| !v.is_negative()) && m.rank() == k {
            out.push(m);
        }
    }
    out
}

#[test]
fn boundary_twistor_signs_and_equality_case() {
    let mut zeros = 0;
    for (n, k) in [(5, 1), (6, 1), (6, 2), (7, 1), (7, 2), (7, 3), (8, 2), (8, 3)] {
        for c in nonnegative_points(n, k, 21) {
            assert!(c.all_plueckers().iter().all(|(_, v)| !v.is_negative()));
            for z in PositiveZ::panel(n, k, 3, 5) {
                let y = amap(&c, &z).unwrap();
                for (s, wrap) in boundary_index_sets(n) {
                    let v = twistor(&y, &z, &s);
                    let expect = if wrap { parity(k) } else { 1 };
                    let sg = sign(&v);
                    assert!(sg == 0 || sg == expect, "{n} {k} {s:?}");
                    assert_eq!(sg == 0, complement_rank(&c, &s) < k, "{n} {k} {s:?}");
                    if sg == 0 {
                        zeros += 1;
                        assert!(in_s_partial_a(&c).is_some());
                    }
                }
            }
        }
    }
    assert!(zeros > 0, "no boundary point exercised the equality case");
}

#[test]
fn interior_points_are_off_the_boundary() {
    for d in all_diagrams(5, 8) {
        let c = sample_cell(&d, 7);
        assert_eq!(in_s_partial_a(&c), None, "{d}");
    }
}

#[test]
fn vanishing_top_chord_entry_lands_in_the_boundary() {
    let d = ChordDiagram::from_pairs(8, &[(1, 3), (4, 6)]).unwrap();
    let mut c = sample_cell(&d, 2);
    // zero the n-entry of the first top chord's row
    c.set(1, 8, Q::zero()).unwrap();
    assert!(in_s_partial_a(&c).is_some());
}

#[test]
fn top_chord_twistor_signs() {
    for d in all_diagrams(5, 8) {
        let (n, k) = (d.n(), d.k());
        let c = sample_cell(&d, 13);
        for z in PositiveZ::panel(n, k, 3, 1) {
            let y = amap(&c, &z).unwrap();
            let mut t = Twistors::new(&y, &z);
            // boundary twistors, sorted index sets
            for (s, wrap) in boundary_index_sets(n) {
                assert_eq!(sign(&t.sorted(&s)), if wrap { parity(k) } else { 1 }, "{d} {s:?}");
            }
            for l0 in d.top_chords() {
                let ch = d.chord(l0);
                let l = l0 + 1;
                let below = d.below(l0);
                let a = [ch.i, ch.i + 1, ch.j, ch.j + 1, n];
                let want = [parity(k - l), parity(k - l + 1), parity(k - l - below), parity(k - l - below + 1), 1];
                for p in 0..5 {
                    let mut rest: Vec<usize> = a.iter().enumerate().filter(|&(q, _)| q != p).map(|(_, &x)| x).collect();
                    rest.sort_unstable();
                    let v = t.sorted(&[rest[0], rest[1], rest[2], rest[3]]);
                    assert_eq!(sign(&v), want[p], "{d}: chord {l}, omitted {}", a[p]);
                }
            }
        }
    }
}

/// Upper embedding `ι_{1;3,1}` of a positive point on `[n] ∖ {1}`.
fn upper(n: usize, k: usize, seed: u64) -> (RationalMatrix, Vec<Q>, Q) {
    let mut rng = seeded(seed);
    let t: Vec<Q> = (0..3).map(|_| positive_rational(&mut rng)).collect();
    let s = positive_rational(&mut rng);
    let c = positive_point(k - 1, &IndexSet::range(2, n), &mut rng).iota(1, &t, std::slice::from_ref(&s)).unwrap();
    (c, t, s)
}

/// Lower embedding `ι_{n-2;2,2}` of `pre_{n-1}` of a positive point.
fn lower(n: usize, k: usize, seed: u64) -> (RationalMatrix, Vec<Q>, Vec<Q>) {
    let mut rng = seeded(seed);
    let t: Vec<Q> = (0..2).map(|_| positive_rational(&mut rng)).collect();
    let s: Vec<Q> = (0..2).map(|_| positive_rational(&mut rng)).collect();
    let cols = IndexSet::new((1..=n).filter(|&c| c != n - 1 && c != n - 2).collect()).unwrap();
    let c = positive_point(k - 1, &cols, &mut rng).pre(n - 1).unwrap().iota(n - 2, &t, &s).unwrap();
    (c, t, s)
}

#[test]
fn embeddings_stay_nonnegative() {
    for (n, k) in [(6, 1), (7, 2), (8, 3), (9, 2)] {
        for seed in 0..4 {
            for c in [upper(n, k, seed).0, lower(n, k, seed).0] {
                assert!(c.all_plueckers().iter().all(|(_, v)| !v.is_negative()), "{n} {k}");
                assert_eq!(c.rank(), k);
            }
        }
    }
}

#[test]
fn warmup_promotion_keeps_its_sign() {
    // <3457> on pre_6 of a point on {2,3,4,5,7}, promoted through ι_{1;3,1}
    let f = Functionary::twistor([1, 2, 5, 6])
        .mul(&Functionary::twistor([3, 4, 5, 7]))
        .sub(&Functionary::twistor([1, 2, 5, 7]).mul(&Functionary::twistor([3, 4, 5, 6])));
    assert_eq!(f, favorite(6, 7, 1, 2, 3, 4, 5));
    // the rotated form agrees only modulo the Plücker relations
    let g = favorite(1, 2, 3, 4, 6, 7, 5);
    assert_ne!(f, g);
    // the base lives on five markers, so k - 1 <= 1
    for k in 1..=2 {
        for seed in 0..5 {
            let mut rng = seeded(seed);
            let t: Vec<Q> = (0..3).map(|_| positive_rational(&mut rng)).collect();
            let s = [positive_rational(&mut rng)];
            let cols = IndexSet::new(vec![2, 3, 4, 5, 7]).unwrap();
            let base = positive_point(k - 1, &cols, &mut rng).pre(6).unwrap();
            let c = base.iota(1, &t, &s).unwrap();
            for z in PositiveZ::panel(7, k, 3, seed) {
                let y = amap(&c, &z).unwrap();
                assert!(f.eval(&y, &z).is_positive(), "k = {k}");
                assert_eq!(g.eval(&y, &z), f.eval(&y, &z));
            }
        }
    }
}

#[test]
fn upper_embedding_proportional_vector_and_sign() {
    for (n, k) in [(6, 1), (7, 1), (7, 2), (8, 2), (8, 3)] {
        for seed in 0..4 {
            let (c, t, s) = upper(n, k, seed);
            for z in PositiveZ::panel(n, k, 3, seed + 40) {
                let y = amap(&c, &z).unwrap();
                let mut tw = Twistors::new(&y, &z);
                let sg = |e: usize| Q::from_integer(parity(e).into());
                let v = [
                    tw.get(&[1, 2, n - 1, n]),
                    -tw.get(&[1, 2, n - 2, n]),
                    tw.get(&[1, 2, n - 2, n - 1]),
                    sg(k - 1) * tw.get(&[2, n - 2, n - 1, n]),
                    sg(k) * tw.get(&[1, n - 2, n - 1, n]),
                ];
                let want = [&t[0] * &t[1] * &t[2], &t[0] * &t[1], t[0].clone(), Q::from_integer(1.into()), s.clone()];
                assert!(v[3].is_positive());
                for a in 0..5 {
                    assert_eq!(&v[a] / &v[3], want[a], "{n} {k} entry {a}");
                }
                for j in 2..=n - 4 {
                    let f = favorite(1, 2, j, j + 1, n - 2, n - 1, n);
                    assert!(f.eval_with(&mut tw).is_negative(), "{n} {k} j = {j}");
                }
            }
        }
    }
}

#[test]
fn lower_embedding_proportional_vector_and_sign() {
    for (n, k) in [(6, 1), (7, 1), (7, 2), (8, 2), (9, 3)] {
        for seed in 0..4 {
            let (c, t, s) = lower(n, k, seed);
            for z in PositiveZ::panel(n, k, 3, seed + 70) {
                let y = amap(&c, &z).unwrap();
                let mut tw = Twistors::new(&y, &z);
                let v = [
                    tw.get(&[n - 3, n - 2, n - 1, n]),
                    -tw.get(&[n - 4, n - 2, n - 1, n]),
                    tw.get(&[n - 4, n - 3, n - 1, n]),
                    -tw.get(&[n - 4, n - 3, n - 2, n]),
                    tw.get(&[n - 4, n - 3, n - 2, n - 1]),
                ];
                let want = [&t[1] * &t[0], t[0].clone(), Q::from_integer(1.into()), s[0].clone(), &s[0] * &s[1]];
                assert!(v[2].is_positive());
                for a in 0..5 {
                    assert_eq!(&v[a] / &v[2], want[a], "{n} {k} entry {a}");
                }
                for j in 1..=n - 5 {
                    let f = favorite(j, j + 1, n - 4, n - 3, n - 2, n - 1, n);
                    assert!(f.eval_with(&mut tw).is_positive(), "{n} {k} j = {j}");
                }
            }
        }
    }
}

#[test]
fn favorite_forms_agree() {
    let (i, i2, j, j2, h, h2, l) = (1, 2, 4, 5, 7, 8, 9);
    let forms = [
        favorite(i, i2, j, j2, h, h2, l),
        favorite(i, i2, h, h2, j, j2, l).neg(),
        favorite(j, j2, h, h2, i, i2, l),
        favorite(h, h2, j, j2, i, i2, l).neg(),
        favorite(h, h2, i, i2, j, j2, l),
        favorite(j, j2, i, i2, h, h2, l).neg(),
    ];
    let mut rng = seeded(77);
    for s in 0..20 {
        let k = 1 + s % 3;
        let c = positive_point(k, &IndexSet::range(1, 9), &mut rng);
        let z = PositiveZ::perturbed(9, k, s as u64);
        let y = amap(&c, &z).unwrap();
        let v0 = forms[0].eval(&y, &z);
        for f in &forms[1..] {
            assert_eq!(f.eval(&y, &z), v0);
        }
    }
}

#[test]
fn middle_pieces_are_nonnegative_with_the_right_dimension_count() {
    for (n, k) in [(7, 1), (8, 2), (9, 2), (9, 3), (10, 3)] {
        let mut rng = seeded(n as u64 * 10 + k as u64);
        for p in pieces(n, k) {
            let c = sample_piece(p, n, k, &mut rng).unwrap();
            assert_eq!(c.rank(), k, "{p}");
            assert!(c.all_plueckers().iter().all(|(_, v)| !v.is_negative()), "{n} {k} {p}");
            if let Piece::Mid { i, .. } = p {
                if i > 1 {
                    assert_eq!(c.row_support(p_row(p)).unwrap(), vec![i, i + 1, n - 2, n - 1, n]);
                }
            }
        }
    }
}

fn p_row(p: Piece) -> usize {
    match p {
        Piece::Mid { k1, .. } => k1 + 1,
        Piece::Pre => unreachable!(),
    }
}

#[test]
fn middle_decomposition_signatures() {
    for (n, k) in [(7, 1), (8, 2), (9, 2)] {
        let panel = PositiveZ::panel(n, k, 3, 100);
        let r = check_middle_decomposition(n, k, &panel, 5, 9).unwrap();
        for p in &r.pieces {
            assert!(p.violations.is_empty(), "{n} {k} {}: {:?}", p.piece, p.violations);
        }
        assert!(r.undistinguished.is_empty(), "{:?}", r.undistinguished);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn cauchy_binet_on_positive_points(k in 1usize..=3, extra in 0usize..=2, seed in any::<u64>()) {
        let n = k + 4 + extra;
        let mut rng = seeded(seed);
        let c = positive_point(k, &IndexSet::range(1, n), &mut rng);
        let z = PositiveZ::perturbed(n, k, seed);
        let y = amap(&c, &z).unwrap();
        let idx: Vec<usize> = (1..=n).collect();
        for s in combinations(&idx, 4) {
            let a = [s[3], s[1], s[0], s[2]];
            prop_assert_eq!(twistor(&y, &z, &a), twistor_via_plueckers(&c, &z, &a));
        }
    }

    #[test]
    fn text_format_roundtrips(a in 1usize..6, b in 1usize..6, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let f = favorite(a, a + 1, a + 3, a + 4, 10, 11, 12)
            .scale(&positive_rational(&mut rng))
            .add(&Functionary::twistor([b, b + 2, 8, 12]).mul(&Functionary::twistor([1, 2, 3, 12])));
        prop_assert_eq!(Functionary::from_text(&f.to_text()).unwrap(), f.clone());
        prop_assert_eq!(Functionary::from_json(&f.to_json()).unwrap(), f);
    }
}
