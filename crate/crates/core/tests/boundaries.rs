use bcfw::boundaries::{
    boundary_permutation, boundary_point, check_all, classify, inverse_direction, is_short, pair_boundaries, sa_item,
    sa_witness, shift, Classification, Dir, End, ShiftKind,
};
use bcfw::chords::{enumerate, to_permutation};
use bcfw::domino::{same_end_pairs, var_set, VarElement};
use bcfw::ChordDiagram;
use num_traits::Zero;
use proptest::prelude::*;

fn d(n: usize, p: &[(usize, usize)]) -> ChordDiagram {
    ChordDiagram::from_pairs(n, p).unwrap()
}

fn all_up_to(n: usize) -> Vec<ChordDiagram> {
    (5..=n).flat_map(|m| (1..=m - 4).flat_map(move |k| enumerate(m, k))).collect()
}

const MOVES: [(End, Dir); 4] =
    [(End::Tail, Dir::Left), (End::Tail, Dir::Right), (End::Head, Dir::Left), (End::Head, Dir::Right)];

#[test]
fn every_defined_shift_is_valid_and_undone() {
    let mut defined = 0;
    for a in all_up_to(8) {
        for l in 0..a.k() {
            for (end, dir) in MOVES {
                let Ok(r) = shift(&a, l, end, dir) else { continue };
                defined += 1;
                assert_eq!(r.target.k(), a.k());
                r.target.validate().unwrap();
                assert!(enumerate(a.n(), a.k()).contains(&r.target));
                let (e2, d2) = inverse_direction(r.kind);
                let back = shift(&r.target, r.index, e2, d2).unwrap_or_else(|e| panic!("{a} {l} {end:?} {dir:?}: {e}"));
                assert_eq!(back.target, a, "{:?}", r.kind);
                assert_eq!(back.index, l);
            }
        }
    }
    assert!(defined > 0);
}

#[test]
fn involutions_in_each_listed_direction() {
    // each defined shift is undone by the listed opposite one
    for a in all_up_to(8) {
        for l in 0..a.k() {
            let undo = |end, dir, e2, d2| {
                if let Ok(r) = shift(&a, l, end, dir) {
                    assert_eq!(shift(&r.target, r.index, e2, d2).unwrap().target, a);
                }
            };
            undo(End::Tail, Dir::Left, End::Tail, Dir::Right);
            undo(End::Head, Dir::Right, End::Head, Dir::Left);
            if is_short(&a, l) {
                undo(End::Tail, Dir::Right, End::Head, Dir::Left);
                undo(End::Head, Dir::Left, End::Tail, Dir::Right);
            } else {
                undo(End::Tail, Dir::Right, End::Tail, Dir::Left);
                // a sticky same-end child makes the chord short; the tail undoes that
                match shift(&a, l, End::Head, Dir::Left) {
                    Ok(r) if matches!(r.kind, ShiftKind::HeadLeftSticky | ShiftKind::HeadLeftStickyRolling) => {
                        let head = shift(&r.target, r.index, End::Head, Dir::Right);
                        assert!(head.map_or(true, |h| h.target != a));
                        assert_eq!(shift(&r.target, r.index, End::Tail, Dir::Right).unwrap().target, a);
                    }
                    Ok(r) => assert_eq!(shift(&r.target, r.index, End::Head, Dir::Right).unwrap().target, a),
                    Err(_) => {}
                }
            }
        }
    }
}

#[test]
fn rolled_diagram() {
    let a = d(9, &[(1, 5), (2, 5), (3, 5)]);
    let r = shift(&a, 2, End::Tail, Dir::Right).unwrap();
    assert_eq!(r.kind, ShiftKind::TailRightRolling);
    assert_eq!(r.target, d(9, &[(1, 4), (2, 4), (4, 6)]));
    let r = shift(&d(9, &[(1, 5), (3, 5), (5, 7)]), 1, End::Tail, Dir::Right).unwrap();
    assert_eq!(r.kind, ShiftKind::TailRightRollingSibling);
    assert_eq!(r.target, d(9, &[(1, 4), (4, 7), (5, 7)]));
}

#[test]
fn blocked_shifts_say_why() {
    let e = shift(&d(8, &[(1, 6), (2, 6)]), 1, End::Tail, Dir::Left).unwrap_err();
    assert!(e.to_string().contains("starts at (h-1, h)"), "{e}");
    assert!(shift(&d(8, &[(1, 6), (2, 6)]), 1, End::Head, Dir::Right).is_err());
}

#[test]
fn var_exclusions() {
    for a in all_up_to(8) {
        let v = var_set(&a);
        for &x in &v {
            match x {
                VarElement::Eta(i, j) => {
                    assert!(!v.contains(&VarElement::DeltaHat(i)) && !v.contains(&VarElement::GammaHat(j)));
                    assert_eq!(a.parent(j), Some(i));
                }
                VarElement::Theta(i, j) => {
                    assert!(!v.contains(&VarElement::GammaHat(i)) && !v.contains(&VarElement::Beta(j)));
                    assert_eq!(a.parent(i), a.parent(j));
                }
                _ => {}
            }
        }
        // grandchildren with the same end are not in Var
        for (i, j) in same_end_pairs(&a) {
            assert_eq!(v.contains(&VarElement::Eta(i, j)), a.parent(j) == Some(i));
        }
    }
}

#[test]
fn single_chord_var() {
    let a = d(7, &[(2, 4)]);
    let want = [
        VarElement::Alpha(0),
        VarElement::Beta(0),
        VarElement::GammaHat(0),
        VarElement::DeltaHat(0),
        VarElement::EpsilonHat(0),
    ];
    assert_eq!(var_set(&a), want);
}

#[test]
fn permutation_edits() {
    let a = d(8, &[(2, 5)]);
    // π_a = (2 3)(3 8)(3 5 6); α omits the first factor, γ̂ shortens the cycle to (3 6)
    assert_eq!(to_permutation(&a).images(), &[1, 3, 5, 4, 6, 8, 7, 2]);
    assert_eq!(boundary_permutation(&a, VarElement::Alpha(0)).unwrap().images(), &[1, 2, 5, 4, 6, 8, 7, 3]);
    assert_eq!(boundary_permutation(&a, VarElement::GammaHat(0)).unwrap().images(), &[1, 3, 6, 4, 5, 8, 7, 2]);
    assert!(boundary_permutation(&d(8, &[(1, 5), (2, 5)]), VarElement::Beta(1)).is_err());
}

#[test]
fn sticky_chain_edits_match_boundary_points() {
    // α of the last chord in a sticky chain, β of a chord with a sticky child
    for (a, star) in [
        (d(8, &[(1, 5), (2, 5)]), VarElement::Alpha(1)),
        (d(7, &[(1, 5), (2, 5), (3, 5)]), VarElement::Alpha(2)),
        (d(7, &[(1, 4), (2, 4)]), VarElement::Beta(0)),
        (d(8, &[(1, 6), (2, 6), (3, 6), (4, 6)]), VarElement::Beta(0)),
    ] {
        let (m, _) = boundary_point(&a, star, 1).unwrap();
        assert_eq!(boundary_permutation(&a, star).unwrap(), m.matrix_permutation(), "{a} {star}");
    }
}

#[test]
fn head_right_pairs_gamma_with_delta() {
    let a = d(9, &[(1, 7), (3, 5)]);
    let c = classify(&a, VarElement::GammaHat(1)).unwrap();
    let Classification::Paired { target, star, shift: kind } = c else { panic!("{c:?}") };
    assert_eq!((target.clone(), star, kind), (d(9, &[(1, 7), (3, 6)]), VarElement::DeltaHat(1), ShiftKind::HeadRight));
    assert_eq!(
        boundary_permutation(&a, VarElement::GammaHat(1)).unwrap(),
        boundary_permutation(&target, star).unwrap()
    );
}

#[test]
fn short_alpha_before_a_chord_pairs_with_eta() {
    let a = d(9, &[(2, 4), (4, 6)]);
    let c = classify(&a, VarElement::Alpha(0)).unwrap();
    let Classification::Paired { target, star, .. } = c else { panic!("{c:?}") };
    assert_eq!(target, d(9, &[(3, 6), (4, 6)]));
    assert_eq!(star, VarElement::Eta(0, 1));
    assert_eq!(boundary_permutation(&a, VarElement::Alpha(0)).unwrap(), boundary_permutation(&target, star).unwrap());
}

#[test]
fn epsilon_is_always_sa() {
    for a in all_up_to(8) {
        for l in 0..a.k() {
            assert_eq!(sa_item(&a, VarElement::EpsilonHat(l)), Some(1));
        }
    }
}

#[test]
fn top_epsilon_witness_has_a_four_term_row() {
    let a = d(8, &[(2, 5)]);
    let m = sa_witness(&a, VarElement::EpsilonHat(0)).unwrap();
    let support: Vec<usize> = (1..=8).filter(|&c| !m.get(1, c).is_zero()).collect();
    assert_eq!(support, vec![2, 3, 5, 6]);
}

#[test]
fn last_gamma_witness_lives_on_the_last_columns() {
    let a = d(8, &[(3, 6)]);
    assert_eq!(sa_item(&a, VarElement::GammaHat(0)), Some(4));
    let m = sa_witness(&a, VarElement::GammaHat(0)).unwrap();
    let support: Vec<usize> = (1..=8).filter(|&c| !m.get(1, c).is_zero()).collect();
    assert_eq!(support, vec![3, 4, 7, 8]);
}

#[test]
fn every_sa_witness_up_to_seven() {
    for a in all_up_to(7) {
        for b in pair_boundaries(&a).unwrap() {
            if matches!(b.classification, Classification::Sa(_)) {
                sa_witness(&a, b.star).unwrap_or_else(|e| panic!("{a} {}: {e}", b.star));
            }
        }
    }
}

#[test]
fn exhaustive_with_boundary_points_up_to_eight() {
    for n in 5..=8 {
        for k in 1..=n - 4 {
            let r = check_all(n, k, true, 3);
            assert!(r.passed(), "{}", r.to_json());
        }
    }
}

#[test]
fn exhaustive_combinatorial_at_nine() {
    let mut paired = 0;
    for k in 1..=5 {
        let r = check_all(9, k, false, 0);
        assert!(r.passed(), "{}", r.to_json());
        paired += r.paired();
    }
    assert_eq!(paired, 48 + 240 + 240 + 48);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pairing_is_an_involution_on_boundaries(n in 6usize..=10, pick in any::<prop::sample::Index>(), s in any::<prop::sample::Index>()) {
        let all: Vec<ChordDiagram> = (1..=n - 4).flat_map(|k| enumerate(n, k)).collect();
        let a = pick.get(&all);
        let v = var_set(a);
        let star = *s.get(&v);
        match classify(a, star).unwrap() {
            Classification::Sa(_) => {}
            Classification::Paired { target, star: s2, .. } => {
                prop_assert_eq!(
                    boundary_permutation(a, star).unwrap(),
                    boundary_permutation(&target, s2).unwrap()
                );
                let back = classify(&target, s2).unwrap();
                let ok = matches!(back, Classification::Paired { target: t, star: s3, .. } if t == *a && s3 == star);
                prop_assert!(ok);
            }
        }
    }
}
