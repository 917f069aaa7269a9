//! Fixed worked examples: diagrams with their encodings and matrices, and
//! the promotions through the upper and lower embeddings.

use serde_json::{json, Value};

use super::{CriterionReport, Tally, VerifyConfig};
use crate::ampl::{amap, favorite, positive_point, Functionary, PositiveZ, Twistors};
use crate::chords::{
    algorithmic_factors, diagram_to_oplus, diagram_to_walks, oplus_to_permutation, to_permutation, walks_to_diagram,
    LatticeWalkPair,
};
use crate::domino::{
    apply_ops, build_domino_matrix, check_sign_rules, construct_matrix, construction_ops, epsilon_sign,
    sample_assignment, sample_cell, ConstructionParams, DominoAssignment, Op, Param,
};
use crate::matrix::IndexSet;
use crate::permutation::DecoratedPermutation;
use crate::rational::{q, sign, Q};
use crate::rng::{positive_rational, seeded};
use crate::ChordDiagram;

fn eq_check<T: PartialEq + std::fmt::Debug>(t: &mut Tally, example: &str, what: &str, got: T, want: T) {
    t.check(
        got == want,
        || json!({"example": example, "check": what, "got": format!("{got:?}"), "expected": format!("{want:?}")}),
    );
}

fn cycles(c: &[&[usize]]) -> Vec<Vec<usize>> {
    c.iter().map(|x| x.to_vec()).collect()
}

/// Horizontal steps in each row of a walk with the given vertical steps.
fn horizontal(len: usize, vertical: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    let mut prev = 0;
    for &v in vertical {
        out.push(v - prev - 1);
        prev = v;
    }
    out.push(len - prev);
    out
}

fn three_chords() -> ChordDiagram {
    ChordDiagram::from_pairs(14, &[(1, 11), (3, 6), (8, 10)]).expect("valid")
}

fn three_chord_permutation(t: &mut Tally) {
    let d = three_chords();
    let p = to_permutation(&d);
    let name = "n=14 permutation";
    eq_check(
        t,
        name,
        "five-cycles",
        p.clone(),
        DecoratedPermutation::from_cycles(14, &cycles(&[&[1, 2, 11, 12, 14], &[3, 4, 6, 7, 14], &[8, 9, 10, 11, 14]])),
    );
    eq_check(t, name, "two-line", p.images().to_vec(), vec![2, 11, 4, 6, 5, 7, 1, 9, 10, 12, 3, 14, 13, 8]);
    eq_check(t, name, "anti-excedances", p.anti_excedances(), vec![1, 3, 8]);
    let want: Vec<Vec<usize>> =
        cycles(&[&[1, 2], &[3, 4], &[4, 2], &[8, 9], &[9, 2], &[2, 14], &[2, 11, 12], &[9, 10, 11], &[4, 6, 7]]);
    eq_check(t, name, "algorithmic factors", algorithmic_factors(&d), want);
}

fn three_chord_walks(t: &mut Tally) {
    let name = "n=14 walk pair";
    let w = LatticeWalkPair { n: 14, a_vertical: vec![2, 8, 10], b_vertical: vec![1, 3, 8] };
    eq_check(t, name, "a steps", w.a_horizontal(), vec![1, 5, 1, 0]);
    eq_check(t, name, "a steps, recounted", horizontal(10, &w.a_vertical), vec![1, 5, 1, 0]);
    eq_check(t, name, "b steps", horizontal(10, &w.b_vertical), vec![0, 1, 4, 2]);
    eq_check(t, name, "Phi", walks_to_diagram(&w).ok(), Some(three_chords()));
    eq_check(t, name, "inverse of Phi", diagram_to_walks(&three_chords()), w);
}

fn three_chord_oplus(t: &mut Tally) {
    let name = "n=14 oplus diagram";
    let o = diagram_to_oplus(&three_chords());
    eq_check(t, name, "rows", o.row_strings(), vec!["+O++OOOOOO+".to_string(), "+OOOOO++O+".into(), "+OO+++".into()]);
    eq_check(t, name, "row labels", o.row_labels.clone(), vec![1, 3, 8]);
    eq_check(t, name, "column labels", o.column_labels.clone(), vec![14, 13, 12, 11, 10, 9, 7, 6, 5, 4, 2]);
    eq_check(t, name, "filling rules", o.validate().is_ok(), true);
    eq_check(t, name, "pipe dream", oplus_to_permutation(&o).ok(), Some(to_permutation(&three_chords())));
}

/// Distinct primes, so that each displayed entry is a distinct value.
fn prime_params(k: usize) -> ConstructionParams {
    let ps = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let take = |o: usize| (0..k).map(|l| q(ps[o * k + l])).collect::<Vec<Q>>();
    ConstructionParams::new(take(0), take(1), take(2), take(3)).expect("k entries each")
}

/// The parameter sets the displayed matrices are evaluated at.
fn param_sets(k: usize) -> Vec<ConstructionParams> {
    let mut v = vec![prime_params(k)];
    v.extend((0..3).map(|s| ConstructionParams::from_seed(k, 900 + s)));
    v
}

/// Runs the construction up to and including the first operation matching `stop`.
fn partial(d: &ChordDiagram, p: &ConstructionParams, stop: impl Fn(&Op) -> bool) -> Option<crate::RationalMatrix> {
    let ops = construction_ops(d);
    let cut = ops.iter().position(stop)?;
    apply_ops(d.n(), &ops[..=cut], p).ok()
}

fn rows_of(m: &crate::RationalMatrix) -> Vec<Vec<Q>> {
    m.data().to_vec()
}

fn three_chord_construction(t: &mut Tally) {
    let name = "n=14 construction";
    let d = three_chords();
    for p in param_sets(3) {
        let (s, u, v, w) = (&p.s, &p.u, &p.v, &p.w);
        let z = || q(0);
        let one = || q(1);
        let m = partial(&d, &p, |o| *o == Op::Y { col: 14, chord: 0, param: Param::S });
        eq_check(
            t,
            name,
            "columns after head(c1)",
            m.as_ref().map(|m| m.cols().as_slice().to_vec()),
            Some(vec![2, 11, 12, 13, 14]),
        );
        eq_check(
            t,
            name,
            "after head(c1)",
            m.as_ref().map(rows_of),
            Some(vec![vec![one(), v[0].clone(), &w[0] * &v[0], z(), s[0].clone()]]),
        );
        let m = partial(&d, &p, |o| *o == Op::Y { col: 8, chord: 2, param: Param::U });
        eq_check(
            t,
            name,
            "columns after tail(c3)",
            m.as_ref().map(|m| m.cols().as_slice().to_vec()),
            Some(vec![2, 8, 9, 10, 11, 12, 13, 14]),
        );
        eq_check(
            t,
            name,
            "after tail(c3)",
            m.as_ref().map(rows_of),
            Some(vec![
                vec![one(), z(), z(), z(), -v[0].clone(), -(&w[0] * &v[0]), z(), -s[0].clone()],
                vec![s[2].clone(), u[2].clone(), one(), v[2].clone(), &w[2] * &v[2], z(), z(), z()],
            ]),
        );
        let mut want = vec![vec![z(); 14]; 3];
        want[0][0] = u[0].clone();
        want[0][1] = one();
        want[0][10] = v[0].clone();
        want[0][11] = &w[0] * &v[0];
        want[0][13] = s[0].clone();
        want[1][0] = &u[0] * &s[1];
        want[1][1] = s[1].clone();
        want[1][2] = u[1].clone();
        want[1][3] = one();
        want[1][5] = v[1].clone();
        want[1][6] = &w[1] * &v[1];
        want[2][0] = -(&u[0] * &s[2]);
        want[2][1] = -s[2].clone();
        want[2][7] = u[2].clone();
        want[2][8] = one();
        want[2][9] = v[2].clone();
        want[2][10] = &w[2] * &v[2];
        eq_check(t, name, "final matrix", construct_matrix(&d, &p).ok().map(|m| rows_of(&m)), Some(want));
    }
}

fn sticky_construction(t: &mut Tally) {
    let name = "n=8 sticky construction";
    let d = ChordDiagram::from_pairs(8, &[(1, 6), (2, 4), (4, 6)]).expect("valid");
    for p in param_sets(3) {
        let (s, u, v, w) = (&p.s, &p.u, &p.v, &p.w);
        let z = || q(0);
        let one = || q(1);
        let cols = |m: &Option<crate::RationalMatrix>| m.as_ref().map(|m| m.cols().as_slice().to_vec());
        let m = partial(&d, &p, |o| matches!(o, Op::Y { chord: 0, param: Param::S, .. }));
        eq_check(t, name, "columns after head(c1)", cols(&m), Some(vec![2, 6, 7, 8]));
        eq_check(
            t,
            name,
            "after head(c1)",
            m.as_ref().map(rows_of),
            Some(vec![vec![one(), v[0].clone(), &w[0] * &v[0], s[0].clone()]]),
        );
        let m = partial(&d, &p, |o| *o == Op::Y { col: 4, chord: 2, param: Param::U });
        eq_check(t, name, "columns after tail(c3)", cols(&m), Some(vec![2, 4, 5, 6, 7, 8]));
        eq_check(
            t,
            name,
            "after tail(c3)",
            m.as_ref().map(rows_of),
            Some(vec![
                vec![one(), z(), z(), -v[0].clone(), -(&w[0] * &v[0]) - &w[2] * &v[0], -s[0].clone()],
                vec![s[2].clone(), u[2].clone(), one(), v[2].clone(), &w[2] * &v[2], z()],
            ]),
        );
        let m = partial(&d, &p, |o| matches!(o, Op::Y { chord: 1, param: Param::S, .. }));
        eq_check(t, name, "columns after head(c2)", cols(&m), Some(vec![2, 3, 4, 5, 6, 7, 8]));
        eq_check(
            t,
            name,
            "after head(c2)",
            m.as_ref().map(rows_of),
            Some(vec![
                vec![one(), z(), z(), z(), v[0].clone(), &w[0] * &v[0] + &w[2] * &v[0], s[0].clone()],
                vec![s[1].clone(), one(), v[1].clone(), &w[1] * &v[1], z(), z(), z()],
                vec![-s[2].clone(), z(), u[2].clone(), one() + &w[1] * &u[2], v[2].clone(), &w[2] * &v[2], z()],
            ]),
        );
        let want = vec![
            vec![u[0].clone(), one(), z(), z(), z(), v[0].clone(), &w[0] * &v[0] + &w[2] * &v[0], s[0].clone()],
            vec![&u[0] * &s[1], &s[1] + &u[1], one(), v[1].clone(), &w[1] * &v[1], z(), z(), z()],
            vec![
                -(&u[0] * &s[2]),
                -s[2].clone(),
                z(),
                u[2].clone(),
                one() + &w[1] * &u[2],
                v[2].clone(),
                &w[2] * &v[2],
                z(),
            ],
        ];
        let m = construct_matrix(&d, &p).ok();
        eq_check(t, name, "final matrix", m.as_ref().map(rows_of), Some(want));
        if let Some(m) = m {
            eq_check(t, name, "sign rules", check_sign_rules(&m, &d).is_ok(), true);
        }
    }
}

fn eight_chords() -> ChordDiagram {
    ChordDiagram::from_pairs(18, &[(1, 6), (2, 4), (4, 6), (6, 10), (7, 9), (10, 16), (11, 16), (13, 16)])
        .expect("valid")
}

/// The displayed domino matrix of the large example, in terms of `a`.
fn eight_chord_domino(a: &DominoAssignment) -> Vec<Vec<Q>> {
    let (al, be, ga, de, ep) = (&a.alpha, &a.beta, &a.gamma, &a.delta, &a.epsilon);
    let mut m = vec![vec![q(0); 18]; 8];
    let mut put = |r: usize, c: usize, v: Q| m[r - 1][c - 1] = v;
    put(1, 1, al[0].clone());
    put(1, 2, be[0].clone());
    put(1, 6, ga[0].clone());
    put(1, 7, de[0].clone());
    put(1, 18, ep[0].clone());
    put(2, 1, &ep[1] * &al[0]);
    put(2, 2, &ep[1] * &be[0] + &al[1]);
    put(2, 3, be[1].clone());
    put(2, 4, ga[1].clone());
    put(2, 5, de[1].clone());
    put(3, 1, &ep[2] * &al[0]);
    put(3, 2, &ep[2] * &be[0]);
    put(3, 4, al[2].clone());
    put(3, 5, be[2].clone());
    put(3, 6, ga[2].clone());
    put(3, 7, de[2].clone());
    put(4, 6, al[3].clone());
    put(4, 7, be[3].clone());
    put(4, 10, ga[3].clone());
    put(4, 11, de[3].clone());
    put(4, 18, ep[3].clone());
    put(5, 6, &ep[4] * &al[3]);
    put(5, 7, &ep[4] * &be[3] + &al[4]);
    put(5, 8, be[4].clone());
    put(5, 9, ga[4].clone());
    put(5, 10, de[4].clone());
    put(6, 10, al[5].clone());
    put(6, 11, be[5].clone());
    put(6, 16, ga[5].clone());
    put(6, 17, de[5].clone());
    put(6, 18, ep[5].clone());
    put(7, 10, &ep[6] * &al[5]);
    put(7, 11, &ep[6] * &be[5] + &al[6]);
    put(7, 12, be[6].clone());
    put(7, 16, ga[6].clone());
    put(7, 17, de[6].clone());
    put(8, 11, &ep[7] * &al[6]);
    put(8, 12, &ep[7] * &be[6]);
    put(8, 13, al[7].clone());
    put(8, 14, be[7].clone());
    put(8, 16, ga[7].clone());
    put(8, 17, de[7].clone());
    m
}

fn eight_chord_checks(t: &mut Tally) {
    let name = "n=18 diagram";
    let d = eight_chords();
    eq_check(t, name, "top chords", d.top_chords(), vec![0, 3, 5]);
    eq_check(t, name, "c2 sticks to c1", (d.is_sticky_child(1), d.parent(1)), (true, Some(0)));
    eq_check(t, name, "c2, c3 head-to-tail", d.head_to_tail_pairs().contains(&(1, 2)), true);
    eq_check(t, name, "same-end chain", (d.same_end_parent(6), d.same_end_parent(7)), (Some(5), Some(6)));
    let short: Vec<usize> = (0..8).filter(|&l| crate::boundaries::is_short(&d, l)).map(|l| l + 1).collect();
    eq_check(t, name, "short chords", short, vec![2, 3, 5]);

    let p = to_permutation(&d);
    let five: &[&[usize]] = &[
        &[1, 3, 8, 12, 18],
        &[2, 3, 5, 8, 18],
        &[4, 5, 8, 12, 18],
        &[6, 8, 12, 16, 18],
        &[7, 8, 9, 12, 18],
        &[10, 12, 16, 17, 18],
        &[11, 12, 16, 17, 18],
        &[13, 14, 16, 17, 18],
    ];
    eq_check(t, name, "five-cycles", p.clone(), DecoratedPermutation::from_cycles(18, &cycles(five)));
    eq_check(
        t,
        name,
        "two-line",
        p.images().to_vec(),
        vec![3, 8, 5, 12, 1, 18, 2, 9, 16, 6, 4, 17, 14, 7, 15, 10, 11, 13],
    );
    eq_check(t, name, "anti-excedances", p.anti_excedances(), vec![1, 2, 4, 6, 7, 10, 11, 13]);

    let o = diagram_to_oplus(&d);
    eq_check(t, name, "oplus column labels", o.column_labels.clone(), vec![18, 17, 16, 15, 14, 12, 9, 8, 5, 3]);
    eq_check(t, name, "oplus row labels", o.row_labels.clone(), vec![1, 2, 4, 6, 7, 10, 11, 13]);
    let rows = ["+OOOO+O+O+", "+OOOOOO+++", "+OOOO+O++", "+O+OO+O+", "+OOOO+++", "+++OO+", "+++OO+", "+++O+"];
    eq_check(t, name, "oplus rows", o.row_strings(), rows.iter().map(|s| s.to_string()).collect());
    eq_check(t, name, "pipe dream", oplus_to_permutation(&o).ok(), Some(p));

    // the epsilon signs of the template, then every entry of the displayed form
    let neg_eps: Vec<usize> = (0..8).filter(|&l| sign(&epsilon_sign(&d, l)) < 0).map(|l| l + 1).collect();
    eq_check(t, name, "negative epsilons", neg_eps, vec![1, 3]);
    let mut rng = seeded(18);
    for _ in 0..3 {
        let a = sample_assignment(&d, &mut rng);
        eq_check(
            t,
            name,
            "domino form",
            build_domino_matrix(&d, &a).ok().map(|m| rows_of(&m)),
            Some(eight_chord_domino(&a)),
        );
    }
    for seed in 0..3 {
        let Ok(a) = check_sign_rules(&sample_cell(&d, seed), &d) else {
            t.fail(json!({"example": name, "check": "sign rules", "seed": seed}));
            continue;
        };
        let neg = |xs: &[Q]| (0..8).filter(|&l| sign(&xs[l]) < 0).map(|l| l + 1).collect::<Vec<_>>();
        eq_check(
            t,
            name,
            "negative entries",
            (neg(&a.alpha), neg(&a.beta), neg(&a.gamma), neg(&a.delta), neg(&a.epsilon)),
            (vec![], vec![], vec![4, 7], vec![4, 7], vec![1, 3]),
        );
        let r = |l: usize| &a.delta[l - 1] / &a.gamma[l - 1];
        let b = |l: usize| &a.beta[l - 1] / &a.alpha[l - 1];
        let chains = [r(2) < b(3), r(3) < r(1) && r(1) < b(4), r(4) < b(6), r(8) < r(7) && r(7) < r(6)];
        eq_check(t, name, "ratio relations", chains, [true; 4]);
    }
}

pub fn example_regressions() -> CriterionReport {
    let mut t = Tally::default();
    three_chord_permutation(&mut t);
    three_chord_walks(&mut t);
    three_chord_oplus(&mut t);
    three_chord_construction(&mut t);
    sticky_construction(&mut t);
    eight_chord_checks(&mut t);
    t.report(3, "worked examples")
}

fn parity(e: usize) -> Q {
    q(if e.is_multiple_of(2) { 1 } else { -1 })
}

/// Upper embedding `ι_{1;3,1}` of a positive point on `[n] ∖ {1}`.
fn upper(n: usize, k: usize, seed: u64) -> Option<(crate::RationalMatrix, Vec<Q>, Q)> {
    let mut rng = seeded(seed);
    let t: Vec<Q> = (0..3).map(|_| positive_rational(&mut rng)).collect();
    let s = positive_rational(&mut rng);
    let c = positive_point(k - 1, &IndexSet::range(2, n), &mut rng).iota(1, &t, std::slice::from_ref(&s)).ok()?;
    Some((c, t, s))
}

/// Lower embedding `ι_{n-2;2,2}` of `pre_{n-1}` of a positive point.
fn lower(n: usize, k: usize, seed: u64) -> Option<(crate::RationalMatrix, Vec<Q>, Vec<Q>)> {
    let mut rng = seeded(seed);
    let t: Vec<Q> = (0..2).map(|_| positive_rational(&mut rng)).collect();
    let s: Vec<Q> = (0..2).map(|_| positive_rational(&mut rng)).collect();
    let cols = IndexSet::new((1..=n).filter(|&c| c != n - 1 && c != n - 2).collect()).ok()?;
    let c = positive_point(k - 1, &cols, &mut rng).pre(n - 1).ok()?.iota(n - 2, &t, &s).ok()?;
    Some((c, t, s))
}

fn tw(a: usize, b: usize, c: usize, d: usize) -> Functionary {
    Functionary::twistor([a, b, c, d])
}

/// Five signed twistors against the embedding parameters, up to one
/// positive factor.
fn proportional(t: &mut Tally, what: &str, v: [Q; 5], want: [Q; 5], unit: usize, ctx: impl Fn() -> Value) {
    let ok = sign(&v[unit]) > 0 && (0..5).all(|a| &v[a] * &want[unit] == &want[a] * &v[unit]);
    t.check(
        ok,
        || json!({"check": what, "context": ctx(), "twistors": v.iter().map(ToString::to_string).collect::<Vec<_>>()}),
    );
}

/// The promotion examples: the warm-up through the upper embedding, both
/// proportional-vector layouts at seven markers and the quadratic
/// promotions through the lower and upper embeddings.
pub fn promotion_identities(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    let seeds = cfg.seed..cfg.seed + cfg.samples.max(1) as u64;

    // warm-up: <3457> promoted through ι_{1;3,1}
    let f = tw(1, 2, 5, 6).mul(&tw(3, 4, 5, 7)).sub(&tw(1, 2, 5, 7).mul(&tw(3, 4, 5, 6)));
    eq_check(&mut t, "<3457> promoted", "favorite form", f.clone(), favorite(6, 7, 1, 2, 3, 4, 5));
    for k in 1..=2 {
        for seed in seeds.clone() {
            let mut rng = seeded(seed);
            let tt: Vec<Q> = (0..3).map(|_| positive_rational(&mut rng)).collect();
            let s = [positive_rational(&mut rng)];
            let cols = IndexSet::new(vec![2, 3, 4, 5, 7]).expect("sorted");
            let Ok(c) = positive_point(k - 1, &cols, &mut rng).pre(6).and_then(|b| b.iota(1, &tt, &s)) else {
                t.fail(json!({"example": "<3457> promoted", "k": k, "seed": seed, "error": "embedding"}));
                continue;
            };
            for (zi, z) in PositiveZ::panel(7, k, cfg.zs, seed).iter().enumerate() {
                let Ok(y) = amap(&c, z) else { continue };
                let mut w = Twistors::new(&y, z);
                let ctx = || json!({"example": "<3457> promoted", "k": k, "seed": seed, "z": zi});
                let [a, b, e] = [w.get(&[1, 2, 5, 6]), w.get(&[1, 2, 5, 7]), w.get(&[1, 2, 6, 7])];
                t.check(sign(&a) > 0, || json!({"check": "<1256> > 0", "context": ctx()}));
                // <Y Z3 Z4 Z5 Z7'> with <1256> Z7' = <1256> Z7 - <1257> Z6 + <1267> Z5
                let promoted = &a * w.get(&[3, 4, 5, 7]) - &b * w.get(&[3, 4, 5, 6]) + &e * w.get(&[3, 4, 5, 5]);
                let fv = f.eval_with(&mut w);
                t.check(
                    promoted == fv && sign(&fv) > 0,
                    || json!({"check": "promoted sign", "context": ctx(), "value": fv.to_string()}),
                );
            }
        }
    }

    // seven-marker layouts of the proportional-vector law
    for k in 1..=2 {
        for seed in seeds.clone() {
            if let Some((c, tt, s)) = lower(7, k, seed) {
                for (zi, z) in PositiveZ::panel(7, k, cfg.zs, seed + 40).iter().enumerate() {
                    let Ok(y) = amap(&c, z) else { continue };
                    let mut w = Twistors::new(&y, z);
                    let v = [
                        w.get(&[4, 5, 6, 7]),
                        -w.get(&[3, 5, 6, 7]),
                        w.get(&[3, 4, 6, 7]),
                        -w.get(&[3, 4, 5, 7]),
                        w.get(&[3, 4, 5, 6]),
                    ];
                    let want = [&tt[0] * &tt[1], tt[0].clone(), q(1), s[0].clone(), &s[0] * &s[1]];
                    proportional(&mut t, "n=7 lower vector", v, want, 2, || json!({"k": k, "seed": seed, "z": zi}));
                }
            }
            if let Some((c, tt, s)) = upper(7, k, seed) {
                for (zi, z) in PositiveZ::panel(7, k, cfg.zs, seed + 70).iter().enumerate() {
                    let Ok(y) = amap(&c, z) else { continue };
                    let mut w = Twistors::new(&y, z);
                    let sg = parity(k);
                    let v = [
                        w.get(&[1, 2, 6, 7]),
                        -w.get(&[1, 2, 5, 7]),
                        w.get(&[1, 2, 5, 6]),
                        -(&sg * w.get(&[2, 5, 6, 7])),
                        &sg * w.get(&[1, 5, 6, 7]),
                    ];
                    let want = [&tt[0] * &tt[1] * &tt[2], &tt[0] * &tt[1], tt[0].clone(), q(1), s.clone()];
                    proportional(&mut t, "n=7 upper vector", v, want, 3, || json!({"k": k, "seed": seed, "z": zi}));
                }
            }
        }
    }

    // quadratic promotions, and the general layouts, on several (n, k)
    for (n, k) in [(6, 1), (7, 1), (7, 2), (8, 2), (8, 3), (9, 2)] {
        for j in 1..=n - 5 {
            let explicit = tw(n - 4, n - 2, n - 1, n)
                .mul(&tw(j, j + 1, n - 3, n))
                .sub(&tw(n - 3, n - 2, n - 1, n).mul(&tw(j, j + 1, n - 4, n)));
            eq_check(
                &mut t,
                "lower quadratic",
                "expansion",
                explicit,
                favorite(n - 4, n - 3, n - 2, n - 1, j, j + 1, n),
            );
        }
        for j in 2..=n - 4 {
            let explicit =
                tw(1, 2, n - 2, n).mul(&tw(j, j + 1, n - 1, n)).sub(&tw(1, 2, n - 1, n).mul(&tw(j, j + 1, n - 2, n)));
            eq_check(&mut t, "upper quadratic", "expansion", explicit, favorite(n - 2, n - 1, 1, 2, j, j + 1, n));
        }
        for seed in seeds.clone() {
            if let Some((c, tt, s)) = lower(n, k, seed) {
                for (zi, z) in PositiveZ::panel(n, k, cfg.zs, seed + 70).iter().enumerate() {
                    let Ok(y) = amap(&c, z) else { continue };
                    let mut w = Twistors::new(&y, z);
                    let ctx = || json!({"n": n, "k": k, "seed": seed, "z": zi});
                    let v = [
                        w.get(&[n - 3, n - 2, n - 1, n]),
                        -w.get(&[n - 4, n - 2, n - 1, n]),
                        w.get(&[n - 4, n - 3, n - 1, n]),
                        -w.get(&[n - 4, n - 3, n - 2, n]),
                        w.get(&[n - 4, n - 3, n - 2, n - 1]),
                    ];
                    let want = [&tt[1] * &tt[0], tt[0].clone(), q(1), s[0].clone(), &s[0] * &s[1]];
                    proportional(&mut t, "lower embedding vector", v, want, 2, ctx);
                    for j in 1..=n - 5 {
                        let f = favorite(j, j + 1, n - 4, n - 3, n - 2, n - 1, n);
                        let val = f.eval_with(&mut w);
                        t.check(sign(&val) > 0, || json!({"example": "lower quadratic", "j": j, "context": ctx(), "value": val.to_string()}));
                    }
                }
            }
            if let Some((c, tt, s)) = upper(n, k, seed) {
                for (zi, z) in PositiveZ::panel(n, k, cfg.zs, seed + 40).iter().enumerate() {
                    let Ok(y) = amap(&c, z) else { continue };
                    let mut w = Twistors::new(&y, z);
                    let ctx = || json!({"n": n, "k": k, "seed": seed, "z": zi});
                    let v = [
                        w.get(&[1, 2, n - 1, n]),
                        -w.get(&[1, 2, n - 2, n]),
                        w.get(&[1, 2, n - 2, n - 1]),
                        parity(k - 1) * w.get(&[2, n - 2, n - 1, n]),
                        parity(k) * w.get(&[1, n - 2, n - 1, n]),
                    ];
                    let want = [&tt[0] * &tt[1] * &tt[2], &tt[0] * &tt[1], tt[0].clone(), q(1), s.clone()];
                    proportional(&mut t, "upper embedding vector", v, want, 3, ctx);
                    for j in 2..=n - 4 {
                        let f = favorite(1, 2, j, j + 1, n - 2, n - 1, n);
                        let val = f.eval_with(&mut w);
                        t.check(sign(&val) < 0, || json!({"example": "upper quadratic", "j": j, "context": ctx(), "value": val.to_string()}));
                    }
                }
            }
        }
    }
    t.report(10, "promotions")
}
