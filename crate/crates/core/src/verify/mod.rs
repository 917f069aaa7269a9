//! The acceptance suites, each a function of a [`VerifyConfig`] returning a
//! report with replayable witnesses for every failed check.

mod examples;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::ampl::{amap, boundary_index_sets, check_middle_decomposition, in_s_partial_a, twistor, PositiveZ};
use crate::boundaries::{boundary_point, check_all, has_codim_one_generation, inverse_direction, shift, Dir, End};
use crate::chords::{algorithmic_permutation, diagram_to_oplus, enumerate, oplus_to_permutation, to_permutation};
use crate::domino::{
    build_domino_matrix, cell_pattern, check_sign_rules, construct_matrix, domino_representative, recover_params,
    sample_assignment, sample_cell, var_set, ConstructionParams,
};
use crate::inverse::{invert_point, surjectivity};
use crate::matrix::{rank_of, IndexSet, RationalMatrix};
use crate::rational::{sign, Q};
use crate::rng::{positive_rational, seeded};
use crate::separation::verify_all;
use crate::ChordDiagram;

pub use examples::{example_regressions, promotion_identities};

/// Scope and sample sizes. `n`/`k` restrict every suite that ranges over
/// diagrams; `None` means the suite's own default range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub seed: u64,
    /// Samples per cell.
    pub samples: usize,
    /// Size of the positive `Z` panel.
    pub zs: usize,
    /// Seeds per cell for the domino and inverse suites.
    pub seeds: usize,
    /// Random points per `(n, k, Z)` for the surjectivity suite.
    pub points: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { n: None, k: None, seed: 0, samples: 5, zs: 3, seeds: 10, points: 100 }
    }
}

impl VerifyConfig {
    fn ns(&self, lo: usize, hi: usize) -> Vec<usize> {
        match self.n {
            Some(n) => vec![n],
            None => (lo..=hi).collect(),
        }
    }

    fn ks(&self, n: usize, min_k: usize) -> Vec<usize> {
        let top = n.saturating_sub(4);
        match self.k {
            Some(k) if k >= min_k && k <= top => vec![k],
            Some(_) => vec![],
            None => (min_k..=top).collect(),
        }
    }

    fn diagrams(&self, lo: usize, hi: usize, min_k: usize) -> Vec<ChordDiagram> {
        self.ns(lo, hi)
            .into_iter()
            .filter(|&n| n >= 4)
            .flat_map(|n| self.ks(n, min_k).into_iter().flat_map(move |k| enumerate(n, k)))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n, "k": self.k, "seed": self.seed, "samples": self.samples,
            "zs": self.zs, "seeds": self.seeds, "points": self.points,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub checks: usize,
    pub failures: Vec<Value>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.id,
            "name": self.name,
            "passed": self.passed(),
            "checks": self.checks,
            "failure_count": self.failures.len(),
            "failures": self.failures.iter().take(20).collect::<Vec<_>>(),
        })
    }

    pub fn line(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        format!("[{status}] {:>2} {:<28} {} checks, {} failures", self.id, self.name, self.checks, self.failures.len())
    }
}

/// Checks and witnesses of failed ones.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    pub checks: usize,
    pub failures: Vec<Value>,
}

impl Tally {
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        self.checks += 1;
        if !ok {
            self.failures.push(witness());
        }
        ok
    }

    pub fn fail(&mut self, witness: Value) {
        self.checks += 1;
        self.failures.push(witness);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.checks += other.checks;
        self.failures.extend(other.failures);
        self
    }

    fn report(self, id: u8, name: &'static str) -> CriterionReport {
        CriterionReport { id, name, checks: self.checks, failures: self.failures }
    }
}

fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T) -> Tally + Sync + Send) -> Tally {
    items.par_iter().map(f).reduce(Tally::default, Tally::merge)
}

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "cell counts"),
    (2, "permutation coherence"),
    (3, "worked examples"),
    (4, "domino theorem"),
    (5, "inverse problem"),
    (6, "separation"),
    (7, "boundary twistors"),
    (8, "boundary pairing"),
    (9, "surjectivity"),
    (10, "promotions"),
    (11, "middle decomposition"),
];

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Option<CriterionReport> {
    Some(match id {
        1 => cell_counts(cfg),
        2 => permutation_coherence(cfg),
        3 => example_regressions(),
        4 => domino_theorem(cfg),
        5 => inverse_problem(cfg),
        6 => separation(cfg),
        7 => boundary_twistors(cfg),
        8 => boundary_pairing(cfg),
        9 => surjectivity_spot_check(cfg),
        10 => promotion_identities(cfg),
        11 => middle_decomposition(cfg),
        _ => return None,
    })
}

/// Every criterion in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    CRITERIA.iter().filter_map(|&(id, _)| run_criterion(id, cfg)).collect()
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `|enumerate(n, k)|` against `C(n-3, k+1) C(n-3, k) / (n-3)`, plus
/// distinctness and validity of the list.
pub fn cell_counts(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(4, 10) {
        if n < 4 {
            continue;
        }
        for k in cfg.ks(n, 0) {
            let all = enumerate(n, k);
            let m = (n - 3) as u128;
            let want = binomial(m, k as u128 + 1) * binomial(m, k as u128) / m;
            t.check(
                all.len() as u128 == want,
                || json!({"n": n, "k": k, "count": all.len(), "expected": want.to_string()}),
            );
            let sorted = all.windows(2).all(|w| w[0] < w[1]);
            t.check(sorted, || json!({"n": n, "k": k, "check": "strictly increasing, so distinct"}));
            for d in &all {
                if let Err(e) = d.validate() {
                    t.fail(json!({"diagram": d.to_text(), "error": e.to_string()}));
                }
            }
        }
    }
    t.report(1, "cell counts")
}

pub fn permutation_coherence(cfg: &VerifyConfig) -> CriterionReport {
    let all = cfg.diagrams(4, 9, 0);
    par_tally(&all, |d| {
        let mut t = Tally::default();
        let p = to_permutation(d);
        let w = |what: &str, got: String| json!({"diagram": d.to_text(), "check": what, "pi": p.images(), "got": got});
        t.check(p.anti_excedances().len() == d.k(), || w("anti-excedances", format!("{:?}", p.anti_excedances())));
        let s = algorithmic_permutation(d);
        t.check(s == p, || w("algorithmic", format!("{:?}", s.images())));
        let o = diagram_to_oplus(d);
        match o.validate().and_then(|_| oplus_to_permutation(&o)) {
            Ok(q) => {
                t.check(q == p, || w("pipe dream", format!("{:?}", q.images())));
            }
            Err(e) => t.fail(w("oplus diagram", e.to_string())),
        }
        t
    })
    .report(2, "permutation coherence")
}

/// Generated matrices are nonnegative, satisfy the sign rules, share the
/// cell's Plücker pattern and give back their parameters; direct domino
/// assignments land in the same pattern.
pub fn domino_theorem(cfg: &VerifyConfig) -> CriterionReport {
    let all = cfg.diagrams(4, 8, 0);
    par_tally(&all, |d| {
        let mut t = Tally::default();
        let pattern = cell_pattern(d);
        for seed in cfg.seed..cfg.seed + cfg.seeds as u64 {
            let w = |what: &str| json!({"diagram": d.to_text(), "seed": seed, "check": what});
            let p = ConstructionParams::from_seed(d.k(), seed);
            let m = match construct_matrix(d, &p) {
                Ok(m) => m,
                Err(e) => {
                    t.fail(json!({"diagram": d.to_text(), "seed": seed, "error": e.to_string()}));
                    continue;
                }
            };
            t.check(m.is_nonnegative(), || w("nonnegative Plückers"));
            t.check(m.nonzero_pattern() == pattern, || w("Plücker pattern"));
            if let Err(e) = check_sign_rules(&m, d) {
                t.fail(json!({"diagram": d.to_text(), "seed": seed, "check": "sign rules", "error": e.to_string()}));
            }
            t.check(recover_params(d, &m).ok().as_ref() == Some(&p), || w("parameter roundtrip"));
            if seed == cfg.seed && d.k() > 0 {
                t.check(m.matrix_permutation() == to_permutation(d), || w("positroid permutation"));
            }
        }
        let mut rng = seeded(cfg.seed ^ (d.n() as u64) << 32 ^ d.k() as u64);
        for s in 0..3 {
            let a = sample_assignment(d, &mut rng);
            let w = |what: &str| json!({"diagram": d.to_text(), "assignment": a.to_json(), "sample": s, "check": what});
            match build_domino_matrix(d, &a) {
                Ok(m) => {
                    t.check(m.is_nonnegative(), || w("direct: nonnegative Plückers"));
                    t.check(m.nonzero_pattern() == pattern, || w("direct: Plücker pattern"));
                }
                Err(e) => t.fail(json!({"diagram": d.to_text(), "sample": s, "error": e.to_string()})),
            }
        }
        t
    })
    .report(4, "domino theorem")
}

fn panels(n: usize, cfg: &VerifyConfig) -> Vec<Vec<PositiveZ>> {
    (0..=n.saturating_sub(4)).map(|k| PositiveZ::panel(n, k, cfg.zs, cfg.seed)).collect()
}

/// The image of a sample inverts to its β-normalised domino representative.
pub fn inverse_problem(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(4, 8) {
        let zs = panels(n, cfg);
        let all: Vec<ChordDiagram> = cfg.ks(n, 0).into_iter().flat_map(|k| enumerate(n, k)).collect();
        t = t.merge(par_tally(&all, |d| {
            let mut t = Tally::default();
            for seed in cfg.seed..cfg.seed + cfg.seeds as u64 {
                let c = sample_cell(d, seed);
                let want = domino_representative(d, &c);
                for (zi, z) in zs[d.k()].iter().enumerate() {
                    let got = amap(&c, z).and_then(|y| invert_point(d, &y, z));
                    let ok = matches!((&got, &want), (Ok(a), Ok(b)) if a == b);
                    t.check(ok, || {
                        json!({
                            "diagram": d.to_text(), "seed": seed, "z": zi,
                            "sample": c.to_json(),
                            "got": got.as_ref().map(RationalMatrix::to_json).map_err(|e| e.to_string()).unwrap_or_else(Value::from),
                        })
                    });
                }
            }
            t
        }));
    }
    t.report(5, "inverse problem")
}

pub fn separation(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(6, 8) {
        match verify_all(n, cfg.zs, cfg.samples, cfg.seed) {
            Ok(r) => {
                t.checks += r.pairs;
                t.failures.extend(r.mismatches.iter().map(|m| m.to_json()));
                t.failures.extend(r.impure.iter().map(|(a, b)| json!({"impure": [a, b]})));
            }
            Err(e) => t.fail(json!({"n": n, "error": e.to_string()})),
        }
    }
    t.report(6, "separation")
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

/// Nonnegative points off the open cells: boundary points of every cell,
/// cells on `n - 1` markers with a zero column, and a positive point with one
/// row moved onto four consecutive columns.
fn closure_points(n: usize, k: usize, seed: u64) -> Vec<(String, RationalMatrix)> {
    let mut out = Vec::new();
    for d in enumerate(n, k) {
        for star in var_set(&d) {
            if has_codim_one_generation(&d, star) {
                if let Ok((m, _)) = boundary_point(&d, star, seed) {
                    out.push((format!("{d} at {star}"), m));
                }
            }
        }
    }
    if n > k + 4 {
        for d in enumerate(n - 1, k) {
            let m = sample_cell(&d, seed);
            for h in [1, n / 2, n] {
                if let Ok(m) = m.relabel_cols(|c| if c >= h { c + 1 } else { c }).and_then(|m| m.pre(h)) {
                    out.push((format!("{d} with zero column {h}"), m));
                }
            }
        }
    }
    let mut rng = seeded(seed);
    let mut m = crate::ampl::positive_point(k, &IndexSet::range(1, n), &mut rng);
    for c in 1..=n {
        let v = if (2..=5).contains(&c) { positive_rational(&mut rng) } else { Q::from_integer(0.into()) };
        m.set(1, c, v).expect("row 1 exists");
    }
    if m.is_nonnegative() && m.rank() == k {
        out.push(("row 1 on 2..5".into(), m));
    }
    out
}

/// Boundary twistors: strict fixed signs on every open cell, and on closure
/// points a sign that is either the fixed one or zero exactly when the
/// point drops rank off the index set (then it lies in the boundary locus).
pub fn boundary_twistors(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(5, 8) {
        for k in cfg.ks(n, 1) {
            let zs = PositiveZ::panel(n, k, cfg.zs, cfg.seed);
            let sets = boundary_index_sets(n);
            let expect = |wrap: bool| if wrap && k % 2 == 1 { -1 } else { 1 };
            let cells = enumerate(n, k);
            t = t.merge(par_tally(&cells, |d| {
                let mut t = Tally::default();
                for s in 0..cfg.samples as u64 {
                    let c = sample_cell(d, cfg.seed + s);
                    for (zi, z) in zs.iter().enumerate() {
                        let Ok(y) = amap(&c, z) else { continue };
                        for &(idx, wrap) in &sets {
                            let v = sign(&twistor(&y, z, &idx));
                            t.check(v == expect(wrap), || {
                                json!({"diagram": d.to_text(), "sample": cfg.seed + s, "z": zi, "twistor": idx, "sign": v})
                            });
                        }
                    }
                }
                t
            }));
            let points = closure_points(n, k, cfg.seed);
            t = t.merge(par_tally(&points, |(label, c)| {
                let mut t = Tally::default();
                t.check(c.is_nonnegative(), || json!({"point": label, "check": "nonnegative"}));
                for (zi, z) in zs.iter().enumerate() {
                    let Ok(y) = amap(c, z) else { continue };
                    for &(idx, wrap) in &sets {
                        let v = sign(&twistor(&y, z, &idx));
                        let w = |what: &str| json!({"point": label, "matrix": c.to_json(), "z": zi, "twistor": idx, "sign": v, "check": what});
                        t.check(v == 0 || v == expect(wrap), || w("fixed sign"));
                        t.check((v == 0) == (complement_rank(c, &idx) < k), || w("vanishing iff rank drop"));
                        if v == 0 {
                            t.check(in_s_partial_a(c).is_some(), || w("vanishing point in the boundary locus"));
                        }
                    }
                }
                t
            }));
        }
    }
    t.report(7, "boundary twistors")
}

/// Exhaustive classification with numeric boundary points, and every
/// defined shift undone by the opposite shift of its kind.
pub fn boundary_pairing(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(5, 7) {
        for k in cfg.ks(n, 1) {
            let r = check_all(n, k, true, cfg.seed);
            t.checks += r.rows.len();
            t.failures.extend(r.failures().iter().map(|c| c.to_json()));
            let cells = enumerate(n, k);
            t = t.merge(par_tally(&cells, |d| {
                let mut t = Tally::default();
                for l in 0..d.k() {
                    for (end, dir) in [(End::Tail, Dir::Left), (End::Tail, Dir::Right), (End::Head, Dir::Left), (End::Head, Dir::Right)] {
                        let Ok(r) = shift(d, l, end, dir) else { continue };
                        let (e2, d2) = inverse_direction(r.kind);
                        let back = shift(&r.target, r.index, e2, d2);
                        let ok = cells.contains(&r.target) && matches!(&back, Ok(b) if b.target == *d && b.index == l);
                        t.check(ok, || {
                            json!({"diagram": d.to_text(), "chord": l + 1, "end": format!("{end:?}"), "dir": format!("{dir:?}"),
                                   "kind": r.kind.to_string(), "target": r.target.to_text()})
                        });
                    }
                }
                t
            }));
        }
    }
    t.report(8, "boundary pairing")
}

pub fn surjectivity_spot_check(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    for n in cfg.ns(5, 7) {
        for k in cfg.ks(n, 1) {
            for (zi, z) in PositiveZ::panel(n, k, cfg.zs, cfg.seed).iter().enumerate() {
                let seed = cfg.seed.wrapping_mul(1_000_003).wrapping_add(zi as u64 * 10_000);
                match surjectivity(n, k, z, cfg.points, seed) {
                    Ok(r) => {
                        t.checks += r.points;
                        if !r.passed() {
                            t.failures.push(json!({"z": zi, "report": r.to_json()}));
                        }
                    }
                    Err(e) => t.fail(json!({"n": n, "k": k, "z": zi, "error": e.to_string()})),
                }
            }
        }
    }
    t.report(9, "surjectivity")
}

pub fn middle_decomposition(cfg: &VerifyConfig) -> CriterionReport {
    let mut t = Tally::default();
    let cases: Vec<(usize, usize)> = match cfg.n {
        None => [(7, 1), (8, 2)].into_iter().filter(|&(_, k)| cfg.k.is_none_or(|x| x == k)).collect(),
        Some(n) => cfg.ks(n, 1).into_iter().map(|k| (n, k)).collect(),
    };
    for (n, k) in cases {
        let panel = PositiveZ::panel(n, k, cfg.zs, cfg.seed);
        match check_middle_decomposition(n, k, &panel, cfg.samples, cfg.seed) {
            Ok(r) => {
                t.checks += r.pieces.iter().map(|p| p.samples * p.signature.len()).sum::<usize>();
                if !r.passed() {
                    t.failures.push(r.to_json());
                }
            }
            Err(e) => t.fail(json!({"n": n, "k": k, "error": e.to_string()})),
        }
    }
    t.report(11, "middle decomposition")
}
