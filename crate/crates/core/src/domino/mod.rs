//! Domino matrices of chord diagrams.
//!
//! Chord `l` (0-based here, row `l + 1` in matrices) owns the start domino
//! `(α_l, β_l)` at its tail, the end domino `(γ_l, δ_l)` at its head, and one
//! more entry `ε_l`: at column `n` for a top chord, otherwise as the factor of
//! the copy of its parent's start domino.

mod construct;
mod recover;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

pub use construct::{
    apply_ops, construct_matrix, construct_matrix_rightwards, construction_ops, rightwards_ops, Op, Param,
};
pub use recover::{cell_pattern, check_sign_rules, domino_representative, in_cell, recover_params, sample_cell};

use crate::chords::ChordDiagram;
use crate::error::{Error, Result};
use crate::matrix::{IndexSet, RationalMatrix};
use crate::rational::{format_q, parity_sign, parse_q, Q};
use crate::rng::{positive_rational, seeded, unit_fraction, SeedRng};

/// Where the variables of one row sit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowTemplate {
    pub alpha: usize,
    pub beta: usize,
    pub gamma: usize,
    pub delta: usize,
    /// Column `n` for a top chord.
    pub epsilon_top: Option<usize>,
    /// The parent's tail `(i_m, i_m + 1)` for a child.
    pub inherited: Option<(usize, usize)>,
}

impl RowTemplate {
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = [self.alpha, self.beta, self.gamma, self.delta].into();
        s.extend(self.epsilon_top);
        if let Some((a, b)) = self.inherited {
            s.insert(a);
            s.insert(b);
        }
        s
    }
}

/// The domino form of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoTemplate {
    pub n: usize,
    pub rows: Vec<RowTemplate>,
}

impl DominoTemplate {
    pub fn of(d: &ChordDiagram) -> Self {
        let rows = (0..d.k())
            .map(|l| {
                let c = d.chord(l);
                let parent = d.parent(l).map(|m| d.chord(m).i);
                RowTemplate {
                    alpha: c.i,
                    beta: c.i + 1,
                    gamma: c.j,
                    delta: c.j + 1,
                    epsilon_top: parent.is_none().then_some(d.n()),
                    inherited: parent.map(|i| (i, i + 1)),
                }
            })
            .collect();
        Self { n: d.n(), rows }
    }
}

/// Positive parameters `s_l, u_l, v_l, w_l` of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionParams {
    pub s: Vec<Q>,
    pub u: Vec<Q>,
    pub v: Vec<Q>,
    pub w: Vec<Q>,
}

impl ConstructionParams {
    pub fn new(s: Vec<Q>, u: Vec<Q>, v: Vec<Q>, w: Vec<Q>) -> Result<Self> {
        let k = s.len();
        if u.len() != k || v.len() != k || w.len() != k {
            return Err(Error::Dimension("s, u, v, w need equal lengths".into()));
        }
        Ok(Self { s, u, v, w })
    }

    /// All parameters equal to one.
    pub fn ones(k: usize) -> Self {
        Self::uniform(k, &Q::one())
    }

    pub fn uniform(k: usize, x: &Q) -> Self {
        Self { s: vec![x.clone(); k], u: vec![x.clone(); k], v: vec![x.clone(); k], w: vec![x.clone(); k] }
    }

    pub fn random(k: usize, rng: &mut SeedRng) -> Self {
        let mut draw = || (0..k).map(|_| positive_rational(rng)).collect::<Vec<_>>();
        let (s, u, v, w) = (draw(), draw(), draw(), draw());
        Self { s, u, v, w }
    }

    pub fn from_seed(k: usize, seed: u64) -> Self {
        Self::random(k, &mut seeded(seed))
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn get(&self, p: Param, l: usize) -> &Q {
        match p {
            Param::S => &self.s[l],
            Param::U => &self.u[l],
            Param::V => &self.v[l],
            Param::W => &self.w[l],
        }
    }

    pub fn is_positive(&self) -> bool {
        [&self.s, &self.u, &self.v, &self.w].iter().all(|xs| xs.iter().all(|x| x.is_positive()))
    }

    pub fn to_json(&self) -> Value {
        let f = |xs: &[Q]| xs.iter().map(format_q).collect::<Vec<_>>();
        json!({ "s": f(&self.s), "u": f(&self.u), "v": f(&self.v), "w": f(&self.w) })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| -> Result<Vec<Q>> {
            v.get(name)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("missing array {name:?}")))?
                .iter()
                .map(|x| x.as_str().map(parse_q).unwrap_or_else(|| Err(Error::Parse(format!("{x} is not a string")))))
                .collect()
        };
        Self::new(field("s")?, field("u")?, field("v")?, field("w")?)
    }
}

/// The `5k` domino variables of one matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoAssignment {
    pub alpha: Vec<Q>,
    pub beta: Vec<Q>,
    pub gamma: Vec<Q>,
    pub delta: Vec<Q>,
    pub epsilon: Vec<Q>,
}

const NAMES: [&str; 5] = ["alpha", "beta", "gamma", "delta", "epsilon"];

impl DominoAssignment {
    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    fn fields(&self) -> [&Vec<Q>; 5] {
        [&self.alpha, &self.beta, &self.gamma, &self.delta, &self.epsilon]
    }

    /// `{"1": {"alpha": "3/2", ...}, ...}` keyed by 1-based chord index.
    pub fn to_json(&self) -> Value {
        let mut out = serde_json::Map::new();
        for l in 0..self.k() {
            let mut row = serde_json::Map::new();
            for (name, f) in NAMES.iter().zip(self.fields()) {
                row.insert(name.to_string(), Value::String(format_q(&f[l])));
            }
            out.insert((l + 1).to_string(), Value::Object(row));
        }
        Value::Object(out)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected an object".into()))?;
        let k = obj.len();
        let mut cols: [Vec<Q>; 5] = Default::default();
        for l in 1..=k {
            let row = obj.get(&l.to_string()).ok_or_else(|| Error::Parse(format!("missing chord {l}")))?;
            for (name, col) in NAMES.iter().zip(cols.iter_mut()) {
                let s = row
                    .get(*name)
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::Parse(format!("chord {l}: missing {name}")))?;
                col.push(parse_q(s)?);
            }
        }
        let [alpha, beta, gamma, delta, epsilon] = cols;
        Ok(Self { alpha, beta, gamma, delta, epsilon })
    }
}

/// `(γ, δ; γ', δ')`-style 2×2 determinant `a·d - b·c`.
fn det2(a: &Q, b: &Q, c: &Q, d: &Q) -> Q {
    a * d - b * c
}

/// The elements of `Ṽar`: signed domino variables and the two kinds of
/// 2×2 minors, all positive on the cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarElement {
    Alpha(usize),
    Beta(usize),
    GammaHat(usize),
    DeltaHat(usize),
    EpsilonHat(usize),
    /// `c_j` is a same-end descendant of `c_i`.
    Eta(usize, usize),
    /// `(c_i, c_j)` head-to-tail.
    Theta(usize, usize),
}

impl fmt::Display for VarElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Alpha(l) => write!(f, "alpha{}", l + 1),
            Self::Beta(l) => write!(f, "beta{}", l + 1),
            Self::GammaHat(l) => write!(f, "gamma^{}", l + 1),
            Self::DeltaHat(l) => write!(f, "delta^{}", l + 1),
            Self::EpsilonHat(l) => write!(f, "epsilon^{}", l + 1),
            Self::Eta(i, j) => write!(f, "eta{},{}", i + 1, j + 1),
            Self::Theta(i, j) => write!(f, "theta{},{}", i + 1, j + 1),
        }
    }
}

/// Sign of `ε_l` on the cell.
pub fn epsilon_sign(d: &ChordDiagram, l: usize) -> Q {
    match d.beyond(l) {
        None => parity_sign(d.behind(l)),
        Some(b) => parity_sign(b),
    }
}

/// Same-end descendant pairs `(i, j)`.
pub fn same_end_pairs(d: &ChordDiagram) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..d.k() {
        for j in i + 1..d.k() {
            if d.is_descendant(j, i) && d.chord(j).j == d.chord(i).j {
                out.push((i, j));
            }
        }
    }
    out
}

/// Every element of `Ṽar` for `d`.
pub fn var_tilde(d: &ChordDiagram) -> Vec<VarElement> {
    let k = d.k();
    let mut out = Vec::new();
    for l in 0..k {
        out.extend([
            VarElement::Alpha(l),
            VarElement::Beta(l),
            VarElement::GammaHat(l),
            VarElement::DeltaHat(l),
            VarElement::EpsilonHat(l),
        ]);
    }
    out.extend(same_end_pairs(d).into_iter().map(|(i, j)| VarElement::Eta(i, j)));
    out.extend(d.head_to_tail_pairs().into_iter().map(|(i, j)| VarElement::Theta(i, j)));
    out
}

/// The subset `Var` of `Ṽar`: `η` only for a parent and same-end child,
/// replacing `δ̂` of the parent and `γ̂` of the child; `θ` only for
/// siblings, replacing `γ̂` of the first and `β` of the second.
pub fn var_set(d: &ChordDiagram) -> Vec<VarElement> {
    let mut dropped = BTreeSet::new();
    let mut extra = Vec::new();
    for (i, j) in same_end_pairs(d) {
        if d.parent(j) == Some(i) {
            dropped.insert(VarElement::DeltaHat(i));
            dropped.insert(VarElement::GammaHat(j));
            extra.push(VarElement::Eta(i, j));
        }
    }
    for (i, j) in d.head_to_tail_pairs() {
        if d.parent(i) == d.parent(j) {
            dropped.insert(VarElement::GammaHat(i));
            dropped.insert(VarElement::Beta(j));
            extra.push(VarElement::Theta(i, j));
        }
    }
    let mut out: Vec<VarElement> = var_tilde(d)
        .into_iter()
        .filter(|v| {
            matches!(
                v,
                VarElement::Alpha(_)
                    | VarElement::Beta(_)
                    | VarElement::GammaHat(_)
                    | VarElement::DeltaHat(_)
                    | VarElement::EpsilonHat(_)
            )
        })
        .filter(|v| !dropped.contains(v))
        .collect();
    out.extend(extra);
    out
}

impl DominoAssignment {
    /// The value of a `Ṽar` element.
    pub fn value(&self, d: &ChordDiagram, v: VarElement) -> Q {
        let below = |l: usize| parity_sign(d.below(l));
        match v {
            VarElement::Alpha(l) => self.alpha[l].clone(),
            VarElement::Beta(l) => self.beta[l].clone(),
            VarElement::GammaHat(l) => &self.gamma[l] * below(l),
            VarElement::DeltaHat(l) => &self.delta[l] * below(l),
            VarElement::EpsilonHat(l) => &self.epsilon[l] * epsilon_sign(d, l),
            VarElement::Eta(i, j) => {
                let s = parity_sign(d.below(i) + d.below(j) + 1);
                det2(&self.gamma[i], &self.delta[i], &self.gamma[j], &self.delta[j]) * s
            }
            VarElement::Theta(i, j) => det2(&self.gamma[i], &self.delta[i], &self.alpha[j], &self.beta[j]) * below(i),
        }
    }

    pub fn values(&self, d: &ChordDiagram, vars: &[VarElement]) -> BTreeMap<VarElement, Q> {
        vars.iter().map(|&v| (v, self.value(d, v))).collect()
    }
}

/// The domino matrix of `d` with the given variables, written entry by entry.
pub fn build_domino_matrix(d: &ChordDiagram, a: &DominoAssignment) -> Result<RationalMatrix> {
    let k = d.k();
    if a.fields().iter().any(|f| f.len() != k) {
        return Err(Error::Dimension(format!("assignment has {} chords, diagram {k}", a.k())));
    }
    let t = DominoTemplate::of(d);
    let mut m = RationalMatrix::zeros(IndexSet::range(1, k), IndexSet::range(1, d.n()));
    for (l, row) in t.rows.iter().enumerate() {
        let r = l + 1;
        let add = |m: &mut RationalMatrix, c: usize, v: Q| {
            let cur = m.get(r, c);
            m.set(r, c, cur + v)
        };
        add(&mut m, row.alpha, a.alpha[l].clone())?;
        add(&mut m, row.beta, a.beta[l].clone())?;
        add(&mut m, row.gamma, a.gamma[l].clone())?;
        add(&mut m, row.delta, a.delta[l].clone())?;
        if let Some(c) = row.epsilon_top {
            add(&mut m, c, a.epsilon[l].clone())?;
        }
        if let Some((p, q)) = row.inherited {
            let par = d.parent(l).unwrap();
            add(&mut m, p, &a.epsilon[l] * &a.alpha[par])?;
            add(&mut m, q, &a.epsilon[l] * &a.beta[par])?;
        }
    }
    Ok(m)
}

/// A random assignment satisfying the six sign rules, drawn directly
/// rather than through the construction.
pub fn sample_assignment(d: &ChordDiagram, rng: &mut SeedRng) -> DominoAssignment {
    let k = d.k();
    let alpha: Vec<Q> = (0..k).map(|_| positive_rational(rng)).collect();
    let beta: Vec<Q> = (0..k).map(|_| positive_rational(rng)).collect();
    let mut ratio: Vec<Q> = vec![Q::zero(); k];
    for l in 0..k {
        let bound = match d.same_end_parent(l) {
            Some(m) => Some(ratio[m].clone()),
            None => d.starting_at(d.chord(l).j).map(|h| &beta[h] / &alpha[h]),
        };
        ratio[l] = match bound {
            Some(b) => b * unit_fraction(rng),
            None => positive_rational(rng),
        };
    }
    let mut gamma = Vec::with_capacity(k);
    let mut delta = Vec::with_capacity(k);
    let mut epsilon = Vec::with_capacity(k);
    for l in 0..k {
        let g = positive_rational(rng) * parity_sign(d.below(l));
        delta.push(&g * &ratio[l]);
        gamma.push(g);
        epsilon.push(positive_rational(rng) * epsilon_sign(d, l));
    }
    DominoAssignment { alpha, beta, gamma, delta, epsilon }
}
