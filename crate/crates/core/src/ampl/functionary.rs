//! Polynomials in twistor symbols.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::Twistors;
use crate::error::{Error, Result};
use crate::matrix::RationalMatrix;
use crate::rational::{format_q, parse_q, Q};

use super::PositiveZ;

/// A twistor symbol `⟨a b c d⟩` with sorted, distinct indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub [usize; 4]);

impl Symbol {
    /// Sorts an ordered tuple, returning the sign of the sorting
    /// permutation, or `None` on a repeated index.
    pub fn canonical(mut idx: [usize; 4]) -> Option<(Self, i8)> {
        let mut sign = 1i8;
        for a in 0..4 {
            for b in 0..3 - a {
                if idx[b] > idx[b + 1] {
                    idx.swap(b, b + 1);
                    sign = -sign;
                } else if idx[b] == idx[b + 1] {
                    return None;
                }
            }
        }
        if idx.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((Self(idx), sign))
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.contains(&i)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "<{a} {b} {c} {d}>")
    }
}

/// Sorted product of symbols.
pub type Monomial = Vec<Symbol>;

/// A polynomial in twistors with exact coefficients, stored on sorted
/// monomials of sorted symbols so equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Functionary {
    terms: BTreeMap<Monomial, Q>,
}

impl Functionary {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        let mut f = Self::zero();
        f.add_term(Vec::new(), c);
        f
    }

    /// The single twistor `⟨idx⟩` in the given order.
    pub fn twistor(idx: [usize; 4]) -> Self {
        match Symbol::canonical(idx) {
            None => Self::zero(),
            Some((s, sg)) => {
                let mut f = Self::zero();
                f.add_term(vec![s], Q::from_integer(sg.into()));
                f
            }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut f = Self::zero();
        for (mut m, c) in terms {
            m.sort_unstable();
            f.add_term(m, c);
        }
        f
    }

    fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Q> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut f = self.clone();
        for (m, c) in &other.terms {
            f.add_term(m.clone(), c.clone());
        }
        f
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> Self {
        Self::from_terms(self.terms.iter().map(|(m, v)| (m.clone(), v * c)))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut f = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort_unstable();
                f.add_term(m, ca * cb);
            }
        }
        f
    }

    /// Common degree of all monomials; `None` when inhomogeneous or zero.
    pub fn degree(&self) -> Option<usize> {
        let ds: BTreeSet<usize> = self.terms.keys().map(|m| m.len()).collect();
        if ds.len() == 1 {
            ds.into_iter().next()
        } else {
            None
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree().is_some()
    }

    fn index_multiset(m: &Monomial) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for s in m {
            for &i in &s.0 {
                *out.entry(i).or_insert(0) += 1;
            }
        }
        out
    }

    /// The shared index multiset of all monomials, when there is one.
    pub fn type_multiset(&self) -> Option<BTreeMap<usize, usize>> {
        let mut it = self.terms.keys().map(Self::index_multiset);
        let first = it.next()?;
        it.all(|t| t == first).then_some(first)
    }

    pub fn is_pure(&self) -> bool {
        self.type_multiset().is_some()
    }

    /// `d_i(F)` of a pure functionary, zero otherwise.
    pub fn multiplicity(&self, i: usize) -> usize {
        self.type_multiset().and_then(|t| t.get(&i).copied()).unwrap_or(0)
    }

    /// Every index occurring in some symbol.
    pub fn indices(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.iter().flat_map(|s| s.0)).collect()
    }

    /// The type written as a digit string, e.g. `112233445678`.
    pub fn type_string(&self) -> Option<String> {
        let t = self.type_multiset()?;
        let mut s = String::new();
        for (i, c) in t {
            for _ in 0..c {
                if !s.is_empty() && i >= 10 {
                    s.push(' ');
                }
                s.push_str(&i.to_string());
            }
        }
        Some(s)
    }

    /// Renames indices through an injective map.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut sign = 1i8;
            let mut mm = Vec::with_capacity(m.len());
            for s in m {
                let (t, sg) = Symbol::canonical(s.0.map(&f)).expect("injective relabelling");
                sign *= sg;
                mm.push(t);
            }
            mm.sort_unstable();
            out.add_term(mm, if sign > 0 { c.clone() } else { -c.clone() });
        }
        out
    }

    /// Multilinear substitution: every occurrence of an index `a` in `rules`
    /// becomes `Σ coef · Z_b` over the pairs `(coef, b)` listed for `a`.
    pub fn substitute(&self, rules: &BTreeMap<usize, Vec<(Functionary, usize)>>) -> Self {
        let mut cache: BTreeMap<Symbol, Functionary> = BTreeMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let mut acc = Self::constant(c.clone());
            for s in m {
                let e = cache.entry(*s).or_insert_with(|| expand_symbol(s, rules)).clone();
                acc = acc.mul(&e);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Exact value at `Y = CZ`.
    pub fn eval(&self, y: &RationalMatrix, z: &PositiveZ) -> Q {
        self.eval_with(&mut Twistors::new(y, z))
    }

    pub fn eval_with(&self, t: &mut Twistors<'_>) -> Q {
        self.eval_by(|s| t.sorted(s))
    }

    /// Evaluates with `value` returning the twistor of a sorted index set.
    pub fn eval_by(&self, mut value: impl FnMut(&[usize; 4]) -> Q) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut p = c.clone();
            for s in m {
                if p.is_zero() {
                    break;
                }
                p *= value(&s.0);
            }
            total += p;
        }
        total
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (m, c) in &self.terms {
            let cs = format_q(c);
            let mut s = if cs.starts_with('-') { cs } else { format!("+{cs}") };
            for sym in m {
                s.push('*');
                s.push_str(&sym.to_string());
            }
            parts.push(s);
        }
        parts.join(" ")
    }

    pub fn from_text(t: &str) -> Result<Self> {
        let t = t.trim();
        if t == "0" {
            return Ok(Self::zero());
        }
        let mut f = Self::zero();
        let toks: Vec<&str> = t.split_whitespace().collect();
        for part in toks.join_terms()? {
            let mut pieces = part.split('*');
            let c = parse_q(pieces.next().unwrap_or("").trim_start_matches('+'))?;
            let mut m = Vec::new();
            for p in pieces {
                let inner = p
                    .strip_prefix('<')
                    .and_then(|x| x.strip_suffix('>'))
                    .ok_or_else(|| Error::Parse(format!("bad symbol {p}")))?;
                let idx: Vec<usize> = inner
                    .split_whitespace()
                    .map(|x| x.parse().map_err(|_| Error::Parse(format!("bad index in {p}"))))
                    .collect::<Result<_>>()?;
                let arr: [usize; 4] = idx.try_into().map_err(|_| Error::Parse(format!("{p} needs four indices")))?;
                let (s, sg) = Symbol::canonical(arr).ok_or_else(|| Error::Parse(format!("{p} repeats an index")))?;
                m.push((s, sg));
            }
            let sign: i8 = m.iter().map(|x| x.1).product();
            let mono: Monomial = m.into_iter().map(|x| x.0).collect();
            f = f.add(&Self::from_terms([(mono, if sign > 0 { c } else { -c })]));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(m, c)| json!({"coef": format_q(c), "symbols": m.iter().map(|s| s.0.to_vec()).collect::<Vec<_>>()}))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("functionary must be an array of terms".into()))?;
        let mut f = Self::zero();
        for t in arr {
            let c =
                parse_q(t.get("coef").and_then(Value::as_str).ok_or_else(|| Error::Parse("term needs coef".into()))?)?;
            let syms =
                t.get("symbols").and_then(Value::as_array).ok_or_else(|| Error::Parse("term needs symbols".into()))?;
            let mut g = Self::constant(c);
            for s in syms {
                let idx: Vec<usize> = serde_json::from_value(s.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                let arr: [usize; 4] = idx.try_into().map_err(|_| Error::Parse("symbols have four indices".into()))?;
                g = g.mul(&Self::twistor(arr));
            }
            f = f.add(&g);
        }
        Ok(f)
    }
}

fn expand_symbol(s: &Symbol, rules: &BTreeMap<usize, Vec<(Functionary, usize)>>) -> Functionary {
    let choices: Vec<Vec<(Functionary, usize)>> =
        s.0.iter()
            .map(|i| rules.get(i).cloned().unwrap_or_else(|| vec![(Functionary::constant(Q::one()), *i)]))
            .collect();
    let mut out = Functionary::zero();
    let mut pick = [0usize; 4];
    loop {
        let idx = [0, 1, 2, 3].map(|a| choices[a][pick[a]].1);
        let t = Functionary::twistor(idx);
        if !t.is_zero() {
            let mut term = t;
            for a in 0..4 {
                term = term.mul(&choices[a][pick[a]].0);
            }
            out = out.add(&term);
        }
        let mut a = 3;
        loop {
            pick[a] += 1;
            if pick[a] < choices[a].len() {
                break;
            }
            pick[a] = 0;
            if a == 0 {
                return out;
            }
            a -= 1;
        }
    }
}

trait JoinTerms {
    fn join_terms(&self) -> Result<Vec<String>>;
}

impl JoinTerms for [&str] {
    /// Regroups whitespace-split tokens into terms: a term starts with a
    /// sign and symbols may contain spaces.
    fn join_terms(&self) -> Result<Vec<String>> {
        let mut out: Vec<String> = Vec::new();
        let mut depth = 0i32;
        for tok in self {
            if depth == 0 && (tok.starts_with('+') || tok.starts_with('-')) {
                out.push(tok.to_string());
            } else {
                let last = out.last_mut().ok_or_else(|| Error::Parse(format!("term must start with a sign: {tok}")))?;
                last.push(' ');
                last.push_str(tok);
            }
            depth += tok.matches('<').count() as i32 - tok.matches('>').count() as i32;
        }
        if depth != 0 {
            return Err(Error::Parse("unbalanced symbol brackets".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for Functionary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `⟪i i′ | j j′ | h h′ | l⟫ = ⟨i j j′ l⟩⟨i′ h h′ l⟩ − ⟨i′ j j′ l⟩⟨i h h′ l⟩`.
pub fn favorite(i: usize, i2: usize, j: usize, j2: usize, h: usize, h2: usize, l: usize) -> Functionary {
    let a = Functionary::twistor([i, j, j2, l]).mul(&Functionary::twistor([i2, h, h2, l]));
    let b = Functionary::twistor([i2, j, j2, l]).mul(&Functionary::twistor([i, h, h2, l]));
    a.sub(&b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn canonical_signs() {
        assert_eq!(Symbol::canonical([1, 3, 7, 5]), Some((Symbol([1, 3, 5, 7]), -1)));
        assert_eq!(Symbol::canonical([2, 4, 6, 6]), None);
        assert_eq!(Symbol::canonical([4, 3, 2, 1]), Some((Symbol([1, 2, 3, 4]), 1)));
    }

    #[test]
    fn favorite_text() {
        let f = favorite(1, 2, 4, 5, 7, 8, 9);
        assert_eq!(f.to_text(), "+1*<1 4 5 9>*<2 7 8 9> -1*<1 7 8 9>*<2 4 5 9>");
        assert_eq!(Functionary::from_text(&f.to_text()).unwrap(), f);
        assert_eq!(Functionary::from_json(&f.to_json()).unwrap(), f);
        assert!(f.is_pure());
        assert_eq!(f.degree(), Some(2));
    }

    #[test]
    fn purity_and_type() {
        let f = Functionary::twistor([1, 2, 3, 4])
            .mul(&Functionary::twistor([1, 2, 5, 6]))
            .mul(&Functionary::twistor([3, 4, 8, 9]))
            .sub(
                &Functionary::twistor([1, 3, 4, 6])
                    .mul(&Functionary::twistor([1, 2, 5, 9]))
                    .mul(&Functionary::twistor([2, 3, 4, 8])),
            );
        assert_eq!(f.type_string().unwrap(), "112233445689");
        assert_eq!((1..=9).map(|i| f.multiplicity(i)).collect::<Vec<_>>(), vec![2, 2, 2, 2, 1, 1, 0, 1, 1]);
        let g = Functionary::twistor([1, 3, 4, 5])
            .add(&Functionary::twistor([2, 3, 4, 5]).scale(&crate::rational::qf(1, 8)));
        assert!(!g.is_pure());
    }

    #[test]
    fn substitution_is_multilinear() {
        // <3 4 5 7> with Z_7 <- <1256> Z_7 - <1257> Z_6 + <1267> Z_5
        let f = Functionary::twistor([3, 4, 5, 7]);
        let mut rules = BTreeMap::new();
        rules.insert(
            7,
            vec![
                (Functionary::twistor([1, 2, 5, 6]), 7),
                (Functionary::twistor([1, 2, 5, 7]).neg(), 6),
                (Functionary::twistor([1, 2, 6, 7]), 5),
            ],
        );
        let g = f.substitute(&rules);
        let want = Functionary::twistor([1, 2, 5, 6])
            .mul(&Functionary::twistor([3, 4, 5, 7]))
            .sub(&Functionary::twistor([1, 2, 5, 7]).mul(&Functionary::twistor([3, 4, 5, 6])));
        assert_eq!(g, want);
        assert_eq!(Functionary::twistor([2, 2, 3, 4]), Functionary::zero());
        assert_eq!(Functionary::constant(q(0)).to_text(), "0");
    }
}
