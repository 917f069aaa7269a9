//! The two generating algorithms, recorded as operation lists.
//!
//! Both run the same recursive subroutine over siblings; the iterative
//! right-to-left scan is the same sequence of operations, so it has no
//! separate code path.

use crate::chords::ChordDiagram;
use crate::error::Result;
use crate::matrix::{IndexSet, RationalMatrix};

use super::ConstructionParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    S,
    U,
    V,
    W,
}

/// One matrix operation. Rows are labelled by 1-based chord index, and the
/// parameter of an `x` or `y` step is `param` of chord `chord` (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Pre(usize),
    Inc { col: usize, row: usize },
    X { col: usize, chord: usize, param: Param },
    Y { col: usize, chord: usize, param: Param },
}

struct Builder<'a> {
    d: &'a ChordDiagram,
    cols: IndexSet,
    ops: Vec<Op>,
}

impl<'a> Builder<'a> {
    fn new(d: &'a ChordDiagram) -> Self {
        Self { d, cols: IndexSet::new(vec![d.n()]).expect("n >= 1"), ops: Vec::new() }
    }

    fn fill(&mut self, m: usize) {
        if !self.cols.contains(m) {
            self.cols = self.cols.with(m).unwrap();
            self.ops.push(Op::Pre(m));
        }
    }

    fn fill_down(&mut self, from: usize, to: usize) {
        for m in (to..=from).rev() {
            self.fill(m);
        }
    }

    fn inc(&mut self, col: usize, chord: usize) {
        self.cols = self.cols.with(col).unwrap();
        self.ops.push(Op::Inc { col, row: chord + 1 });
    }

    fn head(&mut self, l: usize) {
        let c = self.d.chord(l);
        self.inc(c.i + 1, l);
        self.ops.push(Op::X { col: c.i + 1, chord: l, param: Param::V });
        self.ops.push(Op::X { col: c.j, chord: l, param: Param::W });
        let p = self.cols.pred(c.i + 1).unwrap();
        self.ops.push(Op::Y { col: p, chord: l, param: Param::S });
    }

    fn head_right(&mut self, l: usize) {
        let c = self.d.chord(l);
        self.inc(c.j, l);
        self.ops.push(Op::X { col: c.j, chord: l, param: Param::W });
        self.ops.push(Op::X { col: c.j + 1, chord: l, param: Param::S });
        self.ops.push(Op::Y { col: c.i + 1, chord: l, param: Param::V });
    }

    fn tail(&mut self, l: usize) {
        if self.d.is_sticky_child(l) {
            return;
        }
        for e in l..=self.d.sticky_last(l) {
            let col = self.d.chord(e).i;
            self.ops.push(Op::Y { col, chord: e, param: Param::U });
        }
    }

    /// `siblings` ordered last to first.
    fn sub_construct(&mut self, siblings: &[usize], parent_tail: usize, parent_head: usize) {
        let mut prev = parent_head;
        for &h in siblings {
            let c = self.d.chord(h);
            self.fill_down(prev - 1, c.j);
            self.head(h);
            self.children_then_tail(h);
            prev = c.i;
        }
        self.fill_down(prev - 1, parent_tail);
    }

    fn children_then_tail(&mut self, h: usize) {
        let c = self.d.chord(h);
        let kids: Vec<usize> = self.d.children(h).into_iter().rev().collect();
        self.sub_construct(&kids, c.i, c.j);
        self.tail(h);
    }
}

/// The operations of the right-to-left construction.
pub fn construction_ops(d: &ChordDiagram) -> Vec<Op> {
    let mut b = Builder::new(d);
    let tops: Vec<usize> = d.top_chords().into_iter().rev().collect();
    b.sub_construct(&tops, 1, d.n());
    b.ops
}

/// The operations of the variant that scans top chords left to right.
pub fn rightwards_ops(d: &ChordDiagram) -> Vec<Op> {
    let mut b = Builder::new(d);
    let mut start = 1;
    for h in d.top_chords() {
        let c = d.chord(h);
        for m in start..=c.i + 1 {
            b.fill(m);
        }
        b.fill(c.j + 1);
        b.head_right(h);
        let kids: Vec<usize> = d.children(h).into_iter().rev().collect();
        b.sub_construct(&kids, c.i + 2, c.j);
        b.tail(h);
        start = c.j + 2;
    }
    for m in start..d.n() {
        b.fill(m);
    }
    b.ops
}

/// Runs `ops` from the empty matrix on columns `{n}`.
pub fn apply_ops(n: usize, ops: &[Op], p: &ConstructionParams) -> Result<RationalMatrix> {
    let mut m = RationalMatrix::zeros(IndexSet::empty(), IndexSet::new(vec![n])?);
    for op in ops {
        m = match *op {
            Op::Pre(i) => m.pre(i)?,
            Op::Inc { col, row } => m.inc(col, row)?,
            Op::X { col, chord, param } => m.x_op(col, p.get(param, chord))?,
            Op::Y { col, chord, param } => m.y_op(col, p.get(param, chord))?,
        };
    }
    Ok(m)
}

/// The domino matrix generated from `p`.
pub fn construct_matrix(d: &ChordDiagram, p: &ConstructionParams) -> Result<RationalMatrix> {
    check_len(d, p)?;
    apply_ops(d.n(), &construction_ops(d), p)
}

pub fn construct_matrix_rightwards(d: &ChordDiagram, p: &ConstructionParams) -> Result<RationalMatrix> {
    check_len(d, p)?;
    apply_ops(d.n(), &rightwards_ops(d), p)
}

fn check_len(d: &ChordDiagram, p: &ConstructionParams) -> Result<()> {
    if p.k() != d.k() {
        return Err(crate::Error::Dimension(format!("{} parameter sets for {} chords", p.k(), d.k())));
    }
    Ok(())
}
