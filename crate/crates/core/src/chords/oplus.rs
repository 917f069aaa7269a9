use std::fmt;

use serde::Serialize;

use super::ChordDiagram;
use crate::error::{Error, Result};
use crate::permutation::DecoratedPermutation;

/// A Young diagram filled with `⊕` (`true`) and `◯` (`false`).
///
/// Rows are labelled by tail markers from the top; columns by the remaining
/// markers, decreasing from the left. Row `r` holds the columns whose label
/// exceeds its row label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OplusDiagram {
    pub n: usize,
    pub row_labels: Vec<usize>,
    pub column_labels: Vec<usize>,
    pub filling: Vec<Vec<bool>>,
}

impl OplusDiagram {
    /// Rows as strings of `+` and `O`.
    pub fn row_strings(&self) -> Vec<String> {
        self.filling.iter().map(|r| r.iter().map(|&p| if p { '+' } else { 'O' }).collect()).collect()
    }

    /// Checks the four filling rules of a BCFW ⊕-diagram.
    pub fn validate(&self) -> Result<()> {
        for (r, row) in self.filling.iter().enumerate() {
            let bad = |m: &str| Err(Error::InvalidArgument(format!("row {}: {m}", r + 1)));
            let plus: Vec<usize> = (0..row.len()).filter(|&c| row[c]).collect();
            if plus.len() != 4 {
                return bad("needs exactly four ⊕");
            }
            if plus[0] != 0 || plus[3] != row.len() - 1 {
                return bad("◯ outside the outer ⊕");
            }
            for c in plus[2] + 1..plus[3] {
                if r > 0 && self.filling[r - 1][c] {
                    return bad("◯ between the 3rd and 4th ⊕ sits below a ⊕");
                }
            }
            for c in plus[1] + 1..plus[2] {
                if !self.supported_below(r, c) {
                    return bad("◯ between the 2nd and 3rd ⊕ lacks a matching ◯ below");
                }
            }
        }
        Ok(())
    }
}

impl OplusDiagram {
    fn plus_positions(&self, r: usize) -> Vec<usize> {
        (0..self.filling[r].len()).filter(|&c| self.filling[r][c]).collect()
    }

    /// Some lower row has box `c` between its 3rd and 4th ⊕, with only ◯ on
    /// the way down.
    fn supported_below(&self, r: usize, c: usize) -> bool {
        for lower in r + 1..self.filling.len() {
            let row = &self.filling[lower];
            if c >= row.len() || row[c] {
                return false;
            }
            let p = self.plus_positions(lower);
            if p.len() == 4 && c > p[2] && c < p[3] {
                return true;
            }
        }
        false
    }
}

impl fmt::Display for OplusDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, row) in self.row_labels.iter().zip(self.row_strings()) {
            writeln!(f, "{label:>3} {row}")?;
        }
        Ok(())
    }
}

/// The map `Ψ`.
pub fn diagram_to_oplus(d: &ChordDiagram) -> OplusDiagram {
    let mut column_labels = d.non_tail_markers();
    column_labels.reverse();
    let row_labels: Vec<usize> = d.chords().iter().map(|c| c.i).collect();
    let lens: Vec<usize> = row_labels.iter().map(|&i| column_labels.iter().filter(|&&c| c > i).count()).collect();
    let mut grid: Vec<Vec<Option<bool>>> = lens.iter().map(|&l| vec![None; l]).collect();
    for r in (0..d.k()).rev() {
        let j = d.chord(r).j;
        let len = lens[r];
        let suffix: Vec<usize> = (0..len).filter(|&c| column_labels[c] < j).collect();
        let last = *suffix.last().expect("suffix holds the rightmost box");
        for &c in &suffix {
            let plus = c == last;
            grid[r][c] = Some(plus);
            if !plus {
                for row in grid.iter_mut().take(r) {
                    row[c] = Some(false);
                }
            }
        }
        let empty: Vec<usize> = (0..len).filter(|&c| grid[r][c].is_none()).collect();
        assert!(empty.len() >= 3, "at least three free boxes remain");
        let e = empty.len();
        for (t, &c) in empty.iter().enumerate() {
            grid[r][c] = Some(t == 0 || t + 2 >= e);
        }
    }
    OplusDiagram {
        n: d.n(),
        row_labels,
        column_labels,
        filling: grid.into_iter().map(|r| r.into_iter().map(|x| x.unwrap()).collect()).collect(),
    }
}

/// The permutation read off the pipe dream of `o`.
///
/// `◯` is a crossing and `⊕` an elbow; pipes run leftwards and upwards.
/// A pipe leaving a row on the left carries its row label; leaving a column
/// at the top, its column label. A column of height zero is a black fixed
/// point. White fixed points would come from rows and never arise here.
pub fn oplus_to_permutation(o: &OplusDiagram) -> Result<DecoratedPermutation> {
    let domain: Vec<usize> = (1..=o.n).collect();
    let mut images = Vec::with_capacity(o.n);
    for label in 1..=o.n {
        // (row, column, entering from the right?)
        let mut state = if let Some(r) = o.row_labels.iter().position(|&x| x == label) {
            let len = o.filling[r].len();
            if len == 0 {
                return Err(Error::InvalidArgument(format!("row {label} is empty")));
            }
            (r as isize, len - 1, true)
        } else {
            let c = o
                .column_labels
                .iter()
                .position(|&x| x == label)
                .ok_or_else(|| Error::InvalidArgument(format!("label {label} missing from the rim")))?;
            match (0..o.filling.len()).rev().find(|&r| o.filling[r].len() > c) {
                None => {
                    images.push(label);
                    continue;
                }
                Some(r) => (r as isize, c, false),
            }
        };
        let out = loop {
            let (r, c, from_right) = state;
            let plus = o.filling[r as usize][c];
            let go_left = from_right != plus;
            if go_left {
                if c == 0 {
                    break o.row_labels[r as usize];
                }
                state = (r, c - 1, true);
            } else {
                if r == 0 {
                    break o.column_labels[c];
                }
                state = (r - 1, c, false);
            }
        };
        if out == label && o.row_labels.contains(&label) {
            return Err(Error::InvalidArgument(format!("white fixed point at {label}")));
        }
        images.push(out);
    }
    DecoratedPermutation::from_images(&domain, &images, Default::default())
}
