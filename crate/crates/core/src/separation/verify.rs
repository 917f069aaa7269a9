//! Exact sign checks of separators on sampled cells.

use rayon::prelude::*;
use serde_json::{json, Value};

use super::{separator, Separator};
use crate::ampl::{amap, PositiveZ, TwistorTable};
use crate::chords::{enumerate, ChordDiagram};
use crate::domino::sample_cell;
use crate::error::Result;
use crate::rational::sign;

/// Twistor tables of a cell over samples × panel.
#[derive(Debug, Clone)]
pub struct CellSamples {
    pub diagram: ChordDiagram,
    pub tables: Vec<TwistorTable>,
}

impl CellSamples {
    pub fn new(d: &ChordDiagram, panel: &[PositiveZ], samples: usize, seed: u64) -> Result<Self> {
        let mut tables = Vec::with_capacity(samples * panel.len());
        for s in 0..samples {
            let c = sample_cell(d, seed.wrapping_add(s as u64));
            for z in panel {
                tables.push(TwistorTable::new(&amap(&c, z)?, z));
            }
        }
        Ok(Self { diagram: d.clone(), tables })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub a: String,
    pub b: String,
    /// `'a'` or `'b'`: the cell on which the sign was wrong.
    pub side: char,
    /// Index into the samples × panel grid.
    pub point: usize,
    pub predicted: i8,
    pub observed: i8,
    pub functionary: String,
}

impl Mismatch {
    pub fn to_json(&self) -> Value {
        json!({
            "a": self.a, "b": self.b, "side": self.side.to_string(), "point": self.point,
            "predicted": self.predicted, "observed": self.observed, "functionary": self.functionary,
        })
    }
}

/// Separator of two sampled cells and every point where its sign is off.
pub fn verify_pair(a: &CellSamples, b: &CellSamples) -> Result<(Separator, Vec<Mismatch>)> {
    let s = separator(&a.diagram, &b.diagram)?;
    let mut bad = Vec::new();
    for (side, cell, want) in [('a', a, s.sign_a), ('b', b, s.sign_b)] {
        for (p, t) in cell.tables.iter().enumerate() {
            let got = sign(&t.eval(&s.functionary));
            if got != want {
                bad.push(Mismatch {
                    a: a.diagram.to_text(),
                    b: b.diagram.to_text(),
                    side,
                    point: p,
                    predicted: want,
                    observed: got,
                    functionary: s.functionary.to_text(),
                });
            }
        }
    }
    Ok((s, bad))
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub n: usize,
    pub cells: usize,
    pub pairs: usize,
    pub points_per_cell: usize,
    pub mismatches: Vec<Mismatch>,
    /// Pairs whose separator is not pure.
    pub impure: Vec<(String, String)>,
    pub max_degree: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.impure.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "cells": self.cells,
            "pairs": self.pairs,
            "points_per_cell": self.points_per_cell,
            "passed": self.passed(),
            "max_degree": self.max_degree,
            "mismatches": self.mismatches.iter().take(20).map(Mismatch::to_json).collect::<Vec<_>>(),
            "mismatch_count": self.mismatches.len(),
            "impure": self.impure,
        })
    }
}

/// Every pair of distinct cells on `n` markers, all `k` together; the panel
/// for each `k` is `PositiveZ::panel(n, k, panel, seed)`.
pub fn verify_all(n: usize, panel: usize, samples: usize, seed: u64) -> Result<VerifyReport> {
    let mut cells = Vec::new();
    for k in 0..=n.saturating_sub(4) {
        let zs = PositiveZ::panel(n, k, panel, seed);
        for d in enumerate(n, k) {
            cells.push((d, zs.clone()));
        }
    }
    let cells: Vec<CellSamples> =
        cells.par_iter().map(|(d, zs)| CellSamples::new(d, zs, samples, seed)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..cells.len()).flat_map(|a| (a + 1..cells.len()).map(move |b| (a, b))).collect();
    let results: Vec<(Separator, Vec<Mismatch>)> =
        pairs.par_iter().map(|&(a, b)| verify_pair(&cells[a], &cells[b])).collect::<Result<_>>()?;
    let mut mismatches = Vec::new();
    let mut impure = Vec::new();
    let mut max_degree = 0;
    for (&(a, b), (s, bad)) in pairs.iter().zip(results) {
        if !s.functionary.is_pure() {
            impure.push((cells[a].diagram.to_text(), cells[b].diagram.to_text()));
        }
        max_degree = max_degree.max(s.functionary.degree().unwrap_or(0));
        mismatches.extend(bad);
    }
    Ok(VerifyReport {
        n,
        cells: cells.len(),
        pairs: pairs.len(),
        points_per_cell: panel * samples,
        mismatches,
        impure,
        max_degree,
    })
}
