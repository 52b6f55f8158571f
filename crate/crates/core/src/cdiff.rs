//! c-differential analysis of a function table.
//!
//! For a multiplier `c` the c-derivative of `f` in direction `a` is
//! `x -> f(x + a) - c f(x)` (subtraction is addition here). The c-DDT entry at
//! `(a, b)` counts the `x` mapping to `b`, and the c-differential uniformity is
//! the largest entry, taken over all `(a, b)` except `a = 0` when `c = 1`.
//!
//! [`c_uniformity`] never solves for individual `(a, b)`: for each `a` it
//! histograms the `2^m` derivative values once, so a whole table costs
//! `O(2^(2m))` per `c` with a single `2^m` histogram per worker.

use std::collections::BTreeMap;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::FunctionTable;
use crate::field::Field;

/// Maximum number of `(a, b)` witnesses kept per report.
pub const WITNESS_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Classification {
    #[serde(rename = "PCN")]
    Pcn,
    #[serde(rename = "APCN")]
    Apcn,
    #[serde(rename = "OTHER")]
    Other,
}

impl Classification {
    pub fn from_uniformity(u: u32) -> Self {
        match u {
            1 => Classification::Pcn,
            2 => Classification::Apcn,
            _ => Classification::Other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CUniformityReport {
    pub c: u32,
    pub uniformity: u32,
    pub classification: Classification,
    /// entry value -> number of `(a, b)` pairs with that value; zero counts omitted
    pub spectrum: BTreeMap<u32, u64>,
    /// first `(a, b)` pairs (lexicographic) attaining the maximum
    pub witnesses: Vec<(u32, u32)>,
    /// `c = 1`: this is the classical DDT and `a = 0` was left out
    pub classical_ddt: bool,
}

#[inline]
pub fn c_derivative(table: &FunctionTable, c: u32, a: u32, x: u32) -> u32 {
    table.get(x ^ a) ^ table.field().mul(c, table.get(x))
}

pub fn cddt_entry(table: &FunctionTable, c: u32, a: u32, b: u32) -> u32 {
    table
        .field()
        .elements()
        .filter(|&x| c_derivative(table, c, a, x) == b)
        .count() as u32
}

/// The row `b -> cddt_entry(a, b)` for fixed `a`.
pub fn cddt_row(table: &FunctionTable, c: u32, a: u32) -> Vec<u32> {
    let scaled = scaled_images(table, c);
    let mut hist = vec![0u32; table.len()];
    fill_row(table.images(), &scaled, a, &mut hist);
    hist
}

fn scaled_images(table: &FunctionTable, c: u32) -> Vec<u32> {
    let field = table.field();
    table.images().iter().map(|&y| field.mul(c, y)).collect()
}

#[inline]
fn fill_row(images: &[u32], scaled: &[u32], a: u32, hist: &mut [u32]) {
    hist.fill(0);
    for (x, &cy) in scaled.iter().enumerate() {
        let d = images[x ^ a as usize] ^ cy;
        hist[d as usize] += 1;
    }
}

struct Accumulator {
    hist: Vec<u32>,
    spectrum: Vec<u64>,
    best: u32,
    witnesses: Vec<(u32, u32)>,
}

impl Accumulator {
    fn new(size: usize) -> Self {
        Accumulator {
            hist: vec![0; size],
            spectrum: vec![0; size + 1],
            best: 0,
            witnesses: Vec::new(),
        }
    }

    fn absorb_row(&mut self, a: u32) {
        let row_max = *self.hist.iter().max().unwrap_or(&0);
        for &v in &self.hist {
            self.spectrum[v as usize] += 1;
        }
        if row_max > self.best {
            self.best = row_max;
            self.witnesses.clear();
        }
        if row_max == self.best && self.witnesses.len() < WITNESS_CAP {
            let room = WITNESS_CAP - self.witnesses.len();
            self.witnesses.extend(
                self.hist
                    .iter()
                    .enumerate()
                    .filter(|&(_, &v)| v == row_max)
                    .take(room)
                    .map(|(b, _)| (a, b as u32)),
            );
        }
    }

    // `self` covers smaller `a` than `other`.
    fn merge(mut self, other: Self) -> Self {
        for (s, o) in self.spectrum.iter_mut().zip(&other.spectrum) {
            *s += o;
        }
        if other.best > self.best {
            self.best = other.best;
            self.witnesses = other.witnesses;
        } else if other.best == self.best {
            self.witnesses.extend(other.witnesses);
            self.witnesses.truncate(WITNESS_CAP);
        }
        self
    }
}

/// c-differential uniformity, spectrum and witnesses of `table` at `c`.
pub fn c_uniformity(table: &FunctionTable, c: u32) -> CUniformityReport {
    let size = table.len();
    let scaled = scaled_images(table, c);
    let images = table.images();
    let first_a = if c == 1 { 1 } else { 0 };

    let acc = (first_a..size as u32)
        .into_par_iter()
        .with_min_len(16)
        .fold(
            || Accumulator::new(size),
            |mut acc, a| {
                fill_row(images, &scaled, a, &mut acc.hist);
                acc.absorb_row(a);
                acc
            },
        )
        .reduce_with(Accumulator::merge)
        .expect("every field has at least two elements");

    let spectrum: BTreeMap<u32, u64> = acc
        .spectrum
        .iter()
        .enumerate()
        .filter(|&(_, &n)| n > 0)
        .map(|(v, &n)| (v as u32, n))
        .collect();
    CUniformityReport {
        c,
        uniformity: acc.best,
        classification: Classification::from_uniformity(acc.best),
        spectrum,
        witnesses: acc.witnesses,
        classical_ddt: c == 1,
    }
}

/// Which multipliers [`scan_c`] visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CRange {
    All,
    /// every element of the subfield `F_{2^s}`
    Subfield(u32),
    Set(Vec<u32>),
}

impl CRange {
    /// Resolves the range into ascending encodings.
    pub fn elements(&self, field: &Field) -> Result<Vec<u32>> {
        Ok(match self {
            CRange::All => field.elements().collect(),
            CRange::Subfield(s) => field.subfield_elements(*s)?,
            CRange::Set(list) => {
                for &c in list {
                    field.check(c)?;
                }
                let mut list = list.clone();
                list.sort_unstable();
                list.dedup();
                list
            }
        })
    }
}

/// One report per `c` in `range` minus `exclusions`, ascending in `c`.
pub fn scan_c(
    table: &FunctionTable,
    range: &CRange,
    exclusions: &[u32],
) -> Result<Vec<CUniformityReport>> {
    let cs: Vec<u32> = range
        .elements(table.field())?
        .into_iter()
        .filter(|c| !exclusions.contains(c))
        .collect();
    Ok(cs.into_par_iter().map(|c| c_uniformity(table, c)).collect())
}

/// Where `c` sits relative to `F_2 ⊂ F_q ⊂ F_{q^2}` with `q = 2^t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum TheoremCase {
    #[serde(rename = "IN_F2")]
    InF2,
    #[serde(rename = "IN_FQ_MINUS_F2")]
    InFqMinusF2,
    #[serde(rename = "IN_FQ2_MINUS_FQ")]
    InFq2MinusFq,
    #[serde(rename = "BEYOND_FQ2")]
    BeyondFq2,
}

pub fn classify_theorem_case(field: &Field, t: u32, c: u32) -> Result<TheoremCase> {
    let m = field.degree();
    if t == 0 || !m.is_multiple_of(2 * t) {
        return Err(Error::DimensionMismatch {
            expected: 2 * t,
            got: m,
        });
    }
    field.check(c)?;
    Ok(if c <= 1 {
        TheoremCase::InF2
    } else if field.is_in_subfield(c, t)? {
        TheoremCase::InFqMinusF2
    } else if field.is_in_subfield(c, 2 * t)? {
        TheoremCase::InFq2MinusFq
    } else {
        TheoremCase::BeyondFq2
    })
}

/// Writes the full c-DDT as CSV (`a,b,count`, lexicographic in `(a, b)`).
/// Returns the number of data rows written.
pub fn write_cddt_csv<W: Write>(
    mut out: W,
    table: &FunctionTable,
    c: u32,
    omit_zero: bool,
) -> io::Result<u64> {
    if c == 1 {
        writeln!(
            out,
            "# c=1: classical DDT; row a=0 is listed but excluded from the uniformity"
        )?;
    }
    writeln!(out, "a,b,count")?;
    let scaled = scaled_images(table, c);
    let mut hist = vec![0u32; table.len()];
    let mut rows = 0;
    for a in table.field().elements() {
        fill_row(table.images(), &scaled, a, &mut hist);
        for (b, &count) in hist.iter().enumerate() {
            if omit_zero && count == 0 {
                continue;
            }
            writeln!(out, "{a},{b},{count}")?;
            rows += 1;
        }
    }
    Ok(rows)
}
