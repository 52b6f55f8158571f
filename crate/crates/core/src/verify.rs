//! Exhaustive verification suites for the uniformity claims about the
//! `f`, `g`, `h` families and the root-count trichotomy of affine linearized
//! equations.
//!
//! Every suite walks a fixed parameter grid, keeps the instances whose field
//! degree `2nt` is at most `max_m`, and sweeps every admissible `gamma`.
//! Each (instance, claim) pair gets exactly one [`Verdict`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cdiff::c_uniformity;
use crate::element::ElementLiteral;
use crate::error::{Error, Result};
use crate::families::{
    build_family, check_h_permutation_condition, gcd, h_condition_exponent,
    h_condition_exponent_alt, is_permutation, Family, FamilyParams, FunctionTable, HPrecondition,
};
use crate::field::Field;
use crate::linsolve::{allowed_root_counts, count_roots, AffineLinearizedEq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    T1,
    T2,
    T3,
    #[serde(rename = "LEMMA")]
    Lemma,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::T1, Suite::T2, Suite::T3, Suite::Lemma];
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t1" => Ok(Suite::T1),
            "t2" => Ok(Suite::T2),
            "t3" => Ok(Suite::T3),
            "lemma" => Ok(Suite::Lemma),
            _ => Err(Error::ParseParams(format!("unknown suite {s:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::T1 => "t1",
            Suite::T2 => "t2",
            Suite::T3 => "t3",
            Suite::Lemma => "lemma",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub instance: String,
    pub claim: String,
    pub observed: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationSuiteResult {
    pub suite: Suite,
    pub max_m: u32,
    pub verdicts: Vec<Verdict>,
    /// Observations that are reported but never fail the suite.
    pub notes: Vec<String>,
    pub elapsed_seconds: f64,
}

impl VerificationSuiteResult {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.pass)
    }

    /// One descriptor per verdict.
    pub fn parameter_grid(&self) -> Vec<String> {
        self.verdicts.iter().map(|v| v.instance.clone()).collect()
    }
}

/// `(t, i, n)` instances of the `f` grid.
pub const T1_GRID: &[(u32, u32, u32)] = &[
    (2, 1, 1),
    (2, 1, 2),
    (3, 1, 1),
    (1, 1, 2),
    (2, 2, 1),
    (3, 2, 1),
    (2, 2, 2),
];

/// `(t, n)` instances of the `g` grid.
pub const T2_GRID: &[(u32, u32)] = &[(1, 1), (1, 2), (2, 1), (2, 2), (3, 1), (4, 1)];

/// `(t, i, n)` instances of the `h` grid.
pub const T3_GRID: &[(u32, u32, u32)] = &[
    (2, 1, 2),
    (2, 1, 1),
    (1, 1, 2),
    (2, 2, 2),
    (2, 2, 1),
    (3, 1, 1),
    (3, 2, 1),
];

/// Largest `t` and `i` swept by the lemma suite.
pub const LEMMA_MAX_T: u32 = 6;
pub const LEMMA_MAX_I: u32 = 6;

pub fn run_suite(suite: Suite, max_m: u32) -> Result<VerificationSuiteResult> {
    let start = Instant::now();
    let (verdicts, notes) = match suite {
        Suite::T1 => verify_t1(max_m)?,
        Suite::T2 => verify_t2(max_m)?,
        Suite::T3 => verify_t3(max_m)?,
        Suite::Lemma => verify_lemma(max_m)?,
    };
    Ok(VerificationSuiteResult {
        suite,
        max_m,
        verdicts,
        notes,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

type SuiteOutput = (Vec<Verdict>, Vec<String>);

/// Largest uniformity over `cs`, with the first `c` attaining it.
pub fn max_uniformity(table: &FunctionTable, cs: &[u32]) -> (u32, Option<u32>) {
    let per_c: Vec<u32> = cs
        .par_iter()
        .map(|&c| c_uniformity(table, c).uniformity)
        .collect();
    per_c.iter().zip(cs).fold(
        (0, None),
        |(best, at), (&u, &c)| if u > best { (u, Some(c)) } else { (best, at) },
    )
}

/// Elements of `F_{2^outer}` not in `F_{2^inner}`, plus `F_2` removed.
fn c_range(field: &Field, outer: u32, inner: u32) -> Result<Vec<u32>> {
    let inner: Vec<u32> = field.subfield_elements(inner)?;
    Ok(field
        .subfield_elements(outer)?
        .into_iter()
        .filter(|c| *c > 1 && inner.binary_search(c).is_err())
        .collect())
}

fn gamma_candidates(field: &Field, s: u32) -> Result<Vec<u32>> {
    Ok(field
        .subfield_elements(s)?
        .into_iter()
        .filter(|&g| g != 0)
        .collect())
}

fn uniformity_verdict(
    instance: &str,
    table: &FunctionTable,
    cs: &[u32],
    range_name: &str,
    bound: u32,
) -> Verdict {
    let (u, at) = max_uniformity(table, cs);
    let claim = if bound == 1 {
        format!("PcN for all c in {range_name}")
    } else {
        format!("uniformity <= {bound} for all c in {range_name}")
    };
    let observed = match at {
        Some(c) if u > bound => format!("uniformity {u} at c={c} ({} c checked)", cs.len()),
        _ => format!("max uniformity {u} over {} c", cs.len()),
    };
    Verdict {
        instance: instance.to_string(),
        claim,
        observed,
        pass: u <= bound,
    }
}

fn permutation_verdict(instance: &str, table: &FunctionTable) -> Verdict {
    let ok = is_permutation(table);
    Verdict {
        instance: instance.to_string(),
        claim: "permutation".into(),
        observed: if ok { "bijective" } else { "not bijective" }.into(),
        pass: ok,
    }
}

fn params(family: Family, t: u32, n: u32, i: u32, gamma: u32) -> FamilyParams {
    FamilyParams::new(family, t, n, Some(i), ElementLiteral::Bits(gamma as u64))
}

/// Verdicts for one `(family, t, i, n)` across all admissible `gamma`.
fn family_verdicts(
    family: Family,
    t: u32,
    i: u32,
    n: u32,
    gammas: &[u32],
    beyond_bound: Option<u32>,
) -> Result<Vec<Verdict>> {
    let m = 2 * n * t;
    let field = Field::with_degree(m)?;
    let (in_range, in_name) = match family {
        // g is claimed PcN on the whole field minus F_2
        Family::G => (c_range(&field, m, 1)?, "F_{q^2n} \\ F_2"),
        _ => (c_range(&field, 2 * t, 1)?, "F_{q^2} \\ F_2"),
    };
    let beyond = if n > 1 && family != Family::G {
        c_range(&field, m, 2 * t)?
    } else {
        Vec::new()
    };

    let per_gamma: Result<Vec<Vec<Verdict>>> = gammas
        .par_iter()
        .map(|&gamma| {
            let p = params(family, t, n, i, gamma);
            let table = build_family(&field, &p, HPrecondition::Enforce)?;
            let instance = p.to_string();
            let mut out = vec![
                permutation_verdict(&instance, &table),
                uniformity_verdict(&instance, &table, &in_range, in_name, 1),
            ];
            if let Some(bound) = beyond_bound {
                if !beyond.is_empty() {
                    out.push(uniformity_verdict(
                        &instance,
                        &table,
                        &beyond,
                        "F_{q^2n} \\ F_{q^2}",
                        bound,
                    ));
                }
            }
            Ok(out)
        })
        .collect();
    Ok(per_gamma?.into_iter().flatten().collect())
}

fn verify_t1(max_m: u32) -> Result<SuiteOutput> {
    let mut verdicts = Vec::new();
    for &(t, i, n) in T1_GRID.iter().filter(|&&(t, _, n)| 2 * n * t <= max_m) {
        let field = Field::with_degree(2 * n * t)?;
        let gammas = gamma_candidates(&field, 2 * t)?;
        let bound = (gcd(i as u64, t as u64) == 1).then_some(2);
        verdicts.extend(family_verdicts(Family::F, t, i, n, &gammas, bound)?);
    }
    Ok((verdicts, Vec::new()))
}

fn verify_t2(max_m: u32) -> Result<SuiteOutput> {
    let mut verdicts = Vec::new();
    for &(t, n) in T2_GRID.iter().filter(|&&(t, n)| 2 * n * t <= max_m) {
        let field = Field::with_degree(2 * n * t)?;
        let gammas = gamma_candidates(&field, t)?;
        verdicts.extend(family_verdicts(Family::G, t, 1, n, &gammas, None)?);
    }

    let mut notes = Vec::new();
    // q = 2 lies outside the parameter range of the permutation result; record
    // what actually happens there without failing the suite.
    if max_m >= 6 {
        let field = Field::with_degree(6)?;
        let p = FamilyParams::new(Family::G, 1, 3, None, ElementLiteral::Bits(1));
        let table = build_family(&field, &p, HPrecondition::Enforce)?;
        let cs = c_range(&field, 6, 1)?;
        let (u, at) = max_uniformity(&table, &cs);
        notes.push(format!(
            "outside grid: {p} (q = 2) is a permutation={} with max uniformity {u} over c in F_64 \\ F_2{}",
            is_permutation(&table),
            at.filter(|_| u > 1).map(|c| format!(" (first at c={c})")).unwrap_or_default()
        ));
    }
    Ok((verdicts, notes))
}

fn verify_t3(max_m: u32) -> Result<SuiteOutput> {
    let mut verdicts = Vec::new();
    let mut notes = Vec::new();
    for &(t, i, n) in T3_GRID.iter().filter(|&&(t, _, n)| 2 * n * t <= max_m) {
        let field = Field::with_degree(2 * n * t)?;
        let all_gammas = gamma_candidates(&field, 2 * t)?;

        let mut passing = Vec::new();
        let mut tally = ConditionTally::default();
        for &gamma in &all_gammas {
            let p = params(Family::H, t, n, i, gamma);
            let table = build_family(&field, &p, HPrecondition::Override)?;
            let perm = is_permutation(&table);
            let cond = check_h_permutation_condition(&field, t, n, i, gamma, None)?;
            let alt = check_h_permutation_condition(
                &field,
                t,
                n,
                i,
                gamma,
                Some(h_condition_exponent_alt(i)),
            )?;
            tally.add(cond, alt, perm);
            verdicts.push(Verdict {
                instance: p.to_string(),
                claim: "condition implies permutation".into(),
                observed: format!("condition={cond} permutation={perm}"),
                pass: !cond || perm,
            });
            if cond {
                passing.push(gamma);
            }
        }
        if n % 2 == 1 {
            notes.push(tally.describe(t, i, n));
        }

        let bound = (gcd(i as u64, t as u64) == 1).then_some(2);
        verdicts.extend(family_verdicts(Family::H, t, i, n, &passing, bound)?);
    }
    Ok((verdicts, notes))
}

#[derive(Default)]
struct ConditionTally {
    gammas: usize,
    permutations: usize,
    passing: usize,
    passing_not_perm: usize,
    perm_not_passing: usize,
    alt_passing: usize,
    alt_passing_not_perm: usize,
}

impl ConditionTally {
    fn add(&mut self, cond: bool, alt: bool, perm: bool) {
        self.gammas += 1;
        self.permutations += perm as usize;
        self.passing += cond as usize;
        self.passing_not_perm += (cond && !perm) as usize;
        self.perm_not_passing += (perm && !cond) as usize;
        self.alt_passing += alt as usize;
        self.alt_passing_not_perm += (alt && !perm) as usize;
    }

    fn describe(&self, t: u32, i: u32, n: u32) -> String {
        format!(
            "h t={t} i={i} n={n}: {} gammas, {} permutations; exponent 2^(i+1)={}: {} pass, {} pass without permuting, {} permute without passing; \
             exponent 2^i+1={}: {} pass, {} pass without permuting",
            self.gammas,
            self.permutations,
            h_condition_exponent(i),
            self.passing,
            self.passing_not_perm,
            self.perm_not_passing,
            h_condition_exponent_alt(i),
            self.alt_passing,
            self.alt_passing_not_perm,
        )
    }
}

fn verify_lemma(max_m: u32) -> Result<SuiteOutput> {
    let mut verdicts = Vec::new();
    for t in 1..=LEMMA_MAX_T.min(max_m) {
        let field = Field::with_degree(t)?;
        for i in 1..=LEMMA_MAX_I {
            let allowed = allowed_root_counts(i, t);
            let mut seen = std::collections::BTreeSet::new();
            for alpha in 1..field.size() as u32 {
                for beta in field.elements() {
                    let eq = AffineLinearizedEq::new(field.clone(), i, alpha, beta)?;
                    seen.insert(count_roots(&eq));
                }
            }
            let pass = seen.iter().all(|c| allowed.contains(c));
            verdicts.push(Verdict {
                instance: format!("t={t} i={i}"),
                claim: format!("root counts in {{0, 1, {}}}", allowed[2]),
                observed: format!("{seen:?}"),
                pass,
            });
        }
    }
    Ok((verdicts, Vec::new()))
}
