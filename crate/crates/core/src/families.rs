//! Trace-form maps `x -> gamma*x + Tr_{q^{2n}/q}(x^k)` over `F_{q^{2n}}`,
//! `q = 2^t`, as full evaluation tables.
//!
//! Three named families fix the exponent:
//!
//! | family | exponent `k`      | `gamma` must lie in |
//! |--------|-------------------|---------------------|
//! | `F`    | `2^i (q + 1)`     | `F_{q^2}^*`         |
//! | `G`    | `q^2 + 1`         | `F_q^*`             |
//! | `H`    | `2^i (q^2 + 1)`   | `F_{q^2}^*`         |
//!
//! `GENERIC` takes `k` explicitly. `H` is only known to permute when `n` is
//! even or the trace condition of [`check_h_permutation_condition`] holds.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::element::ElementLiteral;
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    F,
    G,
    H,
    Generic,
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "f" => Ok(Family::F),
            "g" => Ok(Family::G),
            "h" => Ok(Family::H),
            "generic" => Ok(Family::Generic),
            _ => Err(Error::ParseParams(format!("unknown family {s:?}"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F => "f",
            Family::G => "g",
            Family::H => "h",
            Family::Generic => "generic",
        })
    }
}

/// One instance of a family. The field is `F_{2^(2nt)}`.
///
/// Text form: `family=f t=2 n=1 i=1 gamma=g^3` (`k=` for generic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub family: Family,
    pub t: u32,
    pub n: u32,
    /// Required for `F` and `H`, ignored otherwise.
    pub i: Option<u32>,
    pub gamma: ElementLiteral,
    /// Required for `GENERIC`, ignored otherwise.
    pub k: Option<u64>,
}

impl FamilyParams {
    pub fn new(family: Family, t: u32, n: u32, i: Option<u32>, gamma: ElementLiteral) -> Self {
        FamilyParams {
            family,
            t,
            n,
            i,
            gamma,
            k: None,
        }
    }

    pub fn generic(t: u32, n: u32, k: u64, gamma: ElementLiteral) -> Self {
        FamilyParams {
            family: Family::Generic,
            t,
            n,
            i: None,
            gamma,
            k: Some(k),
        }
    }

    pub fn with_gamma(&self, gamma: ElementLiteral) -> Self {
        FamilyParams {
            gamma,
            ..self.clone()
        }
    }

    /// Checks that the parameter combination is complete and in range.
    pub fn validate(&self) -> Result<()> {
        if self.t == 0 || self.n == 0 {
            return Err(Error::ParseParams("t and n must be positive".into()));
        }
        match self.family {
            Family::F | Family::H => match self.i {
                Some(i) if i > 0 => {}
                _ => {
                    return Err(Error::ParseParams(format!(
                        "family {} needs a positive i",
                        self.family
                    )))
                }
            },
            Family::Generic => match self.k {
                Some(k) if k > 0 => {}
                _ => return Err(Error::ParseParams("family generic needs k >= 1".into())),
            },
            Family::G => {}
        }
        Ok(())
    }

    /// `2nt`, the absolute degree of the field these parameters live in.
    pub fn degree(&self) -> u32 {
        2 * self.n * self.t
    }

    /// The field `F_{2^(2nt)}` with its default modulus.
    pub fn field(&self) -> Result<Field> {
        self.validate()?;
        let m = self.n.checked_mul(self.t).and_then(|x| x.checked_mul(2));
        match m {
            Some(m) => Field::with_degree(m),
            None => Err(Error::DegreeOutOfRange { m: u32::MAX }),
        }
    }

    /// The exponent `k` reduced modulo `2^m - 1` into `1..=2^m - 1`.
    pub fn exponent(&self, field: &Field) -> u64 {
        let order = field.order() as u64;
        let m = field.degree();
        // 2^e == 2^(e mod m) in the exponent group
        let two_pow = |e: u64| (1u64 << (e % m as u64)) % order;
        let t = self.t as u64;
        let i = self.i.unwrap_or(0) as u64;
        let k = match self.family {
            Family::F => two_pow(i) * ((two_pow(t) + 1) % order) % order,
            Family::G => (two_pow(2 * t) + 1) % order,
            Family::H => two_pow(i) * ((two_pow(2 * t) + 1) % order) % order,
            Family::Generic => self.k.unwrap_or(1) % order,
        };
        if k == 0 {
            order
        } else {
            k
        }
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={} t={} n={}", self.family, self.t, self.n)?;
        if let (Family::F | Family::H, Some(i)) = (self.family, self.i) {
            write!(f, " i={i}")?;
        }
        if let (Family::Generic, Some(k)) = (self.family, self.k) {
            write!(f, " k={k}")?;
        }
        write!(f, " gamma={}", self.gamma)
    }
}

impl FromStr for FamilyParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut family = None;
        let (mut t, mut n, mut i, mut k, mut gamma) = (None, None, None, None, None);
        for token in s.split_whitespace() {
            let (key, value) = token
                .split_once('=')
                .ok_or_else(|| Error::ParseParams(format!("expected key=value, got {token:?}")))?;
            let num = |v: &str| -> Result<u64> {
                v.parse()
                    .map_err(|_| Error::ParseParams(format!("{key}: not a number: {v:?}")))
            };
            match key {
                "family" => family = Some(value.parse()?),
                "t" => t = Some(num(value)? as u32),
                "n" => n = Some(num(value)? as u32),
                "i" => i = Some(num(value)? as u32),
                "k" => k = Some(num(value)?),
                "gamma" => gamma = Some(value.parse()?),
                _ => return Err(Error::ParseParams(format!("unknown key {key:?}"))),
            }
        }
        let missing = |what: &str| Error::ParseParams(format!("missing {what}"));
        let params = FamilyParams {
            family: family.ok_or_else(|| missing("family"))?,
            t: t.ok_or_else(|| missing("t"))?,
            n: n.ok_or_else(|| missing("n"))?,
            i,
            gamma: gamma.ok_or_else(|| missing("gamma"))?,
            k,
        };
        params.validate()?;
        Ok(params)
    }
}

impl Serialize for FamilyParams {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Full evaluation table of a map `F_{2^m} -> F_{2^m}`, indexed by encoding.
#[derive(Debug, Clone)]
pub struct FunctionTable {
    field: Field,
    images: Vec<u32>,
    params: Option<FamilyParams>,
}

impl FunctionTable {
    pub fn from_images(field: Field, images: Vec<u32>) -> Result<Self> {
        if images.len() != field.size() {
            return Err(Error::Precondition(format!(
                "table has {} entries, field has {}",
                images.len(),
                field.size()
            )));
        }
        if let Some(&bad) = images.iter().find(|&&y| !field.contains(y)) {
            field.check(bad)?;
        }
        Ok(FunctionTable {
            field,
            images,
            params: None,
        })
    }

    pub fn from_fn(field: Field, f: impl Fn(u32) -> u32 + Sync) -> Self {
        let images: Vec<u32> = field.elements().into_par_iter().map(&f).collect();
        debug_assert!(images.iter().all(|&y| field.contains(y)));
        FunctionTable {
            field,
            images,
            params: None,
        }
    }

    pub fn identity(field: Field) -> Self {
        Self::from_fn(field, |x| x)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn params(&self) -> Option<&FamilyParams> {
        self.params.as_ref()
    }

    #[inline]
    pub fn get(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }
}

/// Whether [`build_family`] refuses an `H` instance whose permutation
/// condition fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HPrecondition {
    #[default]
    Enforce,
    Override,
}

/// Evaluates `gamma*x + Tr_{2^m/2^t}(x^k)` for every `x`.
pub fn build_family(
    field: &Field,
    params: &FamilyParams,
    h_precondition: HPrecondition,
) -> Result<FunctionTable> {
    params.validate()?;
    let expected = params.degree();
    if field.degree() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: field.degree(),
        });
    }
    let gamma = params.gamma.resolve(field)?;
    let t = params.t;
    if gamma == 0 {
        return Err(Error::Precondition("gamma must be nonzero".into()));
    }
    match params.family {
        Family::F | Family::H => require_subfield(field, gamma, 2 * t, "F_{q^2}")?,
        Family::G => require_subfield(field, gamma, t, "F_q")?,
        Family::Generic => {}
    }
    if params.family == Family::H && h_precondition == HPrecondition::Enforce {
        let i = params.i.unwrap_or(1);
        if !check_h_permutation_condition(field, t, params.n, i, gamma, None)? {
            return Err(Error::Precondition(format!(
                "family h with odd n={} needs Tr_{{q^2/q}}(gamma^-(2^(i+1)))^((q-1)/gcd(2^(i+1)-1, q-1)) != 1, \
                 which fails for gamma={} (pass the override flag to build anyway)",
                params.n, params.gamma
            )));
        }
    }

    let k = params.exponent(field);
    let f = field.clone();
    let mut table = FunctionTable::from_fn(field.clone(), move |x| {
        if x == 0 {
            0
        } else {
            f.mul(gamma, x) ^ f.rel_trace_unchecked(f.pow(x, k), t)
        }
    });
    table.params = Some(params.clone());
    Ok(table)
}

fn require_subfield(field: &Field, gamma: u32, s: u32, name: &str) -> Result<()> {
    if !field.is_in_subfield(gamma, s)? {
        return Err(Error::Precondition(format!(
            "gamma={gamma:#x} must be a nonzero element of {name} = F_2^{s}"
        )));
    }
    Ok(())
}

/// True iff every element appears exactly once among the images.
pub fn is_permutation(table: &FunctionTable) -> bool {
    let mut seen = vec![0u64; table.len().div_ceil(64)];
    for &y in table.images() {
        let (w, b) = ((y / 64) as usize, y % 64);
        if seen[w] >> b & 1 == 1 {
            return false;
        }
        seen[w] |= 1 << b;
    }
    true
}

/// `2^(i+1)`: the exponent applied to `1/gamma` inside the trace.
pub fn h_condition_exponent(i: u32) -> u64 {
    1u64 << (i + 1).min(63)
}

/// `2^i + 1`: the alternative reading of that exponent, kept for comparison.
pub fn h_condition_exponent_alt(i: u32) -> u64 {
    (1u64 << i.min(62)) + 1
}

/// Sufficient condition for `h = gamma*x + Tr(x^(2^i (q^2+1)))` to permute
/// `F_{q^{2n}}`: `n` even, or `n` odd and
/// `Tr_{q^2/q}(gamma^-e)^((q-1)/gcd(2^(i+1)-1, q-1)) != 1`.
///
/// `exponent` is `e`; `None` means `2^(i+1)`.
pub fn check_h_permutation_condition(
    field: &Field,
    t: u32,
    n: u32,
    i: u32,
    gamma: u32,
    exponent: Option<u64>,
) -> Result<bool> {
    let expected = 2 * n * t;
    if field.degree() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            got: field.degree(),
        });
    }
    field.check(gamma)?;
    if gamma == 0 || !field.is_in_subfield(gamma, 2 * t)? {
        return Err(Error::Precondition(format!(
            "gamma={gamma:#x} must be a nonzero element of F_{{q^2}} = F_2^{}",
            2 * t
        )));
    }
    if n.is_multiple_of(2) {
        return Ok(true);
    }
    let y = field.pow(
        field.inv(gamma)?,
        exponent.unwrap_or_else(|| h_condition_exponent(i)),
    );
    // y lies in F_{q^2}, so its trace down to F_q is y + y^q
    let trace = y ^ field.frobenius(y, t);
    let q_minus_1 = (1u64 << t) - 1;
    // gcd(2^a - 1, 2^b - 1) = 2^gcd(a, b) - 1
    let g = (1u64 << gcd(i as u64 + 1, t as u64)) - 1;
    Ok(field.pow(trace, q_minus_1 / g) != 1)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
