//! Arithmetic in the binary field F_{2^m} for 1 <= m <= 24.
//!
//! Elements are stored as `u32` coordinate bitmasks in the polynomial basis:
//! bit `j` holds the coefficient of `X^j`. Subfields are never materialised as
//! separate towers; `F_{2^s}` (for `s | m`) is the set of fixed points of the
//! `s`-th power of Frobenius inside the one big field.
//!
//! The raw methods on [`Field`] operate on bare `u32` encodings and are what
//! the table sweeps use. [`FieldElement`] binds an encoding to its field and
//! rejects operations that mix fields.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Fields up to this degree get log/antilog tables.
const TABLE_DEGREE: u32 = 16;

struct LogTables {
    /// `exp[k] = g^k` for `0 <= k < 2 * order`, so a sum of two logs indexes directly.
    exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused.
    log: Vec<u32>,
}

/// A concrete binary field `F_{2^m}` with its defining polynomial and a fixed
/// multiplicative generator.
#[derive(Clone)]
pub struct Field {
    m: u32,
    modulus: u32,
    generator: u32,
    tables: Option<Arc<LogTables>>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.modulus == other.modulus
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("m", &self.m)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .field("generator", &self.generator)
            .finish()
    }
}

impl Field {
    /// Builds `F_{2^m}`.
    ///
    /// Without an explicit modulus the smallest irreducible polynomial of
    /// degree `m` (by integer encoding) is used; for `m = 1` that is `X`.
    /// The generator is the smallest element of multiplicative order `2^m - 1`.
    pub fn new(m: u32, modulus: Option<u64>) -> Result<Self> {
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::DegreeOutOfRange { m });
        }
        let modulus = match modulus {
            Some(p) => {
                if poly_degree(p) != Some(m) {
                    return Err(Error::ModulusDegree { m, modulus: p });
                }
                let p = p as u32;
                if let Some(factor) = find_factor(p) {
                    return Err(Error::ReducibleModulus { modulus: p, factor });
                }
                p
            }
            None => smallest_irreducible(m),
        };

        let mut field = Field {
            m,
            modulus,
            generator: 0,
            tables: None,
        };
        field.generator = field.find_generator();
        if m <= TABLE_DEGREE {
            field.tables = Some(Arc::new(field.build_tables()));
        }
        Ok(field)
    }

    /// Shorthand for [`Field::new`] with the default modulus.
    pub fn with_degree(m: u32) -> Result<Self> {
        Self::new(m, None)
    }

    /// Extension degree over F_2.
    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Defining polynomial, bit `j` = coefficient of `X^j`.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Number of elements, `2^m`.
    pub fn size(&self) -> usize {
        1usize << self.m
    }

    /// Order of the multiplicative group, `2^m - 1`.
    pub fn order(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    pub fn contains(&self, x: u32) -> bool {
        (x as u64) < (1u64 << self.m)
    }

    pub fn check(&self, x: u32) -> Result<u32> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::ElementOutOfRange {
                value: x as u64,
                m: self.m,
            })
        }
    }

    /// All encodings `0..2^m` in ascending order.
    pub fn elements(&self) -> std::ops::Range<u32> {
        0..(self.size() as u32)
    }

    /// Binds an encoding to this field.
    pub fn element(&self, value: u32) -> Result<FieldElement<'_>> {
        self.check(value)?;
        Ok(FieldElement { field: self, value })
    }

    #[inline]
    pub fn add(&self, x: u32, y: u32) -> u32 {
        x ^ y
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        match &self.tables {
            Some(t) => {
                if x == 0 || y == 0 {
                    0
                } else {
                    t.exp[(t.log[x as usize] + t.log[y as usize]) as usize]
                }
            }
            None => self.mul_clmul(x, y),
        }
    }

    #[inline]
    pub fn square(&self, x: u32) -> u32 {
        self.mul(x, x)
    }

    /// Carry-less multiply followed by reduction; independent of the tables.
    pub fn mul_clmul(&self, x: u32, y: u32) -> u32 {
        reduce(clmul(x, y), self.modulus, self.m)
    }

    pub fn inv(&self, x: u32) -> Result<u32> {
        if x == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(match &self.tables {
            Some(t) => {
                let l = t.log[x as usize];
                t.exp[((self.order() - l) % self.order()) as usize]
            }
            None => self.pow(x, (self.order() - 1) as u64),
        })
    }

    /// `x^k` by square-and-multiply; `0^0 = 1`.
    pub fn pow(&self, x: u32, k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if x == 0 {
            return 0;
        }
        if let Some(t) = &self.tables {
            let order = self.order() as u64;
            let e = (t.log[x as usize] as u64 * (k % order)) % order;
            return t.exp[e as usize];
        }
        self.pow_clmul(x, k)
    }

    fn pow_clmul(&self, x: u32, mut k: u64) -> u32 {
        let mut base = x;
        let mut acc = 1;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul_clmul(acc, base);
            }
            base = self.mul_clmul(base, base);
            k >>= 1;
        }
        acc
    }

    /// `x^(2^s)` by repeated squaring. `s` is taken modulo `m`.
    pub fn frobenius(&self, x: u32, s: u32) -> u32 {
        let mut y = x;
        for _ in 0..(s % self.m) {
            y = self.square(y);
        }
        y
    }

    pub fn check_subfield(&self, s: u32) -> Result<()> {
        if s == 0 || !self.m.is_multiple_of(s) {
            Err(Error::NotASubfield { s, m: self.m })
        } else {
            Ok(())
        }
    }

    /// Relative trace from `F_{2^m}` down to `F_{2^s}`:
    /// `x + x^(2^s) + x^(2^(2s)) + ... ` with `m/s` terms.
    pub fn rel_trace(&self, x: u32, s: u32) -> Result<u32> {
        self.check_subfield(s)?;
        Ok(self.rel_trace_unchecked(x, s))
    }

    /// [`Field::rel_trace`] without the divisibility check.
    #[inline]
    pub fn rel_trace_unchecked(&self, x: u32, s: u32) -> u32 {
        let mut acc = 0;
        let mut y = x;
        for _ in 0..(self.m / s) {
            acc ^= y;
            for _ in 0..s {
                y = self.square(y);
            }
        }
        acc
    }

    pub fn is_in_subfield(&self, x: u32, s: u32) -> Result<bool> {
        self.check_subfield(s)?;
        Ok(self.frobenius(x, s) == x)
    }

    /// The `2^s` elements of the subfield `F_{2^s}`, ascending.
    pub fn subfield_elements(&self, s: u32) -> Result<Vec<u32>> {
        self.check_subfield(s)?;
        let sub_order = ((1u64 << s) - 1) as u32;
        // g^((2^m-1)/(2^s-1)) generates the multiplicative group of the subfield.
        let root = self.pow(self.generator, (self.order() / sub_order) as u64);
        let mut out = Vec::with_capacity(1 << s);
        out.push(0);
        let mut y = 1;
        for _ in 0..sub_order {
            out.push(y);
            y = self.mul(y, root);
        }
        out.sort_unstable();
        Ok(out)
    }

    fn find_generator(&self) -> u32 {
        let order = self.order();
        let primes = prime_factors(order);
        (1..=order)
            .find(|&x| {
                primes
                    .iter()
                    .all(|&p| self.pow_clmul(x, (order / p) as u64) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&self) -> LogTables {
        let order = self.order() as usize;
        let mut exp = vec![0u32; 2 * order];
        let mut log = vec![0u32; self.size()];
        let mut y = 1u32;
        for k in 0..order {
            exp[k] = y;
            exp[k + order] = y;
            log[y as usize] = k as u32;
            y = self.mul_clmul(y, self.generator);
        }
        LogTables { exp, log }
    }
}

/// An element bound to a particular field. Mixing fields is an error.
#[derive(Clone, Copy)]
pub struct FieldElement<'f> {
    field: &'f Field,
    value: u32,
}

impl fmt::Debug for FieldElement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x} in F_2^{}", self.value, self.field.m)
    }
}

impl PartialEq for FieldElement<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.value == other.value
    }
}

impl<'f> FieldElement<'f> {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &'f Field {
        self.field
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if std::ptr::eq(self.field, other.field) || self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn wrap(&self, value: u32) -> Self {
        FieldElement {
            field: self.field,
            value,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.value ^ other.value))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(self.wrap(self.field.mul(self.value, other.value)))
    }

    pub fn inv(&self) -> Result<Self> {
        Ok(self.wrap(self.field.inv(self.value)?))
    }

    pub fn pow(&self, k: u64) -> Self {
        self.wrap(self.field.pow(self.value, k))
    }

    pub fn frobenius(&self, s: u32) -> Self {
        self.wrap(self.field.frobenius(self.value, s))
    }

    pub fn rel_trace(&self, s: u32) -> Result<Self> {
        Ok(self.wrap(self.field.rel_trace(self.value, s)?))
    }

    pub fn is_in_subfield(&self, s: u32) -> Result<bool> {
        self.field.is_in_subfield(self.value, s)
    }
}

fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

fn poly_rem(mut a: u64, b: u64) -> u64 {
    let db = poly_degree(b).expect("division by the zero polynomial");
    while let Some(da) = poly_degree(a) {
        if da < db {
            break;
        }
        a ^= b << (da - db);
    }
    a
}

/// Smallest nontrivial factor of `p` over F_2, by trial division.
fn find_factor(p: u32) -> Option<u32> {
    let d = poly_degree(p as u64)?;
    let bound = 1u64 << (d / 2 + 1);
    (2..bound)
        .find(|&f| poly_rem(p as u64, f) == 0)
        .map(|f| f as u32)
}

fn smallest_irreducible(m: u32) -> u32 {
    ((1u32 << m)..(1u32 << (m + 1)))
        .find(|&p| find_factor(p).is_none())
        .expect("irreducible polynomials exist in every degree")
}

/// Carry-less product of two polynomials over F_2.
#[inline]
pub(crate) fn clmul(x: u32, y: u32) -> u64 {
    let mut acc = 0u64;
    let mut a = x as u64;
    let mut b = y;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    acc
}

#[inline]
fn reduce(mut p: u64, modulus: u32, m: u32) -> u32 {
    let modulus = modulus as u64;
    while let Some(d) = poly_degree(p) {
        if d < m {
            break;
        }
        p ^= modulus << (d - m);
    }
    p as u32
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
