//! Roots of affine linearized equations `x^(2^i) + alpha*x + beta = 0` over
//! `F_{2^t}`.
//!
//! `L(x) = x^(2^i) + alpha*x` is F_2-linear, so the root set is empty or a
//! coset of `ker L`. Its size is therefore 0, 1 or `2^gcd(i, t)` (the kernel
//! of `L`, when nontrivial, is a one-dimensional `F_{2^gcd(i,t)}`-space).
//! Roots are found by Gaussian elimination over F_2 on the matrix of `L`.

use crate::error::{Error, Result};
use crate::field::Field;

/// Largest field degree accepted for a linearized equation.
pub const MAX_LINSOLVE_DEGREE: u32 = 16;

#[derive(Debug, Clone)]
pub struct AffineLinearizedEq {
    field: Field,
    i: u32,
    alpha: u32,
    beta: u32,
}

impl AffineLinearizedEq {
    pub fn new(field: Field, i: u32, alpha: u32, beta: u32) -> Result<Self> {
        if field.degree() > MAX_LINSOLVE_DEGREE {
            return Err(Error::DegreeOutOfRange { m: field.degree() });
        }
        if i == 0 {
            return Err(Error::Precondition("i must be positive".into()));
        }
        field.check(alpha)?;
        field.check(beta)?;
        if alpha == 0 {
            return Err(Error::ZeroAlpha);
        }
        Ok(AffineLinearizedEq {
            field,
            i,
            alpha,
            beta,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    /// The linear part `x^(2^i) + alpha*x`.
    pub fn linear_part(&self, x: u32) -> u32 {
        self.field.frobenius(x, self.i) ^ self.field.mul(self.alpha, x)
    }

    /// Left-hand side evaluated at `x`.
    pub fn eval(&self, x: u32) -> u32 {
        self.linear_part(x) ^ self.beta
    }
}

/// All roots, ascending.
pub fn solve_affine(eq: &AffineLinearizedEq) -> Vec<u32> {
    let m = eq.field.degree();
    // pivots[bit] = (image vector with leading bit `bit`, preimage combination)
    let mut pivots: Vec<Option<(u32, u32)>> = vec![None; m as usize];
    let mut kernel = Vec::new();

    for j in 0..m {
        let (mut v, mut combo) = (eq.linear_part(1 << j), 1u32 << j);
        loop {
            if v == 0 {
                kernel.push(combo);
                break;
            }
            let lead = 31 - v.leading_zeros();
            match pivots[lead as usize] {
                Some((pv, pc)) => {
                    v ^= pv;
                    combo ^= pc;
                }
                None => {
                    pivots[lead as usize] = Some((v, combo));
                    break;
                }
            }
        }
    }

    // particular solution of L(x) = beta (signs vanish in characteristic 2)
    let (mut residual, mut particular) = (eq.beta, 0u32);
    while residual != 0 {
        let lead = 31 - residual.leading_zeros();
        match pivots[lead as usize] {
            Some((pv, pc)) => {
                residual ^= pv;
                particular ^= pc;
            }
            None => return Vec::new(),
        }
    }

    let mut roots = Vec::with_capacity(1 << kernel.len());
    for mask in 0u32..(1 << kernel.len()) {
        let mut x = particular;
        for (bit, &k) in kernel.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                x ^= k;
            }
        }
        roots.push(x);
    }
    roots.sort_unstable();
    roots
}

pub fn count_roots(eq: &AffineLinearizedEq) -> usize {
    solve_affine(eq).len()
}

/// The root counts the trichotomy allows: `{0, 1, 2^gcd(i, t)}`.
pub fn allowed_root_counts(i: u32, t: u32) -> [usize; 3] {
    let d = crate::families::gcd(i as u64, t as u64);
    [0, 1, 1usize << d]
}
