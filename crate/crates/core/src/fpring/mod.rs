//! Arithmetic in F_p and in the group algebra R_p = F_p[X,Y]/(X^p - 1, Y^p - 1).
//!
//! A ring element is stored as its p×p coefficient grid, flattened row-major:
//! the coefficient of x^i y^j sits at index `i * p + j`. The same index order is
//! the monomial order used by the echelon machinery in [`subspace`].

mod subspace;

pub use subspace::IdealBasis;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Largest prime accepted by [`Context::new`]. Degree-p³ tables grow quickly.
pub const DEFAULT_MAX_P: u32 = 13;

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p. Every ring element and permutation carries one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    p: u8,
}

impl Context {
    pub fn new(p: u32) -> Result<Self> {
        Self::with_max(p, DEFAULT_MAX_P)
    }

    pub fn with_max(p: u32, max: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let max = max.min(251);
        if p > max {
            return Err(Error::PrimeTooLarge { p, max });
        }
        Ok(Context { p: p as u8 })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p as u32
    }

    /// p as a usize, for indexing.
    #[inline]
    pub fn n(self) -> usize {
        self.p as usize
    }

    /// Number of coefficients of a ring element, p².
    #[inline]
    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.n() * self.n()
    }

    /// Number of points of V, p³.
    #[inline]
    pub fn degree(self) -> usize {
        self.n() * self.n() * self.n()
    }

    pub fn check_same(self, other: Context) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ContextMismatch {
                left: self.p(),
                right: other.p(),
            })
        }
    }

    #[inline]
    pub fn add(self, a: u8, b: u8) -> u8 {
        ((a as u16 + b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn sub(self, a: u8, b: u8) -> u8 {
        ((a as u16 + self.p as u16 - b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn mul(self, a: u8, b: u8) -> u8 {
        ((a as u16 * b as u16) % self.p as u16) as u8
    }

    #[inline]
    pub fn neg(self, a: u8) -> u8 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// Multiplicative inverse by Fermat. Panics on zero.
    pub fn inv(self, a: u8) -> u8 {
        assert!(!a.is_multiple_of(self.p), "inverse of zero in F_{}", self.p);
        let mut result = 1u8;
        let mut base = a % self.p;
        let mut e = self.p as u32 - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    /// Reduces an arbitrary integer into [0, p).
    #[inline]
    pub fn reduce(self, v: i64) -> u8 {
        v.rem_euclid(self.p as i64) as u8
    }

    pub fn scalar(self, v: i64) -> FpScalar {
        FpScalar(self.reduce(v))
    }
}

/// A residue in [0, p). The modulus lives in the surrounding [`Context`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpScalar(u8);

impl FpScalar {
    pub fn value(self) -> u8 {
        self.0
    }
}

impl From<FpScalar> for u8 {
    fn from(s: FpScalar) -> u8 {
        s.0
    }
}

/// Element of R_p as a coefficient grid.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElem {
    ctx: Context,
    coeffs: Vec<u8>,
}

impl RingElem {
    pub fn zero(ctx: Context) -> Self {
        RingElem {
            ctx,
            coeffs: vec![0; ctx.len()],
        }
    }

    pub fn one(ctx: Context) -> Self {
        Self::monomial(ctx, 0, 0, 1)
    }

    /// c · x^i y^j, exponents taken mod p.
    pub fn monomial(ctx: Context, i: usize, j: usize, c: i64) -> Self {
        let mut e = Self::zero(ctx);
        let n = ctx.n();
        e.coeffs[(i % n) * n + (j % n)] = ctx.reduce(c);
        e
    }

    pub fn x(ctx: Context) -> Self {
        Self::monomial(ctx, 1, 0, 1)
    }

    pub fn y(ctx: Context) -> Self {
        Self::monomial(ctx, 0, 1, 1)
    }

    /// f_0 = Σ x^i y^j, the all-ones grid.
    pub fn f0(ctx: Context) -> Self {
        RingElem {
            ctx,
            coeffs: vec![1; ctx.len()],
        }
    }

    /// a = x - 1.
    pub fn a(ctx: Context) -> Self {
        &Self::x(ctx) - &Self::one(ctx)
    }

    /// b = y - 1.
    pub fn b(ctx: Context) -> Self {
        &Self::y(ctx) - &Self::one(ctx)
    }

    /// Builds an element from a flat coefficient vector, reducing each entry mod p.
    pub fn from_coeffs(ctx: Context, coeffs: &[i64]) -> Result<Self> {
        if coeffs.len() != ctx.len() {
            return Err(Error::InvalidDigits(format!(
                "expected {} coefficients, got {}",
                ctx.len(),
                coeffs.len()
            )));
        }
        Ok(RingElem {
            ctx,
            coeffs: coeffs.iter().map(|&c| ctx.reduce(c)).collect(),
        })
    }

    pub fn from_fn(ctx: Context, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let n = ctx.n();
        let mut coeffs = Vec::with_capacity(ctx.len());
        for i in 0..n {
            for j in 0..n {
                coeffs.push(ctx.reduce(f(i, j)));
            }
        }
        RingElem { ctx, coeffs }
    }

    /// Takes an already reduced flat vector.
    pub(crate) fn from_raw(ctx: Context, coeffs: Vec<u8>) -> Self {
        debug_assert_eq!(coeffs.len(), ctx.len());
        debug_assert!(coeffs.iter().all(|&c| (c as u32) < ctx.p()));
        RingElem { ctx, coeffs }
    }

    #[inline]
    pub fn ctx(&self) -> Context {
        self.ctx
    }

    /// Coefficient of x^i y^j.
    #[inline]
    pub fn coeff(&self, i: usize, j: usize) -> FpScalar {
        let n = self.ctx.n();
        FpScalar(self.coeffs[(i % n) * n + (j % n)])
    }

    /// Flat coefficients, index i·p + j.
    #[inline]
    pub fn coeffs(&self) -> &[u8] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn checked_add(&self, other: &RingElem) -> Result<RingElem> {
        self.ctx.check_same(other.ctx)?;
        let ctx = self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&u, &v)| ctx.add(u, v))
            .collect();
        Ok(RingElem { ctx, coeffs })
    }

    pub fn checked_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.ctx.check_same(other.ctx)?;
        let ctx = self.ctx;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&u, &v)| ctx.sub(u, v))
            .collect();
        Ok(RingElem { ctx, coeffs })
    }

    /// Cyclic convolution in both exponents.
    pub fn checked_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.ctx.check_same(other.ctx)?;
        let ctx = self.ctx;
        let n = ctx.n();
        let p = ctx.p();
        let mut acc = vec![0u32; ctx.len()];
        for (k, &u) in self.coeffs.iter().enumerate() {
            if u == 0 {
                continue;
            }
            let (ki, kj) = (k / n, k % n);
            for (l, &v) in other.coeffs.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let (li, lj) = (l / n, l % n);
                let idx = ((ki + li) % n) * n + (kj + lj) % n;
                acc[idx] = (acc[idx] + u as u32 * v as u32) % p;
            }
        }
        Ok(RingElem {
            ctx,
            coeffs: acc.into_iter().map(|c| c as u8).collect(),
        })
    }

    pub fn scale(&self, c: u8) -> RingElem {
        let ctx = self.ctx;
        RingElem {
            ctx,
            coeffs: self.coeffs.iter().map(|&v| ctx.mul(v, c)).collect(),
        }
    }

    /// Multiplication by the unit x^di y^dj: a pure index shift.
    pub fn shift(&self, di: usize, dj: usize) -> RingElem {
        let n = self.ctx.n();
        let mut coeffs = vec![0u8; self.ctx.len()];
        for i in 0..n {
            for j in 0..n {
                coeffs[((i + di) % n) * n + (j + dj) % n] = self.coeffs[i * n + j];
            }
        }
        RingElem {
            ctx: self.ctx,
            coeffs,
        }
    }

    pub fn pow(&self, mut e: u32) -> RingElem {
        let mut result = RingElem::one(self.ctx);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Row-major base-p digit string, index i·p + j, most significant first.
    pub fn to_digits(&self) -> String {
        self.coeffs
            .iter()
            .map(|&c| std::char::from_digit(c as u32, self.ctx.p()).expect("digit < p"))
            .collect()
    }

    pub fn from_digits(ctx: Context, s: &str) -> Result<RingElem> {
        let coeffs = s
            .chars()
            .map(|ch| {
                ch.to_digit(ctx.p())
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidDigits(format!("{ch:?} is not a base-{} digit", ctx.p())))
            })
            .collect::<Result<Vec<u8>>>()?;
        if coeffs.len() != ctx.len() {
            return Err(Error::InvalidDigits(format!(
                "expected {} digits, got {}",
                ctx.len(),
                coeffs.len()
            )));
        }
        Ok(RingElem { ctx, coeffs })
    }
}

impl fmt::Debug for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElem(p={}, {})", self.ctx.p(), self.to_digits())
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_digits())
    }
}

// Operator forms panic on a context mismatch; use the checked_* methods at API boundaries.
impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.checked_add(rhs).expect("ring context mismatch")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self.checked_sub(rhs).expect("ring context mismatch")
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.checked_mul(rhs).expect("ring context mismatch")
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        let ctx = self.ctx;
        RingElem {
            ctx,
            coeffs: self.coeffs.iter().map(|&c| ctx.neg(c)).collect(),
        }
    }
}
