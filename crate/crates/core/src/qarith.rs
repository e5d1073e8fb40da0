//! Deformation parameter and q-number arithmetic.
//!
//! The q-number of `x` is `(q^x - q^-x) / (q - q^-1)`. It is evaluated as
//! `sinh(x ln q) / sinh(ln q)`, which is the same function but keeps full
//! relative precision when `q` approaches 1.

use crate::error::{KacError, Result};

pub const DEFAULT_TOL: f64 = 1e-10;

/// Scalar arithmetic shared by the deformed and the undeformed constructions.
///
/// Every matrix element of the module is a product of q-numbers, square roots
/// of q-numbers and integer powers of `q`; swapping the implementation of this
/// trait swaps the deformation.
pub trait Deformation: Sync {
    /// The q-number `[x]`.
    fn bracket(&self, x: f64) -> f64;

    /// `q^x`.
    fn power(&self, x: f64) -> f64;

    /// Relative comparison tolerance.
    fn tol(&self) -> f64;

    /// Non-negative square root of `[x]`.
    fn bracket_sqrt(&self, x: f64) -> Result<f64> {
        let value = self.bracket(x);
        if value < 0.0 {
            return Err(KacError::Domain { arg: x, value });
        }
        Ok(value.sqrt())
    }

    /// `true` iff `|a - b| <= tol * max(1, |a|, |b|)`.
    fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.tol() * 1f64.max(a.abs()).max(b.abs())
    }

    fn is_zero(&self, a: f64) -> bool {
        self.approx_eq(a, 0.0)
    }
}

/// Generic deformation parameter `q` (positive real, `q != 1`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QContext {
    q: f64,
    tol: f64,
    ln_q: f64,
    sinh_ln_q: f64,
}

impl QContext {
    pub fn new(q: f64) -> Result<Self> {
        Self::with_tol(q, DEFAULT_TOL)
    }

    pub fn with_tol(q: f64, tol: f64) -> Result<Self> {
        if !(q.is_finite() && q > 0.0) {
            return Err(KacError::InvalidContext(format!("q = {q} must be a positive real")));
        }
        if q == 1.0 {
            return Err(KacError::InvalidContext("q = 1 is not generic".into()));
        }
        if !(tol.is_finite() && tol > 0.0) {
            return Err(KacError::InvalidContext(format!("tol = {tol} must be positive")));
        }
        // ln_1p keeps ln q accurate for q = 1 + tiny.
        let ln_q = (q - 1.0).ln_1p();
        Ok(Self { q, tol, ln_q, sinh_ln_q: ln_q.sinh() })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// Same `q`, different tolerance.
    pub fn retol(&self, tol: f64) -> Result<Self> {
        Self::with_tol(self.q, tol)
    }
}

impl Deformation for QContext {
    fn bracket(&self, x: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        (x * self.ln_q).sinh() / self.sinh_ln_q
    }

    fn power(&self, x: f64) -> f64 {
        (x * self.ln_q).exp()
    }

    fn tol(&self) -> f64 {
        self.tol
    }
}

/// The undeformed limit: `[x] = x` and `q^x = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Undeformed {
    pub tol: f64,
}

impl Default for Undeformed {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL }
    }
}

impl Deformation for Undeformed {
    fn bracket(&self, x: f64) -> f64 {
        x
    }

    fn power(&self, _x: f64) -> f64 {
        1.0
    }

    fn tol(&self) -> f64 {
        self.tol
    }
}

pub fn qbracket(ctx: &QContext, x: f64) -> f64 {
    ctx.bracket(x)
}

pub fn qbracket_sqrt(ctx: &QContext, x: f64) -> Result<f64> {
    ctx.bracket_sqrt(x)
}

pub fn approx_eq(ctx: &QContext, a: f64, b: f64) -> bool {
    ctx.approx_eq(a, b)
}

/// q-factorial `[n]! = [1][2]...[n]`.
pub fn qfactorial<D: Deformation + ?Sized>(ctx: &D, n: u32) -> f64 {
    (1..=n).map(|j| ctx.bracket(f64::from(j))).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q2() -> QContext {
        QContext::new(2.0).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let ctx = q2();
        assert_eq!(qbracket(&ctx, 0.0), 0.0);
        assert_eq!(qbracket(&ctx, 1.0), 1.0);
        // (4 - 1/4) / (2 - 1/2)
        let direct = (4.0 - 0.25) / (2.0 - 0.5);
        assert!((qbracket(&ctx, 2.0) - direct).abs() < 1e-14);
        assert!((qbracket(&ctx, 2.0) - 2.5).abs() < 1e-14);
    }

    #[test]
    fn bracket_sqrt_examples() {
        let ctx = q2();
        assert_eq!(qbracket_sqrt(&ctx, 0.0).unwrap(), 0.0);
        assert_eq!(qbracket_sqrt(&ctx, 1.0).unwrap(), 1.0);
        assert!((qbracket_sqrt(&ctx, 2.0).unwrap() - 2.5f64.sqrt()).abs() < 1e-14);
        assert!((qbracket_sqrt(&ctx, 2.0).unwrap() - 1.5811).abs() < 1e-4);
    }

    #[test]
    fn bracket_sqrt_rejects_negative() {
        let ctx = q2();
        assert!(matches!(qbracket_sqrt(&ctx, -1.0), Err(KacError::Domain { .. })));
        // q < 1 gives the same brackets, so non-negative arguments stay valid.
        let inv = QContext::new(0.5).unwrap();
        assert!((qbracket_sqrt(&inv, 2.0).unwrap() - 2.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn approx_eq_examples() {
        let ctx = QContext::with_tol(2.0, 1e-10).unwrap();
        assert!(approx_eq(&ctx, 1.0, 1.0));
        assert!(approx_eq(&ctx, 0.0, 5e-11));
        assert!(!approx_eq(&ctx, 1.0, 1.001));
    }

    #[test]
    fn context_validation() {
        assert!(QContext::new(1.0).is_err());
        assert!(QContext::new(0.0).is_err());
        assert!(QContext::new(-2.0).is_err());
        assert!(QContext::new(f64::NAN).is_err());
        assert!(QContext::with_tol(2.0, 0.0).is_err());
    }

    #[test]
    fn bracket_near_one_is_identity() {
        let ctx = QContext::new(1.0 + 1e-8).unwrap();
        for i in -40..=40 {
            let x = f64::from(i) * 0.5;
            assert!((qbracket(&ctx, x) - x).abs() <= 1e-6, "x = {x}");
        }
    }

    #[test]
    fn undeformed_is_plain_arithmetic() {
        let u = Undeformed::default();
        assert_eq!(u.bracket(3.5), 3.5);
        assert_eq!(u.power(7.0), 1.0);
        assert_eq!(qfactorial(&u, 5), 120.0);
    }

    #[test]
    fn qfactorial_small() {
        let ctx = q2();
        assert_eq!(qfactorial(&ctx, 0), 1.0);
        assert!((qfactorial(&ctx, 2) - 2.5).abs() < 1e-14);
    }
}
