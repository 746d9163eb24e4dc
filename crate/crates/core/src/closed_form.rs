//! Closed forms for the monotone counts.
//!
//! The non-decreasing count is the rational part of `(1 + √2)^n`, computed
//! exactly in `Z[√2]`, and the numerator of the `n`th convergent of √2. The
//! non-increasing count has generating function `(x + x²) / (1 - 2x - x³)`,
//! expanded exactly here, and a three-term closed form in the roots of
//! `x³ + 2x - 1`, evaluated in floating point.

use std::ops::Mul;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default largest `n` accepted by [`noninc_closed_numeric`].
pub const NUMERIC_CEILING: usize = 40;

/// Largest imaginary residue tolerated in the numeric closed form.
pub const IMAGINARY_TOLERANCE: f64 = 1e-8;

/// Exact element `x + y√2` of `Z[√2]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticInt {
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadraticInt {
    pub fn new(x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        Self {
            x: x.into(),
            y: y.into(),
        }
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    /// `x - y√2`.
    pub fn conjugate(&self) -> Self {
        Self {
            x: self.x.clone(),
            y: -&self.y,
        }
    }

    /// Field norm `x² - 2y²`.
    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - BigInt::from(2) * &self.y * &self.y
    }

    /// Square-and-multiply power.
    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Mul for &QuadraticInt {
    type Output = QuadraticInt;

    fn mul(self, rhs: &QuadraticInt) -> QuadraticInt {
        QuadraticInt {
            x: &self.x * &rhs.x + BigInt::from(2) * &self.y * &rhs.y,
            y: &self.x * &rhs.y + &rhs.x * &self.y,
        }
    }
}

impl Mul for QuadraticInt {
    type Output = QuadraticInt;

    fn mul(self, rhs: QuadraticInt) -> QuadraticInt {
        &self * &rhs
    }
}

/// `((1 + √2)^n + (1 - √2)^n) / 2`, evaluated exactly.
///
/// With `(1 + √2)^n = x + y√2` the conjugate power is `x - y√2`, so the
/// expression is exactly `x`.
pub fn nondec_closed_exact(n: usize) -> Result<BigUint> {
    if n < 1 {
        return Err(Error::LengthTooSmall { n, min: 1 });
    }
    let power = QuadraticInt::new(1, 1).pow(n as u64);
    Ok(power
        .x
        .to_biguint()
        .expect("rational part of (1 + √2)^n is positive"))
}

/// A convergent `p / q` of a simple continued fraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub p: BigUint,
    pub q: BigUint,
}

impl Convergent {
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        // ratio of large integers: shift both down to keep them representable
        let bits = self.p.bits().max(self.q.bits());
        let shift = bits.saturating_sub(1000);
        let p = (&self.p >> shift).to_f64().unwrap_or(f64::INFINITY);
        let q = (&self.q >> shift).to_f64().unwrap_or(f64::INFINITY);
        p / q
    }
}

/// `n`th convergent of `√2 = [1; 2, 2, 2, ...]`.
pub fn sqrt2_convergent(n: usize) -> Result<Convergent> {
    if n < 1 {
        return Err(Error::LengthTooSmall { n, min: 1 });
    }
    let (mut p_prev, mut q_prev) = (BigUint::one(), BigUint::one());
    if n == 1 {
        return Ok(Convergent {
            p: p_prev,
            q: q_prev,
        });
    }
    let (mut p, mut q) = (BigUint::from(3u32), BigUint::from(2u32));
    for _ in 3..=n {
        let p_next = &p * 2u32 + &p_prev;
        let q_next = &q * 2u32 + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    Ok(Convergent { p, q })
}

/// First `n_max + 1` coefficients of `num(x) / den(x)` for integer
/// polynomials with `den(0) = 1`.
pub fn rational_series(num: &[i64], den: &[i64], n_max: usize) -> Vec<BigInt> {
    assert_eq!(
        den.first(),
        Some(&1),
        "denominator must have constant term 1"
    );
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let mut c = BigInt::from(num.get(m).copied().unwrap_or(0));
        for (j, &d) in den.iter().enumerate().skip(1) {
            if j <= m && d != 0 {
                c -= &coeffs[m - j] * d;
            }
        }
        coeffs.push(c);
    }
    coeffs
}

/// Coefficients `c_0 ..= c_{n_max}` of `(x + x²) / (1 - 2x - x³)`.
pub fn noninc_series(n_max: usize) -> Vec<BigUint> {
    rational_series(&[0, 1, 1], &[1, -2, 0, -1], n_max)
        .into_iter()
        .map(|c| c.to_biguint().expect("coefficients are nonnegative"))
        .collect()
}

/// The roots of `x³ + 2x - 1`: one real root and a conjugate pair
/// `alpha ± beta i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CubicRoots {
    pub r: f64,
    pub alpha: f64,
    pub beta: f64,
}

pub fn cubic(x: Complex64) -> Complex64 {
    x * x * x + 2.0 * x - 1.0
}

impl CubicRoots {
    pub fn complex_root(&self) -> Complex64 {
        Complex64::new(self.alpha, self.beta)
    }

    /// Largest `|f|` over the three roots.
    pub fn max_residual(&self) -> f64 {
        let z = self.complex_root();
        [Complex64::new(self.r, 0.0), z, z.conj()]
            .iter()
            .map(|&x| cubic(x).norm())
            .fold(0.0, f64::max)
    }

    /// Product of the three roots minus one (Vieta gives a product of 1).
    pub fn vieta_defect(&self) -> f64 {
        (self.r * (self.alpha * self.alpha + self.beta * self.beta) - 1.0).abs()
    }
}

/// Real root by bisection on `[0, 1]` plus Newton polish, conjugate pair by
/// deflating to `x² + r x + 1/r`.
pub fn cubic_roots() -> CubicRoots {
    let f = |x: f64| x * x * x + 2.0 * x - 1.0;
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut r = 0.5 * (lo + hi);
    for _ in 0..3 {
        let step = f(r) / (3.0 * r * r + 2.0);
        if step == 0.0 {
            break;
        }
        r -= step;
    }
    // x² + r x + 1/r has discriminant r² - 4/r < 0
    let alpha = -0.5 * r;
    let beta = 0.5 * (4.0 / r - r * r).sqrt();
    CubicRoots { r, alpha, beta }
}

/// Partial-fraction weights attached to `r`, `alpha + beta i` and
/// `alpha - beta i`.
pub fn residue_weights(roots: &CubicRoots) -> [Complex64; 3] {
    let CubicRoots {
        r,
        alpha: a,
        beta: b,
    } = *roots;
    let d1 = Complex64::new((r.powi(3) + r * r) / (2.0 * r.powi(3) + 1.0), 0.0);
    let d2 = Complex64::new(a * a - b * b + a, b * (2.0 * a + 1.0))
        / Complex64::new(-2.0 * b * b, 2.0 * (a - r) * b);
    let d3 = Complex64::new(a * a - b * b + a, -b * (2.0 * a + 1.0))
        / Complex64::new(-2.0 * b * b, -2.0 * (a - r) * b);
    [d1, d2, d3]
}

/// The full complex value of the three-term closed form at `n`, before the
/// imaginary part is discarded.
pub fn noninc_closed_complex(n: usize) -> Result<Complex64> {
    noninc_closed_complex_with(n, NUMERIC_CEILING)
}

pub fn noninc_closed_complex_with(n: usize, ceiling: usize) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::LengthTooSmall { n, min: 1 });
    }
    if n > ceiling {
        return Err(Error::NumericCeiling { n, ceiling });
    }
    let roots = cubic_roots();
    let weights = residue_weights(&roots);
    let z = roots.complex_root();
    let poles = [Complex64::new(roots.r, 0.0), z, z.conj()];
    let e = n as i32 + 1;
    Ok(weights
        .iter()
        .zip(poles)
        .map(|(&w, pole)| w * pole.inv().powi(e))
        .sum())
}

/// Real value of the three-term closed form for the non-increasing count.
pub fn noninc_closed_numeric(n: usize) -> Result<f64> {
    let value = noninc_closed_complex(n)?;
    if value.im.abs() >= IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue {
            n,
            residue: value.im.abs(),
            tolerance: IMAGINARY_TOLERANCE,
        });
    }
    Ok(value.re)
}

/// Exact check of `|p/q - √2| < 1/q²`.
///
/// The bound is equivalent to `|p² - 2q²| q < p + q√2`; this tests the
/// slightly stronger `|p² - 2q²| q < p + q`.
pub fn convergent_within_bound(c: &Convergent) -> bool {
    let p = BigInt::from(c.p.clone());
    let q = BigInt::from(c.q.clone());
    let defect = (&p * &p - BigInt::from(2) * &q * &q).abs();
    defect * &q < &p + &q
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    #[test]
    fn quadratic_arithmetic() {
        let a = QuadraticInt::new(1, 1);
        assert_eq!(a.pow(3), QuadraticInt::new(7, 5));
        assert_eq!(a.pow(0), QuadraticInt::one());
        assert_eq!(a.conjugate().pow(3), a.pow(3).conjugate());
        assert_eq!(a.norm(), BigInt::from(-1));
        let b = QuadraticInt::new(3, -2);
        assert_eq!(&a * &b, QuadraticInt::new(3 - 4, 3 - 2));
    }

    #[test]
    fn nondec_closed_values() {
        let got: Vec<_> = (1..=10).map(|n| nondec_closed_exact(n).unwrap()).collect();
        let want: Vec<BigUint> = [1u32, 3, 7, 17, 41, 99, 239, 577, 1393, 3363]
            .into_iter()
            .map(BigUint::from)
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn convergents() {
        let c = sqrt2_convergent(1).unwrap();
        assert_eq!((c.p, c.q), (1u32.into(), 1u32.into()));
        let c = sqrt2_convergent(2).unwrap();
        assert_eq!((c.p, c.q), (3u32.into(), 2u32.into()));
        let c = sqrt2_convergent(5).unwrap();
        assert_eq!((c.p.clone(), c.q.clone()), (41u32.into(), 29u32.into()));
        assert!((c.to_f64() - 41.0 / 29.0).abs() < 1e-15);
        for n in 1..=60 {
            let c = sqrt2_convergent(n).unwrap();
            assert!(c.p.gcd(&c.q).is_one());
            assert!(convergent_within_bound(&c));
            let approx = c.to_f64();
            let q = num_traits::ToPrimitive::to_f64(&c.q).unwrap();
            assert!((approx - 2f64.sqrt()).abs() <= 1.0 / (q * q) + 1e-15);
        }
    }

    #[test]
    fn series_head() {
        let s = noninc_series(6);
        let want: Vec<BigUint> = [0u32, 1, 3, 6, 13, 29, 64]
            .into_iter()
            .map(BigUint::from)
            .collect();
        assert_eq!(s, want);
        assert_eq!(noninc_series(0), vec![BigUint::from(0u32)]);
    }

    #[test]
    fn generic_series_division() {
        // 1 / (1 - x - x²) gives the Fibonacci numbers
        let fib = rational_series(&[1], &[1, -1, -1], 9);
        let want: Vec<BigInt> = [1, 1, 2, 3, 5, 8, 13, 21, 34, 55]
            .into_iter()
            .map(BigInt::from)
            .collect();
        assert_eq!(fib, want);
    }

    #[test]
    fn roots_of_the_cubic() {
        let roots = cubic_roots();
        assert!((roots.r - 0.4533976515).abs() < 1e-10);
        assert!(roots.max_residual() <= 1e-12, "{}", roots.max_residual());
        assert!(roots.vieta_defect() <= 1e-10);
        assert_eq!(roots, cubic_roots());
    }

    #[test]
    fn weights_are_residues() {
        // weight at a pole p equals (x² + x) / f'(p) taken with sign from F = -(x²+x)/f
        let roots = cubic_roots();
        let weights = residue_weights(&roots);
        let z = roots.complex_root();
        for (w, p) in weights
            .iter()
            .zip([Complex64::new(roots.r, 0.0), z, z.conj()])
        {
            let direct = (p * p + p) / (3.0 * p * p + 2.0);
            assert!((w - direct).norm() < 1e-12, "{w} vs {direct}");
        }
    }

    #[test]
    fn numeric_closed_form() {
        assert!((noninc_closed_numeric(1).unwrap() - 1.0).abs() < 1e-6);
        assert!((noninc_closed_numeric(3).unwrap() - 6.0).abs() < 1e-6);
        let exact = 2.0 * 64.0 + 13.0; // c_7 = 2 c_6 + c_4
        assert!((noninc_closed_numeric(7).unwrap() - exact).abs() / exact < 1e-6);
        assert_eq!(
            noninc_closed_numeric(41),
            Err(Error::NumericCeiling { n: 41, ceiling: 40 })
        );
        assert!(matches!(
            noninc_closed_numeric(0),
            Err(Error::LengthTooSmall { .. })
        ));
    }
}
