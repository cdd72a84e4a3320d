//! Extended-exponent scalars and a few special functions.
//!
//! `XComplex` keeps a double significand with modulus in `[1, 2)` next to an
//! `i64` binary exponent, so products of ten thousand factors never leave the
//! representable range. Precision stays at double level.

use num_complex::Complex64;
use std::f64::consts::LN_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::NumericError;

/// Exponent gap beyond which the smaller addend is dropped.
pub const ADD_CUTOFF: i64 = 106;

// Cody-Waite split of ln 2: the high part has trailing zero bits so that
// k * LN2_HI is exact for |k| < 2^20.
const LN2_HI: f64 = 6.931_471_803_691_238_164_9e-1;
const LN2_LO: f64 = 1.908_214_929_270_587_7e-10;

/// 2^k for |k| <= 1022, built from the bit pattern.
#[inline(always)]
pub(crate) fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((1023 + k) as u64) << 52)
}

/// Multiply by 2^k for any k, saturating to 0 / inf like ordinary floats.
#[inline]
pub(crate) fn ldexp(x: f64, k: i64) -> f64 {
    if (-1022..=1023).contains(&k) {
        return x * pow2(k);
    }
    let mut x = x;
    let mut k = k;
    while k > 1023 {
        x *= pow2(1023);
        k -= 1023;
        if x.is_infinite() {
            return x;
        }
    }
    while k < -1022 {
        x *= pow2(-1022);
        k += 1022;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(k)
}

/// floor(log2 |x|) for finite nonzero x, subnormals included.
#[inline]
fn ilogb(x: f64) -> i64 {
    let bits = x.abs().to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64;
    if e == 0 {
        // subnormal: renormalize through a scaling
        ilogb(x * pow2(64)) - 64
    } else {
        e - 1023
    }
}

/// Complex number `significand * 2^exponent` with `|significand|` in `[1, 2)`.
#[derive(Clone, Copy, PartialEq)]
pub struct XComplex {
    sig: Complex64,
    exp: i64,
}

impl fmt::Debug for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}{:+}i)*2^{}", self.sig.re, self.sig.im, self.exp)
    }
}

impl Default for XComplex {
    fn default() -> Self {
        Self::ZERO
    }
}

impl XComplex {
    pub const ZERO: XComplex = XComplex { sig: Complex64 { re: 0.0, im: 0.0 }, exp: 0 };
    pub const ONE: XComplex = XComplex { sig: Complex64 { re: 1.0, im: 0.0 }, exp: 0 };

    /// Builds `sig * 2^exp` and renormalizes. Non-finite input is a caller bug.
    pub fn new(sig: Complex64, exp: i64) -> Self {
        debug_assert!(sig.re.is_finite() && sig.im.is_finite());
        if sig.re == 0.0 && sig.im == 0.0 {
            return Self::ZERO;
        }
        let m = sig.re.abs().max(sig.im.abs());
        let mut e = ilogb(m);
        let mut s = Complex64::new(ldexp(sig.re, -e), ldexp(sig.im, -e));
        // now max(|re|,|im|) in [1,2); the modulus is in [1, 2*sqrt2)
        let n = s.norm();
        if n >= 2.0 {
            s = s * 0.5;
            e += 1;
        }
        XComplex { sig: s, exp: exp + e }
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::new(z, 0)
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(Complex64::new(x, 0.0), 0)
    }

    /// `e^ln_mag * e^{i arg}` without ever forming `e^ln_mag` in a double.
    pub fn from_polar_ln(ln_mag: f64, arg: f64) -> Self {
        let k = (ln_mag / LN_2).floor();
        let r = (ln_mag - k * LN2_HI) - k * LN2_LO;
        Self::new(Complex64::from_polar(r.exp(), arg), k as i64)
    }

    /// Positive real `e^ln_mag`.
    pub fn from_ln(ln_mag: f64) -> Self {
        Self::from_polar_ln(ln_mag, 0.0)
    }

    #[inline]
    pub fn significand(&self) -> Complex64 {
        self.sig
    }

    #[inline]
    pub fn exponent(&self) -> i64 {
        self.exp
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sig.re == 0.0 && self.sig.im == 0.0
    }

    /// Natural log of the modulus.
    pub fn log_abs(&self) -> Result<f64, NumericError> {
        if self.is_zero() {
            return Err(NumericError::LogOfZero);
        }
        Ok(self.ln_abs())
    }

    /// Like [`log_abs`](Self::log_abs) but returns `-inf` for zero.
    #[inline]
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.sig.norm().ln() + self.exp as f64 * LN_2
    }

    pub fn arg(&self) -> f64 {
        self.sig.arg()
    }

    /// Nearest ordinary complex value (may overflow to inf or flush to 0).
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ldexp(self.sig.re, self.exp), ldexp(self.sig.im, self.exp))
    }

    pub fn conj(&self) -> Self {
        XComplex { sig: self.sig.conj(), exp: self.exp }
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.sig * c, self.exp)
    }

    pub fn mul_c64(&self, z: Complex64) -> Self {
        Self::new(self.sig * z, self.exp)
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return *self;
        }
        XComplex { sig: self.sig, exp: self.exp + k }
    }

    pub fn inv(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        Ok(Self::new(self.sig.inv(), -self.exp))
    }

    pub fn div(&self, other: &XComplex) -> Result<Self, NumericError> {
        if other.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::ZERO);
        }
        Ok(Self::new(self.sig / other.sig, self.exp - other.exp))
    }

    /// `self / other` as an ordinary double complex value.
    pub fn ratio(&self, other: &XComplex) -> Complex64 {
        let q = self.sig / other.sig;
        let d = self.exp - other.exp;
        Complex64::new(ldexp(q.re, d), ldexp(q.im, d))
    }
}

/// Product, renormalized.
pub fn xc_mul(a: XComplex, b: XComplex) -> XComplex {
    if a.is_zero() || b.is_zero() {
        return XComplex::ZERO;
    }
    XComplex::new(a.sig * b.sig, a.exp + b.exp)
}

/// Aligned sum; an addend more than [`ADD_CUTOFF`] binary orders smaller is dropped.
pub fn xc_add(a: XComplex, b: XComplex) -> XComplex {
    if a.is_zero() {
        return b;
    }
    if b.is_zero() {
        return a;
    }
    let d = a.exp - b.exp;
    if d > ADD_CUTOFF {
        return a;
    }
    if d < -ADD_CUTOFF {
        return b;
    }
    if d >= 0 {
        XComplex::new(a.sig + b.sig * pow2(-d), a.exp)
    } else {
        XComplex::new(a.sig * pow2(d) + b.sig, b.exp)
    }
}

impl Mul for XComplex {
    type Output = XComplex;
    fn mul(self, rhs: XComplex) -> XComplex {
        xc_mul(self, rhs)
    }
}

impl Add for XComplex {
    type Output = XComplex;
    fn add(self, rhs: XComplex) -> XComplex {
        xc_add(self, rhs)
    }
}

impl Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex { sig: -self.sig, exp: self.exp }
    }
}

impl Sub for XComplex {
    type Output = XComplex;
    fn sub(self, rhs: XComplex) -> XComplex {
        xc_add(self, -rhs)
    }
}

/// Real counterpart of [`XComplex`]: `sig * 2^exp` with `|sig|` in `[1, 2)`.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct XReal {
    sig: f64,
    exp: i64,
}

impl XReal {
    pub const ZERO: XReal = XReal { sig: 0.0, exp: 0 };
    pub const ONE: XReal = XReal { sig: 1.0, exp: 0 };

    pub fn new(sig: f64, exp: i64) -> Self {
        debug_assert!(sig.is_finite());
        if sig == 0.0 {
            return Self::ZERO;
        }
        let e = ilogb(sig);
        XReal { sig: ldexp(sig, -e), exp: exp + e }
    }

    pub fn from_f64(x: f64) -> Self {
        Self::new(x, 0)
    }

    pub fn from_ln(ln_mag: f64, negative: bool) -> Self {
        let k = (ln_mag / LN_2).floor();
        let r = (ln_mag - k * LN2_HI) - k * LN2_LO;
        let s = if negative { -r.exp() } else { r.exp() };
        Self::new(s, k as i64)
    }

    pub fn significand(&self) -> f64 {
        self.sig
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.sig == 0.0
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> f64 {
        if self.sig == 0.0 {
            0.0
        } else {
            self.sig.signum()
        }
    }

    pub fn log_abs(&self) -> Result<f64, NumericError> {
        if self.is_zero() {
            return Err(NumericError::LogOfZero);
        }
        Ok(self.sig.abs().ln() + self.exp as f64 * LN_2)
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.sig, self.exp)
    }
}

impl Mul for XReal {
    type Output = XReal;
    fn mul(self, rhs: XReal) -> XReal {
        if self.is_zero() || rhs.is_zero() {
            return XReal::ZERO;
        }
        XReal::new(self.sig * rhs.sig, self.exp + rhs.exp)
    }
}

impl Add for XReal {
    type Output = XReal;
    fn add(self, rhs: XReal) -> XReal {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let d = self.exp - rhs.exp;
        if d > ADD_CUTOFF {
            self
        } else if d < -ADD_CUTOFF {
            rhs
        } else if d >= 0 {
            XReal::new(self.sig + rhs.sig * pow2(-d), self.exp)
        } else {
            XReal::new(self.sig * pow2(d) + rhs.sig, rhs.exp)
        }
    }
}

impl Neg for XReal {
    type Output = XReal;
    fn neg(self) -> XReal {
        XReal { sig: -self.sig, exp: self.exp }
    }
}

// Loose accumulator for Horner loops. The significand is allowed to drift
// within [2^-LOOSE, 2^LOOSE] before renormalizing, which keeps the inner loop
// free of hypot calls. Terms further apart than GAP binary orders are dropped;
// GAP exceeds ADD_CUTOFF by the looseness on both sides.
const LOOSE: i64 = 24;
const GAP: i64 = ADD_CUTOFF + 2 * LOOSE;

#[derive(Clone, Copy, Debug)]
pub(crate) struct HornerAcc {
    sig: Complex64,
    exp: i64,
}

impl HornerAcc {
    #[inline(always)]
    pub fn zero() -> Self {
        HornerAcc { sig: Complex64::new(0.0, 0.0), exp: i64::MIN / 4 }
    }

    #[inline(always)]
    pub fn from_x(c: &XComplex) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            HornerAcc { sig: c.sig, exp: c.exp }
        }
    }

    /// `self = self * z + c`, with z an ordinary complex number.
    #[inline(always)]
    pub fn mul_add(&mut self, z: Complex64, c: &XComplex) {
        self.sig *= z;
        if !c.is_zero() {
            let d = c.exp - self.exp;
            if d > GAP {
                self.sig = c.sig;
                self.exp = c.exp;
            } else if d >= 0 {
                self.sig = self.sig * pow2(-d) + c.sig;
                self.exp = c.exp;
            } else if d >= -GAP {
                self.sig += c.sig * pow2(d);
            }
        }
        self.renorm();
    }

    /// `self = self * z + other`.
    #[inline(always)]
    pub fn mul_add_acc(&mut self, z: Complex64, other: &HornerAcc) {
        self.sig *= z;
        let d = other.exp - self.exp;
        if other.sig.re == 0.0 && other.sig.im == 0.0 {
        } else if self.sig.re == 0.0 && self.sig.im == 0.0 {
            *self = *other;
        } else if d > GAP {
            *self = *other;
        } else if d >= 0 {
            self.sig = self.sig * pow2(-d) + other.sig;
            self.exp = other.exp;
        } else if d >= -GAP {
            self.sig += other.sig * pow2(d);
        }
        self.renorm();
    }

    #[inline(always)]
    fn renorm(&mut self) {
        let m = self.sig.re.abs().max(self.sig.im.abs());
        if m == 0.0 {
            self.exp = i64::MIN / 4;
            return;
        }
        let e = ((m.to_bits() >> 52) & 0x7ff) as i64 - 1023;
        if !(-LOOSE..=LOOSE).contains(&e) {
            let s = pow2(-e);
            self.sig = Complex64::new(self.sig.re * s, self.sig.im * s);
            self.exp += e;
        }
    }

    pub fn to_x(self) -> XComplex {
        if self.sig.re == 0.0 && self.sig.im == 0.0 {
            XComplex::ZERO
        } else {
            XComplex::new(self.sig, self.exp)
        }
    }

    /// Natural log of the modulus.
    #[inline]
    pub fn ln_abs(&self) -> f64 {
        if self.sig.re == 0.0 && self.sig.im == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.sig.norm().ln() + self.exp as f64 * LN_2
        }
    }

    /// `self / other` as a double complex value.
    #[inline]
    pub fn ratio(&self, other: &HornerAcc) -> Complex64 {
        let q = self.sig / other.sig;
        let d = (self.exp - other.exp).clamp(-4000, 4000);
        Complex64::new(ldexp(q.re, d), ldexp(q.im, d))
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.sig.re == 0.0 && self.sig.im == 0.0
    }
}

const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// ln Γ(x) for x > 0.
///
/// Shifts the argument above 10 with the recurrence, then sums the Stirling
/// series. The shift product is accumulated in one multiply chain.
pub fn log_gamma(x: f64) -> Result<f64, NumericError> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(NumericError::Domain { what: "log_gamma", value: x });
    }
    Ok(log_gamma_unchecked(x))
}

pub(crate) fn log_gamma_unchecked(x: f64) -> f64 {
    let mut y = x;
    let mut prod = 1.0;
    while y < 10.0 {
        prod *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    let lg = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * std::f64::consts::PI).ln() + series;
    lg - prod.ln()
}

/// ln(n!/k!) for integers k <= n, exact product when short.
pub(crate) fn ln_falling(n: u64, k: u64) -> f64 {
    debug_assert!(k <= n);
    if n - k <= 64 {
        let mut s = 0.0;
        let mut p = 1.0f64;
        for j in (k + 1)..=n {
            p *= j as f64;
            if p > 1e280 {
                s += p.ln();
                p = 1.0;
            }
        }
        s + p.ln()
    } else {
        log_gamma_unchecked(n as f64 + 1.0) - log_gamma_unchecked(k as f64 + 1.0)
    }
}

/// ∫_a^b f by double-exponential quadrature.
///
/// Each half of the interval is mapped by `x = end ± u²`, which makes square
/// root zeroes and inverse square root singularities at the ends smooth and
/// keeps evaluation points resolved next to the endpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    integrate_edges(|x, _, _| f(x), a, b, tol)
}

/// As [`integrate`], with the integrand called as `f(x, x − a, b − x)` where
/// the distances are exact even when `x` itself rounds onto an endpoint.
pub fn integrate_edges<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let w = b - a;
    let h = (0.5 * w).sqrt();
    let left = quadrature::integrate(|u| 2.0 * u * f(a + u * u, u * u, w - u * u), 0.0, h, tol);
    let right = quadrature::integrate(|u| 2.0 * u * f(b - u * u, w - u * u, u * u), 0.0, h, tol);
    left.integral + right.integral
}

/// ∫_a^∞ f through `x = a + s/(1 − s)`.
pub fn integrate_to_inf<F: Fn(f64) -> f64>(f: F, a: f64, tol: f64) -> f64 {
    let g = |s: f64| {
        let d = 1.0 - s;
        f(a + s / d) / (d * d)
    };
    integrate(g, 0.0, 1.0, tol)
}
