//! Dense polynomials with extended-exponent coefficients.

use num_complex::Complex64;
use std::fmt::Write as _;
use std::f64::consts::LN_2;

use crate::error::PolyError;
use crate::numeric::{ldexp, ln_falling, log_gamma_unchecked, pow2, HornerAcc, XComplex};

/// Polynomial `Σ coeffs[k] z^k` with a nonzero leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<XComplex>,
    derivative_order: usize,
}

impl Poly {
    /// Takes coefficients in increasing degree; trailing zeros are trimmed.
    pub fn from_coeffs(mut coeffs: Vec<XComplex>) -> Result<Self, PolyError> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(PolyError::Zero);
        }
        Ok(Poly { coeffs, derivative_order: 0 })
    }

    pub fn from_c64(coeffs: &[Complex64]) -> Result<Self, PolyError> {
        Self::from_coeffs(coeffs.iter().map(|&c| XComplex::from_c64(c)).collect())
    }

    pub fn from_f64(coeffs: &[f64]) -> Result<Self, PolyError> {
        Self::from_coeffs(coeffs.iter().map(|&c| XComplex::from_f64(c)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[XComplex] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> XComplex {
        self.coeffs.get(k).copied().unwrap_or(XComplex::ZERO)
    }

    pub fn leading(&self) -> XComplex {
        *self.coeffs.last().unwrap()
    }

    /// Number of differentiations applied since construction.
    pub fn derivative_order(&self) -> usize {
        self.derivative_order
    }

    pub fn with_derivative_order(mut self, order: usize) -> Self {
        self.derivative_order = order;
        self
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        let lead = self.leading().inv().expect("nonzero leading coefficient");
        Poly {
            coeffs: self.coeffs.iter().map(|&c| c * lead).collect(),
            derivative_order: self.derivative_order,
        }
    }

    /// `p(s z)`.
    pub fn scale_variable(&self, s: Complex64) -> Poly {
        let s = XComplex::from_c64(s);
        let mut pw = XComplex::ONE;
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            out.push(c * pw);
            pw = pw * s;
        }
        Poly { coeffs: out, derivative_order: self.derivative_order }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        Poly { coeffs: convolve(&self.coeffs, &other.coeffs), derivative_order: 0 }
    }

    /// Coefficient dump with columns `index,re_significand,im_significand,exponent`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,re_significand,im_significand,exponent\n");
        for (k, c) in self.coeffs.iter().enumerate() {
            let g = c.significand();
            let _ = writeln!(s, "{k},{:e},{:e},{}", g.re, g.im, c.exponent());
        }
        s
    }

    /// Natural log of `Σ |c_k| r^k`, the scale against which rounding in a
    /// Horner evaluation at modulus `r` is measured.
    pub fn ln_abs_bound(&self, r: f64) -> f64 {
        abs_bound(&abs_coeffs(&self.coeffs), r)
    }
}

/// Monic polynomial with the given roots, built by a balanced product tree.
///
/// Roots are ordered by angle and split into even and odd strides at every
/// level, so each subproduct has roots spread around the whole circle. That
/// keeps intermediate coefficients free of the cancellation an arbitrary split
/// produces. The tree shape depends on the input only, so the result does not
/// depend on the thread schedule.
pub fn from_roots(roots: &[Complex64]) -> Result<Poly, PolyError> {
    if roots.is_empty() {
        return Err(PolyError::EmptyRoots);
    }
    if let Some(i) = roots.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(PolyError::NonFiniteRoot(i));
    }
    let mut sorted = roots.to_vec();
    sorted.sort_by(|a, b| a.arg().total_cmp(&b.arg()).then(a.norm().total_cmp(&b.norm())));
    Ok(Poly { coeffs: tree_product(&sorted), derivative_order: 0 })
}

fn tree_product(roots: &[Complex64]) -> Vec<XComplex> {
    if roots.len() == 1 {
        return vec![XComplex::from_c64(-roots[0]), XComplex::ONE];
    }
    let even: Vec<Complex64> = roots.iter().step_by(2).copied().collect();
    let odd: Vec<Complex64> = roots.iter().skip(1).step_by(2).copied().collect();
    let (a, b) = if roots.len() > 256 {
        rayon::join(|| tree_product(&even), || tree_product(&odd))
    } else {
        (tree_product(&even), tree_product(&odd))
    };
    convolve(&a, &b)
}

/// Product of two coefficient vectors. Each output coefficient is summed in
/// two passes: find the largest term exponent, then add aligned significands.
fn convolve(a: &[XComplex], b: &[XComplex]) -> Vec<XComplex> {
    let n = a.len() + b.len() - 1;
    let ea: Vec<i64> = a.iter().map(|c| if c.is_zero() { i64::MIN / 4 } else { c.exponent() }).collect();
    let eb: Vec<i64> = b.iter().map(|c| if c.is_zero() { i64::MIN / 4 } else { c.exponent() }).collect();
    let sa: Vec<Complex64> = a.iter().map(|c| c.significand()).collect();
    let sb: Vec<Complex64> = b.iter().map(|c| c.significand()).collect();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lo = k.saturating_sub(b.len() - 1);
        let hi = k.min(a.len() - 1);
        let mut emax = i64::MIN;
        for i in lo..=hi {
            emax = emax.max(ea[i] + eb[k - i]);
        }
        let mut s = Complex64::new(0.0, 0.0);
        for i in lo..=hi {
            let d = ea[i] + eb[k - i] - emax;
            if d >= -900 {
                s += sa[i] * sb[k - i] * pow2(d.max(-1022));
            }
        }
        out.push(if s.re == 0.0 && s.im == 0.0 { XComplex::ZERO } else { XComplex::new(s, emax) });
    }
    out
}

/// m-fold derivative.
///
/// Coefficient k becomes `c_{k+m} (k+m)!/k!`. The ratio starts at `m!` and is
/// advanced by `(k+m+1)/(k+1)` per index.
pub fn derivative(p: &Poly, m: usize) -> Result<Poly, PolyError> {
    let d = p.degree();
    if m > d {
        return Err(PolyError::OrderTooLarge { order: m, degree: d });
    }
    if m == 0 {
        return Ok(p.clone());
    }
    let mut ratio = if m <= 64 {
        falling_exact(m as u64, 0)
    } else {
        XComplex::from_ln(ln_falling(m as u64, 0))
    };
    let mut out = Vec::with_capacity(d - m + 1);
    for k in 0..=(d - m) {
        out.push(p.coeffs[k + m] * ratio);
        ratio = ratio.scale((k + m + 1) as f64 / (k + 1) as f64);
    }
    Ok(Poly { coeffs: out, derivative_order: p.derivative_order + m })
}

// n!/k! as a product of doubles, rescaled into XComplex every few factors.
fn falling_exact(n: u64, k: u64) -> XComplex {
    let mut acc = XComplex::ONE;
    let mut p = 1.0f64;
    for j in (k + 1)..=n {
        p *= j as f64;
        if p > 1e250 {
            acc = acc.scale(p);
            p = 1.0;
        }
    }
    acc.scale(p)
}

/// `z^α D^α p`: coefficient k is `p^{(k)}(0)/Γ(k−α+1) = c_k k!/Γ(k−α+1)` for
/// `k ≥ ⌊α⌋` and zero below.
pub fn fractional_derivative(p: &Poly, alpha: f64) -> Result<Poly, PolyError> {
    let d = p.degree();
    if !(alpha >= 0.0 && alpha <= d as f64) {
        return Err(PolyError::FractionalOrder { alpha, degree: d });
    }
    let fl = alpha.floor() as usize;
    let mut out = vec![XComplex::ZERO; d + 1];
    for (k, slot) in out.iter_mut().enumerate().skip(fl) {
        let c = p.coeffs[k];
        if c.is_zero() {
            continue;
        }
        let l = log_gamma_unchecked(k as f64 + 1.0) - log_gamma_unchecked(k as f64 - alpha + 1.0);
        *slot = c * XComplex::from_ln(l);
    }
    Ok(Poly { coeffs: out, derivative_order: p.derivative_order })
}

/// Horner evaluation in extended range.
pub fn evaluate(p: &Poly, z: Complex64) -> XComplex {
    let mut acc = HornerAcc::from_x(&p.leading());
    for c in p.coeffs.iter().rev().skip(1) {
        acc.mul_add(z, c);
    }
    acc.to_x()
}

/// `p(z)` and `p'(z)` in one pass.
pub(crate) fn abs_coeffs(c: &[XComplex]) -> Vec<XComplex> {
    c.iter().map(|c| XComplex::new(Complex64::new(c.significand().norm(), 0.0), c.exponent())).collect()
}

// ln Σ |c_k| r^k with |c_k| precomputed by `abs_coeffs`.
pub(crate) fn abs_bound(abs: &[XComplex], r: f64) -> f64 {
    eval_with_derivative(abs, Complex64::new(r, 0.0)).0.ln_abs()
}

pub(crate) fn eval_with_derivative(coeffs: &[XComplex], z: Complex64) -> (HornerAcc, HornerAcc) {
    let n = coeffs.len();
    let mut p = HornerAcc::from_x(&coeffs[n - 1]);
    let mut dp = HornerAcc::zero();
    for c in coeffs[..n - 1].iter().rev() {
        dp.mul_add_acc(z, &p);
        p.mul_add(z, c);
    }
    (p, dp)
}

/// Removes the factor `z^j` carried by vanishing low-order coefficients.
///
/// With `tol == 0` only exact zeros count. With `tol > 0` a low coefficient
/// also counts as zero when `log|c_k| + k ln tol` falls below the largest
/// `log|c_j| + j ln tol` by more than `0.9·53·ln 2 + ln(degree)`; `tol` is the
/// radius at which the comparison is made.
pub fn strip_origin_zeros(p: &Poly, tol: f64) -> (Poly, usize) {
    let d = p.degree();
    let mut j = 0;
    if tol > 0.0 && d > 0 {
        let lt = tol.ln();
        let scaled: Vec<f64> =
            p.coeffs.iter().enumerate().map(|(k, c)| c.ln_abs() + k as f64 * lt).collect();
        let best = scaled.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let guard = 0.9 * 53.0 * LN_2 + (d as f64).ln();
        while j < d && (p.coeffs[j].is_zero() || scaled[j] < best - guard) {
            j += 1;
        }
    } else {
        while j < d && p.coeffs[j].is_zero() {
            j += 1;
        }
    }
    if j == 0 {
        return (p.clone(), 0);
    }
    (Poly { coeffs: p.coeffs[j..].to_vec(), derivative_order: p.derivative_order }, j)
}

/// Evaluate at a real point and return the value as a double when in range.
pub fn evaluate_real(p: &Poly, x: f64) -> f64 {
    let v = evaluate(p, Complex64::new(x, 0.0));
    ldexp(v.significand().re, v.exponent())
}
