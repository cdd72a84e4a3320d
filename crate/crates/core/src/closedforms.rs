//! Explicit solutions: radial distribution functions `Ψ(x, t)` and densities
//! `ψ(x, t)` for the rotationally invariant families, and real-line densities
//! for the two-atom and arcsine evolutions.
//!
//! Everything returns 0 density outside the support. Implicit cases are
//! solved by bisection on a strictly increasing left-hand side.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write;

use crate::error::FlowError;

/// Catalogued explicit solution with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "camelCase")]
pub enum SolutionId {
    Kac,
    CircleMixture { radii: Vec<f64>, weights: Vec<f64> },
    WeylFamily { alpha: f64 },
    IntervalUniform { r1: f64, r2: f64 },
    Elliptic { alpha: f64 },
    Hyperbolic { alpha: f64 },
    TwoAtomReal { m1: f64, m2: f64 },
    ArcsineReal,
}

impl SolutionId {
    /// True for the radial (complex-plane) solutions.
    pub fn is_radial(&self) -> bool {
        !matches!(self, SolutionId::TwoAtomReal { .. } | SolutionId::ArcsineReal)
    }

    /// Mass at time 0.
    pub fn initial_mass(&self) -> f64 {
        match self {
            SolutionId::Hyperbolic { .. } => f64::INFINITY,
            SolutionId::TwoAtomReal { m1, m2 } => m1 + m2,
            _ => 1.0,
        }
    }

    /// `(Ψ, ψ)` at `(x, t)`. For the real solutions `Ψ` is the mass of
    /// `(−∞, x]` including atoms and `ψ` the continuous density; `t` is `s`
    /// for the arcsine evolution.
    pub fn eval(&self, x: f64, t: f64) -> Result<(f64, f64), FlowError> {
        let m = self.initial_mass();
        if !(t >= 0.0 && t < m) {
            return Err(FlowError::Time { t, mass: m });
        }
        Ok(match self {
            SolutionId::Kac => (kac_cdf(x, t), kac(x, t)),
            SolutionId::CircleMixture { radii, weights } => {
                (circle_mixture_cdf(x, t, radii, weights)?, circle_mixture(x, t, radii, weights)?)
            }
            SolutionId::WeylFamily { alpha } => weyl_family(x, t, *alpha),
            SolutionId::IntervalUniform { r1, r2 } => interval_uniform_pair(x, t, *r1, *r2),
            SolutionId::Elliptic { alpha } => elliptic(x, t, *alpha),
            SolutionId::Hyperbolic { alpha } => hyperbolic(x, t, *alpha),
            SolutionId::TwoAtomReal { m1, m2 } => (two_atom_real_cdf(x, t, *m1, *m2), two_atom_real(x, t, *m1, *m2).0),
            SolutionId::ArcsineReal => (arcsine_real_cdf(x, t), arcsine_real(x, t)),
        })
    }
}

/// Kac density `t/(1−x)²` on `0 < x ≤ 1−t`.
pub fn kac(x: f64, t: f64) -> f64 {
    if t > 0.0 && x > 0.0 && x <= 1.0 - t {
        t / ((1.0 - x) * (1.0 - x))
    } else {
        0.0
    }
}

/// Kac distribution function `xt/(1−x)`, then `1 − t`.
pub fn kac_cdf(x: f64, t: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if t == 0.0 {
        if x >= 1.0 {
            1.0
        } else {
            0.0
        }
    } else if x < 1.0 - t {
        x * t / (1.0 - x)
    } else {
        1.0 - t
    }
}

// Windows (lo, hi, radius) of the circle-mixture solution at time t, with the
// right limit taken at the transition times.
fn mixture_windows(t: f64, radii: &[f64], weights: &[f64]) -> Result<Vec<(f64, f64, f64)>, FlowError> {
    if !(t >= 0.0 && t < 1.0) {
        return Err(FlowError::Time { t, mass: 1.0 });
    }
    let mut cum = Vec::with_capacity(radii.len());
    let mut s = 0.0;
    for w in weights {
        s += w;
        cum.push(s);
    }
    let last = *cum.last().unwrap();
    for c in cum.iter_mut() {
        *c /= last;
    }
    let Some(m) = cum.iter().position(|&p| p > t) else {
        return Ok(Vec::new());
    };
    let mut out = vec![(0.0, radii[m] * (cum[m] - t) / cum[m], radii[m])];
    for l in m + 1..radii.len() {
        if weights[l] > 0.0 {
            out.push((radii[l] * (cum[l - 1] - t) / cum[l - 1], radii[l] * (cum[l] - t) / cum[l], radii[l]));
        }
    }
    Ok(out)
}

/// Support windows of the circle-mixture solution at `t`: a disk `[0, ρ]`
/// followed by annuli.
pub fn circle_mixture_windows(t: f64, radii: &[f64], weights: &[f64]) -> Result<Vec<(f64, f64)>, FlowError> {
    Ok(mixture_windows(t, radii, weights)?.into_iter().map(|(a, b, _)| (a, b)).collect())
}

/// Circle-mixture density `t r/(r − x)²` on its windows.
pub fn circle_mixture(x: f64, t: f64, radii: &[f64], weights: &[f64]) -> Result<f64, FlowError> {
    for (lo, hi, r) in mixture_windows(t, radii, weights)? {
        if x > lo && x < hi {
            return Ok(t * r / ((r - x) * (r - x)));
        }
    }
    Ok(0.0)
}

/// Circle-mixture distribution function `t x/(r − x)` on the windows,
/// constant between them.
pub fn circle_mixture_cdf(x: f64, t: f64, radii: &[f64], weights: &[f64]) -> Result<f64, FlowError> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    if t == 0.0 {
        let total: f64 = weights.iter().sum();
        return Ok(radii.iter().zip(weights).filter(|(r, _)| **r <= x).map(|(_, w)| w / total).sum());
    }
    let mut val = 0.0;
    for (lo, hi, r) in mixture_windows(t, radii, weights)? {
        if x >= hi {
            val = t * hi / (r - hi);
        } else if x > lo {
            return Ok(t * x / (r - x));
        } else {
            break;
        }
    }
    Ok(val)
}

// Bisection of an increasing f on [lo, hi] down to adjacent doubles; the
// midpoint is geometric while the bracket spans more than a factor 2.
fn bisect_increasing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = if lo > 0.0 && hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Weyl family: `(α−1) log(Ψ+t) + log Ψ = log x` on `0 < x < 1−t`.
/// Closed forms for α ∈ {1/2, 1, 2}, implicit solve otherwise.
pub fn weyl_family(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 - t {
        return (1.0 - t, 0.0);
    }
    if alpha == 1.0 {
        (x, 1.0)
    } else if alpha == 0.5 {
        let s = (x * x + 4.0 * t).sqrt();
        (0.5 * (x * x + x * s), x + (x * x + 2.0 * t) / s)
    } else if alpha == 2.0 {
        let s = (t * t + 4.0 * x).sqrt();
        (0.5 * (s - t), 1.0 / s)
    } else {
        weyl_family_implicit(x, t, alpha)
    }
}

/// Weyl family by the implicit solve for any α, with `ψ` from implicit
/// differentiation `ψ = Ψ(Ψ+t)/(x(αΨ + t))`.
pub fn weyl_family_implicit(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 - t {
        return (1.0 - t, 0.0);
    }
    let lx = x.ln();
    let f = |p: f64| (alpha - 1.0) * (p + t).ln() + p.ln() - lx;
    let p = bisect_increasing(f, 0.0, 1.0 - t);
    (p, p * (p + t) / (x * (alpha * p + t)))
}

/// Radial parts uniform on `[r1, r2]` at time 0: density at time `t`.
pub fn interval_uniform(x: f64, t: f64, r1: f64, r2: f64) -> f64 {
    interval_uniform_pair(x, t, r1, r2).1
}

/// `(Ψ, ψ)` for the interval-uniform solution.
pub fn interval_uniform_pair(x: f64, t: f64, r1: f64, r2: f64) -> (f64, f64) {
    let d = r2 - r1;
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= (1.0 - t) * r2 {
        return (1.0 - t, 0.0);
    }
    if t == 0.0 {
        return if x <= r1 { (0.0, 0.0) } else { ((x - r1) / d, 1.0 / d) };
    }
    let a = r1 + d * t - x;
    let s = (a * a + 4.0 * t * d * x).sqrt();
    let psi_cap = (x - d * t - r1 + s) / (2.0 * d);
    let psi = 1.0 / (2.0 * d) + (x + d * t - r1) / (2.0 * d * s);
    (psi_cap, psi)
}

/// Elliptic family: `(α−1) log(Ψ+t) − α log(1−Ψ−t) + log Ψ = log x`, x > 0.
pub fn elliptic(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if alpha == 1.0 {
        ((1.0 - t) * x / (1.0 + x), (1.0 - t) / ((1.0 + x) * (1.0 + x)))
    } else if alpha == 0.5 {
        let x2 = x * x;
        let q = 1.0 + x2;
        let s = (x2 - 4.0 * (t - 1.0) * t).sqrt();
        let cap = (-(2.0 * t - 1.0) * x2 + x * s) / (2.0 * q);
        let psi = -x * (2.0 * t - 1.0) / (q * q)
            + (x2 - 2.0 * t * t + 2.0 * t * t * x2 + 2.0 * t - 2.0 * t * x2) / (q * q * s);
        (cap, psi)
    } else {
        elliptic_implicit(x, t, alpha)
    }
}

/// Elliptic family by the implicit solve.
pub fn elliptic_implicit(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    let lx = x.ln();
    let top = 1.0 - t;
    let f = |p: f64| (alpha - 1.0) * (p + t).ln() - alpha * (top - p).ln() + p.ln() - lx;
    let p = bisect_increasing(f, 0.0, top);
    let fp = (alpha - 1.0) / (p + t) + alpha / (top - p) + 1.0 / p;
    (p, 1.0 / (x * fp))
}

/// Hyperbolic family: `(α−1) log(Ψ+t) − α log(Ψ+1+t) + log Ψ = log x` on
/// `0 < x < 1`, any `t ≥ 0`. Returns `+∞` for `x ≥ 1`.
pub fn hyperbolic(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    if alpha == 1.0 {
        let d = 1.0 - x;
        (x * (t + 1.0) / d, (t + 1.0) / (d * d))
    } else if alpha == 0.5 {
        let x2 = x * x;
        let q = 1.0 - x2;
        let s = (x2 + 4.0 * (t + 1.0) * t).sqrt();
        let cap = ((2.0 * t + 1.0) * x2 + x * s) / (2.0 * q);
        let psi = x * (2.0 * t + 1.0) / (q * q)
            + (x2 + 2.0 * t * t + 2.0 * t * t * x2 + 2.0 * t + 2.0 * t * x2) / (q * q * s);
        (cap, psi)
    } else {
        hyperbolic_implicit(x, t, alpha)
    }
}

/// Hyperbolic family by the implicit solve.
pub fn hyperbolic_implicit(x: f64, t: f64, alpha: f64) -> (f64, f64) {
    if x <= 0.0 {
        return (0.0, 0.0);
    }
    if x >= 1.0 {
        return (f64::INFINITY, f64::INFINITY);
    }
    let lx = x.ln();
    let f = |p: f64| (alpha - 1.0) * (p + t).ln() - alpha * (p + 1.0 + t).ln() + p.ln() - lx;
    let mut hi = 1.0;
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    let p = bisect_increasing(f, 0.0, hi);
    let fp = (alpha - 1.0) / (p + t) - alpha / (p + 1.0 + t) + 1.0 / p;
    (p, 1.0 / (x * fp))
}

/// Edges `(x₋(t), x₊(t))` of the continuous part of the two-atom solution.
pub fn two_atom_edges(t: f64, m1: f64, m2: f64) -> (f64, f64) {
    let m = m1 + m2;
    let c = (t - m1) * m1 - m2 * (t + m1);
    let r = 2.0 * (m1 * m2 * t * (m - t)).max(0.0).sqrt();
    ((c - r) / (m * m), (c + r) / (m * m))
}

/// Window of times `(t₋(x), t₊(x))` during which `x ∈ (−1, 0)` lies in the
/// continuous support.
pub fn two_atom_window(x: f64, m1: f64, m2: f64) -> (f64, f64) {
    let c = m1 + x * (m1 - m2);
    let r = 2.0 * (m1 * m2 * x.abs() * (x + 1.0)).max(0.0).sqrt();
    (c - r, c + r)
}

/// Zeroes of `d^{tn}/dx^{tn} x^{m₁n}(x+1)^{m₂n}`: continuous density at `x`
/// and the atoms `(location, mass)` still present at `t`.
pub fn two_atom_real(x: f64, t: f64, m1: f64, m2: f64) -> (f64, Vec<(f64, f64)>) {
    let (lo, hi) = two_atom_edges(t, m1, m2);
    let dens = if x > lo && x < hi {
        (m1 + m2) * ((hi - x) * (x - lo)).sqrt() / (2.0 * PI * x.abs() * (1.0 + x))
    } else {
        0.0
    };
    (dens, two_atom_atoms(t, m1, m2))
}

/// Atoms `(m₁ − t)` at 0 and `(m₂ − t)` at −1 while positive.
pub fn two_atom_atoms(t: f64, m1: f64, m2: f64) -> Vec<(f64, f64)> {
    let mut atoms = Vec::new();
    if t < m2 {
        atoms.push((-1.0, m2 - t));
    }
    if t < m1 {
        atoms.push((0.0, m1 - t));
    }
    atoms
}

/// Mass of `(−∞, x]` for the two-atom solution, atoms included.
pub fn two_atom_real_cdf(x: f64, t: f64, m1: f64, m2: f64) -> f64 {
    let (lo, hi) = two_atom_edges(t, m1, m2);
    let cont = if x <= lo {
        0.0
    } else {
        crate::numeric::integrate(|u| two_atom_real(u, t, m1, m2).0, lo, x.min(hi), 1e-13)
    };
    cont + two_atom_atoms(t, m1, m2).iter().filter(|a| a.0 <= x).map(|a| a.1).sum::<f64>()
}

/// Closed-form Cauchy transform `G_t(z)` of the two-atom solution, on the
/// branch with `G_t(z) ~ (m₁+m₂−t)/z` at infinity.
pub fn two_atom_g(z: Complex64, t: f64, m1: f64, m2: f64) -> Complex64 {
    let (lo, hi) = two_atom_edges(t, m1, m2);
    // √D = (m₁+m₂)·√(z−x₋)·√(z−x₊): analytic off [x₋, x₊]
    let root = (m1 + m2) * (z - lo).sqrt() * (z - hi).sqrt();
    (m1 - t + z * (m1 + m2 - 2.0 * t) + root) / (2.0 * z * (1.0 + z))
}

/// Arcsine evolution `√(1−x²−s²)/(π(1−x²))` on `x² < 1−s²`.
pub fn arcsine_real(x: f64, s: f64) -> f64 {
    let q = 1.0 - x * x - s * s;
    if q > 0.0 {
        q.sqrt() / (PI * (1.0 - x * x))
    } else {
        0.0
    }
}

/// Mass of `(−∞, x]` for the arcsine evolution.
pub fn arcsine_real_cdf(x: f64, s: f64) -> f64 {
    let e = (1.0 - s * s).max(0.0).sqrt();
    if x <= -e {
        0.0
    } else {
        crate::numeric::integrate(|u| arcsine_real(u, s), -e, x.min(e), 1e-13)
    }
}

/// Zeroes of `d^{tn}/dx^{tn} (x²−1)^n`: continuous density and atoms at ±1.
pub fn legendre_delta(x: f64, t: f64) -> (f64, Vec<(f64, f64)>) {
    let q = 1.0 - (t - 1.0) * (t - 1.0) - x * x;
    let dens = if x * x < t * (2.0 - t) && q > 0.0 { q.sqrt() / (PI * (1.0 - x * x)) } else { 0.0 };
    let atoms = if t < 1.0 { vec![(-1.0, 1.0 - t), (1.0, 1.0 - t)] } else { vec![] };
    (dens, atoms)
}

/// CSV `x,Psi,psi` of a solution on a grid at time `t`.
pub fn batch_csv(id: &SolutionId, t: f64, grid: &[f64]) -> Result<String, FlowError> {
    let mut s = String::from("x,Psi,psi\n");
    for &x in grid {
        let (a, b) = id.eval(x, t)?;
        let _ = writeln!(s, "{x},{a},{b}");
    }
    Ok(s)
}
