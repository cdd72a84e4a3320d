//! Real-rooted case: Cauchy–Stieltjes transforms and their evolution.
//!
//! With `G₀` the transform of the initial law and `w₀` the inverse of
//! `w ↦ w G₀(w)` to the right of the support, the law after differentiating
//! `[tn]` times has `G_t(w_t(y)) = y/w_t(y)` where
//! `w_t(y) = w₀(y+t) y/(y+t)`. Off the axis the same relation reads
//! `G_t(z) = G₀(ω)` with `ω − t/G₀(ω) = z`, which is continued from infinity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write;
use std::sync::Arc;

use crate::ensembles::RealLaw;
use crate::error::RealError;
use crate::numeric::integrate_edges;

// density(x, x − a, b − x) with exact edge distances
type Density = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

const QUAD_TOL: f64 = 1e-11;

/// Finite measure on an interval: atoms plus an optional density.
#[derive(Clone)]
pub struct RealMeasure {
    pub support: (f64, f64),
    pub atoms: Vec<(f64, f64)>,
    density: Option<Density>,
    pub total_mass: f64,
}

impl std::fmt::Debug for RealMeasure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RealMeasure")
            .field("support", &self.support)
            .field("atoms", &self.atoms)
            .field("density", &self.density.is_some())
            .field("total_mass", &self.total_mass)
            .finish()
    }
}

impl RealMeasure {
    /// Purely atomic measure `(location, mass)`.
    pub fn atomic(atoms: Vec<(f64, f64)>) -> Result<Self, RealError> {
        if atoms.is_empty() || atoms.iter().any(|a| !(a.1 > 0.0) || !a.0.is_finite()) {
            return Err(RealError::Invalid("atoms need finite locations and positive masses".into()));
        }
        let lo = atoms.iter().map(|a| a.0).fold(f64::INFINITY, f64::min);
        let hi = atoms.iter().map(|a| a.0).fold(f64::NEG_INFINITY, f64::max);
        let total_mass = atoms.iter().map(|a| a.1).sum();
        Ok(RealMeasure { support: (lo, hi), atoms, density: None, total_mass })
    }

    /// Density on `[a, b]` (zero outside) plus atoms inside `[a, b]`.
    pub fn with_density(
        support: (f64, f64),
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        atoms: Vec<(f64, f64)>,
    ) -> Result<Self, RealError> {
        Self::with_edge_density(support, move |x, _, _| density(x), atoms)
    }

    /// Density given as `f(x, x − a, b − x)`; the exact edge distances let
    /// singular edges integrate to full precision.
    pub fn with_edge_density(
        support: (f64, f64),
        density: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static,
        atoms: Vec<(f64, f64)>,
    ) -> Result<Self, RealError> {
        let (a, b) = support;
        if !(a < b) || atoms.iter().any(|p| p.0 < a || p.0 > b || !(p.1 > 0.0)) {
            return Err(RealError::Invalid("atoms must lie in the support interval".into()));
        }
        let cont = integrate_edges(&density, a, b, 1e-13);
        let total_mass = cont + atoms.iter().map(|p| p.1).sum::<f64>();
        Ok(RealMeasure { support, atoms, density: Some(Arc::new(density)), total_mass })
    }

    /// Arcsine law `1/(π√((x−a)(b−x)))` on `[a, b]`.
    pub fn arcsine(a: f64, b: f64) -> Result<Self, RealError> {
        Self::with_edge_density(
            (a, b),
            |_, da, db| if da > 0.0 && db > 0.0 { 1.0 / (std::f64::consts::PI * (da * db).sqrt()) } else { 0.0 },
            Vec::new(),
        )
    }

    /// The arcsine evolution `ρ(·, s)` on `[−√(1−s²), √(1−s²)]`, of mass
    /// `1 − s`.
    pub fn arcsine_evolved(s: f64) -> Result<Self, RealError> {
        let e = (1.0 - s * s).sqrt();
        Self::with_edge_density(
            (-e, e),
            |x, da, db| {
                if da > 0.0 && db > 0.0 {
                    (da * db).sqrt() / (std::f64::consts::PI * (1.0 - x * x))
                } else {
                    0.0
                }
            },
            Vec::new(),
        )
    }

    pub fn from_law(law: &RealLaw) -> Result<Self, RealError> {
        match law {
            RealLaw::Atoms { locations, masses } => {
                Self::atomic(locations.iter().copied().zip(masses.iter().copied()).collect())
            }
            RealLaw::Arcsine { interval } => Self::arcsine(interval[0], interval[1]),
        }
    }

    /// Continuous density at `x` (0 for purely atomic measures).
    pub fn density(&self, x: f64) -> f64 {
        match &self.density {
            Some(f) if x >= self.support.0 && x <= self.support.1 => f(x, x - self.support.0, self.support.1 - x),
            _ => 0.0,
        }
    }

    pub fn has_density(&self) -> bool {
        self.density.is_some()
    }

    /// Mass of the atom at `x`, if any.
    pub fn atom_at(&self, x: f64) -> f64 {
        self.atoms.iter().filter(|a| a.0 == x).map(|a| a.1).sum()
    }

    /// Translate by `c`.
    pub fn shifted(&self, c: f64) -> RealMeasure {
        let density = self.density.clone().map(|f| -> Density { Arc::new(move |x, da, db| f(x - c, da, db)) });
        RealMeasure {
            support: (self.support.0 + c, self.support.1 + c),
            atoms: self.atoms.iter().map(|a| (a.0 + c, a.1)).collect(),
            density,
            total_mass: self.total_mass,
        }
    }

    /// Image under `x ↦ k x` (k > 0) with all masses multiplied by `scale`.
    pub fn dilated(&self, k: f64, scale: f64) -> RealMeasure {
        let density =
            self.density.clone().map(|f| -> Density { Arc::new(move |x, da, db| scale * f(x / k, da / k, db / k) / k) });
        RealMeasure {
            support: (self.support.0 * k, self.support.1 * k),
            atoms: self.atoms.iter().map(|a| (a.0 * k, a.1 * scale)).collect(),
            density,
            total_mass: self.total_mass * scale,
        }
    }

    fn on_support(&self, z: Complex64) -> bool {
        z.im == 0.0
            && (self.atoms.iter().any(|a| a.0 == z.re)
                || (self.density.is_some() && z.re >= self.support.0 && z.re <= self.support.1))
    }

    // (G(z), G′(z)) without the support check
    fn transform(&self, z: Complex64, with_derivative: bool) -> (Complex64, Complex64) {
        let mut g = Complex64::new(0.0, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        for &(u, m) in &self.atoms {
            let r = 1.0 / (z - u);
            g += m * r;
            dg -= m * r * r;
        }
        if let Some(f) = &self.density {
            let (a, b) = self.support;
            let part = |k: u8| {
                integrate_edges(
                    |u, da, db| {
                        let r = 1.0 / (z - u);
                        let v = if with_derivative && k >= 2 { -r * r } else { r };
                        f(u, da, db) * if k % 2 == 0 { v.re } else { v.im }
                    },
                    a,
                    b,
                    QUAD_TOL,
                )
            };
            g += Complex64::new(part(0), part(1));
            if with_derivative {
                dg += Complex64::new(part(2), part(3));
            }
        }
        (g, dg)
    }
}

/// `G(z) = ∫ dμ(u)/(z − u)`: atoms exactly, density by quadrature.
pub fn cauchy_transform(mu: &RealMeasure, z: Complex64) -> Result<Complex64, RealError> {
    if mu.on_support(z) {
        return Err(RealError::OnSupport(z.re));
    }
    Ok(mu.transform(z, false).0)
}

fn g_real(mu: &RealMeasure, x: f64) -> f64 {
    mu.transform(Complex64::new(x, 0.0), false).0.re
}

// Largest t with p(t) false on an increasing-predicate bracket, down to ulp.
fn bisect(mut lo: f64, mut hi: f64, above: impl Fn(f64) -> bool) -> f64 {
    loop {
        let mid = if lo > 0.0 && hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if !(mid > lo && mid < hi) {
            return 0.5 * (lo + hi);
        }
        if above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

fn scale_of(mu: &RealMeasure) -> f64 {
    1.0 + mu.support.0.abs().max(mu.support.1.abs())
}

/// `w₀(y)`: the `w > 0` with `w G₀(w) = y`, for `μ₀` translated so that its
/// support ends at 0. Valid for `μ₀({0}) < y < m` in that chart.
pub fn w0(mu: &RealMeasure, y: f64) -> Result<f64, RealError> {
    let c = mu.support.1;
    let m0 = mu.atom_at(c);
    if !(y > m0 && y < mu.total_mass) {
        return Err(RealError::Range { value: y, lo: m0, hi: mu.total_mass });
    }
    let f = |w: f64| w * g_real(mu, w + c);
    let mut hi = scale_of(mu);
    while f(hi) < y {
        hi *= 2.0;
        if hi > 1e300 {
            return Err(RealError::NoConvergence(format!("w0({y})")));
        }
    }
    Ok(bisect(0.0, hi, |w| f(w) >= y))
}

/// `w_t(y) = w₀(y + t) y/(y + t)`.
pub fn wt(mu: &RealMeasure, t: f64, y: f64) -> Result<f64, RealError> {
    Ok(w0(mu, y + t)? * y / (y + t))
}

fn check_time(mu: &RealMeasure, t: f64) -> Result<(), RealError> {
    if !(t >= 0.0 && t < mu.total_mass) {
        return Err(RealError::Time { t, mass: mu.total_mass });
    }
    Ok(())
}

/// `G_t(x)` for real `x` to the right of the support, by solving
/// `w_t(y) = x` for `y` and returning `y/x`.
pub fn g_on_axis(mu: &RealMeasure, t: f64, x: f64) -> Result<f64, RealError> {
    check_time(mu, t)?;
    let c = mu.support.1;
    let xs = x - c;
    if !(xs > 0.0) {
        return Err(RealError::Range { value: x, lo: c, hi: f64::INFINITY });
    }
    if t == 0.0 {
        return Ok(g_real(mu, x));
    }
    let m = mu.total_mass;
    let lo = (mu.atom_at(c) - t).max(0.0);
    let hi = m - t;
    // w_t increases from its value at lo to ∞ at m − t
    let y = bisect(lo, hi, |y| match wt(mu, t, y) {
        Ok(w) => w >= xs,
        Err(_) => y > 0.5 * (lo + hi),
    });
    Ok(y / xs)
}

/// `G_t(z)` for `z` off the time-`t` support, through the subordination
/// `G_t(z) = G₀(ω)`, `ω − t/G₀(ω) = z`, continued down from `Re z + iY`.
pub fn g_subordinated(mu: &RealMeasure, t: f64, z: Complex64) -> Result<Complex64, RealError> {
    check_time(mu, t)?;
    if t == 0.0 {
        return cauchy_transform(mu, z);
    }
    if z.im < 0.0 {
        return g_subordinated(mu, t, z.conj()).map(|g| g.conj());
    }
    let m = mu.total_mass;
    let big = 10.0 * (scale_of(mu) + z.re.abs());
    let target = z.im;
    let floor = 1e-13 * scale_of(mu);
    let mut levels = Vec::new();
    let mut im = big;
    while im > target.max(floor) * 1.25 {
        levels.push(im);
        im *= 0.8;
    }
    levels.push(target.max(floor));
    if target < floor {
        levels.push(target);
    }
    let mut w = Complex64::new(z.re, big) * (m / (m - t));
    for &level in &levels {
        let zz = Complex64::new(z.re, level);
        w = newton_subordination(mu, t, zz, w)?;
    }
    let g = mu.transform(w, false).0;
    if z.im == 0.0 && g.im.abs() > 1e-9 * g.norm() {
        return Err(RealError::OnSupport(z.re));
    }
    Ok(g)
}

fn newton_subordination(mu: &RealMeasure, t: f64, z: Complex64, mut w: Complex64) -> Result<Complex64, RealError> {
    let res = |w: Complex64| {
        let (g, dg) = mu.transform(w, true);
        (w - t / g - z, 1.0 + t * dg / (g * g))
    };
    let (mut h, mut dh) = res(w);
    for _ in 0..100 {
        let step = h / dh;
        let mut lambda = 1.0;
        loop {
            let cand = w - lambda * step;
            // ω stays above z: Im ω > Im z whenever Im z > 0
            if z.im == 0.0 || cand.im > z.im {
                let (h2, dh2) = res(cand);
                if h2.norm() < h.norm() || lambda < 1e-3 {
                    w = cand;
                    h = h2;
                    dh = dh2;
                    break;
                }
            }
            lambda *= 0.5;
            if lambda < 1e-12 {
                return Err(RealError::NoConvergence(format!("{z}")));
            }
        }
        if (lambda * step).norm() <= 4.0 * f64::EPSILON * w.norm().max(1.0) || h.norm() <= 1e-15 * z.norm().max(1.0) {
            return Ok(w);
        }
    }
    if h.norm() <= 1e-12 * z.norm().max(1.0) {
        Ok(w)
    } else {
        Err(RealError::NoConvergence(format!("{z}")))
    }
}

/// `G_t(z)`: the on-axis recipe for real `z` to the right of the support,
/// the subordination continuation elsewhere.
pub fn g_at_time(mu0: &RealMeasure, t: f64, z: Complex64) -> Result<Complex64, RealError> {
    check_time(mu0, t)?;
    if t == 0.0 {
        return cauchy_transform(mu0, z);
    }
    if z.im == 0.0 && z.re > mu0.support.1 {
        return Ok(Complex64::new(g_on_axis(mu0, t, z.re)?, 0.0));
    }
    g_subordinated(mu0, t, z)
}

/// `−Im G(x + iy)/π` on the grid, optionally with one Richardson step
/// `2 d(y/2) − d(y)`.
pub fn stieltjes_invert(
    g: &(dyn Fn(Complex64) -> Result<Complex64, RealError> + Sync),
    grid: &[f64],
    y: f64,
    richardson: bool,
) -> Result<Vec<f64>, RealError> {
    use rayon::prelude::*;
    grid.par_iter()
        .map(|&x| {
            let d = |h: f64| g(Complex64::new(x, h)).map(|v| -v.im / std::f64::consts::PI);
            if richardson {
                Ok(2.0 * d(0.5 * y)? - d(y)?)
            } else {
                d(y)
            }
        })
        .collect()
}

/// Default offset for Stieltjes inversion.
pub const STIELTJES_OFFSET: f64 = 1e-6;

/// Atoms at candidate locations: the mass is `lim y|G(p + iy)|` from
/// `y ∈ {1e-4, 1e-5, 1e-6}`, extrapolated in `√y` so that an inverse square
/// root edge at `p` is not mistaken for an atom. Masses below 1e-8 are
/// dropped.
pub fn atom_recovery(
    g: &dyn Fn(Complex64) -> Result<Complex64, RealError>,
    candidates: &[f64],
) -> Result<Vec<(f64, f64)>, RealError> {
    let ys = [1e-4, 1e-5, 1e-6];
    let mut out = Vec::new();
    for &p in candidates {
        let mut f = [0.0; 3];
        for (k, &y) in ys.iter().enumerate() {
            f[k] = y * g(Complex64::new(p, y))?.norm();
        }
        // f = M + b s + c s², s = √y; Lagrange value at s = 0
        let s: Vec<f64> = ys.iter().map(|y| y.sqrt()).collect();
        let mut mass = 0.0;
        for i in 0..3 {
            let mut l = 1.0;
            for j in 0..3 {
                if j != i {
                    l *= s[j] / (s[j] - s[i]);
                }
            }
            mass += f[i] * l;
        }
        if mass > 1e-8 {
            out.push((p, mass));
        }
    }
    Ok(out)
}

/// `R(λ)` from `1 + R(G(z)) = z G(z)`: solve `G(z) = λ` on the right of
/// the support and return `zλ − 1`.
pub fn r_transform(mu: &RealMeasure, lambda: f64) -> Result<f64, RealError> {
    r_from(&|x| Ok(g_real(mu, x)), mu.support.1, lambda)
}

fn r_from(g: &dyn Fn(f64) -> Result<f64, RealError>, edge: f64, lambda: f64) -> Result<f64, RealError> {
    let span = 1.0 + edge.abs();
    let mut near = span;
    while g(edge + near)? < lambda {
        near *= 0.5;
        if near < 1e-12 * span {
            return Err(RealError::Range { value: lambda, lo: 0.0, hi: g(edge + near)? });
        }
    }
    let mut far = span;
    while g(edge + far)? > lambda {
        far *= 2.0;
        if far > 1e300 {
            return Err(RealError::Range { value: lambda, lo: 0.0, hi: f64::INFINITY });
        }
    }
    // G decreases on (edge, ∞)
    let d = bisect(near, far, |d| g(edge + d).map_or(true, |v| v <= lambda));
    Ok((edge + d) * lambda - 1.0)
}

/// Max over `λ` of `|R_{μ_t*}(λ) − R₀(λ)/(1−t)|`, where `μ_t*` is the
/// time-`t` law built by the on-axis recipe and rescaled by `x ↦ x/(1−t)`,
/// `mass ↦ mass/(1−t)`.
pub fn free_power_check(mu0: &RealMeasure, t: f64, lambdas: &[f64]) -> Result<f64, RealError> {
    if (mu0.total_mass - 1.0).abs() > 1e-9 {
        return Err(RealError::NotProbability(mu0.total_mass));
    }
    if !(t > 0.0 && t < 1.0) {
        return Err(RealError::Time { t, mass: 1.0 });
    }
    let edge = mu0.support.1 / (1.0 - t);
    let gstar = |x: f64| g_on_axis(mu0, t, (1.0 - t) * x);
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let r = r_from(&gstar, edge, l)?;
        let r0 = r_transform(mu0, l)?;
        worst = worst.max((r - r0 / (1.0 - t)).abs());
    }
    Ok(worst)
}

/// As [`free_power_check`] with the time-`t` law given explicitly.
pub fn free_power_deviation(mu0: &RealMeasure, mut_: &RealMeasure, t: f64, lambdas: &[f64]) -> Result<f64, RealError> {
    if !(t > 0.0 && t < 1.0) {
        return Err(RealError::Time { t, mass: 1.0 });
    }
    let star = mut_.dilated(1.0 / (1.0 - t), 1.0 / (1.0 - t));
    let mut worst: f64 = 0.0;
    for &l in lambdas {
        let r = r_transform(&star, l)?;
        let r0 = r_transform(mu0, l)?;
        worst = worst.max((r - r0 / (1.0 - t)).abs());
    }
    Ok(worst)
}

/// Recovered time-`t` law on a grid.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TransformedMeasure {
    pub t: f64,
    pub atoms: Vec<(f64, f64)>,
    pub grid: Vec<f64>,
    pub density: Vec<f64>,
}

impl TransformedMeasure {
    /// Density by Stieltjes inversion of the subordinated `G_t` at the
    /// default offset; atoms at the initial atom locations.
    pub fn recover(mu0: &RealMeasure, t: f64, grid: Vec<f64>) -> Result<Self, RealError> {
        let g = |z: Complex64| g_subordinated(mu0, t, z);
        let density = stieltjes_invert(&g, &grid, STIELTJES_OFFSET, true)?;
        let cands: Vec<f64> = mu0.atoms.iter().map(|a| a.0).collect();
        let atoms = atom_recovery(&g, &cands)?;
        Ok(TransformedMeasure { t, atoms, grid, density })
    }

    pub fn density_csv(&self) -> String {
        let mut s = String::from("x,density\n");
        for (x, d) in self.grid.iter().zip(&self.density) {
            let _ = writeln!(s, "{x},{d}");
        }
        s
    }

    pub fn atoms_json(&self) -> String {
        serde_json::to_string_pretty(&self.atoms).expect("atoms serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedforms::{two_atom_g, two_atom_real};
    use std::f64::consts::PI;

    fn c(x: f64, y: f64) -> Complex64 {
        Complex64::new(x, y)
    }

    fn two(m1: f64, m2: f64) -> RealMeasure {
        RealMeasure::atomic(vec![(0.0, m1), (-1.0, m2)]).unwrap()
    }

    #[test]
    fn transforms() {
        let mu = two(1.0, 4.0);
        let g = cauchy_transform(&mu, c(0.7, 0.0)).unwrap();
        assert!((g.re - (1.0 / 0.7 + 4.0 / 1.7)).abs() < 1e-15);
        let x = 1e4;
        assert!((x * cauchy_transform(&mu, c(x, 0.0)).unwrap().re - 5.0).abs() < 1e-3);
        let arc = RealMeasure::arcsine(-1.0, 1.0).unwrap();
        assert!((arc.total_mass - 1.0).abs() < 1e-10);
        let g = cauchy_transform(&arc, c(2.0, 0.0)).unwrap();
        assert!((g.re - 1.0 / 3f64.sqrt()).abs() < 1e-10, "{g}");
        // against 1/√(z²−1) off the axis
        let z = c(0.3, 0.5);
        let want = 1.0 / ((z - 1.0).sqrt() * (z + 1.0).sqrt());
        assert!((cauchy_transform(&arc, z).unwrap() - want).norm() < 1e-9);
        assert!(cauchy_transform(&arc, c(0.5, 0.0)).is_err());
        assert!(cauchy_transform(&mu, c(0.0, 0.0)).is_err());
        assert!(cauchy_transform(&mu, c(-0.5, 0.0)).is_ok());
    }

    #[test]
    fn w0_two_atoms() {
        let mu = two(1.0, 1.0);
        assert!((w0(&mu, 1.5).unwrap() - 1.0).abs() < 1e-14);
        for k in 1..=98 {
            let y = 1.0 + 0.01 * k as f64;
            let want = (y - 1.0) / (2.0 - y);
            assert!((w0(&mu, y).unwrap() - want).abs() < 1e-10 * want.max(1.0));
        }
        assert!(w0(&mu, 0.9).is_err() && w0(&mu, 2.0).is_err());
    }

    #[test]
    fn g_at_time_routes() {
        let mu = two(1.0, 4.0);
        let x = 1e4;
        assert!((x * g_at_time(&mu, 2.0, c(x, 0.0)).unwrap().re - 3.0).abs() < 1e-3);
        assert_eq!(g_at_time(&mu, 0.0, c(0.5, 0.0)).unwrap(), cauchy_transform(&mu, c(0.5, 0.0)).unwrap());
        let g = g_at_time(&two(1.0, 1.0), 1.0, c(1.0, 0.0)).unwrap();
        assert!((g.re - 8f64.sqrt() / 4.0).abs() < 1e-12);
        for t in [0.5, 2.0, 4.5] {
            for z in [c(0.3, 0.0), c(2.0, 0.0), c(-0.5, 0.2), c(-2.0, 0.0), c(0.1, 1e-3), c(-0.4, -0.3)] {
                let want = two_atom_g(z, t, 1.0, 4.0);
                let sub = g_subordinated(&mu, t, z).unwrap();
                assert!((sub - want).norm() < 1e-11 * want.norm(), "{t} {z}: {sub} {want}");
                if z.im == 0.0 && z.re > 0.0 {
                    let axis = g_on_axis(&mu, t, z.re).unwrap();
                    assert!((axis - want.re).abs() < 1e-12 * want.norm(), "{t} {z}");
                }
            }
        }
        assert!(g_at_time(&mu, 5.0, c(1.0, 0.0)).is_err());
        assert!(g_subordinated(&mu, 2.0, c(-0.5, 0.0)).is_err());
    }

    #[test]
    fn inversion() {
        let unit = |z: Complex64| -> Result<Complex64, RealError> { Ok(1.0 / z) };
        let d = stieltjes_invert(&unit, &[0.0], 0.01, false).unwrap();
        assert!((d[0] - 100.0 / PI).abs() < 1e-10);
        let mu = two(1.0, 1.0);
        let g = |z: Complex64| g_subordinated(&mu, 1.0, z);
        let grid: Vec<f64> = (0..=16).map(|k| -0.9 + 0.05 * k as f64).collect();
        let d = stieltjes_invert(&g, &grid, 1e-6, true).unwrap();
        for (x, v) in grid.iter().zip(d) {
            let want = two_atom_real(*x, 1.0, 1.0, 1.0).0;
            assert!((v - want).abs() < 1e-3, "{x}: {v} {want}");
        }
    }

    #[test]
    fn atoms_recovered() {
        let mu = two(1.0, 4.0);
        let g = |z: Complex64| g_subordinated(&mu, 0.5, z);
        let a = atom_recovery(&g, &[0.0, -1.0]).unwrap();
        assert!((a[0].1 - 0.5).abs() < 1e-6 && (a[1].1 - 3.5).abs() < 1e-6, "{a:?}");
        let g = |z: Complex64| g_subordinated(&mu, 1.0, z);
        let a = atom_recovery(&g, &[0.0, -1.0]).unwrap();
        assert_eq!(a.len(), 1, "{a:?}");
        let g = |z: Complex64| cauchy_transform(&mu, z);
        let a = atom_recovery(&g, &[0.0, -1.0]).unwrap();
        assert!((a[0].1 - 1.0).abs() < 1e-6 && (a[1].1 - 4.0).abs() < 1e-6);
    }

    #[test]
    fn r_transforms() {
        let unit = RealMeasure::atomic(vec![(0.0, 1.0)]).unwrap();
        for l in [0.01, 0.1, 0.3] {
            assert!(r_transform(&unit, l).unwrap().abs() < 1e-12);
        }
        let p = RealMeasure::atomic(vec![(2.0, 3.0)]).unwrap();
        assert!((r_transform(&p, 0.1).unwrap() - (2.0 * 0.1 + 3.0 - 1.0)).abs() < 1e-12);
        // analytic at 0: quadratic extrapolation from 2h, 3h, 4h predicts h
        let mu = two(0.5, 0.5);
        let r = |l: f64| r_transform(&mu, l).unwrap();
        let h = 0.01;
        let pred = 3.0 * r(2.0 * h) - 3.0 * r(3.0 * h) + r(4.0 * h);
        assert!((pred - r(h)).abs() < 1e-6);
    }

    #[test]
    fn free_power() {
        let mu = two(0.5, 0.5);
        let ls: Vec<f64> = (0..20).map(|k| 0.01 + 0.01 * k as f64).collect();
        let d = free_power_check(&mu, 0.5, &ls).unwrap();
        assert!(d < 1e-5, "{d}");
        assert!(free_power_check(&mu, 1e-9, &ls).unwrap() < 1e-6);
        let arc = RealMeasure::arcsine(-1.0, 1.0).unwrap();
        let d = free_power_deviation(&arc, &RealMeasure::arcsine_evolved(0.5).unwrap(), 0.5, &ls).unwrap();
        assert!(d < 1e-4, "{d}");
    }

    #[test]
    fn inverted_mass() {
        use crate::numeric::integrate;
        let mu = two(1.0, 1.0);
        let d = |x: f64| -g_subordinated(&mu, 1.0, c(x, 1e-6)).unwrap().im / PI;
        let cuts = [-2.0, -1.0, -0.5, 0.0, 1.0];
        let mass: f64 = cuts.windows(2).map(|w| integrate(d, w[0], w[1], 1e-10)).sum();
        assert!((mass - 1.0).abs() < 1e-3, "{mass}");
    }

    #[test]
    fn herglotz_and_shift() {
        let mu = two(1.0, 4.0);
        for (x, y) in [(0.3, 0.1), (-0.5, 2.0), (-3.0, 0.01), (-0.2, 1e-5)] {
            assert!(g_at_time(&mu, 2.0, c(x, y)).unwrap().im < 0.0);
        }
        let sh = mu.shifted(3.0);
        let a = g_at_time(&mu, 2.0, c(0.4, 0.2)).unwrap();
        let b = g_at_time(&sh, 2.0, c(3.4, 0.2)).unwrap();
        assert!((a - b).norm() < 1e-12);
    }
}
