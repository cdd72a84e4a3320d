//! Exponential profiles and their flow under repeated differentiation.
//!
//! A radial law with distribution function `Ψ₀` is encoded by the convex
//! profile `v` with `v′₋(x) = log Ψ₀⁻¹(x)`. Differentiating `[tn]` times maps
//! `v(x)` to `v(x+t) − (x+t) log(x+t) + x log x`, equivalently
//! `Ψ_t⁻¹(x)/x = Ψ₀⁻¹(x+t)/(x+t)`. Jumps of `v′` are void annuli, plateaus
//! are circles of zeroes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

use crate::closedforms::SolutionId;
use crate::ensembles::RadialLaw;
use crate::error::FlowError;
use crate::numeric::integrate;

/// Default number of uniform quantile nodes in a profile.
pub const GRID_NODES: usize = 4096;

// Extra geometric nodes toward 0, where v′ usually diverges.
const ORIGIN_NODES: i32 = 40;

/// Radial distribution function `Ψ(x) = μ(|z| ≤ x)` with its inverse.
pub trait RadialCdf: Send + Sync {
    /// Nondecreasing, right-continuous.
    fn cdf(&self, x: f64) -> f64;
    /// Generalized left-continuous inverse `inf{x ≥ 0 : Ψ(x) ≥ q}`.
    fn quantile(&self, q: f64) -> f64;
    fn support_max(&self) -> f64;
    fn total_mass(&self) -> f64;
    /// Circles `(radius, mass)`.
    fn atoms(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }
    /// Void annuli `(mass below, inner radius, outer radius)`; a void disk
    /// appears with mass 0.
    fn gaps(&self) -> Vec<(f64, f64, f64)> {
        Vec::new()
    }
    /// Catalogued explicit solution with this initial law, if any.
    fn closed_form(&self) -> Option<SolutionId> {
        None
    }
}

impl RadialCdf for RadialLaw {
    fn cdf(&self, x: f64) -> f64 {
        RadialLaw::cdf(self, x)
    }
    fn quantile(&self, q: f64) -> f64 {
        RadialLaw::quantile(self, q)
    }
    fn support_max(&self) -> f64 {
        RadialLaw::support_max(self)
    }
    fn total_mass(&self) -> f64 {
        RadialLaw::total_mass(self)
    }
    fn atoms(&self) -> Vec<(f64, f64)> {
        RadialLaw::atoms(self)
    }
    fn gaps(&self) -> Vec<(f64, f64, f64)> {
        RadialLaw::gaps(self)
    }
    fn closed_form(&self) -> Option<SolutionId> {
        Some(match self.normalized() {
            RadialLaw::CircleMixture { radii, .. } if radii == [1.0] => SolutionId::Kac,
            RadialLaw::CircleMixture { radii, weights } => SolutionId::CircleMixture { radii, weights },
            RadialLaw::PowerRadial { alpha } => SolutionId::WeylFamily { alpha },
            RadialLaw::IntervalUniform { r1, r2 } => SolutionId::IntervalUniform { r1, r2 },
            RadialLaw::EllipticRadial { alpha } => SolutionId::Elliptic { alpha },
            RadialLaw::HyperbolicRadial { alpha } => SolutionId::Hyperbolic { alpha },
            RadialLaw::IntervalMixture { .. } => return None,
        })
    }
}

/// Radial law given by an arbitrary continuous distribution function on
/// `[0, support_max]`; the inverse is found by bisection.
pub struct FnCdf {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    support_max: f64,
    mass: f64,
}

impl FnCdf {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, support_max: f64) -> Self {
        let mass = f(support_max);
        FnCdf { f: Box::new(f), support_max, mass }
    }
}

impl RadialCdf for FnCdf {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            (self.f)(x.min(self.support_max))
        }
    }
    fn quantile(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return 0.0;
        }
        if q >= self.mass {
            return self.support_max;
        }
        let (mut lo, mut hi) = (0.0, self.support_max);
        while let Some(mid) = midpoint(lo, hi) {
            if (self.f)(mid) >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
    fn support_max(&self) -> f64 {
        self.support_max
    }
    fn total_mass(&self) -> f64 {
        self.mass
    }
}

// Bisection midpoint, geometric across wide positive brackets; None once the
// bracket holds adjacent doubles.
fn midpoint(lo: f64, hi: f64) -> Option<f64> {
    let mid = if lo > 0.0 && hi > 2.0 * lo { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
    (mid > lo && mid < hi).then_some(mid)
}

/// `Ψ(·, t)` obtained from a base law by the quantile relation.
pub struct FlowedCdf<'a> {
    base: &'a dyn RadialCdf,
    t: f64,
}

impl FlowedCdf<'_> {
    pub fn time(&self) -> f64 {
        self.t
    }
}

impl RadialCdf for FlowedCdf<'_> {
    /// Monotone bisection on the quantile.
    fn cdf(&self, r: f64) -> f64 {
        if self.t == 0.0 {
            return self.base.cdf(r);
        }
        if !(r > 0.0) {
            return 0.0;
        }
        let top = self.total_mass();
        let mut hi = top;
        if top.is_infinite() {
            hi = 1.0;
            while self.quantile(hi) <= r {
                hi *= 2.0;
                if hi > 1e300 {
                    return f64::INFINITY;
                }
            }
        } else if self.quantile(top) <= r {
            return top;
        }
        let mut lo = 0.0;
        while let Some(mid) = midpoint(lo, hi) {
            if self.quantile(mid) <= r {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
    fn quantile(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return 0.0;
        }
        if self.t == 0.0 {
            return self.base.quantile(q);
        }
        let q = q.min(self.total_mass());
        let s = q + self.t;
        self.base.quantile(s) * (q / s)
    }
    fn support_max(&self) -> f64 {
        let m = self.base.total_mass();
        if m.is_infinite() {
            return self.base.support_max();
        }
        self.base.support_max() * (m - self.t) / m
    }
    fn total_mass(&self) -> f64 {
        self.base.total_mass() - self.t
    }
    fn atoms(&self) -> Vec<(f64, f64)> {
        if self.t == 0.0 {
            self.base.atoms()
        } else {
            Vec::new()
        }
    }
    fn gaps(&self) -> Vec<(f64, f64, f64)> {
        let t = self.t;
        self.base
            .gaps()
            .into_iter()
            .filter(|g| g.0 > t || t == 0.0)
            .map(|(x0, a, b)| {
                let s = (x0 - t) / x0;
                (x0 - t, a * s, b * s)
            })
            .collect()
    }
}

/// `Ψ(·, t)` for the law started from `psi0`.
pub fn cdf_at_time(psi0: &dyn RadialCdf, t: f64) -> Result<FlowedCdf<'_>, FlowError> {
    let m = psi0.total_mass();
    if !(t >= 0.0 && t < m) {
        return Err(FlowError::Time { t, mass: m });
    }
    Ok(FlowedCdf { base: psi0, t })
}

/// `(Ψ(x, t), ψ(x, t))`, from the closed form when `psi0` has one.
pub fn psi_at_time(psi0: &dyn RadialCdf, x: f64, t: f64) -> Result<(f64, f64), FlowError> {
    if let Some(id) = psi0.closed_form() {
        return id.eval(x, t);
    }
    let f = cdf_at_time(psi0, t)?;
    Ok((f.cdf(x), fd_density(&f, x)))
}

fn fd_density(f: &dyn RadialCdf, x: f64) -> f64 {
    let h = (1e-6 * x).max(1e-6);
    (f.cdf(x + h) - f.cdf(x - h)) / (2.0 * h)
}

/// `ψ(x, t)`: closed form when catalogued, else a centered difference of
/// `Ψ(·, t)` with step `max(1e-6, 1e-6·x)`.
pub fn density_at_time(psi0: &dyn RadialCdf, t: f64, x: f64) -> Result<f64, FlowError> {
    Ok(psi_at_time(psi0, x, t)?.1)
}

/// `ψ(x, t)` by the finite difference only.
pub fn density_numeric(psi0: &dyn RadialCdf, t: f64, x: f64) -> Result<f64, FlowError> {
    Ok(fd_density(&cdf_at_time(psi0, t)?, x))
}

/// Jump of `v′`, i.e. a void annulus.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Jump {
    pub x: f64,
    /// Location of the jump in the initial profile.
    pub source: f64,
    pub minus: f64,
    pub plus: f64,
}

/// Interval where `v′` is constant, i.e. a circle of zeroes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plateau {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

/// Convex profile on `(0, mass]`, sampled at nodes with one-sided
/// derivatives; `v′` is linear between nodes.
#[derive(Clone, Debug)]
pub struct Profile {
    pub mass: f64,
    /// Time already flowed since the initial profile.
    pub time: f64,
    x: Vec<f64>,
    minus: Vec<f64>,
    plus: Vec<f64>,
    v: Vec<f64>,
    /// `v′₊(0)`, `−∞` unless there is a void disk.
    pub dv_plus_zero: f64,
    pub jumps: Vec<Jump>,
    pub plateaus: Vec<Plateau>,
}

fn node_grid(mass: f64, specials: &[f64]) -> Vec<f64> {
    let n = GRID_NODES as f64;
    let near = |x: f64| specials.iter().any(|s| (s - x).abs() <= 1e-12 * mass);
    let mut xs: Vec<f64> = (1..=ORIGIN_NODES).map(|j| mass / n * 0.5f64.powi(j)).collect();
    xs.extend((1..=GRID_NODES).map(|i| mass * i as f64 / n).filter(|&x| !near(x)));
    xs.extend(specials.iter().copied().filter(|&s| s > 0.0 && s <= mass));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

fn ln_pos(r: f64) -> f64 {
    r.max(f64::MIN_POSITIVE).ln()
}

/// Profile of an initial law: `v′₋(x) = log Ψ₀⁻¹(x)`, `v(0) = 0`.
pub fn profile_from_cdf(psi0: &dyn RadialCdf) -> Result<Profile, FlowError> {
    let m = psi0.total_mass();
    if !(m > 0.0) {
        return Err(FlowError::NoMass);
    }
    if m.is_infinite() {
        return Err(FlowError::Unbounded);
    }
    if psi0.cdf(0.0) > 0.0 {
        return Err(FlowError::AtomAtOrigin);
    }
    let gaps = psi0.gaps();
    let mut dv_plus_zero = f64::NEG_INFINITY;
    let mut jumps = Vec::new();
    for &(x0, a, b) in &gaps {
        if x0 == 0.0 {
            dv_plus_zero = b.ln();
        } else {
            jumps.push(Jump { x: x0, source: x0, minus: a.ln(), plus: b.ln() });
        }
    }
    let plateaus: Vec<Plateau> = psi0
        .atoms()
        .into_iter()
        .map(|(r, w)| {
            let hi = psi0.cdf(r).min(m);
            Plateau { lo: (hi - w).max(0.0), hi, value: r.ln() }
        })
        .collect();
    // plateau ends coincide with jumps up to rounding; the jump wins
    let mut specials: Vec<f64> = jumps.iter().map(|j| j.x).collect();
    for e in plateaus.iter().flat_map(|p| [p.lo, p.hi]) {
        if !specials.iter().any(|s| (s - e).abs() <= 1e-12 * m) {
            specials.push(e);
        }
    }
    let x = node_grid(m, &specials);
    let minus: Vec<f64> = x.par_iter().map(|&x| ln_pos(psi0.quantile(x))).collect();
    let mut plus = minus.clone();
    for j in &jumps {
        if let Ok(i) = x.binary_search_by(|p| p.total_cmp(&j.x)) {
            plus[i] = j.plus;
        }
    }
    let lnq = |y: f64| ln_pos(psi0.quantile(y));
    let cells: Vec<f64> = (0..x.len())
        .into_par_iter()
        .map(|i| {
            let a = if i == 0 { 0.0 } else { x[i - 1] };
            integrate(lnq, a, x[i], 1e-12)
        })
        .collect();
    let mut acc = 0.0;
    let v = cells
        .into_iter()
        .map(|c| {
            acc += c;
            acc
        })
        .collect();
    Ok(Profile { mass: m, time: 0.0, x, minus, plus, v, dv_plus_zero, jumps, plateaus })
}

impl Profile {
    /// Nodes as `(x, v′₋(x), v′₊(x))`.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.x.len()).map(|i| (self.x[i], self.minus[i], self.plus[i]))
    }

    // (cell index i with x[i−1] < x ≤ x[i], exact node hit)
    fn locate(&self, x: f64) -> (usize, bool) {
        let i = self.x.partition_point(|&p| p < x);
        (i, i < self.x.len() && self.x[i] == x)
    }

    fn interp(&self, x: f64, i: usize) -> f64 {
        if i == 0 {
            return self.minus[0];
        }
        if i >= self.x.len() {
            return self.minus[self.x.len() - 1];
        }
        let (a, b) = (self.x[i - 1], self.x[i]);
        let (fa, fb) = (self.plus[i - 1], self.minus[i]);
        if fb.is_infinite() {
            return fa;
        }
        // cells near 0 are geometric and v′ behaves like c·log x there
        let w = if b > 1.5 * a { (x / a).ln() / (b / a).ln() } else { (x - a) / (b - a) };
        fa + (fb - fa) * w
    }

    /// Left derivative `v′₋(x)`.
    pub fn dv_minus(&self, x: f64) -> f64 {
        match self.locate(x) {
            (i, true) => self.minus[i],
            (i, false) => self.interp(x, i),
        }
    }

    /// Right derivative `v′₊(x)`.
    pub fn dv_plus(&self, x: f64) -> f64 {
        match self.locate(x) {
            (i, true) => self.plus[i],
            (i, false) => self.interp(x, i),
        }
    }

    /// `v(x)`, exact at nodes and integrated along the linear `v′` between.
    pub fn v(&self, x: f64) -> f64 {
        match self.locate(x) {
            (i, true) => self.v[i],
            (0, false) => self.v[0] * x / self.x[0],
            (i, false) if i >= self.x.len() => *self.v.last().unwrap(),
            (i, false) => {
                let a = self.x[i - 1];
                self.v[i - 1] + 0.5 * (x - a) * (self.plus[i - 1] + self.interp(x, i))
            }
        }
    }
}

/// Flow by `t`: `∂₁v(x, t) = v′(x+t) + log(x/(x+t))` on `(0, mass − t]`.
pub fn flow_profile(v: &Profile, t: f64) -> Result<Profile, FlowError> {
    if !(t >= 0.0 && t < v.mass) {
        return Err(FlowError::Time { t, mass: v.mass });
    }
    if t == 0.0 {
        return Ok(v.clone());
    }
    let m = v.mass - t;
    let start = v.x.partition_point(|&p| p <= t);
    let first = v.x.get(start).map_or(m, |&p| p - t);
    let mut x: Vec<f64> = (1..=ORIGIN_NODES)
        .rev()
        .map(|j| first * 0.5f64.powi(j))
        .collect();
    let mut minus = Vec::new();
    let mut plus = Vec::new();
    let mut vals = Vec::new();
    let shift = |y: f64| (y / (y + t)).ln();
    let vflow = |y: f64, base: f64| base - (y + t) * (y + t).ln() + y * y.ln();
    for &y in &x {
        let d = v.dv_minus(y + t) + shift(y);
        minus.push(d);
        plus.push(d);
        vals.push(vflow(y, v.v(y + t)));
    }
    for i in start..v.x.len() {
        let y = v.x[i] - t;
        x.push(y);
        minus.push(v.minus[i] + shift(y));
        plus.push(v.plus[i] + shift(y));
        vals.push(vflow(y, v.v[i]));
    }
    let jumps = v
        .jumps
        .iter()
        .filter(|j| j.x > t)
        .map(|j| {
            let y = j.x - t;
            Jump { x: y, source: j.source, minus: j.minus + shift(y), plus: j.plus + shift(y) }
        })
        .collect();
    Ok(Profile {
        mass: m,
        time: v.time + t,
        x,
        minus,
        plus,
        v: vals,
        dv_plus_zero: f64::NEG_INFINITY,
        jumps,
        plateaus: Vec::new(),
    })
}

/// Void annulus at some time, with the profile jump it comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
    pub source: f64,
}

/// Geometric features of the zero distribution at a time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureReport {
    pub time: f64,
    pub void_disk_radius: f64,
    pub annuli: Vec<Annulus>,
    /// `(radius, mass)`; only ever nonempty at time 0.
    pub circles: Vec<(f64, f64)>,
    /// `t` sits on a plateau end or jump of the profile, where the
    /// left-continuous convention decides the answer.
    pub at_transition: bool,
}

impl FeatureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Features after flowing `v` by `t`: annuli `r∓(t) = e^{v′∓(x₀)}(x₀−t)/x₀`
/// while `t < x₀`; circles and the void disk vanish for `t > 0`.
pub fn track_features(v: &Profile, t: f64) -> Result<FeatureReport, FlowError> {
    if !(t >= 0.0 && t < v.mass) {
        return Err(FlowError::Time { t, mass: v.mass });
    }
    let annuli = v
        .jumps
        .iter()
        .filter(|j| j.x > t)
        .map(|j| {
            let s = (j.x - t) / j.x;
            Annulus { inner: j.minus.exp() * s, outer: j.plus.exp() * s, source: j.source }
        })
        .collect();
    let (void_disk_radius, circles) = if t == 0.0 {
        (v.dv_plus_zero.exp(), v.plateaus.iter().map(|p| (p.value.exp(), p.hi - p.lo)).collect())
    } else {
        (0.0, Vec::new())
    };
    let close = |x: f64| (x - t).abs() <= 1e-12 * v.mass;
    let at_transition =
        t > 0.0 && (v.jumps.iter().any(|j| close(j.x)) || v.plateaus.iter().any(|p| close(p.lo) || close(p.hi)));
    Ok(FeatureReport { time: v.time + t, void_disk_radius, annuli, circles, at_transition })
}

fn pde_residual(psi: &(dyn Fn(f64, f64) -> Result<f64, FlowError> + Sync), x: f64, t: f64) -> Result<f64, FlowError> {
    let p = psi(x, t)?;
    if !(p > 0.0) {
        return Err(FlowError::ZeroRegion { x, t });
    }
    let hx = 1e-5 * x;
    let ht = 1e-5 * t.max(1e-3);
    let pt = (psi(x, t + ht)? - psi(x, t - ht)?) / (2.0 * ht);
    let px = (psi(x + hx, t)? - psi(x - hx, t)?) / (2.0 * hx);
    Ok((pt - (x * px / p - 1.0)).abs())
}

fn pde_max(psi: &(dyn Fn(f64, f64) -> Result<f64, FlowError> + Sync), grid: &[(f64, f64)]) -> Result<f64, FlowError> {
    let r: Result<Vec<f64>, FlowError> = grid.par_iter().map(|&(x, t)| pde_residual(psi, x, t)).collect();
    Ok(r?.into_iter().fold(0.0, f64::max))
}

/// Max over `(x, t)` of `|∂_tΨ − (x ∂_xΨ/Ψ − 1)|` by central differences,
/// using the closed form when `psi0` has one.
pub fn pde_check_profile(psi0: &dyn RadialCdf, grid: &[(f64, f64)]) -> Result<f64, FlowError> {
    pde_max(&|x, t| Ok(psi_at_time(psi0, x, t)?.0), grid)
}

/// As [`pde_check_profile`] but always through the numerically flowed `Ψ`.
pub fn pde_check_numeric(psi0: &dyn RadialCdf, grid: &[(f64, f64)]) -> Result<f64, FlowError> {
    pde_max(&|x, t| Ok(cdf_at_time(psi0, t)?.cdf(x)), grid)
}

/// Rectangular `(x, t)` grid with `nx × nt` points including the corners.
pub fn grid(x: (f64, f64), t: (f64, f64), nx: usize, nt: usize) -> Vec<(f64, f64)> {
    let step = |(a, b): (f64, f64), n: usize, i: usize| if n < 2 { a } else { a + (b - a) * i as f64 / (n - 1) as f64 };
    (0..nx).flat_map(|i| (0..nt).map(move |j| (step(x, nx, i), step(t, nt, j)))).collect()
}

/// CSV `x,Psi,psi` of `Ψ(·, t)` on a grid.
pub fn export_csv(psi0: &dyn RadialCdf, t: f64, xs: &[f64]) -> Result<String, FlowError> {
    let mut s = String::from("x,Psi,psi\n");
    for &x in xs {
        let (a, b) = psi_at_time(psi0, x, t)?;
        let _ = writeln!(s, "{x},{a},{b}");
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedforms;

    fn three_circles() -> RadialLaw {
        RadialLaw::CircleMixture { radii: vec![1.0, 2.0, 3.0], weights: vec![1.0 / 3.0; 3] }
    }

    #[test]
    fn kac_profile_is_flat() {
        let p = profile_from_cdf(&RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] }).unwrap();
        assert!(p.nodes().filter(|n| n.0 < 1.0).all(|n| n.1 == 0.0 && n.2 == 0.0));
        assert_eq!(p.plateaus.len(), 1);
        assert!(p.v(0.7).abs() < 1e-12);
        assert_eq!(p.dv_plus_zero, 0.0);
    }

    #[test]
    fn three_circle_profile() {
        let p = profile_from_cdf(&three_circles()).unwrap();
        for (x, r) in [(0.1, 1.0), (1.0 / 3.0, 1.0), (0.4, 2.0), (0.6, 2.0), (0.9, 3.0), (1.0, 3.0)] {
            assert!((p.dv_minus(x) - f64::ln(r)).abs() < 1e-12, "{x}");
        }
        assert_eq!(p.jumps.len(), 2);
        assert!((p.jumps[0].plus - 2f64.ln()).abs() < 1e-15);
        assert!((p.dv_plus(1.0 / 3.0) - 2f64.ln()).abs() < 1e-15);
        assert_eq!(p.plateaus.len(), 3);
    }

    #[test]
    fn weyl_profile() {
        for alpha in [0.5, 2.0] {
            let p = profile_from_cdf(&RadialLaw::PowerRadial { alpha }).unwrap();
            for (x, lo, hi) in p.nodes() {
                assert!((lo - alpha * x.ln()).abs() < 1e-12 && lo == hi);
            }
            // v(x) = α(x log x − x)
            for x in [0.01, 0.3, 0.77, 1.0] {
                assert!((p.v(x) - alpha * (x * x.ln() - x)).abs() < 1e-7, "{alpha} {x}");
            }
        }
    }

    // sup_s (x s − I(s)) by ternary search on the concave objective
    fn legendre(i: impl Fn(f64) -> f64, x: f64, lo: f64, hi: f64) -> f64 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..300 {
            let m1 = a + (b - a) / 3.0;
            let m2 = b - (b - a) / 3.0;
            if x * m1 - i(m1) < x * m2 - i(m2) {
                a = m1;
            } else {
                b = m2;
            }
        }
        let s = 0.5 * (a + b);
        x * s - i(s)
    }

    #[test]
    fn profile_is_legendre_transform() {
        // I(s) = ∫_{−∞}^s Ψ₀(e^u) du = Σ w (s − log r)⁺ for circles
        let p = profile_from_cdf(&three_circles()).unwrap();
        let i = |s: f64| [1.0f64, 2.0, 3.0].iter().map(|r| (s - r.ln()).max(0.0) / 3.0).sum::<f64>();
        for x in [0.2, 0.5, 0.8, 0.95] {
            let want = legendre(i, x, -5.0, 5.0);
            assert!((p.v(x) - want).abs() < 1e-9, "{x}: {} {want}", p.v(x));
        }
    }

    #[test]
    fn kac_flow_and_identity() {
        let p = profile_from_cdf(&RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] }).unwrap();
        let t = 0.4;
        let f = flow_profile(&p, t).unwrap();
        for (x, lo, hi) in f.nodes() {
            let want = (x / (x + t)).ln();
            assert!((lo - want).abs() < 1e-14 && (hi - want).abs() < 1e-14);
        }
        assert!((f.mass - 0.6).abs() < 1e-15);
        let same = flow_profile(&p, 0.0).unwrap();
        assert_eq!(same.nodes().collect::<Vec<_>>(), p.nodes().collect::<Vec<_>>());
        assert!(flow_profile(&p, 1.0).is_err());
    }

    #[test]
    fn flow_removes_plateaus() {
        let p = profile_from_cdf(&three_circles()).unwrap();
        let f = flow_profile(&p, 0.3).unwrap();
        let n: Vec<_> = f.nodes().collect();
        assert!(n.windows(2).all(|w| w[1].1 > w[0].2 && w[0].1 <= w[0].2));
        assert!(f.plateaus.is_empty());
        assert_eq!(f.jumps.len(), 2);
        assert!((f.jumps[1].x - (2.0 / 3.0 - 0.3)).abs() < 1e-15);
        assert_eq!(flow_profile(&p, 0.5).unwrap().jumps.len(), 1);
    }

    #[test]
    fn flowed_cdf_profile_matches_profile_flow() {
        let law = three_circles();
        let t = 0.25;
        let a = flow_profile(&profile_from_cdf(&law).unwrap(), t).unwrap();
        let b = profile_from_cdf(&cdf_at_time(&law, t).unwrap()).unwrap();
        // exact at the nodes of each, linear interpolation in between
        for (x, lo, _) in a.nodes().step_by(97) {
            assert!((lo - b.dv_minus(x)).abs() < 1e-4, "{x}");
            let exact = law.quantile(x + t).ln() + (x / (x + t)).ln();
            assert!((lo - exact).abs() < 1e-12, "{x}");
        }
        for x in [0.01, 0.05, 0.2, 0.41, 0.6, 0.75] {
            assert!((a.v(x) - a.v(0.01) - (b.v(x) - b.v(0.01))).abs() < 1e-7, "{x}");
        }
        assert_eq!(a.jumps.len(), b.jumps.len());
    }

    #[test]
    fn cdf_at_time_examples() {
        let kac = RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] };
        let f = cdf_at_time(&kac, 0.3).unwrap();
        for x in [0.1, 0.4, 0.69] {
            assert!((f.cdf(x) - x * 0.3 / (1.0 - x)).abs() < 1e-14);
        }
        assert!((f.cdf(5.0) - 0.7).abs() < 1e-15);
        let w1 = RadialLaw::PowerRadial { alpha: 1.0 };
        let f = cdf_at_time(&w1, 0.5).unwrap();
        assert!((f.cdf(0.3) - 0.3).abs() < 1e-14);
        let w = RadialLaw::PowerRadial { alpha: 0.5 };
        let f = cdf_at_time(&w, 0.25).unwrap();
        let want = (0.25 + 0.3125f64.sqrt()) / 2.0;
        assert!((f.cdf(0.5) - want).abs() < 1e-14);
        assert!((want - 0.4045085).abs() < 1e-7);
        assert!(cdf_at_time(&w, 1.0).is_err());
    }

    #[test]
    fn densities() {
        let kac = RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] };
        assert_eq!(density_at_time(&kac, 0.5, 0.5).unwrap(), 2.0);
        let mass = integrate(|x| density_at_time(&kac, 0.5, x).unwrap(), 0.0, 0.5, 1e-12);
        assert!((mass - 0.5).abs() < 1e-6);
        let w2 = RadialLaw::PowerRadial { alpha: 2.0 };
        let fd = density_numeric(&w2, 0.2, 0.3).unwrap();
        assert!((fd - 1.0 / 1.24f64.sqrt()).abs() < 1e-6, "{fd}");
        assert_eq!(density_numeric(&w2, 0.2, 0.95).unwrap(), 0.0);
    }

    #[test]
    fn features() {
        let law = RadialLaw::IntervalMixture { pieces: vec![[0.5, 1.0], [2.0, 3.0]], weights: vec![0.5, 0.5] };
        let p = profile_from_cdf(&law).unwrap();
        assert_eq!(p.jumps.len(), 1);
        assert!(p.jumps[0].minus.abs() < 1e-15 && (p.jumps[0].plus - 2f64.ln()).abs() < 1e-15);
        assert!((track_features(&p, 0.0).unwrap().void_disk_radius - 0.5).abs() < 1e-15);
        for t in [0.1, 0.2, 0.4] {
            let r = track_features(&p, t).unwrap();
            let a = r.annuli[0];
            let s = (0.5 - t) / 0.5;
            assert!((a.inner - s).abs() < 1e-14 && (a.outer - 2.0 * s).abs() < 1e-14);
            assert!((a.outer / a.inner - 2.0).abs() < 1e-12);
            assert_eq!(r.void_disk_radius, 0.0);
        }
        assert!(track_features(&p, 0.5).unwrap().annuli.is_empty());
        assert!(track_features(&p, 0.5).unwrap().at_transition);
        let c = profile_from_cdf(&three_circles()).unwrap();
        assert_eq!(track_features(&c, 0.0).unwrap().circles.len(), 3);
        let r = track_features(&c, 0.01).unwrap();
        assert!(r.circles.is_empty() && r.void_disk_radius == 0.0);
        assert!(r.to_json().contains("\"annuli\""));
    }

    #[test]
    fn pde_residuals() {
        // the corner (0.4, 0.6) sits on the support edge x = 1 − t
        let g: Vec<_> = grid((0.1, 0.4), (0.2, 0.6), 7, 5).into_iter().filter(|&(x, t)| x < 0.99 * (1.0 - t)).collect();
        assert_eq!(g.len(), 34);
        let kac = RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] };
        assert!(pde_check_profile(&kac, &g).unwrap() < 1e-6);
        assert!(pde_check_profile(&RadialLaw::PowerRadial { alpha: 0.5 }, &g).unwrap() < 1e-6);
        let cube = FnCdf::new(|x: f64| x * x * x, 1.0);
        let g = grid((0.1, 0.3), (0.2, 0.6), 5, 5);
        let r = pde_check_numeric(&cube, &g).unwrap();
        assert!(r < 1e-4, "{r}");
        assert!(matches!(
            pde_check_profile(&RadialLaw::IntervalUniform { r1: 1.0, r2: 2.0 }, &[(0.0, 0.5)]),
            Err(FlowError::ZeroRegion { .. })
        ));
    }

    #[test]
    fn numeric_flow_matches_closed_form() {
        let law = RadialLaw::EllipticRadial { alpha: 0.5 };
        let f = cdf_at_time(&law, 0.3).unwrap();
        for x in [0.2, 1.0, 4.0] {
            assert!((f.cdf(x) - closedforms::elliptic(x, 0.3, 0.5).0).abs() < 1e-12);
        }
        let law = RadialLaw::HyperbolicRadial { alpha: 0.5 };
        let f = cdf_at_time(&law, 1.0).unwrap();
        assert!((f.cdf(0.5) - 1.4574271077563381).abs() < 1e-12);
    }

    #[test]
    fn csv_export() {
        let s = export_csv(&RadialLaw::PowerRadial { alpha: 1.0 }, 0.5, &[0.1, 0.2]).unwrap();
        assert_eq!(s, "x,Psi,psi\n0.1,0.1,1\n0.2,0.2,1\n");
    }
}
