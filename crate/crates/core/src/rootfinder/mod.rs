//! Zeroes of a [`Poly`]: Aberth–Ehrlich for the general complex case, an
//! interlacing bisection for real-rooted polynomials given by coefficients,
//! and a root-to-critical-point flow for real-rooted polynomials given by
//! their roots.

mod complex_flow;
mod flow;
mod tree;

pub use complex_flow::ComplexRootFlow;
pub use flow::{critical_points_direct, RealRootFlow};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::TAU;

use crate::error::RootError;
use crate::numeric::{XComplex, XReal};
use crate::polynomial::{abs_bound, abs_coeffs, derivative, eval_with_derivative, strip_origin_zeros, Poly};

/// Default correction tolerance for a given degree.
pub fn default_tol(degree: usize) -> f64 {
    if degree <= 2000 {
        1e-10
    } else {
        1e-8
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RootSet {
    /// Zeroes of the deflated polynomial.
    pub roots: Vec<Complex64>,
    /// `log|p(z)| − log Σ|c_k||z|^k` per root.
    pub residual_log: Vec<f64>,
    pub iterations_used: usize,
    pub converged: bool,
    /// Exact zeroes at the origin removed before iterating.
    pub origin_multiplicity: usize,
}

impl RootSet {
    /// Roots including the deflated origin zeroes.
    pub fn all_roots(&self) -> Vec<Complex64> {
        let mut v = vec![Complex64::new(0.0, 0.0); self.origin_multiplicity];
        v.extend_from_slice(&self.roots);
        v
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.all_roots().iter().map(|z| z.norm()).collect()
    }

    /// CSV with columns `re,im,modulus,residual_log`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("re,im,modulus,residual_log\n");
        for _ in 0..self.origin_multiplicity {
            s.push_str("0,0,0,-inf\n");
        }
        for (z, r) in self.roots.iter().zip(&self.residual_log) {
            s.push_str(&format!("{:e},{:e},{:e},{:e}\n", z.re, z.im, z.norm(), r));
        }
        s
    }
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Starting points from the upper convex hull of `(k, log|c_k|)`.
///
/// An edge of the hull from `k0` to `k1` with slope `s` contributes `k1 − k0`
/// points on the circle of radius `e^{−s}`. Angles are equidistributed on each
/// circle and shifted by a golden-ratio offset per edge.
pub fn initial_guesses(p: &Poly) -> Vec<Complex64> {
    let pts: Vec<(f64, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as f64, c.ln_abs()))
        .collect();
    let hull = upper_hull(&pts);
    let d = p.degree();
    let mut out = Vec::with_capacity(d);
    for (e, w) in hull.windows(2).enumerate() {
        let (k0, l0) = w[0];
        let (k1, l1) = w[1];
        let count = (k1 - k0).round() as usize;
        let radius = (-(l1 - l0) / (k1 - k0)).exp();
        let offset = (e as f64 * GOLDEN).fract() + 0.25;
        for j in 0..count {
            let theta = TAU * (j as f64 + offset) / count as f64;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    // exact zeroes at the low end are not covered by the hull
    while out.len() < d {
        let j = out.len();
        out.push(Complex64::from_polar(1e-3, TAU * (j as f64 * GOLDEN).fract()));
    }
    out
}

fn upper_hull(pts: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut h: Vec<(f64, f64)> = Vec::new();
    for &q in pts {
        while h.len() >= 2 {
            let a = h[h.len() - 2];
            let b = h[h.len() - 1];
            // drop b when it lies on or below the chord a-q
            if (b.0 - a.0) * (q.1 - a.1) - (b.1 - a.1) * (q.0 - a.0) >= 0.0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(q);
    }
    h
}

/// All zeroes by Aberth–Ehrlich iteration with Jacobi sweeps.
///
/// A root is settled once its correction drops below `tol·max(1, |z|)`, or
/// once its relative residual sits at the rounding floor of the evaluation,
/// past which further corrections are noise. Exact zero coefficients at the
/// low end are deflated first.
pub fn find_roots(p: &Poly, tol: f64, max_iter: usize) -> Result<RootSet, RootError> {
    if p.degree() == 0 {
        return Err(RootError::Constant);
    }
    let (q, origin) = strip_origin_zeros(p, 0.0);
    let d = q.degree();
    if d == 0 {
        return Ok(RootSet {
            roots: vec![],
            residual_log: vec![],
            iterations_used: 0,
            converged: true,
            origin_multiplicity: origin,
        });
    }
    let coeffs = q.coeffs();
    if d == 1 {
        let z = (-q.coeff(0)).ratio(&q.coeff(1));
        return Ok(RootSet {
            roots: vec![z],
            residual_log: vec![residual(&q, z)],
            iterations_used: 0,
            converged: true,
            origin_multiplicity: origin,
        });
    }
    let abs = abs_coeffs(coeffs);
    let mut z = initial_guesses(&q);
    let mut done = vec![false; d];
    let floor = (8.0 * d as f64 * f64::EPSILON).ln();
    let mut iters = 0;
    while iters < max_iter && done.iter().any(|f| !f) {
        iters += 1;
        let snapshot = z.clone();
        let updates: Vec<(Complex64, bool)> = (0..d)
            .into_par_iter()
            .with_min_len(32)
            .map(|j| {
                if done[j] {
                    return (snapshot[j], true);
                }
                let zj = snapshot[j];
                let (pv, dpv) = eval_with_derivative(coeffs, zj);
                if pv.is_zero() {
                    return (zj, true);
                }
                let at_floor = pv.ln_abs() - abs_bound(&abs, zj.norm()) < floor;
                let newton = if dpv.is_zero() { Complex64::new(1e-3, 1e-3) } else { pv.ratio(&dpv) };
                let mut s = Complex64::new(0.0, 0.0);
                for (i, zi) in snapshot.iter().enumerate() {
                    if i != j {
                        let diff = zj - zi;
                        s += diff.conj() / diff.norm_sqr();
                    }
                }
                let w = newton / (Complex64::new(1.0, 0.0) - newton * s);
                let w = if w.re.is_finite() && w.im.is_finite() { w } else { Complex64::new(0.0, 0.0) };
                let small = w.norm() < tol * zj.norm().max(1.0);
                (zj - w, small || at_floor)
            })
            .collect();
        for (j, (zn, fin)) in updates.into_iter().enumerate() {
            z[j] = zn;
            done[j] = fin;
        }
    }
    let residual_log = z.par_iter().map(|&zj| eval_with_derivative(coeffs, zj).0.ln_abs() - abs_bound(&abs, zj.norm())).collect();
    Ok(RootSet {
        roots: z,
        residual_log,
        iterations_used: iters,
        converged: done.iter().all(|&f| f),
        origin_multiplicity: origin,
    })
}

fn residual(q: &Poly, z: Complex64) -> f64 {
    let (pv, _) = eval_with_derivative(q.coeffs(), z);
    pv.ln_abs() - q.ln_abs_bound(z.norm())
}

fn eval_xreal(p: &Poly, x: f64) -> XReal {
    let xr = XReal::from_f64(x);
    let mut acc = XReal::ZERO;
    for c in p.coeffs().iter().rev() {
        acc = acc * xr + XReal::new(c.significand().re, c.exponent());
    }
    acc
}

/// Real zeroes of a real-rooted polynomial with all roots in `[a, b]`.
///
/// Roots of `p^{(k+1)}` bracket those of `p^{(k)}`, so the recursion starts at
/// the linear derivative and bisects down. Meant for moderate degree: values
/// are taken from the monomial coefficients, whose conditioning on an interval
/// degrades exponentially with the degree.
pub fn find_real_roots(p: &Poly, interval: (f64, f64), tol: f64) -> Result<Vec<f64>, RootError> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(RootError::Interval(a, b));
    }
    let d = p.degree();
    if d == 0 {
        return Err(RootError::Constant);
    }
    let real = Poly::from_coeffs(
        p.coeffs().iter().map(|c| XComplex::new(num_complex::Complex64::new(c.significand().re, 0.0), c.exponent())).collect(),
    )?;
    let mut derivs = Vec::with_capacity(d);
    for k in 0..d {
        derivs.push(derivative(&real, k)?);
    }
    let mut roots: Vec<f64> = Vec::new();
    for level in (0..d).rev() {
        let q = &derivs[level];
        let mut nodes = Vec::with_capacity(roots.len() + 2);
        nodes.push(a);
        nodes.extend(roots.iter().copied().filter(|&r| r > a && r < b));
        nodes.push(b);
        let signs: Vec<f64> = nodes.iter().map(|&x| eval_xreal(q, x).signum()).collect();
        let mut next = Vec::with_capacity(q.degree());
        for i in 0..nodes.len() - 1 {
            let (lo, hi) = (nodes[i], nodes[i + 1]);
            if signs[i] == 0.0 {
                if i > 0 {
                    next.push(lo);
                }
                continue;
            }
            if signs[i + 1] != 0.0 && signs[i] != signs[i + 1] {
                next.push(bisect(q, lo, hi, signs[i], tol));
            }
        }
        if next.len() != q.degree() {
            return Err(RootError::BracketMismatch { found: next.len(), expected: q.degree() });
        }
        roots = next;
    }
    Ok(roots)
}

fn bisect(q: &Poly, mut lo: f64, mut hi: f64, s_lo: f64, tol: f64) -> f64 {
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol * mid.abs().max(1.0) || mid <= lo || mid >= hi {
            return mid;
        }
        let s = eval_xreal(q, mid).signum();
        if s == 0.0 {
            return mid;
        }
        if s == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polynomial::from_roots;

    fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
        let one = |x: &[Complex64], y: &[Complex64]| {
            x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        one(a, b).max(one(b, a))
    }

    #[test]
    fn quadratic_and_cubic() {
        let p = Poly::from_f64(&[-1.0, 0.0, 1.0]).unwrap();
        let r = find_roots(&p, 1e-12, 100).unwrap();
        assert!(r.converged);
        assert!(hausdorff(&r.roots, &[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]) < 1e-12);
        let c = Poly::from_f64(&[-1.0, 0.0, 0.0, 1.0]).unwrap();
        let w: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / 3.0)).collect();
        let r = find_roots(&c, 1e-12, 100).unwrap();
        assert!(hausdorff(&r.roots, &w) < 1e-12);
    }

    #[test]
    fn round_trip_well_conditioned() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // jittered roots of unity: separation about 2π/200, coefficients close to z^200 − 1
        let roots: Vec<Complex64> = (0..200)
            .map(|k| Complex64::from_polar(1.0 + 0.01 * (rng.gen::<f64>() - 0.5), (k as f64 + 0.2 * rng.gen::<f64>()) * TAU / 200.0))
            .collect();
        let p = from_roots(&roots).unwrap();
        let r = find_roots(&p, 1e-10, 500).unwrap();
        assert!(r.converged);
        assert!(hausdorff(&r.roots, &roots) < 1e-6, "{}", hausdorff(&r.roots, &roots));
        // moduli spread geometrically over four decades
        let roots: Vec<Complex64> =
            (0..60).map(|k| Complex64::from_polar(10f64.powf(-2.0 + k as f64 / 15.0), 2.4 * k as f64)).collect();
        let p = from_roots(&roots).unwrap();
        let r = find_roots(&p, 1e-12, 500).unwrap();
        for z in &roots {
            let best = r.roots.iter().map(|g| (g - z).norm() / z.norm()).fold(f64::INFINITY, f64::min);
            assert!(best < 1e-8, "{z} {best}");
        }
    }

    #[test]
    fn guesses_follow_polygon() {
        let flat = Poly::from_f64(&vec![1.0; 51]).unwrap();
        assert!(initial_guesses(&flat).iter().all(|z| (z.norm() - 1.0).abs() < 1e-12));
        let p = Poly::from_f64(&[-8.0, 0.0, 0.0, 1.0]).unwrap();
        let g = initial_guesses(&p);
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|z| (z.norm() - 2.0).abs() < 1e-12));
    }

    #[test]
    fn origin_zeroes_deflated() {
        let p = Poly::from_f64(&[0.0, 0.0, 1.0, 1.0]).unwrap();
        let r = find_roots(&p, 1e-12, 50).unwrap();
        assert_eq!(r.origin_multiplicity, 2);
        assert_eq!(r.all_roots().len(), 3);
        assert!((r.roots[0] + 1.0).norm() < 1e-14);
    }

    #[test]
    fn real_roots_small() {
        let p = Poly::from_f64(&[-1.0, 0.0, 1.0]).unwrap();
        let r = find_real_roots(&p, (-2.0, 2.0), 1e-14).unwrap();
        assert!((r[0] + 1.0).abs() < 1e-13 && (r[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn legendre_eight() {
        let mut roots = vec![Complex64::new(1.0, 0.0); 8];
        roots.extend(vec![Complex64::new(-1.0, 0.0); 8]);
        let p = derivative(&from_roots(&roots).unwrap(), 8).unwrap();
        let r = find_real_roots(&p, (-1.0, 1.0), 1e-14).unwrap();
        assert_eq!(r.len(), 8);
        for i in 0..4 {
            assert!((r[i] + r[7 - i]).abs() < 1e-12);
        }
        let aberth = find_roots(&p, 1e-12, 200).unwrap();
        let mut re: Vec<f64> = aberth.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        for (x, y) in r.iter().zip(&re) {
            assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn two_point_derivative_stays_inside() {
        let mut roots = vec![Complex64::new(0.0, 0.0); 10];
        roots.extend(vec![Complex64::new(-1.0, 0.0); 10]);
        let p = derivative(&from_roots(&roots).unwrap(), 10).unwrap();
        let r = find_real_roots(&p, (-1.5, 0.5), 1e-14).unwrap();
        assert_eq!(r.len(), 10);
        assert!(r.iter().all(|&x| x > -1.0 && x < 0.0));
    }

    #[test]
    fn bracket_mismatch_signals() {
        // x^2 + 1 has no real roots
        let p = Poly::from_f64(&[1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(find_real_roots(&p, (-2.0, 2.0), 1e-12), Err(RootError::BracketMismatch { .. })));
    }
}
