//! Initial root laws, seeded samplers and independent-coefficient families.
//!
//! Every sampler is a pure function of `(law, n, seed)`. Draws are cut into
//! fixed chunks and chunk `c` reads ChaCha stream `c` of the seed, so the
//! output does not depend on how many threads produce it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::LawError;
use crate::numeric::{log_gamma_unchecked, XComplex};
use crate::polynomial::Poly;

const CHUNK: usize = 1024;

// Stream offsets keep the roots, coefficients and noise of one seed apart.
const STREAM_ROOTS: u64 = 0;
const STREAM_REAL: u64 = 1 << 40;
const STREAM_COEFFS: u64 = 2 << 40;

/// Seed of the counter-based generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Seed {
    /// Generator positioned at the start of stream `stream`.
    pub fn stream(self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.0);
        rng.set_stream(stream);
        rng
    }
}

/// Rotationally invariant law of the initial roots, given by its radial part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum RadialLaw {
    /// Uniform on circles of the given radii with the given weights.
    CircleMixture { radii: Vec<f64>, weights: Vec<f64> },
    /// Radius `U^alpha`, i.e. `Ψ₀(x) = x^{1/α}` on `[0, 1]`.
    PowerRadial { alpha: f64 },
    /// Radius uniform on `[r1, r2]`.
    IntervalUniform { r1: f64, r2: f64 },
    /// `Ψ₀(x) = x^{1/α}/(1 + x^{1/α})` on `[0, ∞)`.
    EllipticRadial { alpha: f64 },
    /// `Ψ₀(x) = x^{1/α}/(1 − x^{1/α})` on `[0, 1)`, infinite mass.
    HyperbolicRadial { alpha: f64 },
    /// Radius uniform on each `[lo, hi]` with the given weights. A piece with
    /// `lo == hi` is a circle; space between pieces is a void annulus.
    IntervalMixture { pieces: Vec<[f64; 2]>, weights: Vec<f64> },
}

impl RadialLaw {
    pub fn validate(&self) -> Result<(), LawError> {
        let bad = |s: &str| Err(LawError::Invalid(s.to_string()));
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                if radii.is_empty() || radii.len() != weights.len() {
                    return bad("circleMixture needs equally many radii and weights");
                }
                if radii[0] <= 0.0 || radii.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("circleMixture radii must be positive and strictly increasing");
                }
                check_weights(weights)
            }
            RadialLaw::PowerRadial { alpha }
            | RadialLaw::EllipticRadial { alpha }
            | RadialLaw::HyperbolicRadial { alpha } => {
                if !(*alpha > 0.0 && alpha.is_finite()) {
                    return bad("alpha must be positive");
                }
                Ok(())
            }
            RadialLaw::IntervalUniform { r1, r2 } => {
                if !(*r1 >= 0.0 && r2 > r1 && r2.is_finite()) {
                    return bad("intervalUniform needs 0 <= r1 < r2");
                }
                Ok(())
            }
            RadialLaw::IntervalMixture { pieces, weights } => {
                if pieces.is_empty() || pieces.len() != weights.len() {
                    return bad("intervalMixture needs equally many pieces and weights");
                }
                if pieces.iter().any(|p| !(p[0] >= 0.0 && p[1] >= p[0] && p[1].is_finite())) {
                    return bad("intervalMixture pieces must satisfy 0 <= lo <= hi");
                }
                if pieces.windows(2).any(|w| w[1][0] <= w[0][1]) {
                    return bad("intervalMixture pieces must be disjoint and ascending");
                }
                if pieces[0][1] == 0.0 {
                    return bad("intervalMixture has an atom at radius 0");
                }
                check_weights(weights)
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            RadialLaw::HyperbolicRadial { .. } => f64::INFINITY,
            _ => 1.0,
        }
    }

    /// `Ψ₀(x) = μ₀(|z| ≤ x)`, right-continuous.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                radii.iter().zip(weights).filter(|(r, _)| **r <= x).map(|(_, w)| w).sum::<f64>().min(1.0)
            }
            RadialLaw::PowerRadial { alpha } => x.min(1.0).powf(1.0 / alpha),
            RadialLaw::IntervalUniform { r1, r2 } => ((x - r1) / (r2 - r1)).clamp(0.0, 1.0),
            RadialLaw::EllipticRadial { alpha } => {
                let u = x.powf(1.0 / alpha);
                if u.is_infinite() {
                    1.0
                } else {
                    u / (1.0 + u)
                }
            }
            RadialLaw::HyperbolicRadial { alpha } => {
                if x >= 1.0 {
                    f64::INFINITY
                } else {
                    let u = x.powf(1.0 / alpha);
                    u / (1.0 - u)
                }
            }
            RadialLaw::IntervalMixture { pieces, weights } => {
                let mut s = 0.0;
                for (p, w) in pieces.iter().zip(weights) {
                    if x >= p[1] {
                        s += w;
                    } else if x > p[0] {
                        s += w * (x - p[0]) / (p[1] - p[0]);
                    }
                }
                s.min(1.0)
            }
        }
    }

    /// Generalized left-continuous inverse `inf{x ≥ 0 : Ψ₀(x) ≥ q}`.
    pub fn quantile(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return 0.0;
        }
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                let mut acc = 0.0;
                for (r, w) in radii.iter().zip(weights) {
                    acc += w;
                    if acc >= q * (1.0 - 1e-15) {
                        return *r;
                    }
                }
                *radii.last().unwrap()
            }
            RadialLaw::PowerRadial { alpha } => q.min(1.0).powf(*alpha),
            RadialLaw::IntervalUniform { r1, r2 } => r1 + (r2 - r1) * q.min(1.0),
            RadialLaw::EllipticRadial { alpha } => {
                if q >= 1.0 {
                    f64::INFINITY
                } else {
                    (q / (1.0 - q)).powf(*alpha)
                }
            }
            RadialLaw::HyperbolicRadial { alpha } => (q / (1.0 + q)).powf(*alpha),
            RadialLaw::IntervalMixture { pieces, weights } => {
                let mut acc = 0.0;
                for (p, w) in pieces.iter().zip(weights) {
                    if acc + w >= q * (1.0 - 1e-15) {
                        let f = ((q - acc) / w).clamp(0.0, 1.0);
                        return p[0] + (p[1] - p[0]) * f;
                    }
                    acc += w;
                }
                pieces.last().unwrap()[1]
            }
        }
    }

    /// Largest radius in the support (`∞` for unbounded laws).
    pub fn support_max(&self) -> f64 {
        match self {
            RadialLaw::CircleMixture { radii, .. } => *radii.last().unwrap(),
            RadialLaw::PowerRadial { .. } | RadialLaw::HyperbolicRadial { .. } => 1.0,
            RadialLaw::IntervalUniform { r2, .. } => *r2,
            RadialLaw::EllipticRadial { .. } => f64::INFINITY,
            RadialLaw::IntervalMixture { pieces, .. } => pieces.last().unwrap()[1],
        }
    }

    /// Circles of the law as `(radius, mass)`.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                radii.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(r, w)| (*r, *w)).collect()
            }
            RadialLaw::IntervalMixture { pieces, weights } => pieces
                .iter()
                .zip(weights)
                .filter(|(p, w)| p[0] == p[1] && **w > 0.0)
                .map(|(p, w)| (p[0], *w))
                .collect(),
            _ => Vec::new(),
        }
    }

    /// Void annuli as `(cumulative mass below, inner radius, outer radius)`.
    /// A void disk around the origin is included with mass 0.
    pub fn gaps(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        let mut push = |x0: f64, lo: f64, hi: f64| {
            if hi > lo {
                out.push((x0, lo, hi));
            }
        };
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                push(0.0, 0.0, radii[0]);
                let mut acc = 0.0;
                for i in 0..radii.len() - 1 {
                    acc += weights[i];
                    push(acc, radii[i], radii[i + 1]);
                }
            }
            RadialLaw::IntervalUniform { r1, .. } => push(0.0, 0.0, *r1),
            RadialLaw::IntervalMixture { pieces, weights } => {
                push(0.0, 0.0, pieces[0][0]);
                let mut acc = 0.0;
                for i in 0..pieces.len() - 1 {
                    acc += weights[i];
                    push(acc, pieces[i][1], pieces[i + 1][0]);
                }
            }
            _ => {}
        }
        out
    }
}

fn check_weights(w: &[f64]) -> Result<(), LawError> {
    if w.iter().any(|&x| !(x >= 0.0)) {
        return Err(LawError::Invalid("weights must be nonnegative".into()));
    }
    let s: f64 = w.iter().sum();
    // configs written by hand round thirds to four digits
    if (s - 1.0).abs() > 1e-3 {
        return Err(LawError::Invalid(format!("weights sum to {s}, not 1")));
    }
    Ok(())
}

impl RadialLaw {
    /// Same law with weights rescaled to sum to exactly 1.
    pub fn normalized(&self) -> RadialLaw {
        let norm = |w: &[f64]| {
            let s: f64 = w.iter().sum();
            w.iter().map(|x| x / s).collect::<Vec<_>>()
        };
        match self {
            RadialLaw::CircleMixture { radii, weights } => {
                RadialLaw::CircleMixture { radii: radii.clone(), weights: norm(weights) }
            }
            RadialLaw::IntervalMixture { pieces, weights } => {
                RadialLaw::IntervalMixture { pieces: pieces.clone(), weights: norm(weights) }
            }
            other => other.clone(),
        }
    }
}

/// Law of real initial roots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum RealLaw {
    Atoms { locations: Vec<f64>, masses: Vec<f64> },
    /// Density `1/(π√((x−a)(b−x)))` on `[a, b]`.
    Arcsine { interval: [f64; 2] },
}

impl RealLaw {
    pub fn validate(&self) -> Result<(), LawError> {
        match self {
            RealLaw::Atoms { locations, masses } => {
                if locations.is_empty() || locations.len() != masses.len() {
                    return Err(LawError::Invalid("atoms need equally many locations and masses".into()));
                }
                if masses.iter().any(|&m| !(m > 0.0 && m.is_finite())) || locations.iter().any(|x| !x.is_finite()) {
                    return Err(LawError::Invalid("atom masses must be positive and locations finite".into()));
                }
                Ok(())
            }
            RealLaw::Arcsine { interval: [a, b] } => {
                if !(a < b && a.is_finite() && b.is_finite()) {
                    return Err(LawError::Invalid("arcsine interval must be nondegenerate".into()));
                }
                Ok(())
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        match self {
            RealLaw::Atoms { masses, .. } => masses.iter().sum(),
            RealLaw::Arcsine { .. } => 1.0,
        }
    }

    /// Smallest interval containing the support.
    pub fn hull(&self) -> (f64, f64) {
        match self {
            RealLaw::Atoms { locations, .. } => {
                let lo = locations.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = locations.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lo, hi)
            }
            RealLaw::Arcsine { interval } => (interval[0], interval[1]),
        }
    }
}

/// How atom counts are chosen for an atomic real law.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum AtomMode {
    /// Largest-remainder rounding of `n · mass/total`: a deterministic
    /// polynomial `Π (x − a_i)^{k_i}`.
    #[default]
    Multiplicity,
    /// Independent draws.
    Multinomial,
}

/// `n` i.i.d. roots: radius by inverse CDF, angle uniform.
pub fn sample_roots(law: &RadialLaw, n: usize, seed: Seed) -> Result<Vec<Complex64>, LawError> {
    law.validate()?;
    if n == 0 {
        return Err(LawError::EmptySample);
    }
    if law.total_mass().is_infinite() {
        return Err(LawError::InfiniteMass);
    }
    let law = law.normalized();
    Ok(chunked(n, seed, STREAM_ROOTS, |rng| {
        let u: f64 = rng.gen();
        let th: f64 = rng.gen();
        // u ∈ [0,1); 1 − u ∈ (0,1] keeps the quantile away from 0
        Complex64::from_polar(law.quantile(1.0 - u), TAU * th)
    }))
}

/// `n` real roots. Atoms follow `mode`; arcsine draws are `cos(πU)` mapped
/// affinely onto the interval.
pub fn sample_real_roots(law: &RealLaw, n: usize, seed: Seed, mode: AtomMode) -> Result<Vec<f64>, LawError> {
    law.validate()?;
    if n == 0 {
        return Err(LawError::EmptySample);
    }
    match law {
        RealLaw::Atoms { locations, masses } => {
            let total: f64 = masses.iter().sum();
            match mode {
                AtomMode::Multiplicity => {
                    let counts = largest_remainder(masses, n);
                    let mut v = Vec::with_capacity(n);
                    for (x, k) in locations.iter().zip(counts) {
                        v.extend(std::iter::repeat(*x).take(k));
                    }
                    Ok(v)
                }
                AtomMode::Multinomial => {
                    let cum: Vec<f64> = masses
                        .iter()
                        .scan(0.0, |s, m| {
                            *s += m / total;
                            Some(*s)
                        })
                        .collect();
                    Ok(chunked(n, seed, STREAM_REAL, |rng| {
                        let u: f64 = rng.gen();
                        let i = cum.iter().position(|&c| u < c).unwrap_or(cum.len() - 1);
                        locations[i]
                    }))
                }
            }
        }
        RealLaw::Arcsine { interval: [a, b] } => {
            let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
            Ok(chunked(n, seed, STREAM_REAL, |rng| {
                let u: f64 = rng.gen();
                c + h * (PI * u).cos()
            }))
        }
    }
}

/// Integer counts summing to `n`, proportional to `masses`, by the
/// largest-remainder rule (ties to the lower index).
pub fn largest_remainder(masses: &[f64], n: usize) -> Vec<usize> {
    let total: f64 = masses.iter().sum();
    let exact: Vec<f64> = masses.iter().map(|m| m / total * n as f64).collect();
    let mut counts: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
    let mut left = n - counts.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..masses.len()).collect();
    order.sort_by(|&i, &j| (exact[j] - exact[j].floor()).total_cmp(&(exact[i] - exact[i].floor())).then(i.cmp(&j)));
    for &i in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[i] += 1;
        left -= 1;
    }
    counts
}

fn chunked<T: Send, F: Fn(&mut ChaCha8Rng) -> T + Sync>(n: usize, seed: Seed, offset: u64, draw: F) -> Vec<T> {
    let chunks: Vec<Vec<T>> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = seed.stream(offset + c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| draw(&mut rng)).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

/// Independent-coefficient polynomial families `Σ ξ_k f_{k,n} z^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum EnsembleKind {
    /// `f = 1`.
    Kac,
    /// `f = (n^α)^k / (k!)^α`.
    Weyl,
    /// `f = (n!/((n−k)! k!))^α`.
    Elliptic,
    /// `f = n^k / k!`.
    ExponentialQn,
    /// `f = (n(n+1)…(n+k−1)/k!)^α`, truncated at degree `n`.
    Hyperbolic,
}

/// Law of the i.i.d. coefficient noise `ξ_k`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CoeffNoise {
    /// Standard complex Gaussian, `E|ξ|² = 1`.
    #[default]
    Gaussian,
    /// `±1` with equal probability.
    Rademacher,
    /// Uniform on `[−1, 1]`.
    Uniform,
}

/// `ln f_{k,n}` for the family.
pub fn log_coefficient(kind: EnsembleKind, n: usize, k: usize, alpha: f64) -> f64 {
    let lg = |x: f64| log_gamma_unchecked(x);
    let (nf, kf) = (n as f64, k as f64);
    match kind {
        EnsembleKind::Kac => 0.0,
        EnsembleKind::Weyl => alpha * (kf * nf.ln() - lg(kf + 1.0)),
        EnsembleKind::Elliptic => alpha * (lg(nf + 1.0) - lg(nf - kf + 1.0) - lg(kf + 1.0)),
        EnsembleKind::ExponentialQn => kf * nf.ln() - lg(kf + 1.0),
        EnsembleKind::Hyperbolic => alpha * (lg(nf + kf) - lg(nf) - lg(kf + 1.0)),
    }
}

/// `n + 1` noise values `ξ_0..ξ_n` from the seed.
pub fn coefficient_noise(noise: CoeffNoise, n: usize, seed: Seed) -> Vec<Complex64> {
    chunked(n + 1, seed, STREAM_COEFFS, |rng| match noise {
        CoeffNoise::Gaussian => {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            Complex64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
        }
        CoeffNoise::Rademacher => Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0),
        CoeffNoise::Uniform => Complex64::new(rng.gen_range(-1.0..=1.0), 0.0),
    })
}

/// Degree-`n` member of the family with Gaussian noise.
pub fn coefficient_ensemble(kind: EnsembleKind, n: usize, alpha: f64, seed: Seed) -> Result<Poly, LawError> {
    coefficient_ensemble_with(kind, n, alpha, &coefficient_noise(CoeffNoise::Gaussian, n, seed))
}

/// Degree-`n` member of the family with the given `ξ_0..ξ_n`.
pub fn coefficient_ensemble_with(kind: EnsembleKind, n: usize, alpha: f64, xi: &[Complex64]) -> Result<Poly, LawError> {
    if n == 0 {
        return Err(LawError::EmptySample);
    }
    if kind != EnsembleKind::Kac && kind != EnsembleKind::ExponentialQn && !(alpha > 0.0 && alpha.is_finite()) {
        return Err(LawError::Invalid("alpha must be positive".into()));
    }
    if xi.len() != n + 1 {
        return Err(LawError::Invalid(format!("need {} noise values, got {}", n + 1, xi.len())));
    }
    let coeffs: Vec<XComplex> = (0..=n)
        .map(|k| XComplex::from_ln(log_coefficient(kind, n, k, alpha)).mul_c64(xi[k]))
        .collect();
    // a zero leading noise value (Rademacher never, Gaussian with prob. 0)
    // would lower the degree; from_coeffs trims it
    Poly::from_coeffs(coeffs).map_err(|e| LawError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_circle_moduli() {
        let law = RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] };
        let z = sample_roots(&law, 100, Seed(1)).unwrap();
        assert!(z.iter().all(|z| (z.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn three_circle_counts() {
        let law = RadialLaw::CircleMixture { radii: vec![1.0, 2.0, 3.0], weights: vec![0.3333, 0.3333, 0.3334] };
        let n = 9000;
        let z = sample_roots(&law, n, Seed(2)).unwrap();
        for r in [1.0, 2.0, 3.0] {
            let c = z.iter().filter(|z| (z.norm() - r).abs() < 1e-12).count() as f64;
            // binomial sd is sqrt(n·2/9) ≈ 45
            assert!((c - n as f64 / 3.0).abs() < 4.0 * 45.0, "{r}: {c}");
        }
    }

    #[test]
    fn atoms_multiplicity_mode() {
        let law = RealLaw::Atoms { locations: vec![-1.0, 0.0], masses: vec![1.0, 1.0] };
        let x = sample_real_roots(&law, 10, Seed(0), AtomMode::Multiplicity).unwrap();
        assert_eq!(x.iter().filter(|&&v| v == -1.0).count(), 5);
        assert_eq!(x.iter().filter(|&&v| v == 0.0).count(), 5);
        assert_eq!(largest_remainder(&[1.0, 1.0, 1.0], 10), vec![4, 3, 3]);
        assert_eq!(largest_remainder(&[1.0, 4.0], 7), vec![1, 6]);
    }

    #[test]
    fn arcsine_moments() {
        let n = 20000;
        let law = RealLaw::Arcsine { interval: [-1.0, 1.0] };
        let x = sample_real_roots(&law, n, Seed(4), AtomMode::Multiplicity).unwrap();
        let mean = x.iter().sum::<f64>() / n as f64;
        assert!(mean.abs() < 3.0 / (n as f64).sqrt());
        let inner = x.iter().filter(|v| v.abs() < 0.5).count() as f64 / n as f64;
        // (2/π) arcsin(√((x+1)/2)) at ±1/2
        let cdf = |v: f64| 2.0 / PI * ((v + 1.0) / 2.0).sqrt().asin();
        let want = cdf(0.5) - cdf(-0.5);
        assert!((want - 1.0 / 3.0).abs() < 1e-12);
        assert!((inner - want).abs() < 3.0 / (n as f64).sqrt());
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let law = RadialLaw::PowerRadial { alpha: 0.5 };
        let a = sample_roots(&law, 5000, Seed(11)).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let b = pool.install(|| sample_roots(&law, 5000, Seed(11)).unwrap());
        assert_eq!(a, b);
        let c = sample_roots(&law, 5000, Seed(12)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn hyperbolic_not_sampleable() {
        let law = RadialLaw::HyperbolicRadial { alpha: 0.5 };
        assert_eq!(sample_roots(&law, 10, Seed(0)), Err(LawError::InfiniteMass));
    }

    #[test]
    fn quantile_is_left_inverse() {
        let law = RadialLaw::CircleMixture { radii: vec![1.0, 2.0], weights: vec![0.25, 0.75] };
        assert_eq!(law.quantile(0.25), 1.0);
        assert_eq!(law.quantile(0.2500001), 2.0);
        assert_eq!(law.cdf(1.0), 0.25);
        assert_eq!(law.cdf(0.999), 0.0);
        let e = RadialLaw::EllipticRadial { alpha: 0.5 };
        for q in [0.1, 0.5, 0.9] {
            assert!((e.cdf(e.quantile(q)) - q).abs() < 1e-14);
        }
    }

    #[test]
    fn family_coefficients() {
        for k in 0..5 {
            assert_eq!(log_coefficient(EnsembleKind::Kac, 4, k, 1.0), 0.0);
        }
        let n = 300;
        let direct: f64 = (1..=n).map(|j| (j as f64).ln()).sum();
        let want = 0.5 * (n as f64 * (n as f64).ln() - direct);
        assert!((log_coefficient(EnsembleKind::Weyl, n, n, 0.5) - want).abs() < 1e-10);
        for k in [0usize, 7, 100, 299] {
            let r = log_coefficient(EnsembleKind::ExponentialQn, n, k + 1, 1.0)
                - log_coefficient(EnsembleKind::ExponentialQn, n, k, 1.0);
            assert!((r - (n as f64 / (k + 1) as f64).ln()).abs() < 1e-11);
        }
    }
}
