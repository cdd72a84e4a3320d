//! Simulation-versus-theory checks: empirical distribution functions, KS
//! distances, histograms and mass conservation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write;

use crate::error::LawError;
use crate::numeric::integrate;

/// Kolmogorov constant at the 99% level.
pub const KS_99: f64 = 1.63;

/// `c/√((1−t)n)` with `c = 2·1.63`: twice the 99% sampling band at the
/// effective sample size after differentiation.
pub fn ks_threshold(n: usize, t: f64) -> f64 {
    2.0 * KS_99 / ((1.0 - t) * n as f64).sqrt()
}

/// Step distribution function of a sample.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(mut values: Vec<f64>) -> Result<Self, LawError> {
        if values.is_empty() {
            return Err(LawError::EmptySample);
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(LawError::Invalid("NaN in sample".into()));
        }
        values.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted: values })
    }

    /// Fraction of the sample `≤ x`.
    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.len() as f64
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sample(&self) -> &[f64] {
        &self.sorted
    }

    pub fn min(&self) -> f64 {
        self.sorted[0]
    }

    pub fn max(&self) -> f64 {
        *self.sorted.last().unwrap()
    }
}

/// Empirical distribution of the moduli.
pub fn empirical_radial_cdf(roots: &[Complex64]) -> Result<EmpiricalCdf, LawError> {
    EmpiricalCdf::new(roots.iter().map(|z| z.norm()).collect())
}

fn prev(x: f64) -> f64 {
    if x == f64::NEG_INFINITY || x.is_nan() {
        x
    } else if x == 0.0 {
        -f64::from_bits(1)
    } else if x > 0.0 {
        f64::from_bits(x.to_bits() - 1)
    } else {
        f64::from_bits(x.to_bits() + 1)
    }
}

/// `sup |F_emp − F|` over the sample points and their left limits. `theory`
/// must be a probability distribution function.
pub fn ks_distance(emp: &EmpiricalCdf, theory: &dyn Fn(f64) -> f64) -> f64 {
    let s = &emp.sorted;
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let mut j = i;
        while j < s.len() && s[j] == x {
            j += 1;
        }
        let below = i as f64 / n;
        let at = j as f64 / n;
        d = d.max((theory(prev(x)) - below).abs()).max((theory(x) - at).abs());
        i = j;
    }
    d
}

/// Two-sample KS distance `sup |F_a − F_b|`.
pub fn ks_two_sample(a: &EmpiricalCdf, b: &EmpiricalCdf) -> f64 {
    let (x, y) = (&a.sorted, &b.sorted);
    let (na, nb) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < x.len() || j < y.len() {
        let v = match (x.get(i), y.get(j)) {
            (Some(&p), Some(&q)) => p.min(q),
            (Some(&p), None) => p,
            (None, Some(&q)) => q,
            (None, None) => break,
        };
        while i < x.len() && x[i] == v {
            i += 1;
        }
        while j < y.len() && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Histogram bin with the theoretical mass of the bin (scaled to counts).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistBin {
    pub bin_left: f64,
    pub bin_right: f64,
    pub count: usize,
    pub theory_mass: f64,
}

/// Equal-width histogram on `[lo, hi]`; `theory_cdf` is the probability
/// distribution function used for the expected count `n·(F(r) − F(l))`.
pub fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize, theory_cdf: &dyn Fn(f64) -> f64) -> Vec<HistBin> {
    let w = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in values {
        if v >= lo && v <= hi {
            let k = (((v - lo) / w) as usize).min(bins - 1);
            counts[k] += 1;
        }
    }
    let n = values.len() as f64;
    (0..bins)
        .map(|k| {
            let (l, r) = (lo + w * k as f64, lo + w * (k + 1) as f64);
            HistBin { bin_left: l, bin_right: r, count: counts[k], theory_mass: n * (theory_cdf(r) - theory_cdf(prev(l))) }
        })
        .collect()
}

pub fn histogram_csv(bins: &[HistBin]) -> String {
    let mut s = String::from("bin_left,bin_right,count,theory_mass\n");
    for b in bins {
        let _ = writeln!(s, "{},{},{},{}", b.bin_left, b.bin_right, b.count, b.theory_mass);
    }
    s
}

/// `|∫ density + Σ atoms − expected|`, integrating piecewise between the
/// sorted `breaks` (support ends and any kinks or singular points).
pub fn mass_check(density: &dyn Fn(f64) -> f64, breaks: &[f64], atoms: &[(f64, f64)], expected: f64) -> f64 {
    let cont: f64 = breaks.windows(2).map(|w| integrate(density, w[0], w[1], 1e-13)).sum();
    (cont + atoms.iter().map(|a| a.1).sum::<f64>() - expected).abs()
}

/// Run metadata carried into every report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub n: usize,
    pub t: f64,
    pub law: serde_json::Value,
}

/// Empirical versus theoretical endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Endpoint {
    pub empirical: f64,
    pub theoretical: f64,
}

impl Endpoint {
    /// Error relative to the theoretical value (absolute when that is 0).
    pub fn relative_error(&self) -> f64 {
        let d = (self.empirical - self.theoretical).abs();
        if self.theoretical == 0.0 {
            d
        } else {
            d / self.theoretical.abs()
        }
    }
}

/// Comparison restricted to one support window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowReport {
    pub lo: Endpoint,
    pub hi: Endpoint,
    pub count: usize,
    pub expected_fraction: f64,
    pub ks_distance: f64,
}

/// Atom of the prediction against the simulated multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomReport {
    pub location: f64,
    /// Predicted fraction of all roots.
    pub theory: f64,
    pub empirical: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub ks_distance: f64,
    pub ks_threshold: f64,
    /// `|predicted mass − (m − t)|` for the theory side.
    pub mass_error: f64,
    pub support_endpoints: Vec<Endpoint>,
    pub windows: Vec<WindowReport>,
    pub atoms: Vec<AtomReport>,
    pub histogram: Vec<HistBin>,
    pub metadata: Metadata,
}

impl ComparisonReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Radial comparison. `psi` is `Ψ(·, t)` with total mass `mass`; `windows`
/// lists the predicted support intervals (empty to skip the per-window part).
pub fn compare_radial(
    roots: &[Complex64],
    psi: &dyn Fn(f64) -> f64,
    mass: f64,
    support: (f64, f64),
    windows: &[(f64, f64)],
    bins: usize,
    metadata: Metadata,
) -> Result<ComparisonReport, LawError> {
    let emp = empirical_radial_cdf(roots)?;
    let theory = |x: f64| psi(x) / mass;
    let ks = ks_distance(&emp, &theory);
    let support_endpoints = vec![
        Endpoint { empirical: emp.min(), theoretical: support.0 },
        Endpoint { empirical: emp.max(), theoretical: support.1 },
    ];
    let windows = window_reports(emp.sample(), psi, windows);
    let histogram = histogram(emp.sample(), 0.0, support.1.max(emp.max()), bins, &theory);
    let mass_error = (psi(support.1 * (1.0 + 1e-12) + 1e-300) - mass).abs();
    Ok(ComparisonReport {
        ks_distance: ks,
        ks_threshold: ks_threshold(metadata.n, metadata.t),
        mass_error,
        support_endpoints,
        windows,
        atoms: Vec::new(),
        histogram,
        metadata,
    })
}

/// Assign each value to the nearest window and compare within each window
/// against the distribution restricted to it.
pub fn window_reports(sorted: &[f64], cdf: &dyn Fn(f64) -> f64, windows: &[(f64, f64)]) -> Vec<WindowReport> {
    if windows.is_empty() {
        return Vec::new();
    }
    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); windows.len()];
    for &v in sorted {
        let dist = |w: &(f64, f64)| if v < w.0 { w.0 - v } else if v > w.1 { v - w.1 } else { 0.0 };
        let k = (0..windows.len()).min_by(|&a, &b| dist(&windows[a]).total_cmp(&dist(&windows[b]))).unwrap();
        groups[k].push(v);
    }
    let total = cdf(windows.last().unwrap().1) - cdf(prev(windows[0].0));
    windows
        .iter()
        .zip(groups)
        .map(|(&(lo, hi), g)| {
            let base = cdf(prev(lo));
            let span = cdf(hi) - base;
            let (ks, elo, ehi) = match EmpiricalCdf::new(g.clone()) {
                Ok(e) => (ks_distance(&e, &|x: f64| ((cdf(x) - base) / span).clamp(0.0, 1.0)), e.min(), e.max()),
                Err(_) => (1.0, f64::NAN, f64::NAN),
            };
            WindowReport {
                lo: Endpoint { empirical: elo, theoretical: lo },
                hi: Endpoint { empirical: ehi, theoretical: hi },
                count: g.len(),
                expected_fraction: span / total,
                ks_distance: ks,
            }
        })
        .collect()
}

/// Real-line comparison. Roots within `1e-6` of a predicted atom count
/// toward it and are left out of the continuous KS; `density` is the
/// continuous part on `support` with the listed atoms, of total mass `mass`.
pub fn compare_real(
    roots: &[f64],
    density: &dyn Fn(f64) -> f64,
    atoms: &[(f64, f64)],
    support: (f64, f64),
    mass: f64,
    bins: usize,
    metadata: Metadata,
) -> Result<ComparisonReport, LawError> {
    const ATOM_TOL: f64 = 1e-6;
    let mut counts = vec![0usize; atoms.len()];
    let mut cont = Vec::with_capacity(roots.len());
    'outer: for &r in roots {
        for (k, a) in atoms.iter().enumerate() {
            if (r - a.0).abs() <= ATOM_TOL {
                counts[k] += 1;
                continue 'outer;
            }
        }
        cont.push(r);
    }
    let n = roots.len() as f64;
    let atom_reports = atoms
        .iter()
        .zip(&counts)
        .map(|(a, &c)| AtomReport { location: a.0, theory: a.1 / mass, empirical: c as f64 / n })
        .collect();
    let (a, b) = support;
    let cont_mass = integrate(density, a, b, 1e-12);
    // distribution function of the continuous part on a fine table
    let table = CdfTable::new(density, a, b, 4096);
    let theory = |x: f64| table.eval(x) / cont_mass;
    let emp = EmpiricalCdf::new(cont.clone())?;
    let ks = ks_distance(&emp, &theory);
    let histogram = histogram(&cont, a, b, bins, &theory);
    let atom_mass: f64 = atoms.iter().map(|a| a.1).sum();
    Ok(ComparisonReport {
        ks_distance: ks,
        ks_threshold: ks_threshold(metadata.n, metadata.t),
        mass_error: (cont_mass + atom_mass - mass).abs(),
        support_endpoints: vec![
            Endpoint { empirical: emp.min(), theoretical: a },
            Endpoint { empirical: emp.max(), theoretical: b },
        ],
        windows: Vec::new(),
        atoms: atom_reports,
        histogram,
        metadata,
    })
}

/// Distribution function of a density on `[a, b]`, tabulated by cell
/// quadrature and interpolated with the density inside cells.
pub struct CdfTable<'a> {
    f: &'a dyn Fn(f64) -> f64,
    x: Vec<f64>,
    c: Vec<f64>,
}

impl<'a> CdfTable<'a> {
    pub fn new(f: &'a dyn Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> Self {
        let x: Vec<f64> = (0..=cells).map(|k| a + (b - a) * k as f64 / cells as f64).collect();
        let mut c = vec![0.0];
        for w in x.windows(2) {
            let last = *c.last().unwrap();
            c.push(last + integrate(f, w[0], w[1], 1e-12));
        }
        CdfTable { f, x, c }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.x.len();
        if x <= self.x[0] {
            return 0.0;
        }
        if x >= self.x[n - 1] {
            return self.c[n - 1];
        }
        let i = self.x.partition_point(|&p| p <= x) - 1;
        self.c[i] + integrate(self.f, self.x[i], x, 1e-12)
    }
}
