//! Experiment runner behind the `rootflow` binary.
//!
//! Every mode builds its artifacts in memory (independent t values in
//! parallel) and hands them to one writer, which also records them in
//! `manifest.json`. Nothing time- or host-dependent goes into any artifact.

pub mod config;
pub mod plot;

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::closedforms::{self, SolutionId};
use crate::ensembles::{coefficient_ensemble_with, coefficient_noise, sample_real_roots, sample_roots, RadialLaw, RealLaw, Seed};
use crate::error::Error;
use crate::polynomial::{derivative, fractional_derivative, from_roots, Poly};
use crate::profileflow::{cdf_at_time, pde_check_profile, profile_from_cdf, psi_at_time, track_features, RadialCdf};
use crate::realline::{RealMeasure, TransformedMeasure};
use crate::rootfinder::{default_tol, find_roots, ComplexRootFlow, RealRootFlow};
use crate::verify::{compare_radial, compare_real, ComparisonReport, HistBin, Metadata, KS_99};

pub use config::{order, CoefficientLaw, ExperimentConfig, Law, Mode, Overrides};
use plot::{emit_plot, Series, Style};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Exit status for a failed run.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) | Error::Json(_) | Error::Law(_) => EXIT_CONFIG,
        Error::NonConvergence | Error::Real(crate::error::RealError::NoConvergence(_)) => EXIT_NONCONVERGENCE,
        _ => 1,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub name: String,
    pub bytes: usize,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    /// Layout version of the artifacts.
    pub format: u32,
    pub mode: Mode,
    pub config: ExperimentConfig,
    pub artifacts: Vec<Artifact>,
    /// False when some root computation hit its iteration cap; the
    /// artifacts are then partial and `notes` says where.
    pub converged: bool,
    pub notes: Vec<String>,
}

#[derive(Debug)]
pub struct Outcome {
    pub manifest: Manifest,
    pub exit_code: i32,
}

/// Artifacts of one run, in write order.
#[derive(Default)]
struct Output {
    files: Vec<(String, Vec<u8>)>,
    notes: Vec<String>,
    converged: bool,
}

impl Output {
    fn new() -> Self {
        Output { converged: true, ..Default::default() }
    }

    fn add(&mut self, name: impl Into<String>, data: impl Into<Vec<u8>>) {
        self.files.push((name.into(), data.into()));
    }

    fn json(&mut self, name: &str, v: &Value) {
        self.add(name, serde_json::to_string_pretty(v).expect("json serializes") + "\n");
    }

    fn flag(&mut self, note: String) {
        self.converged = false;
        self.notes.push(note);
    }
}

/// Validates `config` and runs it, writing artifacts under `config.out`.
pub fn run(config: ExperimentConfig) -> Result<Outcome, Error> {
    let cfg = config.resolve()?;
    let mut out = Output::new();
    match cfg.mode() {
        Mode::Simulate => simulate_mode(&cfg, &mut out)?,
        Mode::Theory => theory_mode(&cfg, &mut out)?,
        Mode::Compare => compare_mode(&cfg, &mut out)?,
        Mode::Real => real_mode(&cfg, &mut out)?,
        Mode::PdeCheck => pde_mode(&cfg, &mut out)?,
        Mode::Fractional => fractional_mode(&cfg, &mut out)?,
    }
    write_all(&cfg, out)
}

fn write_all(cfg: &ExperimentConfig, out: Output) -> Result<Outcome, Error> {
    std::fs::create_dir_all(&cfg.out)?;
    let mut artifacts = Vec::with_capacity(out.files.len());
    for (name, data) in &out.files {
        std::fs::write(cfg.out.join(name), data)?;
        artifacts.push(Artifact { name: name.clone(), bytes: data.len(), sha256: sha256_hex(data) });
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        format: 1,
        mode: cfg.mode(),
        config: cfg.clone(),
        artifacts,
        converged: out.converged,
        notes: out.notes,
    };
    std::fs::write(cfg.out.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")?;
    let exit_code = if manifest.converged { EXIT_OK } else { EXIT_NONCONVERGENCE };
    Ok(Outcome { manifest, exit_code })
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Reads a manifest back.
pub fn load_manifest(path: &Path) -> Result<Manifest, Error> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

// ---------------------------------------------------------------- simulation

struct Snapshot {
    t: f64,
    order: usize,
    roots: Vec<Complex64>,
    converged: bool,
}

fn root_tol(cfg: &ExperimentConfig, degree: usize) -> f64 {
    cfg.tolerances.root.unwrap_or_else(|| default_tol(degree))
}

/// Orders `⌊t n⌋` with the t values, sorted by order (stable in t order).
fn schedule(cfg: &ExperimentConfig) -> Vec<(usize, f64)> {
    let n = cfg.degree();
    let mut v: Vec<(usize, f64)> = cfg.t.iter().map(|&t| (order(t, n), t)).collect();
    v.sort_by_key(|p| p.0);
    v
}

fn simulate_complex(cfg: &ExperimentConfig) -> Result<Vec<Snapshot>, Error> {
    let n = cfg.degree();
    let seed = Seed(cfg.seed);
    let mut snaps = match cfg.law.as_ref().expect("resolved") {
        Law::Radial(law) => {
            let roots = sample_roots(law, n, seed)?;
            let mut flow = ComplexRootFlow::new(&roots).with_tolerance(root_tol(cfg, n), cfg.tolerances.max_iter);
            let mut snaps = Vec::new();
            for (k, t) in schedule(cfg) {
                flow.advance_to(k);
                snaps.push(Snapshot { t, order: k, roots: flow.roots(), converged: flow.converged() });
            }
            snaps
        }
        Law::Coefficients(c) => {
            let p = coefficient_poly(c, n, seed)?;
            let jobs = schedule(cfg);
            jobs.par_iter()
                .map(|&(k, t)| {
                    let d = derivative(&p, k)?;
                    let rs = find_roots(&d, root_tol(cfg, d.degree()), cfg.tolerances.max_iter)?;
                    Ok(Snapshot { t, order: k, converged: rs.converged, roots: rs.all_roots() })
                })
                .collect::<Result<Vec<_>, Error>>()?
        }
        Law::Real(_) => simulate_real(cfg)?
            .into_iter()
            .map(|s| Snapshot {
                t: s.t,
                order: s.order,
                roots: s.roots.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
                converged: true,
            })
            .collect(),
    };
    // back to the order the t values were given in
    snaps.sort_by_key(|s| cfg.t.iter().position(|&t| t == s.t).unwrap_or(usize::MAX));
    Ok(snaps)
}

fn coefficient_poly(c: &CoefficientLaw, n: usize, seed: Seed) -> Result<Poly, Error> {
    Ok(coefficient_ensemble_with(c.family, n, c.alpha, &coefficient_noise(c.noise, n, seed))?)
}

struct RealSnapshot {
    t: f64,
    order: usize,
    roots: Vec<f64>,
}

/// Degree of the real-rooted polynomial: `n` per unit of mass.
fn real_degree(law: &RealLaw, n: usize) -> usize {
    (law.total_mass() * n as f64).round().max(1.0) as usize
}

fn simulate_real(cfg: &ExperimentConfig) -> Result<Vec<RealSnapshot>, Error> {
    let Some(Law::Real(law)) = &cfg.law else { unreachable!("resolved config") };
    let d = real_degree(law, cfg.degree());
    let roots = sample_real_roots(law, d, Seed(cfg.seed), cfg.atom_mode)?;
    let mut flow = RealRootFlow::new(&roots);
    let mut snaps = Vec::new();
    for (k, t) in schedule(cfg) {
        flow.advance_to(k);
        snaps.push(RealSnapshot { t, order: k, roots: flow.roots() });
    }
    snaps.sort_by_key(|s| cfg.t.iter().position(|&t| t == s.t).unwrap_or(usize::MAX));
    Ok(snaps)
}

fn roots_csv(snaps: &[Snapshot]) -> String {
    let mut s = String::from("t,order,re,im,modulus\n");
    for sn in snaps {
        for z in &sn.roots {
            let _ = writeln!(s, "{},{},{},{},{}", sn.t, sn.order, z.re, z.im, z.norm());
        }
    }
    s
}

fn roots_svg(roots: &[Complex64], title: String) -> Result<String, Error> {
    let pts = roots.iter().map(|z| (z.re, z.im)).collect();
    emit_plot(
        &[Series::Scatter(pts)],
        &Style { title, x_label: "Re z".into(), y_label: "Im z".into(), equal_aspect: true },
    )
}

fn emit_snapshots(snaps: &[Snapshot], out: &mut Output) -> Result<Vec<Value>, Error> {
    out.add("roots.csv", roots_csv(snaps));
    let mut summary = Vec::new();
    for sn in snaps {
        if !sn.converged {
            out.flag(format!("root finding hit the iteration cap at t = {} (order {})", sn.t, sn.order));
        }
        if !sn.roots.is_empty() {
            out.add(format!("roots_t{}.svg", sn.t), roots_svg(&sn.roots, format!("zeroes, t = {}, order {}", sn.t, sn.order))?);
        }
        summary.push(json!({
            "t": sn.t,
            "order": sn.order,
            "count": sn.roots.len(),
            "maxModulus": sn.roots.iter().map(|z| z.norm()).fold(0.0, f64::max),
            "converged": sn.converged,
        }));
    }
    Ok(summary)
}

fn simulate_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    let snaps = simulate_complex(cfg)?;
    let summary = emit_snapshots(&snaps, out)?;
    out.json("report.json", &json!({ "mode": "simulate", "snapshots": summary }));
    Ok(())
}

// -------------------------------------------------------------------- theory

/// Radial law whose flow is the prediction for the configured initial data.
fn radial_theory_law(law: &Law) -> Option<RadialLaw> {
    match law {
        Law::Radial(r) => Some(r.normalized()),
        Law::Coefficients(c) => Some(c.limit_law().unwrap_or(RadialLaw::HyperbolicRadial { alpha: c.alpha })),
        Law::Real(_) => None,
    }
}

/// Largest radius drawn for `Ψ(·, t)`: the support end, or the 0.99 mass
/// quantile for unbounded support.
fn plot_radius(law: &RadialLaw, t: f64) -> Result<f64, Error> {
    let f = cdf_at_time(law, t)?;
    let s = f.support_max();
    Ok(if s.is_finite() { s } else { f.quantile(0.99 * f.total_mass()) })
}

/// Support intervals of `Ψ(·, t)` for `t > 0`: `[0, support end]` minus the
/// surviving void annuli.
fn radial_windows(law: &RadialLaw, t: f64) -> Result<Vec<(f64, f64)>, Error> {
    if t == 0.0 {
        return Ok(Vec::new());
    }
    let f = cdf_at_time(law, t)?;
    let mut gaps: Vec<(f64, f64)> = f.gaps().into_iter().map(|g| (g.1, g.2)).collect();
    gaps.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut w = Vec::new();
    let mut lo = 0.0;
    for (a, b) in gaps {
        if a > lo {
            w.push((lo, a));
        }
        lo = b;
    }
    let end = f.support_max();
    if end.is_finite() && end > lo {
        w.push((lo, end));
    }
    Ok(w)
}

struct RadialCurve {
    t: f64,
    xs: Vec<f64>,
    cdf: Vec<f64>,
    density: Vec<f64>,
    report: Value,
}

fn radial_curve(cfg: &ExperimentConfig, law: &RadialLaw, t: f64) -> Result<RadialCurve, Error> {
    let r = plot_radius(law, t)?;
    let m = cfg.theory_points;
    let xs: Vec<f64> = (0..m).map(|i| r * (i as f64 + 0.5) / m as f64).collect();
    let mut cdf = Vec::with_capacity(m);
    let mut density = Vec::with_capacity(m);
    for &x in &xs {
        let (a, b) = psi_at_time(law, x, t)?;
        cdf.push(a);
        density.push(b);
    }
    let features = profile_from_cdf(law).ok().and_then(|p| track_features(&p, t).ok());
    let f = cdf_at_time(law, t)?;
    let report = json!({
        "t": t,
        "mass": f.total_mass(),
        "supportMax": f.support_max(),
        "windows": radial_windows(law, t)?,
        "closedForm": law.closed_form(),
        "features": features,
    });
    Ok(RadialCurve { t, xs, cdf, density, report })
}

/// Theory for a real law at one time: closed form when catalogued, else
/// Stieltjes inversion of the subordinated Cauchy transform.
struct RealTheory {
    t: f64,
    mass: f64,
    support: (f64, f64),
    atoms: Vec<(f64, f64)>,
    grid: Vec<f64>,
    density: Vec<f64>,
    closed: Option<SolutionId>,
}

impl RealTheory {
    fn eval(&self, x: f64) -> f64 {
        match &self.closed {
            Some(SolutionId::TwoAtomReal { m1, m2 }) => closedforms::two_atom_real(x, self.t, *m1, *m2).0,
            Some(SolutionId::ArcsineReal) => closedforms::arcsine_real(x, self.t),
            _ => interpolate(&self.grid, &self.density, x),
        }
    }
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    if xs.is_empty() || x < xs[0] || x > xs[xs.len() - 1] {
        return 0.0;
    }
    let i = xs.partition_point(|&g| g <= x);
    if i == 0 {
        return ys[0];
    }
    if i >= xs.len() {
        return ys[xs.len() - 1];
    }
    let (x0, x1) = (xs[i - 1], xs[i]);
    ys[i - 1] + (ys[i] - ys[i - 1]) * (x - x0) / (x1 - x0)
}

fn real_closed_form(law: &RealLaw) -> Option<SolutionId> {
    match law {
        RealLaw::Atoms { locations, masses } if locations.len() == 2 => {
            let at = |x: f64| locations.iter().position(|&l| l == x);
            match (at(0.0), at(-1.0)) {
                (Some(i), Some(j)) => Some(SolutionId::TwoAtomReal { m1: masses[i], m2: masses[j] }),
                _ => None,
            }
        }
        RealLaw::Arcsine { interval } if *interval == [-1.0, 1.0] => Some(SolutionId::ArcsineReal),
        _ => None,
    }
}

fn real_theory(cfg: &ExperimentConfig, law: &RealLaw, t: f64) -> Result<RealTheory, Error> {
    let m = cfg.theory_points;
    let cells = |a: f64, b: f64| -> Vec<f64> { (0..m).map(|i| a + (b - a) * (i as f64 + 0.5) / m as f64).collect() };
    let mass = law.total_mass() - t;
    if let Some(id) = real_closed_form(law) {
        let (support, atoms) = match &id {
            SolutionId::TwoAtomReal { m1, m2 } => {
                (closedforms::two_atom_edges(t, *m1, *m2), closedforms::two_atom_atoms(t, *m1, *m2))
            }
            _ => {
                let e = (1.0 - t * t).sqrt();
                ((-e, e), Vec::new())
            }
        };
        let grid = cells(support.0, support.1);
        let mut th = RealTheory { t, mass, support, atoms, grid, density: Vec::new(), closed: Some(id) };
        th.density = th.grid.iter().map(|&x| th.eval(x)).collect();
        return Ok(th);
    }
    let mu0 = RealMeasure::from_law(law)?;
    let (a, b) = law.hull();
    let tm = TransformedMeasure::recover(&mu0, t, cells(a, b))?;
    let h = (b - a) / m as f64;
    let first = tm.density.iter().position(|&d| d > 1e-12);
    let last = tm.density.iter().rposition(|&d| d > 1e-12);
    let support = match (first, last) {
        (Some(i), Some(j)) => ((tm.grid[i] - 0.5 * h).max(a), (tm.grid[j] + 0.5 * h).min(b)),
        _ => (a, a),
    };
    let atoms = tm.atoms.iter().copied().filter(|x| x.1 > 1e-9).collect();
    Ok(RealTheory { t, mass, support, atoms, grid: tm.grid, density: tm.density, closed: None })
}

fn real_theory_report(th: &RealTheory) -> Value {
    json!({
        "t": th.t,
        "mass": th.mass,
        "support": [th.support.0, th.support.1],
        "atoms": th.atoms,
        "closedForm": th.closed,
    })
}

fn theory_svg(curves: Vec<(f64, Vec<(f64, f64)>)>, x_label: &str) -> Result<String, Error> {
    let ts: Vec<String> = curves.iter().map(|c| c.0.to_string()).collect();
    let series: Vec<Series> = curves.into_iter().map(|c| Series::Curve(c.1)).collect();
    emit_plot(
        &series,
        &Style {
            title: format!("limiting density, t = {}", ts.join(", ")),
            x_label: x_label.into(),
            y_label: "density".into(),
            equal_aspect: false,
        },
    )
}

fn theory_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    let law = cfg.law.as_ref().expect("resolved");
    if let Law::Real(rl) = law {
        let ths: Vec<RealTheory> =
            cfg.t.par_iter().map(|&t| real_theory(cfg, rl, t)).collect::<Result<_, _>>()?;
        out.add("theory.csv", real_theory_csv(&ths));
        out.add("theory.svg", theory_svg(ths.iter().map(|th| (th.t, zip(&th.grid, &th.density))).collect(), "x")?);
        let reports: Vec<Value> = ths.iter().map(real_theory_report).collect();
        out.json("report.json", &json!({ "mode": "theory", "curves": reports }));
        return Ok(());
    }
    let rl = radial_theory_law(law).expect("complex law");
    let curves: Vec<RadialCurve> = cfg.t.par_iter().map(|&t| radial_curve(cfg, &rl, t)).collect::<Result<_, _>>()?;
    out.add("theory.csv", radial_theory_csv(&curves));
    out.add("theory.svg", theory_svg(curves.iter().map(|c| (c.t, zip(&c.xs, &c.density))).collect(), "|z|")?);
    let reports: Vec<Value> = curves.into_iter().map(|c| c.report).collect();
    out.json("report.json", &json!({ "mode": "theory", "law": rl, "curves": reports }));
    Ok(())
}

fn zip(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().copied().zip(b.iter().copied()).collect()
}

fn radial_theory_csv(curves: &[RadialCurve]) -> String {
    let mut s = String::from("t,x,Psi,psi\n");
    for c in curves {
        for i in 0..c.xs.len() {
            let _ = writeln!(s, "{},{},{},{}", c.t, c.xs[i], c.cdf[i], c.density[i]);
        }
    }
    s
}

fn real_theory_csv(ths: &[RealTheory]) -> String {
    let mut s = String::from("t,x,density\n");
    for th in ths {
        for (x, d) in th.grid.iter().zip(&th.density) {
            let _ = writeln!(s, "{},{},{}", th.t, x, d);
        }
    }
    s
}

// ------------------------------------------------------------------ compare

fn histogram_csv(reports: &[ComparisonReport]) -> String {
    let mut s = String::from("t,bin_left,bin_right,count,expected_count\n");
    for r in reports {
        for b in &r.histogram {
            let _ = writeln!(s, "{},{},{},{},{}", r.metadata.t, b.bin_left, b.bin_right, b.count, b.theory_mass);
        }
    }
    s
}

fn histogram_svg(bins: &[HistBin], t: f64, x_label: &str) -> Result<String, Error> {
    let total: usize = bins.iter().map(|b| b.count).sum();
    let total = total.max(1) as f64;
    let bars = bins
        .iter()
        .map(|b| (b.bin_left, b.bin_right, b.count as f64 / (total * (b.bin_right - b.bin_left))))
        .collect();
    let curve = bins
        .iter()
        .map(|b| (0.5 * (b.bin_left + b.bin_right), b.theory_mass / (total * (b.bin_right - b.bin_left))))
        .collect();
    emit_plot(
        &[Series::Histogram(bars), Series::Curve(curve)],
        &Style {
            title: format!("empirical vs limiting law, t = {t}"),
            x_label: x_label.into(),
            y_label: "density".into(),
            equal_aspect: false,
        },
    )
}

fn metadata(cfg: &ExperimentConfig, n: usize, t: f64) -> Metadata {
    Metadata { seed: cfg.seed, n, t, law: serde_json::to_value(cfg.law.as_ref()).expect("law serializes") }
}

fn compare_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    let law = cfg.law.as_ref().expect("resolved");
    if let Law::Real(_) = law {
        return real_pipeline(cfg, out, "compare");
    }
    let rl = radial_theory_law(law).expect("complex law");
    let snaps = simulate_complex(cfg)?;
    let summary = emit_snapshots(&snaps, out)?;
    let curves: Vec<RadialCurve> = cfg.t.par_iter().map(|&t| radial_curve(cfg, &rl, t)).collect::<Result<_, _>>()?;
    out.add("theory.csv", radial_theory_csv(&curves));
    let reports: Vec<ComparisonReport> = snaps
        .par_iter()
        .map(|sn| -> Result<ComparisonReport, Error> {
            let t = sn.t;
            let f = cdf_at_time(&rl, t)?;
            let psi = |x: f64| psi_at_time(&rl, x, t).map(|p| p.0).unwrap_or(f64::NAN);
            let lo = if t == 0.0 { f.quantile(f64::MIN_POSITIVE) } else { 0.0 };
            let support = (lo, plot_radius(&rl, t)?);
            let windows = radial_windows(&rl, t)?;
            Ok(compare_radial(&sn.roots, &psi, f.total_mass(), support, &windows, cfg.bins, metadata(cfg, cfg.degree(), t))?)
        })
        .collect::<Result<_, _>>()?;
    out.add("histogram.csv", histogram_csv(&reports));
    for r in &reports {
        out.add(format!("histogram_t{}.svg", r.metadata.t), histogram_svg(&r.histogram, r.metadata.t, "|z|")?);
    }
    out.json("report.json", &json!({ "mode": "compare", "snapshots": summary, "reports": reports }));
    Ok(())
}

fn real_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    real_pipeline(cfg, out, "real")
}

fn real_pipeline(cfg: &ExperimentConfig, out: &mut Output, mode: &str) -> Result<(), Error> {
    let Some(Law::Real(law)) = &cfg.law else { unreachable!("resolved config") };
    let snaps = simulate_real(cfg)?;
    let csnaps: Vec<Snapshot> = snaps
        .iter()
        .map(|s| Snapshot {
            t: s.t,
            order: s.order,
            roots: s.roots.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            converged: true,
        })
        .collect();
    out.add("roots.csv", roots_csv(&csnaps));
    let ths: Vec<RealTheory> = cfg.t.par_iter().map(|&t| real_theory(cfg, law, t)).collect::<Result<_, _>>()?;
    out.add("theory.csv", real_theory_csv(&ths));
    let reports: Vec<ComparisonReport> = snaps
        .par_iter()
        .zip(ths.par_iter())
        .map(|(sn, th)| -> Result<ComparisonReport, Error> {
            let dens = |x: f64| th.eval(x);
            let mut r = compare_real(&sn.roots, &dens, &th.atoms, th.support, th.mass, cfg.bins, metadata(cfg, sn.roots.len(), sn.t))?;
            // the KS runs over the roots off the atoms only
            let on_atoms: f64 = r.atoms.iter().map(|a| a.empirical).sum();
            let cont = (sn.roots.len() as f64 * (1.0 - on_atoms)).round().max(1.0);
            r.ks_threshold = 2.0 * KS_99 / cont.sqrt();
            Ok(r)
        })
        .collect::<Result<_, _>>()?;
    out.add("histogram.csv", histogram_csv(&reports));
    for r in &reports {
        out.add(format!("histogram_t{}.svg", r.metadata.t), histogram_svg(&r.histogram, r.metadata.t, "x")?);
    }
    let theory: Vec<Value> = ths.iter().map(real_theory_report).collect();
    let degree = real_degree(law, cfg.degree());
    let snapshots: Vec<Value> = snaps
        .iter()
        .map(|s| json!({ "t": s.t, "order": s.order, "count": s.roots.len(), "degree": degree }))
        .collect();
    out.json("report.json", &json!({ "mode": mode, "snapshots": snapshots, "theory": theory, "reports": reports }));
    Ok(())
}

// ---------------------------------------------------------------- pde-check

/// Every catalogued complex-plane solution checked by `pde-check`.
pub fn pde_catalogue() -> Vec<RadialLaw> {
    let circles = |r: &[f64]| RadialLaw::CircleMixture { radii: r.to_vec(), weights: vec![1.0 / r.len() as f64; r.len()] };
    vec![
        circles(&[1.0]),
        circles(&[1.0, 2.0]),
        circles(&[1.0, 2.0, 3.0]),
        RadialLaw::PowerRadial { alpha: 0.5 },
        RadialLaw::PowerRadial { alpha: 1.0 },
        RadialLaw::PowerRadial { alpha: 2.0 },
        RadialLaw::IntervalUniform { r1: 0.5, r2: 1.5 },
        RadialLaw::EllipticRadial { alpha: 0.5 },
        RadialLaw::EllipticRadial { alpha: 1.0 },
        RadialLaw::HyperbolicRadial { alpha: 0.5 },
        RadialLaw::HyperbolicRadial { alpha: 1.0 },
    ]
}

/// Interior `(x, t)` points: `x` at mass fractions of `Ψ(·, t)` kept a
/// relative `1e-3` away from the support end and from void annuli.
pub fn pde_grid(law: &RadialLaw, nx: usize, nt: usize) -> Result<Vec<(f64, f64)>, Error> {
    let m = law.total_mass();
    let t_hi = if m.is_finite() { 0.6 * m } else { 1.0 };
    let mut g = Vec::new();
    for j in 0..nt {
        let t = 0.1 + (t_hi - 0.1) * j as f64 / (nt.max(2) - 1) as f64;
        let f = cdf_at_time(law, t)?;
        let top = if m.is_finite() { f.total_mass() } else { 2.0 };
        let mut edges: Vec<f64> = f.gaps().iter().flat_map(|g| [g.1, g.2]).collect();
        edges.push(f.support_max());
        for i in 0..nx {
            let q = top * (0.05 + 0.9 * i as f64 / (nx.max(2) - 1) as f64);
            let x = f.quantile(q);
            if edges.iter().all(|&e| (x - e).abs() > 1e-3 * x) {
                g.push((x, t));
            }
        }
    }
    Ok(g)
}

fn pde_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    let laws = match &cfg.law {
        None => pde_catalogue(),
        Some(l) => match radial_theory_law(l) {
            Some(r) => vec![r],
            None => return Err(Error::Config("pde-check needs a complex law".into())),
        },
    };
    let tol = cfg.tolerances.pde;
    let rows: Vec<Value> = laws
        .par_iter()
        .map(|law| -> Result<Value, Error> {
            let g = pde_grid(law, 12, 8)?;
            let r = pde_check_profile(law, &g)?;
            Ok(json!({
                "law": law,
                "closedForm": law.closed_form(),
                "points": g.len(),
                "maxResidual": r,
                "passed": r < tol,
            }))
        })
        .collect::<Result<_, _>>()?;
    let passed = rows.iter().all(|r| r["passed"] == json!(true));
    if !passed {
        out.flag(format!("PDE residual above {tol}"));
    }
    out.json("report.json", &json!({ "mode": "pde-check", "tolerance": tol, "passed": passed, "solutions": rows }));
    Ok(())
}

// --------------------------------------------------------------- fractional

fn fractional_mode(cfg: &ExperimentConfig, out: &mut Output) -> Result<(), Error> {
    let n = cfg.degree();
    let seed = Seed(cfg.seed);
    let p = match cfg.law.as_ref().expect("resolved") {
        Law::Radial(law) => from_roots(&sample_roots(law, n, seed)?)?,
        Law::Coefficients(c) => coefficient_poly(c, n, seed)?,
        Law::Real(_) => unreachable!("rejected by resolve"),
    };
    let results: Vec<_> = cfg
        .alpha
        .par_iter()
        .map(|&a| -> Result<_, Error> {
            let q = fractional_derivative(&p, a)?;
            let rs = find_roots(&q, root_tol(cfg, q.degree()), cfg.tolerances.max_iter)?;
            Ok((a, rs))
        })
        .collect::<Result<_, _>>()?;
    let mut csv = String::from("alpha,re,im,modulus\n");
    let mut rows = Vec::new();
    for (a, rs) in &results {
        for z in &rs.roots {
            let _ = writeln!(csv, "{},{},{},{}", a, z.re, z.im, z.norm());
        }
        if !rs.converged {
            out.flag(format!("root finding hit the iteration cap at alpha = {a}"));
        }
        rows.push(json!({
            "alpha": a,
            "count": rs.roots.len(),
            "originZeroes": rs.origin_multiplicity,
            "iterations": rs.iterations_used,
            "converged": rs.converged,
        }));
    }
    out.add("roots.csv", csv);
    for (a, rs) in &results {
        if !rs.roots.is_empty() {
            out.add(format!("roots_alpha{a}.svg"), roots_svg(&rs.roots, format!("zeroes of the order-{a} derivative"))?);
        }
    }
    out.json("report.json", &json!({ "mode": "fractional", "n": n, "orders": rows }));
    Ok(())
}
