// Randomized invariants, one block per module.

use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;
use rootflow::closedforms::{self, SolutionId};
use rootflow::ensembles::{sample_roots, RadialLaw, Seed};
use rootflow::numeric::{xc_add, xc_mul, XComplex};
use rootflow::polynomial::{derivative, from_roots};
use rootflow::profileflow::{cdf_at_time, profile_from_cdf, track_features, RadialCdf};
use rootflow::realline::{g_at_time, wt, RealMeasure};
use rootflow::rootfinder::{find_roots, RealRootFlow};
use rootflow::verify::{ks_two_sample, mass_check, EmpiricalCdf};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

fn normalized(x: &XComplex) -> bool {
    if x.is_zero() {
        return x.exponent() == 0;
    }
    let m = x.significand().norm();
    (1.0..2.0).contains(&m)
}

fn xc() -> impl Strategy<Value = XComplex> {
    (-1e3f64..1e3, -1e3f64..1e3, -3000i64..3000).prop_map(|(a, b, e)| XComplex::new(Complex64::new(a, b), e))
}

proptest! {
    #![proptest_config(cfg(512))]

    #[test]
    fn extended_arithmetic_stays_normalized(a in xc(), b in xc()) {
        prop_assert!(normalized(&a) && normalized(&b));
        prop_assert!(normalized(&xc_mul(a, b)));
        prop_assert!(normalized(&xc_add(a, b)));
        prop_assert!(normalized(&(a - b)));
    }

    #[test]
    fn log_abs_of_product_adds(a in xc(), b in xc()) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let lhs = xc_mul(a, b).log_abs().unwrap();
        let rhs = a.log_abs().unwrap() + b.log_abs().unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn addition_associates_at_a_shared_exponent(
        s in prop::array::uniform6(-2.0f64..2.0),
        e in -500i64..500,
    ) {
        let z = |re: f64, im: f64| XComplex::new(Complex64::new(re, im), e);
        let (a, b, c) = (z(s[0], s[1]), z(s[2], s[3]), z(s[4], s[5]));
        let l = xc_add(xc_add(a, b), c);
        let r = xc_add(a, xc_add(b, c));
        // in units of 2^e: each grouping is within one ulp of the exact sum,
        // the ulp taken at the size of |a| + |b| + |c|
        let unscale = |x: XComplex| x.significand() * 2f64.powi((x.exponent() - e) as i32);
        for (k, side) in [unscale(l), unscale(r)].into_iter().enumerate() {
            for (part, v) in [(0, side.re), (1, side.im)] {
                let (p, q, w) = (s[part], s[part + 2], s[part + 4]);
                let exact = exact_sum3(p, q, w);
                let size = p.abs() + q.abs() + w.abs();
                let ulp = if size > 0.0 { 2f64.powi(size.log2().floor() as i32 - 52) } else { 0.0 };
                prop_assert!((v - exact).abs() <= ulp, "grouping {k}: {v} vs {exact}, ulp {ulp:e}");
            }
        }
    }
}

// Error-free transformation of a + b.
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn exact_sum3(a: f64, b: f64, c: f64) -> f64 {
    let (s1, e1) = two_sum(a, b);
    let (s2, e2) = two_sum(s1, c);
    s2 + (e1 + e2)
}

fn rel_coeff_err(p: &rootflow::polynomial::Poly, q: &rootflow::polynomial::Poly) -> f64 {
    assert_eq!(p.degree(), q.degree());
    (0..=p.degree())
        .map(|k| {
            let (a, b) = (p.coeff(k), q.coeff(k));
            if a.is_zero() && b.is_zero() {
                0.0
            } else {
                (a.ratio(&b) - 1.0).norm()
            }
        })
        .fold(0.0, f64::max)
}

fn root_vec(max: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.2f64..2.0, 0.0f64..TAU), 2..max)
        .prop_map(|v| v.into_iter().map(|(r, th)| Complex64::from_polar(r, th)).collect())
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn derivative_semigroup(roots in root_vec(60), a in 0usize..20, b in 0usize..20) {
        let p = from_roots(&roots).unwrap();
        prop_assume!(a + b <= p.degree());
        let two = derivative(&derivative(&p, a).unwrap(), b).unwrap();
        let one = derivative(&p, a + b).unwrap();
        prop_assert!(rel_coeff_err(&two, &one) <= 1e-12);
    }

    #[test]
    fn leibniz_on_a_power(re in -2.0f64..2.0, im in -2.0f64..2.0, k in 2usize..40) {
        let r = Complex64::new(re, im);
        let d = derivative(&from_roots(&vec![r; k]).unwrap(), 1).unwrap();
        let lower = from_roots(&vec![r; k - 1]).unwrap();
        for j in 0..k {
            let want = lower.coeff(j).scale(k as f64);
            let got = d.coeff(j);
            if !want.is_zero() {
                prop_assert!((got.ratio(&want) - 1.0).norm() <= 1e-12);
            } else {
                prop_assert!(got.is_zero());
            }
        }
    }

    #[test]
    fn roots_round_trip_when_separated(m in 8usize..120, jitter in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 120)) {
        // roots of unity on two radii, each moved by at most a tenth of the spacing
        let roots: Vec<Complex64> = (0..m)
            .map(|k| {
                let r = if k % 2 == 0 { 0.8 } else { 1.25 };
                let th = TAU * (k as f64 + 0.2 * (jitter[k].0 - 0.5)) / m as f64;
                Complex64::from_polar(r * (1.0 + 0.02 * (jitter[k].1 - 0.5)), th)
            })
            .collect();
        let p = from_roots(&roots).unwrap();
        let rs = find_roots(&p, 1e-14, 500).unwrap();
        prop_assert!(rs.converged);
        let found = rs.all_roots();
        let haus = |a: &[Complex64], b: &[Complex64]| {
            a.iter().map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
        };
        let h = haus(&roots, &found).max(haus(&found, &roots));
        prop_assert!(h <= 1e-6, "Hausdorff {h:e}");
    }

    #[test]
    fn real_critical_points_interlace(xs in prop::collection::vec(-5.0f64..5.0, 3..400), reps in 1usize..4) {
        let mut f = RealRootFlow::new(&xs);
        for _ in 0..reps {
            let before: Vec<(f64, usize)> = f.points().collect();
            f.step();
            let after: Vec<(f64, usize)> = f.points().collect();
            // every gap of the distinct roots holds exactly one new simple root
            let mut simple = after.iter().filter(|p| !before.iter().any(|b| b.0 == p.0)).map(|p| p.0);
            for w in before.windows(2) {
                let x = simple.next().expect("a root per gap");
                prop_assert!(w[0].0 < x && x < w[1].0);
            }
            prop_assert!(simple.next().is_none());
        }
    }

    #[test]
    fn root_finding_ignores_thread_count(roots in root_vec(80)) {
        let p = from_roots(&roots).unwrap();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| find_roots(&p, 1e-12, 300).unwrap())
        };
        let (a, b) = (run(1), run(3));
        prop_assert_eq!(a.roots, b.roots);
        prop_assert_eq!(a.iterations_used, b.iterations_used);
    }
}

fn radial_law() -> impl Strategy<Value = RadialLaw> {
    prop_oneof![
        (0.2f64..3.0).prop_map(|alpha| RadialLaw::PowerRadial { alpha }),
        (0.0f64..1.0, 0.1f64..2.0).prop_map(|(r1, w)| RadialLaw::IntervalUniform { r1, r2: r1 + w }),
        (0.3f64..2.0).prop_map(|alpha| RadialLaw::EllipticRadial { alpha }),
        (0.2f64..0.8, 0.5f64..1.5, 0.1f64..1.0).prop_map(|(w, r, g)| RadialLaw::IntervalMixture {
            pieces: vec![[0.5 * r, r], [r + g, 2.0 * r + g]],
            weights: vec![w, 1.0 - w],
        }),
    ]
}

proptest! {
    #![proptest_config(cfg(128))]

    #[test]
    fn flow_is_a_semigroup(law in radial_law(), s in 0.0f64..0.45, t in 0.0f64..0.45, q in 0.01f64..0.99) {
        let fs = cdf_at_time(&law, s).unwrap();
        let nested = cdf_at_time(&fs, t).unwrap();
        let direct = cdf_at_time(&law, s + t).unwrap();
        let q = q * direct.total_mass();
        let (a, b) = (nested.quantile(q), direct.quantile(q));
        prop_assert!((a - b).abs() <= 1e-8 * b.max(1.0), "{a} {b}");
    }

    #[test]
    fn mass_support_and_inverse(law in radial_law(), t in 0.0f64..0.95, q in 0.001f64..0.999) {
        let f = cdf_at_time(&law, t).unwrap();
        let m = 1.0 - t;
        let top = if f.support_max().is_finite() { f.support_max() * (1.0 + 1e-12) } else { 1e300 };
        prop_assert!((f.cdf(top) - m).abs() <= 1e-10);
        prop_assert!(f.support_max() <= (1.0 - t) * law.quantile(1.0) * (1.0 + 1e-15));
        // continuity points: every law here has a density at t > 0
        prop_assume!(t > 0.0);
        let q = q * m;
        let r = f.quantile(q);
        prop_assert!((f.cdf(r) - q).abs() <= 1e-10, "{} vs {q}", f.cdf(r));
    }

    #[test]
    fn annulus_ratio_is_constant(w in 0.2f64..0.8, r in 0.5f64..1.5, g in 0.1f64..1.0, s in 0.0f64..1.0, u in 0.0f64..1.0) {
        let law = RadialLaw::IntervalMixture { pieces: vec![[0.5 * r, r], [r + g, 2.0 * r + g]], weights: vec![w, 1.0 - w] };
        let p = profile_from_cdf(&law).unwrap();
        prop_assert_eq!(p.jumps.len(), 1);
        let base = track_features(&p, 0.0).unwrap();
        let a0 = base.annuli[0];
        let (t1, t2) = (s * w * 0.999, u * w * 0.999);
        for t in [t1, t2] {
            let f = track_features(&p, t).unwrap();
            prop_assert_eq!(f.annuli.len(), 1);
            let a = f.annuli[0];
            prop_assert!(a.inner < a.outer);
            prop_assert!((a.outer / a.inner - a0.outer / a0.inner).abs() <= 1e-12 * (a0.outer / a0.inner));
        }
        prop_assert!(track_features(&p, w + 1e-9).unwrap().annuli.is_empty());
    }

    #[test]
    fn profile_is_convex(law in radial_law()) {
        let p = profile_from_cdf(&law).unwrap();
        let mut last = f64::NEG_INFINITY;
        for (_, lo, hi) in p.nodes() {
            prop_assert!(lo <= hi);
            prop_assert!(lo >= last);
            last = hi;
        }
    }
}

fn catalogue() -> Vec<SolutionId> {
    vec![
        SolutionId::Kac,
        SolutionId::CircleMixture { radii: vec![1.0, 2.0], weights: vec![0.5, 0.5] },
        SolutionId::CircleMixture { radii: vec![1.0, 2.0, 3.0], weights: vec![1.0 / 3.0; 3] },
        SolutionId::WeylFamily { alpha: 0.5 },
        SolutionId::WeylFamily { alpha: 1.0 },
        SolutionId::WeylFamily { alpha: 2.0 },
        SolutionId::IntervalUniform { r1: 0.5, r2: 1.5 },
        SolutionId::Elliptic { alpha: 0.5 },
        SolutionId::Elliptic { alpha: 1.0 },
    ]
}

proptest! {
    #![proptest_config(cfg(48))]

    #[test]
    fn closed_forms_carry_mass(t in 0.01f64..0.95) {
        for id in catalogue() {
            let density = |x: f64| id.eval(x, t).map(|p| p.1).unwrap_or(f64::NAN);
            let breaks: Vec<f64> = match &id {
                SolutionId::CircleMixture { radii, weights } => {
                    closedforms::circle_mixture_windows(t, radii, weights).unwrap().into_iter().flat_map(|w| [w.0, w.1]).collect()
                }
                SolutionId::Elliptic { .. } => vec![0.0, 1.0],
                SolutionId::IntervalUniform { r2, .. } => vec![0.0, r2 * (1.0 - t)],
                _ => vec![0.0, 1.0 - t],
            };
            let err = if matches!(id, SolutionId::Elliptic { .. }) {
                // unbounded support: the tail through x = 1/u
                let head = mass_check(&density, &breaks, &[], 0.0);
                let tail = rootflow::numeric::integrate(|u: f64| if u > 0.0 { density(1.0 / u) / (u * u) } else { 0.0 }, 0.0, 1.0, 1e-13);
                (head + tail - (1.0 - t)).abs()
            } else {
                mass_check(&density, &breaks, &[], 1.0 - t)
            };
            prop_assert!(err < 1e-8, "{id:?} at t = {t}: {err:e}");
        }
    }

    #[test]
    fn two_atom_forms_carry_mass(t in 0.01f64..4.99) {
        let (lo, hi) = closedforms::two_atom_edges(t, 1.0, 4.0);
        let atoms = closedforms::two_atom_atoms(t, 1.0, 4.0);
        let err = mass_check(&|x| closedforms::two_atom_real(x, t, 1.0, 4.0).0, &[lo, hi], &atoms, 5.0 - t);
        prop_assert!(err < 1e-8, "{err:e}");
    }
}

fn real_measures() -> Vec<RealMeasure> {
    vec![
        RealMeasure::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).unwrap(),
        RealMeasure::atomic(vec![(-1.0, 0.8), (0.0, 0.2)]).unwrap(),
        RealMeasure::arcsine(-1.0, 1.0).unwrap(),
    ]
}

proptest! {
    #![proptest_config(cfg(64))]

    #[test]
    fn herglotz_sign(x in -3.0f64..3.0, y in 1e-3f64..3.0, t in 0.0f64..0.95) {
        for mu in real_measures() {
            let g = g_at_time(&mu, t, Complex64::new(x, y)).unwrap();
            prop_assert!(g.im < 0.0, "{g}");
        }
    }

    #[test]
    fn translation_moves_the_transform(x in -3.0f64..3.0, y in 1e-2f64..3.0, t in 0.05f64..0.95, c in -2.0f64..2.0) {
        for mu in real_measures() {
            let g = g_at_time(&mu, t, Complex64::new(x, y)).unwrap();
            let h = g_at_time(&mu.shifted(c), t, Complex64::new(x + c, y)).unwrap();
            prop_assert!((g - h).norm() <= 1e-9 * g.norm().max(1.0), "{g} {h}");
        }
    }

    #[test]
    fn subordination_map_is_increasing(t in 0.05f64..0.95, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        for mu in real_measures() {
            // range of y: (max(μ₀({right end}) − t, 0), m − t)
            let lo = (mu.atom_at(mu.support.1) - t).max(0.0);
            let hi = mu.total_mass - t;
            let (y1, y2) = (lo + (hi - lo) * a.min(b), lo + (hi - lo) * a.max(b));
            prop_assume!(y1 > lo && y2 < hi && y2 - y1 > 1e-9 * hi);
            prop_assert!(wt(&mu, t, y1).unwrap() < wt(&mu, t, y2).unwrap());
        }
    }
}

fn sample() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..60)
}

proptest! {
    #![proptest_config(cfg(256))]

    #[test]
    fn ks_is_a_metric(a in sample(), b in sample(), c in sample()) {
        let (ea, eb, ec) = (EmpiricalCdf::new(a).unwrap(), EmpiricalCdf::new(b).unwrap(), EmpiricalCdf::new(c).unwrap());
        let ab = ks_two_sample(&ea, &eb);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab, ks_two_sample(&eb, &ea));
        prop_assert_eq!(ks_two_sample(&ea, &ea), 0.0);
        prop_assert!(ab <= ks_two_sample(&ea, &ec) + ks_two_sample(&ec, &eb) + 1e-15);
    }

    #[test]
    fn sampling_ignores_thread_count(seed in any::<u64>(), n in 1usize..3000) {
        let law = RadialLaw::PowerRadial { alpha: 0.5 };
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| sample_roots(&law, n, Seed(seed)).unwrap())
        };
        prop_assert_eq!(run(1), run(4));
    }
}
