//! Zeroes of derivatives of random polynomials with independent
//! coefficients, found from the coefficients.

use rootflow::ensembles::{coefficient_ensemble, EnsembleKind, RadialLaw, Seed};
use rootflow::polynomial::derivative;
use rootflow::profileflow::psi_at_time;
use rootflow::rootfinder::{default_tol, find_roots};
use rootflow::verify::{empirical_radial_cdf, ks_distance};

fn main() {
    let n = 500;
    let cases = [
        ("Kac", EnsembleKind::Kac, 1.0, RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] }),
        ("Weyl 1/2", EnsembleKind::Weyl, 0.5, RadialLaw::PowerRadial { alpha: 0.5 }),
        ("Weyl 1", EnsembleKind::Weyl, 1.0, RadialLaw::PowerRadial { alpha: 1.0 }),
        ("elliptic 1", EnsembleKind::Elliptic, 1.0, RadialLaw::EllipticRadial { alpha: 1.0 }),
    ];
    for (name, kind, alpha, limit) in cases {
        let p = coefficient_ensemble(kind, n, alpha, Seed(5)).expect("ensemble");
        for t in [0.25, 0.5] {
            let m = (t * n as f64) as usize;
            let rs = find_roots(&derivative(&p, m).expect("order"), default_tol(n), 200).expect("roots");
            let emp = empirical_radial_cdf(&rs.all_roots()).expect("nonempty");
            let ks = ks_distance(&emp, &|x| psi_at_time(&limit, x, t).map_or(f64::NAN, |v| v.0) / (1.0 - t));
            println!("{name:<10} t = {t}: {} zeroes, converged {}, KS {ks:.4}", rs.roots.len(), rs.converged);
        }
    }
}
