//! Fractional derivatives z^a D^a of an exponential-profile polynomial.

use rootflow::ensembles::{coefficient_ensemble, EnsembleKind, Seed};
use rootflow::polynomial::fractional_derivative;
use rootflow::rootfinder::{default_tol, find_roots};

fn main() {
    let n = 200;
    let p = coefficient_ensemble(EnsembleKind::ExponentialQn, n, 1.0, Seed(2)).expect("ensemble");
    for a in [50.0, 50.25, 50.5, 50.75, 51.0] {
        let q = fractional_derivative(&p, a).expect("order");
        let rs = find_roots(&q, default_tol(n), 200).expect("roots");
        let mean = rs.roots.iter().map(|z| z.norm()).sum::<f64>() / rs.roots.len() as f64;
        println!(
            "alpha = {a:<5} zeroes at origin {:>2}, others {:>3}, mean modulus {mean:.4}",
            rs.origin_multiplicity,
            rs.roots.len()
        );
    }
}
