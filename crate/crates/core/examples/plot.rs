//! Writes an SVG of the zeroes of a differentiated Weyl polynomial.

use rootflow::cli::plot::{emit_plot, Series, Style};
use rootflow::ensembles::{coefficient_ensemble, EnsembleKind, Seed};
use rootflow::polynomial::derivative;
use rootflow::rootfinder::{default_tol, find_roots};

fn main() {
    let n = 300;
    let p = coefficient_ensemble(EnsembleKind::Weyl, n, 0.5, Seed(9)).expect("ensemble");
    let rs = find_roots(&derivative(&p, n / 2).expect("order"), default_tol(n), 200).expect("roots");
    let pts = rs.roots.iter().map(|z| (z.re, z.im)).collect();
    let circle = (0..=200).map(|k| {
        let a = std::f64::consts::TAU * k as f64 / 200.0;
        (0.5 * a.cos(), 0.5 * a.sin())
    });
    let style = Style { title: "zeroes after n/2 derivatives".into(), x_label: "Re z".into(), y_label: "Im z".into(), equal_aspect: true };
    let svg = emit_plot(&[Series::Scatter(pts), Series::Curve(circle.collect())], &style).expect("nonempty");
    let path = std::env::temp_dir().join("rootflow_weyl.svg");
    std::fs::write(&path, svg).expect("writable temp dir");
    println!("wrote {}", path.display());
}
