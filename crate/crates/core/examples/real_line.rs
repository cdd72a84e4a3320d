//! Real-rooted case: subordination, Stieltjes inversion and the free
//! convolution power.

use rootflow::closedforms::{two_atom_edges, two_atom_real};
use rootflow::realline::{free_power_check, g_at_time, stieltjes_invert, RealMeasure, TransformedMeasure, STIELTJES_OFFSET};
use rootflow::Complex64;

fn main() {
    let mu0 = RealMeasure::atomic(vec![(0.0, 1.0), (-1.0, 4.0)]).expect("atoms");
    for t in [0.5, 2.0, 4.5] {
        let (lo, hi) = two_atom_edges(t, 1.0, 4.0);
        let grid: Vec<f64> = (1..10).map(|i| lo + (hi - lo) * i as f64 / 10.0).collect();
        let g = |z: Complex64| g_at_time(&mu0, t, z);
        let d = stieltjes_invert(&g, &grid, STIELTJES_OFFSET, true).expect("inversion");
        let err = grid.iter().zip(&d).map(|(&x, &v)| (v - two_atom_real(x, t, 1.0, 4.0).0).abs()).fold(0.0, f64::max);
        println!("t = {t}: support ({lo:.4}, {hi:.4}), inversion error {err:.2e}");
    }
    let rec = TransformedMeasure::recover(&mu0, 2.0, vec![-0.6, -0.4, -0.2]).expect("recovery");
    print!("{}", rec.density_csv());
    println!("atoms {}", rec.atoms_json());

    let lambdas: Vec<f64> = (1..=10).map(|i| 0.02 * i as f64).collect();
    let sym = RealMeasure::atomic(vec![(-1.0, 0.5), (1.0, 0.5)]).expect("atoms");
    println!("free power deviation, two atoms: {:.2e}", free_power_check(&sym, 0.5, &lambdas).expect("check"));
    let arc = RealMeasure::arcsine(-1.0, 1.0).expect("interval");
    println!("free power deviation, arcsine: {:.2e}", free_power_check(&arc, 0.5, &lambdas).expect("check"));
}
