//! Differentiate a polynomial with i.i.d. roots on the unit circle and
//! compare the radial parts with the Kac evolution.

use rootflow::closedforms::kac_cdf;
use rootflow::ensembles::{sample_roots, RadialLaw, Seed};
use rootflow::rootfinder::ComplexRootFlow;
use rootflow::verify::{empirical_radial_cdf, ks_distance, ks_threshold};

fn main() {
    let n = 400;
    let law = RadialLaw::CircleMixture { radii: vec![1.0], weights: vec![1.0] };
    let roots = sample_roots(&law, n, Seed(1)).expect("valid law");
    let mut flow = ComplexRootFlow::new(&roots);
    for t in [0.1, 0.25, 0.5, 0.75] {
        flow.advance_to((t * n as f64).round() as usize);
        let emp = empirical_radial_cdf(&flow.roots()).expect("roots");
        let ks = ks_distance(&emp, &|x| kac_cdf(x, t) / (1.0 - t));
        println!(
            "t = {t:<4} order {:>3}  max |z| {:.4} (theory {:.4})  KS {ks:.4} (threshold {:.4})",
            flow.order(),
            emp.max(),
            1.0 - t,
            ks_threshold(n, t)
        );
    }
}
