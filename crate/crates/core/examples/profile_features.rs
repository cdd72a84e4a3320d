//! Exponential profile of a radial law with circles and a void annulus,
//! flowed in time.

use rootflow::ensembles::RadialLaw;
use rootflow::profileflow::{cdf_at_time, flow_profile, profile_from_cdf, track_features, RadialCdf};

fn main() {
    // void disk of radius 0.25, void annulus (0.5, 1), circle of radius 1
    let law = RadialLaw::IntervalMixture {
        pieces: vec![[0.25, 0.5], [1.0, 1.0], [1.25, 1.5]],
        weights: vec![0.4, 0.3, 0.3],
    };
    let v = profile_from_cdf(&law).expect("finite mass");
    println!("jumps {:?}", v.jumps);
    println!("plateaus {:?}", v.plateaus);
    for t in [0.0, 0.05, 0.2, 0.39, 0.6] {
        let f = track_features(&v, t).expect("t below mass");
        let psi = cdf_at_time(&law, t).expect("t below mass");
        println!(
            "t = {t:<4} void disk {:.3}  circles {:?}  annuli {:?}  support {:.3}",
            f.void_disk_radius,
            f.circles,
            f.annuli.iter().map(|a| (a.inner, a.outer)).collect::<Vec<_>>(),
            psi.support_max()
        );
    }
    let w = flow_profile(&v, 0.2).expect("t below mass");
    println!("flowed profile: mass {:.3}, v(0.3) = {:.6}", w.mass, w.v(0.3));
}
