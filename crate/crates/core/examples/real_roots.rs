//! Repeated derivatives of x^n (x+1)^(4n) through the real root flow,
//! compared with the two-atom solution.

use rootflow::closedforms::{two_atom_atoms, two_atom_edges, two_atom_real};
use rootflow::rootfinder::RealRootFlow;
use rootflow::verify::{compare_real, Metadata};

fn main() {
    let n = 300;
    let mut flow = RealRootFlow::from_atoms(&[(0.0, n), (-1.0, 4 * n)]);
    for t in [0.5, 1.5, 3.0, 4.5] {
        flow.advance_to((t * n as f64).round() as usize);
        let roots = flow.roots();
        let meta = Metadata { seed: 0, n, t, law: serde_json::Value::Null };
        let r = compare_real(
            &roots,
            &|x| two_atom_real(x, t, 1.0, 4.0).0,
            &two_atom_atoms(t, 1.0, 4.0),
            two_atom_edges(t, 1.0, 4.0),
            5.0 - t,
            30,
            meta,
        )
        .expect("comparison");
        println!(
            "t = {t}: {} zeroes, atoms {:?}, KS {:.4}",
            roots.len(),
            r.atoms.iter().map(|a| (a.location, a.empirical, a.theory)).collect::<Vec<_>>(),
            r.ks_distance
        );
    }
}
