//! Catalogued closed-form solutions and their PDE residuals.

use rootflow::cli::{pde_catalogue, pde_grid};
use rootflow::closedforms::{two_atom_atoms, two_atom_edges};
use rootflow::profileflow::{pde_check_profile, RadialCdf};

fn main() {
    for law in pde_catalogue() {
        let id = law.closed_form().expect("catalogued");
        let grid = pde_grid(&law, 12, 8).expect("grid");
        let r = pde_check_profile(&law, &grid).expect("residual");
        let (psi, dens) = id.eval(0.3, 0.2).expect("inside time range");
        println!("{id:?}: Psi(0.3, 0.2) = {psi:.6}, psi = {dens:.6}, max residual {r:.2e} on {} points", grid.len());
    }
    for t in [0.5, 1.0, 2.0, 4.5] {
        println!("two atoms (1, 4), t = {t}: support {:?}, atoms {:?}", two_atom_edges(t, 1.0, 4.0), two_atom_atoms(t, 1.0, 4.0));
    }
}
