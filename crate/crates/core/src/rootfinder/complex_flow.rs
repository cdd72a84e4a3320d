// Differentiation of a complex polynomial tracked through its roots.
//
// With p = Π (z − r_i)^{k_i} over distinct r_i and L = p'/p = Σ k_i/(z − r_i),
// the zeroes of p' are the r_i with k_i ≥ 2 (one order lower) plus the zeroes
// of q = L · Π (z − r_i), a polynomial of degree D − 1 for D distinct roots.
// Those are found by Aberth iteration with the Newton ratio
//   q/q' = L / (L' + L M),  M = Σ 1/(z − r_i),
// evaluated directly from the roots.

use num_complex::Complex64;
use rayon::prelude::*;

/// Complex polynomial held as distinct roots with multiplicities.
#[derive(Clone, Debug)]
pub struct ComplexRootFlow {
    points: Vec<Complex64>,
    mult: Vec<usize>,
    order: usize,
    tol: f64,
    max_iter: usize,
    sweeps: usize,
    evaluations: usize,
    converged: bool,
}

impl ComplexRootFlow {
    /// Groups bitwise-equal roots into multiplicities.
    pub fn new(roots: &[Complex64]) -> Self {
        let mut r = roots.to_vec();
        r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let mut points: Vec<Complex64> = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for z in r {
            if points.last() == Some(&z) {
                *mult.last_mut().unwrap() += 1;
            } else {
                points.push(z);
                mult.push(1);
            }
        }
        ComplexRootFlow { points, mult, order: 0, tol: 1e-12, max_iter: 200, sweeps: 0, evaluations: 0, converged: true }
    }

    /// Correction tolerance (relative to `max(1, |z|)`) and sweep cap per step.
    pub fn with_tolerance(mut self, tol: f64, max_iter: usize) -> Self {
        self.tol = tol;
        self.max_iter = max_iter;
        self
    }

    pub fn degree(&self) -> usize {
        self.mult.iter().sum()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Total Aberth sweeps spent so far.
    pub fn sweeps(&self) -> usize {
        self.sweeps
    }

    /// Total single-point Aberth updates spent so far.
    pub fn evaluations(&self) -> usize {
        self.evaluations
    }

    /// False once any step hit the sweep cap.
    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn roots(&self) -> Vec<Complex64> {
        let mut v = Vec::with_capacity(self.degree());
        for (z, &k) in self.points.iter().zip(&self.mult) {
            v.extend(std::iter::repeat(*z).take(k));
        }
        v
    }

    pub fn step(&mut self) {
        let d = self.points.len();
        if self.degree() == 0 {
            return;
        }
        let w: Vec<f64> = self.mult.iter().map(|&k| k as f64).collect();
        let crit = if d >= 2 { self.critical(&w) } else { Vec::new() };
        let mut points = Vec::with_capacity(d + crit.len());
        let mut mult = Vec::with_capacity(d + crit.len());
        for (z, &k) in self.points.iter().zip(&self.mult) {
            if k >= 2 {
                points.push(*z);
                mult.push(k - 1);
            }
        }
        points.extend_from_slice(&crit);
        mult.extend(std::iter::repeat(1).take(crit.len()));
        self.points = points;
        self.mult = mult;
        self.order += 1;
    }

    pub fn advance_to(&mut self, order: usize) {
        while self.order < order && self.degree() > 0 {
            self.step();
        }
    }

    fn critical(&mut self, w: &[f64]) -> Vec<Complex64> {
        let r = &self.points;
        let d = r.len();
        // each root pushed by the field of the others: z = r_i − k_i / L_i(r_i)
        let mut guess: Vec<(f64, Complex64)> = (0..d)
            .into_par_iter()
            .with_min_len(32)
            .map(|i| {
                let mut li = Complex64::new(0.0, 0.0);
                for j in 0..d {
                    if j != i {
                        let diff = r[i] - r[j];
                        li += w[j] * diff.conj() / diff.norm_sqr();
                    }
                }
                let shift = w[i] / li;
                let shift = if shift.re.is_finite() && shift.im.is_finite() { shift } else { Complex64::new(0.0, 0.0) };
                (shift.norm(), r[i] - shift)
            })
            .collect();
        // the largest push is the root that has no partner
        let drop = guess
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
            .map(|(i, _)| i)
            .unwrap();
        guess.remove(drop);
        let mut z: Vec<Complex64> = guess.into_iter().map(|g| g.1).collect();
        let m = z.len();
        let (rx, ry): (Vec<f64>, Vec<f64>) = r.iter().map(|c| (c.re, c.im)).unzip();
        let mut done = vec![false; m];
        let mut sweeps = 0;
        while sweeps < self.max_iter && done.iter().any(|f| !f) {
            sweeps += 1;
            let (zx, zy): (Vec<f64>, Vec<f64>) = z.iter().map(|c| (c.re, c.im)).unzip();
            let upd: Vec<(Complex64, bool)> = (0..m)
                .into_par_iter()
                .with_min_len(16)
                .map(|j| {
                    let zj = Complex64::new(zx[j], zy[j]);
                    if done[j] {
                        return (zj, true);
                    }
                    let (l, dl, mm) = field(zj, &rx, &ry, w);
                    let newton = l / (dl + l * mm);
                    let s = repulsion(j, zj, &zx, &zy);
                    let corr = newton / (Complex64::new(1.0, 0.0) - newton * s);
                    if !(corr.re.is_finite() && corr.im.is_finite()) {
                        return (zj, true);
                    }
                    (zj - corr, corr.norm() < self.tol * zj.norm().max(1.0))
                })
                .collect();
            for (j, (zn, f)) in upd.into_iter().enumerate() {
                if !done[j] {
                    self.evaluations += 1;
                }
                z[j] = zn;
                done[j] = f;
            }
        }
        self.sweeps += sweeps;
        if done.iter().any(|f| !f) {
            self.converged = false;
        }
        z
    }
}

const LANES: usize = 4;

// L = Σ w/(z − r), L' and M = Σ 1/(z − r). Separate real arrays and lane-wise
// partial sums let the compiler vectorize (float sums are not reassociated).
#[inline]
fn field(z: Complex64, rx: &[f64], ry: &[f64], w: &[f64]) -> (Complex64, Complex64, Complex64) {
    let mut acc = [[0.0f64; LANES]; 6];
    let n = rx.len() / LANES * LANES;
    for ((cx, cy), cw) in rx[..n].chunks_exact(LANES).zip(ry[..n].chunks_exact(LANES)).zip(w[..n].chunks_exact(LANES)) {
        for l in 0..LANES {
            let dx = z.re - cx[l];
            let dy = z.im - cy[l];
            let q = 1.0 / (dx * dx + dy * dy);
            let ir = dx * q;
            let ii = -dy * q;
            acc[0][l] += ir;
            acc[1][l] += ii;
            acc[2][l] += cw[l] * ir;
            acc[3][l] += cw[l] * ii;
            // −(ir + i ii)^2
            acc[4][l] -= cw[l] * (ir * ir - ii * ii);
            acc[5][l] -= cw[l] * 2.0 * ir * ii;
        }
    }
    let mut s = [0.0; 6];
    for (k, a) in acc.iter().enumerate() {
        s[k] = (a[0] + a[1]) + (a[2] + a[3]);
    }
    for k in n..rx.len() {
        let dx = z.re - rx[k];
        let dy = z.im - ry[k];
        let q = 1.0 / (dx * dx + dy * dy);
        let ir = dx * q;
        let ii = -dy * q;
        s[0] += ir;
        s[1] += ii;
        s[2] += w[k] * ir;
        s[3] += w[k] * ii;
        s[4] -= w[k] * (ir * ir - ii * ii);
        s[5] -= w[k] * 2.0 * ir * ii;
    }
    (Complex64::new(s[2], s[3]), Complex64::new(s[4], s[5]), Complex64::new(s[0], s[1]))
}

// Σ_{k≠j} 1/(z − z_k).
#[inline]
fn repulsion(j: usize, z: Complex64, zx: &[f64], zy: &[f64]) -> Complex64 {
    let mut acc = [[0.0f64; LANES]; 2];
    let n = zx.len() / LANES * LANES;
    for (c, (cx, cy)) in zx[..n].chunks_exact(LANES).zip(zy[..n].chunks_exact(LANES)).enumerate() {
        for l in 0..LANES {
            let dx = z.re - cx[l];
            let dy = z.im - cy[l];
            let q = if c * LANES + l == j { 0.0 } else { 1.0 / (dx * dx + dy * dy) };
            acc[0][l] += dx * q;
            acc[1][l] -= dy * q;
        }
    }
    let mut sr = (acc[0][0] + acc[0][1]) + (acc[0][2] + acc[0][3]);
    let mut si = (acc[1][0] + acc[1][1]) + (acc[1][2] + acc[1][3]);
    for k in n..zx.len() {
        if k != j {
            let dx = z.re - zx[k];
            let dy = z.im - zy[k];
            let q = 1.0 / (dx * dx + dy * dy);
            sr += dx * q;
            si -= dy * q;
        }
    }
    Complex64::new(sr, si)
}
