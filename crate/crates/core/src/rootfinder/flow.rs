// Differentiation of a real-rooted polynomial tracked through its roots.
//
// If p = Π (x − s_j)^{k_j} with distinct real s_j, the zeroes of p' are every
// s_j with k_j ≥ 2 (multiplicity k_j − 1) plus exactly one simple zero in each
// gap (s_j, s_{j+1}), where Σ k_i/(x − s_i) = 0. Nothing here touches the
// monomial coefficients, whose values on the root interval cancel to roughly
// e^{−cn} relative precision.

use rayon::prelude::*;

use super::tree::{Field, LEAF};

const DIRECT_BELOW: usize = 4 * LEAF;

/// Real-rooted polynomial held as distinct roots with multiplicities.
#[derive(Clone, Debug)]
pub struct RealRootFlow {
    points: Vec<f64>,
    mult: Vec<usize>,
    order: usize,
}

impl RealRootFlow {
    /// Groups bitwise-equal values into multiplicities.
    pub fn new(roots: &[f64]) -> Self {
        let mut r = roots.to_vec();
        r.sort_by(f64::total_cmp);
        let mut points = Vec::new();
        let mut mult: Vec<usize> = Vec::new();
        for x in r {
            if points.last() == Some(&x) {
                *mult.last_mut().unwrap() += 1;
            } else {
                points.push(x);
                mult.push(1);
            }
        }
        RealRootFlow { points, mult, order: 0 }
    }

    pub fn from_atoms(atoms: &[(f64, usize)]) -> Self {
        let mut v = Vec::new();
        for &(x, k) in atoms {
            v.extend(std::iter::repeat(x).take(k));
        }
        Self::new(&v)
    }

    pub fn degree(&self) -> usize {
        self.mult.iter().sum()
    }

    /// Number of differentiations applied so far.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Distinct roots and multiplicities.
    pub fn points(&self) -> impl Iterator<Item = (f64, usize)> + '_ {
        self.points.iter().copied().zip(self.mult.iter().copied())
    }

    /// All roots, repeated by multiplicity, ascending.
    pub fn roots(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.degree());
        for (x, k) in self.points() {
            v.extend(std::iter::repeat(x).take(k));
        }
        v
    }

    /// Differentiate once. Does nothing on a constant.
    pub fn step(&mut self) {
        if self.degree() == 0 {
            return;
        }
        let w: Vec<f64> = self.mult.iter().map(|&k| k as f64).collect();
        let crit = if self.points.len() < DIRECT_BELOW {
            gap_roots_direct(&self.points, &w)
        } else {
            gap_roots_tree(&self.points, &w)
        };
        let mut points = Vec::with_capacity(self.points.len() * 2);
        let mut mult = Vec::with_capacity(self.points.len() * 2);
        for i in 0..self.points.len() {
            if self.mult[i] >= 2 {
                points.push(self.points[i]);
                mult.push(self.mult[i] - 1);
            }
            if i < crit.len() {
                // a gap root can round onto an endpoint only when the gap is a
                // few ulps wide; keep the list strictly increasing
                let x = crit[i];
                if points.last().is_some_and(|&l| x <= l) {
                    *mult.last_mut().unwrap() += 1;
                } else {
                    points.push(x);
                    mult.push(1);
                }
            }
        }
        self.points = points;
        self.mult = mult;
        self.order += 1;
    }

    pub fn advance_to(&mut self, order: usize) {
        while self.order < order && self.degree() > 0 {
            self.step();
        }
    }
}

/// Zeroes of `Σ w_j/(x − s_j)` between consecutive sorted `s`, by direct sums.
pub fn critical_points_direct(s: &[f64], w: &[f64]) -> Vec<f64> {
    gap_roots_direct(s, w)
}

fn gap_roots_direct(s: &[f64], w: &[f64]) -> Vec<f64> {
    (0..s.len().saturating_sub(1))
        .into_par_iter()
        .with_min_len(16)
        .map(|i| {
            let others: Vec<usize> = (0..s.len()).filter(|&j| j != i && j != i + 1).collect();
            solve_gap(s, w, i, &others, |_| (0.0, 0.0))
        })
        .collect()
}

fn gap_roots_tree(s: &[f64], w: &[f64]) -> Vec<f64> {
    let field = Field::build(s, w);
    let n = s.len();
    (0..n - 1)
        .into_par_iter()
        .with_min_len(64)
        .map(|i| {
            let b = field.leaf_of(i);
            let mut others = Vec::with_capacity(field.near[b].len() * LEAF);
            for &leaf in &field.near[b] {
                let lo = field.leaf_start[leaf];
                let hi = (lo + LEAF).min(n);
                others.extend((lo..hi).filter(|&j| j != i && j != i + 1));
            }
            solve_gap(s, w, i, &others, |x| field.far(b, x))
        })
        .collect()
}

// Root of  w_i/δ − w_{i+1}/(g − δ) + r(δ)  on (0, g), where r collects the
// listed sources plus a smooth far field. Newton runs on the pole-free form
//   φ(δ) = w_i (g − δ) − w_{i+1} δ + δ (g − δ) r(δ)
// inside a bisection bracket.
fn solve_gap<F: Fn(f64) -> (f64, f64)>(s: &[f64], w: &[f64], i: usize, others: &[usize], far: F) -> f64 {
    let x0 = s[i];
    let g = s[i + 1] - s[i];
    let (wl, wr) = (w[i], w[i + 1]);
    let rest = |d: f64| {
        let (mut v, mut dv) = far(x0 + d);
        for &j in others {
            let r = 1.0 / ((x0 - s[j]) + d);
            v += w[j] * r;
            dv -= w[j] * r * r;
        }
        (v, dv)
    };
    let phi = |d: f64| {
        let (r, dr) = rest(d);
        let q = d * (g - d);
        let f = wl * (g - d) - wr * d + q * r;
        let df = -wl - wr + (g - 2.0 * d) * r + q * dr;
        (f, df)
    };
    // two-pole model with the rest frozen at the midpoint
    let (c, _) = rest(0.5 * g);
    let mut d = {
        let lin = wl * g / (wl + wr);
        if c.abs() * g < 1e-12 * (wl + wr) {
            lin
        } else {
            // c δ² − (c g − wl − wr) δ − wl g = 0
            let bq = -(c * g - wl - wr);
            let disc = (bq * bq + 4.0 * c * wl * g).max(0.0).sqrt();
            let qq = -0.5 * (bq + bq.signum() * disc);
            let r1 = qq / c;
            let r2 = -wl * g / qq;
            if r1 > 0.0 && r1 < g {
                r1
            } else if r2 > 0.0 && r2 < g {
                r2
            } else {
                lin
            }
        }
    };
    let (mut lo, mut hi) = (0.0, g);
    for _ in 0..200 {
        let (f, df) = phi(d);
        if f == 0.0 {
            break;
        }
        if f > 0.0 {
            lo = d;
        } else {
            hi = d;
        }
        let mut next = d - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = (next - d).abs();
        d = next;
        if step <= 2.0 * f64::EPSILON * (x0.abs() + d) || hi - lo <= 2.0 * f64::EPSILON * (x0.abs() + hi) {
            break;
        }
    }
    x0 + d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn tree_matches_direct() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut s: Vec<f64> = (0..3000).map(|_| (std::f64::consts::PI * rng.gen::<f64>()).cos()).collect();
        s.sort_by(f64::total_cmp);
        let mut w = vec![1.0; s.len()];
        w[0] = 700.0;
        w[1500] = 40.0;
        let a = gap_roots_direct(&s, &w);
        let b = gap_roots_tree(&s, &w);
        for i in 0..a.len() {
            let gap = s[i + 1] - s[i];
            assert!((a[i] - b[i]).abs() <= 1e-9 * gap, "gap {i}: {} vs {}", a[i], b[i]);
        }
    }

    #[test]
    fn two_atoms_one_step() {
        // (x(x+1))^2 has derivative 2x(x+1)(2x+1)
        let mut f = RealRootFlow::from_atoms(&[(0.0, 2), (-1.0, 2)]);
        f.step();
        let r = f.roots();
        assert_eq!(r.len(), 3);
        assert_eq!(r[0], -1.0);
        assert!((r[1] + 0.5).abs() < 1e-15);
        assert_eq!(r[2], 0.0);
    }

    #[test]
    fn interlacing_holds() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let roots: Vec<f64> = (0..600).map(|_| rng.gen::<f64>() * 4.0 - 2.0).collect();
        let mut f = RealRootFlow::new(&roots);
        let before = f.roots();
        f.step();
        let after = f.roots();
        assert_eq!(after.len(), before.len() - 1);
        for i in 0..after.len() {
            assert!(before[i] < after[i] && after[i] < before[i + 1]);
        }
    }
}
