// Treecode for sums Σ_j w_j/(x − s_j) over sorted real sources.
//
// Sources are cut into leaves of consecutive indices. Every leaf owns the
// target interval from its first source to the first source of the next leaf.
// For each leaf, source nodes far enough away are collapsed into Chebyshev
// proxies and their field is sampled at the leaf's own Chebyshev nodes; the
// rest are summed directly by the caller.

use std::f64::consts::PI;

pub(crate) const LEAF: usize = 32;
const P: usize = 18;

#[derive(Clone, Copy)]
struct Cheb {
    nodes: [f64; P],
    bary: [f64; P],
}

impl Cheb {
    fn on(lo: f64, hi: f64) -> Self {
        let c = 0.5 * (lo + hi);
        let h = 0.5 * (hi - lo);
        let mut nodes = [0.0; P];
        let mut bary = [0.0; P];
        for a in 0..P {
            let th = (2 * a + 1) as f64 * PI / (2 * P) as f64;
            nodes[a] = c + h * th.cos();
            bary[a] = if a % 2 == 0 { th.sin() } else { -th.sin() };
        }
        Cheb { nodes, bary }
    }

    // Lagrange basis values at y.
    fn basis(&self, y: f64, out: &mut [f64; P]) {
        let mut s = 0.0;
        for a in 0..P {
            let d = y - self.nodes[a];
            if d == 0.0 {
                *out = [0.0; P];
                out[a] = 1.0;
                return;
            }
            out[a] = self.bary[a] / d;
            s += out[a];
        }
        for v in out.iter_mut() {
            *v /= s;
        }
    }

    fn interp(&self, y: f64, vals: &[f64; P]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for a in 0..P {
            let d = y - self.nodes[a];
            if d == 0.0 {
                return vals[a];
            }
            let w = self.bary[a] / d;
            num += w * vals[a];
            den += w;
        }
        num / den
    }
}

struct Node {
    lo: f64,
    hi: f64,
    leaf_lo: usize,
    leaf_hi: usize,
    children: Option<(usize, usize)>,
    // proxy sources: either the real ones (small nodes) or Chebyshev points
    proxy_pos: Vec<f64>,
    proxy_w: Vec<f64>,
}

pub(crate) struct Field {
    pub leaf_start: Vec<usize>,
    pub near: Vec<Vec<usize>>, // per leaf: near leaves
    cheb: Vec<Cheb>,
    far_val: Vec<[f64; P]>,
    far_der: Vec<[f64; P]>,
}

impl Field {
    pub fn build(src: &[f64], w: &[f64]) -> Field {
        let n = src.len();
        let nleaf = n.div_ceil(LEAF);
        let leaf_start: Vec<usize> = (0..nleaf).map(|b| b * LEAF).collect();
        let leaf_end = |b: usize| ((b + 1) * LEAF).min(n);
        let mut nodes: Vec<Node> = Vec::with_capacity(2 * nleaf);
        build_node(&mut nodes, src, w, 0, nleaf, &leaf_end);

        let mut near = vec![Vec::new(); nleaf];
        let mut cheb = Vec::with_capacity(nleaf);
        let mut far_val = vec![[0.0; P]; nleaf];
        let mut far_der = vec![[0.0; P]; nleaf];
        let mut stack = Vec::new();
        for b in 0..nleaf {
            let lo = src[leaf_start[b]];
            let hi = if b + 1 < nleaf { src[leaf_start[b + 1]] } else { src[n - 1] };
            let ch = Cheb::on(lo, hi);
            let width = hi - lo;
            stack.clear();
            stack.push(0usize);
            while let Some(id) = stack.pop() {
                let nd = &nodes[id];
                let dist = (nd.lo - hi).max(lo - nd.hi).max(0.0);
                if width > 0.0 && dist > 0.0 && dist >= width.max(nd.hi - nd.lo) {
                    for (&y, &wy) in nd.proxy_pos.iter().zip(&nd.proxy_w) {
                        for a in 0..P {
                            let r = 1.0 / (ch.nodes[a] - y);
                            far_val[b][a] += wy * r;
                            far_der[b][a] -= wy * r * r;
                        }
                    }
                } else if let Some((l, r)) = nd.children {
                    stack.push(l);
                    stack.push(r);
                } else {
                    for leaf in nd.leaf_lo..nd.leaf_hi {
                        near[b].push(leaf);
                    }
                }
            }
            near[b].sort_unstable();
            cheb.push(ch);
        }
        Field { leaf_start, near, cheb, far_val, far_der }
    }

    pub fn leaf_of(&self, i: usize) -> usize {
        i / LEAF
    }

    /// Far field and its derivative at x inside the target interval of leaf b.
    #[inline]
    pub fn far(&self, b: usize, x: f64) -> (f64, f64) {
        let ch = &self.cheb[b];
        (ch.interp(x, &self.far_val[b]), ch.interp(x, &self.far_der[b]))
    }
}

fn build_node(
    nodes: &mut Vec<Node>,
    src: &[f64],
    w: &[f64],
    leaf_lo: usize,
    leaf_hi: usize,
    leaf_end: &dyn Fn(usize) -> usize,
) -> usize {
    let first = leaf_lo * LEAF;
    let last = leaf_end(leaf_hi - 1);
    let (lo, hi) = (src[first], src[last - 1]);
    let id = nodes.len();
    nodes.push(Node { lo, hi, leaf_lo, leaf_hi, children: None, proxy_pos: vec![], proxy_w: vec![] });
    if leaf_hi - leaf_lo > 1 {
        let mid = (leaf_lo + leaf_hi) / 2;
        let l = build_node(nodes, src, w, leaf_lo, mid, leaf_end);
        let r = build_node(nodes, src, w, mid, leaf_hi, leaf_end);
        nodes[id].children = Some((l, r));
    }
    let count = last - first;
    if count <= P || hi <= lo {
        nodes[id].proxy_pos = src[first..last].to_vec();
        nodes[id].proxy_w = w[first..last].to_vec();
    } else {
        let ch = Cheb::on(lo, hi);
        let mut acc = [0.0; P];
        let mut basis = [0.0; P];
        // anterpolate from children proxies when present, else from sources
        let (pos, wts): (Vec<f64>, Vec<f64>) = match nodes[id].children {
            Some((l, r)) => {
                let mut p = nodes[l].proxy_pos.clone();
                p.extend_from_slice(&nodes[r].proxy_pos);
                let mut q = nodes[l].proxy_w.clone();
                q.extend_from_slice(&nodes[r].proxy_w);
                (p, q)
            }
            None => (src[first..last].to_vec(), w[first..last].to_vec()),
        };
        for (&y, &wy) in pos.iter().zip(&wts) {
            ch.basis(y, &mut basis);
            for a in 0..P {
                acc[a] += wy * basis[a];
            }
        }
        nodes[id].proxy_pos = ch.nodes.to_vec();
        nodes[id].proxy_w = acc.to_vec();
    }
    id
}
