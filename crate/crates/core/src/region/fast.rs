//! Flat-array evaluation of a scheme for the boundary search.
//!
//! Uses the Markov structure to avoid materializing `p(u, v, a, b, e)`:
//! only `p(v,a,b)`, `p(u,a,b)` and `p(u,a,e)` are formed. Reported tuples
//! always come from [`super::evaluate_scheme`]; this path only ranks
//! candidates.

use crate::region::SecureSource;
use crate::scalar::neg_xlog2x;

pub(crate) struct FastSource {
    pub na: usize,
    pub nb: usize,
    pub ne: usize,
    pa: Vec<f64>,
    pab: Vec<f64>,
    pae: Vec<f64>,
    dist: Vec<f64>,
    h_a: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct FastEval {
    pub rate: f64,
    pub distortion: f64,
    pub equivocation: f64,
}

fn entropy(xs: &[f64]) -> f64 {
    xs.iter().map(|&x| neg_xlog2x(x)).sum()
}

impl FastSource {
    pub fn new(source: &SecureSource<f64>) -> Self {
        let j = source.joint();
        let pa = j.marginal(&["A"]).unwrap().mass().to_vec();
        let pab = j.marginal(&["A", "B"]).unwrap().mass().to_vec();
        let pae = j.marginal(&["A", "E"]).unwrap().mass().to_vec();
        let na = source.a_alphabet().len();
        let dist = (0..na * na).map(|i| source.distortion(i / na, i % na)).collect();
        Self {
            na,
            nb: source.b_alphabet().len(),
            ne: source.e_alphabet().len(),
            h_a: entropy(&pa),
            pa,
            pab,
            pae,
            dist,
        }
    }

    /// Best reconstruction table from `p(v, a, b)` (layout `[v][a][b]`).
    pub fn reconstruction(&self, pvab: &[f64], nv: usize) -> Vec<usize> {
        let (na, nb) = (self.na, self.nb);
        let mut table = vec![0usize; nv * nb];
        for v in 0..nv {
            for b in 0..nb {
                let mut any = false;
                let mut best = (0usize, f64::INFINITY);
                for a_hat in 0..na {
                    let mut cost = 0.0;
                    for a in 0..na {
                        let p = pvab[(v * na + a) * nb + b];
                        if p > 0.0 {
                            any = true;
                        }
                        cost += p * self.dist[a * na + a_hat];
                    }
                    if cost < best.1 {
                        best = (a_hat, cost);
                    }
                }
                table[v * nb + b] = if any { best.0 } else { 0 };
            }
        }
        table
    }

    /// `v_rows`: `p(v|a)` laid out `[a][v]`; `u_rows`: `p(u|v)` laid out `[v][u]`.
    pub fn evaluate(&self, v_rows: &[f64], nv: usize, u_rows: &[f64], nu: usize) -> FastEval {
        let (na, nb, ne) = (self.na, self.nb, self.ne);
        let mut pvab = vec![0.0; nv * na * nb];
        let mut pvae = vec![0.0; nv * na * ne];
        for a in 0..na {
            for v in 0..nv {
                let q = v_rows[a * nv + v];
                if q == 0.0 {
                    continue;
                }
                for b in 0..nb {
                    pvab[(v * na + a) * nb + b] = q * self.pab[a * nb + b];
                }
                for e in 0..ne {
                    pvae[(v * na + a) * ne + e] = q * self.pae[a * ne + e];
                }
            }
        }
        let table = self.reconstruction(&pvab, nv);
        let mut distortion = 0.0;
        for v in 0..nv {
            for a in 0..na {
                for b in 0..nb {
                    let p = pvab[(v * na + a) * nb + b];
                    if p > 0.0 {
                        distortion += p * self.dist[a * na + table[v * nb + b]];
                    }
                }
            }
        }

        // H(V|B) - H(V|A)
        let mut pvb = vec![0.0; nv * nb];
        for v in 0..nv {
            for a in 0..na {
                for b in 0..nb {
                    pvb[v * nb + b] += pvab[(v * na + a) * nb + b];
                }
            }
        }
        let mut pb = vec![0.0; nb];
        for a in 0..na {
            for b in 0..nb {
                pb[b] += self.pab[a * nb + b];
            }
        }
        let h_vb = entropy(&pvb);
        let h_v_given_a: f64 = (0..na)
            .map(|a| self.pa[a] * entropy(&v_rows[a * nv..(a + 1) * nv]))
            .sum();
        let rate = h_vb - entropy(&pb) - h_v_given_a;
        let h_a_given_vb = entropy(&pvab) - h_vb;

        let mut puab = vec![0.0; nu * na * nb];
        let mut puae = vec![0.0; nu * na * ne];
        for v in 0..nv {
            for u in 0..nu {
                let q = u_rows[v * nu + u];
                if q == 0.0 {
                    continue;
                }
                for i in 0..na * nb {
                    puab[u * na * nb + i] += q * pvab[v * na * nb + i];
                }
                for i in 0..na * ne {
                    puae[u * na * ne + i] += q * pvae[v * na * ne + i];
                }
            }
        }
        let fold = |m: &[f64], inner: usize| -> Vec<f64> {
            // sum out A: [u][a][x] -> [u][x]
            let mut out = vec![0.0; nu * inner];
            for u in 0..nu {
                for a in 0..na {
                    for x in 0..inner {
                        out[u * inner + x] += m[(u * na + a) * inner + x];
                    }
                }
            }
            out
        };
        // I(A;B|U) - I(A;E|U) = H(BU) - H(ABU) - H(EU) + H(AEU)
        let gain = entropy(&fold(&puab, nb)) - entropy(&puab) - entropy(&fold(&puae, ne))
            + entropy(&puae);
        let equivocation = (h_a_given_vb + gain).max(0.0).min(self.h_a);
        FastEval { rate, distortion, equivocation }
    }
}
