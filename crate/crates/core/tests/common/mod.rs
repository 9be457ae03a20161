//! Independent brute-force oracle: dense joints keyed by axis position,
//! entropies by grouping outcomes in a hash map.

#![allow(dead_code)]

use std::collections::HashMap;

use rand::Rng;
use secwz::{AuxScheme, ConditionalPmf, JointPmf, SecureSource};

#[derive(Debug, Clone)]
pub struct Dense {
    pub sizes: Vec<usize>,
    pub cells: Vec<(Vec<usize>, f64)>,
}

impl Dense {
    pub fn of(j: &JointPmf) -> Self {
        let sizes: Vec<usize> = j.axes().iter().map(|a| a.alphabet.len()).collect();
        let mut cells = Vec::new();
        for (flat, &p) in j.mass().iter().enumerate() {
            let mut idx = vec![0; sizes.len()];
            let mut rest = flat;
            for k in (0..sizes.len()).rev() {
                idx[k] = rest % sizes[k];
                rest /= sizes[k];
            }
            cells.push((idx, p));
        }
        Self { sizes, cells }
    }

    pub fn h(&self, axes: &[usize]) -> f64 {
        let mut groups: HashMap<Vec<usize>, f64> = HashMap::new();
        for (idx, p) in &self.cells {
            let key: Vec<usize> = axes.iter().map(|&k| idx[k]).collect();
            *groups.entry(key).or_default() += p;
        }
        groups.values().filter(|&&p| p > 0.0).map(|&p| -p * p.log2()).sum()
    }

    /// `H(x | y)`.
    pub fn ch(&self, x: &[usize], y: &[usize]) -> f64 {
        let xy: Vec<usize> = x.iter().chain(y).copied().collect();
        self.h(&xy) - self.h(y)
    }

    /// `I(x; y | z)`.
    pub fn mi(&self, x: &[usize], y: &[usize], z: &[usize]) -> f64 {
        let xz: Vec<usize> = x.iter().chain(z).copied().collect();
        let yz: Vec<usize> = y.iter().chain(z).copied().collect();
        let xyz: Vec<usize> = xz.iter().chain(y).copied().collect();
        self.h(&xz) + self.h(&yz) - self.h(&xyz) - self.h(z)
    }
}

pub const A: usize = 0;
pub const B: usize = 1;
pub const E: usize = 2;
pub const V: usize = 3;
pub const U: usize = 4;

/// `p(a, b, e, v, u)` built by explicit loops over the channel rows.
pub fn scheme_joint(src: &SecureSource, scheme: &AuxScheme) -> Dense {
    let base = Dense::of(src.joint());
    let (vc, uc) = (scheme.v_channel(), scheme.u_channel());
    let (nv, nu) = (vc.output().len(), uc.output().len());
    let mut cells = Vec::new();
    for (idx, p) in &base.cells {
        for v in 0..nv {
            for u in 0..nu {
                let m = p * vc.prob(idx[0], v) * uc.prob(v, u);
                cells.push((vec![idx[0], idx[1], idx[2], v, u], m));
            }
        }
    }
    let mut sizes = base.sizes.clone();
    sizes.extend([nv, nu]);
    Dense { sizes, cells }
}

/// Oracle distortion of the scheme's reconstruction.
pub fn scheme_distortion(src: &SecureSource, scheme: &AuxScheme, d: &Dense) -> f64 {
    d.cells
        .iter()
        .map(|(i, p)| p * src.distortion(i[A], scheme.reconstruction().get(i[V], i[B])))
        .sum()
}

pub fn random_row(rng: &mut impl Rng, width: usize) -> Vec<f64> {
    // occasionally sparse, to exercise zero-mass cells
    let mut r: Vec<f64> = (0..width)
        .map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen::<f64>() + 1e-3 })
        .collect();
    if r.iter().all(|&x| x == 0.0) {
        r[0] = 1.0;
    }
    let s: f64 = r.iter().sum();
    r.iter_mut().for_each(|x| *x /= s);
    r
}

pub fn random_channel(rng: &mut impl Rng, input: secwz::info::Alphabet, output: secwz::info::Alphabet) -> ConditionalPmf {
    let rows: Vec<Vec<f64>> = (0..input.len()).map(|_| random_row(rng, output.len())).collect();
    ConditionalPmf::from_rows(input, output, &rows).unwrap()
}

/// Random source with `|A| = na`, `|B| = nb`, `|E| = ne` and Hamming
/// distortion.
pub fn random_source(rng: &mut impl Rng, na: usize, nb: usize, ne: usize) -> SecureSource {
    use secwz::info::Alphabet;
    let mass: Vec<f64> = random_row(rng, na * nb * ne);
    let j = JointPmf::new(
        vec![
            ("A", Alphabet::labeled("a", na).unwrap()),
            ("B", Alphabet::labeled("b", nb).unwrap()),
            ("E", Alphabet::labeled("e", ne).unwrap()),
        ],
        mass,
    )
    .unwrap();
    SecureSource::with_hamming(j).unwrap()
}
