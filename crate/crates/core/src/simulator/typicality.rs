//! Strong (letter-frequency) typicality with an additive tolerance.
//!
//! Sequences of length `n <= 64` are also handled as per-symbol bitmasks:
//! bit `i` of `mask[s]` is set when letter `i` equals `s`, so a joint type
//! is a handful of popcounts.

use crate::info::JointPmf;

/// Per-symbol position masks of `seq`.
pub fn masks(seq: &[u8], alphabet: usize) -> Vec<u64> {
    let mut m = vec![0u64; alphabet];
    for (i, &s) in seq.iter().enumerate() {
        m[s as usize] |= 1 << i;
    }
    m
}

/// `T_tol(X1, .., Xk)` at blocklength `n`: sequences whose joint type is
/// within `tol` of the pmf on every cell, with zero-probability cells never
/// visited.
#[derive(Debug, Clone)]
pub struct TypicalSet {
    sizes: Vec<usize>,
    mass: Vec<f64>,
    n: usize,
    /// `allowed[cell * (n + 1) + count]`.
    allowed: Vec<bool>,
}

impl TypicalSet {
    /// Over the axes of `pmf`, in its own order.
    pub fn new(pmf: &JointPmf<f64>, tol: f64, n: usize) -> Self {
        let mass = pmf.mass().to_vec();
        let allowed = mass
            .iter()
            .flat_map(|&p| {
                (0..=n).map(move |c| {
                    if p == 0.0 {
                        c == 0
                    } else {
                        (c as f64 / n as f64 - p).abs() <= tol
                    }
                })
            })
            .collect();
        Self {
            sizes: pmf.axes().iter().map(|a| a.alphabet.len()).collect(),
            mass,
            n,
            allowed,
        }
    }

    pub fn pmf(&self) -> &[f64] {
        &self.mass
    }

    fn ok(&self, cell: usize, count: usize) -> bool {
        self.allowed[cell * (self.n + 1) + count]
    }

    /// `seqs[k]` is the sequence for axis `k`, each of length `n`.
    pub fn contains(&self, seqs: &[&[u8]]) -> bool {
        assert_eq!(seqs.len(), self.sizes.len());
        assert!(seqs.iter().all(|s| s.len() == self.n));
        let mut counts = vec![0usize; self.mass.len()];
        for i in 0..self.n {
            let mut idx = 0;
            for (k, s) in seqs.iter().enumerate() {
                idx = idx * self.sizes[k] + s[i] as usize;
            }
            counts[idx] += 1;
        }
        counts.iter().enumerate().all(|(cell, &c)| self.ok(cell, c))
    }

    /// Same test on per-symbol masks (see [`masks`]); needs `n <= 64`.
    pub fn contains_masks(&self, masks: &[&[u64]]) -> bool {
        debug_assert_eq!(masks.len(), self.sizes.len());
        let mut cell = 0;
        self.walk(masks, 0, u64::MAX, &mut cell)
    }

    fn walk(&self, masks: &[&[u64]], axis: usize, acc: u64, cell: &mut usize) -> bool {
        if axis == masks.len() {
            let ok = self.ok(*cell, acc.count_ones() as usize);
            *cell += 1;
            return ok;
        }
        for &m in masks[axis] {
            if !self.walk(masks, axis + 1, acc & m, cell) {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::Alphabet;

    fn both(t: &TypicalSet, seqs: &[&[u8]], sizes: &[usize]) -> bool {
        let ms: Vec<Vec<u64>> = seqs.iter().zip(sizes).map(|(s, &k)| masks(s, k)).collect();
        let refs: Vec<&[u64]> = ms.iter().map(|m| m.as_slice()).collect();
        let plain = t.contains(seqs);
        assert_eq!(plain, t.contains_masks(&refs));
        plain
    }

    #[test]
    fn uniform_bits() {
        let pmf = JointPmf::uniform("U", Alphabet::binary()).unwrap();
        let t = TypicalSet::new(&pmf, 0.1, 6);
        assert!(both(&t, &[&[0, 1, 0, 1, 1, 0]], &[2]));
        assert!(!both(&t, &[&[0, 0, 0, 0, 1, 0]], &[2]));
        // 4/10 is exactly on the tolerance edge
        let t = TypicalSet::new(&pmf, 0.1, 10);
        assert!(both(&t, &[&[0, 0, 0, 0, 0, 0, 1, 1, 1, 1]], &[2]));
    }

    #[test]
    fn zero_cells_are_forbidden() {
        let pmf = JointPmf::new(
            vec![("X", Alphabet::binary()), ("Y", Alphabet::binary())],
            vec![0.5, 0.0, 0.0, 0.5],
        )
        .unwrap();
        let t = TypicalSet::new(&pmf, 0.5, 4);
        assert!(both(&t, &[&[0, 1, 1, 0], &[0, 1, 1, 0]], &[2, 2]));
        assert!(!both(&t, &[&[0, 1, 1, 0], &[0, 1, 1, 1]], &[2, 2]));
    }

    #[test]
    fn masks_agree_on_three_axes() {
        let pmf = JointPmf::new(
            vec![("X", Alphabet::binary()), ("Y", Alphabet::indexed(3).unwrap()), ("Z", Alphabet::binary())],
            vec![0.1, 0.05, 0.1, 0.05, 0.1, 0.1, 0.05, 0.1, 0.1, 0.05, 0.1, 0.1],
        )
        .unwrap();
        let t = TypicalSet::new(&pmf, 0.15, 8);
        let mut state = 12345u64;
        for _ in 0..500 {
            let mut draw = |k: u64| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) % k) as u8
            };
            let x: Vec<u8> = (0..8).map(|_| draw(2)).collect();
            let y: Vec<u8> = (0..8).map(|_| draw(3)).collect();
            let z: Vec<u8> = (0..8).map(|_| draw(2)).collect();
            both(&t, &[&x, &y, &z], &[2, 3, 2]);
        }
    }
}
