use crate::error::{invalid, Error, Result};
use crate::info::Alphabet;
use crate::scalar::Real;

/// Row-stochastic matrix `p(y|x)` from an input to an output alphabet.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalPmf<T> {
    input: Alphabet,
    output: Alphabet,
    rows: Vec<T>,
}

impl<T: Real> ConditionalPmf<T> {
    /// `rows` is flat, input-major: `rows[x * |output| + y] = p(y|x)`.
    pub fn new(input: Alphabet, output: Alphabet, mut rows: Vec<T>) -> Result<Self> {
        let k = output.len();
        if rows.len() != input.len() * k {
            return Err(Error::InvalidPmf {
                row: "mass".into(),
                reason: format!("expected {} entries, found {}", input.len() * k, rows.len()),
            });
        }
        let tol = T::pmf_tol();
        for (x, row) in rows.chunks_mut(k).enumerate() {
            let label = || format!("row {}", input.symbol(x));
            for (y, p) in row.iter_mut().enumerate() {
                if p.is_nan() || *p < -tol {
                    return Err(Error::InvalidPmf {
                        row: label(),
                        reason: format!("entry {} has invalid probability {p}", output.symbol(y)),
                    });
                }
                if *p < T::zero() {
                    *p = T::zero();
                }
            }
            let s: T = row.iter().copied().sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidPmf {
                    row: label(),
                    reason: format!("row sums to {s}, expected 1"),
                });
            }
        }
        Ok(Self { input, output, rows })
    }

    pub fn from_rows(input: Alphabet, output: Alphabet, rows: &[Vec<T>]) -> Result<Self> {
        Self::new(input, output, rows.concat())
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let k = alphabet.len();
        let mut rows = vec![T::zero(); k * k];
        for i in 0..k {
            rows[i * k + i] = T::one();
        }
        Self { input: alphabet.clone(), output: alphabet, rows }
    }

    /// Deterministic channel `y = map[x]`.
    pub fn deterministic(input: Alphabet, output: Alphabet, map: &[usize]) -> Result<Self> {
        if map.len() != input.len() || map.iter().any(|&y| y >= output.len()) {
            return Err(invalid("deterministic map does not fit the alphabets"));
        }
        let k = output.len();
        let mut rows = vec![T::zero(); input.len() * k];
        for (x, &y) in map.iter().enumerate() {
            rows[x * k + y] = T::one();
        }
        Ok(Self { input, output, rows })
    }

    /// Every input goes to output symbol `symbol`.
    pub fn constant(input: Alphabet, output: Alphabet, symbol: usize) -> Result<Self> {
        let map = vec![symbol; input.len()];
        Self::deterministic(input, output, &map)
    }

    /// Binary symmetric channel over `{0, 1}`.
    pub fn bsc(crossover: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&crossover) {
            return Err(invalid(format!("crossover {crossover} outside [0, 1]")));
        }
        let q = T::one() - crossover;
        Self::new(Alphabet::binary(), Alphabet::binary(), vec![q, crossover, crossover, q])
    }

    /// Binary erasure channel from `{0, 1}` to `{0, e, 1}`.
    pub fn bec(erasure: T) -> Result<Self> {
        if !(T::zero()..=T::one()).contains(&erasure) {
            return Err(invalid(format!("erasure probability {erasure} outside [0, 1]")));
        }
        let q = T::one() - erasure;
        let z = T::zero();
        Self::new(
            Alphabet::binary(),
            Alphabet::new(["0", "e", "1"])?,
            vec![q, erasure, z, z, erasure, q],
        )
    }

    pub fn input(&self) -> &Alphabet {
        &self.input
    }

    pub fn output(&self) -> &Alphabet {
        &self.output
    }

    pub fn rows(&self) -> &[T] {
        &self.rows
    }

    pub fn row(&self, x: usize) -> &[T] {
        let k = self.output.len();
        &self.rows[x * k..(x + 1) * k]
    }

    pub fn prob(&self, x: usize, y: usize) -> T {
        self.rows[x * self.output.len() + y]
    }

    /// Cascade `self` then `second`: the row-stochastic product.
    pub fn compose(&self, second: &Self) -> Result<Self> {
        if self.output != second.input {
            return Err(Error::AlphabetMismatch(format!(
                "first output {} differs from second input {}",
                self.output, second.input
            )));
        }
        let (n, m, k) = (self.input.len(), self.output.len(), second.output.len());
        let mut rows = vec![T::zero(); n * k];
        for x in 0..n {
            for y in 0..m {
                let p = self.prob(x, y);
                if p == T::zero() {
                    continue;
                }
                for z in 0..k {
                    rows[x * k + z] = rows[x * k + z] + p * second.prob(y, z);
                }
            }
        }
        Ok(Self { input: self.input.clone(), output: second.output.clone(), rows })
    }

    /// Largest absolute entrywise difference; `None` if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> Option<T> {
        if self.input.len() != other.input.len() || self.output.len() != other.output.len() {
            return None;
        }
        Some(
            self.rows
                .iter()
                .zip(&other.rows)
                .fold(T::zero(), |acc, (&a, &b)| acc.max((a - b).abs())),
        )
    }

    /// Relabels the alphabets without touching the probabilities.
    pub fn relabel(&self, input: Alphabet, output: Alphabet) -> Result<Self> {
        if input.len() != self.input.len() || output.len() != self.output.len() {
            return Err(Error::AlphabetMismatch("relabel changes alphabet sizes".into()));
        }
        Ok(Self { input, output, rows: self.rows.clone() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::binary_star;

    #[test]
    fn bsc_cascade_is_star() {
        let c = ConditionalPmf::bsc(0.1f64)
            .unwrap()
            .compose(&ConditionalPmf::bsc(0.1).unwrap())
            .unwrap();
        assert!((c.prob(0, 1) - 0.18).abs() < 1e-12);
        let (a, b) = (0.23, 0.41);
        let c = ConditionalPmf::bsc(a).unwrap().compose(&ConditionalPmf::bsc(b).unwrap()).unwrap();
        let want = ConditionalPmf::bsc(binary_star(a, b).unwrap()).unwrap();
        assert!(c.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn identity_is_neutral() {
        let c = ConditionalPmf::bec(0.3f64).unwrap();
        let id = ConditionalPmf::identity(Alphabet::binary());
        assert_eq!(id.compose(&c).unwrap(), c);
    }

    #[test]
    fn compose_rejects_mismatch() {
        let bec = ConditionalPmf::bec(0.3f64).unwrap();
        assert!(matches!(bec.compose(&bec), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn invalid_rows_are_named() {
        let err = ConditionalPmf::new(
            Alphabet::new(["x", "y"]).unwrap(),
            Alphabet::binary(),
            vec![0.5, 0.5, 0.7, 0.7],
        )
        .unwrap_err();
        match err {
            Error::InvalidPmf { row, .. } => assert_eq!(row, "row y"),
            other => panic!("{other:?}"),
        }
    }
}
