use crate::error::{invalid, Error, Result};
use crate::info::{Alphabet, ConditionalPmf};
use crate::scalar::{neg_xlog2x, Real};

/// A named axis of a joint distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub alphabet: Alphabet,
}

/// Dense joint pmf over named finite alphabets, stored row-major (last axis
/// varies fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<T> {
    axes: Vec<Axis>,
    mass: Vec<T>,
}

impl<T: Real> JointPmf<T> {
    pub fn new<S: Into<String>>(axes: Vec<(S, Alphabet)>, mass: Vec<T>) -> Result<Self> {
        let axes: Vec<Axis> = axes
            .into_iter()
            .map(|(name, alphabet)| Axis { name: name.into(), alphabet })
            .collect();
        if axes.is_empty() {
            return Err(invalid("a joint pmf needs at least one axis"));
        }
        for (i, ax) in axes.iter().enumerate() {
            if axes[..i].iter().any(|o| o.name == ax.name) {
                return Err(invalid(format!("duplicate axis name {:?}", ax.name)));
            }
        }
        let size: usize = axes.iter().map(|a| a.alphabet.len()).product();
        if mass.len() != size {
            return Err(Error::InvalidPmf {
                row: "mass".into(),
                reason: format!("expected {size} entries, found {}", mass.len()),
            });
        }
        let mut pmf = Self { axes, mass };
        pmf.validate()?;
        Ok(pmf)
    }

    /// Single-axis pmf.
    pub fn single(name: &str, alphabet: Alphabet, probs: Vec<T>) -> Result<Self> {
        Self::new(vec![(name, alphabet)], probs)
    }

    pub fn uniform(name: &str, alphabet: Alphabet) -> Result<Self> {
        let k = alphabet.len();
        let p = T::one() / T::from_usize(k).unwrap();
        Self::single(name, alphabet, vec![p; k])
    }

    fn validate(&mut self) -> Result<()> {
        let tol = T::pmf_tol();
        let last = self.axes.last().unwrap().alphabet.len();
        for (i, m) in self.mass.iter_mut().enumerate() {
            if m.is_nan() || *m < -tol {
                let row = i / last;
                return Err(Error::InvalidPmf {
                    row: describe_row(&self.axes, row),
                    reason: format!(
                        "entry {}={} has invalid probability {m}",
                        self.axes.last().unwrap().name,
                        self.axes.last().unwrap().alphabet.symbol(i % last)
                    ),
                });
            }
            if *m < T::zero() {
                *m = T::zero();
            }
        }
        let total: T = self.mass.iter().copied().sum();
        if (total - T::one()).abs() > tol {
            // Point at the heaviest row so the diagnostic is actionable.
            let rows = self.mass.len() / last;
            let heaviest = (0..rows)
                .max_by(|&a, &b| {
                    let sa: T = self.mass[a * last..(a + 1) * last].iter().copied().sum();
                    let sb: T = self.mass[b * last..(b + 1) * last].iter().copied().sum();
                    sa.partial_cmp(&sb).unwrap()
                })
                .unwrap_or(0);
            return Err(Error::InvalidPmf {
                row: describe_row(&self.axes, heaviest),
                reason: format!("total mass is {total}, expected 1"),
            });
        }
        Ok(())
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn axis_index(&self, name: &str) -> Result<usize> {
        self.axes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| invalid(format!("unknown axis {name:?}")))
    }

    pub fn alphabet(&self, name: &str) -> Result<&Alphabet> {
        Ok(&self.axes[self.axis_index(name)?].alphabet)
    }

    fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.alphabet.len()).collect()
    }

    /// Probability of one cell, indexed by one symbol index per axis.
    pub fn prob(&self, index: &[usize]) -> T {
        let shape = self.shape();
        let flat = index
            .iter()
            .zip(&shape)
            .fold(0usize, |acc, (&i, &n)| acc * n + i);
        self.mass[flat]
    }

    fn resolve(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            let i = self.axis_index(name)?;
            if out.contains(&i) {
                return Err(invalid(format!("axis {name:?} listed twice")));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Marginal masses over `axes` (positions), laid out row-major in that
    /// order.
    fn marginal_masses(&self, axes: &[usize]) -> Vec<T> {
        let shape = self.shape();
        let size: usize = axes.iter().map(|&a| shape[a]).product();
        let mut weights = vec![0usize; shape.len()];
        let mut w = 1;
        for &a in axes.iter().rev() {
            weights[a] = w;
            w *= shape[a];
        }
        let mut out = vec![T::zero(); size];
        let mut coord = vec![0usize; shape.len()];
        let mut target = 0usize;
        for &m in &self.mass {
            out[target] = out[target] + m;
            // Odometer increment, tracking the target offset incrementally.
            for d in (0..shape.len()).rev() {
                coord[d] += 1;
                target += weights[d];
                if coord[d] < shape[d] {
                    break;
                }
                target -= weights[d] * shape[d];
                coord[d] = 0;
            }
        }
        out
    }

    /// Marginal distribution over `names`, in the given order.
    pub fn marginal(&self, names: &[&str]) -> Result<Self> {
        let idx = self.resolve(names)?;
        if idx.is_empty() {
            return Err(invalid("marginal over an empty axis set"));
        }
        let axes = idx.iter().map(|&i| self.axes[i].clone()).collect();
        Ok(Self { axes, mass: self.marginal_masses(&idx) })
    }

    /// `H(targets)` in bits.
    pub fn entropy(&self, targets: &[&str]) -> Result<T> {
        let idx = self.resolve(targets)?;
        Ok(self.entropy_of(&idx))
    }

    fn entropy_of(&self, idx: &[usize]) -> T {
        if idx.is_empty() {
            return T::zero();
        }
        self.marginal_masses(idx).into_iter().map(neg_xlog2x).sum()
    }

    /// `H(targets | given)`.
    pub fn conditional_entropy(&self, targets: &[&str], given: &[&str]) -> Result<T> {
        let t = self.resolve(targets)?;
        let g = self.resolve(given)?;
        disjoint(&[&t, &g])?;
        let joint: Vec<usize> = t.iter().chain(&g).copied().collect();
        Ok(self.entropy_of(&joint) - self.entropy_of(&g))
    }

    /// `I(x; y | given)`; pass an empty `given` for the unconditional form.
    pub fn mutual_information(&self, x: &[&str], y: &[&str], given: &[&str]) -> Result<T> {
        let xi = self.resolve(x)?;
        let yi = self.resolve(y)?;
        let gi = self.resolve(given)?;
        disjoint(&[&xi, &yi, &gi])?;
        let cat = |parts: &[&[usize]]| parts.concat();
        Ok(self.entropy_of(&cat(&[&xi, &gi])) + self.entropy_of(&cat(&[&yi, &gi]))
            - self.entropy_of(&cat(&[&xi, &yi, &gi]))
            - self.entropy_of(&gi))
    }

    /// Appends a new axis `output` drawn through `channel` from axis `input`.
    pub fn extend(&self, channel: &ConditionalPmf<T>, input: &str, output: &str) -> Result<Self> {
        let src = self.axis_index(input)?;
        if self.axes.iter().any(|a| a.name == output) {
            return Err(invalid(format!("axis {output:?} already present")));
        }
        if channel.input() != &self.axes[src].alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "channel input {} does not match axis {input:?} alphabet {}",
                channel.input(),
                self.axes[src].alphabet
            )));
        }
        let shape = self.shape();
        let k = channel.output().len();
        let mut mass = Vec::with_capacity(self.mass.len() * k);
        let mut coord = vec![0usize; shape.len()];
        for &m in &self.mass {
            let row = channel.row(coord[src]);
            mass.extend(row.iter().map(|&q| m * q));
            for d in (0..shape.len()).rev() {
                coord[d] += 1;
                if coord[d] < shape[d] {
                    break;
                }
                coord[d] = 0;
            }
        }
        let mut axes = self.axes.clone();
        axes.push(Axis { name: output.to_string(), alphabet: channel.output().clone() });
        Ok(Self { axes, mass })
    }
}

/// Builds a joint from a marginal and a chain of channels, each reading one
/// existing axis and producing a fresh one: `(channel, input axis, new axis)`.
pub fn joint_from<T: Real>(
    marginal: &JointPmf<T>,
    channels: &[(&ConditionalPmf<T>, &str, &str)],
) -> Result<JointPmf<T>> {
    let mut joint = marginal.clone();
    for (channel, input, output) in channels {
        joint = joint.extend(channel, input, output)?;
    }
    Ok(joint)
}

fn disjoint(sets: &[&Vec<usize>]) -> Result<()> {
    for (i, a) in sets.iter().enumerate() {
        for b in &sets[i + 1..] {
            if a.iter().any(|x| b.contains(x)) {
                return Err(invalid("axis sets must be disjoint"));
            }
        }
    }
    Ok(())
}

fn describe_row(axes: &[Axis], row: usize) -> String {
    let lead = &axes[..axes.len() - 1];
    if lead.is_empty() {
        return "row 0".into();
    }
    let mut rem = row;
    let mut parts = Vec::with_capacity(lead.len());
    for ax in lead.iter().rev() {
        let n = ax.alphabet.len();
        parts.push(format!("{}={}", ax.name, ax.alphabet.symbol(rem % n)));
        rem /= n;
    }
    parts.reverse();
    format!("row ({})", parts.join(", "))
}
