//! Rate-distortion-equivocation tuples certified by auxiliary schemes, the
//! special cases where one auxiliary variable collapses, and a boundary
//! search over schemes.
//!
//! A scheme is a pair of channels `A -> V -> U` plus a reconstruction map
//! `(v, b) -> â`. It certifies the tuple
//!
//! ```text
//! R = I(V;A|B)
//! D = E[d(A, Â(V,B))]
//! Δ = [H(A|VB) + I(A;B|U) - I(A;E|U)]+
//! ```

mod fast;
mod search;
pub mod text;

pub use search::{sweep_boundary, BoundaryCurve, BoundaryPoint, SearchConfig};

use crate::error::{invalid, Error, Result};
use crate::info::{Alphabet, ConditionalPmf, JointPmf};
use crate::scalar::Real;

/// Source `p(a, b, e)` with a bounded distortion measure on `A x A`.
#[derive(Debug, Clone, PartialEq)]
pub struct SecureSource<T> {
    joint: JointPmf<T>,
    distortion: Vec<T>,
    d_max: T,
}

impl<T: Real> SecureSource<T> {
    /// `joint` must have exactly the axes `A`, `B`, `E` (any order; stored as
    /// `A, B, E`). `distortion[a][â]` must lie in `[0, d_max]`; `d_max`
    /// defaults to the largest entry.
    pub fn new(joint: JointPmf<T>, distortion: &[Vec<T>], d_max: Option<T>) -> Result<Self> {
        let mut names: Vec<&str> = joint.axes().iter().map(|a| a.name.as_str()).collect();
        names.sort_unstable();
        if names != ["A", "B", "E"] {
            return Err(invalid(format!(
                "source joint must have axes A, B, E; found {names:?}"
            )));
        }
        let joint = joint.marginal(&["A", "B", "E"])?;
        let k = joint.alphabet("A")?.len();
        if distortion.len() != k || distortion.iter().any(|r| r.len() != k) {
            return Err(invalid(format!("distortion matrix must be {k}x{k}")));
        }
        let flat: Vec<T> = distortion.concat();
        let largest = flat.iter().copied().fold(T::zero(), T::max);
        let d_max = d_max.unwrap_or(largest);
        if !d_max.is_finite() {
            return Err(invalid("d_max must be finite"));
        }
        if let Some(bad) = flat.iter().position(|&d| d.is_nan() || d < T::zero() || d > d_max) {
            return Err(invalid(format!(
                "distortion entry ({}, {}) = {} outside [0, {d_max}]",
                bad / k,
                bad % k,
                flat[bad]
            )));
        }
        Ok(Self { joint, distortion: flat, d_max })
    }

    /// Hamming distortion `d(a, â) = 1{a != â}`.
    pub fn with_hamming(joint: JointPmf<T>) -> Result<Self> {
        let k = joint.alphabet("A")?.len();
        let rows: Vec<Vec<T>> = (0..k)
            .map(|a| (0..k).map(|b| if a == b { T::zero() } else { T::one() }).collect())
            .collect();
        Self::new(joint, &rows, Some(T::one()))
    }

    pub fn joint(&self) -> &JointPmf<T> {
        &self.joint
    }

    pub fn a_alphabet(&self) -> &Alphabet {
        &self.joint.axes()[0].alphabet
    }

    pub fn b_alphabet(&self) -> &Alphabet {
        &self.joint.axes()[1].alphabet
    }

    pub fn e_alphabet(&self) -> &Alphabet {
        &self.joint.axes()[2].alphabet
    }

    pub fn distortion(&self, a: usize, a_hat: usize) -> T {
        self.distortion[a * self.a_alphabet().len() + a_hat]
    }

    pub fn distortion_rows(&self) -> Vec<Vec<T>> {
        self.distortion.chunks(self.a_alphabet().len()).map(|r| r.to_vec()).collect()
    }

    pub fn d_max(&self) -> T {
        self.d_max
    }

    /// Marginal of `A` as a single-axis pmf.
    pub fn a_marginal(&self) -> JointPmf<T> {
        self.joint.marginal(&["A"]).expect("A axis")
    }

    /// Conditional `p(b|a)`, with `b` over `B`.
    pub fn bob_channel(&self) -> ConditionalPmf<T> {
        self.conditional("B")
    }

    /// Conditional `p(e|a)`.
    pub fn eve_channel(&self) -> ConditionalPmf<T> {
        self.conditional("E")
    }

    fn conditional(&self, axis: &str) -> ConditionalPmf<T> {
        let m = self.joint.marginal(&["A", axis]).expect("axes exist");
        let (na, ny) = (self.a_alphabet().len(), m.axes()[1].alphabet.len());
        let mut rows = Vec::with_capacity(na * ny);
        for a in 0..na {
            let row = &m.mass()[a * ny..(a + 1) * ny];
            let s: T = row.iter().copied().sum();
            if s > T::zero() {
                rows.extend(row.iter().map(|&x| x / s));
            } else {
                // Unreachable input: any row will do; use a point mass.
                rows.extend((0..ny).map(|y| if y == 0 { T::one() } else { T::zero() }));
            }
        }
        ConditionalPmf::new(self.a_alphabet().clone(), m.axes()[1].alphabet.clone(), rows)
            .expect("normalized rows")
    }

    /// Smallest distortion reachable at zero rate: Bob reconstructs from `B`
    /// alone.
    pub fn zero_rate_distortion(&self) -> T {
        let k = self.a_alphabet().len();
        let nb = self.b_alphabet().len();
        let ab = self.joint.marginal(&["B", "A"]).expect("axes exist");
        (0..nb)
            .map(|b| {
                (0..k)
                    .map(|a_hat| {
                        (0..k).map(|a| ab.prob(&[b, a]) * self.distortion(a, a_hat)).sum::<T>()
                    })
                    .fold(T::infinity(), T::min)
            })
            .sum()
    }
}

/// Deterministic reconstruction `Â : V x B -> A` as a lookup table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Reconstruction {
    v_size: usize,
    b_size: usize,
    table: Vec<usize>,
}

impl Reconstruction {
    /// `table[v * b_size + b]` is the index of the reconstructed `A` symbol.
    pub fn new(v_size: usize, b_size: usize, a_size: usize, table: Vec<usize>) -> Result<Self> {
        if table.len() != v_size * b_size {
            return Err(invalid(format!(
                "reconstruction table needs {} entries, found {}",
                v_size * b_size,
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&a| a >= a_size) {
            return Err(invalid(format!("reconstruction symbol index {bad} out of range")));
        }
        Ok(Self { v_size, b_size, table })
    }

    /// `Â(v, b) = v` (requires `V` and `A` to share an indexing).
    pub fn copy_v(v_size: usize, b_size: usize) -> Self {
        let table = (0..v_size).flat_map(|v| std::iter::repeat_n(v, b_size)).collect();
        Self { v_size, b_size, table }
    }

    pub fn get(&self, v: usize, b: usize) -> usize {
        self.table[v * self.b_size + b]
    }

    pub fn v_size(&self) -> usize {
        self.v_size
    }

    pub fn b_size(&self) -> usize {
        self.b_size
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }
}

/// Auxiliary channels `p(v|a)`, `p(u|v)` and a reconstruction map.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxScheme<T> {
    v_channel: ConditionalPmf<T>,
    u_channel: ConditionalPmf<T>,
    reconstruction: Reconstruction,
}

/// Largest useful `|U|` and `|V|` for a source alphabet of size `a_size`.
pub fn cardinality_caps(a_size: usize) -> (usize, usize) {
    (a_size + 2, (a_size + 2) * (a_size + 1))
}

impl<T: Real> AuxScheme<T> {
    pub fn new(
        v_channel: ConditionalPmf<T>,
        u_channel: ConditionalPmf<T>,
        reconstruction: Reconstruction,
    ) -> Result<Self> {
        if u_channel.input() != v_channel.output() {
            return Err(Error::AlphabetMismatch(format!(
                "U channel input {} differs from V alphabet {}",
                u_channel.input(),
                v_channel.output()
            )));
        }
        let a = v_channel.input().len();
        let (u_cap, v_cap) = cardinality_caps(a);
        let (nu, nv) = (u_channel.output().len(), v_channel.output().len());
        if nu > u_cap {
            return Err(Error::Cardinality { what: "U", size: nu, cap: u_cap });
        }
        if nv > v_cap {
            return Err(Error::Cardinality { what: "V", size: nv, cap: v_cap });
        }
        if reconstruction.v_size != nv || reconstruction.table.iter().any(|&x| x >= a) {
            return Err(Error::AlphabetMismatch(
                "reconstruction table does not match the V and A alphabets".into(),
            ));
        }
        Ok(Self { v_channel, u_channel, reconstruction })
    }

    /// Scheme with `U` constant.
    pub fn with_constant_u(v_channel: ConditionalPmf<T>, reconstruction: Reconstruction) -> Result<Self> {
        let u = ConditionalPmf::constant(v_channel.output().clone(), Alphabet::singleton(), 0)?;
        Self::new(v_channel, u, reconstruction)
    }

    /// Scheme with `U = V`.
    pub fn with_u_equal_v(v_channel: ConditionalPmf<T>, reconstruction: Reconstruction) -> Result<Self> {
        let u = ConditionalPmf::identity(v_channel.output().clone());
        Self::new(v_channel, u, reconstruction)
    }

    /// Scheme with `V = A`, `Â(v, b) = v`, and the given `U` channel from `A`.
    pub fn lossless(u_channel: ConditionalPmf<T>, b_size: usize) -> Result<Self> {
        let a = u_channel.input().clone();
        let n = a.len();
        Self::new(ConditionalPmf::identity(a), u_channel, Reconstruction::copy_v(n, b_size))
    }

    pub fn v_channel(&self) -> &ConditionalPmf<T> {
        &self.v_channel
    }

    pub fn u_channel(&self) -> &ConditionalPmf<T> {
        &self.u_channel
    }

    pub fn reconstruction(&self) -> &Reconstruction {
        &self.reconstruction
    }
}

/// One `(R, D, Δ)` point: bits/symbol, distortion units, bits/symbol.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdeTuple<T> {
    pub rate: T,
    pub distortion: T,
    pub equivocation: T,
}

impl<T: Real> RdeTuple<T> {
    pub fn max_abs_diff(&self, other: &Self) -> T {
        (self.rate - other.rate)
            .abs()
            .max((self.distortion - other.distortion).abs())
            .max((self.equivocation - other.equivocation).abs())
    }
}

fn check_v_channel<T: Real>(source: &SecureSource<T>, v_channel: &ConditionalPmf<T>) -> Result<()> {
    if v_channel.input() != source.a_alphabet() {
        return Err(Error::AlphabetMismatch(format!(
            "V channel input {} differs from source alphabet {}",
            v_channel.input(),
            source.a_alphabet()
        )));
    }
    Ok(())
}

fn check_reconstruction<T: Real>(source: &SecureSource<T>, r: &Reconstruction) -> Result<()> {
    if r.b_size != source.b_alphabet().len() {
        return Err(Error::AlphabetMismatch(format!(
            "reconstruction covers {} side-information symbols, source has {}",
            r.b_size,
            source.b_alphabet().len()
        )));
    }
    Ok(())
}

/// `E[d(A, Â(V,B))]` from a joint containing `V`, `A`, `B`.
fn expected_distortion<T: Real>(
    source: &SecureSource<T>,
    joint: &JointPmf<T>,
    r: &Reconstruction,
) -> Result<T> {
    let vab = joint.marginal(&["V", "A", "B"])?;
    let (nv, na, nb) = (r.v_size, source.a_alphabet().len(), r.b_size);
    let mut total = T::zero();
    for v in 0..nv {
        for a in 0..na {
            for b in 0..nb {
                let p = vab.mass()[(v * na + a) * nb + b];
                if p > T::zero() {
                    total = total + p * source.distortion(a, r.get(v, b));
                }
            }
        }
    }
    Ok(total)
}

fn clamp_equivocation<T: Real>(source: &SecureSource<T>, raw: T) -> T {
    let h_a = source.joint.entropy(&["A"]).expect("A axis");
    raw.max(T::zero()).min(h_a)
}

/// The tuple certified by `scheme`, computed on the materialized joint
/// `p(u, v, a, b, e)`.
pub fn evaluate_scheme<T: Real>(source: &SecureSource<T>, scheme: &AuxScheme<T>) -> Result<RdeTuple<T>> {
    check_v_channel(source, &scheme.v_channel)?;
    check_reconstruction(source, &scheme.reconstruction)?;
    let joint = source
        .joint
        .extend(&scheme.v_channel, "A", "V")?
        .extend(&scheme.u_channel, "V", "U")?;
    let rate = joint.mutual_information(&["V"], &["A"], &["B"])?;
    let distortion = expected_distortion(source, &joint, &scheme.reconstruction)?;
    let raw = joint.conditional_entropy(&["A"], &["V", "B"])?
        + joint.mutual_information(&["A"], &["B"], &["U"])?
        - joint.mutual_information(&["A"], &["E"], &["U"])?;
    Ok(RdeTuple { rate, distortion, equivocation: clamp_equivocation(source, raw) })
}

/// Distortion-optimal `Â` for a given `V` channel: for each `(v, b)` the
/// symbol minimizing `E[d(A, â) | v, b]`, lowest index on ties, symbol 0 on
/// zero-probability pairs.
pub fn best_reconstruction<T: Real>(
    source: &SecureSource<T>,
    v_channel: &ConditionalPmf<T>,
) -> Result<Reconstruction> {
    check_v_channel(source, v_channel)?;
    let joint = source.joint.extend(v_channel, "A", "V")?;
    let vba = joint.marginal(&["V", "B", "A"])?;
    let (nv, nb, na) = (v_channel.output().len(), source.b_alphabet().len(), source.a_alphabet().len());
    let mut table = Vec::with_capacity(nv * nb);
    for v in 0..nv {
        for b in 0..nb {
            let post = &vba.mass()[(v * nb + b) * na..(v * nb + b + 1) * na];
            table.push(argmin_cost(source, post));
        }
    }
    Reconstruction::new(nv, nb, na, table)
}

/// Index of the symbol minimizing `sum_a post[a] d(a, â)`.
pub(crate) fn argmin_cost<T: Real>(source: &SecureSource<T>, post: &[T]) -> usize {
    if post.iter().all(|&p| p <= T::zero()) {
        return 0;
    }
    let na = post.len();
    let mut best = (0, T::infinity());
    for a_hat in 0..na {
        let cost: T = (0..na).map(|a| post[a] * source.distortion(a, a_hat)).sum();
        if cost < best.1 {
            best = (a_hat, cost);
        }
    }
    best.0
}

/// Lossless case: `V = A`, giving `(H(A|B), E[d(A,A)], [I(A;B|U) - I(A;E|U)]+)`.
pub fn lossless_region_point<T: Real>(
    source: &SecureSource<T>,
    u_channel: &ConditionalPmf<T>,
) -> Result<RdeTuple<T>> {
    check_v_channel(source, u_channel)?;
    let joint = source.joint.extend(u_channel, "A", "U")?;
    let rate = joint.conditional_entropy(&["A"], &["B"])?;
    let a = source.joint.marginal(&["A"])?;
    let distortion = (0..a.mass().len()).map(|i| a.mass()[i] * source.distortion(i, i)).sum();
    let raw = joint.mutual_information(&["A"], &["B"], &["U"])?
        - joint.mutual_information(&["A"], &["E"], &["U"])?;
    Ok(RdeTuple { rate, distortion, equivocation: clamp_equivocation(source, raw) })
}

/// `U` constant: `Δ = [H(A|VB) + I(A;B) - I(A;E)]+`. This is the whole
/// region when Bob's side information is less noisy than Eve's.
pub fn less_noisy_bound<T: Real>(
    source: &SecureSource<T>,
    v_channel: &ConditionalPmf<T>,
    reconstruction: &Reconstruction,
) -> Result<RdeTuple<T>> {
    check_v_channel(source, v_channel)?;
    check_reconstruction(source, reconstruction)?;
    let joint = source.joint.extend(v_channel, "A", "V")?;
    let rate = joint.mutual_information(&["V"], &["A"], &["B"])?;
    let distortion = expected_distortion(source, &joint, reconstruction)?;
    let raw = joint.conditional_entropy(&["A"], &["V", "B"])?
        + joint.mutual_information(&["A"], &["B"], &[])?
        - joint.mutual_information(&["A"], &["E"], &[])?;
    Ok(RdeTuple { rate, distortion, equivocation: clamp_equivocation(source, raw) })
}

/// `U = V`: `Δ = H(A|VE)`. This is the whole region when Eve's side
/// information is less noisy than Bob's.
pub fn eve_less_noisy_bound<T: Real>(
    source: &SecureSource<T>,
    v_channel: &ConditionalPmf<T>,
    reconstruction: &Reconstruction,
) -> Result<RdeTuple<T>> {
    check_v_channel(source, v_channel)?;
    check_reconstruction(source, reconstruction)?;
    let joint = source.joint.extend(v_channel, "A", "V")?;
    let rate = joint.mutual_information(&["V"], &["A"], &["B"])?;
    let distortion = expected_distortion(source, &joint, reconstruction)?;
    let raw = joint.conditional_entropy(&["A"], &["V", "E"])?;
    Ok(RdeTuple { rate, distortion, equivocation: clamp_equivocation(source, raw) })
}

/// Bob without side information (`|B| = 1`).
pub fn no_side_info_point<T: Real>(source: &SecureSource<T>, scheme: &AuxScheme<T>) -> Result<RdeTuple<T>> {
    if source.b_alphabet().len() != 1 {
        return Err(invalid(format!(
            "expected a singleton B alphabet, found {} symbols",
            source.b_alphabet().len()
        )));
    }
    evaluate_scheme(source, scheme)
}
