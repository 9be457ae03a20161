//! Orderings between Bob's and Eve's side-information channels: stochastic
//! degradedness, less noisy, more capable.
//!
//! Each relation implies the next one in that list, per direction. For the
//! erasure/symmetric pair `B = BEC(eps)(A)`, `E = BSC(p)(A)` the Bob-over-Eve
//! thresholds are `eps <= 2p`, `eps <= 4p(1-p)` and `eps <= h2(p)`.

mod lp;

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::binary::BecBscParams;
use crate::error::{invalid, Error, Result};
use crate::info::{h2, Alphabet, ConditionalPmf};
use crate::region::SecureSource;

/// Equality tolerance of the degradedness LP and the information comparisons.
pub const ORDER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LessNoisy {
    Yes,
    No,
    Unknown,
}

impl LessNoisy {
    fn as_str(self) -> &'static str {
        match self {
            LessNoisy::Yes => "yes",
            LessNoisy::No => "no",
            LessNoisy::Unknown => "unknown",
        }
    }
}

/// Relations holding in one direction ("first over second").
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DirectionVerdict {
    degraded: bool,
    less_noisy: LessNoisy,
    more_capable: bool,
}

impl DirectionVerdict {
    /// Rejects combinations that break degraded => less noisy => more capable.
    pub fn new(degraded: bool, less_noisy: LessNoisy, more_capable: bool) -> Result<Self> {
        if degraded && less_noisy != LessNoisy::Yes {
            return Err(invalid("degraded side information must be less noisy"));
        }
        if less_noisy == LessNoisy::Yes && !more_capable {
            return Err(invalid("less noisy side information must be more capable"));
        }
        Ok(Self { degraded, less_noisy, more_capable })
    }

    pub fn degraded(&self) -> bool {
        self.degraded
    }

    pub fn less_noisy(&self) -> LessNoisy {
        self.less_noisy
    }

    pub fn more_capable(&self) -> bool {
        self.more_capable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderingVerdict {
    /// Bob's side information over Eve's (Eve is the degraded/weaker one).
    pub bob_over_eve: DirectionVerdict,
    pub eve_over_bob: DirectionVerdict,
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

impl fmt::Display for OrderingVerdict {
    /// Flat `key=value` record; `_rev` keys are the Eve-over-Bob direction.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = (&self.bob_over_eve, &self.eve_over_bob);
        write!(
            f,
            "degraded={} less_noisy={} more_capable={} degraded_rev={} less_noisy_rev={} more_capable_rev={}",
            yes_no(a.degraded),
            a.less_noisy.as_str(),
            yes_no(a.more_capable),
            yes_no(b.degraded),
            b.less_noisy.as_str(),
            yes_no(b.more_capable)
        )
    }
}

/// Is `second` a stochastically degraded version of `first`? Solves for a
/// row-stochastic `q(e|b)` with `p(e|a) = sum_b p(b|a) q(e|b)` and returns it
/// as the witness.
pub fn is_degraded(
    first: &ConditionalPmf<f64>,
    second: &ConditionalPmf<f64>,
) -> Result<Option<ConditionalPmf<f64>>> {
    if first.input() != second.input() {
        return Err(Error::AlphabetMismatch(format!(
            "channels read different inputs: {} vs {}",
            first.input(),
            second.input()
        )));
    }
    let (na, nb, ne) = (first.input().len(), first.output().len(), second.output().len());
    let cols = nb * ne;
    let var = |b: usize, e: usize| b * ne + e;
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for x in 0..na {
        for e in 0..ne {
            let mut row = vec![0.0; cols];
            for b in 0..nb {
                row[var(b, e)] = first.prob(x, b);
            }
            a.extend(row);
            rhs.push(second.prob(x, e));
        }
    }
    for b in 0..nb {
        let mut row = vec![0.0; cols];
        for e in 0..ne {
            row[var(b, e)] = 1.0;
        }
        a.extend(row);
        rhs.push(1.0);
    }
    let Some(q) = lp::feasible_point(&a, &rhs, cols, ORDER_TOL) else {
        return Ok(None);
    };
    // Renormalize rows to absorb pivoting round-off.
    let mut q = q;
    for b in 0..nb {
        let s: f64 = q[b * ne..(b + 1) * ne].iter().sum();
        if s > 0.0 {
            q[b * ne..(b + 1) * ne].iter_mut().for_each(|x| *x /= s);
        }
    }
    let witness = ConditionalPmf::new(first.output().clone(), second.output().clone(), q)?;
    let check = first.compose(&witness)?;
    Ok((check.max_abs_diff(second).expect("same shape") <= ORDER_TOL).then_some(witness))
}

/// `(I(A;B) >= I(A;E), I(A;E) >= I(A;B))` with tolerance; ties are yes both
/// ways.
pub fn is_more_capable(source: &SecureSource<f64>) -> (bool, bool) {
    let j = source.joint();
    let ib = j.mutual_information(&["A"], &["B"], &[]).expect("axes exist");
    let ie = j.mutual_information(&["A"], &["E"], &[]).expect("axes exist");
    (ib >= ie - ORDER_TOL, ie >= ib - ORDER_TOL)
}

/// Exact verdict for the erasure/symmetric pair.
///
/// Bob over Eve: degraded iff `eps <= 2p`, less noisy iff `eps <= 4p(1-p)`,
/// more capable iff `eps <= h2(p)`. Eve over Bob: degraded only when Eve is
/// noiseless or Bob's channel erases everything; less noisy and more capable
/// iff `eps >= h2(p)`.
pub fn classify_bec_bsc(params: &BecBscParams) -> OrderingVerdict {
    let (p, eps) = (params.p, params.eps);
    let fwd_ln = eps <= 4.0 * p * (1.0 - p);
    let bob_over_eve = DirectionVerdict::new(
        eps <= 2.0 * p,
        if fwd_ln { LessNoisy::Yes } else { LessNoisy::No },
        eps <= h2(p),
    )
    .expect("nested thresholds");
    let rev = eps >= h2(p);
    let eve_over_bob = DirectionVerdict::new(
        p == 0.0 || eps == 1.0,
        if rev { LessNoisy::Yes } else { LessNoisy::No },
        rev,
    )
    .expect("nested thresholds");
    OrderingVerdict { bob_over_eve, eve_over_bob }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    BobOverEve,
    EveOverBob,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LessNoisyGrid {
    /// Lattice resolution for each row of `p(u|a)`.
    pub resolution: usize,
    /// Above this many lattice channels, sample this many at random instead.
    pub max_evals: usize,
    pub seed: u64,
}

impl Default for LessNoisyGrid {
    fn default() -> Self {
        Self { resolution: 10, max_evals: 200_000, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LessNoisyEvidence {
    /// Every channel tried satisfied the inequality; evidence, not proof.
    NoViolation { resolution: usize, evaluated: usize, min_gap: f64 },
    /// A `p(u|a)` with `I(U;first) < I(U;second) - tol`.
    Counterexample { channel: ConditionalPmf<f64>, gap: f64 },
    /// Nothing was evaluated.
    Unknown,
}

/// All compositions of `total` into `parts` nonnegative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Looks for an auxiliary `U` (with `|U| = |A| + 1`) violating
/// `I(U;first) >= I(U;second)`.
pub fn less_noisy_search(
    source: &SecureSource<f64>,
    direction: Direction,
    grid: &LessNoisyGrid,
) -> LessNoisyEvidence {
    let na = source.a_alphabet().len();
    let nu = na + 1;
    if grid.resolution == 0 || grid.max_evals == 0 {
        return LessNoisyEvidence::Unknown;
    }
    let rows = compositions(grid.resolution, nu);
    let total = (rows.len() as f64).powi(na as i32);
    let res = grid.resolution as f64;
    let channels: Vec<Vec<f64>> = if total <= grid.max_evals as f64 {
        let count = rows.len().pow(na as u32);
        (0..count)
            .map(|mut idx| {
                let mut m = Vec::with_capacity(na * nu);
                for _ in 0..na {
                    m.extend(rows[idx % rows.len()].iter().map(|&k| k as f64 / res));
                    idx /= rows.len();
                }
                m
            })
            .collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(grid.seed);
        (0..grid.max_evals)
            .map(|_| {
                let mut m: Vec<f64> =
                    (0..na * nu).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
                for r in m.chunks_mut(nu) {
                    let s: f64 = r.iter().sum();
                    r.iter_mut().for_each(|x| *x /= s);
                }
                m
            })
            .collect()
    };
    let (first, second) = match direction {
        Direction::BobOverEve => ("B", "E"),
        Direction::EveOverBob => ("E", "B"),
    };
    let u_alpha = Alphabet::labeled("u", nu).expect("nonempty");
    let gaps: Vec<f64> = channels
        .par_iter()
        .map(|m| {
            let ch = ConditionalPmf::new(source.a_alphabet().clone(), u_alpha.clone(), m.clone())
                .expect("lattice rows are stochastic");
            let j = source.joint().extend(&ch, "A", "U").expect("fresh axis");
            j.mutual_information(&["U"], &[first], &[]).unwrap()
                - j.mutual_information(&["U"], &[second], &[]).unwrap()
        })
        .collect();
    let (worst, min_gap) = gaps
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &g)| if g < acc.1 { (i, g) } else { acc });
    if min_gap < -ORDER_TOL {
        let channel =
            ConditionalPmf::new(source.a_alphabet().clone(), u_alpha, channels[worst].clone())
                .expect("stochastic");
        LessNoisyEvidence::Counterexample { channel, gap: min_gap }
    } else {
        LessNoisyEvidence::NoViolation { resolution: grid.resolution, evaluated: gaps.len(), min_gap }
    }
}

/// Verdict for an arbitrary source: the LP settles degradedness, direct
/// computation settles more-capable, and less-noisy is inferred from those
/// when possible and otherwise searched.
pub fn classify_source(source: &SecureSource<f64>, grid: &LessNoisyGrid) -> Result<OrderingVerdict> {
    let (bob, eve) = (source.bob_channel(), source.eve_channel());
    let (mc_fwd, mc_rev) = is_more_capable(source);
    let deg_fwd = is_degraded(&bob, &eve)?.is_some();
    let deg_rev = is_degraded(&eve, &bob)?.is_some();
    let ln = |degraded: bool, more_capable: bool, dir| {
        if degraded {
            LessNoisy::Yes
        } else if !more_capable {
            LessNoisy::No
        } else {
            match less_noisy_search(source, dir, grid) {
                LessNoisyEvidence::Counterexample { .. } => LessNoisy::No,
                _ => LessNoisy::Unknown,
            }
        }
    };
    Ok(OrderingVerdict {
        bob_over_eve: DirectionVerdict::new(deg_fwd, ln(deg_fwd, mc_fwd, Direction::BobOverEve), mc_fwd)?,
        eve_over_bob: DirectionVerdict::new(deg_rev, ln(deg_rev, mc_rev, Direction::EveOverBob), mc_rev)?,
    })
}
