//! Finite-blocklength Monte-Carlo run of the superposition-binning scheme,
//! with the eavesdropper's equivocation computed exactly by enumerating
//! every source sequence.
//!
//! Per trial: draw a fresh codebook, draw `(aⁿ, bⁿ, eⁿ)` from the source,
//! encode `aⁿ` into a pair of bin indices, decode with `bⁿ`, and compute
//! `(1/n) H(Aⁿ | W = w, Eⁿ = eⁿ)` under that codebook.
//!
//! Trial `i` draws all of its randomness from ChaCha8 seeded with the master
//! seed on stream `i + 1`, so trials are independent of scheduling and
//! of one another.

mod typicality;

pub use typicality::{masks, TypicalSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::info::JointPmf;
use crate::region::{AuxScheme, Reconstruction, SecureSource};
use crate::scalar::neg_xlog2x;

/// Largest number of source sequences `|A|^n` the enumeration will visit.
pub const MAX_ENUMERATION: usize = 1 << 14;
/// Rejection-sampling attempts allowed per codeword.
pub const MAX_ATTEMPTS: usize = 100_000;

/// Codebook rates in bits per symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub s1: f64,
    pub r1: f64,
    pub s2: f64,
    pub r2: f64,
}

impl Rates {
    /// Rates sitting `slack` bits on the achievable side of each of the four
    /// covering/binning constraints `S1 > I(U;A)`, `S1 - R1 < I(U;B)`,
    /// `S2 > I(V;A|U)`, `S2 - R2 < I(V;B|U)`.
    pub fn from_scheme(source: &SecureSource<f64>, scheme: &AuxScheme<f64>, slack: f64) -> Result<Self> {
        let j = full_joint(source, scheme)?;
        let s1 = j.mutual_information(&["U"], &["A"], &[])? + slack;
        let s2 = j.mutual_information(&["V"], &["A"], &["U"])? + slack;
        let r1 = (s1 - j.mutual_information(&["U"], &["B"], &[])? + slack).clamp(0.0, s1);
        let r2 = (s2 - j.mutual_information(&["V"], &["B"], &["U"])? + slack).clamp(0.0, s2);
        Ok(Self { s1, r1, s2, r2 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub n: usize,
    pub typ_tol: f64,
    pub rates: Rates,
    pub trials: usize,
    pub seed: u64,
    /// Upper bound on stored codeword symbols (u-words plus v-words, times n).
    pub max_symbols: usize,
}

impl SimConfig {
    pub const DEFAULT_TYP_TOL: f64 = 0.1;
    pub const DEFAULT_SLACK: f64 = 0.1;
    pub const DEFAULT_MAX_SYMBOLS: usize = 1 << 26;

    pub fn new(n: usize, rates: Rates, trials: usize, seed: u64) -> Self {
        Self {
            n,
            typ_tol: Self::DEFAULT_TYP_TOL,
            rates,
            trials,
            seed,
            max_symbols: Self::DEFAULT_MAX_SYMBOLS,
        }
    }

    fn u_count(&self) -> f64 {
        (self.n as f64 * self.rates.s1).exp2().round().max(1.0)
    }

    fn v_count(&self) -> f64 {
        (self.n as f64 * self.rates.s2).exp2().round().max(1.0)
    }

    fn check(&self, a_size: usize) -> Result<()> {
        let r = &self.rates;
        if self.n == 0 || self.n > 64 {
            return Err(invalid(format!("blocklength must be in 1..=64, got {}", self.n)));
        }
        if !(self.typ_tol > 0.0) {
            return Err(invalid(format!("typicality tolerance must be positive, got {}", self.typ_tol)));
        }
        if !(r.r1 >= 0.0 && r.s1 >= r.r1 && r.r2 >= 0.0 && r.s2 >= r.r2) {
            return Err(invalid(format!("rates must satisfy S1 >= R1 >= 0 and S2 >= R2 >= 0, got {r:?}")));
        }
        let seqs = (a_size as f64).powi(self.n as i32);
        if seqs > MAX_ENUMERATION as f64 {
            return Err(Error::ResourceLimit(format!(
                "{a_size}^{} source sequences exceed the enumeration bound {MAX_ENUMERATION}",
                self.n
            )));
        }
        let symbols = self.u_count() * (1.0 + self.v_count()) * self.n as f64;
        if symbols > self.max_symbols as f64 {
            return Err(Error::ResourceLimit(format!(
                "codebook needs {symbols:.3e} symbols, budget is {}",
                self.max_symbols
            )));
        }
        Ok(())
    }
}

/// Bin indices, zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Message {
    pub r1: usize,
    pub r2: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Encoded {
    pub message: Message,
    /// Selected `(u index, v index)`; `None` on encode failure, in which case
    /// the message is the fallback `(0, 0)`.
    pub choice: Option<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DecodeFailure {
    UStageNone,
    UStageAmbiguous,
    VStageNone,
    VStageAmbiguous,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decoded {
    pub u_index: usize,
    pub v_index: usize,
    pub estimate: Vec<u8>,
}

/// Codewords stored flat; word `i` belongs to bin `i mod bins`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    n: usize,
    u_words: Vec<u8>,
    u_bins: usize,
    v_per_u: usize,
    v_words: Vec<u8>,
    v_bins: usize,
    u_size: usize,
    v_size: usize,
    u_masks: Vec<u64>,
    v_masks: Vec<u64>,
}

impl Codebook {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u_count(&self) -> usize {
        self.u_words.len() / self.n
    }

    pub fn v_count(&self) -> usize {
        self.v_per_u
    }

    pub fn u_bins(&self) -> usize {
        self.u_bins
    }

    pub fn v_bins(&self) -> usize {
        self.v_bins
    }

    pub fn u_word(&self, i: usize) -> &[u8] {
        &self.u_words[i * self.n..(i + 1) * self.n]
    }

    pub fn v_word(&self, u: usize, j: usize) -> &[u8] {
        let k = u * self.v_per_u + j;
        &self.v_words[k * self.n..(k + 1) * self.n]
    }

    fn u_mask(&self, i: usize) -> &[u64] {
        &self.u_masks[i * self.u_size..(i + 1) * self.u_size]
    }

    fn v_mask(&self, u: usize, j: usize) -> &[u64] {
        let k = u * self.v_per_u + j;
        &self.v_masks[k * self.v_size..(k + 1) * self.v_size]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub encode_ok: bool,
    pub decode_ok: bool,
    pub decode_failure: Option<DecodeFailure>,
    pub distortion: f64,
    pub equivocation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub n: usize,
    pub trials: usize,
    pub rates: Rates,
    /// Failed trials count as `d_max`.
    pub mean_distortion: f64,
    pub encode_failure_rate: f64,
    pub decode_failure_rate: f64,
    /// Either stage failed.
    pub failure_rate: f64,
    pub mean_equivocation: f64,
    pub records: Vec<TrialRecord>,
}

impl SimSummary {
    /// One row per trial: `trial,encode_ok,decode_ok,distortion,equivocation`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("trial,encode_ok,decode_ok,distortion,equivocation\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{:.6},{:.6}\n",
                r.trial, r.encode_ok as u8, r.decode_ok as u8, r.distortion, r.equivocation
            ));
        }
        out
    }
}

fn full_joint(source: &SecureSource<f64>, scheme: &AuxScheme<f64>) -> Result<JointPmf<f64>> {
    // evaluate_scheme does the alphabet checks; reuse it rather than duplicate
    crate::region::evaluate_scheme(source, scheme)?;
    source
        .joint()
        .extend(scheme.v_channel(), "A", "V")?
        .extend(scheme.u_channel(), "V", "U")
}

/// The scheme's sampling distributions and typical sets at one tolerance.
#[derive(Debug, Clone)]
pub struct Simulator {
    cfg: SimConfig,
    na: usize,
    nb: usize,
    ne: usize,
    nu: usize,
    nv: usize,
    d_max: f64,
    dist: Vec<f64>,
    recon: Reconstruction,
    /// `p(a, b, e)`.
    abe: WeightedIndex<f64>,
    p_a: Vec<f64>,
    p_e_given_a: Vec<f64>,
    u_dist: WeightedIndex<f64>,
    /// `p(v | u)`; `None` for rows with `p(u) = 0`.
    v_given_u: Vec<Option<WeightedIndex<f64>>>,
    t_u: TypicalSet,
    t_uv: TypicalSet,
    t_ua: TypicalSet,
    t_uva: TypicalSet,
    t_ub: TypicalSet,
    t_uvb: TypicalSet,
}

impl Simulator {
    /// Validates `cfg` (including the resource guards) before anything is
    /// allocated.
    pub fn new(source: &SecureSource<f64>, scheme: &AuxScheme<f64>, cfg: SimConfig) -> Result<Self> {
        let na = source.a_alphabet().len();
        cfg.check(na)?;
        if na > u8::MAX as usize + 1
            || source.b_alphabet().len() > 256
            || scheme.v_channel().output().len() > 256
            || scheme.u_channel().output().len() > 256
        {
            return Err(invalid("alphabets above 256 symbols are not supported by the simulator"));
        }
        let j = full_joint(source, scheme)?;
        let tol = cfg.typ_tol;
        let set = |names: &[&str]| -> Result<TypicalSet> { Ok(TypicalSet::new(&j.marginal(names)?, tol, cfg.n)) };
        let t_u = set(&["U"])?;
        let t_uv = set(&["U", "V"])?;
        let nu = t_u.pmf().len();
        let nv = scheme.v_channel().output().len();
        let v_given_u = (0..nu)
            .map(|u| {
                let pu = t_u.pmf()[u];
                (pu > 0.0).then(|| {
                    WeightedIndex::new(t_uv.pmf()[u * nv..(u + 1) * nv].iter().map(|p| p / pu))
                        .expect("row with positive mass")
                })
            })
            .collect();
        let (nb, ne) = (source.b_alphabet().len(), source.e_alphabet().len());
        let p_a = source.a_marginal().mass().to_vec();
        let ae = source.joint().marginal(&["A", "E"])?;
        let p_e_given_a = (0..na * ne)
            .map(|i| if p_a[i / ne] > 0.0 { ae.mass()[i] / p_a[i / ne] } else { 0.0 })
            .collect();
        Ok(Self {
            na,
            nb,
            ne,
            nu,
            nv,
            d_max: source.d_max(),
            dist: (0..na * na).map(|i| source.distortion(i / na, i % na)).collect(),
            recon: scheme.reconstruction().clone(),
            abe: WeightedIndex::new(source.joint().mass()).expect("valid pmf"),
            p_a,
            p_e_given_a,
            u_dist: WeightedIndex::new(t_u.pmf()).expect("valid pmf"),
            v_given_u,
            t_ua: set(&["U", "A"])?,
            t_uva: set(&["U", "V", "A"])?,
            t_ub: set(&["U", "B"])?,
            t_uvb: set(&["U", "V", "B"])?,
            t_u,
            t_uv,
            cfg,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    /// Deterministic generator of trial `trial`.
    pub fn trial_rng(&self, trial: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(trial as u64 + 1);
        rng
    }

    /// `round(2^{nS1})` typical u-words and, under each, `round(2^{nS2})`
    /// v-words conditionally typical with it.
    pub fn generate_codebook(&self, rng: &mut ChaCha8Rng) -> Result<Codebook> {
        let n = self.cfg.n;
        let u_count = self.cfg.u_count() as usize;
        let v_per_u = self.cfg.v_count() as usize;
        let u_bins = ((n as f64 * self.cfg.rates.r1).exp2().round() as usize).clamp(1, u_count);
        let v_bins = ((n as f64 * self.cfg.rates.r2).exp2().round() as usize).clamp(1, v_per_u);
        let mut u_words = Vec::with_capacity(u_count * n);
        let mut v_words = Vec::with_capacity(u_count * v_per_u * n);
        let mut u = vec![0u8; n];
        let mut v = vec![0u8; n];
        for _ in 0..u_count {
            let mut attempts = 0;
            loop {
                attempts += 1;
                if attempts > MAX_ATTEMPTS {
                    return Err(Error::Degenerate(format!(
                        "no typical u-word of length {n} after {MAX_ATTEMPTS} draws"
                    )));
                }
                u.iter_mut().for_each(|x| *x = self.u_dist.sample(rng) as u8);
                if self.t_u.contains(&[&u]) {
                    break;
                }
            }
            u_words.extend_from_slice(&u);
            for _ in 0..v_per_u {
                let mut attempts = 0;
                loop {
                    attempts += 1;
                    if attempts > MAX_ATTEMPTS {
                        return Err(Error::Degenerate(format!(
                            "no conditionally typical v-word of length {n} after {MAX_ATTEMPTS} draws"
                        )));
                    }
                    for (vi, &ui) in v.iter_mut().zip(&u) {
                        let row = self.v_given_u[ui as usize].as_ref().expect("sampled u has mass");
                        *vi = row.sample(rng) as u8;
                    }
                    if self.t_uv.contains(&[&u, &v]) {
                        break;
                    }
                }
                v_words.extend_from_slice(&v);
            }
        }
        let u_masks = u_words.chunks(n).flat_map(|w| masks(w, self.nu)).collect();
        let v_masks = v_words.chunks(n).flat_map(|w| masks(w, self.nv)).collect();
        Ok(Codebook {
            n,
            u_words,
            u_bins,
            v_per_u,
            v_words,
            v_bins,
            u_size: self.nu,
            v_size: self.nv,
            u_masks,
            v_masks,
        })
    }

    /// Lowest-index u-word jointly typical with `a`, then the lowest-index
    /// v-word under it jointly typical with both.
    pub fn encode(&self, book: &Codebook, a: &[u8]) -> Encoded {
        self.encode_masks(book, &masks(a, self.na))
    }

    fn encode_masks(&self, book: &Codebook, a: &[u64]) -> Encoded {
        for i in 0..book.u_count() {
            let u = book.u_mask(i);
            if !self.t_ua.contains_masks(&[u, a]) {
                continue;
            }
            for k in 0..book.v_per_u {
                if self.t_uva.contains_masks(&[u, book.v_mask(i, k), a]) {
                    return Encoded {
                        message: Message { r1: i % book.u_bins, r2: k % book.v_bins },
                        choice: Some((i, k)),
                    };
                }
            }
        }
        Encoded { message: Message { r1: 0, r2: 0 }, choice: None }
    }

    /// Unique bin member typical with `b` at each stage, then letterwise
    /// reconstruction `Â(v_i, b_i)`.
    pub fn decode(&self, book: &Codebook, msg: Message, b: &[u8]) -> std::result::Result<Decoded, DecodeFailure> {
        let bm = masks(b, self.nb);
        let unique = |mut it: Box<dyn Iterator<Item = usize> + '_>, none, many| match (it.next(), it.next()) {
            (None, _) => Err(none),
            (Some(x), None) => Ok(x),
            _ => Err(many),
        };
        let ui = unique(
            Box::new(
                (msg.r1..book.u_count())
                    .step_by(book.u_bins)
                    .filter(|&i| self.t_ub.contains_masks(&[book.u_mask(i), &bm])),
            ),
            DecodeFailure::UStageNone,
            DecodeFailure::UStageAmbiguous,
        )?;
        let u = book.u_mask(ui);
        let vi = unique(
            Box::new(
                (msg.r2..book.v_per_u)
                    .step_by(book.v_bins)
                    .filter(|&k| self.t_uvb.contains_masks(&[u, book.v_mask(ui, k), &bm])),
            ),
            DecodeFailure::VStageNone,
            DecodeFailure::VStageAmbiguous,
        )?;
        let v = book.v_word(ui, vi);
        let estimate = v.iter().zip(b).map(|(&v, &b)| self.recon.get(v as usize, b as usize) as u8).collect();
        Ok(Decoded { u_index: ui, v_index: vi, estimate })
    }

    /// Every source sequence in lexicographic order (first letter most
    /// significant) with its probability.
    fn sequences(&self) -> impl Iterator<Item = (Vec<u8>, f64)> + '_ {
        let n = self.cfg.n;
        let total = self.na.pow(n as u32);
        (0..total).map(move |mut idx| {
            let mut seq = vec![0u8; n];
            for s in seq.iter_mut().rev() {
                *s = (idx % self.na) as u8;
                idx /= self.na;
            }
            let p = seq.iter().map(|&a| self.p_a[a as usize]).product();
            (seq, p)
        })
    }

    /// The encoder's message for every source sequence, in [`Self::sequences`] order.
    pub fn encoding_map(&self, book: &Codebook) -> Vec<Message> {
        self.sequences().map(|(a, _)| self.encode_masks(book, &masks(&a, self.na)).message).collect()
    }

    /// `(1/n) H(Aⁿ | W = w, Eⁿ = eⁿ)` for a precomputed encoding map.
    pub fn exact_equivocation(&self, map: &[Message], w: Message, e: &[u8]) -> Result<f64> {
        if e.len() != self.cfg.n || e.iter().any(|&x| x as usize >= self.ne) {
            return Err(invalid("eavesdropper sequence has the wrong length or symbols"));
        }
        let weights: Vec<f64> = self
            .sequences()
            .zip(map)
            .filter(|(_, m)| **m == w)
            .map(|((a, pa), _)| {
                pa * a
                    .iter()
                    .zip(e)
                    .map(|(&a, &e)| self.p_e_given_a[a as usize * self.ne + e as usize])
                    .product::<f64>()
            })
            .filter(|&x| x > 0.0)
            .collect();
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(invalid(format!("message {w:?} with the given eavesdropper sequence has probability zero")));
        }
        let h: f64 = weights.iter().map(|&x| neg_xlog2x(x / total)).sum();
        Ok(h / self.cfg.n as f64)
    }

    /// `H(W)` in bits when `Aⁿ` is drawn from the source.
    pub fn message_entropy(&self, map: &[Message]) -> f64 {
        let mut mass = std::collections::HashMap::new();
        for ((_, p), m) in self.sequences().zip(map) {
            *mass.entry(*m).or_insert(0.0) += p;
        }
        let mut ps: Vec<(Message, f64)> = mass.into_iter().collect();
        ps.sort_by_key(|(m, _)| (m.r1, m.r2));
        ps.iter().map(|&(_, p)| neg_xlog2x(p)).sum()
    }

    pub fn run_trial(&self, trial: usize) -> Result<TrialRecord> {
        let n = self.cfg.n;
        let mut rng = self.trial_rng(trial);
        let book = self.generate_codebook(&mut rng)?;
        let (mut a, mut b, mut e) = (vec![0u8; n], vec![0u8; n], vec![0u8; n]);
        for i in 0..n {
            let idx = self.abe.sample(&mut rng);
            a[i] = (idx / (self.nb * self.ne)) as u8;
            b[i] = ((idx / self.ne) % self.nb) as u8;
            e[i] = (idx % self.ne) as u8;
        }
        let enc = self.encode(&book, &a);
        let dec = self.decode(&book, enc.message, &b);
        let decode_failure = dec.as_ref().err().copied();
        let decode_ok = match (&dec, enc.choice) {
            (Ok(d), Some(c)) => (d.u_index, d.v_index) == c,
            _ => false,
        };
        let distortion = match &dec {
            Ok(d) if decode_ok => {
                a.iter().zip(&d.estimate).map(|(&x, &y)| self.dist[x as usize * self.na + y as usize]).sum::<f64>()
                    / n as f64
            }
            _ => self.d_max,
        };
        let map = self.encoding_map(&book);
        let equivocation = self.exact_equivocation(&map, enc.message, &e)?;
        Ok(TrialRecord { trial, encode_ok: enc.choice.is_some(), decode_ok, decode_failure, distortion, equivocation })
    }

    /// All trials, in parallel; the summary does not depend on scheduling.
    pub fn run_trials(&self) -> Result<SimSummary> {
        let records = (0..self.cfg.trials)
            .into_par_iter()
            .map(|t| self.run_trial(t))
            .collect::<Result<Vec<_>>>()?;
        let count = records.len();
        let mean = |f: &dyn Fn(&TrialRecord) -> f64| {
            if count == 0 {
                0.0
            } else {
                records.iter().map(f).sum::<f64>() / count as f64
            }
        };
        Ok(SimSummary {
            n: self.cfg.n,
            trials: count,
            rates: self.cfg.rates,
            mean_distortion: mean(&|r| r.distortion),
            encode_failure_rate: mean(&|r| (!r.encode_ok) as u8 as f64),
            decode_failure_rate: mean(&|r| (r.encode_ok && !r.decode_ok) as u8 as f64),
            failure_rate: mean(&|r| (!(r.encode_ok && r.decode_ok)) as u8 as f64),
            mean_equivocation: mean(&|r| r.equivocation),
            records,
        })
    }
}

/// Convenience wrapper: build the simulator and run every trial.
pub fn run_trials(source: &SecureSource<f64>, scheme: &AuxScheme<f64>, cfg: SimConfig) -> Result<SimSummary> {
    Simulator::new(source, scheme, cfg)?.run_trials()
}
