//! Uniform binary source with an erasure channel to Bob and a binary
//! symmetric channel to Eve, Hamming distortion.
//!
//! With auxiliaries `V = BSC(alpha)(A)` and `U = BSC(beta)(V)` the region
//! has the closed form
//!
//! ```text
//! R >= eps (1 - h2(alpha))
//! D >= eps alpha
//! Δ <= [eps h2(alpha) + (1 - eps) h2(alpha * beta) - h2(p * alpha * beta) + h2(p)]+
//! ```
//!
//! `R` and `D` depend on `alpha` only, so `beta` is the only secrecy knob
//! once the rate or distortion constraint fixes `alpha`.

use std::fmt::Write as _;

use crate::error::{invalid, Result};
use crate::info::{h2, inverse_binary_entropy, star, Alphabet, ConditionalPmf, JointPmf};
use crate::region::{evaluate_scheme, AuxScheme, RdeTuple, Reconstruction, SecureSource};
use crate::scalar::Real;

/// Points in the coarse scan over `beta`.
pub const BETA_SCAN_POINTS: usize = 512;
/// Golden-section tolerance in `beta`.
pub const BETA_TOL: f64 = 1e-7;
/// Default number of distortion points for the equivocation curve.
pub const CURVE_POINTS: usize = 200;

/// Eve's BSC crossover `p` and Bob's BEC erasure probability `eps`.
///
/// `eps` is accepted on all of `[0, 1]`: the interesting regime where Eve's
/// side information is the stronger one needs `eps > h2(p)`, which can
/// exceed 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BecBscParams<T = f64> {
    pub p: T,
    pub eps: T,
}

impl<T: Real> BecBscParams<T> {
    pub fn new(p: T, eps: T) -> Result<Self> {
        if p.is_nan() || p < T::zero() || p > T::lit(0.5) {
            return Err(invalid(format!("p = {p} outside [0, 1/2]")));
        }
        if eps.is_nan() || eps < T::zero() || eps > T::one() {
            return Err(invalid(format!("eps = {eps} outside [0, 1]")));
        }
        Ok(Self { p, eps })
    }
}

/// BSC parameters of the auxiliary chain `A -> V -> U`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryScheme<T = f64> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> BinaryScheme<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let half = T::lit(0.5);
        for (name, x) in [("alpha", alpha), ("beta", beta)] {
            if x.is_nan() || x < T::zero() || x > half {
                return Err(invalid(format!("{name} = {x} outside [0, 1/2]")));
            }
        }
        Ok(Self { alpha, beta })
    }
}

/// The source: uniform `A`, `B = BEC(eps)(A)` over `{0, e, 1}`,
/// `E = BSC(p)(A)`, conditionally independent given `A`, Hamming distortion.
pub fn build_source<T: Real>(params: &BecBscParams<T>) -> SecureSource<T> {
    let a = JointPmf::uniform("A", Alphabet::binary()).expect("binary alphabet");
    let joint = a
        .extend(&ConditionalPmf::bec(params.eps).expect("validated"), "A", "B")
        .and_then(|j| j.extend(&ConditionalPmf::bsc(params.p).expect("validated"), "A", "E"))
        .expect("fresh axes");
    SecureSource::with_hamming(joint).expect("A, B, E axes")
}

/// `V = BSC(alpha)(A)`, `U = BSC(beta)(V)`, and Bob keeps his own symbol
/// unless it is erased, in which case he uses `v`.
pub fn fig4_scheme<T: Real>(scheme: &BinaryScheme<T>) -> AuxScheme<T> {
    let v = ConditionalPmf::bsc(scheme.alpha).expect("validated");
    let u = ConditionalPmf::bsc(scheme.beta).expect("validated");
    // B symbols are ordered 0, e, 1.
    let table = vec![0, 0, 1, 0, 1, 1];
    let r = Reconstruction::new(2, 3, 2, table).expect("binary table");
    AuxScheme::new(v, u, r).expect("binary scheme fits the caps")
}

fn delta<T: Real>(p: T, eps: T, alpha: T, beta: T) -> T {
    let ab = star(alpha, beta);
    (eps * h2(alpha) + (T::one() - eps) * h2(ab) - h2(star(p, ab)) + h2(p)).max(T::zero())
}

/// The closed-form tuple for `scheme` on the binary source.
pub fn closed_form<T: Real>(params: &BecBscParams<T>, scheme: &BinaryScheme<T>) -> RdeTuple<T> {
    let (p, eps, alpha, beta) = (params.p, params.eps, scheme.alpha, scheme.beta);
    RdeTuple {
        rate: eps * (T::one() - h2(alpha)),
        distortion: eps * alpha,
        equivocation: delta(p, eps, alpha, beta),
    }
}

/// Largest componentwise gap between the closed form and the general
/// evaluator applied to [`fig4_scheme`].
pub fn oracle_check<T: Real>(params: &BecBscParams<T>, scheme: &BinaryScheme<T>) -> Result<T> {
    let general = evaluate_scheme(&build_source(params), &fig4_scheme(scheme))?;
    Ok(general.max_abs_diff(&closed_form(params, scheme)))
}

/// `argmax_beta Δ` for fixed `alpha`: 512-point scan, golden-section
/// refinement around the best scan point, ties to the smaller `beta`.
pub fn optimize_beta(params: &BecBscParams, alpha: f64) -> (f64, f64) {
    let f = |b: f64| delta(params.p, params.eps, alpha, b);
    let n = BETA_SCAN_POINTS;
    let grid = |i: usize| 0.5 * i as f64 / (n - 1) as f64;
    let mut best = (0.0, f(0.0));
    let mut best_i = 0;
    for i in 1..n {
        let b = grid(i);
        let v = f(b);
        if v > best.1 {
            best = (b, v);
            best_i = i;
        }
    }
    let lo = grid(best_i.saturating_sub(1));
    let hi = grid((best_i + 1).min(n - 1));
    let g = golden_max(f, lo, hi, BETA_TOL);
    let gv = f(g);
    if gv > best.1 {
        best = (g, gv);
    }
    best
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub d: f64,
    /// Best over `beta`.
    pub delta_general: f64,
    /// `beta = 0`: plain Wyner-Ziv coding.
    pub delta_wz: f64,
    pub alpha: f64,
    pub beta_opt: f64,
}

/// Equivocation against distortion with `alpha = D / eps`.
pub fn sweep_fig5(params: &BecBscParams, distortions: &[f64]) -> Result<Vec<CurvePoint>> {
    let d_top = params.eps / 2.0;
    distortions
        .iter()
        .map(|&d| {
            if d.is_nan() || d < 0.0 || d > d_top + 1e-15 {
                return Err(invalid(format!("distortion {d} outside [0, eps/2 = {d_top}]")));
            }
            let alpha = if params.eps > 0.0 { (d / params.eps).min(0.5) } else { 0.0 };
            let (beta_opt, delta_general) = optimize_beta(params, alpha);
            Ok(CurvePoint {
                d,
                delta_general,
                delta_wz: delta(params.p, params.eps, alpha, 0.0),
                alpha,
                beta_opt,
            })
        })
        .collect()
}

/// `points` distortions evenly spaced on `[0, eps/2]`.
pub fn curve_grid(params: &BecBscParams, points: usize) -> Vec<f64> {
    let top = params.eps / 2.0;
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| top * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Smallest distortion on the curve at which `beta = 0` is optimal.
pub fn wyner_ziv_threshold(curve: &[CurvePoint]) -> Option<f64> {
    curve.iter().find(|c| c.beta_opt == 0.0).map(|c| c.d)
}

pub fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("D,delta_general,delta_wz,alpha,beta_opt\n");
    for c in curve {
        let _ = writeln!(
            out,
            "{:.6},{:.6},{:.6},{:.6},{:.6}",
            c.d, c.delta_general, c.delta_wz, c.alpha, c.beta_opt
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableColumn {
    pub label: &'static str,
    pub tuple: RdeTuple<f64>,
    pub alpha: f64,
    pub beta: f64,
}

/// Lossless secure, Slepian-Wolf, lossy secure and Wyner-Ziv columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1 {
    pub columns: Vec<TableColumn>,
}

/// Builds the four columns. The lossy columns spend `budget_fraction` of the
/// lossless rate `eps`; `alpha` solves `eps (1 - h2(alpha)) = budget`.
pub fn table1(params: &BecBscParams, budget_fraction: f64) -> Result<Table1> {
    if !(0.0..=1.0).contains(&budget_fraction) {
        return Err(invalid(format!("rate budget fraction {budget_fraction} outside [0, 1]")));
    }
    let lossy_alpha: f64 = inverse_binary_entropy(1.0 - budget_fraction)?;
    let column = |label, alpha: f64, beta: Option<f64>| {
        let beta = beta.unwrap_or_else(|| optimize_beta(params, alpha).0);
        let scheme = BinaryScheme { alpha, beta };
        TableColumn { label, tuple: closed_form(params, &scheme), alpha, beta }
    };
    Ok(Table1 {
        columns: vec![
            column("Lossless secure source coding", 0.0, None),
            column("Slepian-Wolf", 0.0, Some(0.0)),
            column("Lossy secure source coding", lossy_alpha, None),
            column("Wyner-Ziv", lossy_alpha, Some(0.0)),
        ],
    })
}

impl Table1 {
    /// Aligned text, three decimals.
    pub fn to_text(&self) -> String {
        let width = self.columns.iter().map(|c| c.label.len()).max().unwrap_or(0);
        let mut out = format!("{:<28}", "");
        for c in &self.columns {
            let _ = write!(out, " | {:>width$}", c.label);
        }
        out.push('\n');
        let rows: [(&str, fn(&TableColumn) -> f64); 5] = [
            ("Rate R", |c| c.tuple.rate),
            ("Distortion D", |c| c.tuple.distortion),
            ("Equivocation rate Delta", |c| c.tuple.equivocation),
            ("alpha", |c| c.alpha),
            ("beta", |c| c.beta),
        ];
        for (name, get) in rows {
            let _ = write!(out, "{name:<28}");
            for c in &self.columns {
                let _ = write!(out, " | {:>width$.3}", get(c));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("column,R,D,Delta,alpha,beta\n");
        for c in &self.columns {
            let _ = writeln!(
                out,
                "{},{:.6},{:.6},{:.6},{:.6},{:.6}",
                c.label, c.tuple.rate, c.tuple.distortion, c.tuple.equivocation, c.alpha, c.beta
            );
        }
        out
    }
}
