//! Inner-bound search for boundary points of the region.
//!
//! For each distortion target the search evaluates a family of seed schemes
//! at the cardinality caps, then refines the best few by coordinate moves
//! (shifting mass between two entries of one channel row) with step halving.
//! A move that leaves the feasible set is shortened by bisection to the
//! constraint boundary. Targets are processed in increasing order and each
//! one is warm-started from the previous winner, so the objective is
//! monotone along the curve.
//!
//! Every reported tuple is `evaluate_scheme` of the stored scheme.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::info::{text::write_toml, Alphabet, ConditionalPmf};
use crate::region::fast::{FastEval, FastSource};
use crate::region::text::SchemeDoc;
use crate::region::{
    best_reconstruction, cardinality_caps, evaluate_scheme, AuxScheme, RdeTuple, SecureSource,
};

const FEASIBLE_TOL: f64 = 1e-12;
const IMPROVE_TOL: f64 = 1e-12;
const BISECT_STEPS: usize = 14;
const MAX_PASSES: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// With a budget: maximize `Δ` subject to `R <= budget`, ties to lower
    /// `R`. Without: minimize `R`, ties to higher `Δ`.
    pub rate_budget: Option<f64>,
    /// Points per seed parameter in the coarse stage.
    pub grid: usize,
    pub refine_rounds: usize,
    /// Initial coordinate step of the refinement.
    pub initial_step: f64,
    /// How many of the best seeds get refined.
    pub refine_top: usize,
    pub random_starts: usize,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            rate_budget: None,
            grid: 17,
            refine_rounds: 3,
            initial_step: 0.1,
            refine_top: 4,
            random_starts: 8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPoint {
    /// Distortion budget this point was searched at.
    pub target_distortion: f64,
    pub tuple: RdeTuple<f64>,
    pub scheme: AuxScheme<f64>,
    /// Index of the first point on the curve carrying an identical scheme.
    pub scheme_id: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCurve {
    pub points: Vec<BoundaryPoint>,
    pub grid_resolution: usize,
    pub refine_rounds: usize,
    pub rate_budget: Option<f64>,
    /// Targets where no scheme met the rate budget; they have no point.
    pub infeasible: Vec<f64>,
}

impl BoundaryCurve {
    /// CSV with header `D,R,Delta,scheme_id`, one row per target distortion.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("D,R,Delta,scheme_id\n");
        for p in &self.points {
            out.push_str(&format!(
                "{:.6},{:.6},{:.6},{}\n",
                p.target_distortion, p.tuple.rate, p.tuple.equivocation, p.scheme_id
            ));
        }
        out
    }

    /// Distinct schemes in TOML, as `[[scheme]]` tables keyed by `id`.
    pub fn schemes_toml(&self) -> String {
        #[derive(serde::Serialize)]
        struct Entry {
            id: usize,
            #[serde(flatten)]
            scheme: SchemeDoc,
        }
        #[derive(serde::Serialize)]
        struct Doc {
            scheme: Vec<Entry>,
        }
        let scheme = self
            .points
            .iter()
            .enumerate()
            .filter(|(i, p)| p.scheme_id == *i)
            .map(|(i, p)| Entry { id: i, scheme: SchemeDoc::of(&p.scheme) })
            .collect();
        write_toml(&Doc { scheme })
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Candidate {
    v: Vec<f64>,
    u: Vec<f64>,
}

#[derive(Clone, Copy)]
struct Objective {
    target: f64,
    budget: Option<f64>,
}

impl Objective {
    fn feasible(&self, e: &FastEval) -> bool {
        e.distortion <= self.target + FEASIBLE_TOL
            && self.budget.is_none_or(|b| e.rate <= b + FEASIBLE_TOL)
    }

    /// Strict improvement of `a` over `b` (both feasible).
    fn better(&self, a: &FastEval, b: &FastEval) -> bool {
        match self.budget {
            Some(_) => {
                a.equivocation > b.equivocation + IMPROVE_TOL
                    || ((a.equivocation - b.equivocation).abs() <= IMPROVE_TOL
                        && a.rate < b.rate - IMPROVE_TOL)
            }
            None => {
                a.rate < b.rate - IMPROVE_TOL
                    || ((a.rate - b.rate).abs() <= IMPROVE_TOL
                        && a.equivocation > b.equivocation + IMPROVE_TOL)
            }
        }
    }
}

struct Searcher<'a> {
    fast: FastSource,
    nv: usize,
    nu: usize,
    cfg: &'a SearchConfig,
}

impl Searcher<'_> {
    fn eval(&self, c: &Candidate) -> FastEval {
        self.fast.evaluate(&c.v, self.nv, &c.u, self.nu)
    }

    /// `(1 - t) * identity-embedding + t * noise`, `[a][v]` layout.
    fn v_mix(&self, noise: &[f64], t: f64) -> Vec<f64> {
        let (na, nv) = (self.fast.na, self.nv);
        let mut rows = vec![0.0; na * nv];
        for a in 0..na {
            for v in 0..nv {
                let id = if v == a { 1.0 } else { 0.0 };
                rows[a * nv + v] = (1.0 - t) * id + t * noise[a * nv + v];
            }
            normalize(&mut rows[a * nv..(a + 1) * nv]);
        }
        rows
    }

    /// Largest `t` in `[0, 1]` keeping the distortion within target.
    fn tightest_mix(&self, noise: &[f64], u: &[f64], target: f64) -> Option<Vec<f64>> {
        let d = |t: f64| {
            let v = self.v_mix(noise, t);
            self.fast.evaluate(&v, self.nv, u, self.nu).distortion
        };
        if d(0.0) > target + FEASIBLE_TOL {
            return None;
        }
        if d(1.0) <= target + FEASIBLE_TOL {
            return Some(self.v_mix(noise, 1.0));
        }
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if d(mid) <= target + FEASIBLE_TOL {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(self.v_mix(noise, lo))
    }

    fn u_family(&self) -> Vec<Vec<f64>> {
        let (na, nv, nu) = (self.fast.na, self.nv, self.nu);
        let k = na.min(nu);
        let mut out = Vec::new();
        // U constant
        let mut constant = vec![0.0; nv * nu];
        for v in 0..nv {
            constant[v * nu] = 1.0;
        }
        out.push(constant);
        // noisy copies of V on the first k symbols
        let steps = self.cfg.grid.max(2);
        for i in 0..steps {
            let s = i as f64 / (steps - 1) as f64;
            let mut rows = vec![0.0; nv * nu];
            for v in 0..nv {
                let target = if v < k { v } else { 0 };
                for u in 0..k {
                    rows[v * nu + u] = s / k as f64;
                }
                rows[v * nu + target] += 1.0 - s;
            }
            out.push(rows);
        }
        out
    }

    fn v_noises(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
        let (na, nv) = (self.fast.na, self.nv);
        let mut uniform = vec![0.0; na * nv];
        let mut collapse = vec![0.0; na * nv];
        for a in 0..na {
            for v in 0..na {
                uniform[a * nv + v] = 1.0 / na as f64;
            }
            collapse[a * nv] = 1.0;
        }
        let mut out = vec![uniform, collapse];
        for _ in 0..self.cfg.random_starts {
            out.push(random_rows(rng, na, nv));
        }
        out
    }

    fn seeds(&self, target: f64, rng: &mut ChaCha8Rng) -> Vec<Candidate> {
        let u_family = self.u_family();
        let mut seeds = Vec::new();
        for noise in self.v_noises(rng) {
            for u in &u_family {
                if let Some(v) = self.tightest_mix(&noise, u, target) {
                    seeds.push(Candidate { v, u: u.clone() });
                }
            }
        }
        for _ in 0..self.cfg.random_starts {
            let u = random_rows(rng, self.nv, self.nu);
            let noise = random_rows(rng, self.fast.na, self.nv);
            if let Some(v) = self.tightest_mix(&noise, &u, target) {
                seeds.push(Candidate { v, u });
            }
        }
        seeds
    }

    /// Coordinate refinement with step halving and boundary bisection.
    fn refine(&self, start: Candidate, obj: Objective) -> (Candidate, FastEval) {
        let mut cur = start;
        let mut cur_eval = self.eval(&cur);
        let mut step = self.cfg.initial_step;
        for _ in 0..self.cfg.refine_rounds {
            for _ in 0..MAX_PASSES {
                let mut improved = false;
                for which in 0..2 {
                    let (rows, width) = if which == 0 {
                        (self.fast.na, self.nv)
                    } else {
                        (self.nv, self.nu)
                    };
                    for r in 0..rows {
                        for from in 0..width {
                            for to in 0..width {
                                if from == to {
                                    continue;
                                }
                                let mass = channel(&cur, which)[r * width + from];
                                if mass <= 0.0 {
                                    continue;
                                }
                                let full = step.min(mass);
                                let mv = |amount: f64| {
                                    let mut c = cur.clone();
                                    let ch = channel_mut(&mut c, which);
                                    ch[r * width + from] -= amount;
                                    ch[r * width + to] += amount;
                                    if ch[r * width + from] < 0.0 {
                                        ch[r * width + from] = 0.0;
                                    }
                                    c
                                };
                                let cand = mv(full);
                                let e = self.eval(&cand);
                                let accepted = if obj.feasible(&e) {
                                    obj.better(&e, &cur_eval).then_some((cand, e))
                                } else {
                                    self.bisect_move(&mv, full, obj, &cur_eval)
                                };
                                if let Some((c, e)) = accepted {
                                    cur = c;
                                    cur_eval = e;
                                    improved = true;
                                }
                            }
                        }
                    }
                }
                if !improved {
                    break;
                }
            }
            step *= 0.5;
        }
        (cur, cur_eval)
    }

    fn bisect_move(
        &self,
        mv: &dyn Fn(f64) -> Candidate,
        full: f64,
        obj: Objective,
        cur_eval: &FastEval,
    ) -> Option<(Candidate, FastEval)> {
        let (mut lo, mut hi) = (0.0, full);
        let mut best: Option<(Candidate, FastEval)> = None;
        for _ in 0..BISECT_STEPS {
            let mid = 0.5 * (lo + hi);
            let c = mv(mid);
            let e = self.eval(&c);
            if obj.feasible(&e) {
                lo = mid;
                best = Some((c, e));
            } else {
                hi = mid;
            }
        }
        best.filter(|(_, e)| obj.better(e, cur_eval))
    }
}

fn channel(c: &Candidate, which: usize) -> &[f64] {
    if which == 0 {
        &c.v
    } else {
        &c.u
    }
}

fn channel_mut(c: &mut Candidate, which: usize) -> &mut Vec<f64> {
    if which == 0 {
        &mut c.v
    } else {
        &mut c.u
    }
}

fn normalize(row: &mut [f64]) {
    let s: f64 = row.iter().sum();
    row.iter_mut().for_each(|x| *x /= s);
}

/// Rows drawn uniformly from the simplex.
fn random_rows(rng: &mut ChaCha8Rng, rows: usize, width: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..rows * width)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln())
        .collect();
    for r in 0..rows {
        normalize(&mut out[r * width..(r + 1) * width]);
    }
    out
}

/// Picks the best feasible entry; ties resolve to the lowest index.
fn pick_best(evals: &[(Candidate, FastEval)], obj: Objective) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, (_, e)) in evals.iter().enumerate() {
        if !obj.feasible(e) {
            continue;
        }
        match best {
            Some(b) if !obj.better(e, &evals[b].1) => {}
            _ => best = Some(i),
        }
    }
    best
}

fn to_scheme(source: &SecureSource<f64>, c: &Candidate, nv: usize, nu: usize) -> Result<AuxScheme<f64>> {
    let va = Alphabet::labeled("v", nv)?;
    let ua = Alphabet::labeled("u", nu)?;
    let v = ConditionalPmf::new(source.a_alphabet().clone(), va.clone(), c.v.clone())?;
    let u = ConditionalPmf::new(va, ua, c.u.clone())?;
    let r = best_reconstruction(source, &v)?;
    AuxScheme::new(v, u, r)
}

/// Searches the boundary at each distortion target in `distortions`
/// (processed in increasing order).
pub fn sweep_boundary(
    source: &SecureSource<f64>,
    distortions: &[f64],
    cfg: &SearchConfig,
) -> Result<BoundaryCurve> {
    if distortions.is_empty() {
        return Err(invalid("distortion grid is empty"));
    }
    if distortions.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(invalid("distortion targets must be finite and nonnegative"));
    }
    if cfg.refine_top == 0 || cfg.grid < 2 {
        return Err(invalid("search needs grid >= 2 and refine_top >= 1"));
    }
    let mut targets = distortions.to_vec();
    targets.sort_by(f64::total_cmp);

    let (nu, nv) = cardinality_caps(source.a_alphabet().len());
    let searcher = Searcher { fast: FastSource::new(source), nv, nu, cfg };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut incumbent: Option<Candidate> = None;
    let mut points: Vec<BoundaryPoint> = Vec::with_capacity(targets.len());
    let mut infeasible = Vec::new();

    for &target in &targets {
        let obj = Objective { target, budget: cfg.rate_budget };
        let mut seeds = searcher.seeds(target, &mut rng);
        if let Some(inc) = &incumbent {
            seeds.insert(0, inc.clone());
        }
        let evals: Vec<(Candidate, FastEval)> = seeds
            .into_par_iter()
            .map(|c| {
                let e = searcher.eval(&c);
                (c, e)
            })
            .collect();

        // Top seeds by the objective, deterministic in seed order.
        let mut pool = evals;
        let mut starts = Vec::new();
        while starts.len() < cfg.refine_top {
            match pick_best(&pool, obj) {
                Some(i) => starts.push(pool.remove(i).0),
                None => break,
            }
        }
        if starts.is_empty() {
            infeasible.push(target);
            continue;
        }
        let refined: Vec<(Candidate, FastEval)> =
            starts.into_par_iter().map(|c| searcher.refine(c, obj)).collect();
        let winner = refined[pick_best(&refined, obj).expect("refinement keeps feasibility")]
            .0
            .clone();

        let scheme = to_scheme(source, &winner, nv, nu)?;
        let tuple = evaluate_scheme(source, &scheme)?;
        let scheme_id = points
            .iter()
            .position(|p| p.scheme == scheme)
            .map(|i| points[i].scheme_id)
            .unwrap_or(points.len());
        points.push(BoundaryPoint { target_distortion: target, tuple, scheme, scheme_id });
        incumbent = Some(winner);
    }

    if points.is_empty() {
        return Err(invalid(format!(
            "no feasible scheme at any target distortion{}",
            cfg.rate_budget.map(|b| format!(" within rate {b}")).unwrap_or_default()
        )));
    }
    Ok(BoundaryCurve {
        points,
        infeasible,
        grid_resolution: cfg.grid,
        refine_rounds: cfg.refine_rounds,
        rate_budget: cfg.rate_budget,
    })
}
