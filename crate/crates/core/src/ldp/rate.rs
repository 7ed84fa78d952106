use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::control::Control;
use crate::error::{Error, Result};
use crate::galerkin::GalerkinSystem;
use crate::rng::{purpose, StreamKey};
use crate::scalar::Real;
use crate::skeleton::{entropy_lt, solve_skeleton};

use super::target::TargetFunctional;

/// Penalty continuation: rounds and growth factor.
pub const PENALTY_ROUNDS: usize = 5;
pub const PENALTY_GROWTH: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct RateOptions<T> {
    /// Time cells of the piecewise-constant control.
    pub cells: usize,
    /// Maximum number of skeleton solves.
    pub budget: usize,
    pub seed: u64,
    /// Random restarts per penalty round.
    pub restarts: usize,
    /// Controls are searched in the box `[0, g_max]`.
    pub g_max: T,
    /// Feasibility tolerance on the target violation.
    pub tolerance: T,
    pub initial_penalty: T,
    pub initial_step: T,
    pub min_step: T,
    /// Extra starting point (e.g. the solution of a nearby problem).
    pub warm_start: Option<Control<T>>,
}

impl<T: Real> Default for RateOptions<T> {
    fn default() -> Self {
        Self {
            cells: 4,
            budget: 4000,
            seed: 0,
            restarts: 2,
            g_max: T::lit(10.0),
            tolerance: T::lit(1e-3),
            initial_penalty: T::lit(10.0),
            initial_step: T::lit(0.5),
            min_step: T::lit(1e-6),
            warm_start: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RateStatus {
    Converged,
    BudgetExhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub evaluation: usize,
    pub round: usize,
    pub penalty: f64,
    pub entropy: f64,
    pub violation: f64,
    pub objective: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEstimate<T> {
    /// `L_T` of `control`, or `+∞` when no feasible control was found.
    pub value: T,
    pub control: Control<T>,
    pub violation: T,
    pub status: RateStatus,
    pub evaluations: usize,
    pub trace: Vec<TraceEntry>,
}

#[derive(Clone)]
struct Point<T> {
    x: Vec<T>,
    entropy: T,
    violation: T,
}

struct Search<'a, T> {
    system: &'a GalerkinSystem<T>,
    target: &'a TargetFunctional<T>,
    opts: &'a RateOptions<T>,
    atoms: usize,
    used: usize,
    round: usize,
    penalty: T,
    trace: Vec<TraceEntry>,
    best_feasible: Option<Point<T>>,
}

impl<'a, T: Real> Search<'a, T> {
    fn control(&self, x: &[T]) -> Result<Control<T>> {
        Control::from_flat(self.system.config().horizon, self.opts.cells, self.atoms, x.to_vec())
    }

    fn remaining(&self) -> usize {
        self.opts.budget - self.used
    }

    fn objective(&self, p: &Point<T>) -> T {
        let excess = (p.violation - self.opts.tolerance).max(T::zero());
        if excess.is_infinite() {
            return T::infinity();
        }
        p.entropy + self.penalty * excess
    }

    /// Solves the skeleton at each point, in parallel, recording the trace in
    /// input order.
    fn evaluate(&mut self, xs: Vec<Vec<T>>) -> Result<Vec<Point<T>>> {
        let results: Vec<Result<Point<T>>> = xs
            .into_par_iter()
            .map(|x| {
                let g = self.control(&x)?;
                let entropy = entropy_lt(&g, &self.system.config().marks)?;
                let violation = match solve_skeleton(self.system, &g) {
                    Ok(path) => self.target.violation(path.terminal()),
                    Err(Error::BlowUp { .. }) => T::infinity(),
                    Err(e) => return Err(e),
                };
                Ok(Point { x, entropy, violation })
            })
            .collect();
        let mut out = Vec::with_capacity(results.len());
        for r in results {
            let p = r?;
            self.used += 1;
            self.trace.push(TraceEntry {
                evaluation: self.used,
                round: self.round,
                penalty: self.penalty.as_f64(),
                entropy: p.entropy.as_f64(),
                violation: p.violation.as_f64(),
                objective: self.objective(&p).as_f64(),
            });
            if p.violation <= self.opts.tolerance
                && self.best_feasible.as_ref().is_none_or(|b| p.entropy < b.entropy)
            {
                self.best_feasible = Some(p.clone());
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Compass search from `start`; returns the best point and whether it
    /// terminated on the step-size criterion.
    fn pattern_search(&mut self, start: Point<T>) -> Result<(Point<T>, bool)> {
        let mut current = start;
        let mut step = self.opts.initial_step;
        let (lo, hi) = (T::zero(), self.opts.g_max);
        while step >= self.opts.min_step {
            let mut polls = Vec::new();
            for i in 0..current.x.len() {
                for dir in [T::one(), -T::one()] {
                    let v = (current.x[i] + dir * step).max(lo).min(hi);
                    if v != current.x[i] {
                        let mut x = current.x.clone();
                        x[i] = v;
                        polls.push(x);
                    }
                }
            }
            if polls.is_empty() {
                step = step * T::lit(0.5);
                continue;
            }
            if polls.len() > self.remaining() {
                return Ok((current, false));
            }
            let points = self.evaluate(polls)?;
            let fc = self.objective(&current);
            let mut best: Option<(T, Point<T>)> = None;
            for p in points {
                let f = self.objective(&p);
                if f < fc && best.as_ref().is_none_or(|(bf, _)| f < *bf) {
                    best = Some((f, p));
                }
            }
            match best {
                Some((_, p)) => current = p,
                None => step = step * T::lit(0.5),
            }
        }
        Ok((current, true))
    }
}

/// Estimates `inf { L_T(g) : u_g(T) in target }` over piecewise-constant
/// controls by compass search on a penalized objective.
///
/// Runs up to [`PENALTY_ROUNDS`] rounds with the penalty multiplied by
/// [`PENALTY_GROWTH`]; stops once a round's minimizer is feasible. The value
/// is `+∞` when no evaluated control met the target within tolerance.
pub fn estimate_rate<T: Real>(
    system: &GalerkinSystem<T>,
    target: &TargetFunctional<T>,
    opts: &RateOptions<T>,
) -> Result<RateEstimate<T>> {
    let cfg = system.config();
    target.validate(system.level())?;
    if opts.cells == 0 {
        return Err(Error::param("control needs at least one time cell"));
    }
    if cfg.horizon / T::from_usize_lossy(opts.cells) < cfg.max_step {
        return Err(Error::param("time step exceeds the control cell width"));
    }
    if !(opts.g_max >= T::one()) || !(opts.tolerance >= T::zero()) || !(opts.min_step > T::zero()) {
        return Err(Error::param("rate options need g_max ≥ 1, tolerance ≥ 0 and a positive minimal step"));
    }
    let atoms = cfg.marks.len();
    let dim = opts.cells * atoms;
    let identity = Control::constant(cfg.horizon, opts.cells, atoms, T::one())?;
    if opts.budget == 0 {
        return Ok(RateEstimate {
            value: T::infinity(),
            control: identity,
            violation: T::infinity(),
            status: RateStatus::BudgetExhausted,
            evaluations: 0,
            trace: Vec::new(),
        });
    }

    let mut search = Search {
        system,
        target,
        opts,
        atoms,
        used: 0,
        round: 0,
        penalty: opts.initial_penalty,
        trace: Vec::new(),
        best_feasible: None,
    };
    let mut starts = vec![vec![T::one(); dim]];
    if let Some(w) = &opts.warm_start {
        w.check_shape(atoms, cfg.horizon)?;
        if w.cells() != opts.cells {
            return Err(Error::param("warm start has a different number of cells"));
        }
        starts.push(w.values().iter().map(|&v| v.min(opts.g_max)).collect());
    }
    let evaluated = search.evaluate(starts)?;
    if evaluated[0].violation <= opts.tolerance {
        return finish(search, RateStatus::Converged);
    }
    let mut incumbent = evaluated
        .into_iter()
        .min_by(|a, b| search.objective(a).partial_cmp(&search.objective(b)).expect("ordered"))
        .expect("at least one start");

    let mut rng = StreamKey::new(opts.seed, 0, 0, purpose::OPTIMIZER).rng();
    let mut completed = true;
    for round in 0..PENALTY_ROUNDS {
        search.round = round;
        let mut round_best: Option<Point<T>> = None;
        let mut candidates = vec![incumbent.clone()];
        for _ in 0..opts.restarts {
            let x: Vec<T> = (0..dim)
                .map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    T::lit((0.7 * z).exp()).min(opts.g_max)
                })
                .collect();
            if search.remaining() == 0 {
                break;
            }
            candidates.push(search.evaluate(vec![x])?.remove(0));
        }
        for start in candidates {
            let (p, done) = search.pattern_search(start)?;
            completed &= done;
            let better = round_best
                .as_ref()
                .is_none_or(|b| search.objective(&p) < search.objective(b));
            if better {
                round_best = Some(p);
            }
            if !done {
                break;
            }
        }
        incumbent = round_best.expect("at least one search");
        if incumbent.violation <= opts.tolerance || !completed {
            break;
        }
        search.penalty = search.penalty * T::lit(PENALTY_GROWTH);
    }
    let status = if completed && search.best_feasible.is_some() {
        RateStatus::Converged
    } else {
        RateStatus::BudgetExhausted
    };
    finish(search, status)
}

fn finish<T: Real>(search: Search<'_, T>, status: RateStatus) -> Result<RateEstimate<T>> {
    let horizon = search.system.config().horizon;
    match &search.best_feasible {
        Some(p) => {
            let control = Control::from_flat(horizon, search.opts.cells, search.atoms, p.x.clone())?;
            let value = entropy_lt(&control, &search.system.config().marks)?;
            Ok(RateEstimate {
                value,
                control,
                violation: p.violation,
                status,
                evaluations: search.used,
                trace: search.trace,
            })
        }
        None => Ok(RateEstimate {
            value: T::infinity(),
            control: Control::constant(horizon, search.opts.cells, search.atoms, T::one())?,
            violation: T::infinity(),
            status: RateStatus::BudgetExhausted,
            evaluations: search.used,
            trace: search.trace,
        }),
    }
}
