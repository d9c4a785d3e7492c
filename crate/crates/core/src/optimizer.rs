//! Derivative-free search over template-structured strategy families:
//! seeded Nelder-Mead restarts, trade-off maximization at pinned S1,
//! equal-violation search, and boundary sweeps with concavification.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis;
use crate::boundary;
use crate::catalog;
use crate::scenario::{
    evaluate_strategy, make_state, DeterministicBranch, InstrumentSetting, PlanarObservable,
    ProjectiveInstrument, SequentialStrategy, StateKind, TradeoffPoint, UnitaryOp,
    TOL_TSIRELSON, TSIRELSON_BOUND,
};
use crate::{Error, Result};

/// Restarts used by every public search entry point.
pub const DEFAULT_RESTARTS: usize = 32;
/// Evaluation cap per restart.
pub const MAX_EVALS_PER_RESTART: usize = 50_000;
/// Simplex diameter at which a restart stops.
const DIAMETER_TOL: f64 = 1e-10;
/// Weight of the S1 pinning penalty.
const S1_PENALTY: f64 = 1e3;
/// Weight of the equal-violation spread penalty.
const EQUALITY_PENALTY: f64 = 1e2;
/// S1 pinning tolerance used by boundary sweeps.
const SWEEP_TOL: f64 = 1e-4;

/// Measurement class of one relay setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SettingTemplate {
    /// Projective measurement with a free angle and free per-outcome
    /// rotations.
    Basis,
    /// Deterministic outcome with a free relay rotation.
    Trivial,
}

/// Rank-class structure of one deterministic branch: for every relay
/// party, the setting class per input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchTemplate {
    pub relays: Vec<[SettingTemplate; 2]>,
}

impl BranchTemplate {
    /// Both inputs measured: the full-rank class.
    pub fn case_i(relay_parties: usize) -> Self {
        Self {
            relays: vec![[SettingTemplate::Basis; 2]; relay_parties],
        }
    }

    /// Neither input measured: the trivial relay class.
    pub fn case_ii(relay_parties: usize) -> Self {
        Self {
            relays: vec![[SettingTemplate::Trivial; 2]; relay_parties],
        }
    }

    /// One input trivial, the other measured: the half-trivial class.
    pub fn case_iii(relay_parties: usize) -> Self {
        Self {
            relays: vec![[SettingTemplate::Trivial, SettingTemplate::Basis]; relay_parties],
        }
    }

    fn short_label(&self) -> String {
        self.relays
            .iter()
            .map(|pair| {
                pair.iter()
                    .map(|s| match s {
                        SettingTemplate::Basis => 'b',
                        SettingTemplate::Trivial => 't',
                    })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// One continuous search parameter.
#[derive(Clone, Debug)]
pub struct Parameter {
    pub name: String,
    pub range: [f64; 2],
}

#[derive(Clone, Debug)]
enum Body {
    /// Free angles filled into the given branch templates.
    Generic { branches: Vec<BranchTemplate> },
    /// Three-branch relay chain parameterized by one angle per branch,
    /// mirroring the structured triple-violation family.
    TripleStructured,
}

/// A parameterized family of sequential strategies.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    state: StateKind,
    body: Body,
    independence: bool,
    label: String,
    parameters: Vec<Parameter>,
}

const ANGLE_RANGE: [f64; 2] = [0.0, std::f64::consts::TAU];
const ROTATION_RANGE: [f64; 2] = [-std::f64::consts::PI, std::f64::consts::PI];
const WEIGHT_RANGE: [f64; 2] = [0.2, 1.2];

impl SearchSpace {
    /// A mixture of the given branch templates with free weights; all
    /// branches share the state, and `independence` pins the first and
    /// final parties' angles across branches.
    pub fn mixture(
        state: StateKind,
        branches: Vec<BranchTemplate>,
        independence: bool,
    ) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidArgument("no branch templates".into()));
        }
        let relay_parties = branches[0].relays.len();
        if relay_parties == 0 {
            return Err(Error::InvalidArgument(
                "templates need at least one relay party".into(),
            ));
        }
        if branches.iter().any(|b| b.relays.len() != relay_parties) {
            return Err(Error::InvalidArgument(
                "branch templates disagree on the relay count".into(),
            ));
        }
        let label = format!(
            "mixture[{}]{}",
            branches
                .iter()
                .map(BranchTemplate::short_label)
                .collect::<Vec<_>>()
                .join("+"),
            if independence { "/indep" } else { "" },
        );

        let mut parameters = Vec::new();
        let mut push = |name: String, range: [f64; 2]| {
            parameters.push(Parameter { name, range });
        };
        if independence {
            push("a0".into(), ANGLE_RANGE);
            push("a1".into(), ANGLE_RANGE);
            push("c0".into(), ANGLE_RANGE);
            push("c1".into(), ANGLE_RANGE);
        }
        for (bi, branch) in branches.iter().enumerate() {
            if branches.len() > 1 {
                push(format!("b{bi}.w"), WEIGHT_RANGE);
            }
            if !independence {
                push(format!("b{bi}.a0"), ANGLE_RANGE);
                push(format!("b{bi}.a1"), ANGLE_RANGE);
            }
            for (ri, relay) in branch.relays.iter().enumerate() {
                for (yi, setting) in relay.iter().enumerate() {
                    match setting {
                        SettingTemplate::Basis => {
                            push(format!("b{bi}.r{ri}.y{yi}.angle"), ANGLE_RANGE);
                            push(format!("b{bi}.r{ri}.y{yi}.u0"), ROTATION_RANGE);
                            push(format!("b{bi}.r{ri}.y{yi}.u1"), ROTATION_RANGE);
                        }
                        SettingTemplate::Trivial => {
                            push(format!("b{bi}.r{ri}.y{yi}.u0"), ROTATION_RANGE);
                        }
                    }
                }
            }
            if !independence {
                push(format!("b{bi}.c0"), ANGLE_RANGE);
                push(format!("b{bi}.c1"), ANGLE_RANGE);
            }
        }
        Ok(Self {
            state,
            body: Body::Generic { branches },
            independence,
            label,
            parameters,
        })
    }

    /// Single-branch space.
    pub fn single(state: StateKind, template: BranchTemplate) -> Result<Self> {
        Self::mixture(state, vec![template], false)
    }

    /// The three two-party rank classes mixed with free weights.
    pub fn rank_classes(state: StateKind) -> Result<Self> {
        Self::mixture(
            state,
            vec![
                BranchTemplate::case_i(1),
                BranchTemplate::case_ii(1),
                BranchTemplate::case_iii(1),
            ],
            false,
        )
    }

    /// Structured three-party family: one measured branch and two
    /// half-trivial branches, each controlled by a single angle, plus
    /// free mixing weights.
    pub fn triple_structured() -> Self {
        let parameters = vec![
            Parameter {
                name: "phi".into(),
                range: [0.05, std::f64::consts::FRAC_PI_2 - 0.05],
            },
            Parameter {
                name: "phi_hat".into(),
                range: [0.05, std::f64::consts::FRAC_PI_2 - 0.05],
            },
            Parameter {
                name: "phi_tilde".into(),
                range: [0.05, std::f64::consts::FRAC_PI_2 - 0.05],
            },
            Parameter {
                name: "w0".into(),
                range: WEIGHT_RANGE,
            },
            Parameter {
                name: "w1".into(),
                range: WEIGHT_RANGE,
            },
            Parameter {
                name: "w2".into(),
                range: WEIGHT_RANGE,
            },
        ];
        Self {
            state: StateKind::MaximallyEntangled,
            body: Body::TripleStructured,
            independence: false,
            label: "triple_structured".into(),
            parameters,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn state(&self) -> StateKind {
        self.state
    }

    pub fn independence_mode(&self) -> bool {
        self.independence
    }

    /// Ordered free parameters with their restart sampling ranges.
    pub fn parameters(&self) -> &[Parameter] {
        &self.parameters
    }

    /// CHSH pairs produced by strategies of this space.
    pub fn pair_count(&self) -> usize {
        match &self.body {
            Body::Generic { branches } => branches[0].relays.len() + 1,
            Body::TripleStructured => 3,
        }
    }

    /// Instantiates the strategy at a parameter vector.
    pub fn decode(&self, x: &[f64]) -> Result<SequentialStrategy> {
        if x.len() != self.parameters.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} parameters, got {}",
                self.parameters.len(),
                x.len()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite parameter".into()));
        }
        match &self.body {
            Body::Generic { branches } => self.decode_generic(branches, x),
            Body::TripleStructured => decode_triple(x),
        }
    }

    fn decode_generic(
        &self,
        templates: &[BranchTemplate],
        x: &[f64],
    ) -> Result<SequentialStrategy> {
        let state = make_state(self.state)?;
        let mut cursor = 0usize;
        let mut next = || {
            let v = x[cursor];
            cursor += 1;
            v
        };
        let shared = if self.independence {
            Some(([next(), next()], [next(), next()]))
        } else {
            None
        };

        let mut weights = Vec::with_capacity(templates.len());
        let mut branches = Vec::with_capacity(templates.len());
        for template in templates {
            let raw_w = if templates.len() > 1 { next() } else { 1.0 };
            weights.push(raw_w * raw_w);
            let a_angles = match &shared {
                Some((a, _)) => *a,
                None => [next(), next()],
            };
            let mut instruments = Vec::with_capacity(template.relays.len());
            for relay in &template.relays {
                let mut settings = Vec::with_capacity(2);
                for kind in relay {
                    let setting = match kind {
                        SettingTemplate::Basis => {
                            let angle = next();
                            let u0 = next();
                            let u1 = next();
                            InstrumentSetting::basis(angle)?.with_unitaries([
                                UnitaryOp::y_rotation(u0),
                                UnitaryOp::y_rotation(u1),
                            ])
                        }
                        SettingTemplate::Trivial => {
                            let u0 = next();
                            InstrumentSetting::trivial_zero()
                                .with_unitary(UnitaryOp::y_rotation(u0))
                        }
                    };
                    settings.push(setting);
                }
                instruments.push(ProjectiveInstrument::new([settings[0], settings[1]]));
            }
            let final_angles = match &shared {
                Some((_, c)) => *c,
                None => [next(), next()],
            };
            branches.push(DeterministicBranch {
                state: state.clone(),
                a_observables: [
                    PlanarObservable::new(a_angles[0])?,
                    PlanarObservable::new(a_angles[1])?,
                ],
                instruments,
                final_observables: [
                    PlanarObservable::new(final_angles[0])?,
                    PlanarObservable::new(final_angles[1])?,
                ],
            });
        }
        debug_assert_eq!(cursor, x.len());

        let total: f64 = weights.iter().sum();
        let k = weights.len() as f64;
        let weighted = branches
            .into_iter()
            .zip(&weights)
            .map(|(branch, &w)| {
                let weight = if total > 1e-12 { w / total } else { 1.0 / k };
                (weight, branch)
            })
            .collect();
        SequentialStrategy::new(weighted)
    }
}

/// Triangle-wave fold of an unconstrained value into [0, hi].
fn fold(t: f64, hi: f64) -> f64 {
    let u = (t / hi).rem_euclid(2.0);
    if u <= 1.0 {
        u * hi
    } else {
        (2.0 - u) * hi
    }
}

fn decode_triple(x: &[f64]) -> Result<SequentialStrategy> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let angles = [fold(x[0], half_pi), fold(x[1], half_pi), fold(x[2], half_pi)];
    let raw = [x[3] * x[3], x[4] * x[4], x[5] * x[5]];
    let total: f64 = raw.iter().sum();
    let weights = if total > 1e-12 {
        [raw[0] / total, raw[1] / total, raw[2] / total]
    } else {
        [1.0 / 3.0; 3]
    };
    catalog::triple_strategy(angles[0], angles[1], angles[2], weights)
}

/// Outcome of one Nelder-Mead restart.
#[derive(Clone, Debug)]
struct RestartOutcome {
    objective: f64,
    x: Vec<f64>,
    evaluations: usize,
}

/// Result of a search entry point.
#[derive(Clone, Debug)]
pub struct SearchResult {
    pub best_point: TradeoffPoint,
    pub best_strategy: SequentialStrategy,
    pub objective: f64,
    pub evaluations: u64,
    pub seed: u64,
}

/// Nelder-Mead maximization with standard coefficients; returns the best
/// vertex, its value, and the evaluation count.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    max_evals: usize,
) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    let v0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), v0));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += steps[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }

    loop {
        // Best first.
        simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        if evals >= max_evals {
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diameter < DIAMETER_TOL {
            break;
        }

        let worst = simplex[d].0.clone();
        let f_best = simplex[0].1;
        let f_second = simplex[d - 1].1;
        let f_worst = simplex[d].1;
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let combine = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = combine(1.0);
        let fr = eval(&xr, &mut evals);
        if fr > f_best {
            let xe = combine(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[d] = if fe > fr { (xe, fe) } else { (xr, fr) };
        } else if fr > f_second {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr > f_worst {
                let xc = combine(0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            } else {
                let xc = combine(-0.5);
                let fc = eval(&xc, &mut evals);
                (xc, fc)
            };
            if fc > fr.max(f_worst) {
                simplex[d] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&entry.0)
                        .map(|(b, v)| b + 0.5 * (v - b))
                        .collect();
                    let fv = eval(&x, &mut evals);
                    *entry = (x, fv);
                }
            }
        }
    }
    simplex.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, v) = simplex.swap_remove(0);
    (x, v, evals)
}

/// Runs seeded restarts in parallel; outcome `r` depends only on
/// (space, score, seed, r), so the collected list is deterministic.
fn run_restarts<S>(
    space: &SearchSpace,
    score: &S,
    seed: u64,
    restarts: usize,
    stream_offset: u64,
) -> Vec<RestartOutcome>
where
    S: Fn(&TradeoffPoint) -> f64 + Sync,
{
    let objective = |x: &[f64]| -> f64 {
        match space.decode(x) {
            Ok(strategy) => match evaluate_strategy(&strategy) {
                Ok(point) => score(&point),
                Err(_) => f64::NEG_INFINITY,
            },
            Err(_) => f64::NEG_INFINITY,
        }
    };
    (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream_offset + r as u64);
            let x0: Vec<f64> = space
                .parameters
                .iter()
                .map(|p| rng.random_range(p.range[0]..p.range[1]))
                .collect();
            let steps: Vec<f64> = space
                .parameters
                .iter()
                .map(|p| 0.25 * (p.range[1] - p.range[0]))
                .collect();
            // Re-seeding the simplex at decreasing scales escapes the
            // degenerate simplexes Nelder-Mead collapses into.
            let rounds: [(f64, f64); 4] = [(1.0, 0.4), (0.08, 0.3), (0.008, 0.2), (0.0008, 0.1)];
            let mut x = x0;
            let mut value = f64::NEG_INFINITY;
            let mut evaluations = 0usize;
            for (scale, share) in rounds {
                let round_steps: Vec<f64> = steps.iter().map(|s| scale * s).collect();
                let budget = ((MAX_EVALS_PER_RESTART as f64) * share) as usize;
                let (xr, vr, er) = nelder_mead(objective, &x, &round_steps, budget);
                evaluations += er;
                if vr > value {
                    value = vr;
                    x = xr;
                }
            }
            RestartOutcome {
                objective: value,
                x,
                evaluations,
            }
        })
        .collect()
}

/// Max objective, ties broken by the lowest restart index.
fn select_best(outcomes: &[RestartOutcome]) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (i, outcome) in outcomes.iter().enumerate() {
        if !outcome.objective.is_finite() {
            continue;
        }
        if best.is_none_or(|b| outcome.objective > outcomes[b].objective) {
            best = Some(i);
        }
    }
    best.ok_or_else(|| Error::NotFound("no restart produced a valid strategy".into()))
}

fn finish(
    space: &SearchSpace,
    outcomes: Vec<RestartOutcome>,
    seed: u64,
) -> Result<SearchResult> {
    let idx = select_best(&outcomes)?;
    let evaluations: u64 = outcomes.iter().map(|o| o.evaluations as u64).sum();
    let best = &outcomes[idx];
    let best_strategy = space.decode(&best.x)?;
    let best_point = evaluate_strategy(&best_strategy)?;
    for &s in best_point.values() {
        assert!(
            s.abs() <= TSIRELSON_BOUND + TOL_TSIRELSON,
            "search produced a value beyond the quantum bound: {s}"
        );
    }
    Ok(SearchResult {
        best_point,
        best_strategy,
        objective: best.objective,
        evaluations,
        seed,
    })
}

fn s1_pinned_score(target: f64, tol: f64) -> impl Fn(&TradeoffPoint) -> f64 + Sync {
    move |point: &TradeoffPoint| {
        let s = point.values();
        let excess = ((s[0] - target).abs() - tol).max(0.0);
        s[1] - S1_PENALTY * excess * excess
    }
}

/// Maximizes S2 subject to S1 staying within `tol` of `s1_target`.
pub fn maximize_s2_at_s1(
    space: &SearchSpace,
    s1_target: f64,
    tol: f64,
    seed: u64,
) -> Result<SearchResult> {
    maximize_s2_at_s1_with(space, s1_target, tol, seed, DEFAULT_RESTARTS)
}

/// [`maximize_s2_at_s1`] with an explicit restart count, for tighter
/// evaluation budgets.
pub fn maximize_s2_at_s1_with(
    space: &SearchSpace,
    s1_target: f64,
    tol: f64,
    seed: u64,
    restarts: usize,
) -> Result<SearchResult> {
    if !(s1_target.is_finite() && (0.0..=TSIRELSON_BOUND + 1e-12).contains(&s1_target)) {
        return Err(Error::InvalidArgument(format!(
            "s1_target = {s1_target} outside [0, 2*sqrt(2)]"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tol = {tol} must be > 0")));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be positive".into()));
    }
    let cap = analysis::horodecki_max_chsh(&make_state(space.state)?)?;
    if s1_target > cap + tol {
        return Err(Error::NotFound(format!(
            "s1_target = {s1_target} exceeds the state's maximum {cap}"
        )));
    }
    let score = s1_pinned_score(s1_target, tol);
    let outcomes = run_restarts(space, &score, seed, restarts, 0);
    finish(space, outcomes, seed)
}

/// Maximizes min_k S_k with the spread penalized, for n CHSH pairs.
pub fn maximize_equal_violations(space: &SearchSpace, n: usize, seed: u64) -> Result<SearchResult> {
    maximize_equal_violations_with(space, n, seed, DEFAULT_RESTARTS)
}

/// [`maximize_equal_violations`] with an explicit restart count, for
/// tighter evaluation budgets.
pub fn maximize_equal_violations_with(
    space: &SearchSpace,
    n: usize,
    seed: u64,
    restarts: usize,
) -> Result<SearchResult> {
    if !(2..=4).contains(&n) {
        return Err(Error::InvalidArgument(format!("n = {n} outside {{2, 3, 4}}")));
    }
    if space.pair_count() != n {
        return Err(Error::InvalidArgument(format!(
            "space produces {} pairs, wanted {n}",
            space.pair_count()
        )));
    }
    if restarts == 0 {
        return Err(Error::InvalidArgument("restarts must be positive".into()));
    }
    let score = |point: &TradeoffPoint| -> f64 {
        let s = point.values();
        let mean = s.iter().sum::<f64>() / s.len() as f64;
        let spread: f64 = s.iter().map(|v| (v - mean) * (v - mean)).sum();
        point.min() - EQUALITY_PENALTY * spread
    };
    let outcomes = run_restarts(space, &score, seed, restarts, 0);
    finish(space, outcomes, seed)
}

/// One sweep grid node.
#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub s1_target: f64,
    pub s1_achieved: f64,
    pub s2_best: f64,
    pub template: String,
    pub seed: u64,
}

/// Maximizes S2 on a uniform S1 grid up to the state's Horodecki cap,
/// then closes the concave hull over the achieved points (mixing under
/// shared randomness makes every hull point feasible).
pub fn sweep_boundary(space: &SearchSpace, grid: usize, seed: u64) -> Result<Vec<SweepPoint>> {
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must be at least 2".into()));
    }
    let cap = analysis::horodecki_max_chsh(&make_state(space.state)?)?.min(TSIRELSON_BOUND);
    let mut raw = Vec::with_capacity(grid);
    for i in 0..grid {
        let target = cap * i as f64 / (grid - 1) as f64;
        let score = s1_pinned_score(target, SWEEP_TOL);
        let outcomes = run_restarts(
            space,
            &score,
            seed,
            DEFAULT_RESTARTS,
            (i as u64) * DEFAULT_RESTARTS as u64,
        );
        let idx = select_best(&outcomes)?;
        let strategy = space.decode(&outcomes[idx].x)?;
        let point = evaluate_strategy(&strategy)?;
        raw.push((target, point.values()[0], point.values()[1]));
    }

    let achieved: Vec<[f64; 2]> = raw.iter().map(|&(_, s1, s2)| [s1, s2]).collect();
    let hull = boundary::upper_envelope(&achieved, &[], 2)?;
    let [lo, hi] = hull.span();
    Ok(raw
        .into_iter()
        .map(|(target, s1_achieved, s2_raw)| {
            // The hull at an achieved abscissa mixes achieved strategies,
            // so the closed value stays feasible.
            let closed = hull.value(s1_achieved.clamp(lo, hi)).unwrap_or(s2_raw);
            SweepPoint {
                s1_target: target,
                s1_achieved,
                s2_best: s2_raw.max(closed),
                template: space.label.clone(),
                seed,
            }
        })
        .collect())
}

/// CSV rows `s1_target,s1_achieved,s2_best,template,seed`, 12 decimals.
pub fn sweep_to_csv(points: &[SweepPoint]) -> String {
    let mut out = String::from("s1_target,s1_achieved,s2_best,template,seed\n");
    for p in points {
        writeln!(
            out,
            "{:.12},{:.12},{:.12},{},{}",
            p.s1_target, p.s1_achieved, p.s2_best, p.template, p.seed
        )
        .expect("string write");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn maxent_rank_space() -> SearchSpace {
        SearchSpace::rank_classes(StateKind::MaximallyEntangled).unwrap()
    }

    #[test]
    fn space_parameter_layout() {
        let space = maxent_rank_space();
        assert_eq!(space.pair_count(), 2);
        // case i: w + 2a + 2*(angle+2u) + 2c = 11; case ii: w + 2a + 2u + 2c = 7;
        // case iii: w + 2a + (u) + (angle+2u) + 2c = 9.
        assert_eq!(space.parameters().len(), 11 + 7 + 9);

        let indep = SearchSpace::mixture(
            StateKind::MaximallyEntangled,
            vec![BranchTemplate::case_i(1), BranchTemplate::case_iii(1)],
            true,
        )
        .unwrap();
        // shared 4 + (w + 6) + (w + 4)
        assert_eq!(indep.parameters().len(), 16);
        assert!(indep.independence_mode());

        let triple = SearchSpace::triple_structured();
        assert_eq!(triple.pair_count(), 3);
        assert_eq!(triple.parameters().len(), 6);
    }

    #[test]
    fn decode_rejects_bad_vectors() {
        let space = maxent_rank_space();
        assert!(matches!(
            space.decode(&[0.0; 3]),
            Err(Error::InvalidArgument(_))
        ));
        let mut x = vec![0.3; space.parameters().len()];
        x[5] = f64::NAN;
        assert!(matches!(space.decode(&x), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn searches_are_deterministic() {
        let space = SearchSpace::triple_structured();
        let a = maximize_equal_violations(&space, 3, 11).unwrap();
        let b = maximize_equal_violations(&space, 3, 11).unwrap();
        assert_eq!(a.objective.to_bits(), b.objective.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
        for (x, y) in a.best_point.values().iter().zip(b.best_point.values()) {
            assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn best_point_reproduces_from_strategy() {
        let space = SearchSpace::single(
            StateKind::MaximallyEntangled,
            BranchTemplate::case_i(1),
        )
        .unwrap();
        let result = maximize_s2_at_s1(&space, 2.4, 1e-4, 3).unwrap();
        let again = evaluate_strategy(&result.best_strategy).unwrap();
        for (x, y) in result.best_point.values().iter().zip(again.values()) {
            assert!((x - y).abs() <= 1e-12);
        }
        // The quadratic penalty trades |S1 - target| slack beyond tol at
        // a rate of |slope| / (2 * S1_PENALTY).
        let [s1, s2] = [result.best_point.values()[0], result.best_point.values()[1]];
        assert!((s1 - 2.4).abs() <= 1e-4 + 5e-4, "s1 = {s1}");
        let oracle = boundary::Curve::case_i().value(s1).unwrap();
        assert!((s2 - oracle).abs() <= 1e-3, "s2 = {s2} vs {oracle}");
    }

    #[test]
    fn restart_prefix_best_is_monotone() {
        let space = SearchSpace::triple_structured();
        let score = |point: &TradeoffPoint| point.min();
        let outcomes = run_restarts(&space, &score, 5, 8, 0);
        let mut best = f64::NEG_INFINITY;
        let mut history = Vec::new();
        for outcome in &outcomes {
            best = best.max(outcome.objective);
            history.push(best);
        }
        for pair in history.windows(2) {
            assert!(pair[1] >= pair[0]);
        }
    }

    #[test]
    fn equal_violation_pair_search_reaches_the_fixed_point() {
        let space = SearchSpace::mixture(
            StateKind::MaximallyEntangled,
            vec![BranchTemplate::case_i(1), BranchTemplate::case_iii(1)],
            false,
        )
        .unwrap();
        let result = maximize_equal_violations(&space, 2, 0).unwrap();
        let target = 2.0 * 10.0_f64.sqrt() / 3.0;
        assert!(
            result.best_point.min() >= target - 1e-4,
            "best {:?}",
            result.best_point.values()
        );
    }

    #[test]
    fn triple_search_reaches_known_value() {
        let space = SearchSpace::triple_structured();
        let result = maximize_equal_violations(&space, 3, 0).unwrap();
        assert!(
            result.best_point.min() >= 2.0022,
            "best {:?}",
            result.best_point.values()
        );
        assert!(result.evaluations <= (DEFAULT_RESTARTS * MAX_EVALS_PER_RESTART) as u64);
    }

    #[test]
    fn pinned_search_handles_extreme_targets() {
        let result = maximize_s2_at_s1(&maxent_rank_space(), 0.0, 1e-4, 1).unwrap();
        assert!(
            result.best_point.values()[1] >= 2.0 * SQRT_2 - 5e-3,
            "best {:?}",
            result.best_point.values()
        );
    }

    #[test]
    fn pinned_search_rejects_bad_targets() {
        let space = maxent_rank_space();
        assert!(matches!(
            maximize_s2_at_s1(&space, 3.0, 1e-4, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            maximize_s2_at_s1(&space, 2.0, -1.0, 0),
            Err(Error::InvalidArgument(_))
        ));
        let noisy = SearchSpace::rank_classes(StateKind::Isotropic { visibility: 0.5 }).unwrap();
        assert!(matches!(
            maximize_s2_at_s1(&noisy, 2.0, 1e-4, 0),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn equal_violation_search_validates_pair_count() {
        let space = maxent_rank_space();
        assert!(matches!(
            maximize_equal_violations(&space, 3, 0),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            maximize_equal_violations(&space, 5, 0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn sweep_respects_boundary_and_csv_format() {
        let space = maxent_rank_space();
        let grid = 7;
        let points = sweep_boundary(&space, grid, 2).unwrap();
        assert_eq!(points.len(), grid);
        let oracle = boundary::optimal_boundary();
        for p in &points {
            // Near the vertical tangent at the cap the quadratic penalty
            // trades several 1e-3 of S1 slack for S2.
            assert!((p.s1_achieved - p.s1_target).abs() <= 2e-2);
            let bound = oracle.value(p.s1_achieved).unwrap();
            assert!(
                p.s2_best <= bound + 1e-6,
                "sweep exceeds the boundary at {}: {} vs {bound}",
                p.s1_achieved,
                p.s2_best
            );
            assert!(
                p.s2_best >= bound - 2e-2,
                "sweep far below the boundary at {}: {} vs {bound}",
                p.s1_achieved,
                p.s2_best
            );
        }
        let csv = sweep_to_csv(&points);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next(),
            Some("s1_target,s1_achieved,s2_best,template,seed")
        );
        assert_eq!(lines.clone().count(), grid);
        let first = lines.next().unwrap();
        assert_eq!(first.split(',').count(), 5);

        assert!(matches!(
            sweep_boundary(&space, 1, 0),
            Err(Error::InvalidArgument(_))
        ));
    }
}
