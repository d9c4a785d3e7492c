//! Named strategy constructions with known closed-form trade-offs.
//!
//! Every constructor here is backed by an analytic expression in
//! [`closed_form`]; the tests check that simulated evaluation reproduces
//! those expressions to numerical precision.

use std::f64::consts::{E, FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use crate::scenario::{
    evaluate_branch, evaluate_strategy, make_state, DeterministicBranch, InstrumentSetting,
    PlanarObservable, ProjectiveInstrument, SequentialStrategy, StateKind, UnitaryOp,
};
use crate::{Error, Result};

/// Bisection width below which an equalizing weight is accepted.
const EQUALIZE_TOL: f64 = 1e-12;

/// Branch angles (phi, phi_hat, phi_tilde) of the known triple violation,
/// reaching S_1 = S_2 = S_3 of roughly 2.00227 under equalizing weights.
pub const TRIPLE_ANGLES: [f64; 3] = [
    31.0 * PI / 132.0,
    88.0 * PI / 245.0,
    16.0 * PI / 33.0,
];

/// Stable strategy identifiers accepted by [`from_id`].
pub const STRATEGY_IDS: [&str; 11] = [
    "tsirelson",
    "maxent.case_i",
    "maxent.case_ii",
    "maxent.case_iii",
    "maxent.fixed_point",
    "partial.case_i",
    "partial.case_ii",
    "partial.case_iii",
    "independent",
    "appendixC",
    "appendixD",
];

/// Analytic trade-off values realized by the catalog constructions.
pub mod closed_form {
    use std::f64::consts::SQRT_2;

    /// Both relay settings basis measurements at `phi`, with compensating
    /// rotations.
    pub fn maxent_i(phi: f64) -> [f64; 2] {
        [
            2.0 * SQRT_2 * phi.cos(),
            SQRT_2 * (phi.cos() + phi.sin()),
        ]
    }

    /// One trivial and one basis relay setting, diagonal first-party
    /// observables at `theta`.
    pub fn maxent_iii(theta: f64) -> [f64; 2] {
        [2.0 * theta.sin(), theta.cos() + 2.0 * theta.sin()]
    }

    /// Basis relay measurements at `phi` on a partially entangled state.
    pub fn partial_i(ent_angle: f64, phi: f64) -> [f64; 2] {
        let m = (2.0 * ent_angle).sin();
        [2.0 * (phi.cos() * m + phi.sin()), 2.0 * phi.sin()]
    }

    /// Trivial relay on a partially entangled state; the final pair plays
    /// its optimal settings.
    pub fn partial_ii(ent_angle: f64) -> [f64; 2] {
        let m = (2.0 * ent_angle).sin();
        [
            2.0 * (2.0 * ent_angle).cos(),
            2.0 * (1.0 + m * m).sqrt(),
        ]
    }

    /// One trivial and one basis relay setting on a partially entangled
    /// state.
    pub fn partial_iii(ent_angle: f64, theta: f64) -> [f64; 2] {
        let m = (2.0 * ent_angle).sin();
        [
            2.0 * (theta + 2.0 * ent_angle).sin(),
            theta.sin() + 2.0 * theta.cos() * m,
        ]
    }

    /// Three-pair chain: compensated basis relay, then repeated basis
    /// measurements that the relayed state is already diagonal in.
    pub fn triple_1(phi: f64) -> [f64; 3] {
        let tail = SQRT_2 * (phi.cos() + phi.sin());
        [2.0 * SQRT_2 * phi.cos(), tail, tail]
    }

    /// Three-pair chain: one half-trivial relay, then a full basis pair.
    pub fn triple_2(phi_hat: f64) -> [f64; 3] {
        let (s, c) = phi_hat.sin_cos();
        [2.0 * s, c + 2.0 * s, 0.5 * c + s]
    }

    /// Three-pair chain: two half-trivial relays.
    pub fn triple_3(phi_tilde: f64) -> [f64; 3] {
        let (s, c) = phi_tilde.sin_cos();
        [2.0 * s, 2.0 * s, 0.5 * (c + 4.0 * s)]
    }
}

/// The three projective relay families on the maximally entangled state.
#[derive(Clone, Copy, Debug)]
pub enum MaxentCase {
    /// Both relay settings are basis measurements at `phi` and pi/2 - `phi`,
    /// compensated by a conditional rotation.
    I { phi: f64 },
    /// Both relay settings are trivial; the untouched state violates
    /// maximally with the final party.
    Ii,
    /// One trivial and one basis relay setting.
    Iii { theta: f64 },
}

/// The same three families on a partially entangled state.
#[derive(Clone, Copy, Debug)]
pub enum PartialCase {
    I { ent_angle: f64, phi: f64 },
    Ii { ent_angle: f64 },
    Iii { ent_angle: f64, theta: f64 },
}

fn obs(angle: f64) -> Result<PlanarObservable> {
    PlanarObservable::new(angle)
}

fn check_range(name: &str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} = {value} outside [{lo}, {hi}]"
        )))
    }
}

pub fn maxent_branch(case: MaxentCase) -> Result<DeterministicBranch> {
    let state = make_state(StateKind::MaximallyEntangled)?;
    match case {
        MaxentCase::I { phi } => {
            check_range("phi", phi, 0.0, FRAC_PI_2)?;
            let rot = UnitaryOp::y_rotation(phi - FRAC_PI_4);
            Ok(DeterministicBranch {
                state,
                a_observables: [obs(FRAC_PI_4)?, obs(-FRAC_PI_4)?],
                instruments: vec![ProjectiveInstrument::new([
                    InstrumentSetting::basis(phi)?,
                    InstrumentSetting::basis(FRAC_PI_2 - phi)?.with_unitaries([rot, rot]),
                ])],
                final_observables: [obs(phi)?; 2],
            })
        }
        MaxentCase::Ii => Ok(DeterministicBranch {
            state,
            a_observables: [obs(FRAC_PI_4)?, obs(-FRAC_PI_4)?],
            instruments: vec![ProjectiveInstrument::new([
                InstrumentSetting::trivial_zero(),
                InstrumentSetting::trivial_zero(),
            ])],
            final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
        }),
        MaxentCase::Iii { theta } => {
            check_range("theta", theta, 0.0, FRAC_PI_2)?;
            Ok(DeterministicBranch {
                state,
                a_observables: [obs(theta)?, obs(-theta)?],
                instruments: vec![ProjectiveInstrument::new([
                    InstrumentSetting::trivial_zero(),
                    InstrumentSetting::basis(FRAC_PI_2)?,
                ])],
                final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
            })
        }
    }
}

pub fn partial_branch(case: PartialCase) -> Result<DeterministicBranch> {
    let ent_angle = match case {
        PartialCase::I { ent_angle, .. }
        | PartialCase::Ii { ent_angle }
        | PartialCase::Iii { ent_angle, .. } => ent_angle,
    };
    if !(ent_angle.is_finite() && ent_angle > 0.0 && ent_angle <= FRAC_PI_4) {
        return Err(Error::InvalidArgument(format!(
            "ent_angle = {ent_angle} outside (0, pi/4]"
        )));
    }
    let state = make_state(StateKind::Partial { ent_angle })?;
    match case {
        PartialCase::I { phi, .. } => {
            check_range("phi", phi, 0.0, FRAC_PI_2)?;
            let rot = UnitaryOp::y_rotation(phi - FRAC_PI_2);
            Ok(DeterministicBranch {
                state,
                a_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
                instruments: vec![ProjectiveInstrument::new([
                    InstrumentSetting::basis(phi)?,
                    InstrumentSetting::basis(-phi)?.with_unitaries([rot, rot]),
                ])],
                final_observables: [obs(phi)?, obs(phi + PI)?],
            })
        }
        PartialCase::Ii { .. } => {
            let beta = (2.0 * ent_angle).sin().atan();
            Ok(DeterministicBranch {
                state,
                a_observables: [obs(FRAC_PI_2)?, obs(0.0)?],
                instruments: vec![ProjectiveInstrument::new([
                    InstrumentSetting::trivial_zero(),
                    InstrumentSetting::trivial_zero(),
                ])],
                final_observables: [obs(FRAC_PI_2 - beta)?, obs(FRAC_PI_2 + beta)?],
            })
        }
        PartialCase::Iii { theta, .. } => {
            check_range("theta", theta, 0.0, PI)?;
            Ok(DeterministicBranch {
                state,
                a_observables: [obs(theta)?, obs(PI - theta)?],
                instruments: vec![ProjectiveInstrument::new([
                    InstrumentSetting::trivial_zero(),
                    InstrumentSetting::basis(0.0)?,
                ])],
                final_observables: [obs(FRAC_PI_2)?, obs(0.0)?],
            })
        }
    }
}

/// Two-branch strategy without shared randomness: A and C play fixed
/// settings while B locally randomizes between a measuring branch
/// (weight `q`) and a half-trivial branch.
pub fn independent_strategy(q: f64) -> Result<SequentialStrategy> {
    check_range("q", q, 0.0, 1.0)?;
    let state = make_state(StateKind::MaximallyEntangled)?;
    let a = [obs(PI / 6.0)?, obs(-2.0)?];
    let c = [obs(-2.0 * PI / (3.0 * E))?, obs(1.0 / 3.0)?];
    let relay_rot = UnitaryOp::y_rotation(-2.0 * PI / 27.0);

    let measuring = DeterministicBranch {
        state: state.clone(),
        a_observables: a,
        instruments: vec![ProjectiveInstrument::new([
            InstrumentSetting::basis(2.0 / 17.0)?,
            InstrumentSetting::basis(FRAC_PI_4)?.with_unitaries([relay_rot, relay_rot]),
        ])],
        final_observables: c,
    };
    let idle = DeterministicBranch {
        state,
        a_observables: a,
        instruments: vec![ProjectiveInstrument::new([
            InstrumentSetting::trivial_zero().with_unitaries([
                UnitaryOp::y_rotation(-5.0 * PI / 81.0),
                UnitaryOp::identity(),
            ]),
            InstrumentSetting::basis(FRAC_PI_4)?.with_unitaries([relay_rot, relay_rot]),
        ])],
        final_observables: c,
    };
    SequentialStrategy::new(vec![(q, measuring), (1.0 - q, idle)])
}

/// Two-branch strategy whose relay measurements are never followed by a
/// unitary: a Tsirelson branch (weight `q`) mixed with a half-trivial
/// branch using skewed first-party observables.
pub fn no_unitary_strategy(q: f64) -> Result<SequentialStrategy> {
    check_range("q", q, 0.0, 1.0)?;
    let state = make_state(StateKind::MaximallyEntangled)?;
    let skew = 2.0_f64.atan();
    let tsirelson = DeterministicBranch {
        state: state.clone(),
        a_observables: [obs(FRAC_PI_4)?, obs(-FRAC_PI_4)?],
        instruments: vec![ProjectiveInstrument::new([
            InstrumentSetting::basis(0.0)?,
            InstrumentSetting::basis(FRAC_PI_2)?,
        ])],
        final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
    };
    let half_trivial = DeterministicBranch {
        state,
        a_observables: [obs(skew)?, obs(-skew)?],
        instruments: vec![ProjectiveInstrument::new([
            InstrumentSetting::trivial_zero(),
            InstrumentSetting::basis(FRAC_PI_2)?,
        ])],
        final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
    };
    SequentialStrategy::new(vec![(q, tsirelson), (1.0 - q, half_trivial)])
}

fn triple_branch_1(phi: f64) -> Result<DeterministicBranch> {
    check_range("phi", phi, 0.0, FRAC_PI_2)?;
    let rot = UnitaryOp::y_rotation(phi - FRAC_PI_4);
    Ok(DeterministicBranch {
        state: make_state(StateKind::MaximallyEntangled)?,
        a_observables: [obs(FRAC_PI_4)?, obs(-FRAC_PI_4)?],
        instruments: vec![
            ProjectiveInstrument::new([
                InstrumentSetting::basis(phi)?,
                InstrumentSetting::basis(FRAC_PI_2 - phi)?.with_unitaries([rot, rot]),
            ]),
            // The relayed state is diagonal in this basis, so the repeat
            // measurement relays it unchanged.
            ProjectiveInstrument::new([
                InstrumentSetting::basis(phi)?,
                InstrumentSetting::basis(phi)?,
            ]),
        ],
        final_observables: [obs(phi)?; 2],
    })
}

fn triple_branch_2(phi_hat: f64) -> Result<DeterministicBranch> {
    check_range("phi_hat", phi_hat, 0.0, FRAC_PI_2)?;
    Ok(DeterministicBranch {
        state: make_state(StateKind::MaximallyEntangled)?,
        a_observables: [obs(phi_hat)?, obs(-phi_hat)?],
        instruments: vec![
            ProjectiveInstrument::new([
                InstrumentSetting::trivial_zero(),
                InstrumentSetting::basis(FRAC_PI_2)?,
            ]),
            ProjectiveInstrument::new([
                InstrumentSetting::basis(0.0)?,
                InstrumentSetting::basis(FRAC_PI_2)?,
            ]),
        ],
        final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
    })
}

fn triple_branch_3(phi_tilde: f64) -> Result<DeterministicBranch> {
    check_range("phi_tilde", phi_tilde, 0.0, FRAC_PI_2)?;
    let half_trivial = ProjectiveInstrument::new([
        InstrumentSetting::trivial_zero(),
        InstrumentSetting::basis(FRAC_PI_2)?,
    ]);
    Ok(DeterministicBranch {
        state: make_state(StateKind::MaximallyEntangled)?,
        a_observables: [obs(phi_tilde)?, obs(-phi_tilde)?],
        instruments: vec![half_trivial, half_trivial],
        final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
    })
}

/// Three-branch, three-pair strategy mixing the chains behind
/// [`closed_form::triple_1`], [`closed_form::triple_2`] and
/// [`closed_form::triple_3`].
pub fn triple_strategy(
    phi: f64,
    phi_hat: f64,
    phi_tilde: f64,
    weights: [f64; 3],
) -> Result<SequentialStrategy> {
    SequentialStrategy::new(vec![
        (weights[0], triple_branch_1(phi)?),
        (weights[1], triple_branch_2(phi_hat)?),
        (weights[2], triple_branch_3(phi_tilde)?),
    ])
}

/// Single-pair strategy saturating the Tsirelson bound.
pub fn tsirelson_branch() -> Result<DeterministicBranch> {
    Ok(DeterministicBranch {
        state: make_state(StateKind::MaximallyEntangled)?,
        a_observables: [obs(FRAC_PI_4)?, obs(-FRAC_PI_4)?],
        instruments: Vec::new(),
        final_observables: [obs(0.0)?, obs(FRAC_PI_2)?],
    })
}

/// Finds the first-branch weight at which a two-branch mixture reaches
/// S_1 = S_2, by bisection on the simulated difference.
pub fn equalizing_weight<F>(make: F) -> Result<f64>
where
    F: Fn(f64) -> Result<SequentialStrategy>,
{
    let diff = |q: f64| -> Result<f64> {
        let point = evaluate_strategy(&make(q)?)?;
        let s = point.values();
        Ok(s[0] - s[1])
    };
    let mut lo = 0.0_f64;
    let mut hi = 1.0_f64;
    let mut d_lo = diff(lo)?;
    if d_lo == 0.0 {
        return Ok(lo);
    }
    let d_hi = diff(hi)?;
    if d_hi == 0.0 {
        return Ok(hi);
    }
    if d_lo.signum() == d_hi.signum() {
        return Err(Error::NotFound(
            "no equalizing weight: S1 - S2 does not change sign on [0, 1]".into(),
        ));
    }
    while hi - lo > EQUALIZE_TOL {
        let mid = 0.5 * (lo + hi);
        let d_mid = diff(mid)?;
        if d_mid == 0.0 {
            return Ok(mid);
        }
        if d_mid.signum() == d_lo.signum() {
            lo = mid;
            d_lo = d_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Weights making all three values of [`triple_strategy`] equal, solved
/// from the simulated per-branch values.
pub fn triple_equalizing_weights(
    phi: f64,
    phi_hat: f64,
    phi_tilde: f64,
) -> Result<[f64; 3]> {
    let points = [
        evaluate_branch(&triple_branch_1(phi)?)?,
        evaluate_branch(&triple_branch_2(phi_hat)?)?,
        evaluate_branch(&triple_branch_3(phi_tilde)?)?,
    ];
    let mut a = [[0.0; 3]; 3];
    let b = [0.0, 0.0, 1.0];
    for (j, point) in points.iter().enumerate() {
        let s = point.values();
        a[0][j] = s[0] - s[1];
        a[1][j] = s[0] - s[2];
        a[2][j] = 1.0;
    }
    let q = solve_3x3(a, b)?;
    for (j, w) in q.iter().enumerate() {
        if !(w.is_finite() && (-1e-12..=1.0 + 1e-12).contains(w)) {
            return Err(Error::NotFound(format!(
                "equalizing weight q[{j}] = {w} outside [0, 1]"
            )));
        }
    }
    Ok(q.map(|w| w.clamp(0.0, 1.0)))
}

fn solve_3x3(a: [[f64; 3]; 3], b: [f64; 3]) -> Result<[f64; 3]> {
    fn det3(m: &[[f64; 3]; 3]) -> f64 {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }
    let d = det3(&a);
    if d.abs() < 1e-14 {
        return Err(Error::Numerical("singular equalizing system".into()));
    }
    let mut out = [0.0; 3];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut m = a;
        for row in 0..3 {
            m[row][k] = b[row];
        }
        *slot = det3(&m) / d;
    }
    Ok(out)
}

/// Equal double violation at the boundary's self-consistent point
/// S_1 = S_2 = 2 sqrt(10) / 3.
pub fn fixed_point_strategy() -> Result<SequentialStrategy> {
    let theta = (3.0 / 10.0_f64.sqrt()).asin();
    let phi = (2.0 / 5.0_f64.sqrt()).acos();
    let make = |q: f64| {
        SequentialStrategy::new(vec![
            (q, maxent_branch(MaxentCase::Iii { theta })?),
            (1.0 - q, maxent_branch(MaxentCase::I { phi })?),
        ])
    };
    let q = equalizing_weight(&make)?;
    make(q)
}

/// Two-branch mixture with S_1 = S_2 > 2 for any entanglement angle:
/// the trivial-relay point mixed along its tangent into the basis-relay
/// curve, at the equalizing weight.
pub fn double_violation_strategy(ent_angle: f64) -> Result<SequentialStrategy> {
    let point = closed_form::partial_ii(ent_angle);
    let curve = crate::boundary::Curve::partial_i(ent_angle)?;
    let tangent = crate::boundary::tangent_from_point(point[0], point[1], &curve)?;
    let touch_y = curve.value(tangent.touch)?;
    let phi = (0.5 * touch_y).asin();
    let check = closed_form::partial_i(ent_angle, phi);
    if (check[0] - tangent.touch).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "tangency angle inversion drifted: S_1({phi}) = {} vs touch {}",
            check[0], tangent.touch
        )));
    }
    let make = |q: f64| {
        SequentialStrategy::new(vec![
            (q, partial_branch(PartialCase::Ii { ent_angle })?),
            (1.0 - q, partial_branch(PartialCase::I { ent_angle, phi })?),
        ])
    };
    let q = equalizing_weight(&make)?;
    make(q)
}

/// Optional parameter overrides for [`from_id`]; `None` falls back to
/// each entry's canonical value.
#[derive(Clone, Copy, Debug, Default)]
pub struct CatalogParams {
    /// Measurement angle (phi or theta) for single-angle families.
    pub angle: Option<f64>,
    /// Entanglement angle for partially entangled states.
    pub ent_angle: Option<f64>,
    /// First-branch weight for two-branch mixtures.
    pub weight: Option<f64>,
}

/// Looks up a strategy by its stable identifier (see [`STRATEGY_IDS`]).
pub fn from_id(id: &str, params: CatalogParams) -> Result<SequentialStrategy> {
    let ent_angle = params.ent_angle.unwrap_or(FRAC_PI_8);
    match id {
        "tsirelson" => Ok(SequentialStrategy::single(tsirelson_branch()?)),
        "maxent.case_i" => Ok(SequentialStrategy::single(maxent_branch(MaxentCase::I {
            phi: params.angle.unwrap_or(PI / 6.0),
        })?)),
        "maxent.case_ii" => Ok(SequentialStrategy::single(maxent_branch(MaxentCase::Ii)?)),
        "maxent.case_iii" => {
            let theta = params
                .angle
                .unwrap_or_else(|| (2.0 / 5.0_f64.sqrt()).asin());
            Ok(SequentialStrategy::single(maxent_branch(
                MaxentCase::Iii { theta },
            )?))
        }
        "maxent.fixed_point" => fixed_point_strategy(),
        "partial.case_i" => Ok(SequentialStrategy::single(partial_branch(
            PartialCase::I {
                ent_angle,
                phi: params.angle.unwrap_or(PI / 3.0),
            },
        )?)),
        "partial.case_ii" => Ok(SequentialStrategy::single(partial_branch(
            PartialCase::Ii { ent_angle },
        )?)),
        "partial.case_iii" => Ok(SequentialStrategy::single(partial_branch(
            PartialCase::Iii {
                ent_angle,
                theta: params.angle.unwrap_or(PI / 6.0),
            },
        )?)),
        "independent" => {
            let q = match params.weight {
                Some(q) => q,
                None => equalizing_weight(independent_strategy)?,
            };
            independent_strategy(q)
        }
        "appendixC" => {
            let q = match params.weight {
                Some(q) => q,
                None => equalizing_weight(no_unitary_strategy)?,
            };
            no_unitary_strategy(q)
        }
        "appendixD" => {
            let [phi, phi_hat, phi_tilde] = TRIPLE_ANGLES;
            let weights = triple_equalizing_weights(phi, phi_hat, phi_tilde)?;
            triple_strategy(phi, phi_hat, phi_tilde, weights)
        }
        _ => Err(Error::NotFound(format!("unknown strategy id \"{id}\""))),
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::SQRT_2;

    use super::*;
    use crate::scenario::TradeoffPoint;
    use proptest::prelude::*;

    fn assert_point(point: &TradeoffPoint, expect: &[f64], tol: f64) {
        let got = point.values();
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(expect) {
            assert!(
                (g - e).abs() <= tol,
                "got {got:?}, expected {expect:?} within {tol}"
            );
        }
    }

    fn eval_branch(branch: DeterministicBranch) -> TradeoffPoint {
        evaluate_branch(&branch).unwrap()
    }

    #[test]
    fn tsirelson_branch_saturates_bound() {
        let point = eval_branch(tsirelson_branch().unwrap());
        assert_point(&point, &[2.0 * SQRT_2], 1e-12);
    }

    #[test]
    fn maxent_i_endpoints() {
        let point = eval_branch(maxent_branch(MaxentCase::I { phi: 0.0 }).unwrap());
        assert_point(&point, &[2.0 * SQRT_2, SQRT_2], 1e-12);

        let point = eval_branch(maxent_branch(MaxentCase::I { phi: FRAC_PI_4 }).unwrap());
        assert_point(&point, &[2.0, 2.0], 1e-12);
    }

    #[test]
    fn maxent_i_interior_point() {
        let point = eval_branch(maxent_branch(MaxentCase::I { phi: PI / 6.0 }).unwrap());
        let expect = [6.0_f64.sqrt(), SQRT_2 * (3.0_f64.sqrt() + 1.0) / 2.0];
        assert_point(&point, &expect, 1e-12);
    }

    #[test]
    fn maxent_ii_single_point() {
        let point = eval_branch(maxent_branch(MaxentCase::Ii).unwrap());
        assert_point(&point, &[0.0, 2.0 * SQRT_2], 1e-12);
    }

    #[test]
    fn maxent_iii_peak() {
        let theta = (2.0 / 5.0_f64.sqrt()).asin();
        let point = eval_branch(maxent_branch(MaxentCase::Iii { theta }).unwrap());
        assert_point(&point, &[4.0 / 5.0_f64.sqrt(), 5.0_f64.sqrt()], 1e-12);
    }

    #[test]
    fn partial_ii_frozen_points() {
        let point = eval_branch(partial_branch(PartialCase::Ii { ent_angle: FRAC_PI_8 }).unwrap());
        assert_point(&point, &[SQRT_2, 6.0_f64.sqrt()], 1e-12);

        let point = eval_branch(partial_branch(PartialCase::Ii { ent_angle: FRAC_PI_4 }).unwrap());
        assert_point(&point, &[0.0, 2.0 * SQRT_2], 1e-12);
    }

    #[test]
    fn partial_i_at_max_entanglement_lies_on_maxent_curve() {
        for k in 0..=20 {
            let phi = FRAC_PI_4 + (FRAC_PI_4 / 20.0) * k as f64;
            let point = eval_branch(
                partial_branch(PartialCase::I {
                    ent_angle: FRAC_PI_4,
                    phi,
                })
                .unwrap(),
            );
            let s = point.values();
            let on_curve = 0.5 * (s[0] + (8.0 - s[0] * s[0]).max(0.0).sqrt());
            assert!(
                (s[1] - on_curve).abs() <= 1e-10,
                "phi = {phi}: ({}, {}) off the curve",
                s[0],
                s[1]
            );
        }
    }

    #[test]
    fn no_unitary_endpoints() {
        let point = evaluate_strategy(&no_unitary_strategy(1.0).unwrap()).unwrap();
        assert_point(&point, &[2.0 * SQRT_2, SQRT_2], 1e-12);

        let point = evaluate_strategy(&no_unitary_strategy(0.0).unwrap()).unwrap();
        assert_point(&point, &[4.0 / 5.0_f64.sqrt(), 5.0_f64.sqrt()], 1e-12);
    }

    #[test]
    fn no_unitary_equalizing_matches_closed_form() {
        let q = equalizing_weight(no_unitary_strategy).unwrap();
        assert!((q - 1.0 / (1.0 + 10.0_f64.sqrt())).abs() <= 1e-9);

        let point = evaluate_strategy(&no_unitary_strategy(q).unwrap()).unwrap();
        let expect = 6.0 * 10.0_f64.sqrt() / (5.0 * SQRT_2 + 5.0_f64.sqrt());
        assert_point(&point, &[expect, expect], 1e-9);
    }

    #[test]
    fn independent_equalizing_near_reported_values() {
        let q = equalizing_weight(independent_strategy).unwrap();
        assert!((q - 0.358).abs() <= 1e-3, "q = {q}");

        let point = evaluate_strategy(&independent_strategy(q).unwrap()).unwrap();
        let s = point.values();
        assert!((s[0] - s[1]).abs() <= 1e-9);
        assert!((s[0] - 2.046).abs() <= 1e-3, "S = {}", s[0]);
    }

    #[test]
    fn independent_idle_branch_first_pair_is_classical() {
        let point = evaluate_strategy(&independent_strategy(0.0).unwrap()).unwrap();
        assert!(point.values()[0] <= 2.0 + 1e-12);
    }

    #[test]
    fn triple_branch_frozen_points() {
        let point =
            evaluate_strategy(&triple_strategy(0.0, 0.1, 0.1, [1.0, 0.0, 0.0]).unwrap()).unwrap();
        assert_point(&point, &[2.0 * SQRT_2, SQRT_2, SQRT_2], 1e-12);

        let point = evaluate_strategy(
            &triple_strategy(0.1, FRAC_PI_2, 0.1, [0.0, 1.0, 0.0]).unwrap(),
        )
        .unwrap();
        assert_point(&point, &[2.0, 2.0, 1.0], 1e-12);

        let point = evaluate_strategy(
            &triple_strategy(0.1, 0.1, FRAC_PI_4, [0.0, 0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let expect = closed_form::triple_3(FRAC_PI_4);
        assert_point(&point, &expect, 1e-12);
    }

    #[test]
    fn triple_equalized_value() {
        let [phi, phi_hat, phi_tilde] = TRIPLE_ANGLES;
        let weights = triple_equalizing_weights(phi, phi_hat, phi_tilde).unwrap();
        let point = evaluate_strategy(
            &triple_strategy(phi, phi_hat, phi_tilde, weights).unwrap(),
        )
        .unwrap();
        let s = point.values();
        assert!((s[0] - s[1]).abs() <= 1e-9);
        assert!((s[0] - s[2]).abs() <= 1e-9);
        assert!((s[0] - 2.00227).abs() <= 1e-4, "S = {}", s[0]);
    }

    #[test]
    fn fixed_point_equal_double_violation() {
        let point = evaluate_strategy(&fixed_point_strategy().unwrap()).unwrap();
        let expect = 2.0 * 10.0_f64.sqrt() / 3.0;
        assert_point(&point, &[expect, expect], 1e-9);
    }

    #[test]
    fn double_violation_holds_for_weak_entanglement() {
        for ent_angle in [0.1, 0.2, 0.3, 0.5, FRAC_PI_4] {
            let point =
                evaluate_strategy(&double_violation_strategy(ent_angle).unwrap()).unwrap();
            let s = point.values();
            assert!((s[0] - s[1]).abs() <= 1e-9, "ent {ent_angle}: {s:?}");
            assert!(point.min() > 2.0, "ent {ent_angle}: {s:?}");
        }
    }

    #[test]
    fn rejects_out_of_range_parameters() {
        assert!(maxent_branch(MaxentCase::I { phi: -0.1 }).is_err());
        assert!(maxent_branch(MaxentCase::Iii { theta: 2.0 }).is_err());
        assert!(partial_branch(PartialCase::Ii { ent_angle: 0.0 }).is_err());
        assert!(partial_branch(PartialCase::Ii { ent_angle: 1.0 }).is_err());
        assert!(independent_strategy(1.5).is_err());
        assert!(no_unitary_strategy(f64::NAN).is_err());
        assert!(triple_strategy(0.1, 0.1, 0.1, [0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn from_id_covers_every_identifier() {
        for id in STRATEGY_IDS {
            let strategy = from_id(id, CatalogParams::default()).unwrap();
            let point = evaluate_strategy(&strategy).unwrap();
            for s in point.values() {
                assert!(s.abs() <= 2.0 * SQRT_2 + 1e-9, "{id}: S = {s}");
            }
        }
        assert!(matches!(
            from_id("unknown", CatalogParams::default()),
            Err(Error::NotFound(_))
        ));
    }

    #[test]
    fn from_id_applies_overrides() {
        let params = CatalogParams {
            angle: Some(0.0),
            ..CatalogParams::default()
        };
        let point = evaluate_strategy(&from_id("maxent.case_i", params).unwrap()).unwrap();
        assert_point(&point, &[2.0 * SQRT_2, SQRT_2], 1e-12);

        let params = CatalogParams {
            weight: Some(1.0),
            ..CatalogParams::default()
        };
        let point = evaluate_strategy(&from_id("appendixC", params).unwrap()).unwrap();
        assert_point(&point, &[2.0 * SQRT_2, SQRT_2], 1e-12);
    }

    proptest! {
        #[test]
        fn maxent_i_matches_closed_form(phi in 0.0..FRAC_PI_2) {
            let point = eval_branch(maxent_branch(MaxentCase::I { phi }).unwrap());
            assert_point(&point, &closed_form::maxent_i(phi), 1e-10);
        }

        #[test]
        fn maxent_iii_matches_closed_form(theta in 0.0..FRAC_PI_2) {
            let point = eval_branch(maxent_branch(MaxentCase::Iii { theta }).unwrap());
            assert_point(&point, &closed_form::maxent_iii(theta), 1e-10);
        }

        #[test]
        fn partial_i_matches_closed_form(
            ent_angle in 1e-3..FRAC_PI_4,
            phi in 0.0..FRAC_PI_2,
        ) {
            let point = eval_branch(partial_branch(PartialCase::I { ent_angle, phi }).unwrap());
            assert_point(&point, &closed_form::partial_i(ent_angle, phi), 1e-10);
        }

        #[test]
        fn partial_ii_matches_closed_form(ent_angle in 1e-3..FRAC_PI_4) {
            let point = eval_branch(partial_branch(PartialCase::Ii { ent_angle }).unwrap());
            assert_point(&point, &closed_form::partial_ii(ent_angle), 1e-10);
        }

        #[test]
        fn partial_iii_matches_closed_form(
            ent_angle in 1e-3..FRAC_PI_4,
            theta in 0.0..PI,
        ) {
            let point = eval_branch(partial_branch(PartialCase::Iii { ent_angle, theta }).unwrap());
            assert_point(&point, &closed_form::partial_iii(ent_angle, theta), 1e-10);
        }

        #[test]
        fn triple_branches_match_closed_forms(
            phi in 0.0..FRAC_PI_2,
            phi_hat in 0.0..FRAC_PI_2,
            phi_tilde in 0.0..FRAC_PI_2,
        ) {
            let p1 = eval_branch(triple_branch_1(phi).unwrap());
            assert_point(&p1, &closed_form::triple_1(phi), 1e-10);
            let p2 = eval_branch(triple_branch_2(phi_hat).unwrap());
            assert_point(&p2, &closed_form::triple_2(phi_hat), 1e-10);
            let p3 = eval_branch(triple_branch_3(phi_tilde).unwrap());
            assert_point(&p3, &closed_form::triple_3(phi_tilde), 1e-10);
        }

        #[test]
        fn independent_mixture_is_linear_in_weight(q in 0.0..1.0) {
            let at = |w: f64| {
                evaluate_strategy(&independent_strategy(w).unwrap()).unwrap()
            };
            let ends = (at(1.0), at(0.0));
            let mixed = at(q);
            for k in 0..2 {
                let expect = q * ends.0.values()[k] + (1.0 - q) * ends.1.values()[k];
                prop_assert!((mixed.values()[k] - expect).abs() <= 1e-10);
            }
        }
    }
}
