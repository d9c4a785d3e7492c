//! Sequential CHSH scenario: states, observables, projective instruments,
//! and the evaluate/update pipeline.
//!
//! One party (A) holds a fixed pair of observables. A chain of parties
//! B_1..B_n act on the other qubit: each tests a CHSH inequality against A
//! and, except for the last, relays the qubit through a projective
//! instrument K_{b|y} = U_{by} B_{b|y}. Inputs are unbiased, so the relayed
//! state averages the two settings with weight 1/2 each:
//!
//!   rho' = 1/2 sum_{y,b} (1 (x) K_{b|y}) rho (1 (x) K_{b|y})^dag
//!
//! Shared classical randomness mixes deterministic branches convexly.

use num_complex::Complex64;

use crate::linalg::{
    self, identity2, pauli_x, pauli_z, tensor, ComplexMatrix, TOL_VALIDITY,
};
use crate::{Error, Result};

use std::f64::consts::{PI, SQRT_2};

/// Largest CHSH value any quantum strategy can reach.
pub const TSIRELSON_BOUND: f64 = 2.0 * SQRT_2;
/// Slack allowed on the Tsirelson bound before an evaluation is rejected.
pub const TOL_TSIRELSON: f64 = 1e-9;
/// Density-matrix eigenvalues may undershoot zero by at most this.
pub const TOL_PSD: f64 = 1e-10;
/// Branch weights below this are dropped after renormalization.
pub const WEIGHT_DROP_TOL: f64 = 1e-12;
/// Branch weights must sum to one within this before renormalization.
pub const TOL_WEIGHT_SUM: f64 = 1e-12;

const TAU: f64 = 2.0 * PI;

fn require_finite(value: f64, what: &str) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be finite")))
    }
}

/// A +/-1-valued qubit observable in the XZ plane of the Bloch sphere:
/// cos(angle) sigma_x + sin(angle) sigma_z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanarObservable {
    angle: f64,
}

impl PlanarObservable {
    /// Wraps the angle into [0, 2pi).
    pub fn new(angle: f64) -> Result<Self> {
        require_finite(angle, "observable angle")?;
        Ok(Self {
            angle: angle.rem_euclid(TAU),
        })
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn matrix(&self) -> ComplexMatrix {
        pauli_x()
            .scale(self.angle.cos())
            .add(&pauli_z().scale(self.angle.sin()))
    }

    /// The opposite Bloch direction; the observable with flipped sign.
    pub fn negated(&self) -> Self {
        Self {
            angle: (self.angle + PI).rem_euclid(TAU),
        }
    }
}

/// Validated 4x4 density matrix; A owns the left tensor factor.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoQubitState {
    rho: ComplexMatrix,
}

impl TwoQubitState {
    /// Validates Hermiticity, unit trace, and positivity.
    pub fn new(rho: ComplexMatrix) -> Result<Self> {
        let state = Self { rho };
        state.validate()?;
        Ok(state)
    }

    /// Density matrix of a pure state given as amplitudes over
    /// |00>, |01>, |10>, |11>; must be normalized within 1e-10.
    pub fn from_pure(amplitudes: &[Complex64; 4]) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "pure state norm^2 is {norm_sqr}, expected 1"
            )));
        }
        let mut rho = ComplexMatrix::zeros(4)?;
        for i in 0..4 {
            for j in 0..4 {
                rho.set(i, j, amplitudes[i] * amplitudes[j].conj() / norm_sqr);
            }
        }
        Ok(Self { rho })
    }

    /// Trusted constructor for states produced by a completely positive
    /// trace-preserving update; skips the eigenvalue check.
    pub(crate) fn from_evolution(rho: ComplexMatrix) -> Result<Self> {
        if (rho.trace().re - 1.0).abs() > TOL_VALIDITY || rho.trace().im.abs() > TOL_VALIDITY {
            return Err(Error::Numerical(
                "state update drifted off unit trace".into(),
            ));
        }
        // Hermitize to keep roundoff from accumulating over a chain.
        let rho = rho.add(&rho.adjoint()).scale(0.5);
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho.dim() != 4 {
            return Err(Error::InvalidArgument(
                "two-qubit state must be 4x4".into(),
            ));
        }
        if !self.rho.is_hermitian(TOL_VALIDITY) {
            return Err(Error::InvalidArgument(
                "density matrix must be Hermitian".into(),
            ));
        }
        let tr = self.rho.trace();
        if (tr.re - 1.0).abs() > TOL_VALIDITY || tr.im.abs() > TOL_VALIDITY {
            return Err(Error::InvalidArgument(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        let eig = linalg::hermitian_eigs(&self.rho)?;
        if eig.values[0] < -TOL_PSD {
            return Err(Error::InvalidArgument(format!(
                "density matrix has negative eigenvalue {:.3e}",
                eig.values[0]
            )));
        }
        Ok(())
    }
}

/// The initial resources the scenario works with.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StateKind {
    /// |phi+> = (|00> + |11>)/sqrt(2).
    MaximallyEntangled,
    /// cos(ent_angle)|00> + sin(ent_angle)|11>, ent_angle in [0, pi/4].
    Partial { ent_angle: f64 },
    /// v |phi+><phi+| + (1-v)/4 * identity, v in [0, 1].
    Isotropic { visibility: f64 },
}

pub fn make_state(kind: StateKind) -> Result<TwoQubitState> {
    let half = Complex64::new(0.5, 0.0);
    match kind {
        StateKind::MaximallyEntangled => {
            let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
            TwoQubitState::from_pure(&[a, Complex64::ZERO, Complex64::ZERO, a])
        }
        StateKind::Partial { ent_angle } => {
            require_finite(ent_angle, "ent_angle")?;
            if !(0.0..=PI / 4.0 + 1e-15).contains(&ent_angle) {
                return Err(Error::InvalidArgument(format!(
                    "ent_angle {ent_angle} outside [0, pi/4]"
                )));
            }
            TwoQubitState::from_pure(&[
                Complex64::new(ent_angle.cos(), 0.0),
                Complex64::ZERO,
                Complex64::ZERO,
                Complex64::new(ent_angle.sin(), 0.0),
            ])
        }
        StateKind::Isotropic { visibility } => {
            require_finite(visibility, "visibility")?;
            if !(0.0..=1.0).contains(&visibility) {
                return Err(Error::InvalidArgument(format!(
                    "visibility {visibility} outside [0, 1]"
                )));
            }
            let phi_plus = make_state(StateKind::MaximallyEntangled)?;
            let mixed = ComplexMatrix::identity(4)?.scale(0.25);
            let rho = phi_plus
                .rho()
                .scale(visibility)
                .add(&mixed.scale(1.0 - visibility));
            let _ = half;
            TwoQubitState::new(rho)
        }
    }
}

/// Axis-angle qubit rotation exp(i * angle * axis.sigma).
///
/// Fields are public so tests can express malformed operators; go through
/// the constructors to stay valid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryOp {
    /// Unit vector (x, y, z) on the Bloch sphere.
    pub axis: [f64; 3],
    pub angle: f64,
}

impl UnitaryOp {
    pub fn identity() -> Self {
        Self {
            axis: [0.0, 1.0, 0.0],
            angle: 0.0,
        }
    }

    /// exp(i * angle * sigma_y); all closed-form strategies use this form.
    pub fn y_rotation(angle: f64) -> Self {
        Self {
            axis: [0.0, 1.0, 0.0],
            angle,
        }
    }

    /// Normalizes the axis; rejects zero or non-finite input.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        require_finite(angle, "rotation angle")?;
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::InvalidArgument(
                "rotation axis must be a nonzero finite vector".into(),
            ));
        }
        Ok(Self {
            axis: [axis[0] / norm, axis[1] / norm, axis[2] / norm],
            angle,
        })
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let c = self.angle.cos();
        let s = self.angle.sin();
        let [nx, ny, nz] = self.axis;
        let mut m = ComplexMatrix::zeros(2).expect("dim 2");
        m.set(0, 0, Complex64::new(c, s * nz));
        m.set(0, 1, Complex64::new(s * ny, s * nx));
        m.set(1, 0, Complex64::new(-s * ny, s * nx));
        m.set(1, 1, Complex64::new(c, -s * nz));
        m
    }
}

/// What a sequential party measures for one input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasurementKind {
    /// Projectors (1 +/- O)/2 of a planar observable; outcome 0 is +1.
    Basis(PlanarObservable),
    /// No measurement; outcome 0 reported deterministically.
    TrivialZero,
    /// No measurement; outcome 1 reported deterministically.
    TrivialOne,
}

/// One input's measurement plus the rotation applied after each outcome.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InstrumentSetting {
    pub kind: MeasurementKind,
    /// unitaries[b] is applied when outcome b fires.
    pub unitaries: [UnitaryOp; 2],
}

impl InstrumentSetting {
    pub fn basis(angle: f64) -> Result<Self> {
        Ok(Self {
            kind: MeasurementKind::Basis(PlanarObservable::new(angle)?),
            unitaries: [UnitaryOp::identity(); 2],
        })
    }

    pub fn trivial_zero() -> Self {
        Self {
            kind: MeasurementKind::TrivialZero,
            unitaries: [UnitaryOp::identity(); 2],
        }
    }

    pub fn trivial_one() -> Self {
        Self {
            kind: MeasurementKind::TrivialOne,
            unitaries: [UnitaryOp::identity(); 2],
        }
    }

    /// Same rotation independent of outcome.
    pub fn with_unitary(mut self, u: UnitaryOp) -> Self {
        self.unitaries = [u, u];
        self
    }

    pub fn with_unitaries(mut self, u: [UnitaryOp; 2]) -> Self {
        self.unitaries = u;
        self
    }

    /// Projector onto the outcome-b subspace; zero or identity for the
    /// trivial kinds (trivial_one is outcome-relabeled trivial_zero).
    pub fn projector(&self, b: usize) -> ComplexMatrix {
        debug_assert!(b < 2);
        match self.kind {
            MeasurementKind::Basis(obs) => {
                let sign = if b == 0 { 0.5 } else { -0.5 };
                identity2().scale(0.5).add(&obs.matrix().scale(sign))
            }
            MeasurementKind::TrivialZero => {
                if b == 0 {
                    identity2()
                } else {
                    ComplexMatrix::zeros(2).expect("dim 2")
                }
            }
            MeasurementKind::TrivialOne => {
                if b == 1 {
                    identity2()
                } else {
                    ComplexMatrix::zeros(2).expect("dim 2")
                }
            }
        }
    }

    /// B_0 - B_1: the planar observable, or +/-identity for trivial kinds.
    pub fn observable(&self) -> ComplexMatrix {
        match self.kind {
            MeasurementKind::Basis(obs) => obs.matrix(),
            MeasurementKind::TrivialZero => identity2(),
            MeasurementKind::TrivialOne => identity2().scale(-1.0),
        }
    }

    /// Nonzero Kraus operators K_b = U_b B_b for this setting.
    pub fn kraus(&self) -> Vec<ComplexMatrix> {
        match self.kind {
            MeasurementKind::Basis(_) => (0..2)
                .map(|b| self.unitaries[b].matrix().matmul(&self.projector(b)))
                .collect(),
            MeasurementKind::TrivialZero => vec![self.unitaries[0].matrix()],
            MeasurementKind::TrivialOne => vec![self.unitaries[1].matrix()],
        }
    }
}

/// A sequential party's instrument: one [`InstrumentSetting`] per input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectiveInstrument {
    pub settings: [InstrumentSetting; 2],
}

impl ProjectiveInstrument {
    pub fn new(settings: [InstrumentSetting; 2]) -> Self {
        Self { settings }
    }

    /// Measurement observables (B_0 - B_1) for the two inputs.
    pub fn observables(&self) -> [ComplexMatrix; 2] {
        [self.settings[0].observable(), self.settings[1].observable()]
    }

    /// Checks projector idempotence and Kraus completeness per input.
    pub fn validate(&self) -> Result<()> {
        let id = identity2();
        for (y, setting) in self.settings.iter().enumerate() {
            for b in 0..2 {
                let p = setting.projector(b);
                if p.matmul(&p).max_abs_diff(&p) > TOL_VALIDITY {
                    return Err(Error::InvalidInstrument(format!(
                        "projector for input {y}, outcome {b} is not idempotent"
                    )));
                }
            }
            let mut sum = ComplexMatrix::zeros(2)?;
            for k in setting.kraus() {
                sum = sum.add(&k.adjoint().matmul(&k));
            }
            if sum.max_abs_diff(&id) > TOL_VALIDITY {
                return Err(Error::InvalidInstrument(format!(
                    "Kraus completeness fails for input {y}: residual {:.3e}",
                    sum.max_abs_diff(&id)
                )));
            }
        }
        Ok(())
    }
}

/// One shared-randomness value: a complete deterministic protocol.
#[derive(Clone, Debug)]
pub struct DeterministicBranch {
    pub state: TwoQubitState,
    pub a_observables: [PlanarObservable; 2],
    /// Parties B_1 .. B_{n-1}, in relay order.
    pub instruments: Vec<ProjectiveInstrument>,
    /// Party B_n measures without relaying.
    pub final_observables: [PlanarObservable; 2],
}

impl DeterministicBranch {
    /// Number of sequential CHSH pairs (n).
    pub fn pair_count(&self) -> usize {
        self.instruments.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        self.state.validate()?;
        for inst in &self.instruments {
            inst.validate()?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct WeightedBranch {
    pub weight: f64,
    pub branch: DeterministicBranch,
}

/// Convex mixture of deterministic branches over shared randomness.
#[derive(Clone, Debug)]
pub struct SequentialStrategy {
    branches: Vec<WeightedBranch>,
}

impl SequentialStrategy {
    /// Validates weights (nonnegative, summing to 1 within 1e-12),
    /// renormalizes exactly, and drops branches lighter than 1e-12.
    pub fn new(branches: Vec<(f64, DeterministicBranch)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidArgument(
                "strategy needs at least one branch".into(),
            ));
        }
        let n = branches[0].1.pair_count();
        for (_, branch) in &branches {
            if branch.pair_count() != n {
                return Err(Error::InvalidArgument(
                    "all branches must have the same number of sequential pairs".into(),
                ));
            }
        }
        let mut sum = 0.0;
        for (w, _) in &branches {
            require_finite(*w, "branch weight")?;
            if *w < 0.0 {
                return Err(Error::InvalidArgument(format!("negative weight {w}")));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > TOL_WEIGHT_SUM {
            return Err(Error::InvalidArgument(format!(
                "branch weights sum to {sum}, expected 1"
            )));
        }
        let mut kept: Vec<WeightedBranch> = branches
            .into_iter()
            .filter(|(w, _)| w / sum >= WEIGHT_DROP_TOL)
            .map(|(w, branch)| WeightedBranch {
                weight: w / sum,
                branch,
            })
            .collect();
        let kept_sum: f64 = kept.iter().map(|b| b.weight).sum();
        for b in &mut kept {
            b.weight /= kept_sum;
        }
        Ok(Self { branches: kept })
    }

    pub fn single(branch: DeterministicBranch) -> Self {
        Self {
            branches: vec![WeightedBranch {
                weight: 1.0,
                branch,
            }],
        }
    }

    pub fn branches(&self) -> &[WeightedBranch] {
        &self.branches
    }

    pub fn pair_count(&self) -> usize {
        self.branches[0].branch.pair_count()
    }

    /// Same protocol run on a different initial state in every branch.
    pub fn with_initial_state(&self, state: &TwoQubitState) -> Self {
        let branches = self
            .branches
            .iter()
            .map(|wb| WeightedBranch {
                weight: wb.weight,
                branch: DeterministicBranch {
                    state: state.clone(),
                    ..wb.branch.clone()
                },
            })
            .collect();
        Self { branches }
    }
}

/// CHSH values (S_1, .., S_n), one per sequential pair.
#[derive(Clone, Debug, PartialEq)]
pub struct TradeoffPoint {
    s: Vec<f64>,
}

impl TradeoffPoint {
    /// Rejects components beyond the Tsirelson bound (plus 1e-9 slack);
    /// exceeding it means the evaluation pipeline is broken.
    pub fn new(s: Vec<f64>) -> Result<Self> {
        for (k, &v) in s.iter().enumerate() {
            if !v.is_finite() || v.abs() > TSIRELSON_BOUND + TOL_TSIRELSON {
                return Err(Error::Numerical(format!(
                    "S_{} = {v} exceeds the Tsirelson bound",
                    k + 1
                )));
            }
        }
        Ok(Self { s })
    }

    pub fn values(&self) -> &[f64] {
        &self.s
    }

    pub fn min(&self) -> f64 {
        self.s.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

fn check_pm1_observable(op: &ComplexMatrix, who: &str) -> Result<()> {
    if op.dim() != 2 || !op.is_hermitian(TOL_VALIDITY) {
        return Err(Error::InvalidArgument(format!(
            "{who} observable must be a 2x2 Hermitian matrix"
        )));
    }
    if op.matmul(op).max_abs_diff(&identity2()) > TOL_VALIDITY {
        return Err(Error::InvalidArgument(format!(
            "{who} observable must square to the identity"
        )));
    }
    Ok(())
}

/// A_0 (x) (B_0 + B_1) + A_1 (x) (B_0 - B_1).
pub fn chsh_operator(a: &[ComplexMatrix; 2], b: &[ComplexMatrix; 2]) -> Result<ComplexMatrix> {
    Ok(tensor(&a[0], &b[0].add(&b[1]))?.add(&tensor(&a[1], &b[0].sub(&b[1]))?))
}

/// CHSH value with explicit operator observables (used for instrument
/// observables, which may be +/-identity).
pub fn chsh_value_with_operators(
    state: &TwoQubitState,
    a: &[ComplexMatrix; 2],
    b: &[ComplexMatrix; 2],
) -> Result<f64> {
    for (op, who) in a.iter().zip(["A_0", "A_1"]) {
        check_pm1_observable(op, who)?;
    }
    for (op, who) in b.iter().zip(["B_0", "B_1"]) {
        check_pm1_observable(op, who)?;
    }
    let value = state.rho().trace_product(&chsh_operator(a, b)?);
    if value.im.abs() > TOL_VALIDITY {
        return Err(Error::Numerical(format!(
            "CHSH value has imaginary residue {:.3e}",
            value.im
        )));
    }
    Ok(value.re)
}

/// CHSH value for planar observables on both sides.
pub fn chsh_value(
    state: &TwoQubitState,
    a: &[PlanarObservable; 2],
    b: &[PlanarObservable; 2],
) -> Result<f64> {
    chsh_value_with_operators(
        state,
        &[a[0].matrix(), a[1].matrix()],
        &[b[0].matrix(), b[1].matrix()],
    )
}

/// Average post-instrument state over unbiased inputs and all outcomes.
pub fn apply_instrument(
    state: &TwoQubitState,
    inst: &ProjectiveInstrument,
) -> Result<TwoQubitState> {
    inst.validate()?;
    let id = identity2();
    let mut out = ComplexMatrix::zeros(4)?;
    for setting in &inst.settings {
        for k in setting.kraus() {
            let lifted = tensor(&id, &k)?;
            out = out.add(&lifted.matmul(state.rho()).matmul(&lifted.adjoint()));
        }
    }
    TwoQubitState::from_evolution(out.scale(0.5))
}

/// CHSH values of every sequential pair of a deterministic branch.
pub fn evaluate_branch(branch: &DeterministicBranch) -> Result<TradeoffPoint> {
    let a_ops = [
        branch.a_observables[0].matrix(),
        branch.a_observables[1].matrix(),
    ];
    let mut s = Vec::with_capacity(branch.pair_count());
    let mut state = branch.state.clone();
    for inst in &branch.instruments {
        s.push(chsh_value_with_operators(&state, &a_ops, &inst.observables())?);
        state = apply_instrument(&state, inst)?;
    }
    let final_ops = [
        branch.final_observables[0].matrix(),
        branch.final_observables[1].matrix(),
    ];
    s.push(chsh_value_with_operators(&state, &a_ops, &final_ops)?);
    TradeoffPoint::new(s)
}

/// Weight-averaged trade-off point over all branches.
pub fn evaluate_strategy(strategy: &SequentialStrategy) -> Result<TradeoffPoint> {
    let n = strategy.pair_count();
    let mut s = vec![0.0; n];
    for wb in strategy.branches() {
        let point = evaluate_branch(&wb.branch)?;
        for (acc, &v) in s.iter_mut().zip(point.values()) {
            *acc += wb.weight * v;
        }
    }
    TradeoffPoint::new(s)
}
