//! State-level diagnostics: correlation matrices, the projective CHSH cap
//! of a state, and isotropic-noise visibility thresholds.

use crate::linalg::{pauli_x, pauli_y, pauli_z, singular_values_3x3, tensor};
use crate::scenario::{
    evaluate_strategy, make_state, SequentialStrategy, StateKind, TwoQubitState,
};
use crate::{Error, Result};

/// Bisection width for the cross-check threshold search.
const BISECT_TOL: f64 = 1e-6;

/// Correlation matrix T_ij = Tr(rho sigma_i x sigma_j), i,j in {X,Y,Z}.
pub fn correlation_matrix(state: &TwoQubitState) -> Result<[[f64; 3]; 3]> {
    state.validate()?;
    let sigmas = [pauli_x(), pauli_y(), pauli_z()];
    let mut t = [[0.0; 3]; 3];
    for (i, si) in sigmas.iter().enumerate() {
        for (j, sj) in sigmas.iter().enumerate() {
            t[i][j] = state.rho().trace_product(&tensor(si, sj)?).re;
        }
    }
    Ok(t)
}

/// Largest CHSH value any pair of observable pairs can extract from the
/// state: 2 sqrt(t1^2 + t2^2) over the two largest singular values of the
/// correlation matrix.
pub fn horodecki_max_chsh(state: &TwoQubitState) -> Result<f64> {
    let t = correlation_matrix(state)?;
    let sv = singular_values_3x3(&t)?;
    Ok(2.0 * (sv[0] * sv[0] + sv[1] * sv[1]).sqrt())
}

fn require_maxent_strategy(strategy: &SequentialStrategy) -> Result<()> {
    let maxent = make_state(StateKind::MaximallyEntangled)?;
    for weighted in strategy.branches() {
        if weighted.branch.state.rho().max_abs_diff(maxent.rho()) > 1e-12 {
            return Err(Error::InvalidArgument(
                "visibility threshold requires a strategy on the maximally entangled state"
                    .into(),
            ));
        }
    }
    Ok(())
}

fn check_target(target: f64) -> Result<()> {
    if target.is_finite() && target >= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "target = {target} below the local bound 2"
        )))
    }
}

/// Smallest visibility v at which the strategy, replayed on isotropic(v),
/// still has every CHSH value above `target`.
///
/// All catalog observables are traceless, so each S_k is linear in v and
/// the threshold is a single evaluation at v = 1 plus a division. See
/// [`visibility_threshold_bisect`] for the assumption-free search.
pub fn visibility_threshold(strategy: &SequentialStrategy, target: f64) -> Result<f64> {
    require_maxent_strategy(strategy)?;
    check_target(target)?;
    let best = evaluate_strategy(strategy)?.min();
    if best <= target {
        return Err(Error::NotFound(format!(
            "target {target} unattainable: noiseless minimum is {best}"
        )));
    }
    Ok(target / best)
}

/// Bisection version of [`visibility_threshold`], valid even for
/// observables with an identity component; tolerance 1e-6.
pub fn visibility_threshold_bisect(
    strategy: &SequentialStrategy,
    target: f64,
) -> Result<f64> {
    require_maxent_strategy(strategy)?;
    check_target(target)?;
    let min_at = |v: f64| -> Result<f64> {
        let state = make_state(StateKind::Isotropic { visibility: v })?;
        Ok(evaluate_strategy(&strategy.with_initial_state(&state))?.min())
    };
    if min_at(1.0)? <= target {
        return Err(Error::NotFound(format!(
            "target {target} unattainable even without noise"
        )));
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    while hi - lo > BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        if min_at(mid)? > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
