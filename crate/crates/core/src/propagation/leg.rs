use super::{
    coast_min_radius, coast_propagate, propagate_burn, IntegratorConfig, PropagationError,
    StateVector, ThrustProfile,
};
use crate::catalog::Epoch;

/// Final state and closest solar approach of a leg.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegOutcome {
    pub state: StateVector,
    /// km
    pub min_radius: f64,
}

/// Fly from `start` to `end`, coasting between the given burn arcs.
///
/// Arcs must be in time order, non-overlapping, and lie within
/// `[start.epoch, end]`. This is the single propagation path shared by the
/// verifier and the solution synthesizer.
pub fn fly_leg(
    start: &StateVector,
    arcs: &[ThrustProfile],
    end: Epoch,
    config: &IntegratorConfig,
) -> Result<LegOutcome, PropagationError> {
    let mut state = *start;
    let mut min_radius = start.position.norm();
    for arc in arcs {
        let gap = arc.start().seconds_since(state.epoch);
        if gap < -1e-3 {
            return Err(PropagationError::ArcOrder(arc.start()));
        }
        if gap > 0.0 {
            min_radius = min_radius.min(coast_min_radius(&state, gap)?);
            state = coast_propagate(&state, gap)?;
        }
        state.epoch = arc.start();
        let burn = propagate_burn(&state, arc, config)?;
        min_radius = min_radius.min(burn.min_radius);
        state = burn.state;
    }
    let gap = end.seconds_since(state.epoch);
    if gap < -1e-3 {
        return Err(PropagationError::ArcOrder(end));
    }
    if gap > 0.0 {
        min_radius = min_radius.min(coast_min_radius(&state, gap)?);
        state = coast_propagate(&state, gap)?;
    }
    state.epoch = end;
    Ok(LegOutcome { state, min_radius })
}
