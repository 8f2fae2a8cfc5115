use crate::engine::{ModelParams, NetworkState};
use crate::error::{Error, Result};

/// Two oscillators whose phases coincide for a while without being synchronized.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Scenario {
    /// A at `1 - phi`, B at threshold, nothing in flight.
    pub state: NetworkState,
    /// Chosen so that `f(tau - phi) + epsilon = f(tau)`: B's pulse lifts A
    /// exactly onto B's phase at `t = tau`, while A's own pulse (emitted at
    /// `t = phi`) is still in flight until `tau + phi`.
    pub phi: f64,
}

/// Builds the scenario for a two-oscillator model; needs `epsilon < f(tau) < 1`.
pub fn fig3_construct(params: &ModelParams) -> Result<Fig3Scenario> {
    if params.n() != 2 {
        return Err(Error::InvalidParameter { name: "n", reason: "the scenario has two oscillators" });
    }
    let tau = params.tau();
    if tau >= 1.0 {
        return Err(Error::InfeasibleScenario("requires f(tau) < 1"));
    }
    let f_tau = params.curve.eval(tau)?;
    if params.epsilon() >= f_tau {
        return Err(Error::InfeasibleScenario("requires epsilon < f(tau)"));
    }
    let phi = tau - params.curve.inverse(f_tau - params.epsilon())?;
    let state = NetworkState::new(*params, &[1.0 - phi, 1.0])?;
    Ok(Fig3Scenario { state, phi })
}
