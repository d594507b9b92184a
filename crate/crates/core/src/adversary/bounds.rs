use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of [`bound_report`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundInputs {
    pub alpha: f64,
    pub l: f64,
    pub beta: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "D")]
    pub diameter: f64,
    #[serde(rename = "L_T")]
    pub budget: f64,
    #[serde(rename = "W")]
    pub window: usize,
}

/// Regret bound constants and values.
///
/// Upper bounds use `Q_f = (l + 4β)/α`; lower bounds are stated for the class
/// with `l = α` and use `Q_f = (α + 4β)/α`. `rho` and `tau` follow the latter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inputs: BoundInputs,
    pub kappa: f64,
    pub delta: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub q_f_upper: f64,
    pub q_f_lower: f64,
    pub rho: f64,
    pub tau: f64,
    pub ogd_upper: f64,
    pub rhgd_upper: f64,
    pub rhag_upper: f64,
    pub lb_w0: f64,
    pub lb_w: f64,
    pub mc_expectation_bound: f64,
}

/// `ρ = (√Q − 1)/(√Q + 1)`.
pub fn rho_of(q_f: f64) -> f64 {
    let s = q_f.sqrt();
    (s - 1.0) / (s + 1.0)
}

pub fn bound_report(inputs: BoundInputs) -> Result<BoundReport> {
    let BoundInputs {
        alpha,
        l,
        beta,
        g,
        diameter,
        budget,
        window,
    } = inputs;
    for (name, v) in [("alpha", alpha), ("l", l), ("G", g), ("D", diameter)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
        }
    }
    if !(beta >= 0.0 && beta.is_finite()) || !(budget >= 0.0 && budget.is_finite()) {
        return Err(Error::InvalidConfig(format!("beta and L_T must be nonnegative, got {beta}, {budget}")));
    }
    if alpha > l {
        return Err(Error::InvalidClass(format!("alpha {alpha} exceeds l {l}")));
    }
    let w = window as i32;
    let kappa = (1.0 - alpha / l).max(0.0).sqrt();
    let delta = (beta / l + 1.0) * g / (1.0 - kappa);
    let big_l = l + 4.0 * beta;
    let q_f_upper = big_l / alpha;
    let q_f_lower = (alpha + 4.0 * beta) / alpha;
    let rho = rho_of(q_f_lower);
    let tau = alpha * alpha * (1.0 - rho).powi(2) / (32.0 * (alpha + beta).powi(2));
    let decay = rho.powi(2 * w);
    let lb_w = if budget >= diameter {
        tau * alpha * diameter / 3.0 * decay * budget
    } else {
        tau * alpha / 3.0 * decay * budget * budget
    };
    Ok(BoundReport {
        inputs,
        kappa,
        delta,
        big_l,
        q_f_upper,
        q_f_lower,
        rho,
        tau,
        ogd_upper: delta * budget,
        rhgd_upper: q_f_upper * delta * (1.0 - 1.0 / q_f_upper).powi(w) * budget,
        rhag_upper: 2.0 * delta * (1.0 - 1.0 / q_f_upper.sqrt()).powi(w) * budget,
        lb_w0: tau * g * budget,
        lb_w,
        mc_expectation_bound: alpha * diameter / 96.0
            * (1.0 - rho).powi(2)
            * (alpha / (alpha + beta)).powi(2)
            * budget
            * decay,
    })
}
