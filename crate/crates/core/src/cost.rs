//! Mean number of jobs in the system under each routing policy.
//!
//! Shorter-queue routing has no tractable closed form, so it is represented by
//! the upper bound `-2 + 2 mu / min{mu - a~ p lambda, mu - a~ (1-p) lambda,
//! mu - lambda/2}`. Bernoulli routing splits into two independent M/M/1
//! queues and is exact.

use serde::Serialize;

use crate::model::{
    bernoulli_server_rates, effective_attack, ExtendedValue, RoutingPolicy, StrategyProfile,
    SystemParams,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    /// Mean number of jobs in the system.
    pub total: ExtendedValue,
    /// Mean jobs at server 1; only known for Bernoulli routing.
    pub server1: Option<ExtendedValue>,
    /// Mean jobs at server 2; only known for Bernoulli routing.
    pub server2: Option<ExtendedValue>,
    /// `true` for the exact Bernoulli value, `false` for the shorter-queue bound.
    pub exact: bool,
}

pub fn jsq_cost_bound(profile: &StrategyProfile, params: &SystemParams) -> CostBreakdown {
    let at = effective_attack(profile);
    let (lambda, mu) = (params.lambda(), params.mu());
    let slack = (mu - at * profile.p() * lambda)
        .min(mu - at * (1.0 - profile.p()) * lambda)
        .min(mu - lambda / 2.0);
    let total = if slack <= 0.0 {
        ExtendedValue::PositiveInfinite
    } else {
        ExtendedValue::Finite(-2.0 + 2.0 * mu / slack)
    };
    CostBreakdown {
        total,
        server1: None,
        server2: None,
        exact: false,
    }
}

pub fn bernoulli_cost(profile: &StrategyProfile, params: &SystemParams) -> CostBreakdown {
    let at = effective_attack(profile);
    let (r1, r2) = bernoulli_server_rates(at, profile.p(), params.lambda());
    let server1 = mm1_mean_jobs(r1, params.mu());
    let server2 = mm1_mean_jobs(r2, params.mu());
    let total = match (server1, server2) {
        (ExtendedValue::Finite(x), ExtendedValue::Finite(y)) => ExtendedValue::Finite(x + y),
        _ => ExtendedValue::PositiveInfinite,
    };
    CostBreakdown {
        total,
        server1: Some(server1),
        server2: Some(server2),
        exact: true,
    }
}

/// Cost model of `policy`: the bound for shorter-queue, exact for Bernoulli.
pub fn queue_cost(
    policy: RoutingPolicy,
    profile: &StrategyProfile,
    params: &SystemParams,
) -> CostBreakdown {
    match policy {
        RoutingPolicy::ShorterQueue => jsq_cost_bound(profile, params),
        RoutingPolicy::Bernoulli => bernoulli_cost(profile, params),
    }
}

// rho / (1 - rho) written as 2r / (2 mu - 2r) to match the per-server formula.
fn mm1_mean_jobs(arrival_rate: f64, mu: f64) -> ExtendedValue {
    let num = 2.0 * arrival_rate;
    let den = 2.0 * mu - num;
    if den <= 0.0 {
        ExtendedValue::PositiveInfinite
    } else {
        ExtendedValue::Finite(num / den)
    }
}
