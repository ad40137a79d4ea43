//! Security analysis of a two-server queue whose routing can be intercepted.
//!
//! Jobs arrive as a Poisson stream and are routed to one of two identical
//! exponential servers, either to the shorter queue or by a fair coin. An
//! attacker overwrites the routing instruction of each job with probability
//! `a`, sending it to server 1 with probability `p`; the operator protects
//! each job with probability `d`.
//!
//! The crate is split along the analysis pipeline:
//!
//! * [`model`]: parameters, strategy profiles and the stability conditions.
//! * [`cost`]: the mean-queue-length bound for shorter-queue routing and the
//!   exact value for Bernoulli routing.
//! * [`game`]: utilities, best responses and equilibrium regimes.
//! * [`risk`]: security/queue risk, parameter sweeps and the policy comparison.
//! * [`sim`]: an event-driven simulator used to check the analytic results.

pub mod cost;
pub mod error;
pub mod game;
pub mod model;
pub mod risk;
mod root;
pub mod sim;

pub use cost::{bernoulli_cost, jsq_cost_bound, queue_cost, CostBreakdown};
pub use error::{Error, Result};
pub use game::{
    attacker_best_response, d_hat_closed_form, d_hat_numeric, defender_best_response,
    defender_best_response_bernoulli, defender_best_response_jsq, equilibrium, gamma_constant,
    utilities, AttackChoice, ClosedFormDHat, DefenderResponse, Equilibrium, NumericDHat, Regime,
    ResponseBranch, Utilities,
};
pub use model::{
    effective_attack, is_stable, CostParams, ExtendedValue, RoutingPolicy, StrategyProfile,
    SystemParams,
};
pub use risk::{
    compare_policies, queue_risk, regime_map, risk_surface, security_risk, ComparisonReport,
    CostGrid, CostRange, PolicyRecord, RegimeCell, RiskPoint, SurfaceGrid,
};
pub use sim::{
    replication_seed, run_replication, simulate, simulate_risk, simulate_traced, EventCounts,
    EventKind, ReplicationOutcome, SimConfig, SimEstimate, SimState, SimulatedRisk, TraceRecord,
};
