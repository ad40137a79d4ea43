//! Event-driven simulation of the attacked two-server queue.
//!
//! The queue-length process is a continuous-time Markov chain, simulated by
//! next-event sampling: from state `(x, y)` the next event fires after an
//! exponential delay with rate `lambda + mu [x > 0] + mu [y > 0]` and its kind
//! is picked proportionally to the individual rates. Every arrival consumes
//! exactly three uniforms (attack, defense, routing coin) so that paired runs
//! with a shared seed stay aligned on the random stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::Equilibrium;
use crate::model::{is_stable, CostParams, RoutingPolicy, StrategyProfile, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub seed: u64,
    /// Simulated time per replication.
    pub horizon: f64,
    /// Leading fraction of the horizon excluded from the averages.
    pub warmup_fraction: f64,
    pub replications: usize,
    /// Instability is flagged when the second half of the measurement window
    /// averages more than this factor times the first half.
    pub drift_factor: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            horizon: 1e6,
            warmup_fraction: 0.1,
            replications: 10,
            drift_factor: 1.2,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidSimConfig {
                name: "horizon",
                reason: "must be a finite positive time",
            });
        }
        if !(0.0..1.0).contains(&self.warmup_fraction) {
            return Err(Error::InvalidSimConfig {
                name: "warmup_fraction",
                reason: "must lie in [0, 1)",
            });
        }
        if self.replications == 0 {
            return Err(Error::InvalidSimConfig {
                name: "replications",
                reason: "must be at least 1",
            });
        }
        if !(self.drift_factor.is_finite() && self.drift_factor >= 1.0) {
            return Err(Error::InvalidSimConfig {
                name: "drift_factor",
                reason: "must be a finite number >= 1",
            });
        }
        Ok(())
    }

    pub fn with_horizon(self, horizon: f64) -> Self {
        Self { horizon, ..self }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Jobs at each server (waiting plus in service) and the simulation clock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimState {
    pub x: u64,
    pub y: u64,
    pub clock: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimEstimate {
    /// Time-averaged `x + y` over the measurement window, averaged over replications.
    pub mean_total_jobs: f64,
    /// Standard error of the mean across replications (0 for one replication).
    pub std_error: f64,
    pub replications: usize,
    pub unstable_hint: bool,
    pub replication_means: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EventCounts {
    pub arrivals: u64,
    /// Attacked, undefended arrivals routed by the attacker's bias.
    pub misrouted: u64,
    /// Arrivals routed by the operator's policy.
    pub policy_routed: u64,
    pub departures: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicationOutcome {
    pub mean_total_jobs: f64,
    pub first_half_mean: f64,
    pub second_half_mean: f64,
    pub counts: EventCounts,
    pub final_state: SimState,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    ArrivalToServer1,
    ArrivalToServer2,
    DepartureFromServer1,
    DepartureFromServer2,
}

impl EventKind {
    pub fn label(&self) -> &'static str {
        match self {
            EventKind::ArrivalToServer1 => "arrival1",
            EventKind::ArrivalToServer2 => "arrival2",
            EventKind::DepartureFromServer1 => "departure1",
            EventKind::DepartureFromServer2 => "departure2",
        }
    }
}

/// One trace row: the event and the state right after it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub time: f64,
    pub kind: EventKind,
    pub x: u64,
    pub y: u64,
}

/// Seed of replication `replication`: SplitMix64 finalizer applied to
/// `seed + (replication + 1) * 0x9E3779B97F4A7C15`.
pub fn replication_seed(seed: u64, replication: u64) -> u64 {
    let mut z = seed.wrapping_add(
        replication
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15),
    );
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Time-weighted accumulator of `x + y` over the warmup-free window, split
/// into two equal halves for the drift check.
struct WindowArea {
    start: f64,
    mid: f64,
    end: f64,
    first: f64,
    second: f64,
}

impl WindowArea {
    fn new(warmup: f64, horizon: f64) -> Self {
        Self {
            start: warmup,
            mid: 0.5 * (warmup + horizon),
            end: horizon,
            first: 0.0,
            second: 0.0,
        }
    }

    fn add(&mut self, from: f64, to: f64, level: f64) {
        let overlap = |lo: f64, hi: f64| (to.min(hi) - from.max(lo)).max(0.0);
        self.first += level * overlap(self.start, self.mid);
        self.second += level * overlap(self.mid, self.end);
    }

    fn means(&self) -> (f64, f64, f64) {
        let half = self.mid - self.start;
        let full = self.end - self.start;
        (
            (self.first + self.second) / full,
            self.first / half,
            self.second / half,
        )
    }
}

/// A single replication, sequentially. `trace` receives every event.
pub fn run_replication(
    policy: RoutingPolicy,
    profile: &StrategyProfile,
    params: &SystemParams,
    horizon: f64,
    warmup_fraction: f64,
    seed: u64,
    mut trace: Option<&mut dyn FnMut(&TraceRecord)>,
) -> ReplicationOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lambda, mu) = (params.lambda(), params.mu());
    let (a, p, d) = (profile.a(), profile.p(), profile.d());

    let mut state = SimState {
        x: 0,
        y: 0,
        clock: 0.0,
    };
    let mut counts = EventCounts::default();
    let mut area = WindowArea::new(warmup_fraction * horizon, horizon);

    loop {
        let mu1 = if state.x > 0 { mu } else { 0.0 };
        let mu2 = if state.y > 0 { mu } else { 0.0 };
        let rate = lambda + mu1 + mu2;
        let u: f64 = rng.random();
        let next = state.clock - (1.0 - u).ln() / rate;
        let level = (state.x + state.y) as f64;
        if next >= horizon {
            area.add(state.clock, horizon, level);
            state.clock = horizon;
            break;
        }
        area.add(state.clock, next, level);
        state.clock = next;

        let pick = rng.random::<f64>() * rate;
        let kind = if pick < lambda {
            let attacked = rng.random::<f64>() < a;
            let defended = rng.random::<f64>() < d;
            let coin: f64 = rng.random();
            counts.arrivals += 1;
            let to_first = if attacked && !defended {
                counts.misrouted += 1;
                coin < p
            } else {
                counts.policy_routed += 1;
                match policy {
                    RoutingPolicy::ShorterQueue if state.x != state.y => state.x < state.y,
                    _ => coin < 0.5,
                }
            };
            if to_first {
                state.x += 1;
                EventKind::ArrivalToServer1
            } else {
                state.y += 1;
                EventKind::ArrivalToServer2
            }
        } else if pick < lambda + mu1 {
            state.x -= 1;
            counts.departures += 1;
            EventKind::DepartureFromServer1
        } else {
            state.y -= 1;
            counts.departures += 1;
            EventKind::DepartureFromServer2
        };

        if let Some(sink) = trace.as_deref_mut() {
            sink(&TraceRecord {
                time: state.clock,
                kind,
                x: state.x,
                y: state.y,
            });
        }
    }

    let (mean_total_jobs, first_half_mean, second_half_mean) = area.means();
    ReplicationOutcome {
        mean_total_jobs,
        first_half_mean,
        second_half_mean,
        counts,
        final_state: state,
    }
}

/// Replicated estimate of the mean number of jobs in the system.
pub fn simulate(
    policy: RoutingPolicy,
    profile: &StrategyProfile,
    params: &SystemParams,
    config: &SimConfig,
) -> Result<SimEstimate> {
    config.validate()?;
    let outcomes: Vec<ReplicationOutcome> = (0..config.replications as u64)
        .into_par_iter()
        .map(|r| {
            run_replication(
                policy,
                profile,
                params,
                config.horizon,
                config.warmup_fraction,
                replication_seed(config.seed, r),
                None,
            )
        })
        .collect();
    Ok(aggregate(&outcomes, config))
}

/// Like [`simulate`], but replication 0 runs on the calling thread and feeds
/// every event to `trace`.
pub fn simulate_traced(
    policy: RoutingPolicy,
    profile: &StrategyProfile,
    params: &SystemParams,
    config: &SimConfig,
    trace: &mut dyn FnMut(&TraceRecord),
) -> Result<SimEstimate> {
    config.validate()?;
    let first = run_replication(
        policy,
        profile,
        params,
        config.horizon,
        config.warmup_fraction,
        replication_seed(config.seed, 0),
        Some(trace),
    );
    let rest: Vec<ReplicationOutcome> = (1..config.replications as u64)
        .into_par_iter()
        .map(|r| {
            run_replication(
                policy,
                profile,
                params,
                config.horizon,
                config.warmup_fraction,
                replication_seed(config.seed, r),
                None,
            )
        })
        .collect();
    let mut outcomes = Vec::with_capacity(config.replications);
    outcomes.push(first);
    outcomes.extend(rest);
    Ok(aggregate(&outcomes, config))
}

fn aggregate(outcomes: &[ReplicationOutcome], config: &SimConfig) -> SimEstimate {
    let means: Vec<f64> = outcomes.iter().map(|o| o.mean_total_jobs).collect();
    let (mean, std_error) = mean_and_std_error(&means);
    let n = outcomes.len() as f64;
    let first = outcomes.iter().map(|o| o.first_half_mean).sum::<f64>() / n;
    let second = outcomes.iter().map(|o| o.second_half_mean).sum::<f64>() / n;
    SimEstimate {
        mean_total_jobs: mean,
        std_error,
        replications: outcomes.len(),
        unstable_hint: second > config.drift_factor * first,
        replication_means: means,
    }
}

pub(crate) fn mean_and_std_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Simulated queue and security risk at an equilibrium.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulatedRisk {
    pub queue_risk: f64,
    pub queue_risk_error: f64,
    pub security_risk: f64,
    pub security_risk_error: f64,
    pub replications: usize,
    pub attacked: SimEstimate,
    pub baseline: SimEstimate,
}

/// Simulated `R_q` and `R_s` at `eq`, against the attack-free baseline.
///
/// Both runs share the replication seeds, so the errors are the standard
/// errors of the per-replication paired differences.
pub fn simulate_risk(
    policy: RoutingPolicy,
    params: &SystemParams,
    costs: &CostParams,
    eq: &Equilibrium,
    config: &SimConfig,
) -> Result<SimulatedRisk> {
    let profile = eq.profile();
    if !is_stable(policy, &profile, params) {
        return Err(Error::UnstableProfile {
            a: profile.a(),
            p: profile.p(),
            d: profile.d(),
        });
    }
    let attacked = simulate(policy, &profile, params, config)?;
    let baseline = simulate(policy, &StrategyProfile::attack_free(), params, config)?;
    let diffs: Vec<f64> = attacked
        .replication_means
        .iter()
        .zip(&baseline.replication_means)
        .map(|(x, y)| x - y)
        .collect();
    let (queue_risk, queue_risk_error) = mean_and_std_error(&diffs);
    let defense_cost = params.lambda() * costs.c_d() * eq.d_star;
    Ok(SimulatedRisk {
        queue_risk,
        queue_risk_error,
        security_risk: queue_risk + defense_cost,
        security_risk_error: queue_risk_error,
        replications: config.replications,
        attacked,
        baseline,
    })
}
