//! Security risk, queue risk, parameter sweeps and the policy comparison.
//!
//! Security risk is the defender's loss relative to the attack-free baseline,
//! `u_d(0, 0) - u_d(a, d)`; queue risk is the extra mean queue length alone.
//! The two differ by the defense spend `lambda c_d d`.

use rayon::prelude::*;
use serde::Serialize;

use crate::cost::queue_cost;
use crate::error::{Error, Result};
use crate::game::{equilibrium, utilities, Equilibrium, Regime};
use crate::model::{CostParams, ExtendedValue, RoutingPolicy, StrategyProfile, SystemParams};
use crate::sim::{simulate_risk, SimConfig, SimulatedRisk};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskPoint {
    pub a: f64,
    pub d: f64,
    pub risk: ExtendedValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeCell {
    pub c_a: f64,
    pub c_d: f64,
    pub regime: Regime,
    pub a_star: f64,
    pub d_star: f64,
}

/// Lattice over `[0, 1]^2` for `(a, d)`, both ends included.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceGrid {
    pub a_points: usize,
    pub d_points: usize,
}

impl SurfaceGrid {
    pub fn square(points: usize) -> Self {
        Self {
            a_points: points,
            d_points: points,
        }
    }
}

impl Default for SurfaceGrid {
    fn default() -> Self {
        Self::square(101)
    }
}

/// Half-open cost interval `(lo, hi]`, sampled at `lo + (hi - lo) k / n` for `k = 1..=n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostRange {
    pub lo: f64,
    pub hi: f64,
}

impl CostRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && hi > lo) {
            return Err(Error::InvalidGrid("cost range must satisfy 0 <= lo < hi"));
        }
        Ok(Self { lo, hi })
    }

    fn sample(&self, k: usize, n: usize) -> f64 {
        self.lo + (self.hi - self.lo) * (k + 1) as f64 / n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostGrid {
    pub c_a: CostRange,
    pub c_d: CostRange,
    /// Samples per axis.
    pub resolution: usize,
}

impl CostGrid {
    /// `c_a in (0, 5]`, `c_d in (0, 200]`, 201 samples per axis.
    pub fn standard() -> Self {
        Self {
            c_a: CostRange { lo: 0.0, hi: 5.0 },
            c_d: CostRange { lo: 0.0, hi: 200.0 },
            resolution: 201,
        }
    }
}

pub fn security_risk(
    policy: RoutingPolicy,
    a: f64,
    d: f64,
    params: &SystemParams,
    costs: &CostParams,
) -> Result<ExtendedValue> {
    let baseline = utilities(policy, 0.0, 0.0, params, costs)?.defender;
    let current = utilities(policy, a, d, params, costs)?.defender;
    let baseline = baseline
        .finite()
        .expect("attack-free utility is finite under nominal stability");
    Ok(baseline - current)
}

pub fn queue_risk(
    policy: RoutingPolicy,
    a: f64,
    d: f64,
    params: &SystemParams,
) -> Result<ExtendedValue> {
    let profile = StrategyProfile::with_full_bias(a, d)?;
    let attacked = queue_cost(policy, &profile, params).total;
    let free = queue_cost(policy, &StrategyProfile::attack_free(), params)
        .total
        .finite()
        .expect("attack-free cost is finite under nominal stability");
    Ok(attacked - free)
}

/// Security risk on the `(a, d)` lattice, row-major with `a` outer.
pub fn risk_surface(
    policy: RoutingPolicy,
    params: &SystemParams,
    costs: &CostParams,
    grid: SurfaceGrid,
) -> Result<Vec<RiskPoint>> {
    if grid.a_points < 2 || grid.d_points < 2 {
        return Err(Error::InvalidGrid(
            "risk surface needs at least 2 points per axis",
        ));
    }
    let step_a = 1.0 / (grid.a_points - 1) as f64;
    let step_d = 1.0 / (grid.d_points - 1) as f64;
    (0..grid.a_points * grid.d_points)
        .into_par_iter()
        .map(|cell| {
            let a = (cell / grid.d_points) as f64 * step_a;
            let d = (cell % grid.d_points) as f64 * step_d;
            let risk = security_risk(policy, a, d, params, costs)?;
            Ok(RiskPoint { a, d, risk })
        })
        .collect()
}

/// Equilibrium regime on a cost lattice, row-major with `c_a` outer.
pub fn regime_map(
    policy: RoutingPolicy,
    params: &SystemParams,
    grid: CostGrid,
) -> Result<Vec<RegimeCell>> {
    if grid.resolution == 0 {
        return Err(Error::InvalidGrid(
            "regime map needs at least one sample per axis",
        ));
    }
    CostRange::new(grid.c_a.lo, grid.c_a.hi)?;
    CostRange::new(grid.c_d.lo, grid.c_d.hi)?;
    let n = grid.resolution;
    (0..n * n)
        .into_par_iter()
        .map(|cell| {
            let c_a = grid.c_a.sample(cell / n, n);
            let c_d = grid.c_d.sample(cell % n, n);
            let eq = equilibrium(policy, params, &CostParams::new(c_a, c_d)?)?;
            Ok(RegimeCell {
                c_a,
                c_d,
                regime: eq.regime,
                a_star: eq.a_star,
                d_star: eq.d_star,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyRecord {
    pub policy: RoutingPolicy,
    pub equilibrium: Equilibrium,
    pub queue_risk: ExtendedValue,
    pub security_risk: ExtendedValue,
    pub simulated: SimulatedRisk,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub shorter_queue: PolicyRecord,
    pub bernoulli: PolicyRecord,
    /// Simulated security risk of shorter-queue routing over Bernoulli's.
    pub risk_ratio: Option<f64>,
    /// `1 - risk_ratio`: fraction by which shorter-queue routing lowers the
    /// simulated security risk.
    pub reduction: Option<f64>,
}

/// Equilibria, analytic and simulated risks under both policies.
pub fn compare_policies(
    params: &SystemParams,
    costs: &CostParams,
    sim_config: &SimConfig,
) -> Result<ComparisonReport> {
    let record = |policy: RoutingPolicy| -> Result<PolicyRecord> {
        let eq = equilibrium(policy, params, costs)?;
        Ok(PolicyRecord {
            policy,
            queue_risk: queue_risk(policy, eq.a_star, eq.d_star, params)?,
            security_risk: security_risk(policy, eq.a_star, eq.d_star, params, costs)?,
            simulated: simulate_risk(policy, params, costs, &eq, sim_config)?,
            equilibrium: eq,
        })
    };
    let shorter_queue = record(RoutingPolicy::ShorterQueue)?;
    let bernoulli = record(RoutingPolicy::Bernoulli)?;
    let denom = bernoulli.simulated.security_risk;
    let risk_ratio = (denom != 0.0).then(|| shorter_queue.simulated.security_risk / denom);
    Ok(ComparisonReport {
        reduction: risk_ratio.map(|r| 1.0 - r),
        risk_ratio,
        shorter_queue,
        bernoulli,
    })
}
