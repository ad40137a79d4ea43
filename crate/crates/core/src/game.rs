//! Attacker/defender game: utilities, best responses and equilibrium regimes.
//!
//! The attacker always sends overwritten jobs to server 1 (`p = 1`), since
//! concentrating misrouted work dominates splitting it. Both players then pick
//! a single probability: the attack level `a` and the defense level `d`.
//!
//! Because the attacker's utility is convex in `a`, its best response is
//! always an endpoint, so the equilibrium search only compares "no attack"
//! (which the defender answers with `d = 0`) against "attack every job"
//! followed by the defender's best reply to it.

use serde::Serialize;

use crate::cost::queue_cost;
use crate::error::{Error, Result};
use crate::model::{CostParams, ExtendedValue, RoutingPolicy, StrategyProfile, SystemParams};
use crate::root::bisect;

/// Relative tolerance used when comparing utilities in regime conditions.
pub const REGIME_TOLERANCE: f64 = 1e-12;

/// Distance kept from the Bernoulli stability floor `2 - 2 mu / lambda` when a
/// defense level has to be clamped back into the stable interval.
pub const STABILITY_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum AttackChoice {
    #[serde(rename = "none")]
    NoAttack,
    #[serde(rename = "full")]
    FullAttack,
}

impl AttackChoice {
    pub fn probability(&self) -> f64 {
        match self {
            AttackChoice::NoAttack => 0.0,
            AttackChoice::FullAttack => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Utilities {
    pub attacker: ExtendedValue,
    pub defender: ExtendedValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Regime {
    /// No attack, no defense.
    A,
    /// Full attack, no defense.
    B1,
    /// Full attack, interior defense.
    B2,
}

impl Regime {
    pub fn label(&self) -> &'static str {
        match self {
            Regime::A => "A",
            Regime::B1 => "B1",
            Regime::B2 => "B2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equilibrium {
    pub policy: RoutingPolicy,
    pub regime: Regime,
    pub a_star: f64,
    pub d_star: f64,
    pub utilities: Utilities,
}

impl Equilibrium {
    pub fn profile(&self) -> StrategyProfile {
        StrategyProfile::with_full_bias(self.a_star, self.d_star)
            .expect("equilibrium strategies are probabilities")
    }
}

/// Which piece of the piecewise best-response formula produced the value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseBranch {
    /// The attacker does not attack, so nothing is defended.
    NoAttack,
    /// Defending is not worth its cost.
    Zero,
    /// Interior solution of the first-order condition.
    Interior,
    /// Shorter-queue routing: defending half the jobs already removes the
    /// attack's effect on the bound, more is pure cost.
    Half,
    /// Free defense under Bernoulli routing: protect every job.
    FreeDefense,
}

impl ResponseBranch {
    pub fn label(&self) -> &'static str {
        match self {
            ResponseBranch::NoAttack => "no-attack",
            ResponseBranch::Zero => "zero",
            ResponseBranch::Interior => "interior",
            ResponseBranch::Half => "half",
            ResponseBranch::FreeDefense => "free-defense",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DefenderResponse {
    pub d_value: f64,
    pub branch: ResponseBranch,
}

/// Closed-form root of the Bernoulli defender's first-order condition at full
/// attack, together with the intermediate quantities of the cubic resolvent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormDHat {
    /// `raw` if it lies in the admissible interval, otherwise the nearest end.
    pub value: f64,
    pub raw: f64,
    /// `true` when `raw` fell outside the admissible interval.
    pub clamped: bool,
    pub zeta: f64,
    pub kappa: f64,
    pub theta: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NumericDHat {
    pub value: f64,
    /// `false` when the first-order condition has no sign change on the
    /// admissible interval and the boundary was returned.
    pub bracketed: bool,
}

/// Attacker and defender utilities with `p = 1`.
pub fn utilities(
    policy: RoutingPolicy,
    a: f64,
    d: f64,
    params: &SystemParams,
    costs: &CostParams,
) -> Result<Utilities> {
    let profile = StrategyProfile::with_full_bias(a, d)?;
    let queue = queue_cost(policy, &profile, params).total;
    let lambda = params.lambda();
    Ok(Utilities {
        attacker: queue - lambda * costs.c_a() * a,
        defender: -queue - lambda * costs.c_d() * d,
    })
}

/// `gamma = sqrt(mu) (sqrt(mu) - sqrt(2 / c_d)) / lambda`.
pub fn gamma_constant(params: &SystemParams, c_d: f64) -> Result<f64> {
    if !(c_d.is_finite() && c_d > 0.0) {
        return Err(Error::GammaUndefined { c_d });
    }
    let mu = params.mu();
    Ok(mu.sqrt() * (mu.sqrt() - (2.0 / c_d).sqrt()) / params.lambda())
}

/// Defender's best reply under shorter-queue routing.
///
/// At full attack the bound is `-2 + 2 mu / (mu - (1 - d) lambda)` while
/// `d < 1/2` and flat afterwards, so the reply is `1 - gamma` clipped to
/// `[0, 1/2]`. Zero defense cost is the `gamma -> -inf` limit.
pub fn defender_best_response_jsq(
    attack: AttackChoice,
    params: &SystemParams,
    c_d: f64,
) -> DefenderResponse {
    if attack == AttackChoice::NoAttack {
        return DefenderResponse {
            d_value: 0.0,
            branch: ResponseBranch::NoAttack,
        };
    }
    let half = DefenderResponse {
        d_value: 0.5,
        branch: ResponseBranch::Half,
    };
    let Ok(gamma) = gamma_constant(params, c_d) else {
        return half;
    };
    if gamma >= 1.0 {
        DefenderResponse {
            d_value: 0.0,
            branch: ResponseBranch::Zero,
        }
    } else if gamma > 0.5 {
        DefenderResponse {
            d_value: 1.0 - gamma,
            branch: ResponseBranch::Interior,
        }
    } else {
        half
    }
}

/// First-order condition of the Bernoulli defender at full attack, divided by
/// `lambda`: `2mu/(2mu - (2-d)lambda)^2 - 2mu/(2mu - d lambda)^2 - c_d`.
pub fn bernoulli_defense_foc(params: &SystemParams, c_d: f64, d: f64) -> f64 {
    let (lambda, mu) = (params.lambda(), params.mu());
    let loaded = 2.0 * mu - (2.0 - d) * lambda;
    let light = 2.0 * mu - d * lambda;
    2.0 * mu / (loaded * loaded) - 2.0 * mu / (light * light) - c_d
}

/// Marginal queue reduction of the first defended job at full attack under
/// Bernoulli routing, `lambda (2mu - lambda) / (2 mu (mu - lambda)^2)`.
/// Infinite when one server cannot absorb the whole demand.
pub fn bernoulli_zero_defense_threshold(params: &SystemParams) -> f64 {
    let (lambda, mu) = (params.lambda(), params.mu());
    if lambda >= mu {
        return f64::INFINITY;
    }
    lambda * (2.0 * mu - lambda) / (2.0 * mu * (mu - lambda) * (mu - lambda))
}

/// Lowest stable defense level at full attack under Bernoulli routing.
pub fn bernoulli_stability_floor(params: &SystemParams) -> f64 {
    (2.0 - 2.0 * params.mu() / params.lambda()).max(0.0)
}

fn admissible_lower_bound(params: &SystemParams) -> f64 {
    if params.is_congested() {
        bernoulli_stability_floor(params) + STABILITY_MARGIN
    } else {
        0.0
    }
}

/// Closed-form interior defense level under Bernoulli routing at full attack.
///
/// With `s = (1 - d) lambda` the first-order condition becomes the quartic
/// `(zeta^2 - s^2)^2 = 8 kappa zeta s`, solved through its resolvent cubic.
pub fn d_hat_closed_form(params: &SystemParams, c_d: f64) -> Result<ClosedFormDHat> {
    if !(c_d.is_finite() && c_d > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c_d",
            value: c_d,
            reason: "closed-form defense needs a positive defense cost",
        });
    }
    let (lambda, mu) = (params.lambda(), params.mu());
    let zeta = 2.0 * mu - lambda;
    let kappa = mu / c_d;
    let z2 = zeta * zeta;
    let z4 = z2 * z2;
    let k2 = kappa * kappa;

    let inner = k2 * z4 * z4 / 27.0 + k2 * k2 * z4 / 4.0;
    checked_radicand("kappa^2 zeta^8 / 27 + kappa^4 zeta^4 / 4", inner)?;
    let eta = (z4 * z2 / 27.0 + k2 * z2 / 2.0 + inner.sqrt()).cbrt();
    let theta_sq = eta + z4 / (9.0 * eta) + z2 / 3.0;
    checked_radicand("theta^2", theta_sq)?;
    let theta = theta_sq.sqrt();
    let outer = z2 - theta_sq + 2.0 * kappa * zeta / theta;
    checked_radicand("zeta^2 - theta^2 + 2 kappa zeta / theta", outer)?;

    let raw = 1.0 - (theta - outer.sqrt()) / lambda;
    let floor = bernoulli_stability_floor(params);
    let lower = admissible_lower_bound(params);
    let below = if params.is_congested() {
        raw <= floor
    } else {
        raw < 0.0
    };
    let (value, clamped) = if below {
        (lower, true)
    } else if raw > 1.0 {
        (1.0, true)
    } else {
        (raw, false)
    };
    Ok(ClosedFormDHat {
        value,
        raw,
        clamped,
        zeta,
        kappa,
        theta,
        eta,
    })
}

fn checked_radicand(quantity: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeRadicand { quantity, value })
    }
}

/// Bisection root of [`bernoulli_defense_foc`] on the stable interval,
/// `(2 - 2mu/lambda, 1]` when congested and `[0, 1]` otherwise.
pub fn d_hat_numeric(params: &SystemParams, c_d: f64) -> Result<NumericDHat> {
    if !(c_d.is_finite() && c_d > 0.0) {
        return Err(Error::InvalidParameter {
            name: "c_d",
            value: c_d,
            reason: "defense cost must be positive",
        });
    }
    let foc = |d: f64| bernoulli_defense_foc(params, c_d, d);
    let lo = if params.is_congested() {
        // The condition diverges to +inf at the floor itself.
        bernoulli_stability_floor(params)
    } else {
        if foc(0.0) <= 0.0 {
            return Ok(NumericDHat {
                value: 0.0,
                bracketed: false,
            });
        }
        0.0
    };
    // foc(1) = -c_d < 0 always.
    Ok(NumericDHat {
        value: bisect(foc, lo, 1.0, 1e-15),
        bracketed: true,
    })
}

/// Defender's best reply under Bernoulli routing.
///
/// The defender's utility at full attack is concave in `d`, so nothing is
/// defended when the marginal gain at `d = 0` does not exceed `c_d` (only
/// possible when `lambda < mu`); otherwise the reply is the interior root.
pub fn defender_best_response_bernoulli(
    attack: AttackChoice,
    params: &SystemParams,
    c_d: f64,
) -> Result<DefenderResponse> {
    if attack == AttackChoice::NoAttack {
        return Ok(DefenderResponse {
            d_value: 0.0,
            branch: ResponseBranch::NoAttack,
        });
    }
    if c_d == 0.0 {
        return Ok(DefenderResponse {
            d_value: 1.0,
            branch: ResponseBranch::FreeDefense,
        });
    }
    if !params.is_congested() && bernoulli_zero_defense_threshold(params) <= c_d {
        return Ok(DefenderResponse {
            d_value: 0.0,
            branch: ResponseBranch::Zero,
        });
    }
    let d_hat = d_hat_closed_form(params, c_d)?;
    Ok(DefenderResponse {
        d_value: d_hat.value,
        branch: ResponseBranch::Interior,
    })
}

pub fn defender_best_response(
    policy: RoutingPolicy,
    attack: AttackChoice,
    params: &SystemParams,
    c_d: f64,
) -> Result<DefenderResponse> {
    match policy {
        RoutingPolicy::ShorterQueue => Ok(defender_best_response_jsq(attack, params, c_d)),
        RoutingPolicy::Bernoulli => defender_best_response_bernoulli(attack, params, c_d),
    }
}

/// Attacker's best reply to defense level `d`; ties go to no attack.
pub fn attacker_best_response(
    policy: RoutingPolicy,
    d: f64,
    params: &SystemParams,
    c_a: f64,
) -> Result<AttackChoice> {
    let costs = CostParams::new(c_a, 0.0)?;
    let full = utilities(policy, 1.0, d, params, &costs)?.attacker;
    let none = utilities(policy, 0.0, d, params, &costs)?.attacker;
    Ok(if strictly_greater(full, none) {
        AttackChoice::FullAttack
    } else {
        AttackChoice::NoAttack
    })
}

/// Equilibrium regime and strategies.
///
/// The attacker compares not attacking (answered by `d = 0`) with attacking
/// every job (answered by the defender's best reply to full attack). Ties are
/// resolved to regime A.
pub fn equilibrium(
    policy: RoutingPolicy,
    params: &SystemParams,
    costs: &CostParams,
) -> Result<Equilibrium> {
    let quiet = utilities(policy, 0.0, 0.0, params, costs)?;
    let reply = defender_best_response(policy, AttackChoice::FullAttack, params, costs.c_d())?;
    let contested = utilities(policy, 1.0, reply.d_value, params, costs)?;

    let eq = if strictly_greater(contested.attacker, quiet.attacker) {
        let regime = if reply.d_value == 0.0 {
            Regime::B1
        } else {
            Regime::B2
        };
        Equilibrium {
            policy,
            regime,
            a_star: 1.0,
            d_star: reply.d_value,
            utilities: contested,
        }
    } else {
        Equilibrium {
            policy,
            regime: Regime::A,
            a_star: 0.0,
            d_star: 0.0,
            utilities: quiet,
        }
    };
    Ok(eq)
}

/// `lhs > rhs` beyond the relative regime tolerance; `+inf` beats any finite value.
pub(crate) fn strictly_greater(lhs: ExtendedValue, rhs: ExtendedValue) -> bool {
    match (lhs, rhs) {
        (ExtendedValue::Finite(x), ExtendedValue::Finite(y)) => {
            x - y > REGIME_TOLERANCE * x.abs().max(y.abs()).max(1.0)
        }
        _ => lhs > rhs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(lambda: f64, mu: f64) -> SystemParams {
        SystemParams::new(lambda, mu).unwrap()
    }

    fn costs(c_a: f64, c_d: f64) -> CostParams {
        CostParams::new(c_a, c_d).unwrap()
    }

    // Hand-evaluated gamma; independent of gamma_constant's factoring.
    fn gamma_by_hand(lambda: f64, mu: f64, c_d: f64) -> f64 {
        (mu - (2.0 * mu / c_d).sqrt()) / lambda
    }

    #[test]
    fn utilities_examples() {
        let u = utilities(
            RoutingPolicy::ShorterQueue,
            0.0,
            0.0,
            &params(0.4, 0.5),
            &costs(1.0, 20.0),
        )
        .unwrap();
        let expected = -2.0 + 1.0 / 0.3;
        assert!((u.attacker.finite().unwrap() - expected).abs() < 1e-12);
        assert!((u.defender.finite().unwrap() + expected).abs() < 1e-12);

        for c in [(0.0, 0.0), (1.0, 20.0), (100.0, 1.0)] {
            let u = utilities(
                RoutingPolicy::ShorterQueue,
                1.0,
                0.0,
                &params(0.6, 0.5),
                &costs(c.0, c.1),
            )
            .unwrap();
            assert_eq!(u.attacker, ExtendedValue::PositiveInfinite);
            assert_eq!(u.defender, ExtendedValue::NegativeInfinite);
        }

        let u = utilities(
            RoutingPolicy::Bernoulli,
            1.0,
            0.0,
            &params(0.4, 0.5),
            &costs(1.0, 20.0),
        )
        .unwrap();
        assert!((u.attacker.finite().unwrap() - 3.6).abs() < 1e-12);
    }

    #[test]
    fn utilities_reject_out_of_range_strategies() {
        let r = utilities(
            RoutingPolicy::Bernoulli,
            1.5,
            0.0,
            &params(0.4, 0.5),
            &costs(1.0, 1.0),
        );
        assert!(r.is_err());
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_constant(&params(0.4, 0.5), 20.0).unwrap();
        assert!((g - gamma_by_hand(0.4, 0.5, 20.0)).abs() < 1e-14);
        assert!((g - 0.690_983_005_625).abs() < 1e-11);
        let g = gamma_constant(&params(0.6, 0.5), 20.0).unwrap();
        assert!((g - 0.460_655_337_083).abs() < 1e-11);
        assert_eq!(gamma_constant(&params(0.6, 0.5), 2.0 / 0.5).unwrap(), 0.0);
        assert!(matches!(
            gamma_constant(&params(0.6, 0.5), 0.0),
            Err(Error::GammaUndefined { .. })
        ));
        assert!(gamma_constant(&params(0.6, 0.5), 1.0).unwrap() < 0.0);
    }

    #[test]
    fn jsq_defender_examples() {
        for (lambda, c_d) in [(0.4, 20.0), (0.6, 1.0), (0.1, 1000.0)] {
            let r = defender_best_response_jsq(AttackChoice::NoAttack, &params(lambda, 0.5), c_d);
            assert_eq!(r.d_value, 0.0);
            assert_eq!(r.branch, ResponseBranch::NoAttack);
        }
        let r = defender_best_response_jsq(AttackChoice::FullAttack, &params(0.4, 0.5), 20.0);
        assert_eq!(r.branch, ResponseBranch::Interior);
        assert!((r.d_value - (1.0 - gamma_by_hand(0.4, 0.5, 20.0))).abs() < 1e-14);
        assert!((r.d_value - 0.309_016_994_375).abs() < 1e-11);

        let r = defender_best_response_jsq(AttackChoice::FullAttack, &params(0.6, 0.5), 20.0);
        assert_eq!(r.branch, ResponseBranch::Half);
        assert_eq!(r.d_value, 0.5);

        // gamma >= 1 needs mu - sqrt(2 mu / c_d) >= lambda
        let r = defender_best_response_jsq(AttackChoice::FullAttack, &params(0.4, 0.5), 110.0);
        assert_eq!(r.branch, ResponseBranch::Zero);
        assert_eq!(r.d_value, 0.0);

        let r = defender_best_response_jsq(AttackChoice::FullAttack, &params(0.4, 0.5), 0.0);
        assert_eq!(r.branch, ResponseBranch::Half);
    }

    #[test]
    fn jsq_gamma_boundaries_use_weak_inequalities() {
        // c_d chosen so gamma is exactly 1/2: mu - sqrt(2mu/c_d) = lambda/2
        // with lambda = 0.6, mu = 0.5 gives sqrt(1/c_d) = 0.2, c_d = 25.
        let prm = params(0.6, 0.5);
        let g = gamma_constant(&prm, 25.0).unwrap();
        assert!((g - 0.5).abs() < 1e-15);
        let r = defender_best_response_jsq(AttackChoice::FullAttack, &prm, 25.0);
        if g <= 0.5 {
            assert_eq!(r.branch, ResponseBranch::Half);
        } else {
            assert_eq!(r.branch, ResponseBranch::Interior);
            assert!((r.d_value - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn bernoulli_threshold_is_foc_at_zero() {
        for (lambda, mu, c_d) in [(0.4, 0.5, 20.0), (0.1, 1.0, 3.0), (0.45, 0.5, 1.0)] {
            let prm = params(lambda, mu);
            let t = bernoulli_zero_defense_threshold(&prm);
            let g0 = bernoulli_defense_foc(&prm, c_d, 0.0);
            assert!((t - c_d - g0).abs() < 1e-9 * t.max(1.0));
        }
        let t = bernoulli_zero_defense_threshold(&params(0.4, 0.5));
        assert!((t - 24.0).abs() < 1e-12);
    }

    #[test]
    fn bernoulli_defender_examples() {
        let prm = params(0.4, 0.5);
        let r = defender_best_response_bernoulli(AttackChoice::FullAttack, &prm, 20.0).unwrap();
        assert_eq!(r.branch, ResponseBranch::Interior);
        let numeric = d_hat_numeric(&prm, 20.0).unwrap();
        assert!(numeric.bracketed);
        assert!((r.d_value - numeric.value).abs() < 1e-8);

        // Threshold 24 still exceeds c_d = 2, so the defender stays interior.
        let r = defender_best_response_bernoulli(AttackChoice::FullAttack, &prm, 2.0).unwrap();
        assert_eq!(r.branch, ResponseBranch::Interior);
        assert!(r.d_value > 0.7);

        let r = defender_best_response_bernoulli(AttackChoice::FullAttack, &prm, 110.0).unwrap();
        assert_eq!(r.branch, ResponseBranch::Zero);
        assert_eq!(r.d_value, 0.0);

        let congested = params(0.6, 0.5);
        for c_d in [0.5, 20.0, 110.0, 5000.0] {
            let r = defender_best_response_bernoulli(AttackChoice::FullAttack, &congested, c_d)
                .unwrap();
            assert_eq!(r.branch, ResponseBranch::Interior);
            assert!(r.d_value > 1.0 / 3.0);
        }

        let r = defender_best_response_bernoulli(AttackChoice::NoAttack, &congested, 3.0).unwrap();
        assert_eq!(r.branch, ResponseBranch::NoAttack);
        let r = defender_best_response_bernoulli(AttackChoice::FullAttack, &prm, 0.0).unwrap();
        assert_eq!((r.d_value, r.branch), (1.0, ResponseBranch::FreeDefense));
    }

    #[test]
    fn d_hat_matches_numeric_root() {
        for (lambda, c_d) in [(0.4, 110.0), (0.6, 110.0), (0.4, 20.0), (0.9, 5.0)] {
            let prm = params(lambda, 0.5);
            let closed = d_hat_closed_form(&prm, c_d).unwrap();
            let numeric = d_hat_numeric(&prm, c_d).unwrap();
            assert!(
                (closed.value - numeric.value).abs() < 1e-8,
                "lambda={lambda} c_d={c_d}: {closed:?} vs {numeric:?}"
            );
            assert_eq!(closed.clamped, !numeric.bracketed);
        }
        let c = d_hat_closed_form(&params(0.6, 0.5), 110.0).unwrap();
        assert!(c.value > 1.0 / 3.0 && !c.clamped);
        assert!((c.zeta - 0.4).abs() < 1e-15);
        assert!((c.kappa - 0.5 / 110.0).abs() < 1e-15);

        // lambda < mu and c_d above the threshold: no interior root.
        let c = d_hat_closed_form(&params(0.4, 0.5), 110.0).unwrap();
        assert!(c.clamped && c.raw < 0.0 && c.value == 0.0);
    }

    #[test]
    fn numeric_root_satisfies_foc() {
        for (lambda, mu, c_d) in [(0.6, 0.5, 110.0), (0.3, 1.0, 0.01), (1.9, 1.0, 5.0)] {
            let prm = params(lambda, mu);
            let r = d_hat_numeric(&prm, c_d).unwrap();
            assert!(r.bracketed);
            assert!(bernoulli_defense_foc(&prm, c_d, r.value).abs() < 1e-9);
        }
    }

    #[test]
    fn d_hat_decreases_with_defense_cost() {
        for lambda in [0.3, 0.6, 0.9] {
            let prm = params(lambda, 0.5);
            let mut prev_closed = f64::INFINITY;
            let mut prev_numeric = f64::INFINITY;
            for k in 0..60 {
                let c_d = 0.5 * 1.15f64.powi(k);
                let closed = d_hat_closed_form(&prm, c_d).unwrap().value;
                let numeric = d_hat_numeric(&prm, c_d).unwrap().value;
                assert!(closed <= prev_closed + 1e-12);
                assert!(numeric <= prev_numeric + 1e-12);
                prev_closed = closed;
                prev_numeric = numeric;
            }
        }
    }

    #[test]
    fn attacker_examples() {
        let r = attacker_best_response(RoutingPolicy::ShorterQueue, 0.0, &params(0.6, 0.5), 1e9)
            .unwrap();
        assert_eq!(r, AttackChoice::FullAttack);
        // u_a(1, 0) = 8 - 0.4 * 20 = 0 < u_a(0, 0) = 4/3
        let r = attacker_best_response(RoutingPolicy::ShorterQueue, 0.0, &params(0.4, 0.5), 20.0)
            .unwrap();
        assert_eq!(r, AttackChoice::NoAttack);
        let r = attacker_best_response(RoutingPolicy::ShorterQueue, 0.0, &params(0.4, 0.5), 10.0)
            .unwrap();
        assert_eq!(r, AttackChoice::FullAttack);
        // d >= 1/2 under shorter-queue leaves the bound untouched: tie at c_a = 0.
        let r = attacker_best_response(RoutingPolicy::ShorterQueue, 0.6, &params(0.4, 0.5), 0.0)
            .unwrap();
        assert_eq!(r, AttackChoice::NoAttack);
        // d = 1 makes the attack a no-op: tie goes to no attack.
        let r =
            attacker_best_response(RoutingPolicy::Bernoulli, 1.0, &params(0.4, 0.5), 0.0).unwrap();
        assert_eq!(r, AttackChoice::NoAttack);
    }

    #[test]
    fn equilibrium_examples() {
        let eq = equilibrium(
            RoutingPolicy::ShorterQueue,
            &params(0.4, 0.5),
            &costs(1.0, 20.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::B2);
        assert_eq!(eq.a_star, 1.0);
        assert!((eq.d_star - 0.309_016_994_375).abs() < 1e-11);

        let eq = equilibrium(
            RoutingPolicy::ShorterQueue,
            &params(0.6, 0.5),
            &costs(0.1, 20.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::A);
        assert_eq!((eq.a_star, eq.d_star), (0.0, 0.0));

        let eq = equilibrium(
            RoutingPolicy::ShorterQueue,
            &params(0.4, 0.5),
            &costs(1.0, 110.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::B1);

        let eq = equilibrium(
            RoutingPolicy::Bernoulli,
            &params(0.4, 0.5),
            &costs(1.0, 110.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::B1);
        let eq = equilibrium(
            RoutingPolicy::Bernoulli,
            &params(0.4, 0.5),
            &costs(1.0, 20.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::B2);
        let eq = equilibrium(
            RoutingPolicy::Bernoulli,
            &params(0.6, 0.5),
            &costs(1.0, 110.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::B2);
        assert!(eq.d_star > 1.0 / 3.0);

        for policy in RoutingPolicy::ALL {
            let eq = equilibrium(policy, &params(0.6, 0.5), &costs(1e6, 20.0)).unwrap();
            assert_eq!(eq.regime, Regime::A);
        }
    }

    #[test]
    fn zero_attack_cost_tie_goes_to_regime_a() {
        // gamma <= 1/2 and c_a = 0: attacking and not attacking tie.
        let eq = equilibrium(
            RoutingPolicy::ShorterQueue,
            &params(0.6, 0.5),
            &costs(0.0, 20.0),
        )
        .unwrap();
        assert_eq!(eq.regime, Regime::A);
    }

    #[test]
    fn b2_value_identity() {
        for (lambda, c_d) in [(0.4, 20.0), (0.6, 110.0), (0.6, 60.0), (0.3, 40.0)] {
            let prm = params(lambda, 0.5);
            let r = defender_best_response_jsq(AttackChoice::FullAttack, &prm, c_d);
            if r.branch == ResponseBranch::Interior {
                let direct = 1.0 - (0.5 - (2.0 * 0.5 / c_d).sqrt()) / lambda;
                let via_gamma = 1.0 - gamma_constant(&prm, c_d).unwrap();
                assert!((r.d_value - direct).abs() < 1e-14);
                assert!((r.d_value - via_gamma).abs() < 1e-14);
            }
        }
    }
}
