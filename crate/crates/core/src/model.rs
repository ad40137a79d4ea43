//! Domain types and the stability conditions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arrival rate and per-server service rate.
///
/// Construction enforces `lambda > 0`, `mu > 0` and nominal stability
/// `lambda < 2 mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SystemParams {
    lambda: f64,
    mu: f64,
}

impl SystemParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        positive("lambda", lambda)?;
        positive("mu", mu)?;
        if lambda >= 2.0 * mu {
            return Err(Error::NominallyUnstable { lambda, mu });
        }
        Ok(Self { lambda, mu })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Whether demand exceeds what one server can absorb (`lambda >= mu`).
    pub fn is_congested(&self) -> bool {
        self.lambda >= self.mu
    }
}

/// Per-job technological costs of attacking and defending.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostParams {
    c_a: f64,
    c_d: f64,
}

impl CostParams {
    pub fn new(c_a: f64, c_d: f64) -> Result<Self> {
        non_negative("c_a", c_a)?;
        non_negative("c_d", c_d)?;
        Ok(Self { c_a, c_d })
    }

    pub fn c_a(&self) -> f64 {
        self.c_a
    }

    pub fn c_d(&self) -> f64 {
        self.c_d
    }
}

/// Attack probability `a`, misroute bias `p` (probability an overwritten job
/// goes to server 1) and defense probability `d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrategyProfile {
    a: f64,
    p: f64,
    d: f64,
}

impl StrategyProfile {
    pub fn new(a: f64, p: f64, d: f64) -> Result<Self> {
        probability("a", a)?;
        probability("p", p)?;
        probability("d", d)?;
        Ok(Self { a, p, d })
    }

    /// Profile with every overwritten job sent to server 1.
    pub fn with_full_bias(a: f64, d: f64) -> Result<Self> {
        Self::new(a, 1.0, d)
    }

    /// No attack, no defense.
    pub fn attack_free() -> Self {
        Self {
            a: 0.0,
            p: 1.0,
            d: 0.0,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    /// The same profile with the misroute bias mirrored (`p -> 1 - p`).
    pub fn mirrored(&self) -> Self {
        Self {
            p: 1.0 - self.p,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RoutingPolicy {
    /// Join the shorter queue, ties broken by a fair coin.
    #[serde(rename = "jsq")]
    ShorterQueue,
    /// Open-loop routing to either server with probability 1/2.
    #[serde(rename = "bernoulli")]
    Bernoulli,
}

impl RoutingPolicy {
    pub const ALL: [RoutingPolicy; 2] = [RoutingPolicy::ShorterQueue, RoutingPolicy::Bernoulli];

    pub fn name(&self) -> &'static str {
        match self {
            RoutingPolicy::ShorterQueue => "jsq",
            RoutingPolicy::Bernoulli => "bernoulli",
        }
    }
}

impl fmt::Display for RoutingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Probability that a job's routing is actually overwritten, `a (1 - d)`.
pub fn effective_attack(profile: &StrategyProfile) -> f64 {
    profile.a * (1.0 - profile.d)
}

/// Positive recurrence of the queue-length process.
///
/// Boundary equalities count as unstable.
pub fn is_stable(policy: RoutingPolicy, profile: &StrategyProfile, params: &SystemParams) -> bool {
    let at = effective_attack(profile);
    let (lambda, mu) = (params.lambda, params.mu);
    match policy {
        RoutingPolicy::ShorterQueue => {
            lambda < 2.0 * mu
                && at * profile.p * lambda < mu
                && at * (1.0 - profile.p) * lambda < mu
        }
        RoutingPolicy::Bernoulli => {
            let (r1, r2) = bernoulli_server_rates(at, profile.p, lambda);
            r1 < mu && r2 < mu
        }
    }
}

/// Per-server arrival rates under Bernoulli routing.
pub(crate) fn bernoulli_server_rates(effective_attack: f64, p: f64, lambda: f64) -> (f64, f64) {
    let skew = 2.0 * p * effective_attack;
    (
        (1.0 - effective_attack + skew) * lambda / 2.0,
        (1.0 + effective_attack - skew) * lambda / 2.0,
    )
}

/// A real number extended with both infinities.
///
/// Infinite values only come out of the instability branches of the cost and
/// utility formulas, so the regime logic can branch on them exactly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedValue {
    Finite(f64),
    PositiveInfinite,
    NegativeInfinite,
}

impl ExtendedValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Lossy conversion to `f64`, mapping the infinities to `+-f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtendedValue::Finite(v) => v,
            ExtendedValue::PositiveInfinite => f64::INFINITY,
            ExtendedValue::NegativeInfinite => f64::NEG_INFINITY,
        }
    }

    /// `self - rhs`, or `None` for the indeterminate `inf - inf`.
    pub fn checked_sub(self, rhs: ExtendedValue) -> Option<ExtendedValue> {
        use ExtendedValue::*;
        match (self, rhs) {
            (Finite(x), Finite(y)) => Some(Finite(x - y)),
            (PositiveInfinite, PositiveInfinite) | (NegativeInfinite, NegativeInfinite) => None,
            (PositiveInfinite, _) | (_, NegativeInfinite) => Some(PositiveInfinite),
            (NegativeInfinite, _) | (_, PositiveInfinite) => Some(NegativeInfinite),
        }
    }
}

impl From<f64> for ExtendedValue {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            ExtendedValue::PositiveInfinite
        } else if v == f64::NEG_INFINITY {
            ExtendedValue::NegativeInfinite
        } else {
            debug_assert!(!v.is_nan(), "NaN cannot be an ExtendedValue");
            ExtendedValue::Finite(v)
        }
    }
}

impl Neg for ExtendedValue {
    type Output = ExtendedValue;

    fn neg(self) -> Self::Output {
        match self {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(-v),
            ExtendedValue::PositiveInfinite => ExtendedValue::NegativeInfinite,
            ExtendedValue::NegativeInfinite => ExtendedValue::PositiveInfinite,
        }
    }
}

impl Add<f64> for ExtendedValue {
    type Output = ExtendedValue;

    fn add(self, rhs: f64) -> Self::Output {
        match self {
            ExtendedValue::Finite(v) => ExtendedValue::Finite(v + rhs),
            inf => inf,
        }
    }
}

impl Sub<f64> for ExtendedValue {
    type Output = ExtendedValue;

    fn sub(self, rhs: f64) -> Self::Output {
        self + (-rhs)
    }
}

impl Sub<ExtendedValue> for f64 {
    type Output = ExtendedValue;

    fn sub(self, rhs: ExtendedValue) -> Self::Output {
        -rhs + self
    }
}

impl PartialOrd for ExtendedValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        use ExtendedValue::*;
        match (self, other) {
            (Finite(x), Finite(y)) => x.partial_cmp(y),
            (PositiveInfinite, PositiveInfinite) | (NegativeInfinite, NegativeInfinite) => {
                Some(Ordering::Equal)
            }
            (PositiveInfinite, _) | (_, NegativeInfinite) => Some(Ordering::Greater),
            (NegativeInfinite, _) | (_, PositiveInfinite) => Some(Ordering::Less),
        }
    }
}

impl fmt::Display for ExtendedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedValue::Finite(v) => write!(f, "{v}"),
            ExtendedValue::PositiveInfinite => f.write_str("inf"),
            ExtendedValue::NegativeInfinite => f.write_str("-inf"),
        }
    }
}

// Finite values are plain JSON numbers, the infinities the strings "inf" / "-inf".
impl Serialize for ExtendedValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match *self {
            ExtendedValue::Finite(v) => serializer.serialize_f64(v),
            ExtendedValue::PositiveInfinite => serializer.serialize_str("inf"),
            ExtendedValue::NegativeInfinite => serializer.serialize_str("-inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ExtendedVisitor;

        impl Visitor<'_> for ExtendedVisitor {
            type Value = ExtendedValue;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a finite number, \"inf\" or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                if v.is_finite() {
                    Ok(ExtendedValue::Finite(v))
                } else {
                    Err(E::custom("non-finite number"))
                }
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedValue::Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedValue::Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "inf" => Ok(ExtendedValue::PositiveInfinite),
                    "-inf" => Ok(ExtendedValue::NegativeInfinite),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        deserializer.deserialize_any(ExtendedVisitor)
    }
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a finite positive number",
        })
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be a finite non-negative number",
        })
    }
}

fn probability(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must lie in [0, 1]",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(lambda: f64, mu: f64) -> SystemParams {
        SystemParams::new(lambda, mu).unwrap()
    }

    fn profile(a: f64, p: f64, d: f64) -> StrategyProfile {
        StrategyProfile::new(a, p, d).unwrap()
    }

    #[test]
    fn effective_attack_examples() {
        assert_eq!(effective_attack(&profile(1.0, 1.0, 0.0)), 1.0);
        assert_eq!(effective_attack(&profile(0.0, 1.0, 0.7)), 0.0);
        assert!((effective_attack(&profile(0.8, 1.0, 0.25)) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn stability_examples() {
        use RoutingPolicy::*;
        assert!(!is_stable(
            ShorterQueue,
            &profile(1.0, 1.0, 0.0),
            &params(0.6, 0.5)
        ));
        for p in [0.0, 0.3, 1.0] {
            for d in [0.0, 0.5, 1.0] {
                assert!(is_stable(
                    ShorterQueue,
                    &profile(0.0, p, d),
                    &params(0.4, 0.5)
                ));
            }
        }
        assert!(is_stable(
            Bernoulli,
            &profile(1.0, 1.0, 0.5),
            &params(0.6, 0.5)
        ));
    }

    #[test]
    fn boundary_is_unstable() {
        // a (1 - d) p lambda = 0.8 * 0.625 = mu exactly
        let prm = params(0.625, 0.5);
        let prof = profile(0.8, 1.0, 0.0);
        assert_eq!(effective_attack(&prof) * prm.lambda(), 0.5);
        assert!(!is_stable(RoutingPolicy::ShorterQueue, &prof, &prm));
        // Bernoulli: server-1 rate (1 + 1) * 0.5 / 2 = 0.5 = mu
        assert!(!is_stable(
            RoutingPolicy::Bernoulli,
            &profile(1.0, 1.0, 0.0),
            &params(0.5, 0.5)
        ));
    }

    #[test]
    fn constructors_reject_invalid_input() {
        assert!(matches!(
            SystemParams::new(1.0, 0.5),
            Err(Error::NominallyUnstable { .. })
        ));
        assert!(SystemParams::new(0.0, 0.5).is_err());
        assert!(SystemParams::new(0.4, -1.0).is_err());
        assert!(SystemParams::new(f64::NAN, 0.5).is_err());
        assert!(CostParams::new(-0.1, 1.0).is_err());
        assert!(CostParams::new(1.0, f64::INFINITY).is_err());
        assert!(StrategyProfile::new(1.1, 0.5, 0.0).is_err());
        assert!(StrategyProfile::new(0.5, -0.1, 0.0).is_err());
        assert!(StrategyProfile::new(0.5, 0.5, f64::NAN).is_err());
    }

    #[test]
    fn extended_value_arithmetic() {
        use ExtendedValue::*;
        assert_eq!(PositiveInfinite + 3.0, PositiveInfinite);
        assert_eq!(-PositiveInfinite, NegativeInfinite);
        assert_eq!(2.0 - NegativeInfinite, PositiveInfinite);
        assert_eq!(2.0 - Finite(0.5), Finite(1.5));
        assert_eq!(PositiveInfinite.checked_sub(PositiveInfinite), None);
        assert_eq!(
            Finite(1.0).checked_sub(PositiveInfinite),
            Some(NegativeInfinite)
        );
        assert!(PositiveInfinite > Finite(1e300));
        assert!(NegativeInfinite < Finite(-1e300));
        assert_eq!(ExtendedValue::from(f64::INFINITY), PositiveInfinite);
    }

    #[test]
    fn extended_value_json() {
        let v = vec![
            ExtendedValue::Finite(1.5),
            ExtendedValue::PositiveInfinite,
            ExtendedValue::NegativeInfinite,
        ];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"[1.5,"inf","-inf"]"#);
        let back: Vec<ExtendedValue> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    fn stable_params() -> impl Strategy<Value = SystemParams> {
        (0.05f64..3.0, 0.01f64..0.99).prop_map(|(mu, load)| params(2.0 * mu * load, mu))
    }

    proptest! {
        #[test]
        fn stability_monotone_in_effective_attack(
            prm in stable_params(),
            p in 0.0f64..=1.0,
            a in 0.0f64..=1.0,
            d in 0.0f64..=1.0,
            shrink_a in 0.0f64..=1.0,
            grow_d in 0.0f64..=1.0,
        ) {
            let a2 = a * shrink_a;
            let d2 = d + (1.0 - d) * grow_d;
            for policy in RoutingPolicy::ALL {
                if is_stable(policy, &profile(a, p, d), &prm) {
                    prop_assert!(is_stable(policy, &profile(a2, p, d2), &prm));
                }
            }
        }

        #[test]
        fn stability_symmetric_in_bias(
            prm in stable_params(),
            a in 0.0f64..=1.0,
            p in 0.0f64..=1.0,
            d in 0.0f64..=1.0,
        ) {
            let prof = profile(a, p, d);
            for policy in RoutingPolicy::ALL {
                prop_assert_eq!(
                    is_stable(policy, &prof, &prm),
                    is_stable(policy, &prof.mirrored(), &prm)
                );
            }
        }

        #[test]
        fn light_load_jsq_always_stable(
            mu in 0.05f64..3.0,
            load in 0.01f64..0.999,
            a in 0.0f64..=1.0,
            p in 0.0f64..=1.0,
            d in 0.0f64..=1.0,
        ) {
            let prm = params(mu * load, mu);
            prop_assert!(is_stable(RoutingPolicy::ShorterQueue, &profile(a, p, d), &prm));
        }
    }
}
