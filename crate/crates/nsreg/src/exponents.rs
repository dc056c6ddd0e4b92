//! Exact exponent arithmetic for the admissibility test and the product
//! exponent bookkeeping.
//!
//! Exponents live in [1, ∞] and all bookkeeping identities are linear in the
//! reciprocals, so everything is carried out in exact rational arithmetic
//! with ∞ represented by a zero reciprocal.

use crate::error::{Error, Result};
use num_rational::Ratio;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

type R = Ratio<i64>;

fn r(n: i64, d: i64) -> R {
    Ratio::new(n, d)
}

/// A Lebesgue exponent in [1, ∞], stored exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Exponent(Option<R>);

impl Exponent {
    pub const INFINITY: Exponent = Exponent(None);

    pub fn from_int(v: i64) -> Result<Self> {
        Self::from_ratio(v, 1)
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidArgument("exponent denominator is zero".into()));
        }
        let v = r(num, den);
        if v < r(1, 1) {
            return Err(Error::InvalidArgument(format!(
                "exponent must be >= 1, got {v}"
            )));
        }
        Ok(Exponent(Some(v)))
    }

    fn from_ratio_raw(v: R) -> Result<Self> {
        Self::from_ratio(*v.numer(), *v.denom())
    }

    /// Parse "inf"/"∞", an integer, a decimal, or "a/b".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" | "oo" => return Ok(Self::INFINITY),
            _ => {}
        }
        if let Some((a, b)) = s.split_once('/') {
            let num: i64 = a.trim().parse().map_err(|_| bad_exponent(s))?;
            let den: i64 = b.trim().parse().map_err(|_| bad_exponent(s))?;
            if den == 0 {
                return Err(bad_exponent(s));
            }
            return Self::from_ratio(num, den);
        }
        if let Some((int, frac)) = s.split_once('.') {
            let digits = frac.len() as u32;
            if digits > 9 || frac.chars().any(|c| !c.is_ascii_digit()) {
                return Err(bad_exponent(s));
            }
            let int: i64 = int.parse().map_err(|_| bad_exponent(s))?;
            let frac: i64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| bad_exponent(s))?
            };
            let den = 10i64.pow(digits);
            return Self::from_ratio(int * den + frac, den);
        }
        let v: i64 = s.parse().map_err(|_| bad_exponent(s))?;
        Self::from_int(v)
    }

    /// Convert a JSON number; integers are exact, other values take the
    /// closest small rational.
    pub fn from_f64(v: f64) -> Result<Self> {
        if v.is_infinite() && v > 0.0 {
            return Ok(Self::INFINITY);
        }
        if !v.is_finite() {
            return Err(Error::InvalidArgument(format!("bad exponent {v}")));
        }
        if v.fract() == 0.0 && v.abs() < 1e15 {
            return Self::from_int(v as i64);
        }
        let approx = Ratio::<i64>::approximate_float(v)
            .ok_or_else(|| Error::InvalidArgument(format!("bad exponent {v}")))?;
        Self::from_ratio_raw(approx)
    }

    pub fn is_infinite(&self) -> bool {
        self.0.is_none()
    }

    /// Reciprocal 1/p as an exact rational; 0 for ∞.
    pub fn recip(&self) -> R {
        match self.0 {
            Some(v) => v.recip(),
            None => r(0, 1),
        }
    }

    /// Exponent from its reciprocal; zero reciprocal yields ∞.
    pub fn from_recip(rho: R) -> Result<Self> {
        if rho < r(0, 1) || rho > r(1, 1) {
            return Err(Error::InvalidArgument(format!(
                "reciprocal exponent must lie in [0, 1], got {rho}"
            )));
        }
        if rho == r(0, 1) {
            Ok(Self::INFINITY)
        } else {
            Self::from_ratio_raw(rho.recip())
        }
    }

    pub fn as_f64(&self) -> f64 {
        match self.0 {
            Some(v) => *v.numer() as f64 / *v.denom() as f64,
            None => f64::INFINITY,
        }
    }

    pub fn as_ratio(&self) -> Option<R> {
        self.0
    }
}

fn bad_exponent(s: &str) -> Error {
    Error::InvalidArgument(format!("unparseable exponent {s:?}"))
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "inf"),
            Some(v) if v.is_integer() => write!(f, "{}", v.numer()),
            Some(v) => write!(f, "{}/{}", v.numer(), v.denom()),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Str(String),
        }
        let raw = Raw::deserialize(d)?;
        let parsed = match raw {
            Raw::Num(v) => Exponent::from_f64(v),
            Raw::Str(s) => Exponent::parse(&s),
        };
        parsed.map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The (p, q) pair for the direction-divergence criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionSpec {
    pub p: Exponent,
    pub q: Exponent,
}

/// One admissibility sub-constraint with its evaluation.
#[derive(Debug, Clone, Serialize)]
pub struct ConstraintCheck {
    pub name: &'static str,
    pub detail: String,
    pub holds: bool,
}

impl CriterionSpec {
    pub fn new(p: Exponent, q: Exponent) -> Self {
        Self { p, q }
    }

    /// Evaluate the three sub-constraints 2/p + 3/q ≤ 1/2, q ≥ 6, p ≥ 4.
    pub fn checks(&self) -> Vec<ConstraintCheck> {
        let rp = self.p.recip();
        let rq = self.q.recip();
        let lhs = r(2, 1) * rp + r(3, 1) * rq;
        vec![
            ConstraintCheck {
                name: "2/p + 3/q <= 1/2",
                detail: format!(
                    "2/p + 3/q = {} {} 1/2",
                    fmt_ratio(lhs),
                    if lhs <= r(1, 2) { "<=" } else { ">" }
                ),
                holds: lhs <= r(1, 2),
            },
            ConstraintCheck {
                name: "q >= 6",
                detail: format!("q = {}", self.q),
                holds: rq <= r(1, 6),
            },
            ConstraintCheck {
                name: "p >= 4",
                detail: format!("p = {}", self.p),
                holds: rp <= r(1, 4),
            },
        ]
    }

    pub fn is_admissible(&self) -> bool {
        self.checks().iter().all(|c| c.holds)
    }

    /// Names of every violated constraint (empty when admissible).
    pub fn violations(&self) -> Vec<String> {
        self.checks()
            .into_iter()
            .filter(|c| !c.holds)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect()
    }

    pub fn require_admissible(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Inadmissible(v.join("; ")))
        }
    }
}

fn fmt_ratio(v: R) -> String {
    if v.is_integer() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

/// The full exponent bookkeeping of the product estimate: the criterion pair
/// (p, q), the velocity energy-line pair (a, b) with 2/a + 3/b = 3/2, the
/// product pair (p̄, q̄), the pressure pairing exponent r with 2/r + 1/q̄ = 1
/// and θ = 3/r − 1/2.
#[derive(Debug, Clone, Serialize)]
pub struct ExponentBudget {
    pub p: Exponent,
    pub q: Exponent,
    pub a: Exponent,
    pub b: Exponent,
    pub p_bar: Exponent,
    pub q_bar: Exponent,
    pub r: Exponent,
    /// θ as an exact rational in (0, 1].
    pub theta_num: i64,
    pub theta_den: i64,
    pub checks: Vec<ConstraintCheck>,
}

impl ExponentBudget {
    pub fn theta(&self) -> f64 {
        self.theta_num as f64 / self.theta_den as f64
    }
}

/// Build and fully verify the exponent budget for criterion pair (p, q) and
/// the velocity space exponent b ∈ [2, 6]. Every violated invariant is
/// rejected with the constraint named.
pub fn exponent_budget(p: Exponent, q: Exponent, b: Exponent) -> Result<ExponentBudget> {
    CriterionSpec::new(p, q).require_admissible()?;
    let rb = b.recip();
    if rb > r(1, 2) || rb < r(1, 6) {
        return Err(Error::Inadmissible(format!("2 <= b <= 6 (b = {b})")));
    }
    // 2/a + 3/b = 3/2  →  1/a = 3/4 − (3/2)·(1/b)
    let ra = r(3, 4) - r(3, 2) * rb;
    let a = Exponent::from_recip(ra)?;
    let rp_bar = p.recip() + ra;
    let rq_bar = q.recip() + rb;
    let mut checks = Vec::new();
    let mut push = |name: &'static str, detail: String, holds: bool| {
        checks.push(ConstraintCheck { name, detail, holds });
    };
    push(
        "1/pbar = 1/p + 1/a",
        format!("1/pbar = {}", fmt_ratio(rp_bar)),
        true,
    );
    push(
        "1/qbar = 1/q + 1/b",
        format!("1/qbar = {}", fmt_ratio(rq_bar)),
        true,
    );
    push(
        "qbar >= 2",
        format!("1/qbar = {} <= 1/2 required", fmt_ratio(rq_bar)),
        rq_bar <= r(1, 2),
    );
    push(
        "qbar < 6",
        format!("1/qbar = {} > 1/6 required", fmt_ratio(rq_bar)),
        rq_bar > r(1, 6),
    );
    let two_over_pbar_plus = r(2, 1) * rp_bar + r(3, 1) * rq_bar;
    push(
        "2/pbar + 3/qbar <= 2",
        format!("2/pbar + 3/qbar = {}", fmt_ratio(two_over_pbar_plus)),
        two_over_pbar_plus <= r(2, 1),
    );
    // 2/r + 1/qbar = 1  →  1/r = (1 − 1/qbar)/2
    let rr = (r(1, 1) - rq_bar) / r(2, 1);
    let theta = r(3, 1) * rr - r(1, 2);
    let theta_alt = (r(2, 1) - r(3, 1) * rq_bar) / r(2, 1);
    push(
        "theta = 3/r - 1/2 = (2 - 3/qbar)/2",
        format!("theta = {}", fmt_ratio(theta)),
        theta == theta_alt,
    );
    push(
        "0 < theta <= 1",
        format!("theta = {}", fmt_ratio(theta)),
        theta > r(0, 1) && theta <= r(1, 1),
    );
    // 1/theta <= pbar  ⇔  1/pbar <= theta
    push(
        "1/theta <= pbar",
        format!(
            "1/pbar = {} <= theta = {}",
            fmt_ratio(rp_bar),
            fmt_ratio(theta)
        ),
        rp_bar <= theta,
    );
    if let Some(fail) = checks.iter().find(|c| !c.holds) {
        return Err(Error::Inadmissible(format!("{} ({})", fail.name, fail.detail)));
    }
    Ok(ExponentBudget {
        p,
        q,
        a,
        b,
        p_bar: Exponent::from_recip(rp_bar)?,
        q_bar: Exponent::from_recip(rq_bar)?,
        r: Exponent::from_recip(rr)?,
        theta_num: *theta.numer(),
        theta_den: *theta.denom(),
        checks,
    })
}
