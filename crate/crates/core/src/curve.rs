//! Directions `h : N → Z` of bounded variation and their comparison
//! preorder.
//!
//! Both representations are eventually affine: a [`Curve::Linear`] curve
//! `t ↦ ⌊slope·t⌋ + c` differs from an affine map by less than one, and a
//! [`Curve::Tabulated`] curve repeats its final increment forever. This makes
//! `≼`, `∼` and `≺≺` decidable from the tail slopes.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Curve {
    /// `h(t) = ⌊slope·t⌋ + intercept`.
    Linear { slope: Rational64, intercept: i64 },
    /// `h(t)` = sum of the first `t` increments, the last one repeated forever.
    Tabulated { increments: Vec<i64> },
}

/// Result of comparing two curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderVerdict {
    /// `h ∼ h'`.
    Equivalent,
    /// `h ≺ h'` without divergence.
    StrictlyBelow,
    /// `h ≺≺ h'`.
    FarBelow,
    StrictlyAbove,
    FarAbove,
    Incomparable,
    UnknownAtHorizon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveOrder {
    pub verdict: OrderVerdict,
    /// `(t, h(t), h'(t))`.
    pub witness: Option<(u64, i64, i64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside,
    /// Strictly between both bounds in the `≺≺` sense.
    InsideInterior,
    Outside,
    Unknown,
}

impl Curve {
    pub fn linear(slope: Rational64) -> Self {
        Curve::Linear {
            slope,
            intercept: 0,
        }
    }

    pub fn slope(numer: i64, denom: i64) -> Self {
        Self::linear(Rational64::new(numer, denom))
    }

    pub fn tabulated(increments: Vec<i64>) -> Result<Self> {
        if increments.is_empty() {
            return Err(Error::InvalidCurve(
                "tabulated curve needs at least one increment".into(),
            ));
        }
        Ok(Curve::Tabulated { increments })
    }

    pub fn eval(&self, t: u64) -> i64 {
        match self {
            Curve::Linear { slope, intercept } => {
                let n = *slope.numer() as i128 * t as i128;
                Integer::div_floor(&n, &(*slope.denom() as i128)) as i64 + intercept
            }
            Curve::Tabulated { increments } => {
                let n = increments.len() as u64;
                if t <= n {
                    increments[..t as usize].iter().sum()
                } else {
                    let last = *increments.last().unwrap();
                    increments.iter().sum::<i64>() + last * (t - n) as i64
                }
            }
        }
    }

    /// Smallest and largest values of `h(t+1) - h(t)` over all `t`.
    pub fn increment_range(&self) -> (i64, i64) {
        match self {
            Curve::Linear { slope, .. } => {
                let q = *slope.denom() as u64;
                let incs = (0..q).map(|t| self.eval(t + 1) - self.eval(t));
                incs.fold((i64::MAX, i64::MIN), |(lo, hi), d| (lo.min(d), hi.max(d)))
            }
            Curve::Tabulated { increments } => (
                *increments.iter().min().unwrap(),
                *increments.iter().max().unwrap(),
            ),
        }
    }

    /// `M_h = sup_t |h(t+1) - h(t)|`, exact. The horizon is a cross-check
    /// only.
    pub fn max_variation(&self, horizon: u64) -> Result<u64> {
        if horizon == 0 {
            return Err(Error::InvalidHorizon("horizon must be at least 1".into()));
        }
        let (lo, hi) = self.increment_range();
        let m = lo.unsigned_abs().max(hi.unsigned_abs());
        debug_assert!((0..horizon).all(|t| (self.eval(t + 1) - self.eval(t)).unsigned_abs() <= m));
        Ok(m)
    }

    /// Asymptotic slope of the affine tail.
    pub fn tail_slope(&self) -> Rational64 {
        match self {
            Curve::Linear { slope, .. } => *slope,
            Curve::Tabulated { increments } => Rational64::from_integer(*increments.last().unwrap()),
        }
    }

    /// Length of the non-periodic prefix and the period of `h(t) - tail_slope·t`.
    fn tail_shape(&self) -> (u64, u64) {
        match self {
            Curve::Linear { slope, .. } => (0, *slope.denom() as u64),
            Curve::Tabulated { increments } => (increments.len() as u64, 1),
        }
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Curve::Linear { slope, intercept } => {
                if slope.is_integer() {
                    write!(f, "{}", slope.numer())?;
                } else {
                    write!(f, "{}/{}", slope.numer(), slope.denom())?;
                }
                if *intercept != 0 {
                    write!(f, "{intercept:+}")?;
                }
                Ok(())
            }
            Curve::Tabulated { increments } => {
                let parts: Vec<String> = increments.iter().map(i64::to_string).collect();
                write!(f, "tab:{}", parts.join(","))
            }
        }
    }
}

pub fn parse_rational(text: &str) -> Result<Rational64> {
    let bad = || Error::InvalidCurve(format!("bad rational `{text}`"));
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().map_err(|_| bad())?;
            let d: i64 = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational64::new(n, d))
        }
        None => Ok(Rational64::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for Curve {
    type Err = Error;

    /// `p/q`, an integer, or `tab:d0,d1,...`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("tab:") {
            let incs = rest
                .split(',')
                .map(|d| {
                    d.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::InvalidCurve(format!("bad increment `{d}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            Curve::tabulated(incs)
        } else {
            Ok(Curve::linear(parse_rational(s)?))
        }
    }
}

fn flip(v: OrderVerdict) -> OrderVerdict {
    use OrderVerdict::*;
    match v {
        StrictlyBelow => StrictlyAbove,
        FarBelow => FarAbove,
        StrictlyAbove => StrictlyBelow,
        FarAbove => FarBelow,
        other => other,
    }
}

/// Compares `h` with `h2` under `≼`/`≺≺`.
///
/// The verdict comes from the tail slopes and is exact. The difference
/// `h2 - h` is additionally scanned over `[0, horizon]`; if the scan disagrees
/// with the tail analysis the result is `UnknownAtHorizon`.
pub fn compare(h: &Curve, h2: &Curve, horizon: u64) -> Result<CurveOrder> {
    if horizon == 0 {
        return Err(Error::InvalidHorizon("horizon must be at least 1".into()));
    }
    let s1 = h.tail_slope();
    let s2 = h2.tail_slope();
    let (pre1, per1) = h.tail_shape();
    let (pre2, per2) = h2.tail_shape();
    let prefix = pre1.max(pre2);
    let period = per1.lcm(&per2);
    let diff = |t: u64| h2.eval(t) - h.eval(t);

    if s1 == s2 {
        // h2 - h is periodic after the prefix, so its range over one period
        // past the prefix bounds it everywhere.
        let bound = (0..=prefix + period).map(|t| diff(t).abs()).max().unwrap();
        if (0..=horizon).any(|t| diff(t).abs() > bound) {
            return Ok(CurveOrder {
                verdict: OrderVerdict::UnknownAtHorizon,
                witness: None,
            });
        }
        return Ok(CurveOrder {
            verdict: OrderVerdict::Equivalent,
            witness: None,
        });
    }

    let below = s1 < s2;
    // Past the prefix, h2 - h grows by exactly (s2 - s1)·period per period.
    let expected = (s2 - s1) * Rational64::from_integer(period as i64);
    let t0 = prefix;
    let observed = diff(t0 + period) - diff(t0);
    let consistent = Rational64::from_integer(observed) == expected
        && (expected.is_positive() == below)
        && !expected.is_zero();
    if !consistent {
        return Ok(CurveOrder {
            verdict: OrderVerdict::UnknownAtHorizon,
            witness: None,
        });
    }
    let t = horizon;
    let verdict = if below {
        OrderVerdict::FarBelow
    } else {
        OrderVerdict::FarAbove
    };
    Ok(CurveOrder {
        verdict,
        witness: Some((t, h.eval(t), h2.eval(t))),
    })
}

/// Membership of `h` in the curve interval `[lo, hi]`.
pub fn in_interval(h: &Curve, lo: &Curve, hi: &Curve, horizon: u64) -> Result<Membership> {
    use OrderVerdict::*;
    let bounds = compare(lo, hi, horizon)?;
    match bounds.verdict {
        StrictlyAbove | FarAbove => return Err(Error::MalformedInterval),
        UnknownAtHorizon | Incomparable => return Ok(Membership::Unknown),
        _ => {}
    }
    let low = compare(lo, h, horizon)?.verdict;
    let high = compare(h, hi, horizon)?.verdict;
    if matches!(low, UnknownAtHorizon | Incomparable) || matches!(high, UnknownAtHorizon | Incomparable)
    {
        return Ok(Membership::Unknown);
    }
    let at_least_lo = matches!(low, Equivalent | StrictlyBelow | FarBelow);
    let at_most_hi = matches!(high, Equivalent | StrictlyBelow | FarBelow);
    Ok(if low == FarBelow && high == FarBelow {
        Membership::InsideInterior
    } else if at_least_lo && at_most_hi {
        Membership::Inside
    } else {
        Membership::Outside
    })
}

impl OrderVerdict {
    pub fn flipped(self) -> Self {
        flip(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(n: i64, d: i64, c: i64) -> Curve {
        Curve::Linear {
            slope: Rational64::new(n, d),
            intercept: c,
        }
    }

    #[test]
    fn eval_examples() {
        assert_eq!(lin(1, 2, 0).eval(5), 2);
        assert_eq!(lin(-1, 1, 3).eval(4), -1);
        assert_eq!(Curve::tabulated(vec![0, 2, -1]).unwrap().eval(5), -1);
        assert_eq!(lin(-1, 2, 0).eval(1), -1);
    }

    #[test]
    fn max_variation_examples() {
        assert_eq!(lin(1, 1, 0).max_variation(10).unwrap(), 1);
        assert_eq!(lin(3, 2, 0).max_variation(10).unwrap(), 2);
        let tab = Curve::tabulated(vec![0, 2, -1]).unwrap();
        assert_eq!(tab.max_variation(10).unwrap(), 2);
        assert!(tab.max_variation(0).is_err());
    }

    #[test]
    fn compare_examples() {
        assert_eq!(
            compare(&lin(1, 1, 0), &lin(1, 1, 7), 20).unwrap().verdict,
            OrderVerdict::Equivalent
        );
        assert_eq!(
            compare(&lin(0, 1, 0), &lin(1, 1, 0), 20).unwrap().verdict,
            OrderVerdict::FarBelow
        );
        let tab = Curve::tabulated(vec![1, 0]).unwrap();
        assert_eq!(
            compare(&tab, &lin(0, 1, 0), 20).unwrap().verdict,
            OrderVerdict::Equivalent
        );
        assert!(compare(&tab, &tab, 0).is_err());
    }

    #[test]
    fn interval_examples() {
        let lo = lin(-1, 1, 0);
        let hi = lin(0, 1, 0);
        assert_eq!(
            in_interval(&lin(-1, 2, 0), &lo, &hi, 20).unwrap(),
            Membership::InsideInterior
        );
        assert_eq!(in_interval(&lin(-1, 1, 0), &lo, &hi, 20).unwrap(), Membership::Inside);
        assert_eq!(in_interval(&lin(2, 1, 0), &lo, &hi, 20).unwrap(), Membership::Outside);
        assert_eq!(
            in_interval(&lin(0, 1, 0), &hi, &lo, 20),
            Err(Error::MalformedInterval)
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("1/2".parse::<Curve>().unwrap(), lin(1, 2, 0));
        assert_eq!("-1".parse::<Curve>().unwrap(), lin(-1, 1, 0));
        assert_eq!(
            "tab:0,2,-1".parse::<Curve>().unwrap(),
            Curve::tabulated(vec![0, 2, -1]).unwrap()
        );
        assert!("tab:".parse::<Curve>().is_err());
        assert!("1/0".parse::<Curve>().is_err());
        assert_eq!(lin(-3, 4, 0).to_string(), "-3/4");
        assert_eq!(lin(2, 1, 0).to_string(), "2");
    }
}
