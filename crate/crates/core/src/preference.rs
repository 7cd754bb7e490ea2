//! Preferences over evaluated outcomes.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lasso::Lasso;
use crate::rational::{format_rational, parse_rational, Rational};

/// Result of comparing two outcomes under a (pre)order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparison {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl Comparison {
    pub fn reverse(self) -> Comparison {
        match self {
            Comparison::Less => Comparison::Greater,
            Comparison::Greater => Comparison::Less,
            c => c,
        }
    }

    /// `self` says the left outcome is at most the right one.
    pub fn is_le(self) -> bool {
        matches!(self, Comparison::Less | Comparison::Equal)
    }

    pub fn is_ge(self) -> bool {
        matches!(self, Comparison::Greater | Comparison::Equal)
    }
}

impl From<Ordering> for Comparison {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Comparison::Less,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Greater,
        }
    }
}

/// The implemented payoffs and the preferences they induce.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Preference {
    /// Expected limsup of average rewards.
    MeanPayoff,
    /// Probability that the largest priority seen infinitely often is even.
    Parity,
    /// Probability that the largest priority ever seen is even.
    SimpleParity,
    /// Expected discounted sum `Σ βⁱ rᵢ₊₁`, with `0 < β < 1`.
    Discounted(Rational),
    /// Eventual dominance of partial sums, on deterministic outcomes.
    Overtaking,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreferenceError {
    #[error("outcomes of different kinds cannot be compared under {0}")]
    TagMismatch(String),
    #[error("unknown payoff '{0}' (expected mean, parity, simple-parity, discounted:<num/den> or overtaking)")]
    UnknownPayoff(String),
    #[error("discount factor must lie strictly between 0 and 1, got {0}")]
    BadDiscount(String),
}

/// An evaluated outcome: an exact value for payoff-induced preferences, or the
/// reward word of a deterministic play.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OutcomeStat {
    Value(Rational),
    Lasso(Lasso),
}

impl OutcomeStat {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            OutcomeStat::Value(v) => Some(v),
            OutcomeStat::Lasso(_) => None,
        }
    }
}

impl fmt::Display for OutcomeStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutcomeStat::Value(v) => f.write_str(&format_rational(v)),
            OutcomeStat::Lasso(l) => write!(f, "{l}"),
        }
    }
}

impl Preference {
    pub fn discounted(beta: Rational) -> Result<Preference, PreferenceError> {
        if beta <= Rational::zero() || beta >= Rational::one() {
            return Err(PreferenceError::BadDiscount(format_rational(&beta)));
        }
        Ok(Preference::Discounted(beta))
    }

    /// Payoff-induced preferences are total; overtaking is not.
    pub fn is_total(&self) -> bool {
        !matches!(self, Preference::Overtaking)
    }

    pub fn needs_priorities(&self) -> bool {
        matches!(self, Preference::Parity | Preference::SimpleParity)
    }

    /// Payoff of a single ultimately periodic word. Letters are rewards for
    /// the mean and discounted payoffs and priorities for the parity ones.
    pub fn lasso_value(&self, l: &Lasso) -> Result<Rational, PreferenceError> {
        let even = |q: &Rational| {
            if q.is_integer() && q.to_integer().is_even() {
                Rational::one()
            } else {
                Rational::zero()
            }
        };
        match self {
            Preference::MeanPayoff => Ok(l.cycle_average()),
            Preference::Parity => Ok(even(l.cycle_max())),
            Preference::SimpleParity => Ok(even(l.max_letter())),
            Preference::Discounted(beta) => Ok(discounted_lasso(l, beta)),
            Preference::Overtaking => Err(PreferenceError::TagMismatch(self.to_string())),
        }
    }

    fn as_value(&self, o: &OutcomeStat) -> Result<Rational, PreferenceError> {
        match o {
            OutcomeStat::Value(v) => Ok(v.clone()),
            OutcomeStat::Lasso(l) => self.lasso_value(l),
        }
    }

    /// Compares two outcomes; `Less` means the first is strictly worse for Max.
    pub fn compare(&self, o1: &OutcomeStat, o2: &OutcomeStat) -> Result<Comparison, PreferenceError> {
        match self {
            Preference::Overtaking => match (o1, o2) {
                (OutcomeStat::Lasso(l1), OutcomeStat::Lasso(l2)) => Ok(overtaking_compare(l1, l2)),
                _ => Err(PreferenceError::TagMismatch(self.to_string())),
            },
            _ => Ok(self.as_value(o1)?.cmp(&self.as_value(o2)?).into()),
        }
    }
}

/// `Σ βⁱ wᵢ` over the whole word.
pub fn discounted_lasso(l: &Lasso, beta: &Rational) -> Rational {
    let mut total = Rational::zero();
    let mut weight = Rational::one();
    for x in l.prefix() {
        total += &weight * x;
        weight *= beta;
    }
    let mut cyc = Rational::zero();
    let mut w = Rational::one();
    for x in l.cycle() {
        cyc += &w * x;
        w *= beta;
    }
    let period = Rational::one() - beta.pow(l.cycle().len() as i32);
    total + weight * cyc / period
}

/// Eventual dominance of partial sums.
///
/// Different cycle averages settle the question. With equal averages the
/// difference of partial sums is periodic once both prefixes are consumed, so
/// one period after the longer prefix decides it.
pub fn overtaking_compare(l1: &Lasso, l2: &Lasso) -> Comparison {
    let (a1, a2) = (l1.cycle_average(), l2.cycle_average());
    if a1 != a2 {
        return a1.cmp(&a2).into();
    }
    let start = l1.prefix().len().max(l2.prefix().len());
    let period = l1.cycle().len().lcm(&l2.cycle().len());
    let mut diff = Rational::zero();
    for i in 0..start {
        diff += l2.letter(i) - l1.letter(i);
    }
    let (mut le, mut ge) = (true, true);
    for i in start..start + period {
        // partial sums over the first k letters, for k in start..start+period
        le &= diff >= Rational::zero();
        ge &= diff <= Rational::zero();
        diff += l2.letter(i) - l1.letter(i);
    }
    match (le, ge) {
        (true, true) => Comparison::Equal,
        (true, false) => Comparison::Less,
        (false, true) => Comparison::Greater,
        (false, false) => Comparison::Incomparable,
    }
}

impl fmt::Display for Preference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Preference::MeanPayoff => f.write_str("mean"),
            Preference::Parity => f.write_str("parity"),
            Preference::SimpleParity => f.write_str("simple-parity"),
            Preference::Discounted(b) => write!(f, "discounted:{}", format_rational(b)),
            Preference::Overtaking => f.write_str("overtaking"),
        }
    }
}

impl FromStr for Preference {
    type Err = PreferenceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "mean" => Ok(Preference::MeanPayoff),
            "parity" => Ok(Preference::Parity),
            "simple-parity" => Ok(Preference::SimpleParity),
            "overtaking" => Ok(Preference::Overtaking),
            other => {
                let beta = other
                    .strip_prefix("discounted:")
                    .ok_or_else(|| PreferenceError::UnknownPayoff(other.to_string()))?;
                let beta = parse_rational(beta).map_err(|_| PreferenceError::BadDiscount(beta.to_string()))?;
                Preference::discounted(beta)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn v(q: Rational) -> OutcomeStat {
        OutcomeStat::Value(q)
    }

    fn lasso(p: &[i64], c: &[i64]) -> Lasso {
        Lasso::from_ints(p, c).unwrap()
    }

    #[test]
    fn payoff_comparisons() {
        let p = Preference::MeanPayoff;
        assert_eq!(p.compare(&v(ratio(1, 2)), &v(ratio(1, 3))).unwrap(), Comparison::Greater);
        assert_eq!(p.compare(&v(ratio(1, 2)), &v(ratio(1, 2))).unwrap(), Comparison::Equal);
        let l = OutcomeStat::Lasso(lasso(&[], &[0, 1, 1, 0]));
        assert_eq!(p.compare(&l, &v(ratio(1, 2))).unwrap(), Comparison::Equal);
        assert!(matches!(
            Preference::Overtaking.compare(&v(int(0)), &v(int(0))),
            Err(PreferenceError::TagMismatch(_))
        ));
    }

    #[test]
    fn overtaking_examples() {
        let a = lasso(&[], &[0, 1, 1, 0]);
        let b = lasso(&[], &[1, 0, 0, 1]);
        assert_eq!(overtaking_compare(&a, &b), Comparison::Incomparable);
        assert_eq!(overtaking_compare(&lasso(&[], &[1]), &lasso(&[], &[0])), Comparison::Greater);
        assert_eq!(overtaking_compare(&a, &a), Comparison::Equal);
        // same average, one is ahead from some point on
        assert_eq!(overtaking_compare(&lasso(&[0], &[1]), &lasso(&[1], &[1])), Comparison::Less);
        let p = Preference::Overtaking;
        assert_eq!(p.compare(&OutcomeStat::Lasso(a), &OutcomeStat::Lasso(b)).unwrap(), Comparison::Incomparable);
    }

    #[test]
    fn lasso_values() {
        let beta = ratio(1, 2);
        assert_eq!(discounted_lasso(&lasso(&[], &[1]), &beta), int(2));
        assert_eq!(discounted_lasso(&lasso(&[], &[1, 0]), &beta), ratio(4, 3));
        assert_eq!(discounted_lasso(&lasso(&[3], &[0]), &beta), int(3));
        assert_eq!(Preference::Parity.lasso_value(&lasso(&[3], &[1, 2])).unwrap(), int(1));
        assert_eq!(Preference::SimpleParity.lasso_value(&lasso(&[3], &[1, 2])).unwrap(), int(0));
    }

    #[test]
    fn parsing() {
        assert_eq!("mean".parse::<Preference>().unwrap(), Preference::MeanPayoff);
        assert_eq!("discounted:1/2".parse::<Preference>().unwrap(), Preference::Discounted(ratio(1, 2)));
        assert!(matches!("discounted:1".parse::<Preference>(), Err(PreferenceError::BadDiscount(_))));
        assert!(matches!("discounted:0.5".parse::<Preference>(), Err(PreferenceError::BadDiscount(_))));
        assert!(matches!("banana".parse::<Preference>(), Err(PreferenceError::UnknownPayoff(_))));
        for p in ["mean", "parity", "simple-parity", "discounted:3/4", "overtaking"] {
            assert_eq!(p.parse::<Preference>().unwrap().to_string(), p);
        }
    }
}
