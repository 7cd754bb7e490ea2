//! Ultimately periodic words `prefix · cycle^ω` over rational letters.

use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::{format_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("a lasso needs a nonempty cycle")]
pub struct EmptyCycle;

/// An ultimately periodic word, kept in canonical form: the cycle is primitive
/// and the prefix is as short as possible, so equal words have equal lassos.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso {
    prefix: Vec<Rational>,
    cycle: Vec<Rational>,
}

impl Lasso {
    pub fn new(prefix: Vec<Rational>, cycle: Vec<Rational>) -> Result<Self, EmptyCycle> {
        if cycle.is_empty() {
            return Err(EmptyCycle);
        }
        let mut l = Lasso { prefix, cycle };
        l.normalize();
        Ok(l)
    }

    /// Integer-letter convenience constructor.
    pub fn from_ints(prefix: &[i64], cycle: &[i64]) -> Result<Self, EmptyCycle> {
        let conv = |v: &[i64]| v.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Lasso::new(conv(prefix), conv(cycle))
    }

    fn normalize(&mut self) {
        let n = self.cycle.len();
        if let Some(p) = (1..=n).find(|&p| n % p == 0 && (p..n).all(|i| self.cycle[i] == self.cycle[i - p])) {
            self.cycle.truncate(p);
        }
        while let Some(last) = self.prefix.last() {
            if last != self.cycle.last().expect("cycle is nonempty") {
                break;
            }
            self.prefix.pop();
            self.cycle.rotate_right(1);
        }
    }

    pub fn prefix(&self) -> &[Rational] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Rational] {
        &self.cycle
    }

    /// The `i`-th letter (0-based).
    pub fn letter(&self, i: usize) -> &Rational {
        if i < self.prefix.len() {
            &self.prefix[i]
        } else {
            &self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// The first `n` letters.
    pub fn take(&self, n: usize) -> Vec<Rational> {
        (0..n).map(|i| self.letter(i).clone()).collect()
    }

    /// The suffix obtained by removing the first `k` letters.
    pub fn drop_prefix(&self, k: usize) -> Lasso {
        if k <= self.prefix.len() {
            return Lasso::new(self.prefix[k..].to_vec(), self.cycle.clone()).expect("cycle is nonempty");
        }
        let mut cycle = self.cycle.clone();
        cycle.rotate_left((k - self.prefix.len()) % self.cycle.len());
        Lasso::new(Vec::new(), cycle).expect("cycle is nonempty")
    }

    /// Prepends letters.
    pub fn with_prefix(&self, extra: &[Rational]) -> Lasso {
        let mut prefix = extra.to_vec();
        prefix.extend(self.prefix.iter().cloned());
        Lasso::new(prefix, self.cycle.clone()).expect("cycle is nonempty")
    }

    pub fn cycle_average(&self) -> Rational {
        let total: Rational = self.cycle.iter().fold(Rational::zero(), |acc, x| acc + x);
        total / Rational::from_integer((self.cycle.len() as i64).into())
    }

    pub fn cycle_max(&self) -> &Rational {
        self.cycle.iter().max().expect("cycle is nonempty")
    }

    /// Largest letter of the whole word.
    pub fn max_letter(&self) -> &Rational {
        self.prefix.iter().chain(&self.cycle).max().expect("cycle is nonempty")
    }
}

impl fmt::Display for Lasso {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>().join(",");
        write!(f, "[{}]({})^ω", join(&self.prefix), join(&self.cycle))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn canonical_form() {
        let l = Lasso::from_ints(&[1, 0], &[1, 0, 1, 0]).unwrap();
        assert_eq!(l, Lasso::from_ints(&[], &[1, 0]).unwrap());
        let l = Lasso::from_ints(&[3, 2], &[5, 2]).unwrap();
        assert_eq!(l.prefix(), &[int(3)]);
        assert_eq!(l.cycle(), &[int(2), int(5)]);
        assert!(Lasso::from_ints(&[1], &[]).is_err());
    }

    #[test]
    fn letters_and_drops() {
        let l = Lasso::from_ints(&[7], &[0, 1, 1, 0]).unwrap();
        assert_eq!(l.take(6), [7, 0, 1, 1, 0, 0].map(int));
        for k in 0..9 {
            let d = l.drop_prefix(k);
            assert_eq!(d.take(10), (k..k + 10).map(|i| l.letter(i).clone()).collect::<Vec<_>>());
        }
        assert_eq!(l.cycle_average(), crate::rational::ratio(1, 2));
        assert_eq!(l.max_letter(), &int(7));
        assert_eq!(l.cycle_max(), &int(1));
        assert_eq!(l.to_string(), "[7/1](0/1,1/1,1/1,0/1)^ω");
    }
}
