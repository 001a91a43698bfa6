//! The max-plus semiring `(R ∪ {-∞}, max, +)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul};

use crate::scalar::Scalar;

/// An element of the tropical semiring.
///
/// `-∞` is a separate variant rather than a large negative float, so `⊙`
/// absorbs it exactly. `+` is tropical addition (max) and `*` is tropical
/// multiplication (ordinary addition).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Trop<T> {
    #[default]
    NegInf,
    Fin(T),
}

impl<T: Scalar> Trop<T> {
    /// Additive identity, `-∞`.
    pub fn zero() -> Self {
        Trop::NegInf
    }

    /// Multiplicative identity, `0`.
    pub fn one() -> Self {
        Trop::Fin(T::zero())
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Trop::Fin(_))
    }

    pub fn finite(self) -> Option<T> {
        match self {
            Trop::Fin(x) => Some(x),
            Trop::NegInf => None,
        }
    }

    /// `a ⊕ b = max(a, b)`.
    pub fn oplus(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Trop::NegInf, x) | (x, Trop::NegInf) => x,
            (Trop::Fin(a), Trop::Fin(b)) => Trop::Fin(a.max(b)),
        }
    }

    /// `a ⊙ b = a + b`, with `-∞` absorbing.
    pub fn otimes(self, rhs: Self) -> Self {
        match (self, rhs) {
            (Trop::Fin(a), Trop::Fin(b)) => Trop::Fin(a + b),
            _ => Trop::NegInf,
        }
    }

    /// Ordinary difference `self - rhs` when both are finite.
    pub fn sub_finite(self, rhs: Self) -> Option<T> {
        Some(self.finite()? - rhs.finite()?)
    }
}

impl<T: Scalar> From<T> for Trop<T> {
    fn from(x: T) -> Self {
        Trop::Fin(x)
    }
}

impl<T: Scalar> Add for Trop<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.oplus(rhs)
    }
}

impl<T: Scalar> Mul for Trop<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.otimes(rhs)
    }
}

impl<T: Scalar> PartialOrd for Trop<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (Trop::NegInf, Trop::NegInf) => Some(Ordering::Equal),
            (Trop::NegInf, Trop::Fin(_)) => Some(Ordering::Less),
            (Trop::Fin(_), Trop::NegInf) => Some(Ordering::Greater),
            (Trop::Fin(a), Trop::Fin(b)) => a.partial_cmp(b),
        }
    }
}

impl<T: fmt::Display> fmt::Display for Trop<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Trop::NegInf => f.write_str("-inf"),
            Trop::Fin(x) => x.fmt(f),
        }
    }
}

/// Largest and second largest of a sequence of tropical values, with the
/// index of the largest. Returns `None` for an empty sequence.
pub(crate) fn top_two<T: Scalar>(values: impl IntoIterator<Item = Trop<T>>) -> Option<(Trop<T>, usize, Trop<T>)> {
    let mut best: Option<(Trop<T>, usize)> = None;
    let mut second = Trop::NegInf;
    for (i, v) in values.into_iter().enumerate() {
        match best {
            None => best = Some((v, i)),
            Some((b, _)) if v > b => {
                second = b;
                best = Some((v, i));
            }
            Some(_) => {
                if v > second {
                    second = v;
                }
            }
        }
    }
    best.map(|(b, i)| (b, i, second))
}
