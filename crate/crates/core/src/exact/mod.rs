//! Exact arithmetic: rationals and vanishing sums of roots of unity.

mod rational;
mod roots;

pub use rational::{rational_pow, Rational};
pub use roots::{root_sum_is_zero, RootOfUnitySum};
