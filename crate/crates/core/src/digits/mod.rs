//! Digit sets, their mask polynomials and exact zero sets.

mod mask;
mod set;
mod zeros;

pub(crate) use mask::unit_phasor;
pub use mask::{mask_eval, mask_eval_exact, mask_root_sum, mask_vanishes};
pub use set::{alternate_digit_set, Block, DigitSet};
pub use zeros::{mask_zero_set, measure_zero_set, Atom, Dilation, ZeroSetExpr, ZeroSetTerm};
