// `!(x > 0.0)` is the NaN-rejecting form used throughout; grid loops index several arrays at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod boxes;
pub mod cli;
pub mod dft_bounds;
pub mod error;
pub mod fft;
pub mod interval;
pub mod io;
pub mod map;
pub mod matrix;
pub mod series;
pub mod solver;
pub mod validator;

pub use error::{Error, Result};
