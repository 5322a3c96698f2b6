mod experiment;
mod rational_function;

pub use experiment::{apply_exact, apply_rational_function, image_exponent_experiment, ImageRow, ImageRowJson};
pub use rational_function::{RationalFunction, MAX_DEGREE};
