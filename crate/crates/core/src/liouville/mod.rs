pub mod cf;
pub mod distance;
pub mod exponent;
pub mod lacunary;
pub mod witness;
