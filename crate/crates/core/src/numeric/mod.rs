pub mod ball;
pub mod complex;
pub mod decimal;
pub mod dyadic;
pub mod functions;
pub mod spec;
