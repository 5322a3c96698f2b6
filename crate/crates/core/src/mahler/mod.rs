mod eval;
mod naive;
mod poly;
mod quadratic;
mod record;
mod search;
mod store;
mod sweep;

pub use eval::{eval_ball_escalating, poly_eval_certified, PolyValue};
pub use naive::{naive_size, wn_naive, wn_naive_with};
pub use poly::IntegerPolynomial;
pub use quadratic::{cmp_abs, sign_of, QuadraticPoint};
pub use record::{RecordLine, WnRecord};
pub use search::{search_size, wn_search, wn_search_with, SearchConfig, DEFAULT_ENUMERATION_CAP};
pub use store::{RecordKey, Store};
pub use sweep::{
    algebraic_threshold, check_monotone_in_h, check_monotone_in_n, class_signature, classify, estimate_wn_exponent,
    geometric_grid, s_threshold, u_threshold, wn_sweep, wn_sweep_with, ClassReport, Signature, SlopeEstimate, Sweep,
    DISCLAIMER,
};
