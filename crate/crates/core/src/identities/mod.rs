mod catalog;
mod poly;

pub use catalog::{
    default_sample_points, find_case, list_identity_cases, residual, verify_identity, verify_identity_at, Domain,
    Expected, IdentityCase, IdentityVerdict, Verdict, VerdictJson, MAX_ALPHA,
};
pub use poly::{dependence_residual, BivariatePolynomial, GaussianInt};
