//! Numerical primitives shared by the analytic engine.

pub mod composition;
pub mod gamma;
pub mod quadrature;
pub mod signed;

pub use composition::{phi_term, weak_compositions, WeakComposition, TERM_CAP};
pub use gamma::{log_factorial, log_gamma, reg_lower_incomplete_gamma, reg_upper_incomplete_gamma};
pub use quadrature::{adaptive_integrate, chebyshev_nodes, ChebyshevRule};
pub use signed::{signed_log_sum, SignedLogValue};
