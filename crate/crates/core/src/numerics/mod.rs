//! Scalar mathematics: round counts, iterated logarithms, parameter choices.

pub mod amplification;
pub mod chain;
pub mod count;
pub mod facts;
pub mod interval;
pub mod iterlog;
pub mod params;
pub mod real;
pub mod surd;

pub use amplification::{amplification_schedule, compute_w, compute_w_cached, AmplificationSchedule};
pub use chain::{ChainStep, SuccessChain};
pub use count::BigCount;
pub use facts::{check_fact_ceiling, check_fact_iterlog};
pub use interval::Interval;
pub use iterlog::{ceil_log2, iterated_log, log_star, Magnitude};
pub use params::{pick_k_eps, pick_k_fixed_r, KChoice};
pub use real::{Enclose, EvalCache, Real};
