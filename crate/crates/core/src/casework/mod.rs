//! The case analysis behind the closed form for `Δ(n)`.
//!
//! Every modulus in the window `[n, 3^⌈log₃ n⌉)` falls into one of eight
//! shapes ([`classify`]); each shape has a recipe producing a colliding pair
//! ([`construct_collision`]). The prime-power shapes with small cofactor rely
//! on counting arguments ([`counting`]) and a handful of explicit numeric
//! inequalities ([`inequalities`]). The only moduli without a collision are
//! `7 · 3^(6s+4)` for `n = 3^(6s+5) + 1, + 2` ([`exceptional`]).

mod classify;
mod construct;
pub mod counting;
pub mod exceptional;
pub mod inequalities;

pub use classify::{classify, classify_modulus, window, CaseTag};
pub use construct::{construct_collision, odd_shift_roots, Construction, Route};
pub use counting::{
    compute_all_tj, compute_tj, count_n, count_n_naive, count_n_star, decomposition, n_lower_bound,
    CountingRecord, LowerBound, PairCounter, TjReport,
};
pub use exceptional::{ell7_pattern, exceptional_no_collision};
pub use inequalities::{verify_inequality, InequalityId, InequalitySuite};
