//! Independent brute-force oracles for the essaystat test suites.
//!
//! Everything in this crate is deliberately written the slow, obvious way so
//! that it shares no code with the implementations it checks. Oracles here
//! are only ever compiled into test targets.

pub mod diversity;
pub mod ks;
pub mod mixture;
pub mod readability;

pub use diversity::{hdd_exact, hdd_monte_carlo, maas_brute, mtld_brute, ttr_brute, yules_k_brute};
pub use ks::ks_uniform_p;
pub use mixture::grid_argmax;
pub use readability::{complexity_brute, syllables_brute};
