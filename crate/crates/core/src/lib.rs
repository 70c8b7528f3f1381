//! Portfolios of solutions that simultaneously approximate every ordered norm
//! of a cost vector.
//!
//! Given a finite or implicit domain of nonnegative cost vectors, a portfolio
//! is a small subset such that for every monotone symmetric norm some member
//! is within a factor `α` of the best vector in the domain. The crate provides
//! constructions for finite domains, scheduling on identical jobs
//! ([`mlij`]), covering polyhedra ([`covering`]), ordered satisfaction
//! problems ([`satisfaction`]) and clustering ([`clustering`]), together with
//! certificates that check a portfolio against all top-k norms.

pub mod clustering;
pub mod covering;
pub mod error;
pub mod mlij;
pub mod norms;
pub mod portfolio;
pub mod satisfaction;
pub mod solvercore;
pub mod weights;

pub use error::{Error, Result};
pub use norms::{CostVector, WeightVector};
pub use portfolio::{Alpha, FiniteDomain, NormFamily, Portfolio};

