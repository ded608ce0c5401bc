//! Periodic words and the forbidden-word systems that define them.
//!
//! A bi-infinite periodic word is stored as a [`words::Necklace`]. Its
//! reduced system of restrictions ([`forbidden::reduced_system`]) is the
//! smallest set of absent words that no other bi-infinite word avoids.
//! [`rauzy`] follows the Rauzy graphs of the word stage by stage,
//! [`scheme`] replays the same evolution on weighted fork schemes, and
//! [`bounds`] and [`search`] check the Fibonacci bound on the number of
//! restrictions.

pub mod bounds;
pub mod error;
pub mod forbidden;
pub mod rauzy;
pub mod scheme;
pub mod search;
pub mod words;

pub use error::{Error, Result};
