//! Nilpotent quotients of finitely presented groups with laws.
//!
//! The pipeline runs parse ([`words`]) → nilpotent quotient ([`nq`]) over
//! consistent power-commutator presentations ([`pcp`]), with integer
//! lattice reduction ([`intlin`]) for the tails. Finite quotients can be
//! handed to the table-based [`oracle`] and checked by [`verify`].

pub mod intlin;
pub mod par;
pub mod pcp;
pub mod words;
pub mod nq;
pub mod oracle;
pub mod verify;
