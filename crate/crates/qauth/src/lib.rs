//! Desk-scale laboratory for quantum authentication protocols.
//!
//! The crate simulates a family of quantum authentication protocols on a
//! dense state-vector backend, instruments every communication between the
//! parties, and classifies each protocol's communication cost under the
//! Yao, Cleve-Buhrman, or hybrid counting model. Adversarial runs
//! (intercept-resend, substitution, impersonation) are estimated by
//! seeded Monte Carlo, optionally in parallel across trials.

pub mod adversary;
pub mod channel;
pub mod ledger;
pub mod protocols;
pub mod qsim;
pub mod register;
pub mod report;
pub mod rng;
