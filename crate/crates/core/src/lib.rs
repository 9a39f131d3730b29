//! Analysis toolkit for single-receiver network computing.
//!
//! A receiver must compute a target function of messages generated at
//! several source nodes of a directed acyclic network. This crate provides
//! exact finite-ring arithmetic ([`algebra`]), explicit target-function tables
//! and their classification ([`functions`]), network topology with cut-set
//! capacity bounds ([`network`]), `(k, n)` network codes with exhaustive
//! verification ([`codes`]), exhaustive code search ([`search`]) and explicit
//! code constructions ([`construct`]).

pub mod algebra;
pub mod functions;
pub mod network;
pub mod codes;
pub mod search;
pub mod construct;
