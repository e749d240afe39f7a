//! Levelized cost of fuel, lifecycle carbon intensity and policy-credit
//! accounting for hydrogen and synthetic liquid fuel supply chains.

// `!(x >= 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod emissions;
pub mod finance;
pub mod lcof;
pub mod policy;
pub mod quantities;
pub mod techdata;
