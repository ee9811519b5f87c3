//! Command-line front end and local service for the `baba` crate.

pub mod clients;
pub mod error;
pub mod files;
pub mod fixtures;
pub mod ops;
pub mod service;
