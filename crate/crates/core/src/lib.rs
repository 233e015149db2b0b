//! Reasoning toolkit for first-order standpoint logic and variable reference
//! logic.

pub mod syntax;
pub mod fosl;
pub mod v1;
pub mod translation;
pub mod finder;
pub mod generate;
