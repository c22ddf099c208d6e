//! Schema-driven saturation, instance validation and the pitfall scanner.

mod pitfalls;
mod saturate;
mod validate;

pub use pitfalls::{scan_pitfalls, Pitfall, PitfallCode};
pub use saturate::{saturate, saturate_with_stats, Rule, RuleSet, SaturationStats};
pub use validate::{validate_instances, Violation, ViolationKind};
