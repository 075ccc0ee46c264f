//! Decision procedures over action models. Each check returns either a
//! witness or a concrete counterexample naming states by label.

pub mod determination;
pub mod effectiveness;
pub mod invariance;
pub mod laws;
pub mod mechanisms;

pub use determination::{check_determination, determine, DeterminationResult, StatePair};
pub use effectiveness::{check_effectiveness, EffectivenessResult};
pub use invariance::{check_invariance, InvarianceResult, InvarianceViolation};
pub use laws::{check_commute, check_overwrite, LawResult, LawViolation};
pub use mechanisms::{
    check_surgical, check_surgical_with, discover_mechanisms, discover_mechanisms_with,
    mechanism_record, DiscoverOptions, MechanismRecord, MechanismViolation, NewMechanism,
    SurgicalOptions, SurgicalVerdict,
};
