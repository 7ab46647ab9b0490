//! Arithmetic of the quaternion algebra over `Q(√-2)` ramified at the primes over 3.

pub mod bounds;
pub mod kfield;
pub mod kummer;
pub mod local;
pub mod quat;
pub mod volume;

pub use bounds::{injrad_lower_bound, InjradBound};
pub use kfield::KElem;
pub use kummer::{kummer_residues, KummerReport};
pub use local::{local_layer_orders, LayerReport, LocalQuat, Rm};
pub use quat::{
    base_presentation, e_s, e_t, eval_word, numeric_embedding_check, order_basis, unit_generators, verify_order_closure,
    verify_presentation_units, EmbeddingReport, OrderClosureReport, PresentationUnitsReport, QuatElem, BASE_RELATORS,
};
pub use volume::{volume_constant, zeta_k2_ideal_count, VolumeReport};
