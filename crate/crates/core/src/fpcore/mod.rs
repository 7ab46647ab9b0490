//! Finitely presented groups, permutation groups and linear algebra over prime fields.

pub mod abelian;
pub mod perm;
pub mod rewrite;
pub mod sparse;
pub mod word;

pub use abelian::{abelian_invariants_of, abelianization, mod_p_rank_h1, smith_invariants, AbelianInvariants};
pub use perm::{order_at_least, orbit_and_transversal, schreier_sims_order, Orbit, Permutation, StabChain, TreeEdge};
pub use rewrite::{abelianized_rewriting_matrix, betti_proxy_cover};
pub use sparse::{rank_mod_p_dense, sparse_rank_mod_p, SparseMatModP, DENSE_CUTOFF};
pub use word::{free_reduce, Presentation, Word};
