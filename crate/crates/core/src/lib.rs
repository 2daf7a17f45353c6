//! Executable model of a TPM software stack resource store.
//!
//! The model has four working parts:
//!
//! - [`memory_model`] — a fixed-capacity node bank with a static allocator
//!   and snapshots; node addresses are bank indices, so separation and
//!   freshness are decidable.
//! - [`logic_lists`] — executable counterparts of the list specification
//!   predicates: the `to_ll` translator, the inductive `linked_ll` relation,
//!   stability (`unchanged_ll`) and location separation.
//! - [`resource_store`] — the handle-keyed search-or-create operation over
//!   a context's resource list, with return codes 616 / 1611 / 833.
//! - [`marshal`] — cast-free big-endian 32-bit marshaling.
//!
//! On top of those, [`lemma_suite`] exhaustively checks a registry of
//! linked-list lemmas over every heap configuration up to a small size
//! bound, and [`scenario`] / [`fuzz`] drive the store with contract checks
//! after every call. The `tss-rsrc-model` binary exposes all three.

pub mod fuzz;
pub mod lemma_suite;
pub mod logic_lists;
pub mod marshal;
pub mod memory_model;
pub mod resource_store;
pub mod scenario;

pub use logic_lists::{
    linked_ll, sep_from_list, to_ll, unchanged_ll, CycleError, Location, LogicList,
};
pub use memory_model::{
    Bank, Memory, MemorySnapshot, Node, NodeRef, Resource, DEFAULT_BANK_CAPACITY, NAME_CAPACITY,
};
pub use resource_store::{create_node, get_node, handle_to_tpm, Context, ReturnCode, Slot};
