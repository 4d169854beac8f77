//! Finite covers of toric rings: quotient, root and cyclic covers, their
//! trace maps and ramification divisors, and checks of how F-signature
//! transforms along them.

mod chain;
mod descriptor;
mod verify;

pub use chain::{chain_simulation, etale_in_codim_one_covers, maximal_divisor_chains, Chain, ChainReport, ChainStep, CoverSearch};
pub use descriptor::{
    canonical_difference, compose, cyclic_cover, divisor_class_order, pullback, pullback_pair, quotient_cover,
    ramification_divisor, root_cover, tower_additivity, wild_root_cover_for_validation, CoverDescriptor, CoverKind,
    CoverSummary, TraceMap,
};
pub use verify::{
    count_trace_summands, doubling_check, verify_note_trace, verify_transformation, Backend, DoublingReport,
    NoteTraceReport, TraceEvidence, VerificationReport,
};
