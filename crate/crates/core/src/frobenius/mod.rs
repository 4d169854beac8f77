//! Frobenius splitting data for regular rings and hypersurfaces over `𝔽_p`.

mod checks;
mod ring;
mod splitting;

pub use checks::{
    ctrick_gap_sequence, first_vanishing, hk_length_sequence, perturbed_limit_check, rounding_gap_check,
    rounding_gap_for, sfr_witness, PerturbationReport, RoundingReport, SfrWitness,
};
pub use ring::{Convention, PairDivisorSpec, RingKind, RingPresentation};
pub use splitting::{
    colon_multiplier, estimate, extrapolate, fsig_sequence, normalize, splitting_ideal, splitting_ideal_with_budget,
    splitting_number, Estimate, SplittingRecord, SplittingSequence,
};
