//! Busy beaver enumeration, non-halting deciders and the checkpoint schedule
//! of the 5-state Erdős machine.

pub mod checkpoints;
pub mod deciders;
pub mod enumerate;
mod far;

pub use checkpoints::{
    checkpoint_schedule, checkpoint_steps, counter_offset, verify_checkpoints, CheckpointError,
    CheckpointReport,
};
pub use deciders::{
    classify, decide_backward, decide_cycler, decide_automata_reduction, decide_escape, decide_ngram_cps, decide_translated_cycler, decide_unreachable_halt,
    validate_certificate, Certificate, Classification, Verdict,
};
pub use enumerate::{
    enumerate, enumerate_and_classify, EnumerationOptions, EnumerationSummary, SearchError,
    SpaceMode,
};
