//! Turing machine engine and tools around the Erdős ternary machines: the
//! `mul2` transducer, a powers-of-two scanner, a bounded simulation checker,
//! checkpoint verification and a small busy beaver enumerator.

pub mod cli;
pub mod fst;
pub mod machines;
pub mod search;
pub mod sim;
pub mod ternary;
pub mod tm;

pub use machines::{builtin, parse_compact, parse_machine, serialize_machine};
pub use tm::{
    Configuration, DeciderTag, Direction, MachineTable, RunOutcome, StateId, Symbol, Tape,
    Transition,
};
