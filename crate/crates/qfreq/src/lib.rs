//! qfreq is a simulation laboratory for quantum algorithms that approximate the
//! frequency moments F₀, F₂, F_k and F∞ of an integer stream, in two cost models:
//!
//! - the **query model**, where the input is reachable only through an oracle and
//!   the measurable is the number of oracle uses;
//! - the **multiple-pass streaming model**, where the input is replayed forward and
//!   the measurables are stream passes and modeled qubits of storage.
//!
//! Small instances run on an exact statevector tier; everything else runs through
//! cost-charged emulators that execute each subroutine's input/output contract
//! classically while billing its proven quantum cost. Every experiment writes its charges to
//! a [`qsim::ResourceLedger`], and exact brute-force oracles (integer/rational
//! arithmetic, full enumerations) back the test suites.
//!
//! The `qfreq` binary exposes experiment running, instance generation, theory
//! curve tables and the verification suites; see the README.

pub mod harness;
pub mod hashfam;
pub mod moments;
pub mod qsim;
pub mod query;
pub mod reduce;
pub mod rng;
pub mod stream;
pub mod streaming;
pub mod trials;

pub use stream::{FrequencyVector, MomentEstimate, MomentIndex, SampleTuple, Stream};
