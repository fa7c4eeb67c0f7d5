//! Transport, session driver and experiment runner behind the `qcoin` binary.

pub mod experiments;
pub mod net;
pub mod session;
pub mod transport;

pub use experiments::{run_experiment, Experiment, ExperimentReport, ExperimentSpec};
pub use session::{run_in_process, run_session, session_rng, SessionReport};
pub use transport::{Endpoint, InProcess, Tcp, TransportError};

/// Process exit codes.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const ASSERTION: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const TRANSPORT: i32 = 3;
}
