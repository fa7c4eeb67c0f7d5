//! Graph-isomorphism proofs: the three-move protocol, a random-oracle NIZK,
//! and the interactive protocol that takes its CRS from coin flips.

pub mod graph;
pub mod iqzk;
pub mod nizk;
pub mod oracle;
pub mod quantum;
pub mod sigma;

pub use graph::{GiInstance, GiWitness, Graph, GraphError, Permutation};
pub use iqzk::{iqzk_fcoin_run, iqzk_run, iqzk_simulate, IqzkMessage, IqzkRun, PerSession, Prover, Verdict, Verifier};
pub use nizk::{nizk_prove, nizk_simulate, nizk_verify, NizkProof};
pub use oracle::OracleTable;
pub use sigma::{gi_prove_round, gi_simulate_round, gi_verify_round, SigmaConversation};
