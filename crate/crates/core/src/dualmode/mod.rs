//! LWE commitments with binding and hiding keys, and the extended commitment
//! that can be extracted under a binding key and equivocated under a hiding one.

pub mod ext;
pub mod lwe;

pub use ext::{ext_commit, ext_equivocate, ext_extract, ext_verify, ExtCommitment, ExtCrs, ExtError, ExtOpening};
pub use lwe::{KeyMode, LweCiphertext, LweError, LweParams, RegevKey};
