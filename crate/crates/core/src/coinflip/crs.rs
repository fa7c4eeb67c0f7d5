//! Common reference strings from sequential coin flips.

use thiserror::Error;

use super::Outcome;
use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrsError {
    #[error("coin flip {index} failed")]
    Failed { index: usize },
}

/// Runs `len` flips in order; the first failure aborts the whole string.
pub fn generate_crs<F>(len: usize, mut flip: F) -> Result<BitString, CrsError>
where
    F: FnMut(usize) -> Outcome,
{
    (0..len)
        .map(|index| match flip(index) {
            Outcome::Coin(c) => Ok(c),
            Outcome::Fail => Err(CrsError::Failed { index }),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(BitString::new)
}
