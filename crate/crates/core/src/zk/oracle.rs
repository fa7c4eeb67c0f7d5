//! A programmable random oracle shared by provers, verifiers and simulators.
//!
//! Unprogrammed entries answer with SHA-256 of the salt and the key, so two
//! tables with the same salt agree even across processes. The first answer
//! given for a key, whether programmed or default, is stored and never changes.

use std::collections::HashMap;
use std::sync::Mutex;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle entry already fixed")]
    AlreadyFixed,
}

#[derive(Debug, Default)]
pub struct OracleTable {
    salt: Vec<u8>,
    entries: Mutex<HashMap<Vec<u8>, BitString>>,
}

impl OracleTable {
    pub fn new(salt: &[u8]) -> Self {
        Self { salt: salt.to_vec(), entries: Mutex::new(HashMap::new()) }
    }

    fn default_answer(&self, key: &[u8], len: usize) -> BitString {
        let mut bits = Vec::with_capacity(len);
        let mut block = 0u32;
        while bits.len() < len {
            let mut h = Sha256::new();
            h.update((self.salt.len() as u32).to_be_bytes());
            h.update(&self.salt);
            h.update(block.to_be_bytes());
            h.update(key);
            for byte in h.finalize() {
                for i in (0..8).rev() {
                    bits.push(byte >> i & 1 == 1);
                }
            }
            block += 1;
        }
        bits.truncate(len);
        BitString::new(bits)
    }

    /// The `len`-bit answer for `key`; fixes the entry on first use.
    pub fn query(&self, key: &[u8], len: usize) -> BitString {
        let mut entries = self.entries.lock().expect("oracle lock poisoned");
        let answer = entries.entry(key.to_vec()).or_insert_with(|| self.default_answer(key, len));
        assert_eq!(answer.len(), len, "one key, one answer length");
        answer.clone()
    }

    /// Presets the answer for a key nobody has asked about yet.
    pub fn program(&self, key: &[u8], answer: BitString) -> Result<(), OracleError> {
        let mut entries = self.entries.lock().expect("oracle lock poisoned");
        if entries.contains_key(key) {
            return Err(OracleError::AlreadyFixed);
        }
        entries.insert(key.to_vec(), answer);
        Ok(())
    }

    pub fn is_fixed(&self, key: &[u8]) -> bool {
        self.entries.lock().expect("oracle lock poisoned").contains_key(key)
    }

    pub fn len(&self) -> usize {
        self.entries.lock().expect("oracle lock poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
