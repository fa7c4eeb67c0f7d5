//! Wire messages and their framing.
//!
//! Frame layout: one tag byte (`0` Nonce, `1` Commit, `2` Challenge, `3` Open,
//! `4` Abort), a 32-bit big-endian payload length counted in bits, then the
//! payload bytes packed MSB first. An `Open` payload is the opened bit
//! followed by the randomness.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::bits::{BitString, BitsError};
use crate::commitment::{Commitment, Opening, ReceiverNonce};

/// Upper bound on accepted payload sizes, in bits.
pub const MAX_PAYLOAD_BITS: u32 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProtocolMessage {
    Nonce(ReceiverNonce),
    Commit(Commitment),
    Challenge(bool),
    Open(Opening),
    Abort,
}

#[derive(Debug, Error)]
pub enum FrameError {
    #[error("unknown message tag {0}")]
    UnknownTag(u8),
    #[error("payload of {bits} bits is invalid for tag {tag}")]
    BadLength { tag: u8, bits: u32 },
    #[error("payload of {0} bits exceeds the frame limit")]
    TooLarge(u32),
    #[error(transparent)]
    Bits(#[from] BitsError),
    #[error("transport: {0}")]
    Io(#[from] io::Error),
}

impl ProtocolMessage {
    pub fn tag(&self) -> u8 {
        match self {
            Self::Nonce(_) => 0,
            Self::Commit(_) => 1,
            Self::Challenge(_) => 2,
            Self::Open(_) => 3,
            Self::Abort => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Nonce(_) => "nonce",
            Self::Commit(_) => "commit",
            Self::Challenge(_) => "challenge",
            Self::Open(_) => "open",
            Self::Abort => "abort",
        }
    }

    fn payload(&self) -> BitString {
        match self {
            Self::Nonce(n) => n.sigma().clone(),
            Self::Commit(c) => c.value().clone(),
            Self::Challenge(b) => BitString::new(vec![*b]),
            Self::Open(o) => BitString::new(vec![o.bit]).concat(&o.randomness),
            Self::Abort => BitString::default(),
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let payload = self.payload();
        let mut out = Vec::with_capacity(5 + payload.len().div_ceil(8));
        out.push(self.tag());
        out.extend_from_slice(&payload.encode());
        out
    }

    fn from_parts(tag: u8, payload: BitString) -> Result<Self, FrameError> {
        let bits = payload.len() as u32;
        let bad = || FrameError::BadLength { tag, bits };
        Ok(match tag {
            0 => Self::Nonce(ReceiverNonce::from_wire(payload)),
            1 => Self::Commit(Commitment(payload)),
            2 if bits == 1 => Self::Challenge(payload.get(0)),
            3 if bits >= 1 => Self::Open(Opening {
                bit: payload.get(0),
                randomness: payload.slice(1, payload.len()),
            }),
            4 if bits == 0 => Self::Abort,
            2..=4 => return Err(bad()),
            other => return Err(FrameError::UnknownTag(other)),
        })
    }

    /// Decodes one frame from the front of `bytes`, returning the bytes consumed.
    pub fn decode(bytes: &[u8]) -> Result<(Self, usize), FrameError> {
        let (&tag, rest) = bytes.split_first().ok_or(BitsError::Truncated { needed: 1, available: 0 })?;
        if tag > 4 {
            return Err(FrameError::UnknownTag(tag));
        }
        if rest.len() >= 4 {
            let bits = u32::from_be_bytes([rest[0], rest[1], rest[2], rest[3]]);
            if bits > MAX_PAYLOAD_BITS {
                return Err(FrameError::TooLarge(bits));
            }
        }
        let (payload, used) = BitString::decode(rest)?;
        Ok((Self::from_parts(tag, payload)?, 1 + used))
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<(), FrameError> {
        w.write_all(&self.encode())?;
        w.flush()?;
        Ok(())
    }

    /// Reads exactly one frame from a byte stream.
    pub fn read_from<R: Read>(r: &mut R) -> Result<Self, FrameError> {
        let mut tag = [0u8; 1];
        r.read_exact(&mut tag)?;
        if tag[0] > 4 {
            return Err(FrameError::UnknownTag(tag[0]));
        }
        let mut len = [0u8; 4];
        r.read_exact(&mut len)?;
        let bits = u32::from_be_bytes(len);
        if bits > MAX_PAYLOAD_BITS {
            return Err(FrameError::TooLarge(bits));
        }
        let mut body = vec![0u8; (bits as usize).div_ceil(8)];
        r.read_exact(&mut body)?;
        let payload = BitString::from_bytes(&body, bits as usize)?;
        Self::from_parts(tag[0], payload)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn challenge_frame_layout() {
        assert_eq!(ProtocolMessage::Challenge(true).encode(), vec![2, 0, 0, 0, 1, 0x80]);
        assert_eq!(ProtocolMessage::Abort.encode(), vec![4, 0, 0, 0, 0]);
    }

    #[test]
    fn open_frame_puts_bit_first() {
        let o = Opening { bit: true, randomness: BitString::parse("0110").unwrap() };
        assert_eq!(ProtocolMessage::Open(o).encode(), vec![3, 0, 0, 0, 5, 0b1011_0000]);
    }

    #[test]
    fn unknown_tag_is_rejected() {
        assert!(matches!(ProtocolMessage::decode(&[7, 0, 0, 0, 0]), Err(FrameError::UnknownTag(7))));
        let mut cursor = io::Cursor::new(vec![7u8, 0, 0, 0, 0]);
        assert!(matches!(ProtocolMessage::read_from(&mut cursor), Err(FrameError::UnknownTag(7))));
    }

    #[test]
    fn wrong_payload_sizes_are_rejected() {
        assert!(matches!(ProtocolMessage::decode(&[2, 0, 0, 0, 2, 0xc0]), Err(FrameError::BadLength { .. })));
        assert!(matches!(ProtocolMessage::decode(&[4, 0, 0, 0, 1, 0x80]), Err(FrameError::BadLength { .. })));
        assert!(matches!(ProtocolMessage::decode(&[3, 0, 0, 0, 0]), Err(FrameError::BadLength { .. })));
        assert!(matches!(ProtocolMessage::decode(&[1, 0xff, 0, 0, 0]), Err(FrameError::TooLarge(_))));
    }

    #[test]
    fn truncated_stream_is_io_error() {
        let mut cursor = io::Cursor::new(vec![1u8, 0, 0, 0, 16, 0xaa]);
        assert!(matches!(ProtocolMessage::read_from(&mut cursor), Err(FrameError::Io(_))));
    }

    fn arb_message() -> impl Strategy<Value = ProtocolMessage> {
        let bits = proptest::collection::vec(any::<bool>(), 0..64).prop_map(BitString::new);
        prop_oneof![
            bits.clone().prop_map(|b| ProtocolMessage::Nonce(ReceiverNonce::from_wire(b))),
            bits.clone().prop_map(|b| ProtocolMessage::Commit(Commitment(b))),
            any::<bool>().prop_map(ProtocolMessage::Challenge),
            (any::<bool>(), bits).prop_map(|(bit, randomness)| ProtocolMessage::Open(Opening { bit, randomness })),
            Just(ProtocolMessage::Abort),
        ]
    }

    proptest! {
        #[test]
        fn frames_roundtrip_through_stream(msgs in proptest::collection::vec(arb_message(), 1..6)) {
            let mut buf = Vec::new();
            for m in &msgs {
                m.write_to(&mut buf).unwrap();
            }
            let mut cursor = io::Cursor::new(buf.clone());
            let mut offset = 0;
            for m in &msgs {
                prop_assert_eq!(&ProtocolMessage::read_from(&mut cursor).unwrap(), m);
                let (d, used) = ProtocolMessage::decode(&buf[offset..]).unwrap();
                prop_assert_eq!(&d, m);
                offset += used;
            }
        }
    }
}
