//! Ordered, framed message delivery between two parties.
//!
//! Both transports carry the `coinflip` frame encoding. A TCP connection
//! starts with the connecting side sending its session index as a 32-bit
//! big-endian integer.

use std::io::{self, Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::time::Duration;

use qcoin_core::coinflip::{FrameError, ProtocolMessage};
use thiserror::Error;

/// How long a TCP endpoint waits for the peer before treating it as gone.
pub const READ_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("framing: {0}")]
    Frame(#[from] FrameError),
    #[error("connection: {0}")]
    Io(#[from] io::Error),
    #[error("peer hung up")]
    Closed,
}

pub trait Endpoint {
    fn send(&mut self, msg: &ProtocolMessage) -> Result<(), TransportError>;
    fn recv(&mut self) -> Result<ProtocolMessage, TransportError>;
}

/// One side of an in-memory pipe carrying encoded frames.
pub struct InProcess {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
}

impl InProcess {
    pub fn pair() -> (Self, Self) {
        let (a_tx, b_rx) = channel();
        let (b_tx, a_rx) = channel();
        (Self { tx: a_tx, rx: a_rx }, Self { tx: b_tx, rx: b_rx })
    }

    /// Sends raw bytes, bypassing the encoder; for feeding malformed frames.
    pub fn send_raw(&mut self, bytes: Vec<u8>) -> Result<(), TransportError> {
        self.tx.send(bytes).map_err(|_| TransportError::Closed)
    }
}

impl Endpoint for InProcess {
    fn send(&mut self, msg: &ProtocolMessage) -> Result<(), TransportError> {
        self.send_raw(msg.encode())
    }

    fn recv(&mut self) -> Result<ProtocolMessage, TransportError> {
        let bytes = self.rx.recv().map_err(|_| TransportError::Closed)?;
        let (msg, used) = ProtocolMessage::decode(&bytes)?;
        if used != bytes.len() {
            return Err(TransportError::Frame(FrameError::BadLength { tag: bytes[0], bits: (8 * bytes.len()) as u32 }));
        }
        Ok(msg)
    }
}

pub struct Tcp {
    stream: TcpStream,
}

impl Tcp {
    fn wrap(stream: TcpStream) -> Result<Self, TransportError> {
        stream.set_read_timeout(Some(READ_TIMEOUT))?;
        stream.set_nodelay(true)?;
        Ok(Self { stream })
    }

    /// Connects and announces the session index.
    pub fn connect(addr: impl ToSocketAddrs, session: u32) -> Result<Self, TransportError> {
        let mut stream = TcpStream::connect(addr)?;
        stream.write_all(&session.to_be_bytes())?;
        Self::wrap(stream)
    }

    /// Accepts one connection and reads the peer's session index.
    pub fn accept(listener: &TcpListener) -> Result<(Self, u32), TransportError> {
        let (stream, _) = listener.accept()?;
        let mut t = Self::wrap(stream)?;
        let mut index = [0u8; 4];
        t.stream.read_exact(&mut index)?;
        Ok((t, u32::from_be_bytes(index)))
    }

    pub fn peer(&self) -> io::Result<SocketAddr> {
        self.stream.peer_addr()
    }
}

impl Endpoint for Tcp {
    fn send(&mut self, msg: &ProtocolMessage) -> Result<(), TransportError> {
        Ok(msg.write_to(&mut self.stream)?)
    }

    fn recv(&mut self) -> Result<ProtocolMessage, TransportError> {
        match ProtocolMessage::read_from(&mut self.stream) {
            Err(FrameError::Io(e)) if e.kind() == io::ErrorKind::UnexpectedEof => Err(TransportError::Closed),
            other => Ok(other?),
        }
    }
}
