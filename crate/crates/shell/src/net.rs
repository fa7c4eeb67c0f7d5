//! Many coin-flip sessions over TCP, one connection each.

use std::net::{TcpListener, ToSocketAddrs};
use std::sync::mpsc::channel;

use qcoin_core::coinflip::{Outcome, Role};
use qcoin_core::commitment::NaorScheme;

use crate::session::{run_session, session_rng, SessionReport};
use crate::transport::Tcp;

fn failed(why: String) -> SessionReport {
    SessionReport { outcome: Outcome::Fail, transcript: Vec::new(), diagnostic: Some(why) }
}

/// Accepts `sessions` connections and runs each on its own thread. Reports
/// are returned in session-index order; an index claimed twice or out of
/// range is answered with a failed report instead.
pub fn serve(listener: &TcpListener, role: Role, scheme: &NaorScheme, seed: u64, sessions: u32) -> Vec<SessionReport> {
    let (tx, rx) = channel();
    std::thread::scope(|s| {
        for _ in 0..sessions {
            match Tcp::accept(listener) {
                Ok((mut tcp, index)) => {
                    let tx = tx.clone();
                    s.spawn(move || {
                        let report = if index < sessions {
                            run_session(role, &mut tcp, scheme, &mut session_rng(seed, role, index))
                        } else {
                            failed(format!("session index {index} out of range"))
                        };
                        let _ = tx.send((index, report));
                    });
                }
                Err(e) => {
                    let _ = tx.send((u32::MAX, failed(e.to_string())));
                }
            }
        }
    });
    drop(tx);
    let mut reports: Vec<Option<SessionReport>> = vec![None; sessions as usize];
    let mut stray = Vec::new();
    for (index, report) in rx {
        match reports.get_mut(index as usize) {
            Some(slot @ None) => *slot = Some(report),
            _ => stray.push(report),
        }
    }
    let mut stray = stray.into_iter();
    reports
        .into_iter()
        .map(|r| r.unwrap_or_else(|| stray.next().unwrap_or_else(|| failed("no connection for this session".into()))))
        .collect()
}

/// Runs sessions `0..sessions` one after another, a new connection each.
pub fn connect_all<A: ToSocketAddrs + Copy>(
    addr: A,
    role: Role,
    scheme: &NaorScheme,
    seed: u64,
    sessions: u32,
) -> Vec<SessionReport> {
    (0..sessions)
        .map(|index| match Tcp::connect(addr, index) {
            Ok(mut tcp) => run_session(role, &mut tcp, scheme, &mut session_rng(seed, role, index)),
            Err(e) => failed(e.to_string()),
        })
        .collect()
}

/// Whether any report failed on the transport rather than in the protocol.
pub fn any_transport_failure(reports: &[SessionReport]) -> bool {
    reports.iter().any(|r| r.diagnostic.is_some())
}

