//! The `qcoin` binary driven as a subprocess.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use qcoin_core::dualmode::{KeyMode, RegevKey};
use qcoin_core::qrewind::sweep::{sweep, write_csv, AdversaryFamily, SweepConfig};

fn qcoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcoin")).args(args).output().expect("run qcoin")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_str().unwrap().to_string()
}

#[test]
fn experiment_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (path(dir.path(), "a.csv"), path(dir.path(), "b.csv"));
    for out in [&a, &b] {
        let o = qcoin(&["experiment", "--name", "fairness", "--seed", "5", "--reps", "2000", "--out", out]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    let first = fs::read(&a).unwrap();
    assert_eq!(first, fs::read(&b).unwrap());
    assert!(String::from_utf8(first).unwrap().starts_with("bob,n,runs,ones,fails,rate,low,high,pass\n"));
    let other = qcoin(&["experiment", "--name", "fairness", "--seed", "6", "--reps", "2000"]);
    assert_ne!(other.stdout, fs::read(&a).unwrap());
}

#[test]
fn unknown_experiment_is_a_usage_error() {
    let o = qcoin(&["experiment", "--name", "coin-toss"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown experiment"));
    assert_eq!(code(&qcoin(&["coinflip", "--local", "--connect", "127.0.0.1:1"])), 2);
}

#[test]
fn rewind_sweep_matches_the_library_sweep() {
    let config = SweepConfig::new(20, 10, 77, AdversaryFamily::Perturbed);
    let mut want = Vec::new();
    write_csv(&sweep(&config).unwrap(), &mut want).unwrap();
    let direct = qcoin(&["qrewind", "sweep", "--trials", "20", "--qubits", "10", "--seed", "77", "--family", "perturbed"]);
    let via_experiment =
        qcoin(&["experiment", "--name", "rewind-sweep", "--reps", "20", "--qubits", "10", "--seed", "77", "--family", "perturbed"]);
    assert_eq!(code(&direct), 0);
    assert_eq!(code(&via_experiment), 0);
    assert_eq!(direct.stdout, want);
    assert_eq!(via_experiment.stdout, want);
}

#[test]
fn soundness_reports_rate_and_bound() {
    let o = qcoin(&["experiment", "--name", "soundness", "--reps", "500", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("coins,k,trials,accepted,rate,bound,pass"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn prove_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let (inst, proof, bare) = (path(dir.path(), "x.txt"), path(dir.path(), "p.bin"), path(dir.path(), "y.txt"));
    assert_eq!(code(&qcoin(&["iqzk", "instance", "--seed", "1", "--out", &inst])), 0);
    assert_eq!(code(&qcoin(&["iqzk", "prove", "--instance", &inst, "--seed", "2", "--out", &proof])), 0);
    let v = qcoin(&["iqzk", "verify", "--instance", &inst, "--proof", &proof]);
    assert_eq!((code(&v), String::from_utf8_lossy(&v.stdout).trim()), (0, "accept"));

    let mut bytes = fs::read(&proof).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 1;
    fs::write(&proof, &bytes).unwrap();
    assert_eq!(code(&qcoin(&["iqzk", "verify", "--instance", &inst, "--proof", &proof])), 1);

    assert_eq!(code(&qcoin(&["iqzk", "instance", "--no-witness", "--seed", "1", "--out", &bare])), 0);
    assert_eq!(code(&qcoin(&["iqzk", "prove", "--instance", &bare, "--out", &proof])), 2);
    assert_eq!(code(&qcoin(&["iqzk", "simulate", "--instance", &bare, "--k", "4"])), 0);
}

#[test]
fn keygen_from_coins_writes_a_hiding_key() {
    let dir = tempfile::tempdir().unwrap();
    let key = path(dir.path(), "k.bin");
    let o = qcoin(&["dualmode", "keygen", "--mode", "coins", "--params", "4,16,97,1", "--n", "8", "--out", &key]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let parsed = RegevKey::from_bytes(&fs::read(&key).unwrap()).unwrap();
    assert_eq!(parsed.mode(), KeyMode::Hiding);
    assert_eq!(parsed.rows().len(), 16);
    assert_eq!(code(&qcoin(&["dualmode", "keygen", "--mode", "binding", "--params", "4,16,96,1", "--out", &key])), 2);
}

#[test]
fn refused_connection_is_a_transport_error() {
    // Bind and drop to find a port nobody listens on.
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let o = qcoin(&["coinflip", "--role", "alice", "--connect", &format!("127.0.0.1:{port}")]);
    assert_eq!(code(&o), 3);
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "session 0 FAIL");
}

#[test]
fn unknown_tag_over_tcp_fails_the_session() {
    let mut listener = Command::new(env!("CARGO_BIN_EXE_qcoin"))
        .args(["coinflip", "--role", "alice", "--listen", "127.0.0.1:0"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut out = BufReader::new(listener.stdout.take().unwrap());
    let mut first = String::new();
    out.read_line(&mut first).unwrap();
    let addr = first.trim().strip_prefix("listening on ").unwrap().to_string();
    let mut peer = TcpStream::connect(&addr).unwrap();
    peer.write_all(&0u32.to_be_bytes()).unwrap();
    peer.write_all(&[7, 0, 0, 0, 0]).unwrap();
    let mut rest = String::new();
    out.read_line(&mut rest).unwrap();
    let status = listener.wait_with_output().unwrap();
    assert_eq!(rest.trim(), "session 0 FAIL");
    assert_eq!(status.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&status.stderr).contains("unknown message tag 7"));
}

#[test]
fn local_sessions_match_across_invocations() {
    let a = qcoin(&["coinflip", "--local", "--sessions", "20", "--seed", "4"]);
    let b = qcoin(&["coinflip", "--local", "--sessions", "20", "--seed", "4"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 20);
}
