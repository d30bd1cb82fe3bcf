//! Identity authentication via rotation-encrypted qubit strings.
//!
//! Alice and Bob share a key of `n` angles. Three `n`-qubit messages are
//! exchanged: Alice's encrypted random string, Bob's doubly-encrypted
//! challenge, and Alice's XOR-corrected response. Bob authenticates Alice
//! when he recovers his own challenge string, and the run yields a fresh
//! session key.

use crate::adversary::AdversaryKind;
use crate::channel::{PartyId, Session};
use crate::qsim::{BasisSpec, GateSpec};
use crate::register::QubitRef;

use super::{random_bits, AuthKey, Outcome, ProtocolError};

fn validate_key(key: &AuthKey, n: usize) -> Result<Vec<f64>, ProtocolError> {
    match key {
        AuthKey::AngleKey(angles) if angles.len() == n => {
            if angles.iter().any(|&a| !(0.0..std::f64::consts::PI).contains(&a)) {
                return Err(ProtocolError::Config(
                    "key angles must lie in [0, pi)".into(),
                ));
            }
            Ok(angles.clone())
        }
        AuthKey::AngleKey(angles) => Err(ProtocolError::Config(format!(
            "key has {} angles, expected n = {n}",
            angles.len()
        ))),
        _ => Err(ProtocolError::Config("expected an angle key".into())),
    }
}

fn encrypt(session: &mut Session, party: PartyId, qubits: &[QubitRef], key: &[f64], sign: f64) -> Result<(), ProtocolError> {
    // Key angles live in [0, pi); doubling at gate application maps the
    // full range onto distinguishable states.
    for (&q, &theta) in qubits.iter().zip(key) {
        session.apply_gate(party, GateSpec::Ry(sign * 2.0 * theta), &[q])?;
    }
    Ok(())
}

pub fn run_kanamori(session: &mut Session, n: usize, key: &AuthKey) -> Result<Outcome, ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::Config("n must be at least 1".into()));
    }
    let key = validate_key(key, n)?;
    let impersonate = matches!(session.adversary(), AdversaryKind::Impersonation(_));
    // An impersonating Eve holds no key; she plays Alice's role with a
    // uniformly guessed angle key.
    let sender_key = if impersonate {
        (0..n).map(|_| super::random_angle(session.rng_mut())).collect()
    } else {
        key.clone()
    };

    // Message 1: the sender's encrypted random string.
    let r_sender = random_bits(session.rng_mut(), n);
    let msg1 = session.alloc(PartyId::Alice, n)?;
    for (i, &q) in msg1.iter().enumerate() {
        if r_sender[i] {
            session.apply_gate(PartyId::Alice, GateSpec::X, &[q])?;
        }
    }
    encrypt(session, PartyId::Alice, &msg1, &sender_key, 1.0)?;
    session.send_qubits(PartyId::Alice, PartyId::Bob, &msg1, "auth-request")?;

    encrypt(session, PartyId::Bob, &msg1, &key, -1.0)?;
    let r_a_bob = session.measure(PartyId::Bob, &msg1, BasisSpec::Computational)?;

    // Message 2: Bob's challenge, encrypted with both the shared key and a
    // fresh session key.
    let r_b = random_bits(session.rng_mut(), n);
    let session_key: Vec<f64> = (0..n).map(|_| super::random_angle(session.rng_mut())).collect();
    let msg2 = session.alloc(PartyId::Bob, n)?;
    for (i, &q) in msg2.iter().enumerate() {
        if r_b[i] {
            session.apply_gate(PartyId::Bob, GateSpec::X, &[q])?;
        }
    }
    encrypt(session, PartyId::Bob, &msg2, &session_key, 1.0)?;
    encrypt(session, PartyId::Bob, &msg2, &key, 1.0)?;
    session.send_qubits(PartyId::Bob, PartyId::Alice, &msg2, "challenge")?;

    // Message 3: the sender strips their key layer and folds in R_A.
    encrypt(session, PartyId::Alice, &msg2, &sender_key, -1.0)?;
    for (i, &q) in msg2.iter().enumerate() {
        if r_sender[i] {
            session.apply_gate(PartyId::Alice, GateSpec::X, &[q])?;
        }
    }
    session.send_qubits(PartyId::Alice, PartyId::Bob, &msg2, "response")?;

    // Bob undoes the XOR with the R_A he recovered, then his session-key
    // layer. (The XOR correction must come first: X and Ry do not commute,
    // so the corrections unwind in reverse order of application.)
    for (i, &q) in msg2.iter().enumerate() {
        if r_a_bob[i] {
            session.apply_gate(PartyId::Bob, GateSpec::X, &[q])?;
        }
    }
    encrypt(session, PartyId::Bob, &msg2, &session_key, -1.0)?;
    let r_b_recovered = session.measure(PartyId::Bob, &msg2, BasisSpec::Computational)?;

    let accepted = r_b_recovered == r_b;
    let mut outcome = Outcome::identity(accepted);
    if accepted {
        outcome.session_key = Some(session_key);
    }
    Ok(outcome)
}
