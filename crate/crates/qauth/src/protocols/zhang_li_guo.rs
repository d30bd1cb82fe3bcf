//! Identity authentication with rotated shared pairs and CNOT echoes.
//!
//! The parties hold `2k` shared pairs, both halves rotated by a shared
//! angle. Bob sends `n` challenge qubits in states only he knows; Alice
//! echoes them through CNOTs controlled by her pair halves, and Bob's
//! matching CNOTs restore the originals exactly when the controls are the
//! genuine entangled partners. The shared pairs survive the run intact.

use crate::adversary::AdversaryKind;
use crate::channel::{EbitOrigin, EbitPhase, PartyId, Session};
use crate::qsim::{BasisSpec, BellKind, GateSpec};

use super::{random_angle, AuthKey, Outcome, ProtocolError};

pub fn run_zhang_li_guo(
    session: &mut Session,
    n: usize,
    k: usize,
    theta: &AuthKey,
) -> Result<Outcome, ProtocolError> {
    run_zhang_li_guo_with_pairs(session, n, k, theta).map(|(outcome, _)| outcome)
}

/// As [`run_zhang_li_guo`], also returning the shared pair handles so the
/// pair-reuse property (the pairs survive the run) can be checked.
pub fn run_zhang_li_guo_with_pairs(
    session: &mut Session,
    n: usize,
    k: usize,
    theta: &AuthKey,
) -> Result<(Outcome, Vec<(crate::register::QubitRef, crate::register::QubitRef)>), ProtocolError> {
    let theta = match theta {
        AuthKey::Theta(t) if (0.0..std::f64::consts::PI).contains(t) => *t,
        AuthKey::Theta(_) => {
            return Err(ProtocolError::Config("theta must lie in [0, pi)".into()))
        }
        _ => return Err(ProtocolError::Config("expected a single shared angle".into())),
    };
    if n == 0 {
        return Err(ProtocolError::Config("n must be at least 1".into()));
    }
    if n > k {
        return Err(ProtocolError::Budget { n, k });
    }
    let impersonate = matches!(session.adversary(), AdversaryKind::Impersonation(_));

    let pairs = session.distribute_ebits(
        2 * k,
        BellKind::PhiPlus,
        EbitPhase::Prior,
        EbitOrigin::FromParty(PartyId::Alice),
    )?;
    for &(a, b) in &pairs {
        session.apply_gate(PartyId::Alice, GateSpec::Ry(2.0 * theta), &[a])?;
        session.apply_gate(PartyId::Bob, GateSpec::Ry(2.0 * theta), &[b])?;
    }

    // Bob's challenge: one qubit per authentication round, in a pure state
    // only he knows.
    let challenge_angles: Vec<f64> = (0..n).map(|_| random_angle(session.rng_mut())).collect();
    let challenge = session.alloc(PartyId::Bob, n)?;
    for (&q, &phi) in challenge.iter().zip(&challenge_angles) {
        session.apply_gate(PartyId::Bob, GateSpec::Ry(2.0 * phi), &[q])?;
    }
    session.send_qubits(PartyId::Bob, PartyId::Alice, &challenge, "challenge")?;

    if !impersonate {
        // Alice entangles each challenge qubit with her half of pair i.
        for (i, &q) in challenge.iter().enumerate() {
            session.apply_gate(PartyId::Alice, GateSpec::Cnot, &[pairs[i].0, q])?;
        }
    }
    // An impersonating Eve holds no pair halves and cannot add a layer Bob
    // can cancel; she forwards the challenge untouched.
    session.send_qubits(PartyId::Alice, PartyId::Bob, &challenge, "response")?;

    let mut all_match = true;
    for (i, &q) in challenge.iter().enumerate() {
        session.apply_gate(PartyId::Bob, GateSpec::Cnot, &[pairs[i].1, q])?;
        let bit = session.measure(PartyId::Bob, &[q], BasisSpec::Rotated(challenge_angles[i]))?[0];
        if bit {
            all_match = false;
        }
    }
    Ok((Outcome::identity(all_match), pairs))
}
