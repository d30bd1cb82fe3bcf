//! Message authentication over a previously shared singlet per bit.
//!
//! Bit 0 travels as the product state |0>|+>, bit 1 as |1>|->. Alice and
//! Bob each run a CNOT from their singlet half onto the first payload
//! qubit; the singlet's perfect anticorrelation makes the combined effect
//! a deterministic bit flip, so Bob expects exactly the flipped codeword.
//! He checks the first qubit in the computational basis and the second in
//! the diagonal basis, and any other pattern flags tampering. An
//! intercept-resend attack in the computational basis scrambles the
//! diagonal check qubit and is caught half the time per bit.

use crate::channel::{EbitOrigin, EbitPhase, PartyId, Session};
use crate::qsim::{BasisSpec, BellKind, GateSpec};

use super::{Outcome, ProtocolError};

pub fn run_curty_santos(session: &mut Session, message: &[bool]) -> Result<Outcome, ProtocolError> {
    if message.is_empty() {
        return Err(ProtocolError::Config("message must be non-empty".into()));
    }
    let m = message.len();
    let singlets = session.distribute_ebits(
        m,
        BellKind::PsiMinus,
        EbitPhase::Prior,
        EbitOrigin::FromParty(PartyId::Alice),
    )?;

    let mut recovered = Vec::with_capacity(m);
    let mut tampered = false;
    for (i, &bit) in message.iter().enumerate() {
        let code = session.alloc(PartyId::Alice, 2)?;
        if bit {
            session.apply_gate(PartyId::Alice, GateSpec::X, &[code[0]])?;
        }
        session.apply_gate(PartyId::Alice, GateSpec::H, &[code[1]])?;
        if bit {
            session.apply_gate(PartyId::Alice, GateSpec::Z, &[code[1]])?;
        }
        session.apply_gate(PartyId::Alice, GateSpec::Cnot, &[singlets[i].0, code[0]])?;
        session.send_qubits(PartyId::Alice, PartyId::Bob, &code, "codeword")?;
        session.apply_gate(PartyId::Bob, GateSpec::Cnot, &[singlets[i].1, code[0]])?;

        let c = session.measure(PartyId::Bob, &[code[0]], BasisSpec::Computational)?[0];
        let d = session.measure(PartyId::Bob, &[code[1]], BasisSpec::Diagonal)?[0];
        match (c, d) {
            (true, false) => recovered.push(false),
            (false, true) => recovered.push(true),
            _ => tampered = true,
        }
        if tampered {
            break;
        }
    }

    Ok(Outcome {
        accepted: !tampered,
        eavesdrop_detected: tampered,
        recovered_message: if tampered { None } else { Some(recovered) },
        session_key: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::AdversaryKind;
    use crate::ledger::{self, ModelClass};
    use crate::protocols::{run_simulable, RunParams};

    #[test]
    fn honest_run_recovers_message_with_2m_sends() {
        let msg = vec![false, true, true, false];
        let params = RunParams {
            message: Some(msg.clone()),
            ..Default::default()
        };
        let (outcome, session) =
            run_simulable("curty_santos", &params, AdversaryKind::None, 13).unwrap();
        assert!(outcome.accepted);
        assert_eq!(outcome.recovered_message, Some(msg));
        let t = ledger::tally(session.event_log());
        assert_eq!(t.qubits_sent, 8);
        assert_eq!(t.ebits_prior, 4);
        assert_eq!(t.classical_bits_sent, 0);
        assert_eq!(ledger::classify(&t).unwrap(), ModelClass::Hybrid);
    }

    #[test]
    fn honest_single_bit_runs_accept_for_both_bit_values() {
        for seed in 0..10 {
            for bit in [false, true] {
                let mut session = Session::open(&[PartyId::Alice, PartyId::Bob], seed).unwrap();
                let outcome = run_curty_santos(&mut session, &[bit]).unwrap();
                assert!(outcome.accepted);
                assert_eq!(outcome.recovered_message, Some(vec![bit]));
            }
        }
    }
}
