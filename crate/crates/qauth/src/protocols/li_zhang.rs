//! Message authentication over previously shared pairs.
//!
//! Each message bit is encoded as a fresh two-qubit codeword (bit 0 as a
//! plus-phase pair, bit 1 as a minus-phase pair). Before transmission
//! Alice shields the codeword with a CNOT controlled by her half of a
//! shared pair; Bob's matching CNOT cancels it, so his Bell measurement
//! recovers the bit. Any bit flip in flight moves the codeword out of the
//! phase-pair subspace and is detected with certainty.

use crate::channel::{EbitOrigin, EbitPhase, PartyId, Session};
use crate::qsim::{BellKind, GateSpec};

use super::{Outcome, ProtocolError};

pub fn run_li_zhang(session: &mut Session, message: &[bool]) -> Result<Outcome, ProtocolError> {
    if message.is_empty() {
        return Err(ProtocolError::Config("message must be non-empty".into()));
    }
    let m = message.len();
    let shared = session.distribute_ebits(
        m,
        BellKind::PhiPlus,
        EbitPhase::Prior,
        EbitOrigin::FromParty(PartyId::Alice),
    )?;

    let mut recovered = Vec::with_capacity(m);
    let mut tampered = false;
    for (i, &bit) in message.iter().enumerate() {
        let code = session.alloc(PartyId::Alice, 2)?;
        let kind = if bit { BellKind::PhiMinus } else { BellKind::PhiPlus };
        session.prepare_pair(PartyId::Alice, code[0], code[1], kind)?;
        session.apply_gate(PartyId::Alice, GateSpec::Cnot, &[shared[i].0, code[0]])?;
        session.send_qubits(PartyId::Alice, PartyId::Bob, &code, "codeword")?;
        session.apply_gate(PartyId::Bob, GateSpec::Cnot, &[shared[i].1, code[0]])?;
        match session.measure_bell(PartyId::Bob, code[0], code[1])? {
            BellKind::PhiPlus => recovered.push(false),
            BellKind::PhiMinus => recovered.push(true),
            BellKind::PsiPlus | BellKind::PsiMinus => tampered = true,
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
