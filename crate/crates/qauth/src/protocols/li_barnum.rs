//! Identity authentication with shared pairs as the token, verified by
//! entanglement swapping.
//!
//! No key material is shared, only `n` prior pairs. For each of them an
//! auxiliary pair is produced in-protocol (both halves transmitted, one
//! to each party). Alice Bell-measures her prior half against her
//! auxiliary half, which collapses Bob's two halves onto the very Bell
//! state Alice observed; Bob's own Bell measurement must reproduce it. A
//! claimant without the prior halves produces uncorrelated outcomes and
//! matches only by chance.

use crate::adversary::AdversaryKind;
use crate::channel::{EbitOrigin, EbitPhase, PartyId, Session};
use crate::qsim::BellKind;

use super::{Outcome, ProtocolError};

pub fn run_li_barnum(session: &mut Session, n: usize) -> Result<Outcome, ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::Config("n must be at least 1".into()));
    }
    let impersonate = matches!(session.adversary(), AdversaryKind::Impersonation(_));

    let prior = session.distribute_ebits(
        n,
        BellKind::PhiPlus,
        EbitPhase::Prior,
        EbitOrigin::FromParty(PartyId::Alice),
    )?;
    // An impersonating Eve never received the prior halves; she substitutes
    // fresh unentangled qubits.
    let claimant_halves: Vec<_> = if impersonate {
        session.alloc(PartyId::Alice, n)?
    } else {
        prior.iter().map(|&(a, _)| a).collect()
    };

    let mut all_match = true;
    for (i, &claimant) in claimant_halves.iter().enumerate() {
        let aux = session.distribute_ebits(
            1,
            BellKind::PhiPlus,
            EbitPhase::InProtocol,
            EbitOrigin::ExternalSource,
        )?;
        let (aux_alice, aux_bob) = aux[0];
        let alice_outcome = session.measure_bell(PartyId::Alice, claimant, aux_alice)?;
        let bob_outcome = session.measure_bell(PartyId::Bob, prior[i].1, aux_bob)?;
        if alice_outcome != bob_outcome {
            all_match = false;
        }
    }
    Ok(Outcome::identity(all_match))
}
