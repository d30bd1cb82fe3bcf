//! Mutual identity authentication over prior pairs and classical ciphers.
//!
//! The parties consume `n` shared pairs and two shared classical keys: a
//! basis key choosing a measurement basis per pair, and a keystream. Both
//! measure their halves -- plus-phase pairs agree in the computational and
//! in the diagonal basis alike -- and exchange encrypted transcripts:
//! Alice sends her results under the keystream plus `s` key-derived check
//! bits, Bob answers with his results under the basis key. Each side
//! accepts when the other's transcript matches its own outcomes. A
//! claimant without keys or pair halves can only guess the `n + s`-bit
//! transcript.

use crate::adversary::AdversaryKind;
use crate::channel::{EbitOrigin, EbitPhase, PartyId, Session};
use crate::qsim::{BasisSpec, BellKind};

use super::{random_bits, Outcome, ProtocolError};

pub fn run_zeng_guo(session: &mut Session, n: usize, s: usize) -> Result<Outcome, ProtocolError> {
    if n == 0 {
        return Err(ProtocolError::Config("n must be at least 1".into()));
    }
    let impersonate = matches!(session.adversary(), AdversaryKind::Impersonation(_));

    let basis_key = random_bits(session.rng_mut(), n);
    let keystream = random_bits(session.rng_mut(), n + s);

    let pairs = session.distribute_ebits(
        n,
        BellKind::PhiPlus,
        EbitPhase::Prior,
        EbitOrigin::FromParty(PartyId::Alice),
    )?;
    let basis = |bit: bool| {
        if bit {
            BasisSpec::Diagonal
        } else {
            BasisSpec::Computational
        }
    };
    let mut results_alice = Vec::with_capacity(n);
    let mut results_bob = Vec::with_capacity(n);
    for (i, &(a, b)) in pairs.iter().enumerate() {
        results_alice.push(session.measure(PartyId::Alice, &[a], basis(basis_key[i]))?[0]);
        results_bob.push(session.measure(PartyId::Bob, &[b], basis(basis_key[i]))?[0]);
    }

    // Alice's transcript: results under the keystream, then check bits tying
    // the tail of the keystream to her results. A key-less claimant sends
    // uniform noise in its place.
    let transcript: Vec<bool> = if impersonate {
        random_bits(session.rng_mut(), n + s)
    } else {
        let mut t: Vec<bool> = results_alice
            .iter()
            .zip(&keystream)
            .map(|(&r, &k)| r ^ k)
            .collect();
        t.extend((0..s).map(|j| keystream[n + j] ^ results_alice[j % n]));
        t
    };
    let delivered = session.send_classical(PartyId::Alice, PartyId::Bob, &transcript, "auth-alice")?;

    let decrypted: Vec<bool> = delivered[..n]
        .iter()
        .zip(&keystream)
        .map(|(&c, &k)| c ^ k)
        .collect();
    let checks_ok = (0..s).all(|j| delivered[n + j] == keystream[n + j] ^ results_bob[j % n]);
    let bob_ok = decrypted == results_bob && checks_ok;

    let response: Vec<bool> = results_bob
        .iter()
        .zip(&basis_key)
        .map(|(&r, &k)| r ^ k)
        .collect();
    let delivered_back = session.send_classical(PartyId::Bob, PartyId::Alice, &response, "auth-bob")?;
    let alice_view: Vec<bool> = delivered_back
        .iter()
        .zip(&basis_key)
        .map(|(&c, &k)| c ^ k)
        .collect();
    let alice_ok = alice_view == results_alice;

    // Under impersonation only the verifier's side is meaningful: the
    // claimant cannot evaluate Bob's response.
    let accepted = if impersonate { bob_ok } else { bob_ok && alice_ok };
    Ok(Outcome::identity(accepted))
}
