//! Simulated communication fabric between named parties.
//!
//! A [`Session`] owns a qubit pool, an ownership map (which party holds
//! which qubit), an append-only event log, and the session RNG. Parties
//! may only operate on qubits they currently own; quantum and classical
//! sends are the only ownership transfers, and every send is logged.
//! An installed adversary intercepts in-flight payloads before delivery.

use std::collections::{BTreeSet, HashMap};

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::adversary::{AdversaryKind, BasisStrategy, TamperRule};
use crate::qsim::{BasisSpec, BellKind, GateSpec};
use crate::register::{QubitRef, Register, RegisterError};
use crate::rng::{rng_from_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PartyId {
    Alice,
    Bob,
    Eve,
    TrustedCenter,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EbitPhase {
    /// Distributed before the protocol starts; excluded from tallies.
    Prior,
    /// Distributed during the run; transmitted halves count as qubit sends.
    InProtocol,
}

/// Where distributed pairs are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbitOrigin {
    /// One party prepares the pairs locally and transmits one half each.
    FromParty(PartyId),
    /// An external source transmits both halves of every pair.
    ExternalSource,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EventKind {
    QuantumSend { qubits: u64 },
    ClassicalSend { bits: u64 },
    EbitDistribution {
        pairs: u64,
        phase: EbitPhase,
        transmitted_halves: u64,
    },
}

/// One logged communication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelEvent {
    pub seq: u64,
    pub sender: PartyId,
    pub receiver: PartyId,
    pub kind: EventKind,
    pub tag: String,
}

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("session requires at least Alice and Bob, got {0:?}")]
    MissingParticipant(Vec<PartyId>),
    #[error("adversary must be installed before the first communication")]
    AdversaryAfterStart,
    #[error("invalid adversary parameters: {0}")]
    InvalidAdversary(String),
    #[error("{party:?} does not own qubit {qubit:?}")]
    NotOwner { party: PartyId, qubit: QubitRef },
    #[error("{0:?} is not a session participant")]
    NotParticipant(PartyId),
    #[error("classical payload must be non-empty")]
    EmptyPayload,
    #[error("ebit count must be at least 1")]
    EmptyDistribution,
    #[error(transparent)]
    Register(#[from] RegisterError),
}

pub struct Session {
    seed: u64,
    participants: BTreeSet<PartyId>,
    log: Vec<ChannelEvent>,
    adversary: AdversaryKind,
    register: Register,
    owner: HashMap<QubitRef, PartyId>,
    rng: SimRng,
    seq: u64,
}

impl Session {
    pub fn open(participants: &[PartyId], seed: u64) -> Result<Self, ChannelError> {
        let set: BTreeSet<PartyId> = participants.iter().copied().collect();
        if !set.contains(&PartyId::Alice) || !set.contains(&PartyId::Bob) {
            return Err(ChannelError::MissingParticipant(participants.to_vec()));
        }
        Ok(Session {
            seed,
            participants: set,
            log: Vec::new(),
            adversary: AdversaryKind::None,
            register: Register::new(),
            owner: HashMap::new(),
            rng: rng_from_seed(seed),
            seq: 0,
        })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn adversary(&self) -> &AdversaryKind {
        &self.adversary
    }

    /// Install Eve's strategy. Must happen before any communication.
    pub fn install_adversary(&mut self, kind: AdversaryKind) -> Result<(), ChannelError> {
        if !self.log.is_empty() {
            return Err(ChannelError::AdversaryAfterStart);
        }
        if let AdversaryKind::Substitution(TamperRule::RewriteClassical(mask)) = &kind {
            if mask.is_empty() {
                return Err(ChannelError::InvalidAdversary(
                    "rewrite mask must be non-empty".into(),
                ));
            }
        }
        self.adversary = kind;
        Ok(())
    }

    /// Immutable snapshot of the event log, ordered by sequence number.
    pub fn event_log(&self) -> &[ChannelEvent] {
        &self.log
    }

    pub fn rng_mut(&mut self) -> &mut SimRng {
        &mut self.rng
    }

    fn check_participant(&self, p: PartyId) -> Result<(), ChannelError> {
        if self.participants.contains(&p) {
            Ok(())
        } else {
            Err(ChannelError::NotParticipant(p))
        }
    }

    fn check_owner(&self, party: PartyId, ids: &[QubitRef]) -> Result<(), ChannelError> {
        for &q in ids {
            if self.owner.get(&q) != Some(&party) {
                return Err(ChannelError::NotOwner { party, qubit: q });
            }
        }
        Ok(())
    }

    fn push_event(&mut self, sender: PartyId, receiver: PartyId, kind: EventKind, tag: &str) {
        let seq = self.seq;
        self.seq += 1;
        self.log.push(ChannelEvent {
            seq,
            sender,
            receiver,
            kind,
            tag: tag.to_string(),
        });
    }

    /// Allocate fresh local qubits owned by `party`.
    pub fn alloc(&mut self, party: PartyId, count: usize) -> Result<Vec<QubitRef>, ChannelError> {
        self.check_participant(party)?;
        let ids = self.register.alloc(count)?;
        for &q in &ids {
            self.owner.insert(q, party);
        }
        Ok(ids)
    }

    /// Distribute `count` entangled pairs between Alice and Bob.
    ///
    /// Returns `(alice_half, bob_half)` handles. Prior-phase pairs never
    /// contribute to communication tallies. In-protocol distributions count
    /// their transmitted halves as qubit sends: one per pair when a party
    /// prepares them locally, two per pair when an external source does.
    pub fn distribute_ebits(
        &mut self,
        count: usize,
        kind: BellKind,
        phase: EbitPhase,
        origin: EbitOrigin,
    ) -> Result<Vec<(QubitRef, QubitRef)>, ChannelError> {
        if count == 0 {
            return Err(ChannelError::EmptyDistribution);
        }
        let mut pairs = Vec::with_capacity(count);
        for _ in 0..count {
            let ids = self.register.alloc(2)?;
            self.register.prepare_pair(ids[0], ids[1], kind)?;
            self.owner.insert(ids[0], PartyId::Alice);
            self.owner.insert(ids[1], PartyId::Bob);
            pairs.push((ids[0], ids[1]));
        }
        let transmitted = match origin {
            EbitOrigin::FromParty(_) => count as u64,
            EbitOrigin::ExternalSource => 2 * count as u64,
        };
        let (sender, receiver) = match origin {
            EbitOrigin::FromParty(p) => (p, if p == PartyId::Alice { PartyId::Bob } else { PartyId::Alice }),
            EbitOrigin::ExternalSource => (PartyId::TrustedCenter, PartyId::Bob),
        };
        self.push_event(
            sender,
            receiver,
            EventKind::EbitDistribution {
                pairs: count as u64,
                phase,
                transmitted_halves: transmitted,
            },
            "ebit-distribution",
        );
        Ok(pairs)
    }

    /// Send qubits; ownership transfers, and an installed adversary with a
    /// quantum hook operates on the in-flight qubits before delivery.
    pub fn send_qubits(
        &mut self,
        from: PartyId,
        to: PartyId,
        ids: &[QubitRef],
        tag: &str,
    ) -> Result<(), ChannelError> {
        self.check_participant(from)?;
        self.check_participant(to)?;
        self.check_owner(from, ids)?;
        match self.adversary.clone() {
            AdversaryKind::InterceptResend { basis, tag_filter } => {
                if tag_filter.as_deref().is_none_or(|t| t == tag) {
                    for &q in ids {
                        let b = match basis {
                            BasisStrategy::Fixed(b) => b,
                            BasisStrategy::UniformRandom => {
                                if self.rng.gen::<bool>() {
                                    BasisSpec::Diagonal
                                } else {
                                    BasisSpec::Computational
                                }
                            }
                        };
                        self.register.measure(&[q], b, &mut self.rng)?;
                    }
                }
            }
            AdversaryKind::Substitution(TamperRule::FlipQubit(i)) if i < ids.len() => {
                self.register.apply_gate(GateSpec::X, &[ids[i]])?;
            }
            _ => {}
        }
        for &q in ids {
            self.owner.insert(q, to);
        }
        self.push_event(
            from,
            to,
            EventKind::QuantumSend {
                qubits: ids.len() as u64,
            },
            tag,
        );
        Ok(())
    }

    /// Send classical bits; a substitution adversary may rewrite the payload
    /// (length preserved). Returns the delivered bits.
    pub fn send_classical(
        &mut self,
        from: PartyId,
        to: PartyId,
        bits: &[bool],
        tag: &str,
    ) -> Result<Vec<bool>, ChannelError> {
        self.check_participant(from)?;
        self.check_participant(to)?;
        if bits.is_empty() {
            return Err(ChannelError::EmptyPayload);
        }
        let mut delivered = bits.to_vec();
        if let AdversaryKind::Substitution(TamperRule::RewriteClassical(mask)) = &self.adversary {
            for (i, b) in delivered.iter_mut().enumerate() {
                if i < mask.len() && mask[i] {
                    *b = !*b;
                }
            }
        }
        self.push_event(
            from,
            to,
            EventKind::ClassicalSend {
                bits: bits.len() as u64,
            },
            tag,
        );
        Ok(delivered)
    }

    /// Prepare two fresh locally held qubits in a Bell state.
    pub fn prepare_pair(
        &mut self,
        party: PartyId,
        a: QubitRef,
        b: QubitRef,
        kind: BellKind,
    ) -> Result<(), ChannelError> {
        self.check_owner(party, &[a, b])?;
        self.register.prepare_pair(a, b, kind)?;
        Ok(())
    }

    /// Apply a gate as `party`; every touched qubit must be owned by them.
    pub fn apply_gate(
        &mut self,
        party: PartyId,
        gate: GateSpec,
        ids: &[QubitRef],
    ) -> Result<(), ChannelError> {
        self.check_owner(party, ids)?;
        self.register.apply_gate(gate, ids)?;
        Ok(())
    }

    pub fn measure(
        &mut self,
        party: PartyId,
        ids: &[QubitRef],
        basis: BasisSpec,
    ) -> Result<Vec<bool>, ChannelError> {
        self.check_owner(party, ids)?;
        let bits = self.register.measure(ids, basis, &mut self.rng)?;
        Ok(bits)
    }

    pub fn measure_bell(
        &mut self,
        party: PartyId,
        a: QubitRef,
        b: QubitRef,
    ) -> Result<BellKind, ChannelError> {
        self.check_owner(party, &[a, b])?;
        let out = self.register.measure_bell(a, b, &mut self.rng)?;
        Ok(out)
    }

    /// Diagnostic: projection probability of `(a, b)` onto a Bell state.
    pub fn bell_overlap(
        &mut self,
        a: QubitRef,
        b: QubitRef,
        kind: BellKind,
    ) -> Result<f64, ChannelError> {
        Ok(self.register.bell_overlap(a, b, kind)?)
    }

    pub fn owner_of(&self, q: QubitRef) -> Option<PartyId> {
        self.owner.get(&q).copied()
    }
}
