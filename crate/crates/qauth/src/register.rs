//! Qubit pool built from independent state-vector fragments.
//!
//! Protocol sessions allocate qubits in small groups. Groups that never
//! interact stay in separate fragments; a gate spanning two fragments
//! merges them first. This keeps each dense state vector at the size of
//! the actual working set (a handful of qubits per message bit) instead
//! of the whole session.

use std::collections::HashMap;

use rand::Rng;
use thiserror::Error;

use crate::qsim::{BasisSpec, BellKind, GateSpec, SimError, StateVector, MAX_QUBITS};

/// Stable handle for one allocated qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef(u64);

#[derive(Debug, Error, PartialEq)]
pub enum RegisterError {
    #[error("unknown qubit handle {0:?}")]
    UnknownQubit(QubitRef),
    #[error("operation would need a {0}-qubit fragment, cap is {MAX_QUBITS}")]
    CapacityExceeded(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

struct Fragment {
    state: StateVector,
    /// Fragment-local qubit `i` is `members[i]`.
    members: Vec<QubitRef>,
}

/// Pool of fragments with stable qubit handles.
#[derive(Default)]
pub struct Register {
    fragments: Vec<Option<Fragment>>,
    locate: HashMap<QubitRef, usize>,
    next_id: u64,
}

impl Register {
    pub fn new() -> Self {
        Register::default()
    }

    /// Allocate `count` fresh qubits in |0>.
    ///
    /// Each qubit starts as its own fragment, so unrelated qubits never
    /// inflate one another's state vectors; entangling operations merge
    /// fragments on demand.
    pub fn alloc(&mut self, count: usize) -> Result<Vec<QubitRef>, RegisterError> {
        if count == 0 {
            return Err(RegisterError::CapacityExceeded(count));
        }
        let mut ids = Vec::with_capacity(count);
        for _ in 0..count {
            let id = QubitRef(self.next_id);
            self.next_id += 1;
            let frag_idx = self.fragments.len();
            self.locate.insert(id, frag_idx);
            self.fragments.push(Some(Fragment {
                state: StateVector::new_register(1)?,
                members: vec![id],
            }));
            ids.push(id);
        }
        Ok(ids)
    }

    fn fragment_of(&self, id: QubitRef) -> Result<usize, RegisterError> {
        self.locate
            .get(&id)
            .copied()
            .ok_or(RegisterError::UnknownQubit(id))
    }

    /// Ensure all ids live in one fragment; returns its index.
    fn unify(&mut self, ids: &[QubitRef]) -> Result<usize, RegisterError> {
        let mut frags: Vec<usize> = Vec::new();
        for &id in ids {
            let f = self.fragment_of(id)?;
            if !frags.contains(&f) {
                frags.push(f);
            }
        }
        let target = frags[0];
        for &other in &frags[1..] {
            let a = self.fragments[target].take().expect("live fragment");
            let b = self.fragments[other].take().expect("live fragment");
            let combined = a.state.tensor(&b.state).map_err(|e| match e {
                SimError::InvalidSize(n) => RegisterError::CapacityExceeded(n),
                e => RegisterError::Sim(e),
            })?;
            let mut members = a.members;
            members.extend(b.members);
            for &id in &members {
                self.locate.insert(id, target);
            }
            self.fragments[target] = Some(Fragment {
                state: combined,
                members,
            });
        }
        Ok(target)
    }

    fn local_indices(&self, frag: usize, ids: &[QubitRef]) -> Vec<usize> {
        let members = &self.fragments[frag].as_ref().expect("live fragment").members;
        ids.iter()
            .map(|id| members.iter().position(|m| m == id).expect("member"))
            .collect()
    }

    pub fn apply_gate(&mut self, gate: GateSpec, ids: &[QubitRef]) -> Result<(), RegisterError> {
        let frag = self.unify(ids)?;
        let local = self.local_indices(frag, ids);
        let state = &mut self.fragments[frag].as_mut().expect("live").state;
        state.apply_gate(gate, &local)?;
        Ok(())
    }

    pub fn prepare_pair(
        &mut self,
        a: QubitRef,
        b: QubitRef,
        kind: BellKind,
    ) -> Result<(), RegisterError> {
        let frag = self.unify(&[a, b])?;
        let local = self.local_indices(frag, &[a, b]);
        let state = &mut self.fragments[frag].as_mut().expect("live").state;
        state.prepare_pair(local[0], local[1], kind)?;
        Ok(())
    }

    /// Measure qubits one at a time (projective, so sequential single-qubit
    /// measurements reproduce joint statistics) without merging fragments.
    pub fn measure<R: Rng>(
        &mut self,
        ids: &[QubitRef],
        basis: BasisSpec,
        rng: &mut R,
    ) -> Result<Vec<bool>, RegisterError> {
        let mut bits = Vec::with_capacity(ids.len());
        for &id in ids {
            let frag = self.fragment_of(id)?;
            let local = self.local_indices(frag, &[id]);
            let state = &mut self.fragments[frag].as_mut().expect("live").state;
            bits.push(state.measure(&local, basis, rng)?[0]);
        }
        Ok(bits)
    }

    pub fn measure_bell<R: Rng>(
        &mut self,
        a: QubitRef,
        b: QubitRef,
        rng: &mut R,
    ) -> Result<BellKind, RegisterError> {
        let frag = self.unify(&[a, b])?;
        let local = self.local_indices(frag, &[a, b]);
        let state = &mut self.fragments[frag].as_mut().expect("live").state;
        Ok(state.measure_bell(local[0], local[1], rng)?)
    }

    /// Probability of projecting `(a, b)` onto the given Bell state.
    pub fn bell_overlap(
        &mut self,
        a: QubitRef,
        b: QubitRef,
        kind: BellKind,
    ) -> Result<f64, RegisterError> {
        let frag = self.unify(&[a, b])?;
        let local = self.local_indices(frag, &[a, b]);
        let state = &self.fragments[frag].as_ref().expect("live").state;
        Ok(state.bell_overlap(local[0], local[1], kind)?)
    }

    pub fn prob_one(&mut self, id: QubitRef) -> Result<f64, RegisterError> {
        let frag = self.fragment_of(id)?;
        let local = self.local_indices(frag, &[id]);
        let state = &self.fragments[frag].as_ref().expect("live").state;
        Ok(state.prob_one(local[0])?)
    }

    /// Number of live qubits, for capacity diagnostics.
    pub fn len(&self) -> usize {
        self.locate.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locate.is_empty()
    }
}
