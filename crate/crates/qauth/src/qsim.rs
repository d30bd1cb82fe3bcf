//! Minimal pure-state quantum simulator.
//!
//! Dense state vectors over up to [`MAX_QUBITS`] qubits, a small gate set
//! (X, Z, H, Ry, CNOT), Bell-pair preparation, and projective measurement
//! in the computational, rotated, or diagonal basis. Qubit `q` occupies
//! bit `q` of the amplitude index (qubit 0 is the least significant bit).
//!
//! Conventions:
//! - `Ry(t)|0> = cos(t/2)|0> + sin(t/2)|1>`. Protocol key angles live in
//!   `[0, pi)` and are doubled at gate application, so the full key range
//!   maps to distinguishable states.
//! - `Rotated(theta)` measures in the basis
//!   `{cos(theta)|0> + sin(theta)|1>, -sin(theta)|0> + cos(theta)|1>}`,
//!   i.e. the frame reached by the gate `Ry(2*theta)`. `Diagonal` is
//!   `Rotated(pi/4)`.

use num_complex::Complex64;
use rand::Rng;
use thiserror::Error;

/// Desk-scale cap on register width.
pub const MAX_QUBITS: usize = 24;

/// Probabilities below this are treated as zero during collapse.
const PROB_FLOOR: f64 = 1e-12;

pub type Amplitude = Complex64;

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("register size {0} outside the supported range 1..={MAX_QUBITS}")]
    InvalidSize(usize),
    #[error("qubit index {index} out of range for a {num_qubits}-qubit register")]
    IndexOutOfRange { index: usize, num_qubits: usize },
    #[error("duplicate qubit index {0}")]
    DuplicateTarget(usize),
    #[error("{gate} expects {expected} distinct target(s), got {got}")]
    TargetArity {
        gate: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("control and target of CNOT must differ")]
    ControlEqualsTarget,
    #[error("qubits {0} and {1} must both be |0> to prepare a fresh pair")]
    PairNotFresh(usize, usize),
}

/// One gate from the protocol gate set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateSpec {
    X,
    Z,
    H,
    /// Rotation about Y by the given angle (half-angle convention, see
    /// the module docs).
    Ry(f64),
    /// Targets are `[control, target]`.
    Cnot,
}

/// The four Bell states. `PsiMinus` is the singlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellKind {
    pub const ALL: [BellKind; 4] = [
        BellKind::PhiPlus,
        BellKind::PhiMinus,
        BellKind::PsiPlus,
        BellKind::PsiMinus,
    ];

    /// Amplitudes on |00>, |01>, |10>, |11> (first qubit = low bit).
    pub fn amplitudes(self) -> [Complex64; 4] {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        match self {
            BellKind::PhiPlus => [h, z, z, h],
            BellKind::PhiMinus => [h, z, z, -h],
            BellKind::PsiPlus => [z, h, h, z],
            BellKind::PsiMinus => [z, h, -h, z],
        }
    }
}

/// Measurement basis for single qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisSpec {
    Computational,
    Rotated(f64),
    Diagonal,
}

impl BasisSpec {
    /// Frame angle: the `Ry` gate angle that maps the computational basis
    /// onto this one. `None` for the computational basis itself.
    fn frame_gate_angle(self) -> Option<f64> {
        match self {
            BasisSpec::Computational => None,
            BasisSpec::Rotated(theta) => Some(2.0 * theta),
            BasisSpec::Diagonal => Some(std::f64::consts::FRAC_PI_2),
        }
    }
}

/// A normalized pure state over `num_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n` qubits.
    pub fn new_register(n: usize) -> Result<Self, SimError> {
        if n == 0 || n > MAX_QUBITS {
            return Err(SimError::InvalidSize(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { num_qubits: n, amps })
    }

    /// Build from raw amplitudes; used by tests and oracles. The vector is
    /// normalized on construction.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() || len > (1 << MAX_QUBITS) {
            return Err(SimError::InvalidSize(len));
        }
        let n = len.trailing_zeros() as usize;
        let mut sv = StateVector { num_qubits: n, amps };
        let norm = sv.norm();
        if norm <= PROB_FLOOR {
            return Err(SimError::InvalidSize(len));
        }
        for a in &mut sv.amps {
            *a /= norm;
        }
        Ok(sv)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn check_index(&self, q: usize) -> Result<(), SimError> {
        if q >= self.num_qubits {
            return Err(SimError::IndexOutOfRange {
                index: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_distinct(targets: &[usize]) -> Result<(), SimError> {
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(SimError::DuplicateTarget(t));
            }
        }
        Ok(())
    }

    /// Apply a single-qubit unitary given by its 2x2 matrix rows.
    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let mask = 1usize << q;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = self.amps[i];
                let a1 = self.amps[j];
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    fn apply_cnot(&mut self, control: usize, target: usize) {
        let cm = 1usize << control;
        let tm = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cm != 0 && i & tm == 0 {
                self.amps.swap(i, i | tm);
            }
        }
    }

    /// Apply a gate to the given targets (CNOT takes `[control, target]`).
    pub fn apply_gate(&mut self, gate: GateSpec, targets: &[usize]) -> Result<(), SimError> {
        for &t in targets {
            self.check_index(t)?;
        }
        let one_target = |gate: &'static str| -> Result<usize, SimError> {
            if targets.len() != 1 {
                return Err(SimError::TargetArity {
                    gate,
                    expected: 1,
                    got: targets.len(),
                });
            }
            Ok(targets[0])
        };
        let c0 = |x: f64| Complex64::new(x, 0.0);
        match gate {
            GateSpec::X => {
                let q = one_target("X")?;
                self.apply_1q(q, [[c0(0.0), c0(1.0)], [c0(1.0), c0(0.0)]]);
            }
            GateSpec::Z => {
                let q = one_target("Z")?;
                self.apply_1q(q, [[c0(1.0), c0(0.0)], [c0(0.0), c0(-1.0)]]);
            }
            GateSpec::H => {
                let q = one_target("H")?;
                let h = std::f64::consts::FRAC_1_SQRT_2;
                self.apply_1q(q, [[c0(h), c0(h)], [c0(h), c0(-h)]]);
            }
            GateSpec::Ry(t) => {
                let q = one_target("Ry")?;
                let (s, c) = (t / 2.0).sin_cos();
                self.apply_1q(q, [[c0(c), c0(-s)], [c0(s), c0(c)]]);
            }
            GateSpec::Cnot => {
                if targets.len() != 2 {
                    return Err(SimError::TargetArity {
                        gate: "CNOT",
                        expected: 2,
                        got: targets.len(),
                    });
                }
                if targets[0] == targets[1] {
                    return Err(SimError::ControlEqualsTarget);
                }
                self.apply_cnot(targets[0], targets[1]);
            }
        }
        Ok(())
    }

    pub fn x(&mut self, q: usize) -> Result<(), SimError> {
        self.apply_gate(GateSpec::X, &[q])
    }

    pub fn z(&mut self, q: usize) -> Result<(), SimError> {
        self.apply_gate(GateSpec::Z, &[q])
    }

    pub fn h(&mut self, q: usize) -> Result<(), SimError> {
        self.apply_gate(GateSpec::H, &[q])
    }

    pub fn ry(&mut self, q: usize, t: f64) -> Result<(), SimError> {
        self.apply_gate(GateSpec::Ry(t), &[q])
    }

    pub fn cnot(&mut self, control: usize, target: usize) -> Result<(), SimError> {
        self.apply_gate(GateSpec::Cnot, &[control, target])
    }

    /// Probability that qubit `q` reads 1 in the computational basis.
    pub fn prob_one(&self, q: usize) -> Result<f64, SimError> {
        self.check_index(q)?;
        let mask = 1usize << q;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Entangle two fresh qubits into the given Bell state.
    pub fn prepare_pair(&mut self, a: usize, b: usize, kind: BellKind) -> Result<(), SimError> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(SimError::DuplicateTarget(a));
        }
        let support = (1usize << a) | (1usize << b);
        let occupied: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & support != 0)
            .map(|(_, amp)| amp.norm_sqr())
            .sum();
        if occupied > PROB_FLOOR {
            return Err(SimError::PairNotFresh(a, b));
        }
        self.h(a)?;
        self.cnot(a, b)?;
        match kind {
            BellKind::PhiPlus => {}
            BellKind::PhiMinus => self.z(a)?,
            BellKind::PsiPlus => self.x(b)?,
            BellKind::PsiMinus => {
                self.x(b)?;
                self.z(a)?;
            }
        }
        Ok(())
    }

    /// Collapse qubit `q` (computational basis) onto `bit` and renormalize.
    fn project(&mut self, q: usize, bit: bool, prob: f64) {
        let mask = 1usize << q;
        let scale = 1.0 / prob.sqrt();
        for (i, a) in self.amps.iter_mut().enumerate() {
            if ((i & mask != 0) == bit) && prob > 0.0 {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
    }

    fn sample_qubit<R: Rng>(&mut self, q: usize, rng: &mut R) -> bool {
        let mut p1 = self.prob_one(q).expect("index checked");
        if p1 < PROB_FLOOR {
            p1 = 0.0;
        } else if p1 > 1.0 - PROB_FLOOR {
            p1 = 1.0;
        }
        let bit = rng.gen::<f64>() < p1;
        let prob = if bit { p1 } else { 1.0 - p1 };
        self.project(q, bit, prob);
        bit
    }

    /// Measure the targets in the given basis, collapsing the state.
    pub fn measure<R: Rng>(
        &mut self,
        targets: &[usize],
        basis: BasisSpec,
        rng: &mut R,
    ) -> Result<Vec<bool>, SimError> {
        for &t in targets {
            self.check_index(t)?;
        }
        Self::check_distinct(targets)?;
        let frame = basis.frame_gate_angle();
        if let Some(t) = frame {
            for &q in targets {
                self.ry(q, -t)?;
            }
        }
        let bits: Vec<bool> = targets.iter().map(|&q| self.sample_qubit(q, rng)).collect();
        if let Some(t) = frame {
            for &q in targets {
                self.ry(q, t)?;
            }
        }
        Ok(bits)
    }

    /// Bell-basis measurement of the pair `(a, b)`, collapsing it onto the
    /// observed Bell state.
    pub fn measure_bell<R: Rng>(
        &mut self,
        a: usize,
        b: usize,
        rng: &mut R,
    ) -> Result<BellKind, SimError> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(SimError::DuplicateTarget(a));
        }
        // Rotate the Bell basis onto the computational one, sample, rotate back.
        self.cnot(a, b)?;
        self.h(a)?;
        let bit_a = self.sample_qubit(a, rng);
        let bit_b = self.sample_qubit(b, rng);
        self.h(a)?;
        self.cnot(a, b)?;
        Ok(match (bit_a, bit_b) {
            (false, false) => BellKind::PhiPlus,
            (false, true) => BellKind::PsiPlus,
            (true, false) => BellKind::PhiMinus,
            (true, true) => BellKind::PsiMinus,
        })
    }

    /// Probability of projecting the pair `(a, b)` onto the given Bell state.
    ///
    /// Equals 1 exactly when the pair is in that Bell state and unentangled
    /// with the rest of the register.
    pub fn bell_overlap(&self, a: usize, b: usize, kind: BellKind) -> Result<f64, SimError> {
        self.check_index(a)?;
        self.check_index(b)?;
        if a == b {
            return Err(SimError::DuplicateTarget(a));
        }
        let bell = kind.amplitudes();
        let ma = 1usize << a;
        let mb = 1usize << b;
        let mut total = 0.0;
        for rest in 0..self.amps.len() {
            if rest & (ma | mb) != 0 {
                continue;
            }
            let mut overlap = Complex64::new(0.0, 0.0);
            for (pattern, coeff) in bell.iter().enumerate() {
                let mut idx = rest;
                if pattern & 1 != 0 {
                    idx |= ma;
                }
                if pattern & 2 != 0 {
                    idx |= mb;
                }
                overlap += coeff.conj() * self.amps[idx];
            }
            total += overlap.norm_sqr();
        }
        Ok(total)
    }

    /// Tensor product; `other`'s qubits occupy the high bit positions.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector, SimError> {
        let n = self.num_qubits + other.num_qubits;
        if n > MAX_QUBITS {
            return Err(SimError::InvalidSize(n));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (hi, bh) in other.amps.iter().enumerate() {
            if bh.norm_sqr() == 0.0 {
                continue;
            }
            for (lo, bl) in self.amps.iter().enumerate() {
                amps[(hi << self.num_qubits) | lo] = bh * bl;
            }
        }
        Ok(StateVector { num_qubits: n, amps })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::PI;

    const TOL: f64 = 1e-10;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn new_register_is_ground_state() {
        let sv = StateVector::new_register(1).unwrap();
        assert_eq!(sv.amplitudes(), &[c(1.0), c(0.0)]);
        let sv = StateVector::new_register(2).unwrap();
        assert_eq!(sv.amplitudes()[0], c(1.0));
        assert!(sv.amplitudes()[1..].iter().all(|a| a.norm_sqr() == 0.0));
    }

    #[test]
    fn new_register_rejects_bad_sizes() {
        assert_eq!(StateVector::new_register(0), Err(SimError::InvalidSize(0)));
        assert_eq!(
            StateVector::new_register(MAX_QUBITS + 1),
            Err(SimError::InvalidSize(MAX_QUBITS + 1))
        );
    }

    #[test]
    fn hadamard_on_zero() {
        let mut sv = StateVector::new_register(1).unwrap();
        sv.h(0).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sv.amplitudes()[0] - c(h)).norm() < TOL);
        assert!((sv.amplitudes()[1] - c(h)).norm() < TOL);
    }

    #[test]
    fn cnot_truth_table() {
        // |10> (qubit 0 = control, set) -> |11>
        let mut sv = StateVector::new_register(2).unwrap();
        sv.x(0).unwrap();
        sv.cnot(0, 1).unwrap();
        assert!((sv.amplitudes()[3] - c(1.0)).norm() < TOL);
    }

    #[test]
    fn ry_inverse_restores_state() {
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let mut sv = StateVector::new_register(2).unwrap();
            sv.ry(0, rng.gen_range(0.0..PI)).unwrap();
            sv.ry(1, rng.gen_range(0.0..PI)).unwrap();
            sv.cnot(0, 1).unwrap();
            let before = sv.clone();
            let t = rng.gen_range(0.0..2.0 * PI);
            sv.ry(0, t).unwrap();
            sv.ry(0, -t).unwrap();
            for (a, b) in sv.amplitudes().iter().zip(before.amplitudes()) {
                assert!((a - b).norm() < TOL);
            }
        }
    }

    #[test]
    fn gate_errors() {
        let mut sv = StateVector::new_register(2).unwrap();
        assert!(matches!(
            sv.apply_gate(GateSpec::X, &[2]),
            Err(SimError::IndexOutOfRange { .. })
        ));
        assert_eq!(sv.cnot(1, 1), Err(SimError::ControlEqualsTarget));
        assert!(matches!(
            sv.apply_gate(GateSpec::Cnot, &[0]),
            Err(SimError::TargetArity { .. })
        ));
    }

    #[test]
    fn bell_pair_amplitudes() {
        let mut sv = StateVector::new_register(2).unwrap();
        sv.prepare_pair(0, 1, BellKind::PhiPlus).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((sv.amplitudes()[0] - c(h)).norm() < TOL);
        assert!((sv.amplitudes()[3] - c(h)).norm() < TOL);
    }

    #[test]
    fn prepare_pair_requires_fresh_qubits() {
        let mut sv = StateVector::new_register(2).unwrap();
        sv.x(0).unwrap();
        assert_eq!(
            sv.prepare_pair(0, 1, BellKind::PhiPlus),
            Err(SimError::PairNotFresh(0, 1))
        );
    }

    #[test]
    fn singlet_anticorrelates_in_computational_basis() {
        let mut rng = rng_from_seed(9);
        for _ in 0..200 {
            let mut sv = StateVector::new_register(2).unwrap();
            sv.prepare_pair(0, 1, BellKind::PsiMinus).unwrap();
            let bits = sv.measure(&[0, 1], BasisSpec::Computational, &mut rng).unwrap();
            assert_ne!(bits[0], bits[1]);
        }
    }

    #[test]
    fn singlet_anticorrelates_in_every_rotated_basis() {
        let mut rng = rng_from_seed(10);
        for step in 0..64 {
            let theta = step as f64 * PI / 64.0;
            for _ in 0..10 {
                let mut sv = StateVector::new_register(2).unwrap();
                sv.prepare_pair(0, 1, BellKind::PsiMinus).unwrap();
                let bits = sv.measure(&[0, 1], BasisSpec::Rotated(theta), &mut rng).unwrap();
                assert_ne!(bits[0], bits[1], "theta = {theta}");
            }
        }
    }

    #[test]
    fn rotated_measurement_born_probability() {
        // |0> in Rotated(pi/6): P(0) = cos^2(pi/6) = 0.75.
        let mut sv = StateVector::new_register(1).unwrap();
        sv.ry(0, -2.0 * (PI / 6.0)).unwrap();
        let p0 = 1.0 - sv.prob_one(0).unwrap();
        assert!((p0 - 0.75).abs() < TOL);
    }

    #[test]
    fn hadamard_measurement_statistics() {
        let mut rng = rng_from_seed(11);
        let trials = 10_000;
        let mut ones = 0u32;
        for _ in 0..trials {
            let mut sv = StateVector::new_register(1).unwrap();
            sv.h(0).unwrap();
            if sv.measure(&[0], BasisSpec::Computational, &mut rng).unwrap()[0] {
                ones += 1;
            }
        }
        let freq = ones as f64 / trials as f64;
        assert!((0.47..=0.53).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn measure_bell_eigenstate() {
        let mut rng = rng_from_seed(12);
        for kind in BellKind::ALL {
            let mut sv = StateVector::new_register(2).unwrap();
            sv.prepare_pair(0, 1, kind).unwrap();
            assert_eq!(sv.measure_bell(0, 1, &mut rng).unwrap(), kind);
            assert!((sv.bell_overlap(0, 1, kind).unwrap() - 1.0).abs() < TOL);
        }
    }

    #[test]
    fn measure_bell_on_product_state() {
        // |00> = (PhiPlus + PhiMinus)/sqrt(2)
        let mut rng = rng_from_seed(13);
        let mut plus = 0u32;
        let trials = 4000;
        for _ in 0..trials {
            let mut sv = StateVector::new_register(2).unwrap();
            match sv.measure_bell(0, 1, &mut rng).unwrap() {
                BellKind::PhiPlus => plus += 1,
                BellKind::PhiMinus => {}
                other => panic!("impossible outcome {other:?}"),
            }
        }
        let freq = plus as f64 / trials as f64;
        assert!((0.45..=0.55).contains(&freq), "freq = {freq}");
    }

    #[test]
    fn diagonal_equals_rotated_quarter_pi() {
        let mut a = StateVector::new_register(1).unwrap();
        let mut b = StateVector::new_register(1).unwrap();
        a.ry(0, 0.7).unwrap();
        b.ry(0, 0.7).unwrap();
        let mut ra = rng_from_seed(3);
        let mut rb = rng_from_seed(3);
        let xa = a.measure(&[0], BasisSpec::Diagonal, &mut ra).unwrap();
        let xb = b.measure(&[0], BasisSpec::Rotated(PI / 4.0), &mut rb).unwrap();
        assert_eq!(xa, xb);
        assert_eq!(a, b);
    }

    #[test]
    fn determinism_under_seed() {
        let run = |seed| {
            let mut rng = rng_from_seed(seed);
            let mut sv = StateVector::new_register(3).unwrap();
            sv.h(0).unwrap();
            sv.cnot(0, 1).unwrap();
            sv.ry(2, 1.1).unwrap();
            let mut out = Vec::new();
            for _ in 0..16 {
                out.extend(sv.clone().measure(&[0, 1, 2], BasisSpec::Computational, &mut rng).unwrap());
            }
            out
        };
        assert_eq!(run(77), run(77));
    }

    fn random_state(n: usize, seed: u64) -> StateVector {
        let mut rng = rng_from_seed(seed);
        let amps: Vec<Complex64> = (0..1usize << n)
            .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
            .collect();
        StateVector::from_amplitudes(amps).unwrap()
    }

    proptest! {
        #[test]
        fn norm_preserved_by_gate_sequences(seed in 0u64..1000, ops in proptest::collection::vec((0usize..5, 0usize..3, 0.0f64..std::f64::consts::TAU), 1..40)) {
            let mut sv = random_state(3, seed);
            for (g, q, t) in ops {
                match g {
                    0 => sv.x(q).unwrap(),
                    1 => sv.z(q).unwrap(),
                    2 => sv.h(q).unwrap(),
                    3 => sv.ry(q, t).unwrap(),
                    _ => sv.cnot(q, (q + 1) % 3).unwrap(),
                }
                prop_assert!((sv.norm() - 1.0).abs() < TOL);
            }
        }

        #[test]
        fn gates_have_exact_inverses(seed in 0u64..1000, q in 0usize..3, t in 0.0f64..std::f64::consts::TAU) {
            let orig = random_state(3, seed);
            for round in 0..4 {
                let mut sv = orig.clone();
                match round {
                    0 => { sv.x(q).unwrap(); sv.x(q).unwrap(); }
                    1 => { sv.h(q).unwrap(); sv.h(q).unwrap(); }
                    2 => { sv.ry(q, t).unwrap(); sv.ry(q, -t).unwrap(); }
                    _ => { sv.cnot(q, (q + 1) % 3).unwrap(); sv.cnot(q, (q + 1) % 3).unwrap(); }
                }
                for (a, b) in sv.amplitudes().iter().zip(orig.amplitudes()) {
                    prop_assert!((a - b).norm() < TOL);
                }
            }
        }
    }
}
