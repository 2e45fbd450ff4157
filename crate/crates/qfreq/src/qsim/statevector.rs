//! Exact statevector tier for tiny instances: dense complex amplitudes, a few
//! gates, a direct inverse DFT for phase estimation, and the stream oracle as
//! a permutation unitary.

use num_complex::Complex64;
use rand::Rng;

use super::ledger::ResourceLedger;
use super::QsimError;
use crate::stream::Stream;

pub const MAX_QUBITS: u32 = 22;

const NORM_TOLERANCE: f64 = 1e-10;

/// A unit-norm complex amplitude vector over `qubits` qubits. Basis states are
/// indexed little-endian: qubit q is bit q of the index.
#[derive(Debug, Clone)]
pub struct Statevector {
    amps: Vec<Complex64>,
    qubits: u32,
}

impl Statevector {
    /// |basis⟩ on `qubits` qubits.
    pub fn basis(qubits: u32, basis: usize) -> Result<Self, QsimError> {
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits { qubits });
        }
        let len = 1usize << qubits;
        if basis >= len {
            return Err(QsimError::BasisOutOfRange { basis, len });
        }
        let mut amps = vec![Complex64::ZERO; len];
        amps[basis] = Complex64::ONE;
        Ok(Statevector { amps, qubits })
    }

    /// Uniform superposition over all basis states.
    pub fn uniform(qubits: u32) -> Result<Self, QsimError> {
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits { qubits });
        }
        let len = 1usize << qubits;
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        Ok(Statevector {
            amps: vec![a; len],
            qubits,
        })
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        let len = amps.len();
        if !len.is_power_of_two() || len == 0 {
            return Err(QsimError::NotPowerOfTwo { len });
        }
        let qubits = len.trailing_zeros();
        if qubits > MAX_QUBITS {
            return Err(QsimError::TooManyQubits { qubits });
        }
        let sv = Statevector { amps, qubits };
        let norm = sv.norm_sq();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(QsimError::NotNormalized { norm });
        }
        Ok(sv)
    }

    pub fn qubits(&self) -> u32 {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sq(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a 2×2 unitary to `target`.
    pub fn apply_single(&mut self, target: u32, u: [[Complex64; 2]; 2]) {
        let mask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    /// Applies a 2×2 unitary to `target`, controlled on `control` being 1.
    pub fn apply_controlled(&mut self, control: u32, target: u32, u: [[Complex64; 2]; 2]) {
        assert_ne!(control, target);
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        for i in 0..self.amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                let j = i | tmask;
                let (a0, a1) = (self.amps[i], self.amps[j]);
                self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
                self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
            }
        }
    }

    pub fn hadamard(&mut self, target: u32) {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = Complex64::new(s, 0.0);
        self.apply_single(target, [[h, h], [h, -h]]);
    }

    /// Applies a basis permutation |i⟩ ↦ |f(i)⟩. `f` must be a bijection on
    /// [0, 2^qubits).
    pub fn apply_permutation<F: Fn(usize) -> usize>(&mut self, f: F) {
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for (i, &a) in self.amps.iter().enumerate() {
            let j = f(i);
            debug_assert!(out[j] == Complex64::ZERO, "permutation is not injective");
            out[j] = a;
        }
        self.amps = out;
    }

    /// Exact inverse DFT on the low `r` qubits:
    /// out[y] = M^{-1/2} Σ_x ω^{-xy} in[x] for each block of the high qubits.
    pub fn inverse_dft_low(&mut self, r: u32) {
        let m = 1usize << r;
        let blocks = self.amps.len() / m;
        let scale = 1.0 / (m as f64).sqrt();
        let mut out = vec![Complex64::ZERO; self.amps.len()];
        for b in 0..blocks {
            let base = b * m;
            for y in 0..m {
                let mut acc = Complex64::ZERO;
                for x in 0..m {
                    let phase = -2.0 * std::f64::consts::PI * (x as f64) * (y as f64) / m as f64;
                    acc += self.amps[base + x] * Complex64::from_polar(1.0, phase);
                }
                out[base + y] = acc * scale;
            }
        }
        self.amps = out;
    }

    /// Marginal distribution of the low `r` qubits.
    pub fn low_register_distribution(&self, r: u32) -> Vec<f64> {
        let m = 1usize << r;
        let mut probs = vec![0.0; m];
        for (i, a) in self.amps.iter().enumerate() {
            probs[i % m] += a.norm_sqr();
        }
        probs
    }

    /// Marginal distribution of the high qubits above the low `r`.
    pub fn high_register_distribution(&self, r: u32) -> Vec<f64> {
        let m = 1usize << r;
        let mut probs = vec![0.0; self.amps.len() / m];
        for (i, a) in self.amps.iter().enumerate() {
            probs[i / m] += a.norm_sqr();
        }
        probs
    }

    /// Samples a basis state from the measurement distribution.
    pub fn sample_basis<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let mut u: f64 = rng.random();
        for (i, a) in self.amps.iter().enumerate() {
            u -= a.norm_sqr();
            if u <= 0.0 {
                return i;
            }
        }
        self.amps.len() - 1
    }
}

/// Real rotation by `angle` in the |0⟩,|1⟩ plane.
pub fn rotation(angle: f64) -> [[Complex64; 2]; 2] {
    let c = Complex64::new(angle.cos(), 0.0);
    let s = Complex64::new(angle.sin(), 0.0);
    [[c, -s], [s, c]]
}

/// Classical oracle query: returns a_i and charges one query.
pub fn oracle_query(
    stream: &Stream,
    i: usize,
    ledger: &mut ResourceLedger,
) -> Result<u64, QsimError> {
    if i >= stream.n() {
        return Err(QsimError::OracleIndexOutOfRange { i, n: stream.n() });
    }
    ledger.charge_queries(1);
    Ok(stream.value_at(i))
}

/// The additive stream oracle on a statevector: |i⟩|x⟩ ↦ |i⟩|x + a_i mod 2^value_qubits⟩
/// for i < n, identity on padding indices. Charges one query. `inverse` applies
/// the adjoint (subtraction).
pub fn apply_stream_oracle(
    state: &mut Statevector,
    stream: &Stream,
    index_qubits: u32,
    value_qubits: u32,
    inverse: bool,
    ledger: &mut ResourceLedger,
) -> Result<(), QsimError> {
    if index_qubits + value_qubits != state.qubits() {
        return Err(QsimError::RegisterMismatch {
            expected: index_qubits + value_qubits,
            actual: state.qubits(),
        });
    }
    if stream.n() > 1usize << index_qubits {
        return Err(QsimError::RegisterMismatch {
            expected: index_qubits,
            actual: stream.n() as u32,
        });
    }
    let modulus = 1u64 << value_qubits;
    if stream.universe() >= modulus {
        return Err(QsimError::ValueRegisterTooSmall {
            universe: stream.universe(),
            modulus,
        });
    }
    let imask = (1usize << index_qubits) - 1;
    ledger.charge_queries(1);
    state.apply_permutation(|basis| {
        let i = basis & imask;
        if i >= stream.n() {
            return basis;
        }
        let x = (basis >> index_qubits) as u64;
        let a = stream.value_at(i);
        let new_x = if inverse {
            (x + modulus - a % modulus) % modulus
        } else {
            (x + a) % modulus
        };
        i | ((new_x as usize) << index_qubits)
    });
    Ok(())
}

/// XOR variant of the oracle: |i⟩|x⟩ ↦ |i⟩|x ⊕ a_i⟩. Self-inverse, so two
/// applications are the identity permutation exactly.
pub fn apply_stream_xor_oracle(
    state: &mut Statevector,
    stream: &Stream,
    index_qubits: u32,
    value_qubits: u32,
    ledger: &mut ResourceLedger,
) -> Result<(), QsimError> {
    if index_qubits + value_qubits != state.qubits() {
        return Err(QsimError::RegisterMismatch {
            expected: index_qubits + value_qubits,
            actual: state.qubits(),
        });
    }
    let modulus = 1u64 << value_qubits;
    if stream.universe() >= modulus {
        return Err(QsimError::ValueRegisterTooSmall {
            universe: stream.universe(),
            modulus,
        });
    }
    let imask = (1usize << index_qubits) - 1;
    ledger.charge_queries(1);
    state.apply_permutation(|basis| {
        let i = basis & imask;
        if i >= stream.n() {
            return basis;
        }
        let x = (basis >> index_qubits) as u64;
        i | (((x ^ stream.value_at(i)) as usize) << index_qubits)
    });
    Ok(())
}

/// Phase variant of the oracle: |i⟩|x⟩ ↦ ω^{a_i·x}|i⟩|x⟩ with ω = e^{2πi/2^value_qubits}.
pub fn apply_stream_phase_oracle(
    state: &mut Statevector,
    stream: &Stream,
    index_qubits: u32,
    value_qubits: u32,
    ledger: &mut ResourceLedger,
) -> Result<(), QsimError> {
    if index_qubits + value_qubits != state.qubits() {
        return Err(QsimError::RegisterMismatch {
            expected: index_qubits + value_qubits,
            actual: state.qubits(),
        });
    }
    let modulus = 1u64 << value_qubits;
    let imask = (1usize << index_qubits) - 1;
    ledger.charge_queries(1);
    let amps: Vec<Complex64> = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(basis, &a)| {
            let i = basis & imask;
            if i >= stream.n() {
                return a;
            }
            let x = (basis >> index_qubits) as u64;
            let phase = 2.0 * std::f64::consts::PI * (stream.value_at(i) * x % modulus) as f64
                / modulus as f64;
            a * Complex64::from_polar(1.0, phase)
        })
        .collect();
    *state = Statevector::from_amplitudes(amps).expect("phase oracle preserves norm");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gates_preserve_norm() {
        let mut sv = Statevector::basis(3, 0).unwrap();
        sv.hadamard(0);
        sv.hadamard(2);
        sv.apply_controlled(0, 1, rotation(0.7));
        sv.apply_single(2, rotation(1.3));
        assert!((sv.norm_sq() - 1.0).abs() < 1e-10);
        sv.inverse_dft_low(2);
        assert!((sv.norm_sq() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn oracle_classical_example() {
        let stream = Stream::new(vec![4, 2], 4).unwrap();
        let mut ledger = ResourceLedger::new();
        assert_eq!(oracle_query(&stream, 0, &mut ledger).unwrap(), 4);
        assert_eq!(ledger.oracle_queries(), 1);
        assert!(oracle_query(&stream, 2, &mut ledger).is_err());
    }

    #[test]
    fn xor_oracle_measures_value_distribution() {
        // uniform over i, apply oracle, measure value register: the value
        // distribution must equal the empirical distribution of stream values
        let stream = Stream::new(vec![1, 3, 3, 2], 7).unwrap();
        let (qi, qv) = (2u32, 3u32);
        let mut sv = Statevector::basis(qi + qv, 0).unwrap();
        for q in 0..qi {
            sv.hadamard(q);
        }
        let mut ledger = ResourceLedger::new();
        apply_stream_oracle(&mut sv, &stream, qi, qv, false, &mut ledger).unwrap();
        let probs = sv.high_register_distribution(qi);
        let fv = crate::stream::frequency_vector(&stream);
        for x in 0..1u64 << qv {
            let expected = fv.counts().get(&x).copied().unwrap_or(0) as f64 / stream.n() as f64;
            assert!(
                (probs[x as usize] - expected).abs() < 1e-10,
                "value {x}: got {} want {expected}",
                probs[x as usize]
            );
        }
        assert_eq!(ledger.oracle_queries(), 1);
    }

    #[test]
    fn oracle_pairs_with_its_inverse() {
        let stream = Stream::new(vec![5, 1, 2, 7], 7).unwrap();
        let (qi, qv) = (2u32, 3u32);
        let mut sv = Statevector::basis(qi + qv, 0).unwrap();
        for q in 0..(qi + qv) {
            sv.hadamard(q);
            sv.apply_single(q, rotation(0.3 * (q as f64 + 1.0)));
        }
        let before = sv.amplitudes().to_vec();
        let mut ledger = ResourceLedger::new();
        apply_stream_oracle(&mut sv, &stream, qi, qv, false, &mut ledger).unwrap();
        apply_stream_oracle(&mut sv, &stream, qi, qv, true, &mut ledger).unwrap();
        for (a, b) in before.iter().zip(sv.amplitudes()) {
            assert!((a - b).norm() < 1e-10);
        }
        assert_eq!(ledger.oracle_queries(), 2);
    }

    #[test]
    fn xor_oracle_is_an_involution() {
        // exact permutation check: applying the XOR oracle twice is the identity
        let stream = Stream::new(vec![5, 1, 2, 7], 7).unwrap();
        let (qi, qv) = (2u32, 3u32);
        let mut sv = Statevector::basis(qi + qv, 0).unwrap();
        for q in 0..(qi + qv) {
            sv.hadamard(q);
            sv.apply_single(q, rotation(0.4 * (q as f64 + 1.0)));
        }
        let before = sv.amplitudes().to_vec();
        let mut ledger = ResourceLedger::new();
        apply_stream_xor_oracle(&mut sv, &stream, qi, qv, &mut ledger).unwrap();
        apply_stream_xor_oracle(&mut sv, &stream, qi, qv, &mut ledger).unwrap();
        for (a, b) in before.iter().zip(sv.amplitudes()) {
            assert_eq!(a, b, "XOR oracle twice must be the exact identity");
        }
    }

    #[test]
    fn phase_oracle_preserves_norm() {
        let stream = Stream::new(vec![1, 2], 3).unwrap();
        let mut sv = Statevector::basis(3, 0).unwrap();
        for q in 0..3 {
            sv.hadamard(q);
        }
        let mut ledger = ResourceLedger::new();
        apply_stream_phase_oracle(&mut sv, &stream, 1, 2, &mut ledger).unwrap();
        assert!((sv.norm_sq() - 1.0).abs() < 1e-10);
    }
}
