use num_complex::Complex64;

use super::circuit::Gate;

/// Dense `2^n` amplitude vector; bit `q` of a basis index is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

/// Single-qubit Pauli used for noise insertion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

impl Statevector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Self {
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { n_qubits, amps }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(Complex64::norm_sqr).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(Complex64::norm_sqr).collect()
    }

    /// `sum_z |psi_z|^2 diag[z]`
    pub fn diagonal_expectation(&self, diag: &[f64]) -> f64 {
        self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum()
    }

    pub fn copy_from(&mut self, other: &Statevector) {
        self.amps.copy_from_slice(&other.amps);
    }

    /// Calls `f` on every amplitude pair differing only in bit `q`,
    /// `(bit clear, bit set)`.
    fn pairs(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let m = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * m) {
            let (lo, hi) = block.split_at_mut(m);
            for (a, b) in lo.iter_mut().zip(hi) {
                f(a, b);
            }
        }
    }

    /// Calls `f` on the bit-clear and bit-set halves of every block for bit `q`.
    fn halves(&mut self, q: usize, mut f: impl FnMut(&mut [Complex64], &mut [Complex64])) {
        let m = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * m) {
            let (lo, hi) = block.split_at_mut(m);
            f(lo, hi);
        }
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        self.pairs(q, |a, b| {
            let (x, y) = (*a, *b);
            *a = m[0][0] * x + m[0][1] * y;
            *b = m[1][0] * x + m[1][1] * y;
        });
    }

    pub fn apply(&mut self, gate: &Gate) {
        match *gate {
            Gate::H(q) => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                self.pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * s;
                    *b = (x - y) * s;
                });
            }
            Gate::Rx(q, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                let c = Complex64::new(c, 0.0);
                let ms = Complex64::new(0.0, -s);
                self.apply_1q(q, [[c, ms], [ms, c]]);
            }
            Gate::Ry(q, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                let c = Complex64::new(c, 0.0);
                let s = Complex64::new(s, 0.0);
                self.apply_1q(q, [[c, -s], [s, c]]);
            }
            Gate::Rz(q, t) => {
                let lo_phase = Complex64::from_polar(1.0, -t / 2.0);
                let hi_phase = lo_phase.conj();
                self.halves(q, |lo, hi| {
                    lo.iter_mut().for_each(|a| *a *= lo_phase);
                    hi.iter_mut().for_each(|a| *a *= hi_phase);
                });
            }
            Gate::Cx(c, t) => {
                let cm = 1usize << c;
                if c > t {
                    // The control bit is constant across each target block.
                    let tm = 1usize << t;
                    for (k, block) in self.amps.chunks_exact_mut(2 * tm).enumerate() {
                        if (k * 2 * tm) & cm != 0 {
                            let (lo, hi) = block.split_at_mut(tm);
                            lo.swap_with_slice(hi);
                        }
                    }
                } else {
                    self.halves(t, |lo, hi| {
                        for (l, h) in lo.chunks_exact_mut(2 * cm).zip(hi.chunks_exact_mut(2 * cm)) {
                            l[cm..].swap_with_slice(&mut h[cm..]);
                        }
                    });
                }
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        match p {
            Pauli::I => {}
            Pauli::X => self.halves(q, |lo, hi| lo.swap_with_slice(hi)),
            Pauli::Y => {
                // Y|0> = i|1>, Y|1> = -i|0>
                let pi = Complex64::new(0.0, 1.0);
                self.pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = -pi * y;
                    *b = pi * x;
                });
            }
            Pauli::Z => self.halves(q, |_, hi| hi.iter_mut().for_each(|a| *a = -*a)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_on_zero() {
        let mut s = Statevector::zero(1);
        s.apply(&Gate::H(0));
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cx_flips_target_when_control_set() {
        let mut s = Statevector::zero(2);
        s.apply(&Gate::Rx(0, std::f64::consts::PI));
        s.apply(&Gate::Cx(0, 1));
        assert!((s.probabilities()[0b11] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cx_matches_bitwise_definition() {
        let mut base = Statevector::zero(4);
        for (q, t) in [(0, 0.3), (1, 1.1), (2, -0.7), (3, 2.0)] {
            base.apply(&Gate::Ry(q, t));
            base.apply(&Gate::Rz(q, t * 0.5));
        }
        for (c, t) in [(0, 1), (1, 0), (0, 3), (3, 1), (2, 3), (3, 2)] {
            let mut s = base.clone();
            s.apply(&Gate::Cx(c, t));
            for i in 0..16usize {
                let src = if i >> c & 1 == 1 { i ^ (1 << t) } else { i };
                assert_eq!(s.amplitudes()[i], base.amplitudes()[src], "cx({c},{t}) index {i}");
            }
        }
    }

    #[test]
    fn pauli_y_squares_to_identity() {
        let mut s = Statevector::zero(2);
        s.apply(&Gate::H(0));
        s.apply(&Gate::Ry(1, 0.7));
        let before = s.clone();
        s.apply_pauli(1, Pauli::Y);
        s.apply_pauli(1, Pauli::Y);
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn rotation_then_inverse_is_identity() {
        let mut s = Statevector::zero(3);
        for g in [Gate::H(0), Gate::H(2), Gate::Cx(0, 1)] {
            s.apply(&g);
        }
        let before = s.clone();
        for g in [Gate::Rx(1, 0.4), Gate::Ry(2, -1.1), Gate::Rz(0, 2.2)] {
            s.apply(&g);
            s.apply(&g.inverse());
        }
        for (a, b) in s.amplitudes().iter().zip(before.amplitudes()) {
            assert!((a - b).norm() < 1e-14);
        }
    }
}
