//! Independent oracles shared by the integration tests: a dense `2^N`
//! state-vector simulator and tanh-sinh quadrature.

#![allow(dead_code)]

use bec_metrology::spin::DickeState;
use num_complex::Complex64 as C64;

/// `N`-qubit state vector; bit `j` of the index is 0 when qubit `j` is in
/// the upper level `|1⟩` of the two-mode picture (σ_z = +1).
#[derive(Debug, Clone)]
pub struct Dense {
    pub n: usize,
    pub amps: Vec<C64>,
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (1..=k).map(|j| ((n - k + j) as f64 / j as f64).ln()).sum()
}

impl Dense {
    pub fn product(n: usize, c1: f64, c2: f64) -> Self {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for _ in 0..n {
            let mut next = vec![C64::new(0.0, 0.0); amps.len() * 2];
            for (i, a) in amps.iter().enumerate() {
                next[i] = a * c1;
                next[i + amps.len()] = a * c2;
            }
            amps = next;
        }
        Self { n, amps }
    }

    pub fn from_dicke(s: &DickeState) -> Self {
        let n = s.n_atoms();
        let amps = (0..1usize << n)
            .map(|b| {
                let up = n - b.count_ones() as usize;
                s.amplitudes()[up] * (-0.5 * ln_binomial(n, up)).exp()
            })
            .collect();
        Self { n, amps }
    }

    /// Projection onto the symmetric subspace in the Dicke labelling
    /// `k = number of qubits up`.
    pub fn to_dicke_amplitudes(&self) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n + 1];
        for (b, a) in self.amps.iter().enumerate() {
            let up = self.n - b.count_ones() as usize;
            out[up] += a * (-0.5 * ln_binomial(self.n, up)).exp();
        }
        out
    }

    fn apply_single(&mut self, q: usize, m: [[C64; 2]; 2]) {
        let bit = 1usize << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// `⊗_j exp(−iθσ_a/2)`, which equals `exp(−iθJ_a)`.
    pub fn rotate(&mut self, axis: char, theta: f64) {
        let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
        let z = C64::new(0.0, 0.0);
        let m = match axis {
            'x' => [[C64::new(c, 0.0), C64::new(0.0, -s)], [C64::new(0.0, -s), C64::new(c, 0.0)]],
            'y' => [[C64::new(c, 0.0), C64::new(-s, 0.0)], [C64::new(s, 0.0), C64::new(c, 0.0)]],
            _ => [[C64::new(c, -s), z], [z, C64::new(c, s)]],
        };
        for q in 0..self.n {
            self.apply_single(q, m);
        }
    }

    pub fn jz(&self, b: usize) -> f64 {
        0.5 * (self.n as f64 - 2.0 * b.count_ones() as f64)
    }

    /// `exp(−iφ f(J_z))` for a function of the collective `J_z`.
    pub fn phase<F: Fn(f64) -> f64>(&mut self, phi: f64, f: F) {
        for b in 0..self.amps.len() {
            let m = self.jz(b);
            self.amps[b] *= C64::from_polar(1.0, -phi * f(m));
        }
    }

    /// `J_a|ψ⟩ = Σ_j σ_a^{(j)}/2 |ψ⟩`.
    pub fn apply_j(&self, axis: char) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for q in 0..self.n {
            let bit = 1usize << q;
            for i in 0..self.amps.len() {
                let a = self.amps[i];
                let up = i & bit == 0;
                match axis {
                    'x' => out[i ^ bit] += 0.5 * a,
                    'y' => {
                        // σ_y|up⟩ = i|down⟩, σ_y|down⟩ = −i|up⟩
                        let f = if up { C64::new(0.0, 0.5) } else { C64::new(0.0, -0.5) };
                        out[i ^ bit] += f * a;
                    }
                    _ => out[i] += if up { 0.5 * a } else { -0.5 * a },
                }
            }
        }
        out
    }

    pub fn moments(&self, axis: char) -> (f64, f64) {
        let j = self.apply_j(axis);
        let mean: f64 = self.amps.iter().zip(&j).map(|(a, b)| (a.conj() * b).re).sum();
        let second: f64 = j.iter().map(|v| v.norm_sqr()).sum();
        (mean, second - mean * mean)
    }

    /// `Tr ρ₁²` of the first qubit.
    pub fn purity(&self) -> f64 {
        let mut rho = [[C64::new(0.0, 0.0); 2]; 2];
        for i in 0..self.amps.len() / 2 {
            let v = [self.amps[2 * i], self.amps[2 * i + 1]];
            for a in 0..2 {
                for b in 0..2 {
                    rho[a][b] += v[a] * v[b].conj();
                }
            }
        }
        (0..2).flat_map(|a| (0..2).map(move |b| (a, b))).map(|(a, b)| (rho[a][b] * rho[b][a]).re).sum()
    }
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Tanh-sinh quadrature of `∫₀¹ f(u, 1−u) du`; the complement is passed
/// separately so integrands singular at `u = 1` keep full precision.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F, tol: f64) -> f64 {
    let half_pi = std::f64::consts::FRAC_PI_2;
    let node = |t: f64| {
        let s = half_pi * t.sinh();
        let c = s.cosh();
        // u = (1 + tanh s)/2, 1 − u = 1/(1 + e^{2s})
        let comp = 1.0 / (1.0 + (2.0 * s).exp());
        let u = 1.0 / (1.0 + (-2.0 * s).exp());
        let w = 0.5 * half_pi * t.cosh() / (c * c);
        (u, comp, w)
    };
    let sum_level = |h: f64, odd_only: bool| {
        let mut acc = 0.0;
        let mut k = if odd_only { 1 } else { 0 };
        loop {
            let t = k as f64 * h;
            let mut term = 0.0;
            for sign in [1.0, -1.0] {
                if k == 0 && sign < 0.0 {
                    continue;
                }
                let (u, comp, w) = node(sign * t);
                if u > 0.0 && comp > 0.0 && w > 0.0 {
                    term += w * f(u, comp);
                }
            }
            acc += term;
            if t > 6.5 {
                break;
            }
            k += if odd_only { 2 } else { 1 };
        }
        acc
    };
    let mut h = 0.5;
    let mut sum = sum_level(h, false);
    let mut estimate = h * sum;
    for _ in 0..12 {
        h *= 0.5;
        sum += sum_level(h, true);
        let next = h * sum;
        if (next - estimate).abs() < tol * next.abs().max(1e-300) {
            return next;
        }
        estimate = next;
    }
    estimate
}
