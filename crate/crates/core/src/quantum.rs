//! Truncated-basis quantum oscillator driven by the pulse.
//!
//! Basis |n⟩, n = 0…N−1, with energies n + ½ in units of ħω₀. Lengths are in
//! L = √(ħ/mω₀), momenta in ħ/L, the vector potential in √(ħmω₀)/q, so the
//! coupling reads
//!
//! ```text
//! H′ = −½cos θ_p (A P + P A) + ½ A²
//! ```
//!
//! where A is the scalar amplitude of the pulse potential along ε_p, a matrix
//! function of X through the multipole factors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::model::HBAR;
use crate::pulse::PulseParams;

/// Norm drift above this aborts a propagation.
pub const NORM_DRIFT_LIMIT: f64 = 1e-4;

/// Default steps per period of the fastest phase in the interaction picture.
pub const STEPS_PER_FAST_PERIOD: f64 = 10.0;

pub type OperatorMatrix = DMatrix<C64>;

const ZERO: C64 = C64::new(0.0, 0.0);

fn check_size(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("basis size must be at least 2, got {n}")));
    }
    Ok(())
}

/// X = (a + a†)/√2 in units of L.
pub fn scaled_position(n: usize) -> Result<OperatorMatrix> {
    check_size(n)?;
    let mut x = DMatrix::from_element(n, n, ZERO);
    for k in 1..n {
        let r = C64::new((k as f64 / 2.0).sqrt(), 0.0);
        x[(k, k - 1)] = r;
        x[(k - 1, k)] = r;
    }
    Ok(x)
}

/// P = i(a† − a)/√2 in units of ħ/L.
pub fn scaled_momentum(n: usize) -> Result<OperatorMatrix> {
    check_size(n)?;
    let mut p = DMatrix::from_element(n, n, ZERO);
    for k in 1..n {
        let r = (k as f64 / 2.0).sqrt();
        p[(k, k - 1)] = C64::new(0.0, r);
        p[(k - 1, k)] = C64::new(0.0, -r);
    }
    Ok(p)
}

/// ⟨n|x̂|m⟩ in metres.
pub fn position_matrix(n: usize, mass: f64, omega0: f64) -> Result<OperatorMatrix> {
    Ok(scaled_position(n)? * C64::new((HBAR / (mass * omega0)).sqrt(), 0.0))
}

/// ⟨n|p̂|m⟩ in kg·m/s.
pub fn momentum_matrix(n: usize, mass: f64, omega0: f64) -> Result<OperatorMatrix> {
    Ok(scaled_momentum(n)? * C64::new((HBAR * mass * omega0).sqrt(), 0.0))
}

/// Σ_{k=0}^{order} Mᵏ/k! by Horner's scheme.
pub fn matrix_taylor_exp(m: &OperatorMatrix, order: usize) -> OperatorMatrix {
    let n = m.nrows();
    let id = DMatrix::<C64>::identity(n, n);
    let mut r = id.clone();
    for k in (1..=order).rev() {
        r = &id + (m * r) / C64::new(k as f64, 0.0);
    }
    r
}

/// Multipole factors of the pulse's spatial dependence for the matrix
/// K = k_p·x̂ (dimensionless), |k_p|Δx = `k_delta_x` and s = (t − t₀)/Δt:
/// f₁ = T[e^{iK}], f₂ = T[e^{−(K/|k|Δx)²}], f₃ = T[e^{2(K/|k|Δx)s}], each a
/// Taylor polynomial of degree `order`.
pub fn multipole_factors(
    k_dot_x: &OperatorMatrix,
    k_delta_x: f64,
    s: f64,
    order: usize,
) -> (OperatorMatrix, OperatorMatrix, OperatorMatrix) {
    let u = k_dot_x / C64::new(k_delta_x, 0.0);
    let f1 = matrix_taylor_exp(&(k_dot_x * C64::i()), order);
    let f2 = matrix_taylor_exp(&-(&u * &u), order);
    let f3 = matrix_taylor_exp(&(&u * C64::new(2.0 * s, 0.0)), order);
    (f1, f2, f3)
}

/// Operators shared by every evaluation of H′ for one basis size.
#[derive(Debug, Clone, PartialEq)]
pub struct Operators {
    pub position: OperatorMatrix,
    pub momentum: OperatorMatrix,
    pub expansion_order: usize,
}

impl Operators {
    pub fn new(levels: usize, expansion_order: usize) -> Result<Self> {
        Ok(Self { position: scaled_position(levels)?, momentum: scaled_momentum(levels)?, expansion_order })
    }

    pub fn levels(&self) -> usize {
        self.position.nrows()
    }
}

/// k_p·x̂ as a matrix in the scaled basis.
fn k_dot_x(pulse: &PulseParams, ops: &Operators, size_parameter: f64) -> OperatorMatrix {
    &ops.position * C64::new(pulse.omega * size_parameter * pulse.theta.sin(), 0.0)
}

/// Scalar pulse potential A(X, t) as a Hermitian matrix.
pub fn potential_matrix(pulse: &PulseParams, ops: &Operators, size_parameter: f64, t: f64) -> OperatorMatrix {
    let n = ops.levels();
    if !pulse.is_active(t) {
        return DMatrix::from_element(n, n, ZERO);
    }
    let s = (t - pulse.center) / pulse.width;
    let (f1, f2, f3) = multipole_factors(&k_dot_x(pulse, ops, size_parameter), pulse.k_delta_x(), s, ops.expansion_order);
    let c = C64::from_polar(pulse.amplitude * (-s * s).exp(), -pulse.omega * t);
    let complex = f1 * f2 * f3 * c;
    (&complex + complex.adjoint()) * C64::new(0.5, 0.0)
}

/// Pulse coupling H′(t) in units of ħω₀, symmetrized to be Hermitian.
pub fn hprime_matrix(pulse: &PulseParams, ops: &Operators, size_parameter: f64, t: f64) -> Result<OperatorMatrix> {
    if ops.momentum.nrows() != ops.levels() || !ops.position.is_square() {
        return Err(Error::DimensionMismatch("position and momentum matrices differ in size".into()));
    }
    let a = potential_matrix(pulse, ops, size_parameter, t);
    let p = &ops.momentum;
    let ap = &a * p;
    let pa = p * &a;
    let h = (ap + pa) * C64::new(-0.5 * pulse.theta.cos(), 0.0) + (&a * &a) * C64::new(0.5, 0.0);
    Ok((&h + h.adjoint()) * C64::new(0.5, 0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct QmState {
    /// Interaction-picture coefficients c_n.
    pub coefficients: DVector<C64>,
    /// Scaled time.
    pub time: f64,
}

impl QmState {
    pub fn ground(levels: usize) -> Self {
        let mut c = DVector::from_element(levels, ZERO);
        c[0] = C64::new(1.0, 0.0);
        Self { coefficients: c, time: 0.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.norm_sqr()).collect()
    }

    /// |c_n|² dump with columns `n, prob, energy_hw0`.
    pub fn write_csv<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "n,prob,energy_hw0")?;
        for (n, p) in self.probabilities().into_iter().enumerate() {
            writeln!(w, "{},{},{}", n, p, n as f64 + 0.5)?;
        }
        Ok(())
    }
}

/// Σ|c_n|²(n + ½) in ħω₀.
pub fn energy_expectation(state: &QmState) -> f64 {
    state.coefficients.iter().enumerate().map(|(n, c)| c.norm_sqr() * (n as f64 + 0.5)).sum()
}

/// RK4 in the interaction picture, dc/dt = −i D H′ D† c with D = diag(e^{int}).
/// `apply(t, ψ, out)` writes H′(t)ψ for Schrödinger-picture amplitudes ψ.
/// Returns the state at `t_end` after `steps` equal steps.
pub fn propagate_with<F>(initial: &QmState, t_end: f64, steps: usize, mut apply: F) -> Result<QmState>
where
    F: FnMut(f64, &[C64], &mut [C64]),
{
    let n = initial.coefficients.len();
    let steps = steps.max(1);
    let h = (t_end - initial.time) / steps as f64;
    let mut c: Vec<C64> = initial.coefficients.iter().copied().collect();
    let mut psi = vec![ZERO; n];
    let mut hpsi = vec![ZERO; n];
    let mut ks = [vec![ZERO; n], vec![ZERO; n], vec![ZERO; n], vec![ZERO; n]];
    let mut trial = vec![ZERO; n];

    let mut deriv = |t: f64, c: &[C64], out: &mut [C64], psi: &mut [C64], hpsi: &mut [C64]| {
        for k in 0..n {
            psi[k] = c[k] * C64::from_polar(1.0, -(k as f64) * t);
        }
        apply(t, psi, hpsi);
        for k in 0..n {
            out[k] = -C64::i() * C64::from_polar(1.0, k as f64 * t) * hpsi[k];
        }
    };

    let norm0: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    for step in 0..steps {
        let t = initial.time + step as f64 * h;
        let [k1, k2, k3, k4] = &mut ks;
        deriv(t, &c, k1, &mut psi, &mut hpsi);
        for k in 0..n {
            trial[k] = c[k] + k1[k] * (0.5 * h);
        }
        deriv(t + 0.5 * h, &trial, k2, &mut psi, &mut hpsi);
        for k in 0..n {
            trial[k] = c[k] + k2[k] * (0.5 * h);
        }
        deriv(t + 0.5 * h, &trial, k3, &mut psi, &mut hpsi);
        for k in 0..n {
            trial[k] = c[k] + k3[k] * h;
        }
        deriv(t + h, &trial, k4, &mut psi, &mut hpsi);
        for k in 0..n {
            c[k] += (k1[k] + k2[k] * 2.0 + k3[k] * 2.0 + k4[k]) * (h / 6.0);
        }
        if !c.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NormDrift { drift: f64::INFINITY, time: t + h });
        }
    }
    let norm: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    let drift = (norm - norm0).abs();
    if drift > NORM_DRIFT_LIMIT {
        return Err(Error::NormDrift { drift, time: t_end });
    }
    Ok(QmState { coefficients: DVector::from_vec(c), time: t_end })
}

/// Fast evaluation of H′(t)ψ for one pulse. The multipole product is
/// expanded once in powers of s = (t − t₀)/Δt,
/// f₁f₂f₃ = Σ_k s^k·f₁f₂(2U)^k/k!, so each evaluation costs one matrix
/// polynomial in a scalar plus a few matrix–vector products.
#[derive(Debug, Clone)]
pub struct QmPropagator {
    pulse: PulseParams,
    levels: usize,
    /// Coefficient matrices of s^k, column-major.
    terms: Vec<OperatorMatrix>,
    momentum_offdiag: Vec<f64>,
    /// −½cos θ_p
    p_coupling: f64,
}

impl QmPropagator {
    pub fn new(pulse: &PulseParams, ops: &Operators, size_parameter: f64) -> Result<Self> {
        pulse.validate()?;
        let levels = ops.levels();
        let kx = k_dot_x(pulse, ops, size_parameter);
        let order = ops.expansion_order;
        let (f1, f2, _) = multipole_factors(&kx, pulse.k_delta_x(), 0.0, order);
        let two_u = &kx * C64::new(2.0 / pulse.k_delta_x(), 0.0);
        let mut terms = Vec::with_capacity(order + 1);
        let mut term = f1 * f2;
        terms.push(term.clone());
        for k in 1..=order {
            term = (term * &two_u) / C64::new(k as f64, 0.0);
            terms.push(term.clone());
        }
        let momentum_offdiag = (1..levels).map(|k| (k as f64 / 2.0).sqrt()).collect();
        Ok(Self { pulse: *pulse, levels, terms, momentum_offdiag, p_coupling: -0.5 * pulse.theta.cos() })
    }

    pub fn pulse(&self) -> &PulseParams {
        &self.pulse
    }

    /// A(X, t) via the s-expansion.
    pub fn potential(&self, t: f64) -> OperatorMatrix {
        let n = self.levels;
        if !self.pulse.is_active(t) {
            return DMatrix::from_element(n, n, ZERO);
        }
        let s = (t - self.pulse.center) / self.pulse.width;
        let mut f = self.terms[self.terms.len() - 1].clone();
        for m in self.terms.iter().rev().skip(1) {
            f *= C64::new(s, 0.0);
            f += m;
        }
        let c = C64::from_polar(self.pulse.amplitude * (-s * s).exp(), -self.pulse.omega * t);
        let cf = f * c;
        (&cf + cf.adjoint()) * C64::new(0.5, 0.0)
    }

    fn apply_momentum(&self, v: &[C64], out: &mut [C64]) {
        let n = self.levels;
        for k in 0..n {
            let mut acc = ZERO;
            if k > 0 {
                acc += C64::new(0.0, self.momentum_offdiag[k - 1]) * v[k - 1];
            }
            if k + 1 < n {
                acc -= C64::new(0.0, self.momentum_offdiag[k]) * v[k + 1];
            }
            out[k] = acc;
        }
    }

    fn matvec(a: &OperatorMatrix, v: &[C64], out: &mut [C64]) {
        let n = v.len();
        out.iter_mut().for_each(|o| *o = ZERO);
        for (j, &vj) in v.iter().enumerate() {
            let col = a.column(j);
            for i in 0..n {
                out[i] += col[i] * vj;
            }
        }
    }

    /// out = H′(t)ψ.
    pub fn apply(&self, t: f64, psi: &[C64], out: &mut [C64]) {
        if !self.pulse.is_active(t) {
            out.iter_mut().for_each(|o| *o = ZERO);
            return;
        }
        let a = self.potential(t);
        let n = self.levels;
        let mut tmp = vec![ZERO; n];
        let mut tmp2 = vec![ZERO; n];
        // ½A²ψ − ½cosθ(APψ + PAψ)
        Self::matvec(&a, psi, &mut tmp);
        Self::matvec(&a, &tmp, out);
        for o in out.iter_mut() {
            *o *= 0.5;
        }
        self.apply_momentum(&tmp, &mut tmp2);
        for k in 0..n {
            out[k] += tmp2[k] * self.p_coupling;
        }
        self.apply_momentum(psi, &mut tmp);
        Self::matvec(&a, &tmp, &mut tmp2);
        for k in 0..n {
            out[k] += tmp2[k] * self.p_coupling;
        }
    }

    /// Step count over the pulse support for `steps_per_period` steps per
    /// period of the fastest interaction-picture phase.
    pub fn default_steps(&self, steps_per_period: f64) -> usize {
        let (lo, hi) = self.pulse.support();
        let fastest = (self.levels - 1) as f64 + self.pulse.omega;
        ((hi - lo) * fastest * steps_per_period / (2.0 * std::f64::consts::PI)).ceil() as usize
    }

    /// Propagates the ground state across the pulse support and returns the
    /// final state.
    pub fn run(&self, steps: usize) -> Result<QmState> {
        let (lo, hi) = self.pulse.support();
        let mut initial = QmState::ground(self.levels);
        initial.time = lo;
        propagate_with(&initial, hi, steps, |t, psi, out| self.apply(t, psi, out))
    }
}

/// Final energy in ħω₀ after one pulse, starting from the ground state.
pub fn excitation_energy(
    pulse: &PulseParams,
    levels: usize,
    expansion_order: usize,
    size_parameter: f64,
    steps_per_period: f64,
) -> Result<(f64, f64)> {
    let ops = Operators::new(levels, expansion_order)?;
    let prop = QmPropagator::new(pulse, &ops, size_parameter)?;
    let state = prop.run(prop.default_steps(steps_per_period))?;
    Ok((energy_expectation(&state), (state.norm_sqr() - 1.0).abs()))
}
