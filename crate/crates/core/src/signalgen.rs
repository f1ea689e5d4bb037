//! Seeded test-signal generators: logistic map orbits, Lorenz trajectories
//! and additive white Gaussian noise.

use alloc::vec::Vec;

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, real-valued sample vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Signal(Vec<f64>);

impl Signal {
    /// Wraps `samples`, rejecting NaN and infinities.
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Signal(samples))
    }

    pub fn samples(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Number of dyadic scales `J` if the length is `2^J` with `J >= 2`.
    pub fn dyadic_levels(&self) -> Result<usize> {
        dyadic_levels(self.0.len())
    }

    /// Keeps the leading `2^J` samples for the largest admissible `J`.
    pub fn truncate_dyadic(mut self) -> Result<Self> {
        let len = self.0.len();
        if len < 4 {
            return Err(Error::NonDyadic { len });
        }
        let keep = 1usize << (usize::BITS - 1 - len.leading_zeros());
        self.0.truncate(keep);
        Ok(self)
    }
}

impl AsRef<[f64]> for Signal {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

pub(crate) fn dyadic_levels(len: usize) -> Result<usize> {
    if len < 4 || !len.is_power_of_two() {
        return Err(Error::NonDyadic { len });
    }
    Ok(len.trailing_zeros() as usize)
}

/// Iterates `x <- r x (1 - x)`, drops `burn_in` iterates and keeps the next `n`
/// (the first kept sample is `x0` itself when `burn_in == 0`).
pub fn logistic_series(r: f64, x0: f64, n: usize, burn_in: usize) -> Result<Signal> {
    if !(0.0..=4.0).contains(&r) {
        return Err(Error::Domain { what: "logistic parameter r", value: r });
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain { what: "logistic initial value x0", value: x0 });
    }
    let step = |x: f64| (r * x * (1.0 - x)).clamp(0.0, 1.0);
    let mut x = x0;
    for _ in 0..burn_in {
        x = step(x);
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(x);
        x = step(x);
    }
    Ok(Signal(out))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LorenzComponent {
    X,
    Y,
    Z,
}

/// Lorenz system integration settings. Defaults sit in the chaotic regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzConfig {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
    pub dt: f64,
    pub x0: f64,
    pub y0: f64,
    pub z0: f64,
    pub burn_in: usize,
    pub n: usize,
}

impl Default for LorenzConfig {
    fn default() -> Self {
        LorenzConfig {
            sigma: 10.0,
            rho: 28.0,
            beta: 8.0 / 3.0,
            dt: 0.01,
            x0: 1.0,
            y0: 1.0,
            z0: 1.0,
            burn_in: 5000,
            n: 4096,
        }
    }
}

const DIVERGENCE_BOUND: f64 = 1e6;

impl LorenzConfig {
    fn derivative(&self, s: [f64; 3]) -> [f64; 3] {
        [
            self.sigma * (s[1] - s[0]),
            s[0] * (self.rho - s[2]) - s[1],
            s[0] * s[1] - self.beta * s[2],
        ]
    }

    /// One classical fourth-order Runge-Kutta step of size `dt`.
    pub fn rk4_step(&self, s: [f64; 3], dt: f64) -> [f64; 3] {
        let add = |a: [f64; 3], b: [f64; 3], h: f64| [a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]];
        let k1 = self.derivative(s);
        let k2 = self.derivative(add(s, k1, dt / 2.0));
        let k3 = self.derivative(add(s, k2, dt / 2.0));
        let k4 = self.derivative(add(s, k3, dt));
        core::array::from_fn(|i| s[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
    }

    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Domain { what: "Lorenz step dt", value: self.dt });
        }
        for (what, v) in [
            ("Lorenz sigma", self.sigma),
            ("Lorenz rho", self.rho),
            ("Lorenz beta", self.beta),
            ("Lorenz x0", self.x0),
            ("Lorenz y0", self.y0),
            ("Lorenz z0", self.z0),
        ] {
            if !v.is_finite() {
                return Err(Error::Domain { what, value: v });
            }
        }
        Ok(())
    }
}

/// Integrates the Lorenz system with fixed-step RK4 and samples one component
/// after every step past the burn-in. The initial state itself is not sampled.
pub fn lorenz_series(cfg: &LorenzConfig, component: LorenzComponent) -> Result<Signal> {
    cfg.validate()?;
    let idx = match component {
        LorenzComponent::X => 0,
        LorenzComponent::Y => 1,
        LorenzComponent::Z => 2,
    };
    let mut state = [cfg.x0, cfg.y0, cfg.z0];
    let mut out = Vec::with_capacity(cfg.n);
    for step in 0..cfg.burn_in + cfg.n {
        state = cfg.rk4_step(state, cfg.dt);
        if state.iter().any(|v| v.is_nan() || v.abs() > DIVERGENCE_BOUND) {
            return Err(Error::Divergence { step });
        }
        if step >= cfg.burn_in {
            out.push(state[idx]);
        }
    }
    Ok(Signal(out))
}

/// Standard normal deviates from a seeded ChaCha20 stream (Box-Muller).
pub struct GaussianStream {
    rng: ChaCha20Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        GaussianStream { rng: ChaCha20Rng::seed_from_u64(seed), spare: None }
    }

    /// Uniform on (0, 1].
    pub fn uniform_open0(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform_open0();
        let u2 = self.uniform_open0();
        let radius = libm::sqrt(-2.0 * libm::log(u1));
        let angle = 2.0 * core::f64::consts::PI * u2;
        self.spare = Some(radius * libm::sin(angle));
        radius * libm::cos(angle)
    }
}

/// Returns `s + e` with `e` i.i.d. `N(0, variance)` drawn from `seed`.
pub fn add_wgn(s: &Signal, variance: f64, seed: u64) -> Result<Signal> {
    if !(variance >= 0.0 && variance.is_finite()) {
        return Err(Error::Domain { what: "noise variance", value: variance });
    }
    if variance == 0.0 {
        return Ok(s.clone());
    }
    let sd = libm::sqrt(variance);
    let mut g = GaussianStream::new(seed);
    Ok(Signal(s.0.iter().map(|x| x + sd * g.standard_normal()).collect()))
}
