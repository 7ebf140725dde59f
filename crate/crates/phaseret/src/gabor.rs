//! Gabor and Bargmann transforms with a Gaussian window.
//!
//! For `phi(t) = e^{-pi t^2}`,
//!
//! ```text
//! G f(x, w) = int f(t) phi(t - x) e^{-2 pi i t w} dt
//! B f(z)    = int f(t) e^{2 pi t z - pi t^2 - pi z^2 / 2} dt
//! ```
//!
//! are linked by `G f(x, -w) = e^{i pi x w} B f(x + iw) e^{-pi|z|^2/2}`.
//! `2^{1/4} B` maps square-integrable signals unitarily onto the Fock
//! space, so a magnitude-agreement pair of entire functions in the Fock
//! space transfers verbatim to a pair of signals with matching Gabor
//! magnitudes.
//!
//! Integrals use a uniform rule on `[-T, T]`: the integrands are analytic
//! and Gaussian-decaying, where the trapezoid rule converges faster than
//! any power of the step, and edge decay is checked on every call.
//!
//! The inverse Bargmann map expands `F(z) = sum a_n z^n` by circle
//! sampling and maps each monomial to its preimage
//! `sqrt(2) (2 pi)^{-n/2} H_n(sqrt(2 pi) t) e^{-pi t^2}` (Hermite
//! polynomial `H_n`), which avoids the wasteful two-dimensional integral
//! representation of the inverse; the contract is closed by the
//! round-trip property.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hadamard::GridSpec;

/// Edge values larger than this fraction of the integrand peak mean the
/// integration window clips the signal.
const EDGE_DECAY: f64 = 1e-13;

#[derive(Debug, Error, PartialEq)]
pub enum TransformError {
    #[error("quadrature window half-width must be >= 4, got {0}")]
    WindowTooNarrow(f64),
    #[error("quadrature needs >= 128 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("signal needs >= 16 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample grid must be symmetric about 0 (got [{min}, {max}])")]
    AsymmetricGrid { min: f64, max: f64 },
    #[error("integrand does not decay at the window edge (edge/peak = {ratio:.3e}); enlarge the window or shrink |z|")]
    WindowTooSmall { ratio: f64 },
    #[error("sampled-only signal cannot be evaluated off its grid; supply an evaluator")]
    EvaluatorRequired,
    #[error("Taylor coefficients do not decay like a Fock-space function (index {index})")]
    NotInFockSpace { index: usize },
    #[error("expansion degree must be >= 4, got {0}")]
    DegreeTooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    Trapezoid,
    Midpoint,
}

/// Uniform quadrature on `[-half_width, half_width]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub half_width: f64,
    pub nodes: usize,
    pub rule: QuadratureRule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            half_width: 8.0,
            nodes: 1024,
            rule: QuadratureRule::Trapezoid,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<(), TransformError> {
        if self.half_width < 4.0 {
            return Err(TransformError::WindowTooNarrow(self.half_width));
        }
        if self.nodes < 128 {
            return Err(TransformError::TooFewNodes(self.nodes));
        }
        Ok(())
    }

    /// Integrate `g` over the window, checking edge decay against the peak.
    fn integrate(
        &self,
        mut g: impl FnMut(f64) -> Complex64,
    ) -> Result<Complex64, TransformError> {
        self.validate()?;
        let t_max = self.half_width;
        let n = self.nodes;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut peak = 0.0f64;
        let mut edge = 0.0f64;
        let h;
        match self.rule {
            QuadratureRule::Trapezoid => {
                h = 2.0 * t_max / n as f64;
                for i in 0..=n {
                    let t = -t_max + h * i as f64;
                    let v = g(t);
                    let mag = v.norm();
                    peak = peak.max(mag);
                    if i == 0 || i == n {
                        edge = edge.max(mag);
                        sum += v * 0.5;
                    } else {
                        sum += v;
                    }
                }
            }
            QuadratureRule::Midpoint => {
                h = 2.0 * t_max / n as f64;
                for i in 0..n {
                    let t = -t_max + h * (i as f64 + 0.5);
                    let v = g(t);
                    let mag = v.norm();
                    peak = peak.max(mag);
                    if i == 0 || i == n - 1 {
                        edge = edge.max(mag);
                    }
                    sum += v;
                }
            }
        }
        if peak > 0.0 && edge > EDGE_DECAY * peak {
            return Err(TransformError::WindowTooSmall { ratio: edge / peak });
        }
        Ok(sum * h)
    }
}

type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// A signal on a symmetric grid, optionally backed by a closed-form
/// evaluator. Quadrature requires the evaluator; bare samples only support
/// grid-locked operations (interpolation inside quadrature is not done).
#[derive(Clone)]
pub struct Signal {
    pub grid: GridSpec,
    pub values: Vec<Complex64>,
    evaluator: Option<Evaluator>,
}

impl std::fmt::Debug for Signal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Signal")
            .field("grid", &self.grid)
            .field("values", &self.values.len())
            .field("evaluator", &self.evaluator.is_some())
            .finish()
    }
}

impl Signal {
    pub fn from_fn(
        grid: GridSpec,
        f: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Result<Self, TransformError> {
        Signal::check_grid(&grid)?;
        let values = grid.points().map(&f).collect();
        Ok(Signal {
            grid,
            values,
            evaluator: Some(Arc::new(f)),
        })
    }

    pub fn from_samples(grid: GridSpec, values: Vec<Complex64>) -> Result<Self, TransformError> {
        Signal::check_grid(&grid)?;
        if values.len() != grid.count {
            return Err(TransformError::TooFewSamples(values.len()));
        }
        Ok(Signal {
            grid,
            values,
            evaluator: None,
        })
    }

    fn check_grid(grid: &GridSpec) -> Result<(), TransformError> {
        if grid.count < 16 {
            return Err(TransformError::TooFewSamples(grid.count));
        }
        if (grid.min + grid.max).abs() > 1e-12 {
            return Err(TransformError::AsymmetricGrid {
                min: grid.min,
                max: grid.max,
            });
        }
        Ok(())
    }

    pub fn has_evaluator(&self) -> bool {
        self.evaluator.is_some()
    }

    pub fn at(&self, t: f64) -> Result<Complex64, TransformError> {
        match &self.evaluator {
            Some(f) => Ok(f(t)),
            None => Err(TransformError::EvaluatorRequired),
        }
    }

    /// CSV rows `t,re,im` over the sample grid, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re,im\n");
        for (t, v) in self.grid.points().zip(&self.values) {
            out.push_str(&format!("{t:.16e},{:.16e},{:.16e}\n", v.re, v.im));
        }
        out
    }

    /// `||f||_2^2` by the trapezoid rule on the signal's own grid.
    pub fn l2_norm_sq(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let h = (self.grid.max - self.grid.min) / (n - 1) as f64;
        let mut sum = 0.0;
        for (i, v) in self.values.iter().enumerate() {
            let w = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
            sum += w * v.norm_sqr();
        }
        h * sum
    }

    /// The Gaussian window `phi(t) = e^{-pi t^2}`.
    pub fn gaussian() -> Signal {
        Signal::from_fn(GridSpec::new(-8.0, 8.0, 1025), |t| {
            Complex64::new((-std::f64::consts::PI * t * t).exp(), 0.0)
        })
        .unwrap()
    }

    /// Preimage of `1 - z^2/(1+i)^2` under the Bargmann transform:
    /// `(2 pi + (4 pi t^2 - 1) i) / (sqrt 2 pi) e^{-pi t^2}`.
    pub fn quartic_preimage() -> Signal {
        Signal::from_fn(GridSpec::new(-8.0, 8.0, 1025), |t| {
            let pi = std::f64::consts::PI;
            let env = (-pi * t * t).exp() / (std::f64::consts::SQRT_2 * pi);
            Complex64::new(2.0 * pi, 4.0 * pi * t * t - 1.0) * env
        })
        .unwrap()
    }

    /// Preimage of `cosh(pi z/2) +- i sinh(pi z/2)`:
    /// `sqrt 2 e^{-pi(1/8 + t^2)} (cosh(pi t) +- i sinh(pi t))`.
    pub fn hyperbolic_preimage(sign: crate::pairs::HyperbolicSign) -> Signal {
        let s = match sign {
            crate::pairs::HyperbolicSign::Plus => 1.0,
            crate::pairs::HyperbolicSign::Minus => -1.0,
        };
        Signal::from_fn(GridSpec::new(-8.0, 8.0, 1025), move |t| {
            let pi = std::f64::consts::PI;
            let env = std::f64::consts::SQRT_2 * (-pi * (0.125 + t * t)).exp();
            Complex64::new((pi * t).cosh(), s * (pi * t).sinh()) * env
        })
        .unwrap()
    }
}

/// The signal itself must have decayed at the window edge; integrands are
/// additionally edge-checked after windowing.
fn check_signal_decay(f: &Signal, eval: &Evaluator, t_max: f64) -> Result<(), TransformError> {
    let peak = f.values.iter().map(|v| v.norm()).fold(0.0f64, f64::max);
    let edge = eval(-t_max).norm().max(eval(t_max).norm());
    if edge > 1e-14 * (1.0 + peak) {
        return Err(TransformError::WindowTooSmall {
            ratio: edge / (1.0 + peak),
        });
    }
    Ok(())
}

/// Gabor transform `G f(x, omega)` with the Gaussian window.
pub fn gabor_transform(
    f: &Signal,
    x: f64,
    omega: f64,
    q: &QuadratureSpec,
) -> Result<Complex64, TransformError> {
    let eval = f.evaluator.as_ref().ok_or(TransformError::EvaluatorRequired)?;
    check_signal_decay(f, eval, q.half_width)?;
    let pi = std::f64::consts::PI;
    q.integrate(|t| {
        let window = (-pi * (t - x) * (t - x)).exp();
        eval(t) * window * Complex64::from_polar(1.0, -2.0 * pi * t * omega)
    })
}

/// Bargmann transform `B f(z)`.
///
/// The growth factor `e^{2 pi t z}` recenters the Gaussian integrand at
/// `Re z / 2` for Gaussian-width signals; `|z|` too large for the window
/// is reported through the edge-decay check.
pub fn bargmann_transform(
    f: &Signal,
    z: Complex64,
    q: &QuadratureSpec,
) -> Result<Complex64, TransformError> {
    let eval = f.evaluator.as_ref().ok_or(TransformError::EvaluatorRequired)?;
    check_signal_decay(f, eval, q.half_width)?;
    let pi = std::f64::consts::PI;
    let prefactor = (-z * z * pi / 2.0).exp();
    q.integrate(|t| {
        eval(t) * prefactor * (Complex64::new(-pi * t * t, 0.0) + z * 2.0 * pi * t).exp()
    })
}

/// `|G f(x, -omega) - e^{i pi x omega} B f(x + i omega) e^{-pi |z|^2/2}|`:
/// the residual of the relation linking the two transforms.
pub fn gabor_bargmann_residual(
    f: &Signal,
    x: f64,
    omega: f64,
    q: &QuadratureSpec,
) -> Result<f64, TransformError> {
    let pi = std::f64::consts::PI;
    let z = Complex64::new(x, omega);
    let gabor = gabor_transform(f, x, -omega, q)?;
    let barg = bargmann_transform(f, z, q)?;
    let rhs = Complex64::from_polar(1.0, pi * x * omega) * barg * (-pi * z.norm_sqr() / 2.0).exp();
    Ok((gabor - rhs).norm())
}

/// Expansion of a signal in the monomial-preimage basis: term `n` is
/// `coeffs[n] * sqrt(2) (2 pi)^{-n/2} H_n(sqrt(2 pi) t) e^{-pi t^2}`, the
/// Bargmann preimage of `z^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteExpansion {
    pub coeffs: Vec<Complex64>,
}

impl HermiteExpansion {
    pub fn eval(&self, t: f64) -> Complex64 {
        if self.coeffs.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        let pi = std::f64::consts::PI;
        // psi_0 = sqrt(2) e^{-pi t^2}; psi_{n+1} = 2t psi_n - (n/pi) psi_{n-1}
        let mut prev = std::f64::consts::SQRT_2 * (-pi * t * t).exp();
        let mut out = self.coeffs[0] * prev;
        if self.coeffs.len() == 1 {
            return out;
        }
        let mut cur = 2.0 * t * prev;
        out += self.coeffs[1] * cur;
        for n in 1..self.coeffs.len() - 1 {
            let next = 2.0 * t * cur - (n as f64 / pi) * prev;
            prev = cur;
            cur = next;
            out += self.coeffs[n + 1] * cur;
        }
        out
    }

    pub fn into_signal(self, grid: GridSpec) -> Result<Signal, TransformError> {
        Signal::from_fn(grid, move |t| self.eval(t))
    }
}

/// Taylor coefficients `a_0..a_degree` of an entire function by circle
/// sampling at the given radius with `4 * degree` nodes.
pub fn taylor_from_circle(
    f: impl Fn(Complex64) -> Complex64,
    degree: usize,
    radius: f64,
) -> Vec<Complex64> {
    let m = 4 * degree.max(1);
    let vals: Vec<Complex64> = (0..m)
        .map(|j| {
            f(Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * j as f64 / m as f64,
            ))
        })
        .collect();
    (0..=degree)
        .map(|n| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                let th = -2.0 * std::f64::consts::PI * (n * j % m) as f64 / m as f64;
                acc += v * Complex64::from_polar(1.0, th);
            }
            acc / (m as f64 * radius.powi(n as i32))
        })
        .collect()
}

/// Invert the Bargmann transform of an entire function given as a
/// black-box evaluator.
///
/// Coefficients are extracted at radius 1; values below the sampling noise
/// floor are dropped, since their preimage weight `sqrt(n!/pi^n)` would
/// amplify noise into the synthesis. Coefficients that grow in that weight
/// instead of decaying mean the function is outside the Fock space and an
/// alarm is raised.
pub fn inverse_bargmann(
    f: impl Fn(Complex64) -> Complex64,
    degree: usize,
) -> Result<HermiteExpansion, TransformError> {
    if degree < 4 {
        return Err(TransformError::DegreeTooSmall(degree));
    }
    let mut coeffs = taylor_from_circle(&f, degree, 1.0);

    let peak = (0..4 * degree)
        .map(|j| {
            f(Complex64::from_polar(
                1.0,
                2.0 * std::f64::consts::PI * j as f64 / (4 * degree) as f64,
            ))
            .norm()
        })
        .fold(0.0f64, f64::max);
    let floor = 64.0 * f64::EPSILON * peak;
    for c in coeffs.iter_mut() {
        if c.norm() < floor {
            *c = Complex64::new(0.0, 0.0);
        }
    }

    // Fock-space norm weight per coefficient: |a_n| sqrt(n!/pi^n)
    let mut weighted = Vec::with_capacity(coeffs.len());
    let mut log_fact = 0.0;
    for (n, c) in coeffs.iter().enumerate() {
        if n > 0 {
            log_fact += (n as f64).ln();
        }
        let w = 0.5 * (log_fact - n as f64 * std::f64::consts::PI.ln());
        weighted.push(c.norm() * w.exp());
    }
    let last = weighted.iter().rposition(|&w| w > 0.0).unwrap_or(0);
    if last >= 4 {
        let peak_w = weighted.iter().cloned().fold(0.0f64, f64::max);
        let cutoff = 2 * (last + 1) / 3;
        if let Some(idx) = (cutoff..=last).find(|&n| weighted[n] >= 0.5 * peak_w) {
            return Err(TransformError::NotInFockSpace { index: idx });
        }
    }

    Ok(HermiteExpansion { coeffs })
}

/// Reproducing-kernel growth check: `|F(z)| <= ||F|| e^{pi |z|^2 / 2}`.
pub fn fock_reproducing_check(
    f: impl Fn(Complex64) -> Complex64,
    norm_estimate: f64,
    z: Complex64,
) -> bool {
    f(z).norm() <= norm_estimate * (std::f64::consts::PI * z.norm_sqr() / 2.0).exp()
}

/// Fock-space norm `(int |F|^2 e^{-pi |z|^2} dA)^{1/2}` by a square
/// trapezoid grid of the given half-width and node count per axis.
pub fn fock_norm(f: impl Fn(Complex64) -> Complex64, half_width: f64, nodes: usize) -> f64 {
    let h = 2.0 * half_width / nodes as f64;
    let pi = std::f64::consts::PI;
    let mut sum = 0.0;
    for i in 0..=nodes {
        let x = -half_width + h * i as f64;
        let wx = if i == 0 || i == nodes { 0.5 } else { 1.0 };
        for j in 0..=nodes {
            let y = -half_width + h * j as f64;
            let wy = if j == 0 || j == nodes { 0.5 } else { 1.0 };
            let z = Complex64::new(x, y);
            sum += wx * wy * f(z).norm_sqr() * (-pi * z.norm_sqr()).exp();
        }
    }
    (sum * h * h).sqrt()
}
