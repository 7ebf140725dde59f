//! Evaluation of entire functions in Hadamard product form.
//!
//! A form is the data `(r, phi, c_1..c_q, m, p, roots)` of
//!
//! ```text
//! f(z) = r e^{i phi} exp(sum c_l z^l) z^m prod_a E(z/a; p)^{m(a)}
//! ```
//!
//! Products are accumulated in log space: the sum of per-factor principal
//! logs exponentiates to the exact product, and magnitudes up to `|z| ~ 10`
//! with thousands of factors neither overflow nor underflow.
//!
//! Translation orbits are truncated symmetrically (`k in [-K, K]`;
//! conditionally convergent pieces only cancel under symmetric limits) and
//! the omitted tail is compensated analytically through Euler-Maclaurin
//! power sums. `tail_log` reports a bound on the log-scale error left
//! after compensation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::primary::{log_primary_factor, Genus};
use crate::roots::{OrbitKind, RootSystem};
use crate::series::{omitted_orbit_log, SeriesError};

/// Largest polynomial degree `q` a form may carry.
pub const POLY_DEGREE_MAX: usize = 4;

/// Points closer than this to a root evaluate to an exact zero.
pub const ROOT_HIT_TOL: f64 = 1e-12;

/// Minimum inclusion radius for roots, independent of `|z|`.
const R_MIN: f64 = 4.0;

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("leading modulus r must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("polynomial degree {0} exceeds the cap {POLY_DEGREE_MAX}")]
    PolyDegreeTooLarge(usize),
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(#[from] SeriesError),
    #[error("result overflows double precision (log magnitude {log_mag:.3e})")]
    Overflow { log_mag: f64 },
    #[error("z = {z} is within {ROOT_HIT_TOL:e} of a root; log magnitude is singular")]
    NearRoot { z: Complex64 },
    #[error("line direction must have unit modulus, got |d| = {0}")]
    NonUnitDirection(f64),
    #[error("grid needs at least 2 samples, got {0}")]
    GridTooSmall(usize),
}

/// Hadamard factorisation data of an entire function of finite order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HadamardForm {
    /// Leading modulus `r > 0`.
    pub scale: f64,
    /// Leading phase `phi` (radians).
    pub phase: f64,
    /// Polynomial coefficients `c_1..c_q` of the exponential factor;
    /// `poly[l]` is the coefficient of `z^{l+1}`.
    pub poly: Vec<Complex64>,
    /// Multiplicity of the root at the origin.
    pub origin_multiplicity: u32,
    pub genus: Genus,
    pub roots: RootSystem,
}

impl HadamardForm {
    pub fn new(
        scale: f64,
        phase: f64,
        poly: Vec<Complex64>,
        origin_multiplicity: u32,
        genus: Genus,
        roots: RootSystem,
    ) -> Result<Self, EvalError> {
        if scale.is_nan() || scale <= 0.0 {
            return Err(EvalError::NonPositiveScale(scale));
        }
        if poly.len() > POLY_DEGREE_MAX {
            return Err(EvalError::PolyDegreeTooLarge(poly.len()));
        }
        Ok(HadamardForm {
            scale,
            phase,
            poly,
            origin_multiplicity,
            genus,
            roots,
        })
    }

    /// Constant function `f = scale` (empty product, no roots).
    pub fn constant(scale: f64) -> Self {
        HadamardForm {
            scale,
            phase: 0.0,
            poly: Vec::new(),
            origin_multiplicity: 0,
            genus: Genus::new(0).unwrap(),
            roots: RootSystem::empty(),
        }
    }

    /// `sum_l c_l z^l` by Horner.
    fn poly_at(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.poly.iter().rev() {
            acc = (acc + c) * z;
        }
        acc
    }

    /// Nearest-root test at the hit tolerance (tighter than root
    /// coincidence: hits must be unambiguous).
    pub fn is_root_hit(&self, z: Complex64) -> bool {
        if self.origin_multiplicity > 0 && z.norm() <= ROOT_HIT_TOL {
            return true;
        }
        self.roots
            .expand_in_disk(z.norm() + 1.0)
            .iter()
            .any(|(a, _)| (z - a).norm() <= ROOT_HIT_TOL)
    }
}

/// Value of a truncated evaluation plus a bound on `|log|` of the error
/// factor left after tail compensation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail_log: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMagnitude {
    pub log_mag: f64,
    pub tail_log: f64,
}

/// Complex log of the form at `z` (root hits excluded by callers).
fn log_value(form: &HadamardForm, z: Complex64, k_trunc: u64) -> Result<(Complex64, f64), EvalError> {
    let p = form.genus.get();
    let mut acc = Complex64::new(form.scale.ln(), form.phase);
    acc += form.poly_at(z);
    if form.origin_multiplicity > 0 {
        acc += f64::from(form.origin_multiplicity) * z.ln();
    }

    let mut tail = 0.0;
    let include_radius = (2.0 * z.norm()).max(R_MIN);

    for e in &form.roots.explicit {
        acc += f64::from(e.multiplicity) * log_primary_factor(z / e.point, p);
    }
    for orbit in &form.roots.orbits {
        let mult = f64::from(orbit.multiplicity);
        match orbit.kind {
            OrbitKind::Rotation { angle, order } => {
                for k in 0..order {
                    let a = orbit.base * Complex64::from_polar(1.0, 2.0 * f64::from(k) * angle);
                    acc += mult * log_primary_factor(z / a, p);
                }
            }
            OrbitKind::Translation { step } => {
                let k_max = k_trunc as i64;
                for k in -k_max..=k_max {
                    let a = orbit.base + step * k as f64;
                    acc += mult * log_primary_factor(z / a, p);
                }
                // every orbit root inside the inclusion radius must be in range
                let edge = (orbit.base + step * (k_max + 1) as f64)
                    .norm()
                    .min((orbit.base - step * (k_max + 1) as f64).norm());
                if edge <= include_radius {
                    return Err(EvalError::InsufficientTruncation(
                        SeriesError::TruncationTooSmall {
                            k_max: k_trunc,
                            base_abs: orbit.base.norm(),
                            needed: (include_radius + orbit.base.norm()) / step.norm(),
                        },
                    ));
                }
                let (compensation, residual) =
                    omitted_orbit_log(z, orbit.base, step, p, k_trunc)?;
                acc += mult * compensation;
                tail += mult * residual;
            }
        }
    }
    Ok((acc, tail))
}

/// Evaluate the form at `z` with translation orbits truncated at
/// `k in [-k_trunc, k_trunc]`.
///
/// Root hits (within `ROOT_HIT_TOL`) return an exact zero with zero tail.
pub fn evaluate(form: &HadamardForm, z: Complex64, k_trunc: u64) -> Result<Evaluation, EvalError> {
    if form.is_root_hit(z) {
        return Ok(Evaluation {
            value: Complex64::new(0.0, 0.0),
            tail_log: 0.0,
        });
    }
    let (acc, tail) = log_value(form, z, k_trunc)?;
    if acc.re > 709.0 {
        return Err(EvalError::Overflow { log_mag: acc.re });
    }
    Ok(Evaluation {
        value: acc.exp(),
        tail_log: tail,
    })
}

/// `log |f(z)|` with the same truncation and tail reporting as `evaluate`.
pub fn log_magnitude(form: &HadamardForm, z: Complex64, k_trunc: u64) -> Result<LogMagnitude, EvalError> {
    if form.is_root_hit(z) {
        return Err(EvalError::NearRoot { z });
    }
    let (acc, tail) = log_value(form, z, k_trunc)?;
    Ok(LogMagnitude {
        log_mag: acc.re,
        tail_log: tail,
    })
}

/// Uniform parameter grid `min..max` with `count` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, count: usize) -> Self {
        GridSpec { min, max, count }
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let step = if self.count > 1 {
            (self.max - self.min) / (self.count - 1) as f64
        } else {
            0.0
        };
        (0..self.count).map(move |i| self.min + step * i as f64)
    }
}

/// Parameterised line `anchor + x * direction`, `x` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub anchor: Complex64,
    pub direction: Complex64,
    pub grid: GridSpec,
}

impl LineSpec {
    pub fn new(anchor: Complex64, direction: Complex64, grid: GridSpec) -> Result<Self, EvalError> {
        if (direction.norm() - 1.0).abs() > 1e-12 {
            return Err(EvalError::NonUnitDirection(direction.norm()));
        }
        if grid.count < 2 {
            return Err(EvalError::GridTooSmall(grid.count));
        }
        Ok(LineSpec {
            anchor,
            direction,
            grid,
        })
    }

    /// The real axis sampled on `grid`.
    pub fn real_axis(grid: GridSpec) -> Self {
        LineSpec::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), grid).unwrap()
    }

    /// Horizontal line `R + i*offset`.
    pub fn horizontal(offset: f64, grid: GridSpec) -> Self {
        LineSpec::new(Complex64::new(0.0, offset), Complex64::new(1.0, 0.0), grid).unwrap()
    }

    /// Line through the origin at the given angle.
    pub fn through_origin(angle: f64, grid: GridSpec) -> Self {
        LineSpec::new(
            Complex64::new(0.0, 0.0),
            Complex64::from_polar(1.0, angle),
            grid,
        )
        .unwrap()
    }

    pub fn point(&self, x: f64) -> Complex64 {
        self.anchor + self.direction * x
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub x: f64,
    pub magnitude: f64,
    /// Absolute bound on the magnitude error from truncation.
    pub tail_error: f64,
}

/// `|f|` sampled along a line, with per-sample truncation error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MagnitudeProfile {
    pub line: LineSpec,
    pub samples: Vec<ProfileSample>,
}

impl MagnitudeProfile {
    /// CSV rows `line_id,x,magnitude,tail_error`, floats at 17 significant
    /// digits.
    pub fn to_csv(&self, line_id: &str) -> String {
        let mut out = String::from("line_id,x,magnitude,tail_error\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e}\n",
                line_id, s.x, s.magnitude, s.tail_error
            ));
        }
        out
    }
}

/// Sample `|f|` along a line. Root hits report magnitude 0 with tail 0.
pub fn magnitude_on_line(
    form: &HadamardForm,
    line: &LineSpec,
    k_trunc: u64,
) -> Result<MagnitudeProfile, EvalError> {
    let mut samples = Vec::with_capacity(line.grid.count);
    for x in line.grid.points() {
        let z = line.point(x);
        if form.is_root_hit(z) {
            samples.push(ProfileSample {
                x,
                magnitude: 0.0,
                tail_error: 0.0,
            });
            continue;
        }
        let lm = log_magnitude(form, z, k_trunc)?;
        if lm.log_mag > 709.0 {
            return Err(EvalError::Overflow { log_mag: lm.log_mag });
        }
        let magnitude = lm.log_mag.exp();
        samples.push(ProfileSample {
            x,
            magnitude,
            tail_error: magnitude * lm.tail_log.exp_m1(),
        });
    }
    Ok(MagnitudeProfile {
        line: line.clone(),
        samples,
    })
}

/// Heuristic upper estimate of the order: `max(q, rho1_hat)` where
/// `rho1_hat` estimates the exponent of convergence from the decay rate of
/// dyadic blocks of `sum m(a)/|a|^A`. A diagnostic, not a certificate.
pub fn order_estimate(form: &HadamardForm) -> f64 {
    let q = form.poly.len() as f64;
    if !form.roots.has_translation_orbits() {
        // finite root sets have exponent of convergence zero
        return q;
    }
    let probe = f64::from(form.genus.get() + 1);
    let k0 = 1 << 14;
    let s1 = crate::roots::convergence_exponent_partial(&form.roots, probe, k0);
    let s2 = crate::roots::convergence_exponent_partial(&form.roots, probe, 2 * k0);
    let s4 = crate::roots::convergence_exponent_partial(&form.roots, probe, 4 * k0);
    let b1 = s2.value - s1.value;
    let b2 = s4.value - s2.value;
    if b1 <= 0.0 || b2 <= 0.0 {
        return q;
    }
    let ratio = b2 / b1;
    if ratio >= 1.0 {
        // blocks not shrinking at the probe exponent: estimate saturates
        return q.max(probe);
    }
    // terms |a_k|^{-A} ~ k^{-A/gamma} give block ratio 2^{1 - A/gamma}
    let gamma = probe / (1.0 - ratio.log2());
    q.max(gamma.clamp(0.0, 8.0))
}
