//! Generators for magnitude-agreement pairs.
//!
//! Each constraint class has a builder that assembles two Hadamard forms
//! agreeing in magnitude on the declared lines while differing by more
//! than a global phase whenever the exclusive root set is nonempty:
//!
//! * single line: shared roots plus an exclusive set whose conjugate goes
//!   to the partner, real polynomial parts pinned equal;
//! * rational-angle intersecting lines: exclusive roots become rotation
//!   orbits, imaginary coefficients pinned except at indices divisible by
//!   the rotation order;
//! * two parallel lines: exclusive roots become vertical translation
//!   lattices and the imaginary linear coefficients must satisfy a lattice
//!   series relation (checked via its residual);
//! * infinitely many equidistant lines (order one): the partner's linear
//!   coefficient is determined outright by the series;
//! * a universal family whose base function admits a partner for every
//!   line spacing `1/m`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hadamard::{EvalError, HadamardForm};
use crate::primary::Genus;
use crate::roots::{
    same_point, AmbiguityDecomposition, RootError, RootOrbit, RootSystem, COINCIDENCE_TOL,
};
use crate::series::{corrected_lattice_sum, log_one_minus_plus, SeriesError};

/// Largest rotation order probed when classifying an angle as rational.
const ORDER_MAX: u32 = 512;

#[derive(Debug, Error, PartialEq)]
pub enum PairError {
    #[error("real polynomial parts must agree at z^{index}")]
    CoefficientConstraint { index: usize },
    #[error("imaginary coefficient at z^{index} is pinned equal for this constraint")]
    PinViolation { index: usize },
    #[error("exclusive root {witness} collides with its own mirror image")]
    ConjugateCollision { witness: Complex64 },
    #[error("angle {0} has no order n <= {ORDER_MAX} with n*angle in pi*N; treat as irrational (only phase-equal pairs exist)")]
    IrrationalAngle(f64),
    #[error("angle {0} outside (0, pi/2]")]
    AngleOutOfRange(f64),
    #[error("point {point} outside the fundamental domain")]
    OutsideFundamentalDomain { point: Complex64 },
    #[error("spacing tau must be nonzero")]
    ZeroSpacing,
    #[error("coefficient relation violated: residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    RelationViolation { residual: f64, tol: f64 },
    #[error("universal partner index {m} outside 1..={n_max}")]
    PartnerIndexOutOfRange { m: u32, n_max: u32 },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Roots(#[from] RootError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Line configuration a pair is built for.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PairConstraint {
    /// The real axis alone.
    SingleLine,
    /// `R` and `e^{i angle} R`; `order` is the smallest n with
    /// `n*angle in pi*N`.
    RationalAngle { angle: f64, order: u32 },
    /// `R` and `R + i tau`.
    Parallel { tau: f64 },
    /// `R + i tau Z`.
    InfiniteLines { tau: f64 },
}

/// Convergent series data recorded alongside a generated pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesInfo {
    pub k: u64,
    pub value: f64,
    pub tail: f64,
}

/// A pair of forms agreeing in magnitude on the constraint's lines.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityPair {
    pub f: HadamardForm,
    pub g: HadamardForm,
    pub constraint: PairConstraint,
    pub decomposition: AmbiguityDecomposition,
    /// Coefficient series used to pin the partner (parallel / infinite /
    /// universal constraints).
    pub series: Option<SeriesInfo>,
}

fn coeff(poly: &[Complex64], index: usize) -> Complex64 {
    poly.get(index).copied().unwrap_or_default()
}

fn check_real_parts(poly_f: &[Complex64], poly_g: &[Complex64]) -> Result<(), PairError> {
    for l in 0..poly_f.len().max(poly_g.len()) {
        if coeff(poly_f, l).re != coeff(poly_g, l).re {
            return Err(PairError::CoefficientConstraint { index: l + 1 });
        }
    }
    Ok(())
}

/// No exclusive root may have its mirror image inside the exclusive set;
/// such a root belongs to the shared part of both functions instead.
fn check_conjugate_collision(exclusive: &RootSystem) -> Result<(), PairError> {
    // finite content: compare a disk expansion against its mirror
    let radius = exclusive
        .expand_in_disk(1.0)
        .iter()
        .map(|(z, _)| z.norm())
        .fold(1.0f64, f64::max)
        + 1.0;
    let pts = exclusive.expand_in_disk(radius);
    for (z, _) in &pts {
        if z.im.abs() <= COINCIDENCE_TOL {
            return Err(PairError::ConjugateCollision { witness: *z });
        }
        if pts.iter().any(|(w, _)| same_point(*w, z.conj())) {
            return Err(PairError::ConjugateCollision { witness: *z });
        }
    }
    // a vertical lattice collides when the mirrored lattice is the same
    // lattice: equal real parts and Im(a) + Im(b) in 2*tau*Z
    let lattices: Vec<(Complex64, f64)> = exclusive
        .orbits
        .iter()
        .filter_map(|o| match o.kind {
            crate::roots::OrbitKind::Translation { step } => Some((o.base, step.im.abs() / 2.0)),
            _ => None,
        })
        .collect();
    for (a, tau) in &lattices {
        for (b, tau_b) in &lattices {
            if (tau - tau_b).abs() > COINCIDENCE_TOL || (a.re - b.re).abs() > COINCIDENCE_TOL {
                continue;
            }
            let d = (a.im + b.im) / (2.0 * tau);
            if (d - d.round()).abs() * 2.0 * tau <= COINCIDENCE_TOL {
                return Err(PairError::ConjugateCollision { witness: *a });
            }
        }
    }
    Ok(())
}

/// Pair agreeing in magnitude on the real line: shared roots, exclusive
/// roots mirrored into the partner, real polynomial parts equal.
#[allow(clippy::too_many_arguments)]
pub fn mcdonald_pair(
    scale: f64,
    phase_f: f64,
    phase_g: f64,
    poly_f: Vec<Complex64>,
    poly_g: Vec<Complex64>,
    origin_multiplicity: u32,
    genus: Genus,
    shared: RootSystem,
    exclusive: RootSystem,
) -> Result<AmbiguityPair, PairError> {
    check_real_parts(&poly_f, &poly_g)?;
    check_conjugate_collision(&exclusive)?;
    let f_roots = shared.union(&exclusive)?;
    let g_roots = shared.union(&exclusive.mirror_conjugate())?;
    let f = HadamardForm::new(scale, phase_f, poly_f, origin_multiplicity, genus, f_roots)?;
    let g = HadamardForm::new(scale, phase_g, poly_g, origin_multiplicity, genus, g_roots)?;
    Ok(AmbiguityPair {
        f,
        g,
        constraint: PairConstraint::SingleLine,
        decomposition: AmbiguityDecomposition {
            common: shared,
            exclusive,
            fundamental: None,
        },
        series: None,
    })
}

/// Smallest `n` with `n*angle in pi*N`, if the angle is rational.
pub fn rotation_order(angle: f64) -> Option<u32> {
    for n in 1..=ORDER_MAX {
        let x = f64::from(n) * angle / std::f64::consts::PI;
        if (x - x.round()).abs() * std::f64::consts::PI <= 1e-12 {
            return Some(n);
        }
    }
    None
}

/// Pair agreeing on `R` and `e^{i angle} R` for a rational angle:
/// exclusive roots are full rotation orbits of the fundamental-domain
/// representatives, and imaginary coefficients are pinned equal except at
/// indices divisible by the rotation order.
#[allow(clippy::too_many_arguments)]
pub fn rational_angle_pair(
    angle: f64,
    scale: f64,
    phase_f: f64,
    phase_g: f64,
    poly_f: Vec<Complex64>,
    poly_g: Vec<Complex64>,
    origin_multiplicity: u32,
    genus: Genus,
    shared: RootSystem,
    fundamental: &[(Complex64, u32)],
) -> Result<AmbiguityPair, PairError> {
    if !(angle > 0.0 && angle <= std::f64::consts::FRAC_PI_2) {
        return Err(PairError::AngleOutOfRange(angle));
    }
    let order = rotation_order(angle).ok_or(PairError::IrrationalAngle(angle))?;
    check_real_parts(&poly_f, &poly_g)?;
    for l in 0..poly_f.len().max(poly_g.len()) {
        let pinned = (l + 1) % (order as usize) != 0;
        if pinned && coeff(&poly_f, l).im != coeff(&poly_g, l).im {
            return Err(PairError::PinViolation { index: l + 1 });
        }
    }

    let mut f_orbits = Vec::new();
    let mut g_orbits = Vec::new();
    for &(a, m) in fundamental {
        let arg = a.arg();
        if !(-angle..angle).contains(&arg) {
            return Err(PairError::OutsideFundamentalDomain { point: a });
        }
        f_orbits.push(RootOrbit::rotation(a, angle, order, m)?);
        g_orbits.push(RootOrbit::rotation(a.conj(), angle, order, m)?);
    }
    let exclusive = RootSystem::new(vec![], f_orbits, 0)?;
    check_conjugate_collision(&exclusive)?;
    let g_exclusive = RootSystem::new(vec![], g_orbits, 0)?;

    let f = HadamardForm::new(
        scale,
        phase_f,
        poly_f,
        origin_multiplicity,
        genus,
        shared.union(&exclusive)?,
    )?;
    let g = HadamardForm::new(
        scale,
        phase_g,
        poly_g,
        origin_multiplicity,
        genus,
        shared.union(&g_exclusive)?,
    )?;
    Ok(AmbiguityPair {
        f,
        g,
        constraint: PairConstraint::RationalAngle { angle, order },
        decomposition: AmbiguityDecomposition {
            common: shared,
            exclusive,
            fundamental: Some(RootSystem::from_points(fundamental)?),
        },
        series: None,
    })
}

/// Residual of the parallel-lines coefficient relation at a probe `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualReport {
    pub residual: f64,
    /// Estimate (not a certificate) of the symmetric-sum truncation left
    /// in the residual, from the decay of the last dyadic blocks.
    pub tail: f64,
}

/// Left-minus-right of the relation tying the imaginary coefficients of a
/// parallel-lines pair to its exclusive lattices:
///
/// ```text
/// sum_l (b_l - b'_l) Im[(x + i tau)^l]
///   = sum_a m(a) sum_k ( log|(a + 2(k-1)i tau)/(a + 2ik tau)|
///     + sum_{l<=p} (1/l) Re[ ((x+i tau)/(a+2ik tau))^l
///                          - ((x+i tau)/(conj a - 2(k-1)i tau))^l ] )
/// ```
///
/// The `k`-sum is symmetric to `k_series`; only symmetric limits converge.
pub fn coeff_relation_residual(
    tau: f64,
    poly_f: &[Complex64],
    poly_g: &[Complex64],
    fundamental: &[(Complex64, u32)],
    genus: Genus,
    x: f64,
    k_series: u64,
) -> Result<ResidualReport, PairError> {
    if tau == 0.0 {
        return Err(PairError::ZeroSpacing);
    }
    let w_line = Complex64::new(x, tau);

    let mut lhs = 0.0;
    let mut pow = Complex64::new(1.0, 0.0);
    for l in 0..poly_f.len().max(poly_g.len()) {
        pow *= w_line;
        lhs += (coeff(poly_f, l).im - coeff(poly_g, l).im) * pow.im;
    }

    let p = genus.get();
    let two_i_tau = Complex64::new(0.0, 2.0 * tau);
    let k_max = k_series as i64;
    let mut rhs = 0.0;
    let mut block = [0.0f64; 2]; // |term| over the last two dyadic blocks
    for &(a, m) in fundamental {
        for k in -k_max..=k_max {
            let den = a + two_i_tau * k as f64;
            let w = two_i_tau / den;
            // log|1 - w| without cancellation
            let mut term = log_one_minus_plus(w).re - w.re;
            let u = w_line / den;
            let v = w_line / (a.conj() - two_i_tau * (k - 1) as f64);
            let mut upow = Complex64::new(1.0, 0.0);
            let mut vpow = Complex64::new(1.0, 0.0);
            for l in 1..=p {
                upow *= u;
                vpow *= v;
                term += (upow - vpow).re / f64::from(l);
            }
            rhs += f64::from(m) * term;
            let ka = k.abs();
            if ka > k_max / 2 {
                block[0] += term.abs() * f64::from(m);
            } else if ka > k_max / 4 {
                block[1] += term.abs() * f64::from(m);
            }
        }
    }
    Ok(ResidualReport {
        residual: lhs - rhs,
        tail: 2.0 * block[0].max(block[1] / 2.0),
    })
}

/// Pair agreeing on `R` and `R + i tau`: exclusive roots become vertical
/// lattices `a + 2i tau Z`; the coefficient relation must hold, which is
/// checked through its residual on probe points `x in {0, 1, 2}`.
#[allow(clippy::too_many_arguments)]
pub fn parallel_pair(
    tau: f64,
    scale: f64,
    phase_f: f64,
    phase_g: f64,
    poly_f: Vec<Complex64>,
    poly_g: Vec<Complex64>,
    origin_multiplicity: u32,
    genus: Genus,
    shared: RootSystem,
    fundamental: &[(Complex64, u32)],
    k_series: u64,
    tol: f64,
) -> Result<AmbiguityPair, PairError> {
    if tau == 0.0 {
        return Err(PairError::ZeroSpacing);
    }
    check_real_parts(&poly_f, &poly_g)?;
    let step = Complex64::new(0.0, 2.0 * tau);

    let mut f_orbits = Vec::new();
    let mut g_orbits = Vec::new();
    for &(a, m) in fundamental {
        if !(-tau.abs()..tau.abs()).contains(&a.im) {
            return Err(PairError::OutsideFundamentalDomain { point: a });
        }
        f_orbits.push(RootOrbit::translation(a, step, m)?);
        g_orbits.push(RootOrbit::translation(a.conj(), step, m)?);
    }
    let exclusive = RootSystem::new(vec![], f_orbits, 0)?;
    check_conjugate_collision(&exclusive)?;
    let g_exclusive = RootSystem::new(vec![], g_orbits, 0)?;

    let mut worst = 0.0f64;
    for &x in &[0.0, 1.0, 2.0] {
        let rep = coeff_relation_residual(tau, &poly_f, &poly_g, fundamental, genus, x, k_series)?;
        worst = worst.max(rep.residual.abs() - rep.tail);
    }
    if worst > tol {
        return Err(PairError::RelationViolation {
            residual: worst,
            tol,
        });
    }

    let f = HadamardForm::new(
        scale,
        phase_f,
        poly_f,
        origin_multiplicity,
        genus,
        shared.union(&exclusive)?,
    )?;
    let g = HadamardForm::new(
        scale,
        phase_g,
        poly_g,
        origin_multiplicity,
        genus,
        shared.union(&g_exclusive)?,
    )?;
    Ok(AmbiguityPair {
        f,
        g,
        constraint: PairConstraint::Parallel { tau },
        decomposition: AmbiguityDecomposition {
            common: shared,
            exclusive,
            fundamental: Some(RootSystem::from_points(fundamental)?),
        },
        series: None,
    })
}

/// Partner coefficient with its series tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BPrime {
    pub value: f64,
    pub tail: f64,
}

/// Linear coefficient of the partner of an order-one form whose magnitudes
/// agree on all lines `R + i tau Z`:
///
/// ```text
/// b' = b - (1/tau) sum_a m(a) sum_k ( log|(a + 2(k-1)i tau)/(a + 2ik tau)|
///                                     - 2 tau Im 1/(a + 2ik tau) )
/// ```
///
/// Symmetric partial sums to `k_series`; the reported tail bounds the
/// truncation error of `b'`.
pub fn infinite_lines_b_prime(
    tau: f64,
    fundamental: &[(Complex64, u32)],
    b: f64,
    k_series: u64,
) -> Result<BPrime, PairError> {
    if tau == 0.0 {
        return Err(PairError::ZeroSpacing);
    }
    let mut total = 0.0;
    let mut tail = 0.0;
    for &(a, m) in fundamental {
        if !(-tau.abs()..tau.abs()).contains(&a.im) {
            return Err(PairError::OutsideFundamentalDomain { point: a });
        }
        let s = corrected_lattice_sum(a, tau, k_series)?;
        total += f64::from(m) * s.value;
        tail += f64::from(m) * s.tail;
    }
    Ok(BPrime {
        value: b - total / tau,
        tail: tail / tau.abs(),
    })
}

/// Pair of order-one forms agreeing on all lines `R + i tau Z`. The
/// partner's linear coefficient is fixed by the lattice series.
#[allow(clippy::too_many_arguments)]
pub fn infinite_lines_pair(
    tau: f64,
    scale: f64,
    phase_f: f64,
    phase_g: f64,
    real_linear: f64,
    b: f64,
    origin_multiplicity: u32,
    shared: RootSystem,
    fundamental: &[(Complex64, u32)],
    k_series: u64,
) -> Result<AmbiguityPair, PairError> {
    let genus = Genus::new(1).unwrap();
    let b_prime = infinite_lines_b_prime(tau, fundamental, b, k_series)?;
    let step = Complex64::new(0.0, 2.0 * tau);

    let mut f_orbits = Vec::new();
    let mut g_orbits = Vec::new();
    for &(a, m) in fundamental {
        f_orbits.push(RootOrbit::translation(a, step, m)?);
        g_orbits.push(RootOrbit::translation(a.conj(), step, m)?);
    }
    let exclusive = RootSystem::new(vec![], f_orbits, 0)?;
    if !fundamental.is_empty() {
        check_conjugate_collision(&exclusive)?;
    }
    let g_exclusive = RootSystem::new(vec![], g_orbits, 0)?;

    let f = HadamardForm::new(
        scale,
        phase_f,
        vec![Complex64::new(real_linear, b)],
        origin_multiplicity,
        genus,
        shared.union(&exclusive)?,
    )?;
    let g = HadamardForm::new(
        scale,
        phase_g,
        vec![Complex64::new(real_linear, b_prime.value)],
        origin_multiplicity,
        genus,
        shared.union(&g_exclusive)?,
    )?;
    Ok(AmbiguityPair {
        f,
        g,
        constraint: PairConstraint::InfiniteLines { tau },
        decomposition: AmbiguityDecomposition {
            common: shared,
            exclusive,
            fundamental: Some(RootSystem::from_points(fundamental)?),
        },
        series: Some(SeriesInfo {
            k: k_series,
            value: b_prime.value,
            tail: b_prime.tail,
        }),
    })
}

/// Base function of the universal family: genus-one lattices
/// `e^n + i/(2n) + (2i/n) Z` for `n = 1..n_max`. Every spacing `1/m`,
/// `m <= n_max`, admits a partner; see [`universal_partner`].
pub fn universal_base(n_max: u32) -> HadamardForm {
    let orbits = (1..=n_max)
        .map(|n| {
            let nf = f64::from(n);
            RootOrbit::translation(
                Complex64::new(nf.exp(), 0.5 / nf),
                Complex64::new(0.0, 2.0 / nf),
                1,
            )
            .unwrap()
        })
        .collect();
    HadamardForm::new(
        1.0,
        0.0,
        vec![],
        0,
        Genus::new(1).unwrap(),
        RootSystem::new(vec![], orbits, 0).unwrap(),
    )
    .unwrap()
}

/// Partner of the universal base for line spacing `1/m`: the `n = m`
/// lattice is conjugated and the form carries the extra factor
/// `e^{-i b_m z}` with
///
/// ```text
/// b_m = m sum_k ( log|(a_m + 2(k-1)i/m)/(a_m + 2ik/m)|
///                 - (2/m) Im 1/(a_m + 2ik/m) ),   a_m = e^m + i/(2m).
/// ```
pub fn universal_partner(
    m: u32,
    n_max: u32,
    k_series: u64,
) -> Result<(HadamardForm, SeriesInfo), PairError> {
    if m == 0 || m > n_max {
        return Err(PairError::PartnerIndexOutOfRange { m, n_max });
    }
    let mf = f64::from(m);
    let tau = 1.0 / mf;
    let base_m = Complex64::new(mf.exp(), 0.5 / mf);
    let series = corrected_lattice_sum(base_m, tau, k_series)?;
    let b_m = mf * series.value;
    let b_m_tail = mf * series.tail;

    let orbits = (1..=n_max)
        .map(|n| {
            let nf = f64::from(n);
            let base = Complex64::new(nf.exp(), if n == m { -0.5 / nf } else { 0.5 / nf });
            RootOrbit::translation(base, Complex64::new(0.0, 2.0 / nf), 1).unwrap()
        })
        .collect();
    let form = HadamardForm::new(
        1.0,
        0.0,
        vec![Complex64::new(0.0, -b_m)],
        0,
        Genus::new(1).unwrap(),
        RootSystem::new(vec![], orbits, 0)?,
    )?;
    Ok((
        form,
        SeriesInfo {
            k: k_series,
            value: b_m,
            tail: b_m_tail,
        },
    ))
}

/// Which hyperbolic combination a closed-form evaluator produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HyperbolicSign {
    Plus,
    Minus,
}

/// `cosh(pi z/2) + sign * i sinh(pi z/2)`: the closed form of the
/// canonical parallel-lines pair, used to cross-check product evaluation.
pub fn cosh_sinh_closed_form(sign: HyperbolicSign, z: Complex64) -> Complex64 {
    let w = z * std::f64::consts::FRAC_PI_2;
    let i = Complex64::new(0.0, 1.0);
    match sign {
        HyperbolicSign::Plus => w.cosh() + i * w.sinh(),
        HyperbolicSign::Minus => w.cosh() - i * w.sinh(),
    }
}

/// The canonical rational-angle example: `f = 1 - z^2/(1+i)^2`,
/// `g = 1 - z^2/(1-i)^2`, agreeing on `R` and `iR`.
pub fn quartic_pair() -> AmbiguityPair {
    rational_angle_pair(
        std::f64::consts::FRAC_PI_2,
        1.0,
        0.0,
        0.0,
        vec![],
        vec![],
        0,
        Genus::new(0).unwrap(),
        RootSystem::empty(),
        &[(Complex64::new(1.0, 1.0), 1)],
    )
    .expect("static example data")
}

/// The canonical infinite-lines example: `cosh(pi z/2) +- i sinh(pi z/2)`
/// as genus-one lattice forms with `b = pi/2`, `b' = -pi/2`.
pub fn hyperbolic_lattice_pair(k_series: u64) -> Result<AmbiguityPair, PairError> {
    infinite_lines_pair(
        1.0,
        1.0,
        0.0,
        0.0,
        0.0,
        std::f64::consts::FRAC_PI_2,
        0,
        RootSystem::empty(),
        &[(Complex64::new(0.0, 0.5), 1)],
        k_series,
    )
}
