//! Root multisets with symbolic orbits.
//!
//! A root system represents a multiset `M : C -> N0` as finitely many
//! explicit points plus symbolic orbits: vertical translation lattices
//! `base + k*step` and finite rotation orbits `e^{2ik*theta} * base`.
//! Infinite orbits are never materialised globally; every query is
//! disk-bounded.
//!
//! Two entire functions whose magnitudes agree on the real line have
//! mirror-symmetric root multisets, `M_f(z) + M_f(conj z) = M_g(z) +
//! M_g(conj z)`. The decomposition splits matched pairs of systems into
//! the shared part (roots of both) and the exclusive part (roots of `f`
//! that `g` lacks), whose conjugate belongs to `g`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Two root locations closer than this are the same root. All generators
/// keep distinct roots at least 1e-6 apart, so the tolerance has six
/// orders of margin.
pub const COINCIDENCE_TOL: f64 = 1e-10;

/// Tolerance for the rationality condition `order * angle in pi*Z`.
pub const ANGLE_TOL: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("translation orbit requires a nonzero step")]
    ZeroStep,
    #[error("rotation orbit base must be nonzero")]
    ZeroRotationBase,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("order {order} * angle {angle} is not a multiple of pi (within {ANGLE_TOL:e})")]
    IrrationalAngle { angle: f64, order: u32 },
    #[error("order {order} is not minimal for angle {angle} (order {smaller} already works)")]
    NonMinimalOrder { angle: f64, order: u32, smaller: u32 },
    #[error("explicit root at the origin; use origin_multiplicity instead")]
    ExplicitOrigin,
    #[error("duplicate roots within coincidence tolerance near {point}")]
    DuplicateRoot { point: Complex64 },
    #[error("mirror-symmetry violation at witness point {witness}")]
    SymmetryViolation { witness: Complex64 },
    #[error("multiset not invariant under the claimed symmetry; witness {witness}")]
    InvarianceViolation { witness: Complex64 },
    #[error("operation needs a finite expansion but the system has translation orbits")]
    InfiniteExpansion,
}

/// Symbolic family of roots sharing one base point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrbitKind {
    /// `base + k*step` for all integers `k`.
    Translation { step: Complex64 },
    /// `e^{2ik*angle} * base` for `k = 0..order-1`; `order` is the smallest
    /// integer with `order*angle in pi*Z`, so the points are distinct.
    Rotation { angle: f64, order: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootOrbit {
    pub base: Complex64,
    #[serde(flatten)]
    pub kind: OrbitKind,
    pub multiplicity: u32,
}

impl RootOrbit {
    pub fn translation(base: Complex64, step: Complex64, multiplicity: u32) -> Result<Self, RootError> {
        if step.norm() == 0.0 {
            return Err(RootError::ZeroStep);
        }
        if multiplicity == 0 {
            return Err(RootError::ZeroMultiplicity);
        }
        Ok(RootOrbit {
            base,
            kind: OrbitKind::Translation { step },
            multiplicity,
        })
    }

    pub fn rotation(base: Complex64, angle: f64, order: u32, multiplicity: u32) -> Result<Self, RootError> {
        if base.norm() == 0.0 {
            return Err(RootError::ZeroRotationBase);
        }
        if multiplicity == 0 || order == 0 {
            return Err(RootError::ZeroMultiplicity);
        }
        if !angle_is_pi_multiple(f64::from(order) * angle) {
            return Err(RootError::IrrationalAngle { angle, order });
        }
        for smaller in 1..order {
            if angle_is_pi_multiple(f64::from(smaller) * angle) {
                return Err(RootError::NonMinimalOrder { angle, order, smaller });
            }
        }
        Ok(RootOrbit {
            base,
            kind: OrbitKind::Rotation { angle, order },
            multiplicity,
        })
    }

    /// Orbit points inside `|z| <= radius`, in a fixed deterministic order.
    fn expand_in_disk(&self, radius: f64) -> Vec<Complex64> {
        match self.kind {
            OrbitKind::Rotation { angle, order } => {
                if self.base.norm() > radius + COINCIDENCE_TOL {
                    return Vec::new();
                }
                (0..order)
                    .map(|k| self.base * Complex64::from_polar(1.0, 2.0 * f64::from(k) * angle))
                    .collect()
            }
            OrbitKind::Translation { step } => {
                let step_sq = step.norm_sqr();
                let k_center = -(self.base * step.conj()).re / step_sq;
                let r_center = (self.base + step * k_center).norm();
                let span = (radius + r_center) / step.norm() + 1.0;
                let lo = (k_center - span).floor() as i64;
                let hi = (k_center + span).ceil() as i64;
                (lo..=hi)
                    .map(|k| self.base + step * k as f64)
                    .filter(|z| z.norm() <= radius + COINCIDENCE_TOL)
                    .collect()
            }
        }
    }

    fn conjugate(&self) -> RootOrbit {
        let kind = match self.kind {
            // conj(base + k*step) = conj(base) + k*conj(step)
            OrbitKind::Translation { step } => OrbitKind::Translation { step: step.conj() },
            // conj(e^{2ik a} base) = e^{-2ik a} conj(base); over a full cycle
            // that is the same point set as the orbit of conj(base)
            OrbitKind::Rotation { angle, order } => OrbitKind::Rotation { angle, order },
        };
        RootOrbit {
            base: self.base.conj(),
            kind,
            multiplicity: self.multiplicity,
        }
    }
}

fn angle_is_pi_multiple(x: f64) -> bool {
    let m = (x / std::f64::consts::PI).round();
    (x - m * std::f64::consts::PI).abs() <= ANGLE_TOL
}

pub(crate) fn same_point(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= COINCIDENCE_TOL
}

/// Multiset of roots: explicit points, symbolic orbits, and the origin.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootSystem {
    pub explicit: Vec<ExplicitRoot>,
    pub orbits: Vec<RootOrbit>,
    pub origin_multiplicity: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExplicitRoot {
    pub point: Complex64,
    pub multiplicity: u32,
}

impl RootSystem {
    pub fn empty() -> Self {
        RootSystem::default()
    }

    pub fn new(
        explicit: Vec<(Complex64, u32)>,
        orbits: Vec<RootOrbit>,
        origin_multiplicity: u32,
    ) -> Result<Self, RootError> {
        let explicit: Vec<ExplicitRoot> = explicit
            .into_iter()
            .map(|(point, multiplicity)| ExplicitRoot { point, multiplicity })
            .collect();
        for e in &explicit {
            if e.multiplicity == 0 {
                return Err(RootError::ZeroMultiplicity);
            }
            if e.point.norm() <= COINCIDENCE_TOL {
                return Err(RootError::ExplicitOrigin);
            }
        }
        let rs = RootSystem {
            explicit,
            orbits,
            origin_multiplicity,
        };
        rs.check_no_duplicates()?;
        Ok(rs)
    }

    pub fn from_points(points: &[(Complex64, u32)]) -> Result<Self, RootError> {
        RootSystem::new(points.to_vec(), Vec::new(), 0)
    }

    /// Validation radius: covers every explicit point, every rotation
    /// orbit, and a few rungs of each translation orbit.
    fn validation_radius(&self) -> f64 {
        let mut r: f64 = 1.0;
        for e in &self.explicit {
            r = r.max(e.point.norm());
        }
        for o in &self.orbits {
            let extra = match o.kind {
                OrbitKind::Translation { step } => 3.0 * step.norm(),
                OrbitKind::Rotation { .. } => 0.0,
            };
            r = r.max(o.base.norm() + extra);
        }
        r + 1.0
    }

    fn check_no_duplicates(&self) -> Result<(), RootError> {
        let pts = self.expand_in_disk(self.validation_radius());
        for (i, (a, _)) in pts.iter().enumerate() {
            if a.norm() <= COINCIDENCE_TOL {
                continue; // origin entry
            }
            for (b, _) in &pts[i + 1..] {
                if same_point(*a, *b) {
                    return Err(RootError::DuplicateRoot { point: *a });
                }
            }
        }
        Ok(())
    }

    /// All roots (with multiplicity) inside `|z| <= radius`, including the
    /// origin when it carries multiplicity. Deterministic order: origin,
    /// explicit points, then orbits.
    pub fn expand_in_disk(&self, radius: f64) -> Vec<(Complex64, u32)> {
        let mut out = Vec::new();
        if self.origin_multiplicity > 0 {
            out.push((Complex64::new(0.0, 0.0), self.origin_multiplicity));
        }
        for e in &self.explicit {
            if e.point.norm() <= radius + COINCIDENCE_TOL {
                out.push((e.point, e.multiplicity));
            }
        }
        for o in &self.orbits {
            for z in o.expand_in_disk(radius) {
                out.push((z, o.multiplicity));
            }
        }
        out
    }

    /// Whether any symbolic orbit is infinite.
    pub fn has_translation_orbits(&self) -> bool {
        self.orbits
            .iter()
            .any(|o| matches!(o.kind, OrbitKind::Translation { .. }))
    }

    /// `M(z)`: multiplicity of `z` in this multiset. The truncation radius
    /// must cover `|z|`.
    pub fn multiplicity_at(&self, z: Complex64, truncation_radius: f64) -> u32 {
        let radius = truncation_radius.max(z.norm());
        self.expand_in_disk(radius)
            .iter()
            .filter(|(a, _)| same_point(*a, z))
            .map(|(_, m)| m)
            .sum()
    }

    /// The multiset `M'(z) = M(conj z)`: every root reflected across the
    /// real axis, orbits conjugated structurally.
    pub fn mirror_conjugate(&self) -> RootSystem {
        RootSystem {
            explicit: self
                .explicit
                .iter()
                .map(|e| ExplicitRoot {
                    point: e.point.conj(),
                    multiplicity: e.multiplicity,
                })
                .collect(),
            orbits: self.orbits.iter().map(RootOrbit::conjugate).collect(),
            origin_multiplicity: self.origin_multiplicity,
        }
    }

    /// Total multiplicity of nonzero roots inside `|z| <= radius`.
    pub fn count_in_disk(&self, radius: f64) -> u64 {
        self.expand_in_disk(radius)
            .iter()
            .map(|(_, m)| u64::from(*m))
            .sum()
    }

    /// Multiset sum of two systems (multiplicities add; the result is
    /// revalidated, so overlapping supports must coincide exactly rather
    /// than within tolerance).
    pub fn union(&self, other: &RootSystem) -> Result<RootSystem, RootError> {
        let mut explicit: Vec<(Complex64, u32)> = self
            .explicit
            .iter()
            .map(|e| (e.point, e.multiplicity))
            .collect();
        for e in &other.explicit {
            if let Some(hit) = explicit.iter_mut().find(|(p, _)| same_point(*p, e.point)) {
                hit.1 += e.multiplicity;
            } else {
                explicit.push((e.point, e.multiplicity));
            }
        }
        let mut orbits = self.orbits.clone();
        for o in &other.orbits {
            if let Some(hit) = orbits
                .iter_mut()
                .find(|x| x.kind == o.kind && same_point(x.base, o.base))
            {
                hit.multiplicity += o.multiplicity;
            } else {
                orbits.push(o.clone());
            }
        }
        RootSystem::new(
            explicit,
            orbits,
            self.origin_multiplicity + other.origin_multiplicity,
        )
    }
}

/// `M_f(z) + M_f(conj z) = M_g(z) + M_g(conj z)` for every root inside the
/// disk of the given radius.
pub fn check_mirror_symmetry(f: &RootSystem, g: &RootSystem, radius: f64) -> bool {
    mirror_witness(f, g, radius).is_none()
}

fn mirror_witness(f: &RootSystem, g: &RootSystem, radius: f64) -> Option<Complex64> {
    let mut pts = f.expand_in_disk(radius);
    pts.extend(g.expand_in_disk(radius));
    for (z, _) in &pts {
        let lhs = f.multiplicity_at(*z, radius) + f.multiplicity_at(z.conj(), radius);
        let rhs = g.multiplicity_at(*z, radius) + g.multiplicity_at(z.conj(), radius);
        if lhs != rhs {
            return Some(*z);
        }
    }
    None
}

/// Split of a mirror-symmetric pair into shared and exclusive roots.
///
/// `common` holds `min(m_f, m_g)` at each shared nonzero root; `exclusive`
/// holds the excess `m_f - M_g` where positive. `fundamental` is filled in
/// by the constraint-aware generators once a symmetry group is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmbiguityDecomposition {
    pub common: RootSystem,
    pub exclusive: RootSystem,
    pub fundamental: Option<RootSystem>,
}

/// Decompose the root multisets of a mirror-symmetric pair inside a disk.
///
/// Orbits of `f` that match `g` uniformly (same shared and excess
/// multiplicity at every expanded point) stay symbolic; anything else
/// falls back to explicit points. Verifies `M_g = M_common + M_excl(conj
/// z)` on the expanded support before returning.
pub fn decompose(
    f: &RootSystem,
    g: &RootSystem,
    radius: f64,
) -> Result<AmbiguityDecomposition, RootError> {
    if let Some(witness) = mirror_witness(f, g, radius) {
        return Err(RootError::SymmetryViolation { witness });
    }

    let mut common_explicit: Vec<(Complex64, u32)> = Vec::new();
    let mut common_orbits: Vec<RootOrbit> = Vec::new();
    let mut excl_explicit: Vec<(Complex64, u32)> = Vec::new();
    let mut excl_orbits: Vec<RootOrbit> = Vec::new();

    for e in &f.explicit {
        if e.point.norm() > radius + COINCIDENCE_TOL {
            continue;
        }
        let mg = g.multiplicity_at(e.point, radius);
        let shared = e.multiplicity.min(mg);
        if shared > 0 {
            common_explicit.push((e.point, shared));
        }
        if e.multiplicity > mg {
            excl_explicit.push((e.point, e.multiplicity - mg));
        }
    }

    for o in &f.orbits {
        let pts = o.expand_in_disk(radius);
        if pts.is_empty() {
            continue;
        }
        let shared: Vec<u32> = pts
            .iter()
            .map(|z| o.multiplicity.min(g.multiplicity_at(*z, radius)))
            .collect();
        let uniform = shared.iter().all(|&s| s == shared[0]);
        if uniform {
            let s = shared[0];
            if s > 0 {
                let mut kept = o.clone();
                kept.multiplicity = s;
                common_orbits.push(kept);
            }
            if o.multiplicity > s {
                let mut kept = o.clone();
                kept.multiplicity = o.multiplicity - s;
                excl_orbits.push(kept);
            }
        } else {
            for (z, s) in pts.iter().zip(&shared) {
                if *s > 0 {
                    common_explicit.push((*z, *s));
                }
                if o.multiplicity > *s {
                    excl_explicit.push((*z, o.multiplicity - *s));
                }
            }
        }
    }

    let common = RootSystem::new(common_explicit, common_orbits, 0)?;
    let exclusive = RootSystem::new(excl_explicit, excl_orbits, 0)?;

    // M_g(z) = M_common(z) + M_excl(conj z) on the disk
    let mirrored = exclusive.mirror_conjugate();
    let mut support = f.expand_in_disk(radius);
    support.extend(g.expand_in_disk(radius));
    for (z, _) in support {
        if z.norm() <= COINCIDENCE_TOL {
            continue;
        }
        let lhs = g.multiplicity_at(z, radius);
        let rhs = common.multiplicity_at(z, radius) + mirrored.multiplicity_at(z, radius);
        if lhs != rhs {
            return Err(RootError::SymmetryViolation { witness: z });
        }
    }

    Ok(AmbiguityDecomposition {
        common,
        exclusive,
        fundamental: None,
    })
}

/// Fundamental domain of a rotation-invariant multiset: representatives
/// with argument in the half-open sector `[-angle, angle)`.
///
/// The input must expand finitely (no translation orbits) and be invariant
/// under rotation by `2*angle`; `order` is the smallest integer with
/// `order*angle in pi*N`.
pub fn rotation_fundamental_domain(
    y: &RootSystem,
    angle: f64,
    order: u32,
) -> Result<RootSystem, RootError> {
    if y.has_translation_orbits() {
        return Err(RootError::InfiniteExpansion);
    }
    let radius = y.validation_radius();
    let pts = y.expand_in_disk(radius);
    let rot = Complex64::from_polar(1.0, 2.0 * angle);

    // invariance check
    for (z, m) in &pts {
        if z.norm() <= COINCIDENCE_TOL {
            continue;
        }
        if y.multiplicity_at(rot * z, radius) != *m {
            return Err(RootError::InvarianceViolation { witness: *z });
        }
    }

    let mut reps: Vec<(Complex64, u32)> = Vec::new();
    for (z, m) in &pts {
        if z.norm() <= COINCIDENCE_TOL {
            continue;
        }
        if in_sector(*z, angle) && !reps.iter().any(|(r, _)| same_point(*r, *z)) {
            reps.push((*z, *m));
        }
    }

    // every orbit must contribute exactly one representative
    let expected: u64 = pts
        .iter()
        .filter(|(z, _)| z.norm() > COINCIDENCE_TOL)
        .map(|(_, m)| u64::from(*m))
        .sum();
    let got: u64 = reps.iter().map(|(_, m)| u64::from(*m) * u64::from(order)).sum();
    if expected != got {
        let witness = pts
            .iter()
            .find(|(z, _)| z.norm() > COINCIDENCE_TOL && !in_sector(*z, angle))
            .map(|(z, _)| *z)
            .unwrap_or_default();
        return Err(RootError::InvarianceViolation { witness });
    }

    RootSystem::new(reps, Vec::new(), 0)
}

fn in_sector(z: Complex64, angle: f64) -> bool {
    let arg = z.arg();
    (-angle..angle).contains(&arg)
}

/// Fundamental domain of a `2i*tau`-translation-invariant multiset:
/// bases shifted into the half-open strip `R + i[-tau, tau)`.
///
/// Explicit points cannot be translation invariant, so any nonzero
/// explicit root is an invariance violation. Orbit steps must match
/// `+-2i*tau`.
pub fn translation_fundamental_domain(y: &RootSystem, tau: f64) -> Result<RootSystem, RootError> {
    if tau == 0.0 {
        return Err(RootError::ZeroStep);
    }
    if let Some(e) = y.explicit.first() {
        return Err(RootError::InvarianceViolation { witness: e.point });
    }
    if y.origin_multiplicity > 0 {
        return Err(RootError::InvarianceViolation {
            witness: Complex64::new(0.0, 0.0),
        });
    }
    let tau = tau.abs();
    let mut reps: Vec<(Complex64, u32)> = Vec::new();
    for o in &y.orbits {
        let step = match o.kind {
            OrbitKind::Translation { step } => step,
            OrbitKind::Rotation { .. } => {
                return Err(RootError::InvarianceViolation { witness: o.base })
            }
        };
        if step.re.abs() > COINCIDENCE_TOL || (step.im.abs() - 2.0 * tau).abs() > COINCIDENCE_TOL {
            return Err(RootError::InvarianceViolation { witness: o.base });
        }
        // shift Im(base) into [-tau, tau)
        let shift = ((o.base.im + tau) / (2.0 * tau)).floor();
        let reduced = Complex64::new(o.base.re, o.base.im - 2.0 * tau * shift);
        reps.push((reduced, o.multiplicity));
    }
    RootSystem::new(reps, Vec::new(), 0)
}

/// Partial sum `sum m(a)/|a|^A` over the `count` smallest-modulus nonzero
/// roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentPartialSum {
    pub value: f64,
    /// Number of root points actually available (may be less than
    /// requested for finite systems).
    pub points: usize,
    /// Contribution of the second half of the points used; vanishing
    /// increments signal a convergent (or exhausted) sum.
    pub last_increment: f64,
}

/// Partial sums of `sum m(a)/|a|^A`, the series whose convergence boundary
/// is the exponent of convergence of the root system.
pub fn convergence_exponent_partial(
    rs: &RootSystem,
    exponent: f64,
    count: usize,
) -> ExponentPartialSum {
    let mut points = smallest_points(rs, count);
    points.truncate(count);
    let half = points.len() / 2;
    let mut value = 0.0;
    let mut last_increment = 0.0;
    for (i, (z, m)) in points.iter().enumerate() {
        let term = f64::from(*m) / z.norm().powf(exponent);
        value += term;
        if i >= half {
            last_increment += term;
        }
    }
    ExponentPartialSum {
        value,
        points: points.len(),
        last_increment,
    }
}

/// The `count` smallest-modulus nonzero roots, sorted by modulus
/// (ties broken by expansion order for determinism).
fn smallest_points(rs: &RootSystem, count: usize) -> Vec<(Complex64, u32)> {
    let mut radius = rs.validation_radius();
    loop {
        let pts: Vec<(Complex64, u32)> = rs
            .expand_in_disk(radius)
            .into_iter()
            .filter(|(z, _)| z.norm() > COINCIDENCE_TOL)
            .collect();
        let finite = !rs.has_translation_orbits();
        if pts.len() >= count || finite {
            let mut indexed: Vec<(usize, (Complex64, u32))> = pts.into_iter().enumerate().collect();
            indexed.sort_by(|(ia, (a, _)), (ib, (b, _))| {
                a.norm()
                    .partial_cmp(&b.norm())
                    .unwrap()
                    .then(ia.cmp(ib))
            });
            return indexed.into_iter().map(|(_, p)| p).collect();
        }
        radius *= 2.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn lattice(base: Complex64, tau: f64, mult: u32) -> RootSystem {
        RootSystem::new(
            vec![],
            vec![RootOrbit::translation(base, c(0.0, 2.0 * tau), mult).unwrap()],
            0,
        )
        .unwrap()
    }

    #[test]
    fn multiplicity_empty() {
        assert_eq!(RootSystem::empty().multiplicity_at(c(3.0, 1.0), 10.0), 0);
    }

    #[test]
    fn multiplicity_lattice_point() {
        let rs = lattice(c(0.0, 0.5), 1.0, 1);
        assert_eq!(rs.multiplicity_at(c(0.0, 2.5), 5.0), 1); // k = 1
        assert_eq!(rs.multiplicity_at(c(0.0, 1.5), 5.0), 0);
    }

    #[test]
    fn multiplicity_explicit() {
        let rs = RootSystem::from_points(&[(c(1.0, 1.0), 2)]).unwrap();
        assert_eq!(rs.multiplicity_at(c(1.0, 1.0), 5.0), 2);
    }

    #[test]
    fn mirror_explicit() {
        let rs = RootSystem::from_points(&[(c(1.0, 1.0), 1)]).unwrap();
        let m = rs.mirror_conjugate();
        assert_eq!(m.multiplicity_at(c(1.0, -1.0), 5.0), 1);
        assert_eq!(m.multiplicity_at(c(1.0, 1.0), 5.0), 0);
    }

    #[test]
    fn mirror_translation_orbit_same_lattice_as_conjugate_base() {
        let rs = lattice(c(0.0, 0.5), 1.0, 1);
        let m = rs.mirror_conjugate();
        // conj lattice = -i/2 + 2ikZ, same point set as base -i/2 step +2i
        for k in -3i64..=3 {
            let z = c(0.0, -0.5 + 2.0 * k as f64);
            assert_eq!(m.multiplicity_at(z, 10.0), 1, "k={k}");
        }
        assert_eq!(m.multiplicity_at(c(0.0, 0.5), 10.0), 0);
    }

    #[test]
    fn mirror_empty() {
        assert_eq!(RootSystem::empty().mirror_conjugate(), RootSystem::empty());
    }

    #[test]
    fn mirror_symmetry_examples() {
        let f = RootSystem::from_points(&[(c(1.0, 1.0), 1), (c(-1.0, -1.0), 1)]).unwrap();
        let g = RootSystem::from_points(&[(c(1.0, -1.0), 1), (c(-1.0, 1.0), 1)]).unwrap();
        assert!(check_mirror_symmetry(&f, &g, 5.0));

        let h = RootSystem::from_points(&[(c(1.0, 1.0), 1)]).unwrap();
        assert!(check_mirror_symmetry(&h, &h, 5.0));

        let k = RootSystem::from_points(&[(c(2.0, 1.0), 1)]).unwrap();
        assert!(!check_mirror_symmetry(&h, &k, 5.0));
    }

    #[test]
    fn decompose_quartic_pair() {
        let f = RootSystem::from_points(&[(c(1.0, 1.0), 1), (c(-1.0, -1.0), 1)]).unwrap();
        let g = RootSystem::from_points(&[(c(1.0, -1.0), 1), (c(-1.0, 1.0), 1)]).unwrap();
        let d = decompose(&f, &g, 5.0).unwrap();
        assert_eq!(d.common.count_in_disk(5.0), 0);
        assert_eq!(d.exclusive.multiplicity_at(c(1.0, 1.0), 5.0), 1);
        assert_eq!(d.exclusive.multiplicity_at(c(-1.0, -1.0), 5.0), 1);
        assert_eq!(d.exclusive.count_in_disk(5.0), 2);
    }

    #[test]
    fn decompose_identical_systems() {
        let f = RootSystem::from_points(&[(c(2.0, 0.0), 1), (c(0.0, 3.0), 1)]).unwrap();
        let d = decompose(&f, &f.clone(), 5.0).unwrap();
        assert_eq!(d.common.count_in_disk(5.0), 2);
        assert_eq!(d.exclusive.count_in_disk(5.0), 0);
    }

    #[test]
    fn decompose_lattice_pair_stays_symbolic() {
        let f = lattice(c(0.0, 0.5), 1.0, 1);
        let g = lattice(c(0.0, -0.5), 1.0, 1);
        let d = decompose(&f, &g, 9.0).unwrap();
        assert_eq!(d.common.count_in_disk(9.0), 0);
        assert_eq!(d.exclusive.orbits.len(), 1);
        assert_eq!(d.exclusive.multiplicity_at(c(0.0, 0.5), 9.0), 1);
        assert_eq!(d.exclusive.multiplicity_at(c(0.0, 4.5), 9.0), 1);
    }

    #[test]
    fn decompose_rejects_asymmetric_pair() {
        let f = RootSystem::from_points(&[(c(1.0, 1.0), 1)]).unwrap();
        let g = RootSystem::from_points(&[(c(2.0, 1.0), 1)]).unwrap();
        let err = decompose(&f, &g, 5.0).unwrap_err();
        assert!(matches!(err, RootError::SymmetryViolation { .. }));
    }

    #[test]
    fn decompose_recombination_identity() {
        // mixed multiplicities: f has (1+i) twice, g once plus conjugate
        let f = RootSystem::from_points(&[(c(1.0, 1.0), 2), (c(2.0, 0.0), 1)]).unwrap();
        let g = RootSystem::from_points(&[(c(1.0, 1.0), 1), (c(1.0, -1.0), 1), (c(2.0, 0.0), 1)])
            .unwrap();
        let d = decompose(&f, &g, 5.0).unwrap();
        let mirrored = d.exclusive.mirror_conjugate();
        for (z, _) in f.expand_in_disk(5.0).iter().chain(g.expand_in_disk(5.0).iter()) {
            let mf = d.common.multiplicity_at(*z, 5.0) + d.exclusive.multiplicity_at(*z, 5.0);
            assert_eq!(f.multiplicity_at(*z, 5.0), mf);
            let mg = d.common.multiplicity_at(*z, 5.0) + mirrored.multiplicity_at(*z, 5.0);
            assert_eq!(g.multiplicity_at(*z, 5.0), mg);
        }
    }

    #[test]
    fn rotation_domain_quartic() {
        // angle pi/2 (order 2): orbit {1+i, -1-i}, representative arg in [-pi/2, pi/2)
        let y = RootSystem::from_points(&[(c(1.0, 1.0), 1), (c(-1.0, -1.0), 1)]).unwrap();
        let u = rotation_fundamental_domain(&y, PI / 2.0, 2).unwrap();
        assert_eq!(u.count_in_disk(5.0), 1);
        assert_eq!(u.multiplicity_at(c(1.0, 1.0), 5.0), 1);
    }

    #[test]
    fn rotation_domain_empty() {
        let u = rotation_fundamental_domain(&RootSystem::empty(), PI / 2.0, 2).unwrap();
        assert_eq!(u.count_in_disk(5.0), 0);
    }

    #[test]
    fn rotation_domain_quarter_turn() {
        // angle pi/4 (order 4): {2, 2i, -2, -2i} is one orbit of rotation by
        // pi/2, representative with arg in [-pi/4, pi/4) is 2
        let y = RootSystem::from_points(&[
            (c(2.0, 0.0), 1),
            (c(0.0, 2.0), 1),
            (c(-2.0, 0.0), 1),
            (c(0.0, -2.0), 1),
        ])
        .unwrap();
        let u = rotation_fundamental_domain(&y, PI / 4.0, 4).unwrap();
        assert_eq!(u.count_in_disk(5.0), 1);
        assert_eq!(u.multiplicity_at(c(2.0, 0.0), 5.0), 1);
    }

    #[test]
    fn rotation_domain_half_turn_two_orbits() {
        // same point set under angle pi/2 (order 2) splits into two orbits;
        // 2i sits on the excluded boundary ray so -2i represents its orbit
        let y = RootSystem::from_points(&[
            (c(2.0, 0.0), 1),
            (c(0.0, 2.0), 1),
            (c(-2.0, 0.0), 1),
            (c(0.0, -2.0), 1),
        ])
        .unwrap();
        let u = rotation_fundamental_domain(&y, PI / 2.0, 2).unwrap();
        assert_eq!(u.count_in_disk(5.0), 2);
        assert_eq!(u.multiplicity_at(c(2.0, 0.0), 5.0), 1);
        assert_eq!(u.multiplicity_at(c(0.0, -2.0), 5.0), 1);
    }

    #[test]
    fn rotation_domain_rejects_non_invariant() {
        let y = RootSystem::from_points(&[(c(1.0, 1.0), 1)]).unwrap();
        let err = rotation_fundamental_domain(&y, PI / 2.0, 2).unwrap_err();
        assert!(matches!(err, RootError::InvarianceViolation { .. }));
    }

    #[test]
    fn translation_domain_examples() {
        let y = lattice(c(0.0, 0.5), 1.0, 1);
        let u = translation_fundamental_domain(&y, 1.0).unwrap();
        assert_eq!(u.count_in_disk(2.0), 1);
        assert_eq!(u.multiplicity_at(c(0.0, 0.5), 2.0), 1);

        let u = translation_fundamental_domain(&RootSystem::empty(), 1.0).unwrap();
        assert_eq!(u, RootSystem::empty());

        let y = lattice(c(3.0, 2.5), 1.0, 1);
        let u = translation_fundamental_domain(&y, 1.0).unwrap();
        assert_eq!(u.multiplicity_at(c(3.0, 0.5), 5.0), 1);
    }

    #[test]
    fn translation_domain_rejects_explicit_points() {
        let y = RootSystem::from_points(&[(c(1.0, 0.5), 1)]).unwrap();
        let err = translation_fundamental_domain(&y, 1.0).unwrap_err();
        assert!(matches!(err, RootError::InvarianceViolation { .. }));
    }

    #[test]
    fn exponent_sum_single_point() {
        let rs = RootSystem::from_points(&[(c(2.0, 0.0), 1)]).unwrap();
        let s = convergence_exponent_partial(&rs, 1.0, 10);
        assert_eq!(s.points, 1);
        assert_relative_eq!(s.value, 0.5, max_relative = 1e-15);
    }

    #[test]
    fn exponent_sum_lattice_squares() {
        // sum over i/2 + 2ik of |a|^{-2} = sum 4/(4k+1)^2 = pi^2/2
        let rs = lattice(c(0.0, 0.5), 1.0, 1);
        let s = convergence_exponent_partial(&rs, 2.0, 2_000_000);
        assert_relative_eq!(s.value, PI * PI / 2.0, epsilon = 1e-5);
        assert!(s.last_increment < 1e-5);
    }

    #[test]
    fn exponent_sum_universal_roots_converges() {
        // lattices e^n + i/(2n) + 2ik/n for n = 1..3 at exponent 1.5
        let orbits = (1..=3u32)
            .map(|n| {
                let nf = f64::from(n);
                RootOrbit::translation(
                    c(nf.exp(), 0.5 / nf),
                    c(0.0, 2.0 / nf),
                    1,
                )
                .unwrap()
            })
            .collect();
        let rs = RootSystem::new(vec![], orbits, 0).unwrap();
        let a = convergence_exponent_partial(&rs, 1.5, 50_000);
        let b = convergence_exponent_partial(&rs, 1.5, 100_000);
        assert!(a.value.is_finite() && b.value.is_finite());
        // increments shrink: no divergence signature
        assert!(b.last_increment < a.last_increment);
        assert!(b.last_increment / b.value < 1e-2);
    }

    #[test]
    fn orbit_constructor_guards() {
        assert!(matches!(
            RootOrbit::translation(c(1.0, 0.0), c(0.0, 0.0), 1),
            Err(RootError::ZeroStep)
        ));
        assert!(matches!(
            RootOrbit::rotation(c(1.0, 0.0), 1.0, 3, 1),
            Err(RootError::IrrationalAngle { .. })
        ));
        // order 4 for angle pi/2 is not minimal (2 works)
        assert!(matches!(
            RootOrbit::rotation(c(1.0, 0.0), PI / 2.0, 4, 1),
            Err(RootError::NonMinimalOrder { .. })
        ));
        assert!(RootOrbit::rotation(c(1.0, 0.0), PI / 2.0, 2, 1).is_ok());
        assert!(RootOrbit::rotation(c(1.0, 0.0), PI / 3.0, 3, 1).is_ok());
    }

    #[test]
    fn duplicate_detection() {
        let err = RootSystem::from_points(&[(c(1.0, 0.0), 1), (c(1.0, 5e-11), 1)]).unwrap_err();
        assert!(matches!(err, RootError::DuplicateRoot { .. }));
    }
}
