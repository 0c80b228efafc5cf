//! Axisymmetric profile curves and their pointwise curvatures.
//!
//! A profile is a graph `z(r)` over an open radial interval. Everything is
//! evaluated in the radial parameter; arclength is never materialised. The
//! tangent angle is `psi = sigma * atan(u)` with `u = dz/dr` and `sigma` a
//! fixed [`SignConvention`].

use_float!();

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("epsilon must be finite and >= 0 (got {0})")]
    InvalidEpsilon(f64),
    #[error("radius must be finite and > 0 (got {0})")]
    NonpositiveRadius(f64),
    #[error("r = {r} lies outside the profile domain ({lo}, {hi})")]
    Domain { r: f64, lo: f64, hi: f64 },
    #[error("r = 0 is a removable singularity; request the axis limit explicitly")]
    SingularAxis,
    #[error("the profile does not meet the axis smoothly, no axis limit exists")]
    NoAxisLimit,
    #[error("the profile has no tangent angle at r = {r}")]
    Undefined { r: f64 },
}

/// Sign `sigma` in `psi = sigma * atan(dz/dr)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// `psi = +atan(dz/dr)`.
    Positive,
    /// `psi = -atan(dz/dr)`.
    Negative,
}

impl SignConvention {
    /// The convention under which the tangent-angle and slope forms of the
    /// shape equation coincide; `shape_residual::resolve_sign_convention`
    /// re-derives it at run time and the test suite pins the two together.
    pub const RESOLVED: SignConvention = SignConvention::Positive;

    pub fn sign(self) -> f64 {
        match self {
            SignConvention::Positive => 1.0,
            SignConvention::Negative => -1.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SignConvention::Positive => "psi = +atan(dz/dr)",
            SignConvention::Negative => "psi = -atan(dz/dr)",
        }
    }
}

impl Default for SignConvention {
    fn default() -> Self {
        SignConvention::RESOLVED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Upper,
    Lower,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Upper => 1.0,
            Branch::Lower => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

/// Open radial interval `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, r: f64) -> bool {
        r > self.lo && r < self.hi
    }

    /// The closed interval left after removing `margin * width` from each end.
    pub fn shrink(&self, margin: f64) -> (f64, f64) {
        let d = margin * self.width();
        (self.lo + d, self.hi - d)
    }
}

/// Values of a profile and its slope derivatives at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub r: f64,
    pub z: f64,
    pub u: f64,
    pub u1: f64,
    pub u2: f64,
    /// `sqrt(1 + u^2)`, supplied separately so profiles can evaluate it
    /// without squaring a large slope.
    pub arc: f64,
}

/// An axisymmetric profile curve evaluated in the radial parameter.
pub trait ProfileCurve {
    fn domain(&self) -> Interval;

    fn jet(&self, r: f64) -> Result<Jet, GeometryError>;

    /// Jet at distance `gap` inside the given endpoint. Profiles that can
    /// evaluate their radicals without cancellation near the ends override this.
    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        let d = self.domain();
        match end {
            Endpoint::Lower => self.jet(d.lo + gap),
            Endpoint::Upper => self.jet(d.hi - gap),
        }
    }

    /// `d^3 z / dr^3 = u''`'s derivative, when the profile knows it analytically.
    fn third_derivative(&self, _r: f64) -> Option<Result<f64, GeometryError>> {
        None
    }

    /// `u'(0)` for profiles that cross the axis with `u(0) = 0`.
    fn axis_slope_derivative(&self) -> Option<f64> {
        None
    }
}

impl<P: ProfileCurve + ?Sized> ProfileCurve for &P {
    fn domain(&self) -> Interval {
        (**self).domain()
    }
    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        (**self).jet(r)
    }
    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        (**self).jet_near(end, gap)
    }
    fn third_derivative(&self, r: f64) -> Option<Result<f64, GeometryError>> {
        (**self).third_derivative(r)
    }
    fn axis_slope_derivative(&self) -> Option<f64> {
        (**self).axis_slope_derivative()
    }
}

/// Radial domain of the rescaled Cassini oval with biconcavity `epsilon`:
/// `(0, sqrt(1+eps^2))` below `eps = 1`, `(sqrt(eps^2-1), sqrt(1+eps^2))` from there on.
pub fn domain_of(epsilon: f64) -> Interval {
    let hi = (1.0 + epsilon * epsilon).sqrt();
    let lo = if epsilon >= 1.0 {
        (epsilon * epsilon - 1.0).sqrt()
    } else {
        0.0
    };
    Interval { lo, hi }
}

/// Rescaled Cassini oval `z^2 = sqrt(1 + 4 eps^2 r^2) - eps^2 - r^2` (upper branch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CassiniOval {
    epsilon: f64,
}

/// The three radicals of the oval at one radius: `s = sqrt(1+4e^2r^2)`,
/// `t^2 = s - e^2 - r^2` and `w^2 = s - e^2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Radicals {
    pub s: f64,
    pub t: f64,
    pub w: f64,
}

impl CassiniOval {
    pub fn new(epsilon: f64) -> Result<Self, GeometryError> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(GeometryError::InvalidEpsilon(epsilon));
        }
        Ok(CassiniOval { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// `e = 1/epsilon`; infinite for the circle.
    pub fn eccentricity(&self) -> f64 {
        1.0 / self.epsilon
    }

    pub fn r_max(&self) -> f64 {
        (1.0 + self.epsilon * self.epsilon).sqrt()
    }

    /// Whether the oval crosses the axis smoothly (a single closed curve).
    pub fn meets_axis(&self) -> bool {
        self.epsilon < 1.0
    }

    // t^2 = (1+e^2-r^2)(1-e^2+r^2)/(s+e^2+r^2); both factors may be supplied as gaps.
    pub(crate) fn radicals(&self, r: f64, gap_hi: Option<f64>, gap_lo: Option<f64>) -> (f64, f64, f64) {
        let e2 = self.epsilon * self.epsilon;
        let r2 = r * r;
        let s = (1.0 + 4.0 * e2 * r2).sqrt();
        let outer = match gap_hi {
            Some(g) => g * (2.0 * self.r_max() - g),
            None => (1.0 + e2) - r2,
        };
        let inner = match gap_lo {
            Some(g) if self.epsilon > 1.0 => {
                let lo = (e2 - 1.0).sqrt();
                g * (2.0 * lo + g)
            }
            _ => r2 + (1.0 - e2),
        };
        let t2 = outer * inner / (s + e2 + r2);
        (s, t2, t2 + r2)
    }

    fn check_closed(&self, r: f64) -> Result<(), GeometryError> {
        let d = domain_of(self.epsilon);
        let lo_ok = if self.meets_axis() { r >= 0.0 } else { r >= d.lo };
        if !(r.is_finite() && lo_ok && r <= d.hi) {
            return Err(GeometryError::Domain { r, lo: d.lo, hi: d.hi });
        }
        Ok(())
    }

    fn check_interior(&self, r: f64) -> Result<(), GeometryError> {
        let d = domain_of(self.epsilon);
        let lo_ok = if self.meets_axis() { r >= 0.0 } else { r > d.lo };
        if !(r.is_finite() && lo_ok && r < d.hi) {
            return Err(GeometryError::Domain { r, lo: d.lo, hi: d.hi });
        }
        Ok(())
    }

    fn interior_radicals(&self, r: f64, gap_hi: Option<f64>, gap_lo: Option<f64>) -> Result<Radicals, GeometryError> {
        let (s, t2, w2) = self.radicals(r, gap_hi, gap_lo);
        if !(t2 > 0.0) {
            let d = domain_of(self.epsilon);
            return Err(GeometryError::Domain { r, lo: d.lo, hi: d.hi });
        }
        Ok(Radicals {
            s,
            t: t2.sqrt(),
            w: w2.sqrt(),
        })
    }

    /// Height of the oval; defined on the closure of the domain.
    pub fn z(&self, r: f64, branch: Branch) -> Result<f64, GeometryError> {
        self.check_closed(r)?;
        let (_, t2, _) = self.radicals(r, None, None);
        if t2 < -1e-15 {
            let d = domain_of(self.epsilon);
            return Err(GeometryError::Domain { r, lo: d.lo, hi: d.hi });
        }
        Ok(branch.sign() * t2.max(0.0).sqrt())
    }

    /// Upper-branch slope `u = r (2 eps^2 - s) / (s t)`.
    pub fn u(&self, r: f64) -> Result<f64, GeometryError> {
        self.check_interior(r)?;
        let rad = self.interior_radicals(r, None, None)?;
        Ok(self.slope_terms(r, rad).u)
    }

    /// Closed-form `(u', u'')`.
    pub fn u1_u2(&self, r: f64) -> Result<(f64, f64), GeometryError> {
        self.check_interior(r)?;
        let rad = self.interior_radicals(r, None, None)?;
        let st = self.slope_terms(r, rad);
        Ok((st.u1, st.u2))
    }

    fn slope_terms(&self, r: f64, rad: Radicals) -> SlopeTerms {
        let e2 = self.epsilon * self.epsilon;
        let Radicals { s, t, w } = rad;
        let s1 = 4.0 * e2 * r / s;
        let s2 = 4.0 * e2 / (s * s * s);
        let t1 = (s1 - 2.0 * r) / (2.0 * t);
        let t2 = (s2 - 2.0 - 2.0 * t1 * t1) / (2.0 * t);
        let n0 = r * (2.0 * e2 - s);
        let n1 = (2.0 * e2 - s) - r * s1;
        let n2 = -2.0 * s1 - r * s2;
        let d0 = s * t;
        let d1 = s1 * t + s * t1;
        let d2 = s2 * t + 2.0 * s1 * t1 + s * t2;
        let u = n0 / d0;
        let u1 = (n1 - u * d1) / d0;
        let u2 = (n2 - 2.0 * u1 * d1 - u * d2) / d0;
        SlopeTerms {
            u,
            u1,
            u2,
            arc: w / (s * t),
            z: t,
        }
    }

    fn jet_with_gaps(&self, r: f64, gap_hi: Option<f64>, gap_lo: Option<f64>) -> Result<Jet, GeometryError> {
        let rad = self.interior_radicals(r, gap_hi, gap_lo)?;
        let st = self.slope_terms(r, rad);
        Ok(Jet {
            r,
            z: st.z,
            u: st.u,
            u1: st.u1,
            u2: st.u2,
            arc: st.arc,
        })
    }
}

struct SlopeTerms {
    u: f64,
    u1: f64,
    u2: f64,
    arc: f64,
    z: f64,
}

impl ProfileCurve for CassiniOval {
    fn domain(&self) -> Interval {
        domain_of(self.epsilon)
    }

    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        self.check_interior(r)?;
        self.jet_with_gaps(r, None, None)
    }

    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        let d = domain_of(self.epsilon);
        match end {
            Endpoint::Upper => {
                let r = d.hi - gap;
                self.check_interior(r)?;
                self.jet_with_gaps(r, Some(gap), None)
            }
            Endpoint::Lower => {
                let r = d.lo + gap;
                self.check_interior(r)?;
                self.jet_with_gaps(r, None, Some(gap))
            }
        }
    }

    fn axis_slope_derivative(&self) -> Option<f64> {
        if self.meets_axis() {
            let e2 = self.epsilon * self.epsilon;
            Some((2.0 * e2 - 1.0) / (1.0 - e2).sqrt())
        } else {
            None
        }
    }
}

/// `cassini_z` as a free function.
pub fn cassini_z(r: f64, epsilon: f64, branch: Branch) -> Result<f64, GeometryError> {
    CassiniOval::new(epsilon)?.z(r, branch)
}

pub fn cassini_u(r: f64, epsilon: f64) -> Result<f64, GeometryError> {
    CassiniOval::new(epsilon)?.u(r)
}

pub fn cassini_u1_u2(r: f64, epsilon: f64) -> Result<(f64, f64), GeometryError> {
    CassiniOval::new(epsilon)?.u1_u2(r)
}

/// Upper hemisphere `z = sqrt(a^2 - r^2)`; with [`Mirrored`] the lower one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereProfile {
    radius: f64,
}

impl SphereProfile {
    pub fn new(radius: f64) -> Result<Self, GeometryError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::NonpositiveRadius(radius));
        }
        Ok(SphereProfile { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn jet_from(&self, r: f64, z2: f64) -> Result<Jet, GeometryError> {
        if !(r >= 0.0 && r < self.radius && z2 > 0.0) {
            return Err(GeometryError::Domain {
                r,
                lo: 0.0,
                hi: self.radius,
            });
        }
        let a2 = self.radius * self.radius;
        let z = z2.sqrt();
        Ok(Jet {
            r,
            z,
            u: -r / z,
            u1: -a2 / (z2 * z),
            u2: -3.0 * a2 * r / (z2 * z2 * z),
            arc: self.radius / z,
        })
    }
}

impl ProfileCurve for SphereProfile {
    fn domain(&self) -> Interval {
        Interval {
            lo: 0.0,
            hi: self.radius,
        }
    }

    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        self.jet_from(r, self.radius * self.radius - r * r)
    }

    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        match end {
            Endpoint::Lower => self.jet(gap),
            Endpoint::Upper => self.jet_from(self.radius - gap, gap * (2.0 * self.radius - gap)),
        }
    }

    fn third_derivative(&self, r: f64) -> Option<Result<f64, GeometryError>> {
        Some(self.jet(r).map(|j| {
            let a2 = self.radius * self.radius;
            let z2 = j.z * j.z;
            -3.0 * a2 * (a2 + 4.0 * r * r) / (z2 * z2 * z2 * j.z)
        }))
    }

    fn axis_slope_derivative(&self) -> Option<f64> {
        Some(-1.0 / self.radius)
    }
}

/// The reflection `z -> -z` of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirrored<P>(pub P);

fn flip(j: Jet) -> Jet {
    Jet {
        z: -j.z,
        u: -j.u,
        u1: -j.u1,
        u2: -j.u2,
        ..j
    }
}

impl<P: ProfileCurve> ProfileCurve for Mirrored<P> {
    fn domain(&self) -> Interval {
        self.0.domain()
    }
    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        self.0.jet(r).map(flip)
    }
    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        self.0.jet_near(end, gap).map(flip)
    }
    fn third_derivative(&self, r: f64) -> Option<Result<f64, GeometryError>> {
        self.0.third_derivative(r).map(|v| v.map(|x| -x))
    }
    fn axis_slope_derivative(&self) -> Option<f64> {
        self.0.axis_slope_derivative().map(|x| -x)
    }
}

/// Tangent angle, its radial derivative and the curvatures at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvaturePoint {
    pub r: f64,
    pub psi: f64,
    pub dpsi_dr: f64,
    /// Mean curvature `-(k1 + k2)/2`.
    pub h: f64,
    /// Gaussian curvature `k1 k2`.
    pub k: f64,
    k1: f64,
    k2: f64,
}

impl CurvaturePoint {
    /// Curvatures from `(r, psi, dpsi/dr)` with `r > 0`.
    pub fn from_angle(r: f64, psi: f64, dpsi_dr: f64) -> Result<Self, GeometryError> {
        if r == 0.0 {
            return Err(GeometryError::SingularAxis);
        }
        let (sin, cos) = psi.sin_cos();
        Ok(Self::assemble(r, psi, dpsi_dr, sin, cos))
    }

    /// The removable-singularity limit at the axis, where `psi = 0` and
    /// `sin(psi)/r -> dpsi/dr`.
    pub fn axis_limit(dpsi_dr: f64) -> Self {
        CurvaturePoint {
            r: 0.0,
            psi: 0.0,
            dpsi_dr,
            h: -dpsi_dr,
            k: dpsi_dr * dpsi_dr,
            k1: dpsi_dr,
            k2: dpsi_dr,
        }
    }

    fn assemble(r: f64, psi: f64, dpsi_dr: f64, sin: f64, cos: f64) -> Self {
        let k1 = cos * dpsi_dr;
        let k2 = sin / r;
        CurvaturePoint {
            r,
            psi,
            dpsi_dr,
            h: -0.5 * (k1 + k2),
            k: k1 * k2,
            k1,
            k2,
        }
    }

    /// Meridional principal curvature `cos(psi) dpsi/dr`.
    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// Parallel principal curvature `sin(psi)/r`.
    pub fn k2(&self) -> f64 {
        self.k2
    }
}

/// Tangent-angle data of a profile at `r`: `(psi, psi', psi'', sin psi, cos psi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleJet {
    pub psi: f64,
    pub dpsi: f64,
    pub d2psi: f64,
    pub sin: f64,
    pub cos: f64,
}

impl AngleJet {
    pub fn from_jet(j: &Jet, convention: SignConvention) -> Self {
        let sg = convention.sign();
        let q = j.arc * j.arc;
        AngleJet {
            psi: sg * j.u.atan(),
            dpsi: sg * j.u1 / q,
            d2psi: sg * (j.u2 / q - 2.0 * j.u * j.u1 * j.u1 / (q * q)),
            sin: sg * j.u / j.arc,
            cos: 1.0 / j.arc,
        }
    }
}

/// Curvatures from an already evaluated jet (`j.r > 0`).
pub fn curvature_from_jet(j: &Jet, convention: SignConvention) -> Result<CurvaturePoint, GeometryError> {
    if j.r == 0.0 {
        return Err(GeometryError::SingularAxis);
    }
    let a = AngleJet::from_jet(j, convention);
    Ok(CurvaturePoint::assemble(j.r, a.psi, a.dpsi, a.sin, a.cos))
}

/// Curvatures of `profile` at `r`. At `r = 0` the axis limit is used when
/// `axis_limit` is set and the profile crosses the axis; otherwise the call fails.
pub fn curvature_point<P: ProfileCurve + ?Sized>(
    profile: &P,
    r: f64,
    convention: SignConvention,
    axis_limit: bool,
) -> Result<CurvaturePoint, GeometryError> {
    if r == 0.0 {
        if !axis_limit {
            return Err(GeometryError::SingularAxis);
        }
        let u1 = profile.axis_slope_derivative().ok_or(GeometryError::NoAxisLimit)?;
        return Ok(CurvaturePoint::axis_limit(convention.sign() * u1));
    }
    let j = profile.jet(r)?;
    let a = AngleJet::from_jet(&j, convention);
    Ok(CurvaturePoint::assemble(r, a.psi, a.dpsi, a.sin, a.cos))
}
