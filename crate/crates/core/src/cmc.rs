//! Piecewise constant-mean-curvature profiles of a red blood cell.
//!
//! With `H` constant the mean-curvature relation `H = -(cos psi psi' + sin psi / r)/2`
//! integrates to `r sin psi = -H r^2 + C`, so each branch is
//! `sin psi = -H r + C/r`. The inner branch has `C = 0` and is regular on the
//! axis; the outer one is joined to it with continuous `psi` at the
//! inflection radius and ends where its tangent turns vertical.
//!
//! The traced curve has slope `dz/dr = sigma tan psi` under the resolved
//! [`SignConvention`]; the exported upper half is the traced curve shifted
//! and, if needed, reflected so that it meets the equatorial plane `z = 0`
//! at the rim from above.

use alloc::vec::Vec;
use core::f64::consts::PI;
use_float!();

use crate::functional::{integrate_over_profile, EnergyBreakdown, FunctionalError, QuadErrors};
use crate::geometry::{CurvaturePoint, Endpoint, GeometryError, Interval, Jet, ProfileCurve, SignConvention};
use crate::quadrature::{integrate_adaptive, AdaptiveOptions, QuadratureError};
use crate::shape_residual::MembraneParams;

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CmcError {
    #[error("sin psi = {sin} is outside [-1, 1] at r = {r}")]
    OutOfRange { r: f64, sin: f64 },
    #[error("r = {r} is outside the branch range [{lo}, {hi}]")]
    OutsideBranch { r: f64, lo: f64, hi: f64 },
    #[error("invalid {name}: {reason}")]
    InvalidInput { name: &'static str, reason: &'static str },
    #[error("no regular junction at r = {r}: the inner branch needs sin psi = {sin}")]
    InfeasibleJunction { r: f64, sin: f64 },
    #[error("the outer branch never reaches a vertical tangent and no truncation radius was given")]
    OpenProfile,
    #[error("truncation radius {r} must lie in ({lo}, {hi}]")]
    InvalidTruncation { r: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Functional(#[from] FunctionalError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Tangent angle of a branch at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchAngle {
    pub psi: f64,
    pub dpsi_dr: f64,
    pub sin: f64,
    pub cos: f64,
}

/// One constant-`H` branch `sin psi = -H r + C/r` on a closed radial range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmcBranch {
    pub h_const: f64,
    pub c_int: f64,
    pub r_range: Interval,
}

impl CmcBranch {
    /// Checks that `|sin psi| <= 1` on all of `[lo, hi]`.
    pub fn new(h_const: f64, c_int: f64, lo: f64, hi: f64) -> Result<Self, CmcError> {
        if !(h_const.is_finite() && c_int.is_finite()) {
            return Err(CmcError::InvalidInput {
                name: "branch",
                reason: "H and C must be finite",
            });
        }
        if !(lo >= 0.0 && hi >= lo) || (lo == 0.0 && c_int != 0.0) {
            return Err(CmcError::InvalidInput {
                name: "r_range",
                reason: "need 0 <= lo <= hi, and lo > 0 unless C = 0",
            });
        }
        let b = CmcBranch {
            h_const,
            c_int,
            r_range: Interval { lo, hi },
        };
        let mut probes = Vec::from([lo, hi]);
        // |sin psi| has at most one interior extremum, at r^2 = -C/H
        if h_const != 0.0 && -c_int / h_const > 0.0 {
            let r_star = (-c_int / h_const).sqrt();
            if r_star > lo && r_star < hi {
                probes.push(r_star);
            }
        }
        for r in probes.into_iter().filter(|r| r.is_finite()) {
            let s = b.sin_psi(r);
            if s.abs() > 1.0 + 1e-14 {
                return Err(CmcError::OutOfRange { r, sin: s });
            }
        }
        Ok(b)
    }

    /// `-H r + C/r`, without range checks. The axis value of a `C = 0` branch is 0.
    pub fn sin_psi(&self, r: f64) -> f64 {
        if self.c_int == 0.0 {
            -self.h_const * r
        } else {
            -self.h_const * r + self.c_int / r
        }
    }

    fn dsin(&self, r: f64) -> f64 {
        if self.c_int == 0.0 {
            -self.h_const
        } else {
            -self.h_const - self.c_int / (r * r)
        }
    }

    fn d2sin(&self, r: f64) -> f64 {
        if self.c_int == 0.0 {
            0.0
        } else {
            2.0 * self.c_int / (r * r * r)
        }
    }

    fn contains(&self, r: f64) -> bool {
        r >= self.r_range.lo && r <= self.r_range.hi
    }

    /// Principal-branch angle and its analytic radial derivative.
    pub fn angle(&self, r: f64) -> Result<BranchAngle, CmcError> {
        if !self.contains(r) {
            return Err(CmcError::OutsideBranch {
                r,
                lo: self.r_range.lo,
                hi: self.r_range.hi,
            });
        }
        let s = self.sin_psi(r);
        if !(s.abs() <= 1.0) {
            return Err(CmcError::OutOfRange { r, sin: s });
        }
        let c = ((1.0 - s) * (1.0 + s)).sqrt();
        Ok(self.assemble_angle(r, s, c))
    }

    fn assemble_angle(&self, r: f64, s: f64, c: f64) -> BranchAngle {
        BranchAngle {
            psi: s.atan2(c),
            dpsi_dr: self.dsin(r) / c,
            sin: s,
            cos: c,
        }
    }

    /// Curvatures from the angle; the axis limit is used at `r = 0`.
    pub fn curvature(&self, r: f64) -> Result<CurvaturePoint, CmcError> {
        let a = self.angle(r)?;
        if r == 0.0 {
            return Ok(CurvaturePoint::axis_limit(a.dpsi_dr));
        }
        CurvaturePoint::from_angle(r, a.psi, a.dpsi_dr).map_err(|_| CmcError::OutOfRange { r, sin: a.sin })
    }

    /// `|H(r) - h_const|` with `H(r)` evaluated from the angle.
    pub fn constant_h_defect(&self, r: f64) -> Result<f64, CmcError> {
        Ok((self.curvature(r)?.h - self.h_const).abs())
    }
}

/// `psi` of a branch at `r`, with `dpsi/dr`.
pub fn branch_psi(branch: &CmcBranch, r: f64) -> Result<BranchAngle, CmcError> {
    branch.angle(r)
}

/// How the outer branch ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileEnd {
    /// Vertical tangent with `sin psi = kappa`.
    Rim { r: f64, kappa: f64 },
    /// Cut off by the caller at `r`.
    Truncated { r: f64 },
    /// Never closes.
    Open,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeProfile {
    pub inner: CmcBranch,
    pub outer: CmcBranch,
    pub r_inflection: f64,
    pub end: ProfileEnd,
    /// `+1` when the upper half is the traced curve, `-1` when it is its reflection.
    pub orientation: f64,
    /// Heights of the two branches at their anchors: the inner branch is
    /// `z = orientation * sigma * int_0^r tan psi + z_offset[0]`, the outer
    /// `z = orientation * sigma * int_{r_i}^r tan psi + z_offset[1]`.
    pub z_offset: [f64; 2],
    /// Rim radius when the profile closes.
    rim: Option<f64>,
}

fn sigma() -> f64 {
    SignConvention::RESOLVED.sign()
}

fn quad_options() -> AdaptiveOptions {
    AdaptiveOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-13,
        max_intervals: 2000,
    }
}

/// Smallest `r > after` with `-H r + C/r = kappa` for `kappa = +-1`.
fn first_vertical(h: f64, c: f64, after: f64) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    for kappa in [1.0, -1.0] {
        // H r^2 + kappa r - C = 0
        let roots: Vec<f64> = if h == 0.0 {
            Vec::from([kappa * c])
        } else {
            let disc = 1.0 + 4.0 * h * c;
            if disc < 0.0 {
                continue;
            }
            let q = -0.5 * (kappa + kappa.signum() * disc.sqrt());
            let mut v = Vec::from([q / h]);
            if q != 0.0 {
                v.push(-c / q);
            }
            v
        };
        for r in roots {
            if r > after && best.map_or(true, |(b, _)| r < b) {
                best = Some((r, kappa));
            }
        }
    }
    best
}

/// Inner profile under `sin psi = -H r`: `int_0^r tan psi = -H r^2 / (1 + sqrt(1 - H^2 r^2))`.
fn cap_height(h: f64, r: f64) -> f64 {
    -h * r * r / (1.0 + (1.0 - h * h * r * r).max(0.0).sqrt())
}

/// Joins an inner branch `H = kappa0 + inner_sign a` (regular at the axis)
/// to an outer branch `H = kappa0 - inner_sign a` at `r_inflection`.
pub fn build_composite(kappa0: f64, a: f64, r_inflection: f64, inner_sign: f64) -> Result<CompositeProfile, CmcError> {
    let bad = |name, reason| Err(CmcError::InvalidInput { name, reason });
    if !(kappa0.is_finite() && a.is_finite()) {
        return bad("kappa0/a", "must be finite");
    }
    if !(r_inflection.is_finite() && r_inflection > 0.0) {
        return bad("r_inflection", "must be finite and > 0");
    }
    if !(inner_sign == 1.0 || inner_sign == -1.0) {
        return bad("inner_sign", "must be +1 or -1");
    }
    let h_in = kappa0 + inner_sign * a;
    let h_out = kappa0 - inner_sign * a;
    let sin_i = -h_in * r_inflection;
    if !(sin_i.abs() < 1.0) {
        return Err(CmcError::InfeasibleJunction {
            r: r_inflection,
            sin: sin_i,
        });
    }
    let c = (h_out - h_in) * r_inflection * r_inflection;
    let inner = CmcBranch::new(h_in, 0.0, 0.0, r_inflection)?;
    let rim = first_vertical(h_out, c, r_inflection);
    let (end, hi) = match rim {
        Some((r, kappa)) => (ProfileEnd::Rim { r, kappa }, r),
        None => (ProfileEnd::Open, f64::INFINITY),
    };
    let outer = CmcBranch {
        h_const: h_out,
        c_int: c,
        r_range: Interval { lo: r_inflection, hi },
    };
    let mut p = CompositeProfile {
        inner,
        outer,
        r_inflection,
        end,
        orientation: 1.0,
        z_offset: [0.0, 0.0],
        rim: rim.map(|(r, _)| r),
    };
    if rim.is_some() {
        p.align()?;
    }
    Ok(p)
}

impl CompositeProfile {
    /// Same profile cut at `r`, which must lie beyond the junction and not
    /// past the rim.
    pub fn truncated(&self, r: f64) -> Result<Self, CmcError> {
        let hi = self.rim.unwrap_or(f64::INFINITY);
        if !(r > self.r_inflection && r <= hi) {
            return Err(CmcError::InvalidTruncation {
                r,
                lo: self.r_inflection,
                hi,
            });
        }
        let mut p = *self;
        if Some(r) != self.rim {
            p.end = ProfileEnd::Truncated { r };
            p.outer.r_range.hi = r;
        }
        p.align()?;
        Ok(p)
    }

    pub fn is_closed(&self) -> bool {
        matches!(self.end, ProfileEnd::Rim { .. })
    }

    /// Outer radius of the profile, if it has one.
    pub fn r_end(&self) -> Option<f64> {
        match self.end {
            ProfileEnd::Rim { r, .. } | ProfileEnd::Truncated { r } => Some(r),
            ProfileEnd::Open => None,
        }
    }

    fn require_end(&self) -> Result<f64, CmcError> {
        self.r_end().ok_or(CmcError::OpenProfile)
    }

    /// Orientation and offsets so that the upper half meets `z = 0` at the
    /// end radius and rises inward from a rim.
    fn align(&mut self) -> Result<(), CmcError> {
        let r_end = self.require_end()?;
        let sign_at_end = match self.end {
            ProfileEnd::Rim { kappa, .. } => kappa,
            _ => {
                let s = self.outer.sin_psi(r_end);
                if s == 0.0 {
                    1.0
                } else {
                    s.signum()
                }
            }
        };
        self.orientation = -sigma() * sign_at_end;
        let z_i = -self.orientation * sigma() * self.outer_tan_integral(self.r_inflection)?;
        self.z_offset = [
            z_i - self.orientation * sigma() * cap_height(self.inner.h_const, self.r_inflection),
            z_i,
        ];
        Ok(())
    }

    /// `sin psi`, `cos psi` of the outer branch at `end - gap`, accurate
    /// for small `gap` at a rim.
    fn outer_near_end(&self, gap: f64) -> Result<(f64, f64, f64), CmcError> {
        let r_end = self.require_end()?;
        let r = r_end - gap;
        match self.end {
            ProfileEnd::Rim { r: re, kappa } => {
                let h = self.outer.h_const;
                // 1 - kappa sin psi = (r + kappa H r^2 - kappa C) / r, expanded about the rim
                let m = (gap * (-(1.0 + 2.0 * kappa * h * re)) + kappa * h * gap * gap) / r;
                let m = m.max(0.0);
                Ok((r, kappa * (1.0 - m), (m * (2.0 - m)).sqrt()))
            }
            _ => {
                let s = self.outer.sin_psi(r);
                Ok((r, s, ((1.0 - s) * (1.0 + s)).sqrt()))
            }
        }
    }

    /// `int_r^end tan psi dr` along the outer branch.
    fn outer_tan_integral(&self, r: f64) -> Result<f64, CmcError> {
        let r_end = self.require_end()?;
        if r >= r_end {
            return Ok(0.0);
        }
        let est = match self.end {
            ProfileEnd::Rim { .. } => integrate_adaptive(
                |tau| match self.outer_near_end(tau * tau) {
                    Ok((_, s, c)) if c > 0.0 => 2.0 * tau * s / c,
                    _ => f64::NAN,
                },
                0.0,
                (r_end - r).sqrt(),
                quad_options(),
            )?,
            _ => integrate_adaptive(
                |x| {
                    let s = self.outer.sin_psi(x);
                    s / ((1.0 - s) * (1.0 + s)).sqrt()
                },
                r,
                r_end,
                quad_options(),
            )?,
        };
        Ok(est.value)
    }

    /// Height of the upper half at `r`.
    pub fn z_upper(&self, r: f64) -> Result<f64, CmcError> {
        let r_end = self.require_end()?;
        if !(r >= 0.0 && r <= r_end) {
            return Err(CmcError::OutsideBranch { r, lo: 0.0, hi: r_end });
        }
        let o = self.orientation * sigma();
        if r <= self.r_inflection {
            Ok(o * cap_height(self.inner.h_const, r) + self.z_offset[0])
        } else {
            Ok(-o * self.outer_tan_integral(r)?)
        }
    }

    /// Height of the inner branch evaluated at the junction, and of the outer one.
    pub fn junction_heights(&self) -> Result<(f64, f64), CmcError> {
        let o = self.orientation * sigma();
        let inner = o * cap_height(self.inner.h_const, self.r_inflection) + self.z_offset[0];
        let outer = -o * self.outer_tan_integral(self.r_inflection)?;
        Ok((inner, outer))
    }

    /// The branch governing `r` (the inner one at the junction itself).
    pub fn branch_at(&self, r: f64) -> &CmcBranch {
        if r <= self.r_inflection {
            &self.inner
        } else {
            &self.outer
        }
    }

    pub fn angle(&self, r: f64) -> Result<BranchAngle, CmcError> {
        self.branch_at(r).angle(r)
    }

    fn traced_jet(&self, b: &CmcBranch, r: f64, s: f64, c: f64, z: f64) -> Jet {
        let sg = sigma();
        let a = b.assemble_angle(r, s, c);
        let d2psi = b.d2sin(r) / c + s * a.dpsi_dr * a.dpsi_dr / c;
        let c2 = c * c;
        Jet {
            r,
            z,
            u: sg * s / c,
            u1: sg * a.dpsi_dr / c2,
            u2: sg * (d2psi / c2 + 2.0 * s * a.dpsi_dr * a.dpsi_dr / (c2 * c)),
            arc: 1.0 / c,
        }
    }

    /// Jet of the traced curve (slope `sigma tan psi`), with the height of the upper half.
    fn jet_with(&self, r: f64, gap_to_end: Option<f64>, with_height: bool) -> Result<Jet, CmcError> {
        let (b, r, s, c) = match gap_to_end {
            Some(g) if self.is_closed() && r > self.r_inflection => {
                let (r, s, c) = self.outer_near_end(g)?;
                (&self.outer, r, s, c)
            }
            _ => {
                let b = self.branch_at(r);
                let a = b.angle(r)?;
                (b, r, a.sin, a.cos)
            }
        };
        let z = if with_height { self.z_upper(r)? } else { 0.0 };
        Ok(self.traced_jet(b, r, s, c, z))
    }

    /// Points `(r, z_upper, z_lower, branch, psi, H)` on `n` equal radial
    /// steps from the axis to the end. The junction appears once for each
    /// branch, with the angle evaluated on that branch.
    pub fn points(&self, n: usize) -> Result<Vec<ProfilePoint>, CmcError> {
        let r_end = self.require_end()?;
        let n = n.max(2);
        let mut radii: Vec<f64> = (0..n).map(|k| r_end * k as f64 / (n - 1) as f64).collect();
        radii.push(self.r_inflection);
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut out = Vec::with_capacity(radii.len() + 1);
        for r in radii {
            let z = self.z_upper(r)?;
            let point = |branch: u8, psi: f64, h: f64| ProfilePoint {
                r,
                z_upper: z,
                z_lower: -z,
                branch,
                psi,
                h,
            };
            if r <= self.r_inflection {
                out.push(point(0, self.inner.angle(r)?.psi, self.inner.h_const));
            }
            if r >= self.r_inflection {
                let psi = if r == r_end && self.is_closed() {
                    let (_, s, c) = self.outer_near_end(0.0)?;
                    s.atan2(c)
                } else {
                    self.outer.angle(r)?.psi
                };
                out.push(point(1, psi, self.outer.h_const));
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub z_upper: f64,
    pub z_lower: f64,
    /// 0 for the inner branch, 1 for the outer.
    pub branch: u8,
    pub psi: f64,
    pub h: f64,
}

fn to_geometry(e: CmcError) -> GeometryError {
    match e {
        CmcError::OutsideBranch { r, lo, hi } => GeometryError::Domain { r, lo, hi },
        CmcError::OutOfRange { r, .. } | CmcError::InvalidTruncation { r, .. } => GeometryError::Undefined { r },
        _ => GeometryError::Undefined { r: f64::NAN },
    }
}

/// The whole profile as a graph over `[0, end]`; heights are evaluated by
/// quadrature on every call.
impl ProfileCurve for CompositeProfile {
    fn domain(&self) -> Interval {
        Interval {
            lo: 0.0,
            hi: self.r_end().unwrap_or(f64::INFINITY),
        }
    }

    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        self.jet_with(r, None, true).map_err(to_geometry)
    }

    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        match end {
            Endpoint::Lower => self.jet(gap),
            Endpoint::Upper => {
                let r = self.r_end().unwrap_or(f64::INFINITY) - gap;
                self.jet_with(r, Some(gap), true).map_err(to_geometry)
            }
        }
    }

    fn axis_slope_derivative(&self) -> Option<f64> {
        Some(-sigma() * self.inner.h_const)
    }
}

/// One branch of a composite, for piecewise quadrature. Heights are not evaluated.
struct Piece<'a> {
    profile: &'a CompositeProfile,
    lo: f64,
    hi: f64,
    outer: bool,
}

impl ProfileCurve for Piece<'_> {
    fn domain(&self) -> Interval {
        Interval {
            lo: self.lo,
            hi: self.hi,
        }
    }

    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        let b = if self.outer {
            &self.profile.outer
        } else {
            &self.profile.inner
        };
        let a = b.angle(r).map_err(to_geometry)?;
        Ok(self.profile.traced_jet(b, r, a.sin, a.cos, 0.0))
    }

    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        match end {
            Endpoint::Lower => self.jet(self.lo + gap),
            Endpoint::Upper if self.outer => self
                .profile
                .jet_with(self.hi - gap, Some(gap), false)
                .map_err(to_geometry),
            Endpoint::Upper => self.jet(self.hi - gap),
        }
    }
}

/// Area, volume and bending energy of a composite profile, with per-branch
/// areas.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeMetrics {
    pub energy: EnergyBreakdown,
    /// Areas of the inner and outer parts of the closed surface.
    pub branch_area: [f64; 2],
}

/// Piecewise quadrature of area and volume; the bending energy is
/// `beta sum (2 H_k - c0)^2 A_k` with the branches' constant `H`.
/// Volume is integrated by parts, `V = 2 pi end^2 z(end) - 2 pi int r^2 z' dr`.
pub fn composite_metrics(profile: &CompositeProfile, params: &MembraneParams) -> Result<CompositeMetrics, CmcError> {
    let r_end = profile.require_end()?;
    let pieces = [
        Piece {
            profile,
            lo: 0.0,
            hi: profile.r_inflection,
            outer: false,
        },
        Piece {
            profile,
            lo: profile.r_inflection,
            hi: r_end,
            outer: true,
        },
    ];
    let o = profile.orientation;
    let mut area = [0.0; 2];
    let mut area_err = [0.0; 2];
    let mut vol = 0.0;
    let mut vol_err = 0.0;
    for (k, piece) in pieces.iter().enumerate() {
        let a = integrate_over_profile(piece, "area", |j| 4.0 * PI * j.r * j.arc)?;
        let v = integrate_over_profile(piece, "volume", |j| -2.0 * PI * j.r * j.r * o * j.u)?;
        area[k] = a.value;
        area_err[k] = a.error;
        vol += v.value;
        vol_err += v.error;
    }
    if let ProfileEnd::Truncated { r } = profile.end {
        vol += 2.0 * PI * r * r * profile.z_upper(r)?;
    }
    let mut bending = 0.0;
    let mut bending_err = 0.0;
    for (k, b) in [profile.inner, profile.outer].iter().enumerate() {
        let d = 2.0 * b.h_const - params.c0;
        bending += params.beta * d * d * area[k];
        bending_err += params.beta * d * d * area_err[k];
    }
    let total_area = area[0] + area[1];
    Ok(CompositeMetrics {
        energy: EnergyBreakdown {
            bending,
            area: total_area,
            volume: vol,
            total: bending + params.lambda() * total_area + params.delta_p() * vol,
            quad_error: QuadErrors {
                bending: bending_err,
                area: area_err[0] + area_err[1],
                volume: vol_err,
            },
        },
        branch_area: area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::{bending_energy, enclosed_volume, surface_area};

    #[test]
    fn unit_sphere_branch() {
        let b = CmcBranch::new(-1.0, 0.0, 0.0, 1.0).unwrap();
        let a = branch_psi(&b, 0.5).unwrap();
        assert!((a.psi - 0.5f64.asin()).abs() < 1e-15);
        for r in [0.2, 0.5, 0.8] {
            assert!(b.constant_h_defect(r).unwrap() < 1e-12);
        }
        assert!(matches!(b.angle(1.5), Err(CmcError::OutsideBranch { .. })));
        let wide = CmcBranch {
            r_range: Interval { lo: 0.0, hi: 2.0 },
            ..b
        };
        assert!(matches!(wide.angle(1.5), Err(CmcError::OutOfRange { .. })));
        assert!(matches!(
            CmcBranch::new(-1.0, 0.0, 0.0, 1.5),
            Err(CmcError::OutOfRange { .. })
        ));
    }

    #[test]
    fn zero_h_branch() {
        let b = CmcBranch::new(0.0, 0.5, 0.6, 3.0).unwrap();
        assert!((branch_psi(&b, 1.0).unwrap().psi - 0.5f64.asin()).abs() < 1e-15);
    }

    #[test]
    fn junction_constant() {
        let p = build_composite(-1.0, 0.5, 0.8, 1.0).unwrap();
        assert!((p.outer.c_int + 0.64).abs() < 1e-15);
        assert_eq!(p.inner.sin_psi(0.8), p.outer.sin_psi(0.8));
        assert!(p.is_closed());
        let (zi, zo) = p.junction_heights().unwrap();
        assert!((zi - zo).abs() < 1e-12);
        let pts = p.points(11).unwrap();
        let j: Vec<_> = pts.iter().filter(|q| q.r == 0.8).collect();
        assert_eq!(j.len(), 2);
        assert!((j[0].psi - j[1].psi).abs() < 1e-12 && j[0].branch == 0 && j[1].branch == 1);
        let last = pts.last().unwrap();
        assert_eq!(last.z_upper, 0.0);
        assert!((last.psi - core::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn degenerate_sphere_metrics() {
        let p = build_composite(-1.0, 0.0, 0.8, 1.0).unwrap();
        assert_eq!(p.outer.c_int, 0.0);
        let m = composite_metrics(&p, &MembraneParams::normalized(0.0, 0.0, 0.0)).unwrap();
        assert!((m.energy.area - 4.0 * PI).abs() < 1e-10);
        assert!((m.energy.volume - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((m.energy.bending - 16.0 * PI).abs() < 1e-9);
        assert!((p.z_upper(0.0).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn whole_profile_quadrature_agrees() {
        let p = build_composite(-1.0, 0.5, 0.8, 1.0).unwrap();
        let params = MembraneParams::normalized(-2.0, 0.0, 0.0);
        let m = composite_metrics(&p, &params).unwrap();
        let area = surface_area(&p).unwrap().value;
        let vol = enclosed_volume(&p).unwrap().value;
        assert!((area - m.energy.area).abs() < 1e-9 * area, "{area} {}", m.energy.area);
        assert!(
            (vol - m.energy.volume).abs() < 1e-9 * vol.abs(),
            "{vol} {}",
            m.energy.volume
        );
        let bend = bending_energy(&p, &params, SignConvention::RESOLVED).unwrap().value;
        assert!((bend - 4.0 * 0.25 * m.energy.area).abs() < 1e-8 * bend, "{bend}");
    }

    #[test]
    fn zero_outer_curvature_never_closes() {
        let p = build_composite(0.5, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(p.end, ProfileEnd::Open);
        let params = MembraneParams::normalized(0.0, 0.0, 0.0);
        assert!(matches!(composite_metrics(&p, &params), Err(CmcError::OpenProfile)));
        let t = p.truncated(2.0).unwrap();
        assert!(composite_metrics(&t, &params).is_ok());
    }

    #[test]
    fn infeasible_junction() {
        assert!(matches!(
            build_composite(-1.0, 0.5, 0.8, -1.0),
            Err(CmcError::InfeasibleJunction { .. })
        ));
    }
}
