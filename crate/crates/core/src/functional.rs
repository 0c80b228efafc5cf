//! Area, enclosed volume and Helfrich-Canham energy of closed axisymmetric
//! surfaces, and least-squares fits of `(c0, lambda, P)` to the slope form
//! of the shape equation.
//!
//! Profiles describe the upper half `z >= 0` of a surface symmetric about
//! `z = 0`. Integrals over the radial domain are split at the midpoint; an
//! end where the tangent turns vertical is integrated in `tau` with
//! `r = end -/+ tau^2`, which makes `sqrt(1 + u^2) dr` bounded.

use alloc::vec::Vec;
use core::f64::consts::PI;
use_float!();

use crate::geometry::{curvature_from_jet, CassiniOval, Endpoint, GeometryError, Jet, ProfileCurve, SignConvention};
use crate::quadrature::{composite_gauss, integrate_adaptive, AdaptiveOptions, Estimate, QuadratureError};
use crate::shape_residual::{u_form_parts, MembraneParams, UFormParts};

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum FunctionalError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("{quantity}: quadrature error {error:e} exceeds the relative target for value {value:e}")]
    Inaccurate {
        quantity: &'static str,
        value: f64,
        error: f64,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid option {name}: {reason}")]
    InvalidOption { name: &'static str, reason: &'static str },
}

/// Relative accuracy demanded of every integral.
pub const REL_TARGET: f64 = 1e-9;
const ABS_FLOOR: f64 = 1e-13;

fn options() -> AdaptiveOptions {
    AdaptiveOptions {
        abs_tol: 1e-15,
        rel_tol: 1e-11,
        max_intervals: 4000,
    }
}

/// `int f(jet) dr` over the profile's radial domain.
pub fn integrate_over_profile<P, F>(profile: &P, quantity: &'static str, f: F) -> Result<Estimate, FunctionalError>
where
    P: ProfileCurve + ?Sized,
    F: Fn(&Jet) -> f64,
{
    let d = profile.domain();
    let mid = 0.5 * (d.lo + d.hi);
    let eval = |j: Result<Jet, GeometryError>| j.map(|j| f(&j)).unwrap_or(f64::NAN);
    let upper = integrate_adaptive(
        |tau| 2.0 * tau * eval(profile.jet_near(Endpoint::Upper, tau * tau)),
        0.0,
        (d.hi - mid).sqrt(),
        options(),
    )?;
    let lower = if d.lo > 0.0 {
        integrate_adaptive(
            |tau| 2.0 * tau * eval(profile.jet_near(Endpoint::Lower, tau * tau)),
            0.0,
            (mid - d.lo).sqrt(),
            options(),
        )?
    } else {
        integrate_adaptive(|r| eval(profile.jet(r)), d.lo, mid, options())?
    };
    let total = upper + lower;
    if !(total.error <= (REL_TARGET * total.value.abs()).max(ABS_FLOOR)) {
        return Err(FunctionalError::Inaccurate {
            quantity,
            value: total.value,
            error: total.error,
        });
    }
    Ok(total)
}

/// Area `2 int 2 pi r sqrt(1 + u^2) dr` of the closed surface.
pub fn surface_area<P: ProfileCurve + ?Sized>(profile: &P) -> Result<Estimate, FunctionalError> {
    integrate_over_profile(profile, "area", |j| 4.0 * PI * j.r * j.arc)
}

/// Enclosed volume `int 4 pi r z dr` by cylindrical shells.
pub fn enclosed_volume<P: ProfileCurve + ?Sized>(profile: &P) -> Result<Estimate, FunctionalError> {
    integrate_over_profile(profile, "volume", |j| 4.0 * PI * j.r * j.z)
}

/// Bending energy `int beta (2H - c0)^2 dS` of the closed surface.
pub fn bending_energy<P: ProfileCurve + ?Sized>(
    profile: &P,
    params: &MembraneParams,
    convention: SignConvention,
) -> Result<Estimate, FunctionalError> {
    integrate_over_profile(profile, "bending", |j| match curvature_from_jet(j, convention) {
        Ok(cp) => {
            let d = 2.0 * cp.h - params.c0;
            params.beta * d * d * 4.0 * PI * j.r * j.arc
        }
        Err(_) => f64::NAN,
    })
}

/// Absolute quadrature error estimates of an [`EnergyBreakdown`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadErrors {
    pub bending: f64,
    pub area: f64,
    pub volume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    pub bending: f64,
    pub area: f64,
    pub volume: f64,
    /// `bending + lambda * area + dP * volume`.
    pub total: f64,
    pub quad_error: QuadErrors,
}

impl EnergyBreakdown {
    /// Largest of the three component error estimates.
    pub fn max_error(&self) -> f64 {
        self.quad_error
            .bending
            .max(self.quad_error.area)
            .max(self.quad_error.volume)
    }
}

pub fn helfrich_energy<P: ProfileCurve + ?Sized>(
    profile: &P,
    params: &MembraneParams,
) -> Result<EnergyBreakdown, FunctionalError> {
    helfrich_energy_with(profile, params, SignConvention::RESOLVED)
}

pub fn helfrich_energy_with<P: ProfileCurve + ?Sized>(
    profile: &P,
    params: &MembraneParams,
    convention: SignConvention,
) -> Result<EnergyBreakdown, FunctionalError> {
    let bending = bending_energy(profile, params, convention)?;
    let area = surface_area(profile)?;
    let volume = enclosed_volume(profile)?;
    Ok(EnergyBreakdown {
        bending: bending.value,
        area: area.value,
        volume: volume.value,
        total: bending.value + params.lambda() * area.value + params.delta_p() * volume.value,
        quad_error: QuadErrors {
            bending: bending.error,
            area: area.error,
            volume: volume.error,
        },
    })
}

/// Weight of the least-squares residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Weight {
    /// `2 pi r sqrt(1 + u^2)`, the surface measure.
    #[default]
    SurfaceMeasure,
    Uniform,
}

impl Weight {
    pub fn label(self) -> &'static str {
        match self {
            Weight::SurfaceMeasure => "surface",
            Weight::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    pub weight: Weight,
    /// Fraction of the domain width dropped at each end.
    pub margin: f64,
    /// Gauss-Legendre panels of the coarse grid; the fine grid doubles them.
    pub panels: usize,
    pub order: usize,
    /// Half-width of the `c0` search interval, in units of `1/r_max`.
    pub c0_range: f64,
    pub seeds: usize,
    /// Relative width at which the golden-section search stops.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Relative eigenvalue below which the `(P, lambda)` system counts as singular.
    pub rank_tol: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            weight: Weight::SurfaceMeasure,
            margin: 0.05,
            panels: 32,
            order: 8,
            c0_range: 10.0,
            seeds: 64,
            tolerance: 1e-10,
            max_iterations: 200,
            rank_tol: 1e-10,
        }
    }
}

impl FitOptions {
    pub fn validate(&self) -> Result<(), FunctionalError> {
        let bad = |name, reason| Err(FunctionalError::InvalidOption { name, reason });
        if !(self.margin >= 0.0 && self.margin < 0.5) {
            return bad("margin", "must lie in [0, 0.5)");
        }
        if self.panels == 0 || self.order == 0 {
            return bad("panels", "panels and order must be positive");
        }
        if !(self.c0_range.is_finite() && self.c0_range > 0.0) {
            return bad("c0_range", "must be finite and > 0");
        }
        if self.seeds < 3 {
            return bad("seeds", "need at least 3 seed points");
        }
        if !(self.tolerance > 0.0) {
            return bad("tolerance", "must be > 0");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub epsilon: f64,
    pub c0_opt: f64,
    pub lambda_opt: f64,
    pub p_opt: f64,
    /// `sqrt(J)` on the fine grid.
    pub l2_residual: f64,
    pub sup_residual: f64,
    /// Golden-section steps.
    pub iterations: usize,
    /// The `(P, lambda)` normal matrix was rank deficient; the minimum-norm
    /// solution is reported.
    pub degenerate: bool,
    /// `|l2(coarse) - l2(fine)|`.
    pub quad_error: f64,
    /// Unbracketed minimum over all of `(c0, P, lambda)` on the fine grid.
    pub global: GlobalFit,
}

/// The residual is linear in `(c0, P, lambda + c0^2/2)` because the `c0^2`
/// column equals half the tension column, so its global least-squares
/// minimum is a three-column linear problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlobalFit {
    pub c0: f64,
    pub p: f64,
    pub lambda: f64,
    pub l2_residual: f64,
    /// Numerical rank of the three columns.
    pub rank: usize,
    /// `|l2(coarse) - l2(fine)|` of the global minimum.
    pub quad_error: f64,
}

/// Residual data on a fixed quadrature grid, for repeated inner solves.
#[derive(Debug, Clone)]
pub struct FitGrid {
    parts: Vec<UFormParts>,
    weights: Vec<f64>,
    rank_tol: f64,
}

/// Optimal `(P, lambda)` and objective at one `c0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSolution {
    pub c0: f64,
    pub p: f64,
    pub lambda: f64,
    pub objective: f64,
    pub degenerate: bool,
}

impl FitGrid {
    pub fn new<P: ProfileCurve + ?Sized>(
        profile: &P,
        weight: Weight,
        margin: f64,
        panels: usize,
        order: usize,
        rank_tol: f64,
    ) -> Result<FitGrid, FunctionalError> {
        let (a, b) = profile.domain().shrink(margin);
        let (nodes, qw) = composite_gauss(a, b, panels, order);
        let mut parts = Vec::with_capacity(nodes.len());
        let mut weights = Vec::with_capacity(nodes.len());
        for (&r, &w) in nodes.iter().zip(&qw) {
            let j = profile.jet(r)?;
            parts.push(u_form_parts(&j));
            weights.push(match weight {
                Weight::SurfaceMeasure => w * 2.0 * PI * r * j.arc,
                Weight::Uniform => w,
            });
        }
        Ok(FitGrid {
            parts,
            weights,
            rank_tol,
        })
    }

    fn fixed(p: &UFormParts, c0: f64) -> f64 {
        p.geometric + c0 * c0 * p.c0_sq + c0 * p.c0_lin
    }

    pub fn residuals(&self, c0: f64, p: f64, lambda: f64) -> impl Iterator<Item = f64> + '_ {
        self.parts
            .iter()
            .map(move |q| Self::fixed(q, c0) + p * q.pressure + lambda * q.tension)
    }

    pub fn objective(&self, c0: f64, p: f64, lambda: f64) -> f64 {
        self.residuals(c0, p, lambda)
            .zip(&self.weights)
            .map(|(e, w)| w * e * e)
            .sum()
    }

    pub fn sup(&self, c0: f64, p: f64, lambda: f64) -> f64 {
        self.residuals(c0, p, lambda).fold(0.0, |m, e| m.max(e.abs()))
    }

    /// Gradient of the objective in `(P, lambda)`.
    pub fn gradient_p_lambda(&self, c0: f64, p: f64, lambda: f64) -> [f64; 2] {
        let mut g = [0.0; 2];
        for ((e, q), w) in self.residuals(c0, p, lambda).zip(&self.parts).zip(&self.weights) {
            g[0] += 2.0 * w * e * q.pressure;
            g[1] += 2.0 * w * e * q.tension;
        }
        g
    }

    /// Global minimum over `(c0, P, lambda)`, minimum-norm in the scaled
    /// columns when they are dependent.
    pub fn global(&self) -> GlobalFit {
        let cols = |q: &UFormParts| [q.c0_lin, q.pressure, q.tension];
        let n = self.parts.len();
        let mut a: [Vec<f64>; 3] = [Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n)];
        let mut rhs = Vec::with_capacity(n);
        for (q, &w) in self.parts.iter().zip(&self.weights) {
            let sw = w.sqrt();
            for (col, c) in a.iter_mut().zip(cols(q)) {
                col.push(sw * c);
            }
            rhs.push(-sw * q.geometric);
        }
        let norms = a.clone().map(|c| {
            let n = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 0.0 {
                n
            } else {
                1.0
            }
        });
        for (col, &nrm) in a.iter_mut().zip(&norms) {
            col.iter_mut().for_each(|x| *x /= nrm);
        }
        let (sigma, v) = one_sided_jacobi(&mut a);
        let top = sigma.iter().fold(0.0f64, |m, &x| m.max(x));
        let mut x = [0.0f64; 3];
        let mut rank = 0;
        for k in 0..3 {
            if sigma[k] > self.rank_tol * top {
                rank += 1;
                let coef = a[k].iter().zip(&rhs).map(|(u, b)| u * b).sum::<f64>() / (sigma[k] * sigma[k]);
                for i in 0..3 {
                    x[i] += coef * v[i][k];
                }
            }
        }
        let c0 = x[0] / norms[0];
        let p = x[1] / norms[1];
        let lambda = x[2] / norms[2] - 0.5 * c0 * c0;
        GlobalFit {
            c0,
            p,
            lambda,
            l2_residual: self.objective(c0, p, lambda).max(0.0).sqrt(),
            rank,
            quad_error: 0.0,
        }
    }

    /// Closed-form least squares in `(P, lambda)` at fixed `c0`.
    pub fn inner(&self, c0: f64) -> InnerSolution {
        let (mut app, mut apl, mut all, mut bp, mut bl) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for (q, &w) in self.parts.iter().zip(&self.weights) {
            let y = Self::fixed(q, c0);
            app += w * q.pressure * q.pressure;
            apl += w * q.pressure * q.tension;
            all += w * q.tension * q.tension;
            bp -= w * q.pressure * y;
            bl -= w * q.tension * y;
        }
        let (x, degenerate) = solve_sym2(app, apl, all, bp, bl, self.rank_tol);
        InnerSolution {
            c0,
            p: x[0],
            lambda: x[1],
            objective: self.objective(c0, x[0], x[1]),
            degenerate,
        }
    }
}

/// Minimum-norm solution of the symmetric system `[[a, b], [b, c]] x = y`.
fn solve_sym2(a: f64, b: f64, c: f64, y0: f64, y1: f64, rank_tol: f64) -> ([f64; 2], bool) {
    let mean = 0.5 * (a + c);
    let diff = 0.5 * (a - c);
    let rad = diff.hypot(b);
    let (mu1, mu2) = (mean + rad, mean - rad);
    if !(mu1 > 0.0) {
        return ([0.0, 0.0], true);
    }
    // unit eigenvector of mu1
    let (v0, v1) = if rad == 0.0 {
        (1.0, 0.0)
    } else if diff >= 0.0 {
        let n = (rad + diff).hypot(b);
        ((rad + diff) / n, b / n)
    } else {
        let n = b.hypot(rad - diff);
        (b / n, (rad - diff) / n)
    };
    if mu2 <= rank_tol * mu1 {
        let k = (v0 * y0 + v1 * y1) / mu1;
        return ([k * v0, k * v1], true);
    }
    let det = a * c - b * b;
    ([(c * y0 - b * y1) / det, (a * y1 - b * y0) / det], false)
}

/// One-sided Jacobi SVD of three columns. On return the columns are
/// `sigma_k u_k`; the singular values and the right vectors (as columns)
/// are returned.
fn one_sided_jacobi(a: &mut [Vec<f64>; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..60 {
        let mut rotated = false;
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let alpha = dot(&a[p], &a[p]);
            let beta = dot(&a[q], &a[q]);
            let gamma = dot(&a[p], &a[q]);
            if gamma.abs() <= 1e-15 * (alpha * beta).sqrt() || gamma == 0.0 {
                continue;
            }
            rotated = true;
            let zeta = (beta - alpha) / (2.0 * gamma);
            let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
            let t = if zeta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = c * t;
            let (lo, hi) = a.split_at_mut(q);
            for (xp, xq) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                let (ap, aq) = (*xp, *xq);
                *xp = c * ap - s * aq;
                *xq = s * ap + c * aq;
            }
            for row in v.iter_mut() {
                let (vp, vq) = (row[p], row[q]);
                row[p] = c * vp - s * vq;
                row[q] = s * vp + c * vq;
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma = [0, 1, 2].map(|k| dot(&a[k], &a[k]).sqrt());
    (sigma, v)
}

/// Best-fit parameters for the Cassini oval with biconcavity `epsilon`.
pub fn fit_parameters(epsilon: f64, opts: &FitOptions) -> Result<FitResult, FunctionalError> {
    let oval = CassiniOval::new(epsilon)?;
    let mut res = fit_profile(&oval, opts)?;
    res.epsilon = epsilon;
    Ok(res)
}

/// Fit on any profile; `epsilon` in the result is NaN.
pub fn fit_profile<P: ProfileCurve + ?Sized>(profile: &P, opts: &FitOptions) -> Result<FitResult, FunctionalError> {
    opts.validate()?;
    let coarse = FitGrid::new(
        profile,
        opts.weight,
        opts.margin,
        opts.panels,
        opts.order,
        opts.rank_tol,
    )?;
    let fine = FitGrid::new(
        profile,
        opts.weight,
        opts.margin,
        2 * opts.panels,
        opts.order,
        opts.rank_tol,
    )?;
    let scale = profile.domain().hi;
    let range = opts.c0_range / scale;
    let n = opts.seeds;
    let seeds: Vec<f64> = (0..n)
        .map(|k| -range + 2.0 * range * k as f64 / (n - 1) as f64)
        .collect();
    let values: Vec<f64> = seeds.iter().map(|&c| coarse.inner(c).objective).collect();
    let best = values
        .iter()
        .enumerate()
        .fold(0, |b, (i, v)| if *v < values[b] { i } else { b });
    let mut lo = seeds[best.saturating_sub(1)];
    let mut hi = seeds[(best + 1).min(n - 1)];
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = coarse.inner(x1).objective;
    let mut f2 = coarse.inner(x2).objective;
    let mut iterations = 0;
    while hi - lo > opts.tolerance * (1.0 + lo.abs().max(hi.abs())) && iterations < opts.max_iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = coarse.inner(x1).objective;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = coarse.inner(x2).objective;
        }
        iterations += 1;
    }
    let mut c0 = 0.5 * (lo + hi);
    if values[best] < coarse.inner(c0).objective {
        c0 = seeds[best];
    }
    let sol_coarse = coarse.inner(c0);
    let sol = fine.inner(c0);
    let l2 = sol.objective.max(0.0).sqrt();
    Ok(FitResult {
        epsilon: f64::NAN,
        c0_opt: c0,
        lambda_opt: sol.lambda,
        p_opt: sol.p,
        l2_residual: l2,
        sup_residual: fine.sup(c0, sol.p, sol.lambda),
        iterations,
        degenerate: sol.degenerate || sol_coarse.degenerate,
        quad_error: (sol_coarse.objective.max(0.0).sqrt() - l2).abs(),
        global: {
            let mut g = fine.global();
            g.quad_error = (coarse.global().l2_residual - g.l2_residual).abs();
            g
        },
    })
}
