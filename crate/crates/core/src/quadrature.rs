//! One-dimensional quadrature: adaptive Gauss-Kronrod (7/15), fixed composite
//! Gauss-Legendre panels, and Chebyshev nodes with Fejér weights.

use alloc::vec::Vec;
use core::f64::consts::PI;
use_float!();

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error("quadrature did not reach tolerance after {intervals} subintervals (estimate {error:e}, value {value:e})")]
    NotConverged { value: f64, error: f64, intervals: usize },
    #[error("integrand returned a non-finite value at x = {0:e}")]
    NonFinite(f64),
}

/// Value of an integral together with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

impl Estimate {
    pub const ZERO: Estimate = Estimate { value: 0.0, error: 0.0 };

    pub fn scale(self, k: f64) -> Estimate {
        Estimate {
            value: self.value * k,
            error: self.error * k.abs(),
        }
    }
}

impl core::ops::Add for Estimate {
    type Output = Estimate;
    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

// Kronrod 15-point abscissae (non-negative half, descending) with Gauss 7-point subset.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |f: &mut F, x: f64| {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(QuadratureError::NonFinite(x))
        }
    };
    let fc = eval(f, center)?;
    let mut pairs = [(0.0f64, 0.0f64); 7];
    for (p, &x) in pairs.iter_mut().zip(XGK.iter()) {
        let dx = half * x;
        *p = (eval(f, center - dx)?, eval(f, center + dx)?);
    }
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    for (j, (&(f1, f2), &w)) in pairs.iter().zip(WGK.iter()).enumerate() {
        kronrod += w * (f1 + f2);
        abs_sum += w * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (&(f1, f2), &w) in pairs.iter().zip(WGK.iter()) {
        asc += w * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * half;
    let resabs = abs_sum * half.abs();
    let resasc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    // QUADPACK rescaling of the raw Gauss-Kronrod difference
    if resasc != 0.0 && err != 0.0 {
        err = resasc * Float::min(1.0, Float::powf(200.0 * err / resasc, 1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok(Estimate { value, error: err })
}

/// Settings for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct AdaptiveOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for AdaptiveOptions {
    fn default() -> Self {
        AdaptiveOptions {
            abs_tol: 1e-14,
            rel_tol: 1e-11,
            max_intervals: 4000,
        }
    }
}

/// Globally adaptive Gauss-Kronrod integration of `f` over `[a, b]`.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate falls below `max(abs_tol, rel_tol * |value|)`. Subintervals are
/// summed in left-to-right order so the result does not depend on the
/// refinement history.
pub fn integrate_adaptive<F>(mut f: F, a: f64, b: f64, opts: AdaptiveOptions) -> Result<Estimate, QuadratureError>
where
    F: FnMut(f64) -> f64,
{
    if a == b {
        return Ok(Estimate::ZERO);
    }
    let first = gk15(&mut f, a, b)?;
    let mut pieces: Vec<(f64, f64, Estimate)> = Vec::new();
    pieces.push((a, b, first));
    loop {
        let (value, error) = totals(&pieces);
        let target = opts.abs_tol.max(opts.rel_tol * value.abs());
        if error <= target {
            return Ok(Estimate { value, error });
        }
        if pieces.len() >= opts.max_intervals {
            return Err(QuadratureError::NotConverged {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2.error.partial_cmp(&y.1 .2.error).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (lo, hi, _) = pieces[worst];
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval exhausted at machine resolution
            return Err(QuadratureError::NotConverged {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        let left = gk15(&mut f, lo, mid)?;
        let right = gk15(&mut f, mid, hi)?;
        pieces[worst] = (lo, mid, left);
        pieces.insert(worst + 1, (mid, hi, right));
    }
}

fn totals(pieces: &[(f64, f64, Estimate)]) -> (f64, f64) {
    let mut value = 0.0;
    let mut comp = 0.0;
    let mut error = 0.0;
    for &(_, _, e) in pieces {
        // Kahan summation
        let y = e.value - comp;
        let t = value + y;
        comp = (t - value) - y;
        value = t;
        error += e.error;
    }
    (value, error)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let mut x = -Float::cos(PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` points on
/// `[a, b]`. Returns `(nodes, weights)` in increasing node order.
pub fn composite_gauss(a: f64, b: f64, panels: usize, order: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for p in 0..panels {
        let lo = a + h * p as f64;
        for (xi, wi) in x.iter().zip(w.iter()) {
            nodes.push(lo + 0.5 * h * (xi + 1.0));
            weights.push(0.5 * h * wi);
        }
    }
    (nodes, weights)
}

/// Chebyshev points of the first kind mapped to `[a, b]`, increasing, with the
/// matching Fejér (first rule) quadrature weights.
pub fn chebyshev_fejer(a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let nf = n as f64;
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for k in 0..n {
        // theta decreasing from pi so that nodes increase
        let theta = PI * (nf - k as f64 - 0.5) / nf;
        nodes.push(mid + half * Float::cos(theta));
        let mut s = 0.0;
        for j in 1..=(n / 2) {
            let jf = j as f64;
            s += Float::cos(2.0 * jf * theta) / (4.0 * jf * jf - 1.0);
        }
        weights.push(half * (2.0 / nf) * (1.0 - 2.0 * s));
    }
    (nodes, weights)
}
