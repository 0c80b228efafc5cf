//! Exact `u'''` of the Cassini slope, compiled to a floating-point evaluator.

use alloc::vec::Vec;
use_float!();

use super::mpoly::{rat_to_f64, MPoly, Var};
use super::radexpr::{radicals_f64, BasisDerivatives, RadExpr};
use super::symbolic::build_u_symbolic;
use crate::geometry::{CassiniOval, Endpoint, GeometryError, Interval, Jet, ProfileCurve};

#[derive(Debug, Clone)]
struct CompiledPoly {
    // (power of r, power of eps, coefficient)
    terms: Vec<(u16, u16, f64)>,
}

impl CompiledPoly {
    fn new(p: &MPoly) -> CompiledPoly {
        let terms = p
            .terms()
            .map(|(m, c)| (m.exp(Var::R), m.exp(Var::Eps), rat_to_f64(c)))
            .collect();
        CompiledPoly { terms }
    }

    fn eval(&self, rp: &[f64], ep: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|&(a, b, c)| c * rp[a as usize] * ep[b as usize])
            .sum()
    }

    fn max_powers(&self) -> (usize, usize) {
        self.terms
            .iter()
            .fold((0, 0), |(a, b), &(x, y, _)| (a.max(x as usize), b.max(y as usize)))
    }
}

#[derive(Debug, Clone)]
struct CompiledComponent {
    index: usize,
    num: CompiledPoly,
    den: Vec<(CompiledPoly, i32)>,
}

/// `d^3 u / dr^3` of the rescaled Cassini oval, derived exactly in the
/// radical tower and evaluated in floating point.
#[derive(Debug, Clone)]
pub struct SlopeThirdDerivative {
    symbolic: RadExpr,
    parts: Vec<CompiledComponent>,
    max_r: usize,
    max_eps: usize,
}

impl SlopeThirdDerivative {
    pub fn build() -> SlopeThirdDerivative {
        let d = BasisDerivatives::new();
        let u = build_u_symbolic();
        let u3 = u.differentiate_with(&d).differentiate_with(&d).differentiate_with(&d);
        SlopeThirdDerivative::compile(u3)
    }

    /// Compiles any `c0, P, L`-free expression in the tower.
    pub fn compile(symbolic: RadExpr) -> SlopeThirdDerivative {
        let mut parts = Vec::new();
        let (mut max_r, mut max_eps) = (0, 0);
        for (index, c) in symbolic.components().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let num = CompiledPoly::new(c.numerator());
            let den: Vec<(CompiledPoly, i32)> = c
                .denominator_factors()
                .iter()
                .map(|(f, e)| (CompiledPoly::new(f), *e as i32))
                .collect();
            for p in core::iter::once(&num).chain(den.iter().map(|(p, _)| p)) {
                let (a, b) = p.max_powers();
                max_r = max_r.max(a);
                max_eps = max_eps.max(b);
            }
            parts.push(CompiledComponent { index, num, den });
        }
        SlopeThirdDerivative {
            symbolic,
            parts,
            max_r,
            max_eps,
        }
    }

    pub fn symbolic(&self) -> &RadExpr {
        &self.symbolic
    }

    pub fn eval(&self, r: f64, eps: f64) -> f64 {
        let powers = |x: f64, n: usize| {
            let mut v = Vec::with_capacity(n + 1);
            let mut acc = 1.0;
            for _ in 0..=n {
                v.push(acc);
                acc *= x;
            }
            v
        };
        let rp = powers(r, self.max_r);
        let ep = powers(eps, self.max_eps);
        let rad = radicals_f64(r, eps);
        let mut total = 0.0;
        for part in &self.parts {
            let mut v = part.num.eval(&rp, &ep);
            for (f, e) in &part.den {
                v /= f.eval(&rp, &ep).powi(*e);
            }
            for (bit, x) in [(1usize, rad[0]), (2, rad[1]), (4, rad[2])] {
                if part.index & bit != 0 {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }
}

/// A Cassini oval that also reports the exact third slope derivative.
#[derive(Debug, Clone, Copy)]
pub struct CassiniWithThird<'a> {
    pub oval: CassiniOval,
    pub third: &'a SlopeThirdDerivative,
}

impl<'a> CassiniWithThird<'a> {
    pub fn new(oval: CassiniOval, third: &'a SlopeThirdDerivative) -> Self {
        CassiniWithThird { oval, third }
    }
}

impl ProfileCurve for CassiniWithThird<'_> {
    fn domain(&self) -> Interval {
        self.oval.domain()
    }

    fn jet(&self, r: f64) -> Result<Jet, GeometryError> {
        self.oval.jet(r)
    }

    fn jet_near(&self, end: Endpoint, gap: f64) -> Result<Jet, GeometryError> {
        self.oval.jet_near(end, gap)
    }

    fn third_derivative(&self, r: f64) -> Option<Result<f64, GeometryError>> {
        Some(self.oval.jet(r).map(|_| self.third.eval(r, self.oval.epsilon())))
    }

    fn axis_slope_derivative(&self) -> Option<f64> {
        self.oval.axis_slope_derivative()
    }
}
