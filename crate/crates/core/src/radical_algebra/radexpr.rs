//! Elements of `Q(r, eps, c0, P, L)(s, t, w)` with
//! `s^2 = 1 + 4 eps^2 r^2`, `t^2 = s - eps^2 - r^2`, `w^2 = s - eps^2`.
//!
//! An element is stored as eight rational-function coefficients on the basis
//! `s^i t^j w^k`, `i, j, k` in `{0, 1}`; component index `i + 2j + 4k`.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use_float!();

use super::mpoly::{rat_to_f64, MPoly, Var, NVARS};
use super::ratfn::{q_poly, RatFn};
use super::AlgebraError;

pub const S: usize = 1;
pub const T: usize = 2;
pub const W: usize = 4;

/// Basis labels in component order.
pub const BASIS_LABELS: [&str; 8] = ["1", "s", "t", "st", "w", "sw", "tw", "stw"];

#[derive(Debug, Clone, PartialEq)]
pub struct RadExpr {
    c: [RatFn; 8],
}

fn eps2() -> MPoly {
    MPoly::var(Var::Eps).pow(2)
}

/// `b_i * b_j` as `(component, coefficient)` pairs.
fn basis_product(a: usize, b: usize) -> Vec<(usize, MPoly)> {
    let base = a ^ b;
    // running factor p0 + p1 * s from the squared radicals
    let mut p0 = MPoly::one();
    let mut p1 = MPoly::zero();
    let q = q_poly();
    let shared = a & b;
    if shared & S != 0 {
        p0 = &p0 * &q;
        p1 = &p1 * &q;
    }
    for (bit, shift) in [(T, &eps2() + &MPoly::var(Var::R).pow(2)), (W, eps2())] {
        if shared & bit != 0 {
            // (p0 + p1 s)(s - shift) = (p1 Q - p0 shift) + (p0 - p1 shift) s
            let n0 = &(&p1 * &q) - &(&p0 * &shift);
            let n1 = &p0 - &(&p1 * &shift);
            p0 = n0;
            p1 = n1;
        }
    }
    let mut out = Vec::new();
    if !p0.is_zero() {
        out.push((base, p0));
    }
    if !p1.is_zero() {
        if base & S == 0 {
            out.push((base | S, p1));
        } else {
            out.push((base & !S, &p1 * &q));
        }
    }
    out
}

impl RadExpr {
    pub fn zero() -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|_| RatFn::zero()),
        }
    }

    pub fn one() -> RadExpr {
        RadExpr::scalar(RatFn::one())
    }

    pub fn scalar(f: RatFn) -> RadExpr {
        let mut x = RadExpr::zero();
        x.c[0] = f;
        x
    }

    pub fn poly(p: MPoly) -> RadExpr {
        RadExpr::scalar(RatFn::poly(p))
    }

    pub fn var(v: Var) -> RadExpr {
        RadExpr::poly(MPoly::var(v))
    }

    pub fn basis(index: usize) -> RadExpr {
        let mut x = RadExpr::zero();
        x.c[index] = RatFn::one();
        x
    }

    pub fn s() -> RadExpr {
        RadExpr::basis(S)
    }

    pub fn t() -> RadExpr {
        RadExpr::basis(T)
    }

    pub fn w() -> RadExpr {
        RadExpr::basis(W)
    }

    pub fn from_components(c: [RatFn; 8]) -> RadExpr {
        RadExpr { c }
    }

    /// `coef * s^i t^j w^k` for arbitrary exponents, reduced.
    pub fn monomial(coef: RatFn, i: u32, j: u32, k: u32) -> RadExpr {
        let mut x = RadExpr::scalar(coef);
        for (base, e) in [(RadExpr::s(), i), (RadExpr::t(), j), (RadExpr::w(), k)] {
            for _ in 0..e {
                x = &x * &base;
            }
        }
        x
    }

    pub fn component(&self, index: usize) -> &RatFn {
        &self.c[index]
    }

    pub fn components(&self) -> &[RatFn; 8] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    /// Whether any component carrying the given radical bit is nonzero.
    pub fn involves(&self, bit: usize) -> bool {
        self.c.iter().enumerate().any(|(i, x)| i & bit != 0 && !x.is_zero())
    }

    pub fn scale(&self, f: &RatFn) -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|i| &self.c[i] * f),
        }
    }

    /// Image under the automorphism flipping the sign of one radical.
    pub fn conjugate(&self, bit: usize) -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|i| if i & bit != 0 { -&self.c[i] } else { self.c[i].clone() }),
        }
    }

    /// Multiplicative inverse with a radical-free denominator, by successive
    /// conjugation in `w`, then `t`, then `s`.
    pub fn inverse(&self) -> Result<RadExpr, AlgebraError> {
        let mut x = self.clone();
        let mut acc = RadExpr::one();
        for bit in [W, T, S] {
            if x.involves(bit) {
                let cj = x.conjugate(bit);
                acc = &acc * &cj;
                x = &x * &cj;
            }
        }
        debug_assert!((1..8).all(|i| x.c[i].is_zero()));
        let norm = &x.c[0];
        if norm.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(acc.scale(&norm.inv()?))
    }

    pub fn div(&self, other: &RadExpr) -> Result<RadExpr, AlgebraError> {
        Ok(self * &other.inverse()?)
    }

    /// Exact `d/dr`.
    pub fn differentiate(&self) -> RadExpr {
        let d = BasisDerivatives::new();
        self.differentiate_with(&d)
    }

    pub fn differentiate_with(&self, d: &BasisDerivatives) -> RadExpr {
        let mut out = RadExpr::zero();
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out.c[i] = &out.c[i] + &c.derivative(Var::R);
            if i != 0 {
                out = &out + &d.basis[i].scale(c);
            }
        }
        out
    }

    /// Substitutes an exact value for one of the base variables.
    pub fn subs(&self, v: Var, value: &BigRational) -> Result<RadExpr, AlgebraError> {
        let mut c: [RatFn; 8] = core::array::from_fn(|_| RatFn::zero());
        for (i, x) in self.c.iter().enumerate() {
            c[i] = x.subs(v, value)?;
        }
        Ok(RadExpr { c })
    }

    /// Floating-point value at an interior point of the Cassini domain.
    pub fn eval_f64(&self, x: &[f64; NVARS]) -> f64 {
        let rad = radicals_f64(x[0], x[1]);
        let mut acc = 0.0;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc += c.eval_f64(x) * basis_value(&rad, i);
        }
        acc
    }

    /// Exact value at a rational point. Radicals whose squares are rational
    /// squares are folded into the rational coefficients; the rest remain
    /// symbolic.
    pub fn specialize(&self, x: &[BigRational; NVARS]) -> Result<ExactValue, AlgebraError> {
        let mut c: [BigRational; 8] = core::array::from_fn(|_| BigRational::zero());
        for (i, f) in self.c.iter().enumerate() {
            if !f.is_zero() {
                c[i] = f.eval(x)?;
            }
        }
        let (r, e) = (&x[0], &x[1]);
        let e2 = e * e;
        let s2 = BigRational::one() + BigRational::from_integer(BigInt::from(4)) * &e2 * r * r;
        let mut squares: [BigRational; 3] = [s2, BigRational::zero(), BigRational::zero()];
        let mut roots: [Option<BigRational>; 3] = [None, None, None];
        roots[0] = rational_sqrt(&squares[0]);
        if let Some(s) = &roots[0] {
            squares[1] = s - &e2 - r * r;
            squares[2] = s - &e2;
            roots[1] = rational_sqrt(&squares[1]);
            roots[2] = rational_sqrt(&squares[2]);
        }
        for (slot, bit) in [(0usize, S), (1, T), (2, W)] {
            if let Some(v) = &roots[slot] {
                for i in 0..8 {
                    if i & bit != 0 {
                        let moved = core::mem::take(&mut c[i]) * v;
                        c[i & !bit] += moved;
                    }
                }
            }
        }
        Ok(ExactValue {
            components: c,
            rational_radicals: roots,
        })
    }
}

/// `s, t, w` in floating point, with `t^2` written as a product so it keeps
/// its relative accuracy near the rim.
pub fn radicals_f64(r: f64, eps: f64) -> [f64; 3] {
    let e2 = eps * eps;
    let r2 = r * r;
    let s = (1.0 + 4.0 * e2 * r2).sqrt();
    let t2 = ((1.0 + e2) - r2) * (r2 + (1.0 - e2)) / (s + e2 + r2);
    [s, t2.sqrt(), (t2 + r2).sqrt()]
}

fn basis_value(rad: &[f64; 3], i: usize) -> f64 {
    let mut v = 1.0;
    if i & S != 0 {
        v *= rad[0];
    }
    if i & T != 0 {
        v *= rad[1];
    }
    if i & W != 0 {
        v *= rad[2];
    }
    v
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// A radical expression evaluated at a rational point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactValue {
    /// Rational coefficients on the basis of the radicals left symbolic.
    pub components: [BigRational; 8],
    /// Exact values of `s, t, w` where rational.
    pub rational_radicals: [Option<BigRational>; 3],
}

impl ExactValue {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// The value if every surviving radical folded away.
    pub fn as_rational(&self) -> Option<&BigRational> {
        self.components[1..]
            .iter()
            .all(|c| c.is_zero())
            .then_some(&self.components[0])
    }

    pub fn to_f64(&self, r: f64, eps: f64) -> f64 {
        let rad = radicals_f64(r, eps);
        self.components
            .iter()
            .enumerate()
            .map(|(i, c)| rat_to_f64(c) * basis_value(&rad, i))
            .sum()
    }
}

/// `d/dr` of each basis monomial, computed once and reused.
#[derive(Debug, Clone)]
pub struct BasisDerivatives {
    basis: [RadExpr; 8],
}

impl BasisDerivatives {
    pub fn new() -> BasisDerivatives {
        let r = MPoly::var(Var::R);
        let four_e2_r = (&eps2() * &r).scale(&super::mpoly::rat_int(4));
        // ds = 4 eps^2 r / s = 4 eps^2 r s / Q
        let ds = RadExpr::s().scale(&RatFn::new(four_e2_r, &q_poly()).expect("Q is nonzero"));
        let inv_t = RadExpr::t().inverse().expect("t is invertible");
        let inv_w = RadExpr::w().inverse().expect("w is invertible");
        let half = RatFn::constant(super::mpoly::rat(1, 2));
        let dt = (&(&ds - &RadExpr::poly(r.scale(&super::mpoly::rat_int(2)))) * &inv_t).scale(&half);
        let dw = (&ds * &inv_w).scale(&half);
        let mut basis: [RadExpr; 8] = core::array::from_fn(|_| RadExpr::zero());
        for (i, slot) in basis.iter_mut().enumerate().skip(1) {
            let mut acc = RadExpr::zero();
            for (bit, d) in [(S, &ds), (T, &dt), (W, &dw)] {
                if i & bit != 0 {
                    acc = &acc + &(d * &RadExpr::basis(i & !bit));
                }
            }
            *slot = acc;
        }
        BasisDerivatives { basis }
    }

    pub fn of(&self, index: usize) -> &RadExpr {
        &self.basis[index]
    }
}

impl Default for BasisDerivatives {
    fn default() -> Self {
        BasisDerivatives::new()
    }
}

impl<'a> Add<&'a RadExpr> for &'a RadExpr {
    type Output = RadExpr;
    fn add(self, rhs: &RadExpr) -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|i| &self.c[i] + &rhs.c[i]),
        }
    }
}

impl<'a> Sub<&'a RadExpr> for &'a RadExpr {
    type Output = RadExpr;
    fn sub(self, rhs: &RadExpr) -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|i| &self.c[i] - &rhs.c[i]),
        }
    }
}

impl<'a> Mul<&'a RadExpr> for &'a RadExpr {
    type Output = RadExpr;
    fn mul(self, rhs: &RadExpr) -> RadExpr {
        let mut out = RadExpr::zero();
        for (a, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in rhs.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = x * y;
                for (idx, p) in basis_product(a, b) {
                    let term = if p.is_one() {
                        prod.clone()
                    } else {
                        &prod * &RatFn::poly(p)
                    };
                    out.c[idx] = &out.c[idx] + &term;
                }
            }
        }
        out
    }
}

impl Neg for &RadExpr {
    type Output = RadExpr;
    fn neg(self) -> RadExpr {
        RadExpr {
            c: core::array::from_fn(|i| -&self.c[i]),
        }
    }
}

impl From<MPoly> for RadExpr {
    fn from(p: MPoly) -> RadExpr {
        RadExpr::poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical_algebra::mpoly::{rat, rat_int};

    #[test]
    fn squares_reduce() {
        let s = RadExpr::s();
        assert_eq!(&s * &s, RadExpr::poly(q_poly()));
        let t = RadExpr::t();
        let t2 = &RadExpr::s() - &RadExpr::poly(&eps2() + &MPoly::var(Var::R).pow(2));
        assert_eq!(&t * &t, t2);
        let w = RadExpr::w();
        assert_eq!(&w * &w, &RadExpr::s() - &RadExpr::poly(eps2()));
        assert_eq!(RadExpr::monomial(RatFn::one(), 2, 0, 0), RadExpr::poly(q_poly()));
    }

    #[test]
    fn inverse_of_radical_sum() {
        let x = &(&RadExpr::s() + &RadExpr::t()) + &(&RadExpr::w() * &RadExpr::var(Var::C0));
        let y = x.inverse().unwrap();
        assert_eq!(&x * &y, RadExpr::one());
    }

    #[test]
    fn derivative_of_s() {
        let ds = RadExpr::s().differentiate();
        let e2r = (&eps2() * &MPoly::var(Var::R)).scale(&rat_int(4));
        let expect = RadExpr::s().scale(&RatFn::new(e2r, &q_poly()).unwrap());
        assert_eq!(ds, expect);
        assert!(RadExpr::var(Var::C0).differentiate().is_zero());
    }

    #[test]
    fn rational_radicals_fold() {
        // eps = 0, r = 3/5: s = 1, t = 4/5, w = 1
        let x = &(&RadExpr::s() * &RadExpr::t()) * &RadExpr::w();
        let pt = [rat(3, 5), rat(0, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        let v = x.specialize(&pt).unwrap();
        assert_eq!(v.as_rational(), Some(&rat(4, 5)));
    }
}
