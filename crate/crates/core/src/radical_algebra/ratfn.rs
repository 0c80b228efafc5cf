//! Rational functions `num / prod(f_i^e_i)` with the denominator kept as a
//! product of monic factors. The factors met in the Cassini tower are
//! `r`, `eps`, `1 + 4 eps^2 r^2`, `1 + eps^2 - r^2`, `1 - eps^2 + r^2` and
//! `1 + 4 eps^2 r^2 - eps^4`; any other denominator becomes a factor of its own.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::mpoly::{rat_int, MPoly, Var, NVARS};
use super::AlgebraError;

#[derive(Debug, Clone, Eq)]
pub struct RatFn {
    num: MPoly,
    den: Vec<(MPoly, u32)>,
}

/// `1 + 4 eps^2 r^2`, the square of `s`.
pub fn q_poly() -> MPoly {
    let r = MPoly::var(Var::R);
    let e = MPoly::var(Var::Eps);
    &MPoly::one() + &(&(&r * &r) * &(&e * &e)).scale(&rat_int(4))
}

fn known_factors() -> [MPoly; 4] {
    let r2 = MPoly::var(Var::R).pow(2);
    let e2 = MPoly::var(Var::Eps).pow(2);
    let one = MPoly::one();
    let q = q_poly();
    let d1 = &(&one + &e2) - &r2;
    let d2 = &(&one - &e2) + &r2;
    let d3 = &q - &e2.pow(2);
    [q, d1, d2, d3].map(|p| p.monic().1)
}

impl PartialEq for RatFn {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.denominator() == &other.num * &self.denominator()
    }
}

impl RatFn {
    pub fn zero() -> RatFn {
        RatFn::poly(MPoly::zero())
    }

    pub fn one() -> RatFn {
        RatFn::poly(MPoly::one())
    }

    pub fn poly(p: MPoly) -> RatFn {
        RatFn {
            num: p,
            den: Vec::new(),
        }
    }

    pub fn constant(c: BigRational) -> RatFn {
        RatFn::poly(MPoly::constant(c))
    }

    /// `num / den`, with `den` split into factors and common factors cancelled.
    pub fn new(num: MPoly, den: &MPoly) -> Result<RatFn, AlgebraError> {
        let (c, factors) = factorize(den)?;
        let mut out = RatFn {
            num: num.scale(&c.recip()),
            den: factors,
        };
        out.cancel();
        Ok(out)
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator_factors(&self) -> &[(MPoly, u32)] {
        &self.den
    }

    pub fn denominator(&self) -> MPoly {
        self.den.iter().fold(MPoly::one(), |acc, (f, e)| &acc * &f.pow(*e))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&MPoly> {
        self.den.is_empty().then_some(&self.num)
    }

    pub fn scale(&self, c: &BigRational) -> RatFn {
        if c.is_zero() {
            return RatFn::zero();
        }
        RatFn {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        for (f, e) in self.den.iter_mut() {
            while *e > 0 {
                match self.num.div_exact(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.den.retain(|(_, e)| *e > 0);
    }

    fn merged(a: &[(MPoly, u32)], b: &[(MPoly, u32)], add: bool) -> Vec<(MPoly, u32)> {
        let mut out: Vec<(MPoly, u32)> = a.to_vec();
        for (f, e) in b {
            match out.iter_mut().find(|(g, _)| g == f) {
                Some((_, k)) => *k = if add { *k + e } else { (*k).max(*e) },
                None => out.push((f.clone(), *e)),
            }
        }
        out.sort_by(|x, y| x.0.cmp(&y.0));
        out
    }

    fn lift(&self, target: &[(MPoly, u32)]) -> MPoly {
        let mut n = self.num.clone();
        for (f, e) in target {
            let have = self.den.iter().find(|(g, _)| g == f).map(|(_, k)| *k).unwrap_or(0);
            if *e > have {
                n = &n * &f.pow(e - have);
            }
        }
        n
    }

    pub fn inv(&self) -> Result<RatFn, AlgebraError> {
        if self.num.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFn::new(self.denominator(), &self.num)
    }

    pub fn div(&self, other: &RatFn) -> Result<RatFn, AlgebraError> {
        Ok(self * &other.inv()?)
    }

    pub fn derivative(&self, v: Var) -> RatFn {
        let mut out = RatFn {
            num: self.num.derivative(v),
            den: self.den.clone(),
        };
        out.cancel();
        for (i, (f, e)) in self.den.iter().enumerate() {
            let df = f.derivative(v);
            if df.is_zero() {
                continue;
            }
            let mut den = self.den.clone();
            den[i].1 += 1;
            let mut part = RatFn {
                num: (&self.num * &df).scale(&-rat_int(*e as i64)),
                den,
            };
            part.cancel();
            out = &out + &part;
        }
        out
    }

    pub fn subs(&self, v: Var, value: &BigRational) -> Result<RatFn, AlgebraError> {
        let num = self.num.subs(v, value);
        let den = self.denominator().subs(v, value);
        if den.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        RatFn::new(num, &den)
    }

    pub fn eval(&self, x: &[BigRational; NVARS]) -> Result<BigRational, AlgebraError> {
        let mut d = BigRational::one();
        for (f, e) in &self.den {
            d *= num_traits::pow(f.eval(x), *e as usize);
        }
        if d.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: &[f64; NVARS]) -> f64 {
        let mut d = 1.0;
        for (f, e) in &self.den {
            let v = f.eval_f64(x);
            for _ in 0..*e {
                d *= v;
            }
        }
        self.num.eval_f64(x) / d
    }
}

/// Splits `p` into a rational constant and monic factors: monomial content,
/// then the tower factors by trial division, then whatever is left.
fn factorize(p: &MPoly) -> Result<(BigRational, Vec<(MPoly, u32)>), AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    let mut factors: Vec<(MPoly, u32)> = Vec::new();
    let content = p.monomial_content();
    let mut rest = p
        .div_exact(&MPoly::term(BigRational::one(), content))
        .expect("monomial content divides");
    for v in Var::ALL {
        let e = content.exp(v);
        if e > 0 {
            factors.push((MPoly::var(v), e as u32));
        }
    }
    for f in known_factors() {
        let mut e = 0;
        while rest.total_degree() >= f.total_degree() {
            match rest.div_exact(&f) {
                Some(q) => {
                    rest = q;
                    e += 1;
                }
                None => break,
            }
        }
        if e > 0 {
            factors.push((f, e));
        }
    }
    let (c, m) = rest.monic();
    if m.constant_value().is_none() {
        factors.push((m, 1));
    }
    factors.sort_by(|x, y| x.0.cmp(&y.0));
    Ok((c, factors))
}

impl<'a> Add<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut out = if self.den == rhs.den {
            RatFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
        } else {
            let den = RatFn::merged(&self.den, &rhs.den, false);
            RatFn {
                num: &self.lift(&den) + &rhs.lift(&den),
                den,
            }
        };
        out.cancel();
        out
    }
}

impl<'a> Sub<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFn> for &'a RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        let mut out = RatFn {
            num: &self.num * &rhs.num,
            den: RatFn::merged(&self.den, &rhs.den, true),
        };
        out.cancel();
        out
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<MPoly> for RatFn {
    fn from(p: MPoly) -> RatFn {
        RatFn::poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radical_algebra::mpoly::rat;

    #[test]
    fn tower_denominators_factor() {
        let d = &q_poly() * &MPoly::var(Var::R).pow(2);
        let f = RatFn::new(MPoly::one(), &d).unwrap();
        assert_eq!(f.denominator_factors().len(), 2);
        let back = &f * &RatFn::poly(d);
        assert_eq!(back, RatFn::one());
        assert!(back.is_polynomial());
    }

    #[test]
    fn quotient_rule() {
        // d/dr (1/(1 + 4 eps^2 r^2)) = -8 eps^2 r / Q^2
        let f = RatFn::new(MPoly::one(), &q_poly()).unwrap();
        let df = f.derivative(Var::R);
        let expect = RatFn::new(
            (&MPoly::var(Var::R) * &MPoly::var(Var::Eps).pow(2)).scale(&rat_int(-8)),
            &q_poly().pow(2),
        )
        .unwrap();
        assert_eq!(df, expect);
    }

    #[test]
    fn generic_denominator_inverse() {
        let p = &MPoly::var(Var::C0) + &MPoly::var(Var::L).scale(&rat(3, 2));
        let f = RatFn::poly(p);
        assert_eq!(&f * &f.inv().unwrap(), RatFn::one());
    }
}
