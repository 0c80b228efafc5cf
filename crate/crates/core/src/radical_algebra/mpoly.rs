//! Sparse multivariate polynomials over the rationals in the fixed variables
//! `(r, eps, c0, P, L)`, stored in graded-lexicographic order.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const NVARS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    R = 0,
    Eps = 1,
    C0 = 2,
    P = 3,
    L = 4,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::R, Var::Eps, Var::C0, Var::P, Var::L];

    pub fn name(self) -> &'static str {
        match self {
            Var::R => "r",
            Var::Eps => "eps",
            Var::C0 => "c0",
            Var::P => "P",
            Var::L => "L",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }
}

/// Exponent vector indexed by [`Var`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var, exp: u16) -> Monomial {
        let mut e = [0; NVARS];
        e[v as usize] = exp;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn exp(&self, v: Var) -> u16 {
        self.0[v as usize]
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        Monomial(e)
    }

    /// `self / other` when every exponent allows it.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_sub(*b)?;
        }
        Some(Monomial(e))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Nearest binary64 to an exact rational.
pub fn rat_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // rescale huge numerators and denominators before dividing
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (q.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d).to_f64().unwrap_or(1.0);
    let mut v = n / d;
    let mut e = shift_n as i64 - shift_d as i64;
    while e > 0 {
        v *= 2.0;
        e -= 1;
    }
    while e < 0 {
        v *= 0.5;
        e += 1;
    }
    v
}

/// Exact rational equal to a finite binary64.
pub fn rat_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

/// Polynomial with exact rational coefficients; zero coefficients are never
/// stored, so structural equality is mathematical equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MPoly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl MPoly {
    pub fn zero() -> MPoly {
        MPoly::default()
    }

    pub fn one() -> MPoly {
        MPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> MPoly {
        MPoly::term(c, Monomial::ONE)
    }

    pub fn int(n: i64) -> MPoly {
        MPoly::constant(rat_int(n))
    }

    pub fn var(v: Var) -> MPoly {
        MPoly::term(BigRational::one(), Monomial::var(v, 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> MPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(it: I) -> MPoly {
        let mut p = MPoly::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// The value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&Monomial::ONE).cloned(),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    pub fn degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).max().unwrap_or(0)
    }

    /// Smallest exponent of `v` across the terms.
    pub fn min_degree(&self, v: Var) -> u16 {
        self.terms.keys().map(|m| m.exp(v)).min().unwrap_or(0)
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.degree(v) > 0
    }

    pub fn scale(&self, c: &BigRational) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> MPoly {
        let mut out = MPoly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = &out * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        out
    }

    /// Coefficient of `v^k`, as a polynomial in the remaining variables.
    pub fn coefficient(&self, v: Var, k: u16) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            if m.exp(v) == k {
                let mut e = m.0;
                e[v as usize] = 0;
                out.terms.insert(Monomial(e), c.clone());
            }
        }
        out
    }

    /// Powers of `v` that occur, ascending.
    pub fn powers(&self, v: Var) -> Vec<u16> {
        let mut p: Vec<u16> = self.terms.keys().map(|m| m.exp(v)).collect();
        p.sort_unstable();
        p.dedup();
        p
    }

    pub fn derivative(&self, v: Var) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == 0 {
                continue;
            }
            let mut k = m.0;
            k[v as usize] -= 1;
            out.terms.insert(Monomial(k), c * rat_int(e as i64));
        }
        out
    }

    pub fn subs(&self, v: Var, value: &BigRational) -> MPoly {
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v);
            let mut k = m.0;
            k[v as usize] = 0;
            let f = if e == 0 {
                c.clone()
            } else {
                c * num_traits::pow(value.clone(), e as usize)
            };
            out.add_term(Monomial(k), f);
        }
        out
    }

    pub fn subs_poly(&self, v: Var, value: &MPoly) -> MPoly {
        let mut powers: Vec<MPoly> = alloc::vec![MPoly::one()];
        let mut out = MPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exp(v) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut k = m.0;
            k[v as usize] = 0;
            let part = powers[e].mul_monomial(&Monomial(k)).scale(c);
            out = &out + &part;
        }
        out
    }

    pub fn eval(&self, x: &[BigRational; NVARS]) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(x[i].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_f64(&self, x: &[f64; NVARS]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut t = rat_to_f64(c);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= x[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> Option<MPoly> {
        let (dm, dc) = d.leading()?;
        let (dm, dc) = (*dm, dc.clone());
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut q = MPoly::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(&dm)?;
            let qc = c / &dc;
            for (k, v) in &d.terms {
                rem.add_term(k.mul(&qm), -(v * &qc));
            }
            q.terms.insert(qm, qc);
        }
        Some(q)
    }

    /// Scales so the leading coefficient is one; returns the factor removed.
    pub fn monic(&self) -> (BigRational, MPoly) {
        match self.leading() {
            None => (BigRational::one(), MPoly::zero()),
            Some((_, c)) => {
                let c = c.clone();
                (c.clone(), self.scale(&c.recip()))
            }
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut e = [u16::MAX; NVARS];
        for m in self.terms.keys() {
            for (a, b) in e.iter_mut().zip(m.0.iter()) {
                *a = (*a).min(*b);
            }
        }
        if self.terms.is_empty() {
            Monomial::ONE
        } else {
            Monomial(e)
        }
    }

    pub fn to_string_with(&self, names: &[&str; NVARS]) -> String {
        let mut s = String::new();
        if self.terms.is_empty() {
            s.push('0');
            return s;
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mut factors: Vec<String> = Vec::new();
            if !a.is_one() || *m == Monomial::ONE {
                factors.push(alloc::format!("{a}"));
            }
            for (k, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(String::from(names[k])),
                    _ => factors.push(alloc::format!("{}^{}", names[k], e)),
                }
            }
            s.push_str(&factors.join("*"));
        }
        s
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&["r", "eps", "c0", "P", "L"]))
    }
}

impl<'a> Add<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        let (mut out, other) = if self.len() >= rhs.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MPoly> for &'a MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<MPoly> for MPoly {
            type Output = MPoly;
            fn $f(self, rhs: MPoly) -> MPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        -&self
    }
}

/// Dense univariate polynomial over the rationals, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<BigRational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    /// Reads a polynomial in `v` alone; `None` if other variables occur.
    /// With `step > 1` only exponents divisible by `step` are allowed and
    /// the result is in `v^step`.
    pub fn from_mpoly(p: &MPoly, v: Var, step: u16) -> Option<UPoly> {
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (m, c) in p.terms() {
            if Var::ALL.iter().any(|&w| w != v && m.exp(w) != 0) {
                return None;
            }
            let e = m.exp(v);
            if e % step != 0 {
                return None;
            }
            let k = (e / step) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        Some(UPoly::new(coeffs))
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + rat_to_f64(c))
    }

    pub fn monic(&self) -> UPoly {
        match self.coeffs.last() {
            None => self.clone(),
            Some(l) => {
                let l = l.clone();
                UPoly::new(self.coeffs.iter().map(|c| c / &l).collect())
            }
        }
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        let dl = d.coeffs.last().expect("division by the zero polynomial").clone();
        let dn = d.coeffs.len();
        let mut r = self.coeffs.clone();
        while r.len() >= dn && !r.is_empty() {
            let q = r.last().unwrap() / &dl;
            let off = r.len() - dn;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[off + i] -= c * &q;
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        UPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Real roots in `(lo, hi)` by sign changes on a fine grid and bisection.
    pub fn real_roots_in(&self, lo: f64, hi: f64, samples: usize) -> Vec<f64> {
        let mut roots = Vec::new();
        if self.is_zero() {
            return roots;
        }
        let step = (hi - lo) / samples as f64;
        let mut a = lo;
        let mut fa = self.eval_f64(a);
        for i in 1..=samples {
            let b = lo + step * i as f64;
            let fb = self.eval_f64(b);
            if fa == 0.0 && i > 1 {
                roots.push(a);
            } else if fa * fb < 0.0 {
                let (mut x0, mut x1, mut f0) = (a, b, fa);
                for _ in 0..200 {
                    let m = 0.5 * (x0 + x1);
                    let fm = self.eval_f64(m);
                    if fm == 0.0 || m <= x0 || m >= x1 {
                        x0 = m;
                        x1 = m;
                        break;
                    }
                    if (fm < 0.0) == (f0 < 0.0) {
                        x0 = m;
                        f0 = fm;
                    } else {
                        x1 = m;
                    }
                }
                roots.push(0.5 * (x0 + x1));
            }
            a = b;
            fa = fb;
        }
        roots
    }
}
