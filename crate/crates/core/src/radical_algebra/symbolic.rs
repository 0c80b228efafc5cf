//! Symbolic slope, its derivatives, and the cleared shape-equation residual
//! of the rescaled Cassini oval.

use super::mpoly::{rat, rat_int, MPoly, Var};
use super::radexpr::{BasisDerivatives, RadExpr, S, T, W};
use super::ratfn::{q_poly, RatFn};
use super::AlgebraError;

/// `u = r (2 eps^2 - s) / (s t)`.
pub fn build_u_symbolic() -> RadExpr {
    let r = MPoly::var(Var::R);
    let two_e2 = MPoly::var(Var::Eps).pow(2).scale(&rat_int(2));
    let num = &RadExpr::poly(&r * &two_e2) - &RadExpr::s().scale(&RatFn::poly(r));
    let st = &RadExpr::s() * &RadExpr::t();
    &num * &st.inverse().expect("s t is invertible")
}

/// The slope and everything the residual needs from it.
#[derive(Debug, Clone)]
pub struct SymbolicSlope {
    pub u: RadExpr,
    pub u1: RadExpr,
    pub u2: RadExpr,
    /// `sqrt(1 + u^2) = w / (s t)`.
    pub arc: RadExpr,
    pub inv_arc: RadExpr,
}

impl SymbolicSlope {
    pub fn build() -> SymbolicSlope {
        let d = BasisDerivatives::new();
        let u = build_u_symbolic();
        let u1 = u.differentiate_with(&d);
        let u2 = u1.differentiate_with(&d);
        let st = &RadExpr::s() * &RadExpr::t();
        let arc = &RadExpr::w() * &st.inverse().expect("s t is invertible");
        let inv_arc = arc.inverse().expect("w is invertible");
        SymbolicSlope {
            u,
            u1,
            u2,
            arc,
            inv_arc,
        }
    }

    /// Slope form of the shape equation with `c0`, `P`, `L` symbolic.
    pub fn residual(&self) -> RadExpr {
        let (u, u1, u2) = (&self.u, &self.u1, &self.u2);
        let qi = &self.inv_arc * &self.inv_arc;
        let qi2 = &qi * &qi;
        let qi3 = &qi2 * &qi;
        let r = MPoly::var(Var::R);
        let inv_r = RatFn::new(MPoly::one(), &r).expect("r is nonzero");
        let inv_r2 = &inv_r * &inv_r;
        let k = |p: i64, q: i64| RatFn::constant(rat(p, q));

        let mut h = (&(&(u * u1) * u1) * &qi3).scale(&k(-5, 2));
        h = &h + &(u2 * &qi2);
        let one_plus = &RadExpr::one() + &qi;
        h = &h - &(u * &one_plus).scale(&(&inv_r2 * &k(1, 2)));
        h = &h + &(u1 * &qi2).scale(&inv_r);

        let c0 = RatFn::poly(MPoly::var(Var::C0));
        let c0_sq = &c0 * &c0;
        let p = RatFn::poly(MPoly::var(Var::P));
        let l = RatFn::poly(MPoly::var(Var::L));
        h = &h - &u.scale(&(&c0_sq * &k(1, 2)));
        h = &h - &(&(u * u) * &self.inv_arc).scale(&(&c0 * &inv_r));
        h = &h - &self.arc.scale(&(&(&p * &RatFn::poly(r)) * &k(1, 2)));
        h = &h - &u.scale(&l);
        h
    }
}

pub fn build_residual_symbolic() -> RadExpr {
    SymbolicSlope::build().residual()
}

/// The residual times `(s - eps^2)^3 t^3`, split as
/// `H1 + H2/s + H3 w + H4 w/s`.
#[derive(Debug, Clone)]
pub struct ClearedResidual {
    pub h: [MPoly; 4],
    /// The product itself, before the `s`-components are rescaled.
    pub product: RadExpr,
}

impl ClearedResidual {
    /// Whether every component carrying `t` is identically zero.
    pub fn t_components_vanish(&self) -> bool {
        !self.product.involves(T)
    }
}

pub fn clear_radicals(h: &RadExpr) -> Result<ClearedResidual, AlgebraError> {
    let m = &RadExpr::s() - &RadExpr::poly(MPoly::var(Var::Eps).pow(2));
    let t = RadExpr::t();
    let mult = &(&(&m * &m) * &m) * &(&(&t * &t) * &t);
    let product = h * &mult;
    for (idx, name) in [(T, "t"), (S | T, "st"), (T | W, "tw"), (S | T | W, "stw")] {
        if !product.component(idx).is_zero() {
            return Err(AlgebraError::ResidueInT(name));
        }
    }
    let q = RatFn::poly(q_poly());
    let pick = |idx: usize, times_q: bool, name: &'static str| -> Result<MPoly, AlgebraError> {
        let c = product.component(idx);
        let c = if times_q { c * &q } else { c.clone() };
        c.as_polynomial().cloned().ok_or(AlgebraError::NotPolynomial(name))
    };
    let h = [
        pick(0, false, "1")?,
        pick(S, true, "s")?,
        pick(W, false, "w")?,
        pick(S | W, true, "sw")?,
    ];
    Ok(ClearedResidual { h, product })
}
