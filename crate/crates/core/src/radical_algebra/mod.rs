//! Exact algebra in the radical tower of the rescaled Cassini oval.
//!
//! Coefficients are big rationals throughout. The slope form of the shape
//! equation is assembled symbolically, multiplied by `(s - eps^2)^3 t^3`, and
//! reduced to the four polynomials `H1..H4` of
//! `H1 + H2/s + H3 w + H4 w/s = 0`. The theorem module then shows that no
//! oval with `eps > 0` makes all four vanish.

mod mpoly;
mod radexpr;
mod ratfn;
mod symbolic;
mod theorem;
mod third;

pub use mpoly::{rat, rat_from_f64, rat_int, rat_to_f64, MPoly, Monomial, UPoly, Var, NVARS};
pub use radexpr::{radicals_f64, BasisDerivatives, ExactValue, RadExpr, BASIS_LABELS, S, T, W};
pub use ratfn::{q_poly, RatFn};
pub use symbolic::{build_residual_symbolic, build_u_symbolic, clear_radicals, ClearedResidual, SymbolicSlope};
pub use theorem::{
    close_degenerate_branches, compare_to_reference, parse_reference, reference_polynomials, solve_h3_system,
    verify_theorem, AlgebraicSystem, DegenerateBranches, Equation, H3Solution, LambdaCompatibility, MatchReport,
    PolyMatch, QuadraticSurd, TermMismatch, TheoremReport, Verdict, REFERENCE_H,
};
pub use third::{CassiniWithThird, SlopeThirdDerivative};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero in the radical tower")]
    DivisionByZero,
    #[error("cleared residual has a nonzero {0} component")]
    ResidueInT(&'static str),
    #[error("component {0} of the cleared residual is not a polynomial")]
    NotPolynomial(&'static str),
    #[error("reference data line {line}: {reason}")]
    Parse { line: usize, reason: &'static str },
    #[error("equation system is not of the expected shape: {0}")]
    UnexpectedSystem(&'static str),
}
