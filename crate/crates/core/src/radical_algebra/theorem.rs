//! Comparison against the transcribed `H1..H4`, exact solution of the `H3`
//! system, and the degenerate branches, ending in a verdict on whether any
//! Cassini oval with `eps > 0` solves the shape equation.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use_float!();

use super::mpoly::{rat_to_f64, MPoly, Monomial, UPoly, Var};
use super::symbolic::{build_residual_symbolic, clear_radicals};
use super::AlgebraError;

/// Transcription of `H1..H4`, one term per line.
pub const REFERENCE_H: &str = include_str!("../../data/reference_h.txt");

const H_NAMES: [&str; 4] = ["H1", "H2", "H3", "H4"];

/// Parses lines `Hk; c0^a P^b L^c eps^d r^e; num/den`. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_reference(text: &str) -> Result<[MPoly; 4], AlgebraError> {
    let mut out: [MPoly; 4] = core::array::from_fn(|_| MPoly::zero());
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let err = |reason| AlgebraError::Parse { line, reason };
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = l.split(';').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(err("expected three ';'-separated fields"));
        }
        let k = H_NAMES
            .iter()
            .position(|h| *h == fields[0])
            .ok_or(err("unknown polynomial name"))?;
        let mut m = Monomial::ONE;
        for tok in fields[1].split_whitespace() {
            let (name, exp) = tok.split_once('^').ok_or(err("factor must read name^exponent"))?;
            let v = Var::from_name(name).ok_or(err("unknown variable"))?;
            let e: u16 = exp.parse().map_err(|_| err("bad exponent"))?;
            m.0[v as usize] = e;
        }
        let (num, den) = fields[2].split_once('/').ok_or(err("coefficient must read n/d"))?;
        let num: BigInt = num.trim().parse().map_err(|_| err("bad numerator"))?;
        let den: BigInt = den.trim().parse().map_err(|_| err("bad denominator"))?;
        if den.is_zero() {
            return Err(err("zero denominator"));
        }
        if !out[k].coeff(&m).is_zero() {
            return Err(err("duplicate term"));
        }
        out[k].add_term(m, BigRational::new(num, den));
    }
    Ok(out)
}

pub fn reference_polynomials() -> [MPoly; 4] {
    parse_reference(REFERENCE_H).expect("shipped reference data parses")
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermMismatch {
    pub monomial: Monomial,
    pub computed: BigRational,
    pub reference: BigRational,
}

/// Term-by-term comparison of one polynomial against its transcription.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyMatch {
    pub name: &'static str,
    pub matched: usize,
    /// Terms equal to the negated, scaled reference.
    pub sign_mismatches: Vec<TermMismatch>,
    /// Terms present on both sides with any other ratio.
    pub value_mismatches: Vec<TermMismatch>,
    /// Transcribed terms absent from the computation.
    pub missing: Vec<TermMismatch>,
    /// Computed terms absent from the transcription.
    pub extra: Vec<TermMismatch>,
}

impl PolyMatch {
    pub fn mismatches(&self) -> usize {
        self.sign_mismatches.len() + self.value_mismatches.len() + self.missing.len() + self.extra.len()
    }

    pub fn is_match(&self) -> bool {
        self.mismatches() == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatchReport {
    /// Global factor with `computed = scale * reference`.
    pub scale: Option<BigRational>,
    pub polys: [PolyMatch; 4],
}

impl MatchReport {
    pub fn all_match(&self) -> bool {
        self.scale.is_some() && self.polys.iter().all(PolyMatch::is_match)
    }

    pub fn mismatches(&self) -> usize {
        self.polys.iter().map(PolyMatch::mismatches).sum()
    }
}

/// Compares computed and transcribed polynomials allowing one global
/// rational scale, taken as the most frequent coefficient ratio.
pub fn compare_to_reference(computed: &[MPoly; 4], reference: &[MPoly; 4]) -> MatchReport {
    let mut votes: Vec<(BigRational, usize)> = Vec::new();
    for (c, r) in computed.iter().zip(reference) {
        for (m, rc) in r.terms() {
            let cc = c.coeff(m);
            if cc.is_zero() {
                continue;
            }
            let ratio = cc / rc;
            match votes.iter_mut().find(|(v, _)| *v == ratio) {
                Some((_, n)) => *n += 1,
                None => votes.push((ratio, 1)),
            }
        }
    }
    let scale = votes
        .iter()
        .fold(None::<&(BigRational, usize)>, |best, v| match best {
            Some(b) if b.1 >= v.1 => Some(b),
            _ => Some(v),
        })
        .map(|(v, _)| v.clone());
    let one = BigRational::one();
    let k = scale.clone().unwrap_or(one);
    let polys = core::array::from_fn(|i| {
        let (c, r) = (&computed[i], &reference[i]);
        let mut pm = PolyMatch {
            name: H_NAMES[i],
            matched: 0,
            sign_mismatches: Vec::new(),
            value_mismatches: Vec::new(),
            missing: Vec::new(),
            extra: Vec::new(),
        };
        for (m, rc) in r.terms() {
            let cc = c.coeff(m);
            let item = TermMismatch {
                monomial: *m,
                computed: cc.clone(),
                reference: rc.clone(),
            };
            let expect = rc * &k;
            if cc.is_zero() {
                pm.missing.push(item);
            } else if cc == expect {
                pm.matched += 1;
            } else if cc == -expect {
                pm.sign_mismatches.push(item);
            } else {
                pm.value_mismatches.push(item);
            }
        }
        for (m, cc) in c.terms() {
            if r.coeff(m).is_zero() {
                pm.extra.push(TermMismatch {
                    monomial: *m,
                    computed: cc.clone(),
                    reference: BigRational::zero(),
                });
            }
        }
        pm
    });
    MatchReport { scale, polys }
}

/// One equation: the coefficient of `r^power` in `H{source}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Equation {
    pub poly: MPoly,
    pub source: usize,
    pub r_power: u16,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicSystem {
    pub equations: Vec<Equation>,
}

impl AlgebraicSystem {
    /// Coefficients of every power of `r` in `h`, highest power first.
    pub fn from_polynomial(h: &MPoly, source: usize) -> AlgebraicSystem {
        let equations = h
            .powers(Var::R)
            .into_iter()
            .rev()
            .map(|k| Equation {
                poly: h.coefficient(Var::R, k),
                source,
                r_power: k,
            })
            .collect();
        AlgebraicSystem { equations }
    }

    pub fn equation(&self, r_power: u16) -> Option<&Equation> {
        self.equations.iter().find(|e| e.r_power == r_power)
    }
}

/// `a + b sqrt(d)` with rational `a, b` and square-free integer `d > 1`
/// (`b = 0` for rational values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: BigRational,
    pub b: BigRational,
    pub d: BigInt,
}

impl QuadraticSurd {
    pub fn rational(a: BigRational) -> Self {
        QuadraticSurd {
            a,
            b: BigRational::zero(),
            d: BigInt::one(),
        }
    }

    /// `a + b sqrt(q)` for a nonnegative rational `q`, normalised.
    pub fn new(a: BigRational, b: BigRational, q: &BigRational) -> Self {
        // sqrt(n/m) = sqrt(n m) / m
        let m = q.denom().clone();
        let nm = q.numer() * &m;
        let (outside, inside) = split_square(&nm);
        let b = b * BigRational::new(outside, m);
        if inside.is_one() || b.is_zero() {
            return QuadraticSurd::rational(a + b);
        }
        QuadraticSurd { a, b, d: inside }
    }

    pub fn to_f64(&self) -> f64 {
        let a = rat_to_f64(&self.a);
        if self.b.is_zero() {
            return a;
        }
        // a + b sqrt(d) = (a^2 - b^2 d) / (a - b sqrt(d)) when the terms cancel
        let b = rat_to_f64(&self.b);
        let root = rat_to_f64(&BigRational::from_integer(self.d.clone())).sqrt();
        let plain = a + b * root;
        if a != 0.0 && (a < 0.0) != (b < 0.0) {
            let num = &self.a * &self.a - &self.b * &self.b * BigRational::from_integer(self.d.clone());
            return rat_to_f64(&num) / (a - b * root);
        }
        plain
    }

    pub fn is_positive(&self) -> bool {
        if self.b.is_zero() {
            return self.a.is_positive();
        }
        // sign of a + b sqrt(d), decided exactly
        let bd2 = &self.b * &self.b * BigRational::from_integer(self.d.clone());
        let a2 = &self.a * &self.a;
        match (self.a.is_negative(), self.b.is_negative()) {
            (false, false) => true,
            (true, true) => false,
            (false, true) => a2 > bd2,
            (true, false) => bd2 > a2,
        }
    }

    /// Readable closed form such as `(-21 + sqrt(537))/48`.
    pub fn to_closed_form(&self) -> String {
        if self.b.is_zero() {
            return alloc::format!("{}", self.a);
        }
        let den = self.a.denom().lcm(self.b.denom());
        let an = self.a.numer() * (&den / self.a.denom());
        let bn = self.b.numer() * (&den / self.b.denom());
        let sign = if bn.is_negative() { "-" } else { "+" };
        let babs = bn.abs();
        let rad = if babs.is_one() {
            alloc::format!("sqrt({})", self.d)
        } else {
            alloc::format!("{}*sqrt({})", babs, self.d)
        };
        let body = if an.is_zero() {
            alloc::format!("{}{}", if bn.is_negative() { "-" } else { "" }, rad)
        } else {
            alloc::format!("{} {} {}", an, sign, rad)
        };
        if den.is_one() {
            body
        } else {
            alloc::format!("({})/{}", body, den)
        }
    }
}

// n = outside^2 * inside with inside square-free (trial division; the
// integers met here are small).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut inside = n.clone();
    let mut outside = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= inside {
        let p2 = &p * &p;
        while (&inside % &p2).is_zero() {
            inside /= &p2;
            outside *= &p;
        }
        p += 1;
        if p > BigInt::from(1_000_000) {
            break;
        }
    }
    let r = inside.sqrt();
    if &r * &r == inside {
        outside *= r;
        inside = BigInt::one();
    }
    (outside, inside)
}

/// Exact roots of a univariate polynomial of degree at most two.
fn roots_upto_quadratic(p: &UPoly) -> Option<Vec<QuadraticSurd>> {
    let c = p.coeffs();
    match p.degree() {
        None | Some(0) => Some(Vec::new()),
        Some(1) => Some(alloc::vec![QuadraticSurd::rational(-&c[0] / &c[1])]),
        Some(2) => {
            let (a, b, cc) = (&c[2], &c[1], &c[0]);
            let disc = b * b - BigRational::from_integer(BigInt::from(4)) * a * cc;
            if disc.is_negative() {
                return Some(Vec::new());
            }
            let two_a = a * BigRational::from_integer(BigInt::from(2));
            let base = -b / &two_a;
            let k = BigRational::one() / &two_a;
            let mut roots = alloc::vec![
                QuadraticSurd::new(base.clone(), k.clone(), &disc),
                QuadraticSurd::new(base, -k, &disc),
            ];
            roots.dedup();
            Some(roots)
        }
        _ => None,
    }
}

/// Divides out the monomial content and reads the rest as a polynomial in
/// `eps^step`, with `step` the largest of 4, 2, 1 that fits.
fn eps_condition(p: &MPoly) -> Result<(Monomial, UPoly, u16), AlgebraError> {
    let content = p.monomial_content();
    let rest = p
        .div_exact(&MPoly::term(BigRational::one(), content))
        .expect("monomial content divides");
    for step in [4u16, 2, 1] {
        if let Some(u) = UPoly::from_mpoly(&rest, Var::Eps, step) {
            return Ok((content, u, step));
        }
    }
    Err(AlgebraError::UnexpectedSystem("condition depends on more than eps"))
}

/// Solution of the `c0 != 0`, `eps > 0` branch from the `H3` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct H3Solution {
    /// Coefficients of `r^5`, `r^3`, `r^1` in `H3`.
    pub system: AlgebraicSystem,
    /// `P` solved from the `r^5` equation.
    pub pressure: MPoly,
    /// The `r^3` and `r^1` equations after eliminating `P`.
    pub reduced: [MPoly; 2],
    /// Monomial factors (powers of `c0`, `eps`) removed from `reduced`.
    pub removed: [Monomial; 2],
    /// What remains, as polynomials in `x = eps^4`.
    pub conditions: [UPoly; 2],
    /// Positive roots `eps^4` of each condition.
    pub roots: [Vec<QuadraticSurd>; 2],
    /// Monic gcd of the two conditions.
    pub gcd: UPoly,
}

impl H3Solution {
    /// The two conditions share no root.
    pub fn contradiction(&self) -> bool {
        self.gcd.degree() == Some(0)
    }
}

pub fn solve_h3_system(h3: &MPoly) -> Result<H3Solution, AlgebraError> {
    let system = AlgebraicSystem::from_polynomial(h3, 3);
    let get = |k: u16| {
        system
            .equation(k)
            .map(|e| e.poly.clone())
            .ok_or(AlgebraError::UnexpectedSystem("missing power of r in H3"))
    };
    let (e5, e3, e1) = (get(5)?, get(3)?, get(1)?);
    if e5.degree(Var::P) != 1 {
        return Err(AlgebraError::UnexpectedSystem("r^5 equation is not linear in P"));
    }
    let slope = e5.coefficient(Var::P, 1);
    let rest = e5.coefficient(Var::P, 0);
    let pressure = (-&rest)
        .div_exact(&slope)
        .ok_or(AlgebraError::UnexpectedSystem("P is not polynomial in c0, eps"))?;
    let reduced = [e3.subs_poly(Var::P, &pressure), e1.subs_poly(Var::P, &pressure)];
    let (m3, c3, s3) = eps_condition(&reduced[0])?;
    let (m1, c1, s1) = eps_condition(&reduced[1])?;
    if s3 != 4 || s1 != 4 {
        return Err(AlgebraError::UnexpectedSystem(
            "conditions are not polynomials in eps^4",
        ));
    }
    let positive = |c: &UPoly| -> Result<Vec<QuadraticSurd>, AlgebraError> {
        let all = roots_upto_quadratic(c).ok_or(AlgebraError::UnexpectedSystem("condition of degree > 2"))?;
        Ok(all.into_iter().filter(QuadraticSurd::is_positive).collect())
    };
    let roots = [positive(&c3)?, positive(&c1)?];
    let gcd = c3.gcd(&c1);
    Ok(H3Solution {
        system,
        pressure,
        reduced,
        removed: [m3, m1],
        conditions: [c3, c1],
        roots,
        gcd,
    })
}

/// Whether one value of `L` can zero two `r`-coefficients of `H1` at
/// `c0 = P = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaCompatibility {
    pub r_powers: (u16, u16),
    /// Resultant-like condition `A_i B_j - A_j B_i` (content removed), in
    /// `eps^step`.
    pub condition: UPoly,
    pub step: u16,
    /// Positive real `eps` where the condition holds.
    pub eps_roots: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegenerateBranches {
    /// `r^5` coefficient of `H3` at `c0 = 0`; zero only for `P = 0` when `eps > 0`.
    pub pressure_equation: MPoly,
    pub pressure_forced_zero: bool,
    /// `H3` vanishes identically once `c0 = P = 0`.
    pub h3_vanishes: bool,
    /// `r^7` coefficient of `H1` at `c0 = P = 0`.
    pub r7_coefficient: MPoly,
    /// The `r^7` coefficient is a nonzero multiple of a power of `eps`.
    pub r7_forces_eps_zero: bool,
    pub lambda: Vec<LambdaCompatibility>,
    /// Degree of the gcd of all tension compatibility conditions.
    pub lambda_gcd_degree: usize,
    /// `H1..H4` all vanish at `eps = c0 = P = L = 0`.
    pub circle_trivial: bool,
}

pub fn close_degenerate_branches(h: &[MPoly; 4]) -> Result<DegenerateBranches, AlgebraError> {
    let zero = BigRational::zero();
    let h3c = h[2].subs(Var::C0, &zero);
    let pressure_equation = h3c.coefficient(Var::R, 5);
    let p_coeff = pressure_equation.coefficient(Var::P, 1);
    let pressure_forced_zero = pressure_equation.coefficient(Var::P, 0).is_zero()
        && pressure_equation.degree(Var::P) == 1
        && p_coeff.len() == 1
        && Var::ALL.iter().all(|&v| v == Var::Eps || !p_coeff.depends_on(v));
    let h3_vanishes = h3c.subs(Var::P, &zero).is_zero();

    let h1 = h[0].subs(Var::C0, &zero).subs(Var::P, &zero);
    let r7_coefficient = h1.coefficient(Var::R, 7);
    let r7_forces_eps_zero =
        r7_coefficient.len() == 1 && Var::ALL.iter().all(|&v| v == Var::Eps || !r7_coefficient.depends_on(v));

    let split = |k: u16| {
        let c = h1.coefficient(Var::R, k);
        (c.coefficient(Var::L, 0), c.coefficient(Var::L, 1))
    };
    let mut lambda = Vec::new();
    let mut conds: Vec<(UPoly, u16)> = Vec::new();
    for (i, j) in [(1u16, 3u16), (1, 5)] {
        let (ai, bi) = split(i);
        let (aj, bj) = split(j);
        let compat = &(&ai * &bj) - &(&aj * &bi);
        if compat.is_zero() {
            return Err(AlgebraError::UnexpectedSystem("tension equations are dependent"));
        }
        let (_, cond, step) = eps_condition(&compat)?;
        let x_roots = cond.real_roots_in(0.0, 100.0, 20_000);
        let eps_roots = x_roots
            .into_iter()
            .filter(|x| *x > 0.0)
            .map(|x| x.powf(1.0 / step as f64))
            .collect();
        conds.push((cond.clone(), step));
        lambda.push(LambdaCompatibility {
            r_powers: (i, j),
            condition: cond,
            step,
            eps_roots,
        });
    }
    let lambda_gcd_degree = if conds.iter().all(|(_, s)| *s == conds[0].1) {
        conds
            .iter()
            .skip(1)
            .fold(conds[0].0.clone(), |g, (c, _)| g.gcd(c))
            .degree()
            .unwrap_or(0)
    } else {
        // re-express both in eps and compare there
        let expand = |(c, s): &(UPoly, u16)| {
            let mut v = alloc::vec![BigRational::zero(); c.coeffs().len() * *s as usize];
            for (k, a) in c.coeffs().iter().enumerate() {
                v[k * *s as usize] = a.clone();
            }
            UPoly::new(v)
        };
        conds
            .iter()
            .skip(1)
            .fold(expand(&conds[0]), |g, c| g.gcd(&expand(c)))
            .degree()
            .unwrap_or(0)
    };

    let circle_trivial = h.iter().all(|p| {
        p.subs(Var::Eps, &zero)
            .subs(Var::C0, &zero)
            .subs(Var::P, &zero)
            .subs(Var::L, &zero)
            .is_zero()
    });

    Ok(DegenerateBranches {
        pressure_equation,
        pressure_forced_zero,
        h3_vanishes,
        r7_coefficient,
        r7_forces_eps_zero,
        lambda,
        lambda_gcd_degree,
        circle_trivial,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// No oval with `eps > 0` solves the shape equation for any parameters.
    Contradiction,
    /// The exact computation failed to rule out some branch.
    Inconclusive,
}

impl Verdict {
    pub fn label(self) -> &'static str {
        match self {
            Verdict::Contradiction => "CONTRADICTION",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TheoremReport {
    pub h: [MPoly; 4],
    pub t_components_vanish: bool,
    pub reference: MatchReport,
    pub h3: H3Solution,
    pub degenerate: DegenerateBranches,
    pub verdict: Verdict,
}

/// Build, clear, compare, solve and close branches.
pub fn verify_theorem() -> Result<TheoremReport, AlgebraError> {
    let residual = build_residual_symbolic();
    let cleared = clear_radicals(&residual)?;
    let t_components_vanish = cleared.t_components_vanish();
    let h = cleared.h;
    let reference = compare_to_reference(&h, &reference_polynomials());
    let h3 = solve_h3_system(&h[2])?;
    let degenerate = close_degenerate_branches(&h)?;
    let verdict = if h3.contradiction() && degenerate.pressure_forced_zero && degenerate.r7_forces_eps_zero {
        Verdict::Contradiction
    } else {
        Verdict::Inconclusive
    };
    Ok(TheoremReport {
        h,
        t_components_vanish,
        reference,
        h3,
        degenerate,
        verdict,
    })
}
