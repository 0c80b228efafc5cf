//! One function per subcommand, each returning a [`Report`].

use serde_json::{json, Value};

use helfrich_core::cmc::{build_composite, composite_metrics, ProfileEnd};
use helfrich_core::functional::{fit_parameters, helfrich_energy, FitOptions, FitResult, Weight};
use helfrich_core::geometry::{curvature_point, CassiniOval, ProfileCurve};
use helfrich_core::radical_algebra::{
    verify_theorem, CassiniWithThird, Monomial, PolyMatch, QuadraticSurd, SlopeThirdDerivative, TermMismatch,
    TheoremReport, Var, Verdict,
};
use helfrich_core::shape_residual::{
    residual_report, sphere_el_residual, sphere_solve, ResidualError, ResidualForm, ThirdDerivative,
};
use helfrich_core::{MembraneParams, SignConvention, SphereOrientation};

use crate::args::*;
use crate::error::CliError;
use crate::output::{Cell, Report};

fn input(msg: String) -> CliError {
    CliError::Input(msg)
}

fn check_epsilon(eps: f64) -> Result<(), CliError> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(input(format!("--epsilon must be finite and >= 0 (got {eps})")));
    }
    Ok(())
}

fn finite(name: &str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(input(format!("--{name} must be finite (got {x})")))
    }
}

fn membrane(m: &MembraneArgs) -> Result<MembraneParams, CliError> {
    let p = MembraneParams::new(
        finite("beta", m.beta)?,
        finite("c0", m.c0)?,
        finite("lambda", m.lambda)?,
        finite("pressure", m.pressure)?,
    );
    p.map_err(|e| match e {
        ResidualError::InvalidParams { name, reason } => input(format!("--{name}: {reason}")),
        other => other.into(),
    })
}

fn fit_options(a: &FitOptionArgs) -> Result<FitOptions, CliError> {
    let opts = FitOptions {
        weight: match a.weight {
            WeightArg::Surface => Weight::SurfaceMeasure,
            WeightArg::Uniform => Weight::Uniform,
        },
        margin: a.margin,
        panels: a.panels,
        order: a.order,
        c0_range: a.c0_range,
        ..FitOptions::default()
    };
    opts.validate()?;
    Ok(opts)
}

pub fn residual(a: &ResidualArgs) -> Result<Report, CliError> {
    check_epsilon(a.epsilon)?;
    let params = membrane(&a.membrane)?;
    if a.n < 2 {
        return Err(input(format!("--n must be >= 2 (got {})", a.n)));
    }
    if !(a.margin > 0.0 && a.margin < 0.5) {
        return Err(input(format!("--margin must lie in (0, 0.5) (got {})", a.margin)));
    }
    let oval = CassiniOval::new(a.epsilon)?;
    let conv = SignConvention::RESOLVED;
    let rep = match a.form {
        FormArg::U => residual_report(
            &oval,
            &params,
            ResidualForm::UForm,
            a.n,
            a.margin,
            conv,
            ThirdDerivative::AnalyticOnly,
        )?,
        FormArg::Psi => residual_report(
            &oval,
            &params,
            ResidualForm::PsiForm,
            a.n,
            a.margin,
            conv,
            ThirdDerivative::AnalyticOnly,
        )?,
        FormArg::Third => {
            let third = SlopeThirdDerivative::build();
            let profile = CassiniWithThird::new(oval, &third);
            residual_report(
                &profile,
                &params,
                ResidualForm::ThirdOrder,
                a.n,
                a.margin,
                conv,
                ThirdDerivative::AnalyticOnly,
            )?
        }
    };
    let mut out = Report::new(&["r", "residual"]);
    out.set("form", rep.form.label());
    out.set("sup_norm", rep.sup_norm);
    out.set("l2_norm", rep.l2_norm);
    out.set("sign_convention", rep.convention.label());
    if let Some(src) = rep.third_derivative {
        out.set("third_derivative", format!("{src:?}").to_lowercase());
    }
    for (r, h) in rep.grid.iter().zip(&rep.residuals) {
        out.push(vec![Cell::from(*r), Cell::from(*h)]);
    }
    Ok(out)
}

pub fn energy(a: &EnergyArgs) -> Result<Report, CliError> {
    let params = membrane(&a.membrane)?;
    for &e in &a.epsilon {
        check_epsilon(e)?;
    }
    let mut out = Report::new(&["epsilon", "area", "volume", "bending", "total", "quad_error"]);
    for &e in &a.epsilon {
        let oval = CassiniOval::new(e)?;
        let en = helfrich_energy(&oval, &params).map_err(|err| with_epsilon(err.into(), e))?;
        out.push(vec![
            e.into(),
            en.area.into(),
            en.volume.into(),
            en.bending.into(),
            en.total.into(),
            en.max_error().into(),
        ]);
    }
    out.set("points", a.epsilon.len());
    Ok(out)
}

fn with_epsilon(e: CliError, eps: f64) -> CliError {
    match e {
        CliError::Numeric(m) => CliError::Numeric(format!("epsilon = {eps}: {m}")),
        CliError::Input(m) => CliError::Input(format!("epsilon = {eps}: {m}")),
        other => other,
    }
}

fn run_fits(eps: &[f64], opts: &FitOptions) -> Result<Vec<FitResult>, CliError> {
    for &e in eps {
        check_epsilon(e)?;
    }
    eps.iter()
        .map(|&e| fit_parameters(e, opts).map_err(|err| with_epsilon(err.into(), e)))
        .collect()
}

const FIT_COLUMNS: [&str; 14] = [
    "epsilon",
    "c0_opt",
    "lambda_opt",
    "p_opt",
    "l2_residual",
    "sup_residual",
    "quad_error",
    "iterations",
    "degenerate",
    "global_c0",
    "global_lambda",
    "global_p",
    "global_l2_residual",
    "global_quad_error",
];

fn fit_row(f: &FitResult) -> Vec<Cell> {
    vec![
        f.epsilon.into(),
        f.c0_opt.into(),
        f.lambda_opt.into(),
        f.p_opt.into(),
        f.l2_residual.into(),
        f.sup_residual.into(),
        f.quad_error.into(),
        f.iterations.into(),
        f.degenerate.into(),
        f.global.c0.into(),
        f.global.lambda.into(),
        f.global.p.into(),
        f.global.l2_residual.into(),
        f.global.quad_error.into(),
    ]
}

pub fn fit(a: &FitArgs) -> Result<Report, CliError> {
    let opts = fit_options(&a.fit)?;
    let fits = run_fits(&a.epsilon, &opts)?;
    let mut out = Report::new(&FIT_COLUMNS);
    for f in &fits {
        out.push(fit_row(f));
    }
    let min_l2 = fits
        .iter()
        .map(|f| f.l2_residual.min(f.global.l2_residual))
        .fold(f64::INFINITY, f64::min);
    out.set("min_l2_residual", min_l2);
    Ok(out)
}

fn monomial_label(m: &Monomial) -> String {
    let parts: Vec<String> = [Var::C0, Var::P, Var::L, Var::Eps, Var::R]
        .iter()
        .filter(|v| m.exp(**v) > 0)
        .map(|v| match m.exp(*v) {
            1 => v.name().to_string(),
            k => format!("{}^{k}", v.name()),
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

fn mismatch_json(list: &[TermMismatch]) -> Value {
    Value::Array(
        list.iter()
            .map(|t| {
                json!({
                    "monomial": monomial_label(&t.monomial),
                    "computed": t.computed.to_string(),
                    "reference": t.reference.to_string(),
                })
            })
            .collect(),
    )
}

fn match_json(p: &PolyMatch) -> Value {
    json!({
        "poly": p.name,
        "matched": p.matched,
        "mismatches": p.mismatches(),
        "sign_mismatches": mismatch_json(&p.sign_mismatches),
        "value_mismatches": mismatch_json(&p.value_mismatches),
        "missing": mismatch_json(&p.missing),
        "extra": mismatch_json(&p.extra),
    })
}

fn surd_json(s: &QuadraticSurd) -> Value {
    let x = s.to_f64();
    json!({
        "closed_form": s.to_closed_form(),
        "a": [s.a.numer().to_string(), s.a.denom().to_string()],
        "b": [s.b.numer().to_string(), s.b.denom().to_string()],
        "d": s.d.to_string(),
        "eps4": x,
        "eps4_decimal": format!("{x:.15}"),
        "eps": x.sqrt().sqrt(),
        "eps_decimal": format!("{:.15}", x.sqrt().sqrt()),
    })
}

fn symbolic_section(rep: &TheoremReport, out: &mut Report) -> Value {
    let h3 = &rep.h3;
    let deg = &rep.degenerate;
    let row = |out: &mut Report, k: String, v: String| out.push(vec![Cell::from("symbolic"), k.into(), v.into()]);
    row(out, "verdict".into(), rep.verdict.label().into());
    row(out, "t_components_vanish".into(), rep.t_components_vanish.to_string());
    row(
        out,
        "reference_scale".into(),
        rep.reference.scale.as_ref().map_or("none".into(), |s| s.to_string()),
    );
    for p in &rep.reference.polys {
        row(out, format!("{}.mismatches", p.name), p.mismatches().to_string());
    }
    row(out, "pressure".into(), format!("P = {}", h3.pressure));
    let labels = ["r^3", "r^1"];
    for (i, roots) in h3.roots.iter().enumerate() {
        for (k, s) in roots.iter().enumerate() {
            row(out, format!("{}.root{}.eps4", labels[i], k + 1), s.to_closed_form());
            row(
                out,
                format!("{}.root{}.eps", labels[i], k + 1),
                crate::output::fmt_f64(s.to_f64().sqrt().sqrt()),
            );
        }
    }
    row(
        out,
        "gcd_degree".into(),
        h3.gcd.degree().map_or("zero polynomial".into(), |d| d.to_string()),
    );
    row(out, "h1_r7_coefficient".into(), deg.r7_coefficient.to_string());
    row(out, "lambda_gcd_degree".into(), deg.lambda_gcd_degree.to_string());

    json!({
        "verdict": rep.verdict.label(),
        "t_components_vanish": rep.t_components_vanish,
        "h_terms": rep.h.iter().map(|p| p.len()).collect::<Vec<_>>(),
        "reference": {
            "scale": rep.reference.scale.as_ref().map(|s| s.to_string()),
            "all_match": rep.reference.all_match(),
            "mismatches": rep.reference.mismatches(),
            "polys": rep.reference.polys.iter().map(match_json).collect::<Vec<_>>(),
        },
        "h3_system": {
            "pressure": h3.pressure.to_string(),
            "conditions": [
                { "r_power": 3, "condition": h3.conditions[0].coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                  "roots": h3.roots[0].iter().map(surd_json).collect::<Vec<_>>() },
                { "r_power": 1, "condition": h3.conditions[1].coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                  "roots": h3.roots[1].iter().map(surd_json).collect::<Vec<_>>() },
            ],
            "gcd_degree": h3.gcd.degree(),
            "contradiction": h3.contradiction(),
        },
        "degenerate_branches": {
            "pressure_equation": deg.pressure_equation.to_string(),
            "pressure_forced_zero": deg.pressure_forced_zero,
            "h3_vanishes": deg.h3_vanishes,
            "h1_r7_coefficient": deg.r7_coefficient.to_string(),
            "r7_forces_eps_zero": deg.r7_forces_eps_zero,
            "lambda": deg.lambda.iter().map(|l| json!({
                "r_powers": [l.r_powers.0, l.r_powers.1],
                "eps_roots": l.eps_roots,
            })).collect::<Vec<_>>(),
            "lambda_gcd_degree": deg.lambda_gcd_degree,
            "circle_trivial": deg.circle_trivial,
        },
    })
}

/// Residual norms below this are rounding noise whatever the quadrature
/// error estimate says.
const ROUNDING_FLOOR: f64 = 1e-11;

/// Outcome of `verify-theorem`: the report, and a failure to raise after
/// the report has been written.
pub fn verify(a: &VerifyArgs) -> Result<(Report, Option<CliError>), CliError> {
    let mut out = Report::new(&["section", "item", "value"]);
    let mut failures = Vec::new();
    if matches!(a.mode, Mode::Symbolic | Mode::Both) {
        let rep = verify_theorem()?;
        let section = symbolic_section(&rep, &mut out);
        out.set("symbolic", section);
        if rep.verdict != Verdict::Contradiction {
            failures.push(format!("symbolic verdict is {}", rep.verdict.label()));
        }
        if !rep.t_components_vanish {
            failures.push("cleared residual keeps t components".to_string());
        }
    }
    if matches!(a.mode, Mode::Numeric | Mode::Both) {
        let opts = fit_options(&a.fit)?;
        let fits = run_fits(&a.epsilon, &opts)?;
        let mut entries = Vec::new();
        let mut all_positive = true;
        for f in &fits {
            // the smaller of the bracketed and the unbracketed minima
            let (l2, err) = if f.global.l2_residual < f.l2_residual {
                (f.global.l2_residual, f.global.quad_error)
            } else {
                (f.l2_residual, f.quad_error)
            };
            let positive = l2 > 10.0 * err.max(ROUNDING_FLOOR);
            all_positive &= positive;
            let e = crate::output::fmt_f64(f.epsilon);
            out.push(vec![
                "numeric".into(),
                format!("eps={e}.min_l2").into(),
                crate::output::fmt_f64(l2).into(),
            ]);
            out.push(vec![
                "numeric".into(),
                format!("eps={e}.quad_error").into(),
                crate::output::fmt_f64(err).into(),
            ]);
            entries.push(json!({
                "epsilon": f.epsilon,
                "min_l2_residual": l2,
                "quad_error": err,
                "positive": positive,
                "bracketed": { "c0": f.c0_opt, "lambda": f.lambda_opt, "p": f.p_opt, "l2_residual": f.l2_residual },
                "global": { "c0": f.global.c0, "lambda": f.global.lambda, "p": f.global.p, "l2_residual": f.global.l2_residual },
            }));
        }
        out.push(vec![
            "numeric".into(),
            "all_positive".into(),
            all_positive.to_string().into(),
        ]);
        out.set("numeric", json!({ "all_positive": all_positive, "points": entries }));
        if !all_positive {
            failures.push("some minimum residual is not above ten times its quadrature error".into());
        }
    }
    let fail = if failures.is_empty() {
        None
    } else {
        Some(CliError::Verification(failures.join("; ")))
    };
    out.set("passed", fail.is_none());
    Ok((out, fail))
}

pub fn sphere(a: &SphereArgs) -> Result<Report, CliError> {
    let params = membrane(&a.membrane)?;
    let orientation = match a.orientation {
        OrientationArg::I => SphereOrientation::NegativeMean,
        OrientationArg::II => SphereOrientation::PositiveMean,
    };
    let mut out = Report::new(&["radius", "el_residual"]);
    out.set("orientation", orientation.label());
    out.set(
        "mean_curvature",
        match orientation {
            SphereOrientation::NegativeMean => "H = -1/a",
            SphereOrientation::PositiveMean => "H = +1/a",
        },
    );
    match sphere_solve(&params, orientation) {
        Ok(roots) => {
            for &r in &roots {
                out.push(vec![r.into(), sphere_el_residual(r, &params, orientation)?.into()]);
            }
            out.set("identically_zero", false);
            out.set("roots", roots);
        }
        Err(ResidualError::IdenticallyZero) => {
            out.set("identically_zero", true);
            out.set("roots", Vec::<f64>::new());
        }
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

pub fn rbc(a: &RbcArgs) -> Result<Report, CliError> {
    let params = membrane(&a.membrane)?;
    for (name, x) in [("kappa0", a.kappa0), ("a", a.a), ("r-infl", a.r_infl)] {
        finite(name, x)?;
    }
    if !(a.inner_sign == 1.0 || a.inner_sign == -1.0) {
        return Err(input(format!("--inner-sign must be 1 or -1 (got {})", a.inner_sign)));
    }
    if a.n < 2 {
        return Err(input(format!("--n must be >= 2 (got {})", a.n)));
    }
    let mut profile = build_composite(a.kappa0, a.a, a.r_infl, a.inner_sign)?;
    if let Some(t) = a.truncate {
        profile = profile.truncated(t)?;
    }
    let metrics = composite_metrics(&profile, &params)?;
    let (z_in, z_out) = profile.junction_heights()?;
    let mut out = Report::new(&["r", "z_upper", "z_lower", "branch_id", "psi", "H"]);
    out.set(
        "branches",
        json!([
            { "id": 0, "H": profile.inner.h_const, "C": profile.inner.c_int, "area": metrics.branch_area[0] },
            { "id": 1, "H": profile.outer.h_const, "C": profile.outer.c_int, "area": metrics.branch_area[1] },
        ]),
    );
    out.set(
        "end",
        match profile.end {
            ProfileEnd::Rim { r, kappa } => json!({ "kind": "rim", "r": r, "sin_psi": kappa }),
            ProfileEnd::Truncated { r } => json!({ "kind": "truncated", "r": r }),
            ProfileEnd::Open => json!({ "kind": "open" }),
        },
    );
    out.set("orientation", profile.orientation);
    out.set("junction_height_gap", (z_in - z_out).abs());
    let e = &metrics.energy;
    out.set(
        "metrics",
        json!({
            "bending": e.bending, "area": e.area, "volume": e.volume, "total": e.total,
            "quad_error": { "bending": e.quad_error.bending, "area": e.quad_error.area, "volume": e.quad_error.volume },
        }),
    );
    for p in profile.points(a.n)? {
        out.push(vec![
            p.r.into(),
            p.z_upper.into(),
            p.z_lower.into(),
            p.branch.into(),
            p.psi.into(),
            p.h.into(),
        ]);
    }
    Ok(out)
}

pub fn profile_export(a: &ExportArgs) -> Result<Report, CliError> {
    check_epsilon(a.epsilon)?;
    if a.n == 0 {
        return Err(input("--n must be >= 1".into()));
    }
    let oval = CassiniOval::new(a.epsilon)?;
    let d = oval.domain();
    let conv = SignConvention::RESOLVED;
    let mut out = Report::new(&["r", "z_upper", "z_lower", "u", "u1", "psi", "H", "K"]);
    out.set("domain", [d.lo, d.hi]);
    for k in 0..a.n {
        let r = d.lo + (k as f64 + 0.5) / a.n as f64 * (d.hi - d.lo);
        let j = oval.jet(r)?;
        let c = curvature_point(&oval, r, conv, false)?;
        out.push(vec![
            r.into(),
            j.z.into(),
            (-j.z).into(),
            j.u.into(),
            j.u1.into(),
            c.psi.into(),
            c.h.into(),
            c.k.into(),
        ]);
    }
    Ok(out)
}
