//! Acceptance checks: one PASS/FAIL line per criterion with the measured
//! value next to its pinned tolerance. Exits nonzero when any check fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use helfrich_cli::output::fmt_f64;
use helfrich_core::cmc::{build_composite, composite_metrics};
use helfrich_core::functional::{bending_energy, enclosed_volume, fit_parameters, surface_area, FitOptions};
use helfrich_core::geometry::{cassini_u, cassini_u1_u2, cassini_z, domain_of, Mirrored};
use helfrich_core::radical_algebra::SlopeThirdDerivative;
use helfrich_core::radical_algebra::{rat_int, verify_theorem, MPoly, Var};
use helfrich_core::shape_residual::{
    residual_psi_form, residual_report, residual_u_form, sphere_pressure, ThirdDerivative,
};
use helfrich_core::{
    Branch, CassiniOval, MembraneParams, ResidualForm, SignConvention, SphereOrientation, SphereProfile,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const CONV: SignConvention = SignConvention::RESOLVED;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let v = f();
    (v, t.elapsed())
}

fn helfrich(args: &[&str]) -> (Option<i32>, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_helfrich"))
        .args(args)
        .output()
        .unwrap();
    (o.status.code(), String::from_utf8(o.stdout).unwrap())
}

fn theorem() -> Outcome {
    let ((code, out), dt) = timed(|| helfrich(&["verify-theorem", "--mode", "symbolic", "--format", "json"]));
    let doc: Value = match serde_json::from_str(&out) {
        Ok(v) => v,
        Err(e) => return outcome(false, format!("unreadable output: {e}")),
    };
    let sym = &doc["summary"]["symbolic"];
    let verdict = sym["verdict"].as_str().unwrap_or("").to_string();
    let roots: Vec<f64> = sym["h3_system"]["conditions"]
        .as_array()
        .map(|cs| {
            cs.iter()
                .flat_map(|c| c["roots"].as_array().cloned().unwrap_or_default())
                .filter_map(|r| r["eps"].as_f64())
                .collect()
        })
        .unwrap_or_default();
    let want = [
        (2.0f64 / 51.0).powf(0.25),
        0.5 * ((537f64.sqrt() - 21.0) / 3.0).powf(0.25),
    ];
    let err = want
        .iter()
        .map(|w| roots.iter().map(|r| (r - w).abs()).fold(f64::INFINITY, f64::min))
        .fold(0.0f64, f64::max);
    outcome(
        code == Some(0) && verdict == "CONTRADICTION" && err <= 1e-12 && dt < Duration::from_secs(60),
        format!("verdict {verdict}, exit {code:?}, root error {err:.1e} (tol 1e-12), {dt:.2?} (limit 60 s)"),
    )
}

fn transcription_and_t_components() -> (Outcome, Outcome) {
    let rep = match verify_theorem() {
        Ok(r) => r,
        Err(e) => {
            let o = || outcome(false, format!("{e}"));
            return (o(), o());
        }
    };
    let Some(scale) = rep.reference.scale.clone() else {
        return (
            outcome(false, "no common scale with the transcription".into()),
            outcome(rep.t_components_vanish, String::new()),
        );
    };
    let inv = rat_int(1) / scale;
    let eps = MPoly::var(Var::Eps);
    let c0 = MPoly::var(Var::C0);
    let p = MPoly::var(Var::P);
    let h3_r5 = rep.h[2].coefficient(Var::R, 5).scale(&inv);
    let want_r5 = &(&p * &eps.pow(2)).scale(&rat_int(2)) - &(&c0 * &eps.pow(4)).scale(&rat_int(40));
    let h1_r7 = rep.h[0]
        .subs(Var::C0, &rat_int(0))
        .subs(Var::P, &rat_int(0))
        .coefficient(Var::R, 7)
        .scale(&inv);
    let want_r7 = eps.pow(4).scale(&rat_int(-10));
    let want_p = (&c0 * &eps.pow(2)).scale(&rat_int(20));
    let anchors = [h3_r5 == want_r5, h1_r7 == want_r7, rep.h3.pressure == want_p];
    let matched = rep.reference.all_match() && anchors.iter().all(|&a| a);
    let transcription = outcome(
        matched,
        format!(
            "{} term mismatches against H1-H4, anchors H3 r^5 {}, H1 r^7 {}, P {} (exact)",
            rep.reference.mismatches(),
            anchors[0],
            anchors[1],
            anchors[2]
        ),
    );
    let t = outcome(
        rep.t_components_vanish,
        format!("t components vanish: {} (exact)", rep.t_components_vanish),
    );
    (transcription, t)
}

fn spheres() -> Outcome {
    let (worst, dt) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut worst = 0.0f64;
        for case in 0..100 {
            let a: f64 = rng.gen_range(0.2..5.0);
            let c0: f64 = rng.gen_range(-3.0..3.0);
            let lambda: f64 = rng.gen_range(-3.0..3.0);
            let orientation = if case % 2 == 0 {
                SphereOrientation::PositiveMean
            } else {
                SphereOrientation::NegativeMean
            };
            let params = MembraneParams::normalized(c0, lambda, sphere_pressure(a, c0, lambda, orientation));
            let s = SphereProfile::new(a).unwrap();
            for form in [ResidualForm::ThirdOrder, ResidualForm::PsiForm, ResidualForm::UForm] {
                let mode = ThirdDerivative::AnalyticOnly;
                let rep = match orientation {
                    SphereOrientation::PositiveMean => residual_report(&s, &params, form, 16, 0.05, CONV, mode),
                    SphereOrientation::NegativeMean => {
                        residual_report(&Mirrored(s), &params, form, 16, 0.05, CONV, mode)
                    }
                };
                worst = worst.max(rep.map_or(f64::INFINITY, |r| r.sup_norm));
            }
        }
        worst
    });
    outcome(
        worst <= 1e-8 && dt < Duration::from_secs(5),
        format!("worst sup {worst:.1e} over 100 spheres x 3 forms (tol 1e-8), {dt:.2?} (limit 5 s)"),
    )
}

fn cross_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let eps: f64 = rng.gen_range(0.0..1.5);
        let d = domain_of(eps);
        let r = d.lo + rng.gen_range(0.01..0.99) * (d.hi - d.lo);
        let oval = CassiniOval::new(eps).unwrap();
        let params = MembraneParams::normalized(
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
            rng.gen_range(-3.0..3.0),
        );
        let (Ok(psi), Ok(u)) = (
            residual_psi_form(&oval, &params, r, CONV),
            residual_u_form(&oval, &params, r),
        ) else {
            worst = f64::INFINITY;
            continue;
        };
        worst = worst.max((psi - u).abs() / u.abs());
    }
    let (code, out) = helfrich(&["residual", "--format", "json"]);
    let meta: Value = serde_json::from_str(&out).unwrap_or(Value::Null);
    let recorded = &meta["metadata"]["sign_convention"];
    let conv_ok = code == Some(0) && recorded["sigma"].as_f64() == Some(CONV.sign());
    outcome(
        worst <= 1e-7 && conv_ok,
        format!("worst relative gap {worst:.1e} on 1000 samples (tol 1e-7), metadata convention {recorded}"),
    )
}

fn round_sphere() -> Outcome {
    let oval = CassiniOval::new(0.0).unwrap();
    let willmore = MembraneParams::normalized(0.0, 0.0, 0.0);
    let (a, ta) = timed(|| surface_area(&oval).map_or(f64::NAN, |e| e.value));
    let (v, tv) = timed(|| enclosed_volume(&oval).map_or(f64::NAN, |e| e.value));
    let (b, tb) = timed(|| bending_energy(&oval, &willmore, CONV).map_or(f64::NAN, |e| e.value));
    let errs = [a / (4.0 * PI) - 1.0, v / (4.0 * PI / 3.0) - 1.0, b / (16.0 * PI) - 1.0].map(f64::abs);
    let worst = errs.iter().fold(0.0f64, |m, e| m.max(*e));
    let slowest = ta.max(tv).max(tb);
    outcome(
        worst <= 1e-6 && slowest < Duration::from_secs(1),
        format!(
            "relative errors area {:.1e}, volume {:.1e}, bending {:.1e} (tol 1e-6), slowest {slowest:.2?} (limit 1 s)",
            errs[0], errs[1], errs[2]
        ),
    )
}

fn sweep() -> Outcome {
    let opts = FitOptions::default();
    let grid = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2];
    let (rows, dt) = timed(|| {
        grid.iter()
            .map(|&e| {
                fit_parameters(e, &opts).map(|f| {
                    if f.global.l2_residual < f.l2_residual {
                        (e, f.global.l2_residual, f.global.quad_error)
                    } else {
                        (e, f.l2_residual, f.quad_error)
                    }
                })
            })
            .collect::<Result<Vec<_>, _>>()
    });
    let rows = match rows {
        Ok(r) => r,
        Err(e) => return outcome(false, format!("fit failed: {e}")),
    };
    let all = rows.iter().all(|&(_, l2, err)| l2 > 10.0 * err);
    let (e, l2, err) = rows
        .iter()
        .copied()
        .min_by(|x, y| (x.1 / x.2.max(f64::MIN_POSITIVE)).total_cmp(&(y.1 / y.2.max(f64::MIN_POSITIVE))))
        .unwrap();
    let min_l2 = rows.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
    outcome(
        all && dt < Duration::from_secs(120),
        format!(
            "smallest l2 {} ; tightest margin at eps {e}: l2 {} vs quad error {} (need l2 > 10x), {dt:.2?} (limit 120 s)",
            fmt_f64(min_l2),
            fmt_f64(l2),
            fmt_f64(err)
        ),
    )
}

fn derivatives() -> Outcome {
    let third = SlopeThirdDerivative::build();
    let richardson = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + 2.0 * h) - f(x - 2.0 * h)) / (4.0 * h);
        d1 + (d1 - d2) / 3.0
    };
    let rel = |v: f64, o: f64| (v - o).abs() / o.abs().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = [0.0f64; 3];
    for _ in 0..1000 {
        let eps: f64 = rng.gen_range(0.0..1.5);
        let d = domain_of(eps);
        let r = d.lo + rng.gen_range(0.01..0.99) * (d.hi - d.lo);
        let z = cassini_z(r, eps, Branch::Upper).unwrap();
        let mut scale = (d.hi - r).min(z * z);
        if eps >= 1.0 {
            scale = scale.min(r - d.lo);
        }
        let h = 1e-3 * scale;
        let u = |x: f64| cassini_u(x, eps).unwrap();
        let u1 = |x: f64| cassini_u1_u2(x, eps).unwrap().0;
        let u2 = |x: f64| cassini_u1_u2(x, eps).unwrap().1;
        let (a1, a2) = cassini_u1_u2(r, eps).unwrap();
        worst[0] = worst[0].max(rel(a1, richardson(&u, r, h)));
        worst[1] = worst[1].max(rel(a2, richardson(&u1, r, h)));
        worst[2] = worst[2].max(rel(third.eval(r, eps), richardson(&u2, r, h)));
    }
    outcome(
        worst[0] <= 1e-7 && worst[1] <= 1e-5 && worst[2] <= 1e-3,
        format!(
            "u' {:.1e} (tol 1e-7), u'' {:.1e} (tol 1e-5), u''' {:.1e} (tol 1e-3) on 1000 points",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn cmc() -> Outcome {
    let run = || -> Result<(f64, f64, f64), helfrich_core::cmc::CmcError> {
        let mut h_defect = 0.0f64;
        let mut bend_gap = 0.0f64;
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut n = 0;
        while n < 20 {
            let kappa0: f64 = rng.gen_range(-2.0..-0.3);
            let a: f64 = rng.gen_range(0.0..0.8);
            let r_i = rng.gen_range(0.1..0.9) / (kappa0 + a).abs().max(0.5);
            let Ok(p) = build_composite(kappa0, a, r_i, 1.0) else {
                continue;
            };
            let Some(r_end) = p.r_end() else { continue };
            n += 1;
            for k in 0..16 {
                let x = (k as f64 + 0.5) / 16.0;
                h_defect = h_defect.max(p.inner.constant_h_defect(x * r_i)?);
                h_defect = h_defect.max(p.outer.constant_h_defect(r_i + 0.999 * x * (r_end - r_i))?);
            }
            let m = composite_metrics(&p, &MembraneParams::normalized(2.0 * kappa0, 0.0, 0.0))?;
            let want = 4.0 * a * a * m.energy.area;
            bend_gap = bend_gap.max((m.energy.bending - want).abs() / want.max(1.0));
        }
        let sphere = build_composite(-1.0, 0.0, 0.7, 1.0)?;
        let m = composite_metrics(&sphere, &MembraneParams::normalized(0.0, 0.0, 0.0))?.energy;
        let sphere_err = [
            m.area / (4.0 * PI) - 1.0,
            m.volume / (4.0 * PI / 3.0) - 1.0,
            m.bending / (16.0 * PI) - 1.0,
        ]
        .iter()
        .fold(0.0f64, |w, e| w.max(e.abs()));
        Ok((h_defect, sphere_err, bend_gap))
    };
    match run() {
        Ok((h, s, b)) => outcome(
            h <= 1e-10 && s <= 1e-8 && b <= 1e-8,
            format!("H defect {h:.1e} (tol 1e-10), a = 0 sphere metrics {s:.1e} (tol 1e-8), bending vs 4a^2 A {b:.1e} (tol 1e-8)"),
        ),
        Err(e) => outcome(false, format!("{e}")),
    }
}

fn determinism() -> Outcome {
    let commands: [&[&str]; 4] = [
        &["residual", "--epsilon", "0.7", "--c0", "0.3"],
        &["energy", "--epsilon", "0,0.5,1.2"],
        &["fit", "--epsilon", "0.5,1.1"],
        &["rbc"],
    ];
    let mut differing = Vec::new();
    for args in commands {
        let (_, a) = helfrich(args);
        let (_, b) = helfrich(args);
        let body = |s: &str| s.split_once('\n').map(|(_, b)| b.to_string()).unwrap_or_default();
        if body(&a).is_empty() || body(&a) != body(&b) {
            differing.push(args[0]);
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} of {} commands differ between runs {differing:?}",
            differing.len(),
            commands.len()
        ),
    )
}

fn main() {
    let (transcription, t_components) = transcription_and_t_components();
    let results = [
        ("symbolic verdict and roots", theorem()),
        ("cleared residual matches H1-H4", transcription),
        ("t components vanish", t_components),
        ("equilibrium spheres", spheres()),
        ("psi-form and u-form agree", cross_form()),
        ("round sphere anchors", round_sphere()),
        ("fit residual positive", sweep()),
        ("slope derivatives", derivatives()),
        ("constant-mean-curvature profiles", cmc()),
        ("deterministic output", determinism()),
    ];
    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        println!(
            "{} criterion {:>2} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            k + 1,
            o.detail
        );
        if !o.pass {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
