use std::f64::consts::PI;

use helfrich_core::cmc::{branch_psi, build_composite, composite_metrics, CmcBranch, CmcError, ProfileEnd};
use helfrich_core::MembraneParams;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn richardson<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
    let d2 = (f(x + 2.0 * h) - f(x - 2.0 * h)) / (4.0 * h);
    d1 + (d1 - d2) / 3.0
}

/// A closed composite drawn at random: inner curvature negative enough to
/// bend the outer branch back to a rim.
fn random_closed(rng: &mut ChaCha8Rng) -> (f64, f64, f64, f64) {
    loop {
        let kappa0: f64 = rng.gen_range(-2.0..-0.3);
        let a: f64 = rng.gen_range(0.0..0.8);
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let h_in = kappa0 + sign * a;
        if h_in == 0.0 {
            continue;
        }
        let r_i = rng.gen_range(0.1..0.9) / h_in.abs().max(0.5);
        if let Ok(p) = build_composite(kappa0, a, r_i, sign) {
            if p.is_closed() {
                return (kappa0, a, r_i, sign);
            }
        }
    }
}

#[test]
fn each_branch_has_constant_mean_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (kappa0, a, r_i, sign) = random_closed(&mut rng);
        let p = build_composite(kappa0, a, r_i, sign).unwrap();
        let r_end = p.r_end().unwrap();
        for k in 0..16 {
            let x = (k as f64 + 0.5) / 16.0;
            worst = worst.max(p.inner.constant_h_defect(x * r_i).unwrap());
            let r = r_i + x * (r_end - r_i) * 0.999;
            worst = worst.max(p.outer.constant_h_defect(r).unwrap());
        }
        assert_eq!(p.inner.constant_h_defect(0.0).unwrap(), 0.0);
    }
    assert!(worst <= 1e-10, "{worst:e}");
}

#[test]
fn mean_curvature_from_differences_of_the_angle() {
    // 2 H r = -d(r sin psi)/dr on every branch
    let b = CmcBranch::new(-0.5, -0.64, 0.8, 1.6).unwrap();
    for r in [0.9, 1.1, 1.3, 1.5] {
        let fd = richardson(|x| x * b.sin_psi(x), r, 1e-3);
        assert!((-fd / (2.0 * r) - b.h_const).abs() < 1e-10);
        let k = b.curvature(r).unwrap();
        assert!((k.h - b.h_const).abs() < 1e-12);
        // the outer branch is not spherical
        assert!((k.k - b.h_const * b.h_const).abs() > 1e-3);
    }
}

#[test]
fn branch_angle_examples() {
    let sphere = CmcBranch::new(-1.0, 0.0, 0.0, 1.0).unwrap();
    assert!((branch_psi(&sphere, 0.5).unwrap().psi - 0.5f64.asin()).abs() < 1e-15);
    for r in [0.2, 0.5, 0.8] {
        let a = branch_psi(&sphere, r).unwrap();
        assert!((a.psi - r.asin()).abs() < 1e-12);
        assert!((a.dpsi_dr - 1.0 / (1.0 - r * r).sqrt()).abs() < 1e-12);
    }
    let flat = CmcBranch::new(0.0, 0.5, 0.6, 3.0).unwrap();
    assert!((branch_psi(&flat, 1.0).unwrap().psi - 0.5f64.asin()).abs() < 1e-15);
    assert!(matches!(branch_psi(&flat, 0.1), Err(CmcError::OutsideBranch { .. })));
}

#[test]
fn junction_is_smooth_and_heights_match() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let (kappa0, a, r_i, sign) = random_closed(&mut rng);
        let p = build_composite(kappa0, a, r_i, sign).unwrap();
        assert!((p.inner.sin_psi(r_i) - p.outer.sin_psi(r_i)).abs() <= 1e-14);
        let (zi, zo) = p.junction_heights().unwrap();
        assert!((zi - zo).abs() <= 1e-10 * (1.0 + zi.abs()), "{zi} vs {zo}");
        assert!((p.outer.c_int - (p.outer.h_const - p.inner.h_const) * r_i * r_i).abs() < 1e-15);
    }
}

#[test]
fn heights_integrate_the_slope_and_close_at_the_rim() {
    let p = build_composite(-1.0, 0.5, 0.8, 1.0).unwrap();
    let r_end = p.r_end().unwrap();
    assert_eq!(p.z_upper(r_end).unwrap(), 0.0);
    assert!(matches!(p.end, ProfileEnd::Rim { .. }));
    for r in [0.3, 0.6, 1.0, 1.2] {
        if r >= r_end - 0.05 {
            continue;
        }
        let fd = richardson(|x| p.z_upper(x).unwrap(), r, 1e-3);
        let tan = p.angle(r).unwrap().psi.tan();
        assert!(
            (fd.abs() - tan.abs()).abs() < 1e-7 * (1.0 + tan.abs()),
            "r {r}: {fd} vs {tan}"
        );
    }
    assert!(p.z_upper(0.0).unwrap() > 0.0);
}

#[test]
fn points_are_mirror_symmetric() {
    let p = build_composite(-1.2, 0.4, 0.5, -1.0).unwrap();
    let pts = p.points(41).unwrap();
    assert_eq!(pts.iter().filter(|q| q.r == 0.5).count(), 2);
    for q in &pts {
        assert!((q.z_lower + q.z_upper).abs() <= 1e-10);
        let h = if q.branch == 0 {
            p.inner.h_const
        } else {
            p.outer.h_const
        };
        assert_eq!(q.h, h);
    }
    assert!(pts.windows(2).all(|w| w[0].r <= w[1].r));
}

#[test]
fn degenerate_composite_is_the_unit_sphere() {
    let p = build_composite(-1.0, 0.0, 0.6, 1.0).unwrap();
    for r in [0.0, 0.3, 0.6, 0.9, 0.99] {
        let z = p.z_upper(r).unwrap();
        assert!((z - (1.0 - r * r).sqrt()).abs() < 1e-10, "r {r}: {z}");
    }
    let m = composite_metrics(&p, &MembraneParams::normalized(0.0, 0.0, 0.0)).unwrap();
    assert!((m.energy.area / (4.0 * PI) - 1.0).abs() < 1e-8);
    assert!((m.energy.volume / (4.0 * PI / 3.0) - 1.0).abs() < 1e-8);
    assert!((m.energy.bending / (16.0 * PI) - 1.0).abs() < 1e-8);
}

#[test]
fn inner_cap_area_is_a_spherical_cap() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let params = MembraneParams::normalized(0.0, 0.0, 0.0);
    for _ in 0..20 {
        let (kappa0, a, r_i, sign) = random_closed(&mut rng);
        let p = build_composite(kappa0, a, r_i, sign).unwrap();
        let m = composite_metrics(&p, &params).unwrap();
        let big = 1.0 / p.inner.h_const.abs();
        let cap = 4.0 * PI * big * (big - (big * big - r_i * r_i).sqrt());
        assert!(
            (m.branch_area[0] / cap - 1.0).abs() < 1e-9,
            "{} vs {cap}",
            m.branch_area[0]
        );
        assert!(m.branch_area[1] > 0.0);
    }
}

#[test]
fn spontaneous_curvature_at_the_mean_leaves_uniform_bending() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..20 {
        let (kappa0, a, r_i, sign) = random_closed(&mut rng);
        let p = build_composite(kappa0, a, r_i, sign).unwrap();
        let m = composite_metrics(&p, &MembraneParams::normalized(2.0 * kappa0, 0.0, 0.0)).unwrap();
        let want = 4.0 * a * a * m.energy.area;
        assert!(
            (m.energy.bending - want).abs() <= 1e-8 * want.max(1.0),
            "{} vs {want}",
            m.energy.bending
        );
    }
}

#[test]
fn open_and_truncated_profiles() {
    let p = build_composite(0.5, 0.5, 0.5, 1.0).unwrap();
    assert_eq!(p.end, ProfileEnd::Open);
    assert!(p.r_end().is_none());
    let params = MembraneParams::normalized(0.0, 0.0, 0.0);
    assert!(matches!(composite_metrics(&p, &params), Err(CmcError::OpenProfile)));
    assert!(matches!(p.points(5), Err(CmcError::OpenProfile)));
    let t = p.truncated(2.0).unwrap();
    assert_eq!(t.r_end(), Some(2.0));
    assert_eq!(t.z_upper(2.0).unwrap(), 0.0);
    assert!(composite_metrics(&t, &params).unwrap().energy.area > 0.0);
    assert!(matches!(p.truncated(0.4), Err(CmcError::InvalidTruncation { .. })));

    let closed = build_composite(-1.0, 0.5, 0.8, 1.0).unwrap();
    let end = closed.r_end().unwrap();
    assert!(matches!(
        closed.truncated(end + 0.1),
        Err(CmcError::InvalidTruncation { .. })
    ));
}

#[test]
fn invalid_inputs() {
    assert!(matches!(
        build_composite(-1.0, 0.5, 0.8, -1.0),
        Err(CmcError::InfeasibleJunction { .. })
    ));
    assert!(matches!(
        build_composite(-1.0, 0.5, 0.0, 1.0),
        Err(CmcError::InvalidInput { .. })
    ));
    assert!(matches!(
        build_composite(-1.0, 0.5, 0.5, 0.5),
        Err(CmcError::InvalidInput { .. })
    ));
    assert!(matches!(
        build_composite(f64::NAN, 0.5, 0.5, 1.0),
        Err(CmcError::InvalidInput { .. })
    ));
}

proptest! {
    #[test]
    fn rim_is_vertical(kappa0 in -2.0f64..-0.3, a in 0.0f64..0.8, x in 0.1f64..0.9) {
        let h_in = kappa0 + a;
        let r_i = x / h_in.abs().max(0.5);
        if let Ok(p) = build_composite(kappa0, a, r_i, 1.0) {
            if let ProfileEnd::Rim { r, kappa } = p.end {
                prop_assert!((p.outer.sin_psi(r) - kappa).abs() < 1e-12);
                prop_assert!(r > r_i);
                let pts = p.points(9).unwrap();
                let last = pts.last().unwrap();
                prop_assert!((last.psi.abs() - PI / 2.0).abs() < 1e-12);
            }
        }
    }
}
