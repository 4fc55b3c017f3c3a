mod common;

use std::f64::consts::PI;

use common::{random_coefficients, rng, BASIS8};
use qtcurv::energy::CurvaturePair;
use qtcurv::geometry::*;
use qtcurv::solver::SymmetricSolver;
use qtcurv::spectral::SpectralField;
use qtcurv::verify::*;
use qtcurv::Error;

const FP: f64 = 4.0 * PI * PI;

fn zeros() -> SpectralField<f64> {
    SpectralField::zeros(BASIS8.len())
}

fn equator_point() -> SpherePoint<f64> {
    SpherePoint::on_equator([1.0, 0.0, 0.0, 0.0])
}

#[test]
fn gbc_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    assert!(check_gbc(b, &zeros(), &CurvaturePair::constant(g, 3.0, 0.0)) < 1e-10);
    assert!(check_gbc(b, &zeros(), &CurvaturePair::constant(g, 0.0, 2.0)) < 1e-10);
    let off = check_gbc(b, &zeros(), &CurvaturePair::constant(g, 1.0, 1.0));
    assert!((off - (FP - FP / 3.0 - 2.0 * PI * PI)).abs() < 1e-10);
}

#[test]
fn residual_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    assert!(residual_interior(b, &zeros(), &CurvaturePair::constant(g, 3.0, 0.0), 0.2) < 1e-9);
    assert!((residual_interior(b, &zeros(), &CurvaturePair::constant(g, 1.0, 0.0), 0.2) - 4.0).abs() < 1e-12);
    // Constant data carries no boundary layer when T ≡ 0.
    assert!(residual_interior_layer_free(b, &zeros(), &CurvaturePair::constant(g, 3.0, 0.0), 0.2) < 1e-9);
}

#[test]
fn bubble_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    let spec = BubbleSpec::new(equator_point(), 1.0).unwrap();
    assert!(bubble(&spec, g).iter().all(|v| v.abs() < 1e-15));
    assert!(matches!(BubbleSpec::new(equator_point(), 0.5), Err(Error::Domain { .. })));
    assert!(matches!(
        BubbleSpec::new(SpherePoint::normalized([1.0, 0.0, 0.0, 0.0, -0.5]), 2.0),
        Err(Error::Domain { .. })
    ));

    // Evenness of equator-centered bubbles.
    let spec = BubbleSpec::new(SpherePoint::on_equator([0.6, 0.0, 0.8, 0.0]), 5.0).unwrap();
    for x in g.interior_nodes().iter().step_by(53) {
        assert!((spec.value(x) - spec.value(&x.reflect())).abs() < 1e-10);
    }
    b.check_parity(&bubble(&spec, g), 1e-10).unwrap();
}

#[test]
fn bubble_volume_is_conformally_invariant() {
    let vol = 8.0 * PI * PI / 3.0;
    let e4 = |spec: &BubbleSpec<f64>, g: &QuadratureGrid<f64>| {
        g.integrate_sphere(&g.sample(|x| (4.0 * spec.value(x)).exp()))
    };
    // Full-grid quadrature where the grid resolves the bubble.
    for (lam, res, tol) in [(2.0, 16, 1e-10), (10.0, 64, 1e-6)] {
        let g = QuadratureGrid::new(res).unwrap();
        let spec = BubbleSpec::new(equator_point(), lam).unwrap();
        assert!((e4(&spec, &g) - vol).abs() < tol * vol, "lambda {lam}");
    }
    // One-dimensional graded quadrature for every λ, including 100.
    for lam in [2.0, 10.0, 100.0] {
        let z = ZonalBubble::new(lam).unwrap();
        assert!((z.sphere_exp - vol).abs() < 1e-12 * vol);
        assert!((z.equator_exp - 2.0 * PI * PI).abs() < 1e-12 * 2.0 * PI * PI);
    }
    // An interior center: the Jacobian identity holds on the whole sphere.
    let g = QuadratureGrid::new(16).unwrap();
    let spec = BubbleSpec::new(SpherePoint::normalized([0.0, 0.6, 0.0, 0.0, 0.8]), 2.0).unwrap();
    assert!((e4(&spec, &g) - vol).abs() < 1e-10 * vol);
}

#[test]
fn zonal_quadrature_matches_grid_quadrature() {
    // At λ = 2 both rules resolve the bubble: compare every integral of the
    // zonal summary against the grid.
    let b = &*BASIS8;
    let spec = BubbleSpec::new(equator_point(), 2.0).unwrap();
    let z = ZonalBubble::new(2.0).unwrap();
    let g = QuadratureGrid::new(24).unwrap();
    let u = g.sample(|x| spec.value(x));
    assert!((g.integrate_sphere(&u) / (8.0 * PI * PI / 3.0) - z.mean).abs() < 1e-10);
    let ub = g.sample_boundary(|x| (3.0 * spec.value(x)).exp());
    assert!((g.integrate_boundary(&ub) - z.equator_exp).abs() < 1e-10);
    // The projected bubble has nearly the same quadratic form.
    let f = bubble_field(b, &spec).unwrap();
    let q = qtcurv::spectral::quadratic_form(b, &f);
    assert!((q - z.quadratic_form).abs() < 1e-2 * z.quadratic_form, "{q} vs {}", z.quadratic_form);
}

#[test]
fn deficit_examples() {
    let b = &*BASIS8;
    assert!((mt_deficit_interior(b, &zeros()) - (FP / 3.0).ln()).abs() < 1e-12);
    assert!((mt_deficit_boundary(b, &zeros()) - (2.0 * PI * PI).ln()).abs() < 1e-12);
    let mut r = rng(8);
    for _ in 0..5 {
        let u = SpectralField::from_coefficients(random_coefficients(b, &mut r, 0.5));
        let v = u.add_constant(b, 0.9);
        assert!((mt_deficit_interior(b, &u) - mt_deficit_interior(b, &v)).abs() < 1e-12);
        assert!((mt_deficit_boundary(b, &u) - mt_deficit_boundary(b, &v)).abs() < 1e-12);
    }
}

#[test]
fn bubbles_attain_the_sharp_constants() {
    for lam in standard_lambdas() {
        let z = ZonalBubble::new(lam).unwrap();
        assert!((z.interior_deficit(1.0) - (FP / 3.0).ln()).abs() < 1e-10, "{lam}");
        assert!((z.boundary_deficit(1.0) - (2.0 * PI * PI).ln()).abs() < 1e-10, "{lam}");
    }
}

#[test]
fn deficit_sweeps_are_bounded_and_stabilise() {
    let b = &*BASIS8;
    let rows = global_deficit_sweep(b, equator_point(), &standard_lambdas(), 0.9).unwrap();
    for variant in ["projected", "exact"] {
        for region in ["interior", "boundary"] {
            let vals: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.variant == variant && r.region == region)
                .map(|r| (r.lambda, r.deficit))
                .collect();
            assert_eq!(vals.len(), 9);
            assert!(vals.iter().all(|v| v.1.is_finite()));
            let d128 = vals[7].1;
            let d256 = vals[8].1;
            assert!((d256 - d128).abs() <= 0.05 * d128.abs(), "{variant} {region}: {d128} {d256}");
        }
    }
    // Below the sharp constant the exact bubbles break the inequality.
    let probe: Vec<f64> = rows
        .iter()
        .filter(|r| r.variant == "exact-probe" && r.region == "interior")
        .map(|r| r.deficit)
        .collect();
    assert!(probe.windows(2).all(|w| w[1] > w[0]));
    let mut csv = Vec::new();
    write_deficit_csv(&rows, &["sweep".into()], &mut csv).unwrap();
    let s = String::from_utf8(csv).unwrap();
    assert!(s.contains("lambda_c,deficit,variant,region"));
    assert_eq!(s.lines().count(), 2 + rows.len());
}

fn c2xc2_covering() -> CoveringConfig<f64> {
    let grp = SymmetryGroup::builtin("c2xc2").unwrap();
    build_covering(&grp, BASIS8.grid(), DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap()
}

#[test]
fn local_deficit_of_zero_is_log_volume() {
    let b = &*BASIS8;
    let g = b.grid();
    let cov = c2xc2_covering();
    for (region, kind) in [
        (CoverRegion::Omega, ConstantKind::Interior),
        (CoverRegion::Ball(0), ConstantKind::Touching),
        (CoverRegion::Partner(3), ConstantKind::Touching),
        (CoverRegion::Ball(2), ConstantKind::Boundary),
    ] {
        let vol: f64 = if kind == ConstantKind::Boundary {
            g.boundary_nodes()
                .iter()
                .zip(g.boundary_weights())
                .filter(|(x, _)| cov.boundary_contains(region, x))
                .map(|(_, w)| w)
                .sum()
        } else {
            g.hemisphere_nodes()
                .iter()
                .zip(g.hemisphere_weights())
                .filter(|(x, _)| cov.interior_contains(region, x))
                .map(|(_, w)| w)
                .sum()
        };
        let d = mt_deficit_local(b, &zeros(), &cov, region, kind, 24.0, 0.1).unwrap();
        assert!((d - vol.ln()).abs() < 1e-12, "{region:?}");
    }
    assert!(matches!(
        mt_deficit_local(b, &zeros(), &cov, CoverRegion::Omega, ConstantKind::Interior, 24.0, 0.0),
        Err(Error::Domain { .. })
    ));
    // The fixed set of c2xc2 is empty, and so is its region.
    assert!(matches!(
        mt_deficit_local(b, &zeros(), &cov, CoverRegion::Fixed, ConstantKind::Touching, 24.0, 0.1),
        Err(Error::Domain { .. })
    ));
}

#[test]
fn local_constants() {
    assert_eq!(ConstantKind::Touching.value::<f64>(), 2.0 * ConstantKind::Interior.value::<f64>());
    assert!((ConstantKind::Interior.value::<f64>() - 1.0 / (8.0 * PI * PI)).abs() < 1e-16);
    assert!((ConstantKind::Boundary.value::<f64>() - 3.0 / (16.0 * PI * PI)).abs() < 1e-16);
}

#[test]
fn far_bubble_drains_the_region() {
    let b = &*BASIS8;
    let cov = c2xc2_covering();
    let p = cov.centers[0].perp();
    let far = SpherePoint::on_equator([-p[0], -p[1], -p[2], -p[3]]);
    let lambdas = [1.0, 4.0, 16.0, 64.0];
    let rows = local_deficit_sweep(b, &cov, CoverRegion::Ball(0), ConstantKind::Touching, far, &lambdas, &[360.0], 0.1)
        .unwrap();
    let d: Vec<f64> = rows.iter().map(|r| r.deficit).collect();
    assert!(d.windows(2).all(|w| w[1] < w[0]), "{d:?}");
}

#[test]
fn local_sweeps_are_bounded_and_stabilise() {
    let b = &*BASIS8;
    let cov = c2xc2_covering();
    let pole = SpherePoint::north_pole();
    let c0 = cov.centers[0];
    let cuts = local_cutoffs::<f64>();
    for (region, kind, center) in [
        (CoverRegion::Omega, ConstantKind::Interior, pole),
        (CoverRegion::Ball(0), ConstantKind::Touching, c0),
        (CoverRegion::Ball(0), ConstantKind::Boundary, c0),
    ] {
        let rows = local_deficit_sweep(b, &cov, region, kind, center, &standard_lambdas(), &cuts, 0.1).unwrap();
        for cut in &cuts {
            let v: Vec<f64> = rows
                .iter()
                .filter(|r| r.variant.ends_with(&format!("cut{cut}")))
                .map(|r| r.deficit)
                .collect();
            assert!(v.iter().all(|x| x.is_finite()));
            let (a, c) = (v[7], v[8]);
            assert!((c - a).abs() <= 0.05 * a.abs(), "{} cut {cut}: {a} {c}", kind.as_str());
        }
    }
}

#[test]
fn mass_of_zero_follows_region_volumes() {
    let b = &*BASIS8;
    let g = b.grid();
    let cov = c2xc2_covering();
    let curv = CurvaturePair::constant(g, 1.0, 1.0);
    let rep = mass_distribution(b, &zeros(), &curv, &cov).unwrap();
    let total: f64 = g.hemisphere_weights().iter().sum();
    for &(r, f) in &rep.interior {
        let vol: f64 = g
            .hemisphere_nodes()
            .iter()
            .zip(g.hemisphere_weights())
            .filter(|(x, _)| cov.interior_contains(r, x))
            .map(|(_, w)| w)
            .sum();
        assert!((f - vol / total).abs() < 1e-12, "{r:?}");
        assert!(f >= 0.0 && f <= 1.0 + OVERLAP_SLACK);
    }
    let sum: f64 = rep.interior.iter().map(|p| p.1).sum();
    assert!(sum >= 1.0 - 1e-12);
    let largest = rep.interior.iter().fold((CoverRegion::Fixed, 0.0), |m, &p| if p.1 > m.1 { p } else { m });
    assert_eq!(largest.0, CoverRegion::Omega);
    assert_eq!(rep.interior_case, InteriorCase::III);
    assert!(rep.interior_case_fraction(rep.interior_case) >= rep.gamma_interior);
    assert!(rep.boundary_case_fraction(rep.boundary_case) >= rep.gamma_boundary);
    assert_eq!(rep.gamma_interior, 1.0 / (2 + cov.n_balls()) as f64);
    assert_eq!(rep.gamma_boundary, 1.0 / (1 + cov.n_balls()) as f64);
    assert!(rep.pair_defect() < 1e-12);

    let mut csv = Vec::new();
    write_mass_csv(&rep, &[], &mut csv).unwrap();
    let s = String::from_utf8(csv).unwrap();
    assert!(s.contains("interior_case=iii"));
    assert!(s.contains("region,domain,fraction"));
}

#[test]
fn bubble_at_a_fixed_point_selects_the_fixed_cases() {
    let g = QuadratureGrid::new(24).unwrap();
    let grp = SymmetryGroup::builtin("refl").unwrap();
    let cov = build_covering(&grp, &g, DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap();
    let spec = BubbleSpec::new(SpherePoint::on_equator([0.0, 1.0, 0.0, 0.0]), 256.0).unwrap();
    let uh = g.sample_hemisphere(|x| spec.value(x));
    let ub = g.sample_boundary(|x| spec.value(x));
    let curv = CurvaturePair::constant(&g, 1.0, 1.0);
    let rep = mass_distribution_samples(&g, &uh, &ub, &curv, &cov).unwrap();
    assert_eq!(rep.interior_case, InteriorCase::I);
    assert_eq!(rep.boundary_case, BoundaryCase::A);
}

#[test]
fn mass_requires_positive_totals() {
    let b = &*BASIS8;
    let cov = c2xc2_covering();
    let curv = CurvaturePair::constant(b.grid(), -1.0, 1.0);
    assert!(matches!(mass_distribution(b, &zeros(), &curv, &cov), Err(Error::Admissibility { .. })));
}

#[test]
fn symmetric_pairs_carry_equal_mass() {
    let b = &*BASIS8;
    let g = b.grid();
    for name in ["c2xc2", "refl"] {
        let grp = SymmetryGroup::builtin(name).unwrap();
        let cov = build_covering(&grp, g, DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap();
        let s = SymmetricSolver::new(b, &grp);
        let curv = CurvaturePair::from_fns(g, &grp, |x| 1.0 + x.coords()[0].powi(2), |x| 2.0 + x.coords()[1]);
        let mut r = rng(77);
        for _ in 0..25 {
            let mut c = random_coefficients(b, &mut r, 1.0);
            s.project(&mut c);
            let rep = mass_distribution(b, &SpectralField::from_coefficients(c), &curv, &cov).unwrap();
            assert!(rep.pair_defect() < 1e-9, "{name}: {}", rep.pair_defect());
        }
    }
}
