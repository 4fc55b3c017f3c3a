mod common;

use std::f64::consts::PI;

use common::{random_coefficients, rng, BASIS8};
use proptest::prelude::*;
use qtcurv::geometry::*;
use qtcurv::spectral::{analyze, synthesize};
use qtcurv::Error;

#[test]
fn grid_volumes() {
    let g = QuadratureGrid::<f64>::new(8).unwrap();
    let sum = |w: &[f64]| w.iter().sum::<f64>();
    assert!((sum(g.interior_weights()) - 8.0 * PI * PI / 3.0).abs() < 1e-10);
    assert!((sum(g.boundary_weights()) - 2.0 * PI * PI).abs() < 1e-10);
    let ones = vec![1.0; g.hemisphere_len()];
    assert!((g.integrate_hemisphere(&ones) - 4.0 * PI * PI / 3.0).abs() < 1e-10);
    assert!(g.interior_weights().iter().chain(g.boundary_weights()).all(|&w| w > 0.0));
    assert!(g.interior_nodes().iter().all(|x| x.is_unit(1e-12) && x.x5() != 0.0));
    assert!(g.boundary_nodes().iter().all(|x| x.on_boundary(1e-15) && x.is_unit(1e-12)));
}

#[test]
fn grid_too_coarse_for_basis() {
    let g = QuadratureGrid::<f64>::new(4).unwrap();
    assert!(matches!(qtcurv::spectral::HarmonicBasis::new(6, &g), Err(Error::Config(_))));
}

#[test]
fn even_extension_examples() {
    let g = &BASIS8.grid();
    let ones = g.even_extend(&vec![1.0; g.hemisphere_len()]).unwrap();
    assert!(ones.iter().all(|&v| v == 1.0));
    let x5 = g.sample_hemisphere(|x| x.x5());
    let ext = g.even_extend(&x5).unwrap();
    for (v, x) in ext.iter().zip(g.interior_nodes()) {
        assert!((v - x.x5().abs()).abs() < 1e-15);
    }
    // Mean over S⁴ of the extension equals the hemisphere mean.
    let f = g.sample_hemisphere(|x| x.coords()[0].powi(2) + x.x5());
    let ext = g.even_extend(&f).unwrap();
    let full_mean = g.integrate_sphere(&ext) / (8.0 * PI * PI / 3.0);
    let half_mean = g.integrate_hemisphere(&f) / (4.0 * PI * PI / 3.0);
    assert!((full_mean - half_mean).abs() < 1e-12);
    // even_extend ∘ restrict is the identity on even samples.
    let even = g.sample(|x| x.x5().powi(2) + x.coords()[1]);
    assert_eq!(g.even_extend(g.restrict(&even)).unwrap(), even);
}

#[test]
fn fixed_boundary_set_examples() {
    let g = QuadratureGrid::<f64>::new(8).unwrap();
    let tol = 1e-9;
    let refl = SymmetryGroup::builtin("refl").unwrap();
    let (nodes, kind) = refl.fixed_boundary_set(&g, tol);
    assert_eq!(kind, FixedSetKind::S2);
    for (i, x) in g.boundary_nodes().iter().enumerate() {
        assert_eq!(nodes.contains(&i), x.coords()[0].abs() < tol);
    }
    let c4 = SymmetryGroup::builtin("c4").unwrap();
    let (nodes, kind) = c4.fixed_boundary_set(&g, tol);
    assert_eq!(kind, FixedSetKind::S1);
    for (i, x) in g.boundary_nodes().iter().enumerate() {
        let c = x.coords();
        assert_eq!(nodes.contains(&i), c[0] * c[0] + c[1] * c[1] < tol * tol);
    }
    let prod = SymmetryGroup::builtin("c2xc2").unwrap();
    let (nodes, kind) = prod.fixed_boundary_set(&g, tol);
    assert_eq!(kind, FixedSetKind::Empty);
    assert!(nodes.is_empty());
}

#[test]
fn groups_are_valid() {
    for name in ["trivial", "c2", "c3", "c5", "refl", "c2xc2", "c3xc3"] {
        let g = SymmetryGroup::<f64>::builtin(name).unwrap();
        g.validate(1e-12).unwrap();
        for m in g.elements() {
            assert_eq!(m[4][4], 1.0);
        }
    }
}

#[test]
fn group_average_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    let c4 = SymmetryGroup::builtin("c4").unwrap();
    assert!(GridAction::new(g, &c4).is_closed());
    let x1 = g.sample(|x| x.coords()[0]);
    // x₁ is even in x₅ and averages to zero under C₄.
    let avg = group_average(&x1, &c4, b).unwrap();
    assert!(avg.iter().all(|v| v.abs() < 1e-12));
    let c = vec![0.7; g.interior_nodes().len()];
    let avg = group_average(&c, &c4, b).unwrap();
    assert!(avg.iter().all(|v| (v - 0.7).abs() < 1e-12));
    let inv = g.sample(|x| {
        let c = x.coords();
        c[0] * c[0] + c[1] * c[1] + c[2] * c[3]
    });
    let avg = group_average(&inv, &c4, b).unwrap();
    assert!(avg.iter().zip(&inv).all(|(a, v)| (a - v).abs() < 1e-12));
}

#[test]
fn group_average_off_grid_is_invariant_and_idempotent() {
    // The default grid is not closed under rotations by 2π/3, so images
    // are interpolated spectrally.
    let b = &*BASIS8;
    let g = b.grid();
    let c3 = SymmetryGroup::builtin("c3").unwrap();
    assert!(!GridAction::new(g, &c3).is_closed());
    let mut r = rng(5);
    let f = b.synth_full(&random_coefficients(b, &mut r, 1.0));
    let avg = group_average(&f, &c3, b).unwrap();
    let twice = group_average(&avg, &c3, b).unwrap();
    assert!(avg.iter().zip(&twice).all(|(a, t)| (a - t).abs() < 1e-10));
    // Invariance: the interpolant of the average takes equal values at x
    // and at its images.
    let field = analyze(b, &avg).unwrap();
    for x in g.interior_nodes().iter().step_by(911) {
        let imgs: Vec<SpherePoint<f64>> = c3.elements().iter().map(|m| x.transform(m)).collect();
        let v = synthesize(b, &field, &imgs);
        assert!(v.iter().all(|y| (y - v[0]).abs() < 1e-10), "{v:?}");
    }
    // Means are preserved.
    assert!((g.integrate_sphere(&avg) - g.integrate_sphere(&f)).abs() < 1e-10);
}

#[test]
fn covering_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    let prod = SymmetryGroup::builtin("c2xc2").unwrap();
    let cov = build_covering(&prod, g, DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap();
    assert!(!cov.has_fixed_set());
    assert!(g.boundary_nodes().iter().all(|x| !cov.boundary_contains(CoverRegion::Fixed, x)));
    assert!(cov.uncovered_boundary(g).is_empty());

    let refl = SymmetryGroup::builtin("refl").unwrap();
    let cov = build_covering(&refl, g, 0.3, DEFAULT_T, DEFAULT_RHO).unwrap();
    for x in g.boundary_nodes() {
        let strip = x.coords()[0].abs() < 0.3f64.sin();
        assert_eq!(cov.boundary_contains(CoverRegion::Fixed, x), strip);
    }
    assert!(cov.eps > 0.0);
    // Ω sits at height ≥ t > eps above the equator.
    let omega_min = g
        .hemisphere_nodes()
        .iter()
        .filter(|x| cov.interior_contains(CoverRegion::Omega, x))
        .fold(f64::INFINITY, |m, x| m.min(x.height()));
    assert!(omega_min > cov.eps);
}

#[test]
fn covering_properties_for_every_group() {
    let b = &*BASIS8;
    let g = b.grid();
    for name in ["refl", "c2", "c3", "c4", "c2xc2", "c3xc3"] {
        let grp = SymmetryGroup::builtin(name).unwrap();
        let cov = build_covering(&grp, g, DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap();
        assert!(cov.uncovered_boundary(g).is_empty(), "{name}");
        assert!(cov.uncovered_interior(g).is_empty(), "{name}");
        assert!(cov.eps > 0.0);
        for i in 0..cov.n_balls() {
            assert!(cov.separation(i) >= 2.0 * cov.eps - 1e-15, "{name} ball {i}");
        }
        // Brute-force distance between a tube and its partner, on nodes.
        let hemi = g.hemisphere_nodes();
        for i in (0..cov.n_balls()).step_by(37) {
            let a: Vec<_> = hemi.iter().filter(|x| cov.interior_contains(CoverRegion::Ball(i), x)).collect();
            let pa: Vec<_> = hemi.iter().filter(|x| cov.interior_contains(CoverRegion::Partner(i), x)).collect();
            let d = a
                .iter()
                .flat_map(|x| pa.iter().map(move |y| x.distance(y)))
                .fold(f64::INFINITY, f64::min);
            assert!(d > cov.eps, "{name} ball {i}: {d}");
        }
    }
}

#[test]
fn bundles_are_versioned_and_hashed() {
    let g = QuadratureGrid::<f64>::new(3).unwrap();
    let mut buf = Vec::new();
    write_grid_csv(&g, &["test".into()], &mut buf).unwrap();
    let s = String::from_utf8(buf).unwrap();
    assert!(s.starts_with("# qtcurv grid bundle v1"));
    assert!(s.contains(&grid_hash(&g)));
    let rows = s.lines().filter(|l| !l.starts_with('#')).count();
    assert_eq!(rows, 1 + g.interior_nodes().len() + g.boundary_nodes().len());
    assert_eq!(grid_hash(&g), grid_hash(&QuadratureGrid::<f64>::new(3).unwrap()));
    assert_ne!(grid_hash(&g), grid_hash(&QuadratureGrid::<f64>::new(4).unwrap()));

    let grp = SymmetryGroup::builtin("c2xc2").unwrap();
    let cov = build_covering(&grp, &g, DEFAULT_DELTA, DEFAULT_T, DEFAULT_RHO).unwrap();
    let mut buf = Vec::new();
    write_covering_csv(&cov, &[], &mut buf).unwrap();
    let s = String::from_utf8(buf).unwrap();
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 1 + cov.n_balls());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn group_average_is_linear_and_idempotent(seed in 0u64..1000, a in -2.0f64..2.0) {
        let b = &*BASIS8;
        let grp = SymmetryGroup::builtin("c2xc2").unwrap();
        let mut r = rng(seed);
        let f = b.synth_full(&random_coefficients(b, &mut r, 1.0));
        let h = b.synth_full(&random_coefficients(b, &mut r, 1.0));
        let af = group_average(&f, &grp, b).unwrap();
        let ah = group_average(&h, &grp, b).unwrap();
        let mix: Vec<f64> = f.iter().zip(&h).map(|(x, y)| a * x + y).collect();
        let am = group_average(&mix, &grp, b).unwrap();
        for i in 0..f.len() {
            prop_assert!((am[i] - (a * af[i] + ah[i])).abs() < 1e-10);
        }
        let twice = group_average(&af, &grp, b).unwrap();
        prop_assert!(af.iter().zip(&twice).all(|(x, y)| (x - y).abs() < 1e-10));
    }

    #[test]
    fn reflection_closure(seed in 0u64..1000) {
        let g = BASIS8.grid();
        let mut r = rng(seed);
        let i = rand::Rng::gen_range(&mut r, 0..g.interior_nodes().len());
        let x = g.interior_nodes()[i];
        let m = g.interior_nodes()[g.mirror_index(i)];
        let r = x.reflect();
        prop_assert!(r.coords().iter().zip(m.coords()).all(|(a, b)| (a - b).abs() < 1e-14));
    }
}
