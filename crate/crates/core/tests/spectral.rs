mod common;

use common::{fd_gradient_laplacian, random_coefficients, rng, BASIS8};
use proptest::prelude::*;
use qtcurv::geometry::{QuadratureGrid, SymmetryGroup};
use qtcurv::scalar::vol_s4;
use qtcurv::spectral::*;
use qtcurv::Error;

#[test]
fn mode_count_and_eigenvalues() {
    let b = &*BASIS8;
    assert_eq!(b.len(), 495);
    assert_eq!(eigen_paneitz::<f64>(0), 0.0);
    assert_eq!(eigen_paneitz::<f64>(1), 24.0);
    assert_eq!(eigen_paneitz::<f64>(2), 120.0);
    assert!((1..=8).all(|k| eigen_paneitz::<f64>(k) > 0.0));
}

#[test]
fn gram_matrix_is_identity_and_modes_are_even() {
    let b = &*BASIS8;
    let g = b.grid();
    let samples: Vec<Vec<f64>> = (0..b.len()).map(|j| b.mode_samples(j)).collect();
    for (j, s) in samples.iter().enumerate() {
        for i in 0..s.len() {
            assert!((s[i] - s[g.mirror_index(i)]).abs() < 1e-10);
        }
        let row = b.integrate_rows(s, 0..g.n_t());
        for (i, v) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-9, "gram[{j}][{i}] = {v}");
        }
    }
}

#[test]
fn pointwise_evaluation_matches_grid_tables() {
    let b = &*BASIS8;
    let g = b.grid();
    let mut r = rng(3);
    let c = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
    let pts: Vec<_> = g.interior_nodes().iter().step_by(97).copied().collect();
    let direct = synthesize(b, &c, &pts);
    let full = b.synth_full(&c.coefficients);
    for (k, v) in direct.iter().enumerate() {
        assert!((v - full[k * 97]).abs() < 1e-11);
    }
    let bd = b.synth_boundary(&c.coefficients);
    let direct_bd = synthesize(b, &c, g.boundary_nodes());
    for (x, y) in bd.iter().zip(&direct_bd) {
        assert!((x - y).abs() < 1e-11);
    }
}

#[test]
fn analyze_examples() {
    let b = &*BASIS8;
    let g = b.grid();
    let ones = vec![1.0; g.interior_nodes().len()];
    let f = analyze(b, &ones).unwrap();
    assert!((f.coefficients[0] - vol_s4::<f64>().sqrt()).abs() < 1e-12);
    assert!(f.coefficients[1..].iter().all(|c| c.abs() < 1e-12));

    let j = 37;
    let unit = analyze(b, &b.mode_samples(j)).unwrap();
    for (i, c) in unit.coefficients.iter().enumerate() {
        assert!((c - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
    }

    let mix: Vec<f64> = b
        .mode_samples(5)
        .iter()
        .zip(b.mode_samples(200))
        .map(|(a, c)| a + 2.0 * c)
        .collect();
    let m = analyze(b, &mix).unwrap();
    assert!((m.coefficients[5] - 1.0).abs() < 1e-10);
    assert!((m.coefficients[200] - 2.0).abs() < 1e-10);

    let odd = g.sample(|x| x.x5());
    assert!(matches!(analyze(b, &odd), Err(Error::Parity { .. })));

    let zero = SpectralField::zeros(b.len());
    assert!(synthesize(b, &zero, &g.interior_nodes()[..10]).iter().all(|&v| v == 0.0));
    let c0 = SpectralField::constant(b, 1.0);
    let mut unit0 = SpectralField::zeros(b.len());
    unit0.coefficients[0] = 1.0;
    let v = synthesize(b, &unit0, &g.boundary_nodes()[..5]);
    assert!(v.iter().all(|x| (x - 1.0 / vol_s4::<f64>().sqrt()).abs() < 1e-14));
    assert!(quadratic_form(b, &c0).abs() < 1e-14);
}

#[test]
fn hemisphere_analysis_uses_even_extension() {
    let b = &*BASIS8;
    let mut r = rng(8);
    let c = random_coefficients(b, &mut r, 1.0);
    let hemi = b.synth_hemisphere(&c);
    let back = analyze_hemisphere(b, &hemi).unwrap();
    for (x, y) in back.coefficients.iter().zip(&c) {
        assert!((x - y).abs() < 1e-10);
    }
}

#[test]
fn resolution_must_cover_degree() {
    let g = QuadratureGrid::<f64>::new(5).unwrap();
    assert!(matches!(HarmonicBasis::new(6, &g), Err(Error::Config(_))));
}

/// Rayleigh quotient of `Δ² − 2Δ` and the hemisphere quadratic form from
/// finite-difference derivatives, compared with `ν_k`.
#[test]
fn paneitz_eigenvalues_match_finite_difference_oracle() {
    let b = &*BASIS8;
    let g = b.grid();
    // First modes of degree 1 and 2.
    for k in [1usize, 2] {
        let j = b.modes().iter().position(|m| m.k == k).unwrap();
        let mut e = SpectralField::zeros(b.len());
        e.coefficients[j] = 1.0;
        let f = |x: &qtcurv::geometry::SpherePoint<f64>| b.eval_modes(x)[j];
        let mut form = 0.0;
        let mut mass = 0.0;
        for (x, &w) in g.hemisphere_nodes().iter().zip(g.hemisphere_weights()) {
            let (grad2, lap) = fd_gradient_laplacian(&f, x, 1e-3);
            form += w * (lap * lap + 2.0 * grad2);
            mass += w * f(x).powi(2);
        }
        let rayleigh = form / mass;
        assert!((rayleigh - eigen_paneitz::<f64>(k)).abs() < 1e-6 * eigen_paneitz::<f64>(k), "k={k}: {rayleigh}");
        assert!((quadratic_form(b, &e) - form).abs() < 1e-8 * form.max(1.0), "k={k}: {form}");
        if k == 1 {
            assert!((quadratic_form(b, &e) - 12.0).abs() < 1e-12);
        }
    }
}

#[test]
fn cutoff_examples() {
    let b = &*BASIS8;
    let mut r = rng(11);
    let f = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
    let (low, high) = project_cutoff(b, &f, 1e9).unwrap();
    assert_eq!(low, f);
    assert!(high.coefficients.iter().all(|&c| c == 0.0));
    let (low, _) = project_cutoff(b, &f, 0.0).unwrap();
    assert_eq!(low.coefficients[0], f.coefficients[0]);
    assert!(low.coefficients[1..].iter().all(|&c| c == 0.0));
    assert!(project_cutoff(b, &f, -1.0).is_err());
}

#[test]
fn operator_examples() {
    let b = &*BASIS8;
    let c = SpectralField::constant(b, 2.0);
    assert!(apply_operator(b, &c).coefficients.iter().all(|&v| v == 0.0));
    let j = b.modes().iter().position(|m| m.k == 1).unwrap();
    let mut e = SpectralField::zeros(b.len());
    e.coefficients[j] = 1.0;
    assert_eq!(apply_operator(b, &e), e.scaled(24.0));
}

#[test]
fn norm_equivalence_interval() {
    let b = &*BASIS8;
    let (lo, hi) = norm_equivalence_bounds::<f64>(8);
    assert!(lo > 0.0);
    assert!((hi - 24.0 / 21.0).abs() < 1e-14);
    let mut r = rng(5);
    for _ in 0..50 {
        let mut c = random_coefficients(b, &mut r, 1.0);
        c[0] = 0.0;
        let f = SpectralField::from_coefficients(c);
        let ratio = quadratic_form(b, &f) / h2_norm_sq(b, &f);
        assert!(ratio >= lo - 1e-12 && ratio <= hi + 1e-12);
    }
}

#[test]
fn group_projector_is_an_orthogonal_projection() {
    let b = &*BASIS8;
    let mut r = rng(21);
    for name in ["c2xc2", "refl", "c3", "trivial"] {
        let group = SymmetryGroup::builtin(name).unwrap();
        let p = GroupProjector::new(b, &group);
        let u = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
        let v = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
        let pu = p.apply(b, &u);
        let ppu = p.apply(b, &pu);
        for (x, y) in pu.coefficients.iter().zip(&ppu.coefficients) {
            assert!((x - y).abs() < 1e-10, "{name}");
        }
        // Self-adjoint: <Pu, v> = <u, Pv>.
        let pv = p.apply(b, &v);
        let a: f64 = pu.coefficients.iter().zip(&v.coefficients).map(|(x, y)| x * y).sum();
        let c: f64 = u.coefficients.iter().zip(&pv.coefficients).map(|(x, y)| x * y).sum();
        assert!((a - c).abs() < 1e-10);
        // Projected fields are pointwise invariant.
        let pts: Vec<_> = b.grid().interior_nodes().iter().step_by(331).copied().collect();
        let base = synthesize(b, &pu, &pts);
        for g in group.elements() {
            let moved: Vec<_> = pts.iter().map(|x| x.transform(g)).collect();
            for (s, t) in base.iter().zip(synthesize(b, &pu, &moved)) {
                assert!((s - t).abs() < 1e-10, "{name}");
            }
        }
        assert!((pu.coefficients[0] - u.coefficients[0]).abs() < 1e-12);
    }
    // Both pair rotations by π: the antipodal map of S³ kills odd l.
    let p = GroupProjector::new(b, &SymmetryGroup::builtin("c2xc2").unwrap());
    let dim = p.invariant_dimension(b);
    assert!(dim < b.len() && dim > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn round_trip_and_parseval(seed in 0u64..10_000) {
        let b = &*BASIS8;
        let mut r = rng(seed);
        let c = random_coefficients(b, &mut r, 3.0);
        let samples = b.synth_full(&c);
        let back = analyze(b, &samples).unwrap();
        for (x, y) in back.coefficients.iter().zip(&c) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let resynth = b.synth_full(&back.coefficients);
        for (x, y) in resynth.iter().zip(&samples) {
            prop_assert!((x - y).abs() < 1e-9);
        }
        let sq: Vec<f64> = samples.iter().map(|v| v * v).collect();
        let energy = b.grid().integrate_sphere(&sq);
        let parseval: f64 = c.iter().map(|v| v * v).sum();
        prop_assert!((energy - parseval).abs() < 1e-9 * (1.0 + parseval));
    }

    #[test]
    fn cutoff_is_orthogonal(seed in 0u64..10_000, lambda in 0.0f64..20000.0) {
        let b = &*BASIS8;
        let mut r = rng(seed);
        let f = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
        let (low, high) = project_cutoff(b, &f, lambda).unwrap();
        let total = quadratic_form(b, &f);
        prop_assert!((quadratic_form(b, &low) + quadratic_form(b, &high) - total).abs() < 1e-10 * (1.0 + total));
        prop_assert!(quadratic_form(b, &high) <= total + 1e-12);
        prop_assert_eq!(low.add(&high), f);
    }

    #[test]
    fn operator_is_linear_and_form_is_quadratic(seed in 0u64..10_000, s in -3.0f64..3.0) {
        let b = &*BASIS8;
        let mut r = rng(seed);
        let u = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
        let v = SpectralField::from_coefficients(random_coefficients(b, &mut r, 1.0));
        let lhs = apply_operator(b, &u.scaled(s).add(&v));
        let rhs = apply_operator(b, &u).scaled(s).add(&apply_operator(b, &v));
        for (x, y) in lhs.coefficients.iter().zip(&rhs.coefficients) {
            prop_assert!((x - y).abs() < 1e-9 * (1.0 + y.abs()));
        }
        let q = quadratic_form(b, &u);
        prop_assert!((quadratic_form(b, &u.scaled(2.0)) - 4.0 * q).abs() < 1e-12 * (1.0 + q));
        prop_assert!(q >= 0.0);
    }
}

#[test]
fn pointwise_gradient_matches_finite_differences() {
    let b = &*BASIS8;
    let mut r = rng(21);
    let c = random_coefficients(b, &mut r, 1.0);
    let e = SpectralField::from_coefficients(c.clone());
    let g2 = b.gradient_sq_hemisphere(&c);
    let nodes = b.grid().hemisphere_nodes();
    let f = |x: &qtcurv::geometry::SpherePoint<f64>| synthesize(b, &e, std::slice::from_ref(x))[0];
    let scale = g2.iter().fold(0.0f64, |m, v| m.max(*v));
    for i in (0..nodes.len()).step_by(397) {
        let (fd, _) = fd_gradient_laplacian(&f, &nodes[i], 1e-3);
        assert!((fd - g2[i]).abs() < 1e-7 * scale, "node {i}: {fd} vs {}", g2[i]);
    }
}
