#![allow(dead_code)]

use once_cell::sync::Lazy;
use qtcurv::geometry::{QuadratureGrid, SpherePoint};
use qtcurv::spectral::HarmonicBasis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Resolution-8 grid with the L = 8 basis, shared by the tests of a binary.
pub static BASIS8: Lazy<HarmonicBasis<f64>> = Lazy::new(|| {
    let grid = QuadratureGrid::new(8).unwrap();
    HarmonicBasis::new(8, &grid).unwrap()
});

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random coefficients with magnitudes decaying like `1/(1+k)²`.
pub fn random_coefficients(basis: &HarmonicBasis<f64>, rng: &mut ChaCha8Rng, scale: f64) -> Vec<f64> {
    basis
        .modes()
        .iter()
        .map(|m| scale * rng.gen_range(-1.0..1.0) / ((1 + m.k) as f64).powi(2))
        .collect()
}

pub fn random_sphere_point(rng: &mut ChaCha8Rng) -> SpherePoint<f64> {
    loop {
        let v: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let n = v.iter().map(|x| x * x).sum::<f64>();
        if n > 1e-2 && n < 1.0 {
            return SpherePoint::normalized(v);
        }
    }
}

/// Sphere-intrinsic derivatives by finite differences of the 0-homogeneous
/// ambient extension `U(y) = u(y/|y|)`: returns `(|∇u|², Δu)` at `x`.
pub fn fd_gradient_laplacian<F: Fn(&SpherePoint<f64>) -> f64>(f: &F, x: &SpherePoint<f64>, h: f64) -> (f64, f64) {
    let ext = |y: [f64; 5]| f(&SpherePoint::normalized(y));
    let c = *x.coords();
    let f0 = ext(c);
    let mut grad2 = 0.0;
    let mut lap = 0.0;
    for d in 0..5 {
        let at = |s: f64| {
            let mut y = c;
            y[d] += s;
            ext(y)
        };
        let (m2, m1, p1, p2) = (at(-2.0 * h), at(-h), at(h), at(2.0 * h));
        let d1 = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
        let d2 = (-p2 + 16.0 * p1 - 30.0 * f0 + 16.0 * m1 - m2) / (12.0 * h * h);
        grad2 += d1 * d1;
        lap += d2;
    }
    (grad2, lap)
}
