use crate::scalar::Real;

/// A point of the unit sphere S⁴ ⊂ ℝ⁵. The last coordinate is the pole axis `x₅`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint<T> {
    coords: [T; 5],
}

impl<T: Real> SpherePoint<T> {
    /// Wraps coordinates that are already of unit length.
    pub fn new(coords: [T; 5]) -> Self {
        Self { coords }
    }

    /// Projects an arbitrary nonzero vector onto the sphere.
    pub fn normalized(v: [T; 5]) -> Self {
        let n = v.iter().fold(T::zero(), |a, &x| a + x * x).sqrt();
        Self { coords: v.map(|x| x / n) }
    }

    pub fn north_pole() -> Self {
        Self::new([T::zero(), T::zero(), T::zero(), T::zero(), T::one()])
    }

    /// Embeds a point of the equator S³ (x₅ = 0).
    pub fn on_equator(w: [T; 4]) -> Self {
        Self::new([w[0], w[1], w[2], w[3], T::zero()])
    }

    pub fn coords(&self) -> &[T; 5] {
        &self.coords
    }

    pub fn x5(&self) -> T {
        self.coords[4]
    }

    /// The (x₁,…,x₄) part.
    pub fn perp(&self) -> [T; 4] {
        [self.coords[0], self.coords[1], self.coords[2], self.coords[3]]
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    pub fn is_unit(&self, tol: T) -> bool {
        (self.norm() - T::one()).abs() <= tol
    }

    pub fn in_hemisphere(&self) -> bool {
        self.x5() >= T::zero()
    }

    pub fn on_boundary(&self, tol: T) -> bool {
        self.x5().abs() <= tol
    }

    /// The reflection `R(x) = (x₁,x₂,x₃,x₄,−x₅)`.
    pub fn reflect(&self) -> Self {
        let mut c = self.coords;
        c[4] = -c[4];
        Self::new(c)
    }

    pub fn dot(&self, other: &Self) -> T {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .fold(T::zero(), |a, (&x, &y)| a + x * y)
    }

    /// Great-circle distance.
    pub fn distance(&self, other: &Self) -> T {
        clamp_acos(self.dot(other))
    }

    /// Geodesic distance to the equator, i.e. `asin(|x₅|)`.
    pub fn height(&self) -> T {
        clamp_asin(self.x5().abs())
    }

    pub fn transform(&self, m: &[[T; 5]; 5]) -> Self {
        let mut out = [T::zero(); 5];
        for (r, row) in m.iter().enumerate() {
            out[r] = row
                .iter()
                .zip(self.coords.iter())
                .fold(T::zero(), |a, (&g, &x)| a + g * x);
        }
        Self::new(out)
    }

    /// Applies the transpose (inverse, for orthogonal `m`).
    pub fn transform_inverse(&self, m: &[[T; 5]; 5]) -> Self {
        let mut out = [T::zero(); 5];
        for (c, o) in out.iter_mut().enumerate() {
            *o = (0..5).fold(T::zero(), |a, r| a + m[r][c] * self.coords[r]);
        }
        Self::new(out)
    }
}

pub(crate) fn clamp_acos<T: Real>(x: T) -> T {
    x.max(-T::one()).min(T::one()).acos()
}

pub(crate) fn clamp_asin<T: Real>(x: T) -> T {
    x.max(-T::one()).min(T::one()).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_and_distances() {
        let p = SpherePoint::<f64>::normalized([1.0, 0.0, 0.0, 0.0, 1.0]);
        assert!(p.is_unit(1e-12));
        assert!(p.in_hemisphere());
        let q = p.reflect();
        assert!(!q.in_hemisphere());
        assert!((p.distance(&q) - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((p.height() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(SpherePoint::on_equator([0.0, 1.0, 0.0, 0.0]).on_boundary(1e-12));
    }
}
