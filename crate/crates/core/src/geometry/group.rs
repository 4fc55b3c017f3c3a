//! Finite groups of orthogonal maps of ℝ⁵ that fix the pole axis `e₅`.

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::grid::QuadratureGrid;
use crate::geometry::point::SpherePoint;
use crate::scalar::Real;

pub type Mat5<T> = [[T; 5]; 5];

/// Default upper bound on the number of elements produced from generators.
pub const DEFAULT_ELEMENT_CAP: usize = 128;

/// A generator of a symmetry group, acting on `x₁..x₄` (indices are 1-based
/// in the text form and 0-based here).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Rotation by `2π/k` in the `(i, j)` coordinate plane.
    Rotation { i: usize, j: usize, k: usize },
    /// `x_i ↦ −x_i`.
    Reflection { i: usize },
}

impl Generator {
    pub fn matrix<T: Real>(&self) -> Mat5<T> {
        let mut m = identity::<T>();
        match *self {
            Generator::Rotation { i, j, k } => {
                let a = T::c(2.0) * T::PI() / T::from_usize_lossy(k);
                let (s, c) = a.sin_cos();
                m[i][i] = c;
                m[j][j] = c;
                m[i][j] = -s;
                m[j][i] = s;
            }
            Generator::Reflection { i } => m[i][i] = -T::one(),
        }
        m
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Generator::Rotation { i, j, k } => {
                if i >= 4 || j >= 4 || i == j {
                    return Err(Error::Config(format!(
                        "rotation plane ({},{}) must be two distinct coordinates among 1..4",
                        i + 1,
                        j + 1
                    )));
                }
                if k < 1 {
                    return Err(Error::Config("rotation order must be at least 1".into()));
                }
            }
            Generator::Reflection { i } => {
                if i >= 4 {
                    return Err(Error::Config(format!(
                        "reflection coordinate {} must be among 1..4",
                        i + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of uniform Hopf angles the grid needs for this generator to
    /// permute nodes, or `None` when no angular count suffices.
    fn angular_requirement(&self) -> Option<usize> {
        match *self {
            Generator::Rotation { i, j, k } => {
                let (a, b) = (i.min(j), i.max(j));
                ((a, b) == (0, 1) || (a, b) == (2, 3)).then_some(k)
            }
            Generator::Reflection { .. } => Some(2),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::Rotation { i, j, k } => write!(f, "rot({},{},{})", i + 1, j + 1, k),
            Generator::Reflection { i } => write!(f, "refl({})", i + 1),
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    /// Parses `rot(i,j,k)` or `refl(i)` with 1-based coordinates.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("cannot parse group generator `{s}`"));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let args = rest.strip_suffix(')').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let g = match (head.trim(), nums.as_slice()) {
            ("rot", &[i, j, k]) if i >= 1 && j >= 1 => Generator::Rotation { i: i - 1, j: j - 1, k },
            ("refl", &[i]) if i >= 1 => Generator::Reflection { i: i - 1 },
            _ => return Err(bad()),
        };
        g.validate()?;
        Ok(g)
    }
}

/// Dimension class of the fixed boundary set `𝓕_∂ ⊂ S³`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedSetKind {
    Empty,
    S0,
    S1,
    S2,
    /// Trivial action: every boundary point is fixed.
    S3,
}

impl FixedSetKind {
    fn from_dim(d: usize) -> Self {
        match d {
            0 => FixedSetKind::Empty,
            1 => FixedSetKind::S0,
            2 => FixedSetKind::S1,
            3 => FixedSetKind::S2,
            _ => FixedSetKind::S3,
        }
    }
}

impl fmt::Display for FixedSetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FixedSetKind::Empty => "empty",
            FixedSetKind::S0 => "S0",
            FixedSetKind::S1 => "S1",
            FixedSetKind::S2 => "S2",
            FixedSetKind::S3 => "S3",
        };
        f.write_str(s)
    }
}

/// Finite group of orthogonal maps preserving `S⁴₊`.
#[derive(Debug, Clone)]
pub struct SymmetryGroup<T> {
    name: String,
    generators: Vec<Generator>,
    elements: Vec<Mat5<T>>,
}

impl<T: Real> SymmetryGroup<T> {
    pub fn trivial() -> Self {
        Self {
            name: "trivial".into(),
            generators: Vec::new(),
            elements: vec![identity()],
        }
    }

    /// Closes the generator set under multiplication.
    pub fn generate(name: &str, generators: &[Generator], cap: usize) -> Result<Self> {
        for g in generators {
            g.validate()?;
        }
        let gens: Vec<Mat5<T>> = generators.iter().map(|g| g.matrix()).collect();
        let mut elements = vec![identity::<T>()];
        let mut frontier = 0;
        while frontier < elements.len() {
            let a = elements[frontier];
            for g in &gens {
                let p = matmul(g, &a);
                if !elements.iter().any(|e| close(e, &p)) {
                    if elements.len() >= cap {
                        return Err(Error::Config(format!(
                            "group `{name}` exceeds the element cap of {cap}"
                        )));
                    }
                    elements.push(p);
                }
            }
            frontier += 1;
        }
        Ok(Self {
            name: name.to_string(),
            generators: generators.to_vec(),
            elements,
        })
    }

    /// Parses a generator list such as `rot(1,2,2) rot(3,4,2)`; separators may
    /// be whitespace or `;`. The empty string gives the trivial group.
    pub fn parse(name: &str, spec: &str, cap: usize) -> Result<Self> {
        let mut gens = Vec::new();
        let mut depth = 0usize;
        let mut cur = String::new();
        for ch in spec.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    cur.push(ch);
                }
                ')' => {
                    depth = depth.saturating_sub(1);
                    cur.push(ch);
                    if depth == 0 {
                        gens.push(cur.parse::<Generator>()?);
                        cur.clear();
                    }
                }
                c if depth == 0 && (c.is_whitespace() || c == ';' || c == ',' || c == '*') => {}
                c => cur.push(c),
            }
        }
        if !cur.trim().is_empty() {
            return Err(Error::Config(format!("cannot parse group generator `{}`", cur.trim())));
        }
        let mut g = Self::generate(name, &gens, cap)?;
        if gens.is_empty() {
            g.name = name.to_string();
        }
        Ok(g)
    }

    /// Named groups: `trivial`, `c{k}` (rotation by `2π/k` in `(x₁,x₂)`),
    /// `refl` (`x₁ ↦ −x₁`), `c{k}xc{m}` (rotations in `(x₁,x₂)` and `(x₃,x₄)`).
    pub fn builtin(name: &str) -> Result<Self> {
        let unknown = || Error::Config(format!("unknown builtin group `{name}`"));
        let order = |s: &str| -> Result<usize> {
            let k = s.strip_prefix('c').ok_or_else(unknown)?.parse::<usize>().map_err(|_| unknown())?;
            if k < 1 {
                return Err(unknown());
            }
            Ok(k)
        };
        let gens = match name {
            "trivial" => vec![],
            "refl" => vec![Generator::Reflection { i: 0 }],
            _ => {
                if let Some((a, b)) = name.split_once('x') {
                    vec![
                        Generator::Rotation { i: 0, j: 1, k: order(a)? },
                        Generator::Rotation { i: 2, j: 3, k: order(b)? },
                    ]
                } else {
                    vec![Generator::Rotation { i: 0, j: 1, k: order(name)? }]
                }
            }
        };
        Self::generate(name, &gens, DEFAULT_ELEMENT_CAP)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn elements(&self) -> &[Mat5<T>] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// Angular multiple for [`QuadratureGrid::with_angular_multiple`] that
    /// makes the grid closed under this group, if one exists.
    pub fn grid_angular_multiple(&self) -> Option<usize> {
        let mut m = 4usize;
        for g in &self.generators {
            let r = g.angular_requirement()?;
            m = lcm(m, r);
        }
        Some(m)
    }

    /// Checks closure, orthogonality, identity and `g(e₅) = e₅`.
    pub fn validate(&self, tol: T) -> Result<()> {
        let id = identity::<T>();
        if !self.elements.iter().any(|e| max_diff(e, &id) <= tol) {
            return Err(Error::Structure("identity missing from group".into()));
        }
        for a in &self.elements {
            if max_diff(&matmul(&transpose(a), a), &id) > tol {
                return Err(Error::Structure("group element is not orthogonal".into()));
            }
            for r in 0..5 {
                let want = if r == 4 { T::one() } else { T::zero() };
                if (a[r][4] - want).abs() > tol || (a[4][r] - want).abs() > tol {
                    return Err(Error::Structure("group element moves the pole axis".into()));
                }
            }
            for b in &self.elements {
                let p = matmul(a, b);
                if !self.elements.iter().any(|e| max_diff(e, &p) <= tol) {
                    return Err(Error::Structure("group is not closed under products".into()));
                }
            }
        }
        Ok(())
    }

    /// Orthogonal projector of ℝ⁴ onto the common fixed subspace,
    /// `(1/|G|) Σ_g g|ℝ⁴`.
    pub fn fixed_projector(&self) -> [[T; 4]; 4] {
        let n = T::from_usize_lossy(self.elements.len());
        let mut p = [[T::zero(); 4]; 4];
        for e in &self.elements {
            for (r, row) in p.iter_mut().enumerate() {
                for (c, v) in row.iter_mut().enumerate() {
                    *v = *v + e[r][c] / n;
                }
            }
        }
        p
    }

    /// Dimension of the fixed subspace of ℝ⁴ (trace of the projector).
    pub fn fixed_dimension(&self) -> usize {
        let p = self.fixed_projector();
        let tr = (0..4).fold(T::zero(), |a, i| a + p[i][i]);
        tr.round().to_usize().unwrap_or(0)
    }

    pub fn fixed_set_kind(&self) -> FixedSetKind {
        FixedSetKind::from_dim(self.fixed_dimension())
    }

    /// Geodesic distance on S⁴ from `x` to the fixed set `𝓕_∂ ⊂ S³`
    /// (`+∞` when the fixed set is empty).
    pub fn distance_to_fixed(&self, x: &SpherePoint<T>) -> T {
        if self.fixed_dimension() == 0 {
            return T::infinity();
        }
        let p = self.fixed_projector();
        let w = x.perp();
        let mut n2 = T::zero();
        for row in &p {
            let v = row.iter().zip(&w).fold(T::zero(), |a, (&pi, &wi)| a + pi * wi);
            n2 = n2 + v * v;
        }
        crate::geometry::point::clamp_acos(n2.sqrt())
    }

    /// `sin²` of [`SymmetryGroup::distance_to_fixed`], a polynomial in `x`
    /// that vanishes exactly on the fixed set.
    pub fn vanishing_profile(&self, x: &SpherePoint<T>) -> T {
        if self.fixed_dimension() == 0 {
            return T::one();
        }
        let p = self.fixed_projector();
        let w = x.perp();
        let mut n2 = T::zero();
        for row in &p {
            let v = row.iter().zip(&w).fold(T::zero(), |a, (&pi, &wi)| a + pi * wi);
            n2 = n2 + v * v;
        }
        T::one() - n2
    }

    /// `max_g |g x − x|`.
    pub fn max_displacement(&self, x: &SpherePoint<T>) -> T {
        self.elements.iter().fold(T::zero(), |m, g| {
            let y = x.transform(g);
            let d = x
                .coords()
                .iter()
                .zip(y.coords())
                .fold(T::zero(), |a, (&p, &q)| a + (p - q) * (p - q))
                .sqrt();
            m.max(d)
        })
    }

    /// Boundary nodes fixed by every element, with the dimension class of
    /// the fixed set. The class comes from the rank of the fixed projector,
    /// which is exact, rather than from the node cloud.
    pub fn fixed_boundary_set(&self, grid: &QuadratureGrid<T>, tol: T) -> (Vec<usize>, FixedSetKind) {
        let nodes = grid
            .boundary_nodes()
            .iter()
            .enumerate()
            .filter(|(_, x)| self.max_displacement(x) < tol)
            .map(|(i, _)| i)
            .collect();
        (nodes, self.fixed_set_kind())
    }
}

pub fn identity<T: Real>() -> Mat5<T> {
    let mut m = [[T::zero(); 5]; 5];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn matmul<T: Real>(a: &Mat5<T>, b: &Mat5<T>) -> Mat5<T> {
    let mut m = [[T::zero(); 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            m[r][c] = (0..5).fold(T::zero(), |acc, k| acc + a[r][k] * b[k][c]);
        }
    }
    m
}

pub fn transpose<T: Real>(a: &Mat5<T>) -> Mat5<T> {
    let mut m = [[T::zero(); 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            m[r][c] = a[c][r];
        }
    }
    m
}

fn max_diff<T: Real>(a: &Mat5<T>, b: &Mat5<T>) -> T {
    let mut d = T::zero();
    for r in 0..5 {
        for c in 0..5 {
            d = d.max((a[r][c] - b[r][c]).abs());
        }
    }
    d
}

fn close<T: Real>(a: &Mat5<T>, b: &Mat5<T>) -> bool {
    max_diff(a, b) <= T::c(1e-9)
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders_and_fixed_sets() {
        let cases = [
            ("trivial", 1, FixedSetKind::S3),
            ("c2", 2, FixedSetKind::S1),
            ("c5", 5, FixedSetKind::S1),
            ("refl", 2, FixedSetKind::S2),
            ("c2xc2", 4, FixedSetKind::Empty),
            ("c3xc4", 12, FixedSetKind::Empty),
        ];
        for (name, order, kind) in cases {
            let g = SymmetryGroup::<f64>::builtin(name).unwrap();
            assert_eq!(g.len(), order, "{name}");
            assert_eq!(g.fixed_set_kind(), kind, "{name}");
            g.validate(1e-12).unwrap();
        }
    }

    #[test]
    fn parse_generators() {
        let g = SymmetryGroup::<f64>::parse("pair", "rot(1,2,2) rot(3,4,2)", 64).unwrap();
        assert_eq!(g.len(), 4);
        let h = SymmetryGroup::<f64>::parse("dihedral", "rot(1,2,3); refl(2)", 64).unwrap();
        assert_eq!(h.len(), 6);
        assert!(SymmetryGroup::<f64>::parse("bad", "rot(1,5,2)", 64).is_err());
        assert!(SymmetryGroup::<f64>::parse("bad", "spin(1)", 64).is_err());
        assert!(SymmetryGroup::<f64>::parse("big", "rot(1,2,7) rot(1,3,5)", 64).is_err());
        assert_eq!("rot(1,2,4)".parse::<Generator>().unwrap().to_string(), "rot(1,2,4)");
    }

    #[test]
    fn fixed_boundary_nodes() {
        let grid = QuadratureGrid::<f64>::new(8).unwrap();
        let tol = 1e-6;
        let refl = SymmetryGroup::<f64>::builtin("refl").unwrap();
        let (idx, kind) = refl.fixed_boundary_set(&grid, tol);
        assert_eq!(kind, FixedSetKind::S2);
        assert!(!idx.is_empty());
        for &i in &idx {
            assert!(grid.boundary_nodes()[i].coords()[0].abs() < tol);
        }

        let rot = SymmetryGroup::<f64>::builtin("c4").unwrap();
        let (idx, kind) = rot.fixed_boundary_set(&grid, tol);
        assert_eq!(kind, FixedSetKind::S1);
        for &i in &idx {
            let c = grid.boundary_nodes()[i].coords();
            assert!(c[0] * c[0] + c[1] * c[1] < tol * tol);
        }

        let prod = SymmetryGroup::<f64>::builtin("c2xc2").unwrap();
        let (idx, kind) = prod.fixed_boundary_set(&grid, tol);
        assert_eq!(kind, FixedSetKind::Empty);
        assert!(idx.is_empty());
    }

    #[test]
    fn vanishing_profile_matches_distance() {
        let g = SymmetryGroup::<f64>::builtin("refl").unwrap();
        let x = SpherePoint::normalized([0.3, 0.5, -0.2, 0.4, 0.6]);
        let d = g.distance_to_fixed(&x);
        assert!((d.sin().powi(2) - g.vanishing_profile(&x)).abs() < 1e-14);
        let c = x.coords();
        assert!((g.vanishing_profile(&x) - (c[0] * c[0] + c[4] * c[4])).abs() < 1e-14);
    }

    #[test]
    fn angular_multiples() {
        assert_eq!(SymmetryGroup::<f64>::builtin("c3xc4").unwrap().grid_angular_multiple(), Some(12));
        let g = SymmetryGroup::<f64>::parse("mixed", "rot(1,3,2)", 8).unwrap();
        assert_eq!(g.grid_angular_multiple(), None);
    }
}
