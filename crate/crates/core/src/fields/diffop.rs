//! Constant-coefficient differential operators Σ_α M_α ∂^α on Cl(1,3)-valued
//! fields, discretised with nested central differences.
//!
//! Operators compose symbolically before any numbers are touched: d∘d,
//! δ∘δ and similar identities reduce to exactly zero coefficient maps, and
//! every partial is the same tensor-product stencil whichever order it was
//! requested in.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::{LinearMap, Multivector};
use crate::error::{Error, Result};

use super::field::{padded, MultivectorField};
use super::lattice::{Grid, LatticeSpec};

/// Derivative orders along x0..x3.
pub type MultiIndex = [u8; 4];

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DiffOp {
    terms: BTreeMap<MultiIndex, LinearMap>,
}

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp::default()
    }

    pub fn constant(map: LinearMap) -> Self {
        let mut op = DiffOp::zero();
        op.insert([0; 4], map);
        op
    }

    pub fn identity() -> Self {
        DiffOp::constant(LinearMap::identity())
    }

    /// ∂_μ acting componentwise.
    pub fn partial(mu: usize) -> Self {
        let mut alpha = [0; 4];
        alpha[mu] = 1;
        let mut op = DiffOp::zero();
        op.insert(alpha, LinearMap::identity());
        op
    }

    /// Σ_μ action(γ^μ) ∂_μ.
    pub fn vector_derivative(action: impl Fn(&Multivector) -> LinearMap) -> Self {
        (0..4).fold(DiffOp::zero(), |acc, mu| {
            acc.add(&DiffOp::partial(mu).then(&action(&Multivector::gamma_up(mu))))
        })
    }

    /// ∂ = γ^μ ∂_μ.
    pub fn dirac() -> Self {
        DiffOp::vector_derivative(LinearMap::left_mul)
    }

    /// d = γ^μ ∧ ∂_μ.
    pub fn exterior() -> Self {
        DiffOp::vector_derivative(LinearMap::left_wedge)
    }

    /// δ = −γ^μ ⌟ ∂_μ.
    pub fn codifferential() -> Self {
        DiffOp::vector_derivative(|g| LinearMap::left_contraction(g).scaled(-1.0))
    }

    /// □ = ∂∘∂.
    pub fn dalembertian() -> Self {
        DiffOp::dirac().compose(&DiffOp::dirac())
    }

    fn insert(&mut self, alpha: MultiIndex, map: LinearMap) {
        let entry = self.terms.entry(alpha).or_insert(LinearMap::ZERO);
        *entry = *entry + map;
        if entry.is_zero() {
            self.terms.remove(&alpha);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &LinearMap)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &DiffOp) -> DiffOp {
        let mut out = self.clone();
        for (alpha, map) in &other.terms {
            out.insert(*alpha, *map);
        }
        out
    }

    pub fn sub(&self, other: &DiffOp) -> DiffOp {
        self.add(&other.scaled(-1.0))
    }

    pub fn scaled(&self, s: f64) -> DiffOp {
        let mut out = DiffOp::zero();
        for (alpha, map) in &self.terms {
            out.insert(*alpha, map.scaled(s));
        }
        out
    }

    /// `map ∘ self`.
    pub fn then(&self, map: &LinearMap) -> DiffOp {
        let mut out = DiffOp::zero();
        for (alpha, m) in &self.terms {
            out.insert(*alpha, map.compose(m));
        }
        out
    }

    /// `self ∘ inner`. Constant coefficients commute with partials.
    pub fn compose(&self, inner: &DiffOp) -> DiffOp {
        let mut out = DiffOp::zero();
        for (a, ma) in &self.terms {
            for (b, mb) in &inner.terms {
                let alpha = std::array::from_fn(|i| a[i] + b[i]);
                out.insert(alpha, ma.compose(mb));
            }
        }
        out
    }

    /// Nodes needed on each side of a point.
    pub fn radius(&self) -> usize {
        self.terms.keys().flat_map(|a| a.iter()).map(|&n| usize::from(n)).max().unwrap_or(0)
    }

    /// Applies the operator on the interior of `grid` (shrunk by the radius).
    pub fn apply_grid(&self, grid: &Grid) -> Result<Grid> {
        let r = self.radius();
        let out_spec = grid.spec.shrink(r)?;
        let strides = grid.spec.strides();
        let plans: Vec<(Vec<(isize, f64)>, f64, &LinearMap)> = self
            .terms
            .iter()
            .map(|(alpha, map)| {
                let stencil = stencil(alpha)
                    .into_iter()
                    .map(|(off, c)| ((0..4).map(|a| off[a] * strides[a] as isize).sum(), c))
                    .collect();
                (stencil, scale_factor(alpha, grid.spec.spacing), map)
            })
            .collect();
        let data = (0..out_spec.len())
            .into_par_iter()
            .map(|i| {
                let idx = out_spec.multi_index(i);
                let base = grid.spec.flat_index(idx.map(|v| v + r)) as isize;
                let mut acc = Multivector::ZERO;
                for (stencil, scale, map) in &plans {
                    let mut partial = Multivector::ZERO;
                    for (off, c) in stencil {
                        partial += grid.data[(base + off) as usize] * *c;
                    }
                    acc += map.apply(&(partial * *scale));
                }
                acc
            })
            .collect();
        Ok(Grid { spec: out_spec, data })
    }

    /// Samples `field` with ghost layers around `domain` and applies the
    /// operator there.
    pub fn apply_field(&self, field: &MultivectorField, domain: &LatticeSpec) -> Result<Grid> {
        self.apply_grid(&padded(field, domain, self.radius())?)
    }

    /// The operator at a single point with step `h`.
    pub fn apply_at(&self, field: &MultivectorField, x: &[f64; 4], h: f64) -> Result<Multivector> {
        if let Some(spec) = field.lattice() {
            if (spec.spacing - h).abs() > 1e-12 * h {
                return Err(Error::StencilOutOfBounds {
                    radius: self.radius(),
                    reason: format!("step {h} differs from lattice spacing {}", spec.spacing),
                });
            }
        }
        let mut acc = Multivector::ZERO;
        for (alpha, map) in &self.terms {
            let mut partial = Multivector::ZERO;
            for (off, c) in stencil(alpha) {
                let y = std::array::from_fn(|a| x[a] + h * off[a] as f64);
                let v = field.eval(&y).map_err(|_| Error::StencilOutOfBounds {
                    radius: self.radius(),
                    reason: format!("no value at {y:?}"),
                })?;
                partial += v * c;
            }
            acc += map.apply(&(partial * scale_factor(alpha, h)));
        }
        Ok(acc)
    }
}

/// Integer weights of Π_μ (E_μ − E_μ⁻¹)^{α_μ}.
fn stencil(alpha: &MultiIndex) -> Vec<([isize; 4], f64)> {
    let mut out = vec![([0isize; 4], 1.0)];
    for axis in 0..4 {
        let n = alpha[axis] as usize;
        if n == 0 {
            continue;
        }
        let mut next = Vec::with_capacity(out.len() * (n + 1));
        for (off, c) in &out {
            for k in 0..=n {
                let mut o = *off;
                o[axis] += n as isize - 2 * k as isize;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                next.push((o, c * sign * binomial(n, k)));
            }
        }
        out = next;
    }
    out
}

fn scale_factor(alpha: &MultiIndex, h: f64) -> f64 {
    let order: i32 = alpha.iter().map(|&n| i32::from(n)).sum();
    (2.0 * h).powi(-order)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Central first partials ∂_μ f on the interior (shrunk by one node).
pub fn partials(grid: &Grid) -> Result<Grid<[Multivector; 4]>> {
    let out_spec = grid.spec.shrink(1)?;
    let strides = grid.spec.strides();
    let inv = 1.0 / (2.0 * grid.spec.spacing);
    let data = (0..out_spec.len())
        .into_par_iter()
        .map(|i| {
            let idx = out_spec.multi_index(i);
            let base = grid.spec.flat_index(idx.map(|v| v + 1));
            std::array::from_fn(|mu| (grid.data[base + strides[mu]] - grid.data[base - strides[mu]]) * inv)
        })
        .collect();
    Ok(Grid { spec: out_spec, data })
}

/// First partials of `field` at a point.
pub fn partials_at(field: &MultivectorField, x: &[f64; 4], h: f64) -> Result<[Multivector; 4]> {
    let mut out = [Multivector::ZERO; 4];
    for (mu, slot) in out.iter_mut().enumerate() {
        *slot = DiffOp::partial(mu).apply_at(field, x, h)?;
    }
    Ok(out)
}

/// The parts of the Dirac operator at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiracParts {
    pub d: Multivector,
    pub delta: Multivector,
    pub slash: Multivector,
}

/// d f, δ f and ∂ f from the same four partials, so ∂f = df − δf.
pub fn dirac_derivative(field: &MultivectorField, x: &[f64; 4], h: f64) -> Result<DiracParts> {
    Ok(dirac_parts(&partials_at(field, x, h)?))
}

pub fn dirac_parts(p: &[Multivector; 4]) -> DiracParts {
    let mut d = Multivector::ZERO;
    let mut delta = Multivector::ZERO;
    let mut slash = Multivector::ZERO;
    for (mu, pm) in p.iter().enumerate() {
        let g = Multivector::gamma_up(mu);
        d += g.wedge(pm);
        delta -= g.left_contract(pm);
        slash += g * *pm;
    }
    DiracParts { d, delta, slash }
}

/// □f at a point, with nested central stencils.
pub fn dalembertian(field: &MultivectorField, x: &[f64; 4], h: f64) -> Result<Multivector> {
    DiffOp::dalembertian().apply_at(field, x, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Grade;

    fn field(src: &str) -> MultivectorField {
        MultivectorField::parse(src).unwrap()
    }

    #[test]
    fn nilpotent_operators_compose_to_zero() {
        let d = DiffOp::exterior();
        let delta = DiffOp::codifferential();
        assert!(d.compose(&d).is_zero());
        assert!(delta.compose(&delta).is_zero());
        assert!(DiffOp::dirac().sub(&d.sub(&delta)).is_zero());
    }

    #[test]
    fn box_is_scalar_wave_operator() {
        let bx = DiffOp::dalembertian();
        let mut want = DiffOp::zero();
        for mu in 0..4 {
            let p = DiffOp::partial(mu);
            let eta = if mu == 0 { 1.0 } else { -1.0 };
            want = want.add(&p.compose(&p).scaled(eta));
        }
        assert_eq!(bx, want);
        assert_eq!(bx.radius(), 2);
    }

    #[test]
    fn linear_field_is_exact() {
        let parts = dirac_derivative(&field("x1*g0"), &[0.3, 0.7, -0.2, 1.1], 0.1).unwrap();
        let want = Multivector::gamma_up(1) * Multivector::gamma(0);
        assert!((parts.slash - want).norm() < 1e-14);
        assert!((parts.d - Multivector::gamma_up(1).wedge(&Multivector::gamma(0))).norm() < 1e-14);
        assert_eq!(parts.delta, Multivector::ZERO);
        assert!((parts.slash - (parts.d - parts.delta)).norm() < 1e-15);
    }

    #[test]
    fn scalar_gradient() {
        let parts = dirac_derivative(&field("x0"), &[0.5, 0.0, 0.0, 0.0], 0.25).unwrap();
        assert!((parts.slash - Multivector::gamma_up(0)).norm() < 1e-15);
    }

    #[test]
    fn box_examples() {
        let x = [0.4, 0.1, 0.2, -0.3];
        let h = 1e-3;
        let v = dalembertian(&field("sin(x0)"), &x, h).unwrap();
        assert!((v.scalar_part() + x[0].sin()).abs() < 1e-6);
        let v = dalembertian(&field("3*g12 + g5"), &x, h).unwrap();
        assert_eq!(v, Multivector::ZERO);
        let v = dalembertian(&field("sin(x0) * g12"), &x, h).unwrap();
        assert!(v.expect_grade(Grade::BIVECTOR, 1e-12).is_ok());
    }

    #[test]
    fn grid_and_point_agree() {
        let spec = LatticeSpec::new([0.0; 4], 0.1, [6; 4]).unwrap();
        let f = field("sin(x0 + 2*x1) * g1 + x2*x3*g5");
        let grid = DiffOp::dalembertian().apply_field(&f, &spec).unwrap();
        for i in [0, 100, spec.len() - 1] {
            let direct = dalembertian(&f, &spec.point(i), 0.1).unwrap();
            assert!((grid.data[i] - direct).norm() < 1e-9);
        }
        let p = partials(&f.sample(&spec.expand(1)).unwrap()).unwrap();
        let d = DiffOp::dirac().apply_field(&f, &spec).unwrap();
        for i in [0, 333, spec.len() - 1] {
            assert!((dirac_parts(&p.data[i]).slash - d.data[i]).norm() < 1e-12);
        }
    }
}
