use std::fmt;
use std::sync::Arc;

use crate::algebra::{Grade, Multivector};
use crate::error::{Error, Result};

use super::expr::{parse_field_expr, FieldExpr};
use super::lattice::{Grid, LatticeSpec};

type PointFn = dyn Fn(&[f64; 4]) -> Multivector + Send + Sync;

/// A multivector-valued map on Minkowski coordinates: an analytic
/// expression, a closure, or values sampled on a lattice.
#[derive(Clone)]
pub enum MultivectorField {
    Expr(Arc<FieldExpr>),
    Func(Arc<PointFn>),
    Lattice(Arc<Grid>),
}

impl fmt::Debug for MultivectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultivectorField::Expr(e) => write!(f, "Expr({e})"),
            MultivectorField::Func(_) => write!(f, "Func(..)"),
            MultivectorField::Lattice(g) => write!(f, "Lattice({:?})", g.spec),
        }
    }
}

impl MultivectorField {
    pub fn parse(src: &str) -> Result<Self> {
        Ok(MultivectorField::Expr(Arc::new(parse_field_expr(src)?)))
    }

    pub fn constant(m: Multivector) -> Self {
        MultivectorField::Func(Arc::new(move |_| m))
    }

    pub fn zero() -> Self {
        MultivectorField::constant(Multivector::ZERO)
    }

    pub fn from_fn(f: impl Fn(&[f64; 4]) -> Multivector + Send + Sync + 'static) -> Self {
        MultivectorField::Func(Arc::new(f))
    }

    pub fn from_grid(grid: Grid) -> Self {
        MultivectorField::Lattice(Arc::new(grid))
    }

    pub fn lattice(&self) -> Option<&LatticeSpec> {
        match self {
            MultivectorField::Lattice(g) => Some(&g.spec),
            _ => None,
        }
    }

    pub fn is_analytic(&self) -> bool {
        self.lattice().is_none()
    }

    /// Value at `x`; sampled fields only answer on their nodes.
    pub fn eval(&self, x: &[f64; 4]) -> Result<Multivector> {
        match self {
            MultivectorField::Expr(e) => Ok(e.eval(x)),
            MultivectorField::Func(f) => Ok(f(x)),
            MultivectorField::Lattice(g) => g.at(x),
        }
    }

    pub fn sample(&self, spec: &LatticeSpec) -> Result<Grid> {
        match self {
            MultivectorField::Expr(e) => Ok(Grid::from_fn(*spec, |x| e.eval(&x))),
            MultivectorField::Func(f) => Ok(Grid::from_fn(*spec, |x| f(&x))),
            MultivectorField::Lattice(g) => g.crop(spec),
        }
    }

    /// Pointwise image under `f`. Lattice fields stay on their lattice.
    pub fn map(&self, f: impl Fn(&Multivector) -> Multivector + Send + Sync + 'static) -> Self {
        match self {
            MultivectorField::Lattice(g) => MultivectorField::from_grid(g.map(f)),
            other => {
                let inner = other.clone();
                MultivectorField::from_fn(move |x| match inner.eval(x) {
                    Ok(v) => f(&v),
                    Err(_) => Multivector::nan(),
                })
            }
        }
    }
}

/// Values of `field` on `domain` plus `r` ghost layers.
pub fn padded(field: &MultivectorField, domain: &LatticeSpec, r: usize) -> Result<Grid> {
    field.sample(&domain.expand(r)).map_err(|_| Error::StencilOutOfBounds {
        radius: r,
        reason: "sampled field does not cover the stencil".into(),
    })
}

/// Rejects a grid whose values leak outside grade `k` by more than `rel`
/// of their size. Masked (non-finite) points are skipped.
pub fn check_grade(grid: &Grid, k: Grade, rel: f64) -> Result<()> {
    for v in grid.data.iter().filter(|v| v.is_finite()) {
        v.expect_grade(k, rel)?;
    }
    Ok(())
}

impl From<Multivector> for MultivectorField {
    fn from(m: Multivector) -> Self {
        MultivectorField::constant(m)
    }
}

/// The lattice a pipeline reports on. Sampled inputs fix it (shrunk by the
/// stencil radius, no extrapolation); otherwise the requested lattice is used
/// and analytic inputs are evaluated on ghost layers around it.
pub fn resolve_domain(
    inputs: &[&MultivectorField],
    requested: Option<&LatticeSpec>,
    radius: usize,
) -> Result<LatticeSpec> {
    let sampled: Vec<&LatticeSpec> = inputs.iter().filter_map(|f| f.lattice()).collect();
    let domain = match sampled.first() {
        Some(first) => {
            let d = first.shrink(radius)?;
            for other in &sampled[1..] {
                if other.offset_of(&d.expand(radius)).is_none() {
                    return Err(Error::InvalidLattice("sampled inputs live on different lattices".into()));
                }
            }
            d
        }
        None => *requested.ok_or_else(|| Error::Config("a lattice is required for analytic inputs".into()))?,
    };
    Ok(domain)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_examples() {
        let f = MultivectorField::parse("x1*g0").unwrap();
        assert_eq!(f.eval(&[0.0, 2.0, 0.0, 0.0]).unwrap(), Multivector::gamma(0) * 2.0);
        let g5 = MultivectorField::parse("g5").unwrap();
        assert_eq!(g5.eval(&[3.0, -1.0, 0.5, 7.0]).unwrap(), Multivector::gamma5());
    }

    #[test]
    fn sampled_values_are_exact() {
        let spec = LatticeSpec::new([0.0; 4], 0.25, [5; 4]).unwrap();
        let f = MultivectorField::parse("sin(x0) * g1 + x3 * g21").unwrap();
        let grid = f.sample(&spec).unwrap();
        let sampled = MultivectorField::from_grid(grid.clone());
        for i in [0, 7, 311, spec.len() - 1] {
            assert_eq!(sampled.eval(&spec.point(i)).unwrap(), grid.data[i]);
        }
        assert!(matches!(sampled.eval(&[0.1, 0.0, 0.0, 0.0]), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn domain_from_sampled_input() {
        let spec = LatticeSpec::new([0.0; 4], 0.5, [9; 4]).unwrap();
        let f = MultivectorField::from_grid(Grid::from_fn(spec, |_| Multivector::ONE));
        let d = resolve_domain(&[&f], None, 2).unwrap();
        assert_eq!(d.dims, [5; 4]);
        assert_eq!(d.origin, [1.0; 4]);
    }
}
