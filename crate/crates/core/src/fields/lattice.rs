use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Multivector;
use crate::error::{Error, Result};

/// Upper bound on lattice points accepted from configs.
pub const MAX_POINTS: usize = 2_000_000;

/// Minimum extent per axis so a central stencil has an interior.
pub const MIN_DIM: usize = 5;

/// A uniform lattice: node `i` sits at `origin + spacing * i`, stored
/// row-major with x3 varying fastest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSpec {
    pub origin: [f64; 4],
    pub spacing: f64,
    pub dims: [usize; 4],
}

impl LatticeSpec {
    pub fn new(origin: [f64; 4], spacing: f64, dims: [usize; 4]) -> Result<Self> {
        let spec = LatticeSpec { origin, spacing, dims };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the constraints placed on user-supplied lattices.
    pub fn validate(&self) -> Result<()> {
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return Err(Error::InvalidLattice(format!("spacing must be positive, got {}", self.spacing)));
        }
        if self.origin.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidLattice("origin must be finite".into()));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < MIN_DIM) {
            return Err(Error::InvalidLattice(format!("every dimension needs at least {MIN_DIM} points, got {d}")));
        }
        let total = self.dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d));
        match total {
            Some(n) if n <= MAX_POINTS => Ok(()),
            _ => Err(Error::InvalidLattice(format!("more than {MAX_POINTS} points"))),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn strides(&self) -> [usize; 4] {
        let d = self.dims;
        [d[1] * d[2] * d[3], d[2] * d[3], d[3], 1]
    }

    pub fn multi_index(&self, mut flat: usize) -> [usize; 4] {
        let mut out = [0; 4];
        for axis in (0..4).rev() {
            out[axis] = flat % self.dims[axis];
            flat /= self.dims[axis];
        }
        out
    }

    pub fn flat_index(&self, idx: [usize; 4]) -> usize {
        let s = self.strides();
        (0..4).map(|a| idx[a] * s[a]).sum()
    }

    pub fn point(&self, flat: usize) -> [f64; 4] {
        let idx = self.multi_index(flat);
        std::array::from_fn(|a| self.origin[a] + self.spacing * idx[a] as f64)
    }

    /// Index of the node at `x`, if `x` is one.
    pub fn node_of(&self, x: &[f64; 4]) -> Option<usize> {
        let mut idx = [0usize; 4];
        for a in 0..4 {
            let t = (x[a] - self.origin[a]) / self.spacing;
            let r = t.round();
            if (t - r).abs() > 1e-9 * r.abs().max(1.0) || r < 0.0 || r >= self.dims[a] as f64 {
                return None;
            }
            idx[a] = r as usize;
        }
        Some(self.flat_index(idx))
    }

    /// The lattice grown by `r` nodes on every side.
    pub fn expand(&self, r: usize) -> LatticeSpec {
        LatticeSpec {
            origin: self.origin.map(|o| o - self.spacing * r as f64),
            spacing: self.spacing,
            dims: self.dims.map(|d| d + 2 * r),
        }
    }

    /// The interior left after removing `r` nodes from every side.
    pub fn shrink(&self, r: usize) -> Result<LatticeSpec> {
        if self.dims.iter().any(|&d| d <= 2 * r) {
            return Err(Error::StencilOutOfBounds {
                radius: r,
                reason: format!("lattice dims {:?} leave no interior", self.dims),
            });
        }
        Ok(LatticeSpec {
            origin: self.origin.map(|o| o + self.spacing * r as f64),
            spacing: self.spacing,
            dims: self.dims.map(|d| d - 2 * r),
        })
    }

    pub fn with_spacing(&self, spacing: f64) -> LatticeSpec {
        LatticeSpec { spacing, ..*self }
    }

    /// Offset of `inner` inside `self` in nodes, if it is an aligned
    /// sub-lattice.
    pub fn offset_of(&self, inner: &LatticeSpec) -> Option<[usize; 4]> {
        if (inner.spacing - self.spacing).abs() > 1e-12 * self.spacing {
            return None;
        }
        let mut off = [0usize; 4];
        for a in 0..4 {
            let t = (inner.origin[a] - self.origin[a]) / self.spacing;
            let r = t.round();
            if (t - r).abs() > 1e-9 * r.abs().max(1.0) || r < 0.0 {
                return None;
            }
            off[a] = r as usize;
            if off[a] + inner.dims[a] > self.dims[a] {
                return None;
            }
        }
        Some(off)
    }
}

/// Values on the nodes of a lattice. Non-finite entries mark masked points.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T = Multivector> {
    pub spec: LatticeSpec,
    pub data: Vec<T>,
}

impl<T: Send + Sync> Grid<T> {
    pub fn from_fn(spec: LatticeSpec, f: impl Fn([f64; 4]) -> T + Sync) -> Self {
        let data = (0..spec.len()).into_par_iter().map(|i| f(spec.point(i))).collect();
        Grid { spec, data }
    }

    pub fn from_values(spec: LatticeSpec, data: Vec<T>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::InvalidLattice(format!(
                "{} values for a lattice of {} points",
                data.len(),
                spec.len()
            )));
        }
        Ok(Grid { spec, data })
    }

    pub fn map<U: Send>(&self, f: impl Fn(&T) -> U + Sync + Send) -> Grid<U> {
        Grid { spec: self.spec, data: self.data.par_iter().map(f).collect() }
    }

    pub fn zip_map<U: Sync, V: Send>(&self, other: &Grid<U>, f: impl Fn(&T, &U) -> V + Sync + Send) -> Grid<V> {
        assert_eq!(self.spec.dims, other.spec.dims, "grids must share a lattice");
        let data = self.data.par_iter().zip(other.data.par_iter()).map(|(a, b)| f(a, b)).collect();
        Grid { spec: self.spec, data }
    }
}

impl<T: Clone + Send + Sync> Grid<T> {
    /// Restricts to an aligned sub-lattice.
    pub fn crop(&self, inner: &LatticeSpec) -> Result<Grid<T>> {
        let off = self.spec.offset_of(inner).ok_or(Error::OutOfDomain { point: inner.origin })?;
        let data = (0..inner.len())
            .into_par_iter()
            .map(|i| {
                let idx = inner.multi_index(i);
                self.data[self.spec.flat_index(std::array::from_fn(|a| idx[a] + off[a]))].clone()
            })
            .collect();
        Ok(Grid { spec: *inner, data })
    }

    pub fn at(&self, x: &[f64; 4]) -> Result<T> {
        self.spec
            .node_of(x)
            .map(|i| self.data[i].clone())
            .ok_or(Error::OutOfDomain { point: *x })
    }
}
