//! Pointwise residual columns and their summaries.

use serde::{Deserialize, Serialize};

use crate::fields::LatticeSpec;

/// One named residual evaluated at every reported point. NaN marks a
/// masked point (e.g. a singular spinor under the ansatz).
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub name: String,
    pub values: Vec<f64>,
    /// Reported for inspection only; never part of the pass verdict
    /// unless a tolerance names it explicitly.
    pub informational: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub name: String,
    pub max: f64,
    /// Root mean square over unmasked points.
    pub l2: f64,
    pub points: usize,
    pub masked: usize,
}

impl Residual {
    pub fn summary(&self) -> ResidualSummary {
        let mut max = 0.0f64;
        let mut sum_sq = 0.0;
        let mut masked = 0;
        for &v in &self.values {
            if v.is_nan() {
                masked += 1;
                continue;
            }
            max = max.max(v.abs());
            sum_sq += v * v;
        }
        let live = self.values.len() - masked;
        let l2 = if live == 0 { 0.0 } else { (sum_sq / live as f64).sqrt() };
        ResidualSummary { name: self.name.clone(), max, l2, points: self.values.len(), masked }
    }

    pub fn max(&self) -> f64 {
        self.summary().max
    }
}

/// Residual columns over one domain, plus any fitted scalars.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResidualReport {
    pub domain: Option<LatticeSpec>,
    pub residuals: Vec<Residual>,
    pub scalars: Vec<(String, f64)>,
}

impl ResidualReport {
    pub fn on(domain: LatticeSpec) -> Self {
        ResidualReport { domain: Some(domain), ..Default::default() }
    }

    pub fn push(&mut self, name: &str, values: Vec<f64>) {
        self.residuals.push(Residual { name: name.into(), values, informational: false });
    }

    pub fn push_info(&mut self, name: &str, values: Vec<f64>) {
        self.residuals.push(Residual { name: name.into(), values, informational: true });
    }

    pub fn push_scalar(&mut self, name: &str, value: f64) {
        self.scalars.push((name.into(), value));
    }

    pub fn get(&self, name: &str) -> Option<&Residual> {
        self.residuals.iter().find(|r| r.name == name)
    }

    /// Max of a residual column; panics on an unknown name.
    pub fn max(&self, name: &str) -> f64 {
        self.get(name).unwrap_or_else(|| panic!("no residual named {name}")).max()
    }

    pub fn scalar(&self, name: &str) -> Option<f64> {
        self.scalars.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    pub fn summaries(&self) -> Vec<ResidualSummary> {
        self.residuals.iter().map(Residual::summary).collect()
    }
}

/// Residual maxima at h, h/2, h/4, ... with the observed order between
/// consecutive levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub name: String,
    pub spacings: Vec<f64>,
    pub max: Vec<f64>,
    /// log2(max_k / max_{k+1}); `None` where either side is zero.
    pub order: Vec<Option<f64>>,
}

/// Runs `pipeline` on `base` and on successively halved spacings, origin
/// and dims held fixed.
pub fn h_sweep<E>(
    base: &LatticeSpec,
    levels: usize,
    mut pipeline: impl FnMut(&LatticeSpec) -> Result<ResidualReport, E>,
) -> Result<(Vec<ResidualReport>, Vec<ConvergenceRow>), E> {
    let mut reports = Vec::with_capacity(levels);
    let mut spacings = Vec::with_capacity(levels);
    for k in 0..levels {
        let spec = base.with_spacing(base.spacing / f64::powi(2.0, k as i32));
        spacings.push(spec.spacing);
        reports.push(pipeline(&spec)?);
    }
    let rows = match reports.first() {
        None => Vec::new(),
        Some(first) => first
            .residuals
            .iter()
            .map(|r| {
                let max: Vec<f64> = reports.iter().map(|rep| rep.get(&r.name).map_or(f64::NAN, Residual::max)).collect();
                let order = max
                    .windows(2)
                    .map(|w| (w[0] > 0.0 && w[1] > 0.0).then(|| (w[0] / w[1]).log2()))
                    .collect();
                ConvergenceRow { name: r.name.clone(), spacings: spacings.clone(), max, order }
            })
            .collect(),
    };
    Ok((reports, rows))
}
