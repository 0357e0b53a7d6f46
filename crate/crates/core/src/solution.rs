//! Field solutions and the boundary absorption probabilities derived from them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::lattice::{LatticeSpec, Site, SourceSpec};
use crate::numeric::compensated_sum;

/// Which engine produced a field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Oracle,
    Mc,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Oracle => "oracle",
            Method::Mc => "mc",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Expected visit counts at every interior site. Boundary and outside
/// sites read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSolution {
    spec: LatticeSpec,
    source: SourceSpec,
    method: Method,
    values: Vec<f64>,
    limit_evaluated: bool,
}

impl FieldSolution {
    /// `values` is indexed by [`LatticeSpec::interior_index`].
    pub fn new(spec: LatticeSpec, source: SourceSpec, method: Method, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), spec.interior_count(), "field length mismatch");
        FieldSolution {
            spec,
            source,
            method,
            values,
            limit_evaluated: false,
        }
    }

    pub(crate) fn with_limit_flag(mut self, flag: bool) -> Self {
        self.limit_evaluated = flag;
        self
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn source(&self) -> SourceSpec {
        self.source
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// True when a degenerate mode was evaluated as a numerical limit.
    pub fn limit_evaluated(&self) -> bool {
        self.limit_evaluated
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, s: Site) -> f64 {
        self.spec.interior_index(s).map_or(0.0, |i| self.values[i])
    }

    /// `(site, value)` pairs ordered by `(q, p)`.
    pub fn iter(&self) -> impl Iterator<Item = (Site, f64)> + '_ {
        self.spec.interior_sites().zip(self.values.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    /// Largest `|6 F(s) - sum_{t in N(s)} F(t) - 6 [s = source]|` over the
    /// interior.
    pub fn max_residual(&self) -> f64 {
        let src = self.source.site();
        self.spec
            .interior_sites()
            .map(|s| {
                let rhs = if s == src { 6.0 } else { 0.0 };
                let nb = compensated_sum(s.neighbors().iter().map(|&t| self.value(t)));
                (6.0 * self.value(s) - nb - rhs).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest absolute pointwise difference to another field on the same lattice.
    pub fn max_abs_diff(&self, other: &FieldSolution) -> f64 {
        assert_eq!(self.spec, other.spec);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Probability of absorption at each boundary site.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionMap {
    spec: LatticeSpec,
    probs: Vec<f64>,
    total: f64,
}

impl AbsorptionMap {
    /// `probs` follows [`LatticeSpec::boundary_sites`] order.
    pub fn new(spec: LatticeSpec, probs: Vec<f64>) -> Self {
        assert_eq!(
            probs.len(),
            spec.boundary_count(),
            "absorption length mismatch"
        );
        let total = compensated_sum(probs.iter().copied());
        AbsorptionMap { spec, probs, total }
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn get(&self, s: Site) -> Option<f64> {
        self.spec.boundary_index(s).map(|i| self.probs[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (Site, f64)> + '_ {
        self.spec
            .boundary_sites()
            .into_iter()
            .zip(self.probs.iter().copied())
    }

    pub fn max_abs_diff(&self, other: &AbsorptionMap) -> f64 {
        assert_eq!(self.spec, other.spec);
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// A walker absorbed at `s` arrived from one of its interior neighbours,
/// each of which sends it there with probability 1/6 per visit.
pub fn absorption_map(sol: &FieldSolution) -> AbsorptionMap {
    let spec = sol.spec();
    let probs = spec
        .boundary_sites()
        .into_iter()
        .map(|s| compensated_sum(s.neighbors().iter().map(|&t| sol.value(t))) / 6.0)
        .collect();
    AbsorptionMap::new(spec, probs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_absorption() {
        let spec = LatticeSpec::new(1, 1).unwrap();
        let sol = FieldSolution::new(spec, SourceSpec::new(1, 1), Method::Oracle, vec![1.0]);
        assert_eq!(sol.max_residual(), 0.0);
        let abs = absorption_map(&sol);
        let hits: Vec<_> = abs.iter().filter(|(_, v)| *v > 0.0).collect();
        assert_eq!(hits.len(), 6);
        for (_, v) in hits {
            assert_eq!(v, 1.0 / 6.0);
        }
        assert!((abs.total() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn values_off_the_interior_are_zero() {
        let spec = LatticeSpec::new(2, 2).unwrap();
        let sol = FieldSolution::new(spec, SourceSpec::new(1, 1), Method::Exact, vec![1.0; 4]);
        assert_eq!(sol.value(Site::new(0, 1)), 0.0);
        assert_eq!(sol.value(Site::new(-3, 9)), 0.0);
        assert_eq!(sol.value(Site::new(2, 2)), 1.0);
    }
}
