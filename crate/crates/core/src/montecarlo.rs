//! Seeded random-walk simulation.
//!
//! Every walk owns a ChaCha8 stream selected by its index, so a run is a
//! pure function of `(spec, source, walks, seed)` no matter how rayon
//! schedules the batches. Tallies are integer counts merged by addition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Site, SiteClass, SourceSpec};
use crate::solution::{AbsorptionMap, FieldSolution, Method};

pub const DEFAULT_MAX_STEPS: u64 = 1_000_000_000;

const BATCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    pub walks: u64,
    pub seed: u64,
    /// Per-walk step cap.
    pub max_steps: u64,
}

impl WalkConfig {
    pub fn new(walks: u64, seed: u64) -> Self {
        WalkConfig {
            walks,
            seed,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

/// Empirical visit means and absorption frequencies.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    spec: LatticeSpec,
    source: SourceSpec,
    walks: u64,
    visits: Vec<u64>,
    hits: Vec<u64>,
}

impl McEstimate {
    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    pub fn source(&self) -> SourceSpec {
        self.source
    }

    pub fn walks(&self) -> u64 {
        self.walks
    }

    /// Raw visit counts, by interior index.
    pub fn visit_counts(&self) -> &[u64] {
        &self.visits
    }

    /// Raw absorption counts, in boundary-site order.
    pub fn hit_counts(&self) -> &[u64] {
        &self.hits
    }

    pub fn visit_mean(&self, s: Site) -> f64 {
        self.spec
            .interior_index(s)
            .map_or(0.0, |i| self.visits[i] as f64 / self.walks as f64)
    }

    pub fn absorb_freq(&self, s: Site) -> Option<f64> {
        self.spec
            .boundary_index(s)
            .map(|i| self.hits[i] as f64 / self.walks as f64)
    }

    /// `sqrt(f (1 - f) / walks)`.
    pub fn absorb_stderr(&self, s: Site) -> Option<f64> {
        self.absorb_freq(s).map(|f| self.stderr_of(f))
    }

    fn stderr_of(&self, f: f64) -> f64 {
        (f * (1.0 - f) / self.walks as f64).sqrt()
    }

    /// Visit means as a field tagged [`Method::Mc`].
    pub fn field(&self) -> FieldSolution {
        let n = self.walks as f64;
        let values = self.visits.iter().map(|&v| v as f64 / n).collect();
        FieldSolution::new(self.spec, self.source, Method::Mc, values)
    }

    pub fn absorption(&self) -> AbsorptionMap {
        let n = self.walks as f64;
        AbsorptionMap::new(self.spec, self.hits.iter().map(|&h| h as f64 / n).collect())
    }

    /// Standard errors in boundary-site order.
    pub fn stderrs(&self) -> Vec<f64> {
        let n = self.walks as f64;
        self.hits
            .iter()
            .map(|&h| self.stderr_of(h as f64 / n))
            .collect()
    }
}

fn walk_rng(seed: u64, walk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(walk);
    rng
}

struct Tally {
    visits: Vec<u64>,
    hits: Vec<u64>,
}

impl Tally {
    fn zeros(spec: &LatticeSpec) -> Self {
        Tally {
            visits: vec![0; spec.interior_count()],
            hits: vec![0; spec.boundary_count()],
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.visits
            .iter_mut()
            .zip(other.visits)
            .for_each(|(a, b)| *a += b);
        self.hits
            .iter_mut()
            .zip(other.hits)
            .for_each(|(a, b)| *a += b);
        self
    }
}

fn run_walk(
    spec: &LatticeSpec,
    start: Site,
    walk: u64,
    cfg: &WalkConfig,
    tally: &mut Tally,
) -> Result<()> {
    let mut rng = walk_rng(cfg.seed, walk);
    let mut here = start;
    let mut steps = 0_u64;
    loop {
        match spec.classify(here) {
            SiteClass::Interior => {
                tally.visits[spec.interior_index(here).expect("interior")] += 1;
            }
            SiteClass::Boundary => {
                tally.hits[spec.boundary_index(here).expect("boundary")] += 1;
                return Ok(());
            }
            SiteClass::Outside => unreachable!("interior sites only neighbour the rectangle"),
        }
        if steps == cfg.max_steps {
            return Err(Error::WalkOverflow {
                walk,
                max_steps: cfg.max_steps,
            });
        }
        here = here.neighbors()[rng.random_range(0..6)];
        steps += 1;
    }
}

/// Runs `cfg.walks` independent walks from the source.
pub fn simulate(spec: LatticeSpec, src: SourceSpec, cfg: WalkConfig) -> Result<McEstimate> {
    spec.check_source(src)?;
    if cfg.walks == 0 {
        return Err(Error::NoWalks);
    }
    let start = src.site();
    let batches = cfg.walks.div_ceil(BATCH);
    let tally = (0..batches)
        .into_par_iter()
        .map(|batch| {
            let mut tally = Tally::zeros(&spec);
            let end = ((batch + 1) * BATCH).min(cfg.walks);
            for walk in batch * BATCH..end {
                run_walk(&spec, start, walk, &cfg, &mut tally)?;
            }
            Ok(tally)
        })
        .try_reduce(|| Tally::zeros(&spec), |a, b| Ok(a.merge(b)))?;
    Ok(McEstimate {
        spec,
        source: src,
        walks: cfg.walks,
        visits: tally.visits,
        hits: tally.hits,
    })
}

/// `(freq - exact) / stderr` with the conventions of [`zscores`].
pub fn zscore(freq: f64, stderr: f64, exact: f64, walks: u64) -> f64 {
    if freq == exact {
        0.0
    } else if stderr > 0.0 {
        (freq - exact) / stderr
    } else {
        let fallback = (exact * (1.0 - exact) / walks as f64).sqrt();
        if fallback > 0.0 {
            (freq - exact) / fallback
        } else {
            f64::INFINITY.copysign(freq - exact)
        }
    }
}

/// Standardised deviation of each empirical frequency from `exact`, in
/// boundary-site order.
///
/// `z = (freq - exact) / stderr`, and `0` when both the standard error
/// vanishes and the frequency is exact. A zero empirical standard error
/// with `freq != exact` falls back to the binomial error of `exact`.
pub fn zscores(est: &McEstimate, exact: &AbsorptionMap) -> Result<Vec<(Site, f64)>> {
    if est.spec != exact.spec() {
        return Err(Error::SpecMismatch(format!(
            "estimate is {}x{}, reference is {}x{}",
            est.spec.m(),
            est.spec.n(),
            exact.spec().m(),
            exact.spec().n()
        )));
    }
    let n = est.walks as f64;
    Ok(exact
        .iter()
        .zip(&est.hits)
        .map(|((site, p), &h)| {
            let f = h as f64 / n;
            (site, zscore(f, est.stderr_of(f), p, est.walks))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear_oracle::solve_oracle;
    use crate::solution::absorption_map;

    fn spec(m: usize, n: usize) -> LatticeSpec {
        LatticeSpec::new(m, n).unwrap()
    }

    #[test]
    fn zero_walks_rejected() {
        assert_eq!(
            simulate(spec(3, 3), SourceSpec::new(2, 2), WalkConfig::new(0, 1)),
            Err(Error::NoWalks)
        );
    }

    #[test]
    fn frequencies_sum_to_one_exactly() {
        let est = simulate(
            spec(5, 4),
            SourceSpec::new(2, 3),
            WalkConfig::new(10_007, 3),
        )
        .unwrap();
        assert_eq!(est.hit_counts().iter().sum::<u64>(), 10_007);
        assert!(est.visit_mean(Site::new(2, 3)) >= 1.0);
    }

    #[test]
    fn reproducible_and_thread_count_invariant() {
        let run = || {
            simulate(
                spec(7, 7),
                SourceSpec::new(4, 4),
                WalkConfig::new(20_000, 42),
            )
            .unwrap()
        };
        let a = run();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = single.install(run);
        assert_eq!(a, b);
        let c = simulate(
            spec(7, 7),
            SourceSpec::new(4, 4),
            WalkConfig::new(20_000, 43),
        )
        .unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn step_cap_is_enforced() {
        let cfg = WalkConfig {
            walks: 10,
            seed: 0,
            max_steps: 0,
        };
        assert!(matches!(
            simulate(spec(3, 3), SourceSpec::new(2, 2), cfg),
            Err(Error::WalkOverflow { max_steps: 0, .. })
        ));
    }

    #[test]
    fn zscore_conventions() {
        let sp = spec(1, 1);
        let src = SourceSpec::new(1, 1);
        let est = simulate(sp, src, WalkConfig::new(600, 9)).unwrap();
        // An exact reference equal to the frequencies gives all-zero scores.
        let z = zscores(&est, &est.absorption()).unwrap();
        assert!(z.iter().all(|&(_, v)| v == 0.0));
        // Corners never hit and never reachable score zero.
        let exact = absorption_map(&solve_oracle(sp, src).unwrap());
        let z = zscores(&est, &exact).unwrap();
        let corner = z.iter().find(|(s, _)| *s == Site::new(0, 0)).unwrap();
        assert_eq!(corner.1, 0.0);
        assert!(zscores(
            &est,
            &absorption_map(&solve_oracle(spec(3, 3), SourceSpec::new(2, 2)).unwrap())
        )
        .is_err());
    }
}
