//! Source-row coefficients and per-mode amplitudes.

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, SourceSpec};
use crate::numeric::{cos_pi_frac, sin_pi_frac};

use super::basis::{eval_pair_shifted, gammas_with, star_from, BasisPair, Gammas, Precision};
use super::mode::{mode_constants, Branch, ModeData};

/// `lk` at which the degenerate mode is sampled; the second sample uses half.
pub const DEGENERATE_EPS: f64 = 1e-6;

/// Largest accepted relative change between the two degenerate-mode samples.
pub const DEGENERATE_TOL: f64 = 1e-6;

/// Which side of the source row a value is evaluated on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// `q <= b`
    I,
    /// `q >= b`
    II,
}

/// Coefficients of the two source-row equations for one mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCoefficients {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub t4: f64,
}

/// Per-branch exponents dividing the basis families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Shifts {
    region1: [f64; 2],
    region2: [f64; 2],
}

impl Shifts {
    /// No normalisation beyond the region-II `exp(alpha' (n+1))`.
    pub(crate) const NONE: Shifts = Shifts {
        region1: [0.0; 2],
        region2: [0.0; 2],
    };

    /// Keeps every exponential at most 1 on `0 <= q <= b+1` (region I) and
    /// `b <= q <= n+1` (region II): the growing exponent of each branch is
    /// divided out at the source row.
    pub(crate) fn normalized(mode: &ModeData, b: i64, n: usize) -> Shifts {
        let below = b as f64;
        let above = (n as i64 + 1 - b) as f64;
        Shifts {
            region1: [mode.alpha * below, mode.beta * below],
            region2: [mode.beta * above, mode.alpha * above],
        }
    }

    fn idx(branch: Branch) -> usize {
        match branch {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }
}

/// A mode together with its region-II matching ratios for both branches.
///
/// Each branch may carry its own constant normalisation; amplitudes
/// computed from the same `MatchedMode` absorb it, so the field does not
/// depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct MatchedMode {
    pub mode: ModeData,
    /// `cos(theta)`; for the degenerate-limit samples this is `sqrt(lk)/2`.
    pub cos_theta: f64,
    pub n: usize,
    shifts: Shifts,
    plus: Gammas,
    minus: Gammas,
}

impl MatchedMode {
    pub(crate) fn new(
        mode: ModeData,
        cos_theta: f64,
        b: i64,
        n: usize,
        shifts: Shifts,
        precision: Precision,
    ) -> Result<Self> {
        let x2 = (b - n as i64 - 1) as f64;
        let region1 = |br| eval_pair_shifted(b as f64, &mode, br, shifts.region1[Shifts::idx(br)]);
        let region2 = |br| eval_pair_shifted(x2, &mode, br, shifts.region2[Shifts::idx(br)]);
        let plus = gammas_with(&mode, Branch::Plus, region1, region2, precision)?;
        let minus = gammas_with(&mode, Branch::Minus, region1, region2, precision)?;
        Ok(MatchedMode {
            mode,
            cos_theta,
            n,
            shifts,
            plus,
            minus,
        })
    }

    pub(crate) fn region1(&self, q: i64, branch: Branch) -> BasisPair {
        eval_pair_shifted(
            q as f64,
            &self.mode,
            branch,
            self.shifts.region1[Shifts::idx(branch)],
        )
    }

    pub(crate) fn star(&self, q: i64, branch: Branch) -> BasisPair {
        let g = match branch {
            Branch::Plus => self.plus,
            Branch::Minus => self.minus,
        };
        let shifts = self.shifts;
        star_from(q, &self.mode, branch, self.n, g, |br| {
            shifts.region2[Shifts::idx(br)]
        })
    }

    pub(crate) fn pair(&self, region: Region, q: i64, branch: Branch) -> BasisPair {
        match region {
            Region::I => self.region1(q, branch),
            Region::II => self.star(q, branch),
        }
    }

    pub(crate) fn t_coefficients(&self, b: i64) -> TCoefficients {
        use Branch::{Minus, Plus};
        let c2 = self.mode.lk / 4.0;
        let ai = |q, br| self.region1(q, br).a_even;
        let ahi = |q, br| self.region1(q, br).a_odd;
        let ast = |q, br| self.star(q, br).a_even;
        let ahst = |q, br| self.star(q, br).a_odd;
        TCoefficients {
            t1: 2.0 * ai(b, Minus)
                + 2.0 * ast(b + 1, Minus)
                + ahi(b - 1, Minus)
                + ahst(b + 1, Minus)
                - 6.0 * ahi(b, Minus),
            t2: 6.0 * ahi(b, Plus)
                - 2.0 * ai(b, Plus)
                - 2.0 * ast(b + 1, Plus)
                - ahi(b - 1, Plus)
                - ahst(b + 1, Plus),
            t3: 6.0 * ai(b, Plus)
                - 2.0 * c2 * ahi(b - 1, Plus)
                - 2.0 * c2 * ahi(b, Plus)
                - ai(b - 1, Plus)
                - ast(b + 1, Plus),
            t4: 2.0 * c2 * ahi(b - 1, Minus)
                + 2.0 * c2 * ahi(b, Minus)
                + ai(b - 1, Minus)
                + ast(b + 1, Minus)
                - 6.0 * ai(b, Minus),
        }
    }
}

/// Source-row coefficients `T1..T4` of a non-degenerate mode.
pub fn t_coefficients(mode: &ModeData, b: i64, n: usize) -> Result<TCoefficients> {
    if mode.degenerate {
        return Err(Error::DegenerateMode { j: mode.j });
    }
    let cos_theta = mode.lk.sqrt() / 2.0;
    Ok(MatchedMode::new(*mode, cos_theta, b, n, Shifts::NONE, Precision::Plain)?.t_coefficients(b))
}

/// Amplitudes of the `+alpha` and `-alpha` branches of one mode, valid in
/// both regions (region II through the matched functions).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Weighted {
    pub matched: MatchedMode,
    pub a: f64,
    pub b: f64,
}

impl Weighted {
    /// Contribution of this mode to the field at `(p, q)` in `region`.
    pub(crate) fn value(&self, region: Region, p: i64, q: i64, m: usize) -> f64 {
        let sin_p = sin_pi_frac(self.matched.mode.j as i64 * p, (m + 1) as i64);
        if sin_p == 0.0 {
            return 0.0;
        }
        let plus = self.matched.pair(region, q, Branch::Plus);
        let minus = self.matched.pair(region, q, Branch::Minus);
        if p.rem_euclid(2) == 0 {
            sin_p * (plus.a_even * self.a + minus.a_even * self.b)
        } else {
            sin_p * self.matched.cos_theta * (plus.a_odd * self.a + minus.a_odd * self.b)
        }
    }
}

/// A mode's share of the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ModeTerm {
    /// The source does not project onto this mode.
    Zero,
    Regular(Weighted),
    /// Degenerate mode, Richardson-extrapolated from `lk = eps` and `eps/2`.
    Limit {
        coarse: Weighted,
        fine: Weighted,
    },
}

impl ModeTerm {
    pub(crate) fn value(&self, region: Region, p: i64, q: i64, m: usize) -> f64 {
        match self {
            ModeTerm::Zero => 0.0,
            ModeTerm::Regular(w) => w.value(region, p, q, m),
            ModeTerm::Limit { coarse, fine } => {
                2.0 * fine.value(region, p, q, m) - coarse.value(region, p, q, m)
            }
        }
    }

    pub(crate) fn is_limit(&self) -> bool {
        matches!(self, ModeTerm::Limit { .. })
    }
}

/// Public view of a mode's amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeAmplitudes {
    /// No source projection; both amplitudes are zero.
    Zero,
    Regular {
        a: f64,
        b: f64,
    },
    /// Degenerate mode; amplitudes at the two sampled `lk` values.
    Limit {
        coarse: LimitSample,
        fine: LimitSample,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitSample {
    pub lk: f64,
    pub a: f64,
    pub b: f64,
}

impl ModeAmplitudes {
    /// `(A, B)`; `None` for the limit-evaluated mode.
    pub fn values(&self) -> Option<(f64, f64)> {
        match *self {
            ModeAmplitudes::Zero => Some((0.0, 0.0)),
            ModeAmplitudes::Regular { a, b } => Some((a, b)),
            ModeAmplitudes::Limit { .. } => None,
        }
    }
}

impl From<&ModeTerm> for ModeAmplitudes {
    fn from(term: &ModeTerm) -> Self {
        let sample = |w: &Weighted| LimitSample {
            lk: w.matched.mode.lk,
            a: w.a,
            b: w.b,
        };
        match term {
            ModeTerm::Zero => ModeAmplitudes::Zero,
            ModeTerm::Regular(w) => ModeAmplitudes::Regular { a: w.a, b: w.b },
            ModeTerm::Limit { coarse, fine } => ModeAmplitudes::Limit {
                coarse: sample(coarse),
                fine: sample(fine),
            },
        }
    }
}

/// Solves the two source-row equations of one mode.
fn weigh(
    matched: MatchedMode,
    projection: f64,
    src: SourceSpec,
    precision: Precision,
) -> Result<Weighted> {
    let t = matched.t_coefficients(src.b);
    let (a, b) = if src.a.rem_euclid(2) == 0 {
        let den = precision.dop(t.t1, t.t3, t.t4, t.t2);
        (projection * t.t1 / den, projection * t.t2 / den)
    } else {
        // The odd-row equation carries the cos(theta) of the F̂ expansion.
        let den = matched.cos_theta * precision.dop(t.t2, t.t4, t.t1, t.t3);
        (projection * t.t4 / den, projection * t.t3 / den)
    };
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::SingularMatching {
            j: matched.mode.j,
            denominator: 0.0,
        });
    }
    Ok(Weighted { matched, a, b })
}

/// `strength` multiplies the unit `6 delta` inhomogeneity.
pub(crate) fn prepare_mode(
    j: usize,
    spec: LatticeSpec,
    src: SourceSpec,
    strength: f64,
    precision: Precision,
) -> Result<ModeTerm> {
    let m = spec.m();
    let n = spec.n();
    let mode = mode_constants(j, m)?;
    spec.check_source(src)?;
    let sin_a = sin_pi_frac(j as i64 * src.a, (m + 1) as i64);
    if sin_a == 0.0 {
        return Ok(ModeTerm::Zero);
    }
    let projection = strength * 12.0 / (m + 1) as f64 * sin_a;
    if !mode.degenerate {
        let cos_theta = cos_pi_frac(j as i64, (m + 1) as i64);
        let shifts = Shifts::normalized(&mode, src.b, n);
        let matched = MatchedMode::new(mode, cos_theta, src.b, n, shifts, precision)?;
        return Ok(ModeTerm::Regular(weigh(
            matched, projection, src, precision,
        )?));
    }

    // lk -> 0 limit with the p-dependence held at the true j
    let sample = |lk: f64| -> Result<Weighted> {
        let limit_mode = ModeData::from_lk(j, lk, 4.0 - lk);
        let shifts = Shifts::normalized(&limit_mode, src.b, n);
        let matched = MatchedMode::new(limit_mode, lk.sqrt() / 2.0, src.b, n, shifts, precision)?;
        weigh(matched, projection, src, precision)
    };
    let coarse = sample(DEGENERATE_EPS)?;
    let fine = sample(DEGENERATE_EPS / 2.0)?;

    let mut diff = 0.0_f64;
    let mut size = 0.0_f64;
    for s in spec.interior_sites() {
        let region = if s.q <= src.b { Region::I } else { Region::II };
        let c = coarse.value(region, s.p, s.q, m);
        let f = fine.value(region, s.p, s.q, m);
        diff = diff.max((c - f).abs());
        size = size.max(f.abs());
    }
    let change = if size > 0.0 { diff / size } else { diff };
    if change.is_nan() || change > DEGENERATE_TOL {
        return Err(Error::DegenerateModeUnresolved { j, change });
    }
    Ok(ModeTerm::Limit { coarse, fine })
}

/// Amplitudes of mode `j` for a unit source at `src`.
pub fn mode_amplitudes(j: usize, spec: LatticeSpec, src: SourceSpec) -> Result<ModeAmplitudes> {
    prepare_mode(j, spec, src, 1.0, Precision::Plain).map(|t| ModeAmplitudes::from(&t))
}
