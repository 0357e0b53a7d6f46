//! Exponential basis functions in `q` and the matching across the source row.
//!
//! Each non-degenerate mode has two region-I functions (the `+alpha` and
//! `-alpha` branches) vanishing on `q = 0`, and two region-II functions
//! vanishing on `q = n+1`. Every function comes as a pair: the value on the
//! even sublattice (`F`-type) and on the odd sublattice (`F̂`-type, before
//! the `cos(theta)` factor).

use crate::error::{Error, Result};
use crate::numeric::diff_of_products;

use super::mode::{gamma_mode, Branch, ModeData};

/// Values of one basis function on the even and odd sublattices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisPair {
    pub a_even: f64,
    pub a_odd: f64,
}

impl BasisPair {
    pub fn scale(self, s: f64) -> BasisPair {
        BasisPair {
            a_even: self.a_even * s,
            a_odd: self.a_odd * s,
        }
    }

    fn combine(self, c1: f64, other: BasisPair, c2: f64) -> BasisPair {
        BasisPair {
            a_even: self.a_even * c1 + other.a_even * c2,
            a_odd: self.a_odd * c1 + other.a_odd * c2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Precision {
    Plain,
    Compensated,
}

impl Precision {
    /// `a*b - c*d`.
    pub(crate) fn dop(self, a: f64, b: f64, c: f64, d: f64) -> f64 {
        match self {
            Precision::Plain => a * b - c * d,
            Precision::Compensated => diff_of_products(a, b, c, d),
        }
    }
}

fn check_regular(mode: &ModeData) -> Result<()> {
    if mode.degenerate {
        Err(Error::DegenerateMode { j: mode.j })
    } else {
        Ok(())
    }
}

/// The region-I pair at real offset `x`, times `exp(-shift)`. Region II is
/// the same expression at `x = q - (n+1)` once the common factor
/// `exp(alpha' (n+1))` is removed.
pub(crate) fn eval_pair_shifted(x: f64, mode: &ModeData, branch: Branch, shift: f64) -> BasisPair {
    let a = mode.signed_alpha(branch);
    let b = mode.beta;
    let tma = mode.three_minus_cosh_a();
    let tmb = mode.three_minus_cosh_b();
    let sinh_b = b.sinh();
    let g_mm = gamma_mode(mode, branch, -1.0);
    let g_mp = gamma_mode(mode, branch, 1.0);
    let ea = (a * x - shift).exp();
    let eb = (b * x - shift).exp();
    let ebm = (-b * x - shift).exp();
    BasisPair {
        a_even: tma * tmb * 2.0 * sinh_b * ea - tmb * g_mm * eb + tmb * g_mp * ebm,
        a_odd: 2.0 * ea * (a.exp() + 1.0) * tmb * sinh_b - g_mm * (b.exp() + 1.0) * eb
            + g_mp * ((-b).exp() + 1.0) * ebm,
    }
}

fn eval_pair(x: f64, mode: &ModeData, branch: Branch) -> BasisPair {
    eval_pair_shifted(x, mode, branch, 0.0)
}

/// Region-I (`q <= b`) basis pair; vanishes at `q = 0`.
pub fn basis_region1(q: i64, mode: &ModeData, branch: Branch) -> Result<BasisPair> {
    check_regular(mode)?;
    Ok(eval_pair(q as f64, mode, branch))
}

/// Region-II (`q >= b`) basis pair, scaled by `exp(-alpha' (n+1))` where
/// `alpha'` is the branch-signed alpha. Vanishes at `q = n+1`.
pub fn basis_region2(q: i64, mode: &ModeData, branch: Branch, n: usize) -> Result<BasisPair> {
    check_regular(mode)?;
    Ok(eval_pair((q - n as i64 - 1) as f64, mode, branch))
}

/// Region-II basis pair without normalisation. Overflows for large `n`;
/// kept for checking the scaled form.
pub fn basis_region2_unscaled(
    q: i64,
    mode: &ModeData,
    branch: Branch,
    n: usize,
) -> Result<BasisPair> {
    check_regular(mode)?;
    let a = mode.signed_alpha(branch);
    let b = mode.beta;
    let np1 = (n + 1) as f64;
    let q = q as f64;
    let tma = mode.three_minus_cosh_a();
    let tmb = mode.three_minus_cosh_b();
    let sinh_b = b.sinh();
    let g_mm = gamma_mode(mode, branch, -1.0);
    let g_mp = gamma_mode(mode, branch, 1.0);
    let far_m = ((a - b) * np1).exp();
    let far_p = ((a + b) * np1).exp();
    Ok(BasisPair {
        a_even: tma * tmb * 2.0 * sinh_b * (a * q).exp() - far_m * g_mm * tmb * (b * q).exp()
            + far_p * g_mp * tmb * (-b * q).exp(),
        a_odd: (a.exp() + 1.0) * tmb * 2.0 * sinh_b * (a * q).exp()
            - far_m * g_mm * (b.exp() + 1.0) * (b * q).exp()
            + far_p * g_mp * ((-b).exp() + 1.0) * (-b * q).exp(),
    })
}

/// Coefficients expressing a region-II combination that continues a
/// region-I function across the source row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gammas {
    pub g1: f64,
    pub g2: f64,
}

/// Matching ratios from region-II pairs supplied by `region2`. Rescaling
/// either region-II branch rescales the matching ratio inversely, so the
/// matched functions do not depend on the normalisation.
pub(crate) fn gammas_with<R1, R2>(
    mode: &ModeData,
    branch: Branch,
    region1: R1,
    region2: R2,
    precision: Precision,
) -> Result<Gammas>
where
    R1: Fn(Branch) -> BasisPair,
    R2: Fn(Branch) -> BasisPair,
{
    let r1 = region1(branch);
    let own = region2(branch);
    let other = region2(branch.flip());
    let den1 = precision.dop(own.a_even, other.a_odd, own.a_odd, other.a_even);
    let den2 = precision.dop(other.a_even, own.a_odd, own.a_even, other.a_odd);
    for den in [den1, den2] {
        if den.is_nan() || den.abs() < 1e-300 {
            return Err(Error::SingularMatching {
                j: mode.j,
                denominator: den,
            });
        }
    }
    let num1 = precision.dop(other.a_odd, r1.a_even, other.a_even, r1.a_odd);
    let num2 = precision.dop(own.a_odd, r1.a_even, own.a_even, r1.a_odd);
    Ok(Gammas {
        g1: num1 / den1,
        g2: num2 / den2,
    })
}

/// Matching ratios `(Gamma_1, Gamma_2)` for the given branch, against the
/// scaled region-II family.
pub fn matching_gammas(mode: &ModeData, branch: Branch, b: i64, n: usize) -> Result<Gammas> {
    check_regular(mode)?;
    gammas_with(
        mode,
        branch,
        |br| eval_pair(b as f64, mode, br),
        |br| eval_pair((b - n as i64 - 1) as f64, mode, br),
        Precision::Plain,
    )
}

/// Matched region-II pair evaluated with precomputed ratios; `shift`
/// gives the normalisation exponent of the region-II family per branch.
pub(crate) fn star_from<S>(
    q: i64,
    mode: &ModeData,
    branch: Branch,
    n: usize,
    gammas: Gammas,
    shift: S,
) -> BasisPair
where
    S: Fn(Branch) -> f64,
{
    let x = (q - n as i64 - 1) as f64;
    let own = eval_pair_shifted(x, mode, branch, shift(branch));
    let other = eval_pair_shifted(x, mode, branch.flip(), shift(branch.flip()));
    own.combine(gammas.g1, other, gammas.g2)
}

/// Region-II continuation of the region-I pair of `branch`: equal to it at
/// `q = b` and vanishing at `q = n+1`.
pub fn star_basis(q: i64, mode: &ModeData, branch: Branch, b: i64, n: usize) -> Result<BasisPair> {
    let gammas = matching_gammas(mode, branch, b, n)?;
    Ok(star_from(q, mode, branch, n, gammas, |_| 0.0))
}
