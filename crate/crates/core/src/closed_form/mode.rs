//! Per-mode separation constants.

use crate::error::{Error, Result};
use crate::numeric::{cos_pi_frac, sin_pi_frac};

/// Sign applied to `alpha` when evaluating a basis function: the paired
/// solutions are the `+alpha` and `-alpha` members of one family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Constants of the `j`-th sine mode of an `m`-row lattice.
///
/// `lk` is the product of the two separation constants, `4 cos^2(theta)`.
/// `cosh_a` and `cosh_b` are the two reciprocal-pair roots of the
/// characteristic quartic in `q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeData {
    pub j: usize,
    pub theta: f64,
    pub lk: f64,
    pub cosh_a: f64,
    pub cosh_b: f64,
    pub alpha: f64,
    pub beta: f64,
    pub degenerate: bool,
    /// `4 - lk`, kept separately so that `beta` stays accurate as `lk -> 4`.
    four_minus_lk: f64,
}

pub fn mode_constants(j: usize, m: usize) -> Result<ModeData> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::UnsupportedGeometry { m });
    }
    if j == 0 || j > m {
        return Err(Error::ModeOutOfRange { j, m });
    }
    let d = (m + 1) as i64;
    let c = cos_pi_frac(j as i64, d);
    let s = sin_pi_frac(j as i64, d);
    let mut mode = ModeData::from_lk(j, 4.0 * c * c, 4.0 * s * s);
    mode.theta = std::f64::consts::PI * j as f64 / (m + 1) as f64;
    mode.degenerate = 2 * j == m + 1;
    Ok(mode)
}

impl ModeData {
    /// Mode constants at an arbitrary `lk` in `[0, 4)`; used directly for
    /// the small-`lk` limit of the degenerate mode.
    pub(crate) fn from_lk(j: usize, lk: f64, four_minus_lk: f64) -> ModeData {
        let root = Self::root(lk);
        let cosh_a = 3.0 + lk / 4.0 + root;
        let cosh_b = 3.0 + lk / 4.0 - root;
        // cosh_b - 1 = (4 - lk) / (2 + lk/4 + root), free of cancellation
        let x = four_minus_lk / (2.0 + lk / 4.0 + root);
        let beta = (x + (x * (x + 2.0)).sqrt()).ln_1p();
        ModeData {
            j,
            theta: (lk.sqrt() / 2.0).acos(),
            lk,
            cosh_a,
            cosh_b,
            alpha: cosh_a.acosh(),
            beta,
            degenerate: lk == 0.0,
            four_minus_lk,
        }
    }

    fn root(lk: f64) -> f64 {
        (lk * lk + 32.0 * lk).sqrt() / 4.0
    }

    /// `3 - cosh(alpha)`.
    pub fn three_minus_cosh_a(&self) -> f64 {
        -(self.lk / 4.0 + Self::root(self.lk))
    }

    /// `3 - cosh(beta)`, evaluated as `2 lk / (root + lk/4)` so that it
    /// stays relatively accurate for small `lk`.
    pub fn three_minus_cosh_b(&self) -> f64 {
        let root = Self::root(self.lk);
        if root == 0.0 {
            0.0
        } else {
            2.0 * self.lk / (root + self.lk / 4.0)
        }
    }

    /// `cosh(alpha) - cosh(beta)`.
    pub fn cosh_gap(&self) -> f64 {
        2.0 * Self::root(self.lk)
    }

    pub fn four_minus_lk(&self) -> f64 {
        self.four_minus_lk
    }

    /// Alpha with the branch sign applied.
    pub fn signed_alpha(&self, branch: Branch) -> f64 {
        branch.sign() * self.alpha
    }
}

/// `4 cosh(a) - 4 cosh(b) - (3 - cosh(b)) sinh(a) - (3 - cosh(a)) sinh(b)`.
pub fn gamma_fn(alpha: f64, beta: f64) -> f64 {
    4.0 * alpha.cosh()
        - 4.0 * beta.cosh()
        - (3.0 - beta.cosh()) * alpha.sinh()
        - (3.0 - alpha.cosh()) * beta.sinh()
}

/// `gamma(-sign*alpha, sign_b*beta)` from the mode's cancellation-free pieces.
pub(crate) fn gamma_mode(mode: &ModeData, branch: Branch, beta_sign: f64) -> f64 {
    let sinh_a = branch.sign() * mode.alpha.sinh();
    let sinh_b = mode.beta.sinh();
    // gamma(x, y) with x = -signed alpha, y = beta_sign * beta
    4.0 * mode.cosh_gap() + mode.three_minus_cosh_b() * sinh_a
        - mode.three_minus_cosh_a() * beta_sign * sinh_b
}
