//! Direct numerical solution of the lattice field equations.
//!
//! Each interior site `s` contributes the row
//! `6 F(s) - sum_{t in N(s), t interior} F(t) = 6 [s = source]`;
//! boundary neighbours are absorbing and drop out. Works for every lattice
//! size, including even `m` and `m = 1`, which the closed form does not cover.

use crate::error::{Error, Result};
use crate::lattice::{LatticeSpec, Site, SourceSpec};
use crate::solution::{FieldSolution, Method};

/// Unknown count up to which the system is factorised directly.
pub const DIRECT_LIMIT: usize = 10_000;

/// Max-norm residual the solution must reach.
pub const RESIDUAL_TARGET: f64 = 1e-12;

/// Iteration cap for the conjugate-gradient path.
pub const MAX_ITERATIONS: u64 = 1_000_000;

/// Sparse system in compressed-row form, rows in interior-index order.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    dimension: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    coeffs: Vec<f64>,
    rhs: Vec<f64>,
}

impl LinearSystem {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    /// `(column, coefficient)` entries of row `i`, diagonal first.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()]
            .iter()
            .copied()
            .zip(self.coeffs[range].iter().copied())
    }

    pub fn nnz(&self) -> usize {
        self.coeffs.len()
    }

    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).map(|(j, a)| a * x[j]).sum();
        }
    }

    /// `max_i |(A x - rhs)_i|`.
    pub fn residual(&self, x: &[f64]) -> f64 {
        (0..self.dimension)
            .map(|i| (self.row(i).map(|(j, a)| a * x[j]).sum::<f64>() - self.rhs[i]).abs())
            .fold(0.0, f64::max)
    }
}

pub fn assemble(spec: LatticeSpec, src: SourceSpec) -> Result<LinearSystem> {
    spec.check_source(src)?;
    let dimension = spec.interior_count();
    let mut row_ptr = Vec::with_capacity(dimension + 1);
    let mut cols = Vec::with_capacity(7 * dimension);
    let mut coeffs = Vec::with_capacity(7 * dimension);
    let mut rhs = vec![0.0; dimension];
    row_ptr.push(0);
    for (i, s) in spec.interior_sites().enumerate() {
        cols.push(i);
        coeffs.push(6.0);
        for t in s.neighbors() {
            if let Some(k) = spec.interior_index(t) {
                cols.push(k);
                coeffs.push(-1.0);
            }
        }
        row_ptr.push(cols.len());
    }
    rhs[spec.interior_index(src.site()).expect("checked interior")] = 6.0;
    Ok(LinearSystem {
        dimension,
        row_ptr,
        cols,
        coeffs,
        rhs,
    })
}

/// Solves the field equations: banded LU up to [`DIRECT_LIMIT`] unknowns,
/// conjugate gradients beyond.
pub fn solve_oracle(spec: LatticeSpec, src: SourceSpec) -> Result<FieldSolution> {
    let system = assemble(spec, src)?;
    let values = if system.dimension <= DIRECT_LIMIT {
        solve_banded(spec, &system)
    } else {
        solve_cg(&system)?
    };
    Ok(FieldSolution::new(spec, src, Method::Oracle, values))
}

/// Banded elimination without pivoting: the matrix is a symmetric
/// irreducibly diagonally dominant M-matrix. Factorises in whichever of the
/// row-major or column-major site orderings has the narrower band.
fn solve_banded(spec: LatticeSpec, system: &LinearSystem) -> Vec<f64> {
    let (m, n) = (spec.m(), spec.n());
    let transpose = m > n;
    // permuted position of interior index i
    let perm = |i: usize| -> usize {
        if transpose {
            let s = spec.interior_site(i);
            (s.p as usize - 1) * n + (s.q as usize - 1)
        } else {
            i
        }
    };
    let dim = system.dimension;
    let mut width = 0;
    for i in 0..dim {
        for (j, _) in system.row(i) {
            width = width.max(perm(i).abs_diff(perm(j)));
        }
    }
    let stride = 2 * width + 1;
    let mut band = vec![0.0; dim * stride];
    let at = |r: usize, c: usize| r * stride + (c + width - r);
    let mut rhs = vec![0.0; dim];
    for i in 0..dim {
        let r = perm(i);
        rhs[r] = system.rhs[i];
        for (j, a) in system.row(i) {
            band[at(r, perm(j))] += a;
        }
    }
    for k in 0..dim {
        let pivot = band[at(k, k)];
        let last = (k + width).min(dim - 1);
        for i in k + 1..=last {
            let l = band[at(i, k)] / pivot;
            if l == 0.0 {
                continue;
            }
            band[at(i, k)] = 0.0;
            for c in k + 1..=last {
                band[at(i, c)] -= l * band[at(k, c)];
            }
            rhs[i] -= l * rhs[k];
        }
    }
    let mut x = vec![0.0; dim];
    for k in (0..dim).rev() {
        let last = (k + width).min(dim - 1);
        let s: f64 = (k + 1..=last).map(|c| band[at(k, c)] * x[c]).sum();
        x[k] = (rhs[k] - s) / band[at(k, k)];
    }
    (0..dim).map(|i| x[perm(i)]).collect()
}

fn solve_cg(system: &LinearSystem) -> Result<Vec<f64>> {
    let dim = system.dimension;
    let mut x = vec![0.0; dim];
    let mut r = system.rhs.clone();
    let mut d = r.clone();
    let mut ad = vec![0.0; dim];
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        if r.iter().fold(0.0_f64, |acc, v| acc.max(v.abs())) <= RESIDUAL_TARGET {
            // confirm against the true residual, not the recurrence
            if system.residual(&x) <= RESIDUAL_TARGET {
                return Ok(x);
            }
            system.matvec(&x, &mut ad);
            r.iter_mut()
                .zip(&system.rhs)
                .zip(&ad)
                .for_each(|((ri, bi), ai)| *ri = bi - ai);
            d.copy_from_slice(&r);
            rr = dot(&r, &r);
        }
        system.matvec(&d, &mut ad);
        let step = rr / dot(&d, &ad);
        for i in 0..dim {
            x[i] += step * d[i];
            r[i] -= step * ad[i];
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        rr = rr_next;
        for i in 0..dim {
            d[i] = r[i] + beta * d[i];
        }
        iterations += 1;
    }
    Err(Error::IterationDivergence {
        residual: system.residual(&x),
        iterations,
    })
}

/// Interior sites coupled to `s` through off-diagonal entries of its row.
pub fn coupled_sites(spec: LatticeSpec, system: &LinearSystem, s: Site) -> Vec<Site> {
    let i = spec.interior_index(s).expect("interior site");
    system
        .row(i)
        .filter(|&(j, _)| j != i)
        .map(|(j, _)| spec.interior_site(j))
        .collect()
}
