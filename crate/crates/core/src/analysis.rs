//! Regression and reporting: the `A n + B ln n + C` fit of segment-cluster
//! expectations and the window-grid prefactor assembly.

use serde::{Deserialize, Serialize};

use crate::cft;
use crate::error::{Error, Result};
use crate::estimators::WindowGridResult;

/// Weighted least-squares fit of `y = A n + B ln n + C`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Covariance of (A, B, C), row-major.
    pub covariance: [[f64; 3]; 3],
    /// Weighted root-mean-square residual.
    pub residual_norm: f64,
}

impl FitResult {
    pub fn stderr_a(&self) -> f64 {
        self.covariance[0][0].sqrt()
    }
    pub fn stderr_b(&self) -> f64 {
        self.covariance[1][1].sqrt()
    }
    pub fn stderr_c(&self) -> f64 {
        self.covariance[2][2].sqrt()
    }
}

fn invert3(m: [[f64; 3]; 3]) -> Result<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale: f64 = m.iter().flatten().map(|x| x.abs()).sum::<f64>() / 9.0;
    if det.abs() <= 1e-12 * scale.powi(3) {
        return Err(Error::Numeric("rank-deficient design (n values collinear)".into()));
    }
    let inv_det = 1.0 / det;
    let cof = |r: usize, c: usize| {
        let (r1, r2) = match r {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let (c1, c2) = match c {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let minor = m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
        if (r + c) % 2 == 0 {
            minor
        } else {
            -minor
        }
    };
    let mut out = [[0.0; 3]; 3];
    for r in 0..3 {
        for c in 0..3 {
            out[r][c] = cof(c, r) * inv_det; // adjugate transpose
        }
    }
    Ok(out)
}

/// Fit `mean = A n + B ln n + C` to `(n, mean, stderr)` points, weighting each
/// point by `1/stderr^2`. Needs at least 4 distinct n values.
pub fn fit_n_log(points: &[(i32, f64, f64)]) -> Result<FitResult> {
    let mut ns: Vec<i32> = points.iter().map(|p| p.0).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 4 {
        return Err(Error::Argument(format!(
            "need at least 4 distinct n values, got {}",
            ns.len()
        )));
    }
    if points.iter().any(|p| !(p.2 > 0.0)) {
        return Err(Error::Argument("stderrs must be positive".into()));
    }
    let mut xtx = [[0.0f64; 3]; 3];
    let mut xty = [0.0f64; 3];
    for &(n, y, sigma) in points {
        let w = 1.0 / (sigma * sigma);
        let row = [n as f64, (n as f64).ln(), 1.0];
        for r in 0..3 {
            for c in 0..3 {
                xtx[r][c] += w * row[r] * row[c];
            }
            xty[r] += w * row[r] * y;
        }
    }
    let cov = invert3(xtx)?;
    let mut beta = [0.0f64; 3];
    for r in 0..3 {
        for c in 0..3 {
            beta[r] += cov[r][c] * xty[c];
        }
    }
    let mut ss = 0.0;
    let mut wsum = 0.0;
    for &(n, y, sigma) in points {
        let w = 1.0 / (sigma * sigma);
        let fit = beta[0] * n as f64 + beta[1] * (n as f64).ln() + beta[2];
        ss += w * (y - fit) * (y - fit);
        wsum += w;
    }
    Ok(FitResult {
        a: beta[0],
        b: beta[1],
        c: beta[2],
        covariance: cov,
        residual_norm: (ss / wsum).sqrt(),
    })
}

/// Weighted straight-line fit `y = p + q x`; returns `(p, q, stderr_p, stderr_q)`.
pub fn fit_linear(points: &[(f64, f64, f64)]) -> Result<(f64, f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::Argument("need at least 2 points".into()));
    }
    if points.iter().any(|p| !(p.2 > 0.0)) {
        return Err(Error::Argument("stderrs must be positive".into()));
    }
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x, y, sigma) in points {
        let w = 1.0 / (sigma * sigma);
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    let scale = (sw * sxx).abs().max(sx * sx);
    if det.abs() <= 1e-12 * scale {
        return Err(Error::Numeric("degenerate line fit (single x value)".into()));
    }
    let p = (sxx * sy - sx * sxy) / det;
    let q = (sw * sxy - sx * sy) / det;
    Ok((p, q, (sxx / det).sqrt(), (sw / det).sqrt()))
}

/// One epsilon row of the prefactor table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorEntry {
    pub eps: f64,
    pub n: i32,
    pub l_hat: f64,
    pub l_hat_stderr: f64,
    /// `E[T(i)]/eps` means per window.
    pub windows_over_eps: Vec<f64>,
    pub f0_mean: f64,
}

/// Prefactor assembly across an epsilon grid, with the `eps -> 0` linear
/// extrapolation and the limit constants for comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefactorReport {
    pub entries: Vec<PrefactorEntry>,
    pub extrapolated: f64,
    pub extrapolated_stderr: f64,
    /// `√3/(4π)`, the half-plane limit.
    pub halfplane_target: f64,
    /// `(8/5)·√3/(4π)`, the proven full-plane upper bound.
    pub fullplane_bound: f64,
    /// `5√3/(32π)`, the conjectured full-plane value.
    pub fullplane_conjecture: f64,
}

/// Assemble the prefactor table from window-grid results over >= 2 epsilons.
pub fn prefactor_report(grids: &[WindowGridResult]) -> Result<PrefactorReport> {
    let mut eps_values: Vec<f64> = grids.iter().map(|g| g.eps).collect();
    eps_values.sort_by(f64::total_cmp);
    eps_values.dedup();
    if eps_values.len() < 2 {
        return Err(Error::Argument("need at least 2 epsilon values".into()));
    }
    let mut entries = Vec::with_capacity(grids.len());
    let mut line_points = Vec::with_capacity(grids.len());
    for g in grids {
        let (l, se) = g.l_hat();
        entries.push(PrefactorEntry {
            eps: g.eps,
            n: g.n,
            l_hat: l,
            l_hat_stderr: se,
            windows_over_eps: (1..=g.partition.window_count())
                .map(|i| g.window_over_eps(i).mean)
                .collect(),
            f0_mean: g.f0.mean(),
        });
        // guard against exact grids with zero spread (tests with forced input)
        line_points.push((g.eps, l, se.max(1e-30)));
    }
    let (p, _q, sp, _sq) = fit_linear(&line_points)?;
    Ok(PrefactorReport {
        entries,
        extrapolated: p,
        extrapolated_stderr: sp,
        halfplane_target: cft::halfplane_prefactor(),
        fullplane_bound: cft::fullplane_bound_prefactor(),
        fullplane_conjecture: cft::fullplane_conjectured_prefactor(),
    })
}
