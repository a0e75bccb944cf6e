use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{AdjacencyMatrix, EdgeProbMatrix};

/// `P_ij = p * theta_i * theta_j`, clipped to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChungLuParams {
    pub p: f64,
    pub theta: Vec<f64>,
}

impl ChungLuParams {
    pub fn new(p: f64, theta: Vec<f64>) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::InvalidArgument(format!("density p = {p} outside (0, 1]")));
        }
        if let Some(t) = theta.iter().find(|t| !(t.is_finite() && **t >= 0.0)) {
            return Err(Error::InvalidArgument(format!("theta entry {t} is not a nonnegative number")));
        }
        Ok(Self { p, theta })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    /// Whether `mean(theta) = 1` within `1e-9`, the identifiability
    /// convention for generating models.
    pub fn is_normalized(&self) -> bool {
        let n = self.n() as f64;
        (self.theta.iter().sum::<f64>() / n - 1.0).abs() <= 1e-9
    }

    pub fn materialize(&self) -> EdgeProbMatrix {
        EdgeProbMatrix::from_upper_fn(self.n(), |i, j| self.p * self.theta[i] * self.theta[j])
    }

    /// True when no pair needs clipping, so the closed forms below are exact.
    pub fn within_bounds(&self) -> bool {
        let (a, b) = top_two(&self.theta);
        self.p * a * b <= 1.0
    }

    /// `p^3 e_3(theta^2)`, or `None` when clipping would change `P`.
    pub fn expected_triangles(&self) -> Option<f64> {
        if !self.within_bounds() {
            return None;
        }
        let [_, _, e3] = elementary3(self.theta.iter().map(|t| t * t));
        Some(self.p.powi(3) * e3)
    }

    /// `p^3 theta_i^2 e_2(theta_{-i}^2)`, or `None` when clipping would change `P`.
    pub fn expected_rooted_triangles(&self, i: usize) -> Option<f64> {
        if !self.within_bounds() {
            return None;
        }
        let others = self.theta.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| t * t);
        let [_, e2, _] = elementary3(others);
        Some(self.p.powi(3) * self.theta[i].powi(2) * e2)
    }
}

/// MLE of `theta` with `p` supplied, or with `p` replaced by the edge density.
pub fn estimate_chung_lu(a: &AdjacencyMatrix, p: Option<f64>) -> Result<ChungLuParams> {
    let n = a.n();
    if n < 2 {
        return Err(Error::InvalidArgument(format!("Chung-Lu estimation needs n >= 2, got {n}")));
    }
    let p = match p {
        Some(p) if p > 0.0 && p < 1.0 => p,
        Some(p) => return Err(Error::InvalidArgument(format!("density p = {p} outside (0, 1)"))),
        None => {
            if a.edge_count() == 0 {
                return Err(Error::DegenerateModel("cannot estimate p from an edgeless graph".into()));
            }
            2.0 * a.edge_count() as f64 / (n * (n - 1)) as f64
        }
    };
    let denom = (n - 1) as f64 * p;
    let theta = (0..n).map(|i| a.degree(i) as f64 / denom).collect();
    Ok(ChungLuParams { p, theta })
}

/// Elementary symmetric polynomials `e_1, e_2, e_3` by the stable recurrence.
pub(crate) fn elementary3(values: impl Iterator<Item = f64>) -> [f64; 3] {
    let (mut e1, mut e2, mut e3) = (0.0, 0.0, 0.0);
    for x in values {
        e3 += e2 * x;
        e2 += e1 * x;
        e1 += x;
    }
    [e1, e2, e3]
}

pub(crate) fn top_two(values: &[f64]) -> (f64, f64) {
    let (mut a, mut b) = (0.0f64, 0.0f64);
    for &x in values {
        if x > a {
            b = a;
            a = x;
        } else if x > b {
            b = x;
        }
    }
    (a, b)
}
