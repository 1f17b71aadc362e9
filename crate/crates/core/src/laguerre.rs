//! Gauss–Laguerre quadrature for `∫_0^∞ f(x) e^{-x} dx`.
//!
//! Nodes are the roots of the Laguerre polynomial `L_m`, located by Newton
//! iteration from asymptotic starting guesses. Weights are
//! `w_i = 1 / (x_i L'_m(x_i)^2)`. An `m`-node rule integrates polynomials
//! of degree up to `2m - 1` exactly.

const TOLERANCE: f64 = 1e-14;
const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Evaluates `(L_m(x), L'_m(x))` by the three-term recurrence.
fn laguerre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, 1.0 - x);
    if m == 0 {
        return (1.0, 0.0);
    }
    for k in 1..m {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0 - x) * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    // x L'_m = m (L_m - L_{m-1})
    let dp = m as f64 * (p1 - p0) / x;
    (p1, dp)
}

impl GaussLaguerre {
    /// Builds the `m`-node rule. Returns `None` if Newton iteration fails to
    /// converge for some root or `m == 0`.
    pub fn new(m: usize) -> Option<Self> {
        if m == 0 {
            return None;
        }
        let mf = m as f64;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        let mut z = 0.0f64;
        for i in 0..m {
            z = match i {
                0 => 3.0 / (1.0 + 2.4 * mf),
                1 => z + 15.0 / (1.0 + 2.5 * mf),
                _ => {
                    let ai = (i - 1) as f64;
                    z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - nodes[i - 2])
                }
            };
            let mut converged = false;
            for _ in 0..MAX_ITERATIONS {
                let (p, dp) = laguerre_with_derivative(m, z);
                let step = p / dp;
                z -= step;
                if step.abs() <= TOLERANCE * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return None;
            }
            let (_, dp) = laguerre_with_derivative(m, z);
            nodes.push(z);
            weights.push(1.0 / (z * dp * dp));
        }
        Some(GaussLaguerre { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
