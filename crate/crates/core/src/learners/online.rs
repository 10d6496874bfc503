//! Per-example update rules. The bias is an extra coordinate with constant
//! input 1, so it shares each technique's update (and variance, where one is
//! kept) with the feature weights.

use statrs::distribution::{ContinuousCDF, Normal};

use super::{Hyperparameters, ModelState, SparseVector, Technique};

pub(crate) struct OnlineState {
    technique: Technique,
    params: Hyperparameters,
    phi: f64,
    pub w: Vec<f64>,
    pub b: f64,
    // Confidence-weighted family: diagonal variances.
    sigma: Vec<f64>,
    sigma_b: f64,
    // Dual averaging: summed gradients and squared gradients.
    grad_sum: Vec<f64>,
    grad_sq: Vec<f64>,
    grad_sum_b: f64,
    grad_sq_b: f64,
    steps: u64,
}

/// Inverse standard normal CDF at the confidence level.
pub(crate) fn confidence_quantile(eta: f64) -> f64 {
    Normal::new(0.0, 1.0).expect("standard normal").inverse_cdf(eta)
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// Log-loss of one example plus the L2 penalty `l2/2 * |w|^2` (bias
/// unpenalized).
pub fn logistic_loss(w: &[f64], b: f64, x: &SparseVector, y: f64, l2: f64) -> f64 {
    let z = y * (x.dot(w) + b);
    // ln(1 + e^-z), stable for both signs.
    let data = if z > 0.0 { (-z).exp().ln_1p() } else { -z + z.exp().ln_1p() };
    data + 0.5 * l2 * w.iter().map(|v| v * v).sum::<f64>()
}

/// Gradient of [`logistic_loss`] with respect to `(w, b)`.
pub fn logistic_gradient(w: &[f64], b: f64, x: &SparseVector, y: f64, l2: f64) -> (Vec<f64>, f64) {
    let coef = -y * sigmoid(-y * (x.dot(w) + b));
    let mut g: Vec<f64> = w.iter().map(|v| l2 * v).collect();
    for &(i, v) in x.entries() {
        g[i as usize] += coef * v;
    }
    (g, coef)
}

impl OnlineState {
    pub fn new(technique: Technique, params: &Hyperparameters, dim: usize) -> Self {
        let variance = matches!(technique, Technique::ConfidenceWeighted | Technique::Arow | Technique::Scw);
        let dual = technique == Technique::AdagradRda;
        OnlineState {
            technique,
            params: params.clone(),
            phi: confidence_quantile(params.confidence),
            w: vec![0.0; dim],
            b: 0.0,
            sigma: if variance { vec![1.0; dim] } else { Vec::new() },
            sigma_b: 1.0,
            grad_sum: if dual { vec![0.0; dim] } else { Vec::new() },
            grad_sq: if dual { vec![0.0; dim] } else { Vec::new() },
            grad_sum_b: 0.0,
            grad_sq_b: 0.0,
            steps: 0,
        }
    }

    pub fn margin(&self, x: &SparseVector) -> f64 {
        x.dot(&self.w) + self.b
    }

    /// `sum sigma_i x_i^2`, including the bias coordinate.
    fn confidence(&self, x: &SparseVector) -> f64 {
        self.sigma_b + x.entries().iter().map(|&(i, v)| self.sigma[i as usize] * v * v).sum::<f64>()
    }

    fn add_scaled_variance(&mut self, x: &SparseVector, step: f64) {
        for &(i, v) in x.entries() {
            self.w[i as usize] += step * self.sigma[i as usize] * v;
        }
        self.b += step * self.sigma_b;
    }

    /// Applies one update; returns whether the model changed.
    pub fn step(&mut self, x: &SparseVector, y: f64) -> bool {
        match self.technique {
            Technique::Perceptron => {
                if y * self.margin(x) > 0.0 {
                    return false;
                }
                x.add_to(&mut self.w, y);
                self.b += y;
                true
            }
            Technique::PassiveAggressive => {
                let loss = (1.0 - y * self.margin(x)).max(0.0);
                if loss == 0.0 {
                    return false;
                }
                let tau = self.params.pa_c.min(loss / (x.norm_sq() + 1.0));
                x.add_to(&mut self.w, tau * y);
                self.b += tau * y;
                true
            }
            Technique::ConfidenceWeighted => self.step_cw(x, y),
            Technique::Arow => {
                let m = y * self.margin(x);
                if m >= 1.0 {
                    return false;
                }
                let v = self.confidence(x);
                let beta = 1.0 / (v + self.params.arow_r);
                self.add_scaled_variance(x, (1.0 - m) * beta * y);
                self.shrink_variance(x, beta);
                true
            }
            Technique::Scw => self.step_scw(x, y),
            Technique::AdagradRda => self.step_rda(x, y),
            Technique::Logistic => {
                let (g, gb) = logistic_gradient(&self.w, self.b, x, y, self.params.logistic_l2);
                let rate = self.params.logistic_rate;
                for (w, g) in self.w.iter_mut().zip(&g) {
                    *w -= rate * g;
                }
                self.b -= rate * gb;
                true
            }
        }
    }

    /// `sigma_i -= beta sigma_i^2 x_i^2`.
    fn shrink_variance(&mut self, x: &SparseVector, beta: f64) {
        for &(i, v) in x.entries() {
            let s = &mut self.sigma[i as usize];
            *s -= beta * *s * *s * v * v;
        }
        self.sigma_b -= beta * self.sigma_b * self.sigma_b;
    }

    fn step_cw(&mut self, x: &SparseVector, y: f64) -> bool {
        let phi = self.phi;
        let m = y * self.margin(x);
        let v = self.confidence(x);
        let b = 1.0 + 2.0 * phi * m;
        let gamma = (-b + (b * b - 8.0 * phi * (m - phi * v)).sqrt()) / (4.0 * phi * v);
        if !(gamma > 0.0) {
            return false;
        }
        self.add_scaled_variance(x, gamma * y);
        for &(i, val) in x.entries() {
            let s = &mut self.sigma[i as usize];
            *s = 1.0 / (1.0 / *s + 2.0 * gamma * phi * val * val);
        }
        self.sigma_b = 1.0 / (1.0 / self.sigma_b + 2.0 * gamma * phi);
        true
    }

    fn step_scw(&mut self, x: &SparseVector, y: f64) -> bool {
        let phi = self.phi;
        let m = y * self.margin(x);
        let v = self.confidence(x);
        if phi * v.sqrt() - m <= 0.0 {
            return false;
        }
        let psi = 1.0 + phi * phi / 2.0;
        let zeta = 1.0 + phi * phi;
        let alpha = ((-m * psi + (m * m * phi.powi(4) / 4.0 + v * phi * phi * zeta).sqrt()) / (v * zeta))
            .max(0.0)
            .min(self.params.scw_c);
        if alpha == 0.0 {
            return false;
        }
        let u = 0.25 * (-alpha * v * phi + (alpha * alpha * v * v * phi * phi + 4.0 * v).sqrt()).powi(2);
        let beta = alpha * phi / (u.sqrt() + v * alpha * phi);
        self.add_scaled_variance(x, alpha * y);
        self.shrink_variance(x, beta);
        true
    }

    /// Hinge-loss subgradient accumulation; weights are a closed-form function
    /// of the accumulators and the step count.
    fn step_rda(&mut self, x: &SparseVector, y: f64) -> bool {
        let m = self.margin(x);
        self.steps += 1;
        let active = y * m < 1.0;
        if active {
            for &(i, v) in x.entries() {
                let g = -y * v;
                self.grad_sum[i as usize] += g;
                self.grad_sq[i as usize] += g * g;
            }
            self.grad_sum_b += -y;
            self.grad_sq_b += 1.0;
        }
        self.refresh_rda();
        active
    }

    fn refresh_rda(&mut self) {
        let eta = self.params.rda_rate;
        let threshold = self.params.rda_l1 * self.steps as f64;
        for i in 0..self.w.len() {
            self.w[i] = rda_weight(self.grad_sum[i], self.grad_sq[i], threshold, eta);
        }
        self.b = rda_weight(self.grad_sum_b, self.grad_sq_b, 0.0, eta);
    }

    pub fn into_parts(self) -> (Vec<f64>, f64, ModelState) {
        let state = match self.technique {
            Technique::ConfidenceWeighted | Technique::Arow | Technique::Scw => ModelState::Variance {
                sigma: self.sigma,
                sigma_bias: self.sigma_b,
            },
            Technique::AdagradRda => ModelState::DualAveraging {
                grad_sum: self.grad_sum,
                grad_sq: self.grad_sq,
                grad_sum_bias: self.grad_sum_b,
                grad_sq_bias: self.grad_sq_b,
                steps: self.steps,
            },
            _ => ModelState::None,
        };
        (self.w, self.b, state)
    }

    #[cfg(test)]
    pub fn variances(&self) -> impl Iterator<Item = f64> + '_ {
        self.sigma.iter().copied().chain(std::iter::once(self.sigma_b))
    }
}

fn rda_weight(sum: f64, sq: f64, threshold: f64, eta: f64) -> f64 {
    let shrunk = sum.abs() - threshold;
    if sq == 0.0 || shrunk <= 0.0 {
        0.0
    } else {
        -sum.signum() * eta * shrunk / sq.sqrt()
    }
}
