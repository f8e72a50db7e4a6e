//! Logistic regression on pair features.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::features::FeatureMatrix;
use crate::math::{exp, ln};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub lr: f64,
    pub epochs: usize,
    pub l2: f64,
    /// Recorded for replay; weights start at zero so it does not change the fit.
    pub seed: u64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        LogRegConfig {
            lr: 0.1,
            epochs: 500,
            l2: 1e-4,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + exp(-z))
    } else {
        let e = exp(z);
        e / (1.0 + e)
    }
}

impl LinearModel {
    pub fn zeros(dim: usize) -> Self {
        LinearModel {
            weights: vec![0.0; dim],
            bias: 0.0,
        }
    }

    fn check_dim(&self, x: &FeatureMatrix) -> Result<()> {
        if x.n_cols() != self.weights.len() {
            return Err(Error::LengthMismatch {
                expected: self.weights.len(),
                found: x.n_cols(),
            });
        }
        Ok(())
    }

    fn logit(&self, x: &FeatureMatrix, r: usize) -> f64 {
        let (idx, val) = x.row(r);
        idx.iter()
            .zip(val)
            .fold(self.bias, |acc, (&j, &v)| acc + self.weights[j] * v)
    }

    pub fn probabilities(&self, x: &FeatureMatrix) -> Result<Vec<f64>> {
        self.check_dim(x)?;
        Ok((0..x.n_rows()).map(|r| sigmoid(self.logit(x, r))).collect())
    }

    /// Mean BCE plus `l2 / 2 * |w|^2`; the bias is not penalised.
    pub fn loss(&self, x: &FeatureMatrix, y: &[u8], l2: f64) -> Result<f64> {
        check_labels(x, y)?;
        self.check_dim(x)?;
        let mut total = 0.0;
        for (r, &label) in y.iter().enumerate() {
            let z = self.logit(x, r);
            // ln(1 + e^z) - y z, evaluated without overflow
            let softplus = if z > 0.0 {
                z + ln(1.0 + exp(-z))
            } else {
                ln(1.0 + exp(z))
            };
            total += softplus - f64::from(label) * z;
        }
        let penalty: f64 = self.weights.iter().map(|w| w * w).sum::<f64>() * l2 / 2.0;
        Ok(total / y.len() as f64 + penalty)
    }

    /// Gradient of [`LinearModel::loss`] as `(d weights, d bias)`.
    pub fn gradient(&self, x: &FeatureMatrix, y: &[u8], l2: f64) -> Result<(Vec<f64>, f64)> {
        check_labels(x, y)?;
        self.check_dim(x)?;
        let n = y.len() as f64;
        let mut gw: Vec<f64> = self.weights.iter().map(|w| l2 * w).collect();
        let mut gb = 0.0;
        for (r, &label) in y.iter().enumerate() {
            let residual = (sigmoid(self.logit(x, r)) - f64::from(label)) / n;
            let (idx, val) = x.row(r);
            for (&j, &v) in idx.iter().zip(val) {
                gw[j] += residual * v;
            }
            gb += residual;
        }
        Ok((gw, gb))
    }
}

fn check_labels(x: &FeatureMatrix, y: &[u8]) -> Result<()> {
    if x.n_rows() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.n_rows(),
            found: y.len(),
        });
    }
    if y.is_empty() {
        return Err(Error::InvalidParameter("no training rows".into()));
    }
    match y.iter().find(|&&v| v > 1) {
        Some(&v) => Err(Error::NonBinary(v)),
        None => Ok(()),
    }
}

/// Full-batch gradient descent from zero weights. Returns the model and the
/// loss before each epoch's update.
pub fn fit_logreg(x: &FeatureMatrix, y: &[u8], config: &LogRegConfig) -> Result<(LinearModel, Vec<f64>)> {
    if config.lr.is_nan() || config.lr <= 0.0 || config.l2.is_nan() || config.l2 < 0.0 {
        return Err(Error::InvalidParameter(
            "logistic regression needs lr > 0 and l2 >= 0".into(),
        ));
    }
    check_labels(x, y)?;
    let mut model = LinearModel::zeros(x.n_cols());
    let mut losses = Vec::with_capacity(config.epochs);
    for _ in 0..config.epochs {
        losses.push(model.loss(x, y, config.l2)?);
        let (gw, gb) = model.gradient(x, y, config.l2)?;
        for (w, g) in model.weights.iter_mut().zip(gw) {
            *w -= config.lr * g;
        }
        model.bias -= config.lr * gb;
    }
    Ok((model, losses))
}

/// Probabilities and `p >= threshold` labels.
pub fn predict_logreg(model: &LinearModel, x: &FeatureMatrix, threshold: f64) -> Result<(Vec<f64>, Vec<u8>)> {
    let p = model.probabilities(x)?;
    let labels = p.iter().map(|&v| u8::from(v >= threshold)).collect();
    Ok((p, labels))
}
