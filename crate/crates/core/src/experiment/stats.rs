use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

/// A sample mean with an optional confidence half-width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// `None` when fewer than two samples were available.
    pub half_width: Option<f64>,
}

impl Estimate {
    pub fn lower(&self) -> f64 {
        self.mean - self.half_width.unwrap_or(0.0)
    }

    pub fn upper(&self) -> f64 {
        self.mean + self.half_width.unwrap_or(0.0)
    }
}

/// Student-t interval on the sample mean with `n - 1` degrees of freedom.
///
/// `confidence` is the two-sided coverage in `[0, 1)`. Fewer than two samples
/// yield the mean alone; an empty sample yields a NaN mean.
pub fn confidence_interval(samples: &[f64], confidence: f64) -> Estimate {
    let n = samples.len();
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Estimate { mean, half_width: None };
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let sd = var.sqrt();
    if confidence <= 0.0 || sd == 0.0 {
        return Estimate { mean, half_width: Some(0.0) };
    }
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64).expect("degrees of freedom are positive");
    let quantile = t.inverse_cdf(0.5 + confidence / 2.0);
    Estimate { mean, half_width: Some(quantile * sd / (n as f64).sqrt()) }
}
