use ndarray::Array2;
use serde::{Deserialize, Serialize};

pub const LEAKY_SLOPE: f64 = 0.01;

/// Pointwise nonlinearity. Derivatives at kinks are taken from the right,
/// except hard-tanh whose mask includes the `|x| = 1` boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Activation {
    #[serde(rename = "id", alias = "identity")]
    Identity,
    #[serde(rename = "lr", alias = "leaky_relu")]
    LeakyRelu,
    #[serde(rename = "tanh")]
    Tanh,
    #[serde(rename = "hard_tanh")]
    HardTanh,
}

impl Activation {
    pub fn value(self, x: f64) -> f64 {
        match self {
            Activation::Identity => x,
            Activation::LeakyRelu => {
                if x >= 0.0 {
                    x
                } else {
                    LEAKY_SLOPE * x
                }
            }
            Activation::Tanh => x.tanh(),
            Activation::HardTanh => x.clamp(-1.0, 1.0),
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Identity => 1.0,
            Activation::LeakyRelu => {
                if x >= 0.0 {
                    1.0
                } else {
                    LEAKY_SLOPE
                }
            }
            Activation::Tanh => 1.0 - x.tanh().powi(2),
            Activation::HardTanh => {
                if x.abs() <= 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    pub fn apply(self, x: &Array2<f64>) -> Array2<f64> {
        match self {
            Activation::Identity => x.clone(),
            _ => x.mapv(|v| self.value(v)),
        }
    }

    /// `upstream ∘ σ'(pre)`.
    pub fn backprop(self, pre: &Array2<f64>, upstream: &Array2<f64>) -> Array2<f64> {
        match self {
            Activation::Identity => upstream.clone(),
            _ => {
                let mut out = upstream.clone();
                out.zip_mut_with(pre, |g, &x| *g *= self.derivative(x));
                out
            }
        }
    }

    /// True when `σ(-x) = -σ(x)`.
    pub fn is_odd(self) -> bool {
        !matches!(self, Activation::LeakyRelu)
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Identity => "id",
            Activation::LeakyRelu => "lr",
            Activation::Tanh => "tanh",
            Activation::HardTanh => "hard_tanh",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "id" | "identity" => Ok(Activation::Identity),
            "lr" | "leaky_relu" => Ok(Activation::LeakyRelu),
            "tanh" => Ok(Activation::Tanh),
            "hard_tanh" => Ok(Activation::HardTanh),
            other => Err(format!("unknown activation '{other}' (expected id, lr, tanh, hard_tanh)")),
        }
    }
}
