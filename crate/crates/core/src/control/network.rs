use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::types::{LocalPoint, VehicularControls, WaypointDelta, Waypoints};
use crate::math::{sigmoid, tanh};
use crate::{Error, Result};

pub const FEATURE_DIM: usize = 384;
pub const HIDDEN_DIM: usize = 232;
pub const MLP_HIDDEN_DIM: usize = 64;
/// GRU input: current waypoint (2), route point (2), speed (1).
pub const GRU_INPUT_DIM: usize = 5;
pub const NUM_WAYPOINTS: usize = 3;

/// Row-major f32 tensor with an explicit shape.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    pub shape: Vec<usize>,
    pub data: Vec<f32>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, data: Vec<f32>) -> Result<Self> {
        let n: usize = shape.iter().product();
        if n != data.len() {
            return Err(Error::ShapeMismatch {
                name: "tensor".into(),
                expected: format!("{n} elements for shape {shape:?}"),
                found: format!("{} elements", data.len()),
            });
        }
        Ok(Tensor { shape, data })
    }

    pub fn zeros(shape: &[usize]) -> Self {
        Tensor {
            shape: shape.to_vec(),
            data: vec![0.0; shape.iter().product()],
        }
    }
}

/// Named tensors as stored on disk. Names follow the layout documented on
/// [`NetworkWeights`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightBundle {
    pub tensors: BTreeMap<String, Tensor>,
}

/// Network dimensions: feature width, GRU hidden width, MLP hidden width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkDims {
    pub features: usize,
    pub hidden: usize,
    pub mlp_hidden: usize,
}

impl Default for NetworkDims {
    fn default() -> Self {
        NetworkDims {
            features: FEATURE_DIM,
            hidden: HIDDEN_DIM,
            mlp_hidden: MLP_HIDDEN_DIM,
        }
    }
}

impl NetworkDims {
    /// `(name, shape)` of every tensor, in canonical order.
    pub fn layout(&self) -> Vec<(&'static str, Vec<usize>)> {
        let (f, h, m) = (self.features, self.hidden, self.mlp_hidden);
        vec![
            ("reduce.weight", vec![h, f]),
            ("reduce.bias", vec![h]),
            ("gru.weight_ih", vec![3 * h, GRU_INPUT_DIM]),
            ("gru.weight_hh", vec![3 * h, h]),
            ("gru.bias_ih", vec![3 * h]),
            ("gru.bias_hh", vec![3 * h]),
            ("tlss.weight", vec![h, 2]),
            ("tlss.bias", vec![h]),
            ("head.weight", vec![2, h]),
            ("head.bias", vec![2]),
            ("mlp.fc1.weight", vec![m, h]),
            ("mlp.fc1.bias", vec![m]),
            ("mlp.fc2.weight", vec![3, m]),
            ("mlp.fc2.bias", vec![3]),
        ]
    }
}

impl WeightBundle {
    pub fn insert(&mut self, name: &str, tensor: Tensor) {
        self.tensors.insert(name.to_string(), tensor);
    }

    pub fn get(&self, name: &str) -> Option<&Tensor> {
        self.tensors.get(name)
    }

    /// All parameters zero.
    pub fn zeros(dims: NetworkDims) -> Self {
        let mut b = WeightBundle::default();
        for (name, shape) in dims.layout() {
            b.insert(name, Tensor::zeros(&shape));
        }
        b
    }

    /// Uniform random parameters in `±1/sqrt(fan_in)`, deterministic in
    /// `seed`.
    pub fn random(dims: NetworkDims, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut b = WeightBundle::default();
        for (name, shape) in dims.layout() {
            let fan_in = match name {
                "reduce.weight" | "reduce.bias" => dims.features,
                "gru.weight_ih" | "gru.bias_ih" | "gru.weight_hh" | "gru.bias_hh" | "head.weight" | "head.bias" => {
                    dims.hidden
                }
                "tlss.weight" | "tlss.bias" => 2,
                "mlp.fc1.weight" | "mlp.fc1.bias" => dims.hidden,
                _ => dims.mlp_hidden,
            };
            let bound = 1.0 / libm::sqrtf(fan_in as f32);
            let n = shape.iter().product();
            let data = (0..n).map(|_| rng.random_range(-bound..bound)).collect();
            b.insert(name, Tensor { shape, data });
        }
        b
    }

    /// Zero network whose waypoint head emits the constant delta `(dx, dy)`
    /// through its bias.
    pub fn constant_delta(dims: NetworkDims, dx: f32, dy: f32) -> Self {
        let mut b = WeightBundle::zeros(dims);
        b.insert("head.bias", Tensor { shape: vec![2], data: vec![dx, dy] });
        b
    }
}

/// Dense affine layer `y = W x + b`, `W` row-major `[out, in]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub inputs: usize,
    pub outputs: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Linear {
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.inputs);
        self.weight
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(x).fold(*b, |acc, (w, v)| acc + w * v))
            .collect()
    }
}

/// GRU cell with gates stacked (reset, update, candidate):
///
/// ```text
/// r  = σ(W_ir x + b_ir + W_hr h + b_hr)
/// z  = σ(W_iz x + b_iz + W_hz h + b_hz)
/// n  = tanh(W_in x + b_in + r ⊙ (W_hn h + b_hn))
/// h' = (1 − z) ⊙ n + z ⊙ h
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct GruCell {
    pub input_to_hidden: Linear,
    pub hidden_to_hidden: Linear,
}

impl GruCell {
    pub fn hidden(&self) -> usize {
        self.hidden_to_hidden.inputs
    }

    pub fn step(&self, x: &[f64], h: &[f64]) -> Vec<f64> {
        let n = self.hidden();
        let gi = self.input_to_hidden.apply(x);
        let gh = self.hidden_to_hidden.apply(h);
        (0..n)
            .map(|k| {
                let r = sigmoid(gi[k] + gh[k]);
                let z = sigmoid(gi[n + k] + gh[n + k]);
                let cand = tanh(gi[2 * n + k] + r * gh[2 * n + k]);
                (1.0 - z) * cand + z * h[k]
            })
            .collect()
    }
}

/// Shape-validated network parameters, widened to f64 for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkWeights {
    pub dims: NetworkDims,
    pub reduce: Linear,
    pub gru: GruCell,
    pub tlss: Linear,
    pub head: Linear,
    pub fc1: Linear,
    pub fc2: Linear,
}

impl NetworkWeights {
    /// Validate every tensor against the layout implied by the reduction
    /// layer and MLP widths. Missing or misshapen tensors are rejected here
    /// so inference never has to.
    pub fn from_bundle(bundle: &WeightBundle) -> Result<Self> {
        let reduce = bundle.get("reduce.weight").ok_or_else(|| Error::MissingTensor("reduce.weight".into()))?;
        let fc1 = bundle.get("mlp.fc1.weight").ok_or_else(|| Error::MissingTensor("mlp.fc1.weight".into()))?;
        if reduce.shape.len() != 2 || fc1.shape.len() != 2 {
            return Err(Error::ShapeMismatch {
                name: "reduce.weight".into(),
                expected: "rank 2".into(),
                found: format!("{:?}", reduce.shape),
            });
        }
        let dims = NetworkDims {
            features: reduce.shape[1],
            hidden: reduce.shape[0],
            mlp_hidden: fc1.shape[0],
        };
        if dims.hidden == 0 || dims.features == 0 || dims.mlp_hidden == 0 {
            return Err(Error::ShapeMismatch {
                name: "reduce.weight".into(),
                expected: "nonzero dimensions".into(),
                found: format!("{:?}", reduce.shape),
            });
        }
        for (name, shape) in dims.layout() {
            let t = bundle.get(name).ok_or_else(|| Error::MissingTensor(name.into()))?;
            if t.shape != shape || t.data.len() != shape.iter().product::<usize>() {
                return Err(Error::ShapeMismatch {
                    name: name.into(),
                    expected: format!("{shape:?}"),
                    found: format!("{:?}", t.shape),
                });
            }
            if t.data.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidConfig(format!("tensor {name} has non-finite values")));
            }
        }
        let wide = |name: &str| -> Vec<f64> { bundle.tensors[name].data.iter().map(|&v| v as f64).collect() };
        let linear = |w: &str, b: &str| {
            let shape = &bundle.tensors[w].shape;
            Linear {
                inputs: shape[1],
                outputs: shape[0],
                weight: wide(w),
                bias: wide(b),
            }
        };
        Ok(NetworkWeights {
            dims,
            reduce: linear("reduce.weight", "reduce.bias"),
            gru: GruCell {
                input_to_hidden: linear("gru.weight_ih", "gru.bias_ih"),
                hidden_to_hidden: linear("gru.weight_hh", "gru.bias_hh"),
            },
            tlss: linear("tlss.weight", "tlss.bias"),
            head: linear("head.weight", "head.bias"),
            fc1: linear("mlp.fc1.weight", "mlp.fc1.bias"),
            fc2: linear("mlp.fc2.weight", "mlp.fc2.bias"),
        })
    }
}

/// Waypoint predictor: the reduced features seed the GRU state, which is
/// unrolled once per waypoint. Each step's state is biased by the encoded
/// traffic-light/stop-sign predictions before the head decodes a delta.
/// Returns the waypoints and the last biased state.
pub fn predict_waypoints(
    features: &[f64],
    route: LocalPoint,
    speed: f64,
    tl: f64,
    ss: f64,
    net: &NetworkWeights,
) -> Result<(Waypoints, Vec<f64>)> {
    if features.len() != net.dims.features {
        return Err(Error::ShapeMismatch {
            name: "features".into(),
            expected: format!("{}", net.dims.features),
            found: format!("{}", features.len()),
        });
    }
    let mut h = net.reduce.apply(features);
    let bias = net.tlss.apply(&[tl, ss]);
    let mut wp = LocalPoint::ORIGIN;
    let mut deltas = [WaypointDelta::default(); NUM_WAYPOINTS];
    let mut latent = Vec::new();
    for delta in deltas.iter_mut() {
        h = net.gru.step(&[wp.x, wp.y, route.x, route.y, speed], &h);
        latent = h.iter().zip(&bias).map(|(a, b)| a + b).collect();
        let out = net.head.apply(&latent);
        *delta = WaypointDelta { dx: out[0], dy: out[1] };
        wp = LocalPoint::new(wp.x + out[0], wp.y + out[1]);
    }
    Ok((Waypoints::from_deltas(deltas), latent))
}

/// Decode controls from the latent state: two linear layers with a ReLU,
/// logistic squashing, then denormalization.
pub fn mlp_agent(latent: &[f64], net: &NetworkWeights) -> VehicularControls {
    let mut hidden = net.fc1.apply(latent);
    hidden.iter_mut().for_each(|v| *v = v.max(0.0));
    let out = net.fc2.apply(&hidden);
    VehicularControls {
        steering: 2.0 * sigmoid(out[0]) - 1.0,
        throttle: VehicularControls::MAX_THROTTLE * sigmoid(out[1]),
        brake: sigmoid(out[2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> NetworkDims {
        NetworkDims {
            features: 6,
            hidden: 4,
            mlp_hidden: 3,
        }
    }

    #[test]
    fn zero_network_stays_put() {
        let net = NetworkWeights::from_bundle(&WeightBundle::zeros(NetworkDims::default())).unwrap();
        let f = vec![1.0; FEATURE_DIM];
        let (wp, latent) = predict_waypoints(&f, LocalPoint::new(1.0, 5.0), 3.0, 1.0, 0.0, &net).unwrap();
        assert_eq!(wp, Waypoints::STATIONARY);
        assert_eq!(latent.len(), HIDDEN_DIM);
        assert_eq!(
            mlp_agent(&latent, &net),
            VehicularControls {
                steering: 0.0,
                throttle: 0.375,
                brake: 0.5
            }
        );
    }

    #[test]
    fn constant_delta_prefix_sums() {
        let net = NetworkWeights::from_bundle(&WeightBundle::constant_delta(small(), 1.0, 2.0)).unwrap();
        let (wp, _) = predict_waypoints(&[0.3; 6], LocalPoint::ORIGIN, 0.0, 0.0, 0.0, &net).unwrap();
        assert_eq!(wp.0, [LocalPoint::new(1.0, 2.0), LocalPoint::new(2.0, 4.0), LocalPoint::new(3.0, 6.0)]);
    }

    #[test]
    fn zero_gru_halves_state() {
        let net = NetworkWeights::from_bundle(&WeightBundle::zeros(small())).unwrap();
        let h = [1.0, -2.0, 0.5, 8.0];
        assert_eq!(net.gru.step(&[1.0, 2.0, 3.0, 4.0, 5.0], &h), vec![0.5, -1.0, 0.25, 4.0]);
    }

    #[test]
    fn mlp_saturation() {
        let mut b = WeightBundle::zeros(small());
        b.insert("mlp.fc2.bias", Tensor { shape: vec![3], data: vec![-1e4; 3] });
        let net = NetworkWeights::from_bundle(&b).unwrap();
        let lo = mlp_agent(&[0.0; 4], &net);
        assert_eq!((lo.steering, lo.throttle, lo.brake), (-1.0, 0.0, 0.0));
        b.insert("mlp.fc2.bias", Tensor { shape: vec![3], data: vec![1e4; 3] });
        let net = NetworkWeights::from_bundle(&b).unwrap();
        let hi = mlp_agent(&[0.0; 4], &net);
        assert_eq!((hi.steering, hi.throttle, hi.brake), (1.0, 0.75, 1.0));
    }

    #[test]
    fn load_rejects_bad_shapes() {
        let mut b = WeightBundle::zeros(small());
        b.insert("gru.weight_hh", Tensor::zeros(&[12, 5]));
        assert!(matches!(NetworkWeights::from_bundle(&b), Err(Error::ShapeMismatch { .. })));
        let mut b = WeightBundle::zeros(small());
        b.tensors.remove("head.bias");
        assert!(matches!(NetworkWeights::from_bundle(&b), Err(Error::MissingTensor(_))));
    }

    #[test]
    fn random_bundle_is_seeded() {
        assert_eq!(WeightBundle::random(small(), 3), WeightBundle::random(small(), 3));
        assert_ne!(WeightBundle::random(small(), 3), WeightBundle::random(small(), 4));
        assert!(NetworkWeights::from_bundle(&WeightBundle::random(NetworkDims::default(), 1)).is_ok());
    }
}
