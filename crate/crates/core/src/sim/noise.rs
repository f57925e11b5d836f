use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::circuit::GateKind;

/// Stochastic Pauli channel applied to each qubit a gate touches.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PauliError {
    #[serde(default)]
    pub px: f64,
    #[serde(default)]
    pub py: f64,
    #[serde(default)]
    pub pz: f64,
}

impl PauliError {
    /// Single-qubit depolarizing channel: X, Y, Z each with probability `p/3`.
    pub fn depolarizing(p: f64) -> PauliError {
        PauliError {
            px: p / 3.0,
            py: p / 3.0,
            pz: p / 3.0,
        }
    }

    pub fn total(&self) -> f64 {
        self.px + self.py + self.pz
    }

    fn validate(&self) -> Result<(), String> {
        for p in [self.px, self.py, self.pz] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("probability {p} outside [0, 1]"));
            }
        }
        if self.total() > 1.0 + 1e-12 {
            return Err(format!("px + py + pz = {} exceeds 1", self.total()));
        }
        Ok(())
    }
}

/// Per-gate-kind Pauli errors plus a classical readout flip probability.
///
/// JSON form: `{"cx": {"px": 0.001, "py": 0.001, "pz": 0.001}, "meas": 0.02}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoiseModel {
    gate_errors: BTreeMap<GateKind, PauliError>,
    p_meas: f64,
}

impl NoiseModel {
    pub fn noiseless() -> NoiseModel {
        NoiseModel::default()
    }

    pub fn with_gate_error(mut self, kind: GateKind, err: PauliError) -> Result<Self, SimError> {
        err.validate().map_err(SimError::InvalidNoise)?;
        if matches!(kind, GateKind::Barrier | GateKind::Measure) {
            return Err(SimError::InvalidNoise(format!(
                "{kind} cannot carry a gate error; use the readout probability"
            )));
        }
        self.gate_errors.insert(kind, err);
        Ok(self)
    }

    pub fn with_readout_error(mut self, p: f64) -> Result<Self, SimError> {
        if !(0.0..=1.0).contains(&p) {
            return Err(SimError::InvalidNoise(format!(
                "readout probability {p} outside [0, 1]"
            )));
        }
        self.p_meas = p;
        Ok(self)
    }

    /// Depolarizing noise of strength `p` on every qubit touched by `kind`.
    pub fn depolarizing(kind: GateKind, p: f64) -> Result<NoiseModel, SimError> {
        NoiseModel::noiseless().with_gate_error(kind, PauliError::depolarizing(p))
    }

    pub fn gate_error(&self, kind: GateKind) -> Option<&PauliError> {
        self.gate_errors.get(&kind).filter(|e| e.total() > 0.0)
    }

    pub fn readout_error(&self) -> f64 {
        self.p_meas
    }

    pub fn is_noiseless(&self) -> bool {
        self.p_meas == 0.0 && self.gate_errors.values().all(|e| e.total() == 0.0)
    }

    pub fn from_json(text: &str) -> Result<NoiseModel, SimError> {
        serde_json::from_str(text).map_err(|e| SimError::InvalidNoise(e.to_string()))
    }
}

impl Serialize for NoiseModel {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.gate_errors.len() + 1))?;
        for (kind, err) in &self.gate_errors {
            map.serialize_entry(kind.name(), err)?;
        }
        map.serialize_entry("meas", &self.p_meas)?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for NoiseModel {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, serde_json::Value>::deserialize(deserializer)?;
        let mut model = NoiseModel::noiseless();
        for (key, value) in raw {
            if key == "meas" {
                let p = value
                    .as_f64()
                    .ok_or_else(|| D::Error::custom("`meas` must be a number"))?;
                model = model.with_readout_error(p).map_err(D::Error::custom)?;
                continue;
            }
            let kind = GateKind::from_name(&key)
                .ok_or_else(|| D::Error::custom(format!("unknown gate kind `{key}`")))?;
            let err: PauliError = serde_json::from_value(value).map_err(D::Error::custom)?;
            model = model.with_gate_error(kind, err).map_err(D::Error::custom)?;
        }
        Ok(model)
    }
}
