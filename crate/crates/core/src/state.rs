//! Signal states: pure vectors and finite mixtures, plus the JSON
//! state-description format.
//!
//! ```json
//! {"type":"coherent","beta":[re,im]}
//! {"type":"fock","n":k}
//! {"type":"vector","amps":[[re,im],...]}
//! {"type":"mixture","components":[{"weight":w,"state":<state>},...]}
//! ```

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{HdError, Result};
use crate::fock::{coherent_auto, FockVector, C64};

/// Tolerance on mixture weights summing to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-9;

/// Wire form of a state description.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateDescription {
    Coherent { beta: [f64; 2] },
    Fock { n: usize },
    Vector { amps: Vec<[f64; 2]> },
    Mixture { components: Vec<ComponentDescription> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComponentDescription {
    pub weight: f64,
    pub state: StateDescription,
}

/// One pure component of a signal state.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub weight: f64,
    pub vector: FockVector,
    /// Set when the component is a coherent state, enabling closed forms.
    pub coherent: Option<C64>,
    pub label: String,
}

/// A pure signal vector or a finite mixture `T = sum_j t_j |phi_j><phi_j|`.
#[derive(Clone, Debug, PartialEq)]
pub struct SignalStateSpec {
    components: Vec<Component>,
}

impl SignalStateSpec {
    pub fn coherent(beta: C64) -> Result<Self> {
        Ok(Self::pure_with(coherent_auto(beta)?, Some(beta), format!("coherent({})", fmt_c(beta))))
    }

    pub fn fock(n: usize) -> Result<Self> {
        Ok(Self::pure_with(FockVector::fock(n, n + 1)?, None, format!("fock({n})")))
    }

    pub fn pure(vector: FockVector) -> Self {
        let label = format!("vector[{}]", vector.dim());
        Self::pure_with(vector, None, label)
    }

    fn pure_with(vector: FockVector, coherent: Option<C64>, label: String) -> Self {
        Self {
            components: vec![Component {
                weight: 1.0,
                vector,
                coherent,
                label,
            }],
        }
    }

    /// Mixture of already-built states; nested mixtures are flattened.
    pub fn mixture(parts: Vec<(f64, SignalStateSpec)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(HdError::StateFormat("mixture needs at least one component".into()));
        }
        let mut total = 0.0;
        let mut components = Vec::new();
        for (w, spec) in parts {
            if !(w.is_finite() && w > 0.0) {
                return Err(HdError::StateFormat(format!("mixture weight {w} must be positive")));
            }
            total += w;
            for c in spec.components {
                components.push(Component {
                    weight: w * c.weight,
                    ..c
                });
            }
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(HdError::StateFormat(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { components })
    }

    pub fn from_description(desc: &StateDescription) -> Result<Self> {
        match desc {
            StateDescription::Coherent { beta } => {
                Self::coherent(C64::new(beta[0], beta[1])).map_err(to_format)
            }
            StateDescription::Fock { n } => Self::fock(*n).map_err(to_format),
            StateDescription::Vector { amps } => {
                let amps = amps.iter().map(|a| C64::new(a[0], a[1])).collect();
                Ok(Self::pure(FockVector::from_amplitudes(amps).map_err(to_format)?))
            }
            StateDescription::Mixture { components } => {
                let parts = components
                    .iter()
                    .map(|c| Ok((c.weight, Self::from_description(&c.state)?)))
                    .collect::<Result<Vec<_>>>()?;
                Self::mixture(parts)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let desc: StateDescription =
            serde_json::from_str(text).map_err(|e| HdError::StateFormat(e.to_string()))?;
        Self::from_description(&desc)
    }

    /// Parses either a single state or a JSON array of states.
    pub fn list_from_json(text: &str) -> Result<Vec<Self>> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| HdError::StateFormat(e.to_string()))?;
        let descs: Vec<StateDescription> = match value {
            serde_json::Value::Array(_) => serde_json::from_value(value),
            other => serde_json::from_value(other).map(|d| vec![d]),
        }
        .map_err(|e| HdError::StateFormat(e.to_string()))?;
        descs.iter().map(Self::from_description).collect()
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn is_pure(&self) -> bool {
        self.components.len() == 1
    }

    /// Coherent amplitude, when the state is a single coherent vector.
    pub fn coherent_amplitude(&self) -> Option<C64> {
        match self.components.as_slice() {
            [c] => c.coherent,
            _ => None,
        }
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.vector.mean_photon_number())
            .sum()
    }

    /// Weighted state truncation deficit.
    pub fn trunc_deficit(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * c.vector.trunc_deficit())
            .sum()
    }

    /// Largest component truncation dimension.
    pub fn max_dim(&self) -> usize {
        self.components.iter().map(|c| c.vector.dim()).max().unwrap_or(1)
    }

    /// `e^{i angle N}` applied to every component.
    pub fn phase_rotated(&self, angle: f64) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| Component {
                    weight: c.weight,
                    vector: c.vector.phase_rotated(angle),
                    coherent: c.coherent.map(|b| b * C64::from_polar(1.0, angle)),
                    label: c.label.clone(),
                })
                .collect(),
        }
    }
}

impl fmt::Display for SignalStateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.components.as_slice() {
            [c] => f.write_str(&c.label),
            many => {
                write!(f, "mixture[")?;
                for (i, c) in many.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{}*{}", c.weight, c.label)?;
                }
                write!(f, "]")
            }
        }
    }
}

fn fmt_c(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn to_format(e: HdError) -> HdError {
    match e {
        HdError::StateFormat(_) => e,
        other => HdError::StateFormat(other.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_each_kind() {
        let c = SignalStateSpec::from_json(r#"{"type":"coherent","beta":[1,0.5]}"#).unwrap();
        assert_eq!(c.coherent_amplitude(), Some(C64::new(1.0, 0.5)));
        let f = SignalStateSpec::from_json(r#"{"type":"fock","n":3}"#).unwrap();
        assert_eq!(f.components()[0].vector.dim(), 4);
        let s = 0.5f64.sqrt();
        let v = SignalStateSpec::from_json(&format!(
            r#"{{"type":"vector","amps":[[{s},0],[0,0],[0,{s}]]}}"#
        ))
        .unwrap();
        assert!(v.is_pure());
        assert!((v.mean_photon_number() - 1.0).abs() < 1e-15);
        let m = SignalStateSpec::from_json(
            r#"{"type":"mixture","components":[
                {"weight":0.25,"state":{"type":"fock","n":0}},
                {"weight":0.75,"state":{"type":"fock","n":2}}]}"#,
        )
        .unwrap();
        assert_eq!(m.components().len(), 2);
        assert!((m.mean_photon_number() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_weights() {
        let bad_sum = r#"{"type":"mixture","components":[
            {"weight":0.5,"state":{"type":"fock","n":0}},
            {"weight":0.4,"state":{"type":"fock","n":1}}]}"#;
        assert!(matches!(SignalStateSpec::from_json(bad_sum), Err(HdError::StateFormat(_))));
        let negative = r#"{"type":"mixture","components":[
            {"weight":1.5,"state":{"type":"fock","n":0}},
            {"weight":-0.5,"state":{"type":"fock","n":1}}]}"#;
        assert!(SignalStateSpec::from_json(negative).is_err());
        assert!(SignalStateSpec::from_json(r#"{"type":"mixture","components":[]}"#).is_err());
    }

    #[test]
    fn rejects_malformed() {
        assert!(SignalStateSpec::from_json(r#"{"type":"squeezed","r":1}"#).is_err());
        assert!(SignalStateSpec::from_json(r#"{"type":"fock"}"#).is_err());
        assert!(SignalStateSpec::from_json(r#"{"type":"vector","amps":[[2,0]]}"#).is_err());
        assert!(SignalStateSpec::from_json("not json").is_err());
    }

    #[test]
    fn weights_within_tolerance_accepted() {
        let m = format!(
            r#"{{"type":"mixture","components":[
            {{"weight":{},"state":{{"type":"fock","n":0}}}},
            {{"weight":0.5,"state":{{"type":"fock","n":1}}}}]}}"#,
            0.5 + 5e-10
        );
        assert!(SignalStateSpec::from_json(&m).is_ok());
    }

    #[test]
    fn list_accepts_single_or_array() {
        let one = SignalStateSpec::list_from_json(r#"{"type":"fock","n":1}"#).unwrap();
        assert_eq!(one.len(), 1);
        let many = SignalStateSpec::list_from_json(
            r#"[{"type":"fock","n":1},{"type":"coherent","beta":[0,1]}]"#,
        )
        .unwrap();
        assert_eq!(many.len(), 2);
        assert!(SignalStateSpec::list_from_json("[]").unwrap().is_empty());
    }

    #[test]
    fn description_round_trips() {
        let d = StateDescription::Mixture {
            components: vec![ComponentDescription {
                weight: 1.0,
                state: StateDescription::Coherent { beta: [0.5, -1.0] },
            }],
        };
        let text = serde_json::to_string(&d).unwrap();
        let back: StateDescription = serde_json::from_str(&text).unwrap();
        assert_eq!(d, back);
    }
}
