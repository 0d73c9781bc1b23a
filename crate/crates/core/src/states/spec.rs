//! Serializable descriptions of the example states.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::density::{DensityMatrix, PureState};
use crate::error::{Error, Result};
use crate::infinite::fock_report;
use crate::quantifiers::QuantifierReport;

use super::beam_splitter::rotated_number_state;
use super::families::{
    displaced_number_state_with, sg_phase_state, squeezed_coherent_state_with, tmsv_state,
    Construction, TruncatedState, TruncationConfig,
};
use super::{finite_phase_state, qubit_from_bloch};

/// A complex number that reads from JSON as `1.5`, `[re, im]` or
/// `{"re": .., "im": ..}`, and writes as a bare number when real.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ComplexParam(pub Complex64);

impl From<Complex64> for ComplexParam {
    fn from(z: Complex64) -> Self {
        Self(z)
    }
}

impl From<f64> for ComplexParam {
    fn from(x: f64) -> Self {
        Self(Complex64::new(x, 0.0))
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexRepr {
    Real(f64),
    Pair([f64; 2]),
    Parts { re: f64, #[serde(default)] im: f64 },
}

impl<'de> Deserialize<'de> for ComplexParam {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Self(match ComplexRepr::deserialize(d)? {
            ComplexRepr::Real(x) => Complex64::new(x, 0.0),
            ComplexRepr::Pair([re, im]) => Complex64::new(re, im),
            ComplexRepr::Parts { re, im } => Complex64::new(re, im),
        }))
    }
}

impl Serialize for ComplexParam {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.im == 0.0 {
            s.serialize_f64(self.0.re)
        } else {
            [self.0.re, self.0.im].serialize(s)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum StateVariant {
    QubitBloch {
        s: [f64; 3],
    },
    FinitePhase {
        #[serde(rename = "N")]
        n: usize,
        #[serde(default)]
        phases: Vec<f64>,
    },
    RotatedNumber {
        n: u32,
        m: u32,
    },
    SGPhase {
        xi: ComplexParam,
    },
    TMSV {
        xi: ComplexParam,
    },
    SqueezedCoherent {
        #[serde(rename = "R")]
        displacement: f64,
        r: f64,
    },
    DisplacedNumber {
        alpha: ComplexParam,
        n0: usize,
    },
}

/// A state family member plus the truncation used to realize it, e.g.
/// `{"variant": "SqueezedCoherent", "R": 3.0, "r": 0.5, "trunc": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(flatten)]
    pub variant: StateVariant,
    #[serde(default)]
    pub trunc: TruncationConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<Construction>,
}

/// What a [`StateSpec`] builds into.
#[derive(Debug, Clone, PartialEq)]
pub enum BuiltState {
    Mixed(DensityMatrix),
    Pure(PureState),
    Fock(TruncatedState),
}

impl StateSpec {
    pub fn new(variant: StateVariant) -> Self {
        Self {
            variant,
            trunc: TruncationConfig::default(),
            method: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("state spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state specs always serialize")
    }

    /// Replaces the cutoff and/or tail tolerance. A fixed cutoff disables
    /// automatic growth.
    pub fn with_truncation(mut self, dim: Option<usize>, tail_tol: Option<f64>) -> Self {
        if let Some(d) = dim {
            self.trunc.dim = Some(d);
            self.trunc.auto_grow = false;
        }
        if let Some(t) = tail_tol {
            self.trunc.tail_mass_tol = t;
        }
        self
    }

    pub fn build(&self) -> Result<BuiltState> {
        let method = self.method.unwrap_or_default();
        Ok(match &self.variant {
            StateVariant::QubitBloch { s } => BuiltState::Mixed(qubit_from_bloch(*s)?),
            StateVariant::FinitePhase { n, phases } => BuiltState::Pure(finite_phase_state(*n, phases)?),
            StateVariant::RotatedNumber { n, m } => BuiltState::Pure(rotated_number_state(*n, *m)?),
            StateVariant::SGPhase { xi } => BuiltState::Fock(sg_phase_state(xi.0, &self.trunc)?),
            StateVariant::TMSV { xi } => BuiltState::Fock(tmsv_state(xi.0, &self.trunc)?),
            StateVariant::SqueezedCoherent { displacement, r } => BuiltState::Fock(
                squeezed_coherent_state_with(*displacement, *r, &self.trunc, method)?,
            ),
            StateVariant::DisplacedNumber { alpha, n0 } => BuiltState::Fock(
                displaced_number_state_with(alpha.0, *n0, &self.trunc, method)?,
            ),
        })
    }

    /// Builds the state and evaluates every quantifier. Finite states are
    /// measured against `I/N`; Fock-space families against the thermal
    /// reference in its infinite-temperature limit.
    pub fn report(&self) -> Result<QuantifierReport> {
        self.build()?.report()
    }
}

impl BuiltState {
    pub fn report(&self) -> Result<QuantifierReport> {
        match self {
            BuiltState::Mixed(rho) => QuantifierReport::from_density(rho),
            BuiltState::Pure(psi) => QuantifierReport::from_density(&psi.to_density()),
            BuiltState::Fock(t) => fock_report(t),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BuiltState::Mixed(rho) => rho.dim(),
            BuiltState::Pure(psi) => psi.dim(),
            BuiltState::Fock(t) => t.state.dim(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let spec = StateSpec::from_json(r#"{"variant": "SqueezedCoherent", "R": 3.0, "r": 0.5, "trunc": {"tail_mass_tol": 1e-9}}"#).unwrap();
        assert_eq!(
            spec.variant,
            StateVariant::SqueezedCoherent { displacement: 3.0, r: 0.5 }
        );
        assert_eq!(spec.trunc.tail_mass_tol, 1e-9);
        assert!(spec.trunc.auto_grow);
    }

    #[test]
    fn complex_forms() {
        for text in [
            r#"{"variant": "SGPhase", "xi": 0.5}"#,
            r#"{"variant": "SGPhase", "xi": [0.5, 0.0]}"#,
            r#"{"variant": "SGPhase", "xi": {"re": 0.5, "im": 0.0}}"#,
        ] {
            let spec = StateSpec::from_json(text).unwrap();
            assert_eq!(spec.variant, StateVariant::SGPhase { xi: 0.5.into() });
        }
    }

    #[test]
    fn json_round_trip() {
        let spec = StateSpec::new(StateVariant::DisplacedNumber {
            alpha: Complex64::new(1.0, -2.0).into(),
            n0: 2,
        });
        assert_eq!(StateSpec::from_json(&spec.to_json()).unwrap(), spec);
    }

    #[test]
    fn rejects_unknown_variant_and_bad_values() {
        assert!(matches!(
            StateSpec::from_json(r#"{"variant": "Cat", "alpha": 1}"#),
            Err(Error::Parse(_))
        ));
        let bad = StateSpec::from_json(r#"{"variant": "TMSV", "xi": 1.0}"#).unwrap();
        assert!(matches!(bad.build(), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn reports_for_documented_examples() {
        let q = StateSpec::from_json(r#"{"variant": "QubitBloch", "s": [1, 0, 0]}"#).unwrap();
        assert!((q.report().unwrap().c_h - 1.0).abs() < 1e-14);
        let p = StateSpec::from_json(r#"{"variant": "FinitePhase", "N": 4}"#).unwrap();
        assert!((p.report().unwrap().nc_h - 3.0).abs() < 1e-12);
        let sg = StateSpec::from_json(r#"{"variant": "SGPhase", "xi": 0.5}"#).unwrap();
        assert!((sg.report().unwrap().c_h - 2.0).abs() < 1e-9);
    }
}
