//! JSON system specification.
//!
//! ```json
//! {
//!   "alpha": [0.3333333333333333, 0.5],
//!   "A": [[0.0, 0.25], [-2.0, 1.0]],
//!   "forcing": "paper",
//!   "nonlinearity": { "x1": [[1.0, 2, 2]], "x2": [[1.0, 2, 0], [1.0, 0, 2]] },
//!   "allow_equal_orders": false
//! }
//! ```
//!
//! `forcing` is `"paper"`, `"none"` or `{"table": [[t, f1, f2], ...]}` and
//! defaults to `"none"`. Each nonlinearity term is `[coef, p1, p2]` for
//! `coef · x1^p1 · x2^p2`. Unknown keys are rejected. See `docs/spec-format.md`.

use std::path::Path;

use anyhow::{Context, Result};
use fracplanar_core::system::PolyTerm;
use fracplanar_core::{Forcing, FracOrders, Nonlinearity, PlanarSystem};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub alpha: [f64; 2],
    #[serde(rename = "A")]
    pub matrix: [[f64; 2]; 2],
    #[serde(default)]
    pub forcing: ForcingSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<NonlinearitySpec>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_equal_orders: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForcingKeyword {
    Paper,
    #[default]
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ForcingTable {
    pub table: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ForcingSpec {
    Keyword(ForcingKeyword),
    Table(ForcingTable),
}

impl Default for ForcingSpec {
    fn default() -> Self {
        ForcingSpec::Keyword(ForcingKeyword::None)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    #[serde(default)]
    pub x1: Vec<(f64, u32, u32)>,
    #[serde(default)]
    pub x2: Vec<(f64, u32, u32)>,
}

impl SystemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid system spec")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialises")
    }

    /// The validated system described by this spec.
    pub fn to_system(&self) -> Result<PlanarSystem> {
        let orders = FracOrders::with_flag(self.alpha[0], self.alpha[1], self.allow_equal_orders)?;
        let mut system = PlanarSystem::new(self.matrix, orders);
        match &self.forcing {
            ForcingSpec::Keyword(ForcingKeyword::None) => {}
            ForcingSpec::Keyword(ForcingKeyword::Paper) => system = system.with_forcing(Forcing::Paper),
            ForcingSpec::Table(t) => system = system.with_forcing(Forcing::Table(t.table.clone())),
        }
        if let Some(n) = &self.nonlinearity {
            let terms = |v: &[(f64, u32, u32)]| v.iter().map(|&(c, p1, p2)| PolyTerm::new(c, p1, p2)).collect();
            let f = Nonlinearity::new(terms(&n.x1), terms(&n.x2));
            if !f.is_zero() {
                system = system.with_nonlinearity(f);
            }
        }
        Ok(system.validate()?)
    }

    /// Spec of a system (the inverse of [`SystemSpec::to_system`]).
    pub fn from_system(system: &PlanarSystem) -> Self {
        let forcing = match &system.forcing {
            None => ForcingSpec::Keyword(ForcingKeyword::None),
            Some(Forcing::Paper) => ForcingSpec::Keyword(ForcingKeyword::Paper),
            Some(Forcing::Table(t)) => ForcingSpec::Table(ForcingTable { table: t.clone() }),
        };
        let nonlinearity = system.nonlinearity.as_ref().map(|f| {
            let terms = |i: usize| f.terms[i].iter().map(|t| (t.coef, t.p1, t.p2)).collect();
            NonlinearitySpec { x1: terms(0), x2: terms(1) }
        });
        SystemSpec {
            alpha: [system.orders.alpha1(), system.orders.alpha2()],
            matrix: system.matrix,
            forcing,
            nonlinearity,
            allow_equal_orders: system.orders.is_commensurate(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fracplanar_core::catalog::example;

    #[test]
    fn catalog_round_trip() {
        for n in 1..=8 {
            let ex = example(n).unwrap();
            let spec = SystemSpec::from_system(&ex.system);
            let back = SystemSpec::from_json(&spec.to_json()).unwrap();
            assert_eq!(back.to_system().unwrap(), ex.system, "example {n}");
        }
    }

    #[test]
    fn forcing_defaults_to_none() {
        let s = SystemSpec::from_json(r#"{"alpha": [0.3, 0.6], "A": [[-1, 0], [0, -1]]}"#).unwrap();
        assert!(s.to_system().unwrap().forcing.is_none());
    }

    #[test]
    fn table_forcing_parses() {
        let s = SystemSpec::from_json(
            r#"{"alpha": [0.3, 0.6], "A": [[-1, 0], [0, -1]], "forcing": {"table": [[0, 1, 0], [2, 0, 0]]}}"#,
        )
        .unwrap();
        assert!(matches!(s.to_system().unwrap().forcing, Some(Forcing::Table(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(SystemSpec::from_json(r#"{"alpha": [0.3, 0.6], "A": [[1, 0], [0, 1]], "beta": 1}"#).is_err());
        assert!(SystemSpec::from_json(r#"{"alpha": [0.3, 0.6], "A": [[1, 0], [0, 1]], "forcing": "sine"}"#).is_err());
        assert!(SystemSpec::from_json(r#"{"alpha": [0.3, 0.6], "A": [[1, 0], [0, 1]], "nonlinearity": {"x3": []}}"#)
            .is_err());
    }

    #[test]
    fn validation_errors_surface() {
        let linear_term = r#"{"alpha": [0.3, 0.6], "A": [[1, 0], [0, 1]], "nonlinearity": {"x1": [[1.0, 1, 0]]}}"#;
        assert!(SystemSpec::from_json(linear_term).unwrap().to_system().is_err());
        let equal = r#"{"alpha": [0.5, 0.5], "A": [[1, 0], [0, 1]]}"#;
        assert!(SystemSpec::from_json(equal).unwrap().to_system().is_err());
        let flagged = r#"{"alpha": [0.5, 0.5], "A": [[1, 0], [0, 1]], "allow_equal_orders": true}"#;
        assert!(SystemSpec::from_json(flagged).unwrap().to_system().is_ok());
    }
}
