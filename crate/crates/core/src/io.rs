//! Strategy file format: one JSON document per mixed strategy, with the
//! shared state at the top level and per-branch angles below it.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenario::{
    make_state, DeterministicBranch, InstrumentSetting, MeasurementKind, PlanarObservable,
    ProjectiveInstrument, SequentialStrategy, StateKind, UnitaryOp,
};
use crate::{Error, Result};

/// Shared initial state.
///
/// Deserialized through a raw struct because tagged enums skip unknown
/// field rejection.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(
    tag = "kind",
    rename_all = "snake_case",
    try_from = "StateSpecRaw"
)]
pub enum StateSpec {
    MaximallyEntangled,
    Partial { ent_angle: f64 },
    Isotropic { visibility: f64 },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSpecRaw {
    kind: String,
    #[serde(default)]
    ent_angle: Option<f64>,
    #[serde(default)]
    visibility: Option<f64>,
}

impl TryFrom<StateSpecRaw> for StateSpec {
    type Error = String;

    fn try_from(raw: StateSpecRaw) -> std::result::Result<Self, String> {
        let reject_params = |raw: &StateSpecRaw, allowed: &str| -> std::result::Result<(), String> {
            if raw.ent_angle.is_some() && allowed != "ent_angle" {
                return Err(format!("state kind `{}` takes no ent_angle", raw.kind));
            }
            if raw.visibility.is_some() && allowed != "visibility" {
                return Err(format!("state kind `{}` takes no visibility", raw.kind));
            }
            Ok(())
        };
        match raw.kind.as_str() {
            "maximally_entangled" => {
                reject_params(&raw, "")?;
                Ok(StateSpec::MaximallyEntangled)
            }
            "partial" => {
                reject_params(&raw, "ent_angle")?;
                let ent_angle = raw
                    .ent_angle
                    .ok_or_else(|| "partial state needs `ent_angle`".to_string())?;
                Ok(StateSpec::Partial { ent_angle })
            }
            "isotropic" => {
                reject_params(&raw, "visibility")?;
                let visibility = raw
                    .visibility
                    .ok_or_else(|| "isotropic state needs `visibility`".to_string())?;
                Ok(StateSpec::Isotropic { visibility })
            }
            other => Err(format!("unknown state kind `{other}`")),
        }
    }
}

impl From<StateSpec> for StateKind {
    fn from(spec: StateSpec) -> Self {
        match spec {
            StateSpec::MaximallyEntangled => StateKind::MaximallyEntangled,
            StateSpec::Partial { ent_angle } => StateKind::Partial { ent_angle },
            StateSpec::Isotropic { visibility } => StateKind::Isotropic { visibility },
        }
    }
}

impl From<StateKind> for StateSpec {
    fn from(kind: StateKind) -> Self {
        match kind {
            StateKind::MaximallyEntangled => StateSpec::MaximallyEntangled,
            StateKind::Partial { ent_angle } => StateSpec::Partial { ent_angle },
            StateKind::Isotropic { visibility } => StateSpec::Isotropic { visibility },
        }
    }
}

/// Outcome-conditioned rotation, axis-angle form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitarySpec {
    pub axis: [f64; 3],
    pub angle: f64,
}

/// Measurement class of one relay setting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankSpec {
    Basis,
    TrivialZero,
    TrivialOne,
}

/// One input's setting: its class, the basis angle where applicable, and
/// the per-outcome rotations (identity when omitted).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingSpec {
    pub rank: RankSpec,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub angle: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unitaries: Option<[UnitarySpec; 2]>,
}

/// One deterministic branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchSpec {
    pub weight: f64,
    pub a_angles: [f64; 2],
    /// instruments[party][input]
    pub instruments: Vec<[SettingSpec; 2]>,
    pub final_angles: [f64; 2],
}

/// The on-disk document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyFile {
    pub state: StateSpec,
    pub branches: Vec<BranchSpec>,
}

fn setting_from_spec(spec: &SettingSpec) -> Result<InstrumentSetting> {
    let base = match spec.rank {
        RankSpec::Basis => {
            let angle = spec.angle.ok_or_else(|| {
                Error::Schema("basis setting needs an `angle` field".into())
            })?;
            InstrumentSetting::basis(angle)?
        }
        RankSpec::TrivialZero | RankSpec::TrivialOne => {
            if spec.angle.is_some() {
                return Err(Error::Schema(
                    "trivial settings take no `angle` field".into(),
                ));
            }
            if spec.rank == RankSpec::TrivialZero {
                InstrumentSetting::trivial_zero()
            } else {
                InstrumentSetting::trivial_one()
            }
        }
    };
    match spec.unitaries {
        None => Ok(base),
        Some(units) => {
            let u0 = UnitaryOp::new(units[0].axis, units[0].angle)?;
            let u1 = UnitaryOp::new(units[1].axis, units[1].angle)?;
            Ok(base.with_unitaries([u0, u1]))
        }
    }
}

fn setting_to_spec(setting: &InstrumentSetting) -> SettingSpec {
    let (rank, angle) = match setting.kind {
        MeasurementKind::Basis(obs) => (RankSpec::Basis, Some(obs.angle())),
        MeasurementKind::TrivialZero => (RankSpec::TrivialZero, None),
        MeasurementKind::TrivialOne => (RankSpec::TrivialOne, None),
    };
    let unitaries = setting.unitaries.map(|u| UnitarySpec {
        axis: u.axis,
        angle: u.angle,
    });
    SettingSpec {
        rank,
        angle,
        unitaries: Some(unitaries),
    }
}

impl StrategyFile {
    /// Builds the domain strategy; schema-level defects surface as
    /// [`Error::Schema`], domain invariants via the scenario checks.
    pub fn to_strategy(&self) -> Result<SequentialStrategy> {
        let state = make_state(self.state.into())?;
        let mut weighted = Vec::with_capacity(self.branches.len());
        for branch in &self.branches {
            let mut instruments = Vec::with_capacity(branch.instruments.len());
            for party in &branch.instruments {
                let s0 = setting_from_spec(&party[0])?;
                let s1 = setting_from_spec(&party[1])?;
                instruments.push(ProjectiveInstrument::new([s0, s1]));
            }
            weighted.push((
                branch.weight,
                DeterministicBranch {
                    state: state.clone(),
                    a_observables: [
                        PlanarObservable::new(branch.a_angles[0])?,
                        PlanarObservable::new(branch.a_angles[1])?,
                    ],
                    instruments,
                    final_observables: [
                        PlanarObservable::new(branch.final_angles[0])?,
                        PlanarObservable::new(branch.final_angles[1])?,
                    ],
                },
            ));
        }
        SequentialStrategy::new(weighted)
    }

    /// Captures a strategy whose branches all start from `make_state(kind)`.
    pub fn from_strategy(kind: StateKind, strategy: &SequentialStrategy) -> Result<Self> {
        let reference = make_state(kind)?;
        let mut branches = Vec::with_capacity(strategy.branches().len());
        for weighted in strategy.branches() {
            let branch = &weighted.branch;
            if branch.state.rho().max_abs_diff(reference.rho()) > 1e-12 {
                return Err(Error::InvalidArgument(
                    "branch state does not match the declared state kind".into(),
                ));
            }
            branches.push(BranchSpec {
                weight: weighted.weight,
                a_angles: [
                    branch.a_observables[0].angle(),
                    branch.a_observables[1].angle(),
                ],
                instruments: branch
                    .instruments
                    .iter()
                    .map(|inst| {
                        [
                            setting_to_spec(&inst.settings[0]),
                            setting_to_spec(&inst.settings[1]),
                        ]
                    })
                    .collect(),
                final_angles: [
                    branch.final_observables[0].angle(),
                    branch.final_observables[1].angle(),
                ],
            });
        }
        Ok(Self {
            state: kind.into(),
            branches,
        })
    }
}

/// Parses a document; malformed JSON or shape mismatches are schema
/// errors, domain violations keep their own kinds.
pub fn parse_strategy(json: &str) -> Result<StrategyFile> {
    serde_json::from_str(json).map_err(|e| Error::Schema(e.to_string()))
}

pub fn render_strategy(file: &StrategyFile) -> String {
    serde_json::to_string_pretty(file).expect("strategy files serialize")
}

pub fn load_strategy(path: &Path) -> Result<StrategyFile> {
    let text = std::fs::read_to_string(path)?;
    parse_strategy(&text)
}

pub fn save_strategy(path: &Path, file: &StrategyFile) -> Result<()> {
    std::fs::write(path, render_strategy(file))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::scenario::evaluate_strategy;

    #[test]
    fn round_trip_preserves_catalog_values() {
        for id in catalog::STRATEGY_IDS {
            let strategy = catalog::from_id(id, catalog::CatalogParams::default()).unwrap();
            let point = evaluate_strategy(&strategy).unwrap();
            let kind = if id.starts_with("partial.") {
                StateKind::Partial { ent_angle: std::f64::consts::FRAC_PI_8 }
            } else {
                StateKind::MaximallyEntangled
            };
            let file = StrategyFile::from_strategy(kind, &strategy).unwrap();
            let json = render_strategy(&file);
            let parsed = parse_strategy(&json).unwrap();
            assert_eq!(parsed, file, "document drift for {id}");
            let rebuilt = parsed.to_strategy().unwrap();
            let again = evaluate_strategy(&rebuilt).unwrap();
            for (a, b) in point.values().iter().zip(again.values()) {
                assert!((a - b).abs() <= 1e-12, "{id}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn unknown_fields_are_schema_errors() {
        let json = r#"{"state":{"kind":"maximally_entangled"},"branches":[],"extra":1}"#;
        assert!(matches!(parse_strategy(json), Err(Error::Schema(_))));

        let json = r#"{"state":{"kind":"maximally_entangled","spin":3},"branches":[]}"#;
        assert!(matches!(parse_strategy(json), Err(Error::Schema(_))));
    }

    #[test]
    fn basis_without_angle_is_a_schema_error() {
        let json = r#"{
            "state": {"kind": "maximally_entangled"},
            "branches": [{
                "weight": 1.0,
                "a_angles": [0.785398163397, 5.497787143782],
                "instruments": [[{"rank": "basis"}, {"rank": "trivial_zero"}]],
                "final_angles": [0.0, 1.570796326794]
            }]
        }"#;
        let file = parse_strategy(json).unwrap();
        assert!(matches!(file.to_strategy(), Err(Error::Schema(_))));
    }

    #[test]
    fn trivial_with_angle_is_a_schema_error() {
        let json = r#"{
            "state": {"kind": "maximally_entangled"},
            "branches": [{
                "weight": 1.0,
                "a_angles": [0.0, 1.5707963267948966],
                "instruments": [[{"rank": "trivial_zero", "angle": 0.3},
                                 {"rank": "basis", "angle": 1.5707963267948966}]],
                "final_angles": [0.0, 1.5707963267948966]
            }]
        }"#;
        let file = parse_strategy(json).unwrap();
        assert!(matches!(file.to_strategy(), Err(Error::Schema(_))));
    }

    #[test]
    fn bad_weights_are_invariant_errors_not_schema_errors() {
        let json = r#"{
            "state": {"kind": "maximally_entangled"},
            "branches": [{
                "weight": 0.9,
                "a_angles": [0.785398163397448, 5.49778714378214],
                "instruments": [[{"rank": "basis", "angle": 0.0},
                                 {"rank": "basis", "angle": 1.5707963267948966}]],
                "final_angles": [0.0, 1.5707963267948966]
            }]
        }"#;
        let file = parse_strategy(json).unwrap();
        assert!(matches!(
            file.to_strategy(),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn state_kind_mismatch_is_rejected_on_save() {
        let strategy = catalog::from_id("tsirelson", catalog::CatalogParams::default()).unwrap();
        assert!(matches!(
            StrategyFile::from_strategy(
                StateKind::Partial { ent_angle: 0.3 },
                &strategy
            ),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn files_survive_disk_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("strategy.json");
        let strategy = catalog::from_id("appendixC", catalog::CatalogParams::default()).unwrap();
        let file = StrategyFile::from_strategy(StateKind::MaximallyEntangled, &strategy).unwrap();
        save_strategy(&path, &file).unwrap();
        let loaded = load_strategy(&path).unwrap();
        assert_eq!(loaded, file);

        assert!(matches!(
            load_strategy(&dir.path().join("missing.json")),
            Err(Error::Io(_))
        ));
    }
}
