use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ffscale::NodeEvent;

/// How a scenario run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Completed,
    /// Node singularities were detected and clamped.
    Clamped,
    /// No real phase solution exists somewhere on the grid.
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EventRecord {
    Singularity { time: f64, component: usize, min_amplitude: f64, left_sign: i8, right_sign: i8 },
    Infeasible { time: f64, reason: String },
}

impl From<&NodeEvent<f64>> for EventRecord {
    fn from(e: &NodeEvent<f64>) -> Self {
        Self::Singularity { time: e.time, component: e.component, min_amplitude: e.min_amplitude, left_sign: e.left_sign, right_sign: e.right_sign }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Named per-grid-point series plus events and scalar diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioResult {
    pub scenario: String,
    pub columns: Vec<Column>,
    pub events: Vec<EventRecord>,
    pub diagnostics: BTreeMap<String, f64>,
    pub outcome: Outcome,
}

impl ScenarioResult {
    pub fn new(scenario: &str) -> Self {
        Self { scenario: scenario.into(), columns: Vec::new(), events: Vec::new(), diagnostics: BTreeMap::new(), outcome: Outcome::Completed }
    }

    pub fn push(&mut self, name: impl Into<String>, values: Vec<f64>) {
        self.columns.push(Column { name: name.into(), values });
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns.iter().find(|c| c.name == name).map(|c| c.values.as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.values.len())
    }

    pub fn diagnostic(&mut self, name: &str, value: f64) {
        self.diagnostics.insert(name.into(), value);
    }

    /// All columns share one length.
    pub fn is_rectangular(&self) -> bool {
        self.columns.iter().all(|c| c.values.len() == self.rows())
    }

    /// No NaN or infinity outside rows flagged singular.
    pub fn is_finite_outside_flags(&self) -> bool {
        let flags = self.column("singular_flag");
        (0..self.rows()).all(|r| flags.is_some_and(|f| f[r] != 0.0) || self.columns.iter().all(|c| c.values[r].is_finite()))
    }
}
