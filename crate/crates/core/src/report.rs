//! Assertion records: a measured value, the bound it is held to, and the
//! outcome, together with the inputs that produced it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// How `value` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value < bound`.
    Below,
    /// `value > bound`.
    Above,
    /// `|value − target| < bound`.
    Near,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assertion {
    pub name: String,
    pub relation: Relation,
    pub value: f64,
    /// Threshold for `Below`/`Above`, tolerance for `Near`.
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub target: Option<f64>,
    pub pass: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub inputs: BTreeMap<String, f64>,
}

impl Assertion {
    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::build(name, Relation::Below, value, bound, None, value < bound)
    }

    pub fn above(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self::build(name, Relation::Above, value, bound, None, value > bound)
    }

    pub fn near(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::build(name, Relation::Near, value, tol, Some(target), (value - target).abs() < tol)
    }

    /// Boolean property recorded as `1` or `0` against the bound `0.5`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::build(name, Relation::Above, if ok { 1.0 } else { 0.0 }, 0.5, None, ok)
    }

    fn build(
        name: impl Into<String>,
        relation: Relation,
        value: f64,
        tolerance: f64,
        target: Option<f64>,
        pass: bool,
    ) -> Self {
        Self { name: name.into(), relation, value, tolerance, target, pass, inputs: BTreeMap::new() }
    }

    pub fn with_input(mut self, key: impl Into<String>, v: f64) -> Self {
        self.inputs.insert(key.into(), v);
        self
    }
}

/// Assertions of one scenario run, in evaluation order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scenario: String,
    pub assertions: Vec<Assertion>,
}

impl Report {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self { scenario: scenario.into(), assertions: Vec::new() }
    }

    pub fn push(&mut self, a: Assertion) {
        self.assertions.push(a);
    }

    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Assertion> {
        self.assertions.iter().filter(|a| !a.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Assertion> {
        self.assertions.iter().find(|a| a.name == name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Assertion::below("a", 1e-7, 1e-6).pass);
        assert!(!Assertion::below("a", 1e-6, 1e-6).pass);
        assert!(Assertion::above("b", 0.2, 0.1).pass);
        assert!(Assertion::near("c", 0.49, 0.5, 0.05).pass);
        assert!(!Assertion::near("c", f64::NAN, 0.5, 0.05).pass);
        let mut r = Report::new("x");
        r.push(Assertion::holds("d", true));
        r.push(Assertion::holds("e", false));
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("x");
        r.push(Assertion::near("c", 0.1 + 0.2, 0.3, 1e-12).with_input("delta", 0.05));
        let s = serde_json::to_string(&r).unwrap();
        let back: Report = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
