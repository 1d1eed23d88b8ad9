use serde::{Deserialize, Serialize};

use crate::qcore::{Grid, SampleSet};
use crate::{Error, Result};

/// One slot of a history: the set `U_k` recorded at time `t_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub time: f64,
    pub set: SampleSet,
}

/// Time-ordered list of `(t_k, U_k)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<HistoryEntry>", into = "Vec<HistoryEntry>")]
pub struct HistorySpec {
    entries: Vec<HistoryEntry>,
}

impl TryFrom<Vec<HistoryEntry>> for HistorySpec {
    type Error = Error;
    fn try_from(v: Vec<HistoryEntry>) -> Result<Self> {
        HistorySpec::new(v.into_iter().map(|e| (e.time, e.set)).collect())
    }
}

impl From<HistorySpec> for Vec<HistoryEntry> {
    fn from(h: HistorySpec) -> Self {
        h.entries
    }
}

impl HistorySpec {
    pub fn new(entries: Vec<(f64, SampleSet)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidHistory("a history needs at least one entry".into()));
        }
        for w in entries.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidHistory(format!(
                    "times must increase strictly, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some((t, _)) = entries.iter().find(|(_, s)| s.is_empty()) {
            return Err(Error::InvalidHistory(format!("empty set at t = {t}")));
        }
        if entries.iter().any(|(t, _)| !t.is_finite()) {
            return Err(Error::InvalidHistory("non-finite time".into()));
        }
        Ok(Self {
            entries: entries.into_iter().map(|(time, set)| HistoryEntry { time, set }).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn times(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.time).collect()
    }

    pub fn set(&self, k: usize) -> &SampleSet {
        &self.entries[k].set
    }

    /// Copy with slot `k` replaced by `set`. An empty `set` is refused.
    pub fn with_set(&self, k: usize, set: SampleSet) -> Result<Self> {
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut out = self.clone();
        out.entries
            .get_mut(k)
            .ok_or_else(|| Error::InvalidHistory(format!("no slot {k}")))?
            .set = set;
        Ok(out)
    }

    /// Copy with slot `k` removed.
    pub fn without_slot(&self, k: usize) -> Result<Self> {
        if k >= self.len() || self.len() == 1 {
            return Err(Error::InvalidHistory(format!("cannot remove slot {k}")));
        }
        let mut out = self.clone();
        out.entries.remove(k);
        Ok(out)
    }

    pub fn same_times(&self, other: &HistorySpec) -> bool {
        self.len() == other.len()
            && self.entries.iter().zip(&other.entries).all(|(a, b)| a.time == b.time)
    }

    /// Joins two histories that agree everywhere except one slot where their
    /// sets are disjoint.
    pub fn join(&self, other: &HistorySpec) -> Result<Self> {
        if !self.same_times(other) {
            return Err(Error::TimeGridMismatch);
        }
        let differing: Vec<usize> =
            (0..self.len()).filter(|&k| self.set(k) != other.set(k)).collect();
        match differing.as_slice() {
            [k] => {
                let (a, b) = (self.set(*k), other.set(*k));
                if !a.is_disjoint(b) {
                    return Err(Error::NotJoinable(format!("sets at slot {k} overlap")));
                }
                self.with_set(*k, a.disjoint_union(b)?)
            }
            _ => Err(Error::NotJoinable(format!(
                "histories differ in {} slots, exactly one is required",
                differing.len()
            ))),
        }
    }

    /// Snaps every set to grid-cell edges; returns the largest displacement.
    pub fn snapped(&self, grid: &Grid) -> (Self, f64) {
        let mut worst = 0.0f64;
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let s = e.set.snap(grid);
                worst = worst.max(s.max_displacement);
                HistoryEntry { time: e.time, set: s.set }
            })
            .collect();
        (Self { entries }, worst)
    }
}

/// Which operators represent a recorded set at one slot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PovmKind {
    /// Sharp projectors resolving cells `[kδ, (k+1)δ)`.
    SharpGrid { delta: f64 },
    /// Gaussian effects of width δ entering through their square roots.
    GaussianSqrt { delta: f64 },
    /// Sharp spectral projectors of position onto the recorded sets.
    DiscreteSpectral,
}

impl PovmKind {
    pub fn delta(&self) -> Option<f64> {
        match self {
            PovmKind::SharpGrid { delta } | PovmKind::GaussianSqrt { delta } => Some(*delta),
            PovmKind::DiscreteSpectral => None,
        }
    }

    pub(crate) fn validate(&self, grid: &Grid) -> Result<()> {
        match *self {
            PovmKind::DiscreteSpectral => Ok(()),
            PovmKind::GaussianSqrt { delta } => {
                if !(delta > 0.0) {
                    return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
                }
                if delta < 2.0 * grid.dx() {
                    return Err(Error::UnderResolved { delta, dx: grid.dx() });
                }
                Ok(())
            }
            PovmKind::SharpGrid { delta } => {
                if !(delta > 0.0) {
                    return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
                }
                let dx = grid.dx();
                let ratio = delta / dx;
                let offset = grid.x_min() / dx;
                if ratio < 1.0 - 1e-9
                    || (ratio - ratio.round()).abs() > 1e-9
                    || (offset - offset.round()).abs() > 1e-9
                {
                    return Err(Error::UnderResolved { delta, dx });
                }
                Ok(())
            }
        }
    }
}
