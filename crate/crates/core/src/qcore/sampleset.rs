use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Grid;
use crate::{Error, Result};

/// Half-open interval `[lo, hi)`; either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY
        {
            return Err(Error::InvalidSet(format!("bad interval [{lo}, {hi})")));
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x < self.hi
    }

    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }
}

// Infinite endpoints travel through JSON as `null`.
#[derive(Serialize, Deserialize)]
struct RawInterval {
    lo: Option<f64>,
    hi: Option<f64>,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawInterval {
            lo: self.lo.is_finite().then_some(self.lo),
            hi: self.hi.is_finite().then_some(self.hi),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInterval::deserialize(d)?;
        Interval::new(
            raw.lo.unwrap_or(f64::NEG_INFINITY),
            raw.hi.unwrap_or(f64::INFINITY),
        )
        .map_err(serde::de::Error::custom)
    }
}

/// A finite union of disjoint half-open intervals, or the whole line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleSet {
    Full,
    Intervals(Vec<Interval>),
}

/// Outcome of aligning a set with grid-cell boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapped {
    pub set: SampleSet,
    pub max_displacement: f64,
}

impl SampleSet {
    pub fn full() -> Self {
        SampleSet::Full
    }

    pub fn empty() -> Self {
        SampleSet::Intervals(Vec::new())
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Ok(SampleSet::Intervals(vec![Interval::new(lo, hi)?]))
    }

    /// `[a, ∞)`.
    pub fn above(a: f64) -> Self {
        SampleSet::Intervals(vec![Interval { lo: a, hi: f64::INFINITY }])
    }

    /// `(−∞, a)`.
    pub fn below(a: f64) -> Self {
        SampleSet::Intervals(vec![Interval { lo: f64::NEG_INFINITY, hi: a }])
    }

    /// Builds a set from intervals, sorting them and rejecting overlaps.
    /// Touching intervals are merged.
    pub fn from_intervals(mut parts: Vec<Interval>) -> Result<Self> {
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            Interval::new(p.lo, p.hi)?;
            if let Some(last) = out.last_mut() {
                if p.lo < last.hi {
                    return Err(Error::InvalidSet(format!(
                        "intervals [{}, {}) and [{}, {}) overlap",
                        last.lo, last.hi, p.lo, p.hi
                    )));
                }
                if p.lo == last.hi {
                    last.hi = p.hi;
                    continue;
                }
            }
            out.push(p);
        }
        if out.len() == 1 && out[0].lo == f64::NEG_INFINITY && out[0].hi == f64::INFINITY {
            return Ok(SampleSet::Full);
        }
        Ok(SampleSet::Intervals(out))
    }

    pub fn is_full(&self) -> bool {
        matches!(self, SampleSet::Full)
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, SampleSet::Intervals(v) if v.is_empty())
    }

    /// The intervals making up the set; the full line is one interval.
    pub fn intervals(&self) -> Vec<Interval> {
        match self {
            SampleSet::Full => vec![Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY }],
            SampleSet::Intervals(v) => v.clone(),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        match self {
            SampleSet::Full => true,
            SampleSet::Intervals(v) => v.iter().any(|i| i.contains(x)),
        }
    }

    pub fn is_bounded(&self) -> bool {
        match self {
            SampleSet::Full => false,
            SampleSet::Intervals(v) => v.iter().all(Interval::is_bounded),
        }
    }

    /// Lebesgue measure, possibly infinite.
    pub fn total_length(&self) -> f64 {
        self.intervals().iter().map(Interval::length).sum()
    }

    pub fn complement(&self) -> SampleSet {
        let mut out = Vec::new();
        let mut cursor = f64::NEG_INFINITY;
        for i in self.intervals() {
            if i.lo > cursor {
                out.push(Interval { lo: cursor, hi: i.lo });
            }
            cursor = i.hi;
        }
        if cursor < f64::INFINITY {
            out.push(Interval { lo: cursor, hi: f64::INFINITY });
        }
        SampleSet::from_intervals(out).expect("complement of a valid set is valid")
    }

    pub fn intersect(&self, other: &SampleSet) -> SampleSet {
        let mut out = Vec::new();
        for a in self.intervals() {
            for b in other.intervals() {
                let lo = a.lo.max(b.lo);
                let hi = a.hi.min(b.hi);
                if lo < hi {
                    out.push(Interval { lo, hi });
                }
            }
        }
        SampleSet::from_intervals(out).expect("intersection of valid sets is valid")
    }

    /// Union of two disjoint sets.
    pub fn disjoint_union(&self, other: &SampleSet) -> Result<SampleSet> {
        let mut parts = self.intervals();
        parts.extend(other.intervals());
        SampleSet::from_intervals(parts)
    }

    pub fn is_disjoint(&self, other: &SampleSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// 0/1 values of the indicator at the grid points.
    pub fn indicator(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.n_points())
            .map(|i| if self.contains(grid.x(i)) { 1.0 } else { 0.0 })
            .collect()
    }

    /// Moves every finite endpoint to the nearest grid-cell edge and reports
    /// the largest displacement (never more than `dx/2`).
    pub fn snap(&self, grid: &Grid) -> Snapped {
        match self {
            SampleSet::Full => Snapped { set: SampleSet::Full, max_displacement: 0.0 },
            SampleSet::Intervals(v) => {
                let dx = grid.dx();
                let mut worst = 0.0f64;
                let mut snap = |e: f64| -> f64 {
                    if !e.is_finite() {
                        return e;
                    }
                    let s = grid.x_min() + ((e - grid.x_min()) / dx).round() * dx;
                    worst = worst.max((s - e).abs());
                    s
                };
                let parts: Vec<Interval> = v
                    .iter()
                    .filter_map(|i| {
                        let lo = snap(i.lo);
                        let hi = snap(i.hi);
                        (lo < hi).then_some(Interval { lo, hi })
                    })
                    .collect();
                Snapped {
                    set: SampleSet::from_intervals(parts).expect("snapping keeps order"),
                    max_displacement: worst,
                }
            }
        }
    }
}
