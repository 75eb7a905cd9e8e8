use alloc::string::String;

/// Which discrepancy the pass threshold applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Measure {
    Absolute,
    Relative,
}

/// Outcome of one property check. `passed` holds iff the selected
/// discrepancy is `<= threshold`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropertyReport {
    pub name: String,
    pub samples: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    pub threshold: f64,
    pub measure: Measure,
    pub passed: bool,
}

impl PropertyReport {
    pub fn discrepancy(&self) -> f64 {
        match self.measure {
            Measure::Absolute => self.max_abs,
            Measure::Relative => self.max_rel,
        }
    }
}

/// Collects discrepancies into a [`PropertyReport`].
#[derive(Debug, Clone)]
pub struct Tally {
    name: String,
    samples: usize,
    max_abs: f64,
    max_rel: f64,
    threshold: f64,
    measure: Measure,
    failed_eval: bool,
}

impl Tally {
    pub fn new(name: &str, threshold: f64, measure: Measure) -> Self {
        Self {
            name: name.into(),
            samples: 0,
            max_abs: 0.0,
            max_rel: 0.0,
            threshold,
            measure,
            failed_eval: false,
        }
    }

    /// Record `|got - want|`, relative to `max(|scale|, floor)`.
    pub fn record(&mut self, got: f64, want: f64, scale: f64) {
        let diff = (got - want).abs();
        let diff = if diff.is_nan() { f64::INFINITY } else { diff };
        self.samples += 1;
        self.max_abs = self.max_abs.max(diff);
        let denom = scale.abs();
        let rel = if diff == 0.0 {
            0.0
        } else if denom == 0.0 {
            f64::INFINITY
        } else {
            diff / denom
        };
        self.max_rel = self.max_rel.max(rel);
    }

    pub fn record_slices(&mut self, got: &[f64], want: &[f64], scale: f64) {
        for (g, w) in got.iter().zip(want) {
            self.record(*g, *w, scale);
        }
    }

    /// Record a ratio that must stay `<= threshold`; kept in both fields.
    pub fn record_value(&mut self, v: f64) {
        let v = if v.is_nan() { f64::INFINITY } else { v };
        self.samples += 1;
        self.max_abs = self.max_abs.max(v);
        self.max_rel = self.max_rel.max(v);
    }

    /// Mark the property failed because an evaluation errored.
    pub fn fail(&mut self) {
        self.failed_eval = true;
    }

    pub fn finish(self) -> PropertyReport {
        let d = match self.measure {
            Measure::Absolute => self.max_abs,
            Measure::Relative => self.max_rel,
        };
        PropertyReport {
            passed: !self.failed_eval && d <= self.threshold,
            name: self.name,
            samples: self.samples,
            max_abs: self.max_abs,
            max_rel: self.max_rel,
            threshold: self.threshold,
            measure: self.measure,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_flag_follows_threshold() {
        let mut t = Tally::new("x", 1e-3, Measure::Relative);
        t.record(1.0005, 1.0, 1.0);
        assert!(t.clone().finish().passed);
        t.record(2.0, 1.0, 1.0);
        let r = t.finish();
        assert!(!r.passed);
        assert_eq!(r.samples, 2);
        assert_eq!(r.discrepancy(), 1.0);
        let mut t = Tally::new("y", 1.0, Measure::Absolute);
        t.record(f64::NAN, 0.0, 1.0);
        assert!(!t.finish().passed);
    }
}
