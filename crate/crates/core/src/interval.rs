//! Finite unions of half-open subintervals of the unit interval.
//!
//! Half-open spans `[a, b)` tile without double counting: every point of
//! [0, 1) belongs to exactly one side of any boundary, so set algebra and
//! Lebesgue measure stay exact at the f64 endpoints themselves. This is the
//! substrate for the hidden-variable response sets, whose measures must
//! match trigonometric probabilities to 1e-12.

use serde::Serialize;

/// A finite union of half-open intervals `[a, b)` inside `[0, 1)`, kept
/// sorted, pairwise disjoint, and non-adjacent.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct IntervalSet {
    spans: Vec<(f64, f64)>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { spans: Vec::new() }
    }

    /// The whole unit interval `[0, 1)`.
    pub fn unit() -> Self {
        IntervalSet {
            spans: vec![(0.0, 1.0)],
        }
    }

    /// A single span `[lo, hi)`, clamped into `[0, 1]`; empty if `lo >= hi`.
    pub fn span(lo: f64, hi: f64) -> Self {
        let lo = lo.clamp(0.0, 1.0);
        let hi = hi.clamp(0.0, 1.0);
        if lo < hi {
            IntervalSet {
                spans: vec![(lo, hi)],
            }
        } else {
            Self::empty()
        }
    }

    /// Builds from arbitrary spans, normalizing: drops empty spans, clamps
    /// into [0, 1], sorts, and merges overlapping or adjacent spans.
    pub fn from_spans<I: IntoIterator<Item = (f64, f64)>>(spans: I) -> Self {
        let mut spans: Vec<(f64, f64)> = spans
            .into_iter()
            .map(|(lo, hi)| (lo.clamp(0.0, 1.0), hi.clamp(0.0, 1.0)))
            .filter(|&(lo, hi)| lo < hi)
            .collect();
        spans.sort_by(|a, b| a.partial_cmp(b).expect("clamped endpoints are ordered"));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(spans.len());
        for (lo, hi) in spans {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
                _ => merged.push((lo, hi)),
            }
        }
        IntervalSet { spans: merged }
    }

    pub fn is_empty(&self) -> bool {
        self.spans.is_empty()
    }

    /// Total length, an exact sum of endpoint differences.
    pub fn measure(&self) -> f64 {
        self.spans.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.spans.iter().any(|&(lo, hi)| lo <= x && x < hi)
    }

    pub fn spans(&self) -> &[(f64, f64)] {
        &self.spans
    }

    /// All span endpoints that lie inside [0, 1) — the points where
    /// membership flips.
    pub fn endpoints(&self) -> impl Iterator<Item = f64> + '_ {
        self.spans
            .iter()
            .flat_map(|&(lo, hi)| [lo, hi])
            .filter(|&e| e < 1.0)
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut spans = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.spans.len() && j < other.spans.len() {
            let (a_lo, a_hi) = self.spans[i];
            let (b_lo, b_hi) = other.spans[j];
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo < hi {
                spans.push((lo, hi));
            }
            if a_hi <= b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { spans }
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_spans(self.spans.iter().chain(other.spans.iter()).copied())
    }

    /// Complement within `[0, 1)`.
    pub fn complement(&self) -> IntervalSet {
        let mut spans = Vec::with_capacity(self.spans.len() + 1);
        let mut cursor = 0.0;
        for &(lo, hi) in &self.spans {
            if cursor < lo {
                spans.push((cursor, lo));
            }
            cursor = hi;
        }
        if cursor < 1.0 {
            spans.push((cursor, 1.0));
        }
        IntervalSet { spans }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_construction() {
        assert!(IntervalSet::span(0.5, 0.5).is_empty());
        assert!(IntervalSet::span(0.7, 0.2).is_empty());
        assert_eq!(IntervalSet::span(0.0, 1.0), IntervalSet::unit());
        assert_eq!(IntervalSet::span(-0.5, 1.5), IntervalSet::unit());
    }

    #[test]
    fn measure_is_exact_on_spans() {
        let s = IntervalSet::span(0.0, 0.25);
        assert_eq!(s.measure(), 0.25);
        let t = IntervalSet::from_spans([(0.0, 0.25), (0.5, 0.75)]);
        assert_eq!(t.measure(), 0.5);
    }

    #[test]
    fn normalization_merges_overlap_and_adjacency() {
        let s = IntervalSet::from_spans([(0.5, 0.8), (0.0, 0.5), (0.7, 0.9)]);
        assert_eq!(s.spans(), &[(0.0, 0.9)]);
    }

    #[test]
    fn half_open_membership() {
        let s = IntervalSet::span(0.25, 0.5);
        assert!(s.contains(0.25));
        assert!(!s.contains(0.5));
        assert!(!s.contains(0.0));
    }

    #[test]
    fn intersection_and_union() {
        let a = IntervalSet::span(0.0, 0.6);
        let b = IntervalSet::span(0.4, 1.0);
        assert_eq!(a.intersection(&b).spans(), &[(0.4, 0.6)]);
        assert_eq!(a.union(&b), IntervalSet::unit());
        let c = IntervalSet::span(0.7, 0.8);
        assert!(a.intersection(&c).is_empty());
    }

    #[test]
    fn complement_partitions_unit() {
        let a = IntervalSet::from_spans([(0.1, 0.3), (0.6, 0.9)]);
        let comp = a.complement();
        assert_eq!(comp.spans(), &[(0.0, 0.1), (0.3, 0.6), (0.9, 1.0)]);
        assert!((a.measure() + comp.measure() - 1.0).abs() < 1e-15);
        assert!(a.intersection(&comp).is_empty());
        assert_eq!(a.union(&comp), IntervalSet::unit());
        assert_eq!(IntervalSet::empty().complement(), IntervalSet::unit());
        assert!(IntervalSet::unit().complement().is_empty());
    }

    #[test]
    fn inclusion_exclusion_on_measures() {
        let a = IntervalSet::from_spans([(0.0, 0.5), (0.8, 0.95)]);
        let b = IntervalSet::from_spans([(0.25, 0.6), (0.9, 1.0)]);
        let lhs = a.measure() + b.measure() - a.intersection(&b).measure();
        assert!((lhs - a.union(&b).measure()).abs() < 1e-15);
    }

    #[test]
    fn endpoints_exclude_one() {
        let a = IntervalSet::from_spans([(0.0, 0.25), (0.5, 1.0)]);
        let pts: Vec<f64> = a.endpoints().collect();
        assert_eq!(pts, vec![0.0, 0.25, 0.5]);
    }
}
