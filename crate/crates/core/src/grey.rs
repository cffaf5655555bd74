//! Grey (interval) numbers and the handful of interval operations the
//! programming layers need: positioned whitening, linear combination,
//! the bound-pair distance and extreme-difference normalization.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A closed interval `[lower, upper]` whose internal distribution is unknown.
///
/// Serializes as a two-element array `[lower, upper]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct GreyNumber {
    lower: f64,
    upper: f64,
}

impl GreyNumber {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower <= upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidGrey { lower, upper });
        }
        Ok(Self { lower, upper })
    }

    /// A degenerate grey number holding a single white value.
    pub fn white(value: f64) -> Self {
        Self {
            lower: value,
            upper: value,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    /// `true` when `self` lies entirely inside `outer`.
    pub fn is_within(&self, outer: &GreyNumber) -> bool {
        outer.lower <= self.lower && self.upper <= outer.upper
    }

    /// Scales by a white factor; a negative factor swaps the bounds.
    pub fn scale(&self, factor: f64) -> Self {
        let a = factor * self.lower;
        let b = factor * self.upper;
        if factor >= 0.0 {
            Self { lower: a, upper: b }
        } else {
            Self { lower: b, upper: a }
        }
    }

    pub fn shift(&self, offset: f64) -> Self {
        Self {
            lower: self.lower + offset,
            upper: self.upper + offset,
        }
    }

    /// Positioned white value `t * upper + (1 - t) * lower`.
    pub fn whiten(&self, t: f64) -> Result<f64> {
        whiten(self, t)
    }
}

impl std::ops::Add for GreyNumber {
    type Output = GreyNumber;

    fn add(self, rhs: GreyNumber) -> GreyNumber {
        GreyNumber {
            lower: self.lower + rhs.lower,
            upper: self.upper + rhs.upper,
        }
    }
}

impl TryFrom<[f64; 2]> for GreyNumber {
    type Error = Error;

    fn try_from(value: [f64; 2]) -> Result<Self> {
        GreyNumber::new(value[0], value[1])
    }
}

impl From<GreyNumber> for [f64; 2] {
    fn from(g: GreyNumber) -> Self {
        [g.lower, g.upper]
    }
}

impl fmt::Display for GreyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// Objective orientation used by extreme-difference normalization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Larger is better.
    #[default]
    Benefit,
    /// Smaller is better.
    Cost,
}

/// Positioned whitening of `g` at `t` in `[0, 1]`.
pub fn whiten(g: &GreyNumber, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TOutOfRange(t));
    }
    if g.is_degenerate() {
        return Ok(g.lower);
    }
    Ok(t * g.upper + (1.0 - t) * g.lower)
}

/// Exact interval value of `sum(weights[k] * greys[k])`.
pub fn lin_comb(weights: &[f64], greys: &[GreyNumber]) -> Result<GreyNumber> {
    if weights.len() != greys.len() {
        return Err(Error::LengthMismatch {
            expected: weights.len(),
            found: greys.len(),
        });
    }
    Ok(weights
        .iter()
        .zip(greys)
        .fold(GreyNumber::white(0.0), |acc, (w, g)| acc + g.scale(*w)))
}

/// L1 distance between bound pairs.
pub fn grey_distance(r: &GreyNumber, s: &GreyNumber) -> f64 {
    (r.lower - s.lower).abs() + (r.upper - s.upper).abs()
}

/// Grey extreme-difference transformation of one objective's sample values.
///
/// With `U` the largest upper bound and `L` the smallest lower bound, benefit
/// values map to `[(lo - L)/R, (hi - L)/R]` and cost values to
/// `[(U - hi)/R, (U - lo)/R]`, where `R = U - L`.
pub fn normalize_column_set(
    intervals: &[GreyNumber],
    orientation: Orientation,
) -> Result<Vec<GreyNumber>> {
    if intervals.len() < 2 {
        return Err(Error::Parameter(
            "normalization needs at least two intervals".into(),
        ));
    }
    let upper = intervals
        .iter()
        .map(GreyNumber::upper)
        .fold(f64::NEG_INFINITY, f64::max);
    let lower = intervals
        .iter()
        .map(GreyNumber::lower)
        .fold(f64::INFINITY, f64::min);
    let range = upper - lower;
    if !(range > 0.0) {
        return Err(Error::DegenerateColumn);
    }
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    Ok(intervals
        .iter()
        .map(|g| {
            let (lo, hi) = match orientation {
                Orientation::Benefit => ((g.lower - lower) / range, (g.upper - lower) / range),
                Orientation::Cost => ((upper - g.upper) / range, (upper - g.lower) / range),
            };
            GreyNumber {
                lower: clamp(lo),
                upper: clamp(hi),
            }
        })
        .collect())
}

/// Dense `rows x cols` matrix of grey numbers, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GreyIntervalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GreyNumber>,
}

impl GreyIntervalMatrix {
    pub fn from_rows(rows: Vec<Vec<GreyNumber>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> GreyNumber {
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[GreyNumber] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[GreyNumber]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn to_rows(&self) -> Vec<Vec<GreyNumber>> {
        self.iter_rows().map(<[GreyNumber]>::to_vec).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: f64, b: f64) -> GreyNumber {
        GreyNumber::new(a, b).unwrap()
    }

    #[test]
    fn rejects_inverted_bounds() {
        assert!(matches!(
            GreyNumber::new(2.0, 0.0),
            Err(Error::InvalidGrey { .. })
        ));
        assert!(GreyNumber::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn whiten_examples() {
        assert_eq!(whiten(&g(0.0, 2.0), 0.5).unwrap(), 1.0);
        assert_eq!(whiten(&g(16.0, 20.0), 1.0).unwrap(), 20.0);
        assert_eq!(whiten(&g(16.0, 20.0), 0.0).unwrap(), 16.0);
        assert_eq!(whiten(&GreyNumber::white(3.7), 0.3).unwrap(), 3.7);
        assert_eq!(whiten(&g(0.0, 1.0), 1.5), Err(Error::TOutOfRange(1.5)));
        assert!(whiten(&g(0.0, 1.0), -0.1).is_err());
    }

    #[test]
    fn lin_comb_examples() {
        let c1 = lin_comb(&[0.6, 0.4], &[g(0.0, 2.0), g(2.0, 4.0)]).unwrap();
        assert!((c1.lower() - 0.8).abs() < 1e-12 && (c1.upper() - 2.8).abs() < 1e-12);
        let c2 = lin_comb(&[0.6, 0.4], &[g(1.5, 2.5), g(-1.5, -0.5)]).unwrap();
        assert!((c2.lower() - 0.3).abs() < 1e-12 && (c2.upper() - 1.3).abs() < 1e-12);
        assert_eq!(lin_comb(&[1.0], &[g(-1.0, 4.0)]).unwrap(), g(-1.0, 4.0));
        assert_eq!(lin_comb(&[-1.0], &[g(-1.0, 4.0)]).unwrap(), g(-4.0, 1.0));
        assert!(matches!(
            lin_comb(&[1.0, 2.0], &[g(0.0, 1.0)]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn distance_examples() {
        let d = grey_distance(&g(0.0, 0.4348), &g(0.1304, 1.0));
        assert!((d - 0.6956).abs() < 1e-4);
        assert_eq!(grey_distance(&g(0.0, 1.0), &g(0.5, 0.5)), 1.0);
        assert_eq!(grey_distance(&g(0.2, 0.9), &g(0.2, 0.9)), 0.0);
    }

    #[test]
    fn normalize_benefit_row() {
        let row = [g(1.5, 6.5), g(3.0, 13.0), g(1.5, 12.5)];
        let out = normalize_column_set(&row, Orientation::Benefit).unwrap();
        // U = 13, L = 1.5, R = 11.5
        let expected = [(0.0, 5.0 / 11.5), (1.5 / 11.5, 1.0), (0.0, 11.0 / 11.5)];
        for (o, (lo, hi)) in out.iter().zip(expected) {
            assert!((o.lower() - lo).abs() < 1e-12 && (o.upper() - hi).abs() < 1e-12);
        }
        assert!((out[0].upper() - 0.4348).abs() < 1e-4);
        assert!((out[1].lower() - 0.1304).abs() < 1e-4);
        assert!((out[2].upper() - 0.9565).abs() < 1e-4);
    }

    #[test]
    fn normalize_cost_and_extremes() {
        let out = normalize_column_set(&[g(0.0, 1.0), g(1.0, 2.0)], Orientation::Cost).unwrap();
        assert_eq!(out, vec![g(0.5, 1.0), g(0.0, 0.5)]);
        let out =
            normalize_column_set(&[g(1.0, 9.0), g(3.0, 4.0)], Orientation::Benefit).unwrap();
        assert_eq!(out[0], g(0.0, 1.0));
        assert_eq!(
            normalize_column_set(&[g(2.0, 2.0), g(2.0, 2.0)], Orientation::Benefit),
            Err(Error::DegenerateColumn)
        );
    }

    #[test]
    fn serde_as_pair() {
        let v: GreyNumber = serde_json::from_str("[1.5, 2.5]").unwrap();
        assert_eq!(v, g(1.5, 2.5));
        assert_eq!(serde_json::to_string(&v).unwrap(), "[1.5,2.5]");
        assert!(serde_json::from_str::<GreyNumber>("[2, 0]").is_err());
    }

    #[test]
    fn matrix_rows() {
        let m = GreyIntervalMatrix::from_rows(vec![vec![g(0.0, 1.0)], vec![g(1.0, 2.0)]]).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert_eq!(m.get(1, 0), g(1.0, 2.0));
        assert!(GreyIntervalMatrix::from_rows(vec![vec![g(0.0, 1.0)], vec![]]).is_err());
    }

    fn grey() -> impl Strategy<Value = GreyNumber> {
        (-50.0..50.0f64, 0.0..20.0f64).prop_map(|(a, w)| g(a, a + w))
    }

    proptest! {
        #[test]
        fn whiten_monotone_and_bounded(x in grey(), t1 in 0.0..=1.0f64, t2 in 0.0..=1.0f64) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let a = whiten(&x, lo).unwrap();
            let b = whiten(&x, hi).unwrap();
            prop_assert!(a <= b + 1e-12);
            if x.width() > 0.0 && hi > lo {
                prop_assert!(a < b);
            }
            prop_assert!(x.lower() - 1e-12 <= a && b <= x.upper() + 1e-12);
        }

        #[test]
        fn convex_weights_preserve_interval(x in grey(), k in 1usize..5, seed in 0.01..1.0f64) {
            let mut w: Vec<f64> = (0..k).map(|i| seed + i as f64).collect();
            let s: f64 = w.iter().sum();
            w.iter_mut().for_each(|v| *v /= s);
            let out = lin_comb(&w, &vec![x; k]).unwrap();
            prop_assert!((out.lower() - x.lower()).abs() < 1e-9);
            prop_assert!((out.upper() - x.upper()).abs() < 1e-9);
        }

        #[test]
        fn distance_is_metric(a in grey(), b in grey(), c in grey()) {
            let ab = grey_distance(&a, &b);
            prop_assert!((ab - grey_distance(&b, &a)).abs() < 1e-12);
            prop_assert!(ab <= grey_distance(&a, &c) + grey_distance(&c, &b) + 1e-9);
        }

        #[test]
        fn normalized_within_unit(xs in proptest::collection::vec(grey(), 2..8), cost in any::<bool>()) {
            let orient = if cost { Orientation::Cost } else { Orientation::Benefit };
            if let Ok(out) = normalize_column_set(&xs, orient) {
                for r in out {
                    prop_assert!(0.0 <= r.lower() && r.lower() <= r.upper() && r.upper() <= 1.0);
                }
            }
        }
    }
}
