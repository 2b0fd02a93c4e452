//! Possibility degrees and max-min composition.
//!
//! Degrees are stored as an exact count of thousandths, so every operation
//! used by the rest of the crate (min, max, compare, complement) is integer
//! arithmetic and needs no tolerance.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const SCALE: u16 = 1000;

/// A possibility value in `[0, 1]` with three exact decimal places.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PossDegree(u16);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("degree {0:?} is not a decimal in [0, 1]")]
    Malformed(String),
    #[error("degree {0:?} has more than three fractional digits")]
    TooPrecise(String),
    #[error("degree {0:?} exceeds 1")]
    OutOfRange(String),
}

impl PossDegree {
    pub const ZERO: PossDegree = PossDegree(0);
    pub const ONE: PossDegree = PossDegree(SCALE);

    /// Builds a degree from thousandths; `None` above 1000.
    pub const fn from_per_mille(per_mille: u16) -> Option<Self> {
        if per_mille <= SCALE {
            Some(PossDegree(per_mille))
        } else {
            None
        }
    }

    pub const fn per_mille(self) -> u16 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// `1 - self`, the complementary degree (e.g. unobservability).
    pub fn complement(self) -> Self {
        PossDegree(SCALE - self.0)
    }

    /// Renders with exactly three fractional digits, e.g. `0.400`.
    pub fn fixed3(self) -> String {
        format!("{}.{:03}", self.0 / SCALE, self.0 % SCALE)
    }
}

impl FromStr for PossDegree {
    type Err = DegreeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let malformed = || DegreeError::Malformed(text.to_string());
        let (int_part, frac_part) = match text.split_once('.') {
            Some((i, f)) => (i, Some(f)),
            None => (text, None),
        };
        if int_part.is_empty() || !int_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let int: u32 = int_part.parse().map_err(|_| malformed())?;
        let mut frac: u32 = 0;
        if let Some(f) = frac_part {
            if f.is_empty() || !f.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            let digits = f.trim_end_matches('0');
            if digits.len() > 3 {
                return Err(DegreeError::TooPrecise(text.to_string()));
            }
            for (place, b) in digits.bytes().enumerate() {
                frac += u32::from(b - b'0') * 10u32.pow(2 - place as u32);
            }
        }
        let total = int
            .checked_mul(u32::from(SCALE))
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(|| DegreeError::OutOfRange(text.to_string()))?;
        if total > u32::from(SCALE) {
            return Err(DegreeError::OutOfRange(text.to_string()));
        }
        Ok(PossDegree(total as u16))
    }
}

/// Shortest exact decimal: `0`, `1`, `0.4`, `0.125`.
impl fmt::Display for PossDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / SCALE;
        let frac = self.0 % SCALE;
        if frac == 0 {
            return write!(f, "{whole}");
        }
        let digits = format!("{frac:03}");
        write!(f, "{whole}.{}", digits.trim_end_matches('0'))
    }
}

impl Serialize for PossDegree {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PossDegree {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact minimum of a non-empty list; `None` for an empty one so callers pick
/// the identity they need.
pub fn degree_min<I: IntoIterator<Item = PossDegree>>(items: I) -> Option<PossDegree> {
    items.into_iter().min()
}

/// Exact maximum of a non-empty list; `None` for an empty one.
pub fn degree_max<I: IntoIterator<Item = PossDegree>>(items: I) -> Option<PossDegree> {
    items.into_iter().max()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("dimension mismatch: expected {expected}, found {found}")]
pub struct DimensionMismatch {
    pub expected: usize,
    pub found: usize,
}

/// Possibility distribution over the crisp states.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FuzzyStateVec(Vec<PossDegree>);

impl FuzzyStateVec {
    pub fn new(entries: Vec<PossDegree>) -> Self {
        FuzzyStateVec(entries)
    }

    pub fn zeros(n: usize) -> Self {
        FuzzyStateVec(vec![PossDegree::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[PossDegree] {
        &self.0
    }

    /// Largest entry; zero for the empty vector.
    pub fn peak(&self) -> PossDegree {
        degree_max(self.0.iter().copied()).unwrap_or(PossDegree::ZERO)
    }

    pub fn is_positive(&self) -> bool {
        self.0.iter().any(|d| !d.is_zero())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &FuzzyStateVec) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for FuzzyStateVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{d}")?;
        }
        f.write_str("]")
    }
}

/// Square matrix of transition possibilities, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EventMatrix {
    n: usize,
    entries: Vec<PossDegree>,
}

impl EventMatrix {
    pub fn from_rows(rows: Vec<Vec<PossDegree>>) -> Result<Self, DimensionMismatch> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(EventMatrix { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![PossDegree::ZERO; n * n];
        for i in 0..n {
            entries[i * n + i] = PossDegree::ONE;
        }
        EventMatrix { n, entries }
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> PossDegree {
        self.entries[row * self.n + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PossDegree]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    /// Max-min matrix product `self ⊙ next`: applying `self` then `next`.
    pub fn then(&self, next: &EventMatrix) -> Result<EventMatrix, DimensionMismatch> {
        if self.n != next.n {
            return Err(DimensionMismatch {
                expected: self.n,
                found: next.n,
            });
        }
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let v = (0..n)
                    .map(|k| self.get(i, k).min(next.get(k, j)))
                    .max()
                    .unwrap_or(PossDegree::ZERO);
                entries.push(v);
            }
        }
        Ok(EventMatrix { n, entries })
    }
}

/// `result[j] = max_i min(q[i], e[i][j])`.
pub fn max_min_compose(
    q: &FuzzyStateVec,
    e: &EventMatrix,
) -> Result<FuzzyStateVec, DimensionMismatch> {
    if q.len() != e.n {
        return Err(DimensionMismatch {
            expected: e.n,
            found: q.len(),
        });
    }
    let out = (0..e.n)
        .map(|j| {
            q.0.iter()
                .enumerate()
                .map(|(i, &qi)| qi.min(e.get(i, j)))
                .max()
                .unwrap_or(PossDegree::ZERO)
        })
        .collect();
    Ok(FuzzyStateVec(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(s: &str) -> PossDegree {
        s.parse().unwrap()
    }

    fn vecd(items: &[&str]) -> FuzzyStateVec {
        FuzzyStateVec::new(items.iter().map(|s| d(s)).collect())
    }

    fn mat(rows: &[&[&str]]) -> EventMatrix {
        EventMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|s| d(s)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn parses_exact_decimals() {
        assert_eq!(d("0.4").per_mille(), 400);
        assert_eq!(d("0").per_mille(), 0);
        assert_eq!(d("1").per_mille(), 1000);
        assert_eq!(d("1.000").per_mille(), 1000);
        assert_eq!(d("0.125").per_mille(), 125);
        assert_eq!(d("0.1230").per_mille(), 123);
    }

    #[test]
    fn rejects_bad_degrees() {
        assert!(matches!(
            "0.1234".parse::<PossDegree>(),
            Err(DegreeError::TooPrecise(_))
        ));
        assert!(matches!(
            "1.5".parse::<PossDegree>(),
            Err(DegreeError::OutOfRange(_))
        ));
        assert!(matches!(
            "1.001".parse::<PossDegree>(),
            Err(DegreeError::OutOfRange(_))
        ));
        for bad in ["", ".4", "-0.1", "0.", "abc", "0.4e1", " 0.4"] {
            assert!(
                matches!(bad.parse::<PossDegree>(), Err(DegreeError::Malformed(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn display_is_shortest_exact() {
        assert_eq!(d("0.400").to_string(), "0.4");
        assert_eq!(d("0").to_string(), "0");
        assert_eq!(d("1.0").to_string(), "1");
        assert_eq!(d("0.125").fixed3(), "0.125");
        assert_eq!(d("0.4").fixed3(), "0.400");
        assert_eq!(d("0.7").complement(), d("0.3"));
    }

    #[test]
    fn degree_min_max() {
        assert_eq!(degree_min([d("0.8"), d("0.5"), d("0.7")]), Some(d("0.5")));
        assert_eq!(degree_max([d("0.2"), d("0.1")]), Some(d("0.2")));
        assert_eq!(degree_min([d("0.4")]), Some(d("0.4")));
        assert_eq!(degree_min(Vec::new()), None);
        assert_eq!(degree_max(Vec::new()), None);
    }

    #[test]
    fn compose_reproduces_patient_model_step() {
        let q0 = vecd(&["0.9", "0.1", "0"]);
        let alpha = mat(&[
            &["0.4", "0.9", "0.4"],
            &["0", "0.4", "0.4"],
            &["0", "0", "0.4"],
        ]);
        assert_eq!(
            max_min_compose(&q0, &alpha).unwrap(),
            vecd(&["0.4", "0.9", "0.4"])
        );
    }

    #[test]
    fn compose_identity_and_zero() {
        let q = vecd(&["0.3", "1", "0.05"]);
        assert_eq!(max_min_compose(&q, &EventMatrix::identity(3)).unwrap(), q);
        let e = mat(&[
            &["1", "0.2", "0"],
            &["0.5", "0.5", "0.5"],
            &["0", "1", "0.9"],
        ]);
        assert_eq!(
            max_min_compose(&FuzzyStateVec::zeros(3), &e).unwrap(),
            FuzzyStateVec::zeros(3)
        );
    }

    #[test]
    fn compose_dimension_mismatch() {
        let q = vecd(&["0.3", "1"]);
        let err = max_min_compose(&q, &EventMatrix::identity(3)).unwrap_err();
        assert_eq!(
            err,
            DimensionMismatch {
                expected: 3,
                found: 2
            }
        );
        assert!(EventMatrix::from_rows(vec![vec![d("1"), d("0")], vec![d("1")]]).is_err());
    }

    fn arb_degree() -> impl Strategy<Value = PossDegree> {
        (0u16..=1000).prop_map(|v| PossDegree::from_per_mille(v).unwrap())
    }

    fn arb_vec(n: usize) -> impl Strategy<Value = FuzzyStateVec> {
        prop::collection::vec(arb_degree(), n).prop_map(FuzzyStateVec::new)
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = EventMatrix> {
        prop::collection::vec(prop::collection::vec(arb_degree(), n), n)
            .prop_map(|rows| EventMatrix::from_rows(rows).unwrap())
    }

    proptest! {
        #[test]
        fn fixed3_round_trips(v in 0u16..=1000) {
            let deg = PossDegree::from_per_mille(v).unwrap();
            let text = deg.fixed3();
            prop_assert_eq!(text.parse::<PossDegree>().unwrap(), deg);
            prop_assert_eq!(text.parse::<PossDegree>().unwrap().fixed3(), text);
            prop_assert_eq!(deg.to_string().parse::<PossDegree>().unwrap(), deg);
        }

        #[test]
        fn min_max_idempotent(x in arb_degree()) {
            prop_assert_eq!(degree_min([x, x]), Some(x));
            prop_assert_eq!(degree_max([x, x]), Some(x));
        }

        #[test]
        fn compose_is_monotone(
            (q, bump, e) in (1usize..=4).prop_flat_map(|n| (arb_vec(n), arb_vec(n), arb_matrix(n)))
        ) {
            let upper = FuzzyStateVec::new(
                q.entries().iter().zip(bump.entries()).map(|(a, b)| (*a).max(*b)).collect(),
            );
            prop_assert!(q.le(&upper));
            let lo = max_min_compose(&q, &e).unwrap();
            let hi = max_min_compose(&upper, &e).unwrap();
            prop_assert!(lo.le(&hi));
        }

        #[test]
        fn compose_is_associative(
            (q, a, b, c) in (1usize..=4).prop_flat_map(|n| (arb_vec(n), arb_matrix(n), arb_matrix(n), arb_matrix(n)))
        ) {
            let staged = max_min_compose(&max_min_compose(&max_min_compose(&q, &a).unwrap(), &b).unwrap(), &c).unwrap();
            let grouped = max_min_compose(&q, &a.then(&b).unwrap().then(&c).unwrap()).unwrap();
            let mixed = max_min_compose(&max_min_compose(&q, &a).unwrap(), &b.then(&c).unwrap()).unwrap();
            prop_assert_eq!(&staged, &grouped);
            prop_assert_eq!(&staged, &mixed);
        }
    }
}
