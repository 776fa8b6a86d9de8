//! Top-level counts of level-1 quaternionic representations.
//!
//! For k > 2 the count is
//!
//! ```text
//! |Q_k(1)| = dim V_{(k-2)β}^Γ + correction(k),
//! ```
//!
//! the invariant dimension on the compact form plus the endoscopic
//! correction. Even k add transferred pairs of cusp forms; odd k remove
//! representations that also transfer from pairs. k ≤ 2 is a hard error,
//! not a zero: the method is silent there and we never emit a number it
//! does not support.
//!
//! The reference table of counts for k = 3..52 ships as a JSON fixture
//! and [`verify_fixture`] re-derives every entry and reports a structured
//! diff on any mismatch.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::endoscopy::correction;
use crate::error::{Error, Result};
use crate::modforms::dim_cusp_forms;
use crate::octavians::{invariant_dim, ConjClass};
use crate::rootlattice::Weight;

/// Which way the cusp-form pairs enter at this weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JlNote {
    /// Even k: pairs of eigenforms are counted in addition to the
    /// compact-form transfers.
    EvenAddition,
    /// Odd k: representations also transferred from pairs are removed.
    OddSubtraction,
}

/// The full decomposition of one weight's count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub k: i64,
    /// dim V_{(k-2)β}^Γ.
    pub g2c_term: i64,
    /// Endoscopic correction; ≥ 0 for even k, ≤ 0 for odd k.
    pub correction: i64,
    /// g2c_term + correction.
    pub total: i64,
    pub jl_note: JlNote,
    /// Number of cusp-form pairs behind the correction.
    pub jl_pairs: i64,
}

/// Count the weight-k representations from prepared class data.
pub fn count_quaternionic(k: i64, classes: &[ConjClass]) -> Result<CountReport> {
    if k <= 2 {
        return Err(Error::WeightOutOfRange {
            k,
            bound: "k must be greater than 2 (the counting method is undefined below weight 3; \
                    existence at k = 1, 2 is open)",
        });
    }
    let lambda = Weight::BETA * (k - 2);
    let g2c_term = invariant_dim(&lambda, classes)? as i64;
    let correction = correction(k)?;
    let total = g2c_term + correction;
    debug_assert!(total >= 0);
    let (jl_note, jl_pairs) = if k % 2 == 0 {
        (JlNote::EvenAddition, (dim_cusp_forms(3 * k) * dim_cusp_forms(k)) as i64)
    } else {
        (JlNote::OddSubtraction, (dim_cusp_forms(3 * k - 1) * dim_cusp_forms(k + 1)) as i64)
    };
    Ok(CountReport { k, g2c_term, correction, total, jl_note, jl_pairs })
}

/// Counts for every weight in an inclusive range, in order of k.
pub fn count_range(k_from: i64, k_to: i64, classes: &[ConjClass]) -> Result<Vec<CountReport>> {
    if k_from <= 2 {
        return Err(Error::WeightOutOfRange {
            k: k_from,
            bound: "k must be greater than 2 (the counting method is undefined below weight 3)",
        });
    }
    if k_from > k_to {
        return Err(Error::WeightOutOfRange { k: k_to, bound: "range end below range start" });
    }
    (k_from..=k_to)
        .into_par_iter()
        .map(|k| count_quaternionic(k, classes))
        .collect()
}

/// Aligned text table, one row per weight.
pub fn render_table(reports: &[CountReport]) -> String {
    let mut out = String::from(
        "    k   g2c_term  correction     total  jl_pairs\n",
    );
    for r in reports {
        let side = match r.jl_note {
            JlNote::EvenAddition => "+",
            JlNote::OddSubtraction => "-",
        };
        out.push_str(&format!(
            "{:>5}  {:>9}  {:>10}  {:>8}  {:>7}{}\n",
            r.k, r.g2c_term, r.correction, r.total, r.jl_pairs, side
        ));
    }
    out
}

/// CSV with the fixed header `k,g2c_term,correction,total,jl_pairs`.
pub fn render_csv(reports: &[CountReport]) -> String {
    let mut out = String::from("k,g2c_term,correction,total,jl_pairs\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k, r.g2c_term, r.correction, r.total, r.jl_pairs
        ));
    }
    out
}

/// JSON array of the full reports.
pub fn render_json(reports: &[CountReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
}

/// One fixture entry that disagrees with the computed count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureMismatch {
    pub k: i64,
    pub fixture: i64,
    pub computed: i64,
}

/// Outcome of a fixture comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureCheck {
    pub entries: usize,
    pub mismatches: Vec<FixtureMismatch>,
}

impl FixtureCheck {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Parse a fixture: a JSON object mapping weight k (as a string key) to
/// the expected count.
pub fn parse_fixture(text: &str) -> Result<BTreeMap<i64, i64>> {
    let raw: BTreeMap<String, i64> =
        serde_json::from_str(text).map_err(|e| Error::FixtureMalformed(e.to_string()))?;
    if raw.is_empty() {
        return Err(Error::FixtureMalformed("fixture has no entries".into()));
    }
    let mut out = BTreeMap::new();
    for (key, v) in raw {
        let k: i64 = key
            .parse()
            .map_err(|_| Error::FixtureMalformed(format!("non-integer weight key {key:?}")))?;
        if k <= 2 {
            return Err(Error::FixtureMalformed(format!("weight {k} out of range")));
        }
        out.insert(k, v);
    }
    Ok(out)
}

/// The checked-in reference counts for k = 3..52.
pub fn builtin_fixture() -> Result<BTreeMap<i64, i64>> {
    parse_fixture(include_str!("../data/table1.json"))
}

/// Recompute every fixture entry and diff.
pub fn verify_fixture(fixture: &BTreeMap<i64, i64>, classes: &[ConjClass]) -> Result<FixtureCheck> {
    let mismatches: Vec<FixtureMismatch> = fixture
        .par_iter()
        .map(|(&k, &expected)| {
            let computed = count_quaternionic(k, classes)?.total;
            Ok(if computed == expected {
                None
            } else {
                Some(FixtureMismatch { k, fixture: expected, computed })
            })
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(FixtureCheck { entries: fixture.len(), mismatches })
}

/// Load a fixture file and diff it against computed counts.
pub fn verify_fixture_path(path: &Path, classes: &[ConjClass]) -> Result<FixtureCheck> {
    if !path.exists() {
        return Err(Error::FixtureMissing(path.display().to_string()));
    }
    let text = std::fs::read_to_string(path)?;
    let fixture = parse_fixture(&text)?;
    verify_fixture(&fixture, classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::octavians::builtin_classes;

    fn classes() -> &'static [ConjClass] {
        builtin_classes().expect("checked-in class datafile")
    }

    #[test]
    fn known_counts() {
        assert_eq!(count_quaternionic(6, classes()).unwrap().total, 1);
        assert_eq!(count_quaternionic(12, classes()).unwrap().total, 9);
        assert_eq!(count_quaternionic(52, classes()).unwrap().total, 4780);
        assert!(count_quaternionic(2, classes()).is_err());
    }

    #[test]
    fn report_structure() {
        let r = count_quaternionic(12, classes()).unwrap();
        assert_eq!(r.total, r.g2c_term + r.correction);
        assert_eq!(r.jl_note, JlNote::EvenAddition);
        // Exactly one of the two h-terms survives at each parity, so the
        // pair count carries the whole correction.
        assert_eq!(r.jl_pairs, r.correction.abs());
        let r13 = count_quaternionic(13, classes()).unwrap();
        assert_eq!(r13.jl_note, JlNote::OddSubtraction);
        assert_eq!(r13.jl_pairs, r13.correction.abs());
    }

    #[test]
    fn range_and_renderers() {
        let reports = count_range(8, 8, classes()).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].total, 2);
        let csv = render_csv(&reports);
        assert!(csv.starts_with("k,g2c_term,correction,total,jl_pairs\n"));
        assert!(csv.contains("8,"));
        let table = render_table(&reports);
        assert!(table.contains('8'));
        let json = render_json(&reports);
        let back: Vec<CountReport> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, reports);
        assert!(count_range(9, 8, classes()).is_err());
        assert!(count_range(2, 8, classes()).is_err());
    }

    #[test]
    fn fixture_round_trip() {
        let fixture = builtin_fixture().unwrap();
        assert_eq!(fixture.len(), 50);
        assert_eq!(fixture[&3], 0);
        assert_eq!(fixture[&25], 121);
        let check = verify_fixture(&fixture, classes()).unwrap();
        assert!(check.passed(), "mismatches: {:?}", check.mismatches);

        // A perturbed fixture yields exactly the perturbed diff.
        let mut bad = fixture.clone();
        bad.insert(10, 5);
        let check = verify_fixture(&bad, classes()).unwrap();
        assert_eq!(
            check.mismatches,
            vec![FixtureMismatch { k: 10, fixture: 5, computed: 4 }]
        );
    }

    #[test]
    fn fixture_parsing_errors() {
        assert!(matches!(parse_fixture("{}"), Err(Error::FixtureMalformed(_))));
        assert!(matches!(parse_fixture("[1,2]"), Err(Error::FixtureMalformed(_))));
        assert!(matches!(parse_fixture("{\"x\": 1}"), Err(Error::FixtureMalformed(_))));
        assert!(matches!(parse_fixture("{\"2\": 1}"), Err(Error::FixtureMalformed(_))));
    }

    #[test]
    fn pair_count_carries_the_whole_correction() {
        // At every weight exactly one of the two h-term contributions can
        // be nonzero (the other dies on an odd cusp-form weight), so the
        // jl pair count must equal |correction| throughout.
        use crate::endoscopy::correction;
        for k in 3..=240i64 {
            let pairs = if k % 2 == 0 {
                dim_cusp_forms(3 * k) * dim_cusp_forms(k)
            } else {
                dim_cusp_forms(3 * k - 1) * dim_cusp_forms(k + 1)
            };
            assert_eq!(pairs as i64, correction(k).unwrap().abs(), "k = {k}");
        }
    }

    #[test]
    fn sign_structure_over_fixture_range() {
        for r in count_range(3, 60, classes()).unwrap() {
            assert!(r.total >= 0);
            if r.k % 2 == 0 {
                assert!(r.correction >= 0 && r.total >= r.g2c_term);
            } else {
                assert!(r.correction <= 0 && r.total <= r.g2c_term);
            }
        }
    }
}
