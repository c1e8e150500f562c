//! Enumeration of Einstein metrics from both ansatze for a given `n`,
//! grouped into equivalence classes by the invariant `I1`.
//!
//! Equal `I1` is necessary but not sufficient for two Einstein metrics to be
//! equivalent; classes here are `I1` classes and nothing stronger.

use alloc::vec;
use alloc::vec::Vec;

use crate::curvature::Ansatz;
use crate::error::{Error, Result};
use crate::liealg::Scheme;
use crate::solver::{
    closed_forms, multistart_search, same_root, EinsteinRecord, Provenance, SearchConfig,
    SearchDiagnostics,
};

/// Split cases of the `SU(p) x SU(q)` decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Case {
    /// `p = 0` or `q = 0`: the decomposition is trivial, use Scheme 1.
    Case1,
    /// `p = 1` or `q = 1`: nothing beyond the bi-invariant metric.
    Case2,
    /// `p = q`: one new metric instead of two.
    Case3,
    /// Everything else: two new metrics.
    Case4,
}

pub fn case_classify(n: usize, p: usize) -> Result<Case> {
    if p > n {
        return Err(Error::SplitOutOfRange { n, p });
    }
    let q = n - p;
    Ok(if p == 0 || q == 0 {
        Case::Case1
    } else if p == 1 || q == 1 {
        Case::Case2
    } else if p == q {
        Case::Case3
    } else {
        Case::Case4
    })
}

/// Inequivalent-metric count stated for `SU(n)`: `2k+1` for `n = 2k`,
/// `2k` for `n = 2k+1`.
pub fn paper_count(n: usize) -> usize {
    let k = n / 2;
    if n % 2 == 0 {
        2 * k + 1
    } else {
        2 * k
    }
}

/// Records found for one `(scheme, p)` configuration.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConfigurationResult {
    pub scheme: Scheme,
    pub p: Option<usize>,
    pub case: Case,
    pub records: Vec<EinsteinRecord>,
    /// Valid closed-form records the numeric search did not recover.
    pub missed_closed_forms: usize,
    pub search: SearchDiagnostics,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceClass {
    pub id: usize,
    /// `I1` of the first (lowest) member.
    pub i1: f64,
    pub bi_invariant: bool,
    /// `(configuration index, record index)` pairs.
    pub members: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CatalogEntry {
    pub n: usize,
    pub configurations: Vec<ConfigurationResult>,
    pub classes: Vec<EquivalenceClass>,
    pub count_inequivalent: usize,
    pub paper_count: usize,
    pub agreement: bool,
    /// Some configuration's numeric search missed a closed-form solution.
    pub under_resolved: bool,
}

/// Union of numeric and verified closed-form records for one ansatz.
pub fn solve_configuration(ansatz: &Ansatz, cfg: &SearchConfig) -> Result<ConfigurationResult> {
    let case = match ansatz.scheme() {
        Scheme::One => Case::Case1,
        Scheme::Two => case_classify(ansatz.n(), ansatz.p().unwrap_or(0))?,
    };
    let outcome = multistart_search(ansatz, cfg)?;
    let mut records = outcome.records;
    let mut missed = 0;
    for rec in closed_forms(ansatz, &cfg.tolerances)? {
        if !rec.valid {
            continue;
        }
        match records.iter_mut().find(|r| same_root(r, &rec, cfg)) {
            // The closed form is exact where the numeric root may sit on a double root.
            Some(found) if found.provenance == Provenance::Numeric => *found = rec,
            Some(_) => {}
            None => {
                missed += 1;
                records.push(rec);
            }
        }
    }
    records.sort_by(EinsteinRecord::order);
    Ok(ConfigurationResult {
        scheme: ansatz.scheme(),
        p: ansatz.p(),
        case,
        records,
        missed_closed_forms: missed,
        search: outcome.diagnostics,
    })
}

/// Greedy `I1` clustering over records sorted by `I1`; assigns `class_id`s.
pub fn assign_classes(
    configurations: &mut [ConfigurationResult],
    n: usize,
    i1_tol: f64,
) -> Vec<EquivalenceClass> {
    let mut refs: Vec<(f64, usize, usize)> = Vec::new();
    for (ci, conf) in configurations.iter().enumerate() {
        for (ri, rec) in conf.records.iter().enumerate() {
            if let (true, Some(i1)) = (rec.valid, rec.i1) {
                refs.push((i1, ci, ri));
            }
        }
    }
    refs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let bi_i1 = (n * n - 1) as f64;
    let mut classes: Vec<EquivalenceClass> = Vec::new();
    for (i1, ci, ri) in refs {
        let join = classes.last().is_some_and(|c| (i1 - c.i1).abs() < i1_tol * c.i1.abs());
        if !join {
            classes.push(EquivalenceClass {
                id: classes.len(),
                i1,
                bi_invariant: (i1 - bi_i1).abs() < i1_tol * bi_i1,
                members: Vec::new(),
            });
        }
        let class = classes.last_mut().unwrap();
        class.members.push((ci, ri));
        configurations[ci].records[ri].class_id = Some(class.id);
    }
    classes
}

/// Configurations enumerated for `n`: Scheme 1, then Scheme 2 for
/// `2 <= p <= n/2` (`p <= q`; splits with `p = 1` only repeat the
/// bi-invariant metric).
pub fn configurations(n: usize) -> Vec<(Scheme, Option<usize>)> {
    let mut out = vec![(Scheme::One, None)];
    out.extend((2..=n / 2).map(|p| (Scheme::Two, Some(p))));
    out
}

/// Build every configuration for `n` and class the results by `I1`.
pub fn enumerate_metrics(n: usize, cfg: &SearchConfig) -> Result<CatalogEntry> {
    let ansatze = configurations(n)
        .into_iter()
        .map(|(scheme, p)| match scheme {
            Scheme::One => Ansatz::scheme1(n),
            Scheme::Two => Ansatz::scheme2(n, p.unwrap_or(0)),
        })
        .collect::<Result<Vec<_>>>()?;
    enumerate_with(n, &ansatze, cfg)
}

/// Same as [`enumerate_metrics`] over prebuilt ansatze (e.g. from a cache).
pub fn enumerate_with(n: usize, ansatze: &[Ansatz], cfg: &SearchConfig) -> Result<CatalogEntry> {
    let mut configurations = ansatze
        .iter()
        .map(|a| solve_configuration(a, cfg))
        .collect::<Result<Vec<_>>>()?;
    let classes = assign_classes(&mut configurations, n, cfg.i1_tol);
    let count = classes.len();
    let expected = paper_count(n);
    Ok(CatalogEntry {
        n,
        under_resolved: configurations.iter().any(|c| c.missed_closed_forms > 0),
        configurations,
        classes,
        count_inequivalent: count,
        paper_count: expected,
        agreement: count == expected,
    })
}
