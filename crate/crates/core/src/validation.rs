//! Cross-checks every counting path against every other and records the
//! outcome of each comparison.
//!
//! A failing comparison is data, not an error: the suite always runs to the
//! end so one report shows every discrepancy.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::closed_form::{
    convergent_within_bound, cubic_roots, nondec_closed_exact, noninc_closed_complex,
    noninc_series, sqrt2_convergent, IMAGINARY_TOLERANCE, NUMERIC_CEILING,
};
use crate::enumerate::{EnumFilter, Enumerator};
use crate::error::{Error, Result};
use crate::recurrence::{CountTable, INITIAL_CONDITIONS};
use crate::rule::{simulate, Outcome, PreferenceList, RuleKind};

/// Relative tolerance for the floating-point closed form.
pub const NUMERIC_REL_TOLERANCE: f64 = 1e-6;

/// Prefix of the sequence of numerators of the convergents of √2.
pub const A001333_PREFIX: [u32; 8] = [1, 3, 7, 17, 41, 99, 239, 577];

/// Largest `n_max` accepted by [`sequence_table`] for the full count.
pub const TOTAL_SEQUENCE_CEILING: usize = 200;
/// Largest `n_max` accepted by [`sequence_table`] for monotone counts.
pub const MONOTONE_SEQUENCE_CEILING: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub check_id: String,
    pub parameters: BTreeMap<String, u64>,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub overall: bool,
}

impl VerificationReport {
    fn from_checks(mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| {
            a.check_id
                .cmp(&b.check_id)
                .then_with(|| a.parameters.cmp(&b.parameters))
        });
        let overall = checks.iter().all(|c| c.passed);
        Self { checks, overall }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn find(&self, check_id: &str, parameters: &[(&str, u64)]) -> Option<&Check> {
        self.checks.iter().find(|c| {
            c.check_id == check_id
                && c.parameters.len() == parameters.len()
                && parameters
                    .iter()
                    .all(|(k, v)| c.parameters.get(*k) == Some(v))
        })
    }
}

/// Size parameters for [`verify_suite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    /// Largest length checked by exhaustive enumeration.
    pub n_brute_max: usize,
    /// Largest length checked between recurrences and closed forms.
    pub n_rec_max: usize,
    /// Largest vacillation step compared against the product formula.
    pub k_max: usize,
}

impl Default for SuiteParams {
    fn default() -> Self {
        Self {
            n_brute_max: 7,
            n_rec_max: 40,
            k_max: 7,
        }
    }
}

impl SuiteParams {
    pub fn validate(&self, enumerator: &Enumerator) -> Result<()> {
        let ceiling = enumerator.limits().brute_all;
        if self.n_brute_max < 1 || self.n_brute_max > ceiling {
            return Err(Error::InvalidParameters(format!(
                "n_brute_max must lie in [1, {ceiling}], got {}",
                self.n_brute_max
            )));
        }
        if self.n_rec_max < self.n_brute_max {
            return Err(Error::InvalidParameters(format!(
                "n_rec_max ({}) must be at least n_brute_max ({})",
                self.n_rec_max, self.n_brute_max
            )));
        }
        if self.n_rec_max > MONOTONE_SEQUENCE_CEILING {
            return Err(Error::InvalidParameters(format!(
                "n_rec_max must be at most {MONOTONE_SEQUENCE_CEILING}"
            )));
        }
        if self.k_max < 1 {
            return Err(Error::InvalidParameters("k_max must be at least 1".into()));
        }
        Ok(())
    }
}

struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    fn run<F>(&mut self, id: &str, params: &[(&str, u64)], body: F)
    where
        F: FnOnce() -> Result<(String, String)>,
    {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let (expected, actual, passed) = match result {
            Ok((expected, actual)) => {
                let passed = expected == actual;
                (expected, actual, passed)
            }
            Err(e) => ("<computed value>".to_string(), format!("error: {e}"), false),
        };
        self.push(id, params, expected, actual, passed, elapsed);
    }

    /// Like `run`, but the body decides pass/fail itself.
    fn run_judged<F>(&mut self, id: &str, params: &[(&str, u64)], body: F)
    where
        F: FnOnce() -> Result<(String, String, bool)>,
    {
        let start = Instant::now();
        let result = body();
        let elapsed = start.elapsed();
        let (expected, actual, passed) = match result {
            Ok(triple) => triple,
            Err(e) => ("<computed value>".to_string(), format!("error: {e}"), false),
        };
        self.push(id, params, expected, actual, passed, elapsed);
    }

    fn push(
        &mut self,
        id: &str,
        params: &[(&str, u64)],
        expected: String,
        actual: String,
        passed: bool,
        elapsed: Duration,
    ) {
        self.checks.push(Check {
            check_id: id.to_string(),
            parameters: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            expected,
            actual,
            passed,
            elapsed,
        });
    }
}

fn describe(outcome: &Outcome) -> String {
    let spots = join(&outcome.assignment);
    match outcome.failing_car {
        None => format!("success spots {spots}"),
        Some(car) => format!("failure at car {car} after spots {spots}"),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn list(v: &[usize]) -> PreferenceList {
    PreferenceList::new(v.to_vec()).expect("fixed example lists are valid")
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, x| acc * x)
}

/// Counts lists violating `lo(i) <= a_i <= hi(i)` for some car `i`.
fn bound_violations(
    lists: &[PreferenceList],
    bounds: impl Fn(usize, usize) -> (usize, usize),
) -> usize {
    lists
        .iter()
        .filter(|l| {
            let n = l.n();
            l.prefs().iter().enumerate().any(|(idx, &a)| {
                let (lo, hi) = bounds(n, idx + 1);
                a < lo || a > hi
            })
        })
        .count()
}

/// Runs the full cross-check matrix.
pub fn verify_suite(enumerator: &Enumerator, params: SuiteParams) -> Result<VerificationReport> {
    params.validate(enumerator)?;
    let SuiteParams {
        n_brute_max,
        n_rec_max,
        k_max,
    } = params;
    let mut table = CountTable::new();
    let mut rec = Recorder { checks: Vec::new() };
    let v1 = RuleKind::Vacillating(1);

    // fixed instances
    rec.run("figure.accepted", &[], || {
        let o = simulate(&list(&[4, 1, 1, 4]), RuleKind::Vacillating(2))?;
        Ok(("success spots 4,1,3,2".into(), describe(&o)))
    });
    rec.run("figure.rejected", &[], || {
        let o = simulate(&list(&[4, 1, 1, 1]), RuleKind::Vacillating(2))?;
        Ok(("failure at car 4 after spots 4,1,3".into(), describe(&o)))
    });
    rec.run("counterexample.rearrangement", &[], || {
        let a = simulate(&list(&[1, 1, 2]), v1)?;
        let b = simulate(&list(&[2, 1, 1]), v1)?;
        Ok((
            "success spots 1,2,3 | failure at car 3 after spots 2,1".into(),
            format!("{} | {}", describe(&a), describe(&b)),
        ))
    });
    rec.run("nonincreasing.listing", &[("n", 3)], || {
        let got = enumerator.enumerate(3, v1, EnumFilter::NonIncreasing, None)?;
        Ok((
            "(2,2,2) (3,1,1) (3,2,1) (3,2,2) (3,3,1) (3,3,2)".into(),
            got.iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(" "),
        ))
    });
    for &(n, i, p, b) in INITIAL_CONDITIONS.iter() {
        let ps = [("n", n as u64), ("i", i as u64)];
        rec.run("initial_conditions.paren", &ps, || {
            Ok((p.to_string(), table.vpf_paren(n, i)?.to_string()))
        });
        rec.run("initial_conditions.bracket", &ps, || {
            Ok((b.to_string(), table.vpf_bracket(n, i)?.to_string()))
        });
    }

    // (a) and (b): exhaustive scans against the subset recurrences
    for n in 1..=n_brute_max {
        let pn = [("n", n as u64)];
        rec.run("total.brute_vs_recurrence", &pn, || {
            let brute = enumerator.count_brute(n, v1, EnumFilter::All)?;
            Ok((table.vpf_total(n).to_string(), brute.to_string()))
        });
        match enumerator.tally_subsets(n) {
            Ok(tally) => {
                for i in 1..=n {
                    let ps = [("n", n as u64), ("i", i as u64)];
                    rec.run("subset.paren", &ps, || {
                        Ok((
                            table.vpf_paren(n, i)?.to_string(),
                            tally.paren(i).to_string(),
                        ))
                    });
                    rec.run("subset.bracket", &ps, || {
                        Ok((
                            table.vpf_bracket(n, i)?.to_string(),
                            tally.bracket(i).to_string(),
                        ))
                    });
                }
            }
            Err(e) => rec.run("subset.tally", &pn, || Err(e)),
        }
    }

    // (c) product formula
    for n in 1..=n_brute_max {
        for k in 1..=n.min(k_max) {
            rec.run(
                "product.brute_vs_formula",
                &[("n", n as u64), ("k", k as u64)],
                || {
                    let brute =
                        enumerator.count_brute(n, RuleKind::Vacillating(k), EnumFilter::All)?;
                    Ok((
                        table.k_vacillating_count(n, k)?.to_string(),
                        brute.to_string(),
                    ))
                },
            );
        }
    }
    for n in 1..=n_rec_max.min(TOTAL_SEQUENCE_CEILING) {
        let pn = [("n", n as u64)];
        rec.run("product.diagonal_factorial", &pn, || {
            Ok((
                factorial(n).to_string(),
                table.k_vacillating_count(n, n)?.to_string(),
            ))
        });
        rec.run("product.step_one", &pn, || {
            Ok((
                table.vpf_total(n).to_string(),
                table.k_vacillating_count(n, 1)?.to_string(),
            ))
        });
    }

    // (d) monotone scans against their recurrences, (h) structural bounds
    for n in 1..=n_brute_max {
        let pn = [("n", n as u64)];
        let nondec = enumerator.enumerate(n, v1, EnumFilter::NonDecreasing, None);
        let noninc = enumerator.enumerate(n, v1, EnumFilter::NonIncreasing, None);
        rec.run("nondec.brute_vs_recurrence", &pn, || {
            Ok((
                table.nondec_count(n)?.to_string(),
                nondec.clone()?.len().to_string(),
            ))
        });
        rec.run("noninc.brute_vs_recurrence", &pn, || {
            Ok((
                table.noninc_count(n)?.to_string(),
                noninc.clone()?.len().to_string(),
            ))
        });
        rec.run("lemma.nondec_bounds", &pn, || {
            let lists = nondec?;
            let bad = bound_violations(&lists, |_, i| (i - 1, i + 1));
            Ok(("0".into(), bad.to_string()))
        });
        rec.run("lemma.noninc_bounds", &pn, || {
            let lists = noninc?;
            let bad = bound_violations(&lists, |n, i| (n - i, n + 2 - i));
            Ok(("0".into(), bad.to_string()))
        });
    }

    // (e) non-decreasing tower
    for n in 1..=n_rec_max {
        let pn = [("n", n as u64)];
        rec.run("nondec.closed_exact", &pn, || {
            Ok((
                table.nondec_count(n)?.to_string(),
                nondec_closed_exact(n)?.to_string(),
            ))
        });
        let convergent = sqrt2_convergent(n);
        rec.run("nondec.convergent_numerator", &pn, || {
            Ok((
                table.nondec_count(n)?.to_string(),
                convergent.clone()?.p.to_string(),
            ))
        });
        rec.run("convergent.coprime", &pn, || {
            let c = convergent.clone()?;
            Ok(("1".into(), c.p.gcd(&c.q).to_string()))
        });
        rec.run("convergent.approximation", &pn, || {
            let c = convergent?;
            Ok(("true".into(), convergent_within_bound(&c).to_string()))
        });
    }
    rec.run("oeis.a001333_prefix", &[], || {
        let got = (1..=A001333_PREFIX.len())
            .map(|n| table.nondec_count(n))
            .collect::<Result<Vec<_>>>()?;
        Ok((join(&A001333_PREFIX), join(&got)))
    });

    // (f) non-increasing tower
    let series = noninc_series(n_rec_max);
    for (n, coefficient) in series.iter().enumerate().skip(1) {
        let pn = [("n", n as u64)];
        rec.run("noninc.series", &pn, || {
            Ok((table.noninc_count(n)?.to_string(), coefficient.to_string()))
        });
        if n <= NUMERIC_CEILING {
            rec.run_judged("noninc.closed_numeric", &pn, || {
                let exact = table.noninc_count(n)?;
                let exact_f = exact.to_f64().unwrap_or(f64::INFINITY);
                let value = noninc_closed_complex(n)?;
                let rel = (value.re - exact_f).abs() / exact_f;
                let passed = rel < NUMERIC_REL_TOLERANCE && value.im.abs() < IMAGINARY_TOLERANCE;
                Ok((
                    exact.to_string(),
                    format!(
                        "{:.6} (rel err {rel:.1e}, im {:.1e})",
                        value.re,
                        value.im.abs()
                    ),
                    passed,
                ))
            });
        }
    }
    rec.run_judged("cubic.roots", &[], || {
        let roots = cubic_roots();
        let residual = roots.max_residual();
        let vieta = roots.vieta_defect();
        Ok((
            "residual <= 1e-12, vieta <= 1e-10".into(),
            format!("residual {residual:.1e}, vieta {vieta:.1e}"),
            residual <= 1e-12 && vieta <= 1e-10,
        ))
    });

    // (g) classical parking functions
    for n in 1..=n_brute_max {
        rec.run("classical.brute_vs_formula", &[("n", n as u64)], || {
            let brute = enumerator.count_brute(n, RuleKind::Classical, EnumFilter::All)?;
            let formula = BigUint::from(n + 1).pow(n as u32 - 1);
            Ok((formula.to_string(), brute.to_string()))
        });
    }

    Ok(VerificationReport::from_checks(rec.checks))
}

/// Which sequence [`sequence_table`] lists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    Total,
    NonDec,
    NonInc,
}

/// `(n, count)` for `n = 1 ..= n_max`.
pub fn sequence_table(kind: SequenceKind, n_max: usize) -> Result<Vec<(usize, BigUint)>> {
    let ceiling = match kind {
        SequenceKind::Total => TOTAL_SEQUENCE_CEILING,
        SequenceKind::NonDec | SequenceKind::NonInc => MONOTONE_SEQUENCE_CEILING,
    };
    if n_max < 1 {
        return Err(Error::LengthTooSmall { n: n_max, min: 1 });
    }
    if n_max > ceiling {
        return Err(Error::ResourceGuard {
            what: "sequence table",
            n: n_max,
            ceiling,
        });
    }
    let mut table = CountTable::new();
    (1..=n_max)
        .map(|n| {
            let value = match kind {
                SequenceKind::Total => Ok(table.vpf_total(n)),
                SequenceKind::NonDec => table.nondec_count(n),
                SequenceKind::NonInc => table.noninc_count(n),
            }?;
            Ok((n, value))
        })
        .collect()
}
