use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use num_bigint::BigUint;
use vpf_core::closed_form::{nondec_closed_exact, noninc_series};
use vpf_core::validation::{
    sequence_table, SequenceKind, MONOTONE_SEQUENCE_CEILING, TOTAL_SEQUENCE_CEILING,
};
use vpf_core::{
    simulate, verify_suite, EnumFilter, Enumerator, PreferenceList, RuleKind, SuiteParams,
};

use crate::cache::CachedTable;
use crate::output::{Cell, Emitter, OutputFormat};
use crate::{Command, Failure, Method, SequenceArg, Status};

pub struct Context {
    pub enumerator: Enumerator,
    pub format: OutputFormat,
    pub cache_path: Option<PathBuf>,
}

type Outcome = Result<Status, Failure>;

pub fn run(ctx: &Context, command: &Command) -> Outcome {
    let stdout = BufWriter::new(io::stdout().lock());
    match *command {
        Command::Check { ref prefs, rule } => check(ctx, stdout, prefs, rule.kind()),
        Command::Count {
            n,
            rule,
            filter,
            method,
        } => count(ctx, stdout, n, rule.kind(), filter.into(), method),
        Command::Enumerate {
            n,
            rule,
            filter,
            limit,
        } => enumerate(ctx, stdout, n, rule.kind(), filter.into(), limit),
        Command::Verify {
            n_brute_max,
            n_rec_max,
            k_max,
        } => verify(
            ctx,
            stdout,
            SuiteParams {
                n_brute_max,
                n_rec_max,
                k_max,
            },
        ),
        Command::InvariantScan { n, k } => invariant_scan(ctx, stdout, n, k),
        Command::Sequence { kind, n_max } => sequence(ctx, stdout, kind, n_max),
    }
}

fn parse_prefs(text: &str) -> Result<PreferenceList, Failure> {
    let values = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<usize>()
                .map_err(|_| Failure::Input(format!("malformed preference {part:?} in {text:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PreferenceList::new(values)?)
}

fn check<W: Write>(ctx: &Context, out: W, prefs: &str, rule: RuleKind) -> Outcome {
    let prefs = parse_prefs(prefs)?;
    let outcome = simulate(&prefs, rule)?;
    let mut e = Emitter::new(
        ctx.format,
        &["prefs", "rule", "status", "spots", "failing_car"],
        out,
    )?;
    e.row(&[
        Cell::Tuple(prefs.prefs().to_vec()),
        Cell::Text(rule.to_string()),
        Cell::Text(
            if outcome.is_success() {
                "success"
            } else {
                "failure"
            }
            .into(),
        ),
        Cell::Tuple(outcome.assignment.clone()),
        outcome
            .failing_car
            .map_or(Cell::Empty, |c| Cell::Int(c as u64)),
    ])?;
    e.finish()?;
    Ok(if outcome.is_success() {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

/// Methods able to produce the count for this combination, fastest first.
pub fn valid_methods(rule: RuleKind, filter: EnumFilter) -> Vec<Method> {
    let mut methods = Vec::new();
    match (rule, filter) {
        (RuleKind::Vacillating(1), EnumFilter::All) => {
            methods.extend([Method::Recurrence, Method::Product])
        }
        (RuleKind::Vacillating(1), _) => methods.extend([Method::Recurrence, Method::Closed]),
        (RuleKind::Vacillating(_), EnumFilter::All) => methods.push(Method::Product),
        (RuleKind::Classical, EnumFilter::All) => methods.push(Method::Closed),
        _ => {}
    }
    methods.push(Method::Brute);
    methods
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Brute => "brute",
        Method::Recurrence => "recurrence",
        Method::Product => "product",
        Method::Closed => "closed",
    }
}

fn filter_name(f: EnumFilter) -> &'static str {
    match f {
        EnumFilter::All => "all",
        EnumFilter::NonDecreasing => "nondecreasing",
        EnumFilter::NonIncreasing => "nonincreasing",
    }
}

fn guard(what: &str, n: usize, ceiling: usize) -> Result<(), Failure> {
    if n > ceiling {
        return Err(Failure::Input(format!(
            "{what} with n = {n} exceeds the ceiling {ceiling}"
        )));
    }
    Ok(())
}

fn count_by(
    ctx: &Context,
    n: usize,
    rule: RuleKind,
    filter: EnumFilter,
    method: Method,
) -> Result<BigUint, Failure> {
    Ok(match (method, filter) {
        (Method::Brute, _) => ctx.enumerator.count_brute(n, rule, filter)?,
        (Method::Recurrence, EnumFilter::All) => {
            guard("recurrence", n, TOTAL_SEQUENCE_CEILING)?;
            let mut cached = CachedTable::open(ctx.cache_path.clone());
            let value = cached.table.vpf_total(n);
            cached.persist();
            value
        }
        (Method::Product, _) => {
            let k = match rule {
                RuleKind::Vacillating(k) => k,
                RuleKind::Classical => {
                    unreachable!("product is offered for vacillating rules only")
                }
            };
            guard("product formula", n, MONOTONE_SEQUENCE_CEILING)?;
            guard(
                "product formula block length",
                n / k.max(1) + 1,
                TOTAL_SEQUENCE_CEILING,
            )?;
            let mut cached = CachedTable::open(ctx.cache_path.clone());
            let value = cached.table.k_vacillating_count(n, k)?;
            cached.persist();
            value
        }
        (Method::Recurrence, _) => {
            guard("monotone recurrence", n, MONOTONE_SEQUENCE_CEILING)?;
            let kind = if filter == EnumFilter::NonDecreasing {
                SequenceKind::NonDec
            } else {
                SequenceKind::NonInc
            };
            if n == 0 {
                BigUint::from(1u32)
            } else {
                sequence_table(kind, n)?
                    .pop()
                    .map(|(_, v)| v)
                    .unwrap_or_default()
            }
        }
        (Method::Closed, _) => {
            guard("closed form", n, MONOTONE_SEQUENCE_CEILING)?;
            match (rule, filter) {
                (RuleKind::Classical, _) if n == 0 => BigUint::from(1u32),
                (RuleKind::Classical, _) => BigUint::from(n + 1).pow(n as u32 - 1),
                (_, EnumFilter::NonDecreasing) if n == 0 => BigUint::from(1u32),
                (_, EnumFilter::NonDecreasing) => nondec_closed_exact(n)?,
                // coefficient of x^0 is 0 in the series, but the empty list parks
                (_, _) if n == 0 => BigUint::from(1u32),
                (_, _) => noninc_series(n).swap_remove(n),
            }
        }
    })
}

fn count<W: Write>(
    ctx: &Context,
    out: W,
    n: usize,
    rule: RuleKind,
    filter: EnumFilter,
    method: Option<Method>,
) -> Outcome {
    rule.validate(n)?;
    let valid = valid_methods(rule, filter);
    let method = method.unwrap_or(valid[0]);
    if !valid.contains(&method) {
        let names: Vec<_> = valid.iter().map(|&m| method_name(m)).collect();
        return Err(Failure::Input(format!(
            "method {} is not available for rule {rule} with filter {}; valid methods: {}",
            method_name(method),
            filter_name(filter),
            names.join(", ")
        )));
    }
    let start = Instant::now();
    let value = count_by(ctx, n, rule, filter, method)?;
    let elapsed = start.elapsed();

    let mut e = Emitter::new(
        ctx.format,
        &["n", "rule", "filter", "method", "count", "elapsed_ms"],
        out,
    )?;
    e.row(&[
        Cell::Int(n as u64),
        Cell::Text(rule.to_string()),
        Cell::Text(filter_name(filter).into()),
        Cell::Text(method_name(method).into()),
        Cell::Count(value),
        Cell::Millis(elapsed),
    ])?;
    e.finish()?;
    Ok(Status::Ok)
}

fn enumerate<W: Write>(
    ctx: &Context,
    out: W,
    n: usize,
    rule: RuleKind,
    filter: EnumFilter,
    limit: Option<usize>,
) -> Outcome {
    let rows = ctx.enumerator.iter(n, rule, filter)?;
    let digits = n.max(1).to_string().len();
    let width = 2 + n * digits + n.saturating_sub(1);
    let mut e = Emitter::streaming(ctx.format, &["prefs", "spots"], &[width, width], out)?;
    for prefs in rows.take(limit.unwrap_or(usize::MAX)) {
        let outcome = simulate(&prefs, rule)?;
        e.row(&[
            Cell::Tuple(prefs.prefs().to_vec()),
            Cell::Tuple(outcome.assignment),
        ])?;
    }
    e.finish()?;
    Ok(Status::Ok)
}

fn verify<W: Write>(ctx: &Context, out: W, params: SuiteParams) -> Outcome {
    let report = verify_suite(&ctx.enumerator, params)?;
    let mut e = Emitter::new(
        ctx.format,
        &[
            "check_id",
            "parameters",
            "expected",
            "actual",
            "passed",
            "elapsed_ms",
        ],
        out,
    )?;
    for c in &report.checks {
        e.row(&[
            Cell::Text(c.check_id.clone()),
            Cell::Params(c.parameters.iter().map(|(k, v)| (k.clone(), *v)).collect()),
            Cell::Text(c.expected.clone()),
            Cell::Text(c.actual.clone()),
            Cell::Bool(c.passed),
            Cell::Millis(c.elapsed),
        ])?;
    }
    let mut out = e.finish()?;
    let failed = report.failures().count();
    let summary = format!(
        "overall: {} ({} checks, {failed} failed)",
        if report.overall { "pass" } else { "FAIL" },
        report.checks.len()
    );
    summarize(ctx, &mut out, &summary)?;
    Ok(if report.overall {
        Status::Ok
    } else {
        Status::PropertyFailed
    })
}

/// Trailing summary: on stdout for humans, on stderr when stdout is structured.
fn summarize<W: Write>(ctx: &Context, out: &mut W, line: &str) -> io::Result<()> {
    if ctx.format == OutputFormat::Human {
        writeln!(out, "{line}")?;
        out.flush()
    } else {
        eprintln!("{line}");
        Ok(())
    }
}

fn invariant_scan<W: Write>(ctx: &Context, out: W, n: usize, k: usize) -> Outcome {
    let scan = ctx.enumerator.permutation_invariant_scan(n, k)?;
    let mut e = Emitter::new(ctx.format, &["prefs"], out)?;
    for p in &scan.members {
        e.row(&[Cell::Tuple(p.prefs().to_vec())])?;
    }
    let mut out = e.finish()?;
    summarize(ctx, &mut out, &format!("count: {}", scan.count()))?;
    Ok(Status::Ok)
}

fn sequence<W: Write>(ctx: &Context, out: W, kind: SequenceArg, n_max: usize) -> Outcome {
    let rows = match kind {
        SequenceArg::Total => {
            if n_max < 1 {
                return Err(Failure::Input("n_max must be at least 1".into()));
            }
            guard("sequence table", n_max, TOTAL_SEQUENCE_CEILING)?;
            let mut cached = CachedTable::open(ctx.cache_path.clone());
            let rows: Vec<_> = (1..=n_max)
                .map(|n| (n, cached.table.vpf_total(n)))
                .collect();
            cached.persist();
            rows
        }
        SequenceArg::Nondecreasing => sequence_table(SequenceKind::NonDec, n_max)?,
        SequenceArg::Nonincreasing => sequence_table(SequenceKind::NonInc, n_max)?,
    };
    let mut e = Emitter::new(ctx.format, &["n", "count"], out)?;
    for (n, value) in rows {
        e.row(&[Cell::Int(n as u64), Cell::Count(value)])?;
    }
    e.finish()?;
    Ok(Status::Ok)
}
