//! One function per subcommand, each producing an [`OutputRecord`].

use std::ops::RangeInclusive;

use tangenocchi::exactnum::classify_k;
use tangenocchi::registry::{CheckParams, CheckRegistry, Scope, SequenceRegistry};
use tangenocchi::series::m_residues;
use tangenocchi::trees::{class_size_sum, class_total_sum, pivot_classes};
use tangenocchi::{Budget, Nat};

use crate::output::{Cell, OutputRecord, Status};
use crate::CliError;

pub fn seq(kind: &str, k: Option<u64>, n_max: u64, budget: &Budget) -> Result<OutputRecord, CliError> {
    let registry = SequenceRegistry::with_builtins();
    let source = registry
        .get(kind)
        .ok_or_else(|| CliError::Usage(format!("unknown sequence kind {kind:?}")))?;
    let k = match (source.uses_k(), k) {
        (true, Some(k)) => k,
        (true, None) => return Err(CliError::Usage(format!("--kind {kind} needs --k"))),
        (false, None) => 2,
        (false, Some(_)) => {
            return Err(CliError::Usage(format!("--kind {kind} is defined for k = 2 only; drop --k")))
        }
    };
    let record = source.generate(k, n_max, budget)?;

    let mut out = OutputRecord::new("seq", vec!["n".into(), "index".into(), record.column_label()])
        .param("kind", kind);
    if source.uses_k() {
        out = out.param("k", k);
    }
    out = out.param("n_max", n_max);
    for (n, v) in record.values.iter().enumerate() {
        let n = n as u64;
        out.push_row(vec![n.into(), record.index_of(n).into(), v.into()]);
    }
    Ok(out)
}

pub fn classes(k: u64, n: u64, budget: &Budget) -> Result<OutputRecord, CliError> {
    let arity = usize::try_from(k).map_err(|_| CliError::Usage(format!("--k {k} is too large")))?;
    let classes = pivot_classes(arity, n, budget)?;
    let columns = ["class", "class_size", "hook_product", "labelings", "total", "quotient"];
    let mut out = OutputRecord::new("classes", columns.map(String::from).to_vec())
        .param("k", k)
        .param("n", n);
    for c in &classes {
        out.push_row(vec![
            c.canonical.serialize().into(),
            (&c.class_size).into(),
            (&c.hook_product).into(),
            (&c.labelings).into(),
            (&c.total).into(),
            (&c.quotient).into(),
        ]);
    }
    let quotients: Nat = classes.iter().map(|c| &c.quotient).sum();
    out.push_row(vec![
        "sum".into(),
        class_size_sum(&classes).into(),
        Cell::Empty,
        Cell::Empty,
        class_total_sum(&classes).into(),
        quotients.into(),
    ]);
    Ok(out)
}

pub fn verify(
    scopes: &[Scope],
    scope_name: &str,
    k_range: RangeInclusive<u64>,
    n_range: Option<RangeInclusive<u64>>,
    budget: &Budget,
) -> Result<OutputRecord, CliError> {
    let show = |r: &RangeInclusive<u64>| format!("{}..={}", r.start(), r.end());
    let mut out = OutputRecord::new("verify", ["check", "case", "result", "detail"].map(String::from).to_vec())
        .param("scope", scope_name)
        .param("k_range", show(&k_range))
        .param("n_range", n_range.as_ref().map_or_else(|| "default".to_string(), show));

    let params = CheckParams { k_range, n_range, budget: *budget };
    let rows = CheckRegistry::with_builtins().run(scopes, &params)?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    for r in &rows {
        out.push_row(vec![
            r.check.into(),
            r.case.clone().into(),
            if r.passed { "pass" } else { "fail" }.into(),
            r.detail.clone().into(),
        ]);
    }
    out.summary.push(("checks", format!("{} passed, {failed} failed", rows.len() - failed)));
    out.status = if failed == 0 { Status::Pass } else { Status::Fail };
    Ok(out)
}

pub fn residues(k: u64, n_max: u64, budget: &Budget) -> Result<OutputRecord, CliError> {
    let report = m_residues(k, n_max, budget)?;
    let class = classify_k(k)?;
    let mut out = OutputRecord::new("residues", vec!["n".into(), "m_n".into()])
        .param("k", k)
        .param("n_max", n_max);
    for (n, &r) in report.residues.iter().enumerate() {
        out.push_row(vec![(n as u64).into(), r.into()]);
    }
    out.summary.push(("k", class.to_string()));
    out.summary.push(("expected", format!("m_n {} for n >= 1", report.expected)));
    out.summary.push((
        "period",
        match report.period {
            Some(p) => format!("{} from n={} ({} repetitions observed)", p.period, p.offset, p.repetitions),
            None => "none observed".to_string(),
        },
    ));
    out.summary.push((
        "cross_checked",
        format!("{} of {} terms against M directly", report.cross_checked, report.residues.len()),
    ));
    Ok(out)
}
