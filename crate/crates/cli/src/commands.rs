use std::io::Write;

use num_traits::ToPrimitive;
use serde_json::{json, Value};

use treemix_core::chain::{
    down_kernel, down_up_kernel, plancherel_measure, sample_trajectory, up_down_kernel, up_kernel,
    RationalKernel, RNG_ALGORITHM,
};
use treemix_core::dump::{
    format_curve_value, format_float, format_rational, write_count_matrix, write_curve_header,
    write_kernel_csv, write_measure_csv, write_table,
};
use treemix_core::operators::{growth_matrix, pruning_matrix, CountMatrix};
use treemix_core::spectral::{
    geometric_tail, limit_value, separation_eigen, spectrum, CurveValue, BRUTEFORCE_CAP,
};
use treemix_core::tree::{count_trees_up_to, enumerate_trees_with_cap, tree_stats};
use treemix_core::{CanonicalTree, Catalog, Rational, SeparationCurve};

use crate::config::{Caps, Command, Format, KernelKind, RouteArg, RunConfig, SampleKind};
use crate::verify;
use crate::CliError;

pub struct Output {
    pub text: String,
    /// Set when the command ran but found a problem (exit 1).
    pub failure: Option<String>,
}

/// Both renderings of a command's result.
struct Report {
    csv: Vec<u8>,
    data: Vec<Value>,
    failure: Option<String>,
}

impl Report {
    fn new(csv: Vec<u8>, data: Vec<Value>) -> Self {
        Self {
            csv,
            data,
            failure: None,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn run(cfg: &RunConfig, caps: &Caps) -> CliResult<Output> {
    let report = match cfg.command {
        Command::Enumerate => enumerate(cfg, caps)?,
        Command::Stats => stats(cfg, caps)?,
        Command::Measure => measure(cfg, caps)?,
        Command::Kernel => kernel(cfg, caps)?,
        Command::Spectrum => spectrum_cmd(cfg, caps)?,
        Command::Separation => separation(cfg, caps)?,
        Command::Limit => limit(cfg)?,
        Command::Sample => sample(cfg, caps)?,
        Command::Verify => {
            let (checks, failure) = verify::run();
            let mut csv = Vec::new();
            for c in &checks {
                writeln!(
                    csv,
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                )?;
            }
            let data = checks
                .iter()
                .map(|c| json!({"check": c.name, "passed": c.passed, "detail": c.detail}))
                .collect();
            Report { csv, data, failure }
        }
    };
    let text = match cfg.format {
        Format::Csv => String::from_utf8(report.csv).expect("output is utf-8"),
        Format::Json => {
            let mut meta = json!({
                "command": cfg.to_json()["command"],
                "version": env!("CARGO_PKG_VERSION"),
                "config": cfg.to_json(),
            });
            if cfg.command == Command::Sample {
                meta["rng"] = json!(RNG_ALGORITHM);
            }
            let doc = json!({"meta": meta, "data": report.data});
            let mut s = serde_json::to_string_pretty(&doc).expect("json values serialize");
            s.push('\n');
            s
        }
    };
    Ok(Output {
        text,
        failure: report.failure,
    })
}

fn rational_json(q: &Rational) -> Value {
    json!({"num": q.numer().to_string(), "den": q.denom().to_string()})
}

fn curve_value_json(v: &CurveValue) -> Value {
    match v {
        CurveValue::Exact(q) => rational_json(q),
        CurveValue::Float(x) => json!(x),
    }
}

fn name(cmd: Command) -> &'static str {
    match cmd {
        Command::Enumerate => "enumerate",
        Command::Stats => "stats",
        Command::Measure => "measure",
        Command::Kernel => "kernel",
        Command::Spectrum => "spectrum",
        Command::Separation => "separation",
        Command::Limit => "limit",
        Command::Sample => "sample",
        Command::Verify => "verify",
    }
}

fn require_n(cfg: &RunConfig) -> CliResult<usize> {
    match cfg.n {
        Some(0) => Err(CliError::Usage("--n must be at least 1".into())),
        Some(n) => Ok(n),
        None => Err(CliError::Usage(format!(
            "{} requires --n",
            name(cfg.command)
        ))),
    }
}

fn require_r_max(cfg: &RunConfig) -> CliResult<u64> {
    cfg.r_max
        .ok_or_else(|| CliError::Usage(format!("{} requires --r-max", name(cfg.command))))
}

fn check_cap(n: usize, cap: usize, what: &str) -> CliResult<()> {
    if n > cap {
        return Err(CliError::Resource(format!(
            "size {n} exceeds the {what} cap of {cap} (TREEMIX_MAX_N raises the CLI caps)"
        )));
    }
    Ok(())
}

fn catalog(n: usize, caps: &Caps) -> CliResult<Catalog> {
    check_cap(n, caps.enumeration, "enumeration")?;
    Ok(Catalog::with_cap(n, caps.enumeration)?)
}

fn enumerate(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let mut csv = Vec::new();
    if cfg.count_only {
        check_cap(n, caps.count, "count")?;
        let counts = count_trees_up_to(n);
        writeln!(csv, "n,count")?;
        let mut data = Vec::new();
        for (k, t) in counts.iter().enumerate().skip(1) {
            writeln!(csv, "{k},{t}")?;
            data.push(json!({"n": k, "count": t.to_string()}));
        }
        return Ok(Report::new(csv, data));
    }
    check_cap(n, caps.enumeration, "enumeration")?;
    let table = enumerate_trees_with_cap(n, caps.enumeration)?;
    write_table(&table, &mut csv)?;
    let data = table
        .iter()
        .enumerate()
        .map(|(i, t)| json!({"index": i, "encoding": t.encoding()}))
        .collect();
    Ok(Report::new(csv, data))
}

fn stats(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let trees: Vec<CanonicalTree> = match &cfg.tree {
        Some(s) => {
            let t = CanonicalTree::from_balanced(s)?;
            if let Some(n) = cfg.n.filter(|&n| n != t.size()) {
                return Err(CliError::Usage(format!(
                    "--tree has {} vertices, not {n}",
                    t.size()
                )));
            }
            vec![t]
        }
        None => {
            let n = require_n(cfg)?;
            check_cap(n, caps.enumeration, "enumeration")?;
            enumerate_trees_with_cap(n, caps.enumeration)?
                .trees()
                .to_vec()
        }
    };
    let mut csv = Vec::new();
    writeln!(csv, "encoding,size,n,m,sg_order,terminals")?;
    let mut data = Vec::new();
    for t in &trees {
        let s = tree_stats(t);
        writeln!(
            csv,
            "{t},{},{},{},{},{}",
            t.size(),
            s.n_weight,
            s.m,
            s.sg_order,
            t.terminal_count()
        )?;
        data.push(json!({
            "encoding": t.encoding(),
            "size": t.size(),
            "n": s.n_weight.to_string(),
            "m": s.m.to_string(),
            "sg_order": s.sg_order.to_string(),
            "terminals": t.terminal_count(),
        }));
    }
    Ok(Report::new(csv, data))
}

fn measure(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let cat = catalog(n, caps)?;
    let pi = plancherel_measure(&cat, n)?;
    let mut csv = Vec::new();
    write_measure_csv(&pi, &mut csv)?;
    let data = pi
        .table()
        .iter()
        .zip(pi.probs())
        .map(|(t, p)| json!({"encoding": t.encoding(), "probability": rational_json(p)}))
        .collect();
    Ok(Report::new(csv, data))
}

fn kernel(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    check_cap(n, caps.kernel, "kernel")?;
    let needs_next = matches!(cfg.kernel, KernelKind::UpDown | KernelKind::Growth);
    let cat = catalog(if needs_next { n + 1 } else { n }, caps)?;
    let k = match cfg.kernel {
        KernelKind::DownUp => down_up_kernel(&cat, n)?,
        KernelKind::UpDown => up_down_kernel(&cat, n)?,
        KernelKind::Up => up_kernel(&cat, n)?,
        KernelKind::Down => down_kernel(&cat, n)?,
        KernelKind::Growth => {
            return count_report(&cat, &growth_matrix(&cat, n)?);
        }
        KernelKind::Pruning => {
            return count_report(&cat, &pruning_matrix(&cat, n)?);
        }
    };
    kernel_report(&k)
}

fn kernel_report(k: &RationalKernel) -> CliResult<Report> {
    let mut csv = Vec::new();
    write_kernel_csv(k, &mut csv)?;
    let to = k.to_table();
    let data = k
        .from_table()
        .iter()
        .zip(k.matrix().rows())
        .map(|(t, row)| {
            let entries: Vec<Value> = row
                .iter()
                .enumerate()
                .filter(|(_, p)| **p != Rational::from_integer(0.into()))
                .map(|(j, p)| json!({"to": to.trees()[j].encoding(), "p": rational_json(p)}))
                .collect();
            json!({"from": t.encoding(), "row": entries})
        })
        .collect();
    Ok(Report::new(csv, data))
}

fn count_report(cat: &Catalog, m: &CountMatrix) -> CliResult<Report> {
    let mut csv = Vec::new();
    write_count_matrix(m, &mut csv)?;
    let data = if m.n_cols() == 0 {
        Vec::new()
    } else {
        let rows = cat.table(m.row_size())?;
        let cols = cat.table(m.col_size())?;
        m.entries()
            .map(|(i, j, v)| {
                json!({
                    "from": rows.trees()[i].encoding(),
                    "to": cols.trees()[j].encoding(),
                    "count": v.to_string(),
                })
            })
            .collect()
    };
    Ok(Report::new(csv, data))
}

fn spectrum_cmd(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    check_cap(n, caps.count, "count")?;
    let spec = spectrum(n)?;
    let mut csv = Vec::new();
    writeln!(csv, "eigenvalue,multiplicity")?;
    let mut data = Vec::new();
    for (l, m) in &spec.pairs {
        writeln!(csv, "{},{m}", format_rational(l))?;
        data.push(json!({"eigenvalue": rational_json(l), "multiplicity": m.to_string()}));
    }
    Ok(Report::new(csv, data))
}

fn separation(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let r_max = require_r_max(cfg)?;
    if cfg.float && cfg.route != RouteArg::Eigen {
        return Err(CliError::Usage(
            "--float applies only to --route eigen".into(),
        ));
    }
    let bruteforce = |caps: &Caps| -> CliResult<SeparationCurve> {
        check_cap(n, BRUTEFORCE_CAP.min(caps.kernel), "brute-force")?;
        let cat = catalog(n, caps)?;
        Ok(SeparationCurve::matrix_power(&cat, n, r_max)?)
    };
    let exact = |caps: &Caps| check_cap(n, caps.exact_curve, "exact separation");
    let curves = match cfg.route {
        RouteArg::Eigen if cfg.float => {
            check_cap(n, caps.float_curve, "float separation")?;
            vec![SeparationCurve::eigen_float(n, r_max)?]
        }
        RouteArg::Eigen => {
            exact(caps)?;
            vec![SeparationCurve::eigen(n, r_max)?]
        }
        RouteArg::Recurrence => {
            exact(caps)?;
            vec![SeparationCurve::recurrence(n, r_max)?]
        }
        RouteArg::Bruteforce => vec![bruteforce(caps)?],
        RouteArg::All => {
            exact(caps)?;
            vec![
                SeparationCurve::eigen(n, r_max)?,
                SeparationCurve::recurrence(n, r_max)?,
                bruteforce(caps)?,
            ]
        }
    };

    let mut csv = Vec::new();
    write_curve_header(&mut csv)?;
    let mut data = Vec::new();
    let mut failure = None;
    for r in 0..=r_max {
        for c in &curves {
            let v = &c.values[&r];
            writeln!(csv, "{n},{r},{},{}", format_curve_value(v), c.route)?;
            data.push(
                json!({"n": n, "r": r, "s_star": curve_value_json(v), "route": c.route.as_str()}),
            );
        }
        if failure.is_none() && curves.iter().any(|c| c.values[&r] != curves[0].values[&r]) {
            failure = Some(format!("routes disagree at n={n} r={r}"));
        }
    }
    Ok(Report { csv, data, failure })
}

fn limit(cfg: &RunConfig) -> CliResult<Report> {
    let c = cfg
        .c
        .ok_or_else(|| CliError::Usage("limit requires --c".into()))?;
    let s = limit_value(c, cfg.tol)?;
    let mut csv = Vec::new();
    writeln!(csv, "c,value,terms_used,tail_bound")?;
    writeln!(
        csv,
        "{},{},{},{}",
        format_float(s.c),
        format_float(s.value),
        s.terms_used,
        format_float(s.tail_bound)
    )?;
    let data = vec![json!({
        "c": s.c,
        "value": s.value,
        "terms_used": s.terms_used,
        "tail_bound": s.tail_bound,
    })];
    Ok(Report::new(csv, data))
}

fn sample(cfg: &RunConfig, caps: &Caps) -> CliResult<Report> {
    let n = require_n(cfg)?;
    let mut csv = Vec::new();
    match cfg.sample_kind {
        SampleKind::Trajectory => {
            check_cap(n, caps.kernel, "kernel")?;
            let cat = catalog(n, caps)?;
            let start = match &cfg.tree {
                Some(s) => CanonicalTree::from_balanced(s)?,
                None => CanonicalTree::path(n)?,
            };
            let run = sample_trajectory(&cat, n, cfg.steps, &start, cfg.seed)?;
            let table = cat.table(n)?;
            writeln!(csv, "step,encoding")?;
            let mut data = Vec::with_capacity(run.states.len());
            for (step, &s) in run.states.iter().enumerate() {
                let t = table.trees()[s].encoding();
                writeln!(csv, "{step},{t}")?;
                data.push(json!({"step": step, "encoding": t}));
            }
            Ok(Report::new(csv, data))
        }
        SampleKind::Geometric => {
            let r = require_r_max(cfg)?;
            check_cap(n, caps.float_curve, "float separation")?;
            let estimate = geometric_tail(n, r, cfg.samples, cfg.seed)?;
            let exact = if n <= caps.exact_curve {
                separation_eigen(n, r)?.to_f64()
            } else {
                None
            };
            writeln!(csv, "n,r,samples,seed,estimate,exact")?;
            writeln!(
                csv,
                "{n},{r},{},{},{},{}",
                cfg.samples,
                cfg.seed,
                format_float(estimate),
                exact.map(format_float).unwrap_or_default()
            )?;
            let data = vec![json!({
                "n": n,
                "r": r,
                "samples": cfg.samples,
                "seed": cfg.seed,
                "estimate": estimate,
                "exact": exact,
            })];
            Ok(Report::new(csv, data))
        }
    }
}
