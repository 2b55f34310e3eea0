//! Command-line interface: reports and distance tables for the library's
//! constructions. Exit codes: 0 success, 1 check/reproduction failure,
//! 2 usage or validation error.

use clap::{Args, Parser, Subcommand};
use qalg::algebra::load_algebra;
use qalg::chain::ChainFile;
use qalg::dist;
use qalg::error::{Error, Result};
use qalg::finitary::{
    check_condition, factorization_probe, monad_law_suite, run_counterexample, ModelSpec,
};
use qalg::free::closed::{
    exception_monad, finite_hausdorff, monoid_action_monad, small_space_monad, word_monoid,
};
use qalg::free::generic::{ordinary_free, unary_free, TrivialCongruence};
use qalg::free::two_ops::{dhat, dhat_space};
use qalg::free::dstar_space;
use qalg::report::{Claim, Format, Report};
use qalg::space::{discrete, load_metric_space, load_pseudo_space, meet, MetricSpace, SpaceFile};
use qalg::term::{enumerate, parse_term, universe_cap, Signature};
use qalg::variety::{
    load_presentation, monoid_presentation, satisfies_all, semilattice_presentation,
    two_eps_ops_presentation, VarietyPresentation,
};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qalg",
    about = "Free quantitative algebras over extended metric spaces",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format: json, csv, or text.
    #[arg(long, default_value = "text")]
    format: String,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the non-strong-finitarity counter-example with exact numbers.
    Counterexample {
        /// Closeness of the two binary operations, strictly between 0 and 1.
        #[arg(long)]
        eps: f64,
        /// Term-universe depth bound (the witness trees need depth 2).
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Distances between elements of a free-algebra model.
    Free {
        /// Built-in presentation (monoid, semilattice, small:<eps>,
        /// exceptions:<space-file>, action:<monoid-file>, two-eps-ops:<eps>)
        /// or a variety JSON file.
        #[arg(long)]
        variety: String,
        /// Base space JSON file.
        #[arg(long)]
        space: PathBuf,
        /// Element pairs, comma-separated within a pair, semicolon-separated
        /// between pairs, e.g. "(mul a b),(mul b a);{p},{q,r}".
        #[arg(long)]
        pairs: String,
        /// Depth bound for generic constructions.
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        /// Word-length bound for the monoid model.
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Meet of two pseudometrics on the same point set (full table).
    Meet {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Check a finite algebra against a variety presentation.
    Check {
        /// Algebra JSON file (carrier space plus operation tables).
        #[arg(long)]
        algebra: PathBuf,
        /// Built-in presentation name or variety JSON file.
        #[arg(long)]
        variety: String,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the law suite of a named free-algebra model.
    Laws {
        /// Model: term, word, semilattice, small:<eps>,
        /// exceptions:<space-file>, action:<monoid-file>, two-eps-ops:<eps>.
        #[arg(long)]
        model: String,
        /// Base space JSON file.
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_len: usize,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Per-stage and infimum distances in a truncated directed chain.
    Colimit {
        /// Chain JSON file (explicit stages or a named generator).
        #[arg(long)]
        chain: PathBuf,
        /// Stage count for generated chains.
        #[arg(long, default_value_t = 20)]
        stages: usize,
        /// Point pair "y,y2" in the starting stage.
        #[arg(long)]
        pair: String,
        #[arg(long, default_value_t = 0)]
        from_stage: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Diagonal-condition sweep for the two-close-operations target.
    Condition {
        /// Closeness of the two binary operations.
        #[arg(long)]
        eps: f64,
        /// Comma-separated eps grid for the sweep.
        #[arg(long, default_value = "0.25,0.5,1.0")]
        grid: String,
        #[arg(long, default_value_t = 2)]
        max_depth: usize,
        /// Base space JSON file (default: two points at distance 1).
        #[arg(long)]
        space: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Factorization sweep for a model's canonical quotient map.
    Factorize {
        /// Model, as for `laws`.
        #[arg(long)]
        model: String,
        /// Base space JSON file.
        #[arg(long)]
        space: PathBuf,
        #[arg(long, default_value_t = 3)]
        max_depth: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(pass) => {
            if pass {
                ExitCode::from(0)
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: &OutputArgs, text: &str) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_report(out: &OutputArgs, report: &Report) -> Result<bool> {
    let format: Format = out.format.parse()?;
    let mut text = report.render(format);
    if !text.ends_with('\n') {
        text.push('\n');
    }
    emit(out, &text)?;
    Ok(report.pass())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Counterexample {
            eps,
            max_depth,
            out,
        } => {
            let report = run_counterexample(eps, max_depth)?;
            emit_report(&out, &report)
        }
        Command::Free {
            variety,
            space,
            pairs,
            max_depth,
            max_len,
            out,
        } => {
            let base = load_metric_space(&space)?;
            let rows = free_distances(&variety, &base, &pairs, max_depth, max_len)?;
            emit(&out, &render_rows(&rows, out.format.parse()?))?;
            Ok(true)
        }
        Command::Meet { left, right, out } => {
            let l = load_pseudo_space(&left)?;
            let r = load_pseudo_space(&right)?;
            let m = meet(&l, &r)?;
            let text = match out.format.parse()? {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&SpaceFile::from_space(&m))
                        .expect("space serialization is infallible");
                    s.push('\n');
                    s
                }
                Format::Csv | Format::Text => {
                    let mut s = String::new();
                    s.push_str(&m.points().join(","));
                    s.push('\n');
                    for i in 0..m.len() {
                        let row: Vec<String> =
                            (0..m.len()).map(|j| dist::fmt(m.dist(i, j))).collect();
                        s.push_str(&row.join(","));
                        s.push('\n');
                    }
                    s
                }
            };
            emit(&out, &text)?;
            Ok(true)
        }
        Command::Check {
            algebra,
            variety,
            out,
        } => {
            let a = load_algebra(&algebra)?;
            let v = resolve_presentation(&variety, None)?;
            let sat = satisfies_all(&a, &v)?;
            let mut report = Report::new(format!(
                "satisfaction in variety {}",
                v.name.as_deref().unwrap_or("(unnamed)")
            ));
            let nonexp = a.check_nonexpanding();
            report.push(
                Claim::flag("all operations nonexpanding", nonexp.pass)
                    .with_witness(json!(format!("{:?}", nonexp.witness))),
            );
            for o in &sat.per_equation {
                report.push(
                    Claim::flag(o.equation.clone(), o.pass).with_witness(json!({
                        "worst_dist": qalg::report::dist_value(o.worst_dist),
                        "worst_env": o.worst_env,
                    })),
                );
            }
            emit_report(&out, &report)
        }
        Command::Laws {
            model,
            space,
            max_len,
            max_depth,
            out,
        } => {
            let base = load_metric_space(&space)?;
            let spec = parse_model_spec(&model, &base, max_len, max_depth)?;
            let report = monad_law_suite(&spec)?;
            emit_report(&out, &report)
        }
        Command::Colimit {
            chain,
            stages,
            pair,
            from_stage,
            out,
        } => {
            let text = std::fs::read_to_string(&chain)?;
            let file: ChainFile = serde_json::from_str(&text)?;
            let chain = file.to_chain(stages)?;
            let (y, y2) = split_pair(&pair)?;
            let d = chain.colimit_distance(from_stage, &y, &y2)?;
            let trend = d.trend();
            let rendered = match out.format.parse()? {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&json!({
                        "from_stage": d.from_stage,
                        "per_stage": d.per_stage,
                        "infimum": qalg::report::dist_value(d.infimum),
                        "trend": trend,
                    }))
                    .expect("serialization is infallible");
                    s.push('\n');
                    s
                }
                Format::Csv => {
                    let mut s = String::from("stage,distance\n");
                    for (k, v) in d.per_stage.iter().enumerate() {
                        s.push_str(&format!("{},{}\n", d.from_stage + k, dist::fmt(*v)));
                    }
                    s
                }
                Format::Text => {
                    let vals: Vec<String> = d.per_stage.iter().map(|v| dist::fmt(*v)).collect();
                    format!(
                        "stages {}..: {}\ninfimum: {}\ntrend: {}\n",
                        d.from_stage,
                        vals.join(" "),
                        dist::fmt(d.infimum),
                        trend
                    )
                }
            };
            emit(&out, &rendered)?;
            Ok(true)
        }
        Command::Condition {
            eps,
            grid,
            max_depth,
            space,
            out,
        } => {
            let base = match space {
                Some(path) => load_metric_space(&path)?,
                None => MetricSpace::pair("a", "b", 1.0)?,
            };
            two_eps_ops_presentation(eps)?; // validates eps
            let grid: Vec<f64> = grid
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Invalid(format!("bad grid entry `{s}`")))
                })
                .collect::<Result<_>>()?;
            let disc = discrete(base.points().iter().cloned())?;
            let sig = Signature::two_binary();
            let u = enumerate(base.points(), &sig, max_depth, universe_cap())?;
            let y = meet(&dstar_space(&u, &base)?, &dhat_space(&u, &disc, eps)?)?;
            let report = check_condition(&sig, &base, &grid, max_depth, &|s, t| {
                let i = u.index_of(s).ok_or_else(|| {
                    Error::Invalid(format!("term `{s}` outside the bounded universe"))
                })?;
                let j = u.index_of(t).ok_or_else(|| {
                    Error::Invalid(format!("term `{t}` outside the bounded universe"))
                })?;
                Ok(y.dist(i, j))
            })?;
            emit_report(&out, &report.to_report())
        }
        Command::Factorize {
            model,
            space,
            max_depth,
            out,
        } => {
            let base = load_metric_space(&space)?;
            let spec = parse_model_spec(&model, &base, max_depth, max_depth)?;
            let verdict = factorization_probe(&spec, max_depth)?;
            let mut report = Report::new(format!("factorization sweep for model `{model}`"));
            report.push(
                Claim::flag(
                    "a nonexpanding factorization through the free algebra exists",
                    verdict.exists,
                )
                .with_witness(json!({
                    "checked_pairs": verdict.checked_pairs,
                    "witness": verdict.witness,
                })),
            );
            emit_report(&out, &report)
        }
    }
}

fn split_pair(s: &str) -> Result<(String, String)> {
    let parts = split_top_level(s, ',');
    if parts.len() != 2 {
        return Err(Error::Invalid(format!(
            "expected a pair `left,right`, got `{s}`"
        )));
    }
    Ok((parts[0].trim().to_string(), parts[1].trim().to_string()))
}

/// Splits on `sep` outside of parentheses and braces, so subset syntax like
/// `{q,r}` and s-expressions survive intact.
fn split_top_level(s: &str, sep: char) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut current = String::new();
    for c in s.chars() {
        match c {
            '(' | '{' => {
                depth += 1;
                current.push(c);
            }
            ')' | '}' => {
                depth = depth.saturating_sub(1);
                current.push(c);
            }
            c if c == sep && depth == 0 => {
                parts.push(current.clone());
                current.clear();
            }
            c => current.push(c),
        }
    }
    parts.push(current);
    parts
}

fn resolve_presentation(name: &str, base: Option<&MetricSpace>) -> Result<VarietyPresentation> {
    match name {
        "monoid" => Ok(monoid_presentation()),
        "semilattice" => Ok(semilattice_presentation()),
        _ if name.starts_with("two-eps-ops:") => {
            two_eps_ops_presentation(parse_suffix_eps(name)?)
        }
        _ if name.starts_with("small:") => {
            Ok(qalg::variety::small_space_presentation(parse_suffix_eps(name)?))
        }
        _ if name.starts_with("action:") => {
            let m = load_algebra(Path::new(&name["action:".len()..]))?;
            qalg::variety::action_presentation(&m)
        }
        _ if name.starts_with("exceptions:") => {
            let e = load_metric_space(Path::new(&name["exceptions:".len()..]))?;
            Ok(qalg::variety::exceptions_presentation(&e))
        }
        _ if Path::new(name).exists() => load_presentation(Path::new(name)),
        _ => {
            let _ = base;
            Err(Error::UnknownModel(name.to_string()))
        }
    }
}

fn parse_suffix_eps(name: &str) -> Result<f64> {
    let eps = name
        .split(':')
        .nth(1)
        .and_then(|s| s.parse::<f64>().ok())
        .ok_or_else(|| Error::Invalid(format!("expected `<model>:<eps>`, got `{name}`")))?;
    dist::check(eps)
}

fn parse_model_spec(
    name: &str,
    base: &MetricSpace,
    max_len: usize,
    max_depth: usize,
) -> Result<ModelSpec> {
    match name {
        "term" => Ok(ModelSpec::Term {
            base: base.clone(),
            signature: Signature::two_binary(),
            max_depth,
        }),
        "word" | "monoid" => Ok(ModelSpec::Word {
            base: base.clone(),
            max_len,
        }),
        "semilattice" | "hausdorff" => Ok(ModelSpec::Hausdorff { base: base.clone() }),
        _ if name.starts_with("small:") => Ok(ModelSpec::Small {
            base: base.clone(),
            eps: parse_suffix_eps(name)?,
        }),
        _ if name.starts_with("two-eps-ops:") => Ok(ModelSpec::TwoOps {
            base: base.clone(),
            eps: parse_suffix_eps(name)?,
        }),
        _ if name.starts_with("exceptions:") => Ok(ModelSpec::Exception {
            base: base.clone(),
            exceptions: load_metric_space(Path::new(&name["exceptions:".len()..]))?,
        }),
        _ if name.starts_with("action:") => Ok(ModelSpec::Action {
            monoid: load_algebra(Path::new(&name["action:".len()..]))?,
            base: base.clone(),
        }),
        _ => Err(Error::UnknownModel(name.to_string())),
    }
}

struct DistRow {
    left: String,
    right: String,
    dist: f64,
}

fn render_rows(rows: &[DistRow], format: Format) -> String {
    match format {
        Format::Json => {
            let items: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({
                        "left": r.left,
                        "right": r.right,
                        "dist": qalg::report::dist_value(r.dist),
                    })
                })
                .collect();
            let mut s = serde_json::to_string_pretty(&items).expect("serialization is infallible");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("left,right,dist\n");
            for r in rows {
                s.push_str(&format!(
                    "\"{}\",\"{}\",{}\n",
                    r.left,
                    r.right,
                    dist::fmt(r.dist)
                ));
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in rows {
                s.push_str(&format!("d({}, {}) = {}\n", r.left, r.right, dist::fmt(r.dist)));
            }
            s
        }
    }
}

fn free_distances(
    variety: &str,
    base: &MetricSpace,
    pairs: &str,
    max_depth: usize,
    max_len: usize,
) -> Result<Vec<DistRow>> {
    let queries: Vec<(String, String)> = split_top_level(pairs, ';')
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(|p| split_pair(&p))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut push = |left: &str, right: &str, dist: f64| {
        rows.push(DistRow {
            left: left.to_string(),
            right: right.to_string(),
            dist,
        })
    };
    match variety {
        "monoid" | "word" => {
            let model = word_monoid(base, max_len)?;
            let sig = monoid_presentation().signature;
            for (l, r) in &queries {
                let li = model.eval_term(&parse_term(l, &sig)?)?;
                let ri = model.eval_term(&parse_term(r, &sig)?)?;
                push(l, r, model.dist(li, ri));
            }
        }
        "semilattice" | "hausdorff" => {
            let model = finite_hausdorff(base)?;
            let sig = semilattice_presentation().signature;
            let parse = |text: &str| -> Result<u64> {
                if text.trim_start().starts_with('{') {
                    model.parse_subset(text)
                } else {
                    model.eval_term(&parse_term(text, &sig)?)
                }
            };
            for (l, r) in &queries {
                push(l, r, model.dist(parse(l)?, parse(r)?));
            }
        }
        _ if variety.starts_with("small:") => {
            let model = small_space_monad(base, parse_suffix_eps(variety)?)?;
            for (l, r) in &queries {
                push(l, r, model.space.dist_by_name(l.trim(), r.trim())?);
            }
        }
        _ if variety.starts_with("exceptions:") => {
            let e = load_metric_space(Path::new(&variety["exceptions:".len()..]))?;
            let model = exception_monad(base, &e)?;
            let locate = |name: &str| -> Result<usize> {
                model.unit(name.trim()).or_else(|_| model.exception(name.trim()))
            };
            for (l, r) in &queries {
                push(l, r, model.space.dist(locate(l)?, locate(r)?));
            }
        }
        _ if variety.starts_with("action:") => {
            let m = load_algebra(Path::new(&variety["action:".len()..]))?;
            let model = monoid_action_monad(&m, base)?;
            for (l, r) in &queries {
                let li = model.eval_term(&qalg::term::parse_term_raw(l)?)?;
                let ri = model.eval_term(&qalg::term::parse_term_raw(r)?)?;
                push(l, r, model.space.dist(li, ri));
            }
        }
        _ if variety.starts_with("two-eps-ops:") => {
            let eps = parse_suffix_eps(variety)?;
            let sig = Signature::two_binary();
            for (l, r) in &queries {
                push(
                    l,
                    r,
                    dhat(&parse_term(l, &sig)?, &parse_term(r, &sig)?, base, eps)?,
                );
            }
        }
        _ if Path::new(variety).exists() => {
            let v = load_presentation(Path::new(variety))?;
            if v.signature.max_arity() <= 1 {
                let model = unary_free(&v, base, max_depth)?;
                for (l, r) in &queries {
                    let lt = parse_term(l, &v.signature)?;
                    let rt = parse_term(r, &v.signature)?;
                    push(l, r, model.reflected_dist(&lt, &rt)?);
                }
            } else {
                let model = ordinary_free(&v, base, Box::new(TrivialCongruence), max_depth)?;
                for (l, r) in &queries {
                    let lt = parse_term(l, &v.signature)?;
                    let rt = parse_term(r, &v.signature)?;
                    push(l, r, model.reflected_dist(&lt, &rt)?);
                }
            }
        }
        other => return Err(Error::UnknownModel(other.to_string())),
    }
    Ok(rows)
}
