use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Serialize;

use kstruct::codec::BitString;
use kstruct::descsys::{parse_descriptor, DescriptionSystem, FiniteSet};
use kstruct::experiments::{
    cylinder_system, gap_report, hamming_system, nonstoch as plant, patches_system, soi_defect, NonstochPlan,
};
use kstruct::export;
use kstruct::modelclasses::{
    parse_fn, parse_pmf, pmf_codebook, pmf_structure, restrict_fn, restrict_pmf, set_to_fn, set_to_pmf,
};
use kstruct::predict::{evaluate_loss, parse_strategy, set_to_strategy, snooping_curve, strategy_to_set, StrategyCodebook};
use kstruct::search::{anytime_search, improvement_audit, SearchMode};
use kstruct::structfn::{profile as profile_one, profile_all};
use kstruct::synth::{adversarial_run, cover_family, parse_cover_records, parse_stream, synthesize};
use kstruct::unistat::{
    build_index, build_sli, dominance, induced_data, induced_levels, level_prefix, muchnik_lambda,
    parse_enumeration, reconstruct_from_prefix, DObject, EnumeratedD,
};
use kstruct::LogBits;

use crate::{Artifact, CliError, CliResult, Context, Format};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn bits(s: &str) -> CliResult<BitString> {
    s.parse().map_err(|e: kstruct::Error| usage(format!("--x: {e}")))
}

fn builtin_dims(rest: &str, want: usize) -> CliResult<Vec<u32>> {
    let dims: Vec<u32> = rest
        .split(':')
        .map(|v| v.parse::<u32>().map_err(|_| usage(format!("bad builtin parameter {v:?}"))))
        .collect::<CliResult<_>>()?;
    if dims.len() != want {
        return Err(usage(format!("expected {want} builtin parameters, found {}", dims.len())));
    }
    Ok(dims)
}

pub fn load_system(ctx: &mut Context, spec: &str) -> CliResult<DescriptionSystem> {
    let Some(name) = spec.strip_prefix("builtin:") else {
        let text = ctx.read(Path::new(spec))?;
        return Ok(parse_descriptor(&text)?.build()?);
    };
    ctx.builtin(spec);
    let (kind, rest) = name.split_once(':').unwrap_or((name, ""));
    let sys = match kind {
        "fixture-a" if rest.is_empty() => DescriptionSystem::fixture_a(),
        "hamming" => hamming_system(builtin_dims(rest, 1)?[0])?,
        "patches" => {
            let d = builtin_dims(rest, 2)?;
            patches_system(d[0], d[1])?
        }
        "cylinder" => {
            let d = builtin_dims(rest, 2)?;
            cylinder_system(d[0], d[1])?
        }
        _ => return Err(usage(format!("unknown builtin system {spec:?}"))),
    };
    Ok(sys)
}

fn default_alpha(sys: &DescriptionSystem) -> u32 {
    sys.max_set_program_len()
}

pub fn profile(
    ctx: &mut Context,
    system: &str,
    x: Option<&str>,
    alpha_max: Option<u32>,
    slack: Option<i64>,
    fmt: Format,
) -> CliResult<Vec<Artifact>> {
    let sys = load_system(ctx, system)?;
    let alpha_max = alpha_max.unwrap_or_else(|| default_alpha(&sys));
    let profiles = match x {
        Some(x) => vec![profile_one(&sys, &bits(x)?, alpha_max, slack)?],
        None => profile_all(&sys, alpha_max, slack),
    };
    let sidecars: Vec<_> = profiles.iter().map(|p| export::profile_sidecar(&sys, p)).collect();
    let sidecar = if x.is_some() {
        Artifact::json("profile.json", &sidecars[0])
    } else {
        Artifact::json("profile.json", &sidecars)
    };
    Ok(match fmt {
        Format::Csv => {
            let csv = if x.is_some() {
                export::profile_csv(&profiles[0])
            } else {
                export::profiles_csv(&profiles)
            };
            vec![Artifact::new("profile.csv", csv), sidecar]
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Full<'a, S: Serialize> {
                profiles: &'a [kstruct::StructureProfile],
                sidecars: &'a S,
            }
            vec![Artifact::json(
                "profile.json",
                &Full {
                    profiles: &profiles,
                    sidecars: &sidecars,
                },
            )]
        }
    })
}

#[allow(clippy::too_many_arguments)]
pub fn search(
    ctx: &mut Context,
    system: &str,
    x: &str,
    alpha: u32,
    mode: &str,
    seeds: &[u64],
    audit_c: Option<f64>,
    fmt: Format,
) -> CliResult<Vec<Artifact>> {
    let mode: SearchMode = mode.parse().map_err(|e: kstruct::Error| usage(e.to_string()))?;
    let sys = load_system(ctx, system)?;
    let x = bits(x)?;
    #[derive(Serialize)]
    struct Run {
        seed: u64,
        trace: kstruct::search::SearchTrace,
        audit: Option<kstruct::search::ImprovementAudit>,
    }
    let mut runs = Vec::new();
    for &seed in seeds {
        let stream = sys.enumeration_stream(seed);
        let trace = anytime_search(&sys, &x, alpha, &stream, mode)?;
        let audit = match audit_c {
            Some(c) => Some(improvement_audit(&sys, &x, &trace, c)?),
            None => None,
        };
        runs.push(Run { seed, trace, audit });
    }
    let finals: Vec<LogBits> = runs.iter().map(|r| r.trace.final_objective()).collect();
    let seed_independent = finals.windows(2).all(|w| w[0] == w[1]);
    Ok(match fmt {
        Format::Csv => {
            let mut csv = String::from("seed,time,program,cardinality,objective\n");
            for r in &runs {
                for d in &r.trace.declared {
                    csv.push_str(&format!(
                        "{},{},{},{},{}\n",
                        r.seed,
                        d.time,
                        d.program.to_token(),
                        d.cardinality,
                        d.objective
                    ));
                }
            }
            let summary = serde_json::json!({
                "x": x.to_token(),
                "alpha": alpha,
                "mode": mode,
                "seeds": seeds,
                "final_objectives": finals,
                "seed_independent": seed_independent,
                "audits": runs.iter().map(|r| &r.audit).collect::<Vec<_>>(),
            });
            vec![Artifact::new("search.csv", csv), Artifact::json("search.json", &summary)]
        }
        Format::Json => {
            let report = serde_json::json!({
                "x": x.to_token(),
                "alpha": alpha,
                "mode": mode,
                "runs": runs,
                "final_objectives": finals,
                "seed_independent": seed_independent,
            });
            vec![Artifact::json("search.json", &report)]
        }
    })
}

pub fn synth(
    ctx: &mut Context,
    stream: Option<&Path>,
    target: Option<&str>,
    n: Option<u32>,
    seed: Option<u64>,
) -> CliResult<Vec<Artifact>> {
    let run = match (stream, target, n) {
        (Some(path), _, _) => {
            let text = ctx.read(path)?;
            let (universe, target, events) = parse_stream(&text)?;
            synthesize(&target, &universe, &events)?
        }
        (None, Some(target), Some(n)) => {
            let seed = seed.ok_or_else(|| usage("an adversarial run needs --seed"))?;
            let curve = target
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| usage(format!("bad target value {v:?}"))))
                .collect::<CliResult<Vec<u32>>>()?;
            if n > 16 {
                return Err(usage("--n must be at most 16"));
            }
            adversarial_run(&curve, &FiniteSet::cube(n), seed)?
        }
        _ => return Err(usage("synth needs --stream, or --target with --n and --seed")),
    };
    let report = serde_json::json!({ "violations": run.violations(), "run": run });
    Ok(vec![Artifact::json("synth.json", &report)])
}

pub fn cover(ctx: &mut Context, records: &Path, x: &str, delta: Option<u32>) -> CliResult<Vec<Artifact>> {
    let text = ctx.read(records)?;
    let (_, recs) = parse_cover_records(&text)?;
    let run = cover_family(&recs, &bits(x)?, delta)?;
    let report = serde_json::json!({
        "covered": run.covered(),
        "violations": run.violations(),
        "run": run,
    });
    Ok(vec![Artifact::json("cover.json", &report)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Induced {
    /// Strings with their complexities.
    Strings,
    /// Sets and strings at every level.
    All,
}

#[derive(Args, Debug)]
pub struct UnistatArgs {
    /// Descriptor file or `builtin:` system whose enumeration is used.
    #[arg(long, conflicts_with = "enumeration")]
    system: Option<String>,
    /// Enumeration fixture instead of a system.
    #[arg(long)]
    enumeration: Option<PathBuf>,
    /// Level bound; the enumeration's own by default.
    #[arg(long)]
    l: Option<u32>,
    /// Which enumeration a system induces.
    #[arg(long, value_enum, default_value_t = Induced::Strings)]
    induced: Induced,
    /// Object to index: a bit string or `{a,b,...}`.
    #[arg(long)]
    x: Option<String>,
    /// Block `S_i^l` to build.
    #[arg(long)]
    i: Option<u32>,
    /// Reconstruct every object of this level from its prefix.
    #[arg(long)]
    reconstruct: Option<u32>,
    /// Reconstruct the MDL curve of `--x` from the level enumeration.
    #[arg(long, requires_all = ["x", "alpha0"])]
    muchnik: bool,
    /// Last complexity at which set pairs count; above it the curve is `K(x)`.
    #[arg(long)]
    alpha0: Option<u32>,
    /// Check a model of `--x` (comma-separated strings) against its block.
    #[arg(long, requires = "x")]
    model: Option<String>,
    /// Added to the model's two-part length to pick the level.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    extra: i64,
    /// Also write the enumeration as a fixture.
    #[arg(long)]
    export: bool,
}

fn parse_members(spec: &str, n: u32) -> CliResult<FiniteSet> {
    let strings = spec
        .split(',')
        .map(|s| s.trim().parse::<BitString>().map_err(|e| usage(format!("set member {s:?}: {e}"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(FiniteSet::from_strings(n, &strings)?)
}

pub fn unistat(ctx: &mut Context, a: &UnistatArgs, fmt: Format) -> CliResult<Vec<Artifact>> {
    let mut sys = None;
    let d: EnumeratedD = match (&a.system, &a.enumeration) {
        (Some(spec), None) => {
            let s = load_system(ctx, spec)?;
            let data_max = s.data_programs().iter().map(|(p, _)| p.len() as u32).max().unwrap_or(0);
            let d = match a.induced {
                Induced::Strings => induced_data(&s, a.l.unwrap_or(data_max)),
                Induced::All => induced_levels(&s, a.l.unwrap_or(data_max.max(s.max_set_program_len()))),
            };
            sys = Some(s);
            d
        }
        (None, Some(path)) => {
            let d = parse_enumeration(&ctx.read(path)?)?;
            match a.l {
                Some(l) => d.at_level(l),
                None => d,
            }
        }
        _ => return Err(usage("unistat needs exactly one of --system and --enumeration")),
    };
    let object = match &a.x {
        Some(x) => Some(x.parse::<DObject>().map_err(|e: kstruct::Error| usage(format!("--x: {e}")))?),
        None => None,
    };
    let mut report = serde_json::json!({ "l": d.l(), "count": d.count(), "width": d.width() });
    if let Some(o) = &object {
        report["index"] = serde_json::to_value(build_index(&d, o)).expect("serializable");
    }
    if let Some(i) = a.i {
        report["block"] = serde_json::to_value(build_sli(&d, i)?).expect("serializable");
    }
    if let Some(i) = a.reconstruct {
        let prefix = level_prefix(&d, i);
        let objects = match &prefix {
            Some(m) => reconstruct_from_prefix(&d, i, m)?,
            None => Vec::new(),
        };
        report["reconstruction"] = serde_json::json!({
            "level": i,
            "prefix": prefix,
            "objects": objects,
        });
    }
    let mut curve = None;
    if a.muchnik {
        let x = match &object {
            Some(DObject::Str(s)) => s.clone(),
            _ => return Err(usage("--muchnik needs a string --x")),
        };
        let alpha0 = a.alpha0.expect("required by clap");
        let values = muchnik_lambda(&d, &x, d.l(), alpha0)?;
        report["muchnik"] = serde_json::to_value(&values).expect("serializable");
        curve = Some(values);
    }
    if let Some(model) = &a.model {
        let sys = sys.as_ref().ok_or_else(|| usage("--model needs --system"))?;
        let x = match &object {
            Some(DObject::Str(s)) => s.clone(),
            _ => return Err(usage("--model needs a string --x")),
        };
        let s = parse_members(model, sys.universe())?;
        report["dominance"] = serde_json::to_value(dominance(sys, &x, &s, a.extra)?).expect("serializable");
    }
    let mut out = match (fmt, curve) {
        (Format::Csv, Some(values)) => vec![
            Artifact::new("muchnik.csv", export::curve_csv("lambda", &values)),
            Artifact::json("unistat.json", &report),
        ],
        _ => vec![Artifact::json("unistat.json", &report)],
    };
    if a.export {
        out.push(Artifact::new("enumeration.tsv", d.to_fixture()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SnoopClass {
    Strategy,
    Pmf,
}

pub fn snoop(
    ctx: &mut Context,
    system: &str,
    x: &str,
    alpha_max: Option<u32>,
    class: SnoopClass,
    fmt: Format,
) -> CliResult<Vec<Artifact>> {
    let sys = load_system(ctx, system)?;
    let x = bits(x)?;
    sys.word(&x)?;
    let alpha_max = alpha_max.unwrap_or_else(|| default_alpha(&sys));
    match class {
        SnoopClass::Strategy => {
            let book = StrategyCodebook::from_sets(&sys)?;
            let curve = snooping_curve(&book, &x, alpha_max)?;
            Ok(match fmt {
                Format::Csv => vec![Artifact::new("snoop.csv", export::snoop_csv(&curve))],
                Format::Json => vec![Artifact::json("snoop.json", &curve)],
            })
        }
        SnoopClass::Pmf => {
            let book = pmf_codebook(&sys);
            let curve = pmf_structure(&book, &x, alpha_max);
            let rows: Vec<(u32, Option<String>, Option<String>)> = curve
                .iter()
                .enumerate()
                .map(|(a, v)| match v {
                    Some((p, prog)) => (a as u32, Some(p.to_string()), Some(prog.to_token())),
                    None => (a as u32, None, None),
                })
                .collect();
            Ok(match fmt {
                Format::Csv => {
                    let mut csv = String::from("alpha,probability,witness_program\n");
                    for (a, p, w) in &rows {
                        csv.push_str(&format!("{a},{},{}\n", p.as_deref().unwrap_or("0"), w.as_deref().unwrap_or("")));
                    }
                    vec![Artifact::new("snoop.csv", csv)]
                }
                Format::Json => {
                    let v: Vec<_> = rows
                        .iter()
                        .map(|(a, p, w)| serde_json::json!({ "alpha": a, "probability": p, "witness_program": w }))
                        .collect();
                    vec![Artifact::json("snoop.json", &v)]
                }
            })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Pmf,
    Fn,
    Strategy,
}

#[derive(Args, Debug)]
pub struct ConvertArgs {
    /// Comma-separated members of a set to convert.
    #[arg(long, requires = "to", conflicts_with_all = ["pmf", "function", "strategy"])]
    set: Option<String>,
    /// Target class for `--set`.
    #[arg(long, value_enum)]
    to: Option<Target>,
    /// Mass function fixture to restrict to a set around `--x`.
    #[arg(long, requires = "x", conflicts_with_all = ["function", "strategy"])]
    pmf: Option<PathBuf>,
    /// Total function fixture to restrict to a set around `--x`.
    #[arg(long = "fn", id = "function", requires = "x", conflicts_with = "strategy")]
    function: Option<PathBuf>,
    /// Strategy fixture to turn into a set (with `--m`) or score on `--x`.
    #[arg(long)]
    strategy: Option<PathBuf>,
    /// Loss bound for the strategy-to-set direction.
    #[arg(long)]
    m: Option<u32>,
    /// String the conversion is centred on.
    #[arg(long)]
    x: Option<String>,
}

pub fn convert(ctx: &mut Context, a: &ConvertArgs) -> CliResult<Vec<Artifact>> {
    if let Some(members) = &a.set {
        let first = members.split(',').next().unwrap_or("");
        let n = first.trim().len() as u32;
        let s = parse_members(members, n)?;
        let art = match a.to.expect("required by clap") {
            Target::Pmf => Artifact::new("model.pmf", set_to_pmf(&s).to_fixture()),
            Target::Fn => Artifact::new("model.fn", set_to_fn(&s).to_fixture()),
            Target::Strategy => Artifact::new("model.strategy", set_to_strategy(&s)?.to_fixture()),
        };
        return Ok(vec![art]);
    }
    if let Some(path) = &a.pmf {
        let model = parse_pmf(&ctx.read(path)?)?;
        let r = restrict_pmf(&model, &bits(a.x.as_deref().expect("required by clap"))?)?;
        return Ok(vec![Artifact::json("restriction.json", &r)]);
    }
    if let Some(path) = &a.function {
        let model = parse_fn(&ctx.read(path)?)?;
        let r = restrict_fn(&model, &bits(a.x.as_deref().expect("required by clap"))?)?;
        return Ok(vec![Artifact::json("restriction.json", &r)]);
    }
    if let Some(path) = &a.strategy {
        let p = parse_strategy(&ctx.read(path)?)?;
        let mut report = serde_json::json!({ "horizon": p.horizon() });
        if let Some(x) = &a.x {
            let loss = evaluate_loss(&p, &bits(x)?)?;
            report["loss_bits"] = serde_json::json!(loss.bits());
            report["loss_exact"] = serde_json::to_value(loss.exact()).expect("serializable");
        }
        if let Some(m) = a.m {
            let set = strategy_to_set(&p, LogBits::int(i64::from(m)))?;
            report["m"] = serde_json::json!(m);
            report["set"] = serde_json::to_value(set).expect("serializable");
        }
        if a.x.is_none() && a.m.is_none() {
            return Err(usage("--strategy needs --x or --m"));
        }
        return Ok(vec![Artifact::json("conversion.json", &report)]);
    }
    Err(usage("convert needs one of --set, --pmf, --fn, --strategy"))
}

pub fn audit(
    ctx: &mut Context,
    system: &str,
    gaps: bool,
    alpha_max: Option<u32>,
    seeds: &[u64],
    sample: usize,
) -> CliResult<Vec<Artifact>> {
    let sys = load_system(ctx, system)?;
    let mut report = serde_json::json!({
        "universe": sys.universe(),
        "programs": sys.program_count(),
        "sets": sys.sets().len(),
        "kraft": sys.kraft(),
        "c_sub": sys.c_sub(),
        "soi": soi_defect(&sys),
    });
    if gaps {
        if seeds.is_empty() {
            return Err(usage("--gaps runs searches and needs --seed"));
        }
        let alpha_max = alpha_max.unwrap_or_else(|| default_alpha(&sys));
        report["gaps"] = serde_json::to_value(gap_report(system, &sys, alpha_max, seeds, sample)?).expect("serializable");
    }
    Ok(vec![Artifact::json("audit.json", &report)])
}

pub fn nonstoch(n: u32, level: u32, alpha0: u32, count: usize, seed: u64) -> CliResult<Vec<Artifact>> {
    let plan = NonstochPlan {
        n,
        level,
        alpha0,
        count,
        seed,
    };
    let (sys, report) = plant(&plan)?;
    Ok(vec![
        Artifact::json("nonstoch.json", &report),
        Artifact::new("system.ks", sys.to_descriptor().to_string()),
    ])
}
