use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use zerone::format::sig12;
use zerone::graph::{self, ConstructionSpec, FiniteGraph, GraphProperty, RandomSpecParams};
use zerone::info::{self, Dist, JointDist};
use zerone::mc::{McConfig, McReport};
use zerone::probe::{self, ConfigSampler, CopiedSampler, EventFamily, IidSampler};
use zerone::renorm::{self, LocalRule, StabilizationConfig};
use zerone::symmetry::{self, CylinderEvent, FnEvent, PositionalMap, WindowEvent};
use zerone::{Error, Result};

const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "zerone", version, about = "Zero-one law experiments: information bounds, symmetries, renormalization, symmetric graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Monte Carlo worker threads; results do not depend on this.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,

    /// Output file, written atomically with a `.manifest.json` sibling.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Exact entropy, mutual information and distances.
    #[command(subcommand)]
    Info(InfoCmd),
    /// Positional symmetries of cylinder events.
    #[command(subcommand)]
    Sym(SymCmd),
    /// Block renormalization maps.
    #[command(subcommand)]
    Renorm(RenormCmd),
    /// Recursive symmetric graphs and their random subgraphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Zero-one diagnostics.
    #[command(subcommand)]
    Probe(ProbeCmd),
}

#[derive(Subcommand)]
enum InfoCmd {
    Entropy {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        base: f64,
    },
    Mi {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        base: f64,
    },
    Tv {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
    },
    Supdep {
        #[arg(long)]
        joint: PathBuf,
    },
    Oconnell {
        #[arg(long)]
        joint: PathBuf,
        /// Coordinate playing V; the others are the W's in order.
        #[arg(long, default_value_t = 0)]
        v: usize,
    },
    /// Exact TV of two product measures against the sum of factor TVs.
    ProductTv {
        /// Factor distributions of the first product, in order.
        #[arg(long, required = true, num_args = 1..)]
        p: Vec<PathBuf>,
        #[arg(long, required = true, num_args = 1..)]
        q: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SymCmd {
    Check {
        #[arg(long)]
        event: PathBuf,
        #[command(flatten)]
        map: MapArg,
    },
    FindDisjoint {
        /// JSON array of positional maps.
        #[arg(long, conflicts_with = "shift")]
        generators: Option<PathBuf>,
        /// Shift generators, used when no generator file is given.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        shift: Vec<i64>,
        /// The finite index set J.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        j: Vec<i64>,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct MapArg {
    /// Positional map JSON file.
    #[arg(long)]
    map: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    shift: Option<i64>,
}

#[derive(Subcommand)]
enum RenormCmd {
    /// Values at position 0 across levels.
    Trace {
        #[command(flatten)]
        rule: RuleArg,
        /// Concatenated symbol labels on `[-r, r]`; random Bernoulli(p) input when absent.
        #[arg(long)]
        cells: Option<String>,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[arg(long)]
        levels: usize,
    },
    /// Stabilization Monte Carlo on i.i.d. Bernoulli(p) input.
    Mc {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        depth: usize,
        #[arg(long = "from")]
        from: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Orbit of the single-site map.
    Dynamics {
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long)]
        p0: f64,
        #[arg(long)]
        n: usize,
    },
    FixedPoints {
        #[command(flatten)]
        rule: RuleArg,
    },
    /// Argument permutation preserving the rule and moving the centre.
    Symmetry {
        #[command(flatten)]
        rule: RuleArg,
    },
}

#[derive(Args)]
struct RuleArg {
    /// Built-in rule name or a rule JSON file.
    #[arg(long, default_value = "majority")]
    rule: String,
}

#[derive(Args)]
struct SpecArg {
    /// Construction spec JSON; a spec is drawn from --seed when absent.
    #[arg(long)]
    spec: Option<PathBuf>,
}

#[derive(Subcommand)]
enum GraphCmd {
    Build {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
    },
    Sample {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        p: f64,
    },
    Estimate {
        #[command(flatten)]
        spec: SpecArg,
        /// One or more levels.
        #[arg(long, required = true, value_delimiter = ',')]
        level: Vec<usize>,
        #[arg(long)]
        p: f64,
        /// true, has-edge, has-triangle, min-degree-K, connected, has-isolated-vertex.
        #[arg(long)]
        property: String,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SamplerKind {
    Iid,
    Copied,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyKind {
    Full,
    Site,
    Stabilization,
}

#[derive(Args)]
struct SamplerArg {
    #[arg(long, value_enum, default_value_t = SamplerKind::Iid)]
    sampler: SamplerKind,
    /// Site distribution file; Bernoulli(p) when absent.
    #[arg(long)]
    dist: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// Event probabilities along a family of growing cylinder events.
    Curve {
        #[command(flatten)]
        sampler: SamplerArg,
        #[arg(long, value_enum)]
        family: FamilyKind,
        #[command(flatten)]
        rule: RuleArg,
        #[arg(long, default_value_t = 1)]
        symbol: usize,
        /// Stabilization family: levels n - lag ..= n must agree.
        #[arg(long, default_value_t = 1)]
        lag: usize,
        /// Site family: the site index.
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        site: i64,
        #[arg(long, required = true, value_delimiter = ',')]
        levels: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
    /// Plug-in mutual information of bit pairs read from a `y,z` CSV file.
    Mi {
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Finite-family lower bound on short-range correlations.
    Mixing {
        #[command(flatten)]
        sampler: SamplerArg,
        /// V as an event file.
        #[arg(long, conflicts_with = "v_site")]
        v: Option<PathBuf>,
        /// V = {a_site = 1}.
        #[arg(long, allow_negative_numbers = true)]
        v_site: Option<i64>,
        /// The window K containing V.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        k: Vec<i64>,
        /// W events as files.
        #[arg(long)]
        w: Vec<PathBuf>,
        /// W events {a_site = 1}.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w_site: Vec<i64>,
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
    },
}

/// Reads input files and remembers their hashes for the manifest.
#[derive(Default)]
struct Inputs {
    hashes: BTreeMap<String, String>,
}

impl Inputs {
    fn read(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        self.hashes
            .insert(path.display().to_string(), hex::encode(Sha256::digest(&bytes)));
        Ok(bytes)
    }

    fn json<T: DeserializeOwned>(&mut self, path: &Path) -> Result<T> {
        let bytes = self.read(path)?;
        serde_json::from_slice(&bytes)
            .map_err(|e| Error::Validation(format!("{}: {e}", path.display())))
    }

    fn rule(&mut self, name: &str) -> Result<LocalRule> {
        match renorm::builtin_rule(name) {
            Some(rule) => Ok(rule),
            None if Path::new(name).exists() => self.json(Path::new(name)),
            None => Err(Error::Validation(format!(
                "unknown rule {name:?}; built-ins are {}",
                renorm::BUILTIN_RULES.join(", ")
            ))),
        }
    }

    fn spec(&mut self, arg: &SpecArg, levels: usize, seed: u64) -> Result<ConstructionSpec> {
        match &arg.spec {
            Some(path) => self.json(path),
            None => Ok(ConstructionSpec::random(
                &RandomSpecParams {
                    levels,
                    ..RandomSpecParams::default()
                },
                seed,
            )),
        }
    }

    fn sampler(&mut self, arg: &SamplerArg) -> Result<Box<dyn ConfigSampler>> {
        let dist = match &arg.dist {
            Some(path) => self.json(path)?,
            None => Dist::bernoulli(arg.p)?,
        };
        Ok(match arg.sampler {
            SamplerKind::Iid => Box::new(IidSampler(dist)),
            SamplerKind::Copied => Box::new(CopiedSampler(dist)),
        })
    }
}

struct Output {
    json: Value,
    csv: String,
}

struct Table {
    text: String,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self {
            text: format!("{}\n", header.join(",")),
        }
    }

    fn row(&mut self, cells: &[String]) {
        self.text.push_str(&cells.join(","));
        self.text.push('\n');
    }
}

fn quantities(pairs: &[(&str, f64)]) -> String {
    let mut t = Table::new(&["quantity", "value"]);
    for (k, v) in pairs {
        t.row(&[k.to_string(), sig12(*v)]);
    }
    t.text
}

fn to_json<T: Serialize>(value: &T) -> Result<Value> {
    Ok(serde_json::to_value(value)?)
}

/// Rounds every float to 12 significant digits so text output is stable.
fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            sig12(x)
                .parse::<f64>()
                .ok()
                .and_then(serde_json::Number::from_f64)
                .map_or(Value::Number(n), Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn report_row(r: &McReport) -> Vec<String> {
    vec![sig12(r.estimate), sig12(r.ci_low), sig12(r.ci_high)]
}

fn mc(cli: &Cli, samples: u64) -> McConfig {
    McConfig::new(samples, cli.seed).with_workers(cli.workers)
}

fn run_info(cmd: &InfoCmd, inputs: &mut Inputs) -> Result<Output> {
    match cmd {
        InfoCmd::Entropy { dist, base } => {
            let d: Dist = inputs.json(dist)?;
            let h = info::entropy(&d, *base)?;
            Ok(Output {
                json: json!({ "entropy": h, "base": base }),
                csv: quantities(&[("entropy", h)]),
            })
        }
        InfoCmd::Mi { joint, base } => {
            let j: JointDist = inputs.json(joint)?;
            let mi = info::mutual_information(&j, *base)?;
            Ok(Output {
                json: json!({ "mutual_information": mi, "base": base }),
                csv: quantities(&[("mutual_information", mi)]),
            })
        }
        InfoCmd::Tv { p, q } => {
            let (p, q): (Dist, Dist) = (inputs.json(p)?, inputs.json(q)?);
            let tv = info::tv_distance(&p, &q)?;
            Ok(Output {
                json: json!({ "tv": tv }),
                csv: quantities(&[("tv", tv)]),
            })
        }
        InfoCmd::Supdep { joint } => {
            let j: JointDist = inputs.json(joint)?;
            let w = info::sup_dependence_witness(&j)?;
            let subset = |mask: u32, n: usize| -> Vec<usize> { (0..n).filter(|i| mask >> i & 1 == 1).collect() };
            let sizes = j.sizes();
            Ok(Output {
                json: json!({
                    "sup_dependence": w.value,
                    "a": subset(w.a_mask, sizes[0]),
                    "b": subset(w.b_mask, sizes[1]),
                }),
                csv: quantities(&[("sup_dependence", w.value)]),
            })
        }
        InfoCmd::Oconnell { joint, v } => {
            let j: JointDist = inputs.json(joint)?;
            let r = info::oconnell_report(&j, *v)?;
            let mut json = to_json(&r)?;
            json["independent_bound_holds"] = r.independent_bound_holds().into();
            json["approximate_bound_holds"] = r.approximate_bound_holds().into();
            let mut rows = vec![("entropy_bits", r.entropy_bits), ("gap", r.gap), ("gamma_star", r.gamma_star)];
            let names: Vec<String> = (1..=r.n()).map(|i| format!("mi_w{i}")).collect();
            rows.extend(names.iter().map(String::as_str).zip(r.mi_terms.iter().copied()));
            Ok(Output {
                json,
                csv: quantities(&rows),
            })
        }
        InfoCmd::ProductTv { p, q } => {
            if p.len() != q.len() {
                return Err(Error::Validation(format!("{} p factors but {} q factors", p.len(), q.len())));
            }
            let ps: Vec<Dist> = p.iter().map(|f| inputs.json(f)).collect::<Result<_>>()?;
            let qs: Vec<Dist> = q.iter().map(|f| inputs.json(f)).collect::<Result<_>>()?;
            let exact = info::tv_distance_joint(&info::product_dist(&ps)?, &info::product_dist(&qs)?)?;
            let factors: Vec<f64> = ps
                .iter()
                .zip(&qs)
                .map(|(a, b)| info::tv_distance(a, b))
                .collect::<Result<_>>()?;
            let bound: f64 = factors.iter().sum();
            Ok(Output {
                json: json!({ "tv": exact, "factor_tv": factors, "sum_bound": bound }),
                csv: quantities(&[("tv", exact), ("sum_bound", bound)]),
            })
        }
    }
}

fn run_sym(cmd: &SymCmd, inputs: &mut Inputs) -> Result<Output> {
    match cmd {
        SymCmd::Check { event, map } => {
            let e: CylinderEvent = inputs.json(event)?;
            let m = match (&map.map, map.shift) {
                (Some(path), _) => inputs.json(path)?,
                (None, Some(k)) => PositionalMap::shift(k),
                (None, None) => unreachable!("clap enforces one map argument"),
            };
            let ok = symmetry::is_positional_symmetry(&e, &m)?;
            Ok(Output {
                json: json!({ "symmetric": ok }),
                csv: format!("symmetric\n{ok}\n"),
            })
        }
        SymCmd::FindDisjoint {
            generators,
            shift,
            j,
            max_depth,
        } => {
            let gens: Vec<PositionalMap> = match generators {
                Some(path) => inputs.json(path)?,
                None => shift.iter().map(|&k| PositionalMap::shift(k)).collect(),
            };
            let found = symmetry::find_disjoint_map(&gens, j, *max_depth)?;
            let mut t = Table::new(&["j", "image"]);
            if let Some(m) = &found {
                for &k in j {
                    t.row(&[k.to_string(), m.eval(k).to_string()]);
                }
            }
            Ok(Output {
                json: json!({ "found": found.is_some(), "map": found }),
                csv: t.text,
            })
        }
    }
}

fn parse_cells(rule: &LocalRule, cells: &str) -> Result<renorm::Line> {
    let alphabet = rule.alphabet();
    let width = alphabet.label(0).len().max(1);
    if !cells.len().is_multiple_of(width) {
        return Err(Error::Validation(format!("cells length is not a multiple of the label length {width}")));
    }
    let values: Vec<usize> = (0..cells.len() / width)
        .map(|i| {
            let label = &cells[i * width..(i + 1) * width];
            alphabet
                .position(label)
                .ok_or_else(|| Error::Validation(format!("unknown symbol {label:?}")))
        })
        .collect::<Result<_>>()?;
    if values.len().is_multiple_of(2) {
        return Err(Error::Validation("cells must cover [-r, r], an odd number of sites".to_string()));
    }
    renorm::Line::new((values.len() as i64 - 1) / 2, values)
}

fn run_renorm(cmd: &RenormCmd, cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    match cmd {
        RenormCmd::Trace { rule, cells, p, levels } => {
            let rule = inputs.rule(&rule.rule)?;
            let line = match cells {
                Some(cells) => parse_cells(&rule, cells)?,
                None => {
                    if !(0.0..=1.0).contains(p) {
                        return Err(Error::Validation(format!("p = {p} outside [0, 1]")));
                    }
                    let radius = renorm::required_radius(&rule, *levels)?;
                    zerone::budget::check("trace input sites", 2 * radius as u128 + 1)?;
                    renorm::Line::from_fn(radius, |k| {
                        usize::from(zerone::rng::bernoulli(cli.seed, 0, zerone::rng::site_counter(k), *p))
                    })
                }
            };
            let trace = renorm::trace_at_zero(&line, &rule, *levels)?;
            let labels: Vec<&str> = trace.values.iter().map(|&v| rule.alphabet().label(v)).collect();
            let mut t = Table::new(&["n", "value"]);
            for (n, l) in labels.iter().enumerate() {
                t.row(&[n.to_string(), l.to_string()]);
            }
            Ok(Output {
                json: json!({ "levels": trace.levels, "values": labels, "window_radius_used": trace.window_radius_used }),
                csv: t.text,
            })
        }
        RenormCmd::Mc {
            rule,
            p,
            depth,
            from,
            samples,
        } => {
            let rule = inputs.rule(&rule.rule)?;
            let cfg = StabilizationConfig {
                p: *p,
                depth: *depth,
                stabilize_from: *from,
                mc: mc(cli, *samples),
            };
            let r = renorm::stabilization_probe(&rule, &cfg)?;
            let mut t = Table::new(&["symbol", "estimate", "ci_low", "ci_high", "samples"]);
            for (s, rep) in [(1, &r.ones), (0, &r.zeros)] {
                let mut row = vec![s.to_string()];
                row.extend(report_row(rep));
                row.push(rep.samples.to_string());
                t.row(&row);
            }
            let mut json = to_json(&r)?;
            if let Some(cfg) = json.get_mut("config").and_then(Value::as_object_mut) {
                cfg.remove("workers");
            }
            Ok(Output { json, csv: t.text })
        }
        RenormCmd::Dynamics { rule, p0, n } => {
            let rule = inputs.rule(&rule.rule)?;
            let orbit = renorm::iterate_dynamics(&rule, *p0, *n)?;
            let mut t = Table::new(&["n", "value"]);
            for (i, x) in orbit.iter().enumerate() {
                t.row(&[i.to_string(), sig12(*x)]);
            }
            Ok(Output {
                json: json!({ "p0": p0, "orbit": orbit }),
                csv: t.text,
            })
        }
        RenormCmd::FixedPoints { rule } => {
            let rule = inputs.rule(&rule.rule)?;
            let r = renorm::fixed_points(&rule)?;
            let mut t = Table::new(&["p", "derivative", "stability"]);
            for fp in &r.points {
                t.row(&[sig12(fp.p), sig12(fp.derivative), fp.stability.to_string()]);
            }
            Ok(Output {
                json: to_json(&r)?,
                csv: t.text,
            })
        }
        RenormCmd::Symmetry { rule } => {
            let rule = inputs.rule(&rule.rule)?;
            let sigma = renorm::central_moving_symmetry(&rule)?;
            let mut t = Table::new(&["position", "image"]);
            for (i, s) in sigma.iter().flatten().enumerate() {
                t.row(&[i.to_string(), s.to_string()]);
            }
            Ok(Output {
                json: json!({ "found": sigma.is_some(), "permutation": sigma }),
                csv: t.text,
            })
        }
    }
}

fn build_graph(inputs: &mut Inputs, spec: &SpecArg, level: usize, seed: u64) -> Result<FiniteGraph> {
    let spec = inputs.spec(spec, level, seed)?;
    graph::build(&spec, level)
}

fn run_graph(cmd: &GraphCmd, cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    match cmd {
        GraphCmd::Build { spec, level } => {
            let g = build_graph(inputs, spec, *level, cli.seed)?;
            Ok(Output {
                json: g.to_adjacency_json(),
                csv: g.to_csv(),
            })
        }
        GraphCmd::Sample { spec, level, p } => {
            let g = build_graph(inputs, spec, *level, cli.seed)?;
            let keep = graph::sample_subgraph(&g, *p, cli.seed)?;
            let kept: Vec<usize> = (0..keep.len()).filter(|&e| keep[e]).collect();
            Ok(Output {
                json: json!({ "level": level, "p": p, "seed": cli.seed, "edges": g.edge_count(), "kept": kept }),
                csv: g.edges_csv(Some(&keep)),
            })
        }
        GraphCmd::Estimate {
            spec,
            level,
            p,
            property,
            samples,
        } => {
            let property: GraphProperty = property.parse()?;
            let top = level.iter().copied().max().unwrap_or(0);
            let spec = inputs.spec(spec, top, cli.seed)?;
            let mut t = Table::new(&["level", "estimate", "ci_low", "ci_high"]);
            let mut reports = Vec::new();
            for &n in level {
                let g = graph::build(&spec, n)?;
                let r = graph::estimate_property(&g, *p, &property, &mc(cli, *samples))?;
                let mut row = vec![n.to_string()];
                row.extend(report_row(&r));
                t.row(&row);
                reports.push(r);
            }
            Ok(Output {
                json: to_json(&reports)?,
                csv: t.text,
            })
        }
    }
}

fn site_event(site: i64, alphabet_size: usize) -> FnEvent {
    FnEvent::new(vec![site], alphabet_size, |v| v[0] == 1)
}

fn read_pairs(inputs: &mut Inputs, path: &Path) -> Result<Vec<(bool, bool)>> {
    let bytes = inputs.read(path)?;
    let mut reader = csv::Reader::from_reader(bytes.as_slice());
    let bit = |s: &str| match s.trim() {
        "0" | "false" => Ok(false),
        "1" | "true" => Ok(true),
        other => Err(Error::Validation(format!("not a bit: {other:?}"))),
    };
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
            if rec.len() != 2 {
                return Err(Error::Validation(format!("{}: expected columns y,z", path.display())));
            }
            Ok((bit(&rec[0])?, bit(&rec[1])?))
        })
        .collect()
}

fn run_probe(cmd: &ProbeCmd, cli: &Cli, inputs: &mut Inputs) -> Result<Output> {
    match cmd {
        ProbeCmd::Curve {
            sampler,
            family,
            rule,
            symbol,
            lag,
            site,
            levels,
            samples,
        } => {
            let sampler = inputs.sampler(sampler)?;
            let family = match family {
                FamilyKind::Full => EventFamily::full(sampler.alphabet_size()),
                FamilyKind::Site => EventFamily::site_equals(*site, *symbol, sampler.alphabet_size()),
                FamilyKind::Stabilization => EventFamily::stabilization(&inputs.rule(&rule.rule)?, *symbol, *lag),
            };
            let r = probe::event_probability_curve(&family, sampler.as_ref(), levels, &mc(cli, *samples))?;
            let mut t = Table::new(&["level", "estimate", "ci_low", "ci_high", "d_n"]);
            for pt in &r.points {
                let mut row = vec![pt.level.to_string()];
                row.extend(report_row(&pt.report));
                row.push(sig12(pt.d_n));
                t.row(&row);
            }
            Ok(Output {
                json: to_json(&r)?,
                csv: t.text,
            })
        }
        ProbeCmd::Mi { pairs } => {
            let pairs = read_pairs(inputs, pairs)?;
            let mi = probe::empirical_mi(&pairs)?;
            Ok(Output {
                json: json!({ "mi_bits": mi, "samples": pairs.len() }),
                csv: quantities(&[("mi_bits", mi)]),
            })
        }
        ProbeCmd::Mixing {
            sampler,
            v,
            v_site,
            k,
            w,
            w_site,
            samples,
        } => {
            let sampler = inputs.sampler(sampler)?;
            let q = sampler.alphabet_size();
            let v_event: Box<dyn WindowEvent> = match (v, v_site) {
                (Some(path), _) => Box::new(inputs.json::<CylinderEvent>(path)?),
                (None, Some(s)) => Box::new(site_event(*s, q)),
                (None, None) => return Err(Error::Validation("give --v or --v-site".to_string())),
            };
            let mut ws: Vec<Box<dyn WindowEvent>> = Vec::new();
            for path in w {
                ws.push(Box::new(inputs.json::<CylinderEvent>(path)?));
            }
            ws.extend(w_site.iter().map(|&s| Box::new(site_event(s, q)) as Box<dyn WindowEvent>));
            let refs: Vec<&dyn WindowEvent> = ws.iter().map(|b| b.as_ref()).collect();
            let r = probe::mixing_probe(sampler.as_ref(), v_event.as_ref(), k, &refs, &mc(cli, *samples))?;
            let mut t = Table::new(&["w", "dependence"]);
            for (i, d) in r.per_w.iter().enumerate() {
                t.row(&[i.to_string(), sig12(*d)]);
            }
            t.row(&["max_lower_bound".to_string(), sig12(r.value)]);
            Ok(Output {
                json: to_json(&r)?,
                csv: t.text,
            })
        }
    }
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command: Vec<String>,
    seed: u64,
    inputs: &'a BTreeMap<String, String>,
    version: &'static str,
    timestamp_unix: u64,
    output_sha256: String,
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    let mut inputs = Inputs::default();
    let output = match &cli.command {
        Command::Info(cmd) => run_info(cmd, &mut inputs)?,
        Command::Sym(cmd) => run_sym(cmd, &mut inputs)?,
        Command::Renorm(cmd) => run_renorm(cmd, cli, &mut inputs)?,
        Command::Graph(cmd) => run_graph(cmd, cli, &mut inputs)?,
        Command::Probe(cmd) => run_probe(cmd, cli, &mut inputs)?,
    };
    let text = match cli.format {
        Format::Csv => output.csv,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&round_floats(output.json))?),
    };
    let manifest = RunManifest {
        command: std::env::args().collect(),
        seed: cli.seed,
        inputs: &inputs.hashes,
        version: env!("CARGO_PKG_VERSION"),
        timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
        output_sha256: hex::encode(Sha256::digest(text.as_bytes())),
    };
    let manifest = serde_json::to_string_pretty(&manifest)?;
    match &cli.out {
        Some(path) => {
            write_atomic(path, text.as_bytes())?;
            let mut name = path.as_os_str().to_owned();
            name.push(".manifest.json");
            write_atomic(Path::new(&name), format!("{manifest}\n").as_bytes())?;
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            eprintln!("{manifest}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zerone: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
