use std::fs;
use std::path::{Path, PathBuf};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use netboot::bootstrap::{bootstrap_distribution, build_ci, two_level_multi, CiInputs, CiKind, TwoLevelConfig};
use netboot::experiment::{
    giant_component, report_dataset, run_coverage_experiment, ReportOptions, SimulationConfig,
};
use netboot::graph::{read_edge_list_file, write_labeled_edge_list, NodeLabels, SeedSpec, level};
use netboot::models::LabelSource;
use netboot::netstats::evaluate_all;
use netboot::{AdjacencyMatrix, Estimator, Model, StatisticSpec};
use serde_json::json;

/// Parametric network bootstrap with two-level bias correction.
#[derive(Parser, Debug)]
#[command(name = "netboot", version, about)]
struct Cli {
    /// JSON configuration: a simulation study for `coverage`, replicate counts
    /// (`b1`, `b2`, `analytic`) for `bootstrap`, `ci` and `report`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed for every random stream.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write outputs into this directory instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Draw networks from a model JSON document.
    Sample {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Fit a model to an edge list and print its parameters.
    Estimate {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        fit: FitArgs,
    },
    /// Evaluate statistics on an edge list.
    Stat {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "stat", required = true)]
        stats: Vec<StatisticSpec>,
    },
    /// One-level bootstrap distribution of a statistic under a model JSON document.
    Bootstrap {
        #[arg(long)]
        model: PathBuf,
        #[arg(long = "stat")]
        stat: StatisticSpec,
        #[arg(long)]
        replicates: Option<usize>,
    },
    /// Two-level bootstrap and confidence intervals for an observed network.
    Ci {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long = "stat", required = true)]
        stats: Vec<StatisticSpec>,
        #[command(flatten)]
        reps: ReplicateArgs,
        /// Nominal coverage.
        #[arg(long, default_value_t = 0.95)]
        alpha: f64,
        /// Interval kinds (default: all six).
        #[arg(long = "kind")]
        kinds: Vec<CiKind>,
    },
    /// Coverage study from `--config` or the desk-scale preset.
    Coverage {
        /// Statistics for the preset when no `--config` is given.
        #[arg(long = "stat")]
        stats: Vec<StatisticSpec>,
        /// Use the full-scale preset (n = 600, 1000 replicates at every level).
        #[arg(long)]
        full_scale: bool,
        /// Override the number of outer repetitions.
        #[arg(long)]
        repetitions: Option<usize>,
    },
    /// Simultaneous bias-corrected intervals for a real network.
    Report {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        fit: FitArgs,
        #[arg(long = "stat")]
        stats: Vec<StatisticSpec>,
        #[command(flatten)]
        reps: ReplicateArgs,
        #[arg(long, default_value_t = 0.95)]
        alpha_family: f64,
        #[arg(long, default_value = "mu_corrected_asym")]
        kind: CiKind,
        /// Restrict to the largest connected component first.
        #[arg(long)]
        largest_component: bool,
        /// Dataset name in the output (default: file stem).
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Args, Debug)]
struct GraphArgs {
    /// Edge list: two labels per line, `#` comments.
    #[arg(long)]
    graph: PathBuf,
}

#[derive(Args, Debug)]
struct FitArgs {
    /// `chung_lu`, `chung_lu:<p>`, `dcsbm:<K>`, `sbm:<K>`, `svd:<K>`, or an estimator JSON object.
    #[arg(long, default_value = "chung_lu")]
    estimator: String,
    /// Community file (`<node label> <community>` per line) for `dcsbm`/`sbm`
    /// instead of spectral clustering.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReplicateArgs {
    #[arg(long)]
    b1: Option<usize>,
    #[arg(long)]
    b2: Option<usize>,
    /// Evaluate every plug-in by Monte Carlo, even when a closed form exists.
    #[arg(long)]
    monte_carlo: bool,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().context("building the worker pool")?;
    }
    let out = Output::new(cli.out.clone())?;
    let seed = SeedSpec::new(cli.seed.unwrap_or(0));
    match &cli.command {
        Command::Sample { model, count } => {
            no_config(&cli, "sample")?;
            let model = read_model(model)?;
            for b in 0..*count {
                let a = model.sample(&mut seed.stream(level::OBSERVED, b as u64));
                let text = write_labeled_edge_list(&a, &NodeLabels::identity(a.n()));
                out.emit(&format!("sample_{b}.txt"), &text)?;
            }
        }
        Command::Estimate { graph, fit } => {
            no_config(&cli, "estimate")?;
            let (a, labels) = read_graph(&graph.graph)?;
            let est = parse_estimator(fit, &labels)?;
            let model = est.fit(&a, seed.child(level::FIT, 0))?;
            out.emit("model.json", &model.to_json()?)?;
        }
        Command::Stat { graph, stats } => {
            no_config(&cli, "stat")?;
            let (a, _) = read_graph(&graph.graph)?;
            let values: Vec<_> = stats
                .iter()
                .zip(evaluate_all(stats, &a))
                .map(|(s, v)| match v {
                    Ok(x) => json!({ "statistic": s, "value": x }),
                    Err(e) => json!({ "statistic": s, "error": e.to_string() }),
                })
                .collect();
            out.emit("stats.json", &serde_json::to_string_pretty(&values)?)?;
        }
        Command::Bootstrap { model, stat, replicates } => {
            let model = read_model(model)?;
            let b = replicates.unwrap_or(replicate_config(&cli)?.b1);
            let dist = bootstrap_distribution(&model, stat, b, seed)?;
            out.emit("distribution.json", &serde_json::to_string_pretty(&dist)?)?;
            if out.dir.is_some() {
                out.emit("distribution.csv", &dist.to_csv())?;
            }
        }
        Command::Ci { graph, fit, stats, reps, alpha, kinds } => {
            let (a, labels) = read_graph(&graph.graph)?;
            let est = parse_estimator(fit, &labels)?;
            let config = reps.apply(replicate_config(&cli)?);
            let kinds = if kinds.is_empty() { CiKind::ALL.to_vec() } else { kinds.clone() };
            let results = two_level_multi(&a, &est, stats, config, seed)?;
            let mut entries = Vec::new();
            for (stat, res) in stats.iter().zip(results) {
                match res {
                    Ok(r) => {
                        let inputs = CiInputs::from_two_level(&r);
                        let cis: Vec<_> = kinds
                            .iter()
                            .map(|k| match build_ci(*k, *alpha, &inputs) {
                                Ok(ci) => serde_json::to_value(ci).expect("serializable"),
                                Err(e) => json!({ "kind": k, "error": e.to_string() }),
                            })
                            .collect();
                        entries.push(json!({
                            "statistic": stat,
                            "observed": r.observed,
                            "mu_hat": r.mu_hat.value,
                            "bias_hat": r.bias_hat,
                            "corrected_estimate": r.corrected_estimate,
                            "dropped": r.dropped,
                            "warning": r.warning,
                            "intervals": cis,
                        }));
                    }
                    Err(e) => entries.push(json!({ "statistic": stat, "error": e.to_string() })),
                }
            }
            out.emit("ci.json", &serde_json::to_string_pretty(&entries)?)?;
        }
        Command::Coverage { stats, full_scale, repetitions } => {
            let mut cfg = match &cli.config {
                Some(path) => {
                    if !stats.is_empty() || *full_scale {
                        bail!("--stat and --full-scale apply to the preset; put them in the --config file instead");
                    }
                    serde_json::from_str::<SimulationConfig>(&read_text(path)?)
                        .with_context(|| format!("parsing simulation config {}", path.display()))?
                }
                None => {
                    if stats.is_empty() {
                        bail!("coverage needs --config or at least one --stat");
                    }
                    if *full_scale {
                        log::warn!("full scale runs 1000 x 1000 bootstrap replicates per repetition; expect hours");
                        SimulationConfig::full_scale(stats.clone())
                    } else {
                        SimulationConfig::desk_scale(stats.clone())
                    }
                }
            };
            if let Some(s) = cli.seed {
                cfg.root_seed = s;
            }
            if let Some(r) = repetitions {
                cfg.outer_repetitions = *r;
            }
            let report = run_coverage_experiment(&cfg)?;
            if report.clip_warning {
                log::warn!("{} probability entries were clipped to [0, 1]", report.clip_count);
            }
            if out.dir.is_some() {
                out.emit("coverage.json", &report.to_json()?)?;
                out.emit("coverage.csv", &report.to_csv())?;
                for alpha in &cfg.alphas {
                    out.emit(&format!("coverage_table_{alpha}.csv"), &report.to_table_csv(*alpha))?;
                }
            } else {
                out.emit("", &report.to_json()?)?;
            }
        }
        Command::Report { graph, fit, stats, reps, alpha_family, kind, largest_component, name } => {
            let (mut a, mut labels) = read_graph(&graph.graph)?;
            if *largest_component {
                let (giant, nodes) = giant_component(&a);
                labels = NodeLabels::from_labels(nodes.iter().map(|&i| labels.label(i).to_string()).collect());
                a = giant;
            }
            let est = parse_estimator(fit, &labels)?;
            let options = ReportOptions {
                alpha_family: *alpha_family,
                kind: *kind,
                two_level: reps.apply(replicate_config(&cli)?),
                seed,
                largest_component: false,
            };
            let name = name.clone().unwrap_or_else(|| {
                graph.graph.file_stem().map_or("network".into(), |s| s.to_string_lossy().into_owned())
            });
            let report = report_dataset(&name, &a, &est, stats, &options)?;
            for f in &report.failures {
                log::warn!("{}: {}", f.statistic, f.error);
            }
            if out.dir.is_some() {
                out.emit("report.json", &report.to_json()?)?;
                out.emit("report.csv", &report.to_csv())?;
            } else {
                out.emit("", &report.to_csv())?;
            }
        }
    }
    Ok(())
}

impl ReplicateArgs {
    fn apply(&self, mut base: TwoLevelConfig) -> TwoLevelConfig {
        if let Some(b1) = self.b1 {
            base.b1 = b1;
        }
        if let Some(b2) = self.b2 {
            base.b2 = b2;
        }
        if self.monte_carlo {
            base.analytic = false;
        }
        base
    }
}

/// Where results go: files in `dir`, or standard output.
struct Output {
    dir: Option<PathBuf>,
}

impl Output {
    fn new(dir: Option<PathBuf>) -> Result<Self> {
        if let Some(d) = &dir {
            fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
        }
        Ok(Self { dir })
    }

    fn emit(&self, file: &str, text: &str) -> Result<()> {
        match &self.dir {
            Some(d) if !file.is_empty() => {
                let path = d.join(file);
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                log::info!("wrote {}", path.display());
            }
            _ => {
                print!("{text}");
                if !text.ends_with('\n') {
                    println!();
                }
            }
        }
        Ok(())
    }
}

fn no_config(cli: &Cli, command: &str) -> Result<()> {
    if cli.config.is_some() {
        bail!("--config is not used by `{command}`");
    }
    Ok(())
}

fn replicate_config(cli: &Cli) -> Result<TwoLevelConfig> {
    match &cli.config {
        Some(path) => serde_json::from_str(&read_text(path)?)
            .with_context(|| format!("parsing replicate config {} (expects b1, b2, analytic)", path.display())),
        None => Ok(TwoLevelConfig::default()),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_graph(path: &Path) -> Result<(AdjacencyMatrix, NodeLabels)> {
    read_edge_list_file(path).with_context(|| format!("reading edge list {}", path.display()))
}

fn read_model(path: &Path) -> Result<Model> {
    let model = Model::from_json(&read_text(path)?).with_context(|| format!("parsing model {}", path.display()))?;
    Ok(model)
}

fn read_communities(path: &Path, labels: &NodeLabels) -> Result<Vec<usize>> {
    let mut out = vec![None; labels.len()];
    for (no, line) in read_text(path)?.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (Some(node), Some(community), None) = (parts.next(), parts.next(), parts.next()) else {
            bail!("{}:{}: expected `<node> <community>`", path.display(), no + 1);
        };
        let i = labels
            .index_of(node)
            .with_context(|| format!("{}:{}: node {node:?} is not in the graph", path.display(), no + 1))?;
        out[i] = Some(community.parse::<usize>().with_context(|| format!("{}:{}", path.display(), no + 1))?);
    }
    out.iter()
        .enumerate()
        .map(|(i, c)| c.with_context(|| format!("node {:?} has no community", labels.label(i))))
        .collect()
}

fn parse_estimator(fit: &FitArgs, labels: &NodeLabels) -> Result<Estimator> {
    let spec = fit.estimator.trim();
    if spec.starts_with('{') {
        if fit.labels.is_some() {
            bail!("--labels cannot be combined with an estimator JSON object");
        }
        return serde_json::from_str(spec).context("parsing estimator JSON");
    }
    let (name, arg) = match spec.split_once(':') {
        Some((n, a)) => (n, Some(a)),
        None => (spec, None),
    };
    let rank = |what: &str| -> Result<usize> {
        arg.with_context(|| format!("{what} needs a community count or rank, e.g. {what}:3"))?
            .parse()
            .with_context(|| format!("bad {what} argument"))
    };
    let communities = |what: &str| -> Result<LabelSource> {
        match &fit.labels {
            Some(path) => {
                let given = read_communities(path, labels)?;
                if let Some(k) = arg {
                    let k: usize = k.parse().with_context(|| format!("bad {what} argument"))?;
                    if given.iter().any(|&g| g >= k) {
                        bail!("community file uses labels outside 0..{k}");
                    }
                }
                Ok(LabelSource::Given(given))
            }
            None => Ok(LabelSource::Spectral { k: rank(what)?, tau: None }),
        }
    };
    Ok(match name {
        "chung_lu" => Estimator::ChungLu { p: arg.map(|p| p.parse()).transpose().context("bad density")? },
        "dcsbm" => Estimator::Dcsbm { labels: communities("dcsbm")? },
        "sbm" => Estimator::Sbm { labels: communities("sbm")? },
        "svd" => Estimator::Svd { k: rank("svd")? },
        other => bail!("unknown estimator {other:?} (chung_lu, dcsbm, sbm, svd)"),
    })
}
