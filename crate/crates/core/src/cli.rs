//! Command-line front end. Every subcommand loads and validates all inputs,
//! computes, and only then writes its artifacts plus a `manifest.json`.
//!
//! Exit codes: 0 success, 1 I/O failure while writing, 2 configuration
//! error, 3 input-format error, 4 resource budget exceeded.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fca::{
    count_concepts, export_dot, parse_cxt, positive_part, write_cxt, ConceptLattice, FormalContext,
    DEFAULT_MAX_CONCEPTS, DEFAULT_MAX_DOT_CONCEPTS,
};
use crate::interpretation::{
    explain_taxon, symbolic_interpretation, BackgroundKnowledge, Direction, Level, SearchParams, SimilarityKind,
    SimilaritySpec,
};
use crate::io::{predictions_csv, read_predictions, read_view, LoadedView};
use crate::scaling::{
    class_separation, scale, split_statistics, symbolic_nn_classify, SymbolicView, ThresholdStrategy, Thresholds,
};
use crate::similarity::{
    distance_matrix_over_models, matrix_csv, pairwise_fidelity_matrix, space_from_view, GwConfig, Side,
};
use crate::view::{fidelity, mean_std, Metric, Predictions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_FORMAT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Parser, Serialize)]
#[command(name = "cviews", version, about = "Conceptual views of classifier heads")]
pub struct Cli {
    /// worker threads for parallel sections (default: all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// output directory (`interpret` also accepts a `.json` file path)
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// suppress the summary on stdout
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Mean and standard deviation of the object and class views
    Stats(ViewArg),
    /// 1-NN surrogate fidelity of a many-valued view
    Fidelity(FidelityArgs),
    /// Dichotomic scaling into object and class contexts
    Scale(ScaleArgs),
    /// 1-NN surrogate fidelity of the scaled view
    SymbolicFidelity(SymbolicFidelityArgs),
    /// Concept lattice of a `.cxt` context
    Lattice(LatticeArgs),
    /// Gromov-Wasserstein comparison of several views
    Compare(CompareArgs),
    /// Subgroup rules relating neurons and background features
    Interpret(InterpretArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ViewArg {
    /// view directory (`view.json`, `objects.csv`, `classes.csv`, ...)
    #[arg(long)]
    pub view: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct FidelityArgs {
    /// view directory (`view.json`, `objects.csv`, `classes.csv`, ...)
    #[arg(long)]
    pub view: PathBuf,
    /// euclidean or cosine
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
}

#[derive(Debug, Args, Serialize)]
pub struct ThresholdArgs {
    /// object threshold δ_O (default 0)
    #[arg(long, allow_negative_numbers = true)]
    pub delta_o: Option<f64>,
    /// class threshold δ_W (default 0)
    #[arg(long, allow_negative_numbers = true)]
    pub delta_w: Option<f64>,
    /// zero, mean, median or median-per-neuron; excludes explicit deltas
    #[arg(long)]
    pub strategy: Option<ThresholdStrategy>,
}

impl ThresholdArgs {
    fn resolve(&self, loaded: &LoadedView) -> Result<Thresholds> {
        match self.strategy {
            Some(s) => {
                if self.delta_o.is_some() || self.delta_w.is_some() {
                    return Err(Error::InvalidParameter(
                        "--strategy cannot be combined with --delta-o/--delta-w".into(),
                    ));
                }
                Ok(Thresholds::from_strategy(&loaded.view, s))
            }
            None => Ok(Thresholds::new(self.delta_o.unwrap_or(0.0), self.delta_w.unwrap_or(0.0))),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct ScaleArgs {
    /// view directory (`view.json`, `objects.csv`, `classes.csv`, ...)
    #[arg(long)]
    pub view: PathBuf,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
}

#[derive(Debug, Args, Serialize)]
pub struct SymbolicFidelityArgs {
    /// view directory (`view.json`, `objects.csv`, `classes.csv`, ...)
    #[arg(long)]
    pub view: PathBuf,
    #[command(flatten)]
    pub thresholds: ThresholdArgs,
    /// euclidean or cosine
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
}

#[derive(Debug, Args, Serialize)]
pub struct LatticeArgs {
    /// Burmeister `.cxt` file
    #[arg(long)]
    pub context: PathBuf,
    /// drop the barred attributes of a symbolic context first
    #[arg(long)]
    pub positive_only: bool,
    /// only count concepts
    #[arg(long)]
    pub count_only: bool,
    /// list meet-irreducible concepts
    #[arg(long)]
    pub mi: bool,
    /// write a DOT line diagram under this name in the output directory
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// comma-separated object names for `--shared` or per-object concept lists
    #[arg(long, value_delimiter = ',')]
    pub objects: Vec<String>,
    /// pairwise shared-concept counts of `--objects` instead of per-object lists
    #[arg(long)]
    pub shared: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_CONCEPTS)]
    pub max_concepts: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_DOT_CONCEPTS)]
    pub max_dot_concepts: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct CompareArgs {
    /// two or more view directories
    #[arg(long, num_args = 2.., required = true)]
    pub views: Vec<PathBuf>,
    /// compare the class rows or the object rows
    #[arg(long, default_value = "class")]
    pub side: Side,
    /// euclidean or cosine
    #[arg(long, default_value = "euclidean")]
    pub metric: Metric,
    /// subsample fraction per view, in (0, 1]
    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,
    /// view k is subsampled with seed + k
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    #[arg(long, default_value_t = GwConfig::default().restarts)]
    pub restarts: usize,
    #[arg(long, default_value_t = GwConfig::default().max_iter)]
    pub max_iter: usize,
    /// largest metric-measure space accepted after subsampling
    #[arg(long, default_value_t = 2000)]
    pub max_points: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct InterpretArgs {
    /// directory written by `scale`
    #[arg(long)]
    pub symbolic: PathBuf,
    /// `.cxt` or CSV (`class,feature…`)
    #[arg(long)]
    pub background: PathBuf,
    #[arg(long, default_value_t = 0.5)]
    pub theta: f64,
    /// jaccard or overlap
    #[arg(long, default_value = "jaccard")]
    pub similarity: SimilarityKind,
    /// feature (direction neurons) or neuron attribute (direction features)
    #[arg(long)]
    pub target: String,
    /// neurons (rules over neurons for a feature) or features
    #[arg(long, default_value = "neurons")]
    pub direction: Direction,
    #[arg(long, default_value_t = 20)]
    pub beam: usize,
    #[arg(long, default_value_t = 3)]
    pub depth: usize,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    /// `class`, or `object` to label objects with predictions.csv
    #[arg(long, default_value = "class")]
    pub level: String,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Format { .. }
        | Error::InvalidView(_)
        | Error::InvalidContext(_)
        | Error::Layout(_)
        | Error::Misaligned(_)
        | Error::KeyMismatch { .. }
        | Error::InvalidSpace(_) => EXIT_FORMAT,
        Error::ResourceLimit(_) => EXIT_BUDGET,
        Error::Io(_) => EXIT_IO,
        _ => EXIT_CONFIG,
    }
}

/// Files to write plus the inputs they were computed from.
struct Run {
    inputs: Vec<PathBuf>,
    outputs: Vec<(String, Vec<u8>)>,
    summary: Vec<String>,
}

impl Run {
    fn new() -> Self {
        Run {
            inputs: Vec::new(),
            outputs: Vec::new(),
            summary: Vec::new(),
        }
    }

    fn text(&mut self, name: impl Into<String>, body: String) {
        self.outputs.push((name.into(), body.into_bytes()));
    }

    fn json(&mut self, name: &str, value: &impl Serialize) {
        let body = serde_json::to_string_pretty(value).expect("outputs serialise") + "\n";
        self.text(name, body);
    }

    fn say(&mut self, line: String) {
        self.summary.push(line);
    }
}

fn sha256_file(path: &Path) -> Result<String> {
    let bytes = fs::read(path)?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn require_exists(path: &Path) -> Result<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{} does not exist", path.display())))
    }
}

fn load_view(path: &Path, run: &mut Run) -> Result<LoadedView> {
    require_exists(path)?;
    let loaded = read_view(path)?;
    run.inputs.extend(loaded.files.iter().cloned());
    Ok(loaded)
}

fn read_context(path: &Path, run: &mut Run) -> Result<FormalContext> {
    require_exists(path)?;
    let text = fs::read_to_string(path).map_err(|e| Error::format(path, e.to_string()))?;
    run.inputs.push(path.to_path_buf());
    parse_cxt(&text, path)
}

fn fidelity_to(surrogate: &Predictions, reference: Option<&Predictions>) -> Result<Option<f64>> {
    reference.map(|r| fidelity(surrogate, r)).transpose()
}

fn stats(a: &ViewArg, run: &mut Run) -> Result<()> {
    let v = load_view(&a.view, run)?.view;
    let mut out = BTreeMap::new();
    let mut entry = |name: &str, values: &crate::Matrix, run: &mut Run| {
        let (mean, std) = mean_std(values);
        run.say(format!("{name} mean={mean:.6} std={std:.6}"));
        out.insert(
            name.to_string(),
            json!({"rows": values.rows(), "cols": values.cols(), "mean": mean, "std": std}),
        );
    };
    entry("object_view", v.object_view(), run);
    entry("class_view", v.class_view(), run);
    if let Some(b) = v.bias() {
        let m = crate::Matrix::from_vec(1, b.len(), b.to_vec());
        entry("bias", &m, run);
    }
    run.json("stats.json", &out);
    Ok(())
}

fn fidelity_cmd(a: &FidelityArgs, run: &mut Run) -> Result<()> {
    let v = load_view(&a.view, run)?.view;
    let nn = v.nn_classify(a.metric);
    let to_model = fidelity_to(&nn, v.model_predictions())?;
    let to_logit = fidelity(&nn, &v.logit_argmax())?;
    let bias_missing = v.bias().is_none();
    if let Some(f) = to_model {
        run.say(format!("fidelity to model predictions: {:.1}%", 100.0 * f));
    }
    run.say(format!("fidelity to logit argmax: {:.1}%", 100.0 * to_logit));
    run.json(
        "fidelity.json",
        &json!({
            "metric": a.metric,
            "objects": v.object_ids().len(),
            "fidelity_to_model": to_model,
            "fidelity_to_logit_argmax": to_logit,
            "bias_missing": bias_missing,
        }),
    );
    run.text("nn_predictions.csv", predictions_csv(&nn));
    Ok(())
}

fn scale_cmd(a: &ScaleArgs, run: &mut Run) -> Result<()> {
    let loaded = load_view(&a.view, run)?;
    let t = a.thresholds.resolve(&loaded)?;
    let sv = scale(&loaded.view, &t)?;
    let split = split_statistics(&loaded.view, &t)?;
    let (oa, ob) = split.object.percentages();
    let (ca, cb) = split.class.percentages();
    run.say(format!("object view: {oa:.1}% > δ, {ob:.1}% ≤ δ"));
    run.say(format!("class view: {ca:.1}% > δ, {cb:.1}% ≤ δ"));
    run.text("objects.cxt", write_cxt(&sv.object_context));
    run.text("classes.cxt", write_cxt(&sv.class_context));
    if let Some(p) = loaded.view.model_predictions() {
        run.text("predictions.csv", predictions_csv(p));
    }
    run.json(
        "scaling.json",
        &json!({
            "thresholds": t,
            "split": split,
            "object_percent": [oa, ob],
            "class_percent": [ca, cb],
            "class_separation": class_separation(&sv),
        }),
    );
    Ok(())
}

fn symbolic_fidelity(a: &SymbolicFidelityArgs, run: &mut Run) -> Result<()> {
    let loaded = load_view(&a.view, run)?;
    let v = &loaded.view;
    let t = a.thresholds.resolve(&loaded)?;
    let sv = scale(v, &t)?;
    let sym = symbolic_nn_classify(&sv, a.metric);
    let to_model = fidelity_to(&sym, v.model_predictions())?;
    let to_logit = fidelity(&sym, &v.logit_argmax())?;
    let view_to_model = fidelity_to(&v.nn_classify(a.metric), v.model_predictions())?;
    let separation = class_separation(&sv);
    if let Some(f) = to_model {
        run.say(format!("symbolic fidelity to model predictions: {:.1}%", 100.0 * f));
    }
    run.say(format!("symbolic fidelity to logit argmax: {:.1}%", 100.0 * to_logit));
    run.say(format!("class separation: {:.1}%", 100.0 * separation));
    run.json(
        "symbolic_fidelity.json",
        &json!({
            "metric": a.metric,
            "thresholds": t,
            "fidelity_to_model": to_model,
            "fidelity_to_logit_argmax": to_logit,
            "view_fidelity_to_model": view_to_model,
            "class_separation": separation,
        }),
    );
    run.text("symbolic_predictions.csv", predictions_csv(&sym));
    Ok(())
}

fn lattice_cmd(a: &LatticeArgs, run: &mut Run) -> Result<()> {
    if a.shared && a.objects.is_empty() {
        return Err(Error::InvalidParameter("--shared needs --objects".into()));
    }
    let mut ctx = read_context(&a.context, run)?;
    if a.positive_only {
        ctx = positive_part(&ctx)?;
    }
    for g in &a.objects {
        ctx.object_index(g)?;
    }
    let mut summary = BTreeMap::new();
    summary.insert("objects", json!(ctx.object_count()));
    summary.insert("attributes", json!(ctx.attribute_count()));
    if a.count_only {
        let n = count_concepts(&ctx, a.max_concepts)?;
        run.say(format!("{n} concepts"));
        summary.insert("concepts", json!(n));
        run.json("lattice.json", &summary);
        return Ok(());
    }
    let lattice = ConceptLattice::from_context(&ctx, a.max_concepts)?;
    run.say(format!("{} concepts, {} covers", lattice.len(), lattice.cover_edges().len()));
    summary.insert("concepts", json!(lattice.len()));
    summary.insert("covers", json!(lattice.cover_edges().len()));
    if a.mi {
        let mi: Vec<_> = lattice
            .meet_irreducibles()
            .into_iter()
            .map(|i| lattice.concepts()[i].named(&ctx))
            .collect();
        run.say(format!("{} meet-irreducible concepts", mi.len()));
        summary.insert("meet_irreducibles", json!(mi.len()));
        run.json("meet_irreducibles.json", &mi);
    }
    if let Some(dot) = &a.dot {
        let name = dot.to_string_lossy().into_owned();
        run.text(name, export_dot(&lattice, a.max_dot_concepts)?);
    }
    if a.shared {
        run.text("shared.csv", lattice.shared_concept_counts(&a.objects)?.to_csv());
    } else if !a.objects.is_empty() {
        let mut per = BTreeMap::new();
        for g in &a.objects {
            let found: Vec<_> = lattice
                .concepts_containing(g)?
                .into_iter()
                .map(|i| lattice.concepts()[i].named(&ctx))
                .collect();
            per.insert(g.clone(), found);
        }
        run.json("containing.json", &per);
    }
    run.json("lattice.json", &summary);
    Ok(())
}

fn model_names(views: &[PathBuf]) -> Vec<String> {
    let base: Vec<String> = views
        .iter()
        .map(|p| {
            p.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    let mut sorted = base.clone();
    sorted.sort();
    sorted.dedup();
    if sorted.len() == base.len() {
        base
    } else {
        views.iter().map(|p| p.display().to_string()).collect()
    }
}

fn compare(a: &CompareArgs, run: &mut Run) -> Result<()> {
    let loaded = a
        .views
        .iter()
        .map(|p| load_view(p, run))
        .collect::<Result<Vec<_>>>()?;
    let names = model_names(&a.views);
    let mut spaces = Vec::with_capacity(loaded.len());
    for (k, l) in loaded.iter().enumerate() {
        let s = space_from_view(&l.view, a.side, a.metric, a.fraction, a.seed + k as u64)?;
        if s.len() > a.max_points {
            return Err(Error::ResourceLimit(format!(
                "{} has {} points, limit is {} (lower --fraction or raise --max-points)",
                names[k],
                s.len(),
                a.max_points
            )));
        }
        spaces.push(s);
    }
    let cfg = GwConfig {
        max_iter: a.max_iter,
        restarts: a.restarts,
        seed: a.seed,
        ..GwConfig::default()
    };
    let result = distance_matrix_over_models(&names, &spaces, &cfg)?;
    run.say(format!("{} models, {} pairs", names.len(), result.flags.len()));
    for f in &result.flags {
        if let Some(e) = &f.error {
            run.say(format!("pair {} / {} failed: {e}", names[f.a], names[f.b]));
        }
    }
    run.text("distances.csv", result.distances_csv());
    run.json("dendrogram.json", &result.dendrogram);
    run.json(
        "comparison.json",
        &json!({
            "names": names,
            "sizes": spaces.iter().map(|s| s.len()).collect::<Vec<_>>(),
            "flags": result.flags,
        }),
    );
    let preds: Option<Vec<Predictions>> = loaded.iter().map(|l| l.view.model_predictions().cloned()).collect();
    if let Some(preds) = preds {
        run.text("fidelity.csv", matrix_csv(&names, &pairwise_fidelity_matrix(&preds)?));
    }
    Ok(())
}

fn read_symbolic(dir: &Path, run: &mut Run) -> Result<(SymbolicView, Option<Predictions>)> {
    require_exists(dir)?;
    let objects = read_context(&dir.join("objects.cxt"), run)?;
    let classes = read_context(&dir.join("classes.cxt"), run)?;
    let sv = SymbolicView::new(objects, classes).map_err(|e| Error::format(dir, e.to_string()))?;
    let preds_path = dir.join("predictions.csv");
    let preds = if preds_path.exists() {
        run.inputs.push(preds_path.clone());
        Some(read_predictions(&preds_path)?)
    } else {
        None
    };
    Ok((sv, preds))
}

fn interpret(a: &InterpretArgs, run: &mut Run) -> Result<()> {
    let sim = SimilaritySpec::new(a.similarity, a.theta)?;
    let params = SearchParams {
        beam_width: a.beam,
        max_depth: a.depth,
        top_k: a.top,
    };
    let (sv, preds) = read_symbolic(&a.symbolic, run)?;
    require_exists(&a.background)?;
    let bk = BackgroundKnowledge::read(&a.background)?;
    run.inputs.push(a.background.clone());
    let level = match a.level.as_str() {
        "class" => Level::Class,
        "object" => Level::Object(preds.ok_or_else(|| {
            Error::InvalidParameter(format!(
                "--level object needs predictions.csv in {}",
                a.symbolic.display()
            ))
        })?),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown level `{other}` (expected class or object)"
            )))
        }
    };
    let interp = symbolic_interpretation(&sv, &bk, &sim)?;
    let related: BTreeMap<&str, Vec<&str>> = interp
        .objects()
        .iter()
        .enumerate()
        .map(|(n, name)| {
            let feats = interp.row(n).iter().map(|f| interp.attributes()[f].as_str()).collect();
            (name.as_str(), feats)
        })
        .collect();
    let rules = explain_taxon(&sv, &bk, &a.target, a.direction, &params, &level)?;
    for r in &rules {
        run.say(format!(
            "{}  (share {:.3}, size {}, quality {:.4})",
            r.description, r.share, r.size, r.quality
        ));
    }
    run.json(
        "rules.json",
        &json!({
            "target": a.target,
            "direction": a.direction,
            "level": a.level,
            "similarity": sim,
            "rules": rules,
            "interpretation": related,
        }),
    );
    Ok(())
}

fn is_json_file(p: &Path) -> bool {
    p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn execute(cli: &Cli) -> Result<Run> {
    let mut run = Run::new();
    match &cli.command {
        Command::Stats(a) => stats(a, &mut run)?,
        Command::Fidelity(a) => fidelity_cmd(a, &mut run)?,
        Command::Scale(a) => scale_cmd(a, &mut run)?,
        Command::SymbolicFidelity(a) => symbolic_fidelity(a, &mut run)?,
        Command::Lattice(a) => lattice_cmd(a, &mut run)?,
        Command::Compare(a) => compare(a, &mut run)?,
        Command::Interpret(a) => interpret(a, &mut run)?,
    }
    Ok(run)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Stats(_) => "stats",
        Command::Fidelity(_) => "fidelity",
        Command::Scale(_) => "scale",
        Command::SymbolicFidelity(_) => "symbolic-fidelity",
        Command::Lattice(_) => "lattice",
        Command::Compare(_) => "compare",
        Command::Interpret(_) => "interpret",
    }
}

/// Writes the artifacts and the manifest. For `interpret`, an `--out`
/// ending in `.json` names the rules file itself.
fn commit(cli: &Cli, run: Run) -> Result<()> {
    let (dir, rename) = match &cli.command {
        Command::Interpret(_) if is_json_file(&cli.out) => (
            cli.out.parent().map(Path::to_path_buf).unwrap_or_default(),
            cli.out.file_name().map(|n| n.to_string_lossy().into_owned()),
        ),
        _ => (cli.out.clone(), None),
    };
    if !dir.as_os_str().is_empty() {
        fs::create_dir_all(&dir)?;
    }
    let mut written = Vec::new();
    for (name, body) in &run.outputs {
        let name = match (&rename, name.as_str()) {
            (Some(r), "rules.json") => r.clone(),
            _ => name.clone(),
        };
        fs::write(dir.join(&name), body)?;
        written.push(json!({"name": name, "sha256": hex::encode(Sha256::digest(body))}));
    }
    let mut inputs = Vec::new();
    let mut paths = run.inputs.clone();
    paths.sort();
    paths.dedup();
    for p in &paths {
        inputs.push(json!({"path": p.display().to_string(), "sha256": sha256_file(p)?}));
    }
    let manifest = json!({
        "tool": "cviews",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command_name(&cli.command),
        "config": cli,
        "inputs": inputs,
        "outputs": written,
    });
    let body = serde_json::to_string_pretty(&manifest).expect("manifest serialises") + "\n";
    fs::write(dir.join("manifest.json"), body)?;
    if !cli.quiet {
        for line in &run.summary {
            println!("{line}");
        }
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return EXIT_CONFIG;
        }
        // a pool built earlier in this process keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(&cli).and_then(|run| commit(&cli, run)) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
