//! Command-line front end.
//!
//! Exit status: 0 ok, 1 validation error (bad data, unknown ids), 2 usage
//! error (bad arguments), 3 I/O error (filesystem, lock, parse). Machine
//! output goes to stdout, diagnostics to stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use crf_core::aggregation::{CategoryScores, ImpactLevel, ImpactProfile};
use crf_core::builtin::{builtin_croads_catalog, demo_project};
use crf_core::bundle::{overall_bundle, progress_report, service_bundle, use_case_bundle, use_case_report, ReportError, UseCaseReport};
use crf_core::catalog::{Catalog, Category};
use crf_core::project::{Project, ProjectError};
use crf_core::reporting::radar_series;
use crf_core::scoring::{EnablerAssessment, Importance, LikertLevel};
use crf_core::svg::{render_impact_svg, render_progress_svg, render_radar_svg, ImpactChart};
use crf_core::whatif::{apply_overrides, Override, WhatIfError};
use crf_core::{round1, DiffReport};

use crate::files::{self, FileError};
use crate::store::{Store, StoreError};
use crate::tabular;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "crf", version, about = "C-ITS infrastructure readiness assessment")]
pub struct Cli {
    /// Project directory.
    #[arg(long, global = true, env = "CRF_PROJECT_DIR", default_value = ".")]
    pub dir: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Create a project directory.
    Init {
        /// Target directory; defaults to --dir.
        path: Option<PathBuf>,
        /// `builtin` or the path of a catalog JSON file.
        #[arg(long, default_value = "builtin")]
        catalog: String,
        /// Seed the road works warning demo assessment.
        #[arg(long)]
        demo: bool,
        #[arg(long)]
        id: Option<String>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Check the catalog and the project against it.
    Validate { path: Option<PathBuf> },
    /// Add use cases to the considered list.
    Consider {
        #[arg(required = true)]
        use_cases: Vec<String>,
    },
    #[command(subcommand)]
    Scenario(ScenarioCmd),
    #[command(subcommand)]
    Score(ScoreCmd),
    #[command(subcommand)]
    Impact(ImpactCmd),
    /// Print or write a report.
    Report(ReportArgs),
    /// Evaluate level changes without saving them.
    Whatif(WhatifArgs),
    #[command(subcommand)]
    Snapshot(SnapshotCmd),
    #[command(subcommand)]
    Catalog(CatalogCmd),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCmd {
    /// Select the active scenario of a use case.
    Set { use_case: String, scenario: String },
}

#[derive(Debug, Subcommand)]
pub enum ScoreCmd {
    /// Set one enabler assessment.
    Set {
        use_case: String,
        enabler: String,
        #[arg(long)]
        importance: Importance,
        #[arg(long)]
        readiness: LikertLevel,
        #[arg(long)]
        aspiration: LikertLevel,
        #[arg(long)]
        threshold: LikertLevel,
        #[arg(long)]
        cost: LikertLevel,
        #[arg(long)]
        note: Option<String>,
    },
    /// Replace assessments from a JSON assessment file or a CSV table.
    Import {
        file: PathBuf,
        /// Target use case, required for CSV input.
        #[arg(long)]
        use_case: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ImpactCmd {
    /// Set the impact profile of a use case.
    Set {
        use_case: String,
        #[arg(long)]
        cost: ImpactLevel,
        #[arg(long)]
        safety: ImpactLevel,
        #[arg(long)]
        efficiency: ImpactLevel,
        #[arg(long)]
        environment: ImpactLevel,
        #[arg(long)]
        inclusion: ImpactLevel,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportKind {
    Usecase,
    Service,
    Overall,
    Impact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub kind: ReportKind,
    /// Use case, scenario or service id.
    pub id: Option<String>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Chart size in pixels.
    #[arg(long, default_value_t = 480)]
    pub size: u32,
    /// Impact chart as bars instead of a radar.
    #[arg(long)]
    pub bars: bool,
    /// Embed the SVG chart and CSV table in JSON output.
    #[arg(long)]
    pub attach: bool,
}

#[derive(Debug, Args)]
pub struct WhatifArgs {
    pub use_case: String,
    pub enabler: String,
    /// One or more `dimension=level` assignments.
    #[arg(required = true)]
    pub assignments: Vec<String>,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long, default_value_t = 480)]
    pub size: u32,
}

#[derive(Debug, Subcommand)]
pub enum SnapshotCmd {
    /// Record the current project state.
    Create {
        #[arg(long, default_value = "snapshot")]
        label: String,
    },
    List,
    /// Compare two snapshots.
    Diff {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCmd {
    /// Write the project catalog, or the builtin one outside a project.
    Export {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        builtin: bool,
    },
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub bind: String,
    /// Allow cross-origin requests from a dashboard dev server.
    #[arg(long)]
    pub dev: bool,
    /// Directory holding a built dashboard bundle.
    #[arg(long)]
    pub static_dir: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Usage(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Validation(_) => EXIT_VALIDATION,
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Validation(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

impl From<StoreError> for Failure {
    fn from(e: StoreError) -> Self {
        if e.is_io() {
            Failure::Io(e.to_string())
        } else {
            Failure::Validation(e.to_string())
        }
    }
}

impl From<FileError> for Failure {
    fn from(e: FileError) -> Self {
        StoreError::from(e).into()
    }
}

impl From<ReportError> for Failure {
    fn from(e: ReportError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<ProjectError> for Failure {
    fn from(e: ProjectError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<WhatIfError> for Failure {
    fn from(e: WhatIfError) -> Self {
        match e {
            WhatIfError::Syntax(_) | WhatIfError::UnknownDimension(_) => Failure::Usage(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    match run(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let dir = cli.dir;
    match cli.command {
        Command::Init {
            path,
            catalog,
            demo,
            id,
            name,
        } => init(&path.unwrap_or(dir), &catalog, demo, id, name, out),
        Command::Validate { path } => validate(&path.unwrap_or(dir), out),
        Command::Consider { use_cases } => mutate(&dir, |p, c| {
            for uc in &use_cases {
                if c.use_case(uc).is_none() {
                    return Err(ProjectError::UnknownUseCase { use_case: uc.clone() }.into());
                }
            }
            p.consider(use_cases.iter().map(String::as_str));
            Ok(())
        }),
        Command::Scenario(ScenarioCmd::Set { use_case, scenario }) => mutate(&dir, |p, _| {
            p.active_scenarios.insert(use_case.clone(), scenario.clone());
            Ok(())
        }),
        Command::Score(ScoreCmd::Set {
            use_case,
            enabler,
            importance,
            readiness,
            aspiration,
            threshold,
            cost,
            note,
        }) => mutate(&dir, |p, c| {
            let uc = p.resolve_use_case(c, &use_case)?.id.clone();
            let mut a = EnablerAssessment::new(&enabler, importance, readiness, aspiration, threshold, cost);
            a.note = note.clone();
            p.set_assessment(&uc, a);
            Ok(())
        }),
        Command::Score(ScoreCmd::Import { file, use_case }) => import(&dir, &file, use_case.as_deref()),
        Command::Impact(ImpactCmd::Set {
            use_case,
            cost,
            safety,
            efficiency,
            environment,
            inclusion,
        }) => mutate(&dir, |p, c| {
            let uc = p.resolve_use_case(c, &use_case)?.id.clone();
            if !p.is_considered(&uc) {
                return Err(Failure::Validation(format!("use case '{uc}' is not considered")));
            }
            p.impacts.insert(
                uc,
                ImpactProfile {
                    cost,
                    safety,
                    efficiency,
                    environment,
                    inclusion,
                },
            );
            Ok(())
        }),
        Command::Report(args) => report(&dir, &args, out),
        Command::Whatif(args) => whatif(&dir, &args, out),
        Command::Snapshot(cmd) => snapshot(&dir, cmd, out),
        Command::Catalog(CatalogCmd::Export { out: path, builtin }) => {
            let catalog = if builtin {
                builtin_croads_catalog()
            } else {
                open(&dir)?.catalog()?
            };
            emit(out, path.as_deref(), &files::export_catalog(&catalog))
        }
        Command::Serve(args) => serve(&dir, args, err),
    }
}

fn open(dir: &Path) -> Result<Store, Failure> {
    Store::open(dir).map_err(|e| Failure::Io(e.to_string()))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

/// Load, change and save the project under the writer lock.
fn mutate(dir: &Path, change: impl FnOnce(&mut Project, &Catalog) -> Outcome) -> Outcome {
    let store = open(dir)?;
    let catalog = store.catalog()?;
    let writer = store.writer()?;
    let mut project = store.load()?;
    change(&mut project, &catalog)?;
    writer.save_project(&project, &catalog)?;
    Ok(())
}

fn init(dir: &Path, catalog: &str, demo: bool, id: Option<String>, name: Option<String>, out: &mut dyn Write) -> Outcome {
    let catalog = if catalog == "builtin" {
        builtin_croads_catalog()
    } else {
        files::load_catalog(Path::new(catalog))?
    };
    let mut project = if demo {
        if catalog.version != builtin_croads_catalog().version {
            return Err(Failure::Usage("--demo needs the builtin catalog".into()));
        }
        demo_project()
    } else {
        Project::new("project", "Readiness assessment", catalog.version.clone())
    };
    if let Some(id) = id {
        project.id = id;
    }
    if let Some(name) = name {
        project.name = name;
    }
    Store::init(dir, &catalog, &project)?;
    emit(out, None, &format!("initialized {}\n", dir.display()))
}

fn validate(dir: &Path, out: &mut dyn Write) -> Outcome {
    let store = open(dir)?;
    let catalog = store.catalog()?;
    let project = store.load()?;
    let errors = project.validate(&catalog);
    if errors.is_empty() {
        return emit(out, None, "ok\n");
    }
    let lines: Vec<String> = errors.iter().map(|e| format!("  {}: {e}", e.code())).collect();
    Err(Failure::Validation(format!("{} problem(s)\n{}", errors.len(), lines.join("\n"))))
}

fn import(dir: &Path, file: &Path, use_case: Option<&str>) -> Outcome {
    let is_csv = file.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let text = std::fs::read_to_string(file).map_err(|e| Failure::Io(format!("{}: {e}", file.display())))?;
    let parsed = if is_csv {
        let uc = use_case.ok_or_else(|| Failure::Usage("--use-case is required for CSV input".into()))?;
        let list = tabular::parse_csv(&text).map_err(|e| Failure::Validation(format!("{}: {e}", file.display())))?;
        vec![(uc.to_string(), list)]
    } else {
        let mut all: Vec<_> = files::parse_assessments(file, &text)?.into_iter().collect();
        if let Some(uc) = use_case {
            all.retain(|(id, _)| id == uc);
        }
        all
    };
    mutate(dir, |p, c| {
        for (reference, list) in parsed {
            let uc = p.resolve_use_case(c, &reference)?.id.clone();
            p.assessments.insert(uc, list);
        }
        Ok(())
    })
}

fn report(dir: &Path, args: &ReportArgs, out: &mut dyn Write) -> Outcome {
    let store = open(dir)?;
    let catalog = store.catalog()?;
    let project = store.load()?;
    let need_id = || {
        args.id
            .clone()
            .ok_or_else(|| Failure::Usage(format!("report {:?} needs an id", args.kind).to_lowercase()))
    };
    let unsupported = || Failure::Usage(format!("{:?} report has no {:?} format", args.kind, args.format).to_lowercase());
    let text = match (args.kind, args.format) {
        (ReportKind::Usecase, Format::Json) => {
            let id = need_id()?;
            let mut bundle = use_case_bundle(&project, &catalog, &id)?;
            if args.attach {
                let r = use_case_report(&project, &catalog, &id)?;
                bundle.attachments.insert("radar.svg".into(), radar_svg(&r.scores.categories, args.size)?);
                bundle
                    .attachments
                    .insert("scores.csv".into(), tabular::export_csv(&catalog, project.assessments_for(&r.use_case_id)));
            }
            files::to_canonical_json(&bundle)
        }
        (ReportKind::Usecase, Format::Table) => {
            let r = use_case_report(&project, &catalog, &need_id()?)?;
            usecase_table(&catalog, &r)
        }
        (ReportKind::Usecase, Format::Csv) => {
            let uc = project.resolve_use_case(&catalog, &need_id()?)?;
            tabular::export_csv(&catalog, project.assessments_for(&uc.id))
        }
        (ReportKind::Usecase, Format::Svg) => {
            let r = use_case_report(&project, &catalog, &need_id()?)?;
            radar_svg(&r.scores.categories, args.size)?
        }
        (ReportKind::Service, Format::Json) => {
            let id = need_id()?;
            let mut bundle = service_bundle(&project, &catalog, &id)?;
            if args.attach {
                let svg = render_progress_svg(&progress_report(&project, &catalog, &id)?, args.size);
                bundle.attachments.insert("progress.svg".into(), svg);
            }
            files::to_canonical_json(&bundle)
        }
        (ReportKind::Service, Format::Table) => service_table(&progress_report(&project, &catalog, &need_id()?)?),
        (ReportKind::Service, Format::Svg) => {
            render_progress_svg(&progress_report(&project, &catalog, &need_id()?)?, args.size)
        }
        (ReportKind::Overall, Format::Json) => {
            let mut bundle = overall_bundle(&project, &catalog)?;
            if args.attach {
                if let Some(o) = &bundle.overall {
                    bundle.attachments.insert("radar.svg".into(), radar_svg(&o.categories, args.size)?);
                }
            }
            files::to_canonical_json(&bundle)
        }
        (ReportKind::Overall, Format::Table) => {
            let bundle = overall_bundle(&project, &catalog)?;
            let o = bundle
                .overall
                .ok_or_else(|| Failure::Validation("no considered use case has assessments".into()))?;
            let mut t = category_table(&o.categories, [o.total_readiness, o.total_aspiration, f64::NAN]);
            let _ = writeln!(t, "\nUse cases: {}", o.use_cases.join(", "));
            let _ = writeln!(t, "Gap (aspiration - readiness): {:.1}", o.display.gap);
            if !bundle.unassessed_use_cases.is_empty() {
                let _ = writeln!(t, "Not yet assessed: {}", bundle.unassessed_use_cases.join(", "));
            }
            t
        }
        (ReportKind::Overall, Format::Svg) => {
            let bundle = overall_bundle(&project, &catalog)?;
            let o = bundle
                .overall
                .ok_or_else(|| Failure::Validation("no considered use case has assessments".into()))?;
            radar_svg(&o.categories, args.size)?
        }
        (ReportKind::Impact, format) => {
            let uc = project.resolve_use_case(&catalog, &need_id()?)?;
            let profile = project
                .impacts
                .get(&uc.id)
                .ok_or_else(|| Failure::Validation(format!("use case '{}' has no impact profile", uc.id)))?;
            match format {
                Format::Svg => {
                    let chart = if args.bars { ImpactChart::Bars } else { ImpactChart::Radar };
                    render_impact_svg(profile.points(), args.size, chart)
                }
                Format::Json => files::to_canonical_json(&serde_json::json!({
                    "schema_version": crf_core::SCHEMA_VERSION,
                    "use_case_id": uc.id,
                    "impact": profile,
                })),
                Format::Table => {
                    let mut t = String::new();
                    for (f, p) in crf_core::ImpactFactor::ALL.iter().zip(profile.points()) {
                        let _ = writeln!(t, "{:<14}{:>3}", f.label(), p);
                    }
                    t
                }
                Format::Csv => return Err(unsupported()),
            }
        }
        _ => return Err(unsupported()),
    };
    emit(out, args.out.as_deref(), &text)
}

fn radar_svg(categories: &CategoryScores, size: u32) -> Result<String, Failure> {
    render_radar_svg(&radar_series(categories), size).map_err(|e| Failure::Validation(e.to_string()))
}

fn fmt1(v: f64) -> String {
    if v.is_nan() {
        "-".into()
    } else {
        format!("{:.1}", round1(v))
    }
}

fn category_table(c: &CategoryScores, totals: [f64; 3]) -> String {
    let mut t = format!("{:<14}{:>11}{:>11}{:>11}\n", "category", "readiness", "aspiration", "threshold");
    for cat in Category::ALL {
        match c.get(cat) {
            Some(d) => {
                let _ = writeln!(
                    t,
                    "{:<14}{:>11}{:>11}{:>11}",
                    cat.label(),
                    fmt1(d.readiness),
                    fmt1(d.aspiration),
                    fmt1(d.threshold)
                );
            }
            None => {
                let _ = writeln!(t, "{:<14}{:>11}{:>11}{:>11}", cat.label(), "n/a", "n/a", "n/a");
            }
        }
    }
    let _ = writeln!(
        t,
        "{:<14}{:>11}{:>11}{:>11}",
        "Total",
        fmt1(totals[0]),
        fmt1(totals[1]),
        fmt1(totals[2])
    );
    t
}

fn usecase_table(catalog: &Catalog, r: &UseCaseReport) -> String {
    let mut t = format!("Use case {}", r.use_case_id);
    if let Some(s) = &r.scenario_id {
        let _ = write!(t, " (scenario {s})");
    }
    t.push_str("\n\n");
    let _ = writeln!(
        t,
        "{:<32}{:<14}{:<8}{:>6}{:>6}{:>6}  cost",
        "enabler", "category", "import.", "ready", "aspir", "thres"
    );
    for e in &r.enablers {
        let name = catalog.enabler(&e.enabler_id).map_or(e.enabler_id.as_str(), |x| x.name.as_str());
        let cost = crf_core::LikertLevel::ALL[usize::from(e.cost_points)].as_str();
        let _ = writeln!(
            t,
            "{:<32}{:<14}{:<8}{:>6}{:>6}{:>6}  {}",
            truncate(name, 31),
            e.category.label(),
            e.importance.as_str(),
            e.readiness_score,
            e.aspiration_score,
            e.threshold_score,
            cost
        );
    }
    t.push('\n');
    let s = &r.scores;
    t.push_str(&category_table(
        &s.categories,
        [s.total_readiness, s.total_aspiration, s.total_threshold],
    ));
    let _ = writeln!(t, "\nDeployment cost: {}", s.deployment_cost);
    let _ = writeln!(t, "Progress: {:.1}%", r.progress * 100.0);
    let f = &r.feasibility;
    if f.feasible {
        let _ = writeln!(t, "Feasible: yes (margin {})", f.margin);
    } else {
        let _ = writeln!(t, "Feasible: no (margin {})", f.margin);
        for b in &f.blockers {
            let _ = writeln!(
                t,
                "  blocker {:<30} readiness {} < threshold {} (gap {})",
                b.enabler_id, b.readiness_score, b.threshold_score, b.gap
            );
        }
    }
    if !r.unassessed.is_empty() {
        let _ = writeln!(t, "Not yet assessed: {}", r.unassessed.join(", "));
    }
    t
}

fn truncate(s: &str, n: usize) -> String {
    if s.chars().count() <= n {
        s.into()
    } else {
        let mut t: String = s.chars().take(n - 1).collect();
        t.push('~');
        t
    }
}

fn service_table(p: &crf_core::ProgressReport) -> String {
    let mut t = format!("Service {} ({})\n\n", p.service_id, p.service_name);
    for b in &p.bars {
        let value = match b.progress {
            Some(v) => format!("{:.1}%", v * 100.0),
            None if b.considered => "not assessed".into(),
            None => "not considered".into(),
        };
        let _ = writeln!(t, "{:<10}{:<40}{:>15}", b.use_case_id, truncate(&b.name, 39), value);
    }
    let service = p.service.map_or_else(|| "n/a".into(), |v| format!("{:.1}%", v * 100.0));
    let _ = writeln!(t, "{:<50}{:>15}", "Service", service);
    t
}

fn whatif(dir: &Path, args: &WhatifArgs, out: &mut dyn Write) -> Outcome {
    let store = open(dir)?;
    let catalog = store.catalog()?;
    let project = store.load()?;
    let overrides = args
        .assignments
        .iter()
        .map(|a| Override::parse(&args.enabler, a))
        .collect::<Result<Vec<_>, _>>()?;
    let uc = project.resolve_use_case(&catalog, &args.use_case)?.id.clone();
    let mut overlay = project.clone();
    let changed = apply_overrides(project.assessments_for(&uc), &overrides)?;
    overlay.assessments.insert(uc.clone(), changed);
    let text = match args.format {
        Format::Json => files::to_canonical_json(&use_case_bundle(&overlay, &catalog, &uc)?),
        Format::Csv => tabular::export_csv(&catalog, overlay.assessments_for(&uc)),
        Format::Svg => {
            let before = use_case_report(&project, &catalog, &uc)?;
            let after = use_case_report(&overlay, &catalog, &uc)?;
            let mut series = radar_series(&after.scores.categories);
            for s in radar_series(&before.scores.categories).into_iter().take(1) {
                series.push(crf_core::RadarSeries {
                    label: "Current readiness".into(),
                    style: "baseline".into(),
                    ..s
                });
            }
            render_radar_svg(&series, args.size).map_err(|e| Failure::Validation(e.to_string()))?
        }
        Format::Table => {
            let before = use_case_report(&project, &catalog, &uc)?;
            let after = use_case_report(&overlay, &catalog, &uc)?;
            whatif_table(&before, &after)
        }
    };
    emit(out, None, &text)
}

fn whatif_table(before: &UseCaseReport, after: &UseCaseReport) -> String {
    let mut t = format!("What-if for {} (not saved)\n\n", after.use_case_id);
    let _ = writeln!(t, "{:<14}{:>11}{:>11}{:>9}", "readiness", "current", "what-if", "delta");
    let row = |t: &mut String, label: &str, a: Option<f64>, b: Option<f64>| {
        let delta = match (a, b) {
            (Some(a), Some(b)) => format!("{:+.1}", round1(b - a)),
            _ => "-".into(),
        };
        let show = |v: Option<f64>| v.map_or_else(|| "n/a".into(), fmt1);
        let _ = writeln!(t, "{label:<14}{:>11}{:>11}{delta:>9}", show(a), show(b));
    };
    for cat in Category::ALL {
        row(
            &mut t,
            cat.label(),
            before.scores.categories.get(cat).map(|d| d.readiness),
            after.scores.categories.get(cat).map(|d| d.readiness),
        );
    }
    row(&mut t, "Total", Some(before.scores.total_readiness), Some(after.scores.total_readiness));
    let _ = writeln!(
        t,
        "\nFeasible: {} -> {}",
        yes_no(before.feasibility.feasible),
        yes_no(after.feasibility.feasible)
    );
    t
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn snapshot(dir: &Path, cmd: SnapshotCmd, out: &mut dyn Write) -> Outcome {
    let store = open(dir)?;
    match cmd {
        SnapshotCmd::Create { label } => {
            let writer = store.writer()?;
            let s = writer.snapshot(&store.load()?, &label)?;
            emit(out, None, &format!("{}\n", s.id))
        }
        SnapshotCmd::List => {
            let mut t = String::new();
            for s in store.list_snapshots()? {
                let _ = writeln!(t, "{}\t{}\t{}", s.id, s.timestamp, s.label);
            }
            emit(out, None, &t)
        }
        SnapshotCmd::Diff { a, b, format } => {
            let catalog = store.catalog()?;
            let d = store.diff_snapshots(&a, &b, &catalog)?;
            let text = match format {
                Format::Json => files::to_canonical_json(&serde_json::json!({
                    "schema_version": crf_core::SCHEMA_VERSION,
                    "a": a,
                    "b": b,
                    "diff": d,
                })),
                Format::Table => diff_table(&d),
                _ => return Err(Failure::Usage("snapshot diff supports table and json".into())),
            };
            emit(out, None, &text)
        }
    }
}

fn diff_table(d: &DiffReport) -> String {
    if d.is_empty() {
        return "no changes\n".into();
    }
    let mut t = String::new();
    for id in &d.use_cases_added {
        let _ = writeln!(t, "+ use case {id}");
    }
    for id in &d.use_cases_removed {
        let _ = writeln!(t, "- use case {id}");
    }
    for e in &d.enablers {
        let changes: Vec<String> = e
            .changes
            .iter()
            .map(|c| {
                let lvl = |l: Option<LikertLevel>| l.map_or("-", LikertLevel::as_str);
                format!("{} {}->{}", c.dimension.as_str(), lvl(c.from), lvl(c.to))
            })
            .collect();
        let _ = writeln!(
            t,
            "{} {}: {} (readiness score {:+})",
            e.use_case_id,
            e.enabler_id,
            changes.join(", "),
            e.readiness_score_delta
        );
    }
    for u in &d.use_cases {
        if let Some(r) = u.total_readiness_delta {
            let _ = writeln!(t, "{} total readiness {:+.1}", u.use_case_id, round1(r));
        }
    }
    if let Some(o) = &d.overall {
        let _ = writeln!(
            t,
            "overall gap {} -> {} ({:+.1})",
            fmt1(o.gap_before),
            fmt1(o.gap_after),
            round1(o.gap_delta)
        );
    }
    t
}

fn serve(dir: &Path, args: ServeArgs, err: &mut dyn Write) -> Outcome {
    let state = crate::api::AppState::open(dir).map_err(|e| Failure::Io(e.to_string()))?;
    let options = crate::api::ServeOptions {
        dev: args.dev,
        static_dir: args.static_dir,
    };
    let addr = format!("{}:{}", args.bind, args.port);
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(e.to_string()))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .map_err(|e| Failure::Io(format!("{addr}: {e}")))?;
        let local = listener.local_addr().map_err(|e| Failure::Io(e.to_string()))?;
        let _ = writeln!(err, "serving {} on http://{local}", dir.display());
        crate::api::serve(listener, state, options, async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| Failure::Io(e.to_string()))
    })
}
