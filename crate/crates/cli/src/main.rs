//! Command-line driver: classify singular points, compute condition-matrix
//! ranks and defects, evaluate Hodge numbers, and run the packaged examples.
//!
//! Exit codes: `0` success, `2` input or validation errors, `3` undecided
//! numeric outcomes (a partial report is still emitted).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use adefect::defect::{
    build_condition_matrix, build_vanishing_matrix, defect_double, defect_nfold, defect_triple,
    ConditionMatrix, DefectError, DefectResult, RankBackend, RankResult, Specialization,
};
use adefect::gallery::{run_example, GalleryError, EXAMPLE_NAMES};
use adefect::hodge::{
    euler_check, hodge_big_cover, hodge_small, small_big_conversion, BranchKind, CoverSpec,
    HodgeCheck, HodgeError, HodgeReport,
};
use adefect::numbers::{AlgebraicValue, NumError};
use adefect::poly::{parse_poly, MultiPoly, ProjectivePoint};
use adefect::singular::{
    adapted_frame, classify, is_singular, ADEType, ClassifyOptions, SingError,
    SingularPointRecord,
};

#[derive(Parser)]
#[command(
    name = "adefect",
    version,
    about = "Defect and Hodge numbers of threefolds with A-D-E singularities"
)]
struct Cli {
    /// Working precision in bits for ball arithmetic (64..=4096).
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,
    /// Rank engine selection.
    #[arg(long, global = true, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    /// Fraction-free elimination over the rationals; rational entries only.
    Exact,
    /// Certified ball elimination at the working precision.
    Numeric,
    /// Exact when every entry is rational, numeric otherwise.
    Auto,
}

impl From<BackendArg> for RankBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => RankBackend::Exact,
            BackendArg::Numeric => RankBackend::Numeric,
            BackendArg::Auto => RankBackend::Auto,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ConditionsArg {
    /// Vanishing at the points (one value column per point).
    Values,
    /// Value + Hessian-kernel derivative per cusp (triple-cover systems).
    Cusp,
    /// Value + derivative chain per A-point (double-cover systems).
    Chain,
    /// The full condition table, using the stored frames (A, D, and E).
    Table,
    /// Value + fiber-direction derivative per node (quintic systems).
    Quintic,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the singular points of a surface.
    Classify {
        /// Polynomial expression file (one homogeneous polynomial).
        #[arg(long)]
        surface: PathBuf,
        /// JSON array of coordinate arrays or of full point records.
        #[arg(long)]
        points: PathBuf,
    },
    /// Rank of the condition matrix the points impose in a given degree.
    Rank {
        #[arg(long)]
        points: PathBuf,
        /// Degree of the monomial basis.
        #[arg(long)]
        degree: u32,
        /// Condition columns to generate per point.
        #[arg(long, value_enum, default_value_t = ConditionsArg::Values)]
        conditions: ConditionsArg,
        /// Surface to classify against when the points file has no types.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Defect of a cyclic cover branched along a singular surface.
    Defect {
        #[arg(long)]
        points: PathBuf,
        /// Degree of the branch surface.
        #[arg(long)]
        degree: u32,
        /// Degree of the cyclic cover.
        #[arg(long)]
        cover: u32,
        /// Surface to classify against when the points file has no types.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Hodge numbers of the resolved cover.
    Hodge {
        /// Degree of the cyclic cover.
        #[arg(long)]
        cover: u32,
        /// Degree of the branch surface.
        #[arg(long)]
        degree: u32,
        /// Points file, or `none` for a smooth branch surface.
        #[arg(long)]
        points: String,
        /// Surface to classify against when the points file has no types.
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Run a packaged example end to end.
    Gallery {
        /// Example name; `list` prints the available names.
        name: String,
    },
}

/// A failed run: input problems exit 2, undecided numerics exit 3 with
/// whatever partial report is available.
enum Failure {
    Input(String),
    Undecided { partial: Value, message: String },
}

impl Failure {
    fn input(e: impl std::fmt::Display) -> Self {
        Failure::Input(e.to_string())
    }
}

fn undecided_sing(e: SingError, stage: &str) -> Failure {
    match e {
        SingError::Undecided => Failure::Undecided {
            partial: json!({ "stage": stage, "undecided": true }),
            message: format!("{stage}: zero test undecided at this precision"),
        },
        other => Failure::Input(format!("{stage}: {other}")),
    }
}

fn undecided_defect(e: DefectError, stage: &str) -> Failure {
    match e {
        DefectError::RankUndecided(est) => Failure::Undecided {
            partial: json!({
                "stage": stage,
                "undecided": true,
                "rank_estimate": est,
            }),
            message: format!("{stage}: rank undecided; best estimate {}", est.rank),
        },
        DefectError::Sing(s) => undecided_sing(s, stage),
        DefectError::Num(NumError::PrecisionExhausted(p)) => Failure::Undecided {
            partial: json!({ "stage": stage, "undecided": true }),
            message: format!("{stage}: precision exhausted at {p} bits"),
        },
        other => Failure::Input(format!("{stage}: {other}")),
    }
}

fn undecided_gallery(e: GalleryError) -> Failure {
    match e {
        GalleryError::Defect(d) => undecided_defect(d, "gallery"),
        GalleryError::Sing(s) => undecided_sing(s, "gallery"),
        GalleryError::Num(NumError::PrecisionExhausted(p)) => Failure::Undecided {
            partial: json!({ "stage": "gallery", "undecided": true }),
            message: format!("gallery: precision exhausted at {p} bits"),
        },
        other => Failure::Input(format!("gallery: {other}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if !(64..=4096).contains(&cli.precision) {
        eprintln!("error: --precision must lie in 64..=4096");
        return ExitCode::from(2);
    }
    let format = cli.format;
    match dispatch(cli) {
        Ok(report) => {
            emit(&report, format);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Undecided { partial, message }) => {
            eprintln!("error: {message}");
            emit(&Report { json: partial, text: message }, format);
            ExitCode::from(3)
        }
    }
}

/// A report carries both renderings so either format is one `emit` away.
struct Report {
    json: Value,
    text: String,
}

fn emit(report: &Report, format: FormatArg) {
    match format {
        FormatArg::Json => println!(
            "{}",
            serde_json::to_string_pretty(&report.json).expect("report serialization")
        ),
        FormatArg::Text => println!("{}", report.text),
    }
}

fn dispatch(cli: Cli) -> Result<Report, Failure> {
    let precision = cli.precision;
    let backend: RankBackend = cli.backend.into();
    match cli.command {
        Command::Classify { surface, points } => cmd_classify(&surface, &points, precision),
        Command::Rank {
            points,
            degree,
            conditions,
            surface,
        } => cmd_rank(&points, degree, conditions, surface.as_deref(), backend, precision),
        Command::Defect {
            points,
            degree,
            cover,
            surface,
        } => cmd_defect(&points, degree, cover, surface.as_deref(), backend, precision),
        Command::Hodge {
            cover,
            degree,
            points,
            surface,
        } => cmd_hodge(cover, degree, &points, surface.as_deref(), backend, precision),
        Command::Gallery { name } => cmd_gallery(&name, backend, precision),
    }
}

// ---------------------------------------------------------------------------
// input loading

/// Reads a `.poly` file: one polynomial expression in variables `y0, y1, …`.
/// The variable count is the largest index mentioned plus one (at least 4).
fn load_surface(path: &Path) -> Result<MultiPoly, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut nvars = 4usize;
    let bytes = src.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'y' {
            let mut j = i + 1;
            let mut idx = 0usize;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                idx = idx * 10 + (bytes[j] - b'0') as usize;
                j += 1;
            }
            if j > i + 1 {
                nvars = nvars.max(idx + 1);
            }
        }
    }
    let poly = parse_poly(src.trim(), nvars)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if poly.homogeneous_degree().is_none() {
        return Err(Failure::Input(format!(
            "{}: the polynomial is not homogeneous",
            path.display()
        )));
    }
    Ok(poly)
}

/// What a `.pts` file contained: full records, or bare coordinates that
/// still need classification against a surface.
enum LoadedPoints {
    Records(Vec<SingularPointRecord>),
    Coordinates(Vec<Vec<AlgebraicValue>>),
}

fn load_points(path: &Path) -> Result<LoadedPoints, Failure> {
    let src = fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&src)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    if let Ok(records) = serde_json::from_value::<Vec<SingularPointRecord>>(value.clone()) {
        return Ok(LoadedPoints::Records(records));
    }
    match serde_json::from_value::<Vec<Vec<AlgebraicValue>>>(value) {
        Ok(coords) => Ok(LoadedPoints::Coordinates(coords)),
        Err(e) => Err(Failure::Input(format!(
            "{}: neither point records nor coordinate arrays: {e}",
            path.display()
        ))),
    }
}

/// Classifies bare coordinates into full records: singularity check, type,
/// and a Hessian-kernel frame for the `A_{m>=2}` points that admit one.
fn classify_coordinates(
    surface: &MultiPoly,
    coords: Vec<Vec<AlgebraicValue>>,
    precision: u32,
) -> Result<Vec<SingularPointRecord>, Failure> {
    let opts = ClassifyOptions {
        precision,
        max_order: 16,
    };
    let mut records = Vec::with_capacity(coords.len());
    for (i, c) in coords.into_iter().enumerate() {
        let point = ProjectivePoint { coords: c };
        let singular = is_singular(surface, &point, precision)
            .map_err(|e| undecided_sing(e, &format!("point {i}")))?;
        if !singular {
            return Err(Failure::Input(format!(
                "point {i} is not singular on the surface"
            )));
        }
        let class = classify(surface, &point, &opts)
            .map_err(|e| undecided_sing(e, &format!("point {i}")))?;
        let (v1, v2, frame_kind) = match class.ade {
            ADEType::A(m) if m >= 2 => {
                let frame = adapted_frame(surface, &point, precision)
                    .map_err(|e| undecided_sing(e, &format!("point {i} frame")))?;
                (Some(frame.v1), frame.v2, frame.kind)
            }
            _ => (None, None, Default::default()),
        };
        records.push(SingularPointRecord {
            point,
            ade: class.ade,
            v1,
            v2,
            frame_kind,
        });
    }
    Ok(records)
}

/// Loads records, classifying bare coordinates when a surface is supplied.
fn load_records(
    points: &Path,
    surface: Option<&Path>,
    precision: u32,
) -> Result<Vec<SingularPointRecord>, Failure> {
    match load_points(points)? {
        LoadedPoints::Records(r) => Ok(r),
        LoadedPoints::Coordinates(c) => match surface {
            Some(s) => classify_coordinates(&load_surface(s)?, c, precision),
            None => Err(Failure::Input(
                "the points file has coordinates without types; pass --surface to classify them"
                    .into(),
            )),
        },
    }
}

fn inventory_json(records: &[SingularPointRecord]) -> Value {
    json!(adefect::singular::inventory_by_type(
        records.iter().map(|r| r.ade)
    ))
}

fn inventory_text(records: &[SingularPointRecord]) -> String {
    let inv = adefect::singular::inventory_by_type(records.iter().map(|r| r.ade));
    inv.iter()
        .map(|(t, n)| format!("{n} x {t}"))
        .collect::<Vec<_>>()
        .join(", ")
}

// ---------------------------------------------------------------------------
// subcommands

fn cmd_classify(surface: &Path, points: &Path, precision: u32) -> Result<Report, Failure> {
    let poly = load_surface(surface)?;
    let coords = match load_points(points)? {
        LoadedPoints::Records(r) => r.into_iter().map(|r| r.point.coords).collect(),
        LoadedPoints::Coordinates(c) => c,
    };
    let records = classify_coordinates(&poly, coords, precision)?;
    let mut lines = Vec::with_capacity(records.len() + 2);
    lines.push(format!(
        "{} singular points on a degree-{} surface: {}",
        records.len(),
        poly.homogeneous_degree().unwrap_or(0),
        inventory_text(&records)
    ));
    for (i, r) in records.iter().enumerate() {
        let frame = if r.v1.is_some() { "with frame" } else { "no frame" };
        lines.push(format!("  {i:3}  {}  {frame}", r.ade));
    }
    Ok(Report {
        json: json!({
            "surface": poly.to_string(),
            "inventory": inventory_json(&records),
            "points": records,
        }),
        text: lines.join("\n"),
    })
}

fn build_matrix(
    degree: u32,
    conditions: ConditionsArg,
    records: &[SingularPointRecord],
) -> Result<ConditionMatrix, Failure> {
    let stage = "matrix";
    match conditions {
        ConditionsArg::Values => {
            let points: Vec<ProjectivePoint> = records.iter().map(|r| r.point.clone()).collect();
            build_vanishing_matrix(degree, &points).map_err(|e| undecided_defect(e, stage))
        }
        ConditionsArg::Cusp => build_condition_matrix(degree, records, Specialization::TripleCusp)
            .map_err(|e| undecided_defect(e, stage)),
        ConditionsArg::Chain => {
            build_condition_matrix(degree, records, Specialization::DoubleAChain)
                .map_err(|e| undecided_defect(e, stage))
        }
        ConditionsArg::Table => {
            build_condition_matrix(degree, records, Specialization::GeneralLinearFrame)
                .map_err(|e| undecided_defect(e, stage))
        }
        ConditionsArg::Quintic => {
            build_condition_matrix(degree, records, Specialization::QuinticA3)
                .map_err(|e| undecided_defect(e, stage))
        }
    }
}

fn cmd_rank(
    points: &Path,
    degree: u32,
    conditions: ConditionsArg,
    surface: Option<&Path>,
    backend: RankBackend,
    precision: u32,
) -> Result<Report, Failure> {
    let records = load_records(points, surface, precision)?;
    let matrix = build_matrix(degree, conditions, &records)?;
    let rank: RankResult = matrix
        .rank(backend, precision)
        .map_err(|e| undecided_defect(e, "rank"))?;
    let text = format!(
        "rank {} of a {} x {} condition matrix in degree {} ({}certified)",
        rank.rank,
        matrix.row_count(),
        matrix.col_count(),
        degree,
        if rank.certified { "" } else { "NOT " },
    );
    Ok(Report {
        json: json!({
            "degree": degree,
            "points": records.len(),
            "rows": matrix.row_count(),
            "cols": matrix.col_count(),
            "rank": rank,
        }),
        text,
    })
}

/// Defect dispatch shared by `defect` and `hodge`: triple and double covers
/// use their condition-table formulas, higher covers the nodal one.
fn compute_defect(
    degree: u32,
    cover: u32,
    records: &[SingularPointRecord],
    backend: RankBackend,
    precision: u32,
) -> Result<DefectResult, Failure> {
    let stage = "defect";
    match cover {
        3 => defect_triple(degree, records, backend, precision)
            .map_err(|e| undecided_defect(e, stage)),
        2 => defect_double(degree, records, backend, precision)
            .map_err(|e| undecided_defect(e, stage)),
        n => {
            if let Some(r) = records.iter().find(|r| r.ade != ADEType::A(1)) {
                return Err(Failure::Input(format!(
                    "a {n}-fold cover supports only ordinary nodes, found {}",
                    r.ade
                )));
            }
            let nodes: Vec<ProjectivePoint> = records.iter().map(|r| r.point.clone()).collect();
            defect_nfold(degree, n, &nodes, backend, precision)
                .map_err(|e| undecided_defect(e, stage))
        }
    }
}

fn defect_text(defect: &DefectResult) -> String {
    let ranks = defect
        .components
        .iter()
        .map(|c| format!("rank {} in degree {} ({} x {})", c.rank.rank, c.degree, c.rows, c.cols))
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "defect {} = mu {} - [{}] via the {} formula ({}certified)",
        defect.delta,
        defect.mu,
        ranks,
        defect.formula,
        if defect.certified { "" } else { "NOT " },
    )
}

fn cmd_defect(
    points: &Path,
    degree: u32,
    cover: u32,
    surface: Option<&Path>,
    backend: RankBackend,
    precision: u32,
) -> Result<Report, Failure> {
    let records = load_records(points, surface, precision)?;
    let defect = compute_defect(degree, cover, &records, backend, precision)?;
    Ok(Report {
        json: serde_json::to_value(&defect).expect("defect serialization"),
        text: defect_text(&defect),
    })
}

fn branch_kind(cover: u32) -> BranchKind {
    match cover {
        3 => BranchKind::Cuspidal,
        2 => BranchKind::DuVal,
        _ => BranchKind::Nodal,
    }
}

fn cmd_hodge(
    cover: u32,
    degree: u32,
    points: &str,
    surface: Option<&Path>,
    backend: RankBackend,
    precision: u32,
) -> Result<Report, Failure> {
    let records = if points == "none" {
        Vec::new()
    } else {
        load_records(Path::new(points), surface, precision)?
    };
    let defect = compute_defect(degree, cover, &records, backend, precision)?;
    let mut inventory = std::collections::BTreeMap::new();
    for r in &records {
        *inventory.entry(r.ade).or_insert(0usize) += 1;
    }
    let spec = CoverSpec::new(degree, cover, branch_kind(cover), inventory);
    let ranks: Vec<RankResult> = defect.components.iter().map(|c| c.rank.clone()).collect();

    let small = match hodge_small(&spec, &ranks) {
        Ok(s) => Some(s),
        Err(HodgeError::UnsupportedFiberTopology(_)) | Err(HodgeError::UnsupportedCover(_)) => {
            None
        }
        Err(e) => return Err(Failure::input(e)),
    };
    let mut big = hodge_big_cover(&spec, defect.delta).map_err(Failure::input)?;
    big.rank_inputs = ranks;

    let mut checks: Vec<HodgeCheck> = Vec::new();
    let small = match small {
        Some(mut s) => {
            let shifted = small_big_conversion(&spec, &s).map_err(Failure::input)?;
            let path_ok = shifted.h11 == big.h11 && shifted.h12 == big.h12 && s.h12 == big.h12;
            let euler = euler_check(&s, &spec).map_err(Failure::input)?;
            checks.push(HodgeCheck {
                name: "euler".into(),
                pass: euler.pass,
            });
            checks.push(HodgeCheck {
                name: "path_independence".into(),
                pass: path_ok,
            });
            s.checks = checks.clone();
            Some(s)
        }
        None => None,
    };
    big.checks = checks.clone();

    let (h11, h12) = match &small {
        Some(s) => (s.h11, s.h12),
        None => (big.h11, big.h12),
    };
    let text = render_hodge_text(cover, degree, &records, h11, h12, &defect, &small, &big, &checks);
    Ok(Report {
        json: json!({
            "cover": cover,
            "degree": degree,
            "points": records.len(),
            "inventory": inventory_json(&records),
            "h11": h11,
            "h12": h12,
            "defect": defect,
            "small": small,
            "big": big,
            "checks": checks,
        }),
        text,
    })
}

#[allow(clippy::too_many_arguments)]
fn render_hodge_text(
    cover: u32,
    degree: u32,
    records: &[SingularPointRecord],
    h11: i64,
    h12: i64,
    defect: &DefectResult,
    small: &Option<HodgeReport>,
    big: &HodgeReport,
    checks: &[HodgeCheck],
) -> String {
    let mut lines = vec![format!(
        "degree-{cover} cover branched along a degree-{degree} surface with {} singular points{}",
        records.len(),
        if records.is_empty() {
            String::new()
        } else {
            format!(" ({})", inventory_text(records))
        },
    )];
    lines.push(format!("  h11 = {h11}, h12 = {h12}"));
    lines.push(format!("  {}", defect_text(defect)));
    if let Some(s) = small {
        lines.push(format!(
            "  small resolution: h11 = {}, h12 = {}; big resolution: h11 = {}, h12 = {}",
            s.h11, s.h12, big.h11, big.h12
        ));
    } else {
        lines.push(format!(
            "  big resolution: h11 = {}, h12 = {} (no small-resolution route for this cover)",
            big.h11, big.h12
        ));
    }
    for c in checks {
        lines.push(format!(
            "  check {}: {}",
            c.name,
            if c.pass { "ok" } else { "FAILED" }
        ));
    }
    lines.join("\n")
}

fn cmd_gallery(name: &str, backend: RankBackend, precision: u32) -> Result<Report, Failure> {
    if name == "list" {
        let names: Vec<&str> = EXAMPLE_NAMES.to_vec();
        return Ok(Report {
            json: json!({ "examples": names }),
            text: names.join("\n"),
        });
    }
    let run = run_example(name, backend, precision).map_err(undecided_gallery)?;
    let (h11, h12) = run.headline();
    let ranks: Vec<usize> = run
        .defect
        .components
        .iter()
        .map(|c| c.rank.rank)
        .collect();
    let mut lines = vec![format!(
        "{}: {} singular points ({}); h11 = {h11}, h12 = {h12}",
        run.bundle.name,
        run.bundle.records.len(),
        inventory_text(&run.bundle.records),
    )];
    lines.push(format!(
        "  ranks {:?}, mu = {}, defect = {}",
        ranks, run.defect.mu, run.defect.delta
    ));
    for c in &run.checks {
        lines.push(format!(
            "  check {}: {}",
            c.name,
            if c.pass { "ok" } else { "FAILED" }
        ));
    }
    lines.push(format!(
        "  expected ({}): ranks {:?}, h11 = {}, h12 = {} -> {}",
        run.bundle.expected.source,
        run.bundle.expected.ranks,
        run.bundle.expected.h11,
        run.bundle.expected.h12,
        if run.matches_expected {
            "reproduced"
        } else {
            "MISMATCH"
        }
    ));
    Ok(Report {
        json: run.to_json(),
        text: lines.join("\n"),
    })
}
