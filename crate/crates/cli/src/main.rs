//! Command-line front end: reads polytope/zonotope JSON, writes JSON reports
//! and CSV scans.
//!
//! Exit codes: 0 success, 2 validation error, 3 numeric failure, 4 I/O or
//! parse error.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use polyiso::geom::{shapes, Polytope, PolytopeDef};
use polyiso::isotropy::{
    isotropic_constant, isotropize, prism_check, reference_constant, ReferenceFamily,
};
use polyiso::movements::{scan, vertex_move_field, SpeedField};
use polyiso::zonotopes::{canonical_form, extremal_search, l_of_y, q_n, ZonotopeDef};
use polyiso::{criticality, Error as CoreError};

/// Numeric formatting used in every CSV cell: 17 significant digits, enough
/// to round-trip an f64.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Parser)]
#[command(name = "polyiso", version, about = "Isotropic constants of low-dimensional polytopes")]
struct Cli {
    /// Seed for randomized verification paths; current commands are
    /// deterministic and record it for reproducibility only.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form vs computed reference constants for the named families.
    Constants(ConstantsArgs),
    /// Isotropic constant of a polytope.
    Lk(InputArgs),
    /// Map a polytope into isotropic position.
    Isotropize(IsotropizeArgs),
    /// Facet defect vectors of an isotropic polytope.
    Defects(DefectsArgs),
    /// Affine/Euclidean reflector detection on every ridge.
    Reflectors(ReflectorsArgs),
    /// Prism identity check: L of base x [-h, h] vs prediction.
    Prism(PrismArgs),
    /// Scan the isotropic constant along a speed-field deformation.
    RsScan(RsScanArgs),
    /// Grid scan of L over the zonotope family C_n + [-y, y].
    ZonoScan(ZonoScanArgs),
    /// Canonical form of an (n+1)-generator zonotope.
    Canonicalize(CanonicalizeArgs),
}

#[derive(Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 2)]
    n_min: usize,
    #[arg(long, default_value_t = 4)]
    n_max: usize,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct IsotropizeArgs {
    #[arg(long)]
    input: PathBuf,
    /// Destination for the repositioned polytope JSON.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct DefectsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Zero-defect threshold.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ReflectorsArgs {
    #[arg(long)]
    input: PathBuf,
    /// Vertex matching tolerance override.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PrismArgs {
    /// Base polytope (one dimension below the prism).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    half_height: f64,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct RsScanArgs {
    #[arg(long)]
    input: PathBuf,
    /// Speed field JSON: {"direction": [..], "speeds": [..], "odd": bool};
    /// speeds follow the vertex order of the input file.
    #[arg(long, conflicts_with_all = ["move_vertex", "ridge"])]
    field: Option<PathBuf>,
    /// Build the field moving this simplicial vertex instead.
    #[arg(long, requires = "ridge")]
    move_vertex: Option<usize>,
    /// Ridge whose span the vertex moves against.
    #[arg(long)]
    ridge: Option<usize>,
    /// Move the antipodal vertex with opposite speed as well.
    #[arg(long, default_value_t = false)]
    odd: bool,
    #[arg(long, allow_hyphen_values = true)]
    t_min: f64,
    #[arg(long, allow_hyphen_values = true)]
    t_max: f64,
    #[arg(long, default_value_t = 41)]
    steps: usize,
    /// CSV destination (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ZonoScanArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    grid_step: f64,
    #[arg(long, default_value_t = false)]
    refine: bool,
    /// CSV destination for the grid samples (stdout only carries the summary).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CanonicalizeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Io(String),
    Parse(String),
    Core(CoreError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) => 4,
            CliError::Core(e) => match e {
                CoreError::NearSingularCovariance
                | CoreError::DegenerateSimplex(_)
                | CoreError::FrameFailure(_) => 3,
                _ => 2,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Io(m) | CliError::Parse(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))
}

fn read_polytope(path: &Path) -> CliResult<Polytope> {
    let def: PolytopeDef = read_json(path)?;
    Ok(def.build()?)
}

fn write_out(output: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report serializes")
}

#[derive(Serialize)]
struct LkReport {
    #[serde(rename = "L")]
    l: f64,
    volume: f64,
    det_cov: f64,
}

#[derive(Serialize)]
struct TransformJson {
    matrix: Vec<Vec<f64>>,
    shift: Vec<f64>,
}

#[derive(Serialize)]
struct IsotropizeReport {
    #[serde(rename = "L")]
    l: f64,
    volume: f64,
    det_cov: f64,
    transform: TransformJson,
    output: String,
}

#[derive(Serialize)]
struct DefectRow {
    facet_id: usize,
    defect: Vec<f64>,
    norm: f64,
}

#[derive(Serialize)]
struct DefectsReport {
    tolerance: f64,
    max_norm: f64,
    zero_defect: bool,
    facets: Vec<DefectRow>,
}

#[derive(Serialize)]
struct ReflectorRow {
    ridge_id: usize,
    is_affine: bool,
    is_euclidean: bool,
}

#[derive(Serialize)]
struct PrismReport {
    measured: f64,
    predicted: f64,
    abs_difference: f64,
}

#[derive(Serialize)]
struct CanonicalizeReport {
    y: Vec<f64>,
    #[serde(rename = "L_input")]
    l_input: f64,
    #[serde(rename = "L_canonical")]
    l_canonical: f64,
    transform: TransformJson,
}

#[derive(Serialize)]
struct ZonoScanSummary {
    n: usize,
    grid_step: f64,
    max_l: f64,
    argmax: Vec<Vec<f64>>,
    min_l: f64,
    argmin: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined_max: Option<(Vec<f64>, f64)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    refined_min: Option<(Vec<f64>, f64)>,
}

#[derive(Deserialize)]
struct SpeedFieldDef {
    direction: Vec<f64>,
    speeds: Vec<f64>,
    #[serde(default)]
    odd: bool,
}

fn transform_json(map: &polyiso::AffineMap) -> TransformJson {
    TransformJson {
        matrix: (0..map.matrix.nrows())
            .map(|r| (0..map.matrix.ncols()).map(|c| map.matrix[(r, c)]).collect())
            .collect(),
        shift: map.shift.as_slice().to_vec(),
    }
}

fn cmd_constants(args: &ConstantsArgs) -> CliResult<()> {
    if args.n_min < 2 || args.n_min > args.n_max {
        return Err(CliError::Core(CoreError::DegenerateInput(
            "need 2 <= n-min <= n-max".into(),
        )));
    }
    let mut lines = vec![format!(
        "{:<15}{:>3}  {:>24}  {:>24}  {:>10}",
        "family", "n", "closed_form", "computed", "abs_diff"
    )];
    for n in args.n_min..=args.n_max {
        for (family, name) in [
            (ReferenceFamily::Simplex, "simplex"),
            (ReferenceFamily::Cube, "cube"),
            (ReferenceFamily::CrossPolytope, "cross_polytope"),
            (ReferenceFamily::Q, "Q"),
        ] {
            let reference = reference_constant(family, n)?;
            let body = match family {
                ReferenceFamily::Simplex => shapes::standard_simplex(n),
                ReferenceFamily::Cube => shapes::cube(n),
                ReferenceFamily::CrossPolytope => shapes::cross_polytope(n),
                ReferenceFamily::Q => q_n(n).to_polytope()?,
            };
            let computed = isotropic_constant(&body)?.l;
            lines.push(format!(
                "{:<15}{:>3}  {:>24}  {:>24}  {:>10.3e}",
                name,
                n,
                fmt(reference),
                fmt(computed),
                (reference - computed).abs()
            ));
        }
    }
    write_out(args.output.as_ref(), &lines.join("\n"))
}

fn cmd_lk(args: &InputArgs) -> CliResult<()> {
    let p = read_polytope(&args.input)?;
    let r = isotropic_constant(&p)?;
    write_out(
        args.output.as_ref(),
        &to_json(&LkReport {
            l: r.l,
            volume: r.volume,
            det_cov: r.det_cov,
        }),
    )
}

fn cmd_isotropize(args: &IsotropizeArgs) -> CliResult<()> {
    let p = read_polytope(&args.input)?;
    let (iso, report) = isotropize(&p)?;
    let def = iso.to_def();
    fs::write(&args.output, to_json(&def))
        .map_err(|e| CliError::Io(format!("{}: {e}", args.output.display())))?;
    println!(
        "{}",
        to_json(&IsotropizeReport {
            l: report.l,
            volume: report.volume,
            det_cov: report.det_cov,
            transform: transform_json(&report.transform),
            output: args.output.display().to_string(),
        })
    );
    Ok(())
}

fn cmd_defects(args: &DefectsArgs) -> CliResult<()> {
    let p = read_polytope(&args.input)?;
    let defects = criticality::facet_defects(&p)?;
    let max_norm = defects.iter().map(|d| d.norm).fold(0.0_f64, f64::max);
    let report = DefectsReport {
        tolerance: args.tol,
        max_norm,
        zero_defect: max_norm <= args.tol,
        facets: defects
            .into_iter()
            .map(|d| DefectRow {
                facet_id: d.facet_id,
                defect: d.defect.as_slice().to_vec(),
                norm: d.norm,
            })
            .collect(),
    };
    write_out(args.output.as_ref(), &to_json(&report))
}

fn cmd_reflectors(args: &ReflectorsArgs) -> CliResult<()> {
    let p = read_polytope(&args.input)?;
    let rows: Vec<ReflectorRow> = (0..p.ridges().len())
        .map(|rid| {
            criticality::find_affine_reflector(&p, rid, args.tol).map(|rep| ReflectorRow {
                ridge_id: rid,
                is_affine: rep.is_affine,
                is_euclidean: rep.is_euclidean,
            })
        })
        .collect::<Result<_, _>>()?;
    write_out(args.output.as_ref(), &to_json(&rows))
}

fn cmd_prism(args: &PrismArgs) -> CliResult<()> {
    let base = read_polytope(&args.input)?;
    let (measured, predicted) = prism_check(&base, args.half_height)?;
    write_out(
        args.output.as_ref(),
        &to_json(&PrismReport {
            measured,
            predicted,
            abs_difference: (measured - predicted).abs(),
        }),
    )
}

fn cmd_rs_scan(args: &RsScanArgs) -> CliResult<()> {
    let p = read_polytope(&args.input)?;
    let field = if let Some(path) = &args.field {
        let def: SpeedFieldDef = read_json(path)?;
        SpeedField::new(
            &p,
            DVector::from_column_slice(&def.direction),
            def.speeds,
            def.odd,
        )?
    } else if let Some(vertex) = args.move_vertex {
        vertex_move_field(&p, vertex, args.ridge.expect("clap enforces"), args.odd)?
    } else {
        return Err(CliError::Core(CoreError::InvalidMovement(
            "provide --field or --move-vertex/--ridge".into(),
        )));
    };
    let result = scan(&p, &field, args.t_min, args.t_max, args.steps)?;
    let mut csv = String::from("t,L,valid,volume\n");
    for (t, l, valid, volume) in result.rows() {
        csv.push_str(&format!("{},{},{},{}\n", fmt(t), fmt(l), valid, fmt(volume)));
    }
    match &args.output {
        Some(path) => fs::write(path, &csv)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_zono_scan(args: &ZonoScanArgs) -> CliResult<()> {
    let search = extremal_search(args.n, args.grid_step, args.refine)?;
    let mut csv = String::new();
    let header: Vec<String> = (1..=args.n).map(|i| format!("y{i}")).collect();
    csv.push_str(&format!("{},L\n", header.join(",")));
    for (y, l) in &search.grid {
        let coords: Vec<String> = y.iter().map(|&c| fmt(c)).collect();
        csv.push_str(&format!("{},{}\n", coords.join(","), fmt(*l)));
    }
    if let Some(path) = &args.output {
        fs::write(path, &csv).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    } else {
        print!("{csv}");
    }
    println!(
        "{}",
        to_json(&ZonoScanSummary {
            n: search.n,
            grid_step: search.grid_step,
            max_l: search.max_l,
            argmax: search.argmax,
            min_l: search.min_l,
            argmin: search.argmin,
            refined_max: search.refined_max,
            refined_min: search.refined_min,
        })
    );
    Ok(())
}

fn cmd_canonicalize(args: &CanonicalizeArgs) -> CliResult<()> {
    let def: ZonotopeDef = read_json(&args.input)?;
    let n = def.dim;
    if def.generators.len() != n + 1 {
        return Err(CliError::Core(CoreError::DegenerateInput(format!(
            "canonical form needs exactly {} generators, got {}",
            n + 1,
            def.generators.len()
        ))));
    }
    let gens: Vec<DVector<f64>> = def
        .generators
        .iter()
        .map(|g| DVector::from_column_slice(g))
        .collect();
    let center = DVector::from_column_slice(&def.center);
    let (y, map) = canonical_form(&gens, &center)?;
    let l_input = isotropic_constant(&def.build()?.to_polytope()?)?.l;
    let l_canonical = l_of_y(&y)?;
    write_out(
        args.output.as_ref(),
        &to_json(&CanonicalizeReport {
            y: y.as_slice().to_vec(),
            l_input,
            l_canonical,
            transform: transform_json(&map),
        }),
    )
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Constants(args) => cmd_constants(args),
        Command::Lk(args) => cmd_lk(args),
        Command::Isotropize(args) => cmd_isotropize(args),
        Command::Defects(args) => cmd_defects(args),
        Command::Reflectors(args) => cmd_reflectors(args),
        Command::Prism(args) => cmd_prism(args),
        Command::RsScan(args) => cmd_rs_scan(args),
        Command::ZonoScan(args) => cmd_zono_scan(args),
        Command::Canonicalize(args) => cmd_canonicalize(args),
    };
    if let Err(e) = result {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
