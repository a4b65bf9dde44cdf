//! Subcommands of the `bezmerge` executable.

use std::fmt::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use bezmerge::bezier::{CompositeBezier, Partition};
use bezmerge::merge::{
    self, BoxBounds, ContinuityFrame, FaceRule, FaceSelection, MergeResult, MergeSpec,
    DEFAULT_SAMPLES,
};

use crate::document::{frame_name, CurveDocument, ParseError, ResultDocument};
use crate::format::{sci3, significant};
use crate::svg::{Plot, PlotError, PlotStyle};

#[derive(Debug, Parser)]
#[command(
    name = "bezmerge",
    version,
    about = "Merge composite Bézier curves into one Bézier curve"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the arc-length knots of a curve document.
    Partition(PartitionArgs),
    /// Merge a composite curve into a single segment.
    Merge(MergeArgs),
    /// Draw curves, control polygons and a box as SVG.
    Plot(PlotArgs),
    /// Suggest a restricted area for boxed merging.
    SuggestBox(SuggestBoxArgs),
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    pub input: PathBuf,
    /// Significant digits of the printed knots.
    #[arg(long, default_value_t = 6)]
    pub digits: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FrameArg {
    Global,
    Segment,
}

impl From<FrameArg> for ContinuityFrame {
    fn from(f: FrameArg) -> Self {
        match f {
            FrameArg::Global => ContinuityFrame::Global,
            FrameArg::Segment => ContinuityFrame::Segment,
        }
    }
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    pub input: PathBuf,
    /// Degree of the merged curve.
    #[arg(long)]
    pub m: usize,
    /// Left continuity order (C^{k-1} at t = 0).
    #[arg(long)]
    pub k: usize,
    /// Right continuity order (C^{l-1} at t = 1).
    #[arg(long)]
    pub l: usize,
    /// Box `c1,...,cd:C1,...,Cd` confining the free control points.
    #[arg(long = "box", value_name = "LOWER:UPPER", allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Interior knots `t1,...,t_{s-1}` replacing the document's partition.
    #[arg(long, value_name = "KNOTS", allow_hyphen_values = true)]
    pub partition: Option<String>,
    /// Sample count for the maximum error.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Derivative frame for the endpoint conditions; defaults to the
    /// document's `frame` directive, else `global`.
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
    /// Write the result document here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write a plot of the input and the merged curve here.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    pub input: PathBuf,
    /// Result document whose curve is drawn over the input.
    #[arg(long)]
    pub merged: Option<PathBuf>,
    /// Box to frame; defaults to the result document's box.
    #[arg(long = "box", value_name = "LOWER:UPPER", allow_hyphen_values = true)]
    pub bounds: Option<String>,
    /// Outline the convex hull of the input control points.
    #[arg(long)]
    pub hull: bool,
    /// Output path.
    #[arg(long, alias = "out")]
    pub svg: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FacesArg {
    /// Faces holding the most control points of a merge in the previous box.
    Auto,
    Lower,
    Upper,
    All,
}

#[derive(Debug, Args)]
pub struct SuggestBoxArgs {
    pub input: PathBuf,
    /// Expansion as a fraction of the previous box's diagonal.
    #[arg(long, default_value_t = 0.04)]
    pub step: f64,
    /// Box to expand; without it the control-point bounding box is printed.
    #[arg(long, value_name = "LOWER:UPPER", allow_hyphen_values = true)]
    pub previous: Option<String>,
    #[arg(long, value_enum, default_value_t = FacesArg::Auto)]
    pub faces: FacesArg,
    /// Merge parameters for `--faces auto`.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, value_enum)]
    pub frame: Option<FrameArg>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Spec(bezmerge::Error),
    #[error("solver failure: {0}")]
    Solver(bezmerge::Error),
    #[error(transparent)]
    Plot(#[from] PlotError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Spec(_) | CliError::Plot(_) => 3,
            CliError::Solver(_) => 4,
        }
    }
}

/// Classify a library error raised while merging.
fn merge_error(e: bezmerge::Error) -> CliError {
    use bezmerge::Error as E;
    match e {
        E::Spec(_) | E::DegreeTooLarge { .. } => CliError::Spec(e),
        E::NotPositiveDefinite { .. } | E::NotSymmetric | E::IterationLimit { .. } => {
            CliError::Solver(e)
        }
        other => CliError::Solver(other),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_document(path: &Path) -> Result<CurveDocument, CliError> {
    CurveDocument::parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn load_curve(path: &Path, doc: &CurveDocument) -> Result<CompositeBezier, CliError> {
    doc.to_curve()
        .map_err(|e| CliError::Usage(format!("{}: invalid curve: {e}", path.display())))
}

/// Parse `c1,...,cd:C1,...,Cd`.
pub fn parse_box(text: &str) -> Result<BoxBounds, CliError> {
    let usage = |msg: &str| CliError::Usage(format!("--box '{text}': {msg}"));
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| usage("expected LOWER:UPPER"))?;
    let list = |s: &str| -> Result<Vec<f64>, CliError> {
        s.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| usage(&format!("'{v}' is not a number")))
            })
            .collect()
    };
    let (lower, upper) = (list(lo)?, list(hi)?);
    if lower.len() != upper.len() {
        return Err(usage("corners differ in dimension"));
    }
    BoxBounds::new(lower, upper).map_err(CliError::Spec)
}

pub fn format_box_arg(b: &BoxBounds) -> String {
    let join = |v: &[f64]| {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(",")
    };
    format!("{}:{}", join(b.lower()), join(b.upper()))
}

fn parse_interior(text: &str) -> Result<Partition, CliError> {
    let interior = if text.trim().is_empty() {
        Vec::new()
    } else {
        text.split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Usage(format!("--partition: '{v}' is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    Partition::from_interior(&interior).map_err(|e| CliError::Usage(format!("--partition: {e}")))
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Partition(a) => partition(a),
        Command::Merge(a) => merge_command(a),
        Command::Plot(a) => plot(a),
        Command::SuggestBox(a) => suggest_box(a),
    }
}

fn partition(args: &PartitionArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input)?;
    let curve = load_curve(
        &args.input,
        &CurveDocument {
            partition: None,
            ..doc
        },
    )?;
    let knots: Vec<String> = curve
        .partition()
        .knots()
        .iter()
        .map(|&t| significant(t, args.digits))
        .collect();
    Ok(format!("{}\n", knots.join(" ")))
}

fn merge_command(args: &MergeArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input)?;
    let mut curve = load_curve(&args.input, &doc)?;
    if let Some(p) = &args.partition {
        let p = parse_interior(p)?;
        curve = curve
            .with_partition(p)
            .map_err(|e| CliError::Usage(format!("--partition: {e}")))?;
    }
    let frame = args.frame.map(Into::into).or(doc.frame).unwrap_or_default();
    let mut spec = MergeSpec::new(args.m, args.k, args.l)
        .with_frame(frame)
        .with_samples(args.samples);
    if let Some(b) = &args.bounds {
        spec = spec.with_box(parse_box(b)?);
    }
    let result = merge::merge(&curve, &spec).map_err(merge_error)?;
    if let Some(out) = &args.out {
        write(out, &ResultDocument::from_result(&result).to_text())?;
    }
    if let Some(svg) = &args.svg {
        if curve.dim() != 2 {
            return Err(PlotError::Dimension(curve.dim()).into());
        }
        let merged = result.curve();
        let plot = Plot {
            original: Some(&curve),
            merged: Some(&merged),
            bounds: spec.bounds.as_ref(),
            hull: false,
        };
        write(svg, &plot.render(&PlotStyle::default())?)?;
    }
    Ok(report(&result))
}

/// Human-readable summary of a merge.
pub fn report(result: &MergeResult) -> String {
    let spec = &result.spec;
    let mut out = String::new();
    writeln!(
        out,
        "degree {}, continuity k={} l={}, frame {}",
        spec.degree,
        spec.left_order,
        spec.right_order,
        frame_name(spec.frame)
    )
    .unwrap();
    match &spec.bounds {
        Some(b) => writeln!(out, "box {}", format_box_arg(b)).unwrap(),
        None => writeln!(out, "box none (traditional merging)").unwrap(),
    }
    writeln!(out, "E2 = {}", sci3(result.e2)).unwrap();
    writeln!(out, "Einf = {}", sci3(result.e_inf)).unwrap();
    let its: Vec<String> = result.iterations().iter().map(|i| i.to_string()).collect();
    writeln!(out, "iterations {}", its.join(" ")).unwrap();
    let list = |v: &[usize]| {
        if v.is_empty() {
            "-".to_string()
        } else {
            v.iter()
                .map(|j| j.to_string())
                .collect::<Vec<_>>()
                .join(",")
        }
    };
    for (h, c) in result.coordinates.iter().enumerate() {
        writeln!(
            out,
            "coordinate {}: lower {} upper {} kkt {}",
            h + 1,
            list(&c.active_lower),
            list(&c.active_upper),
            sci3(c.kkt_residual)
        )
        .unwrap();
    }
    for w in &result.warnings {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}

fn plot(args: &PlotArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input)?;
    let curve = load_curve(&args.input, &doc)?;
    let result = match &args.merged {
        Some(path) => {
            Some(
                ResultDocument::parse(&read(path)?).map_err(|source| CliError::Parse {
                    path: path.display().to_string(),
                    source,
                })?,
            )
        }
        None => None,
    };
    let merged = match &result {
        Some(r) => Some(
            r.curve()
                .map_err(|e| CliError::Usage(format!("merged curve: {e}")))?,
        ),
        None => None,
    };
    let bounds = match (&args.bounds, &result) {
        (Some(b), _) => Some(parse_box(b)?),
        (None, Some(r)) => r.bounds().transpose().map_err(CliError::Spec)?,
        (None, None) => None,
    };
    let plot = Plot {
        original: Some(&curve),
        merged: merged.as_ref(),
        bounds: bounds.as_ref(),
        hull: args.hull,
    };
    write(&args.svg, &plot.render(&PlotStyle::default())?)?;
    Ok(format!("wrote {}\n", args.svg.display()))
}

fn suggest_box(args: &SuggestBoxArgs) -> Result<String, CliError> {
    let doc = load_document(&args.input)?;
    let curve = load_curve(&args.input, &doc)?;
    let previous = args.previous.as_deref().map(parse_box).transpose()?;
    let dim = curve.dim();
    let rule = match args.faces {
        FacesArg::Lower => FaceRule::Explicit(FaceSelection::lower_faces(dim)),
        FacesArg::Upper => FaceRule::Explicit(FaceSelection::upper_faces(dim)),
        FacesArg::All => FaceRule::Explicit(FaceSelection::all_faces(dim)),
        FacesArg::Auto if previous.is_none() => FaceRule::Explicit(FaceSelection::lower_faces(dim)),
        FacesArg::Auto => {
            let (Some(m), Some(k), Some(l)) = (args.m, args.k, args.l) else {
                return Err(CliError::Usage(
                    "--faces auto needs --m, --k and --l".into(),
                ));
            };
            let frame = args.frame.map(Into::into).or(doc.frame).unwrap_or_default();
            FaceRule::MostOccupied(MergeSpec::new(m, k, l).with_frame(frame))
        }
    };
    let b = merge::suggest_box(&curve, args.step, previous.as_ref(), &rule).map_err(merge_error)?;
    let show = |v: &[f64]| {
        v.iter()
            .map(|&x| significant(x, 6))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(format!(
        "lower {}\nupper {}\nbox {}\n",
        show(b.lower()),
        show(b.upper()),
        format_box_arg(&b)
    ))
}
