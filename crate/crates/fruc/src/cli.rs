//! The `fruc` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use fruc_core::synth::synth_sequence;
use fruc_core::{ColorMode, Frame, FrucConfig, InterpolationMode, Rational, SequenceMeta};

use crate::dump::DumpTargets;
use crate::report::{summary_line, write_csv};
use crate::synth_args::parse_synth_spec;
use crate::y4m::{read_y4m, write_y4m, Y4mHeader};
use crate::{protocol, raw, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "fruc", version, about = "Motion-compensated frame-rate up-conversion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Double the frame rate of a sequence.
    Interpolate(InterpolateArgs),
    /// Drop the odd frames, rebuild them and report PSNR.
    Evaluate(EvaluateArgs),
    /// Generate a synthetic test sequence.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Unilateral,
    Bilateral,
    Proposed,
}

impl From<ModeArg> for InterpolationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Unilateral => InterpolationMode::Unilateral,
            ModeArg::Bilateral => InterpolationMode::Bilateral,
            ModeArg::Proposed => InterpolationMode::Proposed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalModeArg {
    Unilateral,
    Bilateral,
    Proposed,
    /// Every mode from one set of motion fields.
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawSize {
    pub width: usize,
    pub height: usize,
}

fn parse_raw_size(s: &str) -> std::result::Result<RawSize, String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or("expected WxH, e.g. 352x288")?;
    let width = w.parse().map_err(|_| format!("bad width `{w}`"))?;
    let height = h.parse().map_err(|_| format!("bad height `{h}`"))?;
    if width == 0 || height == 0 {
        return Err("dimensions must be positive".into());
    }
    Ok(RawSize { width, height })
}

fn parse_rate(s: &str) -> std::result::Result<Rational, String> {
    let (n, d) = s.split_once(':').unwrap_or((s, "1"));
    let r = Rational::new(n.parse().map_err(|_| format!("bad rate `{s}`"))?, d.parse().map_err(|_| format!("bad rate `{s}`"))?);
    if r.num == 0 || r.den == 0 {
        return Err("frame rate must be positive".into());
    }
    Ok(r)
}

/// Input selection shared by the subcommands that read video.
#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Input file: YUV4MPEG2, or headerless planar YUV with --raw-size.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Treat the input as headerless planar YUV of this size.
    #[arg(long, value_name = "WxH", value_parser = parse_raw_size)]
    pub raw_size: Option<RawSize>,
    /// Frame rate of raw input, `N` or `N:D`.
    #[arg(long, value_name = "RATE", default_value = "30", value_parser = parse_rate, requires = "raw_size")]
    pub fps: Rational,
    /// Raw input carries only the luma plane.
    #[arg(long, requires = "raw_size")]
    pub luma_only: bool,
}

/// Block-matching parameters.
#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// Block size of the unilateral searches.
    #[arg(long, default_value_t = 8)]
    pub uni_block: usize,
    /// Search range of the unilateral searches.
    #[arg(long, default_value_t = 16)]
    pub uni_search: i32,
    /// Block size of the bilateral search.
    #[arg(long, default_value_t = 16)]
    pub bi_block: usize,
    /// Search range of the bilateral search.
    #[arg(long, default_value_t = 8)]
    pub bi_search: i32,
    /// Overlap added on each side of a bilateral block.
    #[arg(long, default_value_t = 2)]
    pub obmc_margin: usize,
}

impl ConfigArgs {
    fn config(&self, mode: InterpolationMode) -> Result<FrucConfig> {
        let cfg = FrucConfig {
            uni_block: self.uni_block,
            uni_search: self.uni_search,
            bi_block: self.bi_block,
            bi_search: self.bi_search,
            obmc_margin: self.obmc_margin,
            mode,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    /// Write motion fields of every interpolated frame into this directory.
    #[arg(long, value_name = "DIR")]
    pub dump_mv: Option<PathBuf>,
    /// Write unilateral hole masks (PGM) into this directory.
    #[arg(long, value_name = "DIR")]
    pub dump_holes: Option<PathBuf>,
}

impl DumpArgs {
    fn targets(&self) -> Result<Option<DumpTargets>> {
        let t = DumpTargets {
            motion_dir: self.dump_mv.clone(),
            hole_dir: self.dump_holes.clone(),
        };
        if t.is_empty() {
            return Ok(None);
        }
        t.prepare()?;
        Ok(Some(t))
    }
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Output YUV4MPEG2 file.
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = ModeArg::Proposed)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub dump: DumpArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value_t = EvalModeArg::Proposed)]
    pub mode: EvalModeArg,
    /// CSV report path. With `--mode all`, the mode name is appended to the
    /// file stem for each report.
    #[arg(long, value_name = "CSV")]
    pub report: Option<PathBuf>,
    /// Use only the first N frames.
    #[arg(long, value_name = "N")]
    pub frames: Option<usize>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[command(flatten)]
    pub dump: DumpArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Sequence description, e.g. "width=176 height=144 frames=30
    /// background=noise:1:4 mover=seed:2,w:40,h:40,vx:2,vy:0". May repeat.
    #[arg(long, required = true, num_args = 1..)]
    pub spec: Vec<String>,
    /// Output YUV4MPEG2 file.
    #[arg(long, short)]
    pub output: PathBuf,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads the whole input described by `args`.
pub fn load_input(args: &InputArgs) -> Result<(Y4mHeader, Vec<Frame>)> {
    let reader = open(&args.input)?;
    match args.raw_size {
        None => read_y4m(reader),
        Some(size) => {
            let mode = if args.luma_only { ColorMode::LumaOnly } else { ColorMode::Yuv420 };
            let mut meta = SequenceMeta::new(size.width, size.height, args.fps, mode)?;
            let frames = raw::read_raw_all(reader, &meta)?;
            meta.frame_count = Some(frames.len());
            Ok((Y4mHeader::from_meta(meta), frames))
        }
    }
}

fn interpolate(args: &InterpolateArgs) -> Result<()> {
    let cfg = args.config.config(args.mode.into())?;
    let dumps = args.dump.targets()?;
    let (header, frames) = load_input(&args.input)?;
    let (meta, out) = protocol::double_rate(&header.meta, &frames, &cfg, dumps.as_ref())?;
    write_y4m(&header.with_meta(meta), &out, create(&args.output)?)?;
    Ok(())
}

fn report_path(base: &Path, mode: InterpolationMode) -> PathBuf {
    let stem = base.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match base.extension() {
        Some(ext) => format!("{stem}_{mode}.{}", ext.to_string_lossy()),
        None => format!("{stem}_{mode}"),
    };
    base.with_file_name(name)
}

fn evaluate(args: &EvaluateArgs) -> Result<()> {
    let modes: Vec<InterpolationMode> = match args.mode {
        EvalModeArg::Unilateral => vec![InterpolationMode::Unilateral],
        EvalModeArg::Bilateral => vec![InterpolationMode::Bilateral],
        EvalModeArg::Proposed => vec![InterpolationMode::Proposed],
        EvalModeArg::All => InterpolationMode::ALL.to_vec(),
    };
    let cfg = args.config.config(modes[0])?;
    if args.frames == Some(0) {
        return Err(Error::Usage("--frames must be positive".into()));
    }
    let dumps = args.dump.targets()?;
    let (_, mut frames) = load_input(&args.input)?;
    if let Some(n) = args.frames {
        frames.truncate(n);
    }
    let name = args.input.input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let reports = protocol::evaluate(&frames, &cfg, &modes, &name, dumps.as_ref())?;
    for r in &reports {
        println!("{}", summary_line(r));
        if let Some(base) = &args.report {
            let path = if reports.len() == 1 { base.clone() } else { report_path(base, r.mode) };
            write_csv(r, create(&path)?)?;
        }
    }
    Ok(())
}

fn synth(args: &SynthArgs) -> Result<()> {
    let request = parse_synth_spec(&args.spec.join(" "))?;
    let frames = synth_sequence(&request.spec)?;
    let mut meta = SequenceMeta::new(request.spec.width, request.spec.height, request.frame_rate, request.spec.color_mode)?;
    meta.frame_count = Some(frames.len());
    write_y4m(&Y4mHeader::from_meta(meta), &frames, create(&args.output)?)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Interpolate(a) => interpolate(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Synth(a) => synth(a),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code. Diagnostics go to stderr.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("fruc: error: {e}");
            e.exit_code()
        }
    }
}
