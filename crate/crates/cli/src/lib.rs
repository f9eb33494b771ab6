//! Command-line front end: mask construction, verification, support tables,
//! grid subdivision, and basic-limit sampling.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O or
//! format error.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use pseudospline::analysis::{predicted_support, support_of};
use pseudospline::format::{
    parse_grid_csv, parse_mu_list, write_grid_csv, write_pgm, MaskDocument, MAX_POINTS,
};
use pseudospline::laurent::Rational;
use pseudospline::mask::MaskMatrix;
use pseudospline::subdivision::{
    basic_limit, refined_window, subdivide, GridFunction, Window, DEFAULT_LIMIT_STEPS,
};
use pseudospline::symbols::{
    example_amu, fourdir_box, interpolatory, pseudospline as make_pseudospline, pseudospline_family,
    tensor_pseudospline, variant, SchemeSymbol,
};
use pseudospline::Error;

pub mod verify;

pub use verify::{verify, Check, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Longest refinement run accepted on the command line.
pub const MAX_STEPS: u32 = 12;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Format(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "I/O error: {m}"),
            CliError::Format(m) => write!(f, "format error: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameters(_) | Error::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Format(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Pseudo,
    Box,
    Interp,
    Tensor,
    Variant,
    Amu,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MaskFormat {
    Json,
    Matrix,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GridFormat {
    Csv,
    Pgm,
}

#[derive(Debug, Parser)]
#[command(name = "pseudospline", version, about = "Exact four-directional pseudo-spline subdivision")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Scheme selection shared by several subcommands.
#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// Scheme family (may also be given with --family)
    #[arg(value_enum, value_name = "FAMILY")]
    pub family_pos: Option<FamilyArg>,
    #[arg(long, value_enum, conflicts_with = "family_pos")]
    pub family: Option<FamilyArg>,
    #[arg(short = 'n')]
    pub n: Option<u32>,
    #[arg(short = 'l')]
    pub l: Option<u32>,
    /// Comma-separated weights as fractions, e.g. 1/2,-3,1/2
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<String>,
}

impl SchemeArgs {
    fn family(&self) -> Option<FamilyArg> {
        self.family.or(self.family_pos)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print a mask as JSON, a fraction matrix, or CSV
    Mask {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: MaskFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check symmetry, degrees, interpolation, and support against expectations
    Verify {
        #[command(flatten)]
        scheme: SchemeArgs,
        /// Verify a mask document instead of a catalog scheme
        #[arg(long, conflicts_with_all = ["family_pos", "family", "n", "l", "mu"])]
        mask: Option<PathBuf>,
    },
    /// Predicted and measured support octagon
    Support {
        #[command(flatten)]
        scheme: SchemeArgs,
    },
    /// Support table of the pseudo-spline family for 1 <= n <= N
    Sweep {
        #[arg(short = 'n', default_value_t = 5)]
        n: u32,
    },
    /// Refine a grid function with a mask
    Subdivide {
        #[arg(long)]
        mask: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample the basic limit function
    Limit {
        #[command(flatten)]
        scheme: SchemeArgs,
        #[arg(long, default_value_t = DEFAULT_LIMIT_STEPS)]
        steps: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: GridFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn need(v: Option<u32>, flag: &str, family: &str) -> CliResult<u32> {
    v.ok_or_else(|| CliError::Usage(format!("{family} needs {flag}")))
}

fn reject(present: bool, flag: &str, family: &str) -> CliResult<()> {
    if present {
        Err(CliError::Usage(format!("{family} does not take {flag}")))
    } else {
        Ok(())
    }
}

fn parse_mu(s: &Option<String>) -> CliResult<Vec<Rational>> {
    match s {
        None => Ok(Vec::new()),
        Some(s) => parse_mu_list(s).map_err(|e| CliError::Usage(format!("--mu: {e}"))),
    }
}

/// Builds the symbol selected on the command line.
pub fn build_symbol(args: &SchemeArgs) -> CliResult<SchemeSymbol> {
    let family = args
        .family()
        .ok_or_else(|| CliError::Usage("a family is required (pseudo, box, interp, tensor, variant, amu)".into()))?;
    let name = family.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let name = name.as_str();
    let mu = parse_mu(&args.mu)?;
    let symbol = match family {
        FamilyArg::Pseudo | FamilyArg::Tensor => {
            reject(args.mu.is_some(), "--mu", name)?;
            let (n, l) = (need(args.n, "-n", name)?, need(args.l, "-l", name)?);
            if family == FamilyArg::Pseudo {
                make_pseudospline(n, l)?
            } else {
                tensor_pseudospline(n, l)?
            }
        }
        FamilyArg::Box | FamilyArg::Interp => {
            reject(args.mu.is_some(), "--mu", name)?;
            reject(args.l.is_some(), "-l", name)?;
            let n = need(args.n, "-n", name)?;
            if family == FamilyArg::Box {
                fourdir_box(n)?
            } else {
                interpolatory(n)?
            }
        }
        FamilyArg::Variant => variant(need(args.n, "-n", name)?, need(args.l, "-l", name)?, &mu)?,
        FamilyArg::Amu => {
            reject(args.n.is_some(), "-n", name)?;
            reject(args.l.is_some(), "-l", name)?;
            match mu.as_slice() {
                [m] => example_amu(m),
                _ => return Err(CliError::Usage("amu needs exactly one --mu value".into())),
            }
        }
    };
    Ok(symbol)
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, path: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match path {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Mask coefficients as a level-0 grid over the mask's bounding box.
pub fn mask_grid(mask: &MaskMatrix) -> GridFunction {
    let (lo, hi) = mask.exponent_bounds();
    let window = Window::new(lo.e1, lo.e2, hi.e1, hi.e2);
    let den = mask.denominator().clone();
    GridFunction::from_fn(0, window, |(a1, a2)| {
        Rational::new(mask.entry((a1, a2).into()), den.clone())
    })
}

pub fn render_mask(symbol: &SchemeSymbol, format: MaskFormat) -> CliResult<String> {
    Ok(match format {
        MaskFormat::Json => MaskDocument::from_symbol(symbol)?.to_json(),
        MaskFormat::Matrix => MaskMatrix::from_symbol(&symbol.poly)?.to_string(),
        MaskFormat::Csv => write_grid_csv(&mask_grid(&MaskMatrix::from_symbol(&symbol.poly)?)),
    })
}

pub fn load_mask_document(path: &Path) -> CliResult<SchemeSymbol> {
    let doc = MaskDocument::parse(&read_text(path)?)?;
    Ok(doc.to_symbol()?)
}

/// Support text for one scheme: the measured octagon, plus the prediction for
/// the pseudo-spline family.
pub fn render_support(symbol: &SchemeSymbol) -> CliResult<String> {
    let measured = support_of(&symbol.poly)?;
    let expected = verify::expected_support(symbol);
    let mut s = String::new();
    if let Some(e) = expected {
        s.push_str(&format!("predicted: {e} ({}, {}, {})\n", e.m, e.n, e.l));
    }
    let o = measured.octagon;
    s.push_str(&format!("measured:  {o} ({}, {}, {})\n", o.m, o.n, o.l));
    if !measured.octagonal {
        s.push_str(&format!(
            "not an octagon: exponents span {:?}..{:?}, max |a1|+|a2| = {}\n",
            (measured.min.e1, measured.min.e2),
            (measured.max.e1, measured.max.e2),
            measured.max_l1
        ));
    }
    s.push_str(&format!("hull area: {}\n", measured.area));
    if let Some(e) = expected {
        let ok = measured.octagonal && e == o;
        s.push_str(if ok { "match\n" } else { "MISMATCH\n" });
    }
    Ok(s)
}

/// Reference support table `(n, l) -> (width, corner cut)` for n <= 5.
pub const SUPPORT_TABLE: [[Option<(i64, i64)>; 5]; 5] = [
    [Some((3, 0)), None, None, None, None],
    [Some((5, 1)), Some((7, 2)), None, None, None],
    [Some((7, 1)), Some((9, 3)), Some((11, 4)), None, None],
    [Some((9, 2)), Some((11, 3)), Some((13, 5)), Some((15, 6)), None],
    [Some((11, 2)), Some((13, 4)), Some((15, 5)), Some((17, 7)), Some((19, 8))],
];

/// Support table for `1 <= n <= max_n`. Each cell is `width/cut` of the measured
/// support followed by `ok` when it matches both the formula and, for n <= 5,
/// the reference table. Returns the text and whether every cell matched.
pub fn render_sweep(max_n: u32) -> CliResult<(String, bool)> {
    if max_n == 0 {
        return Err(CliError::Usage("sweep needs n >= 1".into()));
    }
    const CELL: usize = 10;
    let mut s = format!("{:>5} |", "n\\l");
    for l in 0..max_n {
        s.push_str(&format!("{l:>CELL$}"));
    }
    s.push('\n');
    s.push_str(&format!("{}\n", "-".repeat(7 + CELL * max_n as usize)));
    let (mut cells, mut matching) = (0, 0);
    for n in 1..=max_n {
        s.push_str(&format!("{n:>5} |"));
        for (l, sym) in pseudospline_family(n)?.iter().enumerate() {
            let measured = support_of(&sym.poly)?;
            let predicted = predicted_support(n, l as u32)?;
            let o = measured.octagon;
            let reference = SUPPORT_TABLE
                .get(n as usize - 1)
                .and_then(|row| row[l]);
            let ok = measured.octagonal
                && o == predicted
                && reference.is_none_or(|r| r == (o.width(), o.corner_cut()));
            cells += 1;
            matching += ok as u32;
            let cell = format!("{}/{} {}", o.width(), o.corner_cut(), if ok { "ok" } else { "!!" });
            s.push_str(&format!("{cell:>CELL$}"));
        }
        s.push('\n');
    }
    s.push_str(&format!("{matching}/{cells} cells match (width/corner cut)\n"));
    Ok((s, matching == cells))
}

fn check_steps(steps: u32) -> CliResult<()> {
    if steps > MAX_STEPS {
        return Err(CliError::Usage(format!("--steps must be at most {MAX_STEPS}")));
    }
    Ok(())
}

fn check_growth(mask: &MaskMatrix, mut window: Window, steps: u32) -> CliResult<()> {
    for _ in 0..steps {
        window = refined_window(mask, window);
        if !window.is_empty() && window.area() > MAX_POINTS {
            return Err(CliError::Usage(format!(
                "refined window would exceed {MAX_POINTS} points; use fewer steps"
            )));
        }
    }
    Ok(())
}

/// Writes a grid in the requested format. PGM output needs a file path and
/// also writes the `<file>.norm.txt` sidecar.
pub fn emit_grid(g: &GridFunction, format: GridFormat, out: &mut dyn Write, path: &Option<PathBuf>) -> CliResult<()> {
    match format {
        GridFormat::Csv => emit(out, path, write_grid_csv(g).as_bytes()),
        GridFormat::Pgm => {
            let path = path
                .as_ref()
                .ok_or_else(|| CliError::Usage("--format pgm needs --out".into()))?;
            let (bytes, sidecar) = write_pgm(g);
            write_file(path, &bytes)?;
            let mut side = path.clone().into_os_string();
            side.push(".norm.txt");
            write_file(Path::new(&side), sidecar.as_bytes())
        }
    }
}

pub fn subdivide_file(mask_path: &Path, input_path: &Path, steps: u32) -> CliResult<GridFunction> {
    check_steps(steps)?;
    let symbol = load_mask_document(mask_path)?;
    let mask = MaskMatrix::from_symbol(&symbol.poly)?;
    let input = parse_grid_csv(&read_text(input_path)?)?;
    check_growth(&mask, input.window(), steps)?;
    Ok(subdivide(&mask, &input, steps)?)
}

pub fn limit_grid(symbol: &SchemeSymbol, steps: u32) -> CliResult<GridFunction> {
    check_steps(steps)?;
    if steps == 0 {
        return Err(CliError::Usage("--steps must be at least 1".into()));
    }
    let mask = MaskMatrix::from_symbol(&symbol.poly)?;
    check_growth(&mask, Window::centered(2 * symbol.poly.radius() + 1), steps)?;
    Ok(basic_limit(&symbol.poly, steps)?)
}

/// Executes one parsed command, writing text output to `out`. Returns the exit code.
pub fn execute(command: &Command, out: &mut dyn Write) -> CliResult<i32> {
    match command {
        Command::Mask { scheme, format, out: path } => {
            let symbol = build_symbol(scheme)?;
            emit(out, path, render_mask(&symbol, *format)?.as_bytes())?;
            Ok(EXIT_OK)
        }
        Command::Verify { scheme, mask } => {
            let symbol = match mask {
                Some(p) => load_mask_document(p)?,
                None => build_symbol(scheme)?,
            };
            let report = verify(&symbol)?;
            emit(out, &None, report.to_string().as_bytes())?;
            Ok(if report.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Support { scheme } => {
            let symbol = build_symbol(scheme)?;
            let text = render_support(&symbol)?;
            let ok = !text.ends_with("MISMATCH\n");
            emit(out, &None, text.as_bytes())?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Sweep { n } => {
            let (text, ok) = render_sweep(*n)?;
            emit(out, &None, text.as_bytes())?;
            Ok(if ok { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Subdivide { mask, input, steps, format, out: path } => {
            let g = subdivide_file(mask, input, *steps)?;
            emit_grid(&g, *format, out, path)?;
            Ok(EXIT_OK)
        }
        Command::Limit { scheme, steps, format, out: path } => {
            let symbol = build_symbol(scheme)?;
            let g = limit_grid(&symbol, *steps)?;
            emit_grid(&g, *format, out, path)?;
            Ok(EXIT_OK)
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            e.exit_code()
        }
    }
}
