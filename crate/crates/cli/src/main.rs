//! `gabring`: parameter generation, encoding, decoding, channel simulation
//! and benchmarking for Gabidulin codes over Galois rings.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors, 2 when decoding fails.

mod harness;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gabring::format::{pack_bytes, unpack_bytes, vector_from_json, vector_to_json, CodeConfig};
use gabring::key_equation::skew_byrne_fitzpatrick_traced;
use gabring::{decode, wb_decode, DecodeResult, GabidulinCode, RankProfile, RingElement};

#[derive(Parser, Debug)]
#[command(name = "gabring", version, about = "Gabidulin codes over Galois rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a code configuration with automatic moduli and a power-basis support.
    Params(ParamsArgs),
    /// Encode a message into a codeword.
    Encode(CodecArgs),
    /// Decode a received word; exits with status 2 if decoding fails.
    Decode(DecodeArgs),
    /// Monte-Carlo simulation of decoding under injected errors of a fixed rank profile.
    Simulate(SimulateArgs),
    /// Measure decoding cost for a range of lengths `n = m`.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct ParamsArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    r: u32,
    #[arg(long, default_value_t = 1)]
    s: usize,
    #[arg(long)]
    m: usize,
    /// Code length; defaults to `m`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: usize,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CodecArgs {
    #[arg(long)]
    config: PathBuf,
    /// Input file; standard input if omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output file; standard output if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Treat the message as raw bytes packed into base residues.
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[command(flatten)]
    io: CodecArgs,
    #[arg(long, value_enum, default_value_t = Decoder::Fast)]
    decoder: Decoder,
    /// Print the key-equation solver's minimal exponents after each step to stderr.
    #[arg(long)]
    trace: bool,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Error rank; each trial draws one of the rank profiles of this rank.
    #[arg(long, conflicts_with = "profile", required_unless_present = "profile")]
    rank: Option<usize>,
    /// Error rank profile, e.g. "1+x" for one free and one torsion generator.
    #[arg(long)]
    profile: Option<RankProfile>,
    #[arg(long, value_enum, default_value_t = Decoder::Fast)]
    decoder: Decoder,
    /// Leave the wall_time column empty so output depends only on the seed.
    #[arg(long)]
    no_timing: bool,
    /// CSV output file; standard output if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchArgs {
    /// Template configuration supplying `p`, `r`, `s` and the rate `k/n`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "16,32,64,128")]
    n_grid: Vec<usize>,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Decoder::Fast)]
    decoder: Decoder,
    /// Leave the median_ns column empty.
    #[arg(long)]
    no_timing: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Decoder {
    /// Key-equation decoder.
    Fast,
    /// Welch–Berlekamp style reference decoder.
    Wb,
    Both,
}

impl Decoder {
    fn variants(self) -> &'static [Decoder] {
        match self {
            Decoder::Fast => &[Decoder::Fast],
            Decoder::Wb => &[Decoder::Wb],
            Decoder::Both => &[Decoder::Fast, Decoder::Wb],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Decoder::Fast => "fast",
            Decoder::Wb => "wb",
            Decoder::Both => "both",
        }
    }

    fn run(self, code: &GabidulinCode, r: &[RingElement]) -> gabring::Result<DecodeResult> {
        match self {
            Decoder::Wb => wb_decode(code, r),
            _ => decode(code, r),
        }
    }
}

enum Status {
    Done,
    DecodingFailure,
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>> {
    match path {
        Some(p) => fs::read(p).with_context(|| format!("reading {}", p.display())),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf).context("reading standard input")?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, data: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, data).with_context(|| format!("writing {}", p.display())),
        None => io::stdout().write_all(data).context("writing standard output"),
    }
}

fn load_code(path: &Path) -> Result<GabidulinCode> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = CodeConfig::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    config.build().with_context(|| format!("building the code of {}", path.display()))
}

fn parse_elements(code: &GabidulinCode, bytes: &[u8], what: &str) -> Result<Vec<RingElement>> {
    let value: serde_json::Value = serde_json::from_slice(bytes).with_context(|| format!("parsing the {what}"))?;
    vector_from_json(code.tower().ext(), &value).with_context(|| format!("reading the {what}"))
}

fn json_line(code: &GabidulinCode, xs: &[RingElement]) -> Vec<u8> {
    let mut out = vector_to_json(code.tower().ext(), xs).to_string().into_bytes();
    out.push(b'\n');
    out
}

fn cmd_params(args: &ParamsArgs) -> Result<Status> {
    let n = args.n.unwrap_or(args.m);
    let config = CodeConfig::power_basis(args.p, args.r, args.s, args.m, n, args.k)?;
    let mut text = config.to_json_pretty();
    text.push('\n');
    write_output(args.output.as_deref(), text.as_bytes())?;
    Ok(Status::Done)
}

fn cmd_encode(args: &CodecArgs) -> Result<Status> {
    let code = load_code(&args.config)?;
    let input = read_input(args.input.as_deref())?;
    let message = if args.raw {
        pack_bytes(code.tower().ext(), &input, code.k())?
    } else {
        parse_elements(&code, &input, "message")?
    };
    let word = code.encode_message(&message)?;
    write_output(args.output.as_deref(), &json_line(&code, &word))?;
    Ok(Status::Done)
}

fn cmd_decode(args: &DecodeArgs) -> Result<Status> {
    if args.decoder == Decoder::Both {
        bail!("decode takes a single decoder: fast or wb");
    }
    let code = load_code(&args.io.config)?;
    let input = read_input(args.io.input.as_deref())?;
    let word = parse_elements(&code, &input, "received word")?;
    if args.trace {
        let syndrome = code.syndrome_poly(&word)?;
        skew_byrne_fitzpatrick_traced(code.ring(), &syndrome, code.n() - code.k(), |step| {
            eprintln!("{step}");
        });
    }
    let result = args.decoder.run(&code, &word)?;
    let diag = &result.diagnostics;
    if let Some(lambda) = &diag.lambda {
        eprintln!("error span polynomial degree: {}", lambda.degree().unwrap_or(0));
    }
    if let Some(t) = diag.error_rank {
        eprintln!("error rank: {t}");
    }
    let Some(f) = result.message() else {
        eprintln!("decoding failure: no codeword within rank distance {}", code.radius());
        return Ok(Status::DecodingFailure);
    };
    let s = code.tower().ext();
    let mut coeffs = f.coeffs().to_vec();
    coeffs.resize(code.k(), s.zero());
    let out = if args.io.raw {
        unpack_bytes(s, &coeffs)?
    } else {
        json_line(&code, &coeffs)
    };
    write_output(args.io.output.as_deref(), &out)?;
    Ok(Status::Done)
}

fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Params(args) => cmd_params(&args),
        Command::Encode(args) => cmd_encode(&args),
        Command::Decode(args) => cmd_decode(&args),
        Command::Simulate(args) => harness::cmd_simulate(&args),
        Command::Bench(args) => harness::cmd_bench(&args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::DecodingFailure) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
