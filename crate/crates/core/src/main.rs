use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use onepass::debruijn::{self, DeBruijnSpec};
use onepass::entropy::{entropy_profile, vacuous_order, AlphabetSpec};
use onepass::harness::{
    experiment_adversarial, experiment_tradeoff, lz77_window_encode, write_csv, MarkovSource,
};
use onepass::stream::{decode_to, encode_known_n_to, encode_unknown_n_to, TradeoffParams};
use onepass::Result;

#[derive(Parser)]
#[command(
    name = "onepass",
    version,
    about = "One-pass memory-bounded BWT compression"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress a file or standard input.
    Compress(CompressArgs),
    /// Decompress a stream produced by `compress`.
    Decompress {
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
    },
    /// Print H_k for k = 0..=kmax as CSV.
    Entropy {
        #[arg(long)]
        kmax: usize,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
        #[arg(long)]
        sigma: Option<usize>,
    },
    /// Emit, count, or repeat de Bruijn sequences (symbol i is byte i).
    Debruijn(DebruijnArgs),
    /// Run an experiment and write CSV.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
    /// Write the seeded Markov test corpus.
    Markov {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        sigma: usize,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short = 'o', long = "output", default_value = "-")]
        output: PathBuf,
    },
    /// Report the size of the sliding-window LZ77 baseline.
    Lz77 {
        #[arg(long)]
        window: usize,
        #[arg(short = 'i', long = "input")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct CompressArgs {
    #[arg(long = "c")]
    c: f64,
    #[arg(long)]
    eps: f64,
    /// Treat the input as a stream of unknown length.
    #[arg(long)]
    stream: bool,
    #[arg(long, default_value_t = 256)]
    sigma: usize,
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: PathBuf,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("action").required(true).args(["emit", "count", "corpus"])))]
struct DebruijnArgs {
    #[arg(long)]
    sigma: usize,
    #[arg(long)]
    order: usize,
    /// Write the canonical sequence.
    #[arg(long)]
    emit: bool,
    /// Print the number of sequences, by exhaustive search.
    #[arg(long)]
    count: bool,
    /// Write whole repetitions of a random sequence's first sigma^k symbols, up to this length.
    #[arg(long, value_name = "N")]
    corpus: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long = "output", default_value = "-")]
    output: PathBuf,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Encoded size versus n*H_k across memory exponents.
    Tradeoff {
        #[arg(long)]
        input: PathBuf,
        #[arg(long = "c-list", value_delimiter = ',', required = true)]
        c_list: Vec<f64>,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Memory-bounded versus whole-string encoding of a repeated de Bruijn corpus.
    Adversarial {
        #[arg(long)]
        sigma: usize,
        #[arg(long = "c")]
        c: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn is_stdio(p: &Path) -> bool {
    p.as_os_str() == "-"
}

fn open_input(p: &Path) -> Result<Box<dyn Read>> {
    if is_stdio(p) {
        Ok(Box::new(io::stdin().lock()))
    } else {
        Ok(Box::new(BufReader::new(File::open(p)?)))
    }
}

fn read_all(p: &Path) -> Result<Vec<u8>> {
    let mut data = Vec::new();
    open_input(p)?.read_to_end(&mut data)?;
    Ok(data)
}

fn open_output(p: &Path) -> Result<Box<dyn Write>> {
    if is_stdio(p) {
        Ok(Box::new(BufWriter::new(io::stdout().lock())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(p)?)))
    }
}

/// Runs `f` against the output, removing a partially written file on failure.
fn with_output<T>(p: &Path, f: impl FnOnce(&mut dyn Write) -> Result<T>) -> Result<T> {
    let mut out = open_output(p)?;
    let result = f(&mut out).and_then(|v| {
        out.flush()?;
        Ok(v)
    });
    if result.is_err() && !is_stdio(p) {
        drop(out);
        let _ = fs::remove_file(p);
    }
    result
}

fn compress(args: CompressArgs) -> Result<()> {
    let alphabet = AlphabetSpec::new(args.sigma)?;
    let known_len = if args.stream || is_stdio(&args.input) {
        None
    } else {
        let meta = fs::metadata(&args.input)?;
        meta.is_file().then_some(meta.len())
    };
    // Validate before touching the output.
    TradeoffParams::unknown(args.c, args.eps)?;
    let input = open_input(&args.input)?;
    let report = with_output(&args.output, |out| match known_len {
        Some(0) => {
            // An empty file has no known-length encoding; fall back to the
            // doubling encoder, which handles it.
            encode_unknown_n_to(
                input,
                &TradeoffParams::unknown(args.c, args.eps)?,
                alphabet,
                out,
            )
        }
        Some(n) => encode_known_n_to(
            input,
            &TradeoffParams::known(args.c, args.eps, n)?,
            alphabet,
            out,
        ),
        None => encode_unknown_n_to(
            input,
            &TradeoffParams::unknown(args.c, args.eps)?,
            alphabet,
            out,
        ),
    })?;
    eprintln!(
        "mode={} {report}",
        if matches!(known_len, Some(n) if n > 0) {
            "known_n"
        } else {
            "unknown_n"
        }
    );
    Ok(())
}

fn entropy(kmax: usize, input: &Path, sigma: Option<usize>) -> Result<()> {
    let data = read_all(input)?;
    let alphabet = match sigma {
        Some(s) => AlphabetSpec::new(s)?,
        None => AlphabetSpec::covering(&data),
    };
    let profile = entropy_profile(&data, kmax, alphabet)?;
    let vacuous = vacuous_order(data.len(), alphabet);
    if kmax >= vacuous {
        eprintln!(
            "warning: orders >= {vacuous} exceed log_sigma(n) + 1 for n = {}; their statistics are vacuous",
            data.len()
        );
    }
    let mut out = io::stdout().lock();
    writeln!(out, "k,h_k")?;
    for (k, h) in profile.values.iter().enumerate() {
        writeln!(out, "{k},{h}")?;
    }
    Ok(())
}

fn debruijn_cmd(args: DebruijnArgs) -> Result<()> {
    let spec = DeBruijnSpec::new(args.sigma, args.order)?;
    if args.count {
        let count = debruijn::enumerate_count(spec)?;
        println!("{count}");
        return Ok(());
    }
    let bytes = match args.corpus {
        Some(n) => debruijn::adversarial_corpus(spec, n, args.seed)?,
        None => debruijn::generate(spec),
    };
    with_output(&args.output, |out| Ok(out.write_all(&bytes)?))
}

fn experiment(cmd: ExperimentCommand) -> Result<()> {
    match cmd {
        ExperimentCommand::Tradeoff {
            input,
            c_list,
            eps,
            kmax,
            out,
        } => {
            let data = read_all(&input)?;
            let report = experiment_tradeoff(&data, &c_list, eps, kmax)?;
            eprintln!("beta={}", report.beta);
            with_output(&out, |w| write_csv(w, &report.metadata(), &report.rows))
        }
        ExperimentCommand::Adversarial {
            sigma,
            c,
            eps,
            n,
            seed,
            out,
        } => {
            let report = experiment_adversarial(sigma, c, eps, n, seed)?;
            for line in report.metadata() {
                eprintln!("{line}");
            }
            with_output(&out, |w| write_csv(w, &report.metadata(), &report.rows()))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Compress(args) => compress(args),
        Command::Decompress { input, output } => {
            let reader = open_input(&input)?;
            let header = with_output(&output, |out| decode_to(reader, out))?;
            eprintln!(
                "sigma={} c={} eps={} n={}",
                header.sigma,
                header.c,
                header.eps,
                header.n.map_or("unknown".to_string(), |n| n.to_string())
            );
            Ok(())
        }
        Command::Entropy { kmax, input, sigma } => entropy(kmax, &input, sigma),
        Command::Debruijn(args) => debruijn_cmd(args),
        Command::Experiment(cmd) => experiment(cmd),
        Command::Markov {
            n,
            sigma,
            order,
            seed,
            output,
        } => {
            let data = MarkovSource::new(sigma, order, seed)?.generate(n, seed);
            with_output(&output, |out| Ok(out.write_all(&data)?))
        }
        Command::Lz77 { window, input } => {
            let data = read_all(&input)?;
            let enc = lz77_window_encode(&data, window)?;
            println!("input_bits,encoded_bits,triples,window");
            println!(
                "{},{},{},{}",
                8 * data.len(),
                enc.bits(),
                enc.triples.len(),
                window
            );
            Ok(())
        }
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
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
