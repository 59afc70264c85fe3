//! Command-line interface: keygen, encrypt, decrypt, analyze, demo.
//!
//! Exit codes: 0 success, 1 usage or parameter errors, 2 file I/O or
//! format errors, 3 decryption failure.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use mcc::analysis::{
    column_stats, estimate_alpha, gilbert_delta, isd_complexity, qisd_complexity, SecurityReport,
};
use mcc::bits::BitVec;
use mcc::catalog;
use mcc::cipher::encrypt_detailed;
use mcc::convcode::{free_distance, ConvCode, HighMem};
use mcc::error::{Error, Result};
use mcc::format::{self, Key};
use mcc::keys::{keygen, PublicKey, SystemParams};
use mcc::poly::Gf2Poly;
use mcc::rng::{sub_rng, Stream};

#[derive(Parser)]
#[command(
    name = "mcc",
    version,
    about = "Masked convolutional-code public-key encryption"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a key pair
    Keygen(KeygenArgs),
    /// Encrypt one plaintext block with a public key
    Encrypt(EncryptArgs),
    /// Decrypt a ciphertext block with a private key
    Decrypt(DecryptArgs),
    /// Print security and reliability estimates for a key
    Analyze(AnalyzeArgs),
    /// Walk through one block's decryption step by step
    Demo,
}

#[derive(Args)]
struct KeygenArgs {
    /// Number of code streams
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Decodable code memory
    #[arg(long)]
    p: usize,
    /// Largest high-memory multiplier degree
    #[arg(long)]
    q: usize,
    /// Message block length (plaintext plus check bits)
    #[arg(long = "K")]
    k: usize,
    /// Number of masking patterns
    #[arg(long, default_value_t = 2)]
    l: usize,
    /// Channel error rate applied during encryption
    #[arg(long, default_value_t = 0.0)]
    e: f64,
    /// Generator polynomials in octal, comma-separated (default: built-in
    /// catalog entry for this n and p)
    #[arg(long)]
    generators: Option<String>,
    /// Multiplier exponent lists, one stream per semicolon-separated group
    /// (e.g. "3;0,7" for x^3 and 1+x^7; default: staggered monomials
    /// finished by 1+x^q)
    #[arg(long)]
    multipliers: Option<String>,
    /// Check-polynomial exponents, comma-separated ("0" disables; default:
    /// sized automatically from K)
    #[arg(long)]
    crc: Option<String>,
    /// RNG seed (default: fresh entropy; always echoed)
    #[arg(long)]
    seed: Option<u64>,
    /// Output path for the public key
    #[arg(long)]
    pub_out: PathBuf,
    /// Output path for the private key
    #[arg(long)]
    priv_out: PathBuf,
}

#[derive(Args)]
struct EncryptArgs {
    /// Public key file
    #[arg(long)]
    key: PathBuf,
    /// Plaintext file in the bits=<len>/hex text form
    #[arg(long = "in", required_unless_present = "message", conflicts_with = "message")]
    input: Option<PathBuf>,
    /// Plaintext given directly as a 0/1 string
    #[arg(long)]
    message: Option<String>,
    /// Ciphertext output file
    #[arg(long)]
    out: PathBuf,
    /// RNG seed for error injection (default: fresh entropy; always echoed)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct DecryptArgs {
    /// Private key file
    #[arg(long)]
    key: PathBuf,
    /// Ciphertext file
    #[arg(long = "in")]
    input: PathBuf,
    /// Optional plaintext output file (text form); stdout otherwise
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Key file, public or private (a private key also enables the
    /// division-amplification estimate and free-distance report)
    #[arg(long)]
    key: Option<PathBuf>,
    /// Ciphertext length for a standalone work-factor estimate (with --K
    /// and --t; no key file needed)
    #[arg(long = "N")]
    n_len: Option<usize>,
    /// Message length for a standalone work-factor estimate
    #[arg(long = "K")]
    k_len: Option<usize>,
    /// Error count for a standalone work-factor estimate
    #[arg(long = "t")]
    t: Option<usize>,
    /// Code rate for a standalone minimum-distance bound (no key file
    /// needed)
    #[arg(long)]
    rho: Option<f64>,
    /// Monte-Carlo trials for the amplification estimate
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Stream length for the amplification estimate (default: K + p + q)
    #[arg(long)]
    stream_len: Option<usize>,
    /// Random-message probes for the column statistics
    #[arg(long, default_value_t = 200)]
    tests: usize,
    /// RNG seed (default: fresh entropy; always echoed)
    #[arg(long)]
    seed: Option<u64>,
}

fn main() {
    std::process::exit(real_main());
}

fn real_main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) | Error::Format(_) => 2,
                Error::Decrypt(_) => 3,
                _ => 1,
            }
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Keygen(args) => cmd_keygen(args),
        Cmd::Encrypt(args) => cmd_encrypt(args),
        Cmd::Decrypt(args) => cmd_decrypt(args),
        Cmd::Analyze(args) => cmd_analyze(args),
        Cmd::Demo => cmd_demo(),
    }
}

// ------------------------------------------------------------- helpers

fn fresh_or(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(rand::random)
}

fn parse_bits(s: &str) -> Result<BitVec> {
    if s.is_empty() || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(Error::InvalidParams(format!(
            "plaintext must be a nonempty string over 0/1, got {s:?}"
        )));
    }
    Ok(BitVec::from_bit_str(s))
}

fn parse_exponent_list(s: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for tok in s.split(',') {
        let tok = tok.trim();
        let v: usize = tok
            .parse()
            .map_err(|_| Error::InvalidParams(format!("bad exponent {tok:?}")))?;
        out.push(v);
    }
    let mut sorted = out.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != out.len() {
        return Err(Error::InvalidParams(format!(
            "duplicate exponent in {s:?}"
        )));
    }
    Ok(out)
}

fn poly_from_exponent_list(s: &str) -> Result<Gf2Poly> {
    Ok(Gf2Poly::from_exponents(&parse_exponent_list(s)?))
}

/// Default check polynomial: 16 check bits when K leaves room for them,
/// 4 when it is small, none when K is tiny.
fn auto_crc(k: usize) -> Gf2Poly {
    if k > 16 {
        Gf2Poly::from_exponents(&[0, 5, 12, 16])
    } else if k > 4 {
        Gf2Poly::from_exponents(&[0, 1, 4])
    } else {
        Gf2Poly::one()
    }
}

// ------------------------------------------------------------ commands

fn cmd_keygen(args: KeygenArgs) -> Result<()> {
    let crc_poly = match &args.crc {
        Some(text) => poly_from_exponent_list(text)?,
        None => auto_crc(args.k),
    };
    let params = SystemParams::new(args.n, args.p, args.q, args.k, args.l, args.e, crc_poly)?;

    let code = match &args.generators {
        Some(text) => {
            let octals: Vec<&str> = text.split(',').map(str::trim).collect();
            let code = ConvCode::from_octal(&octals)?;
            if code.memory() != args.p {
                return Err(Error::InvalidParams(format!(
                    "generators have memory {}, but p = {} was requested",
                    code.memory(),
                    args.p
                )));
            }
            code
        }
        None => catalog::code_for(args.n, args.p)?,
    };

    let multipliers = match &args.multipliers {
        Some(text) => {
            let polys: Vec<Gf2Poly> = text
                .split(';')
                .map(poly_from_exponent_list)
                .collect::<Result<_>>()?;
            HighMem::new(polys)?
        }
        None => HighMem::new(catalog::default_multipliers(args.n, args.q)?)?,
    };

    let seed = fresh_or(args.seed);
    println!("seed = {seed}");
    let (pk, sk) = keygen(&params, &code, &multipliers, seed)?;
    for note in params.warnings() {
        println!("note: {note}");
    }
    println!(
        "parameters: N = {} (K = {}, plaintext bits = {}, check bits = {})",
        params.code_len(),
        params.k,
        params.message_len(),
        params.r()
    );
    format::save_public(&pk, &args.pub_out)?;
    format::save_private(&sk, &args.priv_out)?;
    println!("public key  -> {}", args.pub_out.display());
    println!("private key -> {}", args.priv_out.display());
    Ok(())
}

fn cmd_encrypt(args: EncryptArgs) -> Result<()> {
    let pk = format::load_public(&args.key)?;
    let m = match (&args.input, &args.message) {
        (Some(path), None) => format::load_plaintext(path)?,
        (None, Some(bits)) => parse_bits(bits)?,
        _ => unreachable!("clap enforces exactly one plaintext source"),
    };
    let seed = fresh_or(args.seed);
    println!("seed = {seed}");
    let mut rng = sub_rng(seed, Stream::Errors);
    let (ct, flips) = encrypt_detailed(&m, &pk, &mut rng)?;
    println!("injected errors = {flips}");
    format::save_ciphertext(&ct, &args.out)?;
    println!("ciphertext ({} bits) -> {}", ct.len(), args.out.display());
    Ok(())
}

fn cmd_decrypt(args: DecryptArgs) -> Result<()> {
    let sk = format::load_private(&args.key)?;
    let ct = format::load_ciphertext(&args.input)?;
    let pk = PublicKey::from_private(&sk)?;
    let m = mcc::cipher::decrypt(&ct, &sk, &pk).map_err(Error::from)?;
    println!("recovered {} plaintext bits", m.len());
    print!("{}", format::write_plaintext_text(&m));
    if let Some(path) = &args.out {
        format::save_plaintext(&m, path)?;
        println!("plaintext -> {}", path.display());
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> Result<()> {
    let standalone =
        args.n_len.is_some() || args.k_len.is_some() || args.t.is_some() || args.rho.is_some();
    match (&args.key, standalone) {
        (Some(_), true) => Err(Error::InvalidParams(
            "--key and standalone parameters (--N/--K/--t, --rho) are mutually exclusive".into(),
        )),
        (Some(path), false) => analyze_key(path.clone(), args),
        (None, true) => analyze_standalone(&args),
        (None, false) => Err(Error::InvalidParams(
            "analyze needs --key, or --N/--K/--t, or --rho".into(),
        )),
    }
}

fn analyze_standalone(args: &AnalyzeArgs) -> Result<()> {
    if let Some(rho) = args.rho {
        println!("gilbert_delta = {:.6}", gilbert_delta(rho)?);
    }
    match (args.n_len, args.k_len, args.t) {
        (Some(n), Some(k), Some(t)) => {
            let isd = isd_complexity(n, k, t)?;
            let qisd = qisd_complexity(n, k, t)?;
            println!("log2_isd_work = {:.4} (about {:.3e})", isd, isd.exp2());
            println!("log2_quantum_isd_work = {:.4} (about {:.3e})", qisd, qisd.exp2());
        }
        (None, None, None) => {}
        _ => {
            return Err(Error::InvalidParams(
                "--N, --K, and --t must be given together".into(),
            ))
        }
    }
    Ok(())
}

fn analyze_key(key_path: PathBuf, args: AnalyzeArgs) -> Result<()> {
    let bytes = std::fs::read(&key_path)?;
    let key = format::deserialize_key(&bytes)?;
    let seed = fresh_or(args.seed);
    println!("seed = {seed}");
    let mut rng = sub_rng(seed, Stream::Analysis);

    let (params, g, alpha, extras) = match &key {
        Key::Private(sk) => {
            let params = sk.params.clone();
            let mut extras = vec![format!(
                "free_distance = {}",
                free_distance(&sk.code)?
            )];
            let alpha = if params.e > 0.0 {
                let stream_len = args
                    .stream_len
                    .unwrap_or(params.k + params.p + params.q);
                let est =
                    estimate_alpha(&sk.multipliers, params.e, stream_len, args.trials, &mut rng)?;
                extras.push(format!(
                    "alpha_trials = {} (stream_len = {}, std_error = {:.4})",
                    est.trials, est.stream_len, est.std_error
                ));
                est.per_bit()
            } else {
                0.0
            };
            (params, mcc::keys::reconstruct_public_matrix(sk)?, alpha, extras)
        }
        Key::Public(pk) => {
            println!("note: public key only; division amplification taken as 0");
            (pk.params.clone(), pk.g.clone(), 0.0, Vec::new())
        }
    };

    for note in params.warnings() {
        println!("note: {note}");
    }
    let report = SecurityReport::compute(&params, alpha)?;
    for line in report.report_lines() {
        println!("{line}");
    }
    for line in extras {
        println!("{line}");
    }
    let stats = column_stats(&g, args.tests, &mut rng);
    println!("column_mean_weight = {:.4}", stats.mean_weight);
    println!("column_weight_variance = {:.4}", stats.weight_variance);
    println!("column_max_bias = {:.4}", stats.max_linear_bias);
    Ok(())
}

fn cmd_demo() -> Result<()> {
    let stdout = std::io::stdout();
    mcc::demo::run_demo(&mut stdout.lock())?;
    Ok(())
}
