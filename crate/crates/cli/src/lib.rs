//! Command-line front end. [`run`] does all the work so tests can drive it
//! without spawning a process.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use juna::attacks::{
    birthday_search, brute_force_collision, mitm_subset_sum, BirthdayConfig, BirthdayStats,
    SubsetSumInstance,
};
use juna::chp::{chp_hash, chp_setup, compare_costs, ChpParams};
use juna::compress::{digest_in, pad_to_n};
use juna::params::{certify_collision, initialize, validate, InitConfig, ValidateOptions};
use juna::reform::ReformProfile;
use juna::{BitString, Error, Mode, PrivateParams, PublicParams};

pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "juna",
    version,
    about = "Knapsack-style hash: keys, digests, checks and attacks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate public and private parameters.
    Keygen(KeygenArgs),
    /// Hash one message.
    Hash(HashArgs),
    /// Check parameter files.
    Validate(ValidateArgs),
    /// Discrete-log hash baseline.
    #[command(subcommand)]
    Chp(ChpCommand),
    /// Compress the output of a classical hash.
    Reform(ReformArgs),
    /// Run an attack experiment.
    #[command(subcommand)]
    Attack(AttackCommand),
    /// Count multiplications and time digests on random messages.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
struct KeygenArgs {
    #[arg(long)]
    m: u32,
    #[arg(long)]
    n: usize,
    /// The coprime bound is P = 2^k.
    #[arg(long = "p-bits")]
    p_bits: u32,
    #[arg(long)]
    nbar: u64,
    #[arg(long = "out-pub")]
    out_pub: PathBuf,
    #[arg(long = "out-priv")]
    out_priv: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Allow toy sizes below the production floor.
    #[arg(long = "test-mode")]
    test_mode: bool,
    /// Safe-prime candidates to try.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("message").required(true).args(["msg_bits", "msg_file", "msg_hex"])))]
struct HashArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    /// Message as a string of 0 and 1.
    #[arg(long = "msg-bits")]
    msg_bits: Option<String>,
    /// Raw bytes, read big-endian.
    #[arg(long = "msg-file")]
    msg_file: Option<PathBuf>,
    /// Left-aligned hex; needs --bits.
    #[arg(long = "msg-hex", requires = "bits")]
    msg_hex: Option<String>,
    /// Message length in bits.
    #[arg(long)]
    bits: Option<usize>,
    /// Append a 1 and zeros up to n bits. Not part of the hash definition.
    #[arg(long)]
    pad: bool,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long = "priv")]
    private: Option<PathBuf>,
    #[arg(long = "test-mode")]
    test_mode: bool,
    /// n̄ for the public-only factor check; defaults to n.
    #[arg(long)]
    nbar: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum ChpCommand {
    Setup {
        #[arg(long)]
        bits: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
    },
    Hash {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        w1: BigUint,
        #[arg(long)]
        w2: BigUint,
    },
    Compare {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: u64,
        #[arg(long)]
        lgp: u64,
    },
}

#[derive(Debug, Args)]
struct ReformArgs {
    #[arg(long)]
    profile: PathBuf,
    #[arg(long = "digest-hex")]
    digest_hex: String,
}

#[derive(Debug, Subcommand)]
enum AttackCommand {
    /// Meet-in-the-middle on a plain subset-sum instance.
    Mitm {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Birthday search on a truncated digest.
    Birthday {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "mask-bits")]
        mask_bits: u32,
        #[arg(long)]
        budget: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Append a CSV row of the statistics to this file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Enumerate every collision of a toy parameter set.
    Brute {
        #[arg(long = "pub")]
        public: PathBuf,
        #[arg(long = "priv")]
        private: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[arg(long = "pub")]
    public: PathBuf,
    #[arg(long)]
    iters: u64,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Io(PathBuf, std::io::Error),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Lib(Error::SearchExhausted { .. }) => EXIT_EXHAUSTED,
            _ => EXIT_INVALID,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Lib(e) => write!(f, "{e}"),
            Failure::Io(path, e) => write!(f, "{}: {e}", path.display()),
            Failure::Invalid(msg) => f.write_str(msg),
        }
    }
}

type Out<'a> = &'a mut dyn Write;
type CmdResult = Result<(), Failure>;

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, stdout: Out<'_>, stderr: Out<'_>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {f}");
            f.code()
        }
    }
}

fn dispatch(command: Command, out: Out<'_>) -> CmdResult {
    match command {
        Command::Keygen(a) => keygen(a, out),
        Command::Hash(a) => hash(a, out),
        Command::Validate(a) => validate_cmd(a, out),
        Command::Chp(c) => chp(c, out),
        Command::Reform(a) => reform(a, out),
        Command::Attack(c) => attack(c, out),
        Command::Bench(a) => bench(a, out),
    }
}

fn put(out: Out<'_>, text: impl std::fmt::Display) -> CmdResult {
    writeln!(out, "{text}").map_err(|e| Failure::Io(PathBuf::from("<stdout>"), e))
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn write_text(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Io(path.to_owned(), e))
}

fn load_public(path: &Path) -> Result<PublicParams, Failure> {
    PublicParams::parse(&read_text(path)?)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_private(path: &Path) -> Result<PrivateParams, Failure> {
    PrivateParams::parse(&read_text(path)?)
        .map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

/// Prints the effective seed and returns an RNG seeded from it.
fn seeded(seed: Option<u64>, out: Out<'_>) -> Result<(u64, ChaCha20Rng), Failure> {
    let seed = seed.unwrap_or_else(rand::random);
    put(out, format_args!("seed={seed}"))?;
    Ok((seed, ChaCha20Rng::seed_from_u64(seed)))
}

fn mode(test_mode: bool) -> Mode {
    if test_mode {
        Mode::Test
    } else {
        Mode::Production
    }
}

fn keygen(a: KeygenArgs, out: Out<'_>) -> CmdResult {
    let (_, mut rng) = seeded(a.seed, out)?;
    if a.p_bits == 0 || a.p_bits > 32 {
        return Err(Failure::Invalid(format!(
            "--p-bits {} must lie in [1, 32]",
            a.p_bits
        )));
    }
    let mut cfg = InitConfig::new(a.m, a.n, 1 << a.p_bits, a.nbar).mode(mode(a.test_mode));
    if let Some(b) = a.budget {
        cfg = cfg.budget(b);
    }
    let (public, private) = initialize(&cfg, &mut rng)?;
    write_text(&a.out_pub, &public.to_text())?;
    write_text(&a.out_priv, &private.to_text())?;
    put(
        out,
        format_args!("m={}\nn={}\nM={}", public.m(), public.n(), public.modulus()),
    )?;
    put(
        out,
        format_args!("pub={}\npriv={}", a.out_pub.display(), a.out_priv.display()),
    )
}

fn read_message(a: &HashArgs, n: usize) -> Result<BitString, Failure> {
    let msg = if let Some(bits) = &a.msg_bits {
        BitString::from_bit_str(bits)?
    } else if let Some(hex) = &a.msg_hex {
        BitString::from_hex(hex, a.bits.expect("clap requires --bits"))?
    } else {
        let path = a
            .msg_file
            .as_ref()
            .expect("clap requires one message source");
        let bytes = fs::read(path).map_err(|e| Failure::Io(path.clone(), e))?;
        let nbits = a.bits.unwrap_or(if a.pad { bytes.len() * 8 } else { n });
        BitString::from_bytes(&bytes, nbits)?
    };
    if a.pad {
        Ok(pad_to_n(&msg, n)?)
    } else {
        Ok(msg)
    }
}

fn hash(a: HashArgs, out: Out<'_>) -> CmdResult {
    let public = load_public(&a.public)?;
    let msg = read_message(&a, public.n())?;
    let d = digest_in(&public.context(), &public, &msg)?;
    put(out, format_args!("digest={d}"))?;
    if a.pad {
        put(out, "padded=true")?;
    }
    Ok(())
}

fn validate_cmd(a: ValidateArgs, out: Out<'_>) -> CmdResult {
    let public = load_public(&a.public)?;
    let private = a.private.as_deref().map(load_private).transpose()?;
    let opts = ValidateOptions {
        mode: mode(a.test_mode),
        nbar: a.nbar,
        ..Default::default()
    };
    let report = validate(&public, private.as_ref(), &opts);
    write!(out, "{report}").map_err(|e| Failure::Io("<stdout>".into(), e))?;
    if report.passed() {
        put(out, "status=pass")
    } else {
        put(out, "status=fail")?;
        let names: Vec<_> = report.failures().map(|c| c.name.to_string()).collect();
        Err(Failure::Invalid(format!(
            "validation failed: {}",
            names.join(", ")
        )))
    }
}

fn chp(c: ChpCommand, out: Out<'_>) -> CmdResult {
    match c {
        ChpCommand::Setup {
            bits,
            seed,
            out: path,
            budget,
        } => {
            let (_, mut rng) = seeded(seed, out)?;
            let params = chp_setup(bits, budget, &mut rng)?;
            match path {
                Some(p) => {
                    write_text(&p, &params.to_text())?;
                    put(out, format_args!("p={}\nparams={}", params.p, p.display()))
                }
                None => write!(out, "{}", params.to_text())
                    .map_err(|e| Failure::Io("<stdout>".into(), e)),
            }
        }
        ChpCommand::Hash { params, w1, w2 } => {
            let p = ChpParams::parse(&read_text(&params)?)?;
            p.check()?;
            put(out, format_args!("hash={}", chp_hash(&p, &w1, &w2)?))
        }
        ChpCommand::Compare { m, n, lgp } => {
            if m == 0 || n == 0 || lgp < 2 {
                return Err(Failure::Invalid("need m, n >= 1 and lgp >= 2".into()));
            }
            let t = compare_costs(m, n, lgp);
            put(
                out,
                format_args!(
                    "chp_bit_ops={}\njuna_bit_ops={}",
                    t.chp_bit_ops, t.juna_bit_ops
                ),
            )?;
            put(
                out,
                format_args!("chp_rate={:.4}\njuna_rate={:.4}", t.chp_rate, t.juna_rate),
            )?;
            put(
                out,
                format_args!("chp_birthday_inputs=2^{}", t.chp_birthday_log2),
            )?;
            put(
                out,
                format_args!("juna_birthday_inputs=2^{}", t.juna_birthday_log2),
            )
        }
    }
}

fn reform(a: ReformArgs, out: Out<'_>) -> CmdResult {
    let profile = ReformProfile::parse(&read_text(&a.profile)?)?;
    let d = profile.digest_hex(&a.digest_hex)?;
    put(out, format_args!("digest={d}"))
}

fn attack(c: AttackCommand, out: Out<'_>) -> CmdResult {
    match c {
        AttackCommand::Mitm { instance } => {
            let inst = SubsetSumInstance::parse(&read_text(&instance)?)?;
            put(out, format_args!("n={}\nt={}", inst.n(), inst.n() / 2))?;
            match mitm_subset_sum(&inst)? {
                Some(bits) => {
                    let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                    put(out, format_args!("found=true\nbits={s}"))
                }
                None => put(out, "found=false"),
            }
        }
        AttackCommand::Birthday {
            public,
            mask_bits,
            budget,
            seed,
            workers,
            csv,
        } => {
            let params = load_public(&public)?;
            let seed = seed.unwrap_or_else(rand::random);
            let cfg = BirthdayConfig::new(mask_bits, budget, seed).workers(workers);
            let stats = birthday_search(&params, &cfg)?;
            put(out, &stats)?;
            if let Some(path) = csv {
                append_csv(&path, &stats)?;
            }
            Ok(())
        }
        AttackCommand::Brute { public, private } => {
            let params = load_public(&public)?;
            let private = private.as_deref().map(load_private).transpose()?;
            let pairs = brute_force_collision(&params)?;
            put(out, format_args!("pairs={}", pairs.len()))?;
            let mut all_hold = true;
            for p in &pairs {
                let mut line = format!(
                    "pair={},{} digest={} identity={}",
                    p.first.to_hex(),
                    p.second.to_hex(),
                    p.digest,
                    p.identity_holds
                );
                all_hold &= p.identity_holds;
                if let Some(private) = &private {
                    let cert = certify_collision(private, &params, &p.first, &p.second)?;
                    all_hold &= cert.holds;
                    line.push_str(&format!(" certificate={}", cert.holds));
                }
                put(out, line)?;
            }
            put(out, format_args!("all_hold={all_hold}"))
        }
    }
}

fn append_csv(path: &Path, stats: &BirthdayStats) -> CmdResult {
    let fresh = !path.exists();
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Failure::Io(path.to_owned(), e))?;
    let mut text = String::new();
    if fresh {
        text.push_str(BirthdayStats::CSV_HEADER);
        text.push('\n');
    }
    text.push_str(&stats.csv_row());
    text.push('\n');
    file.write_all(text.as_bytes())
        .map_err(|e| Failure::Io(path.to_owned(), e))
}

fn bench(a: BenchArgs, out: Out<'_>) -> CmdResult {
    let (_, mut rng) = seeded(a.seed, out)?;
    if a.iters == 0 {
        return Err(Failure::Invalid("--iters must be positive".into()));
    }
    let public = load_public(&a.public)?;
    let (n, m) = (public.n(), u128::from(public.m()));
    let ctx = public.context();
    let mut max = 0;
    let mut total = 0;
    let start = Instant::now();
    for _ in 0..a.iters {
        let msg = loop {
            let msg = BitString::new((0..n).map(|_| rng.gen()).collect());
            if !msg.is_zero() {
                break msg;
            }
        };
        let before = ctx.mulcount();
        digest_in(&ctx, &public, &msg)?;
        let used = ctx.mulcount() - before;
        max = max.max(used);
        total += used;
    }
    let elapsed = start.elapsed();
    put(out, format_args!("iters={}", a.iters))?;
    put(out, format_args!("mulcount_max={max}"))?;
    put(
        out,
        format_args!("mulcount_mean={:.2}", total as f64 / a.iters as f64),
    )?;
    put(out, format_args!("mulcount_bound={}", 2 * n))?;
    put(
        out,
        format_args!("bit_ops_estimate={}", 4 * n as u128 * m * m),
    )?;
    put(
        out,
        format_args!(
            "micros_per_digest={:.2}",
            elapsed.as_secs_f64() * 1e6 / a.iters as f64
        ),
    )
}
