use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use zagier_padic::cache::{self, CacheStatus};
use zagier_padic::completion::{verify_completion_with, CorrectionRule};
use zagier_padic::eisenstein::{
    cohen_series, hurwitz_forms, hurwitz_l, koblitz_congruence_check, koblitz_negative_control,
    HalfIntWeight,
};
use zagier_padic::numtheory::{bernoulli_snapshot, negative_fundamental_characters};
use zagier_padic::padic::{kummer_chain_check, proof_coefficient_congruence, zeta_scaling_check};
use zagier_padic::qseries::format_rational;
use zagier_padic::{CongruenceCertificate, Error};

/// Cohen Eisenstein series, Hurwitz class numbers and p-adic congruence
/// certificates for the weight 3/2 mock Eisenstein series.
#[derive(Parser)]
#[command(name = "zagier-padic", version)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Do not read or write the on-disk Bernoulli cache.
    #[arg(long, global = true)]
    no_cache: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// q-expansion of the Cohen Eisenstein series E_k.
    Eisenstein {
        /// Weight as "t/2", e.g. 7/2.
        #[arg(long)]
        weight: String,
        #[arg(long, short = 'N')]
        precision: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Table of (n, H(n), 12 H(n)), cross-checked by two independent methods.
    Hurwitz {
        #[arg(long, short = 'N')]
        precision: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[command(flatten)]
        output: Output,
    },
    /// Verify the completed series against (1-p)/2 E_{3/2+p^(l-1)(p-1)} mod p^l.
    Verify {
        #[arg(short)]
        p: u64,
        #[arg(short, default_value_t = 1)]
        l: u32,
        #[arg(short = 'N', long = "precision", default_value_t = 100)]
        precision: u64,
        /// Compare the uncorrected series instead.
        #[arg(long)]
        uncorrected: bool,
        #[arg(long, default_value = "limit")]
        rule: String,
        /// Allow l >= 3 (large Bernoulli numbers).
        #[arg(long)]
        deep: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Run one family of congruence checks over a parameter grid.
    Checks {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// E_k = E_{k+p-1} mod p.
    Koblitz {
        #[arg(long)]
        weight: String,
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(short = 'N', long = "precision", default_value_t = 100)]
        precision: u64,
    },
    /// E_{3/2} against E_{3/2+p-1} mod p (expected to fail).
    KoblitzNegative {
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(short = 'N', long = "precision", default_value_t = 12)]
        precision: u64,
    },
    /// L_p(0, chi omega) = L_p(1-n, chi omega^n) mod p^l for all -D0 up to a bound.
    Kummer {
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(short, value_delimiter = ',', required = true)]
        l: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        max_d0: u64,
    },
    /// -6 zeta(-1-p^(l-1)(p-1)) = (1-p)/2 mod p^l.
    Zeta {
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(short, value_delimiter = ',', required = true)]
        l: Vec<u32>,
    },
    /// Coefficient congruence c_{m,k} = (1 - chi(p)) H(m) / zeta(2-2k) mod p^l.
    Proof {
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
        #[arg(short, value_delimiter = ',', required = true)]
        l: Vec<u32>,
        #[arg(long, default_value_t = 100)]
        max_m: u64,
    },
}

/// Exit status: 1 for a mathematical mismatch, 2 for usage or domain errors.
enum Failure {
    Mismatch(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PDividesDenominator { .. } | Error::ModulusMismatch { .. } => {
                Failure::Mismatch(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn emit(output: &Output, text: &str) -> Result<(), Failure> {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_weight(s: &str) -> Result<HalfIntWeight, Failure> {
    let k: HalfIntWeight = s.parse()?;
    k.check_cohen()?;
    Ok(k)
}

#[derive(Serialize)]
struct HurwitzRow {
    n: u64,
    #[serde(rename = "H")]
    h: String,
    #[serde(rename = "12H")]
    twelve_h: String,
}

#[derive(Serialize)]
struct Report {
    suite: &'static str,
    passed: usize,
    failed: usize,
    certificates: Vec<CongruenceCertificate>,
}

fn report(suite: &'static str, certificates: Vec<CongruenceCertificate>, expect_fail: bool) -> Result<bool, Failure> {
    let failed = certificates.iter().filter(|c| !c.passed()).count();
    let r = Report {
        suite,
        passed: certificates.len() - failed,
        failed,
        certificates,
    };
    println!("{}", serde_json::to_string(&r).expect("report serializes"));
    Ok(if expect_fail { failed == r.certificates.len() } else { failed == 0 })
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Eisenstein {
            weight,
            precision,
            format,
            output,
        } => {
            let series = cohen_series(parse_weight(&weight)?, precision)?;
            let text = match format {
                Format::Json => series.to_json() + "\n",
                Format::Csv => series.to_csv(),
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::Hurwitz {
            precision,
            format,
            output,
        } => {
            let mut rows = Vec::new();
            for n in 0..=precision {
                let h = hurwitz_l(n);
                let oracle = hurwitz_forms(n);
                if h != oracle {
                    return Err(Failure::Mismatch(format!(
                        "H({n}): L-value route gives {}, form count gives {}",
                        h.value(),
                        oracle.value()
                    )));
                }
                rows.push(HurwitzRow {
                    n,
                    h: format_rational(h.value()),
                    twelve_h: h.twelve_h().to_string(),
                });
            }
            let text = match format {
                Format::Json => serde_json::to_string(&rows).expect("rows serialize") + "\n",
                Format::Csv => {
                    let mut s = String::from("n,H,12H\n");
                    for r in &rows {
                        s.push_str(&format!("{},{},{}\n", r.n, r.h, r.twelve_h));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            Ok(true)
        }
        Command::Verify {
            p,
            l,
            precision,
            uncorrected,
            rule,
            deep,
            output,
        } => {
            if p < 5 {
                return Err(Failure::Usage(format!("verify needs p >= 5, got {p}")));
            }
            if l >= 3 && !deep {
                return Err(Failure::Usage("l >= 3 requires --deep".into()));
            }
            let rule: CorrectionRule = rule.parse()?;
            let cert = verify_completion_with(p, l, precision, (!uncorrected).then_some(rule))?;
            emit(&output, &(cert.to_json() + "\n"))?;
            if !cert.passed() {
                eprintln!("mismatch at exponents {:?}", cert.diff_indices());
            }
            Ok(cert.passed())
        }
        Command::Checks { suite } => match suite {
            Suite::Koblitz { weight, p, precision } => {
                let k = parse_weight(&weight)?;
                let certs = p
                    .iter()
                    .map(|&p| koblitz_congruence_check(k, p, precision))
                    .collect::<Result<Vec<_>, _>>()?;
                report("koblitz", certs, false)
            }
            Suite::KoblitzNegative { p, precision } => {
                let certs = p
                    .iter()
                    .map(|&p| koblitz_negative_control(p, precision))
                    .collect::<Result<Vec<_>, _>>()?;
                report("koblitz-negative", certs, true)
            }
            Suite::Kummer { p, l, max_d0 } => {
                let mut certs = Vec::new();
                for &p in &p {
                    for &l in &l {
                        for chi in negative_fundamental_characters(max_d0) {
                            certs.push(kummer_chain_check(chi, p, l)?);
                        }
                    }
                }
                report("kummer", certs, false)
            }
            Suite::Zeta { p, l } => {
                let mut certs = Vec::new();
                for &p in &p {
                    for &l in &l {
                        certs.push(zeta_scaling_check(p, l)?);
                    }
                }
                report("zeta", certs, false)
            }
            Suite::Proof { p, l, max_m } => {
                let mut certs = Vec::new();
                for &p in &p {
                    for &l in &l {
                        for m in (3..=max_m).filter(|m| m % 4 == 0 || m % 4 == 3) {
                            certs.push(proof_coefficient_congruence(m, p, l)?);
                        }
                    }
                }
                report("proof", certs, false)
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let cache_dir = (!cli.no_cache).then(cache::default_cache_dir).flatten();
    let cached = match &cache_dir {
        Some(dir) => match cache::load(dir) {
            CacheStatus::Loaded(n) => n,
            CacheStatus::Discarded(reason) => {
                eprintln!("warning: ignoring Bernoulli cache: {reason}");
                0
            }
            CacheStatus::Missing => 0,
        },
        None => 0,
    };

    let status = run(cli);

    if let Some(dir) = &cache_dir {
        if bernoulli_snapshot().len() > cached {
            if let Err(e) = cache::store(dir) {
                eprintln!("warning: could not write Bernoulli cache: {e}");
            }
        }
    }
    match status {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Mismatch(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
