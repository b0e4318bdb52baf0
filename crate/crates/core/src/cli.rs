//! The `eczcs` command line. Exit codes: 0 success / check passed,
//! 1 check failed, 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::construct::{fixture, fixture_ids, read_family, seed, theorem2_construct, zccs_width, Constructed};
use crate::correlation::{profile_range, Pairing};
use crate::error::{Error, Result};
use crate::gbf::{preset, ConstructionSpec};
use crate::manifest::RunManifest;
use crate::seq::Family;
use crate::sim::{monte_carlo_mse, resolve_training, SimConfig};
use crate::training::{check_design_criterion, GsmConfig};
use crate::verify::{check_ccc, check_eczcs, check_mocs, check_szccs, check_zccs, check_zcz_set, flatten_to_zcz, Verdict};

#[derive(Parser, Debug, Serialize)]
#[command(name = "eczcs", version, about = "Construct, verify and simulate E-CZCS training sequences")]
pub struct Cli {
    /// Write the main output here (a manifest goes to <out>.manifest.json).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Alphabet size for text-format inputs.
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u32,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    /// One sequence per line in '+'/'-' (or phase list) form.
    Text,
}

#[derive(Subcommand, Debug, Serialize)]
pub enum Command {
    /// Build a family and verify it.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Check a family file against a class.
    Verify(VerifyArgs),
    /// Tabulate a correlation profile as CSV.
    Profile(ProfileArgs),
    /// Lay a family out as a GSM training matrix and check it.
    Train(TrainArgs),
    /// Monte-Carlo LS channel-estimation MSE.
    Simulate(SimulateArgs),
}

#[derive(Subcommand, Debug, Serialize)]
pub enum ConstructCmd {
    /// Pairing construction from a ZCCS / MOCS / CCC seed.
    Theorem2 {
        /// Catalog id (e.g. table3, ccc-2x4) or family file.
        #[arg(long)]
        seed: String,
        /// Declared seed width; defaults to the catalog value or the measured width.
        #[arg(long = "Z")]
        z: Option<usize>,
        /// Build even if the seed fails verification.
        #[arg(long)]
        force: bool,
    },
    /// Generalized Boolean function construction.
    Theorem3(SpecSource),
    /// Complete complementary code from a path partition.
    Lemma2(SpecSource),
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct SpecSource {
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON spec {m, q, k, v, U, pi, eta}.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Eczcs,
    Zccs,
    Szccs,
    Mocs,
    Ccc,
    Zcz,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    pub file: String,
    #[arg(long, value_enum)]
    pub class: Class,
    #[arg(long = "Z")]
    pub z: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairingKind {
    /// ρ(s, s′; u) between two sequences.
    Aperiodic,
    /// φ(s, s′; u) between two sequences.
    Periodic,
    /// Σ_n ρ over two sets.
    Set,
    /// Σ_n ρ(g_n, g′_{n+1}) over two sets.
    Cross,
}

#[derive(Args, Debug, Serialize)]
pub struct ProfileArgs {
    pub file: String,
    #[arg(long, value_enum)]
    pub pairing: PairingKind,
    /// Set index, or `set.member` for sequence pairings.
    #[arg(long, default_value = "0")]
    pub first: String,
    #[arg(long, default_value = "0")]
    pub second: String,
    #[arg(long, allow_hyphen_values = true)]
    pub from: Option<isize>,
    #[arg(long, allow_hyphen_values = true)]
    pub to: Option<isize>,
}

#[derive(Args, Debug, Serialize)]
pub struct TrainArgs {
    pub family: String,
    #[arg(long)]
    pub nt: usize,
    #[arg(long)]
    pub na: usize,
    #[arg(long, default_value_t = 0)]
    pub lambda: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    pub config: PathBuf,
    /// Master seed (overrides the config).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// EbN0 grid in dB (overrides the config).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub ebn0: Vec<f64>,
    /// Delay-spread grid (overrides the config).
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<usize>,
}

/// Result of one command: the main output, its verdict (if any) and the manifest.
struct Outcome {
    body: String,
    passed: bool,
    manifest: RunManifest,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let argv = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, argv).and_then(|o| emit(&cli, o)) {
        Ok(passed) => i32::from(!passed),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn emit(cli: &Cli, o: Outcome) -> Result<bool> {
    let manifest = serde_json::to_string_pretty(&o.manifest)?;
    match &cli.out {
        Some(path) => {
            std::fs::write(path, &o.body)?;
            let mut m = path.clone().into_os_string();
            m.push(".manifest.json");
            std::fs::write(PathBuf::from(m), manifest + "\n")?;
        }
        None => {
            std::io::stdout().write_all(o.body.as_bytes())?;
            eprintln!("{manifest}");
        }
    }
    Ok(o.passed)
}

/// A fixture id, catalog id or file path.
fn load_family(source: &str, q: u32, manifest: &mut RunManifest) -> Result<Family> {
    if fixture_ids().any(|id| id == source) {
        return fixture(source);
    }
    let path = Path::new(source);
    if path.exists() {
        manifest.add_input(path)?;
        return read_family(path, q);
    }
    Ok(seed(source)?.family)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct FamilyOutput<'a> {
    family: &'a Family,
    #[serde(rename = "Z")]
    z: usize,
    verdict: &'a Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed_verdict: Option<&'a Verdict>,
}

fn family_body(fmt: Format, fam: &Family, z: usize, verdict: &Verdict, seed_verdict: Option<&Verdict>) -> Result<String> {
    match fmt {
        Format::Text | Format::Csv => Ok(fam.to_text()),
        Format::Json => to_json(&FamilyOutput {
            family: fam,
            z,
            verdict,
            seed_verdict,
        }),
    }
}

fn load_spec(src: &SpecSource, manifest: &mut RunManifest) -> Result<ConstructionSpec> {
    match (&src.preset, &src.spec) {
        (Some(name), _) => preset(name),
        (None, Some(path)) => {
            manifest.add_input(path)?;
            Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
        }
        (None, None) => Err(Error::Config("need --preset or --spec".into())),
    }
}

fn parse_index(s: &str) -> Result<(usize, Option<usize>)> {
    let num = |t: &str| t.parse::<usize>().map_err(|e| Error::Parse(format!("index `{t}`: {e}")));
    match s.split_once('.') {
        Some((a, b)) => Ok((num(a)?, Some(num(b)?))),
        None => Ok((num(s)?, None)),
    }
}

fn execute(cli: &Cli, argv: Vec<String>) -> Result<Outcome> {
    let params = serde_json::to_value(cli)?;
    let name = match &cli.command {
        Command::Construct(ConstructCmd::Theorem2 { .. }) => "construct theorem2",
        Command::Construct(ConstructCmd::Theorem3(_)) => "construct theorem3",
        Command::Construct(ConstructCmd::Lemma2(_)) => "construct lemma2",
        Command::Verify(_) => "verify",
        Command::Profile(_) => "profile",
        Command::Train(_) => "train",
        Command::Simulate(_) => "simulate",
    };
    let mut manifest = RunManifest::new(name, argv, params);
    let q = cli.q;
    let (body, passed) = match &cli.command {
        Command::Construct(cmd) => {
            let fmt = cli.format.unwrap_or(Format::Json);
            match cmd {
                ConstructCmd::Theorem2 { seed: src, z, force } => {
                    let (fam, declared) = if fixture_ids().any(|id| id == src) || Path::new(src).exists() {
                        let fam = load_family(src, q, &mut manifest)?;
                        let declared = match z {
                            Some(z) => *z,
                            None => zccs_width(&fam)?.ok_or_else(|| {
                                Error::SeedRejected("seed is not a ZCCS of any width".into())
                            })?,
                        };
                        (fam, declared)
                    } else {
                        let entry = seed(src)?;
                        let declared = z.unwrap_or(entry.params().3);
                        (entry.family, declared)
                    };
                    let Constructed {
                        family,
                        z,
                        seed_verdict,
                        verdict,
                    } = theorem2_construct(&fam, declared, *force)?;
                    let body = family_body(fmt, &family, z, &verdict, Some(&seed_verdict))?;
                    (body, verdict.passed)
                }
                ConstructCmd::Theorem3(src) => {
                    let spec = load_spec(src, &mut manifest)?;
                    let fam = spec.theorem3()?;
                    let z = spec.zone_width()?;
                    let verdict = check_eczcs(&fam, z)?;
                    (family_body(fmt, &fam, z, &verdict, None)?, verdict.passed)
                }
                ConstructCmd::Lemma2(src) => {
                    let spec = load_spec(src, &mut manifest)?;
                    let fam = spec.lemma2()?;
                    let verdict = check_ccc(&fam)?;
                    let l = fam.seq_len();
                    (family_body(fmt, &fam, l, &verdict, None)?, verdict.passed)
                }
            }
        }
        Command::Verify(a) => {
            let fam = load_family(&a.file, q, &mut manifest)?;
            let need_z = || a.z.ok_or_else(|| Error::Config(format!("--Z is required for class {:?}", a.class)));
            let verdict = match a.class {
                Class::Eczcs => check_eczcs(&fam, need_z()?)?,
                Class::Zccs => check_zccs(&fam, need_z()?)?,
                Class::Szccs => check_szccs(&fam, need_z()?)?,
                Class::Mocs => check_mocs(&fam)?,
                Class::Ccc => check_ccc(&fam)?,
                Class::Zcz => check_zcz_set(&flatten_to_zcz(&fam), need_z()?)?,
            };
            (to_json(&verdict)?, verdict.passed)
        }
        Command::Profile(a) => {
            let fam = load_family(&a.file, q, &mut manifest)?;
            let (m1, n1) = parse_index(&a.first)?;
            let (m2, n2) = parse_index(&a.second)?;
            let set = |m: usize| {
                (m < fam.num_sets())
                    .then(|| fam.set(m))
                    .ok_or_else(|| Error::Config(format!("set index {m} out of range")))
            };
            let member = |m: usize, n: Option<usize>| -> Result<_> {
                let s = set(m)?;
                let n = n.unwrap_or(0);
                (n < s.size())
                    .then(|| s.get(n))
                    .ok_or_else(|| Error::Config(format!("member index {m}.{n} out of range")))
            };
            let pairing = match a.pairing {
                PairingKind::Aperiodic => Pairing::Aperiodic(member(m1, n1)?, member(m2, n2)?),
                PairingKind::Periodic => Pairing::Periodic(member(m1, n1)?, member(m2, n2)?),
                PairingKind::Set => Pairing::SetSum(set(m1)?, set(m2)?),
                PairingKind::Cross => Pairing::CrossChannel(set(m1)?, set(m2)?),
            };
            let (lo, hi) = pairing.full_range();
            let prof = profile_range(pairing, a.from.unwrap_or(lo), a.to.unwrap_or(hi))?;
            (prof.to_csv(), true)
        }
        Command::Train(a) => {
            let fam = load_family(&a.family, q, &mut manifest)?;
            let cfg = GsmConfig::new(a.nt, a.na)?;
            let psi = crate::training::build_training_matrix(&fam, &cfg, &a.family)?;
            let verdict = check_design_criterion(&psi, a.lambda);
            let body = match cli.format.unwrap_or(Format::Csv) {
                Format::Csv | Format::Text => {
                    eprintln!("{}", serde_json::to_string(&verdict)?);
                    psi.to_csv()
                }
                Format::Json => {
                    let mut v: serde_json::Value = serde_json::from_str(&psi.to_json()?)?;
                    v["lambda"] = a.lambda.into();
                    v["verdict"] = serde_json::to_value(&verdict)?;
                    to_json(&v)?
                }
            };
            (body, true)
        }
        Command::Simulate(a) => {
            manifest.add_input(&a.config)?;
            let mut cfg: SimConfig = serde_json::from_str(&std::fs::read_to_string(&a.config)?)?;
            if let Some(s) = a.seed {
                cfg.seed = s;
            }
            if let Some(t) = a.trials {
                cfg.trials = t;
            }
            if !a.ebn0.is_empty() {
                cfg.ebn0_db = a.ebn0.clone();
            }
            if !a.lambda.is_empty() {
                cfg.lambdas = a.lambda.clone();
            }
            cfg.validate()?;
            manifest.seed = Some(cfg.seed);
            manifest.params["resolved_config"] = serde_json::to_value(&cfg)?;
            if Path::new(&cfg.training).exists() {
                manifest.add_input(Path::new(&cfg.training))?;
            }
            let psi = resolve_training(&cfg.training, &cfg.gsm(), cfg.q, cfg.seed)?;
            let report = monte_carlo_mse(&psi, &cfg)?;
            let body = match cli.format.unwrap_or(Format::Csv) {
                Format::Json => to_json(&report)?,
                _ => report.to_csv(),
            };
            (body, true)
        }
    };
    Ok(Outcome { body, passed, manifest })
}
