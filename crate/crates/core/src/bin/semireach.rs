//! Command-line front end: decide, reduce, bounded search, Post
//! correspondence encoding, validation, and reduction cross-checking over
//! the plain-text instance format.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use semireach::bundle::ReductionBundle;
use semireach::decide::{decide, rational_language_dfa, DecideOpts};
use semireach::instance::{parse_instance, serialize_instance, Decision, Instance};
use semireach::oracle::{oracle_search, reduction_consistency_check};
use semireach::paterson::{decode_mpcp_witness, encode_mpcp, MpcpInstance};
use semireach::reduce::{projective_lift, reduce_any, ReductionTarget};
use semireach::witness::Witness;

const EXIT_YES: u8 = 0;
const EXIT_NO: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;
const EXIT_USAGE: u8 = 64;
const EXIT_INPUT: u8 = 65;

#[derive(Parser)]
#[command(name = "semireach", version, about = "Reachability in matrix semigroups over semirings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance (exact over separable semirings).
    Decide {
        file: PathBuf,
        /// Print the witness for a YES answer.
        #[arg(long)]
        witness: bool,
        /// Write the DFA of the satisfying language to this path.
        #[arg(long, value_name = "OUT")]
        dfa: Option<PathBuf>,
        /// Fall back to bounded search on undecidable semirings.
        #[arg(long, value_name = "LEN")]
        oracle_fallback: Option<usize>,
        /// Power bound for the one-generator scan over zmax/zmin.
        #[arg(long, value_name = "POW")]
        r1_bound: Option<usize>,
    },
    /// Transform an instance, writing sub-instances and a manifest.
    Reduce {
        file: PathBuf,
        /// scalar2|vector2|matrix2|v2m|s2v|s2m|m2v|projective|cassaigne
        #[arg(long)]
        to: String,
        /// Output directory.
        #[arg(short, long, value_name = "DIR")]
        out: PathBuf,
    },
    /// Bounded brute-force search.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        max_len: usize,
        #[arg(long)]
        witness: bool,
    },
    /// Post correspondence encodings.
    Mpcp {
        #[command(subcommand)]
        command: MpcpCommand,
    },
    /// Validate an instance or mpcp file.
    Check { file: PathBuf },
    /// Run the reduction consistency harness.
    Xcheck {
        file: PathBuf,
        #[arg(long)]
        to: String,
        #[arg(long)]
        max_len: usize,
    },
}

#[derive(Subcommand)]
enum MpcpCommand {
    /// Encode an mpcp file as a vector-mortality instance.
    Encode {
        file: PathBuf,
        #[arg(short, long, value_name = "OUT")]
        out: PathBuf,
    },
    /// Decode a witness of the encoded instance back to pair indices.
    Decode {
        file: PathBuf,
        /// Space-separated 1-based letter indices.
        #[arg(long)]
        witness: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_instance(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn decision_code(d: &Decision) -> u8 {
    match d {
        Decision::Yes(_) => EXIT_YES,
        Decision::No { .. } => EXIT_NO,
        Decision::Unknown(_) => EXIT_UNKNOWN,
        Decision::Unsupported(_) => EXIT_UNSUPPORTED,
    }
}

fn print_decision(d: &Decision, witness: bool) {
    println!("{d}");
    if let Decision::Unsupported(reason) = d {
        eprintln!("unsupported: {reason}");
    }
    if witness {
        if let Decision::Yes(w) = d {
            println!("{w}");
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Decide { file, witness, dfa, oracle_fallback, r1_bound } => {
            let instance = read_instance(&file)?;
            let opts = DecideOpts {
                oracle_fallback,
                r1_max_pow: r1_bound,
            };
            let d = decide(&instance, &opts);
            print_decision(&d, witness);
            if let Some(out) = dfa {
                match rational_language_dfa(&instance) {
                    Ok(automaton) => {
                        fs::write(&out, automaton.serialize())
                            .map_err(|e| format!("{}: {e}", out.display()))?;
                    }
                    Err(e) => eprintln!("dfa not constructed: {e}"),
                }
            }
            Ok(decision_code(&d))
        }
        Command::Reduce { file, to, out } => {
            let instance = read_instance(&file)?;
            if to == "projective" {
                let lift = projective_lift(&instance).map_err(|e| e.to_string())?;
                fs::create_dir_all(&out).map_err(|e| format!("{}: {e}", out.display()))?;
                let sub_name = "sub_000.txt";
                fs::write(out.join(sub_name), serialize_instance(&lift.lifted))
                    .map_err(|e| e.to_string())?;
                let mut manifest = String::new();
                manifest.push_str("kind projective_lift\n");
                manifest.push_str("semantics projective\n");
                manifest.push_str("subs 1\n");
                manifest.push_str(&format!(
                    "r_in {} n_in {} r_out {} n_out {}\n",
                    instance.letters(),
                    instance.dim(),
                    lift.lifted.letters(),
                    lift.lifted.dim()
                ));
                manifest.push_str("witness_map identity\n");
                manifest.push_str(&format!("sub 0 {sub_name}\n"));
                fs::write(out.join("manifest.txt"), manifest).map_err(|e| e.to_string())?;
                println!("wrote 1 sub-instance and manifest to {}", out.display());
                return Ok(EXIT_YES);
            }
            let target = ReductionTarget::parse(&to)
                .ok_or_else(|| format!("unknown reduction `{to}`"))?;
            let bundle = reduce_any(&instance, target).map_err(|e| e.to_string())?;
            write_bundle(&bundle, &out)?;
            println!(
                "wrote {} sub-instance(s) and manifest to {}",
                bundle.subs.len(),
                out.display()
            );
            Ok(EXIT_YES)
        }
        Command::Oracle { file, max_len, witness } => {
            let instance = read_instance(&file)?;
            let d = oracle_search(&instance, max_len);
            print_decision(&d, witness);
            Ok(decision_code(&d))
        }
        Command::Mpcp { command } => match command {
            MpcpCommand::Encode { file, out } => {
                let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
                let mpcp = MpcpInstance::parse(&text).map_err(|e| e.to_string())?;
                let encoded = encode_mpcp(&mpcp).map_err(|e| e.to_string())?;
                fs::write(&out, serialize_instance(&encoded))
                    .map_err(|e| format!("{}: {e}", out.display()))?;
                println!(
                    "encoded {} pair(s) into a vector instance with {} letters, dimension 3",
                    mpcp.pairs().len(),
                    encoded.letters()
                );
                Ok(EXIT_YES)
            }
            MpcpCommand::Decode { file, witness } => {
                let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
                let mpcp = MpcpInstance::parse(&text).map_err(|e| e.to_string())?;
                let r = mpcp.pairs().len();
                let w = Witness::parse(&witness, r + 1).map_err(|e| e.to_string())?;
                let indices = decode_mpcp_witness(&w, &mpcp).map_err(|e| e.to_string())?;
                let seq: Vec<String> = indices.iter().map(|i| i.to_string()).collect();
                println!("indices: {}", seq.join(" "));
                let mut u: Vec<u32> = mpcp.pairs()[0].0.clone();
                for &i in &indices {
                    u.extend_from_slice(&mpcp.pairs()[i - 1].0);
                }
                let rendered: String = u.iter().map(|d| d.to_string()).collect();
                println!("solution word: {rendered}");
                Ok(EXIT_YES)
            }
        },
        Command::Check { file } => {
            let text = fs::read_to_string(&file).map_err(|e| format!("{}: {e}", file.display()))?;
            let first = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .unwrap_or("");
            if first == "mpcp" || first.starts_with("mpcp ") {
                MpcpInstance::parse(&text).map_err(|e| e.to_string())?;
            } else {
                parse_instance(&text).map_err(|e| format!("{}: {e}", file.display()))?;
            }
            println!("OK");
            Ok(EXIT_YES)
        }
        Command::Xcheck { file, to, max_len } => {
            let instance = read_instance(&file)?;
            let target = ReductionTarget::parse(&to)
                .ok_or_else(|| format!("unknown reduction `{to}`"))?;
            let bundle = reduce_any(&instance, target).map_err(|e| e.to_string())?;
            let report = reduction_consistency_check(&instance, &bundle, max_len);
            match report.decide_agrees {
                Some(true) => println!("decide agreement: yes"),
                Some(false) => println!("decide agreement: NO"),
                None => println!("decide agreement: skipped"),
            }
            println!("pushed {} witness(es)", report.pushed);
            println!("pulled {} witness(es)", report.pulled);
            for f in &report.failures {
                println!("failure [{}] witness `{}`: {}", f.stage, f.witness, f.detail);
            }
            if report.ok() {
                println!("all checks passed");
                Ok(EXIT_YES)
            } else {
                Ok(EXIT_NO)
            }
        }
    }
}

fn write_bundle(bundle: &ReductionBundle, out: &Path) -> Result<(), String> {
    fs::create_dir_all(out).map_err(|e| format!("{}: {e}", out.display()))?;
    let mut manifest = bundle.manifest_header();
    for (k, sub) in bundle.subs.iter().enumerate() {
        let name = format!("sub_{k:03}.txt");
        fs::write(out.join(&name), serialize_instance(sub)).map_err(|e| e.to_string())?;
        manifest.push_str(&format!("sub {k} {name}\n"));
    }
    fs::write(out.join("manifest.txt"), manifest).map_err(|e| e.to_string())?;
    Ok(())
}
