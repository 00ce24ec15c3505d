use clap::{Parser, Subcommand, ValueEnum};
use hilb::dsl;
use hilb::rep::dop::RadOp;
use hilb::surface::{make_surface, SurfaceConfig, SurfaceDatum};
use hilb_cli::cert::{self, Report};
use hilb_cli::suites::{self, Bounds, Ctx};
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Parser)]
#[command(name = "hilb", about = "Exact verification of Fock-space operator identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run verification suites and write a certificate report.
    Verify {
        /// Suite name(s); repeatable or comma separated. Default: all.
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Surface config (TOML); replaces each suite's default datum.
        #[arg(long)]
        surface: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(i32).range(1..))]
        max_mode: Option<i32>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_weight: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        max_level: Option<u32>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        chern_degree: Option<u32>,
        /// Transcendental rank(s) b.
        #[arg(long = "b", value_delimiter = ',')]
        b_list: Vec<usize>,
        /// Rank of the split model used by the kimura suite.
        #[arg(long)]
        b_model: Option<usize>,
        /// Report path; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Apply a DSL operator expression to a DSL Fock vector.
    Compute {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "v")]
        vector: String,
        #[arg(long)]
        surface: Option<PathBuf>,
    },
    /// Merge certificate reports and print the summary.
    Report {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn load_surface(p: &Path) -> Result<SurfaceDatum, String> {
    let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
    let cfg = SurfaceConfig::parse(&text).map_err(|e| format!("{}: {e}", p.display()))?;
    make_surface(&cfg).map_err(|e| format!("{}: {e}", p.display()))
}

fn emit(r: &Report, fmt: Format, out: &Option<PathBuf>) -> Result<(), String> {
    let text = match fmt {
        Format::Json => cert::to_json(r),
        Format::Text => cert::to_text(r),
    };
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail2(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    if let Some(n) = std::env::var("HILB_WORKERS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Verify { suites: names, surface, max_mode, max_weight, max_level, chern_degree, b_list, b_model, out, format } => {
            let selected = match suites::select(&names) {
                Ok(s) => s,
                Err(e) => return fail2(e),
            };
            let surface = match surface.as_deref().map(load_surface).transpose() {
                Ok(s) => s,
                Err(e) => return fail2(e),
            };
            let bounds = Bounds {
                max_mode,
                max_weight,
                max_level,
                chern_degree,
                b_list: if b_list.is_empty() { None } else { Some(b_list) },
                b_model,
            };
            let ctx = Ctx { bounds, surface };
            let start = Instant::now();
            let mut certs = vec![];
            for name in &selected {
                match suites::run_suite(name, &ctx) {
                    Ok(c) => certs.extend(c),
                    Err(e) => return fail2(e),
                }
            }
            let unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
            let ts = json!({ "unix_seconds": unix, "total_millis": start.elapsed().as_millis() as u64 });
            let report = cert::make_report(selected, certs, ts);
            if let Err(e) = emit(&report, format, &out) {
                return fail2(e);
            }
            if out.is_some() || matches!(format, Format::Json) {
                eprint!("{}", summary_line(&report));
            }
            exit_for(&report)
        }
        Cmd::Compute { expr, vector, surface } => {
            let s = match surface {
                Some(p) => match load_surface(&p) {
                    Ok(s) => s,
                    Err(e) => return fail2(e),
                },
                None => make_surface(&SurfaceConfig::k3(1, 21)).unwrap(),
            };
            let run = || -> Result<String, dsl::DslError> {
                let e = dsl::parse_expr(&expr)?;
                let v = dsl::parse_vector(&vector)?;
                let w = RadOp::rational(dsl::build_vector(&s, &v)?);
                Ok(dsl::fmt_vector(&s, &dsl::act(&s, &e, &w)?))
            };
            match run() {
                Ok(t) => {
                    println!("{t}");
                    ExitCode::SUCCESS
                }
                Err(e) => fail2(e),
            }
        }
        Cmd::Report { paths, out, format } => {
            let mut reports = vec![];
            for p in &paths {
                let r = std::fs::read_to_string(p)
                    .map_err(|e| e.to_string())
                    .and_then(|t| serde_json::from_str::<Report>(&t).map_err(|e| e.to_string()));
                match r {
                    Ok(r) => reports.push(r),
                    Err(e) => return fail2(format!("{}: {e}", p.display())),
                }
            }
            let merged = cert::merge(&reports);
            if let Err(e) = emit(&merged, format, &out) {
                return fail2(e);
            }
            exit_for(&merged)
        }
    }
}

fn summary_line(r: &Report) -> String {
    format!("total {}  passed {}  failed {}\n", r.summary.total, r.summary.passed, r.summary.failed)
}

fn exit_for(r: &Report) -> ExitCode {
    if r.summary.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
