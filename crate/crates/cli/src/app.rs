//! Argument parsing and the top-level run loop.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use soliton_core::symbolic::ZeroConfig;

use crate::commands::{self, Command, CommandError, Selection};
use crate::model::Model;
use crate::report::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "soliton-forge", version, about = "Soliton and hypersurface verification on coordinate manifolds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Curvature tensors and their identities.
    Curvature(Common),
    /// Torse-forming classification of --vector.
    ClassifyVector(Common),
    /// Solve for (λ, μ).
    Solve {
        #[command(subcommand)]
        kind: SolveKind,
    },
    Check {
        #[command(subcommand)]
        what: CheckWhat,
    },
    Classify {
        #[command(subcommand)]
        what: ClassifyWhat,
    },
    Verify {
        #[command(subcommand)]
        what: VerifyWhat,
    },
    /// Hypersurface given by the document's immersion block.
    Hypersurface(Common),
    /// Hypersurface of a unit sphere that is itself immersed in Euclidean space.
    SphereHypersurface(Common),
}

#[derive(Subcommand, Debug)]
enum SolveKind {
    /// η-Ricci soliton.
    Ricci(Common),
    /// η-Yamabe soliton.
    Yamabe(Common),
}

#[derive(Subcommand, Debug)]
enum CheckWhat {
    /// Whether --vector is a gradient, optionally of --function.
    Gradient(Common),
}

#[derive(Subcommand, Debug)]
enum ClassifyWhat {
    /// Quasi-Einstein class of the Ricci tensor.
    Einstein(Common),
}

#[derive(Subcommand, Debug)]
enum VerifyWhat {
    /// Classification, both solves and every applicable identity.
    Identities(Common),
    /// Curvature, identities, Einstein class and any immersion checks.
    All(Common),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("invalid seed '{s}': {e}"))
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Manifold documents.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    #[arg(long)]
    vector: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long)]
    function: Option<String>,
    /// First candidate form for the Einstein taxonomy.
    #[arg(long = "form", visible_alias = "A")]
    form_a: Option<String>,
    /// Second candidate form for the Einstein taxonomy.
    #[arg(long = "B")]
    form_b: Option<String>,
    /// Trace-free candidate tensor for the Einstein taxonomy.
    #[arg(long)]
    tensor: Option<String>,
    /// Field on the ambient (for sphere chains, the Euclidean) document.
    #[arg(long)]
    ambient_vector: Option<String>,
    /// Report Ricci components on this frame.
    #[arg(long)]
    frame: Option<String>,
    #[arg(long)]
    weyl: bool,
    #[arg(long, default_value_t = 32)]
    samples: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value = "0x5EED", value_parser = parse_seed)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

/// Result of one invocation: what to print and the process exit code
/// (0 all passed, 1 some check failed, 2 bad input or usage).
#[derive(Debug, Clone)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn split(cmd: Cmd) -> (Command, Common) {
    match cmd {
        Cmd::Curvature(c) => (Command::Curvature, c),
        Cmd::ClassifyVector(c) => (Command::ClassifyVector, c),
        Cmd::Solve { kind: SolveKind::Ricci(c) } => (Command::SolveRicci, c),
        Cmd::Solve { kind: SolveKind::Yamabe(c) } => (Command::SolveYamabe, c),
        Cmd::Check { what: CheckWhat::Gradient(c) } => (Command::CheckGradient, c),
        Cmd::Classify { what: ClassifyWhat::Einstein(c) } => (Command::ClassifyEinstein, c),
        Cmd::Verify { what: VerifyWhat::Identities(c) } => (Command::VerifyIdentities, c),
        Cmd::Verify { what: VerifyWhat::All(c) } => (Command::VerifyAll, c),
        Cmd::Hypersurface(c) => (Command::Hypersurface, c),
        Cmd::SphereHypersurface(c) => (Command::SphereHypersurface, c),
    }
}

pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            };
        }
    };
    let (cmd, common) = split(cli.cmd);
    let config = ZeroConfig {
        samples: common.samples,
        tol: common.tol,
        seed: common.seed,
    };
    let sel = Selection {
        vector: common.vector.clone(),
        eta: common.eta.clone(),
        function: common.function.clone(),
        form_a: common.form_a.clone(),
        form_b: common.form_b.clone(),
        tensor: common.tensor.clone(),
        ambient_vector: common.ambient_vector.clone(),
        frame: common.frame.clone(),
        weyl: common.weyl,
    };
    let format = match common.format {
        FormatArg::Text => Format::Text,
        FormatArg::Json => Format::Json,
    };
    match execute(cmd, &common.files, &sel, config) {
        Ok(report) => Outcome {
            stdout: report.render(format),
            stderr: String::new(),
            code: report.exit_code(),
        },
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: 2,
        },
    }
}

/// Load every file, run the command on each and assemble one report. With
/// several files each check id is prefixed by its manifold name.
pub fn execute(cmd: Command, files: &[PathBuf], sel: &Selection, config: ZeroConfig) -> Result<Report, CommandError> {
    let mut inputs = Vec::new();
    let mut checks = Vec::new();
    for path in files {
        let model = Model::load(path, config)?;
        inputs.extend(model.inputs.iter().cloned());
        let mut records = commands::run(cmd, &model, sel)?;
        if files.len() > 1 {
            for r in &mut records {
                r.id = format!("{}/{}", model.name(), r.id);
            }
        }
        checks.extend(records);
    }
    Ok(Report::new(&inputs, config, checks))
}
