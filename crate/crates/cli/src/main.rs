//! `padwave`: batch front end. Every command prints one JSON document on stdout.
//!
//! Exit codes: 0 all exact checks passed, 1 an exact check failed, 2 usage error or
//! malformed input, 3 internal invariant breach.

mod commands;
mod input;
mod report;
mod selftest;

use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use padwave::Mode;

use crate::report::{error_document, Failure, Output};

#[derive(Parser, Debug)]
#[command(name = "padwave", version, about = "Exact p-adic wavelet constructions and checks")]
struct Cli {
    /// Human-readable table on stdout instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the JSON document to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Seed for randomized parameters and self-tests.
    #[arg(long, global = true, env = "PADWAVE_SEED", default_value_t = 1)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the N = 0 mask of the Haar scaling function.
    HaarMask {
        #[arg(long)]
        p: u64,
    },
    /// Build a wavelet family and verify it.
    #[command(subcommand)]
    Family(FamilyCmd),
    /// Moment profile and vanishing order of a step function.
    Moments {
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
        #[command(flatten)]
        order: OrderArgs,
        /// Take moments of f(x)χ(−ux) instead of f.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        at: String,
    },
    /// Discrete moment profile and vanishing order of a mask.
    MomentsDiscrete {
        #[arg(long, value_name = "FILE")]
        mask: PathBuf,
        #[command(flatten)]
        order: OrderArgs,
    },
    /// Fourier transform of a step function.
    Fourier {
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
        /// Apply the inverse transform.
        #[arg(long)]
        inverse: bool,
        /// Reflect x ↦ −x after transforming.
        #[arg(long)]
        reflect: bool,
    },
    /// Exact verifications on user-supplied objects.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Seeded randomized checks of the library identities.
    Selftest {
        #[arg(long, default_value_t = 20)]
        cases: u32,
    },
}

#[derive(Subcommand, Debug)]
enum FamilyCmd {
    HaarType {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        s: u32,
        /// {"sigma": {"j,m": cyc}, "Z": matrix}; missing keys take σ ≡ 1, Z = I.
        #[arg(long, value_name = "FILE", conflicts_with = "random")]
        params: Option<PathBuf>,
        /// Draw σ and Z from the seed.
        #[arg(long)]
        random: bool,
    },
    NonHaar {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        /// Moments checked: μ < k.
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Real)]
        mode: ModeArg,
        /// {"gamma": {"s,r": cyc}}; an s without entries takes γ ≡ 1.
        #[arg(long, value_name = "FILE", conflicts_with = "random")]
        params: Option<PathBuf>,
        #[arg(long)]
        random: bool,
    },
    Riesz {
        #[arg(long = "M", visible_alias = "m")]
        m: u32,
        #[arg(long = "N", visible_alias = "n")]
        n: u32,
        #[arg(long)]
        p: u64,
        /// Moment biconditional checked for k = 1..=K.
        #[arg(long, default_value_t = 3)]
        k: u32,
        /// Translates |a| ≤ p^G in the advisory Gram estimate.
        #[arg(long, default_value_t = 1)]
        gram_gamma: u32,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCmd {
    /// φ(x) = Σ_a h(a) φ(x/p − a), checked directly and in Fourier form.
    Refinement {
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
        #[arg(long, value_name = "FILE")]
        mask: PathBuf,
    },
    /// Mask symbol conditions (--mask) or shift orthonormality (--function).
    #[command(group = clap::ArgGroup::new("target").required(true).args(["mask", "function"]))]
    Orthonormality {
        #[arg(long, value_name = "FILE")]
        mask: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        function: Option<PathBuf>,
        /// Second function for cross orthogonality ⟨f, g(· − a)⟩ = 0.
        #[arg(long, value_name = "FILE", requires = "function")]
        other: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        gamma_max: u32,
    },
    /// Scaled unitarity of the shifted mask and wavelet filters.
    FilterBank {
        #[arg(long, value_name = "FILE")]
        mask: PathBuf,
        #[arg(long = "wavelet", value_name = "FILE", required = true)]
        wavelets: Vec<PathBuf>,
        /// Comma-separated rational scale per wavelet filter.
        #[arg(long, conflicts_with = "auto_scales")]
        scales: Option<String>,
        /// Scale each filter to squared norm p.
        #[arg(long)]
        auto_scales: bool,
    },
    StrangFix {
        #[arg(long, value_name = "FILE")]
        mask: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Real)]
        mode: ModeArg,
    },
    ApproxOrder {
        #[arg(long, value_name = "FILE")]
        function: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Real)]
        mode: ModeArg,
        #[arg(long)]
        gamma_max: Option<u32>,
    },
}

#[derive(Args, Debug)]
struct OrderArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Real)]
    mode: ModeArg,
    /// Search moments μ < K.
    #[arg(long, default_value_t = 4)]
    max_k: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Real,
    Integer,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Real => Mode::Real,
            ModeArg::Integer => Mode::Integer,
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output, Failure> {
    use commands as c;
    match &cli.command {
        Command::HaarMask { p } => c::haar_mask(*p),
        Command::Family(FamilyCmd::HaarType { p, s, params, random }) => {
            c::family_haar_type(*p, *s, params.as_deref(), random.then_some(cli.seed))
        }
        Command::Family(FamilyCmd::NonHaar {
            p,
            m,
            nu,
            k,
            mode,
            params,
            random,
        }) => c::family_non_haar(
            *p,
            *m,
            *nu,
            *k,
            (*mode).into(),
            params.as_deref(),
            random.then_some(cli.seed),
        ),
        Command::Family(FamilyCmd::Riesz { p, m, n, k, gram_gamma }) => c::family_riesz(*p, *m, *n, *k, *gram_gamma),
        Command::Moments { function, order, at } => c::moments(function, order.mode.into(), order.max_k, at),
        Command::MomentsDiscrete { mask, order } => c::moments_discrete(mask, order.mode.into(), order.max_k),
        Command::Fourier {
            function,
            inverse,
            reflect,
        } => c::fourier(function, *inverse, *reflect),
        Command::Verify(v) => match v {
            VerifyCmd::Refinement { function, mask } => c::verify_refinement(function, mask),
            VerifyCmd::Orthonormality {
                mask,
                function,
                other,
                gamma_max,
            } => c::verify_orthonormality(mask.as_deref(), function.as_deref(), other.as_deref(), *gamma_max),
            VerifyCmd::FilterBank {
                mask,
                wavelets,
                scales,
                auto_scales,
            } => c::verify_filter_bank(mask, wavelets, scales.as_deref(), *auto_scales),
            VerifyCmd::StrangFix { mask, k, mode } => c::verify_strang_fix(mask, *k, (*mode).into()),
            VerifyCmd::ApproxOrder {
                function,
                k,
                mode,
                gamma_max,
            } => c::verify_approx_order(function, *k, (*mode).into(), *gamma_max),
        },
        Command::Selftest { cases } => selftest::run(cli.seed, *cases),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.render().to_string();
            eprint!("{}", msg);
            let first = msg
                .lines()
                .next()
                .unwrap_or("usage error")
                .trim_start_matches("error: ");
            print!(
                "{}",
                padwave::json::to_canonical_string(&error_document("usage", first))
            );
            return ExitCode::from(2);
        }
    };

    panic::set_hook(Box::new(|_| {}));
    let result = panic::catch_unwind(|| dispatch(&cli)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        Err(Failure::Internal(msg))
    });
    let _ = panic::take_hook();

    let (doc, code) = match result {
        Ok(out) => {
            let code = if out.passed { 0 } else { 1 };
            (out, code)
        }
        Err(f) => {
            let code = f.exit_code();
            (Output::error(&f), code)
        }
    };
    let json_text = padwave::json::to_canonical_string(&doc.value);
    let text = if cli.pretty && cli.out.is_none() {
        report::render_table(&doc.value)
    } else {
        json_text
    };
    if let Err(e) = emit(&text, cli.out.as_ref()) {
        eprintln!("padwave: cannot write output: {}", e);
        return ExitCode::from(2);
    }
    ExitCode::from(code)
}
