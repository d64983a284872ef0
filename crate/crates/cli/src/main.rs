mod error;
mod inputs;
mod par;
mod render;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hermsph::hall_littlewood::{p_poly, q_poly, stabilizer_weight, TSpec};
use hermsph::padic_cartan::{cartan_reduce, orbit_invariants};
use hermsph::schwartz_plancherel::fourier;
use hermsph::spherical::{omega_explicit, psi_parts, SpaceParams};
use hermsph::weyl_roots::{Parity, Signature};
use serde_json::{json, Value};

use error::CliError;
use render::{laurent_json, pretty_laurent, pretty_ratfn, pretty_scalar, ratfn_json, scalar_json};

#[derive(Parser, Debug)]
#[command(name = "hermsph", version, about = "Spherical functions on p-adic unitary hermitian matrices")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Hall-Littlewood polynomials P_mu, Q_mu and the weight W_mu.
    Hl(HlArgs),
    /// The explicit spherical function omega(x_lambda; z).
    Omega(SphArgs),
    /// The normalized spherical function Psi(x_lambda; z).
    Psi(SphArgs),
    /// Run a verification suite.
    Verify {
        #[command(subcommand)]
        suite: verify::Suite,
    },
    /// Cartan signature and orbit invariants of a matrix read from a JSON file.
    Cartan { file: PathBuf },
    /// Spherical Fourier transform of a Schwartz function read from a JSON file.
    Fourier {
        #[arg(long)]
        input: PathBuf,
        /// Numeric value of q for the evaluated coefficients.
        #[arg(long)]
        q: Option<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TChoice {
    Spherical,
    Zero,
}

#[derive(Args, Debug)]
struct HlArgs {
    #[arg(long)]
    n: Option<usize>,
    /// Matrix size; only its parity is used.
    #[arg(long)]
    m: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    mu: Vec<i32>,
    #[arg(long, value_enum, default_value = "spherical")]
    t: TChoice,
}

#[derive(Args, Debug)]
struct SphArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    e: u32,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    lambda: Vec<i32>,
}

pub struct Output {
    pub json: Value,
    pub text: String,
    pub ok: bool,
}

fn cmd_hl(a: &HlArgs) -> Result<Output, CliError> {
    let n = a.n.unwrap_or(a.mu.len());
    if n == 0 || n != a.mu.len() {
        return Err(CliError::Invalid(format!("mu has {} parts but n = {n}", a.mu.len())));
    }
    if a.m < 2 || a.m / 2 != n {
        return Err(CliError::Invalid(format!("m = {} is inconsistent with n = {n}", a.m)));
    }
    let mu = Signature::dominant(a.mu.clone())?;
    let (t, tname) = match a.t {
        TChoice::Spherical => (TSpec::spherical(Parity::of(a.m)), "spherical"),
        TChoice::Zero => (TSpec::zero(), "zero"),
    };
    let p = p_poly(&mu, n, &t)?;
    let q = q_poly(&mu, n, &t)?;
    let w = stabilizer_weight(&mu, &t)?;
    let text = format!(
        "P = {}\nQ = {}\nW = {}\n",
        pretty_laurent(&p),
        pretty_laurent(&q),
        pretty_scalar(&w)
    );
    Ok(Output {
        json: json!({
            "command": "hl", "n": n, "m": a.m, "mu": a.mu, "t": tname,
            "P": laurent_json(&p), "Q": laurent_json(&q), "W": scalar_json(&w),
        }),
        text,
        ok: true,
    })
}

fn cmd_omega(a: &SphArgs) -> Result<Output, CliError> {
    let p = SpaceParams::new(a.m, a.e)?;
    let w = omega_explicit(&a.lambda, &p)?;
    Ok(Output {
        json: json!({"command": "omega", "m": a.m, "e": a.e, "lambda": a.lambda, "omega": ratfn_json(&w)}),
        text: format!("omega = {}\n", pretty_ratfn(&w)),
        ok: true,
    })
}

fn cmd_psi(a: &SphArgs) -> Result<Output, CliError> {
    let p = SpaceParams::new(a.m, a.e)?;
    let (poly, num, den) = psi_parts(&a.lambda, &p)?;
    let (poly, den) = match num.exact_div(&den) {
        Ok(c) => (poly.scale(&c), hermsph::exact_arith::Scalar::one()),
        Err(_) => (poly.scale(&num), den),
    };
    let text = if den.is_one() {
        format!("Psi = {}\n", pretty_laurent(&poly))
    } else {
        format!("Psi = ({}) / ({})\n", pretty_laurent(&poly), pretty_scalar(&den))
    };
    Ok(Output {
        json: json!({
            "command": "psi", "m": a.m, "e": a.e, "lambda": a.lambda,
            "psi": {"num": laurent_json(&poly), "den": scalar_json(&den)},
        }),
        text,
        ok: true,
    })
}

fn cmd_cartan(file: &Path) -> Result<Output, CliError> {
    let x = inputs::read_matrix(file)?;
    let lambda = cartan_reduce(&x)?;
    let inv = orbit_invariants(&x)?;
    let ell = x.ell()?;
    let fmt_opt = |o: Option<String>| o.unwrap_or_else(|| "none".into());
    let text = format!(
        "lambda = {}\njtype = {}\nr = {}\nparity = {}\nell = {}\n",
        lambda,
        inv.jtype,
        fmt_opt(inv.r.map(|r| r.to_string())),
        fmt_opt(inv.parity.map(|r| r.to_string())),
        ell
    );
    Ok(Output {
        json: json!({
            "command": "cartan", "p": x.field.p, "N": x.field.prec, "m": x.m(),
            "lambda": lambda.entries(), "jtype": inv.jtype, "r": inv.r,
            "parity": inv.parity, "ell": ell,
        }),
        text,
        ok: true,
    })
}

fn cmd_fourier(input: &Path, q: Option<f64>) -> Result<Output, CliError> {
    let phi = inputs::read_schwartz(input)?;
    let q_val = q.unwrap_or(if phi.params.e == 1 { 2.0 } else { 3.0 });
    if !(q_val > 1.0) {
        return Err(CliError::Invalid(format!("q must exceed 1, got {q_val}")));
    }
    let img = fourier(&phi)?;
    let numeric = img.numeric(q_val);
    let mut text = format!("q = {q_val}\n");
    let mut terms = Vec::new();
    for (mu, t) in &img.expansion {
        let val = numeric[mu];
        text.push_str(&format!(
            "P_{mu}: ({}) * ({}{:+}i) = {}{:+}i\n",
            pretty_scalar(&t.scalar),
            t.coeff.re,
            t.coeff.im,
            val.re,
            val.im
        ));
        terms.push(json!({
            "mu": mu.entries(), "scalar": scalar_json(&t.scalar),
            "coeff": [t.coeff.re, t.coeff.im], "value": [val.re, val.im],
        }));
    }
    if terms.is_empty() {
        text.push_str("0\n");
    }
    Ok(Output {
        json: json!({
            "command": "fourier", "m": phi.params.m, "e": phi.params.e, "q": q_val, "terms": terms,
        }),
        text,
        ok: true,
    })
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.cmd {
        Cmd::Hl(a) => cmd_hl(a),
        Cmd::Omega(a) => cmd_omega(a),
        Cmd::Psi(a) => cmd_psi(a),
        Cmd::Verify { suite } => verify::run(suite),
        Cmd::Cartan { file } => cmd_cartan(file),
        Cmd::Fourier { input, q } => cmd_fourier(input, *q),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            if cli.json {
                let v = json!({"command": "error", "code": e.exit_code(), "message": e.to_string()});
                println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
