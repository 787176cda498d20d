use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use locuslab_core::baker::{
    berest_psi, is_quasi_invariant, operator_from_ad_formula, potential_from_config,
    verify_ba_axioms, verify_bispectral, verify_eigen, verify_operator_eigen, verify_symmetry,
    BakerError,
};
use locuslab_core::config::{
    deformed_an, deformed_cn, isotropic_projectivisation, make_coxeter, Configuration,
    CoxeterFamily,
};
use locuslab_core::huygens::{huygens_certificate, HuygensError};
use locuslab_core::locus::{verify_affine_locus, verify_linear_locus, verify_via_2d_decomposition};
use locuslab_core::numeric::{pi, HpComplex};
use locuslab_core::onedim::{
    adler_moser, adler_moser_tau, ba_from_xi, berest_lutsenko, verify_1d_locus, Phase,
};
use locuslab_core::scalar::TowerScalar;
use locuslab_core::symbolic::{xk_names, ZeroMode, DEFAULT_SEED};

mod fpoly;
mod render;

const WATERMARK: &str =
    "probabilistic zero test: a pass holds with high probability, not with certainty";

#[derive(Parser)]
#[command(
    name = "locuslab",
    version,
    about = "Locus configurations, Baker-Akhiezer functions and Huygens certificates"
)]
struct Cli {
    /// Input file (configuration or saved report).
    #[arg(long = "in", global = true, value_name = "FILE")]
    input: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Zero-test backend.
    #[arg(long, global = true, default_value = "exact")]
    mode: ZeroMode,
    /// Worker threads for independent checks.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Working precision in bits for numeric root finding.
    #[arg(long, global = true, default_value_t = 256)]
    precision: usize,
    /// Seed for probabilistic choices; LOCUSLAB_SEED takes precedence.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the locus equations of a configuration.
    Verify {
        /// Also check plane by plane through the 2D decomposition.
        #[arg(long)]
        via_2d: bool,
    },
    /// Print a configuration document from a named family.
    Generate {
        /// coxeter-a, coxeter-i2, deformed-a, deformed-c, adler-moser-points or projectivise
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long)]
        l: Option<i64>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long)]
        m1: Option<u32>,
        #[arg(long)]
        m2: Option<u32>,
        #[arg(long)]
        tau: Option<String>,
    },
    /// Build the Baker-Akhiezer function and run checks on it.
    Psi {
        /// Comma-separated subset of symmetry, eigen, axioms, bispectral.
        #[arg(long, value_delimiter = ',', default_value = "eigen")]
        check: Vec<String>,
    },
    /// Quantum integral from the ad formula and its commutation with L.
    Integrals {
        /// Polynomial in k1..kn, e.g. "p3" or "k1^2 - 2*k1*k2".
        #[arg(long, default_value = "p2")]
        f: String,
        /// Degree bound for the monomial annihilation test of [L_f, L].
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// Hadamard chain and Huygens certificate.
    Hadamard,
    /// One-dimensional constructions.
    Onedim {
        #[command(subcommand)]
        which: Onedim,
    },
    /// Re-render a saved JSON report as text.
    Report,
}

#[derive(Subcommand)]
enum Onedim {
    /// Adler-Moser potential from the constants c2..cm, or level 2 from tau.
    AdlerMoser {
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        c: Vec<String>,
        #[arg(long, conflicts_with_all = ["m", "c"])]
        tau: Option<String>,
    },
    /// Baker-Akhiezer function from the constants xi_1..xi_m.
    Xi {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',')]
        xi: Vec<String>,
    },
    /// Roots of W[cos(k_j phi + theta_j)] and the planar configuration they give.
    BerestLutsenko {
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<u32>,
        /// Phases as decimals or multiples of pi ("pi/4", "3/2*pi").
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            conflicts_with = "unit"
        )]
        theta: Vec<String>,
        /// Phases given exactly as unit scalars e^{i theta}.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        unit: Vec<String>,
    },
}

/// A finished run: what to print and whether it passed.
struct Outcome {
    doc: Doc,
    pass: bool,
}

enum Doc {
    Report(Value),
    Raw(String),
}

struct Ctx {
    mode: ZeroMode,
    seed: u64,
    precision: usize,
    input: Option<PathBuf>,
}

impl Ctx {
    fn read(&self) -> Result<(String, String)> {
        let path = self
            .input
            .as_deref()
            .ok_or_else(|| anyhow!("this command needs --in FILE"))?;
        let src =
            fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok((path.display().to_string(), src))
    }

    fn config(&self) -> Result<Configuration> {
        let (name, src) = self.read()?;
        Configuration::from_json(&src).map_err(|e| anyhow!("{name}: {e}"))
    }

    fn stamp(&self, v: &mut Value) {
        v["mode"] = json!(self.mode.as_str());
        if self.mode == ZeroMode::Probabilistic {
            v["seed"] = json!(self.seed);
            v["watermark"] = json!(WATERMARK);
        }
    }
}

fn parse_json(s: &str) -> Value {
    serde_json::from_str(s).expect("core emits valid JSON")
}

fn scalar(src: &str, what: &str) -> Result<TowerScalar> {
    TowerScalar::parse_free(src)
        .map_err(|e| anyhow!("{what} '{src}', column {}: {}", e.column, e.message))
}

fn scalars(srcs: &[String], what: &str) -> Result<Vec<TowerScalar>> {
    srcs.iter().map(|s| scalar(s, what)).collect()
}

fn seed_from_env(flag: Option<u64>) -> Result<u64> {
    match std::env::var("LOCUSLAB_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| anyhow!("LOCUSLAB_SEED='{s}' is not an unsigned integer")),
        Err(_) => Ok(flag.unwrap_or(DEFAULT_SEED)),
    }
}

fn verify(ctx: &Ctx, via_2d: bool) -> Result<Outcome> {
    let c = ctx.config()?;
    let report = if c.is_linear() {
        verify_linear_locus(&c, ctx.mode, ctx.seed)?
    } else {
        verify_affine_locus(&c, ctx.mode, ctx.seed)?
    };
    let mut pass = report.pass;
    let mut v = serde_json::to_value(&report)?;
    v["kind"] = json!("locus");
    v["linear"] = json!(c.is_linear());
    if via_2d {
        if !c.is_linear() {
            bail!("--via-2d needs a configuration through the origin");
        }
        let d = verify_via_2d_decomposition(&c, ctx.mode, ctx.seed)?;
        let mut dv = serde_json::to_value(&d)?;
        dv["agrees"] = json!(d.pass == report.pass);
        pass &= d.pass;
        v["via_2d"] = dv;
    }
    v["pass"] = json!(pass);
    ctx.stamp(&mut v);
    Ok(Outcome {
        doc: Doc::Report(v),
        pass,
    })
}

fn need<T>(v: Option<T>, flag: &str, name: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("generate {name} needs --{flag}"))
}

#[allow(clippy::too_many_arguments)]
fn generate(
    ctx: &Ctx,
    name: &str,
    n: Option<usize>,
    m: Option<i64>,
    l: Option<i64>,
    p: Option<u32>,
    m1: Option<u32>,
    m2: Option<u32>,
    tau: Option<String>,
) -> Result<Outcome> {
    let mult = |m: i64| -> Result<u32> {
        u32::try_from(m)
            .ok()
            .filter(|&m| m > 0)
            .ok_or_else(|| anyhow!("multiplicity must be a positive integer, got {m}"))
    };
    let c = match name {
        "coxeter-a" => {
            let m = mult(need(m, "m", name)?)?;
            make_coxeter(CoxeterFamily::A, need(n, "n", name)?, &[m])?
        }
        "coxeter-i2" => {
            let p = need(p, "p", name)?;
            let m1 = need(m1, "m1", name)?;
            let mults = match m2 {
                Some(m2) => vec![m1, m2],
                None => vec![m1],
            };
            make_coxeter(CoxeterFamily::I2(p), 2, &mults)?
        }
        "deformed-a" => deformed_an(need(n, "n", name)?, need(m, "m", name)?)?,
        "deformed-c" => deformed_cn(
            need(n, "n", name)?,
            need(m, "m", name)?,
            need(l, "l", name)?,
        )?,
        "adler-moser-points" => {
            let tau = scalar(&need(tau, "tau", name)?, "tau")?;
            let data = adler_moser_tau(&tau);
            let roots = data
                .exact_roots()
                .ok_or_else(|| anyhow!("roots of W = {} are not exact", data.wronskian))?;
            data.pole_configuration(&roots)?
        }
        "projectivise" => isotropic_projectivisation(&ctx.config()?),
        other => bail!(
            "unknown generator '{other}' (expected coxeter-a, coxeter-i2, deformed-a, \
             deformed-c, adler-moser-points or projectivise)"
        ),
    };
    Ok(Outcome {
        doc: Doc::Raw(c.to_json()),
        pass: true,
    })
}

fn psi(ctx: &Ctx, checks: &[String]) -> Result<Outcome> {
    let c = ctx.config()?;
    for name in checks {
        if !["symmetry", "eigen", "axioms", "bispectral"].contains(&name.as_str()) {
            bail!("unknown check '{name}' (expected symmetry, eigen, axioms or bispectral)");
        }
    }
    let psi = match berest_psi(&c) {
        Ok(psi) => psi,
        Err(BakerError::NonTerminating { steps, .. }) => {
            let mut v = json!({"kind": "psi", "terminates": false, "steps": steps, "pass": false});
            ctx.stamp(&mut v);
            return Ok(Outcome {
                doc: Doc::Report(v),
                pass: false,
            });
        }
        Err(e) => return Err(e.into()),
    };
    let mut v = parse_json(&psi.to_json());
    let mut results = serde_json::Map::new();
    for name in checks {
        let ok = match name.as_str() {
            "eigen" => verify_eigen(&psi, &potential_from_config(&c), ctx.mode, ctx.seed),
            "symmetry" => verify_symmetry(&psi, ctx.mode, ctx.seed)?,
            "bispectral" => verify_bispectral(&psi, ctx.mode, ctx.seed)?,
            _ => {
                let report = verify_ba_axioms(&psi, ctx.mode, ctx.seed)?;
                v["axioms"] = serde_json::to_value(&report.items)?;
                report.pass
            }
        };
        results.insert(name.clone(), json!(ok));
    }
    let pass = results.values().all(|b| b == &json!(true));
    v["kind"] = json!("psi");
    v["terminates"] = json!(true);
    v["checks"] = Value::Object(results);
    v["pass"] = json!(pass);
    ctx.stamp(&mut v);
    Ok(Outcome {
        doc: Doc::Report(v),
        pass,
    })
}

fn integrals(ctx: &Ctx, f_src: &str, max_degree: u32) -> Result<Outcome> {
    let c = ctx.config()?;
    let n = c.dimension();
    let f = fpoly::parse_polynomial(f_src, n).with_context(|| format!("--f '{f_src}'"))?;
    let k_names: Vec<String> = (1..=n).map(|i| format!("k{i}")).collect();
    let l = potential_from_config(&c);
    let op = operator_from_ad_formula(&l, &f)?;
    let comm = op.commutator(&l.diffop());
    let surviving = comm.first_surviving_monomial(max_degree);
    let eigen = match berest_psi(&c) {
        Ok(psi) => verify_operator_eigen(&op, &f, &psi, ctx.mode, ctx.seed),
        Err(BakerError::NonTerminating { .. }) => false,
        Err(e) => return Err(e.into()),
    };
    let quasi = if c.is_linear() {
        Some(is_quasi_invariant(&f, &c)?)
    } else {
        None
    };
    let names = xk_names(n);
    let table: Vec<Value> = op
        .table(&names)
        .into_iter()
        .map(|(index, coefficient)| json!({"index": index, "coefficient": coefficient}))
        .collect();
    let pass = eigen && comm.is_zero();
    let mut v = json!({
        "kind": "integrals",
        "f": f.fmt_with(&k_names),
        "order": op.order(),
        "operator": table,
        "quasi_invariant": quasi,
        "eigen": eigen,
        "commutator_zero": comm.is_zero(),
        "max_degree": max_degree,
        "surviving_monomial": surviving,
        "pass": pass,
    });
    ctx.stamp(&mut v);
    Ok(Outcome {
        doc: Doc::Report(v),
        pass,
    })
}

fn hadamard(ctx: &Ctx) -> Result<Outcome> {
    let c = ctx.config()?;
    match huygens_certificate(&c) {
        Ok(cert) => {
            let mut v = parse_json(&cert.to_json());
            let pass = cert.report.pass && cert.terminates;
            v["kind"] = json!("hadamard");
            v["pass"] = json!(pass);
            Ok(Outcome {
                doc: Doc::Report(v),
                pass,
            })
        }
        Err(HuygensError::Baker(BakerError::NonTerminating { steps, .. })) => Ok(Outcome {
            doc: Doc::Report(json!({
                "kind": "psi", "terminates": false, "steps": steps, "pass": false,
            })),
            pass: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn parse_theta(src: &str, prec: usize) -> Result<Phase> {
    let s: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(at) = s.find("pi") {
        let (before, after) = (&s[..at], &s[at + 2..]);
        let num = match before.strip_suffix('*').unwrap_or(before) {
            "" => "1",
            "-" => "-1",
            b => b,
        };
        let mut q = scalar(num, "theta")?
            .as_rational()
            .ok_or_else(|| anyhow!("theta '{src}': coefficient of pi must be rational"))?;
        if let Some(d) = after.strip_prefix('/') {
            let d: i64 = d
                .parse()
                .map_err(|_| anyhow!("theta '{src}': bad divisor"))?;
            if d == 0 {
                bail!("theta '{src}': zero divisor");
            }
            q /= locuslab_core::scalar::Rational::from_integer(d.into());
        } else if !after.is_empty() {
            bail!("theta '{src}': unexpected '{after}' after pi");
        }
        let theta = HpComplex::from_rational(&q, prec).scale(&pi(prec));
        return Ok(Phase::Angle(theta));
    }
    let x: f64 = s
        .parse()
        .map_err(|_| anyhow!("theta '{src}' is neither a decimal nor a multiple of pi"))?;
    Ok(Phase::angle(x, 0.0))
}

fn onedim(ctx: &Ctx, which: Onedim) -> Result<Outcome> {
    let (v, pass) = match which {
        Onedim::AdlerMoser { m, c, tau } => {
            let data = match (tau, m) {
                (Some(t), _) => adler_moser_tau(&scalar(&t, "tau")?),
                (None, Some(m)) => adler_moser(m, &scalars(&c, "constant")?)?,
                (None, None) => bail!("adler-moser needs --m (with --c) or --tau"),
            };
            let mut v = parse_json(&data.to_json());
            v["kind"] = json!("adler-moser");
            let mut pass = true;
            if let Some(roots) = data.exact_roots() {
                match data.poles(&roots) {
                    Ok(poles) => {
                        let report = verify_1d_locus(&poles, ZeroMode::Exact, ctx.seed)?;
                        v["poles"] = json!(poles
                            .iter()
                            .map(|(z, m)| json!({"point": z.to_string(), "m": m}))
                            .collect::<Vec<_>>());
                        v["locus"] = serde_json::to_value(&report.items)?;
                        pass = report.pass;
                    }
                    Err(e) => {
                        v["poles_error"] = json!(e.to_string());
                        pass = false;
                    }
                }
            }
            v["pass"] = json!(pass);
            (v, pass)
        }
        Onedim::Xi { m, xi } => {
            let data = ba_from_xi(m, &scalars(&xi, "xi")?)?;
            let defect = data.schrodinger_defect();
            let mut v = parse_json(&data.to_json());
            v["kind"] = json!("xi");
            v["schrodinger_defect"] = json!(defect);
            v["pass"] = json!(defect.is_none());
            (v, defect.is_none())
        }
        Onedim::BerestLutsenko { k, theta, unit } => {
            let wp = ctx.precision + 64;
            let phases: Vec<Phase> = if !unit.is_empty() {
                scalars(&unit, "unit")?
                    .into_iter()
                    .map(Phase::Unit)
                    .collect()
            } else if !theta.is_empty() {
                theta
                    .iter()
                    .map(|t| parse_theta(t, wp))
                    .collect::<Result<_>>()?
            } else {
                vec![Phase::zero(); k.len()]
            };
            let bl = berest_lutsenko(&k, &phases, ctx.precision)?;
            let mut v = parse_json(&bl.to_json());
            v["kind"] = json!("berest-lutsenko");
            (v, bl.pass())
        }
    };
    Ok(Outcome {
        doc: Doc::Report(v),
        pass,
    })
}

fn report(ctx: &Ctx) -> Result<Outcome> {
    let (name, src) = ctx.read()?;
    let v: Value = serde_json::from_str(&src)
        .map_err(|e| anyhow!("{name}: line {}, column {}: {e}", e.line(), e.column()))?;
    let text = render::render(&v).map_err(|e| anyhow!("{name}: {e}"))?;
    let pass = v.get("pass").and_then(Value::as_bool).unwrap_or(true);
    Ok(Outcome {
        doc: Doc::Raw(text),
        pass,
    })
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("cannot start worker pool")?;
    }
    let ctx = Ctx {
        mode: cli.mode,
        seed: seed_from_env(cli.seed)?,
        precision: cli.precision,
        input: cli.input,
    };
    let outcome = match cli.command {
        Command::Verify { via_2d } => verify(&ctx, via_2d)?,
        Command::Generate {
            name,
            n,
            m,
            l,
            p,
            m1,
            m2,
            tau,
        } => generate(&ctx, &name, n, m, l, p, m1, m2, tau)?,
        Command::Psi { check } => psi(&ctx, &check)?,
        Command::Integrals { f, max_degree } => integrals(&ctx, &f, max_degree)?,
        Command::Hadamard => hadamard(&ctx)?,
        Command::Onedim { which } => onedim(&ctx, which)?,
        Command::Report => report(&ctx)?,
    };
    let text = match (&outcome.doc, cli.format) {
        (Doc::Raw(s), Format::Json) => s.clone(),
        (Doc::Raw(s), Format::Text) if s.starts_with('{') => render::render(&parse_json(s))?,
        (Doc::Raw(s), Format::Text) => s.clone(),
        (Doc::Report(v), Format::Json) => {
            let mut s = serde_json::to_string_pretty(v)?;
            s.push('\n');
            s
        }
        (Doc::Report(v), Format::Text) => render::render(v)?,
    };
    write_out(cli.out.as_deref(), &text)?;
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
