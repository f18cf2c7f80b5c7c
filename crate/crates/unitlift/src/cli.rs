//! `unitlift` subcommands. [`run`] does everything except touching the
//! process: it takes arguments and output streams and returns the exit code.

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use unitlift_core::oracle::{self, EnumerableRing};
use unitlift_core::{
    count_group_ring_units, count_matrix_units, invert_matrix_crt, invert_zmg_unit, lift_inverse, quotient_inverse,
    zmg_unit_count, CncChain, CrtBasis, Element, Error as CoreError, Ring, RingKind, UnitCertificate,
};

use crate::bench::{bench_inversion, BenchConfig};
use crate::json::{chain_to_json, count_to_json, element_to_json, parse_chain, parse_element, parse_ring};
use crate::Error;

/// Environment variable overriding the enumeration cap.
pub const CAP_VAR: &str = "UNITLIFT_CAP";

#[derive(Debug, Parser)]
#[command(name = "unitlift", version, about = "Units and inverses in finite rings by lifting from quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format; `bench` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
struct RingArgs {
    /// Ring descriptor: inline JSON or a path to a JSON file.
    #[arg(long)]
    ring: String,
    /// Chain of ideals (inline JSON or path). Defaults to the radical chain.
    #[arg(long)]
    chain: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invert an element and print its certificate.
    Invert {
        #[command(flatten)]
        ring: RingArgs,
        /// Element as nested JSON arrays.
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
    /// List every unit with its inverse.
    Enumerate {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Count units as |(R/N_1)*| |N_1|.
    Count {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Check the chain and the counting identities against brute force.
    Verify {
        #[command(flatten)]
        ring: RingArgs,
    },
    /// Time adjugate, Gauss-Jordan and lifted inversion on random matrices.
    Bench {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        p: u64,
        #[arg(long, default_value_t = 3)]
        k: u32,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the markdown summary here instead of the error stream.
        #[arg(long)]
        summary: Option<std::path::PathBuf>,
    },
    /// Per-level residues of the lifting process.
    LiftTrace {
        #[command(flatten)]
        ring: RingArgs,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
    },
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "unitlift: {e}");
            e.exit_code()
        }
    }
}

fn read_inline_or_file(arg: &str) -> Result<String, Error> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Error::Io(format!("cannot read {arg}: {e}")))
}

fn enumeration_cap() -> Result<u128, Error> {
    match std::env::var(CAP_VAR) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Usage(format!("{CAP_VAR}={v} is not a non-negative integer"))),
        Err(_) => Ok(oracle::DEFAULT_CAP),
    }
}

struct Context {
    ring: Arc<Ring>,
    chain: CncChain,
    explicit_chain: bool,
}

fn context(args: &RingArgs) -> Result<Context, Error> {
    let ring = parse_ring(&read_inline_or_file(&args.ring)?)?;
    let (chain, explicit_chain) = match &args.chain {
        Some(c) => (parse_chain(&ring, &read_inline_or_file(c)?)?, true),
        None => (CncChain::radical(&ring)?, false),
    };
    Ok(Context { ring, chain, explicit_chain })
}

fn emit(out: &mut dyn Write, value: &Value) -> Result<(), Error> {
    let text = serde_json::to_string(value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{text}").map_err(|e| Error::Io(e.to_string()))
}

fn put(out: &mut dyn Write, text: &str) -> Result<(), Error> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Io(e.to_string()))
}

/// CSV field for a JSON value, quoted when it contains commas.
fn csv_field(v: &Value) -> String {
    let s = v.to_string();
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Error> {
    let format = cli.format;
    let fmt = format.unwrap_or(Format::Json);
    match cli.command {
        Command::Invert { ring, element } => {
            let ctx = context(&ring)?;
            let x = parse_element(&ctx.ring, &element)?;
            let report = invert(&ctx, &x)?;
            match fmt {
                Format::Json => emit(out, &report),
                Format::Csv => put(
                    out,
                    &format!("element,inverse\n{},{}\n", csv_field(&report["element"]), csv_field(&report["inverse"])),
                ),
                Format::Text => {
                    put(out, &format!("{} in {}: inverse {}\n", report["element"], ctx.ring, report["inverse"]))
                }
            }
        }
        Command::Enumerate { ring } => {
            let ctx = context(&ring)?;
            let units = enumerate(&ctx)?;
            match fmt {
                Format::Json => {
                    let list: Vec<Value> = units.iter().map(|(u, v)| json!({"unit": u, "inverse": v})).collect();
                    emit(out, &json!({"ring": ctx.ring.to_string(), "count": units.len(), "units": list}))
                }
                Format::Csv => {
                    let mut text = String::from("unit,inverse\n");
                    for (u, v) in &units {
                        text.push_str(&format!("{},{}\n", csv_field(u), csv_field(v)));
                    }
                    put(out, &text)
                }
                Format::Text => {
                    let mut text = format!("{} has {} units\n", ctx.ring, units.len());
                    for (u, v) in &units {
                        text.push_str(&format!("{u} * {v} = 1\n"));
                    }
                    put(out, &text)
                }
            }
        }
        Command::Count { ring } => {
            let ctx = context(&ring)?;
            let report = count(&ctx)?;
            match fmt {
                Format::Json => emit(out, &report),
                Format::Csv => put(
                    out,
                    &format!(
                        "count,quotient_units,ideal_size,formula\n{},{},{},{}\n",
                        report["count"], report["quotient_units"], report["ideal_size"], report["formula"]
                    ),
                ),
                Format::Text => put(
                    out,
                    &format!(
                        "|{}*| = {} = {} * {} ({})\n",
                        ctx.ring,
                        report["count"],
                        report["quotient_units"],
                        report["ideal_size"],
                        report["formula"].as_str().unwrap_or("")
                    ),
                ),
            }
        }
        Command::Verify { ring } => {
            let ctx = context(&ring)?;
            let report = verify(&ctx)?;
            match fmt {
                Format::Json => emit(out, &report)?,
                Format::Csv => {
                    let mut text = String::from("check,passed\n");
                    for c in report["checks"].as_array().into_iter().flatten() {
                        text.push_str(&format!("{},{}\n", c["name"].as_str().unwrap_or(""), c["passed"]));
                    }
                    put(out, &text)?;
                }
                Format::Text => put(out, &verify_summary(&report))?,
            }
            if report["passed"] != Value::Bool(true) {
                let _ = writeln!(err, "unitlift: verification failed for {}", ctx.ring);
                return Err(CoreError::Internal("a verified identity does not hold".into()).into());
            }
            Ok(())
        }
        Command::Bench { n, p, k, trials, seed, threads, summary } => {
            let report = bench_inversion(BenchConfig { n, p, k, trials, seed, threads })?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => put(out, &report.to_csv())?,
                Format::Json => emit(out, &serde_json::to_value(&report).map_err(|e| Error::Io(e.to_string()))?)?,
                Format::Text => put(out, &report.to_markdown())?,
            }
            match summary {
                Some(path) => std::fs::write(&path, report.to_markdown())
                    .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display())))?,
                None if format != Some(Format::Text) => {
                    let _ = err.write_all(report.to_markdown().as_bytes());
                }
                None => {}
            }
            Ok(())
        }
        Command::LiftTrace { ring, element } => {
            let ctx = context(&ring)?;
            let x = parse_element(&ctx.ring, &element)?;
            let cert = lift(&ctx, &x)?;
            let levels = trace(&ctx.chain, &cert);
            match fmt {
                Format::Json => emit(out, &Value::Array(levels)),
                Format::Csv => {
                    let mut text = String::from("level,exponent,divisor,power,residue\n");
                    for l in &levels {
                        text.push_str(&format!(
                            "{},{},{},{},{}\n",
                            l["level"],
                            l["exponent"],
                            l["divisor"],
                            csv_field(&l["power"]),
                            csv_field(&l["residue"])
                        ));
                    }
                    put(out, &text)
                }
                Format::Text => {
                    let mut text = String::new();
                    for l in &levels {
                        text.push_str(&format!(
                            "level {}: (xg)^{} = {} = {} mod {}\n",
                            l["level"], l["exponent"], l["power"], l["residue"], l["divisor"]
                        ));
                    }
                    put(out, &text)
                }
            }
        }
    }
}

fn lift(ctx: &Context, x: &Element) -> Result<UnitCertificate, Error> {
    let g = quotient_inverse(x, &ctx.chain)?
        .ok_or_else(|| CoreError::NotAUnit(format!("{x} is not a unit modulo N_1 in {}", ctx.ring)))?;
    Ok(lift_inverse(x, &g, &ctx.chain)?)
}

fn certificate_json(cert: &UnitCertificate) -> Value {
    json!({
        "method": "lift",
        "exponent": count_to_json(cert.exponent()),
        "quotient_inverse": element_to_json(cert.quotient_inverse()),
        "product": element_to_json(cert.product()),
        "lifted_power": element_to_json(cert.lifted_power()),
        "trace": cert.trace().iter().map(element_to_json).collect::<Vec<_>>(),
    })
}

/// Composite coefficient modulus that is not a prime power.
fn composite(ring: &Ring) -> bool {
    ring.modulus_factors().len() > 1
}

fn invert(ctx: &Context, x: &Element) -> Result<Value, Error> {
    let ring = &ctx.ring;
    let over_zmod = |base: &Ring| matches!(base.kind(), RingKind::ZMod);
    if !ctx.explicit_chain && composite(ring) {
        match ring.kind() {
            RingKind::Matrix { base, .. } if over_zmod(base) => {
                let basis = CrtBasis::new(ring.modulus())?;
                let crt = invert_matrix_crt(x, &basis)?;
                let components: Vec<Value> = crt
                    .components
                    .iter()
                    .zip(basis.components())
                    .map(|(cert, c)| {
                        json!({
                            "modulus": c.modulus,
                            "element": element_to_json(cert.element()),
                            "inverse": element_to_json(cert.inverse()),
                            "certificate": certificate_json(cert),
                        })
                    })
                    .collect();
                return Ok(json!({
                    "inverse": element_to_json(&crt.inverse),
                    "element": element_to_json(x),
                    "ring": ring.to_string(),
                    "certificate": {"method": "crt", "components": components},
                }));
            }
            RingKind::GroupRing { group, base } if over_zmod(base) && group.is_abelian() => {
                let basis = CrtBasis::new(ring.modulus())?;
                let cert = invert_zmg_unit(x)?;
                let components: Vec<Value> = cert
                    .component_inverses
                    .iter()
                    .zip(basis.components())
                    .map(|(inv, c)| json!({"modulus": c.modulus, "inverse": element_to_json(inv)}))
                    .collect();
                return Ok(json!({
                    "inverse": element_to_json(&cert.inverse),
                    "element": element_to_json(x),
                    "ring": ring.to_string(),
                    "certificate": {
                        "method": "crt",
                        "exponents": cert.exponents.iter().map(|e| count_to_json(*e)).collect::<Vec<_>>(),
                        "components": components,
                    },
                }));
            }
            _ => {}
        }
    }
    let cert = lift(ctx, x)?;
    let mut certificate = certificate_json(&cert);
    certificate["chain"] = chain_to_json(&ctx.chain);
    Ok(json!({
        "inverse": element_to_json(cert.inverse()),
        "element": element_to_json(x),
        "ring": ring.to_string(),
        "certificate": certificate,
    }))
}

fn enumerate(ctx: &Context) -> Result<Vec<(Value, Value)>, Error> {
    let oracle = EnumerableRing::with_cap(ctx.ring.clone(), enumeration_cap()?)?;
    let mut units = Vec::new();
    for x in oracle.elements() {
        if let Some(g) = quotient_inverse(&x, &ctx.chain)? {
            let cert = lift_inverse(&x, &g, &ctx.chain)?;
            units.push((element_to_json(&x), element_to_json(cert.inverse())));
        }
    }
    Ok(units)
}

fn ideal_size(ctx: &Context) -> Result<u128, Error> {
    ctx.chain.first().size().ok_or_else(|| CoreError::Overflow("|N_1| does not fit in 128 bits".into()).into())
}

fn count(ctx: &Context) -> Result<Value, Error> {
    let ring = &ctx.ring;
    let ideal = ideal_size(ctx)?;
    let cap = enumeration_cap()?;
    let (total, formula) = match ring.kind() {
        RingKind::Matrix { base, .. } if !ctx.explicit_chain && base.is_scalar() => {
            (count_matrix_units(ring, &CncChain::radical(base)?)?, "|GL_n(R/N_1)| |N_1|^(n^2)")
        }
        RingKind::GroupRing { group, base } if !ctx.explicit_chain && matches!(base.kind(), RingKind::ZMod) => {
            (zmg_unit_count(ring.modulus(), group)?, "(m/P)^|G| prod |(Z_p G)*|")
        }
        RingKind::GroupRing { group, base } if !ctx.explicit_chain && base.is_local_scalar() => {
            (count_group_ring_units(base, &CncChain::radical(base)?, group)?, "|((R/N_1)G)*| |N_1|^|G|")
        }
        _ => {
            let first = ctx.chain.first();
            let quotient = if first.is_zero() { ring.clone() } else { first.quotient_ring()? };
            let units = oracle::count_units(&quotient, cap)?;
            (units.checked_mul(ideal).ok_or_else(|| CoreError::Overflow("unit count".into()))?, "|(R/N_1)*| |N_1|")
        }
    };
    if total % ideal != 0 {
        return Err(CoreError::Internal(format!("{total} units is not a multiple of |N_1| = {ideal}")).into());
    }
    Ok(json!({
        "count": count_to_json(total),
        "ring": ring.to_string(),
        "quotient_units": count_to_json(total / ideal),
        "ideal_size": count_to_json(ideal),
        "formula": formula,
    }))
}

fn check(name: &str, passed: bool, detail: Value) -> Value {
    json!({"name": name, "passed": passed, "detail": detail})
}

fn verify(ctx: &Context) -> Result<Value, Error> {
    let ring = &ctx.ring;
    let cap = enumeration_cap()?;
    let mut checks = Vec::new();

    let validation = ctx.chain.validate_with_cap(cap);
    checks.push(check("cnc_condition", validation.passed(), json!(validation.failures())));

    let card = oracle::verify_cardinality_with_cap(&ctx.chain, cap)?;
    let levels: Vec<Value> = card
        .levels
        .iter()
        .map(|l| {
            json!({
                "level": l.level,
                "units_below": count_to_json(l.units_below),
                "units_above": count_to_json(l.units_above),
                "index": count_to_json(l.index),
                "holds": l.holds(),
            })
        })
        .collect();
    checks.push(check(
        "cardinality",
        card.passed(),
        json!({
            "units": count_to_json(card.units),
            "quotient_units": count_to_json(card.quotient_units),
            "ideal_size": count_to_json(card.ideal_size),
            "levels": levels,
        }),
    ));

    let oracle = EnumerableRing::with_cap(ring.clone(), cap)?;
    let brute = oracle.enumerate_units()?;
    let mut mismatches = Vec::new();
    let mut engine_units = 0usize;
    for x in oracle.elements() {
        if let Some(g) = quotient_inverse(&x, &ctx.chain)? {
            engine_units += 1;
            let cert = lift_inverse(&x, &g, &ctx.chain)?;
            let expected = brute.binary_search_by(|(u, _)| u.coords().cmp(x.coords())).ok().map(|i| &brute[i].1);
            if expected != Some(cert.inverse()) {
                mismatches.push(element_to_json(&x));
            }
        }
    }
    let agree = mismatches.is_empty() && engine_units == brute.len();
    checks.push(check("engine_matches_oracle", agree, json!({"units": brute.len(), "mismatches": mismatches})));

    let formula = match ring.kind() {
        RingKind::Matrix { base, .. } if base.is_scalar() && !ctx.explicit_chain => {
            Some(count_matrix_units(ring, &CncChain::radical(base)?)?)
        }
        RingKind::GroupRing { group, base } if matches!(base.kind(), RingKind::ZMod) => {
            Some(zmg_unit_count(ring.modulus(), group)?)
        }
        _ => None,
    };
    if let Some(predicted) = formula {
        checks.push(check(
            "counting_formula",
            predicted == card.units,
            json!({"predicted": count_to_json(predicted), "enumerated": count_to_json(card.units)}),
        ));
    }

    let mut findings = Vec::new();
    if let RingKind::Gaussian { p, k } = ring.kind() {
        let (p, k) = (*p as u128, *k);
        let printed = (p * p - 1) * p.pow(k);
        let product = (p * p - 1) * p.pow(2 * (k - 1));
        findings.push(json!({
            "claim": "(p^2-1) p^k",
            "value": count_to_json(printed),
            "matches": printed == card.units,
        }));
        findings.push(json!({
            "claim": "(p^2-1) p^(2(k-1))",
            "value": count_to_json(product),
            "matches": product == card.units,
        }));
    }

    let passed = checks.iter().all(|c| c["passed"] == Value::Bool(true));
    Ok(json!({
        "ring": ring.to_string(),
        "passed": passed,
        "checks": checks,
        "findings": findings,
    }))
}

fn verify_summary(report: &Value) -> String {
    let mut text = format!("verify {}\n", report["ring"].as_str().unwrap_or(""));
    for c in report["checks"].as_array().into_iter().flatten() {
        let mark = if c["passed"] == Value::Bool(true) { "PASS" } else { "FAIL" };
        text.push_str(&format!("  {mark} {}\n", c["name"].as_str().unwrap_or("")));
    }
    for f in report["findings"].as_array().into_iter().flatten() {
        let verdict = if f["matches"] == Value::Bool(true) { "matches" } else { "does not match" };
        text.push_str(&format!("  count formula {} = {} {verdict}\n", f["claim"].as_str().unwrap_or(""), f["value"]));
    }
    text
}

/// `(x g)^{s_1...s_i}` in `R` and its image mod `N_{i+1}`, level by level.
fn trace(chain: &CncChain, cert: &UnitCertificate) -> Vec<Value> {
    let mut power = cert.product().clone();
    let mut exponent: u128 = 1;
    let mut levels = Vec::with_capacity(chain.len());
    for (i, (ideal, residue)) in chain.ideals().iter().zip(cert.trace()).enumerate() {
        if i > 0 {
            let s = chain.characteristics()[i - 1];
            power = power.pow(s as u128);
            exponent *= s as u128;
        }
        levels.push(json!({
            "level": i + 1,
            "exponent": count_to_json(exponent),
            "divisor": ideal.divisor(),
            "power": element_to_json(&power),
            "residue": element_to_json(residue),
        }));
    }
    levels
}
