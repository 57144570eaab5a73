use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use etaid::admissible::{check_n, find_n, phi_criterion_report};
use etaid::expr::{expand_str, verify_identity};
use etaid::modular::cusps;
use etaid::pipeline::{cusp_orders, derive_identity, dissect, generators, DeriveOptions, Identity, Status};
use etaid::{GenEtaQuotient, PartitionFunctionSpec};

#[derive(Parser)]
#[command(name = "etaid", version, about = "Ramanujan-type identities from generalized eta-quotients")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Derive and certify an identity for sum a(mn+t) q^n.
    Derive {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short)]
        m: u64,
        #[arg(short)]
        t: u64,
        /// Certify at least this many coefficients.
        #[arg(long, default_value_t = 0)]
        order: i64,
        #[arg(long, default_value_t = etaid::admissible::DEFAULT_PHI_BOX)]
        phi_box: i64,
        /// Coefficients checked past the pole order.
        #[arg(long, default_value_t = 50)]
        guard: i64,
        /// Use this z, given as {"a": {"d": e}, "ag": {"d/g": e}}.
        #[arg(long)]
        z: Option<String>,
        /// Write the identity as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the level and prefactor conditions.
        #[arg(long)]
        explain: bool,
    },
    /// Compare two expressions coefficient by coefficient.
    Verify {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, default_value_t = 100)]
        order: i64,
    },
    /// Derive every slice of an m-dissection.
    Dissect {
        #[arg(long)]
        spec: PathBuf,
        #[arg(short)]
        m: u64,
        #[arg(long, default_value_t = 200)]
        order: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand an expression below q^order.
    Expand {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 20)]
        order: i64,
    },
    /// Cusps of Gamma1(N) with widths and lambda/(mu eps) forms.
    Cusps {
        n: u64,
        #[arg(long)]
        json: bool,
    },
    /// Generators of the monoid of eta-quotients with poles only at infinity.
    Generators {
        n: u64,
        #[arg(long)]
        json: bool,
    },
}

fn read_spec(path: &PathBuf) -> Result<PartitionFunctionSpec> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(PartitionFunctionSpec::from_json(&text)?)
}

fn parse_quotient(text: &str, n: u64) -> Result<GenEtaQuotient> {
    let v: Value = serde_json::from_str(text).context("--z is not JSON")?;
    let obj = v.as_object().context("--z must be an object")?;
    let int = |x: &Value| x.as_i64().context("exponents must be integers");
    let mut plain = vec![];
    let mut gen = vec![];
    for (key, val) in obj {
        let m = val.as_object().with_context(|| format!("{key} must be an object"))?;
        match key.as_str() {
            "a" => {
                for (d, e) in m {
                    plain.push((d.parse()?, int(e)?));
                }
            }
            "ag" => {
                for (k, e) in m {
                    let (d, g) = k.split_once('/').with_context(|| format!("bad key {k}"))?;
                    gen.push(((d.parse()?, g.parse()?), int(e)?));
                }
            }
            "N" => {}
            other => bail!("unknown key {other} in --z"),
        }
    }
    Ok(GenEtaQuotient::from_parts(n, &plain, &gen))
}

fn write_json(path: &PathBuf, v: &Value) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(v)? + "\n").with_context(|| format!("writing {}", path.display()))
}

fn report(id: &Identity) {
    println!("N = {}", id.n.map_or("?".into(), |n| n.to_string()));
    if let Some(p) = &id.phi {
        println!("phi = {p}");
    }
    if let Some(h) = &id.h {
        println!("h = {h}");
    }
    if let Some(b) = &id.basis {
        print!("{b}");
    }
    if let Some(p) = id.pole {
        println!("pole of hF = {p}");
    }
    if let Some(c) = id.certified_to {
        println!("certified to q^{c}");
    }
    println!("status: {}", id.status);
    if id.rhs.is_some() {
        println!("{id}");
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.cmd {
        Cmd::Derive { spec, m, t, order, phi_box, guard, z, out, explain } => {
            let spec = read_spec(&spec)?;
            if m == 0 || t >= m {
                bail!("need 0 <= t < m");
            }
            let n = find_n(&spec, m, t);
            if explain {
                print!("{}", check_n(&spec, m, t, n));
            }
            let z = z.map(|s| parse_quotient(&s, n)).transpose()?;
            let opts = DeriveOptions { guard, order, phi_box, z };
            let id = derive_identity(&spec, m, t, &opts);
            if explain {
                if let Some(p) = &id.phi {
                    println!("prefactor conditions for {p}:");
                    print!("{}", phi_criterion_report(&spec, m, t, n, p));
                }
                if let Some(h) = &id.h {
                    for (c, o) in cusp_orders(h, n) {
                        println!("  ord_{c}(h) = {o}");
                    }
                }
            }
            report(&id);
            if let Some(path) = out {
                write_json(&path, &id.to_json())?;
            }
            Ok(id.is_certified())
        }
        Cmd::Verify { lhs, rhs, order } => {
            let r = verify_identity(&lhs, &rhs, order)?;
            match &r.mismatch {
                None => println!("equal below q^{order}"),
                Some((e, a, b)) => println!("differ at q^{e}: lhs {a}, rhs {b}"),
            }
            println!("{}", r.to_json());
            Ok(r.equal())
        }
        Cmd::Dissect { spec, m, order, out } => {
            let spec = read_spec(&spec)?;
            if m == 0 {
                bail!("need m >= 1");
            }
            let d = dissect(&spec, m, order, &DeriveOptions::default());
            for id in &d.slices {
                println!("t = {}: {}", id.t, id);
            }
            match d.interleaved_to {
                Some(k) => println!("slices reproduce the product below q^{k}"),
                None => println!("dissection not certified"),
            }
            if let Some(path) = out {
                write_json(&path, &d.to_json())?;
            }
            Ok(d.interleaved_to.is_some() && d.slices.iter().all(|s| !matches!(s.status, Status::Failed { .. })))
        }
        Cmd::Expand { expr, order } => {
            println!("{}", expand_str(&expr, order)?);
            Ok(true)
        }
        Cmd::Cusps { n, json } => {
            if n == 0 {
                bail!("N must be positive");
            }
            let cs = cusps(n);
            if json {
                println!("{}", serde_json::to_string_pretty(&cs.iter().map(|c| c.to_json()).collect::<Vec<_>>())?);
            } else {
                println!("{:>8} {:>6} {:>14}", "cusp", "width", "lambda/(mu eps)");
                for c in &cs {
                    println!("{:>8} {:>6} {:>14}", c.cusp.to_string(), c.width, format!("{}/({}*{})", c.lambda, c.mu, c.eps));
                }
            }
            Ok(true)
        }
        Cmd::Generators { n, json } => {
            if n == 0 {
                bail!("N must be positive");
            }
            let gens = generators(n)?;
            if json {
                let v: Vec<Value> = gens
                    .iter()
                    .map(|g| {
                        let mut j = g.to_json();
                        j["expansion"] = json!(g.expansion(3).to_string());
                        j
                    })
                    .collect();
                println!("{}", serde_json::to_string_pretty(&v)?);
            } else {
                let cs: Vec<String> = cusps(n).iter().map(|c| c.cusp.to_string()).collect();
                println!("cusps: {}", cs.join(" "));
                for g in gens.iter() {
                    let ords: Vec<String> = g.orders.iter().map(|o| o.to_string()).collect();
                    println!("{}\n  orders [{}]\n  {}", g.quotient, ords.join(" "), g.expansion(3));
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
