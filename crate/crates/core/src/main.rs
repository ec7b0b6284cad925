use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use grpinv::iso::embeds;
use grpinv::lattice::Subgroup;
use grpinv::report::{ResultDocument, SubgroupDoc};
use grpinv::verify::{verify, Suite, VerifyOptions, VerifyReport};
use grpinv::{ic, parse_spec, sigma, sigma_c, Analyzed, Error, InvariantReport, Limits};

/// Covering numbers and injective hom-complexity of finite groups.
#[derive(Parser)]
#[command(name = "grpinv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// Emit one JSON document instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Include the cover certificate
    #[arg(long, global = true)]
    certificate: bool,
    /// Largest group order to construct (default 128; for verify, caps every suite bound)
    #[arg(long, global = true, value_name = "N")]
    max_order: Option<usize>,
    /// Solver node budget
    #[arg(long, global = true, value_name = "N", default_value_t = 100_000_000)]
    budget: u64,
    #[arg(long, global = true, hide = true)]
    inject_fault: bool,
}

#[derive(Subcommand)]
enum Command {
    /// IC(G;H), the injective hom-complexity
    Ic { g: String, h: String },
    /// σ(G), the covering number
    Sigma { g: String },
    /// σ_c(G), the cyclic covering number
    Sigmac { g: String },
    /// List subgroups in canonical order
    Lattice {
        g: String,
        /// Only maximal subgroups
        #[arg(long)]
        maximal: bool,
        /// Only cyclic subgroups
        #[arg(long)]
        cyclic: bool,
    },
    /// Does K have an injective homomorphism into H?
    Embeds { k: String, h: String },
    /// Run the theorem-verification sweep
    Verify {
        /// Comma-separated suites (default: all)
        #[arg(long, value_delimiter = ',')]
        suite: Vec<String>,
    },
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(if e.is_limit() { 2 } else { 1 })
}

fn limits(flags: &Flags) -> Limits {
    let mut l = Limits::default()
        .with_max_order(flags.max_order.unwrap_or(Limits::DEFAULT_MAX_ORDER))
        .with_solver_nodes(flags.budget);
    l.fault_injection = flags.inject_fault;
    l
}

fn analyze(text: &str, limits: &Limits) -> grpinv::Result<Analyzed> {
    Analyzed::from_spec(&parse_spec(text)?, limits)
}

fn print_report(report: &InvariantReport, flags: &Flags, start: Instant, limits: &Limits) {
    let doc = ResultDocument::new(
        report,
        flags.certificate,
        start.elapsed().as_millis() as u64,
        limits.max_order,
    );
    if flags.json {
        println!("{}", serde_json::to_string(&doc).expect("serializable"));
        return;
    }
    match report.reason {
        Some(reason) if !report.value.is_finite() => println!("infinite ({reason})"),
        _ => println!("{}", report.value),
    }
    for s in doc.certificate.iter().flatten() {
        match &s.image {
            Some(image) => println!("  {} {:?} -> {:?}", s.order, s.elements, image),
            None => println!("  {} {:?}", s.order, s.elements),
        }
    }
}

fn invariant(command: &Command, flags: &Flags) -> grpinv::Result<()> {
    let start = Instant::now();
    let limits = limits(flags);
    let report = match command {
        Command::Ic { g, h } => {
            let (g, h) = (analyze(g, &limits)?, analyze(h, &limits)?);
            ic(&g, &h, &limits)?
        }
        Command::Sigma { g } => sigma(&analyze(g, &limits)?, &limits)?,
        Command::Sigmac { g } => sigma_c(&analyze(g, &limits)?, &limits)?,
        _ => unreachable!("not an invariant command"),
    };
    print_report(&report, flags, start, &limits);
    Ok(())
}

#[derive(Serialize)]
struct LatticeDoc<'a> {
    operand: &'a str,
    stratum: &'a str,
    subgroups: Vec<SubgroupDoc>,
    engine_version: &'a str,
    max_order: usize,
}

fn lattice(g: &str, maximal: bool, cyclic: bool, flags: &Flags) -> grpinv::Result<()> {
    let limits = limits(flags);
    let a = analyze(g, &limits)?;
    let (stratum, subs): (&str, Vec<&Subgroup>) = match (maximal, cyclic) {
        (true, true) => ("maximal_cyclic", a.lattice.maximal_cyclic_subgroups().collect()),
        (true, false) => ("maximal", a.lattice.maximal_subgroups().collect()),
        (false, true) => (
            "cyclic",
            a.lattice.all().iter().filter(|s| s.is_cyclic(&a.group)).collect(),
        ),
        (false, false) => ("all", a.lattice.all().iter().collect()),
    };
    let docs: Vec<SubgroupDoc> = subs
        .iter()
        .map(|s| SubgroupDoc {
            order: s.order(),
            elements: s.elements(),
            image: None,
        })
        .collect();
    if flags.json {
        let doc = LatticeDoc {
            operand: a.label(),
            stratum,
            subgroups: docs,
            engine_version: grpinv::ENGINE_VERSION,
            max_order: limits.max_order,
        };
        println!("{}", serde_json::to_string(&doc).expect("serializable"));
    } else {
        for d in docs {
            println!("{} {:?}", d.order, d.elements);
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct EmbedsDoc<'a> {
    operands: [&'a str; 2],
    embeds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    image: Option<Vec<usize>>,
    engine_version: &'a str,
    max_order: usize,
}

fn embeds_cmd(k: &str, h: &str, flags: &Flags) -> grpinv::Result<()> {
    let limits = limits(flags);
    let (k, h) = (analyze(k, &limits)?, analyze(h, &limits)?);
    let w = embeds(&k.group, &h.group, &h.lattice);
    if flags.json {
        let doc = EmbedsDoc {
            operands: [k.label(), h.label()],
            embeds: w.is_some(),
            image: w.filter(|_| flags.certificate).map(|w| w.image),
            engine_version: grpinv::ENGINE_VERSION,
            max_order: limits.max_order,
        };
        println!("{}", serde_json::to_string(&doc).expect("serializable"));
    } else {
        println!("{}", if w.is_some() { "yes" } else { "no" });
        if let Some(w) = w.filter(|_| flags.certificate) {
            println!("  {:?} -> {:?}", w.source, w.image);
        }
    }
    Ok(())
}

fn print_verify(report: &VerifyReport) {
    for s in &report.suites {
        let status = if !s.passed() {
            "FAIL"
        } else if !s.skipped.is_empty() {
            "INCOMPLETE"
        } else {
            "PASS"
        };
        println!(
            "{} (bound {}): {status}, {} checks, {} certificates validated, {} ms",
            s.suite, s.bound, s.checks, s.certificates_validated, s.elapsed_ms
        );
        for f in &s.failures {
            println!("  fail: {f}");
        }
        for f in &s.skipped {
            println!("  skipped: {f}");
        }
        for f in &s.flagged {
            println!("  flagged: {f}");
        }
    }
}

fn verify_cmd(suites: &[String], flags: &Flags) -> Result<i32, Error> {
    let suites = if suites.is_empty() {
        Suite::ALL.to_vec()
    } else {
        suites
            .iter()
            .map(|s| s.parse())
            .collect::<grpinv::Result<Vec<Suite>>>()?
    };
    let threads = match std::env::var("GRPINV_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("GRPINV_THREADS={v:?}")))?,
        Err(_) => 0,
    };
    let mut limits = Limits::default().with_solver_nodes(flags.budget);
    limits.fault_injection = flags.inject_fault;
    let opts = VerifyOptions {
        suites,
        max_order: flags.max_order,
        limits,
        threads,
    };
    let report = verify(&opts)?;
    if flags.json {
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        print_verify(&report);
    }
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let flags = &cli.flags;
    let result = match &cli.command {
        c @ (Command::Ic { .. } | Command::Sigma { .. } | Command::Sigmac { .. }) => invariant(c, flags).map(|_| 0),
        Command::Lattice { g, maximal, cyclic } => lattice(g, *maximal, *cyclic, flags).map(|_| 0),
        Command::Embeds { k, h } => embeds_cmd(k, h, flags).map(|_| 0),
        Command::Verify { suite } => verify_cmd(suite, flags),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => fail(&e),
    }
}
