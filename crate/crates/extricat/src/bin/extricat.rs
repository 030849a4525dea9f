//! Thin command-line front end: parse a quiver spec, run one library
//! operation, print a text or JSON report, exit with the suite status.
//!
//! Exit codes: 0 pass, 1 violation, 2 usage or parse error, 3 pass with
//! window-limited skips.

use clap::{Parser, Subcommand};
use extricat::report::{
    cmd_catalog, cmd_filt, cmd_filt_derived, cmd_semibricks, load_backend, load_derived,
    verify_axioms, verify_bijection, verify_cross_backend, verify_example_46, verify_example_59,
    verify_lemmas, BackendKind, SessionConfig,
};

#[derive(Parser)]
#[command(name = "extricat", version, about = "exact computations with semibricks, filtration subcategories and cotorsion pairs in small extriangulated categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Path to the quiver spec (JSON)
    #[arg(long, global = true)]
    spec: Option<String>,

    /// Field modulus override (prime); the spec file's value otherwise
    #[arg(long, global = true)]
    p: Option<u32>,

    /// Backend: module category or derived shift window
    #[arg(long, global = true, default_value = "module")]
    backend: String,

    /// Derived shift window as lo:hi
    #[arg(long, global = true, default_value = "-3:2")]
    window: String,

    /// Emit the report as JSON
    #[arg(long, global = true)]
    json: bool,

    /// Seed for the sampled diagnostics
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Cap on the number of catalog indecomposables
    #[arg(long, global = true, default_value_t = 256)]
    catalog_cap: usize,

    /// Cap on E-group enumeration size
    #[arg(long, global = true, default_value_t = 4096)]
    e_cap: u64,

    /// Summand bound for closure iterations
    #[arg(long, global = true, default_value_t = 4)]
    sum_bound: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Print the indecomposable catalog with Hom/Ext tables and DOT output
    Catalog,
    /// Filtration closure of a set of objects with minimal lengths
    Filt {
        /// Comma-separated object labels, e.g. S2,S3 or S3[-1],P1
        #[arg(long, value_delimiter = ',')]
        x: Vec<String>,
    },
    /// List all semibricks, marking the simple ones
    Semibricks,
    /// Run a verification suite
    Verify {
        /// bijection | cotorsion | lemmas | axioms | example-4.6 | example-5.9
        suite: String,
        /// Comma-separated semibrick for the cotorsion suite
        /// (defaults to the simples)
        #[arg(long, value_delimiter = ',')]
        s: Vec<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn parse_window(text: &str) -> Result<(i32, i32), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 2 {
        return Err(format!("window must be lo:hi, got {text:?}"));
    }
    let lo: i32 = parts[0].parse().map_err(|_| "window lo not an integer")?;
    let hi: i32 = parts[1].parse().map_err(|_| "window hi not an integer")?;
    if lo >= hi {
        return Err(format!("window [{lo}, {hi}] is empty"));
    }
    Ok((lo, hi))
}

fn run(cli: Cli) -> i32 {
    let window = match parse_window(&cli.window) {
        Ok(w) => w,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let backend_kind = match cli.backend.as_str() {
        "module" => BackendKind::Module,
        "derived" => BackendKind::Derived,
        other => {
            eprintln!("error: unknown backend {other:?} (module | derived)");
            return 2;
        }
    };
    let config = SessionConfig {
        p_override: cli.p,
        backend: backend_kind,
        window,
        catalog_cap: cli.catalog_cap,
        e_enum_cap: cli.e_cap,
        sum_bound: cli.sum_bound,
        seed: cli.seed,
        json: cli.json,
    };
    let Some(spec_path) = cli.spec.as_deref() else {
        eprintln!("error: --spec <path> is required");
        return 2;
    };
    let spec_text = match std::fs::read_to_string(spec_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {spec_path}: {e}");
            return 2;
        }
    };

    match &cli.command {
        Command::Catalog => {
            let backend = match load_backend(&spec_text, &config) {
                Ok(b) => b,
                Err(e) => return usage_error(e),
            };
            let report = cmd_catalog(&backend);
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("catalog over GF({}) — {} indecomposables", report.p, report.members.len());
                for row in &report.members {
                    let mut tags = Vec::new();
                    if row.projective {
                        tags.push("projective");
                    }
                    if row.injective {
                        tags.push("injective");
                    }
                    println!(
                        "  {:<6} dim {:?} {}",
                        row.label,
                        row.dim_vector,
                        tags.join(", ")
                    );
                }
                println!("hom table (rows = source):");
                for (i, row) in report.hom_table.iter().enumerate() {
                    println!("  {:<6} {:?}", report.members[i].label, row);
                }
                println!("ext table (rows = first argument):");
                for (i, row) in report.ext_table.iter().enumerate() {
                    println!("  {:<6} {:?}", report.members[i].label, row);
                }
                println!("{}", report.dot);
            }
            0
        }
        Command::Filt { x } => {
            let report = match backend_kind {
                BackendKind::Module => {
                    let backend = match load_backend(&spec_text, &config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    cmd_filt(&backend, x, config.sum_bound)
                }
                BackendKind::Derived => {
                    let backend = match load_derived(&spec_text, &config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    cmd_filt_derived(&backend, x)
                }
            };
            let report = match report {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("Filt({}) support:", report.x.join(", "));
                for (label, len) in &report.lengths {
                    println!("  {label:<10} length {len}");
                }
                for s in &report.skipped_window {
                    println!("  skipped: {s}");
                }
            }
            if report.skipped_window.is_empty() {
                0
            } else {
                3
            }
        }
        Command::Semibricks => {
            let backend = match load_backend(&spec_text, &config) {
                Ok(b) => b,
                Err(e) => return usage_error(e),
            };
            let report = match cmd_semibricks(&backend, config.sum_bound) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "{} semibricks ({} simple):",
                    report.count, report.simple_count
                );
                for row in &report.semibricks {
                    let tag = if row.simple { " (simple)" } else { "" };
                    println!("  {{{}}}{}", row.members.join(", "), tag);
                }
            }
            0
        }
        Command::Verify { suite, s } => run_verify(suite, s, &spec_text, &config),
    }
}

fn run_verify(suite: &str, s_labels: &[String], spec_text: &str, config: &SessionConfig) -> i32 {
    match suite {
        "bijection" => {
            let backend = match load_backend(spec_text, config) {
                Ok(b) => b,
                Err(e) => return usage_error(e),
            };
            let report = match verify_bijection(&backend, config.sum_bound) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!(
                    "simple semibricks: {}  length wide subcategories: {}",
                    report.simple_semibricks.len(),
                    report.length_wide.len()
                );
                for v in &report.violations {
                    println!("violation: {v}");
                }
                println!(
                    "bijection: {}",
                    if report.bijection_ok { "PASS" } else { "FAIL" }
                );
            }
            if report.bijection_ok {
                0
            } else {
                1
            }
        }
        "cotorsion" => {
            let backend = match load_backend(spec_text, config) {
                Ok(b) => b,
                Err(e) => return usage_error(e),
            };
            let report = match extricat::report::verify_cotorsion_with(
                &backend,
                config.sum_bound,
                s_labels,
            ) {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("S_P = {{{}}}", report.s_p.join(", "));
                println!("valid subsets: {}", report.valid_subsets);
                for pair in &report.cotorsion_pairs {
                    println!(
                        "  S = {{{}}}: U = {{{}}}, V = {{{}}}",
                        pair.s.join(", "),
                        pair.u_support.join(", "),
                        pair.v_support.join(", ")
                    );
                }
                println!("approximation checks: {}", report.approximation_checks);
                for v in &report.violations {
                    println!("violation: {v}");
                }
                println!("{}", if report.pass { "PASS" } else { "FAIL" });
            }
            if report.pass {
                0
            } else {
                1
            }
        }
        "lemmas" | "axioms" | "example-4.6" | "example-5.9" | "cross-backend" => {
            let report = match suite {
                "lemmas" => {
                    let backend = match load_backend(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    verify_lemmas(&backend, config.sum_bound)
                }
                "axioms" => {
                    let backend = match load_backend(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    let derived = match load_derived(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    verify_axioms(&backend, &derived, config.seed, 200)
                }
                "example-4.6" => {
                    let backend = match load_backend(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    verify_example_46(&backend, config.sum_bound)
                }
                "example-5.9" => {
                    let derived = match load_derived(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    verify_example_59(&derived)
                }
                "cross-backend" => {
                    let derived = match load_derived(spec_text, config) {
                        Ok(b) => b,
                        Err(e) => return usage_error(e),
                    };
                    verify_cross_backend(&derived)
                }
                _ => unreachable!(),
            };
            let report = match report {
                Ok(r) => r,
                Err(e) => return usage_error(e),
            };
            if config.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                println!("suite {}", report.suite);
                for check in &report.checks {
                    println!(
                        "  [{}] {} {}",
                        if check.pass { "ok" } else { "FAIL" },
                        check.name,
                        check.detail
                    );
                }
                for s in &report.skipped_window {
                    println!("  skipped (window): {s}");
                }
                println!("{}", if report.pass { "PASS" } else { "FAIL" });
            }
            report.exit_code()
        }
        other => {
            eprintln!(
                "error: unknown suite {other:?} (bijection | cotorsion | lemmas | axioms | example-4.6 | example-5.9 | cross-backend)"
            );
            2
        }
    }
}

fn usage_error(e: extricat::Error) -> i32 {
    eprintln!("error: {e}");
    2
}
