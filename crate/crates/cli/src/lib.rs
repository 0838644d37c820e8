//! The stratkit command line: loads builtin or JSON stratifications, runs
//! every computation the library offers, and emits DOT/JSON/CSV/text.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain/data error.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use stratkit::builtins::{builtin_example, Builtin, BUILTIN_NAMES};
use stratkit::error::Error as SkError;
use stratkit::fan::{
    fan_of_monoids, gamma_for_chain, lattice_basis_from_generators, GammaSource,
};
use stratkit::newton::{
    leading_term, multidegrees, polytope, rational_structure, veronese_poset, volume,
};
use stratkit::pluecker::{
    nonvanishing_standard_count, parse_expr, quasi_valuation_pluecker, standard_on_stratum_count,
    straighten,
};
use stratkit::poset::Chain;
use stratkit::rational::fmt_rat;
use stratkit::strat::{build_type_a, validate_strat, StratData, TypeA};
use stratkit::tableaux::{enumerate_ssyt, Shape};
use stratkit::valuation::{min_homogeneous_components, parse_poly, quasi_valuation};
use stratkit::weyl::{full_cuts, Coset};

const DEFAULT_SEED: u64 = 181181;

#[derive(Parser)]
#[command(
    name = "stratkit",
    about = "exact invariants of multiprojective Seshadri stratifications",
    disable_help_subcommand = true
)]
struct Cli {
    /// Seed for all randomized internals (sampling, random linear
    /// extensions); STRATKIT_SEED overrides the default.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Builtin stratification: y1, y0y1, antiA2, or typeA (with --n/--k).
    #[arg(long)]
    builtin: Option<String>,
    /// Load a stratification from a JSON file.
    #[arg(long)]
    file: Option<PathBuf>,
    /// Rank n for --builtin typeA.
    #[arg(long)]
    n: Option<usize>,
    /// Ascending cut list for --builtin typeA, e.g. 1,2,3.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Export the Hasse diagram as DOT, bonds labelling the edges.
    Hasse {
        #[command(flatten)]
        input: InputArgs,
    },
    /// List all maximal chains.
    Chains {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the chain monoid generators (all chains, or one with --chain).
    Gamma {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        chain: Option<String>,
    },
    /// Veronese restriction: the poset of subchains C_d with maxima marked.
    Veronese {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// The Newton-Okounkov polytope of a chain at degree d, as JSON.
    Polytope {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        chain: String,
        #[arg(short, long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// Exact lattice-normalized volumes per maximal chain at degree d.
    Volume {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        chain: Option<String>,
        #[arg(short, long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// The leading term of the Hilbert polynomial at degree d.
    LeadingTerm {
        #[command(flatten)]
        input: InputArgs,
        #[arg(short, long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// The multidegree table.
    Multidegree {
        #[command(flatten)]
        input: InputArgs,
        /// "text" (aligned) or "csv"
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Quasi-valuation of a polynomial on a builtin with charts.
    QuasiVal {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        expr: String,
        /// Use a seeded random linear extension instead of the canonical one.
        #[arg(long)]
        order_seed: Option<u64>,
    },
    /// Straighten a Pluecker expression into the semistandard basis.
    Straighten {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long)]
        expr: String,
        /// "text" or "csv"
        #[arg(long, default_value = "text")]
        format: String,
    },
    /// Enumerate (or count) semistandard tableaux of a shape.
    Ssyt {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        /// Column multiplicities per k entry, e.g. 1,1.
        #[arg(long, value_delimiter = ',')]
        shape: Vec<usize>,
        /// Print only the count.
        #[arg(long)]
        count: bool,
    },
    /// Count standard monomials on a stratum (or a Schubert multicone).
    StandardCount {
        #[command(flatten)]
        input: InputArgs,
        /// Stratum label or display alias, e.g. "(13,1)" or "X(1)_312".
        #[arg(long)]
        stratum: Option<String>,
        /// One-line permutation for a Schubert multicone, e.g. 312.
        #[arg(long)]
        schubert: Option<String>,
        #[arg(short, long, value_delimiter = ',')]
        d: Vec<u64>,
    },
    /// Validate stratification data; exits 2 when diagnostics are found.
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Re-run a golden suite and byte-compare the outputs.
    GoldenCheck {
        #[arg(long)]
        suite: PathBuf,
    },
}

enum Input {
    Builtin(Box<Builtin>),
    TypeA(Box<TypeA>),
    File(Box<StratData>),
}

impl Input {
    fn strat(&self) -> &StratData {
        match self {
            Input::Builtin(b) => &b.strat,
            Input::TypeA(t) => &t.strat,
            Input::File(s) => s,
        }
    }
}

fn load_input(input: &InputArgs) -> Result<Input, CliError> {
    let inp = load_input_unchecked(input)?;
    if let Input::File(s) = &inp {
        // computations assume valid data; the validate subcommand loads
        // unchecked to report the diagnostics itself
        let diags = validate_strat(s);
        if !diags.is_empty() {
            return Err(CliError::Domain(format!(
                "input fails validation ({}); run the validate subcommand",
                diags[0]
            )));
        }
    }
    Ok(inp)
}

fn load_input_unchecked(input: &InputArgs) -> Result<Input, CliError> {
    match (&input.builtin, &input.file) {
        (Some(name), None) => {
            if name == "typeA" {
                let n = input
                    .n
                    .ok_or_else(|| CliError::Usage("--builtin typeA needs --n".to_string()))?;
                if input.k.is_empty() {
                    return Err(CliError::Usage("--builtin typeA needs --k".to_string()));
                }
                let t = build_type_a(n, &input.k)?;
                Ok(Input::TypeA(Box::new(t)))
            } else {
                Ok(Input::Builtin(Box::new(builtin_example(name)?)))
            }
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Domain(format!("cannot read {}: {e}", path.display())))?;
            Ok(Input::File(Box::new(StratData::from_json(&text)?)))
        }
        (None, None) => Err(CliError::Usage(
            "exactly one input source required: --builtin or --file".to_string(),
        )),
        (Some(_), Some(_)) => Err(CliError::Usage(
            "exactly one input source allowed: --builtin or --file".to_string(),
        )),
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Domain(String),
}

impl From<SkError> for CliError {
    fn from(e: SkError) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Runs the CLI on the given arguments, writing to `out`; returns the exit
/// code.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // help/version requests are not errors
            use clap::error::ErrorKind;
            let msg = e.render().to_string();
            if matches!(
                e.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            ) {
                let _ = out.write_all(msg.as_bytes());
                return 0;
            }
            let _ = out.write_all(msg.as_bytes());
            return 1;
        }
    };
    let seed = cli
        .seed
        .or_else(|| {
            std::env::var("STRATKIT_SEED")
                .ok()
                .and_then(|s| s.parse().ok())
        })
        .unwrap_or(DEFAULT_SEED);
    let mut buffer: Vec<u8> = Vec::new();
    let code = match dispatch(&cli.command, seed, &mut buffer) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(buffer, "usage error: {msg}");
            1
        }
        Err(CliError::Domain(msg)) => {
            let _ = writeln!(buffer, "error: {msg}");
            2
        }
    };
    match &cli.out {
        Some(path) if code == 0 => {
            if fs::write(path, &buffer).is_err() {
                let _ = writeln!(out, "error: cannot write {}", path.display());
                return 2;
            }
        }
        _ => {
            let _ = out.write_all(&buffer);
        }
    }
    code
}

fn parse_chain(s: &StratData, text: &str) -> Result<Chain, CliError> {
    let chain = Chain::parse(text);
    for l in &chain.labels {
        if !s.poset.contains(l) {
            return Err(CliError::Domain(format!("unknown element '{l}' in chain")));
        }
    }
    Ok(s.poset.sort_chain(&chain.labels)?)
}

fn check_degree_len(s: &StratData, d: &[u64]) -> Result<(), CliError> {
    if d.len() != s.m {
        return Err(CliError::Usage(format!(
            "degree vector needs {} entries, got {}",
            s.m,
            d.len()
        )));
    }
    Ok(())
}

fn dispatch(cmd: &Command, seed: u64, out: &mut Vec<u8>) -> Result<(), CliError> {
    match cmd {
        Command::Hasse { input } => {
            let inp = load_input(input)?;
            write!(out, "{}", inp.strat().poset.export_hasse()).unwrap();
        }
        Command::Chains { input } => {
            let inp = load_input(input)?;
            for chain in inp.strat().poset.maximal_chains() {
                writeln!(out, "{}", chain.display()).unwrap();
            }
        }
        Command::Gamma { input, chain } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            let chains = match chain {
                Some(text) => vec![parse_chain(s, text)?],
                None => s.poset.maximal_chains(),
            };
            for ch in chains {
                let m = gamma_for_chain(s, &ch, GammaSource::Auto)?;
                let flavor = match m.flavor {
                    stratkit::fan::Flavor::FreeHodge => "free-hodge",
                    stratkit::fan::Flavor::Ls => "ls",
                    stratkit::fan::Flavor::Explicit => "explicit",
                };
                writeln!(out, "chain {} [{}]", ch.display(), flavor).unwrap();
                for g in &m.generators {
                    writeln!(out, "  {}", g.display(&s.poset)).unwrap();
                }
            }
        }
        Command::Veronese { input, d } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            check_degree_len(s, d)?;
            let vp = veronese_poset(s, d)?;
            writeln!(
                out,
                "veronese poset at d = ({})",
                d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            )
            .unwrap();
            for (i, e) in vp.elements.iter().enumerate() {
                let name = if e.is_empty() {
                    "(empty)".to_string()
                } else {
                    e.display()
                };
                let mark = if vp.maximal[i] { " (maximal)" } else { "" };
                writeln!(out, "- {name}{mark}").unwrap();
            }
            let mut reps = vp.maximal_chain_representatives();
            reps.sort();
            writeln!(
                out,
                "maximal chains with maximal image: {}",
                reps.iter()
                    .map(|c| Chain::new(c.clone()).display())
                    .collect::<Vec<_>>()
                    .join("; ")
            )
            .unwrap();
        }
        Command::Polytope { input, chain, d } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            check_degree_len(s, d)?;
            let ch = parse_chain(s, chain)?;
            let monoid = gamma_for_chain(s, &ch, GammaSource::Auto).ok();
            let p = polytope(s, &ch, d, monoid.as_ref())?;
            writeln!(out, "{}", serde_json::to_string_pretty(&p.to_json()).unwrap()).unwrap();
        }
        Command::Volume { input, chain, d } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            check_degree_len(s, d)?;
            let fan = fan_of_monoids(s)?;
            let chains = match chain {
                Some(text) => vec![parse_chain(s, text)?],
                None => s.poset.maximal_chains(),
            };
            for ch in chains {
                let p = polytope(s, &ch, d, None)?;
                if p.empty {
                    writeln!(out, "chain {}: volume 0 (empty)", ch.display()).unwrap();
                    continue;
                }
                let monoid = fan
                    .monoids
                    .get(&ch.labels)
                    .ok_or_else(|| CliError::Domain("chain is not maximal".to_string()))?;
                let lattice = lattice_basis_from_generators(&monoid.generators);
                let rs = rational_structure(s, &ch, &lattice)?;
                let v = volume(s, &p, &rs)?;
                let note = if v.collapsed { " (collapsed)" } else { "" };
                writeln!(out, "chain {}: volume {}{}", ch.display(), fmt_rat(&v.value), note)
                    .unwrap();
            }
        }
        Command::LeadingTerm { input, d } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            check_degree_len(s, d)?;
            let fan = fan_of_monoids(s)?;
            let lt = leading_term(s, d, &fan)?;
            writeln!(
                out,
                "G({}) = {}",
                d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "),
                fmt_rat(&lt.value)
            )
            .unwrap();
            if lt.boundary {
                writeln!(
                    out,
                    "warning: d lies on the boundary of a chain cone; value is best-effort"
                )
                .unwrap();
            }
        }
        Command::Multidegree { input, format } => {
            let inp = load_input(input)?;
            let md = multidegrees(inp.strat())?;
            match format.as_str() {
                "csv" => {
                    let m = inp.strat().m;
                    let header: Vec<String> = (1..=m).map(|i| format!("k{i}")).collect();
                    writeln!(out, "{},degree", header.join(",")).unwrap();
                    for (k, v) in &md {
                        writeln!(
                            out,
                            "{},{}",
                            k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                            v
                        )
                        .unwrap();
                    }
                }
                "text" => {
                    writeln!(out, "{:<16} degree", "k").unwrap();
                    for (k, v) in &md {
                        let key = format!(
                            "({})",
                            k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
                        );
                        writeln!(out, "{key:<16} {v}").unwrap();
                    }
                }
                other => {
                    return Err(CliError::Usage(format!("unknown format '{other}'")));
                }
            }
        }
        Command::QuasiVal {
            input,
            expr,
            order_seed,
        } => {
            let inp = load_input(input)?;
            if let Input::TypeA(t) = &inp {
                // type-A inputs take Pluecker expressions and go through the
                // straightening route
                let e = parse_expr(expr, t.uw.n, &t.uw.k_list)?;
                let order = match order_seed {
                    Some(s) => t.strat.poset.random_linear_extension(*s),
                    None => t.strat.poset.linearize(),
                };
                let v = quasi_valuation_pluecker(&e, &t.uw, &order, seed)?;
                writeln!(out, "{}", v.display(&t.strat.poset)).unwrap();
                return Ok(());
            }
            let Input::Builtin(b) = &inp else {
                return Err(CliError::Domain(
                    "quasi-val needs a builtin with charts (y1 or y0y1) or typeA".to_string(),
                ));
            };
            if b.charts.is_empty() {
                return Err(CliError::Domain(format!(
                    "builtin '{}' has no charts attached",
                    b.name
                )));
            }
            let g = parse_poly(expr, &b.vars)?;
            let order = match order_seed {
                Some(seed) => b.strat.poset.random_linear_extension(*seed),
                None => b.strat.poset.linearize(),
            };
            let r = quasi_valuation(&g, &b.charts, &b.strat, &b.vars, &order)?;
            // cross-check through the homogeneous components
            let via_components =
                min_homogeneous_components(&g, &b.charts, &b.strat, &b.vars, &order)?;
            debug_assert_eq!(via_components, r.value);
            writeln!(out, "{}", r.value.display(&b.strat.poset)).unwrap();
            writeln!(out, "achieved on chain: {}", Chain::new(r.chain.clone()).display())
                .unwrap();
            let mut ratios: Vec<(String, String)> = Vec::new();
            for (labels, cv) in &r.per_chain {
                let key = labels[1].clone();
                let val = fmt_rat(&cv.steps[0].ratio);
                if !ratios.iter().any(|(k, _)| k == &key) {
                    ratios.push((key, val));
                }
            }
            ratios.sort();
            writeln!(
                out,
                "first-step ratios: {}",
                ratios
                    .iter()
                    .map(|(k, v)| format!("{k} -> {v}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            )
            .unwrap();
        }
        Command::Straighten { n, k, expr, format } => {
            let e = parse_expr(expr, *n, k)?;
            let (std_expr, meta) = straighten(&e, *n, k, seed)?;
            match format.as_str() {
                "csv" => {
                    writeln!(out, "coefficient,monomial").unwrap();
                    for (mono, c) in &std_expr.terms {
                        writeln!(out, "{},{}", fmt_rat(c), mono.render()).unwrap();
                    }
                }
                "text" => {
                    writeln!(out, "{} = {}", e.render(), std_expr.render()).unwrap();
                    writeln!(out, "seed: {} (resamples: {})", meta.seed, meta.resamples).unwrap();
                }
                other => {
                    return Err(CliError::Usage(format!("unknown format '{other}'")));
                }
            }
        }
        Command::Ssyt { n, k, shape, count } => {
            if shape.len() != k.len() {
                return Err(CliError::Usage(format!(
                    "--shape needs {} entries, got {}",
                    k.len(),
                    shape.len()
                )));
            }
            let tabs = enumerate_ssyt(*n, k, &Shape::new(shape.clone()))?;
            if *count {
                writeln!(out, "{}", tabs.len()).unwrap();
            } else {
                for t in &tabs {
                    writeln!(out, "{}", t.render()).unwrap();
                    writeln!(out).unwrap();
                }
                writeln!(out, "count: {}", tabs.len()).unwrap();
            }
        }
        Command::StandardCount {
            input,
            stratum,
            schubert,
            d,
        } => {
            let inp = load_input(input)?;
            let s = inp.strat();
            check_degree_len(s, d)?;
            match (stratum, schubert) {
                (Some(name), None) => {
                    let label = match &inp {
                        Input::Builtin(b) => b.resolve_stratum(name)?,
                        _ => name.clone(),
                    };
                    let c = standard_on_stratum_count(s, &label, d)?;
                    writeln!(out, "{c}").unwrap();
                }
                (None, Some(word)) => {
                    let Input::TypeA(t) = &inp else {
                        return Err(CliError::Domain(
                            "--schubert needs --builtin typeA".to_string(),
                        ));
                    };
                    let entries: Vec<usize> = word
                        .chars()
                        .map(|c| {
                            c.to_digit(10)
                                .map(|x| x as usize)
                                .ok_or_else(|| CliError::Usage(format!("bad permutation '{word}'")))
                        })
                        .collect::<Result<_, _>>()?;
                    let w = Coset::new(t.uw.n, full_cuts(t.uw.n), entries)
                        .map_err(|e| CliError::Domain(e.to_string()))?;
                    let c = nonvanishing_standard_count(&t.uw, s, &w, d)?;
                    writeln!(out, "{c}").unwrap();
                }
                _ => {
                    return Err(CliError::Usage(
                        "exactly one of --stratum or --schubert required".to_string(),
                    ));
                }
            }
        }
        Command::Validate { input } => {
            let inp = load_input_unchecked(input)?;
            let diags = validate_strat(inp.strat());
            if diags.is_empty() {
                writeln!(out, "ok").unwrap();
            } else {
                for d in &diags {
                    writeln!(out, "{d}").unwrap();
                }
                return Err(CliError::Domain(format!(
                    "{} diagnostic(s) found",
                    diags.len()
                )));
            }
        }
        Command::GoldenCheck { suite } => {
            return golden_check(suite, out);
        }
    }
    Ok(())
}

#[derive(Deserialize)]
struct GoldenCase {
    name: String,
    args: Vec<String>,
}

fn golden_check(suite: &std::path::Path, out: &mut Vec<u8>) -> Result<(), CliError> {
    let manifest_path = suite.join("manifest.json");
    let text = fs::read_to_string(&manifest_path).map_err(|e| {
        CliError::Domain(format!("cannot read {}: {e}", manifest_path.display()))
    })?;
    let cases: Vec<GoldenCase> = serde_json::from_str(&text)
        .map_err(|e| CliError::Domain(format!("bad manifest: {e}")))?;
    let mut failed = 0;
    for case in &cases {
        let expected_path = suite.join(format!("{}.txt", case.name));
        let expected = fs::read(&expected_path).map_err(|e| {
            CliError::Domain(format!("cannot read {}: {e}", expected_path.display()))
        })?;
        let mut argv = vec!["stratkit".to_string()];
        argv.extend(case.args.iter().cloned());
        let mut got: Vec<u8> = Vec::new();
        let code = run(&argv, &mut got);
        if code != 0 || got != expected {
            failed += 1;
            writeln!(out, "golden {}: MISMATCH (exit {code})", case.name).unwrap();
        } else {
            writeln!(out, "golden {}: ok", case.name).unwrap();
        }
    }
    writeln!(out, "{} passed, {failed} failed", cases.len() - failed).unwrap();
    if failed > 0 {
        return Err(CliError::Domain(format!("{failed} golden case(s) failed")));
    }
    Ok(())
}

/// Builtin names accepted by `--builtin`, plus the parametrized "typeA".
pub fn builtin_names() -> Vec<&'static str> {
    let mut names = BUILTIN_NAMES.to_vec();
    names.push("typeA");
    names
}
