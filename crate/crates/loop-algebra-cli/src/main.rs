use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use loop_algebra::enumerate::{self, generate, GenerationSpec, PropFlag};
use loop_algebra::identity::{lookup, resolve, Verdict, REGISTRY};
use loop_algebra::morphisms::{autotopism_group, isotope, principal_isotope};
use loop_algebra::perm::Perm;
use loop_algebra::theorems::{
    counterexample_search, osborn_check, property_report, proposition_suite,
    verification_catalog, OsbornMethod, PropertyVerdict,
};
use loop_algebra::{Error, LoopTable};

const EXIT_OK: i32 = 0;
const EXIT_FALSE: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_INPUT: i32 = 3;
const EXIT_BUDGET: i32 = 4;

#[derive(Parser)]
#[command(name = "loopalg", version, about = "Finite loop toolkit: tables, identities, structure, search")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Largest table order accepted as input.
    #[arg(long, global = true, default_value_t = 64)]
    max_order: usize,
    /// Largest order the autotopism search accepts.
    #[arg(long, global = true, default_value_t = 8)]
    autotopism_budget: usize,
    /// Largest order enumeration commands accept without an explicit limit.
    #[arg(long, global = true, default_value_t = 8)]
    search_budget: usize,
    /// Worker threads; defaults to LOOPALG_WORKERS, then all cores.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output_format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate named properties of one loop.
    Check {
        /// Table file, or builtin:NAME.
        table: String,
        /// Comma-separated property names; omit for the full report.
        #[arg(long, value_delimiter = ',')]
        props: Option<Vec<String>>,
    },
    /// Check one identity (registry name or formula) against one loop.
    Identity { table: String, text: String },
    /// Print nuclei, centrum, center, and the derived element sets.
    Structure { table: String },
    /// List the autotopism group, or just its size.
    Autotopisms {
        table: String,
        #[arg(long)]
        count_only: bool,
    },
    /// Build a principal isotope or a general isotope from a triple file.
    Isotope {
        table: String,
        /// Pair a,b selecting the principal isotope x∘y = (x/b)*(a\y).
        #[arg(long)]
        principal: Option<String>,
        /// File with three permutation image lines A, B, C.
        #[arg(long)]
        triple: Option<PathBuf>,
    },
    /// Enumerate loops of one order under identity and property constraints.
    Search {
        #[arg(long)]
        order: usize,
        /// Identity constraint (registry name or formula); repeatable.
        #[arg(long = "identity")]
        identities: Vec<String>,
        /// Property filter on finished tables; repeatable.
        #[arg(long = "prop")]
        props: Vec<String>,
        /// Stop after this many loops.
        #[arg(long)]
        limit: Option<usize>,
        /// Emit one loop per isomorphism class.
        #[arg(long)]
        up_to_iso: bool,
    },
    /// Run every encoded proposition over the verification catalog.
    VerifyPaper {
        #[arg(long, default_value_t = 6)]
        max_order: usize,
    },
    /// Search for a non-associative Osborn C-loop.
    HuntOsborn {
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: String) -> Failure {
        Failure { code: EXIT_USAGE, message }
    }

    fn budget(message: String) -> Failure {
        Failure { code: EXIT_BUDGET, message }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            eprint!("{e}");
            return EXIT_USAGE;
        }
    };
    let mut out = String::new();
    match dispatch(&cli, &mut out) {
        Ok(code) => {
            print!("{out}");
            std::io::stdout().flush().ok();
            code
        }
        Err(f) => {
            eprintln!("{}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32, Failure> {
    let cfg = &cli.config;
    if cfg.max_order < 1 || cfg.autotopism_budget < 1 || cfg.search_budget < 1 {
        return Err(Failure::usage("budgets must be at least 1".into()));
    }
    let workers = match cfg.workers {
        Some(w) => Some(w),
        None => match std::env::var("LOOPALG_WORKERS") {
            Ok(v) => Some(v.parse().map_err(|_| {
                Failure::usage(format!("LOOPALG_WORKERS must be a positive integer, got '{v}'"))
            })?),
            Err(_) => None,
        },
    };
    if let Some(w) = workers {
        if w < 1 {
            return Err(Failure::usage("worker count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(w).build_global().ok();
    }
    match &cli.command {
        Command::Check { table, props } => cmd_check(cfg, out, table, props.as_deref()),
        Command::Identity { table, text } => cmd_identity(cfg, out, table, text),
        Command::Structure { table } => cmd_structure(cfg, out, table),
        Command::Autotopisms { table, count_only } => {
            cmd_autotopisms(cfg, out, table, *count_only)
        }
        Command::Isotope { table, principal, triple } => {
            cmd_isotope(cfg, out, table, principal.as_deref(), triple.as_deref())
        }
        Command::Search { order, identities, props, limit, up_to_iso } => {
            cmd_search(cfg, out, *order, identities, props, *limit, *up_to_iso)
        }
        Command::VerifyPaper { max_order } => cmd_verify(cfg, out, *max_order),
        Command::HuntOsborn { max_order } => cmd_hunt(cfg, out, *max_order),
    }
}

fn load_table(cfg: &ConfigArgs, spec: &str) -> Result<LoopTable, Failure> {
    let t = if let Some(name) = spec.strip_prefix("builtin:") {
        enumerate::builtin(name)?
    } else {
        let text = fs::read_to_string(spec)
            .map_err(|e| Failure { code: EXIT_INPUT, message: format!("{spec}: {e}") })?;
        LoopTable::from_text(&text)?
    };
    if t.order() > cfg.max_order {
        return Err(Failure::budget(format!(
            "table order {} exceeds max order {}",
            t.order(),
            cfg.max_order
        )));
    }
    Ok(t)
}

fn verdict_text(v: &PropertyVerdict) -> String {
    match v {
        PropertyVerdict::Bool(b) => b.to_string(),
        PropertyVerdict::Inapplicable => "inapplicable".into(),
        PropertyVerdict::Count(n) => n.to_string(),
        PropertyVerdict::Element(Some(s)) => s.to_string(),
        PropertyVerdict::Element(None) => "none".into(),
    }
}

fn verdict_json(v: &PropertyVerdict) -> Value {
    match v {
        PropertyVerdict::Bool(b) => json!(b),
        PropertyVerdict::Inapplicable => json!("inapplicable"),
        PropertyVerdict::Count(n) => json!(n),
        PropertyVerdict::Element(s) => json!(s),
    }
}

fn cmd_check(
    cfg: &ConfigArgs,
    out: &mut String,
    table: &str,
    props: Option<&[String]>,
) -> Result<i32, Failure> {
    let t = load_table(cfg, table)?;
    let report = property_report(&t);
    let selected: Vec<(String, PropertyVerdict)> = match props {
        None => report
            .entries
            .iter()
            .map(|e| (e.name.to_string(), e.verdict.clone()))
            .collect(),
        Some(names) => {
            let mut selected = Vec::new();
            for name in names {
                if let Some(entry) = report.get(name) {
                    selected.push((name.clone(), entry.verdict.clone()));
                } else if REGISTRY.iter().any(|(n, _)| n == name) {
                    let verdict = match lookup(name).expect("registry name").check(&t) {
                        Verdict::Holds => PropertyVerdict::Bool(true),
                        Verdict::Fails(_) => PropertyVerdict::Bool(false),
                        Verdict::Inapplicable { .. } => PropertyVerdict::Inapplicable,
                    };
                    selected.push((name.clone(), verdict));
                } else {
                    return Err(Failure::usage(format!(
                        "unknown property '{name}'; valid names: {}",
                        valid_check_names().join(", ")
                    )));
                }
            }
            selected
        }
    };
    match cfg.output_format {
        OutputFormat::Text => {
            for (name, v) in &selected {
                writeln!(out, "{name}: {}", verdict_text(v)).unwrap();
            }
        }
        OutputFormat::Json => {
            let mut obj = Map::new();
            for (name, v) in &selected {
                obj.insert(name.clone(), verdict_json(v));
            }
            writeln!(out, "{}", Value::Object(obj)).unwrap();
        }
    }
    let any_false =
        props.is_some() && selected.iter().any(|(_, v)| v.as_bool() == Some(false));
    Ok(if any_false { EXIT_FALSE } else { EXIT_OK })
}

fn valid_check_names() -> Vec<&'static str> {
    let report_names = [
        "lc", "rc", "c", "lalt", "ralt", "alternative", "flexible", "commutative",
        "associative", "lip", "rip", "ip", "wip", "cip", "aip", "aaip", "steiner",
        "two_sided_inverses", "nuclear_square", "centrum_square", "central_square",
        "power_associative", "a_loop", "exponent", "unique_square", "unique_commutator",
        "unique_associator", "unique_commutator_associator", "every_element_square",
    ];
    let mut names: BTreeSet<&'static str> = report_names.into_iter().collect();
    names.extend(REGISTRY.iter().map(|(n, _)| *n));
    names.into_iter().collect()
}

fn cmd_identity(
    cfg: &ConfigArgs,
    out: &mut String,
    table: &str,
    text: &str,
) -> Result<i32, Failure> {
    let t = load_table(cfg, table)?;
    let identity = resolve(text)?;
    let (line, value, code) = match identity.check(&t) {
        Verdict::Holds => ("holds".to_string(), json!({"verdict": "holds"}), EXIT_OK),
        Verdict::Fails(assign) => {
            let witness: Vec<String> =
                assign.iter().map(|(v, e)| format!("{v}={e}")).collect();
            let witness = witness.join(",");
            (
                format!("fails {witness}"),
                json!({"verdict": "fails", "witness": witness}),
                EXIT_FALSE,
            )
        }
        Verdict::Inapplicable { element } => (
            format!("inapplicable one-sided-inverse-at={element}"),
            json!({"verdict": "inapplicable", "element": element}),
            EXIT_FALSE,
        ),
    };
    match cfg.output_format {
        OutputFormat::Text => writeln!(out, "{line}").unwrap(),
        OutputFormat::Json => writeln!(out, "{value}").unwrap(),
    }
    Ok(code)
}

fn join(set: &[usize]) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_structure(cfg: &ConfigArgs, out: &mut String, table: &str) -> Result<i32, Failure> {
    let t = load_table(cfg, table)?;
    let r = loop_algebra::structure::report(&t);
    match cfg.output_format {
        OutputFormat::Text => {
            writeln!(out, "n_lambda: {}", join(&r.n_lambda)).unwrap();
            writeln!(out, "n_rho: {}", join(&r.n_rho)).unwrap();
            writeln!(out, "n_mu: {}", join(&r.n_mu)).unwrap();
            writeln!(out, "nucleus: {}", join(&r.nucleus)).unwrap();
            writeln!(out, "centrum: {}", join(&r.centrum)).unwrap();
            writeln!(out, "center: {}", join(&r.center)).unwrap();
            writeln!(out, "commutator_set: {}", join(&r.commutator_set)).unwrap();
            writeln!(out, "associator_set: {}", join(&r.associator_set)).unwrap();
            writeln!(out, "square_set: {}", join(&r.square_set)).unwrap();
            writeln!(out, "power_associative: {}", r.power_associative).unwrap();
        }
        OutputFormat::Json => {
            let value = json!({
                "n_lambda": r.n_lambda,
                "n_rho": r.n_rho,
                "n_mu": r.n_mu,
                "nucleus": r.nucleus,
                "centrum": r.centrum,
                "center": r.center,
                "commutator_set": r.commutator_set,
                "associator_set": r.associator_set,
                "square_set": r.square_set,
                "power_associative": r.power_associative,
            });
            writeln!(out, "{value}").unwrap();
        }
    }
    Ok(EXIT_OK)
}

fn cmd_autotopisms(
    cfg: &ConfigArgs,
    out: &mut String,
    table: &str,
    count_only: bool,
) -> Result<i32, Failure> {
    let t = load_table(cfg, table)?;
    let group = autotopism_group(&t, cfg.autotopism_budget)?;
    match (count_only, cfg.output_format) {
        (true, OutputFormat::Text) => writeln!(out, "count: {}", group.len()).unwrap(),
        (true, OutputFormat::Json) => {
            writeln!(out, "{}", json!({"count": group.len()})).unwrap()
        }
        (false, OutputFormat::Text) => {
            for a in &group {
                writeln!(
                    out,
                    "u={} v={} w={}",
                    join(a.u.image()),
                    join(a.v.image()),
                    join(a.w.image())
                )
                .unwrap();
            }
        }
        (false, OutputFormat::Json) => {
            for a in &group {
                let value = json!({"u": a.u.image(), "v": a.v.image(), "w": a.w.image()});
                writeln!(out, "{value}").unwrap();
            }
        }
    }
    Ok(EXIT_OK)
}

fn table_rows(t: &LoopTable) -> Vec<Vec<usize>> {
    t.elements()
        .map(|x| t.elements().map(|y| t.mul(x, y)).collect())
        .collect()
}

fn emit_loop_with_identity(
    cfg: &ConfigArgs,
    out: &mut String,
    t: &LoopTable,
    original_identity: usize,
) {
    match cfg.output_format {
        OutputFormat::Text => {
            writeln!(out, "# original identity {original_identity}").unwrap();
            out.push_str(&t.to_text());
        }
        OutputFormat::Json => {
            let value = json!({
                "order": t.order(),
                "rows": table_rows(t),
                "original_identity": original_identity,
            });
            writeln!(out, "{value}").unwrap();
        }
    }
}

fn cmd_isotope(
    cfg: &ConfigArgs,
    out: &mut String,
    table: &str,
    principal: Option<&str>,
    triple: Option<&std::path::Path>,
) -> Result<i32, Failure> {
    let t = load_table(cfg, table)?;
    match (principal, triple) {
        (Some(pair), None) => {
            let parts: Vec<&str> = pair.split(',').collect();
            let parse = |s: &str| -> Result<usize, Failure> {
                s.trim().parse().map_err(|_| {
                    Failure::usage(format!("--principal expects a,b with two elements, got '{pair}'"))
                })
            };
            if parts.len() != 2 {
                return Err(Failure::usage(format!(
                    "--principal expects a,b with two elements, got '{pair}'"
                )));
            }
            let (a, b) = (parse(parts[0])?, parse(parts[1])?);
            if a >= t.order() || b >= t.order() {
                return Err(Failure::usage(format!(
                    "--principal elements must be below the order {}",
                    t.order()
                )));
            }
            let (h, original_identity) = principal_isotope(&t, a, b);
            emit_loop_with_identity(cfg, out, &h, original_identity);
            Ok(EXIT_OK)
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).map_err(|e| Failure {
                code: EXIT_INPUT,
                message: format!("{}: {e}", path.display()),
            })?;
            let perms = parse_triple_file(&text)?;
            let iso = isotope(&t, &perms[0], &perms[1], &perms[2])?;
            match iso.as_loop {
                Some((h, original_identity)) => {
                    emit_loop_with_identity(cfg, out, &h, original_identity);
                    Ok(EXIT_OK)
                }
                None => {
                    match cfg.output_format {
                        OutputFormat::Text => writeln!(out, "not a loop").unwrap(),
                        OutputFormat::Json => {
                            writeln!(out, "{}", json!({"loop": false})).unwrap()
                        }
                    }
                    Ok(EXIT_FALSE)
                }
            }
        }
        _ => Err(Failure::usage(
            "isotope requires exactly one of --principal or --triple".into(),
        )),
    }
}

fn parse_triple_file(text: &str) -> Result<[Perm; 3], Failure> {
    let lines: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.len() != 3 {
        return Err(Failure {
            code: EXIT_INPUT,
            message: format!("triple file needs three permutation lines, got {}", lines.len()),
        });
    }
    let mut perms = Vec::new();
    for line in lines {
        let image: Vec<usize> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse().map_err(|_| Failure {
                    code: EXIT_INPUT,
                    message: format!("bad permutation entry '{tok}'"),
                })
            })
            .collect::<Result<_, _>>()?;
        perms.push(Perm::from_image(image)?);
    }
    Ok([perms.remove(0), perms.remove(0), perms.remove(0)])
}

fn cmd_search(
    cfg: &ConfigArgs,
    out: &mut String,
    order: usize,
    identity_args: &[String],
    prop_args: &[String],
    limit: Option<usize>,
    up_to_iso: bool,
) -> Result<i32, Failure> {
    let mut identities = Vec::new();
    for text in identity_args {
        identities.push(resolve(text)?);
    }
    let mut flags = Vec::new();
    let mut require_every_element_square = false;
    for name in prop_args {
        if let Some(flag) = PropFlag::parse(name) {
            flags.push(flag);
        } else if name == "every_element_square" {
            require_every_element_square = true;
        } else if let Some(parts) = composite_identities(name) {
            identities.extend(parts);
        } else {
            return Err(Failure::usage(format!(
                "unknown property '{name}'; valid names: {}",
                valid_search_props().join(", ")
            )));
        }
    }
    let mut spec = GenerationSpec::new(order);
    spec.identities = identities;
    spec.flags = flags;
    spec.up_to_isomorphism = up_to_iso;
    if !require_every_element_square {
        spec.limit = limit;
    }
    let mut emitted = 0usize;
    generate(&spec, cfg.search_budget, &mut |t| {
        if require_every_element_square && t.squares().len() != t.order() {
            return true;
        }
        match cfg.output_format {
            OutputFormat::Text => {
                if emitted > 0 {
                    out.push_str("%\n");
                }
                out.push_str(&t.to_text());
            }
            OutputFormat::Json => {
                let value = json!({"order": t.order(), "rows": table_rows(t)});
                writeln!(out, "{value}").unwrap();
            }
        }
        emitted += 1;
        limit != Some(emitted)
    })?;
    Ok(EXIT_OK)
}

fn composite_identities(name: &str) -> Option<Vec<loop_algebra::identity::Identity>> {
    let names: &[&str] = match name {
        "steiner" => &["steiner.sq", "steiner.cancel", "steiner.comm"],
        "ip" => &["lip", "rip"],
        "alternative" => &["lalt", "ralt"],
        _ => {
            if REGISTRY.iter().any(|(n, _)| *n == name) {
                return Some(vec![lookup(name).expect("registry name")]);
            }
            return None;
        }
    };
    Some(names.iter().map(|n| lookup(n).expect("registry name")).collect())
}

fn valid_search_props() -> Vec<&'static str> {
    let mut names: BTreeSet<&'static str> =
        PropFlag::NAMES.iter().map(|(n, _)| *n).collect();
    names.extend(["every_element_square", "steiner", "ip", "alternative"]);
    names.extend(REGISTRY.iter().map(|(n, _)| *n));
    names.into_iter().collect()
}

fn cmd_verify(cfg: &ConfigArgs, out: &mut String, max_order: usize) -> Result<i32, Failure> {
    if max_order > cfg.search_budget {
        return Err(Failure::budget(format!(
            "max order {max_order} exceeds search budget {}",
            cfg.search_budget
        )));
    }
    let catalog = verification_catalog(max_order)?;
    let reports = proposition_suite(&catalog);
    let all_passed = reports.iter().all(|r| r.passed());
    match cfg.output_format {
        OutputFormat::Text => {
            for r in &reports {
                writeln!(out, "{}", r.render_line()).unwrap();
            }
            for r in &reports {
                if let Some(note) = r.note {
                    writeln!(out, "note {}: {note}", r.id).unwrap();
                }
            }
        }
        OutputFormat::Json => {
            for r in &reports {
                let mut obj = Map::new();
                obj.insert("id".into(), json!(r.id));
                obj.insert("passed".into(), json!(r.passed()));
                obj.insert("tested".into(), json!(r.tested));
                obj.insert("vacuous".into(), json!(r.vacuous));
                if let Some(f) = &r.failure {
                    obj.insert("loop".into(), json!(f.loop_key));
                    obj.insert("witness".into(), json!(f.witness));
                }
                if let Some(note) = r.note {
                    obj.insert("note".into(), json!(note));
                }
                writeln!(out, "{}", Value::Object(obj)).unwrap();
            }
        }
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_FALSE })
}

fn cmd_hunt(cfg: &ConfigArgs, out: &mut String, max_order: usize) -> Result<i32, Failure> {
    if max_order > cfg.search_budget {
        return Err(Failure::budget(format!(
            "max order {max_order} exceeds search budget {}",
            cfg.search_budget
        )));
    }
    let c = lookup("c").expect("registry name");
    let associative = lookup("associative").expect("registry name");
    let report = counterexample_search(max_order, cfg.search_budget, &[c], &mut |t| {
        !associative.holds_on(t) && osborn_check(t, OsbornMethod::Definitional).holds
    })?;
    match report.found {
        Some(t) => {
            match cfg.output_format {
                OutputFormat::Text => {
                    writeln!(out, "# witness of order {}", t.order()).unwrap();
                    out.push_str(&t.to_text());
                }
                OutputFormat::Json => {
                    let value =
                        json!({"found": true, "order": t.order(), "rows": table_rows(&t)});
                    writeln!(out, "{value}").unwrap();
                }
            }
            Ok(EXIT_OK)
        }
        None => {
            match cfg.output_format {
                OutputFormat::Text => {
                    for (order, candidates) in &report.searched {
                        writeln!(out, "searched order={order} candidates={candidates}")
                            .unwrap();
                    }
                    writeln!(out, "exhausted: no witness up to order {max_order}").unwrap();
                }
                OutputFormat::Json => {
                    let value = json!({"found": false, "searched": report.searched});
                    writeln!(out, "{value}").unwrap();
                }
            }
            Ok(EXIT_FALSE)
        }
    }
}
