use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use jumploci::abelian::{abelianization, monomial_assignment};
use jumploci::covers::{betti_census, census_of_matrix, sublattices, sigma, CensusRow, CensusTotal};
use jumploci::fixtures::{compare_with_tables, cs_alexander_matrix, cs_assignment, mutate_entry, table_entries, table_matrix};
use jumploci::fox::{alexander_matrix, AlexanderMatrix};
use jumploci::invariants::{cover_invariants, surface_invariants, SurfaceInvariants};
use jumploci::laurent::Monomial;
use jumploci::presentation::{cartwright_steger, Presentation};
use jumploci::strata::{certify_cs_strata, line_rank_analysis, CertifyConfig, StrataReport};
use jumploci::{AbelianizationMap, FiniteCharacter};

const DEFAULT_SEED: u64 = 0x005e_edc5;

#[derive(Parser)]
#[command(name = "jumploci", version, about = "Fox calculus, Alexander strata and betti numbers of abelian covers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Alexander matrix (or one entry of it).
    Fox(FoxArgs),
    /// Certify the stratification of a two-variable Alexander matrix.
    Strata(StrataArgs),
    /// Betti numbers of all abelian covers up to a given degree.
    Census(CensusArgs),
    /// Count the index-n sublattices of Z^2.
    Count(CountArgs),
    /// Characteristic numbers of a surface.
    Invariants(InvariantsArgs),
    /// Run every check on the built-in Cartwright-Steger group.
    VerifyCs(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Builtin {
    Cs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
    Paper,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MatrixSource {
    /// Fox derivatives of the relations.
    Computed,
    /// The tabulated entries shipped with the crate.
    Tables,
}

#[derive(Args)]
#[group(required = false, multiple = false)]
struct SourceArgs {
    /// Use a built-in presentation.
    #[arg(long, value_enum)]
    builtin: Option<Builtin>,
    /// Read a presentation from a file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct FoxArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// A single entry, as GENERATOR,RELATION (relations numbered from 1).
    #[arg(long, value_name = "GEN,REL_INDEX")]
    entry: Option<String>,
}

#[derive(Args)]
struct StrataArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "computed")]
    matrix: MatrixSource,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    modulus_bound: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args)]
struct CensusArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..))]
    n_max: i64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct CountArgs {
    #[arg(long, value_parser = clap::value_parser!(i64).range(1..))]
    n: i64,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct InvariantsArgs {
    #[arg(long, requires_all = ["pg", "c2"], conflicts_with = "cover")]
    q: Option<i64>,
    #[arg(long)]
    pg: Option<i64>,
    #[arg(long)]
    c2: Option<i64>,
    /// Invariants of the degree-n cover of the Cartwright-Steger surface.
    #[arg(long, value_name = "N")]
    cover: Option<i64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    modulus_bound: u64,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(i64).range(1..))]
    n_max: i64,
    /// Perturb the tabulated entry with this row-major index before comparing.
    #[arg(long, value_name = "K")]
    mutate_fixture: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// Error that maps to exit status 2.
#[derive(Debug)]
struct UsageError(anyhow::Error);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(e: impl Into<anyhow::Error>) -> anyhow::Error {
    anyhow::Error::new(UsageError(e.into()))
}

struct Loaded {
    presentation: Presentation,
    map: AbelianizationMap,
    builtin: bool,
}

fn load(source: &SourceArgs) -> Result<Loaded> {
    match (&source.builtin, &source.file) {
        (Some(Builtin::Cs), _) | (None, None) => {
            Ok(Loaded { presentation: cartwright_steger(), map: cs_assignment(), builtin: true })
        }
        (None, Some(path)) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
            let presentation =
                Presentation::parse(&text).with_context(|| format!("parsing {}", path.display())).map_err(usage)?;
            let map = monomial_assignment(&presentation, None).map_err(usage)?;
            Ok(Loaded { presentation, map, builtin: false })
        }
    }
}

fn print_json(out: &mut impl Write, v: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(v)?)?;
    Ok(())
}

fn render_entry(p: &jumploci::Laurent, format: Format) -> String {
    match format {
        Format::Paper => p.to_fraction_string(),
        _ => p.to_expanded_string(),
    }
}

fn cmd_fox(args: &FoxArgs, out: &mut impl Write) -> Result<bool> {
    let loaded = load(&args.source)?;
    let p = &loaded.presentation;
    let a = alexander_matrix(p, &loaded.map);
    let names = p.generator_names();
    let cells: Vec<(usize, usize)> = match &args.entry {
        Some(spec) => {
            let (g, r) = spec.split_once(',').ok_or_else(|| usage(anyhow!("--entry expects GEN,REL_INDEX")))?;
            let gi = p.generator_index(g.trim()).ok_or_else(|| usage(anyhow!("unknown generator `{g}`")))?;
            let ri: usize = r.trim().parse().map_err(|_| usage(anyhow!("bad relation index `{r}`")))?;
            if ri == 0 || ri > p.relation_count() {
                return Err(usage(anyhow!("relation index {ri} out of range 1..={}", p.relation_count())));
            }
            vec![(gi, ri - 1)]
        }
        None => (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).collect(),
    };
    match args.format {
        Format::Json => {
            if args.entry.is_some() {
                let (i, j) = cells[0];
                print_json(out, &json!({"generator": names[i], "relation": j + 1, "terms": a.entry(i, j).to_term_list()}))?;
            } else {
                let mut v = a.to_json();
                v["generators"] = json!(names);
                print_json(out, &v)?;
            }
        }
        Format::Csv => {
            writeln!(out, "generator,relation,entry")?;
            for (i, j) in cells {
                writeln!(out, "{},{},\"{}\"", names[i], j + 1, a.entry(i, j).to_expanded_string())?;
            }
        }
        Format::Text | Format::Paper => {
            if args.entry.is_some() {
                let (i, j) = cells[0];
                writeln!(out, "{}", render_entry(a.entry(i, j), args.format))?;
            } else {
                for (i, j) in cells {
                    writeln!(out, "dR{}/d{} = {}", j + 1, names[i], render_entry(a.entry(i, j), args.format))?;
                }
            }
        }
    }
    Ok(true)
}

fn print_report_text(out: &mut impl Write, r: &StrataReport) -> Result<()> {
    let d = &r.divisibility;
    writeln!(out, "minors divisible by r - s: {}/{} ({} identically zero)", d.passed, d.checked, d.zero_minors)?;
    writeln!(
        out,
        "line s = r: generic rank {}, drop locus {}",
        r.line.generic_rank, r.line.drop_locus
    )?;
    writeln!(
        out,
        "character sweep: {} characters, {} off the expected rank pattern",
        r.torsion_sweep.len(),
        r.sweep_failures
    )?;
    writeln!(out, "nontrivial characters in V_1: {}", r.v1_nontrivial.len())?;
    writeln!(
        out,
        "sampling: seed {}, {} trials, min rank off the line {}",
        r.sampling.seed,
        r.sampling.trials,
        r.sampling.min_rank_off_line.map_or("-".into(), |x| x.to_string())
    )?;
    writeln!(out, "verdict: {}", r.verdict)?;
    if let Some(w) = &r.witness {
        writeln!(out, "witness: {w}")?;
    }
    Ok(())
}

fn cmd_strata(args: &StrataArgs, out: &mut impl Write) -> Result<bool> {
    let loaded = load(&args.source)?;
    let a = match (args.matrix, loaded.builtin) {
        (MatrixSource::Tables, true) => table_matrix()?,
        (MatrixSource::Tables, false) => return Err(usage(anyhow!("--matrix tables needs --builtin cs"))),
        (MatrixSource::Computed, _) => alexander_matrix(&loaded.presentation, &loaded.map),
    };
    match a.context().free_rank() {
        2 => {
            let cfg = CertifyConfig { modulus_bound: args.modulus_bound, samples: args.samples, seed: args.seed, ..Default::default() };
            let report = certify_cs_strata(&a, &cfg)?;
            match args.format {
                Format::Json => print_json(out, &serde_json::to_value(&report)?)?,
                _ => print_report_text(out, &report)?,
            }
            Ok(report.confirmed())
        }
        1 => {
            let ctx = a.context().clone();
            let la = line_rank_analysis(&a, &ctx, &[Monomial::from_free(vec![1])])?;
            let locus = la.drop_locus_laurent();
            let trivial = jumploci::strata::rank_at_character(&a, &FiniteCharacter::trivial(&ctx))?;
            match args.format {
                Format::Json => print_json(
                    out,
                    &json!({"generic_rank": la.generic_rank, "drop_locus_terms": locus.to_term_list(), "trivial_rank": trivial}),
                )?,
                _ => {
                    writeln!(out, "generic rank {}, drop locus {}", la.generic_rank, locus)?;
                    writeln!(out, "rank at the trivial character {trivial}")?;
                }
            }
            Ok(true)
        }
        f => Err(usage(anyhow!("strata needs one or two free variables, the abelianization has free rank {f}"))),
    }
}

fn census_row_line(row: &CensusRow, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => serde_json::to_string(row)?,
        Format::Csv => format!(
            "{},\"{}\",\"{}\",{}",
            row.n,
            join(&row.hnf),
            join(&row.invariant_factors),
            row.b1
        ),
        _ => format!("n = {:>3}  hnf = {:?}  G = {:?}  b1 = {}", row.n, row.hnf, row.invariant_factors, row.b1),
    })
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_census(args: &CensusArgs, out: &mut impl Write) -> Result<bool> {
    let loaded = load(&args.source)?;
    if args.format == Format::Csv {
        writeln!(out, "n,hnf,invariant_factors,b1")?;
    }
    let mut err = None;
    let totals = betti_census(&loaded.presentation, &loaded.map, args.n_max, |row| {
        if err.is_none() {
            if let Err(e) = census_row_line(row, args.format).and_then(|l| Ok(writeln!(out, "{l}")?)) {
                err = Some(e);
            }
        }
    })
    .map_err(usage)?;
    if let Some(e) = err {
        return Err(e);
    }
    if args.format == Format::Text {
        for t in &totals {
            writeln!(out, "n = {:>3}: {} covers (sigma = {}), b1 in {:?}..={:?}", t.n, t.rows, t.sigma, t.min_b1, t.max_b1)?;
        }
    }
    Ok(totals.iter().all(|t| t.rows as u64 == t.sigma))
}

fn cmd_count(args: &CountArgs, out: &mut impl Write) -> Result<bool> {
    let lattices = sublattices(args.n)?;
    match args.format {
        Format::Json => print_json(
            out,
            &json!({"n": args.n, "count": lattices.len(), "hnf": lattices.iter().map(|l| l.hnf_entries()).collect::<Vec<_>>()}),
        )?,
        _ => {
            writeln!(out, "{}", lattices.len())?;
            for l in &lattices {
                writeln!(out, "{}", join(&l.hnf_entries()))?;
            }
        }
    }
    Ok(lattices.len() as u64 == sigma(args.n as u64))
}

fn print_invariants(out: &mut impl Write, s: &SurfaceInvariants, format: Format) -> Result<()> {
    match format {
        Format::Json => print_json(out, &serde_json::to_value(s)?),
        _ => {
            writeln!(
                out,
                "q = {}, pg = {}, c2 = {}, chi = {}, c1^2 = {}, h11 = {}, ball quotient = {}",
                s.q, s.pg, s.c2, s.chi, s.c1_sq, s.h11, s.ball_quotient
            )?;
            Ok(())
        }
    }
}

fn cmd_invariants(args: &InvariantsArgs, out: &mut impl Write) -> Result<bool> {
    let s = match (args.cover, args.q, args.pg, args.c2) {
        (Some(n), _, _, _) => cover_invariants(n),
        (None, Some(q), Some(pg), Some(c2)) => surface_invariants(q, pg, c2),
        _ => return Err(usage(anyhow!("give --q, --pg and --c2, or --cover N"))),
    };
    match s {
        Ok(s) => {
            print_invariants(out, &s, args.format)?;
            Ok(true)
        }
        Err(e) => {
            eprintln!("{e}");
            Ok(false)
        }
    }
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn census_check(a: &AlexanderMatrix, n_max: i64) -> Result<(Vec<CensusTotal>, Check)> {
    let b1 = abelianization(&cartwright_steger()).free_rank;
    let mut bad: Option<CensusRow> = None;
    let totals = census_of_matrix(a, b1, n_max, &mut |row| {
        if row.b1 != 2 && bad.is_none() {
            bad = Some(row.clone());
        }
    })?;
    let counts_ok = totals.iter().all(|t| t.rows as u64 == t.sigma);
    let rows: usize = totals.iter().map(|t| t.rows).sum();
    let detail = match &bad {
        Some(r) => format!("cover n = {} hnf {:?} has b1 = {}", r.n, r.hnf, r.b1),
        None if !counts_ok => "cover counts differ from sigma(n)".into(),
        None => format!("{rows} covers up to degree {n_max}, all b1 = 2"),
    };
    Ok((totals, Check { name: "census", passed: bad.is_none() && counts_ok, detail }))
}

fn invariants_check(n_max: i64) -> Check {
    let base = cover_invariants(1).map(|s| s.chi);
    let bad = (1..=n_max).find(|&n| match (cover_invariants(n), &base) {
        (Ok(s), Ok(chi)) => {
            !(s.pg == n && s.chi == n * chi && s.noether_holds() && s.hodge_holds() && s.ball_quotient && 2 * s.q == 2)
        }
        _ => true,
    });
    Check {
        name: "invariants",
        passed: bad.is_none(),
        detail: match bad {
            Some(n) => format!("cover invariants inconsistent at n = {n}"),
            None => format!("pg = chi = n and c2 = 3n for n <= {n_max}"),
        },
    }
}

fn cmd_verify_cs(args: &VerifyArgs, out: &mut impl Write) -> Result<bool> {
    let a = cs_alexander_matrix();
    let mut tables = table_entries()?;
    if let Some(k) = args.mutate_fixture {
        if k >= tables.rows() * tables.cols() {
            return Err(usage(anyhow!("--mutate-fixture index {k} out of range")));
        }
        tables = mutate_entry(&tables, k);
    }
    let cmp = compare_with_tables(&a, &tables);
    let table_check = Check {
        name: "tables",
        passed: cmp.passed(),
        detail: match cmp.mismatches.first() {
            Some(m) => format!(
                "{}/{} entries match; first mismatch dR{}/d{}",
                cmp.matched, cmp.total, m.relation, m.generator
            ),
            None => format!("{}/{} entries match", cmp.matched, cmp.total),
        },
    };

    let cfg = CertifyConfig { modulus_bound: args.modulus_bound, samples: args.samples, seed: args.seed, ..Default::default() };
    let report = certify_cs_strata(&a, &cfg)?;
    let strata_check = Check {
        name: "strata",
        passed: report.confirmed(),
        detail: report.witness.clone().unwrap_or_else(|| "stratification confirmed".into()),
    };
    let (totals, census) = census_check(&a, args.n_max)?;
    let invariants = invariants_check(args.n_max);
    let checks = [table_check, strata_check, census, invariants];
    let all = checks.iter().all(|c| c.passed);

    match args.format {
        Format::Json => print_json(
            out,
            &json!({
                "tables": cmp,
                "strata": report,
                "census": totals,
                "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
                "passed": all,
            }),
        )?,
        _ => {
            writeln!(out, "tables: {}/{} entries match", cmp.matched, cmp.total)?;
            for m in &cmp.mismatches {
                writeln!(out, "  dR{}/d{}: computed {} ; tabulated {}", m.relation, m.generator, m.computed, m.expected)?;
            }
            print_report_text(out, &report)?;
            for t in &totals {
                writeln!(out, "census n = {:>3}: {:>3} covers (sigma {:>3}), b1 {:?}", t.n, t.rows, t.sigma, t.max_b1)?;
            }
            for c in &checks {
                writeln!(out, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
            }
        }
    }
    if let Some(c) = checks.iter().find(|c| !c.passed) {
        eprintln!("verification failed: {}: {}", c.name, c.detail);
    }
    Ok(all)
}

fn run(cli: &Cli) -> Result<bool> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Command::Fox(a) => cmd_fox(a, &mut out),
        Command::Strata(a) => cmd_strata(a, &mut out),
        Command::Census(a) => cmd_census(a, &mut out),
        Command::Count(a) => cmd_count(a, &mut out),
        Command::Invariants(a) => cmd_invariants(a, &mut out),
        Command::VerifyCs(a) => cmd_verify_cs(a, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
