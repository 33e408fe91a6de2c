use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use specdir::constructions::fixtures::figure_fixture;
use specdir::constructions::pipeline::{build_m11, build_n11};
use specdir::constructions::{triangle_set, verify_lemma, TriangleVariant};
use specdir::decomposition::{decompose, decompose_along, reconstruct};
use specdir::field::primes_up_to;
use specdir::format::{format_rational, parse_any, write_ascii, write_json, GridEntry};
use specdir::plane::{
    direction_profile, ghidelli_bound, special_directions, Direction, Grid, RationalGrid,
};
use specdir::redei::{
    affine_profile_test, is_equidistributed_redei, orthogonality_level, symmetric_coefficients,
    ColumnCounts,
};
use specdir::search::anneal::{anneal, standard_targets, AnnealParams};
use specdir::search::probe::exhaustive_witness;
use specdir::search::verify::mask_points;
use specdir::search::{
    enumerate_orbits, gap_spectrum, min_cardinality_probe, probe_cardinality, redei_crosscheck,
    verify_no_two_special, verify_three_special_uniqueness, verify_union_lines_iff, CacheRecord,
    ProbeReport, ProbeStatus, SearchCache, SpectrumOptions,
};
use specdir::{Error, Prime};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "specdir",
    version,
    about = "Special directions of point sets over F_p^2"
)]
struct Cli {
    /// Grid output format.
    #[arg(long, value_enum, default_value_t = Format::Ascii, global = true)]
    format: Format,

    /// Print progress notes to stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Ascii,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Line profiles and special directions of a grid file ("-" for stdin).
    Spectrum {
        input: PathBuf,
        /// Print a JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Run one of the built-in checks and print a JSON verdict.
    Verify {
        #[arg(value_enum)]
        check: Check,
        #[arg(long)]
        p: u32,
        /// Random samples for sampled checks.
        #[arg(long, default_value_t = 10_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a named construction as a grid.
    Construct {
        #[arg(long, value_enum)]
        name: Construction,
        #[arg(long)]
        p: Option<u32>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Decompose a grid into weighted lines.
    Decompose {
        input: PathBuf,
        /// Peeling order, e.g. "(1,0);(1,1);(0,1)".
        #[arg(long)]
        order: Option<String>,
        /// Also write the line weighting JSON to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for sets with a given cardinality and number of special directions.
    Search {
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum, default_value_t = Mode::Anneal)]
        mode: Mode,
        #[arg(long)]
        cardinality: Option<u32>,
        #[arg(long)]
        special: Option<u32>,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Cache directory; defaults to $SPECDIR_CACHE_DIR.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Which special-direction counts occur for sets of size divisible by p.
    Gap {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
    /// Symmetric coefficients g_i and the orthogonality level of a set.
    Redei { input: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Lemma61,
    NoTwo,
    Uniqueness,
    UnionLines,
    RedeiCrosscheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Construction {
    Triangle,
    UpperTriangle,
    Plus5,
    Fig7,
    Fig11,
    Fig13,
    /// 65-point set variant of the p = 13 example.
    Fig13Set,
    /// Difference of the two p = 11 triangles.
    M11,
    /// `M11 + M11` shifted by 5 plus the correction columns.
    N11,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Orbit,
    Anneal,
    /// Pipeline sweep for four directions, then annealing.
    Probe,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Cap(String),
    Fail(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Cap(e.to_string()),
            Error::InvalidPrime(_)
            | Error::InvalidArgument(_)
            | Error::Parse { .. }
            | Error::Dimension(_)
            | Error::PrimeMismatch(..)
            | Error::Json(_) => Failure::Usage(e.to_string()),
            _ => Failure::Fail(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FAIL),
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Cap(m) => (EXIT_CAP, m),
                Failure::Fail(m) => (EXIT_FAIL, m),
            };
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Spectrum { input, json } => cmd_spectrum(input, *json),
        Command::Verify {
            check,
            p,
            samples,
            seed,
        } => cmd_verify(*check, *p, *samples, *seed),
        Command::Construct { name, p, output } => {
            cmd_construct(cli.format, *name, *p, output.as_deref())
        }
        Command::Decompose {
            input,
            order,
            output,
        } => cmd_decompose(input, order.as_deref(), output.as_deref()),
        Command::Search {
            p,
            mode,
            cardinality,
            special,
            budget,
            jobs,
            seed,
            cache_dir,
        } => with_jobs(*jobs, || {
            cmd_search(SearchArgs {
                p: *p,
                mode: *mode,
                cardinality: *cardinality,
                special: *special,
                budget: *budget,
                seed: *seed,
                cache_dir: cache_dir.clone(),
                verbose: cli.verbose > 0,
            })
        }),
        Command::Gap { p, seed, jobs } => with_jobs(*jobs, || cmd_gap(*p, *seed)),
        Command::Redei { input } => cmd_redei(input),
    }
}

fn with_jobs(jobs: usize, f: impl FnOnce() -> Outcome + Send) -> Outcome {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Fail(e.to_string()))?;
    pool.install(f)
}

fn prime(p: u32) -> Result<Prime, Failure> {
    Prime::new(p).map_err(Failure::from)
}

fn read_input(path: &Path) -> Result<RationalGrid, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
    };
    parse_any(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn labels(p: Prime, ds: impl IntoIterator<Item = Direction>) -> Vec<String> {
    ds.into_iter().map(|d| d.label(p)).collect()
}

/// Ghidelli bound when `f` is a `{0,1}` grid of size `kp`, `0 < k < p`.
fn grid_bound(f: &RationalGrid) -> Option<u32> {
    let p = f.prime();
    let set = f.to_integer()?.to_point_set()?;
    let n = set.len() as u32;
    (n.is_multiple_of(p.get()) && n > 0 && n < p.plane_size() as u32)
        .then(|| ghidelli_bound(p, n / p.get()))
}

fn cmd_spectrum(input: &Path, as_json: bool) -> Outcome {
    let f = read_input(input)?;
    let p = f.prime();
    let special = special_directions(&f);
    let is_set = f.to_integer().and_then(|g| g.to_point_set()).is_some();
    let total = format_rational(&f.total());
    let bound = grid_bound(&f);
    let profiles: Vec<(String, Vec<String>)> = Direction::all(p)
        .map(|d| {
            (
                d.label(p),
                direction_profile(&f, d)
                    .sums
                    .iter()
                    .map(format_rational)
                    .collect(),
            )
        })
        .collect();
    if as_json {
        print_json(&json!({
            "p": p.get(),
            "total": total,
            "set": is_set,
            "profiles": profiles.iter().map(|(d, s)| json!({"direction": d, "sums": s})).collect::<Vec<_>>(),
            "special": labels(p, special.iter().copied()),
            "ghidelli_bound": bound,
        }));
        return Ok(true);
    }
    println!("p={}", p.get());
    for (d, sums) in &profiles {
        println!("profile {d}: {}", sums.join(" "));
    }
    let special_text = if special.is_empty() {
        "none".to_string()
    } else {
        labels(p, special.iter().copied()).join(",")
    };
    let mut summary = format!("special: {special_text}");
    if is_set {
        summary.push_str(&format!("; |S|={total}"));
    } else {
        summary.push_str(&format!("; total={total}"));
    }
    if let Some(b) = bound {
        summary.push_str(&format!("; ghidelli_bound={b}"));
    }
    println!("{summary}");
    Ok(true)
}

fn verdict(check: &str, p: u32, passed: bool, report: Value) -> Outcome {
    print_json(&json!({ "check": check, "p": p, "passed": passed, "report": report }));
    Ok(passed)
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn cmd_verify(check: Check, p: u32, samples: u64, seed: u64) -> Outcome {
    let pr = prime(p)?;
    match check {
        Check::Lemma61 => {
            if p > 31 {
                return Err(Failure::Cap(format!(
                    "p = {p} exceeds the cap of 31 for lemma61"
                )));
            }
            let reports: Vec<_> = primes_up_to(p).into_iter().map(verify_lemma).collect();
            let passed = reports.iter().all(|r| r.passed());
            verdict("lemma61", p, passed, to_value(&reports))
        }
        Check::NoTwo => {
            let r = verify_no_two_special(pr)?;
            verdict("no-two", p, r.passed(), to_value(&r))
        }
        Check::Uniqueness => {
            let r = verify_three_special_uniqueness(pr)?;
            verdict("uniqueness", p, r.passed(), to_value(&r))
        }
        Check::UnionLines => {
            let r = verify_union_lines_iff(pr)?;
            verdict("union-lines", p, r.passed(), to_value(&r))
        }
        Check::RedeiCrosscheck => {
            let sampled = if p <= 3 { None } else { Some(samples) };
            let r = redei_crosscheck(pr, sampled, seed)?;
            verdict("redei-crosscheck", p, r.passed(), to_value(&r))
        }
    }
}

fn render<T: GridEntry>(format: Format, g: &Grid<T>) -> String {
    match format {
        Format::Ascii => write_ascii(g),
        Format::Json => write_json(g) + "\n",
    }
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Fail(format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_construct(
    format: Format,
    name: Construction,
    p: Option<u32>,
    output: Option<&Path>,
) -> Outcome {
    let fixed = |q: u32| -> Result<u32, Failure> {
        match p {
            Some(given) if given != q => Err(Failure::Usage(format!(
                "this construction exists only for p = {q}"
            ))),
            _ => Ok(q),
        }
    };
    let grid = match name {
        Construction::Triangle | Construction::UpperTriangle => {
            let p = p.ok_or_else(|| Failure::Usage("--p is required for triangles".into()))?;
            let variant = if name == Construction::Triangle {
                TriangleVariant::Lower
            } else {
                TriangleVariant::Upper
            };
            triangle_set(prime(p)?, variant).to_grid::<i64>()
        }
        Construction::Plus5 => figure_fixture(fixed(5)?)?.grid,
        Construction::Fig7 => figure_fixture(fixed(7)?)?.grid,
        Construction::Fig11 => figure_fixture(fixed(11)?)?.grid,
        Construction::Fig13 => figure_fixture(fixed(13)?)?.grid,
        Construction::Fig13Set => {
            fixed(13)?;
            specdir::constructions::fixtures::p13_set()
        }
        Construction::M11 => {
            fixed(11)?;
            build_m11().to_grid()
        }
        Construction::N11 => {
            fixed(11)?;
            build_n11().to_grid()
        }
    };
    emit(&render(format, &grid), output)?;
    Ok(true)
}

fn cmd_decompose(input: &Path, order: Option<&str>, output: Option<&Path>) -> Outcome {
    let f = read_input(input)?;
    let p = f.prime();
    let weighting = match order {
        Some(spec) => {
            let dirs = spec
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| Direction::parse(p, s.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| Failure::Usage(e.to_string()))?;
            decompose_along(&f, &dirs)?
        }
        None => decompose(&f)?,
    };
    let exact = reconstruct(&weighting) == f;
    let wj = weighting.to_json();
    if let Some(path) = output {
        emit(
            &(serde_json::to_string_pretty(&wj).unwrap() + "\n"),
            Some(path),
        )?;
    }
    print_json(&json!({
        "p": p.get(),
        "special": labels(p, special_directions(&f)),
        "support": labels(p, weighting.support()),
        "reconstruction": if exact { "exact" } else { "mismatch" },
        "weighting": wj,
    }));
    Ok(exact)
}

struct SearchArgs {
    p: u32,
    mode: Mode,
    cardinality: Option<u32>,
    special: Option<u32>,
    budget: u64,
    seed: u64,
    cache_dir: Option<PathBuf>,
    verbose: bool,
}

fn open_cache(dir: Option<&Path>) -> Result<Option<SearchCache>, Failure> {
    Ok(match dir {
        Some(d) => Some(SearchCache::open(d)?),
        None => SearchCache::from_env()?,
    })
}

/// Appends a record unless an identical one is already cached.
#[allow(clippy::too_many_arguments)]
fn remember(
    cache: &SearchCache,
    p: u32,
    cardinality: u32,
    special: u32,
    kind: &str,
    method: &str,
    points: Vec<u32>,
    seed: Option<u64>,
) -> Result<(), Failure> {
    let record = CacheRecord {
        p,
        cardinality,
        special,
        kind: kind.into(),
        method: method.into(),
        points,
        seed,
    };
    if !cache.records()?.contains(&record) {
        cache.append(&record)?;
    }
    Ok(())
}

fn cmd_search(a: SearchArgs) -> Outcome {
    let p = prime(a.p)?;
    let need = |v: Option<u32>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("--{flag} is required in this mode")))
    };
    match a.mode {
        Mode::Orbit => {
            let n = need(a.cardinality, "cardinality")?;
            let lm = specdir::search::LineMasks::new(p)?;
            let cache = open_cache(a.cache_dir.as_deref())?;
            let mut orbits = 0u64;
            let mut mass = 0u64;
            let mut matching = Vec::new();
            for rep in enumerate_orbits(p, n)? {
                orbits += 1;
                mass += rep.orbit_size;
                let d = lm.special_count(rep.mask);
                if a.special.is_none_or(|want| want == d) {
                    if let Some(c) = &cache {
                        remember(c, a.p, n, d, "orbit", "orbit", mask_points(rep.mask), None)?;
                    }
                    matching.push(json!({"points": mask_points(rep.mask), "orbit_size": rep.orbit_size, "special": d}));
                }
            }
            print_json(&json!({
                "p": a.p, "mode": "orbit", "cardinality": n, "special": a.special,
                "orbits": orbits, "mass": mass, "matching": matching,
            }));
            Ok(true)
        }
        Mode::Exhaustive => {
            let n = need(a.cardinality, "cardinality")?;
            let d = need(a.special, "special")?;
            let w = exhaustive_witness(p, n, d)?;
            if let (Some(c), Some(w)) = (open_cache(a.cache_dir.as_deref())?, w) {
                remember(&c, a.p, n, d, "witness", "exhaustive", mask_points(w), None)?;
            }
            print_json(&json!({
                "p": a.p, "mode": "exhaustive", "cardinality": n, "special": d,
                "status": if w.is_some() { "found" } else { "none-exists" },
                "witness": w.map(mask_points),
            }));
            Ok(true)
        }
        Mode::Anneal | Mode::Probe => {
            let d = need(a.special, "special")?;
            let cache = open_cache(a.cache_dir.as_deref())?;
            let report = match (a.mode, a.cardinality) {
                (Mode::Probe, None) => min_cardinality_probe(p, d, a.budget, a.seed)?,
                (Mode::Probe, Some(n)) => probe_cardinality(p, n, d, a.budget, a.seed)?,
                (_, n) => {
                    let n = need(n, "cardinality")?;
                    if let Some(c) = &cache {
                        if let Some(hit) = c.lookup(a.p, n, d)? {
                            if a.verbose {
                                eprintln!("cache hit in {}", c.path().display());
                            }
                            let mut v = to_value(&ProbeReport {
                                p: a.p,
                                special: d,
                                k: n / a.p,
                                cardinality: n,
                                status: ProbeStatus::Found,
                                method: None,
                                witness: Some(hit.points),
                            });
                            v["mode"] = json!("anneal");
                            v["cached"] = json!(true);
                            print_json(&v);
                            return Ok(true);
                        }
                    }
                    let targets = standard_targets(p, d)?;
                    let out = anneal(p, n, &targets, &AnnealParams::with_budget(a.budget, a.seed))?;
                    ProbeReport {
                        p: a.p,
                        special: d,
                        k: n / a.p,
                        cardinality: n,
                        status: if out.witness.is_some() {
                            ProbeStatus::Found
                        } else {
                            ProbeStatus::NoneWithinBudget
                        },
                        method: Some(specdir::search::probe::ProbeMethod::Anneal),
                        witness: out.witness,
                    }
                }
            };
            if let (Some(c), Some(w)) = (&cache, &report.witness) {
                let method = serde_json::to_value(report.method).unwrap();
                let method = method.as_str().unwrap_or("");
                remember(
                    c,
                    a.p,
                    report.cardinality,
                    d,
                    "witness",
                    method,
                    w.clone(),
                    Some(a.seed),
                )?;
            }
            let mut v = to_value(&report);
            v["mode"] = json!(if a.mode == Mode::Probe {
                "probe"
            } else {
                "anneal"
            });
            print_json(&v);
            Ok(true)
        }
    }
}

fn cmd_gap(p: u32, seed: u64) -> Outcome {
    let options = SpectrumOptions {
        seed,
        ..SpectrumOptions::default()
    };
    let r = gap_spectrum(prime(p)?, &options)?;
    let ok = r.reverify();
    print_json(&to_value(&r));
    Ok(ok)
}

fn cmd_redei(input: &Path) -> Outcome {
    let f = read_input(input)?;
    let p = f.prime();
    let set = f
        .to_integer()
        .and_then(|g| g.to_point_set())
        .ok_or_else(|| Failure::Fail("the redei command needs a {0,1} grid".into()))?;
    let g = symmetric_coefficients(&set);
    let w = ColumnCounts::of(&set);
    let equidistributed: Option<Vec<u32>> = (set.len() % p.get() as usize == 0).then(|| {
        (0..p.get())
            .filter(|&m| is_equidistributed_redei(&set, m).unwrap())
            .collect()
    });
    print_json(&json!({
        "p": p.get(),
        "cardinality": set.len(),
        "g": g.coeffs.iter().map(|c| c.coeffs().to_vec()).collect::<Vec<_>>(),
        "vanishing_prefix": g.vanishing_prefix(),
        "column_counts": w.w,
        "orthogonality_level": orthogonality_level(&w),
        "affine_profile": affine_profile_test(&w).map(|(a, b)| [a, b]),
        "equidistributed_slopes": equidistributed,
    }));
    Ok(true)
}
