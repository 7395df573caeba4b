//! Command-line surface for the relgeo toolkit: ball construction and
//! caching, alphabet enlargement, language and growth-series emission,
//! property sweeps, and conjugacy decisions.

mod groupfile;

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use relgeo::automata::Dfa;
use relgeo::conjugacy::{
    build_phi, check_bcd, check_nsc, conjugate_exact, decide_conjugacy, decide_conjugacy_checked,
};
use relgeo::fellow::{
    biautomatic_fellow_check, check_lexists, check_lforall, fftp_constant, FellowReport,
};
use relgeo::group::{evaluate, GroupElement, MarkedAlphabet, Word};
use relgeo::langmach::{check_l1, in_rel_language, ns_automaton, rel_language, shortlex_factor_dfa};
use relgeo::metric::{alphabet_hash, BallTable, Metric, DEFAULT_MAX_ELEMENTS};
use relgeo::samples;

use groupfile::{to_group_file, GroupFile};

// ---------------------------------------------------------------- errors

pub struct CliError {
    pub code: &'static str,
    pub detail: String,
}

pub type CliResult<T> = Result<T, CliError>;

impl CliError {
    pub fn usage(detail: impl Into<String>) -> CliError {
        CliError { code: "usage", detail: detail.into() }
    }
}

impl From<relgeo::Error> for CliError {
    fn from(e: relgeo::Error) -> CliError {
        use relgeo::Error::*;
        let code = match &e {
            MalformedElement(_) => "malformed-element",
            AlphabetMismatch { .. } => "alphabet-mismatch",
            OutOfRange { .. } => "out-of-range",
            Capacity { .. } => "capacity",
            StateBudget(_) => "state-budget",
            EmptyAlphabet => "empty-alphabet",
            DegenerateConstant => "degenerate-constant",
            NotPrefixClosed => "not-prefix-closed",
            L1Violation { .. } => "l1-violation",
            ParabolicShortening => "parabolic-shortening",
            IdentityLetter(_) => "identity-letter",
            DuplicateSymbol(_) => "duplicate-symbol",
            BadParabolicTag { .. } => "bad-parabolic-tag",
            UnknownSymbol(_) => "unknown-symbol",
            SoundnessAlert => "soundness",
            Cache(_) => "cache",
        };
        CliError { code, detail: e.to_string() }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError { code: "io", detail: e.to_string() }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError { code: "json", detail: e.to_string() }
    }
}

// ------------------------------------------------------------- interface

#[derive(Parser)]
#[command(
    name = "relgeo",
    version,
    about = "Geodesic languages, growth series, and conjugacy for free products of abelian groups"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build or inspect word-length ball tables
    Ball {
        #[command(subcommand)]
        cmd: BallCmd,
    },
    /// Derive enlarged generating sets
    Genset {
        #[command(subcommand)]
        cmd: GensetCmd,
    },
    /// Emit language automata and growth series
    Lang {
        #[command(subcommand)]
        cmd: LangCmd,
    },
    /// Run empirical property sweeps
    Check {
        #[command(subcommand)]
        cmd: CheckCmd,
    },
    /// Decide and benchmark conjugacy
    Conj {
        #[command(subcommand)]
        cmd: ConjCmd,
    },
    /// Run the consistency suite on a group
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
}

/// Where the group comes from and how far the length oracles reach.
#[derive(Args)]
struct GroupArgs {
    /// JSON group description file
    #[arg(long, conflicts_with = "sample")]
    group: Option<PathBuf>,
    /// Alphabet name inside the group file
    #[arg(long, requires = "group")]
    alphabet: Option<String>,
    /// Built-in example group: z, z2, f2, z2xz, f2t
    #[arg(long)]
    sample: Option<String>,
    /// Radius of the full-alphabet ball oracle
    #[arg(long, default_value_t = 8)]
    radius: u32,
    /// Radius of the per-factor ball oracles
    #[arg(long, default_value_t = 12)]
    factor_radius: u32,
    /// Directory for cached ball tables
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads for parallel sweeps
    #[arg(long)]
    jobs: Option<usize>,
}

impl GroupArgs {
    fn load(&self) -> CliResult<(relgeo::GroupSpec, MarkedAlphabet)> {
        if let Some(j) = self.jobs {
            // ignore failure: the pool can be initialized only once
            let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
        }
        match (&self.group, &self.sample) {
            (Some(path), None) => {
                let name = self
                    .alphabet
                    .as_deref()
                    .ok_or_else(|| CliError::usage("--group requires --alphabet"))?;
                GroupFile::read(path)?.alphabet(name)
            }
            (None, Some(name)) => samples::by_name(name).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown sample {name:?}; expected one of {:?}",
                    samples::SAMPLE_NAMES
                ))
            }),
            _ => Err(CliError::usage("exactly one of --group or --sample is required")),
        }
    }

    fn label(&self) -> String {
        match (&self.group, &self.sample) {
            (Some(p), _) => format!(
                "{}:{}",
                p.display(),
                self.alphabet.as_deref().unwrap_or("?")
            ),
            (_, Some(s)) => s.clone(),
            _ => "?".to_string(),
        }
    }

    /// Length oracles, with the full ball served from the cache directory
    /// when the alphabet hash and radius match.
    fn metric(&self) -> CliResult<Metric> {
        let (spec, alphabet) = self.load()?;
        let Some(dir) = &self.cache else {
            return Ok(Metric::build(spec, alphabet, self.radius, self.factor_radius)?);
        };
        let hash = alphabet_hash(&spec, &alphabet);
        let path = dir.join(format!("ball-{hash:016x}-r{}.gwb", self.radius));
        let ball = match fs::File::open(&path) {
            Ok(mut f) => BallTable::read_cache(&mut f, hash, self.radius)?,
            Err(_) => {
                let b =
                    BallTable::build(&spec, &alphabet, None, self.radius, DEFAULT_MAX_ELEMENTS)?;
                fs::create_dir_all(dir)?;
                let mut buf = Vec::new();
                b.write_cache(&mut buf, hash)?;
                write_atomic(&path, &buf)?;
                b
            }
        };
        let mut metric = Metric::build(spec, alphabet, 0, self.factor_radius)?;
        metric.ball = Some(ball);
        Ok(metric)
    }
}

#[derive(Subcommand)]
enum BallCmd {
    /// Build the ball table (and cache it when --cache is given)
    Build {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Print radius, element count, and sphere sizes
    Info {
        #[command(flatten)]
        group: GroupArgs,
    },
}

#[derive(Subcommand)]
enum GensetCmd {
    /// Alphabet of all elements of length at most m
    EnlargeBall {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        m: u32,
        /// Output group file (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Alphabet extended by all factor elements of factor length at most k
    EnlargeParabolic {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FactorLang {
    /// One shortlex word per factor element
    Shortlex,
    /// All factor geodesics
    Geo,
}

#[derive(Subcommand)]
enum LangCmd {
    /// Geodesic-word acceptor and its growth series
    Geo {
        #[command(flatten)]
        group: GroupArgs,
        /// Falsification constant, or "auto" for the empirical sweep
        #[arg(long = "fftp-C", default_value = "auto")]
        fftp_c: String,
        /// DFA text output file
        #[arg(long)]
        out: Option<PathBuf>,
        /// DOT rendering output file
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Block-structured words with chosen factor languages
    Rel {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "factor-lang", value_enum, default_value_t = FactorLang::Shortlex)]
        factor_lang: FactorLang,
        #[arg(long = "fftp-C", default_value = "auto")]
        fftp_c: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Growth series of the geodesic normal forms (one word per element)
    Growth {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long = "fftp-C", default_value = "auto")]
        fftp_c: String,
        /// Number of series coefficients to print
        #[arg(long, default_value_t = 10)]
        coeffs: usize,
    },
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    group: GroupArgs,
    /// Word-length bound of the sweep
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Largest constant admitted before reporting failure
    #[arg(long, default_value_t = 4)]
    max_const: u32,
    /// CSV report file (stdout when omitted)
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CheckCmd {
    /// Falsification-by-fellow-traveler constant
    Fftp(CheckArgs),
    /// Neighboring-shorter-conjugate constant
    Nsc(CheckArgs),
    /// Bounded-conjugacy-diagram constant
    Bcd(CheckArgs),
    /// Factor-language geodesy and coverage
    L1(CheckArgs),
    /// Universal single-letter fellow-traveler bound on the normal forms
    Lforall(CheckArgs),
    /// Existential single-letter fellow-traveler bound on the geodesics
    Lexists(CheckArgs),
    /// Two-sided fellow-traveler bound on the normal forms
    Biauto(CheckArgs),
}

#[derive(Subcommand)]
enum ConjCmd {
    /// Decide whether two words represent conjugate elements
    Decide {
        #[command(flatten)]
        group: GroupArgs,
        /// First word: whitespace-separated symbols, ^-1 for inverses
        w1: String,
        /// Second word
        w2: String,
        /// Conjugator length bound
        #[arg(long, default_value_t = 3)]
        bound: u32,
        /// Completeness bound of the rewriting table
        #[arg(long, default_value_t = 5)]
        phi_len: usize,
    },
    /// Time the decision procedure on random words
    Bench {
        #[command(flatten)]
        group: GroupArgs,
        /// Comma-separated word lengths
        #[arg(long, default_value = "50,100,200,400")]
        sizes: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        bound: u32,
        #[arg(long, default_value_t = 5)]
        phi_len: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Cross-check automata, series, and conjugacy against direct oracles
    All {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
}

// --------------------------------------------------------------- helpers

fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            std::io::stdout().flush()?;
            Ok(())
        }
    }
}

/// Resolve --fftp-C: a number, or the empirical sweep with the
/// documented defaults.
fn resolve_c(m: &Metric, arg: &str) -> CliResult<(u32, String)> {
    if arg == "auto" {
        let radius = m.ball.as_ref().map(|b| b.radius as usize).unwrap_or(0);
        let l_max = 8usize.min(radius);
        let c = fftp_constant(m, l_max, 8)?.ok_or_else(|| {
            CliError::usage(format!("no falsification constant up to 8 at L_max = {l_max}"))
        })?;
        Ok((c, format!("{c} (empirical, L_max={l_max}, K_max=8)")))
    } else {
        let c: u32 = arg
            .parse()
            .map_err(|_| CliError::usage(format!("--fftp-C expects a number or \"auto\", got {arg:?}")))?;
        Ok((c, c.to_string()))
    }
}

fn factor_languages(m: &Metric, c: u32, kind: FactorLang) -> CliResult<BTreeMap<usize, Dfa>> {
    let mut langs = BTreeMap::new();
    for omega in 0..m.spec.factors.len() {
        if m.alphabet.factor_letters(omega).is_empty() {
            continue;
        }
        let dfa = match kind {
            FactorLang::Shortlex => shortlex_factor_dfa(m, omega, c)?,
            FactorLang::Geo => relgeo::langmach::factor_geodesic_dfa(m, omega, c)?,
        };
        langs.insert(omega, dfa);
    }
    Ok(langs)
}

/// Geodesic normal forms: geodesics whose parabolic blocks are shortlex.
fn normal_form_dfa(m: &Metric, c: u32) -> CliResult<Dfa> {
    let geo = ns_automaton(m, c)?;
    let rel = rel_language(m, &factor_languages(m, c, FactorLang::Shortlex)?)?;
    Ok(geo.intersect(&rel)?.minimize())
}

fn series_line(dfa: &Dfa, n_coeffs: usize) -> String {
    let series = dfa.growth_series();
    let coeffs: Vec<String> =
        series.coefficients(n_coeffs + 1).iter().map(|c| c.to_string()).collect();
    format!("{} ; coeffs: {}", series.render(), coeffs.join(" "))
}

fn emit_dfa(m: &Metric, dfa: &Dfa, out: Option<&PathBuf>, dot: Option<&PathBuf>) -> CliResult<()> {
    if let Some(p) = out {
        write_atomic(p, dfa.to_text().as_bytes())?;
        println!("dfa written to {}", p.display());
    }
    if let Some(p) = dot {
        let symbols: Vec<String> = m.alphabet.letters.iter().map(|l| l.symbol.clone()).collect();
        write_atomic(p, dfa.to_dot(&symbols).as_bytes())?;
        println!("dot written to {}", p.display());
    }
    Ok(())
}

fn emit_csv(path: Option<&PathBuf>, header: &str, rows: &[String]) -> CliResult<()> {
    let mut text = String::from(header);
    text.push('\n');
    for r in rows {
        text.push_str(r);
        text.push('\n');
    }
    emit(path, &text)
}

fn parse_word(m: &Metric, text: &str) -> CliResult<Word> {
    Ok(m.alphabet.parse_word(&m.spec, text)?)
}

fn show_word(m: &Metric, w: &Word) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        m.alphabet.format_word(w)
    }
}

// -------------------------------------------------------------- commands

fn ball_cmd(cmd: BallCmd) -> CliResult<()> {
    let (group, info) = match cmd {
        BallCmd::Build { group } => (group, false),
        BallCmd::Info { group } => (group, true),
    };
    let metric = group.metric()?;
    let ball = metric.ball.as_ref().expect("radius is positive");
    println!("alphabet: {} letters, hash {:016x}", metric.alphabet.len(), alphabet_hash(&metric.spec, &metric.alphabet));
    println!("radius: {}", ball.radius);
    println!("elements: {}", ball.lengths.len());
    if info {
        let sizes: Vec<String> = ball.sphere_sizes().iter().map(|s| s.to_string()).collect();
        println!("spheres: {}", sizes.join(" "));
    }
    Ok(())
}

fn genset_cmd(cmd: GensetCmd) -> CliResult<()> {
    let (group, out, enlarged, name) = match cmd {
        GensetCmd::EnlargeBall { group, m, out } => {
            let metric = group.metric()?;
            let ball = metric.ball.as_ref().expect("radius is positive");
            let bigger = relgeo::genset::ball_enlarge(&metric.spec, &metric.alphabet, m, ball)?;
            (metric, out, bigger, format!("ball-{m}"))
        }
        GensetCmd::EnlargeParabolic { group, k, out } => {
            let metric = group.metric()?;
            let bigger = relgeo::genset::parabolic_enlarge(
                &metric.spec,
                &metric.alphabet,
                k,
                &metric.factor_balls,
            )?;
            (metric, out, bigger, format!("parabolic-{k}"))
        }
    };
    let file = to_group_file(&group.spec, &enlarged, &name)?;
    let text = serde_json::to_string_pretty(&file)?;
    emit(out.as_ref(), &format!("{text}\n"))?;
    if out.is_some() {
        println!("alphabet {name:?}: {} letters", enlarged.len());
    }
    Ok(())
}

fn lang_cmd(cmd: LangCmd) -> CliResult<()> {
    match cmd {
        LangCmd::Geo { group, fftp_c, out, dot } => {
            let m = group.metric()?;
            let (c, c_label) = resolve_c(&m, &fftp_c)?;
            let dfa = ns_automaton(&m, c)?;
            println!("fftp constant: {c_label}");
            println!("states: {}", dfa.state_count());
            println!("series: {}", series_line(&dfa, 10));
            emit_dfa(&m, &dfa, out.as_ref(), dot.as_ref())
        }
        LangCmd::Rel { group, factor_lang, fftp_c, out, dot } => {
            let m = group.metric()?;
            let (c, c_label) = resolve_c(&m, &fftp_c)?;
            let dfa = rel_language(&m, &factor_languages(&m, c, factor_lang)?)?.minimize();
            println!("fftp constant: {c_label}");
            println!("states: {}", dfa.state_count());
            emit_dfa(&m, &dfa, out.as_ref(), dot.as_ref())
        }
        LangCmd::Growth { group, fftp_c, coeffs } => {
            let m = group.metric()?;
            let (c, c_label) = resolve_c(&m, &fftp_c)?;
            let dfa = normal_form_dfa(&m, c)?;
            println!("fftp constant: {c_label}");
            println!("states: {}", dfa.state_count());
            println!("series: {}", series_line(&dfa, coeffs));
            Ok(())
        }
    }
}

fn fellow_row(label: &str, group: &str, max_len: usize, r: &FellowReport, m: &Metric) -> String {
    let witness = r
        .witness
        .as_ref()
        .map(|(w, u)| format!("{} | {}", show_word(m, w), show_word(m, u)))
        .unwrap_or_default();
    format!(
        "{label},{group},{max_len},{},{},\"{witness}\"",
        r.max_constant, r.holds
    )
}

fn check_cmd(cmd: CheckCmd) -> CliResult<()> {
    let header = "check,group,max_len,constant,holds,witness";
    let (args, rows): (CheckArgs, Vec<String>) = match cmd {
        CheckCmd::Fftp(a) => {
            let m = a.group.metric()?;
            let k = fftp_constant(&m, a.max_len, a.max_const)?;
            let row = format!(
                "fftp,{},{},{},{},",
                a.group.label(),
                a.max_len,
                k.map(|k| k.to_string()).unwrap_or_else(|| format!(">{}", a.max_const)),
                k.is_some()
            );
            (a, vec![row])
        }
        CheckCmd::Nsc(a) => {
            let m = a.group.metric()?;
            let k = check_nsc(&m, a.max_len, a.max_const)?;
            let row = format!(
                "nsc,{},{},{},{},",
                a.group.label(),
                a.max_len,
                k.map(|k| k.to_string()).unwrap_or_else(|| format!(">{}", a.max_const)),
                k.is_some()
            );
            (a, vec![row])
        }
        CheckCmd::Bcd(a) => {
            let m = a.group.metric()?;
            let k = check_bcd(&m, a.max_len, a.max_const)?;
            let row = format!(
                "bcd,{},{},{},{},",
                a.group.label(),
                a.max_len,
                k.map(|k| k.to_string()).unwrap_or_else(|| format!(">{}", a.max_const)),
                k.is_some()
            );
            (a, vec![row])
        }
        CheckCmd::L1(a) => {
            let m = a.group.metric()?;
            let mut rows = Vec::new();
            for omega in 0..m.spec.factors.len() {
                if m.alphabet.factor_letters(omega).is_empty() {
                    continue;
                }
                let dfa = shortlex_factor_dfa(&m, omega, 2)?;
                let (holds, witness) = match check_l1(&m, omega, &dfa) {
                    Ok(()) => (true, String::new()),
                    Err(relgeo::Error::L1Violation { witness, .. }) => (
                        false,
                        witness.map(|w| show_word(&m, &w)).unwrap_or_default(),
                    ),
                    Err(e) => return Err(e.into()),
                };
                rows.push(format!(
                    "l1,{}:factor{omega},{},,{holds},\"{witness}\"",
                    a.group.label(),
                    a.max_len
                ));
            }
            (a, rows)
        }
        CheckCmd::Lforall(a) => {
            let m = a.group.metric()?;
            let (c, _) = resolve_c(&m, "auto")?;
            let lang = normal_form_dfa(&m, c)?;
            let r = check_lforall(&m, &|w| Ok(lang.accepts(w)), a.max_len, a.max_const)?;
            let row = fellow_row("lforall", &a.group.label(), a.max_len, &r, &m);
            (a, vec![row])
        }
        CheckCmd::Lexists(a) => {
            let m = a.group.metric()?;
            let (c, _) = resolve_c(&m, "auto")?;
            let lang = ns_automaton(&m, c)?;
            let r = check_lexists(&m, &|w| Ok(lang.accepts(w)), a.max_len, a.max_const)?;
            let row = fellow_row("lexists", &a.group.label(), a.max_len, &r, &m);
            (a, vec![row])
        }
        CheckCmd::Biauto(a) => {
            let m = a.group.metric()?;
            let (c, _) = resolve_c(&m, "auto")?;
            let lang = normal_form_dfa(&m, c)?;
            let r = biautomatic_fellow_check(&m, &|w| Ok(lang.accepts(w)), a.max_len)?;
            let row = fellow_row("biauto", &a.group.label(), a.max_len, &r, &m);
            (a, vec![row])
        }
    };
    emit_csv(args.csv.as_ref(), header, &rows)?;
    println!("note: constants are empirical up to L_max={}", args.max_len);
    Ok(())
}

fn conj_cmd(cmd: ConjCmd) -> CliResult<()> {
    match cmd {
        ConjCmd::Decide { group, w1, w2, bound, phi_len } => {
            let m = group.metric()?;
            let phi = build_phi(&m, phi_len)?;
            let u = parse_word(&m, &w1)?;
            let v = parse_word(&m, &w2)?;
            match decide_conjugacy_checked(&u, &v, &m, &phi, bound)? {
                Some(c) => println!("conjugate, conjugator={}", show_word(&m, &c)),
                None => println!("not conjugate (bound {bound}, empirical)"),
            }
            Ok(())
        }
        ConjCmd::Bench { group, sizes, trials, bound, phi_len, csv } => {
            let m = group.metric()?;
            let phi = build_phi(&m, phi_len)?;
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .map_err(|_| CliError::usage(format!("bad size {s:?} in --sizes")))
                })
                .collect::<CliResult<_>>()?;
            let mut rng = StdRng::seed_from_u64(0x5eed);
            let mut rows = Vec::new();
            for n in sizes {
                let mut total = 0f64;
                for _ in 0..trials {
                    let rand_word = |rng: &mut StdRng| {
                        Word((0..n).map(|_| rng.gen_range(0..m.alphabet.len() as u32)).collect())
                    };
                    let u = rand_word(&mut rng);
                    let v = rand_word(&mut rng);
                    let t0 = Instant::now();
                    let _ = decide_conjugacy(&u, &v, &m, &phi, bound)?;
                    total += t0.elapsed().as_secs_f64();
                }
                rows.push(format!("{n},{trials},{:.6}", total / trials as f64));
            }
            emit_csv(csv.as_ref(), "size,trials,mean_seconds", &rows)
        }
    }
}

// ----------------------------------------------------------- consistency

fn all_words(k: usize, l_max: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..l_max {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for i in 0..k as u32 {
                let mut v = w.clone();
                v.0.push(i);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn verify_cmd(cmd: VerifyCmd) -> CliResult<()> {
    let VerifyCmd::All { group, max_len } = cmd;
    let m = group.metric()?;
    let radius = m.ball.as_ref().map(|b| b.radius as usize).unwrap_or(0);
    let (c, c_label) = resolve_c(&m, "auto")?;
    println!("verify: fftp constant {c_label}");

    // geodesic acceptor vs the length oracle
    let depth = max_len.min(radius);
    let geo = ns_automaton(&m, c)?;
    for w in all_words(m.alphabet.len(), depth) {
        if geo.accepts(&w) != m.is_geodesic(&w)? {
            return Err(CliError {
                code: "soundness",
                detail: format!("acceptor disagrees with geodesy on {}", show_word(&m, &w)),
            });
        }
    }
    println!("verify: geodesic acceptor = length oracle up to {depth}: ok");

    // normal-form series vs ball element counts
    let nf = normal_form_dfa(&m, c)?;
    let counts = m.ball.as_ref().expect("ball").sphere_sizes();
    let coeffs = nf.growth_series().coefficients(depth + 1);
    for n in 0..=depth {
        if coeffs[n] != num_bigint::BigInt::from(counts[n]) {
            return Err(CliError {
                code: "soundness",
                detail: format!("normal-form count {} != sphere size {} at {n}", coeffs[n], counts[n]),
            });
        }
    }
    println!("verify: normal-form series = sphere counts up to {depth}: ok");

    // block-structure automaton vs the direct decider
    let langs = factor_languages(&m, c, FactorLang::Shortlex)?;
    let rel = rel_language(&m, &langs)?;
    for w in all_words(m.alphabet.len(), depth.min(5)) {
        if rel.accepts(&w) != in_rel_language(&w, &m, &langs)? {
            return Err(CliError {
                code: "soundness",
                detail: format!("block automaton disagrees on {}", show_word(&m, &w)),
            });
        }
    }
    println!("verify: block-structure automaton = direct decider up to {}: ok", depth.min(5));

    // conjugacy decision vs the exact oracle
    let phi = build_phi(&m, depth.min(5))?;
    let pair_len = depth.min(3).min(radius.saturating_sub(2));
    let words = all_words(m.alphabet.len(), pair_len);
    for u in &words {
        for v in &words {
            decide_conjugacy_checked(u, v, &m, &phi, 2.min(radius as u32))?;
        }
    }
    println!("verify: conjugacy decision = exact oracle on all pairs up to {pair_len}: ok");

    // conjugacy class of the identity is detected exactly
    for w in &words {
        let g = evaluate(w, &m.alphabet, &m.spec)?;
        let trivially = conjugate_exact(&g, &GroupElement::identity(), &m.spec)?.is_some();
        if trivially != g.is_identity() {
            return Err(CliError {
                code: "soundness",
                detail: format!("triviality mismatch on {}", show_word(&m, w)),
            });
        }
    }
    println!("verify: triviality detection up to {pair_len}: ok");
    println!("verify: all checks passed (empirical up to L_max={max_len})");
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.cmd {
        Cmd::Ball { cmd } => ball_cmd(cmd),
        Cmd::Genset { cmd } => genset_cmd(cmd),
        Cmd::Lang { cmd } => lang_cmd(cmd),
        Cmd::Check { cmd } => check_cmd(cmd),
        Cmd::Conj { cmd } => conj_cmd(cmd),
        Cmd::Verify { cmd } => verify_cmd(cmd),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {}: {}", e.code, e.detail);
        std::process::exit(1);
    }
}
