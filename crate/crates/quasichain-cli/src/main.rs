//! Command-line surface for the golden-chain engines: generate words and
//! point sets, compute patch frequencies and pair correlations, enumerate
//! diffraction spectra, and approximate windows with fractal boundary.
//!
//! Exit codes: 0 success, 2 usage error, 3 numeric/validation failure.
//! Set RAYON_NUM_THREADS to cap internal parallelism.

use std::fmt::Write as _;
use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasichain::algebra::{GoldenInt, GoldenNum};
use quasichain::correlations::{difference_set_points, nu_pair_exact, solve_renorm, ALL_PAIRS};
use quasichain::diffraction::{
    chain_points_f64, deformed_points_f64, deformed_spectrum, fb_amplitude_cocycle_for_spec,
    finite_patch_amplitude, DeformCoeffs, Spectrum, WaveNumber, WeightedComb,
};
use quasichain::error::Error;
use quasichain::export;
use quasichain::model_set::{
    cut_and_project, is_legal, patch_frequency, ModelSetSpec, PatchSpec, TileKind, Window,
};
use quasichain::substitution::{random_realization, MarkedWord, SubstRule};
use quasichain::window_ifs::{boundary_dimension, iterate_windows, GraphIFS};

#[derive(Parser)]
#[command(
    name = "quasichain",
    about = "Golden-ratio substitution chains: words, model sets, correlations, diffraction",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate substitution words or cut-and-project point sets.
    Generate(GenerateArgs),
    /// Exact relative frequency of a tile patch, e.g. "a@0 b@t".
    Freq(FreqArgs),
    /// Pair correlations by the closed form and/or the renormalisation route.
    Correlate(CorrelateArgs),
    /// Enumerate the diffraction spectrum and export CSV/JSON/SVG.
    Diffract(DiffractArgs),
    /// Window approximants and boundary box-count dimension.
    Windows(WindowsArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Rule name (fibonacci, fibonacci2, reshuffled, reshuffled-mirror) or
    /// inline text "a->ab; b->a".
    #[arg(long, default_value = "fibonacci")]
    rule: String,
    /// Number of substitution steps.
    #[arg(long, default_value_t = 3)]
    steps: usize,
    /// Two-sided seed word with marker.
    #[arg(long, default_value = "a|a")]
    seed_word: String,
    /// Generate a model-set point CSV instead of a word.
    #[arg(long)]
    modelset: bool,
    /// Total window for the model set.
    #[arg(long, default_value = "(-1, t-1]")]
    window: String,
    /// Physical region "[lo, hi]" for the model set.
    #[arg(long, default_value = "[0, 5]")]
    region: String,
    /// Mix the two Fibonacci rules at random with this probability for "ab";
    /// produces one realization of the random rule.
    #[arg(long)]
    random_p: Option<f64>,
    /// Seed for the random realization.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output path (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct FreqArgs {
    /// Patch text, e.g. "a@0 a@1*t" ("" for the empty patch).
    patch: String,
}

#[derive(Args)]
struct CorrelateArgs {
    /// Rule whose inflation builds the renormalisation system.
    #[arg(long, default_value = "fibonacci")]
    rule: String,
    /// Single distance "m+n*t"; table of all member distances when absent.
    #[arg(long)]
    z: Option<String>,
    /// Pair to evaluate (aa, ab, ba, bb); all pairs when absent.
    #[arg(long)]
    pair: Option<String>,
    /// Table bound on |z|.
    #[arg(long, default_value_t = 10.0)]
    zmax: f64,
    /// closed | renorm | both
    #[arg(long, default_value = "both")]
    method: String,
    /// CSV output path (stdout when absent).
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct DiffractArgs {
    #[arg(long, default_value = "fibonacci")]
    rule: String,
    /// Total window of the chain (interval rules only).
    #[arg(long, default_value = "(-1, t-1]")]
    window: String,
    #[arg(long, default_value_t = 10.0)]
    kmax: f64,
    #[arg(long, default_value_t = 1e-4)]
    imin: f64,
    /// Scattering weights "h_a,h_b".
    #[arg(long, default_value = "1,1")]
    weights: String,
    /// closed | cocycle
    #[arg(long, default_value = "closed")]
    method: String,
    /// Tile lengths "la,lb" (golden text), or "equal", or "natural".
    #[arg(long)]
    deform: Option<String>,
    /// Cross-check listed peaks against a finite patch of this half-width.
    #[arg(long)]
    check_patch: Option<f64>,
    #[arg(long)]
    out_json: Option<String>,
    #[arg(long)]
    out_csv: Option<String>,
    #[arg(long)]
    out_svg: Option<String>,
    /// Disk chart of the 2D direct-product spectrum.
    #[arg(long)]
    svg_2d: Option<String>,
}

#[derive(Args)]
struct WindowsArgs {
    #[arg(long, default_value = "fibonacci")]
    rule: String,
    #[arg(long, default_value_t = 5)]
    depth: usize,
    #[arg(long)]
    out_csv: Option<String>,
    #[arg(long)]
    out_svg: Option<String>,
}

/// Failure classes mapped onto exit codes.
enum CliError {
    Usage(String),
    Numeric(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Rule text comes from the user; failures to resolve it are usage errors.
fn resolve_rule(text: &str) -> CliResult<SubstRule> {
    SubstRule::by_name_or_parse(text).map_err(|e| CliError::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Freq(args) => cmd_freq(args),
        Command::Correlate(args) => cmd_correlate(args),
        Command::Diffract(args) => cmd_diffract(args),
        Command::Windows(args) => cmd_windows(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn emit(out: &Option<String>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            fs::write(path, content)
                .map_err(|e| CliError::Numeric(format!("cannot write {path}: {e}")))?;
            println!("wrote {path}");
            Ok(())
        }
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn golden_exact_and_float(v: &GoldenNum) -> String {
    match v.to_golden_int() {
        Some(z) => format!("{} \u{2248} {:.5}", z, v.to_f64()),
        None => format!("{} \u{2248} {:.5}", v, v.to_f64()),
    }
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    if args.modelset {
        let window = Window::parse(&args.window)?;
        let spec = ModelSetSpec::from_total_window(window)?;
        let region = Window::parse(&args.region)
            .map_err(|_| CliError::Usage(format!("bad region '{}'", args.region)))?;
        let pts = cut_and_project(&spec, region.lo(), region.hi())?;
        return emit(&args.out, &export::point_set_csv(&pts));
    }
    if let Some(p) = args.random_p {
        let word = random_realization(p, args.steps, args.seed)?;
        let rule = SubstRule::by_name("fibonacci").expect("builtin");
        let text: String = word.iter().map(|&l| rule.alphabet().name(l)).collect();
        return emit(&args.out, &format!("{text}\n"));
    }
    let rule = resolve_rule(&args.rule)?;
    let seed = MarkedWord::parse(&args.seed_word, rule.alphabet())?;
    let word = rule.iterate_word(&seed, args.steps)?;
    emit(&args.out, &format!("{}\n", word.render(rule.alphabet())))
}

fn cmd_freq(args: FreqArgs) -> CliResult<()> {
    let patch = PatchSpec::parse(&args.patch)?;
    let f = patch_frequency(&patch);
    if f.is_zero() {
        println!("0");
    } else {
        println!("{}", golden_exact_and_float(&f));
    }
    if !is_legal(&patch) && !patch.is_empty() {
        println!("patch is illegal (frequency 0)");
    }
    Ok(())
}

fn parse_pair(text: &str) -> CliResult<(TileKind, TileKind)> {
    let chars: Vec<char> = text.chars().collect();
    if chars.len() != 2 {
        return Err(CliError::Usage(format!("pair must be two letters: {text}")));
    }
    Ok((
        TileKind::from_char(chars[0]).map_err(CliError::from)?,
        TileKind::from_char(chars[1]).map_err(CliError::from)?,
    ))
}

fn cmd_correlate(args: CorrelateArgs) -> CliResult<()> {
    let want_renorm = matches!(args.method.as_str(), "renorm" | "both");
    let want_closed = matches!(args.method.as_str(), "closed" | "both");
    if !want_renorm && !want_closed {
        return Err(CliError::Usage(format!("unknown method '{}'", args.method)));
    }
    let solved = if want_renorm {
        let rule = resolve_rule(&args.rule)?;
        Some(solve_renorm(&rule.geometric_inflation()?)?)
    } else {
        None
    };
    let pairs: Vec<(TileKind, TileKind)> = match &args.pair {
        Some(p) => vec![parse_pair(p)?],
        None => ALL_PAIRS.to_vec(),
    };
    if let Some(ztext) = &args.z {
        let z: GoldenInt = ztext.parse().map_err(CliError::from)?;
        for pair in pairs {
            let label = format!("{}{}", pair.0, pair.1);
            if want_closed {
                let v = nu_pair_exact(pair, &z);
                println!("nu_{label}({z}) closed = {}", golden_exact_and_float(&v));
            }
            if let Some(corr) = &solved {
                let v = corr.nu_exact(pair, &z);
                println!("nu_{label}({z}) renorm = {}", golden_exact_and_float(&v));
            }
        }
        return Ok(());
    }
    // Table over the difference set.
    let mut rows = Vec::new();
    for (pair, z) in difference_set_points(args.zmax) {
        if !pairs.contains(&pair) {
            continue;
        }
        let value = match (&solved, want_closed) {
            (Some(corr), _) => corr.nu(pair, &z),
            (None, _) => nu_pair_exact(pair, &z).to_f64(),
        };
        rows.push((
            z.to_f64(),
            z.unit_part().to_string(),
            z.tau_part().to_string(),
            format!("{}{}", pair.0, pair.1),
            value,
        ));
    }
    emit(&args.out, &export::correlation_csv(&rows))
}

fn parse_weights(text: &str) -> CliResult<WeightedComb> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| CliError::Usage(format!("weights must be 'h_a,h_b': {text}")))?;
    let ha: f64 = a
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad weight '{a}'")))?;
    let hb: f64 = b
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad weight '{b}'")))?;
    Ok(WeightedComb::real(ha, hb))
}

fn parse_deform(text: &str) -> CliResult<DeformCoeffs> {
    match text {
        "equal" => Ok(DeformCoeffs::equal_lengths()),
        "natural" => Ok(DeformCoeffs::natural()),
        other => {
            let (la, lb) = other
                .split_once(',')
                .ok_or_else(|| CliError::Usage(format!("deform must be 'la,lb': {other}")))?;
            let la: GoldenNum = la.parse().map_err(CliError::from)?;
            let lb: GoldenNum = lb.parse().map_err(CliError::from)?;
            DeformCoeffs::new(la, lb).map_err(CliError::from)
        }
    }
}

fn cmd_diffract(args: DiffractArgs) -> CliResult<()> {
    if args.imin <= 0.0 {
        return Err(CliError::Usage("imin must be positive".into()));
    }
    let comb = parse_weights(&args.weights)?;
    let rule = resolve_rule(&args.rule)?;
    let ifs = GraphIFS::from_inflation(&rule.geometric_inflation()?)?;
    let interval_windows = iterate_windows(&ifs, &ifs.canonical_seed()?, 1)?.is_exactly_invariant();

    let spectrum: Spectrum = if interval_windows {
        let spec = ModelSetSpec::from_total_window(Window::parse(&args.window)?)?;
        let coeffs = match &args.deform {
            Some(d) => parse_deform(d)?,
            None => DeformCoeffs::natural(),
        };
        let mut s = deformed_spectrum(&coeffs, &spec, &comb, args.kmax, args.imin)?;
        if args.method == "cocycle" {
            if !coeffs.is_identity() {
                return Err(CliError::Usage(
                    "the cocycle route applies to the undeformed chain".into(),
                ));
            }
            for p in &mut s.peaks {
                let k = WaveNumber::from_ints(p.m, p.n);
                let amp = fb_amplitude_cocycle_for_spec(&k, &ifs, &spec, &comb, 1e-10)?;
                p.amplitude = amp;
                p.intensity = amp.norm_sqr();
            }
        }
        if let Some(d) = &args.deform {
            if d == "equal" {
                report_periodicity(&s);
            }
        }
        if let Some(half) = args.check_patch {
            let points = match &args.deform {
                Some(d) if d != "natural" => deformed_points_f64(&spec, &parse_deform(d)?, half)?,
                _ => chain_points_f64(&spec, half)?,
            };
            let mut worst = 0.0f64;
            for p in s.peaks.iter().take(50) {
                let patch = finite_patch_amplitude(&points, &comb, p.k, half);
                worst = worst.max((patch - p.amplitude).norm());
            }
            println!(
                "finite-patch cross-check (half-width {half}): max |closed - patch| = {worst:.6e}"
            );
        }
        s
    } else {
        // Fractal windows: only the cocycle route applies.
        if args.method == "closed" {
            return Err(CliError::Numeric(format!(
                "rule '{}' has non-interval windows; use --method cocycle",
                args.rule
            )));
        }
        if args.deform.is_some() {
            return Err(CliError::Usage(
                "deformations are only supported for interval-window rules".into(),
            ));
        }
        cocycle_spectrum(&ifs, &comb, args.kmax, args.imin)?
    };

    if let Some(path) = &args.out_json {
        emit(&Some(path.clone()), &export::spectrum_json(&spectrum))?;
    }
    if let Some(path) = &args.out_csv {
        emit(&Some(path.clone()), &export::spectrum_csv(&spectrum))?;
    }
    if let Some(path) = &args.out_svg {
        emit(
            &Some(path.clone()),
            &export::spectrum_svg(&spectrum, args.kmax),
        )?;
    }
    if let Some(path) = &args.svg_2d {
        let mut grid = Vec::new();
        for p in spectrum.peaks.iter().filter(|p| p.intensity > args.imin) {
            for q in spectrum.peaks.iter().filter(|q| q.intensity > args.imin) {
                grid.push((p.k, q.k, p.intensity * q.intensity));
            }
        }
        emit(
            &Some(path.clone()),
            &export::product_spectrum_svg(&grid, args.kmax),
        )?;
    }
    if args.out_json.is_none() && args.out_csv.is_none() {
        print!("{}", export::spectrum_csv(&spectrum));
    }
    println!("peaks: {}", spectrum.peaks.len());
    if let Some(p) = spectrum.peak_at_zero() {
        println!("I(0) = {}", export::fmt_float(p.intensity));
    }
    Ok(())
}

fn report_periodicity(s: &Spectrum) {
    let period = GoldenNum::tau().to_f64() / 5.0f64.sqrt();
    let mut pairs = 0usize;
    let mut ok = true;
    for p in &s.peaks {
        if let Some(q) = s.peaks.iter().find(|q| (q.k - (p.k + period)).abs() < 1e-9) {
            pairs += 1;
            if (q.intensity - p.intensity).abs() >= 1e-6 {
                ok = false;
            }
        }
    }
    let verdict = if ok && pairs > 0 { "PASS" } else { "FAIL" };
    println!("period t/s5 \u{2248} {period:.10}: {verdict} ({pairs} peak pairs compared)");
}

/// Best-effort peak enumeration through the cocycle for fractal windows:
/// scans the same candidate box as the interval route.
fn cocycle_spectrum(
    ifs: &GraphIFS,
    comb: &WeightedComb,
    kmax: f64,
    imin: f64,
) -> CliResult<Spectrum> {
    use quasichain::diffraction::fb_amplitude_cocycle;
    let sqrt5 = 5.0f64.sqrt();
    let pref = 1.0 / sqrt5;
    let kappa_max = pref * comb.abs_sum() / (std::f64::consts::PI * imin.sqrt());
    let y_max = kmax * sqrt5 + 1.0;
    let ystar_max = sqrt5 * kappa_max + 1.0;
    let n_bound = ((y_max + ystar_max) / sqrt5).ceil() as i64 + 1;
    let mut peaks = Vec::new();
    for n in -n_bound..=n_bound {
        let m_bound = (y_max + 1.7 * n.abs() as f64).ceil() as i64 + 1;
        for m in -m_bound..=m_bound {
            let k = WaveNumber::from_ints(m, n);
            let kf = k.to_f64();
            if kf.abs() > kmax {
                continue;
            }
            let amp = fb_amplitude_cocycle(&k, ifs, comb, 1e-10)?;
            let intensity = amp.norm_sqr();
            if intensity >= imin {
                peaks.push(quasichain::diffraction::BraggPeak {
                    m,
                    n,
                    k: kf,
                    k_exact: k.value(),
                    amplitude: amp,
                    intensity,
                });
            }
        }
    }
    peaks.sort_by(|p, q| p.k_exact.cmp(&q.k_exact));
    Ok(Spectrum { peaks })
}

fn cmd_windows(args: WindowsArgs) -> CliResult<()> {
    let rule = resolve_rule(&args.rule)?;
    let ifs = GraphIFS::from_inflation(&rule.geometric_inflation()?)?;
    let seed = ifs.canonical_seed()?;
    let approx = iterate_windows(&ifs, &seed, args.depth)?;
    let csv = export::window_intervals_csv(&approx);
    match &args.out_csv {
        Some(path) => emit(&Some(path.clone()), &csv)?,
        None => print!("{csv}"),
    }
    if let Some(path) = &args.out_svg {
        emit(&Some(path.clone()), &export::window_strips_svg(&approx))?;
    }
    let mut summary = String::new();
    let v = approx.volumes();
    let _ = writeln!(
        summary,
        "intervals: a = {}, b = {}; volumes: {} and {}; merge overlap: {}",
        approx.interval_count(TileKind::A),
        approx.interval_count(TileKind::B),
        export::fmt_float(v[0].to_f64()),
        export::fmt_float(v[1].to_f64()),
        export::fmt_float(approx.total_overlap().to_f64()),
    );
    print!("{summary}");
    if args.depth == 0 {
        println!("box-count slope: n/a at depth 0");
        return Ok(());
    }
    let est = boundary_dimension(&approx).map_err(CliError::from)?;
    println!(
        "box-count slope: {:.6} (fit residual {:.6}, {} scales)",
        est.slope,
        est.residual,
        est.scales.len()
    );
    Ok(())
}
