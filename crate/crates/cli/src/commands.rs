use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Args;
use mcpde::dataio::{self, read_records, write_records, Bundle, CaseRecord, Layout, Truth};
use mcpde::denoise::{self, Method};
use mcpde::manufactured::{sample_instance, Family, GenConfig, PdeInstance};
use mcpde::metrics::{
    convergence_slope, difficulty_tier, loglog_svg, masked_metrics, mean_std, median, DifficultyTier, Series,
    SlopeSummary,
};
use mcpde::wos::{solve_grid, WosParams};
use mcpde::Field;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{self, pick, FileConfig};
use crate::error::{invalid, io_err, CliError};
use crate::Global;

pub struct Context {
    pub seed: u64,
    pub layout: Layout,
    pub split: String,
    pub file: FileConfig,
}

impl Context {
    pub fn new(g: &Global, file: FileConfig) -> Self {
        let root = g
            .root
            .clone()
            .or_else(|| file.root.clone().map(PathBuf::from))
            .unwrap_or_else(dataio::default_root);
        Context {
            seed: pick(g.seed, file.seed, 0),
            layout: Layout::new(root),
            split: pick(g.split.clone(), file.split.clone(), "train".to_string()),
            file,
        }
    }

    fn is_test_split(&self) -> bool {
        self.split == "test"
    }

    fn records(&self) -> Result<Vec<CaseRecord>, CliError> {
        Ok(read_records(&self.layout.records(&self.split))?)
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(invalid)?;
    s.push('\n');
    write_text(path, &s)
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(io_err(dir.display()))?;
    }
    std::fs::write(path, text).map_err(io_err(path.display()))
}

fn parse_families(s: &str) -> Result<Vec<(Family, f64)>, CliError> {
    let fams: Vec<Family> = match s {
        "train" => Family::TRAIN.to_vec(),
        "test" | "all" => Family::ALL.to_vec(),
        _ => s
            .split(',')
            .map(|t| Family::parse(t.trim()).ok_or_else(|| invalid(format!("unknown family {t:?}"))))
            .collect::<Result<_, _>>()?,
    };
    Ok(fams.into_iter().map(|f| (f, 1.0)).collect())
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// Number of cases to draw.
    #[arg(long, default_value_t = 100)]
    pub n: u64,
    /// Index of the first case, for sharded runs.
    #[arg(long, default_value_t = 0)]
    pub start: u64,
    /// `train` (laplace, poisson, yukawa), `test` (all five) or a comma-separated list.
    #[arg(long)]
    pub families: Option<String>,
    /// Extra copies of each hard atom kind in the sampling pool.
    #[arg(long)]
    pub hard_extra: Option<u32>,
    /// Grid side for ground truth and the finiteness filter.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Attempts per case before the case is dropped.
    #[arg(long)]
    pub max_attempts: Option<u32>,
    /// Do not write truth.npz bundles.
    #[arg(long)]
    pub no_truth: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct GenerateSummary {
    pub seed: u64,
    pub requested: u64,
    pub accepted: usize,
    pub exhausted: usize,
    pub attempts: u64,
    pub rejections: BTreeMap<String, usize>,
    pub families: BTreeMap<String, usize>,
    pub exhausted_cases: Vec<String>,
}

pub fn generate(ctx: &Context, a: GenerateArgs) -> Result<(), CliError> {
    let mut cfg = ctx.file.generate.clone().unwrap_or_else(|| {
        if ctx.is_test_split() {
            GenConfig::test()
        } else {
            GenConfig::train()
        }
    });
    if let Some(f) = &a.families {
        cfg.families = parse_families(f)?;
    }
    cfg.hard_extra = pick(a.hard_extra, None, cfg.hard_extra);
    cfg.resolution = pick(a.resolution, None, cfg.resolution);
    cfg.max_attempts = pick(a.max_attempts, None, cfg.max_attempts);
    if cfg.families.is_empty() || cfg.resolution == 0 || cfg.max_attempts == 0 {
        return Err(invalid("families, resolution and max_attempts must be non-empty / positive"));
    }

    let results: Vec<_> = (a.start..a.start + a.n).into_par_iter().map(|i| sample_instance(&cfg, ctx.seed, i)).collect();
    let mut summary = GenerateSummary { seed: ctx.seed, requested: a.n, ..Default::default() };
    let mut accepted: Vec<PdeInstance> = Vec::new();
    for r in results {
        match r {
            Ok(g) => {
                summary.attempts += u64::from(g.attempts);
                for why in &g.rejections {
                    *summary.rejections.entry(why.name().to_string()).or_default() += 1;
                }
                *summary.families.entry(g.instance.family.name().to_string()).or_default() += 1;
                accepted.push(g.instance);
            }
            Err(e) => {
                summary.attempts += u64::from(e.attempts);
                for why in &e.rejections {
                    *summary.rejections.entry(why.name().to_string()).or_default() += 1;
                }
                summary.exhausted_cases.push(e.case_id);
            }
        }
    }
    summary.accepted = accepted.len();
    summary.exhausted = summary.exhausted_cases.len();

    let records: Vec<CaseRecord> = accepted.iter().map(CaseRecord::from).collect();
    write_records(&ctx.layout.records(&ctx.split), &records)?;
    if !a.no_truth {
        accepted.par_iter().try_for_each(|inst| -> Result<(), CliError> {
            let (clean, mask) = inst.ground_truth_grid(cfg.resolution).map_err(invalid)?;
            let forcing = inst.forcing_grid(cfg.resolution);
            ctx.layout.write_truth(&ctx.split, inst, &Truth { clean, mask, forcing })?;
            Ok(())
        })?;
    }
    write_json(&ctx.layout.root.join(format!("{}.generate.json", ctx.split)), &summary)?;

    eprintln!(
        "generated {} of {} cases ({} exhausted, {} attempts)",
        summary.accepted, summary.requested, summary.exhausted, summary.attempts
    );
    for (name, count) in &summary.rejections {
        eprintln!("  rejected by {name:<20} {count}");
    }
    for (name, count) in &summary.families {
        eprintln!("  family {name:<12} {count}");
    }
    if a.n > 0 && 2 * summary.exhausted as u64 > a.n {
        return Err(CliError::Validation(format!(
            "{} of {} cases exhausted their attempts",
            summary.exhausted, a.n
        )));
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// `train` (1..32), `test` (1..131072) or a comma-separated ascending list.
    #[arg(long)]
    pub budgets: Option<String>,
    /// Walks stop when closer than this to the boundary.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Steps after which a walk is projected to the boundary.
    #[arg(long)]
    pub max_steps: Option<u32>,
    /// Grid side of the estimate.
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Largest allowed `max budget * masked pixels` per case.
    #[arg(long)]
    pub compute_cap: Option<u64>,
    /// Solve only the first N records.
    #[arg(long)]
    pub limit: Option<usize>,
    /// Recompute cases whose bundles already exist.
    #[arg(long)]
    pub force: bool,
}

pub fn solve(ctx: &Context, a: SolveArgs) -> Result<(), CliError> {
    let budgets = match (&a.budgets, &ctx.file.budgets) {
        (Some(s), _) => config::parse_budgets(s)?,
        (None, Some(b)) => config::parse_budgets(&b.iter().map(u32::to_string).collect::<Vec<_>>().join(","))?,
        (None, None) if ctx.is_test_split() => config::test_budgets(),
        (None, None) => config::TRAIN_BUDGETS.to_vec(),
    };
    let mut params = ctx.file.wos.unwrap_or_else(|| if ctx.is_test_split() { WosParams::eval() } else { WosParams::train() });
    params.epsilon = pick(a.epsilon, None, params.epsilon);
    params.max_steps = pick(a.max_steps, None, params.max_steps);
    params.resolution = pick(a.resolution, None, params.resolution);
    params.compute_cap = pick(a.compute_cap, None, params.compute_cap);

    let mut records = ctx.records()?;
    if let Some(n) = a.limit {
        records.truncate(n);
    }
    let (mut solved, mut resumed, mut unsupported) = (0usize, 0usize, 0usize);
    for rec in &records {
        if !rec.kind.wos_supported() {
            unsupported += 1;
            continue;
        }
        let id = &rec.case_id;
        let missing = ctx.layout.missing_budgets(&ctx.split, id, &budgets);
        if !a.force && missing.is_empty() && ctx.layout.meta(&ctx.split, id).exists() {
            resumed += 1;
            continue;
        }
        let inst = rec.to_instance()?;
        let traj = solve_grid(&inst, &budgets, &params, ctx.seed).map_err(invalid)?;
        let (clean, _) = inst.ground_truth_grid(params.resolution).map_err(invalid)?;
        let only = if a.force { None } else { Some(missing.as_slice()) };
        ctx.layout.write_trajectory(&ctx.split, &inst, &traj, &clean, &params, only)?;
        solved += 1;
        eprintln!(
            "solved {id} ({}) mean steps {:.1}, overflow {:.2e}",
            rec.kind.name(),
            traj.mean_steps(),
            traj.overflow_rate()
        );
    }
    eprintln!("solved {solved}, already complete {resumed}, unsupported family {unsupported}");
    Ok(())
}

/// Masked MSE of each on-disk budget up to `max_budget`.
fn mse_curve(ctx: &Context, case_id: &str, max_budget: u32) -> Result<Vec<(f64, f64)>, CliError> {
    let budgets = ctx.layout.budgets_on_disk(&ctx.split, case_id)?;
    budgets
        .into_iter()
        .filter(|&b| b <= max_budget)
        .map(|b| {
            let bundle = Bundle::read(&ctx.layout.bundle(&ctx.split, case_id, b))?;
            let r = masked_metrics(&bundle.noisy, &bundle.clean, &bundle.mask).map_err(invalid)?;
            Ok((f64::from(b), r.mse))
        })
        .collect()
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Largest budget included in the slope fit.
    #[arg(long, default_value_t = 32)]
    pub max_budget: u32,
    /// Exit with status 2 if any family has a smaller percentage of slopes in [-1.05, -0.95].
    #[arg(long, default_value_t = 95.0)]
    pub min_in_band: f64,
}

#[derive(Debug, Serialize)]
struct CaseSlope {
    case_id: String,
    family: Family,
    slope: f64,
    mses: Vec<(f64, f64)>,
    tier: Option<DifficultyTier>,
}

#[derive(Debug, Serialize)]
struct VerifyReport {
    families: BTreeMap<String, SlopeSummary>,
    overall: SlopeSummary,
    tiers: BTreeMap<String, usize>,
    skipped: Vec<String>,
}

pub fn verify(ctx: &Context, a: VerifyArgs) -> Result<(), CliError> {
    let records: Vec<CaseRecord> = ctx.records()?.into_iter().filter(|r| r.kind.wos_supported()).collect();
    let results: Vec<Result<CaseSlope, (String, String)>> = records
        .par_iter()
        .map(|r| {
            let mses = mse_curve(ctx, &r.case_id, a.max_budget).map_err(|e| (r.case_id.clone(), e.to_string()))?;
            let slope = convergence_slope(&mses).map_err(|e| (r.case_id.clone(), e.to_string()))?;
            let tier = mses.iter().find(|p| p.0 == 32.0).map(|p| difficulty_tier(p.1));
            Ok(CaseSlope { case_id: r.case_id.clone(), family: r.kind, slope, mses, tier })
        })
        .collect();
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    for r in results {
        match r {
            Ok(c) => cases.push(c),
            Err((id, why)) => skipped.push(format!("{id}: {why}")),
        }
    }
    if cases.is_empty() {
        return Err(invalid("no case has enough budgets on disk to fit a slope"));
    }
    let mut by_family: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut tiers: BTreeMap<String, usize> = BTreeMap::new();
    for c in &cases {
        by_family.entry(c.family.name().to_string()).or_default().push(c.slope);
        if let Some(t) = c.tier {
            *tiers.entry(t.name().to_string()).or_default() += 1;
        }
    }
    let all: Vec<f64> = cases.iter().map(|c| c.slope).collect();
    let report = VerifyReport {
        families: by_family.iter().map(|(k, v)| (k.clone(), SlopeSummary::new(v))).collect(),
        overall: SlopeSummary::new(&all),
        tiers,
        skipped,
    };

    let mut csv = String::from("case_id,family,slope\n");
    for c in &cases {
        let _ = writeln!(csv, "{},{},{:.6}", c.case_id, c.family.name(), c.slope);
    }
    let root = &ctx.layout.root;
    write_text(&root.join(format!("{}.slopes.csv", ctx.split)), &csv)?;
    write_json(&root.join(format!("{}.verify.json", ctx.split)), &report)?;
    write_text(&root.join(format!("{}.convergence.svg", ctx.split)), &median_curves_svg("Masked MSE against budget", &cases))?;

    println!("{:<10} {:>5} {:>9} {:>9} {:>9} {:>9}", "family", "n", "median", "min", "max", "in band");
    for (name, s) in report.families.iter().chain(std::iter::once((&"overall".to_string(), &report.overall))) {
        println!("{:<10} {:>5} {:>9.3} {:>9.3} {:>9.3} {:>8.1}%", name, s.n, s.median, s.min, s.max, s.pct_in_band);
    }
    if !report.skipped.is_empty() {
        eprintln!("{} cases skipped (see {}.verify.json)", report.skipped.len(), ctx.split);
    }
    if let Some((name, s)) = report.families.iter().find(|(_, s)| s.pct_in_band < a.min_in_band) {
        return Err(CliError::Validation(format!(
            "{name}: {:.1}% of slopes in band, below {}%",
            s.pct_in_band, a.min_in_band
        )));
    }
    Ok(())
}

fn median_curves_svg(title: &str, cases: &[CaseSlope]) -> String {
    let mut grouped: BTreeMap<&str, BTreeMap<u64, Vec<f64>>> = BTreeMap::new();
    for c in cases {
        for &(b, m) in &c.mses {
            grouped.entry(c.family.name()).or_default().entry(b as u64).or_default().push(m);
        }
    }
    let series: Vec<Series> = grouped
        .into_iter()
        .map(|(fam, per_b)| Series {
            label: format!("{fam} (median)"),
            points: per_b.into_iter().map(|(b, v)| (b as f64, median(&v))).collect(),
        })
        .collect();
    loglog_svg(title, &series)
}

#[derive(Args, Debug)]
pub struct DenoiseArgs {
    /// gaussian, gaussian_heavy, median, bilateral, tv or nlm.
    #[arg(long)]
    pub method: String,
    /// Input bundle; its `noisy` entry is denoised (single-file mode).
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Output bundle for single-file mode.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Budget whose bundles are denoised in split mode.
    #[arg(long, default_value_t = 8)]
    pub budget: u32,
    /// Prediction directory for split mode (default <root>/pred/<split>/<method>_B<budget>).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Filter the whole grid, exterior included, and mask the result.
    #[arg(long)]
    pub unmasked: bool,
}

pub fn denoise(ctx: &Context, a: DenoiseArgs) -> Result<(), CliError> {
    let method: Method = a.method.parse().map_err(invalid)?;
    let mut params = ctx.file.denoise.unwrap_or_default();
    params.masked &= !a.unmasked;
    if let Some(input) = &a.input {
        let out = a.out.as_ref().ok_or_else(|| invalid("--in requires --out"))?;
        let b = Bundle::read(input)?;
        let noisy = denoise::denoise(&b.noisy, &b.mask, method, &params).map_err(invalid)?;
        Bundle { noisy, ..b }.write(out)?;
        eprintln!("wrote {}", out.display());
        return Ok(());
    }
    let dir = a
        .out_dir
        .clone()
        .unwrap_or_else(|| ctx.layout.root.join("pred").join(&ctx.split).join(format!("{}_B{}", method.name(), a.budget)));
    let records = ctx.records()?;
    let done: Vec<bool> = records
        .par_iter()
        .map(|r| -> Result<bool, CliError> {
            let path = ctx.layout.bundle(&ctx.split, &r.case_id, a.budget);
            if !path.exists() {
                return Ok(false);
            }
            let b = Bundle::read(&path)?;
            let pred = denoise::denoise(&b.noisy, &b.mask, method, &params).map_err(invalid)?;
            dataio::write_npz(&dir.join(format!("{}.npz", r.case_id)), &[("pred", &pred)])?;
            Ok(true)
        })
        .collect::<Result<_, _>>()?;
    let n = done.iter().filter(|&&d| d).count();
    eprintln!("denoised {n} of {} cases into {}", records.len(), dir.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Directory of <case_id>.npz files with a `pred` entry; omit to score the raw estimates.
    #[arg(long)]
    pub pred: Option<PathBuf>,
    /// Budget of the raw estimates and of the bundle supplying clean and mask.
    #[arg(long, default_value_t = 8)]
    pub budget: u32,
    /// Report directory (default <root>/reports/<split>/<label>).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Method label used in reports.
    #[arg(long)]
    pub label: Option<String>,
    /// Skip the MSE-against-budget plot.
    #[arg(long)]
    pub no_plot: bool,
}

#[derive(Debug, Serialize)]
struct CaseScore {
    case_id: String,
    family: Family,
    mse: f64,
    psnr_db: f64,
    snr_db: f64,
}

#[derive(Debug, Serialize)]
struct Stat {
    mean: f64,
    std: f64,
}

#[derive(Debug, Serialize)]
struct FamilyScore {
    n: usize,
    psnr_db: Stat,
    snr_db: Stat,
    mse: Stat,
}

#[derive(Debug, Serialize)]
struct Gap {
    case_id: String,
    reason: String,
}

#[derive(Debug, Serialize)]
struct EvalReport {
    label: String,
    budget: u32,
    families: BTreeMap<String, FamilyScore>,
    overall: FamilyScore,
    gaps: usize,
}

fn family_score(scores: &[&CaseScore]) -> FamilyScore {
    let col = |f: fn(&CaseScore) -> f64| {
        let v: Vec<f64> = scores.iter().map(|s| f(s)).collect();
        let (mean, std) = mean_std(&v);
        Stat { mean, std }
    };
    FamilyScore { n: scores.len(), psnr_db: col(|s| s.psnr_db), snr_db: col(|s| s.snr_db), mse: col(|s| s.mse) }
}

fn load_truth(ctx: &Context, case_id: &str, budget: u32) -> Result<(Option<Field>, Field, Field), CliError> {
    let bundle = ctx.layout.bundle(&ctx.split, case_id, budget);
    if bundle.exists() {
        let b = Bundle::read(&bundle)?;
        return Ok((Some(b.noisy), b.clean, b.mask));
    }
    let t = Truth::read(&ctx.layout.truth(&ctx.split, case_id))?;
    Ok((None, t.clean, t.mask))
}

fn load_pred(dir: &Path, case_id: &str) -> Result<Option<Field>, CliError> {
    let path = dir.join(format!("{case_id}.npz"));
    if !path.exists() {
        return Ok(None);
    }
    let mut entries = dataio::read_npz(&path)?;
    let i = entries.iter().position(|(n, _)| n == "pred").or_else(|| entries.iter().position(|(n, _)| n == "noisy"));
    Ok(i.map(|i| entries.swap_remove(i).1))
}

pub fn eval(ctx: &Context, a: EvalArgs) -> Result<(), CliError> {
    let label = a.label.clone().unwrap_or_else(|| match &a.pred {
        Some(p) => p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "pred".into()),
        None => format!("wos_B{}", a.budget),
    });
    let out = a.out.clone().unwrap_or_else(|| ctx.layout.root.join("reports").join(&ctx.split).join(&label));
    let records = ctx.records()?;
    let results: Vec<Result<CaseScore, Gap>> = records
        .par_iter()
        .map(|r| {
            let gap = |reason: String| Gap { case_id: r.case_id.clone(), reason };
            let (raw, clean, mask) = load_truth(ctx, &r.case_id, a.budget).map_err(|e| gap(format!("ground truth: {e}")))?;
            let pred = match &a.pred {
                Some(dir) => load_pred(dir, &r.case_id)
                    .map_err(|e| gap(format!("prediction: {e}")))?
                    .ok_or_else(|| gap("no prediction".into()))?,
                None => raw.ok_or_else(|| gap(format!("no B{} bundle", a.budget)))?,
            };
            let m = masked_metrics(&pred, &clean, &mask).map_err(|e| gap(e.to_string()))?;
            Ok(CaseScore { case_id: r.case_id.clone(), family: r.kind, mse: m.mse, psnr_db: m.psnr_db, snr_db: m.snr_db })
        })
        .collect();
    let (mut scores, mut gaps) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(s) => scores.push(s),
            Err(g) => gaps.push(g),
        }
    }
    let mut grouped: BTreeMap<String, Vec<&CaseScore>> = BTreeMap::new();
    for s in &scores {
        grouped.entry(s.family.name().to_string()).or_default().push(s);
    }
    let report = EvalReport {
        label: label.clone(),
        budget: a.budget,
        families: grouped.iter().map(|(k, v)| (k.clone(), family_score(v))).collect(),
        overall: family_score(&scores.iter().collect::<Vec<_>>()),
        gaps: gaps.len(),
    };

    let mut cases_csv = String::from("case_id,family,mse,psnr_db,snr_db\n");
    for s in &scores {
        let _ = writeln!(cases_csv, "{},{},{:e},{:.4},{:.4}", s.case_id, s.family.name(), s.mse, s.psnr_db, s.snr_db);
    }
    let mut summary_csv = String::from("family,n,psnr_mean,psnr_std,snr_mean,snr_std,mse_mean,mse_std\n");
    for (name, f) in report.families.iter().chain(std::iter::once((&"overall".to_string(), &report.overall))) {
        let _ = writeln!(
            summary_csv,
            "{name},{},{:.4},{:.4},{:.4},{:.4},{:e},{:e}",
            f.n, f.psnr_db.mean, f.psnr_db.std, f.snr_db.mean, f.snr_db.std, f.mse.mean, f.mse.std
        );
    }
    write_text(&out.join("cases.csv"), &cases_csv)?;
    write_text(&out.join("summary.csv"), &summary_csv)?;
    write_json(&out.join("summary.json"), &report)?;
    write_json(&out.join("gaps.json"), &gaps)?;

    if !a.no_plot {
        let curves: Vec<CaseSlope> = records
            .par_iter()
            .filter(|r| r.kind.wos_supported())
            .filter_map(|r| {
                let mses = mse_curve(ctx, &r.case_id, u32::MAX).ok()?;
                (!mses.is_empty()).then(|| CaseSlope { case_id: r.case_id.clone(), family: r.kind, slope: f64::NAN, mses, tier: None })
            })
            .collect();
        if !curves.is_empty() {
            write_text(&out.join("mse_vs_budget.svg"), &median_curves_svg("Raw estimate MSE against budget", &curves))?;
        }
    }

    println!("{label} (B={})", a.budget);
    println!("{:<11} {:>5} {:>18} {:>18}", "family", "n", "PSNR dB", "SNR dB");
    for (name, f) in report.families.iter().chain(std::iter::once((&"overall".to_string(), &report.overall))) {
        println!(
            "{:<11} {:>5} {:>8.2} ± {:<7.2} {:>8.2} ± {:<7.2}",
            name, f.n, f.psnr_db.mean, f.psnr_db.std, f.snr_db.mean, f.snr_db.std
        );
    }
    if !gaps.is_empty() {
        eprintln!("{} cases without a score, listed in {}", gaps.len(), out.join("gaps.json").display());
    }
    Ok(())
}

#[derive(Args, Debug)]
pub struct PackArgs {
    /// Archive path (default <root>/<split>.zip).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn pack(ctx: &Context, a: PackArgs) -> Result<(), CliError> {
    let out = a.out.unwrap_or_else(|| ctx.layout.root.join(format!("{}.zip", ctx.split)));
    let mut include = vec![PathBuf::from(&ctx.split)];
    if ctx.layout.records(&ctx.split).exists() {
        include.push(PathBuf::from(format!("{}.jsonl", ctx.split)));
    }
    let n = dataio::pack_paths(&ctx.layout.root, &include, &out)?;
    eprintln!("packed {n} files into {}", out.display());
    Ok(())
}

#[derive(Args, Debug)]
pub struct UnpackArgs {
    /// Archive made by `pack`.
    #[arg(long)]
    pub archive: PathBuf,
}

pub fn unpack(ctx: &Context, a: UnpackArgs) -> Result<(), CliError> {
    let n = dataio::unpack_dir(&a.archive, &ctx.layout.root)?;
    eprintln!("unpacked {n} files into {}", ctx.layout.root.display());
    Ok(())
}
