//! End-to-end acceptance checks. Each test prints one `PASS` or `FAIL` line
//! with the measured quantities, then asserts.
//!
//! Desk-scale knobs: slopes run at 128x128, tiers and unbiasedness at 32x32.

use std::collections::BTreeMap;

use mcpde::dataio::{write_records, CaseRecord, Layout};
use mcpde::denoise::{denoise, DenoiseParams, Method};
use mcpde::geometry::{sample_boundary, sample_domain, sample_interior, Domain};
use mcpde::manufactured::{quality_filter, sample_instance, Family, GenConfig, PdeInstance};
use mcpde::metrics::{convergence_slope, difficulty_tier, masked_metrics, median, DifficultyTier, SlopeSummary};
use mcpde::rng::RngStream;
use mcpde::wos::{greens_sample_ball, solve_grid, WosParams};
use mcpde::{Field, Vec2};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn report(name: &str, pass: bool, detail: String) {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn masked_mse(est: &Field, clean: &Field, mask: &Field) -> f64 {
    masked_metrics(est, clean, mask).unwrap().mse
}

#[test]
fn convergence_rate() {
    const RES: usize = 128;
    const PER_FAMILY: usize = 50;
    let budgets = [1, 2, 4, 8, 16, 32];
    let cfg = GenConfig { resolution: RES, ..GenConfig::train() };
    let params = WosParams { resolution: RES, ..WosParams::train() };

    // Draw in index order until every family has enough cases.
    let mut picked: Vec<PdeInstance> = Vec::new();
    let mut counts: BTreeMap<Family, usize> = BTreeMap::new();
    let mut index = 0u64;
    while picked.len() < 3 * PER_FAMILY {
        let batch: Vec<_> =
            (index..index + 32).into_par_iter().filter_map(|i| sample_instance(&cfg, 101, i).ok()).collect();
        index += 32;
        for g in batch {
            let c = counts.entry(g.instance.family).or_default();
            if *c < PER_FAMILY {
                *c += 1;
                picked.push(g.instance);
            }
        }
    }

    let slopes: Vec<(Family, f64)> = picked
        .par_iter()
        .map(|inst| {
            let (clean, mask) = inst.ground_truth_grid(RES).unwrap();
            let traj = solve_grid(inst, &budgets, &params, 7).unwrap();
            let pts: Vec<(f64, f64)> =
                traj.budgets.iter().zip(&traj.fields).map(|(&b, f)| (f64::from(b), masked_mse(f, &clean, &mask))).collect();
            (inst.family, convergence_slope(&pts).unwrap())
        })
        .collect();

    let mut ok = true;
    for fam in Family::TRAIN {
        let v: Vec<f64> = slopes.iter().filter(|s| s.0 == fam).map(|s| s.1).collect();
        let s = SlopeSummary::new(&v);
        let pass = v.len() >= PER_FAMILY && (-1.02..=-0.98).contains(&s.median) && s.pct_in_band >= 95.0;
        ok &= pass;
        report(
            &format!("convergence slope [{}]", fam.name()),
            pass,
            format!(
                "n={} median={:.4} min={:.3} max={:.3} in band {:.1}% (need median in [-1.02,-0.98], >= 95%)",
                s.n, s.median, s.min, s.max, s.pct_in_band
            ),
        );
    }
    assert!(ok);
}

#[test]
fn unbiasedness() {
    const RES: usize = 32;
    const B: u32 = 4096;
    let cfg = GenConfig { resolution: RES, ..GenConfig::only(Family::Laplace) };
    let params = WosParams { resolution: RES, ..WosParams::train() };

    // Generator solutions moved onto the unit disk; kept when they still pass
    // the quality filters there.
    let mut insts = Vec::new();
    let mut i = 0;
    while insts.len() < 20 {
        if let Ok(g) = sample_instance(&cfg, 202, i) {
            let mut inst = g.instance;
            inst.domain = Domain::disk(1.0);
            let ok = quality_filter(&inst, &cfg, &mut RngStream::from_seed(i)).is_ok()
                && inst.ground_truth_grid(RES).is_ok();
            if ok {
                insts.push(inst);
            }
        }
        i += 1;
    }

    let z: Vec<f64> = insts
        .par_iter()
        .map(|inst| {
            let (clean, mask) = inst.ground_truth_grid(RES).unwrap();
            let est = solve_grid(inst, &[B], &params, 3).unwrap().fields.remove(0);
            let err: Vec<f64> = (0..mask.len())
                .filter(|&k| mask.inside(k))
                .map(|k| f64::from(est.data()[k]) - f64::from(clean.data()[k]))
                .collect();
            let n = err.len() as f64;
            let mean = err.iter().sum::<f64>() / n;
            let var = err.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0);
            // Pixels use independent walks, so the spread of the errors
            // gives the standard error of their mean.
            mean / (var / n).sqrt()
        })
        .collect();
    let within = z.iter().filter(|z| z.abs() <= 3.0).count();
    let pass = within >= 18;
    report(
        "unbiasedness",
        pass,
        format!("{within}/20 Laplace unit-disk cases within 3 SE at B={B} (need >= 18); |z| max {:.2}", z.iter().fold(0.0f64, |a, z| a.max(z.abs()))),
    );
    assert!(pass);
}

/// Fourth-order five-point Laplacian.
fn fd_laplacian(g: &dyn Fn(Vec2) -> f64, p: Vec2, h: f64) -> f64 {
    let axis = |d: Vec2| {
        -g(p + d * 2.0) + 16.0 * g(p + d) - 30.0 * g(p) + 16.0 * g(p - d) - g(p - d * 2.0)
    };
    (axis(Vec2::new(h, 0.0)) + axis(Vec2::new(0.0, h))) / (12.0 * h * h)
}

/// The PDE operator applied to `u` by finite differences.
fn fd_operator(inst: &PdeInstance, p: Vec2) -> f64 {
    let u = |q: Vec2| inst.solution.value(q);
    match inst.family {
        Family::Laplace | Family::Poisson => fd_laplacian(&u, p, 2e-3),
        Family::Yukawa => fd_laplacian(&u, p, 2e-3) - inst.lambda * u(p),
        Family::Helmholtz => fd_laplacian(&u, p, 2e-3) + inst.k * inst.k * u(p),
        Family::Biharmonic => {
            let lap = |q: Vec2| fd_laplacian(&u, q, 4e-3);
            fd_laplacian(&lap, p, 4e-3)
        }
    }
}

#[test]
fn manufactured_consistency() {
    let mut ok = true;
    for fam in Family::ALL {
        let cfg = GenConfig { families: vec![(fam, 1.0)], resolution: 32, ..GenConfig::test() };
        let insts: Vec<PdeInstance> =
            (0..120u64).into_par_iter().filter_map(|i| sample_instance(&cfg, 303, i).ok()).map(|g| g.instance).collect();
        let results: Vec<(usize, usize, f64)> = insts
            .into_par_iter()
            .take(100)
            .map(|inst| {
                let tol = if inst.solution.has_hard() { 1e-1 } else { 1e-2 };
                let pts = sample_interior(&inst.domain, &mut RngStream::from_seed(inst.hardness.std_u.to_bits()), 16).unwrap();
                let mut good = 0;
                let mut worst = 0.0f64;
                for &p in &pts.points {
                    let f = inst.forcing(p);
                    let r = (fd_operator(&inst, p) - f).abs() / (1.0 + f.abs());
                    worst = worst.max(r / tol);
                    good += usize::from(r <= tol);
                }
                (good, pts.points.len(), worst)
            })
            .collect();
        let good: usize = results.iter().map(|r| r.0).sum();
        let total: usize = results.iter().map(|r| r.1).sum();
        let frac = good as f64 / total as f64;
        let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
        let pass = results.len() == 100 && frac >= 0.99;
        ok &= pass;
        report(
            &format!("manufactured consistency [{}]", fam.name()),
            pass,
            format!(
                "{} instances, {good}/{total} points within tolerance ({:.2}%, need >= 99%); worst residual {worst:.2e} of tolerance",
                results.len(),
                100.0 * frac
            ),
        );
    }
    assert!(ok);
}

#[test]
fn geometry_conservativeness() {
    // sdf must never exceed the distance to the sampled boundary.
    let mut rng = RngStream::from_seed(404);
    let mut checked = 0;
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    while checked < 10_000 {
        let d = sample_domain(&mut rng);
        if !d.is_composed() {
            continue;
        }
        let Ok(pts) = sample_interior(&d, &mut rng, 100) else { continue };
        let bnd = sample_boundary(&d, &mut rng, 4096);
        for &p in pts.points.iter().take(10_000 - checked) {
            let dist = bnd.iter().map(|&b| (b - p).norm()).fold(f64::INFINITY, f64::min);
            let excess = d.sdf(p) - dist;
            worst = worst.max(excess);
            violations += usize::from(excess > 1e-3);
            checked += 1;
        }
    }
    let pass = violations == 0;
    report(
        "geometry conservativeness",
        pass,
        format!("{checked} composed-domain points, {violations} violations; max sdf - boundary distance {worst:.2e}"),
    );
    assert!(pass);
}

#[test]
fn difficulty_calibration() {
    const RES: usize = 32;
    let cfg = GenConfig { resolution: RES, ..GenConfig::train() };
    let params = WosParams { resolution: RES, ..WosParams::train() };
    let tiers: Vec<(Family, DifficultyTier)> = (0..1100u64)
        .into_par_iter()
        .filter_map(|i| sample_instance(&cfg, 505, i).ok())
        .map(|g| {
            let inst = g.instance;
            let (clean, mask) = inst.ground_truth_grid(RES).unwrap();
            let est = solve_grid(&inst, &[32], &params, 5).unwrap().fields.remove(0);
            (inst.family, difficulty_tier(masked_mse(&est, &clean, &mask)))
        })
        .collect();
    assert!(tiers.len() >= 1000, "only {} accepted", tiers.len());
    let tiers = &tiers[..1000];
    let target = [20.0, 41.0, 30.0, 8.0];
    let mut pass = true;
    let mut parts = Vec::new();
    for (t, want) in DifficultyTier::ALL.iter().zip(target) {
        let pct = tiers.iter().filter(|x| x.1 == *t).count() as f64 / 10.0;
        pass &= (pct - want).abs() <= 10.0;
        parts.push(format!("{} {pct:.1}% (target {want})", t.name()));
    }
    let laplace_share = {
        let vh: Vec<_> = tiers.iter().filter(|x| x.1 == DifficultyTier::VeryHard).collect();
        vh.iter().filter(|x| x.0 == Family::Laplace).count() as f64 / vh.len().max(1) as f64
    };
    report(
        "difficulty calibration",
        pass,
        format!("{}; Laplace share of very_hard {:.0}%", parts.join(", "), 100.0 * laplace_share),
    );
    assert!(pass);
}

/// Records and bundles of a small split, as bytes keyed by relative path.
fn dataset_bytes(threads: usize) -> BTreeMap<String, Vec<u8>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
    let dir = tempfile::tempdir().unwrap();
    pool.install(|| {
        let cfg = GenConfig { resolution: 32, ..GenConfig::train() };
        let params = WosParams { resolution: 32, ..WosParams::train() };
        let insts: Vec<PdeInstance> =
            (0..6u64).into_par_iter().filter_map(|i| sample_instance(&cfg, 606, i).ok()).map(|g| g.instance).collect();
        let layout = Layout::new(dir.path());
        let records: Vec<CaseRecord> = insts.iter().map(CaseRecord::from).collect();
        write_records(&layout.records("train"), &records).unwrap();
        for inst in &insts {
            let traj = solve_grid(inst, &[1, 2, 4, 8, 16, 32], &params, 606).unwrap();
            let (clean, _) = inst.ground_truth_grid(32).unwrap();
            layout.write_trajectory("train", inst, &traj, &clean, &params, None).unwrap();
        }
    });
    let mut out = BTreeMap::new();
    for e in walk(dir.path()) {
        out.insert(e.strip_prefix(dir.path()).unwrap().display().to_string(), std::fs::read(&e).unwrap());
    }
    out
}

fn walk(dir: &std::path::Path) -> Vec<std::path::PathBuf> {
    let mut v = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            v.extend(walk(&p));
        } else {
            v.push(p);
        }
    }
    v
}

#[test]
fn determinism() {
    let one = dataset_bytes(1);
    let many = dataset_bytes(4);
    let bundles = one.keys().filter(|k| k.ends_with(".npz")).count();
    let pass = one == many && bundles > 0;
    report("determinism", pass, format!("{} files ({bundles} bundles) byte-identical across 1 and 4 threads: {}", one.len(), one == many));
    assert!(pass);
}

#[test]
fn denoiser_ordering() {
    const RES: usize = 128;
    let cfg = GenConfig { resolution: RES, ..GenConfig::only(Family::Poisson) };
    let params = WosParams { resolution: RES, ..WosParams::train() };
    let dp = DenoiseParams::default();
    let methods = [Method::Nlm, Method::Tv, Method::Gaussian];
    let insts: Vec<PdeInstance> =
        (0..60u64).into_par_iter().filter_map(|i| sample_instance(&cfg, 707, i).ok()).map(|g| g.instance).collect();
    assert!(insts.len() >= 50, "only {} accepted", insts.len());
    let rows: Vec<[f64; 4]> = insts[..50]
        .par_iter()
        .map(|inst| {
            let (clean, mask) = inst.ground_truth_grid(RES).unwrap();
            let raw = solve_grid(inst, &[8], &params, 8).unwrap().fields.remove(0);
            let psnr = |f: &Field| masked_metrics(f, &clean, &mask).unwrap().psnr_db;
            let mut row = [0.0; 4];
            for (slot, m) in methods.iter().enumerate() {
                row[slot] = psnr(&denoise(&raw, &mask, *m, &dp).unwrap());
            }
            row[3] = psnr(&raw);
            row
        })
        .collect();
    let mean = |c: usize| rows.iter().map(|r| r[c]).sum::<f64>() / rows.len() as f64;
    let (nlm, tv, gauss, raw) = (mean(0), mean(1), mean(2), mean(3));
    let pass = nlm >= tv && tv > gauss && gauss > raw && nlm - raw >= 5.0;
    report(
        "denoiser ordering",
        pass,
        format!(
            "mean PSNR nlm {nlm:.2}, tv {tv:.2}, gaussian {gauss:.2}, raw {raw:.2} dB; nlm - raw {:.2} dB (need >= 5); median raw {:.2}",
            nlm - raw,
            median(&rows.iter().map(|r| r[3]).collect::<Vec<_>>())
        ),
    );
    assert!(pass);
}

#[test]
fn green_sampling() {
    const N: usize = 1_000_000;
    const BINS: usize = 50;
    let radius = 0.7;
    // CDF of s = r / R is s^2 (1 - 2 ln s); bins of equal probability.
    let cdf = |s: f64| if s <= 0.0 { 0.0 } else { s * s * (1.0 - 2.0 * s.ln()) };
    let mut edges = vec![0.0; BINS + 1];
    edges[BINS] = 1.0;
    for (b, e) in edges.iter_mut().enumerate().take(BINS).skip(1) {
        let target = b as f64 / BINS as f64;
        let (mut lo, mut hi) = (0.0, 1.0);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cdf(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        *e = 0.5 * (lo + hi);
    }
    let mut counts = [0usize; BINS];
    let mut rng = RngStream::from_seed(808);
    let mut mass = 0.0;
    for _ in 0..N {
        let (off, m) = greens_sample_ball(radius, &mut rng);
        mass = m;
        let s = off.norm() / radius;
        let b = edges.partition_point(|&e| e <= s).clamp(1, BINS) - 1;
        counts[b] += 1;
    }
    let expected = N as f64 / BINS as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p = 1.0 - ChiSquared::new((BINS - 1) as f64).unwrap().cdf(chi2);

    // Mass against midpoint quadrature of the radial Green's function.
    let n = 200_000;
    let h = radius / n as f64;
    let quad: f64 = (0..n)
        .map(|i| {
            let r = (i as f64 + 0.5) * h;
            r * (radius / r).ln()
        })
        .sum::<f64>()
        * h;
    let mass_err = (mass - quad).abs();
    let pass = p > 0.01 && mass_err <= 1e-6;
    report(
        "green sampling",
        pass,
        format!("chi2 {chi2:.1} on {} dof, p = {p:.3} (need > 0.01); mass {mass:.8} vs quadrature {quad:.8}", BINS - 1),
    );
    assert!(pass);
}
