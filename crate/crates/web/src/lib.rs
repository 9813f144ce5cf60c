//! WebAssembly bindings for `www/index.html`.

use mcpde::denoise::{self, DenoiseParams, Method};
use mcpde::manufactured::{sample_instance, Family, GenConfig, PdeInstance};
use mcpde::metrics::masked_metrics;
use mcpde::wos::{solve_grid, WosParams};
use mcpde::Field;
use wasm_bindgen::prelude::*;

/// One instance with its ground truth and latest estimate.
#[wasm_bindgen]
pub struct Demo {
    inst: PdeInstance,
    res: usize,
    clean: Field,
    mask: Field,
    estimate: Option<Field>,
    lo: f32,
    hi: f32,
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn js(e: String) -> JsError {
    JsError::new(&e)
}

#[wasm_bindgen]
impl Demo {
    /// Draws case `index` of `family` (laplace, poisson or yukawa) at `res`².
    #[wasm_bindgen(constructor)]
    pub fn new(family: &str, seed: u64, index: u64, res: usize) -> Result<Demo, JsError> {
        Demo::create(family, seed, index, res).map_err(js)
    }

    #[wasm_bindgen(getter)]
    pub fn res(&self) -> usize {
        self.res
    }

    /// Case id, family, parameter and expression, one per line.
    pub fn describe(&self) -> String {
        let mut s = format!("{}  {}", self.inst.case_id, self.inst.family.name());
        if self.inst.family == Family::Yukawa {
            s.push_str(&format!("  lambda={:.3}", self.inst.lambda));
        }
        format!("{s}\n{}\nu = {}", self.inst.domain.name(), self.inst.solution.to_expr())
    }

    /// RGBA pixels of the ground truth.
    pub fn clean_rgba(&self) -> Vec<u8> {
        rgba(&self.clean, &self.mask, self.lo, self.hi)
    }

    /// Runs `budget` walks per pixel; returns the PSNR in dB.
    pub fn solve(&mut self, budget: u32, seed: u64) -> Result<f64, JsError> {
        self.run_solve(budget, seed).map_err(js)
    }

    /// Denoises the current estimate in place; returns the new PSNR.
    pub fn denoise(&mut self, method: &str) -> Result<f64, JsError> {
        self.run_denoise(method).map_err(js)
    }

    /// RGBA pixels of the current estimate, on the ground truth's colour scale.
    pub fn estimate_rgba(&self) -> Vec<u8> {
        match &self.estimate {
            Some(e) => rgba(e, &self.mask, self.lo, self.hi),
            None => rgba(&Field::zeros(self.res), &Field::zeros(self.res), 0.0, 1.0),
        }
    }
}

impl Demo {
    pub fn create(family: &str, seed: u64, index: u64, res: usize) -> Result<Demo, String> {
        let fam = Family::parse(family)
            .filter(|f| f.wos_supported())
            .ok_or_else(|| format!("unsupported family {family:?}"))?;
        if !(8..=256).contains(&res) {
            return Err("resolution must be in 8..=256".into());
        }
        let cfg = GenConfig { resolution: res, ..GenConfig::only(fam) };
        let inst = sample_instance(&cfg, seed, index)
            .map_err(|e| format!("no valid instance after {} attempts", e.attempts))?
            .instance;
        let (clean, mask) = inst.ground_truth_grid(res).map_err(err)?;
        let (lo, hi) = range(&clean, &mask);
        Ok(Demo { inst, res, clean, mask, estimate: None, lo, hi })
    }

    pub fn run_solve(&mut self, budget: u32, seed: u64) -> Result<f64, String> {
        let params = WosParams { resolution: self.res, ..WosParams::train() };
        let traj = solve_grid(&self.inst, &[budget.max(1)], &params, seed).map_err(err)?;
        let est = traj.fields.into_iter().next().expect("one budget");
        let psnr = self.psnr(&est)?;
        self.estimate = Some(est);
        Ok(psnr)
    }

    pub fn run_denoise(&mut self, method: &str) -> Result<f64, String> {
        let m: Method = method.parse().map_err(err)?;
        let est = self.estimate.as_ref().ok_or("solve first")?;
        let out = denoise::denoise(est, &self.mask, m, &DenoiseParams::default()).map_err(err)?;
        let psnr = self.psnr(&out)?;
        self.estimate = Some(out);
        Ok(psnr)
    }

    fn psnr(&self, est: &Field) -> Result<f64, String> {
        Ok(masked_metrics(est, &self.clean, &self.mask).map_err(err)?.psnr_db)
    }
}

fn range(f: &Field, mask: &Field) -> (f32, f32) {
    let (mut lo, mut hi) = (f32::INFINITY, f32::NEG_INFINITY);
    for (k, &v) in f.data().iter().enumerate() {
        if mask.inside(k) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if lo.is_finite() && hi > lo {
        (lo, hi)
    } else {
        (lo.min(0.0), lo.max(0.0) + 1.0)
    }
}

/// Blue-white-red ramp; outside the mask is dark grey. Row 0 is the top
/// (largest y).
pub fn rgba(f: &Field, mask: &Field, lo: f32, hi: f32) -> Vec<u8> {
    let res = f.res();
    let mut out = Vec::with_capacity(res * res * 4);
    for row in 0..res {
        let i = res - 1 - row;
        for j in 0..res {
            let k = i * res + j;
            if !mask.inside(k) {
                out.extend_from_slice(&[40, 40, 40, 255]);
                continue;
            }
            let t = ((f.data()[k] - lo) / (hi - lo)).clamp(0.0, 1.0);
            let (r, g, b) = if t < 0.5 {
                let s = t * 2.0;
                (s, s, 1.0)
            } else {
                let s = (1.0 - t) * 2.0;
                (1.0, s, s)
            };
            out.extend_from_slice(&[(r * 255.0) as u8, (g * 255.0) as u8, (b * 255.0) as u8, 255]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve_then_denoise_improves_psnr() {
        let mut d = Demo::create("poisson", 3, 0, 32).unwrap();
        assert!(d.describe().contains("poisson"));
        assert_eq!(d.clean_rgba().len(), 32 * 32 * 4);
        let raw = d.run_solve(4, 1).unwrap();
        let more = Demo::create("poisson", 3, 0, 32).unwrap().run_solve(64, 1).unwrap();
        assert!(more > raw, "{more} vs {raw}");
        let den = d.run_denoise("gaussian").unwrap();
        assert!(den.is_finite());
        assert_eq!(d.estimate_rgba().len(), 32 * 32 * 4);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Demo::create("helmholtz", 0, 0, 32).is_err());
        assert!(Demo::create("poisson", 0, 0, 4).is_err());
        let mut d = Demo::create("laplace", 0, 0, 16).unwrap();
        assert_eq!(d.run_denoise("tv").unwrap_err(), "solve first");
        d.run_solve(2, 0).unwrap();
        assert!(d.run_denoise("wiener").is_err());
    }

    #[test]
    fn ramp_endpoints() {
        let f = Field::from_vec(2, vec![0.0, 1.0, 0.5, 0.0]);
        let m = Field::from_vec(2, vec![1.0, 1.0, 1.0, 0.0]);
        let px = rgba(&f, &m, 0.0, 1.0);
        // Row 0 of the image is field row 1: (0.5, outside).
        assert_eq!(&px[0..4], &[255, 255, 255, 255]);
        assert_eq!(&px[4..8], &[40, 40, 40, 255]);
        assert_eq!(&px[8..12], &[0, 0, 255, 255]);
        assert_eq!(&px[12..16], &[255, 0, 0, 255]);
    }
}
