//! Classical denoisers restricted to a domain mask.
//!
//! Every method sees only masked-in pixels: linear filters renormalize their
//! kernel over the mask, order and patch filters drop masked-out neighbours.
//! Values are mapped to `[0, 1]` over the mask before filtering so that the
//! intensity parameters (`sigma_color`, `h`, the TV weight) act on a fixed
//! scale, then mapped back.

mod tv;

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{Field, FieldError};

pub use tv::{tv_chambolle, TvResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gaussian,
    GaussianHeavy,
    Median,
    Bilateral,
    Tv,
    Nlm,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Gaussian,
        Method::GaussianHeavy,
        Method::Median,
        Method::Bilateral,
        Method::Tv,
        Method::Nlm,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gaussian => "gaussian",
            Method::GaussianHeavy => "gaussian_heavy",
            Method::Median => "median",
            Method::Bilateral => "bilateral",
            Method::Tv => "tv",
            Method::Nlm => "nlm",
        }
    }
}

impl FromStr for Method {
    type Err = DenoiseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| DenoiseError::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DenoiseError {
    #[error("unknown denoising method {0:?}")]
    UnknownMethod(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DenoiseParams {
    pub sigma: f64,
    pub sigma_heavy: f64,
    /// Gaussian kernels are cut at `truncate * sigma`.
    pub truncate: f64,
    pub median_radius: usize,
    pub sigma_color: f64,
    pub sigma_spatial: f64,
    pub tv_weight: f64,
    pub tv_max_iter: usize,
    pub tv_tol: f64,
    pub nlm_patch: usize,
    pub nlm_search: usize,
    pub nlm_h: f64,
    /// Filter inside the mask only. When false the whole grid is filtered,
    /// exterior zeros included, and the result is masked afterwards.
    pub masked: bool,
}

impl Default for DenoiseParams {
    fn default() -> Self {
        DenoiseParams {
            sigma: 1.0,
            sigma_heavy: 2.0,
            truncate: 4.0,
            median_radius: 2,
            sigma_color: 0.1,
            sigma_spatial: 5.0,
            tv_weight: 0.1,
            tv_max_iter: 200,
            tv_tol: 1e-4,
            nlm_patch: 5,
            nlm_search: 6,
            nlm_h: 0.1,
            masked: true,
        }
    }
}

/// Masked grid in `f64`, normalized to `[0, 1]` over the mask.
pub(crate) struct Grid {
    pub res: usize,
    pub v: Vec<f64>,
    pub m: Vec<bool>,
    lo: f64,
    scale: f64,
}

impl Grid {
    fn new(field: &Field, mask: &Field) -> Result<Self, DenoiseError> {
        field.check_shape(mask)?;
        let m: Vec<bool> = (0..mask.len()).map(|k| mask.inside(k)).collect();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for (k, &inside) in m.iter().enumerate() {
            if inside {
                let x = f64::from(field.data()[k]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
        if lo > hi {
            return Err(FieldError::EmptyMask.into());
        }
        let scale = if hi > lo { hi - lo } else { 1.0 };
        let v = field
            .data()
            .iter()
            .zip(&m)
            .map(|(&x, &inside)| if inside { (f64::from(x) - lo) / scale } else { 0.0 })
            .collect();
        Ok(Grid { res: field.res(), v, m, lo, scale })
    }

    fn finish(&self, out: Vec<f64>) -> Field {
        Field::from_vec(
            self.res,
            out.iter()
                .zip(&self.m)
                .map(|(&x, &inside)| if inside { (x * self.scale + self.lo) as f32 } else { 0.0 })
                .collect(),
        )
    }

    /// Masked-in neighbours `(k, dy, dx)` of pixel `(i, j)` within a square window.
    #[inline]
    fn window(&self, i: usize, j: usize, r: usize) -> impl Iterator<Item = (usize, isize, isize)> + '_ {
        let n = self.res as isize;
        let (i, j, r) = (i as isize, j as isize, r as isize);
        (-r..=r).flat_map(move |dy| {
            (-r..=r).filter_map(move |dx| {
                let (y, x) = (i + dy, j + dx);
                if y < 0 || x < 0 || y >= n || x >= n {
                    return None;
                }
                let k = (y * n + x) as usize;
                self.m[k].then_some((k, dy, dx))
            })
        })
    }
}

/// Denoises `field` inside `mask`. Pixels outside the mask come back as 0.
pub fn denoise(field: &Field, mask: &Field, method: Method, p: &DenoiseParams) -> Result<Field, DenoiseError> {
    if !p.masked {
        field.check_shape(mask)?;
        let whole = Field::from_vec(field.res(), vec![1.0; field.len()]);
        let inner = DenoiseParams { masked: true, ..*p };
        return Ok(denoise(&field.clone().masked(mask), &whole, method, &inner)?.masked(mask));
    }
    let g = Grid::new(field, mask)?;
    let out = match method {
        Method::Gaussian => gaussian(&g, p.sigma, p.truncate),
        Method::GaussianHeavy => gaussian(&g, p.sigma_heavy, p.truncate),
        Method::Median => median(&g, p.median_radius),
        Method::Bilateral => bilateral(&g, p.sigma_color, p.sigma_spatial),
        Method::Tv => tv::chambolle(&g.v, &g.m, g.res, p.tv_weight, p.tv_max_iter, p.tv_tol).u,
        Method::Nlm => nlm(&g, p.nlm_patch, p.nlm_search, p.nlm_h),
    };
    Ok(g.finish(out))
}

/// Parses `name` and denoises.
pub fn denoise_named(field: &Field, mask: &Field, name: &str, p: &DenoiseParams) -> Result<Field, DenoiseError> {
    denoise(field, mask, name.parse()?, p)
}

fn gaussian_kernel(sigma: f64, truncate: f64) -> Vec<f64> {
    let r = (truncate * sigma + 0.5) as isize;
    let k: Vec<f64> = (-r..=r).map(|d| (-(d * d) as f64 / (2.0 * sigma * sigma)).exp()).collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|x| x / s).collect()
}

/// Separable convolution with zero padding.
fn convolve_separable(v: &[f64], res: usize, k: &[f64]) -> Vec<f64> {
    let r = (k.len() / 2) as isize;
    let n = res as isize;
    let mut tmp = vec![0.0; v.len()];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for (t, &w) in k.iter().enumerate() {
                let x = j + t as isize - r;
                if (0..n).contains(&x) {
                    s += w * v[(i * n + x) as usize];
                }
            }
            tmp[(i * n + j) as usize] = s;
        }
    }
    let mut out = vec![0.0; v.len()];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for (t, &w) in k.iter().enumerate() {
                let y = i + t as isize - r;
                if (0..n).contains(&y) {
                    s += w * tmp[(y * n + j) as usize];
                }
            }
            out[(i * n + j) as usize] = s;
        }
    }
    out
}

/// Normalized convolution: `K * (m f) / K * m`.
fn gaussian(g: &Grid, sigma: f64, truncate: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return g.v.clone();
    }
    let k = gaussian_kernel(sigma, truncate);
    let w: Vec<f64> = g.m.iter().map(|&b| f64::from(u8::from(b))).collect();
    let num = convolve_separable(&g.v, g.res, &k);
    let den = convolve_separable(&w, g.res, &k);
    num.iter()
        .zip(&den)
        .zip(&g.m)
        .map(|((&a, &b), &inside)| if inside && b > 0.0 { a / b } else { 0.0 })
        .collect()
}

/// Median over the masked part of a disk.
fn median(g: &Grid, radius: usize) -> Vec<f64> {
    let r2 = (radius * radius) as isize;
    let mut out = vec![0.0; g.v.len()];
    let mut buf = Vec::new();
    for i in 0..g.res {
        for j in 0..g.res {
            let k0 = i * g.res + j;
            if !g.m[k0] {
                continue;
            }
            buf.clear();
            buf.extend(g.window(i, j, radius).filter(|&(_, dy, dx)| dy * dy + dx * dx <= r2).map(|(k, _, _)| g.v[k]));
            buf.sort_by(f64::total_cmp);
            let n = buf.len();
            out[k0] = if n % 2 == 1 { buf[n / 2] } else { 0.5 * (buf[n / 2 - 1] + buf[n / 2]) };
        }
    }
    out
}

fn bilateral(g: &Grid, sigma_color: f64, sigma_spatial: f64) -> Vec<f64> {
    let win = 5usize.max(2 * (3.0 * sigma_spatial).ceil() as usize + 1);
    let r = win / 2;
    let side = 2 * r + 1;
    let spatial: Vec<f64> = (0..side * side)
        .map(|t| {
            let dy = (t / side) as f64 - r as f64;
            let dx = (t % side) as f64 - r as f64;
            (-(dy * dy + dx * dx) / (2.0 * sigma_spatial * sigma_spatial)).exp()
        })
        .collect();
    let c2 = 2.0 * sigma_color * sigma_color;
    let mut out = vec![0.0; g.v.len()];
    for i in 0..g.res {
        for j in 0..g.res {
            let k0 = i * g.res + j;
            if !g.m[k0] {
                continue;
            }
            let c = g.v[k0];
            let (mut num, mut den) = (0.0, 0.0);
            for (k, dy, dx) in g.window(i, j, r) {
                let d = g.v[k] - c;
                let t = (dy + r as isize) as usize * side + (dx + r as isize) as usize;
                let w = spatial[t] * (-d * d / c2).exp();
                num += w * g.v[k];
                den += w;
            }
            out[k0] = num / den;
        }
    }
    out
}

/// Summed-area table with a zero first row and column.
fn integral(v: &[f64], res: usize) -> Vec<f64> {
    let s = res + 1;
    let mut t = vec![0.0; s * s];
    for i in 0..res {
        let mut row = 0.0;
        for j in 0..res {
            row += v[i * res + j];
            t[(i + 1) * s + j + 1] = t[i * s + j + 1] + row;
        }
    }
    t
}

#[inline]
fn box_sum(t: &[f64], res: usize, i: usize, j: usize, r: usize) -> f64 {
    let s = res + 1;
    let (y0, x0) = (i.saturating_sub(r), j.saturating_sub(r));
    let (y1, x1) = ((i + r + 1).min(res), (j + r + 1).min(res));
    t[y1 * s + x1] - t[y0 * s + x1] - t[y1 * s + x0] + t[y0 * s + x0]
}

/// Non-local means with mean squared patch distances and weights
/// `exp(-d^2 / h^2)`, evaluated offset by offset with summed-area tables.
fn nlm(g: &Grid, patch: usize, search: usize, h: f64) -> Vec<f64> {
    let res = g.res;
    let pr = patch / 2;
    let n = res as isize;
    let h2 = h * h;
    let mut num = vec![0.0; g.v.len()];
    let mut den = vec![0.0; g.v.len()];
    let mut diff = vec![0.0; g.v.len()];
    let mut valid = vec![0.0; g.v.len()];
    let s = search as isize;
    for oy in -s..=s {
        for ox in -s..=s {
            for i in 0..n {
                for j in 0..n {
                    let k = (i * n + j) as usize;
                    let (y, x) = (i + oy, j + ox);
                    let ok = g.m[k] && (0..n).contains(&y) && (0..n).contains(&x) && g.m[(y * n + x) as usize];
                    if ok {
                        let d = g.v[k] - g.v[(y * n + x) as usize];
                        diff[k] = d * d;
                        valid[k] = 1.0;
                    } else {
                        diff[k] = 0.0;
                        valid[k] = 0.0;
                    }
                }
            }
            let td = integral(&diff, res);
            let tv = integral(&valid, res);
            for i in 0..n {
                for j in 0..n {
                    let k = (i * n + j) as usize;
                    if valid[k] == 0.0 {
                        continue;
                    }
                    let (iu, ju) = (i as usize, j as usize);
                    let cnt = box_sum(&tv, res, iu, ju, pr);
                    let d2 = box_sum(&td, res, iu, ju, pr).max(0.0) / cnt;
                    let w = (-d2 / h2).exp();
                    num[k] += w * g.v[((i + oy) * n + j + ox) as usize];
                    den[k] += w;
                }
            }
        }
    }
    num.iter()
        .zip(&den)
        .zip(&g.m)
        .map(|((&a, &b), &inside)| if inside && b > 0.0 { a / b } else { 0.0 })
        .collect()
}
