use std::f64::consts::TAU;

use super::forms::{Bump, Form, Hyper, Wave};
use super::{Atom, AtomKind, Solution};
use crate::rng::RngStream;
use crate::vec2::Vec2;

/// Extra pool copies of each hard kind.
pub const DEFAULT_HARD_EXTRA: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pool {
    General,
    Harmonic,
}

/// The selection pool, one entry per copy; draws are uniform over entries.
pub fn pool_entries(pool: Pool, hard_extra: u32) -> Vec<AtomKind> {
    let extra = |k: AtomKind| if k.is_hard() { hard_extra } else { 0 };
    let mut out = Vec::new();
    match pool {
        Pool::General => {
            out.extend(AtomKind::GENERAL);
            for k in AtomKind::GENERAL {
                out.extend(std::iter::repeat(k).take(extra(k) as usize));
            }
        }
        Pool::Harmonic => {
            for (k, w) in AtomKind::HARMONIC {
                out.extend(std::iter::repeat(k).take((w + extra(k)) as usize));
            }
        }
    }
    out
}

fn amp(rng: &mut RngStream) -> f64 {
    rng.range(-1.0, 1.0)
}

fn square_point(rng: &mut RngStream) -> Vec2 {
    Vec2::new(rng.range(-1.0, 1.0), rng.range(-1.0, 1.0))
}

/// Centers of singular atoms lie at radius `[1.8, 2.5]`, outside the grid.
fn far_center(rng: &mut RngStream) -> Vec2 {
    Vec2::from_polar(rng.range(1.8, 2.5), rng.angle())
}

fn waveform(rng: &mut RngStream) -> Wave {
    [Wave::Sin, Wave::Cos, Wave::Tanh][rng.index(3)]
}

/// Draws parameters for `kind` uniformly from its ranges.
pub fn sample_kind(kind: AtomKind, rng: &mut RngStream) -> Atom {
    let form = match kind {
        AtomKind::Poly => {
            let mut c = [0.0; 10];
            for v in &mut c {
                *v = amp(rng);
            }
            Form::Poly { c }
        }
        AtomKind::Trig => Form::SinX { a: amp(rng), k: rng.range(1.0, 6.0) },
        AtomKind::Exp => Form::ExpX { a: amp(rng), b: rng.range(-2.0, 2.0) },
        AtomKind::Log => Form::LogX { a: amp(rng), shift: 0.01 },
        AtomKind::Hyper => Form::HyperX {
            a: amp(rng),
            func: [Hyper::Sinh, Hyper::Cosh, Hyper::Tanh][rng.index(3)],
        },
        AtomKind::Special => {
            let a = amp(rng);
            if rng.coin() {
                Form::ErfX { a }
            } else {
                Form::SoftAbsX { a, eps: 0.01 }
            }
        }
        AtomKind::HarmonicPolar => Form::Polar {
            a: amp(rng),
            n: rng.int_inclusive(1, 6),
            sine: false,
        },
        AtomKind::PlaneWave => Form::PlaneWave {
            a: amp(rng),
            k: rng.range(1.0, 8.0),
            dir: rng.angle(),
        },
        AtomKind::YukawaI0 => Form::RadialI0 {
            a: amp(rng),
            mu: rng.range(0.5, 6.0).sqrt(),
        },
        AtomKind::LogSource | AtomKind::HLogSource => Form::LogRadius {
            a: amp(rng),
            center: far_center(rng),
        },
        AtomKind::GaussianBump => Form::Gaussian(Bump {
            a: amp(rng),
            w: rng.range(0.8, 2.0),
            center: square_point(rng),
        }),
        AtomKind::NarrowBump => Form::Gaussian(Bump {
            a: amp(rng),
            w: rng.range(8.0, 25.0),
            center: square_point(rng),
        }),
        AtomKind::Rational => Form::Rational {
            a: amp(rng),
            b: rng.range(0.5, 3.0),
            c: rng.range(0.5, 3.0),
        },
        AtomKind::Product => Form::Product {
            a: amp(rng),
            f1: waveform(rng),
            k1: rng.range(1.0, 4.0),
            f2: waveform(rng),
            k2: rng.range(1.0, 4.0),
        },
        AtomKind::MultiRbf => {
            let n = rng.int_inclusive(2, 4);
            let terms = (0..n)
                .map(|_| Bump {
                    a: amp(rng),
                    w: rng.range(2.0, 8.0),
                    center: square_point(rng),
                })
                .collect();
            Form::GaussianSum { terms }
        }
        AtomKind::HighFreqTrig => Form::SinCos {
            a: amp(rng),
            k1: rng.range(2.0, 8.0),
            k2: rng.range(2.0, 8.0),
        },
        AtomKind::VeryHighFreqTrig => Form::SinCos {
            a: amp(rng),
            k1: rng.range(6.0, 15.0),
            k2: rng.range(6.0, 15.0),
        },
        AtomKind::Logsumexp => Form::LogSumExp {
            a: amp(rng),
            b: rng.range(1.0, 4.0),
            c: rng.range(1.0, 4.0),
        },
        AtomKind::SechBump => Form::SechBump {
            a: amp(rng),
            b: rng.range(2.0, 6.0),
            c: rng.range(2.0, 6.0),
            center: square_point(rng),
        },
        AtomKind::SharpTransition => Form::TanhRamp {
            a: amp(rng),
            k: rng.range(5.0, 15.0),
            dir: rng.angle(),
            offset: rng.range(-0.5, 0.5),
        },
        AtomKind::HPolar => Form::Polar {
            a: amp(rng),
            n: rng.int_inclusive(1, 6),
            sine: rng.coin(),
        },
        AtomKind::HHighNPolar => Form::Polar {
            a: amp(rng),
            n: rng.int_inclusive(6, 12),
            sine: rng.coin(),
        },
        AtomKind::HExpTrig => Form::ExpTrig {
            a: amp(rng),
            k: rng.range(-3.0, 3.0),
            sine: rng.coin(),
        },
        AtomKind::HHighFreqExpTrig => Form::ExpTrig {
            a: amp(rng),
            k: rng.range(4.0, 10.0),
            sine: rng.coin(),
        },
        AtomKind::HTrigHyp => Form::TrigHyp {
            a: amp(rng),
            k: rng.range(0.5, 4.0),
            sine: rng.coin(),
            sinh: rng.coin(),
            swap: rng.coin(),
        },
        AtomKind::HLinear => Form::Linear { a: amp(rng), b: amp(rng) },
        AtomKind::HBilinear => Form::Bilinear { a: amp(rng) },
        AtomKind::HArctan => Form::Angle { a: amp(rng), center: far_center(rng) },
        AtomKind::HInversion => Form::Inversion { a: amp(rng), center: far_center(rng) },
        AtomKind::HDipole => Form::Dipole { a: amp(rng), center: far_center(rng) },
        AtomKind::HQuadratic => Form::Quadratic {
            a: amp(rng),
            angle: rng.range(0.0, TAU),
            mixed: rng.coin(),
        },
    };
    Atom { kind, form }
}

/// Draws one atom: a uniform pool entry, then its parameters.
pub fn sample_atom(pool: Pool, hard_extra: u32, rng: &mut RngStream) -> Atom {
    let entries = pool_entries(pool, hard_extra);
    let kind = entries[rng.index(entries.len())];
    sample_kind(kind, rng)
}

/// A solution of `n ~ U{2..6}` atoms from `pool`.
pub fn sample_solution(pool: Pool, hard_extra: u32, rng: &mut RngStream) -> Solution {
    let entries = pool_entries(pool, hard_extra);
    let n = rng.int_inclusive(2, 6);
    let atoms = (0..n)
        .map(|_| sample_kind(entries[rng.index(entries.len())], rng))
        .collect();
    Solution::new(atoms)
}
