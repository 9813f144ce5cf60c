//! Manufactured-solution atoms and their sums.

mod expr;
mod forms;
mod sample;

use serde::{Deserialize, Serialize};

pub use expr::{Expr, ExprError};
pub use forms::{Bump, Form, Hyper, Singularity, Wave};
pub use sample::{pool_entries, sample_atom, sample_solution, Pool, DEFAULT_HARD_EXTRA};

use crate::jet::{Jet2, Jet4};
use crate::vec2::Vec2;

/// The 20 general atom kinds followed by the 12 harmonic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AtomKind {
    Poly,
    Trig,
    Exp,
    Log,
    Hyper,
    Special,
    HarmonicPolar,
    PlaneWave,
    YukawaI0,
    LogSource,
    GaussianBump,
    Rational,
    Product,
    MultiRbf,
    HighFreqTrig,
    Logsumexp,
    SechBump,
    VeryHighFreqTrig,
    NarrowBump,
    SharpTransition,
    HPolar,
    HExpTrig,
    HTrigHyp,
    HLogSource,
    HLinear,
    HBilinear,
    HArctan,
    HInversion,
    HDipole,
    HQuadratic,
    HHighFreqExpTrig,
    HHighNPolar,
}

impl AtomKind {
    pub const GENERAL: [AtomKind; 20] = [
        AtomKind::Poly,
        AtomKind::Trig,
        AtomKind::Exp,
        AtomKind::Log,
        AtomKind::Hyper,
        AtomKind::Special,
        AtomKind::HarmonicPolar,
        AtomKind::PlaneWave,
        AtomKind::YukawaI0,
        AtomKind::LogSource,
        AtomKind::GaussianBump,
        AtomKind::Rational,
        AtomKind::Product,
        AtomKind::MultiRbf,
        AtomKind::HighFreqTrig,
        AtomKind::Logsumexp,
        AtomKind::SechBump,
        AtomKind::VeryHighFreqTrig,
        AtomKind::NarrowBump,
        AtomKind::SharpTransition,
    ];

    /// Harmonic kinds with their base pool weights.
    pub const HARMONIC: [(AtomKind, u32); 12] = [
        (AtomKind::HPolar, 2),
        (AtomKind::HExpTrig, 2),
        (AtomKind::HTrigHyp, 2),
        (AtomKind::HLogSource, 2),
        (AtomKind::HLinear, 1),
        (AtomKind::HBilinear, 1),
        (AtomKind::HArctan, 1),
        (AtomKind::HInversion, 1),
        (AtomKind::HDipole, 1),
        (AtomKind::HQuadratic, 2),
        (AtomKind::HHighFreqExpTrig, 2),
        (AtomKind::HHighNPolar, 2),
    ];

    pub fn is_hard(self) -> bool {
        matches!(
            self,
            AtomKind::HighFreqTrig
                | AtomKind::SechBump
                | AtomKind::VeryHighFreqTrig
                | AtomKind::NarrowBump
                | AtomKind::SharpTransition
                | AtomKind::HHighFreqExpTrig
                | AtomKind::HHighNPolar
        )
    }

    pub fn is_harmonic(self) -> bool {
        self >= AtomKind::HPolar
    }

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default()
    }
}

/// One term of a manufactured solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub kind: AtomKind,
    #[serde(flatten)]
    pub form: Form,
}

impl Atom {
    pub fn hard(&self) -> bool {
        self.kind.is_hard()
    }
}

/// Value and derivatives of a solution at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivs {
    pub u: f64,
    pub grad: [f64; 2],
    pub laplacian: f64,
    pub bilaplacian: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivOrder {
    Grad,
    Laplacian,
    Bilaplacian,
}

/// A sum of 2 to 6 atoms.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub atoms: Vec<Atom>,
}

impl Solution {
    pub fn new(atoms: Vec<Atom>) -> Self {
        Solution { atoms }
    }

    pub fn n_terms(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_harmonic(&self) -> bool {
        self.atoms.iter().all(|a| a.kind.is_harmonic())
    }

    pub fn has_hard(&self) -> bool {
        self.atoms.iter().any(Atom::hard)
    }

    pub fn value(&self, p: Vec2) -> f64 {
        self.atoms.iter().map(|a| a.form.eval(p.x, p.y)).sum()
    }

    /// `(u, Δu)` from the closed-form Laplacians.
    pub fn value_laplacian(&self, p: Vec2) -> (f64, f64) {
        self.atoms.iter().fold((0.0, 0.0), |(u, l), a| {
            let (au, al) = a.form.value_laplacian(p);
            (u + au, l + al)
        })
    }

    pub fn jet2(&self, p: Vec2) -> Jet2 {
        let (x, y) = Jet2::variables(p.x, p.y);
        self.atoms
            .iter()
            .fold(Jet2::constant(0.0), |acc, a| acc + a.form.eval(x, y))
    }

    pub fn jet4(&self, p: Vec2) -> Jet4 {
        let (x, y) = Jet4::variables(p.x, p.y);
        self.atoms
            .iter()
            .fold(Jet4::constant(0.0), |acc, a| acc + a.form.eval(x, y))
    }

    /// Exact derivatives by forward-mode jets.
    pub fn derivs(&self, p: Vec2, order: DerivOrder) -> Derivs {
        if order == DerivOrder::Bilaplacian {
            let j = self.jet4(p);
            Derivs {
                u: j.coeff(0, 0),
                grad: j.gradient(),
                laplacian: j.laplacian(),
                bilaplacian: Some(j.bilaplacian()),
            }
        } else {
            let j = self.jet2(p);
            Derivs {
                u: j.coeff(0, 0),
                grad: j.gradient(),
                laplacian: j.laplacian(),
                bilaplacian: None,
            }
        }
    }

    pub fn bilaplacian(&self, p: Vec2) -> f64 {
        self.jet4(p).bilaplacian()
    }

    pub fn singularities(&self) -> Vec<Singularity> {
        self.atoms.iter().filter_map(|a| a.form.singularity()).collect()
    }

    /// Canonical prefix expression.
    pub fn to_expr(&self) -> String {
        expr::solution_expr(self)
    }
}
