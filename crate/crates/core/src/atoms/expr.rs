//! Prefix-notation expressions for solutions.
//!
//! Grammar: `expr := number | x | y | (op expr...)` with `op` one of
//! `+ * sin cos exp log tanh sinh cosh erf atan2 sqrt pow I0`. `pow` takes an
//! integer literal exponent. Numbers print in shortest round-trip form.

use std::fmt::Write;
use std::f64::consts::PI;

use thiserror::Error;

use super::forms::{angle_frame, Bump, Form, Hyper, Wave};
use super::Solution;
use crate::jet::Real;
use crate::vec2::Vec2;

#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error("unexpected end of expression")]
    Eof,
    #[error("unexpected token `{token}` at byte {pos}")]
    Unexpected { token: String, pos: usize },
    #[error("`{op}` takes {want} argument(s), got {got}")]
    Arity { op: String, want: usize, got: usize },
    #[error("`pow` needs an integer exponent literal")]
    Exponent,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Log,
    Tanh,
    Sinh,
    Cosh,
    Erf,
    Sqrt,
    I0,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Y,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i32),
    Atan2(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let e = parse_expr(&tokens, &mut pos)?;
        if let Some((t, at)) = tokens.get(pos) {
            return Err(ExprError::Unexpected { token: t.to_string(), pos: *at });
        }
        Ok(e)
    }

    pub fn eval<T: Real>(&self, x: T, y: T) -> T {
        match self {
            Expr::Num(v) => T::cst(*v),
            Expr::X => x,
            Expr::Y => y,
            Expr::Add(v) => v.iter().fold(T::cst(0.0), |acc, e| acc + e.eval(x, y)),
            Expr::Mul(v) => v.iter().fold(T::cst(1.0), |acc, e| acc * e.eval(x, y)),
            Expr::Pow(b, n) => b.eval(x, y).powi(*n),
            Expr::Atan2(a, b) => a.eval(x, y).atan2(b.eval(x, y)),
            Expr::Call(f, a) => {
                let v = a.eval(x, y);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                    Func::Log => v.ln(),
                    Func::Tanh => v.tanh(),
                    Func::Sinh => v.sinh(),
                    Func::Cosh => v.cosh(),
                    Func::Erf => v.erf(),
                    Func::Sqrt => v.sqrt(),
                    Func::I0 => (v * v).i0_sqrt(),
                }
            }
        }
    }

    pub fn value(&self, p: Vec2) -> f64 {
        self.eval(p.x, p.y)
    }
}

fn tokenize(src: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in src.char_indices() {
        let delim = ch == '(' || ch == ')' || ch.is_whitespace();
        if delim {
            if let Some(s) = start.take() {
                out.push((&src[s..i], s));
            }
            if !ch.is_whitespace() {
                out.push((&src[i..i + 1], i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((&src[s..], s));
    }
    out
}

fn parse_expr(tokens: &[(&str, usize)], pos: &mut usize) -> Result<Expr, ExprError> {
    let &(tok, at) = tokens.get(*pos).ok_or(ExprError::Eof)?;
    *pos += 1;
    match tok {
        "x" => return Ok(Expr::X),
        "y" => return Ok(Expr::Y),
        "(" => {}
        _ => {
            return tok.parse::<f64>().map(Expr::Num).map_err(|_| ExprError::Unexpected {
                token: tok.to_string(),
                pos: at,
            })
        }
    }
    let &(op, op_at) = tokens.get(*pos).ok_or(ExprError::Eof)?;
    *pos += 1;
    let mut args = Vec::new();
    loop {
        match tokens.get(*pos) {
            None => return Err(ExprError::Eof),
            Some(&(")", _)) => {
                *pos += 1;
                break;
            }
            Some(_) => args.push(parse_expr(tokens, pos)?),
        }
    }
    let arity = |want: usize, args: &Vec<Expr>| {
        if args.len() == want {
            Ok(())
        } else {
            Err(ExprError::Arity { op: op.to_string(), want, got: args.len() })
        }
    };
    let func = match op {
        "+" => return Ok(Expr::Add(args)),
        "*" => return Ok(Expr::Mul(args)),
        "pow" => {
            arity(2, &args)?;
            let n = match args[1] {
                Expr::Num(v) if v.fract() == 0.0 && v.abs() < 1e6 => v as i32,
                _ => return Err(ExprError::Exponent),
            };
            let base = args.swap_remove(0);
            return Ok(Expr::Pow(Box::new(base), n));
        }
        "atan2" => {
            arity(2, &args)?;
            let b = args.pop().unwrap_or(Expr::Num(0.0));
            let a = args.pop().unwrap_or(Expr::Num(0.0));
            return Ok(Expr::Atan2(Box::new(a), Box::new(b)));
        }
        "sin" => Func::Sin,
        "cos" => Func::Cos,
        "exp" => Func::Exp,
        "log" => Func::Log,
        "tanh" => Func::Tanh,
        "sinh" => Func::Sinh,
        "cosh" => Func::Cosh,
        "erf" => Func::Erf,
        "sqrt" => Func::Sqrt,
        "I0" => Func::I0,
        other => return Err(ExprError::Unexpected { token: other.to_string(), pos: op_at }),
    };
    arity(1, &args)?;
    Ok(Expr::Call(func, Box::new(args.remove(0))))
}

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn add(terms: &[String]) -> String {
    format!("(+ {})", terms.join(" "))
}

fn mul(terms: &[String]) -> String {
    format!("(* {})", terms.join(" "))
}

fn call(f: &str, arg: &str) -> String {
    format!("({f} {arg})")
}

fn pow(base: &str, n: i32) -> String {
    format!("(pow {base} {n})")
}

/// `(+ (* cx x) (* cy y) c0)`.
fn lin(cx: f64, cy: f64, c0: f64) -> String {
    add(&[mul(&[num(cx), "x".into()]), mul(&[num(cy), "y".into()]), num(c0)])
}

fn shifted(var: &str, c: f64) -> String {
    add(&[var.into(), num(-c)])
}

fn norm_sq(dx: &str, dy: &str) -> String {
    add(&[pow(dx, 2), pow(dy, 2)])
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// `Re(z^n)` or `Im(z^n)` expanded as a polynomial.
fn polar(n: u32, sine: bool) -> String {
    let mut terms = Vec::new();
    for k in (if sine { 1 } else { 0 }..=n).step_by(2) {
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let mut factors = vec![num(sign * binomial(n, k))];
        if n > k {
            factors.push(pow("x", (n - k) as i32));
        }
        if k > 0 {
            factors.push(pow("y", k as i32));
        }
        terms.push(mul(&factors));
    }
    add(&terms)
}

fn bump(b: &Bump) -> String {
    let dx = shifted("x", b.center.x);
    let dy = shifted("y", b.center.y);
    mul(&[num(b.a), call("exp", &mul(&[num(-b.w), norm_sq(&dx, &dy)]))])
}

fn wave_call(f: Wave, arg: &str) -> String {
    let name = match f {
        Wave::Sin => "sin",
        Wave::Cos => "cos",
        Wave::Tanh => "tanh",
    };
    call(name, arg)
}

pub(crate) fn form_expr(form: &Form) -> String {
    let x = || "x".to_string();
    let y = || "y".to_string();
    match form {
        Form::Poly { c } => {
            let monos = [
                vec![],
                vec![x()],
                vec![y()],
                vec![pow("x", 2)],
                vec![x(), y()],
                vec![pow("y", 2)],
                vec![pow("x", 3)],
                vec![pow("x", 2), y()],
                vec![x(), pow("y", 2)],
                vec![pow("y", 3)],
            ];
            let terms: Vec<String> = c
                .iter()
                .zip(monos)
                .map(|(ci, m)| {
                    let mut f = vec![num(*ci)];
                    f.extend(m);
                    mul(&f)
                })
                .collect();
            add(&terms)
        }
        Form::SinX { a, k } => mul(&[num(*a), call("sin", &mul(&[num(k * PI), x()]))]),
        Form::ExpX { a, b } => mul(&[num(*a), call("exp", &mul(&[num(*b), x()]))]),
        Form::LogX { a, shift } => mul(&[num(*a), call("log", &add(&[pow("x", 2), num(*shift)]))]),
        Form::HyperX { a, func } => {
            let name = match func {
                Hyper::Sinh => "sinh",
                Hyper::Cosh => "cosh",
                Hyper::Tanh => "tanh",
            };
            mul(&[num(*a), call(name, "x")])
        }
        Form::ErfX { a } => mul(&[num(*a), call("erf", "x")]),
        Form::SoftAbsX { a, eps } => mul(&[num(*a), call("sqrt", &add(&[pow("x", 2), num(*eps)]))]),
        Form::Polar { a, n, sine } => mul(&[num(*a), polar(*n, *sine)]),
        Form::PlaneWave { a, k, dir } => {
            mul(&[num(*a), call("cos", &mul(&[num(*k), lin(dir.cos(), dir.sin(), 0.0)]))])
        }
        Form::RadialI0 { a, mu } => mul(&[
            num(*a),
            call("I0", &mul(&[num(*mu), call("sqrt", &norm_sq("x", "y"))])),
        ]),
        Form::LogRadius { a, center } => {
            let d = norm_sq(&shifted("x", center.x), &shifted("y", center.y));
            mul(&[num(0.5 * a), call("log", &d)])
        }
        Form::Gaussian(b) => bump(b),
        Form::Rational { a, b, c } => mul(&[
            num(*a),
            pow(
                &add(&[num(1.0), mul(&[num(*b), pow("x", 2)]), mul(&[num(*c), pow("y", 2)])]),
                -1,
            ),
        ]),
        Form::Product { a, f1, k1, f2, k2 } => mul(&[
            num(*a),
            wave_call(*f1, &mul(&[num(*k1), x()])),
            wave_call(*f2, &mul(&[num(*k2), y()])),
        ]),
        Form::GaussianSum { terms } => add(&terms.iter().map(bump).collect::<Vec<_>>()),
        Form::SinCos { a, k1, k2 } => mul(&[
            num(*a),
            call("sin", &mul(&[num(k1 * PI), x()])),
            call("cos", &mul(&[num(k2 * PI), y()])),
        ]),
        Form::LogSumExp { a, b, c } => mul(&[
            num(*a),
            call(
                "log",
                &add(&[call("exp", &mul(&[num(*b), x()])), call("exp", &mul(&[num(*c), y()]))]),
            ),
        ]),
        Form::SechBump { a, b, c, center } => mul(&[
            num(*a),
            pow(&call("cosh", &mul(&[num(*b), shifted("x", center.x)])), -2),
            pow(&call("cosh", &mul(&[num(*c), shifted("y", center.y)])), -2),
        ]),
        Form::TanhRamp { a, k, dir, offset } => mul(&[
            num(*a),
            call("tanh", &mul(&[num(*k), lin(dir.cos(), dir.sin(), -offset)])),
        ]),
        Form::ExpTrig { a, k, sine } => mul(&[
            num(*a),
            call("exp", &mul(&[num(*k), x()])),
            call(if *sine { "sin" } else { "cos" }, &mul(&[num(*k), y()])),
        ]),
        Form::TrigHyp { a, k, sine, sinh, swap } => {
            let (s, t) = if *swap { ("y", "x") } else { ("x", "y") };
            mul(&[
                num(*a),
                call(if *sine { "sin" } else { "cos" }, &mul(&[num(*k), s.into()])),
                call(if *sinh { "sinh" } else { "cosh" }, &mul(&[num(*k), t.into()])),
            ])
        }
        Form::Linear { a, b } => add(&[mul(&[num(*a), x()]), mul(&[num(*b), y()])]),
        Form::Bilinear { a } => mul(&[num(*a), x(), y()]),
        Form::Angle { a, center } => {
            let (c, s) = angle_frame(*center);
            let dx = shifted("x", center.x);
            let dy = shifted("y", center.y);
            let vx = add(&[mul(&[num(c), dx.clone()]), mul(&[num(-s), dy.clone()])]);
            let vy = add(&[mul(&[num(s), dx]), mul(&[num(c), dy])]);
            mul(&[num(*a), format!("(atan2 {vy} {vx})")])
        }
        Form::Inversion { a, center } => {
            let dx = shifted("x", center.x);
            let dy = shifted("y", center.y);
            mul(&[num(*a), dx.clone(), pow(&norm_sq(&dx, &dy), -1)])
        }
        Form::Dipole { a, center } => {
            let dx = shifted("x", center.x);
            let dy = shifted("y", center.y);
            let num_part = add(&[pow(&dx, 2), mul(&[num(-1.0), pow(&dy, 2)])]);
            mul(&[num(*a), num_part, pow(&norm_sq(&dx, &dy), -2)])
        }
        Form::Quadratic { a, angle, mixed } => {
            let (s, c) = angle.sin_cos();
            let u = lin(c, s, 0.0);
            let v = lin(-s, c, 0.0);
            if *mixed {
                mul(&[num(2.0 * a), u, v])
            } else {
                mul(&[num(*a), add(&[pow(&u, 2), mul(&[num(-1.0), pow(&v, 2)])])])
            }
        }
    }
}

pub(crate) fn solution_expr(s: &Solution) -> String {
    let mut out = String::from("(+");
    for a in &s.atoms {
        let _ = write!(out, " {}", form_expr(&a.form));
    }
    out.push(')');
    out
}
