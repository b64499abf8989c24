//! Acceptance criteria AC1-AC9. Each criterion prints one PASS/FAIL line with
//! its measured errors and runtime; the test fails if any criterion does.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::SQRT_2;
use std::io::Write;
use std::time::{Duration, Instant};

use moreau::gauge::{l1_branch, max_branch, pasch_hausdorff, smooth_l1, smooth_max, Point, RegionLabel};
use moreau::oracle::{envelope_oracle_2d, prox_oracle_1d, OracleSettings};
use moreau::prox::affine_tilt;
use moreau::sample::{centre_range, random_affine, random_convex, Generator};
use moreau::{CubicPiece, Gauge2D, MoreauEnvelope, PiecewiseCubic, ProxConfig, SmoothedGauge};
use moreau_cli::args::{Format, GridSpec, Span};
use moreau_cli::commands::{gauge_document, linspace, plot_document, GaugeMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Id, title, runtime budget and check.
type Criterion = (&'static str, &'static str, Option<Duration>, fn() -> Outcome);

fn cfg(r: f64) -> ProxConfig {
    ProxConfig::new(r).unwrap()
}

fn oracle(f: &PiecewiseCubic, r: f64, x: f64) -> (f64, f64) {
    prox_oracle_1d(f, cfg(r), x, &OracleSettings::exhaustive()).unwrap()
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    linspace(lo, hi, n)
}

/// Collects the worst value of a named error and the violations seen.
#[derive(Default)]
struct Tally {
    worst: Vec<(&'static str, f64)>,
    failures: Vec<String>,
}

impl Tally {
    fn record(&mut self, name: &'static str, err: f64) {
        match self.worst.iter_mut().find(|w| w.0 == name) {
            Some(w) => w.1 = w.1.max(err),
            None => self.worst.push((name, err)),
        }
    }

    /// Record `err` and flag it when it exceeds `limit`.
    fn check(&mut self, name: &'static str, err: f64, limit: f64, context: impl FnOnce() -> String) {
        self.record(name, err);
        if !(err <= limit) && self.failures.len() < 5 {
            self.failures.push(format!("{name} {err:.3e} > {limit:.0e} ({})", context()));
        }
    }

    fn flag(&mut self, ok: bool, context: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(context());
        }
    }

    fn finish(self) -> Outcome {
        let summary = self
            .worst
            .iter()
            .map(|(n, e)| format!("{n}={e:.2e}"))
            .collect::<Vec<_>>()
            .join(" ");
        if self.failures.is_empty() {
            Ok(summary)
        } else {
            Err(format!("{summary}; {}", self.failures.join("; ")))
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + b.abs())
}

// ---------- AC1: worked examples against transcribed formulas ----------

fn pieces(spec: &[(f64, f64, f64, f64)], bps: &[f64], bounds: Option<(f64, f64)>) -> PiecewiseCubic {
    let p = spec.iter().map(|&(a, b, c, d)| CubicPiece::new(a, b, c, d)).collect();
    PiecewiseCubic::new(p, bps.to_vec(), bounds).unwrap()
}

/// Prox and envelope of the three-piece example, as printed.
fn three_piece_formula(r: f64, x: f64) -> (f64, f64) {
    if x < -1.0 - 5.0 / r {
        (x + 5.0 / r, -5.0 * x - 25.0 / (2.0 * r) - 2.0)
    } else if x <= -1.0 - 4.0 / r {
        (-1.0, r / 2.0 * (x + 1.0).powi(2) + 3.0)
    } else if x < -2.0 / r {
        ((r * x + 2.0) / (r + 2.0), r / (r + 2.0) * (x - 1.0).powi(2) - 1.0)
    } else if x <= 0.0 {
        (0.0, r / 2.0 * x * x)
    } else {
        let s = (r * r + 12.0 * r * x).sqrt();
        ((-r + s) / 6.0, (r.powi(3) - r * (r + 12.0 * x) * s + 18.0 * r * r * x + 54.0 * r * x * x) / 108.0)
    }
}

fn square_cube_formula(r: f64, x: f64) -> (f64, f64) {
    if x <= 0.0 {
        (r * x / (r + 2.0), r * x * x / (r + 2.0))
    } else {
        let p = (-r + (r * r + 12.0 * r * x).sqrt()) / 6.0;
        (p, p.powi(3) + r / 2.0 * (p - x).powi(2))
    }
}

fn abs_cube_formula(r: f64, x: f64) -> (f64, f64) {
    if x < 0.0 {
        let s = (r * r - 12.0 * r * x).sqrt();
        ((r - s) / 6.0, ((-r + s) / 6.0).powi(3) + r / 2.0 * ((r - s) / 6.0 - x).powi(2))
    } else {
        let s = (r * r + 12.0 * r * x).sqrt();
        ((-r + s) / 6.0, ((-r + s) / 6.0).powi(3) + r / 2.0 * ((-r + s) / 6.0 - x).powi(2))
    }
}

/// `|x|^3 + a x`.
fn tilted_cube_formula(a: f64, r: f64, x: f64) -> (f64, f64) {
    let tail = a * x - a * a / (2.0 * r);
    if x < a / r {
        let s = (r * r - 12.0 * (r * x - a)).sqrt();
        let e = ((-r + s) / 6.0).powi(3) + r / 2.0 * ((-r + s) / 6.0 + x - a / r).powi(2) + tail;
        ((r - s) / 6.0, e)
    } else {
        let s = (r * r + 12.0 * (x * r - a)).sqrt();
        let e = ((-r + s) / 6.0).powi(3) + r / 2.0 * ((-r + s) / 6.0 - x + a / r).powi(2) + tail;
        ((-r + s) / 6.0, e)
    }
}

/// `x` on `[-1, 2]`.
fn bounded_identity_formula(r: f64, x: f64) -> (f64, f64) {
    if x <= -1.0 + 1.0 / r {
        (-1.0, -1.0 + r / 2.0 * (-1.0 - x).powi(2))
    } else if x <= 2.0 + 1.0 / r {
        (x - 1.0 / r, x - 1.0 / (2.0 * r))
    } else {
        (2.0, 2.0 + r / 2.0 * (2.0 - x).powi(2))
    }
}

/// Five centres in each cell of the envelope partition.
fn centres_per_cell(env: &MoreauEnvelope) -> Vec<f64> {
    let mut xs = Vec::new();
    for c in env.partition().cells() {
        match (c.lo.is_finite(), c.hi.is_finite()) {
            (false, true) => xs.extend([5.0, 3.0, 1.0, 0.5, 0.1].map(|d| c.hi - d)),
            (true, false) => xs.extend([0.1, 0.5, 1.0, 2.0, 5.0].map(|d| c.lo + d)),
            (true, true) => xs.extend([0.0, 0.25, 0.5, 0.75, 1.0].map(|t| c.lo + t * (c.hi - c.lo))),
            (false, false) => xs.extend([-4.0, -1.5, 0.0, 1.5, 4.0]),
        }
    }
    xs
}

fn ac1() -> Outcome {
    let mut t = Tally::default();
    let three = pieces(&[(0.0, 0.0, -5.0, -2.0), (0.0, 1.0, -2.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[-1.0, 0.0], None);
    let square_cube = pieces(&[(0.0, 1.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[0.0], None);
    let abs_cube = pieces(&[(-1.0, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[0.0], None);
    let identity = pieces(&[(0.0, 0.0, 1.0, 0.0)], &[], Some((-1.0, 2.0)));

    type Formula = Box<dyn Fn(f64, f64) -> (f64, f64)>;
    let mut cases: Vec<(String, PiecewiseCubic, Formula)> = vec![
        ("three-piece".into(), three.clone(), Box::new(three_piece_formula)),
        ("x^2/x^3".into(), square_cube, Box::new(square_cube_formula)),
        ("|x|^3".into(), abs_cube.clone(), Box::new(abs_cube_formula)),
        ("x on [-1,2]".into(), identity, Box::new(bounded_identity_formula)),
    ];
    for a in [-2.0, 1.0] {
        cases.push((format!("|x|^3{a:+}x"), affine_tilt(&abs_cube, -a), Box::new(move |r, x| tilted_cube_formula(a, r, x))));
    }

    let mut centres = 0;
    for (name, f, formula) in &cases {
        for r in [1.0, 0.5, 3.0] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let xs = centres_per_cell(&env);
            if name == "three-piece" && r == 1.0 {
                t.flag(xs.len() == 25, || format!("three-piece gave {} centres", xs.len()));
            }
            for x in xs {
                centres += 1;
                let res = env.prox(x);
                let (p, e) = formula(r, x);
                let ctx = || format!("{name}, r={r}, x={x}");
                t.check("formula_prox", rel(res.prox, p), 1e-12, ctx);
                t.check("formula_env", rel(res.envelope, e), 1e-12, ctx);
                let (po, eo) = oracle(f, r, x);
                t.check("oracle_prox", (res.prox - po).abs(), 1e-8, ctx);
                t.check("oracle_env", rel(res.envelope, eo), 1e-8, ctx);
            }
        }
    }

    // tilt identity against the untilted closed form
    for a in [-2.0, 1.0] {
        let g = affine_tilt(&abs_cube, -a);
        for r in [0.5, 1.0, 3.0] {
            let (eg, ef) = (MoreauEnvelope::new(g.clone(), cfg(r)), MoreauEnvelope::new(abs_cube.clone(), cfg(r)));
            for x in grid(-6.0, 6.0, 49) {
                let rhs = ef.value(x - a / r) + a * x - a * a / (2.0 * r);
                t.check("tilt_identity", rel(eg.value(x), rhs), 1e-10, || format!("a={a}, r={r}, x={x}"));
            }
        }
    }

    // the three-piece cells at r = 1 are exactly the printed ones
    let bounds = MoreauEnvelope::new(three, cfg(1.0)).partition().boundaries();
    t.flag(bounds == [-6.0, -5.0, -2.0, 0.0], || format!("three-piece boundaries {bounds:?}"));
    t.finish().map(|s| format!("{centres} centres; {s}"))
}

// ---------- AC2: randomized oracle equivalence ----------

fn ac2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gen = Generator::default();
    let mut t = Tally::default();
    for k in 0..500 {
        let f = random_convex(&mut rng, &gen);
        for r in [0.1, 1.0, 10.0] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let (lo, hi) = centre_range(env.partition());
            for _ in 0..50 {
                let x = rng.gen_range(lo..=hi);
                let res = env.prox(x);
                let (p, e) = oracle(&f, r, x);
                t.check("max_prox_error", (res.prox - p).abs(), 1e-7, || format!("function {k}, r={r}, x={x}"));
                t.check("max_env_rel_error", rel(res.envelope, e), 1e-9, || format!("function {k}, r={r}, x={x}"));
            }
        }
    }
    t.finish().map(|s| format!("500 functions x 3 r x 50 centres; {s}"))
}

// ---------- AC3: envelope properties ----------

fn infimum(f: &PiecewiseCubic) -> Option<f64> {
    let (lo, hi) = f.bounds();
    let (mut a, mut b) = (lo.max(-1e3), hi.min(1e3));
    if f.subgradient(a).unwrap().hi >= 0.0 {
        return lo.is_finite().then(|| f.eval(a).unwrap());
    }
    if f.subgradient(b).unwrap().lo <= 0.0 {
        return hi.is_finite().then(|| f.eval(b).unwrap());
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let g = f.subgradient(m).unwrap();
        if g.contains(0.0) {
            return Some(f.eval(m).unwrap());
        }
        if g.hi < 0.0 {
            a = m
        } else {
            b = m
        }
    }
    Some(f.eval(a).unwrap().min(f.eval(b).unwrap()))
}

/// An even function: a random right half glued to its reflection.
fn random_even(rng: &mut ChaCha8Rng) -> PiecewiseCubic {
    let base = random_convex(rng, &Generator { bounded: 0.0, ..Generator::default() });
    let shift = base.breakpoints().first().copied().unwrap_or(0.0);
    let skip = usize::from(!base.breakpoints().is_empty());
    let mut right: Vec<CubicPiece> = base.pieces()[skip..]
        .iter()
        .map(|p| CubicPiece::new(p.a, 3.0 * p.a * shift + p.b, 3.0 * p.a * shift * shift + 2.0 * p.b * shift + p.c, p.value(shift)))
        .collect();
    let k = (-right[0].c).max(0.0);
    for p in &mut right {
        p.c += k;
    }
    let bps: Vec<f64> = base.breakpoints().iter().skip(1).map(|b| b - shift).collect();
    let mut all: Vec<CubicPiece> = right.iter().rev().map(CubicPiece::mirrored).collect();
    all.extend(right.iter().copied());
    let mut all_bps: Vec<f64> = bps.iter().rev().map(|b| -b).collect();
    all_bps.push(0.0);
    all_bps.extend(bps);
    PiecewiseCubic::new(all, all_bps, None).unwrap()
}

fn ac3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gen = Generator::default();
    let mut t = Tally::default();
    let mut checks = 0usize;
    for k in 0..100 {
        let f = random_convex(&mut rng, &gen);
        let inf = infimum(&f);
        let (dlo, dhi) = f.bounds();
        for r in [0.1, 1.0, 10.0] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let (lo, hi) = centre_range(env.partition());
            let mut xs: Vec<f64> = (0..60).map(|_| rng.gen_range(lo..=hi)).collect();
            xs.sort_by(f64::total_cmp);
            let boundaries = env.partition().boundaries();
            for (i, &x) in xs.iter().enumerate() {
                let res = env.prox(x);
                let ctx = || format!("function {k}, r={r}, x={x}");
                // sandwich
                if (dlo..=dhi).contains(&x) {
                    let fx = f.eval(x).unwrap();
                    t.flag(res.envelope <= fx + 1e-9 * (1.0 + fx.abs()), || format!("e > f: {}", ctx()));
                    checks += 1;
                }
                if let Some(m) = inf {
                    t.flag(res.envelope >= m - 1e-9 * (1.0 + m.abs()), || format!("e < inf f: {}", ctx()));
                    checks += 1;
                }
                // optimality certificate
                let g = f.subgradient(res.prox).unwrap().shift(r * (res.prox - x));
                let slack = 1e-8 * (1.0 + (r * x).abs() + res.gradient.abs());
                t.flag(g.lo - slack <= 0.0 && 0.0 <= g.hi + slack, || format!("certificate {g:?}: {}", ctx()));
                // finite differences away from cell boundaries
                if boundaries.iter().all(|b| (b - x).abs() >= 1e-3) {
                    let h = 1e-6;
                    let fd = (env.value(x + h) - env.value(x - h)) / (2.0 * h);
                    let noise = 4.0 * f64::EPSILON * res.envelope.abs() / h;
                    let err = (res.gradient - fd).abs() / (1.0 + res.gradient.abs());
                    t.record("fd_gradient_rel", err);
                    t.flag(err <= 1e-5 + noise, || format!("fd gradient {} vs {fd}: {}", res.gradient, ctx()));
                }
                // monotone, nonexpansive, r-Lipschitz gradient
                if let Some(&y) = xs.get(i + 1) {
                    let other = env.prox(y);
                    let tol = 1e-12 * (1.0 + res.prox.abs());
                    t.flag(res.prox <= other.prox + tol, || format!("prox not monotone: {}", ctx()));
                    t.flag((other.prox - res.prox).abs() <= (y - x) + tol, || format!("prox expansive: {}", ctx()));
                    let dg = (other.gradient - res.gradient).abs();
                    t.flag(dg <= r * (y - x) + 1e-9 * (1.0 + res.gradient.abs()), || format!("gradient not r-Lipschitz: {}", ctx()));
                }
                checks += 5;
            }
        }
    }
    for k in 0..50 {
        let f = random_even(&mut rng);
        for r in [0.1, 1.0, 10.0] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let (lo, hi) = centre_range(env.partition());
            for _ in 0..30 {
                let x = rng.gen_range(lo..=hi);
                let (a, b) = (env.value(x), env.value(-x));
                t.check("evenness", rel(a, b), 1e-12, || format!("even function {k}, r={r}, x={x}"));
                checks += 1;
            }
        }
    }
    t.finish().map(|s| format!("{checks} checks, 0 violations; {s}"))
}

// ---------- AC4: affine gap ----------

fn ac4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut t = Tally::default();
    for k in 0..20 {
        let f = random_affine(&mut rng);
        let a = f.pieces()[0].c;
        let r = [0.1, 1.0, 10.0][k % 3];
        let env = MoreauEnvelope::new(f.clone(), cfg(r));
        for x in grid(-10.0, 10.0, 100) {
            let gap = f.eval(x).unwrap() - env.value(x);
            t.check("affine_gap_error", (gap - a * a / (2.0 * r)).abs(), 1e-12, || format!("a={a}, r={r}, x={x}"));
        }
    }
    let gen = Generator::default();
    let mut least_spread = f64::INFINITY;
    let mut found = 0;
    while found < 20 {
        let f = random_convex(&mut rng, &gen);
        if f.is_affine() {
            continue;
        }
        found += 1;
        let r = [0.1, 1.0, 10.0][found % 3];
        let env = MoreauEnvelope::new(f.clone(), cfg(r));
        let (lo, hi) = f.bounds();
        let gaps: Vec<f64> = grid(lo.max(-10.0), hi.min(10.0), 201)
            .into_iter()
            .map(|x| f.eval(x).unwrap() - env.value(x))
            .collect();
        let spread = gaps.iter().copied().fold(f64::NEG_INFINITY, f64::max) - gaps.iter().copied().fold(f64::INFINITY, f64::min);
        least_spread = least_spread.min(spread);
        t.flag(spread > 1e-6, || format!("non-affine gap spread {spread:.3e} at r={r}"));
    }
    t.finish().map(|s| format!("{s} min_non_affine_spread={least_spread:.2e}"))
}

// ---------- AC5: Lipschitz gap bound ----------

fn ac5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let gen = Generator { linear: true, ..Generator::default() };
    let mut t = Tally::default();
    let mut affine = 0;
    for k in 0..50 {
        let f = random_convex(&mut rng, &gen);
        let l = f.lipschitz_constant().unwrap();
        let (lo, hi) = f.bounds();
        for r in [0.1, 1.0, 10.0] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let bound = l * l / (2.0 * r);
            let mut largest = f64::NEG_INFINITY;
            for x in grid(lo.max(-10.0), hi.min(10.0), 200) {
                let gap = f.eval(x).unwrap() - env.value(x);
                largest = largest.max(gap);
                t.flag(gap >= 0.0 && gap <= bound + 1e-12, || format!("function {k}, r={r}, x={x}: gap {gap} vs L^2/2r {bound}"));
            }
            if f.is_affine() {
                t.check("affine_attainment", (largest - bound).abs(), 1e-9, || format!("function {k}, r={r}"));
            }
        }
        affine += usize::from(f.is_affine());
    }
    t.flag(affine > 0, || "no affine members drawn".into());
    t.finish().map(|s| format!("50 functions ({affine} affine); {s}"))
}

// ---------- AC6: convergence in r ----------

fn goldens() -> Vec<(&'static str, PiecewiseCubic)> {
    let abs_cube = pieces(&[(-1.0, 0.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[0.0], None);
    vec![
        ("three-piece", pieces(&[(0.0, 0.0, -5.0, -2.0), (0.0, 1.0, -2.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[-1.0, 0.0], None)),
        ("x^2/x^3", pieces(&[(0.0, 1.0, 0.0, 0.0), (1.0, 0.0, 0.0, 0.0)], &[0.0], None)),
        ("|x|^3-2x", affine_tilt(&abs_cube, 2.0)),
        ("|x|^3+x", affine_tilt(&abs_cube, -1.0)),
        ("|x|^3", abs_cube),
        ("x on [-1,2]", pieces(&[(0.0, 0.0, 1.0, 0.0)], &[], Some((-1.0, 2.0)))),
    ]
}

fn ac6() -> Outcome {
    let mut t = Tally::default();
    for (name, f) in goldens() {
        let (lo, hi) = f.bounds();
        let xs = grid(lo.max(-3.0), hi.min(3.0), 301);
        let mut last = f64::INFINITY;
        for r in [1.0, 10.0, 1e2, 1e3, 1e4] {
            let env = MoreauEnvelope::new(f.clone(), cfg(r));
            let worst = xs
                .iter()
                .map(|&x| {
                    let fx = f.eval(x).unwrap();
                    (fx - env.value(x)).abs() / (1.0 + fx.abs())
                })
                .fold(0.0, f64::max);
            t.flag(worst <= last, || format!("{name}: gap rose to {worst:.3e} at r={r}"));
            last = worst;
        }
        t.check("rel_gap_at_r=1e4", last, 1e-2, || name.to_string());
    }
    t.finish()
}

// ---------- AC7: gauge smoothing ----------

fn h(g: &Gauge2D, r: f64, p: Point) -> f64 {
    SmoothedGauge::new(g.clone(), r).unwrap().value(p).unwrap()
}

fn ac7() -> Outcome {
    let mut t = Tally::default();
    let s = OracleSettings::default();
    let axis = grid(-3.0, 3.0, 41);
    for r in [0.5, 1.0, 5.0] {
        for &x in &axis {
            for &y in &axis {
                let m = envelope_oracle_2d(|u, v| u.abs().max(v.abs()).powi(2), cfg(r), (x, y), &s).unwrap();
                t.check("max_vs_oracle", (smooth_max(r, (x, y)).0 - m.value.sqrt()).abs(), 1e-6, || format!("r={r}, ({x}, {y})"));
                let l = envelope_oracle_2d(|u, v| (u.abs() + v.abs()).powi(2), cfg(r), (x, y), &s).unwrap();
                t.check("l1_vs_oracle", (smooth_l1(r, (x, y)).0 - l.value.sqrt()).abs(), 1e-6, || format!("r={r}, ({x}, {y})"));
            }
        }
    }

    use RegionLabel::*;
    for r in [0.1, 0.5, 1.0, 5.0, 50.0] {
        let km = r / (r + 2.0);
        let kl = 2.0 / (r + 2.0);
        let max_lines = [(R1, R3, km, false), (R1, R4, -km, false), (R2, R3, km, true), (R2, R4, -km, true)];
        let l1_lines = [(R1, R3, kl, false), (R1, R4, kl, true), (R2, R3, -kl, false), (R2, R4, -kl, true)];
        for (branch, lines) in [(max_branch as fn(RegionLabel, f64, Point) -> (f64, Point), max_lines), (l1_branch, l1_lines)] {
            for (a, b, k, swap) in lines {
                for t_ in grid(-4.0, 4.0, 20) {
                    let p = if swap { (k * t_, t_) } else { (t_, k * t_) };
                    let (ga, pa) = branch(a, r, p);
                    let (gb, pb) = branch(b, r, p);
                    let err = rel(ga, gb).max(rel(pa.0, pb.0)).max(rel(pa.1, pb.1));
                    t.check("boundary_agreement", err, 1e-10, || format!("{a}/{b}, r={r}, {p:?}"));
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let gauges = [Gauge2D::MaxNorm, Gauge2D::L1Norm, Gauge2D::scaled_euclidean(1.5).unwrap()];
    for g in &gauges {
        for r in [0.1, 1.0, 10.0] {
            t.flag(h(g, r, (0.0, 0.0)) == 0.0, || format!("{g:?}: h_r(0) != 0"));
            for _ in 0..1000 {
                let p = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
                let q = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
                let (hp, hq) = (h(g, r, p), h(g, r, q));
                for alpha in [0.25, 0.5, 2.0, 4.0] {
                    let err = (h(g, r, (alpha * p.0, alpha * p.1)) - alpha * hp).abs() / (alpha * hp);
                    t.check("homogeneity", err, 1e-9, || format!("{g:?}, r={r}, {p:?}"));
                }
                let mid = h(g, r, (0.5 * (p.0 + q.0), 0.5 * (p.1 + q.1)));
                t.flag(mid <= 0.5 * (hp + hq) + 1e-12 * (1.0 + hp + hq), || format!("{g:?} not midpoint convex"));
                t.check("symmetry", (h(g, r, (-p.0, -p.1)) - hp).abs(), 1e-12 * (1.0 + hp), || format!("{g:?}, {p:?}"));
                let sum = h(g, r, (p.0 + q.0, p.1 + q.1));
                t.flag(sum <= hp + hq + 1e-12 * (1.0 + hp + hq), || format!("{g:?} triangle inequality"));
                t.flag(hp >= 0.0, || format!("{g:?} negative"));
            }
            let least = grid(0.0, std::f64::consts::TAU, 3601)
                .into_iter()
                .map(|th| h(g, r, (th.cos(), th.sin())))
                .fold(f64::INFINITY, f64::min);
            t.flag(least > 1e-8, || format!("{g:?} has a kernel direction at r={r}"));
        }
    }

    for g in [Gauge2D::MaxNorm, Gauge2D::L1Norm] {
        for &x in &axis {
            for &y in &axis {
                let f = g.eval(x, y);
                t.check("limit_r=1e4", (h(&g, 1e4, (x, y)) - f).abs() / (1.0 + f), 1e-3, || format!("{g:?} ({x}, {y})"));
                t.check("h_at_r=1e-4", h(&g, 1e-4, (x, y)), 1e-1, || format!("{g:?} ({x}, {y})"));
            }
        }
    }
    t.finish()
}

// ---------- AC8: Pasch-Hausdorff ----------

fn ac8() -> Outcome {
    let mut t = Tally::default();
    let s = OracleSettings::default();
    let l1 = Gauge2D::L1Norm;
    let axis = grid(-3.0, 3.0, 21);
    for &x in &axis {
        for &y in &axis {
            let v = pasch_hausdorff(&l1, SQRT_2, (x, y), &s).unwrap();
            t.check("ph_vs_l1", (v - x.abs() - y.abs()).abs(), 1e-6, || format!("({x}, {y})"));
        }
    }
    let d = 1e-5;
    let ph = |x: f64| pasch_hausdorff(&l1, SQRT_2, (x, 1.0), &s).unwrap();
    let hr = |x: f64| smooth_l1(SQRT_2, (x, 1.0)).0;
    let gap_ph = (ph(d) - ph(0.0)) / d - (ph(0.0) - ph(-d)) / d;
    let gap_h = ((hr(d) - hr(0.0)) / d - (hr(0.0) - hr(-d)) / d).abs();
    t.flag(gap_ph >= 1.9, || format!("Pasch-Hausdorff derivative gap {gap_ph} < 1.9"));
    t.check("h_r_derivative_gap", gap_h, 1e-4, String::new);
    t.finish().map(|s| format!("{s} ph_derivative_gap={gap_ph:.6}"))
}

// ---------- AC9: plot data ----------

fn csv_rows(doc: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = doc.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse::<f64>().unwrap_or(f64::NAN)).collect())
        .collect();
    (header, rows)
}

/// Point lists of every `<polyline>`/`<polygon>` in an SVG document.
fn svg_series(doc: &str) -> Vec<Vec<(f64, f64)>> {
    doc.split("points=\"")
        .skip(1)
        .map(|chunk| {
            chunk[..chunk.find('"').unwrap()]
                .split(' ')
                .map(|pair| {
                    let (x, y) = pair.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect()
        })
        .collect()
}

fn ac9() -> Outcome {
    let mut t = Tally::default();
    let three = goldens().remove(0).1;
    let rs = [1.0, 5.0, 20.0];
    let span = Span { lo: -4.0, hi: 3.0 };
    let samples = 281;
    let csv = plot_document(&three, &rs, span, samples, Format::Csv).unwrap();
    let (header, rows) = csv_rows(&csv);
    t.flag(header == ["x", "f", "e_rf(r=1)", "e_rf(r=5)", "e_rf(r=20)"], || format!("plot header {header:?}"));
    t.flag(rows.len() == samples, || format!("{} plot rows", rows.len()));
    let envs: Vec<MoreauEnvelope> = rs.iter().map(|&r| MoreauEnvelope::new(three.clone(), cfg(r))).collect();
    let mut mismatches = 0;
    for row in &rows {
        let x = row[0];
        mismatches += usize::from(row[1] != three.eval(x).unwrap());
        for (k, env) in envs.iter().enumerate() {
            mismatches += usize::from(row[2 + k] != env.value(x));
        }
    }
    let svg = plot_document(&three, &rs, span, samples, Format::Svg).unwrap();
    let series = svg_series(&svg);
    t.flag(series.len() == 4 && series.iter().all(|s| s.len() == samples), || "plot svg polylines".into());
    for (k, s) in series.iter().enumerate() {
        for (i, &(x, y)) in s.iter().enumerate() {
            mismatches += usize::from(x != rows[i][0] || y != rows[i][1 + k]);
        }
    }
    t.flag(!svg.contains("href") && svg.contains("class=\"legend\""), || "svg not self-contained".into());

    let l1 = Gauge2D::L1Norm;
    let radii = [0.1, 0.5, 1.0, 5.0, 100.0];
    let n = 360;
    let circle = gauge_document(&l1, &radii, GaugeMode::Circle(n), Format::Csv).unwrap();
    let (header, rows) = csv_rows(&circle);
    t.flag(header.len() == 1 + 2 * radii.len() && header[1] == "x(r=0.1)", || format!("circle header {header:?}"));
    t.flag(rows.len() == n, || format!("{} circle rows", rows.len()));
    let circle_svg = gauge_document(&l1, &radii, GaugeMode::Circle(n), Format::Svg).unwrap();
    let rings = svg_series(&circle_svg);
    t.flag(rings.len() == radii.len(), || format!("{} circle polygons", rings.len()));
    for (k, &r) in radii.iter().enumerate() {
        let pts = SmoothedGauge::new(l1.clone(), r).unwrap().unit_circle(n).unwrap();
        for (i, p) in pts.iter().enumerate() {
            mismatches += usize::from(rows[i][1 + 2 * k] != p.0 || rows[i][2 + 2 * k] != p.1);
            mismatches += usize::from(rings[k][i] != *p);
        }
    }

    for (g, branch) in [(Gauge2D::MaxNorm, smooth_max as fn(f64, Point) -> (f64, Point)), (Gauge2D::L1Norm, smooth_l1)] {
        let spec = GridSpec { span: Span { lo: -2.0, hi: 2.0 }, n: 41 };
        let doc = gauge_document(&g, &[1.0], GaugeMode::Grid(spec), Format::Csv).unwrap();
        let (header, rows) = csv_rows(&doc);
        t.flag(header == ["x", "y", "f", "h_r", "prox_x", "prox_y", "region"], || format!("grid header {header:?}"));
        t.flag(rows.len() == 41 * 41, || format!("{} grid rows", rows.len()));
        for row in &rows {
            let (hv, prox) = branch(1.0, (row[0], row[1]));
            mismatches += usize::from(row[3] != hv || row[4] != prox.0 || row[5] != prox.1 || row[2] != g.eval(row[0], row[1]));
        }
        let origin = doc.lines().find(|l| l.starts_with("0.0000000000000000e0,0.0000000000000000e0,")).unwrap_or("");
        t.flag(origin.split(',').nth(3) == Some("0.0000000000000000e0"), || "grid origin row".into());
    }
    t.flag(mismatches == 0, || format!("{mismatches} values differ from library evaluations"));
    t.finish().map(|_| "plot r={1,5,20} csv+svg, l1 circles r={0.1,0.5,1,5,100} csv+svg, max/l1 grids: bit-exact".into())
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 9] = [
        ("AC1", "worked examples vs printed formulas (1e-12) and oracle (1e-8)", Some(Duration::from_secs(1)), ac1),
        ("AC2", "randomized oracle equivalence (prox 1e-7, envelope 1e-9 rel)", Some(Duration::from_secs(30)), ac2),
        ("AC3", "envelope property suite", Some(Duration::from_secs(10)), ac3),
        ("AC4", "affine gap a^2/(2r) to 1e-12, non-affine spread > 1e-6", None, ac4),
        ("AC5", "Lipschitz gap bound L^2/(2r), attained (1e-9) for affine", None, ac5),
        ("AC6", "convergence sweep r = 1..1e4", None, ac6),
        ("AC7", "gauge smoothing suite", Some(Duration::from_secs(60)), ac7),
        ("AC8", "Pasch-Hausdorff counterexample", None, ac8),
        ("AC9", "plot data reproduction", None, ac9),
    ];
    let mut failed = Vec::new();
    let mut stderr = std::io::stderr();
    let _ = writeln!(stderr);
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let late = limit.is_some_and(|l| elapsed > l);
        let budget = limit.map_or(String::new(), |l| format!(" < {}s", l.as_secs()));
        let (status, detail) = match (&outcome, late) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("too slow; {d}")),
            (Err(d), _) => ("FAIL", d.clone()),
        };
        // bypass the test harness's capture so the lines always show
        let _ = writeln!(stderr, "{id} {status} [{:.2}s{budget}] {title}: {detail}", elapsed.as_secs_f64());
        if status == "FAIL" {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
