//! Oracle-backed invariant suites behind the `verify` command.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_rational::Rational64;

use crate::continuation::{validate_params, Continuator, Method, RawParams};
use crate::convergence::{median, rate_window, run_projection_rate_study, run_study, TestFunction, DEFAULT_N_EVAL};
use crate::double_double::DoubleDouble;
use crate::error::{domain, FcError, Result};
use crate::gram_basis::GramBasis;
use crate::hermite_extension::HermiteBasis;
use crate::oracle::{exact_gram_unnormalized, hermite_solve_direct, kernel_interp, naive_dft, normalized_f64};
use crate::polynomial::Polynomial;
use crate::trig_interp::{kernel_l, TrigInterpolant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Fast,
    Full,
}

impl FromStr for Level {
    type Err = FcError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Level::Fast),
            "full" => Ok(Level::Full),
            other => domain(format!("unknown verify level `{other}` (expected fast or full)")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerifyOptions {
    /// Adds this offset to one stored Gram coefficient before checking.
    /// Used to confirm that the suite notices corrupted data.
    pub gram_tamper: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: String,
    pub error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn bound(name: impl Into<String>, error: f64, tolerance: f64) -> Self {
        Self { name: name.into(), error, tolerance, passed: error <= tolerance }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {:<44} err {:.3e}  tol {:.1e}", self.name, self.error, self.tolerance)
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub level: Level,
    pub checks: Vec<Check>,
    pub seconds: f64,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failures().count();
        write!(
            f,
            "{} checks, {} failed, {:.2} s",
            self.checks.len(),
            failed,
            self.seconds
        )
    }
}

fn max_abs(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, |a, b| if b.is_nan() { f64::INFINITY } else { a.max(b.abs()) })
}

fn gram_bases(options: &VerifyOptions) -> Result<Vec<GramBasis<f64>>> {
    (2..=7)
        .map(|d| {
            let mut basis = GramBasis::<f64>::new(d)?;
            if let Some(delta) = options.gram_tamper {
                basis.perturb(d - 1, 0, delta);
            }
            Ok(basis)
        })
        .collect()
}

fn gram_orthonormality(bases: &[GramBasis<f64>]) -> Check {
    let mut err = 0.0f64;
    for basis in bases {
        let d = basis.d();
        let p = basis.scaled_left();
        for a in 0..d {
            for b in 0..d {
                let dot: f64 = (0..d).map(|u| p[a].eval(u as f64) * p[b].eval(u as f64)).sum();
                err = err.max((dot - if a == b { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    Check::bound("gram orthonormality d<=7", err, 1e-11)
}

fn gram_exact(bases: &[GramBasis<f64>]) -> Result<Check> {
    let mut err = 0.0f64;
    for basis in bases {
        let d = basis.d();
        let exact = exact_gram_unnormalized(d)?;
        for (l, q) in exact.iter().enumerate() {
            let reference = normalized_f64(q, d);
            let ours = &basis.scaled_left()[l];
            // compare on a grid spanning the node range, relative to the size
            let pts: Vec<f64> = (0..=40).map(|k| (d - 1) as f64 * k as f64 / 40.0).collect();
            let scale = max_abs(pts.iter().map(|&u| reference.eval(u))).max(1.0);
            err = err.max(max_abs(pts.iter().map(|&u| ours.eval(u) - reference.eval(u))) / scale);
        }
    }
    Ok(Check::bound("gram vs exact rational Gram-Schmidt d<=7", err, 1e-10))
}

fn coefficient_gap(a: &Polynomial<f64>, b: &Polynomial<f64>) -> f64 {
    let b = b.recentered(*a.center());
    let n = a.coeffs().len().max(b.coeffs().len());
    let get = |p: &[f64], k: usize| p.get(k).copied().unwrap_or(0.0);
    let scale = max_abs(a.coeffs().iter().copied()).max(f64::MIN_POSITIVE);
    max_abs((0..n).map(|k| get(a.coeffs(), k) - get(b.coeffs(), k))) / scale
}

fn hermite_direct(b: f64, tol: f64, label: &str) -> Result<Check> {
    let mut err = 0.0f64;
    for r in 0..=6 {
        for (u1, u2) in [(1.0, b), (b, 1.0)] {
            let ours = HermiteBasis::<f64>::new(r, u1, u2)?;
            let direct = hermite_solve_direct(r, u1, u2)?;
            for (p, q) in ours.polys().iter().zip(&direct) {
                err = err.max(coefficient_gap(p, q));
            }
        }
    }
    Ok(Check::bound(format!("hermite vs direct solve b={label}"), err, tol))
}

fn test_samples(len: usize, seed: f64) -> Vec<f64> {
    (0..len).map(|j| (seed * (j * j) as f64 + 0.3 * j as f64).sin() + 0.25 * (seed * j as f64).cos()).collect()
}

fn dft_checks() -> Result<(Check, Check, Check)> {
    let (mut dft_err, mut kern_err, mut node_err) = (0.0f64, 0.0f64, 0.0f64);
    for big_n in (2..=64).step_by(2) {
        let f = test_samples(big_n, 0.37 + big_n as f64 * 1e-3);
        // samples at x_j = j/n with n = N - 1 - C for a nominal C
        let c = big_n / 4;
        let n = big_n - 1 - c;
        let b = big_n as f64 / n as f64;
        let t = TrigInterpolant::new(&f, b)?;
        let naive = naive_dft(&f);
        dft_err = dft_err.max(max_abs(t.coeffs().iter().zip(&naive).map(|(a, b)| (a - b).norm())));
        for k in 0..=16 {
            let x = b * k as f64 / 16.0 + 0.013;
            let via_modes = kernel_interp(&f, n, x)?;
            let via_closed: f64 = f
                .iter()
                .enumerate()
                .map(|(j, &v)| kernel_l(j, n, c, x).map(|l| v * l))
                .sum::<Result<f64>>()?;
            kern_err = kern_err.max((t.eval(x) - via_modes).abs()).max((via_closed - via_modes).abs());
        }
        node_err = node_err.max(max_abs(f.iter().enumerate().map(|(j, &v)| t.eval(j as f64 / n as f64) - v)));
    }
    Ok((
        Check::bound("fft vs naive dft N<=64", dft_err, 1e-12),
        Check::bound("interpolant vs kernel sums N<=64", kern_err, 1e-10),
        Check::bound("interpolation at nodes N<=64", node_err, 1e-12),
    ))
}

fn constant_identity() -> Result<Check> {
    let mut err = 0.0f64;
    for (d, n, b) in [(6, 32, Rational64::from_integer(2)), (4, 64, Rational64::new(17, 16)), (5, 16, Rational64::new(3, 2))] {
        let params = validate_params(RawParams::new(n, d).with_b(b))?;
        let cont = Continuator::<f64>::new(params, None)?;
        let cs = cont.continue_samples(&vec![1.0; n + 1], None)?;
        err = err.max(max_abs(cs.values().iter().map(|v| v - 1.0)));
        let t = cs.fit()?;
        err = err.max(max_abs((0..=256).map(|k| t.eval(k as f64 / 256.0) - 1.0)));
    }
    Ok(Check::bound("constant continuation identity", err, 1e-11))
}

fn rate_check(f: TestFunction, d: usize, b: Rational64, n_list: &[usize], tol: f64) -> Result<Check> {
    let rows = run_study(&f, d, b, n_list, Method::Hermite, DEFAULT_N_EVAL)?;
    let orders: Vec<f64> = rate_window(&rows).into_iter().map(|(_, o)| o).collect();
    let gap = median(&orders).map_or(f64::INFINITY, |m| (m - d as f64).abs());
    Ok(Check::bound(format!("{f} d={d} b={b} median order"), gap, tol))
}

fn table_value(f: TestFunction, d: usize, n: usize, paper: f64) -> Result<Check> {
    let rows = run_study(&f, d, Rational64::from_integer(2), &[n], Method::Hermite, DEFAULT_N_EVAL)?;
    let gap = (rows[0].e_n / paper).log10().abs();
    Ok(Check::bound(format!("{f} d={d} n={n} tabulated error (log10 gap)"), gap, 1.0))
}

fn projection_orders() -> Result<Check> {
    let h: Vec<DoubleDouble> = (6..=10).map(|k| DoubleDouble::from(1.0 / f64::from(1u32 << k))).collect();
    let mut gap = 0.0f64;
    for d in [4, 5] {
        let rates = run_projection_rate_study(&TestFunction::Expx, d, &h)?;
        for m in 0..d {
            let orders = rates.orders(m);
            if orders.is_empty() {
                gap = f64::INFINITY;
            }
            gap = gap.max(max_abs(orders.iter().map(|o| o - (d - m) as f64)));
        }
    }
    Ok(Check::bound("projection derivative orders d=4,5", gap, 0.4))
}

/// Runs the suite at `level`.
pub fn run(level: Level, options: &VerifyOptions) -> Result<Report> {
    let start = Instant::now();
    let bases = gram_bases(options)?;
    let mut checks = vec![
        gram_orthonormality(&bases),
        gram_exact(&bases)?,
        hermite_direct(2.0, 1e-9, "2")?,
        hermite_direct(1.0625, 1e-6, "17/16")?,
    ];
    let (dft, kernel, nodes) = dft_checks()?;
    checks.extend([dft, kernel, nodes, constant_identity()?]);
    if level == Level::Full {
        let two = Rational64::from_integer(2);
        let narrow = Rational64::new(17, 16);
        for d in 3..=5 {
            for b in [two, narrow] {
                checks.push(rate_check(TestFunction::Osc54, d, b, &[256, 512, 1024, 2048], 0.35)?);
            }
            checks.push(rate_check(TestFunction::Expx, d, two, &[32, 64, 128, 256], 0.35)?);
        }
        checks.push(table_value(TestFunction::Osc54, 3, 1024, 4.51e-8)?);
        checks.push(table_value(TestFunction::Expx, 4, 512, 2.40e-11)?);
        checks.push(table_value(TestFunction::Runge(0.1), 5, 512, 5.61e-12)?);
        checks.push(projection_orders()?);
    }
    Ok(Report { level, checks, seconds: start.elapsed().as_secs_f64() })
}
