//! Convergence studies: relative errors on a fine grid, numerical orders of
//! convergence, the built-in test functions and their exact derivatives.

use std::fmt;
use std::path::PathBuf;

use num_rational::Rational64;

use crate::continuation::{validate_params, Continuator, EndpointDerivatives, Method, RawParams};
use crate::error::{domain, FcError, Result};
use crate::gram_basis::GramBasis;
use crate::hermite_extension::reference_extension;
use crate::lsq_continuation::LsGrid;
use crate::scalar::Real;
use crate::trig_interp::{GridWindow, TrigInterpolant};

/// Highest derivative order available from the test functions.
pub const MAX_DERIVATIVE_ORDER: usize = 9;

/// Default fine-grid size `2^15`.
pub const DEFAULT_N_EVAL: usize = 1 << 15;

/// Errors below this are treated as round-off when judging rates.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Truncated Taylor series `sum_k c_k (x - x0)^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet<T> {
    c: Vec<T>,
}

impl<T: Real> Jet<T> {
    pub fn constant(v: T, order: usize) -> Self {
        let mut c = vec![T::zero(); order + 1];
        c[0] = v;
        Self { c }
    }

    /// The identity function expanded at `x0`.
    pub fn variable(x0: T, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order > 0 {
            j.c[1] = T::one();
        }
        j
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn value(&self) -> T {
        self.c[0]
    }

    /// `f^{(m)}(x0)` for `m = 0..=order`.
    pub fn derivatives(&self) -> Vec<T> {
        let mut fact = T::one();
        self.c
            .iter()
            .enumerate()
            .map(|(k, &v)| {
                if k > 0 {
                    fact *= T::of(k);
                }
                v * fact
            })
            .collect()
    }

    fn zip(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        Self { c: self.c.iter().zip(&other.c).map(|(&a, &b)| f(a, b)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, s: T) -> Self {
        Self { c: self.c.iter().map(|&a| a * s).collect() }
    }

    pub fn add_scalar(&self, s: T) -> Self {
        let mut out = self.clone();
        out.c[0] += s;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.c.len();
        let c = (0..n)
            .map(|k| (0..=k).map(|j| self.c[j] * other.c[k - j]).fold(T::zero(), |a, b| a + b))
            .collect();
        Self { c }
    }

    pub fn exp(&self) -> Self {
        let n = self.c.len();
        let mut e = vec![T::zero(); n];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + T::of(j) * self.c[j] * e[k - j]);
            e[k] = s / T::of(k);
        }
        Self { c: e }
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let n = self.c.len();
        let mut s = vec![T::zero(); n];
        let mut c = vec![T::zero(); n];
        (s[0], c[0]) = self.c[0].sin_cos();
        for k in 1..n {
            let (mut ds, mut dc) = (T::zero(), T::zero());
            for j in 1..=k {
                let w = T::of(j) * self.c[j];
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s[k] = ds / T::of(k);
            c[k] = -dc / T::of(k);
        }
        (Self { c: s }, Self { c })
    }

    pub fn recip(&self) -> Self {
        let n = self.c.len();
        let mut r = vec![T::zero(); n];
        let inv = self.c[0].recip();
        r[0] = inv;
        for k in 1..n {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + self.c[j] * r[k - j]);
            r[k] = -s * inv;
        }
        Self { c: r }
    }
}

/// The functions used in the studies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestFunction {
    /// `f(x) = 1`.
    Const1,
    /// `exp(sin(5.4 pi x - 2.7 pi) - cos(2 pi x))`.
    Osc54,
    /// `exp(x)`.
    Expx,
    /// `exp(-cos(k x))`.
    Cosk(f64),
    /// `1 / ((x - 1/3)^2 + eps^2)`.
    Runge(f64),
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Cosk(k) => write!(f, "cosk({k})"),
            TestFunction::Runge(eps) => write!(f, "runge({eps})"),
            other => f.write_str(other.id()),
        }
    }
}

fn parse_param(text: &str, name: &str) -> Result<f64> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| FcError::UnknownFunction(format!("bad {name} parameter `{text}`")))
}

impl TestFunction {
    pub fn id(&self) -> &'static str {
        match self {
            TestFunction::Const1 => "const1",
            TestFunction::Osc54 => "osc54",
            TestFunction::Expx => "expx",
            TestFunction::Cosk(_) => "cosk",
            TestFunction::Runge(_) => "runge",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            TestFunction::Const1 => "f(x) = 1",
            TestFunction::Osc54 => "f(x) = exp(sin(5.4 pi x - 2.7 pi) - cos(2 pi x))",
            TestFunction::Expx => "f(x) = exp(x)",
            TestFunction::Cosk(_) => "f(x) = exp(-cos(k x))",
            TestFunction::Runge(_) => "f(x) = 1 / ((x - 1/3)^2 + eps^2)",
        }
    }

    /// Looks up a function by id. `cosk` takes `k` (default 50), `runge`
    /// takes `eps` (default 0.1); `"cosk(200)"` and `"runge(0.01)"` also work.
    pub fn lookup(id: &str, k: Option<f64>, eps: Option<f64>) -> Result<Self> {
        let id = id.trim();
        if let Some((name, rest)) = id.split_once('(') {
            let arg = rest
                .strip_suffix(')')
                .ok_or_else(|| FcError::UnknownFunction(id.to_string()))?;
            return match name.trim() {
                "cosk" => Ok(TestFunction::Cosk(parse_param(arg, "k")?)),
                "runge" => Ok(TestFunction::Runge(parse_param(arg, "eps")?)),
                _ => Err(FcError::UnknownFunction(id.to_string())),
            };
        }
        match id {
            "const1" => Ok(TestFunction::Const1),
            "osc54" => Ok(TestFunction::Osc54),
            "expx" => Ok(TestFunction::Expx),
            "cosk" => Ok(TestFunction::Cosk(k.unwrap_or(50.0))),
            "runge" => {
                let eps = eps.unwrap_or(0.1);
                if eps == 0.0 {
                    return Err(FcError::UnknownFunction("runge needs eps != 0".into()));
                }
                Ok(TestFunction::Runge(eps))
            }
            _ => Err(FcError::UnknownFunction(id.to_string())),
        }
    }

    /// Taylor expansion at `x` through `order`.
    pub fn jet<T: Real>(&self, x: T, order: usize) -> Jet<T> {
        let xj = Jet::variable(x, order);
        match *self {
            TestFunction::Const1 => Jet::constant(T::one(), order),
            TestFunction::Osc54 => {
                let pi = T::PI();
                let arg = xj.scale(T::lit(5.4) * pi).add_scalar(-T::lit(2.7) * pi);
                let (s, _) = arg.sin_cos();
                let (_, c) = xj.scale(T::lit(2.0) * pi).sin_cos();
                s.sub(&c).exp()
            }
            TestFunction::Expx => xj.exp(),
            TestFunction::Cosk(k) => {
                let (_, c) = xj.scale(T::lit(k)).sin_cos();
                c.scale(-T::one()).exp()
            }
            TestFunction::Runge(eps) => {
                let u = xj.add_scalar(-T::one() / T::lit(3.0));
                u.mul(&u).add_scalar(T::lit(eps) * T::lit(eps)).recip()
            }
        }
    }

    pub fn eval<T: Real>(&self, x: T) -> T {
        match *self {
            TestFunction::Const1 => T::one(),
            TestFunction::Osc54 => {
                let pi = T::PI();
                ((T::lit(5.4) * pi * x - T::lit(2.7) * pi).sin() - (T::lit(2.0) * pi * x).cos()).exp()
            }
            TestFunction::Expx => x.exp(),
            TestFunction::Cosk(k) => (-(T::lit(k) * x).cos()).exp(),
            TestFunction::Runge(eps) => {
                let u = x - T::one() / T::lit(3.0);
                (u * u + T::lit(eps) * T::lit(eps)).recip()
            }
        }
    }

    /// `f^{(m)}(x)` for `m = 0..count`.
    pub fn derivatives<T: Real>(&self, x: T, count: usize) -> Result<Vec<T>> {
        if count == 0 || count > MAX_DERIVATIVE_ORDER + 1 {
            return domain(format!("derivative count {count} outside 1..={}", MAX_DERIVATIVE_ORDER + 1));
        }
        Ok(self.jet(x, count - 1).derivatives())
    }

    pub fn endpoint_derivatives<T: Real>(&self, d: usize) -> Result<EndpointDerivatives<T>> {
        Ok(EndpointDerivatives { at_zero: self.derivatives(T::zero(), d)?, at_one: self.derivatives(T::one(), d)? })
    }

    /// `f(x_j)` for `x_j = j / n`, `j = 0..=n`.
    pub fn samples<T: Real>(&self, n: usize) -> Vec<T> {
        (0..=n).map(|j| self.eval(T::of(j) / T::of(n))).collect()
    }
}

/// The registry of built-in functions with their tabulated parameters.
pub fn builtin_functions() -> Vec<TestFunction> {
    vec![
        TestFunction::Const1,
        TestFunction::Osc54,
        TestFunction::Expx,
        TestFunction::Cosk(50.0),
        TestFunction::Cosk(100.0),
        TestFunction::Cosk(200.0),
        TestFunction::Runge(1.0),
        TestFunction::Runge(0.1),
        TestFunction::Runge(0.01),
    ]
}

/// `max_j |t(z_j) - f(z_j)| / max_j |f(z_j)|` over `z_j = j / n_eval`.
pub fn relative_error<T: Real>(f: &TestFunction, t: &TrigInterpolant<T>, n_eval: usize) -> Result<T> {
    if n_eval == 0 {
        return domain("fine grid size must be positive");
    }
    let approx = if n_eval >= t.len() {
        t.eval_fine_grid(n_eval, GridWindow::Unit)?
    } else {
        (0..=n_eval).map(|j| t.eval(T::of(j) / T::of(n_eval))).collect()
    };
    let (mut num, mut den) = (T::zero(), T::zero());
    for (j, a) in approx.iter().enumerate() {
        let v = f.eval(T::of(j) / T::of(n_eval));
        num = num.max((*a - v).abs());
        den = den.max(v.abs());
    }
    if den == T::zero() {
        return Err(FcError::Division("max |f| on the fine grid is zero".into()));
    }
    Ok(num / den)
}

/// `log2(e_prev / e_cur)`.
pub fn noc(e_prev: f64, e_cur: f64) -> Result<f64> {
    if !(e_prev > 0.0 && e_cur > 0.0) {
        return domain(format!("noc needs positive errors, got {e_prev} and {e_cur}"));
    }
    Ok((e_prev / e_cur).log2())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub e_n: f64,
    pub noc: Option<f64>,
}

/// How `C` follows `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CRule {
    /// `C = n b - n - 1`; `n b` must be an even integer.
    Period(Rational64),
    Fixed(usize),
    /// `C = n/4 - 1`.
    QuarterMinusOne,
}

impl CRule {
    pub fn c_for(&self, n: usize) -> Result<usize> {
        match *self {
            CRule::Period(b) => crate::continuation::c_from_period(n, b),
            CRule::Fixed(c) => Ok(c),
            CRule::QuarterMinusOne => {
                if n % 4 != 0 || n < 8 {
                    return domain(format!("C = n/4 - 1 needs n divisible by 4 and n >= 8, got {n}"));
                }
                Ok(n / 4 - 1)
            }
        }
    }
}

/// How the skipping parameter follows `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SRule {
    Fixed(usize),
    /// `s = n / 8`.
    EighthOfN,
}

impl SRule {
    pub fn s_for(&self, n: usize) -> Result<usize> {
        match *self {
            SRule::Fixed(s) => Ok(s),
            SRule::EighthOfN => {
                if n % 8 != 0 {
                    return domain(format!("s = n/8 needs n divisible by 8, got {n}"));
                }
                Ok(n / 8)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudySpec {
    pub function: TestFunction,
    pub d: usize,
    pub c_rule: CRule,
    pub s_rule: SRule,
    pub method: Method,
    pub n_eval: usize,
    /// Zero-grid size for the least-squares method.
    pub ls_z: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl StudySpec {
    pub fn new(function: TestFunction, d: usize, c_rule: CRule, method: Method) -> Self {
        Self {
            function,
            d,
            c_rule,
            s_rule: SRule::Fixed(1),
            method,
            n_eval: DEFAULT_N_EVAL,
            ls_z: None,
            cache_dir: None,
        }
    }

    /// Relative error for one `n`.
    pub fn error_for(&self, n: usize) -> Result<f64> {
        let c = self.c_rule.c_for(n)?;
        let s = self.s_rule.s_for(n)?;
        let mut raw = RawParams::new(n, self.d).with_c(c).with_s(s).with_method(self.method);
        if self.method == Method::LeastSquares {
            let grid = match self.ls_z {
                Some(z) => LsGrid::new(self.d, s, c, z, c, crate::lsq_continuation::DEFAULT_N_OVER)?,
                None => LsGrid::with_defaults(self.d, s, c)?,
            };
            raw = raw.with_ls(grid);
        }
        let params = validate_params(raw)?;
        let cont = Continuator::<f64>::new(params, self.cache_dir.as_deref())?;
        let derivs = match self.method {
            Method::Reference => Some(self.function.endpoint_derivatives(self.d)?),
            _ => None,
        };
        let samples = self.function.samples(n);
        let cs = cont.continue_samples(&samples, derivs.as_ref())?;
        relative_error(&self.function, &cs.fit()?, self.n_eval)
    }

    pub fn run(&self, n_list: &[usize]) -> Result<Vec<ConvergenceRow>> {
        if n_list.is_empty() {
            return domain("n list is empty");
        }
        let mut sorted = n_list.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let errors: Vec<Result<f64>> = std::thread::scope(|scope| {
            let handles: Vec<_> = sorted.iter().map(|&n| scope.spawn(move || self.error_for(n))).collect();
            handles.into_iter().map(|h| h.join().expect("study worker panicked")).collect()
        });
        let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(sorted.len());
        for (&n, e) in sorted.iter().zip(errors) {
            let e_n = e?;
            let prev = rows.iter().find(|r| r.n * 2 == n).map(|r| r.e_n);
            let noc = match prev {
                Some(p) if p > 0.0 && e_n > 0.0 => Some(noc(p, e_n)?),
                _ => None,
            };
            rows.push(ConvergenceRow { n, e_n, noc });
        }
        Ok(rows)
    }
}

/// Full pipeline for each `n` on the theorem path `C = n b - n - 1`.
pub fn run_study(
    f: &TestFunction,
    d: usize,
    b: Rational64,
    n_list: &[usize],
    method: Method,
    n_eval: usize,
) -> Result<Vec<ConvergenceRow>> {
    let mut spec = StudySpec::new(*f, d, CRule::Period(b), method);
    spec.n_eval = n_eval;
    spec.run(n_list)
}

/// Orders usable for rate assertions: rows whose error and predecessor
/// error both lie above [`ROUNDOFF_FLOOR`].
pub fn rate_window(rows: &[ConvergenceRow]) -> Vec<(usize, f64)> {
    rows.iter()
        .filter(|r| r.e_n >= ROUNDOFF_FLOOR)
        .filter_map(|r| r.noc.map(|o| (r.n, o)))
        .collect()
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[mid] } else { 0.5 * (v[mid - 1] + v[mid]) })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RateEntry {
    pub h: f64,
    pub error: f64,
    /// `log2` of the error ratio to the previous (twice larger) `h`.
    pub order: Option<f64>,
    /// The error is at the round-off level for this derivative order.
    pub saturated: bool,
}

/// Projection errors per derivative order `m` (outer index) and `h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionRates {
    pub d: usize,
    pub entries: Vec<Vec<RateEntry>>,
}

impl ProjectionRates {
    /// Orders from consecutive unsaturated entries for derivative `m`.
    pub fn orders(&self, m: usize) -> Vec<f64> {
        let e = &self.entries[m];
        e.iter()
            .enumerate()
            .filter(|(i, r)| !r.saturated && *i > 0 && !e[i - 1].saturated)
            .filter_map(|(_, r)| r.order)
            .collect()
    }

    pub fn all_saturated(&self) -> bool {
        self.entries.iter().flatten().all(|r| r.saturated)
    }
}

/// Errors of `(P^L psi)^{(m)} - psi^{(m)}` on `[0, (d-1) h]` for each `h`.
/// `derivs(x, count)` returns `psi^{(m)}(x)` for `m < count`.
pub fn projection_rates<T: Real>(
    derivs: impl Fn(T, usize) -> Vec<T>,
    d: usize,
    h_list: &[T],
) -> Result<ProjectionRates> {
    if d < 2 {
        return domain("projection rates need d >= 2");
    }
    let basis = GramBasis::<T>::new(d)?;
    let samples_per_interval = 64;
    let mut entries: Vec<Vec<RateEntry>> = vec![Vec::with_capacity(h_list.len()); d];
    for (i, &h) in h_list.iter().enumerate() {
        let nodes: Vec<T> = (0..d).map(|j| derivs(T::of(j) * h, 1)[0]).collect();
        let p = basis.left_projection(&basis.project_left(&nodes)?, 1, h)?;
        let width = T::of(d - 1) * h;
        let mut err = vec![T::zero(); d];
        let mut scale = vec![T::zero(); d];
        for k in 0..=samples_per_interval {
            let x = width * T::of(k) / T::of(samples_per_interval);
            let exact = derivs(x, d);
            for m in 0..d {
                err[m] = err[m].max((p.derivative_at(m, x) - exact[m]).abs());
                scale[m] = scale[m].max(exact[m].abs());
            }
        }
        for m in 0..d {
            let error = err[m].to_f64_lossy();
            // round-off in an m-th derivative grows like eps h^{-m}
            let floor = 1e3 * T::epsilon().to_f64_lossy() * scale[m].to_f64_lossy().max(1.0)
                * h.to_f64_lossy().powi(-(m as i32));
            let order = (i > 0 && error > 0.0 && entries[m][i - 1].error > 0.0)
                .then(|| (entries[m][i - 1].error / error).log2());
            entries[m].push(RateEntry { h: h.to_f64_lossy(), error, order, saturated: error <= floor });
        }
    }
    Ok(ProjectionRates { d, entries })
}

/// [`projection_rates`] for a built-in function.
pub fn run_projection_rate_study<T: Real>(f: &TestFunction, d: usize, h_list: &[T]) -> Result<ProjectionRates> {
    if d > MAX_DERIVATIVE_ORDER + 1 {
        return domain("d exceeds the available derivative orders");
    }
    projection_rates(|x, count| f.jet(x, count - 1).derivatives(), d, h_list)
}

/// `p - p_ref` on `[1, b]` for one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapRow {
    pub n: usize,
    /// `max_{[1,b]} |(p - p_ref)^{(m)}|` for `m = 0..d`.
    pub sup: Vec<f64>,
    /// `max(|(p - p_ref)^{(m)}(1)|, |(p - p_ref)^{(m)}(b)|)`.
    pub endpoints: Vec<f64>,
}

/// Distance between the projected and the exact-derivative Hermite
/// extensions under grid refinement on the theorem path.
pub fn run_extension_gap_study<T: Real>(
    f: &TestFunction,
    d: usize,
    b: Rational64,
    n_list: &[usize],
) -> Result<Vec<GapRow>> {
    n_list
        .iter()
        .map(|&n| {
            let params = validate_params(RawParams::new(n, d).with_b(b))?;
            let cont = Continuator::<T>::new(params.clone(), None)?;
            let p = cont.blend_extension(&f.samples::<T>(n))?;
            let derivs = f.endpoint_derivatives::<T>(d)?;
            let bt = params.period::<T>();
            let p_ref = reference_extension(&derivs.at_zero, &derivs.at_one, d, bt)?;
            let gap = &p - &p_ref;
            let points = 1024;
            let mut sup = vec![0.0f64; d];
            let mut endpoints = vec![0.0f64; d];
            for m in 0..d {
                let g = gap.derivative(m);
                for k in 0..=points {
                    let x = T::one() + (bt - T::one()) * T::of(k) / T::of(points);
                    sup[m] = sup[m].max(g.eval(x).abs().to_f64_lossy());
                }
                endpoints[m] = g.eval(T::one()).abs().max(g.eval(bt).abs()).to_f64_lossy();
            }
            Ok(GapRow { n, sup, endpoints })
        })
        .collect()
}
