//! Parameter validation and assembly of continued samples.
//!
//! With `h = 1/n` and `C` extension nodes, the period is
//! `b = 1 + (C+1) h = (n+C+1)/n`, kept as an exact rational. The continued
//! vector holds `f(x_j)` for `j = 0..=n` followed by an extension polynomial
//! evaluated at `x_{n+1} .. x_{n+C}`; `x_{n+C+1} = b` is the periodic wrap.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};

use crate::error::{domain, FcError, Result};
use crate::gram_basis::GramBasis;
use crate::hermite_extension::{
    left_extension_poly, reference_extension, right_extension_poly, EndpointHermite,
};
use crate::lsq_continuation::{classic_continue, default_m, load_or_solve, LsExtension, LsGrid, DEFAULT_SVD_CUTOFF};
use crate::polynomial::Polynomial;
use crate::scalar::Real;
use crate::trig_interp::TrigInterpolant;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Method {
    /// Two-point Hermite blending of projected endpoint derivatives.
    #[default]
    Hermite,
    /// Least-squares blend-to-zero extension.
    LeastSquares,
    /// Hermite blending of exact endpoint derivatives of `f`.
    Reference,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hermite => "hermite",
            Method::LeastSquares => "leastsquares",
            Method::Reference => "reference",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = FcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hermite" => Ok(Method::Hermite),
            "leastsquares" | "least-squares" | "ls" => Ok(Method::LeastSquares),
            "reference" => Ok(Method::Reference),
            other => domain(format!("unknown method `{other}` (expected hermite, leastsquares or reference)")),
        }
    }
}

/// Parses `"p/q"`, an integer, or a plain decimal such as `"1.0625"` exactly.
pub fn parse_rational(text: &str) -> Result<Rational64> {
    let text = text.trim();
    let bad = || FcError::Parse(format!("`{text}` is not a rational number"));
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational64::new(p, q));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let negative = int.starts_with('-');
    let digits = int.trim_start_matches(['-', '+']);
    if (digits.is_empty() && frac.is_empty())
        || !digits.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        || frac.len() > 17
    {
        return Err(bad());
    }
    let scale = 10i64.checked_pow(frac.len() as u32).ok_or_else(bad)?;
    let whole: i64 = if digits.is_empty() { 0 } else { digits.parse().map_err(|_| bad())? };
    let part: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    let num = whole.checked_mul(scale).and_then(|w| w.checked_add(part)).ok_or_else(bad)?;
    Ok(Rational64::new(if negative { -num } else { num }, scale))
}

/// Unvalidated continuation parameters; either `c` or `b` fixes `C`.
#[derive(Clone, Debug, PartialEq)]
pub struct RawParams {
    pub n: usize,
    pub d: usize,
    pub c: Option<usize>,
    pub b: Option<Rational64>,
    pub s: usize,
    pub method: Method,
    pub ls: Option<LsGrid>,
}

impl RawParams {
    pub fn new(n: usize, d: usize) -> Self {
        Self { n, d, c: None, b: None, s: 1, method: Method::Hermite, ls: None }
    }

    pub fn with_c(mut self, c: usize) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_b(mut self, b: Rational64) -> Self {
        self.b = Some(b);
        self
    }

    pub fn with_s(mut self, s: usize) -> Self {
        self.s = s;
        self
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn with_ls(mut self, grid: LsGrid) -> Self {
        self.ls = Some(grid);
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FcParams {
    n: usize,
    d: usize,
    c: usize,
    s: usize,
    b: Rational64,
    method: Method,
    ls: Option<LsGrid>,
}

/// Extension count `C = nb - n - 1` for a period with `nb` integral and even.
pub fn c_from_period(n: usize, b: Rational64) -> Result<usize> {
    let nb = b * Rational64::from_integer(n as i64);
    if !nb.is_integer() {
        return domain(format!("n b = {nb} is not an integer (n={n}, b={b})"));
    }
    let nb = nb.to_integer();
    if nb % 2 != 0 {
        return domain(format!("n b = {nb} is odd; the period needs an even sample count"));
    }
    if nb <= n as i64 + 1 {
        return domain(format!("period b={b} leaves no extension nodes for n={n}"));
    }
    Ok((nb - n as i64 - 1) as usize)
}

pub fn validate_params(raw: RawParams) -> Result<FcParams> {
    let RawParams { n, d, c, b, s, method, ls } = raw;
    if n == 0 {
        return domain("grid count n must be positive");
    }
    if d == 0 || d > crate::gram_basis::MAX_GRAM_NODES {
        return domain(format!("d={d} must lie in 1..={}", crate::gram_basis::MAX_GRAM_NODES));
    }
    if s == 0 {
        return domain("skipping parameter s must be at least 1");
    }
    if s != 1 && method != Method::LeastSquares {
        return domain(format!("the {method} method uses s = 1, got s={s}"));
    }
    if s * (d - 1) > n + 1 {
        return domain(format!("stencil rule violated: s(d-1) = {} > n+1 = {}", s * (d - 1), n + 1));
    }
    let c = match (c, b) {
        (Some(c), None) => c,
        (None, Some(b)) => c_from_period(n, b)?,
        (Some(c), Some(b)) => {
            let from_b = c_from_period(n, b)?;
            if from_b != c {
                return domain(format!("C={c} disagrees with b={b}, which gives C={from_b}"));
            }
            c
        }
        (None, None) => return domain("either C or b must be given"),
    };
    if c == 0 {
        return domain("extension node count C must be positive");
    }
    if (n + c) % 2 == 0 {
        return domain(format!("parity rule violated: n+C = {} must be odd", n + c));
    }
    let ls = match method {
        Method::LeastSquares => {
            let grid = match ls {
                Some(g) => g,
                None => LsGrid::with_defaults(d, s, c)?,
            };
            grid.validate()?;
            if grid.d != d || grid.s != s || grid.c != c || grid.e != c {
                return domain("least-squares grid must use the same d, s, C and E = C");
            }
            Some(grid)
        }
        _ => ls,
    };
    if 2 * s * (d - 1) > n {
        log::warn!("left and right stencils overlap: 2 s (d-1) = {} > n = {n}", 2 * s * (d - 1));
    }
    let b = Rational64::new((n + c + 1) as i64, n as i64);
    Ok(FcParams { n, d, c, s, b, method, ls })
}

impl FcParams {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn ls_grid(&self) -> Option<&LsGrid> {
        self.ls.as_ref()
    }

    /// Exact period `b = (n+C+1)/n`.
    pub fn period_exact(&self) -> Rational64 {
        self.b
    }

    pub fn period<T: Real>(&self) -> T {
        T::of(self.total()) / T::of(self.n)
    }

    /// Sample count `N = n + C + 1`.
    pub fn total(&self) -> usize {
        self.n + self.c + 1
    }

    /// `x_j = j / n`.
    pub fn node<T: Real>(&self, j: usize) -> T {
        T::of(j) / T::of(self.n)
    }

    pub fn h<T: Real>(&self) -> T {
        T::of(self.n).recip()
    }

    pub fn check_samples<T>(&self, f_samples: &[T]) -> Result<()> {
        if f_samples.len() != self.n + 1 {
            return domain(format!("expected {} samples, got {}", self.n + 1, f_samples.len()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ContinuedSamples<T> {
    values: Vec<T>,
    period: T,
    period_exact: Rational64,
    n: usize,
    c: usize,
    imag_residue: f64,
}

impl<T: Real> ContinuedSamples<T> {
    pub fn new(values: Vec<T>, params: &FcParams) -> Result<Self> {
        if values.len() != params.total() {
            return domain(format!("expected {} continued values, got {}", params.total(), values.len()));
        }
        Ok(Self {
            values,
            period: params.period(),
            period_exact: params.period_exact(),
            n: params.n(),
            c: params.c(),
            imag_residue: 0.0,
        })
    }

    pub(crate) fn with_imag_residue(mut self, imag: f64) -> Self {
        self.imag_residue = imag;
        self
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn period(&self) -> T {
        self.period
    }

    pub fn period_exact(&self) -> Rational64 {
        self.period_exact
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn c(&self) -> usize {
        self.c
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn x(&self, j: usize) -> T {
        T::of(j) / T::of(self.n)
    }

    /// Largest imaginary part discarded when forming the samples.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    /// The extension part `values[n+1..]`.
    pub fn extension(&self) -> &[T] {
        &self.values[self.n + 1..]
    }

    pub fn fit(&self) -> Result<TrigInterpolant<T>> {
        crate::trig_interp::fit(self)
    }

    /// CSV rows `j,x,value`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "j,x,value")?;
        for (j, v) in self.values.iter().enumerate() {
            writeln!(out, "{j},{:.16e},{:.16e}", self.x(j).to_f64_lossy(), v.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Exact derivatives `f^{(m)}(0)` and `f^{(m)}(1)`, `m = 0..d-1`.
#[derive(Clone, Debug, PartialEq)]
pub struct EndpointDerivatives<T> {
    pub at_zero: Vec<T>,
    pub at_one: Vec<T>,
}

fn projection_coeffs<T: Real>(f: &[T], params: &FcParams, basis: &GramBasis<T>) -> Result<(Vec<T>, Vec<T>)> {
    let (n, d, s) = (params.n(), params.d(), params.s());
    let left: Vec<T> = (0..d).map(|j| f[s * j]).collect();
    let right: Vec<T> = (0..d).map(|j| f[n - s * j]).collect();
    Ok((basis.project_left(&left)?, basis.project_right(&right)?))
}

/// The extension polynomial on `[1, b]`: derivatives of the endpoint Gram
/// projections, blended by the two-point Hermite bases.
pub fn blend_extension<T: Real>(
    f_samples: &[T],
    params: &FcParams,
    basis: &GramBasis<T>,
    hermite: &EndpointHermite<T>,
) -> Result<Polynomial<T>> {
    params.check_samples(f_samples)?;
    check_hermite_inputs(params, basis, hermite)?;
    let d = params.d();
    let h = params.h::<T>();
    let (cl, cr) = projection_coeffs(f_samples, params, basis)?;
    let pl = basis.left_projection(&cl, 1, h)?;
    let pr = basis.right_projection(&cr, 1, h)?;
    let at_0: Vec<T> = (0..d).map(|m| pl.derivative_at(m, T::zero())).collect();
    let at_1: Vec<T> = (0..d).map(|m| pr.derivative_at(m, T::one())).collect();
    Ok(&hermite.at_b.combine(&at_0)? + &hermite.at_one.combine(&at_1)?)
}

/// Same polynomial as [`blend_extension`], summed index by index over the
/// extended Gram polynomials.
pub fn blend_extension_by_index<T: Real>(
    f_samples: &[T],
    params: &FcParams,
    basis: &GramBasis<T>,
    hermite: &EndpointHermite<T>,
) -> Result<Polynomial<T>> {
    params.check_samples(f_samples)?;
    check_hermite_inputs(params, basis, hermite)?;
    let h = params.h::<T>();
    let (cl, cr) = projection_coeffs(f_samples, params, basis)?;
    let mut acc = Polynomial::centered(vec![T::zero()], *hermite.at_one.polys()[0].center());
    for l in 0..params.d() {
        acc = &acc + &left_extension_poly(basis, &hermite.at_b, l, 1, h)?.scale(cl[l]);
        acc = &acc + &right_extension_poly(basis, &hermite.at_one, l, 1, h)?.scale(cr[l]);
    }
    Ok(acc)
}

fn check_hermite_inputs<T: Real>(params: &FcParams, basis: &GramBasis<T>, hermite: &EndpointHermite<T>) -> Result<()> {
    if params.s() != 1 {
        return domain("Hermite blending uses s = 1");
    }
    if basis.d() != params.d() || hermite.d() != params.d() {
        return domain("Gram and Hermite bases must match d");
    }
    if hermite.at_one.u2() != params.period::<T>() {
        return domain("Hermite bases were built for a different period");
    }
    Ok(())
}

/// Where the extension values come from.
#[derive(Clone, Copy, Debug)]
pub enum ExtensionSource<'a, T> {
    Hermite { basis: &'a GramBasis<T>, hermite: &'a EndpointHermite<T> },
    LeastSquares(&'a [LsExtension]),
    Reference(&'a EndpointDerivatives<T>),
}

fn polynomial_samples<T: Real>(f: &[T], params: &FcParams, p: &Polynomial<T>) -> Result<ContinuedSamples<T>> {
    let n = params.n();
    let mut values = f.to_vec();
    values.extend((n + 1..params.total()).map(|j| p.eval(params.node(j))));
    ContinuedSamples::new(values, params)
}

pub fn continue_samples<T: Real>(
    f_samples: &[T],
    params: &FcParams,
    source: ExtensionSource<'_, T>,
) -> Result<ContinuedSamples<T>> {
    params.check_samples(f_samples)?;
    match source {
        ExtensionSource::Hermite { basis, hermite } => {
            let p = blend_extension(f_samples, params, basis, hermite)?;
            polynomial_samples(f_samples, params, &p)
        }
        ExtensionSource::LeastSquares(ls) => classic_continue(f_samples, params, ls),
        ExtensionSource::Reference(derivs) => {
            let p = reference_extension(&derivs.at_zero, &derivs.at_one, params.d(), params.period())?;
            polynomial_samples(f_samples, params, &p)
        }
    }
}

/// Holds the bases or fitted extensions needed by one parameter set.
#[derive(Clone, Debug)]
pub struct Continuator<T> {
    params: FcParams,
    basis: GramBasis<T>,
    hermite: EndpointHermite<T>,
    ls: Option<Vec<LsExtension>>,
}

impl<T: Real> Continuator<T> {
    /// Builds the bases; least-squares extensions are solved with the default
    /// mode count and cutoff, reusing `cache_dir` when given.
    pub fn new(params: FcParams, cache_dir: Option<&Path>) -> Result<Self> {
        let ls = match params.ls_grid() {
            Some(grid) if params.method() == Method::LeastSquares => {
                Some(load_or_solve(grid, default_m(grid), DEFAULT_SVD_CUTOFF, cache_dir)?)
            }
            _ => None,
        };
        Self::build(params, ls)
    }

    pub fn with_ls_extensions(params: FcParams, ls: Vec<LsExtension>) -> Result<Self> {
        Self::build(params, Some(ls))
    }

    fn build(params: FcParams, ls: Option<Vec<LsExtension>>) -> Result<Self> {
        let basis = GramBasis::new(params.d())?;
        let hermite = EndpointHermite::new(params.d(), params.period())?;
        Ok(Self { params, basis, hermite, ls })
    }

    pub fn params(&self) -> &FcParams {
        &self.params
    }

    pub fn basis(&self) -> &GramBasis<T> {
        &self.basis
    }

    pub fn hermite(&self) -> &EndpointHermite<T> {
        &self.hermite
    }

    pub fn ls_extensions(&self) -> Option<&[LsExtension]> {
        self.ls.as_deref()
    }

    pub fn blend_extension(&self, f_samples: &[T]) -> Result<Polynomial<T>> {
        blend_extension(f_samples, &self.params, &self.basis, &self.hermite)
    }

    /// Continues `f_samples` with the configured method; the reference
    /// method needs `derivs`.
    pub fn continue_samples(
        &self,
        f_samples: &[T],
        derivs: Option<&EndpointDerivatives<T>>,
    ) -> Result<ContinuedSamples<T>> {
        let source = match self.params.method() {
            Method::Hermite => ExtensionSource::Hermite { basis: &self.basis, hermite: &self.hermite },
            Method::LeastSquares => ExtensionSource::LeastSquares(
                self.ls.as_deref().ok_or_else(|| FcError::Method("least-squares extensions missing".into()))?,
            ),
            Method::Reference => ExtensionSource::Reference(derivs.ok_or_else(|| {
                FcError::Method("the reference method needs exact endpoint derivatives".into())
            })?),
        };
        continue_samples(f_samples, &self.params, source)
    }
}

/// `b` as `f64`, for reporting.
pub fn rational_to_f64(r: Rational64) -> f64 {
    if r.denom().is_zero() {
        f64::NAN
    } else {
        r.to_f64().unwrap_or(f64::NAN)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, d: usize, c: usize) -> FcParams {
        validate_params(RawParams::new(n, d).with_c(c)).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p = params(8, 6, 25);
        assert_eq!(p.period_exact(), Rational64::new(34, 8));
        assert_eq!(p.period_exact(), Rational64::from_integer(1) + Rational64::new(26, 8));
        let err = validate_params(RawParams::new(8, 6).with_c(24)).unwrap_err();
        assert!(err.to_string().contains("parity"));
        let err = validate_params(RawParams::new(4, 6).with_c(3).with_s(2).with_method(Method::LeastSquares))
            .unwrap_err();
        assert!(err.to_string().contains("stencil"));
        assert!(validate_params(RawParams::new(8, 6).with_c(25).with_s(2)).is_err());
        assert!(validate_params(RawParams::new(8, 6)).is_err());
    }

    #[test]
    fn period_rule() {
        let p = validate_params(RawParams::new(64, 4).with_b(Rational64::from_integer(2))).unwrap();
        assert_eq!(p.c(), 63);
        let p = validate_params(RawParams::new(512, 4).with_b(Rational64::new(17, 16))).unwrap();
        assert_eq!(p.c(), 31);
        let err = validate_params(RawParams::new(8, 4).with_b(Rational64::new(17, 16))).unwrap_err();
        assert!(err.to_string().contains("not an integer"));
        let err = validate_params(RawParams::new(16, 4).with_b(Rational64::new(17, 16))).unwrap_err();
        assert!(err.to_string().contains("odd"));
        assert!(validate_params(RawParams::new(64, 4).with_c(63).with_b(Rational64::from_integer(2))).is_ok());
        assert!(validate_params(RawParams::new(64, 4).with_c(61).with_b(Rational64::from_integer(2))).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("17/16").unwrap(), Rational64::new(17, 16));
        assert_eq!(parse_rational("1.0625").unwrap(), Rational64::new(17, 16));
        assert_eq!(parse_rational("2").unwrap(), Rational64::from_integer(2));
        assert_eq!(parse_rational(" 3/6 ").unwrap(), Rational64::new(1, 2));
        assert_eq!(parse_rational(".5").unwrap(), Rational64::new(1, 2));
        for bad in ["", "1/0", "abc", "1.2.3", "1e3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
        assert_eq!("LS".parse::<Method>().unwrap(), Method::LeastSquares);
        assert!("spline".parse::<Method>().is_err());
    }

    #[test]
    fn constant_continues_to_constant() {
        let p = params(32, 6, 31);
        let cont = Continuator::<f64>::new(p, None).unwrap();
        let f = vec![1.0; 33];
        let poly = cont.blend_extension(&f).unwrap();
        for k in 0..=20 {
            let x = 1.0 + k as f64 / 20.0;
            assert!((poly.eval(x) - 1.0).abs() < 1e-11);
        }
        let cs = cont.continue_samples(&f, None).unwrap();
        assert_eq!(cs.len(), 64);
        assert!(cs.values().iter().all(|v| (v - 1.0).abs() < 1e-11));
        assert_eq!(&cs.values()[..33], &f[..]);
    }

    #[test]
    fn linear_data_matches_at_both_ends() {
        let p = params(16, 3, 9);
        let b = p.period::<f64>();
        let cont = Continuator::<f64>::new(p.clone(), None).unwrap();
        let f: Vec<f64> = (0..=16).map(|j| j as f64 / 16.0).collect();
        let poly = cont.blend_extension(&f).unwrap();
        assert!((poly.eval(1.0) - 1.0).abs() < 1e-12);
        assert!((poly.derivative_at(1, 1.0) - 1.0).abs() < 1e-10);
        assert!(poly.eval(b).abs() < 1e-12);
        assert!((poly.derivative_at(1, b) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gram_polynomial_data_is_reproduced() {
        let d = 3;
        let p = params(16, d, 9);
        let cont = Continuator::<f64>::new(p.clone(), None).unwrap();
        let h = p.h::<f64>();
        let g = cont.basis().left_poly(2, 1, h).unwrap();
        let f: Vec<f64> = (0..=16).map(|j| g.eval(j as f64 * h)).collect();
        let poly = cont.blend_extension(&f).unwrap();
        let b = p.period::<f64>();
        for m in 0..d {
            let want = g.derivative_at(m, 0.0);
            assert!((poly.derivative_at(m, b) - want).abs() <= 1e-8 * want.abs().max(1.0));
            let want = g.derivative_at(m, 1.0);
            assert!((poly.derivative_at(m, 1.0) - want).abs() <= 1e-8 * want.abs().max(1.0));
        }
    }

    #[test]
    fn single_and_indexwise_forms_agree() {
        for d in 2..=6 {
            let p = params(64, d, 31);
            let cont = Continuator::<f64>::new(p.clone(), None).unwrap();
            let f: Vec<f64> = (0..=64).map(|j| (2.0 * j as f64 / 64.0).sin() + 0.3).collect();
            let a = cont.blend_extension(&f).unwrap();
            let b = blend_extension_by_index(&f, &p, cont.basis(), cont.hermite()).unwrap();
            for k in 0..=40 {
                let x = 1.0 + 0.5 * k as f64 / 40.0;
                assert!((a.eval(x) - b.eval(x)).abs() < 1e-9, "d={d}");
            }
        }
    }

    #[test]
    fn polynomial_data_matches_reference() {
        let d = 4;
        let p = params(32, d, 31);
        let cont = Continuator::<f64>::new(p.clone(), None).unwrap();
        // f = 1 + x - 2 x^2 + x^3 / 2
        let f = |x: f64| 1.0 + x - 2.0 * x * x + 0.5 * x * x * x;
        let df = [
            |x: f64| 1.0 + x - 2.0 * x * x + 0.5 * x * x * x,
            |x: f64| 1.0 - 4.0 * x + 1.5 * x * x,
            |x: f64| -4.0 + 3.0 * x,
            |_x: f64| 3.0,
        ];
        let derivs = EndpointDerivatives {
            at_zero: df.iter().map(|g| g(0.0)).collect(),
            at_one: df.iter().map(|g| g(1.0)).collect(),
        };
        let samples: Vec<f64> = (0..=32).map(|j| f(j as f64 / 32.0)).collect();
        let herm = cont.continue_samples(&samples, None).unwrap();
        let refp = validate_params(RawParams::new(32, d).with_c(31).with_method(Method::Reference)).unwrap();
        let refc = Continuator::<f64>::new(refp, None).unwrap();
        assert!(matches!(refc.continue_samples(&samples, None), Err(FcError::Method(_))));
        let reference = refc.continue_samples(&samples, Some(&derivs)).unwrap();
        for (a, b) in herm.values().iter().zip(reference.values()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn csv_layout() {
        let p = params(4, 2, 1);
        let cs = ContinuedSamples::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0], &p).unwrap();
        let mut buf = Vec::new();
        cs.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("j,x,value\n0,0.0000000000000000e0,1.0000000000000000e0\n"));
        assert_eq!(text.lines().count(), 7);
    }
}
