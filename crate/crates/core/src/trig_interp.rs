//! Trigonometric interpolation of equispaced samples on one period.
//!
//! Samples `g_j = g(j b / N)`, `j = 0..N-1` with `N` even, determine the
//! coefficients `c_l = (1/N) sum_j g_j e^{-2 pi i l j / N}` for
//! `l = -N/2 .. N/2-1`. The interpolant is
//! `sum_{|l| < N/2} c_l e^{2 pi i l x / b} + c_{-N/2} cos(pi N x / b)`,
//! which is real for real samples.

use std::io::Write;

use num_complex::Complex;
use rustfft::{FftDirection, FftPlanner};

use crate::continuation::ContinuedSamples;
use crate::error::{domain, Result};
use crate::scalar::Real;

/// Which part of the period [`TrigInterpolant::eval_fine_grid`] returns.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GridWindow {
    /// `z_j = j / N_eval` for `j = 0..=N_eval`, the interval `[0, 1]`.
    #[default]
    Unit,
    /// `z_j = j / N_eval` for `j = 0..=N_eval b`, the whole period `[0, b]`.
    FullPeriod,
}

#[derive(Clone, Debug)]
pub struct TrigInterpolant<T> {
    period: T,
    coeffs: Vec<Complex<T>>,
}

/// `2 pi k / m` reduced exactly to `[0, 2 pi)`.
fn root_angle<T: Real>(k: usize, m: usize) -> T {
    T::TAU() * T::of(k % m) / T::of(m)
}

/// Whether `fft` is accurate enough for `T`; its twiddles are `f64`.
fn fast_transform_ok<T: Real>() -> bool {
    T::epsilon() >= T::lit(f64::EPSILON / 2.0)
}

/// Unnormalized DFT with sign `-1` (forward) or `+1` (inverse).
fn dft<T: Real>(data: &mut [Complex<T>], inverse: bool) {
    let m = data.len();
    if fast_transform_ok::<T>() {
        let direction = if inverse { FftDirection::Inverse } else { FftDirection::Forward };
        FftPlanner::new().plan_fft(m, direction).process(data);
        return;
    }
    let sign = if inverse { T::one() } else { -T::one() };
    let out: Vec<Complex<T>> = (0..m)
        .map(|k| {
            data.iter()
                .enumerate()
                .map(|(j, &v)| {
                    let (s, c) = root_angle::<T>(j * k, m).sin_cos();
                    v * Complex::new(c, sign * s)
                })
                .fold(Complex::new(T::zero(), T::zero()), |a, b| a + b)
        })
        .collect();
    data.copy_from_slice(&out);
}

impl<T: Real> TrigInterpolant<T> {
    /// Fits the interpolant to `values[j] = g(j b / N)`, `N = values.len()`.
    pub fn new(values: &[T], period: T) -> Result<Self> {
        let n = values.len();
        if n == 0 || n % 2 == 1 {
            return domain(format!("trigonometric interpolation needs an even sample count, got {n}"));
        }
        if !(period > T::zero() && period.is_finite()) {
            return domain("period must be positive");
        }
        let mut data: Vec<Complex<T>> = values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        dft(&mut data, false);
        let scale = T::of(n).recip();
        let half = n / 2;
        // reorder to l = -N/2 .. N/2-1
        let coeffs = (0..n).map(|i| data[(i + half) % n] * scale).collect();
        Ok(Self { period, coeffs })
    }

    pub fn period(&self) -> T {
        self.period
    }

    /// Sample count `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients ordered `l = -N/2 .. N/2-1`.
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Coefficient `c_l` for `-N/2 <= l < N/2`.
    pub fn coeff(&self, l: isize) -> Complex<T> {
        let half = (self.len() / 2) as isize;
        assert!(-half <= l && l < half, "mode {l} outside -{half}..{half}");
        self.coeffs[(l + half) as usize]
    }

    /// Value at `x` together with the imaginary residue of the symmetric sum.
    pub fn eval_with_residue(&self, x: T) -> (T, T) {
        let half = self.len() / 2;
        let t = x / self.period;
        let mut re = self.coeff(0).re;
        let mut im = self.coeff(0).im;
        for l in 1..half {
            let frac = (T::of(l) * t).fract();
            let (s, c) = (T::TAU() * frac).sin_cos();
            let e = Complex::new(c, s);
            let pair = self.coeff(l as isize) * e + self.coeff(-(l as isize)) * e.conj();
            re += pair.re;
            im += pair.im;
        }
        let edge = self.coeff(-(half as isize));
        let cos_edge = (T::TAU() * (T::of(self.len() / 2) * t).fract()).cos();
        re += edge.re * cos_edge;
        im += edge.im * cos_edge;
        (re, im)
    }

    pub fn eval(&self, x: T) -> T {
        self.eval_with_residue(x).0
    }

    /// Values at `z_j = j / n_eval` over `window`, using the zero-padded
    /// inverse transform when `n_eval b` is an integer.
    pub fn eval_fine_grid(&self, n_eval: usize, window: GridWindow) -> Result<Vec<T>> {
        self.check_fine_grid(n_eval)?;
        match self.padded_size(n_eval) {
            Some(m) => Ok(self.padded_eval(m, n_eval, window)),
            None => self.eval_fine_grid_pointwise(n_eval, window),
        }
    }

    /// Same points as [`Self::eval_fine_grid`], always by direct summation.
    pub fn eval_fine_grid_pointwise(&self, n_eval: usize, window: GridWindow) -> Result<Vec<T>> {
        self.check_fine_grid(n_eval)?;
        let last = self.window_end(n_eval, window);
        let step = T::of(n_eval).recip();
        Ok((0..=last).map(|j| self.eval(T::of(j) * step)).collect())
    }

    /// Size `n_eval b` of the padded transform, when it is an integer.
    pub fn padded_size(&self, n_eval: usize) -> Option<usize> {
        let m = T::of(n_eval) * self.period;
        let rounded = m.round();
        let tol = T::lit(1e-9) * m;
        ((m - rounded).abs() <= tol).then(|| rounded.to_usize()).flatten()
    }

    fn check_fine_grid(&self, n_eval: usize) -> Result<()> {
        if n_eval < self.len() {
            return domain(format!(
                "fine grid size {n_eval} is below the sample count {}",
                self.len()
            ));
        }
        Ok(())
    }

    fn window_end(&self, n_eval: usize, window: GridWindow) -> usize {
        match window {
            GridWindow::Unit => n_eval,
            GridWindow::FullPeriod => (T::of(n_eval) * self.period).floor().to_usize().unwrap_or(n_eval),
        }
    }

    fn padded_eval(&self, m: usize, n_eval: usize, window: GridWindow) -> Vec<T> {
        let n = self.len();
        let half = n / 2;
        let zero = Complex::new(T::zero(), T::zero());
        let mut spec = vec![zero; m];
        for l in 1 - half as isize..half as isize {
            spec[l.rem_euclid(m as isize) as usize] = self.coeff(l);
        }
        let edge = self.coeff(-(half as isize));
        if m == n {
            spec[half] = edge;
        } else {
            let split = edge * T::lit(0.5);
            spec[half] += split;
            spec[m - half] += split;
        }
        dft(&mut spec, true);
        let last = self.window_end(n_eval, window);
        (0..=last).map(|k| spec[k % m].re).collect()
    }

    /// `(l, re, im)` rows in increasing `l`.
    pub fn coefficient_rows(&self) -> Vec<(isize, T, T)> {
        let half = (self.len() / 2) as isize;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (i as isize - half, c.re, c.im))
            .collect()
    }

    pub fn write_coefficients_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "l,re,im")?;
        for (l, re, im) in self.coefficient_rows() {
            writeln!(out, "{l},{:.16e},{:.16e}", re.to_f64_lossy(), im.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Fits the interpolant to continued samples on their period.
pub fn fit<T: Real>(samples: &ContinuedSamples<T>) -> Result<TrigInterpolant<T>> {
    TrigInterpolant::new(samples.values(), samples.period())
}

/// Cardinal function `L_j(x)` for `N = n + C + 1` equispaced nodes of spacing
/// `1/n`: `(1/N) (sin(pi (N-1) u / N) / sin(pi u / N) + cos(pi u))` with
/// `u = j - n x`, equal to 1 whenever `u` is a multiple of `N`.
pub fn kernel_l<T: Real>(j: usize, n: usize, c: usize, x: T) -> Result<T> {
    let big_n = n + c + 1;
    if big_n % 2 == 1 {
        return domain(format!("n + C = {} must be odd", n + c));
    }
    let u = T::of(j) - T::of(n) * x;
    let q = u / T::of(big_n);
    // N even: shifting u by multiples of N leaves every term unchanged
    let r = q - q.round();
    if r == T::zero() {
        return Ok(T::one());
    }
    let pr = T::PI() * r;
    let ratio = (pr * T::of(big_n - 1)).sin() / pr.sin();
    Ok((ratio + (pr * T::of(big_n)).cos()) / T::of(big_n))
}
