//! Blend-to-zero continuation by least-squares trigonometric fitting.
//!
//! Each left Gram polynomial is extended by a trigonometric polynomial
//! `phi_l(z) = sum_{k=-M}^{M} a_k e^{2 pi i k z / P}` of period `P` (in units
//! of `h`) that matches `p~_l^L(z / s)` on the refined matching grid and
//! vanishes on the refined zero grid. All positions are measured in units of
//! `h`, so the fitted coefficients do not depend on `h` and can be cached.
//!
//! Solves run in `f64`.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::continuation::{ContinuedSamples, FcParams};
use crate::error::{domain, FcError, Result};
use crate::gram_basis::GramBasis;
use crate::scalar::Real;

pub const DEFAULT_N_OVER: usize = 20;
pub const DEFAULT_Z: usize = 12;
pub const DEFAULT_SVD_CUTOFF: f64 = 1e-12;

type C64 = Complex<f64>;

/// How the refined zero grid is laid out.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ZeroRows {
    /// `(d-1)s + C + j s / n_over` for `j = 1..=Z n_over`.
    #[default]
    Listed,
    /// `ds + C + j s / n_over` for `j = 0..=(Z-1) n_over`, i.e. the coarse
    /// zero nodes and the points between them.
    CoarseSpan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LsGrid {
    pub d: usize,
    pub s: usize,
    pub c: usize,
    pub z: usize,
    pub e: usize,
    pub n_over: usize,
    pub zero_rows: ZeroRows,
}

impl LsGrid {
    /// Grid with `Z = 12`, `E = C`, `n_over = 20`.
    pub fn with_defaults(d: usize, s: usize, c: usize) -> Result<Self> {
        Self::new(d, s, c, DEFAULT_Z.max(d), c, DEFAULT_N_OVER)
    }

    pub fn new(d: usize, s: usize, c: usize, z: usize, e: usize, n_over: usize) -> Result<Self> {
        let grid = Self { d, s, c, z, e, n_over, zero_rows: ZeroRows::default() };
        grid.validate()?;
        Ok(grid)
    }

    pub fn with_zero_rows(mut self, rows: ZeroRows) -> Self {
        self.zero_rows = rows;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return domain("matching count d must be at least 2");
        }
        if self.s == 0 || self.n_over == 0 {
            return domain("s and n_over must be positive");
        }
        if self.z < self.d {
            return domain(format!("zero count Z={} must be at least d={}", self.z, self.d));
        }
        Ok(())
    }

    /// Period `P = (d+Z-1)s + C + E + 1` in units of `h`.
    pub fn period(&self) -> usize {
        (self.d + self.z - 1) * self.s + self.c + self.e + 1
    }

    /// Refined matching nodes, as multiples of `h / n_over`.
    pub fn match_nodes(&self) -> Vec<usize> {
        (0..=(self.d - 1) * self.n_over).map(|j| j * self.s).collect()
    }

    /// Refined zero nodes, as multiples of `h / n_over`.
    pub fn zero_nodes(&self) -> Vec<usize> {
        let base = self.c * self.n_over;
        match self.zero_rows {
            ZeroRows::Listed => (1..=self.z * self.n_over)
                .map(|j| base + ((self.d - 1) * self.n_over + j) * self.s)
                .collect(),
            ZeroRows::CoarseSpan => (0..=(self.z - 1) * self.n_over)
                .map(|j| base + (self.d * self.n_over + j) * self.s)
                .collect(),
        }
    }

    fn cache_name(&self, m: usize, cutoff: f64) -> String {
        let rows = match self.zero_rows {
            ZeroRows::Listed => "listed",
            ZeroRows::CoarseSpan => "span",
        };
        format!(
            "ls_d{}_s{}_C{}_Z{}_E{}_o{}_M{}_cut{:e}_{rows}.csv",
            self.d, self.s, self.c, self.z, self.e, self.n_over, m, cutoff
        )
    }
}

/// The stacked system `[A; B] a = [alpha_l; 0]`.
#[derive(Clone, Debug)]
pub struct LsSystem {
    pub grid: LsGrid,
    pub m: usize,
    /// Rows at the refined matching nodes.
    pub a: DMatrix<C64>,
    /// Rows at the refined zero nodes.
    pub b: DMatrix<C64>,
    /// `alpha[l][j] = p~_l^L(j / n_over)`.
    pub alpha: Vec<Vec<f64>>,
}

/// `e^{2 pi i k q / (P n_over)}` with the exponent reduced exactly.
fn mode(k: isize, q: usize, denom: usize) -> C64 {
    let r = (k * q as isize).rem_euclid(denom as isize) as f64;
    let (s, c) = (std::f64::consts::TAU * r / denom as f64).sin_cos();
    C64::new(c, s)
}

fn mode_rows(nodes: &[usize], m: usize, denom: usize) -> DMatrix<C64> {
    let cols = 2 * m + 1;
    DMatrix::from_fn(nodes.len(), cols, |i, col| mode(col as isize - m as isize, nodes[i], denom))
}

/// Assembles the least-squares system for modes `k = -M..M`.
pub fn build_ls_system(grid: &LsGrid, m: usize) -> Result<LsSystem> {
    grid.validate()?;
    let match_nodes = grid.match_nodes();
    let zero_nodes = grid.zero_nodes();
    let rows = match_nodes.len() + zero_nodes.len();
    if 2 * m + 1 > rows {
        return domain(format!("{} unknowns exceed {rows} equations", 2 * m + 1));
    }
    let denom = grid.period() * grid.n_over;
    let basis = GramBasis::<f64>::new(grid.d)?;
    let alpha = (0..grid.d)
        .map(|l| {
            let p = &basis.scaled_left()[l];
            (0..match_nodes.len())
                .map(|j| p.eval(j as f64 / grid.n_over as f64))
                .collect()
        })
        .collect();
    Ok(LsSystem {
        grid: *grid,
        m,
        a: mode_rows(&match_nodes, m, denom),
        b: mode_rows(&zero_nodes, m, denom),
        alpha,
    })
}

#[derive(Clone, Debug)]
pub struct LsExtension {
    m: usize,
    coeffs: Vec<C64>,
    period: f64,
    match_residual: f64,
    zero_residual: f64,
}

impl LsExtension {
    pub fn from_coeffs(coeffs: Vec<C64>, period: f64) -> Result<Self> {
        if coeffs.len() % 2 == 0 {
            return domain("coefficient list must have odd length 2M+1");
        }
        Ok(Self { m: coeffs.len() / 2, coeffs, period, match_residual: f64::NAN, zero_residual: f64::NAN })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `a_k` for `k = -M..M`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Period in units of `h`.
    pub fn period(&self) -> f64 {
        self.period
    }

    /// Max deviation from `p~_l^L` on the refined matching grid.
    pub fn match_residual(&self) -> f64 {
        self.match_residual
    }

    /// Max magnitude on the refined zero grid.
    pub fn zero_residual(&self) -> f64 {
        self.zero_residual
    }

    /// `phi(z)` with `z` in units of `h`.
    pub fn eval(&self, z: f64) -> C64 {
        let t = z / self.period;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = i as f64 - self.m as f64;
                let (s, c) = (std::f64::consts::TAU * (k * t).fract()).sin_cos();
                a * C64::new(c, s)
            })
            .sum()
    }

    fn set_residuals(&mut self, system: &LsSystem, l: usize) {
        let a = DMatrix::from_column_slice(self.coeffs.len(), 1, &self.coeffs);
        let fitted = &system.a * &a;
        self.match_residual = fitted
            .iter()
            .zip(&system.alpha[l])
            .map(|(v, &want)| (v - want).norm())
            .fold(0.0, f64::max);
        self.zero_residual = (&system.b * &a).iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
}

/// Minimum-norm least-squares solutions for every Gram index, discarding
/// singular values below `svd_cutoff * sigma_max`.
pub fn solve_all(system: &LsSystem, svd_cutoff: f64) -> Result<Vec<LsExtension>> {
    if !(svd_cutoff > 0.0 && svd_cutoff < 1.0) {
        return domain("SVD cutoff must lie in (0, 1)");
    }
    let d = system.grid.d;
    let (ra, rb) = (system.a.nrows(), system.b.nrows());
    let cols = system.a.ncols();
    let stacked = DMatrix::from_fn(ra + rb, cols, |i, j| {
        if i < ra {
            system.a[(i, j)]
        } else {
            system.b[(i - ra, j)]
        }
    });
    let rhs = DMatrix::from_fn(ra + rb, d, |i, l| {
        if i < ra {
            C64::new(system.alpha[l][i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let svd = stacked.svd(true, true);
    let sigma_max = svd.singular_values.max();
    if !(sigma_max > 0.0) {
        return Err(FcError::Numerical("least-squares matrix has no nonzero singular value".into()));
    }
    let sol = svd
        .solve(&rhs, svd_cutoff * sigma_max)
        .map_err(|e| FcError::Numerical(e.to_string()))?;
    let period = system.grid.period() as f64;
    Ok((0..d)
        .map(|l| {
            let mut ext = LsExtension {
                m: system.m,
                coeffs: sol.column(l).iter().copied().collect(),
                period,
                match_residual: f64::NAN,
                zero_residual: f64::NAN,
            };
            ext.set_residuals(system, l);
            ext
        })
        .collect())
}

/// Least-squares extension of the Gram polynomial of index `l`.
pub fn solve_ls_extension(system: &LsSystem, l: usize, svd_cutoff: f64) -> Result<LsExtension> {
    if l >= system.grid.d {
        return domain(format!("Gram index {l} out of range for d={}", system.grid.d));
    }
    Ok(solve_all(system, svd_cutoff)?.swap_remove(l))
}

/// Default mode half-count `M = d + Z`.
pub fn default_m(grid: &LsGrid) -> usize {
    grid.d + grid.z
}

fn write_cache(path: &Path, exts: &[LsExtension]) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(out, "ell,k,re,im")?;
    for (l, ext) in exts.iter().enumerate() {
        for (i, a) in ext.coeffs.iter().enumerate() {
            let k = i as isize - ext.m as isize;
            writeln!(out, "{l},{k},{:.16e},{:.16e}", a.re, a.im)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn parse_err(line: usize, what: &str) -> FcError {
    FcError::Parse(format!("coefficient cache line {line}: {what}"))
}

/// Reads an `(ell, k, re, im)` coefficient table.
pub fn read_cache(path: &Path, d: usize, m: usize) -> Result<Vec<Vec<C64>>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let mut table = vec![vec![C64::new(f64::NAN, f64::NAN); 2 * m + 1]; d];
    for (i, line) in reader.lines().enumerate().skip(1) {
        let line = line?;
        let fields: Vec<&str> = line.trim().split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(i + 1, "expected 4 fields"));
        }
        let l: usize = fields[0].parse().map_err(|_| parse_err(i + 1, "bad ell"))?;
        let k: isize = fields[1].parse().map_err(|_| parse_err(i + 1, "bad k"))?;
        let re: f64 = fields[2].parse().map_err(|_| parse_err(i + 1, "bad re"))?;
        let im: f64 = fields[3].parse().map_err(|_| parse_err(i + 1, "bad im"))?;
        let idx = k + m as isize;
        if l >= d || idx < 0 || idx as usize > 2 * m {
            return Err(parse_err(i + 1, "index out of range"));
        }
        table[l][idx as usize] = C64::new(re, im);
    }
    if table.iter().flatten().any(|c| c.re.is_nan()) {
        return Err(FcError::Parse("coefficient cache is incomplete".into()));
    }
    Ok(table)
}

/// Solves the system, or loads a previous solution from `cache_dir`.
pub fn load_or_solve(grid: &LsGrid, m: usize, svd_cutoff: f64, cache_dir: Option<&Path>) -> Result<Vec<LsExtension>> {
    let system = build_ls_system(grid, m)?;
    let path: Option<PathBuf> = cache_dir.map(|dir| dir.join(grid.cache_name(m, svd_cutoff)));
    if let Some(path) = path.as_deref().filter(|p| p.exists()) {
        let table = read_cache(path, grid.d, m)?;
        let period = grid.period() as f64;
        return table
            .into_iter()
            .enumerate()
            .map(|(l, coeffs)| {
                let mut ext = LsExtension::from_coeffs(coeffs, period)?;
                ext.set_residuals(&system, l);
                Ok(ext)
            })
            .collect();
    }
    let exts = solve_all(&system, svd_cutoff)?;
    if let Some(path) = path {
        write_cache(&path, &exts)?;
    }
    Ok(exts)
}

/// Continued samples from the least-squares extensions (requires `E = C`).
/// The real part of the extension is kept; the largest discarded imaginary
/// part is recorded on the result.
pub fn classic_continue<T: Real>(
    f_samples: &[T],
    params: &FcParams,
    ls: &[LsExtension],
) -> Result<ContinuedSamples<T>> {
    let grid = params
        .ls_grid()
        .ok_or_else(|| FcError::Domain("least-squares continuation needs an LsGrid".into()))?;
    let (n, d, s, c) = (params.n(), params.d(), params.s(), params.c());
    if grid.e != c || grid.c != c || grid.d != d || grid.s != s {
        return domain("LsGrid must use the continuation's d, s, C and E = C");
    }
    if ls.len() != d {
        return domain(format!("expected {d} least-squares extensions, got {}", ls.len()));
    }
    params.check_samples(f_samples)?;
    let basis = GramBasis::<T>::new(d)?;
    let left: Vec<T> = (0..d).map(|j| f_samples[s * j]).collect();
    let right: Vec<T> = (0..d).map(|j| f_samples[n - s * j]).collect();
    let cl = basis.project_left(&left)?;
    let cr = basis.project_right(&right)?;

    let shift_r = ((d - 1) * s) as f64;
    let shift_l = ((d - 1 + grid.z) * s + c) as f64;
    let mut values = f_samples.to_vec();
    let mut imag = 0.0f64;
    for j in n + 1..=n + c {
        let offset = (j - n) as f64;
        let mut acc = C64::new(0.0, 0.0);
        for l in 0..d {
            acc += ls[l].eval(offset + shift_r) * cr[l].to_f64_lossy();
            acc += ls[l].eval(offset + shift_l) * cl[l].to_f64_lossy();
        }
        imag = imag.max(acc.im.abs());
        values.push(T::lit(acc.re));
    }
    ContinuedSamples::new(values, params).map(|cs| cs.with_imag_residue(imag))
}
