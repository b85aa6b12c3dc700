//! Brute-force reference implementations. Slow and simple on purpose: every
//! fast path in the crate is checked against one of these.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{domain, FcError, Result};
use crate::polynomial::Polynomial;
use crate::scalar::{binomial, Real};

/// Polynomial with exact rational coefficients.
pub type RationalPolynomial = Polynomial<BigRational>;

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn exact_dot(p: &RationalPolynomial, q: &RationalPolynomial, d: usize) -> BigRational {
    (0..d as i64)
        .map(|u| p.eval(rational(u)) * q.eval(rational(u)))
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Exact inner product `sum_{u=0}^{d-1} p(u) q(u)`.
pub fn discrete_inner(p: &RationalPolynomial, q: &RationalPolynomial, d: usize) -> BigRational {
    exact_dot(p, q, d)
}

/// Unnormalised Gram polynomials on the nodes `0..d-1` by exact
/// Gram-Schmidt of the monomials, expanded about 0.
pub fn exact_gram_unnormalized(d: usize) -> Result<Vec<RationalPolynomial>> {
    if !(1..=8).contains(&d) {
        return domain(format!("exact Gram-Schmidt supports 1..=8 nodes, got {d}"));
    }
    let mut out: Vec<RationalPolynomial> = Vec::with_capacity(d);
    for l in 0..d {
        let mono = RationalPolynomial::monomial(l, BigRational::zero());
        let mut q = mono.clone();
        for p in &out {
            let coef = exact_dot(&mono, p, d) / exact_dot(p, p, d);
            q = &q - &p.map(|c| c * &coef);
        }
        out.push(q);
    }
    Ok(out)
}

/// Converts an exact polynomial to `f64`, dividing by `sqrt(<q, q>)`.
pub fn normalized_f64(q: &RationalPolynomial, d: usize) -> Polynomial<f64> {
    let norm = exact_dot(q, q, d).to_f64().unwrap_or(f64::NAN).sqrt();
    Polynomial::new(q.coeffs().iter().map(|c| c.to_f64().unwrap_or(f64::NAN) / norm).collect())
}

fn falling(k: usize, j: usize) -> f64 {
    (k - j + 1..=k).map(|v| v as f64).product()
}

/// Hermite basis `p_m^{u1,u2}`, `m = 0..=r`, from a direct solve of the
/// `(2r+2) x (2r+2)` system of derivative conditions. The unknowns are the
/// coefficients about the midpoint.
pub fn hermite_solve_direct(r: usize, u1: f64, u2: f64) -> Result<Vec<Polynomial<f64>>> {
    if r > 6 {
        return domain(format!("direct Hermite solve supports r <= 6, got {r}"));
    }
    if u1 == u2 {
        return domain("Hermite end points must differ");
    }
    let mid = 0.5 * (u1 + u2);
    let size = 2 * r + 2;
    let mut a = DMatrix::<f64>::zeros(size, size);
    for (block, point) in [u1, u2].into_iter().enumerate() {
        let t = point - mid;
        for j in 0..=r {
            for k in j..size {
                a[(block * (r + 1) + j, k)] = falling(k, j) * t.powi((k - j) as i32);
            }
        }
    }
    let lu = a.lu();
    (0..=r)
        .map(|m| {
            let mut rhs = DVector::<f64>::zeros(size);
            rhs[m] = 1.0;
            let c = lu
                .solve(&rhs)
                .ok_or_else(|| FcError::Numerical("singular Hermite system".into()))?;
            Ok(Polynomial::centered(c.iter().copied().collect(), mid))
        })
        .collect()
}

/// `c_l = (1/N) sum_j f_j exp(-2 pi i l j / N)`, `l = -N/2 .. N/2-1`.
pub fn naive_dft<T: Real>(samples: &[T]) -> Vec<Complex<T>> {
    let n = samples.len();
    let half = (n / 2) as isize;
    (-half..n as isize - half)
        .map(|l| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for (j, &f) in samples.iter().enumerate() {
                let k = (l * j as isize).rem_euclid(n as isize) as usize;
                let angle = -T::TAU() * T::of(k) / T::of(n);
                acc += Complex::new(angle.cos(), angle.sin()) * f;
            }
            acc / T::of(n)
        })
        .collect()
}

/// `sum_j f_j L_j(x)` with each cardinal function summed mode by mode,
/// `L_j = (1/N) (1 + 2 sum_{l=1}^{N/2-1} cos(2 pi l u / N) + cos(pi u))`,
/// `u = j - n x`, for samples on `x_j = j/n`, `j = 0..N-1`.
pub fn kernel_interp<T: Real>(samples: &[T], n: usize, x: T) -> Result<T> {
    let big_n = samples.len();
    if big_n % 2 == 1 || n == 0 {
        return domain("kernel interpolation needs an even sample count and n > 0");
    }
    let mut acc = T::zero();
    for (j, &f) in samples.iter().enumerate() {
        let u = T::of(j) - T::of(n) * x;
        let mut s = T::one() + (T::PI() * u).cos();
        for l in 1..big_n / 2 {
            s += T::lit(2.0) * (T::TAU() * T::of(l) * u / T::of(big_n)).cos();
        }
        acc += f * s / T::of(big_n);
    }
    Ok(acc)
}

/// `f^{(m)}(x)` by the centred difference of order 2 with one Richardson
/// step: `(4 D_{step/2} - D_step) / 3`.
pub fn fd_derivative(f: impl Fn(f64) -> f64, x: f64, m: usize, step: f64) -> f64 {
    let central = |h: f64| {
        let mut acc = 0.0;
        for k in 0..=m {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let offset = (m as f64 / 2.0 - k as f64) * h;
            acc += sign * binomial::<f64>(m, k) * f(x + offset);
        }
        acc / h.powi(m as i32)
    };
    if m == 0 {
        return f(x);
    }
    (4.0 * central(step / 2.0) - central(step)) / 3.0
}

/// Exact `q(u)` at an integer, for display and tests.
pub fn eval_at_integer(q: &RationalPolynomial, u: i64) -> BigRational {
    q.eval(rational(u))
}

/// The exact leading coefficient; monic polynomials return one.
pub fn leading(q: &RationalPolynomial) -> BigRational {
    q.coeffs().last().cloned().unwrap_or_else(BigRational::one)
}
