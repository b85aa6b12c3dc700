//! Two-point Hermite blending and the explicit extensions built from it.
//!
//! `p_m^{u1,u2}` is the degree `2r+1` polynomial whose derivatives of order
//! `0..=r` at `u1` are `delta_{jm}` and which vanishes to order `r` at `u2`.
//! Throughout the crate the matching order is `r = d - 1`, so extensions
//! agree with their source through derivative `d - 1`.

use crate::error::{domain, Result};
use crate::gram_basis::GramBasis;
use crate::polynomial::Polynomial;
use crate::scalar::{binomial, factorial, Real};

/// Largest supported matching order.
pub const MAX_HERMITE_ORDER: usize = 9;

#[derive(Clone, Debug)]
pub struct HermiteBasis<T> {
    r: usize,
    u1: T,
    u2: T,
    basis: Vec<Polynomial<T>>,
}

fn power<T: Real>(p: &Polynomial<T>, k: usize) -> Polynomial<T> {
    (0..k).fold(Polynomial::centered(vec![T::one()], *p.center()), |acc, _| &acc * p)
}

impl<T: Real> HermiteBasis<T> {
    /// Expands
    /// `p_m(u) = (u-u1)^m / m! * ((u-u2)/(u1-u2))^{r+1} * sum_{l=0}^{r-m} C(r+l, r) ((u-u1)/(u2-u1))^l`
    /// about the midpoint of `[u1, u2]`.
    pub fn new(r: usize, u1: T, u2: T) -> Result<Self> {
        if r > MAX_HERMITE_ORDER {
            return domain(format!("Hermite order r={r} exceeds {MAX_HERMITE_ORDER}"));
        }
        if !(u1.is_finite() && u2.is_finite()) || u1 == u2 {
            return domain("Hermite end points must be finite and distinct");
        }
        let mid = (u1 + u2) / T::lit(2.0);
        // (u - a) expanded about the midpoint
        let linear = |a: T| Polynomial::centered(vec![mid - a, T::one()], mid);
        let from_u1 = linear(u1);
        let toward_u2 = power(&linear(u2).scale((u1 - u2).recip()), r + 1);
        let ratio = from_u1.scale((u2 - u1).recip());

        let basis = (0..=r)
            .map(|m| {
                // Horner over the binomial series in `ratio`
                let mut series = Polynomial::centered(vec![binomial(2 * r - m, r)], mid);
                for l in (0..r - m).rev() {
                    series = &(&series * &ratio) + &Polynomial::centered(vec![binomial(r + l, r)], mid);
                }
                let lead = power(&from_u1, m).scale(factorial::<T>(m).recip());
                &(&lead * &toward_u2) * &series
            })
            .collect();
        Ok(Self { r, u1, u2, basis })
    }

    pub fn order(&self) -> usize {
        self.r
    }

    pub fn u1(&self) -> T {
        self.u1
    }

    pub fn u2(&self) -> T {
        self.u2
    }

    pub fn polys(&self) -> &[Polynomial<T>] {
        &self.basis
    }

    /// `sum_m values[m] * p_m`: the polynomial matching derivatives
    /// `values[0..=r]` at `u1` and vanishing to order `r` at `u2`.
    pub fn combine(&self, values: &[T]) -> Result<Polynomial<T>> {
        if values.len() != self.r + 1 {
            return domain(format!(
                "Hermite combination needs {} derivative values, got {}",
                self.r + 1,
                values.len()
            ));
        }
        let mut acc = self.basis[0].scale(values[0]);
        for (p, &v) in self.basis.iter().zip(values).skip(1) {
            acc = &acc + &p.scale(v);
        }
        Ok(acc)
    }
}

/// Max over a 1000-point grid of `|p_0^{u1,u2} + p_0^{u2,u1} - 1|`.
pub fn hermite_partition_check<T: Real>(r: usize, u1: T, u2: T) -> Result<T> {
    let fwd = HermiteBasis::new(r, u1, u2)?;
    let rev = HermiteBasis::new(r, u2, u1)?;
    let (lo, hi) = if u1 < u2 { (u1, u2) } else { (u2, u1) };
    let samples = 1000;
    Ok((0..samples)
        .map(|i| {
            let u = lo + (hi - lo) * T::of(i) / T::of(samples - 1);
            (fwd.basis[0].eval(u) + rev.basis[0].eval(u) - T::one()).abs()
        })
        .fold(T::zero(), T::max))
}

/// The pair of Hermite bases used on the extension interval `[1, b]`.
#[derive(Clone, Debug)]
pub struct EndpointHermite<T> {
    /// `p_m^{1,b}`: matches at `x = 1`, vanishes at `x = b`.
    pub at_one: HermiteBasis<T>,
    /// `p_m^{b,1}`: matches at `x = b`, vanishes at `x = 1`.
    pub at_b: HermiteBasis<T>,
}

impl<T: Real> EndpointHermite<T> {
    pub fn new(d: usize, b: T) -> Result<Self> {
        if d == 0 {
            return domain("matching count d must be positive");
        }
        if !(b > T::one()) {
            return domain("period b must exceed 1");
        }
        Ok(Self {
            at_one: HermiteBasis::new(d - 1, T::one(), b)?,
            at_b: HermiteBasis::new(d - 1, b, T::one())?,
        })
    }

    pub fn d(&self) -> usize {
        self.at_one.r + 1
    }
}

fn check_orientation<T: Real>(hb: &HermiteBasis<T>, d: usize, match_at_one: bool) -> Result<()> {
    if hb.r + 1 != d {
        return domain(format!("Hermite order r={} does not match d={d}", hb.r));
    }
    let ok = if match_at_one {
        hb.u1 == T::one() && hb.u2 > T::one()
    } else {
        hb.u2 == T::one() && hb.u1 > T::one()
    };
    if !ok {
        return domain("Hermite basis built on the wrong end points");
    }
    Ok(())
}

/// `p_l^{L,e}(x) = sum_m (p_l^L)^{(m)}(0) p_m^{b,1}(x)`: the explicit
/// continuation of the left Gram polynomial, arriving at `x = b` with the
/// Gram polynomial's data at `x = 0` and vanishing to order `d-1` at `x = 1`.
pub fn left_extension_poly<T: Real>(
    basis: &GramBasis<T>,
    hb_rev: &HermiteBasis<T>,
    l: usize,
    s: usize,
    h: T,
) -> Result<Polynomial<T>> {
    check_orientation(hb_rev, basis.d(), false)?;
    let p = basis.left_poly(l, s, h)?;
    let derivs: Vec<T> = (0..basis.d()).map(|m| p.derivative_at(m, T::zero())).collect();
    hb_rev.combine(&derivs)
}

/// `p_l^{R,e}(x) = sum_m (p_l^R)^{(m)}(1) p_m^{1,b}(x)`.
pub fn right_extension_poly<T: Real>(
    basis: &GramBasis<T>,
    hb_fwd: &HermiteBasis<T>,
    l: usize,
    s: usize,
    h: T,
) -> Result<Polynomial<T>> {
    check_orientation(hb_fwd, basis.d(), true)?;
    let p = basis.right_poly(l, s, h)?;
    let derivs: Vec<T> = (0..basis.d()).map(|m| p.derivative_at(m, T::one())).collect();
    hb_fwd.combine(&derivs)
}

/// Hermite extension built from exact derivatives of `f`:
/// `p_ref(x) = sum_m f^{(m)}(1) p_m^{1,b}(x) + sum_m f^{(m)}(0) p_m^{b,1}(x)`.
pub fn reference_extension<T: Real>(
    f_derivs_0: &[T],
    f_derivs_1: &[T],
    d: usize,
    b: T,
) -> Result<Polynomial<T>> {
    if f_derivs_0.len() != d || f_derivs_1.len() != d {
        return domain(format!("reference extension needs {d} derivatives at each end"));
    }
    let hermite = EndpointHermite::new(d, b)?;
    Ok(&hermite.at_one.combine(f_derivs_1)? + &hermite.at_b.combine(f_derivs_0)?)
}

/// A piecewise polynomial on consecutive intervals.
#[derive(Clone, Debug)]
pub struct PiecewiseExtension<T> {
    breakpoints: Vec<T>,
    pieces: Vec<Polynomial<T>>,
}

impl<T: Real> PiecewiseExtension<T> {
    pub fn new(breakpoints: Vec<T>, pieces: Vec<Polynomial<T>>) -> Result<Self> {
        if breakpoints.len() != pieces.len() + 1 || pieces.is_empty() {
            return domain("piecewise function needs one more breakpoint than pieces");
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return domain("breakpoints must be strictly increasing");
        }
        Ok(Self { breakpoints, pieces })
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial<T>] {
        &self.pieces
    }

    pub fn domain(&self) -> (T, T) {
        (self.breakpoints[0], *self.breakpoints.last().unwrap())
    }

    /// Evaluates piece `i` (its formula, regardless of `x`).
    pub fn eval_piece(&self, i: usize, x: T) -> T {
        self.pieces[i].eval(x)
    }

    /// Value at `x`, or `None` outside the domain. At an interior breakpoint
    /// the piece to the right is used.
    pub fn eval(&self, x: T) -> Option<T> {
        let (lo, hi) = self.domain();
        if x < lo || x > hi {
            return None;
        }
        let i = self.breakpoints.partition_point(|&b| b <= x).saturating_sub(1);
        Some(self.pieces[i.min(self.pieces.len() - 1)].eval(x))
    }
}

/// The four-branch function `phi_l^H` on `[0, (d+C+Z+E) h]` (skipping `s = 1`):
/// the Gram polynomial, a Hermite descent to zero, a zero plateau, and a
/// Hermite ascent that arrives with the Gram polynomial's data at `x = 0`.
pub fn build_phi_h<T: Real>(
    basis: &GramBasis<T>,
    l: usize,
    c: usize,
    z: usize,
    e: usize,
    h: T,
) -> Result<PiecewiseExtension<T>> {
    let d = basis.d();
    if z < 2 {
        return domain("zero plateau (Z-1) h must have positive length");
    }
    let p = basis.left_poly(l, 1, h)?;
    let at = |k: usize| T::of(k) * h;
    let (b1, b2, b3, b4) = (at(d - 1), at(d + c), at(d + c + z - 1), at(d + c + z + e));

    let descent = HermiteBasis::new(d - 1, b1, b2)?;
    let at_b1: Vec<T> = (0..d).map(|m| p.derivative_at(m, b1)).collect();
    let ascent = HermiteBasis::new(d - 1, b4, b3)?;
    let at_0: Vec<T> = (0..d).map(|m| p.derivative_at(m, T::zero())).collect();

    PiecewiseExtension::new(
        vec![T::zero(), b1, b2, b3, b4],
        vec![
            p.clone(),
            descent.combine(&at_b1)?,
            Polynomial::constant(T::zero()),
            ascent.combine(&at_0)?,
        ],
    )
}
