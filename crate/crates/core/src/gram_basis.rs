//! Discrete-orthonormal Gram polynomials at the two ends of `[0, 1]`.
//!
//! The basis is built once in the scaled variable `u = x / (s h)` on the
//! integer nodes `u = 0, ..., d-1`; the physical left and right polynomials
//! are obtained by an affine change of variable, so one [`GramBasis`] serves
//! every grid spacing and skipping stride.
//!
//! Internally the scaled polynomials are expanded about the node midpoint
//! `(d-1)/2`, which keeps the coefficients small up to `d = 10`.

use crate::error::{domain, Result};
use crate::polynomial::Polynomial;
use crate::scalar::Real;

/// Largest supported node count. Beyond it double precision Gram-Schmidt on
/// equispaced nodes stops holding orthonormality to working accuracy.
pub const MAX_GRAM_NODES: usize = 10;

#[derive(Clone, Debug)]
pub struct GramBasis<T> {
    d: usize,
    scaled_left: Vec<Polynomial<T>>,
    scaled_right: Vec<Polynomial<T>>,
    // node_values[l][j] = p~_l^L(j)
    node_values: Vec<Vec<T>>,
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

impl<T: Real> GramBasis<T> {
    /// Builds the `d` scaled left Gram polynomials by classical Gram-Schmidt
    /// followed by one modified Gram-Schmidt re-orthogonalisation sweep.
    pub fn new(d: usize) -> Result<Self> {
        if !(2..=MAX_GRAM_NODES).contains(&d) {
            return domain(format!("Gram basis size d={d} outside 2..={MAX_GRAM_NODES}"));
        }
        let mid = T::of(d - 1) / T::lit(2.0);
        let nodes: Vec<T> = (0..d).map(T::of).collect();
        let values = |p: &Polynomial<T>| nodes.iter().map(|&u| p.eval(u)).collect::<Vec<_>>();

        let mut basis: Vec<Polynomial<T>> = Vec::with_capacity(d);
        let mut node_values: Vec<Vec<T>> = Vec::with_capacity(d);
        for l in 0..d {
            let start = Polynomial::monomial(l, mid);
            let start_vals = values(&start);
            // classical pass: all projections taken against the raw monomial
            let mut q = start;
            for (p, pv) in basis.iter().zip(&node_values) {
                q = &q - &p.scale(dot(&start_vals, pv));
            }
            // re-orthogonalisation sweep
            for (p, pv) in basis.iter().zip(&node_values) {
                let r = dot(&values(&q), pv);
                q = &q - &p.scale(r);
            }
            let qv = values(&q);
            let norm = dot(&qv, &qv).sqrt();
            let p = q.scale(norm.recip());
            node_values.push(values(&p));
            basis.push(p);
        }

        let shift = T::of(d - 1);
        let scaled_right = basis
            .iter()
            .map(|p| Polynomial::centered(p.coeffs().to_vec(), *p.center() - shift))
            .collect();
        Ok(Self { d, scaled_left: basis, scaled_right, node_values })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `p~_l^L(u)`, orthonormal on the nodes `u = 0..d-1`.
    pub fn scaled_left(&self) -> &[Polynomial<T>] {
        &self.scaled_left
    }

    /// `p~_l^R(u) = p~_l^L(u + d - 1)`, orthonormal on `u = -(d-1)..0`.
    pub fn scaled_right(&self) -> &[Polynomial<T>] {
        &self.scaled_right
    }

    /// `p~_l^L(j)` for `j = 0..d-1`.
    pub fn node_values(&self, l: usize) -> &[T] {
        &self.node_values[l]
    }

    fn check(&self, l: usize, s: usize, h: T) -> Result<()> {
        if l >= self.d {
            return domain(format!("Gram index {l} out of range for d={}", self.d));
        }
        if s == 0 {
            return domain("skipping parameter s must be at least 1");
        }
        if !(h > T::zero() && h.is_finite()) {
            return domain("grid spacing h must be positive");
        }
        Ok(())
    }

    /// Left Gram polynomial `p_l^L(x) = p~_l^L(x / (s h))` in the variable `x`.
    pub fn left_poly(&self, l: usize, s: usize, h: T) -> Result<Polynomial<T>> {
        self.check(l, s, h)?;
        let sh = T::of(s) * h;
        let p = &self.scaled_left[l];
        Ok(p.substitute_affine(*p.center() * sh, sh))
    }

    /// Right Gram polynomial `p_l^R(x) = p_l^L(x - 1 + (d-1) s h)`; its value at
    /// `x = 1 - (d-1-j) s h` equals `p~_l^L(j)`.
    pub fn right_poly(&self, l: usize, s: usize, h: T) -> Result<Polynomial<T>> {
        self.check(l, s, h)?;
        let sh = T::of(s) * h;
        let p = &self.scaled_right[l];
        Ok(p.substitute_affine(T::one() + *p.center() * sh, sh))
    }

    /// Coefficients `<f, p_l^L>_L` from samples `f(x_{s j})`, `j = 0..d-1`.
    pub fn project_left(&self, f_nodes: &[T]) -> Result<Vec<T>> {
        self.check_len(f_nodes)?;
        Ok(self.node_values.iter().map(|pv| dot(f_nodes, pv)).collect())
    }

    /// Coefficients `<f, p_l^R>_R` from samples `f(x_{n - s j})`, `j = 0..d-1`
    /// (entry `j` is the `j`-th node counted inward from `x = 1`).
    pub fn project_right(&self, f_nodes: &[T]) -> Result<Vec<T>> {
        self.check_len(f_nodes)?;
        Ok(self
            .node_values
            .iter()
            .map(|pv| f_nodes.iter().zip(pv.iter().rev()).map(|(&f, &p)| f * p).sum())
            .collect())
    }

    fn check_len(&self, f_nodes: &[T]) -> Result<()> {
        if f_nodes.len() != self.d {
            return domain(format!(
                "expected {} node samples, got {}",
                self.d,
                f_nodes.len()
            ));
        }
        Ok(())
    }

    /// The projection `P_d^L f = sum_l c_l p_l^L` as a single polynomial.
    pub fn left_projection(&self, coeffs: &[T], s: usize, h: T) -> Result<Polynomial<T>> {
        self.combine(coeffs, |l| self.left_poly(l, s, h))
    }

    /// The projection `P_d^R f = sum_l c_l p_l^R` as a single polynomial.
    pub fn right_projection(&self, coeffs: &[T], s: usize, h: T) -> Result<Polynomial<T>> {
        self.combine(coeffs, |l| self.right_poly(l, s, h))
    }

    fn combine(
        &self,
        coeffs: &[T],
        poly: impl Fn(usize) -> Result<Polynomial<T>>,
    ) -> Result<Polynomial<T>> {
        self.check_len(coeffs)?;
        let mut acc = poly(0)?.scale(coeffs[0]);
        for (l, &c) in coeffs.iter().enumerate().skip(1) {
            acc = &acc + &poly(l)?.scale(c);
        }
        Ok(acc)
    }

    #[cfg(feature = "oracle")]
    pub(crate) fn perturb(&mut self, l: usize, k: usize, delta: T) {
        let p = &self.scaled_left[l];
        let mut c = p.coeffs().to_vec();
        c[k] += delta;
        self.scaled_left[l] = Polynomial::centered(c, *p.center());
        let nodes: Vec<T> = (0..self.d).map(T::of).collect();
        self.node_values[l] = nodes.iter().map(|&u| self.scaled_left[l].eval(u)).collect();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::double_double::DoubleDouble;
    use proptest::prelude::*;

    fn gram_matrix_error<T: Real>(basis: &GramBasis<T>) -> f64 {
        let d = basis.d();
        let mut worst = 0.0f64;
        for k in 0..d {
            for l in 0..d {
                let g: T = dot(basis.node_values(k), basis.node_values(l));
                let delta = if k == l { T::one() } else { T::zero() };
                worst = worst.max((g - delta).abs().to_f64_lossy());
            }
        }
        worst
    }

    #[test]
    fn rejects_out_of_range_sizes() {
        assert!(GramBasis::<f64>::new(1).is_err());
        assert!(GramBasis::<f64>::new(11).is_err());
        assert!(GramBasis::<f64>::new(10).is_ok());
    }

    #[test]
    fn first_polynomials_match_closed_forms() {
        let b = GramBasis::<f64>::new(6).unwrap();
        let p0 = &b.scaled_left()[0];
        assert!((p0.eval(3.7) - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        let p1 = &b.scaled_left()[1];
        for u in [0.0, 1.3, 5.0] {
            let expected = (12.0f64 / 210.0).sqrt() * (u - 2.5);
            assert!((p1.eval(u) - expected).abs() < 1e-14);
        }
        let b3 = GramBasis::<f64>::new(3).unwrap();
        let p2 = &b3.scaled_left()[2];
        let norm = (5.0f64 / (3.0 * 8.0 * 5.0)).sqrt();
        for u in [0.0, 0.5, 2.0, 3.1] {
            let expected = norm * (6.0 * u * u - 12.0 * u + 2.0);
            assert!((p2.eval(u) - expected).abs() < 1e-14);
        }
        let sq: f64 = (0..3).map(|j| p2.eval(j as f64).powi(2)).sum();
        assert!((sq - 1.0).abs() < 1e-14);
    }

    #[test]
    fn degrees_are_exact() {
        let b = GramBasis::<f64>::new(7).unwrap();
        for (l, p) in b.scaled_left().iter().enumerate() {
            assert_eq!(p.degree(), l);
            assert!(p.coeffs()[l].abs() > 1e-6);
        }
    }

    #[test]
    fn orthonormal_up_to_seven_nodes() {
        for d in 2..=7 {
            let b = GramBasis::<f64>::new(d).unwrap();
            assert!(gram_matrix_error(&b) <= 1e-11, "d={d}");
        }
    }

    #[test]
    fn orthonormal_in_double_double_up_to_ten_nodes() {
        for d in 2..=10 {
            let b = GramBasis::<DoubleDouble>::new(d).unwrap();
            assert!(gram_matrix_error(&b) <= 1e-28, "d={d}");
        }
    }

    #[test]
    fn right_basis_is_shifted_left_basis() {
        let b = GramBasis::<f64>::new(6).unwrap();
        for l in 0..6 {
            let left = b.scaled_left()[l].recentered(0.0);
            let shifted = b.scaled_right()[l].recentered(-5.0);
            for (x, y) in left.coeffs().iter().zip(shifted.coeffs()) {
                assert!((x - y).abs() <= 1e-11);
            }
            // expanded about 0: p~R(u) equals p~L(u + 5)
            for u in [-5.0, -2.5, 0.0] {
                assert!((b.scaled_right()[l].eval(u) - b.scaled_left()[l].eval(u + 5.0)).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn physical_polynomials() {
        let b = GramBasis::<f64>::new(6).unwrap();
        let h = 1.0 / 32.0;
        let p0 = b.left_poly(0, 1, h).unwrap();
        assert!((p0.eval(0.4) - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        let p1 = b.left_poly(1, 1, h).unwrap();
        for x in [0.0, 0.05, 0.2] {
            let expected = (12.0f64 / 210.0).sqrt() * (32.0 * x - 2.5);
            assert!((p1.eval(x) - expected).abs() < 1e-13);
        }
        let b2 = GramBasis::<f64>::new(2).unwrap();
        let q = b2.left_poly(1, 2, 0.125).unwrap();
        assert!((q.eval(0.25) - b2.scaled_left()[1].eval(1.0)).abs() < 1e-14);

        let r0 = b.right_poly(0, 1, h).unwrap();
        assert!((r0.eval(0.9) - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        let r1 = b.right_poly(1, 1, h).unwrap();
        assert!((r1.eval(1.0) - b.scaled_left()[1].eval(5.0)).abs() < 1e-13);

        assert!(b.left_poly(6, 1, h).is_err());
        assert!(b.right_poly(0, 0, h).is_err());
        assert!(b.left_poly(0, 1, 0.0).is_err());
    }

    #[test]
    fn right_polynomials_orthonormal_on_right_nodes() {
        let b = GramBasis::<f64>::new(3).unwrap();
        let n = 16;
        let h = 1.0 / n as f64;
        let p2 = b.right_poly(2, 1, h).unwrap();
        let sq: f64 = (0..3).map(|j| p2.eval((n - j) as f64 * h).powi(2)).sum();
        assert!((sq - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_examples() {
        let b = GramBasis::<f64>::new(6).unwrap();
        let c = b.project_left(&[1.0; 6]).unwrap();
        assert!((c[0] - 6f64.sqrt()).abs() < 1e-14);
        assert!(c[1..].iter().all(|v| v.abs() < 1e-13));
        let c = b.project_right(&[1.0; 6]).unwrap();
        assert!((c[0] - 6f64.sqrt()).abs() < 1e-14);

        let own: Vec<f64> = b.node_values(2).to_vec();
        let c = b.project_left(&own).unwrap();
        for (l, v) in c.iter().enumerate() {
            assert!((v - if l == 2 { 1.0 } else { 0.0 }).abs() < 1e-13);
        }

        // p_1^R sampled at its own nodes, ordered inward from x = 1
        let h = 1.0 / 32.0;
        let r1 = b.right_poly(1, 1, h).unwrap();
        let f: Vec<f64> = (0..6).map(|j| r1.eval(1.0 - j as f64 * h)).collect();
        let c = b.project_right(&f).unwrap();
        for (l, v) in c.iter().enumerate() {
            assert!((v - if l == 1 { 1.0 } else { 0.0 }).abs() < 1e-12);
        }

        assert!(b.project_left(&[1.0; 5]).is_err());
    }

    #[test]
    fn quadratic_data_reconstructed_exactly() {
        // f(u) = u^2 at u = 0..3; reconstruction must reproduce the data
        let b = GramBasis::<f64>::new(4).unwrap();
        let c = b.project_left(&[0.0, 1.0, 4.0, 9.0]).unwrap();
        let p = b.left_projection(&c, 1, 1.0).unwrap();
        for j in 0..4 {
            assert!((p.eval(j as f64) - (j * j) as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetric_data_projects_alike_from_both_ends() {
        // f symmetric about 1/2: right samples inward from 1 equal left samples
        let b = GramBasis::<f64>::new(5).unwrap();
        let h = 1.0 / 20.0;
        let f = |x: f64| (x - 0.5).powi(2).exp();
        let left: Vec<f64> = (0..5).map(|j| f(j as f64 * h)).collect();
        let right: Vec<f64> = (0..5).map(|j| f(1.0 - j as f64 * h)).collect();
        let cl = b.project_left(&left).unwrap();
        let reflected: Vec<f64> = right.iter().rev().copied().collect();
        let cr = b.project_right(&reflected).unwrap();
        for (a, c) in cl.iter().zip(&cr) {
            assert!((a - c).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let b = GramBasis::<f64>::new(6).unwrap();
        let p = &b.scaled_left()[2];
        let step = 1e-5;
        let fd = (p.eval(step) - p.eval(-step)) / (2.0 * step);
        assert!((p.derivative_at(1, 0.0) - fd).abs() < 1e-7);
    }

    proptest! {
        #[test]
        fn scale_covariance(d in 2usize..=7, s in 1usize..4, inv_h in 8u32..4096, pick in 0usize..7) {
            let b = GramBasis::<f64>::new(d).unwrap();
            let l = pick % d;
            let h = 1.0 / inv_h as f64;
            let p = b.left_poly(l, s, h).unwrap();
            let r = b.right_poly(l, s, h).unwrap();
            for j in 0..d {
                let want = b.node_values(l)[j];
                let x = (j * s) as f64 * h;
                prop_assert!((p.eval(x) - want).abs() <= 1e-12);
                let xr = 1.0 - (d - 1 - j) as f64 * s as f64 * h;
                prop_assert!((r.eval(xr) - want).abs() <= 1e-11);
            }
        }

        #[test]
        fn projection_reproduces_monomials(d in 2usize..=7, k in 0usize..7) {
            let b = GramBasis::<f64>::new(d).unwrap();
            let k = k % d;
            let f: Vec<f64> = (0..d).map(|j| (j as f64).powi(k as i32)).collect();
            let c = b.project_left(&f).unwrap();
            let p = b.left_projection(&c, 1, 1.0).unwrap();
            let scale = f.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (j, want) in f.iter().enumerate() {
                prop_assert!((p.eval(j as f64) - want).abs() <= 1e-13 * scale);
            }
        }
    }
}
