//! Dense polynomials stored in powers of `(x - center)`.
//!
//! All Gram, Hermite and extension polynomials in the crate are carried by
//! [`Polynomial`]. Coefficient `k` multiplies `(x - center)^k`; with the
//! default center of zero this is the plain monomial basis. Choosing the
//! center near the interval where a polynomial is used keeps the
//! representation well conditioned on short intervals such as `[1, 1.0625]`.
//!
//! Only ring operations (plus division for the `1/k` style scalings) are
//! required, so the type works for floats and for exact rationals alike.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Num;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
    center: T,
}

impl<T: Clone + Num> Polynomial<T> {
    /// Polynomial in plain monomials; an empty vector is the zero polynomial.
    pub fn new(coeffs: Vec<T>) -> Self {
        Self::centered(coeffs, T::zero())
    }

    pub fn centered(mut coeffs: Vec<T>, center: T) -> Self {
        if coeffs.is_empty() {
            coeffs.push(T::zero());
        }
        Self { coeffs, center }
    }

    pub fn zero() -> Self {
        Self::new(vec![T::zero()])
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// `(x - center)^k` with unit coefficient.
    pub fn monomial(k: usize, center: T) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = T::one();
        Self::centered(coeffs, center)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn center(&self) -> &T {
        &self.center
    }

    /// Index of the last stored coefficient (not trimmed of zeros).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Horner evaluation.
    pub fn eval(&self, x: T) -> T {
        let t = x - self.center.clone();
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    /// `m`-th derivative by the exact monomial rule; `m > degree` yields zero.
    pub fn derivative(&self, m: usize) -> Self {
        if m > self.degree() {
            return Self::centered(vec![T::zero()], self.center.clone());
        }
        let coeffs = (m..self.coeffs.len())
            .map(|k| {
                // k (k-1) ... (k-m+1)
                let falling = (k + 1 - m..=k).fold(T::one(), |acc, f| acc * from_usize::<T>(f));
                self.coeffs[k].clone() * falling
            })
            .collect();
        Self::centered(coeffs, self.center.clone())
    }

    /// Value of the `m`-th derivative at `x`.
    pub fn derivative_at(&self, m: usize, x: T) -> T {
        self.derivative(m).eval(x)
    }

    pub fn scale(&self, a: T) -> Self {
        let coeffs = self.coeffs.iter().map(|c| c.clone() * a.clone()).collect();
        Self::centered(coeffs, self.center.clone())
    }

    /// The same polynomial re-expanded about `new_center` (Taylor shift).
    pub fn recentered(&self, new_center: T) -> Self {
        let delta = new_center.clone() - self.center.clone();
        let mut a = self.coeffs.clone();
        let n = a.len();
        if !delta.is_zero() {
            for i in 0..n {
                for j in (i..n - 1).rev() {
                    let carry = delta.clone() * a[j + 1].clone();
                    a[j] = a[j].clone() + carry;
                }
            }
        }
        Self::centered(a, new_center)
    }

    /// Change of variable: returns `q(x) = self(center + (x - origin) / scale)`,
    /// expanded about `origin`. No re-expansion is needed, so the operation is
    /// exact up to the coefficient scaling.
    pub fn substitute_affine(&self, origin: T, scale: T) -> Self {
        let mut factor = T::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c.clone() / factor.clone();
                factor = factor.clone() * scale.clone();
                out
            })
            .collect();
        Self::centered(coeffs, origin)
    }

    /// Drops trailing zero coefficients (keeps at least one).
    pub fn trimmed(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self::centered(coeffs, self.center.clone())
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> Polynomial<U> {
        Polynomial::centered(self.coeffs.iter().map(&f).collect(), f(&self.center))
    }

    fn aligned(&self, other: &Self) -> Self {
        if other.center == self.center {
            other.clone()
        } else {
            other.recentered(self.center.clone())
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(T, T) -> T) -> Self {
        let other = self.aligned(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[T], k: usize| v.get(k).cloned().unwrap_or_else(T::zero);
        let coeffs = (0..n)
            .map(|k| f(get(&self.coeffs, k), get(&other.coeffs, k)))
            .collect();
        Self::centered(coeffs, self.center.clone())
    }

    fn product(&self, other: &Self) -> Self {
        let other = self.aligned(other);
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::centered(coeffs, self.center.clone())
    }
}

fn from_usize<T: Num>(n: usize) -> T {
    let mut acc = T::zero();
    for _ in 0..n {
        acc = acc + T::one();
    }
    acc
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<T: Clone + Num> $tr<&Polynomial<T>> for &Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: &Polynomial<T>) -> Polynomial<T> {
                let f: fn(&Polynomial<T>, &Polynomial<T>) -> Polynomial<T> = $body;
                f(self, rhs)
            }
        }
        impl<T: Clone + Num> $tr for Polynomial<T> {
            type Output = Polynomial<T>;
            fn $m(self, rhs: Polynomial<T>) -> Polynomial<T> {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.zip_with(b, |x, y| x + y));
binop!(Sub, sub, |a, b| a.zip_with(b, |x, y| x - y));
binop!(Mul, mul, |a, b| a.product(b));

impl<T: Clone + Num + Neg<Output = T>> Neg for Polynomial<T> {
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        let coeffs = self.coeffs.into_iter().map(|c| -c).collect();
        Polynomial::centered(coeffs, self.center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    #[test]
    fn derivative_examples() {
        let x2 = Polynomial::new(vec![0.0, 0.0, 1.0]);
        assert_eq!(x2.derivative(1), Polynomial::new(vec![0.0, 2.0]));
        let p = Polynomial::new(vec![0.0, 1.0, 0.0, 1.0]);
        assert_eq!(p.derivative(3), Polynomial::new(vec![6.0]));
        assert!(p.derivative(4).is_zero());
        assert_eq!(p.derivative(0), p);
    }

    #[test]
    fn recentering_preserves_values() {
        let p = Polynomial::centered(vec![1.0f64, -2.0, 0.5, 3.0], 0.25);
        let q = p.recentered(-1.5);
        for x in [-2.0, 0.0, 0.3, 1.7] {
            assert!((p.eval(x) - q.eval(x)).abs() < 1e-12 * (1.0 + p.eval(x).abs()));
        }
    }

    #[test]
    fn recentering_is_exact_over_rationals() {
        let r = |n: i64, d: i64| Ratio::new(n, d);
        let p = Polynomial::new(vec![r(1, 3), r(-2, 1), r(5, 7)]);
        let q = p.recentered(r(3, 2));
        for x in [r(0, 1), r(1, 5), r(-9, 4)] {
            assert_eq!(p.eval(x), q.eval(x));
        }
        assert_eq!(q.recentered(r(0, 1)), p);
    }

    #[test]
    fn arithmetic_across_centers() {
        let a = Polynomial::centered(vec![1.0f64, 1.0], 1.0); // x
        let b = Polynomial::new(vec![-1.0, 1.0]); // x - 1
        let prod = &a * &b;
        let sum = &a + &b;
        for x in [-1.0, 0.5, 2.0] {
            assert!((prod.eval(x) - x * (x - 1.0)).abs() < 1e-14);
            assert!((sum.eval(x) - (2.0 * x - 1.0)).abs() < 1e-14);
        }
        assert_eq!((&a - &a).trimmed(), Polynomial::centered(vec![0.0], 1.0));
    }

    #[test]
    fn affine_substitution() {
        // p(u) = u^2 about 0; q(x) = p(x / 0.5) = 4 x^2
        let p = Polynomial::new(vec![0.0, 0.0, 1.0]);
        let q = p.substitute_affine(0.0, 0.5);
        assert_eq!(q.coeffs(), &[0.0, 0.0, 4.0]);
        // shifted: q(x) = p(2 + (x - 1) / 0.25)
        let p = Polynomial::centered(vec![3.0f64, 1.0], 2.0);
        let q = p.substitute_affine(1.0, 0.25);
        assert!((q.eval(1.5) - p.eval(2.0 + 0.5 / 0.25)).abs() < 1e-14);
    }

    fn power_sum(c: &[f64], x: f64) -> (f64, f64) {
        let terms: Vec<f64> = c.iter().enumerate().map(|(k, a)| a * x.powi(k as i32)).collect();
        (terms.iter().sum(), terms.iter().map(|t| t.abs()).sum())
    }

    proptest! {
        #[test]
        fn horner_matches_power_sum(
            c in prop::collection::vec(-10.0f64..10.0, 1..=13),
            x in -64.0f64..64.0,
        ) {
            let p = Polynomial::new(c.clone());
            let (direct, scale) = power_sum(&c, x);
            prop_assert!((p.eval(x) - direct).abs() <= 1e-14 * scale.max(1e-300));
        }

        #[test]
        fn derivative_of_product_obeys_leibniz(
            a in prop::collection::vec(-3i64..3, 1..5),
            b in prop::collection::vec(-3i64..3, 1..5),
        ) {
            let pa = Polynomial::new(a.into_iter().map(Ratio::from_integer).collect::<Vec<_>>());
            let pb = Polynomial::new(b.into_iter().map(Ratio::from_integer).collect::<Vec<_>>());
            let lhs = (&pa * &pb).derivative(1).trimmed();
            let rhs = (&pa.derivative(1) * &pb) + (&pa * &pb.derivative(1));
            prop_assert_eq!(lhs, rhs.trimmed());
        }
    }
}
