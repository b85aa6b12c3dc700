//! Fourier continuation of non-periodic data on `[0, 1]`.
//!
//! Samples `f(x_j)`, `x_j = j/n`, are extended smoothly onto `[1, b]` and the
//! resulting periodic sequence is interpolated by a trigonometric polynomial
//! of period `b`. The extension near each end comes from a projection onto
//! discrete-orthonormal Gram polynomials:
//!
//! * [`gram_basis`] builds the Gram polynomials on the `d` end nodes.
//! * [`hermite_extension`] blends their derivatives into `[1, b]` with
//!   two-point Hermite polynomials.
//! * [`lsq_continuation`] is the classic alternative: a least-squares
//!   trigonometric blend to zero.
//! * [`continuation`] validates parameters and assembles the continued data.
//! * [`trig_interp`] computes the interpolant and evaluates it.
//! * [`convergence`] runs error and rate studies on built-in test functions.
//!
//! Numerical routines are generic over [`Real`]; [`DoubleDouble`] gives about
//! 32 significant digits where `f64` round-off would hide a rate.
//!
//! ```
//! use fcgram::{Continuator, Method, RawParams, validate_params};
//! use num_rational::Rational64;
//!
//! let n = 64;
//! let params = validate_params(RawParams::new(n, 5).with_b(Rational64::from_integer(2))).unwrap();
//! let cont = fcgram::Continuator64::new(params, None).unwrap();
//! let f: Vec<f64> = (0..=n).map(|j| (j as f64 / n as f64).exp()).collect();
//! let t = cont.continue_samples(&f, None).unwrap().fit().unwrap();
//! assert!((t.eval(0.3) - 0.3f64.exp()).abs() < 1e-7);
//! # let _ = (Method::Hermite, Continuator::<f32>::new);
//! ```

pub mod continuation;
pub mod convergence;
pub mod double_double;
pub mod error;
pub mod gram_basis;
pub mod hermite_extension;
pub mod lsq_continuation;
#[cfg(feature = "oracle")]
pub mod oracle;
pub mod polynomial;
pub mod scalar;
pub mod trig_interp;
#[cfg(feature = "oracle")]
pub mod verify;

pub use continuation::{
    c_from_period, parse_rational, validate_params, Continuator, ContinuedSamples, EndpointDerivatives, FcParams,
    Method, RawParams,
};
pub use convergence::{builtin_functions, noc, relative_error, run_study, ConvergenceRow, TestFunction};
pub use double_double::DoubleDouble;
pub use error::{FcError, Result};
pub use gram_basis::GramBasis;
pub use hermite_extension::{EndpointHermite, HermiteBasis};
pub use lsq_continuation::{LsExtension, LsGrid};
pub use polynomial::Polynomial;
pub use scalar::Real;
pub use trig_interp::TrigInterpolant;

pub type Polynomial64 = Polynomial<f64>;
pub type Polynomial32 = Polynomial<f32>;
pub type PolynomialDD = Polynomial<DoubleDouble>;
pub type GramBasis64 = GramBasis<f64>;
pub type GramBasisDD = GramBasis<DoubleDouble>;
pub type Continuator64 = Continuator<f64>;
pub type ContinuatorDD = Continuator<DoubleDouble>;
pub type TrigInterpolant64 = TrigInterpolant<f64>;
pub type TrigInterpolantDD = TrigInterpolant<DoubleDouble>;
