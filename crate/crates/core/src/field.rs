//! Scalar fields on the chart: pure maps from a [`Point4`] to a [`Jet2`].
//!
//! Fields are built once from combinators and evaluated many times over
//! sample grids. Evaluation is where arithmetic failures pick up their
//! position: a [`JetError`] raised inside the expression tree surfaces as
//! [`Error::SingularEvaluation`] carrying the offending point.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jet::{Coord, Jet2, JetError, Point4};

type FieldFn = dyn Fn(&Point4) -> std::result::Result<Jet2, JetError> + Send + Sync;

#[derive(Clone)]
pub struct ScalarField {
    f: Arc<FieldFn>,
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("ScalarField")
    }
}

impl ScalarField {
    pub fn from_fn<F>(f: F) -> Self
    where
        F: Fn(&Point4) -> std::result::Result<Jet2, JetError> + Send + Sync + 'static,
    {
        ScalarField { f: Arc::new(f) }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_fn(move |_| Ok(Jet2::constant(c)))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn coord(c: Coord) -> Self {
        Self::from_fn(move |p| Ok(Jet2::coord(c, p)))
    }

    /// Full evaluation: jet plus finiteness guard, errors located at `p`.
    pub fn eval(&self, p: &Point4) -> Result<Jet2> {
        let jet = (self.f)(p).map_err(|source| Error::SingularEvaluation { point: *p, source })?;
        if !jet.is_finite() {
            return Err(Error::NonFinite { point: *p });
        }
        Ok(jet)
    }

    /// Value only; same guards as [`eval`](Self::eval).
    pub fn value(&self, p: &Point4) -> Result<f64> {
        Ok(self.eval(p)?.val)
    }

    pub fn scale(&self, c: f64) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| Ok(f(p)?.scale(c)))
    }

    pub fn sin(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| Ok(f(p)?.sin()))
    }

    pub fn cos(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| Ok(f(p)?.cos()))
    }

    pub fn tan(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| f(p)?.tan())
    }

    pub fn exp(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| Ok(f(p)?.exp()))
    }

    pub fn sqrt(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| f(p)?.sqrt())
    }

    pub fn ln(&self) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| f(p)?.ln())
    }

    pub fn powi(&self, k: i32) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| f(p)?.powi(k))
    }

    /// Real power via exp(e * ln(f)); defined where the base is positive.
    pub fn powf(&self, e: f64) -> Self {
        let f = self.f.clone();
        Self::from_fn(move |p| Ok(f(p)?.ln()?.scale(e).exp()))
    }
}

impl std::ops::Add for &ScalarField {
    type Output = ScalarField;

    fn add(self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.f.clone(), rhs.f.clone());
        ScalarField::from_fn(move |p| Ok(a(p)? + b(p)?))
    }
}

impl std::ops::Sub for &ScalarField {
    type Output = ScalarField;

    fn sub(self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.f.clone(), rhs.f.clone());
        ScalarField::from_fn(move |p| Ok(a(p)? - b(p)?))
    }
}

impl std::ops::Mul for &ScalarField {
    type Output = ScalarField;

    fn mul(self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.f.clone(), rhs.f.clone());
        ScalarField::from_fn(move |p| Ok(a(p)? * b(p)?))
    }
}

impl std::ops::Div for &ScalarField {
    type Output = ScalarField;

    fn div(self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.f.clone(), rhs.f.clone());
        ScalarField::from_fn(move |p| a(p)?.try_div(b(p)?))
    }
}

impl std::ops::Neg for &ScalarField {
    type Output = ScalarField;

    fn neg(self) -> ScalarField {
        self.scale(-1.0)
    }
}
