//! Shared, thread-safe function handles.

use std::sync::Arc;

use crate::error::Result;
use crate::specfun::Complex;

/// Real evaluator `x ↦ f(x)`.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Complex evaluator that may hit a pole.
pub type ComplexFn = Arc<dyn Fn(Complex) -> Result<Complex> + Send + Sync>;

pub fn real_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> RealFn {
    Arc::new(f)
}

pub fn complex_fn(f: impl Fn(Complex) -> Result<Complex> + Send + Sync + 'static) -> ComplexFn {
    Arc::new(f)
}

/// First error raised inside an infallible integrand; the integrand returns
/// NaN in its place and the caller reports the stored error afterwards.
pub(crate) struct ErrorSlot(std::sync::Mutex<Option<crate::error::Error>>);

impl ErrorSlot {
    pub(crate) fn new() -> Self {
        ErrorSlot(std::sync::Mutex::new(None))
    }

    pub(crate) fn catch(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.0.lock().expect("poisoned").get_or_insert(e);
                f64::NAN
            }
        }
    }

    pub(crate) fn finish<T>(self, out: Result<T>) -> Result<T> {
        match self.0.into_inner().expect("poisoned") {
            Some(e) => Err(e),
            None => out,
        }
    }
}
