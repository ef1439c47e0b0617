//! Float helpers usable with and without the standard library.

/// Float methods backed by `libm` when `std` is disabled. With `std`
/// enabled the inherent methods shadow these, so call sites stay identical.
#[cfg(not(feature = "std"))]
pub(crate) trait FloatExt: Sized {
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn log10(self) -> Self;
    fn log2(self) -> Self;
    fn powf(self, e: Self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sin_cos(self) -> (Self, Self);
    fn round(self) -> Self;
}

#[cfg(not(feature = "std"))]
impl FloatExt for f64 {
    #[inline]
    fn sqrt(self) -> f64 {
        libm::sqrt(self)
    }
    #[inline]
    fn exp(self) -> f64 {
        libm::exp(self)
    }
    #[inline]
    fn ln(self) -> f64 {
        libm::log(self)
    }
    #[inline]
    fn log10(self) -> f64 {
        libm::log10(self)
    }
    #[inline]
    fn log2(self) -> f64 {
        libm::log2(self)
    }
    #[inline]
    fn powf(self, e: f64) -> f64 {
        libm::pow(self, e)
    }
    #[inline]
    fn sin(self) -> f64 {
        libm::sin(self)
    }
    #[inline]
    fn cos(self) -> f64 {
        libm::cos(self)
    }
    #[inline]
    fn sin_cos(self) -> (f64, f64) {
        (libm::sin(self), libm::cos(self))
    }
    #[inline]
    fn round(self) -> f64 {
        libm::round(self)
    }
}

/// Normalized sinc: sin(pi x) / (pi x), with sinc(0) = 1.
pub fn sinc(x: f64) -> f64 {
    #[cfg(not(feature = "std"))]
    use self::FloatExt;
    if x == 0.0 {
        return 1.0;
    }
    let px = core::f64::consts::PI * x;
    px.sin() / px
}

/// Linear power ratio to decibels.
pub fn linear_to_db(x: f64) -> f64 {
    #[cfg(not(feature = "std"))]
    use self::FloatExt;
    10.0 * x.log10()
}

/// Decibels to linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    #[cfg(not(feature = "std"))]
    use self::FloatExt;
    10.0_f64.powf(db / 10.0)
}
