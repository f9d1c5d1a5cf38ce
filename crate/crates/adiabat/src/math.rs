//! Float functions routed through `std` or `libm` depending on features.

#[cfg(feature = "std")]
mod imp {
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn log2(x: f64) -> f64 {
        x.log2()
    }
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }
    pub fn floor(x: f64) -> f64 {
        x.floor()
    }
    pub fn round(x: f64) -> f64 {
        x.round()
    }
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn cos(x: f64) -> f64 {
        x.cos()
    }
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn sin(x: f64) -> f64 {
        x.sin()
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn log2(x: f64) -> f64 {
        libm::log2(x)
    }
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    pub fn floor(x: f64) -> f64 {
        libm::floor(x)
    }
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn cos(x: f64) -> f64 {
        libm::cos(x)
    }
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn sin(x: f64) -> f64 {
        libm::sin(x)
    }
}

pub(crate) use imp::*;

/// Running compensated (Neumaier) sum. Cumulative Lorenz ordinates are built
/// with this so that comparison noise stays at machine epsilon even for a few
/// thousand blocks.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if abs(self.sum) >= abs(x) {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
