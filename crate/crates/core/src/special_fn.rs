//! Gamma-family functions used by every matrix element and closed-form
//! fractional image.
//!
//! `ln Γ` is evaluated by a `ζ(n) - 1` power series on `[0.5, 2.5]` (which
//! keeps full relative accuracy around the zeros at 1 and 2), upward
//! recurrence below, downward recurrence up to 10 and the Stirling series
//! beyond. Beta values and Gamma ratios with large arguments are formed from
//! Stirling differences so that the large logarithms cancel analytically
//! instead of numerically.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;
const LN_PI: f64 = 1.144_729_885_849_400_2;

/// Distance from a non-positive integer below which `1/Γ` is taken as 0.
pub const POLE_TOLERANCE: f64 = 1e-8;

/// `ζ(n) - 1` for `n = 2..=40`.
const ZETA_MINUS_ONE: [f64; 39] = [
    0.644_934_066_848_226_44,
    0.202_056_903_159_594_29,
    0.082_323_233_711_138_192,
    0.036_927_755_143_369_926,
    0.017_343_061_984_449_14,
    0.008_349_277_381_922_826_8,
    0.004_077_356_197_944_339_4,
    0.002_008_392_826_082_214_4,
    0.000_994_575_127_818_085_34,
    0.000_494_188_604_119_464_56,
    0.000_246_086_553_308_048_3,
    0.000_122_713_347_578_489_15,
    6.124_813_505_870_482_9e-5,
    3.058_823_630_702_049_4e-5,
    1.528_225_940_865_187_2e-5,
    7.637_197_637_899_762_3e-6,
    3.817_293_264_999_839_9e-6,
    1.908_212_716_553_938_9e-6,
    9.539_620_338_727_961_1e-7,
    4.769_329_867_878_064_6e-7,
    2.384_505_027_277_329_9e-7,
    1.192_199_259_653_110_7e-7,
    5.960_818_905_125_948e-8,
    2.980_350_351_465_228e-8,
    1.490_155_482_836_504_1e-8,
    7.450_711_789_835_429_5e-9,
    3.725_334_024_788_457_1e-9,
    1.862_659_723_513_049e-9,
    9.313_274_324_196_681_8e-10,
    4.656_629_065_033_784_1e-10,
    2.328_311_833_676_505_5e-10,
    1.164_155_017_270_052e-10,
    5.820_772_087_902_700_9e-11,
    2.910_385_044_497_099_7e-11,
    1.455_192_189_104_198_4e-11,
    7.275_959_835_057_481e-12,
    3.637_979_547_378_651_2e-12,
    1.818_989_650_307_065_9e-12,
    9.094_947_840_263_889_3e-13,
];

/// A finite real argument of the Gamma family (NaN and infinities rejected).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GammaArg(f64);

impl GammaArg {
    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() {
            Ok(GammaArg(x))
        } else {
            Err(Error::Domain(format!(
                "Gamma argument must be finite, got {x}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// True when `x` sits on (or within `POLE_TOLERANCE` of) a pole of Γ.
    pub fn is_pole(self) -> bool {
        is_gamma_pole(self.0)
    }
}

impl TryFrom<f64> for GammaArg {
    type Error = Error;
    fn try_from(x: f64) -> Result<Self> {
        GammaArg::new(x)
    }
}

pub fn is_gamma_pole(x: f64) -> bool {
    if x > 0.5 {
        return false;
    }
    let n = x.round();
    n <= 0.0 && (x - n).abs() < POLE_TOLERANCE
}

/// `sin(πx)` with exact argument reduction, so integers give exact zeros.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    // r in [-1, 1]
    let r = x - 2.0 * (x * 0.5).round();
    if r > 0.5 {
        (PI * (1.0 - r)).sin()
    } else if r < -0.5 {
        -(PI * (1.0 + r)).sin()
    } else {
        (PI * r).sin()
    }
}

// ln Γ(1+z) for |z| <= 0.5 without the -ln(1+z) part.
fn zeta_series(z: f64) -> f64 {
    let mut acc = 0.0;
    for (i, zm1) in ZETA_MINUS_ONE.iter().enumerate().rev() {
        let n = (i + 2) as f64;
        let sign = if (i + 2) % 2 == 0 { 1.0 } else { -1.0 };
        acc += sign * zm1 * z.powi(i as i32 + 2) / n;
    }
    z * (1.0 - EULER_GAMMA) + acc
}

/// Remainder of the Stirling series beyond `(x - 1/2) ln x - x + ln √(2π)`.
fn stirling_correction(x: f64) -> f64 {
    let r = 1.0 / x;
    let r2 = r * r;
    let series = 1.0 / 12.0
        + r2 * (-1.0 / 360.0
            + r2 * (1.0 / 1260.0
                + r2 * (-1.0 / 1680.0
                    + r2 * (1.0 / 1188.0
                        + r2 * (-691.0 / 360_360.0
                            + r2 * (1.0 / 156.0 + r2 * (-3617.0 / 122_400.0)))))));
    series * r
}

// ln Γ(x) for x > 0, no validation.
pub(crate) fn lgamma_pos(x: f64) -> f64 {
    if x == 1.0 || x == 2.0 {
        0.0
    } else if x < 0.5 {
        -x.ln_1p() + zeta_series(x) - x.ln()
    } else if x <= 1.5 {
        let z = x - 1.0;
        -z.ln_1p() + zeta_series(z)
    } else if x <= 2.5 {
        zeta_series(x - 2.0)
    } else if x < 10.0 {
        let mut y = x;
        let mut prod = 1.0;
        while y > 2.5 {
            y -= 1.0;
            prod *= y;
        }
        zeta_series(y - 2.0) + prod.ln()
    } else {
        (x - 0.5) * x.ln() - x + HALF_LN_TWO_PI + stirling_correction(x)
    }
}

/// Natural logarithm of Γ(x) for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::Domain(format!("log_gamma requires x > 0, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    Ok(lgamma_pos(x))
}

/// `(ln|Γ(x)|, sign Γ(x))`. At a pole returns `(+inf, 0)`.
pub fn ln_gamma_signed(x: f64) -> (f64, f64) {
    if x > 0.0 {
        (lgamma_pos(x), 1.0)
    } else if is_gamma_pole(x) {
        (f64::INFINITY, 0.0)
    } else {
        let s = sin_pi(x);
        (LN_PI - s.abs().ln() - lgamma_pos(1.0 - x), s.signum())
    }
}

/// `1/Γ(x)`: total on finite reals, exactly zero at (and within
/// `POLE_TOLERANCE` of) the poles `0, -1, -2, ...`.
pub fn reciprocal_gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_gamma_pole(x) {
        return 0.0;
    }
    if x > 0.0 {
        if x == 1.0 || x == 2.0 {
            return 1.0;
        }
        return (-lgamma_pos(x)).exp();
    }
    // Reflection: 1/Γ(x) = sin(πx) Γ(1-x) / π
    sin_pi(x) * lgamma_pos(1.0 - x).exp() / PI
}

// ln Γ(y) - ln Γ(y + d), with y, y + d >= 10.
fn ln_gamma_ratio_large(y: f64, d: f64) -> f64 {
    let s = y + d;
    -(y - 0.5) * (d / y).ln_1p() - d * s.ln() + d + stirling_correction(y) - stirling_correction(s)
}

/// `ln B(x, y)` for positive arguments; symmetric by construction.
pub fn ln_beta(x: f64, y: f64) -> Result<f64> {
    if x.is_nan() || y.is_nan() || x <= 0.0 || y <= 0.0 {
        return Err(Error::Domain(format!(
            "beta requires positive arguments, got ({x}, {y})"
        )));
    }
    let (p, q) = if x <= y { (x, y) } else { (y, x) };
    let s = p + q;
    let v = if p >= 10.0 {
        HALF_LN_TWO_PI - (p - 0.5) * (q / p).ln_1p() - (q - 0.5) * (p / q).ln_1p() - 0.5 * s.ln()
            + stirling_correction(p)
            + stirling_correction(q)
            - stirling_correction(s)
    } else if q >= 10.0 {
        lgamma_pos(p) + ln_gamma_ratio_large(q, p)
    } else {
        lgamma_pos(p) + lgamma_pos(q) - lgamma_pos(s)
    };
    Ok(v)
}

/// Euler Beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn beta(x: f64, y: f64) -> Result<f64> {
    ln_beta(x, y).map(f64::exp)
}

/// `Γ(num)/Γ(den)`; exactly zero when `den` is a pole of Γ.
pub fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    if num.is_nan() || num <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma_ratio requires num > 0, got {num}"
        )));
    }
    if !den.is_finite() {
        return Err(Error::Domain(format!(
            "gamma_ratio requires a finite den, got {den}"
        )));
    }
    if den > 0.0 {
        if num == den {
            return Ok(1.0);
        }
        let ln = if num >= 10.0 && den >= 10.0 {
            ln_gamma_ratio_large(num, den - num)
        } else {
            lgamma_pos(num) - lgamma_pos(den)
        };
        return Ok(ln.exp());
    }
    let (ln_den, sign) = ln_gamma_signed(den);
    if sign == 0.0 {
        return Ok(0.0);
    }
    Ok(sign * (lgamma_pos(num) - ln_den).exp())
}
