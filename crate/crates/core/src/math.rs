//! Float helpers for the `no_std` build.

use core::f64::consts::PI;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn atan(x: f64) -> f64 {
    libm::atan(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn tanh(x: f64) -> f64 {
    libm::tanh(x)
}

#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

/// Round half up: `⌊x + 0.5⌋`. Used wherever a continuous coordinate is
/// snapped to a grid index.
#[inline]
pub fn round_half_up(x: f64) -> f64 {
    libm::floor(x + 0.5)
}

#[inline]
pub fn to_radians(deg: f64) -> f64 {
    deg * (PI / 180.0)
}

#[inline]
pub fn to_degrees(rad: f64) -> f64 {
    rad * (180.0 / PI)
}

/// Sine and cosine of an angle in degrees, exact at multiples of 90°.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let r = deg - 360.0 * floor(deg / 360.0);
    if r == 0.0 {
        (0.0, 1.0)
    } else if r == 90.0 {
        (1.0, 0.0)
    } else if r == 180.0 {
        (0.0, -1.0)
    } else if r == 270.0 {
        (-1.0, 0.0)
    } else {
        let rad = to_radians(deg);
        (libm::sin(rad), libm::cos(rad))
    }
}

/// Tangent of an angle in degrees, exact at multiples of 45°.
pub fn tan_deg(deg: f64) -> f64 {
    let r = deg - 180.0 * floor(deg / 180.0);
    if r == 0.0 {
        0.0
    } else if r == 45.0 {
        1.0
    } else if r == 135.0 {
        -1.0
    } else {
        tan(to_radians(deg))
    }
}

/// Wrap an angle in degrees to `[-180, 180)`.
pub fn normalize_degrees(deg: f64) -> f64 {
    let r = deg + 180.0;
    let wrapped = r - 360.0 * floor(r / 360.0);
    let out = wrapped - 180.0;
    if out >= 180.0 {
        out - 360.0
    } else {
        out
    }
}

#[inline]
pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + exp(-x))
}

#[inline]
pub fn clamp(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(sin_cos_deg(90.0), (1.0, 0.0));
        assert_eq!(sin_cos_deg(-90.0), (-1.0, 0.0));
        assert_eq!(sin_cos_deg(450.0), (1.0, 0.0));
        assert_eq!(sin_cos_deg(0.0), (0.0, 1.0));
    }

    #[test]
    fn normalize_range() {
        assert_eq!(normalize_degrees(180.0), -180.0);
        assert_eq!(normalize_degrees(-180.0), -180.0);
        assert_eq!(normalize_degrees(190.0), -170.0);
        assert_eq!(normalize_degrees(-190.0), 170.0);
        assert_eq!(normalize_degrees(720.0), 0.0);
    }

    #[test]
    fn round_half_up_ties() {
        assert_eq!(round_half_up(127.5), 128.0);
        assert_eq!(round_half_up(-127.5), -127.0);
        assert_eq!(round_half_up(2.49), 2.0);
    }
}
