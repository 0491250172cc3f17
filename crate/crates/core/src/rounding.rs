//! Size rounding to powers of two (down) and powers of `1 + eps` (up).
//!
//! Exponents are integers fixed once at rounding time. The power for a given
//! exponent is always produced by the same square-and-multiply routine, so
//! two jobs with the same exponent get bit-identical rounded sizes.

use crate::error::{Error, Result};

/// `base^exp` by binary exponentiation.
pub fn int_pow(base: f64, exp: i32) -> f64 {
    let mut result = 1.0;
    let mut factor = base;
    let mut e = exp.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result *= factor;
        }
        factor *= factor;
        e >>= 1;
    }
    if exp < 0 {
        1.0 / result
    } else {
        result
    }
}

fn check_size(size: f64) -> Result<()> {
    if size.is_finite() && size > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("size must be positive and finite, got {size}")))
    }
}

/// Largest power of two not exceeding `size`, with its exponent.
pub fn round_down_pow2(size: f64) -> Result<(f64, i32)> {
    check_size(size)?;
    let mut exp = size.log2().floor() as i32;
    while int_pow(2.0, exp) > size {
        exp -= 1;
    }
    while int_pow(2.0, exp + 1) <= size {
        exp += 1;
    }
    Ok((int_pow(2.0, exp), exp))
}

/// Smallest power of `1 + eps` that is at least `size`, with its exponent.
pub fn round_up_geometric(size: f64, eps: f64) -> Result<(f64, i32)> {
    check_size(size)?;
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be positive, got {eps}")));
    }
    let base = 1.0 + eps;
    let mut exp = (size.ln() / base.ln()).ceil() as i32;
    while int_pow(base, exp) < size {
        exp += 1;
    }
    while int_pow(base, exp - 1) >= size {
        exp -= 1;
    }
    Ok((int_pow(base, exp), exp))
}
