//! Constants produced by the proof chains, in exact arithmetic where they
//! are rational.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// `N = 9^m`: balls of S^m are covered by `N` balls of half the radius.
pub fn covering_number(m: usize) -> BigUint {
    BigUint::from(9u32).pow(m as u32)
}

/// `1 / c = 8 N^12` for the annulus decomposition on S^m.
pub fn gny_c_inverse(m: usize) -> BigUint {
    covering_number(m).pow(12) * BigUint::from(8u32)
}

fn rational(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn int(x: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// `c = 1 / (8 N^12)`.
pub fn gny_c(m: usize) -> BigRational {
    rational(BigUint::one(), gny_c_inverse(m))
}

/// Eigenvalue constant: the numerator bound `4n` divided by the denominator
/// factor `(81 / 2500) c`, giving `(10000 / 81) n / c`.
pub fn tcv_constant(n: usize, m: usize) -> BigRational {
    let numerator = int(4 * n as u64);
    let denominator = int(81) / int(2500) * gny_c(m);
    numerator / denominator
}

/// Same chain with `(81 / 1250) c` in the denominator (annulus family of
/// size `k + 1`): half of [`tcv_constant`].
pub fn grei_constant(n: usize, m: usize) -> BigRational {
    let numerator = int(4 * n as u64);
    let denominator = int(81) / int(1250) * gny_c(m);
    numerator / denominator
}

/// `9c / (2500 n)`: the base of the negative-count constant, which enters
/// raised to the power `n / 2`.
pub fn schro_base(n: usize, m: usize) -> BigRational {
    int(9) * gny_c(m) / (int(2500) * int(n as u64))
}

/// `9c / (1250 n)` for the mean-curvature form of the count.
pub fn schro2_constant(n: usize, m: usize) -> BigRational {
    int(9) * gny_c(m) / (int(1250) * int(n as u64))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstantsTable {
    pub n: usize,
    pub m: usize,
    /// Exact decimal strings for the integers and rationals.
    pub covering_number: String,
    pub c_inverse: String,
    pub c: f64,
    pub c_tcv_exact: String,
    pub c_tcv: f64,
    pub c_grei_exact: String,
    pub c_grei: f64,
    /// Constant used for the mean-curvature eigenvalue bounds: the larger of
    /// the two chain values.
    pub c_reilly: f64,
    /// `(9c / 2500)^(n/2) n^(-n/2)`.
    pub c_schro: f64,
    /// Exact value when `n` is even.
    pub c_schro_exact: Option<String>,
    pub c_schro2_exact: String,
    pub c_schro2: f64,
    /// Index constant: `c_schro`, the Schroedinger constant with the
    /// conformal volume bounded by the volume of a minimal submanifold.
    pub c_index: f64,
}

pub fn constants(n: usize, m: usize) -> Result<ConstantsTable> {
    if n < 2 || m < n {
        return Err(Error::InvalidParameter(format!("need n >= 2 and m >= n, got n = {n}, m = {m}")));
    }
    let tcv = tcv_constant(n, m);
    let grei = grei_constant(n, m);
    let base = schro_base(n, m);
    let c_schro_exact = n.is_multiple_of(2).then(|| num_traits::pow(base.clone(), n / 2));
    let c_schro = match &c_schro_exact {
        Some(x) => to_f64(x),
        None => to_f64(&base).powf(n as f64 / 2.0),
    };
    let schro2 = schro2_constant(n, m);
    let c_tcv = to_f64(&tcv);
    let c_grei = to_f64(&grei);
    Ok(ConstantsTable {
        n,
        m,
        covering_number: covering_number(m).to_string(),
        c_inverse: gny_c_inverse(m).to_string(),
        c: to_f64(&gny_c(m)),
        c_tcv_exact: tcv.to_string(),
        c_tcv,
        c_grei_exact: grei.to_string(),
        c_grei,
        c_reilly: c_tcv.max(c_grei),
        c_schro,
        c_schro_exact: c_schro_exact.map(|x| x.to_string()),
        c_schro2_exact: schro2.to_string(),
        c_schro2: to_f64(&schro2),
        c_index: c_schro,
    })
}
