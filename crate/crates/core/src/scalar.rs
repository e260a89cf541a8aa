//! Elements of the circle group, exact (roots of unity) or approximate.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;
use thiserror::Error;

/// Tolerance on the modulus of float unit scalars and on float comparisons.
pub const UNIT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScalarError {
    #[error("root of unity with m = 0")]
    ZeroOrder,
    #[error("complex value {re}+{im}i is not unimodular")]
    NotUnimodular { re: f64, im: f64 },
}

/// A point of 𝕋. `Exact { k, m }` is e^{2πik/m} with 0 ≤ k < m.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged, try_from = "RawScalar")]
pub enum UnitScalar {
    Exact { k: u64, m: u64 },
    Float { re: f64, im: f64 },
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawScalar {
    Exact { k: i64, m: u64 },
    Float { re: f64, im: f64 },
}

impl TryFrom<RawScalar> for UnitScalar {
    type Error = ScalarError;
    fn try_from(raw: RawScalar) -> Result<Self, ScalarError> {
        match raw {
            RawScalar::Exact { k, m } => UnitScalar::root(k, m),
            RawScalar::Float { re, im } => UnitScalar::from_complex(Complex64::new(re, im)),
        }
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl UnitScalar {
    pub const ONE: UnitScalar = UnitScalar::Exact { k: 0, m: 1 };

    /// e^{2πik/m}, reduced to lowest terms.
    pub fn root(k: i64, m: u64) -> Result<Self, ScalarError> {
        if m == 0 {
            return Err(ScalarError::ZeroOrder);
        }
        let k = k.rem_euclid(m as i64) as u64;
        let g = gcd(k, m);
        Ok(UnitScalar::Exact { k: k / g, m: m / g })
    }

    /// Same as [`root`](Self::root) for a known nonzero `m`.
    pub fn mu(k: i64, m: u64) -> Self {
        Self::root(k, m).expect("order must be positive")
    }

    pub fn from_complex(z: Complex64) -> Result<Self, ScalarError> {
        if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > UNIT_TOL {
            return Err(ScalarError::NotUnimodular { re: z.re, im: z.im });
        }
        Ok(UnitScalar::Float { re: z.re, im: z.im })
    }

    pub fn from_angle(theta: f64) -> Self {
        UnitScalar::Float { re: theta.cos(), im: theta.sin() }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, UnitScalar::Exact { .. })
    }

    pub fn to_complex(&self) -> Complex64 {
        match *self {
            UnitScalar::Exact { k, m } => exact_root_complex(k, m),
            UnitScalar::Float { re, im } => Complex64::new(re, im),
        }
    }

    /// Multiplicative order for exact values, `None` for floats.
    pub fn order(&self) -> Option<u64> {
        match *self {
            UnitScalar::Exact { m, .. } => Some(m),
            UnitScalar::Float { .. } => None,
        }
    }

    /// Exponent e with self = e^{2πie/m}, if self lies in μ_m.
    /// Float values are snapped when within [`UNIT_TOL`].
    pub fn exponent_in(&self, m: u64) -> Option<u64> {
        if m == 0 {
            return None;
        }
        match *self {
            UnitScalar::Exact { k, m: d } => m.is_multiple_of(d).then(|| k * (m / d)),
            UnitScalar::Float { re, im } => {
                let turns = im.atan2(re) / TAU;
                let e = (turns * m as f64).round().rem_euclid(m as f64) as u64;
                let z = exact_root_complex(e, m);
                ((z - Complex64::new(re, im)).norm() <= UNIT_TOL).then_some(e)
            }
        }
    }

    pub fn conj(&self) -> Self {
        match *self {
            UnitScalar::Exact { k, m } => UnitScalar::mu(-(k as i64), m),
            UnitScalar::Float { re, im } => UnitScalar::Float { re, im: -im },
        }
    }

    pub fn inv(&self) -> Self {
        self.conj()
    }

    pub fn pow(&self, e: i64) -> Self {
        match *self {
            UnitScalar::Exact { k, m } => {
                let k = ((k as i128 * e as i128).rem_euclid(m as i128)) as i64;
                UnitScalar::mu(k, m)
            }
            UnitScalar::Float { .. } => {
                let z = self.to_complex().powi(e as i32);
                UnitScalar::Float { re: z.re, im: z.im }.renormalized()
            }
        }
    }

    pub fn is_one(&self) -> bool {
        match *self {
            UnitScalar::Exact { k, .. } => k == 0,
            UnitScalar::Float { re, im } => (re - 1.0).abs() <= UNIT_TOL && im.abs() <= UNIT_TOL,
        }
    }

    /// Exact comparison when both sides are exact, tolerance [`UNIT_TOL`] otherwise.
    pub fn same(&self, other: &UnitScalar) -> bool {
        match (*self, *other) {
            (UnitScalar::Exact { k: a, m: ma }, UnitScalar::Exact { k: b, m: mb }) => a == b && ma == mb,
            _ => (self.to_complex() - other.to_complex()).norm() <= UNIT_TOL,
        }
    }

    fn renormalized(self) -> Self {
        match self {
            UnitScalar::Float { re, im } => {
                let r = re.hypot(im);
                UnitScalar::Float { re: re / r, im: im / r }
            }
            e => e,
        }
    }
}

fn exact_root_complex(k: u64, m: u64) -> Complex64 {
    // Quarter turns are returned exactly so that μ_4 arithmetic stays exact in floats.
    let k = k % m;
    if (4 * k).is_multiple_of(m) {
        return match 4 * k / m {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, TAU * k as f64 / m as f64)
}

impl std::ops::Mul for UnitScalar {
    type Output = UnitScalar;
    fn mul(self, rhs: UnitScalar) -> UnitScalar {
        match (self, rhs) {
            (UnitScalar::Exact { k: a, m: ma }, UnitScalar::Exact { k: b, m: mb }) => {
                let m = lcm(ma, mb);
                let k = (a as u128 * (m / ma) as u128 + b as u128 * (m / mb) as u128) % m as u128;
                UnitScalar::mu(k as i64, m)
            }
            _ => {
                let z = self.to_complex() * rhs.to_complex();
                UnitScalar::Float { re: z.re, im: z.im }.renormalized()
            }
        }
    }
}

impl std::ops::MulAssign for UnitScalar {
    fn mul_assign(&mut self, rhs: UnitScalar) {
        *self = *self * rhs;
    }
}

impl PartialEq for UnitScalar {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl Default for UnitScalar {
    fn default() -> Self {
        UnitScalar::ONE
    }
}

impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            UnitScalar::Exact { k, m } => write!(f, "e(2πi·{k}/{m})"),
            UnitScalar::Float { re, im } => write!(f, "{re:+.12}{im:+.12}i"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_products_promote_to_lcm() {
        let a = UnitScalar::mu(1, 4);
        let b = UnitScalar::mu(1, 6);
        assert_eq!(a * b, UnitScalar::mu(5, 12));
        assert!(matches!(a * b, UnitScalar::Exact { k: 5, m: 12 }));
        assert!((a * a).same(&UnitScalar::mu(1, 2)));
        assert!((a * a.conj()).is_one());
    }

    #[test]
    fn mixing_demotes_to_float() {
        let a = UnitScalar::mu(1, 4);
        let b = UnitScalar::from_angle(0.3);
        let c = a * b;
        assert!(!c.is_exact());
        assert!((c.to_complex() - Complex64::from_polar(1.0, TAU / 4.0 + 0.3)).norm() < 1e-12);
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(UnitScalar::from_complex(Complex64::new(1.0 + 1e-6, 0.0)).is_err());
        assert!(UnitScalar::from_complex(Complex64::new(1.0 + 1e-10, 0.0)).is_ok());
        assert_eq!(UnitScalar::root(1, 0), Err(ScalarError::ZeroOrder));
    }

    #[test]
    fn exponent_and_snapping() {
        assert_eq!(UnitScalar::mu(1, 2).exponent_in(4), Some(2));
        assert_eq!(UnitScalar::mu(1, 4).exponent_in(2), None);
        let f = UnitScalar::from_complex(Complex64::new(0.0, -1.0)).unwrap();
        assert_eq!(f.exponent_in(4), Some(3));
        assert_eq!(UnitScalar::from_angle(0.1).exponent_in(8), None);
    }

    #[test]
    fn json_round_trip() {
        let v: Vec<UnitScalar> = serde_json::from_str(r#"[{"k":3,"m":4},{"k":-1,"m":4},{"re":0.0,"im":1.0}]"#).unwrap();
        assert!(matches!(v[0], UnitScalar::Exact { k: 3, m: 4 }));
        assert!(matches!(v[1], UnitScalar::Exact { k: 3, m: 4 }));
        assert!(v[2].same(&UnitScalar::mu(1, 4)));
        let s = serde_json::to_string(&v[0]).unwrap();
        assert_eq!(s, r#"{"k":3,"m":4}"#);
        assert!(serde_json::from_str::<UnitScalar>(r#"{"re":2.0,"im":0.0}"#).is_err());
    }

    #[test]
    fn quarter_turns_are_exact_floats() {
        assert_eq!(UnitScalar::mu(3, 4).to_complex(), Complex64::new(0.0, -1.0));
        assert_eq!(UnitScalar::mu(1, 2).to_complex(), Complex64::new(-1.0, 0.0));
    }
}
