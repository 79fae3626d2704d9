use std::f64::consts::TAU;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_Q: u32 = 64;

const TABLE_COUNT: usize = (MAX_Q / 2) as usize;

static PHASE_TABLES: [OnceLock<Box<[Complex64]>>; TABLE_COUNT] =
    [const { OnceLock::new() }; TABLE_COUNT];

/// The ring Z_q for an even `q` in `[2, 64]`, together with the q-th roots of
/// unity `xi^t = exp(2 pi i t / q)`.
///
/// Phase tables are built once per `q` and shared, so the handle itself is
/// `Copy`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Modulus {
    q: u32,
}

impl Modulus {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 || q > MAX_Q || q % 2 != 0 {
            return Err(Error::InvalidModulus(q));
        }
        Ok(Self { q })
    }

    #[inline]
    pub fn q(self) -> u32 {
        self.q
    }

    #[inline]
    pub fn half(self) -> u32 {
        self.q / 2
    }

    #[inline]
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.q as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.q
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.q - b % self.q) % self.q
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        (self.q - a % self.q) % self.q
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.q
    }

    /// `xi^t` for any integer exponent.
    #[inline]
    pub fn phase(self, t: u32) -> Complex64 {
        self.phase_table()[(t % self.q) as usize]
    }

    pub fn phase_table(self) -> &'static [Complex64] {
        PHASE_TABLES[(self.q / 2 - 1) as usize].get_or_init(|| build_table(self.q))
    }

    /// Inverse of [`Modulus::phase`] for values within `tol` of a q-th root of unity.
    pub fn phase_index(self, z: Complex64, tol: f64) -> Option<u32> {
        if (z.norm() - 1.0).abs() > tol {
            return None;
        }
        let t = (z.arg() / TAU * self.q as f64).round() as i64;
        let t = self.reduce(t);
        ((self.phase(t) - z).norm() <= tol).then_some(t)
    }
}

fn build_table(q: u32) -> Box<[Complex64]> {
    (0..q)
        .map(|t| {
            // Snap the axis points so that +-1 and +-i are exact.
            if (4 * t) % q == 0 {
                match 4 * t / q {
                    0 => Complex64::new(1.0, 0.0),
                    1 => Complex64::new(0.0, 1.0),
                    2 => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                }
            } else {
                Complex64::from_polar(1.0, TAU * t as f64 / q as f64)
            }
        })
        .collect()
}

impl TryFrom<u32> for Modulus {
    type Error = Error;

    fn try_from(q: u32) -> Result<Self> {
        Modulus::new(q)
    }
}

impl From<Modulus> for u32 {
    fn from(m: Modulus) -> u32 {
        m.q
    }
}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z{}", self.q)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q)
    }
}
