//! Signed-digit representations with digits in `{-1, 0, +1}`.

use std::fmt;

/// Digits are little-endian: `value = sum digits[a] * 2^a`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Sdr {
    digits: Vec<i8>,
}

impl Sdr {
    /// Panics if a digit is outside `{-1, 0, 1}`.
    pub fn new(digits: Vec<i8>) -> Self {
        assert!(digits.iter().all(|d| (-1..=1).contains(d)), "SDR digits must be in {{-1,0,1}}");
        Self { digits }
    }

    pub fn digits(&self) -> &[i8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Panics if the value does not fit in an `i64`.
    pub fn value(&self) -> i64 {
        let v = self.digits.iter().rev().fold(0i128, |acc, &d| 2 * acc + d as i128);
        i64::try_from(v).expect("SDR value exceeds i64")
    }

    /// No two adjacent nonzero digits.
    pub fn is_sparse(&self) -> bool {
        self.digits.windows(2).all(|w| w[0] == 0 || w[1] == 0)
    }

    /// Sparse with a nonzero leading digit (the empty SDR for zero).
    pub fn is_canonical(&self) -> bool {
        self.is_sparse() && self.digits.last().is_none_or(|&d| d != 0)
    }
}

impl fmt::Debug for Sdr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Sdr(")?;
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// The unique sparse SDR of `i` with nonzero leading digit.
///
/// Built least-significant digit first: an even value contributes `0`, a value
/// `1 mod 4` contributes `1, 0` and a value `-1 mod 4` contributes `-1, 0`.
pub fn sparse_sdr(i: i64) -> Sdr {
    let negative = i < 0;
    let mut v = i.unsigned_abs() as i128;
    let mut digits = Vec::new();
    while v != 0 {
        if v == 1 {
            digits.push(1);
            break;
        }
        if v % 2 == 0 {
            digits.push(0);
            v /= 2;
        } else if v % 4 == 1 {
            digits.extend([1, 0]);
            v = (v - 1) / 4;
        } else {
            digits.extend([-1, 0]);
            v = (v + 1) / 4;
        }
    }
    // An odd step may emit a trailing zero when the quotient is already zero.
    while digits.last() == Some(&0) {
        digits.pop();
    }
    if negative {
        digits.iter_mut().for_each(|d| *d = -*d);
    }
    Sdr { digits }
}
