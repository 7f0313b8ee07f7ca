use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use alloc::format;

use crate::error::Error;

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// An element of `Q/Z`, stored as a reduced fraction `num/den` with
/// `0 <= num < den`. Zero is `0/1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QmodZ {
    num: u64,
    den: u64,
}

impl QmodZ {
    pub const ZERO: QmodZ = QmodZ { num: 0, den: 1 };

    /// `num/den` reduced into `[0, 1)`. Panics if `den == 0`.
    pub fn new(num: i128, den: u64) -> QmodZ {
        assert!(den != 0, "zero denominator");
        let r = num.rem_euclid(den as i128) as u64;
        let g = gcd(r, den);
        if r == 0 {
            QmodZ::ZERO
        } else {
            QmodZ { num: r / g, den: den / g }
        }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `k * self`.
    pub fn scale(self, k: i128) -> QmodZ {
        QmodZ::new(k * self.num as i128, self.den)
    }

    /// The integer `c` with `self = c / modulus`, if `den` divides `modulus`.
    pub fn numerator_over(self, modulus: u64) -> Option<u64> {
        if modulus.is_multiple_of(self.den) {
            Some(self.num * (modulus / self.den))
        } else {
            None
        }
    }
}

impl Default for QmodZ {
    fn default() -> Self {
        QmodZ::ZERO
    }
}

impl Add for QmodZ {
    type Output = QmodZ;
    fn add(self, rhs: QmodZ) -> QmodZ {
        let den = lcm(self.den, rhs.den);
        let a = self.num as i128 * (den / self.den) as i128;
        let b = rhs.num as i128 * (den / rhs.den) as i128;
        QmodZ::new(a + b, den)
    }
}

impl Neg for QmodZ {
    type Output = QmodZ;
    fn neg(self) -> QmodZ {
        QmodZ::new(-(self.num as i128), self.den)
    }
}

impl Sub for QmodZ {
    type Output = QmodZ;
    fn sub(self, rhs: QmodZ) -> QmodZ {
        self + (-rhs)
    }
}

impl core::iter::Sum for QmodZ {
    fn sum<I: Iterator<Item = QmodZ>>(iter: I) -> QmodZ {
        iter.fold(QmodZ::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for QmodZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `"a/b"` or a bare integer (read modulo 1, so any integer is zero).
impl FromStr for QmodZ {
    type Err = Error;
    fn from_str(s: &str) -> Result<QmodZ, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a Q/Z value: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: i128 = n.trim().parse().map_err(|_| bad())?;
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                if d == 0 {
                    return Err(bad());
                }
                Ok(QmodZ::new(n, d))
            }
            None => {
                let _: i128 = s.parse().map_err(|_| bad())?;
                Ok(QmodZ::ZERO)
            }
        }
    }
}
