//! Arithmetic in prime fields GF(q).
//!
//! [`PrimeField`] is a small `Copy` handle carrying the modulus. Elements carry
//! their modulus too, so mixing elements of different fields is caught at the
//! call site instead of silently reducing by the wrong prime. The matrix code
//! works on raw `u32` residues through the `*_raw` helpers.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted by [`PrimeField::new`].
pub const DEFAULT_MAX_MODULUS: u32 = 13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    q: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u32,
    modulus: u32,
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let q = u64::from(q);
    let mut d = 2u64;
    while d * d <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PrimeField {
    /// GF(q) with the default modulus cap.
    pub fn new(q: u32) -> Result<Self> {
        Self::with_limit(q, DEFAULT_MAX_MODULUS)
    }

    pub fn with_limit(q: u32, limit: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        if q > limit {
            return Err(Error::ModulusTooLarge { q, limit });
        }
        Ok(Self { q })
    }

    pub fn gf2() -> Self {
        Self { q: 2 }
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.q
    }

    pub fn element(self, value: u64) -> Result<FieldElement> {
        if value >= u64::from(self.q) {
            return Err(Error::NotInField { value, q: self.q });
        }
        Ok(FieldElement {
            value: value as u32,
            modulus: self.q,
        })
    }

    /// Reduces an arbitrary integer into the field.
    pub fn reduce(self, value: i64) -> FieldElement {
        FieldElement {
            value: value.rem_euclid(i64::from(self.q)) as u32,
            modulus: self.q,
        }
    }

    pub fn zero(self) -> FieldElement {
        FieldElement {
            value: 0,
            modulus: self.q,
        }
    }

    pub fn one(self) -> FieldElement {
        FieldElement {
            value: 1,
            modulus: self.q,
        }
    }

    pub fn elements(self) -> impl Iterator<Item = FieldElement> {
        let q = self.q;
        (0..q).map(move |value| FieldElement { value, modulus: q })
    }

    fn check(self, x: FieldElement) -> Result<()> {
        if x.modulus != self.q {
            return Err(Error::FieldMismatch {
                left: self.q,
                right: x.modulus,
            });
        }
        Ok(())
    }

    pub fn add(self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElement {
            value: self.add_raw(x.value, y.value),
            modulus: self.q,
        })
    }

    pub fn sub(self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElement {
            value: self.sub_raw(x.value, y.value),
            modulus: self.q,
        })
    }

    pub fn mul(self, x: FieldElement, y: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(FieldElement {
            value: self.mul_raw(x.value, y.value),
            modulus: self.q,
        })
    }

    pub fn neg(self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        Ok(FieldElement {
            value: self.neg_raw(x.value),
            modulus: self.q,
        })
    }

    pub fn inv(self, x: FieldElement) -> Result<FieldElement> {
        self.check(x)?;
        if x.value == 0 {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement {
            value: self.inv_raw(x.value),
            modulus: self.q,
        })
    }

    #[inline]
    pub fn add_raw(self, x: u32, y: u32) -> u32 {
        let s = x + y;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    #[inline]
    pub fn sub_raw(self, x: u32, y: u32) -> u32 {
        if x >= y {
            x - y
        } else {
            x + self.q - y
        }
    }

    #[inline]
    pub fn neg_raw(self, x: u32) -> u32 {
        if x == 0 {
            0
        } else {
            self.q - x
        }
    }

    #[inline]
    pub fn mul_raw(self, x: u32, y: u32) -> u32 {
        ((u64::from(x) * u64::from(y)) % u64::from(self.q)) as u32
    }

    /// Inverse by the extended Euclidean algorithm. `x` must be a nonzero residue.
    pub fn inv_raw(self, x: u32) -> u32 {
        debug_assert!(x != 0 && x < self.q);
        let (mut r0, mut r1) = (i64::from(self.q), i64::from(x));
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let quot = r0 / r1;
            (r0, r1) = (r1, r0 - quot * r1);
            (t0, t1) = (t1, t0 - quot * t1);
        }
        t0.rem_euclid(i64::from(self.q)) as u32
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl FieldElement {
    #[inline]
    pub fn value(self) -> u32 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}
