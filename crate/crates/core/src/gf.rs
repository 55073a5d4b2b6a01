//! Arithmetic in the small finite fields GF(p^k), q = p^k <= 49.
//!
//! Elements are encoded by their canonical index: the coefficient vector of
//! the representing polynomial read as a base-p integer, constant term
//! least significant. Index 0 is zero and index 1 is one in every field.
//! Extension fields use the fixed Conway polynomials listed in
//! [`CONWAY_MODULI`], so encodings never change between runs.
//!
//! All arithmetic goes through precomputed tables. A [`Field`] is a cheap
//! `Copy` handle to an interned, immutable [`FieldSpec`].

use std::fmt;
use std::ops::Deref;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_Q: u32 = 49;

/// Monic irreducible moduli for the non-prime orders, coefficients listed from
/// the constant term up to the leading 1.
pub const CONWAY_MODULI: &[(u32, &[u32])] = &[
    (4, &[1, 1, 1]),
    (8, &[1, 1, 0, 1]),
    (9, &[2, 2, 1]),
    (16, &[1, 1, 0, 0, 1]),
    (25, &[2, 4, 1]),
    (27, &[1, 2, 0, 1]),
    (32, &[1, 0, 1, 0, 0, 1]),
    (49, &[3, 6, 1]),
];

/// An element of GF(q), stored as its canonical index in `[0, q)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn idx(self) -> u8 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub(crate) fn from_raw(idx: u8) -> FieldElement {
        FieldElement(idx)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The order, characteristic, modulus and operation tables of one field.
pub struct FieldSpec {
    q: u32,
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    special_s: u8,
}

/// Shared handle to an interned [`FieldSpec`].
#[derive(Clone, Copy)]
pub struct Field(&'static FieldSpec);

static FIELDS: [OnceLock<FieldSpec>; MAX_Q as usize + 1] = [const { OnceLock::new() }; MAX_Q as usize + 1];

/// Splits `q` as `p^k` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

impl Field {
    /// Returns the field with `q` elements.
    pub fn new(q: u32) -> Result<Field> {
        let (p, k) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        if q > MAX_Q {
            return Err(Error::Unsupported(format!("field order {q} exceeds {MAX_Q}")));
        }
        let spec = FIELDS[q as usize].get_or_init(|| FieldSpec::build(q, p, k));
        Ok(Field(spec))
    }

    pub fn spec(self) -> &'static FieldSpec {
        self.0
    }
}

impl Deref for Field {
    type Target = FieldSpec;

    fn deref(&self) -> &FieldSpec {
        self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        self.0.q == other.0.q
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldRepr {
    q: u32,
    p: u32,
    k: u32,
    modulus: Vec<u32>,
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        FieldRepr { q: self.q, p: self.p, k: self.k, modulus: self.modulus.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Field, D::Error> {
        let repr = FieldRepr::deserialize(deserializer)?;
        let field = Field::new(repr.q).map_err(serde::de::Error::custom)?;
        if field.p != repr.p || field.k != repr.k || field.modulus != repr.modulus {
            return Err(serde::de::Error::custom(format!(
                "field description does not match the built-in GF({})",
                repr.q
            )));
        }
        Ok(field)
    }
}

impl FieldSpec {
    fn build(q: u32, p: u32, k: u32) -> FieldSpec {
        let modulus: Vec<u32> = if k == 1 {
            Vec::new()
        } else {
            CONWAY_MODULI
                .iter()
                .find(|(order, _)| *order == q)
                .map(|(_, m)| m.to_vec())
                .expect("every supported extension field has a fixed modulus")
        };
        let n = q as usize;
        let digits = |x: u32| -> Vec<u32> {
            let mut v = Vec::with_capacity(k as usize);
            let mut x = x;
            for _ in 0..k {
                v.push(x % p);
                x /= p;
            }
            v
        };
        let encode = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };

        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = encode(&sum) as u8;

                // schoolbook product, then reduce by the monic modulus
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                if k > 1 {
                    for deg in (k as usize..prod.len()).rev() {
                        let c = prod[deg];
                        if c == 0 {
                            continue;
                        }
                        for (i, m) in modulus.iter().enumerate().take(k as usize) {
                            let t = deg - k as usize + i;
                            prod[t] = (prod[t] + (p - c) * m) % p;
                        }
                        prod[deg] = 0;
                    }
                }
                mul[(a * q + b) as usize] = encode(&prod[..k as usize]) as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..n {
            neg[a] = (0..n).find(|&b| add[a * n + b] == 0).expect("additive inverse") as u8;
            if a != 0 {
                // stays 0 if the modulus were reducible; the exhaustive tests catch that
                inv[a] = (1..n).find(|&b| mul[a * n + b] == 1).unwrap_or(0) as u8;
            }
        }

        let special_s = if p != 2 {
            let squares: Vec<bool> = {
                let mut s = vec![false; n];
                for b in 0..n {
                    s[mul[b * n + b] as usize] = true;
                }
                s
            };
            (0..n).find(|&a| !squares[a]).expect("odd-characteristic fields have non-squares") as u8
        } else {
            let mut image = vec![false; n];
            for a in 0..n {
                image[add[mul[a * n + a] as usize * n + a] as usize] = true;
            }
            (0..n).find(|&a| !image[a]).expect("a -> a^2 + a is two-to-one in characteristic 2") as u8
        };

        FieldSpec { q, p, k, modulus, add, mul, neg, inv, special_s }
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Coefficients of the modulus from the constant term up; empty for prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The element with canonical index `idx`.
    pub fn element(&self, idx: u32) -> Result<FieldElement> {
        if idx < self.q {
            Ok(FieldElement(idx as u8))
        } else {
            Err(Error::Unsupported(format!("element index {idx} out of range for GF({})", self.q)))
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.q as u8).map(FieldElement)
    }

    /// Nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = FieldElement> + Clone {
        (1..self.q as u8).map(FieldElement)
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u8)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.0 as usize * self.q as usize + b.0 as usize])
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.inv[a.0 as usize]))
        }
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// `a * b + c`.
    #[inline]
    pub fn mul_add(&self, a: FieldElement, b: FieldElement, c: FieldElement) -> FieldElement {
        self.add(self.mul(a, b), c)
    }

    /// Multiplies by `(-1)^odd`.
    #[inline]
    pub fn signed(&self, a: FieldElement, odd: bool) -> FieldElement {
        if odd {
            self.neg(a)
        } else {
            a
        }
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        self.elements().any(|b| self.mul(b, b) == a)
    }

    /// The scalar used by the representatives of classes 5 and 11: the
    /// least-index non-square for odd `p`, and for `p = 2` the least-index
    /// element not of the form `a^2 + a`.
    pub fn special_s(&self) -> FieldElement {
        FieldElement(self.special_s)
    }
}
