//! Arithmetic in finite fields GF(p^m) with q = p^m <= 2^16.
//!
//! Elements are carried as canonical integers in `[0, q)`. For an extension
//! field the integer is the base-`p` encoding of the residue polynomial, so
//! the coefficient of `x^i` is the `i`-th base-`p` digit. In characteristic 2
//! this is the usual bitmask: `x^4 + x + 1` is `0b10011`.
//!
//! Multiplication goes through log/antilog tables built once per field from a
//! primitive element. A slow polynomial path (`mul_poly`, `inv_fermat`) is kept
//! as an independent reference for the tables.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u64 = 1 << 16;

/// Default moduli for GF(2^m), m = 1..=16 (Conway polynomials, bitmask encoded).
const BINARY_MODULI: [u32; 16] = [
    0x3, 0x7, 0xB, 0x13, 0x25, 0x5B, 0x83, 0x11D, 0x211, 0x46F, 0x805, 0x10EB, 0x201B, 0x40A9,
    0x8035, 0x1002D,
];

/// A validated finite field. Cheap to clone; clones share the tables.
#[derive(Clone)]
pub struct Field {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Option<u32>,
    // exp has length 2(q-1) so that exp[log a + log b] needs no reduction
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.inner.modulus {
            Some(poly) => write!(f, "GF({}^{}, poly={})", self.inner.p, self.inner.m, poly),
            None => write!(f, "GF({})", self.inner.p),
        }
    }
}

/// Serializes as `q=<int>` plus ` poly=<int>` for extension fields.
impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={}", self.inner.q)?;
        if let Some(poly) = self.inner.modulus {
            write!(f, " poly={poly}")?;
        }
        Ok(())
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// Builds GF(p^m). When `modulus` is omitted and `m > 1` a built-in
    /// irreducible polynomial is chosen deterministically.
    pub fn new(p: u32, m: u32, modulus: Option<u32>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::BadParams(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_ORDER);
        let q = match q {
            Some(q) => q as u32,
            None => return Err(Error::TooLarge(format!("{p}^{m} exceeds 2^16"))),
        };

        let modulus = if m == 1 {
            if modulus.is_some() {
                return Err(Error::BadParams("prime fields take no modulus".into()));
            }
            None
        } else {
            let poly = match modulus {
                Some(poly) => poly,
                None => default_modulus(p, m),
            };
            let digits = to_digits(poly, p);
            if digits.len() != m as usize + 1 || digits[m as usize] != 1 {
                return Err(Error::BadParams(format!(
                    "modulus {poly} is not a monic polynomial of degree {m} over GF({p})"
                )));
            }
            if !is_irreducible(&digits, p) {
                return Err(Error::Reducible {
                    p,
                    degree: m,
                    modulus: poly,
                });
            }
            Some(poly)
        };

        let mut inner = Inner {
            p,
            m,
            q,
            modulus,
            exp: Vec::new(),
            log: Vec::new(),
        };
        build_tables(&mut inner);
        Ok(Field {
            inner: Arc::new(inner),
        })
    }

    /// Builds the field of order `q`, factoring `q` as a prime power.
    pub fn with_order(q: u32, modulus: Option<u32>) -> Result<Field> {
        if q as u64 > MAX_ORDER {
            return Err(Error::TooLarge(format!("field order {q} exceeds 2^16")));
        }
        if q < 2 {
            return Err(Error::NotPrime(q));
        }
        let p = (2..=q).find(|d| q.is_multiple_of(*d)).unwrap();
        let mut m = 0;
        let mut rest = q;
        while rest.is_multiple_of(p) {
            rest /= p;
            m += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrime(q));
        }
        Field::new(p, m, modulus)
    }

    pub fn characteristic(&self) -> u32 {
        self.inner.p
    }

    pub fn degree(&self) -> u32 {
        self.inner.m
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<u32> {
        self.inner.modulus
    }

    /// All elements: 0 first, then the nonzero ones in increasing encoding.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.inner.q
    }

    pub fn elem(&self, value: u32) -> Result<FieldElem> {
        if value >= self.inner.q {
            return Err(Error::BadParams(format!(
                "{value} is not an element of a field of order {}",
                self.inner.q
            )));
        }
        Ok(FieldElem {
            value,
            field: self.clone(),
        })
    }

    #[inline]
    pub fn contains(&self, value: u32) -> bool {
        value < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        if inner.p == 2 {
            a ^ b
        } else if inner.m == 1 {
            let s = a + b;
            if s >= inner.p {
                s - inner.p
            } else {
                s
            }
        } else {
            digitwise(a, b, inner.p, |x, y| (x + y) % inner.p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        let inner = &*self.inner;
        if inner.p == 2 {
            a
        } else if inner.m == 1 {
            if a == 0 {
                0
            } else {
                inner.p - a
            }
        } else {
            digitwise(a, 0, inner.p, |x, _| (inner.p - x) % inner.p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &*self.inner;
        inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize]
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// On `a == 0`; the checked path is [`FieldElem::inv`].
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let inner = &*self.inner;
        let order = inner.q - 1;
        inner.exp[((order - inner.log[a as usize]) % order) as usize]
    }

    #[inline]
    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let inner = &*self.inner;
        let order = (inner.q - 1) as u64;
        let l = (inner.log[a as usize] as u64 * (e % order)) % order;
        inner.exp[l as usize]
    }

    /// Schoolbook multiplication modulo the defining polynomial, bypassing
    /// the log tables.
    pub fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let inner = &*self.inner;
        match inner.modulus {
            None => ((a as u64 * b as u64) % inner.p as u64) as u32,
            Some(poly) => {
                let p = inner.p;
                let da = to_digits(a, p);
                let db = to_digits(b, p);
                if da.is_empty() || db.is_empty() {
                    return 0;
                }
                let mut prod = vec![0u32; da.len() + db.len() - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                from_digits(&poly_rem(&prod, &to_digits(poly, p), p), p)
            }
        }
    }

    /// Inverse by Fermat exponentiation `a^(q-2)` over [`Field::mul_poly`].
    pub fn inv_fermat(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let mut result = 1;
        let mut base = a;
        let mut e = self.inner.q - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul_poly(result, base);
            }
            base = self.mul_poly(base, base);
            e >>= 1;
        }
        Some(result)
    }
}

/// An element tagged with its field, for checked arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    value: u32,
    field: Field,
}

impl FieldElem {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    fn with(&self, value: u32) -> FieldElem {
        FieldElem {
            value,
            field: self.field.clone(),
        }
    }

    pub fn add(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.add(self.value, rhs.value)))
    }

    pub fn sub(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.sub(self.value, rhs.value)))
    }

    pub fn mul(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.same_field(rhs)?;
        Ok(self.with(self.field.mul(self.value, rhs.value)))
    }

    pub fn div(&self, rhs: &FieldElem) -> Result<FieldElem> {
        self.same_field(rhs)?;
        if rhs.value == 0 {
            return Err(Error::DivideByZero);
        }
        Ok(self.with(self.field.div(self.value, rhs.value)))
    }

    pub fn neg(&self) -> FieldElem {
        self.with(self.field.neg(self.value))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.value == 0 {
            return Err(Error::DivideByZero);
        }
        Ok(self.with(self.field.inv(self.value)))
    }

    pub fn pow(&self, e: u64) -> FieldElem {
        self.with(self.field.pow(self.value, e))
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

fn default_modulus(p: u32, m: u32) -> u32 {
    if p == 2 {
        return BINARY_MODULI[m as usize - 1];
    }
    // smallest monic primitive polynomial in encoding order
    let base = p.pow(m);
    (base..2 * base)
        .find(|&poly| {
            let digits = to_digits(poly, p);
            is_irreducible(&digits, p) && x_is_primitive(&digits, p)
        })
        .expect("a primitive polynomial exists for every degree")
}

fn x_is_primitive(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() - 1;
    let q = (p as u64).pow(m as u32);
    let order = q - 1;
    let x = vec![0, 1];
    let one = vec![1];
    let mut n = order;
    let mut primes = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            primes.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        primes.push(n);
    }
    primes
        .iter()
        .all(|&f| poly_pow_mod(&x, order / f, modulus, p) != one)
}

fn poly_pow_mod(base: &[u32], mut e: u64, modulus: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut b = poly_rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = poly_rem(&poly_mul(&result, &b, p), modulus, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), modulus, p);
        e >>= 1;
    }
    result
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(&mut out);
    out
}

/// Irreducible iff no monic factor of degree 1..=m/2 divides it.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let m = poly.len() - 1;
    for d in 1..=m / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut factor = to_digits(low, p);
            factor.resize(d, 0);
            factor.push(1);
            if poly_rem(poly, &factor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Remainder of `a` modulo the monic-or-not polynomial `b` (both little-endian digits).
fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut rem = a.to_vec();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = inv_mod(b[db], p);
    while rem.len() > db {
        let top = rem.len() - 1;
        let coeff = (rem[top] * lead_inv) % p;
        let shift = top - db;
        for (i, &c) in b.iter().enumerate() {
            rem[shift + i] = (rem[shift + i] + p - (coeff * c) % p) % p;
        }
        trim(&mut rem);
    }
    rem
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn to_digits(mut value: u32, p: u32) -> Vec<u32> {
    let mut digits = Vec::new();
    while value > 0 {
        digits.push(value % p);
        value /= p;
    }
    digits
}

fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[inline]
fn digitwise(mut a: u32, mut b: u32, p: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let mut out = 0;
    let mut scale = 1;
    while a > 0 || b > 0 {
        out += op(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn build_tables(inner: &mut Inner) {
    let q = inner.q;
    let order = q - 1;
    let field = Field {
        inner: Arc::new(Inner {
            p: inner.p,
            m: inner.m,
            q,
            modulus: inner.modulus,
            exp: Vec::new(),
            log: Vec::new(),
        }),
    };
    let mut exp = vec![0u32; 2 * order as usize];
    let mut log = vec![0u32; q as usize];
    let generator = if q == 2 {
        1
    } else {
        (2..q)
            .find(|&g| {
                let mut x = g;
                for _ in 1..order {
                    if x == 1 {
                        return false;
                    }
                    x = field.mul_poly(x, g);
                }
                x == 1
            })
            .expect("multiplicative group is cyclic")
    };
    let mut x = 1;
    for i in 0..order {
        exp[i as usize] = x;
        exp[(i + order) as usize] = x;
        log[x as usize] = i;
        x = field.mul_poly(x, generator);
    }
    inner.exp = exp;
    inner.log = log;
}
