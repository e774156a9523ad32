//! Finite fields `F_{p^deg}` as `F_p[x]/(modulus)`.
//!
//! [`FieldTable`] and [`FieldElement`] are the exact, checked surface. The
//! counting engine runs on the table-driven [`kernel`] instead, which shares
//! the same element numbering (little-endian base-`p` digits of the
//! coefficient vector).

pub mod kernel;
mod prime;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use kernel::{FieldArith, Kernel};
pub use prime::is_prime;

/// Default upper bound on the order of any field we are willing to enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field of order {p}^{deg} exceeds the enumeration cap {cap}")]
    FieldTooLarge { p: u64, deg: u32, cap: u64 },
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("coefficient vector has length {got}, expected {expected}")]
    BadLength { got: usize, expected: usize },
}

#[derive(Debug, PartialEq, Eq)]
struct FieldInner {
    p: u64,
    deg: u32,
    modulus: Vec<u64>,
    order: u64,
}

/// A concrete finite field. Cheap to clone; immutable after construction.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldTable {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p(), self.deg(), self.modulus())
    }
}

/// Builds `F_{p^deg}` with the default enumeration cap.
pub fn build_field(p: u64, deg: u32) -> Result<FieldTable, FieldError> {
    build_field_with_cap(p, deg, DEFAULT_ENUMERATION_CAP)
}

/// Builds `F_{p^deg}` using the lexicographically smallest monic irreducible
/// modulus, coefficients compared from the constant term upwards.
pub fn build_field_with_cap(p: u64, deg: u32, cap: u64) -> Result<FieldTable, FieldError> {
    if deg == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    let order = checked_order(p, deg).filter(|&o| o <= cap);
    let order = order.ok_or(FieldError::FieldTooLarge { p, deg, cap })?;
    let modulus = smallest_irreducible(p, deg as usize);
    Ok(FieldTable {
        inner: Arc::new(FieldInner {
            p,
            deg,
            modulus,
            order,
        }),
    })
}

/// `F_{p^{r k}}` for a base field `F_{p^r}`. Coefficients of the varieties we
/// count live in the prime field, so no embedding of the base is tracked.
pub fn extension_field(base: &FieldTable, k: u32, cap: u64) -> Result<FieldTable, FieldError> {
    if k == 0 {
        return Err(FieldError::ZeroDegree);
    }
    if k == 1 {
        return Ok(base.clone());
    }
    let deg = base.deg().checked_mul(k).ok_or(FieldError::FieldTooLarge {
        p: base.p(),
        deg: u32::MAX,
        cap,
    })?;
    build_field_with_cap(base.p(), deg, cap)
}

fn checked_order(p: u64, deg: u32) -> Option<u64> {
    let mut o: u64 = 1;
    for _ in 0..deg {
        o = o.checked_mul(p)?;
    }
    Some(o)
}

fn smallest_irreducible(p: u64, deg: usize) -> Vec<u64> {
    let mut low = vec![0u64; deg];
    loop {
        let mut cand = low.clone();
        cand.push(1);
        if deg == 1 || is_irreducible(&cand, p) {
            return cand;
        }
        // Advance with c_{deg-1} as the fastest-moving digit so that the
        // constant term is the most significant in the comparison.
        let mut i = deg;
        loop {
            assert!(i > 0, "no irreducible polynomial found");
            i -= 1;
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
        }
    }
}

/// Trial division by every monic polynomial of degree `1..=deg/2`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let deg = f.len() - 1;
    for d in 1..=deg / 2 {
        let mut g = vec![0u64; d + 1];
        g[d] = 1;
        loop {
            if fp::rem(f, &g, p).is_empty() {
                return false;
            }
            let mut i = 0;
            loop {
                if i == d {
                    break;
                }
                g[i] += 1;
                if g[i] < p {
                    break;
                }
                g[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
        }
    }
    true
}

impl FieldTable {
    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn deg(&self) -> u32 {
        self.inner.deg
    }

    /// Monic modulus, ascending coefficients (length `deg + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    pub fn zero(&self) -> FieldElement {
        self.from_index(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_index(1)
    }

    pub fn element(&self, coeffs: Vec<u64>) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.deg() as usize {
            return Err(FieldError::BadLength {
                got: coeffs.len(),
                expected: self.deg() as usize,
            });
        }
        let p = self.p();
        Ok(FieldElement {
            field: self.clone(),
            coeffs: coeffs.into_iter().map(|c| c % p).collect(),
        })
    }

    /// Element whose coefficient vector is the little-endian base-`p`
    /// expansion of `index`.
    pub fn from_index(&self, mut index: u64) -> FieldElement {
        let p = self.p();
        let coeffs = (0..self.deg())
            .map(|_| {
                let d = index % p;
                index /= p;
                d
            })
            .collect();
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// Image of an integer residue in the prime subfield.
    pub fn from_residue(&self, c: u64) -> FieldElement {
        self.from_index(c % self.p())
    }

    /// All elements in canonical digit order: 0, 1, ..., p-1, x, 1+x, ...
    pub fn enumerate(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    /// Table-driven arithmetic for the counting engine.
    pub fn kernel(&self) -> Kernel {
        Kernel::new(self)
    }
}

/// An element of a [`FieldTable`], as residues of `F_p[x]/(modulus)`.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: FieldTable,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
    match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b),
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldTable {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> u64 {
        let p = self.field.p();
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn check(&self, other: &FieldElement) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.field.inner, &other.field.inner) || self.field == other.field {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    fn with(&self, poly: Vec<u64>) -> FieldElement {
        let mut coeffs = poly;
        coeffs.resize(self.field.deg() as usize, 0);
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn add(&self, o: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(o)?;
        let p = self.field.p();
        Ok(self.with(
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| (a + b) % p)
                .collect(),
        ))
    }

    pub fn neg(&self) -> FieldElement {
        let p = self.field.p();
        self.with(self.coeffs.iter().map(|&a| (p - a) % p).collect())
    }

    pub fn sub(&self, o: &FieldElement) -> Result<FieldElement, FieldError> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn mul_unchecked(&self, o: &FieldElement) -> FieldElement {
        let p = self.field.p();
        let prod = fp::mul(&fp::trim(&self.coeffs), &fp::trim(&o.coeffs), p);
        self.with(fp::rem(&prod, self.field.modulus(), p))
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.field.p();
        let inv = fp::inverse_mod(&fp::trim(&self.coeffs), self.field.modulus(), p)
            .expect("nonzero element of a field is invertible");
        Ok(self.with(inv))
    }

    pub fn div(&self, o: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(o)?;
        Ok(self.mul_unchecked(&o.inv()?))
    }

    /// Square-and-multiply. `a^0 = 1` for every `a`, including zero.
    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }
}

/// Polynomial arithmetic over `F_p` on ascending coefficient vectors.
pub(crate) mod fp {
    pub fn trim(a: &[u64]) -> Vec<u64> {
        let mut v = a.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    pub fn inv_scalar(a: u64, p: u64) -> u64 {
        let (mut t, mut new_t) = (0i128, 1i128);
        let (mut r, mut new_r) = (p as i128, (a % p) as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        assert_eq!(r, 1, "scalar not invertible");
        t.rem_euclid(p as i128) as u64
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut c = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = ((c[i + j] as u128 + x as u128 * y as u128) % p as u128) as u64;
            }
        }
        trim(&c)
    }

    /// Returns `(quotient, remainder)`; `m` must be nonzero.
    pub fn div_rem(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let m = trim(m);
        let dm = m.len() - 1;
        let lead_inv = inv_scalar(m[dm], p);
        let mut r = trim(a);
        if r.len() <= dm {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - dm];
        for i in (0..q.len()).rev() {
            let c = (r[i + dm] as u128 * lead_inv as u128 % p as u128) as u64;
            if c == 0 {
                continue;
            }
            q[i] = c;
            for (j, &mc) in m.iter().enumerate() {
                let sub = (c as u128 * mc as u128 % p as u128) as u64;
                r[i + j] = (r[i + j] + p - sub) % p;
            }
        }
        r.truncate(dm);
        (trim(&q), trim(&r))
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        div_rem(a, m, p).1
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let v: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&v)
    }

    /// Inverse of `a` modulo `m`, if they are coprime.
    pub fn inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let (mut r0, mut r1) = (trim(m), rem(a, m, p));
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = div_rem(&r0, &r1, p);
            let t = sub(&t0, &mul(&q, &t1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.len() != 1 {
            return None;
        }
        let s = inv_scalar(r0[0], p);
        Some(trim(&t0.iter().map(|&c| (c as u128 * s as u128 % p as u128) as u64).collect::<Vec<_>>()))
    }
}
