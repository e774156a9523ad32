//! Exact arithmetic in `Q(u)`, `u = q^(1/r)` the positive real root.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PadicError;
use crate::upoly::QPoly;

/// Precision doublings allowed when resolving a sign.
pub const MAX_DOUBLINGS: u32 = 64;
const START_BITS: u64 = 64;

/// Largest `m` with `q = s^m`, and that `s`.
fn perfect_power(q: &BigInt) -> (BigInt, u32) {
    let bits = q.bits() as u32;
    for m in (2..=bits.max(2)).rev() {
        let s = q.nth_root(m);
        if Pow::pow(&s, m) == *q {
            return (s, m);
        }
    }
    (q.clone(), 1)
}

/// The minimal polynomial of `q^(1/r)` over `Q` is `x^b - c`; returns `(b, c)`.
pub fn minimal_binomial(r: u32, q: &BigInt) -> (u32, BigInt) {
    let (s, m) = perfect_power(q);
    let g = m.gcd(&r);
    (r / g, Pow::pow(&s, m / g))
}

/// Capelli's criterion for `x^r - q` with `q > 0`: irreducible iff `q` is
/// not a `p`-th power for any prime `p | r`.
pub fn binomial_is_irreducible(r: u32, q: &BigInt) -> bool {
    minimal_binomial(r, q).0 == r
}

/// `sum coeffs[m] u^m` with `u^r = q`, kept reduced modulo the minimal
/// polynomial of `u`, so equal values have equal coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedRational {
    r: u32,
    q: BigInt,
    coeffs: Vec<BigRational>,
}

impl ExtendedRational {
    /// Reduces `sum coeffs[m] u^m`; `coeffs` may have any length.
    pub fn new(r: u32, q: BigInt, coeffs: Vec<BigRational>) -> Self {
        assert!(r >= 1 && q.is_positive(), "value field needs r >= 1 and q > 0");
        let (b, c) = minimal_binomial(r, &q);
        let b = b as usize;
        let c = BigRational::from_integer(c);
        let mut reduced = vec![BigRational::zero(); r as usize];
        let mut cpow = vec![BigRational::one()];
        for (m, a) in coeffs.into_iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (t, i) = (m / b, m % b);
            while cpow.len() <= t {
                let next = cpow.last().unwrap() * &c;
                cpow.push(next);
            }
            reduced[i] += a * &cpow[t];
        }
        ExtendedRational { r, q, coeffs: reduced }
    }

    pub fn from_rational(r: u32, q: BigInt, x: BigRational) -> Self {
        Self::new(r, q, vec![x])
    }

    pub fn from_int(r: u32, q: &BigInt, x: i64) -> Self {
        Self::from_rational(r, q.clone(), BigRational::from_integer(BigInt::from(x)))
    }

    /// `u^e` for any integer `e`.
    pub fn u_pow(r: u32, q: &BigInt, e: i64) -> Self {
        let (t, m) = e.div_mod_floor(&(r as i64));
        let qt = if t >= 0 {
            BigRational::from_integer(Pow::pow(q, t as u64))
        } else {
            BigRational::new(BigInt::one(), Pow::pow(q, (-t) as u64))
        };
        let mut coeffs = vec![BigRational::zero(); m as usize + 1];
        coeffs[m as usize] = qt;
        Self::new(r, q.clone(), coeffs)
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_field(&self, o: &Self) -> bool {
        self.r == o.r && self.q == o.q
    }

    fn check(&self, o: &Self) {
        assert!(
            self.same_field(o),
            "values from Q(q^(1/{})) with q = {} and Q(q^(1/{})) with q = {}",
            self.r,
            self.q,
            o.r,
            o.q
        );
    }

    fn poly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    fn minpoly(&self) -> QPoly {
        let (b, c) = minimal_binomial(self.r, &self.q);
        let mut m = vec![BigRational::zero(); b as usize + 1];
        m[0] = -BigRational::from_integer(c);
        m[b as usize] = BigRational::one();
        QPoly::new(m)
    }

    pub fn inv(&self) -> Result<Self, PadicError> {
        if self.is_zero() {
            return Err(PadicError::DivisionByZero);
        }
        let inv = self
            .poly()
            .inverse_mod(&self.minpoly())
            .expect("nonzero elements of a field are invertible");
        Ok(Self::new(self.r, self.q.clone(), inv.coeffs().to_vec()))
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, PadicError> {
        self.check(o);
        Ok(self * &o.inv()?)
    }

    /// Re-expresses the value in `Q(q^(1/r_new))` for a multiple `r_new` of
    /// `r`, where `q^(1/r) = (q^(1/r_new))^(r_new/r)`.
    pub fn lift(&self, r_new: u32) -> Result<Self, PadicError> {
        if r_new == 0 || r_new % self.r != 0 {
            return Err(PadicError::NotMultiple { r: self.r, r_new });
        }
        let f = (r_new / self.r) as usize;
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * f + 1];
        for (m, a) in self.coeffs.iter().enumerate() {
            coeffs[m * f] = a.clone();
        }
        Ok(Self::new(r_new, self.q.clone(), coeffs))
    }

    /// Brings both values into the field of index `lcm(r, r')`.
    pub fn common(a: &Self, b: &Self) -> Result<(Self, Self), PadicError> {
        if a.q != b.q {
            return Err(PadicError::FieldMismatch);
        }
        let r = a.r.lcm(&b.r);
        Ok((a.lift(r)?, b.lift(r)?))
    }

    /// Rational bounds `lo <= u <= hi` with `hi - lo <= 2^-bits`.
    fn u_bounds(&self, bits: u64) -> (BigRational, BigRational) {
        let scale = BigInt::one() << bits;
        let big = &self.q * Pow::pow(&scale, self.r);
        let n = big.nth_root(self.r);
        let lo = BigRational::new(n.clone(), scale.clone());
        if Pow::pow(&n, self.r) == big {
            (lo.clone(), lo)
        } else {
            (lo, BigRational::new(n + 1, scale))
        }
    }

    /// An interval containing the value, from `u` known to `bits` bits.
    pub fn enclose(&self, bits: u64) -> (BigRational, BigRational) {
        let (ulo, uhi) = self.u_bounds(bits);
        let (mut lo, mut hi) = (BigRational::zero(), BigRational::zero());
        let (mut plo, mut phi) = (BigRational::one(), BigRational::one());
        for c in &self.coeffs {
            if c.is_positive() {
                lo += c * &plo;
                hi += c * &phi;
            } else if c.is_negative() {
                lo += c * &phi;
                hi += c * &plo;
            }
            plo *= &ulo;
            phi *= &uhi;
        }
        (lo, hi)
    }

    /// Sign of the real value. A nonzero value is bounded away from zero, so
    /// refinement terminates; the doubling cap turns a runaway into an error.
    pub fn signum(&self) -> Result<Ordering, PadicError> {
        if self.is_zero() {
            return Ok(Ordering::Equal);
        }
        let mut bits = START_BITS;
        for _ in 0..=MAX_DOUBLINGS {
            let (lo, hi) = self.enclose(bits);
            if lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if hi.is_negative() {
                return Ok(Ordering::Less);
            }
            bits *= 2;
        }
        Err(PadicError::SignUnresolved)
    }

    pub fn cmp_value(&self, o: &Self) -> Result<Ordering, PadicError> {
        let (a, b) = Self::common(self, o)?;
        (&a - &b).signum()
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, hi) = self.enclose(80);
        let mid = (lo + hi) / BigRational::from_integer(BigInt::from(2));
        crate::upoly::rat_to_f64(&mid)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let tol = BigRational::new(BigInt::one(), Pow::pow(&BigInt::from(10), digits as u32 + 4));
        let mut bits = START_BITS.max(4 * digits as u64);
        loop {
            let (lo, hi) = self.enclose(bits);
            let mid = (&lo + &hi) / BigRational::from_integer(BigInt::from(2));
            if (&hi - &lo) <= &tol * mid.abs() || bits > 1 << 20 {
                return format_decimal(&mid, digits);
            }
            bits *= 2;
        }
    }

    /// `c0 + c1*u + ...` with `u = q^(1/r)`.
    pub fn symbolic(&self) -> String {
        let u = if self.r == 1 {
            self.q.to_string()
        } else {
            format!("{}^(1/{})", self.q, self.r)
        };
        let mut out = String::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            let term = match m {
                0 => mag.to_string(),
                _ => {
                    let power = if m == 1 { "u".to_string() } else { format!("u^{m}") };
                    if mag.is_one() {
                        power
                    } else {
                        format!("{mag}*{power}")
                    }
                }
            };
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        if self.r > 1 && self.coeffs.iter().skip(1).any(|c| !c.is_zero()) {
            out.push_str(&format!(" (u = {u})"));
        }
        out
    }
}

fn format_decimal(x: &BigRational, digits: usize) -> String {
    let neg = x.is_negative();
    let x = x.abs();
    let ten = BigInt::from(10);
    // estimate floor(log10 x), then correct
    let mut e = x.numer().to_string().len() as i64 - x.denom().to_string().len() as i64;
    let scaled = |e: i64| -> BigInt {
        let shift = digits as i64 - 1 - e;
        let v = if shift >= 0 {
            &x * BigRational::from_integer(Pow::pow(&ten, shift as u64))
        } else {
            &x / BigRational::from_integer(Pow::pow(&ten, (-shift) as u64))
        };
        v.round().to_integer()
    };
    let limit = Pow::pow(&ten, digits as u32);
    let low = Pow::pow(&ten, digits as u32 - 1);
    let mut s = scaled(e);
    while s >= limit {
        e += 1;
        s = scaled(e);
    }
    while s < low {
        e -= 1;
        s = scaled(e);
    }
    let d = s.to_string();
    let body = if (0..digits as i64).contains(&e) {
        let (a, b) = d.split_at(e as usize + 1);
        if b.is_empty() {
            a.to_string()
        } else {
            format!("{a}.{b}")
        }
    } else if (-6..0).contains(&e) {
        format!("0.{}{}", "0".repeat((-e - 1) as usize), d)
    } else {
        format!("{}.{}e{}", &d[..1], &d[1..], e)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

impl Add for &ExtendedRational {
    type Output = ExtendedRational;
    fn add(self, o: &ExtendedRational) -> ExtendedRational {
        self.check(o);
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        ExtendedRational {
            r: self.r,
            q: self.q.clone(),
            coeffs,
        }
    }
}

impl Sub for &ExtendedRational {
    type Output = ExtendedRational;
    fn sub(self, o: &ExtendedRational) -> ExtendedRational {
        self + &(-o)
    }
}

impl Neg for &ExtendedRational {
    type Output = ExtendedRational;
    fn neg(self) -> ExtendedRational {
        ExtendedRational {
            r: self.r,
            q: self.q.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &ExtendedRational {
    type Output = ExtendedRational;
    fn mul(self, o: &ExtendedRational) -> ExtendedRational {
        self.check(o);
        let p = &self.poly() * &o.poly();
        ExtendedRational::new(self.r, self.q.clone(), p.coeffs().to_vec())
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.symbolic())
    }
}

/// `{"r": int, "q": int, "coeffs": ["num/den", ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtendedRationalSpec {
    pub r: u32,
    pub q: u64,
    pub coeffs: Vec<String>,
}

impl From<&ExtendedRational> for ExtendedRationalSpec {
    fn from(x: &ExtendedRational) -> Self {
        ExtendedRationalSpec {
            r: x.r,
            q: x.q.to_u64().expect("field order fits in u64"),
            coeffs: x
                .coeffs
                .iter()
                .map(|c| format!("{}/{}", c.numer(), c.denom()))
                .collect(),
        }
    }
}

impl TryFrom<&ExtendedRationalSpec> for ExtendedRational {
    type Error = PadicError;

    fn try_from(s: &ExtendedRationalSpec) -> Result<Self, PadicError> {
        if s.r == 0 || s.q == 0 {
            return Err(PadicError::BadValue("r and q must be positive".into()));
        }
        let coeffs = s
            .coeffs
            .iter()
            .map(|c| parse_rational(c).ok_or_else(|| PadicError::BadValue(format!("bad rational `{c}`"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ExtendedRational::new(s.r, BigInt::from(s.q), coeffs))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    (d.sign() != Sign::NoSign).then(|| BigRational::new(n, d))
}

impl Serialize for ExtendedRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ExtendedRationalSpec::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExtendedRational {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let spec = ExtendedRationalSpec::deserialize(d)?;
        ExtendedRational::try_from(&spec).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(q(n), q(d))
    }

    #[test]
    fn reduction_and_powers() {
        let u = ExtendedRational::u_pow(3, &q(2), 1);
        let u3 = &(&u * &u) * &u;
        assert_eq!(u3, ExtendedRational::from_int(3, &q(2), 2));
        assert_eq!(ExtendedRational::u_pow(3, &q(2), -3), ExtendedRational::from_rational(3, q(2), rat(1, 2)));
        assert_eq!(ExtendedRational::u_pow(3, &q(2), -1), ExtendedRational::new(3, q(2), vec![rat(0, 1), rat(0, 1), rat(1, 2)]));
    }

    #[test]
    fn reducible_binomial_zero_test() {
        // u = 4^(1/2) = 2, so u - 2 is zero
        let u = ExtendedRational::u_pow(2, &q(4), 1);
        assert_eq!(u, ExtendedRational::from_int(2, &q(4), 2));
        assert!(!binomial_is_irreducible(2, &q(4)));
        assert!(binomial_is_irreducible(3, &q(2)));
        assert!(!binomial_is_irreducible(6, &q(8)));
        // u = 8^(1/6) = sqrt(2): minimal polynomial x^2 - 2
        assert_eq!(minimal_binomial(6, &q(8)), (2, q(2)));
        assert_eq!(minimal_binomial(4, &q(4)), (2, q(2)));
        assert_eq!(minimal_binomial(2, &q(9)), (1, q(3)));
    }

    #[test]
    fn inverse_of_cube_root_expression() {
        // 1/(u^2 - 1) with u^3 = 2 is (u^2 + u + 1)/... check by multiplying back
        let u2 = ExtendedRational::u_pow(3, &q(2), 2);
        let one = ExtendedRational::from_int(3, &q(2), 1);
        let d = &u2 - &one;
        let inv = d.inv().unwrap();
        assert_eq!(&inv * &d, one);
        let x = 1.0 / (2f64.powf(2.0 / 3.0) - 1.0);
        assert!((inv.to_f64() - x).abs() < 1e-12);
        assert!(ExtendedRational::from_int(3, &q(2), 0).inv().is_err());
    }

    #[test]
    fn signs_and_order() {
        let u = ExtendedRational::u_pow(2, &q(2), 1);
        let a = &u - &ExtendedRational::from_rational(2, q(2), rat(141421356, 100000000));
        assert_eq!(a.signum().unwrap(), Ordering::Greater);
        let b = &u - &ExtendedRational::from_rational(2, q(2), rat(141421357, 100000000));
        assert_eq!(b.signum().unwrap(), Ordering::Less);
        let c = ExtendedRational::u_pow(3, &q(5), 1);
        let d = ExtendedRational::u_pow(2, &q(5), 1);
        assert_eq!(c.cmp_value(&d).unwrap(), Ordering::Less);
    }

    #[test]
    fn lifting() {
        let u2 = ExtendedRational::u_pow(2, &q(3), 1);
        let lifted = u2.lift(6).unwrap();
        assert_eq!(lifted, ExtendedRational::u_pow(6, &q(3), 3));
        assert!(u2.lift(3).is_err());
    }

    #[test]
    fn decimals() {
        let one = ExtendedRational::from_int(1, &q(3), 1);
        assert_eq!(one.to_decimal(30), "1.00000000000000000000000000000");
        let third = ExtendedRational::from_rational(1, q(3), rat(4, 3));
        assert_eq!(third.to_decimal(30), "1.33333333333333333333333333333");
        let u = ExtendedRational::u_pow(2, &q(2), 1);
        assert_eq!(u.to_decimal(30), "1.41421356237309504880168872421");
        let small = ExtendedRational::from_rational(1, q(3), rat(1, 81));
        assert_eq!(small.to_decimal(5), "0.012346");
        let big = ExtendedRational::from_int(1, &q(3), 123456);
        assert_eq!(big.to_decimal(3), "1.23e5");
        assert_eq!((-&one).to_decimal(3), "-1.00");
    }

    #[test]
    fn json_round_trip() {
        let x = ExtendedRational::new(3, q(2), vec![rat(1, 3), rat(-2, 5), rat(0, 1)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"r":3,"q":2,"coeffs":["1/3","-2/5","0/1"]}"#);
        assert_eq!(serde_json::from_str::<ExtendedRational>(&s).unwrap(), x);
        assert_eq!(x.symbolic(), "1/3 - 2/5*u (u = 2^(1/3))");
    }

    proptest! {
        #[test]
        fn field_axioms(r in 1u32..=4, qi in 0usize..4,
                        a in prop::collection::vec(-20i64..20, 4),
                        b in prop::collection::vec(-20i64..20, 4)) {
            let qq = q([2, 3, 4, 5][qi]);
            let mk = |v: &[i64]| ExtendedRational::new(r, qq.clone(), v.iter().map(|&x| rat(x, 1)).collect());
            let (x, y) = (mk(&a), mk(&b));
            prop_assert_eq!(&x * &y, &y * &x);
            if !y.is_zero() {
                let z = x.checked_div(&y).unwrap();
                prop_assert_eq!(&z * &y, x.clone());
            }
            let approx = x.to_f64() - y.to_f64();
            let exact = (&x - &y).signum().unwrap();
            if approx.abs() > 1e-6 {
                prop_assert_eq!(exact, approx.partial_cmp(&0.0).unwrap());
            }
        }
    }
}
