//! Fast element arithmetic for the counting loops.
//!
//! Elements are opaque `u32` handles whose meaning depends on the backend:
//! residues for prime fields, discrete logarithms (with Zech addition) for
//! small extension fields, and digit indices for anything larger.

use super::prime::prime_factors;
use super::{FieldElement, FieldTable};

pub type Elem = u32;

/// Extension fields up to this order get log/Zech tables.
pub const ZECH_TABLE_LIMIT: u64 = 1 << 20;

pub trait FieldArith: Sync + Send {
    fn order(&self) -> u64;
    fn characteristic(&self) -> u64;
    fn zero(&self) -> Elem;
    fn one(&self) -> Elem;
    /// Element with canonical enumeration index `i`.
    fn from_index(&self, i: u64) -> Elem;
    /// Image of `c mod p` in the prime subfield.
    fn from_residue(&self, c: u64) -> Elem;
    fn add(&self, a: Elem, b: Elem) -> Elem;
    fn mul(&self, a: Elem, b: Elem) -> Elem;
    fn is_zero(&self, a: Elem) -> bool;
    /// Quadratic character: 0 at zero, otherwise +1 or -1. Odd order only.
    fn quadratic_character(&self, a: Elem) -> i8;
}

#[derive(Debug, Clone)]
pub struct PrimeArith {
    p: u64,
}

impl PrimeArith {
    pub fn new(p: u64) -> Self {
        PrimeArith { p }
    }
}

impl FieldArith for PrimeArith {
    fn order(&self) -> u64 {
        self.p
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> Elem {
        0
    }
    fn one(&self) -> Elem {
        1 % self.p as u32
    }
    fn from_index(&self, i: u64) -> Elem {
        i as Elem
    }
    fn from_residue(&self, c: u64) -> Elem {
        (c % self.p) as Elem
    }
    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        let s = a as u64 + b as u64;
        (if s >= self.p { s - self.p } else { s }) as Elem
    }
    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        (a as u64 * b as u64 % self.p) as Elem
    }
    #[inline]
    fn is_zero(&self, a: Elem) -> bool {
        a == 0
    }
    fn quadratic_character(&self, a: Elem) -> i8 {
        if a == 0 {
            return 0;
        }
        let (mut base, mut e, mut acc) = (a as u64, (self.p - 1) / 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        if acc == 1 {
            1
        } else {
            -1
        }
    }
}

const ZERO_LOG: Elem = Elem::MAX;

/// Log representation over a fixed primitive element `g`: the handle of
/// `g^n` is `n`, and zero is `Elem::MAX`.
#[derive(Debug, Clone)]
pub struct ZechArith {
    q: u64,
    p: u64,
    index_to_log: Vec<Elem>,
    log_to_index: Vec<Elem>,
    zech: Vec<Elem>,
}

impl ZechArith {
    pub fn new(field: &FieldTable) -> Self {
        let q = field.order();
        let p = field.p();
        let n = q - 1;
        let g = primitive_element(field);
        let mut log_to_index = Vec::with_capacity(n as usize);
        let mut index_to_log = vec![ZERO_LOG; q as usize];
        let mut cur = field.one();
        for i in 0..n {
            let idx = cur.index();
            log_to_index.push(idx as Elem);
            index_to_log[idx as usize] = i as Elem;
            cur = cur.mul_unchecked(&g);
        }
        // 1 + g^n: bump the constant digit of the index.
        let zech = log_to_index
            .iter()
            .map(|&idx| {
                let idx = idx as u64;
                let c0 = idx % p;
                let bumped = idx - c0 + (c0 + 1) % p;
                index_to_log[bumped as usize]
            })
            .collect();
        ZechArith {
            q,
            p,
            index_to_log,
            log_to_index,
            zech,
        }
    }

    pub fn to_index(&self, a: Elem) -> u64 {
        if a == ZERO_LOG {
            0
        } else {
            self.log_to_index[a as usize] as u64
        }
    }
}

fn primitive_element(field: &FieldTable) -> FieldElement {
    let n = field.order() - 1;
    let factors = prime_factors(n);
    (1..field.order())
        .map(|i| field.from_index(i))
        .find(|g| factors.iter().all(|&l| g.pow(n / l) != field.one()))
        .expect("multiplicative group of a finite field is cyclic")
}

impl FieldArith for ZechArith {
    fn order(&self) -> u64 {
        self.q
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn zero(&self) -> Elem {
        ZERO_LOG
    }
    fn one(&self) -> Elem {
        0
    }
    fn from_index(&self, i: u64) -> Elem {
        self.index_to_log[i as usize]
    }
    fn from_residue(&self, c: u64) -> Elem {
        self.index_to_log[(c % self.p) as usize]
    }
    #[inline]
    fn add(&self, a: Elem, b: Elem) -> Elem {
        if a == ZERO_LOG {
            return b;
        }
        if b == ZERO_LOG {
            return a;
        }
        let n = (self.q - 1) as Elem;
        let d = if b >= a { b - a } else { b + (n - a) };
        let z = self.zech[d as usize];
        if z == ZERO_LOG {
            return ZERO_LOG;
        }
        let s = a as u64 + z as u64;
        (if s >= n as u64 { s - n as u64 } else { s }) as Elem
    }
    #[inline]
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == ZERO_LOG || b == ZERO_LOG {
            return ZERO_LOG;
        }
        let n = self.q - 1;
        let s = a as u64 + b as u64;
        (if s >= n { s - n } else { s }) as Elem
    }
    #[inline]
    fn is_zero(&self, a: Elem) -> bool {
        a == ZERO_LOG
    }
    fn quadratic_character(&self, a: Elem) -> i8 {
        if a == ZERO_LOG {
            0
        } else if a % 2 == 0 {
            1
        } else {
            -1
        }
    }
}

/// Fallback for extension fields too large for tables; handles are digit
/// indices and every operation goes through [`FieldElement`].
#[derive(Debug, Clone)]
pub struct PolyArith {
    field: FieldTable,
}

impl PolyArith {
    pub fn new(field: &FieldTable) -> Self {
        PolyArith {
            field: field.clone(),
        }
    }
}

impl FieldArith for PolyArith {
    fn order(&self) -> u64 {
        self.field.order()
    }
    fn characteristic(&self) -> u64 {
        self.field.p()
    }
    fn zero(&self) -> Elem {
        0
    }
    fn one(&self) -> Elem {
        1
    }
    fn from_index(&self, i: u64) -> Elem {
        i as Elem
    }
    fn from_residue(&self, c: u64) -> Elem {
        (c % self.field.p()) as Elem
    }
    fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.field.p();
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place *= p;
        }
        out as Elem
    }
    fn mul(&self, a: Elem, b: Elem) -> Elem {
        let x = self.field.from_index(a as u64);
        let y = self.field.from_index(b as u64);
        x.mul_unchecked(&y).index() as Elem
    }
    fn is_zero(&self, a: Elem) -> bool {
        a == 0
    }
    fn quadratic_character(&self, a: Elem) -> i8 {
        if a == 0 {
            return 0;
        }
        let x = self.field.from_index(a as u64);
        if x.pow((self.field.order() - 1) / 2) == self.field.one() {
            1
        } else {
            -1
        }
    }
}

/// Backend chosen for a field.
#[derive(Debug, Clone)]
pub enum Kernel {
    Prime(PrimeArith),
    Zech(ZechArith),
    Poly(PolyArith),
}

impl Kernel {
    pub fn new(field: &FieldTable) -> Self {
        if field.deg() == 1 {
            Kernel::Prime(PrimeArith::new(field.p()))
        } else if field.order() <= ZECH_TABLE_LIMIT {
            Kernel::Zech(ZechArith::new(field))
        } else {
            Kernel::Poly(PolyArith::new(field))
        }
    }
}

/// Runs `$body` with `$a` bound to the concrete backend, so hot loops are
/// monomorphized per backend.
macro_rules! with_arith {
    ($kernel:expr, $a:ident => $body:expr) => {
        match $kernel {
            $crate::finite_field::Kernel::Prime($a) => $body,
            $crate::finite_field::Kernel::Zech($a) => $body,
            $crate::finite_field::Kernel::Poly($a) => $body,
        }
    };
}
pub(crate) use with_arith;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_field::build_field;

    fn check_against_slow<A: FieldArith>(field: &FieldTable, k: &A, to_index: impl Fn(Elem) -> u64) {
        let q = field.order();
        for i in 0..q {
            for j in 0..q {
                let (a, b) = (field.from_index(i), field.from_index(j));
                let (x, y) = (k.from_index(i), k.from_index(j));
                assert_eq!(to_index(k.add(x, y)), a.add(&b).unwrap().index());
                assert_eq!(to_index(k.mul(x, y)), a.mul(&b).unwrap().index());
            }
        }
    }

    #[test]
    fn zech_matches_polynomial_arithmetic() {
        for (p, d) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)] {
            let f = build_field(p, d).unwrap();
            let z = ZechArith::new(&f);
            check_against_slow(&f, &z, |e| z.to_index(e));
        }
    }

    #[test]
    fn poly_and_prime_backends_match() {
        let f = build_field(3, 2).unwrap();
        check_against_slow(&f, &PolyArith::new(&f), |e| e as u64);
        let f7 = build_field(7, 1).unwrap();
        check_against_slow(&f7, &PrimeArith::new(7), |e| e as u64);
    }

    #[test]
    fn characters_agree() {
        for (p, d) in [(3, 2), (5, 2), (7, 1), (11, 1), (3, 3)] {
            let f = build_field(p, d).unwrap();
            let q = f.order();
            let kern = f.kernel();
            for i in 0..q {
                let expected = {
                    let a = f.from_index(i);
                    if a.is_zero() {
                        0
                    } else if a.pow((q - 1) / 2) == f.one() {
                        1
                    } else {
                        -1
                    }
                };
                let got = with_arith!(&kern, k => k.quadratic_character(k.from_index(i)));
                assert_eq!(got, expected);
                let poly = PolyArith::new(&f);
                assert_eq!(poly.quadratic_character(i as Elem), expected);
            }
        }
    }
}
