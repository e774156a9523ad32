//! Sparse integer polynomials and the text grammar used by variety files.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary ("*" unary)*
//! unary  := ("+" | "-") unary | power
//! power  := atom ("^" INT)?
//! atom   := INT | IDENT | "(" expr ")"
//! ```

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown variable `{name}` at position {position}")]
    UnknownVariable { name: String, position: usize },
    #[error("negative exponent at position {position}")]
    NegativeExponent { position: usize },
}

/// Polynomial with integer coefficients over an ordered variable list.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl IntPolynomial {
    pub fn zero(vars: &[String]) -> Self {
        IntPolynomial {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: BigInt) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn variable(vars: &[String], index: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut e = vec![0; vars.len()];
        e[index] = 1;
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn from_terms(vars: &[String], terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Indices of variables that occur with a nonzero exponent.
    pub fn occurring_vars(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        IntPolynomial {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(&self.vars, BigInt::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Substitutes an integer value for variable `index` (the variable stays
    /// declared but no longer occurs).
    pub fn substitute(&self, index: usize, value: &BigInt) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[index];
            e2[index] = 0;
            out.add_term(e2, c * value.pow(k));
        }
        out
    }

    /// Re-expresses the polynomial over a new variable list. Returns `None`
    /// if a variable that occurs is missing from `new_vars`.
    pub fn with_vars(&self, new_vars: &[String]) -> Option<Self> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = Self::zero(new_vars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0u32; new_vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    e2[map[i]?] = k;
                }
            }
            out.add_term(e2, c.clone());
        }
        Some(out)
    }

    /// Evaluates at an integer point.
    pub fn eval_int(&self, point: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(point)
                    .fold(c.clone(), |acc, (&k, x)| acc * x.pow(k))
            })
            .sum()
    }

    /// Coefficients reduced into `[0, p)`, zero residues dropped.
    pub fn reduce_mod(&self, p: u64) -> BTreeMap<Vec<u32>, u64> {
        let pb = BigInt::from(p);
        self.terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&pb).to_u64().expect("residue fits u64");
                (r != 0).then(|| (e.clone(), r))
            })
            .collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest total degree first, then reverse lexicographic exponent order.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let monomial: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], k)
                    }
                })
                .collect();
            if monomial.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", monomial.join("*"))?;
            } else {
                write!(f, "{}*{}", a, monomial.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Parses `text` into canonical expanded form over `vars`.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<IntPolynomial, ParseError> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        vars,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.syntax("unexpected trailing input"));
    }
    Ok(p)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::SyntaxError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPolynomial, ParseError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPolynomial, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<IntPolynomial, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => Err(ParseError::NegativeExponent { position: self.pos }),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let n = self.integer();
                let e = n
                    .to_u32()
                    .ok_or_else(|| ParseError::SyntaxError {
                        position: start,
                        message: "exponent too large".into(),
                    })?;
                Ok(base.pow(e))
            }
            _ => Err(self.syntax("expected a non-negative integer exponent")),
        }
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .unwrap()
    }

    fn atom(&mut self) -> Result<IntPolynomial, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer();
                Ok(IntPolynomial::constant(self.vars, n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(IntPolynomial::variable(self.vars, i)),
                    None => Err(ParseError::UnknownVariable {
                        name: name.to_string(),
                        position: start,
                    }),
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn direct_read() {
        let v = vars(&["x", "y", "z", "w"]);
        let p = parse_polynomial("x*y - z*w", &v).unwrap();
        assert_eq!(p.terms().len(), 2);
        assert_eq!(p.terms()[&vec![1, 1, 0, 0]], BigInt::from(1));
        assert_eq!(p.terms()[&vec![0, 0, 1, 1]], BigInt::from(-1));
    }

    #[test]
    fn expansion() {
        let v = vars(&["x"]);
        let p = parse_polynomial("(x+1)^2", &v).unwrap();
        let expected = IntPolynomial::from_terms(
            &v,
            [(vec![2], 1.into()), (vec![1], 2.into()), (vec![0], 1.into())],
        );
        assert_eq!(p, expected);
        assert_eq!(p.to_string(), "x^2 + 2*x + 1");
    }

    #[test]
    fn errors_carry_positions() {
        let v = vars(&["x"]);
        assert_eq!(
            parse_polynomial("x^-1", &v).unwrap_err(),
            ParseError::NegativeExponent { position: 2 }
        );
        assert_eq!(
            parse_polynomial("x + q", &v).unwrap_err(),
            ParseError::UnknownVariable {
                name: "q".into(),
                position: 4
            }
        );
        assert!(matches!(
            parse_polynomial("(x + 1", &v),
            Err(ParseError::SyntaxError { position: 6, .. })
        ));
        assert!(matches!(
            parse_polynomial("x x", &v),
            Err(ParseError::SyntaxError { position: 2, .. })
        ));
        assert!(matches!(parse_polynomial("", &v), Err(ParseError::SyntaxError { .. })));
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let v = vars(&["x", "y"]);
        let p = parse_polynomial("x*y - y*x + 3 - 3", &v).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.to_string(), "0");
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        let v = vars(&["x"]);
        let p = parse_polynomial("-x^2", &v).unwrap();
        assert_eq!(p.terms()[&vec![2]], BigInt::from(-1));
    }

    #[test]
    fn substitution_and_restriction() {
        let v = vars(&["x0", "x1", "x2"]);
        let p = parse_polynomial("x0*x2 - x1^2", &v).unwrap();
        assert!(p.is_homogeneous());
        let s = p.substitute(0, &BigInt::from(1));
        let r = s.with_vars(&vars(&["x1", "x2"])).unwrap();
        assert_eq!(r.to_string(), "-x1^2 + x2");
        assert!(p.with_vars(&vars(&["x1"])).is_none());
    }

    #[test]
    fn reduction_mod_p() {
        let v = vars(&["x", "y"]);
        let p = parse_polynomial("2*x - 3*y + 5", &v).unwrap();
        let r = p.reduce_mod(2);
        assert_eq!(r.len(), 2);
        assert_eq!(r[&vec![0, 1]], 1);
        assert_eq!(r[&vec![0, 0]], 1);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = IntPolynomial> {
        let v: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        prop::collection::vec((prop::collection::vec(0u32..4, 3), -20i64..20), 0..6)
            .prop_map(move |ts| IntPolynomial::from_terms(&v, ts.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
    }

    proptest! {
        #[test]
        fn display_parses_back(p in poly()) {
            let q = parse_polynomial(&p.to_string(), p.vars()).unwrap();
            prop_assert_eq!(q, p);
        }

        #[test]
        fn evaluation_is_a_ring_map(a in poly(), b in poly(), x in -5i64..5, y in -5i64..5, z in -5i64..5) {
            let pt = [BigInt::from(x), BigInt::from(y), BigInt::from(z)];
            prop_assert_eq!(a.mul(&b).eval_int(&pt), a.eval_int(&pt) * b.eval_int(&pt));
            prop_assert_eq!(a.add(&b).eval_int(&pt), a.eval_int(&pt) + b.eval_int(&pt));
        }
    }
}
