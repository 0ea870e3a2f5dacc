//! Sparse univariate polynomials in the loop parameter `d` over ℚ.
//!
//! Every structure constant of the diagram algebra is a non-negative power of
//! `d`, so non-negative exponents suffice. Zero coefficients are never
//! stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use super::{ExactDomain, Rational, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DeltaPoly {
    coeffs: BTreeMap<u32, Rational>,
}

impl DeltaPoly {
    pub fn zero() -> Self {
        DeltaPoly {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        DeltaPoly::constant(Rational::one())
    }

    /// The indeterminate `d`.
    pub fn delta() -> Self {
        DeltaPoly::monomial(1, Rational::one())
    }

    /// `d^k`.
    pub fn delta_pow(k: u32) -> Self {
        DeltaPoly::monomial(k, Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        DeltaPoly::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        DeltaPoly::constant(Rational::from_int(n))
    }

    pub fn monomial(exp: u32, coeff: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(exp, coeff);
        }
        DeltaPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(Rational::is_one)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Rational {
        match self.degree() {
            Some(d) => self.coeffs[&d].clone(),
            None => Rational::zero(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coeff().is_one()
    }

    pub fn coeff(&self, exp: u32) -> Rational {
        self.coeffs
            .get(&exp)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &Rational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, at: &Rational) -> Rational {
        // Horner over the dense range is wasteful for sparse data; just sum
        // monomials with exact powers.
        let mut acc = Rational::zero();
        for (exp, c) in &self.coeffs {
            acc = &acc + &(c * &at.pow(*exp));
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return DeltaPoly::zero();
        }
        DeltaPoly {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn mul_delta_pow(&self, k: u32) -> Self {
        DeltaPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, x)| (e + k, x.clone()))
                .collect(),
        }
    }

    fn insert_term(coeffs: &mut BTreeMap<u32, Rational>, exp: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        match coeffs.get_mut(&exp) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    coeffs.remove(&exp);
                } else {
                    *existing = sum;
                }
            }
            None => {
                coeffs.insert(exp, c);
            }
        }
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, divisor: &DeltaPoly) -> (DeltaPoly, DeltaPoly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let ddeg = divisor.degree().unwrap();
        let dlead = divisor.leading_coeff();
        let mut rem = self.clone();
        let mut quot = DeltaPoly::zero();
        while let Some(rdeg) = rem.degree() {
            if rdeg < ddeg {
                break;
            }
            let factor = &rem.leading_coeff() / &dlead;
            let shift = rdeg - ddeg;
            let term = DeltaPoly::monomial(shift, factor);
            rem = &rem - &(&term * divisor);
            quot = &quot + &term;
        }
        (quot, rem)
    }

    /// Monic greatest common divisor (Euclid over ℚ[d]).
    pub fn gcd(&self, other: &DeltaPoly) -> DeltaPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn make_monic(&self) -> DeltaPoly {
        if self.is_zero() {
            return DeltaPoly::zero();
        }
        self.scale(&self.leading_coeff().inv())
    }
}

impl Add for &DeltaPoly {
    type Output = DeltaPoly;
    fn add(self, rhs: &DeltaPoly) -> DeltaPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            DeltaPoly::insert_term(&mut coeffs, *e, c.clone());
        }
        DeltaPoly { coeffs }
    }
}

impl Sub for &DeltaPoly {
    type Output = DeltaPoly;
    fn sub(self, rhs: &DeltaPoly) -> DeltaPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &rhs.coeffs {
            DeltaPoly::insert_term(&mut coeffs, *e, -c);
        }
        DeltaPoly { coeffs }
    }
}

impl Mul for &DeltaPoly {
    type Output = DeltaPoly;
    fn mul(self, rhs: &DeltaPoly) -> DeltaPoly {
        let mut coeffs = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &rhs.coeffs {
                DeltaPoly::insert_term(&mut coeffs, e1 + e2, c1 * c2);
            }
        }
        DeltaPoly { coeffs }
    }
}

impl Neg for &DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        DeltaPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! poly_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for DeltaPoly {
            type Output = DeltaPoly;
            fn $method(self, rhs: DeltaPoly) -> DeltaPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_owned_binop!(Add, add);
poly_owned_binop!(Sub, sub);
poly_owned_binop!(Mul, mul);

impl Neg for DeltaPoly {
    type Output = DeltaPoly;
    fn neg(self) -> DeltaPoly {
        -&self
    }
}

impl Ring for DeltaPoly {
    fn zero() -> Self {
        DeltaPoly::zero()
    }
    fn one() -> Self {
        DeltaPoly::one()
    }
    fn is_zero(&self) -> bool {
        DeltaPoly::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl ExactDomain for DeltaPoly {
    fn exact_div(&self, rhs: &Self) -> Self {
        let (q, r) = self.divrem(rhs);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }
}

/// Canonical form: terms in descending powers, `d^3 - 2*d` style.
impl fmt::Display for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in self.coeffs.iter().rev() {
            let (sign, mag) = if coeff.is_negative() {
                ("-", coeff.abs())
            } else {
                ("+", coeff.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            match (*exp, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "d")?,
                (1, false) => write!(f, "{mag}*d")?,
                (e, true) => write!(f, "d^{e}")?,
                (e, false) => write!(f, "{mag}*d^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DeltaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Parses the display grammar: signed terms of the shape `c`, `c*d`, `d^k`,
/// `c*d^k` joined by `+`/`-`; coefficients are integers or fractions.
impl FromStr for DeltaPoly {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        let mut result = DeltaPoly::zero();
        let mut term = String::new();
        let mut sign = 1i64;
        let flush = |term: &str, sign: i64, acc: &DeltaPoly| -> Result<DeltaPoly, String> {
            let t = term.trim();
            if t.is_empty() {
                return Err(format!("dangling sign in {s:?}"));
            }
            let (coeff_str, dpart) = match t.split_once('*') {
                Some((c, d)) => (c.trim(), Some(d.trim())),
                None => {
                    if t.starts_with('d') {
                        ("1", Some(t))
                    } else {
                        (t, None)
                    }
                }
            };
            let mut coeff: Rational = coeff_str.parse()?;
            if sign < 0 {
                coeff = -coeff;
            }
            let exp = match dpart {
                None => 0,
                Some("d") => 1,
                Some(d) => {
                    let rest = d
                        .strip_prefix("d^")
                        .ok_or_else(|| format!("bad term {t:?} in {s:?}"))?;
                    rest.trim()
                        .parse::<u32>()
                        .map_err(|_| format!("bad exponent in {t:?}"))?
                }
            };
            Ok(acc + &DeltaPoly::monomial(exp, coeff))
        };
        for ch in s.chars() {
            match ch {
                '+' | '-' if !term.trim().is_empty() => {
                    result = flush(&term, sign, &result)?;
                    term.clear();
                    sign = if ch == '-' { -1 } else { 1 };
                }
                // Sign before the first term (or a repeated leading sign).
                '-' => sign = -sign,
                '+' => {}
                _ => term.push(ch),
            }
        }
        result = flush(&term, sign, &result)?;
        Ok(result)
    }
}
