//! The fraction field ℚ(d): quotients of polynomials in canonical form
//! (reduced, monic denominator). Generic-parameter rank computations run
//! here.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{DeltaPoly, ExactDomain, Field, Rational, Ring};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DeltaRational {
    num: DeltaPoly,
    den: DeltaPoly,
}

impl DeltaRational {
    /// Canonical quotient; panics when `den` is zero.
    pub fn new(num: DeltaPoly, den: DeltaPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return DeltaRational {
                num,
                den: DeltaPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let mut num = num.exact_div(&g);
        let mut den = den.exact_div(&g);
        let lead = den.leading_coeff();
        if !lead.is_one() {
            let inv = lead.inv();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        DeltaRational { num, den }
    }

    pub fn from_poly(p: DeltaPoly) -> Self {
        DeltaRational {
            num: p,
            den: DeltaPoly::one(),
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        DeltaRational::from_poly(DeltaPoly::constant(r))
    }

    pub fn zero() -> Self {
        DeltaRational::from_poly(DeltaPoly::zero())
    }

    pub fn one() -> Self {
        DeltaRational::from_poly(DeltaPoly::one())
    }

    pub fn numerator(&self) -> &DeltaPoly {
        &self.num
    }

    pub fn denominator(&self) -> &DeltaPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the denominator is trivial.
    pub fn as_poly(&self) -> Option<&DeltaPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero rational function");
        DeltaRational::new(self.den.clone(), self.num.clone())
    }
}

impl From<&DeltaPoly> for DeltaRational {
    fn from(p: &DeltaPoly) -> Self {
        DeltaRational::from_poly(p.clone())
    }
}

impl Add for &DeltaRational {
    type Output = DeltaRational;
    fn add(self, rhs: &DeltaRational) -> DeltaRational {
        DeltaRational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &DeltaRational {
    type Output = DeltaRational;
    fn sub(self, rhs: &DeltaRational) -> DeltaRational {
        DeltaRational::new(
            &(&self.num * &rhs.den) - &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Mul for &DeltaRational {
    type Output = DeltaRational;
    fn mul(self, rhs: &DeltaRational) -> DeltaRational {
        DeltaRational::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &DeltaRational {
    type Output = DeltaRational;
    fn div(self, rhs: &DeltaRational) -> DeltaRational {
        assert!(!rhs.is_zero(), "division by zero rational function");
        DeltaRational::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl Neg for &DeltaRational {
    type Output = DeltaRational;
    fn neg(self) -> DeltaRational {
        DeltaRational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! ratfn_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for DeltaRational {
            type Output = DeltaRational;
            fn $method(self, rhs: DeltaRational) -> DeltaRational {
                (&self).$method(&rhs)
            }
        }
    };
}

ratfn_owned_binop!(Add, add);
ratfn_owned_binop!(Sub, sub);
ratfn_owned_binop!(Mul, mul);
ratfn_owned_binop!(Div, div);

impl Neg for DeltaRational {
    type Output = DeltaRational;
    fn neg(self) -> DeltaRational {
        -&self
    }
}

impl Ring for DeltaRational {
    fn zero() -> Self {
        DeltaRational::zero()
    }
    fn one() -> Self {
        DeltaRational::one()
    }
    fn is_zero(&self) -> bool {
        DeltaRational::is_zero(self)
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

impl ExactDomain for DeltaRational {
    fn exact_div(&self, rhs: &Self) -> Self {
        self / rhs
    }
}

impl Field for DeltaRational {
    fn inv(&self) -> Self {
        DeltaRational::inv(self)
    }
}

impl fmt::Display for DeltaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for DeltaRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d() -> DeltaPoly {
        DeltaPoly::delta()
    }

    #[test]
    fn canonical_normalization() {
        // (d^2 - 1)/(d - 1) == d + 1
        let num = &(&d() * &d()) - &DeltaPoly::one();
        let den = &d() - &DeltaPoly::one();
        let q = DeltaRational::new(num, den);
        assert_eq!(q, DeltaRational::from_poly(&d() + &DeltaPoly::one()));
        // scalar multiples of num/den normalize away
        let a = DeltaRational::new(d().scale(&Rational::from_int(3)), DeltaPoly::from_int(6));
        let b = DeltaRational::new(d(), DeltaPoly::from_int(2));
        assert_eq!(a, b);
    }

    #[test]
    fn field_ops() {
        let x = DeltaRational::new(DeltaPoly::one(), d());
        let y = DeltaRational::from_poly(d());
        assert_eq!(&x * &y, DeltaRational::one());
        assert_eq!(x.inv(), y);
        assert!((&x - &x).is_zero());
    }
}
