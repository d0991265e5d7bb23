//! Univariate rational functions over ℚ in a distinguished parameter ε.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::Field;
use super::rat::Rat;
use super::LatticeError;

/// Dense univariate polynomial with rational coefficients, lowest degree first.
/// The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<Rat>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `c·ε^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![Rat::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rat> {
        self.0.last()
    }

    pub fn constant_term(&self) -> Rat {
        self.0.first().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0
            .iter()
            .rev()
            .fold(Rat::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &Poly) -> Poly {
        let n = self.0.len().max(rhs.0.len());
        let z = Rat::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + rhs.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &Poly) -> Poly {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading().unwrap().recip().unwrap();
        let mut rem = self.0.clone();
        let mut quot = vec![Rat::zero(); self.0.len().saturating_sub(dd)];
        while rem.len() > dd {
            let top = rem.len() - 1;
            let c = &rem[top] * &lead;
            let shift = top - dd;
            if !c.is_zero() {
                for (k, b) in divisor.0.iter().enumerate() {
                    rem[shift + k] = &rem[shift + k] - &(&c * b);
                }
            }
            quot[shift] = c;
            rem.pop();
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip().unwrap()),
            None => Poly::zero(),
        }
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, rhs: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})e")?,
                _ => write!(f, "({c})e^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Reduced fraction of polynomials in ε. The denominator is monic and
/// coprime to the numerator, so structural equality is field equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn new(num: Poly, den: Poly) -> Result<Self, LatticeError> {
        if den.is_zero() {
            return Err(LatticeError::ZeroDenominator);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFun {
                num: Poly::zero(),
                den: Poly::constant(Rat::one()),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.div_rem(&g);
        let (den, _) = den.div_rem(&g);
        let lead = den.leading().unwrap().recip().unwrap();
        RatFun {
            num: num.scale(&lead),
            den: den.scale(&lead),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::constant(Rat::one()),
        }
    }

    /// The parameter ε itself.
    pub fn epsilon() -> Self {
        Self::from_poly(Poly::monomial(Rat::one(), 1))
    }

    /// `c·ε^k` for any integer `k`.
    pub fn monomial(c: Rat, k: i64) -> Self {
        if c.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFun {
                num: Poly::constant(c),
                den: Poly::monomial(Rat::one(), k.unsigned_abs() as usize),
            }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    /// Value at ε = 0 of the reduced fraction.
    pub fn evaluate_at_zero(&self) -> Result<Rat, LatticeError> {
        let d0 = self.den.constant_term();
        if d0.is_zero() {
            return Err(LatticeError::PoleAtZero);
        }
        Ok(self.num.constant_term() / d0)
    }

    /// Value at an arbitrary rational point.
    pub fn evaluate(&self, x: &Rat) -> Result<Rat, LatticeError> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(LatticeError::PoleAt(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Constant value, if ε does not occur.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.num.degree().unwrap_or(0) == 0 && self.den.degree() == Some(0) {
            Some(self.num.constant_term())
        } else {
            None
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for RatFun {
    type Output = RatFun;
    fn add(self, rhs: RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::reduce(self.num.add(&rhs.num), self.den);
        }
        RatFun::reduce(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub for RatFun {
    type Output = RatFun;
    fn sub(self, rhs: RatFun) -> RatFun {
        self + (-rhs)
    }
}

impl Mul for RatFun {
    type Output = RatFun;
    fn mul(self, rhs: RatFun) -> RatFun {
        if self.num.is_zero() || rhs.num.is_zero() {
            return RatFun::from_poly(Poly::zero());
        }
        RatFun::reduce(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den,
        }
    }
}

impl Field for RatFun {
    fn zero() -> Self {
        RatFun::from_poly(Poly::zero())
    }
    fn one() -> Self {
        RatFun::from_poly(Poly::constant(Rat::one()))
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(RatFun::reduce(self.den.clone(), self.num.clone()))
        }
    }
    fn from_rat(r: &Rat) -> Self {
        RatFun::from_poly(Poly::constant(r.clone()))
    }
}
