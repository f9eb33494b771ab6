//! Exact sparse Laurent polynomials in one and two variables.
//!
//! Both types keep their terms in a `BTreeMap` with every stored coefficient
//! nonzero, so structural equality is exact polynomial equality. Products are
//! computed over integer numerators scaled to a common denominator and reduced
//! once at the end, which avoids a gcd per multiply-add.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always held in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Exponent pair `(e1, e2)` of the monomial `z1^e1 z2^e2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exponent2 {
    pub e1: i64,
    pub e2: i64,
}

impl Exponent2 {
    pub const fn new(e1: i64, e2: i64) -> Self {
        Exponent2 { e1, e2 }
    }
}

impl Add for Exponent2 {
    type Output = Exponent2;

    fn add(self, rhs: Exponent2) -> Exponent2 {
        Exponent2::new(self.e1 + rhs.e1, self.e2 + rhs.e2)
    }
}

impl From<(i64, i64)> for Exponent2 {
    fn from((e1, e2): (i64, i64)) -> Self {
        Exponent2::new(e1, e2)
    }
}

/// Substitutions under which the symmetry of a bivariate symbol is defined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// `z1 -> -z1`
    NegateZ1,
    /// `z2 -> -z2`
    NegateZ2,
    /// `z1 -> 1/z1`
    InvertZ1,
    /// `z2 -> 1/z2`
    InvertZ2,
    /// `(z1, z2) -> (z2, z1)`
    Swap,
}

impl Transform {
    pub const ALL: [Transform; 5] = [
        Transform::NegateZ1,
        Transform::NegateZ2,
        Transform::InvertZ1,
        Transform::InvertZ2,
        Transform::Swap,
    ];
}

/// Coordinate axis used when embedding a univariate polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    Z1,
    Z2,
}

// Least common denominator of a coefficient set, and the coefficients scaled by it.
fn scaled_numerators<K: Copy>(terms: &BTreeMap<K, Rational>) -> (BigInt, Vec<(K, BigInt)>) {
    let lcd = terms
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let scaled = terms
        .iter()
        .map(|(&k, c)| (k, c.numer() * (&lcd / c.denom())))
        .collect();
    (lcd, scaled)
}

fn convolve<K>(lhs: &BTreeMap<K, Rational>, rhs: &BTreeMap<K, Rational>, add: fn(K, K) -> K) -> BTreeMap<K, Rational>
where
    K: Copy + Ord + Hash,
{
    if lhs.is_empty() || rhs.is_empty() {
        return BTreeMap::new();
    }
    let (dl, nl) = scaled_numerators(lhs);
    let (dr, nr) = scaled_numerators(rhs);
    let mut acc: HashMap<K, BigInt> = HashMap::with_capacity(nl.len() + nr.len());
    for (kl, cl) in &nl {
        for (kr, cr) in &nr {
            let slot = acc.entry(add(*kl, *kr)).or_insert_with(BigInt::zero);
            *slot += cl * cr;
        }
    }
    let den = dl * dr;
    acc.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, Rational::new(c, den.clone())))
        .collect()
}

fn merge_into<K: Copy + Ord>(target: &mut BTreeMap<K, Rational>, key: K, value: &Rational) {
    if value.is_zero() {
        return;
    }
    match target.get_mut(&key) {
        Some(slot) => {
            *slot += value;
            if slot.is_zero() {
                target.remove(&key);
            }
        }
        None => {
            target.insert(key, value.clone());
        }
    }
}

/// `m (m-1) ... (m-k+1)`, the coefficient produced by differentiating `z^m` k times.
pub(crate) fn falling_factorial(m: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::one(), |acc, i| acc * BigInt::from(m - i))
}

fn rational_pow(base: &Rational, exp: i64) -> Rational {
    let mag = base.pow(exp.unsigned_abs() as i32);
    if exp < 0 {
        mag.recip()
    } else {
        mag
    }
}

/// Univariate Laurent polynomial with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UnivariateLaurent {
    terms: BTreeMap<i64, Rational>,
}

impl UnivariateLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        UnivariateLaurent { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(terms: I) -> Self {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            merge_into(&mut out, k, &c);
        }
        UnivariateLaurent { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, exp: i64) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        UnivariateLaurent {
            terms: self.terms.iter().map(|(&k, c)| (k, c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact value at a nonzero point.
    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        if z.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        Ok(self
            .terms
            .iter()
            .map(|(&k, c)| c * rational_pow(z, k))
            .fold(Rational::zero(), |acc, t| acc + t))
    }

    /// Substitutes `z -> z^factor`.
    pub fn dilate(&self, factor: i64) -> Self {
        assert!(factor != 0, "dilation factor must be nonzero");
        UnivariateLaurent {
            terms: self.terms.iter().map(|(&k, c)| (k * factor, c.clone())).collect(),
        }
    }

    /// Embeds the polynomial along one axis of the bivariate ring.
    pub fn lift(&self, axis: Axis) -> BivariateLaurent {
        BivariateLaurent {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| {
                    let e = match axis {
                        Axis::Z1 => Exponent2::new(k, 0),
                        Axis::Z2 => Exponent2::new(0, k),
                    };
                    (e, c.clone())
                })
                .collect(),
        }
    }
}

impl<'a> Add<&'a UnivariateLaurent> for &'a UnivariateLaurent {
    type Output = UnivariateLaurent;

    fn add(self, rhs: &UnivariateLaurent) -> UnivariateLaurent {
        let mut terms = self.terms.clone();
        for (&k, c) in &rhs.terms {
            merge_into(&mut terms, k, c);
        }
        UnivariateLaurent { terms }
    }
}

impl<'a> Sub<&'a UnivariateLaurent> for &'a UnivariateLaurent {
    type Output = UnivariateLaurent;

    fn sub(self, rhs: &UnivariateLaurent) -> UnivariateLaurent {
        self + &(-rhs)
    }
}

impl Neg for &UnivariateLaurent {
    type Output = UnivariateLaurent;

    fn neg(self) -> UnivariateLaurent {
        UnivariateLaurent {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a UnivariateLaurent> for &'a UnivariateLaurent {
    type Output = UnivariateLaurent;

    fn mul(self, rhs: &UnivariateLaurent) -> UnivariateLaurent {
        UnivariateLaurent {
            terms: convolve(&self.terms, &rhs.terms, |a, b| a + b),
        }
    }
}

impl fmt::Display for UnivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{c}")?,
                _ => write!(f, "({c})·z^{k}")?,
            }
        }
        Ok(())
    }
}

/// Bivariate Laurent polynomial with exact rational coefficients. This carries
/// symbols, masks, and every intermediate product.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariateLaurent {
    terms: BTreeMap<Exponent2, Rational>,
}

impl BivariateLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(Exponent2::new(0, 0), c)
    }

    pub fn monomial(exp: Exponent2, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        BivariateLaurent { terms }
    }

    pub fn from_terms<E, I>(terms: I) -> Self
    where
        E: Into<Exponent2>,
        I: IntoIterator<Item = (E, Rational)>,
    {
        let mut out = BTreeMap::new();
        for (e, c) in terms {
            merge_into(&mut out, e.into(), &c);
        }
        BivariateLaurent { terms: out }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent2, &Rational)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, exp: Exponent2) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Least common denominator of all coefficients (1 for the zero polynomial).
    pub fn common_denominator(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Coefficients scaled by `common_denominator`, as integers.
    pub fn integer_numerators(&self) -> (BigInt, Vec<(Exponent2, BigInt)>) {
        scaled_numerators(&self.terms)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        BivariateLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, c * factor)).collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Mixed partial derivative `∂^(k1+k2) / ∂z1^k1 ∂z2^k2`. Negative exponents
    /// follow the ordinary power rule.
    pub fn partial_derivative(&self, k1: u32, k2: u32) -> Self {
        if k1 == 0 && k2 == 0 {
            return self.clone();
        }
        let terms = self.terms.iter().filter_map(|(&e, c)| {
            let factor = falling_factorial(e.e1, k1) * falling_factorial(e.e2, k2);
            if factor.is_zero() {
                None
            } else {
                let exp = Exponent2::new(e.e1 - k1 as i64, e.e2 - k2 as i64);
                Some((exp, c * Rational::from_integer(factor)))
            }
        });
        BivariateLaurent {
            terms: terms.collect(),
        }
    }

    /// Exact value at `(z1, z2)`; both coordinates must be nonzero.
    pub fn eval(&self, z1: &Rational, z2: &Rational) -> Result<Rational> {
        if z1.is_zero() || z2.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| c * rational_pow(z1, e.e1) * rational_pow(z2, e.e2))
            .fold(Rational::zero(), |acc, t| acc + t))
    }

    /// `(D^k p)(z)` without materialising the derivative.
    pub fn derivative_at(&self, k1: u32, k2: u32, z1: &Rational, z2: &Rational) -> Result<Rational> {
        if z1.is_zero() || z2.is_zero() {
            return Err(Error::ZeroCoordinate);
        }
        let mut sum = Rational::zero();
        for (e, c) in &self.terms {
            let factor = falling_factorial(e.e1, k1) * falling_factorial(e.e2, k2);
            if factor.is_zero() {
                continue;
            }
            sum += c
                * Rational::from_integer(factor)
                * rational_pow(z1, e.e1 - k1 as i64)
                * rational_pow(z2, e.e2 - k2 as i64);
        }
        Ok(sum)
    }

    pub fn transform(&self, t: Transform) -> Self {
        let terms = self.terms.iter().map(|(&e, c)| match t {
            Transform::NegateZ1 if e.e1.is_odd() => (e, -c),
            Transform::NegateZ2 if e.e2.is_odd() => (e, -c),
            Transform::NegateZ1 | Transform::NegateZ2 => (e, c.clone()),
            Transform::InvertZ1 => (Exponent2::new(-e.e1, e.e2), c.clone()),
            Transform::InvertZ2 => (Exponent2::new(e.e1, -e.e2), c.clone()),
            Transform::Swap => (Exponent2::new(e.e2, e.e1), c.clone()),
        });
        BivariateLaurent {
            terms: terms.collect(),
        }
    }

    /// Largest absolute exponent in either slot, 0 for constants and zero.
    pub fn radius(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.e1.abs().max(e.e2.abs()))
            .max()
            .unwrap_or(0)
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }
}

impl AddAssign<&BivariateLaurent> for BivariateLaurent {
    fn add_assign(&mut self, rhs: &BivariateLaurent) {
        for (&e, c) in &rhs.terms {
            merge_into(&mut self.terms, e, c);
        }
    }
}

impl<'a> Add<&'a BivariateLaurent> for &'a BivariateLaurent {
    type Output = BivariateLaurent;

    fn add(self, rhs: &BivariateLaurent) -> BivariateLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a BivariateLaurent> for &'a BivariateLaurent {
    type Output = BivariateLaurent;

    fn sub(self, rhs: &BivariateLaurent) -> BivariateLaurent {
        self + &(-rhs)
    }
}

impl Neg for &BivariateLaurent {
    type Output = BivariateLaurent;

    fn neg(self) -> BivariateLaurent {
        BivariateLaurent {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a BivariateLaurent> for &'a BivariateLaurent {
    type Output = BivariateLaurent;

    fn mul(self, rhs: &BivariateLaurent) -> BivariateLaurent {
        BivariateLaurent {
            terms: convolve(&self.terms, &rhs.terms, |a, b| a + b),
        }
    }
}

impl fmt::Display for BivariateLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            if e.e1 != 0 {
                write!(f, "·z1^{}", e.e1)?;
            }
            if e.e2 != 0 {
                write!(f, "·z2^{}", e.e2)?;
            }
        }
        Ok(())
    }
}
