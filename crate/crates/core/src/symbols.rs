//! Closed-form constructors for every symbol family: univariate pseudo-splines,
//! tensor products, four-directional box-splines, the interpolatory
//! four-directional schemes, the bivariate pseudo-spline family `a_n^l` with its
//! auxiliary polynomials, the symmetric variants, and the one-parameter
//! cubic-reproducing example `a_μ`.
//!
//! Every bivariate symbol is normalised so that `a(1,1) = 4`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{invalid, Error, Result};
use crate::laurent::{int, ratio, Axis, BivariateLaurent, Rational, UnivariateLaurent};

/// Which construction produced a symbol.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    UnivariateLifted,
    Tensor,
    Box,
    FourDirBox,
    Interpolatory,
    Pseudo,
    Variant,
    ExampleAmu,
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::UnivariateLifted => "univariate-lifted",
            Family::Tensor => "tensor",
            Family::Box => "box",
            Family::FourDirBox => "fourdir-box",
            Family::Interpolatory => "interpolatory",
            Family::Pseudo => "pseudo",
            Family::Variant => "variant",
            Family::ExampleAmu => "example-a-mu",
            Family::Custom => "custom",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        let family = match name {
            "univariate-lifted" => Family::UnivariateLifted,
            "tensor" => Family::Tensor,
            "box" => Family::Box,
            "fourdir-box" => Family::FourDirBox,
            "interpolatory" | "interp" => Family::Interpolatory,
            "pseudo" => Family::Pseudo,
            "variant" => Family::Variant,
            "example-a-mu" | "amu" => Family::ExampleAmu,
            "custom" => Family::Custom,
            _ => return None,
        };
        Some(family)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters a symbol was built from. Fields not used by a family stay empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub n: Option<u32>,
    pub l: Option<u32>,
    pub mu: Vec<Rational>,
}

impl Params {
    pub fn nl(n: u32, l: u32) -> Self {
        Params {
            n: Some(n),
            l: Some(l),
            mu: Vec::new(),
        }
    }

    pub fn n(n: u32) -> Self {
        Params {
            n: Some(n),
            ..Params::default()
        }
    }
}

/// A bivariate symbol together with its provenance. Two symbols compare equal
/// when their polynomials are equal, whatever their provenance.
#[derive(Clone, Debug)]
pub struct SchemeSymbol {
    pub poly: BivariateLaurent,
    pub family: Family,
    pub params: Params,
}

impl SchemeSymbol {
    pub fn new(poly: BivariateLaurent, family: Family, params: Params) -> Self {
        SchemeSymbol { poly, family, params }
    }

    pub fn custom(poly: BivariateLaurent) -> Self {
        SchemeSymbol::new(poly, Family::Custom, Params::default())
    }
}

impl PartialEq for SchemeSymbol {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly
    }
}

impl Eq for SchemeSymbol {}

/// Binomial coefficient under the vanishing convention used by the coefficient
/// formulas: `C(m, 0) = 1` for every integer `m`, `C(m, k) = 0` for `k < 0` or
/// `0 <= m < k`.
///
/// # Panics
///
/// When `m < 0` and `k > 0`; no formula in this crate may request that case.
pub fn binomial(m: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    if k == 0 {
        return BigInt::one();
    }
    assert!(m >= 0, "binomial C({m}, {k}) with negative top and positive k is outside the convention");
    if k > m {
        return BigInt::zero();
    }
    let k = k.min(m - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(m - i) / BigInt::from(i + 1);
    }
    acc
}

fn rat(b: BigInt) -> Rational {
    Rational::from_integer(b)
}

/// `σ(z) = (1+z)^2 / (4z)`
pub fn sigma() -> UnivariateLaurent {
    UnivariateLaurent::from_terms([(-1, ratio(1, 4)), (0, ratio(1, 2)), (1, ratio(1, 4))])
}

/// `δ(z) = -(1-z)^2 / (4z)`
pub fn delta() -> UnivariateLaurent {
    UnivariateLaurent::from_terms([(-1, ratio(-1, 4)), (0, ratio(1, 2)), (1, ratio(-1, 4))])
}

/// Evaluates `2 σ^n Σ_{i=0}^{l} C(n+i-1, i) δ^i` for any `n >= 0`, `l >= -1`.
/// This covers the extended values `u_0^0 = 2` and `u_n^{-1} = 0`.
pub(crate) fn pseudo_series(n: u32, l: i64) -> UnivariateLaurent {
    if l < 0 {
        return UnivariateLaurent::zero();
    }
    let d = delta();
    let mut sum = UnivariateLaurent::zero();
    let mut d_pow = UnivariateLaurent::one();
    for i in 0..=l {
        let c = binomial(n as i64 + i - 1, i);
        sum = &sum + &d_pow.scale(&rat(c));
        d_pow = &d_pow * &d;
    }
    &sigma().pow(n).scale(&int(2)) * &sum
}

/// Primal univariate pseudo-spline symbol `u_n^l`, for `0 <= l < n`, plus the
/// extended cases `u_0^0 = 2` and `u_n^{-1} = 0`.
pub fn univariate_pseudospline(n: u32, l: i32) -> Result<UnivariateLaurent> {
    let extended = (n == 0 && l == 0) || (n > 0 && l == -1);
    if !extended && !(l >= 0 && (l as u32) < n) {
        return Err(invalid(format!("u_n^l needs 0 <= l < n, got n = {n}, l = {l}")));
    }
    Ok(pseudo_series(n, l as i64))
}

/// `u_n^l` through `2 - 2 δ^{l+1} v_n^l`, `v_n^l = Σ_{i=1}^{n} C(n+l, i+l) δ^{i-1} σ^{n-i}`.
pub fn univariate_pseudospline_alt(n: u32, l: u32) -> Result<UnivariateLaurent> {
    check_nl(n, l)?;
    let (s, d) = (sigma(), delta());
    let mut v = UnivariateLaurent::zero();
    for i in 1..=n {
        let c = binomial((n + l) as i64, (i + l) as i64);
        let term = &d.pow(i - 1) * &s.pow(n - i);
        v = &v + &term.scale(&rat(c));
    }
    let tail = (&d.pow(l + 1) * &v).scale(&int(2));
    Ok(&UnivariateLaurent::constant(int(2)) - &tail)
}

fn check_nl(n: u32, l: u32) -> Result<()> {
    if l >= n {
        return Err(invalid(format!("need 0 <= l < n, got n = {n}, l = {l}")));
    }
    Ok(())
}

fn outer(u1: &UnivariateLaurent, u2: &UnivariateLaurent) -> BivariateLaurent {
    &u1.lift(Axis::Z1) * &u2.lift(Axis::Z2)
}

/// `σ(z1) σ(z2)`
pub fn bsigma() -> BivariateLaurent {
    outer(&sigma(), &sigma())
}

/// `δ(z1) δ(z2)`
pub fn bdelta() -> BivariateLaurent {
    outer(&delta(), &delta())
}

/// `σσ - δδ = (1 + z1 z2)(z1 + z2) / (4 z1 z2)`, the diagonal box-spline factor.
pub fn bgamma() -> BivariateLaurent {
    &bsigma() - &bdelta()
}

/// `(σ(z1)δ(z1))^{α1} (σ(z2)δ(z2))^{α2}`
pub fn pi_power(a1: u32, a2: u32) -> BivariateLaurent {
    let sd = &sigma() * &delta();
    outer(&sd.pow(a1), &sd.pow(a2))
}

/// Four-directional box-spline symbol `B_{i,j,k} = σ(z1)^i σ(z2)^j γ^k`.
pub fn box_symbol(i: u32, j: u32, k: u32) -> BivariateLaurent {
    let s = sigma();
    &outer(&s.pow(i), &s.pow(j)) * &bgamma().pow(k)
}

// ã_n for n >= 0, with ã_0 = 4.
pub(crate) fn fourdir_box_poly(n: u32) -> BivariateLaurent {
    box_symbol(n.div_ceil(2), n.div_ceil(2), n / 2).scale(&int(4))
}

/// Scaled box-spline `ã_n = 4 B_{⌈n/2⌉, ⌈n/2⌉, ⌊n/2⌋}`.
pub fn fourdir_box(n: u32) -> Result<SchemeSymbol> {
    if n < 1 {
        return Err(invalid("box-spline symbol needs n >= 1"));
    }
    Ok(SchemeSymbol::new(fourdir_box_poly(n), Family::FourDirBox, Params::n(n)))
}

/// Tensor-product pseudo-spline `u_n^l(z1) u_n^l(z2)`.
pub fn tensor_pseudospline(n: u32, l: u32) -> Result<SchemeSymbol> {
    check_nl(n, l)?;
    let u = pseudo_series(n, l as i64);
    Ok(SchemeSymbol::new(outer(&u, &u), Family::Tensor, Params::nl(n, l)))
}

/// Interpolatory four-directional scheme built from univariate `2n`-point symbols:
/// `Σ_{i=0}^{n-1} u_{n-i}^{n-i-1}(z1) u_{i+1}^i(z2) - Σ_{i=0}^{n-2} u_{n-i-1}^{n-i-2}(z1) u_{i+1}^i(z2)`.
pub fn interpolatory(n: u32) -> Result<SchemeSymbol> {
    if n < 1 {
        return Err(invalid("interpolatory symbol needs n >= 1"));
    }
    let dd = |m: u32| pseudo_series(m, m as i64 - 1);
    let mut poly = BivariateLaurent::zero();
    for i in 0..n {
        poly += &outer(&dd(n - i), &dd(i + 1));
    }
    for i in 0..n.saturating_sub(1) {
        poly = &poly - &outer(&dd(n - i - 1), &dd(i + 1));
    }
    Ok(SchemeSymbol::new(poly, Family::Interpolatory, Params::n(n)))
}

/// Family coefficient
/// `c_n^{(i,j)} = Σ_{k=0}^{⌊i/2⌋} C(⌊(n-i)/2⌋+k-1, k) C(n+i-2j-1, i-j-k) C(n+2j-i-1, j-k)`.
pub fn coefficient(n: u32, i: u32, j: u32) -> Result<BigInt> {
    if !(j <= i && i < n) {
        return Err(invalid(format!("c_n^(i,j) needs 0 <= j <= i < n, got n = {n}, i = {i}, j = {j}")));
    }
    let (n, i, j) = (n as i64, i as i64, j as i64);
    let half = (n - i) / 2;
    let mut sum = BigInt::zero();
    for k in 0..=i / 2 {
        sum += binomial(half + k - 1, k) * binomial(n + i - 2 * j - 1, i - j - k) * binomial(n + 2 * j - i - 1, j - k);
    }
    Ok(sum)
}

/// `b_n^i = Σ_{j=0}^{i} c_n^{(i,j)} π^{(i-j, j)}`
pub fn make_b(n: u32, i: u32) -> Result<BivariateLaurent> {
    check_nl(n, i)?;
    let mut poly = BivariateLaurent::zero();
    for j in 0..=i {
        let c = coefficient(n, i, j)?;
        poly += &pi_power(i - j, j).scale(&rat(c));
    }
    Ok(poly)
}

/// Bivariate pseudo-spline `a_n^l = Σ_{i=0}^{l} ã_{n-i} b_n^i`.
pub fn pseudospline(n: u32, l: u32) -> Result<SchemeSymbol> {
    check_nl(n, l)?;
    let mut poly = BivariateLaurent::zero();
    for i in 0..=l {
        poly += &(&fourdir_box_poly(n - i) * &make_b(n, i)?);
    }
    Ok(SchemeSymbol::new(poly, Family::Pseudo, Params::nl(n, l)))
}

/// All members `a_n^0, ..., a_n^{n-1}`, built incrementally.
pub fn pseudospline_family(n: u32) -> Result<Vec<SchemeSymbol>> {
    if n < 1 {
        return Err(invalid("pseudo-spline family needs n >= 1"));
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut poly = BivariateLaurent::zero();
    for l in 0..n {
        poly += &(&fourdir_box_poly(n - l) * &make_b(n, l)?);
        out.push(SchemeSymbol::new(poly.clone(), Family::Pseudo, Params::nl(n, l)));
    }
    Ok(out)
}

/// `d_n^l = Σ_{j=0}^{l} C(n+l-2j-1, l-j) C(n+2j-l-1, j) π^{(l-j, j)}`
pub fn make_d(n: u32, l: u32) -> Result<BivariateLaurent> {
    check_nl(n, l)?;
    let (ni, li) = (n as i64, l as i64);
    let mut poly = BivariateLaurent::zero();
    for j in 0..=l {
        let jj = j as i64;
        let c = binomial(ni + li - 2 * jj - 1, li - jj) * binomial(ni + 2 * jj - li - 1, jj);
        poly += &pi_power(l - j, j).scale(&rat(c));
    }
    Ok(poly)
}

/// `e_n^l = Σ_{j=0}^{l} u_{n-j}^{l-j}(z1) u_{n-l+j}^{j}(z2)`
pub fn make_e(n: u32, l: u32) -> Result<BivariateLaurent> {
    check_nl(n, l)?;
    let mut poly = BivariateLaurent::zero();
    for j in 0..=l {
        let u1 = pseudo_series(n - j, (l - j) as i64);
        let u2 = pseudo_series(n - l + j, j as i64);
        poly += &outer(&u1, &u2);
    }
    Ok(poly)
}

/// Symmetric variant `a_n^l + ã_{n-l-1} Σ_{j=1}^{l} μ_j π^{(l+1-j, j)}` for odd `n - l`.
/// `mu` holds `μ_1..μ_l` and must satisfy `μ_j = μ_{l+1-j}`. When `l = n - 1` the
/// box factor is `ã_0 = 4`.
pub fn variant(n: u32, l: u32, mu: &[Rational]) -> Result<SchemeSymbol> {
    check_nl(n, l)?;
    if (n - l).is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "variant family is only defined for odd n - l, got n = {n}, l = {l}"
        )));
    }
    if mu.len() != l as usize {
        return Err(invalid(format!("variant needs exactly l = {l} weights, got {}", mu.len())));
    }
    if mu.iter().zip(mu.iter().rev()).any(|(a, b)| a != b) {
        return Err(invalid("variant weights must satisfy mu_j = mu_(l+1-j)"));
    }
    let base = pseudospline(n, l)?.poly;
    let mut sum = BivariateLaurent::zero();
    for (idx, m) in mu.iter().enumerate() {
        let j = idx as u32 + 1;
        sum += &pi_power(l + 1 - j, j).scale(m);
    }
    let poly = &base + &(&fourdir_box_poly(n - l - 1) * &sum);
    let params = Params {
        n: Some(n),
        l: Some(l),
        mu: mu.to_vec(),
    };
    Ok(SchemeSymbol::new(poly, Family::Variant, params))
}

/// `12 B_{1,1,1} - 8 B_{1,1,2}`, the cubic-reproducing scheme with support (3, 3, 2).
pub fn example_cubic() -> BivariateLaurent {
    &box_symbol(1, 1, 1).scale(&int(12)) - &box_symbol(1, 1, 2).scale(&int(8))
}

/// `B_{2,2,0} - B_{1,1,1}`
pub fn example_cubic_kernel() -> BivariateLaurent {
    &box_symbol(2, 2, 0) - &box_symbol(1, 1, 1)
}

/// `a_μ = 12 B_{1,1,1} - 8 B_{1,1,2} + 8 (2 + μ)(B_{2,2,0} - B_{1,1,1})`
pub fn example_amu(mu: &Rational) -> SchemeSymbol {
    let weight = (int(2) + mu) * int(8);
    let poly = &example_cubic() + &example_cubic_kernel().scale(&weight);
    let params = Params {
        mu: vec![mu.clone()],
        ..Params::default()
    };
    SchemeSymbol::new(poly, Family::ExampleAmu, params)
}
