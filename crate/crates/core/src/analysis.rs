//! Algebraic checks on bivariate symbols: symmetry, the necessary convergence
//! conditions, polynomial generation (sum rules on `E'`), polynomial
//! reproduction (vanishing derivatives at `(1,1)`), interpolation, and the
//! geometry of the support.
//!
//! Degrees are certified exactly. A probe reports the largest order through
//! which every derivative vanishes and, when found, the first nonzero
//! derivative one order higher as a witness.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laurent::{falling_factorial, int, BivariateLaurent, Exponent2, Rational, Transform};
use crate::mask::MaskMatrix;
use crate::symbols::{box_symbol, delta, example_amu, example_cubic, example_cubic_kernel, interpolatory};

/// Sign points other than `(1,1)`: `(-1,1)`, `(1,-1)`, `(-1,-1)`.
pub const E_PRIME: [(i64, i64); 3] = [(-1, 1), (1, -1), (-1, -1)];

/// Default probe bound when the family parameters are unknown.
pub const DEFAULT_MAX_CHECK: u32 = 16;

/// A nonzero derivative `D^order a(point)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub order: (u32, u32),
    pub point: (i64, i64),
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProbe {
    pub degree: i64,
    /// First failing derivative at order `degree + 1`. `None` means the probe
    /// bound was reached, so `degree` is only a lower bound.
    pub witness: Option<Witness>,
}

impl DegreeProbe {
    pub fn is_exact(&self) -> bool {
        self.witness.is_some()
    }
}

/// Evaluates derivatives of one symbol at points with coordinates `±1` using
/// integer arithmetic over the common denominator.
struct SignPointEvaluator {
    denominator: BigInt,
    numerators: Vec<(Exponent2, BigInt)>,
}

impl SignPointEvaluator {
    fn new(a: &BivariateLaurent) -> Self {
        let (denominator, numerators) = a.integer_numerators();
        SignPointEvaluator {
            denominator,
            numerators,
        }
    }

    fn numerator_at(&self, k: (u32, u32), point: (i64, i64)) -> BigInt {
        let mut sum = BigInt::zero();
        for (e, c) in &self.numerators {
            let ff = falling_factorial(e.e1, k.0) * falling_factorial(e.e2, k.1);
            if ff.is_zero() {
                continue;
            }
            let odd = (point.0 < 0 && (e.e1 - k.0 as i64) % 2 != 0) ^ (point.1 < 0 && (e.e2 - k.1 as i64) % 2 != 0);
            if odd {
                sum -= c * ff;
            } else {
                sum += c * ff;
            }
        }
        sum
    }

    fn value_at(&self, k: (u32, u32), point: (i64, i64)) -> Rational {
        Rational::new(self.numerator_at(k, point), self.denominator.clone())
    }

    // First nonzero derivative of total order `order` over `points`.
    fn first_nonzero(&self, order: u32, points: &[(i64, i64)]) -> Option<Witness> {
        for k1 in (0..=order).rev() {
            let k = (k1, order - k1);
            for &p in points {
                if !self.numerator_at(k, p).is_zero() {
                    return Some(Witness {
                        order: k,
                        point: p,
                        value: self.value_at(k, p),
                    });
                }
            }
        }
        None
    }

    fn probe(&self, first_order: u32, max_check: u32, points: &[(i64, i64)]) -> DegreeProbe {
        for order in first_order..=max_check + 1 {
            if let Some(w) = self.first_nonzero(order, points) {
                return DegreeProbe {
                    degree: order as i64 - 1,
                    witness: Some(w),
                };
            }
        }
        DegreeProbe {
            degree: max_check as i64,
            witness: None,
        }
    }
}

/// True iff `a` is invariant under `z1 -> 1/z1`, `z2 -> 1/z2`, and the swap.
pub fn check_symmetry(a: &BivariateLaurent) -> bool {
    [Transform::InvertZ1, Transform::InvertZ2, Transform::Swap]
        .into_iter()
        .all(|t| a.transform(t) == *a)
}

/// `a(1,1) = 4` and `a` vanishes on `E'`.
pub fn check_convergence_necessary(a: &BivariateLaurent) -> bool {
    let ev = SignPointEvaluator::new(a);
    ev.value_at((0, 0), (1, 1)) == int(4) && E_PRIME.iter().all(|&p| ev.numerator_at((0, 0), p).is_zero())
}

/// Generation degree with its certificate: the largest `d <= max_check` such
/// that `D^k a(z) = 0` for all `z` in `E'` and `|k| <= d`, or `-1`.
pub fn generation_probe(a: &BivariateLaurent, max_check: u32) -> DegreeProbe {
    SignPointEvaluator::new(a).probe(0, max_check, &E_PRIME)
}

pub fn generation_degree(a: &BivariateLaurent, max_check: u32) -> i64 {
    generation_probe(a, max_check).degree
}

/// Reproduction degree with its certificate. The measured value is capped at
/// the generation degree; the witness always refers to the uncapped count.
pub fn reproduction_probe(a: &BivariateLaurent, max_check: u32) -> Result<DegreeProbe> {
    if !check_convergence_necessary(a) {
        return Err(Error::InvalidScheme);
    }
    let raw = SignPointEvaluator::new(a).probe(1, max_check, &[(1, 1)]);
    let generation = generation_degree(a, max_check);
    Ok(DegreeProbe {
        degree: raw.degree.min(generation),
        witness: raw.witness,
    })
}

pub fn reproduction_degree(a: &BivariateLaurent, max_check: u32) -> Result<i64> {
    Ok(reproduction_probe(a, max_check)?.degree)
}

/// `a(z1,z2) + a(z1,-z2) + a(-z1,z2) + a(-z1,-z2) = 4` as polynomials.
pub fn check_interpolatory(a: &BivariateLaurent) -> bool {
    let n1 = a.transform(Transform::NegateZ1);
    let n2 = a.transform(Transform::NegateZ2);
    let n12 = n1.transform(Transform::NegateZ2);
    let sum = &(&(a + &n1) + &n2) + &n12;
    sum == BivariateLaurent::constant(int(4))
}

/// The octagon `{α : |α1| <= m, |α2| <= n, |α1| + |α2| <= m + n - l}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SupportOctagon {
    pub m: i64,
    pub n: i64,
    pub l: i64,
}

impl SupportOctagon {
    pub fn new(m: i64, n: i64, l: i64) -> Self {
        SupportOctagon { m, n, l }
    }

    /// Horizontal extent `2m + 1`.
    pub fn width(&self) -> i64 {
        2 * self.m + 1
    }

    pub fn height(&self) -> i64 {
        2 * self.n + 1
    }

    pub fn corner_cut(&self) -> i64 {
        self.l
    }

    pub fn contains(&self, e: Exponent2) -> bool {
        e.e1.abs() <= self.m && e.e2.abs() <= self.n && e.e1.abs() + e.e2.abs() <= self.m + self.n - self.l
    }

    /// Area of the octagon: the `2m × 2n` rectangle minus four corner triangles.
    pub fn area(&self) -> Rational {
        int(4 * self.m * self.n - 2 * self.l * self.l)
    }

    pub fn scaled(&self, factor: i64) -> Self {
        SupportOctagon::new(self.m * factor, self.n * factor, self.l * factor)
    }

    fn vertices(&self) -> Vec<Exponent2> {
        let (m, n, l) = (self.m, self.n, self.l);
        let mut v = Vec::with_capacity(8);
        for s1 in [-1, 1] {
            for s2 in [-1, 1] {
                v.push(Exponent2::new(s1 * m, s2 * (n - l)));
                v.push(Exponent2::new(s1 * (m - l), s2 * n));
            }
        }
        v.sort();
        v.dedup();
        v
    }
}

impl std::fmt::Display for SupportOctagon {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.m == self.n {
            write!(f, "width {}, corner cut {}", self.width(), self.l)
        } else {
            write!(f, "{}x{}, corner cut {}", self.width(), self.height(), self.l)
        }
    }
}

/// Measured support of a symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportReport {
    /// Octagon read off the extreme exponents. Only describes the convex hull
    /// when `octagonal` is true.
    pub octagon: SupportOctagon,
    pub octagonal: bool,
    pub min: Exponent2,
    pub max: Exponent2,
    /// Largest `|α1| + |α2|` over the nonzero coefficients.
    pub max_l1: i64,
    /// Area of the convex hull of the nonzero exponents.
    pub area: Rational,
}

fn cross(o: Exponent2, a: Exponent2, b: Exponent2) -> i128 {
    (a.e1 - o.e1) as i128 * (b.e2 - o.e2) as i128 - (a.e2 - o.e2) as i128 * (b.e1 - o.e1) as i128
}

// Twice the area of the convex hull (monotone chain + shoelace).
fn hull_area_doubled(mut pts: Vec<Exponent2>) -> i128 {
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return 0;
    }
    let mut hull: Vec<Exponent2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Exponent2>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    let n = hull.len();
    (0..n)
        .map(|i| {
            let (a, b) = (hull[i], hull[(i + 1) % n]);
            a.e1 as i128 * b.e2 as i128 - b.e1 as i128 * a.e2 as i128
        })
        .sum::<i128>()
        .abs()
}

/// Support geometry of `a`: the octagon triple plus the hull area.
pub fn support_of(a: &BivariateLaurent) -> Result<SupportReport> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let pts: Vec<Exponent2> = a.terms().map(|(e, _)| e).collect();
    let min = Exponent2::new(
        pts.iter().map(|e| e.e1).min().unwrap(),
        pts.iter().map(|e| e.e2).min().unwrap(),
    );
    let max = Exponent2::new(
        pts.iter().map(|e| e.e1).max().unwrap(),
        pts.iter().map(|e| e.e2).max().unwrap(),
    );
    let max_l1 = pts.iter().map(|e| e.e1.abs() + e.e2.abs()).max().unwrap();
    let m = max.e1.max(-min.e1);
    let n = max.e2.max(-min.e2);
    let l = (m + n - max_l1).max(0);
    let octagon = SupportOctagon::new(m, n, l);
    let centred = min.e1 == -max.e1 && min.e2 == -max.e2;
    let octagonal = centred
        && l <= m.min(n)
        && pts.iter().all(|&e| octagon.contains(e))
        && octagon.vertices().iter().all(|v| !a.coeff(*v).is_zero());
    let area = Rational::new(BigInt::from(hull_area_doubled(pts)), BigInt::from(2));
    Ok(SupportReport {
        octagon,
        octagonal,
        min,
        max,
        max_l1,
        area,
    })
}

/// Support of `a_n^l`: width `2(n+l)+1`, corner cut `n + l - ⌈(n-l)/2⌉`.
pub fn predicted_support(n: u32, l: u32) -> Result<SupportOctagon> {
    if l >= n {
        return Err(invalid(format!("need 0 <= l < n, got n = {n}, l = {l}")));
    }
    let (n, l) = (n as i64, l as i64);
    let half = n + l;
    Ok(SupportOctagon::new(half, half, half - (n - l + 1) / 2))
}

/// Support of `B_{i,j,k}`.
pub fn box_support(i: u32, j: u32, k: u32) -> SupportOctagon {
    SupportOctagon::new((i + k) as i64, (j + k) as i64, k as i64)
}

/// Support of the interpolatory scheme of order `n`: width `4n - 1`, cut `2n - 2`.
pub fn interpolatory_support(n: u32) -> SupportOctagon {
    let n = n as i64;
    SupportOctagon::new(2 * n - 1, 2 * n - 1, 2 * n - 2)
}

/// Support of the tensor-product pseudo-spline: a square of width `2n + 2l + 1`.
pub fn tensor_support(n: u32, l: u32) -> SupportOctagon {
    let half = (n + l) as i64;
    SupportOctagon::new(half, half, 0)
}

/// Summary of all algebraic properties of a symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub generation_degree: i64,
    pub reproduction_degree: i64,
    pub interpolatory: bool,
    pub symmetric: bool,
    pub convergence_necessary: bool,
    pub generation: DegreeProbe,
    /// `None` when the necessary convergence conditions fail.
    pub reproduction: Option<DegreeProbe>,
}

pub fn analyze(a: &BivariateLaurent, max_check: u32) -> DegreeReport {
    let generation = generation_probe(a, max_check);
    let reproduction = reproduction_probe(a, max_check).ok();
    DegreeReport {
        generation_degree: generation.degree,
        reproduction_degree: reproduction.as_ref().map_or(-1, |p| p.degree),
        interpolatory: check_interpolatory(a),
        symmetric: check_symmetry(a),
        convergence_necessary: reproduction.is_some(),
        generation,
        reproduction,
    }
}

fn printed(den: i64, rows: &[[i64; 7]; 7]) -> BivariateLaurent {
    let rows = rows.iter().map(|r| r.iter().map(|&c| BigInt::from(c)).collect()).collect();
    MaskMatrix::from_rows(Exponent2::new(-3, 3), BigInt::from(den), rows)
        .expect("printed mask is well formed")
        .to_symbol()
}

/// Printed mask of the cubic-reproducing scheme `12 B_{1,1,1} - 8 B_{1,1,2}`.
pub fn example1_printed_mask() -> BivariateLaurent {
    printed(
        32,
        &[
            [0, 0, -1, -2, -1, 0, 0],
            [0, -2, 0, 4, 0, -2, 0],
            [-1, 0, 10, 18, 10, 0, -1],
            [-2, 4, 18, 24, 18, 4, -2],
            [-1, 0, 10, 18, 10, 0, -1],
            [0, -2, 0, 4, 0, -2, 0],
            [0, 0, -1, -2, -1, 0, 0],
        ],
    )
}

/// Printed matrix `A_μ` for an integral `μ`.
pub fn amu_printed_mask(mu: i64) -> BivariateLaurent {
    printed(
        32,
        &[
            [0, 0, -1, -2, -1, 0, 0],
            [0, mu, 0, -2 * mu, 0, mu, 0],
            [-1, 0, 10, 18, 10, 0, -1],
            [-2, -2 * mu, 18, 32 + 4 * mu, 18, -2 * mu, -2],
            [-1, 0, 10, 18, 10, 0, -1],
            [0, mu, 0, -2 * mu, 0, mu, 0],
            [0, 0, -1, -2, -1, 0, 0],
        ],
    )
}

/// Right-hand side of the reproduction decomposition
/// `4 - 4δ1²(B_{0,1,0} + 2B_{1,1,0}) - 4δ1δ2(1 + 4B_{1,1,0}) - 4δ2²(B_{1,0,0} + 2B_{1,1,0})`.
pub fn example1_decomposition() -> BivariateLaurent {
    use crate::laurent::Axis;
    let d1 = delta().lift(Axis::Z1);
    let d2 = delta().lift(Axis::Z2);
    let b110 = box_symbol(1, 1, 0);
    let two_b110 = b110.scale(&int(2));
    let t1 = &d1.pow(2) * &(&box_symbol(0, 1, 0) + &two_b110);
    let t2 = &(&d1 * &d2) * &(&BivariateLaurent::one() + &b110.scale(&int(4)));
    let t3 = &d2.pow(2) * &(&box_symbol(1, 0, 0) + &two_b110);
    let tail = (&(&t1 + &t2) + &t3).scale(&int(4));
    &BivariateLaurent::constant(int(4)) - &tail
}

/// `δ(z1²) δ(z2²) / 16`
pub fn example2_kernel_closed_form() -> BivariateLaurent {
    use crate::laurent::Axis;
    let d_sq = delta().dilate(2);
    (&d_sq.lift(Axis::Z1) * &d_sq.lift(Axis::Z2)).scale(&Rational::new(BigInt::one(), BigInt::from(16)))
}

/// Checks every printed identity of the cubic-reproduction examples.
pub fn example1_decomposition_check() -> bool {
    let a = example_cubic();
    a == example1_printed_mask()
        && a == example1_decomposition()
        && example_cubic_kernel() == example2_kernel_closed_form()
        && [0i64, 1, -2]
            .iter()
            .all(|&mu| example_amu(&int(mu)).poly == amu_printed_mask(mu))
        && example_amu(&int(0)).poly == interpolatory(2).map(|s| s.poly).unwrap_or_default()
}
