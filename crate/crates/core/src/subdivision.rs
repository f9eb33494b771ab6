//! Exact binary refinement of grid data, basic limit function sampling, and
//! empirical polynomial-reproduction tests.
//!
//! Grid data is sparse but always carries a rectangular window of validity.
//! Inside the window, absent entries are zeros; outside it nothing is known.
//! A refinement step only keeps output points whose every contributing input
//! lies inside the input window, so truncation never masquerades as data.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::analysis::check_convergence_necessary;
use crate::error::{invalid, Error, Result};
use crate::laurent::{BivariateLaurent, Rational};
use crate::mask::MaskMatrix;

/// Inclusive integer rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    pub x0: i64,
    pub y0: i64,
    pub x1: i64,
    pub y1: i64,
}

impl Window {
    pub fn new(x0: i64, y0: i64, x1: i64, y1: i64) -> Self {
        Window { x0, y0, x1, y1 }
    }

    /// `[-r, r]²`
    pub fn centered(r: i64) -> Self {
        Window::new(-r, -r, r, r)
    }

    pub fn is_empty(&self) -> bool {
        self.x0 > self.x1 || self.y0 > self.y1
    }

    pub fn width(&self) -> i64 {
        (self.x1 - self.x0 + 1).max(0)
    }

    pub fn height(&self) -> i64 {
        (self.y1 - self.y0 + 1).max(0)
    }

    /// Number of lattice points, saturating.
    pub fn area(&self) -> u128 {
        self.width() as u128 * self.height() as u128
    }

    pub fn contains(&self, p: (i64, i64)) -> bool {
        (self.x0..=self.x1).contains(&p.0) && (self.y0..=self.y1).contains(&p.1)
    }

    /// Points in raster order: `α2` descending, then `α1` ascending.
    pub fn points(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        (self.y0..=self.y1)
            .rev()
            .flat_map(move |y| (self.x0..=self.x1).map(move |x| (x, y)))
    }
}

/// Data on the lattice `2^-level ℤ²`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFunction {
    level: u32,
    window: Window,
    values: BTreeMap<(i64, i64), Rational>,
}

impl GridFunction {
    /// All-zero data on `window`.
    pub fn zeros(level: u32, window: Window) -> Self {
        GridFunction {
            level,
            window,
            values: BTreeMap::new(),
        }
    }

    /// Unit impulse at the origin, zero elsewhere on `window`.
    pub fn delta(window: Window) -> Self {
        let mut g = GridFunction::zeros(0, window);
        if window.contains((0, 0)) {
            g.values.insert((0, 0), Rational::one());
        }
        g
    }

    pub fn from_fn(level: u32, window: Window, mut f: impl FnMut((i64, i64)) -> Rational) -> Self {
        let values = window
            .points()
            .filter_map(|p| {
                let v = f(p);
                (!v.is_zero()).then_some((p, v))
            })
            .collect();
        GridFunction { level, window, values }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn window(&self) -> Window {
        self.window
    }

    /// Value at `p`, or `None` outside the window.
    pub fn get(&self, p: (i64, i64)) -> Option<Rational> {
        if !self.window.contains(p) {
            return None;
        }
        Some(self.values.get(&p).cloned().unwrap_or_else(Rational::zero))
    }

    /// Sets a value inside the window.
    pub fn set(&mut self, p: (i64, i64), v: Rational) -> Result<()> {
        if !self.window.contains(p) {
            return Err(invalid(format!("point {p:?} lies outside the window")));
        }
        if v.is_zero() {
            self.values.remove(&p);
        } else {
            self.values.insert(p, v);
        }
        Ok(())
    }

    /// Nonzero entries.
    /// The same data on the intersection of its window with `window`.
    pub fn restrict(&self, window: Window) -> GridFunction {
        let w = Window::new(
            self.window.x0.max(window.x0),
            self.window.y0.max(window.y0),
            self.window.x1.min(window.x1),
            self.window.y1.min(window.y1),
        );
        GridFunction {
            level: self.level,
            window: w,
            values: self.values.iter().filter(|(p, _)| w.contains(**p)).map(|(p, v)| (*p, v.clone())).collect(),
        }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = ((i64, i64), &Rational)> + '_ {
        self.values.iter().map(|(&p, v)| (p, v))
    }

    pub fn sum(&self) -> Rational {
        self.values.values().fold(Rational::zero(), |acc, v| acc + v)
    }

    /// Parameter-space position `α / 2^level`.
    pub fn position(&self, p: (i64, i64)) -> (Rational, Rational) {
        let scale = BigInt::one() << self.level;
        (
            Rational::new(BigInt::from(p.0), scale.clone()),
            Rational::new(BigInt::from(p.1), scale),
        )
    }

    /// Nonzero values as a polynomial (useful for support measurements).
    pub fn to_laurent(&self) -> BivariateLaurent {
        BivariateLaurent::from_terms(self.values.iter().map(|(&p, v)| (p, v.clone())))
    }

    pub fn min_max(&self) -> (Rational, Rational) {
        let mut min = None::<Rational>;
        let mut max = None::<Rational>;
        let has_zero = (self.values.len() as u128) < self.window.area();
        let zero = has_zero.then(Rational::zero);
        for v in self.values.values().chain(zero.iter()) {
            if min.as_ref().is_none_or(|m| v < m) {
                min = Some(v.clone());
            }
            if max.as_ref().is_none_or(|m| v > m) {
                max = Some(v.clone());
            }
        }
        (min.unwrap_or_else(Rational::zero), max.unwrap_or_else(Rational::zero))
    }
}

/// Output window of one refinement step: `α` is kept iff every `β` with
/// `α - 2β` inside the mask's exponent box lies in the input window.
pub fn refined_window(mask: &MaskMatrix, input: Window) -> Window {
    let (lo, hi) = mask.exponent_bounds();
    Window::new(
        2 * input.x0 - 1 + hi.e1,
        2 * input.y0 - 1 + hi.e2,
        2 * input.x1 + 1 + lo.e1,
        2 * input.y1 + 1 + lo.e2,
    )
}

/// One step `g_α = Σ_β a_{α-2β} f_β`, exact.
pub fn subdivide_step(mask: &MaskMatrix, f: &GridFunction) -> Result<GridFunction> {
    let window = refined_window(mask, f.window);
    if window.is_empty() {
        return Err(Error::WindowExhausted(format!(
            "level {} window {:?} is too small for a {}x{} mask",
            f.level,
            f.window,
            mask.width(),
            mask.height()
        )));
    }
    // integer arithmetic over the common denominator of the data
    let data_den = f.values.values().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let data: Vec<((i64, i64), BigInt)> = f
        .values
        .iter()
        .map(|(&p, v)| (p, v.numer() * (&data_den / v.denom())))
        .collect();
    let taps: Vec<_> = mask.integer_terms().collect();
    let mut acc: HashMap<(i64, i64), BigInt> = HashMap::new();
    for (beta, value) in &data {
        for (gamma, entry) in &taps {
            let alpha = (2 * beta.0 + gamma.e1, 2 * beta.1 + gamma.e2);
            if window.contains(alpha) {
                *acc.entry(alpha).or_insert_with(BigInt::zero) += *entry * value;
            }
        }
    }
    let den = data_den * mask.denominator();
    let values = acc
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(p, v)| (p, Rational::new(v, den.clone())))
        .collect();
    Ok(GridFunction {
        level: f.level + 1,
        window,
        values,
    })
}

/// Applies `steps` refinement steps.
pub fn subdivide(mask: &MaskMatrix, f: &GridFunction, steps: u32) -> Result<GridFunction> {
    let mut g = f.clone();
    for _ in 0..steps {
        g = subdivide_step(mask, &g)?;
    }
    Ok(g)
}

/// Default step count for limit-function sampling.
pub const DEFAULT_LIMIT_STEPS: u32 = 3;

/// Samples the basic limit function: `steps` refinements of the unit impulse,
/// reported on `[-(r·2^k + 1), r·2^k + 1]²` for a mask of radius `r` (the limit
/// support at level `k` plus one ring). The impulse starts in `[-(2r+1), 2r+1]²`
/// so that this whole square stays inside the validity window.
pub fn basic_limit(a: &BivariateLaurent, steps: u32) -> Result<GridFunction> {
    if steps < 1 {
        return Err(invalid("basic limit sampling needs at least one step"));
    }
    let mask = MaskMatrix::from_symbol(a)?;
    let radius = a.radius();
    let start = GridFunction::delta(Window::centered(2 * radius + 1));
    let g = subdivide(&mask, &start, steps)?;
    // support of the limit scaled to level `steps`, plus one ring
    Ok(g.restrict(Window::centered((radius << steps) + 1)))
}

/// Polynomial in `(x, y)` with rational coefficients and nonnegative powers.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polynomial2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Polynomial2 {
    pub fn monomial(i: u32, j: u32) -> Self {
        Polynomial2::from_terms([((i, j), Rational::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Rational)>>(terms: I) -> Self {
        let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for (k, c) in terms {
            let slot = out.entry(k).or_insert_with(Rational::zero);
            *slot += c;
        }
        out.retain(|_, c| !c.is_zero());
        Polynomial2 { terms: out }
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(i, j)| i + j).max()
    }

    pub fn eval(&self, x: &Rational, y: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * x.pow(i as i32) * y.pow(j as i32))
            .fold(Rational::zero(), |acc, t| acc + t)
    }
}

/// Samples `p` on the integer points of `window`, refines once, and checks
/// `g_α = p(α/2)` on the valid output window.
pub fn reproduce_empirically(a: &BivariateLaurent, p: &Polynomial2, window: Window) -> Result<bool> {
    if !check_convergence_necessary(a) {
        return Err(Error::InvalidScheme);
    }
    let mask = MaskMatrix::from_symbol(a)?;
    let f = GridFunction::from_fn(0, window, |(x, y)| p.eval(&Rational::from_integer(x.into()), &Rational::from_integer(y.into())));
    let g = subdivide_step(&mask, &f)?;
    let reproduced = g.window.points().all(|alpha| {
        let (x, y) = g.position(alpha);
        g.get(alpha).expect("point inside window") == p.eval(&x, &y)
    });
    Ok(reproduced)
}
