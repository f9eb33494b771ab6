//! Dense integer mask matrices in the printed layout: rows run over `α2` from
//! top (largest) to bottom, columns over `α1` from left (smallest) to right.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{format_err, Error, Result};
use crate::laurent::{BivariateLaurent, Exponent2, Rational};

/// `rows / denominator`, with `offset` the exponent of the top-left entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaskMatrix {
    offset: Exponent2,
    denominator: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl MaskMatrix {
    /// Lays out the coefficients of `a` over their bounding box.
    pub fn from_symbol(a: &BivariateLaurent) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let (den, nums) = a.integer_numerators();
        let (mut min1, mut max1, mut min2, mut max2) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (e, _) in &nums {
            min1 = min1.min(e.e1);
            max1 = max1.max(e.e1);
            min2 = min2.min(e.e2);
            max2 = max2.max(e.e2);
        }
        let width = (max1 - min1 + 1) as usize;
        let height = (max2 - min2 + 1) as usize;
        let mut rows = vec![vec![BigInt::zero(); width]; height];
        for (e, c) in nums {
            rows[(max2 - e.e2) as usize][(e.e1 - min1) as usize] = c;
        }
        Ok(MaskMatrix {
            offset: Exponent2::new(min1, max2),
            denominator: den,
            rows,
        })
    }

    /// Builds a mask from raw rows, reducing `rows / denominator` to lowest terms.
    pub fn from_rows(offset: Exponent2, denominator: BigInt, rows: Vec<Vec<BigInt>>) -> Result<Self> {
        if !denominator.is_positive() {
            return Err(format_err("mask denominator must be positive"));
        }
        let width = rows.first().map(Vec::len).unwrap_or(0);
        if width == 0 || rows.iter().any(|r| r.len() != width) {
            return Err(format_err("mask rows must be nonempty and rectangular"));
        }
        let g = rows
            .iter()
            .flatten()
            .fold(denominator.clone(), |acc, c| acc.gcd(c));
        let (denominator, rows) = if g.is_one() {
            (denominator, rows)
        } else {
            let rows = rows
                .into_iter()
                .map(|r| r.into_iter().map(|c| c / &g).collect())
                .collect();
            (denominator / &g, rows)
        };
        Ok(MaskMatrix {
            offset,
            denominator,
            rows,
        })
    }

    pub fn offset(&self) -> Exponent2 {
        self.offset
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    /// Smallest and largest exponents covered by the matrix, per axis.
    pub fn exponent_bounds(&self) -> (Exponent2, Exponent2) {
        let lo = Exponent2::new(self.offset.e1, self.offset.e2 - self.height() as i64 + 1);
        let hi = Exponent2::new(self.offset.e1 + self.width() as i64 - 1, self.offset.e2);
        (lo, hi)
    }

    /// Nonzero integer entries keyed by exponent.
    pub fn integer_terms(&self) -> impl Iterator<Item = (Exponent2, &BigInt)> + '_ {
        self.rows.iter().enumerate().flat_map(move |(r, row)| {
            row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(col, c)| {
                (Exponent2::new(self.offset.e1 + col as i64, self.offset.e2 - r as i64), c)
            })
        })
    }

    pub fn to_symbol(&self) -> BivariateLaurent {
        BivariateLaurent::from_terms(
            self.integer_terms()
                .map(|(e, c)| (e, Rational::new(c.clone(), self.denominator.clone()))),
        )
    }

    /// Entry at exponent `e` as an integer numerator; zero outside the matrix.
    pub fn entry(&self, e: Exponent2) -> BigInt {
        let col = e.e1 - self.offset.e1;
        let row = self.offset.e2 - e.e2;
        if col < 0 || row < 0 || col >= self.width() as i64 || row >= self.height() as i64 {
            return BigInt::zero();
        }
        self.rows[row as usize][col as usize].clone()
    }
}

impl fmt::Display for MaskMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect();
        let w = cells.iter().flatten().map(String::len).max().unwrap_or(1);
        writeln!(f, "1/{} ×", self.denominator)?;
        for row in &cells {
            let line: Vec<String> = row.iter().map(|c| format!("{c:>w$}")).collect();
            writeln!(f, "[ {} ]", line.join(" "))?;
        }
        Ok(())
    }
}
