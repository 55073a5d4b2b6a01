//! Exact polynomials in the symbol `q` with rational coefficients, the
//! orbit-size and weight tables of 3-forms on F^7, and the counting
//! identities they satisfy.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

/// `Σ coeffs[d] q^d`, with no trailing zero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> QPoly {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> QPoly {
        QPoly::constant(1)
    }

    pub fn constant(c: i64) -> QPoly {
        QPoly::from_coeffs(vec![BigRational::from_integer(c.into())])
    }

    /// `c q^d`.
    pub fn monomial(c: BigRational, d: usize) -> QPoly {
        let mut coeffs = vec![BigRational::zero(); d + 1];
        coeffs[d] = c;
        QPoly::from_coeffs(coeffs)
    }

    /// `q^d`.
    pub fn q_pow(d: usize) -> QPoly {
        QPoly::monomial(BigRational::one(), d)
    }

    /// `q^d - 1`.
    pub fn q_pow_minus_one(d: usize) -> QPoly {
        &QPoly::q_pow(d) - &QPoly::one()
    }

    /// Integer coefficients, lowest degree first.
    pub fn from_ints(cs: &[i64]) -> QPoly {
        QPoly::from_coeffs(cs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> QPoly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &BigRational) -> QPoly {
        QPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> QPoly {
        (0..e).fold(QPoly::one(), |acc, _| &acc * self)
    }

    /// Long division; returns quotient and remainder.
    pub fn div_rem(&self, d: &QPoly) -> Result<(QPoly, QPoly)> {
        let Some(dd) = d.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead = &d.coeffs[dd];
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let shift = rem.len() - 1 - dd;
            let c = rem.last().expect("nonempty") / lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[shift + i] -= &c * dc;
            }
            quot[shift] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        Ok((QPoly::from_coeffs(quot), QPoly::from_coeffs(rem)))
    }

    /// Exact division; a nonzero remainder is an error.
    pub fn div_exact(&self, d: &QPoly) -> Result<QPoly> {
        let (quot, rem) = self.div_rem(d)?;
        if !rem.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(quot)
    }

    /// Value at an integer `q`.
    pub fn eval(&self, q: i64) -> BigRational {
        let x = BigRational::from_integer(q.into());
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * &x + c)
    }

    /// Value at `q` when it is an integer.
    pub fn eval_int(&self, q: i64) -> Option<BigInt> {
        let v = self.eval(q);
        v.is_integer().then(|| v.to_integer())
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let z = BigRational::zero();
        QPoly::from_coeffs(
            (0..n).map(|i| self.coeffs.get(i).unwrap_or(&z) + rhs.coeffs.get(i).unwrap_or(&z)).collect(),
        )
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        self + &(-rhs)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = d == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{d}")?,
            }
        }
        Ok(())
    }
}

fn prod(factors: &[QPoly]) -> QPoly {
    factors.iter().fold(QPoly::one(), |acc, f| &acc * f)
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Number of ℓ-dimensional subspaces of F^m, as a polynomial in q.
pub fn gaussian_binomial(m: usize, l: usize) -> Result<QPoly> {
    if l > m {
        return Err(Error::RankOutOfRange { r: l, max: m });
    }
    let num = prod(&(0..l).map(|i| QPoly::q_pow_minus_one(m - i)).collect::<Vec<_>>());
    let den = prod(&(1..=l).map(QPoly::q_pow_minus_one).collect::<Vec<_>>());
    num.div_exact(&den)
}

/// `|GL(m, F_q)| = q^{m(m-1)/2} (q^m - 1) ⋯ (q - 1)`.
pub fn glq_order(m: usize) -> QPoly {
    let mut factors = vec![QPoly::q_pow(m * (m.saturating_sub(1)) / 2)];
    factors.extend((1..=m).map(QPoly::q_pow_minus_one));
    prod(&factors)
}

/// `|P^n| = (q^{n+1} - 1)/(q - 1)`.
pub fn projective_count(n: usize) -> QPoly {
    QPoly::q_pow_minus_one(n + 1).div_exact(&QPoly::q_pow_minus_one(1)).expect("exact")
}

/// Sizes `N_1, …, N_11` of the eleven projective orbits of 3-forms on F^7.
pub fn ni_table() -> [QPoly; 11] {
    let m = QPoly::q_pow_minus_one;
    let qp = QPoly::q_pow;
    let p = |cs: &[i64]| QPoly::from_ints(cs);
    let qm1 = m(1);
    let qm1_sq = qm1.pow(2);
    let exact = |a: QPoly, d: &QPoly| a.div_exact(d).expect("orbit sizes are polynomials");
    [
        exact(prod(&[m(7), m(5), p(&[1, -1, 1])]), &qm1_sq),
        exact(prod(&[qp(2), m(7), m(5), p(&[1, 0, 1, 0, 1]), m(3)]), &qm1_sq),
        exact(prod(&[qp(9), m(7), m(5), p(&[1, 0, 0, 1]), p(&[1, 0, 1])]), &qm1).scale(&half()),
        exact(prod(&[qp(4), m(7), m(6), m(5), m(4)]), &qm1_sq),
        prod(&[qp(9), m(7), m(5), m(3), p(&[1, 1])]).scale(&half()),
        exact(prod(&[qp(9), m(7), m(6), m(5), m(3), p(&[1, 0, 1])]), &qm1_sq).scale(&half()),
        prod(&[qp(6), m(7), m(5), p(&[1, 1, 1])]),
        prod(&[qp(11), m(7), m(6), m(5), p(&[1, 1, 1]), p(&[1, 0, 1])]),
        exact(prod(&[qp(6), m(7), m(6), m(5), m(4)]), &qm1),
        prod(&[qp(15), m(7), m(5), m(4), m(3)]),
        prod(&[qp(9), m(7), m(6), m(5), m(3)]).scale(&half()),
    ]
}

/// Codeword weights of the eleven orbit representatives in C(3, 7).
pub fn wt_table() -> [QPoly; 11] {
    let w = |exps: &[(i64, usize)]| {
        let mut cs = vec![0i64; 13];
        for &(c, e) in exps {
            cs[e] += c;
        }
        QPoly::from_ints(&cs)
    };
    [
        w(&[(1, 12)]),
        w(&[(1, 12), (1, 10)]),
        w(&[(1, 12), (1, 10), (1, 9), (-1, 7)]),
        w(&[(1, 12), (1, 10), (1, 9)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 7)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 8), (-1, 7)]),
        w(&[(1, 12), (1, 10), (1, 8)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 8)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 8)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 8), (1, 6)]),
        w(&[(1, 12), (1, 10), (1, 9), (1, 8), (1, 7)]),
    ]
}

fn sum(ps: impl IntoIterator<Item = QPoly>) -> QPoly {
    ps.into_iter().fold(QPoly::zero(), |acc, p| &acc + &p)
}

/// `Σ N_i = |P^34|`.
pub fn verify_sum_ni() -> bool {
    sum(ni_table()) == projective_count(34)
}

/// `Σ N_i wt_i = q^34 |G(3, 7)|`.
pub fn verify_macwilliams() -> bool {
    let n = gaussian_binomial(7, 3).expect("valid");
    let lhs = sum(ni_table().iter().zip(wt_table().iter()).map(|(a, b)| a * b));
    lhs == &QPoly::q_pow(34) * &n
}

/// `Σ N_i wt_i / |P^34| = |G(3,7)| (1 - |P^33| / |P^34|)`, checked after
/// multiplying both sides by `|P^34|^2`.
pub fn verify_average_weight() -> bool {
    let n = gaussian_binomial(7, 3).expect("valid");
    let p34 = projective_count(34);
    let p33 = projective_count(33);
    let lhs = &sum(ni_table().iter().zip(wt_table().iter()).map(|(a, b)| a * b)) * &p34;
    let rhs = &(&n * &(&p34 - &p33)) * &p34;
    lhs == rhs
}
