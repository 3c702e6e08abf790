//! Normal ordering of single-mode boson operator words under `[a, a†] = 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_WORD_LIMIT: usize = 32;
pub const DEFAULT_QUADRATURE_LIMIT: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// `a`
    Annihilate,
    /// `a†`
    Create,
}

impl Letter {
    pub fn parse_word(text: &str) -> Result<Vec<Letter>> {
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| match tok {
                "a" => Ok(Letter::Annihilate),
                "a†" | "ad" | "a+" | "adag" => Ok(Letter::Create),
                other => Err(Error::InvalidArgument(format!("unknown operator letter {other:?}"))),
            })
            .collect()
    }
}

/// Finite sum `Σ c_{m,n} a†^m a^n`, keyed by `(m, n)`.
///
/// Zero coefficients are never stored, so structural equality is operator
/// equality.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NormalOrderedPolynomial {
    terms: BTreeMap<(usize, usize), Complex64>,
}

impl NormalOrderedPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(m: usize, n: usize, coeff: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(m, n, coeff);
        p
    }

    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), Complex64)>,
    {
        let mut p = Self::zero();
        for ((m, n), c) in terms {
            p.add_term(m, n, c);
        }
        p
    }

    pub fn add_term(&mut self, m: usize, n: usize, coeff: Complex64) {
        let slot = self.terms.entry((m, n)).or_insert(Complex64::new(0.0, 0.0));
        *slot += coeff;
        if slot.norm_sqr() == 0.0 {
            self.terms.remove(&(m, n));
        }
    }

    pub fn coeff(&self, m: usize, n: usize) -> Complex64 {
        self.terms.get(&(m, n)).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.terms.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest `max(m, n)` over the stored terms.
    pub fn max_power(&self) -> usize {
        self.terms.keys().map(|&(m, n)| m.max(n)).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c * factor)))
    }

    /// `self · a`
    pub fn mul_annihilate(&self) -> Self {
        Self::from_terms(self.terms().map(|((m, n), c)| ((m, n + 1), c)))
    }

    /// `self · a†`, using `a^q a† = a† a^q + q a^{q-1}`.
    pub fn mul_create(&self) -> Self {
        let mut out = Self::zero();
        for ((m, n), c) in self.terms() {
            out.add_term(m + 1, n, c);
            if n > 0 {
                out.add_term(m, n - 1, c * n as f64);
            }
        }
        out
    }

    pub fn mul_letter(&self, letter: Letter) -> Self {
        match letter {
            Letter::Annihilate => self.mul_annihilate(),
            Letter::Create => self.mul_create(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((m, n), c) in other.terms() {
            out.add_term(m, n, c);
        }
        out
    }

    /// Contract against a table of normal-ordered moments `⟨a†^m a^n⟩`.
    pub fn expectation<F>(&self, mut moment: F) -> Result<Complex64>
    where
        F: FnMut(usize, usize) -> Result<Complex64>,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for ((m, n), c) in self.terms() {
            acc += c * moment(m, n)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for NormalOrderedPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((m, n), c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) a†^{m} a^{n}")?;
        }
        Ok(())
    }
}

/// Normal-ordered form of an operator word, read left to right.
pub fn normal_order(word: &[Letter]) -> Result<NormalOrderedPolynomial> {
    normal_order_bounded(word, DEFAULT_WORD_LIMIT)
}

pub fn normal_order_bounded(word: &[Letter], limit: usize) -> Result<NormalOrderedPolynomial> {
    if word.len() > limit {
        return Err(Error::SizeLimit {
            what: "operator word length",
            limit,
            got: word.len(),
        });
    }
    // Each prefix is kept in normal form, so appending a letter only touches
    // the (p, q) exponents already present.
    Ok(word
        .iter()
        .fold(NormalOrderedPolynomial::one(), |acc, &l| acc.mul_letter(l)))
}

/// Normal-ordered `X^k` with `X = (a + a†)/√2`.
pub fn quadrature_power_expansion(k: usize) -> Result<NormalOrderedPolynomial> {
    Ok(quadrature_powers(k)?.pop().expect("k + 1 powers"))
}

/// `X^0, X^1, ..., X^k` in normal order.
pub fn quadrature_powers(k: usize) -> Result<Vec<NormalOrderedPolynomial>> {
    if k > DEFAULT_QUADRATURE_LIMIT {
        return Err(Error::SizeLimit {
            what: "quadrature power",
            limit: DEFAULT_QUADRATURE_LIMIT,
            got: k,
        });
    }
    let inv_sqrt2 = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut powers = Vec::with_capacity(k + 1);
    powers.push(NormalOrderedPolynomial::one());
    for j in 1..=k {
        let prev = &powers[j - 1];
        let next = prev.mul_annihilate().add(&prev.mul_create()).scale(inv_sqrt2);
        powers.push(next);
    }
    Ok(powers)
}
