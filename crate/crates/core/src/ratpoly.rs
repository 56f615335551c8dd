//! Sparse multivariate polynomials over exact rationals in the variables
//! `R_2, R_3, ...` or `C_2, C_3, ...`, together with the explicit expansion
//! of each `C_k` in the `R` alphabet and the fixture tables used as the
//! oracle layer for every coefficient computation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar; always stored in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rational(numerator: i64, denominator: i64) -> Rational {
    Rational::new(BigInt::from(numerator), BigInt::from(denominator))
}

pub fn integer(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("alphabet mismatch: {left:?} vs {right:?}")]
    AlphabetMismatch { left: Alphabet, right: Alphabet },
    #[error("variable index {index} is out of range; indices start at 2")]
    BadVariableIndex { index: usize },
    #[error("exponent must be at least 1")]
    BadExponent,
    #[error("fixture index {k} is out of range 1..=7")]
    FixtureOutOfRange { k: usize },
    #[error("cannot parse monomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

/// Which variable family a polynomial lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alphabet {
    R,
    C,
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Alphabet::R => write!(f, "R"),
            Alphabet::C => write!(f, "C"),
        }
    }
}

/// A product of variable powers, e.g. `R2^2` or `C2*C4`. The exponent list
/// is sorted by strictly increasing variable index; an empty list is the
/// constant monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    alphabet: Alphabet,
    exponents: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn constant(alphabet: Alphabet) -> Self {
        Monomial {
            alphabet,
            exponents: Vec::new(),
        }
    }

    pub fn variable(alphabet: Alphabet, index: usize) -> Result<Self, PolyError> {
        Self::new(alphabet, &[(index, 1)])
    }

    /// Builds a monomial from `(index, exponent)` factors. Repeated indices
    /// are combined; indices below 2 and zero exponents are rejected.
    pub fn new(alphabet: Alphabet, factors: &[(usize, u32)]) -> Result<Self, PolyError> {
        let mut combined: BTreeMap<usize, u32> = BTreeMap::new();
        for &(index, exponent) in factors {
            if index < 2 {
                return Err(PolyError::BadVariableIndex { index });
            }
            if exponent == 0 {
                return Err(PolyError::BadExponent);
            }
            *combined.entry(index).or_insert(0) += exponent;
        }
        Ok(Monomial {
            alphabet,
            exponents: combined.into_iter().collect(),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn exponents(&self) -> &[(usize, u32)] {
        &self.exponents
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.is_empty()
    }

    /// Total degree: the sum of the exponents.
    pub fn degree(&self) -> u32 {
        self.exponents.iter().map(|&(_, e)| e).sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut combined: BTreeMap<usize, u32> = self.exponents.iter().copied().collect();
        for &(index, exponent) in &other.exponents {
            *combined.entry(index).or_insert(0) += exponent;
        }
        Monomial {
            alphabet: self.alphabet,
            exponents: combined.into_iter().collect(),
        }
    }
}

/// Term order used for canonical printing: ascending variable index with
/// higher powers of the same variable first, and fewer factors first on a
/// shared prefix. This puts `R2^2` before `R2`, and `R2` before `R2*R4`.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match self.alphabet.cmp(&other.alphabet) {
            Ordering::Equal => {}
            o => return o,
        }
        for (&(ai, ae), &(bi, be)) in self.exponents.iter().zip(&other.exponents) {
            match ai.cmp(&bi) {
                Ordering::Equal => {}
                o => return o,
            }
            match be.cmp(&ae) {
                Ordering::Equal => {}
                o => return o, // larger exponent sorts first
            }
        }
        self.exponents.len().cmp(&other.exponents.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponents.is_empty() {
            return write!(f, "1");
        }
        for (i, &(index, exponent)) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "{}{}", self.alphabet, index)?;
            if exponent > 1 {
                write!(f, "^{exponent}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Monomial {
    type Err = PolyError;

    /// Grammar: `variable = ("R"|"C") integer >= 2`, `power = variable ["^"
    /// integer >= 1]`, `monomial = power {"*" power}`.
    fn from_str(input: &str) -> Result<Self, PolyError> {
        let parse_err = |reason: &str| PolyError::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut alphabet: Option<Alphabet> = None;
        let mut factors = Vec::new();
        for power in input.trim().split('*') {
            let power = power.trim();
            let (this_alphabet, rest) = if let Some(rest) = power.strip_prefix('R') {
                (Alphabet::R, rest)
            } else if let Some(rest) = power.strip_prefix('C') {
                (Alphabet::C, rest)
            } else {
                return Err(parse_err("variables start with 'R' or 'C'"));
            };
            match alphabet {
                None => alphabet = Some(this_alphabet),
                Some(a) if a == this_alphabet => {}
                Some(_) => return Err(parse_err("mixed alphabets in one monomial")),
            }
            let (index_text, exponent_text) = match rest.split_once('^') {
                Some((i, e)) => (i, Some(e)),
                None => (rest, None),
            };
            let index: usize = index_text
                .parse()
                .map_err(|_| parse_err("variable index must be an integer"))?;
            if index < 2 {
                return Err(PolyError::BadVariableIndex { index });
            }
            let exponent: u32 = match exponent_text {
                Some(e) => e
                    .parse()
                    .map_err(|_| parse_err("exponent must be an integer"))?,
                None => 1,
            };
            if exponent == 0 {
                return Err(PolyError::BadExponent);
            }
            factors.push((index, exponent));
        }
        let alphabet = alphabet.ok_or_else(|| parse_err("empty monomial"))?;
        Monomial::new(alphabet, &factors)
    }
}

/// A sparse polynomial with exact rational coefficients; zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    alphabet: Alphabet,
    terms: BTreeMap<Monomial, Rational>,
}

impl RationalPolynomial {
    pub fn zero(alphabet: Alphabet) -> Self {
        RationalPolynomial {
            alphabet,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alphabet: Alphabet, value: Rational) -> Self {
        let mut poly = Self::zero(alphabet);
        poly.add_term(Monomial::constant(alphabet), value);
        poly
    }

    pub fn variable(alphabet: Alphabet, index: usize) -> Result<Self, PolyError> {
        let mut poly = Self::zero(alphabet);
        poly.add_term(Monomial::variable(alphabet, index)?, Rational::one());
        Ok(poly)
    }

    pub fn from_terms<I>(alphabet: Alphabet, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut poly = Self::zero(alphabet);
        for (monomial, coefficient) in terms {
            if monomial.alphabet != alphabet {
                return Err(PolyError::AlphabetMismatch {
                    left: alphabet,
                    right: monomial.alphabet,
                });
            }
            poly.add_term(monomial, coefficient);
        }
        Ok(poly)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in canonical print order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, monomial: Monomial, coefficient: Rational) {
        use std::collections::btree_map::Entry;
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(monomial) {
            Entry::Occupied(mut entry) => {
                *entry.get_mut() += coefficient;
                if entry.get().is_zero() {
                    entry.remove();
                }
            }
            Entry::Vacant(entry) => {
                entry.insert(coefficient);
            }
        }
    }

    fn check_alphabet(&self, other: &RationalPolynomial) -> Result<(), PolyError> {
        if self.alphabet != other.alphabet {
            return Err(PolyError::AlphabetMismatch {
                left: self.alphabet,
                right: other.alphabet,
            });
        }
        Ok(())
    }

    /// Exact termwise sum; zero terms are dropped.
    pub fn add(&self, other: &RationalPolynomial) -> Result<RationalPolynomial, PolyError> {
        self.check_alphabet(other)?;
        let mut result = self.clone();
        for (monomial, coefficient) in &other.terms {
            result.add_term(monomial.clone(), coefficient.clone());
        }
        Ok(result)
    }

    pub fn sub(&self, other: &RationalPolynomial) -> Result<RationalPolynomial, PolyError> {
        self.check_alphabet(other)?;
        let mut result = self.clone();
        for (monomial, coefficient) in &other.terms {
            result.add_term(monomial.clone(), -coefficient.clone());
        }
        Ok(result)
    }

    pub fn scale(&self, factor: &Rational) -> RationalPolynomial {
        let mut result = Self::zero(self.alphabet);
        for (monomial, coefficient) in &self.terms {
            result.add_term(monomial.clone(), coefficient * factor);
        }
        result
    }

    /// Exact distributive product.
    pub fn mul(&self, other: &RationalPolynomial) -> Result<RationalPolynomial, PolyError> {
        self.check_alphabet(other)?;
        let mut result = Self::zero(self.alphabet);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                result.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(result)
    }

    pub fn pow(&self, exponent: u32) -> RationalPolynomial {
        let mut result = Self::constant(self.alphabet, Rational::one());
        for _ in 0..exponent {
            result = result.mul(self).expect("same alphabet");
        }
        result
    }

    /// The stored coefficient of `monomial`, or zero. Monomials from the
    /// other alphabet never occur, so their coefficient is zero.
    pub fn coefficient(&self, monomial: &Monomial) -> Rational {
        if monomial.alphabet != self.alphabet {
            return Rational::zero();
        }
        self.terms
            .get(monomial)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (monomial, coefficient)) in self.terms.iter().enumerate() {
            let magnitude = coefficient.abs();
            if i == 0 {
                if coefficient.is_negative() {
                    write!(f, "-")?;
                }
            } else if coefficient.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if monomial.is_constant() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                write!(f, "{monomial}")?;
            } else {
                write!(f, "{magnitude}*{monomial}")?;
            }
        }
        Ok(())
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// Enumerates multisets of parts `>= 2` summing to `k`, as lists of
/// `(part, multiplicity)` with strictly increasing parts.
fn partitions_into_parts_at_least_two(k: usize) -> Vec<Vec<(usize, u32)>> {
    fn go(
        remaining: usize,
        min_part: usize,
        prefix: &mut Vec<(usize, u32)>,
        out: &mut Vec<Vec<(usize, u32)>>,
    ) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in min_part..=remaining {
            let mut multiplicity = 0u32;
            let mut used = 0usize;
            loop {
                multiplicity += 1;
                used += part;
                if used > remaining {
                    break;
                }
                prefix.push((part, multiplicity));
                go(remaining - used, part + 1, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(k, 2, &mut Vec::new(), &mut out);
    out
}

/// The expansion of `C_k` in the `R` alphabet: the sum over all solutions of
/// `2*j_2 + 3*j_3 + ... = k` of `(j_2 + j_3 + ...)! * prod_i ((i-1) R_i)^{j_i} / j_i!`.
/// In particular `C_0 = 1` and `C_1 = 0`.
pub fn c_polynomial(k: usize) -> RationalPolynomial {
    let mut poly = RationalPolynomial::zero(Alphabet::R);
    for solution in partitions_into_parts_at_least_two(k) {
        let total_parts: usize = solution.iter().map(|&(_, j)| j as usize).sum();
        let mut numerator = factorial(total_parts);
        let mut denominator = BigInt::one();
        for &(part, multiplicity) in &solution {
            numerator *= BigInt::from(part - 1).pow(multiplicity);
            denominator *= factorial(multiplicity as usize);
        }
        let monomial = Monomial::new(Alphabet::R, &solution).expect("parts are >= 2");
        poly.add_term(monomial, Rational::new(numerator, denominator));
    }
    poly
}

fn fixture(alphabet: Alphabet, terms: &[(i64, i64, &[(usize, u32)])]) -> RationalPolynomial {
    RationalPolynomial::from_terms(
        alphabet,
        terms.iter().map(|&(num, den, factors)| {
            (
                Monomial::new(alphabet, factors).expect("fixture factors are valid"),
                rational(num, den),
            )
        }),
    )
    .expect("fixture alphabets agree")
}

/// The polynomial expressing the normalized character on a `k`-cycle in the
/// free cumulants, transcribed for `k = 1..=7`. These are data, not computed:
/// they are the oracle the enumeration counts are checked against.
pub fn kerov_fixture(k: usize) -> Result<RationalPolynomial, PolyError> {
    use Alphabet::R;
    let poly = match k {
        1 => fixture(R, &[(1, 1, &[(2, 1)])]),
        2 => fixture(R, &[(1, 1, &[(3, 1)])]),
        3 => fixture(R, &[(1, 1, &[(4, 1)]), (1, 1, &[(2, 1)])]),
        4 => fixture(R, &[(1, 1, &[(5, 1)]), (5, 1, &[(3, 1)])]),
        5 => fixture(
            R,
            &[
                (1, 1, &[(6, 1)]),
                (15, 1, &[(4, 1)]),
                (5, 1, &[(2, 2)]),
                (8, 1, &[(2, 1)]),
            ],
        ),
        6 => fixture(
            R,
            &[
                (1, 1, &[(7, 1)]),
                (35, 1, &[(5, 1)]),
                (35, 1, &[(3, 1), (2, 1)]),
                (84, 1, &[(3, 1)]),
            ],
        ),
        7 => fixture(
            R,
            &[
                (1, 1, &[(8, 1)]),
                (180, 1, &[(2, 1)]),
                (224, 1, &[(2, 2)]),
                (14, 1, &[(2, 3)]),
                (56, 1, &[(3, 2)]),
                (469, 1, &[(4, 1)]),
                (84, 1, &[(2, 1), (4, 1)]),
                (70, 1, &[(6, 1)]),
            ],
        ),
        _ => return Err(PolyError::FixtureOutOfRange { k }),
    };
    Ok(poly)
}

/// The `C`-alphabet polynomial whose expansion equals `kerov_fixture(k)`
/// minus `R_{k+1}`, transcribed for `k = 1..=7`. `k = 1, 2` give zero.
pub fn gr_fixture(k: usize) -> Result<RationalPolynomial, PolyError> {
    use Alphabet::C;
    let poly = match k {
        1 | 2 => RationalPolynomial::zero(C),
        3 => fixture(C, &[(1, 1, &[(2, 1)])]),
        4 => fixture(C, &[(5, 2, &[(3, 1)])]),
        5 => fixture(C, &[(5, 1, &[(4, 1)]), (8, 1, &[(2, 1)])]),
        6 => fixture(C, &[(35, 4, &[(5, 1)]), (42, 1, &[(3, 1)])]),
        7 => fixture(
            C,
            &[
                (14, 1, &[(6, 1)]),
                (469, 3, &[(4, 1)]),
                (203, 3, &[(2, 2)]),
                (180, 1, &[(2, 1)]),
            ],
        ),
        _ => return Err(PolyError::FixtureOutOfRange { k }),
    };
    Ok(poly)
}

/// Substitutes every `C_i` by `c_polynomial(i)` and expands exactly,
/// producing a polynomial in the `R` alphabet. An input already in the `R`
/// alphabet is returned unchanged.
pub fn expand_c_to_r(poly: &RationalPolynomial) -> RationalPolynomial {
    if poly.alphabet() == Alphabet::R {
        return poly.clone();
    }
    let mut result = RationalPolynomial::zero(Alphabet::R);
    for (monomial, coefficient) in poly.terms() {
        let mut term = RationalPolynomial::constant(Alphabet::R, coefficient.clone());
        for &(index, exponent) in monomial.exponents() {
            term = term
                .mul(&c_polynomial(index).pow(exponent))
                .expect("same alphabet");
        }
        result = result.add(&term).expect("same alphabet");
    }
    result
}
