use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use super::gauss::{self, GaussRat};
use super::EvalError;

/// An opaque constant such as `eps(V)` or `detPhi(V)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: impl AsRef<str>) -> Self {
        Symbol(Arc::from(name.as_ref()))
    }

    /// `eps(id)`, the epsilon factor of a Galois-type block.
    pub fn eps(block_id: &str) -> Self {
        Symbol::new(format!("eps({block_id})"))
    }

    /// `detPhi(id)`, the determinant of `-Φ` on the inertia invariants of a block.
    pub fn det_phi(block_id: &str) -> Self {
        Symbol::new(format!("detPhi({block_id})"))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// `(-1)^exp`.
    pub fn power_of_minus_one(exp: i64) -> Self {
        Sign::from_parity(exp.rem_euclid(2) == 1)
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

/// `sign · q^q_exp · ∏ symbol^exponent`.
///
/// Zero exponents are never stored, so structural equality is equality of
/// the represented monomials.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SymbolicScalar {
    sign: Sign,
    q_exp: Rational64,
    factors: BTreeMap<Symbol, i64>,
}

impl SymbolicScalar {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn minus_one() -> Self {
        Self::from_sign(Sign::Minus)
    }

    pub fn from_sign(sign: Sign) -> Self {
        SymbolicScalar {
            sign,
            ..Self::default()
        }
    }

    pub fn q_power(q_exp: Rational64) -> Self {
        SymbolicScalar {
            q_exp,
            ..Self::default()
        }
    }

    pub fn symbol(symbol: Symbol, exp: i64) -> Self {
        let mut factors = BTreeMap::new();
        if exp != 0 {
            factors.insert(symbol, exp);
        }
        SymbolicScalar {
            factors,
            ..Self::default()
        }
    }

    pub fn new(sign: Sign, q_exp: Rational64, factors: BTreeMap<Symbol, i64>) -> Self {
        let factors = factors.into_iter().filter(|(_, e)| *e != 0).collect();
        SymbolicScalar {
            sign,
            q_exp,
            factors,
        }
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn q_exp(&self) -> Rational64 {
        self.q_exp
    }

    pub fn factors(&self) -> &BTreeMap<Symbol, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn inverse(&self) -> Self {
        SymbolicScalar {
            sign: self.sign,
            q_exp: -self.q_exp,
            factors: self.factors.iter().map(|(s, e)| (s.clone(), -e)).collect(),
        }
    }

    pub fn pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return Self::one();
        }
        SymbolicScalar {
            sign: Sign::from_parity(self.sign == Sign::Minus && exp % 2 != 0),
            q_exp: self.q_exp * exp,
            factors: self
                .factors
                .iter()
                .map(|(s, e)| (s.clone(), e * exp))
                .collect(),
        }
    }

    /// Evaluate exactly. Half-integer powers of `q` are allowed only when
    /// `q` is a perfect square.
    pub fn eval_exact(
        &self,
        q: &BigRational,
        assignment: &BTreeMap<Symbol, GaussRat>,
    ) -> Result<GaussRat, EvalError> {
        if q.is_zero() {
            return Err(EvalError::ZeroToNegativePower("q".into()));
        }
        let mut value = gauss::from_int(self.sign.as_i64());
        let (num, den) = (*self.q_exp.numer(), *self.q_exp.denom());
        let base = match den {
            1 => q.clone(),
            2 => gauss::rational_sqrt(q).ok_or_else(|| EvalError::Irrational {
                q: q.to_string(),
                exp: self.q_exp.to_string(),
            })?,
            _ => return Err(EvalError::BadQExponent(self.q_exp.to_string())),
        };
        let q_part = gauss::pow(&gauss::from_rational(base), num)
            .ok_or_else(|| EvalError::ZeroToNegativePower("q".into()))?;
        value = gauss::mul(&value, &q_part);
        for (sym, &exp) in &self.factors {
            let v = assignment
                .get(sym)
                .ok_or_else(|| EvalError::MissingSymbol(sym.to_string()))?;
            let p = gauss::pow(v, exp)
                .ok_or_else(|| EvalError::ZeroToNegativePower(sym.to_string()))?;
            value = gauss::mul(&value, &p);
        }
        Ok(value)
    }

    /// Floating-point evaluation; handles any rational `q_exp`.
    pub fn eval_complex(
        &self,
        q: f64,
        assignment: &BTreeMap<Symbol, Complex64>,
    ) -> Result<Complex64, EvalError> {
        if q == 0.0 {
            return Err(EvalError::ZeroToNegativePower("q".into()));
        }
        let exp = self.q_exp.to_f64().unwrap_or(f64::NAN);
        let mut value = Complex64::new(self.sign.as_i64() as f64, 0.0) * q.powf(exp);
        for (sym, &e) in &self.factors {
            let v = assignment
                .get(sym)
                .ok_or_else(|| EvalError::MissingSymbol(sym.to_string()))?;
            if *v == Complex64::new(0.0, 0.0) && e < 0 {
                return Err(EvalError::ZeroToNegativePower(sym.to_string()));
            }
            value *= v.powi(e as i32);
        }
        Ok(value)
    }

    /// Whether the q-exponent is an integer.
    pub fn has_integral_q_exp(&self) -> bool {
        self.q_exp.is_integer()
    }

    /// `q_exp` as a big rational, for callers that combine it with other exponents.
    pub fn q_exp_big(&self) -> BigRational {
        BigRational::new(
            BigInt::from(*self.q_exp.numer()),
            BigInt::from(*self.q_exp.denom()),
        )
    }
}

impl Mul for &SymbolicScalar {
    type Output = SymbolicScalar;

    fn mul(self, rhs: &SymbolicScalar) -> SymbolicScalar {
        let mut factors = self.factors.clone();
        for (sym, e) in &rhs.factors {
            let entry = factors.entry(sym.clone()).or_insert(0);
            *entry += e;
            if *entry == 0 {
                factors.remove(sym);
            }
        }
        SymbolicScalar {
            sign: self.sign * rhs.sign,
            q_exp: self.q_exp + rhs.q_exp,
            factors,
        }
    }
}

impl Mul for SymbolicScalar {
    type Output = SymbolicScalar;

    fn mul(self, rhs: SymbolicScalar) -> SymbolicScalar {
        &self * &rhs
    }
}

impl std::iter::Product for SymbolicScalar {
    fn product<I: Iterator<Item = SymbolicScalar>>(iter: I) -> Self {
        iter.fold(SymbolicScalar::one(), |acc, x| acc * x)
    }
}

impl fmt::Display for SymbolicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        if !self.q_exp.is_zero() {
            if self.q_exp.is_one() {
                terms.push("q".to_string());
            } else {
                terms.push(format!("q^({})", self.q_exp));
            }
        }
        for (sym, e) in &self.factors {
            if *e == 1 {
                terms.push(sym.to_string());
            } else {
                terms.push(format!("{sym}^{e}"));
            }
        }
        let sign = if self.sign == Sign::Minus { "-" } else { "" };
        if terms.is_empty() {
            write!(f, "{sign}1")
        } else {
            write!(f, "{sign}{}", terms.join("·"))
        }
    }
}

/// Convenience: `scalar_mul` under its operational name.
pub fn scalar_mul(a: &SymbolicScalar, b: &SymbolicScalar) -> SymbolicScalar {
    a * b
}

/// Convenience: exact `scalar_eval`.
pub fn scalar_eval(
    s: &SymbolicScalar,
    q: &BigRational,
    assignment: &BTreeMap<Symbol, GaussRat>,
) -> Result<GaussRat, EvalError> {
    s.eval_exact(q, assignment)
}
