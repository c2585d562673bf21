//! Truncated elements of the Novikov field with rational exponents.
//!
//! An element is a finite list of `(exponent, coefficient)` pairs together with
//! a precision cap: every exponent at or above the cap is unknown. A cap of
//! `None` means the element is exact.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Default absolute precision used when an exact input produces an infinite series.
pub const WORKING_PRECISION: i64 = 400;
/// Default precision at which assertions are made.
pub const ASSERTION_PRECISION: i64 = 300;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn parse_q(s: &str) -> Result<Q> {
    s.trim()
        .parse::<Q>()
        .map_err(|_| Error::SchemaError(format!("not a rational: {s:?}")))
}

/// Precision cap; `None` is +infinity.
pub type Prec = Option<Q>;

pub fn prec_min(a: &Prec, b: &Prec) -> Prec {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(if x <= y { x.clone() } else { y.clone() }),
    }
}

pub fn prec_shift(p: &Prec, e: &Q) -> Prec {
    p.as_ref().map(|p| p + e)
}

fn below(e: &Q, p: &Prec) -> bool {
    p.as_ref().is_none_or(|p| e < p)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Valuation {
    Finite(Q),
    /// Empty term list with a finite cap: only a lower bound is known.
    AtLeast(Q),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NovikovScalar {
    terms: Vec<(Q, Q)>,
    precision: Prec,
}

impl NovikovScalar {
    pub fn zero() -> Self {
        Self { terms: vec![], precision: None }
    }

    pub fn one() -> Self {
        Self::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(c, Q::zero())
    }

    pub fn monomial(c: Q, e: Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: vec![(e, c)], precision: None }
    }

    /// `c * T^e` with integer data.
    pub fn t(c: i64, e: i64) -> Self {
        Self::monomial(q(c), q(e))
    }

    /// The element `O(T^p)`.
    pub fn big_o(p: Q) -> Self {
        Self { terms: vec![], precision: Some(p) }
    }

    pub fn from_terms<I: IntoIterator<Item = (Q, Q)>>(terms: I, precision: Prec) -> Self {
        let mut m: BTreeMap<Q, Q> = BTreeMap::new();
        for (e, c) in terms {
            if below(&e, &precision) {
                *m.entry(e).or_insert_with(Q::zero) += c;
            }
        }
        Self::from_map(m, precision)
    }

    fn from_map(m: BTreeMap<Q, Q>, precision: Prec) -> Self {
        let terms = m
            .into_iter()
            .filter(|(e, c)| !c.is_zero() && below(e, &precision))
            .collect();
        Self { terms, precision }
    }

    pub fn terms(&self) -> &[(Q, Q)] {
        &self.terms
    }

    pub fn precision(&self) -> &Prec {
        &self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// No stored terms (exact zero or `O(T^p)`).
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.precision.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match (self.terms.first(), &self.precision) {
            (Some((e, _)), _) => Valuation::Finite(e.clone()),
            (None, Some(p)) => Valuation::AtLeast(p.clone()),
            (None, None) => Valuation::Infinite,
        }
    }

    /// Least stored exponent, if any.
    pub fn val(&self) -> Option<Q> {
        self.terms.first().map(|(e, _)| e.clone())
    }

    /// Best known lower bound for the valuation; `None` is +infinity.
    pub fn val_lower(&self) -> Prec {
        match self.valuation() {
            Valuation::Finite(v) | Valuation::AtLeast(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn leading(&self) -> Option<&(Q, Q)> {
        self.terms.first()
    }

    /// Coefficient of `T^e` (zero when absent).
    pub fn coeff(&self, e: &Q) -> Q {
        self.terms
            .iter()
            .find(|(x, _)| x == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    /// Lower the cap to `p` (never raises it).
    pub fn truncate(&self, p: &Q) -> Self {
        let precision = prec_min(&self.precision, &Some(p.clone()));
        let terms = self.terms.iter().filter(|(e, _)| below(e, &precision)).cloned().collect();
        Self { terms, precision }
    }

    /// Replace the cap by `p` without checking; used when the caller certifies the tail.
    pub fn with_precision(mut self, p: Prec) -> Self {
        self.terms.retain(|(e, _)| below(e, &p));
        self.precision = p;
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let precision = prec_min(&self.precision, &o.precision);
        let mut m: BTreeMap<Q, Q> = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            if below(e, &precision) {
                *m.entry(e.clone()).or_insert_with(Q::zero) += c;
            }
        }
        Self::from_map(m, precision)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Self { terms: vec![], precision: self.precision.clone() };
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
            precision: self.precision.clone(),
        }
    }

    /// Multiply by `T^e`.
    pub fn shift(&self, e: &Q) -> Self {
        Self {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            precision: prec_shift(&self.precision, e),
        }
    }

    /// Multiplication that refuses operands of indeterminate valuation.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let bad = |s: &Self| s.terms.is_empty() && s.precision.is_some();
        if bad(self) || bad(o) {
            return Err(Error::IndeterminateValuation);
        }
        Ok(self.mul(o))
    }

    /// Cauchy product; an empty finite-cap operand is treated through its lower bound.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero();
        }
        let va = self.val_lower();
        let vb = o.val_lower();
        let p1 = match (&self.precision, &vb) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let p2 = match (&o.precision, &va) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let precision = prec_min(&p1, &p2);
        let mut m: BTreeMap<Q, Q> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if below(&e, &precision) {
                    *m.entry(e).or_insert_with(Q::zero) += ca * cb;
                }
            }
        }
        Self::from_map(m, precision)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Cap to use for an infinite expansion: the element's own or the fallback.
    fn cap_or(&self, fallback: &Q) -> Q {
        self.precision.clone().unwrap_or_else(|| fallback.clone())
    }

    /// `sum_k x^k c_k` for a power series in `x` with `val(x) > 0`, computed to absolute cap `cap`.
    fn series(x: &Self, cap: &Q, coef: impl Fn(u32) -> Q) -> Self {
        let v = match x.val() {
            Some(v) => v,
            None if x.is_exact_zero() => return Self::constant(coef(0)),
            None => return Self::constant(coef(0)).with_precision(prec_min(&x.precision, &Some(cap.clone()))),
        };
        let x = x.truncate(cap);
        let mut acc = Self::constant(coef(0)).with_precision(x.precision.clone());
        let mut pw = Self::one();
        let mut k = 0u32;
        loop {
            k += 1;
            if &(&v * q(k as i64)) >= cap {
                break;
            }
            pw = pw.mul(&x).truncate(cap);
            let c = coef(k);
            if !c.is_zero() {
                acc = acc.add(&pw.scale(&c));
            }
        }
        acc.with_precision(prec_min(&x.precision, &Some(cap.clone())))
    }

    /// Inverse, expanding infinite series to `WORKING_PRECISION` when the input is exact.
    pub fn invert(&self) -> Result<Self> {
        self.invert_with(&q(WORKING_PRECISION))
    }

    pub fn invert_with(&self, cap: &Q) -> Result<Self> {
        let (v, c) = self.leading().cloned().ok_or(Error::NotInvertible)?;
        if self.terms.len() == 1 && self.precision.is_none() {
            return Ok(Self::monomial(c.recip(), -v));
        }
        // self = c T^v (1 + u)
        let u = self.shift(&-v.clone()).scale(&c.recip()).sub(&Self::one());
        let rel_cap = match &self.precision {
            Some(p) => p - &v,
            None => cap + &v,
        };
        let s = Self::series(&u, &rel_cap, |k| if k % 2 == 0 { Q::one() } else { -Q::one() });
        Ok(s.scale(&c.recip()).shift(&-v))
    }

    /// Square root of `1 + u` congruent to 1 modulo positive valuation.
    pub fn sqrt1p(u: &Self) -> Result<Self> {
        Self::sqrt1p_with(u, &q(WORKING_PRECISION))
    }

    pub fn sqrt1p_with(u: &Self, cap: &Q) -> Result<Self> {
        if let Some(v) = u.val() {
            if !v.is_positive() {
                return Err(Error::PositiveValuationRequired);
            }
        }
        let cap = u.cap_or(cap);
        Ok(Self::series(u, &cap, binom_half))
    }

    /// `exp(k)` for `val(k) > 0`.
    pub fn exp_pos(k: &Self) -> Result<Self> {
        Self::exp_pos_with(k, &q(WORKING_PRECISION))
    }

    pub fn exp_pos_with(k: &Self, cap: &Q) -> Result<Self> {
        if let Some(v) = k.val() {
            if !v.is_positive() {
                return Err(Error::PositiveValuationRequired);
            }
        }
        let cap = k.cap_or(cap);
        Ok(Self::series(k, &cap, |n| Q::one() / Q::from_integer(factorial(n))))
    }

    /// True when `self - o` has no stored term below `p`.
    pub fn eq_mod(&self, o: &Self, p: &Q) -> bool {
        self.sub(o).truncate(p).is_empty()
    }

    /// Evaluate `sum c_k T^{k e}` style substitution `T -> T^m` (exponents scaled by `m`).
    pub fn subs_power(&self, m: &Q) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e * m, c.clone())).collect(),
            precision: self.precision.as_ref().map(|p| p * m),
        }
    }

    /// Apply `c T^e -> c e T^e`.
    pub fn t_derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e.clone(), c * e)), self.precision.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "terms": self.terms.iter().map(|(e, c)| serde_json::json!([e.to_string(), c.to_string()])).collect::<Vec<_>>(),
            "precision": self.precision.as_ref().map(|p| p.to_string()),
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let err = || Error::SchemaError("bad Novikov scalar".into());
        let terms = v.get("terms").and_then(|t| t.as_array()).ok_or_else(err)?;
        let mut out = vec![];
        for t in terms {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(err)?;
            let e = parse_q(pair[0].as_str().ok_or_else(err)?)?;
            let c = parse_q(pair[1].as_str().ok_or_else(err)?)?;
            out.push((e, c));
        }
        let precision = match v.get("precision") {
            None | Some(serde_json::Value::Null) => None,
            Some(p) => Some(parse_q(p.as_str().ok_or_else(err)?)?),
        };
        Ok(Self::from_terms(out, precision))
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// Binomial coefficient `(1/2 choose k)`.
pub fn binom_half(k: u32) -> Q {
    let half = qr(1, 2);
    let mut c = Q::one();
    for i in 0..k {
        c = c * (&half - q(i as i64)) / q(i as i64 + 1);
    }
    c
}

impl fmt::Display for NovikovScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{c}*T^({e})")).collect();
        if let Some(p) = &self.precision {
            parts.push(format!("O(T^({p}))"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl std::ops::Add for &NovikovScalar {
    type Output = NovikovScalar;
    fn add(self, o: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::add(self, o)
    }
}

impl std::ops::Sub for &NovikovScalar {
    type Output = NovikovScalar;
    fn sub(self, o: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::sub(self, o)
    }
}

impl std::ops::Mul for &NovikovScalar {
    type Output = NovikovScalar;
    fn mul(self, o: &NovikovScalar) -> NovikovScalar {
        NovikovScalar::mul(self, o)
    }
}

impl std::ops::Neg for &NovikovScalar {
    type Output = NovikovScalar;
    fn neg(self) -> NovikovScalar {
        NovikovScalar::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(terms: &[(i64, i64)], p: Option<i64>) -> NovikovScalar {
        NovikovScalar::from_terms(terms.iter().map(|&(e, c)| (q(e), q(c))), p.map(q))
    }

    #[test]
    fn add_examples() {
        let a = NovikovScalar::t(1, -8);
        assert_eq!(a.add(&a), NovikovScalar::t(2, -8));
        let x = n(&[(0, 1)], Some(10));
        let y = n(&[(0, -1), (12, 1)], Some(20));
        let s = x.add(&y);
        assert!(s.is_empty());
        assert_eq!(s.precision(), &Some(q(10)));
        let z = n(&[(-8, 3), (2, 1)], None);
        assert_eq!(z.add(&NovikovScalar::zero()), z);
        assert_eq!(z.val(), Some(q(-8)));
    }

    #[test]
    fn mul_examples() {
        let a = n(&[(-8, 1)], Some(10));
        let b = n(&[(8, 1)], Some(20));
        let p = a.mul(&b);
        assert_eq!(p, n(&[(0, 1)], Some(12)));
        assert_eq!(n(&[(0, 1), (3, -1)], None).mul(&n(&[(0, 1), (3, 1)], None)), n(&[(0, 1), (6, -1)], None));
        let u = NovikovScalar::monomial(q(2), qr(1, 2)).mul(&NovikovScalar::monomial(q(3), qr(1, 3)));
        assert_eq!(u, NovikovScalar::monomial(q(6), qr(5, 6)));
        assert_eq!(NovikovScalar::big_o(q(5)).try_mul(&a), Err(Error::IndeterminateValuation));
    }

    #[test]
    fn invert_examples() {
        let a = n(&[(0, 1), (3, -1)], None);
        let b = a.invert_with(&q(30)).unwrap();
        assert_eq!(b.terms().len(), 10);
        assert!(b.terms().iter().all(|(_, c)| c == &q(1)));
        assert_eq!(NovikovScalar::t(2, -8).invert().unwrap(), NovikovScalar::monomial(qr(1, 2), q(8)));
        let c = n(&[(0, 3), (72, -9)], None);
        let ci = c.invert_with(&q(200)).unwrap();
        assert!(c.mul(&ci).eq_mod(&NovikovScalar::one(), &q(200)));
        assert_eq!(ci.coeff(&q(72)), q(1));
        assert_eq!(NovikovScalar::big_o(q(3)).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn sqrt_and_exp() {
        assert_eq!(NovikovScalar::sqrt1p(&NovikovScalar::zero()).unwrap(), NovikovScalar::one());
        let u = NovikovScalar::t(-4, 2);
        let s = NovikovScalar::sqrt1p_with(&u, &q(50)).unwrap();
        assert_eq!(s.coeff(&q(2)), q(-2));
        assert_eq!(s.coeff(&q(4)), q(-2));
        assert_eq!(s.coeff(&q(6)), q(-4));
        assert!(s.mul(&s).eq_mod(&n(&[(0, 1), (2, -4)], None), &q(50)));
        let s2 = NovikovScalar::sqrt1p_with(&NovikovScalar::t(2, 1), &q(10)).unwrap();
        assert_eq!(s2.coeff(&q(2)), qr(-1, 2));
        assert_eq!(s2.coeff(&q(3)), qr(1, 2));
        let e = NovikovScalar::exp_pos_with(&NovikovScalar::t(1, 1), &q(20)).unwrap();
        assert_eq!(e.coeff(&q(3)), qr(1, 6));
        let f = NovikovScalar::exp_pos_with(&NovikovScalar::t(-1, 1), &q(20)).unwrap();
        assert!(e.mul(&f).eq_mod(&NovikovScalar::one(), &q(20)));
        assert_eq!(NovikovScalar::exp_pos(&NovikovScalar::one()), Err(Error::PositiveValuationRequired));
    }

    #[test]
    fn json_round_trip() {
        let a = NovikovScalar::from_terms(vec![(qr(-8, 3), qr(5, 7)), (q(4), q(-2))], Some(q(30)));
        assert_eq!(NovikovScalar::from_json(&a.to_json()).unwrap(), a);
        assert_eq!(a.to_string(), "5/7*T^(-8/3) + -2*T^(4) + O(T^(30))");
    }
}
