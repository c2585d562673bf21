//! Sparse three-variable series over the Novikov field, truncated in total degree
//! and in T-adic precision.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::novikov::{prec_min, prec_shift, q, NovikovScalar, Prec, Q, WORKING_PRECISION};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(pub [u32; 3]);

impl Mono {
    pub const ONE: Mono = Mono([0, 0, 0]);

    pub fn new(i: u32, j: u32, k: u32) -> Self {
        Mono([i, j, k])
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 3];
        e[v as usize] = 1;
        Mono(e)
    }

    pub fn deg(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        Mono([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }

    pub fn divides(&self, o: &Mono) -> bool {
        (0..3).all(|i| self.0[i] <= o.0[i])
    }

    /// `o / self`, assuming divisibility.
    pub fn quotient(&self, o: &Mono) -> Mono {
        Mono([o.0[0] - self.0[0], o.0[1] - self.0[1], o.0[2] - self.0[2]])
    }

    pub fn pow_of(v: Var, n: u32) -> Mono {
        let mut e = [0; 3];
        e[v as usize] = n;
        Mono(e)
    }

    /// Apply a permutation of the variables: output slot `perm[i]` receives exponent `i`.
    pub fn permute(&self, perm: [usize; 3]) -> Mono {
        let mut e = [0; 3];
        for i in 0..3 {
            e[perm[i]] = self.0[i];
        }
        Mono(e)
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let parts: Vec<String> = (0..3)
            .filter(|&i| self.0[i] > 0)
            .map(|i| if self.0[i] == 1 { names[i].to_string() } else { format!("{}^{}", names[i], self.0[i]) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn from_index(i: usize) -> Var {
        Var::ALL[i]
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Frame {
    Standard,
    Tilde,
}

impl Frame {
    pub fn name(&self) -> &'static str {
        match self {
            Frame::Standard => "xyz",
            Frame::Tilde => "tilde",
        }
    }
}

pub const NO_DEGREE_CAP: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateSeries {
    coeffs: BTreeMap<Mono, NovikovScalar>,
    degree_cap: u32,
    t_precision: Prec,
}

impl Default for TateSeries {
    fn default() -> Self {
        Self::zero()
    }
}

impl TateSeries {
    pub fn zero() -> Self {
        Self { coeffs: BTreeMap::new(), degree_cap: NO_DEGREE_CAP, t_precision: None }
    }

    pub fn empty(degree_cap: u32, t_precision: Prec) -> Self {
        Self { coeffs: BTreeMap::new(), degree_cap, t_precision }
    }

    pub fn one() -> Self {
        Self::scalar(NovikovScalar::one())
    }

    pub fn scalar(s: NovikovScalar) -> Self {
        Self::term(Mono::ONE, s)
    }

    pub fn term(m: Mono, s: NovikovScalar) -> Self {
        let p = s.precision().clone();
        let mut out = Self::empty(NO_DEGREE_CAP, p);
        out.add_term(m, &s);
        out
    }

    /// `c T^e x^i y^j z^k` with integer data.
    pub fn mono(c: i64, e: i64, m: [u32; 3]) -> Self {
        Self::term(Mono(m), NovikovScalar::t(c, e))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Mono::var(v), NovikovScalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Mono, NovikovScalar)>>(it: I, degree_cap: u32, t_precision: Prec) -> Self {
        let mut out = Self::empty(degree_cap, t_precision);
        for (m, s) in it {
            out.add_term(m, &s);
        }
        out
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn t_precision(&self) -> &Prec {
        &self.t_precision
    }

    pub fn with_degree_cap(mut self, d: u32) -> Self {
        self.degree_cap = d;
        self.coeffs.retain(|m, _| m.deg() <= d);
        self
    }

    /// Lower the T-precision (never raises it).
    pub fn truncate(&self, p: &Q) -> Self {
        let np = prec_min(&self.t_precision, &Some(p.clone()));
        self.clone().with_precision(np)
    }

    /// Set the T-precision, trusting the caller for the dropped tail.
    pub fn with_precision(mut self, p: Prec) -> Self {
        self.t_precision = p.clone();
        let mut out = BTreeMap::new();
        for (m, s) in std::mem::take(&mut self.coeffs) {
            let s = s.with_precision(p.clone());
            if !s.is_empty() {
                out.insert(m, s);
            }
        }
        self.coeffs = out;
        self
    }

    /// Add `s * m` in place. The series precision absorbs the scalar's cap.
    pub fn add_term(&mut self, m: Mono, s: &NovikovScalar) {
        if let Some(p) = s.precision() {
            if self.t_precision.as_ref().is_none_or(|sp| p < sp) {
                let p = Some(p.clone());
                *self = std::mem::take(self).with_precision(p);
            }
        }
        if m.deg() > self.degree_cap {
            return;
        }
        let prec = self.t_precision.clone();
        let cur = self.coeffs.remove(&m).unwrap_or_else(NovikovScalar::zero);
        let next = cur.add(s).with_precision(prec);
        if !next.is_empty() {
            self.coeffs.insert(m, next);
        }
    }

    pub fn get(&self, m: &Mono) -> NovikovScalar {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| NovikovScalar::zero().with_precision(self.t_precision.clone()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &NovikovScalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn max_degree(&self) -> u32 {
        self.coeffs.keys().map(|m| m.deg()).max().unwrap_or(0)
    }

    /// Minimal coefficient valuation; `None` for the zero series.
    pub fn min_val(&self) -> Option<Q> {
        self.coeffs.values().filter_map(|s| s.val()).min()
    }

    fn val_lower(&self) -> Prec {
        match self.min_val() {
            Some(v) => Some(v),
            None => self.t_precision.clone(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = Self::empty(self.degree_cap.min(o.degree_cap), prec_min(&self.t_precision, &o.t_precision));
        for (m, s) in self.coeffs.iter().chain(o.coeffs.iter()) {
            out.add_term(*m, s);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale_q(&-Q::one())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale_q(&self, c: &Q) -> Self {
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        if c.is_zero() {
            return out;
        }
        for (m, s) in &self.coeffs {
            out.coeffs.insert(*m, s.scale(c));
        }
        out
    }

    pub fn shift(&self, e: &Q) -> Self {
        let mut out = Self::empty(self.degree_cap, prec_shift(&self.t_precision, e));
        for (m, s) in &self.coeffs {
            out.coeffs.insert(*m, s.shift(e));
        }
        out
    }

    pub fn scale(&self, c: &NovikovScalar) -> Self {
        self.mul(&Self::scalar(c.clone()))
    }

    /// Multiply every monomial by `m`.
    pub fn mul_mono(&self, m: &Mono) -> Self {
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        for (k, s) in &self.coeffs {
            let km = k.mul(m);
            if km.deg() <= out.degree_cap {
                out.coeffs.insert(km, s.clone());
            }
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let va = self.val_lower();
        let vb = o.val_lower();
        let p1 = match (&self.t_precision, &vb) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let p2 = match (&o.t_precision, &va) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let prec = prec_min(&p1, &p2);
        let cap = self.degree_cap.min(o.degree_cap);
        let mut acc: HashMap<Mono, BTreeMap<Q, Q>> = HashMap::new();
        for (ma, sa) in &self.coeffs {
            for (mb, sb) in &o.coeffs {
                let m = ma.mul(mb);
                if m.deg() > cap {
                    continue;
                }
                let slot = acc.entry(m).or_default();
                for (ea, ca) in sa.terms() {
                    for (eb, cb) in sb.terms() {
                        let e = ea + eb;
                        if prec.as_ref().is_none_or(|p| &e < p) {
                            *slot.entry(e).or_insert_with(Q::zero) += ca * cb;
                        }
                    }
                }
            }
        }
        let mut out = Self::empty(cap, prec.clone());
        for (m, t) in acc {
            let s = NovikovScalar::from_terms(t, prec.clone());
            if !s.is_empty() {
                out.coeffs.insert(m, s);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one().with_degree_cap(self.degree_cap);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn partial(&self, v: Var) -> Self {
        let i = v as usize;
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        for (m, s) in &self.coeffs {
            if m.0[i] > 0 {
                let mut e = m.0;
                e[i] -= 1;
                out.add_term(Mono(e), &s.scale(&q(m.0[i] as i64)));
            }
        }
        out
    }

    /// `v * d/dv`.
    pub fn euler(&self, v: Var) -> Self {
        let i = v as usize;
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        for (m, s) in &self.coeffs {
            out.add_term(*m, &s.scale(&q(m.0[i] as i64)));
        }
        out
    }

    /// `T d/dT`: each `c T^m` becomes `c m T^m`.
    pub fn t_derivative(&self) -> Self {
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        for (m, s) in &self.coeffs {
            out.add_term(*m, &s.t_derivative());
        }
        out
    }

    /// Shift the coefficient of each monomial by `sign * 3 * deg`.
    fn frame_shift(&self, sign: i64) -> Self {
        // a uniform cap: degree 0 for the upward shift, the largest degree for the downward one
        let dmax = if self.degree_cap == NO_DEGREE_CAP { self.max_degree() } else { self.degree_cap };
        let prec = match &self.t_precision {
            Some(p) if sign < 0 => Some(p - q(3 * dmax as i64)),
            p => p.clone(),
        };
        let mut out = Self::empty(self.degree_cap, prec);
        for (m, s) in &self.coeffs {
            out.add_term(*m, &s.shift(&q(sign * 3 * m.deg() as i64)).with_precision(None));
        }
        out
    }

    /// Rewrite `P(x,y,z)` in the variables `x = T^3 x~` etc.
    pub fn to_tilde(&self) -> Self {
        self.frame_shift(1)
    }

    pub fn from_tilde(&self) -> Self {
        self.frame_shift(-1)
    }

    /// Evaluate at a point; coordinates must have valuation at least zero.
    pub fn eval_point(&self, p: [&NovikovScalar; 3]) -> Result<NovikovScalar> {
        for c in p.iter() {
            if let Some(v) = c.val() {
                if v.is_negative() {
                    return Err(Error::DivergentSubstitution("point coordinate with negative valuation".into()));
                }
            }
        }
        let mut cache: [Vec<NovikovScalar>; 3] = [vec![NovikovScalar::one()], vec![NovikovScalar::one()], vec![NovikovScalar::one()]];
        let mut acc = NovikovScalar::zero().with_precision(self.t_precision.clone());
        for (m, s) in &self.coeffs {
            let mut t = s.clone();
            for i in 0..3 {
                while cache[i].len() <= m.0[i] as usize {
                    let nx = cache[i].last().unwrap().mul(p[i]);
                    cache[i].push(nx);
                }
                t = t.mul(&cache[i][m.0[i] as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute series for the variables.
    ///
    /// Each substituent is either `c v + u` with `c` a nonzero rational and
    /// `val(u) > 0`, or a constant of valuation at least zero.
    pub fn substitute(&self, s: [&TateSeries; 3]) -> Result<Self> {
        for (i, sub) in s.iter().enumerate() {
            check_substituent(sub, Var::from_index(i))?;
        }
        let mut cache: [Vec<TateSeries>; 3] = Default::default();
        for i in 0..3 {
            cache[i].push(Self::one().with_degree_cap(self.degree_cap));
        }
        let mut acc = Self::empty(self.degree_cap, self.t_precision.clone());
        for (m, c) in &self.coeffs {
            let mut t = Self::scalar(c.clone()).with_degree_cap(self.degree_cap);
            for i in 0..3 {
                while cache[i].len() <= m.0[i] as usize {
                    let nx = cache[i].last().unwrap().mul(s[i]).with_degree_cap(self.degree_cap);
                    cache[i].push(nx);
                }
                t = t.mul(&cache[i][m.0[i] as usize]);
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Two-sided inverse of a unit `u (1 + Q)` with `u` a scalar and `val(Q) > 0`.
    pub fn invert_unit(&self) -> Result<Self> {
        self.invert_unit_with(&q(WORKING_PRECISION))
    }

    pub fn invert_unit_with(&self, cap: &Q) -> Result<Self> {
        let u = self.coeffs.get(&Mono::ONE).ok_or(Error::NotUnit)?;
        let (v, _) = u.leading().cloned().ok_or(Error::NotUnit)?;
        let uinv = u.invert_with(&(cap + &v)).map_err(|_| Error::NotUnit)?;
        // normalized = self / u = 1 + rest
        let normalized = self.mul(&Self::scalar(uinv.clone()));
        let rest = normalized.sub(&Self::one());
        let rest = rest.with_degree_cap(self.degree_cap);
        let rel_cap = match normalized.t_precision() {
            Some(p) => p.clone(),
            None => cap + &v,
        };
        let w = match rest.min_val() {
            None => return Ok(Self::scalar(uinv).with_degree_cap(self.degree_cap)),
            Some(w) => w,
        };
        if !w.is_positive() {
            return Err(Error::NotUnit);
        }
        let rest = rest.truncate(&rel_cap);
        let mut acc = Self::one().with_degree_cap(self.degree_cap).with_precision(Some(rel_cap.clone()));
        let mut pw = Self::one().with_degree_cap(self.degree_cap);
        let mut k = 1i64;
        while &w * q(k) < rel_cap {
            pw = pw.mul(&rest).neg().truncate(&rel_cap);
            acc = acc.add(&pw);
            k += 1;
        }
        Ok(acc.mul(&Self::scalar(uinv)))
    }

    /// True when `self - o` vanishes modulo `T^p`.
    pub fn eq_mod(&self, o: &Self, p: &Q) -> bool {
        self.sub(o).truncate(p).is_zero()
    }

    /// Exact equality of stored terms, ignoring the recorded caps.
    pub fn same_terms(&self, o: &Self) -> bool {
        self.coeffs.len() == o.coeffs.len()
            && self.coeffs.iter().all(|(m, s)| o.coeffs.get(m).is_some_and(|t| t.terms() == s.terms()))
    }

    /// Apply a variable permutation (see [`Mono::permute`]).
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let mut out = Self::empty(self.degree_cap, self.t_precision.clone());
        for (m, s) in &self.coeffs {
            out.coeffs.insert(m.permute(perm), s.clone());
        }
        out
    }

    /// Part of the series whose coefficients have valuation exactly `v` (leading terms only).
    pub fn part_at_valuation(&self, v: &Q) -> Vec<(Mono, Q)> {
        self.coeffs
            .iter()
            .filter_map(|(m, s)| {
                let c = s.coeff(v);
                if c.is_zero() {
                    None
                } else {
                    Some((*m, c))
                }
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .coeffs
            .iter()
            .flat_map(|(m, s)| {
                s.terms().iter().map(move |(e, c)| {
                    serde_json::json!({"i": m.0[0], "j": m.0[1], "k": m.0[2], "t_exp": e.to_string(), "coef": c.to_string()})
                })
            })
            .collect();
        serde_json::json!({
            "terms": terms,
            "t_precision": self.t_precision.as_ref().map(|p| p.to_string()),
            "degree_cap": if self.degree_cap == NO_DEGREE_CAP { serde_json::Value::Null } else { self.degree_cap.into() },
        })
    }
}

fn check_substituent(s: &TateSeries, v: Var) -> Result<()> {
    let lin = Mono::var(v);
    // constant substituent: point evaluation
    if s.coeffs.keys().all(|m| *m == Mono::ONE) {
        return match s.min_val() {
            Some(w) if w.is_negative() => Err(Error::DivergentSubstitution("constant with negative valuation".into())),
            _ => Ok(()),
        };
    }
    let c = s.coeffs.get(&lin).ok_or_else(|| Error::DivergentSubstitution(format!("no linear term in {lin}")))?;
    let lead = c.leading().cloned().filter(|(e, _)| e.is_zero());
    if lead.is_none() {
        return Err(Error::DivergentSubstitution(format!("linear coefficient of {lin} is not a unit")));
    }
    for (m, t) in &s.coeffs {
        let mut t = t.clone();
        if *m == lin {
            t = t.sub(&NovikovScalar::constant(lead.clone().unwrap().1));
        }
        if let Some(w) = t.val() {
            if !w.is_positive() {
                return Err(Error::DivergentSubstitution(format!("tail term {m} has valuation {w}")));
            }
        }
    }
    Ok(())
}

impl fmt::Display for TateSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            write!(f, "0")?;
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(m, s)| {
                let inner: Vec<String> = s.terms().iter().map(|(e, c)| format!("{c}*T^({e})")).collect();
                format!("({})*{}", inner.join(" + "), m)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))?;
        if let Some(p) = &self.t_precision {
            write!(f, " + O(T^({p}))")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::qr;

    fn w_lead(a: u32, b: u32, c: u32) -> TateSeries {
        TateSeries::mono(-1, -8, [1, 1, 1])
            .add(&TateSeries::mono(1, 0, [a, 0, 0]))
            .add(&TateSeries::mono(1, 0, [0, b, 0]))
            .add(&TateSeries::mono(1, 0, [0, 0, c]))
    }

    #[test]
    fn partials() {
        let p = TateSeries::mono(-1, -8, [1, 1, 1]).add(&TateSeries::mono(1, 0, [3, 0, 0]));
        let d = p.partial(Var::X);
        assert_eq!(d, TateSeries::mono(-1, -8, [0, 1, 1]).add(&TateSeries::mono(3, 0, [2, 0, 0])));
        assert!(TateSeries::mono(1, 0, [3, 0, 0]).partial(Var::Y).is_zero());
        assert_eq!(TateSeries::mono(1, 0, [0, 0, 7]).partial(Var::Z), TateSeries::mono(7, 0, [0, 0, 6]));
    }

    #[test]
    fn t_derivative_examples() {
        assert_eq!(TateSeries::mono(1, -8, [1, 1, 1]).t_derivative(), TateSeries::mono(-8, -8, [1, 1, 1]));
        assert!(TateSeries::mono(1, 0, [3, 0, 0]).t_derivative().is_zero());
        assert_eq!(TateSeries::mono(5, 24, [0, 1, 0]).t_derivative(), TateSeries::mono(120, 24, [0, 1, 0]));
    }

    #[test]
    fn tilde_frame() {
        let w = w_lead(2, 3, 7);
        let t = w.to_tilde();
        assert_eq!(t.get(&Mono::new(1, 1, 1)), NovikovScalar::t(-1, 1));
        assert_eq!(t.get(&Mono::new(2, 0, 0)), NovikovScalar::t(1, 6));
        assert_eq!(t.from_tilde(), w);
        assert_eq!(TateSeries::var(Var::X).to_tilde(), TateSeries::mono(1, 3, [1, 0, 0]));
    }

    #[test]
    fn substitution() {
        let w = w_lead(3, 3, 3);
        let two_x = TateSeries::mono(2, 0, [1, 0, 0]);
        let s = w.substitute([&two_x, &TateSeries::var(Var::Y), &TateSeries::var(Var::Z)]).unwrap();
        assert_eq!(s.get(&Mono::new(1, 1, 1)), NovikovScalar::t(-2, -8));
        assert_eq!(s.get(&Mono::new(3, 0, 0)), NovikovScalar::t(8, 0));
        let p = TateSeries::mono(1, 0, [2, 0, 0]).add(&TateSeries::mono(1, 0, [0, 1, 0]));
        let v = p.eval_point([&NovikovScalar::t(1, 1), &NovikovScalar::zero(), &NovikovScalar::zero()]).unwrap();
        assert_eq!(v, NovikovScalar::t(1, 2));
        let bad = TateSeries::mono(1, 0, [1, 0, 0]).add(&TateSeries::mono(1, 0, [2, 0, 0]));
        assert!(matches!(
            p.substitute([&bad, &TateSeries::var(Var::Y), &TateSeries::var(Var::Z)]),
            Err(Error::DivergentSubstitution(_))
        ));
    }

    #[test]
    fn exp_rescaling() {
        let e = NovikovScalar::exp_pos_with(&NovikovScalar::t(1, 1), &q(20)).unwrap();
        let xe = TateSeries::term(Mono::var(Var::X), e);
        let p = TateSeries::mono(1, 0, [3, 0, 0]);
        let s = p.substitute([&xe, &TateSeries::var(Var::Y), &TateSeries::var(Var::Z)]).unwrap();
        let e3 = NovikovScalar::exp_pos_with(&NovikovScalar::t(3, 1), &q(20)).unwrap();
        assert!(s.get(&Mono::new(3, 0, 0)).eq_mod(&e3, &q(20)));
    }

    #[test]
    fn invert_units() {
        let u = TateSeries::one().add(&TateSeries::mono(-27, 24, [0, 0, 0]));
        let inv = u.invert_unit_with(&q(100)).unwrap();
        assert_eq!(inv.get(&Mono::ONE).coeff(&q(48)), q(729));
        assert_eq!(TateSeries::one().invert_unit().unwrap(), TateSeries::one());
        let v = TateSeries::mono(3, 0, [0, 0, 0]).add(&TateSeries::mono(3, 1, [1, 0, 0]));
        let vi = v.invert_unit_with(&q(30)).unwrap();
        assert_eq!(vi.get(&Mono::new(2, 0, 0)).coeff(&q(2)), qr(1, 3));
        assert!(v.mul(&vi).eq_mod(&TateSeries::one(), &q(30)));
        assert_eq!(TateSeries::var(Var::X).invert_unit(), Err(Error::NotUnit));
    }
}
