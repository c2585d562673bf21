//! Mirror potentials: the leading potential, the closed form for (3,3,3), the
//! bulk-deformed (2,2,r) family, bulk point weights, and JSON files.

use std::collections::BTreeMap;
use std::path::Path;

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::geometry::{validate_area_relations, AreaCheck, OrbifoldData};
use crate::novikov::{parse_q, q, qr, NovikovScalar, Q};
use crate::tate::{Frame, Mono, TateSeries, Var, NO_DEGREE_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Lead,
    Closed333,
    Param22r { r: u32, lambda: Q, c: Vec<Q> },
    External(String),
}

/// A potential stored in the standard frame, with its disc-area and age ledgers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSpec {
    pub orbifold: OrbifoldData,
    pub frame: Frame,
    pub series: TateSeries,
    /// Explicit area multiples keyed by standard-frame `(monomial, exponent)`.
    pub area_ledger: BTreeMap<(Mono, Q), Q>,
    /// Interior insertion ages per monomial (bulk terms).
    pub ages: BTreeMap<Mono, Vec<Q>>,
    pub provenance: Provenance,
}

/// Leading data of `T^8 W = -xi xyz + T^8 (k1 x^a + k2 y^b + k3 z^c) + W_+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadData {
    /// Unit of valuation zero (all xyz terms of `T^8 W` up to `T^8`).
    pub xi: NovikovScalar,
    pub kappa: [Q; 3],
    /// Valuation of `W_+`; `None` when `W_+ = 0`.
    pub lambda0: Option<Q>,
}

pub fn default_degree_cap(o: &OrbifoldData) -> u32 {
    o.a.max(o.b).max(o.c) + 6
}

fn pure(v: usize, n: u32) -> Mono {
    Mono::pow_of(Var::from_index(v), n)
}

const XYZ: Mono = Mono([1, 1, 1]);

pub fn w_lead(o: &OrbifoldData) -> PotentialSpec {
    let cap = default_degree_cap(o);
    let mut s = TateSeries::empty(cap, None);
    let mut ledger = BTreeMap::new();
    s.add_term(XYZ, &NovikovScalar::t(-1, -8));
    ledger.insert((XYZ, q(-8)), q(1));
    for (v, n) in o.orders().into_iter().enumerate() {
        s.add_term(pure(v, n), &NovikovScalar::one());
        ledger.insert((pure(v, n), q(0)), q(3 * n as i64));
    }
    PotentialSpec {
        orbifold: o.clone(),
        frame: Frame::Standard,
        series: s,
        area_ledger: ledger,
        ages: BTreeMap::new(),
        provenance: Provenance::Lead,
    }
}

/// `phi(T) = sum (-1)^k (2k+1) T^{36k^2+36k}` truncated below `n`.
pub fn phi_333(n: &Q) -> NovikovScalar {
    let mut terms = vec![];
    let mut k = 0i64;
    while &q(36 * k * k + 36 * k) < n {
        terms.push((q(36 * k * k + 36 * k), q(sign(k) * (2 * k + 1))));
        k += 1;
    }
    NovikovScalar::from_terms(terms, Some(n.clone()))
}

/// `psi(T) = T^{-8}(1 + sum_{k>=1} (-1)^k ((6k+1) T^{36k^2+12k} - (6k-1) T^{36k^2-12k}))` truncated below `n`.
pub fn psi_333(n: &Q) -> NovikovScalar {
    let mut terms = vec![(q(-8), q(1))];
    let mut k = 1i64;
    while &q(36 * k * k - 12 * k - 8) < n {
        terms.push((q(36 * k * k + 12 * k - 8), q(sign(k) * (6 * k + 1))));
        terms.push((q(36 * k * k - 12 * k - 8), q(-sign(k) * (6 * k - 1))));
        k += 1;
    }
    NovikovScalar::from_terms(terms, Some(n.clone()))
}

fn sign(k: i64) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn w_333(precision: &Q) -> Result<PotentialSpec> {
    if !precision.is_positive() {
        return Err(Error::Config("precision must be positive".into()));
    }
    let o = OrbifoldData::new(3, 3, 3)?;
    let phi = phi_333(precision);
    let psi = psi_333(precision);
    let mut s = TateSeries::empty(default_degree_cap(&o), Some(precision.clone()));
    for v in 0..3 {
        s.add_term(pure(v, 3), &phi);
    }
    s.add_term(XYZ, &psi.neg());
    let mut ledger = BTreeMap::new();
    for (m, c) in s.iter() {
        for (e, _) in c.terms() {
            ledger.insert((*m, e.clone()), e + q(3 * m.deg() as i64));
        }
    }
    Ok(PotentialSpec {
        orbifold: o,
        frame: Frame::Standard,
        series: s,
        area_ledger: ledger,
        ages: BTreeMap::new(),
        provenance: Provenance::Closed333,
    })
}

/// Upper bound `min(3, (3r-5)/2)` for the bulk exponent.
pub fn lambda_bound(r: u32) -> Q {
    let b = qr(3 * r as i64 - 5, 2);
    if b < q(3) {
        b
    } else {
        q(3)
    }
}

pub fn w_22r(r: u32, lambda: &Q, c: &[Q]) -> Result<PotentialSpec> {
    if r < 2 {
        return Err(Error::Config(format!("r must be at least 2, got {r}")));
    }
    if !lambda.is_positive() || lambda >= &lambda_bound(r) {
        return Err(Error::InvalidLambda(format!("need 0 < lambda < {}, got {lambda}", lambda_bound(r))));
    }
    let half = (r / 2) as usize;
    if c.len() != half {
        return Err(Error::Config(format!("expected {half} coefficients c_k, got {}", c.len())));
    }
    if c.iter().any(|x| x.is_zero()) {
        return Err(Error::Config("coefficients c_k must be nonzero".into()));
    }
    let o = OrbifoldData::new(2, 2, r)?;
    let mut s = TateSeries::empty(default_degree_cap(&o), None);
    let mut ledger = BTreeMap::new();
    s.add_term(XYZ, &NovikovScalar::t(-1, -8));
    ledger.insert((XYZ, q(-8)), q(1));
    for (v, n) in o.orders().into_iter().enumerate() {
        s.add_term(pure(v, n), &NovikovScalar::one());
        ledger.insert((pure(v, n), q(0)), q(3 * n as i64));
    }
    for (k, ck) in c.iter().enumerate() {
        let k = k as u32 + 1;
        let m = pure(2, r - 2 * k);
        let e = q(16 * k as i64);
        s.add_term(m, &NovikovScalar::monomial(ck.clone(), e.clone()));
        ledger.insert((m, e), q(16 * k as i64 + 3 * (r - 2 * k) as i64));
    }
    let mut ages = BTreeMap::new();
    for v in [Var::X, Var::Y] {
        let m = Mono::var(v);
        s.add_term(m, &NovikovScalar::monomial(q(1), lambda.clone()));
        // the basic one-corner disc through the bulk insertion: zero area exponent
        ledger.insert((m, lambda.clone()), q(3));
        ages.insert(m, vec![qr(1, 2)]);
    }
    Ok(PotentialSpec {
        orbifold: o,
        frame: Frame::Standard,
        series: s,
        area_ledger: ledger,
        ages,
        provenance: Provenance::Param22r { r, lambda: lambda.clone(), c: c.to_vec() },
    })
}

impl PotentialSpec {
    /// Area multiple of a stored term.
    pub fn area_of(&self, m: &Mono, e: &Q) -> Option<Q> {
        self.area_ledger.get(&(*m, e.clone())).cloned()
    }

    pub fn has_complete_ledger(&self) -> bool {
        self.series.iter().all(|(m, s)| s.terms().iter().all(|(e, _)| self.area_ledger.contains_key(&(*m, e.clone()))))
    }

    /// The series in the requested frame.
    pub fn in_frame(&self, f: Frame) -> TateSeries {
        match f {
            Frame::Standard => self.series.clone(),
            Frame::Tilde => self.series.to_tilde(),
        }
    }

    /// Drop terms carrying interior insertions.
    pub fn tau_zero_part(&self) -> TateSeries {
        let mut out = TateSeries::empty(self.series.degree_cap(), self.series.t_precision().clone());
        for (m, s) in self.series.iter() {
            if self.ages.contains_key(m) {
                let kept: Vec<(Q, Q)> =
                    s.terms().iter().filter(|(e, _)| self.area_of(m, e).is_none_or(|a| a == e + q(3 * m.deg() as i64))).cloned().collect();
                out.add_term(*m, &NovikovScalar::from_terms(kept, s.precision().clone()));
            } else {
                out.add_term(*m, s);
            }
        }
        out
    }

    /// Multiply each term of area `m` by `t^m`.
    pub fn bulk_point_deform(&self, t: &Q) -> Result<PotentialSpec> {
        if t.is_zero() {
            return Err(Error::Config("bulk weight must be a unit".into()));
        }
        let mut s = TateSeries::empty(self.series.degree_cap(), self.series.t_precision().clone());
        for (m, c) in self.series.iter() {
            for (e, x) in c.terms() {
                let area = self.area_of(m, e).ok_or_else(|| Error::MissingAreaLedger(format!("{m} at T^{e}")))?;
                let w = pow_q(t, &area)?;
                s.add_term(*m, &NovikovScalar::monomial(x * w, e.clone()));
            }
        }
        let mut out = self.clone();
        out.series = s;
        Ok(out)
    }

    pub fn lead_data(&self) -> Result<LeadData> {
        let o = &self.orbifold;
        let t8 = self.series.shift(&q(8));
        let cxyz = t8.get(&XYZ);
        match cxyz.leading() {
            Some((e, _)) if e.is_zero() => {}
            Some((e, _)) => {
                return Err(Error::LeadingTermMismatch(format!("xyz has valuation {} (expected -8)", e - q(8))));
            }
            None => return Err(Error::LeadingTermMismatch("xyz is missing".into())),
        }
        // the unit xi keeps every xyz term of T^8 W up to T^8, so that W_+ starts above 8
        let xi = NovikovScalar::from_terms(cxyz.terms().iter().filter(|(e, _)| e <= &q(8)).cloned(), None).neg();
        let mut kappa = [Q::zero(), Q::zero(), Q::zero()];
        for (v, n) in o.orders().into_iter().enumerate() {
            let m = pure(v, n);
            kappa[v] = match t8.get(&m).leading() {
                Some((e, x)) if e == &q(8) => x.clone(),
                Some((e, _)) => {
                    return Err(Error::LeadingTermMismatch(format!("{m} has valuation {} (expected 0)", e - q(8))))
                }
                None => return Err(Error::LeadingTermMismatch(format!("{m} is missing"))),
            };
        }
        let wplus = t8.sub(&leading_series(o, &xi, &kappa));
        let lambda0 = wplus.min_val();
        if let Some(l) = &lambda0 {
            if l <= &q(8) {
                return Err(Error::LeadingTermMismatch(format!("higher part has valuation {l}, need > 8")));
            }
        }
        Ok(LeadData { xi, kappa, lambda0 })
    }

    /// `T^8 W - W_lead`, without degree cap.
    pub fn higher_part(&self, lead: &LeadData) -> TateSeries {
        self.series
            .clone()
            .with_degree_cap(NO_DEGREE_CAP)
            .shift(&q(8))
            .sub(&leading_series(&self.orbifold, &lead.xi, &lead.kappa))
    }

    /// True when `T^8 W` is quasi-homogeneous for the weights `wt(T) = chi/8`, `wt(v) = 1/a_v`.
    pub fn is_graded(&self) -> bool {
        let o = &self.orbifold;
        let mut seen: Option<Q> = None;
        for (m, s) in self.series.iter() {
            for (e, _) in s.terms() {
                let w = &o.chi * e / q(8) + o.corner_weight(&m.0);
                match &seen {
                    None => seen = Some(w),
                    Some(x) if x != &w => return false,
                    _ => {}
                }
            }
        }
        true
    }

    pub fn area_checks(&self) -> Vec<AreaCheck> {
        validate_area_relations(&self.series, Frame::Standard, &self.orbifold, &self.area_ledger, &self.ages)
    }

    pub fn energy_report(&self) -> EnergyReport {
        let mut min_term = None;
        let mut val0 = vec![];
        for (m, s) in self.series.iter() {
            for (e, _) in s.terms() {
                if min_term.as_ref().is_none_or(|(_, me): &(Mono, Q)| e < me) {
                    min_term = Some((*m, e.clone()));
                }
                if e.is_zero() {
                    val0.push(*m);
                }
            }
        }
        let negative: Vec<(Mono, Q)> = self
            .series
            .iter()
            .flat_map(|(m, s)| s.terms().iter().filter(|(e, _)| e.is_negative() && *m != XYZ).map(move |(e, _)| (*m, e.clone())))
            .collect();
        let basic: Vec<Mono> = self.orbifold.orders().into_iter().enumerate().map(|(v, n)| pure(v, n)).collect();
        let mut v0 = val0.clone();
        v0.sort();
        let mut b = basic.clone();
        b.sort();
        let violations: Vec<AreaCheck> = self.area_checks().into_iter().filter(|c| !c.pass).collect();
        let min_ok = min_term.as_ref().is_some_and(|(m, e)| *m == XYZ && e == &q(-8));
        EnergyReport {
            min_term,
            min_term_ok: min_ok,
            valuation_zero: v0.clone(),
            valuation_zero_ok: v0 == b && negative.is_empty(),
            area_violations: violations,
        }
    }

    /// Tilde-frame Euler residual `(chi/8) T d/dT W - W - sum_v (3chi/8 - 1/v) v d/dv W`
    /// on the part without interior insertions; zero exactly when the area relation holds termwise.
    pub fn euler_residual(&self) -> TateSeries {
        self.euler_residual_with(&q(3))
    }

    /// Same with the coefficient `(s chi/8 - 1/v)`.
    pub fn euler_residual_with(&self, s: &Q) -> TateSeries {
        let o = &self.orbifold;
        let w = self.tau_zero_part().to_tilde();
        let chi8 = &o.chi / q(8);
        let mut r = w.t_derivative().scale_q(&chi8).sub(&w);
        for (v, n) in o.orders().into_iter().enumerate() {
            let coef = s * &chi8 - Q::new(1.into(), n.into());
            r = r.sub(&w.euler(Var::from_index(v)).scale_q(&coef));
        }
        r
    }

    pub fn to_json(&self) -> Value {
        let s = self.in_frame(self.frame);
        let mut terms = vec![];
        for (m, c) in s.iter() {
            for (e, x) in c.terms() {
                let std_e = match self.frame {
                    Frame::Standard => e.clone(),
                    Frame::Tilde => e - q(3 * m.deg() as i64),
                };
                let mut t = json!({"i": m.0[0], "j": m.0[1], "k": m.0[2], "t_exp": e.to_string(), "coef": x.to_string()});
                if let Some(a) = self.area_of(m, &std_e) {
                    t["area"] = json!(a.to_string());
                }
                if let Some(ag) = self.ages.get(m) {
                    t["ages"] = json!(ag.iter().map(|a| a.to_string()).collect::<Vec<_>>());
                }
                terms.push(t);
            }
        }
        json!({
            "schema": 1,
            "abc": [self.orbifold.a, self.orbifold.b, self.orbifold.c],
            "frame": self.frame.name(),
            "terms": terms,
            "t_precision": self.series.t_precision().as_ref().map(|p| p.to_string()),
            "degree_cap": self.series.degree_cap(),
        })
    }

    pub fn from_json(v: &Value, source: &str) -> Result<PotentialSpec> {
        let bad = |w: &str| Error::SchemaError(w.to_string());
        let abc = v.get("abc").and_then(|a| a.as_array()).filter(|a| a.len() == 3).ok_or_else(|| bad("abc must be a triple"))?;
        let mut n = [0u32; 3];
        for i in 0..3 {
            n[i] = abc[i].as_u64().ok_or_else(|| bad("abc entries must be integers"))? as u32;
        }
        let o = OrbifoldData::new(n[0], n[1], n[2]).map_err(|e| bad(&e.to_string()))?;
        let frame = match v.get("frame").and_then(|f| f.as_str()) {
            Some("xyz") => Frame::Standard,
            Some("tilde") => Frame::Tilde,
            _ => return Err(bad("frame must be \"xyz\" or \"tilde\"")),
        };
        let prec = match v.get("t_precision") {
            None | Some(Value::Null) => None,
            Some(p) => Some(parse_q(p.as_str().ok_or_else(|| bad("t_precision must be a string"))?)?),
        };
        let cap = match v.get("degree_cap") {
            None | Some(Value::Null) => NO_DEGREE_CAP,
            Some(d) => d.as_u64().ok_or_else(|| bad("degree_cap must be an integer"))? as u32,
        };
        let terms = v.get("terms").and_then(|t| t.as_array()).ok_or_else(|| bad("terms must be a list"))?;
        let mut s = TateSeries::empty(cap, prec.clone());
        let mut ledger = BTreeMap::new();
        let mut ages = BTreeMap::new();
        for t in terms {
            let g = |k: &str| t.get(k).and_then(|x| x.as_u64()).map(|x| x as u32).ok_or_else(|| bad(&format!("term field {k} missing")));
            let m = Mono::new(g("i")?, g("j")?, g("k")?);
            let e = parse_q(t.get("t_exp").and_then(|x| x.as_str()).ok_or_else(|| bad("t_exp missing"))?)?;
            let c = parse_q(t.get("coef").and_then(|x| x.as_str()).ok_or_else(|| bad("coef missing"))?)?;
            let std_e = match frame {
                Frame::Standard => e.clone(),
                Frame::Tilde => &e - q(3 * m.deg() as i64),
            };
            s.add_term(m, &NovikovScalar::monomial(c, e.clone()));
            if let Some(a) = t.get("area") {
                let a = match a {
                    Value::String(x) => parse_q(x)?,
                    Value::Number(x) => q(x.as_i64().ok_or_else(|| bad("area must be an integer"))?),
                    _ => return Err(bad("area must be an integer")),
                };
                ledger.insert((m, std_e), a);
            }
            if let Some(ag) = t.get("ages").and_then(|x| x.as_array()) {
                let list: Result<Vec<Q>> = ag.iter().map(|a| parse_q(a.as_str().unwrap_or(""))).collect();
                ages.insert(m, list?);
            }
        }
        let series = match frame {
            Frame::Tilde => s.from_tilde(),
            Frame::Standard => s,
        };
        let spec = PotentialSpec {
            orbifold: o,
            frame,
            series,
            area_ledger: ledger,
            ages,
            provenance: Provenance::External(source.to_string()),
        };
        spec.lead_data()?;
        if !spec.area_ledger.is_empty() {
            if let Some(c) = spec.area_checks().into_iter().find(|c| !c.pass) {
                return Err(Error::AreaRelationViolation(format!("{} at T^{}", c.mono, c.t_exp)));
            }
        }
        Ok(spec)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).map_err(|e| Error::SchemaError(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<PotentialSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| Error::SchemaError(e.to_string()))?;
        Self::from_json(&v, &path.display().to_string())
    }
}

/// `-xi xyz + T^8 (k1 x^a + k2 y^b + k3 z^c)`.
pub fn leading_series(o: &OrbifoldData, xi: &NovikovScalar, kappa: &[Q; 3]) -> TateSeries {
    let mut s = TateSeries::empty(NO_DEGREE_CAP, None);
    s.add_term(XYZ, &xi.neg());
    for (v, n) in o.orders().into_iter().enumerate() {
        s.add_term(pure(v, n), &NovikovScalar::monomial(kappa[v].clone(), q(8)));
    }
    s
}

/// `t^m` for rational `t` and integer `m`.
fn pow_q(t: &Q, m: &Q) -> Result<Q> {
    if !m.is_integer() {
        return Err(Error::Config(format!("area {m} is not an integer")));
    }
    let e: i64 = num::ToPrimitive::to_i64(&m.to_integer()).ok_or_else(|| Error::Config("area too large".into()))?;
    let base = if e < 0 { t.recip() } else { t.clone() };
    Ok((0..e.unsigned_abs()).fold(Q::one(), |acc, _| acc * &base))
}

#[derive(Clone, Debug)]
pub struct EnergyReport {
    pub min_term: Option<(Mono, Q)>,
    pub min_term_ok: bool,
    pub valuation_zero: Vec<Mono>,
    pub valuation_zero_ok: bool,
    pub area_violations: Vec<AreaCheck>,
}

impl EnergyReport {
    pub fn pass(&self) -> bool {
        self.min_term_ok && self.valuation_zero_ok && self.area_violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "min_term": self.min_term.as_ref().map(|(m, e)| json!({"monomial": m.to_string(), "t_exp": e.to_string()})),
            "min_term_ok": self.min_term_ok,
            "valuation_zero": self.valuation_zero.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "valuation_zero_ok": self.valuation_zero_ok,
            "area_violations": self.area_violations.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lead_examples() {
        let o = OrbifoldData::new(3, 3, 3).unwrap();
        let w = w_lead(&o);
        assert_eq!(w.series.get(&XYZ), NovikovScalar::t(-1, -8));
        assert_eq!(w.series.len(), 4);
        let t = w.in_frame(Frame::Tilde);
        assert_eq!(t.get(&XYZ), NovikovScalar::t(-1, 1));
        assert_eq!(t.get(&Mono::new(3, 0, 0)), NovikovScalar::t(1, 9));
        let ld = w.lead_data().unwrap();
        assert_eq!(ld.lambda0, None);
    }

    #[test]
    fn closed_333() {
        let n = q(300);
        let phi = phi_333(&n);
        assert_eq!(phi.terms()[..3].to_vec(), vec![(q(0), q(1)), (q(72), q(-3)), (q(216), q(5))]);
        let psi = psi_333(&n);
        let first: Vec<(Q, Q)> = psi.terms()[..5].to_vec();
        assert_eq!(first, vec![(q(-8), q(1)), (q(16), q(5)), (q(40), q(-7)), (q(112), q(-11)), (q(160), q(13))]);
        let w = w_333(&n).unwrap();
        let ld = w.lead_data().unwrap();
        assert_eq!(ld.xi, NovikovScalar::one());
        assert_eq!(ld.lambda0, Some(q(24)));
        assert!(w.energy_report().pass());
    }

    #[test]
    fn family_22r() {
        let w = w_22r(3, &q(1), &[q(1)]).unwrap();
        assert_eq!(w.series.get(&Mono::new(0, 0, 1)), NovikovScalar::t(1, 16));
        assert_eq!(w.series.get(&Mono::new(1, 0, 0)), NovikovScalar::t(1, 1));
        assert!(matches!(w_22r(3, &q(0), &[q(1)]), Err(Error::InvalidLambda(_))));
        assert!(w.area_checks().iter().all(|c| c.pass));
        assert!(w.energy_report().pass());
        assert!(w.euler_residual().is_zero());
    }

    #[test]
    fn bulk_weights() {
        let o = OrbifoldData::new(2, 3, 7).unwrap();
        let w = w_lead(&o);
        assert_eq!(w.bulk_point_deform(&q(1)).unwrap(), w);
        let d = w.bulk_point_deform(&q(2)).unwrap();
        assert_eq!(d.series.get(&XYZ), NovikovScalar::t(-2, -8));
        assert_eq!(d.series.get(&Mono::new(2, 0, 0)), NovikovScalar::t(64, 0));
        let dd = d.bulk_point_deform(&qr(1, 3)).unwrap();
        assert_eq!(dd, w.bulk_point_deform(&qr(2, 3)).unwrap());
        let mut broken = w.clone();
        broken.area_ledger.clear();
        assert!(matches!(broken.bulk_point_deform(&q(2)), Err(Error::MissingAreaLedger(_))));
    }

    #[test]
    fn euler_identity() {
        let o = OrbifoldData::new(2, 3, 7).unwrap();
        assert!(w_lead(&o).euler_residual().is_zero());
        assert!(!w_lead(&o).euler_residual_with(&q(1)).is_zero());
        assert!(w_333(&q(300)).unwrap().euler_residual().is_zero());
    }

    #[test]
    fn json_round_trip() {
        let w = w_333(&q(120)).unwrap();
        let back = PotentialSpec::from_json(&w.to_json(), "mem").unwrap();
        assert_eq!(back.series, w.series);
        let mut v = w_lead(&OrbifoldData::new(2, 3, 7).unwrap()).to_json();
        let back = PotentialSpec::from_json(&v, "mem").unwrap();
        assert_eq!(back.series.len(), 4);
        for t in v["terms"].as_array_mut().unwrap() {
            if t["i"] == 1 && t["j"] == 1 {
                t["t_exp"] = json!("-7");
                t.as_object_mut().unwrap().remove("area");
            }
        }
        assert!(matches!(PotentialSpec::from_json(&v, "mem"), Err(Error::LeadingTermMismatch(_))));
    }
}
