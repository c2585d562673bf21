//! Coordinate changes and flows of vector fields with positive-valuation coefficients.
//!
//! Orientation: `apply(f, P) = P(f(x))`, so
//! `apply(compose(f, g), P) = apply(g, apply(f, P))` with `compose(f, g) = f o g`.

use num::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::novikov::{prec_min, q, NovikovScalar, Prec, Q};
use crate::tate::{Mono, TateSeries, Var, NO_DEGREE_CAP};

/// `x' = c_x x + u_x` and the same for `y`, `z`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordinateChange {
    pub c: [Q; 3],
    pub u: [TateSeries; 3],
}

fn positive_tail(u: &TateSeries) -> bool {
    u.min_val().is_none_or(|v| v.is_positive())
}

impl CoordinateChange {
    pub fn new(c: [Q; 3], u: [TateSeries; 3]) -> Result<Self> {
        if c.iter().any(|x| x.is_zero()) {
            return Err(Error::HypothesisViolated("linear coefficient must be nonzero".into()));
        }
        if !u.iter().all(positive_tail) {
            return Err(Error::PositiveValuationRequired);
        }
        Ok(Self { c, u: u.map(|t| t.with_degree_cap(NO_DEGREE_CAP)) })
    }

    pub fn identity() -> Self {
        Self { c: [Q::one(), Q::one(), Q::one()], u: Default::default() }
    }

    /// `v -> exp(k_v) v` for scalars of positive valuation.
    pub fn exp_rescaling(k: [&NovikovScalar; 3], cap: &Q) -> Result<Self> {
        let mut u: [TateSeries; 3] = Default::default();
        for (i, kv) in k.iter().enumerate() {
            let e = NovikovScalar::exp_pos_with(kv, cap)?.sub(&NovikovScalar::one());
            u[i] = TateSeries::term(Mono::var(Var::from_index(i)), e);
        }
        Self::new([Q::one(), Q::one(), Q::one()], u)
    }

    /// The three substituents `c_v v + u_v`.
    pub fn components(&self) -> [TateSeries; 3] {
        [0, 1, 2].map(|i| {
            let mut s = self.u[i].clone();
            s.add_term(Mono::var(Var::from_index(i)), &NovikovScalar::constant(self.c[i].clone()));
            s
        })
    }

    fn from_components(comp: [TateSeries; 3]) -> Result<Self> {
        let mut c: [Q; 3] = Default::default();
        let mut u: [TateSeries; 3] = Default::default();
        for i in 0..3 {
            let m = Mono::var(Var::from_index(i));
            let lin = comp[i].get(&m);
            c[i] = lin.coeff(&Q::zero());
            let mut t = comp[i].clone();
            t.add_term(m, &NovikovScalar::constant(-c[i].clone()));
            u[i] = t;
        }
        Self::new(c, u)
    }

    /// Minimal valuation over the tails; `None` when all tails vanish.
    pub fn tail_valuation(&self) -> Option<Q> {
        self.u.iter().filter_map(|t| t.min_val()).min()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "c": self.c.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "u": self.u.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        })
    }
}

/// `P(c_x x + u_x, c_y y + u_y, c_z z + u_z)`.
pub fn apply(cc: &CoordinateChange, p: &TateSeries) -> Result<TateSeries> {
    let comp = cc.components();
    p.substitute([&comp[0], &comp[1], &comp[2]])
}

/// `f o g`.
pub fn compose(f: &CoordinateChange, g: &CoordinateChange) -> Result<CoordinateChange> {
    let inner = g.components();
    let comp = f.components();
    let mut out: [TateSeries; 3] = Default::default();
    for i in 0..3 {
        out[i] = comp[i].substitute([&inner[0], &inner[1], &inner[2]])?;
    }
    CoordinateChange::from_components(out)
}

/// Fixed-point inverse `g_v = (v - u_v(g)) / c_v`, exact below `T^cap`.
pub fn invert(f: &CoordinateChange, cap: &Q) -> Result<CoordinateChange> {
    let inv_c = f.c.clone().map(|c| c.recip());
    let base = [0, 1, 2].map(|i| TateSeries::term(Mono::var(Var::from_index(i)), NovikovScalar::constant(inv_c[i].clone())));
    let mut g = base.clone();
    let eps = match f.tail_valuation() {
        None => return CoordinateChange::from_components(base),
        Some(e) => e,
    };
    let mut k = 0i64;
    loop {
        k += 1;
        let mut next: [TateSeries; 3] = Default::default();
        for i in 0..3 {
            let ui = f.u[i].substitute([&g[0], &g[1], &g[2]])?.truncate(cap);
            next[i] = base[i].sub(&ui.scale_q(&inv_c[i])).with_precision(None);
        }
        let done = (0..3).all(|i| next[i].same_terms(&g[i])) || &eps * q(k) >= *cap;
        g = next;
        if done {
            break;
        }
    }
    CoordinateChange::from_components(g)
}

/// A polynomial in the flow parameter `s` with Tate-series coefficients.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SSeries(pub Vec<TateSeries>);

impl SSeries {
    pub fn constant(t: TateSeries) -> Self {
        Self(vec![t.with_degree_cap(NO_DEGREE_CAP)])
    }

    pub fn var(v: Var) -> Self {
        Self::constant(TateSeries::var(v))
    }

    pub fn coeff(&self, k: usize) -> TateSeries {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn s_degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|t| t.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self((0..n).map(|k| self.coeff(k).add(&o.coeff(k))).collect()).trimmed()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|t| t.neg()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self, cap: &Q) -> Self {
        if self.0.is_empty() || o.0.is_empty() {
            return Self::default();
        }
        let mut out = vec![TateSeries::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                for (m, c) in a.mul(b).truncate(cap).iter() {
                    out[i + j].add_term(*m, c);
                }
            }
        }
        Self(out).trimmed()
    }

    pub fn truncate(&self, cap: &Q) -> Self {
        Self(self.0.iter().map(|t| t.truncate(cap)).collect()).trimmed()
    }

    /// `int_0^s`.
    pub fn integrate(&self) -> Self {
        let mut out = vec![TateSeries::zero()];
        for (k, t) in self.0.iter().enumerate() {
            out.push(t.scale_q(&Q::new(1.into(), (k as i64 + 1).into())));
        }
        Self(out).trimmed()
    }

    pub fn derivative(&self) -> Self {
        Self(self.0.iter().enumerate().skip(1).map(|(k, t)| t.scale_q(&q(k as i64))).collect()).trimmed()
    }

    pub fn partial(&self, v: Var) -> Self {
        Self(self.0.iter().map(|t| t.partial(v)).collect()).trimmed()
    }

    /// Specialize `s = t`.
    pub fn at(&self, t: &Q) -> TateSeries {
        let mut acc = TateSeries::zero();
        let mut pw = Q::one();
        for c in &self.0 {
            acc = acc.add(&c.scale_q(&pw));
            pw *= t;
        }
        acc
    }

    /// Least certified valuation over all `s`-coefficients; `None` is +infinity.
    pub fn val_lower(&self) -> Prec {
        self.0.iter().map(|t| t.min_val().or_else(|| t.t_precision().clone())).fold(None, |a, b| prec_min(&a, &b))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|t| t.is_zero())
    }

    /// `self(s, phi_s(x))` truncated at `cap`.
    pub fn compose(&self, phi: &[SSeries; 3], cap: &Q) -> Self {
        let mut pows: [Vec<SSeries>; 3] = Default::default();
        for i in 0..3 {
            pows[i].push(Self::constant(TateSeries::one()));
        }
        let mut acc = Self::default();
        for (k, c) in self.0.iter().enumerate() {
            let mut sk = vec![TateSeries::zero(); k];
            sk.push(TateSeries::one());
            let sk = Self(sk);
            for (m, coef) in c.iter() {
                let mut t = Self::constant(TateSeries::scalar(coef.clone())).mul(&sk, cap);
                for i in 0..3 {
                    while pows[i].len() <= m.0[i] as usize {
                        let nx = pows[i].last().unwrap().mul(&phi[i], cap);
                        pows[i].push(nx);
                    }
                    if m.0[i] > 0 {
                        t = t.mul(&pows[i][m.0[i] as usize], cap);
                    }
                }
                acc = acc.add(&t);
            }
        }
        acc.truncate(cap)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(|t| t.to_json()).collect())
    }
}

/// `X = sum_v A_v d/dv` with `s`-polynomial coefficients of valuation at least `eps`.
#[derive(Clone, Debug)]
pub struct VectorFieldS {
    pub a: [SSeries; 3],
    pub eps: Q,
}

impl VectorFieldS {
    /// Certify `eps` as the least coefficient valuation; it must be positive.
    pub fn new(a: [SSeries; 3]) -> Result<Self> {
        let eps = a.iter().map(|c| c.val_lower()).fold(None, |x, y| prec_min(&x, &y));
        match eps {
            Some(e) if e.is_positive() => Ok(Self { a, eps: e }),
            Some(e) => Err(Error::HypothesisViolated(format!("field has coefficient valuation {e}, need > 0"))),
            None => Ok(Self { a, eps: Q::one() }),
        }
    }

    /// `X . G = sum_v A_v dG/dv`.
    pub fn act(&self, g: &SSeries, cap: &Q) -> SSeries {
        Var::ALL.iter().enumerate().fold(SSeries::default(), |acc, (i, v)| acc.add(&self.a[i].mul(&g.partial(*v), cap)))
    }
}

#[derive(Clone, Debug)]
pub struct Flow {
    pub phi: [SSeries; 3],
    pub eps: Q,
    pub precision: Q,
    /// `(k, val(Phi^k - Phi^(k-1)))` for every iterate.
    pub contraction: Vec<(usize, Prec)>,
    pub integral_equation_holds: bool,
    pub ode_holds: bool,
}

impl Flow {
    pub fn contraction_ok(&self) -> bool {
        self.contraction.iter().all(|(k, v)| v.as_ref().is_none_or(|v| v >= &(&self.eps * q(*k as i64))))
    }

    /// The coordinate change `Phi_t`.
    pub fn at(&self, t: &Q) -> Result<CoordinateChange> {
        CoordinateChange::from_components(self.phi.clone().map(|p| p.at(t)))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "eps": self.eps.to_string(),
            "precision": self.precision.to_string(),
            "iterations": self.contraction.len(),
            "contraction": self.contraction.iter().map(|(k, v)| json!({"k": k, "val": v.as_ref().map_or("inf".to_string(), |v| v.to_string()), "bound": (&self.eps * q(*k as i64)).to_string()})).collect::<Vec<_>>(),
            "contraction_ok": self.contraction_ok(),
            "integral_equation_holds": self.integral_equation_holds,
            "ode_holds": self.ode_holds,
            "phi": self.phi.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
        })
    }
}

fn identity_family() -> [SSeries; 3] {
    Var::ALL.map(SSeries::var)
}

/// Picard iteration `Phi^(k+1) = id + int_0^s A(u, Phi^k_u) du` until `k eps >= precision`.
pub fn picard_flow(x: &VectorFieldS, precision: &Q) -> Flow {
    let cap = precision + &x.eps;
    let id = identity_family();
    let step = |phi: &[SSeries; 3]| -> [SSeries; 3] { [0, 1, 2].map(|i| id[i].add(&x.a[i].compose(phi, &cap).integrate()).truncate(&cap)) };
    let mut phi = id.clone();
    let mut contraction = vec![];
    let mut k = 0usize;
    loop {
        k += 1;
        let next = step(&phi);
        let diff = (0..3).map(|i| next[i].sub(&phi[i]).val_lower()).fold(None, |a, b| prec_min(&a, &b));
        contraction.push((k, diff.clone()));
        phi = next;
        if diff.is_none() || &x.eps * q(k as i64) >= *precision {
            break;
        }
    }
    let next = step(&phi);
    let integral_equation_holds = (0..3).all(|i| next[i].sub(&phi[i]).truncate(precision).is_zero());
    let ode_holds = (0..3).all(|i| phi[i].derivative().sub(&x.a[i].compose(&phi, &cap)).truncate(precision).is_zero());
    Flow { phi, eps: x.eps.clone(), precision: precision.clone(), contraction, integral_equation_holds, ode_holds }
}

#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub name: String,
    pub flow: Flow,
    /// `G(s, Phi_s(x))` at `s = 0`.
    pub pulled_back: TateSeries,
    pub constant_in_s: bool,
}

impl InvarianceReport {
    pub fn pass(&self) -> bool {
        self.constant_in_s && self.flow.contraction_ok() && self.flow.integral_equation_holds && self.flow.ode_holds
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "constant_in_s": self.constant_in_s,
            "pulled_back": self.pulled_back.to_json(),
            "flow": self.flow.to_json(),
            "pass": self.pass(),
        })
    }
}

/// Check `X.G + dG/ds = 0`, flow, and confirm `G(s, Phi_s)` does not depend on `s`.
pub fn flow_invariance_check(name: &str, g: &SSeries, x: &VectorFieldS, precision: &Q) -> Result<InvarianceReport> {
    let cap = precision + &x.eps;
    let lhs = x.act(g, &cap).add(&g.derivative()).truncate(precision);
    if !lhs.is_zero() {
        return Err(Error::HypothesisViolated("X.G + dG/ds does not vanish".into()));
    }
    let flow = picard_flow(x, precision);
    let pulled = g.compose(&flow.phi, &cap).truncate(precision);
    let constant_in_s = pulled.0.iter().skip(1).all(|t| t.is_zero());
    Ok(InvarianceReport { name: name.to_string(), pulled_back: pulled.coeff(0), flow, constant_in_s })
}

/// `s^k T^e x^i y^j z^l` with coefficient `c`.
fn s_term(k: usize, c: i64, e: i64, m: [u32; 3]) -> SSeries {
    let mut v = vec![TateSeries::zero(); k];
    v.push(TateSeries::mono(c, e, m));
    SSeries(v)
}

/// Field and first integral pairs used by the demonstration suite.
pub fn synthetic_suite(precision: &Q) -> Vec<(String, SSeries, VectorFieldS)> {
    let zero = SSeries::default;
    let mut out = vec![];
    // X = -T d/dx, G = x + sT
    let x1 = VectorFieldS::new([s_term(0, -1, 1, [0, 0, 0]), zero(), zero()]).expect("positive");
    out.push(("translation".to_string(), SSeries::var(Var::X).add(&s_term(1, 1, 1, [0, 0, 0])), x1));
    // X = -T^8 x^2 d/dx, G = x / (1 - s T^8 x) = sum s^k T^(8k) x^(k+1)
    let x2 = VectorFieldS::new([s_term(0, -1, 8, [2, 0, 0]), zero(), zero()]).expect("positive");
    let mut g2 = SSeries::default();
    let mut k = 0usize;
    while q(8 * k as i64) < *precision {
        g2 = g2.add(&s_term(k, 1, 8 * k as i64, [k as u32 + 1, 0, 0]));
        k += 1;
    }
    out.push(("projective".to_string(), g2, x2));
    // X = T^4 x d/dx, G = x exp(-s T^4)
    let x4 = VectorFieldS::new([s_term(0, 1, 4, [1, 0, 0]), zero(), zero()]).expect("positive");
    let mut g4 = SSeries::default();
    let (mut k, mut fact) = (0usize, Q::one());
    while q(4 * k as i64) < *precision {
        let mut v = vec![TateSeries::zero(); k];
        v.push(TateSeries::term(Mono::var(Var::X), NovikovScalar::monomial(fact.recip() * q(if k % 2 == 0 { 1 } else { -1 }), q(4 * k as i64))));
        g4 = g4.add(&SSeries(v));
        k += 1;
        fact *= q(k as i64);
    }
    out.push(("exponential".to_string(), g4, x4));
    // X = -T^2 z d/dy, G = y + s T^2 z (a shear; z is untouched)
    let x3 = VectorFieldS::new([zero(), s_term(0, -1, 2, [0, 0, 1]), zero()]).expect("positive");
    out.push(("shear".to_string(), SSeries::var(Var::Y).add(&s_term(1, 1, 2, [0, 0, 1])), x3));
    out
}

/// Run the whole synthetic suite.
pub fn flow_demo(precision: &Q) -> Result<Vec<InvarianceReport>> {
    synthetic_suite(precision).iter().map(|(n, g, x)| flow_invariance_check(n, g, x, precision)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OrbifoldData;
    use crate::potential::w_lead;

    fn xpoly(terms: &[(i64, i64, u32)]) -> TateSeries {
        let mut s = TateSeries::zero();
        for (c, e, d) in terms {
            s = s.add(&TateSeries::mono(*c, *e, [*d, 0, 0]));
        }
        s
    }

    #[test]
    fn inversion() {
        let f = CoordinateChange::new([q(1), q(1), q(1)], [TateSeries::mono(1, 1, [2, 0, 0]), TateSeries::zero(), TateSeries::zero()]).unwrap();
        let g = invert(&f, &q(20)).unwrap();
        let expected = xpoly(&[(-1, 1, 2), (2, 2, 3), (-5, 3, 4)]);
        assert!(g.u[0].eq_mod(&expected, &q(4)));
        let id = compose(&f, &g).unwrap();
        assert!(id.u[0].eq_mod(&TateSeries::zero(), &q(20)));
        let h = CoordinateChange::new([q(2), q(1), q(1)], Default::default()).unwrap();
        assert_eq!(invert(&h, &q(10)).unwrap().c[0], Q::new(1.into(), 2.into()));
        assert_eq!(compose(&f, &CoordinateChange::identity()).unwrap(), f);
    }

    #[test]
    fn rescaling() {
        let w = w_lead(&OrbifoldData::new(2, 3, 4).unwrap()).series;
        let cc = CoordinateChange::new([q(2), q(1), q(1)], Default::default()).unwrap();
        let out = apply(&cc, &w).unwrap();
        assert_eq!(out.get(&Mono::new(1, 1, 1)), NovikovScalar::t(-2, -8));
        assert_eq!(out.get(&Mono::new(2, 0, 0)), NovikovScalar::t(4, 0));
    }

    #[test]
    fn flows() {
        let p = q(40);
        let x = VectorFieldS::new([SSeries(vec![TateSeries::mono(1, 1, [1, 0, 0])]), SSeries::default(), SSeries::default()]).unwrap();
        let fl = picard_flow(&x, &p);
        assert!(fl.contraction_ok() && fl.integral_equation_holds && fl.ode_holds);
        // x exp(sT): coefficient of s^3 is T^3 x / 6
        assert_eq!(fl.phi[0].coeff(3).get(&Mono::new(1, 0, 0)), NovikovScalar::monomial(Q::new(1.into(), 6.into()), q(3)).with_precision(Some(&p + q(1))));
        for r in flow_demo(&p).unwrap() {
            assert!(r.pass(), "{}", r.name);
        }
        let bad = VectorFieldS::new([s_term(0, 1, 1, [0, 0, 0]), SSeries::default(), SSeries::default()]).unwrap();
        let g = SSeries::var(Var::X).add(&s_term(1, 1, 1, [0, 0, 0]));
        assert!(matches!(flow_invariance_check("bad", &g, &bad, &p), Err(Error::HypothesisViolated(_))));
    }
}

