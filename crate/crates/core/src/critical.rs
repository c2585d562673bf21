//! Critical points of potentials over the Novikov field.
//!
//! Points live over `Lambda_K`, where `K` is a number field presented as
//! `Q[w]/(m(w))`. A point over a degree-`d` field stands for its `d` conjugate
//! geometric points, so counts are sums of field degrees. Rational points use
//! the degree-one field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num::{BigInt, One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::novikov::{prec_min, q, qr, NovikovScalar, Prec, Q};
use crate::potential::{w_22r, PotentialSpec};
use crate::tate::{Mono, TateSeries, Var, NO_DEGREE_CAP};

fn trim(p: &mut Vec<Q>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    trim(&mut out);
    out
}

fn poly_sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, x) in b.iter().enumerate() {
        out[i] -= x;
    }
    trim(&mut out);
    out
}

fn poly_divmod(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].clone();
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let s = r.len() - 1 - db;
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[s + i] -= &c * bc;
        }
        quo[s] = c;
        trim(&mut r);
    }
    trim(&mut quo);
    (quo, r)
}

/// `Q[w]/(m(w))` with `m` monic and irreducible.
#[derive(Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: Vec<Q>,
}

pub type KElem = Vec<Q>;

impl NumberField {
    pub fn rational() -> Arc<Self> {
        Arc::new(Self { modulus: vec![Q::zero(), Q::one()] })
    }

    /// `Q[w]/(w^n - c)`; fails unless the binomial is irreducible.
    pub fn binomial(n: usize, c: &Q) -> Result<Arc<Self>> {
        if !binomial_irreducible(n, c) {
            return Err(Error::HenselConditionFailed(format!("residue polynomial w^{n} - {c} is reducible over Q")));
        }
        let mut m = vec![Q::zero(); n + 1];
        m[0] = -c.clone();
        m[n] = Q::one();
        Ok(Arc::new(Self { modulus: m }))
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn describe(&self) -> String {
        if self.degree() == 1 {
            return "Q".into();
        }
        let mut parts = vec![];
        for (i, c) in self.modulus.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*w"),
                _ if c.is_one() => format!("w^{i}"),
                _ => format!("{c}*w^{i}"),
            });
        }
        format!("Q[w]/({})", parts.join(" + "))
    }

    fn reduce(&self, p: Vec<Q>) -> KElem {
        let d = self.degree();
        let mut r = if p.len() > d { poly_divmod(&p, &self.modulus).1 } else { p };
        r.resize(d, Q::zero());
        r
    }

    pub fn from_q(&self, c: Q) -> KElem {
        self.reduce(vec![c])
    }

    /// The class of `w`.
    pub fn generator(&self) -> KElem {
        self.reduce(vec![Q::zero(), Q::one()])
    }

    pub fn is_zero(a: &KElem) -> bool {
        a.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, a: &KElem, b: &KElem) -> KElem {
        self.reduce(poly_mul(a, b))
    }

    pub fn inv(&self, a: &KElem) -> Option<KElem> {
        // extended Euclid: s*a + t*m = g
        let mut r0 = self.modulus.clone();
        let mut r1 = a.clone();
        trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let (mut s0, mut s1) = (vec![], vec![Q::one()]);
        while !r1.is_empty() {
            let (quo, rem) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            return None;
        }
        let k = r0[0].recip();
        Some(self.reduce(s0.into_iter().map(|c| c * &k).collect()))
    }

    pub fn format(&self, a: &KElem) -> String {
        let parts: Vec<String> = a
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*w"),
                _ => format!("{c}*w^{i}"),
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

fn is_perfect_power(n: &BigInt, p: u32) -> bool {
    if n.is_negative() {
        return p % 2 == 1 && is_perfect_power(&-n, p);
    }
    let r = n.nth_root(p);
    num::pow(r, p as usize) == *n
}

fn is_rational_power(c: &Q, p: u32) -> bool {
    is_perfect_power(c.numer(), p) && is_perfect_power(c.denom(), p)
}

fn primes_dividing(mut n: usize) -> Vec<u32> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p as u32);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n as u32);
    }
    out
}

/// Capelli: `w^n - c` is irreducible iff `c` is no `p`-th power for primes `p | n`
/// and, when `4 | n`, `c` is not of the form `-4 t^4`.
pub fn binomial_irreducible(n: usize, c: &Q) -> bool {
    if c.is_zero() {
        return n == 1;
    }
    if primes_dividing(n).into_iter().any(|p| is_rational_power(c, p)) {
        return false;
    }
    !(n.is_multiple_of(4) && c.is_negative() && is_rational_power(&(-c / q(4)), 4))
}

/// Series over `Lambda_K` with the same precision rules as [`NovikovScalar`].
#[derive(Clone, Debug)]
pub struct KSeries {
    field: Arc<NumberField>,
    terms: BTreeMap<Q, KElem>,
    prec: Prec,
}

fn below(e: &Q, p: &Prec) -> bool {
    p.as_ref().is_none_or(|p| e < p)
}

impl KSeries {
    pub fn zero(f: &Arc<NumberField>) -> Self {
        Self { field: f.clone(), terms: BTreeMap::new(), prec: None }
    }

    pub fn monomial(f: &Arc<NumberField>, c: KElem, e: Q) -> Self {
        let mut s = Self::zero(f);
        if !NumberField::is_zero(&c) {
            s.terms.insert(e, c);
        }
        s
    }

    pub fn constant_q(f: &Arc<NumberField>, c: Q) -> Self {
        Self::monomial(f, f.from_q(c), Q::zero())
    }

    pub fn from_novikov(f: &Arc<NumberField>, s: &NovikovScalar) -> Self {
        let mut out = Self::zero(f);
        for (e, c) in s.terms() {
            out.terms.insert(e.clone(), f.from_q(c.clone()));
        }
        out.prec = s.precision().clone();
        out
    }

    /// Back to a rational scalar, if every coefficient lies in `Q`.
    pub fn to_novikov(&self) -> Option<NovikovScalar> {
        let mut t = vec![];
        for (e, c) in &self.terms {
            if c[1..].iter().any(|x| !x.is_zero()) {
                return None;
            }
            t.push((e.clone(), c[0].clone()));
        }
        Some(NovikovScalar::from_terms(t, self.prec.clone()))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn precision(&self) -> &Prec {
        &self.prec
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn val(&self) -> Option<Q> {
        self.terms.keys().next().cloned()
    }

    /// Certified lower bound for the valuation; `None` is +infinity.
    pub fn val_lower(&self) -> Prec {
        self.val().or_else(|| self.prec.clone())
    }

    pub fn leading(&self) -> Option<(&Q, &KElem)> {
        self.terms.iter().next()
    }

    pub fn truncate(&self, cap: &Q) -> Self {
        let prec = prec_min(&self.prec, &Some(cap.clone()));
        Self { field: self.field.clone(), terms: self.terms.range(..cap.clone()).map(|(e, c)| (e.clone(), c.clone())).collect(), prec }
    }

    /// Forget the precision: the stored terms become the exact value.
    pub fn exact(mut self) -> Self {
        self.prec = None;
        self
    }

    fn normalize(mut self) -> Self {
        let p = self.prec.clone();
        self.terms.retain(|e, c| !NumberField::is_zero(c) && below(e, &p));
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        out.prec = prec_min(&self.prec, &o.prec);
        for (e, c) in &o.terms {
            let slot = out.terms.entry(e.clone()).or_insert_with(|| vec![Q::zero(); c.len()]);
            for (a, b) in slot.iter_mut().zip(c) {
                *a += b;
            }
        }
        out.normalize()
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            for a in c.iter_mut() {
                *a = -a.clone();
            }
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale_q(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zero(&self.field).with_prec(self.prec.clone());
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            for a in c.iter_mut() {
                *a *= k;
            }
        }
        out
    }

    pub fn shift(&self, e: &Q) -> Self {
        Self {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            prec: self.prec.as_ref().map(|p| p + e),
        }
    }

    fn with_prec(mut self, p: Prec) -> Self {
        self.prec = p;
        self.normalize()
    }

    fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.prec.is_none()
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero(&self.field);
        }
        let add = |p: &Prec, v: Prec| match (p, v) {
            (Some(p), Some(v)) => Some(p + v),
            _ => None,
        };
        let prec = prec_min(&add(&self.prec, o.val_lower()), &add(&o.prec, self.val_lower()));
        let mut raw: BTreeMap<Q, Vec<Q>> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if below(&e, &prec) {
                    let p = poly_mul(ca, cb);
                    let slot = raw.entry(e).or_default();
                    if slot.len() < p.len() {
                        slot.resize(p.len(), Q::zero());
                    }
                    for (a, b) in slot.iter_mut().zip(p) {
                        *a += b;
                    }
                }
            }
        }
        let terms = raw.into_iter().map(|(e, p)| (e, self.field.reduce(p))).collect();
        Self { field: self.field.clone(), terms, prec }.normalize()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant_q(&self.field, Q::one());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Inverse with absolute precision at most `cap` for exact inputs.
    pub fn inv(&self, cap: &Q) -> Result<Self> {
        let (v, c) = self.leading().map(|(v, c)| (v.clone(), c.clone())).ok_or(Error::NotInvertible)?;
        let ci = self.field.inv(&c).ok_or(Error::NotInvertible)?;
        let ci_s = Self::monomial(&self.field, ci, -v.clone());
        if self.terms.len() == 1 && self.prec.is_none() {
            return Ok(ci_s);
        }
        // self = c T^v (1 + u)
        let u = self.mul(&ci_s).sub(&Self::constant_q(&self.field, Q::one()));
        let rel = match &self.prec {
            Some(p) => p - &v,
            None => cap + &v,
        };
        let u = u.truncate(&rel);
        let vu = u.val().unwrap_or_else(|| rel.clone());
        let mut acc = Self::constant_q(&self.field, Q::one());
        let mut pw = acc.clone();
        let mut k = 1i64;
        while &vu * q(k) < rel {
            pw = pw.mul(&u).neg().truncate(&rel);
            acc = acc.add(&pw);
            k += 1;
        }
        Ok(acc.with_prec(Some(rel)).mul(&ci_s))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "valuation": self.val().map(|v| v.to_string()),
            "leading": self.leading().map(|(e, c)| json!({"t_exp": e.to_string(), "coef": self.field.format(c)})),
            "terms_stored": self.terms.len(),
            "precision": self.prec.as_ref().map(|p| p.to_string()),
        })
    }
}

/// Evaluate a series at a point over `Lambda_K`, ignoring the degree cap.
pub fn eval_at(s: &TateSeries, p: &[KSeries; 3]) -> KSeries {
    let f = p[0].field().clone();
    let maxd = s.iter().map(|(m, _)| *m.0.iter().max().unwrap()).max().unwrap_or(0);
    let pows: Vec<Vec<KSeries>> = p
        .iter()
        .map(|x| {
            let mut v = vec![KSeries::constant_q(&f, Q::one())];
            for i in 0..maxd as usize {
                v.push(v[i].mul(x));
            }
            v
        })
        .collect();
    let mut acc = KSeries::zero(&f);
    for (m, c) in s.iter() {
        let mut t = KSeries::from_novikov(&f, c);
        for i in 0..3 {
            if m.0[i] > 0 {
                t = t.mul(&pows[i][m.0[i] as usize]);
            }
        }
        acc = acc.add(&t);
    }
    let p = prec_min(&acc.prec, s.t_precision());
    acc.with_prec(p)
}

fn gradient(w: &PotentialSpec) -> [TateSeries; 3] {
    let s = w.series.clone().with_degree_cap(NO_DEGREE_CAP);
    [s.partial(Var::X), s.partial(Var::Y), s.partial(Var::Z)]
}

/// Minimal certified valuation of the three partials at `p`; `None` is +infinity.
pub fn gradient_residual(w: &PotentialSpec, p: &[KSeries; 3]) -> Prec {
    gradient(w).iter().map(|g| eval_at(g, p).val_lower()).fold(None, |a, b| prec_min(&a, &b))
}

/// [`gradient_residual`] for a rational point.
pub fn gradient_residual_q(w: &PotentialSpec, p: &[NovikovScalar; 3]) -> Prec {
    let f = NumberField::rational();
    gradient_residual(w, &[0, 1, 2].map(|i| KSeries::from_novikov(&f, &p[i])))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    HyperplaneZ,
    Diagonal,
    Generic,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::HyperplaneZ => "hyperplane_z",
            Branch::Diagonal => "diagonal",
            Branch::Generic => "generic",
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriticalPoint {
    pub coords: [KSeries; 3],
    pub residual_valuation: Prec,
    pub coordinate_valuations: [Option<Q>; 3],
    pub branch: Branch,
    /// Residual valuation after each refinement step.
    pub history: Vec<Prec>,
}

fn prec_str(p: &Prec) -> Value {
    match p {
        Some(p) => Value::String(p.to_string()),
        None => Value::String("inf".into()),
    }
}

impl CriticalPoint {
    fn new(w: &PotentialSpec, coords: [KSeries; 3], branch: Branch) -> Self {
        let residual_valuation = gradient_residual(w, &coords);
        let coordinate_valuations = [0, 1, 2].map(|i| coords[i].val());
        Self { coords, residual_valuation, coordinate_valuations, branch, history: vec![] }
    }

    /// Number of geometric points this closed point stands for.
    pub fn degree(&self) -> usize {
        self.coords[0].field().degree()
    }

    pub fn min_coordinate_valuation(&self) -> Option<Q> {
        self.coordinate_valuations.iter().flatten().min().cloned()
    }

    /// Minimal coordinate valuation lies in `[0, 3)`.
    pub fn escaped(&self) -> bool {
        self.min_coordinate_valuation().is_some_and(|v| !v.is_negative() && v < q(3))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "branch": self.branch.name(),
            "field": self.coords[0].field().describe(),
            "geometric_points": self.degree(),
            "coordinate_valuations": self.coordinate_valuations.iter().map(|v| v.as_ref().map(|v| v.to_string())).collect::<Vec<_>>(),
            "residual_valuation": prec_str(&self.residual_valuation),
            "coords": {"x": self.coords[0].to_json(), "y": self.coords[1].to_json(), "z": self.coords[2].to_json()},
            "escaped": self.escaped(),
        })
    }
}

fn det3(m: &[[KSeries; 3]; 3]) -> KSeries {
    let t = |a: usize, b: usize, c: usize, d: usize| m[a][b].mul(&m[c][d]);
    m[0][0]
        .mul(&t(1, 1, 2, 2).sub(&t(1, 2, 2, 1)))
        .sub(&m[0][1].mul(&t(1, 0, 2, 2).sub(&t(1, 2, 2, 0))))
        .add(&m[0][2].mul(&t(1, 0, 2, 1).sub(&t(1, 1, 2, 0))))
}

fn inverse3(m: &[[KSeries; 3]; 3], cap: &Q) -> Result<[[KSeries; 3]; 3]> {
    let d = det3(m);
    if d.val().is_none() {
        return Err(Error::HenselConditionFailed("Hessian determinant has no certified leading term".into()));
    }
    let di = d.inv(cap)?;
    let cof = |r: usize, c: usize| {
        let rs: Vec<usize> = (0..3).filter(|&i| i != r).collect();
        let cs: Vec<usize> = (0..3).filter(|&i| i != c).collect();
        let v = m[rs[0]][cs[0]].mul(&m[rs[1]][cs[1]]).sub(&m[rs[0]][cs[1]].mul(&m[rs[1]][cs[0]]));
        if (r + c).is_multiple_of(2) {
            v
        } else {
            v.neg()
        }
    };
    // inverse = adj / det with adj[i][j] = cof(j, i)
    Ok([0, 1, 2].map(|i| [0, 1, 2].map(|j| cof(j, i).mul(&di))))
}

/// Extra absolute precision carried beyond the target during refinement.
pub const REFINE_MARGIN: i64 = 40;

/// Newton iteration `p <- p - H^-1 grad W(p)` until the residual reaches `target`.
pub fn newton_refine(w: &PotentialSpec, seed: &[KSeries; 3], target: &Q) -> Result<CriticalPoint> {
    let grad = gradient(w);
    let hess: Vec<Vec<TateSeries>> = grad.iter().map(|g| Var::ALL.iter().map(|v| g.partial(*v)).collect()).collect();
    let m = w.series.iter().filter_map(|(_, c)| c.val()).min().unwrap_or_else(Q::zero);
    let cap = target + q(REFINE_MARGIN);
    let mut p = seed.clone().map(|x| x.truncate(&cap).exact());
    let mut hist = vec![];
    let res = |p: &[KSeries; 3]| grad.iter().map(|g| eval_at(g, p).val_lower()).fold(None, |a, b| prec_min(&a, &b));
    let mut rho = res(&p);
    hist.push(rho.clone());
    let mut first = true;
    while let Some(r) = rho.clone() {
        if &r >= target {
            break;
        }
        let h = [0, 1, 2].map(|i| [0, 1, 2].map(|j| eval_at(&hess[i][j], &p)));
        let hi = inverse3(&h, &(&cap + q(REFINE_MARGIN)))?;
        let hv = hi.iter().flatten().filter_map(|e| e.val_lower()).min().unwrap_or_else(Q::zero);
        if first && !(&r + &hv > Q::zero() && r > -q(2) * &hv - &m) {
            return Err(Error::HenselConditionFailed(format!("residual {r} does not clear the gap: inverse Hessian valuation {hv}, coefficient floor {m}")));
        }
        first = false;
        let g = grad.clone().map(|g| eval_at(&g, &p));
        let step: Vec<KSeries> = (0..3).map(|i| (0..3).fold(KSeries::zero(p[0].field()), |a, j| a.add(&hi[i][j].mul(&g[j])))).collect();
        p = [0, 1, 2].map(|i| p[i].sub(&step[i]).truncate(&cap).exact());
        let next = res(&p);
        hist.push(next.clone());
        if let Some(n) = &next {
            if n <= &r {
                return Err(Error::PrecisionExhausted);
            }
        }
        rho = next;
    }
    let mut cp = CriticalPoint::new(w, p, Branch::Generic);
    cp.history = hist;
    Ok(cp)
}

/// The parts of a `(2,2,r)` potential the branch solvers need.
struct Shape22r {
    gamma: NovikovScalar,
    alpha: NovikovScalar,
    beta: NovikovScalar,
    /// `d/dz` of the pure-`z` part, by degree.
    g: Vec<NovikovScalar>,
}

fn shape(w: &PotentialSpec) -> Result<Shape22r> {
    let s = &w.series;
    let get = |m: Mono| s.get(&m);
    let (gamma, alpha, beta) = (get(Mono::new(1, 1, 1)), get(Mono::new(2, 0, 0)), get(Mono::new(1, 0, 0)));
    if get(Mono::new(0, 2, 0)) != alpha || get(Mono::new(0, 1, 0)) != beta {
        return Err(Error::HypothesisViolated("potential is not symmetric in x and y".into()));
    }
    for (m, _) in s.iter() {
        let known = m.0[0] == 0 && m.0[1] == 0 || [Mono::new(1, 1, 1), Mono::new(2, 0, 0), Mono::new(0, 2, 0), Mono::new(1, 0, 0), Mono::new(0, 1, 0)].contains(m);
        if !known {
            return Err(Error::HypothesisViolated(format!("unexpected monomial {m}")));
        }
    }
    let deg = s.iter().filter(|(m, _)| m.0[0] == 0 && m.0[1] == 0).map(|(m, _)| m.0[2]).max().unwrap_or(0) as usize;
    let mut g = vec![NovikovScalar::zero(); deg.max(1)];
    for (m, c) in s.iter() {
        if m.0[0] == 0 && m.0[1] == 0 && m.0[2] > 0 {
            g[m.0[2] as usize - 1] = c.scale(&q(m.0[2] as i64));
        }
    }
    Ok(Shape22r { gamma, alpha, beta, g })
}

fn poly_eval(c: &[NovikovScalar], z: &NovikovScalar) -> NovikovScalar {
    c.iter().rev().fold(NovikovScalar::zero(), |a, k| a.mul(z).add(k))
}

/// Data recorded by the hyperplane solver.
#[derive(Clone, Debug)]
pub struct HyperplaneData {
    pub z: NovikovScalar,
    /// Valuation of `xy` computed from the equations.
    pub xy_valuation: Q,
    /// The exponent `8 + (r - 1)` the quadratic would have with the `T^(r-1)` reading.
    pub r_plus_7_xy_exponent: Q,
}

/// Branch `z = 2 alpha / gamma`: `x, y` solve a quadratic.
pub fn solve_22r_hyperplane(r: u32, lambda: &Q, c: &[Q], precision: &Q) -> Result<(Vec<CriticalPoint>, HyperplaneData)> {
    let w = w_22r(r, lambda, c)?;
    let sh = shape(&w)?;
    let cap = precision + q(REFINE_MARGIN);
    let z0 = sh.alpha.scale(&q(2)).mul(&sh.gamma.invert_with(&cap)?);
    let gz = poly_eval(&sh.g, &z0);
    let two_alpha_inv = sh.alpha.scale(&q(2)).invert_with(&cap)?;
    // x + y = S, xy = -g(z0)/gamma
    let s = sh.beta.neg().mul(&two_alpha_inv);
    let xy = gz.neg().mul(&sh.gamma.invert_with(&cap)?);
    let u = xy.scale(&q(-4)).mul(&s.mul(&s).invert_with(&cap)?).truncate(&cap);
    let sq = NovikovScalar::sqrt1p_with(&u, &cap)?;
    let half = s.scale(&qr(1, 2));
    let big = half.mul(&NovikovScalar::one().add(&sq)).truncate(&cap).with_precision(None);
    let small = s.sub(&big).with_precision(None);
    let f = NumberField::rational();
    let k = |x: &NovikovScalar| KSeries::from_novikov(&f, x);
    let zk = k(&z0.clone().with_precision(None));
    let pts = vec![
        CriticalPoint::new(&w, [k(&big), k(&small), zk.clone()], Branch::HyperplaneZ),
        CriticalPoint::new(&w, [k(&small), k(&big), zk], Branch::HyperplaneZ),
    ];
    for p in &pts {
        if p.min_coordinate_valuation().as_ref() != Some(lambda) {
            return Err(Error::HypothesisViolated(format!("hyperplane root without a coordinate of valuation {lambda}")));
        }
    }
    let data = HyperplaneData { z: z0, xy_valuation: xy.val().unwrap_or_else(Q::zero), r_plus_7_xy_exponent: q(8 + r as i64 - 1) };
    Ok((pts, data))
}

/// One segment of a lower convex hull: `(start degree, end degree, slope)`.
pub type Segment = (usize, usize, Q);

/// Lower hull of the points `(d, val c_d)`; root valuations are the negated slopes.
pub fn newton_polygon(c: &[NovikovScalar]) -> Vec<Segment> {
    let pts: Vec<(usize, Q)> = c.iter().enumerate().filter_map(|(d, s)| s.val().map(|v| (d, v))).collect();
    let mut hull: Vec<(usize, Q)> = vec![];
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (&hull[hull.len() - 2], &hull[hull.len() - 1]);
            // drop b when it lies on or above segment a-p
            let lhs = (&b.1 - &a.1) * q((p.0 - a.0) as i64);
            let rhs = (&p.1 - &a.1) * q((b.0 - a.0) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[0].0, w[1].0, (&w[1].1 - &w[0].1) / q((w[1].0 - w[0].0) as i64))).collect()
}

/// Data recorded by the diagonal solver.
#[derive(Clone, Debug)]
pub struct DiagonalData {
    pub eliminant_degree: usize,
    pub polygon: Vec<Segment>,
    pub predicted_val_z: Q,
    pub predicted_val_x: Q,
    pub field: String,
    pub newton_steps: usize,
}

/// Branch `x = y`: the eliminant in `z`, its Newton polygon, and a Newton lift over the residue field.
pub fn solve_22r_diagonal(r: u32, lambda: &Q, c: &[Q], precision: &Q) -> Result<(Vec<CriticalPoint>, DiagonalData)> {
    let w = w_22r(r, lambda, c)?;
    let sh = shape(&w)?;
    // E(z) = g(z) (2 alpha + gamma z)^2 + gamma beta^2
    let lin = [sh.alpha.scale(&q(2)), sh.gamma.clone()];
    let sq = [lin[0].mul(&lin[0]), lin[0].mul(&lin[1]).scale(&q(2)), lin[1].mul(&lin[1])];
    let mut e = vec![NovikovScalar::zero(); sh.g.len() + 2];
    for (i, gi) in sh.g.iter().enumerate() {
        for (j, sj) in sq.iter().enumerate() {
            e[i + j] = e[i + j].add(&gi.mul(sj));
        }
    }
    e[0] = e[0].add(&sh.gamma.mul(&sh.beta).mul(&sh.beta));
    while e.last().is_some_and(|c| c.is_exact_zero()) {
        e.pop();
    }
    let n = e.len() - 1;
    let polygon = newton_polygon(&e);
    if polygon.len() != 1 || polygon[0].0 != 0 || polygon[0].1 != n {
        return Err(Error::PolygonDegenerate(format!(
            "eliminant polygon has segments {:?}",
            polygon.iter().map(|(a, b, s)| format!("[{a},{b}] slope {s}")).collect::<Vec<_>>()
        )));
    }
    let v = -polygon[0].2.clone();
    let (v0, c0) = e[0].leading().cloned().ok_or(Error::NotInvertible)?;
    let (vn, cn) = e[n].leading().cloned().ok_or(Error::NotInvertible)?;
    for (d, cd) in e.iter().enumerate().take(n).skip(1) {
        if let Some(vd) = cd.val() {
            if vd == &v0 - &v * q(d as i64) {
                return Err(Error::PolygonDegenerate(format!("interior point at degree {d} on the segment")));
            }
        }
    }
    let _ = vn;
    let field = NumberField::binomial(n, &(-c0 / cn))?;
    let ek: Vec<KSeries> = e.iter().map(|c| KSeries::from_novikov(&field, c)).collect();
    let dk: Vec<KSeries> = ek.iter().enumerate().skip(1).map(|(d, c)| c.scale_q(&q(d as i64))).collect();
    let horner = |cs: &[KSeries], z: &KSeries, cap: &Q| cs.iter().rev().fold(KSeries::zero(&field), |a, k| a.mul(z).add(k).truncate(cap));
    // residual targets: dz W = E(z) / (2 alpha + gamma z)^2 loses 2 (v - 8)
    let loss = q(2) * (q(8) - &v);
    let target_e = precision + &loss + q(8);
    let cap_e = &target_e + q(REFINE_MARGIN);
    let cap_z = &cap_e - &v0 + &v + q(REFINE_MARGIN);
    let mut z = KSeries::monomial(&field, field.generator(), v.clone());
    let mut steps = 0;
    loop {
        let ez = horner(&ek, &z, &cap_e);
        if ez.val_lower().is_none_or(|x| x >= target_e) {
            break;
        }
        if steps > 40 {
            return Err(Error::PrecisionExhausted);
        }
        let dz = horner(&dk, &z, &cap_e);
        let corr = ez.mul(&dz.inv(&(&cap_z + q(REFINE_MARGIN)))?);
        z = z.sub(&corr).truncate(&cap_z).exact();
        steps += 1;
    }
    let cap_x = precision + q(REFINE_MARGIN);
    let den = KSeries::from_novikov(&field, &lin[0]).add(&KSeries::from_novikov(&field, &lin[1]).mul(&z));
    let x = KSeries::from_novikov(&field, &sh.beta).neg().mul(&den.inv(&(&cap_x + q(REFINE_MARGIN)))?).truncate(&cap_x).exact();
    let pt = CriticalPoint::new(&w, [x.clone(), x, z], Branch::Diagonal);
    let predicted_val_z = v.clone();
    let predicted_val_x = lambda + q(8) - &v;
    if pt.coordinate_valuations[2].as_ref() != Some(&predicted_val_z) || pt.coordinate_valuations[0].as_ref() != Some(&predicted_val_x) {
        return Err(Error::HypothesisViolated("diagonal root valuations differ from the polygon prediction".into()));
    }
    let data = DiagonalData { eliminant_degree: n, polygon, predicted_val_z, predicted_val_x, field: field.describe(), newton_steps: steps };
    Ok((vec![pt], data))
}

/// Default `c_k`: all ones.
pub fn default_ck(r: u32) -> Vec<Q> {
    vec![Q::one(); (r / 2) as usize]
}

#[derive(Clone, Debug)]
pub struct EscapeReport {
    pub r: u32,
    pub lambda: Q,
    pub precision: Q,
    pub points: Vec<CriticalPoint>,
    pub hyperplane: HyperplaneData,
    pub diagonal: DiagonalData,
    pub expected_count: usize,
}

impl EscapeReport {
    pub fn count(&self) -> usize {
        self.points.iter().map(|p| p.degree()).sum()
    }

    pub fn all_escaped(&self) -> bool {
        self.points.iter().all(|p| p.escaped())
    }

    pub fn residuals_ok(&self) -> bool {
        self.points.iter().all(|p| p.residual_valuation.as_ref().is_none_or(|r| r >= &self.precision))
    }

    pub fn diagonal_valuations_ok(&self) -> bool {
        self.points.iter().filter(|p| p.branch == Branch::Diagonal).all(|p| {
            p.coordinate_valuations[2].as_ref() == Some(&self.diagonal.predicted_val_z)
                && p.coordinate_valuations[0].as_ref() == Some(&self.diagonal.predicted_val_x)
                && p.coordinate_valuations[1].as_ref() == Some(&self.diagonal.predicted_val_x)
        })
    }

    /// Named checks in a fixed order.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        vec![
            ("count", self.count() == self.expected_count),
            ("escaped", self.all_escaped()),
            ("residual", self.residuals_ok()),
            ("diagonal_valuations", self.diagonal_valuations_ok()),
        ]
    }

    pub fn pass(&self) -> bool {
        self.checks().iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "r": self.r,
            "lambda": self.lambda.to_string(),
            "precision": self.precision.to_string(),
            "count": self.count(),
            "expected_count": self.expected_count,
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "hyperplane": {
                "z": self.hyperplane.z.to_json(),
                "xy_valuation": self.hyperplane.xy_valuation.to_string(),
                "r_plus_7_xy_exponent": self.hyperplane.r_plus_7_xy_exponent.to_string(),
                "r_plus_7_matches": self.hyperplane.xy_valuation == self.hyperplane.r_plus_7_xy_exponent,
            },
            "diagonal": {
                "eliminant_degree": self.diagonal.eliminant_degree,
                "polygon": self.diagonal.polygon.iter().map(|(a, b, s)| json!({"from": a, "to": b, "slope": s.to_string()})).collect::<Vec<_>>(),
                "predicted_val_z": self.diagonal.predicted_val_z.to_string(),
                "predicted_val_x": self.diagonal.predicted_val_x.to_string(),
                "residue_field": self.diagonal.field,
                "newton_steps": self.diagonal.newton_steps,
            },
            "checks": self.checks().iter().map(|(n, ok)| json!({"name": n, "pass": ok})).collect::<Vec<_>>(),
            "pass": self.pass(),
        })
    }
}

/// Both branches, with the count compared against `a + b + c - 1 = r + 3`.
pub fn escape_check(r: u32, lambda: &Q, c: &[Q], precision: &Q) -> Result<EscapeReport> {
    let (h, d) = rayon::join(|| solve_22r_hyperplane(r, lambda, c, precision), || solve_22r_diagonal(r, lambda, c, precision));
    let (mut points, hyperplane) = h?;
    let (dp, diagonal) = d?;
    points.extend(dp);
    Ok(EscapeReport { r, lambda: lambda.clone(), precision: precision.clone(), points, hyperplane, diagonal, expected_count: r as usize + 3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::OrbifoldData;
    use crate::potential::w_lead;

    #[test]
    fn field_arithmetic() {
        let f = NumberField::binomial(4, &qr(1, 3)).unwrap();
        let w = f.generator();
        let w4 = f.mul(&f.mul(&w, &w), &f.mul(&w, &w));
        assert_eq!(w4, f.from_q(qr(1, 3)));
        let a = vec![q(1), q(2), q(0), q(-1)];
        assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.from_q(q(1)));
        assert!(!binomial_irreducible(2, &q(4)));
        assert!(!binomial_irreducible(4, &q(-4)));
        assert!(binomial_irreducible(6, &qr(1, 5)));
    }

    #[test]
    fn residual_examples() {
        let zero = [NovikovScalar::zero(), NovikovScalar::zero(), NovikovScalar::zero()];
        assert_eq!(gradient_residual_q(&w_lead(&OrbifoldData::new(3, 3, 3).unwrap()), &zero), None);
        assert_eq!(gradient_residual_q(&w_22r(3, &q(1), &default_ck(3)).unwrap(), &zero), Some(q(1)));
    }

    #[test]
    fn polygon() {
        let c = [NovikovScalar::t(1, 2), NovikovScalar::t(1, 0), NovikovScalar::t(1, 1), NovikovScalar::t(1, -2)];
        let p = newton_polygon(&c);
        assert_eq!(p, vec![(0, 1, q(-2)), (1, 3, q(-1))]);
    }

    #[test]
    fn escape_r3() {
        let rep = escape_check(3, &q(1), &default_ck(3), &q(60)).unwrap();
        assert!(rep.pass(), "{}", rep.to_json());
        assert_eq!(rep.count(), 6);
        assert_eq!(rep.diagonal.predicted_val_z, qr(5, 2));
        assert_eq!(rep.diagonal.predicted_val_x, qr(13, 2));
        assert_eq!(rep.hyperplane.xy_valuation, q(24));
    }

    #[test]
    fn refine() {
        let w = w_22r(3, &q(1), &default_ck(3)).unwrap();
        let (pts, _) = solve_22r_hyperplane(3, &q(1), &default_ck(3), &q(40)).unwrap();
        let p = newton_refine(&w, &pts[0].coords, &q(120)).unwrap();
        assert!(p.residual_valuation.is_none_or(|r| r >= q(120)));
        assert!(p.history.windows(2).all(|h| match (&h[0], &h[1]) {
            (Some(a), Some(b)) => a < b,
            (Some(_), None) => true,
            _ => false,
        }));
        let f = NumberField::rational();
        let origin = [0, 1, 2].map(|_| KSeries::zero(&f));
        assert!(matches!(newton_refine(&w, &origin, &q(50)), Err(Error::HenselConditionFailed(_))));
        let lead = w_lead(&OrbifoldData::new(3, 3, 3).unwrap());
        assert_eq!(newton_refine(&lead, &origin, &q(50)).unwrap().residual_valuation, None);
    }
}
