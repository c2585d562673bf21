//! Index, area and curvature identities for orbi-discs bounded by the Seidel Lagrangian.
//!
//! All angles and curvature totals are rational multiples of pi; the angle
//! perturbation epsilon is carried as a formal parameter via [`EpsQ`].

use std::collections::BTreeMap;

use num::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::novikov::{q, Q};
use crate::tate::{Frame, Mono, TateSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Spherical,
    Elliptic,
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbifoldData {
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub chi: Q,
    pub kind: Kind,
}

impl OrbifoldData {
    pub const TRIANGLE_AREA: i64 = 1;
    pub const TOTAL_AREA: i64 = 8;

    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        if a < 2 || b < 2 || c < 2 {
            return Err(Error::Config(format!("orbifold orders must be at least 2, got ({a},{b},{c})")));
        }
        let chi = inv(a) + inv(b) + inv(c) - Q::one();
        let kind = if chi.is_positive() {
            Kind::Spherical
        } else if chi.is_zero() {
            Kind::Elliptic
        } else {
            Kind::Hyperbolic
        };
        Ok(Self { a, b, c, chi, kind })
    }

    pub fn orders(&self) -> [u32; 3] {
        [self.a, self.b, self.c]
    }

    /// Rank of the orbifold cohomology, `a + b + c - 1`.
    pub fn rank(&self) -> usize {
        (self.a + self.b + self.c - 1) as usize
    }

    /// `n1/a + n2/b + n3/c`.
    pub fn corner_weight(&self, n: &[u32; 3]) -> Q {
        (0..3).map(|i| Q::new(n[i].into(), self.orders()[i].into())).sum()
    }
}

fn inv(n: u32) -> Q {
    Q::new(1.into(), n.into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerData {
    pub n: [u32; 3],
    pub ages: Vec<Q>,
    pub m: Q,
}

impl CornerData {
    pub fn new(n: [u32; 3], ages: Vec<Q>, m: i64) -> Self {
        Self { n, ages, m: q(m) }
    }

    pub fn corners(&self) -> u32 {
        self.n.iter().sum()
    }

    /// False when the area is negative or fractional.
    pub fn is_geometric(&self) -> bool {
        !self.m.is_negative() && self.m.is_integer()
    }
}

fn age_excess(ages: &[Q]) -> Q {
    ages.iter().map(|i| Q::one() - i).sum()
}

pub fn maslov_cw(d: &CornerData, o: &OrbifoldData) -> Q {
    let e = &d.m - q(3 * d.corners() as i64);
    q(2) * (o.corner_weight(&d.n) + e * &o.chi / q(8))
}

pub fn maslov_de(mu_cw: &Q, ages: &[Q]) -> Q {
    mu_cw - q(2) * ages.iter().sum::<Q>()
}

/// Virtual dimension `mu_de + 2l - 2` of the potential-contributing moduli (one output).
pub fn virtual_dim(mu_de: &Q, l: usize, _k: usize) -> Q {
    mu_de + q(2 * l as i64) - q(2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AreaMultiple {
    /// A genuine disc of area `m`.
    Disc(Q),
    /// Negative or fractional area.
    NoDisc(Q),
    /// Elliptic case: area is free; records whether the constraint holds.
    Unconstrained { constraint_holds: bool },
}

pub fn area_multiple(n: &[u32; 3], ages: &[Q], o: &OrbifoldData) -> AreaMultiple {
    let s = o.corner_weight(n) + age_excess(ages) - Q::one();
    if o.chi.is_zero() {
        return AreaMultiple::Unconstrained { constraint_holds: s.is_zero() };
    }
    let denom = Q::one() - (inv(o.a) + inv(o.b) + inv(o.c));
    let m = q(3 * n.iter().sum::<u32>() as i64) + q(8) * s / denom;
    if m.is_negative() || !m.is_integer() {
        AreaMultiple::NoDisc(m)
    } else {
        AreaMultiple::Disc(m)
    }
}

/// A potential slot: corners, interior ages, area (None when unconstrained) and x,y,z-frame exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub n: [u32; 3],
    pub ages: Vec<Q>,
    pub m: Option<Q>,
    pub exponent: Option<Q>,
}

/// Enumerate every corner/age datum whose standard-frame exponent `m - 3 sum n`
/// lies in `[-8, cap]`. Ages may repeat.
pub fn slot_enumerate(o: &OrbifoldData, available_ages: &[Q], cap: &Q) -> Vec<Slot> {
    // exponent E = -8 (S - 1) / chi where S = corner weight + age excess
    let (s_lo, s_hi) = if o.chi.is_zero() {
        (Q::one(), Q::one())
    } else if o.chi.is_positive() {
        (Q::one() - cap * &o.chi / q(8), Q::one() + o.chi.clone())
    } else {
        (Q::one() + o.chi.clone(), Q::one() - cap * &o.chi / q(8))
    };
    let mut ages: Vec<Q> = available_ages.to_vec();
    ages.sort();
    ages.dedup();
    let mut age_sets: Vec<Vec<Q>> = vec![vec![]];
    // grow multisets while the age excess stays below the bound
    let mut frontier = vec![vec![]];
    while !frontier.is_empty() {
        let mut next = vec![];
        for set in &frontier {
            let start = set.last().map(|l: &Q| ages.iter().position(|a| a == l).unwrap()).unwrap_or(0);
            for a in &ages[start..] {
                let mut s = set.clone();
                s.push(a.clone());
                if age_excess(&s) <= s_hi {
                    next.push(s.clone());
                    age_sets.push(s);
                }
            }
        }
        frontier = next;
    }
    let bound = |v: u32| -> u32 {
        // n / v <= s_hi
        let b = (&s_hi * q(v as i64)).floor().to_integer();
        num::ToPrimitive::to_u32(&b).unwrap_or(0)
    };
    let mut out = vec![];
    for n1 in 0..=bound(o.a) {
        for n2 in 0..=bound(o.b) {
            for n3 in 0..=bound(o.c) {
                let n = [n1, n2, n3];
                let w = o.corner_weight(&n);
                if w > s_hi {
                    continue;
                }
                for ages in &age_sets {
                    let s = &w + age_excess(ages);
                    if s < s_lo || s > s_hi {
                        continue;
                    }
                    match area_multiple(&n, ages, o) {
                        AreaMultiple::Disc(m) => {
                            let e = &m - q(3 * (n1 + n2 + n3) as i64);
                            out.push(Slot { n, ages: ages.clone(), m: Some(m), exponent: Some(e) });
                        }
                        AreaMultiple::Unconstrained { constraint_holds: true } => {
                            out.push(Slot { n, ages: ages.clone(), m: None, exponent: None });
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    out.sort_by(|x, y| x.exponent.cmp(&y.exponent).then(y.n.cmp(&x.n)).then(x.ages.cmp(&y.ages)));
    out
}

/// `a + b * epsilon`, in units of pi.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EpsQ {
    pub c: Q,
    pub eps: Q,
}

impl EpsQ {
    pub fn new(c: Q, eps: Q) -> Self {
        Self { c, eps }
    }

    pub fn num(c: Q) -> Self {
        Self { c, eps: Q::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self { c: &self.c + &o.c, eps: &self.eps + &o.eps }
    }

    pub fn scale(&self, k: &Q) -> Self {
        Self { c: &self.c * k, eps: &self.eps * k }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero() && self.eps.is_zero()
    }
}

/// Curvature area of one minimal triangle, `A K = 2 pi chi / 8`.
pub fn area_k(o: &OrbifoldData) -> EpsQ {
    EpsQ::num(&o.chi / q(4))
}

/// Edge curvature `k12 = -3 chi / 8 + epsilon` (in units of 2 pi).
pub fn edge_curvature(o: &OrbifoldData) -> EpsQ {
    EpsQ::new(-q(3) * &o.chi / q(8), Q::one())
}

/// `int K + sum angles + sum int k + 2 pi sum (1 - age) - 2 pi`, in units of pi.
pub fn gauss_bonnet_residual(area_k: &EpsQ, exterior_angles: &[EpsQ], geodesic_totals: &[EpsQ], ages: &[Q]) -> EpsQ {
    let mut r = area_k.clone();
    for a in exterior_angles.iter().chain(geodesic_totals.iter()) {
        r = r.add(a);
    }
    r.add(&EpsQ::num(q(2) * age_excess(ages) - q(2)))
}

/// Upper hemisphere: four triangles bounded by geodesics with angles `pi - pi/v`.
pub fn upper_hemisphere_residual(o: &OrbifoldData) -> EpsQ {
    let angles: Vec<EpsQ> = o.orders().iter().map(|&v| EpsQ::num(Q::one() - inv(v))).collect();
    gauss_bonnet_residual(&area_k(o).scale(&q(4)), &angles, &[], &[])
}

/// Minimal upper triangle with exterior angles `2 pi (1/v - eps)` and three edges of curvature `2 pi k12`.
pub fn minimal_triangle_residual(o: &OrbifoldData) -> EpsQ {
    let angles: Vec<EpsQ> = o.orders().iter().map(|&v| EpsQ::new(q(2) * inv(v), -q(2))).collect();
    let k = edge_curvature(o).scale(&q(2));
    gauss_bonnet_residual(&area_k(o), &angles, &[k.clone(), k.clone(), k], &[])
}

/// Solve the triangle with corners X, Y and the orbifold point of order `c` for `k12`.
pub fn solve_edge_curvature_from_cu(o: &OrbifoldData) -> EpsQ {
    let angles = vec![
        EpsQ::new(Q::one() - inv(o.a), Q::one()),
        EpsQ::new(Q::one() - inv(o.b), Q::one()),
        EpsQ::num(Q::one() - inv(o.c)),
    ];
    // residual with k12 = 0; the edge enters with weight -2
    let r = gauss_bonnet_residual(&area_k(o), &angles, &[], &[]);
    r.scale(&Q::new(1.into(), 2.into()))
}

/// Chern-Weil Maslov index from curvature data, with epsilon kept formal.
pub fn maslov_cw_from_curvature(d: &CornerData, o: &OrbifoldData) -> EpsQ {
    let n = q(d.corners() as i64);
    let k = EpsQ::num(&d.m * &o.chi / q(4));
    let edges = edge_curvature(o).scale(&(q(2) * &n));
    let angles = EpsQ::new(q(2) * o.corner_weight(&d.n), -q(2) * &n);
    k.add(&edges).add(&angles)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaCheck {
    pub mono: Mono,
    pub t_exp: Q,
    pub m: Q,
    pub lhs: Q,
    pub rhs: Q,
    pub pass: bool,
}

impl AreaCheck {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "monomial": self.mono.to_string(),
            "t_exp": self.t_exp.to_string(),
            "m": self.m.to_string(),
            "lhs": self.lhs.to_string(),
            "rhs": self.rhs.to_string(),
            "pass": self.pass,
        })
    }
}

/// Per-term check of `(m - 3 sum n)(-chi/8) = sum n/v + sum (1 - age) - 1`.
///
/// `areas` overrides the area of a term `(monomial, exponent)`; otherwise it is read off the exponent.
pub fn validate_area_relations(
    p: &TateSeries,
    frame: Frame,
    o: &OrbifoldData,
    areas: &BTreeMap<(Mono, Q), Q>,
    ages: &BTreeMap<Mono, Vec<Q>>,
) -> Vec<AreaCheck> {
    let mut out = vec![];
    for (mono, s) in p.iter() {
        let corners = q(mono.deg() as i64);
        for (e, _) in s.terms() {
            let m = areas.get(&(*mono, e.clone())).cloned().unwrap_or_else(|| match frame {
                Frame::Standard => e + q(3) * &corners,
                Frame::Tilde => e.clone(),
            });
            let no_ages = vec![];
            let ag = ages.get(mono).unwrap_or(&no_ages);
            let lhs = (&m - q(3) * &corners) * (-&o.chi) / q(8);
            let rhs = o.corner_weight(&mono.0) + age_excess(ag) - Q::one();
            out.push(AreaCheck { mono: *mono, t_exp: e.clone(), m, pass: lhs == rhs, lhs, rhs });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::novikov::qr;

    #[test]
    fn maslov_examples() {
        let o = OrbifoldData::new(2, 3, 7).unwrap();
        assert_eq!(maslov_cw(&CornerData::new([1, 1, 1], vec![], 1), &o), q(2));
        assert_eq!(maslov_cw(&CornerData::new([0, 0, 0], vec![], 8), &o), qr(-1, 21));
        let o3 = OrbifoldData::new(3, 3, 3).unwrap();
        assert_eq!(maslov_cw(&CornerData::new([1, 0, 0], vec![], 3), &o3), qr(2, 3));
        assert_eq!(maslov_de(&qr(2, 3), &[qr(1, 3)]), q(0));
        assert_eq!(maslov_de(&q(2), &[]), q(2));
        assert_eq!(maslov_de(&qr(4, 3), &[qr(2, 3)]), q(0));
        assert_eq!(virtual_dim(&q(2), 0, 3), q(0));
        assert_eq!(virtual_dim(&q(0), 1, 1), q(0));
        assert_eq!(virtual_dim(&q(2), 1, 6), q(2));
    }

    #[test]
    fn area_examples() {
        let o = OrbifoldData::new(2, 3, 7).unwrap();
        assert_eq!(area_multiple(&[1, 1, 1], &[], &o), AreaMultiple::Disc(q(1)));
        assert_eq!(area_multiple(&[1, 0, 0], &[], &o), AreaMultiple::NoDisc(q(-165)));
        let o3 = OrbifoldData::new(3, 3, 3).unwrap();
        assert_eq!(area_multiple(&[1, 0, 0], &[qr(1, 3)], &o3), AreaMultiple::Unconstrained { constraint_holds: true });
    }

    #[test]
    fn slot_examples() {
        let o = OrbifoldData::new(2, 3, 7).unwrap();
        let s = slot_enumerate(&o, &[], &q(0));
        let got: Vec<([u32; 3], Q)> = s.iter().map(|s| (s.n, s.exponent.clone().unwrap())).collect();
        assert_eq!(got, vec![([1, 1, 1], q(-8)), ([2, 0, 0], q(0)), ([0, 3, 0], q(0)), ([0, 0, 7], q(0))]);
        let o3 = OrbifoldData::new(3, 3, 3).unwrap();
        let s3 = slot_enumerate(&o3, &[], &q(0));
        assert_eq!(s3.len(), 10);
        assert!(s3.iter().all(|s| s.n.iter().sum::<u32>() == 3 && s.m.is_none()));
        let s4 = slot_enumerate(&o3, &[qr(1, 3)], &q(0));
        assert!(s4.iter().any(|s| s.n == [1, 0, 0] && s.ages == vec![qr(1, 3)]));
    }

    #[test]
    fn gauss_bonnet_examples() {
        for (a, b, c) in [(2, 3, 7), (3, 3, 3), (2, 2, 5), (3, 4, 5)] {
            let o = OrbifoldData::new(a, b, c).unwrap();
            assert!(upper_hemisphere_residual(&o).is_zero());
            assert!(minimal_triangle_residual(&o).is_zero());
            assert_eq!(solve_edge_curvature_from_cu(&o), edge_curvature(&o));
        }
    }
}
