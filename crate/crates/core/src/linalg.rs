//! Incremental sparse row echelon over the rationals.

use std::collections::{BTreeMap, HashMap};

use num::Zero;

use crate::novikov::Q;

pub type SparseVec = BTreeMap<usize, Q>;

/// Echelon basis keyed by leading index; each stored vector remembers the
/// combination of inserted vectors it came from when tracking is enabled.
#[derive(Default)]
pub struct Echelon {
    rows: HashMap<usize, (SparseVec, SparseVec)>,
    track: bool,
}

fn axpy(dst: &mut SparseVec, k: &Q, src: &SparseVec) {
    for (i, v) in src {
        let e = dst.entry(*i).or_insert_with(Q::zero);
        *e += k * v;
        if e.is_zero() {
            dst.remove(i);
        }
    }
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Self { rows: HashMap::new(), track }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduce `v` (with its combination `c`) until its leading index is not a pivot.
    fn reduce(&self, v: &mut SparseVec, c: &mut SparseVec) {
        while let Some((&l, lv)) = v.iter().next() {
            let Some((row, comb)) = self.rows.get(&l) else { return };
            let k = -(lv / &row[&l]);
            axpy(v, &k, row);
            if self.track {
                axpy(c, &k, comb);
            }
        }
    }

    /// Insert vector number `id`; returns false when it was already in the span.
    pub fn insert(&mut self, id: usize, mut v: SparseVec) -> bool {
        let mut c = SparseVec::new();
        if self.track {
            c.insert(id, num::One::one());
        }
        self.reduce(&mut v, &mut c);
        match v.keys().next().copied() {
            None => false,
            Some(l) => {
                self.rows.insert(l, (v, c));
                true
            }
        }
    }

    /// Express `v` as a combination of inserted vectors, if it lies in their span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let mut r = v.clone();
        let mut c = SparseVec::new();
        self.reduce(&mut r, &mut c);
        if r.is_empty() {
            // v + sum c_k x_k = 0
            Some(c.into_iter().map(|(i, x)| (i, -x)).collect())
        } else {
            None
        }
    }
}
