//! Normal forms in the Jacobian ring, checked against the linear-algebra oracle.
use orbijac::geometry::OrbifoldData;
use orbijac::jacobian::{full_generators, oracle_normal_form, FullReducer};
use orbijac::potential::w_lead;
use orbijac::{q, Mono, NovikovScalar, TateSeries};

fn main() -> orbijac::Result<()> {
    let w = w_lead(&OrbifoldData::new(2, 3, 7)?);
    let fr = FullReducer::new(&w)?;
    let n = q(80);
    for m in [Mono::new(2, 0, 0), Mono::new(0, 4, 0), Mono::new(1, 2, 6), Mono::new(3, 3, 3)] {
        let p = TateSeries::term(m, NovikovScalar::one());
        let r = fr.reduce(&p, &n)?;
        let exact = r.defect(&p, &full_generators(&w)).is_zero();
        println!("{m} -> {}  (to T^{}, reconstruction {exact})", r.normal_form(), r.certified_precision);
        let d = r.multipliers.iter().map(|t| t.max_degree()).max().unwrap_or(0).max(m.deg());
        let o = oracle_normal_form(&p, &w, d, &n)?;
        let agree = r.basis.iter().all(|b| r.coeff_of(b).eq_mod(&o.coeff_of(&r.basis, b), &q(64)));
        println!("   oracle agrees mod T^64: {agree}");
    }
    Ok(())
}
