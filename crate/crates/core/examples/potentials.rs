//! The built-in potentials and their energy reports.
use orbijac::critical::default_ck;
use orbijac::geometry::OrbifoldData;
use orbijac::potential::{w_22r, w_333, w_lead};
use orbijac::{q, qr};

fn main() -> orbijac::Result<()> {
    let pots = [
        ("lead (2,3,7)", w_lead(&OrbifoldData::new(2, 3, 7)?)),
        ("closed (3,3,3)", w_333(&q(120))?),
        ("(2,2,5), lambda 3/2", w_22r(5, &qr(3, 2), &default_ck(5))?),
    ];
    for (name, w) in &pots {
        let e = w.energy_report();
        println!("{name}: chi = {}, energy ok = {}", w.orbifold.chi, e.pass());
        println!("  {}", w.series);
    }
    // a bulk point insertion keeps the energy bookkeeping
    let bumped = pots[2].1.bulk_point_deform(&qr(1, 3))?;
    println!("with t = 1/3: {}", bumped.series);
    Ok(())
}
