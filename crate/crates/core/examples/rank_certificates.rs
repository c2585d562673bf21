//! Certified ranks of Jacobian rings for several orbifold spheres.
use orbijac::geometry::OrbifoldData;
use orbijac::jacobian::rank;
use orbijac::potential::{w_333, w_lead};
use orbijac::q;

fn main() -> orbijac::Result<()> {
    let n = q(300);
    for [a, b, c] in [[2, 2, 2], [2, 2, 5], [2, 3, 3], [2, 3, 7], [2, 4, 4], [3, 3, 3], [3, 4, 5]] {
        let o = OrbifoldData::new(a, b, c)?;
        let r = rank(&w_lead(&o), &n)?;
        println!("({a},{b},{c}) rank {:>2}  a+b+c-1 = {:>2}  {:?}", r.rank, a + b + c - 1, r.certificate);
    }
    let r = rank(&w_333(&q(316))?, &n)?;
    println!("closed (3,3,3) rank {} {:?}", r.rank, r.certificate);
    Ok(())
}
