//! Picard iteration for flows of contracting vector fields and invariance of first integrals.
use orbijac::flowcc::flow_demo;
use orbijac::q;

fn main() -> orbijac::Result<()> {
    for r in flow_demo(&q(60))? {
        let f = &r.flow;
        println!("{:<12} eps {:<2} iterates {:<3} contraction {} integral eq {} invariant {}", r.name, f.eps, f.contraction.len(), f.contraction_ok(), f.integral_equation_holds, r.constant_in_s);
        println!("  Phi_1(x) = {}", f.at(&q(1))?.components()[0]);
    }
    Ok(())
}
