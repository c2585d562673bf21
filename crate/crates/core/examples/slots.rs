//! Enumerate admissible disc slots and the T-exponents they carry.
use orbijac::geometry::{slot_enumerate, OrbifoldData};
use orbijac::{q, qr};

fn main() -> orbijac::Result<()> {
    let o = OrbifoldData::new(2, 2, 3)?;
    for s in slot_enumerate(&o, &[qr(1, 3)], &q(12)) {
        let ages: Vec<String> = s.ages.iter().map(|a| a.to_string()).collect();
        let e = s.exponent.map_or("-".into(), |e| e.to_string());
        println!("corners {:?} ages [{}] T-exponent {e}", s.n, ages.join(", "));
    }
    Ok(())
}
