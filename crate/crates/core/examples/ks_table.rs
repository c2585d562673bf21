//! Kodaira-Spencer images for the (3,3,3) sphere, with the frame cross-check.
use orbijac::ks333::{crosscheck_frames, ks_table, leading_contract, ROWS};
use orbijac::q;

fn main() -> orbijac::Result<()> {
    let n = q(100);
    let t = ks_table(&n)?;
    for row in ROWS {
        println!("{row:>7} -> {}", t.get(row));
    }
    let f = crosscheck_frames(&n)?;
    println!("sign dictionary {:?}, mismatches {}", f.dictionary, f.mismatches());
    for c in leading_contract(&t) {
        println!("{}: valuation-zero part {:?}", c.row, c.valuation_zero);
    }
    Ok(())
}
