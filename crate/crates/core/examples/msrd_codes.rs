//! Maximum sum-rank distance codes and their Gabidulin / Reed-Solomon ends.

use twistcodes::msrd::{self, SumRankProfile};
use twistcodes::twist::TwistAut;
use twistcodes::FieldTower;

fn main() -> twistcodes::Result<()> {
    let tower = FieldTower::generate(3, 1, 2, None, 0)?;
    let phi = TwistAut::with_auto_lambda(&tower)?;
    for (blocks, k) in [(vec![2, 2], 2), (vec![2], 1), (vec![1, 1], 1), (vec![2, 1], 2)] {
        let profile = SumRankProfile::new(blocks)?;
        let code = msrd::construct_msrd(&profile, k, &phi)?;
        let rep = msrd::distance_report(&code, 1_000_000)?;
        println!(
            "profile {:?}, k = {k}: distance {} of {} (MSRD: {})",
            profile.blocks(),
            rep.distance,
            rep.singleton,
            rep.msrd
        );
    }
    Ok(())
}
