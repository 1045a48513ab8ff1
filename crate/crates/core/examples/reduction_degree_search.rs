//! How small can the reduction degree r be? Try seeded moduli upward from
//! q - 1 until a reduction certifies.

use twistcodes::codes;
use twistcodes::twist::TwistAut;
use twistcodes::FieldTower;

fn main() -> twistcodes::Result<()> {
    let tower = FieldTower::generate(3, 1, 2, None, 0)?;
    let phi = TwistAut::with_auto_lambda(&tower)?;
    let g = codes::construct_mrd(&phi, &phi.constant_basis(), 2)?;
    println!("n = {}, k = {}, fallback degree = {}", g.n(), g.k(), codes::fallback_degree(3, 2));
    for a in codes::search_reduction_degree(&g, Some(1), 4, 3)? {
        println!(
            "r = {}, seed = {}: certified = {} ({} of {})",
            a.r, a.seed, a.certificate.certified, a.certificate.count_checked, a.certificate.total
        );
    }
    Ok(())
}
