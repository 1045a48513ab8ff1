//! Certificate versus exhaustive distance on a small code, and on a
//! deliberately broken one.

use twistcodes::codes::{self, GenMatrix};
use twistcodes::linalg::Matrix;
use twistcodes::twist::TwistAut;
use twistcodes::FieldTower;

fn report(name: &str, g: &GenMatrix) -> twistcodes::Result<()> {
    let cert = codes::certify_mrd(g)?;
    let d = codes::min_rank_distance(g, 1_000_000)?;
    println!(
        "{name}: n = {}, k = {}, distance = {d}, certified = {} ({} checked)",
        g.n(),
        g.k(),
        cert.certified,
        cert.count_checked
    );
    Ok(())
}

fn main() -> twistcodes::Result<()> {
    let tower = FieldTower::generate(3, 1, 2, None, 0)?;
    let phi = TwistAut::with_auto_lambda(&tower)?;
    let points: Vec<_> = phi.constant_basis().into_iter().take(3).collect();
    let g = codes::construct_mrd(&phi, &points, 2)?;
    let reduced = codes::fallback_reduction(&g)?;
    report("reduced twisted code", &reduced)?;

    // Two equal columns: rank-1 codewords exist.
    let m = reduced.matrix().unwrap();
    let broken = Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, if j == 1 { 0 } else { j })].clone());
    report("repeated column", &GenMatrix::finite(reduced.tower(), broken)?)?;
    println!("top field: {} elements", reduced.field().order());
    Ok(())
}
