//! A generalised twisted Gabidulin code over F_{3^4} and its Frobenius
//! intersections, for comparison with the twisted-automorphism codes.

use twistcodes::codes;
use twistcodes::{FieldTower, Level};

fn main() -> twistcodes::Result<()> {
    let tower = FieldTower::generate(3, 1, 4, None, 0)?;
    let fqm = tower.field(Level::Fqm)?;
    let eta = fqm.generator();
    let points = fqm.basis(Level::Fq);
    let g = codes::twisted_gabidulin(&tower, 2, 0, 1, &eta, &points)?;
    for row in g.format_rows() {
        println!("  {}", row.join(" | "));
    }
    let d = codes::min_rank_distance(&g, 1_000_000)?;
    println!("distance = {d} (Singleton {})", g.n() - g.k() + 1);
    let dim = codes::intersection_dim(&g, &codes::frobenius_code(&g, 1)?)?;
    println!("dim(C ∩ C^q) = {dim} (at least k - 2 = 0 for twisted Gabidulin codes)");
    Ok(())
}
