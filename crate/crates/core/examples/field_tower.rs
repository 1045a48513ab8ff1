//! Build a tower F_3 ⊂ F_9 ⊂ F_{9^2}, do some arithmetic, and list twist parameters.

use twistcodes::{FieldTower, Level};

fn main() -> twistcodes::Result<()> {
    let tower = FieldTower::generate(3, 2, 2, None, 0)?;
    let fqm = tower.field(Level::Fqm)?;
    let a = fqm.generator();
    let b = fqm.add(&a, &fqm.one());

    println!("F_q^m has {} elements", fqm.order());
    println!("a = {}, a + 1 = {}", tower.format(&a), tower.format(&b));
    println!("a * (a + 1) = {}", tower.format(&fqm.mul(&a, &b)));
    println!("(a + 1)^-1 = {}", tower.format(&fqm.inv(&b).unwrap()));
    println!("N(a) = {}", tower.format(&tower.norm(&a)?));

    let lambdas: Vec<String> = tower.lambdas().take(5).map(|l| tower.format(&l)).collect();
    println!("first valid lambdas: {}", lambdas.join(", "));
    Ok(())
}
