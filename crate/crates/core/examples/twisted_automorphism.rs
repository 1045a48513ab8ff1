//! The twisted automorphism over F_27 with lambda = -1: images, fixed
//! elements, and the Moore matrix of the standard basis.

use twistcodes::presets;
use twistcodes::twist;

fn main() -> twistcodes::Result<()> {
    let phi = presets::paper_twist();
    let funcs = phi.funcs();
    let a = funcs.constant(&phi.field().generator());
    let ax = funcs.mul(&a, &funcs.x());

    println!("phi(ax)   = {}", funcs.format(&phi.apply(&ax)));
    println!("phi^2(ax) = {}", funcs.format(&phi.apply_iter(&ax, 2)));
    println!("phi^3(ax) = {}", funcs.format(&phi.apply_iter(&ax, 3)));

    let t = phi.constant_generator();
    println!("constant generator {} is fixed: {}", funcs.format(&t), phi.is_fixed(&t));

    let points = presets::paper_points(funcs);
    println!("basis independent over K: {}", twist::independent_over_k(&phi, &points));
    let m = twist::moore(&phi, &points)?;
    for row in m.entries.to_rows().iter().take(3) {
        let cells: Vec<String> = row.iter().map(|g| funcs.format(g)).collect();
        println!("  {}", cells.join("  "));
    }
    Ok(())
}
