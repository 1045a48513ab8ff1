//! Optimal Ferrers diagram codes from block profiles, plus the bound.

use twistcodes::ferrers::{self, BlockProfile, FerrersDiagram};
use twistcodes::twist::TwistAut;
use twistcodes::FieldTower;

fn main() -> twistcodes::Result<()> {
    let diagram = FerrersDiagram::new(vec![2, 2, 3, 5])?;
    println!("bound for {:?}, d = 2: {}", diagram.heights(), ferrers::es_bound(&diagram, 2)?);

    let tower = FieldTower::generate(3, 1, 2, None, 0)?;
    let phi = TwistAut::with_auto_lambda(&tower)?;
    let profile = BlockProfile::new(vec![(2, 2), (4, 2)])?;
    let code = ferrers::construct_ferrers(&profile, 2, &phi)?;
    let report = ferrers::verify_ferrers(&code, 2, 100_000, 0)?;
    println!(
        "profile {:?}, d = 2: K = {}, bound = {}, min rank = {:?}, {:?}",
        profile.blocks(),
        report.dimension,
        report.bound,
        report.min_rank,
        report.mode
    );

    let lowered = FerrersDiagram::new(vec![1, 2, 3, 4])?;
    let code = ferrers::construct_ferrers_general(&profile, &lowered, 2, &phi)?;
    let report = ferrers::verify_ferrers(&code, 2, 100_000, 0)?;
    println!("heights {:?}: K = {}, optimal = {}", lowered.heights(), report.dimension, report.optimal);
    Ok(())
}
