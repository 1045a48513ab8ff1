//! The echelon-form certificate agrees with exhaustive distance, both ways.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistcodes::codes::{self, GenMatrix};
use twistcodes::linalg::Matrix;
use twistcodes::twist::TwistAut;
use twistcodes::FieldTower;

fn agree(g: &GenMatrix) -> bool {
    let cert = codes::certify_mrd(g).unwrap();
    let d = codes::min_rank_distance(g, 10_000).unwrap();
    assert_eq!(cert.certified, d == g.n() - g.k() + 1, "certificate {cert:?}, distance {d}");
    cert.certified
}

#[test]
fn reduced_twisted_codes() {
    let mut seen = (0, 0);
    for (seed, (n, k, r)) in [(2, 1, 2), (3, 1, 2), (3, 2, 2), (4, 2, 1), (4, 2, 2), (2, 2, 3), (4, 1, 1)]
        .into_iter()
        .enumerate()
    {
        let tower = FieldTower::generate(3, 1, 2, None, seed as u64).unwrap();
        let phi = TwistAut::with_auto_lambda(&tower).unwrap();
        let points: Vec<_> = phi.constant_basis().into_iter().take(n).collect();
        let g = codes::construct_mrd(&phi, &points, k).unwrap();
        let f = tower.irreducible(r, seed as u64).unwrap();
        let reduced = codes::reduce_code(&g, &f, true).unwrap();
        if agree(&reduced) {
            seen.0 += 1;
        } else {
            seen.1 += 1;
        }
    }
    assert!(seen.0 > 0);
}

#[test]
fn random_and_broken_generators() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let tower = FieldTower::generate(3, 1, 2, Some(2), 0).unwrap();
    let top = tower.field(tower.top()).unwrap();
    let mut failures = 0;
    for _ in 0..12 {
        let k = rng.gen_range(1..=2);
        let n = rng.gen_range(k..=3);
        let mut m = Matrix::from_fn(k, n, |_, _| top.random(&mut rng));
        if rng.gen_bool(0.3) && n > 1 {
            for i in 0..k {
                m[(i, n - 1)] = m[(i, 0)].clone();
            }
        }
        let g = GenMatrix::finite(&tower, m).unwrap();
        if !agree(&g) {
            failures += 1;
        }
    }
    assert!(failures > 0, "expected at least one non-MRD instance");
}
