//! Seeded randomized laws shared by the property tests and the acceptance run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistcodes::codes::{gaussian_binomial, CrefIterator};
use twistcodes::linalg::{self, Matrix};
use twistcodes::twist::{self, LinOp, TwistAut};
use twistcodes::{FieldTower, Level, RatFun};

pub const CASES: usize = 200;

pub fn twists() -> Vec<TwistAut> {
    vec![
        twistcodes::presets::paper_twist(),
        TwistAut::with_auto_lambda(&FieldTower::generate(3, 1, 2, None, 1).unwrap()).unwrap(),
        TwistAut::with_auto_lambda(&FieldTower::generate(2, 2, 2, None, 2).unwrap()).unwrap(),
        TwistAut::with_auto_lambda(&FieldTower::generate(5, 1, 2, None, 3).unwrap()).unwrap(),
    ]
}

pub fn phi_is_a_ring_automorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for phi in twists() {
        let funcs = phi.funcs();
        assert_eq!(phi.apply(&funcs.one()), funcs.one());
        for _ in 0..CASES {
            let u = funcs.random(3, &mut rng);
            let v = funcs.random(3, &mut rng);
            assert_eq!(phi.apply(&funcs.add(&u, &v)), funcs.add(&phi.apply(&u), &phi.apply(&v)));
            assert_eq!(phi.apply(&funcs.mul(&u, &v)), funcs.mul(&phi.apply(&u), &phi.apply(&v)));
            if !v.is_zero() {
                let q = funcs.div(&u, &v).unwrap();
                assert_eq!(phi.apply(&q), funcs.div(&phi.apply(&u), &phi.apply(&v)).unwrap());
            }
            // phi has order m(q-1) on F_{q^m}(x)
            let period = phi.m() * (phi.q() - 1);
            assert_eq!(phi.apply_iter(&u, period), u);
        }
    }
}

/// A random element of `K`: a ratio of polynomials in the constant generator.
pub fn random_constant(phi: &TwistAut, rng: &mut ChaCha8Rng) -> RatFun {
    let funcs = phi.funcs();
    let t = phi.constant_generator();
    let fq = phi.tower().field(Level::Fq).unwrap();
    let poly_in_t = |rng: &mut ChaCha8Rng| {
        let mut acc = funcs.zero();
        let mut pow = funcs.one();
        for _ in 0..rng.gen_range(1..3) {
            let c = funcs.constant(&phi.field().lift(&fq.random(rng)));
            acc = funcs.add(&acc, &funcs.mul(&c, &pow));
            pow = funcs.mul(&pow, &t);
        }
        acc
    };
    let num = poly_in_t(rng);
    let mut den = poly_in_t(rng);
    while den.is_zero() {
        den = poly_in_t(rng);
    }
    funcs.div(&num, &den).unwrap()
}

pub fn closed_form_constants_match_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for phi in twists() {
        let funcs = phi.funcs();
        for _ in 0..CASES {
            let c = random_constant(&phi, &mut rng);
            assert!(phi.is_constant(&c));
            assert!(phi.is_fixed(&c));
            let g = funcs.random(4, &mut rng);
            assert_eq!(phi.is_constant(&g), phi.is_fixed(&g), "{}", funcs.format(&g));
            let shifted = funcs.add(&c, &funcs.mul(&c, &funcs.x()));
            assert_eq!(phi.is_constant(&shifted), phi.is_fixed(&shifted));
        }
    }
}

pub fn moore_invertibility_iff_independence() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for phi in twists() {
        let funcs = phi.funcs();
        let basis = phi.constant_basis();
        let fq = phi.tower().field(Level::Fq).unwrap();
        let p = phi.tower().p();
        for _ in 0..CASES {
            let n = rng.gen_range(1..=4.min(basis.len()));
            // F_q-combinations of the K-basis, each scaled by a nonzero constant:
            // independent over K iff the coefficient matrix has full rank.
            let coeffs: Vec<Vec<_>> = (0..n)
                .map(|_| (0..basis.len()).map(|_| if rng.gen_bool(0.4) { fq.random(&mut rng) } else { fq.zero() }).collect())
                .collect();
            let points: Vec<RatFun> = coeffs
                .iter()
                .map(|row| {
                    let mut acc = funcs.zero();
                    for (c, b) in row.iter().zip(&basis) {
                        acc = funcs.add(&acc, &funcs.mul(&funcs.constant(&phi.field().lift(c)), b));
                    }
                    let mut k = random_constant(&phi, &mut rng);
                    while k.is_zero() {
                        k = random_constant(&phi, &mut rng);
                    }
                    funcs.mul(&acc, &k)
                })
                .collect();
            let expect = linalg::rank(&fq, &Matrix::from_rows(coeffs)) == n;
            assert_eq!(twist::independent_over_k(&phi, &points), expect);
            if points.iter().enumerate().all(|(i, a)| !points[..i].contains(a)) {
                let m = twist::moore(&phi, &points).unwrap();
                let det = twistcodes::ratfun::det_polymatrix(funcs, &m.entries);
                assert_eq!(!det.is_zero(), expect, "p = {p}");
            }
        }
    }
}

pub fn kernel_dimension_bounded_by_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for phi in twists() {
        let funcs = phi.funcs();
        let basis = phi.constant_basis();
        for _ in 0..CASES {
            let deg = rng.gen_range(0..basis.len().min(4));
            let mut coeffs: Vec<RatFun> = (0..deg).map(|_| funcs.random(2, &mut rng)).collect();
            let mut lead = funcs.random(2, &mut rng);
            while lead.is_zero() {
                lead = funcs.random(2, &mut rng);
            }
            coeffs.push(lead);
            let op = LinOp::new(coeffs);
            let dim = twist::kernel_dim_on_span(&op, &phi, &basis).unwrap();
            assert!(dim <= deg, "kernel {dim} exceeds degree {deg}");
        }
    }
}

pub fn norm_is_multiplicative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, s, m, r) in [(3, 1, 3, Some(2)), (2, 2, 2, Some(3)), (5, 1, 2, None), (2, 1, 4, Some(2))] {
        let tower = FieldTower::generate(p, s, m, r, 9).unwrap();
        let fqm = tower.field(Level::Fqm).unwrap();
        let fq = tower.field(Level::Fq).unwrap();
        let q = tower.q();
        let exp = (q.pow(m as u32) - 1) / (q - 1);
        for _ in 0..CASES {
            let x = fqm.random(&mut rng);
            let y = fqm.random(&mut rng);
            let nx = tower.norm(&x).unwrap();
            let ny = tower.norm(&y).unwrap();
            assert_eq!(fq.lift(&tower.norm(&fqm.mul(&x, &y)).unwrap()), fq.mul(&nx, &ny));
            assert_eq!(fqm.lift(&nx), fqm.pow(&x, exp));
        }
    }
}

pub fn cref_counts_match_gaussian_binomials() {
    for (n, k, q) in [(2, 1, 2u32), (3, 2, 2), (4, 2, 3), (6, 3, 3)] {
        let tower = FieldTower::generate(q, 1, 1, None, 0).unwrap();
        let fq = tower.field(Level::Fq).unwrap();
        let it = CrefIterator::new(n, k, fq);
        let total = it.total();
        assert_eq!(total, gaussian_binomial(n, k, q as u128));
        assert_eq!(it.count() as u128, total, "n={n} k={k} q={q}");
    }
}
