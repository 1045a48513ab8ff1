//! The worked example over `F_27`: modulus `a^3 - a + 1`, `lambda = -1`,
//! evaluation points `(1, a, a^2, x, ax, a^2 x)` and the quartic in `b`
//! defining `F_{3^12}`.

use crate::codes::GenMatrix;
use crate::error::Result;
use crate::gf::{FieldElem, FieldTower, Level};
use crate::ratfun::{Poly, PolyRing, RatFun, RatFunField};
use crate::twist::TwistAut;

/// `a^3 - a + 1`, little-endian over `F_3`.
const CUBIC: [u32; 4] = [1, 2, 0, 1];

/// `b^4 + (2a^2+a+1) b^3 + (a^2+2) b^2 + (2a^2+a+1) b + (a+1)`; each
/// coefficient as its `F_3` digits in the basis `1, a, a^2`.
const QUARTIC: [[u32; 3]; 5] = [[1, 1, 0], [1, 1, 2], [2, 0, 1], [1, 1, 2], [1, 0, 0]];

/// `F_3 ⊂ F_3 ⊂ F_27`.
pub fn paper_s5_base() -> FieldTower {
    let cubic = CUBIC.iter().map(|&d| vec![d]).collect();
    FieldTower::from_moduli(3, &[vec![vec![0], vec![1]], cubic]).expect("a^3 - a + 1 is irreducible")
}

/// `F_3 ⊂ F_3 ⊂ F_27 ⊂ F_{3^12}`.
pub fn paper_s5_tower() -> FieldTower {
    let base = paper_s5_base();
    base.extend(&paper_quartic(&base)).expect("the quartic is irreducible over F_27")
}

/// The quartic as a polynomial over `F_27` of `tower`.
pub fn paper_quartic(tower: &FieldTower) -> Poly {
    let fqm = tower.field(Level::Fqm).expect("tower has F_27");
    let coeffs = QUARTIC
        .iter()
        .map(|c| fqm.from_digits(c).expect("valid F_27 digits"))
        .collect();
    PolyRing::new(fqm).from_coeffs(coeffs)
}

pub fn paper_lambda(tower: &FieldTower) -> FieldElem {
    tower.field(Level::Fqm).expect("tower has F_27").from_int(-1)
}

/// `(1, a, a^2, x, ax, a^2 x)`.
pub fn paper_points(funcs: &RatFunField) -> Vec<RatFun> {
    let fqm = funcs.field();
    let a = fqm.generator();
    let powers = [fqm.one(), a.clone(), fqm.mul(&a, &a)];
    (0..2)
        .flat_map(|e| powers.iter().map(move |c| funcs.monomial(c, e)))
        .collect()
}

/// The twisted automorphism with `lambda = -1` over `F_27`.
pub fn paper_twist() -> TwistAut {
    let tower = paper_s5_base();
    let lambda = paper_lambda(&tower);
    TwistAut::new(&tower, lambda).expect("-1 is a valid lambda over F_27")
}

/// The 3 x 6 generator over `F_27[x]`.
pub fn paper_generator() -> Result<GenMatrix> {
    let phi = paper_twist();
    let points = paper_points(phi.funcs());
    crate::codes::construct_mrd(&phi, &points, 3)
}

/// The generator reduced modulo the quartic, over `F_{3^12}`.
pub fn paper_reduced_generator() -> Result<GenMatrix> {
    let g = paper_generator()?;
    let f = paper_quartic(g.tower());
    crate::codes::reduce_code(&g, &f, false)
}
