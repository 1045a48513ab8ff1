//! The twisted automorphism `phi(sum f_i x^i) = sum f_i^q lambda^i x^i` of
//! `F_{q^m}(x)`, its constants, operators `sum f_i phi^i`, and Moore matrices.

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, FieldTower, Level};
use crate::linalg::{self, Matrix};
use crate::ratfun::{det_polymatrix, Poly, RatFun, RatFunField};

/// `phi_{q,lambda}` acting on `F_{q^m}(x)`.
#[derive(Clone, Debug)]
pub struct TwistAut {
    tower: FieldTower,
    funcs: RatFunField,
    lambda: FieldElem,
    lambda_inv: FieldElem,
}

impl TwistAut {
    /// Rejects `lambda` unless `N(lambda)` has order `q - 1`.
    pub fn new(tower: &FieldTower, lambda: FieldElem) -> Result<TwistAut> {
        tower.validate(&lambda)?;
        if lambda.level() > Level::Fqm {
            return Err(Error::BadLambda("lambda must lie in F_q^m".into()));
        }
        if !tower.is_valid_lambda(&lambda) {
            return Err(Error::BadLambda(format!(
                "norm of {} does not have order q - 1",
                tower.format(&lambda)
            )));
        }
        let tower = tower.truncated(Level::Fqm);
        let fqm = tower.field(Level::Fqm)?;
        let lambda = fqm.lift(&lambda);
        let lambda_inv = fqm.inv(&lambda).expect("lambda is nonzero");
        Ok(TwistAut {
            funcs: RatFunField::new(fqm),
            tower,
            lambda,
            lambda_inv,
        })
    }

    /// Uses the first valid `lambda` in index order.
    pub fn with_auto_lambda(tower: &FieldTower) -> Result<TwistAut> {
        let lambda = tower.find_lambda()?;
        TwistAut::new(tower, lambda)
    }

    /// The tower up to `F_{q^m}`.
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn funcs(&self) -> &RatFunField {
        &self.funcs
    }

    pub fn field(&self) -> &Field {
        self.funcs.field()
    }

    pub fn lambda(&self) -> &FieldElem {
        &self.lambda
    }

    pub fn q(&self) -> usize {
        self.tower.q() as usize
    }

    pub fn m(&self) -> usize {
        self.tower.m()
    }

    /// `q = 2` is accepted, but there `x^(q-1) = x` and the grading by
    /// `x`-degree collapses; results are outside the usual hypotheses.
    pub fn outside_hypotheses(&self) -> bool {
        self.q() == 2
    }

    pub fn apply_poly(&self, f: &Poly) -> Poly {
        let fqm = self.field();
        let mut lam_pow = fqm.one();
        let mut out = Vec::with_capacity(f.coeffs().len());
        for c in f.coeffs() {
            out.push(fqm.mul(&fqm.frobenius(c, 1), &lam_pow));
            lam_pow = fqm.mul(&lam_pow, &self.lambda);
        }
        self.funcs.ring().from_coeffs(out)
    }

    pub fn apply(&self, g: &RatFun) -> RatFun {
        let num = self.apply_poly(g.num());
        if g.is_poly() {
            return self.funcs.from_poly(num);
        }
        self.funcs
            .fraction(num, self.apply_poly(g.den()))
            .expect("phi is injective")
    }

    /// `phi^i(g)`.
    pub fn apply_iter(&self, g: &RatFun, i: usize) -> RatFun {
        (0..i).fold(g.clone(), |acc, _| self.apply(&acc))
    }

    /// Direct check `phi(g) = g`.
    pub fn is_fixed(&self, g: &RatFun) -> bool {
        self.apply(g) == *g
    }

    /// Membership in `A = { sum c_i lambda^-i x^((q-1)i) : c_i in F_q }`.
    pub fn in_constant_ring(&self, f: &Poly) -> bool {
        let fqm = self.field();
        let step = self.q() - 1;
        f.coeffs().iter().enumerate().all(|(e, c)| {
            if c.is_zero() {
                return true;
            }
            if e % step != 0 {
                return false;
            }
            let scaled = fqm.mul(c, &fqm.pow(&self.lambda, (e / step) as u128));
            self.tower.section(&scaled, Level::Fq).is_some()
        })
    }

    /// Membership in the constant field `K = Frac(A)`, by the closed form.
    ///
    /// A reduced fraction with monic denominator of degree `(q-1) j` lies in
    /// `K` exactly when `lambda^-j` times numerator and denominator lie in `A`.
    pub fn is_constant(&self, g: &RatFun) -> bool {
        let closed = self.constant_closed_form(g);
        debug_assert_eq!(closed, self.is_fixed(g), "constant-field tests disagree");
        closed
    }

    fn constant_closed_form(&self, g: &RatFun) -> bool {
        let step = self.q() - 1;
        let deg = g.den().degree().unwrap();
        if !deg.is_multiple_of(step) {
            return false;
        }
        let s = self.field().pow(&self.lambda_inv, (deg / step) as u128);
        let ring = self.funcs.ring();
        self.in_constant_ring(&ring.scale(&s, g.num())) && self.in_constant_ring(&ring.scale(&s, g.den()))
    }

    /// `lambda^-1 x^(q-1)`, which generates `K` over `F_q`.
    pub fn constant_generator(&self) -> RatFun {
        self.funcs.monomial(&self.lambda_inv, self.q() - 1)
    }

    /// `{a_i x^j : 1 <= i <= m, 0 <= j <= q-2}`, ordered with `i` fastest;
    /// a basis of `F_{q^m}(x)` over `K`.
    pub fn constant_basis(&self) -> Vec<RatFun> {
        let basis = self.field().basis(Level::Fq);
        (0..self.q() - 1)
            .flat_map(|j| basis.iter().map(move |a| (a.clone(), j)))
            .map(|(a, j)| self.funcs.monomial(&a, j))
            .collect()
    }
}

/// `L = f_0 + f_1 phi + ... + f_k phi^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinOp {
    coeffs: Vec<RatFun>,
}

impl LinOp {
    pub fn new(mut coeffs: Vec<RatFun>) -> LinOp {
        while coeffs.last().is_some_and(RatFun::is_zero) {
            coeffs.pop();
        }
        LinOp { coeffs }
    }

    pub fn identity(funcs: &RatFunField) -> LinOp {
        LinOp::new(vec![funcs.one()])
    }

    pub fn coeffs(&self) -> &[RatFun] {
        &self.coeffs
    }

    /// `None` for the zero operator.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn apply(&self, phi: &TwistAut, g: &RatFun) -> RatFun {
        let funcs = phi.funcs();
        let mut image = g.clone();
        let mut acc = funcs.zero();
        for (i, f) in self.coeffs.iter().enumerate() {
            if i > 0 {
                image = phi.apply(&image);
            }
            if !f.is_zero() {
                acc = funcs.add(&acc, &funcs.mul(f, &image));
            }
        }
        acc
    }
}

/// `W[i][j] = phi^i(f_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreMatrix {
    pub points: Vec<RatFun>,
    pub entries: Matrix<RatFun>,
}

/// First `rows` rows of the Moore matrix of `points`.
pub fn moore_rows(phi: &TwistAut, points: &[RatFun], rows: usize) -> Matrix<RatFun> {
    let mut data: Vec<Vec<RatFun>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let row = match data.last() {
            None => points.to_vec(),
            Some(prev) => prev.iter().map(|g| phi.apply(g)).collect(),
        };
        debug_assert!(i == 0 || row.len() == points.len());
        data.push(row);
    }
    if data.is_empty() {
        return Matrix::new(0, points.len(), Vec::new());
    }
    Matrix::from_rows(data)
}

fn has_duplicates(points: &[RatFun]) -> bool {
    points
        .iter()
        .enumerate()
        .any(|(i, f)| points[..i].contains(f))
}

pub fn moore(phi: &TwistAut, points: &[RatFun]) -> Result<MooreMatrix> {
    if has_duplicates(points) {
        return Err(Error::DuplicatePoints);
    }
    Ok(MooreMatrix {
        points: points.to_vec(),
        entries: moore_rows(phi, points, points.len()),
    })
}

/// Independence over `K`, via the Moore determinant.
pub fn independent_over_k(phi: &TwistAut, points: &[RatFun]) -> bool {
    if has_duplicates(points) || points.iter().any(RatFun::is_zero) {
        return false;
    }
    let w = moore_rows(phi, points, points.len());
    !det_polymatrix(phi.funcs(), &w).is_zero()
}

/// `dim_{F_q} { v in F_q^n : sum v_j L(f_j) = 0 }` for `K`-independent points.
///
/// The images are brought to a common denominator and their numerators
/// expanded over `F_q`; the answer is the nullity of that matrix, and is at
/// most `deg L` for a nonzero operator.
pub fn kernel_dim_on_span(op: &LinOp, phi: &TwistAut, points: &[RatFun]) -> Result<usize> {
    if !independent_over_k(phi, points) {
        return Err(Error::DependentPoints);
    }
    let funcs = phi.funcs();
    let ring = funcs.ring();
    let images: Vec<RatFun> = points.iter().map(|f| op.apply(phi, f)).collect();
    let den = images.iter().fold(ring.one(), |acc, g| ring.lcm(&acc, g.den()));
    let nums: Vec<Poly> = images
        .iter()
        .map(|g| ring.mul(g.num(), &ring.exact_div(&den, g.den())))
        .collect();
    let len = nums.iter().filter_map(Poly::degree).max().map_or(0, |d| d + 1);
    let tower = phi.tower();
    let fq = tower.field(Level::Fq)?;
    let zero = phi.field().zero();
    let rows: Vec<Vec<FieldElem>> = nums
        .iter()
        .map(|p| {
            (0..len)
                .flat_map(|e| tower.expand(p.coeff(e).unwrap_or(&zero), Level::Fq).unwrap())
                .collect()
        })
        .collect();
    let n = points.len();
    if len == 0 {
        return Ok(n);
    }
    Ok(n - linalg::rank(&fq, &Matrix::from_rows(rows)))
}
