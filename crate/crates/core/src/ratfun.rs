//! Polynomials and rational functions over a tower level.
//!
//! The rings here are used at two places: `F_{q^m}[x]` and its fraction
//! field `F_{q^m}(x)`, where the twisted automorphism acts, and the lower
//! levels when moduli are checked for irreducibility.

use rand::Rng;

use crate::error::{Error, Result};
use crate::gf::{format_term, Field, FieldElem, FieldTower, Level};
use crate::linalg::Matrix;

/// Dense little-endian polynomial; trailing zero coefficients are trimmed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub(crate) fn from_trimmed(mut coeffs: Vec<FieldElem>) -> Poly {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Option<&FieldElem> {
        self.coeffs.get(i)
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    /// True for a constant polynomial equal to one.
    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// `Field[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyRing {
    field: Field,
}

impl PolyRing {
    pub fn new(field: Field) -> PolyRing {
        PolyRing { field }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn zero(&self) -> Poly {
        Poly::zero()
    }

    pub fn one(&self) -> Poly {
        self.constant(&self.field.one())
    }

    pub fn x(&self) -> Poly {
        self.monomial(&self.field.one(), 1)
    }

    pub fn constant(&self, c: &FieldElem) -> Poly {
        self.monomial(c, 0)
    }

    /// `c x^e`.
    pub fn monomial(&self, c: &FieldElem, e: usize) -> Poly {
        let mut coeffs = vec![self.field.zero(); e + 1];
        coeffs[e] = self.field.lift(c);
        Poly::from_trimmed(coeffs)
    }

    /// Lifts every coefficient into the ring's field and trims.
    pub fn from_coeffs(&self, coeffs: Vec<FieldElem>) -> Poly {
        Poly::from_trimmed(coeffs.iter().map(|c| self.field.lift(c)).collect())
    }

    pub fn from_ints(&self, coeffs: &[i64]) -> Poly {
        Poly::from_trimmed(coeffs.iter().map(|&c| self.field.from_int(c)).collect())
    }

    pub fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        let zero = self.field.zero();
        Poly::from_trimmed(
            (0..n)
                .map(|i| {
                    self.field
                        .add(a.coeffs.get(i).unwrap_or(&zero), b.coeffs.get(i).unwrap_or(&zero))
                })
                .collect(),
        )
    }

    pub fn neg(&self, a: &Poly) -> Poly {
        Poly::from_trimmed(a.coeffs.iter().map(|c| self.field.neg(c)).collect())
    }

    pub fn sub(&self, a: &Poly, b: &Poly) -> Poly {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &FieldElem, a: &Poly) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_trimmed(a.coeffs.iter().map(|x| self.field.mul(c, x)).collect())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![self.field.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                out[i + j] = self.field.add(&out[i + j], &self.field.mul(x, y));
            }
        }
        Poly::from_trimmed(out)
    }

    pub fn divmod(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let inv_lead = self.field.inv(b.leading().unwrap()).unwrap();
        let mut rem: Vec<FieldElem> = a.coeffs.iter().map(|c| self.field.lift(c)).collect();
        if rem.len() <= db {
            return Ok((Poly::zero(), Poly::from_trimmed(rem)));
        }
        let mut quot = vec![self.field.zero(); rem.len() - db];
        for k in (db..rem.len()).rev() {
            if rem[k].is_zero() {
                continue;
            }
            let c = self.field.mul(&rem[k], &inv_lead);
            for (t, bt) in b.coeffs.iter().enumerate() {
                if bt.is_zero() {
                    continue;
                }
                let idx = k - db + t;
                rem[idx] = self.field.sub(&rem[idx], &self.field.mul(&c, bt));
            }
            quot[k - db] = c;
        }
        rem.truncate(db);
        Ok((Poly::from_trimmed(quot), Poly::from_trimmed(rem)))
    }

    pub fn rem(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        Ok(self.divmod(a, b)?.1)
    }

    /// Quotient of a division known to be exact.
    pub fn exact_div(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.divmod(a, b).expect("exact division by zero");
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn monic(&self, a: &Poly) -> Poly {
        match a.leading() {
            None => Poly::zero(),
            Some(l) => self.scale(&self.field.inv(l).unwrap(), a),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = self.rem(&a, &b).unwrap();
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn lcm(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = self.gcd(a, b);
        self.monic(&self.mul(&self.exact_div(a, &g), b))
    }

    pub fn eval(&self, a: &Poly, point: &FieldElem) -> FieldElem {
        a.coeffs.iter().rev().fold(self.field.zero(), |acc, c| {
            self.field.add(&self.field.mul(&acc, point), c)
        })
    }

    pub fn pow_mod(&self, base: &Poly, mut e: u128, modulus: &Poly) -> Result<Poly> {
        let mut acc = self.rem(&self.one(), modulus)?;
        let mut b = self.rem(base, modulus)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), modulus)?;
            }
            e >>= 1;
            if e > 0 {
                b = self.rem(&self.mul(&b, &b), modulus)?;
            }
        }
        Ok(acc)
    }

    /// Rabin's test: `f | x^(Q^n) - x` and `gcd(x^(Q^(n/l)) - x, f) = 1`
    /// for every prime `l | n`, with `Q` the order of the coefficient field.
    pub fn is_irreducible(&self, f: &Poly) -> bool {
        let Some(n) = f.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(f);
        let q = self.field.order();
        let x = self.x();
        // frob[i] = x^(Q^i) mod f
        let mut frob = vec![self.rem(&x, &f).unwrap()];
        for i in 1..=n {
            let next = self.pow_mod(&frob[i - 1], q, &f).unwrap();
            frob.push(next);
        }
        if frob[n] != frob[0] {
            return false;
        }
        crate::gf::prime_factors(n as u128).into_iter().all(|l| {
            let h = self.sub(&frob[n / l as usize], &x);
            self.gcd(&h, &f).degree() == Some(0)
        })
    }

    pub fn random<R: Rng + ?Sized>(&self, max_degree: usize, rng: &mut R) -> Poly {
        Poly::from_trimmed((0..=max_degree).map(|_| self.field.random(rng)).collect())
    }

    pub fn random_monic<R: Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Poly {
        let mut coeffs: Vec<FieldElem> = (0..degree).map(|_| self.field.random(rng)).collect();
        coeffs.push(self.field.one());
        Poly::from_trimmed(coeffs)
    }

    /// Samples monic polynomials of the given degree until one is irreducible.
    pub fn random_irreducible<R: Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Poly {
        assert!(degree >= 1);
        loop {
            let f = self.random_monic(degree, rng);
            if self.is_irreducible(&f) {
                return f;
            }
        }
    }

    /// Human-readable form in the variable `var`.
    pub fn format(&self, a: &Poly, var: &str) -> String {
        let tower = self.field.tower();
        let terms: Vec<String> = a
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| format_term(&tower.format(c), var, e))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A reduced fraction: `den` is monic and coprime to `num`; zero is `0/1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

impl RatFun {
    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }
}

/// The fraction field `Field(x)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatFunField {
    ring: PolyRing,
}

impl RatFunField {
    pub fn new(field: Field) -> RatFunField {
        RatFunField {
            ring: PolyRing::new(field),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> &Field {
        self.ring.field()
    }

    pub fn zero(&self) -> RatFun {
        self.from_poly(Poly::zero())
    }

    pub fn one(&self) -> RatFun {
        self.from_poly(self.ring.one())
    }

    pub fn x(&self) -> RatFun {
        self.from_poly(self.ring.x())
    }

    pub fn constant(&self, c: &FieldElem) -> RatFun {
        self.from_poly(self.ring.constant(c))
    }

    pub fn monomial(&self, c: &FieldElem, e: usize) -> RatFun {
        self.from_poly(self.ring.monomial(c, e))
    }

    pub fn from_poly(&self, p: Poly) -> RatFun {
        RatFun {
            num: self.ring.from_coeffs(p.coeffs),
            den: self.ring.one(),
        }
    }

    /// `num / den` in reduced form.
    pub fn fraction(&self, num: Poly, den: Poly) -> Result<RatFun> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(num, den))
    }

    fn normalize(&self, num: Poly, den: Poly) -> RatFun {
        if num.is_zero() {
            return self.zero();
        }
        let g = self.ring.gcd(&num, &den);
        let (num, den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (self.ring.exact_div(&num, &g), self.ring.exact_div(&den, &g))
        };
        let inv = self.field().inv(den.leading().unwrap()).unwrap();
        RatFun {
            num: self.ring.scale(&inv, &num),
            den: self.ring.scale(&inv, &den),
        }
    }

    /// Re-reduces an arbitrary pair; a no-op on values produced by this field.
    pub fn renormalize(&self, u: &RatFun) -> RatFun {
        self.normalize(u.num.clone(), u.den.clone())
    }

    pub fn add(&self, u: &RatFun, v: &RatFun) -> RatFun {
        if u.is_poly() && v.is_poly() {
            return self.from_poly(self.ring.add(&u.num, &v.num));
        }
        let num = self.ring.add(
            &self.ring.mul(&u.num, &v.den),
            &self.ring.mul(&v.num, &u.den),
        );
        self.normalize(num, self.ring.mul(&u.den, &v.den))
    }

    pub fn neg(&self, u: &RatFun) -> RatFun {
        RatFun {
            num: self.ring.neg(&u.num),
            den: u.den.clone(),
        }
    }

    pub fn sub(&self, u: &RatFun, v: &RatFun) -> RatFun {
        self.add(u, &self.neg(v))
    }

    pub fn mul(&self, u: &RatFun, v: &RatFun) -> RatFun {
        if u.is_poly() && v.is_poly() {
            return self.from_poly(self.ring.mul(&u.num, &v.num));
        }
        self.normalize(self.ring.mul(&u.num, &v.num), self.ring.mul(&u.den, &v.den))
    }

    pub fn scale(&self, c: &FieldElem, u: &RatFun) -> RatFun {
        if c.is_zero() {
            return self.zero();
        }
        RatFun {
            num: self.ring.scale(c, &u.num),
            den: u.den.clone(),
        }
    }

    pub fn inv(&self, u: &RatFun) -> Result<RatFun> {
        if u.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(u.den.clone(), u.num.clone()))
    }

    pub fn div(&self, u: &RatFun, v: &RatFun) -> Result<RatFun> {
        Ok(self.mul(u, &self.inv(v)?))
    }

    pub fn random<R: Rng + ?Sized>(&self, max_degree: usize, rng: &mut R) -> RatFun {
        let num = self.ring.random(max_degree, rng);
        let den = loop {
            let d = self.ring.random(max_degree, rng);
            if !d.is_zero() {
                break d;
            }
        };
        self.normalize(num, den)
    }

    pub fn format(&self, u: &RatFun) -> String {
        let num = self.ring.format(&u.num, "x");
        if u.is_poly() {
            num
        } else {
            format!("({num}) / ({})", self.ring.format(&u.den, "x"))
        }
    }
}

/// Image of `g` in `F_{q^{mr}} = F_{q^m}[x]/(f)` under `x -> b`.
pub fn reduce_mod(g: &Poly, f: &Poly, tower: &FieldTower) -> Result<FieldElem> {
    let top = tower.modulus(Level::Fqmr).ok_or(Error::MissingLevel(Level::Fqmr))?;
    let ring = PolyRing::new(tower.field(Level::Fqm)?);
    if ring.from_coeffs(f.coeffs().to_vec()) != top {
        return Err(Error::ModulusMismatch);
    }
    let rem = ring.rem(&ring.from_coeffs(g.coeffs().to_vec()), &top)?;
    let fqm = ring.field();
    let r = tower.r().unwrap();
    let coords: Vec<FieldElem> = (0..r)
        .map(|i| rem.coeff(i).cloned().unwrap_or_else(|| fqm.zero()))
        .collect();
    tower.from_expansion(&coords, Level::Fqmr)
}

/// Image of a rational function whose denominator does not vanish mod `f`.
pub fn reduce_ratfun_mod(g: &RatFun, f: &Poly, tower: &FieldTower) -> Result<FieldElem> {
    let num = reduce_mod(g.num(), f, tower)?;
    let den = reduce_mod(g.den(), f, tower)?;
    tower
        .field(Level::Fqmr)?
        .div(&num, &den)
        .map_err(|_| Error::NotReducible)
}

/// Exact determinant of a square matrix of rational functions.
///
/// Each row is multiplied by the lcm of its denominators, the resulting
/// polynomial matrix is eliminated fraction-free (Bareiss), and the row
/// multipliers are divided back out.
pub fn det_polymatrix(funcs: &RatFunField, m: &Matrix<RatFun>) -> RatFun {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return funcs.one();
    }
    let ring = funcs.ring();
    let mut scale = ring.one();
    let mut a: Matrix<Poly> = Matrix::filled(n, n, Poly::zero());
    for i in 0..n {
        let l = (0..n).fold(ring.one(), |acc, j| ring.lcm(&acc, m[(i, j)].den()));
        for j in 0..n {
            let e = &m[(i, j)];
            a[(i, j)] = ring.mul(e.num(), &ring.exact_div(&l, e.den()));
        }
        scale = ring.mul(&scale, &l);
    }
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n {
        if a[(k, k)].is_zero() {
            let Some(pr) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                return funcs.zero();
            };
            a.swap_rows(k, pr);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(
                    &ring.mul(&a[(k, k)], &a[(i, j)]),
                    &ring.mul(&a[(i, k)], &a[(k, j)]),
                );
                a[(i, j)] = ring.exact_div(&t, &prev);
            }
            a[(i, k)] = Poly::zero();
        }
        prev = a[(k, k)].clone();
    }
    let mut det = a[(n - 1, n - 1)].clone();
    if negate {
        det = ring.neg(&det);
    }
    funcs.fraction(det, scale).expect("row multipliers are nonzero")
}
