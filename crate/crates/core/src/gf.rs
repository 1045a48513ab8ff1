//! Exact arithmetic in the tower `F_p ⊂ F_q ⊂ F_{q^m} ⊂ F_{q^{mr}}`.
//!
//! Every element is stored as a flat little-endian vector of `F_p` digits
//! with respect to the product basis of the tower, the lower-level index
//! varying fastest. An element of `F_{q^{mr}}` with coordinates
//! `c_0 + c_1 b + ... + c_{r-1} b^{r-1}` (each `c_j` in `F_{q^m}`) is the
//! concatenation of the digit vectors of the `c_j`. Two consequences drive
//! the rest of the crate:
//!
//! - embedding a lower level into a higher one is zero padding;
//! - expanding over an intermediate level is chunking.
//!
//! Multiplication is schoolbook polynomial multiplication at each level
//! followed by reduction modulo that level's monic modulus, recursing into
//! the level below for coefficient products.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};
use crate::ratfun::{Poly, PolyRing};

pub type Digits = SmallVec<[u32; 16]>;

/// A level of the tower.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    /// The prime field `F_p`.
    Fp,
    /// `F_q = F_{p^s}`.
    Fq,
    /// `F_{q^m}`, the coefficient field of the rational functions.
    Fqm,
    /// `F_{q^{mr}} = F_{q^m}[x]/(f(x))`, present only after a reduction.
    Fqmr,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::Fp, Level::Fq, Level::Fqm, Level::Fqmr];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Level> {
        Self::ALL.get(i).copied()
    }

    pub fn below(self) -> Option<Level> {
        self.index().checked_sub(1).and_then(Level::from_index)
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Fp => "F_p",
            Level::Fq => "F_q",
            Level::Fqm => "F_q^m",
            Level::Fqmr => "F_q^mr",
        }
    }

    /// Symbol used when printing elements: the adjoined root of this level's modulus.
    fn symbol(self) -> &'static str {
        match self {
            Level::Fp => "",
            Level::Fq => "w",
            Level::Fqm => "a",
            Level::Fqmr => "b",
        }
    }
}

/// An element of one level of a [`FieldTower`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElem {
    level: Level,
    digits: Digits,
}

impl FieldElem {
    pub fn level(&self) -> Level {
        self.level
    }

    /// Flat `F_p` digits, lower-level index fastest.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    pub fn is_one(&self) -> bool {
        self.digits[0] == 1 && self.digits[1..].iter().all(|&d| d == 0)
    }

    /// True when the element lies in the prime field (all digits past the first are zero).
    pub fn is_prime_scalar(&self) -> bool {
        self.digits[1..].iter().all(|&d| d == 0)
    }
}

struct LevelData {
    /// Degree over the level below (1 for `F_p`).
    degree: usize,
    /// Degree over `F_p`.
    width: usize,
    order: u128,
    /// Monic modulus over the level below, `degree + 1` coefficients.
    modulus: Vec<Digits>,
    /// `-c_0, ..., -c_{d-1}` flattened; `x^d = sum neg_tail[t] x^t`.
    neg_tail: Vec<u32>,
}

struct TowerInner {
    p: u32,
    levels: Vec<LevelData>,
}

/// The finite-field tower. Cheap to clone; immutable after construction.
#[derive(Clone)]
pub struct FieldTower {
    inner: Arc<TowerInner>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.levels.len() == other.inner.levels.len()
                && self
                    .inner
                    .levels
                    .iter()
                    .zip(&other.inner.levels)
                    .all(|(a, b)| a.modulus == b.modulus))
    }
}

impl Eq for FieldTower {}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldTower(p={}, s={}, m={}, r={:?})",
            self.p(),
            self.s(),
            self.m(),
            self.r()
        )
    }
}

/// Binary operations accepted by [`FieldTower::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub(crate) fn prime_factors(mut n: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 2u128;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q` into `(p, s)`.
pub fn prime_power(q: u64) -> Option<(u32, usize)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut s = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        s += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, s))
}

impl TowerInner {
    fn prime_only(p: u32) -> TowerInner {
        TowerInner {
            p,
            levels: vec![LevelData {
                degree: 1,
                width: 1,
                order: p as u128,
                modulus: Vec::new(),
                neg_tail: Vec::new(),
            }],
        }
    }

    fn add_assign(&self, acc: &mut [u32], x: &[u32]) {
        let p = self.p as u64;
        for (a, &b) in acc.iter_mut().zip(x) {
            *a = ((*a as u64 + b as u64) % p) as u32;
        }
    }

    fn mul_slices(&self, li: usize, a: &[u32], b: &[u32], out: &mut [u32]) {
        let p = self.p as u64;
        if li == 0 {
            out[0] = ((a[0] as u64 * b[0] as u64) % p) as u32;
            return;
        }
        let lv = &self.levels[li];
        let d = lv.degree;
        if d == 1 {
            return self.mul_slices(li - 1, a, b, out);
        }
        let w = self.levels[li - 1].width;
        let mut acc: SmallVec<[u32; 64]> = smallvec![0; (2 * d - 1) * w];
        let mut prod: Digits = smallvec![0; w];
        for i in 0..d {
            let ai = &a[i * w..(i + 1) * w];
            if ai.iter().all(|&v| v == 0) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * w..(j + 1) * w];
                if bj.iter().all(|&v| v == 0) {
                    continue;
                }
                self.mul_slices(li - 1, ai, bj, &mut prod);
                self.add_assign(&mut acc[(i + j) * w..(i + j + 1) * w], &prod);
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c: Digits = acc[k * w..(k + 1) * w].into();
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            for t in 0..d {
                let nt = &lv.neg_tail[t * w..(t + 1) * w];
                if nt.iter().all(|&v| v == 0) {
                    continue;
                }
                self.mul_slices(li - 1, &c, nt, &mut prod);
                self.add_assign(&mut acc[(k - d + t) * w..(k - d + t + 1) * w], &prod);
            }
        }
        out.copy_from_slice(&acc[..d * w]);
    }

    fn push_level(&mut self, modulus: Vec<Digits>) {
        let below = self.levels.last().expect("prime level always present");
        let degree = modulus.len() - 1;
        let width = below.width * degree;
        let order = below.order.pow(degree as u32);
        let p = self.p;
        let neg_tail = modulus[..degree]
            .iter()
            .flat_map(|c| c.iter().map(move |&d| (p - d) % p))
            .collect();
        self.levels.push(LevelData {
            degree,
            width,
            order,
            modulus,
            neg_tail,
        });
    }
}

impl FieldTower {
    /// Builds a tower from explicit moduli.
    ///
    /// `moduli[i]` is the monic modulus of level `i + 1` over level `i`, as
    /// little-endian coefficients each given by its flat `F_p` digits. Two
    /// moduli give `F_p ⊂ F_q ⊂ F_{q^m}`; a third adds `F_{q^{mr}}`. Every
    /// modulus is checked for irreducibility.
    pub fn from_moduli(p: u32, moduli: &[Vec<Vec<u32>>]) -> Result<FieldTower> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidTower(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidTower("characteristic too large".into()));
        }
        if !(2..=3).contains(&moduli.len()) {
            return Err(Error::InvalidTower(format!(
                "expected 2 or 3 moduli, got {}",
                moduli.len()
            )));
        }
        let mut tower = FieldTower {
            inner: Arc::new(TowerInner::prime_only(p)),
        };
        for (i, modulus) in moduli.iter().enumerate() {
            let below = Level::from_index(i).unwrap();
            let coeffs = modulus
                .iter()
                .map(|c| tower.field(below)?.from_digits(c))
                .collect::<Result<Vec<_>>>()?;
            let ring = PolyRing::new(tower.field(below)?);
            let poly = ring.from_coeffs(coeffs);
            tower = tower.pushed(&poly, &ring)?;
        }
        Ok(tower)
    }

    /// Builds a tower with seeded random irreducible moduli.
    pub fn generate(p: u32, s: usize, m: usize, r: Option<usize>, seed: u64) -> Result<FieldTower> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidTower(format!("{p} is not prime")));
        }
        if s == 0 || m == 0 || r == Some(0) {
            return Err(Error::InvalidTower("extension degrees must be positive".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut tower = FieldTower {
            inner: Arc::new(TowerInner::prime_only(p)),
        };
        for (i, degree) in [Some(s), Some(m), r].into_iter().enumerate() {
            let Some(degree) = degree else { break };
            let below = Level::from_index(i).unwrap();
            let ring = PolyRing::new(tower.field(below)?);
            let modulus = if degree == 1 {
                ring.x()
            } else {
                ring.random_irreducible(degree, &mut rng)
            };
            tower = tower.pushed(&modulus, &ring)?;
        }
        Ok(tower)
    }

    /// Adjoins a root `b` of `f` (monic irreducible over `F_{q^m}`) as the top level.
    pub fn extend(&self, f: &Poly) -> Result<FieldTower> {
        if self.r().is_some() {
            return Err(Error::InvalidTower("tower already has a top extension".into()));
        }
        let ring = PolyRing::new(self.field(Level::Fqm)?);
        let f = ring.from_coeffs(f.coeffs().to_vec());
        self.pushed(&f, &ring)
    }

    /// The tower cut off above `level`.
    pub fn truncated(&self, level: Level) -> FieldTower {
        if level.index() + 1 >= self.inner.levels.len() {
            return self.clone();
        }
        let mut inner = TowerInner::prime_only(self.p());
        for lv in &self.inner.levels[1..=level.index()] {
            inner.push_level(lv.modulus.clone());
        }
        FieldTower {
            inner: Arc::new(inner),
        }
    }

    fn pushed(&self, modulus: &Poly, ring: &PolyRing) -> Result<FieldTower> {
        let degree = modulus
            .degree()
            .filter(|&d| d >= 1)
            .ok_or_else(|| Error::InvalidTower("modulus must have positive degree".into()))?;
        if !modulus.leading().is_some_and(|c| c.is_one()) {
            return Err(Error::InvalidTower("modulus must be monic".into()));
        }
        let below_order = self.inner.levels.last().unwrap().order;
        if below_order.checked_pow(degree as u32).is_none()
            || self.inner.levels.last().unwrap().width * degree > 127
        {
            return Err(Error::InvalidTower("field too large".into()));
        }
        if !ring.is_irreducible(modulus) {
            return Err(Error::NotIrreducible);
        }
        let mut inner = TowerInner::prime_only(self.p());
        for lv in &self.inner.levels[1..] {
            inner.push_level(lv.modulus.clone());
        }
        inner.push_level(modulus.coeffs().iter().map(|c| c.digits.clone()).collect());
        Ok(FieldTower {
            inner: Arc::new(inner),
        })
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }

    pub fn s(&self) -> usize {
        self.inner.levels[1].degree
    }

    pub fn m(&self) -> usize {
        self.inner.levels[2].degree
    }

    pub fn r(&self) -> Option<usize> {
        self.inner.levels.get(3).map(|l| l.degree)
    }

    /// `q = p^s`.
    pub fn q(&self) -> u128 {
        self.inner.levels[1].order
    }

    pub fn top(&self) -> Level {
        Level::from_index(self.inner.levels.len() - 1).unwrap()
    }

    pub fn has_level(&self, level: Level) -> bool {
        level.index() < self.inner.levels.len()
    }

    fn data(&self, level: Level) -> Result<&LevelData> {
        self.inner
            .levels
            .get(level.index())
            .ok_or(Error::MissingLevel(level))
    }

    /// Degree of `level` over `F_p`.
    pub fn width(&self, level: Level) -> usize {
        self.inner.levels[level.index()].width
    }

    /// Degree of `level` over the level directly below it.
    pub fn degree(&self, level: Level) -> usize {
        self.inner.levels[level.index()].degree
    }

    pub fn order(&self, level: Level) -> u128 {
        self.inner.levels[level.index()].order
    }

    /// The monic modulus defining `level` over the level below.
    pub fn modulus(&self, level: Level) -> Option<Poly> {
        let below = level.below()?;
        let lv = self.inner.levels.get(level.index())?;
        let coeffs = lv
            .modulus
            .iter()
            .map(|d| FieldElem {
                level: below,
                digits: d.clone(),
            })
            .collect();
        Some(Poly::from_trimmed(coeffs))
    }

    pub fn field(&self, level: Level) -> Result<Field> {
        self.data(level)?;
        Ok(Field {
            tower: self.clone(),
            level,
        })
    }

    /// Checks that `x` is a well-formed element of this tower.
    pub fn validate(&self, x: &FieldElem) -> Result<()> {
        let lv = self.data(x.level)?;
        if x.digits.len() != lv.width {
            return Err(Error::InvalidElement(format!(
                "expected {} digits at {}, got {}",
                lv.width,
                x.level.name(),
                x.digits.len()
            )));
        }
        if x.digits.iter().any(|&d| d >= self.p()) {
            return Err(Error::InvalidElement(format!("digit out of range mod {}", self.p())));
        }
        Ok(())
    }

    /// Moves `x` to `level`: zero padding upward, or a checked section downward.
    pub fn embed(&self, x: &FieldElem, level: Level) -> Result<FieldElem> {
        self.validate(x)?;
        let width = self.data(level)?.width;
        if level >= x.level {
            let mut digits = x.digits.clone();
            digits.resize(width, 0);
            Ok(FieldElem { level, digits })
        } else {
            self.section(x, level).ok_or_else(|| {
                Error::LevelMismatch(format!("element does not lie in {}", level.name()))
            })
        }
    }

    /// The element viewed in the subfield `level`, if it lies there.
    pub fn section(&self, x: &FieldElem, level: Level) -> Option<FieldElem> {
        let width = self.inner.levels.get(level.index())?.width;
        if x.digits.len() < width || x.digits[width..].iter().any(|&d| d != 0) {
            return None;
        }
        Some(FieldElem {
            level,
            digits: x.digits[..width].into(),
        })
    }

    /// Checked binary arithmetic; the result lives at the higher operand level.
    pub fn arith(&self, x: &FieldElem, y: &FieldElem, op: ArithOp) -> Result<FieldElem> {
        self.validate(x)?;
        self.validate(y)?;
        let field = self.field(x.level.max(y.level))?;
        Ok(match op {
            ArithOp::Add => field.add(x, y),
            ArithOp::Sub => field.sub(x, y),
            ArithOp::Mul => field.mul(x, y),
            ArithOp::Div => field.div(x, y)?,
        })
    }

    pub fn pow(&self, x: &FieldElem, e: u128) -> Result<FieldElem> {
        self.validate(x)?;
        Ok(self.field(x.level)?.pow(x, e))
    }

    /// Norm of `F_{q^m}/F_q`: `x^((q^m - 1)/(q - 1))`, returned in `F_q`.
    pub fn norm(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.level > Level::Fqm {
            return Err(Error::LevelMismatch(
                "norm is defined on F_q^m".into(),
            ));
        }
        let fqm = self.field(Level::Fqm)?;
        let x = self.embed(x, Level::Fqm)?;
        let e = (self.order(Level::Fqm) - 1) / (self.q() - 1);
        let n = fqm.pow(&x, e);
        Ok(self
            .section(&n, Level::Fq)
            .expect("norm of F_q^m/F_q lies in F_q"))
    }

    /// Multiplicative order of a nonzero element in its own level.
    pub fn mult_order(&self, x: &FieldElem) -> Result<u128> {
        self.validate(x)?;
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let field = self.field(x.level)?;
        let group = field.order() - 1;
        let mut order = group;
        for l in prime_factors(group) {
            while order % l == 0 && field.pow(x, order / l).is_one() {
                order /= l;
            }
        }
        Ok(order)
    }

    /// True when `N(lambda)` has multiplicative order exactly `q - 1`.
    pub fn is_valid_lambda(&self, lambda: &FieldElem) -> bool {
        if lambda.is_zero() || lambda.level > Level::Fqm {
            return false;
        }
        match self.norm(lambda) {
            Ok(n) => self.mult_order(&n).ok() == Some(self.q() - 1),
            Err(_) => false,
        }
    }

    /// All valid `lambda` in increasing index order (see [`Field::from_index`]).
    pub fn lambdas(&self) -> impl Iterator<Item = FieldElem> + '_ {
        let fqm = self.field(Level::Fqm).expect("F_q^m always present");
        (1..fqm.order())
            .map(move |i| fqm.from_index(i))
            .filter(move |l| self.is_valid_lambda(l))
    }

    /// The first `lambda` in index order whose norm has order `q - 1`.
    ///
    /// For `q = 2` the order condition is vacuous and this returns `1`.
    pub fn find_lambda(&self) -> Result<FieldElem> {
        self.lambdas().next().ok_or(Error::NotFound)
    }

    /// A monic irreducible polynomial of degree `r` over `F_{q^m}`, sampled
    /// with a seeded generator.
    pub fn irreducible(&self, r: usize, seed: u64) -> Result<Poly> {
        if r == 0 {
            return Err(Error::BadDimension("degree must be positive".into()));
        }
        let ring = PolyRing::new(self.field(Level::Fqm)?);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(ring.random_irreducible(r, &mut rng))
    }

    /// Coordinates of `x` over `base` in the canonical product basis.
    pub fn expand(&self, x: &FieldElem, base: Level) -> Result<Vec<FieldElem>> {
        self.validate(x)?;
        if base > x.level {
            return Err(Error::LevelMismatch(format!(
                "cannot expand an element of {} over {}",
                x.level.name(),
                base.name()
            )));
        }
        let w = self.width(base);
        Ok(x.digits
            .chunks(w)
            .map(|c| FieldElem {
                level: base,
                digits: c.into(),
            })
            .collect())
    }

    /// Inverse of [`FieldTower::expand`].
    pub fn from_expansion(&self, coords: &[FieldElem], level: Level) -> Result<FieldElem> {
        let mut digits = Digits::new();
        let Some(base) = coords.first().map(|c| c.level) else {
            return Err(Error::InvalidElement("empty expansion".into()));
        };
        for c in coords {
            if c.level != base {
                return Err(Error::LevelMismatch("mixed coordinate levels".into()));
            }
            self.validate(c)?;
            digits.extend_from_slice(&c.digits);
        }
        let x = FieldElem { level, digits };
        self.validate(&x)?;
        Ok(x)
    }

    /// Human-readable form, writing `w`, `a`, `b` for the adjoined roots of
    /// `F_q`, `F_{q^m}` and `F_{q^{mr}}`.
    pub fn format(&self, x: &FieldElem) -> String {
        self.format_digits(x.level, &x.digits)
    }

    fn format_digits(&self, level: Level, digits: &[u32]) -> String {
        if level == Level::Fp {
            return digits[0].to_string();
        }
        let below = level.below().unwrap();
        let d = self.degree(level);
        if d == 1 {
            return self.format_digits(below, digits);
        }
        let w = self.width(below);
        let mut terms = Vec::new();
        for j in (0..d).rev() {
            let c = &digits[j * w..(j + 1) * w];
            if c.iter().all(|&v| v == 0) {
                continue;
            }
            terms.push(format_term(
                &self.format_digits(below, c),
                level.symbol(),
                j,
            ));
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// Renders `coeff * sym^e`, parenthesising compound coefficients.
pub(crate) fn format_term(coeff: &str, sym: &str, e: usize) -> String {
    let mono = match e {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{sym}^{e}"),
    };
    if e == 0 {
        coeff.to_string()
    } else if coeff == "1" {
        mono
    } else if !coeff.contains(' ') {
        format!("{coeff}{mono}")
    } else {
        format!("({coeff}){mono}")
    }
}

/// One level of a tower viewed as a field. Operands may come from any
/// lower level; results always live at this level.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    tower: FieldTower,
    level: Level,
}

impl Field {
    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn order(&self) -> u128 {
        self.tower.order(self.level)
    }

    pub fn characteristic(&self) -> u32 {
        self.tower.p()
    }

    pub fn width(&self) -> usize {
        self.tower.width(self.level)
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem {
            level: self.level,
            digits: smallvec![0; self.width()],
        }
    }

    pub fn one(&self) -> FieldElem {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElem {
        let mut x = self.zero();
        x.digits[0] = v.rem_euclid(self.tower.p() as i64) as u32;
        x
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElem> {
        let x = FieldElem {
            level: self.level,
            digits: digits.into(),
        };
        self.tower.validate(&x)?;
        Ok(x)
    }

    /// The element whose digits are the base-`p` expansion of `idx`
    /// (digit 0 least significant).
    pub fn from_index(&self, mut idx: u128) -> FieldElem {
        let p = self.tower.p() as u128;
        let mut x = self.zero();
        for d in x.digits.iter_mut() {
            *d = (idx % p) as u32;
            idx /= p;
        }
        x
    }

    pub fn index_of(&self, x: &FieldElem) -> u128 {
        let x = self.lift(x);
        let p = self.tower.p() as u128;
        x.digits.iter().rev().fold(0, |acc, &d| acc * p + d as u128)
    }

    /// The adjoined root of this level's modulus (`w`, `a` or `b`).
    pub fn generator(&self) -> FieldElem {
        let Some(below) = self.level.below() else {
            return self.one();
        };
        if self.tower.degree(self.level) == 1 {
            // root of x + c_0 is -c_0, already in the level below
            let c0 = &self.tower.inner.levels[self.level.index()].modulus[0];
            let c0 = FieldElem {
                level: below,
                digits: c0.clone(),
            };
            return self.neg(&c0);
        }
        let w = self.tower.width(below);
        let mut x = self.zero();
        x.digits[w] = 1;
        x
    }

    /// Canonical basis of this level over `base`; coordinate `j` of
    /// [`FieldTower::expand`] is the coefficient of `basis[j]`.
    pub fn basis(&self, base: Level) -> Vec<FieldElem> {
        let wb = self.tower.width(base);
        (0..self.width() / wb)
            .map(|j| {
                let mut x = self.zero();
                x.digits[j * wb] = 1;
                x
            })
            .collect()
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        let p = self.tower.p();
        let mut x = self.zero();
        for d in x.digits.iter_mut() {
            *d = rng.gen_range(0..p);
        }
        x
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + '_ {
        (0..self.order()).map(move |i| self.from_index(i))
    }

    pub fn contains(&self, x: &FieldElem) -> bool {
        x.level <= self.level
    }

    /// Embeds an element of this level or a lower one.
    ///
    /// Panics if `x` lives above this level.
    pub fn lift(&self, x: &FieldElem) -> FieldElem {
        assert!(
            x.level <= self.level,
            "element of {} used in {}",
            x.level.name(),
            self.level.name()
        );
        if x.level == self.level {
            return x.clone();
        }
        let mut digits = x.digits.clone();
        digits.resize(self.width(), 0);
        FieldElem {
            level: self.level,
            digits,
        }
    }

    pub fn is_zero(&self, x: &FieldElem) -> bool {
        x.is_zero()
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = self.lift(a);
        self.tower.inner.add_assign(&mut out.digits, &b.digits);
        out
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let mut out = self.lift(a);
        let p = self.tower.p();
        for (x, &y) in out.digits.iter_mut().zip(b.digits.iter()) {
            *x = (*x + p - y) % p;
        }
        out
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        let mut out = self.lift(a);
        let p = self.tower.p();
        for x in out.digits.iter_mut() {
            *x = (p - *x) % p;
        }
        out
    }

    /// Multiplies by an integer scalar.
    pub fn scale(&self, a: &FieldElem, c: u32) -> FieldElem {
        let mut out = self.lift(a);
        let p = self.tower.p() as u64;
        for x in out.digits.iter_mut() {
            *x = ((*x as u64 * c as u64) % p) as u32;
        }
        out
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        if a.is_prime_scalar() {
            return self.scale(b, a.digits[0]);
        }
        if b.is_prime_scalar() {
            return self.scale(a, b.digits[0]);
        }
        let a = self.lift(a);
        let b = self.lift(b);
        let mut out = self.zero();
        self.tower
            .inner
            .mul_slices(self.level.index(), &a.digits, &b.digits, &mut out.digits);
        out
    }

    pub fn square(&self, a: &FieldElem) -> FieldElem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut base = self.lift(a);
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        Some(self.pow(a, self.order() - 2))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        let inv = self.inv(b).ok_or(Error::DivisionByZero)?;
        Ok(self.mul(a, &inv))
    }

    /// `a^(q^times)`: the `times`-fold Frobenius relative to `F_q`.
    pub fn frobenius(&self, a: &FieldElem, times: usize) -> FieldElem {
        let q = self.tower.q();
        let mut out = self.lift(a);
        for _ in 0..times {
            out = self.pow(&out, q);
        }
        out
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a FieldElem>) -> FieldElem {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use proptest::prelude::*;

    fn f27() -> FieldTower {
        presets::paper_s5_base()
    }

    #[test]
    fn paper_modulus_gives_a_cubed() {
        let t = f27();
        let f = t.field(Level::Fqm).unwrap();
        let a = f.generator();
        let a3 = f.mul(&f.mul(&a, &a), &a);
        // a^3 = a - 1 = a + 2
        assert_eq!(a3, f.from_digits(&[2, 1, 0]).unwrap());
    }

    #[test]
    fn cube_by_repeated_multiplication() {
        let t = f27();
        let f = t.field(Level::Fqm).unwrap();
        let x = f.from_digits(&[1, 2, 0]).unwrap(); // 2a + 1
        let mut acc = f.one();
        for _ in 0..3 {
            acc = f.mul(&acc, &x);
        }
        assert_eq!(acc, f.from_digits(&[2, 2, 0]).unwrap());
        assert_eq!(f.pow(&x, 3), acc);
    }

    #[test]
    fn norm_examples() {
        let t = f27();
        let f = t.field(Level::Fqm).unwrap();
        let fq = t.field(Level::Fq).unwrap();
        assert_eq!(t.norm(&f.from_int(-1)).unwrap(), fq.from_int(-1));
        assert_eq!(t.norm(&f.one()).unwrap(), fq.one());
    }

    #[test]
    fn find_lambda_paper_and_q2() {
        let t = f27();
        let lambda = t.find_lambda().unwrap();
        assert_eq!(lambda, t.field(Level::Fqm).unwrap().from_int(-1));
        for m in 1..=4 {
            let t2 = FieldTower::generate(2, 1, m, None, 0).unwrap();
            assert!(t2.find_lambda().unwrap().is_one());
        }
    }

    #[test]
    fn find_lambda_q3_m2_matches_exhaustive_order() {
        let t = FieldTower::generate(3, 1, 2, None, 0).unwrap();
        let f = t.field(Level::Fqm).unwrap();
        let lambda = t.find_lambda().unwrap();
        // order oracle: smallest e > 0 with N^e = 1, found by brute force
        let brute_order = |x: &FieldElem| {
            let fq = t.field(Level::Fq).unwrap();
            (1..).find(|&e| fq.pow(x, e).is_one()).unwrap()
        };
        assert_eq!(brute_order(&t.norm(&lambda).unwrap()), 2);
        for i in 1..f.index_of(&lambda) {
            let earlier = f.from_index(i);
            assert_ne!(brute_order(&t.norm(&earlier).unwrap()), 2);
        }
    }

    #[test]
    fn expand_examples() {
        let t = f27();
        let f = t.field(Level::Fqm).unwrap();
        let a = f.generator();
        let a2 = f.mul(&a, &a);
        let coords: Vec<u32> = t
            .expand(&a2, Level::Fp)
            .unwrap()
            .iter()
            .map(|c| c.digits()[0])
            .collect();
        assert_eq!(coords, vec![0, 0, 1]);
        let one = t.expand(&f.one(), Level::Fq).unwrap();
        assert!(one[0].is_one() && one[1..].iter().all(|c| c.is_zero()));
        assert!(matches!(
            t.expand(&t.field(Level::Fq).unwrap().one(), Level::Fqm),
            Err(Error::LevelMismatch(_))
        ));
    }

    #[test]
    fn checked_arith_errors() {
        let t = f27();
        let f = t.field(Level::Fqm).unwrap();
        assert_eq!(
            t.arith(&f.one(), &f.zero(), ArithOp::Div),
            Err(Error::DivisionByZero)
        );
        let top = presets::paper_s5_tower()
            .field(Level::Fqmr)
            .unwrap()
            .one();
        assert!(matches!(
            t.arith(&top, &f.one(), ArithOp::Add),
            Err(Error::MissingLevel(Level::Fqmr))
        ));
        let mixed = t
            .arith(&t.field(Level::Fq).unwrap().from_int(2), &f.generator(), ArithOp::Add)
            .unwrap();
        assert_eq!(mixed.level(), Level::Fqm);
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x + 1)^2 over F_2
        let r = FieldTower::from_moduli(2, &[vec![vec![1], vec![0], vec![1]], vec![vec![0], vec![1]]]);
        assert_eq!(r.err(), Some(Error::NotIrreducible));
        assert!(FieldTower::from_moduli(4, &[vec![vec![0], vec![1]], vec![vec![0], vec![1]]]).is_err());
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
    }

    #[test]
    fn format_uses_paper_symbols() {
        let t = presets::paper_s5_tower();
        let f = t.field(Level::Fqm).unwrap();
        assert_eq!(t.format(&f.from_digits(&[1, 2, 2]).unwrap()), "2a^2 + 2a + 1");
        let top = t.field(Level::Fqmr).unwrap();
        assert_eq!(t.format(&top.generator()), "b");
    }

    fn tower_levels() -> Vec<(FieldTower, Level)> {
        let t = presets::paper_s5_tower();
        let t4 = FieldTower::generate(2, 2, 3, Some(2), 0).unwrap();
        let mut out = Vec::new();
        for tower in [t, t4] {
            for l in Level::ALL {
                out.push((tower.clone(), l));
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (tower, level) in tower_levels() {
                let f = tower.field(level).unwrap();
                let (a, b, c) = (f.random(&mut rng), f.random(&mut rng), f.random(&mut rng));
                prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
                prop_assert_eq!(f.mul(&a, &f.add(&b, &c)), f.add(&f.mul(&a, &b), &f.mul(&a, &c)));
                prop_assert_eq!(f.add(&a, &f.zero()), a.clone());
                prop_assert_eq!(f.sub(&f.add(&a, &b), &b), a.clone());
                if !a.is_zero() {
                    prop_assert!(f.mul(&a, &f.inv(&a).unwrap()).is_one());
                }
            }
        }

        #[test]
        fn frobenius_is_a_field_automorphism(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (tower, level) in tower_levels() {
                if level < Level::Fqm { continue; }
                let f = tower.field(level).unwrap();
                let (a, b) = (f.random(&mut rng), f.random(&mut rng));
                prop_assert_eq!(f.frobenius(&f.add(&a, &b), 1), f.add(&f.frobenius(&a, 1), &f.frobenius(&b, 1)));
                prop_assert_eq!(f.frobenius(&f.mul(&a, &b), 1), f.mul(&f.frobenius(&a, 1), &f.frobenius(&b, 1)));
                let deg = f.width() / tower.width(Level::Fq);
                prop_assert_eq!(f.frobenius(&a, deg), a);
            }
        }

        #[test]
        fn norm_is_product_of_conjugates_and_multiplicative(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for tower in [presets::paper_s5_tower(), FieldTower::generate(2, 2, 3, None, 0).unwrap()] {
                let f = tower.field(Level::Fqm).unwrap();
                let (x, y) = (f.random_nonzero(&mut rng), f.random_nonzero(&mut rng));
                let conj = (0..tower.m()).fold(f.one(), |acc, i| f.mul(&acc, &f.frobenius(&x, i)));
                prop_assert_eq!(f.lift(&tower.norm(&x).unwrap()), conj);
                let nxy = tower.norm(&f.mul(&x, &y)).unwrap();
                let fq = tower.field(Level::Fq).unwrap();
                prop_assert_eq!(nxy, fq.mul(&tower.norm(&x).unwrap(), &tower.norm(&y).unwrap()));
            }
        }

        #[test]
        fn expansion_round_trips(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for (tower, level) in tower_levels() {
                let x = tower.field(level).unwrap().random(&mut rng);
                for base in Level::ALL.into_iter().filter(|&b| b <= level) {
                    let coords = tower.expand(&x, base).unwrap();
                    prop_assert_eq!(tower.from_expansion(&coords, level).unwrap(), x.clone());
                    let basis = tower.field(level).unwrap().basis(base);
                    let f = tower.field(level).unwrap();
                    let rebuilt = coords.iter().zip(&basis).fold(f.zero(), |acc, (c, e)| f.add(&acc, &f.mul(c, e)));
                    prop_assert_eq!(rebuilt, x.clone());
                }
            }
        }
    }
}
