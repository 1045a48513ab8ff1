//! Linear rank-metric codes: generator matrices over `F_{q^m}[x]` or a
//! finite level, reduction modulo an irreducible `f`, the echelon-form MRD
//! certificate, enumeration oracles, and twisted Gabidulin comparison codes.

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, FieldTower, Level};
use crate::linalg::{self, Matrix};
use crate::ratfun::{reduce_ratfun_mod, Poly, PolyRing, RatFun};
use crate::twist::{independent_over_k, moore_rows, TwistAut};

/// Matrix entries before or after reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Entries {
    /// Over `F_{q^m}(x)` (polynomial for every shipped construction).
    Function(Matrix<RatFun>),
    /// Over the top level of the code's tower.
    Finite(Matrix<FieldElem>),
}

/// A `k x n` generator matrix with its construction data.
#[derive(Clone, Debug, PartialEq)]
pub struct GenMatrix {
    tower: FieldTower,
    lambda: Option<FieldElem>,
    points: Vec<RatFun>,
    entries: Entries,
    modulus: Option<Poly>,
}

impl GenMatrix {
    /// A code over the top level of `tower`; entries from lower levels are lifted.
    pub fn finite(tower: &FieldTower, m: Matrix<FieldElem>) -> Result<GenMatrix> {
        let field = tower.field(tower.top())?;
        for x in m.iter() {
            tower.validate(x)?;
        }
        Ok(GenMatrix {
            tower: tower.clone(),
            lambda: None,
            points: Vec::new(),
            entries: Entries::Finite(m.map(|x| field.lift(x))),
            modulus: None,
        })
    }

    pub fn k(&self) -> usize {
        match &self.entries {
            Entries::Function(m) => m.rows(),
            Entries::Finite(m) => m.rows(),
        }
    }

    pub fn n(&self) -> usize {
        match &self.entries {
            Entries::Function(m) => m.cols(),
            Entries::Finite(m) => m.cols(),
        }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn lambda(&self) -> Option<&FieldElem> {
        self.lambda.as_ref()
    }

    pub fn points(&self) -> &[RatFun] {
        &self.points
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    /// The modulus used for reduction, if any.
    pub fn modulus(&self) -> Option<&Poly> {
        self.modulus.as_ref()
    }

    pub fn is_reduced(&self) -> bool {
        matches!(self.entries, Entries::Finite(_))
    }

    pub fn functions(&self) -> Option<&Matrix<RatFun>> {
        match &self.entries {
            Entries::Function(m) => Some(m),
            Entries::Finite(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&Matrix<FieldElem>> {
        match &self.entries {
            Entries::Finite(m) => Some(m),
            Entries::Function(_) => None,
        }
    }

    /// The ambient field of a finite code.
    pub fn field(&self) -> Field {
        self.tower.field(self.tower.top()).expect("top level exists")
    }

    fn require_finite(&self) -> Result<&Matrix<FieldElem>> {
        self.matrix().ok_or_else(|| {
            Error::LevelMismatch("operation needs a generator over a finite field; reduce first".into())
        })
    }

    /// Human-readable entries in the tower's notation.
    pub fn format_rows(&self) -> Vec<Vec<String>> {
        match &self.entries {
            Entries::Finite(m) => m.to_rows().iter().map(|r| r.iter().map(|x| self.tower.format(x)).collect()).collect(),
            Entries::Function(m) => {
                let funcs = crate::ratfun::RatFunField::new(self.tower.field(Level::Fqm).unwrap());
                m.to_rows().iter().map(|r| r.iter().map(|g| funcs.format(g)).collect()).collect()
            }
        }
    }
}

/// Rank over `base` of the `base`-span of the coordinates of `v`.
pub fn rank_over_base(tower: &FieldTower, v: &[FieldElem], base: Level) -> Result<usize> {
    let Some(level) = v.iter().map(FieldElem::level).max() else {
        return Ok(0);
    };
    for x in v {
        tower.validate(x)?;
    }
    if base > level {
        return Err(Error::LevelMismatch(format!(
            "entries live in {}, below {}",
            level.name(),
            base.name()
        )));
    }
    Ok(vector_rank(tower, v, level, base))
}

pub(crate) fn vector_rank(tower: &FieldTower, v: &[FieldElem], level: Level, base: Level) -> usize {
    let width = tower.width(level);
    if tower.width(base) == 1 {
        let rows = v
            .iter()
            .filter(|x| !x.is_zero())
            .map(|x| {
                let mut d = x.digits().to_vec();
                d.resize(width, 0);
                d
            })
            .collect::<Vec<_>>();
        return linalg::rank_mod_p(rows, tower.p());
    }
    let field = tower.field(level).unwrap();
    let rows: Vec<Vec<FieldElem>> = v
        .iter()
        .map(|x| tower.expand(&field.lift(x), base).unwrap())
        .collect();
    linalg::rank(&tower.field(base).unwrap(), &Matrix::from_rows(rows))
}

/// Number of `k`-dimensional subspaces of `F_q^n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// `k`-subsets of `0..n` in colexicographic order.
pub fn pivot_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if k > n {
        return Vec::new();
    }
    let mut out = pivot_sets(n - 1, k);
    out.extend(pivot_sets(n - 1, k - 1).into_iter().map(|mut s| {
        s.push(n - 1);
        s
    }));
    out
}

/// One pivot pattern of an `n x k` column-reduced echelon form: column `c`
/// has its leading one in row `pivots[c]`, zeros in the other pivot rows and
/// above, and free entries below in non-pivot rows.
#[derive(Clone, Debug)]
struct CrefShape {
    pivots: Vec<usize>,
    free: Vec<(usize, usize)>,
}

impl CrefShape {
    fn new(n: usize, pivots: Vec<usize>) -> CrefShape {
        let free = pivots
            .iter()
            .enumerate()
            .flat_map(|(c, &p)| (p + 1..n).filter(|j| !pivots.contains(j)).map(move |j| (j, c)))
            .collect();
        CrefShape { pivots, free }
    }

    fn count(&self, q: u128) -> u128 {
        q.pow(self.free.len() as u32)
    }

    /// The `idx`-th matrix; free entries are the base-`q` digits of `idx`,
    /// least significant first.
    fn matrix(&self, n: usize, fq: &Field, mut idx: u128) -> Matrix<FieldElem> {
        let q = fq.order();
        let mut m = Matrix::filled(n, self.pivots.len(), fq.zero());
        for (c, &p) in self.pivots.iter().enumerate() {
            m[(p, c)] = fq.one();
        }
        for &(j, c) in &self.free {
            m[(j, c)] = fq.from_index(idx % q);
            idx /= q;
        }
        m
    }
}

/// Every `n x k` matrix of rank `k` over `F_q` in column-reduced echelon
/// form, exactly once: pivot sets in colex order, then free entries counted
/// little-endian.
pub struct CrefIterator {
    n: usize,
    fq: Field,
    shapes: Vec<CrefShape>,
    shape: usize,
    counter: u128,
}

impl CrefIterator {
    pub fn new(n: usize, k: usize, fq: Field) -> CrefIterator {
        let shapes = pivot_sets(n, k).into_iter().map(|p| CrefShape::new(n, p)).collect();
        CrefIterator {
            n,
            fq,
            shapes,
            shape: 0,
            counter: 0,
        }
    }

    /// Total number of matrices, `[n choose k]_q`.
    pub fn total(&self) -> u128 {
        let q = self.fq.order();
        self.shapes.iter().map(|s| s.count(q)).sum()
    }
}

impl Iterator for CrefIterator {
    type Item = Matrix<FieldElem>;

    fn next(&mut self) -> Option<Self::Item> {
        let q = self.fq.order();
        let shape = self.shapes.get(self.shape)?;
        let m = shape.matrix(self.n, &self.fq, self.counter);
        self.counter += 1;
        if self.counter == shape.count(q) {
            self.shape += 1;
            self.counter = 0;
        }
        Some(m)
    }
}

/// Outcome of [`certify_mrd`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    /// Matrices examined, up to and including the witness if one was found.
    pub count_checked: u128,
    /// `[n choose k]_q`.
    pub total: u128,
    pub certified: bool,
    /// The first echelon form `M` (in iteration order) with `G M` singular.
    pub witness: Option<Matrix<FieldElem>>,
    pub wall_time_ms: u128,
}

const CHUNK: u128 = 1024;

/// `q^m`-ary `k x n` generator over the top field: checks `det(G M) != 0`
/// for every rank-`k` echelon form `M` over `F_q`.
///
/// The enumeration is split into chunks evaluated in parallel; the reported
/// witness and count are those of the sequential order regardless of
/// scheduling.
pub fn certify_mrd(g: &GenMatrix) -> Result<Certificate> {
    let start = Instant::now();
    let gm = g.require_finite()?;
    let (k, n) = (gm.rows(), gm.cols());
    if k > n || k == 0 {
        return Err(Error::BadDimension(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    let tower = g.tower();
    let fq = tower.field(Level::Fq)?;
    let top = g.field();
    let q = fq.order();
    let shapes: Vec<CrefShape> = pivot_sets(n, k).into_iter().map(|p| CrefShape::new(n, p)).collect();
    let mut units = Vec::new();
    let mut offsets = Vec::new();
    let mut before: u128 = 0;
    for (si, s) in shapes.iter().enumerate() {
        let count = s.count(q);
        let mut lo = 0;
        while lo < count {
            let hi = (lo + CHUNK).min(count);
            units.push((si, lo, hi));
            offsets.push(before + lo);
            lo = hi;
        }
        before += count;
    }
    let total = before;
    let columns: Vec<Vec<FieldElem>> = (0..n).map(|j| gm.column(j)).collect();
    let found = units.par_iter().enumerate().find_map_first(|(ui, &(si, lo, hi))| {
        let shape = &shapes[si];
        (lo..hi).find_map(|idx| {
            let m = shape.matrix(n, &fq, idx);
            let prod = Matrix::from_fn(k, k, |i, c| {
                (0..n).fold(top.zero(), |acc, j| {
                    let s = &m[(j, c)];
                    if s.is_zero() {
                        acc
                    } else {
                        top.add(&acc, &top.mul(s, &columns[j][i]))
                    }
                })
            });
            linalg::is_singular(&top, &prod).then(|| (offsets[ui] + (idx - lo) + 1, m))
        })
    });
    let wall_time_ms = start.elapsed().as_millis();
    Ok(match found {
        Some((count, m)) => Certificate {
            count_checked: count,
            total,
            certified: false,
            witness: Some(m),
            wall_time_ms,
        },
        None => Certificate {
            count_checked: total,
            total,
            certified: true,
            witness: None,
            wall_time_ms,
        },
    })
}

/// `(Q^k - 1)/(Q - 1)`, or `None` on overflow.
pub fn projective_classes(order: u128, k: usize) -> Option<u128> {
    order.checked_pow(k as u32).map(|t| (t - 1) / (order - 1))
}

/// The `idx`-th projective message: leading nonzero coordinate equal to
/// one, later coordinates the base-`Q` digits of the remaining index.
pub(crate) fn projective_message(field: &Field, k: usize, mut idx: u128) -> Vec<FieldElem> {
    let q = field.order();
    let mut msg = vec![field.zero(); k];
    for lead in 0..k {
        let block = q.pow((k - 1 - lead) as u32);
        if idx < block {
            msg[lead] = field.one();
            for x in msg.iter_mut().skip(lead + 1) {
                *x = field.from_index(idx % q);
                idx /= q;
            }
            return msg;
        }
        idx -= block;
    }
    unreachable!("class index out of range")
}

/// Minimum of `weight(m G)` over one message per projective class, in parallel.
pub(crate) fn min_weight<W>(field: &Field, g: &Matrix<FieldElem>, budget: u128, weight: W) -> Result<usize>
where
    W: Fn(&[FieldElem]) -> usize + Sync,
{
    let k = g.rows();
    if k == 0 {
        return Err(Error::BadDimension("code has no rows".into()));
    }
    let needed = projective_classes(field.order(), k).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let chunks: Vec<(u128, u128)> = (0..needed.div_ceil(CHUNK))
        .map(|c| (c * CHUNK, ((c + 1) * CHUNK).min(needed)))
        .collect();
    Ok(chunks
        .par_iter()
        .map(|&(lo, hi)| {
            (lo..hi)
                .map(|idx| {
                    let msg = projective_message(field, k, idx);
                    weight(&linalg::vec_mul(field, &msg, g))
                })
                .min()
                .unwrap_or(usize::MAX)
        })
        .min()
        .unwrap())
}

/// Exact minimum rank distance over `F_q` by projective enumeration.
pub fn min_rank_distance(g: &GenMatrix, budget: u128) -> Result<usize> {
    let gm = g.require_finite()?;
    let tower = g.tower();
    let level = tower.top();
    min_weight(&g.field(), gm, budget, |c| vector_rank(tower, c, level, Level::Fq))
}

/// The first `k` rows of the Moore matrix of `points`, generating `Ev(L_k)`.
pub fn construct_mrd(phi: &TwistAut, points: &[RatFun], k: usize) -> Result<GenMatrix> {
    let n = points.len();
    if k == 0 || k > n {
        return Err(Error::BadDimension(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if !independent_over_k(phi, points) {
        return Err(Error::DependentPoints);
    }
    Ok(GenMatrix {
        tower: phi.tower().clone(),
        lambda: Some(phi.lambda().clone()),
        points: points.to_vec(),
        entries: Entries::Function(moore_rows(phi, points, k)),
        modulus: None,
    })
}

/// Entrywise reduction modulo `f`, landing in `F_{q^m}[x]/(f) = F_{q^{mr}}`.
///
/// Degrees below `q - 1` are rejected unless `allow_small_degree` is set.
pub fn reduce_code(g: &GenMatrix, f: &Poly, allow_small_degree: bool) -> Result<GenMatrix> {
    let m = g
        .functions()
        .ok_or_else(|| Error::LevelMismatch("generator is already reduced".into()))?;
    let base = g.tower.truncated(Level::Fqm);
    let ring = PolyRing::new(base.field(Level::Fqm)?);
    let f = ring.monic(&ring.from_coeffs(f.coeffs().to_vec()));
    let r = f.degree().unwrap_or(0);
    let min = (base.q() - 1) as usize;
    if r < min && !allow_small_degree {
        return Err(Error::DegreeTooSmall { r, min });
    }
    let tower = base.extend(&f)?;
    let mut data = Vec::with_capacity(m.rows() * m.cols());
    for e in m.iter() {
        data.push(reduce_ratfun_mod(e, &f, &tower)?);
    }
    Ok(GenMatrix {
        tower,
        lambda: g.lambda.clone(),
        points: g.points.clone(),
        entries: Entries::Finite(Matrix::new(m.rows(), m.cols(), data)),
        modulus: Some(f),
    })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_gabidulin_params(
    tower: &FieldTower,
    k: usize,
    s: usize,
    eta: &FieldElem,
    points: &[FieldElem],
) -> Result<()> {
    let m = tower.m();
    let n = points.len();
    if gcd(m, s) != 1 {
        return Err(Error::BadTwist { s, m });
    }
    if k == 0 || k > n {
        return Err(Error::BadDimension(format!("need 1 <= k <= n, got k = {k}, n = {n}")));
    }
    if points.iter().any(|a| a.level() > Level::Fqm) || eta.level() > Level::Fqm {
        return Err(Error::LevelMismatch("points and eta must lie in F_q^m".into()));
    }
    if rank_over_base(tower, points, Level::Fq)? != n {
        return Err(Error::DependentPoints);
    }
    if !eta.is_zero() {
        let fq = tower.field(Level::Fq)?;
        let sign = if (n * k).is_multiple_of(2) { fq.one() } else { fq.from_int(-1) };
        if tower.norm(eta)? == sign {
            return Err(Error::BadEta);
        }
    }
    Ok(())
}

/// Generalised twisted Gabidulin code over `F_{q^m}` evaluated at `points`:
/// the evaluations of `x + eta x^(q^(sk))` and `x^(q^(si))`, `1 <= i < k`.
///
/// With `h ≡ 0 (mod m)` the twist `eta f_0^(q^h)` equals `eta f_0`, so the
/// operator space is `F_{q^m}`-linear and has this generator. Other `h` give
/// only a semilinear space; see [`twisted_gabidulin_codewords`].
pub fn twisted_gabidulin(
    tower: &FieldTower,
    k: usize,
    h: usize,
    s: usize,
    eta: &FieldElem,
    points: &[FieldElem],
) -> Result<GenMatrix> {
    let tower = tower.truncated(Level::Fqm);
    check_gabidulin_params(&tower, k, s, eta, points)?;
    if !h.is_multiple_of(tower.m()) {
        return Err(Error::UnsupportedTwist { h });
    }
    let fqm = tower.field(Level::Fqm)?;
    let m = Matrix::from_fn(k, points.len(), |i, j| {
        let a = &points[j];
        if i == 0 {
            fqm.add(a, &fqm.mul(eta, &fqm.frobenius(a, s * k)))
        } else {
            fqm.frobenius(a, s * i)
        }
    });
    GenMatrix::finite(&tower, m)
}

/// All codewords `(f(a_1), ..., f(a_n))` for `f` in the twisted operator
/// space, for any `h`, by enumerating `(f_0, ..., f_{k-1})`.
pub fn twisted_gabidulin_codewords(
    tower: &FieldTower,
    k: usize,
    h: usize,
    s: usize,
    eta: &FieldElem,
    points: &[FieldElem],
    budget: u128,
) -> Result<Vec<Vec<FieldElem>>> {
    let tower = tower.truncated(Level::Fqm);
    check_gabidulin_params(&tower, k, s, eta, points)?;
    let fqm = tower.field(Level::Fqm)?;
    let q = fqm.order();
    let needed = q.checked_pow(k as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    Ok((0..needed)
        .map(|mut idx| {
            let f: Vec<FieldElem> = (0..k)
                .map(|_| {
                    let c = fqm.from_index(idx % q);
                    idx /= q;
                    c
                })
                .collect();
            let twist = fqm.mul(eta, &fqm.frobenius(&f[0], h));
            points
                .iter()
                .map(|a| {
                    let mut v = fqm.mul(&twist, &fqm.frobenius(a, s * k));
                    for (i, fi) in f.iter().enumerate() {
                        v = fqm.add(&v, &fqm.mul(fi, &fqm.frobenius(a, s * i)));
                    }
                    v
                })
                .collect()
        })
        .collect())
}

/// `C^(q^s)`: every entry raised to the `q^s`-th power.
pub fn frobenius_code(c: &GenMatrix, s: usize) -> Result<GenMatrix> {
    let m = c.require_finite()?;
    let field = c.field();
    let mut out = GenMatrix::finite(&c.tower, m.map(|x| field.frobenius(x, s)))?;
    out.modulus = c.modulus.clone();
    Ok(out)
}

/// `dim(C1 ∩ C2)` over the common ambient field.
pub fn intersection_dim(c1: &GenMatrix, c2: &GenMatrix) -> Result<usize> {
    let (a, b) = (c1.require_finite()?, c2.require_finite()?);
    if a.cols() != b.cols() {
        return Err(Error::LengthMismatch {
            expected: a.cols(),
            got: b.cols(),
        });
    }
    if c1.tower != c2.tower {
        return Err(Error::LevelMismatch("codes live over different fields".into()));
    }
    let field = c1.field();
    Ok(linalg::rank(&field, a) + linalg::rank(&field, b) - linalg::rank(&field, &a.vstack(b)))
}

/// Row-space dimension over the ambient field.
pub fn dimension(c: &GenMatrix) -> Result<usize> {
    Ok(linalg::rank(&c.field(), c.require_finite()?))
}

/// Degree `k(q-2)+1`: above the degree of every `det(G M)`, so any
/// irreducible `f` of this degree certifies.
pub fn fallback_degree(q: usize, k: usize) -> usize {
    k * q.saturating_sub(2) + 1
}

/// One tried modulus in [`search_reduction_degree`].
#[derive(Clone, Debug)]
pub struct ReductionAttempt {
    pub r: usize,
    pub seed: u64,
    pub modulus: Poly,
    pub certificate: Certificate,
}

/// Tries seeded irreducible moduli of degree `r_min, r_min + 1, ..., r_max`
/// (`tries` per degree), certifying each; stops at the first certified one.
/// `r_min` defaults to `q - 1`.
pub fn search_reduction_degree(
    g: &GenMatrix,
    r_min: Option<usize>,
    r_max: usize,
    tries: u64,
) -> Result<Vec<ReductionAttempt>> {
    let q = g.tower.q() as usize;
    let start = r_min.unwrap_or(q - 1).max(1);
    let base = g.tower.truncated(Level::Fqm);
    let mut attempts = Vec::new();
    for r in start..=r_max {
        for seed in 0..tries {
            let f = base.irreducible(r, seed)?;
            let reduced = reduce_code(g, &f, true)?;
            let certificate = certify_mrd(&reduced)?;
            let done = certificate.certified;
            attempts.push(ReductionAttempt {
                r,
                seed,
                modulus: f,
                certificate,
            });
            if done {
                return Ok(attempts);
            }
        }
    }
    Ok(attempts)
}

/// Reduction modulo a seed-0 irreducible of degree [`fallback_degree`].
pub fn fallback_reduction(g: &GenMatrix) -> Result<GenMatrix> {
    let r = fallback_degree(g.tower.q() as usize, g.k());
    let f = g.tower.truncated(Level::Fqm).irreducible(r, 0)?;
    reduce_code(g, &f, true)
}
