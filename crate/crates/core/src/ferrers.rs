//! Ferrers diagram rank-metric codes.
//!
//! Diagrams are lists of column heights, non-decreasing left to right, with
//! dots top-aligned. Codewords are `F_q` matrices with `max height` rows
//! whose `j`-th column vanishes below row `heights[j]`.
//!
//! The optimal construction evaluates operators of degree `< k` at the
//! block basis `a_u x^(k_i - 1)`, brings the generator to block upper
//! triangular form, divides each row group by its power of `x`, and
//! multiplies by coefficient vectors whose degrees are capped per group.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{Field, FieldElem, Level};
use crate::linalg::{self, Matrix};
use crate::twist::{moore_rows, TwistAut};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FerrersDiagram {
    heights: Vec<usize>,
}

impl FerrersDiagram {
    /// Heights must be positive and non-decreasing.
    pub fn new(heights: Vec<usize>) -> Result<FerrersDiagram> {
        if heights.is_empty() {
            return Err(Error::ShapeMismatch("diagram has no columns".into()));
        }
        if heights[0] == 0 || heights.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::ShapeMismatch(format!(
                "heights {heights:?} must be positive and non-decreasing"
            )));
        }
        Ok(FerrersDiagram { heights })
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn columns(&self) -> usize {
        self.heights.len()
    }

    pub fn rows(&self) -> usize {
        *self.heights.last().unwrap()
    }

    pub fn dots(&self) -> usize {
        self.heights.iter().sum()
    }
}

/// Columns grouped into blocks of `m_i` columns of height `r_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockProfile {
    blocks: Vec<(usize, usize)>,
}

/// Where the kept columns end: all of blocks `0..block`, plus the first
/// `t` columns of `block` (`1 <= t <= m_block`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cut {
    pub block: usize,
    pub t: usize,
}

impl BlockProfile {
    /// `(r_i, m_i)` pairs. Requires `r_i = k_i m` with `m = max m_i` and
    /// strictly increasing `k_i`.
    pub fn new(blocks: Vec<(usize, usize)>) -> Result<BlockProfile> {
        if blocks.is_empty() || blocks.iter().any(|&(r, mi)| r == 0 || mi == 0) {
            return Err(Error::ProfileViolation("blocks must be non-empty and positive".into()));
        }
        let m = blocks.iter().map(|b| b.1).max().unwrap();
        if let Some(&(r, _)) = blocks.iter().find(|b| b.0 % m != 0) {
            return Err(Error::ProfileViolation(format!("height {r} is not a multiple of m = {m}")));
        }
        if blocks.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::ProfileViolation("block heights must strictly increase".into()));
        }
        Ok(BlockProfile { blocks })
    }

    /// `(m, 2m, ..., nm)` with `m` columns each.
    pub fn uniform(m: usize, n: usize) -> Result<BlockProfile> {
        BlockProfile::new((1..=n).map(|i| (i * m, m)).collect())
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn m(&self) -> usize {
        self.blocks.iter().map(|b| b.1).max().unwrap()
    }

    /// `k_i = r_i / m`.
    pub fn k(&self, i: usize) -> usize {
        self.blocks[i].0 / self.m()
    }

    pub fn columns(&self) -> usize {
        self.blocks.iter().map(|b| b.1).sum()
    }

    pub fn diagram(&self) -> FerrersDiagram {
        FerrersDiagram {
            heights: self.blocks.iter().flat_map(|&(r, mi)| std::iter::repeat_n(r, mi)).collect(),
        }
    }

    /// Block of each column.
    fn column_blocks(&self) -> Vec<usize> {
        self.blocks.iter().enumerate().flat_map(|(i, &(_, mi))| std::iter::repeat_n(i, mi)).collect()
    }

    /// Keeping the first `M - d + 1` columns.
    pub fn cut(&self, d: usize) -> Result<Cut> {
        let cols = self.columns();
        if d == 0 || d > cols {
            return Err(Error::BadDistance { d, columns: cols });
        }
        let mut keep = cols - d + 1;
        for (block, &(_, mi)) in self.blocks.iter().enumerate() {
            if keep <= mi {
                return Ok(Cut { block, t: keep });
            }
            keep -= mi;
        }
        unreachable!()
    }
}

/// `min_{0 <= i < d} sum_{j <= M-d+1+i} max(0, r_j - i)`.
pub fn es_bound(diagram: &FerrersDiagram, d: usize) -> Result<usize> {
    let cols = diagram.columns();
    if d == 0 || d > cols {
        return Err(Error::BadDistance { d, columns: cols });
    }
    Ok((0..d)
        .map(|i| diagram.heights[..cols - d + 1 + i].iter().map(|&r| r.saturating_sub(i)).sum())
        .min()
        .unwrap())
}

/// Dots left after removing the last `d - 1` columns:
/// `sum_{j < I} r_j m_j + r_I t`.
pub fn block_bound(profile: &BlockProfile, d: usize) -> Result<usize> {
    let cut = profile.cut(d)?;
    let full: usize = profile.blocks[..cut.block].iter().map(|&(r, mi)| r * mi).sum();
    Ok(full + profile.blocks[cut.block].0 * cut.t)
}

/// For `(m, 2m, ..., nm)` with `m` columns each and `nm - d + 1 = lm + t`,
/// `0 <= t < m`: `m^2 l (l+1) / 2 + t (l+1) m`.
pub fn uniform_family_bound(m: usize, n: usize, d: usize) -> Result<usize> {
    if m == 0 || d == 0 || d > n * m {
        return Err(Error::BadDistance { d, columns: n * m });
    }
    let k = n * m - d + 1;
    let (l, t) = (k / m, k % m);
    Ok(m * m * l * (l + 1) / 2 + t * (l + 1) * m)
}

/// True when every entry outside the diagram is zero.
pub fn fits_diagram(matrix: &Matrix<FieldElem>, diagram: &FerrersDiagram) -> Result<bool> {
    if matrix.cols() != diagram.columns() || matrix.rows() < diagram.rows() {
        return Err(Error::ShapeMismatch(format!(
            "{}x{} matrix for a diagram with {} columns and {} rows",
            matrix.rows(),
            matrix.cols(),
            diagram.columns(),
            diagram.rows()
        )));
    }
    Ok(diagram
        .heights
        .iter()
        .enumerate()
        .all(|(j, &h)| (h..matrix.rows()).all(|i| matrix[(i, j)].is_zero())))
}

/// An `F_q`-linear code given by basis matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct FerrersCode {
    pub diagram: FerrersDiagram,
    pub d: usize,
    pub fq: Field,
    pub basis: Vec<Matrix<FieldElem>>,
}

impl FerrersCode {
    /// Basis matrices are lifted into `fq`; their shape is checked but not the diagram fit.
    pub fn from_basis(diagram: FerrersDiagram, d: usize, fq: Field, basis: Vec<Matrix<FieldElem>>) -> Result<FerrersCode> {
        for b in &basis {
            fits_diagram(b, &diagram)?;
        }
        let basis = basis.into_iter().map(|b| b.map(|x| fq.lift(x))).collect();
        Ok(FerrersCode { diagram, d, fq, basis })
    }

    /// Dimension over `F_q`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// `sum c_i B_i`.
    pub fn combine(&self, coeffs: &[FieldElem]) -> Matrix<FieldElem> {
        let rows = self.diagram.rows();
        let mut out = Matrix::filled(rows, self.diagram.columns(), self.fq.zero());
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if c.is_zero() {
                continue;
            }
            for i in 0..rows {
                for j in 0..b.cols() {
                    if !b[(i, j)].is_zero() {
                        out[(i, j)] = self.fq.add(&out[(i, j)], &self.fq.mul(c, &b[(i, j)]));
                    }
                }
            }
        }
        out
    }

    /// Rank over `F_q` of the `F_q`-span of the basis, flattened.
    pub fn span_rank(&self) -> usize {
        let rows: Vec<Vec<FieldElem>> = self.basis.iter().map(|b| b.iter().cloned().collect()).collect();
        if rows.is_empty() {
            return 0;
        }
        linalg::rank(&self.fq, &Matrix::from_rows(rows))
    }
}

fn matrix_rank(fq: &Field, m: &Matrix<FieldElem>) -> usize {
    if fq.width() == 1 {
        let p = fq.characteristic();
        linalg::rank_mod_p(m.to_rows().iter().map(|r| r.iter().map(|x| x.digits()[0]).collect()).collect(), p)
    } else {
        linalg::rank(fq, m)
    }
}

fn check_profile(profile: &BlockProfile, phi: &TwistAut) -> Result<()> {
    let m = profile.m();
    if phi.m() != m {
        return Err(Error::ProfileViolation(format!(
            "profile needs m = {m}, tower has m = {}",
            phi.m()
        )));
    }
    let kn = profile.k(profile.blocks.len() - 1);
    if kn > phi.q() - 1 {
        return Err(Error::FieldTooSmall(format!("k_n = {kn} exceeds q - 1 = {}", phi.q() - 1)));
    }
    Ok(())
}

/// Layout shared by both constructions: row groups, `x`-degrees, and the
/// `k x M` coefficient matrix `A` of the generator (entry `A[ρ][c] x^(k_c - 1)`).
struct Layout {
    cut: Cut,
    k: usize,
    col_block: Vec<usize>,
    row_group: Vec<usize>,
    block_k: Vec<usize>,
    a: Matrix<FieldElem>,
}

fn layout(profile: &BlockProfile, d: usize, phi: &TwistAut) -> Result<Layout> {
    check_profile(profile, phi)?;
    let cut = profile.cut(d)?;
    let cols = profile.columns();
    let k = cols - d + 1;
    let col_block = profile.column_blocks();
    let block_k: Vec<usize> = (0..profile.blocks.len()).map(|i| profile.k(i)).collect();
    let row_group = col_block[..k].to_vec();
    let funcs = phi.funcs();
    let fqm = phi.field();
    let basis = fqm.basis(Level::Fq);
    let mut within = vec![0; profile.blocks.len()];
    let points: Vec<_> = col_block
        .iter()
        .map(|&b| {
            let u = within[b];
            within[b] += 1;
            funcs.monomial(&basis[u], block_k[b] - 1)
        })
        .collect();
    let g = moore_rows(phi, &points, k);
    let a = Matrix::from_fn(k, cols, |i, c| {
        let e = block_k[col_block[c]] - 1;
        g[(i, c)].num().coeff(e).cloned().unwrap_or_else(|| fqm.zero())
    });
    Ok(Layout {
        cut,
        k,
        col_block,
        row_group,
        block_k,
        a,
    })
}

fn rows_of(group: &[usize], g: usize) -> Vec<usize> {
    (0..group.len()).filter(|&i| group[i] == g).collect()
}

/// Block forward elimination: zero every block below its diagonal block.
fn block_eliminate(field: &Field, lay: &mut Layout) -> Result<()> {
    let k = lay.k;
    for g in 0..lay.cut.block {
        let rows = rows_of(&lay.row_group, g);
        let cols: Vec<usize> = (0..lay.col_block.len()).filter(|&c| lay.col_block[c] == g).collect();
        let pivot = lay.a.select_rows(&rows).select_columns(&cols);
        let inv = linalg::inverse(field, &pivot).ok_or(Error::EliminationFailure { block: g })?;
        let below: Vec<usize> = (rows.last().unwrap() + 1..k).collect();
        let factor = linalg::mat_mul(field, &lay.a.select_rows(&below).select_columns(&cols), &inv);
        let upper = lay.a.select_rows(&rows);
        let update = linalg::mat_mul(field, &factor, &upper);
        for (bi, &r) in below.iter().enumerate() {
            for c in 0..lay.a.cols() {
                lay.a[(r, c)] = field.sub(&lay.a[(r, c)], &update[(bi, c)]);
            }
        }
    }
    Ok(())
}

/// `x^e a_u` times row `ρ` of the divided generator, as an `F_q` matrix:
/// column `c` holds `a_u A[ρ][c] x^(e + k_c - k_ρ)`, written over the basis
/// `{a_1, ..., a_m, a_1 x, ...}` with row index `deg * m + u'`.
fn codeword(phi: &TwistAut, lay: &Layout, rows: usize, rho: usize, e: usize, u: usize) -> Matrix<FieldElem> {
    let fqm = phi.field();
    let tower = phi.tower();
    let fq = tower.field(Level::Fq).unwrap();
    let m = phi.m();
    let a_u = &fqm.basis(Level::Fq)[u];
    let mut out = Matrix::filled(rows, lay.a.cols(), fq.zero());
    let kr = lay.block_k[lay.row_group[rho]];
    for c in 0..lay.a.cols() {
        let coeff = &lay.a[(rho, c)];
        if coeff.is_zero() {
            continue;
        }
        let kc = lay.block_k[lay.col_block[c]];
        debug_assert!(kc >= kr, "nonzero entry left of the diagonal block");
        let deg = e + kc - kr;
        let val = fqm.mul(a_u, coeff);
        for (v, x) in tower.expand(&val, Level::Fq).unwrap().into_iter().enumerate() {
            out[(deg * m + v, c)] = x;
        }
    }
    out
}

/// Optimal code for a block profile with `k_n <= q - 1`; dimension
/// `sum_{j<I} r_j m_j + r_I t`.
pub fn construct_ferrers(profile: &BlockProfile, d: usize, phi: &TwistAut) -> Result<FerrersCode> {
    let mut lay = layout(profile, d, phi)?;
    block_eliminate(phi.field(), &mut lay)?;
    let diagram = profile.diagram();
    let rows = diagram.rows();
    let m = phi.m();
    let mut basis = Vec::new();
    for rho in 0..lay.k {
        let kr = lay.block_k[lay.row_group[rho]];
        for e in 0..kr {
            for u in 0..m {
                basis.push(codeword(phi, &lay, rows, rho, e, u));
            }
        }
    }
    let fq = phi.tower().field(Level::Fq)?;
    Ok(FerrersCode { diagram, d, fq, basis })
}

/// The systematic variant: the generator is reduced to `[I_k | *]`, and the
/// coefficient of row `ρ` is restricted to the first `heights[ρ]` elements of
/// `{a_1, ..., a_m, a_1 x, ...}`, so column `ρ` has height `heights[ρ]`.
/// Later columns are checked against `heights` codeword by codeword.
pub fn construct_ferrers_general(
    profile: &BlockProfile,
    heights: &FerrersDiagram,
    d: usize,
    phi: &TwistAut,
) -> Result<FerrersCode> {
    let mut lay = layout(profile, d, phi)?;
    let orig = profile.diagram();
    if heights.columns() != orig.columns() {
        return Err(Error::ShapeMismatch(format!(
            "override has {} columns, profile has {}",
            heights.columns(),
            orig.columns()
        )));
    }
    if let Some(j) = (0..lay.k).find(|&j| heights.heights[j] > orig.heights[j]) {
        return Err(Error::ProfileViolation(format!(
            "override height {} exceeds {} in column {j}",
            heights.heights[j], orig.heights[j]
        )));
    }
    let field = phi.field().clone();
    let left: Vec<usize> = (0..lay.k).collect();
    let inv = linalg::inverse(&field, &lay.a.select_columns(&left))
        .ok_or(Error::EliminationFailure { block: lay.cut.block })?;
    lay.a = linalg::mat_mul(&field, &inv, &lay.a);
    let rows = orig.rows();
    let m = phi.m();
    let mut basis = Vec::new();
    for rho in 0..lay.k {
        for idx in 0..heights.heights[rho] {
            let w = codeword(phi, &lay, rows, rho, idx / m, idx % m);
            if !fits_diagram(&w, heights)? {
                return Err(Error::ShapeNotAchieved {
                    index: basis.len(),
                    witness: Box::new(w),
                });
            }
            basis.push(w);
        }
    }
    let fq = phi.tower().field(Level::Fq)?;
    let diagram = FerrersDiagram::new(heights.heights.clone())?;
    // the rows beyond the override's height are all zero; keep full height for uniformity
    let basis = basis
        .into_iter()
        .map(|b| b.select_rows(&(0..diagram.rows()).collect::<Vec<_>>()))
        .collect();
    Ok(FerrersCode { diagram, d, fq, basis })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceMode {
    /// Every nonzero codeword was checked.
    Exhaustive,
    /// Basis codewords plus random combinations; not a proof.
    Sampled,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FerrersReport {
    pub dimension: usize,
    pub bound: usize,
    pub optimal: bool,
    pub fits: bool,
    pub mode: DistanceMode,
    pub checked: u128,
    /// Smallest rank seen among checked nonzero codewords.
    pub min_rank: Option<usize>,
    pub distance_ok: bool,
    /// A nonzero codeword of rank below `d`, if one was seen.
    pub violation: Option<Matrix<FieldElem>>,
}

/// Optimality, diagram fit and distance. The distance check is exhaustive
/// when `q^K <= budget` and otherwise samples `budget` random combinations.
pub fn verify_ferrers(code: &FerrersCode, d: usize, budget: u128, seed: u64) -> Result<FerrersReport> {
    let bound = es_bound(&code.diagram, d)?;
    let dim = code.dim();
    let mut fits = true;
    for b in &code.basis {
        fits &= fits_diagram(b, &code.diagram)?;
    }
    let fq = &code.fq;
    let q = fq.order();
    let total = q.checked_pow(dim as u32).unwrap_or(u128::MAX);
    let eval = |coeffs: &[FieldElem]| -> Option<(usize, Matrix<FieldElem>)> {
        if coeffs.iter().all(FieldElem::is_zero) {
            return None;
        }
        let w = code.combine(coeffs);
        Some((matrix_rank(fq, &w), w))
    };
    let digits = |mut idx: u128| -> Vec<FieldElem> {
        (0..dim)
            .map(|_| {
                let c = fq.from_index(idx % q);
                idx /= q;
                c
            })
            .collect()
    };
    let (mode, checked, worst) = if total <= budget {
        let worst = (1..total)
            .into_par_iter()
            .filter_map(|i| eval(&digits(i)).map(|(r, w)| (r, i, w)))
            .min_by_key(|(r, i, _)| (*r, *i));
        (DistanceMode::Exhaustive, total.saturating_sub(1), worst)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut samples: Vec<Vec<FieldElem>> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { fq.one() } else { fq.zero() }).collect())
            .collect();
        for _ in 0..budget {
            let v: Vec<FieldElem> = (0..dim).map(|_| fq.random(&mut rng)).collect();
            if v.iter().any(|x| !x.is_zero()) {
                samples.push(v);
            } else {
                let mut v = v;
                v[rng.gen_range(0..dim)] = fq.one();
                samples.push(v);
            }
        }
        let worst = samples
            .par_iter()
            .enumerate()
            .filter_map(|(i, v)| eval(v).map(|(r, w)| (r, i as u128, w)))
            .min_by_key(|(r, i, _)| (*r, *i));
        (DistanceMode::Sampled, samples.len() as u128, worst)
    };
    let min_rank = worst.as_ref().map(|w| w.0);
    let distance_ok = min_rank.is_none_or(|r| r >= d);
    Ok(FerrersReport {
        dimension: dim,
        bound,
        optimal: dim == bound,
        fits,
        mode,
        checked,
        min_rank,
        distance_ok,
        violation: worst.filter(|w| w.0 < d).map(|w| w.2),
    })
}
