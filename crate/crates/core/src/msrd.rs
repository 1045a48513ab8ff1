//! Sum-rank metric codes.
//!
//! Coordinates are split into blocks `(n_1, ..., n_n)`; the sum-rank of a
//! vector is the sum of the `F_q`-ranks of its blocks. Evaluating operators
//! of degree `< k` at `a_1, ..., a_{n_1}, a_1 x, ..., a_{n_n} x^(n-1)` gives
//! entries that are monomials of a fixed degree per block; dropping the
//! powers of `x` leaves an MSRD code over `F_{q^m}`.

use crate::codes::{min_weight, projective_classes, vector_rank};
use crate::error::{Error, Result};
use crate::gf::{FieldElem, FieldTower, Level};
use crate::linalg::{self, Matrix};
use crate::twist::{moore_rows, TwistAut};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumRankProfile {
    blocks: Vec<usize>,
}

impl SumRankProfile {
    pub fn new(blocks: Vec<usize>) -> Result<SumRankProfile> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(Error::ProfileViolation("block lengths must be positive".into()));
        }
        Ok(SumRankProfile { blocks })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Total length `N`.
    pub fn len(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `(start, end)` of each block.
    pub fn ranges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.blocks.iter().scan(0, |start, &n| {
            let r = (*start, *start + n);
            *start += n;
            Some(r)
        })
    }

    /// Checks `n <= q - 1` and `n_i <= m`.
    pub fn check(&self, q: usize, m: usize) -> Result<()> {
        if self.blocks.len() > q - 1 {
            return Err(Error::ProfileViolation(format!(
                "{} blocks need q - 1 >= {}, have q = {q}",
                self.blocks.len(),
                self.blocks.len()
            )));
        }
        if let Some(&n) = self.blocks.iter().find(|&&n| n > m) {
            return Err(Error::ProfileViolation(format!("block of length {n} exceeds m = {m}")));
        }
        Ok(())
    }
}

/// Sum of per-block ranks over `F_q`.
pub fn sum_rank(tower: &FieldTower, v: &[FieldElem], profile: &SumRankProfile) -> Result<usize> {
    if v.len() != profile.len() {
        return Err(Error::LengthMismatch {
            expected: profile.len(),
            got: v.len(),
        });
    }
    let Some(level) = v.iter().map(FieldElem::level).max() else {
        return Ok(0);
    };
    for x in v {
        tower.validate(x)?;
    }
    let level = level.max(Level::Fq);
    Ok(profile.ranges().map(|(a, b)| vector_rank(tower, &v[a..b], level, Level::Fq)).sum())
}

#[derive(Clone, Debug, PartialEq)]
pub struct MsrdCode {
    pub profile: SumRankProfile,
    pub k: usize,
    /// `k x N` over `F_{q^m}`.
    pub g: Matrix<FieldElem>,
    pub tower: FieldTower,
    pub lambda: FieldElem,
}

impl MsrdCode {
    /// Singleton bound `N - k + 1`.
    pub fn singleton(&self) -> usize {
        self.profile.len() - self.k + 1
    }
}

/// The evaluation points `a_j x^i` for `j < n_i`.
pub fn msrd_points(phi: &TwistAut, profile: &SumRankProfile) -> Vec<crate::RatFun> {
    let basis = phi.field().basis(Level::Fq);
    profile
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(i, &n)| basis[..n].iter().map(move |a| phi.funcs().monomial(a, i)).collect::<Vec<_>>())
        .collect()
}

pub fn construct_msrd(profile: &SumRankProfile, k: usize, phi: &TwistAut) -> Result<MsrdCode> {
    profile.check(phi.q(), phi.m())?;
    let n = profile.len();
    if k == 0 || k > n {
        return Err(Error::BadDimension(format!("k = {k} with N = {n}")));
    }
    let points = msrd_points(phi, profile);
    let moore = moore_rows(phi, &points, k);
    let block_of: Vec<usize> = profile
        .blocks
        .iter()
        .enumerate()
        .flat_map(|(i, &b)| std::iter::repeat_n(i, b))
        .collect();
    let fqm = phi.field();
    let g = Matrix::from_fn(k, n, |l, c| {
        let num = moore[(l, c)].num();
        debug_assert!(moore[(l, c)].den().is_one() && num.degree() == Some(block_of[c]));
        num.coeff(block_of[c]).cloned().unwrap_or_else(|| fqm.zero())
    });
    Ok(MsrdCode {
        profile: profile.clone(),
        k,
        g,
        tower: phi.tower().clone(),
        lambda: phi.lambda().clone(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceReport {
    pub distance: usize,
    pub singleton: usize,
    pub msrd: bool,
    pub classes: u128,
}

/// Minimum sum-rank over one codeword per projective message class.
pub fn min_sum_rank_distance(code: &MsrdCode, budget: u128) -> Result<usize> {
    let field = code.tower.field(Level::Fqm)?;
    let profile = &code.profile;
    min_weight(&field, &code.g, budget, |c| {
        profile.ranges().map(|(a, b)| vector_rank(&code.tower, &c[a..b], Level::Fqm, Level::Fq)).sum()
    })
}

pub fn distance_report(code: &MsrdCode, budget: u128) -> Result<DistanceReport> {
    let distance = min_sum_rank_distance(code, budget)?;
    let q = code.tower.order(Level::Fqm);
    Ok(DistanceReport {
        distance,
        singleton: code.singleton(),
        msrd: distance == code.singleton(),
        classes: projective_classes(q, code.k).unwrap_or(u128::MAX),
    })
}

/// Minimum Hamming weight over all nonzero codewords, enumerated directly.
pub fn min_hamming_distance(code: &MsrdCode, budget: u128) -> Result<usize> {
    let field = code.tower.field(Level::Fqm)?;
    let q = field.order();
    let total = q.checked_pow(code.k as u32).unwrap_or(u128::MAX);
    if total - 1 > budget {
        return Err(Error::BudgetExceeded { needed: total - 1, budget });
    }
    Ok((1..total)
        .map(|mut idx| {
            let msg: Vec<FieldElem> = (0..code.k)
                .map(|_| {
                    let c = field.from_index(idx % q);
                    idx /= q;
                    c
                })
                .collect();
            linalg::vec_mul(&field, &msg, &code.g).iter().filter(|x| !x.is_zero()).count()
        })
        .min()
        .unwrap())
}

#[cfg(test)]
#[allow(clippy::needless_range_loop)]
mod tests {
    use super::*;
    use crate::gf::Field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(p: u32, s: usize, m: usize) -> (TwistAut, Field) {
        let tower = FieldTower::generate(p, s, m, None, 0).unwrap();
        let phi = TwistAut::with_auto_lambda(&tower).unwrap();
        let f = phi.field().clone();
        (phi, f)
    }

    /// Rank over `F_q` of `(c_ij x^(i))` in `F_{q^m}(x)`: each entry is
    /// expanded into the slot of its `x`-degree.
    fn tagged_rank(tower: &FieldTower, v: &[FieldElem], profile: &SumRankProfile) -> usize {
        let m = tower.m();
        let n = profile.blocks().len();
        let fq = tower.field(Level::Fq).unwrap();
        let mut rows = Vec::new();
        for (i, (a, b)) in profile.ranges().enumerate() {
            for x in &v[a..b] {
                let mut row = vec![fq.zero(); m * n];
                for (u, d) in tower.expand(x, Level::Fq).unwrap().into_iter().enumerate() {
                    row[i * m + u] = d;
                }
                rows.push(row);
            }
        }
        linalg::rank(&fq, &Matrix::from_rows(rows))
    }

    #[test]
    fn entries_match_closed_form() {
        let (phi, f) = setup(3, 1, 2);
        let profile = SumRankProfile::new(vec![2, 2]).unwrap();
        let code = construct_msrd(&profile, 2, &phi).unwrap();
        let q = 3u128;
        let basis = f.basis(Level::Fq);
        for l in 0..2u32 {
            for (c, (i, j)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
                let ql = q.pow(l);
                let expect = f.mul(&f.pow(&basis[j], ql), &f.pow(phi.lambda(), i as u128 * (ql - 1) / (q - 1)));
                assert_eq!(code.g[(l as usize, c)], expect, "row {l} column {c}");
            }
        }
    }

    #[test]
    fn paper_sized_example_is_msrd() {
        let (phi, _) = setup(3, 1, 2);
        let profile = SumRankProfile::new(vec![2, 2]).unwrap();
        let code = construct_msrd(&profile, 2, &phi).unwrap();
        let rep = distance_report(&code, 100).unwrap();
        assert_eq!(rep, DistanceReport { distance: 3, singleton: 3, msrd: true, classes: 10 });
    }

    #[test]
    fn single_block_is_gabidulin() {
        let (phi, f) = setup(3, 1, 3);
        let profile = SumRankProfile::new(vec![3]).unwrap();
        let code = construct_msrd(&profile, 2, &phi).unwrap();
        let basis = f.basis(Level::Fq);
        for l in 0..2 {
            for j in 0..3 {
                assert_eq!(code.g[(l, j)], f.frobenius(&basis[j], l));
            }
        }
        assert_eq!(distance_report(&code, 10_000).unwrap().distance, 2);
    }

    #[test]
    fn singleton_blocks_give_mds_codes() {
        let (phi, _) = setup(5, 1, 1);
        let profile = SumRankProfile::new(vec![1, 1, 1, 1]).unwrap();
        for k in 1..=4 {
            let code = construct_msrd(&profile, k, &phi).unwrap();
            let d = min_sum_rank_distance(&code, 10_000).unwrap();
            assert_eq!(d, 5 - k);
            assert_eq!(min_hamming_distance(&code, 10_000).unwrap(), d);
        }
    }

    #[test]
    fn all_ones_row_has_full_weight() {
        let (phi, f) = setup(3, 1, 2);
        let tower = phi.tower().clone();
        let profile = SumRankProfile::new(vec![1, 1, 1]).unwrap();
        let code = MsrdCode {
            profile,
            k: 1,
            g: Matrix::filled(1, 3, f.one()),
            tower,
            lambda: phi.lambda().clone(),
        };
        assert_eq!(min_sum_rank_distance(&code, 100).unwrap(), 3);
    }

    #[test]
    fn full_dimension_has_distance_one() {
        let (phi, _) = setup(3, 1, 2);
        let profile = SumRankProfile::new(vec![2, 1]).unwrap();
        let code = construct_msrd(&profile, 3, &phi).unwrap();
        assert_eq!(min_sum_rank_distance(&code, 10_000).unwrap(), 1);
    }

    #[test]
    fn sum_rank_agrees_with_tagged_rank() {
        let (phi, f) = setup(3, 1, 2);
        let tower = phi.tower();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let profile = SumRankProfile::new(vec![2, 1]).unwrap();
        let whole = SumRankProfile::new(vec![3]).unwrap();
        let ones = SumRankProfile::new(vec![1, 1, 1]).unwrap();
        for _ in 0..200 {
            let v: Vec<_> = (0..3).map(|_| f.random(&mut rng)).collect();
            let sr = sum_rank(tower, &v, &profile).unwrap();
            assert_eq!(sr, tagged_rank(tower, &v, &profile));
            let r = sum_rank(tower, &v, &whole).unwrap();
            assert_eq!(r, crate::codes::rank_over_base(tower, &v, Level::Fq).unwrap());
            assert!(r <= sr);
            assert_eq!(sum_rank(tower, &v, &ones).unwrap(), v.iter().filter(|x| !x.is_zero()).count());
        }
    }

    #[test]
    fn errors() {
        let (phi, f) = setup(3, 1, 2);
        let profile = SumRankProfile::new(vec![2, 2]).unwrap();
        assert_eq!(
            sum_rank(phi.tower(), &[f.one()], &profile),
            Err(Error::LengthMismatch { expected: 4, got: 1 })
        );
        let three = SumRankProfile::new(vec![1, 1, 1]).unwrap();
        assert!(matches!(construct_msrd(&three, 1, &phi), Err(Error::ProfileViolation(_))));
        let wide = SumRankProfile::new(vec![3]).unwrap();
        assert!(matches!(construct_msrd(&wide, 1, &phi), Err(Error::ProfileViolation(_))));
        assert!(matches!(construct_msrd(&profile, 5, &phi), Err(Error::BadDimension(_))));
        let code = construct_msrd(&profile, 2, &phi).unwrap();
        assert!(matches!(min_sum_rank_distance(&code, 5), Err(Error::BudgetExceeded { needed: 10, budget: 5 })));
    }
}
