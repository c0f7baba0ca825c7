//! Ranks of the Alexander matrix at finite characters, the strata
//! `V_i = { rho : rank A_rho < n - i }`, minors, and the certification run
//! for the Cartwright–Steger matrix.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fox::AlexanderMatrix;
use crate::laurent::{CyclotomicField, FiniteCharacter, LaurentError, Monomial, UniPoly, VarContext};
use crate::matrix::{combinations, Matrix};
use crate::{Cyclotomic, Laurent, QPoly};

#[derive(Debug, Error, PartialEq)]
pub enum StrataError {
    #[error("character {0} does not fit the matrix's variables")]
    ContextMismatch(String),
    #[error("stratum index {i} out of range for {n} generators")]
    InvalidIndex { i: usize, n: usize },
    #[error("minor size {k} exceeds {max}")]
    InvalidMinorSize { k: usize, max: usize },
    #[error("substitution must land in one free variable and no torsion")]
    NotUnivariate,
    #[error(transparent)]
    Laurent(#[from] LaurentError<BigInt>),
}

/// `A` evaluated at `chi` inside `field`.
pub fn evaluate_matrix(
    a: &AlexanderMatrix,
    chi: &FiniteCharacter,
    field: &Arc<CyclotomicField<BigRational>>,
) -> Result<Matrix<Cyclotomic>, StrataError> {
    let mut cells = Vec::with_capacity(a.rows() * a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            cells.push(a.entry(i, j).evaluate_in(chi, field)?);
        }
    }
    let mut it = cells.into_iter();
    Ok(Matrix::from_fn(a.rows(), a.cols(), |_, _| it.next().unwrap()))
}

/// Exact rank of `A_rho` over `Q(zeta_m)`, `m` the order of `rho`.
pub fn rank_at_character(a: &AlexanderMatrix, chi: &FiniteCharacter) -> Result<usize, StrataError> {
    if !chi.fits(a.context()) {
        return Err(StrataError::ContextMismatch(chi.to_string()));
    }
    let chi = chi.normalized();
    let field = CyclotomicField::new(chi.modulus());
    Ok(evaluate_matrix(a, &chi, &field)?.rank_over_field())
}

/// Rank lookups shared across threads, keyed by Galois orbit.
pub struct RankCache<'a> {
    matrix: &'a AlexanderMatrix,
    ranks: Mutex<HashMap<FiniteCharacter, usize>>,
}

impl<'a> RankCache<'a> {
    pub fn new(matrix: &'a AlexanderMatrix) -> Self {
        RankCache { matrix, ranks: Mutex::new(HashMap::new()) }
    }

    pub fn matrix(&self) -> &AlexanderMatrix {
        self.matrix
    }

    pub fn rank(&self, chi: &FiniteCharacter) -> Result<usize, StrataError> {
        if !chi.fits(self.matrix.context()) {
            return Err(StrataError::ContextMismatch(chi.to_string()));
        }
        let key = chi.galois_representative();
        if let Some(&r) = self.ranks.lock().unwrap().get(&key) {
            return Ok(r);
        }
        let r = rank_at_character(self.matrix, &key)?;
        self.ranks.lock().unwrap().insert(key, r);
        Ok(r)
    }

    /// Number of distinct orbits evaluated so far.
    pub fn len(&self) -> usize {
        self.ranks.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `rho in V_i`, i.e. `rank A_rho < n - i`.
pub fn stratum_membership(a: &AlexanderMatrix, chi: &FiniteCharacter, i: usize) -> Result<bool, StrataError> {
    let n = a.rows();
    if i >= n {
        return Err(StrataError::InvalidIndex { i, n });
    }
    Ok(rank_at_character(a, chi)? < n - i)
}

/// Indices `i` in `0..n` with `rank < n - i`.
pub fn strata_of_rank(rank: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| rank < n - i).collect()
}

/// All `k x k` minors, ordered by row set then column set, both
/// lexicographically.
pub fn minors(a: &AlexanderMatrix, k: usize) -> Result<Vec<Laurent>, StrataError> {
    Ok(minors_with_index(a, k)?.into_iter().map(|(_, _, p)| p).collect())
}

/// Row indices, column indices and determinant of one minor.
pub type IndexedMinor = (Vec<usize>, Vec<usize>, Laurent);

/// As [`minors`], paired with the row and column index sets.
pub fn minors_with_index(a: &AlexanderMatrix, k: usize) -> Result<Vec<IndexedMinor>, StrataError> {
    let max = a.rows().min(a.cols());
    if k == 0 || k > max {
        return Err(StrataError::InvalidMinorSize { k, max });
    }
    let row_sets = combinations(a.rows(), k);
    let col_sets = combinations(a.cols(), k);
    let pairs: Vec<(&Vec<usize>, &Vec<usize>)> =
        row_sets.iter().flat_map(|r| col_sets.iter().map(move |c| (r, c))).collect();
    Ok(pairs
        .into_par_iter()
        .map(|(r, c)| (r.clone(), c.clone(), a.entries().submatrix(r, c).cofactor_det()))
        .collect())
}

/// Generic rank on a one-variable restriction and the points where it drops.
#[derive(Clone, Debug, PartialEq)]
pub struct LineAnalysis {
    pub generic_rank: usize,
    /// Monic, no factor of the variable; its roots are the rank drops.
    pub drop_locus: QPoly,
    pub context: Arc<VarContext>,
}

impl LineAnalysis {
    /// The drop locus with integer coefficients and positive leading term.
    pub fn drop_locus_laurent(&self) -> Laurent {
        let denom_lcm = self
            .drop_locus
            .coeffs()
            .iter()
            .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<BigInt> =
            self.drop_locus.coeffs().iter().map(|c| (c * BigRational::from(denom_lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c));
        let content = if content.is_zero() { BigInt::one() } else { content };
        Laurent::from_terms(
            &self.context,
            ints.into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (Monomial::from_free(vec![k as i64]), c / &content)),
        )
    }

    /// Largest `k` with `(t - 1)^k` dividing the locus, and whether the
    /// locus is exactly that power.
    pub fn power_of_t_minus_one(&self) -> (usize, bool) {
        let base = QPoly::from_i64s(&[-1, 1]);
        let mut p = self.drop_locus.clone();
        let mut k = 0;
        while let Some(q) = p.exact_div(&base) {
            p = q;
            k += 1;
        }
        (k, p == QPoly::one())
    }
}

fn to_unipoly(p: &Laurent, shift: i64) -> QPoly {
    let mut coeffs = Vec::new();
    for (m, c) in p.terms() {
        let k = (m.free[0] - shift) as usize;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, BigRational::zero());
        }
        coeffs[k] = BigRational::from(c.clone());
    }
    UniPoly::new(coeffs)
}

/// Substitutes `free_images` (into a one-variable context) and analyses the
/// resulting matrix over `Q(t)`.
pub fn line_rank_analysis(
    a: &AlexanderMatrix,
    target: &Arc<VarContext>,
    free_images: &[Monomial],
) -> Result<LineAnalysis, StrataError> {
    if target.free_rank() != 1 || !target.is_torsion_free() || !a.context().is_torsion_free() {
        return Err(StrataError::NotUnivariate);
    }
    let mut rows = Vec::with_capacity(a.rows());
    for i in 0..a.rows() {
        let subs: Vec<Laurent> =
            (0..a.cols()).map(|j| a.entry(i, j).substitute(target, free_images, &[])).collect::<Result<_, _>>()?;
        let shift = subs.iter().filter(|p| !p.is_zero()).map(|p| p.min_free_exponents()[0]).min().unwrap_or(0);
        rows.push(subs.iter().map(|p| to_unipoly(p, shift)).collect());
    }
    let m: Matrix<QPoly> = if rows.is_empty() { Matrix::empty(0, a.cols()) } else { Matrix::from_rows(rows) };
    let g = m.rank_fraction_free();
    let mut locus = QPoly::one();
    if g > 0 {
        let mut acc = QPoly::zero();
        'outer: for r in combinations(m.rows(), g) {
            for c in combinations(m.cols(), g) {
                let d = m.submatrix(&r, &c).cofactor_det();
                acc = acc.gcd(&d);
                if acc == QPoly::one() {
                    break 'outer;
                }
            }
        }
        locus = acc.strip_x_power().0.monic();
    }
    Ok(LineAnalysis { generic_rank: g, drop_locus: locus, context: Arc::clone(target) })
}

/// The restriction `s -> r` of a matrix over `r, s`.
pub fn diagonal_line_analysis(a: &AlexanderMatrix) -> Result<LineAnalysis, StrataError> {
    if a.context().free_rank() != 2 {
        return Err(StrataError::NotUnivariate);
    }
    let name = a.context().free_names()[0].clone();
    let target = VarContext::new(vec![name], Vec::new());
    let t = Monomial::from_free(vec![1]);
    line_rank_analysis(a, &target, &[t.clone(), t])
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct CertifyConfig {
    pub modulus_bound: u64,
    pub samples: usize,
    pub seed: u64,
    /// Largest modulus drawn by the off-line sampler.
    pub sample_modulus_max: u64,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig { modulus_bound: 12, samples: 200, seed: 0x005e_edc5, sample_modulus_max: 30 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinorFailure {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub remainder: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Divisibility {
    pub checked: usize,
    pub passed: usize,
    pub zero_minors: usize,
    pub failures: Vec<MinorFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LineReport {
    pub generic_rank: usize,
    pub drop_locus: String,
    pub drop_locus_terms: serde_json::Value,
    pub power_of_r_minus_one: Option<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub m: u64,
    pub a: i64,
    pub b: i64,
    pub rank: usize,
    pub expected: usize,
    pub strata: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub trials: usize,
    pub min_rank_off_line: Option<usize>,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StrataReport {
    pub divisibility: Divisibility,
    pub line: LineReport,
    pub torsion_sweep: Vec<SweepEntry>,
    pub sweep_failures: usize,
    /// Nontrivial swept characters lying in `V_1`.
    pub v1_nontrivial: Vec<String>,
    pub sampling: Sampling,
    pub verdict: String,
    pub witness: Option<String>,
}

impl StrataReport {
    pub fn confirmed(&self) -> bool {
        self.verdict == "confirmed"
    }

    /// Entries of the sweep whose rank differs from the expected pattern.
    pub fn sweep_mismatches(&self) -> impl Iterator<Item = &SweepEntry> {
        self.torsion_sweep.iter().filter(|e| e.rank != e.expected)
    }
}

/// Expected rank at `(zeta_m^a, zeta_m^b)`: 1 at the trivial character, 2 on
/// the diagonal, 3 elsewhere.
pub fn expected_cs_rank(m: u64, a: i64, b: i64) -> usize {
    let m = m as i64;
    let (a, b) = (a.rem_euclid(m), b.rem_euclid(m));
    if a == 0 && b == 0 {
        1
    } else if a == b {
        2
    } else {
        3
    }
}

/// The full sweep over `(Z/m)^2` for `m = 1..=bound`.
pub fn torsion_sweep(cache: &RankCache<'_>, bound: u64) -> Result<Vec<SweepEntry>, StrataError> {
    let n = cache.matrix().rows();
    let chars: Vec<(u64, i64, i64)> =
        (1..=bound).flat_map(|m| (0..m as i64).flat_map(move |a| (0..m as i64).map(move |b| (m, a, b)))).collect();
    chars
        .into_par_iter()
        .map(|(m, a, b)| {
            let chi = FiniteCharacter::new(m, vec![a, b]).expect("positive modulus");
            let rank = cache.rank(&chi)?;
            Ok(SweepEntry { m, a, b, rank, expected: expected_cs_rank(m, a, b), strata: strata_of_rank(rank, n) })
        })
        .collect()
}

/// Checks the stratification `{r = s} ⊃ {1} ⊃ ∅` on a matrix over `r, s`.
pub fn certify_cs_strata(a: &AlexanderMatrix, cfg: &CertifyConfig) -> Result<StrataReport, StrataError> {
    let ctx = a.context().clone();
    if ctx.free_rank() != 2 || !ctx.is_torsion_free() {
        return Err(StrataError::NotUnivariate);
    }
    let mut witness: Option<String> = None;

    // divisibility of the 3x3 minors by r - s
    let r_minus_s = Laurent::from_free_terms(&ctx, [(1, &[1i64, 0][..]), (-1, &[0, 1][..])]);
    let k = a.rows().min(a.cols()).min(3);
    let all = minors_with_index(a, k)?;
    let results: Vec<(bool, bool, Option<MinorFailure>)> = all
        .par_iter()
        .map(|(r, c, p)| match p.exact_divide(&r_minus_s) {
            Ok(_) => (true, p.is_zero(), None),
            Err(LaurentError::NotDivisible { remainder }) => (
                false,
                false,
                Some(MinorFailure { rows: r.clone(), cols: c.clone(), remainder: remainder.to_expanded_string() }),
            ),
            Err(e) => (false, false, Some(MinorFailure { rows: r.clone(), cols: c.clone(), remainder: e.to_string() })),
        })
        .collect();
    let divisibility = Divisibility {
        checked: results.len(),
        passed: results.iter().filter(|r| r.0).count(),
        zero_minors: results.iter().filter(|r| r.1).count(),
        failures: results.into_iter().filter_map(|r| r.2).collect(),
    };
    if let Some(f) = divisibility.failures.first() {
        witness.get_or_insert(format!("minor rows {:?} cols {:?} not divisible by r - s", f.rows, f.cols));
    }

    // restriction to the diagonal
    let la = diagonal_line_analysis(a)?;
    let (power, exact) = la.power_of_t_minus_one();
    let line_ok = la.generic_rank == 2 && exact && power >= 1;
    let locus = la.drop_locus_laurent();
    let line = LineReport {
        generic_rank: la.generic_rank,
        drop_locus: locus.to_expanded_string(),
        drop_locus_terms: locus.to_term_list(),
        power_of_r_minus_one: exact.then_some(power),
        passed: line_ok,
    };
    if !line_ok {
        witness.get_or_insert(format!("line s = r: generic rank {}, drop locus {}", line.generic_rank, line.drop_locus));
    }

    // finite characters of small modulus
    let cache = RankCache::new(a);
    let sweep = torsion_sweep(&cache, cfg.modulus_bound)?;
    let sweep_failures = sweep.iter().filter(|e| e.rank != e.expected).count();
    if let Some(e) = sweep.iter().find(|e| e.rank != e.expected) {
        witness.get_or_insert(format!("character (zeta_{0}^{1}, zeta_{0}^{2}) has rank {3}, expected {4}", e.m, e.a, e.b, e.rank, e.expected));
    }
    let v1_nontrivial = sweep
        .iter()
        .filter(|e| (e.a != 0 || e.b != 0) && e.strata.contains(&1))
        .map(|e| format!("(zeta_{0}^{1}, zeta_{0}^{2})", e.m, e.a, e.b))
        .collect();

    // random characters off the diagonal
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let draws: Vec<FiniteCharacter> = (0..cfg.samples)
        .map(|_| {
            let m = rng.gen_range(2..=cfg.sample_modulus_max.max(2));
            let a = rng.gen_range(0..m as i64);
            let off = rng.gen_range(1..m as i64);
            FiniteCharacter::new(m, vec![a, a + off]).expect("positive modulus")
        })
        .collect();
    let ranks: Vec<usize> = draws.par_iter().map(|chi| cache.rank(chi)).collect::<Result<_, _>>()?;
    let min_rank = ranks.iter().copied().min();
    let sample_witness = draws.iter().zip(&ranks).find(|(_, &r)| r < 3).map(|(chi, r)| format!("{chi} has rank {r}"));
    if let Some(w) = &sample_witness {
        witness.get_or_insert(format!("sampled {w}"));
    }
    let sampling = Sampling { seed: cfg.seed, trials: cfg.samples, min_rank_off_line: min_rank, witness: sample_witness };

    let ok = divisibility.failures.is_empty() && line_ok && sweep_failures == 0 && sampling.witness.is_none();
    Ok(StrataReport {
        divisibility,
        line,
        torsion_sweep: sweep,
        sweep_failures,
        v1_nontrivial,
        sampling,
        verdict: if ok { "confirmed".into() } else { "refuted".into() },
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::{monomial_assignment, UserImages};
    use crate::fixtures::cs_alexander_matrix;
    use crate::fox::alexander_matrix;
    use crate::presentation::Presentation;

    type Terms = Vec<(i64, [i64; 2])>;

    fn rs_matrix(entries: Vec<Vec<Terms>>) -> AlexanderMatrix {
        let ctx = VarContext::free(&["r", "s"]);
        let n = entries.len();
        let names: Vec<String> = (0..n).map(|i| format!("g{i}")).collect();
        let p = Presentation::free(&names.iter().map(String::as_str).collect::<Vec<_>>()).unwrap();
        let images = (0..n).map(|_| Monomial::from_free(vec![0, 0])).collect();
        let map = monomial_assignment(&p, Some(UserImages { ctx: ctx.clone(), images })).unwrap();
        let rows = entries
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|terms| Laurent::from_free_terms(&ctx, terms.iter().map(|(c, e)| (*c, &e[..]))))
                    .collect()
            })
            .collect();
        AlexanderMatrix::new(map, Matrix::from_rows(rows))
    }

    #[test]
    fn two_by_two_minor() {
        let a = rs_matrix(vec![vec![vec![(1, [1, 0])], vec![(1, [0, 1])]], vec![vec![(1, [0, 1])], vec![(1, [1, 0])]]]);
        let m = minors(&a, 2).unwrap();
        let ctx = a.context().clone();
        assert_eq!(m, vec![Laurent::from_free_terms(&ctx, [(1, &[2i64, 0][..]), (-1, &[0, 2][..])])]);
        assert_eq!(minors(&a, 1).unwrap().len(), 4);
        assert!(minors(&a, 3).is_err());
        let diag = FiniteCharacter::new(4, vec![1, 1]).unwrap();
        assert_eq!(rank_at_character(&a, &diag).unwrap(), 1);
        let off = FiniteCharacter::new(4, vec![1, 2]).unwrap();
        assert_eq!(rank_at_character(&a, &off).unwrap(), 2);
    }

    #[test]
    fn cs_trivial_and_diagonal_ranks() {
        let a = cs_alexander_matrix();
        let ctx = a.context().clone();
        assert_eq!(rank_at_character(&a, &FiniteCharacter::trivial(&ctx)).unwrap(), 1);
        let z3 = FiniteCharacter::new(3, vec![1, 1]).unwrap();
        assert_eq!(rank_at_character(&a, &z3).unwrap(), 2);
        assert!(stratum_membership(&a, &FiniteCharacter::trivial(&ctx), 1).unwrap());
        assert!(!stratum_membership(&a, &FiniteCharacter::trivial(&ctx), 2).unwrap());
        assert!(stratum_membership(&a, &z3, 0).unwrap());
        assert!(!stratum_membership(&a, &z3, 1).unwrap());
        assert_eq!(stratum_membership(&a, &z3, 3), Err(StrataError::InvalidIndex { i: 3, n: 3 }));
    }

    #[test]
    fn trefoil_line() {
        let p = Presentation::parse("gens: a b\nrel: a^2 b^-3").unwrap();
        let ctx = VarContext::free(&["t"]);
        let images = vec![Monomial::from_free(vec![3]), Monomial::from_free(vec![2])];
        let phi = monomial_assignment(&p, Some(UserImages { ctx: ctx.clone(), images })).unwrap();
        let a = alexander_matrix(&p, &phi);
        let la = line_rank_analysis(&a, &ctx, &[Monomial::from_free(vec![1])]).unwrap();
        assert_eq!(la.generic_rank, 1);
        assert_eq!(la.drop_locus, QPoly::from_i64s(&[1, -1, 1]));
    }

    #[test]
    fn zero_matrix_line() {
        let a = rs_matrix(vec![vec![vec![]], vec![vec![]]]);
        let la = diagonal_line_analysis(&a).unwrap();
        assert_eq!(la.generic_rank, 0);
        assert_eq!(la.drop_locus, QPoly::one());
    }

    #[test]
    fn cache_agrees_with_direct_rank() {
        let a = cs_alexander_matrix();
        let cache = RankCache::new(&a);
        for (m, x, y) in [(5, 1, 2), (5, 2, 4), (6, 1, 5), (4, 2, 2), (8, 4, 0)] {
            let chi = FiniteCharacter::new(m, vec![x, y]).unwrap();
            assert_eq!(cache.rank(&chi).unwrap(), rank_at_character(&a, &chi).unwrap());
        }
        assert!(cache.len() <= 5);
    }

    #[test]
    fn strata_are_nested() {
        for n in 1..5 {
            for r in 0..=n {
                let s = strata_of_rank(r, n);
                for w in s.windows(2) {
                    assert_eq!(w[1], w[0] + 1);
                }
                assert!(s.is_empty() || s[0] == 0);
            }
        }
    }
}
