//! Finite abelian covers: index-`n` sublattices of the free part of
//! `Gamma^ab`, their character groups, and betti numbers by the jump formula
//! `b1(cover) = b1 + sum_{rho != 1} #{ i >= 1 : rho in V_i }`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{abelianization, hermite_normal_form, smith_normal_form, AbelianizationMap};
use crate::fox::{alexander_matrix, AlexanderMatrix};
use crate::laurent::FiniteCharacter;
use crate::matrix::Matrix;
use crate::presentation::Presentation;
use crate::strata::{RankCache, StrataError};
use crate::IntMatrix;

#[derive(Debug, Error, PartialEq)]
pub enum CoversError {
    #[error("index must be positive, got {0}")]
    NonPositiveIndex(i64),
    #[error("basis is singular or not square")]
    SingularBasis,
    #[error("H1 has torsion {0:?}; cover enumeration needs a torsion-free abelianization")]
    TorsionInH1(Vec<i64>),
    #[error("lattice rank {lattice} does not match the {variables} free variables")]
    RankMismatch { lattice: usize, variables: usize },
    #[error(transparent)]
    Strata(#[from] StrataError),
}

/// A full-rank sublattice of `Z^f`, stored as its row-style Hermite basis:
/// upper triangular, positive diagonal, entries above a pivot in `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sublattice {
    basis: Vec<Vec<i64>>,
}

impl Sublattice {
    /// Normalizes any basis (rows spanning the lattice) to Hermite form.
    pub fn from_basis(rows: Vec<Vec<i64>>) -> Result<Self, CoversError> {
        let f = rows.len();
        if f == 0 || rows.iter().any(|r| r.len() != f) {
            return Err(CoversError::SingularBasis);
        }
        let h = hermite_normal_form(&Matrix::from_rows(rows));
        if (0..f).any(|i| *h.get(i, i) == 0) {
            return Err(CoversError::SingularBasis);
        }
        Ok(Sublattice { basis: h.into_rows() })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        Matrix::from_rows(self.basis.clone())
    }

    /// Index in `Z^f`, the product of the diagonal.
    pub fn index(&self) -> i64 {
        (0..self.rank()).map(|i| self.basis[i][i]).product()
    }

    /// Upper-triangular entries row by row: `[a, b, d]` for `[[a, b], [0, d]]`.
    pub fn hnf_entries(&self) -> Vec<i64> {
        (0..self.rank()).flat_map(|i| self.basis[i][i..].to_vec()).collect()
    }

    /// Invariant factors of `Z^f / L`, all `f` of them (leading ones included).
    pub fn invariant_factors(&self) -> Vec<i64> {
        let s = smith_normal_form(&self.basis_matrix());
        (0..self.rank()).map(|i| *s.d.get(i, i)).collect()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        // back-substitute through the upper-triangular basis
        let mut rest = v.to_vec();
        for i in 0..self.rank() {
            let p = self.basis[i][i];
            if rest[i] % p != 0 {
                return false;
            }
            let k = rest[i] / p;
            for (j, x) in rest.iter_mut().enumerate().skip(i) {
                *x -= k * self.basis[i][j];
            }
        }
        rest.iter().all(|&x| x == 0)
    }
}

/// `sigma(n)`, the sum of the divisors of `n`.
pub fn sigma(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).sum()
}

fn hnf_rec(f: usize, row: usize, n: i64, acc: &mut Vec<Vec<i64>>, out: &mut Vec<Sublattice>) {
    if row == f {
        if n == 1 {
            out.push(Sublattice { basis: acc.clone() });
        }
        return;
    }
    if row == f - 1 {
        let mut r = vec![0; f];
        r[row] = n;
        acc.push(r);
        hnf_rec(f, row + 1, 1, acc, out);
        acc.pop();
        return;
    }
    for d in (1..=n).filter(|d| n % d == 0) {
        let mut r = vec![0; f];
        r[row] = d;
        acc.push(r);
        hnf_rec(f, row + 1, n / d, acc, out);
        acc.pop();
    }
}

/// Fills the entries above the diagonal, each in `[0, pivot of its column)`.
fn fill_above(diag: &Sublattice) -> Vec<Sublattice> {
    let f = diag.rank();
    let slots: Vec<(usize, usize)> = (0..f).flat_map(|i| (i + 1..f).map(move |j| (i, j))).collect();
    let mut out = vec![diag.clone()];
    for &(i, j) in &slots {
        let p = diag.basis[j][j];
        out = out
            .into_iter()
            .flat_map(|l| {
                (0..p).map(move |b| {
                    let mut l = l.clone();
                    l.basis[i][j] = b;
                    l
                })
            })
            .collect();
    }
    out
}

/// Every index-`n` sublattice of `Z^f`, in lexicographic order of
/// [`Sublattice::hnf_entries`].
pub fn sublattices_of_rank(f: usize, n: i64) -> Result<Vec<Sublattice>, CoversError> {
    if n <= 0 {
        return Err(CoversError::NonPositiveIndex(n));
    }
    if f == 0 {
        return Err(CoversError::SingularBasis);
    }
    let mut diags = Vec::new();
    hnf_rec(f, 0, n, &mut Vec::new(), &mut diags);
    let mut out: Vec<Sublattice> = diags.iter().flat_map(fill_above).collect();
    out.sort_by_key(|l| l.hnf_entries());
    Ok(out)
}

/// Index-`n` sublattices of `Z^2`; there are `sigma(n)` of them.
pub fn sublattices(n: i64) -> Result<Vec<Sublattice>, CoversError> {
    sublattices_of_rank(2, n)
}

/// The characters of `Z^f / L` as characters of `Z^f`, over
/// `zeta_m` with `m` the exponent of the quotient; the trivial one first.
///
/// With `U B V = diag(d)`, a character `e` kills `L` iff `diag(d) V^-1 e = 0`
/// mod `m`, so `e = V w` with `w_i` a multiple of `m / d_i`.
pub fn characters_of_quotient(l: &Sublattice) -> Vec<FiniteCharacter> {
    let s = smith_normal_form(&l.basis_matrix());
    let f = l.rank();
    let d: Vec<i64> = (0..f).map(|i| *s.d.get(i, i)).collect();
    let m = d.iter().fold(1i64, |acc, &x| num_integer::lcm(acc, x));
    let mut ks: Vec<Vec<i64>> = vec![Vec::new()];
    for &di in &d {
        ks = ks.into_iter().flat_map(|k| (0..di).map(move |x| [k.clone(), vec![x]].concat())).collect();
    }
    ks.into_iter()
        .map(|k| {
            let w: Vec<i64> = k.iter().zip(&d).map(|(&ki, &di)| ki * (m / di)).collect();
            let e: Vec<i64> = (0..f).map(|r| (0..f).map(|c| s.v.get(r, c) * w[c]).sum::<i64>()).collect();
            FiniteCharacter::new(m as u64, e).expect("positive modulus")
        })
        .collect()
}

/// `b1` of the cover for `L`, evaluating every nontrivial character of the
/// quotient against `A`.
pub fn betti_of_cover(a: &AlexanderMatrix, b1: usize, l: &Sublattice) -> Result<usize, CoversError> {
    betti_of_cover_cached(&RankCache::new(a), b1, l)
}

pub fn betti_of_cover_cached(cache: &RankCache<'_>, b1: usize, l: &Sublattice) -> Result<usize, CoversError> {
    let a = cache.matrix();
    let f = a.context().free_rank();
    if l.rank() != f || !a.context().is_torsion_free() {
        return Err(CoversError::RankMismatch { lattice: l.rank(), variables: f });
    }
    let n = a.rows();
    let mut total = b1;
    for chi in characters_of_quotient(l) {
        if chi.is_trivial() {
            continue;
        }
        let rank = cache.rank(&chi)?;
        total += (1..n).filter(|&i| rank < n - i).count();
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub n: i64,
    pub hnf: Vec<i64>,
    pub invariant_factors: Vec<i64>,
    pub b1: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CensusTotal {
    pub n: i64,
    pub rows: usize,
    pub sigma: u64,
    pub min_b1: Option<usize>,
    pub max_b1: Option<usize>,
}

/// Streams one row per sublattice of index `1..=n_max`, ordered by `n` then
/// Hermite entries, and returns per-`n` totals.
pub fn betti_census(
    p: &Presentation,
    phi: &AbelianizationMap,
    n_max: i64,
    mut sink: impl FnMut(&CensusRow),
) -> Result<Vec<CensusTotal>, CoversError> {
    if n_max < 1 {
        return Err(CoversError::NonPositiveIndex(n_max));
    }
    let ab = abelianization(p);
    if !ab.is_torsion_free() {
        return Err(CoversError::TorsionInH1(ab.torsion.clone()));
    }
    let a = alexander_matrix(p, phi);
    census_of_matrix(&a, ab.free_rank, n_max, &mut sink)
}

/// As [`betti_census`] for a given matrix and base betti number.
pub fn census_of_matrix(
    a: &AlexanderMatrix,
    b1: usize,
    n_max: i64,
    sink: &mut dyn FnMut(&CensusRow),
) -> Result<Vec<CensusTotal>, CoversError> {
    let f = a.context().free_rank();
    let cache = RankCache::new(a);
    let mut totals = Vec::new();
    for n in 1..=n_max {
        let lattices = sublattices_of_rank(f, n)?;
        let rows: Vec<CensusRow> = lattices
            .par_iter()
            .map(|l| {
                Ok(CensusRow {
                    n,
                    hnf: l.hnf_entries(),
                    invariant_factors: l.invariant_factors(),
                    b1: betti_of_cover_cached(&cache, b1, l)?,
                })
            })
            .collect::<Result<_, CoversError>>()?;
        rows.iter().for_each(&mut *sink);
        totals.push(CensusTotal {
            n,
            rows: rows.len(),
            sigma: sigma(n as u64),
            min_b1: rows.iter().map(|r| r.b1).min(),
            max_b1: rows.iter().map(|r| r.b1).max(),
        });
    }
    Ok(totals)
}
