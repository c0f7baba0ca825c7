//! Fox derivatives and the Alexander matrix.

use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::abelian::AbelianizationMap;
use crate::laurent::{LaurentPoly, Monomial, VarContext};
use crate::matrix::Matrix;
use crate::presentation::{Presentation, Word};
use crate::scalar::Scalar;
use crate::Laurent;

/// `sum_{j = lo}^{hi} m^j`, zero when `lo > hi`.
fn power_sum<T: Scalar>(ctx: &Arc<VarContext>, m: &Monomial, lo: i64, hi: i64) -> LaurentPoly<T> {
    LaurentPoly::from_terms(ctx, (lo..=hi).map(|j| (m.pow(j, ctx), T::one())))
}

/// `D(g^l)` for a generator with image `a`: `1 + a + .. + a^(l-1)` for
/// `l > 0` and `-(a^-1 + .. + a^l)` for `l < 0`.
pub fn power_derivative<T: Scalar>(ctx: &Arc<VarContext>, a: &Monomial, l: i64) -> LaurentPoly<T> {
    if l >= 0 {
        power_sum(ctx, a, 0, l - 1)
    } else {
        -power_sum(ctx, a, l, -1)
    }
}

/// `D_i(w)` by the product rule, one letter at a time from the left.
///
/// A letter `g_i` at prefix `u` contributes `alpha(u)`, a letter `g_i^-1`
/// contributes `-alpha(u g_i^-1)`.
pub fn fox_derivative<T: Scalar>(w: &Word, i: usize, phi: &AbelianizationMap) -> LaurentPoly<T> {
    let ctx = phi.context();
    let mut terms: Vec<(Monomial, T)> = Vec::new();
    let mut prefix = Monomial::identity(ctx);
    for s in w.syllables() {
        let a = phi.image(s.generator);
        let step = if s.exponent > 0 { a.clone() } else { a.inverse(ctx) };
        for _ in 0..s.exponent.unsigned_abs() {
            if s.generator == i {
                if s.exponent > 0 {
                    terms.push((prefix.clone(), T::one()));
                    prefix = prefix.mul(&step, ctx);
                } else {
                    prefix = prefix.mul(&step, ctx);
                    terms.push((prefix.clone(), -T::one()));
                }
            } else {
                prefix = prefix.mul(&step, ctx);
            }
        }
    }
    LaurentPoly::from_terms(ctx, terms)
}

/// `D_i(w)` by the syllable algorithm: drop everything after the last
/// `g_i`-syllable, then work from the right, replacing a foreign syllable by
/// its image times the accumulated derivative and a `g_i^l` syllable by
/// `D(g_i^l) + alpha(g_i)^l` times it.
pub fn fox_derivative_steps<T: Scalar>(w: &Word, i: usize, phi: &AbelianizationMap) -> LaurentPoly<T> {
    let ctx = phi.context();
    let syl = w.syllables();
    let Some(last) = syl.iter().rposition(|s| s.generator == i) else {
        return LaurentPoly::zero(ctx);
    };
    let mut acc = LaurentPoly::zero(ctx);
    for s in syl[..=last].iter().rev() {
        let image = phi.image(s.generator).pow(s.exponent, ctx);
        acc = acc.shift(&image);
        if s.generator == i {
            acc = &acc + &power_derivative(ctx, phi.image(i), s.exponent);
        }
    }
    acc
}

/// The Alexander matrix: row `i` is a generator, column `j` a relation,
/// entry `D_i(R_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlexanderMatrix {
    map: AbelianizationMap,
    entries: Matrix<Laurent>,
}

impl AlexanderMatrix {
    pub fn new(map: AbelianizationMap, entries: Matrix<Laurent>) -> Self {
        assert_eq!(entries.rows(), map.generator_count(), "one row per generator");
        AlexanderMatrix { map, entries }
    }

    pub fn map(&self) -> &AbelianizationMap {
        &self.map
    }

    pub fn context(&self) -> &Arc<VarContext> {
        self.map.context()
    }

    pub fn entries(&self) -> &Matrix<Laurent> {
        &self.entries
    }

    pub fn entry(&self, generator: usize, relation: usize) -> &Laurent {
        self.entries.get(generator, relation)
    }

    /// Number of generators.
    pub fn rows(&self) -> usize {
        self.entries.rows()
    }

    /// Number of relations.
    pub fn cols(&self) -> usize {
        self.entries.cols()
    }

    /// Same map, new entries (same shape).
    pub fn with_entries(&self, entries: Matrix<Laurent>) -> Self {
        AlexanderMatrix::new(self.map.clone(), entries)
    }

    /// `{"rows": n, "cols": m, "entries": [[term list, ..], ..]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.entry(i, j).to_term_list()).collect())
            .collect();
        serde_json::json!({
            "variables": self.context().free_names(),
            "rows": self.rows(),
            "cols": self.cols(),
            "entries": rows,
        })
    }
}

/// All `n * m` Fox derivatives, computed in parallel.
pub fn alexander_matrix(p: &Presentation, phi: &AbelianizationMap) -> AlexanderMatrix {
    let (n, m) = (p.generator_count(), p.relation_count());
    let cells: Vec<Laurent> = (0..n * m)
        .into_par_iter()
        .map(|k| fox_derivative::<BigInt>(&p.relations()[k % m], k / m, phi))
        .collect();
    let mut it = cells.into_iter();
    let entries = Matrix::from_fn(n, m, |_, _| it.next().unwrap());
    AlexanderMatrix::new(phi.clone(), entries)
}
