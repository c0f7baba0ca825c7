//! Abelianization through integer normal forms, and monomial assignments
//! `Gamma -> Z[Gamma^ab]`.

use std::fmt::Debug;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::Signed;
use thiserror::Error;

use crate::laurent::{Monomial, VarContext};
use crate::matrix::Matrix;
use crate::presentation::{Presentation, Word};
use crate::scalar::Scalar;
use crate::IntMatrix;

/// Integer types the normal-form routines run over.
pub trait IntScalar: Scalar + Integer + Signed {}
impl<T: Scalar + Integer + Signed> IntScalar for T {}

/// `m x n` matrix whose row `j` is the exponent-sum vector of relation `j`.
pub fn exponent_matrix(p: &Presentation) -> IntMatrix {
    let n = p.generator_count();
    if p.relation_count() == 0 {
        return Matrix::empty(0, n);
    }
    Matrix::from_rows(p.relations().iter().map(|w| w.exponent_sums(n)).collect())
}

/// `U * M * V = D` with `U`, `V` unimodular and `D` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> SmithForm<T> {
    /// The nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<T> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d.get(i, i).clone()).filter(|x| !x.is_zero()).collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn add_row_multiple<T: IntScalar>(m: &mut Matrix<T>, target: usize, source: usize, k: &T) {
    for c in 0..m.cols() {
        let v = m.get(target, c).clone() + k.clone() * m.get(source, c).clone();
        m.set(target, c, v);
    }
}

fn add_col_multiple<T: IntScalar>(m: &mut Matrix<T>, target: usize, source: usize, k: &T) {
    for r in 0..m.rows() {
        let v = m.get(r, target).clone() + k.clone() * m.get(r, source).clone();
        m.set(r, target, v);
    }
}

fn negate_row<T: IntScalar>(m: &mut Matrix<T>, r: usize) {
    for c in 0..m.cols() {
        let v = -m.get(r, c).clone();
        m.set(r, c, v);
    }
}

fn identity<T: IntScalar>(n: usize) -> Matrix<T> {
    Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
}

/// Smith normal form by smallest-pivot elimination. The pivot is the
/// nonzero entry of least absolute value in the remaining block, ties going
/// to the lowest (row, column) index.
pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> SmithForm<T> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.clone();
    let mut u = identity::<T>(rows);
    let mut v = identity::<T>(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                if pivot.is_none_or(|(pr, pc)| x.abs() < d.get(pr, pc).abs()) {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);

        let mut clean = true;
        for r in t + 1..rows {
            if d.get(r, t).is_zero() {
                continue;
            }
            let q = d.get(r, t).div_floor(d.get(t, t));
            add_row_multiple(&mut d, r, t, &-q.clone());
            add_row_multiple(&mut u, r, t, &-q);
            if !d.get(r, t).is_zero() {
                clean = false;
            }
        }
        for c in t + 1..cols {
            if d.get(t, c).is_zero() {
                continue;
            }
            let q = d.get(t, c).div_floor(d.get(t, t));
            add_col_multiple(&mut d, c, t, &-q.clone());
            add_col_multiple(&mut v, c, t, &-q);
            if !d.get(t, c).is_zero() {
                clean = false;
            }
        }
        if !clean {
            // a smaller remainder exists; pick a new pivot for this step
            continue;
        }
        let p = d.get(t, t).clone();
        let offender = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !(d.get(r, c).clone() % p.clone()).is_zero()));
        if let Some(r) = offender {
            add_row_multiple(&mut d, t, r, &T::one());
            add_row_multiple(&mut u, t, r, &T::one());
            continue;
        }
        if d.get(t, t).is_negative() {
            negate_row(&mut d, t);
            negate_row(&mut u, t);
        }
        t += 1;
    }
    SmithForm { u, d, v }
}

/// Row-style Hermite normal form: echelon form with positive pivots, entries
/// above each pivot reduced into `[0, pivot)`, zero rows at the bottom.
pub fn hermite_normal_form<T: IntScalar>(m: &Matrix<T>) -> Matrix<T> {
    let mut h = m.clone();
    let (rows, cols) = (h.rows(), h.cols());
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let best = (pivot_row..rows)
                .filter(|&r| !h.get(r, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(best) = best else { break };
            h.swap_rows(pivot_row, best);
            let mut done = true;
            for r in pivot_row + 1..rows {
                if h.get(r, c).is_zero() {
                    continue;
                }
                let q = h.get(r, c).div_floor(h.get(pivot_row, c));
                add_row_multiple(&mut h, r, pivot_row, &-q);
                if !h.get(r, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h.get(pivot_row, c).is_zero() {
            continue;
        }
        if h.get(pivot_row, c).is_negative() {
            negate_row(&mut h, pivot_row);
        }
        pivots.push((pivot_row, c));
        pivot_row += 1;
    }
    for &(pr, pc) in &pivots {
        let p = h.get(pr, pc).clone();
        for r in 0..pr {
            let q = h.get(r, pc).div_floor(&p);
            if !q.is_zero() {
                add_row_multiple(&mut h, r, pr, &-q);
            }
        }
    }
    h
}

/// Integer determinant by fraction-free elimination.
pub fn determinant<T: IntScalar>(m: &Matrix<T>) -> T {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !a.get(r, k).is_zero()) else {
            return T::zero();
        };
        if p != k {
            a.swap_rows(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (a.get(k, k).clone() * a.get(i, j).clone() - a.get(i, k).clone() * a.get(k, j).clone())
                    / prev.clone();
                a.set(i, j, v);
            }
            a.set(i, k, T::zero());
        }
        prev = a.get(k, k).clone();
    }
    if n == 0 {
        T::one()
    } else {
        sign * a.get(n - 1, n - 1).clone()
    }
}

/// The structure of `Gamma^ab = Z^f x Z/d_1 x .. x Z/d_k`.
#[derive(Clone, Debug)]
pub struct AbelianStructure {
    pub generators: usize,
    pub free_rank: usize,
    pub torsion: Vec<i64>,
    pub smith: SmithForm<i64>,
}

impl AbelianStructure {
    /// First betti number, the free rank.
    pub fn b1(&self) -> usize {
        self.free_rank
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

pub fn abelianization(p: &Presentation) -> AbelianStructure {
    let m = exponent_matrix(p);
    let smith = smith_normal_form(&m);
    let factors = smith.invariant_factors();
    AbelianStructure {
        generators: p.generator_count(),
        free_rank: p.generator_count() - factors.len(),
        torsion: factors.into_iter().filter(|&d| d > 1).collect(),
        smith,
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AbelianError {
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("invalid assignment: relation {relation} maps to {image:?} instead of 1")]
    InvalidAssignment { relation: usize, image: Monomial },
    #[error("generator image does not fit the variable context")]
    ContextMismatch,
}

/// Images of the generators as monomials of `Z[Gamma^ab]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationMap {
    ctx: Arc<VarContext>,
    images: Vec<Monomial>,
}

impl AbelianizationMap {
    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn images(&self) -> &[Monomial] {
        &self.images
    }

    pub fn image(&self, generator: usize) -> &Monomial {
        &self.images[generator]
    }

    pub fn generator_count(&self) -> usize {
        self.images.len()
    }

    /// The monomial `alpha(w)`.
    pub fn word_image(&self, w: &Word) -> Monomial {
        w.syllables().iter().fold(Monomial::identity(&self.ctx), |acc, s| {
            acc.mul(&self.images[s.generator].pow(s.exponent, &self.ctx), &self.ctx)
        })
    }

    /// Checks that every relation maps to the identity monomial.
    pub fn validate(&self, p: &Presentation) -> Result<(), AbelianError> {
        if self.images.len() != p.generator_count() {
            return Err(AbelianError::ImageCount { expected: p.generator_count(), got: self.images.len() });
        }
        for (j, w) in p.relations().iter().enumerate() {
            let image = self.word_image(w);
            if !image.is_identity() {
                return Err(AbelianError::InvalidAssignment { relation: j, image });
            }
        }
        Ok(())
    }

    /// JSON `{generator: [[1, e_1, .., e_f], ..]}`; each image is a single term.
    pub fn to_json(&self, p: &Presentation) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        for (name, m) in p.generator_names().iter().zip(&self.images) {
            let mut term = vec![serde_json::Value::from(1)];
            term.extend(m.free.iter().chain(&m.torsion).map(|&e| serde_json::Value::from(e)));
            obj.insert(name.clone(), serde_json::json!([term]));
        }
        serde_json::Value::Object(obj)
    }
}

/// User-supplied generator images.
#[derive(Clone, Debug)]
pub struct UserImages {
    pub ctx: Arc<VarContext>,
    pub images: Vec<Monomial>,
}

fn default_free_names(f: usize) -> Vec<String> {
    match f {
        1 => vec!["t".into()],
        2 => vec!["r".into(), "s".into()],
        _ => (1..=f).map(|i| format!("t{i}")).collect(),
    }
}

/// Validated user images, or images derived from the Smith form.
///
/// Derived images read generator `i` off row `i` of `V`: free coordinates are
/// the columns past the rank, torsion coordinates the columns with invariant
/// factor `> 1`. The free block is Hermite-reduced so the result does not
/// depend on incidental pivoting choices.
pub fn monomial_assignment(
    p: &Presentation,
    user: Option<UserImages>,
) -> Result<AbelianizationMap, AbelianError> {
    if let Some(UserImages { ctx, images }) = user {
        if images.iter().any(|m| !m.fits(&ctx)) {
            return Err(AbelianError::ContextMismatch);
        }
        let map = AbelianizationMap { ctx, images };
        map.validate(p)?;
        return Ok(map);
    }
    let ab = abelianization(p);
    let n = p.generator_count();
    let rank = ab.smith.rank();
    let v = &ab.smith.v;
    let factors = ab.smith.invariant_factors();
    let torsion_cols: Vec<(usize, i64)> =
        factors.iter().enumerate().filter(|(_, &d)| d > 1).map(|(k, &d)| (k, d)).collect();
    let free_block = Matrix::from_fn(ab.free_rank, n, |k, i| *v.get(i, rank + k));
    let free_block = hermite_normal_form(&free_block);
    let ctx = VarContext::new(
        default_free_names(ab.free_rank),
        torsion_cols.iter().enumerate().map(|(j, &(_, d))| (format!("u{}", j + 1), d)).collect(),
    );
    let images = (0..n)
        .map(|i| {
            let free = (0..ab.free_rank).map(|k| *free_block.get(k, i)).collect();
            let torsion = torsion_cols.iter().map(|&(k, _)| *v.get(i, k)).collect();
            Monomial::new(&ctx, free, torsion)
        })
        .collect();
    let map = AbelianizationMap { ctx, images };
    debug_assert!(map.validate(p).is_ok());
    Ok(map)
}
