use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Names and torsion moduli of the variables of a group ring `Z[Z^f x T]`.
///
/// The first `free.len()` coordinates are free; torsion coordinate `i` is
/// reduced mod `torsion[i].1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VarContext {
    free: Vec<String>,
    torsion: Vec<(String, i64)>,
}

impl VarContext {
    pub fn new(free: Vec<String>, torsion: Vec<(String, i64)>) -> Arc<Self> {
        assert!(torsion.iter().all(|(_, d)| *d > 1), "torsion moduli must exceed 1");
        Arc::new(VarContext { free, torsion })
    }

    /// A torsion-free context with the given variable names.
    pub fn free(names: &[&str]) -> Arc<Self> {
        VarContext::new(names.iter().map(|s| s.to_string()).collect(), Vec::new())
    }

    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn torsion_count(&self) -> usize {
        self.torsion.len()
    }

    pub fn free_names(&self) -> &[String] {
        &self.free
    }

    pub fn torsion_names(&self) -> impl Iterator<Item = &str> {
        self.torsion.iter().map(|(n, _)| n.as_str())
    }

    pub fn moduli(&self) -> Vec<i64> {
        self.torsion.iter().map(|(_, d)| *d).collect()
    }

    pub fn modulus(&self, i: usize) -> i64 {
        self.torsion[i].1
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Exponent vector of a Laurent monomial.
///
/// Ordering is graded lexicographic on the free exponents, then
/// lexicographic on the torsion residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub free: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl Monomial {
    pub fn identity(ctx: &VarContext) -> Self {
        Monomial { free: vec![0; ctx.free_rank()], torsion: vec![0; ctx.torsion_count()] }
    }

    /// Builds a monomial, reducing torsion exponents into `[0, d)`.
    pub fn new(ctx: &VarContext, free: Vec<i64>, torsion: Vec<i64>) -> Self {
        assert_eq!(free.len(), ctx.free_rank(), "free exponent count");
        assert_eq!(torsion.len(), ctx.torsion_count(), "torsion exponent count");
        let torsion = torsion
            .into_iter()
            .enumerate()
            .map(|(i, e)| e.rem_euclid(ctx.modulus(i)))
            .collect();
        Monomial { free, torsion }
    }

    /// A torsion-free monomial.
    pub fn from_free(free: Vec<i64>) -> Self {
        Monomial { free, torsion: Vec::new() }
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|&e| e == 0) && self.torsion.iter().all(|&e| e == 0)
    }

    pub fn degree(&self) -> i64 {
        self.free.iter().sum()
    }

    pub fn fits(&self, ctx: &VarContext) -> bool {
        self.free.len() == ctx.free_rank()
            && self.torsion.len() == ctx.torsion_count()
            && self.torsion.iter().enumerate().all(|(i, &e)| (0..ctx.modulus(i)).contains(&e))
    }

    pub fn mul(&self, rhs: &Monomial, ctx: &VarContext) -> Monomial {
        Monomial {
            free: self.free.iter().zip(&rhs.free).map(|(a, b)| a + b).collect(),
            torsion: self
                .torsion
                .iter()
                .zip(&rhs.torsion)
                .enumerate()
                .map(|(i, (a, b))| (a + b).rem_euclid(ctx.modulus(i)))
                .collect(),
        }
    }

    pub fn pow(&self, k: i64, ctx: &VarContext) -> Monomial {
        Monomial {
            free: self.free.iter().map(|e| e * k).collect(),
            torsion: self
                .torsion
                .iter()
                .enumerate()
                .map(|(i, e)| (e * k).rem_euclid(ctx.modulus(i)))
                .collect(),
        }
    }

    pub fn inverse(&self, ctx: &VarContext) -> Monomial {
        self.pow(-1, ctx)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.free.cmp(&other.free))
            .then_with(|| self.torsion.cmp(&other.torsion))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torsion_reduces() {
        let ctx = VarContext::new(vec!["t".into()], vec![("u".into(), 3)]);
        let m = Monomial::new(&ctx, vec![1], vec![5]);
        assert_eq!(m.torsion, vec![2]);
        let sq = m.mul(&m, &ctx);
        assert_eq!(sq, Monomial::new(&ctx, vec![2], vec![1]));
        assert!(m.mul(&m.inverse(&ctx), &ctx).is_identity());
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::from_free(vec![2, 0]);
        let b = Monomial::from_free(vec![1, 1]);
        let c = Monomial::from_free(vec![0, 3]);
        let d = Monomial::from_free(vec![-1, 0]);
        assert!(c > a && a > b && b > d);
    }
}
