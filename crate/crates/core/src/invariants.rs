//! Characteristic numbers of smooth compact complex surfaces.

use serde::Serialize;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    pub q: i64,
    pub pg: i64,
    pub c2: i64,
    pub chi: i64,
    pub c1_sq: i64,
    pub h11: i64,
    pub ball_quotient: bool,
}

impl SurfaceInvariants {
    /// `12 chi = c1^2 + c2`.
    pub fn noether_holds(&self) -> bool {
        12 * self.chi == self.c1_sq + self.c2
    }

    /// `c2 = 2 - 4q + 2 pg + h11`.
    pub fn hodge_holds(&self) -> bool {
        self.c2 == 2 - 4 * self.q + 2 * self.pg + self.h11
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InvariantsError {
    #[error("q and pg must be non-negative (q = {q}, pg = {pg})")]
    Negative { q: i64, pg: i64 },
    #[error("c2 = {c2} violates 3 pg <= c2 <= 10 pg for q = 1 (pg = {pg})")]
    BoundViolation { pg: i64, c2: i64 },
    #[error("cover degree must be positive, got {0}")]
    NonPositiveDegree(i64),
}

/// Derives `chi`, `c1^2`, `h11` from `(q, pg, c2)`; for `q = 1` also
/// enforces `3 pg <= c2 <= 10 pg`.
pub fn surface_invariants(q: i64, pg: i64, c2: i64) -> Result<SurfaceInvariants, InvariantsError> {
    if q < 0 || pg < 0 {
        return Err(InvariantsError::Negative { q, pg });
    }
    if q == 1 && (c2 < 3 * pg || c2 > 10 * pg) {
        return Err(InvariantsError::BoundViolation { pg, c2 });
    }
    let chi = 1 - q + pg;
    let c1_sq = 12 * chi - c2;
    Ok(SurfaceInvariants { q, pg, c2, chi, c1_sq, h11: c2 - 2 + 4 * q - 2 * pg, ball_quotient: c1_sq == 3 * c2 })
}

/// The degree-`n` abelian cover of the Cartwright–Steger surface:
/// `q = 1`, `pg = n`, `c2 = 3n`.
pub fn cover_invariants(n: i64) -> Result<SurfaceInvariants, InvariantsError> {
    if n <= 0 {
        return Err(InvariantsError::NonPositiveDegree(n));
    }
    surface_invariants(1, n, 3 * n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_quotient_covers() {
        for n in 1..=20 {
            let s = cover_invariants(n).unwrap();
            assert_eq!((s.chi, s.c1_sq, s.h11, s.ball_quotient), (n, 9 * n, n + 2, true));
            assert!(s.noether_holds() && s.hodge_holds());
        }
        let s = cover_invariants(5).unwrap();
        assert_eq!((s.q, s.pg, s.c2, s.c1_sq), (1, 5, 15, 45));
        assert_eq!(cover_invariants(0), Err(InvariantsError::NonPositiveDegree(0)));
    }

    #[test]
    fn bounds() {
        let top = surface_invariants(1, 1, 10).unwrap();
        assert_eq!(top.c1_sq, 2);
        assert!(!top.ball_quotient);
        assert_eq!(surface_invariants(1, 2, 5), Err(InvariantsError::BoundViolation { pg: 2, c2: 5 }));
        assert_eq!(surface_invariants(1, 2, 21), Err(InvariantsError::BoundViolation { pg: 2, c2: 21 }));
        let s = surface_invariants(1, 3, 9).unwrap();
        assert!(s.ball_quotient);
        assert_eq!(s.c1_sq, 27);
        // the bound only applies for q = 1
        assert!(surface_invariants(0, 2, 5).is_ok());
    }
}
