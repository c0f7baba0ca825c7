//! Exact arithmetic in `Q(zeta_m) = Q[x]/Phi_m` and evaluation of Laurent
//! polynomials at finite-order characters.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::monomial::{Monomial, VarContext};
use super::poly::{LaurentError, LaurentPoly};
use super::univariate::{cyclotomic_polynomial, UniPoly};
use crate::scalar::{Field, FieldScalar, Ring, Scalar};

/// The field `Q(zeta_m)` with a table of `zeta^k` reduced mod `Phi_m`.
pub struct CyclotomicField<F> {
    modulus: u64,
    phi: UniPoly<F>,
    powers: Vec<Vec<F>>,
}

impl<F: FieldScalar> fmt::Debug for CyclotomicField<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.modulus)
    }
}

impl<F: FieldScalar> CyclotomicField<F> {
    pub fn new(m: u64) -> Arc<Self> {
        assert!(m >= 1, "cyclotomic modulus must be positive");
        let phi = cyclotomic_polynomial::<F>(m);
        let deg = phi.degree().unwrap();
        let mut powers = Vec::with_capacity(m as usize);
        let mut cur: Vec<F> = vec![F::zero(); deg];
        cur[0] = F::one();
        if deg == 0 {
            unreachable!("Phi_m has positive degree");
        }
        for _ in 0..m {
            powers.push(cur.clone());
            // multiply by x and reduce by the monic Phi_m
            let top = cur[deg - 1].clone();
            for k in (1..deg).rev() {
                cur[k] = cur[k - 1].clone();
            }
            cur[0] = F::zero();
            if !top.is_zero() {
                for (k, c) in cur.iter_mut().enumerate() {
                    *c = c.clone() - top.clone() * phi.coeff(k);
                }
            }
        }
        Arc::new(CyclotomicField { modulus: m, phi, powers })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `phi(m)`, the dimension over `Q`.
    pub fn degree(&self) -> usize {
        self.powers[0].len()
    }

    pub fn minimal_polynomial(&self) -> &UniPoly<F> {
        &self.phi
    }

    /// Reduces `sum_k buckets[k] * zeta^k`, `buckets.len() == m`.
    fn reduce_buckets(&self, buckets: &[F]) -> Vec<F> {
        let mut out = vec![F::zero(); self.degree()];
        for (k, b) in buckets.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&self.powers[k]) {
                if !p.is_zero() {
                    *o = o.clone() + b.clone() * p.clone();
                }
            }
        }
        out
    }
}

/// An element of `Q(zeta_m)`, stored as coefficients of `1, zeta, ..,
/// zeta^(phi(m)-1)`.
#[derive(Clone)]
pub struct CyclotomicNumber<F> {
    field: Arc<CyclotomicField<F>>,
    coeffs: Vec<F>,
}

impl<F: FieldScalar> PartialEq for CyclotomicNumber<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.modulus == other.field.modulus && self.coeffs == other.coeffs
    }
}

impl<F: FieldScalar> fmt::Debug for CyclotomicNumber<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q(zeta_{})", UniPoly::new(self.coeffs.clone()), self.field.modulus)
    }
}

impl<F: FieldScalar> CyclotomicNumber<F> {
    pub fn zero(field: &Arc<CyclotomicField<F>>) -> Self {
        CyclotomicNumber { field: Arc::clone(field), coeffs: vec![F::zero(); field.degree()] }
    }

    pub fn one(field: &Arc<CyclotomicField<F>>) -> Self {
        Self::from_rational(field, F::one())
    }

    pub fn from_rational(field: &Arc<CyclotomicField<F>>, q: F) -> Self {
        let mut z = Self::zero(field);
        z.coeffs[0] = q;
        z
    }

    /// `zeta_m^k`.
    pub fn zeta_power(field: &Arc<CyclotomicField<F>>, k: i64) -> Self {
        let idx = k.rem_euclid(field.modulus as i64) as usize;
        CyclotomicNumber { field: Arc::clone(field), coeffs: field.powers[idx].clone() }
    }

    /// Reduces an arbitrary polynomial in `zeta` modulo `Phi_m`.
    pub fn from_poly(field: &Arc<CyclotomicField<F>>, p: &UniPoly<F>) -> Self {
        let m = field.modulus as usize;
        let mut buckets = vec![F::zero(); m];
        for (k, c) in p.coeffs().iter().enumerate() {
            buckets[k % m] = buckets[k % m].clone() + c.clone();
        }
        CyclotomicNumber { field: Arc::clone(field), coeffs: field.reduce_buckets(&buckets) }
    }

    pub fn field(&self) -> &Arc<CyclotomicField<F>> {
        &self.field
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn same_field(&self, rhs: &Self) {
        assert_eq!(self.field.modulus, rhs.field.modulus, "cyclotomic field mismatch");
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        CyclotomicNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        CyclotomicNumber {
            field: Arc::clone(&self.field),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        CyclotomicNumber { field: Arc::clone(&self.field), coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.same_field(rhs);
        let m = self.field.modulus as usize;
        let mut buckets = vec![F::zero(); m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = (i + j) % m;
                buckets[k] = buckets[k].clone() + a.clone() * b.clone();
            }
        }
        CyclotomicNumber { field: Arc::clone(&self.field), coeffs: self.field.reduce_buckets(&buckets) }
    }

    /// Multiplicative inverse via extended Euclid against `Phi_m`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let a = UniPoly::new(self.coeffs.clone());
        let (g, s, _) = a.ext_gcd(&self.field.phi);
        debug_assert_eq!(g.degree(), Some(0), "Phi_m is irreducible");
        Some(Self::from_poly(&self.field, &s))
    }
}

impl<F: FieldScalar> Ring for CyclotomicNumber<F> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.field)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.field)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn ring_neg(&self) -> Self {
        self.neg()
    }
}

impl<F: FieldScalar> Field for CyclotomicNumber<F> {
    fn inverse(&self) -> Option<Self> {
        self.inv()
    }
}

/// A finite-order character: free variable `i` maps to
/// `zeta_m^free[i]`, torsion variable `j` to `zeta_m^torsion[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiniteCharacter {
    modulus: u64,
    free: Vec<i64>,
    torsion: Vec<i64>,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CharacterError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("expected {expected} free and {expected_torsion} torsion exponents")]
    Arity { expected: usize, expected_torsion: usize },
    #[error("torsion variable {index} with modulus {modulus} cannot map to zeta_{m}^{exponent}")]
    TorsionOrder { index: usize, modulus: i64, m: u64, exponent: i64 },
}

impl FiniteCharacter {
    /// Torsion-free character; exponents are reduced mod `m`.
    pub fn new(modulus: u64, free: Vec<i64>) -> Result<Self, CharacterError> {
        Self::with_torsion(modulus, free, Vec::new(), &[])
    }

    pub fn with_torsion(
        modulus: u64,
        free: Vec<i64>,
        torsion: Vec<i64>,
        torsion_moduli: &[i64],
    ) -> Result<Self, CharacterError> {
        if modulus == 0 {
            return Err(CharacterError::ZeroModulus);
        }
        if torsion.len() != torsion_moduli.len() {
            return Err(CharacterError::Arity { expected: free.len(), expected_torsion: torsion_moduli.len() });
        }
        let m = modulus as i64;
        let free: Vec<i64> = free.into_iter().map(|e| e.rem_euclid(m)).collect();
        let torsion: Vec<i64> = torsion.into_iter().map(|e| e.rem_euclid(m)).collect();
        for (index, (&e, &d)) in torsion.iter().zip(torsion_moduli).enumerate() {
            if (e * d) % m != 0 {
                return Err(CharacterError::TorsionOrder { index, modulus: d, m: modulus, exponent: e });
            }
        }
        Ok(FiniteCharacter { modulus, free, torsion })
    }

    pub fn trivial(ctx: &VarContext) -> Self {
        FiniteCharacter { modulus: 1, free: vec![0; ctx.free_rank()], torsion: vec![0; ctx.torsion_count()] }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn free_exponents(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion_exponents(&self) -> &[i64] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(|&e| e == 0)
    }

    pub fn fits(&self, ctx: &VarContext) -> bool {
        self.free.len() == ctx.free_rank() && self.torsion.len() == ctx.torsion_count()
    }

    /// Exact multiplicative order of the character.
    pub fn order(&self) -> u64 {
        let m = self.modulus as i64;
        let g = self.free.iter().chain(&self.torsion).fold(m, |g, &e| g.gcd(&e));
        (m / g) as u64
    }

    /// The same character written over its exact order.
    pub fn normalized(&self) -> Self {
        let o = self.order();
        let step = (self.modulus / o) as i64;
        FiniteCharacter {
            modulus: o,
            free: self.free.iter().map(|e| e / step).collect(),
            torsion: self.torsion.iter().map(|e| e / step).collect(),
        }
    }

    /// Canonical representative of the Galois orbit `{chi^k : gcd(k, m) = 1}`
    /// of the normalized character. Conjugate characters give Galois-conjugate
    /// evaluated matrices and therefore equal ranks.
    pub fn galois_representative(&self) -> Self {
        let n = self.normalized();
        let m = n.modulus as i64;
        (1..=m.max(1))
            .filter(|k| k.gcd(&m) == 1)
            .map(|k| FiniteCharacter {
                modulus: n.modulus,
                free: n.free.iter().map(|e| (e * k).rem_euclid(m)).collect(),
                torsion: n.torsion.iter().map(|e| (e * k).rem_euclid(m)).collect(),
            })
            .min()
            .unwrap_or(n)
    }

    /// Exponent `k` with `chi(monomial) = zeta_m^k`.
    pub fn exponent_of(&self, mono: &Monomial) -> i64 {
        let m = self.modulus as i64;
        let s: i64 = mono
            .free
            .iter()
            .zip(&self.free)
            .chain(mono.torsion.iter().zip(&self.torsion))
            .map(|(a, b)| (a.rem_euclid(m) * b) % m)
            .sum();
        s.rem_euclid(m)
    }
}

impl fmt::Display for FiniteCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.free.iter().chain(&self.torsion).map(|e| e.to_string()).collect();
        write!(f, "zeta_{}^({})", self.modulus, exps.join(", "))
    }
}

impl<T: Scalar> LaurentPoly<T> {
    /// Evaluates at `chi`, landing in a freshly built `Q(zeta_m)`.
    pub fn evaluate<F>(&self, chi: &FiniteCharacter) -> Result<CyclotomicNumber<F>, LaurentError<T>>
    where
        F: FieldScalar + From<T>,
    {
        let field = CyclotomicField::new(chi.modulus());
        self.evaluate_in(chi, &field)
    }

    /// Evaluates at `chi` inside an existing field with the same modulus.
    pub fn evaluate_in<F>(
        &self,
        chi: &FiniteCharacter,
        field: &Arc<CyclotomicField<F>>,
    ) -> Result<CyclotomicNumber<F>, LaurentError<T>>
    where
        F: FieldScalar + From<T>,
    {
        if !chi.fits(self.context()) || field.modulus() != chi.modulus() {
            return Err(LaurentError::ContextMismatch);
        }
        let mut buckets = vec![F::zero(); chi.modulus() as usize];
        for (mono, c) in self.terms() {
            let k = chi.exponent_of(mono) as usize;
            buckets[k] = buckets[k].clone() + F::from(c.clone());
        }
        Ok(CyclotomicNumber { field: Arc::clone(field), coeffs: field.reduce_buckets(&buckets) })
    }
}
