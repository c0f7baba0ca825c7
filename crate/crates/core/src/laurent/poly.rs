use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

use super::monomial::{Monomial, VarContext};
use crate::scalar::{ExactDiv, Ring, Scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaurentError<T: Scalar> {
    #[error("operands live in different variable contexts")]
    ContextMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible; remainder {remainder}")]
    NotDivisible { remainder: Box<LaurentPoly<T>> },
    #[error("exact division is only implemented for torsion-free contexts")]
    TorsionDivision,
    #[error("invalid substitution: {0}")]
    InvalidSubstitution(String),
    #[error("malformed term list: {0}")]
    Malformed(String),
}

/// Sparse Laurent polynomial with exact coefficients.
///
/// Terms are keyed by [`Monomial`] in graded lexicographic order; no stored
/// coefficient is zero.
#[derive(Clone)]
pub struct LaurentPoly<T: Scalar> {
    ctx: Arc<VarContext>,
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> PartialEq for LaurentPoly<T> {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx) && self.terms == other.terms
    }
}

impl<T: Scalar> fmt::Debug for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self.to_expanded_string())
    }
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        LaurentPoly { ctx: Arc::clone(ctx), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &Arc<VarContext>) -> Self {
        Self::constant(ctx, T::one())
    }

    pub fn constant(ctx: &Arc<VarContext>, c: T) -> Self {
        Self::monomial(ctx, Monomial::identity(ctx), c)
    }

    pub fn monomial(ctx: &Arc<VarContext>, m: Monomial, c: T) -> Self {
        assert!(m.fits(ctx), "monomial does not fit the variable context");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly { ctx: Arc::clone(ctx), terms }
    }

    /// The free variable `i`.
    pub fn var(ctx: &Arc<VarContext>, i: usize) -> Self {
        let mut m = Monomial::identity(ctx);
        m.free[i] = 1;
        Self::monomial(ctx, m, T::one())
    }

    /// The torsion variable `i`.
    pub fn torsion_var(ctx: &Arc<VarContext>, i: usize) -> Self {
        let mut m = Monomial::identity(ctx);
        m.torsion[i] = 1;
        Self::monomial(ctx, Monomial::new(ctx, m.free, m.torsion), T::one())
    }

    /// Sums the given terms; monomials are reduced into the context.
    pub fn from_terms(ctx: &Arc<VarContext>, terms: impl IntoIterator<Item = (Monomial, T)>) -> Self {
        let mut p = Self::zero(ctx);
        for (m, c) in terms {
            let m = Monomial::new(ctx, m.free, m.torsion);
            p.add_term(m, c);
        }
        p
    }

    /// Torsion-free shorthand: `[(coef, [e_1, .., e_f])]`.
    pub fn from_free_terms<'a>(
        ctx: &Arc<VarContext>,
        terms: impl IntoIterator<Item = (i64, &'a [i64])>,
    ) -> Self {
        Self::from_terms(
            ctx,
            terms.into_iter().map(|(c, e)| (Monomial::new(ctx, e.to_vec(), Vec::new()), T::from_i64(c))),
        )
    }

    pub fn context(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn same_context(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|(m, c)| m.is_identity() && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &T)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> T {
        self.terms.get(m).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &T)> {
        self.terms.iter().next_back()
    }

    /// If this is a single term `c * m`, returns it.
    pub fn as_monomial(&self) -> Option<(&Monomial, &T)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn check(&self, other: &Self) -> Result<(), LaurentError<T>> {
        if self.same_context(other) {
            Ok(())
        } else {
            Err(LaurentError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, LaurentError<T>> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, LaurentError<T>> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, LaurentError<T>> {
        self.check(other)?;
        let mut out = Self::zero(&self.ctx);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb, &self.ctx), ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &T) -> Self {
        let mut out = Self::zero(&self.ctx);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone() * k.clone());
        }
        out
    }

    /// Multiplies every exponent vector by the monomial `m` (a unit shift).
    pub fn shift(&self, m: &Monomial) -> Self {
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(k, c)| (k.mul(m, &self.ctx), c.clone())).collect(),
        }
    }

    /// Non-negative integer power.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.ctx);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Componentwise minimum of the free exponents (zero vector for 0).
    pub fn min_free_exponents(&self) -> Vec<i64> {
        let f = self.ctx.free_rank();
        if self.terms.is_empty() {
            return vec![0; f];
        }
        (0..f).map(|i| self.terms.keys().map(|m| m.free[i]).min().unwrap()).collect()
    }

    /// Shifts by a monomial so every free exponent is `>= 0` and each
    /// variable's minimum is exactly 0. Returns the shifted polynomial and
    /// the exponents that were removed.
    pub fn clear_units(&self) -> (Self, Vec<i64>) {
        let mins = self.min_free_exponents();
        let neg = Monomial { free: mins.iter().map(|e| -e).collect(), torsion: vec![0; self.ctx.torsion_count()] };
        (self.shift(&neg), mins)
    }

    /// Exact division: returns `q` with `q * d == self`.
    ///
    /// Both operands are shifted to ordinary polynomials with no monomial
    /// factor, then divided by repeated leading-term cancellation.
    pub fn exact_divide(&self, d: &Self) -> Result<Self, LaurentError<T>> {
        self.check(d)?;
        if d.is_zero() {
            return Err(LaurentError::DivisionByZero);
        }
        if !self.ctx.is_torsion_free() {
            return Err(LaurentError::TorsionDivision);
        }
        if self.is_zero() {
            return Ok(Self::zero(&self.ctx));
        }
        let (p, p_shift) = self.clear_units();
        let (dd, d_shift) = d.clear_units();
        let (d_lead, d_coef) = dd.leading_term().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = p;
        let mut quot = Self::zero(&self.ctx);
        let mut residue = Self::zero(&self.ctx);
        while let Some((m, c)) = rem.leading_term().map(|(m, c)| (m.clone(), c.clone())) {
            let exps: Vec<i64> = m.free.iter().zip(&d_lead.free).map(|(a, b)| a - b).collect();
            let q_coef = c.checked_exact_div(&d_coef);
            match q_coef {
                Some(qc) if exps.iter().all(|&e| e >= 0) => {
                    let qm = Monomial::from_free(exps);
                    let step = dd.shift(&qm).scale(&qc);
                    rem = &rem - &step;
                    quot.add_term(qm, qc);
                }
                _ => {
                    rem.terms.remove(&m);
                    residue.add_term(m, c);
                }
            }
        }
        let back = Monomial::from_free(p_shift.iter().zip(&d_shift).map(|(a, b)| a - b).collect());
        if residue.is_zero() {
            Ok(quot.shift(&back))
        } else {
            let unshift = Monomial::from_free(p_shift);
            Err(LaurentError::NotDivisible { remainder: Box::new(residue.shift(&unshift)) })
        }
    }

    /// Ring homomorphism sending free variable `i` to `free_images[i]` and
    /// torsion variable `j` to `torsion_images[j]`, all in `target`.
    pub fn substitute(
        &self,
        target: &Arc<VarContext>,
        free_images: &[Monomial],
        torsion_images: &[Monomial],
    ) -> Result<Self, LaurentError<T>> {
        if free_images.len() != self.ctx.free_rank() || torsion_images.len() != self.ctx.torsion_count() {
            return Err(LaurentError::ContextMismatch);
        }
        for img in free_images.iter().chain(torsion_images) {
            if !img.fits(target) {
                return Err(LaurentError::InvalidSubstitution("image does not fit the target context".into()));
            }
        }
        for (j, img) in torsion_images.iter().enumerate() {
            if !img.pow(self.ctx.modulus(j), target).is_identity() {
                return Err(LaurentError::InvalidSubstitution(format!(
                    "image of torsion variable {j} has order not dividing {}",
                    self.ctx.modulus(j)
                )));
            }
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut img = Monomial::identity(target);
            for (e, base) in m.free.iter().zip(free_images) {
                img = img.mul(&base.pow(*e, target), target);
            }
            for (e, base) in m.torsion.iter().zip(torsion_images) {
                img = img.mul(&base.pow(*e, target), target);
            }
            out.add_term(img, c.clone());
        }
        Ok(out)
    }

    /// JSON term list `[[coef, e_1, .., e_f, t_1, ..], ..]`, descending.
    pub fn to_term_list(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(m, c)| {
                    let mut row = vec![coef_json(c)];
                    row.extend(m.free.iter().chain(&m.torsion).map(|&e| Value::from(e)));
                    Value::Array(row)
                })
                .collect(),
        )
    }

    pub fn from_term_list(ctx: &Arc<VarContext>, v: &Value) -> Result<Self, LaurentError<T>> {
        let rows = v.as_array().ok_or_else(|| LaurentError::Malformed("expected an array".into()))?;
        let width = 1 + ctx.free_rank() + ctx.torsion_count();
        let mut terms = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == width)
                .ok_or_else(|| LaurentError::Malformed(format!("term must have {width} entries")))?;
            let coef = parse_coef::<T>(&row[0])?;
            let exps: Vec<i64> = row[1..]
                .iter()
                .map(|e| e.as_i64().ok_or_else(|| LaurentError::Malformed("exponent must be an integer".into())))
                .collect::<Result<_, _>>()?;
            let (free, torsion) = exps.split_at(ctx.free_rank());
            terms.push((Monomial::new(ctx, free.to_vec(), torsion.to_vec()), coef));
        }
        Ok(Self::from_terms(ctx, terms))
    }

    /// Plain sum of terms, e.g. `r^2*s^-1 - 3*s + 1`.
    pub fn to_expanded_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().enumerate() {
            push_term(&mut out, i == 0, c, &self.monomial_string(m));
        }
        out
    }

    fn monomial_string(&self, m: &Monomial) -> String {
        let names = self.ctx.free_names().iter().map(String::as_str).chain(self.ctx.torsion_names());
        let parts: Vec<String> = names
            .zip(m.free.iter().chain(&m.torsion))
            .filter(|(_, &e)| e != 0)
            .map(|(n, &e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") })
            .collect();
        parts.join("*")
    }

    /// Numerator with non-negative exponents over a single monomial
    /// denominator, e.g. `-(r^4*s^2 + s^3)/s^3`.
    pub fn to_fraction_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let zeros = vec![0; self.ctx.torsion_count()];
        let lift: Vec<i64> = self.min_free_exponents().iter().map(|&e| (-e).max(0)).collect();
        let num = self.shift(&Monomial { free: lift.clone(), torsion: zeros.clone() });
        let denom_str = self.monomial_string(&Monomial { free: lift, torsion: zeros });
        let negate = num.leading_term().is_some_and(|(_, c)| c < &T::zero());
        let num = if negate { -&num } else { num };
        let num_str = num.to_expanded_string();
        let wrapped = if num.len() > 1 && (negate || !denom_str.is_empty()) {
            format!("({num_str})")
        } else {
            num_str
        };
        let sign = if negate { "-" } else { "" };
        if denom_str.is_empty() {
            format!("{sign}{wrapped}")
        } else {
            format!("{sign}{wrapped}/{denom_str}")
        }
    }
}

fn push_term<T: Scalar>(out: &mut String, first: bool, c: &T, mono: &str) {
    let neg = c < &T::zero();
    let abs = if neg { -c.clone() } else { c.clone() };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&abs.to_string());
    } else if abs.is_one() {
        out.push_str(mono);
    } else {
        out.push_str(&format!("{abs}*{mono}"));
    }
}

fn coef_json<T: Scalar>(c: &T) -> Value {
    let s = c.to_string();
    match s.parse::<i64>() {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(s),
    }
}

fn parse_coef<T: Scalar>(v: &Value) -> Result<T, LaurentError<T>> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(T::from_i64)
            .ok_or_else(|| LaurentError::Malformed("coefficient must be an integer".into())),
        Value::String(s) => T::from_str_radix(s, 10)
            .map_err(|_| LaurentError::Malformed(format!("bad coefficient `{s}`"))),
        _ => Err(LaurentError::Malformed("coefficient must be a number or string".into())),
    }
}

impl<T: Scalar> fmt::Display for LaurentPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expanded_string())
    }
}

impl<'a, T: Scalar> Add<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn add(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        self.try_add(rhs).expect("context mismatch in Laurent addition")
    }
}

impl<'a, T: Scalar> Sub<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn sub(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        self.try_sub(rhs).expect("context mismatch in Laurent subtraction")
    }
}

impl<'a, T: Scalar> Mul<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn mul(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        self.try_mul(rhs).expect("context mismatch in Laurent multiplication")
    }
}

impl<T: Scalar> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly {
            ctx: Arc::clone(&self.ctx),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl<T: Scalar> Neg for LaurentPoly<T> {
    type Output = LaurentPoly<T>;
    fn neg(self) -> LaurentPoly<T> {
        -&self
    }
}

impl<T: Scalar> Ring for LaurentPoly<T> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.ctx)
    }
    fn one_like(&self) -> Self {
        Self::one(&self.ctx)
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn ring_add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn ring_sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn ring_mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

impl<T: Scalar> ExactDiv for LaurentPoly<T> {
    fn div_exact(&self, rhs: &Self) -> Option<Self> {
        self.exact_divide(rhs).ok()
    }
}
