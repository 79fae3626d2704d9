//! Generalized Boolean functions `Z_2^m -> Z_q` in algebraic normal form.
//!
//! Bit `j` of an index corresponds to variable `x_j` everywhere: an ANF index
//! `i` names the monomial `prod_{j : i_j = 1} x_j`, and a truth-table index `i`
//! names the point `(i_0, ..., i_{m-1})`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::modulus::Modulus;
use crate::error::{Error, Result};

pub const MAX_VARS: usize = 20;

fn check_vars(m: usize) -> Result<()> {
    if m > MAX_VARS {
        return Err(Error::TooManyVariables { m, max: MAX_VARS });
    }
    Ok(())
}

/// A generalized Boolean function stored by its ANF coefficients.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gbf {
    q: Modulus,
    m: usize,
    anf: Vec<u32>,
}

/// The value table `psi(f) = (f_0, ..., f_{2^m - 1})`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruthTable {
    q: Modulus,
    m: usize,
    values: Vec<u32>,
}

impl Gbf {
    pub fn new(q: Modulus, m: usize, anf: Vec<u32>) -> Result<Self> {
        check_vars(m)?;
        if anf.len() != 1 << m {
            return Err(Error::LengthMismatch { expected: 1 << m, actual: anf.len() });
        }
        if let Some((index, &value)) = anf.iter().enumerate().find(|(_, &c)| c >= q.q()) {
            return Err(Error::CoefficientRange { index, value, q: q.q() });
        }
        Ok(Self { q, m, anf })
    }

    pub fn zero(q: Modulus, m: usize) -> Self {
        assert!(m <= MAX_VARS, "too many variables");
        Self { q, m, anf: vec![0; 1 << m] }
    }

    pub fn constant(q: Modulus, m: usize, c: u32) -> Self {
        let mut f = Self::zero(q, m);
        f.anf[0] = c % q.q();
        f
    }

    /// Builds `sum c * prod_{j in mask} x_j` from `(mask, c)` terms. Repeated
    /// masks accumulate and coefficients are reduced mod q.
    pub fn from_terms(q: Modulus, m: usize, terms: &[(usize, u32)]) -> Result<Self> {
        check_vars(m)?;
        let mut f = Self::zero(q, m);
        for &(mask, c) in terms {
            if mask >= 1 << m {
                return Err(Error::InvalidIndices(format!(
                    "monomial index {mask} out of range for m={m}"
                )));
            }
            f.anf[mask] = q.add(f.anf[mask], c % q.q());
        }
        Ok(f)
    }

    /// `c * x_i`.
    pub fn var(q: Modulus, m: usize, i: usize, c: u32) -> Self {
        assert!(i < m, "variable index out of range");
        let mut f = Self::zero(q, m);
        f.anf[1 << i] = c % q.q();
        f
    }

    /// `w_0 x_0 + ... + w_{m-1} x_{m-1} + c`.
    pub fn affine(q: Modulus, weights: &[u32], c: u32) -> Self {
        let m = weights.len();
        let mut f = Self::constant(q, m, c);
        for (i, &w) in weights.iter().enumerate() {
            f.anf[1 << i] = w % q.q();
        }
        f
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.q
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q.q()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn anf(&self) -> &[u32] {
        &self.anf
    }

    #[inline]
    pub fn coeff(&self, mask: usize) -> u32 {
        self.anf[mask]
    }

    pub fn is_zero(&self) -> bool {
        self.anf.iter().all(|&c| c == 0)
    }

    /// Highest monomial order with a nonzero coefficient; 0 for constants,
    /// including the zero function.
    pub fn degree(&self) -> usize {
        self.anf
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, _)| i.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Nonzero `(mask, coefficient)` terms in index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.anf.iter().copied().enumerate().filter(|&(_, c)| c != 0)
    }

    pub fn evaluate(&self, point: usize) -> u32 {
        let s: u64 = self
            .terms()
            .filter(|&(mask, _)| mask & point == mask)
            .map(|(_, c)| c as u64)
            .sum();
        (s % self.q() as u64) as u32
    }

    pub fn truth_table(&self) -> TruthTable {
        let q = self.q();
        let mut values = self.anf.clone();
        for bit in 0..self.m {
            let step = 1 << bit;
            for i in 0..values.len() {
                if i & step != 0 {
                    values[i] = (values[i] + values[i ^ step]) % q;
                }
            }
        }
        TruthTable { q: self.q, m: self.m, values }
    }

    fn check_same(&self, other: &Gbf) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch { left: self.q(), right: other.q() });
        }
        if self.m != other.m {
            return Err(Error::ShapeMismatch { left: self.m, right: other.m });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Gbf) -> Result<Gbf> {
        self.check_same(other)?;
        let q = self.q;
        let anf = self.anf.iter().zip(&other.anf).map(|(&a, &b)| q.add(a, b)).collect();
        Ok(Gbf { q, m: self.m, anf })
    }

    pub fn try_sub(&self, other: &Gbf) -> Result<Gbf> {
        self.check_same(other)?;
        let q = self.q;
        let anf = self.anf.iter().zip(&other.anf).map(|(&a, &b)| q.sub(a, b)).collect();
        Ok(Gbf { q, m: self.m, anf })
    }

    pub fn scale(&self, c: u32) -> Gbf {
        let q = self.q;
        Gbf { q, m: self.m, anf: self.anf.iter().map(|&a| q.mul(a, c % q.q())).collect() }
    }

    pub fn neg(&self) -> Gbf {
        let q = self.q;
        Gbf { q, m: self.m, anf: self.anf.iter().map(|&a| q.neg(a)).collect() }
    }

    /// `f * x_i`, using `x_i^2 = x_i`.
    pub fn mul_var(&self, i: usize) -> Gbf {
        assert!(i < self.m, "variable index out of range");
        let bit = 1 << i;
        let mut out = Gbf::zero(self.q, self.m);
        for (mask, c) in self.terms() {
            let t = mask | bit;
            out.anf[t] = self.q.add(out.anf[t], c);
        }
        out
    }

    /// `f * (1 - x_i)`.
    pub fn mul_not_var(&self, i: usize) -> Gbf {
        self.try_sub(&self.mul_var(i)).expect("same shape")
    }

    /// Product in the ring of functions `Z_2^m -> Z_q`.
    pub fn try_mul(&self, other: &Gbf) -> Result<Gbf> {
        self.check_same(other)?;
        let mut out = Gbf::zero(self.q, self.m);
        for (ma, ca) in self.terms() {
            for (mb, cb) in other.terms() {
                let t = ma | mb;
                out.anf[t] = self.q.add(out.anf[t], self.q.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn add_term(&mut self, mask: usize, c: u32) {
        self.anf[mask] = self.q.add(self.anf[mask], c % self.q());
    }

    /// Adds `sum w_a x_a + c`.
    pub fn add_affine(&self, weights: &[u32], c: u32) -> Result<Gbf> {
        if weights.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, actual: weights.len() });
        }
        let mut out = self.clone();
        out.add_term(0, c);
        for (i, &w) in weights.iter().enumerate() {
            out.add_term(1 << i, w);
        }
        Ok(out)
    }

    /// The function on `m_new` variables obtained by replacing each variable
    /// `x_a` with `x_{map[a]}`. The map must be injective.
    pub fn substitute(&self, map: &[usize], m_new: usize) -> Result<Gbf> {
        check_vars(m_new)?;
        if map.len() != self.m {
            return Err(Error::LengthMismatch { expected: self.m, actual: map.len() });
        }
        let mut seen = 0usize;
        for &j in map {
            if j >= m_new || seen & (1 << j) != 0 {
                return Err(Error::InvalidIndices(format!(
                    "variable map {map:?} is not injective into 0..{m_new}"
                )));
            }
            seen |= 1 << j;
        }
        let mut out = Gbf::zero(self.q, m_new);
        for (mask, c) in self.terms() {
            let mut t = 0;
            for (a, &j) in map.iter().enumerate() {
                if mask & (1 << a) != 0 {
                    t |= 1 << j;
                }
            }
            out.anf[t] = self.q.add(out.anf[t], c);
        }
        Ok(out)
    }

    /// `f(x_{sigma(0)}, ..., x_{sigma(m-1)})`.
    pub fn permute_vars(&self, sigma: &[usize]) -> Result<Gbf> {
        crate::perm::check_permutation(sigma, self.m)?;
        self.substitute(sigma, self.m)
    }

    /// The same function with its constant and linear coefficients removed.
    pub fn without_affine(&self) -> Gbf {
        let mut out = self.clone();
        out.anf[0] = 0;
        for i in 0..self.m {
            out.anf[1 << i] = 0;
        }
        out
    }

    pub fn to_json(&self) -> GbfJson {
        GbfJson {
            q: self.q(),
            m: self.m,
            anf: self.terms().map(|(i, c)| (i.to_string(), c)).collect(),
        }
    }

    pub fn from_json(j: &GbfJson) -> Result<Gbf> {
        let q = Modulus::new(j.q)?;
        check_vars(j.m)?;
        let mut anf = vec![0; 1 << j.m];
        for (k, &c) in &j.anf {
            let idx: usize = k
                .parse()
                .map_err(|_| Error::Parse(format!("monomial index {k:?} is not a decimal integer")))?;
            if idx >= anf.len() {
                return Err(Error::Parse(format!("monomial index {idx} out of range for m={}", j.m)));
            }
            if c >= q.q() {
                return Err(Error::CoefficientRange { index: idx, value: c, q: q.q() });
            }
            anf[idx] = c;
        }
        Gbf::new(q, j.m, anf)
    }
}

/// Wire form `{"q": int, "m": int, "anf": {"<monomial-index>": coeff, ...}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbfJson {
    pub q: u32,
    pub m: usize,
    pub anf: BTreeMap<String, u32>,
}

impl Serialize for Gbf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Gbf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = GbfJson::deserialize(d)?;
        Gbf::from_json(&j).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for Gbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(usize, u32)> = self.terms().collect();
        if terms.is_empty() {
            return write!(f, "0");
        }
        // Higher-order monomials first, then by index.
        terms.sort_by_key(|&(mask, _)| (std::cmp::Reverse(mask.count_ones()), mask));
        for (n, (mask, c)) in terms.into_iter().enumerate() {
            if n > 0 {
                write!(f, "+")?;
            }
            if mask == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if c != 1 {
                write!(f, "{c}")?;
            }
            for j in 0..self.m {
                if mask & (1 << j) != 0 {
                    write!(f, "x{j}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gbf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gbf(q={}, m={}, {})", self.q(), self.m, self)
    }
}

impl TruthTable {
    pub fn new(q: Modulus, m: usize, values: Vec<u32>) -> Result<Self> {
        check_vars(m)?;
        if values.len() != 1 << m {
            return Err(Error::LengthMismatch { expected: 1 << m, actual: values.len() });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, &c)| c >= q.q()) {
            return Err(Error::CoefficientRange { index, value, q: q.q() });
        }
        Ok(Self { q, m, values })
    }

    #[inline]
    pub fn modulus(&self) -> Modulus {
        self.q
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn values(&self) -> &[u32] {
        &self.values
    }

    pub fn into_values(self) -> Vec<u32> {
        self.values
    }

    /// Subset Moebius inversion mod q; the unique ANF with this value table.
    pub fn to_gbf(&self) -> Gbf {
        let q = self.q;
        let mut anf = self.values.clone();
        for bit in 0..self.m {
            let step = 1 << bit;
            for i in 0..anf.len() {
                if i & step != 0 {
                    anf[i] = q.sub(anf[i], anf[i ^ step]);
                }
            }
        }
        Gbf { q, m: self.m, anf }
    }
}

pub fn anf_to_truth_table(f: &Gbf) -> TruthTable {
    f.truth_table()
}

pub fn truth_table_to_anf(t: &TruthTable) -> Gbf {
    t.to_gbf()
}
