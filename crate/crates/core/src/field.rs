//! Ambient field descriptors and prime-field scalar arithmetic.
//!
//! A [`FieldDescriptor`] fixes the prime `p`, the ordered variable list of
//! the rational function field `F_p(x_1, ..., x_m)`, and the resource guards
//! every arithmetic operation respects. All values of the crate hold an
//! `Arc<FieldDescriptor>` and refuse to mix with values from a different
//! descriptor.

use std::cmp::Ordering;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on the prime; keeps scalar products inside a machine word
/// with lots of headroom.
pub const DEFAULT_MAX_PRIME: u64 = 31;

/// Default cap on the total degree of any intermediate polynomial.
pub const DEFAULT_MAX_DEGREE: u64 = 512;

/// The ambient field `F_p(x_1, ..., x_m)`.
#[derive(Debug)]
pub struct FieldDescriptor {
    p: u64,
    variables: Vec<String>,
    max_degree: u64,
}

impl PartialEq for FieldDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.variables == other.variables
    }
}

impl Eq for FieldDescriptor {}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl FieldDescriptor {
    /// Builds a descriptor with the default guards (`p <= 31`, degree cap 512).
    pub fn new(p: u64, variables: &[&str]) -> Result<Arc<Self>> {
        Self::with_limits(p, variables, DEFAULT_MAX_DEGREE, DEFAULT_MAX_PRIME)
    }

    /// Builds a descriptor with explicit degree and prime caps.
    pub fn with_limits(
        p: u64,
        variables: &[&str],
        max_degree: u64,
        max_prime: u64,
    ) -> Result<Arc<Self>> {
        if !is_prime(p) {
            return Err(Error::usage(format!("{p} is not prime")));
        }
        if p > max_prime {
            return Err(Error::usage(format!(
                "prime {p} exceeds the configured limit {max_prime}"
            )));
        }
        let mut seen = std::collections::HashSet::new();
        for v in variables {
            if !valid_identifier(v) {
                return Err(Error::usage(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(*v) {
                return Err(Error::usage(format!("duplicate variable name `{v}`")));
            }
        }
        Ok(Arc::new(FieldDescriptor {
            p,
            variables: variables.iter().map(|s| s.to_string()).collect(),
            max_degree,
        }))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of variables `m`.
    pub fn var_count(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn max_degree(&self) -> u64 {
        self.max_degree
    }

    /// Checks that two descriptors denote the same field.
    pub fn compatible(self: &Arc<Self>, other: &Arc<Self>) -> Result<()> {
        if Arc::ptr_eq(self, other) || **self == **other {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch)
        }
    }

    // --- prime-field scalar arithmetic (representatives in 0..p) ---

    pub fn fp_add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn fp_sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    pub fn fp_neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    pub fn fp_mul(&self, a: u64, b: u64) -> u64 {
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn fp_inv(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        // Fermat: a^(p-2) mod p.
        let mut result = 1u64;
        let mut base = a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = self.fp_mul(result, base);
            }
            base = self.fp_mul(base, base);
            e >>= 1;
        }
        Ok(result)
    }
}

/// An exponent vector, ordered graded-lexicographically.
///
/// Graded lex is the canonical monomial order of the crate: higher total
/// degree wins, ties broken lexicographically with earlier variables more
/// significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Exponents(pub Vec<u32>);

impl Exponents {
    pub fn zero(m: usize) -> Self {
        Exponents(vec![0; m])
    }

    pub fn unit(m: usize, idx: usize) -> Self {
        let mut v = vec![0; m];
        v[idx] = 1;
        Exponents(v)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        Exponents(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Componentwise subtraction; caller guarantees `self >= other`.
    pub fn sub(&self, other: &Self) -> Self {
        Exponents(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn meet(&self, other: &Self) -> Self {
        Exponents(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        )
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// Splits into `(residue mod p, quotient)` so that
    /// `self = quotient * p + residue` componentwise.
    pub fn split_mod(&self, p: u64) -> (Exponents, Exponents) {
        let p = p as u32;
        let mut r = Vec::with_capacity(self.0.len());
        let mut q = Vec::with_capacity(self.0.len());
        for &e in &self.0 {
            r.push(e % p);
            q.push(e / p);
        }
        (Exponents(r), Exponents(q))
    }

    pub fn scale(&self, k: u32) -> Self {
        Exponents(self.0.iter().map(|e| e * k).collect())
    }
}

impl Ord for Exponents {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponents {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
