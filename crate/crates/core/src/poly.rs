//! Sparse multivariate polynomials over the prime field `F_p`.
//!
//! Terms live in a `BTreeMap` keyed by [`Exponents`] so iteration is always
//! graded-lexicographic; the leading term is the map's last entry. The zero
//! polynomial is the empty map and no stored coefficient is zero.
//!
//! Multiplication checks the descriptor's total-degree guard up front
//! (`deg(ab) = deg a + deg b` over an integral domain), so a runaway
//! elimination fails loudly instead of thrashing.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Exponents, FieldDescriptor};

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    desc: Arc<FieldDescriptor>,
    terms: BTreeMap<Exponents, u64>,
}

impl MultiPoly {
    pub fn zero(desc: &Arc<FieldDescriptor>) -> Self {
        MultiPoly {
            desc: desc.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(desc: &Arc<FieldDescriptor>) -> Self {
        Self::constant(desc, 1)
    }

    pub fn constant(desc: &Arc<FieldDescriptor>, c: u64) -> Self {
        let mut terms = BTreeMap::new();
        let c = c % desc.p();
        if c != 0 {
            terms.insert(Exponents::zero(desc.var_count()), c);
        }
        MultiPoly {
            desc: desc.clone(),
            terms,
        }
    }

    pub fn variable(desc: &Arc<FieldDescriptor>, idx: usize) -> Result<Self> {
        if idx >= desc.var_count() {
            return Err(Error::usage(format!("variable index {idx} out of range")));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Exponents::unit(desc.var_count(), idx), 1);
        Ok(MultiPoly {
            desc: desc.clone(),
            terms,
        })
    }

    /// Builds a polynomial from raw `(exponents, coefficient)` pairs,
    /// accumulating duplicates and dropping zeros.
    pub fn from_terms(
        desc: &Arc<FieldDescriptor>,
        terms: impl IntoIterator<Item = (Exponents, u64)>,
    ) -> Result<Self> {
        let m = desc.var_count();
        let mut map: BTreeMap<Exponents, u64> = BTreeMap::new();
        for (e, c) in terms {
            if e.0.len() != m {
                return Err(Error::usage("exponent vector has wrong length"));
            }
            let c = c % desc.p();
            if c == 0 {
                continue;
            }
            let entry = map.entry(e).or_insert(0);
            *entry = desc.fp_add(*entry, c);
        }
        map.retain(|_, c| *c != 0);
        Ok(MultiPoly {
            desc: desc.clone(),
            terms: map,
        })
    }

    /// Single term `c * x^e`.
    pub fn monomial(desc: &Arc<FieldDescriptor>, e: Exponents, c: u64) -> Result<Self> {
        Self::from_terms(desc, [(e, c)])
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .map(|(e, c)| e.is_zero() && *c == 1)
                .unwrap_or(false)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.leading().unwrap().0.is_zero())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &u64)> {
        self.terms.iter()
    }

    /// Leading term under graded lex.
    pub fn leading(&self) -> Option<(&Exponents, u64)> {
        self.terms.iter().next_back().map(|(e, c)| (e, *c))
    }

    pub fn leading_coeff(&self) -> u64 {
        self.leading().map(|(_, c)| c).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u64 {
        self.leading().map(|(e, _)| e.total_degree()).unwrap_or(0)
    }

    /// The single term as `(exponents, coeff)` when the polynomial is a
    /// monomial.
    pub fn as_single_term(&self) -> Option<(&Exponents, u64)> {
        if self.terms.len() == 1 {
            self.leading()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.desc.compatible(&other.desc)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let entry = terms.entry(e.clone()).or_insert(0);
            *entry = self.desc.fp_add(*entry, *c);
        }
        terms.retain(|_, c| *c != 0);
        Ok(MultiPoly {
            desc: self.desc.clone(),
            terms,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let mut terms = self.terms.clone();
        for c in terms.values_mut() {
            *c = self.desc.fp_neg(*c);
        }
        MultiPoly {
            desc: self.desc.clone(),
            terms,
        }
    }

    pub fn scale(&self, c: u64) -> Self {
        let c = c % self.desc.p();
        if c == 0 {
            return Self::zero(&self.desc);
        }
        let mut terms = self.terms.clone();
        for v in terms.values_mut() {
            *v = self.desc.fp_mul(*v, c);
        }
        MultiPoly {
            desc: self.desc.clone(),
            terms,
        }
    }

    /// Multiplies by a single term without the degree guard; used by
    /// division-type algorithms whose output degree is bounded by the input.
    fn mul_term(&self, e: &Exponents, c: u64) -> Self {
        if c == 0 || self.is_zero() {
            return Self::zero(&self.desc);
        }
        let terms = self
            .terms
            .iter()
            .map(|(te, tc)| (te.add(e), self.desc.fp_mul(*tc, c)))
            .collect();
        MultiPoly {
            desc: self.desc.clone(),
            terms,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.desc.compatible(&other.desc)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.desc));
        }
        let degree = self.total_degree() + other.total_degree();
        let limit = self.desc.max_degree();
        if degree > limit {
            return Err(Error::DegreeLimit { degree, limit });
        }
        // iterate over the smaller operand
        let (small, big) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut terms: BTreeMap<Exponents, u64> = BTreeMap::new();
        for (e1, c1) in &small.terms {
            for (e2, c2) in &big.terms {
                let e = e1.add(e2);
                let c = self.desc.fp_mul(*c1, *c2);
                let entry = terms.entry(e).or_insert(0);
                *entry = self.desc.fp_add(*entry, c);
            }
        }
        terms.retain(|_, c| *c != 0);
        Ok(MultiPoly {
            desc: self.desc.clone(),
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let mut result = Self::one(&self.desc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Frobenius power: `f^p` computed termwise, exact in characteristic p.
    pub fn frobenius(&self) -> Result<Self> {
        let p = self.desc.p();
        let degree = self.total_degree() * p;
        let limit = self.desc.max_degree();
        if degree > limit {
            return Err(Error::DegreeLimit { degree, limit });
        }
        // c^p = c on F_p, exponents scale by p
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.scale(p as u32), *c))
            .collect();
        Ok(MultiPoly {
            desc: self.desc.clone(),
            terms,
        })
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.desc));
        }
        // single-term divisor: divide termwise
        if let Some((de, dc)) = d.as_single_term() {
            let dc_inv = self.desc.fp_inv(dc).ok()?;
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                if !de.divides(e) {
                    return None;
                }
                terms.insert(e.sub(de), self.desc.fp_mul(*c, dc_inv));
            }
            return Some(MultiPoly {
                desc: self.desc.clone(),
                terms,
            });
        }
        let (dlead, dlc) = d.leading()?;
        let dlead = dlead.clone();
        let dlc_inv = self.desc.fp_inv(dlc).ok()?;
        let mut rem = self.clone();
        let mut quo: BTreeMap<Exponents, u64> = BTreeMap::new();
        while !rem.is_zero() {
            let (rlead, rlc) = rem.leading().map(|(e, c)| (e.clone(), c))?;
            if !dlead.divides(&rlead) {
                return None;
            }
            let qe = rlead.sub(&dlead);
            let qc = self.desc.fp_mul(rlc, dlc_inv);
            quo.insert(qe.clone(), qc);
            rem = rem.sub(&d.mul_term(&qe, qc)).ok()?;
        }
        Some(MultiPoly {
            desc: self.desc.clone(),
            terms: quo,
        })
    }

    /// Leading-coefficient normalization: scales so the graded-lex leading
    /// coefficient is 1.
    pub fn monic(&self) -> Self {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return self.clone();
        }
        self.scale(self.desc.fp_inv(lc).expect("nonzero leading coefficient"))
    }

    /// Largest monomial dividing every term (the monomial content); zero
    /// polynomial yields the zero exponent vector.
    pub fn monomial_content(&self) -> Exponents {
        let m = self.desc.var_count();
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(e) => e.clone(),
            None => return Exponents::zero(m),
        };
        it.fold(first, |acc, e| acc.meet(e))
    }

    fn div_by_monomial(&self, e: &Exponents) -> Self {
        if e.is_zero() {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(te, tc)| (te.sub(e), *tc))
            .collect();
        MultiPoly {
            desc: self.desc.clone(),
            terms,
        }
    }

    /// Highest power of variable `var` appearing; `None` for the zero
    /// polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.0[var]).max()
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        let m = self.desc.var_count();
        (0..m)
            .filter(|&i| self.terms.keys().any(|e| e.0[i] > 0))
            .collect()
    }

    /// Coefficients of `self` viewed as a univariate polynomial in `var`;
    /// the values have exponent zero in `var`.
    fn coeffs_in(&self, var: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let d = e.0[var];
            let mut stripped = e.clone();
            stripped.0[var] = 0;
            out.entry(d)
                .or_insert_with(|| MultiPoly::zero(&self.desc))
                .terms
                .insert(stripped, *c);
        }
        out
    }

    /// Pseudo-remainder of `self` by `d` with respect to `var`
    /// (multiply-through variant, stays inside the polynomial ring).
    pub fn pseudo_rem(&self, d: &Self, var: usize) -> Result<Self> {
        self.desc.compatible(&d.desc)?;
        let dd = d
            .degree_in(var)
            .ok_or_else(|| Error::usage("pseudo-division by zero"))?;
        let d_coeffs = d.coeffs_in(var);
        let d_lc = d_coeffs[&dd].clone();
        let mut rem = self.clone();
        loop {
            let rd = match rem.degree_in(var) {
                Some(rd) if rd >= dd => rd,
                _ => return Ok(rem),
            };
            let r_coeffs = rem.coeffs_in(var);
            let r_lc = r_coeffs[&rd].clone();
            // rem = d_lc * rem - r_lc * x^(rd-dd) * d
            let mut shift = Exponents::zero(self.desc.var_count());
            shift.0[var] = rd - dd;
            let subtrahend = r_lc.mul(d)?.mul_term(&shift, 1);
            rem = rem.mul(&d_lc)?.sub(&subtrahend)?;
            debug_assert!(rem.degree_in(var).map(|x| x < rd).unwrap_or(true));
        }
    }

    /// Content of `self` with respect to `var`: the GCD of its `var`-coefficients.
    fn content_in(&self, var: usize) -> Result<Self> {
        let coeffs = self.coeffs_in(var);
        let mut acc = MultiPoly::zero(&self.desc);
        for c in coeffs.values() {
            acc = acc.gcd(c)?;
            if acc.is_one() {
                break;
            }
        }
        Ok(acc)
    }

    fn primitive_in(&self, var: usize) -> Result<(Self, Self)> {
        let content = self.content_in(var)?;
        let prim = self
            .exact_div(&content)
            .expect("content divides the polynomial");
        Ok((content, prim))
    }

    /// Greatest common divisor, normalized monic.
    ///
    /// Strategy: strip monomial content, then run a primitive PRS in the
    /// highest occurring variable with recursively computed contents. The
    /// full reduction is a size-control device; equality of rational
    /// functions never relies on it.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.desc.compatible(&other.desc)?;
        if self.is_zero() {
            return Ok(other.monic());
        }
        if other.is_zero() {
            return Ok(self.monic());
        }
        let ma = self.monomial_content();
        let mb = other.monomial_content();
        let common = ma.meet(&mb);
        let a = self.div_by_monomial(&ma);
        let b = other.div_by_monomial(&mb);
        // single-term fast path: gcd is just the common monomial
        let g = if a.as_single_term().is_some() || b.as_single_term().is_some() {
            MultiPoly::one(&self.desc)
        } else {
            a.gcd_primitive(&b)?
        };
        Ok(g.mul_term(&common, 1).monic())
    }

    /// GCD of polynomials with trivial monomial content.
    fn gcd_primitive(&self, other: &Self) -> Result<Self> {
        if self.is_constant() || other.is_constant() {
            return Ok(MultiPoly::one(&self.desc));
        }
        let sa = self.support();
        let sb = other.support();
        // main variable: the highest-index variable present anywhere
        let var = *sa.iter().chain(sb.iter()).max().expect("non-constant");
        let a_has = sa.contains(&var);
        let b_has = sb.contains(&var);
        if a_has && !b_has {
            return self.content_in(var)?.gcd(other);
        }
        if !a_has && b_has {
            return other.content_in(var)?.gcd(self);
        }
        let (ca, pa) = self.primitive_in(var)?;
        let (cb, pb) = other.primitive_in(var)?;
        let cg = ca.gcd(&cb)?;

        let (mut f, mut g) = if self.degree_in(var) >= other.degree_in(var) {
            (pa, pb)
        } else {
            (pb, pa)
        };
        while !g.is_zero() {
            if g.degree_in(var).is_none() || g.degree_in(var) == Some(0) {
                // degree dropped out of the main variable: gcd of the
                // primitive parts is contributed by g's content only
                f = g.gcd(&f.content_in(var)?)?;
                return cg.mul(&f);
            }
            let r = f.pseudo_rem(&g, var)?;
            f = g;
            g = if r.is_zero() {
                r
            } else {
                r.primitive_in(var)?.1
            };
        }
        debug_assert!(!f.is_zero());
        cg.mul(&f)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let vars = self.desc.variables();
        let mut first = true;
        // descending graded lex: leading term first
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if *c != 1 || e.is_zero() {
                factors.push(c.to_string());
            }
            for (i, &exp) in e.0.iter().enumerate() {
                match exp {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], exp)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2xy() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, &["x", "y"]).unwrap()
    }

    fn f3x() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(3, &["x"]).unwrap()
    }

    fn parse_terms(desc: &Arc<FieldDescriptor>, terms: &[(&[u32], u64)]) -> MultiPoly {
        MultiPoly::from_terms(
            desc,
            terms
                .iter()
                .map(|(e, c)| (Exponents(e.to_vec()), *c)),
        )
        .unwrap()
    }

    #[test]
    fn characteristic_two_addition_cancels() {
        let d = FieldDescriptor::new(2, &["x"]).unwrap();
        // (x+1) + (x+1) = 0
        let xp1 = parse_terms(&d, &[(&[1], 1), (&[0], 1)]);
        assert!(xp1.add(&xp1).unwrap().is_zero());
    }

    #[test]
    fn frobenius_additivity_squares() {
        let d = f2xy();
        // (x+y)*(x+y) = x^2+y^2 over F_2
        let xpy = parse_terms(&d, &[(&[1, 0], 1), (&[0, 1], 1)]);
        let sq = xpy.mul(&xpy).unwrap();
        let expected = parse_terms(&d, &[(&[2, 0], 1), (&[0, 2], 1)]);
        assert_eq!(sq, expected);
        assert_eq!(sq, xpy.frobenius().unwrap());
    }

    #[test]
    fn mod_three_expansion() {
        let d = f3x();
        // (x+2)*(x+1) = x^2 + 3x + 2 = x^2 + 2 mod 3
        let a = parse_terms(&d, &[(&[1], 1), (&[0], 2)]);
        let b = parse_terms(&d, &[(&[1], 1), (&[0], 1)]);
        let expected = parse_terms(&d, &[(&[2], 1), (&[0], 2)]);
        assert_eq!(a.mul(&b).unwrap(), expected);
    }

    #[test]
    fn descriptor_mismatch_is_error() {
        let a = MultiPoly::one(&f2xy());
        let b = MultiPoly::one(&FieldDescriptor::new(2, &["z"]).unwrap());
        assert_eq!(a.add(&b), Err(Error::DescriptorMismatch));
    }

    #[test]
    fn degree_guard_trips() {
        let d = FieldDescriptor::with_limits(2, &["x"], 8, 31).unwrap();
        let x = MultiPoly::variable(&d, 0).unwrap();
        let x4 = x.pow(4).unwrap();
        assert!(x4.mul(&x4).unwrap().total_degree() == 8);
        assert!(matches!(
            x4.mul(&x4).unwrap().mul(&x),
            Err(Error::DegreeLimit { .. })
        ));
    }

    #[test]
    fn exact_division() {
        let d = f2xy();
        let x = MultiPoly::variable(&d, 0).unwrap();
        let y = MultiPoly::variable(&d, 1).unwrap();
        let xpy = x.add(&y).unwrap();
        let prod = xpy.mul(&xpy).unwrap().mul(&x).unwrap();
        assert_eq!(prod.exact_div(&xpy).unwrap(), xpy.mul(&x).unwrap());
        assert_eq!(prod.exact_div(&x).unwrap(), xpy.mul(&xpy).unwrap());
        assert!(xpy.exact_div(&x).is_none());
    }

    #[test]
    fn gcd_basic() {
        let d = f2xy();
        let x = MultiPoly::variable(&d, 0).unwrap();
        let y = MultiPoly::variable(&d, 1).unwrap();
        let xpy = x.add(&y).unwrap();
        // gcd(x*(x+y), y*(x+y)) = x+y
        let a = x.mul(&xpy).unwrap();
        let b = y.mul(&xpy).unwrap();
        assert_eq!(a.gcd(&b).unwrap(), xpy);
        // gcd of coprime elements
        assert!(x.gcd(&y).unwrap().is_one());
        // gcd with zero
        assert_eq!(a.gcd(&MultiPoly::zero(&d)).unwrap(), a);
    }

    #[test]
    fn gcd_with_content() {
        let d = f3x();
        let x = MultiPoly::variable(&d, 0).unwrap();
        let xp1 = x.add(&MultiPoly::one(&d)).unwrap();
        let xp2 = x.add(&MultiPoly::constant(&d, 2)).unwrap();
        let a = xp1.mul(&xp1).unwrap().mul(&xp2).unwrap();
        let b = xp1.mul(&xp2).unwrap().mul(&xp2).unwrap();
        let g = a.gcd(&b).unwrap();
        assert_eq!(g, xp1.mul(&xp2).unwrap().monic());
    }

    #[test]
    fn gcd_multivariate() {
        let d = f2xy();
        let x = MultiPoly::variable(&d, 0).unwrap();
        let y = MultiPoly::variable(&d, 1).unwrap();
        let xpy = x.add(&y).unwrap();
        let xy = x.mul(&y).unwrap();
        let f = xpy.mul(&xy).unwrap().mul(&xpy).unwrap();
        let g = xpy.mul(&x).unwrap().mul(&x).unwrap();
        let gcd = f.gcd(&g).unwrap();
        assert_eq!(gcd, xpy.mul(&x).unwrap());
    }

    #[test]
    fn display_ordering() {
        let d = f2xy();
        let p = parse_terms(&d, &[(&[0, 0], 1), (&[2, 0], 1), (&[1, 1], 1), (&[0, 1], 1)]);
        assert_eq!(p.to_string(), "x^2+x*y+y+1");
    }
}
