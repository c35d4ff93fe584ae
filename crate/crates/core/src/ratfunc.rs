//! Exact rational functions over `F_p(x_1, ..., x_m)` and their
//! Frobenius-coordinate decomposition.
//!
//! Every [`RatFunc`] is kept normalized: numerator and denominator are
//! reduced by their GCD and the denominator is monic under graded lex.
//! Because `F_p` coefficients make the reduced monic representation unique,
//! structural equality coincides with cross-multiplication equality; the
//! latter is still exposed ([`RatFunc::eq_cross`]) so tests can confirm the
//! invariant instead of assuming it.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Exponents, FieldDescriptor};
use crate::poly::MultiPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

/// A rational function that is a unit times a Laurent monomial,
/// `c * x^e` with `c` a nonzero prime-field scalar and `e` integral.
///
/// These admit much faster span arithmetic: the class of `c * x^e` modulo
/// p-th powers is determined by `e mod p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LaurentTerm {
    pub coeff: u64,
    pub exps: Vec<i64>,
}

impl LaurentTerm {
    /// Residue of the exponent vector mod p, entries in `0..p`.
    pub fn residue(&self, p: u64) -> Vec<u64> {
        self.exps
            .iter()
            .map(|&e| e.rem_euclid(p as i64) as u64)
            .collect()
    }
}

impl RatFunc {
    pub fn zero(desc: &Arc<FieldDescriptor>) -> Self {
        RatFunc {
            num: MultiPoly::zero(desc),
            den: MultiPoly::one(desc),
        }
    }

    pub fn one(desc: &Arc<FieldDescriptor>) -> Self {
        RatFunc {
            num: MultiPoly::one(desc),
            den: MultiPoly::one(desc),
        }
    }

    pub fn constant(desc: &Arc<FieldDescriptor>, c: u64) -> Self {
        RatFunc {
            num: MultiPoly::constant(desc, c),
            den: MultiPoly::one(desc),
        }
    }

    pub fn variable(desc: &Arc<FieldDescriptor>, idx: usize) -> Result<Self> {
        Ok(RatFunc {
            num: MultiPoly::variable(desc, idx)?,
            den: MultiPoly::one(desc),
        })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            den: MultiPoly::one(p.descriptor()),
            num: p,
        }
    }

    /// Builds and normalizes `num/den`; errors when `den` is zero.
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        num.descriptor().compatible(den.descriptor())?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::normalized(num, den)
    }

    fn normalized(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Ok(Self::zero(num.descriptor()));
        }
        let g = num.gcd(&den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coeff();
        if lc != 1 {
            let inv = num.descriptor().fp_inv(lc)?;
            num = num.scale(inv);
            den = den.scale(inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        self.num.descriptor()
    }

    pub fn numerator(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.descriptor().compatible(other.descriptor())?;
        let num = self
            .num
            .mul(&other.den)?
            .add(&other.num.mul(&self.den)?)?;
        let den = self.den.mul(&other.den)?;
        Self::normalized(num, den)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.descriptor().compatible(other.descriptor())?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.descriptor()));
        }
        // cross-reduce first to keep the big multiplications small
        let g1 = self.num.gcd(&other.den)?;
        let g2 = other.num.gcd(&self.den)?;
        let a = self.num.exact_div(&g1).expect("gcd divides");
        let d = other.den.exact_div(&g1).expect("gcd divides");
        let c = other.num.exact_div(&g2).expect("gcd divides");
        let b = self.den.exact_div(&g2).expect("gcd divides");
        Self::normalized(a.mul(&c)?, b.mul(&d)?)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.mul(&other.inv()?)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::normalized(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return self.inv()?.pow(-e);
        }
        let mut result = Self::one(self.descriptor());
        let mut base = self.clone();
        let mut e = e as u64;
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

    /// Cross-multiplication equality `a*d - c*b = 0`; agrees with structural
    /// equality on normalized values.
    pub fn eq_cross(&self, other: &Self) -> Result<bool> {
        self.descriptor().compatible(other.descriptor())?;
        Ok(self
            .num
            .mul(&other.den)?
            .sub(&other.num.mul(&self.den)?)?
            .is_zero())
    }

    /// The Frobenius power `a^p`.
    pub fn frobenius_power(&self) -> Result<Self> {
        // termwise exponent scaling is exact in characteristic p; the result
        // of normalizing stays normalized, but renormalize defensively since
        // den^p need not be reduced against num^p only in characteristic 0
        Self::normalized(self.num.frobenius()?, self.den.frobenius()?)
    }

    /// The inverse Frobenius: `Some(r)` with `r^p = self` when `self` lies in
    /// `F^p`, `None` otherwise.
    pub fn frobenius_root(&self) -> Result<Option<Self>> {
        if self.is_zero() {
            return Ok(Some(self.clone()));
        }
        let coords = self.fp_coordinates()?;
        let m = self.descriptor().var_count();
        let zero = Exponents::zero(m);
        if coords.coords.keys().all(|e| *e == zero) {
            Ok(coords.coords.get(&zero).cloned())
        } else {
            Ok(None)
        }
    }

    /// Decomposes `self` over the `F^p`-basis `{x^e : e in {0..p-1}^m}`:
    /// `self = sum_e r_e^p * x^e` with the `r_e` returned per residue class.
    pub fn fp_coordinates(&self) -> Result<FpCoordinates> {
        let desc = self.descriptor().clone();
        let p = desc.p();
        let mut coords = BTreeMap::new();
        if self.is_zero() {
            return Ok(FpCoordinates {
                element: self.clone(),
                coords,
            });
        }
        // a = f/g = (f * g^(p-1)) / g^p; split the numerator by exponent
        // residues and take termwise p-th roots (F_p is perfect)
        let h = self.num.mul(&self.den.pow((p - 1) as u32)?)?;
        let mut buckets: BTreeMap<Exponents, Vec<(Exponents, u64)>> = BTreeMap::new();
        for (e, c) in h.terms() {
            let (r, q) = e.split_mod(p);
            buckets.entry(r).or_default().push((q, *c));
        }
        for (r, terms) in buckets {
            let root = MultiPoly::from_terms(&desc, terms)?;
            let value = RatFunc::new(root, self.den.clone())?;
            if !value.is_zero() {
                coords.insert(r, value);
            }
        }
        Ok(FpCoordinates {
            element: self.clone(),
            coords,
        })
    }

    /// Returns the unit-times-monomial view when both numerator and
    /// denominator are single terms.
    pub fn as_laurent(&self) -> Option<LaurentTerm> {
        let (ne, nc) = self.num.as_single_term()?;
        let (de, dc) = self.den.as_single_term()?;
        let desc = self.descriptor();
        let coeff = desc.fp_mul(nc, desc.fp_inv(dc).ok()?);
        let exps = ne
            .0
            .iter()
            .zip(&de.0)
            .map(|(&n, &d)| n as i64 - d as i64)
            .collect();
        Some(LaurentTerm { coeff, exps })
    }

    /// Builds the rational function `c * x^e` from a Laurent view.
    pub fn from_laurent(desc: &Arc<FieldDescriptor>, t: &LaurentTerm) -> Result<Self> {
        let mut num_e = Vec::with_capacity(t.exps.len());
        let mut den_e = Vec::with_capacity(t.exps.len());
        for &e in &t.exps {
            if e >= 0 {
                num_e.push(e as u32);
                den_e.push(0);
            } else {
                num_e.push(0);
                den_e.push((-e) as u32);
            }
        }
        let num = MultiPoly::monomial(desc, Exponents(num_e), t.coeff)?;
        let den = MultiPoly::monomial(desc, Exponents(den_e), 1)?;
        RatFunc::new(num, den)
    }
}

/// The coordinates of an element over the `F^p`-basis `{x^e}` of `F`,
/// with zero representatives omitted.
#[derive(Clone, Debug)]
pub struct FpCoordinates {
    pub element: RatFunc,
    pub coords: BTreeMap<Exponents, RatFunc>,
}

impl FpCoordinates {
    /// Recomputes `sum_e (r_e)^p * x^e`; equals `element` by construction.
    pub fn reconstruct(&self) -> Result<RatFunc> {
        let desc = self.element.descriptor();
        let mut acc = RatFunc::zero(desc);
        for (e, r) in &self.coords {
            let mono = RatFunc::from_poly(MultiPoly::monomial(desc, e.clone(), 1)?);
            acc = acc.add(&r.frobenius_power()?.mul(&mono)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        // parenthesize so the output re-parses with `/` binding tighter
        // than `+` and left-associative `*`/`/`
        if self.num.term_count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        let den_atomic = self
            .den
            .as_single_term()
            .map(|(e, c)| c == 1 && e.0.iter().filter(|&&x| x > 0).count() == 1)
            .unwrap_or(false);
        if den_atomic {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2x() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, &["x"]).unwrap()
    }

    fn f2xy() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(2, &["x", "y"]).unwrap()
    }

    fn f3x() -> Arc<FieldDescriptor> {
        FieldDescriptor::new(3, &["x"]).unwrap()
    }

    fn x(desc: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::variable(desc, 0).unwrap()
    }

    fn y(desc: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::variable(desc, 1).unwrap()
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let d = f2x();
        let inv_x = x(&d).inv().unwrap();
        assert!(inv_x.mul(&x(&d)).unwrap().is_one());
    }

    #[test]
    fn common_denominator_addition() {
        // x/(x+1) + 1/(x+1) = 1 over F_2(x)
        let d = f2x();
        let xp1 = x(&d).add(&RatFunc::one(&d)).unwrap();
        let a = x(&d).div(&xp1).unwrap();
        let b = RatFunc::one(&d).div(&xp1).unwrap();
        assert!(a.add(&b).unwrap().is_one());
    }

    #[test]
    fn division_cross_check() {
        // (x^2/y) / (x/y^2) = x*y
        let d = f2xy();
        let a = x(&d).pow(2).unwrap().div(&y(&d)).unwrap();
        let b = x(&d).div(&y(&d).pow(2).unwrap()).unwrap();
        let q = a.div(&b).unwrap();
        let expected = x(&d).mul(&y(&d)).unwrap();
        assert_eq!(q, expected);
        assert!(q.eq_cross(&expected).unwrap());
        // the defining identity: q * b = a by cross-multiplication
        assert!(q.mul(&b).unwrap().eq_cross(&a).unwrap());
    }

    #[test]
    fn zero_denominator_rejected() {
        let d = f2x();
        assert_eq!(
            RatFunc::new(MultiPoly::one(&d), MultiPoly::zero(&d)),
            Err(Error::DivisionByZero)
        );
        assert!(RatFunc::zero(&d).inv().is_err());
    }

    #[test]
    fn frobenius_power_of_fraction() {
        // (1/(x+1))^3 = 1/(x^3+1) over F_3 since (x+1)^3 = x^3+1
        let d = f3x();
        let a = RatFunc::one(&d)
            .div(&x(&d).add(&RatFunc::one(&d)).unwrap())
            .unwrap();
        let cube = a.frobenius_power().unwrap();
        let expected = RatFunc::one(&d)
            .div(&x(&d).pow(3).unwrap().add(&RatFunc::one(&d)).unwrap())
            .unwrap();
        assert_eq!(cube, expected);
    }

    #[test]
    fn frobenius_root_cases() {
        let dxy = f2xy();
        // x^2+y^2 = (x+y)^2
        let sq = x(&dxy)
            .pow(2)
            .unwrap()
            .add(&y(&dxy).pow(2).unwrap())
            .unwrap();
        let root = sq.frobenius_root().unwrap().unwrap();
        assert_eq!(root, x(&dxy).add(&y(&dxy)).unwrap());
        // x is not a square
        assert!(x(&dxy).frobenius_root().unwrap().is_none());
        // constants of F_p are fixed by Frobenius
        let d7 = FieldDescriptor::new(7, &["x"]).unwrap();
        let five = RatFunc::constant(&d7, 5);
        assert_eq!(five.frobenius_root().unwrap().unwrap(), five);
    }

    #[test]
    fn coordinates_of_inverse_linear() {
        // 1/(x+1) over F_2: coords at e=0 and e=1 are both 1/(x+1)
        let d = f2x();
        let a = RatFunc::one(&d)
            .div(&x(&d).add(&RatFunc::one(&d)).unwrap())
            .unwrap();
        let coords = a.fp_coordinates().unwrap();
        assert_eq!(coords.coords.len(), 2);
        for r in coords.coords.values() {
            assert_eq!(r, &a);
        }
        assert_eq!(coords.reconstruct().unwrap(), a);
    }

    #[test]
    fn coordinates_of_monomial() {
        // x^2*y = (x)^2 * y: single coordinate at e=(0,1)
        let d = f2xy();
        let a = x(&d).pow(2).unwrap().mul(&y(&d)).unwrap();
        let coords = a.fp_coordinates().unwrap();
        assert_eq!(coords.coords.len(), 1);
        let (e, r) = coords.coords.iter().next().unwrap();
        assert_eq!(e.0, vec![0, 1]);
        assert_eq!(*r, x(&d));
        assert_eq!(coords.reconstruct().unwrap(), a);
    }

    #[test]
    fn laurent_view() {
        let d = f2xy();
        let t = x(&d).pow(3).unwrap().div(&y(&d)).unwrap();
        let l = t.as_laurent().unwrap();
        assert_eq!(l.coeff, 1);
        assert_eq!(l.exps, vec![3, -1]);
        assert_eq!(l.residue(2), vec![1, 1]);
        assert_eq!(RatFunc::from_laurent(&d, &l).unwrap(), t);
        let not_mono = x(&d).add(&y(&d)).unwrap();
        assert!(not_mono.as_laurent().is_none());
    }

    #[test]
    fn display_round_trip_shapes() {
        let d = f2xy();
        let xp1 = x(&d).add(&RatFunc::one(&d)).unwrap();
        let v = xp1.div(&x(&d).mul(&y(&d)).unwrap()).unwrap();
        assert_eq!(v.to_string(), "(x+1)/(x*y)");
        let w = x(&d).div(&y(&d).pow(2).unwrap()).unwrap();
        assert_eq!(w.to_string(), "x/y^2");
    }
}
