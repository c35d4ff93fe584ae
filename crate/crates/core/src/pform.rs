//! The quasilinear p-form algebra.
//!
//! A form `<c_1, ..., c_n>` is the diagonal map `v -> sum c_i v_i^p`. Its
//! value set `D_F` is the `F^p`-span of the coefficients, so every isotropy
//! question is exact linear algebra over `F` after passing to Frobenius
//! coordinates: `sum c_i v_i^p = 0` iff the coordinate matrix of the `c_i`
//! kills `v` componentwise.
//!
//! [`QuasiPForm::decompose`] has two interchangeable engines. When every
//! coefficient is a prime-field unit times a Laurent monomial, the class of
//! a coefficient modulo `F^{*p}` is its exponent residue mod p, and rank,
//! witnesses and the anisotropic part come from exponent bookkeeping. The
//! general engine builds the coordinate matrix and runs fraction-free
//! elimination. Both produce identical decompositions on the fast path's
//! domain (tested below).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Exponents, FieldDescriptor};
use crate::linalg::{rank_kernel_pivots, solve_linear};
use crate::ratfunc::{LaurentTerm, RatFunc};

/// A diagonal quasilinear p-form; the coefficient sequence may contain
/// zeros, and the empty sequence is the zero-dimensional form.
#[derive(Clone, PartialEq, Eq)]
pub struct QuasiPForm {
    desc: Arc<FieldDescriptor>,
    coeffs: Vec<RatFunc>,
}

/// A finite-dimensional `F^p`-subspace of `F`, given by an independent basis.
#[derive(Clone, Debug)]
pub struct RepresentedSpace {
    desc: Arc<FieldDescriptor>,
    basis: Vec<RatFunc>,
}

/// The result of splitting a form into its anisotropic part and defect.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub anisotropic_part: QuasiPForm,
    pub defect: usize,
    /// Independent vectors `v` with `phi(v) = 0`, spanning the maximal
    /// isotropic subspace.
    pub isotropy_witnesses: Vec<Vec<RatFunc>>,
}

impl QuasiPForm {
    pub fn new(desc: &Arc<FieldDescriptor>, coeffs: Vec<RatFunc>) -> Result<Self> {
        for c in &coeffs {
            desc.compatible(c.descriptor())?;
        }
        Ok(QuasiPForm {
            desc: desc.clone(),
            coeffs,
        })
    }

    /// The zero-dimensional form, the identity of the orthogonal sum.
    pub fn empty(desc: &Arc<FieldDescriptor>) -> Self {
        QuasiPForm {
            desc: desc.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &[RatFunc] {
        &self.coeffs
    }

    /// Evaluates `phi(v) = sum c_i v_i^p` exactly.
    pub fn evaluate(&self, v: &[RatFunc]) -> Result<RatFunc> {
        if v.len() != self.dim() {
            return Err(Error::usage("vector length does not match dimension"));
        }
        let mut acc = RatFunc::zero(&self.desc);
        for (c, x) in self.coeffs.iter().zip(v) {
            if c.is_zero() || x.is_zero() {
                continue;
            }
            acc = acc.add(&c.mul(&x.frobenius_power()?)?)?;
        }
        Ok(acc)
    }

    pub fn orthogonal_sum(&self, other: &Self) -> Result<Self> {
        self.desc.compatible(&other.desc)?;
        let mut coeffs = self.coeffs.clone();
        coeffs.extend_from_slice(&other.coeffs);
        Ok(QuasiPForm {
            desc: self.desc.clone(),
            coeffs,
        })
    }

    /// Tensor product: all pairwise products in row-major order, i.e.
    /// `a_1 * other (+) a_2 * other (+) ...`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.desc.compatible(&other.desc)?;
        let mut coeffs = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.coeffs {
            for b in &other.coeffs {
                coeffs.push(a.mul(b)?);
            }
        }
        Ok(QuasiPForm {
            desc: self.desc.clone(),
            coeffs,
        })
    }

    /// Scales every coefficient by the nonzero scalar `c`.
    pub fn scale(&self, c: &RatFunc) -> Result<Self> {
        self.desc.compatible(c.descriptor())?;
        if c.is_zero() {
            return Err(Error::usage("scaling a form by zero"));
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.mul(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(QuasiPForm {
            desc: self.desc.clone(),
            coeffs,
        })
    }

    /// The quasi-Pfister form on the given generators: the tensor product of
    /// the factors `<1, a, ..., a^(p-1)>`; the empty list yields `<1>`.
    pub fn quasi_pfister(desc: &Arc<FieldDescriptor>, gens: &[RatFunc]) -> Result<Self> {
        let p = desc.p();
        let dim = (p as u128).checked_pow(gens.len() as u32);
        match dim {
            Some(d) if d <= 1 << 22 => {}
            _ => {
                return Err(Error::resource(format!(
                    "quasi-Pfister form on {} generators would have dimension p^{}",
                    gens.len(),
                    gens.len()
                )))
            }
        }
        let mut acc = QuasiPForm::new(desc, vec![RatFunc::one(desc)])?;
        for g in gens {
            desc.compatible(g.descriptor())?;
            if g.is_zero() {
                return Err(Error::usage("quasi-Pfister generator must be nonzero"));
            }
            let mut factor = Vec::with_capacity(p as usize);
            let mut pow = RatFunc::one(desc);
            for _ in 0..p {
                factor.push(pow.clone());
                pow = pow.mul(g)?;
            }
            acc = acc.tensor(&QuasiPForm::new(desc, factor)?)?;
        }
        Ok(acc)
    }

    /// Laurent views of the coefficients: `Some(views)` when every nonzero
    /// coefficient is a unit times a Laurent monomial (zero coefficients map
    /// to `None` inside), `None` when the fast path does not apply.
    fn laurent_views(&self) -> Option<Vec<Option<LaurentTerm>>> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            if c.is_zero() {
                out.push(None);
            } else {
                out.push(Some(c.as_laurent()?));
            }
        }
        Some(out)
    }

    /// Splits off the defect: anisotropic part, defect count, and a basis of
    /// the maximal isotropic subspace.
    pub fn decompose(&self) -> Result<Decomposition> {
        match self.laurent_views() {
            Some(views) => self.decompose_monomial(&views),
            None => self.decompose_general(),
        }
    }

    /// Defect only; avoids materializing witnesses, which matters for the
    /// very large tensor forms built by the extension machinery.
    pub fn defect(&self) -> Result<usize> {
        match self.laurent_views() {
            Some(views) => {
                let p = self.desc.p();
                let mut classes: std::collections::HashSet<Vec<u64>> =
                    std::collections::HashSet::new();
                for t in views.iter().flatten() {
                    classes.insert(t.residue(p));
                }
                Ok(self.dim() - classes.len())
            }
            None => {
                let (_, matrix) = coords_matrix(&self.desc, &self.coeffs)?;
                let (rank, _, _) = rank_kernel_pivots(&matrix)?;
                Ok(self.dim() - rank)
            }
        }
    }

    pub fn is_anisotropic(&self) -> Result<bool> {
        Ok(self.defect()? == 0)
    }

    /// Monomial engine: the `F^{*p}`-class of `u * x^E` is `E mod p`.
    fn decompose_monomial(&self, views: &[Option<LaurentTerm>]) -> Result<Decomposition> {
        let p = self.desc.p();
        let mut kept: Vec<usize> = Vec::new();
        let mut class_of: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
        let mut witnesses = Vec::new();
        for (i, view) in views.iter().enumerate() {
            match view {
                None => {
                    // zero coefficient: unit isotropy witness
                    let mut w = vec![RatFunc::zero(&self.desc); self.dim()];
                    w[i] = RatFunc::one(&self.desc);
                    witnesses.push(w);
                }
                Some(t) => {
                    let r = t.residue(p);
                    if let Some(&j) = class_of.get(&r) {
                        // c_i = c_j * s^p with s = (u_i/u_j) x^((E_i-E_j)/p)
                        let tj = views[j].as_ref().expect("kept index is nonzero");
                        let coeff = self
                            .desc
                            .fp_mul(t.coeff, self.desc.fp_inv(tj.coeff)?);
                        let exps: Vec<i64> = t
                            .exps
                            .iter()
                            .zip(&tj.exps)
                            .map(|(a, b)| {
                                debug_assert_eq!((a - b).rem_euclid(p as i64), 0);
                                (a - b) / p as i64
                            })
                            .collect();
                        let s = RatFunc::from_laurent(&self.desc, &LaurentTerm { coeff, exps })?;
                        let mut w = vec![RatFunc::zero(&self.desc); self.dim()];
                        w[i] = RatFunc::one(&self.desc);
                        w[j] = s.neg();
                        witnesses.push(w);
                    } else {
                        class_of.insert(r, i);
                        kept.push(i);
                    }
                }
            }
        }
        let anisotropic_part = QuasiPForm {
            desc: self.desc.clone(),
            coeffs: kept.iter().map(|&i| self.coeffs[i].clone()).collect(),
        };
        let defect = self.dim() - kept.len();
        debug_assert_eq!(witnesses.len(), defect);
        Ok(Decomposition {
            anisotropic_part,
            defect,
            isotropy_witnesses: witnesses,
        })
    }

    /// General engine: coordinate matrix plus fraction-free elimination.
    fn decompose_general(&self) -> Result<Decomposition> {
        let (_, matrix) = coords_matrix(&self.desc, &self.coeffs)?;
        let (rank, pivots, kernel) = rank_kernel_pivots(&matrix)?;
        let anisotropic_part = QuasiPForm {
            desc: self.desc.clone(),
            coeffs: pivots.iter().map(|&i| self.coeffs[i].clone()).collect(),
        };
        Ok(Decomposition {
            anisotropic_part,
            defect: self.dim() - rank,
            isotropy_witnesses: kernel,
        })
    }

    /// Membership of `d` in the value set `D_F(phi)`, together with a vector
    /// `v` such that `phi(v) = d` when it exists.
    pub fn represents(&self, d: &RatFunc) -> Result<Option<Vec<RatFunc>>> {
        self.desc.compatible(d.descriptor())?;
        let mut elements: Vec<RatFunc> = self.coeffs.clone();
        elements.push(d.clone());
        let (_, matrix) = coords_matrix(&self.desc, &elements)?;
        let n = self.dim();
        let rows: Vec<Vec<RatFunc>> = matrix.iter().map(|r| r[..n].to_vec()).collect();
        let rhs: Vec<RatFunc> = matrix.iter().map(|r| r[n].clone()).collect();
        let solution = solve_linear(&rows, &rhs)?;
        if let Some(v) = &solution {
            debug_assert_eq!(&self.evaluate(v)?, d);
        }
        Ok(solution)
    }

    /// The value space `D_F(phi)` with the anisotropic part's coefficients
    /// as its basis.
    pub fn represented_space(&self) -> Result<RepresentedSpace> {
        let dec = self.decompose()?;
        Ok(RepresentedSpace {
            desc: self.desc.clone(),
            basis: dec.anisotropic_part.coeffs,
        })
    }

    /// Isometry test: equal dimension and equal value spaces.
    pub fn is_isometric(&self, other: &Self) -> Result<bool> {
        self.desc.compatible(&other.desc)?;
        if self.dim() != other.dim() {
            return Ok(false);
        }
        let a = self.represented_space()?;
        let b = other.represented_space()?;
        a.equals(&b)
    }

    /// Subform test for anisotropic `self` against `other`: complete since
    /// an anisotropic form embeds exactly when its coefficients are
    /// represented values.
    pub fn is_subform(&self, other: &Self) -> Result<bool> {
        self.desc.compatible(&other.desc)?;
        let dec = self.decompose()?;
        if dec.defect != 0 {
            return Err(Error::usage("subform test requires an anisotropic form"));
        }
        let other_dec = other.decompose()?;
        if self.dim() > other_dec.anisotropic_part.dim() {
            return Ok(false);
        }
        let space = RepresentedSpace {
            desc: self.desc.clone(),
            basis: other_dec.anisotropic_part.coeffs,
        };
        for c in &self.coeffs {
            if !space.contains(c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `c * self` is isometric to `other`, for a supplied nonzero
    /// scalar; no search over the infinite `F^*` is attempted.
    pub fn is_similar_with(&self, other: &Self, c: &RatFunc) -> Result<bool> {
        if c.is_zero() {
            return Err(Error::usage("similarity factor must be nonzero"));
        }
        self.scale(c)?.is_isometric(other)
    }
}

impl RepresentedSpace {
    /// Builds a space from a claimed independent basis, verifying
    /// independence.
    pub fn new(desc: &Arc<FieldDescriptor>, basis: Vec<RatFunc>) -> Result<Self> {
        for b in &basis {
            desc.compatible(b.descriptor())?;
            if b.is_zero() {
                return Err(Error::usage("basis elements must be nonzero"));
            }
        }
        let space = RepresentedSpace {
            desc: desc.clone(),
            basis,
        };
        if space.rank()? != space.basis.len() {
            return Err(Error::usage("basis is not F^p-independent"));
        }
        Ok(space)
    }

    pub(crate) fn from_independent(desc: &Arc<FieldDescriptor>, basis: Vec<RatFunc>) -> Self {
        RepresentedSpace {
            desc: desc.clone(),
            basis,
        }
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }

    pub fn basis(&self) -> &[RatFunc] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn rank(&self) -> Result<usize> {
        let (_, matrix) = coords_matrix(&self.desc, &self.basis)?;
        let (rank, _, _) = rank_kernel_pivots(&matrix)?;
        Ok(rank)
    }

    /// Membership of `d` in the `F^p`-span of the basis.
    pub fn contains(&self, d: &RatFunc) -> Result<bool> {
        if d.is_zero() {
            return Ok(true);
        }
        Ok(QuasiPForm::new(&self.desc, self.basis.clone())?
            .represents(d)?
            .is_some())
    }

    /// Equality as subspaces via mutual membership of bases.
    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.desc.compatible(&other.desc)?;
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for b in &other.basis {
            if !self.contains(b)? {
                return Ok(false);
            }
        }
        for b in &self.basis {
            if !other.contains(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Builds the Frobenius-coordinate matrix of the given elements: rows are
/// indexed by the union of residue classes (in graded-lex order), columns by
/// the elements.
pub(crate) fn coords_matrix(
    desc: &Arc<FieldDescriptor>,
    elements: &[RatFunc],
) -> Result<(Vec<Exponents>, Vec<Vec<RatFunc>>)> {
    let mut all_coords = Vec::with_capacity(elements.len());
    let mut keys: std::collections::BTreeSet<Exponents> = std::collections::BTreeSet::new();
    for e in elements {
        desc.compatible(e.descriptor())?;
        let c = e.fp_coordinates()?;
        keys.extend(c.coords.keys().cloned());
        all_coords.push(c);
    }
    let keys: Vec<Exponents> = keys.into_iter().collect();
    let mut matrix = Vec::with_capacity(keys.len().max(1));
    for key in &keys {
        let row = all_coords
            .iter()
            .map(|c| {
                c.coords
                    .get(key)
                    .cloned()
                    .unwrap_or_else(|| RatFunc::zero(desc))
            })
            .collect();
        matrix.push(row);
    }
    if matrix.is_empty() && !elements.is_empty() {
        // all elements are zero: keep the column count with one zero row
        matrix.push(vec![RatFunc::zero(desc); elements.len()]);
    }
    Ok((keys, matrix))
}

/// Rank of the `F^p`-span of the given elements (zeros contribute nothing),
/// using the residue fast path when every element is a Laurent monomial.
pub(crate) fn span_rank(desc: &Arc<FieldDescriptor>, elements: &[RatFunc]) -> Result<usize> {
    let mut views = Vec::with_capacity(elements.len());
    let mut fast = true;
    for e in elements {
        if e.is_zero() {
            views.push(None);
        } else {
            match e.as_laurent() {
                Some(t) => views.push(Some(t)),
                None => {
                    fast = false;
                    break;
                }
            }
        }
    }
    if fast {
        let p = desc.p();
        let mut classes: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
        for t in views.into_iter().flatten() {
            classes.insert(t.residue(p));
        }
        Ok(classes.len())
    } else {
        let (_, matrix) = coords_matrix(desc, elements)?;
        let (rank, _, _) = rank_kernel_pivots(&matrix)?;
        Ok(rank)
    }
}

impl fmt::Display for QuasiPForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ">")
    }
}

impl fmt::Debug for QuasiPForm {
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

    fn x(d: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::variable(d, 0).unwrap()
    }

    fn y(d: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::variable(d, 1).unwrap()
    }

    fn one(d: &Arc<FieldDescriptor>) -> RatFunc {
        RatFunc::one(d)
    }

    fn form(d: &Arc<FieldDescriptor>, coeffs: Vec<RatFunc>) -> QuasiPForm {
        QuasiPForm::new(d, coeffs).unwrap()
    }

    #[test]
    fn orthogonal_sum_concatenates() {
        let d = f2xy();
        let a = form(&d, vec![one(&d), x(&d)]);
        let b = form(&d, vec![y(&d)]);
        let s = a.orthogonal_sum(&b).unwrap();
        assert_eq!(s.coefficients(), &[one(&d), x(&d), y(&d)]);
    }

    #[test]
    fn tensor_row_major() {
        let d = f2xy();
        let a = form(&d, vec![one(&d), x(&d)]);
        let b = form(&d, vec![one(&d), y(&d)]);
        let t = a.tensor(&b).unwrap();
        assert_eq!(
            t.coefficients(),
            &[one(&d), y(&d), x(&d), x(&d).mul(&y(&d)).unwrap()]
        );
    }

    #[test]
    fn scale_and_zero_scale() {
        let d = f2xy();
        let a = form(&d, vec![one(&d), x(&d)]);
        let s = a.scale(&x(&d)).unwrap();
        assert_eq!(s.coefficients(), &[x(&d), x(&d).pow(2).unwrap()]);
        assert!(a.scale(&RatFunc::zero(&d)).is_err());
    }

    #[test]
    fn pfister_one_generator_f3() {
        let d = f3x();
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d)]).unwrap();
        assert_eq!(
            pf.coefficients(),
            &[one(&d), x(&d), x(&d).pow(2).unwrap()]
        );
    }

    #[test]
    fn pfister_empty_and_two_generators() {
        let d = f2xy();
        let empty = QuasiPForm::quasi_pfister(&d, &[]).unwrap();
        assert_eq!(empty.coefficients(), &[one(&d)]);
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d), y(&d)]).unwrap();
        assert_eq!(
            pf.coefficients(),
            &[one(&d), y(&d), x(&d), x(&d).mul(&y(&d)).unwrap()]
        );
        assert!(QuasiPForm::quasi_pfister(&d, &[RatFunc::zero(&d)]).is_err());
    }

    #[test]
    fn decompose_additive_dependence() {
        // <x, y, x+y> over F_2: defect 1, anisotropic <x, y>, witness (1,1,1)
        let d = f2xy();
        let phi = form(&d, vec![x(&d), y(&d), x(&d).add(&y(&d)).unwrap()]);
        let dec = phi.decompose().unwrap();
        assert_eq!(dec.defect, 1);
        assert_eq!(dec.anisotropic_part.coefficients(), &[x(&d), y(&d)]);
        assert_eq!(dec.isotropy_witnesses.len(), 1);
        let w = &dec.isotropy_witnesses[0];
        assert!(phi.evaluate(w).unwrap().is_zero());
        assert_eq!(w, &vec![one(&d), one(&d), one(&d)]);
    }

    #[test]
    fn decompose_power_absorption() {
        // <1, x, x^2> over F_2: x^2 = x^2 * 1, defect 1
        let d = f2xy();
        let phi = form(&d, vec![one(&d), x(&d), x(&d).pow(2).unwrap()]);
        let dec = phi.decompose().unwrap();
        assert_eq!(dec.defect, 1);
        assert_eq!(dec.anisotropic_part.coefficients(), &[one(&d), x(&d)]);
        for w in &dec.isotropy_witnesses {
            assert!(phi.evaluate(w).unwrap().is_zero());
        }
    }

    #[test]
    fn pfister_anisotropic_iff_independent() {
        let d = f2xy();
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d), y(&d)]).unwrap();
        assert_eq!(pf.decompose().unwrap().defect, 0);
    }

    #[test]
    fn zero_coefficients_carry_unit_witnesses() {
        let d = f2xy();
        let phi = form(&d, vec![RatFunc::zero(&d), x(&d), RatFunc::zero(&d)]);
        let dec = phi.decompose().unwrap();
        assert_eq!(dec.defect, 2);
        assert_eq!(dec.anisotropic_part.coefficients(), &[x(&d)]);
        assert_eq!(dec.isotropy_witnesses.len(), 2);
        assert_eq!(dec.isotropy_witnesses[0][0], one(&d));
        assert_eq!(dec.isotropy_witnesses[1][2], one(&d));
    }

    #[test]
    fn represents_examples() {
        let d = f2xy();
        let phi = form(&d, vec![one(&d), x(&d)]);
        // x^2 + x = 1*(x)^2 + x*(1)^2
        let target = x(&d).pow(2).unwrap().add(&x(&d)).unwrap();
        let v = phi.represents(&target).unwrap().unwrap();
        assert_eq!(phi.evaluate(&v).unwrap(), target);
        // y is not represented
        assert!(phi.represents(&y(&d)).unwrap().is_none());
        // x^3*y is in the Pfister span of <<x,y>>
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d), y(&d)]).unwrap();
        let t = x(&d).pow(3).unwrap().mul(&y(&d)).unwrap();
        let v = pf.represents(&t).unwrap().unwrap();
        assert_eq!(pf.evaluate(&v).unwrap(), t);
    }

    #[test]
    fn represented_space_examples() {
        let d = f2xy();
        // <x, x^3> over F_2: x^3 = x*(x)^2 shares x's class, basis {x};
        // over F_3 the exponent residues 1 and 0 differ and both survive
        let phi = form(&d, vec![x(&d), x(&d).pow(3).unwrap()]);
        assert_eq!(phi.represented_space().unwrap().basis(), &[x(&d)]);
        let d3 = f3x();
        let x3 = RatFunc::variable(&d3, 0).unwrap();
        let phi3 = form(&d3, vec![x3.clone(), x3.pow(3).unwrap()]);
        assert_eq!(phi3.represented_space().unwrap().dim(), 2);
        // <x, 4x> over F_5: 4 is a p-th power, defect 1
        let d5 = FieldDescriptor::new(5, &["x"]).unwrap();
        let x5 = RatFunc::variable(&d5, 0).unwrap();
        let four_x = x5.mul(&RatFunc::constant(&d5, 4)).unwrap();
        let phi5 = form(&d5, vec![x5.clone(), four_x]);
        let space = phi5.represented_space().unwrap();
        assert_eq!(space.basis(), &[x5]);
        // zero form
        let zero = form(&d, vec![RatFunc::zero(&d), RatFunc::zero(&d)]);
        assert_eq!(zero.represented_space().unwrap().dim(), 0);
    }

    #[test]
    fn isometry_examples() {
        let d = f2xy();
        // <1,x> ~ <1, x+1>
        let a = form(&d, vec![one(&d), x(&d)]);
        let b = form(&d, vec![one(&d), x(&d).add(&one(&d)).unwrap()]);
        assert!(a.is_isometric(&b).unwrap());
        // p-th power absorption <a> ~ <a*s^p>: <x> ~ <x^3> at p=2,
        // <x> ~ <x^4> at p=3 (while <x> and <x^3> differ at p=3)
        assert!(form(&d, vec![x(&d)])
            .is_isometric(&form(&d, vec![x(&d).pow(3).unwrap()]))
            .unwrap());
        let d3 = f3x();
        let x3 = RatFunc::variable(&d3, 0).unwrap();
        let a3 = form(&d3, vec![x3.clone()]);
        assert!(a3
            .is_isometric(&form(&d3, vec![x3.pow(4).unwrap()]))
            .unwrap());
        assert!(!a3
            .is_isometric(&form(&d3, vec![x3.pow(3).unwrap()]))
            .unwrap());
        // <1,x> vs <1,y>: not isometric
        let c = form(&d, vec![one(&d), y(&d)]);
        assert!(!a.is_isometric(&c).unwrap());
        // dimension mismatch
        assert!(!a.is_isometric(&form(&d, vec![one(&d)])).unwrap());
    }

    #[test]
    fn subform_examples() {
        let d = f2xy();
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d), y(&d)]).unwrap();
        let a = form(&d, vec![one(&d), x(&d).mul(&y(&d)).unwrap()]);
        assert!(a.is_subform(&pf).unwrap());
        let b = form(&d, vec![one(&d), x(&d), y(&d)]);
        assert!(b.is_subform(&pf).unwrap());
        let dz = FieldDescriptor::new(2, &["x", "y", "z"]).unwrap();
        let pfz = QuasiPForm::quasi_pfister(
            &dz,
            &[
                RatFunc::variable(&dz, 0).unwrap(),
                RatFunc::variable(&dz, 1).unwrap(),
            ],
        )
        .unwrap();
        let z = form(&dz, vec![RatFunc::variable(&dz, 2).unwrap()]);
        assert!(!z.is_subform(&pfz).unwrap());
        // isotropic left argument is a usage error
        let iso = form(&d, vec![x(&d), x(&d)]);
        assert!(iso.is_subform(&pf).is_err());
    }

    #[test]
    fn similarity_examples() {
        let d = f2xy();
        let a = form(&d, vec![one(&d), x(&d)]);
        let b = form(&d, vec![x(&d), x(&d).pow(2).unwrap()]);
        assert!(a.is_similar_with(&b, &x(&d)).unwrap());
        // Pfister forms are similar to themselves by any represented value
        let pf = QuasiPForm::quasi_pfister(&d, &[x(&d), y(&d)]).unwrap();
        let c = x(&d).mul(&y(&d)).unwrap();
        assert!(pf.is_similar_with(&pf, &c).unwrap());
        let other = form(&d, vec![one(&d), y(&d)]);
        assert!(!a.is_similar_with(&other, &one(&d)).unwrap());
        assert!(a.is_similar_with(&a, &RatFunc::zero(&d)).is_err());
    }

    #[test]
    fn decompose_is_idempotent() {
        let d = f2xy();
        let phi = form(
            &d,
            vec![
                x(&d),
                y(&d),
                x(&d).add(&y(&d)).unwrap(),
                RatFunc::zero(&d),
            ],
        );
        let dec = phi.decompose().unwrap();
        assert_eq!(dec.defect + dec.anisotropic_part.dim(), phi.dim());
        let dec2 = dec.anisotropic_part.decompose().unwrap();
        assert_eq!(dec2.defect, 0);
        assert!(dec
            .anisotropic_part
            .represented_space()
            .unwrap()
            .equals(&phi.represented_space().unwrap())
            .unwrap());
    }

    #[test]
    fn fast_and_general_paths_agree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for p in [2u64, 3] {
            let d = FieldDescriptor::new(p, &["x", "y"]).unwrap();
            for _ in 0..40 {
                let dim = rng.gen_range(1..6);
                let mut coeffs = Vec::new();
                for _ in 0..dim {
                    if rng.gen_bool(0.15) {
                        coeffs.push(RatFunc::zero(&d));
                        continue;
                    }
                    let t = LaurentTerm {
                        coeff: rng.gen_range(1..p),
                        exps: vec![rng.gen_range(-3..4), rng.gen_range(-3..4)],
                    };
                    coeffs.push(RatFunc::from_laurent(&d, &t).unwrap());
                }
                let phi = form(&d, coeffs);
                let views = phi.laurent_views().expect("monomial inputs");
                let fast = phi.decompose_monomial(&views).unwrap();
                let general = phi.decompose_general().unwrap();
                assert_eq!(fast.defect, general.defect);
                assert_eq!(
                    fast.anisotropic_part.coefficients(),
                    general.anisotropic_part.coefficients()
                );
                assert_eq!(fast.isotropy_witnesses, general.isotropy_witnesses);
                assert_eq!(phi.defect().unwrap(), fast.defect);
            }
        }
    }
}
