//! p-independence, p-bases, norm fields and minimal forms.
//!
//! A finite set is p-independent exactly when its quasi-Pfister form is
//! anisotropic, which reduces every question here to the span machinery of
//! [`crate::pform`]. Membership in `F^p(B)` for a p-independent `B` is
//! decided on the closed monomial span: the `F^p`-space spanned by all
//! `b^e` with `e in {0..p-1}^|B|` is closed under multiplication, hence
//! equals the field `F^p(B)`.

use std::sync::Arc;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::linalg::FpEchelon;
use crate::pform::{coords_matrix, QuasiPForm, RepresentedSpace};
use crate::ratfunc::RatFunc;

/// Norm field data of a form: a p-basis of `N_F(phi)` over `F`, the norm
/// degree exponent `n` (so `ndeg = p^n`), and the norm form.
#[derive(Clone, Debug)]
pub struct NormData {
    pub generators: Vec<RatFunc>,
    pub norm_degree_exponent: usize,
    pub norm_form: QuasiPForm,
}

impl NormData {
    pub fn norm_degree(&self, desc: &Arc<FieldDescriptor>) -> BigUint {
        BigUint::from(desc.p()).pow(self.norm_degree_exponent as u32)
    }
}

fn check_nonzero(elements: &[RatFunc]) -> Result<()> {
    if elements.iter().any(|e| e.is_zero()) {
        return Err(Error::usage("elements must be nonzero"));
    }
    Ok(())
}

/// Whether the set is p-independent over `F`, i.e. its quasi-Pfister form is
/// anisotropic. Laurent-monomial sets short-circuit to mod-p rank of the
/// exponent residues.
pub fn is_p_independent(desc: &Arc<FieldDescriptor>, elements: &[RatFunc]) -> Result<bool> {
    check_nonzero(elements)?;
    if let Some(views) = elements
        .iter()
        .map(|e| e.as_laurent())
        .collect::<Option<Vec<_>>>()
    {
        let p = desc.p();
        let mut ech = FpEchelon::new(p, desc.var_count());
        for t in &views {
            if !ech.insert(t.residue(p)) {
                return Ok(false);
            }
        }
        return Ok(true);
    }
    let pf = QuasiPForm::quasi_pfister(desc, elements)?;
    Ok(pf.defect()? == 0)
}

/// The `F^p`-spanning monomials `{prod b_i^{e_i} : e in {0..p-1}^|B|}` of a
/// p-independent set `B`; this span is the field `F^p(B)`.
pub(crate) fn field_span_monomials(
    desc: &Arc<FieldDescriptor>,
    basis: &[RatFunc],
) -> Result<Vec<RatFunc>> {
    let p = desc.p();
    let count = (p as u128).checked_pow(basis.len() as u32);
    match count {
        Some(c) if c <= 1 << 22 => {}
        _ => {
            return Err(Error::resource(format!(
                "p-basis of size {} spans too many monomials",
                basis.len()
            )))
        }
    }
    let mut span = vec![RatFunc::one(desc)];
    for b in basis {
        let mut next = Vec::with_capacity(span.len() * p as usize);
        let mut pow = RatFunc::one(desc);
        for _ in 0..p {
            for s in &span {
                next.push(s.mul(&pow)?);
            }
            pow = pow.mul(b)?;
        }
        span = next;
    }
    Ok(span)
}

/// Membership `a ∈ F^p(B)` for p-independent `B`, via the closed monomial
/// span.
pub(crate) fn in_field_generated_by(
    desc: &Arc<FieldDescriptor>,
    a: &RatFunc,
    basis: &[RatFunc],
) -> Result<bool> {
    // monomial fast path: residue of a must lie in the mod-p row space
    let all_laurent = basis.iter().all(|b| b.as_laurent().is_some());
    if all_laurent {
        if let Some(t) = a.as_laurent() {
            let p = desc.p();
            let mut ech = FpEchelon::new(p, desc.var_count());
            for b in basis {
                ech.insert(b.as_laurent().expect("checked").residue(p));
            }
            return Ok(ech.contains(t.residue(p)));
        }
    }
    let span = field_span_monomials(desc, basis)?;
    RepresentedSpace::from_independent(desc, span).contains(a)
}

/// Greedy first-come p-basis extraction: returns a p-independent
/// subsequence `B` of `S` with `F^p(B) = F^p(S)`.
pub fn extract_p_basis(
    desc: &Arc<FieldDescriptor>,
    elements: &[RatFunc],
) -> Result<Vec<RatFunc>> {
    check_nonzero(elements)?;
    let mut basis: Vec<RatFunc> = Vec::new();
    for a in elements {
        desc.compatible(a.descriptor())?;
        if !in_field_generated_by(desc, a, &basis)? {
            basis.push(a.clone());
        }
    }
    Ok(basis)
}

/// `[F^p(S) : F^p] = p^|B|` as an exact integer.
pub fn degree_over_fp(desc: &Arc<FieldDescriptor>, elements: &[RatFunc]) -> Result<BigUint> {
    let basis = extract_p_basis(desc, elements)?;
    Ok(BigUint::from(desc.p()).pow(basis.len() as u32))
}

/// Norm field of a nonzero form: scale so the first coefficient is 1, then
/// extract a p-basis from the coefficient ratios.
pub fn norm_data(phi: &QuasiPForm) -> Result<NormData> {
    let desc = phi.descriptor().clone();
    let a0 = phi
        .coefficients()
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .ok_or_else(|| Error::usage("norm field of the zero form is undefined"))?;
    let ratios: Vec<RatFunc> = phi
        .coefficients()
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| c.div(&a0))
        .collect::<Result<Vec<_>>>()?;
    let generators = extract_p_basis(&desc, &ratios)?;
    let norm_form = QuasiPForm::quasi_pfister(&desc, &generators)?;
    let data = NormData {
        norm_degree_exponent: generators.len(),
        generators,
        norm_form,
    };
    // n+1 <= dim phi_an <= p^n
    let an_dim = phi.dim() - phi.defect()?;
    let n = data.norm_degree_exponent;
    let upper = (desc.p() as u128)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if an_dim < n + 1 || an_dim as u128 > upper {
        return Err(Error::verification(format!(
            "norm degree bounds violated: n = {n}, dim phi_an = {an_dim}"
        )));
    }
    Ok(data)
}

/// Whether the anisotropic form has the smallest dimension allowed by its
/// norm degree, `ndeg = p^(dim - 1)`.
pub fn is_minimal(phi: &QuasiPForm) -> Result<bool> {
    if phi.defect()? != 0 {
        return Err(Error::usage("minimality is defined for anisotropic forms"));
    }
    if phi.dim() == 0 {
        return Err(Error::usage("minimality of the zero form is undefined"));
    }
    let data = norm_data(phi)?;
    Ok(data.norm_degree_exponent == phi.dim() - 1)
}

/// A minimal subform of dimension `k + 1` where `ndeg phi = p^k`, built from
/// the p-basis ratios: `a_0 * <1, b_1, ..., b_k>`.
pub fn minimal_subform(phi: &QuasiPForm) -> Result<QuasiPForm> {
    let desc = phi.descriptor().clone();
    let data = norm_data(phi)?;
    if data.norm_degree_exponent == 0 {
        return Err(Error::usage(
            "minimal subform construction needs norm degree at least p",
        ));
    }
    let a0 = phi
        .coefficients()
        .iter()
        .find(|c| !c.is_zero())
        .cloned()
        .expect("norm_data verified the form is nonzero");
    let mut coeffs = vec![RatFunc::one(&desc)];
    coeffs.extend(data.generators.iter().cloned());
    let result = QuasiPForm::new(&desc, coeffs)?.scale(&a0)?;
    debug_assert!(is_minimal(&result)?);
    debug_assert!(result.is_subform(&phi.decompose()?.anisotropic_part)?);
    Ok(result)
}

/// Outcome of the norm-degree anisotropy criterion for a tensor product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductAnisotropy {
    /// `ndeg(phi (x) psi) = ndeg(phi) * ndeg(psi)`; sufficient for the
    /// product to stay anisotropic.
    pub criterion_holds: bool,
    pub product_anisotropic: bool,
}

/// Checks the norm-degree criterion and the actual anisotropy of the tensor
/// product of two anisotropic forms. The criterion implies anisotropy; the
/// converse direction can fail.
pub fn product_anisotropy(phi: &QuasiPForm, psi: &QuasiPForm) -> Result<ProductAnisotropy> {
    if phi.defect()? != 0 || psi.defect()? != 0 {
        return Err(Error::usage(
            "the product criterion is defined for anisotropic forms",
        ));
    }
    let n_phi = norm_data(phi)?.norm_degree_exponent;
    let n_psi = norm_data(psi)?.norm_degree_exponent;
    let product = phi.tensor(psi)?;
    let n_prod = norm_data(&product)?.norm_degree_exponent;
    let criterion_holds = n_prod == n_phi + n_psi;
    let product_anisotropic = product.defect()? == 0;
    if criterion_holds && !product_anisotropic {
        return Err(Error::verification(
            "norm-degree criterion held but the tensor product is isotropic",
        ));
    }
    Ok(ProductAnisotropy {
        criterion_holds,
        product_anisotropic,
    })
}

/// `F^p`-basis of the intersection of two represented spaces, from the
/// kernel of the stacked coordinate matrix.
pub fn subspace_intersection(
    a: &RepresentedSpace,
    b: &RepresentedSpace,
) -> Result<RepresentedSpace> {
    let desc = a.descriptor().clone();
    desc.compatible(b.descriptor())?;
    let ka = a.dim();
    if ka == 0 || b.dim() == 0 {
        return Ok(RepresentedSpace::from_independent(&desc, Vec::new()));
    }
    // columns: a-basis then negated b-basis; kernel vectors (lambda, mu)
    // satisfy sum lambda_i^p a_i = sum mu_j^p b_j
    let mut elements: Vec<RatFunc> = a.basis().to_vec();
    elements.extend(b.basis().iter().map(|x| x.neg()));
    let (_, matrix) = coords_matrix(&desc, &elements)?;
    let (_, kernel) = crate::linalg::matrix_rank_kernel(&matrix)?;
    let mut basis = Vec::with_capacity(kernel.len());
    for v in kernel {
        let mut el = RatFunc::zero(&desc);
        for (lambda, ai) in v[..ka].iter().zip(a.basis()) {
            if lambda.is_zero() {
                continue;
            }
            el = el.add(&lambda.frobenius_power()?.mul(ai)?)?;
        }
        basis.push(el);
    }
    // independence of the images follows from injectivity of the coordinate
    // map on each side; verify in debug builds
    debug_assert_eq!(
        crate::pform::span_rank(&desc, &basis)?,
        basis.len(),
        "intersection basis must be independent"
    );
    Ok(RepresentedSpace::from_independent(&desc, basis))
}
