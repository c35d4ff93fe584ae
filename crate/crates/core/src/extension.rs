//! Defect and anisotropic part over purely inseparable extensions.
//!
//! For `E = F(a_1^(1/p^{n_1}), ..., a_r^(1/p^{n_r}))` the defect of a form
//! defined over `F` only depends on the exponent-one truncation
//! `K = F(a_1^(1/p), ..., a_r^(1/p))`, so everything here is F-side linear
//! algebra; no extension field is ever materialized on the main path.
//!
//! [`decompose_over_extension`] always runs two routes and insists they
//! agree:
//! 1. the tensor formula: `p^s * iql(phi_K) = iql(phi (x) <<c_1,...,c_s>>)`
//!    for a p-basis `{c_1,...,c_s}` of the adjoined generators;
//! 2. a greedy `K^p`-rank over the coefficients, where membership in the
//!    `K^p`-span of a set `I` is membership in the `F^p`-span of
//!    `{u * c^e : u in I, e in {0..p-1}^s}`.
//!
//! [`defect_via_modular_basis`] is an independent oracle for modular specs:
//! it expands unknown `L^p`-multipliers over the basis of monomials in the
//! adjoined roots (with the reduction `b_i^{p^{n_i}} = a_i`), flattens to an
//! `F`-linear system through Frobenius coordinates, and counts relations by
//! brute force. It never uses the exponent-one reduction.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Exponents, FieldDescriptor};
use crate::linalg::{matrix_rank, FpEchelon};
use crate::pform::{coords_matrix, QuasiPForm, RepresentedSpace};
use crate::pindep::{extract_p_basis, field_span_monomials, is_p_independent};
use crate::ratfunc::RatFunc;

/// A purely inseparable extension `F(a_1^(1/p^{n_1}), ..., a_r^(1/p^{n_r}))`,
/// trivial when empty.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtensionSpec {
    desc: Arc<FieldDescriptor>,
    adjoined: Vec<(RatFunc, u32)>,
}

impl ExtensionSpec {
    pub fn new(desc: &Arc<FieldDescriptor>, adjoined: Vec<(RatFunc, u32)>) -> Result<Self> {
        for (a, n) in &adjoined {
            desc.compatible(a.descriptor())?;
            if a.is_zero() {
                return Err(Error::usage("adjoined elements must be nonzero"));
            }
            if *n == 0 {
                return Err(Error::usage("root exponents must be at least 1"));
            }
        }
        Ok(ExtensionSpec {
            desc: desc.clone(),
            adjoined,
        })
    }

    pub fn empty(desc: &Arc<FieldDescriptor>) -> Self {
        ExtensionSpec {
            desc: desc.clone(),
            adjoined: Vec::new(),
        }
    }

    /// Exponent-one spec with the same generators: `(a_i, n_i) -> (a_i, 1)`.
    /// The defect of any form over `F` is unchanged by this replacement.
    pub fn reduced_to_exponent_one(&self) -> Self {
        ExtensionSpec {
            desc: self.desc.clone(),
            adjoined: self.adjoined.iter().map(|(a, _)| (a.clone(), 1)).collect(),
        }
    }

    pub fn descriptor(&self) -> &Arc<FieldDescriptor> {
        &self.desc
    }

    pub fn adjoined(&self) -> &[(RatFunc, u32)] {
        &self.adjoined
    }

    pub fn is_trivial(&self) -> bool {
        self.adjoined.is_empty()
    }

    /// The extension exponent `max n_i` (0 for the trivial extension).
    pub fn exponent(&self) -> u32 {
        self.adjoined.iter().map(|(_, n)| *n).max().unwrap_or(0)
    }
}

impl fmt::Display for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(")?;
        for (i, (a, n)) in self.adjoined.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let q = (self.desc.p() as u128).pow(*n);
            let needs_parens = a.denominator().is_one()
                && a.numerator().as_single_term().is_none();
            if needs_parens || !a.denominator().is_one() {
                write!(f, "({a})^(1/{q})")?;
            } else {
                write!(f, "{a}^(1/{q})")?;
            }
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ExtensionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Defect data of a form over an extension, with F-side representatives of
/// the anisotropic part and the p-basis actually used for the computation.
#[derive(Clone, Debug)]
pub struct RelativeDecomposition {
    pub defect: usize,
    pub anisotropic_dim: usize,
    /// Elements of `F` forming a `K^p`-basis of the values of the extended
    /// form; the anisotropic part over `K` is `<representatives>`.
    pub representatives: Vec<RatFunc>,
    /// The p-independent generator subset the reduction ran on.
    pub pbasis_used: Vec<RatFunc>,
}

/// Sparse coordinate vector over residue classes.
type CoordVec = BTreeMap<Exponents, RatFunc>;

/// Incremental echelon over `F` for sparse coordinate vectors; rows are
/// normalized so the pivot (the row's graded-lex maximal key) carries 1.
pub(crate) struct GeneralSpan {
    rows: BTreeMap<Exponents, CoordVec>,
}

impl GeneralSpan {
    pub(crate) fn new() -> Self {
        GeneralSpan {
            rows: BTreeMap::new(),
        }
    }

    fn reduce(&self, mut vec: CoordVec) -> Result<CoordVec> {
        loop {
            let Some(key) = vec
                .keys()
                .rev()
                .find(|k| self.rows.contains_key(*k))
                .cloned()
            else {
                return Ok(vec);
            };
            let factor = vec.remove(&key).expect("key present");
            if factor.is_zero() {
                continue;
            }
            let row = &self.rows[&key];
            for (k, v) in row {
                if *k == key {
                    continue;
                }
                let delta = factor.mul(v)?;
                match vec.remove(k) {
                    None => {
                        vec.insert(k.clone(), delta.neg());
                    }
                    Some(old) => {
                        let next = old.sub(&delta)?;
                        if !next.is_zero() {
                            vec.insert(k.clone(), next);
                        }
                    }
                }
            }
        }
    }

    /// Inserts the vector unless it lies in the current span; returns
    /// whether the rank grew.
    pub(crate) fn insert(&mut self, vec: CoordVec) -> Result<bool> {
        let mut vec = self.reduce(vec)?;
        vec.retain(|_, v| !v.is_zero());
        let Some(pivot) = vec.keys().next_back().cloned() else {
            return Ok(false);
        };
        let lead = vec[&pivot].clone();
        if !lead.is_one() {
            let inv = lead.inv()?;
            for v in vec.values_mut() {
                *v = v.mul(&inv)?;
            }
        }
        self.rows.insert(pivot, vec);
        Ok(true)
    }

    pub(crate) fn contains(&self, vec: CoordVec) -> Result<bool> {
        let mut reduced = self.reduce(vec)?;
        reduced.retain(|_, v| !v.is_zero());
        Ok(reduced.is_empty())
    }
}

fn coord_vec(e: &RatFunc) -> Result<CoordVec> {
    Ok(e.fp_coordinates()?.coords)
}

/// Shared preprocessing: exponent-one reduction, dropping p-th powers,
/// p-basis extraction.
pub(crate) fn effective_pbasis(spec: &ExtensionSpec) -> Result<Vec<RatFunc>> {
    let desc = spec.descriptor();
    let mut gens = Vec::new();
    for (a, _) in spec.adjoined() {
        // a in F^p generates nothing over F
        if a.frobenius_root()?.is_none() {
            gens.push(a.clone());
        }
    }
    extract_p_basis(desc, &gens)
}

/// Laurent views of a slice, `None` when any nonzero entry is not a
/// monomial. Zero entries are `None` inside.
fn laurent_views(elements: &[RatFunc]) -> Option<Vec<Option<crate::ratfunc::LaurentTerm>>> {
    let mut out = Vec::with_capacity(elements.len());
    for e in elements {
        if e.is_zero() {
            out.push(None);
        } else {
            out.push(Some(e.as_laurent()?));
        }
    }
    Some(out)
}

/// Defect, anisotropic dimension and F-side representatives of `phi` over
/// the extension, via the dual-path reduction described in the module docs.
pub fn decompose_over_extension(
    phi: &QuasiPForm,
    spec: &ExtensionSpec,
) -> Result<RelativeDecomposition> {
    let desc = phi.descriptor().clone();
    desc.compatible(spec.descriptor())?;
    let pbasis = effective_pbasis(spec)?;
    let s = pbasis.len();
    let p = desc.p();
    let n = phi.dim();

    let fast = laurent_views(phi.coefficients())
        .filter(|_| pbasis.iter().all(|c| c.as_laurent().is_some()))
        .map(|views| (views, pbasis.iter().map(|c| c.as_laurent().unwrap()).collect::<Vec<_>>()));

    let (tensor_defect, kept): (usize, Vec<usize>) = match &fast {
        Some((views, basis_views)) => {
            // tensor route: count distinct residues of coeff * c^e over the
            // whole multiplier box
            let basis_res: Vec<Vec<u64>> = basis_views.iter().map(|t| t.residue(p)).collect();
            let mut box_sums: Vec<Vec<u64>> = vec![vec![0; desc.var_count()]];
            for r in &basis_res {
                let mut next = Vec::with_capacity(box_sums.len() * p as usize);
                for mult in 0..p {
                    for b in &box_sums {
                        let v: Vec<u64> = b
                            .iter()
                            .zip(r)
                            .map(|(x, y)| (x + mult * y) % p)
                            .collect();
                        next.push(v);
                    }
                }
                box_sums = next;
            }
            let mut classes: std::collections::HashSet<Vec<u64>> =
                std::collections::HashSet::new();
            for t in views.iter().flatten() {
                let r = t.residue(p);
                for b in &box_sums {
                    classes.insert(r.iter().zip(b).map(|(x, y)| (x + y) % p).collect());
                }
            }
            let tensor_dim = n
                .checked_mul(box_sums.len())
                .ok_or_else(|| Error::resource("tensor dimension overflow"))?;
            let tensor_defect = tensor_dim - classes.len();

            // greedy route: canonical coset representatives modulo the
            // generator residue space
            let mut ech = FpEchelon::new(p, desc.var_count());
            for r in &basis_res {
                if !ech.insert(r.clone()) {
                    return Err(Error::verification(
                        "extracted p-basis has dependent residues",
                    ));
                }
            }
            let mut seen: std::collections::HashSet<Vec<u64>> = std::collections::HashSet::new();
            let mut kept = Vec::new();
            for (i, view) in views.iter().enumerate() {
                if let Some(t) = view {
                    if seen.insert(ech.reduce(t.residue(p))) {
                        kept.push(i);
                    }
                }
            }
            (tensor_defect, kept)
        }
        None => {
            // tensor route with explicit products
            let multipliers = field_span_monomials(&desc, &pbasis)?;
            let mut products = Vec::with_capacity(n * multipliers.len());
            for c in phi.coefficients() {
                for m in &multipliers {
                    products.push(c.mul(m)?);
                }
            }
            let (_, matrix) = coords_matrix(&desc, &products)?;
            let rank = matrix_rank(&matrix)?;
            let tensor_defect = products.len() - rank;

            // greedy route with an incremental echelon
            let mut span = GeneralSpan::new();
            let mut kept = Vec::new();
            for (i, c) in phi.coefficients().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !span.contains(coord_vec(c)?)? {
                    kept.push(i);
                    for m in &multipliers {
                        span.insert(coord_vec(&c.mul(m)?)?)?;
                    }
                }
            }
            (tensor_defect, kept)
        }
    };

    let p_pow_s = (p as usize)
        .checked_pow(s as u32)
        .ok_or_else(|| Error::resource("p^s overflow"))?;
    if tensor_defect % p_pow_s != 0 {
        return Err(Error::verification(format!(
            "tensor defect {tensor_defect} is not divisible by p^{s}"
        )));
    }
    let defect_tensor_route = tensor_defect / p_pow_s;
    let defect_greedy_route = n - kept.len();
    if defect_tensor_route != defect_greedy_route {
        return Err(Error::verification(format!(
            "defect paths disagree: tensor {defect_tensor_route} vs greedy {defect_greedy_route}"
        )));
    }

    Ok(RelativeDecomposition {
        defect: defect_greedy_route,
        anisotropic_dim: kept.len(),
        representatives: kept
            .iter()
            .map(|&i| phi.coefficients()[i].clone())
            .collect(),
        pbasis_used: pbasis,
    })
}

/// Membership of `d` (an element of `F`) in the `K^p`-span of the given
/// `F`-elements, where `K` is the exponent-one extension generated by
/// `pbasis` (which must be p-independent).
pub(crate) fn kp_span_contains(
    desc: &Arc<FieldDescriptor>,
    d: &RatFunc,
    elements: &[RatFunc],
    pbasis: &[RatFunc],
) -> Result<bool> {
    if d.is_zero() {
        return Ok(true);
    }
    let p = desc.p();
    let fast = d.as_laurent().is_some()
        && elements.iter().all(|e| e.is_zero() || e.as_laurent().is_some())
        && pbasis.iter().all(|c| c.as_laurent().is_some());
    if fast {
        let mut ech = FpEchelon::new(p, desc.var_count());
        for c in pbasis {
            ech.insert(c.as_laurent().expect("checked").residue(p));
        }
        let target = ech.reduce(d.as_laurent().expect("checked").residue(p));
        for e in elements {
            if e.is_zero() {
                continue;
            }
            if ech.reduce(e.as_laurent().expect("checked").residue(p)) == target {
                return Ok(true);
            }
        }
        return Ok(false);
    }
    let multipliers = field_span_monomials(desc, pbasis)?;
    let mut span = GeneralSpan::new();
    for e in elements {
        if e.is_zero() {
            continue;
        }
        for m in &multipliers {
            span.insert(coord_vec(&e.mul(m)?)?)?;
        }
    }
    span.contains(coord_vec(d)?)
}

/// `K^p`-rank of a set of `F`-elements (dimension of their `K^p`-span).
pub(crate) fn kp_rank(
    desc: &Arc<FieldDescriptor>,
    elements: &[RatFunc],
    pbasis: &[RatFunc],
) -> Result<usize> {
    let phi = QuasiPForm::new(desc, elements.to_vec())?;
    let spec = ExtensionSpec::new(
        desc,
        pbasis.iter().map(|c| (c.clone(), 1)).collect(),
    )?;
    Ok(decompose_over_extension(&phi, &spec)?.anisotropic_dim)
}

/// The value set of `phi` over the simple extension `F(a^(1/p))`, modeled on
/// the F-side as `D_F(<<a>> (x) phi)`.
pub fn values_over_simple_extension(
    phi: &QuasiPForm,
    a: &RatFunc,
) -> Result<RepresentedSpace> {
    let desc = phi.descriptor().clone();
    desc.compatible(a.descriptor())?;
    if a.is_zero() || a.frobenius_root()?.is_some() {
        return Err(Error::usage(
            "the adjoined element must lie outside F^p",
        ));
    }
    let pf = QuasiPForm::quasi_pfister(&desc, std::slice::from_ref(a))?;
    pf.tensor(phi)?.represented_space()
}

/// Independent defect oracle for modular specs (p-independent generators):
/// expands `L^p`-multiplier unknowns over the full basis of root monomials
/// and counts relations among the coefficients by exact elimination. The
/// exponent-one reduction is never invoked.
pub fn defect_via_modular_basis(phi: &QuasiPForm, spec: &ExtensionSpec) -> Result<usize> {
    let desc = phi.descriptor().clone();
    desc.compatible(spec.descriptor())?;
    if spec.is_trivial() {
        return phi.defect();
    }
    let gens: Vec<RatFunc> = spec.adjoined().iter().map(|(a, _)| a.clone()).collect();
    if !is_p_independent(&desc, &gens)? {
        return Err(Error::usage(
            "the modular oracle requires p-independent generators",
        ));
    }
    let p = desc.p();
    let exps: Vec<u32> = spec.adjoined().iter().map(|(_, n)| *n).collect();
    let log_degree: u32 = exps.iter().sum();
    let l_degree = (p as u128)
        .checked_pow(log_degree)
        .filter(|&d| d <= 1 << 22)
        .ok_or_else(|| Error::resource("extension degree too large for the oracle"))? as usize;

    let nonzero: Vec<&RatFunc> = phi.coefficients().iter().filter(|c| !c.is_zero()).collect();
    let zeros = phi.dim() - nonzero.len();
    if nonzero.is_empty() {
        return Ok(phi.dim());
    }

    // enumerate the root-monomial box f in prod {0..p^{n_i}}; each unknown
    // multiplier coordinate (i, f) lands in the block of g where
    // b^(p*f) = a^q * b^g componentwise
    let r = gens.len();
    let mut box_shape: Vec<u64> = Vec::with_capacity(r);
    for n in &exps {
        box_shape.push((p as u64).pow(*n));
    }
    // blocks: map g -> list of w = c_i * prod a_j^{q_j}
    let mut blocks: BTreeMap<Vec<u64>, Vec<RatFunc>> = BTreeMap::new();
    let mut f = vec![0u64; r];
    loop {
        let mut g = vec![0u64; r];
        let mut q = vec![0u64; r];
        for j in 0..r {
            let pf = p * f[j];
            g[j] = pf % box_shape[j];
            q[j] = pf / box_shape[j];
        }
        let mut factor = RatFunc::one(&desc);
        for j in 0..r {
            if q[j] > 0 {
                factor = factor.mul(&gens[j].pow(q[j] as i64)?)?;
            }
        }
        let entry = blocks.entry(g).or_default();
        for c in &nonzero {
            entry.push(c.mul(&factor)?);
        }
        // advance the mixed-radix counter
        let mut j = 0;
        loop {
            if j == r {
                break;
            }
            f[j] += 1;
            if f[j] < box_shape[j] {
                break;
            }
            f[j] = 0;
            j += 1;
        }
        if j == r {
            break;
        }
    }

    let mut kernel_total = 0usize;
    for (_, ws) in blocks {
        let (_, matrix) = coords_matrix(&desc, &ws)?;
        let rank = matrix_rank(&matrix)?;
        kernel_total += ws.len() - rank;
    }
    if kernel_total % l_degree != 0 {
        return Err(Error::verification(format!(
            "relation count {kernel_total} not divisible by the extension degree {l_degree}"
        )));
    }
    Ok(kernel_total / l_degree + zeros)
}
