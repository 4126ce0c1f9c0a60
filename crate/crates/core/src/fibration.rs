//! Sullivan models of spherical fibrations (and fibrations whose fibre has
//! truncated polynomial cohomology `ℚ[z]/z^d`), the reduction of a primitive
//! model to a minimal one, and the comparison maps into cohomology.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    FreeAlgebra, Generator, Monomial, Morphism, Poly, Presentation, PresentationError,
};
use crate::cohomology::{CohomologyMap, CohomologyTable, QuasiIsoReport};
use crate::qlinalg::{QMatrix, Q};
use crate::sullivan::{
    generators_closed_in_degree, lift, rational_connectivity, MinimalModel, SullivanError,
};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FibrationError {
    #[error("twisting element has degree {found:?}, expected {expected}")]
    WrongDegree { expected: u32, found: Option<u32> },
    #[error("twisting element is not closed: d(u) = {0}")]
    NotClosed(String),
    #[error("fibre dimension {n} has the wrong parity for a {kind} fibre")]
    ParityMismatch { n: u32, kind: &'static str },
    #[error("projective-like fibre needs d ≥ 2, got {0}")]
    BadTruncation(u32),
    #[error("fibre generator name `{0}` is already used by the base")]
    NameClash(String),
    #[error("the reduction applies to even and projective-like fibres only")]
    OddFiber,
    #[error("twisting element is zero; the fibration is a product")]
    ZeroTwist,
    #[error("fibration is flagged primitive but u has no linear part")]
    NoLinearPart,
    #[error("no generator of degree {0} occurs linearly in u")]
    DegeneratePresentation(u32),
    #[error("element is not closed in the reduced model: {0}")]
    NotClosedInReduced(String),
    #[error("closure correction needs a primitive reduction")]
    NotPrimitive,
    #[error("base certificate rejected: {0}")]
    BaseNotCertified(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Sullivan(#[from] SullivanError),
}

/// Rational homotopy type of the fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiberKind {
    /// `S^n`, `n` even: generators `z` (degree n) and `z'` (degree 2n−1).
    EvenSphere(u32),
    /// `S^n`, `n` odd: one generator `z` of degree n.
    OddSphere(u32),
    /// Cohomology `ℚ[z]/z^d` with `|z| = n` even: `z` and `z'` of degree dn−1.
    ProjectiveLike { n: u32, d: u32 },
}

impl FiberKind {
    pub fn n(&self) -> u32 {
        match *self {
            FiberKind::EvenSphere(n) | FiberKind::OddSphere(n) => n,
            FiberKind::ProjectiveLike { n, .. } => n,
        }
    }

    /// Exponent of `z` in `dz'`; `None` for odd spheres.
    pub fn truncation(&self) -> Option<u32> {
        match *self {
            FiberKind::EvenSphere(_) => Some(2),
            FiberKind::OddSphere(_) => None,
            FiberKind::ProjectiveLike { d, .. } => Some(d),
        }
    }

    /// Degree of the twisting element `u`.
    pub fn twist_degree(&self) -> u32 {
        match *self {
            FiberKind::EvenSphere(n) => 2 * n,
            FiberKind::OddSphere(n) => n + 1,
            FiberKind::ProjectiveLike { n, d } => d * n,
        }
    }

    fn validate(&self) -> Result<(), FibrationError> {
        match *self {
            FiberKind::EvenSphere(n) if n < 2 || n % 2 == 1 => {
                Err(FibrationError::ParityMismatch {
                    n,
                    kind: "even sphere",
                })
            }
            FiberKind::OddSphere(n) if n % 2 == 0 => Err(FibrationError::ParityMismatch {
                n,
                kind: "odd sphere",
            }),
            FiberKind::ProjectiveLike { n, .. } if n < 2 || n % 2 == 1 => {
                Err(FibrationError::ParityMismatch {
                    n,
                    kind: "projective-like",
                })
            }
            FiberKind::ProjectiveLike { d, .. } if d < 2 => Err(FibrationError::BadTruncation(d)),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for FiberKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FiberKind::EvenSphere(n) => write!(f, "even sphere S^{n}"),
            FiberKind::OddSphere(n) => write!(f, "odd sphere S^{n}"),
            FiberKind::ProjectiveLike { n, d } => write!(f, "ℚ[z]/z^{d} with |z| = {n}"),
        }
    }
}

/// The relative Sullivan algebra `ΛV_B ⊗ ΛV_F` modelling a fibration.
#[derive(Debug, Clone)]
pub struct FibrationModel {
    base: MinimalModel,
    kind: FiberKind,
    u: Poly,
    total: Presentation,
    primitive: bool,
    z: usize,
    z_prime: Option<usize>,
}

/// Default fibre generator names.
pub fn default_fiber_names(kind: FiberKind) -> Vec<String> {
    match kind {
        FiberKind::OddSphere(_) => vec!["z".into()],
        _ => vec!["z".into(), "z'".into()],
    }
}

pub fn build_fibration_model(
    base: &MinimalModel,
    kind: FiberKind,
    u: &Poly,
) -> Result<FibrationModel, FibrationError> {
    build_fibration_model_named(base, kind, u, &default_fiber_names(kind))
}

/// Like [`build_fibration_model`] with explicit names for the fibre generators.
pub fn build_fibration_model_named(
    base: &MinimalModel,
    kind: FiberKind,
    u: &Poly,
    names: &[String],
) -> Result<FibrationModel, FibrationError> {
    kind.validate()?;
    let b = base.model();
    let expected = kind.twist_degree();
    if !u.is_zero() {
        let found = b.degree(u);
        if found != Some(expected) {
            return Err(FibrationError::WrongDegree { expected, found });
        }
    }
    let du = b.d(u);
    if !du.is_zero() {
        return Err(FibrationError::NotClosed(b.format(&du)));
    }
    let wanted = if kind.truncation().is_some() { 2 } else { 1 };
    assert_eq!(names.len(), wanted, "fibre needs {wanted} generator names");
    for name in names {
        if b.index_of(name).is_some() {
            return Err(FibrationError::NameClash(name.clone()));
        }
    }
    let n = kind.n();
    let z = b.len();
    let (gens, diffs, z_prime) = match kind.truncation() {
        None => (
            vec![Generator::new(names[0].clone(), n)],
            vec![u.clone()],
            None,
        ),
        Some(d) => {
            let zd = Poly::monomial(Monomial::power(z, d));
            (
                vec![
                    Generator::new(names[0].clone(), n),
                    Generator::new(names[1].clone(), d * n - 1),
                ],
                vec![Poly::zero(), zd - u.clone()],
                Some(z + 1),
            )
        }
    };
    let total = b.extend(gens, diffs)?;
    Ok(FibrationModel {
        primitive: !b.is_decomposable(u),
        base: base.clone(),
        kind,
        u: u.clone(),
        total,
        z,
        z_prime,
    })
}

impl FibrationModel {
    pub fn base(&self) -> &MinimalModel {
        &self.base
    }

    pub fn kind(&self) -> FiberKind {
        self.kind
    }

    /// The twisting element, in the base model's generators.
    pub fn u(&self) -> &Poly {
        &self.u
    }

    /// Base generators followed by the fibre generators.
    pub fn total(&self) -> &Presentation {
        &self.total
    }

    pub fn is_primitive(&self) -> bool {
        self.primitive
    }

    /// Index of `z` in the total presentation.
    pub fn z(&self) -> usize {
        self.z
    }

    pub fn z_prime(&self) -> Option<usize> {
        self.z_prime
    }

    /// The inclusion of the base model, a model of the projection.
    pub fn projection(&self) -> Morphism {
        let images = (0..self.base.model().len()).map(Poly::generator).collect();
        Morphism::new(self.base.model().clone(), self.total.clone(), images)
            .expect("base generators keep their degrees")
    }

    pub fn max_degree(&self) -> u32 {
        self.total.max_degree()
    }
}

/// Outcome of reducing the model of an even or projective-like fibration.
#[derive(Debug, Clone)]
pub struct ReductionResult {
    /// Minimal model `ΛV_E`: base generators without `u'`, plus `z`.
    pub ve_model: Presentation,
    /// Surjective chain map `total → ΛV_E`.
    pub phi: Morphism,
    /// Algebra section of `φ`; not a chain map in general.
    pub psi: Morphism,
    /// Index in the total presentation of the generator eliminated by `φ`.
    pub chosen_u_prime: Option<usize>,
    /// Coefficient of `u'` in `u`.
    pub coefficient: Q,
    /// `u − c·u'`, in the total presentation.
    pub v_remainder: Poly,
    pub primitive: bool,
}

impl ReductionResult {
    /// `ΛV_E` as a minimal model of the total space, with a quasi-isomorphism
    /// obtained by lifting the identity through `φ`.
    pub fn minimal_model(&self) -> Result<MinimalModel, FibrationError> {
        if !self.primitive {
            return Ok(MinimalModel::identity(&self.ve_model)?);
        }
        let l = lift(&Morphism::identity(&self.ve_model), &self.phi)?;
        Ok(MinimalModel::from_map(l.map)?)
    }

    /// `φ` restricted to the base: a model of the projection landing in `ΛV_E`.
    pub fn projection(&self, fm: &FibrationModel) -> Morphism {
        fm.projection().then(&self.phi)
    }

    /// True iff `φ ∘ ψ` is the identity on generators.
    pub fn section_identity_holds(&self) -> bool {
        self.psi.then(&self.phi).images() == Morphism::identity(&self.ve_model).images()
    }
}

/// The minimal model of the total space described by the reduction: in the
/// primitive case `u' ↦ (z^d − v)/c`, `z' ↦ 0`, otherwise the total itself.
#[allow(non_snake_case)]
pub fn theoremC_reduce(fm: &FibrationModel) -> Result<ReductionResult, FibrationError> {
    let d = fm.kind.truncation().ok_or(FibrationError::OddFiber)?;
    if fm.u.is_zero() {
        return Err(FibrationError::ZeroTwist);
    }
    let total = &fm.total;
    let base = fm.base.model();
    if !fm.primitive {
        let id = Morphism::identity(total);
        return Ok(ReductionResult {
            ve_model: total.clone(),
            phi: id.clone(),
            psi: id,
            chosen_u_prime: None,
            coefficient: Q::zero(),
            v_remainder: fm.u.clone(),
            primitive: false,
        });
    }
    let linear = base.algebra().linear_part(&fm.u);
    if linear.is_zero() {
        return Err(FibrationError::NoLinearPart);
    }
    let deg = fm.kind.twist_degree();
    let (up, c) = linear
        .terms()
        .filter_map(|(m, c)| {
            let i = m.factors()[0].0;
            (base.generators()[i].degree == deg).then(|| (i, c.clone()))
        })
        .min_by_key(|(i, _)| *i)
        .ok_or(FibrationError::DegeneratePresentation(deg))?;
    let v = fm.u.clone() - Poly::generator(up).scale(&c);

    // ΛV_E keeps the base generators except u', with z inserted by degree.
    let mut kept: Vec<usize> = (0..base.len()).filter(|&i| i != up).collect();
    kept.push(fm.z);
    kept.sort_by_key(|&i| total.generators()[i].degree);
    let mut position = vec![None; total.len()];
    for (k, &i) in kept.iter().enumerate() {
        position[i] = Some(k);
    }
    let ve_gens: Vec<Generator> = kept
        .iter()
        .map(|&i| total.generators()[i].clone())
        .collect();
    let ve_alg = FreeAlgebra::new(ve_gens)?;

    let mut images: Vec<Poly> = position
        .iter()
        .map(|p| p.map_or_else(Poly::zero, Poly::generator))
        .collect();
    let rename = |p: &Poly, images: &[Poly]| total.algebra().substitute(p, &ve_alg, images);
    let z_e = Poly::generator(position[fm.z].expect("z is kept"));
    let phi_v = rename(&v, &images);
    images[up] = (ve_alg.pow(&z_e, d) - phi_v).scale(&(Q::one() / &c));

    let ve_diff: Vec<Poly> = kept.iter().map(|&i| rename(total.dg(i), &images)).collect();
    let ve_model = Presentation::new(ve_alg, ve_diff, total.max_degree())?;
    let phi = Morphism::chain_map(total.clone(), ve_model.clone(), images)
        .map_err(|e| FibrationError::Verification(e.to_string()))?;
    let psi_images = kept.iter().map(|&i| Poly::generator(i)).collect();
    let psi = Morphism::new(ve_model.clone(), total.clone(), psi_images)
        .map_err(|e| FibrationError::Verification(e.to_string()))?;
    Ok(ReductionResult {
        ve_model,
        phi,
        psi,
        chosen_u_prime: Some(up),
        coefficient: c,
        v_remainder: v,
        primitive: true,
    })
}

/// `S_i = Σ_{m<i} z^{d(i−1−m)} u^m`, so that `(z^d − u)·S_i = z^{di} − u^i`.
pub fn telescoping_sum(p: &Presentation, z: &Poly, u: &Poly, d: u32, i: u32) -> Poly {
    let mut out = Poly::zero();
    for m in 0..i {
        out += &p.mul(&p.pow(z, d * (i - 1 - m)), &p.pow(u, m));
    }
    out
}

/// How the closed lift of a reduced cocycle was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrectionMethod {
    /// `ψ(x)` was already closed.
    None,
    /// The explicit telescoping correction closed it.
    Explicit,
    /// The explicit correction left a residue, removed by solving in `ker φ`.
    Solved,
}

#[derive(Debug, Clone)]
pub struct ClosureCorrection {
    pub psi_x: Poly,
    /// `x̃` with `d(ψ(x) + x̃) = 0`.
    pub correction: Poly,
    pub closed: Poly,
    pub method: CorrectionMethod,
}

/// Lifts a closed element `x` of `ΛV_E` to a closed element of the total model
/// mapping to `x` under `φ`.
pub fn closure_correction(
    fm: &FibrationModel,
    red: &ReductionResult,
    x: &Poly,
) -> Result<ClosureCorrection, FibrationError> {
    let up = red.chosen_u_prime.ok_or(FibrationError::NotPrimitive)?;
    let d = fm.kind.truncation().ok_or(FibrationError::OddFiber)?;
    let ve = &red.ve_model;
    let dx = ve.d(x);
    if !dx.is_zero() {
        return Err(FibrationError::NotClosedInReduced(ve.format(&dx)));
    }
    let total = &fm.total;
    let psi_x = red.psi.apply(x);
    let dpsi = total.d(&psi_x);
    let mut out = ClosureCorrection {
        closed: psi_x.clone(),
        psi_x,
        correction: Poly::zero(),
        method: CorrectionMethod::None,
    };
    if dpsi.is_zero() {
        return Ok(out);
    }

    // Write d(ψx) = Σ b_{ij} U^i z^j with U = u standing in for c·u' + v.
    let zp = fm.z_prime.expect("even-type fibre");
    let z = Poly::generator(fm.z);
    let u_total = fm.u.clone();
    let ext = total.extend(
        vec![Generator::new(
            fresh_name(total, "U"),
            fm.kind.twist_degree(),
        )],
        vec![Poly::zero()],
    )?;
    let big_u = Poly::generator(total.len());
    let mut subst: Vec<Poly> = (0..total.len()).map(Poly::generator).collect();
    subst[up] = (big_u - red.v_remainder.clone()).scale(&(Q::one() / &red.coefficient));
    let expanded = total.algebra().substitute(&dpsi, ext.algebra(), &subst);

    let mut correction = Poly::zero();
    let zprime = Poly::generator(zp);
    for (m, coeff) in expanded.terms() {
        let i = m.exponent(total.len());
        if i == 0 {
            continue;
        }
        let j = m.exponent(fm.z);
        let b = Poly::term(m.without(total.len()).without(fm.z), coeff.clone());
        let sign = if total.degree(&b).unwrap_or(0) % 2 == 1 {
            -Q::one()
        } else {
            Q::one()
        };
        let s_i = telescoping_sum(total, &z, &u_total, d, i);
        let term = total.mul(&total.mul(&b, &zprime), &total.mul(&total.pow(&z, j), &s_i));
        correction += &term.scale(&sign);
    }
    let candidate = out.psi_x.clone() + correction.clone();
    let residue = total.d(&candidate);
    if residue.is_zero() {
        out.correction = correction;
        out.closed = candidate;
        out.method = CorrectionMethod::Explicit;
        return Ok(out);
    }
    let k = total.degree(&out.psi_x).expect("ψ(x) is homogeneous");
    let extra = solve_in_kernel(fm, &residue, k).ok_or_else(|| {
        FibrationError::Verification(format!(
            "no primitive for {} in ker φ",
            total.format(&residue)
        ))
    })?;
    out.correction = correction - extra;
    out.closed = out.psi_x.clone() + out.correction.clone();
    out.method = CorrectionMethod::Solved;
    debug_assert!(total.d(&out.closed).is_zero());
    Ok(out)
}

fn fresh_name(p: &Presentation, stem: &str) -> String {
    let mut name = stem.to_string();
    while p.index_of(&name).is_some() {
        name.push('\'');
    }
    name
}

/// Some `y` in degree `k` of the ideal `(z', z^d − u)` with `dy = r`.
fn solve_in_kernel(fm: &FibrationModel, r: &Poly, k: u32) -> Option<Poly> {
    let total = &fm.total;
    let zp = fm.z_prime?;
    let gens = [Poly::generator(zp), total.dg(zp).clone()];
    let mut span: Vec<Poly> = Vec::new();
    for g in &gens {
        let gd = total.degree(g)?;
        if gd > k {
            continue;
        }
        for m in total.basis_of_degree(k - gd) {
            let p = total.mul(&Poly::monomial(m), g);
            if !p.is_zero() {
                span.push(p);
            }
        }
    }
    let target = total.basis_of_degree(k + 1);
    let cols: Vec<Vec<Q>> = span
        .iter()
        .map(|p| total.d(p).coordinates(&target).expect("degree k + 1"))
        .collect();
    let m = QMatrix::from_columns(target.len(), &cols);
    let sol = m.solve(&r.coordinates(&target).ok()?).ok()?;
    let mut y = Poly::zero();
    for (p, c) in span.iter().zip(&sol) {
        if !c.is_zero() {
            y += &p.scale(c);
        }
    }
    Some(y)
}

/// The map `total → (H(total), 0)` sending base generators to the pushforward
/// of their `μ_B`-class, `z ↦ [z]` and `z' ↦ 0`.
pub fn tilde_mu_e(
    fm: &FibrationModel,
    mu_b: &CohomologyMap,
) -> Result<CohomologyMap, FibrationError> {
    let base = fm.base.model();
    if mu_b.source().generators() != base.generators()
        || mu_b.target().presentation().generators() != base.generators()
    {
        return Err(FibrationError::BaseNotCertified(
            "certificate is not defined on the base model".into(),
        ));
    }
    let report = mu_b.verify();
    if !report.passed() {
        return Err(FibrationError::BaseNotCertified(format!(
            "not a quasi-isomorphism to cohomology (first failure in degree {:?})",
            report.first_failure
        )));
    }
    let total = &fm.total;
    let table = Arc::new(CohomologyTable::compute(total));
    let mut images = Vec::with_capacity(total.len());
    for c in mu_b.images() {
        let rep = mu_b.target().class_to_poly(c);
        let class = if c.degree > table.top_degree() {
            table.zero_class(c.degree)
        } else {
            table
                .class_in(c.degree, &rep)
                .expect("closed base elements stay closed")
        };
        images.push(class);
    }
    let z = Poly::generator(fm.z);
    let zd = fm.kind.n();
    images.push(if zd > table.top_degree() {
        table.zero_class(zd)
    } else {
        match table.class_in(zd, &z) {
            Some(c) => c,
            None => table.zero_class(zd),
        }
    });
    if let Some(zp) = fm.z_prime {
        images.push(table.zero_class(total.generators()[zp].degree));
    }
    Ok(CohomologyMap::new(total.clone(), table, images))
}

/// Degree-by-degree comparison of `μ_E ∘ p̂` with `p* ∘ μ_B` on cohomology.
#[derive(Debug, Clone)]
pub struct FormalMapReport {
    /// `(degree, agree)` for each degree up to the bound.
    pub degrees: Vec<(u32, bool)>,
    /// The two algebra maps agree on every base generator.
    pub strict: bool,
    pub first_failure: Option<u32>,
}

impl FormalMapReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Compares the two ways around the square formed by a model `p̂` of the
/// projection and formality certificates `μ_B`, `μ_E` of base and total.
pub fn check_formal_map(
    p_hat: &Morphism,
    mu_b: &CohomologyMap,
    mu_e: &CohomologyMap,
) -> FormalMapReport {
    let b = p_hat.source();
    let h_e = mu_e.target();
    let h_b = mu_b.target();
    let compatible = mu_b.source().generators() == b.generators()
        && mu_e.source().generators() == p_hat.target().generators()
        && h_e.presentation().generators() == p_hat.target().generators()
        && h_b.presentation().generators() == b.generators();
    let top = h_e.top_degree().min(h_b.top_degree());
    if !compatible {
        return FormalMapReport {
            degrees: Vec::new(),
            strict: false,
            first_failure: Some(0),
        };
    }
    let push = |c: &crate::cohomology::Class| -> Option<Vec<Q>> {
        let rep = p_hat.apply(&h_b.class_to_poly(c));
        h_e.class_in(c.degree, &rep).map(|x| x.coords)
    };
    let strict = b.generators().iter().enumerate().all(|(i, g)| {
        if g.degree > top {
            return true;
        }
        let left = mu_e
            .apply_in(g.degree, &p_hat.apply(&Poly::generator(i)))
            .coords;
        push(&mu_b.images()[i]).is_some_and(|right| right == left)
    });
    let src = CohomologyTable::compute_to(b, top);
    let mut degrees = Vec::new();
    let mut first_failure = None;
    for k in 0..=top {
        let ok = src.representatives(k).iter().all(|r| {
            let left = mu_e.apply_in(k, &p_hat.apply(r)).coords;
            push(&mu_b.apply_in(k, r)).is_some_and(|right| right == left)
        });
        if !ok && first_failure.is_none() {
            first_failure = Some(k);
        }
        degrees.push((k, ok));
    }
    FormalMapReport {
        degrees,
        strict,
        first_failure,
    }
}

/// The hypotheses under which formality passes from the total space to the
/// base, read off the base model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferConditions {
    pub n: u32,
    /// Rational connectivity `k` of the base.
    pub connectivity: u32,
    pub hurewicz_n: bool,
    pub hurewicz_twist: bool,
    /// `k ≥ (twist degree) − 1`.
    pub connectivity_route: bool,
    /// Hurewicz in degree n and `3k + 1 ≥ 2n` (sphere fibres only).
    pub low_connectivity_route: bool,
}

impl TransferConditions {
    pub fn evaluate(base: &MinimalModel, kind: FiberKind) -> Self {
        let n = kind.n();
        let k = rational_connectivity(base);
        let top = kind.twist_degree();
        let hurewicz_n = generators_closed_in_degree(base.model(), n);
        let hurewicz_twist = generators_closed_in_degree(base.model(), top);
        let sphere = matches!(kind, FiberKind::EvenSphere(_));
        TransferConditions {
            n,
            connectivity: k,
            hurewicz_n,
            hurewicz_twist,
            connectivity_route: k + 1 >= top,
            low_connectivity_route: sphere && hurewicz_n && 3 * k + 1 >= 2 * n,
        }
    }

    /// Whether any route applies.
    pub fn satisfied(&self, kind: FiberKind) -> bool {
        match kind {
            FiberKind::EvenSphere(_) => {
                (self.hurewicz_n && self.hurewicz_twist)
                    || self.connectivity_route
                    || self.low_connectivity_route
            }
            FiberKind::ProjectiveLike { .. } => self.connectivity_route,
            FiberKind::OddSphere(_) => false,
        }
    }
}

/// Quasi-isomorphism report for `φ` up to the truncation degree of the total model.
pub fn verify_phi(red: &ReductionResult) -> QuasiIsoReport {
    crate::cohomology::verify_quasi_iso_to(&red.phi, red.phi.source().max_degree())
}

/// Readable summary of a reduction: the reduced model, the split of `u` and `φ`.
pub fn describe_reduction(fm: &FibrationModel, red: &ReductionResult) -> Vec<String> {
    let total = &fm.total;
    let mut lines = vec![format!("reduced model: {}", red.ve_model)];
    if let Some(up) = red.chosen_u_prime {
        let c = &red.coefficient;
        let coeff = if c.is_one() {
            String::new()
        } else if c.is_negative() {
            format!("({c})*")
        } else {
            format!("{c}*")
        };
        lines.push(format!(
            "u = {}{} + ({})",
            coeff,
            total.generators()[up].name,
            total.format(&red.v_remainder)
        ));
    }
    for (name, image) in red.phi.describe() {
        lines.push(format!("phi: {name} -> {image}"));
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    fn pres(gens: &[(&str, u32)], d: &[(&str, &str)], n: u32) -> Presentation {
        Presentation::from_spec(gens, d, n).unwrap()
    }

    fn minimal(gens: &[(&str, u32)], d: &[(&str, &str)], n: u32) -> MinimalModel {
        MinimalModel::identity(&pres(gens, d, n)).unwrap()
    }

    fn hpn(n: u32) -> MinimalModel {
        let dw = format!("u^{}", n + 1);
        minimal(
            &[("u", 4), ("w", 4 * n + 3)],
            &[("w", dw.as_str())],
            4 * n + 4,
        )
    }

    fn twistor(n: u32) -> FibrationModel {
        let b = hpn(n);
        let u = b.model().parse("u").unwrap();
        build_fibration_model(&b, FiberKind::EvenSphere(2), &u).unwrap()
    }

    fn assert_closed_lift(
        fm: &FibrationModel,
        red: &ReductionResult,
        x: &Poly,
    ) -> ClosureCorrection {
        let c = closure_correction(fm, red, x).unwrap();
        assert!(fm.total().d(&c.closed).is_zero());
        assert_eq!(&red.phi.apply(&c.closed), x);
        c
    }

    #[test]
    fn twistor_model_shape() {
        let fm = twistor(1);
        assert!(fm.is_primitive());
        assert_eq!(
            fm.total().to_string(),
            "Λ(u:4, w:7, z:2, z':3; dw = u^2, dz' = -u + z^2)"
        );
    }

    #[test]
    fn construction_errors() {
        let b = hpn(1);
        let w = b.model().parse("w").unwrap();
        assert!(matches!(
            build_fibration_model(&b, FiberKind::EvenSphere(2), &w),
            Err(FibrationError::WrongDegree { expected: 4, .. })
        ));
        assert!(matches!(
            build_fibration_model(&b, FiberKind::EvenSphere(3), &Poly::zero()),
            Err(FibrationError::ParityMismatch { .. })
        ));
        assert!(matches!(
            build_fibration_model(&b, FiberKind::OddSphere(4), &Poly::zero()),
            Err(FibrationError::ParityMismatch { .. })
        ));
        assert!(matches!(
            build_fibration_model(&b, FiberKind::ProjectiveLike { n: 2, d: 1 }, &Poly::zero()),
            Err(FibrationError::BadTruncation(1))
        ));
        let m = minimal(&[("a", 2), ("c", 3), ("e", 4)], &[("e", "a*c")], 10);
        let e = m.model().parse("e").unwrap();
        assert!(matches!(
            build_fibration_model(&m, FiberKind::OddSphere(3), &e),
            Err(FibrationError::NotClosed(_))
        ));
        let z = minimal(&[("z", 2)], &[], 8);
        let err = build_fibration_model(&z, FiberKind::EvenSphere(2), &Poly::zero()).unwrap_err();
        assert_eq!(err, FibrationError::NameClash("z".into()));
    }

    #[test]
    fn odd_fibre_model() {
        let b = minimal(&[("b", 3), ("c", 4), ("n", 6)], &[("n", "b*c")], 20);
        let c = b.model().parse("c").unwrap();
        let fm = build_fibration_model(&b, FiberKind::OddSphere(3), &c).unwrap();
        assert!(fm.is_primitive());
        assert_eq!(fm.total().format(fm.total().dg(fm.z())), "c");
        assert_eq!(fm.z_prime(), None);
    }

    #[test]
    fn hp1_twistor_reduces_to_cp3() {
        let fm = twistor(1);
        let red = theoremC_reduce(&fm).unwrap();
        assert_eq!(red.ve_model.to_string(), "Λ(z:2, w:7; dw = z^4)");
        assert!(red.section_identity_holds());
        assert!(verify_phi(&red).passed());
        let t = CohomologyTable::compute(&red.ve_model);
        assert_eq!(t.betti_numbers(), vec![1, 0, 1, 0, 1, 0, 1, 0, 0]);
        assert!(red.minimal_model().unwrap().verify().passed());
        assert!(!red.psi.is_chain_map());
    }

    #[test]
    fn rescaled_and_twisted_u() {
        let b = minimal(
            &[("a", 2), ("x", 4), ("y", 4), ("w", 7)],
            &[("w", "x*y")],
            12,
        );
        let u = b.model().parse("3*y + 2*x + a^2").unwrap();
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &u).unwrap();
        let red = theoremC_reduce(&fm).unwrap();
        assert_eq!(red.chosen_u_prime, Some(1));
        assert_eq!(red.coefficient, q(2));
        assert_eq!(fm.total().format(&red.v_remainder), "a^2 + 3*y");
        assert_eq!(
            red.phi.target().format(red.phi.image(1)),
            "-1/2*a^2 + 1/2*z^2 - 3/2*y"
        );
        assert!(red.section_identity_holds());
        assert!(verify_phi(&red).passed());
        assert!(crate::sullivan::is_minimal(&red.ve_model));
    }

    #[test]
    fn zero_twist_and_odd_rejected() {
        let b = hpn(1);
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &Poly::zero()).unwrap();
        assert!(!fm.is_primitive());
        assert_eq!(theoremC_reduce(&fm).unwrap_err(), FibrationError::ZeroTwist);
        let s = minimal(&[("c", 4)], &[], 10);
        let c = s.model().parse("c").unwrap();
        let odd = build_fibration_model(&s, FiberKind::OddSphere(3), &c).unwrap();
        assert_eq!(theoremC_reduce(&odd).unwrap_err(), FibrationError::OddFiber);
    }

    #[test]
    fn non_primitive_keeps_total() {
        let b = minimal(&[("a", 2), ("t", 5)], &[("t", "a^3")], 12);
        let u = b.model().parse("a^2").unwrap();
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &u).unwrap();
        assert!(!fm.is_primitive());
        let red = theoremC_reduce(&fm).unwrap();
        assert_eq!(&red.ve_model, fm.total());
        assert!(red.chosen_u_prime.is_none());
        assert!(red.minimal_model().is_ok());
    }

    #[test]
    fn projective_like_reduction() {
        let b = minimal(&[("x", 6)], &[], 24);
        let x = b.model().parse("x").unwrap();
        let fm = build_fibration_model(&b, FiberKind::ProjectiveLike { n: 2, d: 3 }, &x).unwrap();
        let red = theoremC_reduce(&fm).unwrap();
        assert_eq!(red.ve_model.to_string(), "Λ(z:2)");
        assert!(verify_phi(&red).passed());
    }

    #[test]
    fn trivial_fibration_betti_is_tensor_product() {
        let b = hpn(1);
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &Poly::zero()).unwrap();
        let total = CohomologyTable::compute(fm.total()).betti_numbers();
        let base = CohomologyTable::compute(b.model()).betti_numbers();
        let fib = [1usize, 0, 1];
        for (k, &bk) in total.iter().enumerate() {
            let expected: usize = (0..=k)
                .map(|i| base[i] * fib.get(k - i).copied().unwrap_or(0))
                .sum();
            assert_eq!(bk, expected, "degree {k}");
        }
    }

    #[test]
    fn telescoping_identity_general_d() {
        for d in 2..=5u32 {
            let p = pres(&[("z", 2), ("u", 2 * d)], &[], 80);
            let z = p.parse("z").unwrap();
            let u = p.parse("u").unwrap();
            for i in 1..=4 {
                let s = telescoping_sum(&p, &z, &u, d, i);
                let lhs = p.mul(&(p.pow(&z, d) - u.clone()), &s);
                assert_eq!(lhs, p.pow(&z, d * i) - p.pow(&u, i), "d = {d}, i = {i}");
            }
        }
    }

    #[test]
    fn telescoping_sum_matches_quadratic_case() {
        let p = pres(&[("z", 2), ("u", 4)], &[], 40);
        let z = p.parse("z").unwrap();
        let u = p.parse("u").unwrap();
        for i in 1..=5u32 {
            let mut direct = Poly::zero();
            for m in 0..i {
                direct += &p.mul(&p.pow(&z, 2 * i - 2 - 2 * m), &p.pow(&u, m));
            }
            assert_eq!(telescoping_sum(&p, &z, &u, 2, i), direct);
        }
    }

    #[test]
    fn closure_of_trivial_cocycles() {
        let fm = twistor(1);
        let red = theoremC_reduce(&fm).unwrap();
        let z = red.ve_model.parse("z").unwrap();
        let c = assert_closed_lift(&fm, &red, &z);
        assert_eq!(c.method, CorrectionMethod::None);
        let z2 = red.ve_model.parse("z^2").unwrap();
        assert!(assert_closed_lift(&fm, &red, &z2).correction.is_zero());
        let w = red.ve_model.parse("w").unwrap();
        assert!(matches!(
            closure_correction(&fm, &red, &w),
            Err(FibrationError::NotClosedInReduced(_))
        ));
    }

    #[test]
    fn single_term_correction() {
        let b = minimal(
            &[("a", 2), ("u", 4), ("t", 5), ("s", 9)],
            &[("t", "a^3"), ("s", "a^3*u")],
            14,
        );
        let u = b.model().parse("u").unwrap();
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &u).unwrap();
        let red = theoremC_reduce(&fm).unwrap();
        let x = red.ve_model.parse("s - t*z^2").unwrap();
        let c = assert_closed_lift(&fm, &red, &x);
        assert_eq!(c.method, CorrectionMethod::Explicit);
        assert_eq!(fm.total().format(&c.correction), "a^3*z'");
    }

    #[test]
    fn closure_on_every_cocycle() {
        let b = minimal(&[("b", 3), ("u", 4), ("n", 6)], &[("n", "b*u")], 16);
        let u = b.model().parse("u").unwrap();
        let fm = build_fibration_model(&b, FiberKind::EvenSphere(2), &u).unwrap();
        let red = theoremC_reduce(&fm).unwrap();
        let ve = &red.ve_model;
        assert_eq!(ve.to_string(), "Λ(z:2, b:3, n:6; dn = z^2*b)");
        let t = CohomologyTable::compute(ve);
        for k in 0..=ve.max_degree() {
            for r in t.representatives(k) {
                assert_closed_lift(&fm, &red, r);
            }
        }
    }

    #[test]
    fn tilde_mu_on_twistor() {
        let fm = twistor(1);
        let base = fm.base().model().clone();
        let hb = Arc::new(CohomologyTable::compute(&base));
        let images = vec![
            hb.class_in(4, &base.parse("u").unwrap()).unwrap(),
            hb.zero_class(7),
        ];
        let mu_b = CohomologyMap::new(base, hb, images);
        let mu = tilde_mu_e(&fm, &mu_b).unwrap();
        assert!(mu.verify().passed());
        let names: Vec<String> = mu
            .describe()
            .into_iter()
            .map(|(n, v)| format!("{n}:{v}"))
            .collect();
        assert_eq!(names[3], "z':0");
    }

    #[test]
    fn transfer_conditions() {
        let fm = twistor(1);
        let c = TransferConditions::evaluate(fm.base(), fm.kind());
        assert_eq!(c.connectivity, 3);
        assert!(c.hurewicz_n && c.hurewicz_twist);
        assert!(c.satisfied(fm.kind()));
        let proj = FiberKind::ProjectiveLike { n: 2, d: 3 };
        let c3 = TransferConditions::evaluate(fm.base(), proj);
        assert!(!c3.connectivity_route);
        assert!(!c3.satisfied(proj));
    }
}
