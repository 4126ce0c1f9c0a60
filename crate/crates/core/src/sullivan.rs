//! Minimal Sullivan models up to a truncation degree, lifting of morphisms
//! through quasi-isomorphisms, and the side conditions on models used by the
//! fibration results.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Generator, Monomial, Morphism, Poly, Presentation, PresentationError};
use crate::cohomology::{induced_matrix, verify_with_tables, CohomologyTable, QuasiIsoReport};
use crate::qlinalg::{quotient_basis, QMatrix, Q};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SullivanError {
    #[error("generator `{0}` has degree 1; only simply connected presentations are modelled")]
    DegreeOne(String),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("no lift for generator `{generator}` in degree {degree}")]
    LiftFailed { generator: String, degree: u32 },
    #[error("generators cannot be ordered so that each differential uses earlier ones")]
    NotSullivanOrdered,
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("incompatible morphisms: {0}")]
    Incompatible(String),
}

/// Why a generator of a minimal model exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    /// Carried over from an input that was already minimal.
    Identity,
    /// Closed generator mapping to a cohomology class not yet hit.
    NewClass { class: String },
    /// Kills a class in degree `degree + 1` that maps to zero.
    KillsKernel { cocycle: String },
    /// Supplied by an explicit construction (e.g. a fibration reduction).
    Construction,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Identity => f.write_str("identity"),
            Origin::NewClass { class } => write!(f, "hits [{class}]"),
            Origin::KillsKernel { cocycle } => write!(f, "kills [{cocycle}]"),
            Origin::Construction => f.write_str("construction"),
        }
    }
}

/// A minimal Sullivan algebra with a quasi-isomorphism (up to the truncation
/// degree) onto a target presentation.
#[derive(Debug, Clone)]
pub struct MinimalModel {
    model: Presentation,
    target: Presentation,
    map: Morphism,
    origins: Vec<Origin>,
}

impl MinimalModel {
    /// The identity model of an already minimal presentation.
    pub fn identity(pres: &Presentation) -> Result<Self, SullivanError> {
        if !is_minimal(pres) {
            return Err(SullivanError::Verification(format!(
                "{pres} is not minimal"
            )));
        }
        Ok(MinimalModel {
            model: pres.clone(),
            target: pres.clone(),
            map: Morphism::identity(pres),
            origins: vec![Origin::Identity; pres.len()],
        })
    }

    /// Wraps an explicitly constructed model; the map is checked to be a
    /// chain quasi-isomorphism up to the target's truncation degree.
    pub fn from_map(map: Morphism) -> Result<Self, SullivanError> {
        if !is_minimal(map.source()) {
            return Err(SullivanError::Verification(format!(
                "{} is not minimal",
                map.source()
            )));
        }
        let report = crate::cohomology::verify_quasi_iso_to(&map, map.target().max_degree());
        if !report.passed() {
            return Err(SullivanError::Verification(format!(
                "not a quasi-isomorphism (first failure in degree {:?})",
                report.first_failure
            )));
        }
        Ok(MinimalModel {
            origins: vec![Origin::Construction; map.source().len()],
            model: map.source().clone(),
            target: map.target().clone(),
            map,
        })
    }

    pub fn model(&self) -> &Presentation {
        &self.model
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn map(&self) -> &Morphism {
        &self.map
    }

    pub fn origins(&self) -> &[Origin] {
        &self.origins
    }

    pub fn max_degree(&self) -> u32 {
        self.target.max_degree()
    }

    /// Minimality plus the quasi-isomorphism check up to the truncation degree.
    pub fn verify(&self) -> QuasiIsoReport {
        let mut r = crate::cohomology::verify_quasi_iso_to(&self.map, self.max_degree());
        if !is_minimal(&self.model) {
            r.first_failure = r.first_failure.or(Some(0));
        }
        r
    }

    /// Number of generators in each degree `0..=N`.
    pub fn generator_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.max_degree() as usize + 1];
        for g in self.model.generators() {
            if let Some(c) = counts.get_mut(g.degree as usize) {
                *c += 1;
            }
        }
        counts
    }
}

/// `V = V^{≥2}` and every differential is decomposable.
pub fn is_minimal(pres: &Presentation) -> bool {
    pres.generators().iter().all(|g| g.degree >= 2)
        && pres.differentials().iter().all(|d| pres.is_decomposable(d))
}

/// Options for [`minimal_model_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ModelOptions {
    /// Run the degreewise construction even when the input is minimal.
    pub force_construction: bool,
}

pub fn minimal_model(pres: &Presentation) -> Result<MinimalModel, SullivanError> {
    minimal_model_with(pres, ModelOptions::default())
}

/// Degree-by-degree construction: in each degree `k` add closed generators
/// for the cokernel on `H^k` and generators killing the kernel on `H^{k+1}`.
pub fn minimal_model_with(
    pres: &Presentation,
    opts: ModelOptions,
) -> Result<MinimalModel, SullivanError> {
    if let Some(g) = pres.generators().iter().find(|g| g.degree < 2) {
        return Err(SullivanError::DegreeOne(g.name.clone()));
    }
    if !opts.force_construction && is_minimal(pres) {
        return MinimalModel::identity(pres);
    }
    let n = pres.max_degree();
    let target_table = CohomologyTable::compute_to(pres, n + 1);
    let mut model = Presentation::from_spec(&[], &[], n)?;
    let mut images: Vec<Poly> = Vec::new();
    let mut origins = Vec::new();
    for k in 2..=n {
        let mut counter = 0usize;
        let fresh = |counter: &mut usize| {
            *counter += 1;
            format!("v{k}_{counter}")
        };

        // Cokernel of H^k(M) → H^k(A).
        let map = Morphism::new(model.clone(), pres.clone(), images.clone())
            .map_err(|e| SullivanError::Verification(e.to_string()))?;
        let mt = CohomologyTable::compute_to(&model, k + 1);
        let hit: Vec<Vec<Q>> = induced_matrix(&map, &mt, &target_table, k)
            .transpose()
            .rows_vec();
        let coker = quotient_basis(target_table.betti(k), &hit);
        let mut new_gens = Vec::new();
        let mut new_diffs = Vec::new();
        for &j in coker.complement_indices() {
            let rep = target_table.representatives(k)[j].clone();
            new_gens.push(Generator::new(fresh(&mut counter), k));
            new_diffs.push(Poly::zero());
            origins.push(Origin::NewClass {
                class: pres.format(&rep),
            });
            images.push(rep);
        }
        if !new_gens.is_empty() {
            model = model.extend(new_gens, new_diffs)?;
        }

        // Kernel of H^{k+1}(M) → H^{k+1}(A).
        let map = Morphism::new(model.clone(), pres.clone(), images.clone())
            .map_err(|e| SullivanError::Verification(e.to_string()))?;
        let mt = CohomologyTable::compute_to(&model, k + 1);
        let kernel = induced_matrix(&map, &mt, &target_table, k + 1).kernel_basis();
        let mut new_gens = Vec::new();
        let mut new_diffs = Vec::new();
        for coords in kernel {
            let class = crate::cohomology::Class {
                degree: k + 1,
                coords,
            };
            let cocycle = mt.class_to_poly(&class);
            let image = map.apply(&cocycle);
            let primitive = target_table.primitive_in(k + 1, &image).ok_or_else(|| {
                SullivanError::Verification(format!(
                    "image of {} is not exact",
                    model.format(&cocycle)
                ))
            })?;
            new_gens.push(Generator::new(fresh(&mut counter), k));
            origins.push(Origin::KillsKernel {
                cocycle: model.format(&cocycle),
            });
            new_diffs.push(cocycle);
            images.push(primitive);
        }
        if !new_gens.is_empty() {
            model = model.extend(new_gens, new_diffs)?;
        }
    }
    let map = Morphism::chain_map(model.clone(), pres.clone(), images)
        .map_err(|e| SullivanError::Verification(e.to_string()))?;
    let mm = MinimalModel {
        model,
        target: pres.clone(),
        map,
        origins,
    };
    let report = mm.verify();
    if !report.passed() {
        return Err(SullivanError::Verification(format!(
            "constructed model fails in degree {:?}",
            report.first_failure
        )));
    }
    Ok(mm)
}

trait RowsVec {
    fn rows_vec(&self) -> Vec<Vec<Q>>;
}

impl RowsVec for QMatrix {
    fn rows_vec(&self) -> Vec<Vec<Q>> {
        (0..self.rows()).map(|r| self.row(r).to_vec()).collect()
    }
}

/// Every degree-`k` generator is closed (`V^k = C^k`).
pub fn hurewicz_injective_in_degree(m: &MinimalModel, k: u32) -> bool {
    generators_closed_in_degree(m.model(), k)
}

pub fn generators_closed_in_degree(pres: &Presentation, k: u32) -> bool {
    pres.generators()
        .iter()
        .enumerate()
        .filter(|(_, g)| g.degree == k)
        .all(|(i, _)| pres.dg(i).is_zero())
}

/// Largest `k` with `V^{≤k} = 0`; for a model without generators this is the
/// truncation degree.
pub fn rational_connectivity(m: &MinimalModel) -> u32 {
    m.model()
        .generators()
        .iter()
        .map(|g| g.degree - 1)
        .min()
        .unwrap_or(m.max_degree())
}

/// Every differential is a sum of words of length exactly two.
pub fn is_coformal(m: &MinimalModel) -> bool {
    let p = m.model();
    p.differentials()
        .iter()
        .all(|d| d.monomials().all(|mo| mo.word_length() == 2))
}

/// Elements `Σ a_j t^j + Σ b_j t^j dt` of `B ⊗ Λ(t, dt)`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct TPoly {
    a: Vec<Poly>,
    b: Vec<Poly>,
}

impl TPoly {
    fn constant(p: Poly) -> Self {
        TPoly {
            a: vec![p],
            b: Vec::new(),
        }
    }

    fn one() -> Self {
        Self::constant(Poly::one())
    }

    fn add_at(v: &mut Vec<Poly>, j: usize, p: &Poly) {
        if p.is_zero() {
            return;
        }
        if v.len() <= j {
            v.resize(j + 1, Poly::zero());
        }
        v[j] += p;
    }

    fn trim(mut self) -> Self {
        while self.a.last().is_some_and(Poly::is_zero) {
            self.a.pop();
        }
        while self.b.last().is_some_and(Poly::is_zero) {
            self.b.pop();
        }
        self
    }

    fn mul(&self, other: &TPoly, b: &Presentation) -> TPoly {
        let mut out = TPoly {
            a: Vec::new(),
            b: Vec::new(),
        };
        for (i, x) in self.a.iter().enumerate() {
            for (j, y) in other.a.iter().enumerate() {
                Self::add_at(&mut out.a, i + j, &b.mul(x, y));
            }
            for (j, y) in other.b.iter().enumerate() {
                Self::add_at(&mut out.b, i + j, &b.mul(x, y));
            }
        }
        for (i, x) in self.b.iter().enumerate() {
            for (j, y) in other.a.iter().enumerate() {
                let mut p = b.mul(x, y);
                if b.degree(y).is_some_and(|d| d % 2 == 1) {
                    p = -p;
                }
                Self::add_at(&mut out.b, i + j, &p);
            }
        }
        out.trim()
    }

    fn scale(&self, c: &Q) -> TPoly {
        TPoly {
            a: self.a.iter().map(|p| p.scale(c)).collect(),
            b: self.b.iter().map(|p| p.scale(c)).collect(),
        }
        .trim()
    }

    fn add(&mut self, other: &TPoly) {
        for (j, p) in other.a.iter().enumerate() {
            Self::add_at(&mut self.a, j, p);
        }
        for (j, p) in other.b.iter().enumerate() {
            Self::add_at(&mut self.b, j, p);
        }
    }

    fn t_degree(&self) -> usize {
        self.a.len().saturating_sub(1).max(self.b.len())
    }

    fn a_at(&self, j: usize) -> Poly {
        self.a.get(j).cloned().unwrap_or_default()
    }

    fn b_at(&self, j: usize) -> Poly {
        self.b.get(j).cloned().unwrap_or_default()
    }
}

/// The result of lifting a map through a quasi-isomorphism.
#[derive(Debug, Clone)]
pub struct Lift {
    pub map: Morphism,
    /// Largest power of `t` used by the homotopy; 0 means strict commutativity.
    pub homotopy_t_degree: usize,
}

/// Order in which generators can be processed so that each differential only
/// involves earlier ones.
fn sullivan_order(p: &Presentation) -> Result<Vec<usize>, SullivanError> {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by_key(|&i| p.generators()[i].degree);
    let mut pos = vec![usize::MAX; p.len()];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    for (k, &i) in order.iter().enumerate() {
        let uses_later = p
            .dg(i)
            .monomials()
            .flat_map(|m| m.factors().iter())
            .any(|&(j, _)| pos[j] >= k);
        if uses_later {
            return Err(SullivanError::NotSullivanOrdered);
        }
    }
    Ok(order)
}

struct Coords<'a> {
    basis: &'a [Monomial],
}

impl Coords<'_> {
    fn of(&self, p: &Poly) -> Vec<Q> {
        p.coordinates(self.basis)
            .expect("homogeneous of the expected degree")
    }
}

/// Finds `f̂: source → W` with `q ∘ f̂` homotopic to `g`, where `g: source → B`
/// and `q: W → B` is a quasi-isomorphism. The homotopy lives in
/// `B ⊗ Λ(t, dt)` and is solved for one generator at a time.
pub fn lift(g: &Morphism, q: &Morphism) -> Result<Lift, SullivanError> {
    let source = g.source();
    let w = q.source();
    let b = q.target();
    if g.target().generators() != b.generators() {
        return Err(SullivanError::Incompatible(
            "the two maps have different targets".into(),
        ));
    }
    let order = sullivan_order(source)?;
    let mut fhat: Vec<Poly> = vec![Poly::zero(); source.len()];
    let mut homotopy: Vec<TPoly> = vec![TPoly::one(); source.len()];
    let mut max_t = 0;
    for &i in &order {
        let gen = &source.generators()[i];
        let k = gen.degree;
        let dv = source.dg(i);
        let fhat_dv = source.algebra().substitute(dv, w.algebra(), &fhat);
        let psi = apply_tpoly(dv, &homotopy, b);
        let a0 = g.image(i).clone();
        let t_min = psi.t_degree() + 1;
        let mut solved = None;
        // Strict solution first, then homotopies of growing length.
        let candidates = std::iter::once(0).chain(t_min..t_min + 4);
        for t in candidates {
            if t == 0 && psi.t_degree() > 0 {
                continue;
            }
            if let Some(sol) = solve_lift_step(k, t, &fhat_dv, &psi, &a0, w, b, q) {
                solved = Some((t, sol));
                break;
            }
        }
        let (t, (x, h)) = solved.ok_or_else(|| SullivanError::LiftFailed {
            generator: gen.name.clone(),
            degree: k,
        })?;
        max_t = max_t.max(t);
        fhat[i] = x;
        homotopy[i] = h;
    }
    let map = Morphism::chain_map(source.clone(), w.clone(), fhat)
        .map_err(|e| SullivanError::Verification(e.to_string()))?;
    Ok(Lift {
        map,
        homotopy_t_degree: max_t,
    })
}

fn apply_tpoly(p: &Poly, h: &[TPoly], b: &Presentation) -> TPoly {
    let mut out = TPoly {
        a: Vec::new(),
        b: Vec::new(),
    };
    for (m, c) in p.terms() {
        let mut acc = TPoly::one();
        for &(i, e) in m.factors() {
            for _ in 0..e {
                acc = acc.mul(&h[i], b);
            }
        }
        out.add(&acc.scale(c));
    }
    out.trim()
}

/// Solves for `x ∈ W^k`, `a_1..a_T ∈ B^k`, `b_0..b_{T-1} ∈ B^{k-1}` with
/// `dx = f̂(dv)`, `da_j = Ψa_j`, `(−1)^k (j+1) a_{j+1} + db_j = Ψb_j` and
/// `Σ a_j = q(x)`.
#[allow(clippy::too_many_arguments)]
fn solve_lift_step(
    k: u32,
    t: usize,
    fhat_dv: &Poly,
    psi: &TPoly,
    a0: &Poly,
    w: &Presentation,
    b: &Presentation,
    q: &Morphism,
) -> Option<(Poly, TPoly)> {
    let wk = w.basis_of_degree(k);
    let wk1 = w.basis_of_degree(k + 1);
    let bk = b.basis_of_degree(k);
    let bk1 = b.basis_of_degree(k + 1);
    let bkm = b.basis_of_degree(k - 1);
    let (cw1, cb, cb1) = (
        Coords { basis: &wk1 },
        Coords { basis: &bk },
        Coords { basis: &bk1 },
    );

    let nx = wk.len();
    let na = bk.len();
    let nb = bkm.len();
    let cols = nx + t * na + t * nb;
    let a_col = |j: usize| nx + (j - 1) * na; // j in 1..=t
    let b_col = |j: usize| nx + t * na + j * nb; // j in 0..t

    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut rhs: Vec<Q> = Vec::new();
    // Appends one vector equation: Σ unknown[col] * column = target.
    let mut push_block = |columns: Vec<(usize, Vec<Q>)>, target: Vec<Q>, rows: &mut Vec<Vec<Q>>| {
        let start = rows.len();
        rows.extend((0..target.len()).map(|_| vec![Q::zero(); cols]));
        for (col, vec) in columns {
            for (r, x) in vec.into_iter().enumerate() {
                if !x.is_zero() {
                    rows[start + r][col] += x;
                }
            }
        }
        rhs.extend(target);
    };

    // dx = f̂(dv)
    let dx_cols: Vec<(usize, Vec<Q>)> = wk
        .iter()
        .enumerate()
        .map(|(c, m)| (c, cw1.of(&w.d(&Poly::monomial(m.clone())))))
        .collect();
    push_block(dx_cols, cw1.of(fhat_dv), &mut rows);

    let d_bk: Vec<Vec<Q>> = bk
        .iter()
        .map(|m| cb1.of(&b.d(&Poly::monomial(m.clone()))))
        .collect();
    let d_bkm: Vec<Vec<Q>> = bkm
        .iter()
        .map(|m| cb.of(&b.d(&Poly::monomial(m.clone()))))
        .collect();

    // da_j = Ψa_j for j ≥ 1
    for j in 1..=t {
        let contrib = (0..na).map(|c| (a_col(j) + c, d_bk[c].clone())).collect();
        push_block(contrib, cb1.of(&psi.a_at(j)), &mut rows);
    }
    // (−1)^k (j+1) a_{j+1} + d b_j = Ψb_j
    for j in 0..t {
        let mut coeff = Q::from_integer(((j + 1) as i64).into());
        if k % 2 == 1 {
            coeff = -coeff;
        }
        let mut contrib: Vec<(usize, Vec<Q>)> =
            (0..nb).map(|c| (b_col(j) + c, d_bkm[c].clone())).collect();
        for c in 0..na {
            let mut e = vec![Q::zero(); na];
            e[c] = coeff.clone();
            contrib.push((a_col(j + 1) + c, e));
        }
        push_block(contrib, cb.of(&psi.b_at(j)), &mut rows);
    }
    // q(x) − Σ_{j≥1} a_j = a_0
    let mut contrib: Vec<(usize, Vec<Q>)> = wk
        .iter()
        .enumerate()
        .map(|(c, m)| (c, cb.of(&q.apply(&Poly::monomial(m.clone())))))
        .collect();
    for j in 1..=t {
        for c in 0..na {
            let mut e = vec![Q::zero(); na];
            e[c] = -Q::one();
            contrib.push((a_col(j) + c, e));
        }
    }
    push_block(contrib, cb.of(a0), &mut rows);

    let m = QMatrix::from_rows(cols, &rows);
    let sol = m.solve(&rhs).ok()?;
    let x = Poly::from_coordinates(&wk, &sol[..nx]);
    let mut h = TPoly {
        a: vec![a0.clone()],
        b: Vec::new(),
    };
    for j in 1..=t {
        h.a.push(Poly::from_coordinates(&bk, &sol[a_col(j)..a_col(j) + na]));
    }
    for j in 0..t {
        h.b.push(Poly::from_coordinates(&bkm, &sol[b_col(j)..b_col(j) + nb]));
    }
    Some((x, h.trim()))
}

/// `f̂: model(A) → model(B)` with `m_B ∘ f̂ ≃ f ∘ m_A`.
pub fn sullivan_representative(
    f: &Morphism,
    ma: &MinimalModel,
    mb: &MinimalModel,
) -> Result<Morphism, SullivanError> {
    if ma.target().generators() != f.source().generators()
        || mb.target().generators() != f.target().generators()
    {
        return Err(SullivanError::Incompatible(
            "models do not match the map's source and target".into(),
        ));
    }
    let g = ma.map().then(f);
    let l = lift(&g, mb.map())?;
    let top = f.target().max_degree().min(f.source().max_degree());
    if !same_on_cohomology(&l.map.then(mb.map()), &g, top) {
        return Err(SullivanError::Verification(
            "lift differs from the map on cohomology".into(),
        ));
    }
    Ok(l.map)
}

/// True iff two chain maps with common source and target induce the same map
/// on `H^{≤top}`.
pub fn same_on_cohomology(f: &Morphism, g: &Morphism, top: u32) -> bool {
    let src = CohomologyTable::compute_to(f.source(), top);
    let tgt = CohomologyTable::compute_to(f.target(), top);
    (0..=top).all(|k| induced_matrix(f, &src, &tgt, k) == induced_matrix(g, &src, &tgt, k))
}

/// Re-exported for callers that only deal with models.
pub fn verify_quasi_iso(f: &Morphism) -> QuasiIsoReport {
    crate::cohomology::verify_quasi_iso(f)
}

pub fn verify_quasi_iso_tables(
    f: &Morphism,
    src: &CohomologyTable,
    tgt: &CohomologyTable,
) -> QuasiIsoReport {
    verify_with_tables(f, src, tgt)
}
