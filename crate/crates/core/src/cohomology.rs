//! Degreewise cohomology, cup products, cup-length, Massey triple products
//! and maps into cohomology with zero differential.

use std::sync::Arc;

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{Monomial, Morphism, Poly, Presentation};
use crate::qlinalg::{independent_subset, quotient_basis, QMatrix, QuotientBasis, Rref, Q};

#[derive(Debug, Clone)]
struct Level {
    basis: Vec<Monomial>,
    /// Matrix of `d: Λ^k → Λ^{k+1}` in monomial coordinates.
    d: QMatrix,
    d_rref: Rref,
    /// Free columns of `d`; a cocycle is determined by its entries there.
    free: Vec<usize>,
    cocycles: Vec<Vec<Q>>,
    /// Coboundaries modulo which classes are taken, in cocycle coordinates.
    quotient: QuotientBasis,
    reps: Vec<Poly>,
}

/// `H^k` of a presentation for `0 ≤ k ≤ N`.
#[derive(Debug, Clone)]
pub struct CohomologyTable {
    pres: Presentation,
    levels: Vec<Level>,
}

/// A cohomology class: degree and coordinates in the table's basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Class {
    pub degree: u32,
    pub coords: Vec<Q>,
}

impl Class {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl CohomologyTable {
    /// Cohomology up to the presentation's truncation degree.
    pub fn compute(pres: &Presentation) -> Self {
        Self::compute_to(pres, pres.max_degree())
    }

    /// Cohomology up to degree `top`, independent of the stored truncation.
    pub fn compute_to(pres: &Presentation, top: u32) -> Self {
        let bases: Vec<Vec<Monomial>> = (0..=top + 1).map(|k| pres.basis_of_degree(k)).collect();
        let mut mats = Vec::with_capacity(top as usize + 1);
        for k in 0..=top as usize {
            mats.push(differential_matrix(pres, &bases[k], &bases[k + 1]));
        }
        let mut levels: Vec<Level> = Vec::with_capacity(mats.len());
        let mut prev: Option<(QMatrix, Rref)> = None;
        for (k, d) in mats.into_iter().enumerate() {
            let d_rref = d.rref();
            let free = d_rref.free_columns();
            let cocycles = crate::qlinalg::kernel_from_rref(&d_rref);
            let boundaries: Vec<Vec<Q>> = match &prev {
                None => Vec::new(),
                Some((dm, r)) => r
                    .pivots
                    .iter()
                    .map(|&c| {
                        let col = dm.column(c);
                        free.iter().map(|&f| col[f].clone()).collect()
                    })
                    .collect(),
            };
            let quotient = quotient_basis(free.len(), &boundaries);
            let reps = quotient
                .complement_indices()
                .iter()
                .map(|&j| Poly::from_coordinates(&bases[k], &cocycles[j]))
                .collect();
            prev = Some((d.clone(), d_rref.clone()));
            levels.push(Level {
                basis: bases[k].clone(),
                d,
                d_rref,
                free,
                cocycles,
                quotient,
                reps,
            });
        }
        CohomologyTable {
            pres: pres.clone(),
            levels,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    /// Highest degree covered.
    pub fn top_degree(&self) -> u32 {
        self.levels.len() as u32 - 1
    }

    fn level(&self, k: u32) -> Option<&Level> {
        self.levels.get(k as usize)
    }

    pub fn betti(&self, k: u32) -> usize {
        self.level(k).map_or(0, |l| l.reps.len())
    }

    pub fn betti_numbers(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.reps.len()).collect()
    }

    pub fn basis(&self, k: u32) -> &[Monomial] {
        self.level(k).map_or(&[], |l| &l.basis)
    }

    pub fn cocycle_dim(&self, k: u32) -> usize {
        self.level(k).map_or(0, |l| l.cocycles.len())
    }

    pub fn coboundary_dim(&self, k: u32) -> usize {
        self.level(k).map_or(0, |l| l.quotient.subspace_dim())
    }

    /// Closed representatives of a basis of `H^k`.
    pub fn representatives(&self, k: u32) -> &[Poly] {
        self.level(k).map_or(&[], |l| &l.reps)
    }

    /// Basis class number `i` in degree `k`.
    pub fn basis_class(&self, k: u32, i: usize) -> Class {
        let mut coords = vec![Q::zero(); self.betti(k)];
        coords[i] = Q::from_integer(1.into());
        Class { degree: k, coords }
    }

    pub fn zero_class(&self, k: u32) -> Class {
        Class {
            degree: k,
            coords: vec![Q::zero(); self.betti(k)],
        }
    }

    /// Class of a polynomial of degree `k`; `None` if it is not closed, not of
    /// degree `k`, or `k` is out of range.
    pub fn class_in(&self, k: u32, p: &Poly) -> Option<Class> {
        let l = self.level(k)?;
        let v = p.coordinates(&l.basis).ok()?;
        if !l.d.mul_vec(&v).iter().all(Zero::is_zero) {
            return None;
        }
        let z: Vec<Q> = l.free.iter().map(|&f| v[f].clone()).collect();
        Some(Class {
            degree: k,
            coords: l.quotient.project(&z),
        })
    }

    /// Class of a homogeneous closed polynomial (zero lands in degree 0).
    pub fn class_of(&self, p: &Poly) -> Option<Class> {
        let k = if p.is_zero() { 0 } else { self.pres.degree(p)? };
        self.class_in(k, p)
    }

    pub fn class_to_poly(&self, c: &Class) -> Poly {
        let mut out = Poly::zero();
        for (rep, x) in self.representatives(c.degree).iter().zip(&c.coords) {
            if !x.is_zero() {
                out += &rep.scale(x);
            }
        }
        out
    }

    pub fn is_closed(&self, p: &Poly) -> bool {
        self.pres.d(p).is_zero()
    }

    /// True iff the closed polynomial `p` of degree `k` is a coboundary.
    pub fn is_exact_in(&self, k: u32, p: &Poly) -> Option<bool> {
        self.class_in(k, p).map(|c| c.is_zero())
    }

    /// Some `x` with `dx = p`, for `p` of degree `k ≥ 1`.
    pub fn primitive_in(&self, k: u32, p: &Poly) -> Option<Poly> {
        if k == 0 {
            return p.is_zero().then(Poly::zero);
        }
        let below = self.level(k - 1)?;
        let here = self.level(k)?;
        let v = p.coordinates(&here.basis).ok()?;
        let x = below.d.solve(&v).ok()?;
        Some(Poly::from_coordinates(&below.basis, &x))
    }

    /// Cup product of two classes, `None` if the result is out of range.
    pub fn product(&self, a: &Class, b: &Class) -> Option<Class> {
        let k = a.degree + b.degree;
        self.level(k)?;
        if a.is_zero() || b.is_zero() {
            return Some(self.zero_class(k));
        }
        let p = self
            .pres
            .mul(&self.class_to_poly(a), &self.class_to_poly(b));
        self.class_in(k, &p)
    }

    /// Rank of the differential leaving degree `k`.
    pub fn d_rank(&self, k: u32) -> usize {
        self.level(k).map_or(0, |l| l.d_rref.rank())
    }

    pub fn format_class(&self, c: &Class) -> String {
        self.pres.format(&self.class_to_poly(c))
    }
}

fn differential_matrix(pres: &Presentation, from: &[Monomial], to: &[Monomial]) -> QMatrix {
    let cols: Vec<Vec<Q>> = from
        .iter()
        .map(|m| {
            pres.d(&Poly::monomial(m.clone()))
                .coordinates(to)
                .expect("differential raises degree by one")
        })
        .collect();
    QMatrix::from_columns(to.len(), &cols)
}

/// Largest `m` such that a product of `m` positive-degree classes is nonzero
/// within the table's range.
pub fn cup_length(table: &CohomologyTable) -> usize {
    let top = table.top_degree();
    let generators: Vec<Class> = (1..=top)
        .flat_map(|k| (0..table.betti(k)).map(move |i| (k, i)))
        .map(|(k, i)| table.basis_class(k, i))
        .collect();
    // spans[k]: basis of the span of m-fold products landing in degree k
    let mut spans: Vec<Vec<Class>> = (0..=top)
        .map(|k| {
            if k == 0 {
                Vec::new()
            } else {
                (0..table.betti(k))
                    .map(|i| table.basis_class(k, i))
                    .collect()
            }
        })
        .collect();
    let mut m = 0;
    while spans.iter().any(|s| !s.is_empty()) {
        m += 1;
        let mut next: Vec<Vec<Class>> = vec![Vec::new(); top as usize + 1];
        for g in &generators {
            for (k, span) in spans.iter().enumerate() {
                for x in span {
                    if let Some(p) = table.product(g, x) {
                        if !p.is_zero() {
                            next[(g.degree + k as u32) as usize].push(p);
                        }
                    }
                }
            }
        }
        for (k, span) in next.iter_mut().enumerate() {
            let vecs: Vec<Vec<Q>> = span.iter().map(|c| c.coords.clone()).collect();
            let keep = independent_subset(table.betti(k as u32), &vecs);
            *span = keep.into_iter().map(|i| span[i].clone()).collect();
        }
        spans = next;
    }
    m
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MasseyError {
    #[error("Massey product not defined: {0}")]
    NotDefined(String),
    #[error("degree {0} exceeds the table's range")]
    OutOfRange(u32),
}

/// A triple Massey product `⟨a, b, c⟩ = [s·c + (−1)^{|a|+1} a·t]` with
/// `ds = ab`, `dt = bc`.
#[derive(Debug, Clone)]
pub struct MasseyResult {
    pub degree: u32,
    pub representative: Poly,
    pub class: Class,
    /// Basis of `[a]·H^{|b|+|c|−1} + H^{|a|+|b|−1}·[c]`.
    pub indeterminacy: Vec<Vec<Q>>,
    pub contains_zero: bool,
}

pub fn massey_triple(
    table: &CohomologyTable,
    a: &Class,
    b: &Class,
    c: &Class,
) -> Result<MasseyResult, MasseyError> {
    let degree = (a.degree + b.degree + c.degree)
        .checked_sub(1)
        .ok_or_else(|| MasseyError::NotDefined("degenerate degrees".into()))?;
    if degree > table.top_degree() {
        return Err(MasseyError::OutOfRange(degree));
    }
    let pres = table.presentation();
    let (pa, pb, pc) = (
        table.class_to_poly(a),
        table.class_to_poly(b),
        table.class_to_poly(c),
    );
    let ab = pres.mul(&pa, &pb);
    let bc = pres.mul(&pb, &pc);
    let s = table
        .primitive_in(a.degree + b.degree, &ab)
        .ok_or_else(|| MasseyError::NotDefined("[a][b] ≠ 0".into()))?;
    let t = table
        .primitive_in(b.degree + c.degree, &bc)
        .ok_or_else(|| MasseyError::NotDefined("[b][c] ≠ 0".into()))?;
    let sc = pres.mul(&s, &pc);
    let at = pres.mul(&pa, &t);
    let representative = if a.degree.is_multiple_of(2) {
        &sc - &at
    } else {
        &sc + &at
    };
    let class = table
        .class_in(degree, &representative)
        .expect("Massey representative is closed");
    let mut gens: Vec<Vec<Q>> = Vec::new();
    let left = (b.degree + c.degree).saturating_sub(1);
    for i in 0..table.betti(left) {
        if let Some(p) = table.product(a, &table.basis_class(left, i)) {
            gens.push(p.coords);
        }
    }
    let right = (a.degree + b.degree).saturating_sub(1);
    for i in 0..table.betti(right) {
        if let Some(p) = table.product(&table.basis_class(right, i), c) {
            gens.push(p.coords);
        }
    }
    let dim = table.betti(degree);
    let keep = independent_subset(dim, &gens);
    let indeterminacy: Vec<Vec<Q>> = keep.into_iter().map(|i| gens[i].clone()).collect();
    let contains_zero = quotient_basis(dim, &indeterminacy).contains(&class.coords);
    Ok(MasseyResult {
        degree,
        representative,
        class,
        indeterminacy,
        contains_zero,
    })
}

/// Per-degree outcome of comparing cohomology along a map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeComparison {
    pub degree: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
}

impl DegreeComparison {
    pub fn is_iso(&self) -> bool {
        self.rank == self.source_dim && self.rank == self.target_dim
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiIsoReport {
    pub degrees: Vec<DegreeComparison>,
    pub chain_map: bool,
    pub first_failure: Option<u32>,
}

impl QuasiIsoReport {
    pub fn passed(&self) -> bool {
        self.chain_map && self.first_failure.is_none()
    }

    fn from_degrees(degrees: Vec<DegreeComparison>, chain_map: bool) -> Self {
        let first_failure = degrees.iter().find(|d| !d.is_iso()).map(|d| d.degree);
        QuasiIsoReport {
            degrees,
            chain_map,
            first_failure,
        }
    }
}

/// Matrix of `H^k(f)` in the tables' class bases.
pub fn induced_matrix(
    f: &Morphism,
    src: &CohomologyTable,
    tgt: &CohomologyTable,
    k: u32,
) -> QMatrix {
    let cols: Vec<Vec<Q>> = src
        .representatives(k)
        .iter()
        .map(|r| {
            tgt.class_in(k, &f.apply(r))
                .expect("chain maps send cocycles to cocycles")
                .coords
        })
        .collect();
    QMatrix::from_columns(tgt.betti(k), &cols)
}

/// Checks that `f` is a chain map inducing isomorphisms on `H^k` for all
/// `k ≤ top`.
pub fn verify_quasi_iso_to(f: &Morphism, top: u32) -> QuasiIsoReport {
    if !f.is_chain_map() {
        return QuasiIsoReport {
            degrees: Vec::new(),
            chain_map: false,
            first_failure: Some(0),
        };
    }
    let src = CohomologyTable::compute_to(f.source(), top);
    let tgt = CohomologyTable::compute_to(f.target(), top);
    verify_with_tables(f, &src, &tgt)
}

pub fn verify_with_tables(
    f: &Morphism,
    src: &CohomologyTable,
    tgt: &CohomologyTable,
) -> QuasiIsoReport {
    let top = src.top_degree().min(tgt.top_degree());
    let degrees = (0..=top)
        .map(|k| DegreeComparison {
            degree: k,
            source_dim: src.betti(k),
            target_dim: tgt.betti(k),
            rank: induced_matrix(f, src, tgt, k).rank(),
        })
        .collect();
    QuasiIsoReport::from_degrees(degrees, true)
}

/// Quasi-isomorphism check up to the source's truncation degree.
pub fn verify_quasi_iso(f: &Morphism) -> QuasiIsoReport {
    verify_quasi_iso_to(f, f.source().max_degree())
}

/// An algebra map from a free CDGA into a cohomology algebra with zero
/// differential, given by the classes of the generators.
#[derive(Debug, Clone)]
pub struct CohomologyMap {
    source: Presentation,
    target: Arc<CohomologyTable>,
    images: Vec<Class>,
}

impl CohomologyMap {
    /// Generators above the table's range must be given the zero class of
    /// their degree (which has no coordinates).
    pub fn new(source: Presentation, target: Arc<CohomologyTable>, images: Vec<Class>) -> Self {
        assert_eq!(images.len(), source.len());
        for (g, c) in source.generators().iter().zip(&images) {
            assert_eq!(
                g.degree, c.degree,
                "image of {} has the wrong degree",
                g.name
            );
        }
        CohomologyMap {
            source,
            target,
            images,
        }
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Arc<CohomologyTable> {
        &self.target
    }

    pub fn images(&self) -> &[Class] {
        &self.images
    }

    /// Image of a polynomial of degree `k`.
    pub fn apply_in(&self, k: u32, p: &Poly) -> Class {
        let t = &self.target;
        let mut acc = t.zero_class(k);
        if k > t.top_degree() {
            return acc;
        }
        for (m, c) in p.terms() {
            let mut prod = t.basis_class_one();
            for &(i, e) in m.factors() {
                for _ in 0..e {
                    prod = match t.product(&prod, &self.images[i]) {
                        Some(x) => x,
                        None => return acc,
                    };
                }
            }
            debug_assert_eq!(prod.degree, k);
            for (a, x) in acc.coords.iter_mut().zip(&prod.coords) {
                *a += c * x;
            }
        }
        acc
    }

    pub fn apply(&self, p: &Poly) -> Class {
        let k = if p.is_zero() {
            0
        } else {
            self.source.degree(p).expect("homogeneous")
        };
        self.apply_in(k, p)
    }

    /// Generators `g` with `μ(dg) ≠ 0` (within range).
    pub fn chain_violations(&self) -> Vec<String> {
        self.source
            .generators()
            .iter()
            .enumerate()
            .filter(|(i, g)| {
                g.degree < self.target.top_degree()
                    && !self.apply_in(g.degree + 1, self.source.dg(*i)).is_zero()
            })
            .map(|(_, g)| g.name.clone())
            .collect()
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_violations().is_empty()
    }

    pub fn induced_matrix(&self, src: &CohomologyTable, k: u32) -> QMatrix {
        let cols: Vec<Vec<Q>> = src
            .representatives(k)
            .iter()
            .map(|r| self.apply_in(k, r).coords)
            .collect();
        QMatrix::from_columns(self.target.betti(k), &cols)
    }

    /// Chain-map and quasi-isomorphism check up to the target table's range.
    pub fn verify(&self) -> QuasiIsoReport {
        let chain_map = self.is_chain_map();
        let top = self.target.top_degree();
        let src = CohomologyTable::compute_to(&self.source, top);
        self.verify_against(&src, chain_map)
    }

    pub fn verify_against(&self, src: &CohomologyTable, chain_map: bool) -> QuasiIsoReport {
        let top = self.target.top_degree().min(src.top_degree());
        let degrees = (0..=top)
            .map(|k| DegreeComparison {
                degree: k,
                source_dim: src.betti(k),
                target_dim: self.target.betti(k),
                rank: self.induced_matrix(src, k).rank(),
            })
            .collect();
        let mut r = QuasiIsoReport::from_degrees(degrees, chain_map);
        if !chain_map && r.first_failure.is_none() {
            r.first_failure = Some(0);
        }
        r
    }

    /// `name ↦ class` in readable form.
    pub fn describe(&self) -> Vec<(String, String)> {
        self.source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, c)| {
                let text = if c.is_zero() {
                    "0".to_string()
                } else {
                    format!("[{}]", self.target.format_class(c))
                };
                (g.name.clone(), text)
            })
            .collect()
    }
}

impl CohomologyTable {
    /// The unit class in degree 0.
    pub fn basis_class_one(&self) -> Class {
        self.class_in(0, &Poly::one()).expect("1 is closed")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    fn pres(gens: &[(&str, u32)], d: &[(&str, &str)], n: u32) -> Presentation {
        Presentation::from_spec(gens, d, n).unwrap()
    }

    #[test]
    fn even_sphere() {
        let t = CohomologyTable::compute(&pres(&[("e", 2), ("f", 3)], &[("f", "e^2")], 10));
        assert_eq!(t.betti_numbers(), vec![1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn hp1() {
        let t = CohomologyTable::compute(&pres(&[("u", 4), ("w", 7)], &[("w", "u^2")], 10));
        let b = t.betti_numbers();
        assert_eq!(b[0], 1);
        assert_eq!(b[4], 1);
        assert_eq!(b.iter().sum::<usize>(), 2);
    }

    #[test]
    fn nonprimitive_base_degree_nine() {
        let p = pres(&[("b", 3), ("c", 4), ("n", 6)], &[("n", "b*c")], 12);
        let t = CohomologyTable::compute(&p);
        let nb = p.parse("n*b").unwrap();
        let c = t.class_in(9, &nb).unwrap();
        assert!(!c.is_zero());
    }

    #[test]
    fn representatives_are_closed() {
        let p = pres(
            &[("y", 2), ("b", 3), ("c", 3), ("u", 4), ("n", 5)],
            &[("n", "b*c + u*y")],
            14,
        );
        let t = CohomologyTable::compute(&p);
        for k in 0..=14 {
            for r in t.representatives(k) {
                assert!(p.d(r).is_zero());
            }
            assert_eq!(t.betti(k), t.cocycle_dim(k) - t.coboundary_dim(k));
        }
    }

    #[test]
    fn primitive_solves() {
        let p = pres(&[("u", 4), ("w", 7)], &[("w", "u^2")], 12);
        let t = CohomologyTable::compute(&p);
        let u2 = p.parse("u^2").unwrap();
        let x = t.primitive_in(8, &u2).unwrap();
        assert_eq!(p.d(&x), u2);
        assert!(t.primitive_in(4, &p.parse("u").unwrap()).is_none());
    }

    #[test]
    fn cup_lengths() {
        for n in 1..=3u32 {
            let dw = format!("u^{}", n + 1);
            let p = pres(
                &[("u", 4), ("w", 4 * n + 3)],
                &[("w", dw.as_str())],
                4 * n + 4,
            );
            assert_eq!(cup_length(&CohomologyTable::compute(&p)), n as usize);
        }
        let s = pres(&[("e", 2), ("f", 3)], &[("f", "e^2")], 10);
        assert_eq!(cup_length(&CohomologyTable::compute(&s)), 1);
        let odd = pres(&[("x", 3)], &[], 2);
        assert_eq!(cup_length(&CohomologyTable::compute(&odd)), 0);
    }

    #[test]
    fn heisenberg_massey() {
        let p = pres(&[("x", 3), ("y", 3), ("z", 5)], &[("z", "x*y")], 12);
        let t = CohomologyTable::compute(&p);
        let x = t.class_of(&p.parse("x").unwrap()).unwrap();
        let y = t.class_of(&p.parse("y").unwrap()).unwrap();
        let m = massey_triple(&t, &x, &x, &y).unwrap();
        assert_eq!(m.degree, 8);
        assert!(m.indeterminacy.is_empty());
        assert!(!m.contains_zero);
        let xz = p.parse("x*z").unwrap();
        let rep = &m.representative;
        assert!(rep == &xz || rep == &(-&xz), "{}", p.format(rep));
        let m2 = massey_triple(&t, &x, &y, &x).unwrap();
        assert_eq!(m2.degree, 8);
    }

    #[test]
    fn massey_zero_differential() {
        let p = pres(&[("b", 3), ("n", 6)], &[], 16);
        let t = CohomologyTable::compute(&p);
        let b = t.class_of(&p.parse("b").unwrap()).unwrap();
        let m = massey_triple(&t, &b, &b, &b).unwrap();
        assert!(m.contains_zero);
        let n = t.class_of(&p.parse("n").unwrap()).unwrap();
        assert!(matches!(
            massey_triple(&t, &n, &n, &b),
            Err(MasseyError::NotDefined(_))
        ));
    }

    #[test]
    fn cohomology_map_of_hp1() {
        let p = pres(&[("u", 4), ("w", 7)], &[("w", "u^2")], 10);
        let t = Arc::new(CohomologyTable::compute(&p));
        let u = t.class_of(&p.parse("u").unwrap()).unwrap();
        let mu = CohomologyMap::new(p.clone(), t.clone(), vec![u, t.zero_class(7)]);
        assert!(mu.verify().passed());
        let bad = CohomologyMap::new(p.clone(), t.clone(), vec![t.zero_class(4), t.zero_class(7)]);
        assert_eq!(bad.verify().first_failure, Some(4));
        assert_eq!(t.class_to_poly(&t.basis_class(4, 0)), p.parse("u").unwrap());
        assert_eq!(t.basis_class(4, 0).coords, vec![q(1)]);
    }

    #[test]
    fn inclusion_fails_at_fibre_degree() {
        let base = pres(&[("u", 4), ("w", 7)], &[("w", "u^2")], 10);
        let total = pres(
            &[("u", 4), ("w", 7), ("z", 2), ("z'", 3)],
            &[("w", "u^2"), ("z'", "z^2 - u")],
            10,
        );
        let inc = Morphism::inclusion(&base, &total).unwrap();
        assert_eq!(verify_quasi_iso(&inc).first_failure, Some(2));
        assert!(verify_quasi_iso(&Morphism::identity(&total)).passed());
    }
}
