//! Formality of minimal Sullivan algebras up to a truncation degree: the
//! ideal criterion for a canonical complement of the closed generators,
//! explicit certificates into cohomology, and obstructions.

use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Monomial, Morphism, Poly, Presentation};
use crate::cohomology::{massey_triple, Class, CohomologyMap, CohomologyTable, QuasiIsoReport};
use crate::qlinalg::{independent_subset, QMatrix, Q};
use crate::sullivan::{is_minimal, minimal_model, MinimalModel, SullivanError};

/// Closed generators and their chosen complement, degree by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Complement {
    /// Generators spanning the complement `N` (pivot columns of `d` on `V^i`).
    pub generators: Vec<usize>,
    /// For every other generator `g`, the closed element `g − Σ a_p p`
    /// obtained by subtracting complement generators.
    pub closed: Vec<(usize, Poly)>,
    /// In every degree either all generators are closed, or none can be made
    /// closed by adding decomposables and every decomposable lies in the
    /// ideal of lower complement generators. Then no other choice of
    /// generators changes `I(N)`.
    pub forced: bool,
}

impl Complement {
    pub fn contains(&self, generator: usize) -> bool {
        self.generators.contains(&generator)
    }

    pub fn names(&self, pres: &Presentation) -> Vec<String> {
        self.generators
            .iter()
            .map(|&i| pres.generators()[i].name.clone())
            .collect()
    }
}

/// The canonical complement: in each degree, row-reduce `d` restricted to the
/// generators of that degree and take the pivot generators.
pub fn canonical_complement(pres: &Presentation) -> Complement {
    let mut generators = Vec::new();
    let mut closed = Vec::new();
    let mut forced = true;
    let mut degrees: Vec<u32> = pres.generators().iter().map(|g| g.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for k in degrees {
        let gens: Vec<usize> = (0..pres.len())
            .filter(|&i| pres.generators()[i].degree == k)
            .collect();
        let target = pres.basis_of_degree(k + 1);
        let cols: Vec<Vec<Q>> = gens
            .iter()
            .map(|&i| {
                pres.dg(i)
                    .coordinates(&target)
                    .expect("d raises degree by one")
            })
            .collect();
        let rref = QMatrix::from_columns(target.len(), &cols).rref();
        let pivots: Vec<usize> = rref.pivots.iter().map(|&c| gens[c]).collect();
        if !pivots.is_empty() {
            let rigid = decomposables(pres, k)
                .iter()
                .all(|m| m.factors().iter().any(|(i, _)| generators.contains(i)));
            if pivots.len() < gens.len() || !closable(pres, k, &gens).is_empty() || !rigid {
                forced = false;
            }
        }
        for f in rref.free_columns() {
            let mut x = Poly::generator(gens[f]);
            for (r, &pc) in rref.pivots.iter().enumerate() {
                let a = rref.matrix.get(r, f);
                if !a.is_zero() {
                    x -= &Poly::generator(gens[pc]).scale(a);
                }
            }
            closed.push((gens[f], x));
        }
        generators.extend(pivots);
    }
    generators.sort_unstable();
    closed.sort_by_key(|(i, _)| *i);
    Complement {
        generators,
        closed,
        forced,
    }
}

fn decomposables(pres: &Presentation, k: u32) -> Vec<Monomial> {
    pres.basis_of_degree(k)
        .into_iter()
        .filter(|m| m.word_length() >= 2)
        .collect()
}

/// Closed elements `Σ a_g g + p` with `p` decomposable and the `a_g` not all
/// zero, reduced so that each has coefficient 1 on its own generator and 0 on
/// the generators of the others. Returns `(generator, element)` pairs.
fn closable(pres: &Presentation, k: u32, gens: &[usize]) -> Vec<(usize, Poly)> {
    let dec = decomposables(pres, k);
    let target = pres.basis_of_degree(k + 1);
    let mut basis: Vec<Monomial> = gens.iter().map(|&i| Monomial::generator(i)).collect();
    basis.extend(dec);
    let cols: Vec<Vec<Q>> = basis
        .iter()
        .map(|m| {
            pres.d(&Poly::monomial(m.clone()))
                .coordinates(&target)
                .expect("d raises degree by one")
        })
        .collect();
    let kernel = QMatrix::from_columns(target.len(), &cols).kernel_basis();
    if kernel.is_empty() {
        return Vec::new();
    }
    let rref = QMatrix::from_rows(basis.len(), &kernel).rref();
    rref.pivots
        .iter()
        .enumerate()
        .take_while(|&(_, &c)| c < gens.len())
        .map(|(r, &c)| (gens[c], Poly::from_coordinates(&basis, rref.matrix.row(r))))
        .collect()
}

/// Re-chooses generators so that every generator that becomes closed after
/// adding decomposables is closed. Returns the model unchanged if there is
/// nothing to do.
pub fn close_generators(m: &MinimalModel) -> Result<MinimalModel, SullivanError> {
    let pres = m.model();
    let n = pres.len();
    let alg = pres.algebra();
    let mut theta: Vec<Poly> = (0..n).map(Poly::generator).collect();
    let mut inverse = theta.clone();
    let mut replaced = vec![false; n];
    let mut degrees: Vec<u32> = pres.generators().iter().map(|g| g.degree).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for k in degrees {
        let gens: Vec<usize> = (0..n)
            .filter(|&i| pres.generators()[i].degree == k)
            .collect();
        for (j, e) in closable(pres, k, &gens) {
            if e == Poly::generator(j) {
                continue;
            }
            let rest = &e - &Poly::generator(j);
            inverse[j] = &Poly::generator(j) - &alg.substitute(&rest, alg, &inverse);
            theta[j] = e;
            replaced[j] = true;
        }
    }
    if !replaced.contains(&true) {
        return Ok(m.clone());
    }
    let differential = (0..n)
        .map(|i| {
            if replaced[i] {
                Poly::zero()
            } else {
                alg.substitute(pres.dg(i), alg, &inverse)
            }
        })
        .collect();
    let closed = Presentation::new(alg.clone(), differential, pres.max_degree())?;
    let images = theta.iter().map(|t| m.map().apply(t)).collect();
    let map = Morphism::new(closed, m.target().clone(), images)
        .map_err(|e| SullivanError::Verification(e.to_string()))?;
    MinimalModel::from_map(map)
}

/// Prints `p` with the factors from `first` moved to the front of each
/// monomial (Koszul signs applied), e.g. `n*b` for an element of `I(N)`.
pub fn format_with_leading(pres: &Presentation, p: &Poly, first: &[usize]) -> String {
    let alg = pres.algebra();
    let terms = p.terms().map(|(m, c)| {
        let (lead, rest): (Vec<_>, Vec<_>) =
            m.factors().iter().partition(|(i, _)| first.contains(i));
        let mut order: Vec<(usize, u32)> = lead;
        order.extend(rest);
        let mut expanded = Vec::new();
        for &(i, e) in &order {
            for _ in 0..e {
                expanded.push((i, 1));
            }
        }
        let (sign, _) = alg.normalize(&expanded);
        let name = order
            .iter()
            .map(|&(i, e)| {
                let n = &alg.generator(i).name;
                if e == 1 {
                    n.clone()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*");
        let coeff = if sign < 0 { -c.clone() } else { c.clone() };
        (name, coeff)
    });
    crate::algebra::format_terms(terms)
}

/// A certificate failing to be a chain map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Obstruction {
    pub generator: String,
    /// The nonzero class `μ(dx)`.
    pub value: String,
}

/// The multiplicative extension of `x ↦ [x]` on closed generators and
/// `n ↦ 0` on the complement, if it is a chain map.
pub fn build_certificate(
    m: &MinimalModel,
    complement: &Complement,
) -> Result<CohomologyMap, Obstruction> {
    let pres = m.model();
    let table = Arc::new(CohomologyTable::compute(pres));
    certificate_with_table(pres, complement, table)
}

fn certificate_with_table(
    pres: &Presentation,
    complement: &Complement,
    table: Arc<CohomologyTable>,
) -> Result<CohomologyMap, Obstruction> {
    let mut images: Vec<Class> = pres
        .generators()
        .iter()
        .map(|g| table.zero_class(g.degree))
        .collect();
    for (i, x) in &complement.closed {
        let k = pres.generators()[*i].degree;
        if k <= table.top_degree() {
            images[*i] = table.class_in(k, x).expect("closed by construction");
        }
    }
    let mu = CohomologyMap::new(pres.clone(), table.clone(), images);
    if let Some(g) = mu.chain_violations().into_iter().next() {
        let i = pres.index_of(&g).expect("generator of the source");
        let value = mu.apply_in(pres.generators()[i].degree + 1, pres.dg(i));
        return Err(Obstruction {
            generator: g,
            value: table.format_class(&value),
        });
    }
    Ok(mu)
}

/// Evidence that a minimal algebra is not formal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A triple Massey product that does not contain zero.
    Massey {
        degree: u32,
        a: String,
        b: String,
        c: String,
        value: String,
        indeterminacy_dim: usize,
    },
    /// A closed, non-exact element of the ideal generated by the complement.
    Ideal {
        degree: u32,
        element: String,
        poly: Poly,
        /// Holds for every complement (the complement is forced).
        complement_independent: bool,
    },
}

impl Witness {
    pub fn degree(&self) -> u32 {
        match self {
            Witness::Massey { degree, .. } | Witness::Ideal { degree, .. } => *degree,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Witness::Massey { .. } => "massey",
            Witness::Ideal { .. } => "ideal",
        }
    }

    /// Short label: the element, or the triple.
    pub fn label(&self) -> String {
        match self {
            Witness::Massey { a, b, c, .. } => format!("<{a}, {b}, {c}>"),
            Witness::Ideal { element, .. } => element.clone(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Massey {
                degree,
                value,
                indeterminacy_dim,
                ..
            } => write!(
                f,
                "Massey product {} = [{}] in degree {}, indeterminacy of dimension {}",
                self.label(),
                value,
                degree,
                indeterminacy_dim
            ),
            Witness::Ideal { degree, element, .. } => write!(
                f,
                "{element} is closed, not exact, and lies in the ideal of the complement (degree {degree})"
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Formal(CohomologyMap),
    NonFormal(Vec<Witness>),
    Inconclusive(String),
}

#[derive(Debug, Clone)]
pub struct FormalityVerdict {
    pub verdict: Verdict,
    pub degree_bound: u32,
    pub complement: Complement,
    pub model: Presentation,
}

impl FormalityVerdict {
    pub fn is_formal(&self) -> bool {
        matches!(self.verdict, Verdict::Formal(_))
    }

    pub fn is_non_formal(&self) -> bool {
        matches!(self.verdict, Verdict::NonFormal(_))
    }

    pub fn name(&self) -> &'static str {
        match self.verdict {
            Verdict::Formal(_) => "formal",
            Verdict::NonFormal(_) => "non-formal",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn certificate(&self) -> Option<&CohomologyMap> {
        match &self.verdict {
            Verdict::Formal(mu) => Some(mu),
            _ => None,
        }
    }

    pub fn witnesses(&self) -> &[Witness] {
        match &self.verdict {
            Verdict::NonFormal(w) => w,
            _ => &[],
        }
    }
}

/// Closed elements of `I(N)` in degree `k` that are not exact, as a basis
/// modulo coboundaries.
pub fn ideal_defects(
    pres: &Presentation,
    table: &CohomologyTable,
    complement: &Complement,
    k: u32,
) -> Vec<Poly> {
    let basis = pres.basis_of_degree(k);
    let ideal: Vec<Monomial> = basis
        .into_iter()
        .filter(|m| m.factors().iter().any(|(i, _)| complement.contains(*i)))
        .collect();
    if ideal.is_empty() {
        return Vec::new();
    }
    let target = pres.basis_of_degree(k + 1);
    let cols: Vec<Vec<Q>> = ideal
        .iter()
        .map(|m| {
            pres.d(&Poly::monomial(m.clone()))
                .coordinates(&target)
                .expect("d raises degree by one")
        })
        .collect();
    let kernel = QMatrix::from_columns(target.len(), &cols).kernel_basis();
    let closed: Vec<Poly> = kernel
        .iter()
        .map(|v| Poly::from_coordinates(&ideal, v))
        .collect();
    let classes: Vec<Vec<Q>> = closed
        .iter()
        .map(|p| {
            table
                .class_in(k, p)
                .expect("closed element in range")
                .coords
        })
        .collect();
    let nonzero: Vec<usize> = (0..classes.len())
        .filter(|&i| classes[i].iter().any(|x| !x.is_zero()))
        .collect();
    let picked = independent_subset(
        table.betti(k),
        &nonzero
            .iter()
            .map(|&i| classes[i].clone())
            .collect::<Vec<_>>(),
    );
    picked
        .into_iter()
        .map(|j| closed[nonzero[j]].clone())
        .collect()
}

fn ideal_witnesses(
    pres: &Presentation,
    table: &CohomologyTable,
    complement: &Complement,
    top: u32,
) -> Vec<Witness> {
    let mut out = Vec::new();
    for k in 0..=top {
        for p in ideal_defects(pres, table, complement, k) {
            out.push(Witness::Ideal {
                degree: k,
                element: format_with_leading(pres, &p, &complement.generators),
                poly: p,
                complement_independent: complement.forced,
            });
        }
        if !out.is_empty() {
            break;
        }
    }
    out
}

/// Massey triples of basis classes not containing zero, in the lowest degree
/// where one exists.
pub fn massey_witnesses(table: &CohomologyTable, top: u32) -> Vec<Witness> {
    let classes: Vec<Class> = (1..=top)
        .flat_map(|k| (0..table.betti(k)).map(move |i| (k, i)))
        .map(|(k, i)| table.basis_class(k, i))
        .collect();
    for target in 2..=top {
        let mut found = Vec::new();
        for a in &classes {
            for b in &classes {
                if a.degree + b.degree > target {
                    continue;
                }
                let cdeg = target + 1 - a.degree - b.degree;
                for c in classes.iter().filter(|c| c.degree == cdeg) {
                    let Ok(r) = massey_triple(table, a, b, c) else {
                        continue;
                    };
                    if r.contains_zero {
                        continue;
                    }
                    found.push(Witness::Massey {
                        degree: r.degree,
                        a: table.format_class(a),
                        b: table.format_class(b),
                        c: table.format_class(c),
                        value: table.format_class(&r.class),
                        indeterminacy_dim: r.indeterminacy.len(),
                    });
                }
            }
        }
        if !found.is_empty() {
            return found;
        }
    }
    Vec::new()
}

/// Lowest-degree obstruction of either kind; at equal degree the ideal
/// element comes first.
pub fn nonformality_witness(m: &MinimalModel) -> Option<Witness> {
    let pres = m.model();
    let table = CohomologyTable::compute(pres);
    let complement = canonical_complement(pres);
    let top = pres.max_degree();
    let mut all = ideal_witnesses(pres, &table, &complement, top);
    all.extend(massey_witnesses(&table, top));
    all.into_iter()
        .min_by_key(|w| (w.degree(), w.kind() != "ideal"))
}

/// The ideal criterion with the canonical complement, falling back to Massey
/// products when it fails.
pub fn dgms_check(m: &MinimalModel) -> FormalityVerdict {
    let pres = m.model();
    let top = pres.max_degree();
    let complement = canonical_complement(pres);
    let mk = |verdict| FormalityVerdict {
        verdict,
        degree_bound: top,
        complement: complement.clone(),
        model: pres.clone(),
    };
    if !is_minimal(pres) {
        return mk(Verdict::Inconclusive("presentation is not minimal".into()));
    }
    let table = Arc::new(CohomologyTable::compute(pres));
    let ideal = ideal_witnesses(pres, &table, &complement, top);
    if ideal.is_empty() {
        return match certificate_with_table(pres, &complement, table.clone()) {
            Ok(mu) => {
                let report = mu.verify_against(&table, true);
                if report.passed() {
                    mk(Verdict::Formal(mu))
                } else {
                    mk(Verdict::Inconclusive(format!(
                        "certificate is not a quasi-isomorphism in degree {:?}",
                        report.first_failure
                    )))
                }
            }
            Err(o) => mk(Verdict::Inconclusive(format!(
                "certificate is not a chain map at {}: [{}]",
                o.generator, o.value
            ))),
        };
    }
    let mut witnesses: Vec<Witness> = Vec::new();
    if complement.forced {
        witnesses.extend(ideal);
    }
    witnesses.extend(massey_witnesses(&table, top));
    if witnesses.is_empty() {
        return mk(Verdict::Inconclusive(
            "non-exact closed form in I(N) for the canonical complement".into(),
        ));
    }
    let lowest = witnesses
        .iter()
        .map(Witness::degree)
        .min()
        .expect("nonempty");
    witnesses.retain(|w| w.degree() == lowest);
    witnesses.sort_by_key(|w| w.kind() != "ideal");
    mk(Verdict::NonFormal(witnesses))
}

/// Minimal model, with closable generators made closed, followed by
/// [`dgms_check`].
pub fn formality(pres: &Presentation) -> Result<(MinimalModel, FormalityVerdict), SullivanError> {
    let m = close_generators(&minimal_model(pres)?)?;
    let v = dgms_check(&m);
    Ok((m, v))
}

/// Verdict for `A ⊗ B` from verdicts for the factors.
pub fn product_formality(
    a: &FormalityVerdict,
    b: &FormalityVerdict,
) -> Result<FormalityVerdict, SullivanError> {
    let product = a.model.tensor(&b.model)?;
    let shift = a.model.len();
    let shift_poly = |p: &Poly| crate::algebra::shift_indices(p, shift);
    let mut complement = a.complement.clone();
    complement
        .generators
        .extend(b.complement.generators.iter().map(|i| i + shift));
    complement.closed.extend(
        b.complement
            .closed
            .iter()
            .map(|(i, p)| (i + shift, shift_poly(p))),
    );
    complement.forced = a.complement.forced && b.complement.forced;
    let top = product.max_degree();
    let mk = |verdict| FormalityVerdict {
        verdict,
        degree_bound: top,
        complement: complement.clone(),
        model: product.clone(),
    };
    let lift = |w: &Witness, first: bool| -> Witness {
        match w {
            Witness::Ideal {
                degree,
                poly,
                complement_independent,
                ..
            } => {
                let p = if first {
                    poly.clone()
                } else {
                    shift_poly(poly)
                };
                Witness::Ideal {
                    degree: *degree,
                    element: format_with_leading(&product, &p, &complement.generators),
                    poly: p,
                    complement_independent: *complement_independent,
                }
            }
            other => other.clone(),
        }
    };
    let verdict = match (&a.verdict, &b.verdict) {
        (Verdict::NonFormal(w), _) => Verdict::NonFormal(w.iter().map(|x| lift(x, true)).collect()),
        (_, Verdict::NonFormal(w)) => {
            Verdict::NonFormal(w.iter().map(|x| lift(x, false)).collect())
        }
        (Verdict::Inconclusive(r), _) | (_, Verdict::Inconclusive(r)) => {
            Verdict::Inconclusive(r.clone())
        }
        (Verdict::Formal(ma), Verdict::Formal(mb)) => {
            let table = Arc::new(CohomologyTable::compute(&product));
            let mut images = Vec::with_capacity(product.len());
            let push = |images: &mut Vec<Class>, mu: &CohomologyMap, offset: usize| {
                for c in mu.images() {
                    let rep = mu.target().class_to_poly(c);
                    let rep = if offset == 0 { rep } else { shift_poly(&rep) };
                    let class = if c.degree > table.top_degree() {
                        table.zero_class(c.degree)
                    } else {
                        table
                            .class_in(c.degree, &rep)
                            .expect("closed in the product")
                    };
                    images.push(class);
                }
            };
            push(&mut images, ma, 0);
            push(&mut images, mb, shift);
            let mu = CohomologyMap::new(product.clone(), table, images);
            let report = mu.verify();
            if report.passed() {
                Verdict::Formal(mu)
            } else {
                Verdict::Inconclusive(format!(
                    "tensor certificate fails in degree {:?}",
                    report.first_failure
                ))
            }
        }
    };
    Ok(mk(verdict))
}

/// Re-checks a certificate: chain map, quasi-isomorphism, and closed
/// generators sent to their own classes.
pub fn verify_certificate(mu: &CohomologyMap) -> QuasiIsoReport {
    let mut r = mu.verify();
    let p = mu.source();
    let t = mu.target();
    let respects = p.generators().iter().enumerate().all(|(i, g)| {
        if !p.dg(i).is_zero() || g.degree > t.top_degree() {
            return true;
        }
        t.class_in(g.degree, &Poly::generator(i)).as_ref() == Some(&mu.images()[i])
    });
    if !respects {
        r.first_failure = r.first_failure.or(Some(0));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(gens: &[(&str, u32)], d: &[(&str, &str)], n: u32) -> MinimalModel {
        MinimalModel::identity(&Presentation::from_spec(gens, d, n).unwrap()).unwrap()
    }

    #[test]
    fn free_algebra_is_formal() {
        let m = model(&[("a", 2), ("b", 3)], &[], 12);
        let v = dgms_check(&m);
        assert!(v.is_formal());
        assert!(verify_certificate(v.certificate().unwrap()).passed());
    }

    #[test]
    fn hpn_certificate() {
        let m = model(&[("u", 4), ("w", 11)], &[("w", "u^3")], 12);
        let c = canonical_complement(m.model());
        assert_eq!(c.names(m.model()), vec!["w"]);
        let mu = build_certificate(&m, &c).unwrap();
        let described: Vec<String> = mu
            .describe()
            .into_iter()
            .map(|(a, b)| format!("{a}:{b}"))
            .collect();
        assert_eq!(described, vec!["u:[u]", "w:0"]);
        assert!(dgms_check(&m).is_formal());
    }

    #[test]
    fn heisenberg_like_is_non_formal() {
        let m = model(&[("x", 3), ("y", 3), ("z", 5)], &[("z", "x*y")], 20);
        let c = canonical_complement(m.model());
        assert!(build_certificate(&m, &c).is_ok());
        let v = dgms_check(&m);
        let w = v.witnesses();
        assert!(!w.is_empty());
        assert!(w.iter().all(|w| w.degree() == 8));
        assert!(w.iter().any(|w| matches!(
            w,
            Witness::Massey {
                indeterminacy_dim: 0,
                ..
            }
        )));
    }

    #[test]
    fn nonprimitive_base_witness() {
        let m = model(&[("b", 3), ("c", 4), ("n", 6)], &[("n", "b*c")], 20);
        let v = dgms_check(&m);
        assert!(v.is_non_formal());
        assert_eq!(v.witnesses()[0].label(), "n*b");
        assert_eq!(nonformality_witness(&m).unwrap().label(), "n*b");
    }

    #[test]
    fn primitive_base_is_formal() {
        let m = model(
            &[("y", 2), ("b", 3), ("c", 3), ("u", 4), ("n", 5)],
            &[("n", "b*c + u*y")],
            20,
        );
        let v = dgms_check(&m);
        assert!(v.is_formal(), "{:?}", v.verdict);
        assert!(nonformality_witness(&m).is_none());
    }

    #[test]
    fn leading_format_applies_signs() {
        let p = Presentation::from_spec(&[("a", 3), ("b", 3)], &[], 10).unwrap();
        let ab = p.parse("a*b").unwrap();
        assert_eq!(format_with_leading(&p, &ab, &[1]), "-b*a");
    }

    #[test]
    fn products() {
        let s2 = model(&[("e", 2), ("f", 3)], &[("f", "e^2")], 12);
        let s4 = model(&[("g", 4), ("h", 7)], &[("h", "g^2")], 12);
        let hb = model(&[("x", 3), ("y", 3), ("z", 5)], &[("z", "x*y")], 12);
        let (a, b, c) = (dgms_check(&s2), dgms_check(&s4), dgms_check(&hb));
        let ab = product_formality(&a, &b).unwrap();
        assert!(ab.is_formal());
        assert!(verify_certificate(ab.certificate().unwrap()).passed());
        assert!(product_formality(&c, &a).unwrap().is_non_formal());
        assert!(product_formality(&a, &c).unwrap().is_non_formal());
        let inc = FormalityVerdict {
            verdict: Verdict::Inconclusive("test".into()),
            ..a.clone()
        };
        assert!(matches!(
            product_formality(&inc, &b).unwrap().verdict,
            Verdict::Inconclusive(_)
        ));
    }

    #[test]
    fn closable_generator_is_not_an_obstruction() {
        let m = model(
            &[("a", 2), ("x", 3), ("y", 5)],
            &[("x", "a^2"), ("y", "a^3")],
            14,
        );
        let direct = dgms_check(&m);
        assert!(!direct.complement.forced);
        assert!(matches!(direct.verdict, Verdict::Inconclusive(_)));
        let closed = close_generators(&m).unwrap();
        assert_eq!(closed.model().to_string(), "Λ(a:2, x:3, y:5; dx = a^2)");
        assert_eq!(m.model().format(closed.map().image(2)), "-a*x + y");
        let v = dgms_check(&closed);
        assert!(v.is_formal());
        assert!(verify_certificate(v.certificate().unwrap()).passed());
    }
}
