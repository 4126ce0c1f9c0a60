//! Built-in presentations with known answers.

use std::fmt;

use thiserror::Error;

use crate::algebra::{Poly, Presentation};
use crate::cohomology::{cup_length, CohomologyTable};
use crate::dsl::{
    algebra_block, Block, Document, Expr, FiberKeyword, FiberSpec, FibrationBlock, Span,
};
use crate::fibration::{
    build_fibration_model, theoremC_reduce, FiberKind, FibrationError, FibrationModel,
};
use crate::formality::{dgms_check, formality, FormalityVerdict, Verdict};
use crate::sullivan::{MinimalModel, SullivanError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown fixture `{0}`; known families: {FAMILIES}")]
    UnknownFixture(String),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Sullivan(#[from] SullivanError),
}

const FAMILIES: &str = "sphere:n, cpn:m, hpn:n, twistor:hpn:n, heisenberg-like:n, \
sec6-primitive, sec6-primitive+z, sec6-nonprimitive, sec6-nonprimitive+z, \
projective:3:hpn:1, projective:3:sphere:6";

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    /// Asserted in the literature the fixture is taken from.
    Literature,
    /// Follows directly from the definitions.
    Definition,
    /// Worked out independently (by hand or by a separate oracle).
    Computation,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Literature => "literature",
            Source::Definition => "definition",
            Source::Computation => "computation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Property {
    /// Betti numbers `b_0..b_N` of the algebra (or of the total space).
    Betti(Vec<usize>),
    Formal(bool),
    /// Formality of the base of a fibration fixture.
    BaseFormal(bool),
    Primitive(bool),
    /// Printed form of the reduced minimal model.
    Reduced(String),
    CupLength(usize),
    /// Degrees of the minimal model generators, all with zero differential.
    FreeMinimalModel(Vec<u32>),
    /// Label of the first non-formality witness.
    Witness(String),
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Betti(b) => write!(f, "betti {b:?}"),
            Property::Formal(x) => write!(f, "formal {x}"),
            Property::BaseFormal(x) => write!(f, "base formal {x}"),
            Property::Primitive(x) => write!(f, "primitive {x}"),
            Property::Reduced(s) => write!(f, "reduced {s}"),
            Property::CupLength(n) => write!(f, "cup length {n}"),
            Property::FreeMinimalModel(d) => write!(f, "free minimal model in degrees {d:?}"),
            Property::Witness(w) => write!(f, "witness {w}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub property: Property,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct FibrationRecipe {
    pub base: Presentation,
    pub kind: FiberKind,
    pub u: String,
}

impl FibrationRecipe {
    pub fn model(&self) -> Result<FibrationModel, CatalogError> {
        let base = MinimalModel::identity(&self.base)?;
        let u = self
            .base
            .parse(&self.u)
            .map_err(|e| CatalogError::Sullivan(SullivanError::Presentation(e)))?;
        Ok(build_fibration_model(&base, self.kind, &u)?)
    }
}

#[derive(Debug, Clone)]
pub enum FixtureBody {
    Algebra(Presentation),
    Fibration(FibrationRecipe),
}

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: String,
    pub description: String,
    pub body: FixtureBody,
    pub expected: Vec<Expected>,
}

fn pres(gens: &[(&str, u32)], d: &[(&str, &str)], n: u32) -> Presentation {
    Presentation::from_spec(gens, d, n).expect("catalog presentations are valid")
}

fn expect(property: Property, source: Source) -> Expected {
    Expected { property, source }
}

/// 1 in the listed degrees, 0 elsewhere, for degrees `0..=n`.
fn betti_at(degrees: impl IntoIterator<Item = u32>, n: u32) -> Vec<usize> {
    let mut b = vec![0; n as usize + 1];
    for k in degrees {
        if k <= n {
            b[k as usize] = 1;
        }
    }
    b
}

pub fn sphere(n: u32, max_degree: u32) -> Presentation {
    if n % 2 == 1 {
        pres(&[("e", n)], &[], max_degree)
    } else {
        pres(&[("e", n), ("f", 2 * n - 1)], &[("f", "e^2")], max_degree)
    }
}

pub fn cpn(m: u32, max_degree: u32) -> Presentation {
    let dy = format!("x^{}", m + 1);
    pres(&[("x", 2), ("y", 2 * m + 1)], &[("y", &dy)], max_degree)
}

pub fn hpn(n: u32, max_degree: u32) -> Presentation {
    let dw = format!("u^{}", n + 1);
    pres(&[("u", 4), ("w", 4 * n + 3)], &[("w", &dw)], max_degree)
}

pub fn heisenberg_like(n: u32, max_degree: u32) -> Presentation {
    pres(
        &[("x", n), ("y", n), ("z", 2 * n - 1)],
        &[("z", "x*y")],
        max_degree,
    )
}

pub fn sec6_primitive_base(max_degree: u32) -> Presentation {
    pres(
        &[("y", 2), ("b", 3), ("c", 3), ("u", 4), ("n", 5)],
        &[("n", "b*c + u*y")],
        max_degree,
    )
}

pub fn sec6_nonprimitive_base(max_degree: u32) -> Presentation {
    pres(&[("b", 3), ("c", 4), ("n", 6)], &[("n", "b*c")], max_degree)
}

fn parse_index(s: &str) -> Option<u32> {
    s.parse().ok().filter(|&n| n >= 1)
}

/// Looks a fixture up by name.
pub fn fixture(name: &str) -> Result<Fixture, CatalogError> {
    fixture_with(name, None)
}

/// Like [`fixture`], with the truncation degree overridden.
pub fn fixture_with(name: &str, max_degree: Option<u32>) -> Result<Fixture, CatalogError> {
    let unknown = || CatalogError::UnknownFixture(name.to_string());
    let parts: Vec<&str> = name.split(':').collect();
    use Property::*;
    use Source::*;
    let f = match parts.as_slice() {
        ["sphere", n] => {
            let n = parse_index(n).filter(|&n| n >= 2).ok_or_else(unknown)?;
            let top = if n % 2 == 0 { 2 * n - 1 } else { n };
            let big = max_degree.unwrap_or(2 * top + 2);
            Fixture {
                name: name.into(),
                description: format!("the {n}-sphere"),
                body: FixtureBody::Algebra(sphere(n, big)),
                expected: vec![
                    expect(Betti(betti_at([0, n], big)), Definition),
                    expect(Formal(true), Literature),
                    expect(CupLength(1), Definition),
                ],
            }
        }
        ["cpn", m] => {
            let m = parse_index(m).ok_or_else(unknown)?;
            let big = max_degree.unwrap_or(2 * m + 2);
            Fixture {
                name: name.into(),
                description: format!("complex projective space of complex dimension {m}"),
                body: FixtureBody::Algebra(cpn(m, big)),
                expected: vec![
                    expect(Betti(betti_at((0..=m).map(|i| 2 * i), big)), Computation),
                    expect(Formal(true), Literature),
                    expect(CupLength(m as usize), Computation),
                ],
            }
        }
        ["hpn", n] => {
            let n = parse_index(n).ok_or_else(unknown)?;
            let big = max_degree.unwrap_or(4 * n + 4);
            Fixture {
                name: name.into(),
                description: format!("quaternionic projective space of quaternionic dimension {n}"),
                body: FixtureBody::Algebra(hpn(n, big)),
                expected: vec![
                    expect(Betti(betti_at((0..=n).map(|i| 4 * i), big)), Computation),
                    expect(Formal(true), Literature),
                    expect(CupLength(n as usize), Literature),
                ],
            }
        }
        ["twistor", "hpn", n] => {
            let n = parse_index(n).ok_or_else(unknown)?;
            let big = max_degree.unwrap_or(4 * n + 4);
            Fixture {
                name: name.into(),
                description: format!("the twistor fibration S^2 -> CP^{} -> HP^{n}", 2 * n + 1),
                body: FixtureBody::Fibration(FibrationRecipe {
                    base: hpn(n, big),
                    kind: FiberKind::EvenSphere(2),
                    u: "u".into(),
                }),
                expected: vec![
                    expect(Primitive(true), Definition),
                    expect(
                        Reduced(format!("Λ(z:2, w:{}; dw = z^{})", 4 * n + 3, 2 * n + 2)),
                        Computation,
                    ),
                    expect(
                        Betti(betti_at((0..=2 * n + 1).map(|i| 2 * i), big)),
                        Computation,
                    ),
                    expect(Formal(true), Literature),
                    expect(BaseFormal(true), Literature),
                ],
            }
        }
        ["heisenberg-like", n] => {
            let n = parse_index(n).filter(|n| n % 2 == 1).ok_or_else(unknown)?;
            let big = max_degree.unwrap_or(4 * n);
            Fixture {
                name: name.into(),
                description: format!("Λ(x, y, z; dz = xy) with |x| = |y| = {n}"),
                body: FixtureBody::Algebra(heisenberg_like(n, big)),
                expected: vec![expect(Formal(false), Literature)],
            }
        }
        ["sec6-primitive"] => {
            let big = max_degree.unwrap_or(20);
            Fixture {
                name: name.into(),
                description: "formal base of a primitive odd-sphere fibration".into(),
                body: FixtureBody::Algebra(sec6_primitive_base(big)),
                expected: vec![expect(Formal(true), Literature)],
            }
        }
        ["sec6-primitive+z"] => {
            let big = max_degree.unwrap_or(20);
            Fixture {
                name: name.into(),
                description: "non-formal total space over the formal base, dz = u".into(),
                body: FixtureBody::Fibration(FibrationRecipe {
                    base: sec6_primitive_base(big),
                    kind: FiberKind::OddSphere(3),
                    u: "u".into(),
                }),
                expected: vec![
                    expect(Primitive(true), Literature),
                    expect(Formal(false), Literature),
                    expect(BaseFormal(true), Literature),
                ],
            }
        }
        ["sec6-nonprimitive"] => {
            let big = max_degree.unwrap_or(20);
            Fixture {
                name: name.into(),
                description: "non-formal base with a formal total space".into(),
                body: FixtureBody::Algebra(sec6_nonprimitive_base(big)),
                expected: vec![
                    expect(Formal(false), Literature),
                    expect(Witness("n*b".into()), Literature),
                ],
            }
        }
        ["sec6-nonprimitive+z"] => {
            let big = max_degree.unwrap_or(20);
            Fixture {
                name: name.into(),
                description: "formal total space over the non-formal base, dz = c".into(),
                body: FixtureBody::Fibration(FibrationRecipe {
                    base: sec6_nonprimitive_base(big),
                    kind: FiberKind::OddSphere(3),
                    u: "c".into(),
                }),
                expected: vec![
                    expect(Primitive(true), Definition),
                    expect(Formal(true), Literature),
                    expect(FreeMinimalModel(vec![3, 6]), Literature),
                    expect(BaseFormal(false), Literature),
                ],
            }
        }
        ["projective", "3", "hpn", "1"] => {
            let big = max_degree.unwrap_or(12);
            Fixture {
                name: name.into(),
                description: "CP^2-like fibre over HP^1; H^6(HP^1) = 0 forces u = 0".into(),
                body: FixtureBody::Fibration(FibrationRecipe {
                    base: hpn(1, big),
                    kind: FiberKind::ProjectiveLike { n: 2, d: 3 },
                    u: "0".into(),
                }),
                expected: vec![
                    expect(Primitive(false), Computation),
                    expect(Formal(true), Literature),
                    expect(BaseFormal(true), Literature),
                ],
            }
        }
        ["projective", "3", "sphere", "6"] => {
            let big = max_degree.unwrap_or(24);
            Fixture {
                name: name.into(),
                description: "CP^2-like fibre over S^6 with u the volume class".into(),
                body: FixtureBody::Fibration(FibrationRecipe {
                    base: sphere(6, big),
                    kind: FiberKind::ProjectiveLike { n: 2, d: 3 },
                    u: "e".into(),
                }),
                expected: vec![
                    expect(Primitive(true), Definition),
                    expect(Reduced("Λ(z:2, f:11; df = z^6)".into()), Computation),
                    expect(Betti(betti_at((0..=5).map(|i| 2 * i), big)), Computation),
                    expect(Formal(true), Computation),
                    expect(BaseFormal(true), Literature),
                ],
            }
        }
        _ => return Err(unknown()),
    };
    Ok(f)
}

/// A representative list of registry names.
pub fn registry() -> Vec<String> {
    let mut names = Vec::new();
    for n in [2, 3, 4, 5, 6] {
        names.push(format!("sphere:{n}"));
    }
    for n in 1..=3 {
        names.push(format!("cpn:{n}"));
    }
    for n in 1..=4 {
        names.push(format!("hpn:{n}"));
    }
    for n in 1..=3 {
        names.push(format!("twistor:hpn:{n}"));
    }
    names.push("heisenberg-like:3".into());
    names.push("heisenberg-like:5".into());
    for s in [
        "sec6-primitive",
        "sec6-primitive+z",
        "sec6-nonprimitive",
        "sec6-nonprimitive+z",
        "projective:3:hpn:1",
        "projective:3:sphere:6",
    ] {
        names.push(s.into());
    }
    names
}

impl Fixture {
    /// The algebra itself, or the total space of the fibration.
    pub fn presentation(&self) -> Result<Presentation, CatalogError> {
        Ok(match &self.body {
            FixtureBody::Algebra(p) => p.clone(),
            FixtureBody::Fibration(r) => r.model()?.total().clone(),
        })
    }

    pub fn base(&self) -> Option<&Presentation> {
        match &self.body {
            FixtureBody::Algebra(_) => None,
            FixtureBody::Fibration(r) => Some(&r.base),
        }
    }

    /// The fixture as a `.cdga` document.
    pub fn document(&self) -> Document {
        let mut blocks = Vec::new();
        match &self.body {
            FixtureBody::Algebra(p) => blocks.push(Block::Algebra(algebra_block("A", p, false))),
            FixtureBody::Fibration(r) => {
                blocks.push(Block::Algebra(algebra_block("B", &r.base, false)));
                let (kind, d) = match r.kind {
                    FiberKind::EvenSphere(_) => (FiberKeyword::Even, 2),
                    FiberKind::OddSphere(_) => (FiberKeyword::Odd, 2),
                    FiberKind::ProjectiveLike { d, .. } => (FiberKeyword::Projective, d),
                };
                let u = r.base.parse(&r.u).expect("catalog twist parses");
                blocks.push(Block::Fibration(FibrationBlock {
                    name: "E".into(),
                    max_degree: None,
                    base: "B".into(),
                    fiber: FiberSpec {
                        kind,
                        n: r.kind.n(),
                        d,
                        names: Vec::new(),
                        span: Span::default(),
                    },
                    u: Expr::from_poly(&r.base, &u),
                    span: Span::default(),
                }));
            }
        }
        let n = match &self.body {
            FixtureBody::Algebra(p) => p.max_degree(),
            FixtureBody::Fibration(r) => r.base.max_degree(),
        };
        Document {
            max_degree: Some(n),
            blocks,
        }
    }
}

/// One line of a fixture check.
#[derive(Debug, Clone)]
pub struct CheckLine {
    pub expected: Expected,
    pub found: String,
    pub ok: bool,
}

#[derive(Debug, Clone)]
pub struct FixtureReport {
    pub name: String,
    pub max_degree: u32,
    pub presentation: String,
    pub reduced: Option<String>,
    pub verdict: String,
    pub lines: Vec<CheckLine>,
}

impl FixtureReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }
}

fn verdict_formal(v: &FormalityVerdict) -> Option<bool> {
    match v.verdict {
        Verdict::Formal(_) => Some(true),
        Verdict::NonFormal(_) => Some(false),
        Verdict::Inconclusive(_) => None,
    }
}

fn show(x: Option<bool>) -> String {
    x.map_or("inconclusive".into(), |b| b.to_string())
}

/// Recomputes every expected value of a fixture.
pub fn check_fixture(f: &Fixture) -> Result<FixtureReport, CatalogError> {
    let total = f.presentation()?;
    let n = total.max_degree();
    let (_, verdict) = formality(&total)?;
    let fm = match &f.body {
        FixtureBody::Fibration(r) => Some(r.model()?),
        FixtureBody::Algebra(_) => None,
    };
    let reduced = match &fm {
        Some(fm) if fm.kind().truncation().is_some() && !fm.u().is_zero() => {
            Some(theoremC_reduce(fm)?.ve_model.to_string())
        }
        _ => None,
    };
    let mut table: Option<CohomologyTable> = None;
    let mut lines = Vec::new();
    for e in &f.expected {
        let (found, ok) = match &e.property {
            Property::Betti(b) => {
                let t = table.get_or_insert_with(|| CohomologyTable::compute(&total));
                let got = t.betti_numbers();
                (format!("{got:?}"), &got == b)
            }
            Property::CupLength(c) => {
                let t = table.get_or_insert_with(|| CohomologyTable::compute(&total));
                let got = cup_length(t);
                (got.to_string(), got == *c)
            }
            Property::Formal(x) => {
                let got = verdict_formal(&verdict);
                (show(got), got == Some(*x))
            }
            Property::BaseFormal(x) => {
                let base = f.base().expect("fibration fixture");
                let got = verdict_formal(&dgms_check(&MinimalModel::identity(base)?));
                (show(got), got == Some(*x))
            }
            Property::Primitive(x) => {
                let got = fm.as_ref().map(FibrationModel::is_primitive);
                (got.map_or("n/a".into(), |b| b.to_string()), got == Some(*x))
            }
            Property::Reduced(s) => {
                let got = reduced.clone().unwrap_or_else(|| "none".into());
                (got.clone(), &got == s)
            }
            Property::FreeMinimalModel(degrees) => {
                let (m, _) = formality(&total)?;
                let p = m.model();
                let mut got: Vec<u32> = p.generators().iter().map(|g| g.degree).collect();
                got.sort_unstable();
                let free = p.is_zero_differential();
                (format!("{p}"), free && &got == degrees)
            }
            Property::Witness(w) => {
                let got = verdict.witnesses().first().map(|w| w.label());
                (
                    got.clone().unwrap_or_else(|| "none".into()),
                    got.as_deref() == Some(w),
                )
            }
        };
        lines.push(CheckLine {
            expected: e.clone(),
            found,
            ok,
        });
    }
    Ok(FixtureReport {
        name: f.name.clone(),
        max_degree: n,
        presentation: total.to_string(),
        reduced,
        verdict: verdict.name().into(),
        lines,
    })
}

/// Twisting element of a fibration fixture, for callers that build models.
pub fn twist(f: &Fixture) -> Option<Poly> {
    match &f.body {
        FixtureBody::Fibration(r) => r.base.parse(&r.u).ok(),
        FixtureBody::Algebra(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names() {
        for bad in [
            "",
            "sphere:1",
            "hpn:0",
            "heisenberg-like:2",
            "twistor:cpn:1",
            "foo",
        ] {
            assert!(
                matches!(fixture(bad), Err(CatalogError::UnknownFixture(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn hpn2_shape() {
        let f = fixture("hpn:2").unwrap();
        let p = f.presentation().unwrap();
        assert_eq!(p.to_string(), "Λ(u:4, w:11; dw = u^3)");
        assert!(check_fixture(&f).unwrap().passed());
    }

    #[test]
    fn all_fixtures_pass_d_squared_and_check() {
        for name in registry() {
            let f = fixture(&name).unwrap();
            let p = f.presentation().unwrap();
            assert!(p.check_d_squared().is_empty(), "{name}");
            let r = check_fixture(&f).unwrap();
            for l in &r.lines {
                assert!(
                    l.ok,
                    "{name}: expected {} found {}",
                    l.expected.property, l.found
                );
            }
        }
    }

    #[test]
    fn document_round_trip() {
        for name in registry() {
            let f = fixture(&name).unwrap();
            let doc = f.document();
            let text = doc.to_string();
            let again = crate::dsl::parse(&text).unwrap();
            assert_eq!(again, doc, "{name}");
            assert_eq!(again.to_string(), text);
        }
    }
}
