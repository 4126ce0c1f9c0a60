use std::fmt;

use super::free::{FreeAlgebra, Generator};
use super::poly::{Monomial, Poly};
use super::PresentationError;
use crate::dsl;
use crate::qlinalg::Q;

/// A failure of `d ∘ d = 0` on a generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DSquaredViolation {
    pub generator: String,
    pub value: String,
}

/// A validated free CDGA `(ΛV, d)` together with its truncation degree.
#[derive(Clone, PartialEq, Eq)]
pub struct Presentation {
    algebra: FreeAlgebra,
    differential: Vec<Poly>,
    max_degree: u32,
}

impl fmt::Debug for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self
            .generators()
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        write!(f, "Λ({}", gens.join(", "))?;
        let mut sep = "; ";
        for (i, g) in self.generators().iter().enumerate() {
            if !self.differential[i].is_zero() {
                write!(
                    f,
                    "{sep}d{} = {}",
                    g.name,
                    self.format(&self.differential[i])
                )?;
                sep = ", ";
            }
        }
        write!(f, ")")
    }
}

impl Presentation {
    /// Validates homogeneity and `d² = 0` on every generator.
    pub fn new(
        algebra: FreeAlgebra,
        differential: Vec<Poly>,
        max_degree: u32,
    ) -> Result<Self, PresentationError> {
        assert_eq!(algebra.len(), differential.len());
        if max_degree == 0 {
            return Err(PresentationError::ZeroTruncation);
        }
        for (g, dg) in algebra.generators().iter().zip(&differential) {
            if dg.is_zero() {
                continue;
            }
            if algebra.degree(dg) != Some(g.degree + 1) {
                return Err(PresentationError::Inhomogeneous {
                    generator: g.name.clone(),
                    expected: g.degree + 1,
                    value: algebra.format(dg),
                });
            }
            if let Some((i, _)) = dg
                .monomials()
                .flat_map(|m| m.factors().iter())
                .find(|&&(i, _)| i >= algebra.len())
            {
                return Err(PresentationError::UnknownGenerator(format!("#{i}")));
            }
        }
        let pres = Presentation {
            algebra,
            differential,
            max_degree,
        };
        if let Some(v) = pres.check_d_squared().into_iter().next() {
            return Err(PresentationError::DSquaredNonzero {
                generator: v.generator,
                value: v.value,
            });
        }
        Ok(pres)
    }

    /// Builds a presentation from generator declarations and textual
    /// differentials, e.g. `&[("x", 3), ("z", 5)]`, `&[("z", "x*y")]`.
    pub fn from_spec(
        generators: &[(&str, u32)],
        differentials: &[(&str, &str)],
        max_degree: u32,
    ) -> Result<Self, PresentationError> {
        let algebra = FreeAlgebra::new(
            generators
                .iter()
                .map(|&(n, d)| Generator::new(n, d))
                .collect(),
        )?;
        let mut diff = vec![Poly::zero(); algebra.len()];
        let mut seen = vec![false; algebra.len()];
        for &(name, text) in differentials {
            let i = algebra
                .index_of(name)
                .ok_or_else(|| PresentationError::UnknownGenerator(name.to_string()))?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(PresentationError::DuplicateDifferential(name.to_string()));
            }
            diff[i] = parse_in(&algebra, text)?;
        }
        Presentation::new(algebra, diff, max_degree)
    }

    pub fn algebra(&self) -> &FreeAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[Generator] {
        self.algebra.generators()
    }

    pub fn len(&self) -> usize {
        self.algebra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.algebra.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.algebra.index_of(name)
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn with_max_degree(&self, max_degree: u32) -> Presentation {
        Presentation {
            max_degree: max_degree.max(1),
            ..self.clone()
        }
    }

    /// Differential of the `i`-th generator.
    pub fn dg(&self, i: usize) -> &Poly {
        &self.differential[i]
    }

    pub fn differentials(&self) -> &[Poly] {
        &self.differential
    }

    pub fn generator_poly(&self, name: &str) -> Option<Poly> {
        self.index_of(name).map(Poly::generator)
    }

    pub fn degree(&self, p: &Poly) -> Option<u32> {
        self.algebra.degree(p)
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        self.algebra.mul(a, b)
    }

    pub fn pow(&self, a: &Poly, e: u32) -> Poly {
        self.algebra.pow(a, e)
    }

    pub fn format(&self, p: &Poly) -> String {
        self.algebra.format(p)
    }

    pub fn basis_of_degree(&self, k: u32) -> Vec<Monomial> {
        self.algebra.basis_of_degree(k)
    }

    pub fn is_decomposable(&self, p: &Poly) -> bool {
        self.algebra.is_decomposable(p)
    }

    /// Parses a polynomial over this presentation's generators.
    pub fn parse(&self, text: &str) -> Result<Poly, PresentationError> {
        parse_in(&self.algebra, text)
    }

    /// Parses a polynomial and checks that it is homogeneous of degree `k`.
    pub fn parse_homogeneous(&self, text: &str, k: u32) -> Result<Poly, PresentationError> {
        let p = self.parse(text)?;
        if !p.is_zero() && self.degree(&p) != Some(k) {
            return Err(PresentationError::WrongDegree {
                text: text.to_string(),
                expected: k,
            });
        }
        Ok(p)
    }

    /// The differential extended as a graded derivation.
    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let dm = self.d_monomial(m);
            if !dm.is_zero() {
                out += &dm.scale(c);
            }
        }
        out
    }

    fn d_monomial(&self, m: &Monomial) -> Poly {
        let factors = m.factors();
        let mut out = Poly::zero();
        let mut prefix_degree = 0u32;
        for (k, &(i, e)) in factors.iter().enumerate() {
            let dg = &self.differential[i];
            if !dg.is_zero() {
                let mut lower: Vec<(usize, u32)> = factors[..k].to_vec();
                if e > 1 {
                    lower.push((i, e - 1));
                }
                let left = Poly::monomial(Monomial::from_sorted(lower));
                let right = Poly::monomial(Monomial::from_sorted(factors[k + 1..].to_vec()));
                let mut c = Q::from_integer(e.into());
                if prefix_degree % 2 == 1 {
                    c = -c;
                }
                let term = self.mul(&self.mul(&left, dg), &right);
                out += &term.scale(&c);
            }
            prefix_degree += self.generators()[i].degree * e;
        }
        out
    }

    /// Generators whose differential does not square to zero.
    pub fn check_d_squared(&self) -> Vec<DSquaredViolation> {
        self.generators()
            .iter()
            .enumerate()
            .filter_map(|(i, g)| {
                let dd = self.d(&self.differential[i]);
                (!dd.is_zero()).then(|| DSquaredViolation {
                    generator: g.name.clone(),
                    value: self.format(&dd),
                })
            })
            .collect()
    }

    /// Appends generators with their differentials (given as polynomials in
    /// the enlarged algebra).
    pub fn extend(
        &self,
        generators: Vec<Generator>,
        differentials: Vec<Poly>,
    ) -> Result<Presentation, PresentationError> {
        let mut gens = self.generators().to_vec();
        gens.extend(generators);
        let algebra = FreeAlgebra::new(gens)?;
        let mut diff = self.differential.clone();
        diff.extend(differentials);
        Presentation::new(algebra, diff, self.max_degree)
    }

    /// Tensor product; the second factor's generators are appended and the
    /// truncation degree is the smaller of the two.
    pub fn tensor(&self, other: &Presentation) -> Result<Presentation, PresentationError> {
        let shift = self.len();
        let shifted: Vec<Poly> = other
            .differential
            .iter()
            .map(|p| shift_indices(p, shift))
            .collect();
        let p = self.extend(other.generators().to_vec(), shifted)?;
        Ok(p.with_max_degree(self.max_degree.min(other.max_degree)))
    }

    /// Removes nothing but reorders generators; `order[k]` is the old index of
    /// the new `k`-th generator.
    pub fn reorder(&self, order: &[usize]) -> Result<Presentation, PresentationError> {
        assert_eq!(order.len(), self.len());
        let mut new_index = vec![0; self.len()];
        for (k, &old) in order.iter().enumerate() {
            new_index[old] = k;
        }
        let gens: Vec<Generator> = order
            .iter()
            .map(|&i| self.generators()[i].clone())
            .collect();
        let algebra = FreeAlgebra::new(gens)?;
        let images: Vec<Poly> = new_index.iter().map(|&k| Poly::generator(k)).collect();
        let diff = order
            .iter()
            .map(|&i| {
                self.algebra
                    .substitute(&self.differential[i], &algebra, &images)
            })
            .collect();
        Presentation::new(algebra, diff, self.max_degree)
    }

    pub fn is_zero_differential(&self) -> bool {
        self.differential.iter().all(Poly::is_zero)
    }

    /// Largest generator degree (0 for the empty presentation).
    pub fn top_generator_degree(&self) -> u32 {
        self.generators()
            .iter()
            .map(|g| g.degree)
            .max()
            .unwrap_or(0)
    }
}

pub(crate) fn shift_indices(p: &Poly, shift: usize) -> Poly {
    p.terms()
        .map(|(m, c)| {
            let f = m.factors().iter().map(|&(i, e)| (i + shift, e)).collect();
            (Monomial::from_sorted(f), c.clone())
        })
        .collect()
}

/// Parses an expression over the generators of `algebra`.
pub(crate) fn parse_in(algebra: &FreeAlgebra, text: &str) -> Result<Poly, PresentationError> {
    let expr = dsl::parse_expression(text).map_err(|e| PresentationError::Parse {
        text: text.to_string(),
        message: e.to_string(),
    })?;
    expr.resolve_in(algebra).map_err(|e| match e {
        dsl::DslError::Semantic { message, .. } => PresentationError::Parse {
            text: text.to_string(),
            message,
        },
        other => PresentationError::Parse {
            text: text.to_string(),
            message: other.to_string(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heis() -> Presentation {
        Presentation::from_spec(&[("x", 3), ("y", 3), ("z", 5)], &[("z", "x*y")], 12).unwrap()
    }

    #[test]
    fn d_on_generators() {
        let p = heis();
        let z = p.generator_poly("z").unwrap();
        assert_eq!(p.format(&p.d(&z)), "x*y");
        let x = p.generator_poly("x").unwrap();
        assert!(p.d(&x).is_zero());
    }

    #[test]
    fn leibniz_with_odd_prefix() {
        let p = heis();
        let xz = p.parse("x*z").unwrap();
        // d(xz) = -x * xy = 0
        assert!(p.d(&xz).is_zero());
        let yz = p.parse("z*y").unwrap();
        // zy = -yz... d(yz) = -y*x*y = 0
        assert!(p.d(&yz).is_zero());
    }

    #[test]
    fn twisted_fibre_leibniz() {
        let p = Presentation::from_spec(
            &[("x", 3), ("u", 4), ("z", 2), ("z'", 3)],
            &[("z'", "z^2 - u")],
            10,
        )
        .unwrap();
        let zx = p.parse("z'*x").unwrap();
        assert_eq!(p.d(&zx), p.parse("z^2*x - u*x").unwrap());
    }

    #[test]
    fn even_power_rule() {
        let p = Presentation::from_spec(&[("a", 2), ("b", 3)], &[("b", "a^2")], 10).unwrap();
        let b = p.parse("a^3*b").unwrap();
        assert_eq!(p.format(&p.d(&b)), "a^5");
        let q = Presentation::from_spec(
            &[("a", 2), ("c", 2), ("b", 3)],
            &[("a", "0"), ("b", "a*c")],
            10,
        )
        .unwrap();
        assert!(q.d(&q.parse("a^2").unwrap()).is_zero());
    }

    #[test]
    fn d_squared_detects_violation() {
        let err = Presentation::from_spec(&[("z", 2), ("x", 3)], &[("z", "x"), ("x", "z^2")], 10)
            .unwrap_err();
        assert!(
            matches!(err, PresentationError::DSquaredNonzero { ref generator, .. } if generator == "z")
        );
    }

    #[test]
    fn rejects_inhomogeneous() {
        let err =
            Presentation::from_spec(&[("a", 2), ("b", 3)], &[("b", "a^2 + a")], 10).unwrap_err();
        assert!(matches!(err, PresentationError::Inhomogeneous { .. }));
        let err = Presentation::from_spec(&[("a", 2)], &[("q", "a")], 10).unwrap_err();
        assert_eq!(err, PresentationError::UnknownGenerator("q".into()));
    }

    #[test]
    fn zero_differential_passes() {
        let p = Presentation::from_spec(&[("a", 2), ("b", 3)], &[], 10).unwrap();
        assert!(p.check_d_squared().is_empty());
        assert!(p.is_zero_differential());
    }

    #[test]
    fn tensor_and_reorder() {
        let a = Presentation::from_spec(&[("e", 2), ("f", 3)], &[("f", "e^2")], 10).unwrap();
        let b = Presentation::from_spec(&[("g", 4), ("h", 7)], &[("h", "g^2")], 8).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.max_degree(), 8);
        assert_eq!(t.format(t.dg(3)), "g^2");
        let r = t.reorder(&[2, 0, 3, 1]).unwrap();
        assert_eq!(r.to_string(), "Λ(g:4, e:2, h:7, f:3; dh = g^2, df = e^2)");
    }

    #[test]
    fn display() {
        assert_eq!(heis().to_string(), "Λ(x:3, y:3, z:5; dz = x*y)");
    }
}
