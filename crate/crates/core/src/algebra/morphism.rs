use thiserror::Error;

use super::poly::Poly;
use super::presentation::Presentation;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MorphismError {
    #[error("expected {expected} generator images, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("image of `{generator}` has degree {found:?}, expected {expected}")]
    DegreeMismatch {
        generator: String,
        expected: u32,
        found: Option<u32>,
    },
    #[error("not a chain map at `{}`: f(dx) = {}, d(fx) = {}", .0.generator, .0.f_of_d, .0.d_of_f)]
    NotChainMap(ChainViolation),
    #[error("generator `{0}` has no counterpart in the target")]
    Missing(String),
}

/// A generator at which `f ∘ d ≠ d ∘ f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainViolation {
    pub generator: String,
    pub f_of_d: String,
    pub d_of_f: String,
}

/// An algebra morphism of free CDGAs, determined by its values on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    source: Presentation,
    target: Presentation,
    images: Vec<Poly>,
}

impl Morphism {
    /// A degree-preserving algebra map; the chain property is not checked.
    pub fn new(
        source: Presentation,
        target: Presentation,
        images: Vec<Poly>,
    ) -> Result<Self, MorphismError> {
        if images.len() != source.len() {
            return Err(MorphismError::Arity {
                expected: source.len(),
                got: images.len(),
            });
        }
        for (g, img) in source.generators().iter().zip(&images) {
            if img.is_zero() {
                continue;
            }
            let found = target.degree(img);
            if found != Some(g.degree) {
                return Err(MorphismError::DegreeMismatch {
                    generator: g.name.clone(),
                    expected: g.degree,
                    found,
                });
            }
        }
        Ok(Morphism {
            source,
            target,
            images,
        })
    }

    /// Like [`Morphism::new`] but also requires `d ∘ f = f ∘ d` on generators.
    pub fn chain_map(
        source: Presentation,
        target: Presentation,
        images: Vec<Poly>,
    ) -> Result<Self, MorphismError> {
        let f = Self::new(source, target, images)?;
        match f.chain_violations().into_iter().next() {
            Some(v) => Err(MorphismError::NotChainMap(v)),
            None => Ok(f),
        }
    }

    pub fn identity(p: &Presentation) -> Self {
        let images = (0..p.len()).map(Poly::generator).collect();
        Morphism {
            source: p.clone(),
            target: p.clone(),
            images,
        }
    }

    /// Sends each source generator to the target generator of the same name.
    pub fn inclusion(source: &Presentation, target: &Presentation) -> Result<Self, MorphismError> {
        let images = source
            .generators()
            .iter()
            .map(|g| {
                target
                    .generator_poly(&g.name)
                    .ok_or_else(|| MorphismError::Missing(g.name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::chain_map(source.clone(), target.clone(), images)
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    pub fn apply(&self, p: &Poly) -> Poly {
        self.source
            .algebra()
            .substitute(p, self.target.algebra(), &self.images)
    }

    pub fn chain_violations(&self) -> Vec<ChainViolation> {
        let mut out = Vec::new();
        for (i, g) in self.source.generators().iter().enumerate() {
            let f_of_d = self.apply(self.source.dg(i));
            let d_of_f = self.target.d(&self.images[i]);
            if f_of_d != d_of_f {
                out.push(ChainViolation {
                    generator: g.name.clone(),
                    f_of_d: self.target.format(&f_of_d),
                    d_of_f: self.target.format(&d_of_f),
                });
            }
        }
        out
    }

    pub fn is_chain_map(&self) -> bool {
        self.chain_violations().is_empty()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Morphism) -> Morphism {
        assert_eq!(self.target.generators(), other.source.generators());
        Morphism {
            source: self.source.clone(),
            target: other.target.clone(),
            images: self.images.iter().map(|p| other.apply(p)).collect(),
        }
    }

    /// Human-readable `name ↦ image` lines.
    pub fn describe(&self) -> Vec<(String, String)> {
        self.source
            .generators()
            .iter()
            .zip(&self.images)
            .map(|(g, p)| (g.name.clone(), self.target.format(p)))
            .collect()
    }
}
