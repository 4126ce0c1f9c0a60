use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::{One, Signed};

use super::poly::{Monomial, Poly};
use super::PresentationError;
use crate::qlinalg::Q;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: u32,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// Identifier syntax shared by generator names and the DSL: a letter or
/// underscore, then letters, digits or underscores, then optional primes.
pub fn is_identifier(s: &str) -> bool {
    let body = s.trim_end_matches('\'');
    let mut chars = body.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// The free graded-commutative algebra on an ordered list of generators:
/// polynomial on the even ones, exterior on the odd ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebra {
    generators: Vec<Generator>,
    by_name: HashMap<String, usize>,
}

impl FreeAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Self, PresentationError> {
        let mut by_name = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(PresentationError::BadName(g.name.clone()));
            }
            if g.degree == 0 {
                return Err(PresentationError::ZeroDegree(g.name.clone()));
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(PresentationError::DuplicateName(g.name.clone()));
            }
        }
        Ok(FreeAlgebra {
            generators,
            by_name,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, index: usize) -> &Generator {
        &self.generators[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    fn is_odd(&self, index: usize) -> bool {
        self.generators[index].is_odd()
    }

    pub fn monomial_degree(&self, m: &Monomial) -> u32 {
        m.factors()
            .iter()
            .map(|&(i, e)| self.generators[i].degree * e)
            .sum()
    }

    /// Degree of a homogeneous polynomial; `None` for zero or mixed degrees.
    pub fn degree(&self, p: &Poly) -> Option<u32> {
        let mut degrees = p.monomials().map(|m| self.monomial_degree(m));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    /// Sorts an arbitrary product of generator powers into canonical form.
    /// Returns the Koszul sign (`0` when the product vanishes because an odd
    /// generator occurs twice) and the canonical monomial.
    pub fn normalize(&self, factors: &[(usize, u32)]) -> (i8, Monomial) {
        let mut fs: Vec<(usize, u32)> = factors.iter().copied().filter(|&(_, e)| e > 0).collect();
        let odd = |f: &(usize, u32)| self.is_odd(f.0) && f.1 % 2 == 1;
        if fs.iter().any(|&(i, e)| self.is_odd(i) && e > 1) {
            return (0, Monomial::one());
        }
        let mut sign: i8 = 1;
        for i in 1..fs.len() {
            let mut j = i;
            while j > 0 && fs[j - 1].0 > fs[j].0 {
                if odd(&fs[j - 1]) && odd(&fs[j]) {
                    sign = -sign;
                }
                fs.swap(j - 1, j);
                j -= 1;
            }
        }
        let mut merged: Vec<(usize, u32)> = Vec::with_capacity(fs.len());
        for (i, e) in fs {
            match merged.last_mut() {
                Some(last) if last.0 == i => {
                    if self.is_odd(i) {
                        return (0, Monomial::one());
                    }
                    last.1 += e;
                }
                _ => merged.push((i, e)),
            }
        }
        (sign, Monomial::from_sorted(merged))
    }

    /// Product of two canonical monomials: `None` if it vanishes, else
    /// `(negated, monomial)`.
    pub fn mul_monomials(&self, a: &Monomial, b: &Monomial) -> Option<(bool, Monomial)> {
        let (fa, fb) = (a.factors(), b.factors());
        let mut out = Vec::with_capacity(fa.len() + fb.len());
        let mut remaining_odd_a = fa.iter().filter(|&&(i, _)| self.is_odd(i)).count();
        let mut negated = false;
        let (mut i, mut j) = (0, 0);
        while i < fa.len() && j < fb.len() {
            let (ia, ea) = fa[i];
            let (ib, eb) = fb[j];
            if ia < ib {
                out.push((ia, ea));
                if self.is_odd(ia) {
                    remaining_odd_a -= 1;
                }
                i += 1;
            } else if ib < ia {
                out.push((ib, eb));
                if self.is_odd(ib) && remaining_odd_a % 2 == 1 {
                    negated = !negated;
                }
                j += 1;
            } else {
                if self.is_odd(ia) {
                    return None;
                }
                out.push((ia, ea + eb));
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&fa[i..]);
        out.extend_from_slice(&fb[j..]);
        Some((negated, Monomial::from_sorted(out)))
    }

    pub fn mul(&self, p: &Poly, q: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (ma, ca) in p.terms() {
            for (mb, cb) in q.terms() {
                if let Some((neg, m)) = self.mul_monomials(ma, mb) {
                    let c = ca * cb;
                    out.add_term(m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    pub fn pow(&self, p: &Poly, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = self.mul(&acc, p);
        }
        acc
    }

    /// All canonical monomials of total degree `k`, sorted.
    pub fn basis_of_degree(&self, k: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.enumerate(0, k, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(
        &self,
        start: usize,
        remaining: u32,
        current: &mut Vec<(usize, u32)>,
        out: &mut Vec<Monomial>,
    ) {
        if remaining == 0 {
            out.push(Monomial::from_sorted(current.clone()));
            return;
        }
        for i in start..self.generators.len() {
            let d = self.generators[i].degree;
            if d > remaining {
                continue;
            }
            let max_e = if self.is_odd(i) { 1 } else { remaining / d };
            for e in 1..=max_e {
                current.push((i, e));
                self.enumerate(i + 1, remaining - d * e, current, out);
                current.pop();
            }
        }
    }

    /// Membership in the decomposables: every term has word length at least two.
    pub fn is_decomposable(&self, p: &Poly) -> bool {
        p.monomials().all(|m| m.word_length() >= 2)
    }

    /// The word-length-one part of `p`.
    pub fn linear_part(&self, p: &Poly) -> Poly {
        p.filter(|m| m.word_length() == 1)
    }

    /// Applies the algebra map sending generator `i` to `images[i]` (a
    /// polynomial in `target`).
    pub fn substitute(&self, p: &Poly, target: &FreeAlgebra, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.generators.len());
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut acc = Poly::constant(c.clone());
            for &(i, e) in m.factors() {
                for _ in 0..e {
                    acc = target.mul(&acc, &images[i]);
                }
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        if m.is_one() {
            return "1".to_string();
        }
        let mut s = String::new();
        for (k, &(i, e)) in m.factors().iter().enumerate() {
            if k > 0 {
                s.push('*');
            }
            s.push_str(&self.generators[i].name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        s
    }

    /// Canonical text form, e.g. `b*c + u*y` or `-1/2*x^2`.
    pub fn format(&self, p: &Poly) -> String {
        format_terms(p.terms().map(|(m, c)| (self.format_monomial(m), c.clone())))
    }
}

/// Joins `(monomial text, coefficient)` pairs into `a - 2*b + 1/3*c` form.
pub fn format_terms(terms: impl IntoIterator<Item = (String, Q)>) -> String {
    let mut s = String::new();
    for (k, (mono, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if negative {
                s.push('-');
            }
        } else {
            s.push_str(if negative { " - " } else { " + " });
        }
        if mono == "1" {
            let _ = write!(s, "{abs}");
        } else if abs.is_one() {
            s.push_str(&mono);
        } else {
            let _ = write!(s, "{abs}*{mono}");
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlinalg::q;

    fn alg(gens: &[(&str, u32)]) -> FreeAlgebra {
        FreeAlgebra::new(gens.iter().map(|&(n, d)| Generator::new(n, d)).collect()).unwrap()
    }

    #[test]
    fn normalize_odd_transposition() {
        let a = alg(&[("x", 3), ("y", 3)]);
        let (s, m) = a.normalize(&[(1, 1), (0, 1)]);
        assert_eq!(s, -1);
        assert_eq!(m, Monomial::from_sorted(vec![(0, 1), (1, 1)]));
    }

    #[test]
    fn normalize_odd_square_vanishes() {
        let a = alg(&[("x", 3)]);
        assert_eq!(a.normalize(&[(0, 1), (0, 1)]).0, 0);
        assert_eq!(a.normalize(&[(0, 2)]).0, 0);
    }

    #[test]
    fn normalize_even_is_central() {
        let a = alg(&[("a", 2), ("b", 3)]);
        let (s, m) = a.normalize(&[(1, 1), (0, 1)]);
        assert_eq!(s, 1);
        assert_eq!(a.format_monomial(&m), "a*b");
    }

    #[test]
    fn normalize_is_idempotent_on_canonical() {
        let a = alg(&[("a", 2), ("b", 3), ("c", 5)]);
        let m = Monomial::from_sorted(vec![(0, 3), (1, 1), (2, 1)]);
        assert_eq!(a.normalize(m.factors()), (1, m));
    }

    #[test]
    fn anticommuting_odd_generators() {
        let a = alg(&[("x", 3), ("y", 3)]);
        let (x, y) = (Poly::generator(0), Poly::generator(1));
        assert!((&a.mul(&x, &y) + &a.mul(&y, &x)).is_zero());
        assert_eq!(a.mul(&x, &Poly::one()), x);
    }

    #[test]
    fn telescoping_product() {
        let a = alg(&[("u", 4), ("z", 2)]);
        let (u, z) = (Poly::generator(0), Poly::generator(1));
        let twist = &a.pow(&z, 2) - &u;
        for j in 0..4 {
            let lhs = a.mul(&twist, &a.pow(&z, j));
            let rhs = &a.pow(&z, j + 2) - &a.mul(&u, &a.pow(&z, j));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bases() {
        let a = alg(&[("e", 2), ("f", 3)]);
        let b5: Vec<String> = a
            .basis_of_degree(5)
            .iter()
            .map(|m| a.format_monomial(m))
            .collect();
        assert_eq!(b5, vec!["e*f"]);
        assert_eq!(a.basis_of_degree(0), vec![Monomial::one()]);
        let h = alg(&[("x", 3), ("y", 3), ("z", 5)]);
        let b8: Vec<String> = h
            .basis_of_degree(8)
            .iter()
            .map(|m| h.format_monomial(m))
            .collect();
        assert_eq!(b8, vec!["x*z", "y*z"]);
    }

    #[test]
    fn decomposability() {
        let a = alg(&[("b", 3), ("c", 4), ("u", 7)]);
        let (b, c, u) = (Poly::generator(0), Poly::generator(1), Poly::generator(2));
        assert!(!a.is_decomposable(&u));
        let bc = a.mul(&b, &c);
        assert!(a.is_decomposable(&bc));
        assert!(!a.is_decomposable(&(&u + &bc)));
    }

    #[test]
    fn formatting() {
        let a = alg(&[("x", 2), ("y", 2)]);
        let p: Poly = [
            (
                Monomial::from_sorted(vec![(0, 2)]),
                crate::qlinalg::qf(-1, 2),
            ),
            (Monomial::from_sorted(vec![(1, 1)]), q(3)),
            (Monomial::one(), q(-1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(a.format(&p), "-1 - 1/2*x^2 + 3*y");
        assert_eq!(a.format(&Poly::zero()), "0");
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(FreeAlgebra::new(vec![Generator::new("x", 0)]).is_err());
        assert!(FreeAlgebra::new(vec![Generator::new("x", 2), Generator::new("x", 3)]).is_err());
        assert!(FreeAlgebra::new(vec![Generator::new("2x", 2)]).is_err());
        assert!(is_identifier("z'"));
    }
}
