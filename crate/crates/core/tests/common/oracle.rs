//! Brute-force Betti numbers, written without the library's algebra code.
//!
//! Monomials are exponent vectors. Products use the inversion count of odd
//! generators for the Koszul sign, the differential is expanded factor by
//! factor, and ranks come from a plain rational Gaussian elimination.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Exps = Vec<u32>;
type Elem = BTreeMap<Exps, BigRational>;

pub struct Oracle {
    degrees: Vec<u32>,
    differentials: Vec<Elem>,
}

impl Oracle {
    /// `differentials[i]` lists `(coefficient, exponent vector)` terms of `d(x_i)`.
    pub fn new(degrees: Vec<u32>, differentials: Vec<Vec<(BigRational, Exps)>>) -> Self {
        let differentials = differentials
            .into_iter()
            .map(|terms| {
                let mut e = Elem::new();
                for (c, m) in terms {
                    add(&mut e, m, c);
                }
                e
            })
            .collect();
        Oracle {
            degrees,
            differentials,
        }
    }

    /// Reads degrees and differentials off a presentation's raw data.
    pub fn from_presentation(p: &cdga::algebra::Presentation) -> Self {
        let n = p.len();
        let degrees = p.generators().iter().map(|g| g.degree).collect();
        let diffs = p
            .differentials()
            .iter()
            .map(|d| {
                d.terms()
                    .map(|(m, c)| {
                        let mut e = vec![0; n];
                        for &(i, k) in m.factors() {
                            e[i] = k;
                        }
                        (c.clone(), e)
                    })
                    .collect()
            })
            .collect();
        Oracle::new(degrees, diffs)
    }

    fn odd(&self, i: usize) -> bool {
        self.degrees[i] % 2 == 1
    }

    fn degree(&self, m: &Exps) -> u32 {
        m.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// All exponent vectors of total degree `k`.
    pub fn basis(&self, k: u32) -> Vec<Exps> {
        let mut out = Vec::new();
        let mut cur = vec![0; self.degrees.len()];
        self.fill(0, k, &mut cur, &mut out);
        out
    }

    fn fill(&self, i: usize, left: u32, cur: &mut Exps, out: &mut Vec<Exps>) {
        if i == self.degrees.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let d = self.degrees[i];
        let max = if self.odd(i) { 1 } else { left / d };
        for e in 0..=max {
            if e * d > left {
                break;
            }
            cur[i] = e;
            self.fill(i + 1, left - e * d, cur, out);
        }
        cur[i] = 0;
    }

    /// Product of two monomials with its Koszul sign, or `None` if it vanishes.
    fn mul_mono(&self, a: &Exps, b: &Exps) -> Option<(bool, Exps)> {
        let mut inversions = 0u32;
        for (i, &ea) in a.iter().enumerate() {
            if ea == 0 || !self.odd(i) {
                continue;
            }
            if b[i] > 0 {
                return None;
            }
            // odd factors of b with a smaller index must move past this one
            inversions += (0..i).filter(|&j| self.odd(j) && b[j] > 0).count() as u32;
        }
        let m = a.iter().zip(b).map(|(x, y)| x + y).collect();
        Some((inversions % 2 == 1, m))
    }

    fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        let mut out = Elem::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                if let Some((neg, m)) = self.mul_mono(ma, mb) {
                    let c = ca * cb;
                    add(&mut out, m, if neg { -c } else { c });
                }
            }
        }
        out
    }

    /// `d` of the monomial `x_0^{e_0} ⋯ x_{n−1}^{e_{n−1}}`, factor by factor.
    fn d_mono(&self, m: &Exps) -> Elem {
        let n = m.len();
        let mut out = Elem::new();
        let mut prefix_degree = 0;
        for i in 0..n {
            let e = m[i];
            if e == 0 {
                continue;
            }
            let sign = if prefix_degree % 2 == 1 {
                -BigRational::one()
            } else {
                BigRational::one()
            };
            let coeff = sign * BigRational::from_integer(BigInt::from(e));
            let single = |x: Exps| {
                let mut el = Elem::new();
                el.insert(x, BigRational::one());
                el
            };
            // x_i^{e−1} commutes with d(x_i) when x_i is even; e = 1 otherwise.
            let mut pre_pow = vec![0; n];
            pre_pow[..i].copy_from_slice(&m[..i]);
            pre_pow[i] = e - 1;
            let mut suffix = vec![0; n];
            suffix[i + 1..].copy_from_slice(&m[i + 1..]);
            let t = self.mul(
                &self.mul(&single(pre_pow), &self.differentials[i]),
                &single(suffix),
            );
            for (mm, c) in t {
                add(&mut out, mm, &coeff * c);
            }
            prefix_degree += self.degrees[i] * e;
        }
        out
    }

    fn rank_of_d(&self, k: u32) -> usize {
        let src = self.basis(k);
        let tgt = self.basis(k + 1);
        let index: BTreeMap<&Exps, usize> = tgt.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for m in &src {
            let mut row = vec![BigRational::zero(); tgt.len()];
            for (mm, c) in self.d_mono(m) {
                debug_assert_eq!(self.degree(&mm), k + 1);
                row[index[&mm]] += c;
            }
            rows.push(row);
        }
        rank(rows)
    }

    /// `b_0, …, b_top`.
    pub fn betti(&self, top: u32) -> Vec<usize> {
        let ranks: Vec<usize> = (0..=top).map(|k| self.rank_of_d(k)).collect();
        (0..=top)
            .map(|k| {
                let dim = self.basis(k).len();
                let incoming = if k == 0 { 0 } else { ranks[k as usize - 1] };
                dim - ranks[k as usize] - incoming
            })
            .collect()
    }
}

fn add(e: &mut Elem, m: Exps, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let slot = e.entry(m.clone()).or_insert_with(BigRational::zero);
    *slot += c;
    if slot.is_zero() {
        e.remove(&m);
    }
}

fn rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    r
}
