//! Brute-force reference computations over prime fields, written against
//! plain integer arithmetic and sharing no code with the library.

#![allow(dead_code)]

use std::collections::BTreeSet;

/// `phi(x) = sum_{i <= j} q[i][j] x_i x_j` over GF(p).
pub struct NaiveQuadric {
    pub p: u64,
    pub d: usize,
    pub q: Vec<Vec<u64>>,
}

impl NaiveQuadric {
    pub fn from_terms(p: u64, d: usize, terms: &[(usize, usize, u64)]) -> Self {
        let mut q = vec![vec![0; d]; d];
        for &(i, j, c) in terms {
            q[i.min(j)][i.max(j)] = (q[i.min(j)][i.max(j)] + c) % p;
        }
        NaiveQuadric { p, d, q }
    }

    pub fn eval(&self, v: &[u64]) -> u64 {
        let mut s = 0;
        for i in 0..self.d {
            for j in i..self.d {
                s += self.q[i][j] * v[i] * v[j];
            }
        }
        s % self.p
    }

    pub fn polar(&self, x: &[u64], y: &[u64]) -> u64 {
        let sum: Vec<u64> = x.iter().zip(y).map(|(a, b)| (a + b) % self.p).collect();
        (self.eval(&sum) + 2 * self.p - self.eval(x) - self.eval(y)) % self.p
    }

    /// Every projective point with first nonzero coordinate 1 and `phi = 0`,
    /// found by scanning all of `GF(p)^d`.
    pub fn singular_points(&self) -> Vec<Vec<u64>> {
        let total = self.p.pow(self.d as u32);
        let mut out = Vec::new();
        for idx in 1..total {
            let mut v = vec![0; self.d];
            let mut n = idx;
            for slot in v.iter_mut() {
                *slot = n % self.p;
                n /= self.p;
            }
            if v.iter().find(|&&x| x != 0) == Some(&1) && self.eval(&v) == 0 {
                out.push(v);
            }
        }
        out
    }
}

/// Collinearity graph of a small polar space as bit masks (at most 64 points).
pub struct NaiveGeometry {
    pub points: Vec<Vec<u64>>,
    /// `perp[i]` includes `i` itself.
    pub perp: Vec<u64>,
}

impl NaiveGeometry {
    pub fn new(form: &NaiveQuadric) -> Self {
        let points = form.singular_points();
        assert!(points.len() <= 64, "oracle handles at most 64 points");
        let perp = points
            .iter()
            .map(|a| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| form.polar(a, b) == 0)
                    .fold(0u64, |m, (j, _)| m | 1 << j)
            })
            .collect();
        NaiveGeometry { points, perp }
    }

    pub fn all(&self) -> u64 {
        if self.points.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.points.len()) - 1
        }
    }

    pub fn perp_of(&self, set: u64) -> u64 {
        (0..self.points.len())
            .filter(|&i| set >> i & 1 == 1)
            .fold(self.all(), |m, i| m & self.perp[i])
    }

    pub fn non_collinear_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.points.len();
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.perp[a] >> b & 1 == 0)
            .collect()
    }

    /// Sizes of all double perps of non-collinear pairs.
    pub fn hyperbolic_line_sizes(&self) -> BTreeSet<u32> {
        self.non_collinear_pairs()
            .into_iter()
            .map(|(a, b)| self.perp_of(self.perp_of(1 << a | 1 << b)).count_ones())
            .collect()
    }

    /// Maximal cliques of the collinearity graph restricted to `within`
    /// (Bron-Kerbosch with pivoting).
    pub fn maximal_cliques(&self, within: u64) -> Vec<u64> {
        let mut out = Vec::new();
        self.bron_kerbosch(0, within, 0, &mut out);
        out
    }

    fn bron_kerbosch(&self, r: u64, mut p: u64, mut x: u64, out: &mut Vec<u64>) {
        if p == 0 && x == 0 {
            out.push(r);
            return;
        }
        let nbr = |v: usize| self.perp[v] & !(1u64 << v);
        let pivot = (p | x).trailing_zeros() as usize;
        let mut candidates = p & !nbr(pivot);
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            self.bron_kerbosch(r | 1 << v, p & nbr(v), x & nbr(v), out);
            p &= !(1u64 << v);
            x |= 1 << v;
        }
    }

    /// Condition (A) straight from its statement.
    pub fn condition_a(&self) -> bool {
        let ms = self.maximal_cliques(self.all());
        self.non_collinear_pairs().into_iter().all(|(a, b)| {
            let perp_ab = self.perp_of(1 << a | 1 << b);
            let hyp = self.perp_of(perp_ab);
            let ns = if perp_ab == 0 { vec![0] } else { self.maximal_cliques(perp_ab) };
            ns.iter()
                .all(|&n| ms.iter().filter(|&&m| m & n == n).all(|&m| m & hyp != 0))
        })
    }

    pub fn is_maximal_clique_in(&self, set: u64, within: u64) -> bool {
        let pairwise = (0..self.points.len())
            .filter(|&i| set >> i & 1 == 1)
            .all(|i| self.perp[i] & set == set);
        pairwise && self.perp_of(set) & within & !set == 0
    }
}
