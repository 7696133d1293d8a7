//! Integral lattices with q(x) = xᵀGx, exact positive-definiteness
//! certificates, and short-vector enumeration.

use nalgebra::DMatrix;
use rug::Rational;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gram {
    dim: usize,
    entries: Vec<i64>,
}

/// Exact LDLᵀ of a Gram matrix: q(x) = Σ dᵢ (xᵢ + Σ_{j>i} l[j][i] x_j)².
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlCertificate {
    pub d: Vec<Rational>,
    /// l[j][i] for j > i (strictly lower part, stored row-major)
    pub l: Vec<Vec<Rational>>,
}

impl Gram {
    pub fn new(dim: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "Gram matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        for i in 0..dim {
            for j in 0..i {
                if entries[i * dim + j] != entries[j * dim + i] {
                    return Err(Error::InvalidInput(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(Gram { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut e = vec![0; dim * dim];
        for i in 0..dim {
            e[i * dim + i] = 1;
        }
        Gram { dim, entries: e }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.dim + j]
    }

    pub fn q(&self, x: &[i64]) -> i64 {
        let mut s = 0i64;
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in 0..self.dim {
                s += x[i] * self.at(i, j) * x[j];
            }
        }
        s
    }

    /// Restriction to the coordinate sublattice spanned by e_i, i ∈ idx.
    pub fn restrict(&self, idx: &[usize]) -> Gram {
        let k = idx.len();
        let mut e = Vec::with_capacity(k * k);
        for &i in idx {
            for &j in idx {
                e.push(self.at(i, j));
            }
        }
        Gram { dim: k, entries: e }
    }

    fn rational_matrix(&self, shift: &Rational) -> Vec<Vec<Rational>> {
        (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let v = Rational::from(self.at(i, j));
                        if i == j {
                            v - shift
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact LDLᵀ of G − shift·I; `None` if it is not positive definite.
    pub fn ldl_shifted(&self, shift: &Rational) -> Option<LdlCertificate> {
        let n = self.dim;
        let a = self.rational_matrix(shift);
        let mut l = vec![vec![Rational::new(); n]; n];
        let mut d = vec![Rational::new(); n];
        for j in 0..n {
            let mut dj = a[j][j].clone();
            for k in 0..j {
                dj -= Rational::from(&l[j][k] * &l[j][k]) * &d[k];
            }
            if dj <= 0 {
                return None;
            }
            for i in j + 1..n {
                let mut v = a[i][j].clone();
                for k in 0..j {
                    v -= Rational::from(&l[i][k] * &l[j][k]) * &d[k];
                }
                l[i][j] = v / &dj;
            }
            d[j] = dj;
        }
        Some(LdlCertificate { d, l })
    }

    pub fn ldl(&self) -> Option<LdlCertificate> {
        self.ldl_shifted(&Rational::new())
    }

    /// Floating-point smallest eigenvalue.
    pub fn min_eigenvalue_f64(&self) -> f64 {
        if self.dim == 0 {
            return f64::INFINITY;
        }
        let m = DMatrix::from_fn(self.dim, self.dim, |i, j| self.at(i, j) as f64);
        m.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// A rational λ with G − λI certified positive definite by exact LDLᵀ,
    /// hence q(x) ≥ λ|x|² for all x.
    pub fn certified_min_eigenvalue(&self) -> Result<Rational> {
        if self.dim == 0 {
            return Ok(Rational::from(1));
        }
        let approx = self.min_eigenvalue_f64();
        if !(approx > 0.0) || self.ldl().is_none() {
            return Err(Error::InvalidInput("Gram matrix is not positive definite".into()));
        }
        let mut lam = Rational::from_f64(approx * (1.0 - 1e-6)).unwrap();
        for _ in 0..200 {
            if self.ldl_shifted(&lam).is_some() {
                return Ok(lam);
            }
            lam /= 2;
        }
        Err(Error::InsufficientPrecision {
            what: "no certified eigenvalue lower bound found".into(),
            required: 200,
        })
    }

    /// All x ∈ ℤ^dim with q(x) ≤ bound, with their q-values.
    pub fn enumerate(&self, bound: &Rational) -> Result<Vec<(Vec<i64>, i64)>> {
        let n = self.dim;
        if n == 0 {
            return Ok(if *bound >= 0 { vec![(vec![], 0)] } else { vec![] });
        }
        if *bound < 0 {
            return Ok(vec![]);
        }
        let cert = self
            .ldl()
            .ok_or_else(|| Error::InvalidInput("Gram matrix is not positive definite".into()))?;
        let d: Vec<f64> = cert.d.iter().map(|v| v.to_f64()).collect();
        let l: Vec<Vec<f64>> = cert.l.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect();
        // Fincke–Pohst in floating point with slack, then an exact filter.
        let b = bound.to_f64() * (1.0 + 1e-9) + 1e-9;
        let mut out = Vec::new();
        let mut x = vec![0i64; n];
        let bound_int = {
            let (_, fl) = bound.clone().fract_floor(rug::Integer::new());
            fl.to_i64().unwrap_or(i64::MAX)
        };
        fn rec(
            i: usize,
            rem: f64,
            x: &mut Vec<i64>,
            d: &[f64],
            l: &[Vec<f64>],
            g: &Gram,
            bound_int: i64,
            out: &mut Vec<(Vec<i64>, i64)>,
        ) {
            let n = x.len();
            let c: f64 = -(i + 1..n).map(|j| l[j][i] * x[j] as f64).sum::<f64>();
            let r = (rem.max(0.0) / d[i]).sqrt() + 1e-9;
            let lo = (c - r).ceil() as i64;
            let hi = (c + r).floor() as i64;
            for xi in lo..=hi {
                x[i] = xi;
                let t = xi as f64 - c;
                let left = rem - d[i] * t * t;
                if left < -1e-9 * (1.0 + rem.abs()) {
                    continue;
                }
                if i == 0 {
                    let q = g.q(x);
                    if q <= bound_int {
                        out.push((x.clone(), q));
                    }
                } else {
                    rec(i - 1, left, x, d, l, g, bound_int, out);
                }
            }
            x[i] = 0;
        }
        rec(n - 1, b, &mut x, &d, &l, self, bound_int, &mut out);
        out.sort();
        Ok(out)
    }
}

/// V₀ ⊆ V₁ ⊆ V as coordinate sublattices of one integral lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadLatticeTriple {
    pub gram_v: Gram,
    pub embed_v1: Vec<usize>,
    pub embed_v0: Vec<usize>,
}

impl QuadLatticeTriple {
    pub fn new(gram_v: Gram, embed_v1: Vec<usize>, embed_v0: Vec<usize>) -> Result<Self> {
        let d = gram_v.dim();
        let check_idx = |idx: &[usize], name: &str| -> Result<()> {
            let mut s = idx.to_vec();
            s.sort();
            s.dedup();
            if s.len() != idx.len() || idx.iter().any(|&i| i >= d) {
                return Err(Error::InvalidInput(format!("{name}: indices must be distinct and < {d}")));
            }
            Ok(())
        };
        check_idx(&embed_v1, "embed_V1")?;
        check_idx(&embed_v0, "embed_V0")?;
        if !embed_v0.iter().all(|i| embed_v1.contains(i)) {
            return Err(Error::InvalidInput("V₀ must be contained in V₁".into()));
        }
        for (name, k) in [("V", d), ("V₁", embed_v1.len()), ("V₀", embed_v0.len())] {
            if k % 2 != 0 {
                return Err(Error::InvalidInput(format!("{name} has odd rank {k}; all spaces must be even-dimensional")));
            }
        }
        if d == 0 || embed_v1.is_empty() {
            return Err(Error::InvalidInput("V and V₁ must be nonzero".into()));
        }
        let t = QuadLatticeTriple { gram_v, embed_v1, embed_v0 };
        for g in [&t.gram_v, &t.gram_v1(), &t.gram_v0()] {
            if g.dim() > 0 && g.ldl().is_none() {
                return Err(Error::InvalidInput("quadratic form is not positive definite".into()));
            }
        }
        Ok(t)
    }

    /// (d₀, d₁, d)
    pub fn ranks(&self) -> (usize, usize, usize) {
        (self.embed_v0.len(), self.embed_v1.len(), self.gram_v.dim())
    }

    pub fn gram_v1(&self) -> Gram {
        self.gram_v.restrict(&self.embed_v1)
    }

    pub fn gram_v0(&self) -> Gram {
        self.gram_v.restrict(&self.embed_v0)
    }

    /// Positions within V₁-coordinates of the V₀ basis vectors.
    pub fn v0_in_v1(&self) -> Vec<usize> {
        self.embed_v0
            .iter()
            .map(|i| self.embed_v1.iter().position(|j| j == i).unwrap())
            .collect()
    }

    /// Whether a V₁-coordinate vector lies in V₀.
    pub fn in_v0(&self, x_v1: &[i64]) -> bool {
        let inner = self.v0_in_v1();
        !self.embed_v0.is_empty() && x_v1.iter().enumerate().all(|(i, &c)| c == 0 || inner.contains(&i))
    }

    /// V₁-coordinates to V-coordinates.
    pub fn embed(&self, x_v1: &[i64]) -> Vec<i64> {
        let mut x = vec![0; self.gram_v.dim()];
        for (k, &i) in self.embed_v1.iter().enumerate() {
            x[i] = x_v1[k];
        }
        x
    }
}
