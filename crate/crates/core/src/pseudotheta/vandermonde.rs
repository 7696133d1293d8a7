//! Separation of the powers of ρδ by the elements g_N = [[1, 0], [N, 1]]:
//! Σ_k (ρδ)(g_N)^k f_k = 0 for n + 1 distinct N forces every f_k = 0, since
//! (ρδ)(g_N) = (1 + iN)^{−1} are distinct nodes of a Vandermonde system.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rug::Float;

use super::group::{iwasawa, GL2RealElement};
use crate::error::{Error, Result};
use crate::numerics::real::bits_for;
use crate::numerics::BigComplex;

#[derive(Clone, Debug)]
pub struct SeparationReport {
    pub n_values: Vec<i64>,
    /// (ρδ)(g_N) from the Iwasawa decomposition
    pub nodes: Vec<BigComplex>,
    /// max_N |(ρδ)(g_N) − (1 + iN)^{−1}|
    pub iwasawa_error: Float,
    pub condition_number: f64,
    /// max_N |Σ_k f_k z_N^k|
    pub residual: Float,
    /// the homogeneous system has only the zero solution
    pub zero_only: bool,
    /// the sampled f_k solve the homogeneous system (to working precision)
    pub consistent: bool,
}

pub fn gn_separation_demo(n_values: &[i64], fk: &[BigComplex], digits: u32) -> Result<SeparationReport> {
    if fk.is_empty() {
        return Err(Error::InvalidInput("need at least one coefficient f_k".into()));
    }
    let mut sorted = n_values.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n_values.len() {
        return Err(Error::Domain("repeated N: the Vandermonde system is singular".into()));
    }
    if n_values.len() < fk.len() {
        return Err(Error::InvalidInput(format!(
            "{} coefficients need at least {} distinct N",
            fk.len(),
            fk.len()
        )));
    }
    let bits = bits_for(digits);
    let mut nodes = Vec::new();
    let mut iw_err = Float::with_val(bits, 0);
    for &n in n_values {
        let z = iwasawa(&GL2RealElement::g_n(n, digits))?.rho_delta();
        let expect = BigComplex::new(Float::with_val(bits, 1), Float::with_val(bits, n), digits).recip();
        let e = z.sub_ref(&expect).abs();
        if e > iw_err {
            iw_err = e;
        }
        nodes.push(z);
    }
    let mut residual = Float::with_val(bits, 0);
    for z in &nodes {
        let mut acc = BigComplex::zero(digits);
        let mut zk = BigComplex::one(digits);
        for f in fk {
            acc = acc.add_ref(&zk.mul_ref(f));
            zk = zk.mul_ref(z);
        }
        let r = acc.abs();
        if r > residual {
            residual = r;
        }
    }
    let m = DMatrix::from_fn(nodes.len(), fk.len(), |i, k| {
        let z = Complex64::new(nodes[i].re.to_f64(), nodes[i].im.to_f64());
        z.powi(k as i32)
    });
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let fscale = fk.iter().map(|f| f.abs().to_f64()).fold(0.0, f64::max).max(1.0);
    let tol = Float::with_val(bits, 10).pow_neg_i(digits as i32 - 6) * fscale;
    Ok(SeparationReport {
        n_values: n_values.to_vec(),
        nodes,
        iwasawa_error: iw_err,
        condition_number: smax / smin,
        zero_only: smin > 0.0,
        consistent: residual <= tol,
        residual,
    })
}

trait PowNegI {
    fn pow_neg_i(self, k: i32) -> Float;
}

impl PowNegI for Float {
    fn pow_neg_i(self, k: i32) -> Float {
        use rug::ops::Pow;
        self.pow(-k)
    }
}
