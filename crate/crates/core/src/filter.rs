//! Candidate filters: the PSD-test in both of its forms, and subgroup
//! compression of complementary functions.
//!
//! A block `X` can belong to a family with parameter `n` only if the power
//! spectral density of its sign function stays below `4n` at every
//! nontrivial character. [`psd_test`] checks that directly; [`phi_test`]
//! checks the equivalent integer form `dft_Phi(chi) <= n` built from the
//! norm `N(X)`. Compression folds a function down a quotient `G/M`, shrinking
//! the search domain while preserving complementarity with rescaled
//! constants; [`compression_tuple_test`] uses that as a cheap rejection
//! filter for candidate tuples.

use num_complex::Complex64;

use crate::algebra::{embed_subset, paf_function, Coeff, GFunction};
use crate::error::{Error, Result};
use crate::family::associated_function;
use crate::fourier::{char_eval, dft, psd_int};
use crate::group::{Element, GroupSpec, QuotientPresentation};

/// Quantization quantum used when hashing PSD fingerprints.
pub const FINGERPRINT_QUANTUM: f64 = 1e-6;

/// Default tolerance for the PSD-test.
pub const PSD_TEST_TOL: f64 = 1e-6;

/// PSD values of a block's sign function over the `v - 1` nontrivial
/// characters, in enumeration order. Translation-invariant, so it can serve
/// as a hash key for translation classes once quantized.
#[derive(Debug, Clone)]
pub struct PsdFingerprint {
    group: GroupSpec,
    values: Vec<f64>,
}

impl PsdFingerprint {
    pub fn of_block(group: &GroupSpec, block: &[Element]) -> Result<Self> {
        let f = associated_function(group, block)?;
        let full = psd_int(&f);
        Ok(PsdFingerprint { group: group.clone(), values: full[1..].to_vec() })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rounds to the fixed quantum; two fingerprints of blocks in the same
    /// translation class quantize identically.
    pub fn quantized(&self) -> Vec<i64> {
        self.values.iter().map(|&x| (x / FINGERPRINT_QUANTUM).round() as i64).collect()
    }

    /// Key of the complementary fingerprint: the quantization of
    /// `target - values`, used to probe the hash join.
    pub fn complement_key(&self, target: f64) -> Vec<i64> {
        self.values.iter().map(|&x| ((target - x) / FINGERPRINT_QUANTUM).round() as i64).collect()
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(0.0, f64::max)
    }
}

/// Passes iff `psd_{f_X}(chi) <= 4n + tol` at every nontrivial character.
pub fn psd_test(group: &GroupSpec, block: &[Element], n: i64, tol: f64) -> Result<bool> {
    let fp = PsdFingerprint::of_block(group, block)?;
    Ok(fp.max_value() <= 4.0 * n as f64 + tol)
}

/// The integer coefficient function of `N(X)`: `N(X) = sum Phi_X(x) x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiFunction {
    group: GroupSpec,
    values: Vec<i64>,
}

impl PhiFunction {
    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, x: &Element) -> Result<i64> {
        Ok(self.values[self.group.index_of(x)?])
    }
}

/// Computes `Phi_X` exactly from the group-algebra norm.
pub fn phi(group: &GroupSpec, block: &[Element]) -> Result<PhiFunction> {
    let n = embed_subset(group, block)?.norm();
    let mut values = vec![0i64; group.order()];
    for (x, &c) in n.terms() {
        values[group.index_unchecked(x)] = c;
    }
    Ok(PhiFunction { group: group.clone(), values })
}

/// The alternative form of the PSD-test:
/// `sum_{x != e} Phi_X(x) Re chi(x) <= n - k` for every nontrivial character.
pub fn phi_test(group: &GroupSpec, block: &[Element], n: i64, tol: f64) -> Result<bool> {
    let ph = phi(group, block)?;
    let k = block.len() as i64;
    let elems = group.enumerate();
    for j in &elems[1..] {
        let mut lhs = 0.0f64;
        for (x, &c) in elems.iter().zip(ph.values()).skip(1) {
            if c != 0 {
                lhs += c as f64 * char_eval(group, j, x)?.re;
            }
        }
        if lhs > (n - k) as f64 + tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// M-compression: `f^M(xM) = sum_{z in M} f(xz)`, i.e. the sum of `f` over
/// each fiber of the projection.
pub fn compress<C: Coeff>(f: &GFunction<C>, q: &QuotientPresentation) -> Result<GFunction<C>> {
    if f.group() != q.parent() {
        return Err(Error::GroupMismatch);
    }
    let d = q.quotient().order();
    let mut out = vec![C::zero(); d];
    for i in 0..f.group().order() {
        let t = q.project_idx(i);
        out[t] = out[t].clone() + f.value_at_index(i).clone();
    }
    GFunction::from_values(q.quotient(), out)
}

/// Checks that the compressions of a candidate tuple are complementary on
/// `G/M` with the rescaled constants
/// `alpha0^M = alpha0 + (m-1) alpha`, `alpha^M = m alpha`.
///
/// `alpha0`/`alpha` are the PAF constants the tuple is supposed to have
/// (e.g. from [`crate::family::ParameterSet::paf_constants`]); the check is
/// exact integer arithmetic. A rejection here rules the tuple out at cost
/// `O(d^2)` instead of `O(v^2)`.
pub fn compression_tuple_test(
    fs: &[GFunction<i64>],
    q: &QuotientPresentation,
    alpha0: i64,
    alpha: i64,
) -> Result<bool> {
    if fs.is_empty() {
        return Err(Error::InvalidParams("need at least one function".into()));
    }
    let d = q.quotient().order();
    let m = q.subgroup().order() as i64;
    let mut total = vec![0i64; d];
    for f in fs {
        let c = compress(f, q)?;
        for (i, p) in paf_function(&c).values().iter().enumerate() {
            total[i] += p;
        }
    }
    let alpha0_m = alpha0 + (m - 1) * alpha;
    let alpha_m = m * alpha;
    if total[0] != alpha0_m {
        return Ok(false);
    }
    Ok(total[1..].iter().all(|&c| c == alpha_m))
}

/// Verifies the dual-map identity `dft_f(phi o sigma) = dft_{f^M}(phi)` for
/// every character `phi` of the quotient, to `1e-8`.
///
/// The lift of a quotient character index is located explicitly: evaluating
/// `phi o sigma` on the standard generators of `G` yields the residues of its
/// index in `G`, and the identity is then checked between the two
/// independently computed spectra.
pub fn dft_compression_check(f: &GFunction<Complex64>, q: &QuotientPresentation) -> Result<bool> {
    if f.group() != q.parent() {
        return Err(Error::GroupMismatch);
    }
    let g = q.parent();
    let h = q.quotient();
    let spec_g = dft(f);
    let spec_h = dft(&compress(f, q)?);
    let tau = std::f64::consts::TAU;
    for (pi, phi_idx) in h.enumerate().iter().enumerate() {
        // index of phi o sigma in G from its values on the generators
        let mut lift = Vec::with_capacity(g.rank());
        for (axis, &m) in g.orders().iter().enumerate() {
            let mut gen = vec![0u32; g.rank()];
            gen[axis] = 1 % m;
            let value = char_eval(h, phi_idx, &q.project(&Element(gen))?)?;
            let frac = value.arg().rem_euclid(tau) / tau; // j_axis / m
            let j = (frac * m as f64).round() as i64;
            let j = j.rem_euclid(m as i64) as u32;
            // the lift must be an honest character index: chi_j(gen) = value
            let check = Complex64::from_polar(1.0, tau * j as f64 / m as f64);
            if (check - value).norm() > 1e-6 {
                return Ok(false);
            }
            lift.push(j);
        }
        let lifted = Element(lift);
        let lhs = spec_g.value(&lifted)?;
        let rhs = spec_h.values()[pi];
        if (lhs - rhs).norm() > 1e-8 {
            return Ok(false);
        }
    }
    Ok(true)
}
