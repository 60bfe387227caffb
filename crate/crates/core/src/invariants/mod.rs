//! Abelian Chern–Simons partition function, Reshetikhin–Turaev surgery
//! invariant, and the identity `Z_k = √(p₁⋯p_w)·I_k` relating them.
//!
//! `Z_k` is summed over the torsion group from the linking form; `I_k` is a
//! brute-force Gauss sum over `(ℤ/2k)^m` from the linking matrix. The two
//! routes share nothing beyond the input matrix.

mod cyclotomic;

pub use cyclotomic::{cyclotomic_polynomial, unit_root, CyclotomicSum, Phase};

use std::thread;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::homology::{analyze, radices, GroupElements, LinkingForm};
use crate::linalg::{determinant, signature};
use crate::matrix::Matrix;
use crate::scalar::{Integral, Real};
use crate::surgery::SurgeryPresentation;
use crate::ComplexValue;

/// Default cap on the number of lattice points in the brute-force RT sum.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Default relative tolerance for the `Z_k`/`I_k` comparison.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

fn check_level(k: i64) -> Result<u64> {
    if k <= 0 {
        return Err(Error::InvalidLevel(k));
    }
    Ok(k as u64)
}

/// `Z_k = Σ_{n} e^{2πik·nᵀQn}` over `ℤ_{p₁} ⊕ ⋯ ⊕ ℤ_{p_w}`, as an exact
/// multiset of phases at modulus `p`.
pub fn partition_function<T: Integral>(form: &LinkingForm<T>, torsion: &[T], k: i64) -> Result<CyclotomicSum> {
    let k = check_level(k)?;
    let w = torsion.len();
    if form.w() != w {
        return Err(Error::DimensionMismatch(format!(
            "linking form has rank {}, torsion has {w} factors",
            form.w()
        )));
    }
    if w == 0 {
        return Ok(CyclotomicSum::one());
    }
    let p = form
        .order
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter(format!("group order {} too large to enumerate", form.order)))?;
    let scaled: Vec<u128> = form
        .scaled()
        .as_slice()
        .iter()
        .map(|x| u128::from(x.residue(p)))
        .collect();
    let p128 = u128::from(p);
    let k = u128::from(k % p);

    let mut z = CyclotomicSum::zero(p);
    for n in GroupElements::new(&radices(torsion)?) {
        let mut value = 0u128;
        for (i, &ni) in n.iter().enumerate() {
            if ni == 0 {
                continue;
            }
            let mut row = 0u128;
            for (j, &nj) in n.iter().enumerate() {
                row = (row + scaled[i * w + j] * u128::from(nj)) % p128;
            }
            value = (value + row * u128::from(ni)) % p128;
        }
        z.add(((value * k) % p128) as u64, 1);
    }
    Ok(z)
}

/// Partition function of a surgery manifold.
pub fn partition_function_of(p: &SurgeryPresentation, k: i64) -> Result<CyclotomicSum> {
    check_level(k)?;
    let (t, form) = analyze(p)?;
    partition_function(&form, &t.torsion_numbers, k)
}

/// Floating value of a cyclotomic sum.
pub fn evaluate(c: &CyclotomicSum) -> ComplexValue {
    c.evaluate()
}

/// Exact vanishing test for a sum of roots of unity.
pub fn is_exactly_zero(c: &CyclotomicSum) -> bool {
    c.is_exactly_zero()
}

/// Knobs for the brute-force Reshetikhin–Turaev sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RtOptions {
    /// Maximum number of lattice points `(2k)^m`.
    pub budget: u128,
    /// Worker threads; `1` runs on the calling thread.
    pub workers: usize,
}

impl Default for RtOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            workers: 1,
        }
    }
}

/// The Gauss sum `Σ_{q ∈ [0,2k)^m} e^{−2πi·qᵀLq/4k}` as exact phase counts at
/// modulus `4k`. Splitting the first coordinate across workers yields the
/// same counts as a serial run.
pub fn rt_gauss_sum<T: Integral>(l: &Matrix<T>, k: i64, opts: &RtOptions) -> Result<CyclotomicSum> {
    let k = check_level(k)?;
    if !l.is_square() {
        return Err(Error::NotSquare {
            rows: l.rows(),
            cols: l.cols(),
        });
    }
    let m = l.rows();
    let side = 2 * k;
    let required = (0..m).try_fold(1u128, |acc, _| acc.checked_mul(u128::from(side)));
    match required {
        Some(r) if r <= opts.budget => {}
        other => {
            return Err(Error::BudgetExceeded {
                required: other.unwrap_or(u128::MAX),
                budget: opts.budget,
            })
        }
    }
    let modulus = 4 * k;
    if m == 0 {
        return Ok(CyclotomicSum::one().embed(modulus));
    }

    let entries: Vec<u64> = l.as_slice().iter().map(|x| x.residue(modulus)).collect();
    let count_slice = |first: std::ops::Range<u64>| -> CyclotomicSum {
        let mut acc = CyclotomicSum::zero(modulus);
        let mut radix = vec![side; m];
        radix[0] = first.end - first.start;
        for mut q in GroupElements::new(&radix) {
            q[0] += first.start;
            let mut value = 0u64;
            for i in 0..m {
                if q[i] == 0 {
                    continue;
                }
                let mut row = 0u64;
                for j in 0..m {
                    row = (row + entries[i * m + j] * q[j]) % modulus;
                }
                value = (value + row * q[i]) % modulus;
            }
            acc.add((modulus - value) % modulus, 1);
        }
        acc
    };

    let workers = opts.workers.clamp(1, side as usize);
    if workers == 1 {
        return Ok(count_slice(0..side));
    }
    let chunk = side.div_ceil(workers as u64);
    let ranges: Vec<_> = (0..side)
        .step_by(chunk as usize)
        .map(|s| s..(s + chunk).min(side))
        .collect();
    let partials: Vec<CyclotomicSum> = thread::scope(|scope| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| scope.spawn(move || count_slice(r)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("summation worker panicked"))
            .collect()
    });
    let mut total = CyclotomicSum::zero(modulus);
    for part in &partials {
        total.merge(part);
    }
    Ok(total)
}

/// `I_k = (2k)^{−m/2}·e^{iπσ/4}·Σ_q e^{−2πi·qᵀLq/4k}` for a symmetric
/// nondegenerate integer matrix, in the requested float type.
pub fn rt_invariant_with<T: Integral, F: Real>(l: &Matrix<T>, k: i64, opts: &RtOptions) -> Result<Complex<F>> {
    check_level(k)?;
    if let Some((row, col)) = l.first_asymmetry() {
        return Err(Error::NotSymmetric { row, col });
    }
    if determinant(l).is_zero() {
        return Err(Error::DegenerateForm);
    }
    let sigma = signature(l)?;
    let gauss = rt_gauss_sum(l, k, opts)?;
    let m = l.rows() as i32;
    let two_k = F::from_i64(2 * k).expect("finite");
    let scale = two_k.powf(F::from_i32(-m).expect("finite") / F::from_i32(2).expect("finite"));
    let prefactor = unit_root::<F>(sigma.rem_euclid(8) as u64, 8) * scale;
    Ok(gauss.evaluate::<F>() * prefactor)
}

/// Reshetikhin–Turaev invariant of a surgery manifold (double precision).
pub fn rt_invariant(p: &SurgeryPresentation, k: i64) -> Result<ComplexValue> {
    rt_invariant_with(p.linking_matrix(), k, &RtOptions::default())
}

/// Both sides of the Gauss-sum reciprocity identity
/// `Σ_{n<|c|} e^{−iπ(an²+bn)/c} = √|c/a|·e^{−iπ(|ac|−b²)/4ac}·Σ_{n<|a|} e^{iπ(cn²+bn)/a}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReciprocityCheck {
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub agree: bool,
}

/// Phase `num/den` (any signs) as a residue at modulus `|den|`.
fn phase_residue(num: i128, den: i128) -> (u64, u64) {
    let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
    (num.rem_euclid(den) as u64, den as u64)
}

/// Evaluates both sides of the reciprocity identity independently.
pub fn reciprocity_check(a: i64, b: i64, c: i64) -> Result<ReciprocityCheck> {
    let (a, b, c) = (i128::from(a), i128::from(b), i128::from(c));
    if a == 0 || c == 0 {
        return Err(Error::PreconditionViolated("reciprocity needs ac != 0".into()));
    }
    if (a * c + b).rem_euclid(2) != 0 {
        return Err(Error::PreconditionViolated("reciprocity needs ac + b even".into()));
    }

    // e^{−iπ(an²+bn)/c} = e^{2πi·(−(an²+bn))/(2c)}
    let mut lhs_sum = CyclotomicSum::zero(2 * c.unsigned_abs() as u64);
    for n in 0..c.abs() {
        let (r, _) = phase_residue(-(a * n * n + b * n), 2 * c);
        lhs_sum.add(r, 1);
    }
    let mut rhs_sum = CyclotomicSum::zero(2 * a.unsigned_abs() as u64);
    for n in 0..a.abs() {
        let (r, _) = phase_residue(c * n * n + b * n, 2 * a);
        rhs_sum.add(r, 1);
    }
    let (r, den) = phase_residue(-((a * c).abs() - b * b), 8 * a * c);
    let magnitude = ((c as f64) / (a as f64)).abs().sqrt();
    let lhs: ComplexValue = lhs_sum.evaluate();
    let rhs = rhs_sum.evaluate::<f64>() * unit_root::<f64>(r, den) * magnitude;
    let agree = (lhs - rhs).norm() <= DEFAULT_TOLERANCE * (1.0 + lhs.norm());
    Ok(ReciprocityCheck { lhs, rhs, agree })
}

/// Outcome of checking `Z_k = √p·I_k` at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantReport {
    pub name: Option<String>,
    pub m: usize,
    pub det: BigInt,
    pub signature: i64,
    pub torsion_numbers: Vec<BigInt>,
    pub k: i64,
    pub z_exact: CyclotomicSum,
    pub z_k: ComplexValue,
    pub z_exact_zero: bool,
    pub i_k: ComplexValue,
    pub sqrt_p: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Computes `Z_k` and `I_k` independently and compares `Z_k` with `√p·I_k`.
/// Passes when the residual is at most `tol·(1 + |Z_k|)`.
pub fn verify_relation(p: &SurgeryPresentation, k: i64, tol: f64) -> Result<InvariantReport> {
    verify_relation_with(p, k, tol, &RtOptions::default())
}

pub fn verify_relation_with(p: &SurgeryPresentation, k: i64, tol: f64, opts: &RtOptions) -> Result<InvariantReport> {
    check_level(k)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be a nonnegative number, got {tol}")));
    }
    let (t, form) = analyze(p)?;
    let z_exact = partition_function(&form, &t.torsion_numbers, k)?;
    let z_k: ComplexValue = z_exact.evaluate();
    let i_k: ComplexValue = rt_invariant_with(p.linking_matrix(), k, opts)?;
    let sqrt_p = t
        .order
        .to_f64()
        .expect("group order is representable as f64")
        .sqrt();
    let residual = (z_k - i_k * sqrt_p).norm();
    Ok(InvariantReport {
        name: p.name.clone(),
        m: p.m(),
        det: t.det.clone(),
        signature: t.signature,
        torsion_numbers: t.torsion_numbers.clone(),
        k,
        z_exact_zero: z_exact.is_exactly_zero(),
        z_exact,
        z_k,
        i_k,
        sqrt_p,
        residual,
        tolerance: tol,
        pass: residual <= tol * (1.0 + z_k.norm()),
    })
}
