//! Exact integer combinations of `N`-th roots of unity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::Real;

/// `Σ_r mult(r)·e^{2πi r/N}` for `r` in `0..N`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclotomicSum {
    modulus: u64,
    multiplicities: Vec<i64>,
}

/// One reduced phase `num/den` (in `[0, 1)`) with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Phase {
    pub num: u64,
    pub den: u64,
    pub mult: i64,
}

impl CyclotomicSum {
    /// The zero sum at modulus `n`.
    pub fn zero(modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let len = usize::try_from(modulus).expect("modulus fits in memory");
        Self {
            modulus,
            multiplicities: vec![0; len],
        }
    }

    /// The single term `1 = e^{0}`.
    pub fn one() -> Self {
        let mut s = Self::zero(1);
        s.multiplicities[0] = 1;
        s
    }

    pub fn from_multiplicities(modulus: u64, multiplicities: Vec<i64>) -> Self {
        assert_eq!(
            multiplicities.len() as u64,
            modulus,
            "one multiplicity per residue"
        );
        Self {
            modulus,
            multiplicities,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.multiplicities
    }

    /// Adds `count` copies of `e^{2πi r/N}`; `r` is taken modulo `N`.
    pub fn add(&mut self, r: u64, count: i64) {
        self.multiplicities[(r % self.modulus) as usize] += count;
    }

    /// Termwise sum of two sums at the same modulus.
    pub fn merge(&mut self, other: &Self) {
        assert_eq!(self.modulus, other.modulus, "merge needs equal moduli");
        for (a, b) in self.multiplicities.iter_mut().zip(&other.multiplicities) {
            *a += b;
        }
    }

    /// `Σ mult(r)`: the number of summed terms for a sum of phases.
    pub fn total(&self) -> i64 {
        self.multiplicities.iter().sum()
    }

    /// The same multiset at the smallest modulus that holds it.
    pub fn canonical(&self) -> Self {
        let g = self
            .multiplicities
            .iter()
            .enumerate()
            .filter(|(_, m)| **m != 0)
            .fold(self.modulus, |g, (r, _)| g.gcd(&(r as u64)));
        let n = self.modulus / g;
        let mut out = Self::zero(n);
        for (r, &m) in self.multiplicities.iter().enumerate() {
            if m != 0 {
                out.multiplicities[(r as u64 / g) as usize] += m;
            }
        }
        out
    }

    /// Re-expresses the sum at a multiple `n` of the current modulus.
    pub fn embed(&self, n: u64) -> Self {
        assert!(n.is_multiple_of(self.modulus), "target modulus must be a multiple");
        let scale = n / self.modulus;
        let mut out = Self::zero(n);
        for (r, &m) in self.multiplicities.iter().enumerate() {
            out.multiplicities[(r as u64 * scale) as usize] += m;
        }
        out
    }

    /// Exact product, at modulus `lcm(N₁, N₂)`.
    pub fn product(&self, other: &Self) -> Self {
        let n = self.modulus.lcm(&other.modulus);
        let (sa, sb) = (n / self.modulus, n / other.modulus);
        let mut out = Self::zero(n);
        for (ra, &ma) in self.multiplicities.iter().enumerate().filter(|(_, m)| **m != 0) {
            for (rb, &mb) in other.multiplicities.iter().enumerate().filter(|(_, m)| **m != 0) {
                out.add(ra as u64 * sa + rb as u64 * sb, ma * mb);
            }
        }
        out
    }

    /// Complex conjugate: `r ↦ −r`.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::zero(self.modulus);
        for (r, &m) in self.multiplicities.iter().enumerate() {
            out.add(self.modulus - r as u64, m);
        }
        out
    }

    /// Nonzero terms as reduced fractions, ordered by phase.
    pub fn phases(&self) -> Vec<Phase> {
        let mut by_phase: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for (r, &m) in self.multiplicities.iter().enumerate() {
            if m == 0 {
                continue;
            }
            let g = (r as u64).gcd(&self.modulus);
            let key = (r as u64 / g, self.modulus / g);
            *by_phase.entry(key).or_default() += m;
        }
        let mut out: Vec<Phase> = by_phase
            .into_iter()
            .map(|((num, den), mult)| Phase { num, den, mult })
            .collect();
        // num/den < num'/den' ⇔ num·den' < num'·den
        out.sort_by_key(|p| (p.num as u128 * u128::from(self.modulus)) / u128::from(p.den));
        out
    }

    /// Floating-point value of the sum.
    pub fn evaluate<F: Real>(&self) -> Complex<F> {
        self.multiplicities
            .iter()
            .enumerate()
            .filter(|(_, m)| **m != 0)
            .fold(Complex::new(F::zero(), F::zero()), |acc, (r, &m)| {
                let w = unit_root::<F>(r as u64, self.modulus);
                let m = F::from_i64(m).expect("multiplicity is representable");
                acc + w * m
            })
    }

    /// Whether the algebraic number is exactly zero, decided by reducing the
    /// multiplicity polynomial modulo the `N`-th cyclotomic polynomial.
    pub fn is_exactly_zero(&self) -> bool {
        let poly: Vec<BigInt> = self.multiplicities.iter().map(|&m| BigInt::from(m)).collect();
        let phi = cyclotomic_polynomial(self.modulus);
        poly_rem_monic(poly, &phi).iter().all(Zero::is_zero)
    }
}

/// `e^{2πi r/n}`, exact at multiples of a quarter turn.
pub fn unit_root<F: Real>(r: u64, n: u64) -> Complex<F> {
    let r = r % n;
    let (zero, one) = (F::zero(), F::one());
    if (4 * u128::from(r)) % u128::from(n) == 0 {
        return match (4 * u128::from(r)) / u128::from(n) {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        };
    }
    // Use the representative in (−n/2, n/2] to keep the angle small.
    let signed = if 2 * r > n { r as f64 - n as f64 } else { r as f64 };
    let frac = F::from_f64(signed).expect("finite") / F::from_u64(n).expect("finite");
    let angle = F::TAU() * frac;
    Complex::new(angle.cos(), angle.sin())
}

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `xⁿ − 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n > 0, "cyclotomic index must be positive");
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut table: BTreeMap<u64, Vec<BigInt>> = BTreeMap::new();
    for &d in &divisors {
        let mut poly = x_pow_minus_one(d);
        for (&e, phi_e) in table.iter().filter(|(&e, _)| d % e == 0) {
            debug_assert!(e < d);
            poly = poly_div_exact_monic(&poly, phi_e);
        }
        table.insert(d, poly);
    }
    table.remove(&n).expect("n divides itself")
}

fn x_pow_minus_one(d: u64) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d as usize + 1];
    p[0] = -BigInt::one();
    p[d as usize] = BigInt::one();
    p
}

/// Quotient of `a` by the monic polynomial `b`; the division must be exact.
fn poly_div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// Remainder of `a` modulo the monic polynomial `b`.
fn poly_rem_monic(mut a: Vec<BigInt>, b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    while a.len() > db {
        let top = a.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = a.len() - db;
        for (j, bj) in b[..db].iter().enumerate() {
            a[shift + j] -= &top * bj;
        }
    }
    a
}
