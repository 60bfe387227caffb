//! Torsion homology of a surgery manifold and its linking form.
//!
//! For a nondegenerate linking matrix `L` with Smith decomposition
//! `U·L·V = D`, the meridians `G` satisfy `L·G = 0`, hence `D·(V⁻¹G) = 0`.
//! The rows of `V⁻¹` with invariant factor `dᵢ ≥ 2` give generators
//! `hᵢ = Σₜ Bᵢₜ Gₜ` of order `dᵢ`, and the linking form in that basis is
//! `Q = B·L⁻¹·Bᵀ mod ℤ`.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::{determinant, fract_mod_one, inverse_rational, is_integral, signature, smith_normal_form};
use crate::matrix::Matrix;
use crate::scalar::Integral;
use crate::surgery::SurgeryPresentation;

/// `H₁(M) ≅ ℤ_{p₁} ⊕ ⋯ ⊕ ℤ_{p_w}` together with the generator matrix `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionPresentation<T = BigInt> {
    /// `p₁ | p₂ | ⋯ | p_w`, all at least 2.
    pub torsion_numbers: Vec<T>,
    /// `w × m`; row `i` expresses `hᵢ` in the meridians.
    pub generators: Matrix<T>,
    /// `p = p₁⋯p_w = |det L|`.
    pub order: T,
    pub det: T,
    pub signature: i64,
    linking_matrix: Matrix<T>,
}

impl<T: Integral> TorsionPresentation<T> {
    /// Torsion presentation read off the Smith normal form of `l`.
    pub fn from_linking_matrix(l: &Matrix<T>) -> Result<Self> {
        check_linking_matrix(l)?;
        let det = determinant(l);
        if det.is_zero() {
            return Err(Error::FreeHomologyPart);
        }
        let smith = smith_normal_form(l);
        let two = T::one() + T::one();
        let keep: Vec<usize> = (0..l.rows())
            .filter(|&i| smith.d[(i, i)] >= two)
            .collect();
        let all_cols: Vec<usize> = (0..l.cols()).collect();
        let torsion_numbers = keep.iter().map(|&i| smith.d[(i, i)].clone()).collect();
        Ok(Self {
            torsion_numbers,
            generators: smith.v_inv.select(&keep, &all_cols),
            order: det.abs(),
            signature: signature(l)?,
            det,
            linking_matrix: l.clone(),
        })
    }

    /// A presentation in a caller-chosen generator basis. The torsion numbers
    /// must multiply to `|det l|`; `generators` must be `w × m`.
    pub fn with_generators(l: &Matrix<T>, torsion_numbers: Vec<T>, generators: Matrix<T>) -> Result<Self> {
        check_linking_matrix(l)?;
        let det = determinant(l);
        if det.is_zero() {
            return Err(Error::FreeHomologyPart);
        }
        if generators.rows() != torsion_numbers.len() || generators.cols() != l.rows() {
            return Err(Error::DimensionMismatch(format!(
                "generator matrix is {}x{}, expected {}x{}",
                generators.rows(),
                generators.cols(),
                torsion_numbers.len(),
                l.rows()
            )));
        }
        let product = torsion_numbers.iter().fold(T::one(), |acc, p| acc * p.clone());
        if product != det.abs() {
            return Err(Error::InvalidParameter(format!(
                "torsion numbers multiply to {product}, but |det L| = {}",
                det.abs()
            )));
        }
        Ok(Self {
            torsion_numbers,
            generators,
            order: det.abs(),
            signature: signature(l)?,
            det,
            linking_matrix: l.clone(),
        })
    }

    /// Number of cyclic factors.
    pub fn w(&self) -> usize {
        self.torsion_numbers.len()
    }

    /// Number of link components.
    pub fn m(&self) -> usize {
        self.linking_matrix.rows()
    }

    pub fn linking_matrix(&self) -> &Matrix<T> {
        &self.linking_matrix
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion_numbers.is_empty()
    }

    /// Exact `L⁻¹` of the underlying linking matrix.
    pub fn inverse(&self) -> Matrix<Ratio<T>> {
        inverse_rational(&self.linking_matrix).expect("nondegenerate by construction")
    }
}

fn check_linking_matrix<T: Integral>(l: &Matrix<T>) -> Result<()> {
    if !l.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "linking matrix must be square, got {}x{}",
            l.rows(),
            l.cols()
        )));
    }
    if let Some((row, col)) = l.first_asymmetry() {
        return Err(Error::AsymmetricMatrix { row, col });
    }
    Ok(())
}

/// Torsion presentation of a surgery manifold.
pub fn torsion_presentation(p: &SurgeryPresentation) -> Result<TorsionPresentation<BigInt>> {
    TorsionPresentation::from_linking_matrix(p.linking_matrix())
}

/// `ℚ/ℤ`-valued linking form on the torsion group, entries in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkingForm<T: Integral = BigInt> {
    pub q: Matrix<Ratio<T>>,
    /// Common denominator bound `p`: `p·Q` is integral.
    pub order: T,
}

impl<T: Integral> LinkingForm<T> {
    pub fn w(&self) -> usize {
        self.q.rows()
    }

    /// `p·Q` as an integer matrix with entries in `0..p`.
    pub fn scaled(&self) -> Matrix<T> {
        self.q.map(|x| (x * Ratio::from_integer(self.order.clone())).to_integer())
    }
}

/// `B·L⁻¹·Bᵀ` without reduction modulo ℤ.
pub fn unreduced_form<T: Integral>(t: &TorsionPresentation<T>, l_inv: &Matrix<Ratio<T>>) -> Result<Matrix<Ratio<T>>> {
    let m = t.m();
    if l_inv.rows() != m || l_inv.cols() != m || t.generators.cols() != m {
        return Err(Error::DimensionMismatch(format!(
            "inverse is {}x{}, generators are {}x{}, linking matrix is {m}x{m}",
            l_inv.rows(),
            l_inv.cols(),
            t.generators.rows(),
            t.generators.cols()
        )));
    }
    let b = t.generators.map(|x| Ratio::from_integer(x.clone()));
    Ok(&(&b * l_inv) * &b.transpose())
}

/// The linking form `Qᵢⱼ = Σₜₛ Bᵢₜ Bⱼₛ L⁻¹ₜₛ mod ℤ`.
pub fn linking_form<T: Integral>(t: &TorsionPresentation<T>, l_inv: &Matrix<Ratio<T>>) -> Result<LinkingForm<T>> {
    let raw = unreduced_form(t, l_inv)?;
    let q = raw.map(fract_mod_one);
    let p = Ratio::from_integer(t.order.clone());
    if !is_integral(&q.map(|x| x * p.clone())) {
        return Err(Error::PreconditionViolated(
            "p·Q is not integral: the supplied matrix is not the inverse of L".into(),
        ));
    }
    Ok(LinkingForm {
        q,
        order: t.order.clone(),
    })
}

/// Torsion presentation and linking form of a surgery manifold.
pub fn analyze(p: &SurgeryPresentation) -> Result<(TorsionPresentation<BigInt>, LinkingForm<BigInt>)> {
    let t = torsion_presentation(p)?;
    let form = linking_form(&t, &t.inverse())?;
    Ok((t, form))
}

/// Self-linking number `N_Γ` of `Γ = p·γ` for `γ = Σ nᵢhᵢ`, computed through
/// the band sum `Γ# = Σₛ cₛ L_{s,f}` with `cₛ = Σᵢₜ nᵢ Bᵢₜ (p·L⁻¹)ₜₛ`, so that
/// `N_Γ = −cᵀ·L·c`.
///
/// The result is checked against `−p²·nᵀQn` (with `Q` unreduced) before it is
/// returned; any disagreement is an [`Error::OracleMismatch`].
pub fn self_linking_oracle<T: Integral>(t: &TorsionPresentation<T>, l: &Matrix<T>, n: &[T]) -> Result<T> {
    if n.len() != t.w() {
        return Err(Error::DimensionMismatch(format!(
            "coefficient vector has length {}, torsion rank is {}",
            n.len(),
            t.w()
        )));
    }
    if l != t.linking_matrix() {
        return Err(Error::PreconditionViolated(
            "linking matrix does not match the torsion presentation".into(),
        ));
    }
    let l_inv = t.inverse();
    let p = Ratio::from_integer(t.order.clone());
    let adj = l_inv.map(|x| x * p.clone());
    if !is_integral(&adj) {
        return Err(Error::PreconditionViolated("p·L⁻¹ is not integral".into()));
    }
    let adj = adj.map(|x| x.to_integer());

    // cᵀ = nᵀ·B·(p·L⁻¹)
    let bt_n = t.generators.transpose().mul_vec(n);
    let c = adj.transpose().mul_vec(&bt_n);
    let band_sum = -l.quadratic_form(&c);

    let raw = unreduced_form(t, &l_inv)?;
    let n_rat: Vec<Ratio<T>> = n.iter().map(|x| Ratio::from_integer(x.clone())).collect();
    let p_sq = p.clone() * p;
    let form = -(p_sq.clone() * raw.quadratic_form(&n_rat));
    if Ratio::from_integer(band_sum.clone()) != form {
        return Err(Error::OracleMismatch {
            band_sum: band_sum.to_string(),
            form: form.to_string(),
        });
    }

    // The reduced form agrees modulo p².
    let reduced = linking_form(t, &l_inv)?;
    let reduced_value = -(p_sq.clone() * reduced.q.quadratic_form(&n_rat));
    let diff = (reduced_value - form.clone()) / p_sq;
    if !diff.denom().is_one() {
        return Err(Error::OracleMismatch {
            band_sum: band_sum.to_string(),
            form: format!("{form} (reduced form disagrees modulo p²)"),
        });
    }
    Ok(band_sum)
}

/// Mixed-radix enumeration of `ℤ_{r₀} ⊕ ⋯ ⊕ ℤ_{r_{w−1}}`, last digit fastest.
/// The empty product has exactly one element.
#[derive(Clone, Debug)]
pub struct GroupElements {
    radices: Vec<u64>,
    current: Option<Vec<u64>>,
}

impl GroupElements {
    pub fn new(radices: &[u64]) -> Self {
        let current = (!radices.contains(&0)).then(|| vec![0; radices.len()]);
        Self {
            radices: radices.to_vec(),
            current,
        }
    }
}

impl Iterator for GroupElements {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let mut i = cur.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < self.radices[i] {
                break;
            }
            cur[i] = 0;
        }
        Some(out)
    }
}

/// Converts torsion numbers to machine radices for enumeration.
pub fn radices<T: Integral>(torsion_numbers: &[T]) -> Result<Vec<u64>> {
    torsion_numbers
        .iter()
        .map(|p| {
            p.to_u64()
                .ok_or_else(|| Error::InvalidParameter(format!("torsion number {p} too large to enumerate")))
        })
        .collect()
}
