//! Formal power series tools for normalized univalent-function
//! coefficients: truncated composition/inversion, the Carathéodory
//! coefficient recurrence, Hankel determinants, rotations, and the
//! closed-disk parametrization of Carathéodory coefficients.
//!
//! All operations are generic over [`SeriesScalar`], so the same code
//! paths run over exact rationals, double-precision complex numbers, and
//! (in the reproduction pipeline) polynomial coefficients.

use num::complex::Complex64;

use crate::rational::Rational;

/// Absolute tolerance for every double-precision equality check in this
/// crate.
pub const NUMERIC_TOL: f64 = 1e-9;

/// Coefficient ring of a series computation.
pub trait SeriesScalar: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Exact division by a positive integer (used by coefficient
    /// recurrences).
    fn div_nat(&self, n: u64) -> Self;
    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }
}

impl SeriesScalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_nat(&self, n: u64) -> Self {
        self.checked_div(&Rational::new(n as i64, 1))
            .expect("positive divisor")
    }
}

impl SeriesScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_nat(&self, n: u64) -> Self {
        self / n as f64
    }
}

/// The coefficients after the unit leading term of a normalized series.
///
/// For a function `f(z) = z + a2 z^2 + ... + aN z^N` the stored vector is
/// `(a2, ..., aN)` and the order is `N`. The same shape carries
/// Carathéodory coefficient vectors `(c1, ..., c_{N-1})` of
/// `p(z) = 1 + c1 z + ...`, i.e. whatever follows an implicit leading 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesCoeffs<T> {
    coeffs: Vec<T>,
}

impl<T: SeriesScalar> SeriesCoeffs<T> {
    /// Wraps `(a2, ..., aN)`; at least one coefficient (order ≥ 2).
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "series order must be at least 2");
        SeriesCoeffs { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() + 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// `a_n` with the implicit `a_1 = 1`; `None` beyond the order.
    pub fn coeff_at(&self, n: usize) -> Option<T> {
        match n {
            0 => Some(T::zero()),
            1 => Some(T::one()),
            _ => self.coeffs.get(n - 2).cloned(),
        }
    }

    /// Dense power-indexed representation `[0, 1, a2, ..., aN]`.
    fn raw(&self) -> Vec<T> {
        let mut v = Vec::with_capacity(self.order() + 1);
        v.push(T::zero());
        v.push(T::one());
        v.extend(self.coeffs.iter().cloned());
        v
    }
}

impl SeriesCoeffs<Rational> {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        SeriesCoeffs::new(coeffs.iter().map(|&c| Rational::from_int(c)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SeriesError {
    #[error("hankel window (q={q}, n={n}) needs a_{needed} but the series order is {order}")]
    InsufficientCoefficients {
        q: usize,
        n: usize,
        needed: usize,
        order: usize,
    },
    #[error("hankel parameters q and n must be at least 1")]
    InvalidWindow,
}

fn trunc_mul<T: SeriesScalar>(a: &[T], b: &[T], order: usize) -> Vec<T> {
    let mut out = vec![T::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if i + j > order {
                break;
            }
            out[i + j] = out[i + j].add(&ai.mul(bj));
        }
    }
    out
}

/// `f(g(w))` truncated at `w^order`, power-indexed inputs, `g[0] = 0`.
fn compose_raw<T: SeriesScalar>(f: &[T], g: &[T], order: usize) -> Vec<T> {
    debug_assert!(g.first().map_or(true, T::is_zero));
    let mut acc = vec![T::zero(); order + 1];
    // Horner: (((f_k) g + f_{k-1}) g + ...) g + f_0
    for fi in f.iter().rev() {
        acc = trunc_mul(&acc, g, order);
        acc[0] = acc[0].add(fi);
    }
    acc
}

/// Composition `f ∘ g` of two normalized series, truncated to the smaller
/// order. The result is again normalized (leading coefficient 1).
pub fn compose<T: SeriesScalar>(f: &SeriesCoeffs<T>, g: &SeriesCoeffs<T>) -> SeriesCoeffs<T> {
    let order = f.order().min(g.order());
    let raw = compose_raw(&f.raw(), &g.raw(), order);
    SeriesCoeffs::new(raw[2..=order].to_vec())
}

/// Coefficients `(A2, ..., AN)` of the compositional inverse: the unique
/// normalized series with `f(g(w)) = w + O(w^{N+1})`.
///
/// Computed order by order from the composition identity: with
/// `A2..A_{m-1}` known, the `w^m` coefficient of `f(g(w))` is linear in
/// `A_m` with unit coefficient.
pub fn invert_series<T: SeriesScalar>(a: &SeriesCoeffs<T>) -> SeriesCoeffs<T> {
    let order = a.order();
    let f = a.raw();
    let mut g = vec![T::zero(); order + 1];
    g[1] = T::one();
    for m in 2..=order {
        let h = compose_raw(&f, &g, m);
        g[m] = h[m].neg();
    }
    SeriesCoeffs::new(g[2..=order].to_vec())
}

/// Maps Carathéodory coefficients `(c1, ..., c_{N-1})` to the Taylor
/// coefficients `(a2, ..., aN)` of the starlike function with
/// `z f'(z) = f(z) p(z)`, via the recurrence
/// `a_n = (sum_{k=1}^{n-1} a_{n-k} c_k) / (n - 1)`, `a_1 = 1`.
pub fn caratheodory_to_schlicht<T: SeriesScalar>(c: &SeriesCoeffs<T>) -> SeriesCoeffs<T> {
    let order = c.order();
    let mut a = Vec::with_capacity(order + 1);
    a.push(T::zero()); // unused a_0
    a.push(T::one());
    for n in 2..=order {
        let mut sum = T::zero();
        for k in 1..n {
            // c_k is stored at index k-1
            sum = sum.add(&a[n - k].mul(&c.coeffs[k - 1]));
        }
        a.push(sum.div_nat((n - 1) as u64));
    }
    SeriesCoeffs::new(a[2..=order].to_vec())
}

/// The q×q Hankel matrix with entries `a_{n+r+s}` (0-based `r`, `s`),
/// using the implicit `a_1 = 1`.
pub fn hankel_matrix<T: SeriesScalar>(
    q: usize,
    n: usize,
    a: &SeriesCoeffs<T>,
) -> Result<Vec<Vec<T>>, SeriesError> {
    if q == 0 || n == 0 {
        return Err(SeriesError::InvalidWindow);
    }
    let needed = n + 2 * q - 2;
    if needed > a.order() {
        return Err(SeriesError::InsufficientCoefficients {
            q,
            n,
            needed,
            order: a.order(),
        });
    }
    Ok((0..q)
        .map(|r| {
            (0..q)
                .map(|s| a.coeff_at(n + r + s).expect("bounds checked"))
                .collect()
        })
        .collect())
}

fn det<T: SeriesScalar>(m: &[Vec<T>]) -> T {
    match m.len() {
        0 => T::one(),
        1 => m[0][0].clone(),
        size => {
            let mut acc = T::zero();
            for col in 0..size {
                if m[0][col].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<T>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(j, _)| j != col)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let cofactor = m[0][col].mul(&det(&minor));
                acc = if col % 2 == 0 {
                    acc.add(&cofactor)
                } else {
                    acc.sub(&cofactor)
                };
            }
            acc
        }
    }
}

/// Hankel determinant `H(q, n)` by exact cofactor expansion of the matrix
/// from [`hankel_matrix`].
pub fn hankel_det<T: SeriesScalar>(
    q: usize,
    n: usize,
    a: &SeriesCoeffs<T>,
) -> Result<T, SeriesError> {
    Ok(det(&hankel_matrix(q, n, a)?))
}

/// Coefficients of the rotated function `e^{-iθ} f(e^{iθ} z)`:
/// `a_n ↦ e^{i(n-1)θ} a_n`.
pub fn rotate_coeffs(a: &SeriesCoeffs<Complex64>, theta: f64) -> SeriesCoeffs<Complex64> {
    SeriesCoeffs::new(
        a.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| c * Complex64::from_polar(1.0, (i + 1) as f64 * theta))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParamPointError {
    #[error("c1 = {0} is outside [0, 2]")]
    C1OutOfRange(f64),
    #[error("|{name}| = {modulus} exceeds 1")]
    ModulusExceedsOne { name: &'static str, modulus: f64 },
}

/// A point of the Carathéodory coefficient parametrization: `c1 ∈ [0, 2]`
/// and three closed-unit-disk parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamPoint {
    c1: f64,
    gamma: Complex64,
    eta: Complex64,
    rho: Complex64,
}

impl ParamPoint {
    /// Validates the domain; moduli may exceed 1 by at most
    /// [`NUMERIC_TOL`] to absorb floating-point rounding of unit-circle
    /// constructions.
    pub fn new(
        c1: f64,
        gamma: Complex64,
        eta: Complex64,
        rho: Complex64,
    ) -> Result<Self, ParamPointError> {
        if !(0.0..=2.0).contains(&c1) {
            return Err(ParamPointError::C1OutOfRange(c1));
        }
        for (name, z) in [("gamma", gamma), ("eta", eta), ("rho", rho)] {
            if z.norm() > 1.0 + NUMERIC_TOL {
                return Err(ParamPointError::ModulusExceedsOne {
                    name,
                    modulus: z.norm(),
                });
            }
        }
        Ok(ParamPoint {
            c1,
            gamma,
            eta,
            rho,
        })
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }
    pub fn gamma(&self) -> Complex64 {
        self.gamma
    }
    pub fn eta(&self) -> Complex64 {
        self.eta
    }
    pub fn rho(&self) -> Complex64 {
        self.rho
    }
}

/// Carathéodory coefficients `(c1, c2, c3, c4)` from the disk
/// parametrization:
///
/// ```text
/// 2 c2 = c1^2 + γ (4 - c1^2)
/// 4 c3 = c1^3 + 2 (4 - c1^2) c1 γ - (4 - c1^2) c1 γ^2 + 2 (4 - c1^2)(1 - |γ|^2) η
/// 8 c4 = c1^4 + (4 - c1^2) γ (c1^2 (γ^2 - 3γ + 3) + 4γ)
///        - 4 (4 - c1^2)(1 - |γ|^2) (c1 (γ - 1) η + γ̄ η^2 - (1 - |η|^2) ρ)
/// ```
pub fn libera_cs(pp: &ParamPoint) -> SeriesCoeffs<Complex64> {
    let c1 = Complex64::new(pp.c1, 0.0);
    let g = pp.gamma;
    let e = pp.eta;
    let r = pp.rho;
    let s = 4.0 - c1 * c1; // (4 - c1^2), real
    let one_m_g2 = 1.0 - g.norm_sqr();
    let c2 = (c1 * c1 + g * s) / 2.0;
    let c3 = (c1 * c1 * c1 + 2.0 * s * c1 * g - s * c1 * g * g + 2.0 * s * one_m_g2 * e) / 4.0;
    let c4 = (c1.powu(4) + s * g * (c1 * c1 * (g * g - 3.0 * g + 3.0) + 4.0 * g)
        - 4.0 * s * one_m_g2 * (c1 * (g - 1.0) * e + g.conj() * e * e - (1.0 - e.norm_sqr()) * r))
        / 8.0;
    SeriesCoeffs::new(vec![c1, c2, c3, c4])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat_series(coeffs: &[i64]) -> SeriesCoeffs<Rational> {
        SeriesCoeffs::from_i64(coeffs)
    }

    fn assert_close(a: Complex64, b: Complex64) {
        assert!((a - b).norm() < NUMERIC_TOL, "{a} != {b}");
    }

    #[test]
    fn invert_koebe() {
        let inv = invert_series(&rat_series(&[2, 3, 4, 5]));
        assert_eq!(inv, rat_series(&[-2, 5, -14, 42]));
    }

    #[test]
    fn invert_identity_and_shifted() {
        assert_eq!(invert_series(&rat_series(&[0, 0, 0, 0])), rat_series(&[0, 0, 0, 0]));
        let inv = invert_series(&rat_series(&[1, 0, 0, 0]));
        assert_eq!(inv, rat_series(&[-1, 2, -5, 14]));
        // composition oracle: f(f^{-1}(w)) = w through order 5
        let f = rat_series(&[1, 0, 0, 0]);
        let comp = compose(&f, &inv);
        assert!(comp.coeffs().iter().all(Rational::is_zero));
    }

    #[test]
    fn inverse_closed_forms_regression() {
        // A2 = -a2, A3 = 2a2^2 - a3, A4 = 5a2a3 - 5a2^3 - a4,
        // A5 = 14a2^4 - 21a3a2^2 + 6a2a4 + 3a3^2 - a5
        let a = rat_series(&[3, -2, 7, 4]);
        let (a2, a3, a4, a5) = (
            Rational::from_int(3),
            Rational::from_int(-2),
            Rational::from_int(7),
            Rational::from_int(4),
        );
        let expected = vec![
            -&a2,
            Rational::from_int(2) * &a2 * &a2 - &a3,
            Rational::from_int(5) * &a2 * &a3 - Rational::from_int(5) * &a2 * &a2 * &a2 - &a4,
            Rational::from_int(14) * &a2 * &a2 * &a2 * &a2
                - Rational::from_int(21) * &a3 * &a2 * &a2
                + Rational::from_int(6) * &a2 * &a4
                + Rational::from_int(3) * &a3 * &a3
                - &a5,
        ];
        assert_eq!(invert_series(&a).coeffs(), &expected[..]);
    }

    #[test]
    fn caratheodory_examples() {
        assert_eq!(
            caratheodory_to_schlicht(&rat_series(&[2, 2, 2, 2])),
            rat_series(&[2, 3, 4, 5])
        );
        assert_eq!(
            caratheodory_to_schlicht(&rat_series(&[0, 0, 0, 0])),
            rat_series(&[0, 0, 0, 0])
        );
        let a = caratheodory_to_schlicht(&rat_series(&[1, 0, 0, 0]));
        assert_eq!(
            a.coeffs(),
            &[
                Rational::one(),
                Rational::new(1, 2),
                Rational::new(1, 6),
                Rational::new(1, 24)
            ]
        );
    }

    #[test]
    fn hankel_examples() {
        // Koebe inverse coefficients (A2..A5) = (-2, 5, -14, 42)
        let inv = rat_series(&[-2, 5, -14, 42]);
        assert_eq!(hankel_det(3, 1, &inv).unwrap(), Rational::one());
        // determinant of [[a1, a2], [a2, a3]] = a3 - a2^2
        assert_eq!(
            hankel_det(2, 1, &rat_series(&[1, 2, 3])).unwrap(),
            Rational::one()
        );
        assert_eq!(
            hankel_det(2, 2, &rat_series(&[1, 1, 1])).unwrap(),
            Rational::zero()
        );
        assert!(matches!(
            hankel_det(3, 1, &rat_series(&[1, 2])),
            Err(SeriesError::InsufficientCoefficients { needed: 5, .. })
        ));
        assert_eq!(hankel_det(0, 1, &rat_series(&[1])), Err(SeriesError::InvalidWindow));
    }

    #[test]
    fn hankel_matrix_is_symmetric() {
        let a = rat_series(&[4, -7, 9, 2, 11]);
        let m = hankel_matrix(3, 2, &a).unwrap();
        for r in 0..3 {
            for s in 0..3 {
                assert_eq!(m[r][s], m[s][r]);
            }
        }
    }

    #[test]
    fn rotation_examples() {
        let a = SeriesCoeffs::new(vec![
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(5.0, 0.0),
        ]);
        let same = rotate_coeffs(&a, 0.0);
        for (x, y) in same.coeffs().iter().zip(a.coeffs()) {
            assert_close(*x, *y);
        }
        let flipped = rotate_coeffs(&a, std::f64::consts::PI);
        let expected = [-2.0, 3.0, -4.0, 5.0];
        for (x, want) in flipped.coeffs().iter().zip(expected) {
            assert_close(*x, Complex64::new(want, 0.0));
        }
    }

    #[test]
    fn param_point_validation() {
        let unit = Complex64::new(1.0, 0.0);
        assert!(ParamPoint::new(0.5, unit, unit, unit).is_ok());
        assert!(matches!(
            ParamPoint::new(2.5, unit, unit, unit),
            Err(ParamPointError::C1OutOfRange(_))
        ));
        assert!(matches!(
            ParamPoint::new(1.0, Complex64::new(1.1, 0.0), unit, unit),
            Err(ParamPointError::ModulusExceedsOne { name: "gamma", .. })
        ));
    }

    #[test]
    fn libera_examples() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        // c1 = 2 forces c2 = c3 = c4 = 2 regardless of the parameters
        let pp = ParamPoint::new(2.0, Complex64::new(0.3, 0.4), Complex64::new(-0.5, 0.1), one)
            .unwrap();
        let c = libera_cs(&pp);
        for want in 1..=4 {
            assert_close(c.coeffs()[want - 1], Complex64::new(2.0, 0.0));
        }
        // c1 = 0, gamma = eta = 0, rho = 1: only the rho term of 8c4 survives
        let pp = ParamPoint::new(0.0, z, z, one).unwrap();
        let c = libera_cs(&pp);
        assert_close(c.coeffs()[1], z);
        assert_close(c.coeffs()[2], z);
        assert_close(c.coeffs()[3], Complex64::new(2.0, 0.0));
        // c1 = 0, gamma = 1
        let pp = ParamPoint::new(0.0, one, Complex64::new(0.2, 0.7), Complex64::new(-0.1, 0.4))
            .unwrap();
        let c = libera_cs(&pp);
        assert_close(c.coeffs()[1], Complex64::new(2.0, 0.0));
        assert_close(c.coeffs()[2], z);
        assert_close(c.coeffs()[3], Complex64::new(2.0, 0.0));
    }

    // Independent transcription of the parametrization, evaluated
    // with plain complex arithmetic, as an oracle for libera_cs.
    fn libera_oracle(c1: f64, g: Complex64, e: Complex64, r: Complex64) -> [Complex64; 3] {
        let s = Complex64::new(4.0 - c1 * c1, 0.0);
        let c1 = Complex64::new(c1, 0.0);
        let g2 = Complex64::new(1.0 - (g.norm() * g.norm()), 0.0);
        let c2 = (c1 * c1 + g * s) / 2.0;
        let c3 =
            (c1 * c1 * c1 + 2.0 * s * c1 * g - s * c1 * g * g + 2.0 * s * g2 * e) / 4.0;
        let c4 = (c1 * c1 * c1 * c1
            + s * g * (c1 * c1 * (g * g - 3.0 * g + 3.0) + 4.0 * g)
            - 4.0 * s
                * g2
                * (c1 * (g - 1.0) * e + g.conj() * e * e
                    - (1.0 - e.norm() * e.norm()) * r))
            / 8.0;
        [c2, c3, c4]
    }

    #[test]
    fn libera_matches_direct_transcription() {
        let pts = [
            (0.7, (0.3, -0.2), (0.1, 0.5), (-0.4, 0.2)),
            (1.9, (-0.6, 0.3), (0.9, 0.1), (0.0, -0.7)),
            (0.0, (0.0, 1.0), (0.5, -0.5), (1.0, 0.0)),
        ];
        for (c1, g, e, r) in pts {
            let g = Complex64::new(g.0, g.1);
            let e = Complex64::new(e.0, e.1);
            let r = Complex64::new(r.0, r.1);
            let pp = ParamPoint::new(c1, g, e, r).unwrap();
            let got = libera_cs(&pp);
            let want = libera_oracle(c1, g, e, r);
            for k in 0..3 {
                assert_close(got.coeffs()[k + 1], want[k]);
            }
        }
    }
}
