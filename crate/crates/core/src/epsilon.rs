//! Closed-form epsilon factors of Weil-Deligne representations.
//!
//! Every summand `V_j^Gal ⊗ ω_{s_j} ⊗ Sp(d_j)` contributes two pieces:
//!
//! * the Weil part, from additivity and the unramified twist rule over the
//!   constituents `V_j^Gal ⊗ ω_{s_j + k}`, `0 ≤ k < d_j`:
//!   `ε(V_j^Gal)^{d_j} · q^{-(s_j d_j + d_j(d_j-1)/2)(a_j + n(ψ) dim_j)}`;
//! * the determinant of `-Φ` on `E^I / E^I_N`:
//!   `det(-Φ|V_j^I)^{d_j-1} · q^{-s_j (d_j-1) dim V_j^I} · q^{-(d_j-2)(d_j-1)/2 · dim V_j^I}`.
//!
//! With `z_j = q^{-s_j}` the `s_j`-dependence becomes `z_j^{β_j}` with
//! `β_j = (d_j-1) dim V_j^I + d_j (a_j + n(ψ) dim_j)`, and the rest is the
//! constant of the component. The base point of every orbit is `z_j = 1`.

use num_complex::Complex64;
use num_rational::Rational64;
use thiserror::Error;

use crate::model::{
    gauss, EpsilonFactor, EvalError, FieldData, GaussRat, Summand, SymbolicScalar, TorusCharacter,
    WDRep,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EpsilonError {
    #[error("coordinate z_{0} is zero")]
    ZeroCoordinate(usize),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("scaling by w changed the value by {got}, expected w^{total} = {expected}")]
    HomogeneityViolated {
        total: i64,
        got: String,
        expected: String,
    },
}

/// `a(V_j) + n(ψ) dim V_j`, the twist exponent of a single constituent.
fn twist_exponent(s: &Summand, f: &FieldData) -> i64 {
    i64::from(s.block.a) + f.psi_conductor() * i64::from(s.block.dim)
}

/// `β_j = (d_j - 1) dim V_j^I + d_j (a(V_j) + n(ψ) dim V_j)`.
pub fn beta(s: &Summand, f: &FieldData) -> i64 {
    let d = i64::from(s.sp_dim);
    (d - 1) * i64::from(s.block.dim_i) + d * twist_exponent(s, f)
}

pub fn character(r: &WDRep, f: &FieldData) -> TorusCharacter {
    TorusCharacter(r.summands().iter().map(|s| beta(s, f)).collect())
}

fn weil_part_of(s: &Summand, f: &FieldData) -> (SymbolicScalar, i64) {
    let d = i64::from(s.sp_dim);
    let t = twist_exponent(s, f);
    let constant = &s.block.eps_power(d)
        * &SymbolicScalar::q_power(Rational64::from_integer(-(d - 1) * d / 2 * t));
    (constant, d * t)
}

/// The product of `ε_K(V_j, ψ)` over all Weil constituents, ignoring `N`.
pub fn weil_part(r: &WDRep, f: &FieldData) -> EpsilonFactor {
    let (constants, beta): (Vec<_>, Vec<_>) =
        r.summands().iter().map(|s| weil_part_of(s, f)).unzip();
    EpsilonFactor::new(constants.into_iter().product(), beta)
}

/// `det(-Φ | E^I / E^I_N)` for one summand, as a function of its own `z`.
pub fn det_factor(s: &Summand, _f: &FieldData) -> EpsilonFactor {
    let d = i64::from(s.sp_dim);
    let dim_i = i64::from(s.block.dim_i);
    // (d-2)(d-1)/2 vanishes at d = 1 and d = 2
    let q_exp = -(d - 2) * (d - 1) / 2 * dim_i;
    let constant =
        &s.block.det_phi_power(d - 1) * &SymbolicScalar::q_power(Rational64::from_integer(q_exp));
    EpsilonFactor::new(constant, vec![(d - 1) * dim_i])
}

/// `ε_K((V, N), ψ)` as `e(𝔛, ψ) · ∏ z_j^{β_j}`.
pub fn epsilon_wd(r: &WDRep, f: &FieldData) -> EpsilonFactor {
    let m = r.rank();
    let result = r.summands().iter().fold(weil_part(r, f), |acc, s| {
        acc.mul(&det_factor(s, f).embed(s.var, m))
    });
    debug_assert_eq!(result.character, character(r, f));
    result
}

/// The constant split as (ε-part, determinant part).
pub fn constant_parts(r: &WDRep, f: &FieldData) -> (SymbolicScalar, SymbolicScalar) {
    let eps_part = r.summands().iter().map(|s| weil_part_of(s, f).0).product();
    let det_part = r
        .summands()
        .iter()
        .map(|s| det_factor(s, f).constant)
        .product();
    (eps_part, det_part)
}

/// `ε_K(s, V, ψ) = ε_K(V ⊗ ω_{s-1/2}, ψ)` on the extended torus
/// `(z_s, z_1, …, z_m)` with `z_s = q^{-s}`.
pub fn epsilon_three_var(r: &WDRep, f: &FieldData) -> EpsilonFactor {
    let base = epsilon_wd(r, f);
    let total = base.character.total_degree();
    // each z_j becomes z_s · z_j · q^{1/2}
    let constant = &base.constant * &SymbolicScalar::q_power(Rational64::new(total, 2));
    let mut beta = Vec::with_capacity(base.rank() + 1);
    beta.push(total);
    beta.extend_from_slice(base.beta());
    EpsilonFactor::new(constant, beta)
}

/// Undo [`epsilon_three_var`] by evaluating at `s = 1/2`, i.e. `z_s = q^{-1/2}`.
pub fn undo_three_var(e: &EpsilonFactor) -> EpsilonFactor {
    e.specialize_first(Rational64::new(-1, 2))
}

/// Ratio `χ(w·z) / χ(z)` when every coordinate is scaled by `w`; the
/// constant cancels. Checked against `w^{Σ β_j}`.
pub fn global_twist_scale(
    e: &EpsilonFactor,
    w: &GaussRat,
    point: &[GaussRat],
) -> Result<GaussRat, EpsilonError> {
    if let Some(j) = point.iter().position(num_traits::Zero::is_zero) {
        return Err(EpsilonError::ZeroCoordinate(j + 1));
    }
    if num_traits::Zero::is_zero(w) {
        return Err(EpsilonError::ZeroCoordinate(0));
    }
    let scaled: Vec<GaussRat> = point.iter().map(|z| gauss::mul(z, w)).collect();
    let ratio = e.character.eval_exact(&scaled)? / e.character.eval_exact(point)?;
    let total = e.character.total_degree();
    let expected = gauss::pow(w, total).ok_or(EpsilonError::ZeroCoordinate(0))?;
    if ratio != expected {
        return Err(EpsilonError::HomogeneityViolated {
            total,
            got: gauss::format(&ratio),
            expected: gauss::format(&expected),
        });
    }
    Ok(ratio)
}

/// Floating-point variant of [`global_twist_scale`] for complex `w`.
pub fn global_twist_scale_complex(
    e: &EpsilonFactor,
    w: Complex64,
    point: &[Complex64],
) -> Result<Complex64, EpsilonError> {
    let zero = Complex64::new(0.0, 0.0);
    if let Some(j) = point.iter().position(|z| *z == zero) {
        return Err(EpsilonError::ZeroCoordinate(j + 1));
    }
    if w == zero {
        return Err(EpsilonError::ZeroCoordinate(0));
    }
    if point.len() != e.rank() {
        return Err(EvalError::DimensionMismatch {
            expected: e.rank(),
            got: point.len(),
        }
        .into());
    }
    Ok(point
        .iter()
        .zip(e.beta())
        .map(|(z, &b)| (z * w).powi(b as i32) / z.powi(b as i32))
        .product())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;
    use std::sync::Arc;

    use super::*;
    use crate::model::gauss::{from_frac, from_int, rat};
    use crate::model::{BlockConstant, GaloisBlock, Sign, Symbol};

    fn field(q: u64, psi: i64) -> FieldData {
        FieldData::new(q, psi).unwrap()
    }

    fn block(id: &str, dim: u32, a: u32, dim_i: u32) -> Arc<GaloisBlock> {
        Arc::new(
            GaloisBlock::new(
                id,
                dim,
                a,
                dim_i,
                BlockConstant::Symbolic,
                BlockConstant::Symbolic,
                None,
            )
            .unwrap(),
        )
    }

    fn single(b: Arc<GaloisBlock>, d: u32) -> Summand {
        Summand {
            block: b,
            sp_dim: d,
            var: 1,
        }
    }

    fn q_pow(e: i64) -> SymbolicScalar {
        SymbolicScalar::q_power(Rational64::from_integer(e))
    }

    #[test]
    fn beta_examples() {
        let triv = Arc::new(GaloisBlock::trivial());
        for d in 1..10 {
            assert_eq!(
                beta(&single(triv.clone(), d), &field(5, 0)),
                i64::from(d) - 1
            );
        }
        assert_eq!(beta(&single(triv.clone(), 1), &field(5, 0)), 0);
        assert_eq!(beta(&single(block("V", 2, 3, 1), 2), &field(5, 1)), 11);
    }

    #[test]
    fn character_examples() {
        let f = field(3, 0);
        let gl19 = WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap();
        assert_eq!(character(&gl19, &f).0, vec![1, 1, 1, 2, 2, 6]);
        assert_eq!(character(&WDRep::unramified(&[1]).unwrap(), &f).0, vec![0]);
        let two = WDRep::from_parts([
            (block("chi", 1, 1, 0), 2),
            (Arc::new(GaloisBlock::trivial()), 3),
        ])
        .unwrap();
        assert_eq!(character(&two, &f).0, vec![2, 2]);
    }

    #[test]
    fn weil_part_examples() {
        let f = field(7, 0);
        for d in 1..6 {
            let w = weil_part(&WDRep::unramified(&[d]).unwrap(), &f);
            assert!(w.constant.is_one());
            assert_eq!(w.beta(), &[0]);
        }
        let chi = block("chi", 1, 1, 0);
        let w = weil_part(&WDRep::from_parts([(chi.clone(), 2)]).unwrap(), &f);
        let expected = &SymbolicScalar::symbol(Symbol::eps("chi"), 2) * &q_pow(-1);
        assert_eq!(w.constant, expected);
        assert_eq!(w.beta(), &[2]);
    }

    #[test]
    fn det_factor_examples() {
        let f = field(5, 0);
        let triv = Arc::new(GaloisBlock::trivial());
        let d1 = det_factor(&single(block("V", 2, 3, 1), 1), &f);
        assert!(d1.constant.is_one());
        assert_eq!(d1.beta(), &[0]);
        let d2 = det_factor(&single(triv.clone(), 2), &f);
        assert_eq!(d2.constant, SymbolicScalar::minus_one());
        assert_eq!(d2.beta(), &[1]);
        let d3 = det_factor(&single(triv, 3), &f);
        assert_eq!(d3.constant, q_pow(-1));
        assert_eq!(d3.beta(), &[2]);
    }

    #[test]
    fn gl19_epsilon() {
        let f = field(2, 0);
        let e = epsilon_wd(&WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap(), &f);
        assert_eq!(e.constant, &SymbolicScalar::minus_one() * &q_pow(-17));
        assert_eq!(e.beta(), &[1, 1, 1, 2, 2, 6]);
    }

    #[test]
    fn steinberg_and_trivial() {
        let f = field(2, 0);
        let st = epsilon_wd(&WDRep::unramified(&[2]).unwrap(), &f);
        assert_eq!(st, EpsilonFactor::new(SymbolicScalar::minus_one(), vec![1]));
        let triv = epsilon_wd(&WDRep::unramified(&[1]).unwrap(), &f);
        assert_eq!(triv, EpsilonFactor::new(SymbolicScalar::one(), vec![0]));
    }

    #[test]
    fn constant_is_product_of_parts() {
        let f = field(3, 2);
        let r = WDRep::from_parts([
            (block("V", 2, 3, 1), 3),
            (block("W", 3, 2, 1), 2),
            (Arc::new(GaloisBlock::trivial()), 4),
        ])
        .unwrap();
        let (eps_part, det_part) = constant_parts(&r, &f);
        let e = epsilon_wd(&r, &f);
        assert_eq!(e.constant, &eps_part * &det_part);
        assert_eq!(e.character, character(&r, &f));
    }

    #[test]
    fn twist_scaling_is_independent_of_s() {
        // the conductor enters only through beta; shifting all s_j by t
        // multiplies by q^{-t Σβ}, checked at t = 1 (z -> z/q)
        let f = field(3, 1);
        let r = WDRep::from_parts([(block("V", 2, 3, 1), 2), (block("W", 1, 1, 0), 3)]).unwrap();
        let e = epsilon_wd(&r, &f);
        let ratio = global_twist_scale(&e, &from_frac(1, 3), &[from_int(2), from_frac(5, 7)]);
        let total = e.character.total_degree();
        assert_eq!(ratio.unwrap(), gauss::pow(&from_frac(1, 3), total).unwrap());
    }

    #[test]
    fn three_var_examples() {
        let f = field(4, 0);
        let trivial = epsilon_three_var(&WDRep::unramified(&[1]).unwrap(), &f);
        assert_eq!(
            trivial,
            EpsilonFactor::new(SymbolicScalar::one(), vec![0, 0])
        );
        let st = epsilon_three_var(&WDRep::unramified(&[2]).unwrap(), &f);
        let expected = SymbolicScalar::new(Sign::Minus, Rational64::new(1, 2), BTreeMap::new());
        assert_eq!(st, EpsilonFactor::new(expected, vec![1, 1]));
        assert_eq!(
            undo_three_var(&st),
            epsilon_wd(&WDRep::unramified(&[2]).unwrap(), &f)
        );
        // at s = 1/2 the extended form evaluates to ε_K(V, ψ)
        let q = rat(4, 1);
        let asg = BTreeMap::new();
        let z = from_frac(3, 5);
        let half = from_frac(1, 2); // q^{-1/2} for q = 4
        assert_eq!(
            st.eval_exact(&q, &asg, &[half, z.clone()]).unwrap(),
            epsilon_wd(&WDRep::unramified(&[2]).unwrap(), &f)
                .eval_exact(&q, &asg, &[z])
                .unwrap()
        );
    }

    #[test]
    fn global_twist_examples() {
        let e = epsilon_wd(
            &WDRep::unramified(&[2, 2, 2, 3, 3, 7]).unwrap(),
            &field(5, 0),
        );
        let point: Vec<_> = (1..=6).map(from_int).collect();
        assert_eq!(
            global_twist_scale(&e, &from_int(1), &point).unwrap(),
            from_int(1)
        );
        assert_eq!(
            global_twist_scale(&e, &from_int(2), &point).unwrap(),
            from_int(1 << 13)
        );
        let e1 = epsilon_wd(&WDRep::unramified(&[1]).unwrap(), &field(5, 0));
        assert_eq!(
            global_twist_scale(&e1, &from_frac(-7, 3), &[from_int(9)]).unwrap(),
            from_int(1)
        );
        let mut zero_point = point.clone();
        zero_point[2] = from_int(0);
        assert_eq!(
            global_twist_scale(&e, &from_int(2), &zero_point),
            Err(EpsilonError::ZeroCoordinate(3))
        );
        let c = global_twist_scale_complex(
            &e,
            Complex64::new(0.0, 1.0),
            &[Complex64::new(1.0, 0.0); 6],
        )
        .unwrap();
        // i^13 = i
        assert!((c - Complex64::new(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn permutation_equivariance() {
        let f = field(5, 1);
        let r = WDRep::from_parts([
            (block("V", 2, 3, 1), 3),
            (block("W", 3, 2, 1), 2),
            (Arc::new(GaloisBlock::trivial()), 4),
        ])
        .unwrap();
        let order = [2, 0, 1];
        let permuted = r.reordered(&order).unwrap();
        let e = epsilon_wd(&r, &f);
        let ep = epsilon_wd(&permuted, &f);
        assert_eq!(e.constant, ep.constant);
        let moved: Vec<i64> = order.iter().map(|&i| e.beta()[i]).collect();
        assert_eq!(ep.beta(), moved.as_slice());
    }
}
