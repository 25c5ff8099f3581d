//! Brute-force verification of the closed forms.
//!
//! The oracle builds the explicit `Sp(d)` model, forms `E^I = V^I ⊗ Sp(d)`
//! with Frobenius `φ_I ⊗ z·diag(1, q^{-1}, …)` and monodromy `1 ⊗ shift`,
//! and computes `det(-Φ)` on `E^I / ker N` by exact row reduction. Nothing
//! here reuses the determinant formula from [`crate::epsilon`].

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::epsilon::{epsilon_wd, weil_part};
use crate::model::gauss::{self, GaussRat};
use crate::model::{EvalError, FieldData, Symbol, WDRep};

pub mod matrix;

pub use matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("summand {summand}: Φ|V^I must be {expected}x{expected}, got {rows}x{cols}")]
    PhiShape {
        summand: usize,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Φ|V^I is singular")]
    SingularPhi,
    #[error("sample coordinate z_{0} is zero")]
    ZeroSample(usize),
    #[error("expected {expected} sample coordinates, got {got}")]
    SampleLength { expected: usize, got: usize },
    #[error("block {block}: det(-Φ|V^I) = {explicit} but the catalog declares {declared}")]
    DetMismatch {
        block: String,
        explicit: String,
        declared: String,
    },
    #[error("kernel of N has dimension {got}, expected {expected}")]
    KernelDimension { expected: usize, got: usize },
    #[error("singular change of basis while forming the quotient")]
    SingularConstruction,
    #[error("ker N is not Φ-stable")]
    NotInvariant,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// `Sp(d)` with geometric Frobenius `diag(1, q^{-1}, …, q^{-(d-1)})` and
/// `N` the lower shift.
pub fn sp_model(d: usize, q: u64) -> (Matrix, Matrix) {
    let q = gauss::from_int(q as i64);
    let entries: Vec<GaussRat> = (0..d)
        .map(|i| gauss::pow(&q, -(i as i64)).expect("q is nonzero"))
        .collect();
    (Matrix::diag(&entries), Matrix::lower_shift(d))
}

/// An explicit model of one summand at a sample point of its orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitSummand {
    pub phi_i: Matrix,
    pub sp_dim: usize,
    /// `z = q^{-s}`.
    pub z_value: GaussRat,
}

/// `det(-Φ | E^I / E^I_N)` computed from the matrices.
pub fn det_factor_oracle(e: &ExplicitSummand, f: &FieldData) -> Result<GaussRat, OracleError> {
    let dim_i = e.phi_i.rows();
    if !e.phi_i.is_square() {
        return Err(OracleError::PhiShape {
            summand: 0,
            expected: dim_i,
            rows: e.phi_i.rows(),
            cols: e.phi_i.cols(),
        });
    }
    if e.z_value.is_zero() {
        return Err(OracleError::ZeroSample(0));
    }
    let d = e.sp_dim;
    let (sp_phi, sp_n) = sp_model(d, f.q());
    let frob = e.phi_i.kron(&sp_phi.scale(&e.z_value));
    let mono = Matrix::identity(dim_i).kron(&sp_n);
    let n = frob.rows();

    let kernel = mono.kernel();
    if kernel.len() != dim_i {
        return Err(OracleError::KernelDimension {
            expected: dim_i,
            got: kernel.len(),
        });
    }
    let k = kernel.len();

    // complete the kernel basis with standard vectors
    let mut basis = kernel;
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let mut candidate = vec![GaussRat::zero(); n];
        candidate[i] = GaussRat::one();
        basis.push(candidate);
        if Matrix::from_columns(n, &basis).rank() < basis.len() {
            basis.pop();
        }
    }
    let change = Matrix::from_columns(n, &basis);
    let minus_frob = frob.neg();
    let conjugated = change
        .solve(&minus_frob.mul(&change))
        .ok_or(OracleError::SingularConstruction)?;
    if !conjugated.block(k, 0, n - k, k).is_zero() {
        return Err(OracleError::NotInvariant);
    }
    Ok(conjugated.block(k, k, n - k, n - k).det())
}

fn check_sample(rep: &WDRep, sample: &[GaussRat]) -> Result<(), OracleError> {
    if sample.len() != rep.rank() {
        return Err(OracleError::SampleLength {
            expected: rep.rank(),
            got: sample.len(),
        });
    }
    if let Some(j) = sample.iter().position(Zero::is_zero) {
        return Err(OracleError::ZeroSample(j + 1));
    }
    Ok(())
}

/// Both sides of the oracle comparison for one sample.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub closed_form: GaussRat,
    pub brute_force: GaussRat,
}

impl OracleComparison {
    pub fn agrees(&self) -> bool {
        self.closed_form == self.brute_force
    }
}

/// Evaluate `epsilon_wd` at `sample` and compare with `weil_part · ∏ det_factor_oracle`.
///
/// `phis[j]` is an explicit `Φ|V^I` for summand `j`; its determinant
/// supplies the `detPhi` symbol of that summand's block.
pub fn epsilon_oracle_compare(
    rep: &WDRep,
    phis: &[Matrix],
    f: &FieldData,
    sample: &[GaussRat],
    eps_values: &BTreeMap<Symbol, GaussRat>,
) -> Result<OracleComparison, OracleError> {
    check_sample(rep, sample)?;
    if phis.len() != rep.rank() {
        return Err(OracleError::SampleLength {
            expected: rep.rank(),
            got: phis.len(),
        });
    }
    let mut assignment = rep.known_values();
    for (sym, v) in eps_values {
        assignment.entry(sym.clone()).or_insert_with(|| v.clone());
    }
    for (j, (s, phi)) in rep.summands().iter().zip(phis).enumerate() {
        let dim_i = s.block.dim_i as usize;
        if !phi.is_square() || phi.rows() != dim_i {
            return Err(OracleError::PhiShape {
                summand: j + 1,
                expected: dim_i,
                rows: phi.rows(),
                cols: phi.cols(),
            });
        }
        let det = phi.neg().det();
        if det.is_zero() {
            return Err(OracleError::SingularPhi);
        }
        let sym = s.block.det_phi_symbol();
        match assignment.get(&sym) {
            Some(declared) if *declared != det => {
                return Err(OracleError::DetMismatch {
                    block: s.block.id.clone(),
                    explicit: gauss::format(&det),
                    declared: gauss::format(declared),
                })
            }
            Some(_) => {}
            None => {
                assignment.insert(sym, det);
            }
        }
    }

    let q = f.q_rational();
    let closed_form = epsilon_wd(rep, f).eval_exact(&q, &assignment, sample)?;
    let mut brute_force = weil_part(rep, f).eval_exact(&q, &assignment, sample)?;
    for ((s, phi), z) in rep.summands().iter().zip(phis).zip(sample) {
        let explicit = ExplicitSummand {
            phi_i: phi.clone(),
            sp_dim: s.sp_dim as usize,
            z_value: z.clone(),
        };
        brute_force = gauss::mul(&brute_force, &det_factor_oracle(&explicit, f)?);
    }
    Ok(OracleComparison {
        closed_form,
        brute_force,
    })
}

/// `true` iff the closed form and the matrix model agree exactly.
pub fn epsilon_oracle_check(
    rep: &WDRep,
    phis: &[Matrix],
    f: &FieldData,
    sample: &[GaussRat],
    eps_values: &BTreeMap<Symbol, GaussRat>,
) -> Result<bool, OracleError> {
    epsilon_oracle_compare(rep, phis, f, sample, eps_values).map(|c| c.agrees())
}

/// Random nonzero rational with numerator and denominator below 10.
pub fn random_nonzero_rational<R: Rng>(rng: &mut R) -> GaussRat {
    let mut num = rng.gen_range(-9i64..=8);
    if num >= 0 {
        num += 1;
    }
    gauss::from_frac(num, rng.gen_range(1i64..=9))
}

/// Random diagonal `Φ|V^I` of size `dim_i`, with `det(-Φ)` pinned to
/// `target` when given.
pub fn random_diagonal_phi<R: Rng>(rng: &mut R, dim_i: usize, target: Option<&GaussRat>) -> Matrix {
    let mut entries: Vec<GaussRat> = (0..dim_i).map(|_| random_nonzero_rational(rng)).collect();
    if let (Some(target), Some(last)) = (target, dim_i.checked_sub(1)) {
        // det(-diag(x)) = (-1)^n ∏ x
        let sign = if dim_i.is_multiple_of(2) {
            GaussRat::one()
        } else {
            -GaussRat::one()
        };
        let others = entries[..last]
            .iter()
            .fold(sign, |acc, x| gauss::mul(&acc, x));
        entries[last] = target / others;
    }
    Matrix::diag(&entries)
}

/// A sample on which the closed form and the matrix model disagreed.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub sample_index: usize,
    pub point: Vec<GaussRat>,
    pub phi_diagonals: Vec<Vec<GaussRat>>,
    pub comparison: OracleComparison,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepReport {
    pub seed: u64,
    pub samples: usize,
    pub agreed: usize,
    pub failures: Vec<Counterexample>,
}

impl SweepReport {
    pub fn all_agree(&self) -> bool {
        self.failures.is_empty() && self.agreed == self.samples
    }
}

/// Randomized oracle sweep over a fixed representation.
///
/// Each sample draws diagonal `Φ|V^I` per block (honouring declared
/// `detPhi` values), values for unassigned `eps` symbols, and a random
/// rational torus point. Deterministic in `seed`.
pub fn sweep(
    rep: &WDRep,
    f: &FieldData,
    eps_values: &BTreeMap<Symbol, GaussRat>,
    seed: u64,
    samples: usize,
) -> Result<SweepReport, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let blocks = rep.blocks();
    let mut report = SweepReport {
        seed,
        samples,
        ..SweepReport::default()
    };
    for sample_index in 0..samples {
        let mut eps = eps_values.clone();
        let mut block_phi = BTreeMap::new();
        for b in &blocks {
            let phi = random_diagonal_phi(&mut rng, b.dim_i as usize, b.det_phi.value());
            block_phi.insert(b.id.clone(), phi);
            let sym = b.eps_symbol();
            if b.eps.value().is_none() && !eps.contains_key(&sym) {
                eps.insert(sym, random_nonzero_rational(&mut rng));
            }
        }
        let phis: Vec<Matrix> = rep
            .summands()
            .iter()
            .map(|s| block_phi[&s.block.id].clone())
            .collect();
        let point: Vec<GaussRat> = (0..rep.rank())
            .map(|_| random_nonzero_rational(&mut rng))
            .collect();
        let comparison = epsilon_oracle_compare(rep, &phis, f, &point, &eps)?;
        if comparison.agrees() {
            report.agreed += 1;
        } else {
            let phi_diagonals = phis
                .iter()
                .map(|m| (0..m.rows()).map(|i| m[(i, i)].clone()).collect())
                .collect();
            report.failures.push(Counterexample {
                sample_index,
                point,
                phi_diagonals,
                comparison,
            });
        }
    }
    Ok(report)
}

/// `ΦNΦ^{-1} = q^{-1} N`, checked as `ΦN = q^{-1} NΦ`.
pub fn satisfies_wd_relation(phi: &Matrix, n: &Matrix, q: u64) -> bool {
    let q_inv = gauss::from_rational(BigRational::new(1.into(), q.into()));
    phi.mul(n) == n.mul(phi).scale(&q_inv)
}
