//! Domain types shared by every other module.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::conductor::{self, ConductorError};

pub mod gauss;
pub mod scalar;

pub use gauss::GaussRat;
pub use scalar::{scalar_eval, scalar_mul, Sign, Symbol, SymbolicScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("residue field cardinality q must be at least 2, got {0}")]
    SmallResidueField(u64),
    #[error("block {id}: {constraint}")]
    InvalidBlock { id: String, constraint: String },
    #[error("block {id}: {source}")]
    Conductor {
        id: String,
        #[source]
        source: ConductorError,
    },
    #[error("Sp dimension must be >= 1 (summand {0})")]
    ZeroSpDim(usize),
    #[error("a representation needs at least one summand")]
    EmptyRep,
    #[error("summand {position} carries variable index {var}; variables must be 1..m in order")]
    BadVariable { position: usize, var: usize },
    #[error("two different blocks share the id {0}")]
    ConflictingBlockId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value assigned to symbol {0}")]
    MissingSymbol(String),
    #[error("zero raised to a negative power ({0})")]
    ZeroToNegativePower(String),
    #[error("q^({exp}) is irrational for q = {q}")]
    Irrational { q: String, exp: String },
    #[error("q-exponent {0} has a denominator other than 1 or 2")]
    BadQExponent(String),
    #[error("expected a point with {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// The local field data the formulas depend on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldData {
    q: u64,
    psi_conductor: i64,
}

impl FieldData {
    pub fn new(q: u64, psi_conductor: i64) -> Result<Self, ModelError> {
        if q < 2 {
            return Err(ModelError::SmallResidueField(q));
        }
        Ok(FieldData { q, psi_conductor })
    }

    /// Cardinality of the residue field.
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Conductor `n(ψ)` of the additive character.
    pub fn psi_conductor(&self) -> i64 {
        self.psi_conductor
    }

    pub fn q_rational(&self) -> BigRational {
        BigRational::from_integer(self.q.into())
    }
}

/// Dimensions of the fixed spaces `V^{I_k}` along the ramification
/// filtration together with the indices `[I : I_k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RamificationProfile {
    dim: u32,
    fixed_dims: Vec<u32>,
    indices: Vec<u64>,
}

impl RamificationProfile {
    /// `fixed_dims[k] = dim V^{I_k}` for `k = 0..=r`, `indices[k-1] = [I : I_k]`
    /// for `k = 1..=r`.
    pub fn new(dim: u32, fixed_dims: Vec<u32>, indices: Vec<u64>) -> Result<Self, ConductorError> {
        let invalid = |msg: String| Err(ConductorError::InvalidProfile(msg));
        if dim == 0 {
            return invalid("dim must be positive".into());
        }
        if fixed_dims.len() != indices.len() + 1 {
            return invalid(format!(
                "expected {} fixed dimensions for {} indices, got {}",
                indices.len() + 1,
                indices.len(),
                fixed_dims.len()
            ));
        }
        if fixed_dims.windows(2).any(|w| w[0] > w[1]) {
            return invalid("fixed dimensions must be non-decreasing".into());
        }
        if fixed_dims.iter().any(|&f| f > dim) {
            return invalid("fixed dimensions cannot exceed dim".into());
        }
        if fixed_dims.last() != Some(&dim) {
            return invalid("the last fixed dimension must equal dim".into());
        }
        if indices.contains(&0) {
            return invalid("indices [I:I_k] must be >= 1".into());
        }
        if indices.windows(2).any(|w| w[0] > w[1]) {
            return invalid("indices [I:I_k] must be non-decreasing".into());
        }
        Ok(RamificationProfile {
            dim,
            fixed_dims,
            indices,
        })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn fixed_dims(&self) -> &[u32] {
        &self.fixed_dims
    }

    pub fn indices(&self) -> &[u64] {
        &self.indices
    }
}

/// A block invariant that is either opaque or an exact number.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum BlockConstant {
    #[default]
    Symbolic,
    Value(GaussRat),
}

impl BlockConstant {
    pub fn value(&self) -> Option<&GaussRat> {
        match self {
            BlockConstant::Symbolic => None,
            BlockConstant::Value(v) => Some(v),
        }
    }

    /// `self^exp` as a scalar. The values `±1` fold into the sign; any other
    /// value stays as `symbol` and is supplied again at evaluation time.
    fn power(&self, symbol: Symbol, exp: i64) -> SymbolicScalar {
        match self {
            BlockConstant::Value(v) if v.is_one() => SymbolicScalar::one(),
            BlockConstant::Value(v) if *v == -GaussRat::one() => {
                SymbolicScalar::from_sign(Sign::power_of_minus_one(exp))
            }
            _ => SymbolicScalar::symbol(symbol, exp),
        }
    }
}

/// An irreducible Galois-type representation, known through its invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaloisBlock {
    pub id: String,
    pub dim: u32,
    /// Artin conductor exponent.
    pub a: u32,
    /// `dim V^I`.
    pub dim_i: u32,
    /// `det(-ρ(Φ) | V^I)`.
    pub det_phi: BlockConstant,
    /// `ε_K(V, ψ)`.
    pub eps: BlockConstant,
    pub profile: Option<RamificationProfile>,
}

pub const TRIVIAL_BLOCK_ID: &str = "triv";

impl GaloisBlock {
    pub fn new(
        id: impl Into<String>,
        dim: u32,
        a: u32,
        dim_i: u32,
        det_phi: BlockConstant,
        eps: BlockConstant,
        profile: Option<RamificationProfile>,
    ) -> Result<Self, ModelError> {
        let block = GaloisBlock {
            id: id.into(),
            dim,
            a,
            dim_i,
            det_phi,
            eps,
            profile,
        };
        block.validate()?;
        Ok(block)
    }

    /// The trivial character: `ε_K(1, ψ) = 1` for every ψ, and Φ acts
    /// trivially so `det(-Φ | V^I) = -1`.
    pub fn trivial() -> Self {
        GaloisBlock {
            id: TRIVIAL_BLOCK_ID.into(),
            dim: 1,
            a: 0,
            dim_i: 1,
            det_phi: BlockConstant::Value(-GaussRat::one()),
            eps: BlockConstant::Value(GaussRat::one()),
            profile: None,
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == Self::trivial()
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        let fail = |constraint: &str| {
            Err(ModelError::InvalidBlock {
                id: self.id.clone(),
                constraint: constraint.into(),
            })
        };
        if self.id.is_empty() {
            return fail("id must be nonempty");
        }
        if self.dim == 0 {
            return fail("dim must be positive");
        }
        if self.dim_i > self.dim {
            return fail("dimI must not exceed dim");
        }
        if self.a == 0 && self.dim_i != self.dim {
            return fail("a = 0 requires dimI = dim (unramified blocks are inertia-fixed)");
        }
        if self.dim_i == self.dim && self.a != 0 {
            return fail("dimI = dim forces a = 0 (every conductor term vanishes)");
        }
        if self.a < self.dim - self.dim_i {
            return fail("a must be at least dim - dimI");
        }
        for (name, c) in [("detPhi", &self.det_phi), ("eps", &self.eps)] {
            if c.value().is_some_and(|v| v.is_zero()) {
                return Err(ModelError::InvalidBlock {
                    id: self.id.clone(),
                    constraint: format!("{name} must be nonzero"),
                });
            }
        }
        if self.dim_i == 0 && self.det_phi.value().is_some_and(|v| !v.is_one()) {
            return fail("detPhi must be 1 when dimI = 0 (empty determinant)");
        }
        if let Some(p) = &self.profile {
            if p.dim() != self.dim {
                return fail("profile dim must equal block dim");
            }
            if p.fixed_dims()[0] != self.dim_i {
                return fail("profile must start at dim V^I = dimI");
            }
        }
        conductor::conductor_of_block(self).map_err(|source| ModelError::Conductor {
            id: self.id.clone(),
            source,
        })?;
        Ok(())
    }

    pub fn eps_symbol(&self) -> Symbol {
        Symbol::eps(&self.id)
    }

    pub fn det_phi_symbol(&self) -> Symbol {
        Symbol::det_phi(&self.id)
    }

    /// `ε_K(V, ψ)^exp`.
    pub fn eps_power(&self, exp: i64) -> SymbolicScalar {
        self.eps.power(self.eps_symbol(), exp)
    }

    /// `det(-Φ | V^I)^exp`; the determinant on a zero space is 1.
    pub fn det_phi_power(&self, exp: i64) -> SymbolicScalar {
        if self.dim_i == 0 {
            return SymbolicScalar::one();
        }
        self.det_phi.power(self.det_phi_symbol(), exp)
    }

    /// Numeric values declared for this block's symbols.
    pub fn known_values(&self) -> impl Iterator<Item = (Symbol, GaussRat)> + '_ {
        [
            (self.eps_symbol(), self.eps.value()),
            (self.det_phi_symbol(), self.det_phi.value()),
        ]
        .into_iter()
        .filter_map(|(s, v)| v.map(|v| (s, v.clone())))
    }
}

/// `V_j ⊗ Sp(d_j)` twisted by the torus coordinate `z_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub block: Arc<GaloisBlock>,
    pub sp_dim: u32,
    /// 1-based torus coordinate index.
    pub var: usize,
}

impl Summand {
    pub fn dim(&self) -> u64 {
        u64::from(self.block.dim) * u64::from(self.sp_dim)
    }
}

/// A Weil-Deligne representation `⊕_j V_j ⊗ Sp(d_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WDRep {
    summands: Vec<Summand>,
}

impl WDRep {
    pub fn new(summands: Vec<Summand>) -> Result<Self, ModelError> {
        if summands.is_empty() {
            return Err(ModelError::EmptyRep);
        }
        let mut seen: BTreeMap<&str, &GaloisBlock> = BTreeMap::new();
        for (position, s) in summands.iter().enumerate() {
            if s.var != position + 1 {
                return Err(ModelError::BadVariable {
                    position: position + 1,
                    var: s.var,
                });
            }
            if s.sp_dim == 0 {
                return Err(ModelError::ZeroSpDim(position + 1));
            }
            match seen.get(s.block.id.as_str()) {
                Some(other) if **other != *s.block => {
                    return Err(ModelError::ConflictingBlockId(s.block.id.clone()))
                }
                Some(_) => {}
                None => {
                    s.block.validate()?;
                    seen.insert(&s.block.id, &s.block);
                }
            }
        }
        Ok(WDRep { summands })
    }

    /// Build from `(block, d_j)` pairs, numbering variables in order.
    pub fn from_parts(
        parts: impl IntoIterator<Item = (Arc<GaloisBlock>, u32)>,
    ) -> Result<Self, ModelError> {
        let summands = parts
            .into_iter()
            .enumerate()
            .map(|(j, (block, sp_dim))| Summand {
                block,
                sp_dim,
                var: j + 1,
            })
            .collect();
        WDRep::new(summands)
    }

    /// `⊕_j Sp(d_j)` with trivial blocks.
    pub fn unramified(dims: &[u32]) -> Result<Self, ModelError> {
        let triv = Arc::new(GaloisBlock::trivial());
        WDRep::from_parts(dims.iter().map(|&d| (triv.clone(), d)))
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    /// Number of summands, i.e. the rank of the orbit torus.
    pub fn rank(&self) -> usize {
        self.summands.len()
    }

    /// Total dimension `n`.
    pub fn dim(&self) -> u64 {
        self.summands.iter().map(Summand::dim).sum()
    }

    /// Direct sum on disjoint variables: `other`'s coordinates follow `self`'s.
    pub fn direct_sum(&self, other: &WDRep) -> Result<WDRep, ModelError> {
        WDRep::from_parts(
            self.summands
                .iter()
                .chain(&other.summands)
                .map(|s| (s.block.clone(), s.sp_dim)),
        )
    }

    /// Reorder summands: position `i` of the result holds summand `order[i]` (0-based).
    pub fn reordered(&self, order: &[usize]) -> Result<WDRep, ModelError> {
        WDRep::from_parts(
            order
                .iter()
                .map(|&i| (self.summands[i].block.clone(), self.summands[i].sp_dim)),
        )
    }

    /// Values declared in the block catalog, keyed by symbol.
    pub fn known_values(&self) -> BTreeMap<Symbol, GaussRat> {
        self.summands
            .iter()
            .flat_map(|s| s.block.known_values())
            .collect()
    }

    /// Distinct blocks in order of first appearance.
    pub fn blocks(&self) -> Vec<Arc<GaloisBlock>> {
        let mut out: Vec<Arc<GaloisBlock>> = Vec::new();
        for s in &self.summands {
            if !out.iter().any(|b| b.id == s.block.id) {
                out.push(s.block.clone());
            }
        }
        out
    }
}

/// Exponents `β` of the rational character `z ↦ ∏ z_j^{β_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TorusCharacter(pub Vec<i64>);

impl TorusCharacter {
    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn eval_exact(&self, point: &[GaussRat]) -> Result<GaussRat, EvalError> {
        if point.len() != self.0.len() {
            return Err(EvalError::DimensionMismatch {
                expected: self.0.len(),
                got: point.len(),
            });
        }
        let mut value = GaussRat::one();
        for (j, (z, &b)) in point.iter().zip(&self.0).enumerate() {
            let p = gauss::pow(z, b)
                .ok_or_else(|| EvalError::ZeroToNegativePower(format!("z_{}", j + 1)))?;
            value = gauss::mul(&value, &p);
        }
        Ok(value)
    }
}

/// `constant · ∏ z_j^{β_j}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EpsilonFactor {
    pub constant: SymbolicScalar,
    pub character: TorusCharacter,
}

impl EpsilonFactor {
    pub fn new(constant: SymbolicScalar, beta: Vec<i64>) -> Self {
        EpsilonFactor {
            constant,
            character: TorusCharacter(beta),
        }
    }

    pub fn beta(&self) -> &[i64] {
        &self.character.0
    }

    pub fn rank(&self) -> usize {
        self.character.rank()
    }

    /// Pointwise product on the same torus.
    ///
    /// Panics if the ranks differ.
    pub fn mul(&self, other: &EpsilonFactor) -> EpsilonFactor {
        assert_eq!(
            self.rank(),
            other.rank(),
            "epsilon factors on different tori"
        );
        EpsilonFactor::new(
            &self.constant * &other.constant,
            self.beta()
                .iter()
                .zip(other.beta())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Product of functions on disjoint variable sets: the result lives on
    /// the concatenated torus.
    pub fn disjoint_product(&self, other: &EpsilonFactor) -> EpsilonFactor {
        EpsilonFactor::new(
            &self.constant * &other.constant,
            self.beta().iter().chain(other.beta()).copied().collect(),
        )
    }

    /// View a single-variable factor as a function of coordinate `var`
    /// (1-based) on a torus of rank `rank`.
    pub fn embed(&self, var: usize, rank: usize) -> EpsilonFactor {
        assert_eq!(
            self.rank(),
            1,
            "only single-variable factors can be embedded"
        );
        assert!((1..=rank).contains(&var));
        let mut beta = vec![0; rank];
        beta[var - 1] = self.beta()[0];
        EpsilonFactor::new(self.constant.clone(), beta)
    }

    /// Substitute `z_1 = q^c` and drop the first coordinate.
    pub fn specialize_first(&self, c: Rational64) -> EpsilonFactor {
        assert!(self.rank() >= 1);
        let b0 = self.beta()[0];
        EpsilonFactor::new(
            &self.constant * &SymbolicScalar::q_power(c * b0),
            self.beta()[1..].to_vec(),
        )
    }

    pub fn eval_exact(
        &self,
        q: &BigRational,
        assignment: &BTreeMap<Symbol, GaussRat>,
        point: &[GaussRat],
    ) -> Result<GaussRat, EvalError> {
        let chi = self.character.eval_exact(point)?;
        let c = self.constant.eval_exact(q, assignment)?;
        Ok(gauss::mul(&c, &chi))
    }

    pub fn eval_complex(
        &self,
        q: f64,
        assignment: &BTreeMap<Symbol, Complex64>,
        point: &[Complex64],
    ) -> Result<Complex64, EvalError> {
        if point.len() != self.rank() {
            return Err(EvalError::DimensionMismatch {
                expected: self.rank(),
                got: point.len(),
            });
        }
        let mut value = self.constant.eval_complex(q, assignment)?;
        for (j, (z, &b)) in point.iter().zip(self.beta()).enumerate() {
            if *z == Complex64::new(0.0, 0.0) && b < 0 {
                return Err(EvalError::ZeroToNegativePower(format!("z_{}", j + 1)));
            }
            value *= z.powi(b as i32);
        }
        Ok(value)
    }
}

impl fmt::Display for EpsilonFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vars: Vec<String> = self
            .beta()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(j, &b)| match b {
                1 => format!("z{}", j + 1),
                _ => format!("z{}^{}", j + 1, b),
            })
            .collect();
        let constant = self.constant.to_string();
        let vars = vars.join("·");
        match (constant.as_str(), vars.is_empty()) {
            (_, true) => write!(f, "{constant}"),
            ("1", false) => write!(f, "{vars}"),
            ("-1", false) => write!(f, "-{vars}"),
            _ => write!(f, "{constant}·{vars}"),
        }
    }
}

/// One factor `Sym^r(ℂ^×)` of a component, indexed by the Sp dimension `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Part {
    pub t: u32,
    pub r: u32,
}

/// The component `∏ Sym^{r_i}(ℂ^×)` with symmetry group `∏ 𝔖_{r_i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ComponentDescriptor {
    pub parts: Vec<Part>,
    pub block_labels: Option<Vec<String>>,
}

impl ComponentDescriptor {
    /// `Σ r_i t_i`; equals `n` in the unramified case.
    pub fn weight(&self) -> u64 {
        self.parts
            .iter()
            .map(|p| u64::from(p.t) * u64::from(p.r))
            .sum()
    }

    /// Dimension of the component, `Σ r_i`.
    pub fn dimension(&self) -> u64 {
        self.parts.iter().map(|p| u64::from(p.r)).sum()
    }

    /// Order of `∏ 𝔖_{r_i}`.
    pub fn symmetry_order(&self) -> u128 {
        self.parts
            .iter()
            .map(|p| (1..=u128::from(p.r)).product::<u128>())
            .product()
    }

    /// Human-readable variety, e.g. `Sym^3(ℂ^×) × Sym^2(ℂ^×) × ℂ^×`.
    pub fn variety(&self) -> String {
        self.parts
            .iter()
            .map(|p| match p.r {
                1 => "ℂ^×".to_string(),
                r => format!("Sym^{r}(ℂ^×)"),
            })
            .collect::<Vec<_>>()
            .join(" × ")
    }
}

impl fmt::Display for ComponentDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.variety())
    }
}
