//! Weight sequences and graded-ring calculus: Gorenstein parameters,
//! semi-orthogonal decomposition shapes, object counts, Knörrer doubling.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::abgroup::{boxminus, weight_group, GroupElement, GroupError, PointedAbelianGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WeightError {
    #[error("weight sequence is empty")]
    Empty,
    #[error("weight {0} is not >= 1")]
    NonPositiveWeight(i64),
    #[error("generator {index} has degree {degree}, expected positive")]
    NotPositivelyGraded { index: usize, degree: BigInt },
    #[error("potential degree must be positive, got {0}")]
    NonPositivePotential(BigInt),
    #[error("lcm * mu_bar is not an integer: {0}")]
    NonIntegralMu(BigRational),
    #[error("count formula produced a non-integer: {0}")]
    NonIntegralCount(BigRational),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// A multiset of integers `d_i >= 1`. Entries are kept sorted, so equality is
/// order-insensitive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightSequence {
    entries: Vec<u64>,
}

impl WeightSequence {
    pub fn new(mut entries: Vec<u64>) -> Result<Self, WeightError> {
        if entries.is_empty() {
            return Err(WeightError::Empty);
        }
        if entries.contains(&0) {
            return Err(WeightError::NonPositiveWeight(0));
        }
        entries.sort_unstable();
        Ok(WeightSequence { entries })
    }

    pub fn parse_signed(values: &[i64]) -> Result<Self, WeightError> {
        if let Some(&bad) = values.iter().find(|&&v| v < 1) {
            return Err(WeightError::NonPositiveWeight(bad));
        }
        Self::new(values.iter().map(|&v| v as u64).collect())
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `n` for the sequence `(d_0, ..., d_n)`.
    pub fn n(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn lcm(&self) -> BigInt {
        self.entries.iter().fold(BigInt::one(), |acc, &d| acc.lcm(&BigInt::from(d)))
    }

    pub fn product(&self) -> BigInt {
        self.entries.iter().map(|&d| BigInt::from(d)).product()
    }

    /// `Σ 1/d_i` exactly.
    pub fn reciprocal_sum(&self) -> BigRational {
        self.entries
            .iter()
            .map(|&d| BigRational::new(BigInt::one(), BigInt::from(d)))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn has_unit_weight(&self) -> bool {
        self.entries.first() == Some(&1)
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// `d ∐ d'`.
pub fn concat(a: &WeightSequence, b: &WeightSequence) -> WeightSequence {
    let mut e = a.entries.clone();
    e.extend_from_slice(&b.entries);
    WeightSequence::new(e).expect("both inputs are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SignClass {
    Negative,
    Zero,
    Positive,
}

impl SignClass {
    pub fn of(x: &BigRational) -> Self {
        if x.is_zero() {
            SignClass::Zero
        } else if x.is_positive() {
            SignClass::Positive
        } else {
            SignClass::Negative
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            SignClass::Negative => "negative",
            SignClass::Zero => "zero",
            SignClass::Positive => "positive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuValues {
    pub mu_bar: BigRational,
    pub mu: BigInt,
    pub sign: SignClass,
}

pub fn mu_values(d: &WeightSequence) -> Result<MuValues, WeightError> {
    let mu_bar = d.reciprocal_sum() - BigRational::one();
    let scaled = &mu_bar * BigRational::from_integer(d.lcm());
    if !scaled.is_integer() {
        return Err(WeightError::NonIntegralMu(scaled));
    }
    let sign = SignClass::of(&mu_bar);
    Ok(MuValues { mu_bar, mu: scaled.to_integer(), sign })
}

/// A polynomial ring positively graded by a rank-one pointed group; the
/// potential lives in the marked degree.
#[derive(Clone, Debug)]
pub struct GradedRingSpec {
    grading: PointedAbelianGroup,
    generator_degrees: Vec<GroupElement>,
}

impl GradedRingSpec {
    pub fn new(grading: PointedAbelianGroup, generator_degrees: Vec<GroupElement>) -> Result<Self, WeightError> {
        let md = grading.degree(grading.marked())?;
        if !md.is_positive() {
            return Err(WeightError::NonPositivePotential(md));
        }
        for (index, a) in generator_degrees.iter().enumerate() {
            let degree = grading.degree(a)?;
            if !degree.is_positive() {
                return Err(WeightError::NotPositivelyGraded { index, degree });
            }
        }
        Ok(GradedRingSpec { grading, generator_degrees })
    }

    /// `k[x_0..x_n]` graded by `B_d` with `x_i` in degree `e_i`.
    pub fn fermat(d: &WeightSequence) -> Result<Self, WeightError> {
        let b = weight_group(d)?;
        let gens = (0..d.len()).map(|i| b.group().generator(i)).collect();
        Self::new(b, gens)
    }

    /// One variable of integer degree `a` and potential degree `d` over `Z`.
    pub fn one_variable(a: i64, d: i64) -> Result<Self, WeightError> {
        let z = PointedAbelianGroup::integers(d)?;
        let x = z.element_i64(&[a])?;
        Self::new(z, vec![x])
    }

    pub fn grading(&self) -> &PointedAbelianGroup {
        &self.grading
    }

    pub fn generator_degrees(&self) -> &[GroupElement] {
        &self.generator_degrees
    }

    pub fn potential_degree(&self) -> &GroupElement {
        self.grading.marked()
    }

    pub fn num_variables(&self) -> usize {
        self.generator_degrees.len()
    }

    pub fn degree(&self, e: &GroupElement) -> BigInt {
        self.grading.degree(e).expect("validated rank-one grading")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GorensteinData {
    pub eta: GroupElement,
    pub mu: BigInt,
}

/// `η = -d + Σ a_i` and `μ = deg η`.
pub fn gorenstein_parameter(spec: &GradedRingSpec) -> Result<GorensteinData, WeightError> {
    let g = spec.grading.group();
    let mut eta = g.neg(spec.potential_degree());
    for a in &spec.generator_degrees {
        eta = g.add(&eta, a);
    }
    let mu = spec.grading.degree(&eta)?;
    Ok(GorensteinData { eta, mu })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectKind {
    /// `O_Z(a)` on the geometric side.
    LineBundle,
    /// `k(c)`, the stabilized residue field.
    StabilizedResidue,
}

impl ObjectKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObjectKind::LineBundle => "line_bundle",
            ObjectKind::StabilizedResidue => "stabilized_residue",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SodBlock {
    pub degree: BigInt,
    pub kind: ObjectKind,
    pub count: BigInt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Residual {
    /// The factorization category sits inside the geometric one.
    FactorizationSide,
    /// The geometric category sits inside the factorization one.
    GeometrySide,
    /// The two categories agree.
    Equivalent,
}

impl Residual {
    pub fn as_str(self) -> &'static str {
        match self {
            Residual::FactorizationSide => "factorizations",
            Residual::GeometrySide => "geometry",
            Residual::Equivalent => "equivalence",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SodSummary {
    pub case: SignClass,
    pub mu: BigInt,
    pub torsion: BigInt,
    pub blocks: Vec<SodBlock>,
    pub residual: Residual,
}

impl SodSummary {
    pub fn total_objects(&self) -> BigInt {
        self.blocks.iter().map(|b| &b.count).sum()
    }
}

/// Count-level shape of the decomposition: `|μ|` blocks, each holding one
/// object per element of the given degree (that is, `|A_tors|` objects).
pub fn sod_summary(spec: &GradedRingSpec) -> Result<SodSummary, WeightError> {
    let GorensteinData { mu, .. } = gorenstein_parameter(spec)?;
    let torsion = spec.grading.group().torsion_order();
    let case = SignClass::of(&BigRational::from_integer(mu.clone()));
    let (range, kind, residual) = match case {
        // degrees -μ, ..., -1
        SignClass::Positive => ((-&mu, BigInt::from(-1)), ObjectKind::LineBundle, Residual::FactorizationSide),
        // degrees 0, ..., -μ-1
        SignClass::Negative => ((BigInt::zero(), -&mu - 1), ObjectKind::StabilizedResidue, Residual::GeometrySide),
        SignClass::Zero => ((BigInt::one(), BigInt::zero()), ObjectKind::LineBundle, Residual::Equivalent),
    };
    let mut blocks = Vec::new();
    let mut deg = range.0;
    while deg <= range.1 {
        blocks.push(SodBlock { degree: deg.clone(), kind, count: torsion.clone() });
        deg += 1;
    }
    if case == SignClass::Negative {
        // semi-orthogonal order runs from degree -μ-1 down to 0
        blocks.reverse();
    }
    Ok(SodSummary { case, mu, torsion, blocks, residual })
}

/// `Π(d_i - 1) + (Π d_i)(-1 + Σ 1/d_i)`.
///
/// For nonnegative sequences this is the length of the full exceptional
/// collection on the Fermat stack; for negative ones it is what remains of
/// `Π(d_i - 1)` after removing the `|μ|·|B_tors|` residue-field objects.
pub fn exceptional_count(d: &WeightSequence) -> Result<BigInt, WeightError> {
    let base: BigInt = d.entries().iter().map(|&x| BigInt::from(x - 1)).product();
    let mu = mu_values(d)?;
    let extra = mu.mu_bar * BigRational::from_integer(d.product());
    if !extra.is_integer() {
        return Err(WeightError::NonIntegralCount(extra));
    }
    Ok(base + extra.to_integer())
}

/// `|μ| · |B_tors|`, the number of objects complementary to the common
/// component.
pub fn complement_count(d: &WeightSequence) -> Result<BigInt, WeightError> {
    let mu = mu_values(d)?;
    let b = weight_group(d)?;
    Ok(mu.mu.abs() * b.group().torsion_order())
}

/// `(S, A, w) -> (S[u, v], A ⊟ (Z,2) ⊟ (Z,2), w + u^2 + v^2)`.
pub fn knoerrer_double(spec: &GradedRingSpec) -> GradedRingSpec {
    let z2 = PointedAbelianGroup::integers(2).expect("2 is not torsion");
    let once = boxminus(&spec.grading, &z2);
    let twice = boxminus(&once, &z2);
    let n_old = spec.grading.group().num_generators();
    let mut gens: Vec<GroupElement> = spec
        .generator_degrees
        .iter()
        .map(|a| {
            let mut c = a.coords().to_vec();
            c.resize(n_old + 2, BigInt::zero());
            twice.group().element(c).expect("length matches")
        })
        .collect();
    gens.push(twice.group().generator(n_old));
    gens.push(twice.group().generator(n_old + 1));
    GradedRingSpec::new(twice, gens).expect("⊟ with positive marks keeps positivity")
}
