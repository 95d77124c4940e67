//! Graded matrix factorizations over polynomial rings graded by a rank-one
//! abelian group.
//!
//! A free module is recorded by the degrees of its generators; the twist
//! `M(a)` moves every generator from degree `g` to `g - a`, and `Φ` is the
//! twist by the potential degree `d`. For `E = (E_-1, E_0, φ_0, φ_-1)`:
//!
//! * `φ_0: E_-1 -> E_0` has entry `(r, c)` of degree `g_c - g_r`,
//! * `φ_-1: E_0 -> Φ(E_-1)` has entry `(r, c)` of degree `g_c + d - g_r`.

mod hom;
mod orbit;
pub mod poly;

pub use hom::{
    certified_window, endo_algebra_check, is_exceptional, strand_cohomology, support, Certification, EndoReport,
    StrandCohomology, Support,
};
pub use orbit::{images_i64, orbit_hom_check, restrict_grading, restrict_ring, OrbitReport, OrbitRow, OrbitSpec};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::abgroup::{boxminus, GroupElement, GroupError, PointedAbelianGroup};
use crate::weightcalc::{GradedRingSpec, WeightError};
use poly::{Poly, PolyMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MfError {
    #[error("{map} has shape {got:?}, expected {expected:?}")]
    Shape { map: &'static str, expected: (usize, usize), got: (usize, usize) },
    #[error("{map} entry ({row}, {col}) is not homogeneous of degree {degree}")]
    Inhomogeneous { map: &'static str, row: usize, col: usize, degree: String },
    #[error("{0} is not w times the identity")]
    Composition(&'static str),
    #[error("potential is not homogeneous of the marked degree")]
    BadPotential,
    #[error("the two objects live over different rings")]
    RingMismatch,
    #[error("map is not closed")]
    NotClosed,
    #[error("need d >= 2, got {0}")]
    DegreeTooSmall(i64),
    #[error("kernel of the grading change is infinite")]
    InfiniteKernel,
    #[error("grading change is not surjective")]
    NotSurjective,
    #[error("grading change does not send the marked element to the marked element")]
    MarkMismatch,
    #[error("endomorphism algebra mismatch: {0}")]
    EndoMismatch(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

/// A graded polynomial ring with a homogeneous potential of the marked degree.
#[derive(Clone, Debug)]
pub struct MfRing {
    spec: GradedRingSpec,
    potential: Poly,
    /// Integer degrees of the variables.
    var_degrees: Vec<i64>,
}

impl MfRing {
    pub fn new(spec: GradedRingSpec, potential: Poly) -> Result<Self, MfError> {
        let var_degrees = spec
            .generator_degrees()
            .iter()
            .map(|a| spec.degree(a).to_i64().expect("variable degree fits in i64"))
            .collect();
        let ring = MfRing { spec, potential, var_degrees };
        let d = ring.spec.potential_degree().clone();
        if ring.potential.is_zero() || !ring.is_homogeneous(&ring.potential, &d) {
            return Err(MfError::BadPotential);
        }
        Ok(ring)
    }

    /// `k[x]` with `deg x = 1` over `(Z, d)`, potential `x^d`.
    pub fn fermat_one(d: i64) -> Result<Self, MfError> {
        if d < 2 {
            return Err(MfError::DegreeTooSmall(d));
        }
        let spec = GradedRingSpec::one_variable(1, d)?;
        Self::new(spec, Poly::var_power(1, 0, d as u32))
    }

    /// `w_1 ⊞ w_2` over `A_1 ⊟ A_2`.
    pub fn sum(a: &MfRing, b: &MfRing) -> MfRing {
        let g = boxminus(a.spec.grading(), b.spec.grading());
        let gens: Vec<GroupElement> = a
            .spec
            .generator_degrees()
            .iter()
            .map(|x| g.embed(0, x.coords()).expect("width matches"))
            .chain(b.spec.generator_degrees().iter().map(|y| g.embed(1, y.coords()).expect("width matches")))
            .collect();
        let spec = GradedRingSpec::new(g, gens).expect("embedded degrees stay positive");
        let (na, nb) = (a.num_vars(), b.num_vars());
        let w = a.potential.embed(0, na + nb).add(&b.potential.embed(na, na + nb));
        MfRing::new(spec, w).expect("sum of homogeneous potentials of the shared degree")
    }

    pub fn spec(&self) -> &GradedRingSpec {
        &self.spec
    }

    pub fn grading(&self) -> &PointedAbelianGroup {
        self.spec.grading()
    }

    pub fn potential(&self) -> &Poly {
        &self.potential
    }

    pub fn num_vars(&self) -> usize {
        self.spec.num_variables()
    }

    pub fn var_degrees(&self) -> &[i64] {
        &self.var_degrees
    }

    pub fn potential_degree(&self) -> &GroupElement {
        self.spec.potential_degree()
    }

    pub fn int_degree(&self, e: &GroupElement) -> i64 {
        self.spec.degree(e).to_i64().expect("degree fits in i64")
    }

    pub fn d_int(&self) -> i64 {
        self.int_degree(self.potential_degree())
    }

    pub fn monomial_degree(&self, e: &[u32]) -> GroupElement {
        let g = self.grading().group();
        let mut acc = g.zero();
        for (k, a) in e.iter().zip(self.spec.generator_degrees()) {
            if *k > 0 {
                acc = g.add(&acc, &g.scale(&BigInt::from(*k), a));
            }
        }
        acc
    }

    pub fn is_homogeneous(&self, p: &Poly, degree: &GroupElement) -> bool {
        p.terms().all(|(e, _)| &self.monomial_degree(e) == degree)
    }

    /// Exponent vectors of all monomials of the given degree, sorted.
    pub fn monomials_of_degree(&self, degree: &GroupElement) -> Vec<Vec<u32>> {
        let target = self.int_degree(degree);
        let mut out = Vec::new();
        if target < 0 {
            return out;
        }
        let mut cur = vec![0u32; self.num_vars()];
        self.knapsack(0, target, &mut cur, &mut out);
        out.retain(|e| &self.monomial_degree(e) == degree);
        out.sort();
        out
    }

    fn knapsack(&self, i: usize, left: i64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == self.num_vars() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let a = self.var_degrees[i];
        let mut k = 0;
        while k * a <= left {
            cur[i] = k as u32;
            self.knapsack(i + 1, left - k * a, cur, out);
            k += 1;
        }
        cur[i] = 0;
    }

    fn same_as(&self, other: &MfRing) -> bool {
        self.potential == other.potential
            && self.spec.generator_degrees() == other.spec.generator_degrees()
            && self.grading().group().relations() == other.grading().group().relations()
            && self.potential_degree() == other.potential_degree()
    }
}

/// Generator degrees of a graded free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeModule {
    pub generators: Vec<GroupElement>,
}

impl GradedFreeModule {
    pub fn new(generators: Vec<GroupElement>) -> Self {
        GradedFreeModule { generators }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn twist(&self, ring: &MfRing, a: &GroupElement) -> GradedFreeModule {
        let g = ring.grading().group();
        GradedFreeModule { generators: self.generators.iter().map(|x| g.sub(x, a)).collect() }
    }

    pub fn direct_sum(&self, other: &GradedFreeModule) -> GradedFreeModule {
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        GradedFreeModule { generators }
    }
}

#[derive(Clone, Debug)]
pub struct Factorization {
    ring: MfRing,
    e_minus: GradedFreeModule,
    e_zero: GradedFreeModule,
    phi0: PolyMatrix,
    phi_minus: PolyMatrix,
}

/// Validates shapes, homogeneity and both composition identities.
pub fn make_factorization(
    ring: &MfRing,
    e_minus: GradedFreeModule,
    e_zero: GradedFreeModule,
    phi0: PolyMatrix,
    phi_minus: PolyMatrix,
) -> Result<Factorization, MfError> {
    let (m, z) = (e_minus.rank(), e_zero.rank());
    if (phi0.rows(), phi0.cols()) != (z, m) {
        return Err(MfError::Shape { map: "phi_0", expected: (z, m), got: (phi0.rows(), phi0.cols()) });
    }
    if (phi_minus.rows(), phi_minus.cols()) != (m, z) {
        return Err(MfError::Shape { map: "phi_-1", expected: (m, z), got: (phi_minus.rows(), phi_minus.cols()) });
    }
    let g = ring.grading().group();
    let d = ring.potential_degree();
    for r in 0..z {
        for c in 0..m {
            let deg = g.sub(&e_minus.generators[c], &e_zero.generators[r]);
            if !ring.is_homogeneous(phi0.get(r, c), &deg) {
                return Err(MfError::Inhomogeneous { map: "phi_0", row: r, col: c, degree: deg.to_string() });
            }
        }
    }
    for r in 0..m {
        for c in 0..z {
            let deg = g.sub(&g.add(&e_zero.generators[c], d), &e_minus.generators[r]);
            if !ring.is_homogeneous(phi_minus.get(r, c), &deg) {
                return Err(MfError::Inhomogeneous { map: "phi_-1", row: r, col: c, degree: deg.to_string() });
            }
        }
    }
    if phi_minus.mul(&phi0) != PolyMatrix::scalar_identity(m, &ring.potential) {
        return Err(MfError::Composition("phi_-1 phi_0"));
    }
    if phi0.mul(&phi_minus) != PolyMatrix::scalar_identity(z, &ring.potential) {
        return Err(MfError::Composition("phi_0 phi_-1"));
    }
    Ok(Factorization { ring: ring.clone(), e_minus, e_zero, phi0, phi_minus })
}

impl Factorization {
    pub fn ring(&self) -> &MfRing {
        &self.ring
    }

    pub fn e_minus(&self) -> &GradedFreeModule {
        &self.e_minus
    }

    pub fn e_zero(&self) -> &GradedFreeModule {
        &self.e_zero
    }

    pub fn phi0(&self) -> &PolyMatrix {
        &self.phi0
    }

    pub fn phi_minus(&self) -> &PolyMatrix {
        &self.phi_minus
    }

    pub fn zero_object(ring: &MfRing) -> Factorization {
        Factorization {
            ring: ring.clone(),
            e_minus: GradedFreeModule::new(vec![]),
            e_zero: GradedFreeModule::new(vec![]),
            phi0: PolyMatrix::zeros(0, 0),
            phi_minus: PolyMatrix::zeros(0, 0),
        }
    }

    /// `E(a)`.
    pub fn twist(&self, a: &GroupElement) -> Factorization {
        Factorization {
            ring: self.ring.clone(),
            e_minus: self.e_minus.twist(&self.ring, a),
            e_zero: self.e_zero.twist(&self.ring, a),
            phi0: self.phi0.clone(),
            phi_minus: self.phi_minus.clone(),
        }
    }

    /// `E[1] = (E_0, Φ(E_-1), -φ_-1, -φ_0)`.
    pub fn shift_once(&self) -> Factorization {
        let d = self.ring.potential_degree();
        Factorization {
            ring: self.ring.clone(),
            e_minus: self.e_zero.clone(),
            e_zero: self.e_minus.twist(&self.ring, d),
            phi0: self.phi_minus.neg(),
            phi_minus: self.phi0.neg(),
        }
    }

    /// `E[-1] = (Φ^-1(E_0), E_-1, -φ_-1, -φ_0)`.
    pub fn unshift_once(&self) -> Factorization {
        let g = self.ring.grading().group();
        let minus_d = g.neg(self.ring.potential_degree());
        Factorization {
            ring: self.ring.clone(),
            e_minus: self.e_zero.twist(&self.ring, &minus_d),
            e_zero: self.e_minus.clone(),
            phi0: self.phi_minus.neg(),
            phi_minus: self.phi0.neg(),
        }
    }

    pub fn is_zero_object(&self) -> bool {
        self.e_minus.rank() == 0 && self.e_zero.rank() == 0
    }
}

/// `E[shift](twist)`.
pub fn translate(e: &Factorization, shift: i64, twist: &GroupElement) -> Factorization {
    let mut out = e.clone();
    for _ in 0..shift.abs() {
        out = if shift > 0 { out.shift_once() } else { out.unshift_once() };
    }
    out.twist(twist)
}

/// `E_1, ..., E_{d-1}` for `x^d`: `E_i = (x^i, x^{d-i})` with the `E_0`
/// generator in degree 0 and the `E_-1` generator in degree `i`.
pub fn standard_objects(d: i64) -> Result<Vec<Factorization>, MfError> {
    let ring = MfRing::fermat_one(d)?;
    (1..d).map(|i| standard_object(&ring, i)).collect()
}

pub fn standard_object(ring: &MfRing, i: i64) -> Result<Factorization, MfError> {
    let d = ring.d_int();
    let z = ring.grading();
    let e_minus = GradedFreeModule::new(vec![z.element_i64(&[i])?]);
    let e_zero = GradedFreeModule::new(vec![z.group().zero()]);
    let phi0 = PolyMatrix::from_entries(1, 1, vec![Poly::var_power(1, 0, i as u32)]);
    let phi_minus = PolyMatrix::from_entries(1, 1, vec![Poly::var_power(1, 0, (d - i) as u32)]);
    make_factorization(ring, e_minus, e_zero, phi0, phi_minus)
}

/// The residue field `k(a)`: `E_1` twisted by `a`.
pub fn k_object(d: i64, a: i64) -> Result<Factorization, MfError> {
    let ring = MfRing::fermat_one(d)?;
    let e1 = standard_object(&ring, 1)?;
    Ok(e1.twist(&ring.grading().element_i64(&[a])?))
}

/// A degree-zero map `E -> F`: `f_-1: E_-1 -> F_-1`, `f_0: E_0 -> F_0`.
#[derive(Clone, Debug)]
pub struct ClosedMap {
    pub source: Factorization,
    pub target: Factorization,
    pub f_minus: PolyMatrix,
    pub f_zero: PolyMatrix,
}

impl ClosedMap {
    pub fn identity(e: &Factorization) -> ClosedMap {
        let n = e.ring.num_vars();
        ClosedMap {
            source: e.clone(),
            target: e.clone(),
            f_minus: PolyMatrix::scalar_identity(e.e_minus.rank(), &Poly::one(n)),
            f_zero: PolyMatrix::scalar_identity(e.e_zero.rank(), &Poly::one(n)),
        }
    }

    pub fn zero(e: &Factorization, f: &Factorization) -> ClosedMap {
        ClosedMap {
            source: e.clone(),
            target: f.clone(),
            f_minus: PolyMatrix::zeros(f.e_minus.rank(), e.e_minus.rank()),
            f_zero: PolyMatrix::zeros(f.e_zero.rank(), e.e_zero.rank()),
        }
    }

    fn check(&self) -> Result<(), MfError> {
        let (e, f) = (&self.source, &self.target);
        if !e.ring.same_as(&f.ring) {
            return Err(MfError::RingMismatch);
        }
        let ring = &e.ring;
        let g = ring.grading().group();
        let shapes = [("f_-1", &self.f_minus, &e.e_minus, &f.e_minus), ("f_0", &self.f_zero, &e.e_zero, &f.e_zero)];
        for (name, m, src, tgt) in shapes {
            if (m.rows(), m.cols()) != (tgt.rank(), src.rank()) {
                return Err(MfError::Shape {
                    map: name,
                    expected: (tgt.rank(), src.rank()),
                    got: (m.rows(), m.cols()),
                });
            }
            for r in 0..tgt.rank() {
                for c in 0..src.rank() {
                    let deg = g.sub(&src.generators[c], &tgt.generators[r]);
                    if !ring.is_homogeneous(m.get(r, c), &deg) {
                        return Err(MfError::Inhomogeneous { map: name, row: r, col: c, degree: deg.to_string() });
                    }
                }
            }
        }
        let closed_0 = self.f_zero.mul(&e.phi0) == f.phi0.mul(&self.f_minus);
        let closed_1 = self.f_minus.mul(&e.phi_minus) == f.phi_minus.mul(&self.f_zero);
        if closed_0 && closed_1 {
            Ok(())
        } else {
            Err(MfError::NotClosed)
        }
    }
}

/// Totalization of `E -> F` with `F` in degree 0:
/// `T_-1 = E_0 ⊕ F_-1`, `T_0 = Φ(E_-1) ⊕ F_0`,
/// `φ_0 = [[-φ_-1^E, 0], [f_0, φ_0^F]]`, `φ_-1 = [[-φ_0^E, 0], [f_-1, φ_-1^F]]`.
pub fn cone(f: &ClosedMap) -> Result<Factorization, MfError> {
    f.check()?;
    let (e, t) = (&f.source, &f.target);
    let ring = &e.ring;
    let d = ring.potential_degree();
    let e_minus = e.e_zero.direct_sum(&t.e_minus);
    let e_zero = e.e_minus.twist(ring, d).direct_sum(&t.e_zero);
    let phi0 = PolyMatrix::blocks(
        &e.phi_minus.neg(),
        &PolyMatrix::zeros(e.e_minus.rank(), t.e_minus.rank()),
        &f.f_zero,
        &t.phi0,
    );
    let phi_minus = PolyMatrix::blocks(
        &e.phi0.neg(),
        &PolyMatrix::zeros(e.e_zero.rank(), t.e_zero.rank()),
        &f.f_minus,
        &t.phi_minus,
    );
    make_factorization(ring, e_minus, e_zero, phi0, phi_minus)
}

/// `E ⊠ F` for the potential `w_E ⊞ w_F`.
pub fn exterior_product(e: &Factorization, f: &Factorization) -> Result<Factorization, MfError> {
    let ring = MfRing::sum(&e.ring, &f.ring);
    let g = ring.grading();
    let grp = g.group();
    let (na, nb) = (e.ring.num_vars(), f.ring.num_vars());
    let pair = |x: &GradedFreeModule, y: &GradedFreeModule, shift: Option<&GroupElement>| {
        let mut gens = Vec::new();
        for a in &x.generators {
            for b in &y.generators {
                let s = grp.add(&g.embed(0, a.coords()).expect("width"), &g.embed(1, b.coords()).expect("width"));
                gens.push(match shift {
                    Some(dd) => grp.sub(&s, dd),
                    None => s,
                });
            }
        }
        GradedFreeModule::new(gens)
    };
    let d = ring.potential_degree().clone();
    let e_minus = pair(&e.e_minus, &f.e_zero, None).direct_sum(&pair(&e.e_zero, &f.e_minus, None));
    let e_zero = pair(&e.e_zero, &f.e_zero, None).direct_sum(&pair(&e.e_minus, &f.e_minus, Some(&d)));
    let id = |n: usize, nv: usize| PolyMatrix::scalar_identity(n, &Poly::one(nv));
    let (em, ez, fm, fz) = (e.e_minus.rank(), e.e_zero.rank(), f.e_minus.rank(), f.e_zero.rank());
    let phi0 = PolyMatrix::blocks(
        &e.phi0.exterior(na, &id(fz, nb), nb),
        &id(ez, na).exterior(na, &f.phi0, nb),
        &id(em, na).exterior(na, &f.phi_minus, nb),
        &e.phi_minus.exterior(na, &id(fm, nb), nb).neg(),
    );
    let phi_minus = PolyMatrix::blocks(
        &e.phi_minus.exterior(na, &id(fz, nb), nb),
        &id(em, na).exterior(na, &f.phi0, nb),
        &id(ez, na).exterior(na, &f.phi_minus, nb),
        &e.phi0.exterior(na, &id(fm, nb), nb).neg(),
    );
    make_factorization(&ring, e_minus, e_zero, phi0, phi_minus)
}
