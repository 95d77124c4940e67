//! Change of grading group along a surjection with finite kernel.

use num_bigint::BigInt;
use num_traits::One;

use super::{make_factorization, strand_cohomology, Factorization, GradedFreeModule, MfError, MfRing};
use crate::abgroup::{FGAbelianGroup, GroupElement, Homomorphism, PointedAbelianGroup};
use crate::intmat::IntMatrix;
use crate::weightcalc::GradedRingSpec;

/// `ψ: A -> A/Γ` with `Γ` finite.
#[derive(Clone, Debug)]
pub struct OrbitSpec {
    source: PointedAbelianGroup,
    target: PointedAbelianGroup,
    psi: Homomorphism,
    kernel: Vec<GroupElement>,
}

impl OrbitSpec {
    pub fn new(
        source: &PointedAbelianGroup,
        target: FGAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self, MfError> {
        let psi = Homomorphism::new(source.group(), &target, images.clone())?;
        let kernel = psi.finite_kernel(source.group(), &target).ok_or(MfError::InfiniteKernel)?;
        let mut rel = IntMatrix::zeros(0, target.num_generators());
        for r in target.relations().to_rows() {
            rel.push_row(r);
        }
        for im in &images {
            rel.push_row(im.coords().to_vec());
        }
        let quotient = FGAbelianGroup::new(target.num_generators(), rel)?;
        if quotient.free_rank() != 0 || !quotient.torsion_order().is_one() {
            return Err(MfError::NotSurjective);
        }
        let marked = psi.apply(&target, source.marked());
        let target = PointedAbelianGroup::new(target, marked)?;
        Ok(OrbitSpec { source: source.clone(), target, psi, kernel })
    }

    pub fn identity(source: &PointedAbelianGroup) -> Result<Self, MfError> {
        let g = source.group();
        let images = (0..g.num_generators()).map(|i| g.generator(i)).collect();
        Self::new(source, g.clone(), images)
    }

    /// The degree map `A -> Z`, whose kernel is the torsion of `A`.
    pub fn degree_map(source: &PointedAbelianGroup) -> Result<Self, MfError> {
        let z = FGAbelianGroup::free(1);
        let images =
            source.generator_degrees()?.into_iter().map(|k| z.element(vec![k])).collect::<Result<Vec<_>, _>>()?;
        Self::new(source, z, images)
    }

    pub fn source(&self) -> &PointedAbelianGroup {
        &self.source
    }

    pub fn target(&self) -> &PointedAbelianGroup {
        &self.target
    }

    pub fn kernel(&self) -> &[GroupElement] {
        &self.kernel
    }

    pub fn apply(&self, e: &GroupElement) -> GroupElement {
        self.psi.apply(self.target.group(), e)
    }

    fn check_source(&self, ring: &MfRing) -> Result<(), MfError> {
        let a = ring.grading();
        let same = a.group().relations() == self.source.group().relations() && a.marked() == self.source.marked();
        if same {
            Ok(())
        } else {
            Err(MfError::RingMismatch)
        }
    }
}

pub fn restrict_ring(ring: &MfRing, psi: &OrbitSpec) -> Result<MfRing, MfError> {
    psi.check_source(ring)?;
    let gens = ring.spec().generator_degrees().iter().map(|a| psi.apply(a)).collect();
    let spec = GradedRingSpec::new(psi.target.clone(), gens)?;
    MfRing::new(spec, ring.potential().clone())
}

/// `R E`: the same matrices with all degrees pushed through `ψ`.
pub fn restrict_grading(e: &Factorization, psi: &OrbitSpec) -> Result<Factorization, MfError> {
    let ring = restrict_ring(e.ring(), psi)?;
    let push = |m: &GradedFreeModule| GradedFreeModule::new(m.generators.iter().map(|g| psi.apply(g)).collect());
    make_factorization(&ring, push(&e.e_minus), push(&e.e_zero), e.phi0.clone(), e.phi_minus.clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitRow {
    pub epsilon: u8,
    pub l: i64,
    pub restricted: usize,
    pub summed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitReport {
    pub kernel_size: usize,
    pub window: i64,
    pub rows: Vec<OrbitRow>,
}

impl OrbitReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.restricted == r.summed)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &OrbitRow> {
        self.rows.iter().filter(|r| r.restricted != r.summed)
    }
}

/// Compares `dim H(Hom(R E, R F))` with `Σ_{γ ∈ Γ} dim H(Hom(E, F(γ)))` strand by strand.
pub fn orbit_hom_check(
    e: &Factorization,
    f: &Factorization,
    psi: &OrbitSpec,
    window: i64,
) -> Result<OrbitReport, MfError> {
    let lhs = strand_cohomology(&restrict_grading(e, psi)?, &restrict_grading(f, psi)?, window)?;
    let parts = psi.kernel.iter().map(|g| strand_cohomology(e, &f.twist(g), window)).collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for l in -window..=window {
        for epsilon in 0..2 {
            rows.push(OrbitRow {
                epsilon,
                l,
                restricted: lhs.get(epsilon, l),
                summed: parts.iter().map(|p| p.get(epsilon, l)).sum(),
            });
        }
    }
    Ok(OrbitReport { kernel_size: psi.kernel.len(), window, rows })
}

/// `Z/k`-valued images written as integers, for small hand-built maps.
pub fn images_i64(target: &FGAbelianGroup, rows: &[Vec<i64>]) -> Result<Vec<GroupElement>, MfError> {
    rows.iter().map(|r| target.element(r.iter().map(|&x| BigInt::from(x)).collect()).map_err(MfError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::super::{exterior_product, standard_objects};
    use super::*;
    use crate::mfengine::hom::strand_cohomology;

    fn battery() -> Vec<Factorization> {
        let objs = standard_objects(3).unwrap();
        let mut out = Vec::new();
        for a in &objs {
            for b in &objs {
                out.push(exterior_product(a, b).unwrap());
            }
        }
        out
    }

    #[test]
    fn diagonal_restriction_of_b33() {
        let objs = battery();
        let psi = OrbitSpec::degree_map(objs[0].ring().grading()).unwrap();
        assert_eq!(psi.kernel().len(), 3);
        assert_eq!(psi.target().degree(psi.target().marked()).unwrap(), BigInt::from(3));
        for e in &objs {
            let r = restrict_grading(e, &psi).unwrap();
            // degrees of generators become the integer degrees
            let ring = e.ring();
            let want: Vec<BigInt> = e.e_zero().generators.iter().map(|g| ring.spec().degree(g)).collect();
            let got: Vec<BigInt> = r.e_zero().generators.iter().map(|g| r.ring().spec().degree(g)).collect();
            assert_eq!(want, got);
        }
    }

    #[test]
    fn identity_restriction_is_unchanged() {
        let e = &battery()[1];
        let psi = OrbitSpec::identity(e.ring().grading()).unwrap();
        assert_eq!(psi.kernel().len(), 1);
        let r = restrict_grading(e, &psi).unwrap();
        assert_eq!(strand_cohomology(e, e, 2).unwrap().table, strand_cohomology(&r, &r, 2).unwrap().table);
        assert!(orbit_hom_check(e, e, &psi, 2).unwrap().holds());
    }

    #[test]
    fn orbit_identity_small_window() {
        let objs = battery();
        let psi = OrbitSpec::degree_map(objs[0].ring().grading()).unwrap();
        let report = orbit_hom_check(&objs[0], &objs[3], &psi, 2).unwrap();
        assert!(report.holds());
        assert!(report.rows.iter().any(|r| r.summed > 0));
    }

    #[test]
    fn restriction_commutes_with_twist() {
        let objs = battery();
        let psi = OrbitSpec::degree_map(objs[0].ring().grading()).unwrap();
        let a = objs[0].ring().spec().generator_degrees()[0].clone();
        for e in &objs {
            let lhs = restrict_grading(&e.twist(&a), &psi).unwrap();
            let rhs = restrict_grading(e, &psi).unwrap().twist(&psi.apply(&a));
            assert_eq!(lhs.e_zero(), rhs.e_zero());
            assert_eq!(lhs.e_minus(), rhs.e_minus());
            let f = &objs[2];
            let rf = restrict_grading(f, &psi).unwrap();
            assert_eq!(strand_cohomology(&rf, &lhs, 1).unwrap().table, strand_cohomology(&rf, &rhs, 1).unwrap().table);
        }
    }

    #[test]
    fn kernel_twists_leave_restriction_invariant() {
        let objs = battery();
        let psi = OrbitSpec::degree_map(objs[0].ring().grading()).unwrap();
        let e = &objs[0];
        let re = restrict_grading(e, &psi).unwrap();
        let base = strand_cohomology(&re, &restrict_grading(&objs[1], &psi).unwrap(), 2).unwrap();
        for g in psi.kernel() {
            let rf = restrict_grading(&objs[1].twist(g), &psi).unwrap();
            assert_eq!(strand_cohomology(&re, &rf, 2).unwrap().table, base.table);
        }
    }

    #[test]
    fn rejects_bad_maps() {
        let objs = battery();
        let a = objs[0].ring().grading();
        // Z^2/(3,-3) -> Z/3 has infinite kernel
        let z3 = FGAbelianGroup::new(1, IntMatrix::from_rows(1, &[vec![BigInt::from(3)]])).unwrap();
        let imgs = images_i64(&z3, &[vec![1], vec![1]]).unwrap();
        assert_eq!(OrbitSpec::new(a, z3, imgs).unwrap_err(), MfError::InfiniteKernel);
        // doubling the degree is not surjective
        let z = FGAbelianGroup::free(1);
        let imgs = images_i64(&z, &[vec![2], vec![2]]).unwrap();
        assert_eq!(OrbitSpec::new(a, z, imgs).unwrap_err(), MfError::NotSurjective);
        // a ring over another group is refused
        let psi = OrbitSpec::degree_map(a).unwrap();
        let one = &standard_objects(3).unwrap()[0];
        assert_eq!(restrict_grading(one, &psi).unwrap_err(), MfError::RingMismatch);
    }
}
