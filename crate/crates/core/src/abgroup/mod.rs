//! Finitely generated abelian groups presented by integer relations.
//!
//! A group is `Z^n / L` where `L` is the row space of the relation matrix.
//! Elements are compared through a canonical form read off the Smith normal
//! form: with `U * M * V = S`, the coordinates `y = v * V` split into torsion
//! residues (reduced into `[0, t_i)`) and free coordinates (left as is).

mod snf;

use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use snf::{smith_normal_form, SmithForm};

use crate::intmat::IntMatrix;
use crate::weightcalc::WeightSequence;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("relation matrix has {found} columns, expected {expected}")]
    ColumnMismatch { expected: usize, found: usize },
    #[error("element has {found} coordinates, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("marked element {0} is torsion")]
    TorsionMarked(String),
    #[error("degree map needs free rank 1, group has free rank {0}")]
    FreeRank(usize),
    #[error("weight sequence is empty")]
    EmptyWeights,
    #[error("homomorphism does not respect relation {0}")]
    NotWellDefined(usize),
}

/// Torsion residues and free coordinates of an element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub torsion: Vec<BigInt>,
    pub free: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub struct FGAbelianGroup {
    num_generators: usize,
    relations: IntMatrix,
    normal_form: SmithForm,
    /// Column index and modulus for each coordinate with factor > 1.
    torsion_slots: Vec<(usize, BigInt)>,
    /// Column indices of free coordinates.
    free_slots: Vec<usize>,
}

pub fn group_from_relations(n: usize, relations: &IntMatrix) -> Result<FGAbelianGroup, GroupError> {
    FGAbelianGroup::new(n, relations.clone())
}

impl FGAbelianGroup {
    pub fn new(num_generators: usize, relations: IntMatrix) -> Result<Self, GroupError> {
        if relations.cols() != num_generators {
            return Err(GroupError::ColumnMismatch { expected: num_generators, found: relations.cols() });
        }
        let normal_form = smith_normal_form(&relations);
        let diag = normal_form.column_diagonal();
        let mut torsion_slots = Vec::new();
        let mut free_slots = Vec::new();
        for (j, s) in diag.into_iter().enumerate() {
            if s.is_zero() {
                free_slots.push(j);
            } else if !s.is_one() {
                torsion_slots.push((j, s));
            }
        }
        Ok(FGAbelianGroup { num_generators, relations, normal_form, torsion_slots, free_slots })
    }

    /// The free group `Z^n`.
    pub fn free(n: usize) -> Self {
        Self::new(n, IntMatrix::zeros(0, n)).expect("shape is consistent")
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn normal_form(&self) -> &SmithForm {
        &self.normal_form
    }

    pub fn free_rank(&self) -> usize {
        self.free_slots.len()
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.normal_form.invariant_factors
    }

    pub fn torsion_order(&self) -> BigInt {
        self.invariant_factors().iter().product()
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GroupElement, GroupError> {
        if coords.len() != self.num_generators {
            return Err(GroupError::LengthMismatch { expected: self.num_generators, found: coords.len() });
        }
        let canonical = self.canonical(&coords);
        Ok(GroupElement { coords, canonical })
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        self.element(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(&self) -> GroupElement {
        self.element(vec![BigInt::zero(); self.num_generators]).expect("length matches")
    }

    /// Class of the `i`-th basis vector.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![BigInt::zero(); self.num_generators];
        v[i] = BigInt::one();
        self.element(v).expect("length matches")
    }

    fn canonical(&self, coords: &[BigInt]) -> CanonicalForm {
        let y = self.normal_form.v.left_apply(coords);
        let torsion = self.torsion_slots.iter().map(|(j, t)| y[*j].mod_floor(t)).collect();
        let free = self.free_slots.iter().map(|&j| y[j].clone()).collect();
        CanonicalForm { torsion, free }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let coords = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
        self.element(coords).expect("length matches")
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.element(a.coords.iter().map(|x| -x).collect()).expect("length matches")
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        self.element(a.coords.iter().map(|x| x * k).collect()).expect("length matches")
    }

    pub fn is_torsion(&self, a: &GroupElement) -> bool {
        a.canonical.free.iter().all(Zero::is_zero)
    }

    /// Representative coordinates of a canonical form.
    pub fn from_canonical(&self, form: &CanonicalForm) -> GroupElement {
        let mut y = vec![BigInt::zero(); self.num_generators];
        for ((j, _), r) in self.torsion_slots.iter().zip(&form.torsion) {
            y[*j] = r.clone();
        }
        for (&j, f) in self.free_slots.iter().zip(&form.free) {
            y[j] = f.clone();
        }
        self.element(self.normal_form.v_inv.left_apply(&y)).expect("length matches")
    }

    /// All elements of the torsion subgroup, in canonical order.
    pub fn torsion_elements(&self) -> Vec<GroupElement> {
        let mut forms = vec![Vec::<BigInt>::new()];
        for (_, t) in &self.torsion_slots {
            let mut next = Vec::new();
            for f in &forms {
                let mut r = BigInt::zero();
                while &r < t {
                    let mut g = f.clone();
                    g.push(r.clone());
                    next.push(g);
                    r += 1;
                }
            }
            forms = next;
        }
        let free = vec![BigInt::zero(); self.free_rank()];
        forms.into_iter().map(|torsion| self.from_canonical(&CanonicalForm { torsion, free: free.clone() })).collect()
    }
}

/// An element together with its canonical form. Equality is canonical.
#[derive(Clone, Debug)]
pub struct GroupElement {
    coords: Vec<BigInt>,
    canonical: CanonicalForm,
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn canonical(&self) -> &CanonicalForm {
        &self.canonical
    }
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.canonical == other.canonical
    }
}

impl Eq for GroupElement {}

impl Hash for GroupElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical.hash(state);
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Generator range of one factor inside a ⊟-product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub offset: usize,
    pub width: usize,
}

/// A group with a distinguished non-torsion element and, when the free rank
/// is one, the degree map `A -> A/A_tors = Z` oriented so the marked element
/// has positive degree.
#[derive(Clone, Debug)]
pub struct PointedAbelianGroup {
    group: FGAbelianGroup,
    marked: GroupElement,
    components: Vec<Component>,
    orientation: i8,
}

impl PointedAbelianGroup {
    pub fn new(group: FGAbelianGroup, marked: GroupElement) -> Result<Self, GroupError> {
        if group.is_torsion(&marked) {
            return Err(GroupError::TorsionMarked(marked.to_string()));
        }
        let width = group.num_generators();
        let orientation = if group.free_rank() == 1 && marked.canonical.free[0].is_negative() { -1 } else { 1 };
        Ok(PointedAbelianGroup { group, marked, components: vec![Component { offset: 0, width }], orientation })
    }

    /// `(Z, d)`: the integers with marked element `d != 0`.
    pub fn integers(d: i64) -> Result<Self, GroupError> {
        let z = FGAbelianGroup::free(1);
        let m = z.element_i64(&[d])?;
        Self::new(z, m)
    }

    pub fn group(&self) -> &FGAbelianGroup {
        &self.group
    }

    pub fn marked(&self) -> &GroupElement {
        &self.marked
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn element_i64(&self, coords: &[i64]) -> Result<GroupElement, GroupError> {
        self.group.element_i64(coords)
    }

    pub fn degree(&self, e: &GroupElement) -> Result<BigInt, GroupError> {
        if self.group.free_rank() != 1 {
            return Err(GroupError::FreeRank(self.group.free_rank()));
        }
        Ok(&e.canonical.free[0] * BigInt::from(self.orientation))
    }

    /// `φ_i`: pads a vector of the `i`-th component into the full coordinates.
    pub fn embed(&self, component: usize, v: &[BigInt]) -> Result<GroupElement, GroupError> {
        let c = &self.components[component];
        if v.len() != c.width {
            return Err(GroupError::LengthMismatch { expected: c.width, found: v.len() });
        }
        let mut coords = vec![BigInt::zero(); self.group.num_generators()];
        coords[c.offset..c.offset + c.width].clone_from_slice(v);
        self.group.element(coords)
    }

    /// Degree of every basis vector, when the degree map exists.
    pub fn generator_degrees(&self) -> Result<Vec<BigInt>, GroupError> {
        (0..self.group.num_generators()).map(|i| self.degree(&self.group.generator(i))).collect()
    }
}

/// `A ⊟ B = A ⊕ B / (d_A, -d_B)`, marked by the common image of `d_A` and `d_B`.
pub fn boxminus(a: &PointedAbelianGroup, b: &PointedAbelianGroup) -> PointedAbelianGroup {
    let (na, nb) = (a.group.num_generators(), b.group.num_generators());
    let n = na + nb;
    let mut rel = IntMatrix::zeros(0, n);
    for r in a.group.relations().to_rows() {
        let mut row = r;
        row.resize(n, BigInt::zero());
        rel.push_row(row);
    }
    for r in b.group.relations().to_rows() {
        let mut row = vec![BigInt::zero(); na];
        row.extend(r);
        rel.push_row(row);
    }
    let mut glue: Vec<BigInt> = a.marked.coords.clone();
    glue.extend(b.marked.coords.iter().map(|x| -x));
    rel.push_row(glue);

    let group = FGAbelianGroup::new(n, rel).expect("shape is consistent");
    let mut marked = a.marked.coords.clone();
    marked.resize(n, BigInt::zero());
    let marked = group.element(marked).expect("length matches");
    let mut components = a.components.clone();
    components.extend(b.components.iter().map(|c| Component { offset: c.offset + na, width: c.width }));
    let mut out = PointedAbelianGroup::new(group, marked).expect("image of a non-torsion element stays non-torsion");
    out.components = components;
    out
}

pub fn torsion_order(g: &FGAbelianGroup) -> BigInt {
    g.torsion_order()
}

pub fn degree(a: &PointedAbelianGroup, e: &GroupElement) -> Result<BigInt, GroupError> {
    a.degree(e)
}

/// `B_d = Z^{n+1} / (d_i e_i - d_j e_j)`, built as `(Z,d_0) ⊟ ... ⊟ (Z,d_n)`.
pub fn weight_group(d: &WeightSequence) -> Result<PointedAbelianGroup, GroupError> {
    let mut it = d.entries().iter();
    let first = it.next().ok_or(GroupError::EmptyWeights)?;
    let mut acc = PointedAbelianGroup::integers(*first as i64)?;
    for &di in it {
        acc = boxminus(&acc, &PointedAbelianGroup::integers(di as i64)?);
    }
    Ok(acc)
}

/// A homomorphism `A -> B` given by the images of the generators of `A`.
#[derive(Clone, Debug)]
pub struct Homomorphism {
    images: Vec<GroupElement>,
}

impl Homomorphism {
    pub fn new(
        source: &FGAbelianGroup,
        target: &FGAbelianGroup,
        images: Vec<GroupElement>,
    ) -> Result<Self, GroupError> {
        if images.len() != source.num_generators() {
            return Err(GroupError::LengthMismatch { expected: source.num_generators(), found: images.len() });
        }
        let h = Homomorphism { images };
        for (i, r) in source.relations().to_rows().iter().enumerate() {
            if h.apply_coords(target, r) != target.zero() {
                return Err(GroupError::NotWellDefined(i));
            }
        }
        Ok(h)
    }

    pub fn apply(&self, target: &FGAbelianGroup, e: &GroupElement) -> GroupElement {
        self.apply_coords(target, &e.coords)
    }

    fn apply_coords(&self, target: &FGAbelianGroup, v: &[BigInt]) -> GroupElement {
        let mut acc = target.zero();
        for (c, img) in v.iter().zip(&self.images) {
            if !c.is_zero() {
                acc = target.add(&acc, &target.scale(c, img));
            }
        }
        acc
    }

    /// Elements of the kernel, which must lie in the torsion of the source.
    /// Returns `None` when the kernel is infinite.
    pub fn finite_kernel(&self, source: &FGAbelianGroup, target: &FGAbelianGroup) -> Option<Vec<GroupElement>> {
        // infinite kernel iff some free direction dies rationally
        let free_images: Vec<GroupElement> = (0..source.free_rank())
            .map(|k| {
                let mut free = vec![BigInt::zero(); source.free_rank()];
                free[k] = BigInt::one();
                let torsion = vec![BigInt::zero(); source.torsion_slots.len()];
                self.apply(target, &source.from_canonical(&CanonicalForm { torsion, free }))
            })
            .collect();
        if !free_parts_independent(&free_images) {
            return None;
        }
        let zero = target.zero();
        Some(source.torsion_elements().into_iter().filter(|e| self.apply(target, e) == zero).collect())
    }
}

fn free_parts_independent(images: &[GroupElement]) -> bool {
    let rows: Vec<Vec<BigInt>> = images.iter().map(|e| e.canonical.free.clone()).collect();
    if rows.is_empty() {
        return true;
    }
    let cols = rows[0].len();
    let m = IntMatrix::from_rows(cols, &rows);
    smith_normal_form(&m).rank == rows.len()
}
