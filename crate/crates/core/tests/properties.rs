use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use hmf::abgroup::{boxminus, smith_normal_form, FGAbelianGroup, PointedAbelianGroup};
use hmf::intmat::IntMatrix;
use hmf::weightcalc::{gorenstein_parameter, knoerrer_double, mu_values, sod_summary, GradedRingSpec, WeightSequence};

fn matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-20i64..=20, r * c)
            .prop_map(move |v| IntMatrix::from_fn(r, c, |i, j| BigInt::from(v[i * c + j])))
    })
}

/// `Z ⊕ Z/t` marked by `(m, r)`.
fn pointed() -> impl Strategy<Value = PointedAbelianGroup> {
    (1i64..=5, prop_oneof![-6i64..=-1, 1i64..=6], 0i64..5).prop_map(|(t, m, r)| {
        let g = FGAbelianGroup::new(2, IntMatrix::from_rows(2, &[vec![0, t]])).unwrap();
        let marked = g.element_i64(&[m, r]).unwrap();
        PointedAbelianGroup::new(g, marked).unwrap()
    })
}

fn weights(max_len: usize) -> impl Strategy<Value = WeightSequence> {
    prop::collection::vec(1u64..=6, 1..=max_len).prop_map(|v| WeightSequence::new(v).unwrap())
}

fn all_sequences(max_len: usize, max_entry: u64) -> Vec<WeightSequence> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1..=max_entry).map(|x| vec![x]).collect();
    while let Some(v) = stack.pop() {
        if v.len() < max_len {
            for x in *v.last().unwrap()..=max_entry {
                let mut w = v.clone();
                w.push(x);
                stack.push(w);
            }
        }
        out.push(WeightSequence::new(v).unwrap());
    }
    out
}

fn deg(a: &PointedAbelianGroup, coords: &[i64]) -> BigInt {
    a.degree(&a.element_i64(coords).unwrap()).unwrap()
}

proptest! {
    #[test]
    fn smith_form_invariants(m in matrix()) {
        let f = smith_normal_form(&m);
        prop_assert!(&(&f.u * &m) * &f.v == f.s);
        prop_assert!(f.u.determinant().abs().is_one());
        prop_assert!(f.v.determinant().abs().is_one());
        prop_assert!(&f.v * &f.v_inv == IntMatrix::identity(m.cols()));
        prop_assert!(f.s.is_diagonal());
        let diag: Vec<BigInt> = (0..m.rows().min(m.cols())).map(|i| f.s[(i, i)].clone()).collect();
        prop_assert!(diag.iter().all(|x| !x.is_negative()));
        prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), f.rank);
        for w in diag.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && w[1].is_multiple_of(&w[0])));
        }
    }

    #[test]
    fn boxminus_degree_formula(a in pointed(), b in pointed(), x in -9i64..=9, tx in 0i64..5, y in -9i64..=9, ty in 0i64..5) {
        let ab = boxminus(&a, &b);
        prop_assert_eq!(ab.group().free_rank(), 1);
        let da = a.degree(a.marked()).unwrap();
        let db = b.degree(b.marked()).unwrap();
        let want = (&db * deg(&a, &[x, tx]) + &da * deg(&b, &[y, ty])) / da.gcd(&db);
        prop_assert_eq!(deg(&ab, &[x, tx, y, ty]), want);
        prop_assert!(ab.degree(ab.marked()).unwrap().is_positive());
    }

    #[test]
    fn boxminus_keeps_positive_elements_positive(a in pointed(), b in pointed(), x in -9i64..=9, t in 0i64..5) {
        let ab = boxminus(&a, &b);
        let v = [BigInt::from(x), BigInt::from(t)];
        if deg(&a, &[x, t]).is_positive() {
            prop_assert!(ab.degree(&ab.embed(0, &v).unwrap()).unwrap().is_positive());
        }
        if deg(&b, &[x, t]).is_positive() {
            prop_assert!(ab.degree(&ab.embed(1, &v).unwrap()).unwrap().is_positive());
        }
    }

    #[test]
    fn boxminus_is_associative(a in pointed(), b in pointed(), c in pointed()) {
        let left = boxminus(&boxminus(&a, &b), &c);
        let right = boxminus(&a, &boxminus(&b, &c));
        prop_assert_eq!(left.group().free_rank(), right.group().free_rank());
        prop_assert_eq!(left.group().invariant_factors(), right.group().invariant_factors());
        prop_assert_eq!(left.generator_degrees().unwrap(), right.generator_degrees().unwrap());
        prop_assert_eq!(left.degree(left.marked()).unwrap(), right.degree(right.marked()).unwrap());
    }

    #[test]
    fn sod_blocks_match_mu_and_torsion(d in weights(6)) {
        let spec = GradedRingSpec::fermat(&d).unwrap();
        let s = sod_summary(&spec).unwrap();
        prop_assert_eq!(BigInt::from(s.blocks.len()), s.mu.abs());
        prop_assert!(s.blocks.iter().all(|b| b.count == s.torsion));
        prop_assert_eq!(s.total_objects(), s.mu.abs() * &s.torsion);
    }

    #[test]
    fn knoerrer_doubling_shifts_mu(d in weights(6)) {
        let spec = GradedRingSpec::fermat(&d).unwrap();
        let before = gorenstein_parameter(&spec).unwrap().mu;
        let big_d = spec.grading().degree(spec.grading().marked()).unwrap();
        let doubled = knoerrer_double(&spec);
        let after = gorenstein_parameter(&doubled).unwrap().mu;
        let new_d = doubled.grading().degree(doubled.grading().marked()).unwrap();
        prop_assert!(after.is_positive());
        // μ + deg(w) in the old units, rescaled
        let scale = BigRational::new(new_d, big_d.clone());
        prop_assert_eq!(BigRational::from_integer(after), scale * BigRational::from_integer(before + big_d));
    }
}

#[test]
fn gorenstein_parameter_matches_mu() {
    for d in all_sequences(5, 6) {
        let spec = GradedRingSpec::fermat(&d).unwrap();
        let g = gorenstein_parameter(&spec).unwrap();
        assert_eq!(g.mu, mu_values(&d).unwrap().mu, "{d}");
    }
}
