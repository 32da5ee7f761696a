use num_bigint::BigInt;
use num_traits::{One, Zero};
use plumbing::invariants::{canonical_chern, k_term, sw, torsion_all, SpinC};
use plumbing::matrix::IntMatrix;
use plumbing::rational::{is_integral, Q};
use plumbing::surgery::random_negdef_tree;
use plumbing::{Lattice, PlumbingGraph};
use proptest::prelude::*;

fn tree() -> impl Strategy<Value = PlumbingGraph> {
    (any::<u64>(), 1usize..=7, 1i64..=3).prop_map(|(seed, n, bias)| random_negdef_tree(seed, n, bias))
}

/// Determinant of `-I` restricted to the vertices other than `u`.
fn minor_without(g: &PlumbingGraph, u: usize) -> BigInt {
    let rest: Vec<usize> = (0..g.len()).filter(|&w| w != u).collect();
    if rest.is_empty() {
        return BigInt::one();
    }
    let m = IntMatrix::from_fn(rest.len(), |i, j| {
        let (a, b) = (rest[i], rest[j]);
        if a == b {
            -g.weight(a)
        } else if g.neighbors(a).contains(&b) {
            -1
        } else {
            0
        }
    });
    m.det()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjugate_times_form_is_scalar(g in tree()) {
        let lat = Lattice::new(g).unwrap();
        let n = lat.len();
        let d = lat.det().clone();
        let mut a = IntMatrix::zeros(n);
        for u in 0..n {
            for w in 0..n {
                prop_assert!(lat.a(u, w) > &BigInt::zero());
                prop_assert_eq!(lat.a(u, w), lat.a(w, u));
                a.set(u, w, lat.a(u, w).clone());
            }
        }
        let prod = lat.matrix().mul(&a);
        for u in 0..n {
            for w in 0..n {
                let want = if u == w { -d.clone() } else { BigInt::zero() };
                prop_assert_eq!(prod.get(u, w), &want);
            }
        }
    }

    #[test]
    fn diagonal_entries_are_complementary_minors(g in tree()) {
        let lat = Lattice::new(g.clone()).unwrap();
        for u in 0..lat.len() {
            prop_assert_eq!(lat.a(u, u), &minor_without(&g, u));
        }
    }

    #[test]
    fn group_order_is_the_determinant(g in tree()) {
        let lat = Lattice::new(g).unwrap();
        let group = lat.group();
        prop_assert_eq!(BigInt::from(group.order()), lat.det().clone());
        let exp = group.exponent();
        prop_assert!(group.orders().iter().all(|o| exp.is_multiple_of(*o)));
        prop_assert_eq!(group.elements().count() as u64, group.order());
    }

    #[test]
    fn classes_of_basis_vectors(g in tree()) {
        let lat = Lattice::new(g).unwrap();
        let n = lat.len();
        let group = lat.group();
        for w in 0..n {
            prop_assert!(lat.e(w).class().unwrap().is_zero());
            prop_assert_eq!(lat.e_star(w).class().unwrap(), group.class_of_e_star(w));
            let r = lat.e(w).e_coords();
            for (u, x) in r.iter().enumerate() {
                prop_assert_eq!(x, &Q::from_integer(BigInt::from((u == w) as i64)));
            }
            for u in 0..n {
                prop_assert_eq!(lat.e(u).pairing(&lat.e(w)).unwrap(), Q::from_integer(lat.matrix().get(u, w).clone()));
            }
        }
        for h in group.elements() {
            let r = lat.rep_in_r(&h);
            prop_assert_eq!(r.class().unwrap(), h);
            prop_assert!(r.e_coords().iter().all(|x| *x <= Q::zero() && *x > -Q::one()));
        }
    }

    #[test]
    fn torsion_sums_to_zero_and_is_conjugation_invariant(g in tree()) {
        let lat = Lattice::new(g).unwrap();
        prop_assume!(lat.group().order() <= 200);
        let t = torsion_all(&lat).unwrap();
        prop_assert_eq!(t.iter().sum::<Q>(), Q::zero());
        // conjugation sends h * σ_can to (-h - [K]) * σ_can
        let group = lat.group();
        let k = canonical_chern(&lat).class().unwrap();
        for s in SpinC::all(&lat) {
            let bar = SpinC::new(&lat, group.neg(&group.add(s.h(), &k))).unwrap();
            prop_assert_eq!(&t[s.index() as usize], &t[bar.index() as usize]);
            prop_assert_eq!(sw(&s).unwrap(), sw(&bar).unwrap());
        }
    }

    #[test]
    fn normalized_sw_is_an_integer(g in tree()) {
        let lat = Lattice::new(g).unwrap();
        prop_assume!(lat.group().order() <= 200);
        for s in SpinC::all(&lat) {
            let x = sw(&s).unwrap() + k_term(&s.extension());
            prop_assert!(is_integral(&x), "σ#{}: {}", s.index(), x);
        }
    }
}
