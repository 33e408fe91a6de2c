use proptest::prelude::*;

use specdir::constructions::{l_operator, shift, RowVector};
use specdir::decomposition::{decompose, decompose_along, reconstruct};
use specdir::format::{parse_ascii, write_ascii};
use specdir::group::{apply_affine, canonical_form, direction_set_image, same_orbit, AffineMap};
use specdir::plane::{direction_profile, special_directions};
use specdir::{Direction, Point, PointSet, Prime, Rational, RationalGrid};

fn small_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![3u32, 5, 7, 11, 13]).prop_map(|p| Prime::new(p).unwrap())
}

fn point_set() -> impl Strategy<Value = PointSet> {
    small_prime().prop_flat_map(|p| {
        prop::collection::vec(any::<bool>(), p.plane_size())
            .prop_map(move |bits| PointSet::from_fn(p, |pt| bits[pt.index(p)]))
    })
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=6).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn grid() -> impl Strategy<Value = RationalGrid> {
    small_prime().prop_flat_map(|p| {
        prop::collection::vec(rational(), p.plane_size())
            .prop_map(move |v| RationalGrid::from_values(p, v).unwrap())
    })
}

fn affine_map(p: Prime) -> impl Strategy<Value = AffineMap> {
    let q = p.get() as i64;
    ([0..q, 0..q, 0..q, 0..q], [0..q, 0..q]).prop_filter_map("singular", move |(a, t)| {
        AffineMap::new(p, [[a[0], a[1]], [a[2], a[3]]], t).ok()
    })
}

fn set_and_map() -> impl Strategy<Value = (PointSet, AffineMap)> {
    point_set().prop_flat_map(|s| {
        let p = s.prime();
        (Just(s), affine_map(p))
    })
}

/// A sum of weighted lines in a few directions.
fn line_sum() -> impl Strategy<Value = RationalGrid> {
    small_prime().prop_flat_map(|p| {
        let q = p.get();
        prop::collection::vec((0..q + 1, 0..q, rational()), 0..5).prop_map(move |lines| {
            RationalGrid::from_fn(p, |pt| {
                lines
                    .iter()
                    .filter(|(d, c, _)| {
                        Direction::from_index(p, *d as usize).line_index(p, pt) == *c
                    })
                    .map(|(_, _, w)| w.clone())
                    .sum()
            })
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn special_count_is_affine_invariant((s, g) in set_and_map()) {
        let image = g.apply_set(&s);
        prop_assert_eq!(image.special_directions(), direction_set_image(&g, &s.special_directions()));
    }

    #[test]
    fn grid_special_directions_transport((s, g) in set_and_map()) {
        let f = s.to_grid::<i64>();
        let image = apply_affine(&g, &f).unwrap();
        prop_assert_eq!(special_directions(&image), direction_set_image(&g, &special_directions(&f)));
    }

    #[test]
    fn profiles_conserve_mass(f in grid()) {
        let total = f.total();
        for d in Direction::all(f.prime()) {
            prop_assert_eq!(direction_profile(&f, d).total(), total.clone());
        }
    }

    #[test]
    fn decomposition_reconstructs(f in line_sum()) {
        let w = decompose(&f).unwrap();
        prop_assert_eq!(reconstruct(&w), f);
    }

    #[test]
    fn decomposition_along_all_directions_reconstructs_any_grid(f in grid()) {
        let order: Vec<Direction> = Direction::all(f.prime()).collect();
        let w = decompose_along(&f, &order).unwrap();
        prop_assert_eq!(reconstruct(&w), f);
    }

    #[test]
    fn canonical_form_is_idempotent((s, g) in set_and_map()) {
        prop_assume!(s.prime().get() <= 5);
        let c = canonical_form(&s).unwrap();
        prop_assert_eq!(canonical_form(&c).unwrap(), c.clone());
        prop_assert_eq!(canonical_form(&g.apply_set(&s)).unwrap(), c);
        prop_assert!(same_orbit(&s, &g.apply_set(&s)).unwrap());
    }

    #[test]
    fn complement_has_same_special_directions(s in point_set()) {
        prop_assert_eq!(s.complement().special_directions(), s.special_directions());
    }

    #[test]
    fn ascii_round_trip(f in grid()) {
        prop_assert_eq!(parse_ascii(&write_ascii(&f)).unwrap(), f);
    }

    #[test]
    fn l_operator_is_linear_and_shift_equivariant(
        p in small_prime(),
        u in prop::collection::vec(-5i64..=5, 13),
        v in prop::collection::vec(-5i64..=5, 13),
        j in 1i64..13,
        m in 0i64..30,
        a in rational(),
    ) {
        let q = p.get() as usize;
        prop_assume!((j as usize) < q);
        let u = RowVector::from_integers(p, &u[..q]).unwrap();
        let v = RowVector::from_integers(p, &v[..q]).unwrap();
        let lhs = l_operator(j, &(&u.scale(&a) + &v)).unwrap();
        let rhs = &l_operator(j, &u).unwrap().scale(&a) + &l_operator(j, &v).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(l_operator(j, &shift(&u, m)).unwrap(), shift(&l_operator(j, &u).unwrap(), m));
    }

    #[test]
    fn points_round_trip_through_indices(p in small_prime(), i in 0usize..169) {
        prop_assume!(i < p.plane_size());
        prop_assert_eq!(Point::from_index(p, i).index(p), i);
    }
}
