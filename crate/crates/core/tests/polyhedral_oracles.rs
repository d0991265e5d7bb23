mod common;

use common::{box_points, coverage_oracle, in_cone_oracle, in_dual};
use proptest::prelude::*;
use toroidal_core::lattice::{dot, IntVector};
use toroidal_core::polyhedral::{dual_cone, Cone, Fan};
use toroidal_core::root_datum::{CartanType, RootDatum};

fn gens_strategy() -> impl Strategy<Value = (usize, Vec<IntVector>)> {
    (2usize..=3).prop_flat_map(|dim| {
        (
            Just(dim),
            prop::collection::vec(prop::collection::vec(-3i64..=3, dim), 1..=4),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_duality((dim, gens) in gens_strategy()) {
        let Ok(c) = Cone::new(dim, &gens) else { return Ok(()) };
        let dual = dual_cone(dim, &gens);
        for m in &dual {
            prop_assert!(in_dual(&gens, m));
        }
        let mut back = dual_cone(dim, &dual);
        back.sort();
        prop_assert_eq!(back, c.rays().to_vec());
        for r in c.rays() {
            prop_assert!(in_cone_oracle(&gens, r));
        }
    }

    #[test]
    fn hilbert_basis_against_enumeration((dim, gens) in gens_strategy()) {
        let Ok(c) = Cone::new(dim, &gens) else { return Ok(()) };
        let h = c.hilbert();
        for m in h.elements() {
            prop_assert!(in_dual(&gens, m));
        }
        let bound = if dim == 2 { 10 } else { 5 };
        for m in box_points(dim, bound) {
            let member = in_dual(&gens, &m);
            match c.monoid_decompose(&m) {
                Ok(coeffs) => {
                    prop_assert!(member);
                    let mut sum = vec![0i64; dim];
                    for (k, e) in h.elements().iter().enumerate() {
                        for i in 0..dim {
                            sum[i] += coeffs[k] as i64 * e[i];
                        }
                    }
                    prop_assert_eq!(sum, m);
                }
                Err(_) => prop_assert!(!member),
            }
        }
        // minimality on the pointed part: no element splits as a sum of two
        // nonzero monoid elements
        if h.lineality().is_empty() {
            let big = box_points(dim, 3 * bound);
            for x in h.elements() {
                if x.iter().any(|v| v.abs() > bound) { continue; }
                for y in &big {
                    if y.iter().all(|&v| v == 0) || y == x { continue; }
                    let rest: Vec<i64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                    prop_assert!(!(in_dual(&gens, y) && in_dual(&gens, &rest)),
                        "{:?} splits as {:?} + {:?}", x, y, rest);
                }
            }
        }
    }

    #[test]
    fn limit_criterion((dim, gens) in gens_strategy()) {
        let Ok(c) = Cone::new(dim, &gens) else { return Ok(()) };
        let h = c.hilbert();
        for delta in box_points(dim, 3) {
            let by_hilbert = h.elements().iter().all(|m| dot(m, &delta) >= 0);
            prop_assert_eq!(by_hilbert, in_cone_oracle(&gens, &delta));
        }
    }

    #[test]
    fn faces_are_transitive_and_smoothness_hereditary((dim, gens) in gens_strategy()) {
        let Ok(c) = Cone::new(dim, &gens) else { return Ok(()) };
        let faces = c.faces();
        for tau in &faces {
            let u = c.face_witness(tau).unwrap();
            prop_assert!(c.dual_contains(&u));
            for r in c.rays() {
                prop_assert_eq!(dot(&u, r) == 0, tau.rays().contains(r));
            }
            for gamma in tau.faces() {
                prop_assert!(c.is_face(&gamma));
            }
            if c.is_smooth() {
                prop_assert!(tau.is_smooth());
            }
        }
    }
}

fn datum(kind: CartanType, rank: usize) -> RootDatum {
    RootDatum::named(kind, rank).unwrap()
}

/// Fans generated by every subset of the faces of the chamber.
fn chamber_subfans(rd: &RootDatum) -> Vec<Fan> {
    let n = rd.rank();
    let chamber = Cone::new(n, &rd.negative_chamber_rays()).unwrap();
    let faces = chamber.faces();
    let mut out = Vec::new();
    for mask in 0u32..(1 << faces.len()) {
        let picked: Vec<Cone> = (0..faces.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| faces[i].clone())
            .collect();
        let fan = Fan::from_cones(n, picked);
        if !out.contains(&fan) {
            out.push(fan);
        }
    }
    out
}

#[test]
fn properness_matches_coverage_in_rank_two() {
    for (kind, rank) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
        let rd = datum(kind, rank);
        let w = rd.weyl_group().unwrap();
        for fan in chamber_subfans(&rd) {
            assert!(fan.supported_in_chamber(&rd));
            let orbit = fan.weyl_orbit(&w).unwrap();
            let proper = fan.is_proper(&w).unwrap();
            assert_eq!(proper, coverage_oracle(&orbit, 20_000, 7), "{kind:?} {:?}", fan.cones());
        }
    }
}

#[test]
fn properness_matches_coverage_a3() {
    let rd = datum(CartanType::A, 3);
    let w = rd.weyl_group().unwrap();
    let chamber = Cone::new(3, &rd.negative_chamber_rays()).unwrap();
    let full = Fan::from_cones(3, vec![chamber.clone()]);
    assert!(full.is_proper(&w).unwrap());
    assert!(coverage_oracle(&full.weyl_orbit(&w).unwrap(), 5_000, 11));
    let walls = Fan::from_cones(
        3,
        chamber.faces().into_iter().filter(|f| f.cone_dim() == 2).collect(),
    );
    assert!(!walls.is_proper(&w).unwrap());
    assert!(!coverage_oracle(&walls.weyl_orbit(&w).unwrap(), 5_000, 11));
}

#[test]
fn properness_is_weyl_invariant() {
    for (kind, rank) in [(CartanType::A, 2), (CartanType::B, 2)] {
        let rd = datum(kind, rank);
        let w = rd.weyl_group().unwrap();
        for fan in chamber_subfans(&rd) {
            let base = fan.is_proper(&w).unwrap();
            for el in w.elements() {
                let moved = Fan::from_cones(
                    rank,
                    fan.cones().iter().map(|c| c.transform(&el.on_n)).collect(),
                );
                assert_eq!(moved.is_proper(&w).unwrap(), base);
            }
        }
    }
}
