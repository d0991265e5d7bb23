use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use toroidal_core::chevalley::{ChevalleyError, SpecialLinear};
use toroidal_core::lattice::{Field, Matrix, Rat};

fn leading_minor(g: &Matrix<Rat>, k: usize) -> Rat {
    Matrix::from_fn(k, k, |i, j| g[(i, j)].clone()).det()
}

#[test]
fn pinning_identities() {
    for n in 2..=5 {
        let g = SpecialLinear::new(n).unwrap();
        for k in 0..g.root_count() {
            let x = Rat::new(3, 7);
            let y = Rat::new(-5, 2);
            assert_eq!(
                &g.pin(k, x.clone()) * &g.pin(k, y.clone()),
                g.pin(k, x + y)
            );
        }
        for i in 0..g.rank() {
            let ni = g.weyl_generator::<Rat>(i);
            assert!(ni.det().is_one());
            assert!((&(&ni * &ni) * &(&ni * &ni)).is_identity());
            assert!((&ni * &g.weyl_generator_inv(i)).is_identity());
        }
        let signs = g.chevalley_signs().unwrap();
        for i in 0..g.rank() {
            assert_eq!(signs.get(i, g.simple_root_index(i, false)), -1);
            assert_eq!(signs.get(i, g.simple_root_index(i, true)), -1);
        }
    }
}

#[test]
fn big_cell_soundness_and_membership() {
    for n in 2..=4 {
        let g = SpecialLinear::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        let mut inside = 0;
        for case in 0..1000 {
            let m = if case % 4 == 3 {
                // engineered failure: u⁻·n_i·t·u⁺ kills leading minor i+1
                let i = rng.random_range(0..g.rank());
                let t = g.torus(&g.random_torus(&mut rng)).unwrap();
                let lo = g.random_unipotent(&mut rng, false);
                let up = g.random_unipotent(&mut rng, true);
                &(&(&lo * &g.weyl_generator(i)) * &t) * &up
            } else {
                g.random_element(&mut rng, 10)
            };
            let minors_ok = (1..=n).all(|k| !leading_minor(&m, k).is_zero());
            match g.big_cell_factor_default(&m) {
                Ok(b) => {
                    assert!(minors_ok);
                    assert_eq!(g.reassemble(&b).unwrap(), m);
                    inside += 1;
                }
                Err(ChevalleyError::NotInBigCell(k)) => {
                    assert!(!minors_ok);
                    assert!(leading_minor(&m, k).is_zero());
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(inside > 100, "too few in-cell samples for n = {n}");
    }
}

#[test]
fn refactor_is_order_independent() {
    for n in 2..=5 {
        let g = SpecialLinear::new(n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(100 + n as u64);
        for _ in 0..50 {
            for positive in [true, false] {
                let u = g.random_unipotent(&mut rng, positive);
                let mut order = if positive { g.positive_order() } else { g.negative_order() };
                order.shuffle(&mut rng);
                let coords = g.unipotent_refactor(&u, &order).unwrap();
                assert_eq!(g.assemble(&order, &coords), u);
            }
        }
    }
}
