mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use repcat::quiver::Violation;
use repcat::{Matrix, Representation};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn restriction_is_functorial(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rep = representation(&mut rng, 4, 3, 5);
        let q = rep.quiver();
        let names: Vec<&str> = q.vertices().map(|v| q.vertex_name(v)).collect();
        let v1: Vec<&str> = names.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let v2: Vec<&str> = v1.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        let once = rep.restrict(&v1).unwrap();
        prop_assert!(once.validate().is_empty());
        let twice = once.restrict(&v2).unwrap();
        let direct = rep.restrict(&v2).unwrap();
        prop_assert_eq!(twice.dims(), direct.dims());
        prop_assert_eq!(twice.maps(), direct.maps());
        prop_assert_eq!(twice.quiver(), direct.quiver());
        prop_assert!(direct.validate().is_empty());
    }
}

#[test]
fn validate_reports_wrong_shapes() {
    let mut rng = rng(3);
    let rep = representation(&mut rng, 2, 2, 2);
    let bad: Vec<Matrix> = rep.maps().iter().map(|m| Matrix::zeros(m.rows() + 1, m.cols())).collect();
    let broken = Representation::new(rep.quiver_arc().clone(), rep.dims().to_vec(), bad);
    let found = broken.validate();
    assert_eq!(found.len(), rep.maps().len());
    assert!(found.iter().all(|v| matches!(v, Violation::Shape { .. })));
}
