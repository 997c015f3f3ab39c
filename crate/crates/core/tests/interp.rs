mod common;

use std::sync::Arc;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use repcat::formula::{RegularFormula, Sequent};
use repcat::interp::*;
use repcat::{Matrix, Quiver, Rational, Representation, Subspace};

fn stream(rep: &Representation) -> Vec<RegularFormula> {
    enumerate_formulas(rep.quiver(), &small_budget()).take(3000).collect()
}

/// Two sampled formulas sharing a context.
fn pair(rng: &mut rand_chacha::ChaCha8Rng, all: &[RegularFormula]) -> (RegularFormula, RegularFormula) {
    let f = pick(rng, all).clone();
    let same: Vec<&RegularFormula> = all.iter().filter(|g| g.context() == f.context()).collect();
    let g = (*pick(rng, &same)).clone();
    (f, g)
}

/// `v ∈ [[f]]` decided pointwise: some assignment of the bound variables
/// solves every equation, i.e. `A·v` lies in the column span of `B`.
fn member(f: &RegularFormula, rep: &Representation, v: &[Rational]) -> bool {
    let m = formula_matrix(f, rep).unwrap();
    let n = v.len();
    let ctx: Vec<usize> = (0..n).collect();
    let bound: Vec<usize> = (n..m.cols()).collect();
    let av = m.select_columns(&ctx).mul_vec(v);
    let b = m.select_columns(&bound);
    let column = Matrix::new(av.len(), 1, av).unwrap();
    b.rank() == b.hstack(&column).rank()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn connectives_match_subspace_operations(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rep = representation(&mut rng, 2, 3, 2);
        let all = stream(&rep);
        for _ in 0..10 {
            let (f, g) = pair(&mut rng, &all);
            let (sf, sg) = (interpret(&f, &rep).unwrap(), interpret(&g, &rep).unwrap());
            prop_assert_eq!(interpret(&f.conjoin(&g).unwrap(), &rep).unwrap(), sf.intersect(&sg).unwrap());
            prop_assert_eq!(interpret(&f.sum(&g).unwrap(), &rep).unwrap(), sf.sum(&sg).unwrap());
            prop_assert_eq!(interpret(&f.product(&g), &rep).unwrap(), sf.product(&sg));
            let n = f.context().len();
            if n > 1 {
                let ctx_dims: Vec<usize> = f.context().iter().map(|&s| rep.dim(s)).collect();
                let keep = vec![n - 1];
                let start: usize = ctx_dims[..n - 1].iter().sum();
                let coords: Vec<usize> = (start..start + ctx_dims[n - 1]).collect();
                prop_assert_eq!(interpret(&f.exists_except(&keep).unwrap(), &rep).unwrap(), sf.project(&coords).unwrap());
            }
            prop_assert_eq!(interpret(&f.normalize(), &rep).unwrap(), sf);
        }
    }

    #[test]
    fn quantifier_free_formulas_are_kernels(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rep = representation(&mut rng, 2, 3, 2);
        for f in stream(&rep).iter().filter(|f| f.bound().is_empty()).take(200) {
            prop_assert_eq!(interpret(f, &rep).unwrap(), Subspace::kernel_of(&formula_matrix(f, &rep).unwrap()));
        }
    }

    #[test]
    fn sequents_agree_with_pointwise_membership(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rep = representation(&mut rng, 2, 3, 2);
        let all = stream(&rep);
        for _ in 0..20 {
            let (f, g) = pair(&mut rng, &all);
            let lhs = interpret(&f, &rep).unwrap();
            let pointwise = lhs.basis().row_iter().all(|v| member(&g, &rep, v));
            let s = Sequent::new(f, g).unwrap();
            prop_assert_eq!(check_sequent(&s, &rep).unwrap(), pointwise);
        }
    }

    #[test]
    fn theories_are_invariant_under_change_of_basis(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let rep = representation(&mut rng, 2, 2, 2);
        let other = conjugate(&mut rng, &rep);
        let report = compare_theories(&rep, &other, &small_budget()).unwrap();
        prop_assert_eq!(report.verdict, Verdict::Equal);
        prop_assert!(report.witness.is_none());
    }

    #[test]
    fn witnesses_are_genuine_and_symmetric(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = representation(&mut rng, 2, 2, 2);
        let mats = a.maps().iter().map(|m| if rng.gen_bool(0.5) { matrix(&mut rng, m.rows(), m.cols(), -1, 1) } else { m.clone() }).collect();
        let b = Representation::new(a.quiver_arc().clone(), a.dims().to_vec(), mats);
        let ab = compare_theories(&a, &b, &small_budget()).unwrap();
        let ba = compare_theories(&b, &a, &small_budget()).unwrap();
        prop_assert_eq!(ab.verdict, ba.verdict);
        prop_assert_eq!(ab.formulas, ba.formulas);
        if let Some(w) = &ab.witness {
            let (in_a, in_b) = (check_sequent(&w.sequent, &a).unwrap(), check_sequent(&w.sequent, &b).unwrap());
            prop_assert_ne!(in_a, in_b);
            prop_assert_eq!(in_a, w.holds_in == Side::A);
        }
    }

    #[test]
    fn larger_budgets_keep_unequal_verdicts(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let a = representation(&mut rng, 2, 2, 2);
        let small = Budget { max_ctx_vars: 1, max_bound_vars: 1, max_eqs: 1, max_path_len: 1, ..Budget::default() };
        let other = {
            let mats = a.maps().iter().map(|m| matrix(&mut rng, m.rows(), m.cols(), -1, 1)).collect();
            Representation::new(a.quiver_arc().clone(), a.dims().to_vec(), mats)
        };
        let r1 = compare_theories(&a, &other, &small).unwrap();
        if r1.verdict == Verdict::Unequal {
            let r2 = compare_theories(&a, &other, &small_budget()).unwrap();
            prop_assert_eq!(r2.verdict, Verdict::Unequal);
        }
    }
}

#[test]
fn nilpotent_witness_is_found_early() {
    let q = Arc::new(Quiver::new(["d"], vec![("f", "d", "d")]).unwrap());
    let nil = Representation::new(q.clone(), vec![2], vec![Matrix::from_i64(&[&[0, 1], &[0, 0]])]);
    let zero = Representation::new(q, vec![2], vec![Matrix::zeros(2, 2)]);
    let r = compare_theories(&nil, &zero, &Budget::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Unequal);
    let w = r.witness.unwrap();
    assert_eq!(check_sequent(&w.sequent, &zero), Ok(true));
    assert_eq!(check_sequent(&w.sequent, &nil), Ok(false));
}
