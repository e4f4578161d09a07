//! Randomized consistency checks for every reduction and word-mode
//! conversion: answer preservation, witness push/pull, dimension records.

mod common;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::random_instance;
use semireach::bundle::ReductionBundle;
use semireach::decide::{decide, DecideOpts};
use semireach::instance::{plus_star_convert, Instance, ProblemKind, WordMode};
use semireach::oracle::reduction_consistency_check;
use semireach::reduce::{reduce_any, ReductionTarget};
use semireach::value::SemiringId;

fn check(i: &Instance, bundle: &ReductionBundle, max_len: usize) {
    let report = reduction_consistency_check(i, bundle, max_len);
    assert!(
        report.ok(),
        "consistency failure for {:?} on:\n{}\nfailures: {:#?}",
        bundle.kind,
        semireach::instance::serialize_instance(i),
        report.failures
    );
}

fn corpus(kind: ProblemKind, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = rng.gen_range(1..=3);
            let n = rng.gen_range(1..=2);
            random_instance(&mut rng, SemiringId::Nmin, kind, r, n, WordMode::Plus)
        })
        .collect()
}

#[test]
fn scalar_to_scalar2_consistency() {
    for i in corpus(ProblemKind::Scalar, 30, 11) {
        let b = ReductionTarget::Scalar2.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, i.letters() * i.dim());
        check(&i, &b, 4);
    }
}

#[test]
fn vector_to_vector2_consistency() {
    for i in corpus(ProblemKind::Vector, 30, 12) {
        let b = ReductionTarget::Vector2.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, i.letters() * i.dim());
        check(&i, &b, 4);
    }
}

#[test]
fn matrix_to_matrix2_consistency() {
    for i in corpus(ProblemKind::Matrix, 25, 13) {
        let b = ReductionTarget::Matrix2.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, i.letters() * i.dim());
        check(&i, &b, 4);
    }
}

#[test]
fn vector_to_matrix_consistency() {
    for i in corpus(ProblemKind::Vector, 25, 14) {
        let b = ReductionTarget::VectorToMatrix.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, i.letters() + 1);
        check(&i, &b, 4);
    }
}

#[test]
fn scalar_to_vector_consistency() {
    for i in corpus(ProblemKind::Scalar, 25, 15) {
        let b = ReductionTarget::ScalarToVector.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, i.letters() + 1);
        check(&i, &b, 4);
    }
}

#[test]
fn scalar_to_matrix_consistency() {
    for i in corpus(ProblemKind::Scalar, 20, 16) {
        let b = ReductionTarget::ScalarToMatrix.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, i.letters() + 1);
        check(&i, &b, 4);
    }
}

#[test]
fn matrix_to_vector_consistency() {
    for i in corpus(ProblemKind::Matrix, 25, 17) {
        let b = ReductionTarget::MatrixToVector.apply(&i).unwrap();
        assert_eq!(b.dims.r_out, i.letters());
        assert_eq!(b.dims.n_out, i.dim() * i.dim());
        check(&i, &b, 4);
    }
}

#[test]
fn cassaigne_chain_consistency() {
    let mut rng = StdRng::seed_from_u64(18);
    for _ in 0..15 {
        let r = rng.gen_range(2..=3);
        let mut i = random_instance(&mut rng, SemiringId::Nmin, ProblemKind::Corner, r, 2, WordMode::Plus);
        if let semireach::instance::Payload::Corner { gamma, .. } = &mut i.payload {
            *gamma = SemiringId::Nmin.zero();
        }
        let b = ReductionTarget::Cassaigne.apply(&i).unwrap();
        assert_eq!(b.dims.n_out, r * i.dim() + 2);
        check(&i, &b, 4);
    }
}

#[test]
fn mode_conversions_preserve_answers() {
    let mut rng = StdRng::seed_from_u64(19);
    let opts = DecideOpts::default();
    for kind in [
        ProblemKind::Matrix,
        ProblemKind::Vector,
        ProblemKind::Scalar,
        ProblemKind::Corner,
    ] {
        for mode in [WordMode::Plus, WordMode::Star] {
            for _ in 0..15 {
                let r = rng.gen_range(1..=3);
                let n = rng.gen_range(1..=2);
                let i = random_instance(&mut rng, SemiringId::Nmin, kind, r, n, mode);
                for to in [WordMode::Plus, WordMode::Star] {
                    let b = plus_star_convert(&i, to).unwrap();
                    for sub in &b.subs {
                        assert_eq!(sub.mode, to);
                    }
                    let original = decide(&i, &opts);
                    let folded = b.answer_with(|s| decide(s, &opts));
                    assert_eq!(
                        original.is_yes(),
                        folded.is_yes(),
                        "conversion to {to:?} changed the answer on\n{}",
                        semireach::instance::serialize_instance(&i)
                    );
                    let report = reduction_consistency_check(&i, &b, 4);
                    assert!(
                        report.ok(),
                        "conversion to {to:?} failed on\n{}\n{:#?}",
                        semireach::instance::serialize_instance(&i),
                        report.failures
                    );
                }
            }
        }
    }
}

#[test]
fn vector2_alpha_equals_eta_branch() {
    // α = η makes the embedded instance accept the empty word; the bundle
    // must still answer the nonempty-word question.
    let text = "\
semiring nmin
problem vector
letters 2
dim 2
gen 1
0 1
1 +inf
gen 2
1 0
+inf 2
alpha 0 1
eta 0 1
";
    let i: Instance = semireach::instance::parse_instance(text).unwrap();
    let b = ReductionTarget::Vector2.apply(&i).unwrap();
    assert_eq!(b.subs.len(), 4, "r² star-mode sub-instances");
    for sub in &b.subs {
        assert_eq!(sub.mode, WordMode::Star);
    }
    check(&i, &b, 5);

    // A variant where no nonempty word reattains α: the original is a No
    // even though α = η.
    let text = "\
semiring nmin
problem vector
letters 1
dim 1
gen 1
1
alpha 0
eta 0
";
    let i: Instance = semireach::instance::parse_instance(text).unwrap();
    let b = ReductionTarget::Vector2.apply(&i).unwrap();
    let opts = DecideOpts::default();
    assert!(!decide(&i, &opts).is_yes());
    assert!(!b.answer_with(|s| decide(s, &opts)).is_yes());
    check(&i, &b, 5);
}

#[test]
fn matrix2_mortality_branch() {
    // Nilpotent-style generators over nmin: the zero matrix (all +inf) is
    // reachable, and the two-letter mortality instance tracks it.
    let text = "\
semiring nmin
problem matrix
letters 2
dim 2
gen 1
+inf 0
+inf +inf
gen 2
+inf +inf
1 +inf
target
+inf +inf
+inf +inf
";
    let i: Instance = semireach::instance::parse_instance(text).unwrap();
    let b = ReductionTarget::Matrix2.apply(&i).unwrap();
    assert_eq!(b.subs.len(), 1);
    let opts = DecideOpts::default();
    assert!(decide(&i, &opts).is_yes());
    assert!(b.answer_with(|s| decide(s, &opts)).is_yes());
    check(&i, &b, 4);
}

#[test]
fn matrix2_swap_branch_round_trip() {
    // Nonzero target with r = 3: one branch per first letter, witnesses
    // round-trip through the letter swap and the word coding.
    let text = "\
semiring nmin
problem matrix
letters 3
dim 1
gen 1
1
gen 2
2
gen 3
5
target
8
";
    let i: Instance = semireach::instance::parse_instance(text).unwrap();
    let b = ReductionTarget::Matrix2.apply(&i).unwrap();
    assert_eq!(b.subs.len(), 3);
    check(&i, &b, 5);
}

#[test]
fn mixed_identity_target_set_conversion() {
    // A target set containing the identity forces the dimension lift in
    // the plus-to-star conversion, for every target at once.
    let text = "\
semiring nat
problem matrix
letters 2
dim 1
gen 1
2
gen 2
3
target
1
target
6
";
    let i: Instance = semireach::instance::parse_instance(text).unwrap();
    let b = plus_star_convert(&i, WordMode::Star).unwrap();
    assert_eq!(b.subs.len(), 1);
    assert_eq!(b.subs[0].dim(), 2);
    let report = reduction_consistency_check(&i, &b, 5);
    assert!(report.ok(), "{:#?}", report.failures);
}

#[test]
fn zmax_bundles_check_witness_maps_only() {
    // No decider exists over zmax; the harness still verifies push/pull
    // round trips by bounded enumeration.
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..10 {
        let i = random_instance(
            &mut rng,
            SemiringId::Zmax,
            ProblemKind::Scalar,
            2,
            2,
            WordMode::Plus,
        );
        let b = ReductionTarget::Scalar2.apply(&i).unwrap();
        let report = reduction_consistency_check(&i, &b, 6);
        assert!(report.decide_agrees.is_none());
        assert!(report.ok(), "{:#?}", report.failures);
    }
}

#[test]
fn reductions_respect_special_values() {
    // Leung's omega and the two infinities of nbarmax must survive the
    // block constructions.
    let mut rng = StdRng::seed_from_u64(22);
    for sr in [SemiringId::Leung, SemiringId::NbarMax, SemiringId::NatBar] {
        for kind in [ProblemKind::Scalar, ProblemKind::Vector, ProblemKind::Matrix] {
            for _ in 0..8 {
                let r = rng.gen_range(1..=2);
                let n = rng.gen_range(1..=2);
                let i = random_instance(&mut rng, sr, kind, r, n, WordMode::Plus);
                let targets: &[ReductionTarget] = match kind {
                    ProblemKind::Scalar => &[ReductionTarget::Scalar2, ReductionTarget::ScalarToVector],
                    ProblemKind::Vector => &[ReductionTarget::Vector2, ReductionTarget::VectorToMatrix],
                    _ => &[ReductionTarget::Matrix2, ReductionTarget::MatrixToVector],
                };
                for &t in targets {
                    let b = t.apply(&i).unwrap();
                    check(&i, &b, 3);
                }
            }
        }
    }
}

#[test]
fn reduce_any_converts_star_inputs() {
    let mut rng = StdRng::seed_from_u64(20);
    for _ in 0..10 {
        let i = random_instance(
            &mut rng,
            SemiringId::Nmin,
            ProblemKind::Scalar,
            2,
            2,
            WordMode::Star,
        );
        let b = reduce_any(&i, ReductionTarget::Scalar2).unwrap();
        let report = reduction_consistency_check(&i, &b, 4);
        assert!(report.ok(), "{:#?}", report.failures);
    }
}
