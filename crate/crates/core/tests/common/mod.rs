//! Shared corpus generation for the integration and acceptance suites.

use rand::rngs::StdRng;
use rand::Rng;

use semireach::instance::{Instance, Payload, ProblemKind, WordMode};
use semireach::matrix::{Mat, Morphism};
use semireach::value::{SemiringId, Value};
use semireach::witness::Witness;

pub type VMat = Mat<SemiringId>;

/// A small entry pool: the naturals 0..=2 plus the zero and one of the
/// semiring (weighted toward finite values).
pub fn random_value(rng: &mut StdRng, sr: SemiringId) -> Value {
    match rng.gen_range(0..6) {
        0 => sr.zero(),
        1 => sr.one(),
        k => Value::int((k - 2) as i64),
    }
}

pub fn random_mat(rng: &mut StdRng, sr: SemiringId, rows: usize, cols: usize) -> VMat {
    Mat::from_fn(sr, rows, cols, |_, _| random_value(rng, sr))
}

pub fn random_morphism(rng: &mut StdRng, sr: SemiringId, r: usize, n: usize) -> Morphism<SemiringId> {
    Morphism::new((0..r).map(|_| random_mat(rng, sr, n, n)).collect()).expect("square generators")
}

pub fn random_word(rng: &mut StdRng, r: usize, max_len: usize) -> Witness {
    let len = rng.gen_range(1..=max_len);
    Witness::from_letters0((0..len).map(|_| rng.gen_range(0..r)).collect())
}

/// A random instance; with probability ~1/2 the target data is attained by
/// a short word (so both Yes and No cases appear), and zero targets are
/// drawn regularly so both reduction branches get exercised.
pub fn random_instance(
    rng: &mut StdRng,
    sr: SemiringId,
    kind: ProblemKind,
    r: usize,
    n: usize,
    mode: WordMode,
) -> Instance {
    let morphism = random_morphism(rng, sr, r, n);
    let attained = rng.gen_bool(0.5);
    let zeroish = rng.gen_bool(0.3);
    let payload = match kind {
        ProblemKind::Matrix => {
            let target = if zeroish {
                Mat::zeros(sr, n, n)
            } else if attained {
                morphism
                    .apply(&random_word(rng, r, 4))
                    .expect("valid word")
            } else {
                random_mat(rng, sr, n, n)
            };
            let mut targets = vec![target];
            if rng.gen_bool(0.2) {
                targets.push(random_mat(rng, sr, n, n));
            }
            Payload::Matrix { morphism, targets }
        }
        ProblemKind::Vector => {
            let alpha = random_mat(rng, sr, 1, n);
            let eta = if zeroish {
                Mat::zeros(sr, 1, n)
            } else if attained {
                alpha
                    .mul(&morphism.apply(&random_word(rng, r, 4)).expect("valid word"))
                    .expect("conformant")
            } else {
                random_mat(rng, sr, 1, n)
            };
            Payload::Vector { morphism, alpha, eta }
        }
        ProblemKind::Scalar => {
            let alpha = random_mat(rng, sr, 1, n);
            let beta = random_mat(rng, sr, n, 1);
            let gamma = if zeroish {
                sr.zero()
            } else if attained {
                alpha
                    .mul(&morphism.apply(&random_word(rng, r, 4)).expect("valid word"))
                    .expect("conformant")
                    .mul(&beta)
                    .expect("conformant")
                    .get(0, 0)
                    .clone()
            } else {
                random_value(rng, sr)
            };
            Payload::Scalar { morphism, alpha, beta, gamma }
        }
        ProblemKind::Corner => {
            let gamma = if zeroish {
                sr.zero()
            } else if attained {
                morphism
                    .apply(&random_word(rng, r, 4))
                    .expect("valid word")
                    .get(0, n - 1)
                    .clone()
            } else {
                random_value(rng, sr)
            };
            Payload::Corner { morphism, gamma }
        }
    };
    Instance::new(sr, mode, payload).expect("generated instances are well-formed")
}
