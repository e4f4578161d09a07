//! Embeddings of `r`-generator matrix semigroups into 2-generator ones,
//! together with the word codings they rely on.
//!
//! Words over the two-letter alphabet `{b, c}` are represented as
//! [`Witness`] values with `b` = letter 1 and `c` = letter 2.

use crate::error::AlgebraError;
use crate::matrix::{Mat, Morphism};
use crate::semiring::Semiring;
use crate::witness::Witness;

/// 0-based index of the letter `b` in two-letter words.
pub const B: usize = 0;
/// 0-based index of the letter `c` in two-letter words.
pub const C: usize = 1;

/// The coding `δ(a_{i_1}…a_{i_k}) = c^{i_1-1} b … c^{i_k-1} b`, a bijection
/// onto `{b, cb, …, c^{r-1}b}*`.
pub fn delta_encode(w: &Witness, r: usize) -> Witness {
    let mut out = Vec::new();
    for &l in w.letters0() {
        debug_assert!(l < r);
        out.extend(std::iter::repeat_n(C, l));
        out.push(B);
    }
    Witness::from_letters0(out)
}

/// Inverse of [`delta_encode`] on its image; `None` for words outside
/// `{b, cb, …, c^{r-1}b}*` (a run of `r` or more `c`s, or trailing `c`s).
pub fn delta_decode(v: &Witness, r: usize) -> Option<Witness> {
    let mut out = Vec::new();
    let mut run = 0usize;
    for &l in v.letters0() {
        match l {
            C => {
                run += 1;
                if run >= r {
                    return None;
                }
            }
            B => {
                out.push(run);
                run = 0;
            }
            _ => return None,
        }
    }
    if run != 0 {
        return None;
    }
    Some(Witness::from_letters0(out))
}

/// The unique factorization `v = c^{i_1} b c^{i_2} b … c^{i_k} b c^{i_{k+1}}`;
/// returns the exponents `(i_1, …, i_{k+1})` where `k` is the number of `b`s.
pub fn bc_factorize(v: &Witness) -> Vec<usize> {
    let mut exps = vec![0usize];
    for &l in v.letters0() {
        match l {
            C => *exps.last_mut().unwrap() += 1,
            B => exps.push(0),
            _ => panic!("bc_factorize on a word outside {{b,c}}"),
        }
    }
    exps
}

/// Number of `b`s in a two-letter word.
pub fn b_count(v: &Witness) -> usize {
    v.letters0().iter().filter(|&&l| l == B).count()
}

/// Letterwise cyclic shift `a_j ↦ a_{j+m}` (0-based, mod `r`).
pub fn shift_letters(w: &Witness, m: usize, r: usize) -> Witness {
    Witness::from_letters0(w.letters0().iter().map(|&l| (l + m) % r).collect())
}

/// Exchanges the letters `i` and `j` (0-based) throughout the word.
pub fn swap_letters(w: &Witness, i: usize, j: usize) -> Witness {
    Witness::from_letters0(
        w.letters0()
            .iter()
            .map(|&l| {
                if l == i {
                    j
                } else if l == j {
                    i
                } else {
                    l
                }
            })
            .collect(),
    )
}

/// Encodes `w` as a `{b,c}`-word whose first diagonal word under the second
/// embedding is exactly `w`: from cyclic position `p`, the letter `a_j` is
/// emitted as `b^{(j-p) mod r}` followed by one `c`.
pub fn rotation_encode(w: &Witness, r: usize) -> Witness {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for &l in w.letters0() {
        debug_assert!(l < r);
        let jump = (l + r - pos) % r;
        out.extend(std::iter::repeat_n(B, jump));
        out.push(C);
        pos = l;
    }
    Witness::from_letters0(out)
}

/// The first diagonal word of `v` under the second embedding:
/// `a_1^{i_1} a_2^{i_2} … a_{k+1}^{i_{k+1}}` with cyclic letter indexing.
pub fn first_diagonal_word(v: &Witness, r: usize) -> Witness {
    let exps = bc_factorize(v);
    let mut out = Vec::new();
    for (m, &e) in exps.iter().enumerate() {
        out.extend(std::iter::repeat_n(m % r, e));
    }
    Witness::from_letters0(out)
}

/// First embedding: `μ̂(b)` stacks `μ(a_1)…μ(a_r)` in the first block
/// column, `μ̂(c)` is the nilpotent block shift with `I_{(r-1)n}` in the
/// upper right.
pub fn first_embedding<S: Semiring>(mu: &Morphism<S>) -> Morphism<S> {
    let (r, n) = (mu.r(), mu.n());
    let sr = mu.semiring().clone();
    let mut gb = Mat::zeros(sr.clone(), r * n, r * n);
    for (i, g) in mu.generators().iter().enumerate() {
        gb.paste(i * n, 0, g);
    }
    let mut gc = Mat::zeros(sr.clone(), r * n, r * n);
    for i in 0..r.saturating_sub(1) {
        gc.paste(i * n, (i + 1) * n, &Mat::identity(sr.clone(), n));
    }
    Morphism::new(vec![gb, gc]).expect("square generators of equal dimension")
}

/// Second embedding: `emb(b)` is the cyclic block permutation, `emb(c)` is
/// `diag(μ(a_1), …, μ(a_r))`.
pub fn second_embedding<S: Semiring>(mu: &Morphism<S>) -> Morphism<S> {
    let (r, n) = (mu.r(), mu.n());
    let sr = mu.semiring().clone();
    let mut gb = Mat::zeros(sr.clone(), r * n, r * n);
    let id = Mat::identity(sr.clone(), n);
    for i in 0..r {
        gb.paste(i * n, ((i + 1) % r) * n, &id);
    }
    let gc = Mat::block_diag(mu.generators()).expect("generators are square");
    Morphism::new(vec![gb, gc]).expect("square generators of equal dimension")
}

/// Evaluates the second embedding of `v` through the semidirect-product
/// formula: `diag(μ(a_1^{i_1}…), …, μ(a_r^{i_1}…)) · emb(b)^k`, with cyclic
/// letter indexing. Must agree with applying [`second_embedding`] directly.
pub fn emb_block_formula<S: Semiring>(
    mu: &Morphism<S>,
    v: &Witness,
) -> Result<Mat<S>, AlgebraError> {
    let (r, _) = (mu.r(), mu.n());
    let exps = bc_factorize(v);
    let k = exps.len() - 1;
    let mut blocks = Vec::with_capacity(r);
    for l in 0..r {
        let mut word = Vec::new();
        for (m, &e) in exps.iter().enumerate() {
            word.extend(std::iter::repeat_n((l + m) % r, e));
        }
        blocks.push(mu.apply(&Witness::from_letters0(word))?);
    }
    let diag = Mat::block_diag(&blocks)?;
    let emb = second_embedding(mu);
    let bk = emb.apply(&Witness::from_letters0(vec![B; k]))?;
    diag.mul(&bk)
}

/// The closed form of `μ̂∘δ(a_{i_1}…a_{i_k})`: the first block column holds
/// `μ(a_{i_1}a_{i_2}…a_{i_k}), μ(a_{i_1+1}a_{i_2}…a_{i_k}), …,
/// μ(a_r a_{i_2}…a_{i_k})` and the last `(i_1-1)n` rows are zero.
pub fn first_embedding_formula<S: Semiring>(
    mu: &Morphism<S>,
    w: &Witness,
) -> Result<Mat<S>, AlgebraError> {
    let (r, n) = (mu.r(), mu.n());
    if w.is_empty() {
        return Ok(Mat::identity(mu.semiring().clone(), r * n));
    }
    let letters = w.letters0();
    let i1 = letters[0];
    let rest = Witness::from_letters0(letters[1..].to_vec());
    let mut out = Mat::zeros(mu.semiring().clone(), r * n, r * n);
    for (row, first) in (i1..r).enumerate() {
        let word = Witness::from_letters0(vec![first]).concat(&rest);
        out.paste(row * n, 0, &mu.apply(&word)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{SemiringId, Value};

    fn w(letters: &[usize]) -> Witness {
        Witness::from_letters0(letters.to_vec())
    }

    #[test]
    fn delta_examples() {
        // r=3: a2 a1 a3 -> c b b c c b
        assert_eq!(delta_encode(&w(&[1, 0, 2]), 3), w(&[C, B, B, C, C, B]));
        assert_eq!(delta_encode(&Witness::empty(), 3), Witness::empty());
        assert_eq!(delta_encode(&w(&[0, 0]), 2), w(&[B, B]));
    }

    #[test]
    fn delta_decode_examples() {
        assert_eq!(delta_decode(&w(&[B, C, B]), 2), Some(w(&[0, 1])));
        assert_eq!(delta_decode(&w(&[C, C]), 2), None); // trailing c's
        assert_eq!(delta_decode(&w(&[C, C, B]), 2), None); // run of length 2 = r
        assert_eq!(delta_decode(&Witness::empty(), 2), Some(Witness::empty()));
    }

    #[test]
    fn delta_round_trip_exhaustive() {
        for r in 1..=4usize {
            for u in crate::witness::all_words(r, 4) {
                assert_eq!(delta_decode(&delta_encode(&u, r), r), Some(u));
            }
        }
    }

    #[test]
    fn factorize_examples() {
        // c c b c b c -> (2,1,1), k=2
        assert_eq!(bc_factorize(&w(&[C, C, B, C, B, C])), vec![2, 1, 1]);
        assert_eq!(bc_factorize(&Witness::empty()), vec![0]);
        assert_eq!(bc_factorize(&w(&[B, B])), vec![0, 0, 0]);
    }

    #[test]
    fn rotation_encode_first_diagonal() {
        // The first diagonal word of the rotation encoding is the input.
        for r in 1..=3usize {
            let words: Vec<Vec<usize>> = match r {
                1 => vec![vec![], vec![0], vec![0, 0, 0]],
                2 => vec![vec![0, 1], vec![1, 1, 0], vec![1]],
                _ => vec![vec![2, 0, 1], vec![0, 2, 2, 1], vec![2]],
            };
            for letters in words {
                let word = w(&letters);
                let v = rotation_encode(&word, r);
                assert_eq!(first_diagonal_word(&v, r), word);
            }
        }
    }

    fn small_morphism(r: usize, n: usize) -> Morphism<SemiringId> {
        let gens = (0..r)
            .map(|i| {
                Mat::from_fn(SemiringId::Nmin, n, n, |a, b| {
                    Value::int(((i + a + 2 * b) % 3) as i64)
                })
            })
            .collect();
        Morphism::new(gens).unwrap()
    }

    #[test]
    fn first_embedding_small_case() {
        // r=2, n=1: gens (x), (y): b stacks them, c is the shift.
        let mu = small_morphism(2, 1);
        let emb = first_embedding(&mu);
        let gb = emb.generator(B);
        let z = SemiringId::Nmin.zero();
        assert_eq!(gb.get(0, 0), mu.generator(0).get(0, 0));
        assert_eq!(gb.get(1, 0), mu.generator(1).get(0, 0));
        assert_eq!(gb.get(0, 1), &z);
        let gc = emb.generator(C);
        assert_eq!(gc.get(0, 1), &SemiringId::Nmin.one());
        assert_eq!(gc.get(0, 0), &z);
        assert_eq!(gc.get(1, 0), &z);
        assert_eq!(gc.get(1, 1), &z);
    }

    #[test]
    fn first_embedding_shift_nilpotent() {
        for (r, n) in [(1, 2), (2, 1), (3, 2)] {
            let mu = small_morphism(r, n);
            let emb = first_embedding(&mu);
            let cr = emb.apply(&w(&vec![C; r])).unwrap();
            assert!(cr.is_zero());
        }
    }

    #[test]
    fn first_embedding_formula_holds() {
        for (r, n) in [(1, 1), (2, 2), (3, 1)] {
            let mu = small_morphism(r, n);
            let emb = first_embedding(&mu);
            for u in crate::witness::all_words(r, 3) {
                let direct = emb.apply(&delta_encode(&u, r)).unwrap();
                let formula = first_embedding_formula(&mu, &u).unwrap();
                assert_eq!(direct, formula, "w = {u}");
            }
        }
    }

    #[test]
    fn second_embedding_small_case() {
        let mu = small_morphism(2, 1);
        let emb = second_embedding(&mu);
        let gb = emb.generator(B);
        let one = SemiringId::Nmin.one();
        assert_eq!(gb.get(0, 1), &one);
        assert_eq!(gb.get(1, 0), &one);
        let gc = emb.generator(C);
        assert_eq!(gc.get(0, 0), mu.generator(0).get(0, 0));
        assert_eq!(gc.get(1, 1), mu.generator(1).get(0, 0));
    }

    #[test]
    fn second_embedding_b_power_is_identity() {
        for (r, n) in [(1, 1), (2, 2), (3, 1)] {
            let mu = small_morphism(r, n);
            let emb = second_embedding(&mu);
            assert!(emb.apply(&w(&vec![B; r])).unwrap().is_identity());
        }
    }

    #[test]
    fn block_formula_matches_direct_product() {
        for (r, n) in [(1, 1), (2, 1), (3, 2)] {
            let mu = small_morphism(r, n);
            let emb = second_embedding(&mu);
            for u in crate::witness::all_words(2, 6) {
                assert_eq!(
                    emb_block_formula(&mu, &u).unwrap(),
                    emb.apply(&u).unwrap(),
                    "v = {u}"
                );
            }
        }
    }
}
