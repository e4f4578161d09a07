//! Encoding of Modified Post Correspondence instances as integer
//! vector-mortality instances, and decoding of witnesses back into
//! correspondence solutions.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::instance::{Instance, Payload, WordMode};
use crate::matrix::{Mat, Morphism};
use crate::value::{SemiringId, Value};
use crate::witness::Witness;

/// A word over the digit alphabet `{1, …, nΣ}`.
pub type DigitWord = Vec<u32>;

/// A Modified Post Correspondence instance: a solution is an index sequence
/// `i_2…i_k` with `u_1 u_{i_2} ⋯ u_{i_k} = v_1 v_{i_2} ⋯ v_{i_k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MpcpInstance {
    alphabet: u32,
    base: u32,
    pairs: Vec<(DigitWord, DigitWord)>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MpcpError {
    #[error("digit {digit} outside 1..={alphabet}")]
    BadDigit { digit: u32, alphabet: u32 },
    #[error("base {base} must exceed the alphabet size {alphabet}")]
    BadBase { base: u32, alphabet: u32 },
    #[error("an instance needs at least one pair")]
    NoPairs,
    #[error("witness shape mismatch: {0}")]
    WitnessShape(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl MpcpInstance {
    /// `base` defaults to `alphabet + 1` when `None`.
    pub fn new(
        alphabet: u32,
        base: Option<u32>,
        pairs: Vec<(DigitWord, DigitWord)>,
    ) -> Result<MpcpInstance, MpcpError> {
        if alphabet == 0 {
            return Err(MpcpError::BadDigit { digit: 0, alphabet });
        }
        if pairs.is_empty() {
            return Err(MpcpError::NoPairs);
        }
        let base = base.unwrap_or(alphabet + 1);
        if base <= alphabet {
            return Err(MpcpError::BadBase { base, alphabet });
        }
        for (u, v) in &pairs {
            for &d in u.iter().chain(v) {
                if d == 0 || d > alphabet {
                    return Err(MpcpError::BadDigit { digit: d, alphabet });
                }
            }
        }
        Ok(MpcpInstance { alphabet, base, pairs })
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn pairs(&self) -> &[(DigitWord, DigitWord)] {
        &self.pairs
    }

    /// Reads the `mpcp` text format: an `mpcp` header, `alphabet <n>`,
    /// optional `base <b>`, and one `pair <u> <v>` line per pair (`_` is
    /// the empty word).
    pub fn parse(text: &str) -> Result<MpcpInstance, MpcpError> {
        let mut alphabet: Option<u32> = None;
        let mut base: Option<u32> = None;
        let mut pairs = Vec::new();
        let mut saw_header = false;
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = match raw.find('#') {
                Some(p) => &raw[..p],
                None => raw,
            };
            let mut toks = body.split_whitespace();
            let Some(head) = toks.next() else { continue };
            let fail = |msg: String| Err(MpcpError::Parse { line, msg });
            match head {
                "mpcp" => saw_header = true,
                "alphabet" => match toks.next().and_then(|t| t.parse().ok()) {
                    Some(n) => alphabet = Some(n),
                    None => return fail("expected `alphabet <n>`".into()),
                },
                "base" => match toks.next().and_then(|t| t.parse().ok()) {
                    Some(b) => base = Some(b),
                    None => return fail("expected `base <b>`".into()),
                },
                "pair" => {
                    let (Some(u), Some(v)) = (toks.next(), toks.next()) else {
                        return fail("expected `pair <u> <v>`".into());
                    };
                    pairs.push((parse_word(u, line)?, parse_word(v, line)?));
                }
                other => return fail(format!("unexpected token `{other}`")),
            }
            if toks.next().is_some() {
                return fail("trailing tokens".into());
            }
        }
        if !saw_header {
            return Err(MpcpError::Parse { line: 1, msg: "missing `mpcp` header".into() });
        }
        let alphabet = alphabet.ok_or(MpcpError::Parse {
            line: 1,
            msg: "missing `alphabet`".into(),
        })?;
        MpcpInstance::new(alphabet, base, pairs)
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("mpcp\n");
        out.push_str(&format!("alphabet {}\n", self.alphabet));
        out.push_str(&format!("base {}\n", self.base));
        for (u, v) in &self.pairs {
            out.push_str(&format!("pair {} {}\n", word_text(u), word_text(v)));
        }
        out
    }
}

fn parse_word(text: &str, line: usize) -> Result<DigitWord, MpcpError> {
    if text == "_" {
        return Ok(Vec::new());
    }
    text.chars()
        .map(|c| {
            c.to_digit(10).filter(|&d| d >= 1).ok_or(MpcpError::Parse {
                line,
                msg: format!("invalid digit `{c}` in word `{text}`"),
            })
        })
        .collect()
}

fn word_text(w: &DigitWord) -> String {
    if w.is_empty() {
        "_".into()
    } else {
        w.iter().map(|d| d.to_string()).collect()
    }
}

/// The value of a digit word in base `b`; the empty word has value 0.
pub fn base_value(w: &[u32], b: u32) -> Result<BigInt, MpcpError> {
    let mut acc = BigInt::zero();
    for &d in w {
        if d >= b {
            return Err(MpcpError::BadDigit { digit: d, alphabet: b - 1 });
        }
        acc = acc * b + d;
    }
    Ok(acc)
}

/// Paterson's pair matrix: diagonal `b^{|u|}, b^{|v|}, 1` with bottom row
/// `[u]_b, [v]_b, 1`; right multiplication appends `u` and `v` to the
/// tracked concatenations.
pub fn paterson_matrix(u: &[u32], v: &[u32], b: u32) -> Result<Mat<SemiringId>, MpcpError> {
    let pow = |len: usize| BigInt::from(b).pow(len as u32);
    let entries = vec![
        Value::Fin(pow(u.len())),
        Value::int(0),
        Value::int(0),
        Value::int(0),
        Value::Fin(pow(v.len())),
        Value::int(0),
        Value::Fin(base_value(u, b)?),
        Value::Fin(base_value(v, b)?),
        Value::int(1),
    ];
    Ok(Mat::new(SemiringId::Zring, 3, 3, entries).expect("3x3 integer matrix"))
}

/// The difference matrix `T`: applied after the pair matrices it exposes
/// `[u]_b - [v]_b` and annihilates the tail coordinate.
pub fn difference_matrix() -> Mat<SemiringId> {
    let e = |v: i64| Value::int(v);
    Mat::new(
        SemiringId::Zring,
        3,
        3,
        vec![e(1), e(-1), e(0), e(-1), e(1), e(0), e(0), e(0), e(0)],
    )
    .expect("3x3 integer matrix")
}

/// Encodes an MPCP instance as a vector-mortality instance over the
/// integers: `r+1` letters, dimension 3, start `([u_1]_b, [v_1]_b, 1)`,
/// target the zero vector.
pub fn encode_mpcp(m: &MpcpInstance) -> Result<Instance, MpcpError> {
    let b = m.base;
    let mut gens = Vec::with_capacity(m.pairs.len() + 1);
    for (u, v) in &m.pairs {
        gens.push(paterson_matrix(u, v, b)?);
    }
    gens.push(difference_matrix());
    let (u1, v1) = &m.pairs[0];
    let alpha = Mat::new(
        SemiringId::Zring,
        1,
        3,
        vec![
            Value::Fin(base_value(u1, b)?),
            Value::Fin(base_value(v1, b)?),
            Value::int(1),
        ],
    )
    .expect("1x3 start vector");
    let eta = Mat::zeros(SemiringId::Zring, 1, 3);
    Ok(Instance::new(
        SemiringId::Zring,
        WordMode::Plus,
        Payload::Vector {
            morphism: Morphism::new(gens).expect("nonempty generator list"),
            alpha,
            eta,
        },
    )
    .expect("well-shaped encoding"))
}

/// Decodes a satisfying witness of the encoded instance back into an MPCP
/// solution `i_2…i_k` (1-based pair indices), verifying the concatenation
/// equality. Witnesses that deviate from the shape `Σ_r^* a_{r+1}` are
/// rejected with a diagnostic.
pub fn decode_mpcp_witness(w: &Witness, m: &MpcpInstance) -> Result<Vec<usize>, MpcpError> {
    let r = m.pairs.len();
    let letters = w.letters0();
    let Some((&last, body)) = letters.split_last() else {
        return Err(MpcpError::WitnessShape("empty witness".into()));
    };
    if last != r {
        return Err(MpcpError::WitnessShape(format!(
            "witness must end with the difference letter {}",
            r + 1
        )));
    }
    if let Some(p) = body.iter().position(|&l| l >= r) {
        return Err(MpcpError::WitnessShape(format!(
            "difference letter at position {} before the end",
            p + 1
        )));
    }
    let mut u = m.pairs[0].0.clone();
    let mut v = m.pairs[0].1.clone();
    for &l in body {
        u.extend_from_slice(&m.pairs[l].0);
        v.extend_from_slice(&m.pairs[l].1);
    }
    if u != v {
        return Err(MpcpError::WitnessShape(format!(
            "concatenations differ: {} vs {}",
            word_text(&u),
            word_text(&v)
        )));
    }
    debug_assert_eq!(base_value(&u, m.base), base_value(&v, m.base));
    Ok(body.iter().map(|&l| l + 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_value_examples() {
        assert_eq!(base_value(&[], 2).unwrap(), BigInt::from(0));
        assert_eq!(base_value(&[1], 2).unwrap(), BigInt::from(1));
        assert_eq!(base_value(&[1, 1, 1], 2).unwrap(), BigInt::from(7));
        assert!(base_value(&[2], 2).is_err());
    }

    #[test]
    fn pair_matrix_example() {
        // W("1","11") at b=2 = [[2,0,0],[0,4,0],[1,3,1]]
        let w = paterson_matrix(&[1], &[1, 1], 2).unwrap();
        let expect: Vec<i64> = vec![2, 0, 0, 0, 4, 0, 1, 3, 1];
        let got: Vec<Value> = w.entries().to_vec();
        assert_eq!(got, expect.into_iter().map(Value::int).collect::<Vec<_>>());
        assert!(paterson_matrix(&[], &[], 2).unwrap().is_identity());
    }

    #[test]
    fn concatenation_identity() {
        // ([u']_b, [v']_b, 1) · W(u,v) = ([u'u]_b, [v'v]_b, 1)
        let b = 3;
        let words: Vec<DigitWord> = vec![vec![], vec![1], vec![2, 1], vec![1, 2, 2]];
        for u_pre in &words {
            for v_pre in &words {
                for u in &words {
                    for v in &words {
                        let row = Mat::new(
                            SemiringId::Zring,
                            1,
                            3,
                            vec![
                                Value::Fin(base_value(u_pre, b).unwrap()),
                                Value::Fin(base_value(v_pre, b).unwrap()),
                                Value::int(1),
                            ],
                        )
                        .unwrap();
                        let prod = row.mul(&paterson_matrix(u, v, b).unwrap()).unwrap();
                        let mut uu = u_pre.clone();
                        uu.extend_from_slice(u);
                        let mut vv = v_pre.clone();
                        vv.extend_from_slice(v);
                        assert_eq!(prod.get(0, 0), &Value::Fin(base_value(&uu, b).unwrap()));
                        assert_eq!(prod.get(0, 1), &Value::Fin(base_value(&vv, b).unwrap()));
                        assert_eq!(prod.get(0, 2), &Value::int(1));
                    }
                }
            }
        }
    }

    #[test]
    fn t_algebra() {
        let t = difference_matrix();
        // T² = 2T
        let t2 = t.mul(&t).unwrap();
        for (x, y) in t2.entries().iter().zip(t.entries()) {
            let (Value::Fin(a), Value::Fin(b)) = (x, y) else { panic!() };
            assert_eq!(a, &(b * 2));
        }
        // T · W(u,v) · T = (b^{|u|} + b^{|v|}) T
        let w = paterson_matrix(&[1, 2], &[2], 3).unwrap();
        let twt = t.mul(&w).unwrap().mul(&t).unwrap();
        let scale = BigInt::from(9 + 3);
        for (x, y) in twt.entries().iter().zip(t.entries()) {
            let (Value::Fin(a), Value::Fin(b)) = (x, y) else { panic!() };
            assert_eq!(a, &(b * &scale));
        }
    }

    #[test]
    fn encode_trivial_instance() {
        // Single pair ("1","1"): the word a_2 (the difference letter) kills α.
        let m = MpcpInstance::new(1, Some(2), vec![(vec![1], vec![1])]).unwrap();
        let i = encode_mpcp(&m).unwrap();
        assert_eq!(i.letters(), 2);
        assert_eq!(i.dim(), 3);
        let w = Witness::from_letters0(vec![1]);
        assert!(i.evaluate(&w).unwrap());
        assert_eq!(decode_mpcp_witness(&w, &m).unwrap(), Vec::<usize>::new());
    }

    #[test]
    fn encode_two_pair_instance() {
        // Pairs ("1","111"), ("111","1"): a_2 a_3 solves.
        let m = MpcpInstance::new(1, Some(2), vec![(vec![1], vec![1, 1, 1]), (vec![1, 1, 1], vec![1])])
            .unwrap();
        let i = encode_mpcp(&m).unwrap();
        let w = Witness::from_letters0(vec![1, 2]);
        assert!(i.evaluate(&w).unwrap());
        assert_eq!(decode_mpcp_witness(&w, &m).unwrap(), vec![2]);
        // a_3 a_3 satisfies neither the shape nor the instance equation: the
        // double difference letter is rejected.
        let bad = Witness::from_letters0(vec![2, 2]);
        assert!(decode_mpcp_witness(&bad, &m).is_err());
    }

    #[test]
    fn unsolvable_instance_stays_unknown() {
        // ("1","11") can never balance; bounded search exhausts its budget.
        let m = MpcpInstance::new(1, Some(2), vec![(vec![1], vec![1, 1])]).unwrap();
        let i = encode_mpcp(&m).unwrap();
        assert_eq!(
            crate::oracle::oracle_search(&i, 8),
            crate::instance::Decision::Unknown(8)
        );
    }

    #[test]
    fn format_round_trip() {
        let text = "mpcp\nalphabet 2\nbase 3\npair 12 1\npair _ 2\n";
        let m = MpcpInstance::parse(text).unwrap();
        assert_eq!(m.pairs().len(), 2);
        assert_eq!(m.pairs()[1].0, Vec::<u32>::new());
        assert_eq!(MpcpInstance::parse(&m.serialize()).unwrap(), m);
    }

    #[test]
    fn default_base() {
        let m = MpcpInstance::new(3, None, vec![(vec![1], vec![2])]).unwrap();
        assert_eq!(m.base(), 4);
        assert!(MpcpInstance::new(3, Some(3), vec![(vec![1], vec![2])]).is_err());
    }
}
