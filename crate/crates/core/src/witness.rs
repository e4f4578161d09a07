//! Words over a generator alphabet, used as certificates for Yes answers.

use std::fmt;

use crate::error::AlgebraError;

/// A word over the alphabet `a_1..a_r`, stored as 0-based generator indices.
///
/// Displayed and parsed as space-separated 1-based letter indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness(Vec<usize>);

impl Witness {
    pub fn empty() -> Witness {
        Witness(Vec::new())
    }

    /// Builds a witness from 0-based generator indices.
    pub fn from_letters0(letters: Vec<usize>) -> Witness {
        Witness(letters)
    }

    /// Builds a witness from 1-based letter indices, checking the range.
    pub fn from_letters1(letters: &[usize], r: usize) -> Result<Witness, AlgebraError> {
        let mut out = Vec::with_capacity(letters.len());
        for &l in letters {
            if l == 0 || l > r {
                return Err(AlgebraError::LetterOutOfRange { letter: l, letters: r });
            }
            out.push(l - 1);
        }
        Ok(Witness(out))
    }

    pub fn letters0(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push0(&mut self, letter: usize) {
        self.0.push(letter);
    }

    pub fn concat(&self, other: &Witness) -> Witness {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Witness(v)
    }

    /// Parses "1 1 2" style space-separated 1-based letters; empty input is
    /// the empty word.
    pub fn parse(text: &str, r: usize) -> Result<Witness, AlgebraError> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let l: usize = tok
                .parse()
                .map_err(|_| AlgebraError::LetterOutOfRange { letter: 0, letters: r })?;
            letters.push(l);
        }
        Witness::from_letters1(&letters, r)
    }
}

/// All words over `r` letters of length at most `max_len`, in length order
/// and lexicographic order within a length.
pub fn all_words(r: usize, max_len: usize) -> Vec<Witness> {
    let mut out = vec![Witness::empty()];
    let mut level: Vec<Witness> = vec![Witness::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * r);
        for u in &level {
            for l in 0..r {
                let mut v = u.letters0().to_vec();
                v.push(l);
                next.push(Witness::from_letters0(v));
            }
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    out
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{}", l + 1)?;
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_is_one_based() {
        let w = Witness::from_letters0(vec![0, 0, 1]);
        assert_eq!(w.to_string(), "1 1 2");
    }

    #[test]
    fn parse_round_trip() {
        let w = Witness::parse("2 1 3", 3).unwrap();
        assert_eq!(w.letters0(), &[1, 0, 2]);
        assert_eq!(Witness::parse("", 2).unwrap(), Witness::empty());
        assert!(Witness::parse("0", 2).is_err());
        assert!(Witness::parse("3", 2).is_err());
    }
}
