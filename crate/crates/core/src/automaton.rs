//! Trim unambiguous automata, their matrix representations, and the finite
//! reach sets that make language membership a matrix test.

use std::collections::{BTreeSet, VecDeque};

use crate::error::AlgebraError;
use crate::matrix::{Mat, Morphism};
use crate::semiring::Semiring;
use crate::witness::Witness;

/// The pair `(M_A, F_A)` of matrix and vector reach sets.
pub type ReachSets<S> = (BTreeSet<Mat<S>>, BTreeSet<Mat<S>>);

/// A nondeterministic finite automaton over the alphabet `a_1..a_k`.
#[derive(Debug, Clone)]
pub struct Automaton {
    states: usize,
    alphabet: usize,
    /// Per-letter edge relation.
    edges: Vec<BTreeSet<(usize, usize)>>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
}

impl Automaton {
    pub fn new(
        states: usize,
        alphabet: usize,
        edges: Vec<BTreeSet<(usize, usize)>>,
        initial: BTreeSet<usize>,
        accepting: BTreeSet<usize>,
    ) -> Result<Self, AlgebraError> {
        if edges.len() != alphabet {
            return Err(AlgebraError::ShapeMismatch(
                "one edge set per letter required".into(),
            ));
        }
        for set in &edges {
            for &(s, d) in set {
                if s >= states || d >= states {
                    return Err(AlgebraError::ShapeMismatch(format!(
                        "edge ({s},{d}) outside 0..{states}"
                    )));
                }
            }
        }
        if initial.iter().chain(&accepting).any(|&s| s >= states) {
            return Err(AlgebraError::ShapeMismatch("state index out of range".into()));
        }
        Ok(Automaton {
            states,
            alphabet,
            edges,
            initial,
            accepting,
        })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    /// Runs the automaton directly on a word.
    pub fn accepts(&self, w: &Witness) -> bool {
        let mut current = self.initial.clone();
        for &l in w.letters0() {
            if l >= self.alphabet {
                return false;
            }
            let mut next = BTreeSet::new();
            for &(s, d) in &self.edges[l] {
                if current.contains(&s) {
                    next.insert(d);
                }
            }
            current = next;
        }
        current.iter().any(|s| self.accepting.contains(s))
    }

    /// Every state lies on a path from an initial to an accepting state.
    pub fn is_trim(&self) -> bool {
        let fwd = self.reachable(&self.initial, false);
        let bwd = self.reachable(&self.accepting, true);
        (0..self.states).all(|s| fwd.contains(&s) && bwd.contains(&s))
    }

    fn reachable(&self, from: &BTreeSet<usize>, reversed: bool) -> BTreeSet<usize> {
        let mut seen = from.clone();
        let mut queue: VecDeque<usize> = from.iter().copied().collect();
        while let Some(s) = queue.pop_front() {
            for set in &self.edges {
                for &(a, b) in set {
                    let (src, dst) = if reversed { (b, a) } else { (a, b) };
                    if src == s && seen.insert(dst) {
                        queue.push_back(dst);
                    }
                }
            }
        }
        seen
    }

    /// At most one accepting path per word, checked with the product
    /// construction: no pair of distinct states may be simultaneously
    /// reachable from initial pairs and co-reachable to accepting pairs.
    pub fn is_unambiguous(&self) -> bool {
        let pair = |s: usize, t: usize| s * self.states + t;
        let mut fwd = vec![false; self.states * self.states];
        let mut queue = VecDeque::new();
        for &i in &self.initial {
            for &j in &self.initial {
                if !fwd[pair(i, j)] {
                    fwd[pair(i, j)] = true;
                    queue.push_back((i, j));
                }
            }
        }
        while let Some((s, t)) = queue.pop_front() {
            for set in &self.edges {
                for &(a, b) in set {
                    if a != s {
                        continue;
                    }
                    for &(c, d) in set {
                        if c == t && !fwd[pair(b, d)] {
                            fwd[pair(b, d)] = true;
                            queue.push_back((b, d));
                        }
                    }
                }
            }
        }
        let mut bwd = vec![false; self.states * self.states];
        let mut queue = VecDeque::new();
        for &i in &self.accepting {
            for &j in &self.accepting {
                if !bwd[pair(i, j)] {
                    bwd[pair(i, j)] = true;
                    queue.push_back((i, j));
                }
            }
        }
        while let Some((s, t)) = queue.pop_front() {
            for set in &self.edges {
                for &(a, b) in set {
                    if b != s {
                        continue;
                    }
                    for &(c, d) in set {
                        if d == t && !bwd[pair(a, c)] {
                            bwd[pair(a, c)] = true;
                            queue.push_back((a, c));
                        }
                    }
                }
            }
        }
        for s in 0..self.states {
            for t in 0..self.states {
                if s != t && fwd[pair(s, t)] && bwd[pair(s, t)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if !self.is_trim() {
            return Err(AlgebraError::AmbiguityViolation("automaton is not trim".into()));
        }
        if !self.is_unambiguous() {
            return Err(AlgebraError::AmbiguityViolation(
                "automaton is ambiguous".into(),
            ));
        }
        Ok(())
    }

    /// The matrix representation `(ν, α_A, β_A)` over a semiring:
    /// `ν(x)_{ij} = 1` exactly when there is an `x`-labeled edge `i → j`.
    pub fn matrices<S: Semiring>(&self, sr: &S) -> (Morphism<S>, Mat<S>, Mat<S>) {
        let one = sr.one();
        let gens = (0..self.alphabet)
            .map(|l| {
                let mut g = Mat::zeros(sr.clone(), self.states, self.states);
                for &(s, d) in &self.edges[l] {
                    g.set(s, d, one.clone());
                }
                g
            })
            .collect();
        let mut alpha = Mat::zeros(sr.clone(), 1, self.states);
        for &s in &self.initial {
            alpha.set(0, s, one.clone());
        }
        let mut beta = Mat::zeros(sr.clone(), self.states, 1);
        for &s in &self.accepting {
            beta.set(s, 0, one.clone());
        }
        (
            Morphism::new(gens).expect("nonempty alphabet"),
            alpha,
            beta,
        )
    }

    /// Computes `M_A` (images `ν(v)` with a one in an initial×accepting
    /// position) and `F_A` (the analog for `α_A ν(v)`), by BFS over the
    /// finite set of zero/one matrices.
    ///
    /// Requires a trim unambiguous automaton; meeting an entry outside
    /// `{0, 1}` during the BFS reports an ambiguity violation.
    pub fn reach_sets<S: Semiring>(&self, sr: &S) -> Result<ReachSets<S>, AlgebraError> {
        let (nu, alpha, _) = self.matrices(sr);
        let all = closure_zero_one(Mat::identity(sr.clone(), self.states), &nu, sr)?;
        let m_a = all
            .iter()
            .filter(|m| {
                self.initial.iter().any(|&i| {
                    self.accepting
                        .iter()
                        .any(|&f| sr.is_one(m.get(i, f)))
                })
            })
            .cloned()
            .collect();
        let vecs = closure_zero_one(alpha, &nu, sr)?;
        let f_a = vecs
            .iter()
            .filter(|v| self.accepting.iter().any(|&f| sr.is_one(v.get(0, f))))
            .cloned()
            .collect();
        Ok((m_a, f_a))
    }
}

fn closure_zero_one<S: Semiring>(
    start: Mat<S>,
    nu: &Morphism<S>,
    sr: &S,
) -> Result<BTreeSet<Mat<S>>, AlgebraError> {
    let check = |m: &Mat<S>| -> Result<(), AlgebraError> {
        for e in m.entries() {
            if !sr.is_zero(e) && !sr.is_one(e) {
                return Err(AlgebraError::AmbiguityViolation(format!(
                    "entry {} outside {{0, 1}} during reach-set computation",
                    sr.render(e)
                )));
            }
        }
        Ok(())
    };
    check(&start)?;
    let mut seen = BTreeSet::new();
    seen.insert(start.clone());
    let mut queue = VecDeque::new();
    queue.push_back(start);
    while let Some(m) = queue.pop_front() {
        for g in nu.generators() {
            let next = m.mul(g)?;
            check(&next)?;
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// Two-state automaton recognizing `a_{r+1} Σ_r^*` over `r+1` letters.
pub fn prefix_gadget(r: usize) -> Automaton {
    let mut edges = vec![BTreeSet::new(); r + 1];
    for set in edges.iter_mut().take(r) {
        set.insert((1, 1));
    }
    edges[r].insert((0, 1));
    Automaton::new(2, r + 1, edges, BTreeSet::from([0]), BTreeSet::from([1]))
        .expect("well-formed gadget")
}

/// Two-state automaton recognizing `Σ_r^* a_{r+1}` over `r+1` letters.
pub fn suffix_gadget(r: usize) -> Automaton {
    let mut edges = vec![BTreeSet::new(); r + 1];
    for set in edges.iter_mut().take(r) {
        set.insert((0, 0));
    }
    edges[r].insert((0, 1));
    Automaton::new(2, r + 1, edges, BTreeSet::from([0]), BTreeSet::from([1]))
        .expect("well-formed gadget")
}

/// Three-state automaton recognizing `a_{r+1} Σ_r^* a_{r+1}` over `r+1`
/// letters.
pub fn bracket_gadget(r: usize) -> Automaton {
    let mut edges = vec![BTreeSet::new(); r + 1];
    for set in edges.iter_mut().take(r) {
        set.insert((1, 1));
    }
    edges[r].insert((0, 1));
    edges[r].insert((1, 2));
    Automaton::new(3, r + 1, edges, BTreeSet::from([0]), BTreeSet::from([2]))
        .expect("well-formed gadget")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{SemiringId, Value};
    use crate::witness::{all_words, Witness};

    #[test]
    fn prefix_gadget_matrices() {
        let a = prefix_gadget(2);
        a.validate().unwrap();
        let sr = SemiringId::Nmin;
        let (nu, alpha, beta) = a.matrices(&sr);
        let z = sr.zero();
        let o = sr.one();
        for i in 0..2 {
            assert_eq!(nu.generator(i).entries(), &[z.clone(), z.clone(), z.clone(), o.clone()]);
        }
        assert_eq!(nu.generator(2).entries(), &[z.clone(), o.clone(), z.clone(), z.clone()]);
        assert_eq!(alpha.entries(), &[o.clone(), z.clone()]);
        assert_eq!(beta.entries(), &[z.clone(), o.clone()]);
        assert!(nu.apply(&Witness::empty()).unwrap().is_identity());
    }

    #[test]
    fn prefix_gadget_reach_set() {
        let a = prefix_gadget(2);
        let sr = SemiringId::Nmin;
        let (m_a, f_a) = a.reach_sets(&sr).unwrap();
        // M_A = { [[0,1],[0,0]] } in semiring notation.
        let expected = Mat::new(
            sr,
            2,
            2,
            vec![sr.zero(), sr.one(), sr.zero(), sr.zero()],
        )
        .unwrap();
        assert_eq!(m_a.len(), 1);
        assert!(m_a.contains(&expected));
        assert_eq!(f_a.len(), 1);
    }

    #[test]
    fn gadgets_are_trim_and_unambiguous() {
        for r in 1..=3 {
            prefix_gadget(r).validate().unwrap();
            suffix_gadget(r).validate().unwrap();
            bracket_gadget(r).validate().unwrap();
        }
    }

    #[test]
    fn membership_matches_matrix_test() {
        // w accepted  <=>  ν(w) ∈ M_A, exhaustively for short words.
        let sr = SemiringId::Nat;
        for a in [prefix_gadget(2), suffix_gadget(2), bracket_gadget(2)] {
            let (nu, _, _) = a.matrices(&sr);
            let (m_a, _) = a.reach_sets(&sr).unwrap();
            for w in all_words(3, 5) {
                let image = nu.apply(&w).unwrap();
                assert_eq!(a.accepts(&w), m_a.contains(&image), "word {w}");
            }
        }
    }

    #[test]
    fn bracket_language_spot_checks() {
        let a = bracket_gadget(1);
        assert!(a.accepts(&Witness::from_letters0(vec![1, 0, 1])));
        assert!(a.accepts(&Witness::from_letters0(vec![1, 1])));
        assert!(!a.accepts(&Witness::from_letters0(vec![1, 0])));
        assert!(!a.accepts(&Witness::from_letters0(vec![0, 1, 1])));
    }

    #[test]
    fn ambiguous_automaton_detected() {
        // Two parallel paths for the word "a": 0 -> 1 -> 3 and 0 -> 2 -> 3.
        let mut edges = vec![BTreeSet::new()];
        edges[0].extend([(0, 1), (0, 2), (1, 3), (2, 3)]);
        let a = Automaton::new(4, 1, edges, BTreeSet::from([0]), BTreeSet::from([3])).unwrap();
        assert!(a.is_trim());
        assert!(!a.is_unambiguous());
        let sr = SemiringId::Nat;
        assert!(a.reach_sets(&sr).is_err());
        let _ = Value::int(0);
    }
}
