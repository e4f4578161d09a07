//! Bounded exact enumeration: ground truth on small instances, and the
//! consistency harness that validates reduction bundles against it.

use std::collections::HashMap;
use std::collections::VecDeque;

use crate::bundle::{PushOutcome, ReductionBundle};
use crate::decide::{decide, DecideOpts};
use crate::error::AlgebraError;
use crate::instance::{Decision, Instance, Payload, VMat, WordMode};
use crate::witness::Witness;

/// BFS over words in length order (lexicographic within a length),
/// evaluating exactly in the source semiring. Memoization on exact states
/// is sound because reachability depends only on the current state.
pub fn oracle_search(i: &Instance, max_len: usize) -> Decision {
    oracle_search_opts(i, max_len, true)
}

pub fn oracle_search_opts(i: &Instance, max_len: usize, memoize: bool) -> Decision {
    match search(i, max_len, memoize) {
        Ok(d) => d,
        Err(e) => Decision::Unsupported(format!("oracle failure: {e}")),
    }
}

/// The exact state tracked per kind: the full matrix image for matrix and
/// corner problems, the row vector `αμ(w)` for vector and scalar problems.
fn start_state(i: &Instance) -> VMat {
    match &i.payload {
        Payload::Matrix { morphism, .. } | Payload::Corner { morphism, .. } => {
            crate::matrix::Mat::identity(i.semiring, morphism.n())
        }
        Payload::Vector { alpha, .. } | Payload::Scalar { alpha, .. } => alpha.clone(),
    }
}

fn state_hits(i: &Instance, state: &VMat) -> Result<bool, AlgebraError> {
    Ok(match &i.payload {
        Payload::Matrix { targets, .. } => targets.contains(state),
        Payload::Corner { gamma, .. } => state.get(0, i.dim() - 1) == gamma,
        Payload::Vector { eta, .. } => state == eta,
        Payload::Scalar { beta, gamma, .. } => state.mul(beta)?.get(0, 0) == gamma,
    })
}

fn search(i: &Instance, max_len: usize, memoize: bool) -> Result<Decision, AlgebraError> {
    let gens = i.morphism().generators();
    let root = start_state(i);
    if i.mode == WordMode::Star && state_hits(i, &root)? {
        return Ok(Decision::Yes(Witness::empty()));
    }
    // Arena of discovered states with parent links for witness recovery.
    let mut states: Vec<VMat> = vec![root.clone()];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None];
    let mut seen: HashMap<VMat, ()> = HashMap::new();
    seen.insert(root, ());
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    let word_of = |parents: &[Option<(usize, usize)>], mut at: usize| {
        let mut letters = Vec::new();
        while let Some((p, a)) = parents[at] {
            letters.push(a);
            at = p;
        }
        letters.reverse();
        Witness::from_letters0(letters)
    };
    for depth in 1..=max_len {
        let mut next = VecDeque::new();
        while let Some(idx) = frontier.pop_front() {
            for (a, g) in gens.iter().enumerate() {
                let m = states[idx].mul(g)?;
                if state_hits(i, &m)? {
                    let mut w = word_of(&parents, idx);
                    w.push0(a);
                    return Ok(Decision::Yes(w));
                }
                if !memoize || !seen.contains_key(&m) {
                    if memoize {
                        seen.insert(m.clone(), ());
                    }
                    states.push(m);
                    parents.push(Some((idx, a)));
                    next.push_back(states.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        if depth < max_len {
            frontier = next;
        }
    }
    Ok(Decision::Unknown(max_len))
}

/// All satisfying words of length at most `max_len`, in length-lex order,
/// evaluated incrementally (one product per extension).
pub fn enumerate_witnesses(i: &Instance, max_len: usize) -> Result<Vec<Witness>, AlgebraError> {
    let gens = i.morphism().generators();
    let mut out = Vec::new();
    let root = start_state(i);
    if i.mode == WordMode::Star && state_hits(i, &root)? {
        out.push(Witness::empty());
    }
    // Level-order expansion without deduplication: every word is visited.
    let mut level: Vec<(VMat, Witness)> = vec![(root, Witness::empty())];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(level.len() * gens.len());
        for (state, word) in &level {
            for (a, g) in gens.iter().enumerate() {
                let m = state.mul(g)?;
                let mut w = word.clone();
                w.push0(a);
                if state_hits(i, &m)? {
                    out.push(w.clone());
                }
                next.push((m, w));
            }
        }
        level = next;
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct ConsistencyFailure {
    pub stage: &'static str,
    pub witness: Witness,
    pub detail: String,
}

/// Outcome of [`reduction_consistency_check`]; failures carry the
/// offending witness.
#[derive(Debug, Clone, Default)]
pub struct ConsistencyReport {
    /// Some(true/false) when both sides were decidable.
    pub decide_agrees: Option<bool>,
    pub pushed: usize,
    pub pulled: usize,
    pub failures: Vec<ConsistencyFailure>,
}

impl ConsistencyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.decide_agrees != Some(false)
    }
}

/// Validates a bundle: (a) on separable semirings the decided answers
/// agree, (b) every oracle witness of the original pushes to a verified
/// sub-witness and back, (c) every sub-witness pulls to a verified original
/// witness.
pub fn reduction_consistency_check(
    i: &Instance,
    bundle: &ReductionBundle,
    max_len: usize,
) -> ConsistencyReport {
    let mut report = ConsistencyReport::default();
    let fail = |report: &mut ConsistencyReport, stage, witness: &Witness, detail: String| {
        report.failures.push(ConsistencyFailure {
            stage,
            witness: witness.clone(),
            detail,
        });
    };

    if i.semiring.is_separable() {
        let opts = DecideOpts::default();
        let original = decide(i, &opts);
        let folded = bundle.answer_with(|sub| decide(sub, &opts));
        match (&original, &folded) {
            (Decision::Yes(_), Decision::Yes(_)) | (Decision::No { .. }, Decision::No { .. }) => {
                report.decide_agrees = Some(true);
            }
            (Decision::Unsupported(_), _) | (_, Decision::Unsupported(_)) => {}
            _ => {
                report.decide_agrees = Some(false);
                fail(
                    &mut report,
                    "decide",
                    &Witness::empty(),
                    format!("original decides {original} but the bundle folds to {folded}"),
                );
            }
        }
        if let Decision::Yes(w) = &folded {
            match i.evaluate(w) {
                Ok(true) => {}
                Ok(false) => fail(
                    &mut report,
                    "decide",
                    w,
                    "bundle witness does not satisfy the original".into(),
                ),
                Err(e) => fail(&mut report, "decide", w, e.to_string()),
            }
        }
    }

    match enumerate_witnesses(i, max_len) {
        Err(e) => fail(&mut report, "push", &Witness::empty(), e.to_string()),
        Ok(witnesses) => {
            for w in witnesses {
                report.pushed += 1;
                match bundle.push(&w) {
                    Err(e) => fail(&mut report, "push", &w, e.to_string()),
                    Ok(PushOutcome::Immediate) => match &bundle.immediate {
                        Some(Decision::Yes(wi)) => match i.evaluate(wi) {
                            Ok(true) => {}
                            _ => fail(
                                &mut report,
                                "push",
                                &w,
                                "immediate decision does not satisfy the original".into(),
                            ),
                        },
                        _ => fail(
                            &mut report,
                            "push",
                            &w,
                            "push landed on a missing immediate decision".into(),
                        ),
                    },
                    Ok(PushOutcome::Sub { index, witness }) => {
                        match bundle.subs[index].evaluate(&witness) {
                            Ok(true) => {
                                // round trip: the pushed witness pulls back
                                // to a satisfying original witness
                                match bundle.pull(index, &witness) {
                                    Ok(back) => match i.evaluate(&back) {
                                        Ok(true) => {}
                                        _ => fail(
                                            &mut report,
                                            "push",
                                            &w,
                                            format!("round trip through sub {index} lost satisfaction"),
                                        ),
                                    },
                                    Err(e) => fail(&mut report, "push", &w, e.to_string()),
                                }
                            }
                            Ok(false) => fail(
                                &mut report,
                                "push",
                                &w,
                                format!("pushed witness {witness} fails sub-instance {index}"),
                            ),
                            Err(e) => fail(&mut report, "push", &w, e.to_string()),
                        }
                    }
                }
            }
        }
    }

    for (index, sub) in bundle.subs.iter().enumerate() {
        match enumerate_witnesses(sub, max_len) {
            Err(e) => fail(&mut report, "pull", &Witness::empty(), e.to_string()),
            Ok(witnesses) => {
                for v in witnesses {
                    report.pulled += 1;
                    match bundle.pull(index, &v) {
                        Err(e) => fail(&mut report, "pull", &v, format!("sub {index}: {e}")),
                        Ok(w) => match i.evaluate(&w) {
                            Ok(true) => {}
                            Ok(false) => fail(
                                &mut report,
                                "pull",
                                &v,
                                format!("pulled witness {w} fails the original"),
                            ),
                            Err(e) => fail(&mut report, "pull", &v, e.to_string()),
                        },
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    const NMIN_SCALAR_7: &str = "\
semiring nmin
problem scalar
letters 2
dim 1
gen 1
2
gen 2
3
alpha 0
beta 0
gamma 7
";

    #[test]
    fn finds_shortest_lexicographic_witness() {
        let i = parse_instance(NMIN_SCALAR_7).unwrap();
        let d = oracle_search(&i, 8);
        assert_eq!(d, Decision::Yes(Witness::from_letters0(vec![0, 0, 1])));
    }

    #[test]
    fn unknown_when_bound_exhausted() {
        let mut text = NMIN_SCALAR_7.to_string();
        text = text.replace("gamma 7", "gamma 1");
        let i = parse_instance(&text).unwrap();
        assert_eq!(oracle_search(&i, 8), Decision::Unknown(8));
    }

    #[test]
    fn star_mode_checks_empty_word() {
        let text = "\
semiring nmin
problem vector
words star
letters 1
dim 1
gen 1
1
alpha 4
eta 4
";
        let i = parse_instance(text).unwrap();
        assert_eq!(oracle_search(&i, 3), Decision::Yes(Witness::empty()));
    }

    #[test]
    fn memoization_preserves_answers() {
        for gamma in [6, 7, 11, 1] {
            let text = NMIN_SCALAR_7.replace("gamma 7", &format!("gamma {gamma}"));
            let i = parse_instance(&text).unwrap();
            assert_eq!(
                oracle_search_opts(&i, 7, true),
                oracle_search_opts(&i, 7, false),
                "gamma = {gamma}"
            );
        }
    }

    #[test]
    fn consistency_check_passes_on_real_bundle() {
        let i = parse_instance(NMIN_SCALAR_7).unwrap();
        let b = crate::reduce::reduce_scalar_to_scalar2(&i).unwrap();
        let report = reduction_consistency_check(&i, &b, 5);
        assert!(report.ok(), "failures: {:?}", report.failures);
        assert!(report.pushed > 0);
        assert!(report.pulled > 0);
    }

    #[test]
    fn corrupted_bundle_is_reported() {
        let i = parse_instance(NMIN_SCALAR_7).unwrap();
        let mut b = crate::reduce::reduce_scalar_to_scalar2(&i).unwrap();
        // Corrupt the sub-instance target.
        if let Payload::Scalar { gamma, .. } = &mut b.subs[0].payload {
            *gamma = crate::value::Value::int(9);
        }
        let report = reduction_consistency_check(&i, &b, 5);
        assert!(!report.ok());
        assert!(report.failures.iter().any(|f| f.stage == "push" || f.stage == "decide"));
    }
}
