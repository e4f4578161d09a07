//! Disjunctive reduction bundles: the sub-instances a transformation
//! produces, plus the maps that translate witnesses in both directions.
//!
//! The bundle contract is: the original instance is a Yes exactly when the
//! immediate decision (if any) is a Yes or some sub-instance is a Yes; any
//! satisfying original witness pushes to a satisfying sub-witness (or to the
//! immediate decision), and any satisfying sub-witness pulls back.

use std::fmt;

use crate::embed::{
    b_count, delta_decode, delta_encode, first_diagonal_word, rotation_encode, shift_letters,
    swap_letters, B,
};
use crate::error::WitnessMapError;
use crate::instance::{Decision, Instance, WordMode};
use crate::witness::Witness;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionKind {
    PlusToStar,
    StarToPlus,
    ScalarToCorner,
    CornerToScalar,
    ScalarToScalar2,
    VectorToVector2,
    MatrixToMatrix2,
    VectorToMatrix,
    ScalarToVector,
    ScalarToMatrix,
    MatrixToVector,
    CassaigneChain,
    Chain(Vec<ReductionKind>),
}

impl ReductionKind {
    pub fn name(&self) -> String {
        match self {
            ReductionKind::PlusToStar => "plus_to_star".into(),
            ReductionKind::StarToPlus => "star_to_plus".into(),
            ReductionKind::ScalarToCorner => "scalar_to_corner".into(),
            ReductionKind::CornerToScalar => "corner_to_scalar".into(),
            ReductionKind::ScalarToScalar2 => "scalar_to_scalar2".into(),
            ReductionKind::VectorToVector2 => "vector_to_vector2".into(),
            ReductionKind::MatrixToMatrix2 => "matrix_to_matrix2".into(),
            ReductionKind::VectorToMatrix => "vector_to_matrix".into(),
            ReductionKind::ScalarToVector => "scalar_to_vector".into(),
            ReductionKind::ScalarToMatrix => "scalar_to_matrix".into(),
            ReductionKind::MatrixToVector => "matrix_to_vector".into(),
            ReductionKind::CassaigneChain => "cassaigne_chain".into(),
            ReductionKind::Chain(parts) => parts
                .iter()
                .map(|p| p.name())
                .collect::<Vec<_>>()
                .join("+"),
        }
    }
}

impl fmt::Display for ReductionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Alphabet sizes and dimensions before and after a reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimRecord {
    pub r_in: usize,
    pub n_in: usize,
    pub r_out: usize,
    pub n_out: usize,
}

/// Where an original witness lands under `push`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PushOutcome {
    /// Witness for the sub-instance at `index`.
    Sub { index: usize, witness: Witness },
    /// The witness is covered by the bundle's immediate decision.
    Immediate,
}

/// Witness translation between an original instance and its sub-instances.
///
/// Two-letter words use the convention of [`crate::embed`]: letter 1 is `b`,
/// letter 2 is `c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessMap {
    /// One sub-instance carrying the identical witness.
    Identity,
    /// Sub-instance `j` strips the leading letter `a_{j+1}`.
    SplitFirstLetter { r: usize },
    /// One two-letter sub: rotation-encode; decode the first diagonal word.
    Rotation { r: usize },
    /// Two-letter subs indexed by the `b`-count mod `r`.
    RotationByCount { r: usize },
    /// Subs indexed by the stripped first letter; the rest is
    /// rotation-encoded.
    PrependRotation { r: usize },
    /// Subs indexed by `first_letter * r + (b-count mod r)`.
    PrependRotationByCount { r: usize },
    /// Sub `i` exchanges letters `a_{i+1}` and `a_r` and applies the δ
    /// coding.
    DeltaSwap { r: usize },
    /// Mortality encoding: one sub; pushes the concatenation of padded
    /// shift encodings, pulls the first diagonal word.
    Mortality { r: usize },
    /// Wraps the witness in the sentinel letter `a_{r+1}`.
    Sentinel { r: usize, leading: bool, trailing: bool },
    /// Per-target expansion of a multi-target matrix instance: a witness is
    /// routed to the branch of the target its image equals.
    TargetSelect {
        morphism: crate::instance::VMorphism,
        targets: Vec<crate::instance::VMat>,
        entries: Vec<ComposeEntry>,
    },
    /// Composition: push through `outer`, then through the entry for the
    /// outer sub-index; sub-indices are flattened.
    Compose {
        outer: Box<WitnessMap>,
        entries: Vec<ComposeEntry>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComposeEntry {
    pub offset: usize,
    pub count: usize,
    pub map: WitnessMap,
}

enum PushStep {
    At(usize, Witness),
    Immediate,
}

impl WitnessMap {
    pub fn kind_name(&self) -> String {
        match self {
            WitnessMap::Identity => "identity".into(),
            WitnessMap::SplitFirstLetter { .. } => "split_first_letter".into(),
            WitnessMap::Rotation { .. } => "rotation".into(),
            WitnessMap::RotationByCount { .. } => "rotation_by_count".into(),
            WitnessMap::PrependRotation { .. } => "prepend_rotation".into(),
            WitnessMap::PrependRotationByCount { .. } => "prepend_rotation_by_count".into(),
            WitnessMap::DeltaSwap { .. } => "delta_swap".into(),
            WitnessMap::Mortality { .. } => "mortality".into(),
            WitnessMap::Sentinel { leading, trailing, .. } => match (leading, trailing) {
                (true, true) => "sentinel_both".into(),
                (true, false) => "sentinel_leading".into(),
                (false, true) => "sentinel_trailing".into(),
                (false, false) => "identity".into(),
            },
            WitnessMap::TargetSelect { entries, .. } => {
                let inner: Vec<String> = entries.iter().map(|e| e.map.kind_name()).collect();
                let mut uniq = inner.clone();
                uniq.dedup();
                if uniq.len() == 1 {
                    format!("per_target*{}", uniq[0])
                } else {
                    format!("per_target*[{}]", inner.join(","))
                }
            }
            WitnessMap::Compose { outer, entries } => {
                let inner: Vec<String> = entries.iter().map(|e| e.map.kind_name()).collect();
                let mut uniq = inner.clone();
                uniq.dedup();
                if uniq.len() == 1 {
                    format!("{}*{}", outer.kind_name(), uniq[0])
                } else {
                    format!("{}*[{}]", outer.kind_name(), inner.join(","))
                }
            }
        }
    }

    fn push_step(&self, w: &Witness) -> Result<PushStep, WitnessMapError> {
        let split = |w: &Witness| -> Result<(usize, Witness), WitnessMapError> {
            let letters = w.letters0();
            let first = *letters.first().ok_or_else(|| {
                WitnessMapError::Shape("cannot split the empty witness".into())
            })?;
            Ok((first, Witness::from_letters0(letters[1..].to_vec())))
        };
        Ok(match self {
            WitnessMap::Identity => PushStep::At(0, w.clone()),
            WitnessMap::SplitFirstLetter { .. } => {
                let (j, rest) = split(w)?;
                PushStep::At(j, rest)
            }
            WitnessMap::Rotation { r } => PushStep::At(0, rotation_encode(w, *r)),
            WitnessMap::RotationByCount { r } => {
                let v = rotation_encode(w, *r);
                PushStep::At(b_count(&v) % r, v)
            }
            WitnessMap::PrependRotation { r } => {
                let (j, rest) = split(w)?;
                PushStep::At(j, rotation_encode(&rest, *r))
            }
            WitnessMap::PrependRotationByCount { r } => {
                let (j, rest) = split(w)?;
                let v = rotation_encode(&rest, *r);
                PushStep::At(j * r + b_count(&v) % r, v)
            }
            WitnessMap::DeltaSwap { r } => {
                let letters = w.letters0();
                let i = *letters.first().ok_or_else(|| {
                    WitnessMapError::Shape("cannot push the empty witness".into())
                })?;
                PushStep::At(i, delta_encode(&swap_letters(w, i, r - 1), *r))
            }
            WitnessMap::Mortality { r } => {
                let mut v = Vec::new();
                for t in 0..*r {
                    let seg = rotation_encode(&shift_letters(w, (*r - t) % *r, *r), *r);
                    let pad = (*r - b_count(&seg) % *r) % *r;
                    v.extend_from_slice(seg.letters0());
                    v.extend(std::iter::repeat_n(B, pad));
                }
                PushStep::At(0, Witness::from_letters0(v))
            }
            WitnessMap::Sentinel { r, leading, trailing } => {
                if w.letters0().iter().any(|&l| l >= *r) {
                    return Err(WitnessMapError::Shape(
                        "witness uses the sentinel letter".into(),
                    ));
                }
                let mut v = Vec::new();
                if *leading {
                    v.push(*r);
                }
                v.extend_from_slice(w.letters0());
                if *trailing {
                    v.push(*r);
                }
                PushStep::At(0, Witness::from_letters0(v))
            }
            WitnessMap::TargetSelect { morphism, targets, entries } => {
                let image = morphism
                    .apply(w)
                    .map_err(|e| WitnessMapError::Shape(e.to_string()))?;
                let t = targets.iter().position(|m| m == &image).ok_or_else(|| {
                    WitnessMapError::Shape("witness image matches no target".into())
                })?;
                let entry = entries.get(t).ok_or(WitnessMapError::BadIndex(t))?;
                match entry.map.push_step(w)? {
                    PushStep::Immediate => PushStep::Immediate,
                    PushStep::At(l, w2) => PushStep::At(entry.offset + l, w2),
                }
            }
            WitnessMap::Compose { outer, entries } => {
                let step = outer.push_step(w)?;
                match step {
                    PushStep::Immediate => PushStep::Immediate,
                    PushStep::At(j, w1) => {
                        let entry = entries.get(j).ok_or(WitnessMapError::BadIndex(j))?;
                        if entry.count == 0 {
                            PushStep::Immediate
                        } else {
                            match entry.map.push_step(&w1)? {
                                PushStep::Immediate => PushStep::Immediate,
                                PushStep::At(l, w2) => {
                                    if l >= entry.count {
                                        return Err(WitnessMapError::BadIndex(entry.offset + l));
                                    }
                                    PushStep::At(entry.offset + l, w2)
                                }
                            }
                        }
                    }
                }
            }
        })
    }

    fn pull_witness(&self, index: usize, v: &Witness) -> Result<Witness, WitnessMapError> {
        let expect_index = |max: usize| -> Result<(), WitnessMapError> {
            if index < max {
                Ok(())
            } else {
                Err(WitnessMapError::BadIndex(index))
            }
        };
        let two_letter = |v: &Witness| -> Result<(), WitnessMapError> {
            if v.letters0().iter().any(|&l| l > 1) {
                Err(WitnessMapError::Shape("expected a word over {b, c}".into()))
            } else {
                Ok(())
            }
        };
        match self {
            WitnessMap::Identity => {
                expect_index(1)?;
                Ok(v.clone())
            }
            WitnessMap::SplitFirstLetter { r } => {
                expect_index(*r)?;
                Ok(Witness::from_letters0(vec![index]).concat(v))
            }
            WitnessMap::Rotation { r } => {
                expect_index(1)?;
                two_letter(v)?;
                Ok(first_diagonal_word(v, *r))
            }
            WitnessMap::RotationByCount { r } => {
                expect_index(*r)?;
                two_letter(v)?;
                // No b-count congruence check: for a zero target vector the
                // block position is unconstrained, and for nonzero targets
                // any satisfying witness is congruent automatically.
                Ok(first_diagonal_word(v, *r))
            }
            WitnessMap::PrependRotation { r } => {
                expect_index(*r)?;
                two_letter(v)?;
                Ok(Witness::from_letters0(vec![index]).concat(&first_diagonal_word(v, *r)))
            }
            WitnessMap::PrependRotationByCount { r } => {
                expect_index(r * r)?;
                two_letter(v)?;
                let j = index / r;
                Ok(Witness::from_letters0(vec![j]).concat(&first_diagonal_word(v, *r)))
            }
            WitnessMap::DeltaSwap { r } => {
                expect_index(*r)?;
                two_letter(v)?;
                let decoded = delta_decode(v, *r).ok_or_else(|| {
                    WitnessMapError::Shape(format!("{v} is outside the image of the δ coding"))
                })?;
                if decoded.is_empty() {
                    return Err(WitnessMapError::Shape("δ decodes to the empty word".into()));
                }
                Ok(swap_letters(&decoded, index, r - 1))
            }
            WitnessMap::Mortality { r } => {
                expect_index(1)?;
                two_letter(v)?;
                let w = first_diagonal_word(v, *r);
                if w.is_empty() {
                    return Err(WitnessMapError::Shape(
                        "mortality witness contains no c".into(),
                    ));
                }
                Ok(w)
            }
            WitnessMap::Sentinel { r, leading, trailing } => {
                expect_index(1)?;
                let mut letters = v.letters0();
                // The sentinel generator is idempotent, so satisfying
                // witnesses may carry a run of sentinels at either end.
                if *leading {
                    let run = letters.iter().take_while(|&&l| l == *r).count();
                    if run == 0 {
                        return Err(WitnessMapError::Shape("missing leading sentinel".into()));
                    }
                    letters = &letters[run..];
                }
                if *trailing {
                    let run = letters.iter().rev().take_while(|&&l| l == *r).count();
                    if run == 0 {
                        return Err(WitnessMapError::Shape("missing trailing sentinel".into()));
                    }
                    letters = &letters[..letters.len() - run];
                }
                if letters.is_empty() {
                    return Err(WitnessMapError::Shape(
                        "sentinel wraps an empty word".into(),
                    ));
                }
                if letters.iter().any(|&l| l >= *r) {
                    return Err(WitnessMapError::Shape(
                        "sentinel letter inside the wrapped word".into(),
                    ));
                }
                Ok(Witness::from_letters0(letters.to_vec()))
            }
            WitnessMap::TargetSelect { entries, .. } => {
                let (_, entry) = entries
                    .iter()
                    .enumerate()
                    .find(|(_, e)| index >= e.offset && index < e.offset + e.count)
                    .ok_or(WitnessMapError::BadIndex(index))?;
                // A witness of a per-target branch is a witness of the
                // multi-target original as-is.
                entry.map.pull_witness(index - entry.offset, v)
            }
            WitnessMap::Compose { outer, entries } => {
                let (j, entry) = entries
                    .iter()
                    .enumerate()
                    .find(|(_, e)| index >= e.offset && index < e.offset + e.count)
                    .ok_or(WitnessMapError::BadIndex(index))?;
                let w1 = entry.map.pull_witness(index - entry.offset, v)?;
                outer.pull_witness(j, &w1)
            }
        }
    }
}

/// A reduction's output: sub-instances with disjunction semantics plus the
/// witness translation.
#[derive(Debug, Clone)]
pub struct ReductionBundle {
    pub kind: ReductionKind,
    pub original: Instance,
    pub subs: Vec<Instance>,
    /// A decision of the original obtained during the transformation (for
    /// example the empty-word check of a star-to-plus conversion).
    pub immediate: Option<Decision>,
    pub dims: DimRecord,
    map: WitnessMap,
}

impl ReductionBundle {
    pub fn new(
        kind: ReductionKind,
        original: Instance,
        subs: Vec<Instance>,
        immediate: Option<Decision>,
        map: WitnessMap,
    ) -> ReductionBundle {
        let dims = DimRecord {
            r_in: original.letters(),
            n_in: original.dim(),
            r_out: subs.first().map_or(original.letters(), Instance::letters),
            n_out: subs.first().map_or(original.dim(), Instance::dim),
        };
        ReductionBundle {
            kind,
            original,
            subs,
            immediate,
            dims,
            map,
        }
    }

    pub fn map_kind(&self) -> String {
        self.map.kind_name()
    }

    /// Translates a satisfying original witness to a sub-instance witness.
    pub fn push(&self, w: &Witness) -> Result<PushOutcome, WitnessMapError> {
        if self.subs.is_empty() {
            return Ok(PushOutcome::Immediate);
        }
        match self.map.push_step(w)? {
            PushStep::Immediate => Ok(PushOutcome::Immediate),
            PushStep::At(index, witness) => {
                let sub = self.subs.get(index).ok_or(WitnessMapError::BadIndex(index))?;
                if witness.is_empty() && sub.mode == WordMode::Plus {
                    // The empty word cannot certify a plus-mode sub; the
                    // transformation must have resolved this case up front.
                    if self.immediate.as_ref().is_some_and(Decision::is_yes) {
                        return Ok(PushOutcome::Immediate);
                    }
                    return Err(WitnessMapError::Shape(
                        "witness maps to the empty word of a plus-mode sub-instance".into(),
                    ));
                }
                Ok(PushOutcome::Sub { index, witness })
            }
        }
    }

    /// Translates a satisfying sub-instance witness back to the original.
    pub fn pull(&self, index: usize, v: &Witness) -> Result<Witness, WitnessMapError> {
        if index >= self.subs.len() {
            return Err(WitnessMapError::BadIndex(index));
        }
        self.map.pull_witness(index, v)
    }

    /// The key/value manifest header describing this bundle.
    pub fn manifest_header(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("kind {}\n", self.kind.name()));
        out.push_str(&format!("subs {}\n", self.subs.len()));
        out.push_str(&format!(
            "r_in {} n_in {} r_out {} n_out {}\n",
            self.dims.r_in, self.dims.n_in, self.dims.r_out, self.dims.n_out
        ));
        out.push_str(&format!("witness_map {}\n", self.map_kind()));
        match &self.immediate {
            Some(Decision::Yes(w)) => out.push_str(&format!("immediate yes {w}\n")),
            Some(other) => out.push_str(&format!("immediate {other}\n")),
            None => out.push_str("immediate none\n"),
        }
        out
    }

    /// Folds per-sub decisions into a decision of the original instance,
    /// translating any witness found.
    pub fn answer_with(&self, mut decide: impl FnMut(&Instance) -> Decision) -> Decision {
        if let Some(d) = &self.immediate {
            if d.is_yes() {
                return d.clone();
            }
        }
        let mut unknown: Option<usize> = None;
        let mut unsupported: Option<String> = None;
        for (i, sub) in self.subs.iter().enumerate() {
            match decide(sub) {
                Decision::Yes(v) => {
                    return match self.pull(i, &v) {
                        Ok(w) => Decision::Yes(w),
                        Err(e) => Decision::Unsupported(format!("witness pull failed: {e}")),
                    }
                }
                Decision::No { .. } => {}
                Decision::Unknown(b) => unknown = Some(unknown.map_or(b, |u| u.min(b))),
                Decision::Unsupported(r) => unsupported = Some(r),
            }
        }
        if let Some(r) = unsupported {
            Decision::Unsupported(r)
        } else if let Some(b) = unknown {
            Decision::Unknown(b)
        } else {
            Decision::no()
        }
    }
}

/// Composes a bundle with one follow-up bundle per sub-instance.
///
/// `inner[j].original` must equal `outer.subs[j]`; the result's
/// sub-instances are the concatenation of the inner sub-instances.
pub fn compose(
    kind: ReductionKind,
    outer: ReductionBundle,
    inner: Vec<ReductionBundle>,
) -> Result<ReductionBundle, WitnessMapError> {
    if inner.len() != outer.subs.len() {
        return Err(WitnessMapError::Shape(format!(
            "composition needs {} inner bundles, got {}",
            outer.subs.len(),
            inner.len()
        )));
    }
    for (j, b) in inner.iter().enumerate() {
        if b.original != outer.subs[j] {
            return Err(WitnessMapError::Shape(format!(
                "inner bundle {j} does not start from the outer sub-instance"
            )));
        }
    }
    let mut subs = Vec::new();
    let mut entries = Vec::with_capacity(inner.len());
    let mut immediate = outer.immediate.clone();
    for (j, b) in inner.iter().enumerate() {
        if immediate.is_none() {
            if let Some(Decision::Yes(w1)) = &b.immediate {
                immediate = Some(Decision::Yes(outer.pull(j, w1)?));
            }
        }
        entries.push(ComposeEntry {
            offset: subs.len(),
            count: b.subs.len(),
            map: b.map.clone(),
        });
        subs.extend(b.subs.iter().cloned());
    }
    let map = WitnessMap::Compose {
        outer: Box::new(outer.map.clone()),
        entries,
    };
    Ok(ReductionBundle::new(kind, outer.original, subs, immediate, map))
}
