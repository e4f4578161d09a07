//! Problem-to-problem reductions with witness translation: alphabet
//! reduction to two generators, the cross-problem reductions, Blondel's
//! matrix-to-vector observation, projective lifts over max-plus, and the
//! zero-corner dimension chain.
//!
//! Every reduction consumes a plus-mode instance; callers convert first with
//! [`crate::instance::plus_star_convert`]. Each returns a
//! [`ReductionBundle`] whose answer is the OR of the sub-instance answers
//! (or the immediate decision).

use crate::automaton::{bracket_gadget, prefix_gadget, suffix_gadget, Automaton};
use crate::bundle::{compose, ComposeEntry, ReductionBundle, ReductionKind, WitnessMap};
use crate::embed::{first_embedding, second_embedding, B};
use crate::error::{AlgebraError, ReductionError};
use crate::instance::{
    corner_to_scalar, plus_star_convert, scalar_to_corner, Instance, Payload, VMat, VMorphism,
    WordMode,
};
use crate::matrix::{proportional, Mat, Morphism};
use crate::value::SemiringId;
use crate::witness::Witness;

fn require_plus(i: &Instance) -> Result<(), ReductionError> {
    if i.mode != WordMode::Plus {
        return Err(ReductionError::NeedsPlusMode);
    }
    Ok(())
}

/// The start vector of the two-letter embeddings: `v` in the first block,
/// zeros elsewhere.
fn widen_row(v: &VMat, copies: usize) -> VMat {
    let sr = *v.semiring();
    let mut out = Mat::zeros(sr, 1, v.cols() * copies);
    out.paste(0, 0, v);
    out
}

/// The column vector stacked `copies` times.
fn stack_col(v: &VMat, copies: usize) -> VMat {
    let sr = *v.semiring();
    let mut out = Mat::zeros(sr, v.rows() * copies, 1);
    for t in 0..copies {
        out.paste(t * v.rows(), 0, v);
    }
    out
}

/// Scalar reachability for `r` generators of dimension `n` reduces to
/// scalar reachability for 2 generators of dimension `rn`, preserving γ.
pub fn reduce_scalar_to_scalar2(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Scalar { morphism, alpha, beta, gamma } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "scalar", got: i.kind().name() });
    };
    let sr = i.semiring;
    let r = morphism.r();
    let emb = second_embedding(morphism);
    let beta2 = stack_col(beta, r);
    let empty_value = alpha.mul(beta)?;
    if empty_value.get(0, 0) != gamma {
        // s(ε) ≠ γ: one plus-mode sub-instance; the first diagonal word of
        // any satisfying {b,c}-witness is necessarily nonempty.
        let sub = Instance::new(
            sr,
            WordMode::Plus,
            Payload::Scalar {
                morphism: emb,
                alpha: widen_row(alpha, r),
                beta: beta2,
                gamma: gamma.clone(),
            },
        )?;
        Ok(ReductionBundle::new(
            ReductionKind::ScalarToScalar2,
            i.clone(),
            vec![sub],
            None,
            WitnessMap::Rotation { r },
        ))
    } else {
        // s(ε) = γ: route through the series a⁻¹s so the empty word of the
        // embedded instance corresponds to a stripped first letter. The
        // sub-instances stay in star mode.
        let mut subs = Vec::with_capacity(r);
        for j in 0..r {
            let alpha_j = alpha.mul(morphism.generator(j))?;
            subs.push(Instance::new(
                sr,
                WordMode::Star,
                Payload::Scalar {
                    morphism: emb.clone(),
                    alpha: widen_row(&alpha_j, r),
                    beta: beta2.clone(),
                    gamma: gamma.clone(),
                },
            )?);
        }
        Ok(ReductionBundle::new(
            ReductionKind::ScalarToScalar2,
            i.clone(),
            subs,
            None,
            WitnessMap::PrependRotation { r },
        ))
    }
}

/// Vector reachability for `r` generators of dimension `n` reduces to
/// vector reachability for 2 generators of dimension `rn`: sub-instance `k`
/// targets `η'·emb(b)^k`.
pub fn reduce_vector_to_vector2(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Vector { morphism, alpha, eta } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "vector", got: i.kind().name() });
    };
    let sr = i.semiring;
    let r = morphism.r();
    let emb = second_embedding(morphism);
    let emb_b = emb.generator(B).clone();
    let mut eta_k = widen_row(eta, r);
    let mut eta_targets = Vec::with_capacity(r);
    for _ in 0..r {
        eta_targets.push(eta_k.clone());
        eta_k = eta_k.mul(&emb_b)?;
    }
    if alpha != eta {
        let subs = eta_targets
            .iter()
            .map(|eta_target| {
                Instance::new(
                    sr,
                    WordMode::Plus,
                    Payload::Vector {
                        morphism: emb.clone(),
                        alpha: widen_row(alpha, r),
                        eta: eta_target.clone(),
                    },
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ReductionBundle::new(
            ReductionKind::VectorToVector2,
            i.clone(),
            subs,
            None,
            WitnessMap::RotationByCount { r },
        ))
    } else {
        // α = η: the embedded instance would accept the empty word, so the
        // first letter is stripped up front; the sub-instances stay in star
        // mode, indexed j·r + k.
        let mut subs = Vec::with_capacity(r * r);
        for j in 0..r {
            let alpha_j = alpha.mul(morphism.generator(j))?;
            for eta_target in &eta_targets {
                subs.push(Instance::new(
                    sr,
                    WordMode::Star,
                    Payload::Vector {
                        morphism: emb.clone(),
                        alpha: widen_row(&alpha_j, r),
                        eta: eta_target.clone(),
                    },
                )?);
            }
        }
        Ok(ReductionBundle::new(
            ReductionKind::VectorToVector2,
            i.clone(),
            subs,
            None,
            WitnessMap::PrependRotationByCount { r },
        ))
    }
}

/// Matrix reachability for `r` generators of dimension `n` reduces to
/// matrix reachability for 2 generators of dimension `rn`. Target sets are
/// expanded to one branch per target.
pub fn reduce_matrix_to_matrix2(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Matrix { morphism, targets } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "matrix", got: i.kind().name() });
    };
    per_target(i, morphism, targets, ReductionKind::MatrixToMatrix2, matrix2_branch)
}

fn matrix2_branch(
    single: &Instance,
    morphism: &VMorphism,
    target: &VMat,
) -> Result<(Vec<Instance>, WitnessMap), ReductionError> {
    let sr = single.semiring;
    let (r, n) = (morphism.r(), morphism.n());
    if target.is_zero() {
        // Mortality: the second embedding is mortal exactly when μ is.
        let sub = Instance::new(
            sr,
            WordMode::Plus,
            Payload::Matrix {
                morphism: second_embedding(morphism),
                targets: vec![Mat::zeros(sr, r * n, r * n)],
            },
        )?;
        Ok((vec![sub], WitnessMap::Mortality { r }))
    } else {
        // One branch per choice of the first letter, with that generator
        // swapped into the last position before the first embedding.
        let target2 = {
            let mut m = Mat::zeros(sr, r * n, r * n);
            m.paste(0, 0, target);
            m
        };
        let subs = (0..r)
            .map(|j| {
                let mut gens = morphism.generators().to_vec();
                gens.swap(j, r - 1);
                let swapped = Morphism::new(gens)?;
                Instance::new(
                    sr,
                    WordMode::Plus,
                    Payload::Matrix {
                        morphism: first_embedding(&swapped),
                        targets: vec![target2.clone()],
                    },
                )
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok((subs, WitnessMap::DeltaSwap { r }))
    }
}

/// Expands a multi-target matrix instance into per-target branches.
fn per_target(
    i: &Instance,
    morphism: &VMorphism,
    targets: &[VMat],
    kind: ReductionKind,
    branch: impl Fn(&Instance, &VMorphism, &VMat) -> Result<(Vec<Instance>, WitnessMap), ReductionError>,
) -> Result<ReductionBundle, ReductionError> {
    let mut subs = Vec::new();
    let mut entries = Vec::new();
    let mut immediate = None;
    for target in targets {
        let single = Instance::new(
            i.semiring,
            i.mode,
            Payload::Matrix {
                morphism: morphism.clone(),
                targets: vec![target.clone()],
            },
        )?;
        let (branch_subs, map) = branch(&single, morphism, target)?;
        if immediate.is_none() {
            if let WitnessMap::SplitFirstLetter { .. } = map {
                // A split-first branch cannot carry one-letter witnesses;
                // resolve them up front.
                for (k, g) in morphism.generators().iter().enumerate() {
                    if g == target {
                        immediate =
                            Some(crate::instance::Decision::Yes(Witness::from_letters0(vec![k])));
                        break;
                    }
                }
            }
        }
        entries.push(ComposeEntry {
            offset: subs.len(),
            count: branch_subs.len(),
            map,
        });
        subs.extend(branch_subs);
    }
    if targets.len() == 1 {
        let entry = entries.pop().expect("one branch");
        return Ok(ReductionBundle::new(kind, i.clone(), subs, immediate, entry.map));
    }
    let map = WitnessMap::TargetSelect {
        morphism: morphism.clone(),
        targets: targets.to_vec(),
        entries,
    };
    Ok(ReductionBundle::new(kind, i.clone(), subs, immediate, map))
}

/// Vector reachability reduces to matrix reachability over one more letter:
/// dimension `n+1` when `η ≠ 0`, `n+3` otherwise (a prefix automaton pins
/// the sentinel shape).
pub fn reduce_vector_to_matrix(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Vector { morphism, alpha, eta } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "vector", got: i.kind().name() });
    };
    let sr = i.semiring;
    let (r, n) = (morphism.r(), morphism.n());
    // μ'(a_i) = [[0, αμ(a_i)], [0, μ(a_i)]], μ'(a_{r+1}) = diag(1, 0).
    let mut gens = Vec::with_capacity(r + 1);
    for g in morphism.generators() {
        let ag = alpha.mul(g)?;
        let mut m = Mat::zeros(sr, n + 1, n + 1);
        m.paste(0, 1, &ag);
        m.paste(1, 1, g);
        gens.push(m);
    }
    let mut sentinel = Mat::zeros(sr, n + 1, n + 1);
    sentinel.set(0, 0, sr.one());
    gens.push(sentinel);
    let mu2 = Morphism::new(gens)?;
    let mut m_eta = Mat::zeros(sr, n + 1, n + 1);
    m_eta.paste(0, 1, eta);

    let sub = if !eta.is_zero() {
        Instance::new(
            sr,
            WordMode::Plus,
            Payload::Matrix { morphism: mu2, targets: vec![m_eta] },
        )?
    } else {
        let (mu3, targets) = append_gadget_targets(&mu2, &m_eta, &prefix_gadget(r), sr)?;
        Instance::new(sr, WordMode::Plus, Payload::Matrix { morphism: mu3, targets })?
    };
    Ok(ReductionBundle::new(
        ReductionKind::VectorToMatrix,
        i.clone(),
        vec![sub],
        None,
        WitnessMap::Sentinel { r, leading: true, trailing: false },
    ))
}

/// Extends a morphism with a gadget automaton block and builds the target
/// set `{diag(target, N) : N ∈ M_A}`.
fn append_gadget_targets(
    mu: &VMorphism,
    target: &VMat,
    gadget: &Automaton,
    sr: SemiringId,
) -> Result<(VMorphism, Vec<VMat>), AlgebraError> {
    debug_assert_eq!(mu.r(), gadget.alphabet());
    gadget.validate()?;
    let (nu, _, _) = gadget.matrices(&sr);
    let gens = mu
        .generators()
        .iter()
        .zip(nu.generators())
        .map(|(g, a)| Mat::block_diag(&[g.clone(), a.clone()]))
        .collect::<Result<Vec<_>, _>>()?;
    let (m_a, _) = gadget.reach_sets(&sr)?;
    let targets = m_a
        .iter()
        .map(|m| Mat::block_diag(&[target.clone(), m.clone()]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((Morphism::new(gens)?, targets))
}

/// Scalar reachability reduces to vector reachability over one more letter:
/// dimension `n+1` when `γ ≠ 0`, `n+3` otherwise (a suffix automaton pins
/// the sentinel shape).
pub fn reduce_scalar_to_vector(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Scalar { morphism, alpha, beta, gamma } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "scalar", got: i.kind().name() });
    };
    let sr = i.semiring;
    let (r, n) = (morphism.r(), morphism.n());
    // μ'(a_i) = [[μ(a_i), μ(a_i)β], [0, 0]], μ'(a_{r+1}) = diag(0, 1).
    let mut gens = Vec::with_capacity(r + 1);
    for g in morphism.generators() {
        let gb = g.mul(beta)?;
        let mut m = Mat::zeros(sr, n + 1, n + 1);
        m.paste(0, 0, g);
        m.paste(0, n, &gb);
        gens.push(m);
    }
    let mut sentinel = Mat::zeros(sr, n + 1, n + 1);
    sentinel.set(n, n, sr.one());
    gens.push(sentinel);
    let mu2 = Morphism::new(gens)?;

    let sub = if gamma != &sr.zero() {
        let mut alpha2 = Mat::zeros(sr, 1, n + 1);
        alpha2.paste(0, 0, alpha);
        let mut eta_gamma = Mat::zeros(sr, 1, n + 1);
        eta_gamma.set(0, n, gamma.clone());
        Instance::new(
            sr,
            WordMode::Plus,
            Payload::Vector { morphism: mu2, alpha: alpha2, eta: eta_gamma },
        )?
    } else {
        // γ = 0: track membership in Σ_r^* a_{r+1} with the suffix
        // automaton and ask for ((α,1)μ'(z), α_A ν(z)) = (0,…,0, 0, 1).
        let gadget = suffix_gadget(r);
        gadget.validate()?;
        let (nu, gadget_alpha, _) = gadget.matrices(&sr);
        let gens3 = mu2
            .generators()
            .iter()
            .zip(nu.generators())
            .map(|(g, a)| Mat::block_diag(&[g.clone(), a.clone()]))
            .collect::<Result<Vec<_>, _>>()?;
        let mut alpha3 = Mat::zeros(sr, 1, n + 3);
        alpha3.paste(0, 0, alpha);
        alpha3.set(0, n, sr.one());
        alpha3.paste(0, n + 1, &gadget_alpha);
        let mut eta3 = Mat::zeros(sr, 1, n + 3);
        eta3.set(0, n + 2, sr.one());
        Instance::new(
            sr,
            WordMode::Plus,
            Payload::Vector {
                morphism: Morphism::new(gens3)?,
                alpha: alpha3,
                eta: eta3,
            },
        )?
    };
    Ok(ReductionBundle::new(
        ReductionKind::ScalarToVector,
        i.clone(),
        vec![sub],
        None,
        WitnessMap::Sentinel { r, leading: false, trailing: true },
    ))
}

/// Scalar reachability reduces to matrix reachability over one more letter:
/// dimension `n+2` when `γ ≠ 0`, `n+5` otherwise (a three-state bracket
/// automaton pins the sentinel shape).
pub fn reduce_scalar_to_matrix(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Scalar { morphism, gamma, .. } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "scalar", got: i.kind().name() });
    };
    let sr = i.semiring;
    let (r, n) = (morphism.r(), morphism.n());
    // The corner form of the series, plus the idempotent sentinel
    // μ'(a_{r+1}) = diag(1, 0_nn, 1).
    let corner = scalar_to_corner(i)?;
    let mut gens = corner.subs[0].morphism().generators().to_vec();
    let mut sentinel = Mat::zeros(sr, n + 2, n + 2);
    sentinel.set(0, 0, sr.one());
    sentinel.set(n + 1, n + 1, sr.one());
    gens.push(sentinel);
    let mu2 = Morphism::new(gens)?;
    let mut m_gamma = Mat::zeros(sr, n + 2, n + 2);
    m_gamma.set(0, n + 1, gamma.clone());

    let sub = if gamma != &sr.zero() {
        Instance::new(
            sr,
            WordMode::Plus,
            Payload::Matrix { morphism: mu2, targets: vec![m_gamma] },
        )?
    } else {
        let (mu3, targets) = append_gadget_targets(&mu2, &m_gamma, &bracket_gadget(r), sr)?;
        Instance::new(sr, WordMode::Plus, Payload::Matrix { morphism: mu3, targets })?
    };
    Ok(ReductionBundle::new(
        ReductionKind::ScalarToMatrix,
        i.clone(),
        vec![sub],
        None,
        WitnessMap::Sentinel { r, leading: true, trailing: true },
    ))
}

/// Matrix reachability reduces to vector reachability by flattening, with
/// one branch per first letter. The flattened morphism is `diag(μ, …, μ)`
/// with `n` copies, so the output dimension is `n²`.
pub fn reduce_matrix_to_vector(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Matrix { morphism, targets } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "matrix", got: i.kind().name() });
    };
    per_target(i, morphism, targets, ReductionKind::MatrixToVector, m2v_branch)
}

fn m2v_branch(
    single: &Instance,
    morphism: &VMorphism,
    target: &VMat,
) -> Result<(Vec<Instance>, WitnessMap), ReductionError> {
    let sr = single.semiring;
    let (r, n) = (morphism.r(), morphism.n());
    let mut diag_gens = Vec::with_capacity(r);
    for g in morphism.generators() {
        diag_gens.push(Mat::block_diag(&vec![g.clone(); n])?);
    }
    let mu2 = Morphism::new(diag_gens)?;
    let vec_target = target.vec_flatten()?;
    let subs = (0..r)
        .map(|k| {
            Instance::new(
                sr,
                WordMode::Plus,
                Payload::Vector {
                    morphism: mu2.clone(),
                    alpha: morphism.generator(k).vec_flatten()?,
                    eta: vec_target.clone(),
                },
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((subs, WitnessMap::SplitFirstLetter { r }))
}

/// An exact reachability instance over zmax/zmin lifted by one dimension:
/// projective reachability of the lift is equivalent to exact reachability
/// of the original.
#[derive(Debug, Clone)]
pub struct ProjectiveLift {
    pub original: Instance,
    pub lifted: Instance,
}

pub fn projective_lift(i: &Instance) -> Result<ProjectiveLift, ReductionError> {
    if !matches!(i.semiring, SemiringId::Zmax | SemiringId::Zmin) {
        return Err(ReductionError::Unsupported(format!(
            "projective lift applies over zmax and zmin, not {}",
            i.semiring.name()
        )));
    }
    let sr = i.semiring;
    let one_block = Mat::new(sr, 1, 1, vec![sr.one()]).expect("1x1 one");
    let lift_morph = |mu: &VMorphism| -> Result<VMorphism, AlgebraError> {
        let gens = mu
            .generators()
            .iter()
            .map(|g| Mat::block_diag(&[one_block.clone(), g.clone()]))
            .collect::<Result<Vec<_>, _>>()?;
        Morphism::new(gens)
    };
    let lifted = match &i.payload {
        Payload::Matrix { morphism, targets } => Instance::new(
            sr,
            i.mode,
            Payload::Matrix {
                morphism: lift_morph(morphism)?,
                targets: targets
                    .iter()
                    .map(|t| Mat::block_diag(&[one_block.clone(), t.clone()]))
                    .collect::<Result<Vec<_>, _>>()?,
            },
        )?,
        Payload::Vector { morphism, alpha, eta } => {
            let extend = |v: &VMat| {
                let mut out = Mat::zeros(sr, 1, v.cols() + 1);
                out.set(0, 0, sr.one());
                out.paste(0, 1, v);
                out
            };
            Instance::new(
                sr,
                i.mode,
                Payload::Vector {
                    morphism: lift_morph(morphism)?,
                    alpha: extend(alpha),
                    eta: extend(eta),
                },
            )?
        }
        Payload::Scalar { .. } => {
            return Err(ReductionError::WrongKind { expected: "matrix or vector", got: "scalar" })
        }
        Payload::Corner { .. } => {
            return Err(ReductionError::WrongKind { expected: "matrix or vector", got: "corner" })
        }
    };
    Ok(ProjectiveLift { original: i.clone(), lifted })
}

/// Does the word satisfy the lifted instance projectively, i.e. up to a
/// global additive shift?
pub fn projective_satisfied(lifted: &Instance, w: &Witness) -> Result<bool, AlgebraError> {
    if lifted.mode == WordMode::Plus && w.is_empty() {
        return Ok(false);
    }
    let image = lifted.morphism().apply(w)?;
    match &lifted.payload {
        Payload::Matrix { targets, .. } => {
            for t in targets {
                if proportional(&image, t)?.is_some() {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Payload::Vector { alpha, eta, .. } => Ok(proportional(&alpha.mul(&image)?, eta)?.is_some()),
        _ => Err(AlgebraError::ShapeMismatch(
            "projective satisfaction applies to matrix and vector instances".into(),
        )),
    }
}

/// The zero-corner dimension chain: corner → scalar (same dimension) →
/// 2-generator scalar (dimension rn) → corner (dimension rn+2), composing
/// the witness maps.
pub fn cassaigne_chain(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    require_plus(i)?;
    let Payload::Corner { gamma, .. } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "corner", got: i.kind().name() });
    };
    if gamma != &i.semiring.zero() {
        return Err(ReductionError::Unsupported(
            "the dimension chain is stated for the zero corner problem".into(),
        ));
    }
    let as_map_err = |e: crate::error::WitnessMapError| ReductionError::Unsupported(e.to_string());

    let step1 = corner_to_scalar(i)?;
    let step2 = step1
        .subs
        .iter()
        .map(reduce_scalar_to_scalar2)
        .collect::<Result<Vec<_>, _>>()?;
    let chain = compose(ReductionKind::CassaigneChain, step1, step2).map_err(as_map_err)?;
    // Canonicalize any star-mode sub back to plus before the corner step.
    let step3 = chain
        .subs
        .iter()
        .map(|s| plus_star_convert(s, WordMode::Plus))
        .collect::<Result<Vec<_>, _>>()?;
    let chain = compose(ReductionKind::CassaigneChain, chain, step3).map_err(as_map_err)?;
    let step4 = chain
        .subs
        .iter()
        .map(scalar_to_corner)
        .collect::<Result<Vec<_>, _>>()?;
    compose(ReductionKind::CassaigneChain, chain, step4).map_err(as_map_err)
}

/// The reductions reachable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReductionTarget {
    Scalar2,
    Vector2,
    Matrix2,
    VectorToMatrix,
    ScalarToVector,
    ScalarToMatrix,
    MatrixToVector,
    Cassaigne,
}

impl ReductionTarget {
    pub fn parse(name: &str) -> Option<ReductionTarget> {
        Some(match name {
            "scalar2" => ReductionTarget::Scalar2,
            "vector2" => ReductionTarget::Vector2,
            "matrix2" => ReductionTarget::Matrix2,
            "v2m" => ReductionTarget::VectorToMatrix,
            "s2v" => ReductionTarget::ScalarToVector,
            "s2m" => ReductionTarget::ScalarToMatrix,
            "m2v" => ReductionTarget::MatrixToVector,
            "cassaigne" => ReductionTarget::Cassaigne,
            _ => return None,
        })
    }

    pub fn apply(self, i: &Instance) -> Result<ReductionBundle, ReductionError> {
        match self {
            ReductionTarget::Scalar2 => reduce_scalar_to_scalar2(i),
            ReductionTarget::Vector2 => reduce_vector_to_vector2(i),
            ReductionTarget::Matrix2 => reduce_matrix_to_matrix2(i),
            ReductionTarget::VectorToMatrix => reduce_vector_to_matrix(i),
            ReductionTarget::ScalarToVector => reduce_scalar_to_vector(i),
            ReductionTarget::ScalarToMatrix => reduce_scalar_to_matrix(i),
            ReductionTarget::MatrixToVector => reduce_matrix_to_vector(i),
            ReductionTarget::Cassaigne => cassaigne_chain(i),
        }
    }
}

/// Applies a reduction to an instance in either word mode, converting
/// star-mode inputs to plus first and composing the bundles.
pub fn reduce_any(i: &Instance, target: ReductionTarget) -> Result<ReductionBundle, ReductionError> {
    if i.mode == WordMode::Plus {
        return target.apply(i);
    }
    let conv = plus_star_convert(i, WordMode::Plus)?;
    let inner = conv
        .subs
        .iter()
        .map(|s| target.apply(s))
        .collect::<Result<Vec<_>, _>>()?;
    let kind = ReductionKind::Chain(vec![
        conv.kind.clone(),
        match inner.first() {
            Some(b) => b.kind.clone(),
            None => ReductionKind::StarToPlus,
        },
    ]);
    compose(kind, conv, inner).map_err(|e| ReductionError::Unsupported(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::PushOutcome;
    use crate::instance::parse_instance;
    use crate::value::SemiringId::*;
    use crate::value::Value;

    fn scalar_nmin(gens: &[i64], alpha: i64, beta: i64, gamma: i64) -> Instance {
        let morphism = Morphism::new(
            gens.iter()
                .map(|&g| Mat::new(Nmin, 1, 1, vec![Value::int(g)]).unwrap())
                .collect(),
        )
        .unwrap();
        Instance::new(
            Nmin,
            WordMode::Plus,
            Payload::Scalar {
                morphism,
                alpha: Mat::new(Nmin, 1, 1, vec![Value::int(alpha)]).unwrap(),
                beta: Mat::new(Nmin, 1, 1, vec![Value::int(beta)]).unwrap(),
                gamma: Value::int(gamma),
            },
        )
        .unwrap()
    }

    #[test]
    fn scalar2_dimensions() {
        let i = scalar_nmin(&[1, 2, 3], 0, 0, 2);
        let b = reduce_scalar_to_scalar2(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, 3);
        assert_eq!(b.subs.len(), 1);
        // γ is preserved verbatim.
        let Payload::Scalar { gamma, .. } = &b.subs[0].payload else { panic!() };
        assert_eq!(gamma, &Value::int(2));
    }

    #[test]
    fn scalar2_push_pull_small() {
        let i = scalar_nmin(&[1, 2, 3], 0, 0, 4);
        let b = reduce_scalar_to_scalar2(&i).unwrap();
        let mut hits = 0;
        for w in crate::witness::all_words(3, 4) {
            if !i.evaluate(&w).unwrap() {
                continue;
            }
            hits += 1;
            match b.push(&w).unwrap() {
                PushOutcome::Sub { index, witness } => {
                    assert!(b.subs[index].evaluate(&witness).unwrap(), "push of {w}");
                    let back = b.pull(index, &witness).unwrap();
                    assert!(i.evaluate(&back).unwrap());
                }
                PushOutcome::Immediate => panic!("unexpected immediate"),
            }
        }
        assert!(hits > 0);
    }

    #[test]
    fn vector2_target_shift() {
        // k=1, r=2, n=1: η'·emb(b) = (0, η).
        let text = "\
semiring nmin
problem vector
letters 2
dim 1
gen 1
1
gen 2
2
alpha 0
eta 3
";
        let i = parse_instance(text).unwrap();
        let b = reduce_vector_to_vector2(&i).unwrap();
        assert_eq!(b.subs.len(), 2);
        let Payload::Vector { eta, .. } = &b.subs[1].payload else { panic!() };
        assert_eq!(eta.entries(), &[Value::PosInf, Value::int(3)]);
    }

    #[test]
    fn matrix2_dimension_map() {
        let text = "\
semiring nmin
problem matrix
letters 3
dim 2
gen 1
0 1
1 0
gen 2
1 +inf
0 2
gen 3
2 0
+inf 1
target
2 1
1 2
";
        let i = parse_instance(text).unwrap();
        let b = reduce_matrix_to_matrix2(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, 6);
        assert_eq!(b.subs.len(), 3);
    }

    #[test]
    fn v2m_dimensions() {
        let text = "\
semiring nmin
problem vector
letters 2
dim 2
gen 1
0 1
1 0
gen 2
1 2
0 1
alpha 0 1
eta 1 2
";
        let i = parse_instance(text).unwrap();
        let b = reduce_vector_to_matrix(&i).unwrap();
        assert_eq!(b.dims.n_out, 3);
        assert_eq!(b.dims.r_out, 3);
        // η = 0 branch goes to n+3.
        let mut zeroed = i.clone();
        if let Payload::Vector { eta, .. } = &mut zeroed.payload {
            *eta = Mat::zeros(Nmin, 1, 2);
        }
        let b0 = reduce_vector_to_matrix(&zeroed).unwrap();
        assert_eq!(b0.dims.n_out, 5);
    }

    #[test]
    fn s2m_sentinel_idempotent() {
        let i = scalar_nmin(&[2, 3], 0, 0, 7);
        let b = reduce_scalar_to_matrix(&i).unwrap();
        assert_eq!(b.dims.n_out, 3);
        let mu = b.subs[0].morphism();
        let sentinel = mu.generator(2);
        assert_eq!(&sentinel.mul(sentinel).unwrap(), sentinel);
    }

    #[test]
    fn s2v_gamma_zero_start_vector() {
        let i = scalar_nmin(&[2, 3], 0, 0, 7);
        let b = reduce_scalar_to_vector(&i).unwrap();
        assert_eq!(b.dims.n_out, 2);
        // γ = 0 branch: α'' carries exactly two unit coordinates (α itself
        // is kept away from the unit element here).
        let mut zeroed = scalar_nmin(&[2, 3], 5, 0, 0);
        if let Payload::Scalar { gamma, .. } = &mut zeroed.payload {
            *gamma = Value::PosInf; // the zero of nmin
        }
        let b0 = reduce_scalar_to_vector(&zeroed).unwrap();
        assert_eq!(b0.dims.n_out, 4);
        let Payload::Vector { alpha, .. } = &b0.subs[0].payload else { panic!() };
        let ones = alpha.entries().iter().filter(|e| **e == Nmin.one()).count();
        assert_eq!(ones, 2);
    }

    #[test]
    fn m2v_uses_square_of_dimension() {
        let text = "\
semiring nat
problem matrix
letters 2
dim 2
gen 1
1 1
0 1
gen 2
1 0
1 1
target
2 1
1 1
";
        let i = parse_instance(text).unwrap();
        let b = reduce_matrix_to_vector(&i).unwrap();
        assert_eq!(b.dims.r_out, 2);
        assert_eq!(b.dims.n_out, 4);
        assert_eq!(b.subs.len(), 2);
    }

    #[test]
    fn m2v_flatten_identity() {
        // vec(μ(a_k w)) = vec(μ(a_k)) · diag(μ,…,μ)(w) for short words.
        let text = "\
semiring nat
problem matrix
letters 2
dim 2
gen 1
1 1
0 1
gen 2
1 0
1 1
target
2 1
1 1
";
        let i = parse_instance(text).unwrap();
        let mu = i.morphism();
        let diag = Morphism::new(
            mu.generators()
                .iter()
                .map(|g| Mat::block_diag(&vec![g.clone(); 2]).unwrap())
                .collect(),
        )
        .unwrap();
        for w in crate::witness::all_words(2, 5) {
            for k in 0..2usize {
                let mut kw = vec![k];
                kw.extend_from_slice(w.letters0());
                let lhs = mu
                    .apply(&Witness::from_letters0(kw))
                    .unwrap()
                    .vec_flatten()
                    .unwrap();
                let rhs = mu
                    .generator(k)
                    .vec_flatten()
                    .unwrap()
                    .mul(&diag.apply(&w).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn projective_lift_matches_exact() {
        let text = "\
semiring zmax
problem matrix
letters 2
dim 2
gen 1
0 1
-inf 2
gen 2
1 0
2 -inf
target
1 2
0 3
";
        let i = parse_instance(text).unwrap();
        let lift = projective_lift(&i).unwrap();
        assert_eq!(lift.lifted.dim(), 3);
        for w in crate::witness::all_words(2, 5) {
            assert_eq!(
                i.evaluate(&w).unwrap(),
                projective_satisfied(&lift.lifted, &w).unwrap(),
                "word {w}"
            );
        }
    }

    #[test]
    fn cassaigne_dimension_chain() {
        for r in 2..=7usize {
            let gens = (0..r)
                .map(|k| Mat::from_fn(Nat, 3, 3, |a, b| Value::int(((a + b + k) % 2) as i64)))
                .collect();
            let i = Instance::new(
                Nat,
                WordMode::Plus,
                Payload::Corner {
                    morphism: Morphism::new(gens).unwrap(),
                    gamma: Value::int(0),
                },
            )
            .unwrap();
            let b = cassaigne_chain(&i).unwrap();
            assert_eq!(b.dims.n_in, 3);
            assert_eq!(b.dims.n_out, 3 * r + 2);
            assert_eq!(b.dims.r_out, 2);
            for s in &b.subs {
                assert_eq!(s.kind(), crate::instance::ProblemKind::Corner);
                let Payload::Corner { gamma, .. } = &s.payload else { panic!() };
                assert_eq!(gamma, &Value::int(0));
            }
        }
    }

    #[test]
    fn cassaigne_rejects_nonzero_gamma() {
        let gens = vec![Mat::identity(Nat, 2), Mat::identity(Nat, 2)];
        let i = Instance::new(
            Nat,
            WordMode::Plus,
            Payload::Corner {
                morphism: Morphism::new(gens).unwrap(),
                gamma: Value::int(1),
            },
        )
        .unwrap();
        assert!(matches!(cassaigne_chain(&i), Err(ReductionError::Unsupported(_))));
    }
}
