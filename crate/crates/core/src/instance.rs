//! Problem instances, their canonical text format, decisions, word-mode
//! conversions, and the corner/scalar equivalence.

use std::fmt;

use crate::bundle::{ReductionBundle, ReductionKind, WitnessMap};
use crate::error::{AlgebraError, ParseError, ReductionError};
use crate::matrix::{Mat, Morphism};
use crate::value::{negate_value, SemiringId, Value};
use crate::witness::Witness;

pub type VMat = Mat<SemiringId>;
pub type VMorphism = Morphism<SemiringId>;

/// Whether the quantified word ranges over `Σ⁺` (nonempty) or `Σ*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordMode {
    Plus,
    Star,
}

impl WordMode {
    pub fn name(self) -> &'static str {
        match self {
            WordMode::Plus => "plus",
            WordMode::Star => "star",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    Matrix,
    Vector,
    Scalar,
    Corner,
}

impl ProblemKind {
    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Matrix => "matrix",
            ProblemKind::Vector => "vector",
            ProblemKind::Scalar => "scalar",
            ProblemKind::Corner => "corner",
        }
    }
}

/// The data of one reachability problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    /// Is some product of generators equal to one of the targets?
    Matrix {
        morphism: VMorphism,
        targets: Vec<VMat>,
    },
    /// Does some product map `alpha` onto `eta` by right multiplication?
    Vector {
        morphism: VMorphism,
        alpha: VMat,
        eta: VMat,
    },
    /// Does `alpha · μ(w) · beta` attain `gamma`?
    Scalar {
        morphism: VMorphism,
        alpha: VMat,
        beta: VMat,
        gamma: Value,
    },
    /// Does the `(1, n)` entry of some product equal `gamma`?
    Corner { morphism: VMorphism, gamma: Value },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub semiring: SemiringId,
    pub mode: WordMode,
    pub payload: Payload,
}

/// Outcome of a decision procedure or bounded search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Satisfiable, with a word that re-evaluates exactly.
    Yes(Witness),
    /// Unsatisfiable. `heuristic` marks the non-certified outcome of the
    /// empirical one-generator period detection.
    No { heuristic: bool },
    /// The search bound was exhausted without an answer.
    Unknown(usize),
    /// No decision procedure applies.
    Unsupported(String),
}

impl Decision {
    pub fn no() -> Decision {
        Decision::No { heuristic: false }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Decision::Yes(w) => Some(w),
            _ => None,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decision::Yes(_) => write!(f, "YES"),
            Decision::No { heuristic: false } => write!(f, "NO"),
            Decision::No { heuristic: true } => write!(f, "NO (heuristic)"),
            Decision::Unknown(_) => write!(f, "UNKNOWN"),
            Decision::Unsupported(_) => write!(f, "UNSUPPORTED"),
        }
    }
}

impl Instance {
    /// Validates shapes and carriers and canonicalizes target sets.
    pub fn new(semiring: SemiringId, mode: WordMode, payload: Payload) -> Result<Instance, AlgebraError> {
        let mut inst = Instance { semiring, mode, payload };
        let n = inst.dim();
        if inst.morphism().semiring() != &semiring {
            return Err(AlgebraError::SemiringMismatch);
        }
        match &mut inst.payload {
            Payload::Matrix { targets, .. } => {
                if targets.is_empty() {
                    return Err(AlgebraError::ShapeMismatch("at least one target required".into()));
                }
                for t in targets.iter() {
                    if t.rows() != n || t.cols() != n {
                        return Err(AlgebraError::ShapeMismatch(format!(
                            "target must be {n}x{n}, got {}x{}",
                            t.rows(),
                            t.cols()
                        )));
                    }
                    if t.semiring() != &semiring {
                        return Err(AlgebraError::SemiringMismatch);
                    }
                }
                targets.sort();
                targets.dedup();
            }
            Payload::Vector { alpha, eta, .. } => {
                for (name, v) in [("alpha", &*alpha), ("eta", &*eta)] {
                    if v.rows() != 1 || v.cols() != n {
                        return Err(AlgebraError::ShapeMismatch(format!(
                            "{name} must be 1x{n}, got {}x{}",
                            v.rows(),
                            v.cols()
                        )));
                    }
                    if v.semiring() != &semiring {
                        return Err(AlgebraError::SemiringMismatch);
                    }
                }
            }
            Payload::Scalar { alpha, beta, gamma, .. } => {
                if alpha.rows() != 1 || alpha.cols() != n {
                    return Err(AlgebraError::ShapeMismatch(format!(
                        "alpha must be 1x{n}, got {}x{}",
                        alpha.rows(),
                        alpha.cols()
                    )));
                }
                if beta.rows() != n || beta.cols() != 1 {
                    return Err(AlgebraError::ShapeMismatch(format!(
                        "beta must be {n}x1, got {}x{}",
                        beta.rows(),
                        beta.cols()
                    )));
                }
                if alpha.semiring() != &semiring || beta.semiring() != &semiring {
                    return Err(AlgebraError::SemiringMismatch);
                }
                crate::value::check_carrier(semiring, gamma).map_err(|_| {
                    AlgebraError::ShapeMismatch(format!("gamma {gamma} outside the carrier"))
                })?;
            }
            Payload::Corner { gamma, .. } => {
                crate::value::check_carrier(semiring, gamma).map_err(|_| {
                    AlgebraError::ShapeMismatch(format!("gamma {gamma} outside the carrier"))
                })?;
            }
        }
        Ok(inst)
    }

    pub fn kind(&self) -> ProblemKind {
        match &self.payload {
            Payload::Matrix { .. } => ProblemKind::Matrix,
            Payload::Vector { .. } => ProblemKind::Vector,
            Payload::Scalar { .. } => ProblemKind::Scalar,
            Payload::Corner { .. } => ProblemKind::Corner,
        }
    }

    pub fn morphism(&self) -> &VMorphism {
        match &self.payload {
            Payload::Matrix { morphism, .. }
            | Payload::Vector { morphism, .. }
            | Payload::Scalar { morphism, .. }
            | Payload::Corner { morphism, .. } => morphism,
        }
    }

    /// Alphabet size `r`.
    pub fn letters(&self) -> usize {
        self.morphism().r()
    }

    /// Matrix dimension `n`.
    pub fn dim(&self) -> usize {
        self.morphism().n()
    }

    /// Evaluates the defining equation on a word. In plus mode the empty
    /// word never satisfies.
    pub fn evaluate(&self, w: &Witness) -> Result<bool, AlgebraError> {
        if self.mode == WordMode::Plus && w.is_empty() {
            return Ok(false);
        }
        let image = self.morphism().apply(w)?;
        Ok(match &self.payload {
            Payload::Matrix { targets, .. } => targets.contains(&image),
            Payload::Vector { alpha, eta, .. } => &alpha.mul(&image)? == eta,
            Payload::Scalar { alpha, beta, gamma, .. } => {
                alpha.mul(&image)?.mul(beta)?.get(0, 0) == gamma
            }
            Payload::Corner { gamma, .. } => image.get(0, self.dim() - 1) == gamma,
        })
    }

    /// The sign-change isomorphism between `zmax` and `zmin`, applied
    /// entrywise to the whole instance.
    pub fn negate(&self) -> Result<Instance, ReductionError> {
        let target = match self.semiring {
            SemiringId::Zmax => SemiringId::Zmin,
            SemiringId::Zmin => SemiringId::Zmax,
            other => {
                return Err(ReductionError::Unsupported(format!(
                    "sign-change conversion applies to zmax and zmin, not {}",
                    other.name()
                )))
            }
        };
        let neg_mat = |m: &VMat| -> Result<VMat, ReductionError> {
            let mut entries = Vec::with_capacity(m.entries().len());
            for e in m.entries() {
                entries.push(negate_value(e).map_err(|e| ReductionError::Unsupported(e.to_string()))?);
            }
            Mat::new(target, m.rows(), m.cols(), entries).map_err(ReductionError::Algebra)
        };
        let neg_morph = |mu: &VMorphism| -> Result<VMorphism, ReductionError> {
            let gens = mu
                .generators()
                .iter()
                .map(&neg_mat)
                .collect::<Result<Vec<_>, _>>()?;
            Morphism::new(gens).map_err(ReductionError::Algebra)
        };
        let payload = match &self.payload {
            Payload::Matrix { morphism, targets } => Payload::Matrix {
                morphism: neg_morph(morphism)?,
                targets: targets.iter().map(&neg_mat).collect::<Result<Vec<_>, _>>()?,
            },
            Payload::Vector { morphism, alpha, eta } => Payload::Vector {
                morphism: neg_morph(morphism)?,
                alpha: neg_mat(alpha)?,
                eta: neg_mat(eta)?,
            },
            Payload::Scalar { morphism, alpha, beta, gamma } => Payload::Scalar {
                morphism: neg_morph(morphism)?,
                alpha: neg_mat(alpha)?,
                beta: neg_mat(beta)?,
                gamma: negate_value(gamma).map_err(|e| ReductionError::Unsupported(e.to_string()))?,
            },
            Payload::Corner { morphism, gamma } => Payload::Corner {
                morphism: neg_morph(morphism)?,
                gamma: negate_value(gamma).map_err(|e| ReductionError::Unsupported(e.to_string()))?,
            },
        };
        Instance::new(target, self.mode, payload).map_err(ReductionError::Algebra)
    }
}

/// A scalar instance is a special case of a corner instance two dimensions
/// higher: the corner of the extended morphism evaluates the series.
pub fn scalar_to_corner(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    let Payload::Scalar { morphism, alpha, beta, gamma } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "scalar", got: i.kind().name() });
    };
    if i.mode != WordMode::Plus {
        return Err(ReductionError::NeedsPlusMode);
    }
    let sr = i.semiring;
    let n = i.dim();
    let gens = morphism
        .generators()
        .iter()
        .map(|g| -> Result<VMat, AlgebraError> {
            let ag = alpha.mul(g)?;
            let gb = g.mul(beta)?;
            let agb = ag.mul(beta)?;
            let mut m = Mat::zeros(sr, n + 2, n + 2);
            m.paste(0, 1, &ag);
            m.paste(0, n + 1, &agb);
            m.paste(1, 1, g);
            m.paste(1, n + 1, &gb);
            Ok(m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let sub = Instance::new(
        sr,
        WordMode::Plus,
        Payload::Corner {
            morphism: Morphism::new(gens)?,
            gamma: gamma.clone(),
        },
    )?;
    Ok(ReductionBundle::new(
        ReductionKind::ScalarToCorner,
        i.clone(),
        vec![sub],
        None,
        WitnessMap::Identity,
    ))
}

/// A corner instance is the scalar instance with unit coordinate vectors.
pub fn corner_to_scalar(i: &Instance) -> Result<ReductionBundle, ReductionError> {
    let Payload::Corner { morphism, gamma } = &i.payload else {
        return Err(ReductionError::WrongKind { expected: "corner", got: i.kind().name() });
    };
    let sub = Instance::new(
        i.semiring,
        i.mode,
        Payload::Scalar {
            morphism: morphism.clone(),
            alpha: unit_row(i.semiring, i.dim(), 0),
            beta: unit_col(i.semiring, i.dim(), i.dim() - 1),
            gamma: gamma.clone(),
        },
    )?;
    Ok(ReductionBundle::new(
        ReductionKind::CornerToScalar,
        i.clone(),
        vec![sub],
        None,
        WitnessMap::Identity,
    ))
}

pub(crate) fn unit_row(sr: SemiringId, n: usize, at: usize) -> VMat {
    let mut v = Mat::zeros(sr, 1, n);
    v.set(0, at, sr.one());
    v
}

pub(crate) fn unit_col(sr: SemiringId, n: usize, at: usize) -> VMat {
    let mut v = Mat::zeros(sr, n, 1);
    v.set(at, 0, sr.one());
    v
}

/// Converts between the `Σ⁺` and `Σ*` forms of a problem.
///
/// The result is a disjunctive bundle: the original answer is the immediate
/// decision (when present) or the OR of the sub-instance answers.
pub fn plus_star_convert(i: &Instance, to: WordMode) -> Result<ReductionBundle, ReductionError> {
    let kind = match to {
        WordMode::Star => ReductionKind::PlusToStar,
        WordMode::Plus => ReductionKind::StarToPlus,
    };
    if i.mode == to {
        return Ok(ReductionBundle::new(
            kind,
            i.clone(),
            vec![i.clone()],
            None,
            WitnessMap::Identity,
        ));
    }
    match to {
        WordMode::Star => plus_to_star(i, kind),
        WordMode::Plus => star_to_plus(i, kind),
    }
}

fn plus_to_star(i: &Instance, kind: ReductionKind) -> Result<ReductionBundle, ReductionError> {
    let sr = i.semiring;
    let r = i.letters();
    match &i.payload {
        // ∃w ∈ Σ⁺: αμ(w) = η  <=>  ∃a: ∃z ∈ Σ*: (αμ(a))μ(z) = η
        Payload::Vector { morphism, alpha, eta } => {
            let subs = (0..r)
                .map(|j| {
                    Instance::new(
                        sr,
                        WordMode::Star,
                        Payload::Vector {
                            morphism: morphism.clone(),
                            alpha: alpha.mul(morphism.generator(j))?,
                            eta: eta.clone(),
                        },
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ReductionBundle::new(kind, i.clone(), subs, None, WitnessMap::SplitFirstLetter { r }))
        }
        // The series a⁻¹s is recognized by (αμ(a), μ, β).
        Payload::Scalar { morphism, alpha, beta, gamma } => {
            let subs = (0..r)
                .map(|j| {
                    Instance::new(
                        sr,
                        WordMode::Star,
                        Payload::Scalar {
                            morphism: morphism.clone(),
                            alpha: alpha.mul(morphism.generator(j))?,
                            beta: beta.clone(),
                            gamma: gamma.clone(),
                        },
                    )
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(ReductionBundle::new(kind, i.clone(), subs, None, WitnessMap::SplitFirstLetter { r }))
        }
        Payload::Matrix { morphism, targets } => {
            if targets.iter().any(|t| t.is_identity()) {
                // μ(ε) = I hits the identity target; lift by one dimension
                // so that the empty word no longer matches any target.
                let pad = Mat::zeros(sr, 1, 1);
                let gens = morphism
                    .generators()
                    .iter()
                    .map(|g| Mat::block_diag(&[g.clone(), pad.clone()]))
                    .collect::<Result<Vec<_>, _>>()?;
                let lifted_targets = targets
                    .iter()
                    .map(|t| Mat::block_diag(&[t.clone(), pad.clone()]))
                    .collect::<Result<Vec<_>, _>>()?;
                let sub = Instance::new(
                    sr,
                    WordMode::Star,
                    Payload::Matrix {
                        morphism: Morphism::new(gens)?,
                        targets: lifted_targets,
                    },
                )?;
                Ok(ReductionBundle::new(kind, i.clone(), vec![sub], None, WitnessMap::Identity))
            } else {
                // μ(ε) = I differs from every target: the modes coincide.
                let sub = Instance { mode: WordMode::Star, ..i.clone() };
                Ok(ReductionBundle::new(kind, i.clone(), vec![sub], None, WitnessMap::Identity))
            }
        }
        Payload::Corner { gamma, .. } => {
            if i.dim() >= 2 && gamma != &sr.zero() {
                // μ(ε)_{1n} = 0 ≠ γ: the modes coincide.
                let sub = Instance { mode: WordMode::Star, ..i.clone() };
                Ok(ReductionBundle::new(kind, i.clone(), vec![sub], None, WitnessMap::Identity))
            } else {
                // Route through the scalar formulation, then convert that.
                let scalar = corner_to_scalar(i)?.subs[0].clone();
                let mut bundle = plus_to_star(&scalar, kind)?;
                bundle.original = i.clone();
                Ok(bundle)
            }
        }
    }
}

fn star_to_plus(i: &Instance, kind: ReductionKind) -> Result<ReductionBundle, ReductionError> {
    let sr = i.semiring;
    let plus_sub = || Instance { mode: WordMode::Plus, ..i.clone() };
    let immediate = |orig: &Instance| {
        ReductionBundle::new(
            kind.clone(),
            orig.clone(),
            Vec::new(),
            Some(Decision::Yes(Witness::empty())),
            WitnessMap::Identity,
        )
    };
    match &i.payload {
        Payload::Vector { alpha, eta, .. } => {
            if alpha == eta {
                Ok(immediate(i))
            } else {
                Ok(ReductionBundle::new(kind, i.clone(), vec![plus_sub()], None, WitnessMap::Identity))
            }
        }
        Payload::Scalar { alpha, beta, gamma, .. } => {
            let at_empty = alpha.mul(beta).map_err(ReductionError::Algebra)?;
            if at_empty.get(0, 0) == gamma {
                Ok(immediate(i))
            } else {
                Ok(ReductionBundle::new(kind, i.clone(), vec![plus_sub()], None, WitnessMap::Identity))
            }
        }
        Payload::Matrix { targets, .. } => {
            if targets.iter().any(|t| t.is_identity()) {
                Ok(immediate(i))
            } else {
                Ok(ReductionBundle::new(kind, i.clone(), vec![plus_sub()], None, WitnessMap::Identity))
            }
        }
        Payload::Corner { gamma, .. } => {
            if i.dim() >= 2 {
                if gamma == &sr.zero() {
                    Ok(immediate(i))
                } else {
                    Ok(ReductionBundle::new(kind, i.clone(), vec![plus_sub()], None, WitnessMap::Identity))
                }
            } else {
                let scalar = corner_to_scalar(i)?.subs[0].clone();
                let mut bundle = star_to_plus(&scalar, kind)?;
                bundle.original = i.clone();
                Ok(bundle)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
struct Tok {
    text: String,
    line: usize,
    col: usize,
}

fn tokenize(text: &str) -> Vec<Tok> {
    let mut toks = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        };
        let mut col = 0;
        for piece in body.split_whitespace() {
            let at = body[col..].find(piece).unwrap() + col;
            toks.push(Tok {
                text: piece.to_string(),
                line: ln + 1,
                col: at + 1,
            });
            col = at + piece.len();
        }
    }
    toks
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next_tok(&mut self, what: &str) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or_else(|| {
            let (line, col) = self
                .toks
                .last()
                .map(|t| (t.line, t.col + t.text.len()))
                .unwrap_or((1, 1));
            ParseError::Syntax {
                line,
                col,
                msg: format!("unexpected end of input, expected {what}"),
            }
        })?;
        self.pos += 1;
        Ok(t)
    }

    fn next_usize(&mut self, what: &str) -> Result<usize, ParseError> {
        let t = self.next_tok(what)?;
        t.text.parse::<usize>().map_err(|_| ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: format!("expected {what}, got `{}`", t.text),
        })
    }

    fn next_value(&mut self, sr: SemiringId) -> Result<Value, ParseError> {
        let t = self.next_tok("an element token")?;
        let v: Value = t.text.parse().map_err(|msg| ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg,
        })?;
        if !sr.contains(&v) {
            return Err(ParseError::Carrier {
                line: t.line,
                col: t.col,
                msg: format!("`{}` is not in the carrier of {}", t.text, sr.name()),
            });
        }
        Ok(v)
    }

    fn next_matrix(&mut self, sr: SemiringId, rows: usize, cols: usize) -> Result<VMat, ParseError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            entries.push(self.next_value(sr)?);
        }
        Mat::new(sr, rows, cols, entries).map_err(|e| ParseError::Shape(e.to_string()))
    }
}

/// Parses the plain-text instance format.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut p = Parser { toks: tokenize(text), pos: 0 };
    let mut semiring: Option<SemiringId> = None;
    let mut kind: Option<ProblemKind> = None;
    let mut mode: Option<WordMode> = None;
    let mut letters: Option<usize> = None;
    let mut dim: Option<usize> = None;
    let mut gens: Vec<Option<VMat>> = Vec::new();
    let mut alpha: Option<VMat> = None;
    let mut beta: Option<VMat> = None;
    let mut eta: Option<VMat> = None;
    let mut gamma: Option<Value> = None;
    let mut targets: Vec<VMat> = Vec::new();

    let need_sr = |sr: &Option<SemiringId>| {
        sr.ok_or_else(|| ParseError::Validation("semiring must be declared first".into()))
    };
    let need_dim = |d: &Option<usize>| {
        d.ok_or_else(|| ParseError::Validation("dim must be declared before matrix data".into()))
    };

    while let Some(t) = p.peek() {
        let t = t.clone();
        p.pos += 1;
        match t.text.as_str() {
            "semiring" => {
                let name = p.next_tok("a semiring id")?;
                let sr = SemiringId::parse(&name.text)
                    .ok_or_else(|| ParseError::UnknownSemiring(name.text.clone()))?;
                if semiring.replace(sr).is_some() {
                    return Err(ParseError::Validation("duplicate `semiring`".into()));
                }
            }
            "problem" => {
                let name = p.next_tok("matrix|vector|scalar|corner")?;
                let k = match name.text.as_str() {
                    "matrix" => ProblemKind::Matrix,
                    "vector" => ProblemKind::Vector,
                    "scalar" => ProblemKind::Scalar,
                    "corner" => ProblemKind::Corner,
                    other => {
                        return Err(ParseError::Syntax {
                            line: name.line,
                            col: name.col,
                            msg: format!("unknown problem kind `{other}`"),
                        })
                    }
                };
                if kind.replace(k).is_some() {
                    return Err(ParseError::Validation("duplicate `problem`".into()));
                }
            }
            "words" => {
                let name = p.next_tok("plus|star")?;
                let m = match name.text.as_str() {
                    "plus" => WordMode::Plus,
                    "star" => WordMode::Star,
                    other => {
                        return Err(ParseError::Syntax {
                            line: name.line,
                            col: name.col,
                            msg: format!("unknown word mode `{other}`"),
                        })
                    }
                };
                if mode.replace(m).is_some() {
                    return Err(ParseError::Validation("duplicate `words`".into()));
                }
            }
            "letters" => {
                let r = p.next_usize("the alphabet size")?;
                if r == 0 {
                    return Err(ParseError::Validation("letters must be at least 1".into()));
                }
                if letters.replace(r).is_some() {
                    return Err(ParseError::Validation("duplicate `letters`".into()));
                }
                gens = vec![None; r];
            }
            "dim" => {
                let n = p.next_usize("the matrix dimension")?;
                if n == 0 {
                    return Err(ParseError::Validation("dim must be at least 1".into()));
                }
                if dim.replace(n).is_some() {
                    return Err(ParseError::Validation("duplicate `dim`".into()));
                }
            }
            "gen" => {
                let sr = need_sr(&semiring)?;
                let n = need_dim(&dim)?;
                let r = letters
                    .ok_or_else(|| ParseError::Validation("letters must be declared before `gen`".into()))?;
                let idx = p.next_usize("a generator index")?;
                if idx == 0 || idx > r {
                    return Err(ParseError::Validation(format!(
                        "generator index {idx} out of range 1..={r}"
                    )));
                }
                let m = p.next_matrix(sr, n, n)?;
                if gens[idx - 1].replace(m).is_some() {
                    return Err(ParseError::Validation(format!("duplicate `gen {idx}`")));
                }
            }
            "alpha" => {
                let sr = need_sr(&semiring)?;
                let n = need_dim(&dim)?;
                let m = p.next_matrix(sr, 1, n)?;
                if alpha.replace(m).is_some() {
                    return Err(ParseError::Validation("duplicate `alpha`".into()));
                }
            }
            "beta" => {
                let sr = need_sr(&semiring)?;
                let n = need_dim(&dim)?;
                let flat = p.next_matrix(sr, 1, n)?;
                let m = Mat::new(sr, n, 1, flat.entries().to_vec())
                    .map_err(|e| ParseError::Shape(e.to_string()))?;
                if beta.replace(m).is_some() {
                    return Err(ParseError::Validation("duplicate `beta`".into()));
                }
            }
            "eta" => {
                let sr = need_sr(&semiring)?;
                let n = need_dim(&dim)?;
                let m = p.next_matrix(sr, 1, n)?;
                if eta.replace(m).is_some() {
                    return Err(ParseError::Validation("duplicate `eta`".into()));
                }
            }
            "gamma" => {
                let sr = need_sr(&semiring)?;
                let v = p.next_value(sr)?;
                if gamma.replace(v).is_some() {
                    return Err(ParseError::Validation("duplicate `gamma`".into()));
                }
            }
            "target" => {
                let sr = need_sr(&semiring)?;
                let n = need_dim(&dim)?;
                targets.push(p.next_matrix(sr, n, n)?);
            }
            other => {
                return Err(ParseError::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: format!("unexpected token `{other}`"),
                });
            }
        }
    }

    let semiring = semiring.ok_or_else(|| ParseError::Validation("missing `semiring`".into()))?;
    let kind = kind.ok_or_else(|| ParseError::Validation("missing `problem`".into()))?;
    let mode = mode.unwrap_or(WordMode::Plus);
    letters.ok_or_else(|| ParseError::Validation("missing `letters`".into()))?;
    dim.ok_or_else(|| ParseError::Validation("missing `dim`".into()))?;
    let gens: Vec<VMat> = gens
        .into_iter()
        .enumerate()
        .map(|(i, g)| g.ok_or_else(|| ParseError::Validation(format!("missing `gen {}`", i + 1))))
        .collect::<Result<_, _>>()?;
    let morphism = Morphism::new(gens).map_err(|e| ParseError::Shape(e.to_string()))?;

    let reject_unused = |field: Option<()>, name: &str| -> Result<(), ParseError> {
        match field {
            Some(()) => Err(ParseError::Validation(format!(
                "`{name}` is not part of a {} problem",
                kind.name()
            ))),
            None => Ok(()),
        }
    };
    let payload = match kind {
        ProblemKind::Matrix => {
            reject_unused(alpha.map(|_| ()), "alpha")?;
            reject_unused(beta.map(|_| ()), "beta")?;
            reject_unused(eta.map(|_| ()), "eta")?;
            reject_unused(gamma.map(|_| ()), "gamma")?;
            if targets.is_empty() {
                return Err(ParseError::Validation("matrix problem needs at least one `target`".into()));
            }
            Payload::Matrix { morphism, targets }
        }
        ProblemKind::Vector => {
            reject_unused(beta.map(|_| ()), "beta")?;
            reject_unused(gamma.map(|_| ()), "gamma")?;
            reject_unused(targets.first().map(|_| ()), "target")?;
            Payload::Vector {
                morphism,
                alpha: alpha.ok_or_else(|| ParseError::Validation("missing `alpha`".into()))?,
                eta: eta.ok_or_else(|| ParseError::Validation("missing `eta`".into()))?,
            }
        }
        ProblemKind::Scalar => {
            reject_unused(eta.map(|_| ()), "eta")?;
            reject_unused(targets.first().map(|_| ()), "target")?;
            Payload::Scalar {
                morphism,
                alpha: alpha.ok_or_else(|| ParseError::Validation("missing `alpha`".into()))?,
                beta: beta.ok_or_else(|| ParseError::Validation("missing `beta`".into()))?,
                gamma: gamma.ok_or_else(|| ParseError::Validation("missing `gamma`".into()))?,
            }
        }
        ProblemKind::Corner => {
            reject_unused(alpha.map(|_| ()), "alpha")?;
            reject_unused(beta.map(|_| ()), "beta")?;
            reject_unused(eta.map(|_| ()), "eta")?;
            reject_unused(targets.first().map(|_| ()), "target")?;
            Payload::Corner {
                morphism,
                gamma: gamma.ok_or_else(|| ParseError::Validation("missing `gamma`".into()))?,
            }
        }
    };
    Instance::new(semiring, mode, payload).map_err(|e| ParseError::Shape(e.to_string()))
}

/// Canonical serialization; `parse_instance` of the output reproduces the
/// instance exactly.
pub fn serialize_instance(i: &Instance) -> String {
    let mut out = String::new();
    let mu = i.morphism();
    out.push_str(&format!("semiring {}\n", i.semiring.name()));
    out.push_str(&format!("problem {}\n", i.kind().name()));
    out.push_str(&format!("words {}\n", i.mode.name()));
    out.push_str(&format!("letters {}\n", mu.r()));
    out.push_str(&format!("dim {}\n", mu.n()));
    let push_rows = |out: &mut String, m: &VMat| {
        for r in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    };
    for (k, g) in mu.generators().iter().enumerate() {
        out.push_str(&format!("gen {}\n", k + 1));
        push_rows(&mut out, g);
    }
    match &i.payload {
        Payload::Matrix { targets, .. } => {
            for t in targets {
                out.push_str("target\n");
                push_rows(&mut out, t);
            }
        }
        Payload::Vector { alpha, eta, .. } => {
            out.push_str("alpha ");
            out.push_str(&row_tokens(alpha));
            out.push('\n');
            out.push_str("eta ");
            out.push_str(&row_tokens(eta));
            out.push('\n');
        }
        Payload::Scalar { alpha, beta, gamma, .. } => {
            out.push_str("alpha ");
            out.push_str(&row_tokens(alpha));
            out.push('\n');
            out.push_str("beta ");
            let col: Vec<String> = (0..beta.rows()).map(|r| beta.get(r, 0).to_string()).collect();
            out.push_str(&col.join(" "));
            out.push('\n');
            out.push_str(&format!("gamma {gamma}\n"));
        }
        Payload::Corner { gamma, .. } => {
            out.push_str(&format!("gamma {gamma}\n"));
        }
    }
    out
}

fn row_tokens(m: &VMat) -> String {
    m.entries()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const NMIN_SCALAR: &str = "\
# scalar reachability over the tropical semiring
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
    fn parse_scalar_file() {
        let i = parse_instance(NMIN_SCALAR).unwrap();
        assert_eq!(i.semiring, SemiringId::Nmin);
        assert_eq!(i.kind(), ProblemKind::Scalar);
        assert_eq!(i.mode, WordMode::Plus);
        assert_eq!(i.letters(), 2);
        assert_eq!(i.dim(), 1);
        assert!(i.evaluate(&Witness::from_letters0(vec![0, 0, 1])).unwrap());
        assert!(!i.evaluate(&Witness::from_letters0(vec![0, 1])).unwrap());
    }

    #[test]
    fn round_trip_identity() {
        let i = parse_instance(NMIN_SCALAR).unwrap();
        let text = serialize_instance(&i);
        let j = parse_instance(&text).unwrap();
        assert_eq!(i, j);
        // serialization is canonical: a second round trip is textually stable
        assert_eq!(text, serialize_instance(&j));
    }

    #[test]
    fn omega_needs_leung() {
        let bad = "semiring nat\nproblem corner\nletters 1\ndim 1\ngen 1\nomega\ngamma 0\n";
        match parse_instance(bad) {
            Err(ParseError::Carrier { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected carrier violation, got {other:?}"),
        }
    }

    #[test]
    fn gen_index_out_of_range() {
        let bad = "semiring nmin\nproblem corner\nletters 2\ndim 1\ngen 3\n0\ngamma 0\n";
        assert!(matches!(parse_instance(bad), Err(ParseError::Validation(_))));
    }

    #[test]
    fn unknown_semiring_is_distinct() {
        let bad = "semiring qmax\nproblem corner\nletters 1\ndim 1\ngen 1\n0\ngamma 0\n";
        assert!(matches!(parse_instance(bad), Err(ParseError::UnknownSemiring(_))));
    }

    #[test]
    fn multi_target_round_trip() {
        let text = "\
semiring nat
problem matrix
words star
letters 1
dim 1
gen 1
2
target
4
target
8
";
        let i = parse_instance(text).unwrap();
        let Payload::Matrix { targets, .. } = &i.payload else { panic!() };
        assert_eq!(targets.len(), 2);
        assert_eq!(parse_instance(&serialize_instance(&i)).unwrap(), i);
        let out = serialize_instance(&i);
        assert_eq!(out.matches("target").count(), 2);
    }

    #[test]
    fn plus_mode_rejects_empty_word() {
        let i = parse_instance(NMIN_SCALAR).unwrap();
        assert!(!i.evaluate(&Witness::empty()).unwrap());
    }

    #[test]
    fn scalar_to_corner_tracks_the_series() {
        // nmin, n=1, gens (2), (3), α=β=0: the (1, n+2) entry of the
        // extended morphism evaluates the series, for all |w| <= 4.
        let i = parse_instance(NMIN_SCALAR).unwrap();
        let b = scalar_to_corner(&i).unwrap();
        let sub = &b.subs[0];
        assert_eq!(sub.dim(), i.dim() + 2);
        let Payload::Scalar { morphism, alpha, beta, .. } = &i.payload else { panic!() };
        for w in crate::witness::all_words(2, 4) {
            if w.is_empty() {
                continue;
            }
            let series = alpha
                .mul(&morphism.apply(&w).unwrap())
                .unwrap()
                .mul(beta)
                .unwrap();
            let corner = sub.morphism().apply(&w).unwrap();
            assert_eq!(corner.get(0, sub.dim() - 1), series.get(0, 0), "w = {w}");
        }
    }

    #[test]
    fn corner_scalar_equivalence_round_trip() {
        // corner -> scalar -> corner preserves answers and the value γ.
        let text = "\
semiring nmin
problem corner
letters 2
dim 2
gen 1
0 1
2 +inf
gen 2
1 0
0 2
gamma 2
";
        let corner = parse_instance(text).unwrap();
        let scalar = corner_to_scalar(&corner).unwrap().subs[0].clone();
        // n = 2: α = (1, 0), β = (0, 1)ᵀ in semiring notation
        let Payload::Scalar { alpha, beta, gamma, .. } = &scalar.payload else { panic!() };
        assert_eq!(alpha.entries(), &[SemiringId::Nmin.one(), SemiringId::Nmin.zero()]);
        assert_eq!(beta.entries(), &[SemiringId::Nmin.zero(), SemiringId::Nmin.one()]);
        assert_eq!(gamma, &Value::int(2));
        for w in crate::witness::all_words(2, 5) {
            assert_eq!(corner.evaluate(&w).unwrap(), scalar.evaluate(&w).unwrap());
        }
        let back = scalar_to_corner(&scalar).unwrap().subs[0].clone();
        let Payload::Corner { gamma, .. } = &back.payload else { panic!() };
        assert_eq!(gamma, &Value::int(2));
        for w in crate::witness::all_words(2, 5) {
            assert_eq!(corner.evaluate(&w).unwrap(), back.evaluate(&w).unwrap());
        }
    }

    #[test]
    fn corner_to_scalar_degenerate_dimension() {
        // n = 1: both coordinate vectors collapse to (1).
        let text = "semiring nat\nproblem corner\nletters 1\ndim 1\ngen 1\n2\ngamma 8\n";
        let corner = parse_instance(text).unwrap();
        let scalar = corner_to_scalar(&corner).unwrap().subs[0].clone();
        let Payload::Scalar { alpha, beta, .. } = &scalar.payload else { panic!() };
        assert_eq!(alpha.entries(), &[Value::int(1)]);
        assert_eq!(beta.entries(), &[Value::int(1)]);
        assert_eq!(scalar.dim(), 1);
    }

    #[test]
    fn convert_vector_plus_to_star() {
        let text = "\
semiring nmin
problem vector
letters 2
dim 1
gen 1
2
gen 2
3
alpha 0
eta 5
";
        let i = parse_instance(text).unwrap();
        let b = plus_star_convert(&i, WordMode::Star).unwrap();
        assert_eq!(b.subs.len(), 2);
        for sub in &b.subs {
            assert_eq!(sub.mode, WordMode::Star);
        }
        let Payload::Vector { alpha, .. } = &b.subs[1].payload else { panic!() };
        assert_eq!(alpha.entries(), &[Value::int(3)]);
    }

    #[test]
    fn convert_matrix_identity_target() {
        // M = I in plus mode lifts the dimension by one.
        let text = "\
semiring nmin
problem matrix
letters 1
dim 2
gen 1
+inf 0
0 +inf
target
0 +inf
+inf 0
";
        let i = parse_instance(text).unwrap();
        let b = plus_star_convert(&i, WordMode::Star).unwrap();
        assert_eq!(b.subs.len(), 1);
        assert_eq!(b.subs[0].dim(), 3);
        // the lifted instance answers the original plus-mode question
        assert!(b.subs[0].evaluate(&Witness::from_letters0(vec![0, 0])).unwrap());
        assert!(!b.subs[0].evaluate(&Witness::empty()).unwrap());
    }

    #[test]
    fn convert_star_with_trivial_answer() {
        let text = "\
semiring nmin
problem vector
words star
letters 1
dim 1
gen 1
2
alpha 4
eta 4
";
        let i = parse_instance(text).unwrap();
        let b = plus_star_convert(&i, WordMode::Plus).unwrap();
        assert_eq!(b.immediate, Some(Decision::Yes(Witness::empty())));
        assert!(b.subs.is_empty());
    }

    #[test]
    fn negate_swaps_zmax_zmin() {
        let text = "\
semiring zmax
problem vector
letters 1
dim 2
gen 1
0 1
-inf 2
alpha 0 0
eta 1 2
";
        let i = parse_instance(text).unwrap();
        let j = i.negate().unwrap();
        assert_eq!(j.semiring, SemiringId::Zmin);
        for w in crate::witness::all_words(1, 4) {
            assert_eq!(i.evaluate(&w).unwrap(), j.evaluate(&w).unwrap());
        }
        assert_eq!(j.negate().unwrap(), i);
    }
}
