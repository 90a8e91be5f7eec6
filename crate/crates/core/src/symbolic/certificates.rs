//! Equidecomposition certificates over the symbolic backends.
//!
//! A finite certificate lists pieces `P ⊆ left[i]`, `Q ⊆ right[j]` with
//! moves `(s, t)` such that `s⁻¹P = t⁻¹Q`. Pieces must partition every copy
//! on both sides. Schema certificates stand for infinitely many singleton
//! pieces moved by translations.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::dfa::{ReducedWordDfa, Word};
use super::ep::EpSet;
use crate::error::{Error, Result};

/// Set algebra with a group acting by translation.
pub trait Backend {
    type Set: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Elem: Clone + PartialEq + fmt::Debug + fmt::Display;
    fn identity() -> Self::Elem;
    fn inverse(g: &Self::Elem) -> Self::Elem;
    fn translate(set: &Self::Set, g: &Self::Elem) -> Self::Set;
    fn empty() -> Self::Set;
    fn union(a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn minus(a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn inter(a: &Self::Set, b: &Self::Set) -> Self::Set;
    fn is_empty(a: &Self::Set) -> bool;
}

/// Eventually periodic subsets of ℤ under translation.
#[derive(Clone, Copy, Debug)]
pub struct Zperiodic;

impl Backend for Zperiodic {
    type Set = EpSet;
    type Elem = i64;
    fn identity() -> i64 {
        0
    }
    fn inverse(g: &i64) -> i64 {
        -g
    }
    fn translate(set: &EpSet, g: &i64) -> EpSet {
        set.translate(*g)
    }
    fn empty() -> EpSet {
        EpSet::empty()
    }
    fn union(a: &EpSet, b: &EpSet) -> EpSet {
        a.union(b)
    }
    fn minus(a: &EpSet, b: &EpSet) -> EpSet {
        a.minus(b)
    }
    fn inter(a: &EpSet, b: &EpSet) -> EpSet {
        a.inter(b)
    }
    fn is_empty(a: &EpSet) -> bool {
        a.is_empty()
    }
}

/// Regular sets of reduced words under left multiplication.
#[derive(Clone, Copy, Debug)]
pub struct FreeGroup;

impl Backend for FreeGroup {
    type Set = ReducedWordDfa;
    type Elem = Word;
    fn identity() -> Word {
        Word::identity()
    }
    fn inverse(g: &Word) -> Word {
        g.inverse()
    }
    fn translate(set: &ReducedWordDfa, g: &Word) -> ReducedWordDfa {
        set.left_translate(g).expect("words are kept reduced")
    }
    fn empty() -> ReducedWordDfa {
        ReducedWordDfa::empty()
    }
    fn union(a: &ReducedWordDfa, b: &ReducedWordDfa) -> ReducedWordDfa {
        a.union(b)
    }
    fn minus(a: &ReducedWordDfa, b: &ReducedWordDfa) -> ReducedWordDfa {
        a.minus(b)
    }
    fn inter(a: &ReducedWordDfa, b: &ReducedWordDfa) -> ReducedWordDfa {
        a.inter(b)
    }
    fn is_empty(a: &ReducedWordDfa) -> bool {
        a.is_empty()
    }
}

pub struct Piece<B: Backend> {
    pub left_copy: usize,
    pub left: B::Set,
    pub right_copy: usize,
    pub right: B::Set,
    pub s: B::Elem,
    pub t: B::Elem,
}

pub struct FiniteCertificate<B: Backend> {
    pub left: Vec<B::Set>,
    pub right: Vec<B::Set>,
    pub pieces: Vec<Piece<B>>,
}

impl<B: Backend> Clone for Piece<B> {
    fn clone(&self) -> Self {
        Self {
            left_copy: self.left_copy,
            left: self.left.clone(),
            right_copy: self.right_copy,
            right: self.right.clone(),
            s: self.s.clone(),
            t: self.t.clone(),
        }
    }
}

impl<B: Backend> PartialEq for Piece<B> {
    fn eq(&self, o: &Self) -> bool {
        self.left_copy == o.left_copy
            && self.left == o.left
            && self.right_copy == o.right_copy
            && self.right == o.right
            && self.s == o.s
            && self.t == o.t
    }
}

impl<B: Backend> fmt::Debug for Piece<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Piece({}:{:?} -> {}:{:?} by ({}, {}))",
            self.left_copy, self.left, self.right_copy, self.right, self.s, self.t
        )
    }
}

impl<B: Backend> Clone for FiniteCertificate<B> {
    fn clone(&self) -> Self {
        Self {
            left: self.left.clone(),
            right: self.right.clone(),
            pieces: self.pieces.clone(),
        }
    }
}

impl<B: Backend> PartialEq for FiniteCertificate<B> {
    fn eq(&self, o: &Self) -> bool {
        self.left == o.left && self.right == o.right && self.pieces == o.pieces
    }
}

impl<B: Backend> fmt::Debug for FiniteCertificate<B> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteCertificate")
            .field("left", &self.left)
            .field("right", &self.right)
            .field("pieces", &self.pieces)
            .finish()
    }
}

/// Outcome of a verification, with one line per violated condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub ok: bool,
    pub diagnostics: Vec<String>,
}

impl Verification {
    fn from(diagnostics: Vec<String>) -> Self {
        Self {
            ok: diagnostics.is_empty(),
            diagnostics,
        }
    }
}

fn check_partition<B: Backend>(side: &str, wholes: &[B::Set], pieces: &[(usize, &B::Set)], out: &mut Vec<String>) {
    for (i, (copy, set)) in pieces.iter().enumerate() {
        if *copy >= wholes.len() {
            out.push(format!("piece {i}: {side} copy {copy} does not exist"));
        } else if !B::is_empty(&B::minus(set, &wholes[*copy])) {
            out.push(format!("piece {i}: not inside {side} copy {copy}"));
        }
    }
    for (c, whole) in wholes.iter().enumerate() {
        let mine: Vec<(usize, &B::Set)> = pieces
            .iter()
            .enumerate()
            .filter(|(_, (copy, _))| *copy == c)
            .map(|(i, (_, s))| (i, *s))
            .collect();
        for (x, (i, p)) in mine.iter().enumerate() {
            for (j, q) in &mine[x + 1..] {
                let both = B::inter(p, q);
                if !B::is_empty(&both) {
                    out.push(format!("{side} copy {c}: pieces {i} and {j} overlap on {both}"));
                }
            }
        }
        let covered = mine.iter().fold(B::empty(), |acc, (_, p)| B::union(&acc, p));
        let gap = B::minus(whole, &covered);
        if !B::is_empty(&gap) {
            out.push(format!("{side} copy {c}: pieces miss {gap}"));
        }
    }
}

impl<B: Backend> FiniteCertificate<B> {
    pub fn verify(&self) -> Verification {
        let mut out = Vec::new();
        let lefts: Vec<(usize, &B::Set)> = self.pieces.iter().map(|p| (p.left_copy, &p.left)).collect();
        let rights: Vec<(usize, &B::Set)> = self.pieces.iter().map(|p| (p.right_copy, &p.right)).collect();
        check_partition::<B>("left", &self.left, &lefts, &mut out);
        check_partition::<B>("right", &self.right, &rights, &mut out);
        for (i, p) in self.pieces.iter().enumerate() {
            let l = B::translate(&p.left, &B::inverse(&p.s));
            let r = B::translate(&p.right, &B::inverse(&p.t));
            if l != r {
                out.push(format!(
                    "piece {i}: move ({}, {}) fails: s⁻¹P = {l}, t⁻¹Q = {r}",
                    p.s, p.t
                ));
            }
        }
        Verification::from(out)
    }

    /// Replaces piece `i` by its parts inside and outside `x`.
    pub fn split(&self, i: usize, x: &B::Set) -> Self {
        let p = &self.pieces[i];
        let part = |left: B::Set| {
            let right = B::translate(&B::translate(&left, &B::inverse(&p.s)), &p.t);
            Piece {
                left,
                right,
                ..p.clone()
            }
        };
        let mut pieces = self.pieces.clone();
        pieces[i] = part(B::inter(&p.left, x));
        pieces.insert(i + 1, part(B::minus(&p.left, x)));
        Self { pieces, ..self.clone() }
    }
}

/// Catalog of infinite-piece schemas on ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Schema {
    /// Copy `i` of the left side goes to the single right copy by
    /// `n ↦ k·n + offsets[i]`, one singleton piece per point.
    Interleave { k: u64, offsets: Vec<i64> },
    /// The single left copy `ℤ` goes to the single right copy by identity
    /// below `from` and `n ↦ n + shift` from `from` on.
    TailShift { from: i64, shift: i64 },
}

pub const DEFAULT_WINDOW: i64 = 1000;

#[derive(Clone, Debug, PartialEq)]
pub struct SchemaCertificate {
    pub left: Vec<EpSet>,
    pub right: Vec<EpSet>,
    pub schema: Schema,
    pub window: i64,
}

impl SchemaCertificate {
    /// Image of `n` in left copy `copy`.
    fn map(&self, copy: usize, n: i64) -> i64 {
        match &self.schema {
            Schema::Interleave { k, offsets } => *k as i64 * n + offsets[copy],
            Schema::TailShift { from, shift } => {
                if n >= *from {
                    n + shift
                } else {
                    n
                }
            }
        }
    }

    fn symbolic(&self, out: &mut Vec<String>) {
        if self.right.len() != 1 {
            out.push("schema needs exactly one right copy".into());
            return;
        }
        match &self.schema {
            Schema::Interleave { k, offsets } => {
                if offsets.len() != self.left.len() {
                    out.push(format!("{} offsets for {} left copies", offsets.len(), self.left.len()));
                    return;
                }
                if *k == 0 {
                    out.push("interleave factor must be positive".into());
                    return;
                }
                let images: Vec<EpSet> = self
                    .left
                    .iter()
                    .zip(offsets)
                    .map(|(d, &c)| d.affine_image(*k, c).expect("k > 0"))
                    .collect();
                for i in 0..images.len() {
                    for j in i + 1..images.len() {
                        let both = images[i].inter(&images[j]);
                        if !both.is_empty() {
                            out.push(format!("copies {i} and {j} collide on {both}"));
                        }
                    }
                }
                let union = images.iter().fold(EpSet::empty(), |a, b| a.union(b));
                if union != self.right[0] {
                    out.push(format!("images cover {union}, right side is {}", self.right[0]));
                }
            }
            Schema::TailShift { from, shift } => {
                if self.left.len() != 1 || self.left[0] != EpSet::all() {
                    out.push("tail-shift needs the single left copy ℤ".into());
                    return;
                }
                if *shift < 0 {
                    out.push("tail-shift needs a nonnegative shift".into());
                    return;
                }
                let expected = EpSet::all().minus(&EpSet::finite(*from..*from + *shift));
                if self.right[0] != expected {
                    out.push(format!("image is {expected}, right side is {}", self.right[0]));
                }
            }
        }
    }

    /// Explicit enumeration on `[-window, window]`.
    fn window_check(&self, out: &mut Vec<String>) {
        let w = self.window;
        let reach = match &self.schema {
            Schema::Interleave { offsets, .. } => offsets.iter().map(|c| c.abs()).max().unwrap_or(0),
            Schema::TailShift { shift, .. } => shift.abs(),
        };
        let mut hit: HashMap<i64, (usize, i64)> = HashMap::new();
        for (copy, dom) in self.left.iter().enumerate() {
            for n in dom.window(-w - reach, w + reach) {
                let m = self.map(copy, n);
                if let Some(&(c0, n0)) = hit.get(&m) {
                    out.push(format!("window: {n0} (copy {c0}) and {n} (copy {copy}) both reach {m}"));
                    return;
                }
                hit.insert(m, (copy, n));
            }
        }
        let right = &self.right[0];
        for m in -w..=w {
            match (right.contains(m), hit.contains_key(&m)) {
                (true, false) => {
                    out.push(format!("window: {m} is not reached"));
                    return;
                }
                (false, true) => {
                    out.push(format!("window: {m} is reached but not on the right side"));
                    return;
                }
                _ => {}
            }
        }
    }

    pub fn verify(&self) -> Verification {
        let mut out = Vec::new();
        self.symbolic(&mut out);
        if self.right.len() == 1
            && matches!(&self.schema, Schema::Interleave { offsets, .. } if offsets.len() == self.left.len())
            || matches!(self.schema, Schema::TailShift { .. }) && self.left.len() == 1 && self.right.len() == 1
        {
            self.window_check(&mut out);
        }
        Verification::from(out)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate {
    Z(FiniteCertificate<Zperiodic>),
    F2(FiniteCertificate<FreeGroup>),
    Schema(SchemaCertificate),
}

impl Certificate {
    pub fn verify(&self) -> Verification {
        match self {
            Certificate::Z(c) => c.verify(),
            Certificate::F2(c) => c.verify(),
            Certificate::Schema(c) => c.verify(),
        }
    }

    fn sides(&self) -> (usize, usize) {
        match self {
            Certificate::Z(c) => (c.left.len(), c.right.len()),
            Certificate::F2(c) => (c.left.len(), c.right.len()),
            Certificate::Schema(c) => (c.left.len(), c.right.len()),
        }
    }

    fn copies_agree(&self) -> bool {
        fn all_eq<T: PartialEq>(v: &[T], w: &[T]) -> bool {
            v.iter().chain(w).all(|x| *x == v[0])
        }
        match self {
            Certificate::Z(c) => all_eq(&c.left, &c.right),
            Certificate::F2(c) => all_eq(&c.left, &c.right),
            Certificate::Schema(c) => all_eq(&c.left, &c.right),
        }
    }

    /// `2[E] = [E]` when a verified certificate matches one copy of a set
    /// with two copies of it.
    pub fn duplication_witness(&self) -> Option<String> {
        let (l, r) = self.sides();
        if self.verify().ok && l.min(r) == 1 && l.max(r) == 2 && self.copies_agree() {
            Some("2[E] = [E]: E is paradoxical".into())
        } else {
            None
        }
    }
}

/// A set in a certificate file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SetFile {
    /// Regular expression over `a, A, b, B`.
    Regex(String),
    Periodic(EpSet),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PieceFile {
    #[serde(default)]
    pub left_copy: usize,
    pub left: SetFile,
    #[serde(default)]
    pub right_copy: usize,
    pub right: SetFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemFile {
    Int(i64),
    Word(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MoveFile {
    pub s: ElemFile,
    pub t: ElemFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchemaFile {
    pub schema: Schema,
    #[serde(default)]
    pub window: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PiecesFile {
    List(Vec<PieceFile>),
    Schema(SchemaFile),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub backend: String,
    pub left: Vec<SetFile>,
    pub right: Vec<SetFile>,
    pub pieces: PiecesFile,
    #[serde(default)]
    pub moves: Vec<MoveFile>,
}

fn z_set(s: &SetFile) -> Result<EpSet> {
    match s {
        SetFile::Periodic(e) => Ok(e.clone()),
        SetFile::Regex(r) => Err(Error::Malformed(format!("zperiodic set expected, found regex '{r}'"))),
    }
}

fn f2_set(s: &SetFile) -> Result<ReducedWordDfa> {
    match s {
        SetFile::Regex(r) => ReducedWordDfa::from_regex(r),
        SetFile::Periodic(_) => Err(Error::Malformed("f2 set expected, found a periodic set".into())),
    }
}

fn z_elem(e: &ElemFile) -> Result<i64> {
    match e {
        ElemFile::Int(n) => Ok(*n),
        ElemFile::Word(w) => Err(Error::Malformed(format!("integer expected, found '{w}'"))),
    }
}

fn f2_elem(e: &ElemFile) -> Result<Word> {
    match e {
        ElemFile::Word(w) => Word::parse(w),
        ElemFile::Int(n) => Err(Error::Malformed(format!("word expected, found {n}"))),
    }
}

fn finite<B: Backend>(
    file: &CertificateFile,
    pieces: &[PieceFile],
    set: impl Fn(&SetFile) -> Result<B::Set>,
    elem: impl Fn(&ElemFile) -> Result<B::Elem>,
) -> Result<FiniteCertificate<B>> {
    if !file.moves.is_empty() && file.moves.len() != pieces.len() {
        return Err(Error::Malformed(format!(
            "{} moves for {} pieces",
            file.moves.len(),
            pieces.len()
        )));
    }
    let pieces = pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let (s, t) = match file.moves.get(i) {
                Some(m) => (elem(&m.s)?, elem(&m.t)?),
                None => (B::identity(), B::identity()),
            };
            Ok(Piece {
                left_copy: p.left_copy,
                left: set(&p.left)?,
                right_copy: p.right_copy,
                right: set(&p.right)?,
                s,
                t,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FiniteCertificate {
        left: file.left.iter().map(&set).collect::<Result<_>>()?,
        right: file.right.iter().map(&set).collect::<Result<_>>()?,
        pieces,
    })
}

impl CertificateFile {
    pub fn compile(&self) -> Result<Certificate> {
        match (self.backend.as_str(), &self.pieces) {
            ("zperiodic", PiecesFile::List(p)) => Ok(Certificate::Z(finite::<Zperiodic>(self, p, z_set, z_elem)?)),
            ("zperiodic", PiecesFile::Schema(s)) => Ok(Certificate::Schema(SchemaCertificate {
                left: self.left.iter().map(z_set).collect::<Result<_>>()?,
                right: self.right.iter().map(z_set).collect::<Result<_>>()?,
                schema: s.schema.clone(),
                window: s.window.unwrap_or(DEFAULT_WINDOW),
            })),
            ("f2", PiecesFile::List(p)) => Ok(Certificate::F2(finite::<FreeGroup>(self, p, f2_set, f2_elem)?)),
            ("f2", PiecesFile::Schema(_)) => Err(Error::Malformed("schemas exist only for zperiodic".into())),
            (other, _) => Err(Error::Malformed(format!("unknown backend '{other}'"))),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Malformed(format!("certificate: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

fn rx(s: &str) -> SetFile {
    SetFile::Regex(s.into())
}

fn word(s: &str) -> ElemFile {
    ElemFile::Word(s.into())
}

const ANY: &str = "(a|A|b|B)*";

/// `ℤ ⊔ ℤ ≍ ℤ` by `n ↦ 2n + c` on copy `c`.
pub fn builtin_galileo() -> CertificateFile {
    CertificateFile {
        backend: "zperiodic".into(),
        left: vec![SetFile::Periodic(EpSet::all()), SetFile::Periodic(EpSet::all())],
        right: vec![SetFile::Periodic(EpSet::all())],
        pieces: PiecesFile::Schema(SchemaFile {
            schema: Schema::Interleave {
                k: 2,
                offsets: vec![0, 1],
            },
            window: None,
        }),
        moves: vec![],
    }
}

/// `ℤ ≍ ℤ ∖ {0}` by shifting the nonnegative half-line.
pub fn builtin_hotel() -> CertificateFile {
    CertificateFile {
        backend: "zperiodic".into(),
        left: vec![SetFile::Periodic(EpSet::all())],
        right: vec![SetFile::Periodic(EpSet::all().minus(&EpSet::finite([0])))],
        pieces: PiecesFile::Schema(SchemaFile {
            schema: Schema::TailShift { from: 0, shift: 1 },
            window: None,
        }),
        moves: vec![],
    }
}

/// `F₂ ≍ F₂ ⊔ F₂` with four pieces: `W(a) ∪ D`, `W(a⁻¹) ∖ D`, `W(b)`,
/// `W(b⁻¹)`, where `D = {a⁻ⁿ : n ≥ 0}`.
pub fn builtin_f2() -> CertificateFile {
    let pieces = [
        (format!("a{ANY}|A*"), 0, format!("a{ANY}|A*"), "", ""),
        (format!("A+(a|b|B){ANY}"), 0, format!("A*(b|B){ANY}"), "", "a"),
        (format!("b{ANY}"), 1, format!("b{ANY}"), "", ""),
        (format!("B{ANY}"), 1, format!("ε|(a|A|B){ANY}"), "", "b"),
    ];
    CertificateFile {
        backend: "f2".into(),
        left: vec![rx(ANY)],
        right: vec![rx(ANY), rx(ANY)],
        pieces: PiecesFile::List(
            pieces
                .iter()
                .map(|(l, c, r, _, _)| PieceFile {
                    left_copy: 0,
                    left: rx(l),
                    right_copy: *c,
                    right: rx(r),
                })
                .collect(),
        ),
        moves: pieces
            .iter()
            .map(|(_, _, _, s, t)| MoveFile { s: word(s), t: word(t) })
            .collect(),
    }
}

/// First-letter pieces with the identity as a fifth piece: both right
/// copies are already covered, so the stray piece overlaps.
pub fn naive_f2() -> CertificateFile {
    let pieces = [
        (format!("a{ANY}"), 0, format!("a{ANY}"), ""),
        (format!("A{ANY}"), 0, format!("ε|(A|b|B){ANY}"), "a"),
        (format!("b{ANY}"), 1, format!("b{ANY}"), ""),
        (format!("B{ANY}"), 1, format!("ε|(a|A|B){ANY}"), "b"),
        ("ε".to_string(), 0, "ε".to_string(), ""),
    ];
    CertificateFile {
        backend: "f2".into(),
        left: vec![rx(ANY)],
        right: vec![rx(ANY), rx(ANY)],
        pieces: PiecesFile::List(
            pieces
                .iter()
                .map(|(l, c, r, _)| PieceFile {
                    left_copy: 0,
                    left: rx(l),
                    right_copy: *c,
                    right: rx(r),
                })
                .collect(),
        ),
        moves: pieces
            .iter()
            .map(|(_, _, _, t)| MoveFile {
                s: word(""),
                t: word(t),
            })
            .collect(),
    }
}

/// One piece, trivial move.
pub fn identity_certificate(set: EpSet) -> CertificateFile {
    CertificateFile {
        backend: "zperiodic".into(),
        left: vec![SetFile::Periodic(set.clone())],
        right: vec![SetFile::Periodic(set.clone())],
        pieces: PiecesFile::List(vec![PieceFile {
            left_copy: 0,
            left: SetFile::Periodic(set.clone()),
            right_copy: 0,
            right: SetFile::Periodic(set),
        }]),
        moves: vec![MoveFile {
            s: ElemFile::Int(0),
            t: ElemFile::Int(0),
        }],
    }
}

/// Twenty single-fault variants of [`builtin_f2`]: for each piece, drop it,
/// change its right mover, send it to the other copy, merge the next piece
/// into it, and change its left mover.
pub fn f2_mutations() -> Vec<(String, CertificateFile)> {
    let base = builtin_f2();
    let PiecesFile::List(pieces) = &base.pieces else {
        unreachable!("finite certificate")
    };
    let mut out = Vec::new();
    for i in 0..pieces.len() {
        let mut c = base.clone();
        if let PiecesFile::List(p) = &mut c.pieces {
            p.remove(i);
        }
        c.moves.remove(i);
        out.push((format!("drop piece {i}"), c));

        let mut c = base.clone();
        c.moves[i].t = match &c.moves[i].t {
            ElemFile::Word(w) if w.is_empty() => word("a"),
            _ => word(""),
        };
        out.push((format!("wrong mover t on piece {i}"), c));

        let mut c = base.clone();
        if let PiecesFile::List(p) = &mut c.pieces {
            p[i].right_copy = 1 - p[i].right_copy;
        }
        out.push((format!("piece {i} sent to the other copy"), c));

        let mut c = base.clone();
        if let PiecesFile::List(p) = &mut c.pieces {
            let j = (i + 1) % pieces.len();
            let (SetFile::Regex(a), SetFile::Regex(b)) = (&p[i].left, &p[j].left) else {
                unreachable!("regex sets")
            };
            p[i].left = rx(&format!("{a}|{b}"));
        }
        out.push((format!("piece {i} overlaps piece {}", (i + 1) % pieces.len()), c));

        let mut c = base.clone();
        c.moves[i].s = word("b");
        out.push((format!("wrong mover s on piece {i}"), c));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_verify() {
        for f in [
            builtin_galileo(),
            builtin_hotel(),
            builtin_f2(),
            identity_certificate(EpSet::residue_class(3, 1)),
        ] {
            let v = f.compile().unwrap().verify();
            assert!(v.ok, "{:?}", v.diagnostics);
        }
        let f2 = builtin_f2().compile().unwrap();
        assert!(f2.duplication_witness().is_some());
        assert!(builtin_galileo().compile().unwrap().duplication_witness().is_some());
        assert!(builtin_hotel().compile().unwrap().duplication_witness().is_none());
    }

    #[test]
    fn mutations_are_rejected() {
        let m = f2_mutations();
        assert_eq!(m.len(), 20);
        for (name, f) in m {
            let v = f.compile().unwrap().verify();
            assert!(!v.ok, "{name} accepted");
            assert!(!v.diagnostics.is_empty());
        }
        let v = naive_f2().compile().unwrap().verify();
        assert!(!v.ok);
        assert!(
            v.diagnostics.iter().any(|d| d.contains("overlap")),
            "{:?}",
            v.diagnostics
        );
    }

    #[test]
    fn galileo_variants() {
        let mut only_evens = builtin_galileo();
        only_evens.left.pop();
        only_evens.pieces = PiecesFile::Schema(SchemaFile {
            schema: Schema::Interleave { k: 2, offsets: vec![0] },
            window: None,
        });
        let v = only_evens.compile().unwrap().verify();
        assert!(!v.ok);
        assert!(v.diagnostics.iter().any(|d| d.contains("not reached")));

        let mut collide = builtin_galileo();
        collide.pieces = PiecesFile::Schema(SchemaFile {
            schema: Schema::Interleave {
                k: 2,
                offsets: vec![0, 0],
            },
            window: None,
        });
        let v = collide.compile().unwrap().verify();
        assert!(!v.ok);
        assert!(v.diagnostics.iter().any(|d| d.contains("collide")));
    }

    #[test]
    fn json_round_trip() {
        for f in [builtin_galileo(), builtin_f2(), identity_certificate(EpSet::all())] {
            let text = f.to_json();
            assert_eq!(CertificateFile::from_json(&text).unwrap(), f);
        }
        assert!(CertificateFile::from_json("{\"backend\":\"f2\"}").is_err());
        let mut bad = builtin_f2();
        bad.backend = "sphere".into();
        assert!(bad.compile().is_err());
    }

    fn swap_certificate() -> FiniteCertificate<Zperiodic> {
        let evens = EpSet::residue_class(2, 0);
        let odds = EpSet::residue_class(2, 1);
        FiniteCertificate {
            left: vec![EpSet::all()],
            right: vec![EpSet::all()],
            pieces: vec![
                Piece {
                    left_copy: 0,
                    left: evens.clone(),
                    right_copy: 0,
                    right: odds.clone(),
                    s: 0,
                    t: 1,
                },
                Piece {
                    left_copy: 0,
                    left: odds,
                    right_copy: 0,
                    right: evens,
                    s: 3,
                    t: 2,
                },
            ],
        }
    }

    #[test]
    fn accepted_certificates_replay_on_a_window() {
        let c = swap_certificate();
        assert!(c.verify().ok);
        for p in &c.pieces {
            for n in -200..=200 {
                // s⁻¹P ∋ n ⟺ t⁻¹Q ∋ n, pointwise
                assert_eq!(p.left.contains(n + p.s), p.right.contains(n + p.t));
            }
        }
        for n in -200..=200 {
            assert_eq!(c.pieces.iter().filter(|p| p.left.contains(n)).count(), 1);
            assert_eq!(c.pieces.iter().filter(|p| p.right.contains(n)).count(), 1);
        }
    }

    #[test]
    fn refinement_and_reordering_preserve_validity() {
        let c = swap_certificate();
        let mut r = c.clone();
        r.pieces.reverse();
        assert!(r.verify().ok);
        let s = c.split(0, &EpSet::residue_class(3, 0));
        assert_eq!(s.pieces.len(), 3);
        assert!(s.verify().ok);
        let Certificate::F2(f) = builtin_f2().compile().unwrap() else {
            unreachable!()
        };
        let s = f.split(1, &ReducedWordDfa::from_regex(&format!("AA{ANY}")).unwrap());
        assert!(s.verify().ok, "{:?}", s.verify().diagnostics);
        let mut r = f.clone();
        r.pieces.rotate_left(1);
        assert!(r.verify().ok);
    }
}
