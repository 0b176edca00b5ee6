//! Words and noncommutative polynomials over [`Scalar`], tensor powers
//! thereof, and the text grammar for algebra elements.
//!
//! Grammar (one expression per line in fixture files, `#` starts a comment):
//! terms joined by `+`/`-`; a term is a `*`-joined product of atoms; an atom
//! is a rational literal, `q^k`, `g[j,k]^m`, a parenthesized subexpression,
//! or a generator letter `a[i,j]`, `d[i]`, `p[i,j]`, `t[i]`, `x[i]`, `det`,
//! optionally raised to an integer power.  Negative powers are admitted only
//! for the invertible letters `d[i]`, `p[1,1]`, `t[i]` and `det`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};
use core::cmp::Ordering;
use core::fmt;

use num_traits::Signed;

use crate::coeff::{ratio, Scalar};
use crate::{Error, Result};

/// One generator letter of a presented algebra.  Indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    /// Matrix entry `a[i,j]` of `O_q(M_n)` and its quotients.
    A(u8, u8),
    /// Inverse `d[i]^-1` of the column element `d_i = a[i,1]`.
    InvD(u8),
    /// Parabolic entry `p[i,j]` (the image of `a[i,j]` under `π`).
    P(u8, u8),
    /// The inverse `p[1,1]^-1`.
    InvP11,
    /// Torus generator `t[i]`.
    T(u8),
    /// Torus inverse `t[i]^-1`.
    InvT(u8),
    /// Central inverse `det^-1` of the quantum determinant in `O_q(GL_n)`.
    InvDet,
    /// Projective-ring generator `x[i]`.
    X(u8),
}

impl Letter {
    pub fn is_inverse(self) -> bool {
        matches!(self, Letter::InvD(_) | Letter::InvP11 | Letter::InvT(_) | Letter::InvDet)
    }

    /// Sort key giving the global total order on letters: inverse letters
    /// first (by family, then index), then ordinary letters row-major.
    fn key(self) -> (u8, u8, u8, u8) {
        match self {
            Letter::InvD(i) => (0, 0, i, 0),
            Letter::InvP11 => (0, 1, 1, 1),
            Letter::InvT(i) => (0, 2, i, 0),
            Letter::InvDet => (0, 3, 0, 0),
            Letter::A(i, j) => (1, 0, i, j),
            Letter::P(i, j) => (1, 1, i, j),
            Letter::T(i) => (1, 2, i, 0),
            Letter::X(i) => (1, 3, i, 0),
        }
    }

    /// Formal Z-degree: +1 for ordinary letters, -1 for inverse letters.
    pub fn signed_degree(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::A(i, j) => write!(f, "a[{i},{j}]"),
            Letter::InvD(i) => write!(f, "d[{i}]^-1"),
            Letter::P(i, j) => write!(f, "p[{i},{j}]"),
            Letter::InvP11 => write!(f, "p[1,1]^-1"),
            Letter::T(i) => write!(f, "t[{i}]"),
            Letter::InvT(i) => write!(f, "t[{i}]^-1"),
            Letter::InvDet => write!(f, "det^-1"),
            Letter::X(i) => write!(f, "x[{i}]"),
        }
    }
}

/// A finite sequence of letters; the empty word is the unit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn one() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn from_letters(ls: &[Letter]) -> Self {
        Word(ls.to_vec())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Number of (ordinary letter, inverse letter to its right) pairs; the
    /// primary component of the term order on localized algebras.
    pub fn inversions(&self) -> usize {
        let mut inv_seen_right = 0usize;
        let mut count = 0usize;
        for l in self.0.iter().rev() {
            if l.is_inverse() {
                inv_seen_right += 1;
            } else {
                count += inv_seen_right;
            }
        }
        count
    }

    /// Z-degree: ordinary letters count +1, inverse letters -1.
    pub fn signed_degree(&self) -> i64 {
        self.0.iter().map(|l| l.signed_degree()).sum()
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Word {
    /// The ambient term order: inversion count, then length, then
    /// leftmost-letter lexicographic.  On inverse-free words this is exactly
    /// degree-first leftmost-lex.
    fn cmp(&self, other: &Self) -> Ordering {
        self.inversions()
            .cmp(&other.inversions())
            .then_with(|| self.len().cmp(&other.len()))
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.len() && self.0[i + run] == l {
                run += 1;
            }
            parts.push(fmt_letter_power(l, run));
            i += run;
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn fmt_letter_power(l: Letter, run: usize) -> String {
    let (base, inv): (String, bool) = match l {
        Letter::A(i, j) => (format!("a[{i},{j}]"), false),
        Letter::P(i, j) => (format!("p[{i},{j}]"), false),
        Letter::T(i) => (format!("t[{i}]"), false),
        Letter::X(i) => (format!("x[{i}]"), false),
        Letter::InvD(i) => (format!("d[{i}]"), true),
        Letter::InvP11 => ("p[1,1]".to_string(), true),
        Letter::InvT(i) => (format!("t[{i}]"), true),
        Letter::InvDet => ("det".to_string(), true),
    };
    let e: i64 = if inv { -(run as i64) } else { run as i64 };
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

/// A finite Scalar-weighted sum of words: an element of a free (or, after
/// reduction, presented) algebra.  Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NcPoly {
    terms: BTreeMap<Word, Scalar>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        NcPoly::term(Word::one(), Scalar::one())
    }

    pub fn letter(l: Letter) -> Self {
        NcPoly::term(Word::letter(l), Scalar::one())
    }

    pub fn word(w: Word) -> Self {
        NcPoly::term(w, Scalar::one())
    }

    pub fn scalar(s: Scalar) -> Self {
        NcPoly::term(Word::one(), s)
    }

    pub fn term(w: Word, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        NcPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(w, c)| w.is_empty() && c.is_one()) == Some(true)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn coefficient(&self, w: &Word) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Largest word in the ambient term order, with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn pop_leading(&mut self) -> Option<(Word, Scalar)> {
        self.terms.pop_last()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&w) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&w);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        NcPoly { terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> NcPoly {
        if s.is_zero() {
            return NcPoly::zero();
        }
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), c * s);
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        let mut out = NcPoly::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }

    /// Apply a letter substitution multiplicatively (images in another free
    /// algebra); a `None` image sends the whole word to zero.
    pub fn map_letters<F>(&self, mut image: F) -> NcPoly
    where
        F: FnMut(Letter) -> Option<NcPoly>,
    {
        let mut out = NcPoly::zero();
        'terms: for (w, c) in &self.terms {
            let mut acc = NcPoly::scalar(c.clone());
            for &l in &w.0 {
                match image(l) {
                    Some(p) => acc = acc.mul(&p),
                    None => continue 'terms,
                }
            }
            out = out.add(&acc);
        }
        out
    }

    /// Apply a scalar map to every coefficient (used by specialization).
    pub fn map_scalars<F>(&self, mut f: F) -> Result<NcPoly>
    where
        F: FnMut(&Scalar) -> Result<Scalar>,
    {
        let mut out = NcPoly::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn letters(&self) -> BTreeSet<Letter> {
        self.terms.keys().flat_map(|w| w.0.iter().copied()).collect()
    }
}

impl fmt::Display for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            // A multi-term scalar is parenthesized with a factored-out global
            // sign so that e.g. `- (q^-1 - q)*a[1,2]*a[2,1]` round-trips.
            let (neg, body) = scalar_factor(c, w.is_empty());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match body {
                Some(b) if w.is_empty() => out.push_str(&b),
                Some(b) => {
                    out.push_str(&b);
                    out.push('*');
                    out.push_str(&format!("{w}"));
                }
                None => out.push_str(&format!("{w}")),
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for NcPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NcPoly({self})")
    }
}

/// Split a coefficient into (global sign, printable body).  `None` body means
/// the coefficient is exactly ±1 and attached to a nonempty word.
fn scalar_factor(c: &Scalar, unit_word: bool) -> (bool, Option<String>) {
    if c.num_terms() > 1 {
        let first_neg = c.terms()[0].1.is_negative();
        let inner = if first_neg { -c } else { c.clone() };
        return (first_neg, Some(format!("({inner})")));
    }
    let (m, r) = &c.terms()[0];
    let neg = r.is_negative();
    let abs = Scalar::monomial(m.clone(), r.abs());
    if abs.is_one() && !unit_word {
        (neg, None)
    } else {
        (neg, Some(format!("{abs}")))
    }
}

// ---------------------------------------------------------------------------
// Tensor polynomials
// ---------------------------------------------------------------------------

/// Element of a tensor power of presented algebras: words per tensor leg.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorPoly {
    rank: usize,
    terms: BTreeMap<Vec<Word>, Scalar>,
}

impl TensorPoly {
    pub fn zero(rank: usize) -> Self {
        assert!(rank >= 1);
        TensorPoly { rank, terms: BTreeMap::new() }
    }

    pub fn one(rank: usize) -> Self {
        TensorPoly::term(vec![Word::one(); rank], Scalar::one())
    }

    pub fn term(legs: Vec<Word>, c: Scalar) -> Self {
        let rank = legs.len();
        assert!(rank >= 1);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(legs, c);
        }
        TensorPoly { rank, terms }
    }

    /// Tensor product of plain polynomials, one per leg.
    pub fn of(factors: &[&NcPoly]) -> Self {
        assert!(!factors.is_empty());
        let mut terms: BTreeMap<Vec<Word>, Scalar> = BTreeMap::new();
        terms.insert(Vec::new(), Scalar::one());
        for p in factors {
            let mut next: BTreeMap<Vec<Word>, Scalar> = BTreeMap::new();
            for (legs, c) in &terms {
                for (w, cw) in p.terms() {
                    let mut l = legs.clone();
                    l.push(w.clone());
                    merge_term(&mut next, l, c * cw);
                }
            }
            terms = next;
        }
        TensorPoly { rank: factors.len(), terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Word>, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, legs: Vec<Word>, c: Scalar) {
        assert_eq!(legs.len(), self.rank);
        merge_term(&mut self.terms, legs, c);
    }

    pub fn add(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut out = self.clone();
        for (legs, c) in &other.terms {
            merge_term(&mut out.terms, legs.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorPoly) -> Result<TensorPoly> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> TensorPoly {
        TensorPoly {
            rank: self.rank,
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> TensorPoly {
        let mut out = TensorPoly::zero(self.rank);
        for (legs, c) in &self.terms {
            merge_term(&mut out.terms, legs.clone(), c * s);
        }
        out
    }

    /// Bilinear legwise concatenation `(a⊗h)(a'⊗h') = aa' ⊗ hh'`.
    pub fn tensor_mul(&self, other: &TensorPoly) -> Result<TensorPoly> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        let mut out = TensorPoly::zero(self.rank);
        for (l1, c1) in &self.terms {
            for (l2, c2) in &other.terms {
                let legs: Vec<Word> =
                    l1.iter().zip(l2.iter()).map(|(a, b)| a.concat(b)).collect();
                merge_term(&mut out.terms, legs, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Replace leg `leg` of every term through `f`, splicing the resulting
    /// rank-`added + 1` tensor factor in place (used for iterated coactions).
    pub fn expand_leg<F>(&self, leg: usize, added: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Result<TensorPoly>,
    {
        let mut out = TensorPoly::zero(self.rank + added);
        for (legs, c) in &self.terms {
            let image = f(&legs[leg])?;
            if image.rank != added + 1 {
                return Err(Error::RankMismatch { left: image.rank, right: added + 1 });
            }
            for (il, ic) in &image.terms {
                let mut nl = Vec::with_capacity(self.rank + added);
                nl.extend_from_slice(&legs[..leg]);
                nl.extend_from_slice(il);
                nl.extend_from_slice(&legs[leg + 1..]);
                merge_term(&mut out.terms, nl, c * ic);
            }
        }
        Ok(out)
    }

    /// Apply a `Word -> NcPoly` map to one leg (reduction or projection).
    pub fn map_leg<F>(&self, leg: usize, mut f: F) -> Result<TensorPoly>
    where
        F: FnMut(&Word) -> Result<NcPoly>,
    {
        let mut out = TensorPoly::zero(self.rank);
        for (legs, c) in &self.terms {
            let image = f(&legs[leg])?;
            for (w, cw) in image.terms() {
                let mut nl = legs.clone();
                nl[leg] = w.clone();
                merge_term(&mut out.terms, nl, c * cw);
            }
        }
        Ok(out)
    }

    /// Drop a leg that must be the unit word in every term (after a counit
    /// application, say), multiplying coefficients through.
    pub fn contract_unit_leg(&self, leg: usize) -> Result<TensorPoly> {
        let mut out = TensorPoly::zero(self.rank - 1);
        for (legs, c) in &self.terms {
            if !legs[leg].is_empty() {
                return Err(Error::MissingStructure(format!(
                    "leg {leg} is not scalar: {}",
                    legs[leg]
                )));
            }
            let mut nl = legs.clone();
            nl.remove(leg);
            merge_term(&mut out.terms, nl, c.clone());
        }
        Ok(out)
    }
}

fn merge_term(map: &mut BTreeMap<Vec<Word>, Scalar>, legs: Vec<Word>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&legs) {
        Some(existing) => {
            let sum = &*existing + &c;
            if sum.is_zero() {
                map.remove(&legs);
            } else {
                *existing = sum;
            }
        }
        None => {
            map.insert(legs, c);
        }
    }
}

impl fmt::Display for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(legs, c)| {
                let legstr: Vec<String> = legs.iter().map(|w| format!("{w}")).collect();
                let coeff = if c.is_one() {
                    String::new()
                } else if c.is_monomial() {
                    format!("{c}*")
                } else {
                    format!("({c})*")
                };
                format!("{coeff}{}", legstr.join(" (x) "))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TensorPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TensorPoly({self})")
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// What a parser is allowed to produce: the ambient size `n` and the admitted
/// letters.  Presentations provide this via `Presentation::context`.
#[derive(Clone, Debug)]
pub struct AlgebraContext {
    pub name: String,
    pub n: u8,
    pub letters: BTreeSet<Letter>,
}

impl AlgebraContext {
    pub fn admits(&self, l: Letter) -> bool {
        self.letters.contains(&l)
    }
}

/// Parse a grammar expression into an `NcPoly` of the free algebra on the
/// context letters.  No reduction is applied.
pub fn parse(text: &str, ctx: &AlgebraContext) -> Result<NcPoly> {
    let mut p = Parser { src: text.as_bytes(), pos: 0, ctx };
    p.skip_ws();
    if p.at_end() {
        return Err(Error::Syntax { pos: 0, msg: "empty input".into() });
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: &'a AlgebraContext,
}

/// Unresolved atom: either a finished polynomial or something whose exponent
/// has not been applied yet.
enum Atom {
    Poly(NcPoly),
    Q,
    Phase(u8, u8),
    /// Generator family tag (`b'a'`, `b'd'`, `b'p'`, `b't'`, `b'x'`, `b'D'`
    /// for `det`) with indices.
    Gen(u8, u8, u8),
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ') | Some(b'\t')) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<NcPoly> {
        let mut acc;
        self.skip_ws();
        if self.eat(b'-') {
            acc = self.product()?.neg();
        } else {
            let _ = self.eat(b'+');
            acc = self.product()?;
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.product()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.product()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn product(&mut self) -> Result<NcPoly> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<NcPoly> {
        self.skip_ws();
        let start = self.pos;
        let atom = self.atom()?;
        self.skip_ws();
        let exp = if self.peek() == Some(b'^') {
            self.pos += 1;
            Some(self.int()?)
        } else {
            None
        };
        match atom {
            Atom::Poly(p) => match exp {
                None => Ok(p),
                Some(e) if e >= 0 => {
                    let mut acc = NcPoly::one();
                    for _ in 0..e {
                        acc = acc.mul(&p);
                    }
                    Ok(acc)
                }
                Some(_) => {
                    self.pos = start;
                    Err(self.err("negative power of a non-invertible expression"))
                }
            },
            Atom::Q => Ok(NcPoly::scalar(Scalar::q_pow(exp.unwrap_or(1)))),
            Atom::Phase(j, k) => Ok(NcPoly::scalar(Scalar::phase(j, k, exp.unwrap_or(1)))),
            Atom::Gen(fam, i, j) => self.letter_power(fam, i, j, exp.unwrap_or(1), start),
        }
    }

    fn letter_power(&mut self, fam: u8, i: u8, j: u8, e: i64, start: usize) -> Result<NcPoly> {
        if e == 0 {
            return Ok(NcPoly::one());
        }
        let (pos_letter, inv_letter): (Option<Letter>, Option<Letter>) = match fam {
            b'a' => (Some(Letter::A(i, j)), None),
            b'd' => (Some(Letter::A(i, 1)), Some(Letter::InvD(i))),
            b'p' => (
                Some(Letter::P(i, j)),
                if (i, j) == (1, 1) { Some(Letter::InvP11) } else { None },
            ),
            b't' => (Some(Letter::T(i)), Some(Letter::InvT(i))),
            b'x' => (Some(Letter::X(i)), None),
            b'D' => (None, Some(Letter::InvDet)),
            _ => unreachable!(),
        };
        let letter = match (e > 0, pos_letter, inv_letter) {
            (true, Some(l), _) => l,
            (false, _, Some(l)) => l,
            (true, None, _) => {
                self.pos = start;
                return Err(self.err("'det' is only available as det^-1"));
            }
            (false, _, None) => {
                self.pos = start;
                return Err(self.err("letter is not invertible"));
            }
        };
        if !self.ctx.admits(letter) {
            return Err(Error::LetterNotAdmitted(format!("{letter} in {}", self.ctx.name)));
        }
        let count = e.unsigned_abs() as usize;
        Ok(NcPoly::word(Word(vec![letter; count])))
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(Atom::Poly(e))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                self.skip_ws();
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Atom::Poly(NcPoly::scalar(Scalar::from_rat(ratio(n, d)))))
                } else {
                    Ok(Atom::Poly(NcPoly::scalar(Scalar::from_int(n))))
                }
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(Atom::Q)
            }
            Some(b'g') => {
                self.pos += 1;
                self.expect(b'[')?;
                let j = self.index()?;
                self.expect(b',')?;
                let k = self.index()?;
                self.expect(b']')?;
                if j == k {
                    return Err(self.err("phase symbol g[j,k] requires j != k"));
                }
                Ok(Atom::Phase(j, k))
            }
            Some(c) if matches!(c, b'a' | b'p' | b't' | b'x') => {
                self.pos += 1;
                self.expect(b'[')?;
                let i = self.index()?;
                let j = if c == b'a' || c == b'p' {
                    self.expect(b',')?;
                    self.index()?
                } else {
                    0
                };
                self.expect(b']')?;
                Ok(Atom::Gen(c, i, j))
            }
            Some(b'd') => {
                if self.src[self.pos..].starts_with(b"det") {
                    self.pos += 3;
                    Ok(Atom::Gen(b'D', 0, 0))
                } else {
                    self.pos += 1;
                    self.expect(b'[')?;
                    let i = self.index()?;
                    self.expect(b']')?;
                    Ok(Atom::Gen(b'd', i, 0))
                }
            }
            Some(c) => Err(self.err(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = self.peek() == Some(b'-');
        if neg {
            self.pos += 1;
        }
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        let s = core::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = s.parse().map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn index(&mut self) -> Result<u8> {
        let v = self.int()?;
        if v < 1 || v > self.ctx.n as i64 {
            return Err(Error::IndexOutOfRange(format!(
                "index {v} not in 1..={} ({})",
                self.ctx.n, self.ctx.name
            )));
        }
        Ok(v as u8)
    }
}
