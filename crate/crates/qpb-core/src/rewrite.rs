//! Oriented rewrite systems for presented algebras: reduction to canonical
//! normal form, bounded Knuth-Bendix completion, and local-confluence
//! certification by exhaustive overlap analysis up to a degree bound.
//!
//! The ambient term order is the one implemented by [`Word::cmp`]:
//! inversion count (ordinary letter left of an inverse letter), then length,
//! then leftmost-letter lexicographic on the generator order.  On ordinary
//! presentations this is plain deg-lex.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use crate::coeff::{Rat, Scalar};
use crate::freealg::{AlgebraContext, Letter, NcPoly, Word};
use crate::{Error, Result};

/// Default reduction budget: rule applications per `normal_form` call.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// An oriented rule `lhs -> rhs` with every rhs word strictly smaller than
/// `lhs` in the ambient term order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteRule {
    pub lhs: Word,
    pub rhs: NcPoly,
}

impl RewriteRule {
    pub fn new(lhs: Word, rhs: NcPoly) -> Result<Self> {
        if lhs.is_empty() {
            return Err(Error::RuleOrderViolation("empty left-hand side".into()));
        }
        for (w, _) in rhs.terms() {
            if *w >= lhs {
                return Err(Error::RuleOrderViolation(format!(
                    "rhs word {w} is not smaller than lhs {lhs}"
                )));
            }
        }
        Ok(RewriteRule { lhs, rhs })
    }

    /// Orient a relation `rel = 0`: the leading word becomes the lhs and the
    /// rest is divided by the leading coefficient.  Division must be exact
    /// over the coefficient ring (monomial leaders always are).
    pub fn from_relation(rel: &NcPoly) -> Result<Self> {
        let (lw, lc) = rel
            .leading()
            .ok_or_else(|| Error::RuleOrderViolation("zero relation".into()))?;
        let (lw, lc) = (lw.clone(), lc.clone());
        let mut rest = rel.clone();
        rest.add_term(lw.clone(), -&lc);
        let mut rhs = NcPoly::zero();
        for (w, c) in rest.terms() {
            let q = (-c).divide_exact(&lc).ok_or_else(|| {
                Error::CompletionFailure(format!(
                    "cannot divide coefficient {c} by non-monomial leader {lc}"
                ))
            })?;
            rhs.add_term(w.clone(), q);
        }
        RewriteRule::new(lw, rhs)
    }
}

/// Reduction strategy; normal forms agree across strategies once the system
/// is locally confluent (this is what the property tests exercise).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Largest reducible term, leftmost redex, first matching rule.
    #[default]
    LeadingLeftmost,
    /// Smallest reducible term, rightmost redex, last matching rule.
    TrailingRightmost,
}

/// Generators with a total order plus oriented rewrite rules; defines a
/// presented algebra and its normal forms.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub name: String,
    pub n: u8,
    letters: Vec<Letter>,
    letter_set: BTreeSet<Letter>,
    rules: Vec<RewriteRule>,
    /// The first `defining` rules are the defining relations; completion only
    /// ever appends.
    defining: usize,
    by_first: BTreeMap<Letter, Vec<usize>>,
    pub degree_cap: usize,
    pub budget: u64,
}

/// Outcome of the overlap analysis.
#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub overlaps_checked: usize,
    pub unresolved: Vec<Ambiguity>,
}

impl ConfluenceReport {
    pub fn pass(&self) -> bool {
        self.unresolved.is_empty()
    }
}

/// One unresolved ambiguity: a word two rules reduce to different normal
/// forms, and the nonzero difference.
#[derive(Clone, Debug)]
pub struct Ambiguity {
    pub word: Word,
    pub rule_a: usize,
    pub rule_b: usize,
    pub difference: NcPoly,
}

impl Presentation {
    pub fn new(
        name: &str,
        n: u8,
        letters: Vec<Letter>,
        rules: Vec<RewriteRule>,
        degree_cap: usize,
    ) -> Result<Self> {
        let mut letters = letters;
        letters.sort();
        letters.dedup();
        let letter_set: BTreeSet<Letter> = letters.iter().copied().collect();
        let mut seen: BTreeSet<Word> = BTreeSet::new();
        for r in &rules {
            if !seen.insert(r.lhs.clone()) {
                return Err(Error::DuplicateLhs(format!("{}", r.lhs)));
            }
            for l in r.lhs.0.iter().chain(r.rhs.terms().flat_map(|(w, _)| w.0.iter())) {
                if !letter_set.contains(l) {
                    return Err(Error::UnknownLetter(format!("{l} in rule for {}", r.lhs)));
                }
            }
        }
        let defining = rules.len();
        let mut p = Presentation {
            name: name.to_string(),
            n,
            letters,
            letter_set,
            rules,
            defining,
            by_first: BTreeMap::new(),
            degree_cap,
            budget: DEFAULT_BUDGET,
        };
        p.reindex();
        Ok(p)
    }

    fn reindex(&mut self) {
        self.by_first.clear();
        for (i, r) in self.rules.iter().enumerate() {
            self.by_first.entry(r.lhs.0[0]).or_default().push(i);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn rules(&self) -> &[RewriteRule] {
        &self.rules
    }

    /// The defining relations (the rules present before completion).
    pub fn defining_rules(&self) -> &[RewriteRule] {
        &self.rules[..self.defining]
    }

    pub fn admits(&self, l: Letter) -> bool {
        self.letter_set.contains(&l)
    }

    pub fn context(&self) -> AlgebraContext {
        AlgebraContext {
            name: self.name.clone(),
            n: self.n,
            letters: self.letter_set.clone(),
        }
    }

    fn check_letters(&self, p: &NcPoly) -> Result<()> {
        for (w, _) in p.terms() {
            for l in &w.0 {
                if !self.letter_set.contains(l) {
                    return Err(Error::UnknownLetter(format!("{l} in {}", self.name)));
                }
            }
        }
        Ok(())
    }

    /// Scale the rhs of one rule (negative-control hook for the acceptance
    /// suite: a corrupted coefficient must break local confluence).
    pub fn with_scaled_rule(&self, rule_index: usize, factor: &Scalar) -> Result<Presentation> {
        let mut out = self.clone();
        let r = out
            .rules
            .get_mut(rule_index)
            .ok_or_else(|| Error::InvalidSpec(format!("no rule {rule_index}")))?;
        r.rhs = r.rhs.scale(factor);
        Ok(out)
    }

    /// Map every rule coefficient through `Scalar::specialize`; rhs terms
    /// whose coefficients vanish are dropped.
    pub fn specialized(&self, q_value: &Rat, phases_to_one: bool) -> Result<Presentation> {
        let mut out = self.clone();
        for r in &mut out.rules {
            r.rhs = r.rhs.map_scalars(|c| c.specialize(q_value, phases_to_one))?;
        }
        out.name = format!("{}|specialized", self.name);
        Ok(out)
    }

    // -- reduction ---------------------------------------------------------

    fn find_redex(&self, w: &Word, strategy: Strategy) -> Option<(usize, usize)> {
        let scan: Box<dyn Iterator<Item = usize>> = match strategy {
            Strategy::LeadingLeftmost => Box::new(0..w.len()),
            Strategy::TrailingRightmost => Box::new((0..w.len()).rev()),
        };
        for pos in scan {
            if let Some(cands) = self.by_first.get(&w.0[pos]) {
                let matches = |ri: usize| {
                    let lhs = &self.rules[ri].lhs;
                    pos + lhs.len() <= w.len() && w.0[pos..pos + lhs.len()] == lhs.0[..]
                };
                let hit = match strategy {
                    Strategy::LeadingLeftmost => cands.iter().copied().find(|&ri| matches(ri)),
                    Strategy::TrailingRightmost => {
                        cands.iter().rev().copied().find(|&ri| matches(ri))
                    }
                };
                if let Some(ri) = hit {
                    return Some((pos, ri));
                }
            }
        }
        None
    }

    /// True when no rule lhs occurs as a subword.
    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_redex(w, Strategy::LeadingLeftmost).is_none()
    }

    /// Reduce to the canonical normal form.  Errors on letters outside the
    /// presentation and on budget exhaustion.
    pub fn normal_form(&self, p: &NcPoly) -> Result<NcPoly> {
        self.normal_form_with(p, Strategy::LeadingLeftmost)
    }

    pub fn normal_form_with(&self, p: &NcPoly, strategy: Strategy) -> Result<NcPoly> {
        self.check_letters(p)?;
        let mut budget = self.budget;
        let mut result = NcPoly::zero();
        let mut work = p.clone();
        loop {
            let next = match strategy {
                Strategy::LeadingLeftmost => work.pop_leading(),
                Strategy::TrailingRightmost => {
                    let w = work.words().next().cloned();
                    w.map(|w| {
                        let c = work.coefficient(&w);
                        work.add_term(w.clone(), -&c);
                        (w, c)
                    })
                }
            };
            let Some((w, c)) = next else { break };
            match self.find_redex(&w, strategy) {
                None => result.add_term(w, c),
                Some((pos, ri)) => {
                    if budget == 0 {
                        return Err(Error::BudgetExceeded { budget: self.budget });
                    }
                    budget -= 1;
                    let rule = &self.rules[ri];
                    let prefix = &w.0[..pos];
                    let suffix = &w.0[pos + rule.lhs.len()..];
                    for (rw, rc) in rule.rhs.terms() {
                        let mut nw = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
                        nw.extend_from_slice(prefix);
                        nw.extend_from_slice(&rw.0);
                        nw.extend_from_slice(suffix);
                        work.add_term(Word(nw), &c * rc);
                    }
                }
            }
        }
        Ok(result)
    }

    /// Reduce each leg of a tensor polynomial with its own presentation.
    pub fn normal_form_tensor(
        tp: &crate::freealg::TensorPoly,
        legs: &[&Presentation],
    ) -> Result<crate::freealg::TensorPoly> {
        assert_eq!(tp.rank(), legs.len());
        let mut out = tp.clone();
        for (i, pres) in legs.iter().enumerate() {
            out = out.map_leg(i, |w| pres.normal_form(&NcPoly::word(w.clone())))?;
        }
        Ok(out)
    }

    /// `true` iff `p - r` reduces to zero.
    pub fn equal_mod(&self, p: &NcPoly, r: &NcPoly) -> Result<bool> {
        Ok(self.normal_form(&p.sub(r))?.is_zero())
    }

    /// Enumerate all normal words of length at most `max_len`, in the term
    /// order.  Exponential in `max_len`; meant for desk-scale windows.
    pub fn normal_words(&self, max_len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Word::one()];
        let mut frontier: Vec<Word> = vec![Word::one()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for &l in &self.letters {
                    let mut nw = w.clone();
                    nw.0.push(l);
                    // every proper prefix is normal, so only redexes ending
                    // at the appended letter need checking
                    let reducible = (0..nw.len()).any(|s| {
                        self.by_first.get(&nw.0[s]).is_some_and(|cands| {
                            cands.iter().any(|&ri| {
                                let lhs = &self.rules[ri].lhs;
                                s + lhs.len() == nw.len() && nw.0[s..] == lhs.0[..]
                            })
                        })
                    });
                    if !reducible {
                        next.push(nw);
                    }
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out.sort();
        out
    }

    // -- confluence --------------------------------------------------------

    /// Enumerate all overlap ambiguities of rule pairs with overlap-word
    /// degree at most `max_degree`, reduce each both ways, and report the
    /// ones that do not resolve.
    pub fn check_confluence(&self, max_degree: usize) -> Result<ConfluenceReport> {
        let mut checked = 0usize;
        let mut unresolved = Vec::new();
        for (word, a, b, pos_b) in self.overlap_candidates(max_degree) {
            checked += 1;
            if let Some(diff) = self.ambiguity_difference(&word, a, b, pos_b)? {
                unresolved.push(Ambiguity { word, rule_a: a, rule_b: b, difference: diff });
            }
        }
        Ok(ConfluenceReport { overlaps_checked: checked, unresolved })
    }

    /// Overlap words: `(word, rule_a at 0, rule_b at pos_b)`.
    fn overlap_candidates(&self, max_degree: usize) -> Vec<(Word, usize, usize, usize)> {
        let mut out = Vec::new();
        for (a, ra) in self.rules.iter().enumerate() {
            let la = &ra.lhs;
            for (b, rb) in self.rules.iter().enumerate() {
                let lb = &rb.lhs;
                // suffix of la = prefix of lb, proper overlap
                for t in 1..la.len().min(lb.len()) {
                    if la.0[la.len() - t..] == lb.0[..t] {
                        let mut w = la.0.clone();
                        w.extend_from_slice(&lb.0[t..]);
                        if w.len() <= max_degree {
                            out.push((Word(w), a, b, la.len() - t));
                        }
                    }
                }
                // lb strictly contained in la
                if a != b && lb.len() < la.len() && la.len() <= max_degree {
                    for pos in 0..=(la.len() - lb.len()) {
                        if la.0[pos..pos + lb.len()] == lb.0[..] {
                            out.push((la.clone(), a, b, pos));
                        }
                    }
                }
            }
        }
        out
    }

    fn apply_rule_at(&self, w: &Word, rule: usize, pos: usize) -> NcPoly {
        let r = &self.rules[rule];
        let prefix = &w.0[..pos];
        let suffix = &w.0[pos + r.lhs.len()..];
        let mut out = NcPoly::zero();
        for (rw, rc) in r.rhs.terms() {
            let mut nw = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
            nw.extend_from_slice(prefix);
            nw.extend_from_slice(&rw.0);
            nw.extend_from_slice(suffix);
            out.add_term(Word(nw), rc.clone());
        }
        out
    }

    /// Reduce the two branches of one ambiguity; `None` when they join.
    fn ambiguity_difference(
        &self,
        word: &Word,
        a: usize,
        b: usize,
        pos_b: usize,
    ) -> Result<Option<NcPoly>> {
        let via_a = self.normal_form(&self.apply_rule_at(word, a, 0))?;
        let via_b = self.normal_form(&self.apply_rule_at(word, b, pos_b))?;
        let diff = via_a.sub(&via_b);
        Ok(if diff.is_zero() { None } else { Some(diff) })
    }

    /// Bounded Knuth-Bendix completion: resolve every ambiguity of degree at
    /// most `degree_cap` by adding oriented rules.  Returns the number of
    /// rules added.
    pub fn complete(&mut self) -> Result<usize> {
        let cap = self.degree_cap;
        let mut added = 0usize;
        // Guard against runaway completion; at desk scale a few hundred
        // rules is already far beyond anything these algebras need.
        let max_rules = 4000;
        loop {
            let mut new_rule: Option<RewriteRule> = None;
            for (word, a, b, pos_b) in self.overlap_candidates(cap) {
                if let Some(diff) = self.ambiguity_difference(&word, a, b, pos_b)? {
                    new_rule = Some(RewriteRule::from_relation(&diff)?);
                    break;
                }
            }
            match new_rule {
                None => return Ok(added),
                Some(r) => {
                    if self.rules.len() >= max_rules {
                        return Err(Error::CompletionFailure(format!(
                            "more than {max_rules} rules in {}",
                            self.name
                        )));
                    }
                    self.rules.push(r);
                    self.reindex();
                    added += 1;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse;

    fn m2_letters() -> Vec<Letter> {
        let mut v = Vec::new();
        for i in 1..=2 {
            for j in 1..=2 {
                v.push(Letter::A(i, j));
            }
        }
        v
    }

    /// Hand-rolled O_q(M_2) rules (the qgroups module builds these for all n;
    /// this local copy keeps the rewrite tests self-contained).
    fn m2() -> Presentation {
        let a = Letter::A(1, 1);
        let b = Letter::A(1, 2);
        let c = Letter::A(2, 1);
        let d = Letter::A(2, 2);
        let q = Scalar::q_pow(1);
        let rule = |hi: Letter, lo: Letter, coeff: Scalar, extra: Option<(Word, Scalar)>| {
            let mut rhs = NcPoly::term(Word::from_letters(&[lo, hi]), coeff);
            if let Some((w, s)) = extra {
                rhs.add_term(w, s);
            }
            RewriteRule::new(Word::from_letters(&[hi, lo]), rhs).unwrap()
        };
        let rules = vec![
            rule(b, a, q.clone(), None),
            rule(c, a, q.clone(), None),
            rule(d, b, q.clone(), None),
            rule(d, c, q.clone(), None),
            rule(c, b, Scalar::one(), None),
            rule(
                d,
                a,
                Scalar::one(),
                Some((Word::from_letters(&[b, c]), -Scalar::qdiff())),
            ),
        ];
        Presentation::new("mq(2)", 2, m2_letters(), rules, 6).unwrap()
    }

    #[test]
    fn normal_form_examples() {
        let p = m2();
        let ctx = p.context();
        // c*a -> q*a*c
        let nf = p.normal_form(&parse("a[2,1]*a[1,1]", &ctx).unwrap()).unwrap();
        assert_eq!(nf, parse("q*a[1,1]*a[2,1]", &ctx).unwrap());
        // d*a -> a*d - (q^-1 - q)*b*c
        let nf = p.normal_form(&parse("a[2,2]*a[1,1]", &ctx).unwrap()).unwrap();
        assert_eq!(
            nf,
            parse("a[1,1]*a[2,2] - (q^-1 - q)*a[1,2]*a[2,1]", &ctx).unwrap()
        );
        use alloc::string::ToString;
        assert_eq!(nf.to_string(), "a[1,1]*a[2,2] - (q^-1 - q)*a[1,2]*a[2,1]");
        // unit irreducible
        assert!(p.normal_form(&NcPoly::one()).unwrap().is_one());
    }

    #[test]
    fn confluence_m2() {
        let p = m2();
        let rep = p.check_confluence(6).unwrap();
        assert!(rep.pass(), "unresolved: {:?}", rep.unresolved);
        assert!(rep.overlaps_checked > 0);
    }

    #[test]
    fn equal_mod_examples() {
        let p = m2();
        let ctx = p.context();
        let ad_da = parse("a[1,1]*a[2,2] - a[2,2]*a[1,1]", &ctx).unwrap();
        let rhs = parse("(q^-1 - q)*a[1,2]*a[2,1]", &ctx).unwrap();
        assert!(p.equal_mod(&ad_da, &rhs).unwrap());
        let ab = parse("a[1,1]*a[1,2]", &ctx).unwrap();
        let ba = parse("a[1,2]*a[1,1]", &ctx).unwrap();
        assert!(!p.equal_mod(&ab, &ba).unwrap());
        assert!(p.equal_mod(&ab, &ab).unwrap());
    }

    #[test]
    fn order_incompatible_rule_rejected() {
        // xy -> yx + 1 with x < y has no order-compatible orientation
        let x = Letter::X(1);
        let y = Letter::X(2);
        let mut rhs = NcPoly::word(Word::from_letters(&[y, x]));
        rhs.add_term(Word::one(), Scalar::one());
        let err = RewriteRule::new(Word::from_letters(&[x, y]), rhs);
        assert!(matches!(err, Err(Error::RuleOrderViolation(_))));
    }

    #[test]
    fn strategies_agree_on_confluent_system() {
        let p = m2();
        let ctx = p.context();
        let e = parse("a[2,2]*a[2,1]*a[1,2]*a[1,1]", &ctx).unwrap();
        let nf1 = p.normal_form_with(&e, Strategy::LeadingLeftmost).unwrap();
        let nf2 = p.normal_form_with(&e, Strategy::TrailingRightmost).unwrap();
        assert_eq!(nf1, nf2);
    }

    #[test]
    fn linearity_of_normal_form() {
        let p = m2();
        let ctx = p.context();
        let u = parse("a[2,2]*a[1,1]", &ctx).unwrap();
        let v = parse("a[2,1]*a[1,2]", &ctx).unwrap();
        let alpha = Scalar::q_pow(2);
        let beta = Scalar::qdiff();
        let combo = u.scale(&alpha).add(&v.scale(&beta));
        let lhs = p.normal_form(&combo).unwrap();
        let rhs = p
            .normal_form(&u)
            .unwrap()
            .scale(&alpha)
            .add(&p.normal_form(&v).unwrap().scale(&beta));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn budget_is_enforced() {
        let mut p = m2();
        p.budget = 2;
        let ctx = p.context();
        let e = parse("a[2,2]*a[2,1]*a[1,2]*a[1,1]", &ctx).unwrap();
        assert!(matches!(p.normal_form(&e), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn normal_words_m2() {
        let p = m2();
        let words = p.normal_words(2);
        // 1, four letters, and the 10 ordered pairs (all irreducible in M_2)
        assert_eq!(words.len(), 1 + 4 + 10);
        assert!(words.iter().all(|w| p.is_normal_word(w)));
    }

    #[test]
    fn corrupted_manin_coefficient_breaks_confluence() {
        // ca -> q*ac corrupted to ca -> q^2*ac clashes with the da-overlap
        let p = m2();
        let bad = p.with_scaled_rule(1, &Scalar::q_pow(1)).unwrap();
        let rep = bad.check_confluence(6).unwrap();
        assert!(!rep.pass());
        assert!(!rep.unresolved[0].difference.is_zero());
    }
}
