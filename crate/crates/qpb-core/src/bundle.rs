//! The sheaf model of the quantum principal bundle over quantum projective
//! space: the chart poset of localizations, the cleaving maps `j_k`, the
//! coinvariant subsheaf, trivialization and canonical-map checks, and the
//! crossed cocycle `τ`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::vec;

use crate::coeff::Scalar;
use crate::freealg::{Letter, NcPoly, TensorPoly, Word};
use crate::linalg::ScalarMat;
use crate::localization::{self, LocalizedAlgebra};
use crate::qgroups::{self, qminor, Algebra};
use crate::report::{Check, Report};
use crate::rewrite::Presentation;
use crate::twist::{CocycleSpec, TwistMode};
use crate::util::SplitMix64;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Sheaf model
// ---------------------------------------------------------------------------

/// The intersection poset of the cover `{U_i}`: one localized algebra per
/// nonempty subset of `{1..n}`, the base algebra at the global element, and
/// inclusion restrictions.
pub struct SheafModel {
    pub n: u8,
    pub global: Algebra,
    pub charts: BTreeMap<Vec<u8>, LocalizedAlgebra>,
}

impl SheafModel {
    pub fn chart(&self, index: &[u8]) -> Result<&LocalizedAlgebra> {
        self.charts
            .get(index)
            .ok_or_else(|| Error::InvalidSpec(format!("no chart {index:?}")))
    }

    /// Restriction `r_IJ` for `I ⊆ J`: the inclusion followed by reduction
    /// in the finer chart.
    pub fn restriction(&self, from: &[u8], to: &[u8], p: &NcPoly) -> Result<NcPoly> {
        if !from.iter().all(|i| to.contains(i)) {
            return Err(Error::InvalidSpec(format!("{from:?} is not a subset of {to:?}")));
        }
        self.chart(to)?.pres.normal_form(p)
    }
}

/// Build the full sheaf model on the subset poset of `{1..n}`.
pub fn build_sheaf(n: u8) -> Result<SheafModel> {
    let global = qgroups::build_sln(n)?;
    let mut charts = BTreeMap::new();
    for size in 1..=n {
        for subset in qgroups::increasing_subsets(n, size) {
            let loc = localization::localize(&global, &subset)?;
            charts.insert(subset, loc);
        }
    }
    Ok(SheafModel { n, global, charts })
}

/// Presheaf functoriality, the comodule-algebra property of every
/// restriction, the coinvariant subsheaf on the single charts, and order
/// independence of the iterated localizations.
pub fn verify_sheaf(sheaf: &SheafModel, order_degree: usize) -> Result<Report> {
    let mut rep = Report::new();
    let n = sheaf.n;
    let subsets: Vec<Vec<u8>> = sheaf.charts.keys().cloned().collect();
    let label = |s: &[u8]| {
        s.iter().map(|i| i.to_string()).collect::<Vec<_>>().join("")
    };

    // functoriality r_JK ∘ r_IJ = r_IK on generators and short products
    for i_set in &subsets {
        for j_set in &subsets {
            if !(i_set.iter().all(|x| j_set.contains(x)) && i_set != j_set) {
                continue;
            }
            for k_set in &subsets {
                if !(j_set.iter().all(|x| k_set.contains(x)) && j_set != k_set) {
                    continue;
                }
                let source = sheaf.chart(i_set)?;
                let mut ok = true;
                let mut witness = String::new();
                let letters = source.pres.letters().to_vec();
                let mut words: Vec<Word> = letters.iter().map(|&l| Word::letter(l)).collect();
                for &a in &letters {
                    for &b in &letters {
                        words.push(Word::from_letters(&[a, b]));
                    }
                }
                for w in &words {
                    let p = NcPoly::word(w.clone());
                    let via_j = sheaf.restriction(
                        j_set,
                        k_set,
                        &sheaf.restriction(i_set, j_set, &p)?,
                    )?;
                    let direct = sheaf.restriction(i_set, k_set, &p)?;
                    if via_j != direct {
                        ok = false;
                        witness = format!("{w}: {via_j} vs {direct}");
                        break;
                    }
                }
                rep.push(Check::of(
                    format!(
                        "sheaf/functorial/n{n}/{}-{}-{}",
                        label(i_set),
                        label(j_set),
                        label(k_set)
                    ),
                    format!(
                        "r_JK ∘ r_IJ = r_IK for I={i_set:?}, J={j_set:?}, K={k_set:?}"
                    ),
                    ok,
                    witness,
                ));
            }
        }
    }

    // every restriction is a comodule-algebra morphism on generators
    for i_set in &subsets {
        for j_set in &subsets {
            if !(i_set.iter().all(|x| j_set.contains(x)) && i_set != j_set) {
                continue;
            }
            let source = sheaf.chart(i_set)?;
            let target = sheaf.chart(j_set)?;
            let mut ok = true;
            let mut witness = String::new();
            for &l in source.pres.letters() {
                let p = NcPoly::letter(l);
                let lhs = target.coaction(&sheaf.restriction(i_set, j_set, &p)?)?;
                let rhs = source
                    .coaction(&p)?
                    .map_leg(0, |w| sheaf.restriction(i_set, j_set, &NcPoly::word(w.clone())))?;
                let diff = lhs.sub(&rhs)?;
                if !diff.is_zero() {
                    ok = false;
                    witness = format!("{l}: {diff}");
                    break;
                }
            }
            rep.push(Check::of(
                format!("sheaf/comodule/n{n}/{}-{}", label(i_set), label(j_set)),
                format!("δ_J ∘ r_IJ = (r_IJ ⊗ id) ∘ δ_I on generators, I={i_set:?}, J={j_set:?}"),
                ok,
                witness,
            ));
            // injectivity on normal forms: the images of the degree-<=2
            // window of the coarse chart stay linearly independent (the
            // finer chart can legitimately rewrite them further, e.g.
            // d_2^-1 a_22 picks up a d_1^-1 form once both inverses exist)
            let sample = source.pres.normal_words(2);
            let mut rows: BTreeMap<Word, usize> = BTreeMap::new();
            let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
            for (col, w) in sample.iter().enumerate() {
                let img = sheaf.restriction(i_set, j_set, &NcPoly::word(w.clone()))?;
                for (word, c) in img.terms() {
                    let next = rows.len();
                    let r = *rows.entry(word.clone()).or_insert(next);
                    entries.push((r, col, c.clone()));
                }
            }
            let mut mat = ScalarMat::zero(rows.len().max(1), sample.len());
            for (r, c, v) in entries {
                mat.add_to(r, c, &v);
            }
            let rank = mat.rank()?;
            rep.push(Check::of(
                format!("sheaf/injective/n{n}/{}-{}", label(i_set), label(j_set)),
                format!("r_IJ is injective on normal forms up to degree 2, I={i_set:?}, J={j_set:?}"),
                rank == sample.len(),
                format!("rank {rank} on a window of {}", sample.len()),
            ));
        }
    }

    // coinvariant subsheaf on the single charts
    for i in 1..=n {
        let loc = sheaf.chart(&[i])?;
        let len = if n == 2 { 4 } else { 2 };
        let coin = localization::coinvariants(loc, 0, len)?;
        rep.push(Check::of(
            format!("sheaf/coinvariants/n{n}/chart{i}"),
            format!("coinvariants of F(U_{i}) match the monomials in d_j d_{i}^-1 (length {len})"),
            coin.pass(),
            format!("kernel {} vs target {}", coin.kernel_dim, coin.target_dim),
        ));
    }

    // order independence for all 2-subsets
    for pair in qgroups::increasing_subsets(n, 2) {
        let sub = localization::check_order_independence(&sheaf.global, &pair, order_degree)?;
        rep.extend(sub);
    }

    Ok(rep)
}

// ---------------------------------------------------------------------------
// Cleaving maps
// ---------------------------------------------------------------------------

/// The chart trivialization `j_k : O_q(P) -> F(U_k)` with images
/// `p_11^±1 -> a_k1^±1`, `p_1β -> a_kβ`, and quantum-minor images
/// `j_k(p_αβ) = D^{1β}_{{r(α),k}} d_k^-1` on the lower block, where `r`
/// relabels the block index α through the list `(1, 2, …, k̂, …, n)`.
///
/// The relabeling and the plain (unsigned) minor normalization are the
/// machine-verified form of the chart factorization: the block images then
/// satisfy the Manin relations of `O_q(P)` and `j_k(p_11 det_q(p_αβ)) =
/// det_q(a_ij)` exactly.  (Pairing the minors with the block rows in their
/// displayed order instead fails relation preservation for k >= 3; the two
/// readings coincide for k <= 2.)
pub struct CleavingMap {
    pub n: u8,
    pub k: u8,
    chart: LocalizedAlgebra,
    parabolic: Algebra,
    images: BTreeMap<Letter, NcPoly>,
}

/// The original row carried by block position `α >= 2` of the chart-k
/// factorization: the `(α-1)`-th entry of `(1, 2, …, k̂, …, n)`.
pub fn block_row(n: u8, k: u8, alpha: u8) -> u8 {
    (1..=n).filter(|&x| x != k).nth(alpha as usize - 2).expect("alpha in 2..=n")
}

/// Construct `j_k` (unverified; see `verify_cleaving`).
pub fn build_cleaving(n: u8, k: u8) -> Result<CleavingMap> {
    if k < 1 || k > n {
        return Err(Error::IndexOutOfRange(format!("chart index {k} for n = {n}")));
    }
    let global = qgroups::build_sln(n)?;
    let chart = localization::localize(&global, &[k])?;
    let parabolic = chart.parabolic.clone().expect("SL base always carries the parabolic");
    let inv = NcPoly::letter(Letter::InvD(k));
    let mut images: BTreeMap<Letter, NcPoly> = BTreeMap::new();
    images.insert(Letter::P(1, 1), NcPoly::letter(Letter::A(k, 1)));
    images.insert(Letter::InvP11, inv.clone());
    for b in 2..=n {
        images.insert(Letter::P(1, b), NcPoly::letter(Letter::A(k, b)));
    }
    for a in 2..=n {
        let r = block_row(n, k, a);
        let rows = if r < k { [r, k] } else { [k, r] };
        for b in 2..=n {
            images.insert(Letter::P(a, b), qminor(&rows, &[1, b])?.mul(&inv));
        }
    }
    for img in images.values_mut() {
        *img = chart.pres.normal_form(img)?;
    }
    Ok(CleavingMap { n, k, chart, parabolic, images })
}

impl CleavingMap {
    pub fn chart(&self) -> &LocalizedAlgebra {
        &self.chart
    }

    pub fn parabolic(&self) -> &Algebra {
        &self.parabolic
    }

    pub fn images(&self) -> impl Iterator<Item = (&Letter, &NcPoly)> {
        self.images.iter()
    }

    pub fn image(&self, l: Letter) -> Result<&NcPoly> {
        self.images
            .get(&l)
            .ok_or_else(|| Error::MissingStructure(format!("j_{}({l})", self.k)))
    }

    /// Negative-control hook: scale one image.
    pub fn corrupt_image(&mut self, l: Letter, factor: &Scalar) -> Result<()> {
        let img = self
            .images
            .get_mut(&l)
            .ok_or_else(|| Error::MissingStructure(format!("j({l})")))?;
        *img = img.scale(factor);
        Ok(())
    }

    /// Algebra-map extension of `j_k`, reduced in the chart.
    pub fn apply(&self, p: &NcPoly) -> Result<NcPoly> {
        let mut out = NcPoly::zero();
        for (w, c) in p.terms() {
            let mut acc = NcPoly::scalar(c.clone());
            for &l in &w.0 {
                acc = acc.mul(self.image(l)?);
            }
            out = out.add(&self.chart.pres.normal_form(&acc)?);
        }
        self.chart.pres.normal_form(&out)
    }

    /// The convolution inverse `j_k^-1 = j_k ∘ S`.
    pub fn apply_inv(&self, p: &NcPoly) -> Result<NcPoly> {
        self.apply(&self.parabolic.antipode(p)?)
    }

    /// Evaluate `j` on a twisted monomial of `O_{q,γ}(P)`: the twisted
    /// monomial is `Φ(w)` times the untwisted one in the canonical
    /// coordinates of the domain, so the image is `Φ(w) · j(w)`.  The phase
    /// is computed from the domain letters — the same convention
    /// `transport_presentation` uses for the twisted relations.
    pub fn apply_word_twisted(
        &self,
        w: &Word,
        mode: TwistMode,
        cocycle: &CocycleSpec,
    ) -> Result<NcPoly> {
        let phi = crate::twist::word_normalization_phase(cocycle, mode, w);
        self.apply(&NcPoly::term(w.clone(), phi))
    }
}

/// Relation preservation, the comodule property, and convolution
/// invertibility of one cleaving map.
pub fn verify_cleaving(cl: &CleavingMap, seed: u64) -> Result<Report> {
    let mut rep = Report::new();
    let (n, k) = (cl.n, cl.k);
    let pq = &cl.parabolic;

    // (i) every defining relation of O_q(P) maps to zero in F(U_k)
    let mut ok = true;
    let mut witness = String::new();
    for r in pq.pres.defining_rules() {
        let lhs = cl.apply(&NcPoly::word(r.lhs.clone()))?;
        let rhs = cl.apply(&r.rhs)?;
        let diff = cl.chart.clear_denominators(&lhs.sub(&rhs))?;
        if !diff.is_zero() {
            ok = false;
            witness = format!("{} -> {diff}", r.lhs);
            break;
        }
    }
    rep.push(Check::of(
        format!("cleaving/relations/n{n}k{k}"),
        format!("j_{k} preserves every defining relation of O_q(P) (incl. p11·det_q = 1)"),
        ok,
        witness,
    ));

    // (ii) comodule property on every generator
    let mut ok = true;
    let mut witness = String::new();
    for &l in pq.pres.letters() {
        let p = NcPoly::letter(l);
        let lhs = cl.chart.coaction(&cl.apply(&p)?)?;
        let rhs = pq
            .coproduct(&p)?
            .map_leg(0, |w| cl.apply(&NcPoly::word(w.clone())))?;
        let diff = lhs.sub(&rhs)?;
        if !cl.chart.tensor_is_zero(&diff, &pq.pres)? {
            ok = false;
            witness = format!("{l}: {}", Presentation::normal_form_tensor(&diff, &[&cl.chart.pres, &pq.pres])?);
            break;
        }
    }
    rep.push(Check::of(
        format!("cleaving/comodule/n{n}k{k}"),
        format!("δ_{k} ∘ j_{k} = (j_{k} ⊗ id) ∘ Δ_P on generators"),
        ok,
        witness,
    ));

    // (iii) convolution invertibility on generators and sampled products
    let mut rng = SplitMix64::new(seed);
    let letters: Vec<Letter> = pq.pres.letters().to_vec();
    let mut items: Vec<NcPoly> = letters.iter().map(|&l| NcPoly::letter(l)).collect();
    for _ in 0..6 {
        let a = *rng.pick(&letters);
        let b = *rng.pick(&letters);
        items.push(NcPoly::word(Word::from_letters(&[a, b])));
    }
    let mut ok = true;
    let mut witness = String::new();
    for h in &items {
        let target = NcPoly::scalar(pq.counit(h)?);
        let delta = pq.coproduct(h)?;
        let mut conv = NcPoly::zero();
        let mut conv_rev = NcPoly::zero();
        for (legs, c) in delta.terms() {
            let jh1 = cl.apply(&NcPoly::word(legs[0].clone()))?;
            let jsh2 = cl.apply_inv(&NcPoly::word(legs[1].clone()))?;
            conv = conv.add(&jh1.mul(&jsh2).scale(c));
            let jsh1 = cl.apply_inv(&NcPoly::word(legs[0].clone()))?;
            let jh2 = cl.apply(&NcPoly::word(legs[1].clone()))?;
            conv_rev = conv_rev.add(&jsh1.mul(&jh2).scale(c));
        }
        if !cl.chart.is_zero_element(&conv.sub(&target))?
            || !cl.chart.is_zero_element(&conv_rev.sub(&target))?
        {
            ok = false;
            witness = format!(
                "h = {h}: j*j^-1 = {}",
                cl.chart.pres.normal_form(&conv)?
            );
            break;
        }
    }
    rep.push(Check::of(
        format!("cleaving/convolution/n{n}k{k}"),
        format!("(j_{k} * j_{k}∘S)(h) = ε(h)·1 on generators and sampled products"),
        ok,
        witness,
    ));

    // the smashed product is nontrivial: some generator image fails to
    // commute with some coinvariant d_j d_k^-1
    let mut nontrivial = false;
    'search: for &l in pq.pres.letters() {
        let jh = cl.apply(&NcPoly::letter(l))?;
        for j in (1..=n).filter(|&j| j != k) {
            let b = NcPoly::word(Word::from_letters(&[Letter::A(j, 1), Letter::InvD(k)]));
            let comm = jh.mul(&b).sub(&b.mul(&jh));
            if !cl.chart.is_zero_element(&comm)? {
                nontrivial = true;
                break 'search;
            }
        }
    }
    rep.push(Check::of(
        format!("cleaving/smash-nontrivial/n{n}k{k}"),
        format!("the smashed product is nontrivial: some j_{k}(h) fails to commute with B"),
        nontrivial,
        "every generator image commutes with the coinvariant generators",
    ));

    Ok(rep)
}

/// The mutually inverse trivializations `θ(b⊗h) = b·j(h)` and
/// `Φ(a) = a_(0) j^-1(a_(1)) ⊗ a_(2)` on spanning elements up to degree `d`.
pub fn verify_trivialization(cl: &CleavingMap, d: usize) -> Result<Report> {
    let mut rep = Report::new();
    let (n, k) = (cl.n, cl.k);
    let pq = &cl.parabolic;
    let mut inv_cache: BTreeMap<Word, NcPoly> = BTreeMap::new();
    let mut apply_inv_word = |cl: &CleavingMap, w: &Word| -> Result<NcPoly> {
        if let Some(hit) = inv_cache.get(w) {
            return Ok(hit.clone());
        }
        let val = cl.apply_inv(&NcPoly::word(w.clone()))?;
        inv_cache.insert(w.clone(), val.clone());
        Ok(val)
    };

    // Φ: expand δ twice, multiply in j^-1 on the middle leg
    let phi = |cl: &CleavingMap,
               apply_inv_word: &mut dyn FnMut(&CleavingMap, &Word) -> Result<NcPoly>,
               x: &NcPoly|
     -> Result<TensorPoly> {
        let d1 = cl.chart.coaction(x)?;
        let d2 = d1.expand_leg(0, 1, |w| cl.chart.coaction(&NcPoly::word(w.clone())))?;
        let mut out = TensorPoly::zero(2);
        for (legs, c) in d2.terms() {
            let b = NcPoly::word(legs[0].clone()).mul(&apply_inv_word(cl, &legs[1])?);
            let b = cl.chart.pres.normal_form(&b)?;
            for (bw, bc) in b.terms() {
                out.add_term(vec![bw.clone(), legs[2].clone()], &(c * bc) * &Scalar::one());
            }
        }
        Presentation::normal_form_tensor(&out, &[&cl.chart.pres, &pq.pres])
    };

    // B-basis: monomials in u_j = d_j d_k^-1; H-basis: normal P-words
    let others: Vec<u8> = (1..=n).filter(|&j| j != k).collect();
    let mut b_basis: Vec<NcPoly> = vec![NcPoly::one()];
    let mut frontier: Vec<NcPoly> = b_basis.clone();
    for _ in 0..(d / 2).max(1) {
        let mut next = Vec::new();
        for b in &frontier {
            for &j in &others {
                let u = NcPoly::word(Word::from_letters(&[Letter::A(j, 1), Letter::InvD(k)]));
                next.push(cl.chart.pres.normal_form(&b.mul(&u))?);
            }
        }
        b_basis.extend(next.iter().cloned());
        frontier = next;
    }

    // Φ∘θ = id on B-basis x H-basis words
    let mut ok = true;
    let mut witness = String::new();
    'outer: for b in &b_basis {
        let b_len = b.words().map(|w| w.len()).max().unwrap_or(0);
        for h in pq.pres.normal_words(d.saturating_sub(b_len / 2)) {
            let theta = cl.chart.pres.normal_form(&b.mul(&cl.apply(&NcPoly::word(h.clone()))?))?;
            let round = phi(cl, &mut apply_inv_word, &theta)?;
            let expected =
                Presentation::normal_form_tensor(
                    &TensorPoly::of(&[b, &NcPoly::word(h.clone())]),
                    &[&cl.chart.pres, &pq.pres],
                )?;
            let diff = round.sub(&expected)?;
            if !cl.chart.tensor_is_zero(&diff, &pq.pres)? {
                ok = false;
                witness = format!("b = {b}, h = {h}: {diff}");
                break 'outer;
            }
        }
    }
    rep.push(Check::of(
        format!("trivialization/phi-theta/n{n}k{k}"),
        format!("Φ∘θ = id on B-basis × H-basis words up to degree {d}"),
        ok,
        witness,
    ));

    // θ∘Φ = id on chart normal words, and the first leg of Φ is coinvariant
    let mut ok = true;
    let mut coinv_ok = true;
    let mut witness = String::new();
    let mut coinv_witness = String::new();
    for w in cl.chart.pres.normal_words(d) {
        let x = NcPoly::word(w.clone());
        let phix = phi(cl, &mut apply_inv_word, &x)?;
        // group by the H-leg and check each B-component is coinvariant
        let mut by_h: BTreeMap<Word, NcPoly> = BTreeMap::new();
        for (legs, c) in phix.terms() {
            by_h
                .entry(legs[1].clone())
                .or_insert_with(NcPoly::zero)
                .add_term(legs[0].clone(), c.clone());
        }
        if coinv_ok {
            for (h, b) in &by_h {
                let defect = cl.chart.coinvariance_defect(b)?;
                if !cl.chart.tensor_is_zero(&defect, &pq.pres)? {
                    coinv_ok = false;
                    coinv_witness = format!("x = {w}, h-leg {h}: δ(b) - b⊗1 = {defect}");
                    break;
                }
            }
        }
        let mut back = NcPoly::zero();
        for (h, b) in &by_h {
            back = back.add(&b.mul(&cl.apply(&NcPoly::word(h.clone()))?));
        }
        if !cl.chart.is_zero_element(&back.sub(&x))? {
            ok = false;
            witness = format!("x = {w}: θ(Φ(x)) = {}", cl.chart.pres.normal_form(&back)?);
            break;
        }
    }
    rep.push(Check::of(
        format!("trivialization/theta-phi/n{n}k{k}"),
        format!("θ∘Φ = id on F(U_{k}) normal words up to degree {d}"),
        ok,
        witness,
    ));
    rep.push(Check::of(
        format!("trivialization/coinvariant-leg/n{n}k{k}"),
        "the first tensor leg of Φ is coinvariant",
        coinv_ok,
        coinv_witness,
    ));

    Ok(rep)
}

/// One-sided canonical-map check: `χ ∘ χ~ = id` on `A ⊗ H` spanning
/// elements up to degree `d`, where `χ~(a⊗h) = a·j^-1(h_1) ⊗ j(h_2)`.
pub fn canonical_map_section(cl: &CleavingMap, d: usize) -> Result<Report> {
    let mut rep = Report::new();
    let (n, k) = (cl.n, cl.k);
    let pq = &cl.parabolic;
    let mut ok = true;
    let mut witness = String::new();
    'outer: for a in cl.chart.pres.normal_words(d.saturating_sub(1)) {
        for h in pq.pres.normal_words(d.saturating_sub(a.len()).max(1)) {
            let delta_h = pq.coproduct(&NcPoly::word(h.clone()))?;
            // χ(χ~(a ⊗ h)) = Σ a j^-1(h_1) j(h_2)_(0) ⊗ j(h_2)_(1)
            let mut out = TensorPoly::zero(2);
            for (legs, c) in delta_h.terms() {
                let u = NcPoly::word(a.clone()).mul(&cl.apply_inv(&NcPoly::word(legs[0].clone()))?);
                let v = cl.apply(&NcPoly::word(legs[1].clone()))?;
                let dv = cl.chart.coaction(&v)?;
                for (vlegs, vc) in dv.terms() {
                    let prod = cl.chart.pres.normal_form(&u.mul(&NcPoly::word(vlegs[0].clone())))?;
                    for (pw, pc) in prod.terms() {
                        out.add_term(vec![pw.clone(), vlegs[1].clone()], &(&(c * vc) * pc) * &Scalar::one());
                    }
                }
            }
            let expected = TensorPoly::term(vec![a.clone(), h.clone()], Scalar::one());
            let diff = out.sub(&expected)?;
            if !cl.chart.tensor_is_zero(&diff, &pq.pres)? {
                ok = false;
                witness = format!("a = {a}, h = {h}: {diff}");
                break 'outer;
            }
        }
    }
    rep.push(Check::of(
        format!("canonical/section/n{n}k{k}"),
        format!("χ ∘ χ~ = id on A ⊗ H spanning elements up to degree {d}"),
        ok,
        witness,
    ));
    Ok(rep)
}

/// The determinant factorization behind the cleaving maps, checked by full
/// symbolic expansion in `O_q(M_n)[d_k^-1]` (where `det_q` is not 1):
/// `J_k(p_11 · det_q(p_αβ)) = det_q(a_ij)`.
pub fn factorization_check(n: u8, k: u8) -> Result<Report> {
    let mut rep = Report::new();
    let mn = qgroups::build_mn(n)?;
    let loc = localization::localize(&mn, &[k])?;
    let inv = NcPoly::letter(Letter::InvD(k));
    let image = |i: u8, j: u8| -> Result<NcPoly> {
        Ok(if i == 1 && j == 1 {
            NcPoly::letter(Letter::A(k, 1))
        } else if i == 1 {
            NcPoly::letter(Letter::A(k, j))
        } else {
            let r = block_row(n, k, i);
            let rows = if r < k { [r, k] } else { [k, r] };
            qminor(&rows, &[1, j])?.mul(&inv)
        })
    };
    let block: Vec<u8> = (2..=n).collect();
    let det_block = qgroups::qminor_with(&block, &block, |i, j| {
        qgroups::pi_letter(Letter::A(i, j))
    })?;
    let mut lhs = NcPoly::zero();
    for (w, c) in det_block.terms() {
        let mut acc = NcPoly::scalar(c.clone());
        for &l in &w.0 {
            let Letter::P(i, j) = l else { unreachable!("block minor uses p letters") };
            acc = acc.mul(&image(i, j)?);
        }
        lhs = lhs.add(&acc);
    }
    lhs = NcPoly::letter(Letter::A(k, 1)).mul(&lhs);
    let diff = lhs.sub(&qgroups::det_q(n));
    let cleared = loc.clear_denominators(&diff)?;
    rep.push(Check::of(
        format!("factorization/n{n}k{k}"),
        format!("J_{k}(p_11 · det_q(p_αβ)) = det_q(a_ij) in O_q(M_{n})[d_{k}^-1]"),
        cleared.is_zero(),
        format!("{cleared}"),
    ));
    Ok(rep)
}

// ---------------------------------------------------------------------------
// Crossed cocycle
// ---------------------------------------------------------------------------

/// `τ(h,g) = j(h_1) j(g_1) j^-1(h_2 g_2)` tabulated on generator pairs, for
/// the chart product twisted by the given mode (use the trivial cocycle or
/// any mode with it for the untwisted bundle).  The table stores the
/// denominator-cleared defects `τ(h,g) - ε(h)ε(g)·1`; triviality means all
/// defects vanish.
pub struct CrossedCocycle {
    pub n: u8,
    pub k: u8,
    table: BTreeMap<(Letter, Letter), NcPoly>,
    expected: BTreeMap<(Letter, Letter), NcPoly>,
    pub coinvariance: Report,
}

impl CrossedCocycle {
    pub fn is_trivial(&self) -> bool {
        self.table == self.expected
    }

    pub fn first_nontrivial(&self) -> Option<String> {
        self.table.iter().find_map(|(pair, v)| {
            (self.expected[pair] != *v)
                .then(|| format!("cleared τ({}, {}) - ε⊗ε = {v}", pair.0, pair.1))
        })
    }

    /// Cleared defect per generator pair.
    pub fn defects(&self) -> impl Iterator<Item = (&(Letter, Letter), &NcPoly)> {
        self.table.iter()
    }
}

/// Tabulate the crossed cocycle of the (possibly Σ-twisted) chart extension.
/// The products of chart elements are twisted through their torus weight
/// classes (the K-coaction of the chart, where weights live modulo
/// `t_1 … t_n = 1`); triviality and coinvariance are tested exactly by
/// clearing denominators through the base algebra.
pub fn crossed_cocycle(
    n: u8,
    k: u8,
    mode: TwistMode,
    cocycle: &CocycleSpec,
) -> Result<CrossedCocycle> {
    let cl = build_cleaving(n, k)?;
    let pq = &cl.parabolic;
    let pres = &cl.chart.pres;
    let letters: Vec<Letter> = pq.pres.letters().to_vec();
    let mut table = BTreeMap::new();
    let mut expected = BTreeMap::new();
    let mut coinvariance = Report::new();
    let twisted_mul = |a: &NcPoly, b: &NcPoly| -> Result<NcPoly> {
        crate::twist::class_phase_product(mode, cocycle, pres, a, b)
    };
    for &h in &letters {
        let dh = pq.coproduct(&NcPoly::letter(h))?;
        for &g in &letters {
            let dg = pq.coproduct(&NcPoly::letter(g))?;
            let mut tau = NcPoly::zero();
            for (hl, hc) in dh.terms() {
                for (gl, gc) in dg.terms() {
                    let jh1 = cl.apply(&NcPoly::word(hl[0].clone()))?;
                    let jg1 = cl.apply(&NcPoly::word(gl[0].clone()))?;
                    let prod12 = twisted_mul(&jh1, &jg1)?;
                    let h2g2 = pq
                        .pres
                        .normal_form(&NcPoly::word(hl[1].clone().concat(&gl[1])))?;
                    let jinv = cl.apply_inv(&h2g2)?;
                    tau = tau.add(&twisted_mul(&prod12, &jinv)?.scale(&(hc * gc)));
                }
            }
            let eps = &pq.counit(&NcPoly::letter(h))? * &pq.counit(&NcPoly::letter(g))?;
            let tau = cl.chart.clear_denominators(&tau.sub(&NcPoly::scalar(eps)))?;
            // coinvariance of the value
            let defect = cl.chart.coinvariance_defect(&tau)?;
            coinvariance.push(Check::of(
                format!("tau/coinvariant/n{n}k{k}/{h}-{g}"),
                format!("τ({h},{g}) is coinvariant"),
                cl.chart.tensor_is_zero(&defect, &pq.pres)?,
                format!("{defect}"),
            ));
            table.insert((h, g), tau);
            expected.insert((h, g), NcPoly::zero());
        }
    }
    Ok(CrossedCocycle { n, k, table, expected, coinvariance })
}

// ---------------------------------------------------------------------------
// Global sections as a pullback (n = 2)
// ---------------------------------------------------------------------------

/// Verify that the degree-≤d part of `O_q(SL_2)` injects into
/// `F(U_1) × F(U_2)` with image exactly the pairs agreeing in `F(U_12)`.
pub fn global_sections_pullback(d: usize) -> Result<Report> {
    let mut rep = Report::new();
    let sheaf = build_sheaf(2)?;
    let u1 = sheaf.chart(&[1])?;
    let u2 = sheaf.chart(&[2])?;
    let u12 = sheaf.chart(&[1, 2])?;
    let base_words = sheaf.global.pres.normal_words(d);

    // injectivity: base normal words stay distinct normal words in each chart
    let inj = base_words
        .iter()
        .all(|w| u1.pres.is_normal_word(w) && u2.pres.is_normal_word(w));
    rep.push(Check::of(
        format!("pullback/inject/d{d}"),
        format!("O_q(SL_2) degree-≤{d} part injects into F(U_1) × F(U_2)"),
        inj,
        "a base normal word reduced further in a chart",
    ));

    // equalizer of the two restrictions to F(U_12), by exact linear algebra
    let w1 = u1.pres.normal_words(d);
    let w2 = u2.pres.normal_words(d);
    let mut row_index: BTreeMap<Word, usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, Scalar)> = Vec::new();
    for (col, w) in w1.iter().enumerate() {
        let r = u12.pres.normal_form(&NcPoly::word(w.clone()))?;
        for (word, c) in r.terms() {
            let next = row_index.len();
            let idx = *row_index.entry(word.clone()).or_insert(next);
            entries.push((idx, col, c.clone()));
        }
    }
    for (col, w) in w2.iter().enumerate() {
        let r = u12.pres.normal_form(&NcPoly::word(w.clone()))?;
        for (word, c) in r.terms() {
            let next = row_index.len();
            let idx = *row_index.entry(word.clone()).or_insert(next);
            entries.push((idx, w1.len() + col, -c));
        }
    }
    let mut mat = ScalarMat::zero(row_index.len().max(1), w1.len() + w2.len());
    for (r, c, v) in entries {
        mat.add_to(r, c, &v);
    }
    let equalizer_dim = (w1.len() + w2.len()) - mat.rank()?;
    rep.push(Check::of(
        format!("pullback/equalizer/d{d}"),
        format!(
            "the equalizer of F(U_1), F(U_2) over F(U_12) has the dimension of the degree-≤{d} part"
        ),
        equalizer_dim == base_words.len(),
        format!("equalizer dim {equalizer_dim}, global dim {}", base_words.len()),
    ));
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freealg::parse;

    #[test]
    fn sheaf_poset_n2() {
        let sheaf = build_sheaf(2).unwrap();
        assert_eq!(sheaf.charts.len(), 3);
        // restriction of a base letter is the inclusion
        let p = NcPoly::letter(Letter::A(1, 2));
        let r = sheaf.restriction(&[1], &[1, 2], &p).unwrap();
        assert_eq!(r, p);
        assert!(sheaf.restriction(&[1], &[2], &p).is_err());
    }

    #[test]
    fn cleaving_images_on_the_small_charts() {
        // j_1: t^±1 -> a^±1, p -> b; j_2: t^±1 -> c^±1, p -> d
        let j1 = build_cleaving(2, 1).unwrap();
        let ctx = j1.chart().pres.context();
        assert_eq!(*j1.image(Letter::P(1, 1)).unwrap(), parse("a[1,1]", &ctx).unwrap());
        assert_eq!(*j1.image(Letter::InvP11).unwrap(), parse("d[1]^-1", &ctx).unwrap());
        assert_eq!(*j1.image(Letter::P(1, 2)).unwrap(), parse("a[1,2]", &ctx).unwrap());
        let j2 = build_cleaving(2, 2).unwrap();
        let ctx = j2.chart().pres.context();
        assert_eq!(*j2.image(Letter::P(1, 1)).unwrap(), parse("a[2,1]", &ctx).unwrap());
        assert_eq!(*j2.image(Letter::P(1, 2)).unwrap(), parse("a[2,2]", &ctx).unwrap());
        // p22 = p11^-1 in O_q(P); j_2(p22) must equal d_2^-1
        let p22 = j2.image(Letter::P(2, 2)).unwrap();
        assert_eq!(*p22, parse("d[2]^-1", &ctx).unwrap());
    }

    #[test]
    fn cleaving_minor_and_elementary_forms_agree() {
        // n=3, k=1: j_1(p22) = a11^-1 D^{12}_{12}
        let j1 = build_cleaving(3, 1).unwrap();
        let chart = j1.chart();
        let minor = qminor(&[1, 2], &[1, 2]).unwrap();
        let alt = NcPoly::letter(Letter::InvD(1)).mul(&minor);
        let alt = chart.pres.normal_form(&alt).unwrap();
        assert_eq!(*j1.image(Letter::P(2, 2)).unwrap(), alt);
        // elementary form: j_k(p_ab) = a_ab - a_a1 a_k1^-1 a_kb for a != k
        let elem = parse(
            "a[2,2] - a[2,1]*d[1]^-1*a[1,2]",
            &chart.pres.context(),
        )
        .unwrap();
        assert_eq!(
            *j1.image(Letter::P(2, 2)).unwrap(),
            chart.pres.normal_form(&elem).unwrap()
        );
    }

    #[test]
    fn verify_cleaving_n2() {
        for k in [1, 2] {
            let cl = build_cleaving(2, k).unwrap();
            let rep = verify_cleaving(&cl, 0).unwrap();
            assert!(rep.pass(), "k={k}: {:?}", rep.failures().next());
        }
    }

    #[test]
    fn corrupted_image_fails_relations() {
        // drop the -q factor on the α<k branch: scale by -q^-1
        let mut cl = build_cleaving(3, 2).unwrap();
        cl.corrupt_image(Letter::P(2, 2), &Scalar::neg_q_pow(-1)).unwrap();
        let rep = verify_cleaving(&cl, 0).unwrap();
        assert!(!rep.pass());
        let failure = rep.failures().next().unwrap();
        assert!(failure.id.contains("relations"));
        assert!(failure.witness.as_deref().is_some_and(|w| !w.is_empty()));
    }

    #[test]
    fn coaction_of_cleaving_image_of_p() {
        // δ∘j_1(p) = b ⊗ t^-1 + a ⊗ p
        let cl = build_cleaving(2, 1).unwrap();
        let jp = cl.apply(&NcPoly::letter(Letter::P(1, 2))).unwrap();
        let d = cl.chart().coaction(&jp).unwrap();
        let mut expected = TensorPoly::zero(2);
        expected.add_term(
            vec![Word::letter(Letter::A(1, 2)), Word::letter(Letter::InvP11)],
            Scalar::one(),
        );
        expected.add_term(
            vec![Word::letter(Letter::A(1, 1)), Word::letter(Letter::P(1, 2))],
            Scalar::one(),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn trivialization_and_canonical_n2() {
        let cl = build_cleaving(2, 1).unwrap();
        let rep = verify_trivialization(&cl, 2).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().next());
        let rep = canonical_map_section(&cl, 2).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().next());
    }

    #[test]
    fn untwisted_tau_is_trivial() {
        let tau = crossed_cocycle(2, 1, TwistMode::Both, &CocycleSpec::trivial(2)).unwrap();
        assert!(tau.is_trivial(), "{:?}", tau.first_nontrivial());
        assert!(tau.coinvariance.pass());
    }

    #[test]
    fn pullback_small() {
        let rep = global_sections_pullback(0).unwrap();
        assert!(rep.pass());
        let rep = global_sections_pullback(2).unwrap();
        assert!(rep.pass(), "{:?}", rep.failures().next());
    }
}
