//! The weight-routed free algebra on the idempotent generators: words of
//! E/F/P/Q letters anchored at an affine weight, with orthogonal-idempotent
//! multiplication, bracket expansion, the psi involution, the orientation
//! renormalization and an ad-derivation engine driven by verified
//! basic-commutator tables.

use crate::dynkin::{pair_asym_alpha, pair_asym_alpha_left, shift, CartanDatum, GenTag, Weight};
use crate::heisenberg::PairClass;
use crate::laurent::{qint, LaurentPoly, Scalar};
use std::collections::BTreeMap;
use std::fmt;

/// Ambient configuration: Cartan datum plus the fixed positive integer level.
#[derive(Clone, Debug)]
pub struct AlgCtx {
    pub datum: CartanDatum,
    pub c: i64,
}

impl AlgCtx {
    pub fn new(datum: CartanDatum, c: i64) -> Self {
        assert!(c > 0, "the level is a fixed positive integer");
        AlgCtx { datum, c }
    }

    pub fn pair_class(&self, i: usize, j: usize) -> PairClass {
        PairClass::of(&self.datum, i, j)
    }
}

/// One word letter. Mode letters with n = 0 are the identity and are never
/// stored; bracketed letters with n = 0 are zero (their defining sum has the
/// single vanishing [0] term).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Gen {
    E { i: usize, r: i64 },
    F { i: usize, r: i64 },
    /// P^{(n)}
    P { i: usize, n: u32 },
    /// P^{(1^n)}
    P1 { i: usize, n: u32 },
    /// Q^{(n)}
    Q { i: usize, n: u32 },
    /// Q^{(1^n)}
    Q1 { i: usize, n: u32 },
    /// P^{[n]}
    PB { i: usize, n: u32 },
    /// P^{[1^n]}
    PB1 { i: usize, n: u32 },
    /// Q^{[n]}
    QB { i: usize, n: u32 },
    /// Q^{[1^n]}
    QB1 { i: usize, n: u32 },
    /// Divided power E_{i,m}^{(r)}, r >= 1.
    EDiv { i: usize, m: i64, r: u32 },
    /// Divided power F_{i,m}^{(r)}, r >= 1.
    FDiv { i: usize, m: i64, r: u32 },
}

impl Gen {
    pub fn vertex(&self) -> usize {
        match *self {
            Gen::E { i, .. }
            | Gen::F { i, .. }
            | Gen::P { i, .. }
            | Gen::P1 { i, .. }
            | Gen::Q { i, .. }
            | Gen::Q1 { i, .. }
            | Gen::PB { i, .. }
            | Gen::PB1 { i, .. }
            | Gen::QB { i, .. }
            | Gen::QB1 { i, .. }
            | Gen::EDiv { i, .. }
            | Gen::FDiv { i, .. } => i,
        }
    }

    pub fn is_heisenberg(&self) -> bool {
        matches!(
            self,
            Gen::P { .. }
                | Gen::P1 { .. }
                | Gen::Q { .. }
                | Gen::Q1 { .. }
                | Gen::PB { .. }
                | Gen::PB1 { .. }
                | Gen::QB { .. }
                | Gen::QB1 { .. }
        )
    }

    pub fn is_p_side(&self) -> bool {
        matches!(
            self,
            Gen::P { .. } | Gen::P1 { .. } | Gen::PB { .. } | Gen::PB1 { .. }
        )
    }

    pub fn is_q_side(&self) -> bool {
        matches!(
            self,
            Gen::Q { .. } | Gen::Q1 { .. } | Gen::QB { .. } | Gen::QB1 { .. }
        )
    }

    pub fn is_bracket(&self) -> bool {
        matches!(
            self,
            Gen::PB { .. } | Gen::PB1 { .. } | Gen::QB { .. } | Gen::QB1 { .. }
        )
    }

    fn tag(&self) -> GenTag {
        match *self {
            Gen::E { i, r } => GenTag::E { vertex: i, mode: r },
            Gen::F { i, r } => GenTag::F { vertex: i, mode: r },
            Gen::P { i, n } | Gen::P1 { i, n } | Gen::PB { i, n } | Gen::PB1 { i, n } => {
                GenTag::PMode { vertex: i, n }
            }
            Gen::Q { i, n } | Gen::Q1 { i, n } | Gen::QB { i, n } | Gen::QB1 { i, n } => {
                GenTag::QMode { vertex: i, n }
            }
            Gen::EDiv { .. } | Gen::FDiv { .. } => GenTag::Idem, // handled in weight_shift
        }
    }

    /// The weight shift contributed by this letter at level c.
    pub fn weight_shift(&self, base: &Weight, c: i64) -> Weight {
        match *self {
            Gen::EDiv { i, m, r } => {
                let mut w = base.clone();
                for _ in 0..r {
                    w = shift(&w, GenTag::E { vertex: i, mode: m }, c);
                }
                w
            }
            Gen::FDiv { i, m, r } => {
                let mut w = base.clone();
                for _ in 0..r {
                    w = shift(&w, GenTag::F { vertex: i, mode: m }, c);
                }
                w
            }
            _ => shift(base, self.tag(), c),
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gen::E { i, r } => write!(f, "E({i},{r})"),
            Gen::F { i, r } => write!(f, "F({i},{r})"),
            Gen::P { i, n } => write!(f, "P({i},{n})"),
            Gen::P1 { i, n } => write!(f, "P1({i},{n})"),
            Gen::Q { i, n } => write!(f, "Q({i},{n})"),
            Gen::Q1 { i, n } => write!(f, "Q1({i},{n})"),
            Gen::PB { i, n } => write!(f, "PB({i},{n})"),
            Gen::PB1 { i, n } => write!(f, "PB1({i},{n})"),
            Gen::QB { i, n } => write!(f, "QB({i},{n})"),
            Gen::QB1 { i, n } => write!(f, "QB1({i},{n})"),
            Gen::EDiv { i, m, r } => write!(f, "Ediv({i},{m};{r})"),
            Gen::FDiv { i, m, r } => write!(f, "Fdiv({i},{m};{r})"),
        }
    }
}

/// A word anchored at its source weight. `gens[0]` is the leftmost letter,
/// i.e. the one applied last; the rightmost letter acts on the source weight.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Word {
    pub source: Weight,
    pub gens: Vec<Gen>,
}

impl Word {
    pub fn idem(source: Weight) -> Self {
        Word {
            source,
            gens: Vec::new(),
        }
    }

    pub fn target(&self, c: i64) -> Weight {
        let mut w = self.source.clone();
        for g in self.gens.iter().rev() {
            w = g.weight_shift(&w, c);
        }
        w
    }

    /// The weight at which `gens[k]` acts (everything to its right applied).
    pub fn weight_at(&self, k: usize, c: i64) -> Weight {
        let mut w = self.source.clone();
        for g in self.gens[k + 1..].iter().rev() {
            w = g.weight_shift(&w, c);
        }
        w
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gens {
            write!(f, "{g} ")?;
        }
        write!(f, "1[{}]", self.source)
    }
}

/// A finitely supported Scalar-linear combination of words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlgElement {
    terms: BTreeMap<Word, Scalar>,
}

impl AlgElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn idem(source: Weight) -> Self {
        Self::from_word(Word::idem(source), Scalar::one())
    }

    pub fn from_word(word: Word, coeff: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_word(word, coeff);
        e
    }

    /// A single-letter element anchored at `source`. Mode letters of weight
    /// zero collapse to the idempotent; bracketed letters of weight zero are
    /// zero; divided powers of order zero are the idempotent.
    pub fn from_gen(gen: Gen, source: Weight) -> Self {
        match gen {
            Gen::P { n: 0, .. } | Gen::P1 { n: 0, .. } | Gen::Q { n: 0, .. } | Gen::Q1 { n: 0, .. } => {
                Self::idem(source)
            }
            Gen::PB { n: 0, .. }
            | Gen::PB1 { n: 0, .. }
            | Gen::QB { n: 0, .. }
            | Gen::QB1 { n: 0, .. } => Self::zero(),
            Gen::EDiv { r: 0, .. } | Gen::FDiv { r: 0, .. } => Self::idem(source),
            Gen::EDiv { i, m, r: 1 } => Self::from_word(
                Word {
                    source,
                    gens: vec![Gen::E { i, r: m }],
                },
                Scalar::one(),
            ),
            Gen::FDiv { i, m, r: 1 } => Self::from_word(
                Word {
                    source,
                    gens: vec![Gen::F { i, r: m }],
                },
                Scalar::one(),
            ),
            g => Self::from_word(
                Word {
                    source,
                    gens: vec![g],
                },
                Scalar::one(),
            ),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_word(&mut self, word: Word, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(entry) => {
                *entry += &coeff;
                if entry.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn add(&self, other: &AlgElement) -> AlgElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &AlgElement) -> AlgElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> AlgElement {
        if s.is_zero() {
            return Self::zero();
        }
        AlgElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * s))
                .collect(),
        }
    }

    /// Product in the idempotented algebra: word pairs whose weights do not
    /// compose multiply to zero.
    pub fn mul(&self, other: &AlgElement, ctx: &AlgCtx) -> AlgElement {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if wa.source == wb.target(ctx.c) {
                    // a acts after b, so a's letters sit to the left.
                    let mut gens = wa.gens.clone();
                    gens.extend_from_slice(&wb.gens);
                    out.add_word(
                        Word {
                            source: wb.source.clone(),
                            gens,
                        },
                        ca * cb,
                    );
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &AlgElement, ctx: &AlgCtx) -> AlgElement {
        self.mul(other, ctx).sub(&other.mul(self, ctx))
    }

    /// Translate every word's anchor by a weight offset. Relations are
    /// generic in the anchor, so this is how factors are re-aligned when a
    /// derivation changes the routing of the other factor.
    pub fn translate(&self, offset: &Weight) -> AlgElement {
        AlgElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    (
                        Word {
                            source: w.source.add(offset),
                            gens: w.gens.clone(),
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Prepend a letter to every word (apply `g` after the element).
    pub fn prepend_letter(&self, g: Gen) -> AlgElement {
        AlgElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| {
                    let mut gens = Vec::with_capacity(w.gens.len() + 1);
                    gens.push(g);
                    gens.extend_from_slice(&w.gens);
                    (
                        Word {
                            source: w.source.clone(),
                            gens,
                        },
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Append a letter to every word (apply `g` before the element; the
    /// element's letters then act at the shifted weights).
    pub fn append_letter(&self, g: Gen, ctx: &AlgCtx) -> AlgElement {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut gens = w.gens.clone();
            gens.push(g);
            // Keep the anchor: the new source is the weight from which g maps
            // into the old source.
            let source = un_shift(&w.source, g, ctx.c);
            out.add_word(Word { source, gens }, c.clone());
        }
        out
    }

    /// Every word's declared target, grouped; used by invariants and the
    /// Fock evaluator.
    pub fn blocks(&self, c: i64) -> BTreeMap<(Weight, Weight), usize> {
        let mut out = BTreeMap::new();
        for (w, _) in &self.terms {
            *out.entry((w.source.clone(), w.target(c))).or_insert(0) += 1;
        }
        out
    }

    /// True when all words share one (source, target) pair.
    pub fn is_single_block(&self, c: i64) -> bool {
        self.blocks(c).len() <= 1
    }

    /// Multiply every coefficient through and check it is a Laurent
    /// polynomial (no leftover denominators).
    pub fn all_coefficients_polynomial(&self) -> bool {
        self.terms.values().all(|c| c.is_polynomial())
    }
}

/// The weight w' with shift(w', g) = w.
fn un_shift(w: &Weight, g: Gen, c: i64) -> Weight {
    let delta = g.weight_shift(&Weight::zero(), c);
    w.sub(&delta)
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "({c}) {w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Replace every bracketed letter by its defining sum over round letters:
///   Q^{[1^n]} = sum_m (-q)^m [m] Q^{(1^{n-m})} Q^{(m)}
///   Q^{[n]}   = sum_m (-q)^m [m] Q^{(n-m)} Q^{(1^m)}
///   P^{[1^n]} = sum_m (-q)^{-m} [m] P^{(1^{n-m})} P^{(m)}
///   P^{[n]}   = sum_m (-q)^{-m} [m] P^{(n-m)} P^{(1^m)}
pub fn expand_brackets(x: &AlgElement) -> AlgElement {
    let mut out = AlgElement::zero();
    let mut queue: Vec<(Word, Scalar)> = x.terms().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((word, coeff)) = queue.pop() {
        let pos = word.gens.iter().position(|g| g.is_bracket());
        let Some(p) = pos else {
            out.add_word(word, coeff);
            continue;
        };
        let g = word.gens[p];
        let (i, n, p_side, row_variant) = match g {
            Gen::QB1 { i, n } => (i, n, false, false),
            Gen::QB { i, n } => (i, n, false, true),
            Gen::PB1 { i, n } => (i, n, true, false),
            Gen::PB { i, n } => (i, n, true, true),
            _ => unreachable!(),
        };
        // The m = 0 summand carries [0] = 0; brackets of weight zero vanish.
        for m in 1..=n {
            let coeff_m = {
                let e = if p_side { -(m as i64) } else { m as i64 };
                &Scalar::neg_qpow(e) * &Scalar::from_poly(qint(m as i64))
            };
            let (first_n, second_n) = (n - m, m);
            let (first, second) = match (p_side, row_variant) {
                (false, false) => (Gen::Q1 { i, n: first_n }, Gen::Q { i, n: second_n }),
                (false, true) => (Gen::Q { i, n: first_n }, Gen::Q1 { i, n: second_n }),
                (true, false) => (Gen::P1 { i, n: first_n }, Gen::P { i, n: second_n }),
                (true, true) => (Gen::P { i, n: first_n }, Gen::P1 { i, n: second_n }),
            };
            let mut gens = word.gens[..p].to_vec();
            if first_n > 0 {
                gens.push(first);
            }
            gens.push(second);
            gens.extend_from_slice(&word.gens[p + 1..]);
            queue.push((
                Word {
                    source: word.source.clone(),
                    gens,
                },
                &coeff * &coeff_m,
            ));
        }
    }
    out
}

/// Expand divided-power letters into plain powers over [r]!:
/// E^{(r)} -> E^r / [r]!.
pub fn expand_divided_powers(x: &AlgElement) -> AlgElement {
    let mut out = AlgElement::zero();
    for (word, coeff) in x.terms() {
        let mut gens = Vec::with_capacity(word.gens.len());
        let mut scale = coeff.clone();
        for g in &word.gens {
            match *g {
                Gen::EDiv { i, m, r } => {
                    for _ in 0..r {
                        gens.push(Gen::E { i, r: m });
                    }
                    scale = &scale * &Scalar::ratio(LaurentPoly::one(), crate::laurent::qfactorial(r));
                }
                Gen::FDiv { i, m, r } => {
                    for _ in 0..r {
                        gens.push(Gen::F { i, r: m });
                    }
                    scale = &scale * &Scalar::ratio(LaurentPoly::one(), crate::laurent::qfactorial(r));
                }
                g => gens.push(g),
            }
        }
        out.add_word(
            Word {
                source: word.source.clone(),
                gens,
            },
            scale,
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// psi is defined on the Heisenberg subalgebra only.
    PsiOutsideHeisenberg(String),
    /// The ad table has no entry for a letter kind.
    MissingTableEntry(String),
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::PsiOutsideHeisenberg(w) => {
                write!(f, "psi involution applied to a non-Heisenberg word: {w}")
            }
            AlgebraError::MissingTableEntry(what) => {
                write!(f, "basic-commutator table has no entry for {what}")
            }
        }
    }
}

impl std::error::Error for AlgebraError {}

/// The involution psi: P^{(1^n)} <-> (-1)^n P^{(n)}, same for Q, transported
/// to bracketed letters as Q^{[1^n]} <-> (-1)^n Q^{[n]}. Rejects words with
/// E/F letters.
pub fn psi_involution(x: &AlgElement) -> Result<AlgElement, AlgebraError> {
    let mut out = AlgElement::zero();
    for (word, coeff) in x.terms() {
        let mut gens = Vec::with_capacity(word.gens.len());
        let mut sign_odd = false;
        for g in &word.gens {
            let (mapped, n) = match *g {
                Gen::P { i, n } => (Gen::P1 { i, n }, n),
                Gen::P1 { i, n } => (Gen::P { i, n }, n),
                Gen::Q { i, n } => (Gen::Q1 { i, n }, n),
                Gen::Q1 { i, n } => (Gen::Q { i, n }, n),
                Gen::PB { i, n } => (Gen::PB1 { i, n }, n),
                Gen::PB1 { i, n } => (Gen::PB { i, n }, n),
                Gen::QB { i, n } => (Gen::QB1 { i, n }, n),
                Gen::QB1 { i, n } => (Gen::QB { i, n }, n),
                other => {
                    return Err(AlgebraError::PsiOutsideHeisenberg(other.to_string()))
                }
            };
            if n % 2 == 1 {
                sign_odd = !sign_odd;
            }
            gens.push(mapped);
        }
        let c = if sign_odd {
            -coeff.clone()
        } else {
            coeff.clone()
        };
        out.add_word(
            Word {
                source: word.source.clone(),
                gens,
            },
            c,
        );
    }
    Ok(out)
}

/// Per-letter renormalization factor at the letter's local source weight.
///
/// The P/Q factors are the n-th powers of the printed n = 1 rules; the
/// printed constants do not extend to an algebra map verbatim (they would
/// send the identity P^{(0)} to -P^{(0)}), and the power form is the unique
/// multiplicative extension compatible with the worked a = 0 example.
fn renorm_letter_factor(ctx: &AlgCtx, g: Gen, source: &Weight) -> Scalar {
    let c = ctx.c;
    let minus_one_pow = |e: i64| -> Scalar {
        if e.rem_euclid(2) == 1 {
            -Scalar::one()
        } else {
            Scalar::one()
        }
    };
    match g {
        Gen::E { i, r } => {
            let sign = pair_asym_alpha(&ctx.datum, source, i);
            &minus_one_pow(sign) * &Scalar::qpow(r * c)
        }
        Gen::F { i, r } => {
            let target = g.weight_shift(source, c);
            let sign = pair_asym_alpha_left(&ctx.datum, i, &target);
            &(-minus_one_pow(sign)) * &Scalar::neg_qpow(r * c)
        }
        Gen::P { n, .. } | Gen::P1 { n, .. } => minus_one_pow(n as i64),
        Gen::Q { n, .. } | Gen::Q1 { n, .. } => minus_one_pow((c + 1) * n as i64),
        Gen::PB { n, .. } | Gen::PB1 { n, .. } => -minus_one_pow(n as i64),
        Gen::QB { n, .. } | Gen::QB1 { n, .. } => -minus_one_pow((c + 1) * n as i64),
        Gen::EDiv { i, m, r } => {
            let mut acc = Scalar::one();
            let mut w = source.clone();
            for _ in 0..r {
                acc = &acc * &renorm_letter_factor(ctx, Gen::E { i, r: m }, &w);
                w = Gen::E { i, r: m }.weight_shift(&w, c);
            }
            acc
        }
        Gen::FDiv { i, m, r } => {
            let mut acc = Scalar::one();
            let mut w = source.clone();
            for _ in 0..r {
                acc = &acc * &renorm_letter_factor(ctx, Gen::F { i, r: m }, &w);
                w = Gen::F { i, r: m }.weight_shift(&w, c);
            }
            acc
        }
    }
}

/// The renormalization map: q -> -q on coefficients and each word rescaled by
/// the product of per-letter factors evaluated along the word. `invert`
/// applies the inverse map, so the round trip is the identity.
pub fn renormalize(ctx: &AlgCtx, x: &AlgElement, invert: bool) -> AlgElement {
    let mut out = AlgElement::zero();
    for (word, coeff) in x.terms() {
        let mut factor = Scalar::one();
        for (k, g) in word.gens.iter().enumerate() {
            let local = word.weight_at(k, ctx.c);
            factor = &factor * &renorm_letter_factor(ctx, *g, &local);
        }
        let new_coeff = if invert {
            &coeff.neg_q() * &factor.neg_q().inv()
        } else {
            &coeff.neg_q() * &factor
        };
        out.add_word(word.clone(), new_coeff);
    }
    out
}

/// Substitute the renormalized presentation's letters by their images in the
/// original presentation (no q -> -q on coefficients): this is how a
/// renormalized catalogue body is compared against the transport of the
/// original body.
pub fn renorm_substitute(ctx: &AlgCtx, x: &AlgElement) -> AlgElement {
    let mut out = AlgElement::zero();
    for (word, coeff) in x.terms() {
        let mut factor = Scalar::one();
        for (k, g) in word.gens.iter().enumerate() {
            let local = word.weight_at(k, ctx.c);
            factor = &factor * &renorm_letter_factor(ctx, *g, &local);
        }
        out.add_word(word.clone(), &coeff.clone() * &factor);
    }
    out
}

/// Which mode acts in an ad-derivation: the round weight-1 letters P_i, Q_i.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum AdMode {
    P,
    Q,
}

/// A basic-commutator table: [g, X_{j,b}] = coeff * X_{j, b + delta} keyed by
/// (ad mode, E-or-F letter, vertex pair class). The mode delta is forced by
/// weight routing (P lowers, Q raises) and validated on construction.
#[derive(Clone, Debug, Default)]
pub struct CommutatorTable {
    entries: BTreeMap<(bool, bool, PairClass), Scalar>,
}

impl CommutatorTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert [g, letter] = coeff * (letter with mode shifted by the routing
    /// of g). `g_is_p` selects P (mode shift -1) or Q (+1); `letter_is_e`
    /// selects E or F.
    pub fn set(&mut self, g_is_p: bool, letter_is_e: bool, class: PairClass, coeff: Scalar) {
        self.entries.insert((g_is_p, letter_is_e, class), coeff);
    }

    pub fn get(
        &self,
        g_is_p: bool,
        letter_is_e: bool,
        class: PairClass,
    ) -> Result<Scalar, AlgebraError> {
        if class == PairClass::Orthogonal {
            return Ok(Scalar::zero());
        }
        self.entries
            .get(&(g_is_p, letter_is_e, class))
            .cloned()
            .ok_or_else(|| {
                AlgebraError::MissingTableEntry(format!(
                    "({}, {}, {:?})",
                    if g_is_p { "P" } else { "Q" },
                    if letter_is_e { "E" } else { "F" },
                    class
                ))
            })
    }
}

/// Leibniz expansion of [g, x] using a basic-commutator table. Heisenberg
/// letters commute with g; E/F letters are replaced via the table, with the
/// mode shifted by the routing of g (-1 for P, +1 for Q).
pub fn ad_derivation(
    ctx: &AlgCtx,
    mode: AdMode,
    g_vertex: usize,
    x: &AlgElement,
    table: &CommutatorTable,
) -> Result<AlgElement, AlgebraError> {
    let g_is_p = matches!(mode, AdMode::P);
    let delta = if g_is_p { -1 } else { 1 };
    let mut out = AlgElement::zero();
    for (word, coeff) in x.terms() {
        for (k, g) in word.gens.iter().enumerate() {
            let (replacement, letter_is_e) = match *g {
                Gen::E { i, r } => (Gen::E { i, r: r + delta }, true),
                Gen::F { i, r } => (Gen::F { i, r: r + delta }, false),
                ref h if h.is_heisenberg() => continue,
                ref other => {
                    return Err(AlgebraError::MissingTableEntry(format!(
                        "ad on letter {other}"
                    )))
                }
            };
            let class = ctx.pair_class(g_vertex, g.vertex());
            let entry = table.get(g_is_p, letter_is_e, class)?;
            if entry.is_zero() {
                continue;
            }
            let mut gens = word.gens.clone();
            gens[k] = replacement;
            out.add_word(
                Word {
                    source: word.source.clone(),
                    gens,
                },
                coeff * &entry,
            );
        }
    }
    Ok(out)
}

/// The basic-commutator constants read literally off the proof of the E-E
/// Serre-propagation argument: [P_i, E_{i,n}] = -[2] E_{i,n-1}, plus the
/// matching Q-direction with the opposite sign.
pub fn table_section_33(_ctx: &AlgCtx) -> CommutatorTable {
    let mut t = CommutatorTable::new();
    let two = Scalar::from_poly(qint(2));
    t.set(true, true, PairClass::Equal, -two.clone());
    t.set(false, true, PairClass::Equal, two);
    t
}

/// The constants used by the mixed-vertex propagation argument:
/// [P_i, E_{i,m}] = [2] E_{i,m-1} and [P_i, E_{j,n}] = -E_{j,n-1}.
pub fn table_section_34(_ctx: &AlgCtx) -> CommutatorTable {
    let mut t = CommutatorTable::new();
    let two = Scalar::from_poly(qint(2));
    t.set(true, true, PairClass::Equal, two.clone());
    t.set(true, true, PairClass::Adjacent, Scalar::from_int(-1));
    t.set(false, true, PairClass::Equal, -two);
    t.set(false, true, PairClass::Adjacent, Scalar::from_int(1));
    t
}

/// The constants that actually hold for the round weight-1 modes in the
/// original idempotent presentation, derived from the a = 0 cases of the
/// mixed commutator family with P^{[1]} = -q^{-1} P and Q^{[1]} = -q Q:
///
///   [Q_i, E_{i,b}] = -q^{-1-c} [2] E_{i,b+1}    [Q_i, F_{i,b}] =  q^{-1}  [2] F_{i,b+1}
///   [P_i, E_{i,b}] = -q       [2] E_{i,b-1}    [P_i, F_{i,b}] =  q^{1+c} [2] F_{i,b-1}
///   [Q_j, E_{i,b}] =  q^{-1-c}     E_{i,b+1}    [Q_j, F_{i,b}] = -q^{-1}      F_{i,b+1}
///   [P_j, E_{i,b}] =  q            E_{i,b-1}    [P_j, F_{i,b}] = -q^{1+c}     F_{i,b-1}
///
/// Each entry is itself a relation instance and is verified against the Fock
/// representation before propagation checks rely on it.
pub fn table_idempotent(ctx: &AlgCtx) -> CommutatorTable {
    let c = ctx.c;
    let two = qint(2);
    let mut t = CommutatorTable::new();
    t.set(
        false,
        true,
        PairClass::Equal,
        Scalar::from_poly(&two * &LaurentPoly::monomial(-1, -1 - c)),
    );
    t.set(
        false,
        false,
        PairClass::Equal,
        Scalar::from_poly(&two * &LaurentPoly::monomial(1, -1)),
    );
    t.set(
        true,
        true,
        PairClass::Equal,
        Scalar::from_poly(&two * &LaurentPoly::monomial(-1, 1)),
    );
    t.set(
        true,
        false,
        PairClass::Equal,
        Scalar::from_poly(&two * &LaurentPoly::monomial(1, 1 + c)),
    );
    t.set(false, true, PairClass::Adjacent, Scalar::qpow(-1 - c));
    t.set(
        false,
        false,
        PairClass::Adjacent,
        Scalar::from_poly(LaurentPoly::monomial(-1, -1)),
    );
    t.set(true, true, PairClass::Adjacent, Scalar::qpow(1));
    t.set(
        true,
        false,
        PairClass::Adjacent,
        Scalar::from_poly(LaurentPoly::monomial(-1, 1 + c)),
    );
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::CartanType;

    fn ctx_a1() -> AlgCtx {
        AlgCtx::new(CartanDatum::new(CartanType::A(1)), 1)
    }

    fn ctx_a2() -> AlgCtx {
        AlgCtx::new(CartanDatum::new(CartanType::A(2)), 1)
    }

    fn lam() -> Weight {
        Weight::fundamental(0)
    }

    #[test]
    fn orthogonal_idempotents() {
        let ctx = ctx_a1();
        let a = AlgElement::idem(lam());
        let b = AlgElement::idem(lam().add_alpha(0, 1));
        assert!(a.mul(&b, &ctx).is_zero());
        assert_eq!(a.mul(&a, &ctx), a);
    }

    #[test]
    fn routing_through_products() {
        let ctx = ctx_a1();
        let e = AlgElement::from_gen(Gen::E { i: 0, r: 2 }, lam());
        // E 1_lam * 1_lam = E 1_lam
        assert_eq!(e.mul(&AlgElement::idem(lam()), &ctx), e);
        // 1_mu * E 1_lam = E 1_lam for mu the target.
        let mu = Gen::E { i: 0, r: 2 }.weight_shift(&lam(), ctx.c);
        assert_eq!(AlgElement::idem(mu).mul(&e, &ctx), e);
        // Wrong side idempotent annihilates.
        assert!(AlgElement::idem(lam()).mul(&e, &ctx).is_zero());
    }

    #[test]
    fn mul_is_associative_on_samples() {
        let ctx = ctx_a2();
        let w = lam();
        let x = AlgElement::from_gen(Gen::F { i: 0, r: 1 }, Gen::E { i: 0, r: 0 }.weight_shift(&w, 1));
        let e = AlgElement::from_gen(Gen::E { i: 0, r: 0 }, w.clone());
        let idem = AlgElement::idem(w);
        let left = x.mul(&e, &ctx).mul(&idem, &ctx);
        let right = x.mul(&e.mul(&idem, &ctx), &ctx);
        assert_eq!(left, right);
    }

    #[test]
    fn bracket_expansion_low_cases() {
        let w = lam();
        // Q^{[1]} = -q Q^{(1)}
        let qb1 = AlgElement::from_gen(Gen::QB1 { i: 0, n: 1 }, w.clone());
        let expanded = expand_brackets(&qb1);
        let expected = AlgElement::from_gen(Gen::Q { i: 0, n: 1 }, w.clone())
            .scale(&Scalar::from_poly(LaurentPoly::monomial(-1, 1)));
        assert_eq!(expanded, expected);
        // P^{[1]} = -q^{-1} P^{(1)}
        let pb1 = AlgElement::from_gen(Gen::PB1 { i: 0, n: 1 }, w.clone());
        let expected_p = AlgElement::from_gen(Gen::P { i: 0, n: 1 }, w.clone())
            .scale(&Scalar::from_poly(LaurentPoly::monomial(-1, -1)));
        assert_eq!(expand_brackets(&pb1), expected_p);
        // Q^{[1^2]} = -q Q^{(1^1)} Q^{(1)} + q^2 [2] Q^{(2)}
        let qb2 = expand_brackets(&AlgElement::from_gen(Gen::QB1 { i: 0, n: 2 }, w.clone()));
        let mut expected2 = AlgElement::zero();
        expected2.add_word(
            Word {
                source: w.clone(),
                gens: vec![Gen::Q1 { i: 0, n: 1 }, Gen::Q { i: 0, n: 1 }],
            },
            Scalar::from_poly(LaurentPoly::monomial(-1, 1)),
        );
        expected2.add_word(
            Word {
                source: w.clone(),
                gens: vec![Gen::Q { i: 0, n: 2 }],
            },
            Scalar::from_poly(&LaurentPoly::monomial(1, 2) * &qint(2)),
        );
        assert_eq!(qb2, expected2);
        // Brackets of weight zero vanish.
        assert!(AlgElement::from_gen(Gen::QB1 { i: 0, n: 0 }, w).is_zero());
    }

    #[test]
    fn bracket_routing_is_consistent() {
        let ctx = ctx_a1();
        let w = lam();
        for g in [
            Gen::QB1 { i: 0, n: 3 },
            Gen::QB { i: 0, n: 3 },
            Gen::PB1 { i: 0, n: 2 },
            Gen::PB { i: 0, n: 2 },
        ] {
            let x = AlgElement::from_gen(g, w.clone());
            let expanded = expand_brackets(&x);
            let target = g.weight_shift(&w, ctx.c);
            for (word, _) in expanded.terms() {
                assert_eq!(word.target(ctx.c), target, "letter {g}");
                assert_eq!(word.source, w);
            }
        }
    }

    #[test]
    fn psi_is_an_involution_and_transports_brackets() {
        let w = lam();
        let x = {
            let mut e = AlgElement::zero();
            e.add_word(
                Word {
                    source: w.clone(),
                    gens: vec![Gen::P1 { i: 0, n: 2 }, Gen::Q { i: 0, n: 3 }],
                },
                Scalar::qpow(2),
            );
            e
        };
        let once = psi_involution(&x).unwrap();
        assert_eq!(psi_involution(&once).unwrap(), x);
        // psi(P^{(1^2)}) = P^{(2)}
        let p12 = AlgElement::from_gen(Gen::P1 { i: 0, n: 2 }, w.clone());
        assert_eq!(
            psi_involution(&p12).unwrap(),
            AlgElement::from_gen(Gen::P { i: 0, n: 2 }, w.clone())
        );
        // psi rejects E/F words.
        let ef = AlgElement::from_gen(Gen::E { i: 0, r: 0 }, w);
        assert!(psi_involution(&ef).is_err());
    }

    #[test]
    fn psi_commutes_with_bracket_expansion() {
        // psi(expand(Q^{[1^n]})) = (-1)^n expand(Q^{[n]}) for n <= 8.
        let w = lam();
        for n in 1..=8u32 {
            let lhs = psi_involution(&expand_brackets(&AlgElement::from_gen(
                Gen::QB1 { i: 0, n },
                w.clone(),
            )))
            .unwrap();
            let mut rhs = expand_brackets(&AlgElement::from_gen(Gen::QB { i: 0, n }, w.clone()));
            if n % 2 == 1 {
                rhs = rhs.scale(&-Scalar::one());
            }
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn renormalize_round_trips() {
        let ctx = ctx_a2();
        let w = Weight::fundamental(1).add_alpha(0, 1).add_delta(-2);
        let mut x = AlgElement::zero();
        x.add_word(
            Word {
                source: w.clone(),
                gens: vec![Gen::E { i: 0, r: 1 }, Gen::F { i: 1, r: -2 }, Gen::Q { i: 0, n: 2 }],
            },
            Scalar::from_poly(qint(3)),
        );
        x.add_word(Word::idem(w), Scalar::qpow(-1));
        let y = renormalize(&ctx, &x, false);
        assert_eq!(renormalize(&ctx, &y, true), x);
    }

    #[test]
    fn renormalize_worked_example() {
        // q^c [Q_i, E_{i,b}] 1_lam - [2] E_{i,b+1} 1_lam maps, after
        // normalizing the overall unit, to [Q_i, E_{i,b}] 1_lam - [2] E_{i,b+1} 1_lam.
        let ctx = ctx_a1();
        let w = lam();
        let b = 1i64;
        let qc = Scalar::qpow(ctx.c);
        let e_b = AlgElement::from_gen(Gen::E { i: 0, r: b }, w.clone());
        let q_after = AlgElement::from_gen(
            Gen::Q { i: 0, n: 1 },
            Gen::E { i: 0, r: b }.weight_shift(&w, ctx.c),
        );
        let qe = q_after.mul(&e_b, &ctx);
        let q_first = AlgElement::from_gen(Gen::Q { i: 0, n: 1 }, w.clone());
        let e_after = AlgElement::from_gen(
            Gen::E { i: 0, r: b },
            Gen::Q { i: 0, n: 1 }.weight_shift(&w, ctx.c),
        );
        let eq = e_after.mul(&q_first, &ctx);
        let commutator = qe.sub(&eq);
        let rhs = AlgElement::from_gen(Gen::E { i: 0, r: b + 1 }, w.clone())
            .scale(&Scalar::from_poly(qint(2)));
        let body = commutator.scale(&qc).sub(&rhs);
        let image = renormalize(&ctx, &body, false);
        // Expected: unit * ([Q, E_b] - [2] E_{b+1}); extract the unit from
        // the Q E_b word and compare.
        let probe_word = qe.terms().next().unwrap().0.clone();
        let unit = image
            .terms()
            .find(|(w2, _)| w2.gens == probe_word.gens)
            .expect("transport keeps the word")
            .1
            .clone();
        let expected = commutator.sub(&rhs).scale(&unit);
        assert_eq!(image, expected);
    }

    #[test]
    fn ad_leibniz_rule() {
        let ctx = ctx_a2();
        let table = table_idempotent(&ctx);
        let w = lam();
        let x = AlgElement::from_gen(Gen::E { i: 0, r: 1 }, w.clone());
        let y = AlgElement::from_gen(Gen::F { i: 1, r: -1 }, Gen::E { i: 0, r: 1 }.weight_shift(&w, 1));
        let xy = y.mul(&x, &ctx);
        let ad_xy = ad_derivation(&ctx, AdMode::P, 0, &xy, &table).unwrap();
        let ad_x = ad_derivation(&ctx, AdMode::P, 0, &x, &table).unwrap();
        let ad_y = ad_derivation(&ctx, AdMode::P, 0, &y, &table).unwrap();
        // Leibniz with anchored words: when the derivation acts in the right
        // factor, the left factor's anchor moves by the routing of P_i.
        let p_shift = shift(&Weight::zero(), GenTag::PMode { vertex: 0, n: 1 }, ctx.c);
        let leibniz = ad_y.mul(&x, &ctx).add(&y.translate(&p_shift).mul(&ad_x, &ctx));
        assert_eq!(ad_xy, leibniz);
        // ad kills idempotents.
        let idem = AlgElement::idem(w);
        assert!(ad_derivation(&ctx, AdMode::Q, 0, &idem, &table)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn ad_respects_weight_routing() {
        let ctx = ctx_a2();
        let table = table_idempotent(&ctx);
        let w = lam();
        let mut x = AlgElement::zero();
        x.add_word(
            Word {
                source: w.clone(),
                gens: vec![Gen::E { i: 0, r: 2 }, Gen::E { i: 1, r: 0 }],
            },
            Scalar::one(),
        );
        let img = ad_derivation(&ctx, AdMode::Q, 0, &x, &table).unwrap();
        // Every image word must carry the routing of Q_i composed with x.
        let expect_target = shift(
            &x.terms().next().unwrap().0.target(ctx.c),
            GenTag::QMode { vertex: 0, n: 1 },
            ctx.c,
        );
        for (word, _) in img.terms() {
            assert_eq!(word.source, w);
            assert_eq!(word.target(ctx.c), expect_target);
        }
    }

    #[test]
    fn divided_power_expansion() {
        let ctx = ctx_a1();
        let w = lam();
        let e2 = AlgElement::from_gen(Gen::EDiv { i: 0, m: 1, r: 2 }, w.clone());
        let expanded = expand_divided_powers(&e2);
        let mut expected = AlgElement::zero();
        expected.add_word(
            Word {
                source: w.clone(),
                gens: vec![Gen::E { i: 0, r: 1 }, Gen::E { i: 0, r: 1 }],
            },
            Scalar::ratio(LaurentPoly::one(), qint(2)),
        );
        assert_eq!(expanded, expected);
        // Routing of the divided letter matches the expansion.
        assert_eq!(
            Gen::EDiv { i: 0, m: 1, r: 2 }.weight_shift(&w, ctx.c),
            expanded.terms().next().unwrap().0.target(ctx.c)
        );
    }
}
