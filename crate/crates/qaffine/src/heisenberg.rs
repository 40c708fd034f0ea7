//! The quantum Heisenberg algebra on generators h_{i,m} (m != 0) at a fixed
//! positive integer level c: normal ordering, the four half-vertex-operator
//! mode series, and oracle verification of the P-Q commutation relations.
//!
//! The central commutator is
//!
//!   [h_{i,m}, h_{j,n}] = delta_{m,-n} [n<i,j>] [nc] / n      (n = m > 0)
//!
//! which is the unique normalization whose reordering series reproduces the
//! Sym^k([2][c]) / Lambda^k([c]) coefficients of the P-Q relations; the
//! `series_oracle` below checks exactly that and acts as the build gate for
//! everything downstream. Note the division by n is exact over Q(q) but not
//! over Z[q, q^-1] (already at n = 2), so kappa is a `Scalar`.

use crate::dynkin::CartanDatum;
use crate::laurent::{ext_power, qint, sym_power, GradedDim, LaurentPoly, Scalar, TruncSeries};
use std::collections::BTreeMap;
use std::fmt;

/// A product of Heisenberg generators; each factor is (vertex, mode), mode != 0.
///
/// Normal-ordered canonical form: all negative modes before all positive
/// modes, each sign block sorted by (vertex, mode).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HeisWord(pub Vec<(usize, i64)>);

impl HeisWord {
    pub fn one() -> Self {
        HeisWord(Vec::new())
    }

    pub fn single(vertex: usize, mode: i64) -> Self {
        assert!(mode != 0, "Heisenberg modes are nonzero");
        HeisWord(vec![(vertex, mode)])
    }

    pub fn is_normal_ordered(&self) -> bool {
        let fs = &self.0;
        for w in fs.windows(2) {
            let (a, b) = (w[0], w[1]);
            let inversion = a.1 > 0 && b.1 < 0;
            let same_sign_unsorted = (a.1 < 0) == (b.1 < 0) && a > b;
            if inversion || same_sign_unsorted {
                return false;
            }
        }
        true
    }
}

impl fmt::Display for HeisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (idx, (i, m)) in self.0.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "h({i},{m})")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HeisWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A finitely supported Scalar-linear combination of Heisenberg words.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HeisElement {
    terms: BTreeMap<HeisWord, Scalar>,
}

impl HeisElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(HeisWord::one(), Scalar::one())
    }

    pub fn from_word(word: HeisWord, coeff: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_word(word, coeff);
        e
    }

    pub fn generator(vertex: usize, mode: i64) -> Self {
        Self::from_word(HeisWord::single(vertex, mode), Scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&HeisWord, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn add_word(&mut self, word: HeisWord, coeff: Scalar) {
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

    pub fn add(&self, other: &HeisElement) -> HeisElement {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_word(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &HeisElement) -> HeisElement {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> HeisElement {
        if s.is_zero() {
            return Self::zero();
        }
        HeisElement {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), c * s))
                .collect(),
        }
    }

    /// Free product (word concatenation), no reordering.
    pub fn mul(&self, other: &HeisElement) -> HeisElement {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                let mut w = wa.0.clone();
                w.extend_from_slice(&wb.0);
                out.add_word(HeisWord(w), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (w, c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {w}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The central scalar kappa_{i,j,n} = [n<i,j>][nc]/n for n > 0.
pub fn kappa(datum: &CartanDatum, i: usize, j: usize, n: i64, c: i64) -> Scalar {
    assert!(n > 0 && c > 0);
    let pairing = datum.cartan(i, j);
    Scalar::ratio(
        &qint(n * pairing) * &qint(n * c),
        LaurentPoly::from_int(n),
    )
}

/// [h_{i,m}, h_{j,n}]: zero unless m = -n, otherwise the central scalar,
/// antisymmetric in the sign of m.
pub fn h_commutator(datum: &CartanDatum, i: usize, m: i64, j: usize, n: i64, c: i64) -> Scalar {
    assert!(m != 0 && n != 0);
    if m != -n {
        return Scalar::zero();
    }
    let k = kappa(datum, i, j, m.abs(), c);
    if m > 0 {
        k
    } else {
        -k
    }
}

/// Rewrite an element so every word is normal-ordered. Each swap of an
/// adjacent (positive, negative) pair strictly reduces the number of
/// inversions, so the straightening terminates.
pub fn normal_order(datum: &CartanDatum, x: &HeisElement, c: i64) -> HeisElement {
    let mut done = HeisElement::zero();
    let mut queue: Vec<(HeisWord, Scalar)> =
        x.terms.iter().map(|(w, c)| (w.clone(), c.clone())).collect();
    while let Some((word, coeff)) = queue.pop() {
        if coeff.is_zero() {
            continue;
        }
        // Find the first adjacent (positive, negative) inversion.
        let pos = word
            .0
            .windows(2)
            .position(|w| w[0].1 > 0 && w[1].1 < 0);
        match pos {
            None => {
                // Sign blocks commute internally ([h_m, h_n] = 0 unless
                // m = -n), so canonical sorting is free.
                let mut sorted = word.0;
                sorted.sort_by(|a, b| {
                    let sa = a.1 > 0;
                    let sb = b.1 > 0;
                    sa.cmp(&sb).then(a.cmp(b))
                });
                done.add_word(HeisWord(sorted), coeff);
            }
            Some(p) => {
                let (i, m) = word.0[p];
                let (j, n) = word.0[p + 1];
                // h_m h_n = h_n h_m + [h_m, h_n]
                let mut swapped = word.0.clone();
                swapped.swap(p, p + 1);
                queue.push((HeisWord(swapped), coeff.clone()));
                let central = h_commutator(datum, i, m, j, n, c);
                if !central.is_zero() {
                    let mut contracted = word.0.clone();
                    contracted.drain(p..=p + 1);
                    queue.push((HeisWord(contracted), &coeff * &central));
                }
            }
        }
    }
    done
}

/// Which of the four exponential series a mode family comes from.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HalfKind {
    /// P-side: built from the negative (creation-type) modes h_{i,-n}.
    P,
    /// Q-side: built from the positive modes h_{i,n}.
    Q,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HalfVariant {
    /// Round modes: coefficients of exp(+sum h z^n / [n]).
    Round,
    /// Exterior modes X^{(1^n)}: exp(-sum h z^n / [n]) = sum (-1)^n X^{(1^n)} z^n.
    Exterior,
}

/// Coefficients 0..=n_max of the chosen half vertex operator series.
///
/// For Round: series S with S[n] = X^{(n)}.
/// For Exterior: the stored S[n] is X^{(1^n)} itself (the (-1)^n from the
/// generating function is stripped, matching the definitions of the modes).
pub fn half_vertex_modes(
    kind: HalfKind,
    variant: HalfVariant,
    vertex: usize,
    n_max: usize,
) -> Vec<HeisElement> {
    // exp(eps * sum_{n>=1} h_{i,s n} z^n / [n]) via E' = A' E.
    let sign = match kind {
        HalfKind::P => -1i64,
        HalfKind::Q => 1i64,
    };
    let eps_neg = matches!(variant, HalfVariant::Exterior);
    let mut coeffs: Vec<HeisElement> = Vec::with_capacity(n_max + 1);
    coeffs.push(HeisElement::one());
    for n in 1..=n_max {
        // n E_n = sum_{k=1..n} k A_k E_{n-k}, A_k = eps h_{i, sign*k} / [k].
        let mut acc = HeisElement::zero();
        for k in 1..=n {
            let a_k = HeisElement::generator(vertex, sign * k as i64).scale(&Scalar::ratio(
                LaurentPoly::from_int(if eps_neg { -(k as i64) } else { k as i64 }),
                qint(k as i64),
            ));
            acc = acc.add(&a_k.mul(&coeffs[n - k]));
        }
        coeffs.push(acc.scale(&Scalar::from_int(1).div_int(n as i64)));
    }
    if eps_neg {
        // exp(-A) = sum (-1)^n X^{(1^n)} z^n, so X^{(1^n)} = (-1)^n * coefficient.
        for (n, c) in coeffs.iter_mut().enumerate() {
            if n % 2 == 1 {
                *c = c.scale(&-Scalar::one());
            }
        }
    }
    coeffs
}

/// Vertex-pair classes that the P-Q relation coefficients depend on.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum PairClass {
    Equal,
    Adjacent,
    Orthogonal,
}

impl PairClass {
    pub fn of(datum: &CartanDatum, i: usize, j: usize) -> PairClass {
        if i == j {
            PairClass::Equal
        } else if datum.adjacent(i, j) {
            PairClass::Adjacent
        } else {
            PairClass::Orthogonal
        }
    }
}

/// Which displayed equation a Q-P reordering instance belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PqEquation {
    /// Q^{(n)} P^{(m)}.
    RoundRound,
    /// Q^{(1^n)} P^{(m)}.
    ExtRound,
    /// Q^{(1^n)} P^{(1^m)} (the "exchange (a) and (1^a)" companion of RoundRound).
    ExtExt,
    /// Q^{(n)} P^{(1^m)} (companion of ExtRound).
    RoundExt,
}

impl PqEquation {
    pub fn q_variant(self) -> HalfVariant {
        match self {
            PqEquation::RoundRound | PqEquation::RoundExt => HalfVariant::Round,
            PqEquation::ExtRound | PqEquation::ExtExt => HalfVariant::Exterior,
        }
    }

    pub fn p_variant(self) -> HalfVariant {
        match self {
            PqEquation::RoundRound | PqEquation::ExtRound => HalfVariant::Round,
            PqEquation::ExtExt | PqEquation::RoundExt => HalfVariant::Exterior,
        }
    }

    pub const ALL: [PqEquation; 4] = [
        PqEquation::RoundRound,
        PqEquation::ExtRound,
        PqEquation::ExtExt,
        PqEquation::RoundExt,
    ];
}

/// The k-th reordering coefficient of the given equation, vertex-pair class
/// and level: the scalar in `Q.. P.. = sum_k coeff_k P.. Q..`.
///
/// `renormalized` selects the presentation produced by the q -> -q
/// renormalization, which drops the (-1)^k in the adjacent cases.
pub fn pq_coefficient(
    eq: PqEquation,
    class: PairClass,
    c: i64,
    k: u32,
    renormalized: bool,
) -> LaurentPoly {
    let two_c = GradedDim::new(&qint(2) * &qint(c)).expect("[2][c] is a graded dimension");
    let just_c = GradedDim::new(qint(c)).expect("[c] is a graded dimension");
    let sign = |p: LaurentPoly, k: u32| {
        if k % 2 == 1 {
            -p
        } else {
            p
        }
    };
    // The same-vertex coefficient swaps Sym <-> Lambda between the round and
    // exterior equations; the adjacent coefficient swaps Lambda <-> Sym.
    let q_is_ext = matches!(eq.q_variant(), HalfVariant::Exterior);
    match class {
        PairClass::Equal => {
            if q_is_ext {
                ext_power(&two_c, k).poly().clone()
            } else {
                sym_power(&two_c, k).poly().clone()
            }
        }
        PairClass::Adjacent => {
            let base = if q_is_ext {
                sym_power(&just_c, k).poly().clone()
            } else {
                ext_power(&just_c, k).poly().clone()
            };
            if renormalized {
                base
            } else {
                sign(base, k)
            }
        }
        PairClass::Orthogonal => {
            if k == 0 {
                LaurentPoly::one()
            } else {
                LaurentPoly::zero()
            }
        }
    }
}

/// Failure report for a P-Q relation instance: the nonzero residual.
#[derive(Clone, Debug)]
pub struct PqResidual {
    pub residual: HeisElement,
}

/// Check one instance of the P-Q commutation relations:
/// Q_j-side (n) times P_i-side (m), reordered, against the predicted sum.
pub fn check_pq_relation(
    datum: &CartanDatum,
    i: usize,
    j: usize,
    m: u32,
    n: u32,
    c: i64,
    eq: PqEquation,
    renormalized: bool,
) -> Result<(), PqResidual> {
    let class = PairClass::of(datum, i, j);
    let max = m.max(n) as usize;
    let p_modes = half_vertex_modes(HalfKind::P, eq.p_variant(), i, max);
    let q_modes = half_vertex_modes(HalfKind::Q, eq.q_variant(), j, max);
    let lhs = q_modes[n as usize].mul(&p_modes[m as usize]);
    let mut rhs = HeisElement::zero();
    for k in 0..=m.min(n) {
        let coeff = pq_coefficient(eq, class, c, k, renormalized);
        if coeff.is_zero() {
            continue;
        }
        let term = p_modes[(m - k) as usize]
            .mul(&q_modes[(n - k) as usize])
            .scale(&Scalar::from_poly(coeff));
        rhs = rhs.add(&term);
    }
    let residual = normal_order(datum, &lhs.sub(&rhs), c);
    if residual.is_zero() {
        Ok(())
    } else {
        Err(PqResidual { residual })
    }
}

/// The series oracle behind the kappa normalization:
/// exp(sum_{n>=1} kappa_{i,j,n} t^n / [n]^2) must equal
/// sum_k pq_coefficient(RoundRound, k) t^k, exactly, to order N.
///
/// This is the mandatory gate pinning kappa = [n<i,j>][nc]/n.
pub fn series_oracle(datum: &CartanDatum, i: usize, j: usize, c: i64, n_max: usize) -> bool {
    let class = PairClass::of(datum, i, j);
    let mut log = TruncSeries::zero(n_max);
    for n in 1..=n_max {
        let k = kappa(datum, i, j, n as i64, c);
        let br = qint(n as i64);
        log.coeffs[n] = &k * &Scalar::ratio(LaurentPoly::one(), &br * &br);
    }
    let lhs = log.exp();
    (0..=n_max).all(|k| {
        let expected =
            Scalar::from_poly(pq_coefficient(PqEquation::RoundRound, class, c, k as u32, false));
        lhs.coeffs[k] == expected
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynkin::{CartanDatum, CartanType};

    fn a1() -> CartanDatum {
        CartanDatum::new(CartanType::A(1))
    }

    fn a2() -> CartanDatum {
        CartanDatum::new(CartanType::A(2))
    }

    #[test]
    fn commutator_basics() {
        let d = a2();
        assert!(h_commutator(&d, 0, 2, 1, 3, 1).is_zero());
        // [h_1, h_-1] at c=1, i=j: [2][1]/1 = [2].
        assert_eq!(
            h_commutator(&d, 0, 1, 0, -1, 1),
            Scalar::from_poly(qint(2))
        );
        // Adjacent at n=1, c=1: [-1][1]/1 = -1.
        assert_eq!(
            h_commutator(&d, 0, 1, 1, -1, 1),
            Scalar::from_int(-1)
        );
        // Antisymmetry in the sign of m.
        assert_eq!(
            h_commutator(&d, 0, -1, 0, 1, 1),
            -Scalar::from_poly(qint(2))
        );
    }

    #[test]
    fn kappa_needs_denominators() {
        // kappa_{i,i,2} = [4][2]/2 is not integral; the scalar keeps it exact.
        let d = a1();
        let k = kappa(&d, 0, 0, 2, 1);
        assert!(!k.is_polynomial());
        assert_eq!(&k * &Scalar::from_int(2), Scalar::from_poly(&qint(4) * &qint(2)));
    }

    #[test]
    fn normal_order_single_swap() {
        let d = a1();
        let x = HeisElement::generator(0, 1).mul(&HeisElement::generator(0, -1));
        let no = normal_order(&d, &x, 1);
        // h_1 h_-1 = h_-1 h_1 + [2]
        let expected = HeisElement::generator(0, -1)
            .mul(&HeisElement::generator(0, 1))
            .add(&HeisElement::from_word(
                HeisWord::one(),
                Scalar::from_poly(qint(2)),
            ));
        assert_eq!(no, expected);
        for (w, _) in no.terms() {
            assert!(w.is_normal_ordered());
        }
    }

    #[test]
    fn normal_order_is_idempotent_and_handles_unpaired_modes() {
        let d = a2();
        let x = HeisElement::generator(0, 2).mul(&HeisElement::generator(1, -1));
        let once = normal_order(&d, &x, 2);
        // Modes 2 and -1 do not pair: plain swap.
        assert_eq!(
            once,
            HeisElement::generator(1, -1).mul(&HeisElement::generator(0, 2))
        );
        assert_eq!(normal_order(&d, &once, 2), once);
        // Already-ordered input is untouched.
        let ordered = HeisElement::generator(0, -3).mul(&HeisElement::generator(0, 3));
        assert_eq!(normal_order(&d, &ordered, 2), ordered);
    }

    #[test]
    fn normal_order_is_linear() {
        let d = a1();
        let x = HeisElement::generator(0, 1).mul(&HeisElement::generator(0, -1));
        let y = HeisElement::generator(0, 2).mul(&HeisElement::generator(0, -2));
        let lhs = normal_order(&d, &x.add(&y.scale(&Scalar::qpow(3))), 1);
        let rhs = normal_order(&d, &x, 1).add(&normal_order(&d, &y, 1).scale(&Scalar::qpow(3)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn half_modes_low_orders() {
        let q = half_vertex_modes(HalfKind::Q, HalfVariant::Round, 0, 2);
        assert_eq!(q[0], HeisElement::one());
        assert_eq!(q[1], HeisElement::generator(0, 1));
        // Q^{(2)} = h_1^2 / 2 + h_2 / [2]
        let h1h1 = HeisElement::generator(0, 1)
            .mul(&HeisElement::generator(0, 1))
            .scale(&Scalar::from_int(1).div_int(2));
        let h2 = HeisElement::generator(0, 2)
            .scale(&Scalar::ratio(LaurentPoly::one(), qint(2)));
        assert_eq!(q[2], h1h1.add(&h2));
        // Q^{(1^1)} = h_1 (the series carries the (-1)^n).
        let qe = half_vertex_modes(HalfKind::Q, HalfVariant::Exterior, 0, 1);
        assert_eq!(qe[1], HeisElement::generator(0, 1));
        // P-side uses negative modes.
        let p = half_vertex_modes(HalfKind::P, HalfVariant::Round, 0, 1);
        assert_eq!(p[1], HeisElement::generator(0, -1));
    }

    #[test]
    fn phi_plus_phi_minus_is_one() {
        // sum_{a+b=n} (-1)^b Q^{(a)} Q^{(1^b)} = 0 for n >= 1, and the same
        // on the P side. Same-sign factors commute, which normal ordering
        // realizes as plain sorting with no contraction terms.
        let d = a1();
        let n_max = 8usize;
        for kind in [HalfKind::Q, HalfKind::P] {
            let round = half_vertex_modes(kind, HalfVariant::Round, 0, n_max);
            let ext = half_vertex_modes(kind, HalfVariant::Exterior, 0, n_max);
            for n in 1..=n_max {
                let mut acc = HeisElement::zero();
                for a in 0..=n {
                    let b = n - a;
                    let sign = if b % 2 == 1 {
                        -Scalar::one()
                    } else {
                        Scalar::one()
                    };
                    acc = acc.add(&round[a].mul(&ext[b]).scale(&sign));
                }
                assert!(
                    normal_order(&d, &acc, 1).is_zero(),
                    "phi+ phi- != 1 at order {n}"
                );
            }
        }
    }

    #[test]
    fn series_oracle_small_cases_by_hand() {
        let d = a2();
        // i = j, c = 1, coefficient of t^1 must be Sym^1([2][1]) = [2].
        assert!(series_oracle(&d, 0, 0, 1, 1));
        // Adjacent, c = 1: the series is exactly 1 - t.
        let mut log = TruncSeries::zero(4);
        for n in 1..=4 {
            log.coeffs[n] = &kappa(&d, 0, 1, n as i64, 1)
                * &Scalar::ratio(LaurentPoly::one(), &qint(n as i64) * &qint(n as i64));
        }
        let s = log.exp();
        assert_eq!(s.coeffs[0], Scalar::one());
        assert_eq!(s.coeffs[1], Scalar::from_int(-1));
        assert!(s.coeffs[2].is_zero());
        assert!(s.coeffs[3].is_zero());
        assert!(series_oracle(&d, 0, 1, 1, 4));
    }

    #[test]
    fn series_oracle_all_classes() {
        let d3 = CartanDatum::new(CartanType::A(3));
        for c in 1..=3 {
            for i in 0..3 {
                for j in 0..3 {
                    assert!(series_oracle(&d3, i, j, c, 6), "pair ({i},{j}) c={c}");
                }
            }
        }
    }

    #[test]
    fn pq_relation_single_commutator_case() {
        // i=j, m=n=1, c=1: [Q^{(1)}, P^{(1)}] = Sym^1([2][1]) = [2].
        let d = a1();
        assert!(check_pq_relation(&d, 0, 0, 1, 1, 1, PqEquation::RoundRound, false).is_ok());
        // Direct single-commutator sanity: kappa(1) = [2].
        assert_eq!(kappa(&d, 0, 0, 1, 1), Scalar::from_poly(qint(2)));
    }

    #[test]
    fn pq_relation_orthogonal_and_degenerate() {
        let d3 = CartanDatum::new(CartanType::A(3));
        // <i,j> = 0: both sides commute, all equations, any m, n.
        for eq in PqEquation::ALL {
            assert!(check_pq_relation(&d3, 0, 2, 3, 2, 2, eq, false).is_ok());
        }
        // m = 0 or n = 0 trivially pass.
        assert!(check_pq_relation(&d3, 0, 0, 0, 4, 1, PqEquation::RoundRound, false).is_ok());
        assert!(check_pq_relation(&d3, 0, 1, 3, 0, 2, PqEquation::ExtRound, false).is_ok());
    }

    #[test]
    fn pq_relation_detects_wrong_coefficient() {
        // Mutating the predicted coefficient must produce a residual: check
        // by comparing against the adjacent-class prediction on equal vertices.
        let d = a1();
        let m = 2;
        let n = 2;
        let p_modes = half_vertex_modes(HalfKind::P, HalfVariant::Round, 0, 2);
        let q_modes = half_vertex_modes(HalfKind::Q, HalfVariant::Round, 0, 2);
        let lhs = q_modes[n].mul(&p_modes[m]);
        let mut rhs = HeisElement::zero();
        for k in 0..=2u32 {
            let mut coeff = pq_coefficient(PqEquation::RoundRound, PairClass::Equal, 1, k, false);
            if k == 1 {
                coeff = &coeff * &LaurentPoly::qpow(1); // deliberate q^2 -> q^3 style bump
            }
            let term = p_modes[m - k as usize]
                .mul(&q_modes[n - k as usize])
                .scale(&Scalar::from_poly(coeff));
            rhs = rhs.add(&term);
        }
        let res = normal_order(&d, &lhs.sub(&rhs), 1);
        assert!(!res.is_zero());
    }
}
