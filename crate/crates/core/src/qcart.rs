//! Weak limits over finite sets, pseudo-relations, and witness search for
//! pseudo-equivalence relations.
//!
//! A weak limit only promises *some* mediating arrow. The `Padded` strategy
//! makes that visible by emitting every witness several times, so that any
//! construction downstream has to work up to mutual factorization instead of
//! relying on uniqueness.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bhk::{self, Presubobject};
use crate::error::{Error, Result};
use crate::finset::{
    self, compose, enumerate_maps, equalizer, least_section, FiniteMap, FiniteSet,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum WeakLimitStrategy {
    /// Strict limits: every witness appears once.
    #[default]
    Minimal,
    /// Each witness appears exactly `k ≥ 2` times.
    Padded(usize),
}

impl WeakLimitStrategy {
    pub const DEFAULT_PADDING: usize = 2;

    pub fn padded(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidStrategy(format!("padding factor must be at least 2, got {k}")));
        }
        Ok(WeakLimitStrategy::Padded(k))
    }

    pub fn multiplicity(self) -> usize {
        match self {
            WeakLimitStrategy::Minimal => 1,
            WeakLimitStrategy::Padded(k) => k,
        }
    }

    /// Replaces the domain of `incl` by `k` copies of each of its elements.
    pub fn pad(self, incl: FiniteMap) -> FiniteMap {
        match self {
            WeakLimitStrategy::Minimal => incl,
            WeakLimitStrategy::Padded(k) => {
                let dom = FiniteSet::padded(incl.dom(), k);
                FiniteMap::from_fn(&dom, incl.cod(), |p| incl.apply(p / k))
            }
        }
    }
}

impl fmt::Display for WeakLimitStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeakLimitStrategy::Minimal => f.write_str("minimal"),
            WeakLimitStrategy::Padded(k) => write!(f, "padded:{k}"),
        }
    }
}

impl FromStr for WeakLimitStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" => Ok(WeakLimitStrategy::Minimal),
            "padded" => WeakLimitStrategy::padded(Self::DEFAULT_PADDING),
            _ => match s.strip_prefix("padded:") {
                Some(k) => {
                    let k = k
                        .parse()
                        .map_err(|_| Error::InvalidStrategy(format!("bad padding factor in `{s}`")))?;
                    WeakLimitStrategy::padded(k)
                }
                None => Err(Error::InvalidStrategy(format!(
                    "unknown strategy `{s}` (expected minimal or padded:<k>)"
                ))),
            },
        }
    }
}

impl From<WeakLimitStrategy> for String {
    fn from(s: WeakLimitStrategy) -> String {
        s.to_string()
    }
}

impl TryFrom<String> for WeakLimitStrategy {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Weak equalizer: the equalizer, with witnesses repeated per `strategy`.
/// For every `h` with `f h = g h` some (not necessarily unique) `k` has
/// `e k = h`.
pub fn weak_equalizer(
    f: &FiniteMap,
    g: &FiniteMap,
    strategy: WeakLimitStrategy,
) -> Result<(FiniteSet, FiniteMap)> {
    let (_, incl) = equalizer(f, g)?;
    let e = strategy.pad(incl);
    Ok((e.dom().clone(), e))
}

/// A pair of arrows out of a common apex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    apex: FiniteSet,
    left: FiniteMap,
    right: FiniteMap,
}

impl Span {
    pub fn new(left: FiniteMap, right: FiniteMap) -> Result<Self> {
        if left.dom() != right.dom() {
            return Err(Error::Boundary(format!(
                "span legs have different domains {} and {}",
                left.dom().describe(),
                right.dom().describe()
            )));
        }
        Ok(Span {
            apex: left.dom().clone(),
            left,
            right,
        })
    }

    /// The minimal span whose apex is the set of related pairs, listed in
    /// canonical order.
    pub fn from_relation(rel: &ElementRelation, left_foot: &FiniteSet, right_foot: &FiniteSet) -> Self {
        assert_eq!((rel.rows(), rel.cols()), (left_foot.len(), right_foot.len()));
        let prod = finset::product(left_foot, right_foot);
        let members: Vec<usize> = rel.pairs().map(|(x, y)| prod.pair_index(x, y)).collect();
        let (_, incl) = finset::inclusion(&prod.set, members);
        let (l, r) = prod.legs(&incl).expect("inclusion lands in the product");
        Span::new(l, r).expect("legs share the apex")
    }

    /// The diagonal `⟨id, id⟩ : X → X × X`.
    pub fn diagonal(x: &FiniteSet) -> Self {
        let id = FiniteMap::identity(x);
        Span::new(id.clone(), id).unwrap()
    }

    pub fn apex(&self) -> &FiniteSet {
        &self.apex
    }
    pub fn left(&self) -> &FiniteMap {
        &self.left
    }
    pub fn right(&self) -> &FiniteMap {
        &self.right
    }
    pub fn left_foot(&self) -> &FiniteSet {
        self.left.cod()
    }
    pub fn right_foot(&self) -> &FiniteSet {
        self.right.cod()
    }

    /// `⟨left, right⟩ : apex → X × Y`.
    pub fn as_map(&self) -> FiniteMap {
        finset::product(self.left_foot(), self.right_foot())
            .pair(&self.left, &self.right)
            .unwrap()
    }

    pub fn as_presubobject(&self) -> Presubobject {
        Presubobject::new(self.as_map())
    }

    /// The image `{(x, y) | some apex element maps to (x, y)}`.
    pub fn image(&self) -> ElementRelation {
        let mut rel = ElementRelation::empty(self.left_foot().len(), self.right_foot().len());
        for a in self.apex.elements() {
            rel.insert(self.left.apply(a), self.right.apply(a));
        }
        rel
    }

    /// `⟨right, left⟩`.
    pub fn transpose(&self) -> Span {
        Span::new(self.right.clone(), self.left.clone()).unwrap()
    }

    /// Every apex element repeated `k` times.
    pub fn padded(&self, k: usize) -> Span {
        let dom = FiniteSet::padded(&self.apex, k);
        let l = FiniteMap::from_fn(&dom, self.left_foot(), |p| self.left.apply(p / k));
        let r = FiniteMap::from_fn(&dom, self.right_foot(), |p| self.right.apply(p / k));
        Span::new(l, r).unwrap()
    }
}

/// Weak pullback of `f: X → Z` and `g: Y → Z`, computed as the weak
/// equalizer of `f∘pr1` and `g∘pr2` on `X × Y`.
pub fn weak_pullback(f: &FiniteMap, g: &FiniteMap, strategy: WeakLimitStrategy) -> Result<Span> {
    if f.cod() != g.cod() {
        return Err(Error::Boundary(format!(
            "weak pullback needs a common codomain, got {} and {}",
            f.cod().describe(),
            g.cod().describe()
        )));
    }
    let prod = finset::product(f.dom(), g.dom());
    // Hash-join over the fibers of g; emits pair indices in ascending order,
    // matching the filter over X × Y.
    let g_fibers = g.fibers();
    let mut members = Vec::new();
    for x in f.dom().elements() {
        for &y in &g_fibers[f.apply(x)] {
            members.push(prod.pair_index(x, y));
        }
    }
    let (_, incl) = finset::inclusion(&prod.set, members);
    let e = strategy.pad(incl);
    let (l, r) = prod.legs(&e)?;
    Span::new(l, r)
}

/// An image-level relation between two finite carriers, stored as one
/// bit row per left element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementRelation {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl ElementRelation {
    pub fn empty(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        ElementRelation {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut rel = Self::empty(rows, cols);
        for x in 0..rows {
            for y in 0..cols {
                if f(x, y) {
                    rel.insert(x, y);
                }
            }
        }
        rel
    }

    pub fn from_pairs(rows: usize, cols: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rel = Self::empty(rows, cols);
        for (x, y) in pairs {
            rel.insert(x, y);
        }
        rel
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_pairs(n, n, (0..n).map(|x| (x, x)))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    #[inline]
    pub fn holds(&self, x: usize, y: usize) -> bool {
        debug_assert!(x < self.rows && y < self.cols, "pair ({x}, {y}) outside {}×{}", self.rows, self.cols);
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        assert!(x < self.rows && y < self.cols, "pair ({x}, {y}) outside {}×{}", self.rows, self.cols);
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
    }

    /// Related pairs in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |x| self.row_members(x).map(move |y| (x, y)))
    }

    /// Columns related to `x`, ascending.
    pub fn row_members(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        self.row(x).iter().enumerate().flat_map(|(w, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                (rest != 0).then(|| {
                    let b = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    w * 64 + b
                })
            })
        })
    }

    pub fn count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_reflexive(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|x| self.holds(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.pairs().all(|(x, y)| self.holds(y, x))
    }

    /// For every related `(x, y)`, the row of `y` is contained in the row
    /// of `x`.
    pub fn is_transitive(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        // identical rows are compared once per source row
        let mut ids = std::collections::HashMap::new();
        let row_id: Vec<usize> = (0..self.rows)
            .map(|x| {
                let next = ids.len();
                *ids.entry(self.row(x)).or_insert(next)
            })
            .collect();
        let mut seen = vec![usize::MAX; ids.len()];
        (0..self.rows).all(|x| {
            self.row_members(x).all(|y| {
                let id = row_id[y];
                if seen[id] == x {
                    return true;
                }
                seen[id] = x;
                self.row(y).iter().zip(self.row(x)).all(|(ry, rx)| ry & !rx == 0)
            })
        })
    }

    pub fn is_equivalence(&self) -> bool {
        self.is_reflexive() && self.is_symmetric() && self.is_transitive()
    }

    /// Every row has at least one related column.
    pub fn is_total(&self) -> bool {
        (0..self.rows).all(|x| self.row(x).iter().any(|&w| w != 0))
    }
}

impl fmt::Debug for ElementRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// `⟨x, y⟩ ∈̄ rel`: some apex element lands on `(x, y)`.
pub fn rel_holds(rel: &Span, x: usize, y: usize) -> Result<bool> {
    rel.left_foot().check(x)?;
    rel.right_foot().check(y)?;
    Ok(rel
        .apex()
        .elements()
        .any(|a| rel.left().apply(a) == x && rel.right().apply(a) == y))
}

/// A pseudo-relation on a carrier together with reflexivity, symmetry and
/// transitivity witnesses. The transitivity witness `tau` is defined over
/// the chosen weak pullback `wpb` of `r2` and `r1`.
#[derive(Clone, Debug)]
pub struct PseudoEqRel {
    carrier: FiniteSet,
    rel: Span,
    rho: FiniteMap,
    sym: FiniteMap,
    trans: Transitivity,
}

#[derive(Clone, Debug)]
enum Transitivity {
    Explicit { wpb: Span, tau: FiniteMap },
    /// `tau` sends each composable pair of `weak_pullback(r2, r1, strategy)`
    /// to the least apex element over its outer feet; both are built only on
    /// request.
    Implicit { strategy: WeakLimitStrategy },
}

/// Weak pullbacks of `r2, r1` up to this size carry an explicit
/// transitivity witness.
pub const EXPLICIT_TRANSITIVITY_LIMIT: u128 = 1 << 16;

impl PseudoEqRel {
    /// Assembles witnesses and re-checks the three commuting squares.
    pub fn new(rel: Span, rho: FiniteMap, sym: FiniteMap, wpb: Span, tau: FiniteMap) -> Result<Self> {
        Self::assemble(rel, rho, sym, Transitivity::Explicit { wpb, tau })
    }

    /// As [`PseudoEqRel::new`], with the least-witness transitivity map over
    /// `weak_pullback(r2, r1, strategy)` left implicit.
    pub fn with_implicit_transitivity(rel: Span, rho: FiniteMap, sym: FiniteMap, strategy: WeakLimitStrategy) -> Result<Self> {
        Self::assemble(rel, rho, sym, Transitivity::Implicit { strategy })
    }

    fn assemble(rel: Span, rho: FiniteMap, sym: FiniteMap, trans: Transitivity) -> Result<Self> {
        let carrier = rel.left_foot().clone();
        let p = PseudoEqRel {
            carrier,
            rel,
            rho,
            sym,
            trans,
        };
        p.check_squares()?;
        Ok(p)
    }

    pub fn carrier(&self) -> &FiniteSet {
        &self.carrier
    }
    pub fn rel(&self) -> &Span {
        &self.rel
    }
    pub fn rho(&self) -> &FiniteMap {
        &self.rho
    }
    pub fn sym(&self) -> &FiniteMap {
        &self.sym
    }

    pub fn has_explicit_transitivity(&self) -> bool {
        matches!(self.trans, Transitivity::Explicit { .. })
    }

    pub fn wpb(&self) -> Span {
        match &self.trans {
            Transitivity::Explicit { wpb, .. } => wpb.clone(),
            Transitivity::Implicit { strategy } => {
                weak_pullback(self.rel.right(), self.rel.left(), *strategy).expect("legs share the carrier")
            }
        }
    }

    pub fn tau(&self) -> FiniteMap {
        match &self.trans {
            Transitivity::Explicit { tau, .. } => tau.clone(),
            Transitivity::Implicit { .. } => {
                let (r, wpb) = (&self.rel, self.wpb());
                let lift = PairIndex::new(r);
                lifting(wpb.apex(), r.apex(), |p| {
                    lift.least(r.left().apply(wpb.left().apply(p)), r.right().apply(wpb.right().apply(p)))
                })
                .expect("checked when assembled")
            }
        }
    }

    pub fn check_squares(&self) -> Result<()> {
        let (r, x) = (&self.rel, &self.carrier);
        let fail = |what: &str| Err(Error::Construction(format!("pseudo-equivalence square fails: {what}")));
        if r.right_foot() != x {
            return fail("relation is not on a single carrier");
        }
        if self.rho.dom() != x || self.rho.cod() != r.apex() {
            return fail("rho has wrong boundaries");
        }
        if !x.elements().all(|e| {
            let a = self.rho.apply(e);
            r.left().apply(a) == e && r.right().apply(a) == e
        }) {
            return fail("r ∘ rho ≠ diagonal");
        }
        if self.sym.dom() != r.apex() || self.sym.cod() != r.apex() {
            return fail("sym has wrong boundaries");
        }
        if !r.apex().elements().all(|a| {
            let b = self.sym.apply(a);
            r.left().apply(b) == r.right().apply(a) && r.right().apply(b) == r.left().apply(a)
        }) {
            return fail("r ∘ sym ≠ ⟨r2, r1⟩");
        }
        match &self.trans {
            Transitivity::Explicit { wpb, tau } => {
                let (p1, p2) = (wpb.left(), wpb.right());
                if p1.cod() != r.apex() || p2.cod() != r.apex() {
                    return fail("weak pullback legs do not land in the apex");
                }
                if !wpb.apex().elements().all(|p| r.right().apply(p1.apply(p)) == r.left().apply(p2.apply(p))) {
                    return fail("weak pullback square does not commute");
                }
                if tau.dom() != wpb.apex() || tau.cod() != r.apex() {
                    return fail("tau has wrong boundaries");
                }
                if !wpb.apex().elements().all(|p| {
                    let t = tau.apply(p);
                    r.left().apply(t) == r.left().apply(p1.apply(p))
                        && r.right().apply(t) == r.right().apply(p2.apply(p))
                }) {
                    return fail("r ∘ tau ≠ ⟨r1 p1, r2 p2⟩");
                }
            }
            Transitivity::Implicit { .. } => {
                // Composable pairs of the weak pullback realise exactly the
                // composable pairs of the image, so tau is total iff the image
                // is transitive; the least-witness lookup must land on the
                // requested feet.
                let image = r.image();
                if !image.is_transitive() {
                    return fail("no transitivity witness: the image is not transitive");
                }
                let lift = PairIndex::new(r);
                if !image.pairs().all(|(a, b)| {
                    lift.least(a, b).is_some_and(|t| r.left().apply(t) == a && r.right().apply(t) == b)
                }) {
                    return fail("least-witness lookup misses a related pair");
                }
            }
        }
        Ok(())
    }
}

/// Size of `weak_pullback(r2, r1, strategy)` without building it.
pub fn composable_pairs(rel: &Span, strategy: WeakLimitStrategy) -> u128 {
    let n = rel.left_foot().len();
    let (mut into, mut out) = (vec![0u128; n], vec![0u128; n]);
    for a in rel.apex().elements() {
        into[rel.right().apply(a)] += 1;
        out[rel.left().apply(a)] += 1;
    }
    into.iter().zip(&out).map(|(i, o)| i * o).sum::<u128>() * strategy.multiplicity() as u128
}

/// Which of the three properties the element-level relation `∼_r` lacks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EqRelFailure {
    pub reflexive: bool,
    pub symmetric: bool,
    pub transitive: bool,
}

/// Searches (lexicographically, first hit wins) for reflexivity, symmetry
/// and transitivity witnesses of `rel`, and independently tests whether the
/// image relation `∼_r` is an equivalence. The outer error reports a
/// boundary problem or a disagreement between the two tests.
pub fn find_pseudo_eqrel_witnesses(
    rel: &Span,
    strategy: WeakLimitStrategy,
) -> Result<std::result::Result<PseudoEqRel, EqRelFailure>> {
    if rel.left_foot() != rel.right_foot() {
        return Err(Error::Boundary("pseudo-equivalence relation needs a span into X × X".into()));
    }
    let x = rel.left_foot();
    let (r1, r2) = (rel.left(), rel.right());
    let apex = rel.apex();

    let image = rel.image();
    let verdict = EqRelFailure {
        reflexive: image.is_reflexive(),
        symmetric: image.is_symmetric(),
        transitive: image.is_transitive(),
    };

    // Every constraint below is pointwise, so the lexicographically first
    // witness picks the least apex element over each required pair.
    let lift = PairIndex::new(rel);
    let rho = lifting(x, apex, |e| lift.least(e, e));
    let sym = lifting(apex, apex, |a| lift.least(r2.apply(a), r1.apply(a)));
    let disagree = |what: &str, by_search: bool, by_elements: bool| {
        Error::Disagreement(format!(
            "{what}: witness search says {by_search}, element test says {by_elements}"
        ))
    };
    if rho.is_some() != verdict.reflexive {
        return Err(disagree("reflexivity", rho.is_some(), verdict.reflexive));
    }
    if sym.is_some() != verdict.symmetric {
        return Err(disagree("symmetry", sym.is_some(), verdict.symmetric));
    }
    if composable_pairs(rel, strategy) > EXPLICIT_TRANSITIVITY_LIMIT {
        // too many composable pairs to list; the witness stays implicit and
        // its existence is the transitivity of the image
        return match (rho, sym, verdict.transitive) {
            (Some(rho), Some(sym), true) => {
                Ok(Ok(PseudoEqRel::with_implicit_transitivity(rel.clone(), rho, sym, strategy)?))
            }
            _ => Ok(Err(verdict)),
        };
    }
    let wpb = weak_pullback(r2, r1, strategy)?;
    let (p1, p2) = (wpb.left().clone(), wpb.right().clone());
    let tau = lifting(wpb.apex(), apex, |p| {
        lift.least(r1.apply(p1.apply(p)), r2.apply(p2.apply(p)))
    });
    if tau.is_some() != verdict.transitive {
        return Err(disagree("transitivity", tau.is_some(), verdict.transitive));
    }
    match (rho, sym, tau) {
        (Some(rho), Some(sym), Some(tau)) => Ok(Ok(PseudoEqRel::new(rel.clone(), rho, sym, wpb, tau)?)),
        _ => Ok(Err(verdict)),
    }
}

/// Least apex element over each pair of feet.
pub struct PairIndex {
    cols: usize,
    table: PairTable,
}

enum PairTable {
    Dense(Vec<u32>),
    Sparse(std::collections::HashMap<usize, usize>),
}

impl PairIndex {
    const DENSE_LIMIT: usize = 1 << 22;

    pub fn new(span: &Span) -> Self {
        let (rows, cols) = (span.left_foot().len(), span.right_foot().len());
        let key = |a: usize| span.left().apply(a) * cols + span.right().apply(a);
        let table = if rows * cols <= Self::DENSE_LIMIT && span.apex().len() < u32::MAX as usize {
            let mut dense = vec![u32::MAX; rows * cols];
            for a in span.apex().elements().rev() {
                dense[key(a)] = a as u32;
            }
            PairTable::Dense(dense)
        } else {
            let mut sparse = std::collections::HashMap::new();
            for a in span.apex().elements().rev() {
                sparse.insert(key(a), a);
            }
            PairTable::Sparse(sparse)
        };
        PairIndex { cols, table }
    }

    pub fn least(&self, x: usize, y: usize) -> Option<usize> {
        let k = x * self.cols + y;
        match &self.table {
            PairTable::Dense(d) => Some(d[k]).filter(|&a| a != u32::MAX).map(|a| a as usize),
            PairTable::Sparse(m) => m.get(&k).copied(),
        }
    }
}

/// The map `dom → cod` sending each element to `pick(element)`, if every
/// pick succeeds.
pub(crate) fn lifting(dom: &FiniteSet, cod: &FiniteSet, pick: impl Fn(usize) -> Option<usize>) -> Option<FiniteMap> {
    let table = dom.elements().map(pick).collect::<Option<Vec<usize>>>()?;
    FiniteMap::new(dom.clone(), cod.clone(), table).ok()
}

/// Bounded sweep: every surjection onto `y` from a set with at most
/// `|y| + 1` elements has a section (the least-preimage one).
pub fn is_choice_object(y: &FiniteSet) -> bool {
    (0..=y.len() + 1).all(|n| {
        let x = FiniteSet::numbered("s", n);
        enumerate_maps(&x, y).filter(FiniteMap::is_surjective).all(|f| {
            least_section(&f).is_some_and(|s| compose(&f, &s).map(|c| c.is_identity()).unwrap_or(false))
        })
    })
}

/// Outcome of the sweep relating choice, extensional presubobject order and
/// choice maps for total pseudo-relations.
#[derive(Clone, Debug, Default, Serialize)]
pub struct WelemlogicReport {
    pub surjections: usize,
    pub surjections_split: usize,
    pub presubobject_pairs: usize,
    pub order_agreements: usize,
    pub order_disagreements: Vec<String>,
    pub proof_route_failures: Vec<String>,
    pub pseudo_relations: usize,
    pub total_pseudo_relations: usize,
    pub choice_maps_extracted: usize,
    pub choice_failures: Vec<String>,
}

impl WelemlogicReport {
    pub fn passed(&self) -> bool {
        self.surjections == self.surjections_split
            && self.order_disagreements.is_empty()
            && self.proof_route_failures.is_empty()
            && self.choice_failures.is_empty()
            && self.choice_maps_extracted == self.total_pseudo_relations
    }
}

/// All maps into `x` from sets of size `0..=max_apex`, used as presubobject
/// representatives.
pub fn arrows_into(x: &FiniteSet, max_apex: usize) -> Vec<FiniteMap> {
    (0..=max_apex)
        .flat_map(|n| enumerate_maps(&FiniteSet::numbered("a", n), x).collect::<Vec<_>>())
        .collect()
}

/// All spans into `x × y` with apex of size at most `max_apex`, followed by
/// the minimal span of every subset of `x × y`.
pub fn spans_over(x: &FiniteSet, y: &FiniteSet, max_apex: usize) -> Vec<Span> {
    let prod = finset::product(x, y);
    let mut out: Vec<Span> = arrows_into(&prod.set, max_apex)
        .into_iter()
        .map(|m| {
            let (l, r) = prod.legs(&m).unwrap();
            Span::new(l, r).unwrap()
        })
        .collect();
    let cells = x.len() * y.len();
    for mask in 0u64..(1u64 << cells) {
        let rel = ElementRelation::from_fn(x.len(), y.len(), |a, b| mask >> (a * y.len() + b) & 1 == 1);
        out.push(Span::from_relation(&rel, x, y));
    }
    out
}

/// Checks, over the carriers in `instances`: (i) every surjection onto them
/// splits; (ii) the presubobject order found by morphism search agrees with
/// element inclusion, and the weak-pullback section route produces an actual
/// factorization; (iii) every total pseudo-relation yields a choice map, and
/// non-total ones admit none.
pub fn check_welemlogic(
    instances: &[FiniteSet],
    max_apex: usize,
    strategy: WeakLimitStrategy,
) -> Result<WelemlogicReport> {
    let mut report = WelemlogicReport::default();

    for y in instances {
        for n in 0..=y.len() + 1 {
            let x = FiniteSet::numbered("s", n);
            for f in enumerate_maps(&x, y).filter(FiniteMap::is_surjective) {
                report.surjections += 1;
                if least_section(&f).is_some() {
                    report.surjections_split += 1;
                }
            }
        }
    }

    for x in instances {
        let reps = arrows_into(x, max_apex);
        for a in &reps {
            for b in &reps {
                report.presubobject_pairs += 1;
                let (pa, pb) = (Presubobject::new(a.clone()), Presubobject::new(b.clone()));
                let by_search = bhk::psub_leq(&pa, &pb)?;
                let by_elements = bhk::element_leq(&pa, &pb)?;
                if by_search == by_elements {
                    report.order_agreements += 1;
                } else {
                    report.order_disagreements.push(format!(
                        "{a:?} vs {b:?}: search {by_search}, elements {by_elements}"
                    ));
                }
                if by_elements {
                    // The weak pullback of b along a is onto A; a section of
                    // its first leg followed by the second leg factors a
                    // through b.
                    let wpb = weak_pullback(a, b, strategy)?;
                    let ok = least_section(wpb.left())
                        .and_then(|s| compose(wpb.right(), &s).ok())
                        .is_some_and(|h| compose(b, &h).ok().as_ref() == Some(a));
                    if !ok {
                        report.proof_route_failures.push(format!("{a:?} ≤ {b:?}"));
                    }
                }
            }
        }
    }

    for x in instances {
        for y in instances {
            for span in spans_over(x, y, max_apex) {
                report.pseudo_relations += 1;
                let image = span.image();
                let extracted = extract_choice_map(&span);
                if image.is_total() {
                    report.total_pseudo_relations += 1;
                    match extracted {
                        Some(f) if x.elements().all(|e| image.holds(e, f.apply(e))) => {
                            report.choice_maps_extracted += 1
                        }
                        _ => report.choice_failures.push(format!("no choice map for {image:?}")),
                    }
                } else {
                    let exists = enumerate_maps(x, y).any(|f| x.elements().all(|e| image.holds(e, f.apply(e))));
                    if exists || extracted.is_some() {
                        report
                            .choice_failures
                            .push(format!("non-total {image:?} admits a choice map"));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// `f = r2 ∘ s` for the least section `s` of `r1`, when `r1` is onto.
pub fn extract_choice_map(span: &Span) -> Option<FiniteMap> {
    let s = least_section(span.left())?;
    compose(span.right(), &s).ok()
}
