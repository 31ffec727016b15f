//! The exact completion of finite sets with weak limits.
//!
//! Objects are pseudo-equivalence relations; an arrow is one representative
//! map between carriers, compatible with the relations, and two arrows are
//! equal when they agree up to the target relation. Every finite set is a
//! choice object, so all of this can be decided element by element; each
//! element-level decision is paired with the arrow-level witness it stands
//! for, and a mismatch is reported as [`Error::Disagreement`].

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::finset::{self, compose, count_maps, enumerate_maps, FiniteMap, FiniteSet};
use crate::qcart::{
    find_pseudo_eqrel_witnesses, is_choice_object, lifting, ElementRelation, PairIndex, PseudoEqRel, Span,
    WeakLimitStrategy,
};
use crate::unionfind::DisjointSets;

/// An object of the exact completion.
#[derive(Clone)]
pub struct ExObj(Arc<ExObjInner>);

struct ExObjInner {
    eqrel: PseudoEqRel,
    related: ElementRelation,
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
    lift: PairIndex,
}

impl ExObj {
    /// Wraps a pseudo-equivalence relation, re-checking its witnesses.
    pub fn new(eqrel: PseudoEqRel) -> Result<Self> {
        eqrel.check_squares()?;
        let related = eqrel.rel().image();
        if !related.is_equivalence() {
            return Err(Error::Disagreement(
                "witness squares commute but the image relation is not an equivalence".into(),
            ));
        }
        let (class_of, classes) = classes_by_union_find(eqrel.carrier().len(), &related);
        let lift = PairIndex::new(eqrel.rel());
        Ok(ExObj(Arc::new(ExObjInner {
            eqrel,
            related,
            class_of,
            classes,
            lift,
        })))
    }

    pub fn carrier(&self) -> &FiniteSet {
        self.0.eqrel.carrier()
    }

    pub fn eqrel(&self) -> &PseudoEqRel {
        &self.0.eqrel
    }

    pub fn span(&self) -> &Span {
        self.0.eqrel.rel()
    }

    pub fn relation(&self) -> &ElementRelation {
        &self.0.related
    }

    /// `x ∼ y`.
    #[inline]
    pub fn related(&self, x: usize, y: usize) -> bool {
        self.0.related.holds(x, y)
    }

    #[inline]
    pub fn class_of(&self, x: usize) -> usize {
        self.0.class_of[x]
    }

    /// Classes in canonical order (by least member), members ascending.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.0.classes
    }

    pub fn class_count(&self) -> usize {
        self.0.classes.len()
    }

    /// Canonical representative (least member) of each class; these stand
    /// for the global elements.
    pub fn representatives(&self) -> Vec<usize> {
        self.0.classes.iter().map(|c| c[0]).collect()
    }

    fn least_witness(&self, x: usize, y: usize) -> Option<usize> {
        self.0.lift.least(x, y)
    }

    pub fn ptr_eq(&self, other: &ExObj) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl PartialEq for ExObj {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.carrier() == other.carrier()
                && self.span().left() == other.span().left()
                && self.span().right() == other.span().right())
    }
}

impl Eq for ExObj {}

impl fmt::Debug for ExObj {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let classes: Vec<Vec<String>> = self
            .classes()
            .iter()
            .take(8)
            .map(|c| c.iter().take(6).map(|&x| self.carrier().label(x)).collect())
            .collect();
        write!(f, "ExObj{{carrier: {} elements, classes: {classes:?}}}", self.carrier().len())
    }
}

fn classes_by_union_find(n: usize, related: &ElementRelation) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut uf = DisjointSets::new(n);
    for (x, y) in related.pairs() {
        uf.union(x, y);
    }
    uf.canonical_classes()
}

/// An arrow of the exact completion, held by one representative.
#[derive(Clone, PartialEq, Eq)]
pub struct ExArrow {
    src: ExObj,
    dst: ExObj,
    rep: FiniteMap,
}

impl ExArrow {
    pub fn src(&self) -> &ExObj {
        &self.src
    }
    pub fn dst(&self) -> &ExObj {
        &self.dst
    }
    pub fn rep(&self) -> &FiniteMap {
        &self.rep
    }
    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.rep.apply(x)
    }
}

impl fmt::Debug for ExArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExArrow({:?})", self.rep)
    }
}

/// Validates `rep` as an arrow `src → dst`: related elements must go to
/// related elements. The element test is cross-checked against the search
/// for a tracking map `R → S` over `rep × rep`.
pub fn ex_arrow_validate(rep: FiniteMap, src: &ExObj, dst: &ExObj) -> Result<ExArrow> {
    if rep.dom() != src.carrier() || rep.cod() != dst.carrier() {
        return Err(Error::Boundary(format!(
            "representative {} → {} does not match carriers {} → {}",
            rep.dom().describe(),
            rep.cod().describe(),
            src.carrier().describe(),
            dst.carrier().describe()
        )));
    }
    let offending = src
        .relation()
        .pairs()
        .find(|&(x, y)| !dst.related(rep.apply(x), rep.apply(y)));
    let (r, s) = (src.span(), dst.span());
    let tracking = lifting(r.apex(), s.apex(), |a| {
        dst.least_witness(rep.apply(r.left().apply(a)), rep.apply(r.right().apply(a)))
    });
    match (offending, tracking) {
        (None, Some(_)) => Ok(ExArrow {
            src: src.clone(),
            dst: dst.clone(),
            rep,
        }),
        (Some((x, y)), None) => Err(Error::NotExArrow(format!(
            "{} ∼ {} but their images {} and {} are not related",
            src.carrier().label(x),
            src.carrier().label(y),
            dst.carrier().label(rep.apply(x)),
            dst.carrier().label(rep.apply(y))
        ))),
        (offending, tracking) => Err(Error::Disagreement(format!(
            "compatibility: element test says {}, tracking search says {}",
            offending.is_none(),
            tracking.is_some()
        ))),
    }
}

fn same_boundaries(f: &ExArrow, g: &ExArrow) -> Result<()> {
    if f.src != g.src || f.dst != g.dst {
        return Err(Error::Boundary("arrows of the exact completion are not parallel".into()));
    }
    Ok(())
}

/// Equality of arrows: `∀x. f x ∼ g x`, cross-checked against the search
/// for `h: X → S` with `s ∘ h = ⟨f, g⟩`.
pub fn ex_eq(f: &ExArrow, g: &ExArrow) -> Result<bool> {
    same_boundaries(f, g)?;
    let by_elements = f.src.carrier().elements().all(|x| f.dst.related(f.apply(x), g.apply(x)));
    let h = lifting(f.src.carrier(), f.dst.span().apex(), |x| f.dst.least_witness(f.apply(x), g.apply(x)));
    if by_elements != h.is_some() {
        return Err(Error::Disagreement(format!(
            "arrow equality: element test says {by_elements}, witness search says {}",
            h.is_some()
        )));
    }
    Ok(by_elements)
}

pub fn ex_identity(obj: &ExObj) -> ExArrow {
    ExArrow {
        src: obj.clone(),
        dst: obj.clone(),
        rep: FiniteMap::identity(obj.carrier()),
    }
}

/// `g ∘ f`.
pub fn ex_compose(g: &ExArrow, f: &ExArrow) -> Result<ExArrow> {
    if f.dst != g.src {
        return Err(Error::Composition {
            left: format!("{:?}", f.dst),
            right: format!("{:?}", g.src),
        });
    }
    Ok(ExArrow {
        src: f.src.clone(),
        dst: g.dst.clone(),
        rep: compose(&g.rep, &f.rep)?,
    })
}

/// Surjective on classes: every element of the target is related to an
/// image.
pub fn is_cover(f: &ExArrow) -> bool {
    let mut hit = vec![false; f.dst.class_count()];
    for x in f.src.carrier().elements() {
        hit[f.dst.class_of(f.apply(x))] = true;
    }
    hit.into_iter().all(|b| b)
}

/// Injective on classes.
pub fn is_mono(f: &ExArrow) -> bool {
    let xs = f.src.carrier();
    xs.elements()
        .all(|x| xs.elements().all(|y| !f.dst.related(f.apply(x), f.apply(y)) || f.src.related(x, y)))
}

/// Bijective on classes, cross-checked against [`find_inverse`].
pub fn is_iso(f: &ExArrow) -> Result<bool> {
    let by_elements = is_cover(f) && is_mono(f);
    let inverse = find_inverse(f)?;
    if by_elements != inverse.is_some() {
        return Err(Error::Disagreement(format!(
            "iso: class bijection says {by_elements}, inverse search says {}",
            inverse.is_some()
        )));
    }
    Ok(by_elements)
}

const BRUTE_INVERSE_LIMIT: u128 = 1 << 16;

/// An arrow `g` with `g f = id` and `f g = id`. Small hom-sets are searched
/// exhaustively in enumeration order; larger ones try the least-preimage
/// candidate, which is an inverse whenever one exists.
pub fn find_inverse(f: &ExArrow) -> Result<Option<ExArrow>> {
    let (a, b) = (&f.src, &f.dst);
    let is_inverse = |g: &FiniteMap| -> Result<bool> {
        let Ok(g) = ex_arrow_validate(g.clone(), b, a) else {
            return Ok(false);
        };
        Ok(ex_eq(&ex_compose(&g, f)?, &ex_identity(a))? && ex_eq(&ex_compose(f, &g)?, &ex_identity(b))?)
    };
    let small = count_maps(b.carrier().len(), a.carrier().len()).is_some_and(|n| n <= BRUTE_INVERSE_LIMIT);
    if small {
        for g in enumerate_maps(b.carrier(), a.carrier()) {
            if is_inverse(&g)? {
                return Ok(Some(ex_arrow_validate(g, b, a)?));
            }
        }
        return Ok(None);
    }
    let candidate = lifting(b.carrier(), a.carrier(), |y| {
        a.carrier().elements().find(|&x| b.related(f.apply(x), y))
    });
    match candidate {
        Some(g) if is_inverse(&g)? => Ok(Some(ex_arrow_validate(g, b, a)?)),
        _ => Ok(None),
    }
}

/// The set of classes (labelled `[x]` by the least member) and the map
/// sending each element to its class.
pub fn canonical_quotient(obj: &ExObj) -> (FiniteSet, FiniteMap) {
    let carrier = obj.carrier();
    let labels = obj.classes().iter().map(|c| format!("[{}]", carrier.label(c[0]))).collect();
    let q_set = FiniteSet::explicit(labels).expect("class representatives are distinct");
    let q = FiniteMap::from_fn(carrier, &q_set, |x| obj.class_of(x));
    (q_set, q)
}

/// The quotient functor on arrows: `[x] ↦ [f x]`.
pub fn quotient_map(f: &ExArrow) -> (FiniteSet, FiniteSet, FiniteMap) {
    let (qa, _) = canonical_quotient(&f.src);
    let (qb, _) = canonical_quotient(&f.dst);
    let reps = f.src.representatives();
    let m = FiniteMap::from_fn(&qa, &qb, |c| f.dst.class_of(f.apply(reps[c])));
    (qa, qb, m)
}

/// Representatives of every arrow `a → b`, one per equality class, in
/// enumeration order.
pub fn hom_classes(a: &ExObj, b: &ExObj) -> Result<Vec<ExArrow>> {
    let mut out: Vec<ExArrow> = Vec::new();
    for rep in enumerate_maps(a.carrier(), b.carrier()) {
        let Ok(f) = ex_arrow_validate(rep, a, b) else {
            continue;
        };
        let mut fresh = true;
        for g in &out {
            if ex_eq(g, &f)? {
                fresh = false;
                break;
            }
        }
        if fresh {
            out.push(f);
        }
    }
    Ok(out)
}

/// Products in the exact completion, with pairing.
#[derive(Clone, Debug)]
pub struct ExProduct {
    pub obj: ExObj,
    pub pr1: ExArrow,
    pub pr2: ExArrow,
    base: finset::Product,
}

impl ExProduct {
    pub fn pair(&self, f: &ExArrow, g: &ExArrow) -> Result<ExArrow> {
        if f.src != g.src || f.dst != *self.pr1.dst() || g.dst != *self.pr2.dst() {
            return Err(Error::Boundary("pairing legs do not match the product".into()));
        }
        let rep = self.base.pair(&f.rep, &g.rep)?;
        ex_arrow_validate(rep, &f.src, &self.obj)
    }

    #[inline]
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        self.base.pair_index(a, b)
    }
}

/// Binary sums, with copairing.
#[derive(Clone, Debug)]
pub struct ExSum {
    pub obj: ExObj,
    pub inl: ExArrow,
    pub inr: ExArrow,
    base: finset::Coproduct,
}

impl ExSum {
    pub fn copair(&self, f: &ExArrow, g: &ExArrow) -> Result<ExArrow> {
        if f.dst != g.dst || f.src != *self.inl.src() || g.src != *self.inr.src() {
            return Err(Error::Boundary("copairing legs do not match the sum".into()));
        }
        let rep = self.base.copair(&f.rep, &g.rep)?;
        ex_arrow_validate(rep, &self.obj, &f.dst)
    }
}

/// Kernel pair `K ⇉ X` of an arrow `X → Y`.
#[derive(Clone, Debug)]
pub struct KernelPair {
    pub obj: ExObj,
    pub k1: ExArrow,
    pub k2: ExArrow,
}

impl KernelPair {
    /// Image of `⟨k1, k2⟩` on elements of `X`.
    pub fn relation(&self) -> ElementRelation {
        let n = self.k1.dst().carrier().len();
        ElementRelation::from_pairs(
            n,
            n,
            self.obj.carrier().elements().map(|k| (self.k1.apply(k), self.k2.apply(k))),
        )
    }
}

/// Constructions that need a choice of weak pullbacks for their witnesses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExCompletion {
    pub strategy: WeakLimitStrategy,
}

impl ExCompletion {
    pub fn new(strategy: WeakLimitStrategy) -> Self {
        ExCompletion { strategy }
    }

    pub fn object_from_span(&self, span: &Span) -> Result<ExObj> {
        match find_pseudo_eqrel_witnesses(span, self.strategy)? {
            Ok(eqrel) => ExObj::new(eqrel),
            Err(failure) => Err(Error::Construction(format!(
                "span is not a pseudo-equivalence relation ({failure:?})"
            ))),
        }
    }

    pub fn object_from_relation(&self, carrier: &FiniteSet, rel: &ElementRelation) -> Result<ExObj> {
        self.object_from_span(&Span::from_relation(rel, carrier, carrier))
    }

    pub fn object_from_predicate(&self, carrier: &FiniteSet, related: impl Fn(usize, usize) -> bool) -> Result<ExObj> {
        let n = carrier.len();
        self.object_from_relation(carrier, &ElementRelation::from_fn(n, n, related))
    }

    /// `Γ X`: the diagonal on `X`.
    pub fn gamma(&self, x: &FiniteSet) -> ExObj {
        self.object_from_span(&Span::diagonal(x)).expect("the diagonal is an equivalence")
    }

    pub fn gamma_map(&self, f: &FiniteMap) -> ExArrow {
        ex_arrow_validate(f.clone(), &self.gamma(f.dom()), &self.gamma(f.cod()))
            .expect("every map is compatible with diagonals")
    }

    pub fn terminal(&self) -> ExObj {
        self.gamma(&finset::terminal())
    }

    pub fn initial(&self) -> ExObj {
        self.gamma(&finset::initial())
    }

    /// `Γ(carrier) → obj`, represented by the identity.
    pub fn quotient(&self, obj: &ExObj) -> ExArrow {
        ex_arrow_validate(FiniteMap::identity(obj.carrier()), &self.gamma(obj.carrier()), obj)
            .expect("identity is compatible with any relation out of the diagonal")
    }

    pub fn product(&self, a: &ExObj, b: &ExObj) -> Result<ExProduct> {
        let base = finset::product(a.carrier(), b.carrier());
        let nb = b.carrier().len();
        let obj = self.object_from_predicate(&base.set, |p, q| {
            a.related(p / nb, q / nb) && b.related(p % nb, q % nb)
        })?;
        let pr1 = ex_arrow_validate(base.pr1(), &obj, a)?;
        let pr2 = ex_arrow_validate(base.pr2(), &obj, b)?;
        Ok(ExProduct { obj, pr1, pr2, base })
    }

    pub fn sum(&self, a: &ExObj, b: &ExObj) -> Result<ExSum> {
        let base = finset::coproduct(a.carrier(), b.carrier());
        let na = a.carrier().len();
        let obj = self.object_from_predicate(&base.set, |p, q| match (p < na, q < na) {
            (true, true) => a.related(p, q),
            (false, false) => b.related(p - na, q - na),
            _ => false,
        })?;
        let inl = ex_arrow_validate(base.inl.clone(), a, &obj)?;
        let inr = ex_arrow_validate(base.inr.clone(), b, &obj)?;
        Ok(ExSum { obj, inl, inr, base })
    }

    /// `{x | f x ∼ g x}` with the restricted relation and its inclusion.
    pub fn equalizer(&self, f: &ExArrow, g: &ExArrow) -> Result<(ExObj, ExArrow)> {
        same_boundaries(f, g)?;
        let x = &f.src;
        let members: Vec<usize> = x.carrier().elements().filter(|&e| f.dst.related(f.apply(e), g.apply(e))).collect();
        let (sub, incl) = finset::inclusion(x.carrier(), members.clone());
        let obj = self.object_from_predicate(&sub, |p, q| x.related(members[p], members[q]))?;
        let e = ex_arrow_validate(incl, &obj, x)?;
        Ok((obj, e))
    }

    /// The target with the equivalence generated by `∼` and `f x ∼ g x`.
    pub fn coequalizer(&self, f: &ExArrow, g: &ExArrow) -> Result<(ExObj, ExArrow)> {
        same_boundaries(f, g)?;
        let y = &f.dst;
        let mut uf = DisjointSets::new(y.carrier().len());
        for (a, b) in y.relation().pairs() {
            uf.union(a, b);
        }
        for x in f.src.carrier().elements() {
            uf.union(f.apply(x), g.apply(x));
        }
        let (class_of, _) = uf.canonical_classes();
        let obj = self.object_from_predicate(y.carrier(), |a, b| class_of[a] == class_of[b])?;
        let q = ex_arrow_validate(FiniteMap::identity(y.carrier()), y, &obj)?;
        Ok((obj, q))
    }

    /// `K = {(x, x') | f x ∼ f x'}` with the componentwise relation.
    pub fn kernel_pair(&self, f: &ExArrow) -> Result<KernelPair> {
        let x = &f.src;
        let base = finset::product(x.carrier(), x.carrier());
        let n = x.carrier().len();
        let members: Vec<usize> = base
            .set
            .elements()
            .filter(|&p| f.dst.related(f.apply(p / n), f.apply(p % n)))
            .collect();
        let (sub, incl) = finset::inclusion(&base.set, members.clone());
        let obj = self.object_from_predicate(&sub, |p, q| {
            let (a, b) = (members[p], members[q]);
            x.related(a / n, b / n) && x.related(a % n, b % n)
        })?;
        let (l, r) = base.legs(&incl)?;
        let k1 = ex_arrow_validate(l, &obj, x)?;
        let k2 = ex_arrow_validate(r, &obj, x)?;
        Ok(KernelPair { obj, k1, k2 })
    }

    /// `f = mono ∘ cover`, through the carrier of `X` related by `f x ∼ f x'`.
    pub fn image_factorization(&self, f: &ExArrow) -> Result<(ExArrow, ExArrow)> {
        let x = &f.src;
        let image = self.object_from_predicate(x.carrier(), |a, b| f.dst.related(f.apply(a), f.apply(b)))?;
        let cover = ex_arrow_validate(FiniteMap::identity(x.carrier()), x, &image)?;
        let mono = ex_arrow_validate(f.rep.clone(), &image, &f.dst)?;
        Ok((cover, mono))
    }
}

/// Every finite carrier of the listed objects is a choice object; the
/// element-wise decision procedures of this module rely on it.
pub fn assert_choice_hypothesis<'a>(objects: impl IntoIterator<Item = &'a ExObj>) -> bool {
    objects.into_iter().all(|o| o.carrier().len() > 6 || is_choice_object(o.carrier()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const STRATEGIES: [WeakLimitStrategy; 2] = [WeakLimitStrategy::Minimal, WeakLimitStrategy::Padded(2)];

    fn three() -> FiniteSet {
        FiniteSet::numbered("x", 3)
    }

    /// 0 ∼ 1, 2 alone.
    fn coarse(ex: &ExCompletion) -> ExObj {
        ex.object_from_predicate(&three(), |a, b| a == b || (a < 2 && b < 2)).unwrap()
    }

    #[test]
    fn gamma_of_one_is_terminal() {
        for s in STRATEGIES {
            let ex = ExCompletion::new(s);
            let one = ex.terminal();
            for n in 0..=3 {
                let x = ex.gamma(&FiniteSet::numbered("x", n));
                assert_eq!(hom_classes(&x, &one).unwrap().len(), 1);
            }
            let c = coarse(&ex);
            assert_eq!(hom_classes(&c, &one).unwrap().len(), 1);
        }
    }

    #[test]
    fn gamma_is_full_and_faithful_on_small_homsets() {
        let ex = ExCompletion::default();
        for na in 0..=3 {
            for nb in 0..=3 {
                let (a, b) = (FiniteSet::numbered("a", na), FiniteSet::numbered("b", nb));
                let classes = hom_classes(&ex.gamma(&a), &ex.gamma(&b)).unwrap();
                assert_eq!(classes.len() as u128, count_maps(na, nb).unwrap());
            }
        }
    }

    #[test]
    fn gamma_preserves_products_up_to_iso() {
        let ex = ExCompletion::default();
        let (a, b) = (FiniteSet::numbered("a", 2), FiniteSet::numbered("b", 3));
        let prod = ex.product(&ex.gamma(&a), &ex.gamma(&b)).unwrap();
        let direct = ex.gamma(&finset::product(&a, &b).set);
        let id = ex_arrow_validate(FiniteMap::identity(direct.carrier()), &prod.obj, &direct).unwrap();
        assert!(is_iso(&id).unwrap());
    }

    #[test]
    fn validation_examples() {
        let ex = ExCompletion::default();
        let c = coarse(&ex);
        assert!(ex_arrow_validate(FiniteMap::identity(&three()), &c, &c).is_ok());
        let constant = FiniteMap::constant(&three(), &three(), 1).unwrap();
        assert!(ex_arrow_validate(constant, &c, &c).is_ok());

        // identity from the coarse relation to the diagonal splits the class {0, 1}
        let g = ex.gamma(&three());
        match ex_arrow_validate(FiniteMap::identity(&three()), &c, &g) {
            Err(Error::NotExArrow(msg)) => assert!(msg.contains("x0") && msg.contains("x1")),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn equality_examples() {
        let ex = ExCompletion::default();
        let c = coarse(&ex);
        let id = ex_identity(&c);
        assert!(ex_eq(&id, &id).unwrap());

        // swap 0 and 1 stays inside the class
        let swap = ex_arrow_validate(FiniteMap::new(three(), three(), vec![1, 0, 2]).unwrap(), &c, &c).unwrap();
        assert!(ex_eq(&swap, &id).unwrap());

        let g = ex.gamma(&three());
        let f1 = ex_arrow_validate(FiniteMap::constant(&three(), &three(), 0).unwrap(), &g, &g).unwrap();
        let f2 = ex_arrow_validate(FiniteMap::new(three(), three(), vec![0, 0, 1]).unwrap(), &g, &g).unwrap();
        assert!(!ex_eq(&f1, &f2).unwrap());
        assert!(ex_eq(&f1, &id).is_err());
    }

    #[test]
    fn quotient_examples() {
        let ex = ExCompletion::default();
        let (q, _) = canonical_quotient(&ex.gamma(&three()));
        assert_eq!(q.len(), 3);

        let c = coarse(&ex);
        let (q, map) = canonical_quotient(&c);
        assert_eq!(q.labels(), vec!["[x0]", "[x2]"]);
        assert_eq!(map.table(), &[0, 0, 1]);

        let cover = ex.quotient(&c);
        assert!(is_cover(&cover));
        let kp = ex.kernel_pair(&cover).unwrap();
        assert_eq!(&kp.relation(), c.relation());
    }

    #[test]
    fn union_find_classes_match_a_closure_oracle() {
        // generated by 0 ∼ 1 only: reflexive-symmetric-transitive closure
        let ex = ExCompletion::default();
        let gen = ElementRelation::from_pairs(3, 3, [(0, 1)]);
        let g = ex.gamma(&three());
        let f = ex_arrow_validate(FiniteMap::constant(&FiniteSet::numbered("p", 1), &three(), 0).unwrap(),
            &ex.gamma(&FiniteSet::numbered("p", 1)), &g).unwrap();
        let h = ex_arrow_validate(FiniteMap::constant(&FiniteSet::numbered("p", 1), &three(), 1).unwrap(),
            &ex.gamma(&FiniteSet::numbered("p", 1)), &g).unwrap();
        let (coeq, _) = ex.coequalizer(&f, &h).unwrap();
        assert_eq!(coeq.class_count(), 2);
        // Warshall closure as the oracle
        let mut closure = gen.clone();
        for x in 0..3 {
            closure.insert(x, x);
        }
        for (a, b) in gen.pairs() {
            closure.insert(b, a);
        }
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    if closure.holds(i, k) && closure.holds(k, j) {
                        closure.insert(i, j);
                    }
                }
            }
        }
        assert_eq!(coeq.relation(), &closure);
    }

    #[test]
    fn limits_and_colimits_examples() {
        let ex = ExCompletion::default();
        let (a, b) = (ex.gamma(&FiniteSet::numbered("a", 2)), coarse(&ex));
        let sum = ex.sum(&a, &b).unwrap();
        assert_eq!(sum.obj.carrier().len(), 5);
        assert_eq!(sum.obj.class_count(), a.class_count() + b.class_count());
        assert!(!sum.obj.related(0, 2));

        let c = coarse(&ex);
        let k = FiniteMap::constant(&three(), &three(), 2).unwrap();
        let constant = ex_arrow_validate(k, &c, &c).unwrap();
        let (cover, mono) = ex.image_factorization(&constant).unwrap();
        assert_eq!(cover.dst().class_count(), 1);
        assert!(is_cover(&cover) && is_mono(&mono));
        assert!(ex_eq(&ex_compose(&mono, &cover).unwrap(), &constant).unwrap());
    }

    #[test]
    fn cover_mono_iso_examples() {
        for s in STRATEGIES {
            let ex = ExCompletion::new(s);
            let c = coarse(&ex);
            assert!(is_cover(&ex.quotient(&c)));
            assert!(!is_mono(&ex.quotient(&c)));

            let incl = finset::inclusion(&three(), vec![0, 2]).1;
            let gi = ex.gamma_map(&incl);
            assert!(is_mono(&gi));
            assert!(!is_cover(&gi));
            assert!(!is_iso(&gi).unwrap());
        }
    }

    #[test]
    fn iso_iff_inverse_found_exhaustively() {
        let ex = ExCompletion::default();
        let objects: Vec<ExObj> = vec![
            ex.gamma(&FiniteSet::numbered("a", 2)),
            coarse(&ex),
            ex.gamma(&three()),
            ex.object_from_predicate(&three(), |_, _| true).unwrap(),
        ];
        for a in &objects {
            for b in &objects {
                for rep in enumerate_maps(a.carrier(), b.carrier()) {
                    if let Ok(f) = ex_arrow_validate(rep, a, b) {
                        // is_iso returns an error on disagreement
                        let iso = is_iso(&f).unwrap();
                        assert_eq!(iso, a.class_count() == b.class_count() && is_cover(&f) && is_mono(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn quotient_functor_counts_homs() {
        let ex = ExCompletion::default();
        let objects = [coarse(&ex), ex.gamma(&FiniteSet::numbered("a", 2)), ex.initial()];
        for a in &objects {
            for b in &objects {
                let n = hom_classes(a, b).unwrap().len() as u128;
                assert_eq!(n, count_maps(a.class_count(), b.class_count()).unwrap());
            }
        }
    }
}
