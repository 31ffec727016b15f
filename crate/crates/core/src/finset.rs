//! Finite sets, total maps between them, and the strict (co)limits of
//! finite sets.
//!
//! Elements are addressed by their position in the carrier's canonical
//! order. Labels are only materialised on demand: derived carriers
//! (products, sums, subsets, padded copies) store their shape and compute
//! labels lazily, which keeps large intermediate objects cheap.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Characters that user-supplied labels may not contain, because derived
/// carriers use them to build structured labels.
pub const RESERVED_LABEL_CHARS: &[char] = &['(', ')', ',', '#', '[', ']', '{', '}'];

#[derive(Clone)]
pub struct FiniteSet(Arc<SetInner>);

struct SetInner {
    len: usize,
    shape: Shape,
}

enum Shape {
    Explicit {
        labels: Vec<String>,
        index: HashMap<String, usize>,
    },
    Product(FiniteSet, FiniteSet),
    Coproduct(FiniteSet, FiniteSet),
    /// `k` consecutive copies of every element of the base, labelled `x#j`.
    Padded(FiniteSet, usize),
    /// The listed elements of the parent, in the listed order.
    Subset(FiniteSet, Vec<usize>),
}

impl FiniteSet {
    /// Builds a set from user-facing labels. Labels must be pairwise distinct
    /// and free of [`RESERVED_LABEL_CHARS`].
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        for l in &labels {
            if l.is_empty() {
                return Err(Error::InvalidSet("empty label".into()));
            }
            if let Some(c) = l.chars().find(|c| RESERVED_LABEL_CHARS.contains(c)) {
                return Err(Error::InvalidSet(format!(
                    "label `{l}` contains reserved character `{c}`"
                )));
            }
        }
        Self::explicit(labels)
    }

    /// Like [`FiniteSet::new`] but accepts structured labels. Only
    /// distinctness is checked.
    pub fn explicit(labels: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidSet(format!("duplicate label `{l}`")));
            }
        }
        Ok(Self::from_shape(labels.len(), Shape::Explicit { labels, index }))
    }

    /// `{prefix0, prefix1, ...}` with `n` elements.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        Self::new((0..n).map(|i| format!("{prefix}{i}"))).expect("numbered labels are distinct")
    }

    fn from_shape(len: usize, shape: Shape) -> Self {
        FiniteSet(Arc::new(SetInner { len, shape }))
    }

    pub(crate) fn product_of(a: &FiniteSet, b: &FiniteSet) -> Self {
        Self::from_shape(a.len() * b.len(), Shape::Product(a.clone(), b.clone()))
    }

    pub(crate) fn coproduct_of(a: &FiniteSet, b: &FiniteSet) -> Self {
        Self::from_shape(a.len() + b.len(), Shape::Coproduct(a.clone(), b.clone()))
    }

    pub(crate) fn padded(base: &FiniteSet, k: usize) -> Self {
        Self::from_shape(base.len() * k, Shape::Padded(base.clone(), k))
    }

    pub(crate) fn subset(parent: &FiniteSet, members: Vec<usize>) -> Self {
        debug_assert!(members.iter().all(|&m| m < parent.len()));
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self::from_shape(members.len(), Shape::Subset(parent.clone(), members))
    }

    pub fn len(&self) -> usize {
        self.0.len
    }

    pub fn is_empty(&self) -> bool {
        self.0.len == 0
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.0.len
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.0.len
    }

    pub fn check(&self, x: usize) -> Result<usize> {
        if self.contains(x) {
            Ok(x)
        } else {
            Err(Error::UnknownElement {
                element: format!("#{x}"),
                carrier: self.describe(),
            })
        }
    }

    pub fn label(&self, x: usize) -> String {
        assert!(x < self.len(), "element {x} out of range for {}", self.describe());
        match &self.0.shape {
            Shape::Explicit { labels, .. } => labels[x].clone(),
            Shape::Product(a, b) => {
                let (i, j) = (x / b.len(), x % b.len());
                format!("({},{})", a.label(i), b.label(j))
            }
            Shape::Coproduct(a, b) => {
                if x < a.len() {
                    format!("L:{}", a.label(x))
                } else {
                    format!("R:{}", b.label(x - a.len()))
                }
            }
            Shape::Padded(base, k) => format!("{}#{}", base.label(x / k), x % k),
            Shape::Subset(parent, members) => parent.label(members[x]),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements().map(|x| self.label(x)).collect()
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        let found = match &self.0.shape {
            Shape::Explicit { index, .. } => index.get(label).copied(),
            _ => self.elements().find(|&x| self.label(x) == label),
        };
        found.ok_or_else(|| Error::UnknownElement {
            element: label.to_string(),
            carrier: self.describe(),
        })
    }

    /// Short human-readable rendering, truncated for large carriers.
    pub fn describe(&self) -> String {
        const SHOWN: usize = 6;
        let mut parts: Vec<String> = self.elements().take(SHOWN).map(|x| self.label(x)).collect();
        if self.len() > SHOWN {
            parts.push(format!("... ({} elements)", self.len()));
        }
        format!("{{{}}}", parts.join(", "))
    }

    pub fn ptr_eq(&self, other: &FiniteSet) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn shape_eq(&self, other: &FiniteSet) -> Option<bool> {
        use Shape::*;
        Some(match (&self.0.shape, &other.0.shape) {
            (Explicit { labels: a, .. }, Explicit { labels: b, .. }) => a == b,
            (Product(a1, b1), Product(a2, b2)) | (Coproduct(a1, b1), Coproduct(a2, b2)) => {
                a1 == a2 && b1 == b2
            }
            (Padded(a, k1), Padded(b, k2)) => k1 == k2 && a == b,
            (Subset(p1, m1), Subset(p2, m2)) => m1 == m2 && p1 == p2,
            _ => return None,
        })
    }
}

impl PartialEq for FiniteSet {
    fn eq(&self, other: &Self) -> bool {
        if self.ptr_eq(other) {
            return true;
        }
        if self.len() != other.len() {
            return false;
        }
        match self.shape_eq(other) {
            Some(true) => true,
            // Different shapes (or equal shapes over label-equal parts that
            // were built differently) fall back to the label lists.
            _ => self.elements().all(|x| self.label(x) == other.label(x)),
        }
    }
}

impl Eq for FiniteSet {}

impl fmt::Debug for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteSet{}", self.describe())
    }
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// The one-element set `{*}`.
pub fn terminal() -> FiniteSet {
    FiniteSet::new(["*"]).expect("valid")
}

/// The empty set.
pub fn initial() -> FiniteSet {
    FiniteSet::explicit(Vec::new()).expect("valid")
}

/// A total function between finite carriers.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMap {
    dom: FiniteSet,
    cod: FiniteSet,
    table: Arc<[usize]>,
}

impl FiniteMap {
    pub fn new(dom: FiniteSet, cod: FiniteSet, table: Vec<usize>) -> Result<Self> {
        if table.len() != dom.len() {
            return Err(Error::InvalidMap(format!(
                "table has {} entries but domain {} has {} elements",
                table.len(),
                dom.describe(),
                dom.len()
            )));
        }
        if let Some((x, &y)) = table.iter().enumerate().find(|(_, &y)| y >= cod.len()) {
            return Err(Error::InvalidMap(format!(
                "{} is sent to #{y}, outside codomain {}",
                dom.label(x),
                cod.describe()
            )));
        }
        Ok(FiniteMap {
            dom,
            cod,
            table: table.into(),
        })
    }

    /// Tabulates `f`. Panics if `f` leaves the codomain; use [`FiniteMap::new`]
    /// for unchecked input.
    pub fn from_fn(dom: &FiniteSet, cod: &FiniteSet, f: impl Fn(usize) -> usize) -> Self {
        let table: Vec<usize> = dom.elements().map(f).collect();
        assert!(table.iter().all(|&y| y < cod.len()), "from_fn: value outside codomain");
        FiniteMap {
            dom: dom.clone(),
            cod: cod.clone(),
            table: table.into(),
        }
    }

    pub fn identity(set: &FiniteSet) -> Self {
        Self::from_fn(set, set, |x| x)
    }

    pub fn constant(dom: &FiniteSet, cod: &FiniteSet, y: usize) -> Result<Self> {
        cod.check(y)?;
        Ok(Self::from_fn(dom, cod, |_| y))
    }

    pub fn dom(&self) -> &FiniteSet {
        &self.dom
    }

    pub fn cod(&self) -> &FiniteSet {
        &self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    /// `self` followed by `next`, i.e. `next ∘ self`.
    pub fn then(&self, next: &FiniteMap) -> Result<FiniteMap> {
        compose(next, self)
    }

    pub fn image(&self) -> Vec<bool> {
        let mut hit = vec![false; self.cod.len()];
        for &y in self.table.iter() {
            hit[y] = true;
        }
        hit
    }

    pub fn in_image(&self, y: usize) -> bool {
        self.table.contains(&y)
    }

    /// Elements of the domain sent to `y`, ascending.
    pub fn fiber(&self, y: usize) -> Vec<usize> {
        self.dom.elements().filter(|&x| self.table[x] == y).collect()
    }

    pub fn fibers(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cod.len()];
        for (x, &y) in self.table.iter().enumerate() {
            out[y].push(x);
        }
        out
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod.len()];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().into_iter().all(|b| b)
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.table.iter().enumerate().all(|(x, &y)| x == y)
    }

    /// Same boundaries (by set equality) and same table.
    pub fn same_as(&self, other: &FiniteMap) -> bool {
        self.table == other.table && self.dom == other.dom && self.cod == other.cod
    }
}

impl fmt::Debug for FiniteMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shown: Vec<String> = self
            .dom
            .elements()
            .take(8)
            .map(|x| format!("{}↦{}", self.dom.label(x), self.cod.label(self.table[x])))
            .collect();
        let more = if self.dom.len() > 8 { ", ..." } else { "" };
        write!(f, "FiniteMap[{}{}]", shown.join(", "), more)
    }
}

/// `g ∘ f`.
pub fn compose(g: &FiniteMap, f: &FiniteMap) -> Result<FiniteMap> {
    if f.cod != g.dom {
        return Err(Error::Composition {
            left: f.cod.describe(),
            right: g.dom.describe(),
        });
    }
    Ok(FiniteMap {
        dom: f.dom.clone(),
        cod: g.cod.clone(),
        table: f.table.iter().map(|&y| g.table[y]).collect(),
    })
}

fn check_parallel(f: &FiniteMap, g: &FiniteMap) -> Result<()> {
    if f.dom != g.dom || f.cod != g.cod {
        return Err(Error::Boundary(format!(
            "maps are not parallel: {} → {} vs {} → {}",
            f.dom.describe(),
            f.cod.describe(),
            g.dom.describe(),
            g.cod.describe()
        )));
    }
    Ok(())
}

/// Binary product; the projection tables are built on demand.
#[derive(Clone, Debug)]
pub struct Product {
    pub set: FiniteSet,
    left: FiniteSet,
    right: FiniteSet,
}

impl Product {
    pub fn left(&self) -> &FiniteSet {
        &self.left
    }

    pub fn right(&self) -> &FiniteSet {
        &self.right
    }

    pub fn pr1(&self) -> FiniteMap {
        let n = self.right.len();
        FiniteMap::from_fn(&self.set, &self.left, |p| p / n)
    }

    pub fn pr2(&self) -> FiniteMap {
        let n = self.right.len();
        FiniteMap::from_fn(&self.set, &self.right, |p| p % n)
    }

    /// `(pr1 p, pr2 p)`.
    #[inline]
    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.right.len(), p % self.right.len())
    }

    /// `pr1 ∘ m` and `pr2 ∘ m` without building the projections.
    pub fn legs(&self, m: &FiniteMap) -> Result<(FiniteMap, FiniteMap)> {
        if m.cod != self.set {
            return Err(Error::Composition {
                left: m.cod.describe(),
                right: self.set.describe(),
            });
        }
        let l = FiniteMap::from_fn(&m.dom, &self.left, |x| self.split(m.apply(x)).0);
        let r = FiniteMap::from_fn(&m.dom, &self.right, |x| self.split(m.apply(x)).1);
        Ok((l, r))
    }

    #[inline]
    pub fn pair_index(&self, a: usize, b: usize) -> usize {
        a * self.right().len() + b
    }

    /// The unique `⟨f, g⟩` with `pr1⟨f,g⟩ = f` and `pr2⟨f,g⟩ = g`.
    pub fn pair(&self, f: &FiniteMap, g: &FiniteMap) -> Result<FiniteMap> {
        if f.dom != g.dom {
            return Err(Error::Boundary(format!(
                "pairing needs a common domain, got {} and {}",
                f.dom.describe(),
                g.dom.describe()
            )));
        }
        if f.cod != *self.left() || g.cod != *self.right() {
            return Err(Error::Boundary("pairing legs do not land in the product factors".into()));
        }
        Ok(FiniteMap::from_fn(&f.dom, &self.set, |x| {
            self.pair_index(f.apply(x), g.apply(x))
        }))
    }
}

pub fn product(a: &FiniteSet, b: &FiniteSet) -> Product {
    Product {
        set: FiniteSet::product_of(a, b),
        left: a.clone(),
        right: b.clone(),
    }
}

/// `f × g : A × B → C × D`.
pub fn product_map(f: &FiniteMap, g: &FiniteMap) -> FiniteMap {
    let src = FiniteSet::product_of(f.dom(), g.dom());
    let dst = FiniteSet::product_of(f.cod(), g.cod());
    let (nb, nd) = (g.dom().len(), g.cod().len());
    FiniteMap::from_fn(&src, &dst, |p| f.apply(p / nb) * nd + g.apply(p % nb))
}

/// The strict equalizer `{x | f x = g x}` with its (monic) inclusion.
pub fn equalizer(f: &FiniteMap, g: &FiniteMap) -> Result<(FiniteSet, FiniteMap)> {
    check_parallel(f, g)?;
    let members: Vec<usize> = f.dom.elements().filter(|&x| f.apply(x) == g.apply(x)).collect();
    Ok(inclusion(&f.dom, members))
}

/// The subset of `parent` on `members` (ascending) with its inclusion.
pub fn inclusion(parent: &FiniteSet, members: Vec<usize>) -> (FiniteSet, FiniteMap) {
    let sub = FiniteSet::subset(parent, members.clone());
    let e = FiniteMap::new(sub.clone(), parent.clone(), members).expect("members lie in parent");
    (sub, e)
}

/// Tagged union with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub set: FiniteSet,
    pub inl: FiniteMap,
    pub inr: FiniteMap,
}

impl Coproduct {
    /// The unique `[f, g]` with `[f,g]∘inl = f` and `[f,g]∘inr = g`.
    pub fn copair(&self, f: &FiniteMap, g: &FiniteMap) -> Result<FiniteMap> {
        if f.cod != g.cod {
            return Err(Error::Boundary(format!(
                "copairing needs a common codomain, got {} and {}",
                f.cod.describe(),
                g.cod.describe()
            )));
        }
        if f.dom != *self.inl.dom() || g.dom != *self.inr.dom() {
            return Err(Error::Boundary("copairing legs do not start at the summands".into()));
        }
        let n = f.dom.len();
        Ok(FiniteMap::from_fn(&self.set, &f.cod, |z| {
            if z < n {
                f.apply(z)
            } else {
                g.apply(z - n)
            }
        }))
    }
}

pub fn coproduct(a: &FiniteSet, b: &FiniteSet) -> Coproduct {
    let set = FiniteSet::coproduct_of(a, b);
    let n = a.len();
    let inl = FiniteMap::from_fn(a, &set, |x| x);
    let inr = FiniteMap::from_fn(b, &set, |y| n + y);
    Coproduct { set, inl, inr }
}

/// `f + g : A + B → C + D`.
pub fn coproduct_map(f: &FiniteMap, g: &FiniteMap) -> FiniteMap {
    let src = FiniteSet::coproduct_of(f.dom(), g.dom());
    let dst = FiniteSet::coproduct_of(f.cod(), g.cod());
    let (na, nc) = (f.dom().len(), f.cod().len());
    FiniteMap::from_fn(&src, &dst, |z| {
        if z < na {
            f.apply(z)
        } else {
            nc + g.apply(z - na)
        }
    })
}

/// The unique map into the terminal set.
pub fn to_terminal(a: &FiniteSet, one: &FiniteSet) -> FiniteMap {
    assert_eq!(one.len(), 1);
    FiniteMap::from_fn(a, one, |_| 0)
}

/// The unique map out of the empty set.
pub fn from_initial(zero: &FiniteSet, a: &FiniteSet) -> FiniteMap {
    assert!(zero.is_empty());
    FiniteMap::from_fn(zero, a, |_| unreachable!())
}

/// Lazily enumerates all `|B|^|A|` maps `A → B` in lexicographic order of
/// their tables (last position varies fastest).
pub fn enumerate_maps(a: &FiniteSet, b: &FiniteSet) -> MapIter {
    MapIter {
        dom: a.clone(),
        cod: b.clone(),
        next: if a.is_empty() || !b.is_empty() {
            Some(vec![0; a.len()])
        } else {
            None
        },
    }
}

pub fn count_maps(a: usize, b: usize) -> Option<u128> {
    (b as u128).checked_pow(u32::try_from(a).ok()?)
}

pub struct MapIter {
    dom: FiniteSet,
    cod: FiniteSet,
    next: Option<Vec<usize>>,
}

impl Iterator for MapIter {
    type Item = FiniteMap;

    fn next(&mut self) -> Option<FiniteMap> {
        let table = self.next.take()?;
        let mut succ = table.clone();
        let n = self.cod.len();
        let mut pos = succ.len();
        let mut carried = true;
        while carried && pos > 0 {
            pos -= 1;
            succ[pos] += 1;
            if succ[pos] == n {
                succ[pos] = 0;
            } else {
                carried = false;
            }
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(FiniteMap {
            dom: self.dom.clone(),
            cod: self.cod.clone(),
            table: table.into(),
        })
    }
}

/// Depth-first search for the lexicographically first map `A → B` whose
/// entries all satisfy `allowed(x, y)` and whose full table satisfies
/// `accept`. `allowed` must only rule out values that no accepted map uses
/// at that position; the result then equals the first hit of filtering
/// [`enumerate_maps`] with `accept`.
pub fn search_maps(
    a: &FiniteSet,
    b: &FiniteSet,
    allowed: impl Fn(usize, usize) -> bool,
    accept: impl Fn(&[usize]) -> bool,
) -> Option<FiniteMap> {
    let candidates: Vec<Vec<usize>> = a
        .elements()
        .map(|x| b.elements().filter(|&y| allowed(x, y)).collect())
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let n = a.len();
    let mut cursor = vec![0usize; n];
    let mut table: Vec<usize> = candidates.iter().map(|c| c[0]).collect();
    loop {
        if accept(&table) {
            return FiniteMap::new(a.clone(), b.clone(), table).ok();
        }
        // advance the odometer over the candidate lists
        let mut pos = n;
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < candidates[pos].len() {
                table[pos] = candidates[pos][cursor[pos]];
                break;
            }
            cursor[pos] = 0;
            table[pos] = candidates[pos][0];
        }
    }
}

/// All sections `s` of `f` (`f ∘ s = id`), in lexicographic order. Empty iff
/// `f` is not surjective.
pub fn sections_of(f: &FiniteMap) -> Vec<FiniteMap> {
    let fibers = f.fibers();
    if fibers.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cursor = vec![0usize; fibers.len()];
    loop {
        let table: Vec<usize> = cursor.iter().zip(&fibers).map(|(&c, fib)| fib[c]).collect();
        out.push(FiniteMap::new(f.cod.clone(), f.dom.clone(), table).expect("fibers lie in domain"));
        let mut pos = fibers.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cursor[pos] += 1;
            if cursor[pos] < fibers[pos].len() {
                break;
            }
            cursor[pos] = 0;
        }
    }
}

/// The section picking the least preimage of every element, if `f` is
/// surjective.
pub fn least_section(f: &FiniteMap) -> Option<FiniteMap> {
    let mut least = vec![usize::MAX; f.cod.len()];
    for (x, &y) in f.table.iter().enumerate().rev() {
        least[y] = x;
    }
    if least.contains(&usize::MAX) {
        return None;
    }
    FiniteMap::new(f.cod.clone(), f.dom.clone(), least).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(labels: &[&str]) -> FiniteSet {
        FiniteSet::new(labels.iter().copied()).unwrap()
    }

    #[test]
    fn rejects_duplicate_and_reserved_labels() {
        assert!(FiniteSet::new(["a", "a"]).is_err());
        assert!(FiniteSet::new(["a,b"]).is_err());
        assert!(FiniteSet::new(["x#1"]).is_err());
        assert!(FiniteSet::new([""]).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let a = FiniteSet::numbered("a", 3);
        let b = FiniteSet::numbered("b", 2);
        for f in enumerate_maps(&a, &b) {
            assert_eq!(compose(&FiniteMap::identity(&b), &f).unwrap(), f);
            assert_eq!(compose(&f, &FiniteMap::identity(&a)).unwrap(), f);
        }
    }

    #[test]
    fn constants_compose_to_constants() {
        let f = FiniteMap::constant(&set(&["0", "1"]), &set(&["a"]), 0).unwrap();
        let g = FiniteMap::constant(&set(&["a"]), &set(&["z"]), 0).unwrap();
        let h = compose(&g, &f).unwrap();
        assert_eq!(h.table(), &[0, 0]);
        assert_eq!(h.cod().labels(), vec!["z"]);
    }

    #[test]
    fn composition_boundary_error_names_both_sides() {
        let f = FiniteMap::identity(&set(&["a"]));
        let g = FiniteMap::identity(&set(&["b"]));
        match compose(&g, &f) {
            Err(Error::Composition { left, right }) => {
                assert!(left.contains('a'));
                assert!(right.contains('b'));
            }
            other => panic!("expected composition error, got {other:?}"),
        }
    }

    #[test]
    fn associativity_exhaustive_up_to_three() {
        let sets: Vec<FiniteSet> = (0..=3).map(|n| FiniteSet::numbered("e", n)).collect();
        for a in &sets[1..] {
            for b in &sets[1..] {
                for c in &sets[1..] {
                    let d = &sets[2];
                    for f in enumerate_maps(a, b) {
                        for g in enumerate_maps(b, c) {
                            for h in enumerate_maps(c, d) {
                                let left = compose(&compose(&h, &g).unwrap(), &f).unwrap();
                                let right = compose(&h, &compose(&g, &f).unwrap()).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn product_cardinality_and_empty_factor() {
        let p = product(&FiniteSet::numbered("a", 2), &FiniteSet::numbered("b", 3));
        assert_eq!(p.set.len(), 6);
        assert_eq!(p.set.label(4), "(a1,b1)");
        let q = product(&initial(), &FiniteSet::numbered("b", 3));
        assert!(q.set.is_empty());
    }

    #[test]
    fn product_universal_property_by_enumeration() {
        for na in 0..=2 {
            for nb in 0..=2 {
                for nc in 0..=2 {
                    let (a, b, c) = (
                        FiniteSet::numbered("a", na),
                        FiniteSet::numbered("b", nb),
                        FiniteSet::numbered("c", nc),
                    );
                    let p = product(&a, &b);
                    for f in enumerate_maps(&c, &a) {
                        for g in enumerate_maps(&c, &b) {
                            let mediators: Vec<FiniteMap> = enumerate_maps(&c, &p.set)
                                .filter(|m| {
                                    compose(&p.pr1(), m).unwrap() == f
                                        && compose(&p.pr2(), m).unwrap() == g
                                })
                                .collect();
                            assert_eq!(mediators.len(), 1);
                            assert_eq!(mediators[0], p.pair(&f, &g).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn equalizer_examples() {
        let two = set(&["0", "1"]);
        let id = FiniteMap::identity(&two);
        let (e, incl) = equalizer(&id, &id).unwrap();
        assert_eq!(e.len(), 2);
        assert!(incl.is_injective());

        let c0 = FiniteMap::constant(&two, &two, 0).unwrap();
        let (e, incl) = equalizer(&id, &c0).unwrap();
        assert_eq!(e.labels(), vec!["0"]);
        assert_eq!(incl.table(), &[0]);

        let one = set(&["p", "q"]);
        let to_p = FiniteMap::constant(&two, &one, 0).unwrap();
        let to_q = FiniteMap::constant(&two, &one, 1).unwrap();
        assert!(equalizer(&to_p, &to_q).unwrap().0.is_empty());

        assert!(matches!(equalizer(&id, &to_p), Err(Error::Boundary(_))));
    }

    #[test]
    fn equalizer_universal_property_by_enumeration() {
        let x = FiniteSet::numbered("x", 3);
        let y = FiniteSet::numbered("y", 2);
        let c = FiniteSet::numbered("c", 2);
        for f in enumerate_maps(&x, &y) {
            for g in enumerate_maps(&x, &y) {
                let (e, incl) = equalizer(&f, &g).unwrap();
                for h in enumerate_maps(&c, &x) {
                    let agrees = compose(&f, &h).unwrap() == compose(&g, &h).unwrap();
                    let factorizations = enumerate_maps(&c, &e)
                        .filter(|k| compose(&incl, k).unwrap() == h)
                        .count();
                    assert_eq!(factorizations, usize::from(agrees));
                }
            }
        }
    }

    #[test]
    fn coproduct_examples_and_copairing() {
        let s = coproduct(&set(&["a"]), &set(&["b"]));
        assert_eq!(s.set.len(), 2);
        assert_ne!(s.inl.table(), s.inr.table());
        assert_eq!(s.set.labels(), vec!["L:a", "R:b"]);

        let a = FiniteSet::numbered("a", 2);
        let unit = coproduct(&a, &initial());
        assert_eq!(unit.set.len(), a.len());
        assert!(unit.inl.is_injective() && unit.inl.is_surjective());

        for na in 0..=2 {
            for nb in 0..=2 {
                let (a, b) = (FiniteSet::numbered("a", na), FiniteSet::numbered("b", nb));
                let s = coproduct(&a, &b);
                let t = FiniteSet::numbered("t", 2);
                for f in enumerate_maps(&a, &t) {
                    for g in enumerate_maps(&b, &t) {
                        let n = enumerate_maps(&s.set, &t)
                            .filter(|m| {
                                compose(m, &s.inl).unwrap() == f && compose(m, &s.inr).unwrap() == g
                            })
                            .count();
                        assert_eq!(n, 1);
                    }
                }
            }
        }
    }

    #[test]
    fn sections_examples() {
        let a = set(&["a"]);
        assert_eq!(sections_of(&FiniteMap::identity(&a)), vec![FiniteMap::identity(&a)]);

        let dom = set(&["a0", "a1", "b0"]);
        let cod = set(&["a", "b"]);
        let f = FiniteMap::new(dom.clone(), cod.clone(), vec![0, 0, 1]).unwrap();
        let brute: Vec<FiniteMap> = enumerate_maps(&cod, &dom)
            .filter(|s| compose(&f, s).unwrap().is_identity())
            .collect();
        assert_eq!(brute.len(), 2);
        assert_eq!(sections_of(&f), brute);
        assert_eq!(least_section(&f).unwrap(), brute[0]);

        let g = FiniteMap::constant(&dom, &cod, 0).unwrap();
        assert!(sections_of(&g).is_empty());
        assert!(least_section(&g).is_none());
    }

    #[test]
    fn enumeration_counts_and_order() {
        assert_eq!(enumerate_maps(&initial(), &FiniteSet::numbered("b", 3)).count(), 1);
        assert_eq!(enumerate_maps(&initial(), &initial()).count(), 1);
        assert_eq!(enumerate_maps(&FiniteSet::numbered("a", 1), &initial()).count(), 0);
        let (a, b) = (FiniteSet::numbered("a", 2), FiniteSet::numbered("b", 3));
        let first: Vec<Vec<usize>> = enumerate_maps(&a, &b).map(|m| m.table().to_vec()).collect();
        let second: Vec<Vec<usize>> = enumerate_maps(&a, &b).map(|m| m.table().to_vec()).collect();
        assert_eq!(first.len(), 9);
        assert_eq!(first, second);
        assert!(first.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(count_maps(2, 3), Some(9));
    }

    #[test]
    fn search_matches_filtered_enumeration() {
        let (a, b) = (FiniteSet::numbered("a", 3), FiniteSet::numbered("b", 3));
        let accept = |t: &[usize]| t[0] + t[2] == 3 && t[1] != t[0] && t[1] > 0;
        let brute = enumerate_maps(&a, &b).find(|m| accept(m.table()));
        let searched = search_maps(&a, &b, |x, y| x != 1 || y > 0, accept);
        assert_eq!(brute, searched);
    }

    #[test]
    fn derived_labels_are_lazy_and_distinct() {
        let a = FiniteSet::numbered("a", 2);
        let p = product(&a, &a);
        let s = coproduct(&p.set, &a);
        let padded = FiniteSet::padded(&s.set, 2);
        let labels = padded.labels();
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), labels.len());
        assert_eq!(padded.index_of("L:(a1,a0)#1").unwrap(), 5);
        let rebuilt = FiniteSet::explicit(labels).unwrap();
        assert_eq!(rebuilt, padded);
    }
}
