//! Full families of pseudo-relations over a composable pair
//! `Y --g--> X --f--> I`, built as `F = Σ_i Π_{u ∈ f⁻(i)} g⁻(u)` with one
//! code per choice of a `g`-preimage for every point of the fibre, and the
//! right adjoint `∀_f` derived from them.
//!
//! Only families indexed by single elements of `I` are represented; families
//! over a non-terminal index object reduce to those in every use made here.

use serde::Serialize;

use crate::bhk::Presubobject;
use crate::error::{Error, Result};
use crate::finset::{self, FiniteMap, FiniteSet, Product};
use crate::qcart::{ElementRelation, Span};

/// Size caps for constructions whose output is exponential in the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest carrier accepted for user-supplied objects.
    pub max_carrier: usize,
    /// Largest number of codes a full family may have.
    pub max_codes: usize,
    /// Largest number of candidate pairs over one index when enumerating
    /// pseudo-relations for a fullness check.
    pub max_candidate_pairs: usize,
    /// Largest number of pairs over a derived carrier.
    pub max_relation_size: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_carrier: 4,
            max_codes: 4096,
            max_candidate_pairs: 20,
            max_relation_size: 1 << 22,
        }
    }
}

impl Limits {
    pub fn check_carrier(&self, what: &str, set: &FiniteSet) -> Result<()> {
        if set.len() > self.max_carrier {
            return Err(Error::CapExceeded {
                what: what.to_string(),
                size: set.len() as u128,
                cap: self.max_carrier,
            });
        }
        Ok(())
    }
}

/// The fibre `f⁻(i) = Σ_x (f x = i)` as a subset of `X`.
#[derive(Clone, Debug)]
pub struct FiberObject {
    pub base_arrow: FiniteMap,
    pub index: usize,
    pub carrier: FiniteSet,
    pub proj: FiniteMap,
}

pub fn fiber_object(f: &FiniteMap, index: usize) -> Result<FiberObject> {
    f.cod().check(index)?;
    let (carrier, proj) = finset::inclusion(f.dom(), f.fiber(index));
    Ok(FiberObject {
        base_arrow: f.clone(),
        index,
        carrier,
        proj,
    })
}

/// One element of `F`: a domain index and, for every point of its fibre
/// (ascending), a chosen `g`-preimage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub index: usize,
    pub fiber: Vec<usize>,
    pub choice: Vec<usize>,
}

impl Code {
    /// The `y` chosen over `x`, if `x` lies in the fibre.
    pub fn chosen(&self, x: usize) -> Option<usize> {
        self.fiber.iter().position(|&u| u == x).map(|k| self.choice[k])
    }
}

/// A full family `φ: F → I`, `α: P → F × X × Y` over `f, g`, with
/// `ε: P → Y` the third component of `α`.
#[derive(Clone, Debug)]
pub struct FullFamily {
    f: FiniteMap,
    g: FiniteMap,
    codes: Vec<Code>,
    code_set: FiniteSet,
    phi: FiniteMap,
    row_set: FiniteSet,
    alpha: FiniteMap,
    eps: FiniteMap,
    triple: (Product, Product),
}

impl FullFamily {
    pub fn f(&self) -> &FiniteMap {
        &self.f
    }
    pub fn g(&self) -> &FiniteMap {
        &self.g
    }
    pub fn codes(&self) -> &[Code] {
        &self.codes
    }
    /// `F`.
    pub fn code_set(&self) -> &FiniteSet {
        &self.code_set
    }
    pub fn phi(&self) -> &FiniteMap {
        &self.phi
    }
    /// `P`.
    pub fn row_set(&self) -> &FiniteSet {
        &self.row_set
    }
    pub fn alpha(&self) -> &FiniteMap {
        &self.alpha
    }
    pub fn eps(&self) -> &FiniteMap {
        &self.eps
    }

    /// `(c, x, y)` of row `p`, decoded from `α`.
    pub fn row(&self, p: usize) -> (usize, usize, usize) {
        let (fx, fxy) = &self.triple;
        let t = self.alpha.apply(p);
        let (cx, y) = (t / fxy.right().len(), t % fxy.right().len());
        (cx / fx.right().len(), cx % fx.right().len(), y)
    }

    /// Rows of every code, as `(x, y)` pairs.
    pub fn rows_by_code(&self) -> Vec<Vec<(usize, usize)>> {
        let mut out = vec![Vec::new(); self.codes.len()];
        for p in self.row_set.elements() {
            let (c, x, y) = self.row(p);
            out[c].push((x, y));
        }
        out
    }

    /// Codes indexed by `i`.
    pub fn codes_over(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.codes.iter().enumerate().filter(move |(_, c)| c.index == i).map(|(k, _)| k)
    }
}

/// Number of codes `Σ_i Π_{x ∈ f⁻(i)} |g⁻(x)|`, saturating.
pub fn count_codes(f: &FiniteMap, g: &FiniteMap) -> u128 {
    let g_fibers = g.fibers();
    f.fibers()
        .iter()
        .map(|fib| {
            fib.iter()
                .map(|&x| g_fibers[x].len() as u128)
                .fold(1u128, |acc, n| acc.saturating_mul(n))
        })
        .fold(0u128, |acc, n| acc.saturating_add(n))
}

/// Builds the full family over `Y --g--> X --f--> I`.
pub fn build_full_family(f: &FiniteMap, g: &FiniteMap, limits: Limits) -> Result<FullFamily> {
    if g.cod() != f.dom() {
        return Err(Error::Boundary(format!(
            "full family needs g: Y → X and f: X → I, got g into {} and f from {}",
            g.cod().describe(),
            f.dom().describe()
        )));
    }
    let total = count_codes(f, g);
    if total > limits.max_codes as u128 {
        return Err(Error::CapExceeded {
            what: "full family codes".into(),
            size: total,
            cap: limits.max_codes,
        });
    }
    let (x, y) = (f.dom(), g.dom());
    let g_fibers = g.fibers();

    let mut codes = Vec::with_capacity(total as usize);
    for (i, fiber) in f.fibers().into_iter().enumerate() {
        let options: Vec<&Vec<usize>> = fiber.iter().map(|&u| &g_fibers[u]).collect();
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        // odometer over the product of the g-fibres, last point fastest
        let mut cursor = vec![0usize; fiber.len()];
        loop {
            let choice = cursor.iter().zip(&options).map(|(&k, o)| o[k]).collect();
            codes.push(Code {
                index: i,
                fiber: fiber.clone(),
                choice,
            });
            let mut pos = fiber.len();
            let done = loop {
                if pos == 0 {
                    break true;
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < options[pos].len() {
                    break false;
                }
                cursor[pos] = 0;
            };
            if done {
                break;
            }
        }
    }

    let code_labels: Vec<String> = codes
        .iter()
        .map(|c| {
            let assignment: Vec<String> = c
                .fiber
                .iter()
                .zip(&c.choice)
                .map(|(&u, &v)| format!("{}↦{}", x.label(u), y.label(v)))
                .collect();
            format!("({},{{{}}})", f.cod().label(c.index), assignment.join(" "))
        })
        .collect();
    let code_set = FiniteSet::explicit(code_labels)?;
    let phi = FiniteMap::new(code_set.clone(), f.cod().clone(), codes.iter().map(|c| c.index).collect())?;

    // P = Σ_c Σ_x (f x = φ c)
    let rows: Vec<(usize, usize)> = codes
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.fiber.iter().map(move |&u| (k, u)))
        .collect();
    let row_set = FiniteSet::explicit(
        rows.iter()
            .map(|&(k, u)| format!("({},{})", code_set.label(k), x.label(u)))
            .collect(),
    )?;
    let eps = FiniteMap::new(
        row_set.clone(),
        y.clone(),
        rows.iter().map(|&(k, u)| codes[k].chosen(u).expect("row point lies in its fibre")).collect(),
    )?;
    let fx = finset::product(&code_set, x);
    let fxy = finset::product(&fx.set, y);
    let alpha = FiniteMap::from_fn(&row_set, &fxy.set, |p| {
        let (k, u) = rows[p];
        fxy.pair_index(fx.pair_index(k, u), eps.apply(p))
    });

    Ok(FullFamily {
        f: f.clone(),
        g: g.clone(),
        codes,
        code_set,
        phi,
        row_set,
        alpha,
        eps,
        triple: (fx, fxy),
    })
}

/// Checks that the family consists of partial sections of `g` and has
/// domains indexed by `f`, quantifying over all elements.
pub fn check_family_properties(fam: &FullFamily) -> std::result::Result<(), String> {
    let by_code = fam.rows_by_code();
    for (c, rows) in by_code.iter().enumerate() {
        for &(x, y) in rows {
            if fam.g.apply(y) != x {
                return Err(format!("row ({c}, {x}, {y}) is not a partial section of g"));
            }
        }
        let i = fam.phi.apply(c);
        for x in fam.f.dom().elements() {
            let indexed = fam.f.apply(x) == i;
            let has_row = rows.iter().any(|&(u, _)| u == x);
            if indexed != has_row {
                return Err(format!("code {c}: domain not indexed by f at x = {x}"));
            }
        }
    }
    Ok(())
}

/// One checked pseudo-relation and the code covering it, if any.
#[derive(Clone, Debug, Serialize)]
pub struct FullnessEntry {
    pub index: usize,
    pub relation: Vec<(usize, usize)>,
    pub code: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FullnessReport {
    pub note: &'static str,
    pub relations_checked: usize,
    pub covered: usize,
    pub entries: Vec<FullnessEntry>,
}

impl FullnessReport {
    pub fn misses(&self) -> impl Iterator<Item = &FullnessEntry> {
        self.entries.iter().filter(|e| e.code.is_none())
    }

    pub fn passed(&self) -> bool {
        self.covered == self.relations_checked
    }
}

pub const IMAGE_LEVEL_NOTE: &str = "pseudo-relations are enumerated by their image: membership of a pair \
     depends only on the image of the span, so every span over f,g has the same verdict as its image";

/// A code over `i` all of whose rows lie in `rel`.
pub fn covering_code(fam: &FullFamily, by_code: &[Vec<(usize, usize)>], i: usize, rel: &ElementRelation) -> Option<usize> {
    fam.codes_over(i).find(|&c| by_code[c].iter().all(|&(x, y)| rel.holds(x, y)))
}

/// Is `rel` a pseudo-relation over `f, g` with domain index `i`?
pub fn is_pseudo_relation_over(fam: &FullFamily, i: usize, rel: &ElementRelation) -> bool {
    let (f, g) = (&fam.f, &fam.g);
    rel.pairs().all(|(x, y)| g.apply(y) == x)
        && f.dom().elements().all(|x| (f.apply(x) == i) == (0..rel.cols()).any(|y| rel.holds(x, y)))
}

/// For every index `i` and every image-level pseudo-relation over `f, g`
/// with domain index `i`, looks for a code `c` over `i` whose rows all lie
/// in the relation.
pub fn check_fullness(fam: &FullFamily, limits: Limits) -> Result<FullnessReport> {
    let (f, g) = (&fam.f, &fam.g);
    let (nx, ny) = (f.dom().len(), g.dom().len());
    let g_fibers = g.fibers();
    let by_code = fam.rows_by_code();
    let mut entries = Vec::new();
    for (i, fiber) in f.fibers().into_iter().enumerate() {
        let candidates: Vec<(usize, usize)> =
            fiber.iter().flat_map(|&x| g_fibers[x].iter().map(move |&y| (x, y))).collect();
        if candidates.len() > limits.max_candidate_pairs {
            return Err(Error::CapExceeded {
                what: "candidate pairs for a fullness check".into(),
                size: candidates.len() as u128,
                cap: limits.max_candidate_pairs,
            });
        }
        for mask in 0u64..(1u64 << candidates.len()) {
            let rel = ElementRelation::from_pairs(
                nx,
                ny,
                candidates.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p),
            );
            if !is_pseudo_relation_over(fam, i, &rel) {
                continue;
            }
            let code = covering_code(fam, &by_code, i, &rel);
            entries.push(FullnessEntry {
                index: i,
                relation: rel.pairs().collect(),
                code,
            });
        }
    }
    let covered = entries.iter().filter(|e| e.code.is_some()).count();
    Ok(FullnessReport {
        note: IMAGE_LEVEL_NOTE,
        relations_checked: entries.len(),
        covered,
        entries,
    })
}

/// Fullness verdict for an arbitrary span `R → X × Y` with domain index `i`.
/// `Ok(None)` means the span is over `f, g` but no code covers it.
pub fn covering_code_for_span(fam: &FullFamily, span: &Span, i: usize) -> Result<Option<usize>> {
    if span.left_foot() != fam.f.dom() || span.right_foot() != fam.g.dom() {
        return Err(Error::Boundary("span is not a relation between X and Y".into()));
    }
    let image = span.image();
    if !is_pseudo_relation_over(fam, i, &image) {
        return Err(Error::Construction(format!("span is not a pseudo-relation over f, g with index {i}")));
    }
    // Membership is decided apex element by apex element, not via the image.
    let by_code = fam.rows_by_code();
    Ok(fam.codes_over(i).find(|&c| {
        by_code[c].iter().all(|&(x, y)| {
            span.apex()
                .elements()
                .any(|a| span.left().apply(a) == x && span.right().apply(a) == y)
        })
    }))
}

/// `∀_f g`: the indexing arrow of a full family over `f` and the
/// representative of `g`.
pub fn forall_along(f: &FiniteMap, g: &Presubobject, limits: Limits) -> Result<Presubobject> {
    if g.target() != f.dom() {
        return Err(Error::Boundary(format!(
            "∀ along f: X → I needs a presubobject of {}, got one of {}",
            f.dom().describe(),
            g.target().describe()
        )));
    }
    let fam = build_full_family(f, g.rep(), limits)?;
    Ok(Presubobject::new(fam.phi))
}
