//! Instance suites shared by the audits, the CLI and the acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::excompletion::{ex_arrow_validate, ExArrow, ExCompletion, ExObj};
use crate::finset::{enumerate_maps, FiniteMap, FiniteSet};

/// Block sizes of every partition of `n` up to isomorphism, blocks
/// descending.
pub fn partition_shapes(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for b in (1..=rest.min(max)).rev() {
            acc.push(b);
            go(rest - b, b, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every partition of `n` labelled elements, as restricted growth strings
/// (block of each element, blocks numbered by first occurrence).
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(acc: &mut Vec<usize>, blocks: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if acc.len() == n {
            out.push(acc.clone());
            return;
        }
        for b in 0..=blocks {
            acc.push(b);
            go(acc, blocks.max(b + 1), n, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 0, n, &mut out);
    out
}

/// Block index of every element for consecutive blocks of the given sizes.
pub fn blocks_of(shape: &[usize]) -> Vec<usize> {
    shape.iter().enumerate().flat_map(|(b, &k)| std::iter::repeat_n(b, k)).collect()
}

/// The object on `prefix0, prefix1, ...` whose classes are the blocks.
pub fn partition_object(ex: &ExCompletion, prefix: &str, blocks: &[usize]) -> Result<ExObj> {
    let carrier = FiniteSet::numbered(prefix, blocks.len());
    ex.object_from_predicate(&carrier, |a, b| blocks[a] == blocks[b])
}

/// One object per partition shape of every carrier size up to `max`.
pub fn small_objects(ex: &ExCompletion, prefix: &str, max: usize) -> Result<Vec<ExObj>> {
    let mut out = Vec::new();
    for n in 0..=max {
        for shape in partition_shapes(n) {
            out.push(partition_object(ex, prefix, &blocks_of(&shape))?);
        }
    }
    Ok(out)
}

/// Every representative map `a → b` compatible with the relations.
pub fn compatible_arrows(a: &ExObj, b: &ExObj) -> Vec<ExArrow> {
    enumerate_maps(a.carrier(), b.carrier())
        .filter_map(|m| ex_arrow_validate(m, a, b).ok())
        .collect()
}

/// A composable pair `Y --g--> X --f--> I`.
#[derive(Clone, Debug)]
pub struct DepProdInstance {
    pub f: ExArrow,
    pub g: ExArrow,
}

/// All composable pairs over the objects of [`small_objects`] with
/// carriers up to `max`, every representative included.
pub fn exhaustive_depprod_suite(ex: &ExCompletion, max: usize) -> Result<Vec<DepProdInstance>> {
    let is = small_objects(ex, "i", max)?;
    let xs = small_objects(ex, "x", max)?;
    let ys = small_objects(ex, "y", max)?;
    let mut out = Vec::new();
    for i in &is {
        for x in &xs {
            let fs = compatible_arrows(x, i);
            for y in &ys {
                let gs = compatible_arrows(y, x);
                for f in &fs {
                    for g in &gs {
                        out.push(DepProdInstance {
                            f: f.clone(),
                            g: g.clone(),
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A random object with a carrier of `1..=max` elements and a random
/// partition.
pub fn random_object(ex: &ExCompletion, rng: &mut ChaCha8Rng, prefix: &str, max: usize) -> Result<ExObj> {
    let n = rng.gen_range(1..=max);
    let blocks: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    partition_object(ex, prefix, &blocks)
}

/// A random compatible arrow: each class goes to a random element of the
/// target and each member to a random element of that element's class.
pub fn random_arrow(rng: &mut ChaCha8Rng, a: &ExObj, b: &ExObj) -> Result<ExArrow> {
    let mut class_target = Vec::with_capacity(a.class_count());
    for _ in 0..a.class_count() {
        class_target.push(rng.gen_range(0..b.carrier().len()));
    }
    let table = a
        .carrier()
        .elements()
        .map(|x| {
            let target = class_target[a.class_of(x)];
            *b.classes()[b.class_of(target)].choose(rng).expect("classes are nonempty")
        })
        .collect();
    ex_arrow_validate(FiniteMap::new(a.carrier().clone(), b.carrier().clone(), table)?, a, b)
}

/// `count` seeded composable pairs with carriers of at most `max` elements.
pub fn seeded_depprod_instances(ex: &ExCompletion, seed: u64, count: usize, max: usize) -> Result<Vec<DepProdInstance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let i = random_object(ex, &mut rng, "i", max)?;
        let x = random_object(ex, &mut rng, "x", max)?;
        let y = random_object(ex, &mut rng, "y", max)?;
        let f = random_arrow(&mut rng, &x, &i)?;
        let g = random_arrow(&mut rng, &y, &x)?;
        out.push(DepProdInstance { f, g });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_shapes_are_counted_by_the_partition_numbers() {
        let counts: Vec<usize> = (0..7).map(|n| partition_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn set_partitions_are_counted_by_the_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn compatible_arrows_match_class_maps() {
        let ex = ExCompletion::default();
        let a = partition_object(&ex, "a", &[0, 0, 1]).unwrap();
        let b = partition_object(&ex, "b", &[0, 1, 1]).unwrap();
        // {a0, a1} into {b0} (1 way) or into {b1, b2} (4 ways); a2 anywhere
        assert_eq!(compatible_arrows(&a, &b).len(), (1 + 4) * 3);
    }

    #[test]
    fn seeded_instances_are_reproducible() {
        let ex = ExCompletion::default();
        let a = seeded_depprod_instances(&ex, 7, 5, 4).unwrap();
        let b = seeded_depprod_instances(&ex, 7, 5, 4).unwrap();
        for (p, q) in a.iter().zip(&b) {
            assert_eq!(p.f.rep(), q.f.rep());
            assert_eq!(p.g.rep(), q.g.rep());
        }
    }
}
