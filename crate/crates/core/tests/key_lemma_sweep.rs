//! Sweep over small commutative monoids: the canonical map into the pair
//! construction is injective exactly when every designated element is
//! cancellative. The expected verdict is recomputed here from the raw
//! operation table, with no help from the library's cancellativity rules.

use rand::prelude::IndexedRandom;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unring_core::semiring::{Context, Element, FiniteMonoid, OpKind};
use unring_core::universal::{injectivity_oracle, InvertedSet};

/// Raw table from a monoid, for table-level reasoning.
fn table_of(m: &FiniteMonoid) -> Vec<Vec<usize>> {
    let n = m.size();
    (0..n)
        .map(|i| (0..n).map(|j| m.apply(i, j)).collect())
        .collect()
}

fn table_cancellative(table: &[Vec<usize>], d: usize) -> bool {
    let n = table.len();
    (0..n).all(|x| (0..n).all(|y| x == y || table[d][x] != table[d][y]))
}

/// Closure of the generator indices under the table operation.
fn table_closure(table: &[Vec<usize>], gens: &[usize], neutral: Option<usize>) -> Vec<usize> {
    let mut seen: Vec<usize> = Vec::new();
    let mut work: Vec<usize> = Vec::new();
    let push = |seen: &mut Vec<usize>, work: &mut Vec<usize>, x: usize| {
        if !seen.contains(&x) {
            seen.push(x);
            work.push(x);
        }
    };
    if let Some(e) = neutral {
        push(&mut seen, &mut work, e);
    }
    for &g in gens {
        push(&mut seen, &mut work, g);
    }
    while let Some(x) = work.pop() {
        let snapshot = seen.clone();
        for y in snapshot {
            push(&mut seen, &mut work, table[x][y]);
        }
    }
    seen
}

fn base_tables() -> Vec<FiniteMonoid> {
    let mut pool = vec![FiniteMonoid::bool_or()];
    for k in 2..=5 {
        pool.push(FiniteMonoid::min_chain(k).unwrap());
        pool.push(FiniteMonoid::cap_add(k).unwrap());
        pool.push(FiniteMonoid::zmod_add(k).unwrap());
        pool.push(FiniteMonoid::zmod_mul(k).unwrap());
    }
    pool
}

fn random_instance(rng: &mut ChaCha8Rng, pool: &[FiniteMonoid]) -> (FiniteMonoid, Vec<usize>) {
    let base = pool.choose(rng).unwrap();
    let n = base.size();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let m = base.relabel(&perm).unwrap();
    let count = rng.random_range(1..=n);
    let mut indices: Vec<usize> = (0..n).collect();
    indices.shuffle(rng);
    indices.truncate(count);
    (m, indices)
}

#[test]
fn injectivity_oracle_matches_table_level_cancellativity_on_many_monoids() {
    let pool = base_tables();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut injective_count = 0usize;
    let mut identified_count = 0usize;
    for _ in 0..240 {
        let (m, gen_indices) = random_instance(&mut rng, &pool);
        let table = table_of(&m);
        let expected = gen_indices.iter().all(|&d| table_cancellative(&table, d));

        let ctx = Context::monoid(m.clone());
        let gens: Vec<Element> = gen_indices
            .iter()
            .map(|&i| Element::monoid_elem(&ctx, i).unwrap())
            .collect();
        let set = InvertedSet::generated(OpKind::Additive, gens).unwrap();
        let report = injectivity_oracle(&ctx, &set, OpKind::Additive, 12).unwrap();

        assert_eq!(
            report.injective, expected,
            "monoid {:?} with designated {:?}",
            table, gen_indices
        );
        assert_eq!(report.carrier_size, m.size());
        if expected {
            injective_count += 1;
            assert!(report.witness.is_none());
        } else {
            identified_count += 1;
            // The reported witness must be genuinely identified: some
            // closure member u sends both to the same element.
            let (x, y) = report.witness.expect("non-injective needs a witness");
            let xi = x.as_monoid_index().unwrap();
            let yi = y.as_monoid_index().unwrap();
            assert_ne!(xi, yi);
            let closure = table_closure(&table, &gen_indices, m.neutral());
            assert!(
                closure.iter().any(|&u| table[u][xi] == table[u][yi]),
                "witness ({xi}, {yi}) is not identified by any of {:?}",
                closure
            );
        }
    }
    // The sweep must exercise both outcomes to mean anything.
    assert!(injective_count >= 30, "only {injective_count} injective");
    assert!(identified_count >= 30, "only {identified_count} identified");
}

#[test]
fn designating_every_element_of_a_group_keeps_the_map_injective() {
    for n in 2..=5 {
        let m = FiniteMonoid::zmod_add(n).unwrap();
        let ctx = Context::monoid(m);
        let all: Vec<Element> = ctx.enumerate().unwrap();
        let set = InvertedSet::generated(OpKind::Additive, all).unwrap();
        let report = injectivity_oracle(&ctx, &set, OpKind::Additive, 12).unwrap();
        assert!(report.injective, "Z/{n} as additive group");
    }
}

#[test]
fn saturating_addition_always_identifies_once_saturation_is_designated() {
    // In {0..k-1} with a+b capped at k-1, the cap element absorbs, so
    // designating it forces x ~ y for every pair at or beyond the cap gap.
    for k in 3..=5 {
        let m = FiniteMonoid::cap_add(k).unwrap();
        let ctx = Context::monoid(m);
        let top = Element::monoid_elem(&ctx, k - 1).unwrap();
        let set = InvertedSet::generated(OpKind::Additive, vec![top]).unwrap();
        let report = injectivity_oracle(&ctx, &set, OpKind::Additive, 12).unwrap();
        assert!(!report.injective);
    }
}
