//! Seeded sampling of small transitive groups, mixing primitive and
//! imprimitive families so that both verdicts of the primitivity test are
//! exercised.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PermGroup, Permutation};

fn random_perm(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(rng);
    Permutation::from_images(images).unwrap()
}

/// Random element of `S_a wr S_b` acting on `a·b` points with blocks
/// `{a·j, …, a·j + a − 1}`.
fn random_wreath_element(rng: &mut impl Rng, a: usize, b: usize) -> Permutation {
    let outer = random_perm(rng, b);
    let inner: Vec<Permutation> = (0..b).map(|_| random_perm(rng, a)).collect();
    let images = (0..a * b)
        .map(|x| {
            let (j, i) = (x / a, x % a);
            a * outer.apply(j) + inner[j].apply(i)
        })
        .collect();
    Permutation::from_images(images).unwrap()
}

fn conjugate(p: &Permutation, by: &Permutation) -> Permutation {
    by.after(p).after(&by.inverse())
}

fn candidate(rng: &mut impl Rng, n: usize) -> PermGroup {
    let gens: Vec<Permutation> = match rng.random_range(0..4) {
        0 => (0..rng.random_range(1..=3))
            .map(|_| random_perm(rng, n))
            .collect(),
        1 => {
            let divisors: Vec<usize> = (2..n).filter(|d| n % d == 0).collect();
            if divisors.is_empty() {
                vec![random_perm(rng, n)]
            } else {
                let a = *divisors.choose(rng).unwrap();
                let relabel = random_perm(rng, n);
                (0..rng.random_range(1..=3))
                    .map(|_| conjugate(&random_wreath_element(rng, a, n / a), &relabel))
                    .collect()
            }
        }
        2 => {
            let relabel = random_perm(rng, n);
            let mut gens = vec![conjugate(&super::named::cycle(n), &relabel)];
            if rng.random_bool(0.5) {
                gens.extend(
                    super::named::dihedral(n).generators()[1..]
                        .iter()
                        .map(|g| conjugate(g, &relabel)),
                );
            }
            gens
        }
        _ => {
            // affine maps x ↦ kx + 1 mod n; the multiplier fails to be a bijection when gcd(k, n) > 1
            let relabel = random_perm(rng, n);
            let c = conjugate(&super::named::cycle(n), &relabel);
            let k = rng.random_range(1..n.max(2));
            match Permutation::from_images((0..n).map(|x| (x * k) % n).collect()) {
                Ok(mult) => vec![c, conjugate(&mult, &relabel)],
                Err(_) => vec![c],
            }
        }
    };
    PermGroup::new(n, gens).unwrap()
}

/// `count` transitive groups of degree in `2..=max_degree`, reproducible from `seed`.
pub fn transitive_groups(seed: u64, count: usize, max_degree: usize) -> Vec<PermGroup> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.random_range(2..=max_degree.max(2));
        let g = candidate(&mut rng, n);
        if g.is_transitive() {
            out.push(g);
        }
    }
    out
}
