//! Seeded random generators for elements, forms and partitions.
//!
//! Every trial of a suite derives its own stream from `(seed, trial)` so
//! trials are independent of execution order.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{Algebra, Element, C64};
use crate::forms::PositiveForm;
use crate::subalgebras::AbelianSubalgebra;

/// The deterministic generator used throughout the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial stream: splitmix of the base seed and trial index.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut z = seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(trial.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    ChaCha8Rng::seed_from_u64(z ^ (z >> 31))
}

/// The algebra shapes exercised by the verification suites.
pub fn suite_shapes() -> Vec<Algebra> {
    vec![
        Algebra::full(2),
        Algebra::full(3),
        Algebra::new(vec![2, 3]).expect("shape"),
        Algebra::diagonal(4),
    ]
}

fn ginibre(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Element with independent complex-gaussian entries per block.
pub fn random_element(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    let blocks = algebra
        .block_dims()
        .iter()
        .map(|&n| ginibre(rng, n))
        .collect();
    Element::from_blocks(algebra.clone(), blocks).expect("sampled blocks")
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    random_element(rng, algebra).hermitize()
}

/// Full-rank positive element `g g* + margin·𝟏`.
pub fn random_invertible_positive(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    let g = random_element(rng, algebra);
    let gram = &g * &g.adjoint();
    let dim = algebra.dim() as f64;
    &gram.scale(1.0 / dim) + &algebra.identity().scale(0.1)
}

/// Positive element of prescribed total rank across all blocks.
pub fn random_positive_with_rank(rng: &mut ChaCha8Rng, algebra: &Algebra, rank: usize) -> Element {
    use rand::seq::SliceRandom;
    let dim = algebra.dim();
    let rank = rank.clamp(1, dim);
    // spread the rank over a random selection of coordinate slots
    let mut slots: Vec<(usize, usize)> = Vec::with_capacity(dim);
    for (b, &n) in algebra.block_dims().iter().enumerate() {
        for i in 0..n {
            slots.push((b, i));
        }
    }
    slots.shuffle(rng);
    let mut per_block = vec![0usize; algebra.num_blocks()];
    for &(b, _) in slots.iter().take(rank) {
        per_block[b] += 1;
    }
    let u = random_unitary(rng, algebra);
    let blocks = algebra
        .block_dims()
        .iter()
        .enumerate()
        .map(|(b, &n)| {
            let r = per_block[b];
            if r == 0 {
                return DMatrix::<C64>::zeros(n, n);
            }
            let g = DMatrix::from_fn(n, r, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            let gram = (&g * g.adjoint()).map(|z| z / n as f64);
            // rotate so the support is not axis-aligned
            u.block(b) * gram * u.block(b).adjoint()
        })
        .collect();
    Element::from_blocks(algebra.clone(), blocks).expect("sampled blocks")
}

/// Faithful form with unit functional norm.
pub fn random_faithful_state(rng: &mut ChaCha8Rng, algebra: &Algebra) -> PositiveForm {
    let d = random_invertible_positive(rng, algebra);
    let norm = d.trace().re;
    PositiveForm::new(d.scale(1.0 / norm)).expect("positive density")
}

/// Form of prescribed rank per block, normalized to unit functional norm.
pub fn random_state_with_rank(
    rng: &mut ChaCha8Rng,
    algebra: &Algebra,
    rank: usize,
) -> PositiveForm {
    let d = random_positive_with_rank(rng, algebra, rank.max(1));
    let norm = d.trace().re;
    PositiveForm::new(d.scale(1.0 / norm)).expect("positive density")
}

/// Haar-ish unitary from the QR of a Ginibre sample, blockwise.
pub fn random_unitary(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    let blocks = algebra
        .block_dims()
        .iter()
        .map(|&n| {
            let qr = ginibre(rng, n).qr();
            qr.q()
        })
        .collect();
    Element::from_blocks(algebra.clone(), blocks).expect("unitary blocks")
}

/// A contraction: random element rescaled into the unit ball.
pub fn random_contraction(rng: &mut ChaCha8Rng, algebra: &Algebra) -> Element {
    let g = random_element(rng, algebra);
    let norm = g.norm_op();
    if norm <= 1.0 {
        g
    } else {
        g.scale(0.95 / norm)
    }
}

/// A random partition of unity into `parts` mutually orthogonal projections,
/// built from a random unitary eigenbasis with coordinates dealt round-robin
/// across blocks.
pub fn random_partition(
    rng: &mut ChaCha8Rng,
    algebra: &Algebra,
    parts: usize,
) -> AbelianSubalgebra {
    let u = random_unitary(rng, algebra);
    let parts = parts.clamp(1, algebra.dim());
    let mut atoms: Vec<Element> = vec![algebra.zero(); parts];
    let mut which = Vec::new();
    let mut i = 0usize;
    for (b, &n) in algebra.block_dims().iter().enumerate() {
        for col in 0..n {
            which.push((b, col, i % parts));
            i += 1;
        }
    }
    for (b, col, part) in which {
        let v = u.block(b).column(col).into_owned();
        let proj = &v * v.adjoint();
        let mut blocks: Vec<DMatrix<C64>> = algebra
            .block_dims()
            .iter()
            .map(|&n| DMatrix::<C64>::zeros(n, n))
            .collect();
        blocks[b] = proj;
        let add = Element::from_blocks(algebra.clone(), blocks).expect("projection block");
        atoms[part] = &atoms[part] + &add;
    }
    AbelianSubalgebra::new(atoms).expect("orthogonal partition")
}

/// Coarsen a partition by merging adjacent atoms pairwise.
pub fn coarsen_partition(r: &AbelianSubalgebra) -> AbelianSubalgebra {
    let atoms = r.atoms();
    if atoms.len() <= 1 {
        return r.clone();
    }
    let mut merged = Vec::new();
    let mut it = atoms.chunks(2);
    for chunk in &mut it {
        let atom = if chunk.len() == 2 {
            &chunk[0] + &chunk[1]
        } else {
            chunk[0].clone()
        };
        merged.push(atom);
    }
    AbelianSubalgebra::new(merged).expect("coarsened partition")
}
