use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scm::{EndoVar, ExoVar, Scm};
use crate::set::FiniteSet;

/// A seeded random acyclic SCM. Each `V_i` draws its parents from
/// `V_1..V_{i-1}` (each with probability 1/2), so acyclicity holds by
/// construction. Identical seeds give identical models.
pub fn random_scm(seed: u64, n_endo: usize, n_exo_values: usize, domain_size: usize) -> Result<Scm> {
    if !(1..=4).contains(&n_endo) || !(1..=2).contains(&n_exo_values) || !(1..=2).contains(&domain_size)
    {
        return Err(Error::InvalidScm(format!(
            "random_scm bounds: 1 ≤ n_endo ≤ 4, 1 ≤ n_exo_values ≤ 2, 1 ≤ domain_size ≤ 2 \
             (got {n_endo}, {n_exo_values}, {domain_size})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = |prefix: &str, n: usize| {
        FiniteSet::new(prefix, (0..n).map(|k| k.to_string()))
            .expect("non-empty range")
            .shared()
    };
    let mut exogenous = Vec::with_capacity(n_endo);
    let mut endogenous: Vec<EndoVar> = Vec::with_capacity(n_endo);
    for i in 0..n_endo {
        let u_id = format!("U{}", i + 1);
        exogenous.push(ExoVar {
            values: values(&u_id, n_exo_values),
            id: u_id,
        });
        let parents: Vec<usize> = (0..i).filter(|_| rng.gen_bool(0.5)).collect();
        let rows: usize = parents.iter().map(|_| domain_size).product::<usize>() * n_exo_values;
        let table = (0..rows).map(|_| rng.gen_range(0..domain_size)).collect();
        let v_id = format!("V{}", i + 1);
        endogenous.push(EndoVar {
            values: values(&v_id, domain_size),
            id: v_id,
            parents,
            exogenous: i,
            table,
        });
    }
    Scm::from_parts(exogenous, endogenous)
}
