//! Orbit of the generic Grover state `α Σ_{x∈S}|x⟩ + β Σ_x |x⟩` and the
//! enumeration of reachable orbits over marked sets.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::classify::classify_exact;
use super::{Format, OrbitLabel};
use crate::error::{Error, Result};
use crate::exact::ratio;
use crate::grover::{MarkedSet, Regime};
use crate::tensor::{QuditSystem, RationalState};

/// The fixed `(α, β)` draws; a seeded random draw is added per marked set.
pub const FIXED_DRAWS: [((i64, i64), (i64, i64)); 3] = [((3, 5), (4, 5)), ((2, 7), (5, 7)), ((1, 3), (7, 9))];

/// `α·1_S + β·J` as an exact state.
pub fn generic_state(marked: &MarkedSet, alpha: &BigRational, beta: &BigRational) -> Result<RationalState> {
    let n = marked.system().len();
    let amps = (0..n)
        .map(|x| if marked.contains(x) { alpha.clone() + beta.clone() } else { beta.clone() })
        .collect();
    RationalState::new(marked.system().clone(), amps)
}

/// Classifies the family at each draw; all draws must land in one orbit.
pub fn classify_generic(marked: &MarkedSet, draws: &[(BigRational, BigRational)]) -> Result<OrbitLabel> {
    let mut seen: Vec<OrbitLabel> = Vec::new();
    for (alpha, beta) in draws {
        let label = classify_exact(&generic_state(marked, alpha, beta)?)?.orbit;
        if !seen.contains(&label) {
            seen.push(label);
        }
    }
    match seen.as_slice() {
        [one] => Ok(*one),
        [] => Err(Error::NotApplicable("no draws".into())),
        _ => Err(Error::AmbiguousGenericPoint(seen)),
    }
}

fn draw_seed(marked: &MarkedSet) -> u64 {
    // FNV-1a over the dims and the marked decimals.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let dims = marked.system().dims().iter().copied();
    for v in dims.chain([usize::MAX]).chain(marked.elements().iter().map(|e| e.decimal())) {
        h ^= v as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn family_draws(marked: &MarkedSet) -> Vec<(BigRational, BigRational)> {
    let mut draws: Vec<_> =
        FIXED_DRAWS.iter().map(|&((an, ad), (bn, bd))| (ratio(an, ad), ratio(bn, bd))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(draw_seed(marked));
    let mut pick = || ratio(rng.random_range(1..=89), rng.random_range(1..=97));
    let alpha = pick();
    let beta = pick();
    draws.push((alpha, beta));
    draws
}

/// Orbit of the generic member of the Grover family for `marked`.
pub fn classify_grover_family(marked: &MarkedSet) -> Result<OrbitLabel> {
    Format::from_dims(marked.system().dims())?;
    classify_generic(marked, &family_draws(marked))
}

/// Level permutations of every factor, as digit maps.
fn level_permutations(dims: &[usize]) -> Vec<Vec<Vec<usize>>> {
    dims.iter()
        .map(|&d| (0..d).permutations(d).collect::<Vec<_>>())
        .multi_cartesian_product()
        .collect()
}

/// One marked set of each size-`size` orbit under relabeling the levels of
/// each factor. Factor order is left alone since it changes the labels.
pub fn symmetry_representatives(system: &QuditSystem, size: usize) -> Result<Vec<MarkedSet>> {
    let n = system.len();
    if size == 0 || size > n {
        return Err(Error::InvalidMarkedSet(format!("size {size} for N = {n}")));
    }
    let group = level_permutations(system.dims());
    let digits: Vec<Vec<usize>> =
        (0..n).map(|x| system.decode(x).map(|b| b.digits().to_vec())).collect::<Result<_>>()?;
    let image = |g: &Vec<Vec<usize>>, x: usize| {
        let moved: Vec<usize> = digits[x].iter().zip(g).map(|(&j, p)| p[j]).collect();
        system.encode(&moved).expect("permuted digits stay in range").decimal()
    };
    let mut reps = Vec::new();
    for subset in (0..n).combinations(size) {
        let minimal = group.iter().all(|g| {
            let mut moved: Vec<usize> = subset.iter().map(|&x| image(g, x)).collect();
            moved.sort_unstable();
            moved >= subset
        });
        if minimal {
            reps.push(MarkedSet::from_decimals(system.clone(), &subset)?);
        }
    }
    Ok(reps)
}

/// Orbits of `classify_grover_family` over all marked sets of `size`, each
/// with its first witness.
pub fn reachable_orbits(format: Format, size: usize) -> Result<BTreeMap<u8, MarkedSet>> {
    let system = QuditSystem::new(format.dims().to_vec())?;
    let reps = symmetry_representatives(&system, size)?;
    let labels: Vec<OrbitLabel> = reps.par_iter().map(classify_grover_family).collect::<Result<_>>()?;
    let mut out = BTreeMap::new();
    for (label, set) in labels.into_iter().zip(reps) {
        out.entry(label.index).or_insert(set);
    }
    Ok(out)
}

/// Orbits of the state after one iteration in the critical regime, which
/// is the plain sum of the marked kets, over all marked sets of size `N/4`.
pub fn critical_orbits(format: Format) -> Result<BTreeMap<u8, MarkedSet>> {
    let system = QuditSystem::new(format.dims().to_vec())?;
    let n = system.len();
    if n % 4 != 0 {
        return Err(Error::NotApplicable(format!("{format} has no critical regime")));
    }
    let reps = symmetry_representatives(&system, n / 4)?;
    let mut out = BTreeMap::new();
    for set in reps {
        debug_assert_eq!(set.regime(), Regime::Critical);
        let amps = (0..n).map(|x| if set.contains(x) { BigRational::one() } else { BigRational::zero() }).collect();
        let label = classify_exact(&RationalState::new(system.clone(), amps)?)?.orbit;
        out.entry(label.index).or_insert(set);
    }
    Ok(out)
}
