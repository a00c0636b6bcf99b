//! Genome codec, mutation, and the generational microbial GA.
//!
//! Each generation draws one shared set of light positions, pairs every
//! member into exactly one tournament, scores both members on all lights,
//! and replaces the worse half of each pair with a mutated copy of the
//! better (lower combined score wins; scores are time-weighted distance
//! costs). All randomness comes from streams derived from (seed, role,
//! generation, slot), so serial and parallel evaluation agree bit for bit.

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;

use crate::ctrnn::{NetworkParams, BIAS_BOUND, TAU_MAX, TAU_MIN, WEIGHT_BOUND};
use crate::rng::{derive, STREAM_INIT, STREAM_LIGHTS, STREAM_MUTATE, STREAM_PAIRING};
use crate::scalar::{lit, Scalar};
use crate::trial::{run_trial, TrialConfig};
use crate::world::LightPosition;
use crate::{Result, SimError};

/// Flat normalized parameter vector: per neuron, a time-constant gene, a
/// bias gene, and one incoming-weight gene per source neuron.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkGenome<T> {
    /// All genes in [0, 1], length `n * (n + 2)`.
    pub genes: Vec<T>,
    pub id: u64,
    /// Parent id for mutated copies.
    pub lineage: Option<u64>,
}

pub const GENES_PER_NEURON_EXTRA: usize = 2;

/// Gene count for an `n`-neuron network.
pub fn genome_len(n: usize) -> usize {
    n * (n + GENES_PER_NEURON_EXTRA)
}

impl<T: Scalar> NetworkGenome<T> {
    /// Infer the neuron count from the gene count.
    pub fn neuron_count(&self) -> Result<usize> {
        let len = self.genes.len();
        // len = n^2 + 2n  =>  n = sqrt(len + 1) - 1
        let n = ((len + 1) as f64).sqrt() as usize;
        for candidate in n.saturating_sub(1)..=n + 1 {
            if candidate >= 1 && genome_len(candidate) == len {
                return Ok(candidate);
            }
        }
        Err(SimError::GenomeLength { expected: 0, actual: len })
    }
}

/// Decode a genome into network parameters: linear maps onto the parameter
/// ranges, then incoming weights of the input neurons forced to zero.
pub fn decode<T: Scalar>(genome: &NetworkGenome<T>, n: usize) -> Result<NetworkParams<T>> {
    if genome.genes.len() != genome_len(n) {
        return Err(SimError::GenomeLength { expected: genome_len(n), actual: genome.genes.len() });
    }
    let tau_span = lit::<T>(TAU_MAX - TAU_MIN);
    let tau_min = lit::<T>(TAU_MIN);
    let bias_lo = lit::<T>(-BIAS_BOUND);
    let bias_span = lit::<T>(2.0 * BIAS_BOUND);
    let weight_lo = lit::<T>(-WEIGHT_BOUND);
    let weight_span = lit::<T>(2.0 * WEIGHT_BOUND);

    let mut params = NetworkParams::zeroed(n);
    let stride = n + GENES_PER_NEURON_EXTRA;
    for i in 0..n {
        let block = &genome.genes[i * stride..(i + 1) * stride];
        params.tau[i] = tau_min + block[0] * tau_span;
        params.beta[i] = bias_lo + block[1] * bias_span;
        let incoming = params.weights.incoming_mut(i);
        for (j, w) in incoming.iter_mut().enumerate() {
            *w = weight_lo + block[2 + j] * weight_span;
        }
    }
    for &i in &params.input_ids.clone() {
        for w in params.weights.incoming_mut(i) {
            *w = T::zero();
        }
    }
    Ok(params)
}

/// Fold a gene back into [0, 1] by reflecting at the bounds.
fn reflect_unit<T: Scalar>(mut g: T) -> T {
    loop {
        if g > T::one() {
            g = lit::<T>(2.0) - g;
        } else if g < T::zero() {
            g = -g;
        } else {
            return g;
        }
    }
}

/// Fresh genome with uniform time-constant and weight genes. With
/// `centre_crossing`, bias genes are set so the decoded bias equals half
/// the negated (decoded, input-masked) incoming weight sum, clamped.
pub fn random_genome<T: Scalar, R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    centre_crossing: bool,
) -> NetworkGenome<T> {
    let mut genes: Vec<T> = (0..genome_len(n)).map(|_| T::unit_uniform(rng)).collect();
    if centre_crossing {
        let genome = NetworkGenome { genes: genes.clone(), id: 0, lineage: None };
        let params = decode(&genome, n).expect("freshly built genome decodes");
        let biases = crate::ctrnn::centre_crossing_biases(&params.weights);
        let stride = n + GENES_PER_NEURON_EXTRA;
        for (i, beta) in biases.iter().enumerate() {
            // invert the bias map: gene = (beta + bound) / (2 * bound)
            genes[i * stride + 1] =
                (*beta + lit::<T>(BIAS_BOUND)) / lit::<T>(2.0 * BIAS_BOUND);
        }
    }
    NetworkGenome { genes, id: 0, lineage: None }
}

/// Mutated copy: each gene independently perturbed with probability `rate`
/// by Gaussian noise of std `sigma` (normalized units), reflected at the
/// bounds.
pub fn mutate<T: Scalar, R: Rng + ?Sized>(
    genome: &NetworkGenome<T>,
    rng: &mut R,
    sigma: T,
    rate: T,
    new_id: u64,
) -> NetworkGenome<T> {
    let genes = genome
        .genes
        .iter()
        .map(|&g| {
            if T::unit_uniform(rng) < rate {
                reflect_unit(g + sigma * T::standard_normal(rng))
            } else {
                g
            }
        })
        .collect();
    NetworkGenome { genes, id: new_id, lineage: Some(genome.id) }
}

/// `count` lights evenly spaced on the circle, starting at angle `phi`.
pub fn lights_on_circle<T: Scalar>(phi: T, radius: T, count: usize) -> Vec<LightPosition<T>> {
    let tau = lit::<T>(std::f64::consts::TAU);
    (0..count)
        .map(|i| {
            let a = phi + tau * T::from(i).unwrap() / T::from(count).unwrap();
            LightPosition::new(radius * a.cos(), radius * a.sin())
        })
        .collect()
}

/// Four lights forming a square on the circle, first corner at a uniformly
/// random angle.
pub fn light_square<T: Scalar, R: Rng + ?Sized>(rng: &mut R, radius: T) -> Vec<LightPosition<T>> {
    let phi = T::unit_uniform(rng) * lit::<T>(std::f64::consts::TAU);
    lights_on_circle(phi, radius, 4)
}

/// GA hyperparameters plus the trial template every evaluation derives from.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionConfig<T> {
    pub population_size: usize,
    pub generations: u64,
    /// Mutation noise std in normalized gene units.
    pub mutation_sigma: T,
    /// Per-gene mutation probability.
    pub mutation_rate: T,
    pub trial: TrialConfig<T>,
    pub lights_per_generation: usize,
    pub light_radius: T,
    pub seed: u64,
    /// Initialise random populations with centre-crossing biases.
    pub centre_crossing_init: bool,
}

impl<T: Scalar> Default for EvolutionConfig<T> {
    fn default() -> Self {
        Self {
            population_size: 50,
            generations: 2000,
            mutation_sigma: lit(0.05),
            mutation_rate: lit(0.1),
            trial: TrialConfig::default(),
            lights_per_generation: 4,
            light_radius: lit(3.0),
            seed: 1,
            centre_crossing_init: true,
        }
    }
}

impl<T: Scalar> EvolutionConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(SimError::InvalidConfig("population size must be even and >= 2".into()));
        }
        if !(self.mutation_sigma.is_finite() && self.mutation_sigma > T::zero()) {
            return Err(SimError::InvalidConfig("mutation sigma must be > 0".into()));
        }
        if !(self.mutation_rate.is_finite()
            && self.mutation_rate >= T::zero()
            && self.mutation_rate <= T::one())
        {
            return Err(SimError::InvalidConfig("mutation rate must be in [0, 1]".into()));
        }
        if self.lights_per_generation < 1 {
            return Err(SimError::InvalidConfig("lights per generation must be >= 1".into()));
        }
        if !(self.light_radius.is_finite() && self.light_radius > T::zero()) {
            return Err(SimError::InvalidConfig("light radius must be > 0".into()));
        }
        self.trial.validate()
    }
}

/// The evolving population plus the bookkeeping that keeps runs replayable.
#[derive(Debug, Clone, PartialEq)]
pub struct Population<T> {
    pub members: Vec<NetworkGenome<T>>,
    pub generation: u64,
    /// Master seed the population was evolved with.
    pub rng_seed: u64,
    /// Next id handed to a mutated copy.
    pub next_id: u64,
}

impl<T: Scalar> Population<T> {
    /// Fresh random population per the config.
    pub fn random(cfg: &EvolutionConfig<T>) -> Result<Self> {
        cfg.validate()?;
        let n = cfg.trial.network.neurons;
        let members = (0..cfg.population_size)
            .map(|i| {
                let mut rng = derive(cfg.seed, &[STREAM_INIT, i as u64]);
                let mut genome = random_genome(&mut rng, n, cfg.centre_crossing_init);
                genome.id = i as u64;
                genome
            })
            .collect();
        Ok(Self {
            members,
            generation: 0,
            rng_seed: cfg.seed,
            next_id: cfg.population_size as u64,
        })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }
}

/// What one generation did, for history files and audits.
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats<T> {
    /// Index of the generation that was evaluated (the pre-step counter).
    pub generation: u64,
    /// Best (lowest) combined score in the evaluated population.
    pub best: T,
    /// Mean combined score in the evaluated population.
    pub mean: T,
    /// Angle of the first light of this generation's square.
    pub square_angle: T,
    /// Tournament pairs as (winner-eligible) member ids, in pairing order.
    pub pairs: Vec<(u64, u64)>,
}

/// Combined score of one genome over a shared light set: the mean of the
/// per-light trial costs. A diverging trial makes the score infinite, so
/// pathological genomes always lose their tournament.
pub fn combined_score<T: Scalar>(
    genome: &NetworkGenome<T>,
    lights: &[LightPosition<T>],
    template: &TrialConfig<T>,
) -> Result<T> {
    let mut total = T::zero();
    for light in lights {
        let mut cfg = template.clone();
        cfg.light = Some(*light);
        cfg.log = false;
        match run_trial(genome, &cfg) {
            Ok(result) => {
                let fitness = result.fitness.expect("light set for evaluation");
                total = total + fitness.value;
            }
            Err(SimError::Divergence { .. }) => return Ok(T::infinity()),
            Err(other) => return Err(other),
        }
    }
    Ok(total / T::from(lights.len()).unwrap())
}

/// Run one generation: shared light square, a perfect matching of members
/// into tournaments, and loser replacement by mutated winner copies.
pub fn run_generation<T: Scalar>(
    pop: &Population<T>,
    cfg: &EvolutionConfig<T>,
) -> Result<(Population<T>, GenerationStats<T>)> {
    cfg.validate()?;
    if pop.size() != cfg.population_size {
        return Err(SimError::InvalidConfig(format!(
            "population size {} does not match configured {}",
            pop.size(),
            cfg.population_size
        )));
    }
    let g = pop.generation;

    let mut lights_rng = derive(cfg.seed, &[STREAM_LIGHTS, g]);
    let phi = T::unit_uniform(&mut lights_rng) * lit::<T>(std::f64::consts::TAU);
    let lights = lights_on_circle(phi, cfg.light_radius, cfg.lights_per_generation);

    let scores: Vec<T> = pop
        .members
        .par_iter()
        .map(|member| combined_score(member, &lights, &cfg.trial))
        .collect::<Result<_>>()?;

    let mut order: Vec<usize> = (0..pop.size()).collect();
    let mut pairing_rng = derive(cfg.seed, &[STREAM_PAIRING, g]);
    order.shuffle(&mut pairing_rng);

    let mut members = pop.members.clone();
    let mut next_id = pop.next_id;
    let mut pairs = Vec::with_capacity(pop.size() / 2);
    for pair in order.chunks_exact(2) {
        let (first, second) = (pair[0], pair[1]);
        pairs.push((pop.members[first].id, pop.members[second].id));
        // ties keep the first member of the pair
        let (winner, loser) = if scores[first] <= scores[second] {
            (first, second)
        } else {
            (second, first)
        };
        let mut rng = derive(cfg.seed, &[STREAM_MUTATE, g, loser as u64]);
        members[loser] = mutate(
            &pop.members[winner],
            &mut rng,
            cfg.mutation_sigma,
            cfg.mutation_rate,
            next_id,
        );
        next_id += 1;
    }

    let best = scores.iter().cloned().fold(T::infinity(), T::min);
    let mean = scores.iter().fold(T::zero(), |acc, &s| acc + s) / T::from(pop.size()).unwrap();
    let stats = GenerationStats { generation: g, best, mean, square_angle: phi, pairs };
    let next = Population {
        members,
        generation: g + 1,
        rng_seed: cfg.seed,
        next_id,
    };
    Ok((next, stats))
}

/// Run the configured number of generations, reporting each generation's
/// stats through `progress`.
pub fn evolve_with_progress<T: Scalar>(
    cfg: &EvolutionConfig<T>,
    initial: Option<Population<T>>,
    mut progress: impl FnMut(&GenerationStats<T>),
) -> Result<(Population<T>, Vec<GenerationStats<T>>)> {
    cfg.validate()?;
    let mut pop = match initial {
        Some(p) => {
            if p.size() != cfg.population_size {
                return Err(SimError::InvalidConfig(format!(
                    "initial population size {} does not match configured {}",
                    p.size(),
                    cfg.population_size
                )));
            }
            let expected = genome_len(cfg.trial.network.neurons);
            if let Some(bad) = p.members.iter().find(|m| m.genes.len() != expected) {
                return Err(SimError::GenomeLength { expected, actual: bad.genes.len() });
            }
            Population { rng_seed: cfg.seed, ..p }
        }
        None => Population::random(cfg)?,
    };
    let mut history = Vec::with_capacity(cfg.generations as usize);
    for _ in 0..cfg.generations {
        let (next, stats) = run_generation(&pop, cfg)?;
        progress(&stats);
        history.push(stats);
        pop = next;
    }
    Ok((pop, history))
}

/// Run the configured number of generations from `initial` (or a fresh
/// random population).
pub fn evolve<T: Scalar>(
    cfg: &EvolutionConfig<T>,
    initial: Option<Population<T>>,
) -> Result<(Population<T>, Vec<GenerationStats<T>>)> {
    evolve_with_progress(cfg, initial, |_| {})
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::collections::BTreeSet;

    fn tiny_cfg() -> EvolutionConfig<f64> {
        let mut cfg = EvolutionConfig::<f64>::default();
        cfg.population_size = 6;
        cfg.generations = 3;
        cfg.trial.duration = 0.5;
        cfg.trial.network.neurons = 5;
        cfg.seed = 11;
        cfg
    }

    #[test]
    fn decode_midpoint_genes() {
        let n = 5;
        let genome = NetworkGenome { genes: vec![0.5; genome_len(n)], id: 0, lineage: None };
        let params = decode(&genome, n).unwrap();
        for i in 0..n {
            assert_relative_eq!(params.tau[i], 1.525, max_relative = 1e-15);
            assert_eq!(params.beta[i], 0.0);
            for j in 0..n {
                assert_eq!(params.weights.get(j, i), 0.0);
            }
        }
        params.validate().unwrap();
    }

    #[test]
    fn decode_extremes_hit_bounds() {
        let n = 4;
        let mut genes = vec![0.5; genome_len(n)];
        let stride = n + GENES_PER_NEURON_EXTRA;
        genes[3 * stride + 2] = 1.0; // weight 0 -> 3
        genes[3 * stride + 3] = 0.0; // weight 1 -> 3
        let genome = NetworkGenome { genes, id: 0, lineage: None };
        let params = decode(&genome, n).unwrap();
        assert_eq!(params.weights.get(0, 3), WEIGHT_BOUND);
        assert_eq!(params.weights.get(1, 3), -WEIGHT_BOUND);
    }

    #[test]
    fn input_neuron_weights_are_masked() {
        let n = 5;
        let genome = NetworkGenome { genes: vec![0.9; genome_len(n)], id: 0, lineage: None };
        let params = decode(&genome, n).unwrap();
        for &i in &params.input_ids {
            for j in 0..n {
                assert_eq!(params.weights.get(j, i), 0.0);
            }
        }
        // non-input rows keep the decoded value
        assert_relative_eq!(params.weights.get(0, 3), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn wrong_length_is_rejected() {
        let genome = NetworkGenome { genes: vec![0.5; 17], id: 0, lineage: None };
        assert!(decode(&genome, 5).is_err());
        assert!(genome.neuron_count().is_err());
        let good = NetworkGenome { genes: vec![0.5; genome_len(10)], id: 0, lineage: None };
        assert_eq!(good.neuron_count().unwrap(), 10);
    }

    #[test]
    fn same_seed_same_genome() {
        let mut a = derive(42, &[STREAM_INIT, 0]);
        let mut b = derive(42, &[STREAM_INIT, 0]);
        let ga: NetworkGenome<f64> = random_genome(&mut a, 10, true);
        let gb: NetworkGenome<f64> = random_genome(&mut b, 10, true);
        assert_eq!(ga, gb);
    }

    #[test]
    fn centre_crossing_matches_definition() {
        let mut rng = derive(3, &[STREAM_INIT, 1]);
        let genome: NetworkGenome<f64> = random_genome(&mut rng, 10, true);
        let params = decode(&genome, 10).unwrap();
        let expected = crate::ctrnn::centre_crossing_biases(&params.weights);
        for (b, e) in params.beta.iter().zip(&expected) {
            assert_relative_eq!(b, e, epsilon = 1e-12);
        }
        // input neurons have no incoming weights, so their biases are zero
        for &i in &params.input_ids {
            assert_relative_eq!(params.beta[i], 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn gene_reflection() {
        assert_relative_eq!(reflect_unit(1.04), 0.96, max_relative = 1e-15);
        assert_relative_eq!(reflect_unit(-0.03), 0.03, max_relative = 1e-15);
        assert_eq!(reflect_unit(0.7), 0.7);
        assert_relative_eq!(reflect_unit(2.3), 0.3, max_relative = 1e-12);
    }

    #[test]
    fn zero_rate_mutation_is_identity() {
        let mut rng = derive(4, &[STREAM_INIT, 2]);
        let genome: NetworkGenome<f64> = random_genome(&mut rng, 10, false);
        let copy = mutate(&genome, &mut rng, 0.05, 0.0, 77);
        assert_eq!(copy.genes, genome.genes);
        assert_eq!(copy.id, 77);
        assert_eq!(copy.lineage, Some(genome.id));
    }

    #[test]
    fn mutation_magnitude_matches_folded_normal() {
        // with rate 1, mean |change| approaches sigma * sqrt(2/pi)
        let sigma = 0.05;
        let genome = NetworkGenome { genes: vec![0.5; 20_000], id: 0, lineage: None };
        let mut rng = derive(5, &[STREAM_MUTATE, 0, 0]);
        let mutated = mutate(&genome, &mut rng, sigma, 1.0, 1);
        let mean_abs: f64 = genome
            .genes
            .iter()
            .zip(&mutated.genes)
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
            / genome.genes.len() as f64;
        let expected = sigma * (2.0 / std::f64::consts::PI).sqrt();
        assert!(
            (mean_abs - expected).abs() / expected < 0.05,
            "mean |change| {mean_abs} vs folded-normal {expected}"
        );
    }

    #[test]
    fn decoded_weights_are_uniform_ks() {
        // Kolmogorov-Smirnov against U(-5, 5) at alpha = 0.01
        let n = 10;
        let mut samples = Vec::with_capacity(100_000);
        let mut idx = 0u64;
        while samples.len() < 100_000 {
            let mut rng = derive(6, &[STREAM_INIT, idx]);
            let genome: NetworkGenome<f64> = random_genome(&mut rng, n, false);
            let params = decode(&genome, n).unwrap();
            for to in 2..n {
                for from in 0..n {
                    samples.push(params.weights.get(from, to));
                }
            }
            idx += 1;
        }
        samples.truncate(100_000);
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let n_f = samples.len() as f64;
        let mut d_stat: f64 = 0.0;
        for (i, &x) in samples.iter().enumerate() {
            let cdf = (x + 5.0) / 10.0;
            d_stat = d_stat.max((cdf - i as f64 / n_f).abs());
            d_stat = d_stat.max(((i + 1) as f64 / n_f - cdf).abs());
        }
        let critical = 1.6276 / n_f.sqrt();
        assert!(d_stat < critical, "KS statistic {d_stat} over critical {critical}");
    }

    #[test]
    fn square_lights_examples() {
        let lights = lights_on_circle(0.0, 3.0, 4);
        let expected = [(3.0, 0.0), (0.0, 3.0), (-3.0, 0.0), (0.0, -3.0)];
        for (l, (ex, ey)) in lights.iter().zip(expected) {
            assert_relative_eq!(l.x, ex, epsilon = 1e-12);
            assert_relative_eq!(l.y, ey, epsilon = 1e-12);
        }
    }

    #[test]
    fn square_geometry_holds_for_random_angles() {
        let mut rng = derive(7, &[STREAM_LIGHTS, 0]);
        for _ in 0..20 {
            let lights = light_square(&mut rng, 3.0);
            assert_eq!(lights.len(), 4);
            let side = (2.0f64).sqrt() * 3.0;
            for i in 0..4 {
                let a = &lights[i];
                let b = &lights[(i + 1) % 4];
                assert_relative_eq!(a.distance(b.x, b.y), side, max_relative = 1e-12);
            }
            let cx: f64 = lights.iter().map(|l| l.x).sum();
            let cy: f64 = lights.iter().map(|l| l.y).sum();
            assert_relative_eq!(cx, 0.0, epsilon = 1e-12);
            assert_relative_eq!(cy, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn tie_replaces_second_of_pair() {
        let mut cfg = tiny_cfg();
        cfg.population_size = 2;
        let n = cfg.trial.network.neurons;
        let clone = NetworkGenome { genes: vec![0.5; genome_len(n)], id: 0, lineage: None };
        let mut other = clone.clone();
        other.id = 1;
        let pop = Population { members: vec![clone, other], generation: 0, rng_seed: cfg.seed, next_id: 2 };
        let (next, stats) = run_generation(&pop, &cfg).unwrap();
        let (first_id, second_id) = stats.pairs[0];
        // the pair member listed second lost the tie and was replaced
        let replaced: Vec<&NetworkGenome<f64>> =
            next.members.iter().filter(|m| m.id == 2).collect();
        assert_eq!(replaced.len(), 1);
        assert_eq!(replaced[0].lineage, Some(first_id));
        assert!(next.members.iter().all(|m| m.id != second_id));
    }

    #[test]
    fn clones_with_zero_rate_stay_identical() {
        let mut cfg = tiny_cfg();
        cfg.mutation_rate = 0.0;
        let n = cfg.trial.network.neurons;
        let template = NetworkGenome { genes: vec![0.4; genome_len(n)], id: 0, lineage: None };
        let members: Vec<_> = (0..cfg.population_size)
            .map(|i| NetworkGenome { id: i as u64, ..template.clone() })
            .collect();
        let pop = Population { members, generation: 0, rng_seed: cfg.seed, next_id: 6 };
        let (next, _) = run_generation(&pop, &cfg).unwrap();
        for m in &next.members {
            assert_eq!(m.genes, template.genes);
        }
    }

    #[test]
    fn every_member_joins_exactly_one_pair() {
        let cfg = tiny_cfg();
        let pop = Population::random(&cfg).unwrap();
        let (_, stats) = run_generation(&pop, &cfg).unwrap();
        let mut seen = BTreeSet::new();
        for (a, b) in &stats.pairs {
            assert!(seen.insert(*a), "member {a} paired twice");
            assert!(seen.insert(*b), "member {b} paired twice");
        }
        let ids: BTreeSet<u64> = pop.members.iter().map(|m| m.id).collect();
        assert_eq!(seen, ids);
    }

    #[test]
    fn generation_preserves_size_and_bounds() {
        let cfg = tiny_cfg();
        let mut pop = Population::random(&cfg).unwrap();
        for _ in 0..5 {
            let (next, _) = run_generation(&pop, &cfg).unwrap();
            assert_eq!(next.size(), cfg.population_size);
            for m in &next.members {
                assert!(m.genes.iter().all(|g| (0.0..=1.0).contains(g)));
                decode(m, cfg.trial.network.neurons).unwrap().validate().unwrap();
            }
            pop = next;
        }
    }

    #[test]
    fn zero_generations_returns_initial() {
        let mut cfg = tiny_cfg();
        cfg.generations = 0;
        let pop = Population::random(&cfg).unwrap();
        let (out, history) = evolve(&cfg, Some(pop.clone())).unwrap();
        assert_eq!(out, pop);
        assert!(history.is_empty());
    }

    #[test]
    fn evolve_is_deterministic() {
        let cfg = tiny_cfg();
        let (pop_a, hist_a) = evolve(&cfg, None).unwrap();
        let (pop_b, hist_b) = evolve(&cfg, None).unwrap();
        assert_eq!(pop_a, pop_b);
        assert_eq!(hist_a, hist_b);
    }

    #[test]
    fn chunked_evolution_equals_monolithic() {
        let mut cfg = tiny_cfg();
        cfg.generations = 4;
        let (monolithic, _) = evolve(&cfg, None).unwrap();

        cfg.generations = 2;
        let (half, _) = evolve(&cfg, None).unwrap();
        let (chunked, _) = evolve(&cfg, Some(half)).unwrap();
        assert_eq!(monolithic, chunked);
    }

    #[test]
    fn fixed_genome_scores_repeat_on_identical_lights() {
        let cfg = tiny_cfg();
        let pop = Population::random(&cfg).unwrap();
        let lights = lights_on_circle(0.7, 3.0, 4);
        let a = combined_score(&pop.members[0], &lights, &cfg.trial).unwrap();
        let b = combined_score(&pop.members[0], &lights, &cfg.trial).unwrap();
        assert_eq!(a, b);
        let other = combined_score(&pop.members[0], &lights_on_circle(1.9, 3.0, 4), &cfg.trial).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn serial_and_parallel_generations_agree() {
        let cfg = tiny_cfg();
        let pop = Population::random(&cfg).unwrap();
        let serial_pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let parallel_pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let serial = serial_pool.install(|| run_generation(&pop, &cfg)).unwrap();
        let parallel = parallel_pool.install(|| run_generation(&pop, &cfg)).unwrap();
        assert_eq!(serial.0, parallel.0);
        assert_eq!(serial.1, parallel.1);
    }
}
