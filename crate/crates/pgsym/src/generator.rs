//! Seeded random parity game generation.
//!
//! Mirrors the `randomgame N P L H x` semantics: each vertex gets a priority
//! uniform over `[0, P-1]`, an owner that is 0 with probability 1/2, and `d`
//! distinct successors with `d` uniform over `[L, H]` (`H` clamped to `N-1`
//! when self-loops are excluded). The draw order per vertex is fixed —
//! priority, owner, degree, successors — so a seed pins the game exactly,
//! on every platform.

use thiserror::Error;

use crate::pgsolver::{ExplicitGame, Player, VertexRecord};

/// SplitMix64: the 64-bit generator behind the whole random fleet. Chosen for
/// its trivially portable, fully specified state transition.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from `[0, n)` via rejection sampling (no modulo bias).
    pub fn uniform(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let r = self.next_u64();
            if r < zone {
                return r % n;
            }
        }
    }
}

/// Parameters of one random game, `randomgame N P L H [x]` style.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenSpec {
    pub vertices: u64,
    pub priority_bound: u64,
    pub min_degree: u64,
    pub max_degree: u64,
    pub self_loop_free: bool,
    pub seed: u64,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("vertex count must be at least 1")]
    NoVertices,
    #[error("priority bound must be at least 1")]
    NoPriorities,
    #[error("degree bounds must satisfy 1 <= L <= H (got L={low}, H={high})")]
    BadDegreeBounds { low: u64, high: u64 },
    #[error("cannot pick {degree} distinct non-self successors among {vertices} vertices")]
    Infeasible { degree: u64, vertices: u64 },
}

impl GenSpec {
    /// Effective upper degree bound; clamped to `N-1` without self-loops.
    pub fn clamped_max_degree(&self) -> u64 {
        let cap = if self.self_loop_free {
            self.vertices.saturating_sub(1)
        } else {
            self.vertices
        };
        self.max_degree.min(cap)
    }

    fn validate(&self) -> Result<(), GenError> {
        if self.vertices == 0 {
            return Err(GenError::NoVertices);
        }
        if self.priority_bound == 0 {
            return Err(GenError::NoPriorities);
        }
        if self.min_degree < 1 || self.min_degree > self.max_degree {
            return Err(GenError::BadDegreeBounds {
                low: self.min_degree,
                high: self.max_degree,
            });
        }
        if self.min_degree > self.clamped_max_degree() {
            return Err(GenError::Infeasible {
                degree: self.min_degree,
                vertices: self.vertices,
            });
        }
        Ok(())
    }
}

/// Deterministically generates the game described by `spec`.
pub fn generate(spec: &GenSpec) -> Result<ExplicitGame, GenError> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let n = spec.vertices;
    let high = spec.clamped_max_degree();
    let mut vertices = Vec::with_capacity(n as usize);
    for id in 0..n {
        let priority = rng.uniform(spec.priority_bound) as u32;
        let owner = if rng.uniform(2) == 0 { Player::Even } else { Player::Odd };
        let degree = spec.min_degree + rng.uniform(high - spec.min_degree + 1);
        // distinct successors by sequential rejection
        let mut successors: Vec<u64> = Vec::with_capacity(degree as usize);
        while (successors.len() as u64) < degree {
            let candidate = rng.uniform(n);
            if spec.self_loop_free && candidate == id {
                continue;
            }
            if successors.contains(&candidate) {
                continue;
            }
            successors.push(candidate);
        }
        vertices.push(VertexRecord {
            id,
            priority,
            owner,
            successors,
            name: None,
        });
    }
    Ok(ExplicitGame::new(vertices).expect("generated game is valid by construction"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn respects_bounds_and_distinctness() {
        let spec = GenSpec {
            vertices: 8,
            priority_bound: 8,
            min_degree: 1,
            max_degree: 2,
            self_loop_free: true,
            seed: 7,
        };
        let game = generate(&spec).unwrap();
        assert_eq!(game.vertices().len(), 8);
        for v in game.vertices() {
            assert!(v.priority < 8);
            assert!(!v.successors.is_empty() && v.successors.len() <= 2);
            assert!(!v.successors.contains(&v.id));
            let mut s = v.successors.clone();
            s.sort_unstable();
            s.dedup();
            assert_eq!(s.len(), v.successors.len());
        }
    }

    #[test]
    fn single_vertex_self_loop() {
        let spec = GenSpec {
            vertices: 1,
            priority_bound: 1,
            min_degree: 1,
            max_degree: 1,
            self_loop_free: false,
            seed: 3,
        };
        let game = generate(&spec).unwrap();
        assert_eq!(game.vertices().len(), 1);
        assert_eq!(game.vertices()[0].priority, 0);
        assert_eq!(game.vertices()[0].successors, vec![0]);
    }

    #[test]
    fn same_seed_same_game() {
        let spec = GenSpec {
            vertices: 32,
            priority_bound: 32,
            min_degree: 1,
            max_degree: 32,
            self_loop_free: true,
            seed: 99,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
    }

    #[test]
    fn infeasible_spec_rejected() {
        let spec = GenSpec {
            vertices: 1,
            priority_bound: 1,
            min_degree: 2,
            max_degree: 2,
            self_loop_free: true,
            seed: 0,
        };
        assert_eq!(
            generate(&spec).unwrap_err(),
            GenError::Infeasible { degree: 2, vertices: 1 }
        );
    }

    #[test]
    fn dense_clamps_max_degree() {
        let spec = GenSpec {
            vertices: 8,
            priority_bound: 8,
            min_degree: 1,
            max_degree: 8,
            self_loop_free: true,
            seed: 1,
        };
        assert_eq!(spec.clamped_max_degree(), 7);
        let game = generate(&spec).unwrap();
        assert!(game.vertices().iter().all(|v| v.successors.len() <= 7));
    }

    #[test]
    fn owner_ratio_sanity() {
        let spec = GenSpec {
            vertices: 100_000,
            priority_bound: 4,
            min_degree: 1,
            max_degree: 2,
            self_loop_free: true,
            seed: 5,
        };
        let game = generate(&spec).unwrap();
        let evens = game
            .vertices()
            .iter()
            .filter(|v| v.owner == Player::Even)
            .count() as f64;
        let n = 100_000f64;
        // 5 sigma around n/2 for Bernoulli(1/2)
        let sigma = (n * 0.25).sqrt();
        assert!((evens - n / 2.0).abs() < 5.0 * sigma);
    }
}
