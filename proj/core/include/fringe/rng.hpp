#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>

namespace fringe {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Derives a child seed from a base seed and a path of integer keys.
/// Streams derived from distinct paths are statistically independent.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Hash of a short label, so seeds can be namespaced by purpose ("pretrain", ...).
std::uint64_t label_key(std::string_view label);

// The helpers below avoid std::*_distribution, whose output is
// implementation-defined, so seeded streams are stable across toolchains.

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng& rng);
double uniform(Rng& rng, double lo, double hi);
/// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);
bool bernoulli(Rng& rng, double p);
/// Standard normal via Box-Muller; stateless, one draw consumes two words.
double standard_normal(Rng& rng);

std::string rng_state_to_string(const Rng& rng);
Rng rng_state_from_string(const std::string& state);

}  // namespace fringe
