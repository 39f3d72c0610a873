#pragma once

#include <cstdint>
#include <random>

#include "sclp/core/problem.hpp"

namespace sclp::gen {

// Uniform(0,1) draws from a mt19937_64 stream: each draw takes the top 53
// bits of one engine output, so streams are reproducible across platforms.
class Uniform01 {
  public:
    explicit Uniform01(std::uint64_t seed) : rng_(seed) {}
    double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

  private:
    std::mt19937_64 rng_;
};

struct ReentrantConfig {
    int servers = 1;   // I
    int buffers = 1;   // K
    double horizon = 0.0;  // defaults to 1.5 * buffers when <= 0
    std::uint64_t seed = 1000;
};

struct McqnConfig {
    int servers = 1;
    int buffers = 1;       // job classes J == buffers K
    double horizon = 100;  // fixed benchmark horizon
    std::uint64_t seed = 1000;
    double leave_probability = 0.05;
    double routing_density = 0.5;
};

// Re-entrant line: buffers form a chain through shared servers, buffer k
// served on server ((k-1) mod I)+1.  Draw order per seed: alpha_k for all k,
// then a_k, then h_k, then m_k.
core::SclpProblem generate_reentrant(const ReentrantConfig& cfg);

// Multi-class queueing network fluid problem: one activity per class,
// probabilistic routing with a fixed leave fraction per column.  Draw order:
// per class k: alpha, a, h, m; then per column j: one selector draw per
// off-diagonal entry (ascending l), then one magnitude draw per selected
// entry, plus one index draw if the column came up empty.
core::SclpProblem generate_mcqn(const McqnConfig& cfg);

}  // namespace sclp::gen
