// Copyright 2026 The fluxq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fluxq/pointer.hpp"

#include <cmath>
#include <numbers>
#include <thread>

#include "fluxq/gates.hpp"
#include "fluxq/rng.hpp"

namespace fluxq {

double PointerConfig::phase_bin_width() const {
  return 2.0 * std::numbers::pi / static_cast<double>(1ull << qubits);
}

void PointerConfig::validate() const {
  if (qubits < 1 || qubits > 16) {
    throw ConfigError("pointer qubits must be in [1, 16], got " +
                      std::to_string(qubits));
  }
  if (x0 < 0 || static_cast<std::uint64_t>(x0) >= (1ull << qubits)) {
    throw ConfigError("pointer x0 must be in [0, 2^K)");
  }
}

JointState::JointState(const StateVector& main, const PointerConfig& cfg)
    : main_qubits_(main.qubit_count()),
      pointer_qubits_(cfg.qubits),
      state_([&] {
        cfg.validate();
        if (main.qubit_count() + cfg.qubits > kMaxQubits) {
          throw ResourceError("joint register needs " +
                              std::to_string(main.qubit_count() + cfg.qubits) +
                              " qubits, cap is " + std::to_string(kMaxQubits));
        }
        return StateVector(main.qubit_count() + cfg.qubits);
      }()) {
  const std::uint64_t values = pointer_values();
  state_[0] = 0.0;
  for (std::uint64_t j = 0; j < main.size(); ++j) {
    state_[j * values + static_cast<std::uint64_t>(cfg.x0)] = main[j];
  }
}

std::vector<double> JointState::pointer_marginal() const {
  const std::uint64_t values = pointer_values();
  std::vector<double> p(values, 0.0);
  const std::uint64_t main_size = 1ull << main_qubits_;
  for (std::uint64_t j = 0; j < main_size; ++j) {
    const std::uint64_t base = j * values;
    for (std::uint64_t x = 0; x < values; ++x) {
      p[x] += std::norm(state_[base + x]);
    }
  }
  return p;
}

StateVector JointState::conditional_main(std::uint64_t x) const {
  const std::uint64_t values = pointer_values();
  if (x >= values) throw RangeError("pointer value out of range");
  StateVector main(main_qubits_);
  main[0] = 0.0;
  double mass = 0.0;
  for (std::uint64_t j = 0; j < main.size(); ++j) {
    const Complex a = state_[j * values + x];
    main[j] = a;
    mass += std::norm(a);
  }
  if (mass < 1e-300) {
    throw InvariantError("conditioning on a zero-probability pointer value");
  }
  const double inv = 1.0 / std::sqrt(mass);
  for (std::uint64_t j = 0; j < main.size(); ++j) main[j] *= inv;
  return main;
}

std::vector<double> JointState::main_marginal() const {
  const std::uint64_t values = pointer_values();
  const std::uint64_t main_size = 1ull << main_qubits_;
  std::vector<double> p(main_size, 0.0);
  for (std::uint64_t j = 0; j < main_size; ++j) {
    const std::uint64_t base = j * values;
    for (std::uint64_t x = 0; x < values; ++x) {
      p[j] += std::norm(state_[base + x]);
    }
  }
  return p;
}

JointState attach_pointer(const StateVector& main, const PointerConfig& cfg) {
  return JointState(main, cfg);
}

void conditional_evolution(JointState& joint, const SplitStepPlan& plan,
                           const PointerConfig& cfg, int workers) {
  if (joint.main_qubits() != plan.grid.total_qubits()) {
    throw RangeError("plan does not match the joint state's main register");
  }
  StateVector& state = joint.state();
  const int nu = joint.main_qubits();
  const int k = joint.pointer_qubits();
  const std::uint64_t values = joint.pointer_values();
  const std::uint64_t main_size = 1ull << nu;

  qft(state, {nu, k});

  // Each pointer momentum slice evolves independently under
  // U^{p * t_units}; slices are disjoint strided columns of the joint
  // amplitude array, so threading over p is deterministic.
  int n_workers = workers > 0 ? workers
                              : static_cast<int>(std::thread::hardware_concurrency());
  if (n_workers < 1) n_workers = 1;
  n_workers = std::min<int>(n_workers, static_cast<int>(values));

  GateTally slice_tally;  // accumulated deterministically below
  std::vector<GateTally> tallies(values);
  auto work = [&](int worker) {
    for (std::uint64_t p = worker; p < values; p += n_workers) {
      const std::uint64_t reps = p * cfg.t_units;
      if (reps == 0) continue;
      StateVector slice(nu);
      for (std::uint64_t j = 0; j < main_size; ++j) {
        slice[j] = state[j * values + p];
      }
      for (std::uint64_t r = 0; r < reps; ++r) split_step(slice, plan);
      for (std::uint64_t j = 0; j < main_size; ++j) {
        state[j * values + p] = slice[j];
      }
      tallies[p] = slice.tally();
    }
  };
  if (n_workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const GateTally& t : tallies) {
    state.tally().single_qubit += t.single_qubit;
    state.tally().two_qubit += t.two_qubit;
    state.tally().swap += t.swap;
    state.tally().diagonal += t.diagonal;
  }

  inverse_qft(state, {nu, k});
}

PointerMeasurement measure_pointer(JointState&& joint, std::uint64_t rng_seed) {
  const double n2 = joint.state().norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvariantError("measure_pointer requires a normalized joint state");
  }
  const auto marginal = joint.pointer_marginal();
  DiscreteSampler sampler(marginal);
  Rng rng(derive_seed(rng_seed, 2, 0));  // stream domain 2: measure_pointer
  const std::uint64_t x = sampler.sample(rng);
  return {x, joint.conditional_main(x)};
}

std::vector<std::size_t> SpectrumEstimate::peaks(double min_weight,
                                                 int radius) const {
  const std::uint64_t values = 1ull << pointer_qubits;
  std::vector<double> by_value(values, 0.0);
  for (const auto& b : bins) by_value[b.pointer_value] = b.weight;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto& b = bins[i];
    if (b.weight < min_weight) continue;
    bool is_peak = true;
    for (int d = -radius; d <= radius && is_peak; ++d) {
      if (d == 0) continue;
      const std::uint64_t other =
          (b.pointer_value + values + static_cast<std::uint64_t>(d)) % values;
      const double w = by_value[other];
      if (w > b.weight || (w == b.weight && d < 0)) is_peak = false;
    }
    if (is_peak) out.push_back(i);
  }
  return out;
}

double SpectrumEstimate::cluster_weight(std::size_t bin_index,
                                        int radius) const {
  const std::uint64_t values = 1ull << pointer_qubits;
  std::vector<double> by_value(values, 0.0);
  for (const auto& b : bins) by_value[b.pointer_value] = b.weight;
  double acc = 0.0;
  for (int d = -radius; d <= radius; ++d) {
    const std::uint64_t x =
        (bins[bin_index].pointer_value + values + static_cast<std::uint64_t>(d)) %
        values;
    acc += by_value[x];
  }
  return acc;
}

SpectrumRun run_spectrum(const StateVector& initial, const SplitStepPlan& plan,
                         const PointerConfig& cfg, std::uint64_t n_shots,
                         std::uint64_t rng_seed, int workers,
                         const oracle::EigenSystem* validation) {
  const double n2 = initial.norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw InvariantError("estimate_spectrum requires a normalized state");
  }
  JointState joint = attach_pointer(initial, cfg);
  conditional_evolution(joint, plan, cfg, workers);

  const std::uint64_t values = joint.pointer_values();
  const std::uint64_t main_size = 1ull << joint.main_qubits();
  std::vector<double> marginal = joint.pointer_marginal();
  DiscreteSampler pointer_sampler(marginal);

  // Lazily built per-outcome position distributions.
  std::vector<std::unique_ptr<DiscreteSampler>> position(values);
  std::vector<std::uint64_t> counts(values, 0);
  std::vector<std::vector<std::uint64_t>> positions(values);
  for (std::uint64_t s = 0; s < n_shots; ++s) {
    Rng rng(derive_seed(rng_seed, 3, s));  // stream domain 3: spectrum shots
    const std::uint64_t x = pointer_sampler.sample(rng);
    if (!position[x]) {
      std::vector<double> probs(main_size);
      for (std::uint64_t j = 0; j < main_size; ++j) {
        probs[j] = std::norm(joint.state()[j * values + x]);
      }
      position[x] = std::make_unique<DiscreteSampler>(probs);
      positions[x].assign(main_size, 0);
    }
    ++counts[x];
    ++positions[x][position[x]->sample(rng)];
  }

  SpectrumRun run{SpectrumEstimate{}, std::move(joint), std::move(marginal)};
  SpectrumEstimate& est = run.estimate;
  est.pointer_qubits = cfg.qubits;
  est.x0 = cfg.x0;
  est.t_units = cfg.t_units;
  est.dt = plan.grid.dt;
  est.total_shots = n_shots;
  est.seed = rng_seed;

  const double two_pi = 2.0 * std::numbers::pi;
  for (std::uint64_t x = 0; x < values; ++x) {
    if (counts[x] == 0) continue;
    SpectrumBin bin;
    bin.pointer_value = x;
    const std::uint64_t shifted =
        (x + values - static_cast<std::uint64_t>(cfg.x0)) % values;
    bin.phase = two_pi * static_cast<double>(shifted) / static_cast<double>(values);
    bin.energy = bin.phase /
                 (plan.grid.dt * static_cast<double>(std::max<std::uint64_t>(cfg.t_units, 1)));
    bin.shots = counts[x];
    bin.weight = static_cast<double>(counts[x]) / static_cast<double>(n_shots);
    bin.position_counts = std::move(positions[x]);
    if (validation) {
      // A bin is degenerate when the oracle maps two eigenphases (or one
      // with multiplicity > 1) into it.
      int hits = 0;
      bool multiple = false;
      for (Eigen::Index n = 0; n < validation->phases.size(); ++n) {
        const double y =
            std::fmod(static_cast<double>(cfg.x0) +
                          static_cast<double>(cfg.t_units) * validation->phases[n] *
                              static_cast<double>(values) / two_pi,
                      static_cast<double>(values));
        const double dist = std::min(
            std::abs(y - static_cast<double>(x)),
            static_cast<double>(values) - std::abs(y - static_cast<double>(x)));
        if (dist <= 0.5) {
          ++hits;
          if (validation->multiplicity[n] > 1) multiple = true;
        }
      }
      bin.degenerate = multiple || hits > 1;
    }
    est.bins.push_back(std::move(bin));
  }
  return run;
}

SpectrumEstimate estimate_spectrum(const StateVector& initial,
                                   const SplitStepPlan& plan,
                                   const PointerConfig& cfg,
                                   std::uint64_t n_shots,
                                   std::uint64_t rng_seed, int workers,
                                   const oracle::EigenSystem* validation) {
  return run_spectrum(initial, plan, cfg, n_shots, rng_seed, workers, validation)
      .estimate;
}

}  // namespace fluxq
