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

#include "fluxq/amplitudes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <thread>

#include "fluxq/gates.hpp"
#include "fluxq/rng.hpp"

namespace fluxq {

namespace {

std::vector<double> born_probabilities(const StateVector& s) {
  std::vector<double> p(s.size());
  for (std::uint64_t j = 0; j < s.size(); ++j) p[j] = std::norm(s[j]);
  return p;
}

std::vector<double> sample_frequencies(const std::vector<double>& probs,
                                       std::uint64_t shots,
                                       std::uint64_t seed,
                                       std::uint64_t setting) {
  DiscreteSampler sampler(probs);
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    Rng rng(derive_seed(seed, setting, s));
    ++counts[sampler.sample(rng)];
  }
  std::vector<double> freq(probs.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    freq[j] = static_cast<double>(counts[j]) / static_cast<double>(shots);
  }
  return freq;
}

struct SignEdge {
  std::uint64_t i = 0;
  std::uint64_t k = 0;
  double z = 0.0;
  int sign = 0;
};

struct UnionFind {
  std::vector<std::uint64_t> parent;
  explicit UnionFind(std::uint64_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0ull);
  }
  std::uint64_t find(std::uint64_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool merge(std::uint64_t a, std::uint64_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[b] = a;
    return true;
  }
};

}  // namespace

SignProtocolRecord collect_sign_data(const std::function<StateVector()>& prepare,
                                     std::uint64_t shots_per_setting,
                                     std::uint64_t rng_seed) {
  if (shots_per_setting == 0) {
    throw ConfigError("collect_sign_data needs at least one shot per setting");
  }
  StateVector base = prepare();
  SignProtocolRecord record;
  record.qubit_count = base.qubit_count();
  record.bare_shots = shots_per_setting;
  // stream domain 4: sign-protocol settings (setting 0 = bare)
  record.bare = sample_frequencies(born_probabilities(base), shots_per_setting,
                                   derive_seed(rng_seed, 4, 0), 0);
  record.hadamard.resize(record.qubit_count);
  record.hadamard_shots.assign(record.qubit_count, shots_per_setting);
  for (int q = 0; q < record.qubit_count; ++q) {
    StateVector rotated = prepare();
    apply_hadamard(rotated, q);
    record.hadamard[q] = sample_frequencies(
        born_probabilities(rotated), shots_per_setting,
        derive_seed(rng_seed, 4, static_cast<std::uint64_t>(q) + 1), 0);
  }
  return record;
}

SignProtocolRecord exact_sign_record(const StateVector& psi) {
  SignProtocolRecord record;
  record.qubit_count = psi.qubit_count();
  record.bare_shots = 0;
  record.bare = born_probabilities(psi);
  record.hadamard.resize(record.qubit_count);
  record.hadamard_shots.assign(record.qubit_count, 0);
  for (int q = 0; q < record.qubit_count; ++q) {
    StateVector rotated = psi;
    apply_hadamard(rotated, q);
    record.hadamard[q] = born_probabilities(rotated);
  }
  return record;
}

SignedAmplitudeTable solve_signs(const SignProtocolRecord& record) {
  const int nu = record.qubit_count;
  const std::uint64_t n = 1ull << nu;
  if (record.bare.size() != n ||
      static_cast<int>(record.hadamard.size()) != nu ||
      static_cast<int>(record.hadamard_shots.size()) != nu) {
    throw RangeError("sign record must cover the bare setting and one "
                     "Hadamard setting per qubit");
  }
  const bool exact = record.bare_shots == 0;

  SignedAmplitudeTable out;
  out.a.resize(n);
  out.std_error.assign(n, 0.0);
  out.undetermined.assign(n, 0);
  std::vector<double> mag(n);
  for (std::uint64_t j = 0; j < n; ++j) {
    const double p = std::max(record.bare[j], 0.0);
    mag[j] = std::sqrt(p);
    if (!exact && record.bare_shots > 0) {
      const double s = static_cast<double>(record.bare_shots);
      const double var_p = std::max(p * (1.0 - p) / s, 0.0);
      out.std_error[j] = mag[j] > 0.0 ? std::sqrt(var_p) / (2.0 * mag[j])
                                      : 0.5 / std::sqrt(s);
    }
  }

  // Pairwise sign evidence: under a Hadamard on qubit q the pair (i, k)
  // reports frequencies whose difference estimates 2 a_i a_k.
  std::vector<SignEdge> edges;
  for (int q = 0; q < nu; ++q) {
    const std::vector<double>& h = record.hadamard[q];
    if (h.size() != n) throw RangeError("sign record histogram has wrong size");
    const std::uint64_t mask = 1ull << (nu - 1 - q);
    for (std::uint64_t i = 0; i < n; ++i) {
      if (i & mask) continue;
      const std::uint64_t k = i | mask;
      const double d = h[i] - h[k];
      double z;
      if (exact) {
        z = std::abs(d) > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0;
      } else {
        const double s = static_cast<double>(record.hadamard_shots[q]);
        const double var = std::max((h[i] + h[k] - d * d) / s, 0.0);
        if (var <= 0.0) {
          z = std::abs(d) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        } else {
          z = std::abs(d) / std::sqrt(var);
        }
      }
      if (z >= 3.0) {
        edges.push_back({i, k, z, d > 0.0 ? 1 : -1});
      }
    }
  }
  std::stable_sort(edges.begin(), edges.end(), [](const SignEdge& a,
                                                  const SignEdge& b) {
    if (a.z != b.z) return a.z > b.z;
    if (a.i != b.i) return a.i < b.i;
    return a.k < b.k;
  });

  UnionFind uf(n);
  std::vector<std::vector<std::pair<std::uint64_t, int>>> tree(n);
  std::vector<const SignEdge*> extra;
  for (const SignEdge& e : edges) {
    if (uf.merge(e.i, e.k)) {
      tree[e.i].push_back({e.k, e.sign});
      tree[e.k].push_back({e.i, e.sign});
    } else {
      extra.push_back(&e);
    }
  }

  // Per-component BFS from that component's largest magnitude.
  std::vector<int> sign(n, 0);
  std::vector<std::uint64_t> comp_best;
  {
    std::vector<std::uint64_t> best(n, n);  // root -> best node
    for (std::uint64_t j = 0; j < n; ++j) {
      const std::uint64_t r = uf.find(j);
      if (best[r] == n || mag[j] > mag[best[r]]) best[r] = j;
    }
    for (std::uint64_t r = 0; r < n; ++r) {
      if (best[r] != n) comp_best.push_back(best[r]);
    }
  }
  for (std::uint64_t start : comp_best) {
    sign[start] = 1;
    std::vector<std::uint64_t> queue{start};
    while (!queue.empty()) {
      const std::uint64_t i = queue.back();
      queue.pop_back();
      for (const auto& [k, s] : tree[i]) {
        if (sign[k] != 0) continue;
        sign[k] = sign[i] * s;
        queue.push_back(k);
      }
    }
  }

  for (const SignEdge* e : extra) {
    if (sign[e->i] * sign[e->k] != e->sign) ++out.conflict_edges;
  }
  out.consistent = out.conflict_edges == 0;

  const std::uint64_t global_best =
      static_cast<std::uint64_t>(std::distance(
          mag.begin(), std::max_element(mag.begin(), mag.end())));
  const std::uint64_t main_root = uf.find(global_best);
  for (std::uint64_t j = 0; j < n; ++j) {
    const bool in_main = uf.find(j) == main_root;
    out.a[j] = (in_main ? sign[j] : 1) * mag[j];
    out.undetermined[j] = (!in_main && mag[j] > 0.0) ? 1 : 0;
  }
  // Global convention: the dominant amplitude is positive. BFS started
  // positive at the component maximum, so this is already true.
  return out;
}

double core_imag_defect(const StateVector& state, const SplitStepPlan& plan) {
  if (state.size() != plan.grid.total_points()) {
    throw RangeError("state does not match the plan's grid");
  }
  std::vector<Complex> core(state.size());
  double best = 0.0;
  std::uint64_t argmax = 0;
  for (std::uint64_t j = 0; j < state.size(); ++j) {
    core[j] = state[j] * std::polar(1.0, -0.5 * plan.v[j] * plan.grid.dt);
    if (std::abs(core[j]) > best) {
      best = std::abs(core[j]);
      argmax = j;
    }
  }
  if (best == 0.0) return 0.0;
  const Complex align = std::polar(1.0, -std::arg(core[argmax]));
  double defect = 0.0;
  for (const Complex& c : core) {
    defect = std::max(defect, std::abs((c * align).imag()));
  }
  return defect;
}

std::vector<BinAmplitudeEstimate> estimate_eigenstate_amplitudes(
    const SpectrumRun& run, std::uint64_t shots_per_setting,
    std::uint64_t rng_seed, std::uint64_t min_shots,
    const SplitStepPlan* plan) {
  const SpectrumEstimate& est = run.estimate;
  const JointState& joint = run.evolved;
  const int nu = joint.main_qubits();
  const std::uint64_t values = joint.pointer_values();
  const std::uint64_t main_size = 1ull << nu;

  // One pass per Hadamard setting: each preparation lands in a bin with
  // the pointer distribution (post-selection that wastes nothing), then
  // reports a position sample of the rotated collapsed state.
  DiscreteSampler pointer_sampler(run.marginal);
  std::vector<std::vector<std::vector<std::uint64_t>>> counts(
      nu, std::vector<std::vector<std::uint64_t>>(values));
  std::vector<std::vector<std::uint64_t>> totals(
      nu, std::vector<std::uint64_t>(values, 0));

  auto run_setting = [&](int q) {
    std::vector<std::unique_ptr<DiscreteSampler>> rotated(values);
    for (std::uint64_t s = 0; s < shots_per_setting; ++s) {
      // stream domain 5: per-bin Hadamard settings
      Rng rng(derive_seed(rng_seed, 5, static_cast<std::uint64_t>(q) + 1, s));
      const std::uint64_t x = pointer_sampler.sample(rng);
      if (!rotated[x]) {
        StateVector cond = joint.conditional_main(x);
        apply_hadamard(cond, q);
        rotated[x] = std::make_unique<DiscreteSampler>(born_probabilities(cond));
        counts[q][x].assign(main_size, 0);
      }
      ++totals[q][x];
      ++counts[q][x][rotated[x]->sample(rng)];
    }
  };
  {
    std::vector<std::thread> pool;
    pool.reserve(nu);
    for (int q = 0; q < nu; ++q) pool.emplace_back(run_setting, q);
    for (auto& t : pool) t.join();
  }

  std::vector<BinAmplitudeEstimate> out;
  out.reserve(est.bins.size());
  for (const SpectrumBin& bin : est.bins) {
    BinAmplitudeEstimate b;
    b.pointer_value = bin.pointer_value;
    b.phase = bin.phase;
    b.energy = bin.energy;
    b.weight = bin.weight;
    std::uint64_t least = bin.shots;
    for (int q = 0; q < nu; ++q) {
      least = std::min(least, totals[q][bin.pointer_value]);
    }
    b.low_statistics = least < min_shots;
    if (!b.low_statistics) {
      SignProtocolRecord record;
      record.qubit_count = nu;
      record.bare_shots = bin.shots;
      record.bare.resize(main_size);
      for (std::uint64_t j = 0; j < main_size; ++j) {
        record.bare[j] = static_cast<double>(bin.position_counts[j]) /
                         static_cast<double>(bin.shots);
      }
      record.hadamard.resize(nu);
      record.hadamard_shots.resize(nu);
      for (int q = 0; q < nu; ++q) {
        const std::uint64_t total = totals[q][bin.pointer_value];
        record.hadamard_shots[q] = total;
        record.hadamard[q].resize(main_size);
        for (std::uint64_t j = 0; j < main_size; ++j) {
          record.hadamard[q][j] =
              static_cast<double>(counts[q][bin.pointer_value][j]) /
              static_cast<double>(total);
        }
      }
      b.table = solve_signs(record);
    }
    if (plan) {
      b.core_imag_defect =
          core_imag_defect(joint.conditional_main(bin.pointer_value), *plan);
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Complex> reconstruct_wavefunction(
    const std::vector<BinAmplitudeEstimate>& bins,
    std::span<const double> initial_real, std::uint64_t t_steps,
    std::uint64_t t_units) {
  if (t_units == 0 || t_steps % t_units != 0) {
    throw ConfigError("reconstruction requires t_steps to be a multiple of "
                      "t_units (phases are only known modulo 2*pi/t_units)");
  }
  const std::uint64_t n = initial_real.size();
  std::vector<Complex> psi(n, Complex{0.0, 0.0});
  const double reps = static_cast<double>(t_steps / t_units);
  for (const BinAmplitudeEstimate& bin : bins) {
    if (bin.low_statistics) continue;
    if (bin.table.a.size() != n) {
      throw RangeError("amplitude table does not match the initial state");
    }
    double xi0 = 0.0;
    for (std::uint64_t j = 0; j < n; ++j) xi0 += bin.table.a[j] * initial_real[j];
    const Complex xi = xi0 * std::polar(1.0, bin.phase * reps);
    for (std::uint64_t j = 0; j < n; ++j) psi[j] += xi * bin.table.a[j];
  }
  return psi;
}

}  // namespace fluxq
