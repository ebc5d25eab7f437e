// Copyright 2026 The stlddp Authors
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

#include "stlddp/costgen.hpp"

#include <algorithm>
#include <string>

namespace stlddp {

namespace {

double target_weight(int t1, int t2) {
  return std::max(1.0, static_cast<double>(t2 - t1));
}

int resolve_switch(const PathFormula& f, std::optional<int> override_s,
                   int conjunct) {
  if (!override_s) return f.t2();
  if (f.kind() == PathFormula::Kind::Always) {
    throw Error("conjunct " + std::to_string(conjunct) +
                ": switching-time override applies only to eventually/until");
  }
  if (*override_s < f.t1() || *override_s > f.t2()) {
    throw HorizonExceededError(
        "conjunct " + std::to_string(conjunct) + ": switching time " +
        std::to_string(*override_s) + " outside window [" +
        std::to_string(f.t1()) + "," + std::to_string(f.t2()) + "]");
  }
  return *override_s;
}

}  // namespace

RunningCostTable compile(const Specification& spec) {
  return compile(spec, std::vector<std::optional<int>>(spec.conjuncts.size()));
}

RunningCostTable compile(
    const Specification& spec,
    const std::vector<std::optional<int>>& switch_overrides) {
  validate_fragment(spec);
  if (switch_overrides.size() != spec.conjuncts.size()) {
    throw LengthMismatchError(
        "switch_overrides must have one (possibly empty) entry per conjunct");
  }

  RunningCostTable table{spec, {}};
  table.terms.resize(spec.horizon + 1);

  for (size_t i = 0; i < spec.conjuncts.size(); ++i) {
    const PathFormula& f = spec.conjuncts[i];
    if (f.t2() > spec.horizon) {
      throw HorizonExceededError("conjunct " + std::to_string(i) +
                                 " reaches past the horizon");
    }
    const int src = static_cast<int>(i);
    switch (f.kind()) {
      case PathFormula::Kind::Always:
        resolve_switch(f, switch_overrides[i], src);  // rejects an override
        for (int t = f.t1(); t <= f.t2(); ++t) {
          table.terms[t].push_back({f.body(), 1.0, src});
        }
        break;
      case PathFormula::Kind::Eventually: {
        const int s = resolve_switch(f, switch_overrides[i], src);
        table.terms[s].push_back({f.body(), target_weight(f.t1(), f.t2()), src});
        break;
      }
      case PathFormula::Kind::Until: {
        const int s = resolve_switch(f, switch_overrides[i], src);
        for (int t = f.t1(); t < s; ++t) {
          table.terms[t].push_back({f.lhs(), 1.0, src});
        }
        table.terms[s].push_back({f.body(), target_weight(f.t1(), f.t2()), src});
        break;
      }
    }
  }
  return table;
}

SmoothValue eval_running_cost(const RunningCostTable& table, int t,
                              const VectorXd& y, const SmoothParams& params) {
  if (t < 0 || t > table.horizon()) {
    throw HorizonExceededError("running-cost index " + std::to_string(t) +
                               " outside 0.." + std::to_string(table.horizon()));
  }
  const auto& entry = table.terms[t];
  const int p = static_cast<int>(y.size());
  if (entry.empty()) return SmoothValue::constant(0.0, p);

  std::vector<SmoothValue> costs;
  costs.reserve(entry.size());
  for (const auto& term : entry) {
    SmoothValue rho = smooth_state_robustness(term.psi, y, params);
    rho.value *= -term.weight;
    rho.grad *= -term.weight;
    rho.hess *= -term.weight;
    costs.push_back(std::move(rho));
  }
  if (costs.size() == 1) return costs.front();
  return smooth_max(costs, params.k2);
}

SoundnessReport check_soundness(const RunningCostTable& table,
                                const Signal& outputs,
                                const SmoothParams& params) {
  const int T = table.horizon();
  if (outputs.length() != T + 1) {
    throw LengthMismatchError("certificate needs " + std::to_string(T + 1) +
                              " output samples, got " +
                              std::to_string(outputs.length()));
  }
  SoundnessReport report;
  report.margins.resize(T + 1, 0.0);
  report.active.resize(T + 1, false);
  bool ok = true;
  for (int t = 0; t <= T; ++t) {
    report.active[t] = !table.terms[t].empty();
    if (!report.active[t]) continue;
    report.margins[t] =
        eval_running_cost(table, t, outputs.samples[t], params).value;
    if (!(report.margins[t] < 0.0)) {
      ok = false;
      if (report.first_violation < 0) report.first_violation = t;
    }
  }
  report.verdict = ok ? Verdict::Satisfied : Verdict::NotCertified;
  report.exact_rho = exact_robustness(table.spec, outputs);
  return report;
}

std::vector<TermDiagnostic> diagnose_timestep(const RunningCostTable& table,
                                              int t, const VectorXd& y,
                                              const SmoothParams& params) {
  if (t < 0 || t > table.horizon()) {
    throw HorizonExceededError("diagnostic index " + std::to_string(t) +
                               " outside 0.." + std::to_string(table.horizon()));
  }
  std::vector<TermDiagnostic> out;
  out.reserve(table.terms[t].size());
  for (const auto& term : table.terms[t]) {
    const double rho = smooth_state_robustness(term.psi, y, params).value;
    out.push_back({term.source, rho, -term.weight * rho});
  }
  return out;
}

}  // namespace stlddp
