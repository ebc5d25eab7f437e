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

#pragma once

#include <optional>
#include <vector>

#include "stlddp/smoothing.hpp"
#include "stlddp/stl.hpp"

namespace stlddp {

// One state formula that must hold at a particular timestep, weighted so the
// optimizer has comparable incentive for hold-style and deadline-style
// requirements. weight is 1 for always/until-hold terms and max(1, t2-t1)
// for eventually/until-target terms; the floor keeps a zero-width window
// from erasing the incentive entirely.
struct CostTerm {
  StateFormula psi;
  double weight = 1.0;
  int source = 0;  // index of the originating conjunct, for diagnostics
};

// Per-timestep running-cost terms compiled from a specification. Entry t
// lists every state formula enforced at step t; an empty entry means the
// running cost there is identically zero. The source specification is kept
// so certificates can be cross-checked against exact robustness.
struct RunningCostTable {
  Specification spec;
  std::vector<std::vector<CostTerm>> terms;  // length spec.horizon + 1

  int horizon() const { return spec.horizon; }
};

// Compiles the specification into its running-cost table:
//
//   always G[t1,t2] psi      -> psi at each t in [t1, t2], weight 1
//   eventually F[t1,t2] psi  -> psi at the switching time s (default t2),
//                               weight max(1, t2 - t1)
//   psi1 U[t1,t2] psi2       -> psi1 at each t in [t1, s), weight 1;
//                               psi2 at s, weight max(1, t2 - t1)
//
// switch_overrides, when given, supplies a per-conjunct switching time in
// [t1, t2] for the eventually/until target (always conjuncts take none).
RunningCostTable compile(const Specification& spec);
RunningCostTable compile(
    const Specification& spec,
    const std::vector<std::optional<int>>& switch_overrides);

// Running cost l_t(y) with derivatives: empty entry is exactly zero, one
// term is exactly -weight * smooth robustness, several terms merge by
// smooth max. The merge makes l_t an upper bound on each -w rho~, so
// l_t < 0 still forces every term's smooth robustness positive.
SmoothValue eval_running_cost(const RunningCostTable& table, int t,
                              const VectorXd& y, const SmoothParams& params);

enum class Verdict { Satisfied, NotCertified };

struct SoundnessReport {
  Verdict verdict = Verdict::NotCertified;
  std::vector<double> margins;  // l_t at each step; 0 where no terms apply
  std::vector<bool> active;     // whether any term is enforced at step t
  int first_violation = -1;     // earliest active t with margin >= 0, else -1
  double exact_rho = 0.0;       // exact robustness of the source spec
};

// Certifies a trajectory's outputs: Satisfied iff l_t < 0 strictly at every
// timestep that carries at least one term. A Satisfied verdict implies the
// exact robustness is strictly positive, and exact_rho is reported so
// callers can confirm.
SoundnessReport check_soundness(const RunningCostTable& table,
                                const Signal& outputs,
                                const SmoothParams& params);

// Per-term diagnostics at one timestep: which conjunct a term came from,
// its smooth robustness on the given output, and its weighted contribution.
struct TermDiagnostic {
  int source = 0;
  double smooth_robustness = 0.0;
  double weighted_cost = 0.0;
};

std::vector<TermDiagnostic> diagnose_timestep(const RunningCostTable& table,
                                              int t, const VectorXd& y,
                                              const SmoothParams& params);

}  // namespace stlddp
