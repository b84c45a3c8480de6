// Copyright 2026 The gsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GSP_AGENT_HPP_
#define GSP_AGENT_HPP_

#include <algorithm>
#include <filesystem>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gsp/learner.hpp"
#include "gsp/rirrps.hpp"

namespace gsp {

using FrozenPolicy = std::shared_ptr<const TabularSoftmaxPolicy>;

inline FrozenPolicy Freeze(const TabularSoftmaxPolicy& policy) {
  return std::make_shared<const TabularSoftmaxPolicy>(policy);
}

// A population member: a fixed reference agent or a frozen tabular policy.
class Agent {
 public:
  Agent(FixedAgent fixed, std::string label) : impl_(fixed), label_(std::move(label)) {}
  Agent(FrozenPolicy policy, std::string label) : impl_(std::move(policy)), label_(std::move(label)) {}

  Action Act(std::size_t state, Rng& rng) const {
    if (const auto* f = std::get_if<FixedAgent>(&impl_)) return f->Act(state, rng);
    return std::get<FrozenPolicy>(impl_)->Act(state, rng);
  }

  const std::string& label() const { return label_; }

 private:
  std::variant<FixedAgent, FrozenPolicy> impl_;
  std::string label_;
};

inline Agent MakeFixedAgent(FixedKind kind) {
  return Agent(FixedAgent{kind}, std::string(FixedKindName(kind)));
}

// "fixed:rock" (or paper / scissors / random), or a path to a policy file.
inline Agent LoadAgent(const std::string& spec) {
  constexpr std::string_view kFixed = "fixed:";
  if (spec.rfind(kFixed, 0) == 0) return MakeFixedAgent(ParseFixedKind(spec.substr(kFixed.size())));
  std::filesystem::path path(spec);
  return Agent(Freeze(ParsePolicy(ReadFile(path)).policy), path.stem().string());
}

// Population from a list of specs. A directory expands to its *.policy
// files in lexicographic order (checkpoint files are zero-padded).
inline std::vector<Agent> LoadPopulation(const std::vector<std::string>& specs) {
  std::vector<Agent> out;
  for (const auto& spec : specs) {
    std::filesystem::path p(spec);
    if (spec.rfind("fixed:", 0) != 0 && std::filesystem::is_directory(p)) {
      std::filesystem::path dir = std::filesystem::is_directory(p / "snapshots") ? p / "snapshots" : p;
      std::vector<std::filesystem::path> files;
      for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.path().extension() == ".policy") files.push_back(e.path());
      std::sort(files.begin(), files.end());
      if (files.empty()) throw IoError("no .policy files in " + dir.string());
      for (const auto& f : files) out.push_back(LoadAgent(f.string()));
    } else {
      out.push_back(LoadAgent(spec));
    }
  }
  return out;
}

}  // namespace gsp

#endif  // GSP_AGENT_HPP_
