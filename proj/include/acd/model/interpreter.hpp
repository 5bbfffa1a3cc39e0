// Copyright 2026 The ACD Gateway Authors
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

// Traces-model interpreter: prefix, external choice, conditional, named
// process calls, STOP, SKIP and synchronised parallel. No hiding, renaming,
// internal choice or divergence checking.
//
// Guards, functions and effects are named in the term and bound in the
// environment to ordinary C++ callables evaluated against the live backend
// state, so a process description can ask the real credential table whether
// an operation's precondition holds.

#ifndef ACD_MODEL_INTERPRETER_HPP
#define ACD_MODEL_INTERPRETER_HPP

#include "acd/model/term.hpp"
#include "acd/protocol/session.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace acd::model {

using Backend = protocol::Backend;

/// Raised for descriptions that do not resolve: unknown process, predicate,
/// function, effect or domain, wrong arity, free variables, or recursion
/// without an intervening prefix.
class SpecificationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when trace enumeration explores more than its node budget.
class StateSpaceExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProcessEnvironment {
    using Predicate = std::function<bool(const Values&, const Backend&)>;
    using Function = std::function<Value(const Values&, const Backend&)>;
    using Effect = std::function<Backend(const Values&, const Backend&)>;

    struct Definition {
        std::vector<std::string> params;
        TermPtr body;
    };

    std::map<std::string, Definition> definitions;
    std::map<std::string, Predicate> predicates;
    std::map<std::string, Function> functions;
    std::map<std::string, Effect> effects;
    std::map<std::string, Values> domains;

    /// Throws SpecificationError on the first unresolved reference, free
    /// variable or unguarded recursion.
    void validate() const;

    /// A closed call term `name(args...)`.
    TermPtr call(const std::string& name, Values args = {}) const;
};

struct Transition {
    TermPtr next;
    Backend backend;
};

std::set<Event> initials(const ProcessEnvironment& env, const TermPtr& term,
                         const Backend& backend);

/// Continuation after engaging in `e`; nullopt if `e` is not offered.
std::optional<Transition> after(const ProcessEnvironment& env, const TermPtr& term,
                                const Event& e, const Backend& backend);

/// Synchronised parallel: events on channels in `sync` need both sides,
/// all others interleave.
TermPtr compose(const ProcessEnvironment& env, const TermPtr& p, const TermPtr& q,
                std::set<std::string> sync);

inline constexpr int kMaxTraceDepth = 8;
inline constexpr std::size_t kMaxExploredNodes = 1'000'000;

struct Enumeration {
    std::set<Trace> traces;
    std::size_t nodes = 0;
};

/// Every trace of length <= depth (1 <= depth <= kMaxTraceDepth), the empty
/// trace included, with backend effects threaded through each path.
Enumeration enumerate_traces(const ProcessEnvironment& env, const TermPtr& term,
                             const Backend& backend, int depth,
                             std::size_t nodeBudget = kMaxExploredNodes);

}  // namespace acd::model

#endif  // ACD_MODEL_INTERPRETER_HPP
