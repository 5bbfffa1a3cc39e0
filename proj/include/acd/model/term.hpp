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

// Process terms for the small CSP interpreter used as a test oracle.
//
// Terms are immutable trees shared through shared_ptr. Variables are
// replaced by literals as soon as they are bound (input on a prefix, or a
// parameter on a call), so a term reached by the interpreter is always
// closed.

#ifndef ACD_MODEL_TERM_HPP
#define ACD_MODEL_TERM_HPP

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace acd::model {

using Value = std::string;
using Values = std::vector<Value>;

/// A concrete event: channel name plus the values communicated on it.
struct Event {
    std::string name;
    Values fields;

    std::string str() const;
    friend auto operator<=>(const Event&, const Event&) = default;
};

using Trace = std::vector<Event>;

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Literal, variable reference, or application of a named function.
struct Expr {
    enum class Kind { Literal, Var, Apply };
    Kind kind = Kind::Literal;
    std::string text;  // literal value, variable name, or function name
    std::vector<ExprPtr> args;

    static ExprPtr literal(Value v);
    static ExprPtr var(std::string name);
    static ExprPtr apply(std::string fn, std::vector<ExprPtr> args);
};

struct Guard;
using GuardPtr = std::shared_ptr<const Guard>;

struct Guard {
    enum class Kind { Predicate, And, Or, Not, Eq };
    Kind kind = Kind::Predicate;
    std::string name;           // predicate id
    std::vector<ExprPtr> args;  // predicate arguments, or the two sides of Eq
    std::vector<GuardPtr> subs;
};

struct Field {
    enum class Kind { Output, Input };
    Kind kind = Kind::Output;
    ExprPtr value;       // Output
    std::string var;     // Input
    std::string domain;  // Input
};

struct EventPattern {
    std::string name;
    std::vector<Field> fields;
};

struct EffectCall {
    std::string name;
    std::vector<ExprPtr> args;
};

struct ProcessTerm;
using TermPtr = std::shared_ptr<const ProcessTerm>;

struct Prefix {
    EventPattern event;
    std::optional<EffectCall> effect;  // applied to the backend on engagement
    TermPtr next;
};
struct ExternalChoice {
    std::vector<TermPtr> options;
};
struct Conditional {
    GuardPtr guard;
    TermPtr then_branch;
    TermPtr else_branch;
};
struct Call {
    std::string name;
    std::vector<ExprPtr> args;
};
struct Stop {};
struct Skip {};
struct Parallel {
    TermPtr left;
    TermPtr right;
    std::set<std::string> sync;  // channel names both sides must agree on
};

struct ProcessTerm {
    std::variant<Prefix, ExternalChoice, Conditional, Call, Stop, Skip, Parallel> node;

    static TermPtr make(Prefix p);
    static TermPtr make(ExternalChoice c);
    static TermPtr make(Conditional c);
    static TermPtr make(Call c);
    static TermPtr stop();
    static TermPtr skip();
    static TermPtr make(Parallel p);
};

/// Human-readable s-expression rendering, for diagnostics.
std::string render(const ProcessTerm& t);

}  // namespace acd::model

#endif  // ACD_MODEL_TERM_HPP
