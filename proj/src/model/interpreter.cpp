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

#include "acd/model/interpreter.hpp"

#include <algorithm>

namespace acd::model {

namespace {

using Bindings = std::map<std::string, Value>;

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

ExprPtr subst(const ExprPtr& e, const Bindings& b)
{
    switch (e->kind) {
    case Expr::Kind::Literal:
        return e;
    case Expr::Kind::Var: {
        auto it = b.find(e->text);
        return it == b.end() ? e : Expr::literal(it->second);
    }
    case Expr::Kind::Apply: {
        std::vector<ExprPtr> args;
        args.reserve(e->args.size());
        for (const auto& a : e->args)
            args.push_back(subst(a, b));
        return Expr::apply(e->text, std::move(args));
    }
    }
    return e;
}

std::vector<ExprPtr> subst(const std::vector<ExprPtr>& es, const Bindings& b)
{
    std::vector<ExprPtr> out;
    out.reserve(es.size());
    for (const auto& e : es)
        out.push_back(subst(e, b));
    return out;
}

GuardPtr subst(const GuardPtr& g, const Bindings& b)
{
    Guard out{g->kind, g->name, subst(g->args, b), {}};
    for (const auto& s : g->subs)
        out.subs.push_back(subst(s, b));
    return std::make_shared<const Guard>(std::move(out));
}

TermPtr subst(const TermPtr& t, const Bindings& b)
{
    if (b.empty())
        return t;
    return std::visit(
        [&](const auto& n) -> TermPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                Prefix p;
                p.event.name = n.event.name;
                Bindings inner = b;
                for (const auto& f : n.event.fields) {
                    Field nf = f;
                    if (f.kind == Field::Kind::Output)
                        nf.value = subst(f.value, b);
                    else
                        inner.erase(f.var);  // shadowed below this prefix
                    p.event.fields.push_back(std::move(nf));
                }
                if (n.effect)
                    p.effect = EffectCall{n.effect->name, subst(n.effect->args, inner)};
                p.next = subst(n.next, inner);
                return ProcessTerm::make(std::move(p));
            } else if constexpr (std::is_same_v<T, ExternalChoice>) {
                ExternalChoice c;
                for (const auto& o : n.options)
                    c.options.push_back(subst(o, b));
                return ProcessTerm::make(std::move(c));
            } else if constexpr (std::is_same_v<T, Conditional>) {
                return ProcessTerm::make(Conditional{subst(n.guard, b), subst(n.then_branch, b),
                                                     subst(n.else_branch, b)});
            } else if constexpr (std::is_same_v<T, Call>) {
                return ProcessTerm::make(Call{n.name, subst(n.args, b)});
            } else if constexpr (std::is_same_v<T, Parallel>) {
                return ProcessTerm::make(Parallel{subst(n.left, b), subst(n.right, b), n.sync});
            } else {
                return t;
            }
        },
        t->node);
}

// ---------------------------------------------------------------------------
// Evaluation of closed expressions and guards
// ---------------------------------------------------------------------------

Value eval(const ProcessEnvironment& env, const ExprPtr& e, const Backend& backend)
{
    switch (e->kind) {
    case Expr::Kind::Literal:
        return e->text;
    case Expr::Kind::Var:
        throw SpecificationError("unbound variable '" + e->text + "'");
    case Expr::Kind::Apply: {
        auto it = env.functions.find(e->text);
        if (it == env.functions.end())
            throw SpecificationError("unknown function '" + e->text + "'");
        Values args;
        for (const auto& a : e->args)
            args.push_back(eval(env, a, backend));
        return it->second(args, backend);
    }
    }
    return {};
}

Values eval(const ProcessEnvironment& env, const std::vector<ExprPtr>& es, const Backend& backend)
{
    Values out;
    out.reserve(es.size());
    for (const auto& e : es)
        out.push_back(eval(env, e, backend));
    return out;
}

bool holds(const ProcessEnvironment& env, const Guard& g, const Backend& backend)
{
    switch (g.kind) {
    case Guard::Kind::Predicate: {
        auto it = env.predicates.find(g.name);
        if (it == env.predicates.end())
            throw SpecificationError("unknown predicate '" + g.name + "'");
        return it->second(eval(env, g.args, backend), backend);
    }
    case Guard::Kind::Eq:
        return eval(env, g.args.at(0), backend) == eval(env, g.args.at(1), backend);
    case Guard::Kind::And:
        return std::all_of(g.subs.begin(), g.subs.end(),
                           [&](const GuardPtr& s) { return holds(env, *s, backend); });
    case Guard::Kind::Or:
        return std::any_of(g.subs.begin(), g.subs.end(),
                           [&](const GuardPtr& s) { return holds(env, *s, backend); });
    case Guard::Kind::Not:
        return !holds(env, *g.subs.at(0), backend);
    }
    return false;
}

TermPtr instantiate(const ProcessEnvironment& env, const Call& c, const Backend& backend)
{
    auto it = env.definitions.find(c.name);
    if (it == env.definitions.end())
        throw SpecificationError("unknown process '" + c.name + "'");
    const auto& def = it->second;
    if (def.params.size() != c.args.size())
        throw SpecificationError("process '" + c.name + "' called with wrong arity");
    Bindings b;
    for (std::size_t i = 0; i < def.params.size(); ++i)
        b[def.params[i]] = eval(env, c.args[i], backend);
    return subst(def.body, b);
}

// Resolve conditionals and calls until the term starts with a prefix,
// choice, parallel, STOP or SKIP.
TermPtr head(const ProcessEnvironment& env, TermPtr t, const Backend& backend)
{
    for (int guard = 0; guard < 10'000; ++guard) {
        if (const auto* c = std::get_if<Conditional>(&t->node))
            t = holds(env, *c->guard, backend) ? c->then_branch : c->else_branch;
        else if (const auto* call = std::get_if<Call>(&t->node))
            t = instantiate(env, *call, backend);
        else
            return t;
    }
    throw SpecificationError("unguarded recursion while unfolding a term");
}

const Values& domain_values(const ProcessEnvironment& env, const std::string& name)
{
    auto it = env.domains.find(name);
    if (it == env.domains.end())
        throw SpecificationError("unknown domain '" + name + "'");
    return it->second;
}

void expand(const ProcessEnvironment& env, const EventPattern& p, const Backend& backend,
            std::size_t index, Values& current, std::set<Event>& out)
{
    if (index == p.fields.size()) {
        out.insert(Event{p.name, current});
        return;
    }
    const Field& f = p.fields[index];
    if (f.kind == Field::Kind::Output) {
        current.push_back(eval(env, f.value, backend));
        expand(env, p, backend, index + 1, current, out);
        current.pop_back();
        return;
    }
    for (const auto& v : domain_values(env, f.domain)) {
        current.push_back(v);
        expand(env, p, backend, index + 1, current, out);
        current.pop_back();
    }
}

std::optional<Transition> engage(const ProcessEnvironment& env, const Prefix& p, const Event& e,
                                 const Backend& backend)
{
    if (p.event.name != e.name || p.event.fields.size() != e.fields.size())
        return std::nullopt;
    Bindings b;
    for (std::size_t i = 0; i < e.fields.size(); ++i) {
        const Field& f = p.event.fields[i];
        if (f.kind == Field::Kind::Output) {
            if (eval(env, f.value, backend) != e.fields[i])
                return std::nullopt;
        } else {
            const auto& dom = domain_values(env, f.domain);
            if (std::find(dom.begin(), dom.end(), e.fields[i]) == dom.end())
                return std::nullopt;
            b[f.var] = e.fields[i];
        }
    }
    Backend next = backend;
    if (p.effect) {
        auto it = env.effects.find(p.effect->name);
        if (it == env.effects.end())
            throw SpecificationError("unknown effect '" + p.effect->name + "'");
        Values args;
        for (const auto& a : p.effect->args)
            args.push_back(eval(env, subst(a, b), backend));
        next = it->second(args, backend);
    }
    return Transition{subst(p.next, b), std::move(next)};
}

}  // namespace

// ---------------------------------------------------------------------------

std::set<Event> initials(const ProcessEnvironment& env, const TermPtr& term,
                         const Backend& backend)
{
    TermPtr t = head(env, term, backend);
    std::set<Event> out;
    if (const auto* p = std::get_if<Prefix>(&t->node)) {
        Values current;
        expand(env, p->event, backend, 0, current, out);
    } else if (const auto* c = std::get_if<ExternalChoice>(&t->node)) {
        for (const auto& o : c->options) {
            auto sub = initials(env, o, backend);
            out.insert(sub.begin(), sub.end());
        }
    } else if (const auto* par = std::get_if<Parallel>(&t->node)) {
        auto l = initials(env, par->left, backend);
        auto r = initials(env, par->right, backend);
        for (const auto& e : l)
            if (!par->sync.contains(e.name) || r.contains(e))
                out.insert(e);
        for (const auto& e : r)
            if (!par->sync.contains(e.name))
                out.insert(e);
    }
    return out;  // STOP and SKIP engage in nothing
}

std::optional<Transition> after(const ProcessEnvironment& env, const TermPtr& term,
                                const Event& e, const Backend& backend)
{
    TermPtr t = head(env, term, backend);
    if (const auto* p = std::get_if<Prefix>(&t->node))
        return engage(env, *p, e, backend);
    if (const auto* c = std::get_if<ExternalChoice>(&t->node)) {
        // the environment picks the first branch offering e
        for (const auto& o : c->options)
            if (auto tr = after(env, o, e, backend))
                return tr;
        return std::nullopt;
    }
    if (const auto* par = std::get_if<Parallel>(&t->node)) {
        if (par->sync.contains(e.name)) {
            auto l = after(env, par->left, e, backend);
            if (!l)
                return std::nullopt;
            auto r = after(env, par->right, e, l->backend);
            if (!r)
                return std::nullopt;
            return Transition{ProcessTerm::make(Parallel{l->next, r->next, par->sync}),
                              std::move(r->backend)};
        }
        if (auto l = after(env, par->left, e, backend))
            return Transition{ProcessTerm::make(Parallel{l->next, par->right, par->sync}),
                              std::move(l->backend)};
        if (auto r = after(env, par->right, e, backend))
            return Transition{ProcessTerm::make(Parallel{par->left, r->next, par->sync}),
                              std::move(r->backend)};
    }
    return std::nullopt;
}

TermPtr compose(const ProcessEnvironment&, const TermPtr& p, const TermPtr& q,
                std::set<std::string> sync)
{
    return ProcessTerm::make(Parallel{p, q, std::move(sync)});
}

namespace {

void explore(const ProcessEnvironment& env, const TermPtr& t, const Backend& backend, int depth,
             Trace& trace, Enumeration& out, std::size_t budget)
{
    if (++out.nodes > budget)
        throw StateSpaceExceeded("trace enumeration exceeded " + std::to_string(budget) +
                                 " nodes");
    out.traces.insert(trace);
    if (static_cast<int>(trace.size()) == depth)
        return;
    for (const auto& e : initials(env, t, backend)) {
        auto tr = after(env, t, e, backend);
        if (!tr)
            continue;
        trace.push_back(e);
        explore(env, tr->next, tr->backend, depth, trace, out, budget);
        trace.pop_back();
    }
}

}  // namespace

Enumeration enumerate_traces(const ProcessEnvironment& env, const TermPtr& term,
                             const Backend& backend, int depth, std::size_t nodeBudget)
{
    if (depth < 1 || depth > kMaxTraceDepth)
        throw std::invalid_argument("trace depth must be within 1.." +
                                    std::to_string(kMaxTraceDepth));
    Enumeration out;
    Trace trace;
    explore(env, term, backend, depth, trace, out, nodeBudget);
    return out;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

struct Checker {
    const ProcessEnvironment& env;
    std::string where;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw SpecificationError(where + ": " + what);
    }

    void expr(const ExprPtr& e, const std::set<std::string>& scope) const
    {
        switch (e->kind) {
        case Expr::Kind::Literal:
            return;
        case Expr::Kind::Var:
            if (!scope.contains(e->text))
                fail("free variable '" + e->text + "'");
            return;
        case Expr::Kind::Apply:
            if (!env.functions.contains(e->text))
                fail("unknown function '" + e->text + "'");
            for (const auto& a : e->args)
                expr(a, scope);
            return;
        }
    }

    void guard(const Guard& g, const std::set<std::string>& scope) const
    {
        switch (g.kind) {
        case Guard::Kind::Predicate:
            if (!env.predicates.contains(g.name))
                fail("unknown predicate '" + g.name + "'");
            break;
        case Guard::Kind::Eq:
            if (g.args.size() != 2)
                fail("eq takes two arguments");
            break;
        case Guard::Kind::Not:
            if (g.subs.size() != 1)
                fail("not takes one argument");
            break;
        default:
            break;
        }
        for (const auto& a : g.args)
            expr(a, scope);
        for (const auto& s : g.subs)
            guard(*s, scope);
    }

    void term(const TermPtr& t, const std::set<std::string>& scope) const
    {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Prefix>) {
                    auto inner = scope;
                    for (const auto& f : n.event.fields) {
                        if (f.kind == Field::Kind::Output) {
                            expr(f.value, scope);
                        } else {
                            if (!env.domains.contains(f.domain))
                                fail("unknown domain '" + f.domain + "'");
                            inner.insert(f.var);
                        }
                    }
                    if (n.effect) {
                        if (!env.effects.contains(n.effect->name))
                            fail("unknown effect '" + n.effect->name + "'");
                        for (const auto& a : n.effect->args)
                            expr(a, inner);
                    }
                    term(n.next, inner);
                } else if constexpr (std::is_same_v<T, ExternalChoice>) {
                    for (const auto& o : n.options)
                        term(o, scope);
                } else if constexpr (std::is_same_v<T, Conditional>) {
                    guard(*n.guard, scope);
                    term(n.then_branch, scope);
                    term(n.else_branch, scope);
                } else if constexpr (std::is_same_v<T, Call>) {
                    auto it = env.definitions.find(n.name);
                    if (it == env.definitions.end())
                        fail("call to undefined process '" + n.name + "'");
                    if (it->second.params.size() != n.args.size())
                        fail("process '" + n.name + "' called with wrong arity");
                    for (const auto& a : n.args)
                        expr(a, scope);
                } else if constexpr (std::is_same_v<T, Parallel>) {
                    term(n.left, scope);
                    term(n.right, scope);
                }
            },
            t->node);
    }
};

// Calls reachable from t without passing through a prefix.
void unguarded_calls(const TermPtr& t, std::set<std::string>& out)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, ExternalChoice>) {
                for (const auto& o : n.options)
                    unguarded_calls(o, out);
            } else if constexpr (std::is_same_v<T, Conditional>) {
                unguarded_calls(n.then_branch, out);
                unguarded_calls(n.else_branch, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, Parallel>) {
                unguarded_calls(n.left, out);
                unguarded_calls(n.right, out);
            }
        },
        t->node);
}

}  // namespace

void ProcessEnvironment::validate() const
{
    for (const auto& [name, def] : definitions) {
        Checker c{*this, "process '" + name + "'"};
        std::set<std::string> scope(def.params.begin(), def.params.end());
        if (scope.size() != def.params.size())
            c.fail("duplicate parameter");
        c.term(def.body, scope);
    }

    std::map<std::string, std::set<std::string>> edges;
    for (const auto& [name, def] : definitions)
        unguarded_calls(def.body, edges[name]);

    // colour-marking DFS for cycles in the unguarded-call graph
    std::map<std::string, int> colour;
    std::function<void(const std::string&)> visit = [&](const std::string& n) {
        colour[n] = 1;
        for (const auto& m : edges[n]) {
            if (colour[m] == 1)
                throw SpecificationError("process '" + m +
                                         "' recurses without an intervening prefix");
            if (colour[m] == 0)
                visit(m);
        }
        colour[n] = 2;
    };
    for (const auto& [name, _] : definitions)
        if (colour[name] == 0)
            visit(name);
}

TermPtr ProcessEnvironment::call(const std::string& name, Values args) const
{
    std::vector<ExprPtr> exprs;
    for (auto& a : args)
        exprs.push_back(Expr::literal(std::move(a)));
    return ProcessTerm::make(Call{name, std::move(exprs)});
}

}  // namespace acd::model
