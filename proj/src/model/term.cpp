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

#include "acd/model/term.hpp"

#include <sstream>

namespace acd::model {

std::string Event::str() const
{
    std::string out = name;
    if (!fields.empty()) {
        out += "(";
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                out += ",";
            out += fields[i];
        }
        out += ")";
    }
    return out;
}

ExprPtr Expr::literal(Value v)
{
    return std::make_shared<const Expr>(Expr{Kind::Literal, std::move(v), {}});
}

ExprPtr Expr::var(std::string name)
{
    return std::make_shared<const Expr>(Expr{Kind::Var, std::move(name), {}});
}

ExprPtr Expr::apply(std::string fn, std::vector<ExprPtr> args)
{
    return std::make_shared<const Expr>(Expr{Kind::Apply, std::move(fn), std::move(args)});
}

TermPtr ProcessTerm::make(Prefix p)
{
    return std::make_shared<const ProcessTerm>(ProcessTerm{std::move(p)});
}
TermPtr ProcessTerm::make(ExternalChoice c)
{
    return std::make_shared<const ProcessTerm>(ProcessTerm{std::move(c)});
}
TermPtr ProcessTerm::make(Conditional c)
{
    return std::make_shared<const ProcessTerm>(ProcessTerm{std::move(c)});
}
TermPtr ProcessTerm::make(Call c)
{
    return std::make_shared<const ProcessTerm>(ProcessTerm{std::move(c)});
}
TermPtr ProcessTerm::make(Parallel p)
{
    return std::make_shared<const ProcessTerm>(ProcessTerm{std::move(p)});
}
TermPtr ProcessTerm::stop()
{
    static const TermPtr kStop = std::make_shared<const ProcessTerm>(ProcessTerm{Stop{}});
    return kStop;
}
TermPtr ProcessTerm::skip()
{
    static const TermPtr kSkip = std::make_shared<const ProcessTerm>(ProcessTerm{Skip{}});
    return kSkip;
}

namespace {

void quote(std::ostream& os, const std::string& s)
{
    os << '"';
    for (char c : s) {
        if (c == '"' || c == '\\')
            os << '\\';
        os << c;
    }
    os << '"';
}

void render_expr(std::ostream& os, const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::Literal:
        quote(os, e.text);
        break;
    case Expr::Kind::Var:
        os << e.text;
        break;
    case Expr::Kind::Apply:
        os << '(' << e.text;
        for (const auto& a : e.args) {
            os << ' ';
            render_expr(os, *a);
        }
        os << ')';
        break;
    }
}

void render_guard(std::ostream& os, const Guard& g)
{
    switch (g.kind) {
    case Guard::Kind::Predicate:
    case Guard::Kind::Eq:
        os << '(' << (g.kind == Guard::Kind::Eq ? "eq" : g.name);
        for (const auto& a : g.args) {
            os << ' ';
            render_expr(os, *a);
        }
        os << ')';
        break;
    case Guard::Kind::And:
    case Guard::Kind::Or:
    case Guard::Kind::Not:
        os << '('
           << (g.kind == Guard::Kind::And ? "and" : g.kind == Guard::Kind::Or ? "or" : "not");
        for (const auto& s : g.subs) {
            os << ' ';
            render_guard(os, *s);
        }
        os << ')';
        break;
    }
}

void render_term(std::ostream& os, const ProcessTerm& t)
{
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Prefix>) {
                os << "(prefix (event " << n.event.name;
                for (const auto& f : n.event.fields) {
                    os << ' ';
                    if (f.kind == Field::Kind::Input)
                        os << "(? " << f.var << ' ' << f.domain << ')';
                    else
                        render_expr(os, *f.value);
                }
                os << ')';
                if (n.effect) {
                    os << " (effect " << n.effect->name;
                    for (const auto& a : n.effect->args) {
                        os << ' ';
                        render_expr(os, *a);
                    }
                    os << ')';
                }
                os << ' ';
                render_term(os, *n.next);
                os << ')';
            } else if constexpr (std::is_same_v<T, ExternalChoice>) {
                os << "(choice";
                for (const auto& o : n.options) {
                    os << ' ';
                    render_term(os, *o);
                }
                os << ')';
            } else if constexpr (std::is_same_v<T, Conditional>) {
                os << "(if ";
                render_guard(os, *n.guard);
                os << ' ';
                render_term(os, *n.then_branch);
                os << ' ';
                render_term(os, *n.else_branch);
                os << ')';
            } else if constexpr (std::is_same_v<T, Call>) {
                os << "(call " << n.name;
                for (const auto& a : n.args) {
                    os << ' ';
                    render_expr(os, *a);
                }
                os << ')';
            } else if constexpr (std::is_same_v<T, Stop>) {
                os << "STOP";
            } else if constexpr (std::is_same_v<T, Skip>) {
                os << "SKIP";
            } else {
                os << "(parallel ";
                render_term(os, *n.left);
                os << ' ';
                render_term(os, *n.right);
                os << " (sync";
                for (const auto& s : n.sync)
                    os << ' ' << s;
                os << "))";
            }
        },
        t.node);
}

}  // namespace

std::string render(const ProcessTerm& t)
{
    std::ostringstream os;
    render_term(os, t);
    return os.str();
}

}  // namespace acd::model
