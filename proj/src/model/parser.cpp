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

#include "acd/model/parser.hpp"

#include <fstream>
#include <sstream>

namespace acd::model {

namespace {

struct SExpr {
    enum class Kind { Symbol, String, List };
    Kind kind = Kind::Symbol;
    std::string text;
    std::vector<SExpr> items;
    int line = 0;

    bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
};

class Reader {
public:
    explicit Reader(std::string_view src) : src_(src) {}

    bool at_end()
    {
        skip_space();
        return pos_ >= src_.size();
    }

    SExpr read()
    {
        skip_space();
        if (pos_ >= src_.size())
            error("unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            SExpr list{SExpr::Kind::List, {}, {}, line_};
            ++pos_;
            for (;;) {
                skip_space();
                if (pos_ >= src_.size())
                    error("unterminated list opened on line " + std::to_string(list.line));
                if (src_[pos_] == ')') {
                    ++pos_;
                    return list;
                }
                list.items.push_back(read());
            }
        }
        if (c == ')')
            error("unexpected ')'");
        if (c == '"')
            return read_string();
        SExpr sym{SExpr::Kind::Symbol, {}, {}, line_};
        while (pos_ < src_.size() && !is_delimiter(src_[pos_]))
            sym.text.push_back(src_[pos_++]);
        return sym;
    }

    [[noreturn]] void error(const std::string& what) const
    {
        throw SpecificationError("line " + std::to_string(line_) + ": " + what);
    }

private:
    static bool is_delimiter(char c)
    {
        return c == '(' || c == ')' || c == '"' || c == ';' || c == ' ' || c == '\t' ||
               c == '\n' || c == '\r';
    }

    void skip_space()
    {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\n') {
                ++line_;
                ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\r') {
                ++pos_;
            } else if (c == ';') {
                while (pos_ < src_.size() && src_[pos_] != '\n')
                    ++pos_;
            } else {
                return;
            }
        }
    }

    SExpr read_string()
    {
        SExpr s{SExpr::Kind::String, {}, {}, line_};
        ++pos_;  // opening quote
        while (pos_ < src_.size() && src_[pos_] != '"') {
            char c = src_[pos_++];
            if (c == '\n')
                error("newline inside string literal");
            if (c == '\\') {
                if (pos_ >= src_.size() || (src_[pos_] != '"' && src_[pos_] != '\\'))
                    error("unsupported escape in string literal");
                c = src_[pos_++];
            }
            s.text.push_back(c);
        }
        if (pos_ >= src_.size())
            error("unterminated string literal");
        ++pos_;
        return s;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

[[noreturn]] void bad(const SExpr& at, const std::string& what)
{
    throw SpecificationError("line " + std::to_string(at.line) + ": " + what);
}

const std::string& symbol(const SExpr& e, const char* what)
{
    if (e.kind != SExpr::Kind::Symbol)
        bad(e, std::string("expected ") + what);
    return e.text;
}

const std::string& head_of(const SExpr& e)
{
    if (e.kind != SExpr::Kind::List || e.items.empty() || e.items[0].kind != SExpr::Kind::Symbol)
        bad(e, "expected a form starting with a symbol");
    return e.items[0].text;
}

ExprPtr to_expr(const SExpr& e)
{
    switch (e.kind) {
    case SExpr::Kind::String:
        return Expr::literal(e.text);
    case SExpr::Kind::Symbol:
        return Expr::var(e.text);
    case SExpr::Kind::List: {
        const auto& fn = head_of(e);
        std::vector<ExprPtr> args;
        for (std::size_t i = 1; i < e.items.size(); ++i)
            args.push_back(to_expr(e.items[i]));
        return Expr::apply(fn, std::move(args));
    }
    }
    return nullptr;
}

GuardPtr to_guard(const SExpr& e)
{
    const auto& h = head_of(e);
    Guard g;
    if (h == "and" || h == "or" || h == "not") {
        g.kind = h == "and" ? Guard::Kind::And : h == "or" ? Guard::Kind::Or : Guard::Kind::Not;
        if (e.items.size() < 2 || (g.kind == Guard::Kind::Not && e.items.size() != 2))
            bad(e, "malformed '" + h + "'");
        for (std::size_t i = 1; i < e.items.size(); ++i)
            g.subs.push_back(to_guard(e.items[i]));
    } else {
        g.kind = h == "eq" ? Guard::Kind::Eq : Guard::Kind::Predicate;
        g.name = h;
        if (g.kind == Guard::Kind::Eq && e.items.size() != 3)
            bad(e, "eq takes two arguments");
        for (std::size_t i = 1; i < e.items.size(); ++i)
            g.args.push_back(to_expr(e.items[i]));
    }
    return std::make_shared<const Guard>(std::move(g));
}

EventPattern to_event(const SExpr& e)
{
    if (head_of(e) != "event" || e.items.size() < 2)
        bad(e, "expected (event NAME field*)");
    EventPattern p;
    p.name = symbol(e.items[1], "event name");
    for (std::size_t i = 2; i < e.items.size(); ++i) {
        const SExpr& f = e.items[i];
        if (f.kind == SExpr::Kind::List && !f.items.empty() && f.items[0].is_symbol("?")) {
            if (f.items.size() != 3)
                bad(f, "expected (? var DOMAIN)");
            p.fields.push_back(Field{Field::Kind::Input, nullptr, symbol(f.items[1], "variable"),
                                     symbol(f.items[2], "domain name")});
        } else {
            p.fields.push_back(Field{Field::Kind::Output, to_expr(f), {}, {}});
        }
    }
    return p;
}

TermPtr to_term(const SExpr& e)
{
    if (e.is_symbol("STOP"))
        return ProcessTerm::stop();
    if (e.is_symbol("SKIP"))
        return ProcessTerm::skip();
    const auto& h = head_of(e);
    if (h == "prefix") {
        if (e.items.size() != 3 && e.items.size() != 4)
            bad(e, "expected (prefix event [effect] term)");
        Prefix p;
        p.event = to_event(e.items[1]);
        if (e.items.size() == 4) {
            const SExpr& eff = e.items[2];
            if (head_of(eff) != "effect" || eff.items.size() < 2)
                bad(eff, "expected (effect NAME expr*)");
            EffectCall c{symbol(eff.items[1], "effect name"), {}};
            for (std::size_t i = 2; i < eff.items.size(); ++i)
                c.args.push_back(to_expr(eff.items[i]));
            p.effect = std::move(c);
        }
        p.next = to_term(e.items.back());
        return ProcessTerm::make(std::move(p));
    }
    if (h == "choice") {
        if (e.items.size() < 2)
            bad(e, "choice needs at least one branch");
        ExternalChoice c;
        for (std::size_t i = 1; i < e.items.size(); ++i)
            c.options.push_back(to_term(e.items[i]));
        return ProcessTerm::make(std::move(c));
    }
    if (h == "if") {
        if (e.items.size() != 4)
            bad(e, "expected (if guard then else)");
        return ProcessTerm::make(
            Conditional{to_guard(e.items[1]), to_term(e.items[2]), to_term(e.items[3])});
    }
    if (h == "call") {
        if (e.items.size() < 2)
            bad(e, "expected (call NAME expr*)");
        Call c{symbol(e.items[1], "process name"), {}};
        for (std::size_t i = 2; i < e.items.size(); ++i)
            c.args.push_back(to_expr(e.items[i]));
        return ProcessTerm::make(std::move(c));
    }
    if (h == "parallel") {
        if (e.items.size() != 4 || head_of(e.items[3]) != "sync")
            bad(e, "expected (parallel term term (sync NAME*))");
        std::set<std::string> sync;
        const auto& s = e.items[3];
        for (std::size_t i = 1; i < s.items.size(); ++i)
            sync.insert(symbol(s.items[i], "channel name"));
        return ProcessTerm::make(Parallel{to_term(e.items[1]), to_term(e.items[2]), std::move(sync)});
    }
    bad(e, "unknown term form '" + h + "'");
}

}  // namespace

ProcessEnvironment parse_processes(std::string_view text)
{
    ProcessEnvironment env;
    Reader reader(text);
    while (!reader.at_end()) {
        SExpr form = reader.read();
        const auto& h = head_of(form);
        if (h == "domain") {
            if (form.items.size() < 2)
                bad(form, "expected (domain NAME \"value\"*)");
            const auto& name = symbol(form.items[1], "domain name");
            if (env.domains.contains(name))
                bad(form, "duplicate domain '" + name + "'");
            Values values;
            for (std::size_t i = 2; i < form.items.size(); ++i) {
                if (form.items[i].kind != SExpr::Kind::String)
                    bad(form.items[i], "domain values must be string literals");
                values.push_back(form.items[i].text);
            }
            env.domains.emplace(name, std::move(values));
        } else if (h == "define") {
            if (form.items.size() != 3 || form.items[1].kind != SExpr::Kind::List ||
                form.items[1].items.empty())
                bad(form, "expected (define (NAME param*) term)");
            const auto& sig = form.items[1];
            const auto& name = symbol(sig.items[0], "process name");
            if (env.definitions.contains(name))
                bad(form, "duplicate definition of '" + name + "'");
            ProcessEnvironment::Definition def;
            for (std::size_t i = 1; i < sig.items.size(); ++i)
                def.params.push_back(symbol(sig.items[i], "parameter name"));
            def.body = to_term(form.items[2]);
            env.definitions.emplace(name, std::move(def));
        } else {
            bad(form, "unknown top-level form '" + h + "'");
        }
    }
    return env;
}

ProcessEnvironment parse_process_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw SpecificationError("cannot read process file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_processes(ss.str());
    } catch (const SpecificationError& e) {
        throw SpecificationError(path.filename().string() + ": " + e.what());
    }
}

TermPtr parse_term(std::string_view text)
{
    Reader reader(text);
    SExpr e = reader.read();
    if (!reader.at_end())
        reader.error("trailing input after term");
    return to_term(e);
}

}  // namespace acd::model
