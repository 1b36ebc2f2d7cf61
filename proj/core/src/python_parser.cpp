// SPDX-License-Identifier: Apache-2.0
#include "python_parser.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <initializer_list>
#include <set>
#include <string>

#include "restfix/errors.hpp"
#include "restfix/scalar.hpp"
#include "python_tokenizer.hpp"

namespace restfix {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Module: return "Module";
        case NodeKind::FunctionDef: return "FunctionDef";
        case NodeKind::Assign: return "Assign";
        case NodeKind::ExprStmt: return "ExprStmt";
        case NodeKind::Return: return "Return";
        case NodeKind::OpaqueStmt: return "OpaqueStmt";
        case NodeKind::Call: return "Call";
        case NodeKind::Name: return "Name";
        case NodeKind::Attribute: return "Attribute";
        case NodeKind::BinOpAdd: return "BinOpAdd";
        case NodeKind::StringLit: return "StringLit";
        case NodeKind::FString: return "FString";
        case NodeKind::FStringText: return "FStringText";
        case NodeKind::NumberLit: return "NumberLit";
        case NodeKind::BoolLit: return "BoolLit";
        case NodeKind::NoneLit: return "NoneLit";
        case NodeKind::Dict: return "Dict";
        case NodeKind::DictEntry: return "DictEntry";
        case NodeKind::DictSpread: return "DictSpread";
        case NodeKind::DictMerge: return "DictMerge";
        case NodeKind::OpaqueExpr: return "OpaqueExpr";
    }
    return "?";
}

}  // namespace restfix

namespace restfix::detail {

namespace {

using TK = Token::Kind;

const std::set<std::string, std::less<>> kCompoundKw = {
    "if", "elif", "else", "while", "for", "with", "try", "except", "finally", "class",
};
const std::set<std::string, std::less<>> kBareKw = {
    "import", "from", "pass", "break", "continue", "global", "nonlocal",
};
const std::set<std::string, std::less<>> kExprStmtKw = {"del", "raise", "assert"};
const std::set<std::string, std::less<>> kNonStarterKw = {
    "as", "in", "if", "else", "elif", "for", "and", "or", "is",
    "import", "from", "pass", "break", "continue", "global", "nonlocal",
    "def", "class", "while", "try", "except", "finally", "return",
};

std::string canonical_number(const std::string& raw_text) {
    std::string raw;
    raw.reserve(raw_text.size());
    for (char c : raw_text) {
        if (c != '_') raw.push_back(c);
    }
    if (!raw.empty() && (raw.back() == 'j' || raw.back() == 'J')) return raw;  // imaginary, kept opaque
    int base = 10;
    std::size_t skip = 0;
    if (raw.size() > 2 && raw[0] == '0') {
        char p = static_cast<char>(std::tolower(static_cast<unsigned char>(raw[1])));
        if (p == 'x') base = 16, skip = 2;
        else if (p == 'o') base = 8, skip = 2;
        else if (p == 'b') base = 2, skip = 2;
    }
    bool floaty = base == 10 && (raw.find('.') != std::string::npos ||
                                 raw.find('e') != std::string::npos ||
                                 raw.find('E') != std::string::npos);
    if (!floaty) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(raw.data() + skip, raw.data() + raw.size(), v, base);
        if (ec == std::errc{} && ptr == raw.data() + raw.size()) return std::to_string(v);
    }
    double d = std::strtod(raw.c_str(), nullptr);
    return canonical_double(d);
}

struct Parser {
    std::string_view src;
    const std::vector<Token>& t;
    std::vector<SyntaxNode>& arena;
    std::size_t p = 0;

    const Token& cur() const { return t[p]; }
    const Token& peek(std::size_t ahead) const {
        std::size_t i = p + ahead;
        return i < t.size() ? t[i] : t.back();
    }
    void next() {
        if (p + 1 < t.size()) ++p;
    }
    bool is_op(std::string_view s) const { return cur().kind == TK::Op && cur().text == s; }
    bool is_kw(std::string_view s) const { return cur().kind == TK::Name && cur().text == s; }
    bool at_end() const { return cur().kind == TK::End; }

    int add(NodeKind kind, std::string text = {}) {
        SyntaxNode n;
        n.kind = kind;
        n.text = std::move(text);
        arena.push_back(std::move(n));
        return static_cast<int>(arena.size() - 1);
    }

    // Sets the node span to cover tokens [first, p), skipping layout tokens
    // at the tail.
    void cover(int node, std::size_t first) {
        std::size_t last = p;
        while (last > first) {
            TK k = t[last - 1].kind;
            if (k == TK::Newline || k == TK::Indent || k == TK::Dedent || k == TK::End) {
                --last;
            } else {
                break;
            }
        }
        if (last == first) last = first + 1;
        const Token& a = t[first];
        const Token& b = t[last - 1];
        SyntaxNode& n = arena[node];
        n.span = Span{a.line, a.col, b.end_line, b.end_col};
        n.begin = a.begin;
        n.end = b.end;
    }

    bool can_start_expression() const {
        const Token& c = cur();
        switch (c.kind) {
            case TK::Number:
            case TK::String:
            case TK::FString:
                return true;
            case TK::Name:
                return kNonStarterKw.count(c.text) == 0;
            case TK::Op:
                return c.text == "(" || c.text == "[" || c.text == "{" || c.text == "-" ||
                       c.text == "+" || c.text == "~" || c.text == "*" || c.text == "**";
            default:
                return false;
        }
    }

    void skip_to_line_end() {
        while (!at_end() && cur().kind != TK::Newline && cur().kind != TK::Dedent) next();
        if (cur().kind == TK::Newline) next();
    }

    // Greedy expression salvage: parse what looks like expressions, skip the
    // rest, stop at line end or any of the stop operators at bracket depth 0.
    void tolerant_scan(std::vector<int>& out, std::initializer_list<std::string_view> stops) {
        int depth = 0;
        while (!at_end()) {
            TK k = cur().kind;
            if (k == TK::Newline || k == TK::Dedent || k == TK::Indent) return;
            if (k == TK::Op && depth == 0) {
                for (auto s : stops) {
                    if (cur().text == s) return;
                }
            }
            if (can_start_expression()) {
                out.push_back(parse_expression());
                continue;
            }
            if (k == TK::Op) {
                if (cur().text == "(" || cur().text == "[" || cur().text == "{") ++depth;
                if (cur().text == ")" || cur().text == "]" || cur().text == "}") {
                    if (depth == 0) return;
                    --depth;
                }
            }
            next();
        }
    }

    // ---- expressions -------------------------------------------------

    int parse_expression() {
        if (is_kw("lambda")) return parse_lambda();
        if (is_kw("yield") || is_kw("await") || is_kw("not")) return parse_not();
        std::size_t first = p;
        int e = parse_or();
        if (is_kw("if")) {
            next();
            int cond = parse_or();
            int els = -1;
            if (is_kw("else")) {
                next();
                els = parse_expression();
            }
            int n = add(NodeKind::OpaqueExpr, "ifexp");
            arena[n].children = els >= 0 ? std::vector<int>{e, cond, els} : std::vector<int>{e, cond};
            cover(n, first);
            return n;
        }
        return e;
    }

    int parse_lambda() {
        std::size_t first = p;
        next();  // lambda
        int depth = 0;
        while (!at_end() && cur().kind != TK::Newline) {
            if (cur().kind == TK::Op) {
                if (cur().text == "(" || cur().text == "[" || cur().text == "{") ++depth;
                else if (cur().text == ")" || cur().text == "]" || cur().text == "}") {
                    if (depth == 0) break;
                    --depth;
                } else if (cur().text == ":" && depth == 0) {
                    next();
                    break;
                }
            }
            next();
        }
        int body = can_start_expression() ? parse_expression() : -1;
        int n = add(NodeKind::OpaqueExpr, "lambda");
        if (body >= 0) arena[n].children.push_back(body);
        cover(n, first);
        return n;
    }

    int parse_or() {
        std::size_t first = p;
        int l = parse_and();
        while (is_kw("or")) {
            next();
            int r = parse_and();
            int n = add(NodeKind::OpaqueExpr, "or");
            arena[n].children = {l, r};
            cover(n, first);
            l = n;
        }
        return l;
    }

    int parse_and() {
        std::size_t first = p;
        int l = parse_not();
        while (is_kw("and")) {
            next();
            int r = parse_not();
            int n = add(NodeKind::OpaqueExpr, "and");
            arena[n].children = {l, r};
            cover(n, first);
            l = n;
        }
        return l;
    }

    int parse_not() {
        if (is_kw("not")) {
            std::size_t first = p;
            next();
            int e = parse_not();
            int n = add(NodeKind::OpaqueExpr, "not");
            arena[n].children = {e};
            cover(n, first);
            return n;
        }
        if (is_kw("yield") || is_kw("await")) {
            std::size_t first = p;
            std::string kw = cur().text;
            next();
            if (is_kw("from")) next();
            int e = can_start_expression() ? parse_expression() : -1;
            int n = add(NodeKind::OpaqueExpr, kw);
            if (e >= 0) arena[n].children.push_back(e);
            cover(n, first);
            return n;
        }
        return parse_comparison();
    }

    bool at_comparison_op() const {
        if (cur().kind == TK::Op) {
            const std::string& s = cur().text;
            return s == "==" || s == "!=" || s == "<" || s == ">" || s == "<=" || s == ">=";
        }
        if (cur().kind == TK::Name) {
            if (cur().text == "in" || cur().text == "is") return true;
            if (cur().text == "not" && peek(1).kind == TK::Name && peek(1).text == "in") return true;
        }
        return false;
    }

    int parse_comparison() {
        std::size_t first = p;
        int l = parse_additive();
        while (at_comparison_op()) {
            std::string op = cur().text;
            next();
            if ((op == "not" && is_kw("in")) || (op == "is" && is_kw("not"))) next();
            int r = parse_additive();
            int n = add(NodeKind::OpaqueExpr, "cmp:" + op);
            arena[n].children = {l, r};
            cover(n, first);
            l = n;
        }
        return l;
    }

    int parse_additive() {
        std::size_t first = p;
        int l = parse_term();
        while (is_op("+") || is_op("-")) {
            bool plus = cur().text == "+";
            next();
            int r = parse_term();
            int n = add(plus ? NodeKind::BinOpAdd : NodeKind::OpaqueExpr, plus ? "" : "-");
            arena[n].children = {l, r};
            cover(n, first);
            l = n;
        }
        return l;
    }

    int parse_term() {
        std::size_t first = p;
        int l = parse_unary();
        while (is_op("*") || is_op("/") || is_op("//") || is_op("%") || is_op("@")) {
            std::string op = cur().text;
            next();
            int r = parse_unary();
            int n = add(NodeKind::OpaqueExpr, op);
            arena[n].children = {l, r};
            cover(n, first);
            l = n;
        }
        return l;
    }

    int parse_unary() {
        if (is_op("-") || is_op("+") || is_op("~")) {
            std::size_t first = p;
            std::string op = cur().text;
            next();
            int e = parse_unary();
            if (op == "-" && arena[e].kind == NodeKind::NumberLit && arena[e].text[0] != '-') {
                arena[e].text.insert(arena[e].text.begin(), '-');
                cover(e, first);
                return e;
            }
            if (op == "+" && arena[e].kind == NodeKind::NumberLit) {
                cover(e, first);
                return e;
            }
            int n = add(NodeKind::OpaqueExpr, "unary" + op);
            arena[n].children = {e};
            cover(n, first);
            return n;
        }
        return parse_power();
    }

    int parse_power() {
        std::size_t first = p;
        int b = parse_postfix();
        if (is_op("**")) {
            next();
            int e = parse_unary();
            int n = add(NodeKind::OpaqueExpr, "**");
            arena[n].children = {b, e};
            cover(n, first);
            return n;
        }
        return b;
    }

    int parse_postfix() {
        std::size_t first = p;
        int e = parse_atom();
        for (;;) {
            if (is_op(".")) {
                next();
                std::string attr;
                if (cur().kind == TK::Name) {
                    attr = cur().text;
                    next();
                }
                int n = add(NodeKind::Attribute, attr);
                arena[n].children = {e};
                cover(n, first);
                e = n;
            } else if (is_op("(")) {
                e = parse_call(e, first);
            } else if (is_op("[")) {
                next();
                std::vector<int> sal{e};
                tolerant_scan(sal, {"]"});
                if (is_op("]")) next();
                int n = add(NodeKind::OpaqueExpr, "[]");
                arena[n].children = std::move(sal);
                cover(n, first);
                e = n;
            } else {
                break;
            }
        }
        return e;
    }

    int parse_call(int callee, std::size_t first) {
        next();  // (
        std::vector<int> children{callee};
        std::vector<std::string> labels{""};
        while (!at_end() && !is_op(")")) {
            if (cur().kind == TK::Newline) {  // defensive; joined inside parens
                next();
                continue;
            }
            std::string label;
            int arg = -1;
            if (is_op("**")) {
                next();
                label = "**";
                arg = parse_expression();
            } else if (is_op("*")) {
                next();
                label = "*";
                arg = parse_expression();
            } else if (cur().kind == TK::Name && peek(1).kind == TK::Op && peek(1).text == "=" &&
                       kNonStarterKw.count(cur().text) == 0) {
                label = cur().text;
                next();
                next();
                arg = parse_expression();
            } else if (can_start_expression()) {
                arg = parse_expression();
                if (is_kw("for")) {  // generator argument
                    std::vector<int> sal{arg};
                    tolerant_scan(sal, {")"});
                    int n = add(NodeKind::OpaqueExpr, "genexp");
                    arena[n].children = std::move(sal);
                    cover(n, first);
                    arg = n;
                }
            } else {
                next();
                continue;
            }
            children.push_back(arg);
            labels.push_back(std::move(label));
            if (is_op(",")) next();
        }
        if (is_op(")")) next();
        int n = add(NodeKind::Call);
        arena[n].children = std::move(children);
        arena[n].labels = std::move(labels);
        cover(n, first);
        return n;
    }

    int parse_atom() {
        std::size_t first = p;
        const Token& c = cur();
        switch (c.kind) {
            case TK::Number: {
                std::string canon = canonical_number(c.text);
                next();
                int n = add(NodeKind::NumberLit, std::move(canon));
                cover(n, first);
                return n;
            }
            case TK::String:
            case TK::FString:
                return parse_string_group();
            case TK::Name: {
                if (c.text == "True" || c.text == "False") {
                    bool v = c.text == "True";
                    next();
                    int n = add(NodeKind::BoolLit, v ? "true" : "false");
                    cover(n, first);
                    return n;
                }
                if (c.text == "None") {
                    next();
                    int n = add(NodeKind::NoneLit, "null");
                    cover(n, first);
                    return n;
                }
                if (c.text == "lambda") return parse_lambda();
                std::string name = c.text;
                next();
                int n = add(NodeKind::Name, std::move(name));
                cover(n, first);
                return n;
            }
            case TK::Op: {
                if (c.text == "(") return parse_parenthesized();
                if (c.text == "[") return parse_list();
                if (c.text == "{") return parse_braced();
                if (c.text == "*" || c.text == "**") {
                    std::string op = c.text;
                    next();
                    int e = can_start_expression() ? parse_expression() : -1;
                    int n = add(NodeKind::OpaqueExpr, "unpack" + op);
                    if (e >= 0) arena[n].children.push_back(e);
                    cover(n, first);
                    return n;
                }
                break;
            }
            default:
                break;
        }
        // Cannot make sense of this token; consume it as an opaque leaf.
        std::string text = c.text;
        next();
        int n = add(NodeKind::OpaqueExpr, std::move(text));
        cover(n, first);
        return n;
    }

    int parse_parenthesized() {
        std::size_t first = p;
        next();  // (
        if (is_op(")")) {
            next();
            int n = add(NodeKind::OpaqueExpr, "tuple");
            cover(n, first);
            return n;
        }
        int e = can_start_expression() ? parse_expression() : -1;
        if (e >= 0 && is_op(")")) {
            next();
            return e;
        }
        std::vector<int> sal;
        if (e >= 0) sal.push_back(e);
        std::string note = is_kw("for") ? "genexp" : "tuple";
        tolerant_scan(sal, {")"});
        if (is_op(")")) next();
        int n = add(NodeKind::OpaqueExpr, std::move(note));
        arena[n].children = std::move(sal);
        cover(n, first);
        return n;
    }

    int parse_list() {
        std::size_t first = p;
        next();  // [
        std::vector<int> sal;
        tolerant_scan(sal, {"]"});
        if (is_op("]")) next();
        int n = add(NodeKind::OpaqueExpr, "list");
        arena[n].children = std::move(sal);
        cover(n, first);
        return n;
    }

    int parse_braced() {
        std::size_t first = p;
        next();  // {
        std::vector<int> entries;
        bool is_dict = true;
        while (!at_end() && !is_op("}")) {
            std::size_t efirst = p;
            if (is_op("**")) {
                next();
                int e = parse_expression();
                int s = add(NodeKind::DictSpread);
                arena[s].children = {e};
                cover(s, efirst);
                entries.push_back(s);
            } else if (can_start_expression()) {
                int k = parse_expression();
                if (is_op(":")) {
                    next();
                    int v = parse_expression();
                    int en = add(NodeKind::DictEntry);
                    arena[en].children = {k, v};
                    cover(en, efirst);
                    entries.push_back(en);
                } else {
                    // set literal or comprehension
                    entries.push_back(k);
                    is_dict = false;
                    tolerant_scan(entries, {"}"});
                    break;
                }
            } else {
                next();
                continue;
            }
            if (is_kw("for")) {  // comprehension
                is_dict = false;
                tolerant_scan(entries, {"}"});
                break;
            }
            if (is_op(",")) next();
        }
        if (is_op("}")) next();
        int n = add(is_dict ? NodeKind::Dict : NodeKind::OpaqueExpr, is_dict ? "" : "set");
        arena[n].children = std::move(entries);
        cover(n, first);
        return n;
    }

    // Splits an f-string token into literal chunks and hole expressions.
    void split_fstring(const Token& tok, std::vector<int>& parts) {
        const bool raw = (tok.flags & Token::kRaw) != 0;
        const std::string& inner = tok.text;
        // Locate the body inside the source token: prefix letters, then the
        // opening quote run.
        std::size_t prefix = 0;
        while (tok.begin + prefix < src.size() &&
               std::isalpha(static_cast<unsigned char>(src[tok.begin + prefix]))) {
            ++prefix;
        }
        char q = src[tok.begin + prefix];
        int closers = (tok.begin + prefix + 2 < src.size() && src[tok.begin + prefix + 1] == q &&
                       src[tok.begin + prefix + 2] == q)
                          ? 3
                          : 1;
        std::size_t body_off = tok.begin + prefix + closers;
        int line = tok.line;
        int col = tok.col + static_cast<int>(prefix) + closers;

        std::string chunk;
        std::size_t chunk_begin = body_off;
        int chunk_line = line, chunk_col = col;
        auto flush_chunk = [&](std::size_t end_off, int end_line, int end_col) {
            if (chunk.empty()) return;
            int n = add(NodeKind::FStringText, raw ? chunk : decode_escapes(chunk));
            arena[n].span = Span{chunk_line, chunk_col, end_line, end_col};
            arena[n].begin = chunk_begin;
            arena[n].end = end_off;
            parts.push_back(n);
            chunk.clear();
        };
        std::size_t i = 0;
        auto step = [&](std::size_t n) {
            for (std::size_t k = 0; k < n; ++k) {
                if (inner[i + k] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            i += n;
        };
        while (i < inner.size()) {
            char ch = inner[i];
            if (ch == '{' && i + 1 < inner.size() && inner[i + 1] == '{') {
                chunk.push_back('{');
                step(2);
                continue;
            }
            if (ch == '}' && i + 1 < inner.size() && inner[i + 1] == '}') {
                chunk.push_back('}');
                step(2);
                continue;
            }
            if (ch == '\\' && i + 1 < inner.size()) {
                chunk.push_back(inner[i]);
                chunk.push_back(inner[i + 1]);
                step(2);
                continue;
            }
            if (ch != '{') {
                chunk.push_back(ch);
                step(1);
                continue;
            }
            flush_chunk(body_off + i, line, col);
            step(1);  // consume '{'
            std::size_t expr_start = i;
            int expr_line = line, expr_col = col;
            int depth = 0;
            char strq = 0;
            bool has_suffix = false;
            std::size_t expr_end = inner.size();
            while (i < inner.size()) {
                char hc = inner[i];
                if (strq != 0) {
                    if (hc == '\\') {
                        step(i + 1 < inner.size() ? 2 : 1);
                        continue;
                    }
                    if (hc == strq) strq = 0;
                    step(1);
                    continue;
                }
                if (hc == '\'' || hc == '"') {
                    strq = hc;
                    step(1);
                    continue;
                }
                if (hc == '(' || hc == '[' || hc == '{') {
                    ++depth;
                    step(1);
                    continue;
                }
                if (hc == ')' || hc == ']') {
                    --depth;
                    step(1);
                    continue;
                }
                if (hc == '}' && depth > 0) {
                    --depth;
                    step(1);
                    continue;
                }
                if (depth == 0 && hc == '}') {
                    expr_end = std::min(expr_end, i);
                    step(1);
                    break;
                }
                if (depth == 0 && hc == ':') {
                    expr_end = std::min(expr_end, i);
                    has_suffix = true;
                    step(1);
                    continue;
                }
                if (depth == 0 && hc == '!' && i + 1 < inner.size() && inner[i + 1] != '=') {
                    expr_end = std::min(expr_end, i);
                    has_suffix = true;
                    step(1);
                    continue;
                }
                if (depth == 0 && hc == '=' && i + 1 < inner.size() &&
                    (inner[i + 1] == '}' || inner[i + 1] == ':')) {
                    // debug specifier f"{x=}"
                    expr_end = std::min(expr_end, i);
                    has_suffix = true;
                    step(1);
                    continue;
                }
                step(1);
            }
            std::string_view expr_text = std::string_view(inner).substr(expr_start, expr_end - expr_start);
            int hole = -1;
            if (!has_suffix && !expr_text.empty()) {
                try {
                    auto sub = tokenize(expr_text, body_off + expr_start, expr_line, expr_col);
                    Parser subp{src, sub, arena, 0};
                    hole = subp.parse_expression();
                } catch (const SyntaxError&) {
                    hole = -1;
                }
            }
            if (hole < 0) {
                hole = add(NodeKind::OpaqueExpr, "hole");
                arena[hole].span = Span{expr_line, expr_col, expr_line,
                                        expr_col + static_cast<int>(expr_end - expr_start)};
                arena[hole].begin = body_off + expr_start;
                arena[hole].end = body_off + expr_end;
            }
            parts.push_back(hole);
            chunk_begin = body_off + i;
            chunk_line = line;
            chunk_col = col;
        }
        flush_chunk(body_off + inner.size(), line, col);
    }

    int parse_string_group() {
        std::size_t first = p;
        bool any_f = false;
        std::vector<std::size_t> toks;
        while (cur().kind == TK::String || cur().kind == TK::FString) {
            if (cur().kind == TK::FString) any_f = true;
            toks.push_back(p);
            next();
        }
        if (!any_f) {
            std::string value;
            for (auto ti : toks) value += t[ti].text;
            int n = add(NodeKind::StringLit, std::move(value));
            cover(n, first);
            return n;
        }
        std::vector<int> parts;
        for (auto ti : toks) {
            const Token& tok = t[ti];
            if (tok.kind == TK::String) {
                if (!tok.text.empty()) {
                    int n = add(NodeKind::FStringText, tok.text);
                    arena[n].span = Span{tok.line, tok.col, tok.end_line, tok.end_col};
                    arena[n].begin = tok.begin;
                    arena[n].end = tok.end;
                    parts.push_back(n);
                }
            } else {
                split_fstring(tok, parts);
            }
        }
        int n = add(NodeKind::FString);
        arena[n].children = std::move(parts);
        cover(n, first);
        return n;
    }

    // ---- statements --------------------------------------------------

    std::vector<int> parse_block_after_colon() {
        std::vector<int> body;
        if (cur().kind == TK::Newline) {
            const Token& nl = cur();
            next();
            if (cur().kind != TK::Indent) {
                throw SyntaxError("expected an indented block", nl.line, nl.col);
            }
            next();
            while (!at_end() && cur().kind != TK::Dedent) parse_statement(body);
            if (cur().kind == TK::Dedent) next();
        } else {
            parse_simple_line(body);
        }
        return body;
    }

    void parse_simple_line(std::vector<int>& out) {
        for (;;) {
            if (cur().kind == TK::Newline) {
                next();
                return;
            }
            if (at_end() || cur().kind == TK::Dedent) return;
            parse_small_statement(out);
            if (is_op(";")) {
                next();
                continue;
            }
            if (cur().kind == TK::Newline) {
                next();
                return;
            }
            if (at_end() || cur().kind == TK::Dedent) return;
            // Unconsumed trailing tokens: salvage them as an opaque node.
            std::size_t first = p;
            int n = add(NodeKind::OpaqueStmt, "trailing");
            std::vector<int> sal;
            tolerant_scan(sal, {";"});
            if (p == first) next();  // ensure progress on stray closers
            arena[n].children = std::move(sal);
            cover(n, first);
            out.push_back(n);
            if (is_op(";")) {
                next();
                continue;
            }
            if (cur().kind == TK::Newline) next();
            return;
        }
    }

    void parse_small_statement(std::vector<int>& out) {
        std::size_t first = p;
        if (is_kw("return")) {
            next();
            std::vector<int> vals;
            while (can_start_expression()) {
                vals.push_back(parse_expression());
                if (is_op(",")) {
                    next();
                    continue;
                }
                break;
            }
            int n = add(NodeKind::Return);
            if (vals.size() == 1) {
                arena[n].children = std::move(vals);
            } else if (vals.size() > 1) {
                int tup = add(NodeKind::OpaqueExpr, "tuple");
                arena[tup].children = std::move(vals);
                cover(tup, first + 1);
                arena[n].children = {tup};
            }
            cover(n, first);
            out.push_back(n);
            return;
        }
        if (cur().kind == TK::Name && (kBareKw.count(cur().text) != 0)) {
            std::string kw = cur().text;
            int n = add(NodeKind::OpaqueStmt, std::move(kw));
            while (!at_end() && cur().kind != TK::Newline && cur().kind != TK::Dedent && !is_op(";")) next();
            cover(n, first);
            out.push_back(n);
            return;
        }
        if (cur().kind == TK::Name && kExprStmtKw.count(cur().text) != 0) {
            std::string kw = cur().text;
            next();
            int n = add(NodeKind::OpaqueStmt, std::move(kw));
            std::vector<int> sal;
            tolerant_scan(sal, {";"});
            arena[n].children = std::move(sal);
            cover(n, first);
            out.push_back(n);
            return;
        }

        int e = parse_expression();
        if (is_op(":")) {  // annotated assignment or bare annotation
            next();
            int ann = can_start_expression() ? parse_expression() : -1;
            if (is_op("=")) {
                next();
                int v = parse_expression();
                if (arena[e].kind == NodeKind::Name) {
                    int n = add(NodeKind::Assign, arena[e].text);
                    arena[n].labels = {arena[e].text};
                    arena[n].children = {v};
                    cover(n, first);
                    out.push_back(n);
                    return;
                }
                int n = add(NodeKind::OpaqueStmt, "assign");
                arena[n].children = {e, v};
                cover(n, first);
                out.push_back(n);
                return;
            }
            int n = add(NodeKind::OpaqueStmt, "annotation");
            arena[n].children = ann >= 0 ? std::vector<int>{e, ann} : std::vector<int>{e};
            cover(n, first);
            out.push_back(n);
            return;
        }
        if (cur().kind == TK::Op && cur().text.size() >= 2 && cur().text.back() == '=' &&
            cur().text != "==" && cur().text != "!=" && cur().text != ">=" && cur().text != "<=") {
            std::string op = cur().text;
            next();
            int v = parse_expression();
            int n = add(NodeKind::OpaqueStmt, "augassign:" + op);
            if (arena[e].kind == NodeKind::Name) arena[n].labels = {arena[e].text};
            arena[n].children = {e, v};
            cover(n, first);
            out.push_back(n);
            return;
        }
        if (is_op(",")) {  // tuple target or bare tuple expression
            std::vector<int> elems{e};
            while (is_op(",")) {
                next();
                if (!can_start_expression()) break;
                elems.push_back(parse_expression());
            }
            if (is_op("=")) {
                next();
                int v = parse_expression();
                int n = add(NodeKind::OpaqueStmt, "tuple-assign");
                elems.push_back(v);
                arena[n].children = std::move(elems);
                cover(n, first);
                out.push_back(n);
                return;
            }
            int n = add(NodeKind::OpaqueStmt, "tuple-expr");
            arena[n].children = std::move(elems);
            cover(n, first);
            out.push_back(n);
            return;
        }
        if (is_op("=")) {
            std::vector<int> exprs{e};
            while (is_op("=")) {
                next();
                exprs.push_back(parse_expression());
            }
            bool all_names = true;
            for (std::size_t k = 0; k + 1 < exprs.size(); ++k) {
                if (arena[exprs[k]].kind != NodeKind::Name) all_names = false;
            }
            if (all_names) {
                int n = add(NodeKind::Assign);
                for (std::size_t k = 0; k + 1 < exprs.size(); ++k) {
                    arena[n].labels.push_back(arena[exprs[k]].text);
                }
                arena[n].text = arena[n].labels.front();
                arena[n].children = {exprs.back()};
                cover(n, first);
                out.push_back(n);
                return;
            }
            int n = add(NodeKind::OpaqueStmt, "assign");
            arena[n].children = std::move(exprs);
            cover(n, first);
            out.push_back(n);
            return;
        }
        int n = add(NodeKind::ExprStmt);
        arena[n].children = {e};
        cover(n, first);
        out.push_back(n);
    }

    int parse_funcdef() {
        std::size_t first = p;
        next();  // def
        std::string name;
        if (cur().kind == TK::Name) {
            name = cur().text;
            next();
        } else {
            throw SyntaxError("expected function name after \"def\"", cur().line, cur().col);
        }
        std::vector<std::string> params;
        if (is_op("(")) {
            next();
            while (!at_end() && !is_op(")")) {
                if (is_op("*") || is_op("**")) {
                    next();
                    if (cur().kind == TK::Name) {
                        params.push_back(cur().text);
                        next();
                    }
                } else if (is_op("/")) {
                    next();
                } else if (cur().kind == TK::Name) {
                    params.push_back(cur().text);
                    next();
                    if (is_op(":")) {
                        next();
                        parse_expression();
                    }
                    if (is_op("=")) {
                        next();
                        parse_expression();
                    }
                } else {
                    next();
                }
                if (is_op(",")) next();
            }
            if (is_op(")")) next();
        }
        if (is_op("->")) {
            next();
            if (can_start_expression()) parse_expression();
        }
        if (is_op(":")) {
            next();
        } else {
            throw SyntaxError("expected \":\" after function signature", cur().line, cur().col);
        }
        std::vector<int> body = parse_block_after_colon();
        int n = add(NodeKind::FunctionDef, std::move(name));
        arena[n].labels = std::move(params);
        arena[n].children = std::move(body);
        cover(n, first);
        return n;
    }

    void parse_compound(std::vector<int>& out) {
        std::size_t first = p;
        std::string kw = cur().text;
        next();
        std::vector<int> children;
        if (kw == "for") {
            while (!at_end() && !is_kw("in") && cur().kind != TK::Newline && !is_op(":")) next();
            if (is_kw("in")) {
                next();
                if (can_start_expression()) {
                    children.push_back(parse_expression());
                    while (is_op(",")) {
                        next();
                        if (!can_start_expression()) break;
                        children.push_back(parse_expression());
                    }
                }
            }
        } else {
            tolerant_scan(children, {":"});
        }
        if (is_op(":")) {
            next();
            std::vector<int> body = parse_block_after_colon();
            for (int b : body) children.push_back(b);
        } else {
            skip_to_line_end();
        }
        int n = add(NodeKind::OpaqueStmt, std::move(kw));
        arena[n].children = std::move(children);
        cover(n, first);
        out.push_back(n);
    }

    void parse_statement(std::vector<int>& out) {
        while (cur().kind == TK::Newline) next();
        if (at_end() || cur().kind == TK::Dedent) return;
        if (is_op("@")) {
            std::size_t first = p;
            next();
            int n = add(NodeKind::OpaqueStmt, "decorator");
            std::vector<int> sal;
            tolerant_scan(sal, {});
            arena[n].children = std::move(sal);
            cover(n, first);
            out.push_back(n);
            if (cur().kind == TK::Newline) next();
            return;
        }
        if (is_kw("async")) {
            if (peek(1).kind == TK::Name && peek(1).text == "def") {
                next();
                out.push_back(parse_funcdef());
                return;
            }
            if (peek(1).kind == TK::Name && kCompoundKw.count(peek(1).text) != 0) {
                next();
                parse_compound(out);
                return;
            }
        }
        if (is_kw("def")) {
            out.push_back(parse_funcdef());
            return;
        }
        if (cur().kind == TK::Name && kCompoundKw.count(cur().text) != 0) {
            parse_compound(out);
            return;
        }
        parse_simple_line(out);
    }
};

}  // namespace

ParseResult parse_python(std::string_view text) {
    ParseResult result;
    auto toks = tokenize(text);
    Parser parser{text, toks, result.arena, 0};
    std::vector<int> body;
    while (!parser.at_end()) {
        std::size_t before = parser.p;
        parser.parse_statement(body);
        if (parser.p == before) parser.next();  // safety against stalls
    }
    int root = static_cast<int>(result.arena.size());
    SyntaxNode module;
    module.kind = NodeKind::Module;
    module.children = std::move(body);
    module.span = Span{1, 1, 1, 1};
    module.begin = 0;
    module.end = text.size();
    if (!toks.empty()) {
        const Token& last = toks.back();
        module.span = Span{1, 1, last.end_line, last.end_col};
    }
    result.arena.push_back(std::move(module));
    result.root = root;
    return result;
}

}  // namespace restfix::detail
