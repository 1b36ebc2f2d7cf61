// SPDX-License-Identifier: Apache-2.0
#include "python_tokenizer.hpp"

#include <array>
#include <cctype>

#include "restfix/errors.hpp"

namespace restfix::detail {

namespace {

bool is_name_start(unsigned char c) {
    return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool is_name_char(unsigned char c) {
    return std::isalnum(c) || c == '_' || c >= 0x80;
}

bool is_hex(unsigned char c) { return std::isxdigit(c); }

constexpr std::array<std::string_view, 4> kOps3 = {"**=", "//=", ">>=", "<<="};
constexpr std::array<std::string_view, 19> kOps2 = {
    "==", "!=", ">=", "<=", "->", "+=", "-=", "*=", "/=", "%=",
    "&=", "|=", "^=", "**", "//", "<<", ">>", ":=", "..",
};
constexpr std::string_view kOps1 = "+-*/%@&|^~<>()[]{},:.;=!";

struct Cursor {
    std::string_view text;
    std::size_t i = 0;
    std::size_t base_offset;
    int line;
    int col;

    bool done() const { return i >= text.size(); }
    char peek(std::size_t ahead = 0) const {
        return i + ahead < text.size() ? text[i + ahead] : '\0';
    }
    void advance() {
        char c = text[i++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else if (c == '\t') {
            col = ((col - 1) / 8 + 1) * 8 + 1;
        } else {
            ++col;
        }
    }
    std::size_t offset() const { return base_offset + i; }
};

}  // namespace

std::string decode_escapes(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c != '\\' || i + 1 >= raw.size()) {
            out.push_back(c);
            continue;
        }
        char e = raw[++i];
        switch (e) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case 'r': out.push_back('\r'); break;
            case 'a': out.push_back('\a'); break;
            case 'b': out.push_back('\b'); break;
            case 'f': out.push_back('\f'); break;
            case 'v': out.push_back('\v'); break;
            case '\\': out.push_back('\\'); break;
            case '\'': out.push_back('\''); break;
            case '"': out.push_back('"'); break;
            case '\n': break;  // line splice
            case 'x': {
                if (i + 2 < raw.size() && is_hex(raw[i + 1]) && is_hex(raw[i + 2])) {
                    int v = std::stoi(std::string(raw.substr(i + 1, 2)), nullptr, 16);
                    out.push_back(static_cast<char>(v));
                    i += 2;
                } else {
                    out.push_back('\\');
                    out.push_back('x');
                }
                break;
            }
            default:
                if (e >= '0' && e <= '7') {
                    int v = e - '0';
                    for (int k = 0; k < 2 && i + 1 < raw.size() && raw[i + 1] >= '0' && raw[i + 1] <= '7'; ++k) {
                        v = v * 8 + (raw[++i] - '0');
                    }
                    out.push_back(static_cast<char>(v));
                } else {
                    out.push_back('\\');
                    out.push_back(e);
                }
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view text, std::size_t base_offset,
                            int base_line, int base_col) {
    const bool fragment = base_line != 1 || base_col != 1 || base_offset != 0;
    Cursor cur{text, 0, base_offset, base_line, base_col};
    std::vector<Token> out;
    std::vector<int> indents{0};
    int depth = 0;
    bool at_line_start = !fragment;
    bool tokens_on_line = false;

    auto start_token = [&](Token::Kind kind) {
        Token t;
        t.kind = kind;
        t.begin = cur.offset();
        t.line = cur.line;
        t.col = cur.col;
        return t;
    };
    auto finish_token = [&](Token t) {
        t.end = cur.offset();
        t.end_line = cur.line;
        t.end_col = cur.col;
        tokens_on_line = true;
        out.push_back(std::move(t));
    };
    auto emit_newline = [&] {
        if (!tokens_on_line) return;
        Token t = start_token(Token::Kind::Newline);
        t.end = t.begin;
        t.end_line = t.line;
        t.end_col = t.col;
        out.push_back(std::move(t));
        tokens_on_line = false;
    };

    while (!cur.done()) {
        if (at_line_start && depth == 0) {
            // Measure indentation; skip blank and comment-only lines entirely.
            int width = 0;
            std::size_t probe = cur.i;
            int pcol = 1;
            while (probe < text.size() && (text[probe] == ' ' || text[probe] == '\t')) {
                pcol = text[probe] == '\t' ? ((pcol - 1) / 8 + 1) * 8 + 1 : pcol + 1;
                ++probe;
            }
            width = pcol - 1;
            char after = probe < text.size() ? text[probe] : '\0';
            if (after == '\0' || after == '\n' || after == '\r' || after == '#') {
                while (!cur.done() && cur.peek() != '\n') cur.advance();
                if (!cur.done()) cur.advance();
                continue;
            }
            while (cur.i < probe) cur.advance();
            if (width > indents.back()) {
                Token t = start_token(Token::Kind::Indent);
                t.end = t.begin;
                t.end_line = t.line;
                t.end_col = t.col;
                out.push_back(std::move(t));
                indents.push_back(width);
            } else {
                while (width < indents.back()) {
                    indents.pop_back();
                    Token t = start_token(Token::Kind::Dedent);
                    t.end = t.begin;
                    t.end_line = t.line;
                    t.end_col = t.col;
                    out.push_back(std::move(t));
                }
                if (width != indents.back()) {
                    throw SyntaxError("unindent does not match any outer indentation level",
                                      cur.line, cur.col);
                }
            }
            at_line_start = false;
            continue;
        }
        at_line_start = false;

        char c = cur.peek();
        if (c == ' ' || c == '\t') {
            cur.advance();
            continue;
        }
        if (c == '\r') {
            cur.advance();
            continue;
        }
        if (c == '\n') {
            cur.advance();
            if (depth == 0 && !fragment) {
                emit_newline();
                at_line_start = true;
            }
            continue;
        }
        if (c == '#') {
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            continue;
        }
        if (c == '\\' && (cur.peek(1) == '\n' || (cur.peek(1) == '\r' && cur.peek(2) == '\n'))) {
            cur.advance();
            while (!cur.done() && cur.peek() != '\n') cur.advance();
            if (!cur.done()) cur.advance();
            continue;
        }

        // String literal, possibly prefixed.
        {
            std::size_t p = 0;
            bool raw = false, fstr = false, valid = true;
            while (p < 2) {
                char pc = cur.peek(p);
                if (pc == 'r' || pc == 'R') raw = true;
                else if (pc == 'f' || pc == 'F') fstr = true;
                else if (pc == 'b' || pc == 'B' || pc == 'u' || pc == 'U') ;
                else break;
                ++p;
            }
            char q = cur.peek(p);
            if (p > 0 && q != '\'' && q != '"') valid = false;
            if ((q == '\'' || q == '"') && valid) {
                Token t = start_token(fstr ? Token::Kind::FString : Token::Kind::String);
                if (raw) t.flags |= Token::kRaw;
                int start_line = cur.line, start_col = cur.col;
                for (std::size_t k = 0; k < p; ++k) cur.advance();
                bool triple = cur.peek(1) == q && cur.peek(2) == q;
                int closers = triple ? 3 : 1;
                for (int k = 0; k < closers; ++k) cur.advance();
                std::string body;
                bool closed = false;
                while (!cur.done()) {
                    char sc = cur.peek();
                    if (sc == '\\' && cur.peek(1) != '\0') {
                        body.push_back(sc);
                        cur.advance();
                        body.push_back(cur.peek());
                        cur.advance();
                        continue;
                    }
                    if (!triple && (sc == '\n' || sc == '\r')) break;
                    if (sc == q && (!triple || (cur.peek(1) == q && cur.peek(2) == q))) {
                        for (int k = 0; k < closers; ++k) cur.advance();
                        closed = true;
                        break;
                    }
                    body.push_back(sc);
                    cur.advance();
                }
                if (!closed) {
                    throw SyntaxError("unterminated string literal", start_line, start_col);
                }
                if (fstr) {
                    t.text = std::move(body);  // parser splits holes, then decodes
                } else {
                    t.text = raw ? std::move(body) : decode_escapes(body);
                }
                finish_token(std::move(t));
                continue;
            }
        }

        if (is_name_start(static_cast<unsigned char>(c))) {
            Token t = start_token(Token::Kind::Name);
            std::string name;
            while (!cur.done() && is_name_char(static_cast<unsigned char>(cur.peek()))) {
                name.push_back(cur.peek());
                cur.advance();
            }
            t.text = std::move(name);
            finish_token(std::move(t));
            continue;
        }

        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1))))) {
            Token t = start_token(Token::Kind::Number);
            std::string num;
            auto take = [&] {
                num.push_back(cur.peek());
                cur.advance();
            };
            if (c == '0' && (cur.peek(1) == 'x' || cur.peek(1) == 'X' || cur.peek(1) == 'o' ||
                             cur.peek(1) == 'O' || cur.peek(1) == 'b' || cur.peek(1) == 'B')) {
                take();
                take();
                while (!cur.done() && (std::isalnum(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')) take();
            } else {
                while (!cur.done() && (std::isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')) take();
                if (cur.peek() == '.' && std::isdigit(static_cast<unsigned char>(cur.peek(1)))) {
                    take();
                    while (!cur.done() && (std::isdigit(static_cast<unsigned char>(cur.peek())) || cur.peek() == '_')) take();
                } else if (cur.peek() == '.' && num.find('.') == std::string::npos &&
                           !std::isalpha(static_cast<unsigned char>(cur.peek(1))) && cur.peek(1) != '.') {
                    take();
                }
                if (cur.peek() == 'e' || cur.peek() == 'E') {
                    char sign = cur.peek(1);
                    if (std::isdigit(static_cast<unsigned char>(sign)) ||
                        ((sign == '+' || sign == '-') && std::isdigit(static_cast<unsigned char>(cur.peek(2))))) {
                        take();
                        if (cur.peek() == '+' || cur.peek() == '-') take();
                        while (!cur.done() && std::isdigit(static_cast<unsigned char>(cur.peek()))) take();
                    }
                }
                if (cur.peek() == 'j' || cur.peek() == 'J') take();
            }
            t.text = std::move(num);
            finish_token(std::move(t));
            continue;
        }

        // Operators, longest match first.
        {
            Token t = start_token(Token::Kind::Op);
            std::string_view rest = text.substr(cur.i);
            std::string op;
            for (auto cand : kOps3) {
                if (rest.substr(0, 3) == cand) {
                    op = cand;
                    break;
                }
            }
            if (op.empty()) {
                for (auto cand : kOps2) {
                    if (rest.substr(0, 2) == cand) {
                        op = cand;
                        break;
                    }
                }
            }
            if (op.empty() && kOps1.find(c) != std::string_view::npos) op = std::string(1, c);
            if (op.empty()) op = std::string(1, c);  // tolerate stray characters
            for (std::size_t k = 0; k < op.size(); ++k) cur.advance();
            if (op == "(" || op == "[" || op == "{") ++depth;
            if (op == ")" || op == "]" || op == "}") depth = depth > 0 ? depth - 1 : 0;
            t.text = std::move(op);
            finish_token(std::move(t));
            continue;
        }
    }

    if (!fragment) {
        emit_newline();
        while (indents.size() > 1) {
            indents.pop_back();
            Token t;
            t.kind = Token::Kind::Dedent;
            t.begin = t.end = cur.offset();
            t.line = t.end_line = cur.line;
            t.col = t.end_col = cur.col;
            out.push_back(std::move(t));
        }
    }
    Token end;
    end.kind = Token::Kind::End;
    end.begin = end.end = cur.offset();
    end.line = end.end_line = cur.line;
    end.col = end.end_col = cur.col;
    out.push_back(std::move(end));
    return out;
}

}  // namespace restfix::detail
