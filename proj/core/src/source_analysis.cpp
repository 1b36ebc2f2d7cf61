// SPDX-License-Identifier: Apache-2.0
#include "restfix/source_analysis.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "restfix/errors.hpp"
#include "python_parser.hpp"

namespace restfix {

namespace {

constexpr int kMaxResolveDepth = 8;

std::string to_lower(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    return out;
}

bool is_statement_kind(NodeKind k) {
    return k == NodeKind::Assign || k == NodeKind::ExprStmt || k == NodeKind::Return ||
           k == NodeKind::OpaqueStmt || k == NodeKind::FunctionDef;
}

/// Builds scope and sequence tables and the per-scope binding lists.
struct BindingBuilder {
    SourceModel& m;
    int seq = 0;

    void run() {
        m.scopes.push_back(Scope{});
        m.scope_of.assign(m.arena.size(), 0);
        m.seq_of.assign(m.arena.size(), 0);
        process_block(m.arena[m.root].children, 0);
    }

    void stamp(int node, int s, int scope) {
        grow(node);
        m.seq_of[node] = s;
        m.scope_of[node] = scope;
        for (int c : m.arena[node].children) stamp(c, s, scope);
    }

    void grow(int node) {
        if (static_cast<std::size_t>(node) >= m.scope_of.size()) {
            m.scope_of.resize(node + 1, 0);
            m.seq_of.resize(node + 1, 0);
        }
    }

    // Takes a copy: synthesized nodes grow the arena during processing, which
    // would invalidate a reference into a node's child list.
    void process_block(std::vector<int> stmts, int scope) {
        for (int s : stmts) process_statement(s, scope);
    }

    void process_statement(int stmt, int scope) {
        ++seq;
        const int s = seq;
        grow(stmt);
        m.seq_of[stmt] = s;
        m.scope_of[stmt] = scope;
        SyntaxNode& n = m.arena[stmt];
        switch (n.kind) {
            case NodeKind::Assign: {
                stamp(n.children[0], s, scope);
                for (const std::string& name : n.labels) {
                    m.scopes[scope].bindings.push_back(Binding{name, n.children[0], s, n.span});
                }
                break;
            }
            case NodeKind::ExprStmt: {
                stamp(n.children[0], s, scope);
                fold_update_call(stmt, scope, s);
                break;
            }
            case NodeKind::Return: {
                for (int c : n.children) stamp(c, s, scope);
                break;
            }
            case NodeKind::FunctionDef: {
                int inner = static_cast<int>(m.scopes.size());
                m.scopes.push_back(Scope{stmt});
                for (const std::string& param : m.arena[stmt].labels) {
                    m.scopes[inner].bindings.push_back(Binding{param, -1, 0, m.arena[stmt].span});
                }
                process_block(m.arena[stmt].children, inner);
                break;
            }
            case NodeKind::OpaqueStmt: {
                std::vector<int> children = n.children;  // arena may grow below
                std::string text = n.text;
                for (int c : children) {
                    if (is_statement_kind(m.arena[c].kind)) {
                        process_statement(c, scope);
                    } else {
                        stamp(c, s, scope);
                    }
                }
                if (text.rfind("augassign:", 0) == 0 && !m.arena[stmt].labels.empty()) {
                    fold_aug_assign(stmt, scope, s, text.substr(10));
                }
                break;
            }
            default:
                stamp(stmt, s, scope);
                break;
        }
    }

    int synth(NodeKind kind, std::string text, Span span, std::size_t begin, std::size_t end,
              int s, int scope) {
        SyntaxNode node;
        node.kind = kind;
        node.text = std::move(text);
        node.span = span;
        node.begin = begin;
        node.end = end;
        m.arena.push_back(std::move(node));
        int idx = static_cast<int>(m.arena.size() - 1);
        grow(idx);
        m.seq_of[idx] = s;
        m.scope_of[idx] = scope;
        return idx;
    }

    // x.update(...) extends the map bound to x: rebind x to a synthetic
    // merge of its previous value with the update operands.
    void fold_update_call(int stmt, int scope, int s) {
        int call = m.arena[stmt].children[0];
        if (m.arena[call].kind != NodeKind::Call) return;
        int callee = m.arena[call].children[0];
        if (m.arena[callee].kind != NodeKind::Attribute || m.arena[callee].text != "update") return;
        int base = m.arena[callee].children[0];
        if (m.arena[base].kind != NodeKind::Name) return;
        const std::string target = m.arena[base].text;
        const Span span = m.arena[stmt].span;
        const std::size_t begin = m.arena[stmt].begin;
        const std::size_t end = m.arena[stmt].end;

        std::vector<int> operands;
        std::vector<int> kw_entries;
        bool opaque_operand = false;
        const auto call_children = m.arena[call].children;
        const auto call_labels = m.arena[call].labels;
        for (std::size_t i = 1; i < call_children.size(); ++i) {
            const std::string& label = call_labels[i];
            if (label.empty()) {
                operands.push_back(call_children[i]);
            } else if (label == "*" || label == "**") {
                opaque_operand = true;
            } else {
                int key = synth(NodeKind::StringLit, label, m.arena[call_children[i]].span,
                                m.arena[call_children[i]].begin, m.arena[call_children[i]].end, s, scope);
                int entry = synth(NodeKind::DictEntry, "", m.arena[call_children[i]].span,
                                  m.arena[call_children[i]].begin, m.arena[call_children[i]].end, s, scope);
                m.arena[entry].children = {key, call_children[i]};
                kw_entries.push_back(entry);
            }
        }
        int prev = synth(NodeKind::Name, target, span, begin, end, s, scope);
        int merge = synth(NodeKind::DictMerge, "", span, begin, end, s, scope);
        std::vector<int> merge_children{prev};
        for (int op : operands) merge_children.push_back(op);
        if (!kw_entries.empty()) {
            int kwdict = synth(NodeKind::Dict, "", span, begin, end, s, scope);
            m.arena[kwdict].children = kw_entries;
            merge_children.push_back(kwdict);
        }
        if (opaque_operand) {
            merge_children.push_back(synth(NodeKind::OpaqueExpr, "update-arg", span, begin, end, s, scope));
        }
        m.arena[merge].children = std::move(merge_children);
        m.scopes[scope].bindings.push_back(Binding{target, merge, s, span});
    }

    // x += v rebinds x; for "+" the previous value is still usable.
    void fold_aug_assign(int stmt, int scope, int s, const std::string& op) {
        const std::string target = m.arena[stmt].labels[0];
        const Span span = m.arena[stmt].span;
        const std::size_t begin = m.arena[stmt].begin;
        const std::size_t end = m.arena[stmt].end;
        if (op == "+=" && m.arena[stmt].children.size() == 2) {
            int value = m.arena[stmt].children[1];
            int prev = synth(NodeKind::Name, target, span, begin, end, s, scope);
            int sum = synth(NodeKind::BinOpAdd, "", span, begin, end, s, scope);
            m.arena[sum].children = {prev, value};
            m.scopes[scope].bindings.push_back(Binding{target, sum, s, span});
        } else {
            m.scopes[scope].bindings.push_back(Binding{target, -1, s, span});
        }
    }
};

struct LookupHit {
    const Binding* binding = nullptr;
    bool forward = false;
};

std::optional<LookupHit> lookup_binding(const SourceModel& m, const std::string& name,
                                        int scope, int seq) {
    auto latest_before = [&](const Scope& sc) -> const Binding* {
        const Binding* best = nullptr;
        for (const Binding& b : sc.bindings) {
            if (b.name == name && b.seq < seq && (!best || b.seq >= best->seq)) best = &b;
        }
        return best;
    };
    if (scope != 0) {
        if (const Binding* b = latest_before(m.scopes[scope])) return LookupHit{b, false};
    }
    if (const Binding* b = latest_before(m.scopes[0])) return LookupHit{b, false};
    const Binding* follow = nullptr;
    for (const Binding& b : m.scopes[0].bindings) {
        if (b.name == name && b.seq > seq && (!follow || b.seq >= follow->seq)) follow = &b;
    }
    if (follow) return LookupHit{follow, true};
    return std::nullopt;
}

enum class Origin { Str, Num, Bool, Null, Opaque };

struct Resolution {
    std::vector<StringPart> parts;
    bool fully_known = true;
    Origin origin = Origin::Opaque;
};

struct Resolver {
    const SourceModel& m;
    std::vector<AnalysisWarning>* warnings = nullptr;

    void warn(WarningKind kind, std::string message, std::optional<Span> span) {
        if (!warnings) return;
        AnalysisWarning w{kind, std::move(message), span};
        if (std::find(warnings->begin(), warnings->end(), w) == warnings->end()) {
            warnings->push_back(std::move(w));
        }
    }

    Resolution unknown(int expr) {
        Resolution r;
        r.fully_known = false;
        r.origin = Origin::Opaque;
        r.parts.push_back(StringPart{false, std::string(m.slice(expr))});
        return r;
    }

    std::optional<LookupHit> follow_name(int expr) {
        const SyntaxNode& n = m.node(expr);
        auto hit = lookup_binding(m, n.text, m.scope_of[expr], m.seq_of[expr]);
        if (hit && hit->forward) {
            warn(WarningKind::ForwardBinding,
                 "name \"" + n.text + "\" resolved from a later module-level assignment",
                 n.span);
        }
        return hit;
    }

    Resolution resolve(int expr, int depth) {
        if (depth > kMaxResolveDepth) return unknown(expr);
        const SyntaxNode& n = m.node(expr);
        switch (n.kind) {
            case NodeKind::StringLit:
            case NodeKind::FStringText: {
                Resolution r;
                r.origin = Origin::Str;
                r.parts.push_back(StringPart{true, n.text});
                return r;
            }
            case NodeKind::NumberLit: {
                Resolution r;
                r.origin = Origin::Num;
                r.parts.push_back(StringPart{true, n.text});
                return r;
            }
            case NodeKind::BoolLit: {
                Resolution r;
                r.origin = Origin::Bool;
                r.parts.push_back(StringPart{true, n.text});
                return r;
            }
            case NodeKind::NoneLit: {
                Resolution r;
                r.origin = Origin::Null;
                r.parts.push_back(StringPart{true, n.text});
                return r;
            }
            case NodeKind::FString: {
                Resolution r;
                r.origin = Origin::Str;
                for (int c : n.children) {
                    Resolution part = resolve(c, depth + 1);
                    r.fully_known = r.fully_known && part.fully_known;
                    r.parts.insert(r.parts.end(), part.parts.begin(), part.parts.end());
                }
                if (r.parts.empty()) r.parts.push_back(StringPart{true, ""});
                return r;
            }
            case NodeKind::BinOpAdd: {
                Resolution l = resolve(n.children[0], depth + 1);
                Resolution r = resolve(n.children[1], depth + 1);
                auto stringish = [](const Resolution& x) {
                    return x.origin == Origin::Str || x.origin == Origin::Opaque;
                };
                if (stringish(l) && stringish(r) &&
                    (l.origin == Origin::Str || r.origin == Origin::Str)) {
                    Resolution out;
                    out.origin = Origin::Str;
                    out.fully_known = l.fully_known && r.fully_known;
                    out.parts = std::move(l.parts);
                    out.parts.insert(out.parts.end(), r.parts.begin(), r.parts.end());
                    return out;
                }
                return unknown(expr);
            }
            case NodeKind::Name: {
                auto hit = follow_name(expr);
                if (!hit || hit->binding->value < 0) return unknown(expr);
                return resolve(hit->binding->value, depth + 1);
            }
            default:
                return unknown(expr);
        }
    }

    std::optional<ResolvedMap> resolve_map(int expr, int depth) {
        if (depth > kMaxResolveDepth) return std::nullopt;
        const SyntaxNode& n = m.node(expr);
        switch (n.kind) {
            case NodeKind::Dict: {
                ResolvedMap out;
                for (int c : n.children) {
                    const SyntaxNode& entry = m.node(c);
                    if (entry.kind == NodeKind::DictEntry) {
                        ResolvedEntry e;
                        e.key = to_resolved(resolve(entry.children[0], depth + 1));
                        e.value = to_resolved(resolve(entry.children[1], depth + 1));
                        append_entry(out, std::move(e));
                    } else if (entry.kind == NodeKind::DictSpread) {
                        splice(out, entry.children[0], depth);
                    } else {
                        out.has_unknown_spread = true;
                    }
                }
                return out;
            }
            case NodeKind::DictMerge: {
                ResolvedMap out;
                bool first = true;
                for (int c : n.children) {
                    if (first) {
                        first = false;
                        auto base = resolve_map(c, depth + 1);
                        if (base) {
                            out = std::move(*base);
                        } else {
                            out.has_unknown_spread = true;
                        }
                        continue;
                    }
                    splice(out, c, depth);
                }
                return out;
            }
            case NodeKind::Name: {
                auto hit = follow_name(expr);
                if (!hit || hit->binding->value < 0) return std::nullopt;
                return resolve_map(hit->binding->value, depth + 1);
            }
            default:
                return std::nullopt;
        }
    }

    void splice(ResolvedMap& out, int operand, int depth) {
        auto inner = resolve_map(operand, depth + 1);
        if (!inner) {
            out.has_unknown_spread = true;
            return;
        }
        out.has_unknown_spread = out.has_unknown_spread || inner->has_unknown_spread;
        for (ResolvedEntry& e : inner->entries) append_entry(out, std::move(e));
    }

    // Later values win; the first-seen key spelling is kept. Keys that are
    // not fully known mark the map as unprovable.
    static void append_entry(ResolvedMap& out, ResolvedEntry entry) {
        if (!entry.key.fully_known) {
            out.has_unknown_spread = true;
            out.entries.push_back(std::move(entry));
            return;
        }
        const std::string lower = to_lower(entry.key.known_text());
        for (ResolvedEntry& existing : out.entries) {
            if (existing.key.fully_known && to_lower(existing.key.known_text()) == lower) {
                existing.value = std::move(entry.value);
                return;
            }
        }
        out.entries.push_back(std::move(entry));
    }

    static ResolvedString to_resolved(Resolution r) {
        ResolvedString out;
        out.parts = std::move(r.parts);
        out.fully_known = r.fully_known;
        return out;
    }
};

void collect_literals(const SourceModel& m, int node, std::string_view domain,
                      std::vector<std::pair<std::string, Span>>& out) {
    const SyntaxNode& n = m.node(node);
    if (n.kind == NodeKind::StringLit) {
        if (n.text.find(domain) != std::string::npos) out.emplace_back(n.text, n.span);
        return;
    }
    if (n.kind == NodeKind::FString) {
        std::string raw(m.slice(node));
        if (raw.find(domain) != std::string::npos) out.emplace_back(raw, n.span);
        return;
    }
    for (int c : n.children) collect_literals(m, c, domain, out);
}

const std::array<HttpMethod, 6>& verb_methods() {
    return kAllMethods;
}

std::string dotted_callee(const SourceModel& m, int node) {
    const SyntaxNode& n = m.node(node);
    if (n.kind == NodeKind::Name) return n.text;
    if (n.kind == NodeKind::Attribute) {
        std::string base = dotted_callee(m, n.children[0]);
        if (base.empty()) return n.text;
        return base + "." + n.text;
    }
    return "";
}

std::optional<HttpMethod> method_from_callee(const std::string& dotted) {
    if (dotted.empty()) return std::nullopt;
    const std::string lower = to_lower(dotted);
    for (HttpMethod m : verb_methods()) {
        const std::string name = to_lower(to_string(m));
        if (lower == name) return m;
        if (lower.size() > name.size() && lower.compare(lower.size() - name.size(), name.size(), name) == 0) {
            char before = lower[lower.size() - name.size() - 1];
            if (before == '.' || before == '_') return m;
        }
    }
    return std::nullopt;
}

void collect_calls(const SourceModel& m, int node, std::vector<int>& out) {
    const SyntaxNode& n = m.node(node);
    if (n.kind == NodeKind::Call) out.push_back(node);
    for (int c : n.children) collect_calls(m, c, out);
}

}  // namespace

// ---------------------------------------------------------------------------

const char* to_string(WarningKind kind) {
    switch (kind) {
        case WarningKind::Skipped: return "Skipped";
        case WarningKind::UnresolvedUrl: return "UnresolvedUrl";
        case WarningKind::ForwardBinding: return "ForwardBinding";
    }
    return "?";
}

std::string ResolvedString::known_text() const {
    std::string out;
    for (const StringPart& p : parts) {
        if (p.known) out += p.text;
    }
    return out;
}

SourceModel parse_source(std::string file_path, std::string text) {
    SourceModel model;
    model.file_path = std::move(file_path);
    model.text = std::move(text);
    detail::ParseResult parsed = detail::parse_python(model.text);
    model.arena = std::move(parsed.arena);
    model.root = parsed.root;
    BindingBuilder{model}.run();
    return model;
}

std::vector<std::pair<std::string, Span>> find_api_literals(const SourceModel& model,
                                                            std::string_view domain) {
    std::vector<std::pair<std::string, Span>> out;
    if (model.root >= 0 && !domain.empty()) collect_literals(model, model.root, domain, out);
    return out;
}

ResolvedString resolve_string_expression(const SourceModel& model, int expr) {
    Resolver r{model, nullptr};
    return Resolver::to_resolved(r.resolve(expr, 0));
}

ResolvedMap resolve_mapping_expression(const SourceModel& model, int expr) {
    Resolver r{model, nullptr};
    auto map = r.resolve_map(expr, 0);
    if (!map) throw NotAMapping("expression does not resolve to a map literal");
    return *map;
}

std::pair<std::vector<CallSite>, std::vector<AnalysisWarning>> extract_call_sites(
    const SourceModel& model, const SpecModel& spec) {
    std::vector<CallSite> sites;
    std::vector<AnalysisWarning> warnings;
    if (model.root < 0) return {sites, warnings};

    std::vector<int> calls;
    collect_calls(model, model.root, calls);
    Resolver resolver{model, &warnings};

    for (int call : calls) {
        const SyntaxNode& n = model.node(call);
        auto method = method_from_callee(dotted_callee(model, n.children[0]));
        if (!method) continue;

        int url_arg = -1;
        for (std::size_t i = 1; i < n.children.size(); ++i) {
            if (n.labels[i].empty()) {
                url_arg = n.children[i];
                break;
            }
        }
        if (url_arg < 0) {
            for (std::size_t i = 1; i < n.children.size(); ++i) {
                if (n.labels[i] == "url") {
                    url_arg = n.children[i];
                    break;
                }
            }
        }
        if (url_arg < 0) continue;

        Resolution url = resolver.resolve(url_arg, 0);
        bool has_domain = false;
        for (const StringPart& p : url.parts) {
            if (p.known && p.text.find(spec.domain) != std::string::npos) has_domain = true;
        }
        if (!has_domain) continue;

        CallSite site;
        site.method = *method;
        site.url = Resolver::to_resolved(url);
        site.call_span = n.span;

        auto def_span = [&](int expr) -> Span {
            if (model.node(expr).kind == NodeKind::Name) {
                auto hit = lookup_binding(model, model.node(expr).text, model.scope_of[expr],
                                          model.seq_of[expr]);
                if (hit) return hit->binding->span;
            }
            return model.node(expr).span;
        };
        site.endpoint_def_span = def_span(url_arg);

        auto kwarg = [&](std::string_view name) -> int {
            for (std::size_t i = 1; i < n.children.size(); ++i) {
                if (n.labels[i] == name) return n.children[i];
            }
            return -1;
        };
        if (int h = kwarg("headers"); h >= 0) {
            auto map = resolver.resolve_map(h, 0);
            if (map) {
                site.headers = std::move(*map);
            } else {
                ResolvedMap unknown_map;
                unknown_map.has_unknown_spread = true;
                site.headers = std::move(unknown_map);
            }
            site.header_def_span = def_span(h);
        }
        int body_arg = -1;
        for (std::string_view name : {"json", "data", "body"}) {
            if (int b = kwarg(name); b >= 0) {
                body_arg = b;
                break;
            }
        }
        if (body_arg >= 0) {
            auto map = resolver.resolve_map(body_arg, 0);
            if (map) {
                site.body = std::move(*map);
            } else {
                ResolvedMap unknown_map;
                unknown_map.has_unknown_spread = true;
                site.body = std::move(unknown_map);
            }
            site.body_def_span = def_span(body_arg);
        }
        if (!site.url.fully_known) {
            resolver.warn(WarningKind::UnresolvedUrl,
                          "request URL resolves with unknown parts at line " +
                              std::to_string(n.span.start_line),
                          n.span);
        }
        sites.push_back(std::move(site));
    }
    return {sites, warnings};
}

}  // namespace restfix
