#pragma once

#include <cstddef>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "startflow/model.hpp"

namespace startflow {

/// 1-based position of a token inside the source document.
struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 1;

    bool operator==(const SourceSpan&) const = default;
};

struct ParseError {
    SourceSpan span;
    std::string code;  // E-LEX or E-SYN
    std::string message;

    bool operator==(const ParseError&) const = default;
};

/// Either a Project (errors empty) or the full list of recoverable errors.
struct ParseResult {
    Project project;
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

namespace detail {

enum class TokKind { Ident, Int, String, LBrace, RBrace, Dot, Arrow, Colon };

struct Token {
    TokKind kind;
    std::string text;  // identifier/number spelling, or decoded string body
    int column = 1;
    int length = 1;
};

struct LineAbort {
    SourceSpan span;
    std::string code;
    std::string message;
};

inline bool is_ident_start(unsigned char c) { return std::isalpha(c) || c == '_'; }
inline bool is_ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; }

/// Tokenizes one physical line. The first lexical problem aborts the line.
inline std::vector<Token> lex_line(const std::string& line, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    const size_t n = line.size();
    auto abort_lex = [&](size_t col0, size_t len, std::string msg) {
        throw LineAbort{{line_no, static_cast<int>(col0 + 1), static_cast<int>(len)}, "E-LEX",
                        std::move(msg)};
    };
    while (i < n) {
        const unsigned char c = static_cast<unsigned char>(line[i]);
        if (c == '#') break;
        if (std::isspace(c)) {
            ++i;
            continue;
        }
        const size_t start = i;
        if (c == '"') {
            std::string body;
            ++i;
            bool closed = false;
            while (i < n) {
                char d = line[i];
                if (d == '"') {
                    closed = true;
                    ++i;
                    break;
                }
                if (d == '\\') {
                    if (i + 1 >= n) abort_lex(i, 1, "dangling escape at end of line");
                    char e = line[i + 1];
                    switch (e) {
                        case '"': body += '"'; break;
                        case '\\': body += '\\'; break;
                        case 'n': body += '\n'; break;
                        case 't': body += '\t'; break;
                        default:
                            abort_lex(i, 2, std::string("unknown escape '\\") + e + "'");
                    }
                    i += 2;
                } else {
                    body += d;
                    ++i;
                }
            }
            if (!closed) abort_lex(start, 1, "unterminated string literal");
            out.push_back({TokKind::String, body, static_cast<int>(start + 1),
                           static_cast<int>(i - start)});
        } else if (std::isdigit(c)) {
            while (i < n && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
            if (i - start > 9) abort_lex(start, i - start, "number too large");
            out.push_back({TokKind::Int, line.substr(start, i - start),
                           static_cast<int>(start + 1), static_cast<int>(i - start)});
        } else if (is_ident_start(c)) {
            while (i < n && is_ident_char(static_cast<unsigned char>(line[i]))) ++i;
            out.push_back({TokKind::Ident, line.substr(start, i - start),
                           static_cast<int>(start + 1), static_cast<int>(i - start)});
        } else if (c == '{' || c == '}' || c == '.' || c == ':') {
            const TokKind k = c == '{' ? TokKind::LBrace
                            : c == '}' ? TokKind::RBrace
                            : c == '.' ? TokKind::Dot
                                       : TokKind::Colon;
            out.push_back({k, std::string(1, static_cast<char>(c)),
                           static_cast<int>(start + 1), 1});
            ++i;
        } else if (c == '-' && i + 1 < n && line[i + 1] == '>') {
            out.push_back({TokKind::Arrow, "->", static_cast<int>(start + 1), 2});
            i += 2;
        } else {
            abort_lex(start, 1, "unexpected character");
        }
    }
    return out;
}

/// Cursor over one line's tokens; all expectations throw LineAbort.
class Cursor {
public:
    Cursor(const std::vector<Token>& toks, const std::string& line, int line_no)
        : toks_(toks), line_(line), line_no_(line_no) {}

    bool done() const { return pos_ >= toks_.size(); }

    const Token& peek() const {
        if (done()) fail_eol("unexpected end of line");
        return toks_[pos_];
    }

    const Token& next() {
        const Token& t = peek();
        ++pos_;
        return t;
    }

    bool accept_word(std::string_view word) {
        if (!done() && toks_[pos_].kind == TokKind::Ident && toks_[pos_].text == word) {
            ++pos_;
            return true;
        }
        return false;
    }

    bool accept(TokKind k) {
        if (!done() && toks_[pos_].kind == k) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string expect_ident(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokKind::Ident) fail_tok(t, std::string("expected ") + std::string(what));
        ++pos_;
        return t.text;
    }

    void expect_word(std::string_view word) {
        const Token& t = peek();
        if (t.kind != TokKind::Ident || t.text != word)
            fail_tok(t, "expected '" + std::string(word) + "'");
        ++pos_;
    }

    std::string expect_string(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokKind::String) fail_tok(t, std::string("expected ") + std::string(what));
        ++pos_;
        return t.text;
    }

    void expect(TokKind k, std::string_view what) {
        const Token& t = peek();
        if (t.kind != k) fail_tok(t, std::string("expected ") + std::string(what));
        ++pos_;
    }

    int expect_int(std::string_view what) {
        const Token& t = peek();
        if (t.kind != TokKind::Int) fail_tok(t, std::string("expected ") + std::string(what));
        ++pos_;
        return std::stoi(t.text);
    }

    void expect_eol() {
        if (!done()) fail_tok(toks_[pos_], "expected end of line");
    }

    [[noreturn]] void fail_tok(const Token& t, std::string msg) const {
        throw LineAbort{{line_no_, t.column, t.length}, "E-SYN", std::move(msg)};
    }

    [[noreturn]] void fail_eol(std::string msg) const {
        const int col = line_.empty() ? 1 : static_cast<int>(line_.size());
        throw LineAbort{{line_no_, col, 1}, "E-SYN", std::move(msg)};
    }

private:
    const std::vector<Token>& toks_;
    const std::string& line_;
    int line_no_;
    size_t pos_ = 0;
};

inline std::vector<std::string> split_lines(std::string_view src) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : src) {
        if (c == '\n') {
            if (!cur.empty() && cur.back() == '\r') cur.pop_back();
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(std::move(cur));
    return lines;
}

class Parser {
public:
    ParseResult run(std::string_view src) {
        lines_ = split_lines(src);
        for (size_t idx = 0; idx < lines_.size(); ++idx) {
            line_no_ = static_cast<int>(idx + 1);
            std::vector<Token> toks;
            try {
                toks = lex_line(lines_[idx], line_no_);
            } catch (const LineAbort& a) {
                report(a);
                continue;
            }
            if (toks.empty()) continue;
            dispatch(toks, /*allow_autoclose=*/true);
        }
        if (ctx_ != Ctx::Top)
            result_.errors.push_back({block_open_, "E-SYN", "block is never closed"});
        finish_connector_ids();
        return std::move(result_);
    }

private:
    enum class Ctx { Top, Screen, Feature };

    void report(const LineAbort& a) { result_.errors.push_back({a.span, a.code, a.message}); }

    void dispatch(const std::vector<Token>& toks, bool allow_autoclose) {
        // A new top-level statement while a block is open closes the block
        // (with a complaint) and reparses the line at top level.
        if (ctx_ != Ctx::Top && allow_autoclose && toks.front().kind == TokKind::Ident) {
            const std::string& w = toks.front().text;
            if (w == "screen" || w == "feature" || w == "story" || w == "project") {
                result_.errors.push_back({{line_no_, toks.front().column, toks.front().length},
                                          "E-SYN",
                                          "missing '}' before '" + w + "'"});
                ctx_ = Ctx::Top;
            }
        }
        Cursor cur(toks, lines_[static_cast<size_t>(line_no_ - 1)], line_no_);
        try {
            switch (ctx_) {
                case Ctx::Top: parse_top(cur); break;
                case Ctx::Screen: parse_in_screen(cur); break;
                case Ctx::Feature: parse_in_feature(cur); break;
            }
        } catch (const LineAbort& a) {
            report(a);
        }
    }

    void parse_top(Cursor& cur) {
        const Token& head = cur.peek();
        if (head.kind != TokKind::Ident)
            cur.fail_tok(head, "expected a statement (project, story, screen or feature)");
        if (cur.accept_word("project")) {
            std::string name = cur.expect_string("project name string");
            cur.expect_eol();
            if (saw_project_)
                throw LineAbort{{line_no_, head.column, head.length}, "E-SYN",
                                "duplicate project header"};
            saw_project_ = true;
            result_.project.name = std::move(name);
        } else if (cur.accept_word("story")) {
            UserStory s;
            s.id = cur.expect_ident("story id");
            cur.expect_word("as");
            s.role = cur.expect_string("role string");
            cur.expect_word("want");
            s.want = cur.expect_string("want string");
            if (cur.accept_word("why")) s.why = cur.expect_string("why string");
            cur.expect_word("prio");
            s.priority = cur.expect_int("priority");
            cur.expect_eol();
            if (trim(s.role).empty())
                throw LineAbort{{line_no_, head.column, head.length}, "E-SYN",
                                "story role must not be empty"};
            if (trim(s.want).empty())
                throw LineAbort{{line_no_, head.column, head.length}, "E-SYN",
                                "story want must not be empty"};
            if (s.priority < 1)
                throw LineAbort{{line_no_, head.column, head.length}, "E-SYN",
                                "priority must be at least 1"};
            result_.project.stories.push_back(std::move(s));
        } else if (cur.accept_word("screen")) {
            Screen s;
            s.id = cur.expect_ident("screen id");
            s.title = s.id;
            if (!cur.done() && cur.peek().kind == TokKind::String)
                s.title = cur.expect_string("title");
            while (!cur.done() && cur.peek().kind == TokKind::Ident) {
                const Token& t = cur.next();
                bool dup = false;
                if (t.text == "entry") {
                    dup = s.tags.entry;
                    s.tags.entry = true;
                } else if (t.text == "feedback") {
                    dup = s.tags.feedback;
                    s.tags.feedback = true;
                } else if (t.text == "error") {
                    dup = s.tags.error;
                    s.tags.error = true;
                } else {
                    cur.fail_tok(t, "unknown screen tag '" + t.text + "'");
                }
                if (dup) cur.fail_tok(t, "duplicate screen tag '" + t.text + "'");
            }
            open_block(cur);
            result_.project.screens.push_back(std::move(s));
            ctx_ = Ctx::Screen;
        } else if (cur.accept_word("feature")) {
            Feature f;
            f.id = cur.expect_ident("feature id");
            cur.expect_word("for");
            f.story = cur.expect_ident("story id");
            open_block(cur);
            result_.project.features.push_back(std::move(f));
            ctx_ = Ctx::Feature;
        } else {
            cur.fail_tok(head, "unknown statement '" + head.text + "'");
        }
    }

    void parse_in_screen(Cursor& cur) {
        if (cur.accept(TokKind::RBrace)) {
            cur.expect_eol();
            ctx_ = Ctx::Top;
            return;
        }
        Screen& screen = result_.project.screens.back();
        if (cur.accept_word("layout")) {
            Layout e;
            e.id = cur.expect_ident("layout id");
            e.kind = cur.expect_ident("layout kind");
            if (!cur.done() && cur.peek().kind == TokKind::String)
                e.label = cur.expect_string("label");
            cur.expect_eol();
            screen.elements.emplace_back(std::move(e));
        } else if (cur.accept_word("field")) {
            InputField e;
            e.id = cur.expect_ident("field id");
            e.label = cur.expect_string("field label");
            if (cur.accept_word("required")) {
                const Token& v = cur.peek();
                if (cur.accept_word("yes"))
                    e.required = Requiredness::Yes;
                else if (cur.accept_word("no"))
                    e.required = Requiredness::No;
                else if (cur.accept_word("unspecified"))
                    e.required = Requiredness::Unspecified;
                else
                    cur.fail_tok(v, "expected yes, no or unspecified");
            }
            cur.expect_eol();
            screen.elements.emplace_back(std::move(e));
        } else if (cur.accept_word("button")) {
            TriggerText e;
            e.id = cur.expect_ident("button id");
            e.label = cur.expect_string("button label");
            e.submits = cur.accept_word("submits");
            cur.expect_eol();
            screen.elements.emplace_back(std::move(e));
        } else if (cur.accept_word("icon")) {
            TriggerIcon e;
            e.id = cur.expect_ident("icon id");
            e.icon = cur.expect_ident("icon name");
            if (cur.accept_word("alt")) e.alt = cur.expect_string("alt text");
            e.submits = cur.accept_word("submits");
            cur.expect_eol();
            screen.elements.emplace_back(std::move(e));
        } else {
            cur.fail_tok(cur.peek(), "expected a screen element (layout, field, button, icon)");
        }
    }

    void parse_in_feature(Cursor& cur) {
        if (cur.accept(TokKind::RBrace)) {
            cur.expect_eol();
            ctx_ = Ctx::Top;
            return;
        }
        Feature& feature = result_.project.features.back();
        if (cur.accept_word("use")) {
            do {
                feature.screens.push_back(cur.expect_ident("screen id"));
            } while (!cur.done());
        } else if (cur.accept_word("connect")) {
            Connector c;
            c.source_screen = cur.expect_ident("source screen id");
            cur.expect(TokKind::Dot, "'.'");
            c.source_element = cur.expect_ident("source element id");
            cur.expect(TokKind::Arrow, "'->'");
            c.target = cur.expect_ident("target screen id");
            if (cur.accept_word("error"))
                c.kind = ConnectorKind::Error;
            else if (cur.accept_word("back"))
                c.kind = ConnectorKind::Back;
            cur.expect_eol();
            feature.connectors.push_back(std::move(c));
        } else if (cur.accept_word("task")) {
            TaskPath t;
            t.name = cur.expect_ident("task name");
            cur.expect(TokKind::Colon, "':'");
            do {
                TaskStep step;
                step.screen = cur.expect_ident("screen id");
                cur.expect(TokKind::Dot, "'.'");
                step.element = cur.expect_ident("trigger id");
                t.steps.push_back(std::move(step));
            } while (cur.accept(TokKind::Arrow));
            cur.expect_eol();
            feature.tasks.push_back(std::move(t));
        } else {
            cur.fail_tok(cur.peek(), "expected a feature statement (use, connect, task)");
        }
    }

    void open_block(Cursor& cur) {
        const Token& t = cur.peek();
        cur.expect(TokKind::LBrace, "'{'");
        cur.expect_eol();
        block_open_ = {line_no_, t.column, t.length};
    }

    /// Connector ids are positional: c001, c002, ... per feature.
    void finish_connector_ids() {
        for (auto& f : result_.project.features) {
            int n = 0;
            for (auto& c : f.connectors) {
                char buf[16];
                std::snprintf(buf, sizeof buf, "c%03d", ++n);
                c.id = buf;
            }
        }
    }

    std::vector<std::string> lines_;
    ParseResult result_;
    Ctx ctx_ = Ctx::Top;
    SourceSpan block_open_;
    int line_no_ = 1;
    bool saw_project_ = false;
};

inline std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

}  // namespace detail

/// Parses a wireflow document. Never throws on malformed input: recovery
/// continues at the next line and all problems come back in `errors`.
inline ParseResult parse(std::string_view source) {
    return detail::Parser().run(source);
}

/// Canonical form. parse(format(p)) reproduces p exactly (model equality);
/// formatting is idempotent and always emits LF line endings.
inline std::string format(const Project& p) {
    using detail::quote;
    std::string out = "project " + quote(p.name) + "\n";

    if (!p.stories.empty()) out += "\n";
    for (const auto& s : p.stories) {
        out += "story " + s.id + " as " + quote(s.role) + " want " + quote(s.want);
        if (s.why) out += " why " + quote(*s.why);
        out += " prio " + std::to_string(s.priority) + "\n";
    }

    for (const auto& s : p.screens) {
        out += "\nscreen " + s.id;
        if (s.title != s.id) out += " " + quote(s.title);
        if (s.tags.entry) out += " entry";
        if (s.tags.feedback) out += " feedback";
        if (s.tags.error) out += " error";
        out += " {\n";
        for (const auto& e : s.elements) {
            out += "  ";
            if (const auto* l = std::get_if<Layout>(&e)) {
                out += "layout " + l->id + " " + l->kind;
                if (l->label) out += " " + quote(*l->label);
            } else if (const auto* f = std::get_if<InputField>(&e)) {
                out += "field " + f->id + " " + quote(f->label) + " required ";
                out += f->required == Requiredness::Yes  ? "yes"
                     : f->required == Requiredness::No   ? "no"
                                                         : "unspecified";
            } else if (const auto* b = std::get_if<TriggerText>(&e)) {
                out += "button " + b->id + " " + quote(b->label);
                if (b->submits) out += " submits";
            } else if (const auto* i = std::get_if<TriggerIcon>(&e)) {
                out += "icon " + i->id + " " + i->icon;
                if (i->alt) out += " alt " + quote(*i->alt);
                if (i->submits) out += " submits";
            }
            out += "\n";
        }
        out += "}\n";
    }

    for (const auto& f : p.features) {
        out += "\nfeature " + f.id + " for " + f.story + " {\n";
        if (!f.screens.empty()) {
            out += "  use";
            for (const auto& sid : f.screens) out += " " + sid;
            out += "\n";
        }
        for (const auto& c : f.connectors) {
            out += "  connect " + c.source_screen + "." + c.source_element + " -> " + c.target;
            if (c.kind == ConnectorKind::Error) out += " error";
            if (c.kind == ConnectorKind::Back) out += " back";
            out += "\n";
        }
        for (const auto& t : f.tasks) {
            out += "  task " + t.name + " :";
            bool first = true;
            for (const auto& step : t.steps) {
                out += first ? " " : " -> ";
                out += step.screen + "." + step.element;
                first = false;
            }
            out += "\n";
        }
        out += "}\n";
    }
    return out;
}

}  // namespace startflow
