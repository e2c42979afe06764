#include "plg/netlist_dsl.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace plg {

namespace {

std::string kind_label(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::Syntax: return "syntax error";
    case ParseErrorKind::UnknownSocket: return "unknown socket";
    case ParseErrorKind::UnknownModuleRef: return "unknown module";
    }
    return "error";
}

std::string compose(ParseErrorKind kind, const SourceSpan& span, const std::string& expected,
                    const std::string& found) {
    std::ostringstream os;
    os << "line " << span.line << ", column " << span.column << ": " << kind_label(kind) << ": expected "
       << expected << ", found '" << found << "'";
    return os.str();
}

enum class Tok { Ident, Number, Dot, LParen, RParen, Comma, Equals, Arrow, End, Bad };

struct Token {
    Tok kind = Tok::End;
    std::string_view text;
    int column = 1;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '#') break;
        const std::size_t start = i;
        Tok kind = Tok::Bad;
        if (ident_start(c)) {
            while (i < line.size() && ident_char(line[i])) ++i;
            kind = Tok::Ident;
        } else if (digit(c) || (c == '-' && i + 1 < line.size() && digit(line[i + 1]))) {
            ++i;
            while (i < line.size() && digit(line[i])) ++i;
            if (i + 1 < line.size() && line[i] == '.' && digit(line[i + 1])) {
                ++i;
                while (i < line.size() && digit(line[i])) ++i;
            }
            kind = Tok::Number;
        } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
            i += 2;
            kind = Tok::Arrow;
        } else {
            ++i;
            switch (c) {
            case '.': kind = Tok::Dot; break;
            case '(': kind = Tok::LParen; break;
            case ')': kind = Tok::RParen; break;
            case ',': kind = Tok::Comma; break;
            case '=': kind = Tok::Equals; break;
            default: {
                // Swallow a whole UTF-8 sequence so the reported token is readable.
                while (i < line.size() && (static_cast<unsigned char>(line[i]) & 0xC0) == 0x80) ++i;
                kind = Tok::Bad;
            }
            }
        }
        out.push_back({kind, line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    out.push_back({Tok::End, {}, static_cast<int>(line.size()) + 1});
    return out;
}

// A deferred reference check, run once every module declaration is known.
struct PendingRef {
    SourceSpan module_span;
    std::string module;
    std::optional<SourceSpan> socket_span;
    SocketId socket = SocketId::SpIn;
    bool needs_generic = false;
};

class LineParser {
public:
    LineParser(std::string_view line, int line_no, Netlist& out, std::vector<PendingRef>& refs)
        : toks_(tokenize(line)), line_no_(line_no), out_(out), refs_(refs) {}

    void run() {
        if (peek().kind == Tok::End) return;
        const Token kw = expect(Tok::Ident, "statement keyword");
        if (kw.text == "module") {
            module_stmt();
        } else if (kw.text == "valve") {
            valve_stmt();
        } else if (kw.text == "merge") {
            merge_stmt();
        } else if (kw.text == "supply") {
            supply_stmt();
        } else if (kw.text == "connect") {
            connect_stmt();
        } else if (kw.text == "stopper") {
            stopper_stmt();
        } else {
            fail(kw, "one of module, valve, merge, supply, connect, stopper");
        }
        expect(Tok::End, "end of line");
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    Token next() {
        Token t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }

    SourceSpan span_of(const Token& t) const {
        return {line_no_, t.column, static_cast<int>(t.text.size())};
    }

    [[noreturn]] void fail(const Token& t, const std::string& expected,
                           ParseErrorKind kind = ParseErrorKind::Syntax) const {
        const std::string found = t.kind == Tok::End ? "end of line" : std::string(t.text);
        throw ParseError(kind, span_of(t), expected, found);
    }

    Token expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) fail(peek(), what);
        return next();
    }

    double number(const std::string& what) {
        const Token t = expect(Tok::Number, what);
        double v = 0.0;
        const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc{} || res.ptr != t.text.data() + t.text.size()) fail(t, what);
        return v;
    }

    SocketId socket(const std::string& what) {
        const Token t = expect(Tok::Ident, what);
        const auto s = parse_socket(t.text);
        if (!s) fail(t, what, ParseErrorKind::UnknownSocket);
        return *s;
    }

    // <id>.<SOCKET>, with the socket optional when `default_socket` is set.
    NodeRef node_ref(std::optional<SocketId> default_socket = std::nullopt) {
        const Token id = expect(Tok::Ident, "module id");
        PendingRef ref{span_of(id), std::string(id.text), std::nullopt};
        NodeRef node{std::string(id.text), default_socket.value_or(SocketId::SpIn)};
        if (peek().kind == Tok::Dot || !default_socket) {
            expect(Tok::Dot, "'.' followed by a socket name");
            const Token st = peek();
            node.socket = socket("socket name");
            ref.socket_span = span_of(st);
        }
        ref.socket = node.socket;
        refs_.push_back(ref);
        return node;
    }

    // key=value list inside parentheses, keys restricted to `allowed`.
    std::map<std::string, double> keyed_numbers(std::initializer_list<std::string_view> allowed) {
        std::map<std::string, double> values;
        expect(Tok::LParen, "'('");
        if (peek().kind == Tok::RParen) {
            next();
            return values;
        }
        for (;;) {
            const Token key = expect(Tok::Ident, "parameter name");
            bool known = false;
            std::string expected_keys;
            for (auto k : allowed) {
                known = known || k == key.text;
                expected_keys += expected_keys.empty() ? std::string(k) : ", " + std::string(k);
            }
            if (!known) fail(key, "one of " + expected_keys);
            if (values.count(std::string(key.text)) != 0) fail(key, "each parameter at most once");
            expect(Tok::Equals, "'='");
            values[std::string(key.text)] = number("decimal number");
            if (peek().kind == Tok::Comma) {
                next();
                continue;
            }
            expect(Tok::RParen, "',' or ')'");
            return values;
        }
    }

    void module_stmt() {
        const Token id = expect(Tok::Ident, "module id");
        const Token kind = expect(Tok::Ident, "gate kind (inverter, buffer, generic)");
        ModuleSpec m;
        m.id = std::string(id.text);
        if (kind.text == "inverter") {
            m.gate = GateKind::inverter();
        } else if (kind.text == "buffer") {
            m.gate = GateKind::buffer();
        } else if (kind.text == "generic") {
            m.gate = GateKind::generic({});
        } else {
            fail(kind, "gate kind (inverter, buffer, generic)");
        }
        bool have_bellow = false;
        bool have_ratio = false;
        while (peek().kind == Tok::Ident) {
            const Token opt = next();
            if (opt.text == "bellow" && !have_bellow) {
                have_bellow = true;
                auto v = keyed_numbers({"thickness", "pitch", "external_angle", "internal_angle", "diameter",
                                        "length"});
                BellowSpec b;
                if (v.count("thickness")) b.wall_thickness = v["thickness"];
                if (v.count("pitch")) b.pitch = v["pitch"];
                if (v.count("external_angle")) b.external_angle = v["external_angle"];
                if (v.count("internal_angle")) b.internal_angle = v["internal_angle"];
                if (v.count("diameter")) b.outer_diameter = v["diameter"];
                if (v.count("length")) b.length = v["length"];
                m.bellow = b;
            } else if (opt.text == "ratio" && !have_ratio) {
                have_ratio = true;
                expect(Tok::Equals, "'='");
                m.output_ratio = number("decimal number");
            } else {
                fail(opt, "bellow(...) or ratio=<r>");
            }
        }
        out_.modules.push_back(std::move(m));
    }

    ModuleSpec& generic_module(const Token& id) {
        for (auto& m : out_.modules) {
            if (m.id == id.text) {
                if (m.gate.type != GateType::Generic) fail(id, "a generic module");
                return m;
            }
        }
        fail(id, "a generic module declared earlier", ParseErrorKind::UnknownModuleRef);
    }

    void valve_stmt() {
        const Token id = expect(Tok::Ident, "module id");
        ModuleSpec& m = generic_module(id);
        const Token kind = expect(Tok::Ident, "valve kind (NO, NC)");
        ValveSpec v;
        if (kind.text == "NO") {
            v.kind = ValveKind::NormallyOpen;
        } else if (kind.text == "NC") {
            v.kind = ValveKind::NormallyClosed;
        } else {
            fail(kind, "valve kind (NO, NC)");
        }
        while (peek().kind == Tok::Ident) {
            const Token key = next();
            std::optional<SocketId>* slot = nullptr;
            if (key.text == "control") slot = &v.control;
            if (key.text == "in") slot = &v.tube_in;
            if (key.text == "out") slot = &v.tube_out;
            if (slot == nullptr) fail(key, "one of control, in, out");
            if (slot->has_value()) fail(key, "each valve key at most once");
            expect(Tok::Equals, "'='");
            *slot = socket("socket name");
        }
        m.gate.wiring.valves.push_back(v);
    }

    void merge_stmt() {
        const Token id = expect(Tok::Ident, "module id");
        ModuleSpec& m = generic_module(id);
        const SocketId a = socket("socket name");
        const SocketId b = socket("socket name");
        m.gate.wiring.merges.emplace_back(a, b);
    }

    void supply_stmt() {
        SupplySpec s;
        s.node = node_ref(SocketId::SpIn);
        const Token key = expect(Tok::Ident, "pressure=<bar>");
        if (key.text != "pressure") fail(key, "pressure=<bar>");
        expect(Tok::Equals, "'='");
        s.pressure = number("decimal number");
        out_.supplies.push_back(s);
    }

    void connect_stmt() {
        TubeSpec t;
        t.from = node_ref();
        expect(Tok::Arrow, "'->'");
        t.to = node_ref();
        if (peek().kind == Tok::Ident) {
            const Token kw = next();
            if (kw.text != "tube") fail(kw, "tube(len=<mm>, id=<mm>)");
            auto v = keyed_numbers({"len", "id"});
            if (v.count("len")) t.length = v["len"];
            if (v.count("id")) t.inner_diameter = v["id"];
        }
        out_.tubes.push_back(t);
    }

    void stopper_stmt() { out_.stoppers.push_back(node_ref()); }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int line_no_;
    Netlist& out_;
    std::vector<PendingRef>& refs_;
};

void append_number(std::string& out, double v) { out += format_number(v); }

}  // namespace

ParseError::ParseError(ParseErrorKind kind, SourceSpan span, std::string expected, std::string found)
    : Error(Errc::Parse, compose(kind, span, expected, found)),
      kind_(kind),
      span_(span),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

Netlist parse_netlist(std::string_view text) {
    Netlist out;
    std::vector<PendingRef> refs;
    std::optional<ParseError> syntax;
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        const std::string_view line =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        // After a syntax error, later lines are still read for declarations
        // so that forward references are not misreported.
        try {
            LineParser(line, line_no, out, refs).run();
        } catch (const ParseError& e) {
            if (!syntax) syntax = e;
        }
        if (end == std::string_view::npos) break;
        start = end + 1;
    }

    // Module references resolve against every declaration seen; an earlier
    // bad reference outranks a later syntax error.
    auto before_syntax = [&](const SourceSpan& span) {
        if (!syntax) return true;
        const SourceSpan& at = syntax->span();
        return span.line < at.line || (span.line == at.line && span.column < at.column);
    };
    for (const auto& r : refs) {
        if (!before_syntax(r.module_span)) continue;
        const ModuleSpec* m = out.find_module(r.module);
        if (m == nullptr) {
            throw ParseError(ParseErrorKind::UnknownModuleRef, r.module_span, "declared module id", r.module);
        }
        if (!is_exposed(m->gate, r.socket)) {
            const SourceSpan span = r.socket_span.value_or(r.module_span);
            throw ParseError(ParseErrorKind::UnknownSocket, span,
                             "socket exposed by " + std::string(to_string(m->gate.type)) + " module",
                             std::string(to_string(r.socket)));
        }
    }
    if (syntax) throw *syntax;
    return out;
}

std::string format_number(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string s(buf, res.ptr);
    if (s == "-0") s = "0";
    return s;
}

std::string serialize_netlist(const Netlist& netlist) {
    const ValidationReport report = validate(netlist);
    if (!report.ok()) {
        const auto& e = report.errors.front();
        throw InvalidNetlist("cannot serialize invalid netlist: " + e.code + " at " + e.location + ": " +
                             e.message);
    }
    const Netlist n = canonical(netlist);
    const BellowSpec defaults;
    std::string out;
    for (const auto& m : n.modules) {
        out += "module " + m.id + " " + std::string(to_string(m.gate.type));
        if (m.bellow) {
            const BellowSpec& b = *m.bellow;
            out += " bellow(thickness=";
            append_number(out, b.wall_thickness);
            auto opt = [&](const char* key, double v, double d) {
                if (v == d) return;
                out += ", ";
                out += key;
                out += "=";
                append_number(out, v);
            };
            opt("pitch", b.pitch, defaults.pitch);
            opt("external_angle", b.external_angle, defaults.external_angle);
            opt("internal_angle", b.internal_angle, defaults.internal_angle);
            opt("diameter", b.outer_diameter, defaults.outer_diameter);
            opt("length", b.length, defaults.length);
            out += ")";
        }
        if (m.output_ratio) {
            out += " ratio=";
            append_number(out, *m.output_ratio);
        }
        out += "\n";
        if (m.gate.type == GateType::Generic) {
            for (const auto& v : m.gate.wiring.valves) {
                out += "valve " + m.id + " " + std::string(to_string(v.kind));
                out += " control=" + std::string(to_string(*v.control));
                out += " in=" + std::string(to_string(*v.tube_in));
                out += " out=" + std::string(to_string(*v.tube_out));
                out += "\n";
            }
            for (const auto& [a, b] : m.gate.wiring.merges) {
                out += "merge " + m.id + " " + std::string(to_string(a)) + " " + std::string(to_string(b)) + "\n";
            }
        }
    }
    if (!n.supplies.empty()) out += "\n";
    for (const auto& s : n.supplies) {
        out += "supply " + (s.node.socket == SocketId::SpIn ? s.node.module : s.node.str()) + " pressure=";
        append_number(out, s.pressure);
        out += "\n";
    }
    if (!n.tubes.empty()) out += "\n";
    for (const auto& t : n.tubes) {
        out += "connect " + t.from.str() + " -> " + t.to.str() + " tube(len=";
        append_number(out, t.length);
        out += ", id=";
        append_number(out, t.inner_diameter);
        out += ")\n";
    }
    if (!n.stoppers.empty()) out += "\n";
    for (const auto& s : n.stoppers) out += "stopper " + s.str() + "\n";
    return out;
}

std::vector<Diagnostic> lint(const Netlist& netlist, const LintOptions& options) {
    std::vector<Diagnostic> warnings;
    for (const auto& t : netlist.tubes) {
        if (t.length <= options.module_spacing) {
            warnings.push_back({"TUBE_TOO_SHORT",
                                "tube of " + format_number(t.length) + " mm is not longer than the " +
                                    format_number(options.module_spacing) + " mm module spacing",
                                t.from.str() + " -> " + t.to.str()});
        }
    }
    return warnings;
}

Netlist read_netlist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open netlist '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_netlist(ss.str());
}

}  // namespace plg
