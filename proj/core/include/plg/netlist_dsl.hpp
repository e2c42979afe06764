#pragma once

// Text format for PLG circuits (.plg files). One statement per line, `#`
// starts a comment. Pressures are bar gauge, lengths mm; units are implied
// by the keyword and never written.
//
//   module <id> <inverter|buffer|generic> [bellow(thickness=<mm>, ...)] [ratio=<r>]
//   valve <id> <NO|NC> control=<SOCKET> in=<SOCKET> out=<SOCKET>     (generic only)
//   merge <id> <SOCKET> <SOCKET>                                     (generic only)
//   supply <id>[.<SOCKET>] pressure=<bar>                            (socket defaults to SP_IN)
//   connect <a>.<SOCKET> -> <b>.<SOCKET> [tube(len=<mm>, id=<mm>)]
//   stopper <id>.<SOCKET>
//
// bellow() keys: thickness, pitch, external_angle, internal_angle, diameter,
// length. tube() keys: len (default 140), id (default 2).

#include "plg/circuit.hpp"
#include "plg/error.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace plg {

struct SourceSpan {
    int line = 1;
    int column = 1;
    int length = 0;

    bool operator==(const SourceSpan&) const = default;
};

enum class ParseErrorKind { Syntax, UnknownSocket, UnknownModuleRef };

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, SourceSpan span, std::string expected, std::string found);

    [[nodiscard]] ParseErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const SourceSpan& span() const noexcept { return span_; }
    [[nodiscard]] const std::string& expected() const noexcept { return expected_; }
    [[nodiscard]] const std::string& found() const noexcept { return found_; }

private:
    ParseErrorKind kind_;
    SourceSpan span_;
    std::string expected_;
    std::string found_;
};

/// Throws ParseError on the first malformed statement. The result is not
/// validated; run `validate` before simulating.
Netlist parse_netlist(std::string_view text);

/// Canonical text: modules in id order (generic valve/merge lines right
/// after their module), then supplies, connects, stoppers. Throws
/// InvalidNetlist when validation reports errors.
std::string serialize_netlist(const Netlist& netlist);

/// Shortest decimal text that reads back to the same double; never uses an
/// exponent.
std::string format_number(double value);

struct LintOptions {
    double module_spacing = 66.0;  // mm between neighbouring module ports
};

/// Style warnings. TUBE_TOO_SHORT: a tube no longer than the module spacing
/// leaves no slack for the body to elongate.
std::vector<Diagnostic> lint(const Netlist& netlist, const LintOptions& options = {});

Netlist read_netlist_file(const std::string& path);

}  // namespace plg
