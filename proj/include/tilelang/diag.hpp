#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tilelang {

// Position within a DSL source file. line/col are 1-based; {0,0} means
// "no source location" (IR built programmatically).
struct SourcePos {
    int line = 0;
    int col = 0;

    bool known() const { return line > 0; }
    bool operator==(const SourcePos&) const = default;
};

inline std::string to_string(SourcePos p) {
    if (!p.known()) return "<builtin>";
    return std::to_string(p.line) + ":" + std::to_string(p.col);
}

enum class Severity { Error, Warning };

// One diagnostic. `code` is a stable machine-readable identifier
// (e.g. "MissingChooser"); `message` is for humans.
struct Diagnostic {
    std::string code;
    std::string message;
    SourcePos pos;
    Severity severity = Severity::Error;
};

inline std::string to_string(const Diagnostic& d) {
    std::ostringstream os;
    os << (d.severity == Severity::Error ? "error" : "warning");
    if (d.pos.known()) os << " at " << to_string(d.pos);
    os << " [" << d.code << "]: " << d.message;
    return os.str();
}

inline bool has_errors(const std::vector<Diagnostic>& ds) {
    for (const auto& d : ds)
        if (d.severity == Severity::Error) return true;
    return false;
}

// Thrown by operations that reject their input outright (bad join,
// malformed file, unstable seed...). Carries a single diagnostic.
class TileError : public std::runtime_error {
public:
    explicit TileError(Diagnostic d) : std::runtime_error(to_string(d)), diag_(std::move(d)) {}

    TileError(std::string code, std::string message, SourcePos pos = {})
        : TileError(Diagnostic{std::move(code), std::move(message), pos, Severity::Error}) {}

    const Diagnostic& diag() const { return diag_; }

private:
    Diagnostic diag_;
};

}  // namespace tilelang
