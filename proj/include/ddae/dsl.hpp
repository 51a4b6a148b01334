#pragma once

// Line-oriented system description language.
//
//   system n=<int> m=<int> r=<float>
//   matrix <name> = [[a,b],[c,d]]          # row-major, complex as a+bi
//   kernel <A|B|C|D>:
//     atom <tau> <matrix>
//     poly [<a>,<b>] <M0> <M1> ...         # density sum Mk theta^k
//     exp  [<a>,<b>] <K1> <S> <K2>         # density K1 e^{theta S} K2
//   init phi=<vector> chi=<file|vector> psi=<file|vector> h=<float>
//
// A <matrix> is a defined name, a literal [[...]], or a bare number (1x1).

#include <ddae/errors.hpp>
#include <ddae/model.hpp>

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ddae::dsl {

class ParseError : public Error {
  public:
    enum class Kind { Syntax, UndefinedMatrix, DimensionMismatch, SupportOutOfRange, Io };

    ParseError(Kind kind, int line, int column, const std::string& message);

    Kind kind;
    int line;
    int column;
    std::string detail;
};

const char* to_string(ParseError::Kind kind);

/// A matrix operand: a reference to a named matrix or an inline literal.
struct MatrixRef {
    std::string name;  // empty for literals
    Matrix literal;

    friend bool operator==(const MatrixRef&, const MatrixRef&);
};

struct AtomTerm {
    double tau = 0.0;
    MatrixRef weight;
    friend bool operator==(const AtomTerm&, const AtomTerm&) = default;
};

struct PolyTerm {
    double a = 0.0;
    double b = 0.0;
    std::vector<MatrixRef> coefficients;
    friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

struct ExpTerm {
    double a = 0.0;
    double b = 0.0;
    MatrixRef left;
    MatrixRef generator;
    MatrixRef right;
    friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

using KernelTerm = std::variant<AtomTerm, PolyTerm, ExpTerm>;

/// History given either as a constant vector or as a samples file.
struct HistorySpec {
    std::variant<Vector, std::string> source;
    friend bool operator==(const HistorySpec&, const HistorySpec&);
};

struct InitSpec {
    Vector phi;
    HistorySpec chi;
    HistorySpec psi;
    double h = 0.0;
    friend bool operator==(const InitSpec&, const InitSpec&);
};

struct NamedMatrix {
    std::string name;
    Matrix value;
    friend bool operator==(const NamedMatrix&, const NamedMatrix&);
};

struct SystemDescription {
    Index n = 0;
    Index m = 0;
    double r = 0.0;
    std::vector<NamedMatrix> matrices;
    std::array<std::vector<KernelTerm>, 4> kernels;  // A, B, C, D
    std::optional<InitSpec> init;

    friend bool operator==(const SystemDescription&, const SystemDescription&) = default;
};

SystemDescription parse(std::string_view text);
SystemDescription parse_file(const std::filesystem::path& path);

/// Canonical text; parse(emit(d)) == d.
std::string emit(const SystemDescription& description);

DdaeSystem build_system(const SystemDescription& description);
/// Initial state at step h (defaults to the init block's h). Constant
/// histories are sampled at that step; sample files must match it.
InitialState build_initial_state(const SystemDescription& description,
                                 const std::filesystem::path& base_dir,
                                 std::optional<double> h = std::nullopt);

/// Literal-only description of a system (no named matrices).
SystemDescription describe(const DdaeSystem& sys);

// Shared token helpers, also used for CLI flag values.
Complex parse_complex(std::string_view token);
Matrix parse_matrix(std::string_view token);
Vector parse_vector(std::string_view token);
std::string format_number(double value);
std::string format_complex(Complex value);
std::string format_matrix(const Matrix& value);
std::string format_vector(const Vector& value);

}  // namespace ddae::dsl
