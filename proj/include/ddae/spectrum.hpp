#pragma once

// Characteristic matrices and root localization for DDAE systems.
//
//   Delta(s)   = diag(s I_n, I_m) - L[[A, B], [C, D]](s)
//   Delta_0(s) = I_m - L F(s)   with F the explicitized algebraic kernel
//
// Roots are counted with the argument principle on rectangles and isolated by
// recursive bisection; each isolated root is polished by Newton's method.

#include <ddae/model.hpp>

#include <functional>
#include <string>
#include <vector>

namespace ddae {

Matrix char_matrix(const DdaeSystem& sys, Complex s);
Complex char_det(const DdaeSystem& sys, Complex s);
/// Characteristic determinant of the explicitized system.
Complex char_det_explicit(const DdaeSystem& sys, Complex s);
Complex delta0_det(const DdaeSystem& sys, Complex s);

/// mu = det*(delta_0 I - F) as a scalar atomic measure on [0, m r].
/// Throws NonAtomicConvolution or DimensionTooLarge (m > 8).
DelayKernel conv_det(const DelayKernel& f);

/// An entire function together with its growth degree in s (the power of s
/// in its leading quasipolynomial term), used for the boundary scale.
class AnalyticFunction {
  public:
    AnalyticFunction(std::function<Complex(Complex)> f, int degree, double exponential_type)
        : f_(std::move(f)), degree_(degree), type_(exponential_type) {}

    Complex operator()(Complex s) const { return f_(s); }
    int degree() const { return degree_; }
    /// Upper bound on the total delay appearing in the function.
    double exponential_type() const { return type_; }
    /// Magnitude below which a value counts as a zero on a contour.
    double scale(Complex s) const;

  private:
    std::function<Complex(Complex)> f_;
    int degree_;
    double type_;
};

/// Characteristic function det Delta with the explicitization precomputed.
AnalyticFunction characteristic_function(const DdaeSystem& sys);
/// det Delta_0.
AnalyticFunction delta0_function(const DdaeSystem& sys);

struct Rect {
    double re_min = 0.0;
    double re_max = 0.0;
    double im_min = 0.0;
    double im_max = 0.0;

    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
    double diameter() const;
    Complex center() const { return {0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}; }
    bool contains(Complex s) const;
};

struct Winding {
    int count = 0;
    /// Total phase change divided by 2 pi, before rounding.
    double turns = 0.0;
    Index evaluations = 0;
};

/// Argument-principle winding of f around the boundary (counter-clockwise).
/// Throws RootOnBoundary when a zero sits on, or too close to, the contour.
Winding winding_number(const AnalyticFunction& f, const Rect& rect,
                       Execution exec = Execution::Parallel);

/// Number of zeros of det Delta inside rect, with multiplicity.
int count_roots(const DdaeSystem& sys, const Rect& rect, Execution exec = Execution::Parallel);

/// Evaluates f at every point; the parallel and serial paths are bitwise equal.
std::vector<Complex> evaluate_batch(const AnalyticFunction& f, const std::vector<Complex>& points,
                                    Execution exec);

struct Root {
    Complex location;
    int multiplicity = 1;
    double residual = 0.0;
};

struct SpectrumReport {
    Rect window;
    std::vector<Root> roots;
    double growth_bound_in_window = 0.0;
    std::vector<Root> delta0_roots;
    std::vector<std::string> warnings;
};

struct RootFinderOptions {
    double min_box_diameter = 1e-6;
    double newton_tolerance = 1e-10;
    int max_jitter_retries = 5;
    double jitter = 1e-6;
    Execution execution = Execution::Parallel;
};

/// Isolates the zeros of f inside window. Roots are sorted by (Re desc, Im asc).
std::vector<Root> isolate_roots(const AnalyticFunction& f, const Rect& window, int max_roots,
                                const RootFinderOptions& options,
                                std::vector<std::string>* warnings = nullptr);

/// Window is [re_min, re_max] x [im_min, im_max]. Throws WindowTooLarge when
/// the window holds more than max_roots zeros of det Delta.
SpectrumReport find_roots(const DdaeSystem& sys, const Rect& window, int max_roots,
                          const RootFinderOptions& options = {});

}  // namespace ddae
