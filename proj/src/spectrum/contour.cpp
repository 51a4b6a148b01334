#include <ddae/errors.hpp>
#include <ddae/spectrum.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddae {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxRefineDepth = 50;
constexpr double kBoundaryTolerance = 1e-12;

struct SegmentPhase {
    double phase = 0.0;
    Index evaluations = 0;
    bool unresolved = false;
};

bool too_small(const AnalyticFunction& f, Complex s, Complex value) {
    return !(std::abs(value) >= kBoundaryTolerance * f.scale(s));
}

// Phase change of f from a to b. Every segment is checked at its midpoint:
// a zero of even order (or a cluster) next to the segment turns f through a
// full 2 pi between the endpoints, which the endpoint values alone cannot
// show. Segments are bisected until both halves turn by less than pi / 2 and
// |f| has no dip at the midpoint.
SegmentPhase refine(const AnalyticFunction& f, Complex a, Complex fa, Complex b, Complex fb,
                    int depth) {
    SegmentPhase out;
    const Complex mid = 0.5 * (a + b);
    const Complex fm = f(mid);
    out.evaluations = 1;
    if (too_small(f, mid, fm)) {
        out.unresolved = true;
        return out;
    }
    const double left_step = std::arg(fm / fa);
    const double right_step = std::arg(fb / fm);
    const bool dip = std::abs(fm) < 0.5 * std::min(std::abs(fa), std::abs(fb));
    if (std::abs(left_step) < 0.5 * kPi && std::abs(right_step) < 0.5 * kPi && !dip) {
        out.phase = left_step + right_step;
        return out;
    }
    if (depth >= kMaxRefineDepth) {
        out.unresolved = true;
        return out;
    }
    const SegmentPhase left = refine(f, a, fa, mid, fm, depth + 1);
    const SegmentPhase right = refine(f, mid, fm, b, fb, depth + 1);
    out.phase = left.phase + right.phase;
    out.evaluations += left.evaluations + right.evaluations;
    out.unresolved = left.unresolved || right.unresolved;
    return out;
}

std::vector<Complex> contour_points(const AnalyticFunction& f, const Rect& rect) {
    const std::array<Complex, 5> corners = {
        Complex(rect.re_min, rect.im_min), Complex(rect.re_max, rect.im_min),
        Complex(rect.re_max, rect.im_max), Complex(rect.re_min, rect.im_max),
        Complex(rect.re_min, rect.im_min)};
    std::vector<Complex> points;
    for (int e = 0; e < 4; ++e) {
        const Complex from = corners[e];
        const Complex to = corners[e + 1];
        const double length = std::abs(to - from);
        // e^{-s tau} turns by at most tau radians per unit length along the edge.
        const double rate = f.exponential_type() + 1.0;
        const auto pieces = static_cast<Index>(
            std::clamp(std::ceil(8.0 + 4.0 * length * rate), 8.0, 65536.0));
        for (Index k = 0; k < pieces; ++k) {
            points.push_back(from + (to - from) * (static_cast<double>(k) / pieces));
        }
    }
    points.push_back(corners[0]);
    return points;
}

}  // namespace

std::vector<Complex> evaluate_batch(const AnalyticFunction& f, const std::vector<Complex>& points,
                                    Execution exec) {
    std::vector<Complex> values(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            values[i] = f(points[i]);
        }
        return values;
    }
    std::exception_ptr failure;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        try {
            values[i] = f(points[i]);
        } catch (...) {
#pragma omp critical(ddae_batch_failure)
            if (!failure) {
                failure = std::current_exception();
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return values;
}

Winding winding_number(const AnalyticFunction& f, const Rect& rect, Execution exec) {
    if (!(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min)) {
        throw Error("rectangle must have positive width and height");
    }
    const std::vector<Complex> points = contour_points(f, rect);
    const std::vector<Complex> values = evaluate_batch(f, points, exec);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (too_small(f, points[i], values[i])) {
            throw RootOnBoundary("zero on the contour near " + std::to_string(points[i].real()) +
                                 (points[i].imag() < 0 ? "" : "+") +
                                 std::to_string(points[i].imag()) + "i");
        }
    }

    const auto segments = static_cast<std::ptrdiff_t>(points.size()) - 1;
    std::vector<SegmentPhase> phases(segments);
    auto run = [&](std::ptrdiff_t i) {
        phases[i] = refine(f, points[i], values[i], points[i + 1], values[i + 1], 0);
    };
    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < segments; ++i) {
            run(i);
        }
    } else {
        std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 4)
        for (std::ptrdiff_t i = 0; i < segments; ++i) {
            try {
                run(i);
            } catch (...) {
#pragma omp critical(ddae_winding_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    Winding out;
    out.evaluations = static_cast<Index>(points.size());
    double total = 0.0;
    for (const auto& seg : phases) {
        if (seg.unresolved) {
            throw RootOnBoundary("phase could not be resolved along the contour");
        }
        total += seg.phase;
        out.evaluations += seg.evaluations;
    }
    out.turns = total / (2.0 * kPi);
    out.count = static_cast<int>(std::lround(out.turns));
    if (std::abs(out.turns - out.count) > 1e-6) {
        throw RootOnBoundary("winding number is not an integer: " + std::to_string(out.turns));
    }
    return out;
}

int count_roots(const DdaeSystem& sys, const Rect& rect, Execution exec) {
    return winding_number(characteristic_function(sys), rect, exec).count;
}

}  // namespace ddae
