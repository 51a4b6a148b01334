#include <ddae/errors.hpp>
#include <ddae/spectrum.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddae {

namespace {

struct Box {
    Rect rect;
    int count = 0;
};

struct Outcome {
    std::vector<Box> children;
    std::optional<Root> root;
    std::optional<std::string> warning;
};

int thread_count() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

Root polish(const AnalyticFunction& f, const Box& box, const RootFinderOptions& options) {
    const Complex center = box.rect.center();
    Complex s = center;
    if (box.count == 1) {
        for (int iter = 0; iter < 60; ++iter) {
            const Complex fs = f(s);
            if (std::abs(fs) <= options.newton_tolerance * f.scale(s)) {
                break;
            }
            const double delta = 1e-7 * (1.0 + std::abs(s));
            const Complex derivative = (f(s + delta) - f(s - delta)) / (2.0 * delta);
            if (derivative == Complex(0.0)) {
                break;
            }
            const Complex step = fs / derivative;
            const Complex next = s - step;
            if (std::abs(next - center) > box.rect.diameter() + 1e-6 * (1.0 + std::abs(center))) {
                // Newton left the isolating box; keep the bisection estimate.
                s = center;
                break;
            }
            s = next;
            if (std::abs(step) <= 1e-16 * (1.0 + std::abs(s))) {
                break;
            }
        }
    }
    return Root{s, box.count, std::abs(f(s))};
}

// Cuts sit slightly off the midpoint: a zero of even order lying exactly on a
// cut produces a 2 pi phase jump that sampling cannot see, and symmetric
// windows put the midpoint on round numbers such as the real axis.
constexpr double kCutBias = 0.0137;

std::pair<Rect, Rect> split(const Rect& rect, double offset) {
    Rect first = rect;
    Rect second = rect;
    if (rect.width() >= rect.height()) {
        const double cut = 0.5 * (rect.re_min + rect.re_max) + kCutBias * rect.width() + offset;
        first.re_max = cut;
        second.re_min = cut;
    } else {
        const double cut = 0.5 * (rect.im_min + rect.im_max) + kCutBias * rect.height() + offset;
        first.im_max = cut;
        second.im_min = cut;
    }
    return {first, second};
}

// Deterministic jitter sequence 0, +d, -d, +2d, -2d, ...
double jitter_offset(int attempt, double unit) {
    if (attempt == 0) {
        return 0.0;
    }
    const double magnitude = unit * static_cast<double>((attempt + 1) / 2);
    return attempt % 2 == 1 ? magnitude : -magnitude;
}

Outcome process(const AnalyticFunction& f, const Box& box, const RootFinderOptions& options,
                Execution inner) {
    Outcome out;
    if (box.rect.diameter() < options.min_box_diameter) {
        out.root = polish(f, box, options);
        return out;
    }
    const double unit = options.jitter * box.rect.diameter();
    for (int attempt = 0; attempt <= options.max_jitter_retries; ++attempt) {
        const auto [first, second] = split(box.rect, jitter_offset(attempt, unit));
        try {
            const int c1 = winding_number(f, first, inner).count;
            const int c2 = winding_number(f, second, inner).count;
            if (c1 < 0 || c2 < 0 || c1 + c2 != box.count) {
                continue;
            }
            for (const auto& [rect, c] : {std::pair{first, c1}, std::pair{second, c2}}) {
                if (c > 0) {
                    out.children.push_back(Box{rect, c});
                }
            }
            return out;
        } catch (const RootOnBoundary&) {
            continue;
        }
    }
    out.root = polish(f, box, options);
    out.warning = "could not split box around " + std::to_string(box.rect.center().real()) +
                  (box.rect.center().imag() < 0 ? "" : "+") +
                  std::to_string(box.rect.center().imag()) + "i; reported as one cluster";
    return out;
}

void sort_roots(std::vector<Root>& roots) {
    std::sort(roots.begin(), roots.end(), [](const Root& p, const Root& q) {
        if (p.location.real() != q.location.real()) {
            return p.location.real() > q.location.real();
        }
        return p.location.imag() < q.location.imag();
    });
}

}  // namespace

std::vector<Root> isolate_roots(const AnalyticFunction& f, const Rect& window, int max_roots,
                                const RootFinderOptions& options,
                                std::vector<std::string>* warnings) {
    Rect outer = window;
    int total = -1;
    const double unit = options.jitter * window.diameter();
    for (int attempt = 0; attempt <= options.max_jitter_retries; ++attempt) {
        const double grow = unit * attempt;
        outer = Rect{window.re_min - grow, window.re_max + grow, window.im_min - grow,
                     window.im_max + grow};
        try {
            total = winding_number(f, outer, options.execution).count;
            break;
        } catch (const RootOnBoundary&) {
            if (attempt == options.max_jitter_retries) {
                throw;
            }
        }
    }
    if (warnings && outer.re_min != window.re_min) {
        warnings->push_back("window boundary passed through a root; widened by " +
                            std::to_string(window.re_min - outer.re_min));
    }
    if (total > max_roots) {
        throw WindowTooLarge(total, max_roots);
    }

    std::vector<Root> roots;
    std::vector<Box> frontier;
    if (total > 0) {
        frontier.push_back(Box{outer, total});
    }
    while (!frontier.empty()) {
        std::vector<Outcome> outcomes(frontier.size());
        const auto count = static_cast<std::ptrdiff_t>(frontier.size());
        const bool outer_parallel =
            options.execution == Execution::Parallel && count >= 2 && thread_count() > 1;
        if (!outer_parallel) {
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                outcomes[i] = process(f, frontier[i], options, options.execution);
            }
        } else {
            std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                try {
                    outcomes[i] = process(f, frontier[i], options, Execution::Serial);
                } catch (...) {
#pragma omp critical(ddae_roots_failure)
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
            if (failure) {
                std::rethrow_exception(failure);
            }
        }
        std::vector<Box> next;
        for (auto& outcome : outcomes) {
            if (outcome.root) {
                roots.push_back(*outcome.root);
            }
            if (outcome.warning && warnings) {
                warnings->push_back(*outcome.warning);
            }
            next.insert(next.end(), outcome.children.begin(), outcome.children.end());
        }
        frontier = std::move(next);
    }
    sort_roots(roots);
    return roots;
}

SpectrumReport find_roots(const DdaeSystem& sys, const Rect& window, int max_roots,
                          const RootFinderOptions& options) {
    SpectrumReport report;
    report.window = window;
    report.roots =
        isolate_roots(characteristic_function(sys), window, max_roots, options, &report.warnings);
    report.growth_bound_in_window = -std::numeric_limits<double>::infinity();
    int multiplicity = 0;
    for (const auto& root : report.roots) {
        report.growth_bound_in_window =
            std::max(report.growth_bound_in_window, root.location.real());
        multiplicity += root.multiplicity;
    }

    bool truncated = multiplicity >= max_roots;
    if (sys.m > 0) {
        try {
            report.delta0_roots = isolate_roots(delta0_function(sys), window, max_roots, options,
                                                &report.warnings);
        } catch (const WindowTooLarge& e) {
            report.warnings.push_back("det Delta_0 has " + std::to_string(e.count) +
                                      " zeros in the window; not localized");
            truncated = true;
        }
        for (const auto& root : report.delta0_roots) {
            if (root.location.real() - window.re_min < 0.5) {
                truncated = true;
            }
        }
    }
    if (truncated) {
        report.warnings.push_back("window may truncate spectrum");
    }
    return report;
}

}  // namespace ddae
