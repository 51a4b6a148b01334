#include <ddae/formats.hpp>

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace ddae::cli {

namespace {

bool all_real(const std::vector<Vector>& rows) {
    for (const auto& v : rows) {
        for (Index i = 0; i < v.size(); ++i) {
            if (v(i).imag() != 0.0) {
                return false;
            }
        }
    }
    return true;
}

nlohmann::ordered_json roots_json(const std::vector<Root>& roots) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& root : roots) {
        nlohmann::ordered_json item;
        item["re"] = root.location.real();
        item["im"] = root.location.imag();
        item["mult"] = root.multiplicity;
        item["residual"] = root.residual;
        list.push_back(std::move(item));
    }
    return list;
}

}  // namespace

std::string format_sig17(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string format_sig17(Complex value, bool real_only) {
    if (real_only) {
        return format_sig17(value.real());
    }
    const std::string imag = format_sig17(value.imag());
    return format_sig17(value.real()) + (imag.front() == '-' ? "" : "+") + imag + "i";
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
    const bool real_only = all_real(traj.memory_x) && all_real(traj.memory_y) &&
                           all_real(traj.x) && all_real(traj.y);
    out << "t";
    for (Index i = 1; i <= traj.n; ++i) {
        out << ",x" << i;
    }
    for (Index i = 1; i <= traj.m; ++i) {
        out << ",y" << i;
    }
    out << "\n";
    auto row = [&](Index k) {
        out << format_sig17(static_cast<double>(k) * traj.h);
        const Vector& x = traj.x_at(k);
        const Vector& y = traj.y_at(k);
        for (Index i = 0; i < x.size(); ++i) {
            out << "," << format_sig17(x(i), real_only);
        }
        for (Index i = 0; i < y.size(); ++i) {
            out << "," << format_sig17(y(i), real_only);
        }
        out << "\n";
    };
    for (Index k = -traj.memory_steps(); k < 0; ++k) {
        row(k);
    }
    for (Index k = 0; k <= traj.steps(); ++k) {
        row(k);
    }
}

std::string spectrum_json(const SpectrumReport& report) {
    nlohmann::ordered_json doc;
    doc["window"]["re_min"] = report.window.re_min;
    doc["window"]["re_max"] = report.window.re_max;
    doc["window"]["im_max"] = report.window.im_max;
    doc["roots"] = roots_json(report.roots);
    if (std::isfinite(report.growth_bound_in_window)) {
        doc["growth_bound"] = report.growth_bound_in_window;
    } else {
        doc["growth_bound"] = nullptr;
    }
    doc["delta0_roots"] = roots_json(report.delta0_roots);
    doc["warnings"] = report.warnings;
    return doc.dump(2) + "\n";
}

}  // namespace ddae::cli
