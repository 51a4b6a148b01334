#include <ddae/commands.hpp>

#include <ddae/dsl.hpp>
#include <ddae/formats.hpp>
#include <ddae/fsa.hpp>
#include <ddae/graph.hpp>
#include <ddae/sim.hpp>
#include <ddae/spectrum.hpp>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string_view>

namespace ddae::cli {

namespace {

constexpr double kConsistencyTolerance = 1e-9;

template <typename F>
int guarded(const std::filesystem::path& file, std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const dsl::ParseError& e) {
        if (e.line > 0) {
            err << file.string() << ":" << e.line << ":" << e.column << ": "
                << dsl::to_string(e.kind) << ": " << e.detail << "\n";
        } else {
            err << file.string() << ": " << dsl::to_string(e.kind) << ": " << e.detail << "\n";
        }
    } catch (const std::exception& e) {
        err << file.string() << ": error: " << e.what() << "\n";
    }
    return 2;
}

// Writes text to path, or to out when no path is given.
void deliver(const std::string& text, const std::optional<std::filesystem::path>& path,
             std::ostream& out) {
    if (!path) {
        out << text;
        return;
    }
    std::ofstream file(*path, std::ios::binary);
    if (!file) {
        throw Error("cannot write " + path->string());
    }
    file << text;
}

RealMatrix real_part(const Matrix& value, const char* what) {
    if (value.imag().cwiseAbs().maxCoeff() != 0.0) {
        throw DimensionMismatch(std::string(what) + " must be real");
    }
    return value.real();
}

}  // namespace

void configure_logging() {
    auto logger = spdlog::get("ddae");
    if (!logger) {
        logger = spdlog::stderr_logger_mt("ddae");
        spdlog::set_default_logger(logger);
    }
    spdlog::level::level_enum level = spdlog::level::warn;
    if (const char* env = std::getenv("DDAE_LOG")) {
        // from_str maps unknown names to off; keep the default for those.
        const auto parsed = spdlog::level::from_str(env);
        if (parsed != spdlog::level::off || std::string_view(env) == "off") {
            level = parsed;
        }
    }
    spdlog::set_level(level);
}

int cmd_check(const std::filesystem::path& file, std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const auto desc = dsl::parse_file(file);
        const DdaeSystem sys = dsl::build_system(desc);
        const WellPosedness wp = classify(sys);
        out << "classification: " << to_string(wp.kind) << "\n";
        out << "D{0}: " << dsl::format_matrix(atom_at_zero(sys.d)) << "\n";
        out << "smallest singular value of J: " << format_sig17(wp.smallest_singular_value)
            << "\n";
        const BlockDiagram diagram = canonical_diagram(sys);
        const CausalityReport report = causality_check(diagram);
        if (report.acyclic) {
            out << "causality: no loop, adjacency nilpotent with index "
                << report.nilpotency_index.value_or(0) << "\n";
        } else {
            out << "causality: loop";
            for (Index v : *report.loop) {
                out << " " << diagram.tags[v].name();
            }
            out << "\n";
        }
        if (desc.init) {
            const InitialState init = dsl::build_initial_state(desc, file.parent_path());
            const double residual = consistency_residual(sys, init);
            out << "consistency residual: " << format_sig17(residual) << "\n";
            if (residual > kConsistencyTolerance) {
                out << "warning: initial data does not satisfy the algebraic equation at t = 0\n";
            }
        } else {
            out << "consistency residual: no init block\n";
        }
        return wp.kind == WellPosedness::Kind::SingularJ ? 1 : 0;
    });
}

int cmd_graph(const std::filesystem::path& file, const std::optional<std::filesystem::path>& dot_file,
              std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const DdaeSystem sys = dsl::build_system(dsl::parse_file(file));
        deliver(to_dot(canonical_diagram(sys)), dot_file, out);
        return 0;
    });
}

int cmd_simulate(const std::filesystem::path& file, const SimulateOptions& options,
                 std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const auto desc = dsl::parse_file(file);
        const DdaeSystem sys = dsl::build_system(desc);
        const InitialState init = dsl::build_initial_state(desc, file.parent_path(), options.step);
        spdlog::info("simulating n={} m={} r={} with h={} up to {}", sys.n, sys.m, sys.r, init.h,
                     options.horizon);
        const double residual = consistency_residual(sys, init);
        if (residual > kConsistencyTolerance) {
            spdlog::warn("initial data inconsistent with the algebraic equation (residual {})",
                         residual);
        }
        const Trajectory traj = simulate(sys, init, init.h, options.horizon);
        std::ostringstream csv;
        write_trajectory_csv(traj, csv);
        deliver(csv.str(), options.out_file, out);
        return 0;
    });
}

int cmd_spectrum(const std::filesystem::path& file, const SpectrumOptions& options,
                 std::ostream& out, std::ostream& err) {
    return guarded(file, err, [&] {
        const DdaeSystem sys = dsl::build_system(dsl::parse_file(file));
        const Rect window{options.re_min, options.re_max, -options.im_max, options.im_max};
        const SpectrumReport report = find_roots(sys, window, options.max_roots);
        for (const auto& warning : report.warnings) {
            spdlog::warn("{}", warning);
        }
        spdlog::info("{} roots in window", report.roots.size());
        deliver(spectrum_json(report), options.out_file, out);
        return 0;
    });
}

int cmd_fsa(const FsaOptions& options, std::ostream& out, std::ostream& err) {
    return guarded("fsa", err, [&] {
        FsaPlant plant;
        plant.e = real_part(dsl::parse_matrix(options.e), "E");
        plant.f = real_part(dsl::parse_matrix(options.f), "F");
        plant.t = options.t;
        plant.validate();
        RealMatrix gain;
        if (options.gain) {
            gain = real_part(dsl::parse_matrix(*options.gain), "G");
        } else if (options.poles) {
            const Vector poles = dsl::parse_vector(*options.poles);
            gain = place_poles(plant, std::vector<Complex>(poles.begin(), poles.end()));
        } else {
            throw Error("either --poles or --G is required");
        }
        const DdaeSystem sys = build_fsa(plant, gain);
        dsl::SystemDescription desc = dsl::describe(sys);
        dsl::InitSpec init;
        init.phi = Vector::Ones(sys.n);
        init.chi = dsl::HistorySpec{Vector(Vector::Ones(sys.n))};
        init.psi = dsl::HistorySpec{Vector(Vector::Ones(sys.m))};
        init.h = plant.t / 100.0;
        desc.init = init;
        const std::string text =
            "# finite spectrum assignment, G = " + dsl::format_matrix(gain.cast<Complex>()) + "\n" +
            dsl::emit(desc);
        deliver(text, options.out_file, out);
        if (options.out_file) {
            out << "G = " << dsl::format_matrix(gain.cast<Complex>()) << "\n";
        }
        return 0;
    });
}

}  // namespace ddae::cli
