#pragma once

#include <ddae/sim.hpp>
#include <ddae/spectrum.hpp>

#include <ostream>
#include <string>

namespace ddae::cli {

/// Number with 17 significant digits (%.17g).
std::string format_sig17(double value);
/// a+bi with 17 significant digits, or just a when every entry is real.
std::string format_sig17(Complex value, bool real_only);

/// Header `t,x1..xn,y1..ym`; rows for the memory segment (t < 0) then the
/// computed solution from t = 0.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

/// Spectrum report as JSON with a fixed key order.
std::string spectrum_json(const SpectrumReport& report);

}  // namespace ddae::cli
