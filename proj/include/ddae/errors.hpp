#pragma once

#include <stdexcept>
#include <string>

namespace ddae {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class SupportOutOfRange : public Error {
  public:
    using Error::Error;
};

class NonAtomicConvolution : public Error {
  public:
    NonAtomicConvolution() : Error("convolution requires purely atomic kernels") {}
};

class AtomOffGrid : public Error {
  public:
    AtomOffGrid(double location, double step)
        : Error("atom at " + std::to_string(location) + " is not on the grid of step " +
                std::to_string(step)),
          location(location), step(step) {}
    double location;
    double step;
};

class NotWellPosed : public Error {
  public:
    explicit NotWellPosed(double smallest_singular_value)
        : Error("I - D{0} is singular (smallest singular value " +
                std::to_string(smallest_singular_value) + ")"),
          smallest_singular_value(smallest_singular_value) {}
    double smallest_singular_value;
};

class HorizonNotMultipleOfStep : public Error {
  public:
    using Error::Error;
};

class OffGrid : public Error {
  public:
    using Error::Error;
};

class RootOnBoundary : public Error {
  public:
    using Error::Error;
};

class WindowTooLarge : public Error {
  public:
    WindowTooLarge(int count, int max_roots)
        : Error("window holds " + std::to_string(count) + " roots, more than max_roots = " +
                std::to_string(max_roots)),
          count(count), max_roots(max_roots) {}
    int count;
    int max_roots;
};

class DimensionTooLarge : public Error {
  public:
    using Error::Error;
};

class Uncontrollable : public Error {
  public:
    Uncontrollable(int rank, std::string singular_values)
        : Error("(E, F) is not controllable: controllability matrix rank " + std::to_string(rank) +
                ", singular values " + singular_values),
          rank(rank) {}
    int rank;
};

}  // namespace ddae
