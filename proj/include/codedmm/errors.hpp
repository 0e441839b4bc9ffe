#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace codedmm {

/// Base class for every error the library throws.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operand shapes do not conform (multiply, encode, stitch, assemble).
class ShapeError : public Error {
  public:
    using Error::Error;
};

/// A 1-based index interval is empty or out of bounds.
class IndexError : public Error {
  public:
    using Error::Error;
};

/// A cut multiplicity does not divide the edge it slices.
class DivisibilityError : public Error {
  public:
    DivisibilityError(char axis, std::int64_t edge, std::int64_t cuts)
        : Error(std::string("axis ") + axis + ": cut count " + std::to_string(cuts) +
                " does not divide edge length " + std::to_string(edge)),
          axis_(axis),
          divisor_(cuts) {}

    char axis() const { return axis_; }
    std::int64_t required_divisor() const { return divisor_; }

  private:
    char axis_;
    std::int64_t divisor_;
};

/// Fewer distinct results than the recovery threshold requires.
class InsufficientResultsError : public Error {
  public:
    InsufficientResultsError(std::int64_t have, std::int64_t need)
        : Error("insufficient results: have " + std::to_string(have) + ", need " +
                std::to_string(need)),
          have_(have),
          need_(need) {}

    std::int64_t have() const { return have_; }
    std::int64_t need() const { return need_; }

  private:
    std::int64_t have_;
    std::int64_t need_;
};

/// Interpolation system condition estimate above the safety threshold.
class ConditioningError : public Error {
  public:
    explicit ConditioningError(double cond_estimate)
        : Error("interpolation system too ill-conditioned: condition estimate " +
                std::to_string(cond_estimate)),
          cond_(cond_estimate) {}

    double cond_estimate() const { return cond_; }

  private:
    double cond_;
};

/// Invalid configuration or plan (bad field, unsupported combination).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Assembly was attempted with layer products missing.
class IncompleteAssemblyError : public Error {
  public:
    explicit IncompleteAssemblyError(std::vector<std::int64_t> missing)
        : Error(format_message(missing)), missing_(std::move(missing)) {}

    const std::vector<std::int64_t>& missing_layers() const { return missing_; }

  private:
    static std::string format_message(const std::vector<std::int64_t>& missing) {
        std::string msg = "assembly incomplete, missing layers:";
        for (auto id : missing) msg += " " + std::to_string(id);
        return msg;
    }

    std::vector<std::int64_t> missing_;
};

}  // namespace codedmm
