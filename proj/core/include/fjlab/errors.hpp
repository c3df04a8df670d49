#ifndef FJLAB_ERRORS_HPP
#define FJLAB_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fjlab {

/// Machine-readable failure categories. The CLI maps these to exit codes;
/// library users can switch on code() without parsing messages.
enum class ErrorCode {
    InvalidArgument,
    NegativeWeight,
    RowSumViolation,
    IsolatedNode,
    AsymmetricAdjacency,
    EmptyBoundary,
    DimensionMismatch,
    NotWellPosed,
    NeumannNotConverged,
    NotRandomWalkSystem,
    SpectralGapViolation,
    NotInterior,
    PartitionMismatch,
    PowerIterationDiverged,
    CapReached,
    ZeroVariance,
    EmptySample,
    AllRunsIllPosed,
    ParseError,
    IoError,
};

const char* errorCodeName(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised when the interior update fails the contraction requirement.
/// Carries the diagnosis so callers can report which structure is to blame.
class NotWellPosedError : public Error {
public:
    NotWellPosedError(const std::string& message,
                      std::optional<double> spectral_radius,
                      std::vector<int> witness_cycle,
                      bool boundary_reachable,
                      bool cycles_damped)
        : Error(ErrorCode::NotWellPosed, message),
          spectral_radius(spectral_radius),
          witness_cycle(std::move(witness_cycle)),
          boundary_reachable(boundary_reachable),
          cycles_damped(cycles_damped) {}

    std::optional<double> spectral_radius;
    /// Vertex ids of a fully undamped cycle inside a closed interior class,
    /// empty when the failure was detected by other means.
    std::vector<int> witness_cycle;
    bool boundary_reachable;
    bool cycles_damped;
};

}  // namespace fjlab

#endif
