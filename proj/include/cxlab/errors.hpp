#pragma once
// Error taxonomy shared across modules.  Contract violations that indicate an
// implementation bug derive from logic_error; data/runtime conditions from
// runtime_error.

#include <stdexcept>

namespace cxlab {

// integer recursion hit a non-exact division
struct InexactDivision : std::logic_error {
    using std::logic_error::logic_error;
};

// operator iterate disagreed with the expected sign / alpha-grading structure
struct StructuralMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// supertask ladder identity violated beyond finite-difference tolerance
struct RecursionViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a term's magnitude left the representable range even in log form
struct EvaluationOverflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// step-halving disagreement in a finite-difference derivative
struct GridTooCoarse : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// parameter combination where a closed form degenerates (division blowup)
struct DegenerateParameters : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// iterative solver exhausted its iteration budget
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a trajectory left the finite/representable region
struct NonFiniteState : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// too many trajectories diverged for the ensemble average to mean anything
struct RunawayEnsemble : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// grid quadrature untrustworthy: too much weight on the boundary ring
struct ExcessBoundaryMass : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace cxlab
