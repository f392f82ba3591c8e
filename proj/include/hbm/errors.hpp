#ifndef HBM_ERRORS_HPP
#define HBM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hbm {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConvexityFailure : Error {
    using Error::Error;
};

struct InradiusViolation : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct SingularMetric : Error {
    using Error::Error;
};

struct DegenerateTestFunction : Error {
    using Error::Error;
};

struct DegenerateTestBody : Error {
    using Error::Error;
};

struct ZeroVector : Error {
    using Error::Error;
};

struct NoConvergence : Error {
    using Error::Error;
};

struct NotIsotropic : Error {
    using Error::Error;
};

struct PreconditionUnmet : Error {
    using Error::Error;
};

struct ConvexityBarrier : Error {
    using Error::Error;
};

} // namespace hbm

#endif
