#include "wrrnc/errors.hpp"

#include <utility>

namespace wrrnc {

Error::Error(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

SaturationError::SaturationError(const std::string& message, std::string where)
    : Error("E_SATURATED", where.empty() ? message : where + ": " + message),
      where_(std::move(where)) {}

}  // namespace wrrnc
