#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "mondrian/tiling.hpp"

namespace mondrian::tiling {

class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"n", "defect", "pieces": [{"w", "h", "x", "y", "rot"}, ...]} in that key order.
nlohmann::ordered_json certificate_to_json(const Tiling& tiling);

/// Compact single-line form of certificate_to_json.
std::string certificate_string(const Tiling& tiling);

/// Inverse of certificate_to_json. The claimed defect is kept verbatim so a
/// verifier can compare it against the recomputed one.
Tiling certificate_from_json(const nlohmann::ordered_json& doc);

Tiling parse_certificate(std::string_view text);

}  // namespace mondrian::tiling
