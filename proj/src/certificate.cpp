#include "mondrian/certificate.hpp"

#include <cstdint>
#include <limits>

namespace mondrian::tiling {

namespace {

std::uint32_t read_u32(const nlohmann::ordered_json& obj, const char* key) {
  if (!obj.contains(key)) throw CertificateError(std::string("missing key \"") + key + "\"");
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
      v.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max()) {
    throw CertificateError(std::string("\"") + key + "\" must be a nonnegative 32-bit integer");
  }
  return v.get<std::uint32_t>();
}

}  // namespace

nlohmann::ordered_json certificate_to_json(const Tiling& tiling) {
  nlohmann::ordered_json pieces = nlohmann::ordered_json::array();
  for (const auto& p : tiling.placements) {
    pieces.push_back({{"w", p.rect.w}, {"h", p.rect.h}, {"x", p.x}, {"y", p.y}, {"rot", p.rotated}});
  }
  nlohmann::ordered_json doc;
  doc["n"] = tiling.n;
  doc["defect"] = tiling.defect;
  doc["pieces"] = std::move(pieces);
  return doc;
}

std::string certificate_string(const Tiling& tiling) { return certificate_to_json(tiling).dump(); }

Tiling certificate_from_json(const nlohmann::ordered_json& doc) {
  if (!doc.is_object()) throw CertificateError("certificate must be a JSON object");
  Tiling t;
  t.n = read_u32(doc, "n");
  if (!doc.contains("defect") || !doc.at("defect").is_number_unsigned()) {
    throw CertificateError("\"defect\" must be a nonnegative integer");
  }
  t.defect = doc.at("defect").get<std::uint64_t>();
  if (!doc.contains("pieces") || !doc.at("pieces").is_array()) {
    throw CertificateError("\"pieces\" must be an array");
  }
  for (const auto& piece : doc.at("pieces")) {
    if (!piece.is_object()) throw CertificateError("each piece must be an object");
    Placement p;
    p.rect.w = read_u32(piece, "w");
    p.rect.h = read_u32(piece, "h");
    if (p.rect.w == 0 || p.rect.w > p.rect.h) {
      throw CertificateError("piece sides must satisfy 1 <= w <= h");
    }
    p.x = read_u32(piece, "x");
    p.y = read_u32(piece, "y");
    if (!piece.contains("rot") || !piece.at("rot").is_boolean()) {
      throw CertificateError("\"rot\" must be a boolean");
    }
    p.rotated = piece.at("rot").get<bool>();
    t.placements.push_back(p);
  }
  return t;
}

Tiling parse_certificate(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw CertificateError(std::string("malformed certificate JSON: ") + e.what());
  }
  return certificate_from_json(doc);
}

}  // namespace mondrian::tiling
