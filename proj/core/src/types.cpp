#include "xfode/types.hpp"

#include "xfode/error.hpp"

namespace xfode {

std::string_view to_string(PartitionKind kind) {
  switch (kind) {
    case PartitionKind::ps1: return "ps1";
    case PartitionKind::ps2: return "ps2";
    case PartitionKind::ps3: return "ps3";
    case PartitionKind::gauss: return "gauss";
  }
  return "?";
}

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::it2: return "xfode+";
    case Variant::t1: return "xfode";
    case Variant::afode: return "afode+";
  }
  return "?";
}

PartitionKind parse_partition(std::string_view name) {
  if (name == "ps1") return PartitionKind::ps1;
  if (name == "ps2") return PartitionKind::ps2;
  if (name == "ps3") return PartitionKind::ps3;
  if (name == "gauss") return PartitionKind::gauss;
  throw ConfigError("unknown partition strategy '" + std::string(name) + "'");
}

Variant parse_variant(std::string_view name) {
  if (name == "xfode+" || name == "it2") return Variant::it2;
  if (name == "xfode" || name == "t1") return Variant::t1;
  if (name == "afode+" || name == "afode") return Variant::afode;
  throw ConfigError("unknown model variant '" + std::string(name) + "'");
}

void validate_combination(Variant variant, PartitionKind kind) {
  if (variant == Variant::afode && kind != PartitionKind::gauss)
    throw ConfigError("afode+ uses unpartitioned Gaussian antecedents (partition=gauss)");
  if (variant != Variant::afode && kind == PartitionKind::gauss)
    throw ConfigError(std::string(to_string(variant)) + " requires a partition strategy ps1|ps2|ps3");
}

}  // namespace xfode
