#pragma once

#include <span>
#include <string>
#include <string_view>

namespace xfode {

enum class PartitionKind { ps1, ps2, ps3, gauss };

// it2: xFODE+ (interval type-2 with a partition strategy)
// t1: xFODE ablation, LMF height fixed to one
// afode: AFODE+ ablation, Gaussian antecedents without a partition and full KM
enum class Variant { it2, t1, afode };

std::string_view to_string(PartitionKind kind);
std::string_view to_string(Variant variant);
PartitionKind parse_partition(std::string_view name);
Variant parse_variant(std::string_view name);

// Throws ConfigError for combinations that do not describe a model.
void validate_combination(Variant variant, PartitionKind kind);

inline bool is_constrained(PartitionKind kind) { return kind != PartitionKind::gauss; }

}  // namespace xfode
