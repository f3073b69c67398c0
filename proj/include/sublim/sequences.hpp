#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "sublim/convergence.hpp"

namespace sublim::sequences {

struct BuiltinExample {
  SubspaceSequence sequence;
  Subspace candidate;
  Ideal recommended_ideal;
};

enum class Example33Variant { AsPrinted, Amended };

std::optional<Example33Variant> parse_variant(const std::string& s);
std::string to_string(Example33Variant v);

/// Lines in R^3 against V = span{e2}.
///
/// Odd n: U_n = span{e3}. Even n:
///   Amended    u = normalize(sin(n)/n, 1, 0),   gap = |sin n| / sqrt(n^2 + sin^2 n) < 1/n
///   AsPrinted  u = normalize(sin(n)/n, 1/n, 0), gap = |sin n| / sqrt(1 + sin^2 n)
/// Only the amended variant carries the certificate
///   eps -> SubsetOfBlocks{1} ∪ Empty(floor(1/eps) + 1).
/// Recommended ideal: block decomposition.
BuiltinExample example33(Example33Variant variant);

/// U_n = span{e1} for every n, V = span{e2}, in R^2. Recommended ideal: finite.
BuiltinExample example36();

/// U_n = u for every n. No certificate.
SubspaceSequence constant(const Subspace& u, std::string name = "constant");

enum class Decay { Zero, Constant, Inverse, InverseSquare, Geometric };
std::optional<Decay> parse_decay(const std::string& s);
std::string to_string(Decay d);

/// Parametric family around a candidate V = span(candidate rows).
///
/// With w_0, w_1, ... the complement basis of V and tilt angle
///   theta_n = min(pi/2, amplitude * f(n)),   f in {0, 1, 1/n, 1/n^2, ratio^n},
/// U_n has basis u_i = cos(theta_n) v_i + sin(theta_n) w_i for i < tilted and
/// u_i = v_i otherwise, so gap(U_n, V) = sin(theta_n). On the block D_j given
/// by spike_block the tilt is pi/2. With twist, the basis of U_n is further
/// rotated inside U_n by angle n in the plane of u_0 and u_1 (subspace unchanged).
struct RotationFamily {
  std::string name = "rotation";
  std::vector<Vector> candidate;
  std::size_t tilted = 1;
  double amplitude = 1.0;
  Decay decay = Decay::Inverse;
  double ratio = 0.5;
  std::optional<std::size_t> spike_block;
  bool twist = false;
  bool certified = true;

  void validate() const;
};

BuiltinExample rotation_family(const RotationFamily& family);

}  // namespace sublim::sequences
