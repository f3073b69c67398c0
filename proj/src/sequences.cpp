#include "sublim/sequences.hpp"

#include <cmath>
#include <numbers>

namespace sublim::sequences {

namespace {

Vector unit(std::size_t d, std::size_t axis) {
  Vector e(d, 0.0);
  e[axis] = 1.0;
  return e;
}

Subspace line(Vector u) {
  const double len = norm(u);
  for (double& c : u) c /= len;
  return Subspace::from_orthonormal({std::move(u)});
}

std::size_t empty_bound(double bound) {
  if (!(bound >= 0.0)) return 0;
  return static_cast<std::size_t>(std::floor(bound)) + 1;
}

}  // namespace

std::optional<Example33Variant> parse_variant(const std::string& s) {
  if (s == "printed") return Example33Variant::AsPrinted;
  if (s == "amended") return Example33Variant::Amended;
  return std::nullopt;
}

std::string to_string(Example33Variant v) { return v == Example33Variant::AsPrinted ? "printed" : "amended"; }

BuiltinExample example33(Example33Variant variant) {
  SubspaceSequence seq;
  seq.name = "example33-" + to_string(variant);
  seq.ambient_dim = 3;
  seq.dim = 1;
  seq.rule = [variant](std::size_t n) {
    if (n % 2 == 1) return Subspace::from_orthonormal({unit(3, 2)});
    const double x = static_cast<double>(n);
    const double second = variant == Example33Variant::Amended ? 1.0 : 1.0 / x;
    return line({std::sin(x) / x, second, 0.0});
  };
  if (variant == Example33Variant::Amended) {
    seq.exceptional_certificate = [](double eps) -> std::optional<TailCertificate> {
      return TailCertificate::subset_of_union(
          {TailCertificate::subset_of_blocks({1}), TailCertificate::empty_beyond(empty_bound(1.0 / eps))});
    };
  }
  return {std::move(seq), Subspace::from_orthonormal({unit(3, 1)}), Ideal::blocks()};
}

BuiltinExample example36() {
  SubspaceSequence seq;
  seq.name = "example36";
  seq.ambient_dim = 2;
  seq.dim = 1;
  seq.rule = [](std::size_t) { return Subspace::from_orthonormal({unit(2, 0)}); };
  return {std::move(seq), Subspace::from_orthonormal({unit(2, 1)}), Ideal::finite()};
}

SubspaceSequence constant(const Subspace& u, std::string name) {
  SubspaceSequence seq;
  seq.name = std::move(name);
  seq.ambient_dim = u.ambient_dim();
  seq.dim = u.dim();
  seq.rule = [u](std::size_t) { return u; };
  return seq;
}

// ---------------------------------------------------------------------------
// Rotation family

std::optional<Decay> parse_decay(const std::string& s) {
  for (Decay d : {Decay::Zero, Decay::Constant, Decay::Inverse, Decay::InverseSquare, Decay::Geometric})
    if (to_string(d) == s) return d;
  return std::nullopt;
}

std::string to_string(Decay d) {
  switch (d) {
    case Decay::Zero:
      return "zero";
    case Decay::Constant:
      return "constant";
    case Decay::Inverse:
      return "inverse";
    case Decay::InverseSquare:
      return "inverse_square";
    case Decay::Geometric:
      return "geometric";
  }
  return "?";
}

void RotationFamily::validate() const {
  if (candidate.empty()) throw Error("rotation family: candidate basis is empty");
  const std::size_t d = candidate.front().size();
  const std::size_t k = candidate.size();
  if (tilted == 0) throw Error("rotation family: tilt at least one basis vector");
  if (tilted > k) throw Error("rotation family: cannot tilt more basis vectors than k");
  if (k + tilted > d) throw Error("rotation family: ambient dimension too small for the tilt directions");
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) throw Error("rotation family: amplitude must be >= 0");
  if (decay == Decay::Geometric && !(ratio > 0.0 && ratio < 1.0))
    throw Error("rotation family: geometric ratio must lie in (0, 1)");
  if (spike_block && *spike_block == 0) throw Error("rotation family: block indices start at 1");
  if (twist && k < 2) throw Error("rotation family: twist needs k >= 2");
}

namespace {

double decay_factor(Decay decay, double ratio, std::size_t n) {
  const double x = static_cast<double>(n);
  switch (decay) {
    case Decay::Zero:
      return 0.0;
    case Decay::Constant:
      return 1.0;
    case Decay::Inverse:
      return 1.0 / x;
    case Decay::InverseSquare:
      return 1.0 / (x * x);
    case Decay::Geometric:
      return std::pow(ratio, x);
  }
  return 0.0;
}

// Superset of {n : amplitude * f(n) >= asin(eps)} ignoring spikes, or nullopt
// when that set is infinite.
std::optional<TailCertificate> decay_certificate(const RotationFamily& f, double eps) {
  if (eps > 1.0) return TailCertificate::empty_beyond(0);
  const double threshold = std::asin(eps);
  const double a = f.amplitude;
  switch (f.decay) {
    case Decay::Zero:
      return TailCertificate::empty_beyond(0);
    case Decay::Constant:
      if (std::sin(std::min(a, std::numbers::pi / 2)) >= eps) return std::nullopt;
      return TailCertificate::empty_beyond(0);
    case Decay::Inverse:
      return TailCertificate::empty_beyond(empty_bound(a / threshold));
    case Decay::InverseSquare:
      return TailCertificate::empty_beyond(empty_bound(std::sqrt(a / threshold)));
    case Decay::Geometric:
      if (a < threshold) return TailCertificate::empty_beyond(0);
      return TailCertificate::empty_beyond(empty_bound(std::log(threshold / a) / std::log(f.ratio)));
  }
  return std::nullopt;
}

}  // namespace

BuiltinExample rotation_family(const RotationFamily& family) {
  family.validate();
  const Subspace v = orthonormalize(family.candidate);
  const std::vector<Vector> away = complement_basis(v);
  const std::size_t d = v.ambient_dim();
  const std::size_t k = v.dim();

  SubspaceSequence seq;
  seq.name = family.name;
  seq.ambient_dim = d;
  seq.dim = k;
  seq.rule = [family, v, away, d, k](std::size_t n) {
    double theta = std::min(std::numbers::pi / 2, family.amplitude * decay_factor(family.decay, family.ratio, n));
    if (family.spike_block && block_index(n) == *family.spike_block) theta = std::numbers::pi / 2;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    std::vector<Vector> basis = v.basis();
    for (std::size_t i = 0; i < family.tilted; ++i)
      for (std::size_t r = 0; r < d; ++r) basis[i][r] = c * v.basis_vector(i)[r] + s * away[i][r];
    Subspace u = Subspace::from_orthonormal(std::move(basis));
    if (family.twist) {
      Matrix q = Matrix::identity(k);
      const double phi = static_cast<double>(n);
      q(0, 0) = std::cos(phi);
      q(1, 0) = std::sin(phi);
      q(0, 1) = -std::sin(phi);
      q(1, 1) = std::cos(phi);
      u = u.with_mixed_basis(q);
    }
    return u;
  };
  if (family.certified) {
    seq.exceptional_certificate = [family](double eps) -> std::optional<TailCertificate> {
      auto tail = decay_certificate(family, eps);
      if (!tail || !family.spike_block) return tail;
      return TailCertificate::subset_of_union({TailCertificate::subset_of_blocks({*family.spike_block}), *tail});
    };
  }
  const Ideal recommended = family.spike_block ? Ideal::blocks() : Ideal::finite();
  return {std::move(seq), v, recommended};
}

}  // namespace sublim::sequences
