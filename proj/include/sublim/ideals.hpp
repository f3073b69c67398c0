#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sublim/linalg.hpp"

namespace sublim {

class IndexSetError : public Error {
 public:
  using Error::Error;
};

class CertificateError : public Error {
 public:
  using Error::Error;
};

/// A subset of {1, ..., horizon} held as a sorted list of distinct members.
class IndexSet {
 public:
  explicit IndexSet(std::size_t horizon, std::vector<std::size_t> members = {});

  static IndexSet from_predicate(std::size_t horizon, const std::function<bool(std::size_t)>& pred);
  static IndexSet full(std::size_t horizon);

  std::size_t horizon() const noexcept { return horizon_; }
  const std::vector<std::size_t>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::optional<std::size_t> max() const;
  bool contains(std::size_t n) const;
  /// |P ∩ {1..j}|
  std::size_t count_up_to(std::size_t j) const;

  IndexSet complement() const;
  IndexSet unite(const IndexSet& other) const;
  bool is_subset_of(const IndexSet& other) const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::size_t horizon_;
  std::vector<std::size_t> members_;
};

/// d_j(P) = |P ∩ {1..j}| / j
double partial_density(const IndexSet& p, std::size_t j);

struct DensityEstimate {
  double estimate = 0.0;
  /// (checkpoint, partial density) at horizon / 2^i for i = 4, 3, 2, 1, 0,
  /// in increasing checkpoint order.
  std::vector<std::pair<std::size_t, double>> checkpoints;

  /// Each density is at most (1 + slack) times the one before it.
  bool non_increasing(double slack) const;
  /// Each density is at least (1 - slack) times the one before it.
  bool non_decreasing(double slack) const;
};

/// Requires horizon >= 16.
DensityEstimate density_estimate(const IndexSet& p);

/// Index j of the block D_j = {2^{j-1}(2s - 1)} containing n: one plus the
/// 2-adic valuation of n. The blocks partition the naturals.
std::size_t block_index(std::size_t n);

/// Symbolic superset of a set of naturals, valid beyond any computed horizon.
///
///   Empty{n0}            P ⊆ {1..n0}        (P has no element past n0)
///   SubsetOfBlocks{js}   P ⊆ ∪_{j in js} D_j
///   SubsetOfUnion{cs}    P ⊆ ∪ of the supersets of cs
class TailCertificate {
 public:
  enum class Kind { Empty, SubsetOfBlocks, SubsetOfUnion };

  static TailCertificate empty_beyond(std::size_t n0);
  static TailCertificate subset_of_blocks(std::vector<std::size_t> blocks);
  static TailCertificate subset_of_union(std::vector<TailCertificate> parts);

  Kind kind() const noexcept { return kind_; }
  std::size_t last_index() const noexcept { return n0_; }
  const std::vector<std::size_t>& blocks() const noexcept { return blocks_; }
  const std::vector<TailCertificate>& parts() const noexcept { return parts_; }

  /// Is n inside the claimed superset?
  bool admits(std::size_t n) const;
  /// Claimed superset is finite.
  bool is_finite() const;
  /// Claimed superset meets only finitely many blocks D_j.
  bool meets_finitely_many_blocks() const;
  std::string describe() const;

  friend bool operator==(const TailCertificate&, const TailCertificate&) = default;

 private:
  Kind kind_ = Kind::Empty;
  std::size_t n0_ = 0;
  std::vector<std::size_t> blocks_;
  std::vector<TailCertificate> parts_;
};

/// Merge two optional certificates into one for the union of their sets; only
/// possible when both are present.
std::optional<TailCertificate> merge_certificates(const std::optional<TailCertificate>& a,
                                                  const std::optional<TailCertificate>& b);

enum class IdealKind { Finite, Density, BlockDecomposition };

/// One of the three built-in ideals on the naturals plus the knobs for the
/// finite-horizon decision rules.
struct Ideal {
  IdealKind kind = IdealKind::Finite;
  double tau = 0.01;                  // density threshold, in (0, 0.5)
  double stabilization_window = 0.2;  // fraction of the horizon
  double block_window = 0.2;          // W, fraction of the horizon
  double trend_slack = 0.05;          // relative slack on dyadic trends

  static Ideal finite();
  static Ideal density(double tau = 0.01);
  static Ideal blocks();

  void validate() const;
  std::string name() const;
};

std::optional<IdealKind> parse_ideal_kind(const std::string& s);
std::string to_string(IdealKind kind);

enum class Membership { InIdeal, NotInIdeal, Inconclusive };
enum class VerdictMode { Exact, Empirical };

std::string to_string(Membership m);
std::string to_string(VerdictMode m);

struct IdealVerdict {
  Membership status = Membership::Inconclusive;
  VerdictMode mode = VerdictMode::Empirical;
  std::string rule;  // which decision rule fired
  std::size_t count = 0;
  std::optional<std::size_t> last_member;
  double final_density = 0.0;
  std::vector<std::pair<std::size_t, double>> dyadic_densities;
  std::vector<std::size_t> distinct_blocks;
  std::optional<TailCertificate> certificate;

  std::string evidence() const;
};

/// Decides P ∈ ideal. A certificate is always checked against the observed
/// members (CertificateError on a mismatch) and gives an Exact InIdeal verdict
/// when its superset is provably in the ideal. Otherwise the empirical rules
/// apply:
///
///  - any kind: max(P) <= horizon - stabilization window  => InIdeal
///    (a finite set lies in every admissible ideal)
///  - Finite: P meets every dyadic segment (N/2^{i+1}, N/2^i], i = 0..3
///    => NotInIdeal
///  - Density: d_N <= tau with non-increasing dyadic trend => InIdeal;
///    d_N >= 2 tau with non-decreasing trend => NotInIdeal
///  - BlockDecomposition: new block indices at every dyadic checkpoint
///    => NotInIdeal; otherwise no new block index among members in the last
///    W of the horizon => InIdeal
///
/// Anything else is Inconclusive.
IdealVerdict decide_membership(const Ideal& ideal, const IndexSet& p,
                               const std::optional<TailCertificate>& cert = std::nullopt);

/// P ∈ F(I) iff N \ P ∈ I. `complement_cert` describes the complement.
/// The returned verdict is about the complement: InIdeal means P is in the filter.
IdealVerdict filter_contains(const Ideal& ideal, const IndexSet& p,
                             const std::optional<TailCertificate>& complement_cert = std::nullopt);

struct CertifiedSet {
  IndexSet set;
  std::optional<TailCertificate> certificate;
};

struct AxiomsReport {
  bool empty_set_in_ideal = false;
  bool union_closed = true;
  bool subset_closed = true;
  bool admissible = true;
  bool nontrivial = true;
  std::size_t unions_checked = 0;
  std::size_t subsets_checked = 0;
  std::size_t singletons_checked = 0;
  std::vector<std::string> failures;

  bool passed() const {
    return empty_set_in_ideal && union_closed && subset_closed && admissible && nontrivial;
  }
};

/// Checks the ideal axioms on a finite family sharing one horizon: ∅ in the
/// ideal, pairwise unions and sampled subsets of InIdeal members stay InIdeal
/// (with merged or inherited certificates), every singleton {z}, z <= horizon,
/// is InIdeal, and the full horizon set is never Exact-InIdeal.
AxiomsReport axioms_check(const Ideal& ideal, const std::vector<CertifiedSet>& family);

}  // namespace sublim
