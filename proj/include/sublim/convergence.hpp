#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sublim/ideals.hpp"
#include "sublim/linalg.hpp"

namespace sublim {

/// Failure while evaluating a sequence rule at a given index.
class SequenceError : public Error {
 public:
  SequenceError(std::size_t index, const std::string& what);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

enum class Verdict { Converges, DoesNotConverge, Inconclusive };
std::string to_string(Verdict v);
std::optional<Verdict> parse_verdict(const std::string& s);

/// epsilon -> symbolic superset of the epsilon-exceptional set, when known.
using CertificateFn = std::function<std::optional<TailCertificate>(double)>;

struct SubspaceSequence {
  std::string name;
  std::size_t ambient_dim = 0;
  std::size_t dim = 0;
  std::function<Subspace(std::size_t)> rule;
  /// Certificate for {n : gap(U_n, V) >= eps} against the sequence's intended
  /// candidate limit V. Optional.
  CertificateFn exceptional_certificate;

  /// rule(n), with failures and shape mismatches rethrown as SequenceError.
  Subspace at(std::size_t n) const;
};

struct ScalarSequence {
  std::function<double(std::size_t)> rule;
  CertificateFn certificate;
};

/// Entry n - 1 holds the value at index n.
using Trace = std::vector<double>;

Trace gap_trace(const SubspaceSequence& seq, const Subspace& v, std::size_t horizon);

struct ExceptionalSetTrace {
  double epsilon = 0.0;
  IndexSet set;
  Trace values;
};

/// {n : trace[n-1] >= epsilon}
ExceptionalSetTrace exceptional_set(const Trace& trace, double epsilon);

struct EpsilonVerdict {
  double epsilon = 0.0;
  IdealVerdict verdict;
};

struct ScalarLimitResult {
  std::vector<EpsilonVerdict> per_eps;
  Verdict overall = Verdict::Inconclusive;
};

/// Converges iff every epsilon yields InIdeal; DoesNotConverge if any yields
/// NotInIdeal; Inconclusive otherwise.
Verdict combine(std::span<const Membership> statuses);

ScalarLimitResult scalar_i_limit(const ScalarSequence& x, double candidate, const Ideal& ideal,
                                 std::span<const double> eps_grid, std::size_t horizon);

enum class Criterion {
  Gap = 0,             // (i)   gap(U_n, V) -> 0
  BasisResidual = 1,   // (ii)  |u_i - P_V(u_i)| -> 0
  ProjectionSumSq = 2, // (iii) sum_j <u_i, v_j>^2 -> 1
  ProjectionNorm = 3,  // (iv)  |P_V(u_i)| -> 1
  VolumeNorm = 4,      // (v)   |u_i, v_1, ..., v_k| -> 0
  Theorem36 = 5,       // |u_i, P_V(u_i)| -> 0 (implied by (i), not equivalent)
};
inline constexpr std::array<Criterion, 5> kEquivalentCriteria{
    Criterion::Gap, Criterion::BasisResidual, Criterion::ProjectionSumSq, Criterion::ProjectionNorm,
    Criterion::VolumeNorm};

std::string criterion_id(Criterion c);
std::string criterion_name(Criterion c);
double criterion_candidate(Criterion c);

/// Every per-index quantity the criteria look at, evaluated once.
/// per_basis[c][i][n - 1] is the raw value (not the deviation) of criterion c
/// for basis vector i; criterion Gap has a single row.
struct PointwiseTraces {
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::array<std::vector<Trace>, 6> per_basis;

  const Trace& gap() const { return per_basis[0].front(); }
};

PointwiseTraces evaluate_traces(const SubspaceSequence& seq, const Subspace& v, std::size_t horizon);

struct CriterionResult {
  Criterion criterion = Criterion::Gap;
  /// One entry per basis index (a single entry for Gap).
  std::vector<ScalarLimitResult> per_basis;
  /// Per epsilon, conjunction over basis indices.
  std::vector<Membership> combined;
  Verdict overall = Verdict::Inconclusive;
};

/// Runs scalar_i_limit on each basis row of one criterion and takes the
/// conjunction over rows. The sequence's gap certificate is carried over
/// through the pointwise bounds residual_i <= gap and |1 - sum_j <u_i,v_j>^2|
/// <= gap^2.
CriterionResult evaluate_criterion(Criterion c, const PointwiseTraces& traces, const CertificateFn& gap_cert,
                                   const Ideal& ideal, std::span<const double> eps_grid);

struct ConvergenceReport {
  std::string sequence;
  Ideal ideal;
  std::size_t horizon = 0;
  std::vector<double> eps_grid;
  std::vector<CriterionResult> criteria;
  std::optional<CriterionResult> theorem36;
  /// agreement[a][b]: overall verdicts of criteria a and b coincide.
  std::vector<std::vector<bool>> agreement;
  Verdict overall = Verdict::Inconclusive;

  const CriterionResult* find(Criterion c) const;
  /// All criteria with a non-Inconclusive verdict agree.
  bool consistent() const;
  /// If (i) converges then |u_i, P_V(u_i)| -> 0 converges too.
  std::optional<bool> theorem36_implication_holds() const;
};

inline const std::vector<double> kDefaultEpsGrid{0.5, 0.1, 0.01};

void validate_eps_grid(std::span<const double> eps_grid);

/// Criterion (i) only.
ConvergenceReport subspace_i_converges(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                       std::span<const double> eps_grid, std::size_t horizon);
/// Criterion (i) under the finite ideal: ordinary convergence.
ConvergenceReport usual_converges(const SubspaceSequence& seq, const Subspace& v, std::span<const double> eps_grid,
                                  std::size_t horizon);
/// Criterion (i) under the density ideal: statistical convergence.
ConvergenceReport statistical_converges(const SubspaceSequence& seq, const Subspace& v,
                                        std::span<const double> eps_grid, std::size_t horizon,
                                        double tau = 0.01);
/// Criteria (i)-(v) plus the agreement matrix.
ConvergenceReport equivalence_suite(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                    std::span<const double> eps_grid, std::size_t horizon);
/// The |u_i, P_V(u_i)| -> 0 check alongside criterion (i).
ConvergenceReport theorem36_check(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                  std::span<const double> eps_grid, std::size_t horizon);
/// Builds a report from traces that were already evaluated.
ConvergenceReport assemble_report(std::string sequence_name, const PointwiseTraces& traces,
                                  const CertificateFn& gap_cert, const Ideal& ideal,
                                  std::span<const double> eps_grid, std::span<const Criterion> criteria,
                                  bool with_theorem36);
/// equivalence_suite with the theorem36 check folded in, sharing one trace evaluation.
ConvergenceReport full_suite(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                             std::span<const double> eps_grid, std::size_t horizon);

}  // namespace sublim
