#include "sublim/convergence.hpp"

#include <algorithm>
#include <cmath>

namespace sublim {

SequenceError::SequenceError(std::size_t index, const std::string& what)
    : Error("sequence rule failed at n = " + std::to_string(index) + ": " + what), index_(index) {}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converges:
      return "Converges";
    case Verdict::DoesNotConverge:
      return "DoesNotConverge";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(const std::string& s) {
  for (Verdict v : {Verdict::Converges, Verdict::DoesNotConverge, Verdict::Inconclusive})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

Subspace SubspaceSequence::at(std::size_t n) const {
  try {
    Subspace u = rule(n);
    if (u.ambient_dim() != ambient_dim || u.dim() != dim)
      throw DimensionError("rule returned a subspace of the wrong shape");
    return u;
  } catch (const SequenceError&) {
    throw;
  } catch (const std::exception& e) {
    throw SequenceError(n, e.what());
  }
}

Trace gap_trace(const SubspaceSequence& seq, const Subspace& v, std::size_t horizon) {
  if (horizon == 0) throw Error("gap trace needs a horizon of at least 1");
  if (v.ambient_dim() != seq.ambient_dim || v.dim() != seq.dim)
    throw DimensionError("candidate limit does not match the sequence's dimensions");
  Trace t(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) t[n - 1] = gap(seq.at(n), v);
  return t;
}

ExceptionalSetTrace exceptional_set(const Trace& trace, double epsilon) {
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
  if (trace.empty()) throw Error("exceptional set of an empty trace");
  return {epsilon,
          IndexSet::from_predicate(trace.size(), [&](std::size_t n) { return trace[n - 1] >= epsilon; }),
          trace};
}

Verdict combine(std::span<const Membership> statuses) {
  bool all_in = true;
  for (Membership m : statuses) {
    if (m == Membership::NotInIdeal) return Verdict::DoesNotConverge;
    if (m != Membership::InIdeal) all_in = false;
  }
  return all_in ? Verdict::Converges : Verdict::Inconclusive;
}

void validate_eps_grid(std::span<const double> eps_grid) {
  if (eps_grid.empty()) throw Error("epsilon grid is empty");
  for (double e : eps_grid)
    if (!(e > 0.0) || !std::isfinite(e)) throw Error("epsilon grid values must be positive and finite");
}

ScalarLimitResult scalar_i_limit(const ScalarSequence& x, double candidate, const Ideal& ideal,
                                 std::span<const double> eps_grid, std::size_t horizon) {
  validate_eps_grid(eps_grid);
  if (horizon == 0) throw Error("horizon must be at least 1");
  Trace deviation(horizon);
  for (std::size_t n = 1; n <= horizon; ++n) {
    const double value = x.rule(n);
    if (!std::isfinite(value)) throw SequenceError(n, "non-finite scalar value");
    deviation[n - 1] = std::abs(value - candidate);
  }
  ScalarLimitResult out;
  std::vector<Membership> statuses;
  for (double eps : eps_grid) {
    const auto exc = exceptional_set(deviation, eps);
    std::optional<TailCertificate> cert;
    if (x.certificate) cert = x.certificate(eps);
    out.per_eps.push_back({eps, decide_membership(ideal, exc.set, cert)});
    statuses.push_back(out.per_eps.back().verdict.status);
  }
  out.overall = combine(statuses);
  return out;
}

// ---------------------------------------------------------------------------
// Criteria

std::string criterion_id(Criterion c) {
  switch (c) {
    case Criterion::Gap:
      return "i";
    case Criterion::BasisResidual:
      return "ii";
    case Criterion::ProjectionSumSq:
      return "iii";
    case Criterion::ProjectionNorm:
      return "iv";
    case Criterion::VolumeNorm:
      return "v";
    case Criterion::Theorem36:
      return "thm36";
  }
  return "?";
}

std::string criterion_name(Criterion c) {
  switch (c) {
    case Criterion::Gap:
      return "gap(U_n,V) -> 0";
    case Criterion::BasisResidual:
      return "|u_i - P_V(u_i)| -> 0";
    case Criterion::ProjectionSumSq:
      return "sum_j <u_i,v_j>^2 -> 1";
    case Criterion::ProjectionNorm:
      return "|P_V(u_i)| -> 1";
    case Criterion::VolumeNorm:
      return "|u_i,v_1,...,v_k| -> 0";
    case Criterion::Theorem36:
      return "|u_i,P_V(u_i)| -> 0";
  }
  return "?";
}

double criterion_candidate(Criterion c) {
  return c == Criterion::ProjectionSumSq || c == Criterion::ProjectionNorm ? 1.0 : 0.0;
}

PointwiseTraces evaluate_traces(const SubspaceSequence& seq, const Subspace& v, std::size_t horizon) {
  if (horizon == 0) throw Error("horizon must be at least 1");
  if (v.ambient_dim() != seq.ambient_dim || v.dim() != seq.dim)
    throw DimensionError("candidate limit does not match the sequence's dimensions");
  const std::size_t k = seq.dim;
  PointwiseTraces t;
  t.horizon = horizon;
  t.dim = k;
  t.per_basis[0].assign(1, Trace(horizon));
  for (std::size_t c = 1; c < t.per_basis.size(); ++c) t.per_basis[c].assign(k, Trace(horizon));

  std::vector<Vector> volume_args(k + 1);
  for (std::size_t j = 0; j < k; ++j) volume_args[j + 1] = v.basis_vector(j);

  for (std::size_t n = 1; n <= horizon; ++n) {
    const Subspace u = seq.at(n);
    t.per_basis[0][0][n - 1] = gap(u, v);
    for (std::size_t i = 0; i < k; ++i) {
      const Vector& ui = u.basis_vector(i);
      const Vector p = project(ui, v);
      t.per_basis[1][i][n - 1] = dist_point_subspace(ui, v);
      t.per_basis[2][i][n - 1] = projection_norm_sq(ui, v);
      t.per_basis[3][i][n - 1] = norm(p);
      volume_args[0] = ui;
      t.per_basis[4][i][n - 1] = n_norm(volume_args);
      const std::array<Vector, 2> pair{ui, p};
      t.per_basis[5][i][n - 1] = n_norm(pair);
    }
  }
  return t;
}

namespace {

// Pointwise bounds relating each criterion to the gap g_n (unit u_i, r = |u_i - P_V u_i|):
//   r <= g,   |u_i, v_1..v_k| = r,   |u_i, P_V u_i| = r sqrt(1 - r^2) <= r,
//   |1 - sum_j <u_i,v_j>^2| = r^2,   1 - |P_V u_i| = 1 - sqrt(1 - r^2) <= r^2.
// So the eps-exceptional set of (iii)/(iv) lies inside the sqrt(eps)-exceptional
// set of the gap, and that of the others inside the eps-exceptional set of the gap.
CertificateFn derived_certificate(Criterion c, const CertificateFn& gap_cert) {
  if (!gap_cert) return {};
  if (c == Criterion::ProjectionSumSq || c == Criterion::ProjectionNorm)
    return [gap_cert](double eps) { return gap_cert(std::sqrt(eps)); };
  return gap_cert;
}

}  // namespace

CriterionResult evaluate_criterion(Criterion c, const PointwiseTraces& traces, const CertificateFn& gap_cert,
                                   const Ideal& ideal, std::span<const double> eps_grid) {
  CriterionResult res;
  res.criterion = c;
  const auto& rows = traces.per_basis[static_cast<std::size_t>(c)];
  const CertificateFn cert = derived_certificate(c, gap_cert);
  for (const Trace& row : rows) {
    ScalarSequence x{[&row](std::size_t n) { return row[n - 1]; }, cert};
    res.per_basis.push_back(scalar_i_limit(x, criterion_candidate(c), ideal, eps_grid, traces.horizon));
  }
  for (std::size_t e = 0; e < eps_grid.size(); ++e) {
    std::vector<Membership> across;
    for (const auto& r : res.per_basis) across.push_back(r.per_eps[e].verdict.status);
    switch (combine(across)) {
      case Verdict::Converges:
        res.combined.push_back(Membership::InIdeal);
        break;
      case Verdict::DoesNotConverge:
        res.combined.push_back(Membership::NotInIdeal);
        break;
      case Verdict::Inconclusive:
        res.combined.push_back(Membership::Inconclusive);
        break;
    }
  }
  res.overall = combine(res.combined);
  return res;
}

// ---------------------------------------------------------------------------
// Reports

const CriterionResult* ConvergenceReport::find(Criterion c) const {
  if (c == Criterion::Theorem36) return theorem36 ? &*theorem36 : nullptr;
  for (const auto& r : criteria)
    if (r.criterion == c) return &r;
  return nullptr;
}

bool ConvergenceReport::consistent() const {
  std::optional<Verdict> seen;
  for (const auto& r : criteria) {
    if (r.overall == Verdict::Inconclusive) continue;
    if (seen && *seen != r.overall) return false;
    seen = r.overall;
  }
  return true;
}

std::optional<bool> ConvergenceReport::theorem36_implication_holds() const {
  const CriterionResult* gap_result = find(Criterion::Gap);
  if (!theorem36 || !gap_result) return std::nullopt;
  if (gap_result->overall != Verdict::Converges) return true;
  return theorem36->overall == Verdict::Converges;
}

ConvergenceReport assemble_report(std::string sequence_name, const PointwiseTraces& traces,
                                  const CertificateFn& gap_cert, const Ideal& ideal,
                                  std::span<const double> eps_grid, std::span<const Criterion> criteria,
                                  bool with_theorem36) {
  ideal.validate();
  validate_eps_grid(eps_grid);
  ConvergenceReport r;
  r.sequence = std::move(sequence_name);
  r.ideal = ideal;
  r.horizon = traces.horizon;
  r.eps_grid.assign(eps_grid.begin(), eps_grid.end());
  for (Criterion c : criteria) r.criteria.push_back(evaluate_criterion(c, traces, gap_cert, ideal, eps_grid));
  if (with_theorem36) r.theorem36 = evaluate_criterion(Criterion::Theorem36, traces, gap_cert, ideal, eps_grid);
  const std::size_t m = r.criteria.size();
  r.agreement.assign(m, std::vector<bool>(m, true));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) r.agreement[a][b] = r.criteria[a].overall == r.criteria[b].overall;
  if (const auto* g = r.find(Criterion::Gap)) r.overall = g->overall;
  return r;
}

namespace {

ConvergenceReport run(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                      std::span<const double> eps_grid, std::size_t horizon, std::span<const Criterion> criteria,
                      bool with_theorem36) {
  return assemble_report(seq.name, evaluate_traces(seq, v, horizon), seq.exceptional_certificate, ideal, eps_grid,
                         criteria, with_theorem36);
}

constexpr std::array<Criterion, 1> kGapOnly{Criterion::Gap};

}  // namespace

ConvergenceReport subspace_i_converges(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                       std::span<const double> eps_grid, std::size_t horizon) {
  return run(seq, v, ideal, eps_grid, horizon, kGapOnly, false);
}

ConvergenceReport usual_converges(const SubspaceSequence& seq, const Subspace& v, std::span<const double> eps_grid,
                                  std::size_t horizon) {
  return subspace_i_converges(seq, v, Ideal::finite(), eps_grid, horizon);
}

ConvergenceReport statistical_converges(const SubspaceSequence& seq, const Subspace& v,
                                        std::span<const double> eps_grid, std::size_t horizon, double tau) {
  return subspace_i_converges(seq, v, Ideal::density(tau), eps_grid, horizon);
}

ConvergenceReport equivalence_suite(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                    std::span<const double> eps_grid, std::size_t horizon) {
  return run(seq, v, ideal, eps_grid, horizon, kEquivalentCriteria, false);
}

ConvergenceReport theorem36_check(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                                  std::span<const double> eps_grid, std::size_t horizon) {
  return run(seq, v, ideal, eps_grid, horizon, kGapOnly, true);
}

ConvergenceReport full_suite(const SubspaceSequence& seq, const Subspace& v, const Ideal& ideal,
                             std::span<const double> eps_grid, std::size_t horizon) {
  return run(seq, v, ideal, eps_grid, horizon, kEquivalentCriteria, true);
}

}  // namespace sublim
