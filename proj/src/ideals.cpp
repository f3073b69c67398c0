#include "sublim/ideals.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace sublim {

// ---------------------------------------------------------------------------
// IndexSet

IndexSet::IndexSet(std::size_t horizon, std::vector<std::size_t> members)
    : horizon_(horizon), members_(std::move(members)) {
  if (horizon_ == 0) throw IndexSetError("index set horizon must be at least 1");
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const std::size_t m = members_[i];
    if (m < 1 || m > horizon_)
      throw IndexSetError("index set member " + std::to_string(m) + " outside [1, " +
                          std::to_string(horizon_) + "]");
    if (i > 0 && members_[i - 1] >= m) throw IndexSetError("index set members must be sorted and distinct");
  }
}

IndexSet IndexSet::from_predicate(std::size_t horizon, const std::function<bool(std::size_t)>& pred) {
  std::vector<std::size_t> members;
  for (std::size_t n = 1; n <= horizon; ++n)
    if (pred(n)) members.push_back(n);
  return IndexSet(horizon, std::move(members));
}

IndexSet IndexSet::full(std::size_t horizon) {
  return from_predicate(horizon, [](std::size_t) { return true; });
}

std::optional<std::size_t> IndexSet::max() const {
  if (members_.empty()) return std::nullopt;
  return members_.back();
}

bool IndexSet::contains(std::size_t n) const {
  return std::binary_search(members_.begin(), members_.end(), n);
}

std::size_t IndexSet::count_up_to(std::size_t j) const {
  return static_cast<std::size_t>(std::upper_bound(members_.begin(), members_.end(), j) - members_.begin());
}

IndexSet IndexSet::complement() const {
  return from_predicate(horizon_, [this](std::size_t n) { return !contains(n); });
}

IndexSet IndexSet::unite(const IndexSet& other) const {
  if (other.horizon_ != horizon_) throw IndexSetError("union of index sets with different horizons");
  std::vector<std::size_t> out;
  std::set_union(members_.begin(), members_.end(), other.members_.begin(), other.members_.end(),
                 std::back_inserter(out));
  return IndexSet(horizon_, std::move(out));
}

bool IndexSet::is_subset_of(const IndexSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(), members_.end());
}

// ---------------------------------------------------------------------------
// Densities and blocks

double partial_density(const IndexSet& p, std::size_t j) {
  if (j == 0) throw IndexSetError("partial density needs j >= 1");
  if (j > p.horizon())
    throw IndexSetError("partial density at j = " + std::to_string(j) + " beyond horizon " +
                        std::to_string(p.horizon()));
  return static_cast<double>(p.count_up_to(j)) / static_cast<double>(j);
}

namespace {

constexpr std::size_t kDyadicLevels = 4;  // checkpoints N/2^i, i = 0..4

std::vector<std::size_t> dyadic_checkpoints(std::size_t horizon) {
  std::vector<std::size_t> cps;
  for (std::size_t i = kDyadicLevels + 1; i-- > 0;) cps.push_back(horizon >> i);
  return cps;
}

std::size_t window_cut(std::size_t horizon, double fraction) {
  const auto w = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(horizon)));
  return w >= horizon ? 0 : horizon - w;
}

}  // namespace

bool DensityEstimate::non_increasing(double slack) const {
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i].second > checkpoints[i - 1].second * (1.0 + slack)) return false;
  return true;
}

bool DensityEstimate::non_decreasing(double slack) const {
  for (std::size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i].second < checkpoints[i - 1].second * (1.0 - slack)) return false;
  return true;
}

DensityEstimate density_estimate(const IndexSet& p) {
  if (p.horizon() < 16) throw IndexSetError("density estimate needs a horizon of at least 16");
  DensityEstimate est;
  est.estimate = partial_density(p, p.horizon());
  for (std::size_t cp : dyadic_checkpoints(p.horizon())) est.checkpoints.emplace_back(cp, partial_density(p, cp));
  return est;
}

std::size_t block_index(std::size_t n) {
  if (n == 0) throw IndexSetError("block index is defined for n >= 1");
  return static_cast<std::size_t>(std::countr_zero(n)) + 1;
}

// ---------------------------------------------------------------------------
// TailCertificate

TailCertificate TailCertificate::empty_beyond(std::size_t n0) {
  TailCertificate c;
  c.kind_ = Kind::Empty;
  c.n0_ = n0;
  return c;
}

TailCertificate TailCertificate::subset_of_blocks(std::vector<std::size_t> blocks) {
  for (std::size_t j : blocks)
    if (j == 0) throw CertificateError("block indices start at 1");
  std::sort(blocks.begin(), blocks.end());
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  TailCertificate c;
  c.kind_ = Kind::SubsetOfBlocks;
  c.blocks_ = std::move(blocks);
  return c;
}

TailCertificate TailCertificate::subset_of_union(std::vector<TailCertificate> parts) {
  TailCertificate c;
  c.kind_ = Kind::SubsetOfUnion;
  c.parts_ = std::move(parts);
  return c;
}

bool TailCertificate::admits(std::size_t n) const {
  switch (kind_) {
    case Kind::Empty:
      return n <= n0_;
    case Kind::SubsetOfBlocks:
      return std::binary_search(blocks_.begin(), blocks_.end(), block_index(n));
    case Kind::SubsetOfUnion:
      return std::any_of(parts_.begin(), parts_.end(), [n](const auto& p) { return p.admits(n); });
  }
  return false;
}

bool TailCertificate::is_finite() const {
  switch (kind_) {
    case Kind::Empty:
      return true;
    case Kind::SubsetOfBlocks:
      return blocks_.empty();
    case Kind::SubsetOfUnion:
      return std::all_of(parts_.begin(), parts_.end(), [](const auto& p) { return p.is_finite(); });
  }
  return false;
}

bool TailCertificate::meets_finitely_many_blocks() const {
  // Block lists are finite by construction, and so are unions of finitely many parts.
  return true;
}

std::string TailCertificate::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Empty:
      os << "Empty(" << n0_ << ")";
      break;
    case Kind::SubsetOfBlocks: {
      os << "SubsetOfBlocks(";
      for (std::size_t i = 0; i < blocks_.size(); ++i) os << (i ? "," : "") << blocks_[i];
      os << ")";
      break;
    }
    case Kind::SubsetOfUnion: {
      os << "SubsetOfUnion(";
      for (std::size_t i = 0; i < parts_.size(); ++i) os << (i ? "," : "") << parts_[i].describe();
      os << ")";
      break;
    }
  }
  return os.str();
}

std::optional<TailCertificate> merge_certificates(const std::optional<TailCertificate>& a,
                                                  const std::optional<TailCertificate>& b) {
  if (!a || !b) return std::nullopt;
  return TailCertificate::subset_of_union({*a, *b});
}

// ---------------------------------------------------------------------------
// Ideal

Ideal Ideal::finite() { return Ideal{}; }

Ideal Ideal::density(double tau) {
  Ideal i;
  i.kind = IdealKind::Density;
  i.tau = tau;
  return i;
}

Ideal Ideal::blocks() {
  Ideal i;
  i.kind = IdealKind::BlockDecomposition;
  return i;
}

void Ideal::validate() const {
  if (!(tau > 0.0 && tau < 0.5)) throw Error("ideal: tau must lie in (0, 0.5)");
  if (!(stabilization_window > 0.0 && stabilization_window < 1.0))
    throw Error("ideal: stabilization window must be a fraction in (0, 1)");
  if (!(block_window > 0.0 && block_window < 1.0))
    throw Error("ideal: block window must be a fraction in (0, 1)");
  if (!(trend_slack >= 0.0 && trend_slack < 1.0)) throw Error("ideal: trend slack must lie in [0, 1)");
}

std::string Ideal::name() const { return to_string(kind); }

std::string to_string(IdealKind kind) {
  switch (kind) {
    case IdealKind::Finite:
      return "finite";
    case IdealKind::Density:
      return "density";
    case IdealKind::BlockDecomposition:
      return "blocks";
  }
  return "?";
}

std::optional<IdealKind> parse_ideal_kind(const std::string& s) {
  if (s == "finite") return IdealKind::Finite;
  if (s == "density") return IdealKind::Density;
  if (s == "blocks") return IdealKind::BlockDecomposition;
  return std::nullopt;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::InIdeal:
      return "InIdeal";
    case Membership::NotInIdeal:
      return "NotInIdeal";
    case Membership::Inconclusive:
      return "Inconclusive";
  }
  return "?";
}

std::string to_string(VerdictMode m) { return m == VerdictMode::Exact ? "Exact" : "Empirical"; }

std::string IdealVerdict::evidence() const {
  std::ostringstream os;
  os << "rule=" << rule << " count=" << count;
  os << " last=" << (last_member ? std::to_string(*last_member) : std::string("none"));
  os << " final_density=" << final_density;
  if (!dyadic_densities.empty()) {
    os << " dyadic=[";
    for (std::size_t i = 0; i < dyadic_densities.size(); ++i)
      os << (i ? "," : "") << dyadic_densities[i].first << ":" << dyadic_densities[i].second;
    os << "]";
  }
  os << " blocks=" << distinct_blocks.size();
  if (certificate) os << " cert=" << certificate->describe();
  return os.str();
}

// ---------------------------------------------------------------------------
// Membership

namespace {

std::size_t distinct_blocks_up_to(const IndexSet& p, std::size_t j) {
  std::set<std::size_t> seen;
  for (std::size_t m : p.members()) {
    if (m > j) break;
    seen.insert(block_index(m));
  }
  return seen.size();
}

bool certificate_decides(const Ideal& ideal, const TailCertificate& cert) {
  switch (ideal.kind) {
    case IdealKind::Finite:
    case IdealKind::Density:
      return cert.is_finite();
    case IdealKind::BlockDecomposition:
      return cert.meets_finitely_many_blocks();
  }
  return false;
}

Membership finite_rule(const IndexSet& p, const std::vector<std::size_t>& cps) {
  for (std::size_t i = 1; i < cps.size(); ++i)
    if (p.count_up_to(cps[i]) == p.count_up_to(cps[i - 1])) return Membership::Inconclusive;
  return Membership::NotInIdeal;
}

Membership density_rule(const Ideal& ideal, const IndexSet& p) {
  const DensityEstimate est = density_estimate(p);
  if (est.estimate <= ideal.tau && est.non_increasing(ideal.trend_slack)) return Membership::InIdeal;
  if (est.estimate >= 2.0 * ideal.tau && est.non_decreasing(ideal.trend_slack)) return Membership::NotInIdeal;
  return Membership::Inconclusive;
}

Membership blocks_rule(const Ideal& ideal, const IndexSet& p, const std::vector<std::size_t>& cps) {
  // Recurrence is checked first: a set meeting every block gains new block
  // indices at every doubling, yet may show none inside the last window.
  bool recurring = true;
  for (std::size_t i = 1; i < cps.size() && recurring; ++i)
    recurring = distinct_blocks_up_to(p, cps[i]) > distinct_blocks_up_to(p, cps[i - 1]);
  if (recurring) return Membership::NotInIdeal;

  const std::size_t cut = window_cut(p.horizon(), ideal.block_window);
  std::set<std::size_t> settled;
  for (std::size_t m : p.members()) {
    if (m <= cut)
      settled.insert(block_index(m));
    else if (!settled.contains(block_index(m)))
      return Membership::Inconclusive;
  }
  return Membership::InIdeal;
}

}  // namespace

IdealVerdict decide_membership(const Ideal& ideal, const IndexSet& p, const std::optional<TailCertificate>& cert) {
  ideal.validate();
  IdealVerdict v;
  v.count = p.size();
  v.last_member = p.max();
  v.final_density = partial_density(p, p.horizon());
  {
    std::set<std::size_t> blocks;
    for (std::size_t m : p.members()) blocks.insert(block_index(m));
    v.distinct_blocks.assign(blocks.begin(), blocks.end());
  }
  const bool dyadic_ok = p.horizon() >= 16;
  if (dyadic_ok) v.dyadic_densities = density_estimate(p).checkpoints;
  v.certificate = cert;

  if (cert) {
    for (std::size_t m : p.members()) {
      if (!cert->admits(m))
        throw CertificateError("certificate " + cert->describe() + " does not admit observed member " +
                               std::to_string(m));
    }
    if (certificate_decides(ideal, *cert)) {
      v.status = Membership::InIdeal;
      v.mode = VerdictMode::Exact;
      v.rule = "certificate";
      return v;
    }
  }

  v.mode = VerdictMode::Empirical;
  const std::size_t stable_cut = window_cut(p.horizon(), ideal.stabilization_window);
  if (p.empty() || *p.max() <= stable_cut) {
    v.status = Membership::InIdeal;
    v.rule = "finite-prefix";
    return v;
  }
  if (!dyadic_ok) {
    v.status = Membership::Inconclusive;
    v.rule = "horizon-too-short";
    return v;
  }
  const auto cps = dyadic_checkpoints(p.horizon());
  switch (ideal.kind) {
    case IdealKind::Finite:
      v.status = finite_rule(p, cps);
      v.rule = "dyadic-recurrence";
      break;
    case IdealKind::Density:
      v.status = density_rule(ideal, p);
      v.rule = "density-trend";
      break;
    case IdealKind::BlockDecomposition:
      v.status = blocks_rule(ideal, p, cps);
      v.rule = "block-stabilization";
      break;
  }
  return v;
}

IdealVerdict filter_contains(const Ideal& ideal, const IndexSet& p,
                             const std::optional<TailCertificate>& complement_cert) {
  return decide_membership(ideal, p.complement(), complement_cert);
}

// ---------------------------------------------------------------------------
// Axioms

namespace {

std::optional<IdealVerdict> try_decide(const Ideal& ideal, const IndexSet& p,
                                       const std::optional<TailCertificate>& cert, AxiomsReport& report,
                                       const std::string& what) {
  try {
    return decide_membership(ideal, p, cert);
  } catch (const Error& e) {
    report.failures.push_back(what + ": " + e.what());
    return std::nullopt;
  }
}

// Deterministic subsets: every other member, the lower half, the empty set.
std::vector<IndexSet> sample_subsets(const IndexSet& p) {
  std::vector<std::size_t> alternate;
  std::vector<std::size_t> lower;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i % 2 == 0) alternate.push_back(p.members()[i]);
    if (i < p.size() / 2) lower.push_back(p.members()[i]);
  }
  return {IndexSet(p.horizon(), std::move(alternate)), IndexSet(p.horizon(), std::move(lower)),
          IndexSet(p.horizon())};
}

}  // namespace

AxiomsReport axioms_check(const Ideal& ideal, const std::vector<CertifiedSet>& family) {
  AxiomsReport report;
  if (family.empty()) {
    report.failures.push_back("empty family");
    report.empty_set_in_ideal = false;
    return report;
  }
  const std::size_t horizon = family.front().set.horizon();
  for (const auto& member : family) {
    if (member.set.horizon() != horizon) {
      report.failures.push_back("family members do not share a horizon");
      report.union_closed = report.subset_closed = false;
      return report;
    }
  }

  if (auto v = try_decide(ideal, IndexSet(horizon), std::nullopt, report, "empty set"))
    report.empty_set_in_ideal = v->status == Membership::InIdeal;
  if (!report.empty_set_in_ideal) report.failures.push_back("empty set is not InIdeal");

  std::vector<bool> in_ideal(family.size(), false);
  for (std::size_t i = 0; i < family.size(); ++i) {
    auto v = try_decide(ideal, family[i].set, family[i].certificate, report, "member " + std::to_string(i));
    in_ideal[i] = v && v->status == Membership::InIdeal;
  }

  for (std::size_t i = 0; i < family.size(); ++i) {
    if (!in_ideal[i]) continue;
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (!in_ideal[j]) continue;
      ++report.unions_checked;
      const std::string what = "union of members " + std::to_string(i) + " and " + std::to_string(j);
      auto v = try_decide(ideal, family[i].set.unite(family[j].set),
                          merge_certificates(family[i].certificate, family[j].certificate), report, what);
      if (!v || v->status != Membership::InIdeal) {
        report.union_closed = false;
        report.failures.push_back(what + " is not InIdeal");
      }
    }
    for (const auto& sub : sample_subsets(family[i].set)) {
      ++report.subsets_checked;
      const std::string what = "subset of member " + std::to_string(i);
      auto v = try_decide(ideal, sub, family[i].certificate, report, what);
      if (!v || v->status != Membership::InIdeal) {
        report.subset_closed = false;
        report.failures.push_back(what + " is not InIdeal");
      }
    }
  }

  for (std::size_t z = 1; z <= horizon; ++z) {
    ++report.singletons_checked;
    auto v = try_decide(ideal, IndexSet(horizon, {z}), TailCertificate::empty_beyond(z), report, "singleton");
    if (!v || v->status != Membership::InIdeal) {
      report.admissible = false;
      report.failures.push_back("singleton {" + std::to_string(z) + "} is not InIdeal");
      break;
    }
  }

  if (auto v = try_decide(ideal, IndexSet::full(horizon), std::nullopt, report, "full set")) {
    if (v->status == Membership::InIdeal && v->mode == VerdictMode::Exact) {
      report.nontrivial = false;
      report.failures.push_back("full horizon set came out Exact-InIdeal");
    }
  }
  return report;
}

}  // namespace sublim
