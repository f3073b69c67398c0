// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "battery.hpp"
#include "sublim/cli.hpp"
#include "sublim/convergence.hpp"
#include "sublim/oracle.hpp"
#include "sublim/sequences.hpp"
#include "test_support.hpp"

using namespace sublim;
using sublim::testing::kBatteryIdeals;
using sublim::testing::make_battery;
using sublim::testing::Random;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kEps{0.5, 0.1, 0.01};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) detail = why;
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const std::string& name, const std::function<Outcome()>& body, double budget_s = 0.0) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0.0 && secs > budget_s) {
    char b[96];
    std::snprintf(b, sizeof b, "took %.2f s, budget %.0f s", secs, budget_s);
    o.require(false, b);
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s (%.2f s)%s%s\n", o.pass ? "PASS" : "FAIL", id, name.c_str(), secs,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char b[64];
  std::snprintf(b, sizeof b, f, x);
  return b;
}

std::pair<std::size_t, std::size_t> random_shape(Random& rng) {
  const std::size_t d = rng.index(2, 5);
  const std::size_t k = rng.index(1, std::min<std::size_t>(3, d));
  return {d, k};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

int main() {
  criterion(
      1, "closed-form gap matches the sampling oracle on 200 pairs",
      [] {
        Outcome o;
        Random rng(1001);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
          const auto [d, k] = random_shape(rng);
          const Subspace u = rng.subspace(d, k);
          const Subspace v = rng.subspace(d, k);
          worst = std::max(worst, std::abs(gap(u, v) - oracle::gap_bruteforce(u, v)));
        }
        o.require(worst <= 1e-3, "max deviation " + fmt("%.3g", worst));
        o.detail = o.pass ? "max deviation " + fmt("%.3g", worst) : o.detail;
        return o;
      },
      10.0);

  criterion(2, "gap range, symmetry, zero iff equal, basis invariance (>= 500 each)", [] {
    Outcome o;
    Random rng(2002);
    double asym = 0.0;
    double variance = 0.0;
    double worst_equal = 0.0;
    double least_distinct = 1.0;
    for (int t = 0; t < 1000; ++t) {
      const auto [d, k] = random_shape(rng);
      const Subspace u = rng.subspace(d, k);
      const Subspace v = rng.subspace(d, k);
      const double g = gap(u, v);
      o.require(g >= 0.0 && g <= 1.0, "gap outside [0, 1]: " + fmt("%.17g", g));
      asym = std::max(asym, std::abs(g - gap(v, u)));
      variance = std::max(variance, std::abs(g - gap(u.with_mixed_basis(rng.orthogonal(k)), v)));
      variance = std::max(variance, std::abs(g - gap(u, v.with_mixed_basis(rng.orthogonal(k)))));
      worst_equal = std::max(worst_equal, gap(u, u.with_mixed_basis(rng.orthogonal(k))));
      if (k < d) least_distinct = std::min(least_distinct, g);
    }
    o.require(asym <= 1e-9, "asymmetry " + fmt("%.3g", asym));
    o.require(variance <= 1e-9, "basis dependence " + fmt("%.3g", variance));
    o.require(worst_equal <= 1e-8, "equal subspaces at gap " + fmt("%.3g", worst_equal));
    o.require(least_distinct > 1e-8, "distinct subspaces at gap " + fmt("%.3g", least_distinct));
    if (o.pass)
      o.detail = "asym " + fmt("%.2g", asym) + ", basis " + fmt("%.2g", variance) + ", equal " +
                 fmt("%.2g", worst_equal) + ", min distinct " + fmt("%.2g", least_distinct);
    return o;
  });

  criterion(3, "projection and volume identities on 1000 instances", [] {
    Outcome o;
    Random rng(3003);
    double proj_err = 0.0;
    double vol_err = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const auto [d, k] = random_shape(rng);
      const Subspace v = rng.subspace(d, k);
      const Vector u = rng.unit_vector(d);
      double coeff_sq = 0.0;
      for (const auto& b : v.basis()) {
        double c = 0.0;
        for (std::size_t r = 0; r < d; ++r) c += u[r] * b[r];
        coeff_sq += c * c;
      }
      const Vector p = project(u, v);
      double p_sq = 0.0;
      for (double x : p) p_sq += x * x;
      proj_err = std::max(proj_err, std::abs(p_sq - coeff_sq));
      std::vector<Vector> args{u};
      for (const auto& b : v.basis()) args.push_back(b);
      const double vol = n_norm(args);
      vol_err = std::max(vol_err, std::abs(vol * vol + coeff_sq - 1.0));
    }
    o.require(proj_err <= 1e-12, "projection identity off by " + fmt("%.3g", proj_err));
    o.require(vol_err <= 1e-10, "volume identity off by " + fmt("%.3g", vol_err));
    if (o.pass) o.detail = "projection " + fmt("%.2g", proj_err) + ", volume " + fmt("%.2g", vol_err);
    return o;
  });

  criterion(4, "e1 against e2: converse of the volume implication fails", [] {
    Outcome o;
    const auto ex = sequences::example36();
    const auto traces = evaluate_traces(ex.sequence, ex.candidate, 1000);
    for (double g : traces.gap()) o.require(g == 1.0, "gap trace not constantly 1");
    for (double x : traces.per_basis[static_cast<std::size_t>(Criterion::Theorem36)][0])
      o.require(x == 0.0, "volume trace not constantly 0");
    for (const Ideal& ideal : kBatteryIdeals) {
      const auto r = assemble_report(ex.sequence.name, traces, ex.sequence.exceptional_certificate, ideal, kEps,
                                     kEquivalentCriteria, true);
      o.require(r.criteria[0].overall == Verdict::DoesNotConverge, ideal.name() + ": subspace verdict " +
                                                                       to_string(r.criteria[0].overall));
      o.require(r.theorem36 && r.theorem36->overall == Verdict::Converges, ideal.name() + ": volume verdict");
    }
    return o;
  });

  criterion(5, "odd/even line example at horizon 10^4", [] {
    Outcome o;
    const std::size_t horizon = 10000;
    const auto ex = sequences::example33(sequences::Example33Variant::Amended);
    const auto blocks = subspace_i_converges(ex.sequence, ex.candidate, Ideal::blocks(), kEps, horizon);
    o.require(blocks.overall == Verdict::Converges, "block ideal: " + to_string(blocks.overall));
    for (const auto& e : blocks.criteria[0].per_basis[0].per_eps)
      o.require(e.verdict.mode == VerdictMode::Exact, "block ideal verdict not exact");

    const auto density = subspace_i_converges(ex.sequence, ex.candidate, Ideal::density(), kEps, horizon);
    o.require(density.overall == Verdict::DoesNotConverge, "density ideal: " + to_string(density.overall));
    const double d = density.criteria[0].per_basis[0].per_eps[0].verdict.final_density;
    o.require(d >= 0.49 && d <= 0.51, "density at eps 0.5 is " + fmt("%.4f", d));

    const auto finite = subspace_i_converges(ex.sequence, ex.candidate, Ideal::finite(), kEps, horizon);
    o.require(finite.overall == Verdict::DoesNotConverge, "finite ideal: " + to_string(finite.overall));

    const auto printed = sequences::example33(sequences::Example33Variant::AsPrinted);
    const Trace t = gap_trace(printed.sequence, printed.candidate, horizon);
    double tail = 0.0;
    for (std::size_t n = 5000; n <= horizon; n += 2) tail = std::max(tail, t[n - 1]);
    o.require(tail > 0.5, "printed variant even-index tail max " + fmt("%.4f", tail));
    if (o.pass) o.detail = "density " + fmt("%.4f", d) + ", printed tail max " + fmt("%.4f", tail);
    return o;
  });

  const auto battery = make_battery();
  criterion(
      6, "five criteria agree on the 20-member battery under three ideals",
      [&] {
        Outcome o;
        for (const auto& m : battery) {
          const auto ex = sequences::rotation_family(m.family);
          const auto traces = evaluate_traces(ex.sequence, ex.candidate, 1000);
          for (const Ideal& ideal : kBatteryIdeals) {
            const auto r = assemble_report(ex.sequence.name, traces, ex.sequence.exceptional_certificate, ideal,
                                           kEps, kEquivalentCriteria, true);
            const Verdict first = r.criteria[0].overall;
            o.require(first != Verdict::Inconclusive, ex.sequence.name + "/" + ideal.name() + ": inconclusive");
            for (const auto& c : r.criteria)
              o.require(c.overall == first, ex.sequence.name + "/" + ideal.name() + ": criterion " +
                                                criterion_id(c.criterion) + " disagrees");
            o.require(r.theorem36_implication_holds() == true, ex.sequence.name + ": volume implication");
          }
        }
        return o;
      },
      60.0);

  criterion(7, "usual and statistical checkers coincide with the finite and density ideals", [&] {
    Outcome o;
    for (const auto& m : battery) {
      const auto ex = sequences::rotation_family(m.family);
      const std::string& name = ex.sequence.name;
      const Verdict usual = usual_converges(ex.sequence, ex.candidate, kEps, 1000).overall;
      const Verdict statistical = statistical_converges(ex.sequence, ex.candidate, kEps, 1000).overall;
      std::vector<Verdict> by_ideal;
      for (const Ideal& ideal : kBatteryIdeals)
        by_ideal.push_back(subspace_i_converges(ex.sequence, ex.candidate, ideal, kEps, 1000).overall);
      o.require(usual == by_ideal[0], name + ": usual differs from finite ideal");
      o.require(statistical == by_ideal[1], name + ": statistical differs from density ideal");
      if (usual == Verdict::Converges)
        for (Verdict v : by_ideal) o.require(v == Verdict::Converges, name + ": usual limit not an ideal limit");
    }
    return o;
  });

  criterion(8, "ideal axioms on certified exceptional-set families", [&] {
    Outcome o;
    const std::size_t horizon = 1024;
    std::vector<CertifiedSet> family;
    auto add = [&](const SubspaceSequence& seq, const Subspace& v) {
      const Trace t = gap_trace(seq, v, horizon);
      for (double eps : kEps) {
        if (!seq.exceptional_certificate) continue;
        auto cert = seq.exceptional_certificate(eps);
        if (cert) family.push_back({exceptional_set(t, eps).set, cert});
      }
    };
    for (const auto& m : battery) {
      const auto ex = sequences::rotation_family(m.family);
      add(ex.sequence, ex.candidate);
    }
    const auto ex33 = sequences::example33(sequences::Example33Variant::Amended);
    add(ex33.sequence, ex33.candidate);
    std::size_t unions = 0;
    for (const Ideal& ideal : kBatteryIdeals) {
      const AxiomsReport r = axioms_check(ideal, family);
      unions += r.unions_checked;
      o.require(r.passed(), ideal.name() + ": " + (r.failures.empty() ? "failed" : r.failures.front()));
    }
    if (o.pass) o.detail = std::to_string(family.size()) + " sets, " + std::to_string(unions) + " unions";
    return o;
  });

  criterion(9, "suite runs write byte-identical traces", [&] {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "sublim_acceptance";
    fs::remove_all(root);
    std::ostringstream sink;
    cli::ExperimentConfig c;
    c.sequence.builtin = "example33";
    c.horizon = 10000;
    cli::run_suite({c}, root / "a", sink);
    cli::run_suite({c}, root / "b", sink);
    o.require(slurp(root / "a" / "trace.csv") == slurp(root / "b" / "trace.csv"), "example trace differs");
    o.require(!slurp(root / "a" / "trace.csv").empty(), "empty trace");

    std::vector<cli::ExperimentConfig> configs;
    for (const auto& m : battery) {
      cli::ExperimentConfig b;
      b.sequence.family = m.family;
      b.candidate = m.family.candidate;
      configs.push_back(b);
    }
    cli::run_suite(configs, root / "c", sink);
    cli::run_suite(configs, root / "d", sink);
    for (std::size_t i = 0; i < configs.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "%03zu_trace.csv", i);
      o.require(slurp(root / "c" / name) == slurp(root / "d" / name), std::string("battery trace differs: ") + name);
    }
    fs::remove_all(root);
    return o;
  });

  std::printf("%s: %d failing criteria\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
