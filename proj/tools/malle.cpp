#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "malle/report.hpp"
#include "malle/lmfdb.hpp"

using namespace malle;

namespace {

void emit(const Json& j, const std::string& json_path) {
  std::cout << render_table(j);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << j.dump(2) << "\n";
  }
}

int run_masscheck(const Problem& pr, long long maxq) {
  int failures = 0;
  for (long long q : primes_up_to(maxq)) {
    if (!pr.datum.is_good_prime(q)) continue;
    LocalDensity a = good_local_density(pr.datum, pr.tcs, pr.L, pr.fujita_report.a, q);
    LocalDensity b = brute_force_local(pr.datum, pr.tcs, pr.L, pr.fujita_report.a, q);
    bool ok = a.same_terms(b);
    std::cout << "q=" << q << " mass=" << (a.exact() ? rat_str(*a.exact()) : std::to_string(a.value()))
              << (ok ? "  ok" : "  MISMATCH") << "\n";
    if (!ok) ++failures;
  }
  return failures ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"malle: leading constants for Malle's conjecture via Brauer groups of stacks"};
  app.require_subcommand(1);

  std::string spec_path, json_path, input_csv, cache_dir;
  long long primes = 0, maxq = 47, bound = 100000;
  int threads = 1;
  bool naive = false, do_fetch = false, artin = false;

  auto add_common = [&](CLI::App* c, bool needs_spec = true) {
    if (needs_spec) c->add_option("spec", spec_path, "problem spec file")->required();
    c->add_option("--json", json_path, "also write a JSON report");
  };

  auto* c_an = app.add_subcommand("analyze", "weights, Fujita invariants, Iitaka data");
  add_common(c_an);
  auto* c_br = app.add_subcommand("brauer", "partially unramified Brauer group report");
  add_common(c_br);
  auto* c_ct = app.add_subcommand("constant", "leading constant with Euler product numerics");
  add_common(c_ct);
  c_ct->add_option("--primes", primes, "prime bound P");
  c_ct->add_option("--threads", threads, "worker threads for the Euler product");
  c_ct->add_flag("--naive", naive, "Brauer-free Malle-Bhargava value only");
  c_ct->add_flag("--artin", artin, "absolutely convergent Artin normalization");
  auto* c_mc = app.add_subcommand("masscheck", "brute-force oracle vs mass formula");
  add_common(c_mc);
  c_mc->add_option("--max-q", maxq, "largest prime to test");
  auto* c_em = app.add_subcommand("empirical", "LMFDB empirical comparison at height bound B");
  add_common(c_em, false);
  c_em->add_option("--input", input_csv, "snapshot CSV (label,disc_K,disc_resolvent,r1)");
  c_em->add_flag("--fetch", do_fetch, "fetch from the LMFDB (rate limited)");
  c_em->add_option("--cache", cache_dir, "cache directory for fetches");
  c_em->add_option("--bound", bound, "height bound B");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_em->parsed()) {
      std::vector<FieldRecord> recs;
      if (!input_csv.empty()) {
        recs = read_snapshot_csv(input_csv);
      } else if (do_fetch) {
        FetchOptions opt;
        opt.cache_dir = cache_dir;
        if (opt.cache_dir.empty())
          if (const char* env = getenv("MALLE_CACHE_DIR")) opt.cache_dir = env;
        recs = lmfdb_fetch(opt);
      } else {
        std::cerr << "empirical: need --input snapshot.csv or --fetch\n";
        return 2;
      }
      EmpiricalResult res = empirical_density(recs, bound);
      Json j;
      j["records"] = recs.size();
      j["bound"] = bound;
      j["count_r4"] = res.count_r4;
      j["count_c2"] = res.count_c2;
      char buf[32];
      snprintf(buf, sizeof buf, "%.4f", res.c_r4);
      j["c_r4"] = buf;
      snprintf(buf, sizeof buf, "%.4f", res.c_c2);
      j["c_c2"] = buf;
      snprintf(buf, sizeof buf, "%.1f%%", 100 * res.share_real);
      j["share_totally_real"] = buf;
      emit(j, json_path);
      return 0;
    }

    ProblemSpec ps = parse_spec(spec_path);
    Problem pr = build_problem(ps);

    if (c_an->parsed()) {
      emit(analyze_json(pr), json_path);
      return 0;
    }
    if (c_br->parsed()) {
      BrauerReport br = brauer_report(pr.datum, pr.tcs, pr.support);
      emit(brauer_json(pr, br), json_path);
      return 0;
    }
    if (c_ct->parsed()) {
      if (!pr.L.is_big(pr.tcs) || !pr.fujita_report.balanced) {
        // unbalanced: report the Iitaka decomposition and exit 2
        UnbalancedReport ur = unbalanced_report(pr.datum, pr.tcs, pr.L, pr.fujita_report);
        Json j;
        j["balanced"] = false;
        j["iitaka_kernel_order"] = ur.M.order();
        j["iitaka_group_order"] = ur.iitaka_group->order();
        j["fiber_weight"] = rat_str(ur.fiber_weight);
        j["note"] = "unbalanced height: constants decompose along the Iitaka fibration";
        emit(j, json_path);
        return 2;
      }
      long long P = primes ? primes : pr.primes_bound;
      BrauerReport br = brauer_report(pr.datum, pr.tcs, pr.support);
      auto mode = artin ? ConvergenceMode::Artin : ConvergenceMode::Zeta;
      LeadingConstantReport rep =
          leading_constant(pr.datum, pr.tcs, pr.L, pr.fujita_report, pr.heights, br, P, mode,
                           threads, naive);
      std::optional<LeadingConstantReport> nv;
      if (!naive && br.total.order() > 1)
        nv = leading_constant(pr.datum, pr.tcs, pr.L, pr.fujita_report, pr.heights, br, P, mode,
                              threads, true);
      emit(constant_json(pr, rep, nv ? &*nv : nullptr), json_path);
      return 0;
    }
    if (c_mc->parsed()) return run_masscheck(pr, maxq);
  } catch (const precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
