#include <doctest.h>

#include <cstdio>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <filesystem>
#include <fstream>

#include "malle/config.hpp"
#include "malle/lmfdb.hpp"
#include "malle/report.hpp"

using namespace malle;

namespace {
std::string spec_path(const std::string& name) {
  return std::string(MALLE_SPEC_DIR) + "/" + name + ".cfg";
}
std::string data_path(const std::string& name) {
  return std::string(MALLE_TEST_DATA_DIR) + "/" + name;
}
} // namespace

TEST_CASE("spec parsing and round trip") {
  for (const auto& name : {"a4-disc", "a4-conductor", "d4-conductor", "z4-weights", "z8-radical",
                           "s3-disc", "c3wrc2-disc"}) {
    ProblemSpec ps = parse_spec(spec_path(name));
    ProblemSpec again = parse_spec_text(serialize_spec(ps));
    CHECK(spec_equal(ps, again));
  }
}

TEST_CASE("spec errors carry positions") {
  CHECK_THROWS_WITH_AS(parse_spec_text("group.name = \"A4\"\nbogus.key = 1\n", "t.cfg"),
                       doctest::Contains("t.cfg:2"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_spec_text("group.generators = [\"(1,2\"]\n", "t.cfg"),
                       doctest::Contains("unterminated"), std::runtime_error);
  CHECK_THROWS_AS(parse_spec_text("group.name = \"A4\"\ngroup.name = \"S3\"\n"),
                  std::runtime_error);
}

TEST_CASE("problems build from bundled specs") {
  Problem a4 = build_problem(parse_spec(spec_path("a4-disc")));
  CHECK(a4.fujita_report.a == Rat(1, 2));
  CHECK(a4.fujita_report.b == 2);
  CHECK(a4.fujita_report.balanced);
  CHECK(a4.heights.bad_places.at(2).plain == parse_rat("15/8"));

  Problem d4 = build_problem(parse_spec(spec_path("d4-conductor")));
  CHECK(d4.fujita_report.a == 1);
  CHECK(d4.fujita_report.b == 2);

  Problem z4 = build_problem(parse_spec(spec_path("z4-weights")));
  CHECK(z4.fujita_report.balanced);
  CHECK(z4.support.size() == 2);
}

TEST_CASE("reports are byte-stable") {
  Problem pr = build_problem(parse_spec(spec_path("a4-disc")));
  Json a = analyze_json(pr);
  Problem pr2 = build_problem(parse_spec(spec_path("a4-disc")));
  Json b = analyze_json(pr2);
  CHECK(a.dump() == b.dump());
}

TEST_CASE("snapshot io and exact height accounting") {
  auto recs = read_snapshot_csv(data_path("synthetic_quartics.csv"));
  CHECK(recs.size() == 10);
  // H = disc_K / sqrt(disc_res): exact integer comparison
  // synth-1: 2704 / 13 = 208 <= 300
  CHECK(height_at_most(recs[0], 208));
  CHECK(!height_at_most(recs[0], 207));

  EmpiricalResult r0 = empirical_density(recs, 0);
  CHECK(r0.count_r4 == 0);
  CHECK(r0.count_c2 == 0);

  EmpiricalResult r = empirical_density(recs, 100000);
  // exact accounting: c * B = 2 * count
  CHECK(r.c_r4 * 100000 == 2.0 * r.count_r4);
  CHECK(r.c_c2 * 100000 == 2.0 * r.count_c2);
  // monotonicity in B
  long long prev = 0;
  for (long long B : {10, 100, 1000, 10000, 100000, 1000000}) {
    EmpiricalResult rb = empirical_density(recs, B);
    CHECK(rb.count_r4 + rb.count_c2 >= prev);
    prev = rb.count_r4 + rb.count_c2;
  }

  // write-read round trip
  std::string tmp = std::filesystem::temp_directory_path() / "malle_snap_test.csv";
  write_snapshot_csv(tmp, recs);
  auto again = read_snapshot_csv(tmp);
  REQUIRE(again.size() == recs.size());
  for (size_t i = 0; i < recs.size(); ++i) {
    CHECK(again[i].label == recs[i].label);
    CHECK(again[i].disc_K == recs[i].disc_K);
    CHECK(again[i].disc_resolvent == recs[i].disc_resolvent);
    CHECK(again[i].r1 == recs[i].r1);
  }
  std::filesystem::remove(tmp);
}

TEST_CASE("cli binary runs the bundled specs") {
  std::string bin = std::string(MALLE_TEST_DATA_DIR) + "/../../build/malle";
  if (!std::filesystem::exists(bin)) {
    MESSAGE("cli binary not built next to the test tree; skipping");
    return;
  }
  std::string cmd = bin + " analyze " + spec_path("a4-disc") + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[256];
  while (fgets(buf, sizeof buf, p)) out += buf;
  int rc = pclose(p);
  CHECK(rc == 0);
  CHECK(out.find("a = 1/2") != std::string::npos);
  CHECK(out.find("balanced = true") != std::string::npos);

  // unbalanced height exits with code 2 on `constant`
  cmd = bin + " constant " + spec_path("d4-disc") + " >/dev/null 2>&1";
  rc = system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 2);
}

TEST_CASE("lmfdb fetch against a local server") {
  // loopback server exercising the client, pagination, and the cache
  httplib::Server srv;
  srv.Get("/api/nf_fields/", [](const httplib::Request& req, httplib::Response& res) {
    if (req.get_param_value("page") == "2") {
      res.set_content(R"({"data": [{"label": "x2", "disc_abs": 2704, "res_disc": 169, "r1": 0}]})",
                      "application/json");
    } else {
      res.set_content(
          R"({"data": [{"label": "x1", "disc_abs": 7625, "res_disc": 305, "r1": 4}],
              "next": "/api/nf_fields/?degree=4&page=2"})",
          "application/json");
    }
  });
  int port = srv.bind_to_any_port("127.0.0.1");
  if (port <= 0) {
    MESSAGE("cannot bind a loopback port in this sandbox; skipping");
    return;
  }
  std::thread th([&] { srv.listen_after_bind(); });
  FetchOptions opt;
  opt.host = "127.0.0.1";
  opt.port = port;
  opt.plain_http = true;
  opt.query = "degree=4";
  opt.delay_ms = 10;
  auto tmp = std::filesystem::temp_directory_path() / "malle_cache_test";
  std::filesystem::remove_all(tmp);
  opt.cache_dir = tmp.string();
  auto recs = lmfdb_fetch(opt);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].label == "x1");
  CHECK(recs[1].disc_K == 2704);
  // cache hit: fetch again with the server stopped
  srv.stop();
  th.join();
  auto cached = lmfdb_fetch(opt);
  REQUIRE(cached.size() == 2);
  CHECK(cached[1].label == "x2");
  std::filesystem::remove_all(tmp);
}

TEST_CASE("fixture files override bundled tables") {
  auto tmp = std::filesystem::temp_directory_path() / "malle_fixtures.txt";
  {
    std::ofstream out(tmp);
    out << "# group height place plain twisted...\n";
    out << "A4 disc 2 3/2\n";
    out << "A4 disc 3 7/5\n";
    out << "A4 conductor 2 1/1 1/2\n";
  }
  ProblemSpec ps = parse_spec_text("group.name = \"A4\"\nheight.kind = \"disc\"\nfixtures.file = \"" +
                                   tmp.string() + "\"\n");
  Problem pr = build_problem(ps);
  CHECK(pr.heights.bad_places.at(2).plain == Rat(3, 2));
  CHECK(pr.heights.bad_places.at(3).plain == Rat(7, 5));
  std::filesystem::remove(tmp);
}

TEST_CASE("size cap override") {
  ProblemSpec ps = parse_spec_text(
      "group.generators = [\"(1,2,3,4,5,6,7,8,9,10,11,12)\"]\ngroup.size_cap = 5\n");
  CHECK_THROWS_WITH_AS(build_problem(ps), doctest::Contains("size cap"), std::runtime_error);
}
