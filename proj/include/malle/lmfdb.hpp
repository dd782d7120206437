#pragma once

#include <optional>
#include <string>
#include <vector>

#include "malle/rat.hpp"

namespace malle {

// One quartic field record from the LMFDB (or a snapshot CSV):
// columns label, disc_K (absolute), disc_resolvent (cubic resolvent,
// absolute), r1 (number of real embeddings).
struct FieldRecord {
  std::string label;
  Int disc_K;
  Int disc_resolvent;
  int r1 = 0;
};

std::vector<FieldRecord> read_snapshot_csv(const std::string& path);
void write_snapshot_csv(const std::string& path, const std::vector<FieldRecord>& records);

// H(K) = |disc_K| * |disc_resolvent|^{-1/2}; filtering H <= B is done with
// exact integer arithmetic (disc_K^2 <= B^2 * disc_resolvent).
bool height_at_most(const FieldRecord& r, long long B);

struct EmpiricalResult {
  long long count_r4 = 0;
  long long count_c2 = 0;
  double c_r4 = 0;     // 2 * count / B (groupoid factor 2)
  double c_c2 = 0;
  double share_real = 0;
};

EmpiricalResult empirical_density(const std::vector<FieldRecord>& records, long long B);

struct FetchOptions {
  std::string host = "www.lmfdb.org";
  int port = 443;
  bool plain_http = false; // loopback testing
  std::string path = "/api/nf_fields/";
  std::string query = "degree=4&galois_label=4T4&_format=json";
  // adapter: JSON field names (schema drift isolated here)
  std::string f_label = "label";
  std::string f_disc = "disc_abs";
  std::string f_resolvent = "res_disc";
  std::string f_r1 = "r1";
  std::string cache_dir;
  int delay_ms = 1000; // polite rate limit
  int max_pages = 100;
};

// Fetches (with on-disk caching keyed by the query); throws with retry
// guidance on HTTP failure.
std::vector<FieldRecord> lmfdb_fetch(const FetchOptions& opt);

} // namespace malle
