#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "malle/lmfdb.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <memory>

#include <httplib.h>
#include <json.hpp>

namespace malle {

std::vector<FieldRecord> read_snapshot_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  std::vector<FieldRecord> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.rfind("label", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    std::stringstream ss(line);
    std::string label, d1, d2, r1;
    if (!std::getline(ss, label, ',') || !std::getline(ss, d1, ',') ||
        !std::getline(ss, d2, ',') || !std::getline(ss, r1, ','))
      throw std::runtime_error("bad snapshot row: " + line);
    FieldRecord r;
    r.label = label;
    r.disc_K = Int(d1);
    r.disc_resolvent = Int(d2);
    r.r1 = std::stoi(r1);
    if (r.disc_K <= 0 || r.disc_resolvent <= 0)
      throw std::runtime_error("discriminants must be positive absolute values: " + line);
    out.push_back(std::move(r));
  }
  return out;
}

void write_snapshot_csv(const std::string& path, const std::vector<FieldRecord>& records) {
  std::ofstream out(path);
  out << "label,disc_K,disc_resolvent,r1\n";
  for (const auto& r : records)
    out << r.label << ',' << r.disc_K.get_str() << ',' << r.disc_resolvent.get_str() << ','
        << r.r1 << '\n';
}

bool height_at_most(const FieldRecord& r, long long B) {
  // |dK| / sqrt(|dL|) <= B  <=>  dK^2 <= B^2 dL
  return r.disc_K * r.disc_K <= make_int(B) * make_int(B) * r.disc_resolvent;
}

EmpiricalResult empirical_density(const std::vector<FieldRecord>& records, long long B) {
  EmpiricalResult res;
  if (B <= 0) return res;
  for (const auto& r : records) {
    if (!height_at_most(r, B)) continue;
    if (r.r1 == 4)
      ++res.count_r4;
    else if (r.r1 == 0)
      ++res.count_c2;
    else
      throw std::runtime_error("unexpected signature for quartic A4 record: " + r.label);
  }
  res.c_r4 = 2.0 * (double)res.count_r4 / (double)B;
  res.c_c2 = 2.0 * (double)res.count_c2 / (double)B;
  long long tot = res.count_r4 + res.count_c2;
  res.share_real = tot ? (double)res.count_r4 / (double)tot : 0.0;
  return res;
}

namespace {

std::string cache_key(const FetchOptions& opt) {
  // FNV-1a over host+path+query
  std::string s = opt.host + opt.path + opt.query;
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[32];
  snprintf(buf, sizeof buf, "%016llx", h);
  return std::string(buf);
}

Int json_int(const nlohmann::json& v) {
  if (v.is_number_integer()) return make_int(v.get<long long>());
  if (v.is_string()) return Int(v.get<std::string>());
  if (v.is_number_float()) return make_int(llround(v.get<double>()));
  throw std::runtime_error("unexpected JSON numeric encoding");
}

} // namespace

std::vector<FieldRecord> lmfdb_fetch(const FetchOptions& opt) {
  namespace fs = std::filesystem;
  std::string cache_file;
  if (!opt.cache_dir.empty()) {
    fs::create_directories(opt.cache_dir);
    cache_file = opt.cache_dir + "/" + cache_key(opt) + ".csv";
    if (fs::exists(cache_file)) return read_snapshot_csv(cache_file);
  }

  std::unique_ptr<httplib::Client> cli;
  if (opt.plain_http)
    cli = std::make_unique<httplib::Client>(opt.host, opt.port);
  else
    cli = std::make_unique<httplib::Client>("https://" + opt.host + ":" + std::to_string(opt.port));
  cli->set_connection_timeout(15);
  cli->set_read_timeout(30);
  std::vector<FieldRecord> out;
  std::string url = opt.path + "?" + opt.query;
  for (int page = 0; page < opt.max_pages && !url.empty(); ++page) {
    if (page > 0) std::this_thread::sleep_for(std::chrono::milliseconds(opt.delay_ms));
    auto res = cli->Get(url.c_str());
    if (!res)
      throw std::runtime_error("LMFDB request failed (no connection); retry later or use --input");
    if (res->status == 429)
      throw std::runtime_error("LMFDB rate limited (429); increase the delay and retry");
    if (res->status != 200)
      throw std::runtime_error("LMFDB HTTP " + std::to_string(res->status) +
                               "; retry later or use --input");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(res->body);
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string("LMFDB parse failure: ") + e.what());
    }
    if (!j.contains("data")) throw std::runtime_error("LMFDB response has no data field");
    for (const auto& row : j["data"]) {
      FieldRecord r;
      r.label = row.value(opt.f_label, std::string("?"));
      if (!row.contains(opt.f_disc) || !row.contains(opt.f_resolvent) || !row.contains(opt.f_r1))
        throw std::runtime_error(
            "LMFDB schema drift: adjust the field adapter (missing " + opt.f_disc + "/" +
            opt.f_resolvent + "/" + opt.f_r1 + ")");
      r.disc_K = abs(json_int(row[opt.f_disc]));
      r.disc_resolvent = abs(json_int(row[opt.f_resolvent]));
      r.r1 = (int)to_long(json_int(row[opt.f_r1]));
      out.push_back(std::move(r));
    }
    url = j.value("next", std::string(""));
    if (!url.empty() && url.rfind("http", 0) == 0) {
      auto pos = url.find(opt.host);
      if (pos != std::string::npos) url = url.substr(pos + opt.host.size());
    }
  }
  if (!cache_file.empty()) write_snapshot_csv(cache_file, out);
  return out;
}

} // namespace malle
