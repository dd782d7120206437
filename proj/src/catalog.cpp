#include "malle/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <array>
#include <stdexcept>

namespace malle {

namespace {

std::shared_ptr<FiniteGroup> make(const std::vector<std::string>& gens) {
  std::vector<Perm> ps;
  for (const auto& s : gens) ps.push_back(parse_perm(s));
  return std::make_shared<FiniteGroup>(FiniteGroup::from_generators(ps));
}

std::shared_ptr<FiniteGroup> cyclic(int n) {
  if (n == 1) return make({"()"});
  std::string g = "(";
  for (int i = 1; i <= n; ++i) g += std::to_string(i) + (i < n ? "," : ")");
  return make({g});
}

std::shared_ptr<FiniteGroup> dihedral(int n) {
  std::string rot = "(";
  for (int i = 1; i <= n; ++i) rot += std::to_string(i) + (i < n ? "," : ")");
  std::string refl;
  for (int j = 2; j <= (n + 1) / 2; ++j) {
    int k = n + 2 - j;
    if (k != j) refl += "(" + std::to_string(j) + "," + std::to_string(k) + ")";
  }
  if (n % 2 == 0) {
    // reflection through vertex 1 and vertex n/2+1 fixes both
  }
  if (refl.empty()) refl = "()";
  return make({rot, refl});
}

std::shared_ptr<FiniteGroup> quaternion8() {
  // regular representation of {1,-1,i,-i,j,-j,k,-k}
  // encode 0..7 = 1,-1,i,-i,j,-j,k,-k
  auto mul = [](int a, int b) -> int {
    auto sign = [](int x) { return x % 2; };      // 0:+ 1:-
    auto unit = [](int x) { return x / 2; };      // 0:1 1:i 2:j 3:k
    static const int tbl[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    // sign from quaternion relations
    static const int sg[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
    int u = tbl[unit(a)][unit(b)];
    int s = (sign(a) + sign(b) + sg[unit(a)][unit(b)]) % 2;
    return 2 * u + s;
  };
  std::vector<Perm> gens;
  for (int g : {2, 4}) { // i and j
    Perm p(8);
    for (int x = 0; x < 8; ++x) p.img[x] = mul(g, x);
    gens.push_back(p);
  }
  return std::make_shared<FiniteGroup>(FiniteGroup::from_generators(gens));
}

std::shared_ptr<FiniteGroup> sl2f3() {
  // action on the 8 nonzero vectors of F_3^2
  std::vector<std::pair<int, int>> pts;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      if (x || y) pts.push_back({x, y});
  auto idx = [&](int x, int y) {
    for (size_t i = 0; i < pts.size(); ++i)
      if (pts[i] == std::make_pair(x, y)) return (int)i;
    throw std::runtime_error("bug");
  };
  auto matperm = [&](int a, int b, int c, int d) {
    Perm p(8);
    for (size_t i = 0; i < pts.size(); ++i) {
      int x = pts[i].first, y = pts[i].second;
      p.img[i] = idx(((a * x + b * y) % 3 + 3) % 3, ((c * x + d * y) % 3 + 3) % 3);
    }
    return p;
  };
  std::vector<Perm> gens{matperm(1, 1, 0, 1), matperm(0, -1, 1, 0)};
  return std::make_shared<FiniteGroup>(FiniteGroup::from_generators(gens));
}

} // namespace

bool catalog_has(const std::string& name) {
  if (name == "V4" || name == "A4" || name == "Q8" || name == "C3wrC2" || name == "SL23")
    return true;
  if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'D' || name[0] == 'S')) {
    for (size_t i = 1; i < name.size(); ++i)
      if (!isdigit((unsigned char)name[i])) return false;
    return true;
  }
  return false;
}

std::shared_ptr<FiniteGroup> catalog_group(const std::string& name) {
  if (name == "V4") return make({"(1,2)(3,4)", "(1,3)(2,4)"});
  if (name == "A4") return make({"(1,2,3)", "(1,2)(3,4)"});
  if (name == "Q8") return quaternion8();
  if (name == "C3wrC2") return make({"(1,2,3)", "(4,5,6)", "(1,4)(2,5)(3,6)"});
  if (name == "SL23") return sl2f3();
  if (!catalog_has(name)) throw std::runtime_error("unknown catalog group: " + name);
  int n = std::stoi(name.substr(1));
  if (name[0] == 'C') return cyclic(n);
  if (name[0] == 'D') {
    if (n < 3) throw std::runtime_error("dihedral needs n >= 3");
    return dihedral(n);
  }
  // S_n
  if (n == 1) return cyclic(1);
  if (n == 2) return cyclic(2);
  std::string cyc = "(";
  for (int i = 1; i <= n; ++i) cyc += std::to_string(i) + (i < n ? "," : ")");
  return make({"(1,2)", cyc});
}

std::vector<std::string> catalog_names_upto(int max_order) {
  std::vector<std::pair<std::string, int>> all = {
      {"C2", 2},  {"C3", 3},  {"C4", 4},  {"C5", 5},   {"C6", 6},       {"C7", 7},
      {"C8", 8},  {"V4", 4},  {"S3", 6},  {"S4", 24},  {"A4", 12},      {"D4", 8},
      {"D5", 10}, {"D6", 12}, {"Q8", 8},  {"C3wrC2", 18}, {"SL23", 24}};
  std::vector<std::string> out;
  for (auto& [n, o] : all)
    if (o <= max_order) out.push_back(n);
  return out;
}

std::map<int, Rat> catalog_artin_character(const std::string& group, const std::string& which,
                                           const FiniteGroup& G) {
  std::map<int, Rat> out;
  const ClassPartition& cp = G.classes();
  auto set = [&](const std::string& rep, const Rat& v) {
    out[cp.class_of[G.index_of(parse_perm(rep))]] = v;
  };
  if (group == "D4" && which == "conductor") {
    // character of the 2-dimensional representation
    set("()", Rat(2));
    set("(1,3)(2,4)", Rat(-2));
    set("(1,3)", Rat(0));
    set("(1,2)(3,4)", Rat(0));
    set("(1,2,3,4)", Rat(0));
    return out;
  }
  if (group == "A4" && which == "conductor") {
    // psi - (chi + chi-bar)/2 on classes (), (12)(34), (123), (132)
    set("()", Rat(2));
    set("(1,2)(3,4)", Rat(-2));
    set("(1,2,3)", Rat(1, 2));
    set("(1,3,2)", Rat(1, 2));
    return out;
  }
  throw std::runtime_error("no bundled artin character for " + group + "/" + which);
}

std::optional<HeightSpec> catalog_fixture(const std::string& group, const std::string& height) {
  HeightSpec hs;
  if (group == "A4" && height == "disc") {
    hs.bad_places[2] = {parse_rat("15/8"), {}};
    hs.bad_places[3] = {parse_rat("14/9"), {}};
    return hs;
  }
  if (group == "A4" && height == "conductor") {
    hs.bad_places[2] = {parse_rat("145/128"), {parse_rat("29/32")}};
    hs.bad_places[3] = {parse_rat("4/3"), {parse_rat("11/9")}};
    return hs;
  }
  return std::nullopt;
}

std::map<long long, BadPlaceData> load_fixture_file(const std::string& path,
                                                    const std::string& group,
                                                    const std::string& height) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture file: " + path);
  std::map<long long, BadPlaceData> out;
  std::string line;
  int ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    std::string s = line.substr(0, line.find('#'));
    std::istringstream ss(s);
    std::string g, h, place, plain;
    if (!(ss >> g)) continue;
    if (!(ss >> h >> place >> plain))
      throw std::runtime_error(path + ":" + std::to_string(ln) + ": need group height place plain");
    if (g != group || h != height) continue;
    BadPlaceData bp;
    bp.plain = parse_rat(plain);
    std::string tw;
    while (ss >> tw) bp.twisted.push_back(parse_rat(tw));
    out[std::stoll(place)] = bp;
  }
  return out;
}

} // namespace malle
