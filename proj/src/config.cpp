#include "malle/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "malle/perm.hpp"

namespace malle {

namespace {

struct Tok {
  std::string text;
  int line;
};

[[noreturn]] void die(const std::string& name, int line, const std::string& msg) {
  throw std::runtime_error(name + ":" + std::to_string(line) + ": " + msg);
}

// splits "a, b, c" at top level commas
std::vector<std::string> split_top(const std::string& s) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  bool instr = false;
  for (char c : s) {
    if (c == '"') instr = !instr;
    if (!instr) {
      if (c == '[' || c == '{') ++depth;
      if (c == ']' || c == '}') --depth;
      if (c == ',' && depth == 0) {
        out.push_back(cur);
        cur.clear();
        continue;
      }
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& name, int line, const std::string& s) {
  std::string t = trim(s);
  if (t.size() >= 2 && t.front() == '"' && t.back() == '"') return t.substr(1, t.size() - 2);
  if (!t.empty() && t.front() != '[' && t.front() != '{') return t; // bare token
  die(name, line, "expected string token, got '" + t + "'");
}

std::vector<std::string> parse_list(const std::string& name, int line, const std::string& s) {
  std::string t = trim(s);
  if (t.empty() || t.front() != '[' || t.back() != ']')
    die(name, line, "expected [list], got '" + t + "'");
  std::vector<std::string> out;
  for (auto& item : split_top(t.substr(1, t.size() - 2))) {
    std::string it = trim(item);
    if (!it.empty()) out.push_back(it);
  }
  return out;
}

std::map<std::string, std::string> parse_map(const std::string& name, int line,
                                             const std::string& s) {
  std::string t = trim(s);
  if (t.empty() || t.front() != '{' || t.back() != '}')
    die(name, line, "expected {map}, got '" + t + "'");
  std::map<std::string, std::string> out;
  for (auto& item : split_top(t.substr(1, t.size() - 2))) {
    std::string it = trim(item);
    if (it.empty()) continue;
    size_t colon = std::string::npos;
    bool instr = false;
    for (size_t i = 0; i < it.size(); ++i) {
      if (it[i] == '"') instr = !instr;
      if (!instr && it[i] == ':') {
        colon = i;
        break;
      }
    }
    if (colon == std::string::npos) die(name, line, "map entry needs ':': '" + it + "'");
    out[unquote(name, line, it.substr(0, colon))] = trim(it.substr(colon + 1));
  }
  return out;
}

} // namespace

ProblemSpec parse_spec_text(const std::string& text, const std::string& name) {
  ProblemSpec ps;
  std::istringstream in(text);
  std::string lineStr;
  int ln = 0;
  std::map<std::string, std::pair<std::string, int>> kv;
  while (std::getline(in, lineStr)) {
    ++ln;
    std::string s = lineStr;
    // strip comments outside strings
    bool instr = false;
    for (size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '"') instr = !instr;
      if (!instr && s[i] == '#') {
        s = s.substr(0, i);
        break;
      }
    }
    s = trim(s);
    if (s.empty()) continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) die(name, ln, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) die(name, ln, "empty key");
    if (kv.count(key)) die(name, ln, "duplicate key '" + key + "'");
    kv[key] = {val, ln};
  }

  auto take = [&](const std::string& key) -> std::optional<std::pair<std::string, int>> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    auto v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("group.name")) ps.group_name = unquote(name, v->second, v->first);
  if (auto v = take("group.generators"))
    for (auto& g : parse_list(name, v->second, v->first)) {
      std::string tok = unquote(name, v->second, g);
      try {
        parse_perm(tok);
      } catch (const std::exception& e) {
        die(name, v->second, e.what());
      }
      ps.generators.push_back(tok);
    }
  if (auto v = take("galois.mode")) ps.galois_mode = unquote(name, v->second, v->first);
  if (auto v = take("galois.gamma_generators"))
    for (auto& g : parse_list(name, v->second, v->first)) {
      std::string tok = unquote(name, v->second, g);
      try {
        parse_perm(tok);
      } catch (const std::exception& e) {
        die(name, v->second, e.what());
      }
      ps.gamma_generators.push_back(tok);
    }
  if (auto v = take("galois.action")) {
    for (auto& entry : parse_list(name, v->second, v->first)) {
      std::vector<std::string> imgs;
      for (auto& s : parse_list(name, v->second, entry)) imgs.push_back(unquote(name, v->second, s));
      ps.action_images.push_back(imgs);
    }
  }
  if (auto v = take("galois.cyc"))
    for (auto& s : parse_list(name, v->second, v->first)) ps.cyc_values.push_back(std::stoll(trim(s)));
  if (auto v = take("galois.conductor")) ps.conductor = std::stoll(trim(v->first));
  if (auto v = take("galois.frobenius"))
    for (auto& [k, val] : parse_map(name, v->second, v->first))
      ps.frobenius[std::stoll(k)] = std::stoll(trim(val));
  if (auto v = take("galois.arch"))
    for (auto& s : parse_list(name, v->second, v->first)) ps.arch.push_back(unquote(name, v->second, s));

  if (auto v = take("height.kind")) ps.height_kind = unquote(name, v->second, v->first);
  if (auto v = take("height.character"))
    for (auto& [k, val] : parse_map(name, v->second, v->first))
      ps.height_character[k] = parse_rat(val);
  if (auto v = take("height.values"))
    for (auto& [k, val] : parse_map(name, v->second, v->first)) ps.height_values[k] = parse_rat(val);
  if (auto v = take("height.chi")) ps.chi_mode = unquote(name, v->second, v->first);

  if (auto v = take("brauer.support")) {
    std::string s = trim(v->first);
    if (!s.empty() && s.front() == '[') {
      ps.support_mode = "list";
      for (auto& it : parse_list(name, v->second, s))
        ps.support_list.push_back(unquote(name, v->second, it));
    } else {
      ps.support_mode = unquote(name, v->second, s);
    }
  }
  if (auto v = take("primes.bound")) ps.primes_bound = std::stoll(trim(v->first));
  if (auto v = take("fixtures.file")) ps.fixtures_file = unquote(name, v->second, v->first);
  if (auto v = take("group.size_cap")) ps.size_cap = std::stoll(trim(v->first));
  if (auto v = take("arch.heights"))
    for (auto& [k, val] : parse_map(name, v->second, v->first)) ps.arch_heights[k] = parse_rat(val);

  // badplaces.<p>.plain / .twisted
  std::vector<std::string> badkeys;
  for (auto& [k, v] : kv)
    if (k.rfind("badplaces.", 0) == 0) badkeys.push_back(k);
  for (auto& k : badkeys) {
    auto v = *take(k);
    std::string rest = k.substr(10);
    size_t dot = rest.find('.');
    if (dot == std::string::npos) die(name, v.second, "badplaces key must be badplaces.<p>.<field>");
    long long p = std::stoll(rest.substr(0, dot));
    std::string field = rest.substr(dot + 1);
    if (field == "plain")
      ps.bad_overrides[p].plain = parse_rat(v.first);
    else if (field == "twisted") {
      for (auto& s : parse_list(name, v.second, v.first))
        ps.bad_overrides[p].twisted.push_back(parse_rat(trim(s)));
    } else {
      die(name, v.second, "unknown badplaces field '" + field + "'");
    }
  }

  if (!kv.empty()) {
    auto& [k, v] = *kv.begin();
    die(name, v.second, "unknown key '" + k + "'");
  }
  return ps;
}

ProblemSpec parse_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec_text(ss.str(), path);
}

std::string serialize_spec(const ProblemSpec& ps) {
  std::ostringstream o;
  if (!ps.group_name.empty()) o << "group.name = \"" << ps.group_name << "\"\n";
  if (!ps.generators.empty()) {
    o << "group.generators = [";
    for (size_t i = 0; i < ps.generators.size(); ++i)
      o << (i ? ", " : "") << '"' << ps.generators[i] << '"';
    o << "]\n";
  }
  o << "galois.mode = \"" << ps.galois_mode << "\"\n";
  if (!ps.gamma_generators.empty()) {
    o << "galois.gamma_generators = [";
    for (size_t i = 0; i < ps.gamma_generators.size(); ++i)
      o << (i ? ", " : "") << '"' << ps.gamma_generators[i] << '"';
    o << "]\n";
    o << "galois.action = [";
    for (size_t i = 0; i < ps.action_images.size(); ++i) {
      o << (i ? ", " : "") << "[";
      for (size_t j = 0; j < ps.action_images[i].size(); ++j)
        o << (j ? ", " : "") << '"' << ps.action_images[i][j] << '"';
      o << "]";
    }
    o << "]\n";
    o << "galois.cyc = [";
    for (size_t i = 0; i < ps.cyc_values.size(); ++i) o << (i ? ", " : "") << ps.cyc_values[i];
    o << "]\n";
    o << "galois.conductor = " << ps.conductor << "\n";
    o << "galois.frobenius = {";
    bool first = true;
    for (auto& [r, s] : ps.frobenius) {
      o << (first ? " " : ", ") << r << ": " << s;
      first = false;
    }
    o << " }\n";
    o << "galois.arch = [";
    for (size_t i = 0; i < ps.arch.size(); ++i) o << (i ? ", " : "") << '"' << ps.arch[i] << '"';
    o << "]\n";
  }
  o << "height.kind = \"" << ps.height_kind << "\"\n";
  auto emit_map = [&](const std::string& key, const std::map<std::string, Rat>& m) {
    if (m.empty()) return;
    o << key << " = {";
    bool first = true;
    for (auto& [k, v] : m) {
      o << (first ? " " : ", ") << '"' << k << "\": " << rat_str(v);
      first = false;
    }
    o << " }\n";
  };
  emit_map("height.character", ps.height_character);
  emit_map("height.values", ps.height_values);
  if (ps.chi_mode != "auto") o << "height.chi = \"" << ps.chi_mode << "\"\n";
  if (ps.support_mode == "list") {
    o << "brauer.support = [";
    for (size_t i = 0; i < ps.support_list.size(); ++i)
      o << (i ? ", " : "") << '"' << ps.support_list[i] << '"';
    o << "]\n";
  } else if (ps.support_mode != "minimal") {
    o << "brauer.support = \"" << ps.support_mode << "\"\n";
  }
  o << "primes.bound = " << ps.primes_bound << "\n";
  if (!ps.fixtures_file.empty()) o << "fixtures.file = \"" << ps.fixtures_file << "\"\n";
  if (ps.size_cap != 10000) o << "group.size_cap = " << ps.size_cap << "\n";
  emit_map("arch.heights", ps.arch_heights);
  for (auto& [p, bp] : ps.bad_overrides) {
    o << "badplaces." << p << ".plain = " << rat_str(bp.plain) << "\n";
    if (!bp.twisted.empty()) {
      o << "badplaces." << p << ".twisted = [";
      for (size_t i = 0; i < bp.twisted.size(); ++i)
        o << (i ? ", " : "") << rat_str(bp.twisted[i]);
      o << "]\n";
    }
  }
  return o.str();
}

bool spec_equal(const ProblemSpec& a, const ProblemSpec& b) {
  auto badeq = [&] {
    if (a.bad_overrides.size() != b.bad_overrides.size()) return false;
    for (auto& [p, bp] : a.bad_overrides) {
      auto it = b.bad_overrides.find(p);
      if (it == b.bad_overrides.end()) return false;
      if (bp.plain != it->second.plain || bp.twisted != it->second.twisted) return false;
    }
    return true;
  };
  return a.group_name == b.group_name && a.generators == b.generators &&
         a.galois_mode == b.galois_mode && a.gamma_generators == b.gamma_generators &&
         a.action_images == b.action_images && a.cyc_values == b.cyc_values &&
         a.conductor == b.conductor && a.frobenius == b.frobenius && a.arch == b.arch &&
         a.height_kind == b.height_kind && a.height_character == b.height_character &&
         a.height_values == b.height_values && a.chi_mode == b.chi_mode &&
         a.support_mode == b.support_mode && a.support_list == b.support_list &&
         a.primes_bound == b.primes_bound && a.arch_heights == b.arch_heights &&
         a.fixtures_file == b.fixtures_file && a.size_cap == b.size_cap && badeq();
}

namespace {

std::vector<int> automorphism_from_gen_images(const FiniteGroup& G, const std::vector<int>& gens,
                                              const std::vector<int>& images) {
  std::vector<int> val(G.order(), -1);
  val[G.id()] = G.id();
  std::vector<int> frontier{G.id()};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier)
      for (size_t i = 0; i < gens.size(); ++i) {
        int y = G.mul(gens[i], x);
        int img = G.mul(images[i], val[x]);
        if (val[y] < 0) {
          val[y] = img;
          next.push_back(y);
        } else if (val[y] != img) {
          throw std::runtime_error("generator images do not define an automorphism");
        }
      }
    frontier = std::move(next);
  }
  for (int x = 0; x < G.order(); ++x)
    if (val[x] < 0) throw std::runtime_error("generators do not generate the group");
  return val;
}

} // namespace

Problem build_problem(const ProblemSpec& ps) {
  Problem pr;
  // group
  if (!ps.group_name.empty()) {
    pr.G = catalog_group(ps.group_name);
    pr.group_label = ps.group_name;
  } else if (!ps.generators.empty()) {
    std::vector<Perm> gens;
    for (auto& s : ps.generators) gens.push_back(parse_perm(s));
    pr.G = std::make_shared<FiniteGroup>(FiniteGroup::from_generators(gens, (int)ps.size_cap));
    pr.group_label = "custom";
  } else {
    throw std::runtime_error("spec needs group.name or group.generators");
  }

  // galois datum
  if (ps.galois_mode == "constant-over-Q") {
    pr.datum = constant_datum_over_Q(pr.G);
  } else if (ps.galois_mode == "explicit") {
    std::vector<Perm> ggens;
    for (auto& s : ps.gamma_generators) ggens.push_back(parse_perm(s));
    auto gamma = std::make_shared<FiniteGroup>(FiniteGroup::from_generators(ggens));
    std::vector<int> gidx;
    for (auto& s : ps.gamma_generators) gidx.push_back(gamma->index_of(parse_perm(s)));
    // automorphisms from images of the G-generators
    std::vector<int> gg;
    for (auto& s : ps.generators.empty() ? std::vector<std::string>{} : ps.generators)
      gg.push_back(pr.G->index_of(parse_perm(s)));
    if (gg.empty()) throw std::runtime_error("explicit galois mode needs group.generators");
    std::vector<std::vector<int>> autos;
    for (auto& imgs : ps.action_images) {
      std::vector<int> im;
      for (auto& s : imgs) im.push_back(pr.G->index_of(parse_perm(s)));
      autos.push_back(automorphism_from_gen_images(*pr.G, gg, im));
    }
    std::vector<int> frob(ps.conductor, -1);
    for (auto& [r, s] : ps.frobenius) frob[r] = (int)s;
    std::vector<ArchPlace> arch;
    for (auto& s : ps.arch) {
      if (s == "complex")
        arch.push_back({false, 0});
      else if (s.rfind("real:", 0) == 0)
        arch.push_back({true, gamma->index_of(parse_perm(s.substr(5)))});
      else
        throw std::runtime_error("arch entry must be 'complex' or 'real:<perm>'");
    }
    pr.datum = explicit_datum(pr.G, gamma, gidx, autos, ps.cyc_values, ps.conductor, frob, arch);
  } else {
    throw std::runtime_error("unknown galois.mode: " + ps.galois_mode);
  }
  pr.tcs = twisted_classes(pr.datum);

  // height
  const ClassPartition& cp = pr.G->classes();
  auto class_of_rep = [&](const std::string& rep) {
    return cp.class_of[pr.G->index_of(parse_perm(rep))];
  };
  WeightFunction w;
  if (ps.height_kind == "disc") {
    w = builtin_weight(HeightKind::Disc, pr.datum);
    pr.height_label = "disc";
  } else if (ps.height_kind == "radical") {
    w = builtin_weight(HeightKind::Radical, pr.datum);
    pr.height_label = "radical";
  } else if (ps.height_kind == "artin") {
    std::map<int, Rat> psi;
    if (!ps.height_character.empty()) {
      for (auto& [rep, v] : ps.height_character) {
        int c = class_of_rep(rep);
        auto it = psi.find(c);
        if (it != psi.end() && it->second != v)
          throw std::runtime_error("artin class function not conjugation-invariant at " + rep);
        psi[c] = v;
      }
    } else {
      psi = catalog_artin_character(pr.group_label, "conductor", *pr.G);
    }
    w = builtin_weight(HeightKind::Artin, pr.datum, psi);
    pr.height_label = "conductor";
  } else if (ps.height_kind == "explicit") {
    w.value.assign(cp.count(), Rat(0));
    for (auto& [rep, v] : ps.height_values) w.value[class_of_rep(rep)] = v;
    pr.height_label = "explicit";
  } else {
    throw std::runtime_error("unknown height.kind: " + ps.height_kind);
  }

  // character: trivial when integral, otherwise search
  std::vector<int> full;
  for (int c = 0; c < pr.tcs.count(); ++c)
    if (c != pr.tcs.identity_class) full.push_back(c);
  Character chi;
  chi.val.assign(pr.G->order(), Rat(0));
  bool integral = true;
  for (int c : full)
    if (!is_integer(w.value[c])) integral = false;
  if (!integral || ps.chi_mode == "auto") {
    CharacterGroup all = pr.G->one_dim_characters();
    std::vector<Rat> wv;
    for (int c : full) wv.push_back(w.value[c]);
    auto matches = matching_characters(all, cp, full, wv);
    if (matches.empty())
      throw std::runtime_error("no character matches the weight residues (invalid bundle)");
    chi = matches[0];
    // prefer trivial when valid
    for (auto& m : matches)
      if (m.is_trivial()) chi = m;
  }
  pr.L = validate_bundle(chi, w, pr.tcs, pr.datum, full);
  if (pr.L.is_big(pr.tcs)) pr.fujita_report = fujita(pr.L, pr.tcs, pr.datum);

  // brauer support
  if (ps.support_mode == "minimal")
    pr.support = pr.fujita_report.minimal_classes;
  else if (ps.support_mode == "all")
    pr.support = full;
  else {
    for (auto& rep : ps.support_list) pr.support.push_back(class_of_rep(rep));
    std::sort(pr.support.begin(), pr.support.end());
  }

  // heights: builtin fixtures, then a fixture file, then per-key overrides
  if (auto fx = catalog_fixture(pr.group_label, pr.height_label)) pr.heights = *fx;
  if (!ps.fixtures_file.empty())
    for (auto& [p, bp] : load_fixture_file(ps.fixtures_file, pr.group_label, pr.height_label))
      pr.heights.bad_places[p] = bp;
  for (auto& [p, bp] : ps.bad_overrides) pr.heights.bad_places[p] = bp;
  pr.heights.arch_heights = ps.arch_heights;
  pr.primes_bound = ps.primes_bound;
  return pr;
}

} // namespace malle
