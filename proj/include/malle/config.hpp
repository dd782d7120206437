#pragma once

#include <map>
#include <string>
#include <vector>

#include "malle/brauer.hpp"
#include "malle/catalog.hpp"
#include "malle/constants.hpp"
#include "malle/galois.hpp"
#include "malle/picorb.hpp"
#include "malle/tamagawa.hpp"

namespace malle {

// Declarative problem description (see specs/ for examples). Tree-structured
// text: one `key.path = value` per line, values are quoted strings, rationals,
// [lists] or { maps }.
struct ProblemSpec {
  std::string group_name;
  std::vector<std::string> generators;

  std::string galois_mode = "constant-over-Q";
  std::vector<std::string> gamma_generators;               // explicit mode
  std::vector<std::vector<std::string>> action_images;     // per gamma generator: images of G generators
  std::vector<long long> cyc_values;
  long long conductor = 0;
  std::map<long long, long long> frobenius;                 // residue -> gamma element order-index
  std::vector<std::string> arch;                            // "real:<perm>" | "complex"

  std::string height_kind = "disc";
  std::map<std::string, Rat> height_character; // artin class function by class rep
  std::map<std::string, Rat> height_values;    // explicit weights by class rep
  std::string chi_mode = "auto";               // "trivial" | "auto" | explicit character values

  std::string support_mode = "minimal"; // "minimal" | "all" | "list"
  std::vector<std::string> support_list;

  long long primes_bound = 100000;
  std::map<long long, BadPlaceData> bad_overrides;
  std::map<std::string, Rat> arch_heights;
  std::string fixtures_file;
  long long size_cap = 10000;
};

ProblemSpec parse_spec(const std::string& path);
ProblemSpec parse_spec_text(const std::string& text, const std::string& name = "<string>");
std::string serialize_spec(const ProblemSpec& ps);
bool spec_equal(const ProblemSpec& a, const ProblemSpec& b);

// Realized objects.
struct Problem {
  std::shared_ptr<FiniteGroup> G;
  GaloisDatum datum;
  TwistedClassSet tcs;
  OrbifoldLineBundle L;
  FujitaReport fujita_report;
  HeightSpec heights;
  std::vector<int> support;
  std::string group_label;
  std::string height_label;
  long long primes_bound = 100000;
};

Problem build_problem(const ProblemSpec& ps);

} // namespace malle
