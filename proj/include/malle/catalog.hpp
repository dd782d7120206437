#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "malle/group.hpp"
#include "malle/picorb.hpp"
#include "malle/tamagawa.hpp"

namespace malle {

// Named groups used throughout: C2..C8 (Cn generally), V4, S3..S6, A4, D4,
// D5, D6 (Dn generally), Q8, C3wrC2, SL23.
std::shared_ptr<FiniteGroup> catalog_group(const std::string& name);
bool catalog_has(const std::string& name);
std::vector<std::string> catalog_names_upto(int max_order);

// Bundled Artin class functions: D4 2-dim conductor, A4 conductor
// psi - (chi + chi-bar)/2. Keyed by class index of the given group.
std::map<int, Rat> catalog_artin_character(const std::string& group, const std::string& which,
                                           const FiniteGroup& G);

// Shipped wild-place fixtures (paper values; overridable via config).
std::optional<HeightSpec> catalog_fixture(const std::string& group, const std::string& height);

// Fixture file: one record per line,
//   <group-id> <height-id> <place> <plain> [<twisted per generator>...]
// with densities as exact fractions. Returns records for the given pair.
std::map<long long, BadPlaceData> load_fixture_file(const std::string& path,
                                                    const std::string& group,
                                                    const std::string& height);

} // namespace malle
