#include "malle/report.hpp"

#include <cstdio>
#include <sstream>

namespace malle {

namespace {

std::string dec(double v) {
  char buf[40];
  snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Json finab_json(const FinAbGroup& g) {
  Json j;
  j["order"] = g.order().get_str();
  Json f = Json::array();
  for (const auto& d : g.factors) f.push_back(d.get_str());
  j["invariant_factors"] = f;
  j["str"] = g.str();
  return j;
}

} // namespace

Json analyze_json(const Problem& pr) {
  Json j;
  j["group"] = pr.group_label;
  j["order"] = pr.G->order();
  j["exponent"] = pr.G->exponent();
  j["height"] = pr.height_label;
  Json classes = Json::array();
  for (int c = 0; c < pr.tcs.count(); ++c) {
    Json cl;
    cl["rep"] = pr.G->element_name(pr.tcs.classes.rep(c));
    cl["size"] = pr.tcs.classes.size(c);
    cl["weight"] = rat_str(pr.L.weight.value[c]);
    classes.push_back(cl);
  }
  j["classes"] = classes;
  Json orbits = Json::array();
  for (const auto& orb : pr.tcs.orbits()) {
    Json o = Json::array();
    for (int c : orb) o.push_back(pr.G->element_name(pr.tcs.classes.rep(c)));
    orbits.push_back(o);
  }
  j["galois_orbits"] = orbits;
  if (pr.L.is_big(pr.tcs)) {
    const FujitaReport& fr = pr.fujita_report;
    j["a"] = rat_str(fr.a);
    j["b"] = fr.b;
    j["balanced"] = fr.balanced;
    Json mc = Json::array();
    for (int c : fr.minimal_classes) mc.push_back(pr.G->element_name(pr.tcs.classes.rep(c)));
    j["minimal_classes"] = mc;
    j["iitaka_group_order"] = fr.iitaka_group->order();
    j["kappa"] = fr.kappa;
    j["identification_dependent"] = fr.identification_dependent;
    int nchars = rational_characters(pr.datum).order();
    j["rational_characters"] = nchars;
    if (fr.balanced) {
      auto ec = effective_cone_constant(fr, nchars);
      j["alpha_star"] = rat_str(ec.alpha_star);
      j["a_pow_b_minus_1_over_chars"] = rat_str(ec.a_pow_b_minus_1_over_chars);
    }
  } else {
    j["big"] = false;
  }
  return j;
}

Json brauer_json(const Problem& pr, const BrauerReport& br) {
  Json j;
  j["group"] = pr.group_label;
  j["height"] = pr.height_label;
  Json sup = Json::array();
  for (int c : br.support) sup.push_back(pr.G->element_name(pr.tcs.classes.rep(c)));
  j["support"] = sup;
  j["algebraic"] = finab_json(br.algebraic.group);
  j["geometric_full_h2"] = finab_json(br.geometric.full_h2);
  j["geometric_cut"] = finab_json(br.geometric.cut);
  j["geometric_invariant"] = finab_json(br.geometric.invariant);
  j["via_sylow"] = br.geometric.via_sylow;
  j["exact"] = br.exact;
  j["total_order_lo"] = br.total_lo.get_str();
  j["total_order_hi"] = br.total_hi.get_str();
  j["total"] = finab_json(br.total);
  Json gens = Json::array();
  for (const auto& g : br.generators) {
    Json gj;
    gj["kind"] = g.algebraic ? "cocycle" : "extension";
    gj["description"] = g.description;
    gj["order"] = g.order;
    Json rj = Json::array();
    for (size_t o = 0; o < br.orbits.size(); ++o) {
      Json oj;
      oj["orbit"] = pr.G->element_name(pr.tcs.classes.rep(br.orbits[o][0]));
      oj["residue"] = g.residues[o].str();
      rj.push_back(oj);
    }
    gj["residues"] = rj;
    gens.push_back(gj);
  }
  j["generators"] = gens;
  return j;
}

Json constant_json(const Problem& pr, const LeadingConstantReport& rep,
                   const LeadingConstantReport* naive) {
  Json j;
  j["group"] = pr.group_label;
  j["height"] = pr.height_label;
  j["a"] = rat_str(rep.a);
  j["b"] = rep.b;
  j["balanced"] = rep.balanced;
  j["alpha_star"] = rat_str(rep.alpha_star);
  j["P"] = rep.P;
  j["mode"] = rep.mode == ConvergenceMode::Zeta ? "zeta" : "artin";
  if (rep.groupoid_factor) j["groupoid_factor"] = rat_str(*rep.groupoid_factor);
  j["identification_dependent"] = rep.identification_dependent;
  Json pieces = Json::array();
  for (const auto& p : rep.pieces) {
    Json pj;
    pj["element"] = p.element;
    pj["slice"] = p.slice;
    pj["prefactor_exact"] = rat_str(p.prefactor);
    pj["prefactor_decimal"] = dec(to_double(p.prefactor));
    Json parts = Json::array();
    for (const auto& [k, v] : p.parts) {
      Json e;
      e["name"] = k;
      e["value"] = rat_str(v);
      parts.push_back(e);
    }
    pj["parts"] = parts;
    pj["tail"] = dec(p.tail);
    pj["contribution"] = dec(p.contribution);
    pieces.push_back(pj);
  }
  j["prefactors"] = pieces;
  Json cs;
  for (const auto& [slice, v] : rep.constant_by_slice) cs[slice] = dec(v);
  j["constant"] = cs;
  j["error_indicator"] = dec(rep.error_indicator);
  if (rep.groupoid_factor)
    j["constant_times_groupoid"] =
        dec(to_double(*rep.groupoid_factor) * rep.constant_by_slice.at("total"));
  if (naive) {
    Json nj;
    for (const auto& [slice, v] : naive->constant_by_slice) nj[slice] = dec(v);
    j["naive_malle_bhargava"] = nj;
  }
  // conditional shares per archimedean point when several exist
  std::vector<std::string> labels;
  for (const auto& [slice, v] : rep.constant_by_slice)
    if (slice != "total") labels.push_back(slice);
  if (labels.size() >= 2) {
    Json shares;
    for (const auto& lab : labels)
      shares[lab] = dec(rep.constant_by_slice.at(lab) / rep.constant_by_slice.at("total"));
    j["conditionals"] = shares;
  }
  return j;
}

namespace {

void render(const Json& j, std::ostringstream& out, int indent) {
  std::string pad(indent, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.value().is_object() || it.value().is_array()) {
        out << pad << it.key() << ":\n";
        render(it.value(), out, indent + 2);
      } else {
        out << pad << it.key() << " = " << (it.value().is_string()
                                                ? it.value().get<std::string>()
                                                : it.value().dump())
            << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        out << pad << "-\n";
        render(v, out, indent + 2);
      } else {
        out << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  }
}

} // namespace

std::string render_table(const Json& j) {
  std::ostringstream out;
  render(j, out, 0);
  return out.str();
}

} // namespace malle
