#include "affbv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace affbv {

double round_sig(double x, int digits) {
  if (!std::isfinite(x)) return x;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return std::strtod(buf, nullptr);
}

Json jnum(double x) {
  if (std::isinf(x)) return x > 0 ? Json("inf") : Json("-inf");
  return Json(round_sig(x));
}

namespace {

Vec vec_from_json(const Json& j) {
  if (!j.is_array()) throw ParseError("expected a coordinate array");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number()) throw ParseError("coordinates must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

Json vec_to_json(const Vec& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

}  // namespace

Polytope polytope_from_json(const Json& j) {
  if (!j.contains("dimension") || !j["dimension"].is_number_integer())
    throw ParseError("polytope: missing integer field 'dimension'");
  int n = j["dimension"].get<int>();
  if (n < 2 || n > 6) throw ParseError("polytope: dimension must be in [2, 6]");
  if (!j.contains("vertices") || !j["vertices"].is_array() || j["vertices"].empty())
    throw ParseError("polytope: missing non-empty field 'vertices'");
  std::vector<Vec> verts;
  for (const auto& jv : j["vertices"]) {
    Vec v = vec_from_json(jv);
    if (static_cast<int>(v.size()) != n)
      throw ParseError("polytope: vertex arity does not match 'dimension'");
    verts.push_back(v);
  }

  if (j.contains("loops")) {
    if (n != 2) throw ParseError("polytope: 'loops' only applies to dimension 2");
    std::vector<std::vector<Vec>> loops;
    for (const auto& jl : j["loops"]) {
      std::vector<Vec> loop;
      for (const auto& ji : jl) {
        int id = ji.get<int>();
        if (id < 0 || id >= static_cast<int>(verts.size()))
          throw ParseError("polytope: loop index out of range");
        loop.push_back(verts[id]);
      }
      loops.push_back(loop);
    }
    Polytope P = make_polygon_multi(loops);
    validate(P);
    return P;
  }

  if (j.contains("facets")) {
    Polytope P;
    P.dim = n;
    P.vertices = verts;
    for (const auto& jf : j["facets"]) {
      Facet f;
      if (!jf.contains("normal") || !jf.contains("measure"))
        throw ParseError("polytope: facet requires 'normal' and 'measure'");
      f.normal = vec_from_json(jf["normal"]);
      if (static_cast<int>(f.normal.size()) != n)
        throw ParseError("polytope: facet normal arity mismatch");
      f.measure = jf["measure"].get<double>();
      f.offset = jf.value("offset", 0.0);
      if (jf.contains("vertices"))
        for (const auto& ji : jf["vertices"]) {
          int id = ji.get<int>();
          if (id < 0 || id >= static_cast<int>(verts.size()))
            throw ParseError("polytope: facet vertex index out of range");
          f.vertex_ids.push_back(id);
        }
      P.facets.push_back(f);
    }
    validate(P);
    return P;
  }

  // No facets given: convex case, or a flat set when the hull degenerates.
  try {
    Polytope P = convex_hull(verts);
    validate(P);
    return P;
  } catch (const DegenerateInputError&) {
    return make_flat(n, verts);
  }
}

Json polytope_to_json(const Polytope& P) {
  Json j;
  j["dimension"] = P.dim;
  Json jv = Json::array();
  for (const Vec& v : P.vertices) jv.push_back(vec_to_json(v));
  j["vertices"] = jv;
  if (!P.facets.empty()) {
    Json jf = Json::array();
    for (const Facet& f : P.facets) {
      Json e;
      e["normal"] = vec_to_json(f.normal);
      e["measure"] = jnum(f.measure);
      e["offset"] = jnum(f.offset);
      if (!f.vertex_ids.empty()) e["vertices"] = f.vertex_ids;
      jf.push_back(e);
    }
    j["facets"] = jf;
  }
  return j;
}

Polytope load_polytope(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open input file: " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("JSON parse error in ") + path + ": " + e.what());
  }
  return polytope_from_json(j);
}

void save_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open output file: " + path);
  out << text;
}

Json report_to_json(const PerimeterReport& r) {
  Json j;
  j["V"] = jnum(r.V);
  j["P_BV"] = jnum(r.P_BV);
  j["P_BVd"] = jnum(r.P_BVd);
  j["V_polar"] = jnum(r.V_polar);
  j["petty_ratio"] = jnum(r.petty_ratio);
  j["iso_classical"] = jnum(r.iso_classical);
  j["iso_affine"] = jnum(r.iso_affine);
  j["slack_e12P"] = jnum(r.slack_e12P);
  return j;
}

std::string report_csv_header() {
  return "V,P_BV,P_BVd,V_polar,petty_ratio,iso_classical,iso_affine,slack_e12P\n";
}

namespace {

std::string fmt12(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

std::string report_to_csv_row(const PerimeterReport& r) {
  std::ostringstream os;
  os << fmt12(r.V) << ',' << fmt12(r.P_BV) << ',' << fmt12(r.P_BVd) << ',' << fmt12(r.V_polar)
     << ',' << fmt12(r.petty_ratio) << ',' << fmt12(r.iso_classical) << ',' << fmt12(r.iso_affine)
     << ',' << fmt12(r.slack_e12P) << '\n';
  return os.str();
}

Json bracket_to_json(const CapacityBracket& b) {
  Json j;
  j["lower"] = jnum(b.lower);
  j["upper"] = jnum(b.upper);
  j["exact"] = b.exact;
  if (!b.note.empty()) j["note"] = b.note;
  if (b.lower_witness.dim > 0) j["lower_witness"] = polytope_to_json(b.lower_witness);
  if (b.upper_witness.dim > 0) j["upper_witness"] = polytope_to_json(b.upper_witness);
  return j;
}

Json steiner_to_json(const SteinerResult& s, bool include_output) {
  Json j;
  j["direction"] = vec_to_json(s.direction);
  j["volume_before"] = jnum(s.volume_before);
  j["volume_after"] = jnum(s.volume_after);
  j["affine_perimeter_before"] = jnum(s.affine_before);
  j["affine_perimeter_after"] = jnum(s.affine_after);
  j["classical_perimeter_before"] = jnum(s.classical_before);
  j["classical_perimeter_after"] = jnum(s.classical_after);
  j["perturbation_angle"] = jnum(s.perturbation_angle);
  j["affine_monotone"] = s.affine_monotone;
  j["classical_monotone"] = s.classical_monotone;
  j["volume_preserved"] = s.volume_preserved;
  if (!s.diagnostic.empty()) j["diagnostic"] = s.diagnostic;
  if (include_output) j["output"] = polytope_to_json(s.output);
  return j;
}

Json cheeger_to_json(const CheegerResult& c, bool include_witness) {
  Json j;
  j["q"] = jnum(c.q);
  j["value"] = jnum(c.value);
  j["classical_value"] = jnum(c.classical_value);
  j["boundary_contact_distance"] = jnum(c.boundary_contact_distance);
  j["converged"] = c.converged;
  if (include_witness) j["witness"] = polytope_to_json(c.witness);
  return j;
}

Json trace_to_json(const TraceConstants& t) {
  Json j;
  j["q"] = jnum(t.q);
  j["kappa2_hat"] = jnum(t.kappa2_hat);
  j["kappa3_hat"] = jnum(t.kappa3_hat);
  j["feasibility_slack"] = jnum(t.feasibility_slack);
  return j;
}

Json cross_to_json(const CrossReport& c) {
  Json j;
  j["cap_E"] = jnum(c.cap_E);
  j["cap_F"] = jnum(c.cap_F);
  j["sum"] = jnum(c.sum);
  j["p_G"] = jnum(c.p_G);
  j["bracket_lower"] = jnum(c.bracket_lower);
  j["superadditive"] = c.superadditive;
  j["verdict"] = c.verdict;
  return j;
}

std::string symmetrization_trace_csv(const std::vector<SymmetrizationTraceRow>& rows) {
  std::ostringstream os;
  os << "step,P_BVd,P_BV,petty_ratio\n";
  for (const auto& r : rows)
    os << r.step << ',' << fmt12(r.affine) << ',' << fmt12(r.classical) << ','
       << fmt12(r.petty_ratio) << '\n';
  return os.str();
}

DiscreteMeasure measure_from_json(const Json& j) {
  if (!j.contains("points") || !j.contains("masses"))
    throw ParseError("measure: requires 'points' and 'masses'");
  DiscreteMeasure mu;
  for (const auto& jp : j["points"]) mu.points.push_back(vec_from_json(jp));
  for (const auto& jm : j["masses"]) mu.masses.push_back(jm.get<double>());
  if (mu.points.size() != mu.masses.size())
    throw ParseError("measure: points/masses length mismatch");
  return mu;
}

}  // namespace affbv
