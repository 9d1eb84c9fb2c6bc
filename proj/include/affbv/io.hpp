// Polytope JSON schema, report serialization (12 significant digits), CSV.

#ifndef AFFBV_IO_HPP
#define AFFBV_IO_HPP

#include <string>

#include <json.hpp>

#include "affbv/capacity.hpp"
#include "affbv/cheeger.hpp"
#include "affbv/functionals.hpp"
#include "affbv/geometry.hpp"
#include "affbv/symmetrize.hpp"

namespace affbv {

using Json = nlohmann::ordered_json;

struct ParseError : Error {
  using Error::Error;
};

/// Round to 12 significant digits so serialized runs diff bit-identically.
double round_sig(double x, int digits = 12);
Json jnum(double x);

/// {"dimension": n, "vertices": [[...],...], "facets"?: [{"normal", "measure",
/// "offset", "vertices"?}], "loops"?: [[i,...],...]}. Facets absent + convex
/// vertex set: facets come from the hull. "loops" (2D) and per-facet vertex
/// indices carry non-convex incidence.
Polytope polytope_from_json(const Json& j);
Json polytope_to_json(const Polytope& P);

Polytope load_polytope(const std::string& path);
void save_text(const std::string& path, const std::string& text);

Json report_to_json(const PerimeterReport& r);
std::string report_csv_header();
std::string report_to_csv_row(const PerimeterReport& r);

Json bracket_to_json(const CapacityBracket& b);
Json steiner_to_json(const SteinerResult& s, bool include_output = true);
Json cheeger_to_json(const CheegerResult& c, bool include_witness = true);
Json trace_to_json(const TraceConstants& t);
Json cross_to_json(const CrossReport& c);
std::string symmetrization_trace_csv(const std::vector<SymmetrizationTraceRow>& rows);

DiscreteMeasure measure_from_json(const Json& j);

}  // namespace affbv

#endif
