// Command-line front end: perimeter, capacity, symmetrize, cheeger, verify
// and trace subcommands over polytope JSON inputs.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "affbv/capacity.hpp"
#include "affbv/cheeger.hpp"
#include "affbv/functionals.hpp"
#include "affbv/io.hpp"
#include "affbv/symmetrize.hpp"
#include "affbv/verify.hpp"

using namespace affbv;

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::cout << text;
  else
    save_text(out_path, text);
}

Vec parse_direction(const std::string& s) {
  Vec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if (v.size() < 2) throw ParseError("direction needs at least two components");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"affine BV perimeters, capacities, Steiner symmetrization and Cheeger constants"};
  app.require_subcommand(1);
  app.fallthrough();

  Engine eng;
  std::string out_path;
  std::string format = "json";
  app.add_option("--order", eng.quad_order, "quadrature order for n >= 3");
  app.add_option("--ball-segments", eng.ball_segments_2d, "segments in 2D ball approximations");
  app.add_option("--icosphere-level", eng.icosphere_level, "subdivision level of 3D ball approximations");
  app.add_option("--workers", eng.workers, "worker-count hint");
  double tol_both = -1.0;
  app.add_option("--tol", tol_both, "set both tolerances at once");
  app.add_option("--tol-abs", eng.tol.abs, "absolute tolerance");
  app.add_option("--tol-rel", eng.tol.rel, "relative tolerance");
  app.add_option("--out", out_path, "write the report to a file instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  // perimeter
  auto* cmd_per = app.add_subcommand("perimeter", "inequality report for a polytope");
  std::string per_input;
  cmd_per->add_option("input", per_input, "polytope JSON")->required();

  // capacity
  auto* cmd_cap = app.add_subcommand("capacity", "affine BV-capacity (exact or bracket)");
  std::string cap_input;
  bool cap_convex = false, cap_bracket = false;
  std::string cap_family = "all";
  uint64_t cap_seed = 0;
  cmd_cap->add_option("input", cap_input, "polytope JSON")->required();
  cmd_cap->add_flag("--convex", cap_convex, "require the exact convex path");
  cmd_cap->add_flag("--bracket", cap_bracket, "force the bracket search");
  cmd_cap->add_option("--family", cap_family, "grid|offset|search|all")
      ->check(CLI::IsMember({"grid", "offset", "search", "all"}));
  cmd_cap->add_option("--seed", cap_seed, "search seed");

  // symmetrize
  auto* cmd_sym = app.add_subcommand("symmetrize", "Steiner symmetrization");
  std::string sym_input, sym_dir = "0,1", sym_trace;
  int sym_steps = 0;
  cmd_sym->add_option("input", sym_input, "polytope JSON")->required();
  cmd_sym->add_option("--direction", sym_dir, "comma-separated direction");
  cmd_sym->add_option("--steps", sym_steps, "iterate this many alternating steps");
  cmd_sym->add_option("--trace", sym_trace, "CSV trace output path (with --steps)");

  // cheeger
  auto* cmd_che = app.add_subcommand("cheeger", "affine q-Cheeger constant of a planar domain");
  std::string che_input, che_mode = "set";
  double che_q = 1.0, che_p = 1.0, che_h = 0.1;
  int che_iters = 200;
  uint64_t che_seed = 0;
  cmd_che->add_option("input", che_input, "domain polygon JSON")->required();
  cmd_che->add_option("--q", che_q, "exponent q in [1, 2)");
  cmd_che->add_option("--p", che_p, "Sobolev exponent p");
  cmd_che->add_option("--mode", che_mode, "set|function|both")
      ->check(CLI::IsMember({"set", "function", "both"}));
  cmd_che->add_option("--mesh-h", che_h, "target mesh size");
  cmd_che->add_option("--iters", che_iters, "descent iterations");
  cmd_che->add_option("--seed", che_seed, "seed");

  // verify
  auto* cmd_ver = app.add_subcommand("verify", "random-corpus inequality suite");
  std::string ver_corpus = "random";
  int ver_count = 50;
  uint64_t ver_seed = 7;
  cmd_ver->add_option("--corpus", ver_corpus, "corpus kind (random)");
  cmd_ver->add_option("--count", ver_count, "number of convex polygons");
  cmd_ver->add_option("--seed", ver_seed, "corpus seed");

  // trace
  auto* cmd_tr = app.add_subcommand("trace", "discrete-measure trace constants");
  std::string tr_input, tr_family = "disks";
  double tr_q = 1.0, tr_rmin = 0.5, tr_rmax = 4.0;
  int tr_steps = 8;
  cmd_tr->add_option("input", tr_input, "measure JSON {points, masses}")->required();
  cmd_tr->add_option("--q", tr_q, "exponent q in [1, n/(n-1)]");
  cmd_tr->add_option("--family", tr_family, "disks|boxes|both")
      ->check(CLI::IsMember({"disks", "boxes", "both"}));
  cmd_tr->add_option("--rmin", tr_rmin, "smallest family radius");
  cmd_tr->add_option("--rmax", tr_rmax, "largest family radius");
  cmd_tr->add_option("--steps", tr_steps, "family size per kind");

  CLI11_PARSE(app, argc, argv);
  if (tol_both > 0) {
    eng.tol.abs = tol_both;
    eng.tol.rel = tol_both;
  }

  try {
    if (*cmd_per) {
      Polytope P = load_polytope(per_input);
      PerimeterReport r = inequality_report(P, eng);
      if (format == "csv")
        emit(report_csv_header() + report_to_csv_row(r), out_path);
      else
        emit(report_to_json(r).dump(2) + "\n", out_path);
      return 0;
    }

    if (*cmd_cap) {
      Polytope P = load_polytope(cap_input);
      if (cap_convex && !cap_bracket) {
        double c = capacity_convex(P, eng);
        Json j;
        j["capacity"] = jnum(c);
        j["exact"] = true;
        emit(j.dump(2) + "\n", out_path);
        return 0;
      }
      CandidateFamily fam;
      fam.seed = cap_seed;
      if (cap_family == "grid") fam.offsets = fam.local_search = false;
      if (cap_family == "offset") fam.grid = fam.local_search = false;
      if (cap_family == "search") fam.grid = fam.offsets = false;
      CapacityBracket br = capacity_bracket(P, fam, eng);
      emit(bracket_to_json(br).dump(2) + "\n", out_path);
      return 0;
    }

    if (*cmd_sym) {
      Polytope P = load_polytope(sym_input);
      Vec u = parse_direction(sym_dir);
      if (sym_steps > 0) {
        // golden-angle direction schedule; axis-aligned cycles can be exact
        // symmetries of the input and then the trace is constant
        std::vector<Vec> dirs;
        double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < std::max(1, sym_steps); ++k) {
          if (P.dim == 2)
            dirs.push_back(Vec{std::cos(k * golden), std::sin(k * golden)});
          else
            dirs.push_back(normalized(Vec{std::cos(k * golden), std::sin(k * golden),
                                          0.5 * std::cos(k * 0.71 + 0.3)}));
        }
        auto rows = iterate_symmetrization(P, dirs, sym_steps, eng);
        if (!sym_trace.empty()) save_text(sym_trace, symmetrization_trace_csv(rows));
        Json j;
        j["steps"] = sym_steps;
        j["final_P_BVd"] = jnum(rows.back().affine);
        j["final_petty_ratio"] = jnum(rows.back().petty_ratio);
        emit(j.dump(2) + "\n", out_path);
        return 0;
      }
      SteinerResult r = verify_monotonicity(P, u, eng);
      emit(steiner_to_json(r).dump(2) + "\n", out_path);
      return 0;
    }

    if (*cmd_che) {
      Polytope O = load_polytope(che_input);
      Json j;
      if (che_mode == "set" || che_mode == "both") {
        CheegerConfig cfg;
        CheegerResult r = affine_cheeger(O, che_q, cfg, che_seed, eng);
        j["set"] = cheeger_to_json(r);
      }
      if (che_mode == "function" || che_mode == "both") {
        DomainMesh mesh = build_mesh(O, che_h);
        RayleighMinimum rm = minimize_rayleigh(mesh, che_p, che_q, che_iters, che_seed, eng);
        Json jf;
        jf["value"] = jnum(rm.value);
        jf["converged"] = rm.converged;
        jf["iterations"] = static_cast<int>(rm.trace.size()) - 1;
        j["function"] = jf;
      }
      emit(j.dump(2) + "\n", out_path);
      return 0;
    }

    if (*cmd_ver) {
      VerifyOptions opt;
      opt.seed = ver_seed;
      opt.convex_2d = ver_count;
      opt.nonconvex_2d = std::max(4, ver_count / 2);
      VerifyReport rep = run_verify(opt, eng);
      emit(rep.text(), out_path);
      return rep.all_pass() ? 0 : 1;
    }

    if (*cmd_tr) {
      std::ifstream in(tr_input);
      if (!in) throw ParseError("cannot open input file: " + tr_input);
      Json jm;
      try {
        jm = Json::parse(in);
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("JSON parse error in ") + tr_input + ": " + e.what());
      }
      DiscreteMeasure mu = measure_from_json(jm);
      std::vector<Polytope> family;
      for (int k = 0; k < tr_steps; ++k) {
        double r = tr_rmin * std::pow(tr_rmax / tr_rmin, tr_steps > 1 ? double(k) / (tr_steps - 1) : 0.0);
        if (tr_family == "disks" || tr_family == "both")
          family.push_back(regular_polygon(256, r));
        if (tr_family == "boxes" || tr_family == "both")
          family.push_back(box(Vec{-r, -r}, Vec{r, r}));
      }
      TraceConstants tc = trace_constants(mu, tr_q, family, eng);
      emit(trace_to_json(tc).dump(2) + "\n", out_path);
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidPolytopeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DivergentIntegralError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
