// Seeded random-corpus verification of the inequality and invariance suite.

#ifndef AFFBV_VERIFY_HPP
#define AFFBV_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "affbv/core.hpp"

namespace affbv {

struct VerifyOptions {
  uint64_t seed = 7;
  int convex_2d = 50;
  int nonconvex_2d = 20;
  int convex_3d = 8;
  int steiner_pairs = 25;
  int steiner_polyhedra = 5;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double worst = 0;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;

  bool all_pass() const;
  std::string text() const;  // deterministic, one line per check
};

VerifyReport run_verify(const VerifyOptions& opt, const Engine& eng);

}  // namespace affbv

#endif
